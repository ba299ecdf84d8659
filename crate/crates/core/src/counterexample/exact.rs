//! Exact truncation residuals for the projection family.
//!
//! Every coordinate square is `c^{2i} = 2^{-i}`, and every vector in the
//! family is a restriction of `f` to an index set, so all inner products are
//! dyadic rationals. Norms, inner-product identities and Frobenius norms of
//! `Σ α uvᵀ` expressions are therefore computed here without rounding; what
//! remains is the error caused by truncating at length `len` alone.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::keeps;

/// Restriction of `f` to an index set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    F,
    G(u32),
    H(u32),
}

impl Part {
    fn contains(self, i: usize) -> bool {
        match self {
            Part::F => true,
            Part::G(m) => keeps(i, m),
            Part::H(m) => !keeps(i, m),
        }
    }
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

/// `Σ 2^{-i}` over `1 ≤ i ≤ len` in both supports.
pub fn dot(len: usize, a: Part, b: Part) -> BigRational {
    let mut num = BigUint::zero();
    for i in 1..=len {
        if a.contains(i) && b.contains(i) {
            num.set_bit((len - i) as u64, true);
        }
    }
    BigRational::new(BigInt::from(num), pow2(len as u64))
}

pub fn norm_sq(len: usize, a: Part) -> BigRational {
    dot(len, a, a)
}

/// `(t + 1)^{-1}` and `t (t + 1)^{-1}` with `t = 2^{-2^m}`.
pub fn closed_form_norms(m: u32) -> (BigRational, BigRational) {
    let big = pow2(1u64 << m);
    let denom = &big + BigInt::one();
    (
        BigRational::new(big, denom.clone()),
        BigRational::new(BigInt::one(), denom),
    )
}

/// `|x|` as `f64`, accurate for tiny values that would underflow a direct conversion.
pub fn abs_to_f64(x: &BigRational) -> f64 {
    sqrt_to_f64(&(x * x))
}

/// `√x` as `f64` for a nonnegative rational.
pub fn sqrt_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let x = x.abs();
    let gap = x.denom().bits() as i64 - x.numer().bits() as i64;
    // bring x into the normal f64 range by an even power of two
    let half = (gap / 2).max(0) as u64;
    let scaled = &x * BigRational::from_integer(pow2(2 * half));
    let root = scaled.to_f64().unwrap_or(0.0).sqrt();
    root * (-(half as f64)).exp2()
}

/// `Σ coef · u vᵀ` over parts.
#[derive(Clone, Debug, Default)]
pub struct Structured {
    terms: Vec<(BigRational, Part, Part)>,
}

impl Structured {
    /// `f fᵀ`
    pub fn p() -> Self {
        Self {
            terms: vec![(BigRational::one(), Part::F, Part::F)],
        }
    }

    /// `g gᵀ / |g|² + h hᵀ / |h|²` with truncated norms.
    pub fn q(len: usize, m: u32) -> Self {
        let g = Part::G(m);
        let h = Part::H(m);
        Self {
            terms: vec![
                (norm_sq(len, g).recip(), g, g),
                (norm_sq(len, h).recip(), h, h),
            ],
        }
    }

    pub fn mul(&self, other: &Self, len: usize) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (c1, u1, v1) in &self.terms {
            for (c2, u2, v2) in &other.terms {
                let inner = dot(len, *v1, *u2);
                if !inner.is_zero() {
                    terms.push((c1 * c2 * inner, *u1, *v2));
                }
            }
        }
        Self { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|(c, u, v)| (-c.clone(), *u, *v)));
        Self { terms }
    }

    /// `‖Σ c_k u_k v_kᵀ‖_F² = Σ_{k,l} c_k c_l (u_k·u_l)(v_k·v_l)`.
    pub fn frobenius_sq(&self, len: usize) -> BigRational {
        let mut total = BigRational::zero();
        for (ck, uk, vk) in &self.terms {
            for (cl, ul, vl) in &self.terms {
                total += ck * cl * dot(len, *uk, *ul) * dot(len, *vk, *vl);
            }
        }
        total
    }

    pub fn frobenius(&self, len: usize) -> f64 {
        sqrt_to_f64(&self.frobenius_sq(len))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_norm_is_one_minus_tail() {
        let n = norm_sq(10, Part::F);
        assert_eq!(n, BigRational::new(BigInt::from(1023), BigInt::from(1024)));
    }

    #[test]
    fn split_norms_add_up() {
        for m in 1..4 {
            let total = norm_sq(64, Part::G(m)) + norm_sq(64, Part::H(m));
            assert_eq!(total, norm_sq(64, Part::F));
        }
    }

    #[test]
    fn closed_forms_for_m1() {
        let (g, h) = closed_form_norms(1);
        assert_eq!(g, BigRational::new(BigInt::from(4), BigInt::from(5)));
        assert_eq!(h, BigRational::new(BigInt::from(1), BigInt::from(5)));
    }

    #[test]
    fn tiny_values_survive_conversion() {
        let x = BigRational::new(BigInt::one(), pow2(1100));
        let got = sqrt_to_f64(&x);
        assert!((got / (-550f64).exp2() - 1.0).abs() < 1e-15);
        let y = BigRational::new(BigInt::from(9), BigInt::from(4));
        assert_eq!(sqrt_to_f64(&y), 1.5);
        assert_eq!(abs_to_f64(&-y), 2.25);
    }

    #[test]
    fn projection_defect_of_p_is_the_tail() {
        let len = 20;
        let p = Structured::p();
        let defect = p.mul(&p, len).sub(&p).frobenius(len);
        let tail = (-(len as f64)).exp2();
        let expected = tail * (1.0 - tail);
        assert!((defect - expected).abs() <= 1e-15 * expected);
    }

    #[test]
    fn q_is_exactly_idempotent() {
        let q = Structured::q(32, 2);
        assert!(q.mul(&q, 32).sub(&q).frobenius_sq(32).is_zero());
    }
}
