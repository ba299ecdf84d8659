//! Rescaling indecomposable semigroups with binary diagonals to 0/1 matrices.

use super::analysis::{
    generator_dim, indecomposability_witness, rescale_by, semigroup_scaling, DominationCertificate,
};
use super::closure::{generate_inspected, ClosureOptions, CompositionRule, SemigroupClosure};
use crate::error::{Error, Result};
use crate::matrix::NonnegMatrix;
use crate::scaling::{ScalingVector, DEFAULT_ABS_TOL};

#[derive(Clone, Debug, PartialEq)]
pub struct BinaryRescaling {
    pub d: ScalingVector,
    pub certificate: DominationCertificate,
    pub closure: SemigroupClosure,
    /// `D⁻¹ f D` for every element of `closure`, in the same order.
    pub rescaled: SemigroupClosure,
}

fn near_binary(v: f64, tol: f64) -> bool {
    v.abs() <= tol || (v - 1.0).abs() <= tol
}

/// Finds a positive diagonal `D` with `D⁻¹ f D` binary for every `f` in the
/// semigroup generated by `generators`.
///
/// Every element's diagonal is checked against `{0, 1}` while the closure is
/// enumerated, before indecomposability is examined. The scaling comes from
/// the sup-function certificate; the binary conclusion is then verified on
/// every element rather than assumed.
pub fn binary_diagonal_rescale(
    generators: &[NonnegMatrix],
    opts: &ClosureOptions,
    tol: f64,
) -> Result<BinaryRescaling> {
    let n = generator_dim(generators)?;
    let closure = generate_inspected(generators, &CompositionRule::Standard, opts, |id, m| {
        for i in 0..n {
            let v = m.get(i, i);
            if !near_binary(v, tol) {
                return Err(Error::NotBinaryDiagonal {
                    element: id,
                    index: i,
                    value: v,
                });
            }
        }
        Ok(())
    })?;
    if let Some((row, col)) = indecomposability_witness(generators) {
        return Err(Error::NotIndecomposable { row, col });
    }
    if !closure.is_complete() {
        return Err(Error::ClosureIncomplete {
            size: closure.len(),
        });
    }

    let (certificate, _) = semigroup_scaling(&closure, 0, 0)?;
    let d = certificate.d.clone();
    let rescaled = rescale_by(&closure, &d)?;

    for (element, (orig, scaled)) in closure
        .elements()
        .iter()
        .zip(rescaled.elements())
        .enumerate()
    {
        for row in 0..n {
            for col in 0..n {
                let value = scaled.get(row, col);
                let positive = orig.get(row, col) > tol;
                let ok = if positive {
                    (value - 1.0).abs() <= tol
                } else {
                    near_binary(value, tol)
                };
                if !ok {
                    return Err(Error::NotBinaryAfterRescale {
                        element,
                        row,
                        col,
                        value,
                    });
                }
            }
        }
    }

    Ok(BinaryRescaling {
        d,
        certificate,
        closure,
        rescaled,
    })
}

/// [`binary_diagonal_rescale`] with default cap, dedup tolerance and `1e-9`.
pub fn binary_diagonal_rescale_default(generators: &[NonnegMatrix]) -> Result<BinaryRescaling> {
    binary_diagonal_rescale(generators, &ClosureOptions::default(), DEFAULT_ABS_TOL)
}
