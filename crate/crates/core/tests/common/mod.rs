//! Random instance generators and brute-force oracles shared by the
//! integration tests. The oracles enumerate walks explicitly and share no
//! code with the library.

#![allow(dead_code, clippy::needless_range_loop)]

use nalgebra::DMatrix;
use nonneg_semigroups::ext_real::ExtendedWeightMatrix;
use nonneg_semigroups::matrix::NonnegMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const NEG: f64 = f64::NEG_INFINITY;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Weights uniform in `[lo, hi]`, each edge (loops included) absent with probability `absent`.
pub fn random_digraph(
    rng: &mut ChaCha8Rng,
    n: usize,
    lo: f64,
    hi: f64,
    absent: f64,
) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    if rng.random_bool(absent) {
                        NEG
                    } else {
                        rng.random_range(lo..=hi)
                    }
                })
                .collect()
        })
        .collect()
}

pub fn extended(rows: &[Vec<f64>]) -> ExtendedWeightMatrix {
    ExtendedWeightMatrix::from_rows(rows).unwrap()
}

fn extend_walks(
    mu: &[Vec<f64>],
    start: usize,
    at: usize,
    weight: f64,
    len: usize,
    max_len: usize,
    best: &mut [Vec<f64>],
) {
    if len == max_len {
        return;
    }
    for (next, &w) in mu[at].iter().enumerate() {
        if w == NEG {
            continue;
        }
        let total = weight + w;
        if total > best[start][next] {
            best[start][next] = total;
        }
        extend_walks(mu, start, next, total, len + 1, max_len, best);
    }
}

/// Largest weight over every walk with between 1 and `max_len` edges, by explicit enumeration.
pub fn brute_force_walks(mu: &[Vec<f64>], max_len: usize) -> Vec<Vec<f64>> {
    let n = mu.len();
    let mut best = vec![vec![NEG; n]; n];
    for start in 0..n {
        extend_walks(mu, start, start, 0.0, 0, max_len, &mut best);
    }
    best
}

/// Some closed walk has positive weight; closed walks of length at most `n` suffice.
pub fn has_positive_cycle(mu: &[Vec<f64>]) -> bool {
    let best = brute_force_walks(mu, mu.len());
    (0..mu.len()).any(|v| best[v][v] > 1e-12)
}

fn extend_products(
    f: &[Vec<f64>],
    start: usize,
    at: usize,
    product: f64,
    len: usize,
    max_len: usize,
    best: &mut [Vec<f64>],
) {
    if len == max_len {
        return;
    }
    for (next, &w) in f[at].iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let total = product * w;
        if total > best[start][next] {
            best[start][next] = total;
        }
        extend_products(f, start, next, total, len + 1, max_len, best);
    }
}

/// Largest product of entries over every walk with between 1 and `max_len` edges.
pub fn brute_force_products(f: &[Vec<f64>], max_len: usize) -> Vec<Vec<f64>> {
    let n = f.len();
    let mut best = vec![vec![0.0; n]; n];
    for start in 0..n {
        extend_products(f, start, start, 1.0, 0, max_len, &mut best);
    }
    best
}

pub fn has_product_cycle_above_one(f: &[Vec<f64>]) -> bool {
    let best = brute_force_products(f, f.len());
    (0..f.len()).any(|v| best[v][v] > 1.0 + 1e-12)
}

/// Entries `exp(w)` of a random digraph; missing edges become zeros.
pub fn random_nonneg(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    random_digraph(rng, n, -3.0, 3.0, 0.4)
        .into_iter()
        .map(|r| r.into_iter().map(f64::exp).collect())
        .collect()
}

/// The cyclic permutation `i → i + 1`.
pub fn full_cycle(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if j == (i + 1) % n { 1.0 } else { 0.0 })
                .collect()
        })
        .collect()
}

/// A random partial permutation matrix of the given rank.
pub fn random_partial_permutation(rng: &mut ChaCha8Rng, n: usize, rank: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    shuffle(rng, &mut rows);
    shuffle(rng, &mut cols);
    let mut m = vec![vec![0.0; n]; n];
    for k in 0..rank {
        m[rows[k]][cols[k]] = 1.0;
    }
    m
}

fn shuffle(rng: &mut ChaCha8Rng, v: &mut [usize]) {
    for i in (1..v.len()).rev() {
        let j = rng.random_range(0..=i);
        v.swap(i, j);
    }
}

pub fn transpose(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    (0..n).map(|i| (0..n).map(|j| m[j][i]).collect()).collect()
}

/// `D B D⁻¹`, i.e. entries `d_i b_ij / d_j`.
pub fn conjugate(d: &[f64], b: &[Vec<f64>]) -> NonnegMatrix {
    let n = d.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| d[i] * b[i][j] / d[j]).collect())
        .collect();
    NonnegMatrix::from_rows(&rows).unwrap()
}

/// Binary generators and their diagonal conjugates.
pub struct BinaryInstance {
    pub d: Vec<f64>,
    pub binary: Vec<Vec<Vec<f64>>>,
    pub generators: Vec<NonnegMatrix>,
}

/// A full cycle plus one or two random partial permutations and their
/// transposes, conjugated by a diagonal with entries in `[0.1, 10]`.
///
/// Partial permutations have rank at most `n − 1` for `n ≤ 4` and at most 2
/// beyond, which keeps every closure a few hundred elements.
pub fn binary_instance(rng: &mut ChaCha8Rng, n_max: usize) -> BinaryInstance {
    let n = rng.random_range(2..=n_max);
    let max_rank = if n <= 4 { n - 1 } else { 2 };
    let mut binary = vec![full_cycle(n)];
    for _ in 0..rng.random_range(1..=2) {
        let rank = rng.random_range(1..=max_rank);
        let p = random_partial_permutation(rng, n, rank);
        binary.push(transpose(&p));
        binary.push(p);
    }
    let d: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..=10.0)).collect();
    let generators = binary.iter().map(|b| conjugate(&d, b)).collect();
    BinaryInstance {
        d,
        binary,
        generators,
    }
}

pub fn unit(n: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    m[(i, j)] = 1.0;
    m
}

/// Hand-built self-adjoint semigroups of 0/1 matrices, each listed in full.
pub fn matrix_unit_semigroups() -> Vec<(String, Vec<DMatrix<f64>>)> {
    let mut out = Vec::new();
    for n in 1..=4 {
        let mut all = vec![DMatrix::zeros(n, n)];
        for i in 0..n {
            for j in 0..n {
                all.push(unit(n, i, j));
            }
        }
        out.push((format!("all matrix units, n = {n}"), all));
    }
    // units inside the blocks {1, 2} and {3}
    let mut blocks = vec![DMatrix::zeros(3, 3), unit(3, 2, 2)];
    for i in 0..2 {
        for j in 0..2 {
            blocks.push(unit(3, i, j));
        }
    }
    out.push(("block units {1,2} + {3}".into(), blocks));
    // diagonal units and their sums
    let mut diag = vec![DMatrix::zeros(3, 3)];
    for mask in 1u32..8 {
        diag.push(DMatrix::from_fn(3, 3, |i, j| {
            if i == j && mask & (1 << i) != 0 {
                1.0
            } else {
                0.0
            }
        }));
    }
    out.push(("diagonal 0/1 matrices, n = 3".into(), diag));
    // the cyclic group of order 4
    let c = DMatrix::from_fn(4, 4, |i, j| if j == (i + 1) % 4 { 1.0 } else { 0.0 });
    let mut group = vec![DMatrix::identity(4, 4)];
    for _ in 1..4 {
        let next = group.last().unwrap() * &c;
        group.push(next);
    }
    out.push(("cyclic permutations, n = 4".into(), group));
    out
}

pub fn dense(m: &NonnegMatrix) -> DMatrix<f64> {
    m.as_matrix().clone()
}
