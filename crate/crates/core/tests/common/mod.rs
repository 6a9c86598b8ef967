//! Shared fixtures and brute-force oracles for the integration tests.
//!
//! Nothing here calls into the algorithms under test except for building
//! matrices and families.

#![allow(dead_code)]

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tropical_transient::{
    Epsilon, Family, Finite, Matrix, MatrixFamily, ProductSequence, Rational, Scalar, TropicalMatrix,
};

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn s(n: i64) -> Scalar {
    Finite(q(n))
}

pub const E: Option<i64> = None;

pub fn mat(rows: &[[Option<i64>; 5]]) -> Matrix {
    mat_dyn(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
}

pub fn mat_dyn(rows: &[Vec<Option<i64>>]) -> Matrix {
    Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|v| v.map_or(Epsilon, s)).collect())
            .collect(),
    )
    .unwrap()
}

pub fn vector(values: &[Option<i64>]) -> Vec<Scalar> {
    values.iter().map(|v| v.map_or(Epsilon, s)).collect()
}

pub fn ints(values: &[i64]) -> Vec<Scalar> {
    values.iter().map(|&v| s(v)).collect()
}

// The worked example: three geometrically equivalent 5x5 matrices.

pub fn a1() -> Matrix {
    mat(&[
        [Some(0), Some(-1), Some(-2), E, E],
        [Some(-3), E, E, E, Some(-3)],
        [E, E, E, Some(-4), E],
        [E, Some(-5), E, E, E],
        [Some(-6), E, E, Some(-5), E],
    ])
}

pub fn a2() -> Matrix {
    mat(&[
        [Some(0), Some(-4), Some(-3), E, E],
        [Some(-4), E, E, E, Some(-3)],
        [E, E, E, Some(-2), E],
        [E, Some(-1), E, E, E],
        [Some(-1), E, E, Some(1), E],
    ])
}

pub fn a3() -> Matrix {
    mat(&[
        [Some(0), Some(2), Some(-4), E, E],
        [Some(-5), E, E, E, Some(-6)],
        [E, E, E, Some(-4), E],
        [E, Some(-3), E, E, E],
        [Some(-2), E, E, Some(2), E],
    ])
}

pub fn example_family() -> Family {
    MatrixFamily::new(vec![a1(), a2(), a3()]).unwrap()
}

pub fn printed_a_sup() -> Matrix {
    mat(&[
        [Some(0), Some(2), Some(-2), E, E],
        [Some(-3), E, E, E, Some(-3)],
        [E, E, E, Some(-2), E],
        [E, Some(-1), E, E, E],
        [Some(-1), E, E, Some(2), E],
    ])
}

pub fn printed_a_inf() -> Matrix {
    mat(&[
        [Some(0), Some(-4), Some(-4), E, E],
        [Some(-5), E, E, E, Some(-6)],
        [E, E, E, Some(-4), E],
        [E, Some(-5), E, E, E],
        [Some(-6), E, E, Some(-5), E],
    ])
}

pub fn printed_gamma() -> Matrix {
    mat(&[
        [E, E, E, E, E],
        [E, Some(-2), E, Some(-1), Some(-3)],
        [E, Some(-3), E, Some(-2), Some(-6)],
        [E, Some(-1), E, Some(-2), Some(-4)],
        [E, Some(1), E, Some(2), Some(-2)],
    ])
}

pub fn printed_gamma_44() -> Matrix {
    mat(&[
        [Some(0), Some(-1), Some(-2), Some(-6), Some(-4)],
        [Some(-3), Some(-4), Some(-5), Some(-9), Some(-7)],
        [Some(-10), Some(-11), Some(-12), Some(-16), Some(-14)],
        [Some(-10), Some(-11), Some(-12), Some(-16), Some(-14)],
        [Some(-6), Some(-7), Some(-8), Some(-12), Some(-10)],
    ])
}

/// The 44-factor product of the worked example, 1-based member numbers.
pub const SEQUENCE_44: [usize; 44] = [
    1, 3, 1, 2, 3, 1, 2, 2, 1, 3, 1, //
    2, 1, 2, 3, 3, 1, 2, 1, 1, 3, 2, //
    3, 2, 2, 3, 1, 1, 2, 3, 2, 1, 3, //
    1, 2, 3, 1, 3, 3, 1, 2, 2, 1, 1,
];

pub fn sequence_44() -> ProductSequence {
    ProductSequence::from_one_based(&SEQUENCE_44).unwrap()
}

// Brute-force oracles.

fn entry(a: &Matrix, i: usize, j: usize) -> Option<Rational> {
    a.get(i, j).value().cloned()
}

/// Every simple cycle, as a node list starting at its smallest node.
pub fn simple_cycles(a: &Matrix) -> Vec<Vec<usize>> {
    let n = a.rows();
    let mut out = Vec::new();
    for start in 0..n {
        let mut path = vec![start];
        extend_cycles(a, start, &mut path, &mut out);
    }
    out
}

fn extend_cycles(a: &Matrix, start: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let last = *path.last().unwrap();
    for next in start..a.rows() {
        if entry(a, last, next).is_none() {
            continue;
        }
        if next == start {
            out.push(path.clone());
        } else if !path.contains(&next) {
            path.push(next);
            extend_cycles(a, start, path, out);
            path.pop();
        }
    }
}

pub fn cycle_sum(a: &Matrix, cycle: &[usize]) -> Rational {
    (0..cycle.len())
        .map(|k| entry(a, cycle[k], cycle[(k + 1) % cycle.len()]).unwrap())
        .fold(q(0), |acc, w| acc + w)
}

/// Maximum cycle mean by listing every simple cycle.
pub fn brute_cycle_mean(a: &Matrix) -> Option<Rational> {
    simple_cycles(a)
        .iter()
        .map(|c| cycle_sum(a, c) / q(c.len() as i64))
        .max()
}

/// Heaviest simple path `from → to` (length ≥ 1 when `from == to`, i.e. a
/// simple cycle) whose interior avoids `forbidden`.
pub fn brute_path(a: &Matrix, from: usize, to: usize, forbidden: Option<usize>) -> Option<Rational> {
    let mut best = None;
    let mut visited = vec![false; a.rows()];
    visited[from] = true;
    search_paths(a, from, to, forbidden, q(0), &mut visited, &mut best);
    best
}

fn search_paths(
    a: &Matrix,
    at: usize,
    to: usize,
    forbidden: Option<usize>,
    acc: Rational,
    visited: &mut [bool],
    best: &mut Option<Rational>,
) {
    for next in 0..a.rows() {
        let Some(w) = entry(a, at, next) else { continue };
        let total = acc.clone() + w;
        if next == to {
            if best.as_ref().map_or(true, |b| total > *b) {
                *best = Some(total.clone());
            }
            continue;
        }
        if visited[next] || Some(next) == forbidden {
            continue;
        }
        visited[next] = true;
        search_paths(a, next, to, forbidden, total, visited, best);
        visited[next] = false;
    }
}

/// Heaviest path into node 0; entry 0 is the empty path.
pub fn brute_into_first(a: &Matrix) -> Vec<Scalar> {
    (0..a.rows())
        .map(|i| {
            if i == 0 {
                s(0)
            } else {
                brute_path(a, i, 0, None).map_or(Epsilon, Finite)
            }
        })
        .collect()
}

pub fn brute_from_first(a: &Matrix) -> Vec<Scalar> {
    brute_into_first(&a.transpose())
}

/// Heaviest walks of length ≥ 1 avoiding node 0, via simple paths and cycles.
pub fn brute_gamma(a: &Matrix) -> Matrix {
    let n = a.rows();
    let mut g = TropicalMatrix::epsilon(n, n);
    for i in 1..n {
        for j in 1..n {
            if let Some(w) = brute_path(a, i, j, Some(0)) {
                g.set(i, j, Finite(w));
            }
        }
    }
    g
}

/// `max_{l ≤ cap} (A^l)_{i0}` by repeated multiplication.
pub fn capped_into_first(a: &Matrix, cap: usize) -> Vec<Scalar> {
    let n = a.rows();
    let mut power = TropicalMatrix::identity(n);
    let mut best = power.column(0);
    for _ in 0..cap {
        power = power.mul(a).unwrap();
        for (b, p) in best.iter_mut().zip(power.column(0)) {
            b.oplus_assign(p);
        }
    }
    best
}

/// Naive left fold with a plain triple loop.
pub fn naive_fold(family: &Family, seq: &[usize]) -> Matrix {
    let n = family.n();
    let mut acc = family.members()[seq[0]].clone();
    for &idx in &seq[1..] {
        let b = &family.members()[idx];
        let mut out = TropicalMatrix::epsilon(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut best: Option<Rational> = None;
                for k in 0..n {
                    if let (Some(x), Some(y)) = (entry(&acc, i, k), entry(b, k, j)) {
                        let v = x + y;
                        if best.as_ref().map_or(true, |cur| v > *cur) {
                            best = Some(v);
                        }
                    }
                }
                out.set(i, j, best.map_or(Epsilon, Finite));
            }
        }
        acc = out;
    }
    acc
}

/// `m_ij = m_i0 + m_0j - m_00` everywhere, checked entry by entry.
pub fn naive_rank_one(m: &Matrix) -> bool {
    let n = m.rows();
    let Some(pivot) = entry(m, 0, 0) else { return false };
    (0..n).all(|i| {
        (0..n).all(|j| {
            let expected = match (entry(m, i, 0), entry(m, 0, j)) {
                (Some(x), Some(y)) => Some(x + y - pivot.clone()),
                _ => None,
            };
            entry(m, i, j) == expected
        })
    })
}

/// Closed-form bound terms evaluated directly, skipping entries with an ε
/// ingredient. Returns `(max term1, max term2)`.
pub fn brute_bound(
    lambda: &Rational,
    alpha: &[Scalar],
    beta: &[Scalar],
    gamma: &Matrix,
    w: &[Scalar],
    v: &[Scalar],
) -> (Option<Rational>, Option<Rational>) {
    let n = alpha.len();
    let nm1 = q(n as i64 - 1);
    let (mut best1, mut best2): (Option<Rational>, Option<Rational>) = (None, None);
    for i in 0..n {
        for j in 0..n {
            let (wi, vj) = (w[i].value().unwrap(), v[j].value().unwrap());
            if let Some(g) = gamma.get(i, j).value() {
                let t = (wi + vj - g) / lambda + nm1.clone();
                if best1.as_ref().map_or(true, |b| t > *b) {
                    best1 = Some(t);
                }
            }
            if let (Some(a), Some(b)) = (alpha[i].value(), beta[j].value()) {
                let t = (wi - a + vj - b) / lambda + nm1.clone() + nm1.clone();
                if best2.as_ref().map_or(true, |x| t > *x) {
                    best2 = Some(t);
                }
            }
        }
    }
    (best1, best2)
}

/// Random family meeting every assumption: `n ≤ max_n`, `m ≤ max_m`,
/// integer weights in `[-6, 0]`, loop of weight 0 at node 0.
pub fn random_valid_family(rng: &mut ChaCha8Rng, max_n: usize, max_m: usize) -> Family {
    loop {
        let n = rng.gen_range(1..=max_n);
        let m = rng.gen_range(1..=max_m);
        let density = rng.gen_range(0.3..0.9);
        let mut support = vec![vec![false; n]; n];
        for (i, row) in support.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (i == 0 && j == 0) || rng.gen_bool(density);
            }
        }
        let members: Vec<Matrix> = (0..m)
            .map(|_| {
                let rows: Vec<Vec<Option<i64>>> = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                if i == 0 && j == 0 {
                                    Some(0)
                                } else if support[i][j] {
                                    Some(rng.gen_range(-6..=0))
                                } else {
                                    None
                                }
                            })
                            .collect()
                    })
                    .collect();
                mat_dyn(&rows)
            })
            .collect();
        let family = MatrixFamily::new(members).unwrap();
        if family.validate().passed() {
            return family;
        }
    }
}

pub fn random_sequence_of(rng: &mut ChaCha8Rng, members: usize, len: usize) -> ProductSequence {
    ProductSequence::new((0..len).map(|_| rng.gen_range(0..members)).collect())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
