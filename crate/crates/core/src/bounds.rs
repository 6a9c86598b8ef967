//! Rank-one transient bounds.
//!
//! For every entry `(i, j)` two thresholds are evaluated:
//!
//! ```text
//! term1 = (w_i + v_j - γ_ij) / λ* + (n - 1)
//! term2 = (w_i - α_i + v_j - β_j) / λ* + 2(n - 1)
//! ```
//!
//! A product of length `k` strictly above both thresholds has
//! `Γ_ij = Γ_i0 + Γ_0j`; above the maximum over all entries it is rank one.
//! The explicit bound feeds the `A^inf` walk weights `w, v`; the implicit one
//! reads `w*, v*` off a realised product.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::family::MatrixFamily;
use crate::graph;
use crate::matrix::TropicalMatrix;
use crate::scalar::{Epsilon, Finite, TropicalScalar, Weight};

/// A length threshold. `Vacuous` constrains nothing (an ε path weight in the
/// numerator); `Unbounded` can never be met (an ε walk weight, meaning the
/// product has no walk to certify).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BoundValue<T> {
    Vacuous,
    Finite(T),
    Unbounded,
}

impl<T: Weight> BoundValue<T> {
    fn rank(&self) -> u8 {
        match self {
            BoundValue::Vacuous => 0,
            BoundValue::Finite(_) => 1,
            BoundValue::Unbounded => 2,
        }
    }

    pub fn total_cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (BoundValue::Finite(a), BoundValue::Finite(b)) => a.partial_cmp(b).unwrap_or(Ordering::Equal),
            _ => self.rank().cmp(&other.rank()),
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self.total_cmp(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    pub fn finite(&self) -> Option<&T> {
        match self {
            BoundValue::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// `k > self`.
    pub fn is_exceeded_by(&self, k: usize) -> bool {
        match self {
            BoundValue::Vacuous => true,
            BoundValue::Finite(b) => T::from_count(k) > *b,
            BoundValue::Unbounded => false,
        }
    }
}

impl<T: fmt::Display> fmt::Display for BoundValue<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Vacuous => f.write_str("-inf"),
            BoundValue::Finite(v) => v.fmt(f),
            BoundValue::Unbounded => f.write_str("+inf"),
        }
    }
}

/// Square grid of thresholds, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundMatrix<T> {
    n: usize,
    entries: Vec<BoundValue<T>>,
}

impl<T: Weight> BoundMatrix<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BoundValue<T> {
        &self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[BoundValue<T>] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[BoundValue<T>] {
        &self.entries
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    /// The path-avoiding-node-0 threshold.
    First,
    /// The initial-plus-final walk length threshold.
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundMode {
    Explicit,
    Implicit,
}

/// Everything the two closed-form terms consume. Vectors are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundInputs<T> {
    pub lambda: TropicalScalar<T>,
    pub alpha: Vec<TropicalScalar<T>>,
    pub beta: Vec<TropicalScalar<T>>,
    pub gamma: TropicalMatrix<T>,
    /// `w` (explicit) or `w*` (implicit).
    pub to_first: Vec<TropicalScalar<T>>,
    /// `v` (explicit) or `v*` (implicit).
    pub from_first: Vec<TropicalScalar<T>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport<T> {
    pub mode: BoundMode,
    pub inputs: BoundInputs<T>,
    pub term1: BoundMatrix<T>,
    pub term2: BoundMatrix<T>,
    pub per_entry: BoundMatrix<T>,
    pub overall: BoundValue<T>,
    /// First entry in row-major order (term 1 before term 2) attaining `overall`.
    pub argmax: Option<(usize, usize, Term)>,
    /// λ* is ε: no cycle avoids node 0, so walks avoiding it are paths and
    /// the division terms vanish.
    pub acyclic_complement: bool,
}

impl<T: Weight> BoundReport<T> {
    /// `k > overall`.
    pub fn check_length_sufficient(&self, k: usize) -> bool {
        self.overall.is_exceeded_by(k)
    }

    /// Smallest integer strictly above `overall`; `None` if unbounded.
    pub fn min_admissible_length(&self) -> Option<T> {
        match &self.overall {
            BoundValue::Vacuous => Some(T::zero()),
            BoundValue::Finite(b) => Some(b.floor() + T::one()),
            BoundValue::Unbounded => None,
        }
    }
}

/// Free-function form of [`BoundReport::check_length_sufficient`].
pub fn check_length_sufficient<T: Weight>(report: &BoundReport<T>, k: usize) -> bool {
    report.check_length_sufficient(k)
}

enum Numerator<T> {
    Vacuous,
    Finite(T),
    Unbounded,
}

/// `walks - paths`, where an ε walk weight makes the threshold unreachable and
/// an ε path weight makes it vacuous.
fn numerator<T: Weight>(walks: &[&TropicalScalar<T>], paths: &[&TropicalScalar<T>]) -> Numerator<T> {
    let mut acc = T::zero();
    for w in walks {
        match w {
            Finite(v) => acc = acc + v.clone(),
            Epsilon => return Numerator::Unbounded,
        }
    }
    for p in paths {
        match p {
            Finite(v) => acc = acc - v.clone(),
            Epsilon => return Numerator::Vacuous,
        }
    }
    Numerator::Finite(acc)
}

/// `(Σ walks − Σ paths) / λ* + offset`, with the ε conventions of [`BoundValue`].
pub(crate) fn closed_form<T: Weight>(
    walks: &[&TropicalScalar<T>],
    paths: &[&TropicalScalar<T>],
    lambda: &TropicalScalar<T>,
    offset: &T,
) -> BoundValue<T> {
    threshold(numerator(walks, paths), lambda, offset)
}

fn threshold<T: Weight>(num: Numerator<T>, lambda: &TropicalScalar<T>, offset: &T) -> BoundValue<T> {
    match num {
        Numerator::Vacuous => BoundValue::Vacuous,
        Numerator::Unbounded => BoundValue::Unbounded,
        Numerator::Finite(q) => match lambda {
            Finite(l) => BoundValue::Finite(q / l.clone() + offset.clone()),
            Epsilon => BoundValue::Finite(offset.clone()),
        },
    }
}

/// Evaluates both terms over all entries from explicitly supplied inputs.
pub fn bound_from_parts<T: Weight>(inputs: BoundInputs<T>, mode: BoundMode) -> Result<BoundReport<T>> {
    let n = inputs.gamma.dim()?;
    for (name, len) in [
        ("alpha", inputs.alpha.len()),
        ("beta", inputs.beta.len()),
        ("w", inputs.to_first.len()),
        ("v", inputs.from_first.len()),
    ] {
        if len != n {
            return Err(Error::InvalidLength(format!("{name} has {len} entries, expected {n}")));
        }
    }
    if let Finite(l) = &inputs.lambda {
        if *l >= T::zero() {
            return Err(Error::Assumption(format!(
                "lambda* must be negative, got {l}"
            )));
        }
    }

    let n_minus_one = T::from_count(n.saturating_sub(1));
    let twice = n_minus_one.clone() + n_minus_one.clone();
    let mut term1 = Vec::with_capacity(n * n);
    let mut term2 = Vec::with_capacity(n * n);
    let mut per_entry = Vec::with_capacity(n * n);
    let mut overall = BoundValue::Vacuous;
    let mut argmax = None;
    for i in 0..n {
        for j in 0..n {
            let (w, v) = (&inputs.to_first[i], &inputs.from_first[j]);
            let t1 = threshold(
                numerator(&[w, v], &[inputs.gamma.get(i, j)]),
                &inputs.lambda,
                &n_minus_one,
            );
            let t2 = threshold(
                numerator(&[w, v], &[&inputs.alpha[i], &inputs.beta[j]]),
                &inputs.lambda,
                &twice,
            );
            for (t, which) in [(&t1, Term::First), (&t2, Term::Second)] {
                if !matches!(t, BoundValue::Vacuous) && overall.total_cmp(t) == Ordering::Less {
                    overall = t.clone();
                    argmax = Some((i, j, which));
                }
            }
            per_entry.push(t1.clone().max(t2.clone()));
            term1.push(t1);
            term2.push(t2);
        }
    }

    Ok(BoundReport {
        mode,
        acyclic_complement: inputs.lambda.is_epsilon(),
        inputs,
        term1: BoundMatrix { n, entries: term1 },
        term2: BoundMatrix { n, entries: term2 },
        per_entry: BoundMatrix { n, entries: per_entry },
        overall,
        argmax,
    })
}

fn sup_inputs<T: Weight>(
    family: &MatrixFamily<T>,
    to_first: Vec<TropicalScalar<T>>,
    from_first: Vec<TropicalScalar<T>>,
) -> Result<BoundInputs<T>> {
    let a_sup = family.a_sup();
    Ok(BoundInputs {
        lambda: graph::lambda_star(a_sup)?.mean,
        alpha: graph::alpha(a_sup)?.column(0),
        beta: graph::beta(a_sup)?.column(0),
        gamma: graph::gamma(a_sup)?,
        to_first,
        from_first,
    })
}

/// Bound computed from the family alone; every longer product is rank one.
pub fn explicit_bound<T: Weight>(family: &MatrixFamily<T>) -> Result<BoundReport<T>> {
    family.require_valid()?;
    let w = family.inf_walk_to_one()?.column(0);
    let v = family.inf_walk_from_one()?.column(0);
    bound_from_parts(sup_inputs(family, w, v)?, BoundMode::Explicit)
}

/// Bound with `w*_i = Γ_i0` and `v*_j = Γ_0j` read from a realised product.
pub fn implicit_bound<T: Weight>(
    family: &MatrixFamily<T>,
    gamma_k: &TropicalMatrix<T>,
) -> Result<BoundReport<T>> {
    family.require_valid()?;
    let n = gamma_k.dim()?;
    if n != family.n() {
        return Err(Error::DimensionMismatch {
            left_rows: family.n(),
            left_cols: family.n(),
            right_rows: n,
            right_cols: n,
        });
    }
    let w_star = gamma_k.column(0);
    let v_star = gamma_k.row(0).to_vec();
    bound_from_parts(sup_inputs(family, w_star, v_star)?, BoundMode::Implicit)
}
