//! Finite matrix families, their boundary matrices, and the structural
//! assumptions the transient bound relies on.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::graph::{self, EdgeSet};
use crate::matrix::TropicalMatrix;
use crate::scalar::{Epsilon, Finite, TropicalScalar, Weight};

/// Which matrix a validation verdict talks about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subject {
    /// 0-based member index.
    Member(usize),
    Sup,
    Inf,
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Member(i) => write!(f, "member {}", i + 1),
            Subject::Sup => f.write_str("A^sup"),
            Subject::Inf => f.write_str("A^inf"),
        }
    }
}

/// Counterexample to one of the family assumptions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation<T> {
    /// `edge` is present in exactly one of the subject and member 0.
    SupportMismatch { subject: Subject, edge: (usize, usize) },
    Reducible { subject: Subject },
    /// The loop at node 0 is missing or has nonzero weight.
    LoopNotZero {
        subject: Subject,
        weight: TropicalScalar<T>,
    },
    /// A cycle other than the node-0 loop has nonnegative mean, so the loop
    /// is not the unique critical cycle.
    CompetingCycle {
        subject: Subject,
        cycle: Vec<usize>,
        mean: T,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<T> {
    Pass,
    Fail(Violation<T>),
}

impl<T> Verdict<T> {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn violation(&self) -> Option<&Violation<T>> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(v) => Some(v),
        }
    }
}

/// Outcome of checking the three family assumptions.
///
/// The first assumption is split into its support and irreducibility halves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport<T> {
    /// Members and `A^inf` share one support.
    pub geometric: Verdict<T>,
    /// Every member is irreducible.
    pub irreducible: Verdict<T>,
    /// Every member has the weight-0 loop at node 0 as its unique critical cycle.
    pub member_loop: Verdict<T>,
    /// Same for `A^sup`.
    pub sup_loop: Verdict<T>,
}

impl<T> ValidationReport<T> {
    pub fn passed(&self) -> bool {
        self.geometric.passed()
            && self.irreducible.passed()
            && self.member_loop.passed()
            && self.sup_loop.passed()
    }

    /// `(assumption label, verdict)` pairs in a fixed order.
    pub fn verdicts(&self) -> [(&'static str, &Verdict<T>); 4] {
        [
            ("geometric-equivalence", &self.geometric),
            ("irreducible", &self.irreducible),
            ("member-critical-loop", &self.member_loop),
            ("sup-critical-loop", &self.sup_loop),
        ]
    }

    pub fn first_failure(&self) -> Option<(&'static str, &Violation<T>)> {
        self.verdicts()
            .into_iter()
            .find_map(|(label, v)| v.violation().map(|v| (label, v)))
    }
}

/// A finite family of same-size square matrices.
#[derive(Clone, Debug)]
pub struct MatrixFamily<T> {
    members: Vec<TropicalMatrix<T>>,
    a_sup: TropicalMatrix<T>,
    a_inf: TropicalMatrix<T>,
    validation: OnceLock<ValidationReport<T>>,
}

impl<T: Weight> MatrixFamily<T> {
    pub fn new(members: Vec<TropicalMatrix<T>>) -> Result<Self> {
        let first = members.first().ok_or(Error::EmptyFamily)?;
        let n = first.dim()?;
        for m in &members {
            let k = m.dim()?;
            if k != n {
                return Err(Error::DimensionMismatch {
                    left_rows: n,
                    left_cols: n,
                    right_rows: k,
                    right_cols: k,
                });
            }
        }
        let (a_sup, a_inf) = boundaries(&members);
        Ok(Self {
            members,
            a_sup,
            a_inf,
            validation: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.a_sup.rows()
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[TropicalMatrix<T>] {
        &self.members
    }

    /// Member by 0-based index.
    pub fn member(&self, idx: usize) -> Result<&TropicalMatrix<T>> {
        self.members.get(idx).ok_or(Error::IndexOutOfRange {
            index: idx + 1,
            members: self.members.len(),
        })
    }

    pub fn a_sup(&self) -> &TropicalMatrix<T> {
        &self.a_sup
    }

    pub fn a_inf(&self) -> &TropicalMatrix<T> {
        &self.a_inf
    }

    /// `(A^sup, A^inf)`.
    pub fn derive_boundaries(&self) -> (&TropicalMatrix<T>, &TropicalMatrix<T>) {
        (&self.a_sup, &self.a_inf)
    }

    /// Checks the assumptions once and caches the report.
    pub fn validate(&self) -> &ValidationReport<T> {
        self.validation.get_or_init(|| self.run_validation())
    }

    /// Errors with the first failing assumption, if any.
    pub fn require_valid(&self) -> Result<()> {
        match self.validate().first_failure() {
            None => Ok(()),
            Some((label, v)) => Err(Error::Assumption(format!(
                "assumption {label} fails: {}",
                describe(v)
            ))),
        }
    }

    /// Heaviest walk weights `i → 0` on the digraph of `A^inf`.
    ///
    /// Under the validated assumptions every cycle except the node-0 loop is
    /// negative, so the value equals the length-capped one for any cap ≥ n-1.
    pub fn inf_walk_to_one(&self) -> Result<TropicalMatrix<T>> {
        self.require_valid()?;
        Ok(TropicalMatrix::column_vector(graph::heaviest_into_first(&self.a_inf)?))
    }

    /// Heaviest walk weights `0 → j` on the digraph of `A^inf`.
    pub fn inf_walk_from_one(&self) -> Result<TropicalMatrix<T>> {
        self.require_valid()?;
        Ok(TropicalMatrix::column_vector(graph::heaviest_into_first(
            &self.a_inf.transpose(),
        )?))
    }

    fn run_validation(&self) -> ValidationReport<T> {
        let reference = graph::support(&self.members[0]).expect("members are square");
        let geometric = self
            .members
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, m)| (Subject::Member(i), m))
            .chain(std::iter::once((Subject::Inf, &self.a_inf)))
            .find_map(|(subject, m)| {
                let s = graph::support(m).expect("members are square");
                support_difference(&reference, &s)
                    .map(|edge| Violation::SupportMismatch { subject, edge })
            })
            .map_or(Verdict::Pass, Verdict::Fail);

        let irreducible = self
            .members
            .iter()
            .enumerate()
            .find(|(_, m)| !graph::is_irreducible(*m).expect("members are square"))
            .map_or(Verdict::Pass, |(i, _)| {
                Verdict::Fail(Violation::Reducible {
                    subject: Subject::Member(i),
                })
            });

        let member_loop = self
            .members
            .iter()
            .enumerate()
            .find_map(|(i, m)| unique_zero_loop(Subject::Member(i), m))
            .map_or(Verdict::Pass, Verdict::Fail);

        let sup_loop = unique_zero_loop(Subject::Sup, &self.a_sup).map_or(Verdict::Pass, Verdict::Fail);

        ValidationReport {
            geometric,
            irreducible,
            member_loop,
            sup_loop,
        }
    }
}

fn boundaries<T: Weight>(members: &[TropicalMatrix<T>]) -> (TropicalMatrix<T>, TropicalMatrix<T>) {
    let mut sup = members[0].clone();
    let mut inf = members[0].clone();
    let n = sup.rows();
    for m in &members[1..] {
        for i in 0..n {
            for j in 0..n {
                let x = m.get(i, j);
                if sup.get(i, j) < x {
                    sup.set(i, j, x.clone());
                }
                if x < inf.get(i, j) {
                    inf.set(i, j, x.clone());
                }
            }
        }
    }
    (sup, inf)
}

fn support_difference(a: &EdgeSet, b: &EdgeSet) -> Option<(usize, usize)> {
    a.edges.symmetric_difference(&b.edges).next().copied()
}

fn unique_zero_loop<T: Weight>(subject: Subject, m: &TropicalMatrix<T>) -> Option<Violation<T>> {
    match m.get(0, 0) {
        Finite(w) if *w == T::zero() => {}
        other => {
            return Some(Violation::LoopNotZero {
                subject,
                weight: other.clone(),
            })
        }
    }
    let rest = graph::max_cycle_mean(&m.with_entry(0, 0, Epsilon)).expect("square");
    match rest.mean {
        Finite(mean) if mean >= T::zero() => Some(Violation::CompetingCycle {
            subject,
            cycle: rest.witness.unwrap_or_default(),
            mean,
        }),
        _ => None,
    }
}

/// Human-readable one-liner for a violation, with 1-based node numbers.
pub fn describe<T: Weight>(v: &Violation<T>) -> String {
    match v {
        Violation::SupportMismatch { subject, edge } => format!(
            "{subject} differs from member 1 at edge ({},{})",
            edge.0 + 1,
            edge.1 + 1
        ),
        Violation::Reducible { subject } => format!("{subject} is not irreducible"),
        Violation::LoopNotZero { subject, weight } => {
            let w = match weight {
                Finite(w) => w.to_string(),
                Epsilon => "-inf".to_string(),
            };
            format!("{subject} has loop (1,1) of weight {w}, expected 0")
        }
        Violation::CompetingCycle {
            subject,
            cycle,
            mean,
        } => {
            let nodes: Vec<String> = cycle.iter().map(|v| (v + 1).to_string()).collect();
            format!(
                "{subject} has cycle ({}) with mean {mean} >= 0 besides the loop at node 1",
                nodes.join(",")
            )
        }
    }
}
