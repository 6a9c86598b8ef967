//! The analysis report and its JSON form.
//!
//! Every exact value is a string: an integer, `p/q`, `-inf` for ε, or `+inf`
//! for a threshold that no product length can satisfy. Indices are 1-based.

use serde::Serialize;
use tropical_transient::{
    BoundMode, BoundReport, BoundValue, Matrix, Rational, Scalar, Term, TransientEstimate, ValidationReport,
    Verdict,
};

use crate::input::{render_rational, render_scalar};

pub type Grid = Vec<Vec<String>>;

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub family: FamilySummary,
    pub validation: ValidationSection,
    pub derived: Option<DerivedSection>,
    pub bounds: Option<BoundsSection>,
    pub check: Option<CheckSection>,
    pub transient: Option<TransientSection>,
    pub deviations: Vec<Deviation>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilySummary {
    pub n: usize,
    pub members: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationSection {
    pub passed: bool,
    pub assumptions: Vec<AssumptionVerdict>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AssumptionVerdict {
    pub name: String,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleMean {
    pub value: String,
    pub witness: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DerivedSection {
    pub a_sup: Grid,
    pub a_inf: Grid,
    pub lambda_star: Option<CycleMean>,
    pub alpha: Option<Vec<String>>,
    pub beta: Option<Vec<String>>,
    pub gamma: Option<Grid>,
    pub w: Option<Vec<String>>,
    pub v: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Argmax {
    pub i: usize,
    pub j: usize,
    pub term: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundSection {
    pub mode: &'static str,
    pub term1: Grid,
    pub term2: Grid,
    pub per_entry: Grid,
    pub overall: String,
    /// `floor(overall) + 1`, the shortest length the bound certifies.
    pub min_admissible_length: Option<String>,
    pub argmax: Option<Argmax>,
    pub acyclic_complement: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsSection {
    pub explicit: BoundSection,
    /// The explicit bound recomputed from the expected-values file's own
    /// intermediate quantities, when it supplies all of them.
    pub explicit_from_expected: Option<BoundSection>,
    pub implicit: Option<BoundSection>,
    pub sequence_length: Option<usize>,
    pub length_guaranteed: Option<bool>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckSection {
    pub sequence_length: usize,
    pub product: Grid,
    pub rank_one: bool,
    pub column_factor: Option<Vec<String>>,
    pub row_factor: Option<Vec<String>>,
    pub w_star: Vec<String>,
    pub v_star: Vec<String>,
    /// Column 1 and row 1 of the product equal the trellis optima.
    pub consistent: bool,
    pub implicit_overall: Option<String>,
    pub length_guaranteed: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransientSection {
    pub mode: &'static str,
    pub horizon: usize,
    pub seed: Option<u64>,
    pub samples_per_length: Option<usize>,
    pub first_all_rank_one: Option<usize>,
    pub examined_per_length: Vec<u64>,
    pub failures_per_length: Vec<u64>,
    pub counterexamples: Vec<Vec<usize>>,
    pub scope: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Deviation {
    pub quantity: String,
    pub index: Vec<usize>,
    pub expected: String,
    pub actual: String,
}

pub fn grid(m: &Matrix) -> Grid {
    m.iter_rows().map(|r| r.iter().map(render_scalar).collect()).collect()
}

pub fn vector(v: &[Scalar]) -> Vec<String> {
    v.iter().map(render_scalar).collect()
}

pub fn bound_value(b: &BoundValue<Rational>) -> String {
    match b {
        BoundValue::Vacuous => "-inf".into(),
        BoundValue::Finite(r) => render_rational(r),
        BoundValue::Unbounded => "+inf".into(),
    }
}

fn bound_grid(m: &tropical_transient::BoundMatrix<Rational>) -> Grid {
    (0..m.n()).map(|i| m.row(i).iter().map(bound_value).collect()).collect()
}

pub fn bound_section(r: &BoundReport<Rational>) -> BoundSection {
    BoundSection {
        mode: match r.mode {
            BoundMode::Explicit => "explicit",
            BoundMode::Implicit => "implicit",
        },
        term1: bound_grid(&r.term1),
        term2: bound_grid(&r.term2),
        per_entry: bound_grid(&r.per_entry),
        overall: bound_value(&r.overall),
        min_admissible_length: r.min_admissible_length().map(|v| render_rational(&v)),
        argmax: r.argmax.map(|(i, j, t)| Argmax {
            i: i + 1,
            j: j + 1,
            term: match t {
                Term::First => "term1",
                Term::Second => "term2",
            },
        }),
        acyclic_complement: r.acyclic_complement,
    }
}

pub fn validation_section(v: &ValidationReport<Rational>) -> ValidationSection {
    ValidationSection {
        passed: v.passed(),
        assumptions: v
            .verdicts()
            .into_iter()
            .map(|(name, verdict)| AssumptionVerdict {
                name: name.to_string(),
                passed: verdict.passed(),
                detail: match verdict {
                    Verdict::Pass => None,
                    Verdict::Fail(violation) => Some(tropical_transient::family::describe(violation)),
                },
            })
            .collect(),
    }
}

pub fn transient_section(e: &TransientEstimate, samples: usize) -> TransientSection {
    let sampled = e.mode == tropical_transient::SearchMode::Sampled;
    TransientSection {
        mode: if sampled { "sampled" } else { "exhaustive" },
        horizon: e.horizon,
        seed: e.seed,
        samples_per_length: sampled.then_some(samples),
        first_all_rank_one: e.first_all_rank_one,
        examined_per_length: e.examined_per_length.clone(),
        failures_per_length: e.failures_per_length.clone(),
        counterexamples: e.counterexamples.iter().map(|s| s.one_based()).collect(),
        scope: "horizon-bounded estimate over the examined products only",
    }
}

/// Entrywise mismatches between expected and actual renderings.
pub fn compare_vector(quantity: &str, expected: &[String], actual: &[String], out: &mut Vec<Deviation>) {
    if expected.len() != actual.len() {
        out.push(Deviation {
            quantity: quantity.to_string(),
            index: vec![],
            expected: format!("{} entries", expected.len()),
            actual: format!("{} entries", actual.len()),
        });
        return;
    }
    for (k, (e, a)) in expected.iter().zip(actual).enumerate() {
        if e != a {
            out.push(Deviation {
                quantity: quantity.to_string(),
                index: vec![k + 1],
                expected: e.clone(),
                actual: a.clone(),
            });
        }
    }
}

pub fn compare_grid(quantity: &str, expected: &Grid, actual: &Grid, out: &mut Vec<Deviation>) {
    let shape = |g: &Grid| (g.len(), g.first().map_or(0, Vec::len));
    if shape(expected) != shape(actual) || expected.iter().any(|r| r.len() != actual[0].len()) {
        out.push(Deviation {
            quantity: quantity.to_string(),
            index: vec![],
            expected: format!("{}x{}", shape(expected).0, shape(expected).1),
            actual: format!("{}x{}", shape(actual).0, shape(actual).1),
        });
        return;
    }
    for (i, (er, ar)) in expected.iter().zip(actual).enumerate() {
        for (j, (e, a)) in er.iter().zip(ar).enumerate() {
            if e != a {
                out.push(Deviation {
                    quantity: quantity.to_string(),
                    index: vec![i + 1, j + 1],
                    expected: e.clone(),
                    actual: a.clone(),
                });
            }
        }
    }
}

pub fn compare_scalar(quantity: &str, expected: &str, actual: &str, out: &mut Vec<Deviation>) {
    if expected != actual {
        out.push(Deviation {
            quantity: quantity.to_string(),
            index: vec![],
            expected: expected.to_string(),
            actual: actual.to_string(),
        });
    }
}

/// Human-oriented rendering; not a stable format.
pub fn pretty(report: &Report) -> String {
    let value = serde_json::to_value(report).expect("reports always serialise");
    let mut out = String::new();
    pretty_value(&value, 0, &mut out);
    out
}

fn is_grid(v: &serde_json::Value) -> Option<Vec<Vec<String>>> {
    let rows = v.as_array()?;
    if rows.is_empty() {
        return None;
    }
    rows.iter()
        .map(|r| {
            r.as_array()?
                .iter()
                .map(|c| c.as_str().map(str::to_string).or_else(|| c.as_u64().map(|u| u.to_string())))
                .collect()
        })
        .collect()
}

fn scalar_text(v: &serde_json::Value) -> Option<String> {
    match v {
        serde_json::Value::Null => Some("-".into()),
        serde_json::Value::Bool(b) => Some(b.to_string()),
        serde_json::Value::Number(n) => Some(n.to_string()),
        serde_json::Value::String(s) => Some(s.clone()),
        serde_json::Value::Array(items) if items.iter().all(|i| !i.is_array() && !i.is_object()) => Some(format!(
            "({})",
            items.iter().filter_map(scalar_text).collect::<Vec<_>>().join(", ")
        )),
        _ => None,
    }
}

fn pretty_value(v: &serde_json::Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    let Some(map) = v.as_object() else {
        if let Some(t) = scalar_text(v) {
            out.push_str(&format!("{pad}{t}\n"));
        }
        return;
    };
    for (key, value) in map {
        if let Some(text) = scalar_text(value) {
            out.push_str(&format!("{pad}{key}: {text}\n"));
        } else if let Some(g) = is_grid(value) {
            out.push_str(&format!("{pad}{key}:\n"));
            let width = g.iter().flatten().map(String::len).max().unwrap_or(1);
            for row in g {
                let cells: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
                out.push_str(&format!("{pad}  {}\n", cells.join("  ")));
            }
        } else if let Some(items) = value.as_array() {
            out.push_str(&format!("{pad}{key}:\n"));
            for item in items {
                match scalar_text(item) {
                    Some(t) => out.push_str(&format!("{pad}  - {t}\n")),
                    None => {
                        out.push_str(&format!("{pad}  -\n"));
                        pretty_value(item, indent + 2, out);
                    }
                }
            }
        } else {
            out.push_str(&format!("{pad}{key}:\n"));
            pretty_value(value, indent + 1, out);
        }
    }
}
