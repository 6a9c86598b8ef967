//! The nine acceptance criteria, each at its exact tolerance.
//!
//! The per-criterion lines go straight to stderr, so they show even when
//! the harness captures output.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use rand::Rng;
use serde_json::Value;
use tropical_transient::*;

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn cli_report(args: &[&str]) -> Value {
    let mut full = vec!["tropical-transient".to_string()];
    full.extend(args.iter().map(|a| a.to_string()));
    let out = tropical_transient_cli::run_args(full);
    assert_eq!(out.code, 0, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn deviations(report: &Value) -> Vec<(String, Vec<u64>, String, String)> {
    report["deviations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| {
            (
                d["quantity"].as_str().unwrap().to_string(),
                d["index"].as_array().unwrap().iter().map(|i| i.as_u64().unwrap()).collect(),
                d["expected"].as_str().unwrap().to_string(),
                d["actual"].as_str().unwrap().to_string(),
            )
        })
        .collect()
}

fn criterion_1() -> String {
    let started = Instant::now();
    let f = MatrixFamily::new(vec![a1(), a2(), a3()]).unwrap();
    let (sup, inf) = f.derive_boundaries();
    let elapsed = started.elapsed();
    assert_eq!(sup, &printed_a_sup());
    assert_eq!(inf, &printed_a_inf());
    assert!(elapsed < Duration::from_millis(1), "{elapsed:?}");
    format!("A^sup and A^inf match all 50 entries ({elapsed:?})")
}

fn criterion_2() -> String {
    let l = lambda_star(&printed_a_sup()).unwrap();
    assert_eq!(l.mean, Finite(qf(-2, 3)));
    let witness: Vec<usize> = l.witness.unwrap().iter().map(|v| v + 1).collect();
    assert_eq!(witness, vec![2, 5, 4]);
    "lambda* = -2/3, witness cycle (2,5,4)".into()
}

fn criterion_3() -> String {
    let f = example_family();
    let sup = f.a_sup();
    let a = alpha(sup).unwrap().column(0);
    let b = beta(sup).unwrap().column(0);
    let g = gamma(sup).unwrap();
    let w = f.inf_walk_to_one().unwrap().column(0);
    let v = f.inf_walk_from_one().unwrap().column(0);

    assert_eq!(b, ints(&[0, 2, -2, 1, -1]));
    assert_eq!(g, printed_gamma());
    assert_eq!(a, ints(&[0, -3, -6, -4, -1]));
    assert_eq!(w, ints(&[0, -5, -14, -10, -6]));
    assert_eq!(v, ints(&[0, -4, -4, -8, -10]));

    assert_eq!(a, brute_into_first(sup));
    assert_eq!(b, brute_from_first(sup));
    assert_eq!(g, brute_gamma(sup));
    assert_eq!(w, brute_into_first(f.a_inf()));
    assert_eq!(v, brute_from_first(f.a_inf()));

    let report = cli_report(&["derive", &fixture("family.json"), "--expected", &fixture("expected_values.json")]);
    let found = deviations(&report);
    let d = |q: &str, i: u64, e: &str, a: &str| (q.to_string(), vec![i], e.to_string(), a.to_string());
    assert_eq!(
        found,
        vec![
            d("alpha", 5, "-2", "-1"),
            d("w", 2, "-4", "-5"),
            d("w", 3, "-13", "-14"),
            d("w", 4, "-9", "-10"),
            d("v", 2, "-5", "-4"),
        ]
    );
    "beta, gamma as printed; alpha, w, v derived and oracle-confirmed; deviations alpha5 w2 w3 w4 v2 reported".into()
}

fn criterion_4() -> String {
    let f = example_family();
    let g = fold(&f, &sequence_44()).unwrap();
    let r = implicit_bound(&f, &g).unwrap();
    assert_eq!(r.overall, BoundValue::Finite(qf(55, 2)));
    assert_eq!(r.term1.get(4, 3), &BoundValue::Finite(q(25)));

    let report = cli_report(&[
        "bound",
        &fixture("family.json"),
        &fixture("sequence_44.json"),
        "--expected",
        &fixture("expected_values.json"),
    ]);
    assert_eq!(report["bounds"]["implicit"]["overall"], "55/2");
    let logged: Vec<String> = deviations(&report)
        .into_iter()
        .filter(|(q, ..)| q.starts_with("implicit"))
        .map(|(q, i, e, a)| format!("{q}{i:?} printed {e} derived {a}"))
        .collect();
    assert_eq!(logged.len(), 5, "{logged:?}");
    format!(
        "implicit overall 55/2; term1 (5,4) = 25 (28 claimed); logged: {}",
        logged.join("; ")
    )
}

fn criterion_5() -> String {
    let f = example_family();
    let r = explicit_bound(&f).unwrap();
    assert_eq!(r.overall, BoundValue::Finite(q(34)));
    let (t1, t2) = brute_bound(
        &qf(-2, 3),
        &brute_into_first(f.a_sup()),
        &brute_from_first(f.a_sup()),
        &brute_gamma(f.a_sup()),
        &brute_into_first(f.a_inf()),
        &brute_from_first(f.a_inf()),
    );
    let independent = std::cmp::max(t1.unwrap(), t2.unwrap());
    assert_eq!(independent, q(34));

    let printed = bound_from_parts(
        BoundInputs {
            lambda: Finite(qf(-2, 3)),
            alpha: ints(&[0, -3, -6, -4, -2]),
            beta: ints(&[0, 2, -2, 1, -1]),
            gamma: printed_gamma(),
            to_first: ints(&[0, -4, -13, -9, -6]),
            from_first: ints(&[0, -5, -4, -8, -10]),
        },
        BoundMode::Explicit,
    )
    .unwrap();
    assert_eq!(printed.overall, BoundValue::Finite(qf(65, 2)));
    assert_eq!(printed.min_admissible_length(), Some(q(33)));
    assert!(printed.check_length_sufficient(33));
    assert!(!printed.check_length_sufficient(32));
    "explicit 34 (closed form agrees); printed intermediates give 65/2, shortest certified length 33".into()
}

fn criterion_6() -> String {
    let f = example_family();
    let g = fold(&f, &sequence_44()).unwrap();
    let (x, y) = g.rank_one_factor().unwrap().expect("rank one");
    assert_eq!(x.column(0), ints(&[0, -3, -10, -10, -6]));
    assert_eq!(y.column(0), ints(&[0, -1, -2, -6, -4]));
    let t = build_trellis(&f, &sequence_44()).unwrap();
    let mut mismatches = Vec::new();
    for i in 0..5 {
        for j in 0..5 {
            if g.get(i, j) != printed_gamma_44().get(i, j) {
                assert_eq!(&t.optimal_full_walk(i, j).weight, g.get(i, j));
                mismatches.push((i + 1, j + 1));
            }
        }
    }
    assert!(mismatches.is_empty(), "unconfirmed entries {mismatches:?}");
    "Gamma(44) matches all 25 printed entries; factors w* and v* as printed".into()
}

fn criterion_7() -> String {
    let started = Instant::now();
    let f = example_family();
    let mut r = rng(7);
    for _ in 0..1000 {
        let len = r.gen_range(35..=80);
        let seq = random_sequence_of(&mut r, 3, len);
        let g = fold(&f, &seq).unwrap();
        assert!(g.is_rank_one(), "{:?}", seq.one_based());
        let pivot = g.get(0, 0).value().unwrap().clone();
        for i in 0..5 {
            for j in 0..5 {
                let expected = g.get(i, 0).value().unwrap() + g.get(0, j).value().unwrap() - pivot.clone();
                assert_eq!(g.get(i, j), &Finite(expected));
            }
        }
        let t = build_trellis(&f, &seq).unwrap();
        assert_eq!(t.w_star(), g.column(0));
        assert_eq!(t.v_star(), g.row(0).to_vec());
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(10), "{elapsed:?}");
    format!("1000 sequences of length 35..=80 rank one with trellis factors ({:.2?})", elapsed)
}

fn criterion_8() -> String {
    let started = Instant::now();
    let mut r = rng(8);
    let (mut l4_checked, mut l12_checked) = (0, 0);
    for _ in 0..200 {
        let f = random_valid_family(&mut r, 4, 3);
        let len = r.gen_range(1..=8);
        let seq = random_sequence_of(&mut r, f.len(), len);
        let t = build_trellis(&f, &seq).unwrap();
        for i in 0..f.n() {
            for j in 0..f.n() {
                assert_eq!(
                    t.optimal_full_walk(i, j).weight,
                    enumerate_walks(&t, i, j, WalkClass::Full).unwrap().weight
                );
            }
            let ini = t.optimal_initial_walk(i);
            let ini_brute = enumerate_walks(&t, i, 0, WalkClass::Initial).unwrap();
            assert_eq!(ini.weight, ini_brute.weight);
            assert_eq!(ini.min_length_among_optima, ini_brute.min_length_among_optima);
            let fin = t.optimal_final_walk(i);
            let fin_brute = enumerate_walks(&t, 0, i, WalkClass::Final).unwrap();
            assert_eq!(fin.weight, fin_brute.weight);
            assert_eq!(fin.min_length_among_optima, fin_brute.min_length_among_optima);
        }
        let report = check_lemma_bounds(&t, &t.derived_inputs(&f).unwrap()).unwrap();
        assert!(report.initial_length.holds() && report.final_length.holds(), "{report:?}");
        assert!(report.avoiding_first.holds(), "{report:?}");
        l12_checked += report.initial_length.checked + report.final_length.checked;
        l4_checked += report.avoiding_first.checked;
    }
    let elapsed = started.elapsed();
    assert!(l4_checked > 0);
    assert!(elapsed < Duration::from_secs(60), "{elapsed:?}");
    format!(
        "200 families: DP equals enumeration; {l12_checked} length checks, {l4_checked} avoiding-walk checks ({:.2?})",
        elapsed
    )
}

fn random_rational(r: &mut rand_chacha::ChaCha8Rng) -> Rational {
    qf(r.gen_range(-30..=30), r.gen_range(1..=6))
}

fn random_scalar(r: &mut rand_chacha::ChaCha8Rng) -> Scalar {
    if r.gen_bool(0.2) {
        Epsilon
    } else {
        Finite(random_rational(r))
    }
}

fn random_matrix(r: &mut rand_chacha::ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::new(rows, cols, (0..rows * cols).map(|_| random_scalar(r)).collect()).unwrap()
}

fn finite_vector(r: &mut rand_chacha::ChaCha8Rng, n: usize) -> Vec<Scalar> {
    (0..n).map(|_| Finite(random_rational(r))).collect()
}

fn criterion_9() -> String {
    const CASES: usize = 500;
    let mut r = rng(9);
    for _ in 0..CASES {
        let dims: Vec<usize> = (0..4).map(|_| r.gen_range(1..=4)).collect();
        let a = random_matrix(&mut r, dims[0], dims[1]);
        let b = random_matrix(&mut r, dims[1], dims[2]);
        let c = random_matrix(&mut r, dims[2], dims[3]);
        assert_eq!(
            a.mul(&b).unwrap().mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
    }
    for _ in 0..CASES {
        let n = r.gen_range(1..=4);
        let lo = random_matrix(&mut r, n, n);
        let hi = Matrix::new(
            n,
            n,
            lo.entries()
                .iter()
                .map(|e| match e {
                    Finite(v) => Finite(v.clone() + q(r.gen_range(0..=5))),
                    Epsilon => random_scalar(&mut r),
                })
                .collect(),
        )
        .unwrap();
        let c = random_matrix(&mut r, n, n);
        assert!(lo.le(&hi));
        assert!(lo.mul(&c).unwrap().le(&hi.mul(&c).unwrap()));
        assert!(c.mul(&lo).unwrap().le(&c.mul(&hi).unwrap()));
    }
    for _ in 0..CASES {
        let n = r.gen_range(1..=5);
        let x = Matrix::column_vector(finite_vector(&mut r, n));
        let y = Matrix::column_vector(finite_vector(&mut r, n));
        let m = Matrix::outer_product(&x, &y).unwrap();
        let (fx, fy) = m.rank_one_factor().unwrap().expect("rank one");
        assert_eq!(Matrix::outer_product(&fx, &fy).unwrap(), m);
        assert!(naive_rank_one(&m));
    }
    for _ in 0..CASES {
        let n = r.gen_range(1..=5);
        let lambda = qf(-r.gen_range(1..=12), r.gen_range(1..=6));
        let inputs = BoundInputs {
            lambda: Finite(lambda.clone()),
            alpha: finite_vector(&mut r, n),
            beta: finite_vector(&mut r, n),
            gamma: Matrix::new(n, n, finite_vector(&mut r, n * n)).unwrap(),
            to_first: finite_vector(&mut r, n),
            from_first: finite_vector(&mut r, n),
        };
        let report = bound_from_parts(inputs.clone(), BoundMode::Explicit).unwrap();
        for i in 0..n {
            for j in 0..n {
                let t1 = report.term1.get(i, j).finite().unwrap().clone();
                let t2 = report.term2.get(i, j).finite().unwrap().clone();
                let g = inputs.gamma.get(i, j).value().unwrap();
                let a = inputs.alpha[i].value().unwrap();
                let b = inputs.beta[j].value().unwrap();
                assert_eq!(t2 - t1, (g - a - b) / lambda.clone() + q(n as i64 - 1));
            }
        }
    }
    format!("{CASES} exact instances each: associativity, monotonicity, outer-product round trip, term identity")
}

fn report(line: &str) {
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{line}");
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> String); 9] = [
        ("boundary matrices", criterion_1),
        ("lambda* and critical cycle", criterion_2),
        ("alpha beta gamma w v", criterion_3),
        ("implicit bound", criterion_4),
        ("explicit bound", criterion_5),
        ("44-factor product", criterion_6),
        ("soundness beyond the bound", criterion_7),
        ("trellis oracle equivalence", criterion_8),
        ("algebraic properties", criterion_9),
    ];
    let mut failed = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        match catch_unwind(AssertUnwindSafe(check)) {
            Ok(detail) => report(&format!("criterion {}: PASS  {name}: {detail}", k + 1)),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                report(&format!("criterion {}: FAIL  {name}: {msg}", k + 1));
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
