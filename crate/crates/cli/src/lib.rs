//! Command-line front end for `tropical-transient`.
//!
//! [`run`] does all the work and returns the exit code together with the
//! text destined for stdout and stderr, so the binary stays a thin shell.

pub mod input;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use tropical_transient::{
    alpha, beta, bound_from_parts, build_trellis, estimate_transient, explicit_bound, fold, gamma, implicit_bound,
    lambda_star, BoundInputs, BoundMode, Error, Family, ProductSequence, SearchMode, TransientConfig,
};

use input::{read_file, ExpectedFile, FamilyFile, InputError, Token};
use report::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_ASSUMPTION: i32 = 2;
pub const EXIT_NOT_RANK_ONE: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Pretty,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Parser)]
#[command(name = "tropical-transient", version, about = "Rank-one transients of inhomogeneous max-plus products")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Emit whatever can be computed even when an assumption fails.
    #[arg(long, global = true)]
    pub force: bool,
    /// JSON file of expected values; mismatches go to the `deviations` section.
    #[arg(long, global = true)]
    pub expected: Option<PathBuf>,
    /// Worker threads for the transient search.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the family assumptions.
    Validate { family: PathBuf },
    /// Boundary matrices and the quantities the bounds are built from.
    Derive { family: PathBuf },
    /// Explicit bound, plus the implicit bound of a product when a sequence is given.
    Bound { family: PathBuf, sequence: Option<PathBuf> },
    /// Fold a product and verify it is rank one with the predicted factors.
    Check { family: PathBuf, sequence: PathBuf },
    /// Search products up to a horizon for ones that are not rank one.
    Transient {
        family: PathBuf,
        #[arg(long, default_value_t = 20)]
        horizon: usize,
        #[arg(long, value_enum, default_value_t = Mode::Sampled)]
        mode: Mode,
        /// Products per length in sampled mode; ignored in exhaustive mode.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest number of products an exhaustive search may fold.
        #[arg(long, default_value_t = 1 << 22)]
        budget: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Derive { .. } => "derive",
            Command::Bound { .. } => "bound",
            Command::Check { .. } => "check",
            Command::Transient { .. } => "transient",
        }
    }

    fn family(&self) -> &PathBuf {
        match self {
            Command::Validate { family }
            | Command::Derive { family }
            | Command::Bound { family, .. }
            | Command::Check { family, .. }
            | Command::Transient { family, .. } => family,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(code: i32, message: impl Into<String>) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {}\n", message.into()),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
///
/// Usage errors exit with 1, keeping 2 for assumption failures.
pub fn run_args<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match execute(cli) {
        Ok((code, report, stderr)) => Outcome {
            code,
            stdout: match cli.format {
                Format::Json => serde_json::to_string_pretty(&report).expect("reports always serialise") + "\n",
                Format::Pretty => pretty(&report),
            },
            stderr,
        },
        Err(Failure::Input(e)) => Outcome::error(EXIT_INPUT, e.0),
        Err(Failure::Budget(msg)) => Outcome::error(EXIT_BUDGET, msg),
    }
}

enum Failure {
    Input(InputError),
    Budget(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded(msg) => Failure::Budget(msg),
            other => Failure::Input(other.into()),
        }
    }
}

fn execute(cli: &Cli) -> Result<(i32, Report, String), Failure> {
    let file = FamilyFile::from_json(&read_file(cli.command.family())?)?;
    let family = file.to_family()?;
    let expected = match &cli.expected {
        Some(path) => Some(ExpectedFile::from_json(&read_file(path)?)?),
        None => None,
    };
    let sequence = match &cli.command {
        Command::Bound { sequence: Some(p), .. } | Command::Check { sequence: p, .. } => {
            Some(input::parse_sequence(&read_file(p)?, family.len())?)
        }
        _ => None,
    };
    if let Command::Transient { horizon: 0, .. } = cli.command {
        return Err(InputError("--horizon must be at least 1".into()).into());
    }

    let validation = validation_section(family.validate());
    let mut report = Report {
        command: cli.command.name().to_string(),
        family: FamilySummary {
            n: family.n(),
            members: file.names(),
        },
        validation,
        derived: None,
        bounds: None,
        check: None,
        transient: None,
        deviations: Vec::new(),
    };

    let failure = family.validate().first_failure().map(|(label, v)| {
        format!(
            "assumption {label} fails: {}\n",
            tropical_transient::family::describe(v)
        )
    });
    let forced = cli.force && matches!(cli.command, Command::Derive { .. });
    if let Some(message) = &failure {
        if !forced {
            return Ok((EXIT_ASSUMPTION, report, message.clone()));
        }
    }

    let mut code = EXIT_OK;
    let mut stderr = failure.unwrap_or_default();
    match &cli.command {
        Command::Validate { .. } => {}
        Command::Derive { .. } => {
            report.derived = Some(derived_section(&family));
        }
        Command::Bound { .. } => {
            report.derived = Some(derived_section(&family));
            report.bounds = Some(bounds_section(&family, sequence.as_ref(), expected.as_ref())?);
        }
        Command::Check { .. } => {
            let seq = sequence.as_ref().expect("check always reads a sequence");
            report.derived = Some(derived_section(&family));
            let check = check_section(&family, seq)?;
            if !(check.rank_one && check.consistent) {
                code = EXIT_NOT_RANK_ONE;
                stderr.push_str(if check.rank_one {
                    "product is rank one but its factors disagree with the trellis optima\n"
                } else {
                    "product is not rank one\n"
                });
            }
            report.check = Some(check);
        }
        Command::Transient {
            horizon,
            mode,
            samples,
            seed,
            budget,
            ..
        } => {
            let config = TransientConfig {
                horizon: *horizon,
                mode: match mode {
                    Mode::Exhaustive => SearchMode::Exhaustive,
                    Mode::Sampled => SearchMode::Sampled,
                },
                samples_per_length: *samples,
                seed: *seed,
                budget: *budget,
                threads: cli.threads,
            };
            let estimate = estimate_transient(&family, &config)?;
            report.transient = Some(transient_section(&estimate, *samples));
        }
    }
    if let Some(expected) = &expected {
        report.deviations = deviations(expected, &report);
    }
    Ok((code, report, stderr))
}

fn derived_section(family: &Family) -> DerivedSection {
    let sup = family.a_sup();
    DerivedSection {
        a_sup: grid(sup),
        a_inf: grid(family.a_inf()),
        lambda_star: lambda_star(sup).ok().map(|c| CycleMean {
            value: input::render_scalar(&c.mean),
            witness: c.witness.map(|w| w.iter().map(|v| v + 1).collect()),
        }),
        alpha: alpha(sup).ok().map(|m| vector(&m.column(0))),
        beta: beta(sup).ok().map(|m| vector(&m.column(0))),
        gamma: gamma(sup).ok().map(|m| grid(&m)),
        w: family.inf_walk_to_one().ok().map(|m| vector(&m.column(0))),
        v: family.inf_walk_from_one().ok().map(|m| vector(&m.column(0))),
    }
}

fn tokens(v: &[Token]) -> Vec<tropical_transient::Scalar> {
    v.iter().map(|t| t.0.clone()).collect()
}

fn token_grid(g: &[Vec<Token>]) -> Result<tropical_transient::Matrix, InputError> {
    Ok(tropical_transient::Matrix::from_rows(g.iter().map(|r| tokens(r)).collect())?)
}

fn bounds_section(
    family: &Family,
    sequence: Option<&ProductSequence>,
    expected: Option<&ExpectedFile>,
) -> Result<BoundsSection, Failure> {
    let explicit = explicit_bound(family)?;
    let explicit_from_expected = match expected {
        Some(ExpectedFile {
            lambda_star: Some(lambda),
            alpha: Some(a),
            beta: Some(b),
            gamma: Some(g),
            w: Some(w),
            v: Some(v),
            ..
        }) => {
            let inputs = BoundInputs {
                lambda: lambda.0.clone(),
                alpha: tokens(a),
                beta: tokens(b),
                gamma: token_grid(g)?,
                to_first: tokens(w),
                from_first: tokens(v),
            };
            Some(bound_section(&bound_from_parts(inputs, BoundMode::Explicit)?))
        }
        _ => None,
    };
    let (implicit, length, guaranteed, note) = match sequence {
        Some(seq) => {
            let product = fold(family, seq)?;
            let implicit = implicit_bound(family, &product)?;
            let ok = implicit.check_length_sufficient(seq.len());
            let note = (!ok).then(|| "length not guaranteed".to_string());
            (Some(bound_section(&implicit)), Some(seq.len()), Some(ok), note)
        }
        None => (None, None, None, None),
    };
    Ok(BoundsSection {
        explicit: bound_section(&explicit),
        explicit_from_expected,
        implicit,
        sequence_length: length,
        length_guaranteed: guaranteed,
        note,
    })
}

fn check_section(family: &Family, seq: &ProductSequence) -> Result<CheckSection, Failure> {
    let product = fold(family, seq)?;
    let factors = product.rank_one_factor().ok().flatten();
    let t = build_trellis(family, seq)?;
    let (w_star, v_star) = (t.w_star(), t.v_star());
    let consistent = product.column(0) == w_star && product.row(0) == v_star.as_slice();
    let implicit = implicit_bound(family, &product)?;
    Ok(CheckSection {
        sequence_length: seq.len(),
        product: grid(&product),
        rank_one: factors.is_some(),
        column_factor: factors.as_ref().map(|(x, _)| vector(&x.column(0))),
        row_factor: factors.as_ref().map(|(_, y)| vector(&y.column(0))),
        w_star: vector(&w_star),
        v_star: vector(&v_star),
        consistent,
        implicit_overall: Some(bound_value(&implicit.overall)),
        length_guaranteed: Some(implicit.check_length_sufficient(seq.len())),
    })
}

fn render_tokens(v: &[Token]) -> Vec<String> {
    v.iter().map(|t| input::render_scalar(&t.0)).collect()
}

fn render_token_grid(g: &[Vec<Token>]) -> Grid {
    g.iter().map(|r| render_tokens(r)).collect()
}

/// Compares every quantity present in both the expected file and the report.
fn deviations(expected: &ExpectedFile, report: &Report) -> Vec<Deviation> {
    let mut out = Vec::new();
    let grid_pair = |name: &str, e: &Option<Vec<Vec<Token>>>, a: Option<&Grid>, out: &mut Vec<Deviation>| {
        if let (Some(e), Some(a)) = (e, a) {
            compare_grid(name, &render_token_grid(e), a, out);
        }
    };
    let vector_pair = |name: &str, e: &Option<Vec<Token>>, a: Option<&Vec<String>>, out: &mut Vec<Deviation>| {
        if let (Some(e), Some(a)) = (e, a) {
            compare_vector(name, &render_tokens(e), a, out);
        }
    };
    if let Some(d) = &report.derived {
        grid_pair("a_sup", &expected.a_sup, Some(&d.a_sup), &mut out);
        grid_pair("a_inf", &expected.a_inf, Some(&d.a_inf), &mut out);
        if let (Some(e), Some(a)) = (&expected.lambda_star, &d.lambda_star) {
            compare_scalar("lambda_star", &input::render_scalar(&e.0), &a.value, &mut out);
        }
        vector_pair("alpha", &expected.alpha, d.alpha.as_ref(), &mut out);
        vector_pair("beta", &expected.beta, d.beta.as_ref(), &mut out);
        grid_pair("gamma", &expected.gamma, d.gamma.as_ref(), &mut out);
        vector_pair("w", &expected.w, d.w.as_ref(), &mut out);
        vector_pair("v", &expected.v, d.v.as_ref(), &mut out);
    }
    if let Some(b) = &report.bounds {
        grid_pair("explicit_term1", &expected.explicit_term1, Some(&b.explicit.term1), &mut out);
        grid_pair("explicit_term2", &expected.explicit_term2, Some(&b.explicit.term2), &mut out);
        if let Some(e) = &expected.explicit_overall {
            compare_scalar("explicit_overall", &input::render_scalar(&e.0), &b.explicit.overall, &mut out);
        }
        if let Some(i) = &b.implicit {
            grid_pair("implicit_term1", &expected.implicit_term1, Some(&i.term1), &mut out);
            grid_pair("implicit_term2", &expected.implicit_term2, Some(&i.term2), &mut out);
            if let Some(e) = &expected.implicit_overall {
                compare_scalar("implicit_overall", &input::render_scalar(&e.0), &i.overall, &mut out);
            }
        }
    }
    if let Some(c) = &report.check {
        grid_pair("product", &expected.product, Some(&c.product), &mut out);
        vector_pair("w_star", &expected.w_star, Some(&c.w_star), &mut out);
        vector_pair("v_star", &expected.v_star, Some(&c.v_star), &mut out);
    }
    out
}
