//! `zetafrob` command line: parse a curve, run the pipeline (and optionally
//! the point-counting oracle) and print one JSON object.

pub mod parse;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Map, Number, Value};

use zetafrob::gf::FieldDesc;
use zetafrob::kedlaya::{zeta_pipeline, Basis, KedlayaError, Overrides, ZetaResult};
use zetafrob::oracle::{oracle_lpoly, OracleError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Auto,
    B1,
    B2,
}

/// Zeta function numerator L(X) of y^2 = Q(x) over F_q, q = p^n, p odd.
#[derive(Parser, Debug)]
#[command(name = "zetafrob", version)]
pub struct Args {
    /// Odd prime p.
    #[arg(long)]
    pub p: u64,
    /// Extension degree n.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Monic irreducible m(t) defining F_q = F_p[t]/(m), as integers
    /// m_0,...,m_n. Required when n > 1.
    #[arg(long)]
    pub modulus: Option<String>,
    /// Q(x), lowest degree first; each coefficient is `c0:c1:...` in t.
    #[arg(long = "q-poly", allow_hyphen_values = true)]
    pub q_poly: String,
    #[arg(long, value_enum, default_value_t = BasisArg::Auto)]
    pub basis: BasisArg,
    /// Target precision N of the characteristic polynomial residues.
    #[arg(long)]
    pub precision: Option<u32>,
    /// Also count points by enumeration and compare.
    #[arg(long)]
    pub oracle: bool,
    /// Write the JSON result here instead of stdout.
    #[arg(long = "json-out")]
    pub json_out: Option<PathBuf>,
    /// Seed for the oracle's extension-field search.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Print per-stage timings to stderr.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }
}

fn kedlaya_failure(e: KedlayaError) -> Failure {
    let code = if e.is_internal() || matches!(e, KedlayaError::PrecisionExhausted(_)) {
        EXIT_INTERNAL
    } else {
        EXIT_INPUT
    };
    let kind = match &e {
        KedlayaError::WeilBoundViolation { .. } => "WeilBoundViolation",
        KedlayaError::NonBasisResidual { .. } => "NonBasisResidual",
        KedlayaError::NewtonDivisionFailure(_) => "NewtonDivisionFailure",
        KedlayaError::NonPositiveJacobianOrder(_) => "NonPositiveJacobianOrder",
        KedlayaError::PrecisionExhausted(_) => "PrecisionExhausted",
        KedlayaError::NotSeparable => "NotSeparable",
        KedlayaError::DegreeTooSmall(_) => "DegreeTooSmall",
        _ => "error",
    };
    Failure { code, message: format!("{kind}: {e}") }
}

fn oracle_failure(e: OracleError) -> Failure {
    match e {
        OracleError::NonIntegralCoefficient(_) => {
            Failure { code: EXIT_INTERNAL, message: format!("NonIntegralCoefficient: {e}") }
        }
        other => Failure::input(format!("oracle: {other}")),
    }
}

fn big_array(cs: &[BigInt]) -> Value {
    Value::Array(
        cs.iter()
            .map(|c| Value::Number(c.to_string().parse::<Number>().expect("integer literal")))
            .collect(),
    )
}

fn document(args: &Args, field: &FieldDesc, r: &ZetaResult) -> Map<String, Value> {
    let timings: Map<String, Value> = r
        .timings
        .iter()
        .map(|(s, d)| (s.name().to_string(), json!(d.as_secs_f64() * 1e3)))
        .collect();
    let doc = json!({
        "L": big_array(&r.l.coeffs),
        "p": field.p(),
        "n": field.n(),
        "q": r.q.to_string().parse::<Number>().expect("integer literal"),
        "g": r.g,
        "d": r.d,
        "basis": r.basis.which.to_string(),
        "strip": r.basis.strip.to_string(),
        "N1": r.plan.n1,
        "N": r.plan.n,
        "nwork": r.plan.nwork,
        "tail_bound": r.plan.tail_bound,
        "matrix_min_valuation": r.matrix_min_valuation,
        "twisted": r.twisted,
        "timings_ms": timings,
        "warnings": r.warnings,
        "oracle_L": Value::Null,
        "match": Value::Null,
        "seed": args.seed,
    });
    match doc {
        Value::Object(m) => m,
        _ => unreachable!(),
    }
}

fn execute(args: &Args, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    if args.p.is_multiple_of(2) {
        return Err(Failure::input("p must be odd"));
    }
    let modulus = match &args.modulus {
        Some(m) => Some(parse::parse_modulus(m, args.p).map_err(|e| Failure::input(e.to_string()))?),
        None if args.n > 1 => return Err(Failure::input("--modulus is required when n > 1")),
        None => None,
    };
    let field = FieldDesc::new(args.p, args.n, modulus.as_deref())
        .map_err(|e| Failure::input(format!("field: {e}")))?;
    let q = parse::parse_poly(&field, &args.q_poly).map_err(|e| Failure::input(e.to_string()))?;
    let overrides = Overrides {
        basis: match args.basis {
            BasisArg::Auto => None,
            BasisArg::B1 => Some(Basis::B1),
            BasisArg::B2 => Some(Basis::B2),
        },
        precision: args.precision,
    };
    let result = zeta_pipeline(&field, &q, &overrides).map_err(kedlaya_failure)?;
    let mut doc = document(args, &field, &result);
    let mut code = EXIT_OK;
    if args.oracle {
        let want = oracle_lpoly(&q, args.seed).map_err(oracle_failure)?;
        let same = want == result.l;
        doc.insert("oracle_L".into(), big_array(&want.coeffs));
        doc.insert("match".into(), Value::Bool(same));
        if !same {
            let _ = writeln!(stderr, "oracle mismatch: pipeline {} vs oracle {}", result.l, want);
            code = EXIT_INTERNAL;
        }
    }
    for w in &result.warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    if args.timing {
        for (stage, d) in &result.timings {
            let _ = writeln!(stderr, "{:>9}: {:>10.3} ms", stage.name(), d.as_secs_f64() * 1e3);
        }
    }
    let text = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
    match &args.json_out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?,
        None => {
            let _ = writeln!(stdout, "{text}");
        }
    }
    Ok(code)
}

/// Runs the command line with explicit output streams; returns the exit code.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) if e.use_stderr() => {
            let _ = write!(stderr, "{e}");
            return EXIT_INPUT;
        }
        Err(e) => {
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
    };
    match execute(&args, stdout, stderr) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout(), &mut std::io::stderr())
}
