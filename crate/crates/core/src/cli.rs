//! Command-line surface of `hadinv`.
//!
//! Exit codes: 0 success, 1 input error, 2 usage error, 3 invariant or
//! oracle violation, 4 verify-suite failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::group::{realize_subgroup, GroupElement};
use crate::hadamard::{
    check_sim, d_u, decompose_dpw, fourier, fourier_tensor, gen_diag_vec, gen_sigma_vec, is_hadamard,
    parse_usize_list, u1, DpwForm, FourierSpec, HadamardMatrix,
};
use crate::invariants::{pair_report, random_campaign, realization_sweep, InvariantReport, Ratio};
use crate::io::{matrix_from_json, to_json, to_json_pretty};
use crate::matrix::{classify, DenseMatrix, Tolerance, C64};
use crate::verify::{run_suite, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "hadinv", version, about = "Invariants of pairs of Fourier-type Hadamard subfactors")]
pub struct Cli {
    /// Entry tolerance eps_entry (default 1e-9).
    #[arg(long, global = true, env = "HADINV_TOLERANCE")]
    pub tolerance: Option<f64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Worker threads for sweeps and the verify suite.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: Option<u16>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Fourier,
    FourierTensor,
    Diag,
    Sigma,
    Dpw,
    #[value(name = "d-u")]
    DU,
    #[value(name = "u1")]
    U1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Realize,
    Random,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit a generated matrix as JSON.
    Gen(GenArgs),
    /// Classify a matrix, or compare two.
    Check(CheckArgs),
    /// Invariant report for a pair (U, V).
    Report(ReportArgs),
    /// Realize the subgroup of a divisor vector as a pair (W, D·W).
    Realize(RealizeArgs),
    /// Realization table or seeded random property campaign.
    Sweep(SweepArgs),
    /// Run the self-check suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub spec: String,
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// Exponent vector for `diag` and `sigma`, one entry per factor.
    #[arg(long)]
    pub k: Option<String>,
    /// Permutation for `dpw`: row i of P has its 1 in column perm[i].
    #[arg(long)]
    pub perm: Option<String>,
    /// Phases for `dpw` as fractions t of a full turn (t ↦ e^{2πit}).
    #[arg(long, allow_hyphen_values = true)]
    pub phases: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub first: PathBuf,
    pub second: Option<PathBuf>,
    /// Also try a D·P·W decomposition against this spec.
    #[arg(long)]
    pub spec: Option<String>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    pub u: PathBuf,
    pub v: PathBuf,
    #[arg(long)]
    pub spec: String,
}

#[derive(Debug, Args)]
pub struct RealizeArgs {
    #[arg(long)]
    pub spec: String,
    #[arg(long)]
    pub divisors: String,
    /// Directory receiving `u.json` and `v.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub spec: String,
    #[arg(long, value_enum)]
    pub mode: Mode,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 12)]
    pub max_order: usize,
    #[arg(long, default_value = "2,3,4")]
    pub gamma_orders: String,
}

/// Failure carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::OracleMismatch { .. } | Error::RealizationFailed { .. } => EXIT_VIOLATION,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: e.to_string(),
        }
    }
}

type Outcome = std::result::Result<i32, Failure>;

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

struct Ctx {
    tol: Tolerance,
    format: Format,
    out: Vec<u8>,
}

/// Parses `args` (including the program name) and runs the command, writing
/// results to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Outcome {
    let tol = match cli.tolerance {
        Some(t) => Tolerance::default().with_entry(t).map_err(|e| usage(e.to_string()))?,
        None => Tolerance::default(),
    };
    let mut ctx = Ctx {
        tol,
        format: cli.format,
        out: Vec::new(),
    };
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(j) = cli.jobs {
            b = b.num_threads(j as usize);
        }
        b.build().map_err(|e| Failure {
            code: EXIT_INPUT,
            message: e.to_string(),
        })?
    };
    let outcome = pool.install(|| match cli.command {
        Command::Gen(a) => cmd_gen(&mut ctx, a),
        Command::Check(a) => cmd_check(&mut ctx, a),
        Command::Report(a) => cmd_report(&mut ctx, a),
        Command::Realize(a) => cmd_realize(&mut ctx, a),
        Command::Sweep(a) => cmd_sweep(&mut ctx, a),
        Command::Verify(a) => cmd_verify(&mut ctx, a),
    });
    out.write_all(&ctx.out)?;
    out.flush()?;
    outcome
}

fn read_matrix(path: &Path) -> std::result::Result<DenseMatrix, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("{}: {e}", path.display()),
    })?;
    matrix_from_json(&text).map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("{}: {e}", path.display()),
    })
}

fn read_hadamard(path: &Path, tol: &Tolerance) -> std::result::Result<HadamardMatrix, Failure> {
    let m = read_matrix(path)?;
    HadamardMatrix::try_new(m, tol).map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("{}: {e}", path.display()),
    })
}

/// Six decimals, without a sign on values that round to zero.
fn fixed6(x: f64) -> String {
    let x = if x.abs() < 5e-7 { 0.0 } else { x };
    format!("{x:.6}")
}

fn fmt_c(z: &C64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

fn matrix_text(m: &DenseMatrix) -> String {
    let n = m.dim();
    (0..n)
        .map(|i| (0..n).map(|j| fmt_c(&m[(i, j)])).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
}

fn parse_spec(s: &str) -> std::result::Result<FourierSpec, Failure> {
    s.parse::<FourierSpec>().map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("--spec: {e}"),
    })
}

fn parse_list(flag: &str, s: &str) -> std::result::Result<Vec<usize>, Failure> {
    parse_usize_list(s).map_err(|e| usage(format!("--{flag}: {e}")))
}

fn parse_phases(s: &str) -> std::result::Result<Vec<C64>, Failure> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            let x: f64 = t
                .parse()
                .map_err(|_| usage(format!("--phases: not a number: {t:?}")))?;
            if !x.is_finite() {
                return Err(usage(format!("--phases: not finite: {t:?}")));
            }
            Ok(C64::from_polar(1.0, std::f64::consts::TAU * x))
        })
        .collect()
}

fn generate(a: &GenArgs, tol: &Tolerance) -> std::result::Result<DenseMatrix, Failure> {
    let spec = &parse_spec(&a.spec)?;
    let exponent = || -> std::result::Result<GroupElement, Failure> {
        let k = a.k.as_deref().ok_or_else(|| usage("--k is required for this kind"))?;
        Ok(GroupElement::new(parse_list("k", k)?))
    };
    Ok(match a.kind {
        Kind::Fourier => fourier(spec.order())?.into_matrix(),
        Kind::FourierTensor => fourier_tensor(spec).into_matrix(),
        Kind::Diag => gen_diag_vec(spec, &exponent()?)?,
        Kind::Sigma => gen_sigma_vec(spec, &exponent()?)?,
        Kind::DU => d_u(&fourier_tensor(spec)),
        Kind::U1 => u1(&fourier_tensor(spec)),
        Kind::Dpw => {
            let n = spec.order();
            let perm = match &a.perm {
                Some(p) => parse_list("perm", p)?,
                None => (0..n).collect(),
            };
            let phases = match &a.phases {
                Some(p) => parse_phases(p)?,
                None => vec![C64::new(1.0, 0.0); n],
            };
            DpwForm::new(spec.clone(), perm, phases, tol)?.realize().into_matrix()
        }
    })
}

fn emit(ctx: &mut Ctx, text: &str, path: Option<&Path>) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(|e| Failure {
            code: EXIT_INPUT,
            message: format!("{}: {e}", p.display()),
        }),
        None => {
            writeln!(ctx.out, "{text}")?;
            Ok(())
        }
    }
}

fn cmd_gen(ctx: &mut Ctx, a: GenArgs) -> Outcome {
    let m = generate(&a, &ctx.tol)?;
    let text = match ctx.format {
        Format::Json => to_json(&m),
        Format::Text => matrix_text(&m),
    };
    emit(ctx, &text, a.out.as_deref())?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CheckOutput {
    dim: usize,
    unitary: bool,
    hadamard: bool,
    diagonal: bool,
    permutation: bool,
    complex_permutation: bool,
    selfadjoint: bool,
    projection: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    dpw: Option<DpwForm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    equivalent: Option<bool>,
}

fn cmd_check(ctx: &mut Ctx, a: CheckArgs) -> Outcome {
    let m = read_matrix(&a.first)?;
    let class = classify(&m, &ctx.tol);
    let hadamard = is_hadamard(&m, &ctx.tol);
    let had = hadamard.then(|| HadamardMatrix::try_new(m.clone(), &ctx.tol)).transpose()?;
    let spec = a.spec.as_deref().map(parse_spec).transpose()?;
    let dpw = match (&spec, &had) {
        (Some(spec), Some(h)) => match decompose_dpw(h, spec, &ctx.tol) {
            Ok(f) => Some(f),
            Err(Error::NotDpwForm) => None,
            Err(e) => return Err(e.into()),
        },
        _ => None,
    };
    let equivalent = match (&a.second, &had) {
        (Some(p), Some(h)) => {
            let other = read_hadamard(p, &ctx.tol)?;
            Some(check_sim(h, &other, &ctx.tol)?.is_some())
        }
        (Some(_), None) => return Err(Error::NotHadamard.into()),
        _ => None,
    };
    let o = CheckOutput {
        dim: m.dim(),
        unitary: class.unitary,
        hadamard,
        diagonal: class.diagonal,
        permutation: class.permutation,
        complex_permutation: class.complex_permutation,
        selfadjoint: class.selfadjoint,
        projection: class.projection,
        dpw,
        equivalent,
    };
    match ctx.format {
        Format::Json => writeln!(ctx.out, "{}", to_json_pretty(&o))?,
        Format::Text => {
            writeln!(ctx.out, "dim: {}", o.dim)?;
            for (k, v) in [
                ("unitary", o.unitary),
                ("hadamard", o.hadamard),
                ("diagonal", o.diagonal),
                ("permutation", o.permutation),
                ("complex_permutation", o.complex_permutation),
                ("selfadjoint", o.selfadjoint),
                ("projection", o.projection),
            ] {
                writeln!(ctx.out, "{k}: {v}")?;
            }
            if let Some(f) = &o.dpw {
                let perm: Vec<String> = f.perm().iter().map(ToString::to_string).collect();
                writeln!(ctx.out, "dpw perm: {}", perm.join(","))?;
            }
            if let Some(e) = o.equivalent {
                writeln!(ctx.out, "equivalent: {e}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn report_text(r: &InvariantReport) -> String {
    let subgroup = match &r.subgroup {
        Some(h) => {
            let members: Vec<String> = h
                .members()
                .iter()
                .map(|g| {
                    let c: Vec<String> = g.coords().iter().map(ToString::to_string).collect();
                    format!("({})", c.join(","))
                })
                .collect();
            format!("{{{}}}", members.join(", "))
        }
        None => "none".into(),
    };
    let flags = if r.flags.is_empty() { "none".to_string() } else { r.flags.join(",") };
    [
        format!("N: {}", r.n),
        format!("spec: {}", r.spec),
        format!("distinct: {}", r.distinct),
        format!("conjugate: {}", r.conjugate),
        format!("dimA: {}", r.dim_a),
        format!("subgroup: {subgroup}"),
        format!("index: {}", r.index),
        format!("relcomm_dims: {}", r.relcomm_dims),
        format!("vertex: {}", r.vertex),
        format!("entropy_h: {}", fixed6(r.entropy_h)),
        format!("entropy_upper: {}", fixed6(r.entropy_upper)),
        format!("certified: {}", r.certified),
        format!("flags: {flags}"),
    ]
    .join("\n")
}

fn write_report(ctx: &mut Ctx, r: &InvariantReport) -> std::result::Result<(), Failure> {
    match ctx.format {
        Format::Json => writeln!(ctx.out, "{}", to_json_pretty(r))?,
        Format::Text => writeln!(ctx.out, "{}", report_text(r))?,
    }
    Ok(())
}

fn cmd_report(ctx: &mut Ctx, a: ReportArgs) -> Outcome {
    let u = read_hadamard(&a.u, &ctx.tol)?;
    let v = read_hadamard(&a.v, &ctx.tol)?;
    let r = pair_report(&u, &v, &parse_spec(&a.spec)?, &ctx.tol)?;
    write_report(ctx, &r)?;
    Ok(EXIT_OK)
}

fn cmd_realize(ctx: &mut Ctx, a: RealizeArgs) -> Outcome {
    let spec = parse_spec(&a.spec)?;
    let divisors = parse_list("divisors", &a.divisors)?;
    let (u, v) = realize_subgroup(&spec, &divisors, &ctx.tol)?;
    if let Some(dir) = &a.out {
        std::fs::create_dir_all(dir)?;
        emit(ctx, &to_json(u.matrix()), Some(&dir.join("u.json")))?;
        emit(ctx, &to_json(v.matrix()), Some(&dir.join("v.json")))?;
    }
    let r = pair_report(&u, &v, &spec, &ctx.tol)?;
    write_report(ctx, &r)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SweepRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    divisors: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sample: Option<usize>,
    #[serde(rename = "dimA")]
    dim_a: usize,
    index: Ratio,
    entropy_h: f64,
    entropy_upper: f64,
    gap: f64,
    violations: Vec<String>,
}

#[derive(Serialize)]
struct SweepOutput {
    spec: FourierSpec,
    mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    rows: Vec<SweepRow>,
    violations: usize,
}

fn cmd_sweep(ctx: &mut Ctx, a: SweepArgs) -> Outcome {
    let spec = parse_spec(&a.spec)?;
    let rows: Vec<SweepRow> = match a.mode {
        Mode::Realize => realization_sweep(&spec, &ctx.tol)?
            .into_iter()
            .map(|(divisors, r)| SweepRow {
                divisors: Some(divisors),
                sample: None,
                dim_a: r.dim_a,
                index: r.index,
                entropy_h: r.entropy_h,
                entropy_upper: r.entropy_upper,
                gap: r.entropy_upper - r.entropy_h,
                violations: Vec::new(),
            })
            .collect(),
        Mode::Random => {
            let seed = a.seed.ok_or_else(|| usage("--seed is required for --mode random"))?;
            random_campaign(&spec, a.samples, seed, &ctx.tol)?
                .into_iter()
                .map(|row| SweepRow {
                    divisors: None,
                    sample: Some(row.sample),
                    dim_a: row.report.dim_a,
                    index: row.report.index,
                    entropy_h: row.report.entropy_h,
                    entropy_upper: row.report.entropy_upper,
                    gap: row.gap,
                    violations: row.violations,
                })
                .collect()
        }
    };
    let violations = rows.iter().map(|r| r.violations.len()).sum();
    let o = SweepOutput {
        spec,
        mode: match a.mode {
            Mode::Realize => "realize",
            Mode::Random => "random",
        },
        seed: if a.mode == Mode::Random { a.seed } else { None },
        rows,
        violations,
    };
    match ctx.format {
        Format::Json => writeln!(ctx.out, "{}", to_json_pretty(&o))?,
        Format::Text => {
            let key = if a.mode == Mode::Realize { "divisors" } else { "sample" };
            writeln!(ctx.out, "{key}\tdimA\tindex\th\tbound\tgap\tviolations")?;
            for r in &o.rows {
                let label = match (&r.divisors, r.sample) {
                    (Some(d), _) => d.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
                    (None, Some(s)) => s.to_string(),
                    (None, None) => String::new(),
                };
                writeln!(
                    ctx.out,
                    "{label}\t{}\t{}\t{}\t{}\t{}\t{}",
                    r.dim_a,
                    r.index,
                    fixed6(r.entropy_h),
                    fixed6(r.entropy_upper),
                    fixed6(r.gap),
                    r.violations.len()
                )?;
            }
            writeln!(ctx.out, "rows: {}, violations: {}", o.rows.len(), o.violations)?;
        }
    }
    Ok(if violations > 0 { EXIT_VIOLATION } else { EXIT_OK })
}

#[derive(Serialize)]
struct VerifyLine<'a> {
    name: &'a str,
    detail: &'a str,
    pass: bool,
}

fn cmd_verify(ctx: &mut Ctx, a: VerifyArgs) -> Outcome {
    let gamma_orders = if a.gamma_orders.trim().is_empty() {
        Vec::new()
    } else {
        parse_list("gamma-orders", &a.gamma_orders)?
    };
    let config = VerifyConfig {
        max_order: a.max_order,
        gamma_orders,
    };
    let lines = run_suite(&config, &ctx.tol).map_err(|e| usage(e.to_string()))?;
    match ctx.format {
        Format::Text => {
            for l in &lines {
                writeln!(ctx.out, "{l}")?;
            }
        }
        Format::Json => {
            let rows: Vec<VerifyLine> = lines
                .iter()
                .map(|l| VerifyLine {
                    name: l.name,
                    detail: &l.detail,
                    pass: l.pass,
                })
                .collect();
            writeln!(ctx.out, "{}", to_json_pretty(&rows))?;
        }
    }
    match lines.iter().find(|l| !l.pass) {
        Some(l) => Err(Failure {
            code: EXIT_VERIFY,
            message: format!("check failed: {}", l.name),
        }),
        None => Ok(EXIT_OK),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("hadinv").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn gen_diag_order_four() {
        let (code, out, _) = run_str(&["gen", "--spec", "4", "--kind", "diag", "--k", "1"]);
        assert_eq!(code, 0);
        let m: DenseMatrix = crate::io::from_json(out.trim()).unwrap();
        let i = C64::new(0.0, 1.0);
        let expected = DenseMatrix::from_diagonal(&[C64::new(1.0, 0.0), i, -C64::new(1.0, 0.0), -i]);
        assert!(m.approx_eq(&expected, 1e-15));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_str(&["gen", "--spec", "2"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["gen", "--spec", "2", "--kind", "diag"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["sweep", "--spec", "2", "--mode", "random"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn constraint_violations_exit_one() {
        assert_eq!(run_str(&["gen", "--spec", "1", "--kind", "fourier"]).0, EXIT_INPUT);
        assert_eq!(run_str(&["gen", "--spec", "2", "--kind", "diag", "--k", "3"]).0, EXIT_INPUT);
        assert_eq!(run_str(&["realize", "--spec", "4", "--divisors", "3"]).0, EXIT_INPUT);
    }

    #[test]
    fn violations_map_to_three() {
        let f: Failure = Error::OracleMismatch { generic: 2, subgroup: 1 }.into();
        assert_eq!(f.code, EXIT_VIOLATION);
        let f: Failure = Error::NotHadamard.into();
        assert_eq!(f.code, EXIT_INPUT);
    }

    #[test]
    fn phases_are_turn_fractions() {
        let p = parse_phases("0,0.25,-0.5").unwrap();
        assert!((p[1] - C64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((p[2] + C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(parse_phases("x").is_err());
    }
}
