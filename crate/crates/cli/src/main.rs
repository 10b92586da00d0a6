//! Command-line interface: solve the fractional heat equation, emit error
//! grids, classify symmetry-algebra elements, and run the adjoint/reduction
//! consistency sweeps.
//!
//! Exit codes: 0 success, 1 at least one verification check failed,
//! 2 validation or usage failure, 3 singular discrete system. Diagnostics
//! go to stderr; CSV payloads go to stdout or `--out` (written atomically
//! via a temp file and rename).

mod fterms;

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use fracheat::erdelyi_kober::{verify_space_identity, verify_time_identity};
use fracheat::solver::{
    self, Slice, SliceAxis, {write_cube_csv, write_slice_csv},
};
use fracheat::{Error, Problem64};

#[derive(Parser)]
#[command(
    name = "fracheat",
    version,
    about = "Bernstein spectral solver for the 2D space-time fractional heat equation, \
             with symmetry classification and reduction checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the equation and write the solution grid `t,x,y,u` as CSV.
    Solve(SolveArgs),
    /// Write an absolute-error slice against a reference solution as CSV.
    Error(ErrorArgs),
    /// Reduce an algebra element to its optimal-system representative.
    Classify(ClassifyArgs),
    /// Run consistency sweeps; nonzero exit if any check fails.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Args)]
struct SolveArgs {
    /// Time-derivative order in (0, 1].
    #[arg(long)]
    alpha: f64,
    /// Space-derivative order in (0, 2].
    #[arg(long)]
    beta: f64,
    /// Bernstein degree, 1..=12.
    #[arg(long = "M")]
    degree: usize,
    /// Source term as `c,p,q,r;...` (empty for zero).
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    f: String,
    /// Points per axis of the output grid.
    #[arg(long = "grid-n", default_value_t = 11)]
    grid_n: usize,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Debug aid: also dump P^alpha, D^beta, H_x, H_y as CSV files into
    /// this directory.
    #[arg(long = "dump-matrices", value_name = "DIR")]
    dump_matrices: Option<PathBuf>,
}

#[derive(Args)]
struct ErrorArgs {
    #[command(flatten)]
    solve: SolveArgs,
    /// Reference solution as `c,p,q,r;...`.
    #[arg(long, allow_hyphen_values = true)]
    exact: String,
    /// Slice specification, e.g. `t=0.5`, `x=0.25`, `y=1`.
    #[arg(long)]
    slice: String,
}

#[derive(Args)]
struct ClassifyArgs {
    /// The five coefficients on X1..X5.
    #[arg(num_args = 5, value_names = ["A1", "A2", "A3", "A4", "A5"], allow_negative_numbers = true)]
    coeffs: Vec<f64>,
    /// Structure-constant parameter alpha.
    #[arg(long)]
    alpha: f64,
    /// Structure-constant parameter beta.
    #[arg(long)]
    beta: f64,
    /// Zero threshold for the case pattern.
    #[arg(long, default_value_t = 1e-12)]
    eps: f64,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Adjoint representation: matrix exponential vs truncated Lie series,
    /// one-parameter homomorphism, bracket invariance.
    Adjoint(AdjointArgs),
    /// Similarity-reduction identities on the monomial family.
    Reduction(ReductionArgs),
}

#[derive(Args)]
struct AdjointArgs {
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 0.7)]
    alpha: f64,
    #[arg(long, default_value_t = 1.3)]
    beta: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Corrupt one structure constant before checking (negative control).
    #[arg(long, hide = true)]
    corrupt: bool,
}

#[derive(Args)]
struct ReductionArgs {
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Error(args) => cmd_error(&args),
        Command::Classify(args) => cmd_classify(&args),
        Command::Verify(VerifyCommand::Adjoint(args)) => cmd_verify_adjoint(&args),
        Command::Verify(VerifyCommand::Reduction(args)) => cmd_verify_reduction(&args),
    };
    ExitCode::from(code)
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Singular { .. } => 3,
        _ => 2,
    }
}

fn cmd_solve(args: &SolveArgs) -> u8 {
    let raw_terms = match fterms::parse_terms(&args.f) {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("error: invalid --f: {msg}");
            return 2;
        }
    };
    eprintln!("source term: {}", fterms::serialize_terms(&raw_terms));
    let f = match fracheat::PolySum3::new(&raw_terms) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: invalid --f: {e}");
            return 2;
        }
    };
    let spec = match Problem64::new(args.alpha, args.beta, args.degree, f) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let started = Instant::now();
    let sol = match solver::solve(&spec) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    let elapsed = started.elapsed();
    let grid = match sol.solution_grid(args.grid_n) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let mut csv = Vec::new();
    if write_cube_csv(&mut csv, &grid).is_err() {
        eprintln!("error: failed to format CSV");
        return 2;
    }
    eprintln!("residual max-norm: {:e}", sol.residual());
    match sol.side_conditions(9) {
        Ok(r) => eprintln!(
            "side conditions (max |.| on 9x9 grids): initial {:.3e}, x-boundary {:.3e}, \
             y-boundary {:.3e}, x-normal {:.3e}, y-normal {:.3e}",
            r.initial, r.boundary_x, r.boundary_y, r.normal_x, r.normal_y
        ),
        Err(e) => eprintln!("side-condition report unavailable: {e}"),
    }
    eprintln!("wall time: {:.3} s", elapsed.as_secs_f64());
    if let Some(dir) = &args.dump_matrices {
        if let Err(e) = dump_matrices(dir, &spec) {
            eprintln!("error: matrix dump: {e}");
            return 2;
        }
    }
    emit(args.out.as_deref(), &csv)
}

fn dump_matrices(dir: &Path, spec: &Problem64) -> std::io::Result<()> {
    use fracheat::operational::{build_2d_set, write_matrix_csv};
    let basis = fracheat::BernsteinBasis::new(spec.degree())
        .map_err(|e| std::io::Error::other(e.to_string()))?;
    let set = build_2d_set(&basis, spec.alpha(), spec.beta())
        .map_err(|e| std::io::Error::other(e.to_string()))?;
    fs::create_dir_all(dir)?;
    for (name, matrix) in [
        ("p_alpha.csv", set.p_alpha()),
        ("d_beta.csv", set.d_beta()),
        ("h_x.csv", set.h_x()),
        ("h_y.csv", set.h_y()),
    ] {
        let mut buf = Vec::new();
        write_matrix_csv(&mut buf, matrix)?;
        let target = dir.join(name);
        let tmp = target.with_extension("tmp");
        fs::write(&tmp, &buf)?;
        fs::rename(&tmp, &target)?;
    }
    Ok(())
}

fn parse_slice(text: &str) -> Result<Slice<f64>, String> {
    let (axis_text, value_text) = text
        .split_once('=')
        .ok_or_else(|| format!("expected axis=value, got {text:?}"))?;
    let axis = match axis_text.trim() {
        "t" => SliceAxis::T,
        "x" => SliceAxis::X,
        "y" => SliceAxis::Y,
        other => return Err(format!("unknown axis {other:?} (expected t, x, or y)")),
    };
    let value: f64 = value_text
        .trim()
        .parse()
        .map_err(|e| format!("slice value: {e}"))?;
    Ok(Slice { axis, value })
}

fn cmd_error(args: &ErrorArgs) -> u8 {
    let f = match fterms::parse_polysum(&args.solve.f) {
        Ok(f) => f,
        Err(msg) => {
            eprintln!("error: invalid --f: {msg}");
            return 2;
        }
    };
    let exact = match fterms::parse_polysum(&args.exact) {
        Ok(f) => f,
        Err(msg) => {
            eprintln!("error: invalid --exact: {msg}");
            return 2;
        }
    };
    let slice = match parse_slice(&args.slice) {
        Ok(s) => s,
        Err(msg) => {
            eprintln!("error: invalid --slice: {msg}");
            return 2;
        }
    };
    let spec = match Problem64::new(args.solve.alpha, args.solve.beta, args.solve.degree, f) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let sol = match solver::solve(&spec) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    let rows = match sol.error_grid(&exact, slice, args.solve.grid_n) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let max_err = rows.iter().map(|r| r.2).fold(0.0f64, f64::max);
    eprintln!("max |error| on slice: {max_err:e}");
    let mut csv = Vec::new();
    if write_slice_csv(&mut csv, &rows).is_err() {
        eprintln!("error: failed to format CSV");
        return 2;
    }
    emit(args.solve.out.as_deref(), &csv)
}

fn cmd_classify(args: &ClassifyArgs) -> u8 {
    let algebra = match fracheat::SymmetryAlgebra::new(args.alpha, args.beta) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let mut coeffs = [0.0f64; 5];
    coeffs.copy_from_slice(&args.coeffs);
    let element = algebra.element(coeffs);
    match algebra.classify(&element, args.eps) {
        Ok(form) => {
            println!("case: {}", form.case_id);
            println!("representative: {}", form.representative);
            println!("word: {}", form.word);
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

struct CheckRow {
    case: String,
    lhs: f64,
    rhs: f64,
    diff: f64,
    pass: bool,
}

fn checks_to_csv(rows: &[CheckRow]) -> Vec<u8> {
    let mut text = String::from("case,lhs,rhs,diff,pass\n");
    for row in rows {
        let _ = writeln!(
            text,
            "{},{:.16e},{:.16e},{:.16e},{}",
            row.case,
            row.lhs,
            row.rhs,
            row.diff,
            if row.pass { "pass" } else { "fail" }
        );
    }
    text.into_bytes()
}

fn finish_checks(rows: Vec<CheckRow>, out: Option<&Path>) -> u8 {
    let failures = rows.iter().filter(|r| !r.pass).count();
    eprintln!("{} checks, {} failed", rows.len(), failures);
    let csv = checks_to_csv(&rows);
    let code = emit(out, &csv);
    if code != 0 {
        return code;
    }
    if failures > 0 {
        1
    } else {
        0
    }
}

fn cmd_verify_adjoint(args: &AdjointArgs) -> u8 {
    let algebra = match fracheat::SymmetryAlgebra::new(args.alpha, args.beta) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let mut rows = Vec::new();
    let sweep = [-1.0, -0.5, -0.1, 0.1, 0.5, 1.0];

    // Matrix exponential against the 20-term Lie series.
    for i in 1..=5usize {
        for &s in &sweep {
            let via_expm = algebra.adjoint(i, s);
            let mut via_series = algebra.adjoint_series(i, s, 20);
            if args.corrupt {
                // Negative control: damage one structure constant's effect.
                via_series[(0, 4)] += 0.01;
            }
            let diff = via_expm.sub(&via_series).max_abs();
            rows.push(CheckRow {
                case: format!("series i={i} s={s}"),
                lhs: via_expm.max_abs(),
                rhs: via_series.max_abs(),
                diff,
                pass: diff <= args.tol,
            });
        }
    }

    // One-parameter homomorphism Ad(s+s') = Ad(s) Ad(s').
    for i in 1..=5usize {
        for &(s, sp) in &[(0.3, 0.4), (-0.6, 0.9)] {
            let lhs = algebra.adjoint(i, s + sp);
            let rhs = algebra.adjoint(i, s).matmul(&algebra.adjoint(i, sp));
            let diff = lhs.sub(&rhs).max_abs();
            rows.push(CheckRow {
                case: format!("homomorphism i={i} s={s} s'={sp}"),
                lhs: lhs.max_abs(),
                rhs: rhs.max_abs(),
                diff,
                pass: diff <= args.tol.max(1e-11),
            });
        }
    }

    // Ad(g)[X,Y] = [Ad(g)X, Ad(g)Y].
    let x = algebra.element([0.4, -1.2, 0.8, 0.3, 0.9]);
    let y = algebra.element([-0.7, 0.5, 1.1, -0.2, 0.6]);
    for i in 1..=5usize {
        for &s in &[0.45, -0.8] {
            let ad = algebra.adjoint(i, s);
            let bracket_then_ad = algebra
                .transform(&ad, &x.commutator(&y).expect("same algebra"))
                .expect("same algebra");
            let ad_then_bracket = algebra
                .transform(&ad, &x)
                .expect("same algebra")
                .commutator(&algebra.transform(&ad, &y).expect("same algebra"))
                .expect("same algebra");
            let diff = bracket_then_ad.sub(&ad_then_bracket).max_abs();
            rows.push(CheckRow {
                case: format!("bracket-invariance i={i} s={s}"),
                lhs: bracket_then_ad.max_abs(),
                rhs: ad_then_bracket.max_abs(),
                diff,
                pass: diff <= args.tol.max(1e-10),
            });
        }
    }
    finish_checks(rows, args.out.as_deref())
}

fn cmd_verify_reduction(args: &ReductionArgs) -> u8 {
    let mut rows = Vec::new();
    let order_pairs = [(0.6, 0.4), (0.8, 0.5), (1.0, 0.7), (0.9, 1.5)];
    let exponent_pairs = [(0.0, 0.0), (0.2, 0.0), (0.15, 0.1)];
    let (t, x, y) = (0.6, 0.7, 0.8);
    for &(alpha, beta) in &order_pairs {
        for &(p, q) in &exponent_pairs {
            if (p + q) * beta / alpha >= 1.0 {
                continue;
            }
            match verify_time_identity(p, q, alpha, beta, t, x, y, args.tol) {
                Ok(check) => rows.push(CheckRow {
                    case: format!("time a={alpha} b={beta} p={p} q={q}"),
                    lhs: check.lhs,
                    rhs: check.rhs,
                    diff: check.abs_diff,
                    pass: check.abs_diff <= args.tol,
                }),
                Err(e) => {
                    eprintln!("error: time identity at a={alpha} b={beta} p={p} q={q}: {e}");
                    return 2;
                }
            }
            match verify_space_identity(p, q, alpha, beta, t, x, y, args.tol) {
                Ok(check) => rows.push(CheckRow {
                    case: format!("space a={alpha} b={beta} p={p} q={q}"),
                    lhs: check.lhs,
                    rhs: check.rhs,
                    diff: check.abs_diff,
                    pass: check.abs_diff <= args.tol,
                }),
                Err(e) => {
                    eprintln!("error: space identity at a={alpha} b={beta} p={p} q={q}: {e}");
                    return 2;
                }
            }
        }
    }
    finish_checks(rows, args.out.as_deref())
}

/// Writes `content` to stdout, or atomically to `path` (temp file, then
/// rename).
fn emit(path: Option<&Path>, content: &[u8]) -> u8 {
    match path {
        None => {
            if std::io::stdout().write_all(content).is_err() {
                return 2;
            }
            0
        }
        Some(target) => {
            let tmp = target.with_extension("tmp");
            if let Err(e) = fs::write(&tmp, content) {
                eprintln!("error: writing {}: {e}", tmp.display());
                return 2;
            }
            if let Err(e) = fs::rename(&tmp, target) {
                eprintln!("error: renaming into {}: {e}", target.display());
                let _ = fs::remove_file(&tmp);
                return 2;
            }
            0
        }
    }
}
