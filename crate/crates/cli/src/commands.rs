//! Subcommand handlers. Each returns the text for stdout and whether the
//! verification it performs passed.

use qtgrav::heisenberg::{
    echelon_reduce, irreducible_solution, reducible_solution, HeisenbergSolution,
};
use qtgrav::intertwiner::{
    eps_is_invariant, homomorphism_suite, path_independence_suite, rho, verify_relation_suite_with,
    SuiteConfig,
};
use qtgrav::numfmt::json17;
use qtgrav::opcalc::{
    default_f_states, default_phi_states, refinement_csv, refinement_ladder,
    verify_F_pentagon_with, verify_phi_pentagon, Grid, OpcalcError, ResidualReport,
    PENTAGON_TOLERANCE, RESAMPLING_BUDGET,
};
use qtgrav::qdilog::{
    f_kernel, f_table, f_table_csv, f_table_json, phi_hbar, FKernel, Lambda, QDParams,
};
use qtgrav::triangulation::{
    automorphisms, exchange_matrix, find_path, flip, verify_loop, LabeledTriangulation,
    TriangulationError, TriangulationFile, WordFile,
};
use qtgrav::{Error, Rational, C64};
use serde_json::{json, Value};

use crate::args::*;
use crate::input;

/// Text for stdout and the verification outcome.
pub struct Output {
    pub text: String,
    pub passed: bool,
}

/// Failures that end in exit code 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(Error),
}

impl<E: Into<Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Input(e.into())
    }
}

impl CliError {
    /// `{"error": {"kind", "message"}}`.
    pub fn to_json(&self) -> Value {
        let (kind, message) = match self {
            CliError::Usage(m) => ("usage", m.clone()),
            CliError::Input(e) => (e.kind(), e.to_string()),
        };
        json!({"error": {"kind": kind, "message": message}})
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn json_out(v: Value, passed: bool) -> Output {
    Output {
        text: format!(
            "{}\n",
            serde_json::to_string_pretty(&v).expect("serializable")
        ),
        passed,
    }
}

fn json_only(format: Option<Format>) -> Result<()> {
    match format {
        Some(Format::Csv) => Err(CliError::Usage("this command has no CSV output".into())),
        _ => Ok(()),
    }
}

fn params(k: &KernelArgs) -> Result<QDParams> {
    Ok(QDParams::new(Lambda::try_from(k.lambda)?, k.hbar)?)
}

fn surface_json(t: &LabeledTriangulation) -> Value {
    let sig = t.signature();
    json!({"genus": sig.genus, "punctures": sig.punctures})
}

pub fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Surface(c) => surface(c, cli.format),
        Command::Qd(c) => qd(c, cli.format),
        Command::Heis(c) => {
            json_only(cli.format)?;
            heis(c)
        }
        Command::Check(c) => check(c, cli.format),
        Command::Mcg(c) => {
            json_only(cli.format)?;
            mcg(c, cli.seed)
        }
    }
}

fn surface(cmd: &SurfaceCmd, format: Option<Format>) -> Result<Output> {
    match cmd {
        SurfaceCmd::Info { file } => {
            json_only(format)?;
            let t = input::triangulation(file)?;
            let e = exchange_matrix(&t);
            let legal: Vec<usize> = (0..t.arc_count())
                .filter(|&k| flip(&t, k).is_ok())
                .map(|k| k + 1)
                .collect();
            Ok(json_out(
                json!({
                    "surface": surface_json(&t),
                    "arcs": t.arc_count(),
                    "triangles": t.triangles().len(),
                    "legal_flips": legal,
                    "valences": e.valences,
                    "automorphisms": automorphisms(&t).len(),
                    "warnings": t.warnings(),
                }),
                true,
            ))
        }
        SurfaceCmd::Flip { file, arc } => {
            json_only(format)?;
            let t = input::triangulation(file)?;
            let k = arc.checked_sub(1).filter(|&k| k < t.arc_count()).ok_or(
                TriangulationError::ArcOutOfRange {
                    arc: *arc,
                    count: t.arc_count(),
                },
            )?;
            let v = serde_json::to_value(TriangulationFile::from_triangulation(&flip(&t, k)?))
                .expect("serializable");
            Ok(json_out(v, true))
        }
        SurfaceCmd::Eps { file } => {
            let t = input::triangulation(file)?;
            let eps = exchange_matrix(&t).eps;
            if format == Some(Format::Csv) {
                let rows: Vec<String> = eps
                    .iter()
                    .map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
                    .collect();
                return Ok(Output {
                    text: rows.join("\n") + "\n",
                    passed: true,
                });
            }
            Ok(json_out(
                json!({"surface": surface_json(&t), "arcs": t.arc_count(), "eps": eps}),
                true,
            ))
        }
        SurfaceCmd::Path {
            from,
            to,
            max_depth,
        } => {
            json_only(format)?;
            let (a, b) = (input::triangulation(from)?, input::triangulation(to)?);
            let w = find_path(&a, &b, *max_depth)?;
            let mut file = WordFile::from_word(&w, None);
            file.start = Value::String(from.display().to_string());
            Ok(json_out(
                serde_json::to_value(file).expect("serializable"),
                true,
            ))
        }
    }
}

/// Parses `a..b`.
fn range(s: &str) -> Result<(f64, f64)> {
    let bad = || CliError::Usage(format!("expected a range `a..b`, got `{s}`"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let (a, b) = (
        a.trim().parse::<f64>().map_err(|_| bad())?,
        b.trim().parse::<f64>().map_err(|_| bad())?,
    );
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(bad());
    }
    Ok((a, b))
}

fn linspace((a, b): (f64, f64), n: usize) -> Vec<f64> {
    match n {
        1 => vec![a],
        _ => (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

fn qd(cmd: &QdCmd, format: Option<Format>) -> Result<Output> {
    match cmd {
        QdCmd::Eval {
            function,
            lambda,
            hbar,
            x,
            y,
        } => {
            json_only(format)?;
            let (v, head) = match function {
                QdFunction::F => {
                    let lambda = lambda
                        .ok_or_else(|| CliError::Usage("`--lambda` is required for F".into()))?;
                    let p = params(&KernelArgs {
                        lambda,
                        hbar: *hbar,
                    })?;
                    (
                        f_kernel(&p, *x, *y)?,
                        json!({"function": "F", "lambda": lambda, "hbar": json17(*hbar)}),
                    )
                }
                QdFunction::Phi => {
                    QDParams::new(Lambda::Zero, *hbar)?;
                    (
                        phi_hbar(*hbar, C64::new(*x, *y))?,
                        json!({"function": "phi", "hbar": json17(*hbar)}),
                    )
                }
            };
            let mut out = head;
            for (k, val) in [
                ("x", *x),
                ("y", *y),
                ("re", v.re),
                ("im", v.im),
                ("abs", v.norm()),
            ] {
                out[k] = json17(val);
            }
            Ok(json_out(out, true))
        }
        QdCmd::Table {
            kernel,
            x,
            y,
            points,
        } => {
            if *points == 0 {
                return Err(CliError::Usage("`--points` must be positive".into()));
            }
            let p = params(kernel)?;
            let samples = f_table(
                &p,
                &linspace(range(x)?, *points),
                &linspace(range(y)?, *points),
            )?;
            match format {
                Some(Format::Json) => Ok(json_out(f_table_json(&p, &samples), true)),
                _ => Ok(Output {
                    text: f_table_csv(&samples),
                    passed: true,
                }),
            }
        }
    }
}

fn heis(cmd: &HeisCmd) -> Result<Output> {
    match cmd {
        HeisCmd::Irrep { file } => {
            let t = input::triangulation(file)?;
            let e = exchange_matrix(&t);
            let ech = echelon_reduce::<Rational>(&e.valences)?;
            let sol = irreducible_solution(&e, &ech)?;
            let mut v = sol.to_json();
            v["surface"] = surface_json(&t);
            v["pivots"] = json!(ech.pivots.iter().map(|i| i + 1).collect::<Vec<_>>());
            Ok(json_out(v, true))
        }
        HeisCmd::Check { file, solution } => {
            let t = input::triangulation(file)?;
            let e = exchange_matrix(&t);
            let sol: HeisenbergSolution<Rational> = match solution {
                SolutionKind::Irreducible => {
                    irreducible_solution(&e, &echelon_reduce(&e.valences)?)?
                }
                SolutionKind::Reducible => reducible_solution(&e),
            };
            let defects = sol.heisenberg_defects(&e.eps);
            let c = sol.constraints(&e.valences);
            let passed = defects.is_empty() && c.x_ok() && c.y_ok();
            let one_based = |v: &[usize]| v.iter().map(|p| p + 1).collect::<Vec<_>>();
            Ok(json_out(
                json!({
                    "surface": surface_json(&t),
                    "solution": match solution { SolutionKind::Irreducible => "irreducible", SolutionKind::Reducible => "reducible" },
                    "heisenberg_defects": defects,
                    "x_constraint_failures": one_based(&c.x_failures),
                    "y_constraint_failures": one_based(&c.y_failures),
                    "passed": passed,
                }),
                passed,
            ))
        }
    }
}

/// A single pentagon report with its verdict, or the guard error that
/// stopped the run, which counts as a failed verification.
fn pentagon_output(
    report: std::result::Result<ResidualReport, OpcalcError>,
    tol: f64,
    head: Value,
) -> Result<Output> {
    match report {
        Ok(r) => {
            let passed = r.max_residual() <= tol;
            let mut v = r.to_json();
            v["tolerance"] = json17(tol);
            v["passed"] = json!(passed);
            Ok(json_out(v, passed))
        }
        Err(OpcalcError::RotationResampling(m)) => {
            let mut v = head;
            v["tolerance"] = json17(tol);
            v["passed"] = json!(false);
            v["error"] = json!(format!("rotation resampling error: {m}"));
            Ok(json_out(v, false))
        }
        Err(e) => Err(e.into()),
    }
}

/// The refinement ladder: passes when the residuals strictly decrease and
/// the finest is within `tol`.
fn ladder_output(
    d: usize,
    tol: f64,
    format: Option<Format>,
    run: impl Fn(&Grid) -> std::result::Result<ResidualReport, OpcalcError>,
) -> Result<Output> {
    let reports = refinement_ladder(d)?
        .iter()
        .map(run)
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let r: Vec<f64> = reports.iter().map(ResidualReport::max_residual).collect();
    let decreasing = r.windows(2).all(|w| w[1] < w[0]);
    let passed = decreasing && r.last().is_some_and(|&x| x <= tol);
    if format == Some(Format::Csv) {
        return Ok(Output {
            text: refinement_csv(&reports),
            passed,
        });
    }
    Ok(json_out(
        json!({
            "ladder": reports.iter().map(ResidualReport::to_json).collect::<Vec<_>>(),
            "strictly_decreasing": decreasing,
            "tolerance": json17(tol),
            "passed": passed,
        }),
        passed,
    ))
}

fn grid(d: usize, g: &GridArgs, n: usize) -> Result<Grid> {
    Ok(Grid::new(d, g.n.unwrap_or(n), g.l.unwrap_or(12.0))?)
}

fn check(cmd: &CheckCmd, format: Option<Format>) -> Result<Output> {
    match cmd {
        CheckCmd::PhiPentagon {
            hbar,
            grid: g,
            refine,
        } => {
            let tol = g.tolerance.unwrap_or(PENTAGON_TOLERANCE);
            QDParams::new(Lambda::Zero, *hbar)?;
            if *refine {
                return ladder_output(1, tol, format, |gr| {
                    verify_phi_pentagon(*hbar, gr, &default_phi_states())
                });
            }
            json_only(format)?;
            let gr = grid(1, g, 1024)?;
            let head = json!({"lambda": null, "hbar": json17(*hbar), "d": 1, "N": gr.n, "L": json17(gr.l)});
            pentagon_output(
                verify_phi_pentagon(*hbar, &gr, &default_phi_states()),
                tol,
                head,
            )
        }
        CheckCmd::FPentagon {
            kernel,
            grid: g,
            refine,
            resampling_budget,
        } => {
            let f = FKernel::new(params(kernel)?)?;
            let tol = g.tolerance.unwrap_or(PENTAGON_TOLERANCE);
            // The coarse rung of the ladder exceeds the default budget, so
            // refinement runs record the estimate instead of stopping.
            let budget = resampling_budget.unwrap_or(if *refine {
                f64::INFINITY
            } else {
                RESAMPLING_BUDGET
            });
            let run = |gr: &Grid| verify_F_pentagon_with(&f, gr, &default_f_states(), budget);
            if *refine {
                return ladder_output(2, tol, format, run);
            }
            json_only(format)?;
            let gr = grid(2, g, 1024)?;
            let head = json!({"lambda": kernel.lambda, "hbar": json17(kernel.hbar), "d": 2, "N": gr.n, "L": json17(gr.l)});
            pentagon_output(run(&gr), tol, head)
        }
        CheckCmd::Relations {
            file,
            kernel,
            grid: g,
            radius,
            exact_only,
            corrupt_auto,
            resampling_budget,
        } => {
            json_only(format)?;
            let t = input::triangulation(file)?;
            let defaults = SuiteConfig::default();
            let config = SuiteConfig {
                grid: grid(2, g, defaults.grid.n)?,
                tolerance: g.tolerance.unwrap_or(defaults.tolerance),
                resampling_budget: resampling_budget.unwrap_or(RESAMPLING_BUDGET),
                numeric: !exact_only,
                corrupt_auto: *corrupt_auto,
                radius: *radius,
                ..defaults
            };
            let report = verify_relation_suite_with(&t, params(kernel)?, &config)?;
            Ok(json_out(report.to_json(), report.passed()))
        }
    }
}

fn mcg(cmd: &McgCmd, seed: u64) -> Result<Output> {
    match cmd {
        McgCmd::Verify { file } => {
            let lp = input::mapping_loop(file)?;
            let valid = verify_loop(&lp);
            let invariant = valid && eps_is_invariant(&lp)?;
            let passed = valid && invariant;
            Ok(json_out(
                json!({"surface": surface_json(&lp.word.start), "moves": lp.word.moves.len(), "valid": valid, "eps_invariant": invariant, "passed": passed}),
                passed,
            ))
        }
        McgCmd::Rho { file, kernel } => {
            let lp = input::mapping_loop(file)?;
            Ok(json_out(rho(&lp, params(kernel)?)?.to_json(), true))
        }
        McgCmd::Consistency { file, pairs, paths } => {
            let t = input::triangulation(file)?;
            let p = QDParams::new(Lambda::Minus, 0.7)?;
            let h = homomorphism_suite(&t, p, *pairs, seed);
            let w = path_independence_suite(std::slice::from_ref(&t), p, *paths, seed);
            let passed = h.passed() && w.passed();
            Ok(json_out(
                json!({"homomorphism": h.to_json(), "paths": w.to_json(), "passed": passed}),
                passed,
            ))
        }
    }
}
