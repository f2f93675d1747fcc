use std::fmt;
use std::path::Path;

use serde_json::{json, Map, Value};
use tolreg_core::formal::{formal_solve, inner_estimate_check, widen_for_proper, InnerCheck};
use tolreg_core::linalg::singular_values;
use tolreg_core::maximize::{maximize_tol, Certification, SolveStatus};
use tolreg_core::regularize::{
    cond_spectral, corner_condition_scan, lavrentiev_solve, regularize, theta_sweep, Method, Rhs, SweepRow,
};
use tolreg_core::rohn::{build_rohn_system, lp_max_tol, rohn_feasible};
use tolreg_core::sharaya::{enumerate_strips, polygon2d, DEFAULT_STRIP_LIMIT};
use tolreg_core::tolerance::{default_eps, member_tolerable, tol_eval, tol_evaluate, Membership};
use tolreg_core::{intervalize, Certificate, IntervalMatrix, Matrix};

use crate::config::{ConfigFile, Settings};
use crate::format::{interval_pair, num, nums, parse_system, FormatError, SystemFile};
use crate::{Cli, Command, FormatArg, MethodArg};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Input { path: String, source: FormatError },
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Domain(#[from] tolreg_core::Error),
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    /// 2 for usage errors, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Json(Value),
    Csv(String),
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Output::Json(v) => writeln!(f, "{}", serde_json::to_string_pretty(v).expect("serializable")),
            Output::Csv(s) => f.write_str(s),
        }
    }
}

type Res<T> = Result<T, CliError>;

fn load_system(cli: &Cli) -> Res<SystemFile> {
    let path = cli.system.as_deref().ok_or_else(|| CliError::Usage("--system <PATH> is required".into()))?;
    read_system(path)
}

pub fn read_system(path: &Path) -> Res<SystemFile> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_system(&text).map_err(|source| CliError::Input { path: path.display().to_string(), source })
}

fn load_settings(cli: &Cli) -> Res<Settings> {
    let mut settings = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            ConfigFile::parse(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
                .settings()
        }
        None => Settings::default(),
    };
    if let Some(seed) = cli.seed {
        settings.regularize.solver.seed = seed;
    }
    if let Some(c) = cli.widen {
        settings.regularize.widen = c;
    }
    if let Some(e) = cli.eps {
        settings.eps = Some(e);
    }
    Ok(settings)
}

fn parse_list(flag: &str, text: &str) -> Res<Vec<f64>> {
    text.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("{flag}: cannot parse \"{t}\" as a number"))))
        .collect()
}

fn point(cli: &Cli, n: usize) -> Res<Vec<f64>> {
    let text = cli.x.as_deref().ok_or_else(|| CliError::Usage("--x <X1,X2,...> is required".into()))?;
    let x = parse_list("--x", text)?;
    if x.len() != n {
        return Err(CliError::Usage(format!("--x has {} values, the system has {n} unknowns", x.len())));
    }
    Ok(x)
}

fn point_matrix(a: &IntervalMatrix, what: &str) -> Res<Matrix> {
    if !a.is_degenerate() {
        return Err(CliError::Invalid(format!("{what} needs a point matrix")));
    }
    Ok(a.mid())
}

fn matrix_value(m: &Matrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| nums(r)).collect())
}

fn certificate_name(c: Certificate) -> &'static str {
    match c {
        Certificate::NonemptyInterior => "nonempty_interior",
        Certificate::Nonempty => "nonempty",
        Certificate::Empty => "empty",
    }
}

fn insert_certification(obj: &mut Map<String, Value>, c: &Certification) {
    obj.insert("certificate".into(), json!(certificate_name(c.certificate)));
    obj.insert("empty_heuristic".into(), json!(c.empty_heuristic));
    obj.insert("lp_disagrees".into(), json!(c.lp_disagrees));
}

fn method(cli: &Cli) -> Method {
    match cli.method {
        MethodArg::Tolmax => Method::TolMax,
        MethodArg::Formal => Method::Formal,
    }
}

fn rhs_of(sys: &SystemFile) -> Rhs {
    if sys.b.is_degenerate() {
        Rhs::Point(sys.b.mid())
    } else {
        Rhs::Interval(sys.b.clone())
    }
}

pub fn run(cli: &Cli) -> Res<Output> {
    let settings = load_settings(cli)?;
    let sys = load_system(cli)?;
    let (a, b) = (&sys.a, &sys.b);
    let mut out = Map::new();
    if let Some(name) = &sys.name {
        out.insert("name".into(), json!(name));
    }
    match cli.command {
        Command::TolEval => {
            let x = point(cli, a.cols())?;
            let e = tol_evaluate(&x, a, b)?;
            out.insert("x".into(), nums(&x));
            out.insert("value".into(), num(e.value));
            out.insert("active_row".into(), json!(e.active_row + 1));
            out.insert("supergradient".into(), nums(&e.supergradient));
        }
        Command::TolMax => {
            let x0 = match &cli.x {
                Some(_) => Some(point(cli, a.cols())?),
                None => None,
            };
            let r = maximize_tol(a, b, &settings.regularize.solver, x0.as_deref())?;
            let (lp_value, lp_x) = lp_max_tol(a, b)?;
            out.insert("value".into(), num(r.best_value));
            out.insert("argmax".into(), nums(&r.best_x));
            insert_certification(&mut out, &r.certification);
            out.insert("eps".into(), num(r.eps));
            out.insert("iterations".into(), json!(r.iterations));
            out.insert(
                "status".into(),
                json!(match r.status {
                    SolveStatus::Converged => "converged",
                    SolveStatus::IterLimit => "iteration_limit",
                    SolveStatus::Stalled => "stalled",
                }),
            );
            out.insert("run_values".into(), nums(&r.run_values));
            out.insert("lp_value".into(), num(lp_value));
            out.insert("lp_argmax".into(), nums(&lp_x));
        }
        Command::Member => {
            let x = point(cli, a.cols())?;
            let eps = settings.eps.unwrap_or_else(|| default_eps(b));
            let r = member_tolerable(&x, a, b, eps)?;
            out.insert("x".into(), nums(&x));
            out.insert(
                "class".into(),
                json!(match r.class {
                    Membership::Interior => "interior",
                    Membership::Boundary => "boundary",
                    Membership::Outside => "outside",
                }),
            );
            out.insert("tol".into(), num(r.tol));
            out.insert("eps".into(), num(r.eps));
            out.insert("inclusion".into(), json!(r.inclusion));
            out.insert("interior_criterion_applies".into(), json!(r.interior_criterion_applies));
        }
        Command::RohnCheck => {
            let f = rohn_feasible(a, b)?;
            out.insert("feasible".into(), json!(f.feasible));
            out.insert("witness".into(), f.witness.as_deref().map_or(Value::Null, nums));
        }
        Command::RohnExport => {
            let s = build_rohn_system(a, b)?;
            if cli.format == FormatArg::Csv {
                let n2 = s.coeff.cols();
                let mut csv: Vec<String> = (1..=n2).map(|k| format!("c{k}")).collect();
                csv.push("rhs".into());
                let mut text = csv.join(",") + "\n";
                for (row, h) in s.coeff.to_rows().iter().zip(&s.rhs) {
                    let mut cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                    cells.push(h.to_string());
                    text += &(cells.join(",") + "\n");
                }
                return Ok(Output::Csv(text));
            }
            out.insert("coefficients".into(), matrix_value(&s.coeff));
            out.insert("rhs".into(), nums(&s.rhs));
            out.insert("variables".into(), json!("x' then x'', both nonnegative; x = x' - x''"));
        }
        Command::Strips => {
            let strips = enumerate_strips(a, b, DEFAULT_STRIP_LIMIT)?;
            out.insert("count".into(), json!(strips.len()));
            let list = strips
                .iter()
                .map(|s| json!({ "row": s.row + 1, "normal": nums(&s.normal), "bounds": interval_pair(s.bounds) }))
                .collect();
            out.insert("strips".into(), Value::Array(list));
        }
        Command::Polygon => {
            let p = polygon2d(a, b)?;
            out.insert("count".into(), json!(p.vertices.len()));
            out.insert("vertices".into(), Value::Array(p.vertices.iter().map(|v| nums(v)).collect()));
            out.insert("truncated".into(), json!(p.truncated));
            out.insert("box_half_width".into(), num(p.box_half_width));
        }
        Command::FormalSolve => {
            let cfg = &settings.regularize.formal;
            let s = formal_solve(a, b, cfg)?;
            let slack = cfg.tol * (1.0 + a.max_mag().max(b.max_mag()));
            let inner = inner_estimate_check(&s.x_star, a, b, slack)?;
            let (wide, m) = widen_for_proper(a, b, &s)?;
            out.insert("x_star".into(), Value::Array(s.x_star.iter().map(|v| nums(&[v.lo, v.hi])).collect()));
            out.insert("proper".into(), json!(s.proper_mask));
            out.insert("residual".into(), num(s.residual));
            out.insert("iterations".into(), json!(s.iterations));
            out.insert("pseudo_solution".into(), nums(&s.pseudo));
            out.insert("t_star".into(), num(s.t_star));
            out.insert("widened_rhs".into(), Value::Array(wide.iter().map(|&v| interval_pair(v)).collect()));
            out.insert("tol_widened".into(), num(tol_eval(&m, a, &wide)?));
            out.insert(
                "inner_estimate".into(),
                json!(match inner {
                    InnerCheck::Holds => "holds",
                    InnerCheck::Fails => "fails",
                    InnerCheck::NotProper => "not_proper",
                }),
            );
        }
        Command::Regularize => {
            let am = point_matrix(a, "regularize")?;
            let theta = cli.theta.unwrap_or(0.0);
            let r = regularize(&am, &rhs_of(&sys), theta, method(cli), &settings.regularize)?;
            out.insert("theta".into(), num(theta));
            out.insert("method".into(), json!(if r.method == Method::TolMax { "tolmax" } else { "formal" }));
            out.insert("widen".into(), num(settings.regularize.widen));
            out.insert("pseudo_solution".into(), nums(&r.pseudo_solution));
            out.insert("tol_at_solution".into(), num(r.tol_at_solution));
            insert_certification(&mut out, &r.certification);
            out.insert("cond".into(), r.diagnostics.cond_point.map_or(Value::Null, num));
            out.insert("min_corner_cond".into(), r.diagnostics.min_corner_cond.map_or(Value::Null, num));
            let lavrentiev =
                if am.is_square() { lavrentiev_solve(&am, &sys.b.mid(), theta).ok() } else { None };
            out.insert("lavrentiev".into(), lavrentiev.as_deref().map_or(Value::Null, nums));
        }
        Command::Sweep => {
            let am = point_matrix(a, "sweep")?;
            let text = cli.thetas.as_deref().ok_or_else(|| CliError::Usage("--thetas <T1,T2,...> is required".into()))?;
            let thetas = parse_list("--thetas", text)?;
            let rows = theta_sweep(&am, &rhs_of(&sys), &thetas, method(cli), &settings.regularize)?;
            if cli.format == FormatArg::Csv {
                return Ok(Output::Csv(sweep_csv(&rows, am.cols())));
            }
            let list = rows
                .iter()
                .map(|r| {
                    let mut o = Map::new();
                    o.insert("theta".into(), num(r.theta));
                    o.insert("max_tol".into(), num(r.max_tol));
                    insert_certification(&mut o, &r.certification);
                    o.insert("pseudo_solution".into(), nums(&r.pseudo_solution));
                    o.insert("distance_from_reference".into(), r.distance_from_reference.map_or(Value::Null, num));
                    o.insert("min_corner_cond".into(), r.min_corner_cond.map_or(Value::Null, num));
                    Value::Object(o)
                })
                .collect();
            out.insert("rows".into(), Value::Array(list));
        }
        Command::Cond => {
            let am = point_matrix(a, "cond")?;
            out.insert("cond".into(), num(cond_spectral(&am)?));
            out.insert("singular_values".into(), nums(&singular_values(&am)));
            if let Some(theta) = cli.theta {
                out.insert("theta".into(), num(theta));
                out.insert("cond_shifted".into(), num(cond_spectral(&am.shifted(theta)?)?));
            }
        }
        Command::Corners => {
            let ai = match cli.theta {
                Some(theta) => intervalize(&point_matrix(a, "corners with --theta")?, theta)?,
                None => a.clone(),
            };
            let scan = corner_condition_scan(&ai, settings.regularize.corner_limit)?;
            out.insert("count".into(), json!(scan.all.len()));
            out.insert("min_cond".into(), num(scan.min_cond));
            out.insert("argmin".into(), matrix_value(&scan.argmin));
            out.insert("all".into(), nums(&scan.all));
        }
        Command::TolGrid => {
            let text = cli.grid.as_deref().ok_or_else(|| CliError::Usage("--grid <XMIN,XMAX,YMIN,YMAX,STEP> is required".into()))?;
            return Ok(Output::Csv(tol_grid(&sys, &parse_list("--grid", text)?)?));
        }
    }
    Ok(Output::Json(Value::Object(out)))
}

fn sweep_csv(rows: &[SweepRow], n: usize) -> String {
    let mut head = vec!["theta".to_string(), "certificate".into(), "max_tol".into(), "distance".into(), "min_corner_cond".into()];
    head.extend((1..=n).map(|j| format!("x{j}")));
    let mut text = head.join(",") + "\n";
    let opt = |v: Option<f64>| v.map_or(String::new(), |v| v.to_string());
    for r in rows {
        let mut cells = vec![
            r.theta.to_string(),
            certificate_name(r.certification.certificate).to_string(),
            r.max_tol.to_string(),
            opt(r.distance_from_reference),
            opt(r.min_corner_cond),
        ];
        cells.extend(r.pseudo_solution.iter().map(|v| v.to_string()));
        text += &(cells.join(",") + "\n");
    }
    text
}

fn axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=count).map(|k| lo + k as f64 * step).collect()
}

fn tol_grid(sys: &SystemFile, bounds: &[f64]) -> Res<String> {
    let [x0, x1, y0, y1, step] = bounds else {
        return Err(CliError::Usage("--grid needs five values XMIN,XMAX,YMIN,YMAX,STEP".into()));
    };
    if bounds.iter().any(|v| !v.is_finite()) || *step <= 0.0 || x0 > x1 || y0 > y1 {
        return Err(CliError::Usage("--grid needs XMIN <= XMAX, YMIN <= YMAX and STEP > 0".into()));
    }
    if sys.a.cols() != 2 {
        return Err(tolreg_core::Error::NotPlanar(sys.a.cols()).into());
    }
    let mut text = String::from("x1,x2,tol\n");
    for &u in &axis(*x0, *x1, *step) {
        for &v in &axis(*y0, *y1, *step) {
            let t = tol_eval(&[u, v], &sys.a, &sys.b)?;
            text += &format!("{u},{v},{t}\n");
        }
    }
    Ok(text)
}
