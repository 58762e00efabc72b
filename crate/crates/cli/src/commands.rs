use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use stablekernel::asymptotics::{asymptotic_d, asymptotic_n, AsymptoticConstant, Branch};
use stablekernel::bounds::{
    bg_certify, classical_bound_check, default_radius_list, default_sup_radius_list, default_t_list, fmt_f,
    sup_bound_check_on, threshold_scan, CertReport, Operator,
};
use stablekernel::hankel::{default_beta, eval, eval_contour, eval_direct};
use stablekernel::kernels::{frac_gradient_g_detailed, frac_laplacian_g_detailed, Evaluation};
use stablekernel::{Error, HankelIntegrand, KappaOrder, QuadResult, SpacePoint, StableParams};

use crate::config::{Check, Op, RunConfig, Study};
use crate::{CliError, Exit};

/// Output of one subcommand: the CSV text and the exit status it implies.
pub struct Outcome {
    pub csv: String,
    pub exit: Exit,
}

fn params(d: u32, alpha: f64, c: f64) -> Result<StableParams, CliError> {
    StableParams::new(d, alpha, c).map_err(CliError::from)
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f).unwrap_or_default()
}

/// Messages are quoted so embedded commas stay in one field.
fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

fn strategy_name<V>(e: &Evaluation<V>) -> &'static str {
    e.strategy.map(|s| s.as_str()).unwrap_or("closed_form")
}

/// First failure in input order decides the exit status.
fn worst(errors: impl IntoIterator<Item = Exit>) -> Exit {
    errors.into_iter().find(|&e| e != Exit::Ok).unwrap_or(Exit::Ok)
}

struct EvalJob {
    d: u32,
    alpha: f64,
    c: f64,
    kappa: KappaOrder,
    t: f64,
    x: SpacePoint,
}

struct EvalValues {
    g: f64,
    lap: f64,
    grad: Option<Vec<Complex64>>,
    err: f64,
    strategy: &'static str,
}

fn eval_point(job: &EvalJob, tol: f64) -> Result<EvalValues, Error> {
    let p = StableParams::new(job.d, job.alpha, job.c)?;
    let y = SpacePoint::origin(job.d);
    let g = frac_laplacian_g_detailed(&p, KappaOrder::integer(0), job.t, &job.x, &y, tol)?;
    let lap = frac_laplacian_g_detailed(&p, job.kappa, job.t, &job.x, &y, tol)?;
    // ∇_κ needs κ > 1 - d; outside that range the columns stay empty
    let grad = if job.kappa.gt_ratio(1 - job.d as i64, 1) {
        Some(frac_gradient_g_detailed(&p, job.kappa, job.t, &job.x, &y, tol)?)
    } else {
        None
    };
    let err = g.err_estimate.max(lap.err_estimate).max(grad.as_ref().map_or(0.0, |e| e.err_estimate));
    Ok(EvalValues { g: g.value, lap: lap.value, strategy: strategy_name(&lap), grad: grad.map(|e| e.value), err })
}

/// Columns `d,alpha,c,kappa,t,radius[,x_1..],g,Delta_kappa_g,
/// grad_j_re,grad_j_im (j = 1..max d),err_estimate,strategy,error`.
pub fn cmd_eval(cfg: &RunConfig) -> Result<Outcome, CliError> {
    for &d in &cfg.d {
        for &alpha in &cfg.alpha {
            for &c in &cfg.c {
                params(d, alpha, c)?;
            }
        }
    }
    let with_x = !cfg.x.is_empty();
    let times = cfg.times_or(vec![1.0]);
    let radii = cfg.radius.clone().unwrap_or_else(|| vec![1.0]);
    let mut jobs = Vec::new();
    for &d in &cfg.d {
        let points: Vec<SpacePoint> = if with_x {
            cfg.x
                .iter()
                .map(|x| {
                    if x.len() != d as usize {
                        return Err(CliError::domain(format!("point {x:?} does not have d = {d} coordinates")));
                    }
                    SpacePoint::new(x.clone()).map_err(CliError::from)
                })
                .collect::<Result<_, _>>()?
        } else {
            if let Some(r) = radii.iter().find(|r| r.is_nan() || **r < 0.0 || r.is_infinite()) {
                return Err(CliError::domain(format!("radius must be finite and >= 0, got {r}")));
            }
            radii.iter().map(|&r| SpacePoint::on_axis(d, r)).collect()
        };
        for &alpha in &cfg.alpha {
            for &c in &cfg.c {
                for &kappa in &cfg.kappa {
                    for &t in &times {
                        for x in &points {
                            jobs.push(EvalJob { d, alpha, c, kappa, t, x: x.clone() });
                        }
                    }
                }
            }
        }
    }
    let results: Vec<Result<EvalValues, Error>> = jobs.par_iter().map(|j| eval_point(j, cfg.tol)).collect();

    let max_d = *cfg.d.iter().max().unwrap() as usize;
    let mut csv = String::from("d,alpha,c,kappa,t,radius");
    if with_x {
        for j in 1..=max_d {
            write!(csv, ",x_{j}").unwrap();
        }
    }
    csv.push_str(",g,Delta_kappa_g");
    for j in 1..=max_d {
        write!(csv, ",grad_{j}_re,grad_{j}_im").unwrap();
    }
    csv.push_str(",err_estimate,strategy,error\n");

    let mut exits = Vec::new();
    for (job, res) in jobs.iter().zip(&results) {
        write!(csv, "{},{},{},{},{},{}", job.d, fmt_f(job.alpha), fmt_f(job.c), job.kappa, fmt_f(job.t), fmt_f(job.x.radius()))
            .unwrap();
        if with_x {
            for j in 0..max_d {
                csv.push(',');
                if let Some(&v) = job.x.coords().get(j) {
                    csv.push_str(&fmt_f(v));
                }
            }
        }
        match res {
            Ok(v) => {
                write!(csv, ",{},{}", fmt_f(v.g), fmt_f(v.lap)).unwrap();
                for j in 0..max_d {
                    match v.grad.as_ref().and_then(|g| g.get(j)) {
                        Some(z) => write!(csv, ",{},{}", fmt_f(z.re), fmt_f(z.im)).unwrap(),
                        None => csv.push_str(",,"),
                    }
                }
                writeln!(csv, ",{},{},", fmt_f(v.err), v.strategy).unwrap();
                exits.push(Exit::Ok);
            }
            Err(e) => {
                csv.push_str(",,");
                csv.push_str(&",,".repeat(max_d));
                writeln!(csv, ",,,{}", quote(&e.to_string())).unwrap();
                exits.push(Exit::from(e));
            }
        }
    }
    Ok(Outcome { csv, exit: worst(exits) })
}

fn constant_row(csv: &mut String, d: u32, alpha: f64, kappa: KappaOrder, op: &str, c: &Result<AsymptoticConstant, Error>) {
    write!(csv, "{d},{},{kappa},{op},", fmt_f(alpha)).unwrap();
    match c {
        Ok(c) => {
            let degenerate = matches!(c.branch, Branch::EvenD | Branch::OddN);
            writeln!(
                csv,
                "{},{},{},{},{},",
                c.branch,
                degenerate,
                fmt_f(c.value),
                fmt_f(c.coefficient()),
                fmt_f(c.decay_exponent)
            )
            .unwrap();
        }
        Err(e) => writeln!(csv, "out_of_range,,,,,{}", quote(&e.to_string())).unwrap(),
    }
}

/// Columns `d,alpha,kappa,operator,branch,degenerate,value,coefficient,
/// decay_exponent,error`; one `D` and one `N` row per `(d, α, κ)`.
pub fn cmd_constants(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut csv = String::from("d,alpha,kappa,operator,branch,degenerate,value,coefficient,decay_exponent,error\n");
    let mut exit = Exit::Ok;
    for &d in &cfg.d {
        for &alpha in &cfg.alpha {
            params(d, alpha, 1.0)?;
            for &kappa in &cfg.kappa {
                let dc = asymptotic_d(d, alpha, kappa);
                let nc = asymptotic_n(d, alpha, kappa);
                constant_row(&mut csv, d, alpha, kappa, "D", &dc);
                constant_row(&mut csv, d, alpha, kappa, "N", &nc);
                if dc.is_err() && nc.is_err() && exit == Exit::Ok {
                    exit = Exit::Domain;
                }
            }
        }
    }
    Ok(Outcome { csv, exit })
}

fn report_csv(report: &CertReport) -> String {
    let mut buf = Vec::new();
    report.write_csv(&mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("CSV is UTF-8")
}

/// Writes the full certification report; exit 1 when it does not pass.
pub fn cmd_certify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (d, alpha, c, kappa) = cfg.single()?;
    let p = params(d, alpha, c)?;
    let t_list = &cfg.times_or(default_t_list());
    let report = match cfg.check {
        Check::Bg => bg_certify(&p, t_list, &cfg.radius.clone().unwrap_or_else(default_radius_list), cfg.tol),
        Check::Sup => {
            sup_bound_check_on(&p, kappa, t_list, &cfg.radius.clone().unwrap_or_else(default_sup_radius_list), cfg.tol)
        }
        Check::Classical => {
            classical_bound_check(&p, kappa, t_list, &cfg.radius.clone().unwrap_or_else(default_radius_list), cfg.tol)
        }
        Check::Threshold => {
            let op = match cfg.op {
                Op::Laplacian => Operator::Laplacian,
                Op::Gradient => Operator::Gradient,
            };
            threshold_scan(&p, kappa, op, &cfg.eps, cfg.budget, cfg.tol)
        }
    }?;
    let exit = if report.passed { Exit::Ok } else { Exit::CertFailed };
    Ok(Outcome { csv: report_csv(&report), exit })
}

struct ConvJob {
    radius: f64,
    tol: f64,
    kind: ConvStrategy,
}

#[derive(Clone, Copy)]
enum ConvStrategy {
    Dispatch,
    Direct,
    Contour,
}

fn conv_eval(h: &HankelIntegrand, alpha: f64, job: &ConvJob) -> Result<QuadResult, Error> {
    match job.kind {
        ConvStrategy::Dispatch => eval(h, job.tol),
        ConvStrategy::Direct => eval_direct(h, job.tol),
        ConvStrategy::Contour => eval_contour(h, default_beta(alpha), job.tol),
    }
}

/// Radius or tolerance study of the radial integral behind `D` (or the
/// gradient scalar `n`), with the ratio of the value to its leading tail.
///
/// Columns `study,d,alpha,kappa,operator,radius,tol,method,strategy,value,
/// err_estimate,evals,ratio_to_asymptote,error`. Every point is evaluated by
/// the dispatcher and by the direct engine, and for odd `d` also by the
/// contour engine.
pub fn cmd_convergence(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (d, alpha, _c, kappa) = cfg.single()?;
    params(d, alpha, 1.0)?;
    let gradient = cfg.op == Op::Gradient;
    let lower = if gradient { 1 - d as i64 } else { -(d as i64) };
    if !kappa.gt_ratio(lower, 1) {
        return Err(CliError::domain(format!("kappa={kappa} must exceed {lower}")));
    }
    let radii = cfg.radius.clone().unwrap_or_else(|| vec![25.0, 50.0, 100.0, 200.0]);
    if let Some(r) = radii.iter().find(|r| r.is_nan() || **r <= 0.0 || r.is_infinite()) {
        return Err(CliError::domain(format!("convergence radii must be finite and > 0, got {r}")));
    }
    let tols = match cfg.study {
        Study::Radius => vec![cfg.tol],
        Study::Tol => cfg.tols.clone().unwrap_or_else(|| (4..=11).map(|k| 10f64.powi(-k)).collect()),
    };
    let radii = match cfg.study {
        Study::Radius => radii,
        Study::Tol => vec![radii[0]],
    };
    let mut kinds = vec![ConvStrategy::Dispatch, ConvStrategy::Direct];
    if d % 2 == 1 {
        kinds.push(ConvStrategy::Contour);
    }
    let mut jobs = Vec::new();
    for &radius in &radii {
        for &tol in &tols {
            for &kind in &kinds {
                jobs.push(ConvJob { radius, tol, kind });
            }
        }
    }
    let constant = if gradient { asymptotic_n(d, alpha, kappa) } else { asymptotic_d(d, alpha, kappa) }.ok();
    let k = kappa.value();
    let results: Vec<Result<QuadResult, Error>> = jobs
        .par_iter()
        .map(|job| {
            let h = if gradient {
                HankelIntegrand::radial_gradient(d, k, alpha, job.radius)?
            } else {
                HankelIntegrand::radial(d, k, alpha, job.radius)?
            };
            conv_eval(&h, alpha, job)
        })
        .collect();

    let study = match cfg.study {
        Study::Radius => "radius",
        Study::Tol => "tol",
    };
    let op_name = if gradient { "N" } else { "D" };
    let mut csv = String::from(
        "study,d,alpha,kappa,operator,radius,tol,method,strategy,value,err_estimate,evals,ratio_to_asymptote,error\n",
    );
    let mut exits = Vec::new();
    for (job, res) in jobs.iter().zip(&results) {
        let method = match job.kind {
            ConvStrategy::Dispatch => "dispatch",
            ConvStrategy::Direct => "direct",
            ConvStrategy::Contour => "contour",
        };
        write!(csv, "{study},{d},{},{kappa},{op_name},{},{},{method},", fmt_f(alpha), fmt_f(job.radius), fmt_f(job.tol))
            .unwrap();
        match res {
            Ok(q) => {
                // D (or n) = (2π)^{-d/2} r^{-d-κ} I
                let scale = (2.0 * PI).powf(-0.5 * d as f64) * job.radius.powf(-(d as f64) - k);
                let value = q.value * scale;
                let ratio = constant.filter(|c| c.value != 0.0).map(|c| value / c.tail(job.radius));
                writeln!(
                    csv,
                    "{},{},{},{},{},",
                    q.strategy,
                    fmt_f(value),
                    fmt_f(q.err_estimate * scale),
                    q.evals,
                    opt(ratio)
                )
                .unwrap();
                exits.push(Exit::Ok);
            }
            Err(e) => {
                writeln!(csv, ",,,,,{}", quote(&e.to_string())).unwrap();
                exits.push(Exit::from(e));
            }
        }
    }
    Ok(Outcome { csv, exit: worst(exits) })
}
