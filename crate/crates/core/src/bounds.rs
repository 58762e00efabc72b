//! Empirical certification of two-sided bounds on the density and on its
//! fractional derivatives.
//!
//! Every check evaluates a ratio `value / reference` over a `(t, radius)`
//! grid, fits the extreme constants, and re-fits them on a refined grid
//! (geometric midpoints inserted between neighbouring radii). A check passes
//! when every ratio is finite and positive and the fitted constants move by
//! less than [`MAX_DRIFT`].

use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;

use crate::asymptotics::{asymptotic_d, asymptotic_n, AsymptoticConstant};
use crate::error::{Error, Result};
use crate::kappa::KappaOrder;
use crate::kernels::{eval_d, eval_n, frac_gradient_g, frac_laplacian_g, SpacePoint, StableParams};

/// Largest relative change of a fitted constant under grid refinement.
pub const MAX_DRIFT: f64 = 0.05;

/// Largest radius scanned by [`threshold_finder`].
pub const RADIUS_BUDGET: f64 = 1e4;

/// Radii per decade in threshold scans.
pub const THRESHOLD_POINTS_PER_DECADE: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertKind {
    BlumenthalGetoor,
    SupBound,
    Classical,
    Threshold,
}

impl CertKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CertKind::BlumenthalGetoor => "bg",
            CertKind::SupBound => "sup",
            CertKind::Classical => "classical",
            CertKind::Threshold => "threshold",
        }
    }
}

impl fmt::Display for CertKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which operator a threshold scan brackets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operator {
    Laplacian,
    Gradient,
}

/// One grid point. `component` names the tested quantity: `g`, `Delta`,
/// `grad_j` (the `j`-th gradient component, 1-based) or `sum`.
#[derive(Debug, Clone, PartialEq)]
pub struct CertRow {
    pub d: u32,
    pub alpha: f64,
    pub c: f64,
    pub kappa: KappaOrder,
    pub t: f64,
    pub radius: f64,
    pub component: String,
    pub value: f64,
    pub reference: f64,
    pub ratio: f64,
}

/// Smallest certified radius for one `(ε, κ)`; `radius` is `None` when
/// nothing within the budget certifies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdEntry {
    pub epsilon: f64,
    pub kappa: KappaOrder,
    pub radius: Option<f64>,
    pub best_epsilon: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertReport {
    pub kind: CertKind,
    pub rows: Vec<CertRow>,
    /// Fitted constants by name (`G1`, `G2`, `K`, `M`, drift values).
    pub empirical_constants: Vec<(String, f64)>,
    pub threshold_radius: Vec<ThresholdEntry>,
    pub passed: bool,
    pub tolerance_used: f64,
    pub notes: Vec<String>,
}

impl CertReport {
    /// `(d, α, c, κ, t, radius)` for every row.
    pub fn param_grid(&self) -> Vec<(u32, f64, f64, KappaOrder, f64, f64)> {
        self.rows.iter().map(|r| (r.d, r.alpha, r.c, r.kappa, r.t, r.radius)).collect()
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.ratio).collect()
    }

    pub fn constant(&self, name: &str) -> Option<f64> {
        self.empirical_constants.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }

    /// `K(ε)` for the given `ε`, if certified.
    pub fn threshold(&self, epsilon: f64) -> Option<f64> {
        self.threshold_radius.iter().find(|e| e.epsilon == epsilon).and_then(|e| e.radius)
    }

    /// CSV with header
    /// `check,d,alpha,c,kappa,t,radius,component,value,reference,ratio`,
    /// followed for threshold reports by one `K(eps=…)` column per `ε`
    /// (empty when not certified), then `#`-prefixed summary lines.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        write!(w, "check,d,alpha,c,kappa,t,radius,component,value,reference,ratio")?;
        for e in &self.threshold_radius {
            write!(w, ",K(eps={})", e.epsilon)?;
        }
        writeln!(w)?;
        for r in &self.rows {
            write!(
                w,
                "{},{},{},{},{},{},{},{},{},{},{}",
                self.kind,
                r.d,
                fmt_f(r.alpha),
                fmt_f(r.c),
                r.kappa,
                fmt_f(r.t),
                fmt_f(r.radius),
                r.component,
                fmt_f(r.value),
                fmt_f(r.reference),
                fmt_f(r.ratio)
            )?;
            for e in &self.threshold_radius {
                match e.radius {
                    Some(k) => write!(w, ",{}", fmt_f(k))?,
                    None => write!(w, ",")?,
                }
            }
            writeln!(w)?;
        }
        writeln!(w, "# check={}", self.kind)?;
        writeln!(w, "# passed={}", self.passed)?;
        writeln!(w, "# tolerance_used={}", fmt_f(self.tolerance_used))?;
        for (name, v) in &self.empirical_constants {
            writeln!(w, "# {name}={}", fmt_f(*v))?;
        }
        for e in &self.threshold_radius {
            match e.radius {
                Some(k) => writeln!(w, "# K(eps={}, kappa={})={}", e.epsilon, e.kappa, fmt_f(k))?,
                None => writeln!(
                    w,
                    "# K(eps={}, kappa={})=not_found best_epsilon={}",
                    e.epsilon,
                    e.kappa,
                    fmt_f(e.best_epsilon)
                )?,
            }
        }
        for n in &self.notes {
            writeln!(w, "# {n}")?;
        }
        Ok(())
    }
}

/// Floats with 17 significant digits.
pub fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

/// `n` log-spaced points from `a` to `b` inclusive.
pub fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let (la, lb) = (a.ln(), b.ln());
    (0..n).map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp()).collect()
}

pub fn default_t_list() -> Vec<f64> {
    vec![0.1, 1.0, 10.0]
}

/// 60 log-spaced radii from 0.1 to 300.
pub fn default_radius_list() -> Vec<f64> {
    log_grid(0.1, 300.0, 60)
}

/// Inserts the geometric midpoint between neighbouring radii (the
/// arithmetic one next to 0).
pub fn refine_radii(radii: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * radii.len());
    for w in radii.windows(2) {
        out.push(w[0]);
        let mid = if w[0] > 0.0 { (w[0] * w[1]).sqrt() } else { 0.5 * (w[0] + w[1]) };
        out.push(mid);
    }
    if let Some(&last) = radii.last() {
        out.push(last);
    }
    out
}

fn check_grids(t_list: &[f64], radius_list: &[f64], allow_zero: bool) -> Result<()> {
    if t_list.is_empty() || radius_list.is_empty() {
        return Err(Error::domain("certification grids must be nonempty"));
    }
    if t_list.iter().any(|&t| !(t > 0.0) || !t.is_finite()) {
        return Err(Error::domain("times must be finite and > 0"));
    }
    let bad = |&r: &f64| if allow_zero { !(r >= 0.0) } else { !(r > 0.0) } || !r.is_finite();
    if radius_list.iter().any(bad) {
        return Err(Error::domain(if allow_zero { "radii must be finite and >= 0" } else { "radii must be finite and > 0" }));
    }
    Ok(())
}

fn sorted(v: &[f64]) -> Vec<f64> {
    let mut v = v.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    v.dedup();
    v
}

/// Evaluates `f` on every `(t, radius)` pair in parallel, in input order.
fn grid_rows<F>(t_list: &[f64], radii: &[f64], f: F) -> Result<Vec<CertRow>>
where
    F: Fn(f64, f64) -> Result<Vec<CertRow>> + Sync,
{
    let pairs: Vec<(f64, f64)> = t_list.iter().flat_map(|&t| radii.iter().map(move |&r| (t, r))).collect();
    let rows: Result<Vec<Vec<CertRow>>> = pairs.par_iter().map(|&(t, r)| f(t, r)).collect();
    Ok(rows?.into_iter().flatten().collect())
}

fn extremes(rows: &[CertRow]) -> (f64, f64) {
    rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r.ratio), hi.max(r.ratio)))
}

fn drift(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn all_finite_positive(rows: &[CertRow]) -> bool {
    rows.iter().all(|r| r.ratio.is_finite() && r.ratio > 0.0)
}

/// `g(t, x, 0) (t^{1/α} + |x|)^{d+α} / t` over the grid; fits `G₁ = min`,
/// `G₂ = max`.
pub fn bg_certify(params: &StableParams, t_list: &[f64], radius_list: &[f64], tol: f64) -> Result<CertReport> {
    check_grids(t_list, radius_list, false)?;
    let (d, alpha, c) = (params.d(), params.alpha(), params.c());
    let row = |t: f64, r: f64| -> Result<Vec<CertRow>> {
        let g = frac_laplacian_g(params, KappaOrder::integer(0), t, &SpacePoint::on_axis(d, r), &SpacePoint::origin(d), tol)?;
        let reference = t / (t.powf(1.0 / alpha) + r).powf(d as f64 + alpha);
        Ok(vec![CertRow {
            d,
            alpha,
            c,
            kappa: KappaOrder::integer(0),
            t,
            radius: r,
            component: "g".into(),
            value: g,
            reference,
            ratio: g / reference,
        }])
    };
    let radii = sorted(radius_list);
    let coarse = grid_rows(t_list, &radii, row)?;
    let fine = grid_rows(t_list, &refine_radii(&radii), row)?;
    let (g1c, g2c) = extremes(&coarse);
    let (g1, g2) = extremes(&fine);
    let dr = drift(g1c, g1).max(drift(g2c, g2));
    let passed = all_finite_positive(&fine) && g1 > 0.0 && g2.is_finite() && dr < MAX_DRIFT;
    Ok(CertReport {
        kind: CertKind::BlumenthalGetoor,
        rows: fine,
        empirical_constants: vec![("G1".into(), g1), ("G2".into(), g2), ("drift".into(), dr)],
        threshold_radius: Vec::new(),
        passed,
        tolerance_used: tol,
        notes: Vec::new(),
    })
}

/// Radius grid used by [`sup_bound_check`]: 0 followed by the default radii.
pub fn default_sup_radius_list() -> Vec<f64> {
    let mut v = vec![0.0];
    v.extend(default_radius_list());
    v
}

/// `K = max (|Δ_κ g| + |∇_κ g|) t^{(d+κ)/α}` over `t_list` and the default
/// sup radius grid. The gradient term is dropped when `κ ≤ 1 - d`.
pub fn sup_bound_check(params: &StableParams, kappa: KappaOrder, t_list: &[f64], tol: f64) -> Result<CertReport> {
    sup_bound_check_on(params, kappa, t_list, &default_sup_radius_list(), tol)
}

/// [`sup_bound_check`] on an explicit radius grid.
pub fn sup_bound_check_on(
    params: &StableParams,
    kappa: KappaOrder,
    t_list: &[f64],
    radius_list: &[f64],
    tol: f64,
) -> Result<CertReport> {
    check_grids(t_list, radius_list, true)?;
    let (d, alpha, c) = (params.d(), params.alpha(), params.c());
    if !kappa.gt_ratio(-(d as i64), 1) {
        return Err(Error::domain(format!("sup bound requires kappa > -d, got {kappa}")));
    }
    let with_gradient = kappa.gt_ratio(1 - d as i64, 1);
    let k = kappa.value();
    let row = |t: f64, r: f64| -> Result<Vec<CertRow>> {
        let x = SpacePoint::on_axis(d, r);
        let y = SpacePoint::origin(d);
        let lap = frac_laplacian_g(params, kappa, t, &x, &y, tol)?.abs();
        let grad = if with_gradient {
            frac_gradient_g(params, kappa, t, &x, &y, tol)?.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
        } else {
            0.0
        };
        let value = lap + grad;
        let reference = t.powf(-(d as f64 + k) / alpha);
        Ok(vec![CertRow {
            d,
            alpha,
            c,
            kappa,
            t,
            radius: r,
            component: "sum".into(),
            value,
            reference,
            ratio: value / reference,
        }])
    };
    let radii = sorted(radius_list);
    let base = grid_rows(t_list, &radii, row)?;
    let refined = grid_rows(t_list, &refine_radii(&radii), row)?;
    let mut extended_t = sorted(t_list);
    let t_next = extended_t.last().copied().unwrap_or(1.0) * 10.0;
    extended_t.push(t_next);
    let extension = grid_rows(&[t_next], &radii, row)?;
    let k_base = extremes(&base).1;
    let k_refined = extremes(&refined).1;
    let k_ext = k_base.max(extremes(&extension).1);
    let dr = drift(k_base, k_refined).max(drift(k_base, k_ext));
    let mut rows = refined;
    rows.extend(extension);
    let k_fit = extremes(&rows).1;
    let passed = k_fit > 0.0 && k_fit.is_finite() && rows.iter().all(|r| r.ratio.is_finite()) && dr < MAX_DRIFT;
    let mut notes = Vec::new();
    if !with_gradient {
        notes.push("gradient term omitted (kappa <= 1 - d)".to_string());
    }
    Ok(CertReport {
        kind: CertKind::SupBound,
        rows,
        empirical_constants: vec![("K".into(), k_fit), ("drift".into(), dr)],
        threshold_radius: Vec::new(),
        passed,
        tolerance_used: tol,
        notes,
    })
}

/// Bounds `|D^{(κ)} g| ≤ M t / (t^{1/α} + |x|)^{d+α+κ}` for local operators
/// (`Δ_κ` with even integer `κ`, `∇_κ` with odd integer `κ`) and
/// `|D^{(κ)} g| ≤ M / (t^{1/α} + |x|)^{d+κ}` otherwise. Points lie on the
/// diagonal so every gradient component is nonzero.
pub fn classical_bound_check(
    params: &StableParams,
    kappa: KappaOrder,
    t_list: &[f64],
    radius_list: &[f64],
    tol: f64,
) -> Result<CertReport> {
    check_grids(t_list, radius_list, false)?;
    let (d, alpha, c) = (params.d(), params.alpha(), params.c());
    if !kappa.gt_ratio(0, 1) || alpha < 1.0 {
        return Err(Error::domain(format!(
            "classical bounds need kappa > 0 and alpha >= 1, got kappa={kappa}, alpha={alpha}"
        )));
    }
    let k = kappa.value();
    let df = d as f64;
    let lap_local = kappa.is_even_integer();
    let grad_local = kappa.is_odd_integer();
    let reference = move |t: f64, r: f64, local: bool| {
        let base = t.powf(1.0 / alpha) + r;
        if local {
            t / base.powf(df + alpha + k)
        } else {
            1.0 / base.powf(df + k)
        }
    };
    let row = |t: f64, r: f64| -> Result<Vec<CertRow>> {
        let s = r / (df).sqrt();
        let x = SpacePoint::new(vec![s; d as usize])?;
        let y = SpacePoint::origin(d);
        let mut out = Vec::with_capacity(d as usize + 1);
        let mk = |component: String, value: f64, reference: f64| CertRow {
            d,
            alpha,
            c,
            kappa,
            t,
            radius: r,
            component,
            value,
            reference,
            ratio: value / reference,
        };
        let lap = frac_laplacian_g(params, kappa, t, &x, &y, tol)?.abs();
        out.push(mk("Delta".into(), lap, reference(t, r, lap_local)));
        for (j, z) in frac_gradient_g(params, kappa, t, &x, &y, tol)?.iter().enumerate() {
            out.push(mk(format!("grad_{}", j + 1), z.norm(), reference(t, r, grad_local)));
        }
        Ok(out)
    };
    let radii = sorted(radius_list);
    let coarse = grid_rows(t_list, &radii, row)?;
    let fine = grid_rows(t_list, &refine_radii(&radii), row)?;
    let fit = |rows: &[CertRow], prefix: &str| {
        rows.iter().filter(|r| r.component.starts_with(prefix)).map(|r| r.ratio).fold(0.0f64, f64::max)
    };
    let (md_c, mg_c) = (fit(&coarse, "Delta"), fit(&coarse, "grad"));
    let (md, mg) = (fit(&fine, "Delta"), fit(&fine, "grad"));
    let dr = drift(md_c, md).max(drift(mg_c, mg));
    let finite = fine.iter().all(|r| r.ratio.is_finite() && r.ratio >= 0.0);
    let passed = finite && md > 0.0 && mg > 0.0 && dr < MAX_DRIFT;
    let form = |local: bool| if local { "t-weighted" } else { "generic" };
    Ok(CertReport {
        kind: CertKind::Classical,
        rows: fine,
        empirical_constants: vec![("M_Delta".into(), md), ("M_grad".into(), mg), ("drift".into(), dr)],
        threshold_radius: Vec::new(),
        passed,
        tolerance_used: tol,
        notes: vec![format!("Delta bound: {}; grad bound: {}", form(lap_local), form(grad_local))],
    })
}

/// Radii `10^{-1 + i/20}` up to `budget`.
pub fn threshold_grid(budget: f64) -> Vec<f64> {
    let mut v = Vec::new();
    let mut i = 0;
    loop {
        let r = 10f64.powf(-1.0 + i as f64 / THRESHOLD_POINTS_PER_DECADE as f64);
        if r > budget * (1.0 + 1e-12) {
            break;
        }
        v.push(r);
        i += 1;
    }
    v
}

/// Rows of `value / tail` at unit scale `ct = 1` along the diagonal.
fn threshold_rows(
    params: &StableParams,
    kappa: KappaOrder,
    op: Operator,
    radii: &[f64],
    tol: f64,
) -> Result<(AsymptoticConstant, Vec<CertRow>)> {
    let (d, alpha, c) = (params.d(), params.alpha(), params.c());
    let constant = match op {
        Operator::Laplacian => asymptotic_d(d, alpha, kappa)?,
        Operator::Gradient => asymptotic_n(d, alpha, kappa)?,
    };
    if constant.value == 0.0 {
        return Err(Error::Parity(format!("tail constant vanishes for kappa={kappa}")));
    }
    let t = 1.0 / c;
    let df = d as f64;
    let rows: Result<Vec<Vec<CertRow>>> = radii
        .par_iter()
        .map(|&r| -> Result<Vec<CertRow>> {
            let mk = |component: String, value: f64, reference: f64| CertRow {
                d,
                alpha,
                c,
                kappa,
                t,
                radius: r,
                component,
                value,
                reference,
                ratio: value / reference,
            };
            match op {
                Operator::Laplacian => {
                    let v = eval_d(params, kappa, r, tol)?;
                    Ok(vec![mk("Delta".into(), v, constant.tail(r))])
                }
                Operator::Gradient => {
                    // (N, ν) = i n x_ν/|x| with tail n ~ A r^{1-decay}
                    let s = r / df.sqrt();
                    let x = SpacePoint::new(vec![s; d as usize])?;
                    let n = eval_n(params, kappa, &x, tol)?;
                    let tail = constant.tail(r);
                    Ok(n
                        .iter()
                        .enumerate()
                        .map(|(j, z)| mk(format!("grad_{}", j + 1), z.im, tail * s / r))
                        .collect())
                }
            }
        })
        .collect();
    Ok((constant, rows?.into_iter().flatten().collect()))
}

/// Smallest grid radius `R ≤ budget/2` from which every ratio stays in
/// `[1-ε, 1+ε]`, and the best `ε` achievable within that constraint.
fn certify_radius(rows: &[CertRow], epsilon: f64, budget: f64) -> (Option<f64>, f64) {
    let mut radii: Vec<f64> = rows.iter().map(|r| r.radius).collect();
    radii.dedup();
    // worst deviation from each radius outwards
    let mut worst_from = vec![0.0f64; radii.len()];
    let mut acc = 0.0f64;
    for (i, &r) in radii.iter().enumerate().rev() {
        for row in rows.iter().filter(|row| row.radius == r) {
            let dev = (row.ratio - 1.0).abs();
            acc = acc.max(if dev.is_nan() { f64::INFINITY } else { dev });
        }
        worst_from[i] = acc;
    }
    let mut best = f64::INFINITY;
    let mut found = None;
    for (i, &r) in radii.iter().enumerate() {
        if r > 0.5 * budget {
            break;
        }
        best = best.min(worst_from[i]);
        if found.is_none() && worst_from[i] <= epsilon {
            found = Some(r);
        }
    }
    (found, best)
}

/// `K(ε)` for several `ε` on the grid [`threshold_grid`]`(budget)`, in
/// units of `(ct)^{1/α}`. `passed` is true when every `ε` certifies.
pub fn threshold_scan(
    params: &StableParams,
    kappa: KappaOrder,
    op: Operator,
    epsilons: &[f64],
    budget: f64,
    tol: f64,
) -> Result<CertReport> {
    if epsilons.is_empty() || epsilons.iter().any(|&e| !(e > 0.0 && e < 1.0)) {
        return Err(Error::domain("epsilon values must lie in (0, 1)"));
    }
    if !(budget > 0.1) || !budget.is_finite() {
        return Err(Error::domain(format!("radius budget must exceed 0.1, got {budget}")));
    }
    let grid = threshold_grid(budget);
    let (constant, rows) = threshold_rows(params, kappa, op, &grid, tol)?;
    let entries: Vec<ThresholdEntry> = epsilons
        .iter()
        .map(|&epsilon| {
            let (radius, best_epsilon) = certify_radius(&rows, epsilon, budget);
            ThresholdEntry { epsilon, kappa, radius, best_epsilon }
        })
        .collect();
    let passed = entries.iter().all(|e| e.radius.is_some());
    Ok(CertReport {
        kind: CertKind::Threshold,
        rows,
        empirical_constants: vec![("tail_constant".into(), constant.value), ("decay".into(), constant.decay_exponent)],
        threshold_radius: entries,
        passed,
        tolerance_used: tol,
        notes: vec![format!("branch={} budget={}", constant.branch, fmt_f(budget))],
    })
}

/// `K(ε)` within [`RADIUS_BUDGET`]; a not-found error carries the best
/// achieved `ε`.
pub fn threshold_finder(
    params: &StableParams,
    kappa: KappaOrder,
    op: Operator,
    epsilon: f64,
    tol: f64,
) -> Result<CertReport> {
    let report = threshold_scan(params, kappa, op, &[epsilon], RADIUS_BUDGET, tol)?;
    let entry = report.threshold_radius[0];
    if entry.radius.is_none() {
        return Err(Error::ThresholdNotFound { epsilon, budget: RADIUS_BUDGET, best_epsilon: entry.best_epsilon });
    }
    Ok(report)
}
