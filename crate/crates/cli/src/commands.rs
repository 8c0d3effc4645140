use std::fs;
use std::path::Path;

use rfh_core::analytics::{
    outage_primary, outage_secondary, p_guard, p_harvest, spatial_throughput, transmission_probability,
    wit_outage, wit_transmission_probability, TxProbability,
};
use rfh_core::optimizer::{solve_p1_closed_form, solve_p1_numeric, solve_p2, LambdaS, OptimizationResult};
use rfh_core::params::{ChargingGeometry, NetworkParams};
use rfh_core::sim::{
    approx_active_density, empirical_cdf, estimate_outage, estimate_p_t, interference_samples, map_indexed,
    Execution, HarvestRule, InterferenceMode, Link, PtActivity, SimConfig, SimEstimate,
};
use rfh_core::Error;

use crate::args::{ActivityArg, AnalyzeArgs, HarvestArg, Method, ModeArg, OptimizeArgs, Quantity, SimFlags, SimulateArgs};
use crate::error::{CliError, Result};
use crate::sweep::{expand, SweepPoint, SweepSpec};
use crate::table::{num, opt, Table};

pub fn load_config(path: &Path) -> Result<NetworkParams> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    Ok(NetworkParams::from_json(&text)?)
}

/// Header lines shared by every CSV.
pub fn header(command: &str, params: &NetworkParams, sweeps: &[SweepSpec], sim: Option<&SimConfig>) -> Vec<String> {
    let mut lines = vec![format!("rfh {}", env!("CARGO_PKG_VERSION")), format!("command: {command}")];
    lines.push(format!("seed: {}", sim.map_or("none".to_string(), |s| s.master_seed.to_string())));
    lines.push(format!("config: {}", params.to_json()));
    if !sweeps.is_empty() {
        let specs: Vec<String> = sweeps.iter().map(sweep_text).collect();
        lines.push(format!("sweep: {}", specs.join(" ")));
    }
    if let Some(s) = sim {
        lines.push(format!(
            "sim: slots={} replications={} window={} warmup={} harvest={:?} pt_activity={:?}",
            s.n_slots,
            s.n_replications,
            s.window_side.map_or("default".into(), num),
            s.warmup.map_or("default".into(), |w| w.to_string()),
            s.harvest_rule,
            s.pt_activity,
        ));
    }
    lines
}

fn sweep_text(s: &SweepSpec) -> String {
    let log = if s.scale == crate::sweep::Scale::Log { ":log" } else { "" };
    format!("{}={}:{}:{}{log}", s.name, s.start, s.stop, s.n_points)
}

pub fn sim_config(flags: &SimFlags, default_activity: PtActivity) -> SimConfig {
    SimConfig {
        window_side: flags.window,
        n_slots: flags.slots,
        n_replications: flags.replications,
        master_seed: flags.seed,
        harvest_rule: match flags.harvest {
            HarvestArg::Nearest => HarvestRule::NearestPt,
            HarvestArg::Sum => HarvestRule::SumInZone,
        },
        pt_activity: match flags.pt_activity {
            Some(ActivityArg::Thinning) => PtActivity::Thinning,
            Some(ActivityArg::Fresh) => PtActivity::Fresh,
            None => default_activity,
        },
        warmup: flags.warmup,
        execution: Execution::default(),
    }
}

pub fn interference_mode(m: ModeArg) -> InterferenceMode {
    match m {
        ModeArg::Exact => InterferenceMode::Exact,
        ModeArg::Approx => InterferenceMode::Approx,
    }
}

/// Runs `f` over the points in parallel, keeping sweep order.
fn over_points<T: Send>(points: &[SweepPoint], f: impl Fn(&NetworkParams) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    map_indexed(Execution::default(), points.len(), |i| f(&points[i].params)).into_iter().collect()
}

fn sweep_columns(sweeps: &[SweepSpec], rest: &[&str]) -> Vec<String> {
    sweeps.iter().map(|s| s.name.clone()).chain(rest.iter().map(|s| s.to_string())).collect()
}

fn sweep_cells(point: &SweepPoint) -> Vec<String> {
    point.values.iter().copied().map(num).collect()
}

pub fn p_t_of(params: &NetworkParams) -> rfh_core::Result<TxProbability> {
    if params.is_wit() {
        wit_transmission_probability(params)
    } else {
        transmission_probability(params)
    }
}

fn p_t_cells(p_t: &TxProbability) -> [String; 3] {
    match *p_t {
        TxProbability::Exact(v) => [num(v), String::new(), String::new()],
        TxProbability::Bounds { lower, upper } => [String::new(), num(lower), num(upper)],
    }
}

pub const ANALYZE_COLUMNS: [&str; 15] = [
    "m_slots",
    "p_g",
    "p_h",
    "p_t_exact",
    "p_t_lower",
    "p_t_upper",
    "active_density",
    "tau_p",
    "outage_primary",
    "tau_s",
    "outage_secondary",
    "outage_secondary_raw",
    "outage_secondary_clamped",
    "throughput",
    "regime_warnings",
];

/// One analysis row. Interval transmission probabilities enter the density
/// of active STs through their midpoint.
pub fn analyze_row(p: &NetworkParams) -> Result<Vec<String>> {
    let p = p.validate()?;
    let geometry = ChargingGeometry::new(&p)?;
    let p_t = p_t_of(&p)?;
    let active = p_t.midpoint() * p.lambda_s;
    let [exact, lower, upper] = p_t_cells(&p_t);
    let (tau_p, out_p) = if p.is_wit() {
        (String::new(), String::new())
    } else {
        let o = outage_primary(&p, active)?;
        (num(o.tau), num(o.probability))
    };
    let sec = if p.is_wit() { wit_outage(&p, active)? } else { outage_secondary(&p, active)? };
    let warnings: Vec<String> = p.regime_warnings(rfh_core::params::DEFAULT_WARN_RATIO).iter().map(|w| w.to_string()).collect();
    Ok(vec![
        geometry.m_slots.to_string(),
        num(p_guard(p.lambda_p(), p.r_g)),
        num(p_harvest(p.lambda_p(), p.r_h)),
        exact,
        lower,
        upper,
        num(active),
        tau_p,
        out_p,
        num(sec.tau),
        num(sec.probability),
        num(sec.raw),
        sec.clamped.to_string(),
        num(spatial_throughput(p_t.midpoint(), p.lambda_s, p.theta_s)),
        warnings.join("; "),
    ])
}

pub fn analyze(args: &AnalyzeArgs) -> Result<()> {
    let base = load_config(&args.inputs.config)?;
    let points = expand(&base, &args.inputs.sweeps)?;
    let rows = over_points(&points, analyze_row)?;
    let mut table = Table::new(&sweep_columns(&args.inputs.sweeps, &ANALYZE_COLUMNS));
    for (pt, row) in points.iter().zip(rows) {
        table.push(sweep_cells(pt).into_iter().chain(row).collect());
    }
    table.write(&args.inputs.out, &header("analyze", &base, &args.inputs.sweeps, None))
}

pub const SIMULATE_COLUMNS: [&str; 8] =
    ["quantity", "estimate", "half_width", "n_samples", "replications", "analytic", "analytic_lower", "analytic_upper"];

fn quantity_name(q: Quantity) -> &'static str {
    match q {
        Quantity::Pt => "p_t",
        Quantity::OutagePrimary => "outage_primary",
        Quantity::OutageSecondary => "outage_secondary",
        Quantity::OutageWit => "outage_wit",
        Quantity::InterferenceCdf => "interference_cdf",
    }
}

/// Simulated estimate and analytic counterpart: (estimate, [analytic, lower, upper]).
pub fn simulate_point(
    p: &NetworkParams,
    q: Quantity,
    cfg: &SimConfig,
    mode: InterferenceMode,
) -> Result<(SimEstimate, [String; 3])> {
    let p = p.validate()?;
    let link = match q {
        Quantity::Pt => {
            let est = estimate_p_t(&p, cfg)?;
            return Ok((est, p_t_cells(&p_t_of(&p)?)));
        }
        Quantity::OutagePrimary => Link::Primary,
        Quantity::OutageSecondary => Link::Secondary,
        Quantity::OutageWit => Link::Wit,
        Quantity::InterferenceCdf => unreachable!("handled by interference_cdf"),
    };
    let est = estimate_outage(&p, cfg, link, mode)?;
    let active = approx_active_density(&p)?;
    let analytic = match link {
        Link::Primary => outage_primary(&p, active)?,
        Link::Secondary => outage_secondary(&p, active)?,
        Link::Wit => wit_outage(&p, active)?,
    };
    Ok((est, [num(analytic.probability), String::new(), String::new()]))
}

fn estimate_cells(e: &SimEstimate) -> [String; 4] {
    [num(e.mean), num(e.half_width), e.n_samples.to_string(), e.n_replications.to_string()]
}

/// Exact and approximate interference CDFs evaluated on a shared
/// log-spaced grid spanning both samples.
pub fn interference_cdf(p: &NetworkParams, cfg: &SimConfig, points: usize) -> Result<Table> {
    let exact = interference_samples(p, cfg, InterferenceMode::Exact)?;
    let approx = interference_samples(p, cfg, InterferenceMode::Approx)?;
    let (ce, ca) = (empirical_cdf(&exact), empirical_cdf(&approx));
    let positive = exact.iter().chain(&approx).copied().filter(|&x| x > 0.0);
    let lo = positive.clone().fold(f64::INFINITY, f64::min);
    let hi = positive.fold(0.0, f64::max);
    let mut table = Table::new(&["i_s", "cdf_exact", "cdf_approx"]);
    if !(lo.is_finite() && hi > lo) {
        table.push(vec![num(0.0), num(1.0), num(1.0)]);
        return Ok(table);
    }
    let at = |cdf: &[(f64, f64)], x: f64| {
        let k = cdf.partition_point(|&(v, _)| v <= x);
        if k == 0 { 0.0 } else { cdf[k - 1].1 }
    };
    for x in rfh_core::scenarios::logspace(lo, hi, points) {
        table.push(vec![num(x), num(at(&ce, x)), num(at(&ca, x))]);
    }
    Ok(table)
}

pub fn simulate(args: &SimulateArgs) -> Result<()> {
    let base = load_config(&args.inputs.config)?;
    let cfg = sim_config(&args.sim, PtActivity::Thinning);
    let mode = interference_mode(args.sim.mode);
    let mut comments = header("simulate", &base, &args.inputs.sweeps, Some(&cfg));
    comments.push(format!("quantity: {} mode: {:?}", quantity_name(args.quantity), mode));
    if args.quantity == Quantity::InterferenceCdf {
        if !args.inputs.sweeps.is_empty() {
            return Err(CliError::Usage("interference-cdf does not take sweeps".into()));
        }
        let table = interference_cdf(&base, &cfg, 201)?;
        return table.write(&args.inputs.out, &comments);
    }
    let points = expand(&base, &args.inputs.sweeps)?;
    let rows = over_points(&points, |p| simulate_point(p, args.quantity, &cfg, mode))?;
    let mut table = Table::new(&sweep_columns(&args.inputs.sweeps, &SIMULATE_COLUMNS));
    for (pt, (est, analytic)) in points.iter().zip(rows) {
        let mut row = sweep_cells(pt);
        row.push(quantity_name(args.quantity).to_string());
        row.extend(estimate_cells(&est));
        row.extend(analytic);
        table.push(row);
    }
    table.write(&args.inputs.out, &comments)
}

pub const OPTIMIZE_COLUMNS: [&str; 16] = [
    "status",
    "method",
    "p_s_star",
    "lambda_s_star",
    "lambda_s_lower",
    "lambda_s_upper",
    "active_density",
    "throughput",
    "mu_p",
    "mu_s",
    "tau_p",
    "tau_s",
    "binding_primary",
    "binding_secondary",
    "family",
    "detail",
];

pub fn optimize_point(p: &NetworkParams, method: Method) -> Result<(&'static str, rfh_core::Result<OptimizationResult>)> {
    let p = p.validate()?;
    Ok(match method {
        Method::Auto if p.is_wit() => ("wit", solve_p2(&p)),
        Method::Auto if p.noise == 0.0 => ("closed", solve_p1_closed_form(&p)),
        Method::Auto | Method::Numeric => ("numeric", solve_p1_numeric(&p)),
        Method::Closed => ("closed", solve_p1_closed_form(&p)),
    })
}

/// Row cells after the sweep columns. Infeasible and bracket failures are
/// reported as a status, not an error.
pub fn optimize_cells(method: &str, r: rfh_core::Result<OptimizationResult>) -> Result<Vec<String>> {
    let r = match r {
        Ok(r) => r,
        Err(e @ (Error::Infeasible | Error::NoBracket { .. })) => {
            let status = if matches!(e, Error::Infeasible) { "infeasible" } else { "no-bracket" };
            let mut row = vec![status.to_string(), method.to_string()];
            row.extend(std::iter::repeat_n(String::new(), OPTIMIZE_COLUMNS.len() - 3));
            row.push(e.to_string());
            return Ok(row);
        }
        Err(e) => return Err(e.into()),
    };
    let (lo, hi) = match r.lambda_s_star {
        LambdaS::Exact(_) => (String::new(), String::new()),
        LambdaS::Interval { lower, upper, .. } => (num(lower), num(upper)),
    };
    Ok(vec![
        "ok".into(),
        method.into(),
        num(r.p_s_star),
        num(r.lambda_s_star.value()),
        lo,
        hi,
        num(r.active_density),
        num(r.throughput),
        opt(r.mu_p),
        num(r.mu_s),
        opt(r.tau_p),
        num(r.tau_s),
        r.binding.primary.to_string(),
        r.binding.secondary.to_string(),
        r.family.to_string(),
        String::new(),
    ])
}

pub fn optimize(args: &OptimizeArgs) -> Result<()> {
    let base = load_config(&args.inputs.config)?;
    let points = expand(&base, &args.inputs.sweeps)?;
    let rows = over_points(&points, |p| {
        let (m, r) = optimize_point(p, args.method)?;
        optimize_cells(m, r)
    })?;
    let mut table = Table::new(&sweep_columns(&args.inputs.sweeps, &OPTIMIZE_COLUMNS));
    for (pt, row) in points.iter().zip(rows) {
        table.push(sweep_cells(pt).into_iter().chain(row).collect());
    }
    table.write(&args.inputs.out, &header("optimize", &base, &args.inputs.sweeps, None))
}
