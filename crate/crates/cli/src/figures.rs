//! Data behind the reference figures, one CSV per curve.

use std::path::Path;

use rfh_core::analytics::{outage_primary, outage_secondary, TxProbability};
use rfh_core::params::{ChargingGeometry, NetworkParams};
use rfh_core::scenarios::{self, DOUBLE_SLOT_POWER, FIG11_EPS_P, SINGLE_SLOT_POWER};
use rfh_core::sim::{
    approx_active_density, estimate_outage, estimate_p_t, map_indexed, Execution, InterferenceMode, Link,
    PtActivity, SimConfig,
};

use crate::args::{Method, SimFlags};
use crate::commands::{header, interference_cdf, interference_mode, optimize_cells, optimize_point, p_t_of, sim_config};
use crate::error::{CliError, Result};
use crate::table::{num, Table};

pub const FIGURE_IDS: [u32; 9] = [5, 6, 7, 8, 9, 10, 11, 12, 13];

type Curve = (String, Table);

fn par<T: Send>(xs: &[f64], f: impl Fn(f64) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    map_indexed(Execution::default(), xs.len(), |i| f(xs[i])).into_iter().collect()
}

/// p_t against `x`: exact values where the chain is solved exactly, and the
/// two bounds elsewhere.
fn analytic_p_t(x_name: &str, xs: &[f64], params: impl Fn(f64) -> NetworkParams + Sync + Send) -> Result<Table> {
    let rows = par(xs, |x| {
        let p = params(x);
        let m = ChargingGeometry::new(&p)?.m_slots;
        Ok((m, p_t_of(&p)?))
    })?;
    let mut t = Table::new(&[x_name, "m_slots", "p_t", "p_t_lower", "p_t_upper"]);
    for (&x, (m, p_t)) in xs.iter().zip(rows) {
        let (v, lo, hi) = match p_t {
            TxProbability::Exact(v) => (num(v), String::new(), String::new()),
            TxProbability::Bounds { lower, upper } => (String::new(), num(lower), num(upper)),
        };
        t.push(vec![num(x), m.to_string(), v, lo, hi]);
    }
    Ok(t)
}

fn simulated_p_t(
    x_name: &str,
    xs: &[f64],
    cfg: &SimConfig,
    params: impl Fn(f64) -> NetworkParams + Sync + Send,
) -> Result<Table> {
    let rows = par(xs, |x| Ok(estimate_p_t(&params(x), cfg)?))?;
    let mut t = Table::new(&[x_name, "p_t", "half_width", "n_samples"]);
    for (&x, e) in xs.iter().zip(rows) {
        t.push(vec![num(x), num(e.mean), num(e.half_width), e.n_samples.to_string()]);
    }
    Ok(t)
}

fn p_t_curves(
    fig: u32,
    x_name: &str,
    xs: &[f64],
    cfg: &SimConfig,
    params: impl Fn(f64, f64) -> NetworkParams + Sync + Send + Copy,
) -> Result<Vec<Curve>> {
    let mut out = Vec::new();
    for (tag, ps) in [("single_slot", SINGLE_SLOT_POWER), ("double_slot", DOUBLE_SLOT_POWER)] {
        out.push((format!("fig{fig}_{tag}_analytic.csv"), analytic_p_t(x_name, xs, |x| params(x, ps))?));
        out.push((format!("fig{fig}_{tag}_sim.csv"), simulated_p_t(x_name, xs, cfg, |x| params(x, ps))?));
    }
    Ok(out)
}

fn fig5(cfg: &SimConfig) -> Result<Vec<Curve>> {
    let xs = scenarios::fig5_grid();
    let all = analytic_p_t("p_s", &xs, scenarios::fig5)?;
    let mut exact = Table::new(&["p_s", "m_slots", "p_t"]);
    let mut upper = Table::new(&["p_s", "m_slots", "p_t_upper"]);
    let mut lower = Table::new(&["p_s", "m_slots", "p_t_lower"]);
    for row in &all.rows {
        if row[2].is_empty() {
            upper.push(vec![row[0].clone(), row[1].clone(), row[4].clone()]);
            lower.push(vec![row[0].clone(), row[1].clone(), row[3].clone()]);
        } else {
            exact.push(row[..3].to_vec());
        }
    }
    Ok(vec![
        ("fig5_exact.csv".into(), exact),
        ("fig5_upper.csv".into(), upper),
        ("fig5_lower.csv".into(), lower),
        ("fig5_sim.csv".into(), simulated_p_t("p_s", &xs, cfg, scenarios::fig5)?),
    ])
}

fn outage_curves(
    fig: u32,
    x_name: &str,
    xs: &[f64],
    cfg: &SimConfig,
    mode: InterferenceMode,
    params: impl Fn(f64) -> NetworkParams + Sync + Send + Copy,
) -> Result<Vec<Curve>> {
    let analytic = par(xs, |x| {
        let p = params(x);
        let a = approx_active_density(&p)?;
        Ok((outage_primary(&p, a)?, outage_secondary(&p, a)?))
    })?;
    let mut prim = Table::new(&[x_name, "outage"]);
    let mut sec = Table::new(&[x_name, "outage", "raw", "clamped"]);
    for (&x, (op, os)) in xs.iter().zip(&analytic) {
        prim.push(vec![num(x), num(op.probability)]);
        sec.push(vec![num(x), num(os.probability), num(os.raw), os.clamped.to_string()]);
    }
    let mut out = vec![
        (format!("fig{fig}_primary_analytic.csv"), prim),
        (format!("fig{fig}_secondary_analytic.csv"), sec),
    ];
    for (tag, link) in [("primary", Link::Primary), ("secondary", Link::Secondary)] {
        let est = par(xs, |x| Ok(estimate_outage(&params(x), cfg, link, mode)?))?;
        let mut t = Table::new(&[x_name, "outage", "half_width", "n_samples"]);
        for (&x, e) in xs.iter().zip(est) {
            t.push(vec![num(x), num(e.mean), num(e.half_width), e.n_samples.to_string()]);
        }
        out.push((format!("fig{fig}_{tag}_sim.csv"), t));
    }
    Ok(out)
}

fn optimization_curves(fig: u32) -> Result<Vec<Curve>> {
    let xs = scenarios::fig11_grid();
    let mut out = Vec::new();
    for eps in FIG11_EPS_P {
        let rows = par(&xs, |x| {
            let (m, r) = optimize_point(&scenarios::fig11(x, eps), Method::Auto)?;
            optimize_cells(m, r)
        })?;
        let mut t = Table::new(&["lambda_p", "status", "p_s_star", "lambda_s_star", "throughput"]);
        for (&x, r) in xs.iter().zip(rows) {
            // status, p_s_star, lambda_s_star, throughput
            t.push(vec![num(x), r[0].clone(), r[2].clone(), r[3].clone(), r[7].clone()]);
        }
        out.push((format!("fig{fig}_eps_p_{eps}.csv"), t));
    }
    Ok(out)
}

/// Computes the curves of figure `id`. Simulation flags apply to every
/// Monte Carlo curve; PT activity defaults to a fresh pattern per slot.
pub fn figure_curves(id: u32, flags: &SimFlags) -> Result<Vec<Curve>> {
    let cfg = sim_config(flags, PtActivity::Fresh);
    let mode = interference_mode(flags.mode);
    match id {
        5 => fig5(&cfg),
        6 => p_t_curves(6, "lambda_p", &scenarios::fig6_grid(), &cfg, scenarios::fig6),
        7 => p_t_curves(7, "r_g", &scenarios::fig7_grid(), &cfg, scenarios::fig7),
        8 => Ok(vec![("fig8_cdf.csv".into(), interference_cdf(&scenarios::fig8(), &cfg, 201)?)]),
        9 => outage_curves(9, "theta", &scenarios::fig9_grid(), &cfg, mode, scenarios::fig9),
        10 => outage_curves(10, "p_s", &scenarios::fig10_grid(), &cfg, mode, scenarios::fig10),
        11 | 12 => optimization_curves(id),
        13 => p_t_curves(13, "lambda_p", &scenarios::fig13_grid(), &cfg, scenarios::fig13),
        _ => Err(CliError::Usage(format!("unknown figure {id}; expected one of {FIGURE_IDS:?}"))),
    }
}

/// Reference parameters echoed in the header of a figure's files.
fn figure_params(id: u32) -> NetworkParams {
    match id {
        5 => scenarios::fig5(SINGLE_SLOT_POWER),
        6 => scenarios::fig6(0.01, SINGLE_SLOT_POWER),
        7 => scenarios::fig7(3.0, SINGLE_SLOT_POWER),
        8 => scenarios::fig8(),
        9 => scenarios::fig9(5.0),
        10 => scenarios::fig10(0.1),
        13 => scenarios::fig13(0.01, SINGLE_SLOT_POWER),
        _ => scenarios::fig11(0.01, 0.2),
    }
}

pub fn figure(id: u32, out_dir: &Path, flags: &SimFlags) -> Result<Vec<String>> {
    let curves = figure_curves(id, flags)?;
    let cfg = sim_config(flags, PtActivity::Fresh);
    let mut comments = header(&format!("figure {id}"), &figure_params(id), &[], Some(&cfg));
    comments.push(format!("interference mode: {:?}", interference_mode(flags.mode)));
    std::fs::create_dir_all(out_dir)?;
    let mut names = Vec::new();
    for (name, table) in curves {
        table.write(&out_dir.join(&name), &comments)?;
        names.push(name);
    }
    Ok(names)
}
