use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use boussinesq_lab::functional::{growth_table, GrowthConfig, GrowthTable, LineMethod};
use boussinesq_lab::resonance::{closed_form_profiles, solve_diophantine, verify_resonance_bounds};
use boussinesq_lab::sim::{
    default_dt, inflation_experiment, record_trajectory, Dealias, InflationConfig, SimConfig, SimState, Simulator,
};
use boussinesq_lab::spectral::{Domain, SpectralData};
use boussinesq_lab::witness::{build_witness, OutputWindow, WitnessConfig};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::{List, Settings};
use crate::manifest::Recorder;
use crate::{DiophantineArgs, GrowthArgs, InflateArgs, ReproduceArgs, ResonanceArgs, SimulateArgs, WitnessArgs};

fn domain(settings: &mut Settings, flag: Option<String>) -> Result<Domain> {
    let name: String = settings.require("domain", flag)?;
    Ok(name.parse::<Domain>()?)
}

/// Writes to `out` with a manifest, or to stdout without one.
fn emit(rec: &mut Recorder, out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => rec.output(path, bytes),
        None => Ok(std::io::stdout().write_all(bytes)?),
    }
}

fn to_json(value: &impl Serialize) -> Result<Vec<u8>> {
    Ok((serde_json::to_string_pretty(value)? + "\n").into_bytes())
}

/// Witness file layout, also accepted by `simulate --init`.
#[derive(Serialize, Deserialize)]
struct WitnessFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    config: Option<WitnessConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    window: Option<serde_json::Value>,
    u0: SpectralData,
    u1: SpectralData,
}

pub fn witness(a: WitnessArgs, mut st: Settings) -> Result<()> {
    let domain = domain(&mut st, a.domain)?;
    let p = st.require("p", a.p)?;
    let n = st.require("N", a.n)?;
    let s: f64 = st.require("s", a.s)?;
    let sigma = st.or("sigma", a.sigma, s + 1.0)?;
    let nodes = st.pick("nodes-per-unit", a.nodes_per_unit)?;
    let out: Option<PathBuf> = st.pick("out", a.out)?;
    let config_text = st.finish()?;

    let mut cfg = WitnessConfig::with_sigma(domain, p, n, s, sigma)?;
    if let Some(k) = nodes {
        cfg.nodes_per_unit = k;
        cfg.validate()?;
    }
    let w = build_witness(&cfg)?;
    let window = match w.window {
        OutputWindow::Mode(k) => json!({ "mode": k }),
        OutputWindow::Interval(iv) => {
            let f = iv.to_f64();
            json!({ "interval": [f.lo, f.hi] })
        }
    };
    let mut rec = Recorder::new(config_text.as_deref(), "witness", cfg)?;
    let file = WitnessFile { config: Some(cfg), window: Some(window), u0: w.u0, u1: w.u1 };
    emit(&mut rec, out.as_deref(), &to_json(&file)?)?;
    rec.finish()
}

pub fn resonance(a: ResonanceArgs, mut st: Settings) -> Result<()> {
    let p = st.require("p", a.p)?;
    let domain = domain(&mut st, a.domain)?;
    let n_list = st.or("N-list", a.n_list, List((4..=9).map(|e| 1u64 << e).collect()))?.0;
    let out: Option<PathBuf> = st.pick("out", a.out)?;
    let config_text = st.finish()?;

    let mut rec = Recorder::new(config_text.as_deref(), "resonance", json!({ "p": p, "domain": domain, "N_list": n_list }))?;
    let report = verify_resonance_bounds(p, domain, &n_list)?;
    emit(&mut rec, out.as_deref(), &to_json(&report)?)?;
    match report.n0 {
        Some(n0) => eprintln!("p = {p}, {domain}: no violations from N0 = {n0} on"),
        None => eprintln!("p = {p}, {domain}: violations at the largest N"),
    }
    rec.finish()
}

pub fn diophantine(a: DiophantineArgs, mut st: Settings) -> Result<()> {
    let p = st.require("p", a.p)?;
    let out: Option<PathBuf> = st.pick("out", a.out)?;
    let config_text = st.finish()?;

    let mut rec = Recorder::new(config_text.as_deref(), "diophantine", json!({ "p": p }))?;
    let solutions = solve_diophantine(p)?;
    let closed = closed_form_profiles(p);
    let mut sorted = solutions.clone();
    sorted.sort();
    let mut expected: Vec<[u32; 4]> = closed.iter().map(|c| c.counts()).collect();
    expected.sort();
    let body = json!({
        "p": p,
        "solutions": solutions,
        "closed_form_profiles": closed,
        "agrees_with_closed_form": sorted == expected,
    });
    emit(&mut rec, out.as_deref(), &to_json(&body)?)?;
    rec.finish()
}

fn growth_csv(g: &GrowthTable) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["N", "data_norm", "ap_norm", "ratio", "slope_running"])?;
    for (r, slope) in g.records.iter().zip(&g.slope_running) {
        let slope = slope.map(|x| x.to_string()).unwrap_or_default();
        w.write_record([r.n.to_string(), r.data_norm.to_string(), r.ap_norm.to_string(), r.ratio.to_string(), slope])?;
    }
    w.into_inner().map_err(|e| anyhow!("{e}"))
}

/// `table.csv` becomes `table_t0.7.csv`.
fn per_time_path(path: &Path, t: f64) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_t{t}.{}", ext.to_string_lossy()),
        None => format!("{stem}_t{t}"),
    };
    path.with_file_name(name)
}

pub fn growth(a: GrowthArgs, mut st: Settings) -> Result<()> {
    let p = st.require("p", a.p)?;
    let domain = domain(&mut st, a.domain)?;
    let s: f64 = st.require("s", a.s)?;
    let sigma = st.or("sigma", a.sigma, s + 1.0)?;
    let times = st.or("t", a.t, List(vec![1.0]))?.0;
    let n_list: Option<List<u64>> = st.pick("N-list", a.n_list)?;
    let samples: Option<usize> = st.pick("samples", a.samples)?;
    let seed: Option<u64> = st.pick("seed", a.seed)?;
    let out: Option<PathBuf> = st.pick("out", a.out)?;
    let config_text = st.finish()?;

    let mut cfg = GrowthConfig::new(p, domain, s);
    cfg.sigma = sigma;
    if let Some(l) = n_list {
        cfg.n_list = l.0;
    }
    if samples.is_some() || seed.is_some() {
        let (default_samples, default_seed) = match cfg.quadrature.method {
            LineMethod::MonteCarlo { samples_per_pattern, seed } => (samples_per_pattern, seed),
            LineMethod::Tensor { .. } => (512, 0x5eed),
        };
        cfg.quadrature.method = LineMethod::MonteCarlo {
            samples_per_pattern: samples.unwrap_or(default_samples),
            seed: seed.unwrap_or(default_seed),
        };
    }
    if times.len() > 1 && out.is_none() {
        bail!("several values of --t need --out, which names one table per time");
    }
    let mut rec = Recorder::new(config_text.as_deref(), "growth", json!({ "config": cfg, "t": times }))?;
    for &t in &times {
        cfg.t = t;
        let g = growth_table(&cfg)?;
        for w in &g.warnings {
            eprintln!("warning: {w}");
        }
        eprintln!("t = {t}: fitted slope {:.4}, predicted {}", g.slope, g.predicted_slope);
        let path = out.as_deref().map(|o| if times.len() > 1 { per_time_path(o, t) } else { o.to_path_buf() });
        emit(&mut rec, path.as_deref(), &growth_csv(&g)?)?;
    }
    rec.finish()
}

fn parse_sign(s: &str) -> Result<boussinesq_lab::spectral::Sign> {
    use boussinesq_lab::spectral::Sign;
    match s {
        "+" | "plus" | "+1" | "1" => Ok(Sign::Plus),
        "-" | "minus" | "-1" => Ok(Sign::Minus),
        other => bail!("unknown sign `{other}` (expected `+` or `-`)"),
    }
}

pub fn simulate(a: SimulateArgs, mut st: Settings) -> Result<()> {
    let p = st.require("p", a.p)?;
    let sign = parse_sign(&st.or("sign", a.sign, "+".to_string())?)?;
    let k: usize = st.require("K", a.k)?;
    let dt = st.or("dt", a.dt, default_dt(k))?;
    let t_end = st.require("t-end", a.t_end)?;
    let init: PathBuf = st.require("init", a.init)?;
    let s_values = st.or("s-values", a.s_values, List(vec![-1.0, 0.0]))?.0;
    let window = st.or("window", a.window, List(vec![1, 4]))?.0;
    let every = st.or("every", a.every, 1usize)?;
    let dealias = match st.or("dealias", a.dealias, "padded".to_string())?.as_str() {
        "padded" => Dealias::Padded,
        "none" => Dealias::None,
        other => bail!("unknown dealias mode `{other}` (expected `padded` or `none`)"),
    };
    let linear = st.or("linear", a.linear.then_some(true), false)?;
    let out: Option<PathBuf> = st.pick("out", a.out)?;
    let config_text = st.finish()?;

    let [lo, hi] = window[..] else { bail!("--window takes two mode numbers, `lo,hi`") };
    let cfg = SimConfig { p, sign, k, dt, t_end, dealias, nonlinear: !linear };
    let text = std::fs::read(&init).with_context(|| format!("reading {}", init.display()))?;
    let data: WitnessFile = serde_json::from_slice(&text).with_context(|| format!("parsing {}", init.display()))?;
    if data.u0.domain() != Domain::Torus {
        bail!("the simulator is periodic; --init must hold torus data");
    }
    let mut rec = Recorder::new(config_text.as_deref(), 
        "simulate",
        json!({ "config": cfg, "s_values": s_values, "window": [lo, hi], "every": every }),
    )?;
    rec.input("init", &text);
    let mut sim = Simulator::new(cfg)?;
    let mut state = SimState::from_spectral(&data.u0, &data.u1, k)?;
    let rows = record_trajectory(&mut sim, &mut state, &s_values, (lo, hi), every)?;

    let mut w = csv::Writer::from_writer(Vec::new());
    let header = std::iter::once("t".to_string())
        .chain(s_values.iter().map(|s| format!("window_s={s}")))
        .chain(s_values.iter().map(|s| format!("full_s={s}")));
    w.write_record(header)?;
    for r in &rows {
        let fields = std::iter::once(r.t)
            .chain(r.window_norms.iter().copied())
            .chain(r.full_norms.iter().copied())
            .map(|x| x.to_string());
        w.write_record(fields)?;
    }
    let bytes = w.into_inner().map_err(|e| anyhow!("{e}"))?;
    emit(&mut rec, out.as_deref(), &bytes)?;
    rec.finish()
}

pub fn inflate(a: InflateArgs, mut st: Settings) -> Result<()> {
    let s = st.require("s", a.s)?;
    let delta = st.or("delta", a.delta, 1e-2)?;
    let n_list = st.or("N-list", a.n_list, List((4..=7).map(|e| 1u64 << e).collect()))?.0;
    let mut cfg = InflationConfig::new(s, delta, n_list);
    cfg.t_end = st.or("t-end", a.t_end, cfg.t_end)?;
    cfg.k_factor = st.or("k-factor", a.k_factor, cfg.k_factor)?;
    let out: Option<PathBuf> = st.pick("out", a.out)?;
    let config_text = st.finish()?;

    let mut rec = Recorder::new(config_text.as_deref(), "inflate", &cfg)?;
    let table = inflation_experiment(&cfg)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["N", "K", "amplitude", "sup_window_norm", "t_at_sup"])?;
    for r in &table.rows {
        w.write_record([
            r.n.to_string(),
            r.k.to_string(),
            r.amplitude.to_string(),
            r.sup_window_norm.to_string(),
            r.t_at_sup.to_string(),
        ])?;
    }
    emit(&mut rec, out.as_deref(), &w.into_inner().map_err(|e| anyhow!("{e}"))?)?;
    eprintln!(
        "strictly increasing: {}, max over first: {:.4}",
        table.strictly_increasing, table.max_over_first
    );
    rec.finish()
}

pub fn reproduce_all(a: ReproduceArgs, mut st: Settings) -> Result<()> {
    let only: Option<List<u32>> = st.pick("only", a.only)?;
    let out: Option<PathBuf> = st.pick("out", a.out)?;
    let config_text = st.finish()?;

    let ids: Vec<u32> = boussinesq_verify::CRITERIA.iter().map(|c| c.id).collect();
    let selected = only.map(|l| l.0).unwrap_or_else(|| ids.clone());
    if let Some(bad) = selected.iter().find(|i| !ids.contains(i)) {
        bail!("no criterion {bad}; valid ids are {ids:?}");
    }
    let mut rec = Recorder::new(config_text.as_deref(), "reproduce-all", json!({ "criteria": selected }))?;
    let mut outcomes = Vec::new();
    println!("{:>3}  {:<6}  {:>8}  title", "id", "result", "seconds");
    for c in boussinesq_verify::CRITERIA.iter().filter(|c| selected.contains(&c.id)) {
        let o = boussinesq_verify::run(c);
        println!("{:>3}  {:<6}  {:>8.1}  {}", o.id, if o.passed { "PASS" } else { "FAIL" }, o.seconds, o.title);
        for d in &o.details {
            println!("              {d}");
        }
        outcomes.push(o);
    }
    // Runtimes vary between runs; the summary file keeps only verdicts and details.
    let summary: Vec<_> = outcomes
        .iter()
        .map(|o| json!({ "id": o.id, "title": o.title, "passed": o.passed, "details": o.details
            .iter()
            .filter(|d| !d.starts_with("runtime"))
            .collect::<Vec<_>>() }))
        .collect();
    if let Some(path) = out.as_deref() {
        rec.output(path, &to_json(&summary)?)?;
    }
    rec.finish()?;
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    if !failed.is_empty() {
        bail!("criteria {failed:?} failed");
    }
    Ok(())
}
