//! One function per acceptance criterion. Tolerances and parameter sets are
//! fixed here; nothing is tuned per run.

use std::fmt;
use std::time::Instant;

use boussinesq_lab::functional::{
    compute_ap_torus, growth_table, time_integral, GrowthConfig, GrowthTable,
    TimeIntegralParams,
};
use boussinesq_lab::resonance::{closed_form_profiles, represent_odd_line, solve_diophantine, verify_resonance_bounds};
use boussinesq_lab::sim::{
    fd_derivative_probe, inflation_experiment, InflationConfig, ProbeConfig, SimConfig, SimState, Simulator,
};
use boussinesq_lab::spectral::{propagate_linear, Domain};
use boussinesq_lab::witness::{build_witness, WitnessConfig};
use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::oracle;

/// Result of one criterion.
#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub details: Vec<String>,
    pub seconds: f64,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{verdict}] criterion {}: {} ({:.1} s)", self.id, self.title, self.seconds)?;
        for d in &self.details {
            write!(f, "\n    {d}")?;
        }
        Ok(())
    }
}

pub struct Criterion {
    pub id: u32,
    pub title: &'static str,
    /// Wall-clock limit in seconds, if the criterion has one.
    pub time_limit: Option<f64>,
    run: fn(&mut Vec<String>) -> bool,
}

pub const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, title: "exponent fit, p even", time_limit: Some(60.0), run: c1_even_exponents },
    Criterion { id: 2, title: "exponent fit, p odd", time_limit: Some(600.0), run: c2_odd_exponents },
    Criterion { id: 3, title: "threshold sign change", time_limit: None, run: c3_sign_change },
    Criterion { id: 4, title: "resonance bounds", time_limit: None, run: c4_resonance },
    Criterion { id: 5, title: "diophantine equivalence", time_limit: None, run: c5_diophantine },
    Criterion { id: 6, title: "analytic and numeric equivalence", time_limit: None, run: c6_equivalence },
    Criterion { id: 7, title: "simulator integrity", time_limit: None, run: c7_simulator },
    Criterion { id: 8, title: "norm inflation", time_limit: Some(300.0), run: c8_inflation },
];

/// Runs one criterion, folding its time limit into the verdict.
pub fn run(c: &Criterion) -> Outcome {
    let mut details = Vec::new();
    let start = Instant::now();
    let mut passed = (c.run)(&mut details);
    let seconds = start.elapsed().as_secs_f64();
    if let Some(limit) = c.time_limit {
        let within = seconds < limit;
        details.push(format!("runtime {seconds:.1} s, limit {limit} s"));
        passed &= within;
    }
    Outcome { id: c.id, title: c.title, passed, details, seconds }
}

pub fn run_all() -> Vec<Outcome> {
    CRITERIA.iter().map(run).collect()
}

const SLOPE_TOL: f64 = 0.15;
const LINE_ODD_SLOPE_TOL: f64 = 0.25;

fn growth(p: u32, domain: Domain, s: f64, t: f64, log: &mut Vec<String>) -> Option<GrowthTable> {
    let mut cfg = GrowthConfig::new(p, domain, s);
    cfg.t = t;
    match growth_table(&cfg) {
        Ok(g) => {
            for w in &g.warnings {
                log.push(format!("warning p={p} {domain:?} s={s} t={t}: {w}"));
            }
            Some(g)
        }
        Err(e) => {
            log.push(format!("p={p} {domain:?} s={s} t={t}: {e}"));
            None
        }
    }
}

fn c1_even_exponents(log: &mut Vec<String>) -> bool {
    let mut ok = true;
    for domain in [Domain::Torus, Domain::Line] {
        for s in [-1.0, -0.75] {
            let mut hits = 0;
            let mut slopes = Vec::new();
            for t in [0.7, 1.0, 1.3] {
                if let Some(g) = growth(2, domain, s, t, log) {
                    hits += usize::from((g.slope - g.predicted_slope).abs() <= SLOPE_TOL);
                    slopes.push(format!("{:.3}", g.slope));
                }
            }
            let pass = hits >= 2;
            ok &= pass;
            log.push(format!(
                "{domain:?} s={s}: slopes at t=0.7,1,1.3 = [{}], predicted {}, {hits}/3 within {SLOPE_TOL}",
                slopes.join(", "),
                -(2.0 * s + 1.0)
            ));
        }
    }
    ok
}

fn c2_odd_exponents(log: &mut Vec<String>) -> bool {
    let mut ok = true;
    for (domain, tol) in [(Domain::Torus, SLOPE_TOL), (Domain::Line, LINE_ODD_SLOPE_TOL)] {
        for s in [-1.0, -0.8] {
            let Some(g) = growth(3, domain, s, 1.0, log) else {
                ok = false;
                continue;
            };
            let pass = (g.slope - g.predicted_slope).abs() <= tol;
            ok &= pass;
            log.push(format!(
                "{domain:?} s={s}: slope {:.3}, predicted {}, tolerance {tol}",
                g.slope, g.predicted_slope
            ));
        }
    }
    ok
}

fn c3_sign_change(log: &mut Vec<String>) -> bool {
    let mut ok = true;
    for p in [2u32, 3] {
        for domain in [Domain::Torus, Domain::Line] {
            let (Some(above), Some(below)) = (growth(p, domain, 0.0, 1.0, log), growth(p, domain, -1.0, 1.0, log))
            else {
                ok = false;
                continue;
            };
            let pass = above.slope < 0.0 && below.slope > 0.0;
            ok &= pass;
            log.push(format!(
                "p={p} {domain:?}: slope {:.3} at s=0, {:.3} at s=-1",
                above.slope, below.slope
            ));
        }
    }
    ok
}

fn c4_resonance(log: &mut Vec<String>) -> bool {
    let n_list: Vec<u64> = (1..=9).map(|e| 1u64 << e).collect();
    let mut ok = true;
    for p in 2..=9u32 {
        for domain in [Domain::Torus, Domain::Line] {
            let report = match verify_resonance_bounds(p, domain, &n_list) {
                Ok(r) => r,
                Err(e) => {
                    ok = false;
                    log.push(format!("p={p} {domain:?}: {e}"));
                    continue;
                }
            };
            let Some(n0) = report.n0 else {
                ok = false;
                log.push(format!("p={p} {domain:?}: violations persist up to N=512"));
                continue;
            };
            let definite = report
                .per_n
                .iter()
                .filter(|r| r.n >= n0)
                .all(|r| r.beta_over_scale_min.is_some_and(|b| b > 0.0));
            let pass = n0 <= 128 && definite;
            ok &= pass;
            let last = report.per_n.last().unwrap();
            log.push(format!(
                "p={p} {domain:?}: N0={n0}, scaled |beta| at N=512 in [{:.4}, {:.4}]",
                last.beta_over_scale_min.unwrap_or(f64::NAN),
                last.beta_over_scale_max.unwrap_or(f64::NAN)
            ));
        }
    }
    let n = 512u64;
    let exact = oracle::beta_p3_torus(n) / (n * n) as f64;
    let reported = verify_resonance_bounds(3, Domain::Torus, &[n])
        .ok()
        .and_then(|r| r.per_n[0].beta_over_scale_min.zip(r.per_n[0].beta_over_scale_max));
    let pass = match reported {
        Some((lo, hi)) => {
            (exact - 2.0).abs() <= 0.1 && (lo - exact).abs() <= 1e-9 * exact && (hi - exact).abs() <= 1e-9 * exact
        }
        None => false,
    };
    ok &= pass;
    log.push(format!("p=3 Torus N=512: beta/N^2 oracle {exact:.6}, reported {reported:?}"));
    ok
}

fn c5_diophantine(log: &mut Vec<String>) -> bool {
    let mut ok = true;
    let mut mismatched = Vec::new();
    for p in (3..=25u32).step_by(2) {
        let mut solved = solve_diophantine(p).unwrap_or_default();
        solved.sort();
        let mut closed: Vec<[u32; 4]> = closed_form_profiles(p).iter().map(|c| c.counts()).collect();
        closed.sort();
        if solved.is_empty() || solved != closed || solved != oracle::class_count_solutions(p) {
            mismatched.push(p);
        }
    }
    ok &= mismatched.is_empty();
    log.push(format!("odd p in 3..=25: solver, closed forms and loop oracle disagree at {mismatched:?}"));

    let n = 64u64;
    let points = 1000;
    for p in [3u32, 5, 7] {
        let (lo, hi) = oracle::odd_window(p);
        let mut failures = 0;
        for i in 0..points {
            let xi = lo + (hi - lo) * (i as f64 + 0.5) / points as f64;
            let good = represent_odd_line(p, n, xi).is_some_and(|terms| {
                let sum: f64 = terms.iter().sum();
                terms.len() == p as usize
                    && (sum - xi).abs() <= 1e-12 * n as f64
                    && terms.iter().all(|&x| oracle::in_odd_line_set(p, n, x, 1e-12 * n as f64))
            });
            failures += usize::from(!good);
        }
        ok &= failures == 0;
        log.push(format!("p={p} N={n}: {failures} of {points} grid points of I_p without a representation"));
    }
    ok
}

fn c6_equivalence(log: &mut Vec<String>) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7157);
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let alpha = rng.random_range(0.0..20.0);
        let t = rng.random_range(0.05..5.0);
        // Every fourth triple sits within 1e-6 of resonance.
        let beta = if i % 4 == 0 {
            alpha * (1.0 + rng.random_range(-1e-6..1e-6))
        } else {
            rng.random_range(-20.0..20.0)
        };
        let got = time_integral(&TimeIntegralParams::new(alpha, beta, t));
        let want = oracle::time_integral(alpha, beta, t);
        worst = worst.max((got - want).norm() / want.norm());
    }
    let mut ok = worst < 1e-9;
    log.push(format!("time integral: max relative error {worst:.2e} over 1000 triples, limit 1e-9"));

    for p in [2u32, 3] {
        for n in [16u64, 32, 64] {
            let line = probe_line(p, n);
            ok &= line.0;
            log.push(line.1);
        }
    }
    ok
}

fn probe_line(p: u32, n: u64) -> (bool, String) {
    let result = (|| {
        let w = build_witness(&WitnessConfig::with_sigma(Domain::Torus, p, n, -1.0, 0.0)?)?;
        let exact = compute_ap_torus(&w, p, 1.0)?.values[0];
        let probe = fd_derivative_probe(&w, &ProbeConfig::for_witness(&w, p, 1.0))?;
        Ok::<_, boussinesq_lab::Error>((exact, probe))
    })();
    match result {
        Ok((exact, probe)) => {
            let rel = (probe.value - exact).norm() / exact.norm();
            (rel < 1e-2, format!("probe p={p} N={n}: relative error {rel:.2e}, limit 1e-2"))
        }
        Err(e) => (false, format!("probe p={p} N={n}: {e}")),
    }
}

/// Real data on modes `±1, ±2, ±3`.
fn smooth_state(k: usize, amp: f64) -> SimState {
    let mut st = SimState::zeros(k);
    let coeffs = [(1, Complex64::new(1.0, 0.5)), (2, Complex64::new(-0.4, 0.3)), (3, Complex64::new(0.2, -0.1))];
    for (m, c) in coeffs {
        let v = Complex64::new(0.0, 0.7) * c;
        st.u[k + m] = c * amp;
        st.u[k - m] = c.conj() * amp;
        st.v[k + m] = v * amp;
        st.v[k - m] = v.conj() * amp;
    }
    st
}

fn max_diff(a: &SimState, b: &SimState) -> f64 {
    a.u.iter().zip(&b.u).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn c7_simulator(log: &mut Vec<String>) -> bool {
    let outcome = (|| {
        let k = 64;
        let w = build_witness(&WitnessConfig::with_sigma(Domain::Torus, 2, 16, -1.0, 0.0)?)?.scaled(1e-8);
        let mut sim = Simulator::new(SimConfig::new(2, k, 1.0))?;
        let mut st = SimState::from_witness(&w, k)?;
        sim.run(&mut st, |_| {})?;
        let free = propagate_linear(&w.u0, &w.u1, 1.0)?;
        let linear_gap = max_diff(&st, &SimState::from_spectral(&free, &w.u1, k)?);

        let k = 32;
        let solve = |dt: f64| -> boussinesq_lab::Result<SimState> {
            let mut sim = Simulator::new(SimConfig { dt, ..SimConfig::new(2, k, 1.0) })?;
            let mut st = smooth_state(k, 0.3);
            sim.run(&mut st, |_| {})?;
            Ok(st)
        };
        let (a, b, c) = (solve(0.02)?, solve(0.01)?, solve(0.005)?);
        let order = (max_diff(&a, &b) / max_diff(&b, &c)).log2();

        let mut sim = Simulator::new(SimConfig { nonlinear: false, ..SimConfig::new(2, k, 1.0) })?;
        let mut st = smooth_state(k, 1.0);
        let e0 = st.mode_energy();
        for _ in 0..1000 {
            sim.step(&mut st)?;
        }
        let drift = e0
            .iter()
            .zip(st.mode_energy())
            .filter(|(a, _)| **a > 0.0)
            .map(|(a, b)| (a - b).abs() / a)
            .fold(0.0, f64::max);
        Ok::<_, boussinesq_lab::Error>((linear_gap, order, drift))
    })();
    match outcome {
        Ok((gap, order, drift)) => {
            log.push(format!("linear regime: max gap {gap:.2e}, limit 1e-12"));
            log.push(format!("self-convergence: observed order {order:.3}, range [3.7, 4.3]"));
            log.push(format!("linear energy: max relative drift {drift:.2e} over 1000 steps, limit 1e-12"));
            gap < 1e-12 && (3.7..=4.3).contains(&order) && drift <= 1e-12
        }
        Err(e) => {
            log.push(e.to_string());
            false
        }
    }
}

fn c8_inflation(log: &mut Vec<String>) -> bool {
    let n_list: Vec<u64> = (4..=7).map(|e| 1u64 << e).collect();
    let mut ok = true;
    for s in [-0.6, 0.0] {
        match inflation_experiment(&InflationConfig::new(s, 1e-2, n_list.clone())) {
            Ok(table) => {
                let sups: Vec<String> = table.rows.iter().map(|r| format!("{:.3e}", r.sup_window_norm)).collect();
                let pass = if s < 0.0 { table.strictly_increasing } else { table.max_over_first <= 2.0 };
                ok &= pass;
                log.push(format!(
                    "s={s}: windowed sup norms [{}], max over first {:.3}",
                    sups.join(", "),
                    table.max_over_first
                ));
            }
            Err(e) => {
                ok = false;
                log.push(format!("s={s}: {e}"));
            }
        }
    }
    ok
}
