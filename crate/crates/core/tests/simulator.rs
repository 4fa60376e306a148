use boussinesq_lab::functional::compute_ap_torus;
use boussinesq_lab::sim::*;
use boussinesq_lab::spectral::{propagate_linear, Domain, FrequencySet, SpectralData};
use boussinesq_lab::witness::{build_witness, WitnessConfig, WitnessPair};
use boussinesq_lab::Error;
use num_complex::Complex64;

fn witness(p: u32, n: u64) -> WitnessPair {
    build_witness(&WitnessConfig::with_sigma(Domain::Torus, p, n, -1.0, 0.0).unwrap()).unwrap()
}

/// Real data on modes `±1, ±2, ±3` with the given size.
fn smooth_state(k: usize, amp: f64) -> SimState {
    let mut st = SimState::zeros(k);
    let coeffs = [(1, Complex64::new(1.0, 0.5)), (2, Complex64::new(-0.4, 0.3)), (3, Complex64::new(0.2, -0.1))];
    for (m, c) in coeffs {
        st.u[k + m] = c * amp;
        st.u[k - m] = c.conj() * amp;
        st.v[k + m] = Complex64::new(0.0, 0.7) * c * amp;
        st.v[k - m] = (Complex64::new(0.0, 0.7) * c).conj() * amp;
    }
    st
}

fn max_diff(a: &SimState, b: &SimState) -> f64 {
    a.u.iter().zip(&b.u).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn run(cfg: SimConfig, mut st: SimState) -> SimState {
    let mut sim = Simulator::new(cfg).unwrap();
    sim.run(&mut st, |_| {}).unwrap();
    st
}

#[test]
fn zero_data_stays_zero() {
    let st = run(SimConfig::new(3, 16, 1.0), SimState::zeros(16));
    assert!(st.u.iter().chain(&st.v).all(|c| c.norm() == 0.0));
    assert!((st.t - 1.0).abs() < 1e-12);
}

#[test]
fn tiny_data_follow_the_free_flow() {
    let w = witness(2, 16).scaled(1e-8);
    let k = 64;
    let st = run(SimConfig::new(2, k, 1.0), SimState::from_witness(&w, k).unwrap());
    let free = propagate_linear(&w.u0, &w.u1, 1.0).unwrap();
    let lin = SimState::from_spectral(&free, &w.u1, k).unwrap();
    assert!(max_diff(&st, &lin) < 1e-12, "{}", max_diff(&st, &lin));
}

#[test]
fn fourth_order_self_convergence() {
    let k = 32;
    let solve = |dt: f64| {
        let mut cfg = SimConfig::new(2, k, 1.0);
        cfg.dt = dt;
        run(cfg, smooth_state(k, 0.3))
    };
    let (a, b, c) = (solve(0.02), solve(0.01), solve(0.005));
    let order = (max_diff(&a, &b) / max_diff(&b, &c)).log2();
    assert!((3.7..=4.3).contains(&order), "observed order {order}");
}

#[test]
fn linear_flow_conserves_mode_energy() {
    let k = 32;
    let mut cfg = SimConfig::new(2, k, 1.0);
    cfg.nonlinear = false;
    let mut sim = Simulator::new(cfg).unwrap();
    let mut st = smooth_state(k, 1.0);
    let e0 = st.mode_energy();
    for _ in 0..1000 {
        sim.step(&mut st).unwrap();
    }
    for (a, b) in e0.iter().zip(st.mode_energy()) {
        assert!((a - b).abs() <= 1e-12 * a.max(f64::MIN_POSITIVE), "{a} {b}");
    }
}

#[test]
fn solution_stays_real() {
    let k = 48;
    let mut sim = Simulator::new(SimConfig::new(3, k, 0.5)).unwrap();
    let mut st = SimState::from_witness(&witness(3, 8).scaled(0.3), k).unwrap();
    let amp = st.u.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut worst = 0.0f64;
    sim.run(&mut st, |x| worst = worst.max(x.imaginary_bound())).unwrap();
    assert!(worst < 1e-12 * amp, "{worst}");
    assert_eq!(st.hermitian_defect(), 0.0);
}

#[test]
fn doubling_resolution_changes_little() {
    let solve = |k: usize| {
        let mut cfg = SimConfig::new(2, k, 0.5);
        cfg.dt = 1e-3;
        run(cfg, smooth_state(k, 0.05))
    };
    let (a, b) = (solve(24), solve(48));
    let scale = a.u.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let diff = (-24i64..=24).map(|m| (a.mode(m) - b.mode(m)).norm()).fold(0.0, f64::max);
    assert!(diff < 1e-8 * scale, "{}", diff / scale);
}

#[test]
fn padding_removes_aliasing() {
    let solve = |dealias: Dealias| {
        let mut cfg = SimConfig::new(3, 8, 0.5);
        cfg.dealias = dealias;
        cfg.dt = 1e-3;
        run(cfg, smooth_state(8, 0.5))
    };
    let reference = {
        let mut cfg = SimConfig::new(3, 64, 0.5);
        cfg.dt = 1e-3;
        run(cfg, smooth_state(64, 0.5))
    };
    let err = |st: &SimState| (-3i64..=3).map(|m| (st.mode(m) - reference.mode(m)).norm()).fold(0.0, f64::max);
    assert!(err(&solve(Dealias::Padded)) < err(&solve(Dealias::None)));
}

#[test]
fn time_reversal_returns_initial_data() {
    let k = 32;
    let back = |dt: f64| {
        let mut cfg = SimConfig::new(2, k, 1.0);
        cfg.dt = dt;
        let mut sim = Simulator::new(cfg).unwrap();
        let start = smooth_state(k, 0.3);
        let mut st = start.clone();
        sim.advance(&mut st, 1.0, |_| {}).unwrap();
        sim.advance(&mut st, -1.0, |_| {}).unwrap();
        max_diff(&st, &start)
    };
    let (e1, e2) = (back(0.02), back(0.01));
    assert!(e1 < 1e-5 && e2 < e1 / 8.0, "{e1} {e2}");
}

#[test]
fn blow_up_is_reported_with_last_finite_state() {
    let k = 16;
    let mut cfg = SimConfig::new(5, k, 10.0);
    cfg.dt = 0.05;
    let mut sim = Simulator::new(cfg).unwrap();
    let mut st = smooth_state(k, 5.0);
    let err = sim.run(&mut st, |_| {}).unwrap_err();
    assert!(matches!(err, Error::Diverged { .. }));
    assert!(st.u.iter().all(|c| c.re.is_finite() && c.im.is_finite()));
}

#[test]
fn loading_checks_resolution_and_reality() {
    let w = witness(2, 16);
    assert!(SimState::from_witness(&w, 17).is_ok());
    assert!(SimState::from_witness(&w, 16).is_err());
    let set = FrequencySet::modes(vec![2]).unwrap();
    let mut bad = SpectralData::from_fn(set, 1, 0.0, 1, |_| Complex64::new(1.0, 0.0)).unwrap();
    bad = bad.map_values(|xi, v| if xi > 0.0 { v * Complex64::new(0.0, 1.0) } else { v });
    assert!(SimState::from_spectral(&bad, &bad, 8).is_err());
    assert!(Simulator::new(SimConfig { dt: 0.0, ..SimConfig::new(2, 8, 1.0) }).is_err());
}

#[test]
fn probe_vanishes_without_nonlinearity() {
    let w = witness(2, 16);
    let mut cfg = ProbeConfig::for_witness(&w, 2, 1.0);
    cfg.nonlinear = false;
    let r = fd_derivative_probe(&w, &cfg).unwrap();
    assert_eq!(r.value.norm(), 0.0);
    assert!(r.converged);
}

#[test]
fn probe_matches_exact_functional_p2() {
    let w = witness(2, 16);
    let r = fd_derivative_probe(&w, &ProbeConfig::for_witness(&w, 2, 1.0)).unwrap();
    let exact = compute_ap_torus(&w, 2, 1.0).unwrap().values[0];
    assert!(r.converged);
    assert!((r.value - exact).norm() < 1e-2 * exact.norm());
}

#[test]
fn probe_differences_have_quadratic_error() {
    let w = witness(3, 16);
    let r = fd_derivative_probe(&w, &ProbeConfig::for_witness(&w, 3, 1.0)).unwrap();
    let d: Vec<Complex64> = r.raw.iter().map(|x| x.1).collect();
    // Halving ε shrinks the gap by at least 2², up to the 2⁴ of the next term.
    let ratio = (d[0] - d[1]).norm() / (d[1] - d[2]).norm();
    assert!(ratio >= 3.5, "{ratio} {:?}", r.raw);
    assert!(r.converged, "{}", r.disagreement);
}

#[test]
fn inflation_response_is_quadratic_in_data_size() {
    let big = inflation_experiment(&InflationConfig::new(-0.6, 1e-2, vec![16])).unwrap();
    let small = inflation_experiment(&InflationConfig::new(-0.6, 1e-3, vec![16])).unwrap();
    let ratio = big.rows[0].sup_window_norm / small.rows[0].sup_window_norm;
    assert!((ratio / 100.0 - 1.0).abs() < 0.01, "{ratio}");
}

#[test]
fn inflation_guards_resolution() {
    let mut cfg = InflationConfig::new(-0.6, 1e-2, vec![16]);
    cfg.k_factor = 3;
    assert!(inflation_experiment(&cfg).is_err());
}

#[test]
fn trajectory_rows_cover_the_run() {
    let k = 16;
    let mut sim = Simulator::new(SimConfig { dt: 0.01, ..SimConfig::new(2, k, 0.2) }).unwrap();
    let mut st = smooth_state(k, 0.1);
    let rows = record_trajectory(&mut sim, &mut st, &[0.0, -1.0], (1, 3), 5).unwrap();
    assert_eq!(rows.first().unwrap().t, 0.0);
    assert!((rows.last().unwrap().t - 0.2).abs() < 1e-12);
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r.window_norms[0] <= r.full_norms[0] + 1e-15));
}
