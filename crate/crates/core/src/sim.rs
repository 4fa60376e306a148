//! Pseudospectral integration of
//!
//! ```text
//! u_tt - u_xx + u_xxxx ± (u^p)_xx = 0   on 𝕋 = ℝ/2πℤ,
//! ```
//!
//! as the first-order system `(û, û_t)` in the modes `|k| ≤ K`. Each step
//! applies the exact linear flow
//!
//! ```text
//! E(h) = [  cos λh      sin λh / λ ]
//!        [ -λ sin λh    cos λh     ]
//! ```
//!
//! and treats the forcing `±k² (u^p)^(k)` with classical RK4 in the rotating
//! frame (Lawson's integrating-factor scheme). Products are formed in physical
//! space on a grid of `M ≥ (p+1)K + 1` points, which is enough to keep every
//! `p`-fold product of retained modes from aliasing back into `|k| ≤ K`.
//!
//! States are Hermitian (`û(-k) = conj û(k)`); only `k ≥ 0` is transformed
//! and the forcing is mirrored, so a real solution stays exactly real.

use crate::error::{Error, Result};
use crate::spectral::{lambda, sin_over_lambda, Domain, Sign, SpectralData};
use crate::witness::{OutputWindow, WitnessPair};
use num_complex::Complex64;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// How the physical-space product grid is sized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dealias {
    /// `M ≥ (p+1)K + 1`: products are exact on the retained band.
    Padded,
    /// `M = 2K + 1`: no padding; products alias.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub p: u32,
    /// Sign in `f(u) = ±u^p`.
    pub sign: Sign,
    /// Highest retained mode.
    #[serde(rename = "K")]
    pub k: usize,
    pub dt: f64,
    pub t_end: f64,
    pub dealias: Dealias,
    /// When false the forcing is dropped and the scheme is the exact linear flow.
    pub nonlinear: bool,
}

impl SimConfig {
    /// `dt = 0.5/λ(K)`, padded products, `f = +u^p`.
    pub fn new(p: u32, k: usize, t_end: f64) -> Self {
        Self {
            p,
            sign: Sign::Plus,
            k,
            dt: default_dt(k),
            t_end,
            dealias: Dealias::Padded,
            nonlinear: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p < 2 {
            return Err(Error::InvalidConfig(format!("p = {} must be at least 2", self.p)));
        }
        if self.k == 0 {
            return Err(Error::InvalidConfig("K must be at least 1".into()));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidConfig(format!("dt = {} must be > 0", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::InvalidConfig(format!("t_end = {} must be ≥ 0", self.t_end)));
        }
        Ok(())
    }

    /// Size of the physical grid.
    pub fn grid_size(&self) -> usize {
        match self.dealias {
            Dealias::Padded => smooth_at_least((self.p as usize + 1) * self.k + 1),
            Dealias::None => 2 * self.k + 1,
        }
    }
}

/// `0.5/λ(K)`.
pub fn default_dt(k: usize) -> f64 {
    0.5 / lambda(k as f64)
}

/// Smallest `2^a 3^b 5^c ≥ n`.
fn smooth_at_least(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        let mut r = m;
        for f in [2, 3, 5] {
            while r % f == 0 {
                r /= f;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}

/// Modes `û(k)`, `û_t(k)` for `k = -K..=K`, stored at index `k + K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimState {
    #[serde(rename = "K")]
    pub k: usize,
    pub t: f64,
    pub u: Vec<Complex64>,
    pub v: Vec<Complex64>,
}

impl SimState {
    pub fn zeros(k: usize) -> Self {
        Self {
            k,
            t: 0.0,
            u: vec![Complex64::new(0.0, 0.0); 2 * k + 1],
            v: vec![Complex64::new(0.0, 0.0); 2 * k + 1],
        }
    }

    /// Loads torus data; fails if a mode lies beyond `K` or the data are not real.
    pub fn from_spectral(u0: &SpectralData, u1: &SpectralData, k: usize) -> Result<Self> {
        if u0.domain() != Domain::Torus || !u0.same_grid(u1) {
            return Err(Error::GridMismatch(
                "the simulator takes torus data with u0 and u1 on the same modes".into(),
            ));
        }
        let mut st = Self::zeros(k);
        for (a, b) in u0.nodes().iter().zip(u1.nodes()) {
            let m = a.xi as i64;
            if m.unsigned_abs() as usize > k {
                return Err(Error::InvalidConfig(format!(
                    "initial mode {m} exceeds the resolution K = {k}"
                )));
            }
            let i = (m + k as i64) as usize;
            st.u[i] = a.value;
            st.v[i] = b.value;
        }
        let scale = st.u.iter().chain(&st.v).map(|c| c.norm()).fold(0.0, f64::max);
        if st.hermitian_defect() > 1e-12 * scale {
            return Err(Error::InvalidConfig(
                "initial data are not real: û(-k) must equal conj û(k)".into(),
            ));
        }
        Ok(st)
    }

    pub fn from_witness(w: &WitnessPair, k: usize) -> Result<Self> {
        Self::from_spectral(&w.u0, &w.u1, k)
    }

    pub fn mode(&self, m: i64) -> Complex64 {
        if m.unsigned_abs() as usize > self.k {
            return Complex64::new(0.0, 0.0);
        }
        self.u[(m + self.k as i64) as usize]
    }

    pub fn modes(&self) -> impl Iterator<Item = i64> {
        -(self.k as i64)..=self.k as i64
    }

    /// `(Σ (1+k²)^s |û(k)|²)^{1/2}` over `lo ≤ |k| ≤ hi`.
    pub fn window_norm(&self, s: f64, lo: usize, hi: usize) -> f64 {
        let k = self.k;
        (lo..=hi.min(k))
            .map(|j| {
                let both = if j == 0 {
                    self.u[k].norm_sqr()
                } else {
                    self.u[k + j].norm_sqr() + self.u[k - j].norm_sqr()
                };
                (1.0 + (j * j) as f64).powf(s) * both
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn hs_norm(&self, s: f64) -> f64 {
        self.window_norm(s, 0, self.k)
    }

    /// `|v̂|² + λ²|û|²` per mode, the conserved quantity of the linear flow.
    pub fn mode_energy(&self) -> Vec<f64> {
        self.modes()
            .zip(self.u.iter().zip(&self.v))
            .map(|(m, (u, v))| v.norm_sqr() + lambda(m as f64).powi(2) * u.norm_sqr())
            .collect()
    }

    /// `max_k |û(k) - conj û(-k)|` over both components.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.u.len();
        (0..n)
            .map(|i| {
                let j = n - 1 - i;
                (self.u[i] - self.u[j].conj()).norm().max((self.v[i] - self.v[j].conj()).norm())
            })
            .fold(0.0, f64::max)
    }

    /// `|Im û(0)| + Σ_{k>0} |û(k) - conj û(-k)|`, an upper bound for `max_x |Im u(x)|`.
    pub fn imaginary_bound(&self) -> f64 {
        let k = self.k;
        self.u[k].im.abs()
            + (1..=k).map(|j| (self.u[k + j] - self.u[k - j].conj()).norm()).sum::<f64>()
    }

}

/// Magnitude below which components are set to zero. Geometrically decaying
/// high modes otherwise reach subnormal range, where FFTs slow down by an
/// order of magnitude.
const FLUSH: f64 = 1e-250;

fn flush(c: Complex64) -> Complex64 {
    Complex64::new(
        if c.re.abs() < FLUSH { 0.0 } else { c.re },
        if c.im.abs() < FLUSH { 0.0 } else { c.im },
    )
}

/// Coefficients of `E(h)` for `k = 0..=K`.
#[derive(Debug, Clone)]
struct Rotation {
    h: f64,
    cos: Vec<f64>,
    sol: Vec<f64>,
    msin: Vec<f64>,
}

impl Rotation {
    fn new(k: usize, h: f64) -> Self {
        let lams: Vec<f64> = (0..=k).map(|m| lambda(m as f64)).collect();
        Self {
            h,
            cos: lams.iter().map(|l| (l * h).cos()).collect(),
            sol: lams.iter().map(|&l| sin_over_lambda(h, l)).collect(),
            msin: lams.iter().map(|l| -l * (l * h).sin()).collect(),
        }
    }

    /// `(u, v) ← E(h)(u, v)`.
    fn apply(&self, u: &mut [Complex64], v: &mut [Complex64]) {
        for i in 0..u.len() {
            let (a, b) = (u[i], v[i]);
            u[i] = a * self.cos[i] + b * self.sol[i];
            v[i] = a * self.msin[i] + b * self.cos[i];
        }
    }

    /// `(u, v) += c · E(h)(0, f)`.
    fn add_forcing(&self, c: f64, f: &[Complex64], u: &mut [Complex64], v: &mut [Complex64]) {
        for i in 0..u.len() {
            u[i] += f[i] * (c * self.sol[i]);
            v[i] += f[i] * (c * self.cos[i]);
        }
    }
}

/// Reusable FFT plans, rotation tables and scratch buffers for one configuration.
pub struct Simulator {
    cfg: SimConfig,
    m: usize,
    forward: Arc<dyn RealToComplex<f64>>,
    inverse: Arc<dyn ComplexToReal<f64>>,
    phys: Vec<f64>,
    spec: Vec<Complex64>,
    scratch: Vec<Complex64>,
    full: Rotation,
    half: Rotation,
    work: Work,
}

/// Stage buffers over `k = 0..=K`.
#[derive(Debug, Clone, Default)]
struct Work {
    k1: Vec<Complex64>,
    k2: Vec<Complex64>,
    k3: Vec<Complex64>,
    k4: Vec<Complex64>,
    ua: Vec<Complex64>,
    va: Vec<Complex64>,
    ub: Vec<Complex64>,
    vb: Vec<Complex64>,
    uc: Vec<Complex64>,
    vc: Vec<Complex64>,
}

impl Work {
    fn new(k: usize) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); k + 1];
        Self {
            k1: z.clone(),
            k2: z.clone(),
            k3: z.clone(),
            k4: z.clone(),
            ua: z.clone(),
            va: z.clone(),
            ub: z.clone(),
            vb: z.clone(),
            uc: z.clone(),
            vc: z,
        }
    }
}

impl std::fmt::Debug for Simulator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Simulator").field("cfg", &self.cfg).field("M", &self.m).finish()
    }
}

impl Simulator {
    pub fn new(cfg: SimConfig) -> Result<Self> {
        cfg.validate()?;
        let m = cfg.grid_size();
        let mut planner = RealFftPlanner::new();
        let forward = planner.plan_fft_forward(m);
        let inverse = planner.plan_fft_inverse(m);
        let scratch = forward.make_scratch_vec().len().max(inverse.make_scratch_vec().len());
        let k = cfg.k;
        Ok(Self {
            cfg,
            m,
            phys: forward.make_input_vec(),
            spec: forward.make_output_vec(),
            scratch: vec![Complex64::new(0.0, 0.0); scratch],
            forward,
            inverse,
            full: Rotation::new(k, cfg.dt),
            half: Rotation::new(k, 0.5 * cfg.dt),
            work: Work::new(k),
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn grid_size(&self) -> usize {
        self.m
    }

    /// `±k² (u^p)^(k)` for `k = 0..=K` from `û(0..=K)`.
    fn forcing(&mut self, u: &[Complex64], out: &mut [Complex64]) {
        let k = self.cfg.k;
        if !self.cfg.nonlinear {
            out.fill(Complex64::new(0.0, 0.0));
            return;
        }
        self.spec.fill(Complex64::new(0.0, 0.0));
        self.spec[..=k].copy_from_slice(u);
        self.spec[0].im = 0.0;
        self.inverse
            .process_with_scratch(&mut self.spec, &mut self.phys, &mut self.scratch)
            .expect("transform lengths are fixed at construction");
        let p = self.cfg.p as i32;
        for x in self.phys.iter_mut() {
            *x = x.powi(p);
        }
        self.forward
            .process_with_scratch(&mut self.phys, &mut self.spec, &mut self.scratch)
            .expect("transform lengths are fixed at construction");
        let scale = self.cfg.sign.as_f64() / self.m as f64;
        for (j, (o, c)) in out.iter_mut().zip(&self.spec).enumerate() {
            *o = flush(c * (scale * (j * j) as f64));
        }
    }

    /// One step of size `h`; `h` may be negative. On overflow the state is
    /// left at its last finite value.
    pub fn step_by(&mut self, state: &mut SimState, h: f64) -> Result<()> {
        let k = self.cfg.k;
        if state.k != k {
            return Err(Error::GridMismatch(format!(
                "state has K = {}, simulator has K = {k}",
                state.k
            )));
        }
        if self.full.h != h {
            self.full = Rotation::new(k, h);
            self.half = Rotation::new(k, 0.5 * h);
        }
        let mut w = std::mem::take(&mut self.work);
        let (un, vn) = (&state.u[k..], &state.v[k..]);

        self.forcing(un, &mut w.k1);

        w.ua.copy_from_slice(un);
        for ((v, a), f) in w.va.iter_mut().zip(vn).zip(&w.k1) {
            *v = a + f * (0.5 * h);
        }
        self.half.apply(&mut w.ua, &mut w.va);
        self.forcing(&w.ua, &mut w.k2);

        // y_b = E(h/2) y_n + (h/2)(0, k2); the forcing only reads û.
        w.ub.copy_from_slice(un);
        w.vb.copy_from_slice(vn);
        self.half.apply(&mut w.ub, &mut w.vb);
        self.forcing(&w.ub, &mut w.k3);

        w.uc.copy_from_slice(un);
        w.vc.copy_from_slice(vn);
        self.full.apply(&mut w.uc, &mut w.vc);
        w.ua.copy_from_slice(&w.uc);
        w.va.copy_from_slice(&w.vc);
        self.half.add_forcing(h, &w.k3, &mut w.ua, &mut w.va);
        self.forcing(&w.ua, &mut w.k4);

        self.full.add_forcing(h / 6.0, &w.k1, &mut w.uc, &mut w.vc);
        self.half.add_forcing(h / 3.0, &w.k2, &mut w.uc, &mut w.vc);
        self.half.add_forcing(h / 3.0, &w.k3, &mut w.uc, &mut w.vc);
        for (v, f) in w.vc.iter_mut().zip(&w.k4) {
            *v += f * (h / 6.0);
        }

        let ok = w.uc.iter().chain(&w.vc).all(|c| c.re.is_finite() && c.im.is_finite())
            && w.uc.iter().all(|c| c.norm() <= 1e150);
        if ok {
            for j in 0..=k {
                let (u, v) = (flush(w.uc[j]), flush(w.vc[j]));
                state.u[k + j] = u;
                state.v[k + j] = v;
                state.u[k - j] = u.conj();
                state.v[k - j] = v.conj();
            }
            state.t += h;
        }
        self.work = w;
        if ok {
            Ok(())
        } else {
            Err(Error::Diverged { t: state.t })
        }
    }

    pub fn step(&mut self, state: &mut SimState) -> Result<()> {
        let h = self.cfg.dt;
        self.step_by(state, h)
    }

    /// Advances by `duration` (negative runs backwards) in equal steps no
    /// longer than `|dt|`, calling `observe` after every step.
    pub fn advance(
        &mut self,
        state: &mut SimState,
        duration: f64,
        mut observe: impl FnMut(&SimState),
    ) -> Result<()> {
        if !duration.is_finite() {
            return Err(Error::InvalidConfig(format!("duration {duration} must be finite")));
        }
        if duration == 0.0 {
            return Ok(());
        }
        let steps = (duration.abs() / self.cfg.dt).ceil().max(1.0) as usize;
        let h = duration / steps as f64;
        let t0 = state.t;
        for i in 1..=steps {
            self.step_by(state, h)?;
            state.t = t0 + i as f64 * h;
            observe(state);
        }
        Ok(())
    }

    /// Integrates to `cfg.t_end`.
    pub fn run(&mut self, state: &mut SimState, observe: impl FnMut(&SimState)) -> Result<()> {
        let d = self.cfg.t_end - state.t;
        self.advance(state, d, observe)
    }
}

/// One row of a recorded trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub window_norms: Vec<f64>,
    pub full_norms: Vec<f64>,
}

/// Norms recorded every `every` steps: windowed `H^s` on `lo ≤ |k| ≤ hi` and full `H^s`, for each `s`.
pub fn record_trajectory(
    sim: &mut Simulator,
    state: &mut SimState,
    s_values: &[f64],
    window: (usize, usize),
    every: usize,
) -> Result<Vec<TrajectoryRow>> {
    let row = |st: &SimState| TrajectoryRow {
        t: st.t,
        window_norms: s_values.iter().map(|&s| st.window_norm(s, window.0, window.1)).collect(),
        full_norms: s_values.iter().map(|&s| st.hs_norm(s)).collect(),
    };
    let mut rows = vec![row(state)];
    let mut count = 0usize;
    let every = every.max(1);
    sim.run(state, |st| {
        count += 1;
        if count % every == 0 {
            rows.push(row(st));
        }
    })?;
    if rows.last().map(|r| r.t) != Some(state.t) {
        rows.push(row(state));
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub p: u32,
    pub sign: Sign,
    pub t: f64,
    /// Amplitude steps, largest first; consecutive entries should halve.
    pub eps: Vec<f64>,
    #[serde(rename = "K")]
    pub k: usize,
    pub dt: f64,
    pub nonlinear: bool,
}

impl ProbeConfig {
    /// `K = 2·k_max`, `dt = 0.5/λ(k_max)` with `k_max` the top data mode,
    /// and `ε ∈ {1/16, 1/32, 1/64}` relative to unit data.
    pub fn for_witness(w: &WitnessPair, p: u32, t: f64) -> Self {
        let kmax = w.u0.nodes().iter().map(|n| n.xi.abs()).fold(1.0, f64::max);
        let amp = w.u0.nodes().iter().map(|n| n.value.norm()).fold(0.0, f64::max).max(1e-300);
        Self {
            p,
            sign: Sign::Plus,
            t,
            eps: [0.0625, 0.03125, 0.015625].iter().map(|e| e / amp).collect(),
            k: 2 * kmax as usize,
            dt: 0.5 / lambda(kmax),
            nonlinear: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub mode: i64,
    pub value: Complex64,
    /// `(ε, central difference at ε)`.
    pub raw: Vec<(f64, Complex64)>,
    /// Richardson combinations of consecutive `ε`.
    pub extrapolated: Vec<Complex64>,
    /// Relative gap between the last two estimates.
    pub disagreement: f64,
    pub converged: bool,
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Relative gap above which the probe reports non-convergence.
pub const PROBE_TOLERANCE: f64 = 0.05;

/// `p`-th derivative of `x ↦ û(t, ξ)` for data `x·(u₀, u₁)` at `x = 0`,
/// by central differences in `x` followed by Richardson extrapolation.
pub fn fd_derivative_probe(w: &WitnessPair, cfg: &ProbeConfig) -> Result<ProbeResult> {
    if w.u0.domain() != Domain::Torus {
        return Err(Error::InvalidConfig("the derivative probe runs on torus data".into()));
    }
    let OutputWindow::Mode(mode) = w.window else {
        return Err(Error::InvalidConfig("torus witness needs a single output mode".into()));
    };
    if cfg.eps.is_empty() || cfg.eps.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(Error::InvalidConfig("probe steps must be positive".into()));
    }
    let sim_cfg = SimConfig {
        p: cfg.p,
        sign: cfg.sign,
        k: cfg.k,
        dt: cfg.dt,
        t_end: cfg.t,
        dealias: Dealias::Padded,
        nonlinear: cfg.nonlinear,
    };
    let mut sim = Simulator::new(sim_cfg)?;
    let base = SimState::from_witness(w, cfg.k)?;
    let p = cfg.p;
    let mut raw = Vec::new();
    for &eps in &cfg.eps {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..=p {
            let offset = 0.5 * p as f64 - j as f64;
            if offset == 0.0 {
                continue;
            }
            let x = offset * eps;
            let mut st = base.clone();
            for c in st.u.iter_mut().chain(st.v.iter_mut()) {
                *c *= x;
            }
            sim.run(&mut st, |_| {})?;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            acc += st.mode(mode) * (sign * binomial(p, j));
        }
        raw.push((eps, acc / eps.powi(p as i32)));
    }
    let extrapolated: Vec<Complex64> = raw
        .windows(2)
        .map(|w| {
            let r = (w[0].0 / w[1].0).powi(2);
            (w[1].1 * r - w[0].1) / (r - 1.0)
        })
        .collect();
    let estimates = &extrapolated;
    let (value, disagreement) = match estimates.len() {
        0 => (raw[0].1, f64::NAN),
        1 => {
            let v = estimates[0];
            let d = (raw[raw.len() - 1].1 - v).norm() / v.norm().max(f64::MIN_POSITIVE);
            (v, d)
        }
        n => {
            let v = estimates[n - 1];
            (v, (v - estimates[n - 2]).norm() / v.norm().max(f64::MIN_POSITIVE))
        }
    };
    let converged = disagreement.is_finite() && disagreement <= PROBE_TOLERANCE
        || value.norm() == 0.0 && raw.iter().all(|r| r.1.norm() == 0.0);
    Ok(ProbeResult { mode, value, raw, extrapolated, disagreement, converged })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InflationConfig {
    pub p: u32,
    pub s: f64,
    /// `‖u₀‖_{H^s} + ‖u₁‖_{H^{s-2}}` of the scaled data.
    pub delta: f64,
    #[serde(rename = "N_list")]
    pub n_list: Vec<u64>,
    pub t_end: f64,
    /// Low-frequency window `lo ≤ |k| ≤ hi` on which the output is measured.
    pub window: (usize, usize),
    /// `K = k_factor·N + k_factor`; must exceed `4N`.
    pub k_factor: usize,
}

impl InflationConfig {
    pub fn new(s: f64, delta: f64, n_list: Vec<u64>) -> Self {
        Self { p: 2, s, delta, n_list, t_end: 1.0, window: (1, 4), k_factor: 4 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InflationRow {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "K")]
    pub k: usize,
    pub amplitude: f64,
    pub sup_window_norm: f64,
    pub t_at_sup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InflationTable {
    pub config: InflationConfig,
    pub rows: Vec<InflationRow>,
    pub strictly_increasing: bool,
    /// Largest row value over the first row's value.
    pub max_over_first: f64,
}

/// Witness data for `p = 2` on the torus, normalized to size `δ` in
/// `H^s × H^{s-2}`, integrated to `t_end`; records the supremum in time of
/// the windowed `H^s` norm of the solution.
pub fn inflation_experiment(cfg: &InflationConfig) -> Result<InflationTable> {
    use crate::witness::{build_witness, WitnessConfig};
    if cfg.n_list.is_empty() {
        return Err(Error::InvalidConfig("N list is empty".into()));
    }
    if !(cfg.delta > 0.0 && cfg.delta.is_finite()) {
        return Err(Error::InvalidConfig(format!("δ = {} must be > 0", cfg.delta)));
    }
    if cfg.window.0 > cfg.window.1 {
        return Err(Error::InvalidConfig("window bounds are reversed".into()));
    }
    let mut rows = Vec::new();
    for &n in &cfg.n_list {
        let k = cfg.k_factor * (n as usize + 1);
        if k <= 4 * n as usize {
            return Err(Error::InvalidConfig(format!(
                "resolution K = {k} must exceed 4N = {}; raise k_factor",
                4 * n
            )));
        }
        let w = build_witness(&WitnessConfig::new(Domain::Torus, cfg.p, n, cfg.s)?)?;
        let w = w.scaled(cfg.delta / w.data_norm(cfg.s)?);
        let amplitude = w.u0.nodes()[0].value.norm();
        let mut sim = Simulator::new(SimConfig::new(cfg.p, k, cfg.t_end))?;
        let mut st = SimState::from_witness(&w, k)?;
        let (mut best, mut t_best) = (st.window_norm(cfg.s, cfg.window.0, cfg.window.1), 0.0);
        sim.run(&mut st, |x| {
            let v = x.window_norm(cfg.s, cfg.window.0, cfg.window.1);
            if v > best {
                best = v;
                t_best = x.t;
            }
        })?;
        rows.push(InflationRow { n, k, amplitude, sup_window_norm: best, t_at_sup: t_best });
    }
    let strictly_increasing = rows.windows(2).all(|r| r[1].sup_window_norm > r[0].sup_window_norm);
    let first = rows[0].sup_window_norm;
    let max = rows.iter().map(|r| r.sup_window_norm).fold(0.0, f64::max);
    Ok(InflationTable {
        config: cfg.clone(),
        rows,
        strictly_increasing,
        max_over_first: if first > 0.0 { max / first } else { f64::INFINITY },
    })
}
