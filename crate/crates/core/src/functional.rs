//! The diagonal `p`-th derivative of the flow map at zero,
//!
//! ```text
//! Â_p(t, ξ) = c_p ξ²/λ(ξ) ∫₀ᵗ sin((t-τ)λ(ξ)) (L(u₀,u₁)(τ))^p^(ξ) dτ,
//! ```
//!
//! with `c_p = p!` (the nonlinearity is `f(u) = +u^p`; flip the sign for `-u^p`).
//! The free solution of every witness is a sum of exponentials `c e^{iωτ}`,
//! so the `τ`-integral collapses to [`time_integral`] and the convolution
//! power is a finite sum (torus) or a `(p-1)`-dimensional integral (line).

use crate::error::{Error, Result};
use crate::interval::{Interval, RatInterval, Rational};
use crate::resonance::{multinomial, multisets_reaching};
use crate::spectral::{lambda, Domain, Sign, LAMBDA_SERIES_THRESHOLD};
use crate::witness::{build_witness, OutputWindow, WitnessConfig, WitnessPair};
use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Relative gap `|β² - α²| / max(1, α²)` below which a term counts as resonant.
pub const RESONANCE_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeIntegralParams {
    pub alpha: f64,
    pub beta: f64,
    pub t: f64,
}

impl TimeIntegralParams {
    pub fn new(alpha: f64, beta: f64, t: f64) -> Self {
        Self { alpha, beta, t }
    }

    pub fn is_near_resonant(&self) -> bool {
        (self.beta * self.beta - self.alpha * self.alpha).abs()
            < RESONANCE_THRESHOLD * self.alpha.powi(2).max(1.0)
    }
}

fn sinc(y: f64) -> f64 {
    if y.abs() < 1e-4 {
        let y2 = y * y;
        1.0 - y2 / 6.0 + y2 * y2 / 120.0
    } else {
        y.sin() / y
    }
}

/// `∫₀ᵗ sin(α(t-τ)) e^{iβτ} dτ`.
///
/// Evaluated as
/// `(t/2i) [e^{i(β+α)t/2} sinc((β-α)t/2) - e^{i(β-α)t/2} sinc((β+α)t/2)]`,
/// which equals the rational closed form (see [`time_integral_closed_form`])
/// whenever `β ≠ ±α` and passes continuously through the resonant case.
///
/// ```
/// use boussinesq_lab::functional::{time_integral, TimeIntegralParams};
/// let v = time_integral(&TimeIntegralParams::new(1.0, 0.0, std::f64::consts::PI));
/// assert!((v.re - 2.0).abs() < 1e-14 && v.im.abs() < 1e-14);
/// ```
pub fn time_integral(q: &TimeIntegralParams) -> Complex64 {
    let TimeIntegralParams { alpha, beta, t } = *q;
    let first = Complex64::from_polar(sinc(0.5 * (beta - alpha) * t), 0.5 * (beta + alpha) * t);
    let second = Complex64::from_polar(sinc(0.5 * (beta + alpha) * t), 0.5 * (beta - alpha) * t);
    (first - second) * Complex64::new(0.0, -0.5 * t)
}

/// The rational form `-α(cos βt - cos αt)/(β²-α²) + i[-α sin βt + β sin αt]/(β²-α²)`.
/// Loses accuracy as `β → ±α`; kept for cross-checking.
pub fn time_integral_closed_form(q: &TimeIntegralParams) -> Complex64 {
    let TimeIntegralParams { alpha, beta, t } = *q;
    let d = beta * beta - alpha * alpha;
    Complex64::new(
        -alpha * ((beta * t).cos() - (alpha * t).cos()) / d,
        (-alpha * (beta * t).sin() + beta * (alpha * t).sin()) / d,
    )
}

/// `p!`, the constant in front of the `p`-th derivative of `u ↦ u^p`.
pub fn derivative_constant(p: u32) -> f64 {
    (1..=p).map(f64::from).product()
}

/// `ξ²/λ(ξ) = |ξ|/√(1+ξ²)`.
fn xi_prefactor(xi: f64) -> f64 {
    xi.abs() / (1.0 + xi * xi).sqrt()
}

/// Evaluated derivative functional on the output window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApResult {
    pub t: f64,
    pub xi: Vec<f64>,
    pub weights: Vec<f64>,
    pub values: Vec<Complex64>,
    /// `L²` mass of the values on the window.
    pub hs_lower: f64,
    /// 95% confidence half-widths per node (Monte Carlo only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_width: Option<Vec<f64>>,
    /// Relative change under doubled node counts, when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    /// Number of exactly or nearly resonant terms encountered.
    pub resonant_terms: usize,
}

impl ApResult {
    fn new(t: f64, xi: Vec<f64>, weights: Vec<f64>, values: Vec<Complex64>) -> Self {
        let mut r = Self {
            t,
            xi,
            weights,
            values,
            hs_lower: 0.0,
            half_width: None,
            convergence: None,
            warnings: Vec::new(),
            resonant_terms: 0,
        };
        r.hs_lower = window_mass(&r, 0.0);
        r
    }
}

fn window_mass(a: &ApResult, s: f64) -> f64 {
    a.xi.iter()
        .zip(&a.weights)
        .zip(&a.values)
        .map(|((&xi, &w), v)| w * (1.0 + xi * xi).powf(s) * v.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `(Σ w (1+ξ²)^s |Â_p|²)^{1/2}` over the window: a lower bound for `‖A_p‖_{H^s}`.
pub fn hs_window_mass(a: &ApResult, s: f64) -> Result<f64> {
    if a.xi.is_empty() {
        return Err(Error::EmptyWindow);
    }
    Ok(window_mass(a, s))
}

/// One exponential in the free solution: mode `k`, `c e^{iωτ}`.
#[derive(Debug, Clone, Copy)]
struct Atom {
    k: i64,
    c: Complex64,
    omega: f64,
}

/// Splits `cos(λτ)û₀ + sin(λτ)/λ û₁` into `c₊ e^{iλτ} + c₋ e^{-iλτ}` per mode.
fn torus_atoms(w: &WitnessPair) -> Result<Vec<Atom>> {
    let mut atoms = Vec::new();
    for (a, b) in w.u0.nodes().iter().zip(w.u1.nodes()) {
        let k = a.xi as i64;
        let lam = lambda(a.xi);
        if lam < LAMBDA_SERIES_THRESHOLD {
            if b.value.norm() > 0.0 {
                return Err(Error::InvalidConfig(
                    "a nonzero velocity at k = 0 grows linearly in time; not supported".into(),
                ));
            }
            atoms.push(Atom { k, c: a.value, omega: 0.0 });
            continue;
        }
        let rot = b.value / Complex64::new(0.0, lam);
        atoms.push(Atom { k, c: 0.5 * (a.value + rot), omega: lam });
        atoms.push(Atom { k, c: 0.5 * (a.value - rot), omega: -lam });
    }
    let cmax = atoms.iter().map(|a| a.c.norm()).fold(0.0, f64::max);
    atoms.retain(|a| a.c.norm() > 1e-13 * cmax);
    Ok(atoms)
}

/// Exact evaluation on the torus at the single output mode.
///
/// Multisets of exponentials whose modes add up to the output mode are
/// summed with their multinomial multiplicities.
pub fn compute_ap_torus(w: &WitnessPair, p: u32, t: f64) -> Result<ApResult> {
    if w.u0.domain() != Domain::Torus {
        return Err(Error::InvalidConfig("compute_ap_torus needs torus data".into()));
    }
    let OutputWindow::Mode(xi) = w.window else {
        return Err(Error::InvalidConfig("torus witness needs a single output mode".into()));
    };
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidConfig(format!("time {t} must be ≥ 0")));
    }
    let atoms = torus_atoms(w)?;
    let ranges: Vec<RatInterval> = atoms
        .iter()
        .map(|a| RatInterval::point(Rational::from_integer(a.k)))
        .collect();
    let target = RatInterval::point(Rational::from_integer(xi));
    let xif = xi as f64;
    let alpha = lambda(xif);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut resonant = 0;
    for counts in multisets_reaching(&ranges, p, &target)? {
        let mut coef = Complex64::new(multinomial(&counts) as f64, 0.0);
        let mut beta = 0.0;
        for (a, &c) in atoms.iter().zip(&counts) {
            if c > 0 {
                coef *= a.c.powu(c);
                beta += c as f64 * a.omega;
            }
        }
        let q = TimeIntegralParams::new(alpha, beta, t);
        resonant += usize::from(q.is_near_resonant());
        sum += coef * time_integral(&q);
    }
    let value = sum * derivative_constant(p) * xi_prefactor(xif);
    let mut r = ApResult::new(t, vec![xif], vec![1.0], vec![value]);
    r.resonant_terms = resonant;
    Ok(r)
}

/// How the `(p-1)`-dimensional convolution integral on the line is computed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LineMethod {
    /// Composite midpoint on the outer `p-2` variables, Gauss–Legendre on
    /// the innermost one whose limits are solved exactly from the constraint.
    Tensor {
        outer_nodes_per_unit: usize,
        inner_nodes: usize,
    },
    /// Uniform sampling of the outer variables, stratified by sign/class pattern.
    MonteCarlo { samples_per_pattern: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineQuadrature {
    pub method: LineMethod,
    /// Midpoint density on the output window.
    pub window_nodes_per_unit: usize,
    /// Re-run with doubled node counts and report the relative change.
    pub check_convergence: bool,
    /// Upper limit on integrand evaluations.
    pub budget: u64,
}

impl LineQuadrature {
    /// 64 nodes per dimension for `p ≤ 3`, 16 for `p ∈ {4, 5}`, Monte Carlo beyond.
    pub fn for_degree(p: u32) -> Self {
        let method = match p {
            0..=3 => LineMethod::Tensor { outer_nodes_per_unit: 64, inner_nodes: 16 },
            4 | 5 => LineMethod::Tensor { outer_nodes_per_unit: 16, inner_nodes: 8 },
            _ => LineMethod::MonteCarlo { samples_per_pattern: 512, seed: 0x5eed },
        };
        Self {
            method,
            window_nodes_per_unit: 64,
            check_convergence: false,
            budget: 20_000_000_000,
        }
    }

    fn doubled(&self) -> Self {
        let method = match self.method {
            LineMethod::Tensor { outer_nodes_per_unit, inner_nodes } => LineMethod::Tensor {
                outer_nodes_per_unit: 2 * outer_nodes_per_unit,
                inner_nodes: 2 * inner_nodes,
            },
            LineMethod::MonteCarlo { samples_per_pattern, seed } => LineMethod::MonteCarlo {
                samples_per_pattern: 2 * samples_per_pattern,
                seed: seed.wrapping_add(1),
            },
        };
        Self { method, check_convergence: false, ..*self }
    }
}

/// Signed component of `±A` on the line.
#[derive(Debug, Clone, Copy)]
struct Comp {
    sign: Sign,
    iv: Interval,
}

struct LineProblem<'a> {
    comps: Vec<Comp>,
    p: usize,
    t: f64,
    gauss: &'a GaussLegendre,
}

impl LineProblem<'_> {
    /// Every assignment of components to the `p` slots whose sum range contains `ξ`.
    fn patterns(&self, xi: f64) -> Vec<Vec<usize>> {
        let m = self.comps.len();
        let mut out = Vec::new();
        let mut idx = vec![0usize; self.p];
        let lo_min = self.comps.iter().map(|c| c.iv.lo).fold(f64::INFINITY, f64::min);
        let hi_max = self.comps.iter().map(|c| c.iv.hi).fold(f64::NEG_INFINITY, f64::max);
        fn rec(
            slot: usize,
            lo: f64,
            hi: f64,
            xi: f64,
            me: &LineProblem<'_>,
            bounds: (f64, f64),
            m: usize,
            idx: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            let rest = (me.p - slot) as f64;
            let tol = 1e-9 * (1.0 + hi.abs().max(lo.abs()));
            if xi < lo + rest * bounds.0 - tol || xi > hi + rest * bounds.1 + tol {
                return;
            }
            if slot == me.p {
                out.push(idx.clone());
                return;
            }
            for j in 0..m {
                idx[slot] = j;
                let c = me.comps[j].iv;
                rec(slot + 1, lo + c.lo, hi + c.hi, xi, me, bounds, m, idx, out);
            }
        }
        rec(0, 0.0, 0.0, xi, self, (lo_min, hi_max), m, &mut idx, &mut out);
        out
    }

    fn beta(&self, pattern: &[usize], etas: &[f64]) -> f64 {
        pattern
            .iter()
            .zip(etas)
            .map(|(&j, &eta)| -self.comps[j].sign.as_f64() * lambda(eta))
            .sum()
    }

    /// Innermost integral over `η_{p-1}`, the last slot being fixed by the constraint.
    fn inner(&self, xi: f64, alpha: f64, pattern: &[usize], etas: &mut [f64], resonant: &mut usize) -> Complex64 {
        let p = self.p;
        let partial: f64 = etas[..p - 2].iter().sum();
        let inner = self.comps[pattern[p - 2]].iv;
        let last = self.comps[pattern[p - 1]].iv;
        let lo = inner.lo.max(xi - partial - last.hi);
        let hi = inner.hi.min(xi - partial - last.lo);
        if !(hi > lo) {
            return Complex64::new(0.0, 0.0);
        }
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut acc = Complex64::new(0.0, 0.0);
        for &(x, wgt) in self.gauss.as_node_weight_pairs() {
            let eta = mid + half * x;
            etas[p - 2] = eta;
            etas[p - 1] = xi - partial - eta;
            let q = TimeIntegralParams::new(alpha, self.beta(pattern, etas), self.t);
            *resonant += usize::from(q.is_near_resonant());
            acc += time_integral(&q) * wgt;
        }
        acc * half
    }

    fn tensor(&self, xi: f64, alpha: f64, pattern: &[usize], density: usize, resonant: &mut usize) -> Complex64 {
        let outer = self.p - 2;
        let grids: Vec<(f64, f64, usize)> = pattern[..outer]
            .iter()
            .map(|&j| {
                let iv = self.comps[j].iv;
                let n = ((iv.width() * density as f64).ceil() as usize).max(2);
                (iv.lo, iv.width() / n as f64, n)
            })
            .collect();
        let mut etas = vec![0.0; self.p];
        let mut idx = vec![0usize; outer];
        let cell: f64 = grids.iter().map(|g| g.1).product();
        let mut acc = Complex64::new(0.0, 0.0);
        loop {
            for (d, &(lo, h, _)) in grids.iter().enumerate() {
                etas[d] = lo + (idx[d] as f64 + 0.5) * h;
            }
            acc += self.inner(xi, alpha, pattern, &mut etas, resonant);
            let mut d = 0;
            loop {
                if d == outer {
                    return acc * cell;
                }
                idx[d] += 1;
                if idx[d] < grids[d].2 {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
        }
    }

    /// Returns the estimate and its variance.
    fn monte_carlo(
        &self,
        xi: f64,
        alpha: f64,
        pattern: &[usize],
        samples: usize,
        rng: &mut ChaCha8Rng,
        resonant: &mut usize,
    ) -> (Complex64, f64) {
        let outer = self.p - 2;
        let vol: f64 = pattern[..outer].iter().map(|&j| self.comps[j].iv.width()).product();
        let mut etas = vec![0.0; self.p];
        let mut sum = Complex64::new(0.0, 0.0);
        let mut sum_sq = 0.0;
        for _ in 0..samples {
            for d in 0..outer {
                let iv = self.comps[pattern[d]].iv;
                etas[d] = iv.lo + rng.random::<f64>() * iv.width();
            }
            let v = self.inner(xi, alpha, pattern, &mut etas, resonant);
            sum += v;
            sum_sq += v.norm_sqr();
        }
        let n = samples as f64;
        let mean = sum / n;
        let var = ((sum_sq / n - mean.norm_sqr()) * n / (n - 1.0)).max(0.0);
        (mean * vol, vol * vol * var / n)
    }
}

fn line_once(w: &WitnessPair, p: u32, t: f64, quad: &LineQuadrature) -> Result<ApResult> {
    let OutputWindow::Interval(window) = w.window else {
        return Err(Error::InvalidConfig("line witness needs an output interval".into()));
    };
    let win = window.to_f64();
    let n_xi = ((win.width() * quad.window_nodes_per_unit as f64).ceil() as usize).max(1);
    let h_xi = win.width() / n_xi as f64;
    let xs: Vec<f64> = (0..n_xi).map(|i| win.lo + (i as f64 + 0.5) * h_xi).collect();

    let comps: Vec<Comp> = w
        .support()
        .signed_intervals()
        .into_iter()
        .map(|(sign, iv)| Comp { sign, iv: iv.to_f64() })
        .collect();
    let inner_nodes = match quad.method {
        LineMethod::Tensor { inner_nodes, .. } => inner_nodes,
        LineMethod::MonteCarlo { .. } => 16,
    };
    let gauss = GaussLegendre::new(
        std::num::NonZeroUsize::new(inner_nodes.max(1)).expect("positive node count"),
    );
    let problem = LineProblem { comps, p: p as usize, t, gauss: &gauss };

    // Budget estimate from the widest node.
    let pats = problem.patterns(xs[n_xi / 2]).len() as u64;
    let per_pattern: u64 = match quad.method {
        LineMethod::Tensor { outer_nodes_per_unit, .. } => {
            let widest = problem.comps.iter().map(|c| c.iv.width()).fold(0.0, f64::max);
            let per_dim = ((widest * outer_nodes_per_unit as f64).ceil() as u64).max(2);
            per_dim.saturating_pow(p.saturating_sub(2)) * inner_nodes as u64
        }
        LineMethod::MonteCarlo { samples_per_pattern, .. } => (samples_per_pattern * inner_nodes) as u64,
    };
    let estimate = (n_xi as u64).saturating_mul(pats).saturating_mul(per_pattern);
    if estimate > quad.budget {
        return Err(Error::Budget {
            what: "quadrature evaluations",
            needed: estimate as u128,
            limit: quad.budget as u128,
        });
    }

    // Witness data have constant modulus on the support and evolve as `amp e^{∓iλτ}`.
    let amp = w.u0.nodes().first().map_or(0.0, |n| n.value.norm());
    let scale = amp.powi(p as i32) * derivative_constant(p);
    let rows: Vec<(Complex64, f64, usize)> = xs
        .par_iter()
        .enumerate()
        .map(|(i, &xi)| {
            let alpha = lambda(xi);
            let mut resonant = 0;
            let mut acc = Complex64::new(0.0, 0.0);
            let mut var = 0.0;
            for (pi, pattern) in problem.patterns(xi).iter().enumerate() {
                match quad.method {
                    LineMethod::Tensor { outer_nodes_per_unit, .. } => {
                        if p == 2 {
                            let mut etas = vec![0.0; 2];
                            acc += problem.inner(xi, alpha, pattern, &mut etas, &mut resonant);
                        } else {
                            acc += problem.tensor(xi, alpha, pattern, outer_nodes_per_unit, &mut resonant);
                        }
                    }
                    LineMethod::MonteCarlo { samples_per_pattern, seed } => {
                        if p == 2 {
                            let mut etas = vec![0.0; 2];
                            acc += problem.inner(xi, alpha, pattern, &mut etas, &mut resonant);
                        } else {
                            let mut rng = ChaCha8Rng::seed_from_u64(
                                seed ^ ((i as u64) << 32) ^ pi as u64,
                            );
                            let (m, v) = problem.monte_carlo(
                                xi,
                                alpha,
                                pattern,
                                samples_per_pattern,
                                &mut rng,
                                &mut resonant,
                            );
                            acc += m;
                            var += v;
                        }
                    }
                }
            }
            let f = scale * xi_prefactor(xi);
            (acc * f, 1.96 * var.sqrt() * f, resonant)
        })
        .collect();

    let values = rows.iter().map(|r| r.0).collect();
    let mut r = ApResult::new(t, xs, vec![h_xi; n_xi], values);
    r.resonant_terms = rows.iter().map(|r| r.2).sum();
    if matches!(quad.method, LineMethod::MonteCarlo { .. }) && p > 2 {
        let hw: Vec<f64> = rows.iter().map(|r| r.1).collect();
        let worst = hw
            .iter()
            .zip(&r.values)
            .map(|(h, v)| h / v.norm().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);
        if worst > 0.05 {
            r.warnings.push(format!(
                "Monte Carlo 95% half-width reaches {:.1}% of a node value",
                100.0 * worst
            ));
        }
        r.half_width = Some(hw);
    }
    if r.resonant_terms > 0 {
        r.warnings.push(format!("{} near-resonant integrand evaluations", r.resonant_terms));
    }
    Ok(r)
}

/// Quadrature evaluation on the line at midpoint nodes of the output window.
pub fn compute_ap_line(w: &WitnessPair, p: u32, t: f64, quad: &LineQuadrature) -> Result<ApResult> {
    if w.u0.domain() != Domain::Line {
        return Err(Error::InvalidConfig("compute_ap_line needs line data".into()));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidConfig(format!("time {t} must be ≥ 0")));
    }
    let mut r = line_once(w, p, t, quad)?;
    if quad.check_convergence {
        let fine = line_once(w, p, t, &quad.doubled())?;
        let scale = fine.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let diff = r
            .values
            .iter()
            .zip(&fine.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let rel = if scale > 0.0 { diff / scale } else { 0.0 };
        if rel > 1e-4 {
            r.warnings.push(format!("quadrature not converged: doubling changes values by {rel:.2e}"));
        }
        r.convergence = Some(rel);
    }
    Ok(r)
}

/// Dispatches on the witness domain.
pub fn compute_ap(w: &WitnessPair, p: u32, t: f64, quad: &LineQuadrature) -> Result<ApResult> {
    match w.u0.domain() {
        Domain::Torus => compute_ap_torus(w, p, t),
        Domain::Line => compute_ap_line(w, p, t, quad),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthRecord {
    #[serde(rename = "N")]
    pub n: u64,
    pub data_norm: f64,
    pub ap_norm: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthConfig {
    pub p: u32,
    pub domain: Domain,
    pub s: f64,
    pub sigma: f64,
    pub t: f64,
    #[serde(rename = "N_list")]
    pub n_list: Vec<u64>,
    pub quadrature: LineQuadrature,
}

impl GrowthConfig {
    /// `σ = s + 1`, `t = 1`, `N = 2⁴..2⁹`, default quadrature for `p`.
    pub fn new(p: u32, domain: Domain, s: f64) -> Self {
        Self {
            p,
            domain,
            s,
            sigma: s + 1.0,
            t: 1.0,
            n_list: (4..=9).map(|e| 1u64 << e).collect(),
            quadrature: LineQuadrature::for_degree(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthTable {
    pub config: GrowthConfig,
    pub records: Vec<GrowthRecord>,
    /// Slope fitted on the records up to and including each row.
    pub slope_running: Vec<Option<f64>>,
    pub slope: f64,
    /// `-(ps+1)` for even `p`, `-(ps+2)` for odd `p`.
    pub predicted_slope: f64,
    pub warnings: Vec<String>,
}

pub fn predicted_slope(p: u32, s: f64) -> f64 {
    let pf = p as f64;
    if p % 2 == 0 {
        -(pf * s + 1.0)
    } else {
        -(pf * s + 2.0)
    }
}

/// Least-squares slope of `log y` against `log x`.
pub fn fit_loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() < 2 || xs.len() != ys.len() {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Norm ratio `‖A_p‖_{H^s(window)} / (‖u₀‖_{H^s} + ‖u₁‖_{H^{s-2}})^p` across `N`.
pub fn growth_table(cfg: &GrowthConfig) -> Result<GrowthTable> {
    if cfg.sigma <= cfg.s {
        return Err(Error::InvalidConfig(format!(
            "σ = {} must exceed s = {}",
            cfg.sigma, cfg.s
        )));
    }
    if !(cfg.t > 0.0 && cfg.t.is_finite()) {
        return Err(Error::InvalidConfig(format!("measurement time t = {} must be > 0", cfg.t)));
    }
    let mut records = Vec::new();
    let mut warnings = Vec::new();
    for &n in &cfg.n_list {
        let wc = WitnessConfig::with_sigma(cfg.domain, cfg.p, n, cfg.s, cfg.sigma)?;
        let w = build_witness(&wc)?;
        let data_norm = w.data_norm(cfg.s)?;
        let ap = compute_ap(&w, cfg.p, cfg.t, &cfg.quadrature)?;
        warnings.extend(ap.warnings.iter().map(|m| format!("N = {n}: {m}")));
        let ap_norm = hs_window_mass(&ap, cfg.s)?;
        records.push(GrowthRecord {
            n,
            data_norm,
            ap_norm,
            ratio: ap_norm / data_norm.powi(cfg.p as i32),
        });
    }
    let xs: Vec<f64> = records.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.ratio).collect();
    let slope_running = (1..=records.len())
        .map(|k| fit_loglog_slope(&xs[..k], &ys[..k]))
        .collect();
    let slope = fit_loglog_slope(&xs, &ys).unwrap_or(f64::NAN);
    Ok(GrowthTable {
        config: cfg.clone(),
        records,
        slope_running,
        slope,
        predicted_slope: predicted_slope(cfg.p, cfg.s),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus_witness(p: u32, n: u64, s: f64, sigma: f64) -> WitnessPair {
        build_witness(&WitnessConfig::with_sigma(Domain::Torus, p, n, s, sigma).unwrap()).unwrap()
    }

    #[test]
    fn sinc_form_matches_rational_form_off_resonance() {
        for &(a, b, t) in &[(2.0, 1.0, 0.7), (1.4, -40.0, 1.3), (0.3, 157.5, 2.0)] {
            let q = TimeIntegralParams::new(a, b, t);
            let d = time_integral(&q) - time_integral_closed_form(&q);
            assert!(d.norm() < 1e-13, "{a} {b} {t}");
        }
    }

    #[test]
    fn resonant_limit() {
        // α = β = 1: (t e^{it} - sin t)/(2i) = t sin t/2 + i (sin t - t cos t)/2.
        let v = time_integral(&TimeIntegralParams::new(1.0, 1.0, 1.0));
        let (s, c) = 1f64.sin_cos();
        assert!((v - Complex64::new(0.5 * s, 0.5 * (s - c))).norm() < 1e-15);
        assert!(TimeIntegralParams::new(1.0, 1.0, 1.0).is_near_resonant());
    }

    #[test]
    fn zero_time_gives_zero() {
        let w = torus_witness(3, 16, -1.0, 0.0);
        assert_eq!(compute_ap_torus(&w, 3, 0.0).unwrap().values[0], Complex64::new(0.0, 0.0));
        let lw = build_witness(&WitnessConfig::new(Domain::Line, 2, 16, -1.0).unwrap()).unwrap();
        let r = compute_ap_line(&lw, 2, 0.0, &LineQuadrature::for_degree(2)).unwrap();
        assert!(r.values.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn sigma_scaling_is_exact_power() {
        let (n, p) = (32, 3);
        let a = compute_ap_torus(&torus_witness(p, n, -1.0, 0.0), p, 1.0).unwrap().values[0];
        let b = compute_ap_torus(&torus_witness(p, n, -1.0, 0.5), p, 1.0).unwrap().values[0];
        let expect = (n as f64).powf(-(p as f64) * 0.5);
        assert!((b / a - expect).norm() < 1e-12 * expect);
    }

    #[test]
    fn window_mass_examples() {
        let r = ApResult::new(1.0, vec![1.0], vec![1.0], vec![Complex64::new(0.0, 3.0)]);
        assert_eq!(hs_window_mass(&r, 0.0).unwrap(), 3.0);
        let xs: Vec<f64> = (0..16).map(|i| 0.25 + (i as f64 + 0.5) / 64.0).collect();
        let r = ApResult::new(1.0, xs, vec![1.0 / 64.0; 16], vec![Complex64::new(1.0, 0.0); 16]);
        assert!((hs_window_mass(&r, 0.0).unwrap() - 0.5).abs() < 1e-15);
        let zero = ApResult::new(1.0, vec![1.0], vec![1.0], vec![Complex64::new(0.0, 0.0)]);
        assert_eq!(hs_window_mass(&zero, -1.0).unwrap(), 0.0);
        let empty = ApResult::new(1.0, vec![], vec![], vec![]);
        assert_eq!(hs_window_mass(&empty, 0.0), Err(Error::EmptyWindow));
    }

    #[test]
    fn growth_refuses_sigma_below_s() {
        let mut cfg = GrowthConfig::new(2, Domain::Torus, -1.0);
        cfg.sigma = -1.5;
        assert!(growth_table(&cfg).is_err());
    }

    #[test]
    fn slope_of_exact_power() {
        let xs = [16.0, 32.0, 64.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-1.25)).collect();
        assert!((fit_loglog_slope(&xs, &ys).unwrap() + 1.25).abs() < 1e-12);
    }
}
