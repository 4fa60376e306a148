//! Fourier-side data model.
//!
//! Everything here lives in frequency space. On the torus a field is the
//! list of its coefficients `û(k)`, `k ∈ ℤ`, with counting measure; on the
//! line it is a density `û(ξ)` sampled on composite midpoint nodes over each
//! interval of its support, so every integral over frequency becomes a
//! weighted sum over [`Node`]s. Both domains therefore share one norm and
//! one propagator implementation.
//!
//! Line transforms follow `û(ξ) = ∫ u(x) e^{-iξx} dx`; no physical-space
//! representation is needed for the norms.

use crate::error::{Error, Result};
use crate::interval::{rat_to_f64, RatInterval, Rational};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Below this value of `λ` the multiplier `sin(tλ)/λ` is replaced by its series.
pub const LAMBDA_SERIES_THRESHOLD: f64 = 1e-12;

/// Default composite midpoint density on the line, nodes per unit frequency.
pub const DEFAULT_NODES_PER_UNIT: usize = 64;

/// The dispersion relation `λ(ξ) = √(ξ² + ξ⁴)`.
///
/// ```
/// use boussinesq_lab::spectral::lambda;
/// assert_eq!(lambda(0.0), 0.0);
/// assert!((lambda(1.0) - 2f64.sqrt()).abs() < 1e-15);
/// ```
pub fn lambda(xi: f64) -> f64 {
    let a = xi.abs();
    a * (1.0 + a * a).sqrt()
}

/// `dλ/dξ` for `ξ ≥ 0`, i.e. `(1 + 2ξ²)/√(1 + ξ²)`.
pub fn lambda_prime(xi: f64) -> f64 {
    let a = xi.abs();
    (1.0 + 2.0 * a * a) / (1.0 + a * a).sqrt()
}

/// `sin(tλ)/λ`, continuous through `λ = 0`.
pub fn sin_over_lambda(t: f64, lam: f64) -> f64 {
    if lam.abs() < LAMBDA_SERIES_THRESHOLD {
        t * (1.0 - (t * lam).powi(2) / 6.0)
    } else {
        (t * lam).sin() / lam
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    /// The real line, non-periodic problem.
    Line,
    /// The circle `ℝ/2πℤ`, periodic problem.
    Torus,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::Line => "line",
            Domain::Torus => "torus",
        })
    }
}

impl FromStr for Domain {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "line" | "r" => Ok(Domain::Line),
            "torus" | "t" => Ok(Domain::Torus),
            other => Err(Error::InvalidConfig(format!(
                "unknown domain `{other}` (expected `line` or `torus`)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn both() -> [Sign; 2] {
        [Sign::Plus, Sign::Minus]
    }
}

/// Which copies of the positive set `A` a [`FrequencySet`] stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mirror {
    /// `A`
    Plus,
    /// `-A`
    Minus,
    /// `A ∪ -A`
    Both,
}

impl Mirror {
    fn signs(self) -> &'static [Sign] {
        match self {
            Mirror::Plus => &[Sign::Plus],
            Mirror::Minus => &[Sign::Minus],
            Mirror::Both => &[Sign::Plus, Sign::Minus],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Components {
    /// Pairwise disjoint closed intervals, sorted, inside `(0, ∞)`.
    Intervals(Vec<RatInterval>),
    /// Distinct positive integers, sorted.
    Modes(Vec<i64>),
}

/// A positive frequency set `A` together with the mirror copies it represents.
///
/// The mirrored part is always derived from `A`; only the positive side is stored.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySet {
    components: Components,
    mirror: Mirror,
}

impl FrequencySet {
    /// Union of closed intervals on the line. Intervals must be positive,
    /// non-degenerate and pairwise disjoint; they are stored sorted.
    pub fn intervals(mut parts: Vec<RatInterval>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidConfig("frequency set has no components".into()));
        }
        parts.sort_by(|a, b| a.lo.cmp(&b.lo));
        for iv in &parts {
            if iv.lo <= Rational::from_integer(0) {
                return Err(Error::InvalidConfig(format!(
                    "interval {iv} is not contained in (0, ∞)"
                )));
            }
        }
        for w in parts.windows(2) {
            if w[0].hi >= w[1].lo {
                return Err(Error::InvalidConfig(format!(
                    "intervals {} and {} overlap",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self {
            components: Components::Intervals(parts),
            mirror: Mirror::Both,
        })
    }

    /// Finite set of positive integer modes on the torus. Duplicates are rejected.
    pub fn modes(mut modes: Vec<i64>) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidConfig("frequency set has no modes".into()));
        }
        modes.sort_unstable();
        if let Some(w) = modes.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidConfig(format!("duplicate mode {}", w[0])));
        }
        if modes[0] <= 0 {
            return Err(Error::InvalidConfig(format!(
                "mode {} is not positive",
                modes[0]
            )));
        }
        Ok(Self {
            components: Components::Modes(modes),
            mirror: Mirror::Both,
        })
    }

    pub fn with_mirror(mut self, mirror: Mirror) -> Self {
        self.mirror = mirror;
        self
    }

    pub fn mirror(&self) -> Mirror {
        self.mirror
    }

    pub fn components(&self) -> &Components {
        &self.components
    }

    pub fn domain(&self) -> Domain {
        match self.components {
            Components::Intervals(_) => Domain::Line,
            Components::Modes(_) => Domain::Torus,
        }
    }

    /// Number of classes: intervals on the line, runs of consecutive
    /// integers on the torus (`{N, N+1, 2N}` has two classes).
    pub fn class_count(&self) -> usize {
        match &self.components {
            Components::Intervals(v) => v.len(),
            Components::Modes(m) => 1 + m.windows(2).filter(|w| w[1] - w[0] > 1).count(),
        }
    }

    /// Class index of a positive torus mode, if it belongs to `A`.
    pub fn class_of_mode(&self, k: i64) -> Option<usize> {
        let Components::Modes(m) = &self.components else {
            return None;
        };
        let pos = m.iter().position(|&x| x == k)?;
        Some(m[..=pos].windows(2).filter(|w| w[1] - w[0] > 1).count())
    }

    pub fn positive_intervals(&self) -> &[RatInterval] {
        match &self.components {
            Components::Intervals(v) => v,
            Components::Modes(_) => &[],
        }
    }

    pub fn positive_modes(&self) -> &[i64] {
        match &self.components {
            Components::Modes(m) => m,
            Components::Intervals(_) => &[],
        }
    }

    /// Signed copies of every interval, sorted by left endpoint.
    pub fn signed_intervals(&self) -> Vec<(Sign, RatInterval)> {
        let mut out: Vec<(Sign, RatInterval)> = self
            .mirror
            .signs()
            .iter()
            .flat_map(|&s| {
                self.positive_intervals().iter().map(move |iv| match s {
                    Sign::Plus => (s, *iv),
                    Sign::Minus => (s, -*iv),
                })
            })
            .collect();
        out.sort_by(|a, b| a.1.lo.cmp(&b.1.lo));
        out
    }

    /// Signed modes, sorted ascending.
    pub fn signed_modes(&self) -> Vec<i64> {
        let mut out: Vec<i64> = self
            .mirror
            .signs()
            .iter()
            .flat_map(|&s| self.positive_modes().iter().map(move |&k| s.as_i64() * k))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn contains(&self, xi: f64) -> bool {
        match &self.components {
            Components::Intervals(_) => self
                .signed_intervals()
                .iter()
                .any(|(_, iv)| iv.to_f64().contains(xi)),
            Components::Modes(_) => {
                xi.fract() == 0.0 && self.signed_modes().contains(&(xi as i64))
            }
        }
    }

    /// Lebesgue measure (line) or cardinality (torus) of the signed set.
    pub fn measure(&self) -> f64 {
        let copies = self.mirror.signs().len() as f64;
        match &self.components {
            Components::Intervals(v) => {
                copies * v.iter().map(|iv| rat_to_f64(iv.width())).sum::<f64>()
            }
            Components::Modes(m) => copies * m.len() as f64,
        }
    }
}

/// One sample of a spectral field: frequency, quadrature weight, value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub xi: f64,
    pub weight: f64,
    pub value: Complex64,
}

/// Composite midpoint nodes `(ξ, weight)` covering every signed interval of `set`.
pub fn midpoint_nodes(set: &FrequencySet, nodes_per_unit: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for (_, iv) in set.signed_intervals() {
        let iv = iv.to_f64();
        let n = ((iv.width() * nodes_per_unit as f64).ceil() as usize).max(1);
        let h = iv.width() / n as f64;
        out.extend((0..n).map(|j| (iv.lo + (j as f64 + 0.5) * h, h)));
    }
    out
}

/// Fourier-side representation of a real field.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    domain: Domain,
    support: FrequencySet,
    n_scale: u64,
    sigma: f64,
    nodes: Vec<Node>,
}

impl SpectralData {
    /// Validates that the nodes fit the domain: torus nodes sit on distinct
    /// integers with unit weight, line nodes carry positive weights; all
    /// values are finite. Nodes are sorted by frequency.
    pub fn new(
        support: FrequencySet,
        n_scale: u64,
        sigma: f64,
        mut nodes: Vec<Node>,
    ) -> Result<Self> {
        let domain = support.domain();
        for nd in &nodes {
            if !(nd.value.re.is_finite() && nd.value.im.is_finite() && nd.xi.is_finite()) {
                return Err(Error::NonFinite { xi: nd.xi });
            }
            match domain {
                Domain::Torus if nd.xi.fract() != 0.0 || nd.weight != 1.0 => {
                    return Err(Error::Malformed(format!(
                        "torus node at ξ = {} must be an integer with unit weight",
                        nd.xi
                    )))
                }
                Domain::Line if !(nd.weight > 0.0 && nd.weight.is_finite()) => {
                    return Err(Error::Malformed(format!(
                        "line node at ξ = {} has weight {}",
                        nd.xi, nd.weight
                    )))
                }
                _ => {}
            }
        }
        nodes.sort_by(|a, b| a.xi.total_cmp(&b.xi));
        if domain == Domain::Torus && nodes.windows(2).any(|w| w[0].xi == w[1].xi) {
            return Err(Error::Malformed("repeated torus mode".into()));
        }
        Ok(Self {
            domain,
            support,
            n_scale,
            sigma,
            nodes,
        })
    }

    /// Samples `f(ξ)` on the support: every signed mode on the torus,
    /// midpoint nodes at `nodes_per_unit` density on the line.
    pub fn from_fn(
        support: FrequencySet,
        n_scale: u64,
        sigma: f64,
        nodes_per_unit: usize,
        f: impl Fn(f64) -> Complex64,
    ) -> Result<Self> {
        let nodes = match support.domain() {
            Domain::Torus => support
                .signed_modes()
                .into_iter()
                .map(|k| {
                    let xi = k as f64;
                    Node {
                        xi,
                        weight: 1.0,
                        value: f(xi),
                    }
                })
                .collect(),
            Domain::Line => midpoint_nodes(&support, nodes_per_unit)
                .into_iter()
                .map(|(xi, weight)| Node {
                    xi,
                    weight,
                    value: f(xi),
                })
                .collect(),
        };
        Self::new(support, n_scale, sigma, nodes)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn support(&self) -> &FrequencySet {
        &self.support
    }

    /// Localization scale `N`.
    pub fn n_scale(&self) -> u64 {
        self.n_scale
    }

    /// Amplitude exponent `σ`.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Value at an exact node frequency, if present.
    pub fn value_at(&self, xi: f64) -> Option<Complex64> {
        self.nodes
            .binary_search_by(|nd| nd.xi.total_cmp(&xi))
            .ok()
            .map(|i| self.nodes[i].value)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        self.map_values(|_, v| v * c)
    }

    /// Same grid, values replaced by `f(ξ, value)`.
    pub fn map_values(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Self {
        let mut out = self.clone();
        for nd in &mut out.nodes {
            nd.value = f(nd.xi, nd.value);
        }
        out
    }

    pub fn same_grid(&self, other: &SpectralData) -> bool {
        self.domain == other.domain
            && self.nodes.len() == other.nodes.len()
            && self
                .nodes
                .iter()
                .zip(&other.nodes)
                .all(|(a, b)| a.xi == b.xi && a.weight == b.weight)
    }

    /// Largest violation of `û(-ξ) = conj(û(ξ))` over nodes whose mirror is also a node.
    pub fn hermitian_defect(&self) -> f64 {
        self.nodes
            .iter()
            .filter_map(|nd| self.value_at(-nd.xi).map(|m| (nd.value - m.conj()).norm()))
            .fold(0.0, f64::max)
    }
}

/// `H^s` norm on the Fourier side: `(Σ w (1+ξ²)^s |û|²)^{1/2}`.
pub fn sobolev_norm(d: &SpectralData, s: f64) -> Result<f64> {
    let mut acc = 0.0;
    for nd in d.nodes() {
        let v = nd.value.norm_sqr();
        if !v.is_finite() {
            return Err(Error::NonFinite { xi: nd.xi });
        }
        acc += nd.weight * (1.0 + nd.xi * nd.xi).powf(s) * v;
    }
    Ok(acc.sqrt())
}

/// Free evolution `cos(tλ)û₀ + sin(tλ)/λ û₁` applied node by node.
pub fn propagate_linear(u0: &SpectralData, u1: &SpectralData, t: f64) -> Result<SpectralData> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidConfig(format!("propagation time {t} must be ≥ 0")));
    }
    if !u0.same_grid(u1) {
        return Err(Error::GridMismatch(format!(
            "u0 has {} nodes on the {}, u1 has {} nodes on the {}",
            u0.nodes.len(),
            u0.domain,
            u1.nodes.len(),
            u1.domain
        )));
    }
    let mut out = u0.clone();
    for (nd, v1) in out.nodes.iter_mut().zip(&u1.nodes) {
        let lam = lambda(nd.xi);
        nd.value = nd.value * (t * lam).cos() + v1.value * sin_over_lambda(t, lam);
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct SpectralDataJson {
    domain: Domain,
    mirror: Mirror,
    supports: serde_json::Value,
    sigma: f64,
    #[serde(rename = "N")]
    n: u64,
    values: Vec<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<f64>>,
}

impl Serialize for SpectralData {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let supports = match self.support.components() {
            Components::Intervals(v) => serde_json::json!(v
                .iter()
                .map(|iv| [rat_to_f64(iv.lo), rat_to_f64(iv.hi)])
                .collect::<Vec<_>>()),
            Components::Modes(m) => serde_json::json!(m),
        };
        let weights = (self.domain == Domain::Line)
            .then(|| self.nodes.iter().map(|n| n.weight).collect());
        SpectralDataJson {
            domain: self.domain,
            mirror: self.support.mirror(),
            supports,
            sigma: self.sigma,
            n: self.n_scale,
            values: self
                .nodes
                .iter()
                .map(|n| [n.xi, n.value.re, n.value.im])
                .collect(),
            weights,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for SpectralData {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = SpectralDataJson::deserialize(de)?;
        let support = match raw.domain {
            Domain::Torus => {
                let m: Vec<i64> =
                    serde_json::from_value(raw.supports).map_err(D::Error::custom)?;
                FrequencySet::modes(m)
            }
            Domain::Line => {
                let v: Vec<[f64; 2]> =
                    serde_json::from_value(raw.supports).map_err(D::Error::custom)?;
                v.into_iter()
                    .map(|[lo, hi]| {
                        let lo = Rational::approximate_float(lo);
                        let hi = Rational::approximate_float(hi);
                        lo.zip(hi)
                            .and_then(|(lo, hi)| RatInterval::new(lo, hi))
                            .ok_or_else(|| Error::Malformed("bad interval".into()))
                    })
                    .collect::<Result<Vec<_>>>()
                    .and_then(FrequencySet::intervals)
            }
        }
        .map_err(D::Error::custom)?
        .with_mirror(raw.mirror);
        let weights = raw.weights.unwrap_or_else(|| vec![1.0; raw.values.len()]);
        if weights.len() != raw.values.len() {
            return Err(D::Error::custom("weights and values differ in length"));
        }
        let nodes = raw
            .values
            .iter()
            .zip(weights)
            .map(|(&[xi, re, im], weight)| Node {
                xi,
                weight,
                value: Complex64::new(re, im),
            })
            .collect();
        SpectralData::new(support, raw.n, raw.sigma, nodes).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::rat;
    use proptest::prelude::*;

    fn torus(modes: &[(i64, Complex64)]) -> SpectralData {
        let pos: Vec<i64> = modes.iter().map(|m| m.0.abs()).filter(|&k| k > 0).collect();
        let mut pos_unique = pos.clone();
        pos_unique.sort_unstable();
        pos_unique.dedup();
        let support = FrequencySet::modes(if pos_unique.is_empty() { vec![1] } else { pos_unique })
            .unwrap();
        let nodes = modes
            .iter()
            .map(|&(k, v)| Node {
                xi: k as f64,
                weight: 1.0,
                value: v,
            })
            .collect();
        SpectralData::new(support, 1, 0.0, nodes).unwrap()
    }

    #[test]
    fn lambda_values() {
        assert_eq!(lambda(0.0), 0.0);
        assert!((lambda(1.0) - 1.4142135624).abs() < 1e-10);
        assert!((lambda(10.0) - 100.4987562).abs() < 1e-7);
    }

    #[test]
    fn single_zero_mode_norm() {
        let d = torus(&[(0, Complex64::new(1.0, 0.0))]);
        assert_eq!(sobolev_norm(&d, 2.0).unwrap(), 1.0);
    }

    #[test]
    fn four_modes_l2_norm() {
        let v = Complex64::new(1.0 / 16.0, 0.0);
        let d = torus(&[(-17, v), (-16, v), (16, v), (17, v)]);
        assert!((sobolev_norm(&d, 0.0).unwrap() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn nonfinite_amplitudes_rejected() {
        let support = FrequencySet::modes(vec![3]).unwrap();
        let nodes = vec![Node {
            xi: 3.0,
            weight: 1.0,
            value: Complex64::new(f64::NAN, 0.0),
        }];
        assert!(matches!(
            SpectralData::new(support, 1, 0.0, nodes),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn propagation_identity_and_zero_mode_limit() {
        let u0 = torus(&[(0, Complex64::new(0.3, 0.0)), (2, Complex64::new(1.0, -1.0))]);
        let same = propagate_linear(&u0, &u0.scaled(Complex64::new(0.0, 0.0)), 0.0).unwrap();
        assert_eq!(same, u0);
        let u1 = torus(&[(0, Complex64::new(2.0, 0.5)), (2, Complex64::new(0.0, 0.0))]);
        let zero = u1.scaled(Complex64::new(0.0, 0.0));
        let t = 1.7;
        let out = propagate_linear(&zero, &u1, t).unwrap();
        assert_eq!(out.value_at(0.0).unwrap(), Complex64::new(2.0, 0.5) * t);
    }

    #[test]
    fn grid_mismatch_is_an_error() {
        let a = torus(&[(1, Complex64::new(1.0, 0.0))]);
        let b = torus(&[(2, Complex64::new(1.0, 0.0))]);
        assert!(matches!(propagate_linear(&a, &b, 1.0), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn frequency_set_validation() {
        assert!(FrequencySet::modes(vec![3, 3]).is_err());
        let a = RatInterval::new(rat(1, 1), rat(2, 1)).unwrap();
        let b = RatInterval::new(rat(3, 2), rat(3, 1)).unwrap();
        assert!(FrequencySet::intervals(vec![a, b]).is_err());
        let set = FrequencySet::modes(vec![24, 12, 13]).unwrap();
        assert_eq!(set.class_count(), 2);
        assert_eq!(set.class_of_mode(13), Some(0));
        assert_eq!(set.class_of_mode(24), Some(1));
        assert_eq!(set.signed_modes(), vec![-24, -13, -12, 12, 13, 24]);
    }

    #[test]
    fn json_round_trip_line() {
        let set = FrequencySet::intervals(vec![RatInterval::new(rat(7, 1), rat(8, 1)).unwrap()])
            .unwrap();
        let d = SpectralData::from_fn(set, 7, 0.5, 8, |xi| Complex64::new(xi, -xi)).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert!(s.contains("\"N\":7"));
        let back: SpectralData = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }

    proptest! {
        #[test]
        fn lambda_even_and_sandwiched(xi in -1e3f64..1e3) {
            let l = lambda(xi);
            prop_assert_eq!(l, lambda(-xi));
            prop_assert!(xi * xi <= l * (1.0 + 1e-15));
            prop_assert!(l <= xi * xi + 0.5);
        }

        #[test]
        fn norm_is_absolutely_homogeneous(
            re in -10f64..10.0, im in -10f64..10.0, c in -5f64..5.0, s in -3f64..3.0
        ) {
            let d = torus(&[(-3, Complex64::new(re, -im)), (3, Complex64::new(re, im))]);
            let lhs = sobolev_norm(&d.scaled(Complex64::new(c, 0.0)), s).unwrap();
            let rhs = c.abs() * sobolev_norm(&d, s).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
        }

        #[test]
        fn linear_mode_energy_is_conserved(
            k in 0i64..200, a in -1f64..1.0, b in -1f64..1.0, t in 0f64..50.0
        ) {
            // |û|² λ² + |û_t|² for a single mode under the free flow.
            let u0 = torus(&[(k, Complex64::new(a, 0.3 * b))]);
            let u1 = torus(&[(k, Complex64::new(b * lambda(k as f64).max(1.0), -a))]);
            let lam = lambda(k as f64);
            let u = propagate_linear(&u0, &u1, t).unwrap().value_at(k as f64).unwrap();
            let ut = u0.value_at(k as f64).unwrap() * (-lam * (t * lam).sin())
                + u1.value_at(k as f64).unwrap() * (t * lam).cos();
            let e0 = lam * lam * u0.nodes()[0].value.norm_sqr() + u1.nodes()[0].value.norm_sqr();
            let e1 = lam * lam * u.norm_sqr() + ut.norm_sqr();
            prop_assert!((e0 - e1).abs() <= 1e-12 * (1.0 + e0) * (1.0 + t * lam).min(1e4));
        }
    }
}
