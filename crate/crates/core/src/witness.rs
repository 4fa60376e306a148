//! Counterexample initial data and the frequency windows where the
//! `p`-th derivative of the flow map is measured.
//!
//! All four families share one profile:
//!
//! ```text
//! û₀(ξ) = N^{-σ} (φ_A(ξ) + φ_{-A}(ξ))
//! û₁(ξ) = -i N^{-σ} λ(ξ) (φ_A(ξ) - φ_{-A}(ξ))
//! ```
//!
//! so that the free evolution is the one-sided wave `N^{-σ} e^{∓itλ(ξ)}` on `±A`.
//! Only the set `A = A_N` and the output window depend on the domain and
//! on the parity of `p`.

use crate::error::{Error, Result};
use crate::interval::{rat, RatInterval, Rational};
use crate::spectral::{
    lambda, Domain, FrequencySet, SpectralData, DEFAULT_NODES_PER_UNIT,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessConfig {
    pub domain: Domain,
    pub p: u32,
    #[serde(rename = "N")]
    pub n: u64,
    pub sigma: f64,
    pub s_target: f64,
    /// Midpoint density for line data.
    pub nodes_per_unit: usize,
}

impl WitnessConfig {
    /// Configuration with the default amplitude exponent `σ = s + 1`.
    pub fn new(domain: Domain, p: u32, n: u64, s_target: f64) -> Result<Self> {
        Self::with_sigma(domain, p, n, s_target, s_target + 1.0)
    }

    pub fn with_sigma(domain: Domain, p: u32, n: u64, s_target: f64, sigma: f64) -> Result<Self> {
        let cfg = Self {
            domain,
            p,
            n,
            sigma,
            s_target,
            nodes_per_unit: DEFAULT_NODES_PER_UNIT,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p < 2 {
            return Err(Error::InvalidConfig(format!(
                "nonlinearity degree p = {} must be at least 2",
                self.p
            )));
        }
        if self.n < 1 {
            return Err(Error::InvalidConfig("localization scale N must be ≥ 1".into()));
        }
        if !(self.sigma.is_finite() && self.s_target.is_finite()) {
            return Err(Error::InvalidConfig("σ and s must be finite".into()));
        }
        if self.sigma <= self.s_target {
            return Err(Error::InvalidConfig(format!(
                "amplitude exponent σ = {} must exceed the Sobolev index s = {}; \
                 try --sigma {}",
                self.sigma,
                self.s_target,
                self.s_target + 1.0
            )));
        }
        if self.nodes_per_unit == 0 {
            return Err(Error::InvalidConfig("nodes_per_unit must be positive".into()));
        }
        Ok(())
    }

    pub fn is_odd(&self) -> bool {
        self.p % 2 == 1
    }
}

/// Where `A_p` is measured: a frequency interval on the line, one mode on the torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputWindow {
    Interval(RatInterval),
    Mode(i64),
}

impl OutputWindow {
    pub fn as_interval(&self) -> RatInterval {
        match *self {
            OutputWindow::Interval(iv) => iv,
            OutputWindow::Mode(k) => RatInterval::point(Rational::from_integer(k)),
        }
    }
}

/// The positive set `A_N`, mirrored on both sides.
///
/// ```
/// use boussinesq_lab::spectral::Domain;
/// use boussinesq_lab::witness::{frequency_set, WitnessConfig};
///
/// let cfg = WitnessConfig::new(Domain::Torus, 5, 12, -1.0).unwrap();
/// assert_eq!(frequency_set(&cfg).unwrap().positive_modes(), &[12, 13, 24]);
/// ```
pub fn frequency_set(cfg: &WitnessConfig) -> Result<FrequencySet> {
    cfg.validate()?;
    let n = cfg.n as i64;
    let p = cfg.p as i64;
    match (cfg.domain, cfg.is_odd()) {
        (Domain::Line, false) => FrequencySet::intervals(vec![unit_interval(n)]),
        (Domain::Line, true) => {
            let near = RatInterval::new(
                Rational::from_integer(n) + rat(3 * (p - 1), 2 * p * p),
                Rational::from_integer(n) + rat(3 * (p + 2), 2 * p * p),
            );
            let far = RatInterval::new(
                Rational::from_integer(2 * n),
                Rational::from_integer(2 * n) + rat(3, p * p),
            );
            FrequencySet::intervals(vec![near.unwrap(), far.unwrap()])
        }
        (Domain::Torus, false) => FrequencySet::modes(vec![n, n + 1]),
        (Domain::Torus, true) => FrequencySet::modes(vec![n, n + 1, 2 * n]),
    }
}

/// `[N, N+1]`.
pub fn unit_interval(n: i64) -> RatInterval {
    RatInterval::point(Rational::from_integer(n)) + RatInterval::new(rat(0, 1), rat(1, 1)).unwrap()
}

/// The interval `I_p` for odd `p` on the line, chosen by `p mod 3`.
pub fn odd_line_window(p: u32) -> RatInterval {
    let p = p as i64;
    let one = Rational::from_integer(1);
    let (lo, hi) = match p % 3 {
        0 => (one - rat(2, p), one + rat(2, p)),
        1 => (one - rat(3, p) - rat(4, p * p), one - rat(2, p) - rat(8, p * p)),
        _ => (one - rat(4, p) + rat(4, p * p), one - rat(4, p * p)),
    };
    RatInterval::new(lo, hi).expect("I_p is non-empty for every odd p ≥ 3")
}

/// Number of `N + N - 2N` triplets in the generic odd profiles, `2⌊(p-3)/6⌋ + 1`.
pub fn triplet_count(p: u32) -> u32 {
    2 * ((p - 3) / 6) + 1
}

pub fn output_window(cfg: &WitnessConfig) -> Result<OutputWindow> {
    cfg.validate()?;
    let p = cfg.p;
    Ok(match (cfg.domain, cfg.is_odd()) {
        (Domain::Line, false) => OutputWindow::Interval(RatInterval::new(rat(1, 4), rat(1, 2)).unwrap()),
        (Domain::Line, true) => OutputWindow::Interval(odd_line_window(p)),
        (Domain::Torus, false) => OutputWindow::Mode(p as i64 / 2),
        (Domain::Torus, true) => OutputWindow::Mode((p as i64 + 1) / 2 + (p as i64 - 3) / 6),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessPair {
    pub config: WitnessConfig,
    pub u0: SpectralData,
    pub u1: SpectralData,
    pub window: OutputWindow,
}

impl WitnessPair {
    pub fn support(&self) -> &FrequencySet {
        self.u0.support()
    }

    /// `‖u₀‖_{H^s} + ‖u₁‖_{H^{s-2}}`.
    pub fn data_norm(&self, s: f64) -> Result<f64> {
        Ok(crate::spectral::sobolev_norm(&self.u0, s)?
            + crate::spectral::sobolev_norm(&self.u1, s - 2.0)?)
    }

    /// The same pair with both amplitudes multiplied by `c`.
    pub fn scaled(&self, c: f64) -> WitnessPair {
        let c = Complex64::new(c, 0.0);
        WitnessPair {
            config: self.config,
            u0: self.u0.scaled(c),
            u1: self.u1.scaled(c),
            window: self.window,
        }
    }
}

pub fn build_witness(cfg: &WitnessConfig) -> Result<WitnessPair> {
    let set = frequency_set(cfg)?;
    let amp = (cfg.n as f64).powf(-cfg.sigma);
    let u0 = SpectralData::from_fn(set.clone(), cfg.n, cfg.sigma, cfg.nodes_per_unit, |_| {
        Complex64::new(amp, 0.0)
    })?;
    let u1 = SpectralData::from_fn(set, cfg.n, cfg.sigma, cfg.nodes_per_unit, |xi| {
        Complex64::new(0.0, -amp * lambda(xi) * xi.signum())
    })?;
    Ok(WitnessPair {
        config: *cfg,
        u0,
        u1,
        window: output_window(cfg)?,
    })
}

#[derive(Serialize, Deserialize)]
struct WitnessPairJson {
    config: WitnessConfig,
    u0: SpectralData,
    u1: SpectralData,
    output_window: serde_json::Value,
}

impl Serialize for WitnessPair {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let window = match self.window {
            OutputWindow::Interval(iv) => serde_json::json!({
                "interval": [crate::interval::rat_to_f64(iv.lo), crate::interval::rat_to_f64(iv.hi)],
                "exact": [iv.lo.to_string(), iv.hi.to_string()],
            }),
            OutputWindow::Mode(k) => serde_json::json!({ "mode": k }),
        };
        WitnessPairJson {
            config: self.config,
            u0: self.u0.clone(),
            u1: self.u1.clone(),
            output_window: window,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for WitnessPair {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = WitnessPairJson::deserialize(de)?;
        let window = if let Some(k) = raw.output_window.get("mode").and_then(|v| v.as_i64()) {
            OutputWindow::Mode(k)
        } else {
            let exact = raw
                .output_window
                .get("exact")
                .and_then(|v| v.as_array())
                .ok_or_else(|| D::Error::custom("output_window needs `mode` or `exact`"))?;
            let parse = |v: &serde_json::Value| -> std::result::Result<Rational, D::Error> {
                v.as_str()
                    .and_then(|s| s.parse::<Rational>().ok())
                    .ok_or_else(|| D::Error::custom("bad rational endpoint"))
            };
            if exact.len() != 2 {
                return Err(D::Error::custom("output window needs two endpoints"));
            }
            let iv = RatInterval::new(parse(&exact[0])?, parse(&exact[1])?)
                .ok_or_else(|| D::Error::custom("inverted output window"))?;
            OutputWindow::Interval(iv)
        };
        if !raw.u0.same_grid(&raw.u1) {
            return Err(D::Error::custom("u0 and u1 live on different grids"));
        }
        Ok(WitnessPair {
            config: raw.config,
            u0: raw.u0,
            u1: raw.u1,
            window,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{propagate_linear, sobolev_norm};
    use proptest::prelude::*;

    #[test]
    fn line_even_set() {
        let cfg = WitnessConfig::new(Domain::Line, 2, 7, -1.0).unwrap();
        let set = frequency_set(&cfg).unwrap();
        assert_eq!(set.positive_intervals(), &[unit_interval(7)]);
    }

    #[test]
    fn line_odd_set_p3() {
        let cfg = WitnessConfig::new(Domain::Line, 3, 10, -1.0).unwrap();
        let set = frequency_set(&cfg).unwrap();
        let iv = set.positive_intervals();
        assert_eq!(iv[0], RatInterval::new(rat(31, 3), rat(65, 6)).unwrap());
        assert_eq!(iv[1], RatInterval::new(rat(20, 1), rat(61, 3)).unwrap());
    }

    #[test]
    fn windows() {
        let w = |d, p| output_window(&WitnessConfig::new(d, p, 16, -1.0).unwrap()).unwrap();
        assert_eq!(w(Domain::Torus, 2), OutputWindow::Mode(1));
        assert_eq!(w(Domain::Torus, 3), OutputWindow::Mode(2));
        assert_eq!(w(Domain::Torus, 9), OutputWindow::Mode(6));
        assert_eq!(
            w(Domain::Line, 9),
            OutputWindow::Interval(RatInterval::new(rat(7, 9), rat(11, 9)).unwrap())
        );
        assert_eq!(
            w(Domain::Line, 4),
            OutputWindow::Interval(RatInterval::new(rat(1, 4), rat(1, 2)).unwrap())
        );
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(WitnessConfig::new(Domain::Line, 1, 7, -1.0).is_err());
        assert!(WitnessConfig::with_sigma(Domain::Line, 2, 7, -1.0, -1.0).is_err());
        assert!(WitnessConfig::new(Domain::Torus, 2, 0, -1.0).is_err());
        // {N, N+1, 2N} collapses at N = 1.
        let cfg = WitnessConfig::new(Domain::Torus, 3, 1, -1.0).unwrap();
        assert!(build_witness(&cfg).is_err());
    }

    #[test]
    fn torus_p2_amplitudes() {
        let cfg = WitnessConfig::with_sigma(Domain::Torus, 2, 10, 0.0, 1.0).unwrap();
        let w = build_witness(&cfg).unwrap();
        for k in [-11.0, -10.0, 10.0, 11.0] {
            assert_eq!(w.u0.value_at(k).unwrap(), Complex64::new(0.1, 0.0));
        }
        let l10 = lambda(10.0);
        assert!((w.u1.value_at(10.0).unwrap() - Complex64::new(0.0, -0.1 * l10)).norm() < 1e-15);
        assert!((w.u1.value_at(-10.0).unwrap() - Complex64::new(0.0, 0.1 * l10)).norm() < 1e-15);
        assert_eq!(w.u0.hermitian_defect(), 0.0);
        assert_eq!(w.u1.hermitian_defect(), 0.0);
    }

    #[test]
    fn successive_norm_ratio_approaches_power_of_two() {
        let (s, sigma) = (-1.0, -0.5);
        let norm = |n| {
            let cfg = WitnessConfig::with_sigma(Domain::Line, 2, n, s, sigma).unwrap();
            build_witness(&cfg).unwrap().data_norm(s).unwrap()
        };
        let r = norm(2048) / norm(1024);
        assert!((r - 2f64.powf(s - sigma)).abs() < 1e-3, "ratio {r}");
    }

    #[test]
    fn first_claim_containment_exhaustive() {
        for p in (3..=25).step_by(2) {
            let t = triplet_count(p) as i64;
            let pp = p as i64;
            let reach = RatInterval::new(rat(3 * (pp - 2), pp * pp), rat(3 * (pp + 2), pp * pp))
                .unwrap();
            let window = odd_line_window(p);
            assert!(
                RatInterval::new(reach.lo * t, reach.hi * t)
                    .unwrap()
                    .contains_interval(&window),
                "p = {p}"
            );
        }
    }

    proptest! {
        #[test]
        fn velocity_to_position_ratio(
            p in 2u32..8, n in 2u64..200, torus in any::<bool>(), s in -2f64..0.5
        ) {
            let domain = if torus { Domain::Torus } else { Domain::Line };
            let mut cfg = WitnessConfig::new(domain, p, n, s).unwrap();
            cfg.nodes_per_unit = 8;
            let w = build_witness(&cfg).unwrap();
            for (a, b) in w.u0.nodes().iter().zip(w.u1.nodes()) {
                let expect = Complex64::new(0.0, -lambda(a.xi) * a.xi.signum());
                prop_assert!((b.value / a.value - expect).norm() <= 1e-12 * expect.norm());
            }
        }

        #[test]
        fn free_evolution_is_one_sided(
            p in 2u32..6, n in 2u64..100, torus in any::<bool>(), t in 0f64..5.0
        ) {
            let domain = if torus { Domain::Torus } else { Domain::Line };
            let mut cfg = WitnessConfig::new(domain, p, n, -0.7).unwrap();
            cfg.nodes_per_unit = 8;
            let w = build_witness(&cfg).unwrap();
            let amp = (n as f64).powf(-cfg.sigma);
            let l = propagate_linear(&w.u0, &w.u1, t).unwrap();
            for nd in l.nodes() {
                let phase = Complex64::from_polar(1.0, -nd.xi.signum() * t * lambda(nd.xi));
                prop_assert!((nd.value - phase * amp).norm() <= 1e-9 * amp);
            }
            prop_assert!(l.hermitian_defect() <= 1e-12 * amp * (1.0 + t * lambda(2.0 * n as f64 + 1.0)));
            prop_assert!(sobolev_norm(&l, 0.0).unwrap() > 0.0);
        }
    }
}
