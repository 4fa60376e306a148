//! Representations `ξ = ε₁a₁ + … + ε_p a_p` of an output frequency by the
//! witness set, the resonance parameter `β = -Σ εⱼ λ(aⱼ)` they produce, and
//! the class-count bookkeeping `(n₁, n₂, n₃, n₄)` for odd `p`.
//!
//! Slots are exchangeable, so everything is enumerated as multisets of
//! *atoms* with a multinomial multiplicity. An atom is a signed torus mode,
//! or a signed class interval on the line. Line representations are
//! patterns (sign × class per slot); the continuum of concrete tuples inside
//! a pattern is handled by exact rational ranges for `Σ εⱼaⱼ` and by
//! rigorous floating enclosures for `β`.

use crate::error::{Error, Result};
use crate::interval::{rat, rat_to_f64, Interval, RatInterval, Rational};
use crate::spectral::{lambda, lambda_prime, Domain, FrequencySet, Sign};
use crate::witness::{frequency_set, odd_line_window, output_window, triplet_count, WitnessConfig};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Upper limit on enumerated multisets or ordered tuples.
pub const ENUMERATION_BUDGET: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    /// Index of a class interval of a line set.
    Class(usize),
    /// A concrete positive torus mode.
    Mode(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub sign: Sign,
    pub slot: Slot,
}

/// Counts of slots per `(class, sign)`.
///
/// With two classes these are the four numbers `n₁` (near, +), `n₂` (near, −),
/// `n₃` (far, +) and `n₄` (far, −).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassCounts {
    pub per_class: Vec<[u32; 2]>,
}

impl ClassCounts {
    pub fn total(&self) -> u32 {
        self.per_class.iter().map(|c| c[0] + c[1]).sum()
    }

    pub fn n(&self) -> [u32; 4] {
        let get = |c: usize, s: usize| self.per_class.get(c).map_or(0, |v| v[s]);
        [get(0, 0), get(0, 1), get(1, 0), get(1, 1)]
    }
}

/// One multiset of signed slots whose sum can reach the target.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    /// Sorted canonical list of the `p` terms.
    pub terms: Vec<Term>,
    /// Number of ordered tuples collapsed into this multiset.
    pub multiplicity: u128,
    pub counts: ClassCounts,
    /// The output frequency (or window) this representation was matched against.
    pub target: RatInterval,
    /// Exact range of `Σ εⱼaⱼ` over the pattern.
    pub sum_range: RatInterval,
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            let s = match t.sign {
                Sign::Plus => "+",
                Sign::Minus => "-",
            };
            if i > 0 {
                f.write_str(" ")?;
            }
            match t.slot {
                Slot::Class(c) => write!(f, "{s}A{c}")?,
                Slot::Mode(k) => write!(f, "{s}{k}")?,
            }
        }
        write!(f, " (×{})", self.multiplicity)
    }
}

/// Enclosure of the resonance parameter over a representation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaRange {
    pub lo: f64,
    pub hi: f64,
    pub sign_definite: bool,
}

impl BetaRange {
    fn new(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            sign_definite: lo > 0.0 || hi < 0.0,
        }
    }

    pub fn contains(&self, beta: f64) -> bool {
        self.lo <= beta && beta <= self.hi
    }
}

pub(crate) fn multinomial(counts: &[u32]) -> u128 {
    let mut acc: u128 = 1;
    let mut n: u128 = 0;
    for &c in counts {
        for j in 1..=c as u128 {
            n += 1;
            acc = acc * n / j;
        }
    }
    acc
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// All multisets of size `p` over atoms with the given exact ranges whose
/// summed range meets `target`. Each result is a count vector indexed like `ranges`.
pub fn multisets_reaching(
    ranges: &[RatInterval],
    p: u32,
    target: &RatInterval,
) -> Result<Vec<Vec<u32>>> {
    let m = ranges.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    let total = binomial(p as u128 + m as u128 - 1, m as u128 - 1);
    if total > ENUMERATION_BUDGET {
        return Err(Error::Budget {
            what: "multisets",
            needed: total,
            limit: ENUMERATION_BUDGET,
        });
    }
    let mut suffix = vec![RatInterval::zero(); m + 1];
    for i in (0..m).rev() {
        suffix[i] = if i + 1 == m {
            ranges[i]
        } else {
            RatInterval {
                lo: ranges[i].lo.min(suffix[i + 1].lo),
                hi: ranges[i].hi.max(suffix[i + 1].hi),
            }
        };
    }
    let mut out = Vec::new();
    let mut counts = vec![0u32; m];
    fn rec(
        i: usize,
        remaining: u32,
        partial: RatInterval,
        ranges: &[RatInterval],
        suffix: &[RatInterval],
        target: &RatInterval,
        counts: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        let m = ranges.len();
        if i + 1 == m {
            counts[i] = remaining;
            if (partial + ranges[i].times(remaining)).intersects(target) {
                out.push(counts.clone());
            }
            counts[i] = 0;
            return;
        }
        for c in 0..=remaining {
            let next = partial + ranges[i].times(c);
            let rest = remaining - c;
            if !(next + suffix[i + 1].times(rest)).intersects(target) {
                continue;
            }
            counts[i] = c;
            rec(i + 1, rest, next, ranges, suffix, target, counts, out);
        }
        counts[i] = 0;
    }
    rec(0, p, RatInterval::zero(), ranges, &suffix, target, &mut counts, &mut out);
    Ok(out)
}

/// The atoms of a frequency set: signed terms with their exact ranges.
fn atoms(set: &FrequencySet) -> Vec<(Term, RatInterval)> {
    match set.domain() {
        Domain::Line => {
            let mut v = Vec::new();
            for (c, iv) in set.positive_intervals().iter().enumerate() {
                for sign in set_signs(set) {
                    let r = if sign == Sign::Plus { *iv } else { -*iv };
                    v.push((
                        Term {
                            sign,
                            slot: Slot::Class(c),
                        },
                        r,
                    ));
                }
            }
            v
        }
        Domain::Torus => set
            .signed_modes()
            .into_iter()
            .map(|k| {
                let sign = if k > 0 { Sign::Plus } else { Sign::Minus };
                (
                    Term {
                        sign,
                        slot: Slot::Mode(k.abs()),
                    },
                    RatInterval::point(Rational::from_integer(k)),
                )
            })
            .collect(),
    }
}

fn set_signs(set: &FrequencySet) -> Vec<Sign> {
    use crate::spectral::Mirror;
    match set.mirror() {
        Mirror::Plus => vec![Sign::Plus],
        Mirror::Minus => vec![Sign::Minus],
        Mirror::Both => vec![Sign::Plus, Sign::Minus],
    }
}

fn class_of(set: &FrequencySet, slot: Slot) -> usize {
    match slot {
        Slot::Class(c) => c,
        Slot::Mode(k) => set.class_of_mode(k).unwrap_or(0),
    }
}

fn build_representation(
    set: &FrequencySet,
    atoms: &[(Term, RatInterval)],
    counts: &[u32],
    target: RatInterval,
) -> Representation {
    let mut terms = Vec::new();
    let mut sum = RatInterval::zero();
    let mut per_class = vec![[0u32; 2]; set.class_count()];
    for ((term, range), &c) in atoms.iter().zip(counts) {
        for _ in 0..c {
            terms.push(*term);
        }
        sum = sum + range.times(c);
        let s = usize::from(term.sign == Sign::Minus);
        per_class[class_of(set, term.slot)][s] += c;
    }
    terms.sort();
    Representation {
        terms,
        multiplicity: multinomial(counts),
        counts: ClassCounts { per_class },
        target,
        sum_range: sum,
    }
}

/// Every representation of `target` by `p` signed elements of `set`.
///
/// On the torus the target is a single integer and sums must hit it exactly;
/// on the line a pattern is kept iff its range of sums meets the target interval.
///
/// ```
/// use boussinesq_lab::interval::{RatInterval, Rational};
/// use boussinesq_lab::resonance::enumerate_representations;
/// use boussinesq_lab::spectral::FrequencySet;
///
/// let set = FrequencySet::modes(vec![50, 51]).unwrap();
/// let one = RatInterval::point(Rational::from_integer(1));
/// let reps = enumerate_representations(&one, 2, &set).unwrap();
/// assert_eq!(reps.len(), 1);
/// assert_eq!(reps[0].multiplicity, 2);
/// ```
pub fn enumerate_representations(
    target: &RatInterval,
    p: u32,
    set: &FrequencySet,
) -> Result<Vec<Representation>> {
    if p < 2 {
        return Err(Error::InvalidConfig(format!("p = {p} must be at least 2")));
    }
    let atoms = atoms(set);
    let ranges: Vec<RatInterval> = atoms.iter().map(|a| a.1).collect();
    let found = multisets_reaching(&ranges, p, target)?;
    Ok(found
        .iter()
        .map(|c| build_representation(set, &atoms, c, *target))
        .collect())
}

/// Ordered enumeration over all `(2|A|)^p` torus tuples, tallied by multiset.
/// Independent of the grouped enumeration; used to cross-check multiplicities.
pub fn count_ordered_torus(
    target: i64,
    p: u32,
    set: &FrequencySet,
) -> Result<std::collections::BTreeMap<Vec<i64>, u128>> {
    let modes = set.signed_modes();
    let m = modes.len() as u128;
    let total = m.checked_pow(p).unwrap_or(u128::MAX);
    if total > ENUMERATION_BUDGET {
        return Err(Error::Budget {
            what: "ordered tuples",
            needed: total,
            limit: ENUMERATION_BUDGET,
        });
    }
    let mut tally = std::collections::BTreeMap::new();
    let mut idx = vec![0usize; p as usize];
    loop {
        let sum: i64 = idx.iter().map(|&i| modes[i]).sum();
        if sum == target {
            let mut key: Vec<i64> = idx.iter().map(|&i| modes[i]).collect();
            key.sort_unstable();
            *tally.entry(key).or_insert(0) += 1;
        }
        let mut j = 0;
        loop {
            if j == idx.len() {
                return Ok(tally);
            }
            idx[j] += 1;
            if idx[j] < modes.len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// `-ε λ(a)` extremes over `a ∈ [l, h]` of `-ε(λ(a) + μ a)`, positive `a`.
fn slot_extremes(sign: Sign, iv: Interval, mu: f64) -> (f64, f64) {
    let e = sign.as_f64();
    let g = |a: f64| -e * (lambda(a) + mu * a);
    let mut lo = g(iv.lo).min(g(iv.hi));
    let mut hi = g(iv.lo).max(g(iv.hi));
    // λ' is increasing on (0, ∞), so there is at most one critical point.
    let c = -mu;
    if lambda_prime(iv.lo) < c && c < lambda_prime(iv.hi) {
        let (mut a, mut b) = (iv.lo, iv.hi);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if lambda_prime(m) < c {
                a = m;
            } else {
                b = m;
            }
            if b - a <= f64::EPSILON * b {
                break;
            }
        }
        let v = g(0.5 * (a + b));
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi)
}

/// Lagrangian bound on `β = -Σ εⱼ λ(aⱼ)` subject to `Σ εⱼ aⱼ ∈ window`.
/// Returns `(lower, upper)`; each is a valid bound for any multiplier.
fn dual_bounds(slots: &[(Sign, Interval, u32)], window: Interval) -> (f64, f64) {
    let lower_at = |mu: f64| {
        let s: f64 = slots
            .iter()
            .map(|&(sg, iv, c)| c as f64 * slot_extremes(sg, iv, mu).0)
            .sum();
        s + (mu * window.lo).min(mu * window.hi)
    };
    let upper_at = |mu: f64| {
        let s: f64 = slots
            .iter()
            .map(|&(sg, iv, c)| c as f64 * slot_extremes(sg, iv, mu).1)
            .sum();
        s + (mu * window.lo).max(mu * window.hi)
    };
    let bound = slots
        .iter()
        .map(|&(_, iv, _)| lambda_prime(iv.hi))
        .fold(1.0, f64::max)
        * 2.0;
    // Both functions are concave/convex in μ; golden-section search.
    let golden = |f: &dyn Fn(f64) -> f64, maximize: bool| {
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        let (mut a, mut b) = (-bound, bound);
        let sgn = if maximize { 1.0 } else { -1.0 };
        let mut x1 = b - phi * (b - a);
        let mut x2 = a + phi * (b - a);
        let mut f1 = sgn * f(x1);
        let mut f2 = sgn * f(x2);
        for _ in 0..200 {
            if f1 < f2 {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + phi * (b - a);
                f2 = sgn * f(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - phi * (b - a);
                f1 = sgn * f(x1);
            }
            if b - a < 1e-13 * bound {
                break;
            }
        }
        sgn * f1.max(f2)
    };
    (golden(&lower_at, true), golden(&upper_at, false))
}

/// Enclosure of `β` for a representation.
///
/// Torus representations give `β` exactly. Line patterns combine the naive
/// interval image (monotonicity of `λ` on each class interval) with a
/// Lagrangian bound that uses the constraint `Σ εⱼaⱼ ∈ target`; the result
/// is widened to absorb rounding.
pub fn beta_range(rep: &Representation, set: &FrequencySet) -> BetaRange {
    if rep.terms.iter().all(|t| matches!(t.slot, Slot::Mode(_))) {
        let beta: f64 = rep
            .terms
            .iter()
            .map(|t| match t.slot {
                Slot::Mode(k) => -t.sign.as_f64() * lambda(k as f64),
                Slot::Class(_) => unreachable!(),
            })
            .sum();
        return BetaRange::new(beta, beta);
    }
    let ivs = set.positive_intervals();
    let mut slots: Vec<(Sign, Interval, u32)> = Vec::new();
    for t in &rep.terms {
        let Slot::Class(c) = t.slot else { unreachable!() };
        let iv = ivs[c].to_f64();
        match slots.iter_mut().find(|s| s.0 == t.sign && s.1 == iv) {
            Some(s) => s.2 += 1,
            None => slots.push((t.sign, iv, 1)),
        }
    }
    let mut naive = Interval::point(0.0);
    let mut scale = 0.0;
    for &(sg, iv, c) in &slots {
        let img = Interval::new(lambda(iv.lo), lambda(iv.hi));
        let img = if sg == Sign::Plus { -img } else { img };
        for _ in 0..c {
            naive = naive + img;
        }
        scale += c as f64 * lambda(iv.hi);
    }
    let window = rep.target.to_f64();
    let (dl, du) = dual_bounds(&slots, window);
    let slack = 1e-12 * scale + 1e-12;
    BetaRange::new(naive.lo.max(dl - slack), naive.hi.min(du + slack))
}

/// Findings for one `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceAtN {
    #[serde(rename = "N")]
    pub n: u64,
    pub representations: usize,
    pub beta_over_scale_min: Option<f64>,
    pub beta_over_scale_max: Option<f64>,
    pub violations: Vec<String>,
    /// Distance from the closest line pattern's sum range to the window.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closest_miss: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceReport {
    pub p: u32,
    pub domain: Domain,
    #[serde(rename = "N0")]
    pub n0: Option<u64>,
    #[serde(rename = "per_N")]
    pub per_n: Vec<ResonanceAtN>,
}

/// Smallest listed `N` from which every later entry passes.
pub(crate) fn effective_n0<T>(rows: &[T], n_of: impl Fn(&T) -> u64, ok: impl Fn(&T) -> bool) -> Option<u64> {
    let mut n0 = None;
    for r in rows.iter().rev() {
        if ok(r) {
            n0 = Some(n_of(r));
        } else {
            break;
        }
    }
    n0
}

/// Checks the resonance claim for one set and window: every representation
/// must have sign-definite `β` of the expected sign (negative for even `p`,
/// positive for odd `p`). Reports `|β|/N` (even) or `|β|/N²` (odd).
pub fn resonance_check(
    p: u32,
    n: u64,
    set: &FrequencySet,
    window: &RatInterval,
) -> Result<ResonanceAtN> {
    let reps = enumerate_representations(window, p, set)?;
    let odd = p % 2 == 1;
    let scale = if odd { (n * n) as f64 } else { n as f64 };
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut violations = Vec::new();
    for r in &reps {
        let b = beta_range(r, set);
        let good = if odd { b.lo > 0.0 } else { b.hi < 0.0 };
        if !good {
            violations.push(format!("{r}: beta in [{}, {}]", b.lo, b.hi));
            continue;
        }
        let (a, z) = if odd { (b.lo, b.hi) } else { (-b.hi, -b.lo) };
        lo = lo.min(a / scale);
        hi = hi.max(z / scale);
    }
    if reps.is_empty() {
        violations.push("no representation reaches the output window".into());
    }
    let closest_miss = (set.domain() == Domain::Line)
        .then(|| closest_pattern_miss(p, set, window))
        .transpose()?;
    Ok(ResonanceAtN {
        n,
        representations: reps.len(),
        beta_over_scale_min: lo.is_finite().then_some(lo),
        beta_over_scale_max: hi.is_finite().then_some(hi),
        violations,
        closest_miss,
    })
}

/// Distance from the window to the nearest sum range over all line patterns.
fn closest_pattern_miss(p: u32, set: &FrequencySet, window: &RatInterval) -> Result<f64> {
    let atoms = atoms(set);
    let ranges: Vec<RatInterval> = atoms.iter().map(|a| a.1).collect();
    let everything = RatInterval::new(Rational::from_integer(-1 << 40), Rational::from_integer(1 << 40)).unwrap();
    let all = multisets_reaching(&ranges, p, &everything)?;
    let best = all
        .iter()
        .map(|c| {
            let s = c
                .iter()
                .zip(&ranges)
                .fold(RatInterval::zero(), |acc, (&k, r)| acc + r.times(k));
            s.distance(window)
        })
        .min()
        .unwrap_or_else(|| Rational::from_integer(0));
    Ok(rat_to_f64(best))
}

/// Runs [`resonance_check`] on the witness set and window for every `N`.
pub fn verify_resonance_bounds(p: u32, domain: Domain, n_list: &[u64]) -> Result<ResonanceReport> {
    let mut per_n = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let cfg = WitnessConfig::new(domain, p, n, -1.0)?;
        let set = frequency_set(&cfg)?;
        let window = output_window(&cfg)?.as_interval();
        per_n.push(resonance_check(p, n, &set, &window)?);
    }
    let n0 = effective_n0(&per_n, |r| r.n, |r| r.violations.is_empty());
    Ok(ResonanceReport {
        p,
        domain,
        n0,
        per_n,
    })
}

/// All `(n₁, n₂, n₃, n₄)` with `Σ nᵢ = p`, `n₁ - n₂ + 2(n₃ - n₄) = 0`,
/// `n₁ > n₂`, `n₃ < n₄` and `n₂ + n₃ ≤ 2`, by exhaustive search.
///
/// ```
/// use boussinesq_lab::resonance::solve_diophantine;
/// assert_eq!(solve_diophantine(5).unwrap(), vec![[3, 1, 0, 1], [2, 0, 1, 2]]);
/// ```
pub fn solve_diophantine(p: u32) -> Result<Vec<[u32; 4]>> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::InvalidConfig(format!(
            "the class-count system is posed for odd p ≥ 3, got p = {p}"
        )));
    }
    let p = p as i64;
    let mut out = Vec::new();
    for n1 in (0..=p).rev() {
        for n2 in 0..=p - n1 {
            for n3 in 0..=p - n1 - n2 {
                let n4 = p - n1 - n2 - n3;
                if n1 - n2 + 2 * (n3 - n4) == 0 && n1 > n2 && n3 < n4 && n2 + n3 <= 2 {
                    out.push([n1 as u32, n2 as u32, n3 as u32, n4 as u32]);
                }
            }
        }
    }
    Ok(out)
}

/// Structure of an odd profile: `triplets` copies of `N + N - 2N`, plus
/// `near_pairs` of `N - N` and `far_pairs` of `2N - 2N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Profile {
    pub triplets: u32,
    pub near_pairs: u32,
    pub far_pairs: u32,
}

impl Profile {
    /// Reads a class-count tuple as a profile, if it has that shape.
    pub fn from_counts(n: [u32; 4]) -> Option<Profile> {
        let [n1, n2, n3, n4] = n;
        let triplets = n4.checked_sub(n3)?;
        (n1 == 2 * triplets + n2).then_some(Profile {
            triplets,
            near_pairs: n2,
            far_pairs: n3,
        })
    }

    pub fn counts(&self) -> [u32; 4] {
        [
            2 * self.triplets + self.near_pairs,
            self.near_pairs,
            self.far_pairs,
            self.triplets + self.far_pairs,
        ]
    }
}

/// The generic odd profiles written out case by case in `p mod 3`.
pub fn closed_form_profiles(p: u32) -> Vec<Profile> {
    let t = triplet_count(p);
    let pairs: &[(u32, u32)] = match p % 3 {
        0 => &[(0, 0)],
        1 => &[(2, 0), (1, 1), (0, 2)],
        _ => &[(1, 0), (0, 1)],
    };
    pairs
        .iter()
        .map(|&(near_pairs, far_pairs)| Profile {
            triplets: t,
            near_pairs,
            far_pairs,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaAtN {
    #[serde(rename = "N")]
    pub n: u64,
    /// Ordered sign/class patterns examined (`4^p`).
    pub patterns: u128,
    /// Ordered patterns whose sum range meets `I_p`.
    pub intersecting: u128,
    pub failures: Vec<[u32; 4]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub p: u32,
    #[serde(rename = "N0")]
    pub n0: Option<u64>,
    #[serde(rename = "per_N")]
    pub per_n: Vec<LemmaAtN>,
}

/// Exact range of `Σ εⱼaⱼ` for the odd line set at scale `N` and given counts.
pub fn odd_pattern_range(p: u32, n: u64, counts: [u32; 4]) -> Result<RatInterval> {
    let cfg = WitnessConfig::new(Domain::Line, p, n, -1.0)?;
    let set = frequency_set(&cfg)?;
    let iv = set.positive_intervals();
    Ok(iv[0].times(counts[0]) + (-iv[0]).times(counts[1]) + iv[1].times(counts[2]) + (-iv[1]).times(counts[3]))
}

/// Checks, without presupposing either lemma, that every sign/class pattern
/// whose sum range meets `I_p` has `n₁ > n₂`, `n₃ < n₄` and `n₂ + n₃ ≤ 2`.
pub fn verify_lemmas(p: u32, n_list: &[u64]) -> Result<LemmaReport> {
    if p % 2 == 0 || p < 3 {
        return Err(Error::InvalidConfig(format!("lemmas concern odd p ≥ 3, got {p}")));
    }
    let window = odd_line_window(p);
    let mut per_n = Vec::new();
    for &n in n_list {
        let cfg = WitnessConfig::new(Domain::Line, p, n, -1.0)?;
        let set = frequency_set(&cfg)?;
        let reps = enumerate_representations(&window, p, &set)?;
        let mut intersecting = 0u128;
        let mut failures = Vec::new();
        for r in &reps {
            intersecting += r.multiplicity;
            let [n1, n2, n3, n4] = r.counts.n();
            if !(n1 > n2 && n3 < n4 && n2 + n3 <= 2) {
                failures.push([n1, n2, n3, n4]);
            }
        }
        per_n.push(LemmaAtN {
            n,
            patterns: 4u128.pow(p),
            intersecting,
            failures,
        });
    }
    let n0 = effective_n0(&per_n, |r| r.n, |r| r.failures.is_empty() && r.intersecting > 0);
    Ok(LemmaReport { p, n0, per_n })
}

/// `1 - 4/p + 6/(4p²)`, the bound on `ξ` for patterns with `n₂ + n₃ ≥ 3`.
pub fn crowded_pattern_bound(p: u32) -> Rational {
    let p = p as i64;
    Rational::from_integer(1) - rat(4, p) + rat(6, 4 * p * p)
}

/// A concrete representation of `ξ ∈ I_p` by the odd line set: triplets
/// `a + a - c` sharing `ξ` equally, padded with `a - a` fillers.
/// Returns the signed terms.
pub fn represent_odd_line(p: u32, n: u64, xi: f64) -> Option<Vec<f64>> {
    let pp = p as f64;
    let t = triplet_count(p);
    let v = xi / t as f64;
    let lo_sum = 3.0 * (pp - 2.0) / (pp * pp);
    let hi_sum = 3.0 * (pp + 2.0) / (pp * pp);
    if !(lo_sum <= v && v <= hi_sum) {
        return None;
    }
    let n = n as f64;
    let y = (3.0 * (pp - 1.0) / (pp * pp) - v).clamp(0.0, 3.0 / (pp * pp));
    let a = n + 0.5 * (v + y);
    let c = 2.0 * n + y;
    let mut terms = Vec::with_capacity(p as usize);
    for _ in 0..t {
        terms.extend([a, a, -c]);
    }
    let filler = n + 3.0 * (pp - 1.0) / (2.0 * pp * pp);
    while terms.len() < p as usize {
        terms.extend([filler, -filler]);
    }
    (terms.len() == p as usize).then_some(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::unit_interval;

    fn pt(k: i64) -> RatInterval {
        RatInterval::point(Rational::from_integer(k))
    }

    #[test]
    fn torus_p2_unique_representation() {
        let set = FrequencySet::modes(vec![50, 51]).unwrap();
        let reps = enumerate_representations(&pt(1), 2, &set).unwrap();
        assert_eq!(reps.len(), 1);
        assert_eq!(reps[0].multiplicity, 2);
        assert_eq!(
            reps[0].terms,
            vec![
                Term { sign: Sign::Plus, slot: Slot::Mode(51) },
                Term { sign: Sign::Minus, slot: Slot::Mode(50) },
            ]
        );
    }

    #[test]
    fn torus_p3_unique_representation() {
        let set = FrequencySet::modes(vec![50, 51, 100]).unwrap();
        let reps = enumerate_representations(&pt(2), 3, &set).unwrap();
        assert_eq!(reps.len(), 1);
        assert_eq!(reps[0].to_string(), "+51 +51 -100 (×3)");
        assert_eq!(reps[0].counts.n(), [2, 0, 0, 1]);
    }

    #[test]
    fn torus_zero_cancellation_pairs() {
        let set = FrequencySet::modes(vec![50, 51]).unwrap();
        let reps = enumerate_representations(&pt(0), 2, &set).unwrap();
        let shown: Vec<String> = reps.iter().map(|r| r.to_string()).collect();
        assert_eq!(shown.len(), 2);
        assert!(shown.contains(&"+50 -50 (×2)".to_string()));
        assert!(shown.contains(&"+51 -51 (×2)".to_string()));
    }

    #[test]
    fn torus_betas() {
        let set = FrequencySet::modes(vec![10, 11]).unwrap();
        let r = &enumerate_representations(&pt(1), 2, &set).unwrap()[0];
        let b = beta_range(r, &set);
        assert!((b.lo - (lambda(10.0) - lambda(11.0))).abs() < 1e-12);
        assert!((b.lo + 21.0002).abs() < 1e-4);
        let set = FrequencySet::modes(vec![10, 11, 20]).unwrap();
        let r = &enumerate_representations(&pt(2), 3, &set).unwrap()[0];
        let b = beta_range(r, &set);
        assert!((b.lo - 157.5017).abs() < 1e-4, "{}", b.lo);
    }

    #[test]
    fn line_p2_beta_enclosure() {
        let set = FrequencySet::intervals(vec![unit_interval(100)]).unwrap();
        let window = RatInterval::new(rat(1, 4), rat(1, 2)).unwrap();
        let reps = enumerate_representations(&window, 2, &set).unwrap();
        assert_eq!(reps.len(), 1);
        let b = beta_range(&reps[0], &set);
        assert!(b.sign_definite);
        assert!(-b.hi > 47.0 && -b.hi >= 48.5 && -b.lo <= 102.5, "{b:?}");
    }

    #[test]
    fn multinomial_counts() {
        assert_eq!(multinomial(&[2, 1]), 3);
        assert_eq!(multinomial(&[1, 1, 1]), 6);
        assert_eq!(multinomial(&[0, 4]), 1);
    }

    #[test]
    fn diophantine_small_cases() {
        assert_eq!(solve_diophantine(3).unwrap(), vec![[2, 0, 0, 1]]);
        assert_eq!(solve_diophantine(5).unwrap(), vec![[3, 1, 0, 1], [2, 0, 1, 2]]);
        assert_eq!(
            solve_diophantine(7).unwrap(),
            vec![[4, 2, 0, 1], [3, 1, 1, 2], [2, 0, 2, 3]]
        );
        assert!(solve_diophantine(4).is_err());
    }

    #[test]
    fn budget_guard() {
        let set = FrequencySet::modes((1..=40).collect()).unwrap();
        let err = enumerate_representations(&pt(0), 12, &set).unwrap_err();
        assert!(err.is_resource());
        assert!(count_ordered_torus(0, 12, &set).unwrap_err().is_resource());
    }

    #[test]
    fn crowded_pattern_left_of_window() {
        // n₂ + n₃ = 3 with the N's cancelling: γ = 1, e.g. (5, 3, 0, 1).
        let p = 9;
        for counts in [[5, 3, 0, 1], [4, 2, 1, 2], [3, 1, 2, 3], [2, 0, 3, 4]] {
            let r = odd_pattern_range(p, 64, counts).unwrap();
            assert!(r.hi <= crowded_pattern_bound(p), "{counts:?}: {r}");
            assert!(r.hi < odd_line_window(p).lo);
        }
    }
}
