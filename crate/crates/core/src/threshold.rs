//! Exact monomial integrability thresholds in dimension 2.
//!
//! For a toric model with Newton valuation `V`, the monomial `z^a` lies in
//! `𝓘(cφ)₀` exactly when `c < c*(a)`, where
//!
//! ```text
//! c*(a) = inf_{v ≥ 0, v ≠ 0} ⟨v, a + 𝟙⟩ / V(v).
//! ```
//!
//! The objective is a ratio of two piecewise-linear functions on the
//! projectivised quadrant. Along `v = (1, t)` the numerator is linear and the
//! denominator is linear between consecutive breakpoints of the lower
//! envelopes, so the ratio is monotone on each piece and the infimum is
//! attained at `e₁`, `e₂` or a breakpoint. The candidate set used here is
//! every pairwise crossing inside each term, a superset of the envelope
//! breakpoints. Everything is exact rational arithmetic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::model::{LogSumTerm, Monomial, SeriesConfig, ToricModel};
use crate::rational::{self, RatStr, Q};

/// A threshold value; `Infinite` when the valuation vanishes identically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Threshold {
    Finite(Q),
    Infinite,
}

impl Threshold {
    pub fn finite(&self) -> Option<&Q> {
        match self {
            Threshold::Finite(q) => Some(q),
            Threshold::Infinite => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Threshold::Finite(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Threshold::Finite(q) => rational::to_f64(q),
            Threshold::Infinite => f64::INFINITY,
        }
    }

    /// `c < self`
    pub fn exceeds(&self, c: &Q) -> bool {
        match self {
            Threshold::Finite(q) => c < q,
            Threshold::Infinite => true,
        }
    }
}

impl PartialOrd for Threshold {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Threshold {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Threshold::Finite(a), Threshold::Finite(b)) => a.cmp(b),
            (Threshold::Finite(_), Threshold::Infinite) => Ordering::Less,
            (Threshold::Infinite, Threshold::Finite(_)) => Ordering::Greater,
            (Threshold::Infinite, Threshold::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Finite(q) => f.write_str(&rational::format(q)),
            Threshold::Infinite => f.write_str("infinity"),
        }
    }
}

impl Serialize for Threshold {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Threshold {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        if text == "infinity" {
            return Ok(Threshold::Infinite);
        }
        rational::parse(&text)
            .map(Threshold::Finite)
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub value: Threshold,
    /// Minimizing ray: `(1, 0)`, `(0, 1)` or `(1, t)`.
    #[serde(serialize_with = "ser_ray", deserialize_with = "de_ray")]
    pub argmin_ray: Option<[Q; 2]>,
    pub attained: bool,
}

fn ser_ray<S: serde::Serializer>(ray: &Option<[Q; 2]>, s: S) -> std::result::Result<S::Ok, S::Error> {
    ray.as_ref()
        .map(|r| [RatStr(r[0].clone()), RatStr(r[1].clone())])
        .serialize(s)
}

fn de_ray<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<[Q; 2]>, D::Error> {
    Ok(Option::<[RatStr; 2]>::deserialize(d)?.map(|[a, b]| [a.0, b.0]))
}

#[derive(Clone, Debug)]
struct Candidate {
    ray: [Q; 2],
    valuation: Q,
}

/// Candidate rays of one model with their valuations, reusable across
/// monomials.
#[derive(Clone, Debug)]
pub struct ThresholdEngine {
    candidates: Vec<Candidate>,
}

fn breakpoints(term: &LogSumTerm) -> Vec<Q> {
    let ms = term.monomials();
    let mut out = Vec::new();
    for (i, a) in ms.iter().enumerate() {
        for b in &ms[i + 1..] {
            let slope_gap = b.exponent(1) - a.exponent(1);
            if slope_gap.is_zero() {
                continue;
            }
            let t = (a.exponent(0) - b.exponent(0)) / slope_gap;
            if t.is_positive() {
                out.push(t);
            }
        }
    }
    out
}

impl ThresholdEngine {
    pub fn new(model: &ToricModel) -> Result<Self> {
        if model.dim() != 2 {
            return Err(Error::UnsupportedDimension(model.dim()));
        }
        let mut ts: Vec<Q> = model.terms().iter().flat_map(breakpoints).collect();
        ts.sort();
        ts.dedup();

        let mut rays = Vec::with_capacity(ts.len() + 2);
        rays.push([Q::one(), Q::zero()]);
        rays.extend(ts.into_iter().map(|t| [Q::one(), t]));
        rays.push([Q::zero(), Q::one()]);

        let candidates = rays
            .into_iter()
            .filter_map(|ray| {
                let valuation = model.valuation_unchecked(&ray);
                valuation.is_positive().then_some(Candidate { ray, valuation })
            })
            .collect();
        Ok(ThresholdEngine { candidates })
    }

    pub fn threshold(&self, a: &Monomial) -> Result<ThresholdResult> {
        if a.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: a.dim(),
            });
        }
        let shifted: Vec<Q> = a.exponents().iter().map(|e| e + Q::one()).collect();
        let mut best: Option<(Q, &Candidate)> = None;
        for cand in &self.candidates {
            let ratio = (&cand.ray[0] * &shifted[0] + &cand.ray[1] * &shifted[1]) / &cand.valuation;
            if best.as_ref().is_none_or(|(b, _)| ratio < *b) {
                best = Some((ratio, cand));
            }
        }
        Ok(match best {
            Some((value, cand)) => ThresholdResult {
                value: Threshold::Finite(value),
                argmin_ray: Some(cand.ray.clone()),
                attained: true,
            },
            None => ThresholdResult {
                value: Threshold::Infinite,
                argmin_ray: None,
                attained: false,
            },
        })
    }

    pub fn is_member(&self, a: &Monomial, c: &Q) -> Result<bool> {
        Ok(self.threshold(a)?.value.exceeds(c))
    }
}

pub fn integrability_threshold(model: &ToricModel, a: &Monomial) -> Result<ThresholdResult> {
    ThresholdEngine::new(model)?.threshold(a)
}

/// `z^a ∈ 𝓘(cφ)₀`, strict at the threshold.
pub fn monomial_membership(model: &ToricModel, a: &Monomial, c: &Q) -> Result<bool> {
    if c.is_negative() {
        return Err(Error::Precondition("c must be nonnegative".into()));
    }
    ThresholdEngine::new(model)?.is_member(a, c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumEntry {
    pub threshold: Q,
    pub witnesses: Vec<Monomial>,
}

/// Distinct monomial thresholds `c*(a) ≤ cutoff` over the box `[0, D]²`.
///
/// Only the scanned box is covered; monomials of higher degree may add
/// further values below the cutoff.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumTable {
    pub entries: Vec<SpectrumEntry>,
    pub degree_bound: u32,
    pub cutoff: Q,
}

impl SpectrumTable {
    pub fn thresholds(&self) -> Vec<Q> {
        self.entries.iter().map(|e| e.threshold.clone()).collect()
    }

    /// Columns `threshold_num, threshold_den, witness_a1, witness_a2`, one
    /// row per witness.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("threshold_num\tthreshold_den\twitness_a1\twitness_a2\n");
        for e in &self.entries {
            for w in &e.witnesses {
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\n",
                    e.threshold.numer(),
                    e.threshold.denom(),
                    rational::format(w.exponent(0)),
                    rational::format(w.exponent(1)),
                ));
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct SpectrumEntryJson {
    threshold: RatStr,
    witnesses: Vec<Vec<RatStr>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectrumJson {
    degree_bound: u32,
    cutoff: RatStr,
    entries: Vec<SpectrumEntryJson>,
}

impl Serialize for SpectrumTable {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SpectrumJson {
            degree_bound: self.degree_bound,
            cutoff: RatStr(self.cutoff.clone()),
            entries: self
                .entries
                .iter()
                .map(|e| SpectrumEntryJson {
                    threshold: RatStr(e.threshold.clone()),
                    witnesses: e
                        .witnesses
                        .iter()
                        .map(|w| w.exponents().iter().cloned().map(RatStr).collect())
                        .collect(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SpectrumTable {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = SpectrumJson::deserialize(deserializer)?;
        let entries = raw
            .entries
            .into_iter()
            .map(|e| {
                let witnesses = e
                    .witnesses
                    .into_iter()
                    .map(|w| Monomial::new(w.into_iter().map(|x| x.0).collect()))
                    .collect::<Result<Vec<_>>>()?;
                Ok(SpectrumEntry {
                    threshold: e.threshold.0,
                    witnesses,
                })
            })
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(SpectrumTable {
            entries,
            degree_bound: raw.degree_bound,
            cutoff: raw.cutoff.0,
        })
    }
}

fn box_monomials(degree_bound: u32) -> impl Iterator<Item = Monomial> {
    let d = u64::from(degree_bound);
    (0..=d).flat_map(move |a1| (0..=d).map(move |a2| Monomial::from_ints(&[a1, a2])))
}

pub fn jumping_spectrum(model: &ToricModel, degree_bound: u32, cutoff: &Q) -> Result<SpectrumTable> {
    if !cutoff.is_positive() {
        return Err(Error::Precondition("cutoff must be positive".into()));
    }
    let engine = ThresholdEngine::new(model)?;
    let mut by_value: BTreeMap<Q, Vec<Monomial>> = BTreeMap::new();
    for a in box_monomials(degree_bound) {
        if let Threshold::Finite(v) = engine.threshold(&a)?.value {
            if v <= *cutoff {
                by_value.entry(v).or_default().push(a);
            }
        }
    }
    Ok(SpectrumTable {
        entries: by_value
            .into_iter()
            .map(|(threshold, witnesses)| SpectrumEntry { threshold, witnesses })
            .collect(),
        degree_bound,
        cutoff: cutoff.clone(),
    })
}

/// Minimal generators (componentwise order) of the monomials of `𝓘(cφ)₀`
/// inside the box `[0, D]²`.
pub fn multiplier_staircase(model: &ToricModel, c: &Q, degree_bound: u32) -> Result<Vec<Monomial>> {
    if c.is_negative() {
        return Err(Error::Precondition("c must be nonnegative".into()));
    }
    let engine = ThresholdEngine::new(model)?;
    let mut members = Vec::new();
    for a in box_monomials(degree_bound) {
        if engine.is_member(&a, c)? {
            members.push(a);
        }
    }
    Ok(minimal_elements(&members))
}

/// Elements not strictly dominated by another element, in input order.
pub fn minimal_elements(set: &[Monomial]) -> Vec<Monomial> {
    set.iter()
        .filter(|a| !set.iter().any(|b| b != *a && b.divides(a)))
        .cloned()
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterRow {
    pub m: u32,
    /// `ξ(m, k)` for `k = 1..=kmax`.
    pub xi: Vec<RatStr>,
    /// Smallest `1 - ξ(m, k)` among the `k` with `ξ(m, k) < 1`.
    pub closest_gap: Option<RatStr>,
    /// Smallest `k` with `ξ(m, k) < 1`.
    pub witness_k: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterReport {
    pub base: u32,
    pub kmax: u32,
    pub rows: Vec<ClusterRow>,
    /// Every `m ≤ mmax` has some `k ≤ kmax` with `ξ(m, k) < 1`.
    pub all_witnessed: bool,
}

impl ClusterReport {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("m\tk\txi\tgap\n");
        for row in &self.rows {
            for (k, xi) in row.xi.iter().enumerate() {
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\n",
                    row.m,
                    k + 1,
                    xi,
                    rational::format(&(Q::one() - &xi.0))
                ));
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let xs: Vec<String> = row.xi.iter().map(ToString::to_string).collect();
            out.push_str(&format!("m={}: {}", row.m, xs.join(", ")));
            match (&row.witness_k, &row.closest_gap) {
                (Some(k), Some(gap)) => out.push_str(&format!("  [first below 1 at k={k}, closest gap {gap}]\n")),
                _ => out.push_str("  [no k below 1]\n"),
            }
        }
        out
    }
}

/// Thresholds `ξ(m, k)` of `z₂^m` against the single-step models
/// `log|z₁| + αₖ log(|z₁| + |z₂|^{βₖ})`.
pub fn cluster_report(base: u32, kmax: u32, mmax: u32) -> Result<ClusterReport> {
    let cfg = SeriesConfig::new(base, kmax.max(1))?;
    let engines = (1..=kmax)
        .map(|k| ThresholdEngine::new(&single_step_model(&cfg, k)))
        .collect::<Result<Vec<_>>>()?;
    let one = Q::one();
    let mut rows = Vec::with_capacity(mmax as usize + 1);
    for m in 0..=mmax {
        let a = Monomial::from_ints(&[0, u64::from(m)]);
        let mut xi = Vec::with_capacity(engines.len());
        for engine in &engines {
            let v = engine
                .threshold(&a)?
                .value
                .finite()
                .cloned()
                .expect("single-step models have positive valuation at e₁");
            xi.push(v);
        }
        let below: Vec<(u32, &Q)> = xi
            .iter()
            .enumerate()
            .filter(|(_, v)| **v < one)
            .map(|(k, v)| (k as u32 + 1, v))
            .collect();
        let witness_k = below.first().map(|(k, _)| *k);
        let closest_gap = below.iter().map(|(_, v)| &one - *v).min().map(RatStr);
        rows.push(ClusterRow {
            m,
            xi: xi.into_iter().map(RatStr).collect(),
            closest_gap,
            witness_k,
        });
    }
    let all_witnessed = rows.iter().all(|r| r.witness_k.is_some());
    Ok(ClusterReport {
        base,
        kmax,
        rows,
        all_witnessed,
    })
}

/// A power `z₂^m` separating a truncation from a comparison model at level
/// `c < 1`: `z₂^m ∈ 𝓘(c·analytic)₀` but `z₂^m ∉ 𝓘(c·φ^{(k)})₀`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapWitness {
    pub m: u32,
    pub k: u32,
    /// `c*((0, m))` of the truncation `φ^{(k)}`; the first level where it drops out.
    pub c: RatStr,
    pub analytic_threshold: Threshold,
}

/// Scans `k = 1..=depth`, `m = 0..=max_m` in that order and returns the
/// first gap witness, taking `c` at the truncation's threshold.
pub fn spectrum_gap_witness(cfg: &SeriesConfig, analytic: &ToricModel, max_m: u32) -> Result<Option<GapWitness>> {
    let comparison = ThresholdEngine::new(analytic)?;
    for k in 1..=cfg.depth() {
        let truncation = ThresholdEngine::new(&ToricModel::series(&SeriesConfig::new(cfg.base(), k)?))?;
        for m in 0..=max_m {
            let a = Monomial::from_ints(&[0, u64::from(m)]);
            let Threshold::Finite(c) = truncation.threshold(&a)?.value else {
                continue;
            };
            if c >= Q::one() {
                continue;
            }
            let analytic_threshold = comparison.threshold(&a)?.value;
            if analytic_threshold.exceeds(&c) {
                return Ok(Some(GapWitness {
                    m,
                    k,
                    c: RatStr(c),
                    analytic_threshold,
                }));
            }
        }
    }
    Ok(None)
}

/// `log|z₁| + αₖ log(|z₁| + |z₂|^{βₖ})`
pub fn single_step_model(cfg: &SeriesConfig, k: u32) -> ToricModel {
    let z1 = Monomial::from_ints(&[1, 0]);
    let zero = Q::zero();
    let z2_power = Monomial::new(vec![zero, cfg.beta(k)]).expect("nonnegative");
    ToricModel::new(
        2,
        vec![
            LogSumTerm::new(Q::one(), vec![z1.clone()]).expect("valid"),
            LogSumTerm::new(cfg.alpha(k), vec![z1, z2_power]).expect("valid"),
        ],
    )
    .expect("dimension 2")
}
