//! Seeded property suites, shared by the test targets and `mitlab verify`.
//!
//! Each property is checked on a fixed number of generated cases and
//! tallied; the first few counterexamples are kept for the report.

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equi::{
    compose_chi, profile_difference_integrable, weighted_exp_integrable, DifferenceKind, Profile, Segment,
};
use crate::error::Result;
use crate::model::{Monomial, ToricModel};
use crate::oracle::{difference_integrability_2d, numeric_threshold, QuadratureConfig, VerdictKind};
use crate::rational::{self, q, Q};
use crate::sample::{self, ModelShape};
use crate::threshold::{cluster_report, jumping_spectrum, ThresholdEngine};

const KEPT_COUNTEREXAMPLES: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Exact,
    Oracle,
    Lemmas,
    All,
}

impl Suite {
    pub fn parts(self) -> &'static [Suite] {
        match self {
            Suite::All => &[Suite::Exact, Suite::Oracle, Suite::Lemmas],
            Suite::Exact => &[Suite::Exact],
            Suite::Oracle => &[Suite::Oracle],
            Suite::Lemmas => &[Suite::Lemmas],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyTally {
    pub name: String,
    pub passed: usize,
    pub total: usize,
    pub counterexamples: Vec<String>,
}

impl PropertyTally {
    fn new(name: &str) -> Self {
        PropertyTally {
            name: name.into(),
            passed: 0,
            total: 0,
            counterexamples: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else if self.counterexamples.len() < KEPT_COUNTEREXAMPLES {
            self.counterexamples.push(describe());
        }
    }

    pub fn ok(&self) -> bool {
        self.passed == self.total
    }

    pub fn summary(&self) -> String {
        format!("{}: {}/{}", self.name, self.passed, self.total)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub properties: Vec<PropertyTally>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(PropertyTally::ok)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.properties {
            out.push_str(&p.summary());
            out.push('\n');
            for c in &p.counterexamples {
                out.push_str(&format!("  counterexample: {c}\n"));
            }
        }
        out
    }
}

pub fn run(suite: Suite, seed: u64) -> Result<SuiteReport> {
    let mut properties = Vec::new();
    for part in suite.parts() {
        properties.extend(match part {
            Suite::Exact => exact_suite(seed)?,
            Suite::Oracle => oracle_suite(seed, ORACLE_CASES)?,
            Suite::Lemmas => lemma_suite(seed, LEMMA_CASES)?,
            Suite::All => unreachable!(),
        });
    }
    Ok(SuiteReport { seed, properties })
}

const EXACT_MODELS: usize = 50;
const RAYS_PER_MODEL: usize = 100;
pub const ORACLE_CASES: usize = 30;
pub const LEMMA_CASES: usize = 200;

fn small_monomial(rng: &mut ChaCha8Rng, max: u64) -> Monomial {
    sample::monomial(rng, 2, max, false)
}

fn fmt_ray(v: &[Q]) -> String {
    v.iter().map(rational::format).collect::<Vec<_>>().join(",")
}

/// Valuation split and reconstruction on `rays` random rays per model.
pub fn siu_properties(seed: u64, models: usize, rays: usize) -> Vec<PropertyTally> {
    let mut rng = sample::rng(seed);
    let shape = ModelShape {
        singular_terms: false,
        ..ModelShape::default()
    };
    let mut reconstruction = PropertyTally::new("siu-reconstruction");
    let mut residual = PropertyTally::new("siu-residual-axes");
    for _ in 0..models {
        let m = sample::model(&mut rng, &shape);
        let split = m.siu_split();
        for _ in 0..rays {
            let v = sample::ray(&mut rng);
            let whole = m.valuation_unchecked(&v);
            let divisorial: Q = split.divisor_coeffs.iter().zip(&v).map(|(c, x)| c * x).sum();
            let rest = split.residual.valuation_unchecked(&v);
            reconstruction.record(whole == &divisorial + &rest, || format!("{m} at ({})", fmt_ray(&v)));
        }
        for axis in 0..2 {
            let mut e = vec![Q::zero(); 2];
            e[axis] = Q::one();
            let r = split.residual.valuation_unchecked(&e);
            residual.record(r.is_zero(), || {
                format!("{m}: residual {} along e{}", rational::format(&r), axis + 1)
            });
        }
    }
    vec![reconstruction, residual]
}

/// `c*_{pullback}((a₁+a₂+1, a₂)) ≥ c*(a)`, with equality when the argmin
/// ray has `w₂ ≥ w₁`. Returns the inequality and the equality tallies.
pub fn pullback_properties(seed: u64, models: usize) -> Result<Vec<PropertyTally>> {
    let mut rng = sample::rng(seed);
    let mut inequality = PropertyTally::new("pullback-inequality");
    let mut equality = PropertyTally::new("pullback-equality");
    for _ in 0..models {
        let m = sample::model(&mut rng, &ModelShape::default());
        let base = ThresholdEngine::new(&m)?;
        let pulled = ThresholdEngine::new(&m.pullback_blowup())?;
        for _ in 0..4 {
            let a = small_monomial(&mut rng, 3);
            let (a1, a2) = (a.exponent(0).clone(), a.exponent(1).clone());
            let b = Monomial::new(vec![&a1 + &a2 + Q::one(), a2])?;
            let before = base.threshold(&a)?;
            let after = pulled.threshold(&b)?;
            let describe = || format!("{m}, a=({a}): {} vs pullback {}", before.value, after.value);
            inequality.record(after.value >= before.value, describe);
            if let Some(w) = &before.argmin_ray {
                if w[1] >= w[0] {
                    equality.record(after.value == before.value, describe);
                }
            }
        }
    }
    Ok(vec![inequality, equality])
}

fn exact_suite(seed: u64) -> Result<Vec<PropertyTally>> {
    let mut rng = sample::rng(seed);
    let shape = ModelShape::default();
    let mut scaling = PropertyTally::new("scaling");
    let mut scaled_membership = PropertyTally::new("scaling-membership");
    let mut mono_monotone = PropertyTally::new("monotone-in-monomial");
    let mut model_monotone = PropertyTally::new("monotone-in-model");
    let mut dcc = PropertyTally::new("spectrum-dcc");
    let mut valuation = PropertyTally::new("valuation-homogeneity");

    for _ in 0..EXACT_MODELS {
        let m = sample::model(&mut rng, &shape);
        let engine = ThresholdEngine::new(&m)?;

        let s = sample::positive_rational(&mut rng, 5, 3);
        let scaled = ThresholdEngine::new(&m.scaled(&s)?)?;
        let extra = sample::model(&mut rng, &shape).terms()[0].clone();
        let bigger = ThresholdEngine::new(&m.with_term(extra)?)?;
        for _ in 0..4 {
            let a = small_monomial(&mut rng, 4);
            let base = engine.threshold(&a)?.value;
            let expected = base.finite().map(|v| v / &s);
            let got = scaled.threshold(&a)?.value;
            scaling.record(got.finite().cloned() == expected, || {
                format!("{m} scaled by {s}, a=({a})")
            });

            let c = q(rng.random_range(0..=24), 4);
            let lhs = scaled.is_member(&a, &c)?;
            let rhs = engine.is_member(&a, &(&c * &s))?;
            scaled_membership.record(lhs == rhs, || format!("{m} scaled by {s}, a=({a}), c={c}"));

            let step = small_monomial(&mut rng, 2);
            let larger: Vec<Q> = a.exponents().iter().zip(step.exponents()).map(|(x, y)| x + y).collect();
            let larger = Monomial::new(larger)?;
            mono_monotone.record(base <= engine.threshold(&larger)?.value, || {
                format!("{m}: a=({a}) vs ({larger})")
            });

            model_monotone.record(bigger.threshold(&a)?.value <= base, || {
                format!("{m} plus a term, a=({a})")
            });
        }

        let table = jumping_spectrum(&m, 6, &Q::from_integer(4.into()))?;
        let ts = table.thresholds();
        dcc.record(ts.windows(2).all(|w| w[0] < w[1]) && ts.len() <= 49, || format!("{m}"));

        for _ in 0..10 {
            let v = sample::ray(&mut rng);
            let t = sample::positive_rational(&mut rng, 7, 3);
            let tv: Vec<Q> = v.iter().map(|x| x * &t).collect();
            let split_terms: Q = m.terms().iter().map(|term| term.weight() * term.min_pairing(&v)).sum();
            let whole = m.valuation_unchecked(&v);
            valuation.record(
                m.valuation_unchecked(&tv) == &whole * &t && whole == split_terms,
                || format!("{m} at ({}) scaled by {t}", fmt_ray(&v)),
            );
        }
    }

    let mut series = PropertyTally::new("series-cluster-law");
    for base in 2..=4u32 {
        let report = cluster_report(base, 4, 40)?;
        for row in &report.rows {
            for (k, xi) in row.xi.iter().enumerate() {
                let below = xi.0 < Q::one();
                let law = u64::from(row.m) + 1 < u64::from(base).pow(k as u32 + 1);
                series.record(below == law, || format!("M={base}, m={}, k={}", row.m, k + 1));
            }
        }
    }

    let mut out = vec![
        scaling,
        scaled_membership,
        mono_monotone,
        model_monotone,
        dcc,
        valuation,
        series,
    ];
    out.extend(pullback_properties(seed ^ 0x9e37, EXACT_MODELS)?);
    out.extend(siu_properties(seed ^ 0x51u64, 20, RAYS_PER_MODEL));
    Ok(out)
}

/// Numeric brackets against exact thresholds, plus symbolic-vs-numeric
/// difference verdicts on single-variable models.
pub fn oracle_suite(seed: u64, cases: usize) -> Result<Vec<PropertyTally>> {
    let mut rng = sample::rng(seed);
    let inputs: Vec<(ToricModel, Monomial)> = (0..cases)
        .map(|_| {
            let m = sample::model(&mut rng, &ModelShape::default());
            (m, small_monomial(&mut rng, 2))
        })
        .collect();
    let cfg = QuadratureConfig::default();
    let outcomes: Vec<Result<(bool, String)>> = inputs
        .par_iter()
        .map(|(m, a)| {
            let exact = ThresholdEngine::new(m)?.threshold(a)?.value;
            let bracket = numeric_threshold(m, a, &cfg)?;
            let ok = bracket.width() <= 0.02 && bracket.contains(exact.to_f64());
            Ok((
                ok,
                format!("{m}, a=({a}): exact {exact}, bracket [{}, {}]", bracket.lo, bracket.hi),
            ))
        })
        .collect();
    let mut brackets = PropertyTally::new("bracket-agreement");
    for o in outcomes {
        let (ok, text) = o?;
        brackets.record(ok, || text);
    }

    let slopes: Vec<(Q, Q, u32)> = (0..10)
        .map(|_| {
            let k = rng.random_range(1..=2u32);
            let n1 = q(rng.random_range(1..=12), 4);
            let n2 = if rng.random_bool(0.3) {
                n1.clone()
            } else {
                q(rng.random_range(1..=12), 4)
            };
            (n1, n2, k)
        })
        .collect();
    let consistency: Vec<Result<(bool, String)>> = slopes
        .par_iter()
        .map(|(n1, n2, k)| {
            let symbolic = profile_difference_integrable(
                &Profile::linear(n1.clone(), Q::zero())?,
                &Profile::linear(n2.clone(), Q::zero())?,
                *k,
            )
            .kind;
            let m1 = ToricModel::monomial_term(n1.clone(), &[1, 0])?;
            let m2 = ToricModel::monomial_term(n2.clone(), &[1, 0])?;
            let numeric = difference_integrability_2d(&m1, &m2, f64::from(*k - 1), &cfg)?.kind;
            let ok = (symbolic == DifferenceKind::Integrable) == (numeric == VerdictKind::Converges);
            Ok((ok, format!("slopes {n1}, {n2}, k={k}: {symbolic:?} vs {numeric:?}")))
        })
        .collect();
    let mut profiles = PropertyTally::new("profile-numeric-consistency");
    for o in consistency {
        let (ok, text) = o?;
        profiles.record(ok, || text);
    }
    Ok(vec![brackets, profiles])
}

fn shift_slopes(p: &Profile, by: &Q) -> Result<Profile> {
    let segments = p
        .segments()
        .iter()
        .map(|s| Segment {
            slope: &s.slope + by,
            to: s.to.clone(),
        })
        .collect();
    Profile::new(segments, p.tail_offset().clone(), p.log_coeff().clone())
}

/// The slope-matching and divergent-offset properties of the profile
/// calculus, plus the composition slope law and the boundary rule.
pub fn lemma_suite(seed: u64, cases: usize) -> Result<Vec<PropertyTally>> {
    let mut rng = sample::rng(seed);

    let mut matching = PropertyTally::new("slope-matching");
    for _ in 0..cases {
        let k = rng.random_range(1..=3u32);
        let (mut p1, mut p2) = sample::profile_pair(&mut rng);
        let weight = Q::from_integer(k.into());
        if *p1.tail_slope() < weight {
            // condition on ν₁ ≥ k, keeping equal tails equal
            p1 = shift_slopes(&p1, &weight)?;
            p2 = shift_slopes(&p2, &weight)?;
        }
        let v = profile_difference_integrable(&p1, &p2, k);
        let holds = v.kind == DifferenceKind::NonIntegrable || p1.tail_slope() == p2.tail_slope();
        matching.record(holds, || format!("{p1:?} vs {p2:?}, k={k}"));
    }

    let mut divergent = PropertyTally::new("divergent-offset");
    let mut slope_law = PropertyTally::new("compose-slope-law");
    for _ in 0..cases {
        let k = rng.random_range(1..=3u32);
        let a = q(rng.random_range(1..=8), rng.random_range(1..=4));
        let chi = sample::chi(&mut rng, a);
        // tail slope ν ≥ k / C₀
        let needed = Q::from_integer(k.into()) / chi.base_slope();
        let slope = needed + q(rng.random_range(0..=8), 4);
        let p = sample::profile_with_slope(&mut rng, slope, Q::zero());
        let analytic = Profile::linear(q(rng.random_range(0..=24), 4), q(rng.random_range(-8..=8), 4))?;
        let composed = compose_chi(&chi, &p)?;
        slope_law.record(*composed.tail_slope() == chi.base_slope() * p.tail_slope(), || {
            format!("{chi:?} ∘ {p:?}")
        });
        let v = profile_difference_integrable(&composed, &analytic, k);
        divergent.record(v.kind == DifferenceKind::NonIntegrable, || {
            format!("{chi:?} ∘ {p:?} vs {analytic:?}, k={k}")
        });
    }

    let mut boundary = PropertyTally::new("weighted-boundary");
    for _ in 0..cases {
        let k = rng.random_range(1..=4u32);
        let nu = q(rng.random_range(0..=20), rng.random_range(1..=4));
        let p = Profile::linear(nu.clone(), Q::zero())?;
        let expected = nu < Q::from_integer(k.into());
        boundary.record(weighted_exp_integrable(&p, k) == expected, || {
            format!("ν={}, k={k}", rational::format(&nu))
        });
    }
    Ok(vec![matching, divergent, slope_law, boundary])
}
