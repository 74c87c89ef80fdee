//! Property tests for the structural invariants of models, thresholds and
//! profiles.

use mitlab_core::equi::{compose_chi, weighted_exp_integrable, ChiProfile, Profile, Segment};
use mitlab_core::model::FloatModel;
use mitlab_core::rational::{self, q};
use mitlab_core::threshold::{integrability_threshold, monomial_membership, ThresholdEngine};
use mitlab_core::{LogSumTerm, Monomial, ToricModel, Q};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rat(num_max: i64, den_max: i64) -> impl Strategy<Value = Q> {
    (1..=num_max, 1..=den_max).prop_map(|(n, d)| q(n, d))
}

fn monomial(dim: usize) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0u64..=8, dim).prop_map(|e| Monomial::from_ints(&e))
}

fn singular_monomial() -> impl Strategy<Value = Monomial> {
    monomial(2).prop_filter("nonconstant", |m| m.exponents().iter().any(|e| !e.is_zero()))
}

fn term(dim: usize, singular: bool) -> BoxedStrategy<LogSumTerm> {
    let monos = if singular && dim == 2 {
        prop::collection::vec(singular_monomial(), 1..=3).boxed()
    } else {
        prop::collection::vec(monomial(dim), 1..=3).boxed()
    };
    (rat(4, 4), monos)
        .prop_map(|(w, ms)| LogSumTerm::new(w, ms).unwrap())
        .boxed()
}

fn model(dim: usize, singular: bool) -> impl Strategy<Value = ToricModel> {
    prop::collection::vec(term(dim, singular), 1..=3).prop_map(move |ts| ToricModel::new(dim, ts).unwrap())
}

fn ray(dim: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec((0i64..=32).prop_map(|n| q(n, 4)), dim)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn valuation_is_homogeneous_and_additive(m in model(3, false), v in ray(3), t in rat(9, 4)) {
        let tv: Vec<Q> = v.iter().map(|x| x * &t).collect();
        let whole = m.ray_valuation(&v).unwrap();
        prop_assert_eq!(m.ray_valuation(&tv).unwrap(), &whole * &t);
        let by_term: Q = m
            .terms()
            .iter()
            .map(|term| ToricModel::new(3, vec![term.clone()]).unwrap().ray_valuation(&v).unwrap())
            .sum();
        prop_assert_eq!(whole, by_term);
    }

    #[test]
    fn siu_split_reconstructs(m in model(2, false), rays in prop::collection::vec(ray(2), 20)) {
        let split = m.siu_split();
        for v in &rays {
            let divisorial: Q = split.divisor_coeffs.iter().zip(v).map(|(c, x)| c * x).sum();
            prop_assert_eq!(
                m.ray_valuation(v).unwrap(),
                divisorial + split.residual.ray_valuation(v).unwrap()
            );
        }
        for axis in 0..2 {
            let mut e = vec![Q::zero(); 2];
            e[axis] = Q::one();
            prop_assert!(split.residual.ray_valuation(&e).unwrap().is_zero());
        }
    }

    #[test]
    fn pullback_valuation_identity(m in model(2, false), v in ray(2)) {
        let moved = vec![v[0].clone(), &v[0] + &v[1]];
        prop_assert_eq!(
            m.pullback_blowup().ray_valuation(&v).unwrap(),
            m.ray_valuation(&moved).unwrap()
        );
    }

    #[test]
    fn log_sum_stays_within_count_bound(m in model(3, false), x in prop::collection::vec(0.0f64..40.0, 3)) {
        let fm = FloatModel::new(&m);
        let exact = m.evaluate_log_coords(&x).unwrap();
        let gap = (exact - fm.valuation(&x)).abs();
        prop_assert!(gap <= fm.log_count_bound() + 1e-9, "gap {} bound {}", gap, fm.log_count_bound());
    }

    #[test]
    fn scaling_divides_thresholds(m in model(2, true), a in monomial(2), s in rat(6, 5), c in (0i64..=40).prop_map(|n| q(n, 8))) {
        let scaled = m.scaled(&s).unwrap();
        let before = integrability_threshold(&m, &a).unwrap().value;
        let after = integrability_threshold(&scaled, &a).unwrap().value;
        prop_assert_eq!(after.finite().cloned(), before.finite().map(|v| v / &s));
        prop_assert_eq!(
            monomial_membership(&scaled, &a, &c).unwrap(),
            monomial_membership(&m, &a, &(&c * &s)).unwrap()
        );
    }

    #[test]
    fn thresholds_are_monotone(m in model(2, true), extra in term(2, true), a in monomial(2), step in monomial(2)) {
        let engine = ThresholdEngine::new(&m).unwrap();
        let base = engine.threshold(&a).unwrap().value;
        let bigger: Vec<Q> = a.exponents().iter().zip(step.exponents()).map(|(x, y)| x + y).collect();
        prop_assert!(base <= engine.threshold(&Monomial::new(bigger).unwrap()).unwrap().value);
        let more = m.with_term(extra).unwrap();
        prop_assert!(integrability_threshold(&more, &a).unwrap().value <= base);
    }

    #[test]
    fn threshold_is_a_lower_bound_on_every_ray(m in model(2, true), a in monomial(2), v in ray(2)) {
        // c*(a) · V(v) ≤ ⟨v, a + 1⟩ for every ray, with equality at the argmin
        let r = integrability_threshold(&m, &a).unwrap();
        let pairing = |w: &[Q]| -> Q { w.iter().zip(a.exponents()).map(|(x, e)| x * (e + Q::one())).sum() };
        if let Some(c) = r.value.finite() {
            prop_assert!(c * m.ray_valuation(&v).unwrap() <= pairing(&v));
            let w = r.argmin_ray.clone().unwrap();
            prop_assert_eq!(c * m.ray_valuation(&w).unwrap(), pairing(&w));
        }
    }

    #[test]
    fn rational_format_round_trips(n in -10_000i64..10_000, d in 1i64..500) {
        let v = q(n, d);
        prop_assert_eq!(rational::parse(&rational::format(&v)).unwrap(), v);
    }

    #[test]
    fn model_json_round_trips(m in model(3, false)) {
        prop_assert_eq!(ToricModel::from_json(&m.to_json()).unwrap(), m);
    }
}

fn convex_profile() -> impl Strategy<Value = Profile> {
    (
        (0i64..=16).prop_map(|n| q(n, 4)),
        prop::collection::vec(1i64..=6, 0..=2),
        1i64..=8,
        -8i64..=8,
    )
        .prop_map(|(first, increments, step, offset)| {
            let count = increments.len() + 1;
            let mut slope = first;
            let mut segments = Vec::with_capacity(count);
            for i in 0..count {
                if i > 0 {
                    slope = &slope + q(increments[i - 1], 2);
                }
                segments.push(Segment {
                    slope: slope.clone(),
                    to: q(-((count - 1 - i) as i64) * step, 2),
                });
            }
            Profile::new(segments, q(offset, 3), Q::zero()).unwrap()
        })
}

fn chi_profile() -> impl Strategy<Value = ChiProfile> {
    (convex_profile(), rat(4, 4), (0i64..=4).prop_map(|n| q(n, 2))).prop_map(|(p, base, a)| {
        let shift = base - p.tail_slope();
        let segments = p
            .segments()
            .iter()
            .map(|s| Segment {
                slope: &s.slope + &shift,
                to: s.to.clone(),
            })
            .collect::<Vec<_>>();
        // convexity keeps the later slopes above the new base slope
        ChiProfile::new(Profile::new(segments, p.tail_offset().clone(), a).unwrap()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn composition_multiplies_tail_slopes(chi in chi_profile(), p in convex_profile()) {
        let r = compose_chi(&chi, &p).unwrap();
        prop_assert_eq!(r.tail_slope(), &(chi.base_slope() * p.tail_slope()));
        // the composite is exact on the piecewise-linear parts
        for t in [q(-40, 1), q(-7, 3), q(-1, 2), Q::zero()] {
            prop_assert_eq!(r.linear_part(&t), chi.shape().linear_part(&p.linear_part(&t)));
        }
    }

    #[test]
    fn weighted_integrability_is_strict(n in 0i64..=40, d in 1i64..=4, k in 1u32..=5) {
        let nu = q(n, d);
        let p = Profile::linear(nu.clone(), Q::zero()).unwrap();
        prop_assert_eq!(weighted_exp_integrable(&p, k), nu < Q::from_integer(k.into()));
    }

    #[test]
    fn profile_json_round_trips(p in convex_profile(), chi in chi_profile()) {
        prop_assert_eq!(Profile::from_json(&p.to_json()).unwrap(), p);
        prop_assert_eq!(ChiProfile::from_json(&chi.to_json()).unwrap(), chi);
    }
}
