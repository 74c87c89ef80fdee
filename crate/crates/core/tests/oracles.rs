//! Cross-checks of the exact engine against independent computations:
//! dense ray scans, brute-force membership, closed forms for the series and
//! the shell quadrature.

use mitlab_core::model::{FloatModel, Locus};
use mitlab_core::oracle::{classify_convergence, difference_integrability_2d, QuadratureConfig, VerdictKind};
use mitlab_core::rational::{int, q, to_f64};
use mitlab_core::sample::{self, ModelShape};
use mitlab_core::threshold::{cluster_report, jumping_spectrum, multiplier_staircase, Threshold, ThresholdEngine};
use mitlab_core::verify;
use mitlab_core::{Monomial, SeriesConfig, ToricModel, Q};
use num_traits::One;

fn series(m: u32, k: u32) -> ToricModel {
    ToricModel::series(&SeriesConfig::new(m, k).unwrap())
}

fn mono(a: &[u64]) -> Monomial {
    Monomial::from_ints(a)
}

/// `min ⟨v, a+1⟩ / V(v)` over `v = (1, t)` and `v = (t, 1)`, `t = k/N`.
fn ray_scan(model: &ToricModel, a: &Monomial, n: i64) -> f64 {
    let fm = FloatModel::new(model);
    let shifted: Vec<f64> = a.exponents().iter().map(|e| to_f64(e) + 1.0).collect();
    let mut best = f64::INFINITY;
    for k in 0..=n {
        let t = k as f64 / n as f64;
        for v in [[1.0, t], [t, 1.0]] {
            let val = fm.valuation(&v);
            if val > 1e-12 {
                best = best.min((shifted[0] * v[0] + shifted[1] * v[1]) / val);
            }
        }
    }
    best
}

#[test]
fn dense_ray_scan_matches_exact_thresholds() {
    let mut rng = sample::rng(2024);
    let shape = ModelShape::default();
    for _ in 0..60 {
        let m = sample::model(&mut rng, &shape);
        let engine = ThresholdEngine::new(&m).unwrap();
        for a in [mono(&[0, 0]), mono(&[1, 0]), mono(&[0, 2]), mono(&[3, 1])] {
            let exact = engine.threshold(&a).unwrap().value.to_f64();
            let scanned = ray_scan(&m, &a, 4096);
            // the scan only sees a subset of rays, so it can never undercut
            assert!(scanned >= exact - 1e-9, "{m}, a=({a}): scan {scanned} < exact {exact}");
            assert!(
                scanned - exact < 5e-3 * exact.max(1.0),
                "{m}, a=({a}): scan {scanned} vs exact {exact}"
            );
        }
    }
}

#[test]
fn cluster_values_match_closed_form() {
    // ξ(m, k) = min(1, (1 + (m+1)/βₖ) / (1 + αₖ))
    for base in 2..=5u32 {
        let report = cluster_report(base, 4, 30).unwrap();
        let cfg = SeriesConfig::new(base, 4).unwrap();
        for row in &report.rows {
            for (k, xi) in row.xi.iter().enumerate() {
                let k = k as u32 + 1;
                let m1 = Q::from_integer((row.m + 1).into());
                let raw = (Q::one() + m1 / cfg.beta(k)) / (Q::one() + cfg.alpha(k));
                assert_eq!(xi.0, raw.min(Q::one()), "M={base} m={} k={k}", row.m);
            }
        }
    }
}

#[test]
fn staircase_generates_the_scanned_members() {
    let mut rng = sample::rng(77);
    let shape = ModelShape::default();
    for i in 0..40 {
        let m = if i < 4 {
            series(2, i + 1)
        } else {
            sample::model(&mut rng, &shape)
        };
        let engine = ThresholdEngine::new(&m).unwrap();
        for c in [q(1, 3), q(5, 6), int(1), q(3, 2)] {
            let gens = multiplier_staircase(&m, &c, 8).unwrap();
            for a1 in 0..=8 {
                for a2 in 0..=8 {
                    let a = mono(&[a1, a2]);
                    let member = engine.is_member(&a, &c).unwrap();
                    let generated = gens.iter().any(|g| g.divides(&a));
                    assert_eq!(member, generated, "{m}, c={c}, a=({a})");
                }
            }
            for g in &gens {
                for h in &gens {
                    assert!(g == h || !g.divides(h), "{g} divides {h}");
                }
            }
        }
    }
}

#[test]
fn truncated_series_ideal_at_one_is_generated_by_z1() {
    // the e₁ ray caps c*((0, m)) at 1, so no pure power of z₂ survives at c = 1
    for k in 1..=6 {
        assert_eq!(
            multiplier_staircase(&series(2, k), &int(1), 12).unwrap(),
            vec![mono(&[1, 0])]
        );
        for m in 0..200 {
            let t = ThresholdEngine::new(&series(2, k))
                .unwrap()
                .threshold(&mono(&[0, m]))
                .unwrap();
            assert!(t.value <= Threshold::Finite(int(1)));
        }
    }
}

#[test]
fn series_spectrum_frozen() {
    // c*(a) = min(a₁ + 1, (a₁ + 1 + (a₂ + 1)/4) / (3/2)) by hand
    let table = jumping_spectrum(&series(2, 1), 2, &int(2)).unwrap();
    assert_eq!(table.thresholds(), vec![q(5, 6), int(1), q(3, 2), q(5, 3), q(11, 6)]);
    assert_eq!(table.entries[0].witnesses, vec![mono(&[0, 0])]);
    assert_eq!(table.entries[1].witnesses, vec![mono(&[0, 1]), mono(&[0, 2])]);
}

#[test]
fn lelong_numbers_match_radial_limit() {
    for k in 1..=6 {
        let m = series(2, k);
        let exact = m.point_lelong(Locus::Origin).unwrap();
        assert_eq!(exact, int(2) - q(1, 1 << k));
        // -φ(e^{-s}, e^{-s}) / s → ν as s → ∞
        let s = 1.0e7;
        let radial = m.evaluate_log_coords(&[s, s]).unwrap() / s;
        assert!((radial - to_f64(&exact)).abs() < 1e-6, "K={k}: {radial}");
        assert_eq!(m.point_lelong(Locus::AxisPoint { axis: 0 }).unwrap(), int(1));
    }
}

/// `-2 min_θ g(θ)` on the unit simplex, by scanning `θ = (t, 1 - t)`.
fn scanned_rate(model: &ToricModel, a: &Monomial, c: f64) -> f64 {
    let fm = FloatModel::new(model);
    let shifted: Vec<f64> = a.exponents().iter().map(|e| to_f64(e) + 1.0).collect();
    let n = 20_000;
    (0..=n)
        .map(|i| {
            let t = i as f64 / n as f64;
            let x = [t, 1.0 - t];
            shifted[0] * x[0] + shifted[1] * x[1] - c * fm.valuation(&x)
        })
        .fold(f64::INFINITY, f64::min)
        * -2.0
}

#[test]
fn fitted_rate_tracks_the_valuation_limit() {
    let mut rng = sample::rng(5);
    let cfg = QuadratureConfig {
        shell_count: 400,
        ..QuadratureConfig::default()
    };
    for _ in 0..8 {
        let m = sample::model(&mut rng, &ModelShape::default());
        let a = sample::monomial(&mut rng, 2, 2, false);
        let exact = ThresholdEngine::new(&m).unwrap().threshold(&a).unwrap().value.to_f64();
        for c in [0.5 * exact, 1.5 * exact] {
            let v = classify_convergence(&m, &a, c, &cfg).unwrap();
            let expected = scanned_rate(&m, &a, c);
            assert!(
                (v.fitted_rate - expected).abs() < 0.01,
                "{m}, a=({a}), c={c}: {} vs {expected}",
                v.fitted_rate
            );
            let kind = if c < exact {
                VerdictKind::Converges
            } else {
                VerdictKind::Diverges
            };
            assert_eq!(v.kind, kind);
        }
    }
}

fn rank(kind: VerdictKind) -> u8 {
    match kind {
        VerdictKind::Converges => 0,
        VerdictKind::Inconclusive => 1,
        VerdictKind::Diverges => 2,
    }
}

#[test]
fn classification_is_monotone_in_c() {
    let mut rng = sample::rng(31);
    let cfg = QuadratureConfig::default();
    for _ in 0..6 {
        let m = sample::model(&mut rng, &ModelShape::default());
        let a = sample::monomial(&mut rng, 2, 2, false);
        let exact = ThresholdEngine::new(&m).unwrap().threshold(&a).unwrap().value.to_f64();
        let mut last = 0;
        for i in 0..=16 {
            let c = exact * i as f64 / 8.0;
            let r = rank(classify_convergence(&m, &a, c, &cfg).unwrap().kind);
            assert!(r >= last, "{m}, a=({a}): verdict fell back at c={c}");
            last = r;
        }
    }
}

#[test]
fn brackets_agree_on_several_seeds() {
    for seed in 1..=5 {
        let tallies = verify::oracle_suite(seed, verify::ORACLE_CASES).unwrap();
        for t in &tallies {
            assert!(t.ok(), "seed {seed}: {} {:?}", t.summary(), t.counterexamples);
        }
    }
}

#[test]
fn series_difference_against_log_z1_diverges() {
    let log_z1 = ToricModel::monomial_term(int(1), &[1, 0]).unwrap();
    let v = difference_integrability_2d(&series(2, 2), &log_z1, 0.0, &QuadratureConfig::default()).unwrap();
    assert_eq!(v.kind, VerdictKind::Diverges);
    // the same model against itself cancels exactly
    let v = difference_integrability_2d(&series(2, 2), &series(2, 2), 0.0, &QuadratureConfig::default()).unwrap();
    assert_eq!(v.kind, VerdictKind::Converges);
}

#[test]
fn three_dimensional_brackets_land_within_one_width() {
    use mitlab_core::oracle::numeric_threshold;
    use mitlab_core::LogSumTerm;
    let term = |w: i64, ms: &[&[u64]]| LogSumTerm::new(int(w), ms.iter().map(|a| mono(a)).collect()).unwrap();
    // hand-computed: Σ (aᵢ+1)/dᵢ for the diagonal ones, the z₁ factor for the last
    let cases = [
        (
            vec![term(1, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])],
            mono(&[0, 0, 0]),
            3.0,
        ),
        (
            vec![term(1, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])],
            mono(&[1, 0, 0]),
            4.0,
        ),
        (
            vec![term(1, &[&[2, 0, 0], &[0, 3, 0], &[0, 0, 5]])],
            mono(&[0, 0, 0]),
            31.0 / 30.0,
        ),
        (
            vec![term(1, &[&[1, 0, 0]]), term(1, &[&[0, 1, 0], &[0, 0, 2]])],
            mono(&[0, 0, 0]),
            1.0,
        ),
    ];
    let cfg = QuadratureConfig::default();
    for (terms, a, exact) in cases {
        let m = ToricModel::new(3, terms).unwrap();
        let b = numeric_threshold(&m, &a, &cfg).unwrap();
        let w = b.width();
        assert!(
            b.lo - w <= exact && exact <= b.hi + w,
            "{m}, a=({a}): [{}, {}] vs {exact}",
            b.lo,
            b.hi
        );
    }
}
