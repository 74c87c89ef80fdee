//! One-variable profile calculus for equisingularity questions.
//!
//! Radial subharmonic functions are modelled as `u(z) = p(log|z|)` with `p`
//! a convex piecewise-linear function plus an optional `-a·log(1 - t)` tail
//! term. With `t = log|z|` the area element is `e^{2t} dt dθ`, so
//! `∫ |z|^{2(k-1)} e^{-2u}` near the origin is `∫ e^{-2p(t) + 2kt} dt` near
//! `t = -∞`, and every question here is decided by tail data alone.

mod profile;

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

pub use profile::{ChiProfile, Profile, Segment};

use crate::error::{Error, Result};
use crate::model::ToricModel;
use crate::rational::{self, RatStr, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DifferenceKind {
    Integrable,
    NonIntegrable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TailRule {
    /// Each exponential is integrable on its own.
    BothIntegrable,
    /// The tails agree exactly, so the difference vanishes near the origin.
    IdenticalTails,
    /// The larger exponential (index into the pair) is not integrable and
    /// the other cannot cancel it.
    DominantDiverges { dominant: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailReport {
    pub weight_k: u32,
    pub slopes: [RatStr; 2],
    pub offsets: [RatStr; 2],
    pub log_coeffs: [RatStr; 2],
    pub offsets_exact: [bool; 2],
    pub rule: TailRule,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferenceVerdict {
    pub kind: DifferenceKind,
    pub reason: TailReport,
}

/// Solutions `t < 0` of `L_p(t) = u`, for the strictly increasing pieces.
fn preimages(p: &Profile, u: &Q) -> Vec<Q> {
    let mut pieces: Vec<(Q, Q)> = p.segments().iter().map(|s| (s.slope.clone(), s.to.clone())).collect();
    let last = pieces.last().cloned().expect("nonempty");
    if last.1.is_negative() {
        pieces.push((last.0, Q::zero()));
    }
    let mut out = Vec::new();
    let mut lower: Option<Q> = None;
    for (slope, end) in pieces {
        if slope.is_positive() {
            let t = &end + (u - p.linear_part(&end)) / &slope;
            let above_lower = lower.as_ref().is_none_or(|lo| t > *lo);
            if above_lower && t <= end && t.is_negative() {
                out.push(t);
            }
        }
        lower = Some(end);
    }
    out
}

/// `χ ∘ p` for a profile without log term.
///
/// The piecewise-linear parts compose exactly. The log term of `χ` carries
/// over with the same coefficient when `ν(p) > 0`: along the tail
/// `-a·log(1 - νt - b)` and `-a·log(1 - t)` differ by a bounded amount, which
/// is why the result's offset is then flagged as inexact.
pub fn compose_chi(chi: &ChiProfile, p: &Profile) -> Result<Profile> {
    if !p.log_coeff().is_zero() {
        return Err(Error::NestedLogTerm);
    }
    let outer = chi.shape();
    let mut cuts = p.interior_breakpoints();
    for u in outer.interior_breakpoints() {
        cuts.extend(preimages(p, &u));
    }
    cuts.retain(|t| t.is_negative());
    cuts.sort();
    cuts.dedup();

    let one = Q::from_integer(1.into());
    let two = Q::from_integer(2.into());
    let mut ends = cuts.clone();
    ends.push(Q::zero());
    let mut segments: Vec<Segment> = Vec::with_capacity(ends.len());
    let mut prev: Option<Q> = None;
    for end in ends {
        let probe = match &prev {
            None => &end - &one,
            Some(lo) => (lo + &end) / &two,
        };
        let slope = p.slope_after(&probe) * outer.slope_after(&p.linear_part(&probe));
        match segments.last_mut() {
            Some(last) if last.slope == slope => last.to = end.clone(),
            _ => segments.push(Segment { slope, to: end.clone() }),
        }
        prev = Some(end);
    }
    let first_end = segments[0].to.clone();
    let tail_offset = outer.linear_part(&p.linear_part(&first_end)) - &segments[0].slope * &first_end;

    let carries_log = chi.log_coeff().is_positive() && p.tail_slope().is_positive();
    let log_coeff = if carries_log {
        chi.log_coeff().clone()
    } else {
        Q::zero()
    };
    let composed = Profile::new(segments, tail_offset, log_coeff)?;
    Ok(if p.offset_exact() && chi.log_coeff().is_zero() {
        composed
    } else {
        composed.with_inexact_offset()
    })
}

/// Whether `∫ e^{-2p(t)} e^{2kt} dt` converges at `-∞`, i.e. whether
/// `|z|^{2(k-1)} e^{-2u}` is integrable near the origin. Decided by `ν < k`;
/// at `ν = k` the integrand is bounded below by a positive constant.
pub fn weighted_exp_integrable(p: &Profile, k: u32) -> bool {
    *p.tail_slope() < Q::from_integer(k.into())
}

/// Ordering of `e^{-2p}` near `t = -∞`: slope first, then log coefficient,
/// then (reversed) offset.
fn tail_growth_cmp(a: &Profile, b: &Profile) -> Ordering {
    a.tail_slope()
        .cmp(b.tail_slope())
        .then_with(|| a.log_coeff().cmp(b.log_coeff()))
        .then_with(|| b.tail_offset().cmp(a.tail_offset()))
}

/// Integrability of `|z|^{2(k-1)} |e^{-2u₁} - e^{-2u₂}|` near the origin.
///
/// Integrable when both terms are, or when the tails agree exactly. Equal
/// slopes with different (or not exactly known) offsets never cancel:
/// the difference is then comparable to the larger exponential.
pub fn profile_difference_integrable(first: &Profile, second: &Profile, k: u32) -> DifferenceVerdict {
    let pair = [first, second];
    let rule = if pair.iter().all(|p| weighted_exp_integrable(p, k)) {
        TailRule::BothIntegrable
    } else if first.same_tail(second) {
        TailRule::IdenticalTails
    } else {
        let dominant = match tail_growth_cmp(first, second) {
            Ordering::Less => 1,
            _ => 0,
        };
        TailRule::DominantDiverges { dominant }
    };
    let kind = match rule {
        TailRule::BothIntegrable | TailRule::IdenticalTails => DifferenceKind::Integrable,
        TailRule::DominantDiverges { .. } => DifferenceKind::NonIntegrable,
    };
    let rat = |f: fn(&Profile) -> &Q| pair.map(|p| RatStr(f(p).clone()));
    DifferenceVerdict {
        kind,
        reason: TailReport {
            weight_k: k,
            slopes: rat(Profile::tail_slope),
            offsets: rat(Profile::tail_offset),
            log_coeffs: rat(Profile::log_coeff),
            offsets_exact: pair.map(Profile::offset_exact),
            rule,
        },
    }
}

/// Blow-up obstruction check for a model against an analytic comparison.
///
/// Pulls the model back along `z ↦ (z₁, z₁z₂, …, z₁zₙ)`, restricts to a
/// generic line in the `z₁` direction, reparametrises the slice by `χ` and
/// compares it with `analytic` under the weight `|z₁|^{2(n-1)}`. Requires
/// `C₀ · ν(slice) ≥ n`.
pub fn equi_obstruction_pipeline(
    model: &ToricModel,
    chi: &ChiProfile,
    analytic: &Profile,
) -> Result<DifferenceVerdict> {
    let n = model.dim();
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    if !analytic.log_coeff().is_zero() {
        return Err(Error::Precondition(
            "the analytic profile must not carry a log term".into(),
        ));
    }
    let tail = model.pullback_blowup().restrict_tail(0)?;
    let product = chi.base_slope() * &tail.slope;
    let needed = Q::from_integer(n.into());
    if product < needed {
        return Err(Error::Precondition(format!(
            "C0·ν = {}·{} = {} is below n = {n}",
            rational::format(chi.base_slope()),
            rational::format(&tail.slope),
            rational::format(&product),
        )));
    }
    let mut slice = Profile::linear(tail.slope, Q::zero())?;
    if tail.bounded_correction {
        slice = slice.with_inexact_offset();
    }
    let composed = compose_chi(chi, &slice)?;
    Ok(profile_difference_integrable(&composed, analytic, n as u32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    fn lin(slope: Q, offset: Q) -> Profile {
        Profile::linear(slope, offset).unwrap()
    }

    fn seg(slope: Q, to: Q) -> Segment {
        Segment { slope, to }
    }

    #[test]
    fn compose_log_family() {
        let chi = ChiProfile::log_family(int(2), int(1)).unwrap();
        let r = compose_chi(&chi, &lin(int(3), int(0))).unwrap();
        assert_eq!(*r.tail_slope(), int(6));
        assert_eq!(*r.log_coeff(), int(1));
        assert!(!r.offset_exact());
    }

    #[test]
    fn compose_identity_keeps_profile() {
        let p = Profile::new(
            vec![seg(int(1), int(-4)), seg(int(2), int(-1)), seg(int(5), int(0))],
            q(1, 3),
            int(0),
        )
        .unwrap();
        assert_eq!(compose_chi(&ChiProfile::identity(), &p).unwrap(), p);
    }

    #[test]
    fn compose_piecewise_chi() {
        let chi =
            ChiProfile::new(Profile::new(vec![seg(int(2), int(-1)), seg(int(3), int(0))], int(0), int(0)).unwrap())
                .unwrap();
        let r = compose_chi(&chi, &lin(int(1), int(0))).unwrap();
        assert_eq!(r.segments(), &[seg(int(2), int(-1)), seg(int(3), int(0))]);
        assert_eq!(*r.tail_slope(), int(2));
        assert_eq!(*r.tail_offset(), int(0));

        // χ breakpoint at u = -1 pulled back through p = 2t + 1 lands at t = -1
        let p = lin(int(2), int(1));
        let r = compose_chi(&chi, &p).unwrap();
        assert_eq!(r.segments(), &[seg(int(4), int(-1)), seg(int(6), int(0))]);
        // χ(2t + 1) = 2(2t + 1) for 2t + 1 ≤ -1
        assert_eq!(*r.tail_offset(), int(2));
        for t in [int(-3), q(-1, 2), int(0)] {
            assert_eq!(r.linear_part(&t), chi.shape().linear_part(&p.linear_part(&t)));
        }
    }

    #[test]
    fn compose_rejects_nested_log() {
        let p = Profile::new(vec![seg(int(1), int(0))], int(0), int(1)).unwrap();
        assert!(matches!(
            compose_chi(&ChiProfile::identity(), &p),
            Err(Error::NestedLogTerm)
        ));
    }

    #[test]
    fn weighted_examples() {
        assert!(!weighted_exp_integrable(&lin(int(1), int(0)), 1));
        assert!(weighted_exp_integrable(&lin(q(1, 2), int(0)), 1));
        let with_log = Profile::new(vec![seg(int(1), int(0))], int(0), int(1)).unwrap();
        assert!(!weighted_exp_integrable(&with_log, 1));
        assert!(weighted_exp_integrable(&lin(int(1), int(0)), 2));
    }

    #[test]
    fn difference_examples() {
        let v = profile_difference_integrable(&lin(q(3, 2), int(0)), &lin(q(3, 2), int(1)), 1);
        assert_eq!(v.kind, DifferenceKind::NonIntegrable);
        assert_eq!(v.reason.rule, TailRule::DominantDiverges { dominant: 0 });

        let p = lin(int(3), int(2));
        assert_eq!(
            profile_difference_integrable(&p, &p, 1).kind,
            DifferenceKind::Integrable
        );
        assert_eq!(
            profile_difference_integrable(&p, &p, 1).reason.rule,
            TailRule::IdenticalTails
        );

        let v = profile_difference_integrable(&lin(q(1, 2), int(0)), &lin(q(2, 3), int(0)), 1);
        assert_eq!(v.kind, DifferenceKind::Integrable);
        assert_eq!(v.reason.rule, TailRule::BothIntegrable);

        let v = profile_difference_integrable(&lin(q(1, 2), int(0)), &lin(int(2), int(0)), 1);
        assert_eq!(v.reason.rule, TailRule::DominantDiverges { dominant: 1 });
    }

    #[test]
    fn identical_but_inexact_tails_do_not_cancel() {
        let p = lin(int(2), int(0));
        let v = profile_difference_integrable(&p, &p.clone().with_inexact_offset(), 1);
        assert_eq!(v.kind, DifferenceKind::NonIntegrable);
    }

    #[test]
    fn pipeline_examples() {
        // pullback of 2·log|z₁| restricts to exactly 2·log|z₁|
        let pure = ToricModel::monomial_term(int(2), &[1, 0]).unwrap();
        let divergent_chi = ChiProfile::log_family(int(1), int(1)).unwrap();
        for c1 in [int(1), int(2), int(5)] {
            let v = equi_obstruction_pipeline(&pure, &divergent_chi, &lin(c1, int(0))).unwrap();
            assert_eq!(v.kind, DifferenceKind::NonIntegrable);
        }
        let v = equi_obstruction_pipeline(&pure, &ChiProfile::identity(), &lin(int(2), int(0))).unwrap();
        assert_eq!(v.kind, DifferenceKind::Integrable);
        let v = equi_obstruction_pipeline(&pure, &ChiProfile::identity(), &lin(int(3), int(0))).unwrap();
        assert_eq!(v.kind, DifferenceKind::NonIntegrable);

        // slope 2 reached through the blow-up: log|z₁z₂| pulls back to log|z₁²z₂|
        let mixed = ToricModel::monomial_term(int(1), &[1, 1]).unwrap();
        let v = equi_obstruction_pipeline(&mixed, &divergent_chi, &lin(int(2), int(0))).unwrap();
        assert_eq!(v.kind, DifferenceKind::NonIntegrable);

        let weak = ToricModel::monomial_term(int(1), &[1, 0]).unwrap();
        let err = equi_obstruction_pipeline(&weak, &ChiProfile::identity(), &lin(int(1), int(0))).unwrap_err();
        assert!(err.to_string().contains("1·1 = 1"), "{err}");

        let log_analytic = Profile::new(vec![seg(int(2), int(0))], int(0), int(1)).unwrap();
        assert!(equi_obstruction_pipeline(&pure, &divergent_chi, &log_analytic).is_err());
    }
}
