use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, RatStr, Q};

/// Linear piece of a profile, valid up to the breakpoint `to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub slope: Q,
    pub to: Q,
}

/// Radial model `u(z) = p(log|z|)` with
/// `p(t) = L(t) - a·log(1 - t)` on `(-∞, 0]`.
///
/// `L` is convex piecewise-linear: the first segment runs from `-∞` with
/// slope `ν` (the Lelong number) and value `ν t + b`; later segments follow
/// continuously. The last segment extends past its breakpoint when needed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    segments: Vec<Segment>,
    tail_offset: Q,
    log_coeff: Q,
    offset_exact: bool,
}

impl Profile {
    pub fn new(segments: Vec<Segment>, tail_offset: Q, log_coeff: Q) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidProfile(msg));
        if segments.is_empty() {
            return bad("no segments".into());
        }
        if log_coeff.is_negative() {
            return bad("log_coeff must be nonnegative".into());
        }
        for s in &segments {
            if s.slope.is_negative() {
                return bad(format!("negative slope {}", rational::format(&s.slope)));
            }
            if s.to.is_positive() {
                return bad(format!("breakpoint {} is positive", rational::format(&s.to)));
            }
        }
        for w in segments.windows(2) {
            if w[1].to <= w[0].to {
                return bad("breakpoints must be strictly increasing".into());
            }
            if w[1].slope < w[0].slope {
                return bad("slopes must be nondecreasing (convexity)".into());
            }
        }
        Ok(Profile {
            segments,
            tail_offset,
            log_coeff,
            offset_exact: true,
        })
    }

    /// `p(t) = slope · t + offset`.
    pub fn linear(slope: Q, offset: Q) -> Result<Self> {
        Profile::new(vec![Segment { slope, to: Q::zero() }], offset, Q::zero())
    }

    /// Marks the tail offset as known only up to a bounded error.
    pub fn with_inexact_offset(mut self) -> Self {
        self.offset_exact = false;
        self
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// `ν`, the slope of the tail.
    pub fn tail_slope(&self) -> &Q {
        &self.segments[0].slope
    }

    pub fn tail_offset(&self) -> &Q {
        &self.tail_offset
    }

    pub fn log_coeff(&self) -> &Q {
        &self.log_coeff
    }

    pub fn offset_exact(&self) -> bool {
        self.offset_exact
    }

    /// Value of the piecewise-linear part `L` at any `t`.
    pub fn linear_part(&self, t: &Q) -> Q {
        let first = &self.segments[0];
        if *t <= first.to {
            return &first.slope * t + &self.tail_offset;
        }
        let mut at = first.to.clone();
        let mut value = &first.slope * &first.to + &self.tail_offset;
        for seg in &self.segments[1..] {
            if *t <= seg.to {
                return value + &seg.slope * (t - &at);
            }
            value += &seg.slope * (&seg.to - &at);
            at = seg.to.clone();
        }
        let last = self.segments.last().expect("nonempty");
        value + &last.slope * (t - &at)
    }

    /// Slope of `L` just to the right of `t`.
    pub fn slope_after(&self, t: &Q) -> &Q {
        self.segments
            .iter()
            .find(|s| *t < s.to)
            .map(|s| &s.slope)
            .unwrap_or(&self.segments.last().expect("nonempty").slope)
    }

    /// Breakpoints strictly inside the domain, i.e. all but a final `0`.
    pub fn interior_breakpoints(&self) -> Vec<Q> {
        let n = self.segments.len();
        self.segments[..n - 1].iter().map(|s| s.to.clone()).collect()
    }

    /// Tails coincide exactly: same slope, offset and log coefficient, with
    /// both offsets known exactly.
    pub fn same_tail(&self, other: &Profile) -> bool {
        self.offset_exact
            && other.offset_exact
            && self.tail_slope() == other.tail_slope()
            && self.tail_offset == other.tail_offset
            && self.log_coeff == other.log_coeff
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ProfileFile = serde_json::from_str(text)?;
        file.into_profile()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ProfileFile::from(self)).expect("profile serializes")
    }
}

/// Convex increasing reparametrisation `χ(t) = L(t) - a·log(1 - t)` with
/// `χ'(t) → C₀ > 0` as `t → -∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiProfile {
    shape: Profile,
}

impl ChiProfile {
    pub fn new(shape: Profile) -> Result<Self> {
        if !shape.tail_slope().is_positive() {
            return Err(Error::InvalidProfile("χ needs a positive base slope".into()));
        }
        Ok(ChiProfile { shape })
    }

    /// `χ(t) = C₀ t - a·log(1 - t)`.
    pub fn log_family(base_slope: Q, log_coeff: Q) -> Result<Self> {
        ChiProfile::new(Profile::new(
            vec![Segment {
                slope: base_slope,
                to: Q::zero(),
            }],
            Q::zero(),
            log_coeff,
        )?)
    }

    pub fn identity() -> Self {
        ChiProfile::log_family(Q::one(), Q::zero()).expect("valid")
    }

    pub fn base_slope(&self) -> &Q {
        self.shape.tail_slope()
    }

    pub fn log_coeff(&self) -> &Q {
        self.shape.log_coeff()
    }

    pub fn shape(&self) -> &Profile {
        &self.shape
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ChiFile = serde_json::from_str(text)?;
        let segments = match file.segments {
            Some(s) if !s.is_empty() => s,
            _ => vec![SegmentFile {
                slope: file.base_slope.clone(),
                to: RatStr(Q::zero()),
            }],
        };
        let shape = ProfileFile {
            segments,
            tail_offset: file.tail_offset,
            log_coeff: file.log_coeff,
        }
        .into_profile()?;
        if *shape.tail_slope() != file.base_slope.0 {
            return Err(Error::InvalidProfile(format!(
                "base_slope {} differs from first segment slope {}",
                file.base_slope,
                rational::format(shape.tail_slope())
            )));
        }
        ChiProfile::new(shape)
    }

    pub fn to_json(&self) -> String {
        let p = ProfileFile::from(&self.shape);
        serde_json::to_string(&ChiFile {
            base_slope: RatStr(self.base_slope().clone()),
            segments: Some(p.segments),
            tail_offset: p.tail_offset,
            log_coeff: p.log_coeff,
        })
        .expect("chi serializes")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SegmentFile {
    slope: RatStr,
    to: RatStr,
}

fn zero_rat() -> RatStr {
    RatStr(Q::zero())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileFile {
    segments: Vec<SegmentFile>,
    #[serde(default = "zero_rat")]
    tail_offset: RatStr,
    #[serde(default = "zero_rat")]
    log_coeff: RatStr,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChiFile {
    base_slope: RatStr,
    #[serde(default)]
    segments: Option<Vec<SegmentFile>>,
    #[serde(default = "zero_rat")]
    tail_offset: RatStr,
    #[serde(default = "zero_rat")]
    log_coeff: RatStr,
}

impl ProfileFile {
    fn into_profile(self) -> Result<Profile> {
        Profile::new(
            self.segments
                .into_iter()
                .map(|s| Segment {
                    slope: s.slope.0,
                    to: s.to.0,
                })
                .collect(),
            self.tail_offset.0,
            self.log_coeff.0,
        )
    }
}

impl From<&Profile> for ProfileFile {
    fn from(p: &Profile) -> Self {
        ProfileFile {
            segments: p
                .segments
                .iter()
                .map(|s| SegmentFile {
                    slope: RatStr(s.slope.clone()),
                    to: RatStr(s.to.clone()),
                })
                .collect(),
            tail_offset: RatStr(p.tail_offset.clone()),
            log_coeff: RatStr(p.log_coeff.clone()),
        }
    }
}
