//! Toric plurisubharmonic models and the structural operations on them.
//!
//! A [`ToricModel`] stands for the germ `φ = Σⱼ λⱼ log Σᵢ |z^{a_{ji}}|` at the
//! origin of `ℂⁿ`. Everything here is exact except
//! [`ToricModel::evaluate_log_coords`], which works in double precision.

mod file;
mod float;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use float::FloatModel;

use crate::error::{Error, Result};
use crate::rational::{self, Q};

/// Exponent vector of a monomial `|z₁|^{a₁}⋯|zₙ|^{aₙ}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<Q>);

impl Monomial {
    pub fn new(exponents: Vec<Q>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::InvalidMonomial("no exponents".into()));
        }
        if let Some(e) = exponents.iter().find(|e| e.is_negative()) {
            return Err(Error::InvalidMonomial(format!(
                "negative exponent {}",
                rational::format(e)
            )));
        }
        Ok(Monomial(exponents))
    }

    pub fn from_ints(exponents: &[u64]) -> Self {
        Monomial(exponents.iter().map(|&e| Q::from_integer(BigInt::from(e))).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[Q] {
        &self.0
    }

    pub fn exponent(&self, axis: usize) -> &Q {
        &self.0[axis]
    }

    pub fn dot(&self, v: &[Q]) -> Q {
        self.0.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// Componentwise order `self ≤ other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(rational::format).collect();
        f.write_str(&parts.join(","))
    }
}

/// Parses the comma-separated form used on the command line, e.g. `0,2` or `1/2,3`.
impl FromStr for Monomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let exponents = s
            .split(',')
            .map(|part| rational::parse(part.trim()))
            .collect::<Result<Vec<_>>>()?;
        Monomial::new(exponents)
    }
}

/// One summand `λ · log Σᵢ |z^{aᵢ}|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogSumTerm {
    weight: Q,
    monomials: Vec<Monomial>,
}

impl LogSumTerm {
    pub fn new(weight: Q, monomials: Vec<Monomial>) -> Result<Self> {
        if !weight.is_positive() {
            return Err(Error::InvalidModel(format!(
                "weight {} is not positive",
                rational::format(&weight)
            )));
        }
        let Some(first) = monomials.first() else {
            return Err(Error::InvalidModel("term without monomials".into()));
        };
        let dim = first.dim();
        if let Some(m) = monomials.iter().find(|m| m.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: m.dim(),
            });
        }
        Ok(LogSumTerm { weight, monomials })
    }

    pub fn weight(&self) -> &Q {
        &self.weight
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn dim(&self) -> usize {
        self.monomials[0].dim()
    }

    /// `minᵢ ⟨v, aᵢ⟩`
    pub fn min_pairing(&self, v: &[Q]) -> Q {
        self.monomials
            .iter()
            .map(|m| m.dot(v))
            .min()
            .expect("terms are nonempty")
    }

    /// Componentwise minimum of the exponent vectors.
    pub fn min_exponents(&self) -> Vec<Q> {
        (0..self.dim())
            .map(|i| {
                self.monomials
                    .iter()
                    .map(|m| m.exponent(i).clone())
                    .min()
                    .expect("terms are nonempty")
            })
            .collect()
    }
}

/// Truncation parameters of the two-variable series
/// `log|z₁| + Σ_{k≤K} M^{-k} log(|z₁| + |z₂|^{M^{2k}})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeriesConfig {
    base: u32,
    depth: u32,
}

impl SeriesConfig {
    pub fn new(base: u32, depth: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::Precondition(format!(
                "series base M = {base} must be at least 2"
            )));
        }
        if depth < 1 {
            return Err(Error::Precondition("series truncation K must be at least 1".into()));
        }
        Ok(SeriesConfig { base, depth })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// `αₖ = M^{-k}`
    pub fn alpha(&self, k: u32) -> Q {
        Q::new(BigInt::one(), BigInt::from(self.base).pow(k))
    }

    /// `βₖ = M^{2k}`
    pub fn beta(&self, k: u32) -> Q {
        Q::from_integer(BigInt::from(self.base).pow(2 * k))
    }
}

/// Lelong data of the restriction of a model to a generic line through an axis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailData {
    pub slope: Q,
    /// The restriction differs from `slope · log|zᵢ|` by a bounded, not
    /// identically zero, function.
    pub bounded_correction: bool,
}

/// Where to take a Lelong number.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Locus {
    Origin,
    /// A point on `{z_axis = 0}` whose other coordinates are nonzero.
    AxisPoint {
        axis: usize,
    },
}

/// Divisorial part along the coordinate hyperplanes plus the residual model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiuSplit {
    pub divisor_coeffs: Vec<Q>,
    pub residual: ToricModel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricModel {
    dim: usize,
    terms: Vec<LogSumTerm>,
}

impl ToricModel {
    pub fn new(dim: usize, terms: Vec<LogSumTerm>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidModel("dimension must be positive".into()));
        }
        if let Some(t) = terms.iter().find(|t| t.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: t.dim(),
            });
        }
        Ok(ToricModel { dim, terms })
    }

    /// `weight · log|z^exponents|` as a one-term model.
    pub fn monomial_term(weight: Q, exponents: &[u64]) -> Result<Self> {
        let m = Monomial::from_ints(exponents);
        let dim = m.dim();
        ToricModel::new(dim, vec![LogSumTerm::new(weight, vec![m])?])
    }

    /// The truncated series `log|z₁| + Σ_{k=1}^{K} αₖ log(|z₁| + |z₂|^{βₖ})`.
    pub fn series(cfg: &SeriesConfig) -> Self {
        let one = Q::one();
        let zero = Q::zero();
        let z1 = Monomial(vec![one.clone(), zero.clone()]);
        let mut terms = vec![LogSumTerm {
            weight: one,
            monomials: vec![z1.clone()],
        }];
        for k in 1..=cfg.depth {
            terms.push(LogSumTerm {
                weight: cfg.alpha(k),
                monomials: vec![z1.clone(), Monomial(vec![zero.clone(), cfg.beta(k)])],
            });
        }
        ToricModel { dim: 2, terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[LogSumTerm] {
        &self.terms
    }

    /// Same model with one more summand.
    pub fn with_term(&self, term: LogSumTerm) -> Result<Self> {
        let mut terms = self.terms.clone();
        terms.push(term);
        ToricModel::new(self.dim, terms)
    }

    /// Multiplies every weight by `factor > 0`.
    pub fn scaled(&self, factor: &Q) -> Result<Self> {
        if !factor.is_positive() {
            return Err(Error::Precondition("scale factor must be positive".into()));
        }
        let terms = self
            .terms
            .iter()
            .map(|t| LogSumTerm {
                weight: &t.weight * factor,
                monomials: t.monomials.clone(),
            })
            .collect();
        Ok(ToricModel { dim: self.dim, terms })
    }

    fn check_ray(&self, v: &[Q]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        if v.iter().any(Signed::is_negative) {
            return Err(Error::InvalidRay("negative component".into()));
        }
        Ok(())
    }

    /// Newton valuation `Σⱼ λⱼ minᵢ ⟨v, a_{ji}⟩`: the growth rate of `-φ`
    /// along the logarithmic ray `|zᵢ| = e^{-s vᵢ}`.
    pub fn ray_valuation(&self, v: &[Q]) -> Result<Q> {
        self.check_ray(v)?;
        Ok(self.valuation_unchecked(v))
    }

    pub(crate) fn valuation_unchecked(&self, v: &[Q]) -> Q {
        self.terms.iter().map(|t| &t.weight * t.min_pairing(v)).sum()
    }

    pub fn point_lelong(&self, locus: Locus) -> Result<Q> {
        let v = match locus {
            Locus::Origin => vec![Q::one(); self.dim],
            Locus::AxisPoint { axis } => self.unit_vector(axis)?,
        };
        self.ray_valuation(&v)
    }

    fn unit_vector(&self, axis: usize) -> Result<Vec<Q>> {
        if axis >= self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: axis + 1,
            });
        }
        let mut v = vec![Q::zero(); self.dim];
        v[axis] = Q::one();
        Ok(v)
    }

    /// Splits off the divisorial part along the coordinate hyperplanes.
    ///
    /// Within each term the componentwise minimum exponent is factored out;
    /// its weighted sum gives the generic Lelong number along `{zᵢ = 0}`.
    pub fn siu_split(&self) -> SiuSplit {
        let mut divisor_coeffs = vec![Q::zero(); self.dim];
        let mut residual_terms = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            let floor = term.min_exponents();
            for (coeff, e) in divisor_coeffs.iter_mut().zip(&floor) {
                *coeff += &term.weight * e;
            }
            let monomials = term
                .monomials
                .iter()
                .map(|m| Monomial(m.0.iter().zip(&floor).map(|(a, f)| a - f).collect()))
                .collect();
            residual_terms.push(LogSumTerm {
                weight: term.weight.clone(),
                monomials,
            });
        }
        SiuSplit {
            divisor_coeffs,
            residual: ToricModel {
                dim: self.dim,
                terms: residual_terms,
            },
        }
    }

    /// Pullback under `z ↦ (z₁, z₁z₂, …, z₁zₙ)`: every exponent `a` becomes
    /// `(a₁ + ⋯ + aₙ, a₂, …, aₙ)`.
    pub fn pullback_blowup(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| LogSumTerm {
                weight: t.weight.clone(),
                monomials: t
                    .monomials
                    .iter()
                    .map(|m| {
                        let mut e = m.0.clone();
                        e[0] = m.0.iter().sum();
                        Monomial(e)
                    })
                    .collect(),
            })
            .collect();
        ToricModel { dim: self.dim, terms }
    }

    /// Restriction to a line parallel to axis `kept_axis` whose other
    /// coordinates are fixed generic nonzero constants.
    pub fn restrict_tail(&self, kept_axis: usize) -> Result<TailData> {
        if kept_axis >= self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: kept_axis + 1,
            });
        }
        let slope = self
            .terms
            .iter()
            .map(|t| &t.weight * &t.min_exponents()[kept_axis])
            .sum();
        let pure_power = self.terms.iter().all(|t| {
            t.monomials.len() == 1
                && t.monomials[0]
                    .0
                    .iter()
                    .enumerate()
                    .all(|(i, e)| i == kept_axis || e.is_zero())
        });
        Ok(TailData {
            slope,
            bounded_correction: !pure_power,
        })
    }

    /// `-φ` at `|zᵢ| = e^{-xᵢ}`, i.e. `-Σⱼ λⱼ log Σᵢ exp(-⟨a_{ji}, x⟩)`.
    pub fn evaluate_log_coords(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(self.to_float().neg_log(x))
    }

    pub fn to_float(&self) -> FloatModel {
        FloatModel::new(self)
    }
}

impl fmt::Display for ToricModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, t) in self.terms.iter().enumerate() {
            if j > 0 {
                f.write_str(" + ")?;
            }
            let ms: Vec<String> = t.monomials.iter().map(|m| format!("({m})")).collect();
            write!(f, "{}·log[{}]", rational::format(&t.weight), ms.join(" + "))?;
        }
        Ok(())
    }
}
