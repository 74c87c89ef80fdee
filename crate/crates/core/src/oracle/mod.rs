//! Numerical integrability oracle.
//!
//! Substituting `|zᵢ| = e^{-xᵢ}` turns `∫_{Δⁿ} |z^a|² e^{-2cφ} dλ` into
//! `(2π)ⁿ ∫_{x ≥ 0} exp(-2 g(x)) dx` with
//! `g(x) = ⟨a + 𝟙, x⟩ - c · (-φ)(x)`. The orthant is cut into unit
//! `‖x‖₁`-shells; since `g` is asymptotically positively homogeneous the
//! shell masses `Sⱼ` grow or decay geometrically, and the least-squares slope
//! of `log Sⱼ` over the last shells decides convergence. The factor `(2π)ⁿ`
//! is dropped throughout.
//!
//! This module never looks at thresholds computed by
//! [`crate::threshold`]; the two are meant to cross-check each other.

mod grid;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{FloatModel, Monomial, ToricModel};
use crate::rational::to_f64;
use grid::{unit_rule, SimplexRule};

pub use log_float::round6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Number of shells `J`; shell `j` is `{j ≤ ‖x‖₁ < j + 1}`.
    pub shell_count: usize,
    /// Gauss–Legendre order along `s` on each shell.
    pub radial_nodes: usize,
    /// Gauss–Legendre order on each angular sub-panel (dimension 2).
    pub angular_nodes: usize,
    /// Geometric grading levels per half-panel (dimension 2).
    pub grading_levels: usize,
    /// Order per collapsed axis on the simplex (dimension > 2).
    pub simplex_nodes: usize,
    /// Shells used by the slope fit.
    pub tail_window: usize,
    /// `δ`: slopes within `[-δ, δ]` are inconclusive.
    pub decay_margin: f64,
    pub bisection_iters: u32,
    /// Bisection probes fit the `tail_window` shells ending here. Shell
    /// masses carry a polynomial prefactor `jᵖ` that biases the fitted slope
    /// by about `p/j`, so probes look much further out than `shell_count`;
    /// the cost per probe does not depend on the depth.
    pub probe_depth: usize,
    /// Probe depth in dimension ≥ 3. The collapsed simplex rule cannot
    /// resolve the kinks of the integrand once the peak is much narrower
    /// than the node spacing, which biases the threshold upwards; this depth
    /// balances that against the `p/j` bias at the default `simplex_nodes`.
    pub simplex_probe_depth: usize,
    /// Bisection stops once the bracket is this narrow.
    pub bracket_width: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            shell_count: 24,
            radial_nodes: 16,
            angular_nodes: 8,
            grading_levels: 8,
            simplex_nodes: 72,
            tail_window: 5,
            decay_margin: 0.05,
            bisection_iters: 12,
            probe_depth: 256,
            simplex_probe_depth: 48,
            bracket_width: 1.0 / 64.0,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.into()));
        if self.tail_window < 2 {
            return bad("tail_window must be at least 2");
        }
        if self.shell_count <= self.tail_window {
            return bad("shell_count must exceed tail_window");
        }
        if self.probe_depth.min(self.simplex_probe_depth) <= self.tail_window {
            return bad("probe depths must exceed tail_window");
        }
        if !(self.decay_margin > 0.0) {
            return bad("decay_margin must be positive");
        }
        if self.radial_nodes == 0 || self.angular_nodes == 0 || self.simplex_nodes == 0 {
            return bad("node counts must be positive");
        }
        if !(self.bracket_width >= 0.0) {
            return bad("bracket_width must be nonnegative");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    Converges,
    Diverges,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceVerdict {
    pub kind: VerdictKind,
    /// Least-squares slope of `log Sⱼ` against `j` over the tail window.
    #[serde(with = "log_float")]
    pub fitted_rate: f64,
    /// `log Σⱼ Sⱼ` over all computed shells.
    #[serde(with = "log_float")]
    pub log_estimate: f64,
    /// `log Sⱼ` per shell.
    #[serde(with = "log_floats")]
    pub shells: Vec<f64>,
}

/// Bisection bracket around a numerically located threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdBracket {
    #[serde(with = "log_float")]
    pub lo: f64,
    #[serde(with = "log_float")]
    pub hi: f64,
    pub lo_kind: VerdictKind,
    pub hi_kind: VerdictKind,
    pub probes: usize,
}

impl ThresholdBracket {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, c: f64) -> bool {
        self.lo <= c && c <= self.hi
    }
}

/// Precomputed nodes for one model (or pair of models).
struct ShellGrid {
    dim: usize,
    angular: SimplexRule,
    radial: Vec<(f64, f64)>,
}

impl ShellGrid {
    fn new(dim: usize, cuts: &[f64], cfg: &QuadratureConfig) -> Self {
        let angular = if dim == 2 {
            SimplexRule::segment(cuts, cfg.angular_nodes, cfg.grading_levels)
        } else {
            SimplexRule::collapsed(dim, cfg.simplex_nodes)
        };
        ShellGrid {
            dim,
            angular,
            radial: unit_rule(cfg.radial_nodes),
        }
    }

    fn for_model(model: &FloatModel, cfg: &QuadratureConfig) -> Self {
        let cuts = if model.dim() == 2 {
            model.tie_points_2d()
        } else {
            Vec::new()
        };
        ShellGrid::new(model.dim(), &cuts, cfg)
    }

    /// `log ∫_{shell j} exp(log_f(x)) dx`, with the sum kept in log space.
    fn shell_log<F: Fn(&[f64]) -> f64>(&self, j: usize, log_f: &F, buf: &mut Vec<f64>) -> Result<f64> {
        buf.clear();
        let mut x = vec![0.0; self.dim];
        for &(u, wu) in &self.radial {
            let s = j as f64 + u;
            let radial_log = wu.ln() + (self.dim - 1) as f64 * s.ln();
            for i in 0..self.angular.len() {
                for (xi, th) in x.iter_mut().zip(self.angular.direction(i)) {
                    *xi = s * th;
                }
                let v = log_f(&x);
                if v.is_nan() || v == f64::INFINITY {
                    return Err(Error::NonFiniteIntegrand { x });
                }
                buf.push(v + radial_log + self.angular.log_weights[i]);
            }
        }
        Ok(log_sum_exp(buf))
    }

    fn shell_logs<F: Fn(&[f64]) -> f64>(&self, shells: std::ops::Range<usize>, log_f: &F) -> Result<Vec<f64>> {
        let mut buf = Vec::with_capacity(self.radial.len() * self.angular.len());
        shells.map(|j| self.shell_log(j, log_f, &mut buf)).collect()
    }
}

pub(crate) fn log_sum_exp(values: &[f64]) -> f64 {
    let top = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = values.iter().map(|v| (v - top).exp()).sum();
    top + sum.ln()
}

/// `log` of `|z^a|² e^{-2cφ}` times the polydisk measure factor `e^{-2Σxᵢ}`.
fn threshold_integrand<'a>(model: &'a FloatModel, shifted: &'a [f64], c: f64) -> impl Fn(&[f64]) -> f64 + 'a {
    move |x: &[f64]| {
        let linear: f64 = shifted.iter().zip(x).map(|(a, xi)| a * xi).sum();
        -2.0 * (linear - c * model.neg_log(x))
    }
}

fn shifted_exponents(model: &ToricModel, a: &Monomial) -> Result<Vec<f64>> {
    if a.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            found: a.dim(),
        });
    }
    Ok(a.exponents().iter().map(|e| to_f64(e) + 1.0).collect())
}

fn check_c(c: f64) -> Result<()> {
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::Precondition(format!("c = {c} must be finite and nonnegative")));
    }
    Ok(())
}

/// `log Sⱼ` for the integrand `|z^a|² e^{-2cφ}`.
pub fn shell_log_integral(model: &ToricModel, a: &Monomial, c: f64, j: usize, cfg: &QuadratureConfig) -> Result<f64> {
    check_c(c)?;
    let shifted = shifted_exponents(model, a)?;
    let fm = model.to_float();
    let grid = ShellGrid::for_model(&fm, cfg);
    let f = threshold_integrand(&fm, &shifted, c);
    grid.shell_logs(j..j + 1, &f).map(|v| v[0])
}

/// `log S₀, …, log S_{J-1}`.
pub fn shell_log_integrals(model: &ToricModel, a: &Monomial, c: f64, cfg: &QuadratureConfig) -> Result<Vec<f64>> {
    check_c(c)?;
    let shifted = shifted_exponents(model, a)?;
    let fm = model.to_float();
    let grid = ShellGrid::for_model(&fm, cfg);
    let f = threshold_integrand(&fm, &shifted, c);
    grid.shell_logs(0..cfg.shell_count, &f)
}

/// Least-squares slope of `ys` against consecutive integers. Zero shells
/// (`-∞`) are skipped; with fewer than two finite points the slope is `-∞`.
fn tail_slope(ys: &[f64], first: usize) -> f64 {
    let pts: Vec<(f64, f64)> = ys
        .iter()
        .enumerate()
        .filter(|(_, y)| y.is_finite())
        .map(|(i, &y)| ((first + i) as f64, y))
        .collect();
    if pts.len() < 2 {
        return f64::NEG_INFINITY;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn kind_for(rate: f64, margin: f64) -> VerdictKind {
    if rate < -margin {
        VerdictKind::Converges
    } else if rate > margin {
        VerdictKind::Diverges
    } else {
        VerdictKind::Inconclusive
    }
}

fn verdict_from_shells(shells: Vec<f64>, cfg: &QuadratureConfig) -> ConvergenceVerdict {
    let first = shells.len() - cfg.tail_window;
    let fitted_rate = tail_slope(&shells[first..], first);
    ConvergenceVerdict {
        kind: kind_for(fitted_rate, cfg.decay_margin),
        fitted_rate,
        log_estimate: log_sum_exp(&shells),
        shells,
    }
}

pub fn classify_convergence(
    model: &ToricModel,
    a: &Monomial,
    c: f64,
    cfg: &QuadratureConfig,
) -> Result<ConvergenceVerdict> {
    cfg.validate()?;
    let shells = shell_log_integrals(model, a, c, cfg)?;
    Ok(verdict_from_shells(shells, cfg))
}

/// Bisection over `c` for a fixed model and monomial, reusing one grid.
struct Prober<'a> {
    grid: ShellGrid,
    model: FloatModel,
    shifted: Vec<f64>,
    cfg: &'a QuadratureConfig,
    probes: usize,
}

impl Prober<'_> {
    /// Verdict from the tail window only, and whether `c` counts as below the
    /// threshold: convergent, or inconclusive with a negative slope.
    fn probe(&mut self, c: f64) -> Result<(VerdictKind, bool)> {
        self.probes += 1;
        let f = threshold_integrand(&self.model, &self.shifted, c);
        let depth = if self.grid.dim == 2 {
            self.cfg.probe_depth
        } else {
            self.cfg.simplex_probe_depth
        };
        let first = depth - self.cfg.tail_window;
        let tail = self.grid.shell_logs(first..depth, &f)?;
        let rate = tail_slope(&tail, first);
        let kind = kind_for(rate, self.cfg.decay_margin);
        let below = match kind {
            VerdictKind::Converges => true,
            VerdictKind::Diverges => false,
            VerdictKind::Inconclusive => rate < 0.0,
        };
        Ok((kind, below))
    }
}

const MAX_DOUBLINGS: u32 = 12;

/// Brackets the threshold of `z^a` by bisection on `c`.
///
/// The upper end starts at 1 and doubles until the integral diverges. An
/// inconclusive probe is placed by the sign of its fitted slope, so the
/// bracket shrinks onto the zero crossing of the decay rate, which is the
/// threshold itself.
pub fn numeric_threshold(model: &ToricModel, a: &Monomial, cfg: &QuadratureConfig) -> Result<ThresholdBracket> {
    cfg.validate()?;
    let fm = model.to_float();
    let mut prober = Prober {
        grid: ShellGrid::for_model(&fm, cfg),
        shifted: shifted_exponents(model, a)?,
        model: fm,
        cfg,
        probes: 0,
    };

    let (mut lo, mut lo_kind) = (0.0, prober.probe(0.0)?.0);
    let mut hi = 1.0;
    let mut hi_kind = None;
    for _ in 0..MAX_DOUBLINGS {
        let (kind, below) = prober.probe(hi)?;
        if !below {
            hi_kind = Some(kind);
            break;
        }
        lo = hi;
        lo_kind = kind;
        hi *= 2.0;
    }
    let Some(mut hi_kind) = hi_kind else {
        return Err(Error::UnboundedThreshold(lo));
    };

    for _ in 0..cfg.bisection_iters {
        if hi - lo <= cfg.bracket_width {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let (kind, below) = prober.probe(mid)?;
        if below {
            lo = mid;
            lo_kind = kind;
        } else {
            hi = mid;
            hi_kind = kind;
        }
    }
    Ok(ThresholdBracket {
        lo,
        hi,
        lo_kind,
        hi_kind,
        probes: prober.probes,
    })
}

/// Shell classification of `∫ |z₁|^{2w} |e^{-2φ₁} - e^{-2φ₂}| dλ` over the
/// unit bidisk.
pub fn difference_integrability_2d(
    first: &ToricModel,
    second: &ToricModel,
    weight_exponent: f64,
    cfg: &QuadratureConfig,
) -> Result<ConvergenceVerdict> {
    cfg.validate()?;
    for m in [first, second] {
        if m.dim() != 2 {
            return Err(Error::UnsupportedDimension(m.dim()));
        }
    }
    if !(weight_exponent >= 0.0) || !weight_exponent.is_finite() {
        return Err(Error::Precondition(
            "weight exponent must be finite and nonnegative".into(),
        ));
    }
    let (f1, f2) = (first.to_float(), second.to_float());
    let mut cuts = f1.tie_points_2d();
    cuts.extend(f2.tie_points_2d());
    let grid = ShellGrid::new(2, &cuts, cfg);
    let w = weight_exponent;
    let log_f = |x: &[f64]| {
        let (e1, e2) = (f1.neg_log(x), f2.neg_log(x));
        let gap = (e1 - e2).abs();
        // log |e^{2e1} - e^{2e2}|
        let log_diff = if gap == 0.0 {
            f64::NEG_INFINITY
        } else {
            2.0 * e1.max(e2) + (-(-2.0 * gap).exp_m1()).ln()
        };
        log_diff - 2.0 * w * x[0] - 2.0 * (x[0] + x[1])
    };
    let shells = grid.shell_logs(0..cfg.shell_count, &log_f)?;
    Ok(verdict_from_shells(shells, cfg))
}

/// Finite values as JSON numbers rounded to 6 significant digits; infinities
/// and NaN as the strings `"inf"`, `"-inf"`, `"nan"`.
pub(crate) mod log_float {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Wire {
        Number(f64),
        Text(String),
    }

    pub fn round6(v: f64) -> f64 {
        format!("{v:.5e}").parse().unwrap_or(v)
    }

    fn to_wire(v: f64) -> Wire {
        if v.is_finite() {
            Wire::Number(round6(v))
        } else if v.is_nan() {
            Wire::Text("nan".into())
        } else if v > 0.0 {
            Wire::Text("inf".into())
        } else {
            Wire::Text("-inf".into())
        }
    }

    fn from_wire<E: serde::de::Error>(w: Wire) -> Result<f64, E> {
        match w {
            Wire::Number(v) => Ok(v),
            Wire::Text(s) => match s.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(E::custom(format!("unexpected float text {other:?}"))),
            },
        }
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        to_wire(*v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        from_wire(Wire::deserialize(d)?)
    }

    pub fn ser_vec<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| to_wire(*x)).collect::<Vec<_>>().serialize(s)
    }

    pub fn de_vec<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<Wire>::deserialize(d)?.into_iter().map(from_wire).collect()
    }
}

mod log_floats {
    pub(super) use super::log_float::{de_vec as deserialize, ser_vec as serialize};
}
