use super::ToricModel;
use crate::rational::to_f64;

#[derive(Clone, Debug)]
struct FloatTerm {
    weight: f64,
    /// Exponent vectors, flattened row by row.
    exponents: Vec<f64>,
}

/// Double-precision copy of a [`ToricModel`] for repeated evaluation.
#[derive(Clone, Debug)]
pub struct FloatModel {
    dim: usize,
    terms: Vec<FloatTerm>,
}

impl FloatModel {
    pub fn new(model: &ToricModel) -> Self {
        let terms = model
            .terms()
            .iter()
            .map(|t| FloatTerm {
                weight: to_f64(t.weight()),
                exponents: t
                    .monomials()
                    .iter()
                    .flat_map(|m| m.exponents().iter().map(to_f64))
                    .collect(),
            })
            .collect();
        FloatModel {
            dim: model.dim(),
            terms,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `-Σⱼ λⱼ log Σᵢ exp(-⟨a_{ji}, x⟩)`, factoring the dominant monomial out
    /// of each log-sum so that nothing underflows.
    pub fn neg_log(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        let mut total = 0.0;
        for term in &self.terms {
            let mut lo = f64::INFINITY;
            for a in term.exponents.chunks_exact(self.dim) {
                lo = lo.min(dot(a, x));
            }
            let mut rest = 0.0;
            for a in term.exponents.chunks_exact(self.dim) {
                rest += (lo - dot(a, x)).exp();
            }
            total += term.weight * (lo - rest.ln());
        }
        total
    }

    /// Piecewise-linear part `Σⱼ λⱼ minᵢ ⟨a_{ji}, x⟩` of [`Self::neg_log`].
    pub fn valuation(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                t.weight
                    * t.exponents
                        .chunks_exact(self.dim)
                        .map(|a| dot(a, x))
                        .fold(f64::INFINITY, f64::min)
            })
            .sum()
    }

    /// `Σⱼ λⱼ log(#monomials in term j)`: the largest possible gap between
    /// [`Self::valuation`] and [`Self::neg_log`].
    pub fn log_count_bound(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.weight * ((t.exponents.len() / self.dim) as f64).ln())
            .sum()
    }

    /// Parameters `t ∈ (0, 1)` at which two monomials of one term tie along
    /// the direction `(t, 1 - t)`. These are the only places where the
    /// valuation restricted to the simplex can bend. Dimension 2 only.
    pub fn tie_points_2d(&self) -> Vec<f64> {
        assert_eq!(self.dim, 2);
        let mut out = Vec::new();
        for term in &self.terms {
            let rows: Vec<&[f64]> = term.exponents.chunks_exact(2).collect();
            for (i, a) in rows.iter().enumerate() {
                for b in &rows[i + 1..] {
                    let da = a[0] - a[1];
                    let db = b[0] - b[1];
                    if da != db {
                        let t = (b[1] - a[1]) / (da - db);
                        if t > 0.0 && t < 1.0 {
                            out.push(t);
                        }
                    }
                }
            }
        }
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        out
    }
}

fn dot(a: &[f64], x: &[f64]) -> f64 {
    a.iter().zip(x).map(|(p, q)| p * q).sum()
}
