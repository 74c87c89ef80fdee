//! Quadrature nodes for `‖x‖₁`-shells of the positive orthant.
//!
//! A shell `{j ≤ ‖x‖₁ < j + 1}` is parametrised as `x = s θ` with
//! `s ∈ [j, j + 1]` and `θ` on the standard simplex, so
//! `dx = s^{n-1} ds dσ(θ)`. In dimension 2 the simplex is `θ = (t, 1 - t)`;
//! the `t`-axis is cut into panels at the tie points of the integrand and
//! each panel is graded geometrically towards both of its ends, where the
//! integrand concentrates near a threshold. In higher dimension a collapsed
//! (Duffy) tensor rule is used on the simplex.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

/// Gauss–Legendre nodes and weights mapped to `[0, 1]`.
pub(crate) fn unit_rule(order: usize) -> Vec<(f64, f64)> {
    let n = NonZeroUsize::new(order.max(1)).expect("positive");
    let mut pairs: Vec<(f64, f64)> = GaussLegendre::new(n)
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

/// Angular nodes: directions on the simplex with the log of their weight.
#[derive(Clone, Debug)]
pub(crate) struct SimplexRule {
    pub dim: usize,
    /// Flattened directions, `dim` entries each.
    pub directions: Vec<f64>,
    pub log_weights: Vec<f64>,
}

impl SimplexRule {
    pub fn len(&self) -> usize {
        self.log_weights.len()
    }

    pub fn direction(&self, i: usize) -> &[f64] {
        &self.directions[i * self.dim..(i + 1) * self.dim]
    }

    /// Dimension 2: panels cut at `cuts` (inside `(0, 1)`), each half-panel
    /// graded by factors of 4 towards its outer end.
    pub fn segment(cuts: &[f64], nodes: usize, levels: usize) -> Self {
        let rule = unit_rule(nodes);
        let mut ends = vec![0.0];
        ends.extend(cuts.iter().copied().filter(|t| *t > 0.0 && *t < 1.0));
        ends.push(1.0);
        ends.sort_by(f64::total_cmp);
        ends.dedup();

        let mut pieces = Vec::new();
        for w in ends.windows(2) {
            let (a, b) = (w[0], w[1]);
            let mid = 0.5 * (a + b);
            let half = 0.5 * (b - a);
            // graded from a towards mid, then from b towards mid
            let mut left = vec![a];
            let mut right = vec![b];
            for k in (0..levels).rev() {
                let step = half * 0.25f64.powi(k as i32 + 1);
                left.push(a + step);
                right.push(b - step);
            }
            left.push(mid);
            right.push(mid);
            right.reverse();
            left.pop();
            let mut row = left;
            row.extend(right);
            for p in row.windows(2) {
                if p[1] > p[0] {
                    pieces.push((p[0], p[1]));
                }
            }
        }

        let mut directions = Vec::with_capacity(2 * pieces.len() * rule.len());
        let mut log_weights = Vec::with_capacity(pieces.len() * rule.len());
        for (a, b) in pieces {
            let h = b - a;
            for &(x, w) in &rule {
                let t = a + h * x;
                directions.push(t);
                directions.push(1.0 - t);
                log_weights.push((h * w).ln());
            }
        }
        SimplexRule {
            dim: 2,
            directions,
            log_weights,
        }
    }

    /// Collapsed tensor rule on the `(dim - 1)`-simplex:
    /// `θ₁ = u₁`, `θ₂ = (1 - u₁) u₂`, …, `θ_n = Π (1 - uᵢ)`.
    pub fn collapsed(dim: usize, nodes: usize) -> Self {
        assert!(dim >= 2);
        let rule = unit_rule(nodes);
        let axes = dim - 1;
        let count = rule.len().pow(axes as u32);
        let mut directions = Vec::with_capacity(count * dim);
        let mut log_weights = Vec::with_capacity(count);
        let mut idx = vec![0usize; axes];
        for _ in 0..count {
            let mut remaining = 1.0;
            let mut lw = 0.0;
            for &i in &idx {
                let (u, w) = rule[i];
                directions.push(remaining * u);
                lw += w.ln() + remaining.ln();
                remaining *= 1.0 - u;
            }
            directions.push(remaining);
            log_weights.push(lw);
            // odometer
            for slot in idx.iter_mut() {
                *slot += 1;
                if *slot < rule.len() {
                    break;
                }
                *slot = 0;
            }
        }
        SimplexRule {
            dim,
            directions,
            log_weights,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total(rule: &SimplexRule) -> f64 {
        rule.log_weights.iter().map(|w| w.exp()).sum()
    }

    #[test]
    fn unit_rule_integrates_polynomials() {
        let r = unit_rule(8);
        let s: f64 = r.iter().map(|(x, w)| w * x.powi(7)).sum();
        assert!((s - 1.0 / 8.0).abs() < 1e-14);
    }

    #[test]
    fn segment_rule_has_unit_length() {
        let r = SimplexRule::segment(&[0.25, 0.5, 0.9], 8, 8);
        assert!((total(&r) - 1.0).abs() < 1e-13);
        // resolves a sharp kink at a cut
        let f = |t: f64| (-400.0 * (t - 0.25).abs()).exp();
        let s: f64 = (0..r.len())
            .map(|i| r.log_weights[i].exp() * f(r.direction(i)[0]))
            .sum();
        let exact = (1.0 - (-100.0f64).exp()) / 400.0 + (1.0 - (-300.0f64).exp()) / 400.0;
        assert!((s / exact - 1.0).abs() < 1e-6, "{s} vs {exact}");
    }

    #[test]
    fn collapsed_rule_measures_simplex() {
        // Lebesgue measure of {θ₁..θ_{n-1} ≥ 0, Σ ≤ 1} is 1/(n-1)!
        for (dim, expected) in [(2, 1.0), (3, 0.5), (4, 1.0 / 6.0)] {
            let r = SimplexRule::collapsed(dim, 6);
            assert!((total(&r) - expected).abs() < 1e-12, "dim {dim}");
            for i in 0..r.len() {
                let s: f64 = r.direction(i).iter().sum();
                assert!((s - 1.0).abs() < 1e-12);
            }
        }
    }
}
