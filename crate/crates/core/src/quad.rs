//! Panel-based Gauss-Legendre quadrature.
//!
//! Every integral in this crate is assembled from three ingredients: a
//! fixed-order Gauss-Legendre rule applied panel by panel, geometric panel
//! layouts that track power-law integrands, and a length cap that subdivides
//! panels until an oscillatory factor `e^{iay}` turns over a bounded phase
//! per panel. Endpoint singularities `y^{p-1}` are removed exactly by the
//! substitution `y = s^{1/p}` before any panels are laid out
//! (see [`power_singular`]).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Truncation and resolution parameters for the semi-infinite kernel
/// integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Truncation point `Y` for oscillatory tails that cannot be closed
    /// exactly. Must exceed 1.
    pub truncation: f64,
    /// Geometric panel count on `(1, Y]` before oscillation capping.
    pub panels: usize,
    /// Gauss-Legendre nodes per panel (2..=64).
    pub nodes_per_panel: usize,
    /// Number of integration-by-parts boundary corrections (0, 1 or 2)
    /// applied at `Y` to close an oscillatory tail.
    pub tail_correction_order: u8,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            truncation: 1e4,
            panels: 64,
            nodes_per_panel: 16,
            tail_correction_order: 1,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.truncation.is_finite() && self.truncation > 1.0) {
            return Err(Error::InvalidQuadrature(format!(
                "truncation must be finite and > 1, got {}",
                self.truncation
            )));
        }
        if self.panels == 0 {
            return Err(Error::InvalidQuadrature("panels must be >= 1".into()));
        }
        if !(2..=64).contains(&self.nodes_per_panel) {
            return Err(Error::InvalidQuadrature(format!(
                "nodes_per_panel must be in 2..=64, got {}",
                self.nodes_per_panel
            )));
        }
        if self.tail_correction_order > 2 {
            return Err(Error::InvalidQuadrature(
                "tail_correction_order must be 0, 1 or 2".into(),
            ));
        }
        Ok(())
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the rule by Newton iteration on the Legendre polynomial, with
    /// Tricomi initial guesses. Panics if `order` is outside 2..=64; callers
    /// validate user-facing input first.
    pub fn new(order: usize) -> Self {
        assert!(
            (2..=64).contains(&order),
            "Gauss-Legendre order out of range: {order}"
        );
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x =
                (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_with_deriv(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() <= 1e-15 {
                    break;
                }
            }
            let (_, dp) = legendre_with_deriv(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // The Tricomi guess enumerates roots from +1 downwards.
            nodes[n - 1 - i] = x;
            nodes[i] = -x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `∫_a^b f` with this rule on a single panel.
    pub fn integrate<F: FnMut(f64) -> Complex64>(&self, a: f64, b: f64, f: &mut F) -> Complex64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(mid + half * x) * *w;
        }
        acc * half
    }

    /// Sum of [`Self::integrate`] over a panel list.
    pub fn integrate_panels<F: FnMut(f64) -> Complex64>(
        &self,
        panels: &[(f64, f64)],
        f: &mut F,
    ) -> Complex64 {
        panels
            .iter()
            .map(|&(a, b)| self.integrate(a, b, f))
            .sum()
    }

    /// Real-valued convenience wrapper over [`Self::integrate_panels`].
    pub fn integrate_panels_real<F: FnMut(f64) -> f64>(
        &self,
        panels: &[(f64, f64)],
        f: &mut F,
    ) -> f64 {
        self.integrate_panels(panels, &mut |x| Complex64::new(f(x), 0.0))
            .re
    }
}

fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let k = k as f64;
        let p_next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// `count` panels covering `[a, b]` with geometrically growing lengths
/// (equal ratios `b/a` per panel). Requires `0 < a < b`.
pub fn geometric_panels(a: f64, b: f64, count: usize) -> Vec<(f64, f64)> {
    debug_assert!(a > 0.0 && b > a && count > 0);
    let ratio = (b / a).powf(1.0 / count as f64);
    let mut edges = Vec::with_capacity(count + 1);
    let mut e = a;
    edges.push(a);
    for _ in 0..count - 1 {
        e *= ratio;
        edges.push(e);
    }
    edges.push(b);
    edges.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Panels covering `(0, b]` by repeated halving toward zero. The innermost
/// panel reaches `b·2^-50`; integrands used with this layout vanish or stay
/// bounded at 0, so the remaining sliver is below roundoff.
pub fn panels_to_zero(b: f64) -> Vec<(f64, f64)> {
    debug_assert!(b > 0.0);
    let mut edges = vec![0.0];
    for k in (0..=50).rev() {
        edges.push(b * (0.5f64).powi(k));
    }
    edges.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Splits every panel longer than `max_len` into equal sub-panels.
pub fn capped_panels(panels: &[(f64, f64)], max_len: f64) -> Vec<(f64, f64)> {
    debug_assert!(max_len > 0.0);
    let mut out = Vec::with_capacity(panels.len());
    for &(a, b) in panels {
        let len = b - a;
        if len <= max_len {
            out.push((a, b));
            continue;
        }
        let parts = (len / max_len).ceil() as usize;
        let step = len / parts as f64;
        for j in 0..parts {
            let lo = a + step * j as f64;
            let hi = if j + 1 == parts { b } else { a + step * (j + 1) as f64 };
            out.push((lo, hi));
        }
    }
    out
}

/// `∫_0^1 y^{p-1} f(y) dy` for `p ∈ (0, 1]`, computed after the exact
/// substitution `y = s^{1/p}`, which turns it into `(1/p) ∫_0^1 f(s^{1/p}) ds`
/// with a smooth integrand. `osc_rate` bounds `|dφ/dy|` of any oscillatory
/// phase inside `f`; panels in `s` are subdivided so the rule resolves it
/// (pass 0.0 for non-oscillatory integrands).
pub fn power_singular<F: FnMut(f64) -> Complex64>(
    gl: &GaussLegendre,
    p: f64,
    osc_rate: f64,
    mut f: F,
) -> Complex64 {
    debug_assert!(p > 0.0 && p <= 1.0);
    let base = panels_to_zero(1.0);
    let panels = if osc_rate > 0.0 {
        // dφ/ds = osc_rate * (1/p) s^{1/p-1} <= osc_rate/p on (0,1].
        capped_panels(&base, (gl.order() as f64 * p / (2.0 * osc_rate)).min(1.0))
    } else {
        base
    };
    let inv_p = 1.0 / p;
    gl.integrate_panels(&panels, &mut |s| f(s.powf(inv_p))) / p
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_matches_known_rules() {
        // Order 2: nodes ±1/√3, weights 1.
        let gl = GaussLegendre::new(2);
        assert_relative_eq!(gl.nodes[1], 1.0 / 3f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(gl.weights[0], 1.0, max_relative = 1e-15);
        // Order 5 center node/weight: 0 and 128/225.
        let gl = GaussLegendre::new(5);
        assert!(gl.nodes[2].abs() < 1e-15);
        assert_relative_eq!(gl.weights[2], 128.0 / 225.0, max_relative = 1e-14);
    }

    #[test]
    fn polynomial_exactness() {
        // Order n integrates degree 2n-1 exactly.
        let gl = GaussLegendre::new(8);
        let exact = 2.0 / 16.0; // ∫_{-1}^{1} x^15 dx = 0; use x^14: 2/15
        let got = gl.integrate(-1.0, 1.0, &mut |x| Complex64::new(x.powi(15), 0.0));
        assert!(got.re.abs() < 1e-15);
        let got = gl.integrate(-1.0, 1.0, &mut |x| Complex64::new(x.powi(14), 0.0));
        assert_relative_eq!(got.re, 2.0 / 15.0, max_relative = 1e-14);
        let _ = exact;
    }

    #[test]
    fn oscillatory_panel_capping_resolves_high_frequency() {
        // ∫_0^{40π} sin(x) dx = 0 exactly over full periods; a single 16-node
        // panel gets this badly wrong, capped panels to ~1e-14.
        let gl = GaussLegendre::new(16);
        let panels = capped_panels(&[(0.0, 40.0 * std::f64::consts::PI)], 8.0);
        let got = gl.integrate_panels(&panels, &mut |x| Complex64::new(x.sin(), 0.0));
        assert!(got.re.abs() < 1e-12, "got {}", got.re);
    }

    #[test]
    fn power_singular_integrates_beta_like_integrand() {
        // ∫_0^1 y^{p-1} (1-y)^2 dy = B(p,3) = 2/(p(p+1)(p+2)).
        let gl = GaussLegendre::new(16);
        for &p in &[0.25, 0.5, 0.9, 1.0] {
            let got = power_singular(&gl, p, 0.0, |y| Complex64::new((1.0 - y).powi(2), 0.0));
            let exact = 2.0 / (p * (p + 1.0) * (p + 2.0));
            assert_relative_eq!(got.re, exact, max_relative = 1e-13);
        }
    }

    #[test]
    fn geometric_panels_cover_interval() {
        let panels = geometric_panels(1.0, 1e4, 64);
        assert_eq!(panels.len(), 64);
        assert_eq!(panels[0].0, 1.0);
        assert_eq!(panels[63].1, 1e4);
        for w in panels.windows(2) {
            assert_eq!(w[0].1, w[1].0);
        }
    }

    #[test]
    fn quadrature_spec_validation() {
        assert!(QuadratureSpec::default().validate().is_ok());
        let bad = QuadratureSpec {
            truncation: 0.5,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = QuadratureSpec {
            nodes_per_panel: 1,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = QuadratureSpec {
            tail_correction_order: 3,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
