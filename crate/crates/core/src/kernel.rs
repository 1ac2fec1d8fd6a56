//! Power-law memory kernels and their convolutions with oscillatory signals.
//!
//! The kernel family is `g_β(t) = t^{β-1}/Γ(β)`, normalized so that
//! `g_β * g_γ = g_{β+γ}` under convolution on the half-line. Convolving a
//! bounded oscillation `u(t) = e^{iat}` (a ≠ 0) from the whole past,
//!
//! ```text
//! (g_β * u)(t) = ∫_0^∞ g_β(y) e^{ia(t-y)} dy = (ia)^{-β} e^{iat},
//! ```
//!
//! defines the fractional antiderivative of order β in the Abel-regularized
//! sense; the closed form (principal branch, see [`ipow`]) is the oracle the
//! quadrature is checked against. Numerically the integral splits at y = 1:
//! the singular head is tamed by the exact substitution `y = s^{1/β}`, the
//! oscillatory body uses geometric panels capped to a bounded phase per
//! panel, and the truncated tail is closed by integration-by-parts boundary
//! corrections at the cutoff.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{capped_panels, geometric_panels, power_singular, GaussLegendre, QuadratureSpec};
use crate::special::gamma;

/// Fractional order α constrained to the open interval (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain(format!(
                "fractional order must lie strictly inside (0, 1), got {alpha}"
            )));
        }
        Ok(Self(alpha))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// 1 - α, the order of the complementary kernel `g_{1-α}`.
    pub fn complement(self) -> f64 {
        1.0 - self.0
    }
}

/// Principal-branch `(i a)^p` for real `a` and real exponent `p`, with the
/// convention `(i·0)^p = 0`.
pub fn ipow(a: f64, p: f64) -> Complex64 {
    if a == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::from_polar(
        a.abs().powf(p),
        p * a.signum() * std::f64::consts::FRAC_PI_2,
    )
}

/// `g_β(t) = t^{β-1}/Γ(β)` for β ∈ (0, 2] and t > 0.
pub fn gamma_kernel(beta: f64, t: f64) -> Result<f64> {
    if !(beta.is_finite() && beta > 0.0 && beta <= 2.0) {
        return Err(Error::Domain(format!(
            "kernel order must lie in (0, 2], got {beta}"
        )));
    }
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Domain(format!(
            "kernel argument must be positive and finite, got {t}"
        )));
    }
    Ok(t.powf(beta - 1.0) / gamma(beta))
}

/// Closed form of `(g_β * e^{ia·})(t) = (ia)^{-β} e^{iat}`.
pub fn convolve_exponential_exact(beta: f64, a: f64, t: f64) -> Complex64 {
    ipow(a, -beta) * Complex64::from_polar(1.0, a * t)
}

/// Numerical `(g_β * e^{ia·})(t)` for β ∈ (0, 1], a ≠ 0.
///
/// Split at y = 1. Head: `power_singular` removes `y^{β-1}` exactly. Body:
/// geometric panels on (1, Y], each capped so the phase advance stays below
/// half the node count. Tail beyond Y: integration-by-parts corrections
/// (orders per `quad.tail_correction_order`)
///
/// ```text
/// k=1:  + e^{ia(t-Y)} g_β(Y) / (ia)
/// k=2:  + e^{ia(t-Y)} (β-1) Y^{β-2} / (Γ(β) (ia)²)
/// ```
///
/// leaving an O(Y^{β-2}) (k=1) or O(Y^{β-3}) (k=2) remainder.
pub fn convolve_exponential(
    beta: f64,
    a: f64,
    t: f64,
    quad: &QuadratureSpec,
) -> Result<Complex64> {
    quad.validate()?;
    if !(beta.is_finite() && beta > 0.0 && beta <= 1.0) {
        return Err(Error::Domain(format!(
            "convolution order must lie in (0, 1], got {beta}"
        )));
    }
    if !(a.is_finite() && a != 0.0) {
        return Err(Error::Domain(format!(
            "oscillation frequency must be finite and nonzero, got {a}"
        )));
    }
    if !t.is_finite() {
        return Err(Error::Domain(format!("time must be finite, got {t}")));
    }

    let gl = GaussLegendre::new(quad.nodes_per_panel);
    let gamma_beta = gamma(beta);
    let phase = |y: f64| Complex64::from_polar(1.0, a * (t - y));

    let head = power_singular(&gl, beta, a.abs(), phase) / gamma_beta;

    let y_max = quad.truncation;
    let cap = quad.nodes_per_panel as f64 / (2.0 * a.abs());
    let body_panels = capped_panels(&geometric_panels(1.0, y_max, quad.panels), cap);
    let body = gl.integrate_panels(&body_panels, &mut |y| {
        phase(y) * (y.powf(beta - 1.0) / gamma_beta)
    });

    let ia = Complex64::new(0.0, a);
    let mut tail = Complex64::new(0.0, 0.0);
    if quad.tail_correction_order >= 1 {
        tail += phase(y_max) * (y_max.powf(beta - 1.0) / gamma_beta) / ia;
    }
    if quad.tail_correction_order >= 2 {
        tail += phase(y_max) * ((beta - 1.0) * y_max.powf(beta - 2.0) / gamma_beta) / (ia * ia);
    }

    Ok(head + body + tail)
}

/// Residual of the composition identity `g_{1-α} * (g_α * u) = g_1 * u` on
/// `u = e^{ia·}`, where the right-hand side is the regularized full
/// antiderivative `e^{iat}/(ia)`.
///
/// Both inner convolutions are computed numerically; since each maps the
/// exponential to a complex multiple of itself, the composition is the
/// product of the two computed multipliers.
pub fn love_identity_residual(
    alpha: FractionalOrder,
    a: f64,
    t: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let c_inner = convolve_exponential(alpha.value(), a, t, quad)?;
    let c_outer = convolve_exponential(alpha.complement(), a, t, quad)?;
    let e_iat = Complex64::from_polar(1.0, a * t);
    let lhs = c_inner * c_outer / e_iat;
    let rhs = e_iat / Complex64::new(0.0, a);
    Ok((lhs - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::GaussLegendre;
    use crate::special::SQRT_PI;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn fractional_order_validation() {
        assert!(FractionalOrder::new(0.5).is_ok());
        assert!(FractionalOrder::new(1e-9).is_ok());
        assert!(FractionalOrder::new(0.0).is_err());
        assert!(FractionalOrder::new(1.0).is_err());
        assert!(FractionalOrder::new(-0.3).is_err());
        assert!(FractionalOrder::new(f64::NAN).is_err());
        assert!(FractionalOrder::new(f64::INFINITY).is_err());
    }

    #[test]
    fn kernel_known_values() {
        // g_1 ≡ 1.
        assert_relative_eq!(gamma_kernel(1.0, 5.0).unwrap(), 1.0, max_relative = 1e-15);
        // g_{1/2}(1) = 1/Γ(1/2) = 1/√π.
        assert_relative_eq!(
            gamma_kernel(0.5, 1.0).unwrap(),
            1.0 / SQRT_PI,
            max_relative = 1e-14
        );
        // g_2(t) = t.
        assert_relative_eq!(gamma_kernel(2.0, 3.5).unwrap(), 3.5, max_relative = 1e-14);
        assert!(gamma_kernel(0.0, 1.0).is_err());
        assert!(gamma_kernel(2.5, 1.0).is_err());
        assert!(gamma_kernel(0.5, 0.0).is_err());
        assert!(gamma_kernel(0.5, -1.0).is_err());
    }

    #[test]
    fn ipow_known_values() {
        // (-8i)^{1/3}: a = -8 ⇒ |a|^{1/3} e^{-iπ/6} = √3 - i.
        let z = ipow(-8.0, 1.0 / 3.0);
        assert_relative_eq!(z.re, 3f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(z.im, -1.0, max_relative = 1e-15);
        // (i)^{-3/4} e^{i} frozen from an independent evaluation.
        let z = ipow(1.0, -0.75) * Complex64::from_polar(1.0, 1.0);
        assert_relative_eq!(z.re, 0.9841825609905238, max_relative = 1e-14);
        assert_relative_eq!(z.im, -0.17715723705830905, max_relative = 1e-13);
        assert_eq!(ipow(0.0, 0.5), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn convolution_matches_closed_form_on_grid() {
        let quad = QuadratureSpec::default();
        for &beta in &[0.25, 0.5, 0.75, 1.0] {
            for &a in &[-2.0, -1.0, 1.0, 2.0] {
                for &t in &[-1.3, 0.0, 0.7, 3.0] {
                    let got = convolve_exponential(beta, a, t, &quad).unwrap();
                    let want = convolve_exponential_exact(beta, a, t);
                    assert!(
                        (got - want).norm() <= 1e-4 * want.norm(),
                        "beta={beta} a={a} t={t}: |Δ|={:.3e}",
                        (got - want).norm()
                    );
                }
            }
        }
    }

    #[test]
    fn tail_corrections_sharpen_the_cutoff() {
        // At fixed Y the k = 0,1,2 closures form a strictly improving ladder.
        let base = QuadratureSpec {
            truncation: 1e4,
            panels: 64,
            nodes_per_panel: 16,
            tail_correction_order: 0,
        };
        let (beta, a, t) = (0.75, 1.0, 1.0);
        let want = convolve_exponential_exact(beta, a, t);
        let mut errs = Vec::new();
        for k in 0..=2u8 {
            let q = QuadratureSpec {
                tail_correction_order: k,
                ..base
            };
            errs.push((convolve_exponential(beta, a, t, &q).unwrap() - want).norm());
        }
        assert!(errs[0] > 1e-3, "k=0 should be visibly truncated: {:?}", errs);
        assert!(errs[1] < 1e-4 && errs[1] < errs[0] * 1e-2, "{errs:?}");
        assert!(errs[2] < errs[1] * 1e-2, "{errs:?}");
    }

    #[test]
    fn doubling_truncation_shrinks_error_at_known_rate() {
        // With a first-order tail closure the remainder is O(Y^{β-2}), so
        // doubling Y divides the error by 2^{2-β}. That also dominates the
        // 2^{β+1}·(1-0.2) floor for β ≤ 1/2.
        for &beta in &[0.25, 0.5] {
            let (a, t) = (1.0, 0.4);
            let want = convolve_exponential_exact(beta, a, t);
            let err = |y: f64| {
                let q = QuadratureSpec {
                    truncation: y,
                    panels: 64,
                    nodes_per_panel: 16,
                    tail_correction_order: 1,
                };
                (convolve_exponential(beta, a, t, &q).unwrap() - want).norm()
            };
            let (e1, e2) = (err(300.0), err(600.0));
            let measured = e1 / e2;
            let predicted = (2.0f64).powf(2.0 - beta);
            assert!(
                measured >= (2.0f64).powf(beta + 1.0) * 0.8,
                "beta={beta}: ratio {measured}"
            );
            assert!(
                (measured / predicted - 1.0).abs() < 0.2,
                "beta={beta}: measured {measured} vs predicted {predicted}"
            );
        }
    }

    #[test]
    fn love_identity_on_oscillatory_signals() {
        let quad = QuadratureSpec::default();
        for &alpha in &[0.25, 0.5, 0.75] {
            let alpha = FractionalOrder::new(alpha).unwrap();
            for &(a, t) in &[(1.0, std::f64::consts::PI), (2.0, 0.3), (-1.5, 1.1)] {
                let r = love_identity_residual(alpha, a, t, &quad).unwrap();
                assert!(r < 1e-4, "alpha={:?} a={a} t={t}: {r:.3e}", alpha.value());
            }
        }
        // Frozen spot value: both sides equal i at (α=1/2, a=1, t=π).
        let alpha = FractionalOrder::new(0.5).unwrap();
        let c1 = convolve_exponential(0.5, 1.0, std::f64::consts::PI, &quad).unwrap();
        let c2 = convolve_exponential(0.5, 1.0, std::f64::consts::PI, &quad).unwrap();
        let e = Complex64::from_polar(1.0, std::f64::consts::PI);
        let lhs = c1 * c2 / e;
        assert!((lhs - Complex64::new(0.0, 1.0)).norm() < 1e-4);
        let _ = alpha;
    }

    /// Semigroup of the kernels themselves: ∫_0^t g_β(y) g_γ(t-y) dy =
    /// g_{β+γ}(t), evaluated with both endpoint singularities removed by
    /// power substitutions after splitting at t/2.
    fn kernel_semigroup_lhs(beta: f64, gamma_ord: f64, t: f64) -> f64 {
        let gl = GaussLegendre::new(24);
        let half = 0.5 * t;
        // ∫_0^{t/2} y^{β-1} f(y) dy with f(y) = g_γ(t-y)/Γ(β), rescaled to (0,1].
        let left = power_singular(&gl, beta, 0.0, |s| {
            let y = half * s;
            Complex64::new(gamma_kernel(gamma_ord, t - y).unwrap(), 0.0)
        })
        .re
            * half.powf(beta)
            / gamma(beta);
        let right = power_singular(&gl, gamma_ord, 0.0, |s| {
            let z = half * s;
            Complex64::new(gamma_kernel(beta, t - z).unwrap(), 0.0)
        })
        .re
            * half.powf(gamma_ord)
            / gamma(gamma_ord);
        left + right
    }

    #[test]
    fn kernel_semigroup_property() {
        for &(beta, gamma_ord) in &[(0.25, 0.5), (0.5, 0.5), (0.3, 0.4), (0.75, 0.75)] {
            for &t in &[0.25, 1.0, 3.0] {
                let lhs = kernel_semigroup_lhs(beta, gamma_ord, t);
                let rhs = gamma_kernel(beta + gamma_ord, t).unwrap();
                assert_relative_eq!(lhs, rhs, max_relative = 1e-10);
            }
        }
    }

    proptest! {
        #[test]
        fn kernel_scaling_law(beta in 0.05f64..2.0, t in 0.01f64..50.0, lam in 0.1f64..10.0) {
            // g_β(λt) = λ^{β-1} g_β(t).
            let lhs = gamma_kernel(beta, lam * t).unwrap();
            let rhs = lam.powf(beta - 1.0) * gamma_kernel(beta, t).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(rhs.abs()));
        }

        #[test]
        fn ipow_multiplicativity(a in prop_oneof![-5.0f64..-0.1, 0.1f64..5.0],
                                 p in -1.0f64..1.0, q in -1.0f64..1.0) {
            // Same-branch exponent addition: (ia)^p (ia)^q = (ia)^{p+q}.
            let lhs = ipow(a, p) * ipow(a, q);
            let rhs = ipow(a, p + q);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm());
        }
    }
}
