//! Backward Weyl-type fractional derivatives, weak pairings, and the
//! Mittag-Leffler function.
//!
//! The backward derivative of order α ∈ (0,1) acting on a rapidly decaying
//! test function φ is
//!
//! ```text
//! D̂^α φ(t) = (1/|Γ(-α)|) ∫_0^∞ y^{-α-1} (φ(t+y) - φ(t)) dy,
//! ```
//!
//! the regularized difference form; integration by parts turns it into the
//! defining first-derivative form `(1/Γ(1-α)) ∫_0^∞ y^{-α} φ'(t+y) dy`,
//! which serves as an independent oracle. The forward derivative `D^α`
//! mirrors it with `φ'(t-y)` and pairs weakly against signals by
//! `⟨D^α u, φ⟩ = -∫ u(t) · D̂^α φ(t) dt`.
//!
//! Quadrature strategy for `D̂^α φ(t)` (valid for every real t, including
//! far outside the support of φ): split the difference form at y = 1. On
//! (0,1] the substitution `y = s^{1/(1-α)}` removes the singularity exactly,
//! with the difference quotient switched to `φ'(t + y/2)` below y = 1e-6 to
//! avoid cancellation. On [1,∞) the φ(t) part integrates in closed form to
//! `-φ(t)/α`, while the φ(t+y) part only sees y-values that land inside the
//! envelope of φ, an explicit finite window integrated in shifted
//! coordinates. No oscillatory truncation error enters at any t.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::{ipow, FractionalOrder};
use crate::quad::{capped_panels, geometric_panels, power_singular, GaussLegendre, QuadratureSpec};
use crate::special::{abs_gamma_neg, gamma, ln_gamma};

/// Number of Gaussian widths after which a term's envelope is treated as
/// zero (e^{-81} ≈ 7e-36, far below every tolerance in the crate).
const SUPPORT_WIDTHS: f64 = 9.0;

/// Length of the explicit left window used by [`weak_pairing`] before the
/// analytic tail closure takes over.
const PAIRING_LEFT_SPAN: f64 = 500.0;

/// Below this offset the difference quotient (φ(t+y) - φ(t))/y is replaced
/// by the midpoint derivative φ'(t + y/2) to avoid catastrophic
/// cancellation (the switch error is O(y²·φ''')).
const QUOTIENT_SWITCH: f64 = 1e-6;

// ---------------------------------------------------------------------------
// Test functions
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
struct Term {
    coeff: Complex64,
    degree: u32,
    center: f64,
    width: f64,
}

impl Term {
    fn eval(&self, t: f64) -> Complex64 {
        let z = (t - self.center) / self.width;
        self.coeff * t.powi(self.degree as i32) * (-z * z).exp()
    }

    fn eval_deriv(&self, t: f64) -> Complex64 {
        let z = (t - self.center) / self.width;
        let envelope = (-z * z).exp();
        let poly = if self.degree == 0 {
            -2.0 * z / self.width
        } else {
            self.degree as f64 * t.powi(self.degree as i32 - 1)
                - 2.0 * z / self.width * t.powi(self.degree as i32)
        };
        self.coeff * poly * envelope
    }
}

/// Finite linear combination of terms `c · t^d · exp(-((t-c₀)/w)²)`:
/// a family of smooth, rapidly decaying test functions closed under
/// conjugation, translation and complex scaling, with exact moments.
#[derive(Debug, Clone)]
pub struct TestFunction {
    terms: Vec<Term>,
}

impl TestFunction {
    /// A single Gaussian bump `exp(-((t-center)/width)²)`.
    pub fn gaussian(center: f64, width: f64) -> Result<Self> {
        Self::monomial_gaussian(Complex64::new(1.0, 0.0), 0, center, width)
    }

    /// One term `coeff · t^degree · exp(-((t-center)/width)²)`, degree ≤ 8.
    pub fn monomial_gaussian(
        coeff: Complex64,
        degree: u32,
        center: f64,
        width: f64,
    ) -> Result<Self> {
        if !(coeff.re.is_finite() && coeff.im.is_finite()) {
            return Err(Error::Domain("test-function coefficient must be finite".into()));
        }
        if degree > 8 {
            return Err(Error::Domain(format!(
                "test-function degree must be <= 8, got {degree}"
            )));
        }
        if !center.is_finite() {
            return Err(Error::Domain("test-function center must be finite".into()));
        }
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::Domain(format!(
                "test-function width must be positive, got {width}"
            )));
        }
        Ok(Self {
            terms: vec![Term {
                coeff,
                degree,
                center,
                width,
            }],
        })
    }

    /// The zero function (empty combination).
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    /// Sum of two combinations.
    pub fn plus(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self { terms }
    }

    /// Complex scalar multiple.
    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|term| Term {
                    coeff: c * term.coeff,
                    ..*term
                })
                .collect(),
        }
    }

    /// Complex conjugate (the envelope and monomials are real).
    pub fn conjugated(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|term| Term {
                    coeff: term.coeff.conj(),
                    ..*term
                })
                .collect(),
        }
    }

    /// The translate `t ↦ φ(t + s)`, expanded back into the family via the
    /// binomial theorem (degrees are preserved).
    pub fn translated(&self, s: f64) -> Self {
        let mut terms = Vec::new();
        for term in &self.terms {
            let d = term.degree;
            for j in 0..=d {
                terms.push(Term {
                    coeff: term.coeff * binomial(d, j) * s.powi((d - j) as i32),
                    degree: j,
                    center: term.center - s,
                    width: term.width,
                });
            }
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms
            .iter()
            .all(|term| term.coeff == Complex64::new(0.0, 0.0))
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.terms.iter().map(|term| term.eval(t)).sum()
    }

    pub fn eval_deriv(&self, t: f64) -> Complex64 {
        self.terms.iter().map(|term| term.eval_deriv(t)).sum()
    }

    /// Envelope interval outside which the function is numerically zero
    /// (every term decayed below e^{-81}); `None` for the zero function.
    pub fn support(&self) -> Option<(f64, f64)> {
        let mut bounds: Option<(f64, f64)> = None;
        for term in &self.terms {
            if term.coeff == Complex64::new(0.0, 0.0) {
                continue;
            }
            let lo = term.center - SUPPORT_WIDTHS * term.width;
            let hi = term.center + SUPPORT_WIDTHS * term.width;
            bounds = Some(match bounds {
                None => (lo, hi),
                Some((a, b)) => (a.min(lo), b.max(hi)),
            });
        }
        bounds
    }

    /// Smallest width among active terms: the resolution scale quadrature
    /// panels must not exceed. `None` for the zero function.
    pub fn min_width(&self) -> Option<f64> {
        self.terms
            .iter()
            .filter(|term| term.coeff != Complex64::new(0.0, 0.0))
            .map(|term| term.width)
            .fold(None, |acc, w| Some(acc.map_or(w, |m: f64| m.min(w))))
    }

    /// Exact k-th moment `∫ t^k φ(t) dt` via Gaussian moment formulas.
    pub fn moment(&self, k: u32) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for term in &self.terms {
            let m = k + term.degree;
            // ∫ t^m e^{-((t-c)/w)²} dt = w Σ_j C(m,j) c^{m-j} w^j ∫ s^j e^{-s²} ds
            let mut sum = 0.0;
            for j in (0..=m).step_by(2) {
                sum += binomial(m, j)
                    * term.center.powi((m - j) as i32)
                    * term.width.powi(j as i32)
                    * gamma((j as f64 + 1.0) / 2.0);
            }
            acc += term.coeff * term.width * sum;
        }
        acc
    }

    /// `∫ |φ(t)| dt`, by quadrature over the envelope (the integrand has
    /// kinks at zeros of φ, so expect ~1e-6 accuracy; used for bounds).
    pub fn l1_norm(&self) -> f64 {
        self.envelope_quadrature(|t, f| f.eval(t).norm())
    }

    /// `∫ |φ'(t)| dt`, same method and caveat as [`Self::l1_norm`].
    pub fn deriv_l1_norm(&self) -> f64 {
        self.envelope_quadrature(|t, f| f.eval_deriv(t).norm())
    }

    fn envelope_quadrature(&self, f: impl Fn(f64, &Self) -> f64) -> f64 {
        let Some((lo, hi)) = self.support() else {
            return 0.0;
        };
        let w = self.min_width().expect("support implies an active term");
        let gl = GaussLegendre::new(24);
        let panels = capped_panels(&[(lo, hi)], 0.25 * w);
        gl.integrate_panels_real(&panels, &mut |t| f(t, self))
    }

    /// Width of the envelope when the combination is exactly one pure
    /// Gaussian centered at the origin (its Fourier transform is then again
    /// a member of the family); `None` otherwise.
    pub fn single_centered_gaussian_width(&self) -> Option<f64> {
        match self.terms.as_slice() {
            [term]
                if term.degree == 0
                    && term.center == 0.0
                    && term.coeff != Complex64::new(0.0, 0.0) =>
            {
                Some(term.width)
            }
            _ => None,
        }
    }

    /// `Fφ(σ) = ∫ e^{-iσt} φ(t) dt` by oscillation-capped quadrature over
    /// the envelope.
    pub fn fourier_transform(&self, sigma: f64, nodes: usize) -> Complex64 {
        let Some((lo, hi)) = self.support() else {
            return Complex64::new(0.0, 0.0);
        };
        let w = self.min_width().expect("support implies an active term");
        let gl = GaussLegendre::new(nodes);
        let cap = if sigma != 0.0 {
            (0.5 * w).min(nodes as f64 / (2.0 * sigma.abs()))
        } else {
            0.5 * w
        };
        let panels = capped_panels(&[(lo, hi)], cap);
        gl.integrate_panels(&panels, &mut |t| {
            Complex64::from_polar(1.0, -sigma * t) * self.eval(t)
        })
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

// ---------------------------------------------------------------------------
// Signals
// ---------------------------------------------------------------------------

/// Bounded oscillation `u(t) = amplitude · e^{i·frequency·t}` defined on the
/// whole line (frequency 0 gives a constant).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialSignal {
    pub amplitude: Complex64,
    pub frequency: f64,
}

impl ExponentialSignal {
    pub fn new(amplitude: Complex64, frequency: f64) -> Result<Self> {
        if !(amplitude.re.is_finite() && amplitude.im.is_finite()) {
            return Err(Error::Domain("signal amplitude must be finite".into()));
        }
        if !frequency.is_finite() {
            return Err(Error::Domain("signal frequency must be finite".into()));
        }
        Ok(Self {
            amplitude,
            frequency,
        })
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.amplitude * Complex64::from_polar(1.0, self.frequency * t)
    }
}

// ---------------------------------------------------------------------------
// Backward / forward derivatives
// ---------------------------------------------------------------------------

/// Regularized backward derivative `D̂^α φ(t)`; see the module docs for the
/// scheme. `quad.nodes_per_panel` sets the rule order; `truncation` and
/// `tail_correction_order` are inert here because the tail is closed exactly.
pub fn backward_deriv(
    alpha: FractionalOrder,
    phi: &TestFunction,
    t: f64,
    quad: &QuadratureSpec,
) -> Result<Complex64> {
    quad.validate()?;
    if !t.is_finite() {
        return Err(Error::Domain(format!("time must be finite, got {t}")));
    }
    let gl = GaussLegendre::new(quad.nodes_per_panel);
    Ok(backward_core(&gl, alpha, phi, t))
}

/// Shared implementation; `gl` is hoisted so [`weak_pairing`] can evaluate
/// the derivative at many points without rebuilding the rule.
fn backward_core(gl: &GaussLegendre, alpha: FractionalOrder, phi: &TestFunction, t: f64) -> Complex64 {
    let Some((lo, hi)) = phi.support() else {
        return Complex64::new(0.0, 0.0);
    };
    let a = alpha.value();
    let phi_t = phi.eval(t);

    // (0,1]: difference form with the singularity removed exactly.
    let head = power_singular(gl, 1.0 - a, 0.0, |y| {
        if y < QUOTIENT_SWITCH {
            phi.eval_deriv(t + 0.5 * y)
        } else {
            (phi.eval(t + y) - phi_t) / y
        }
    });

    // [1,∞): the φ(t+y) part lives on the envelope window only.
    let mut window = Complex64::new(0.0, 0.0);
    let xi_lo = (lo - t).max(1.0);
    let xi_hi = hi - t;
    if xi_hi > xi_lo {
        let w = phi.min_width().expect("support implies an active term");
        let count = ((xi_hi / xi_lo).ln() / 1.5f64.ln()).ceil().max(8.0) as usize;
        let panels = capped_panels(&geometric_panels(xi_lo, xi_hi, count), 0.5 * w);
        window = gl.integrate_panels(&panels, &mut |y| y.powf(-a - 1.0) * phi.eval(t + y));
    }

    // [1,∞): the φ(t) part integrates exactly: ∫_1^∞ y^{-α-1} dy = 1/α.
    let closed = -phi_t / a;

    (head + window + closed) / abs_gamma_neg(a)
}

/// `D̂^α φ(t)` through the first-derivative (defining) form
/// `(1/Γ(1-α)) ∫_0^∞ y^{-α} φ'(t+y) dy` — an algebraically independent
/// route used as an oracle for [`backward_deriv`].
pub fn defining_backward_deriv(
    alpha: FractionalOrder,
    phi: &TestFunction,
    t: f64,
    nodes: usize,
) -> Result<Complex64> {
    if !t.is_finite() {
        return Err(Error::Domain(format!("time must be finite, got {t}")));
    }
    let Some((lo, hi)) = phi.support() else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    let a = alpha.value();
    let gl = GaussLegendre::new(nodes);
    let head = power_singular(&gl, 1.0 - a, 0.0, |y| phi.eval_deriv(t + y));
    let mut window = Complex64::new(0.0, 0.0);
    let xi_lo = (lo - t).max(1.0);
    let xi_hi = hi - t;
    if xi_hi > xi_lo {
        let w = phi.min_width().expect("support implies an active term");
        let count = ((xi_hi / xi_lo).ln() / 1.4f64.ln()).ceil().max(8.0) as usize;
        let panels = capped_panels(&geometric_panels(xi_lo, xi_hi, count), 0.25 * w);
        window = gl.integrate_panels(&panels, &mut |y| y.powf(-a) * phi.eval_deriv(t + y));
    }
    Ok((head + window) / gamma(1.0 - a))
}

/// Forward derivative `D^α φ(t) = (1/Γ(1-α)) ∫_0^∞ y^{-α} φ'(t-y) dy`,
/// the left-sided mirror of the backward operator. Same envelope-window
/// strategy, valid for all t.
pub fn forward_deriv(
    alpha: FractionalOrder,
    phi: &TestFunction,
    t: f64,
    quad: &QuadratureSpec,
) -> Result<Complex64> {
    quad.validate()?;
    if !t.is_finite() {
        return Err(Error::Domain(format!("time must be finite, got {t}")));
    }
    let gl = GaussLegendre::new(quad.nodes_per_panel);
    Ok(forward_core(&gl, alpha, phi, t))
}

fn forward_core(gl: &GaussLegendre, alpha: FractionalOrder, phi: &TestFunction, t: f64) -> Complex64 {
    let Some((lo, hi)) = phi.support() else {
        return Complex64::new(0.0, 0.0);
    };
    let a = alpha.value();
    let head = power_singular(gl, 1.0 - a, 0.0, |y| phi.eval_deriv(t - y));
    let mut window = Complex64::new(0.0, 0.0);
    let xi_lo = (t - hi).max(1.0);
    let xi_hi = t - lo;
    if xi_hi > xi_lo {
        let w = phi.min_width().expect("support implies an active term");
        let count = ((xi_hi / xi_lo).ln() / 1.5f64.ln()).ceil().max(8.0) as usize;
        let panels = capped_panels(&geometric_panels(xi_lo, xi_hi, count), 0.5 * w);
        window = gl.integrate_panels(&panels, &mut |y| y.powf(-a) * phi.eval_deriv(t - y));
    }
    (head + window) / gamma(1.0 - a)
}

// ---------------------------------------------------------------------------
// Weak pairing
// ---------------------------------------------------------------------------

/// Weak forward derivative paired against a test function:
/// `⟨D^α u, φ⟩ = -∫ u(t) · D̂^α φ(t) dt` for `u = amplitude·e^{ia·}`.
///
/// `D̂^α φ` decays only algebraically (|t|^{-α-1}) to the left of the
/// support, so the integral is taken over an explicit window
/// `[lo - 1 - 500, hi + 1]` and closed by a first-order tail term: the
/// integration-by-parts boundary value `u(tL)·D̂^αφ(tL)/(ia)` when a ≠ 0,
/// or the exact antiderivative `amplitude·(g_{1-α} *' φ)(tL)` when a = 0
/// (the backward convolution is the primitive of `D̂^α φ`).
pub fn weak_pairing(
    alpha: FractionalOrder,
    u: &ExponentialSignal,
    phi: &TestFunction,
    quad: &QuadratureSpec,
) -> Result<Complex64> {
    quad.validate()?;
    let Some((lo, hi)) = phi.support() else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    let w = phi.min_width().expect("support implies an active term");
    let a = u.frequency;
    let gl = GaussLegendre::new(quad.nodes_per_panel);
    let p = quad.nodes_per_panel as f64;

    let osc_cap = |base: f64| {
        if a != 0.0 {
            base.min(p / (2.0 * a.abs()))
        } else {
            base
        }
    };

    // Across the support (plus one unit where the head integral still sees
    // the bumps directly).
    let support_panels = capped_panels(&[(lo - 1.0, hi + 1.0)], osc_cap(0.5 * w));
    let mut integral = gl.integrate_panels(&support_panels, &mut |t| {
        Complex64::from_polar(1.0, a * t) * backward_core(&gl, alpha, phi, t)
    });

    // Left window in offset coordinates t = (lo-1) - ξ, ξ ∈ (0, 500].
    let t0 = lo - 1.0;
    let mut left = vec![(0.0, 1.0)];
    left.extend(geometric_panels(1.0, PAIRING_LEFT_SPAN, 24));
    let left_panels = capped_panels(&left, osc_cap(PAIRING_LEFT_SPAN));
    integral += gl.integrate_panels(&left_panels, &mut |xi| {
        let t = t0 - xi;
        Complex64::from_polar(1.0, a * t) * backward_core(&gl, alpha, phi, t)
    });

    // Tail closure at tL (to the right of the support D̂^αφ vanishes with
    // the envelope, so no closure is needed there).
    let t_l = t0 - PAIRING_LEFT_SPAN;
    let closure = if a != 0.0 {
        Complex64::from_polar(1.0, a * t_l) * backward_core(&gl, alpha, phi, t_l)
            / Complex64::new(0.0, a)
    } else {
        backward_convolution(&gl, alpha, phi, t_l)
    };

    Ok(-u.amplitude * (integral + closure))
}

/// `(g_{1-α} *' φ)(t) = (1/Γ(1-α)) ∫_0^∞ y^{-α} φ(t+y) dy`, the primitive of
/// the backward derivative; only needed left of the support where the
/// integrand is smooth.
fn backward_convolution(
    gl: &GaussLegendre,
    alpha: FractionalOrder,
    phi: &TestFunction,
    t: f64,
) -> Complex64 {
    let Some((lo, hi)) = phi.support() else {
        return Complex64::new(0.0, 0.0);
    };
    debug_assert!(t < lo);
    let w = phi.min_width().expect("support implies an active term");
    let a = alpha.value();
    let panels = capped_panels(&[(lo, hi)], 0.5 * w);
    gl.integrate_panels(&panels, &mut |s| (s - t).powf(-a) * phi.eval(s)) / gamma(1.0 - a)
}

/// Plain pairing `⟨u, φ⟩ = ∫ u(t) φ(t) dt` (bilinear, no conjugation).
pub fn signal_pairing(
    u: &ExponentialSignal,
    phi: &TestFunction,
    quad: &QuadratureSpec,
) -> Result<Complex64> {
    quad.validate()?;
    let Some((lo, hi)) = phi.support() else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    let w = phi.min_width().expect("support implies an active term");
    let gl = GaussLegendre::new(quad.nodes_per_panel);
    let cap = if u.frequency != 0.0 {
        (0.5 * w).min(quad.nodes_per_panel as f64 / (2.0 * u.frequency.abs()))
    } else {
        0.5 * w
    };
    let panels = capped_panels(&[(lo, hi)], cap);
    Ok(gl.integrate_panels(&panels, &mut |t| u.eval(t) * phi.eval(t)))
}

// ---------------------------------------------------------------------------
// Complex powers and Mittag-Leffler
// ---------------------------------------------------------------------------

/// Principal-branch `(ia)^α` for the crate's fractional orders;
/// `a = 0 ↦ 0`.
pub fn complex_power(alpha: FractionalOrder, a: f64) -> Complex64 {
    ipow(a, alpha.value())
}

/// One-parameter Mittag-Leffler function `E_α(z) = Σ z^n / Γ(αn+1)` for
/// α ∈ (0, 1] and |z| ≤ 5 (series budget).
///
/// Terms are formed as `exp(n·ln z - lnΓ(αn+1))` so the gamma factor never
/// overflows before the terms decay; summation is Kahan-compensated. The
/// series stops after three consecutive terms below 1e-16 in modulus.
pub fn mittag_leffler(alpha: f64, z: Complex64) -> Result<Complex64> {
    if !(alpha.is_finite() && alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(format!(
            "Mittag-Leffler order must lie in (0, 1], got {alpha}"
        )));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain("Mittag-Leffler argument must be finite".into()));
    }
    if z.norm() > 5.0 {
        return Err(Error::Domain(format!(
            "Mittag-Leffler argument budget is |z| <= 5, got |z| = {}",
            z.norm()
        )));
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }

    const MAX_TERMS: usize = 100_000;
    let ln_z = z.ln();
    let mut sum = KahanComplex::default();
    let mut below = 0usize;
    for n in 0..MAX_TERMS {
        let term = (ln_z * n as f64 - ln_gamma(alpha * n as f64 + 1.0)).exp();
        if !(term.re.is_finite() && term.im.is_finite()) {
            return Err(Error::NoConvergence(format!(
                "Mittag-Leffler term overflowed at n = {n} (alpha = {alpha}, |z| = {})",
                z.norm()
            )));
        }
        sum.add(term);
        if term.norm() < 1e-16 {
            below += 1;
            if below >= 3 {
                return Ok(sum.value());
            }
        } else {
            below = 0;
        }
    }
    Err(Error::NoConvergence(format!(
        "Mittag-Leffler series did not settle within {MAX_TERMS} terms (alpha = {alpha})"
    )))
}

#[derive(Default)]
struct KahanComplex {
    sum: Complex64,
    comp: Complex64,
}

impl KahanComplex {
    fn add(&mut self, x: Complex64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> Complex64 {
        self.sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn order(a: f64) -> FractionalOrder {
        FractionalOrder::new(a).unwrap()
    }

    fn sample_family() -> Vec<TestFunction> {
        vec![
            TestFunction::gaussian(0.0, 1.0).unwrap(),
            TestFunction::gaussian(-2.0, 0.5).unwrap(),
            TestFunction::monomial_gaussian(Complex64::new(0.7, -0.3), 2, 1.0, 2.0).unwrap(),
            TestFunction::gaussian(0.0, 1.0)
                .unwrap()
                .plus(&TestFunction::monomial_gaussian(Complex64::new(0.0, 1.0), 1, 3.0, 0.8).unwrap()),
        ]
    }

    // ---- TestFunction algebra ----

    #[test]
    fn translation_matches_pointwise_shift() {
        let phi = TestFunction::monomial_gaussian(Complex64::new(1.0, 2.0), 3, 0.5, 1.2).unwrap();
        let shifted = phi.translated(1.7);
        for &t in &[-3.0, -0.4, 0.0, 1.0, 2.9] {
            let want = phi.eval(t + 1.7);
            let got = shifted.eval(t);
            assert!((got - want).norm() <= 1e-12 * (1.0 + want.norm()));
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let phi = TestFunction::monomial_gaussian(Complex64::new(0.3, -1.1), 4, -0.7, 0.9).unwrap();
        let h = 1e-5;
        for &t in &[-2.0, -0.7, 0.1, 1.3] {
            let fd = (phi.eval(t + h) - phi.eval(t - h)) / (2.0 * h);
            let got = phi.eval_deriv(t);
            assert!((got - fd).norm() <= 1e-8 * (1.0 + fd.norm()), "t={t}");
        }
    }

    #[test]
    fn gaussian_moments_are_exact() {
        use crate::special::SQRT_PI;
        let phi = TestFunction::gaussian(0.0, 1.0).unwrap();
        assert_relative_eq!(phi.moment(0).re, SQRT_PI, max_relative = 1e-14);
        assert!(phi.moment(1).norm() < 1e-15);
        assert_relative_eq!(phi.moment(2).re, 0.5 * SQRT_PI, max_relative = 1e-14);
        // Shifted: ∫ t e^{-(t-c)²} dt = c√π.
        let phi = TestFunction::gaussian(1.5, 1.0).unwrap();
        assert_relative_eq!(phi.moment(1).re, 1.5 * SQRT_PI, max_relative = 1e-14);
    }

    #[test]
    fn l1_norms_of_unit_gaussian() {
        use crate::special::SQRT_PI;
        let phi = TestFunction::gaussian(0.0, 1.0).unwrap();
        assert_relative_eq!(phi.l1_norm(), SQRT_PI, max_relative = 1e-9);
        // ∫|φ'| = 2·max φ = 2 for a single bump.
        assert_relative_eq!(phi.deriv_l1_norm(), 2.0, max_relative = 1e-6);
    }

    #[test]
    fn fourier_transform_of_gaussian() {
        // F[e^{-t²}](σ) = √π e^{-σ²/4}.
        use crate::special::SQRT_PI;
        let phi = TestFunction::gaussian(0.0, 1.0).unwrap();
        for &sigma in &[0.0, 0.5, 2.0, 5.0] {
            let got = phi.fourier_transform(sigma, 16);
            let want = SQRT_PI * (-sigma * sigma / 4.0).exp();
            assert!((got - Complex64::new(want, 0.0)).norm() <= 1e-12 * (1.0 + want),
                "sigma={sigma}");
        }
    }

    // ---- Backward derivative ----

    #[test]
    fn matches_defining_form_across_family_and_orders() {
        let quad = QuadratureSpec::default();
        for &a in &[0.25, 0.5, 0.75] {
            let alpha = order(a);
            for phi in sample_family() {
                for &t in &[-3.0, -1.0, 0.0, 0.5, 2.0, 5.0] {
                    let got = backward_deriv(alpha, &phi, t, &quad).unwrap();
                    let want = defining_backward_deriv(alpha, &phi, t, 32).unwrap();
                    assert!(
                        (got - want).norm() <= 1e-10 * (1.0 + want.norm()),
                        "alpha={a} t={t}: |Δ|={:.3e}",
                        (got - want).norm()
                    );
                }
            }
        }
    }

    #[test]
    fn frozen_value_unit_gaussian_at_origin() {
        let quad = QuadratureSpec::default();
        let phi = TestFunction::gaussian(0.0, 1.0).unwrap();
        let got = backward_deriv(order(0.5), &phi, 0.0, &quad).unwrap();
        assert!(got.im.abs() < 1e-12);
        assert_relative_eq!(got.re, -0.6913673390364, max_relative = 1e-10);
    }

    #[test]
    fn zero_function_gives_exact_zero() {
        let quad = QuadratureSpec::default();
        let got = backward_deriv(order(0.5), &TestFunction::zero(), 0.3, &quad).unwrap();
        assert_eq!(got, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn far_field_matches_algebraic_asymptote() {
        // Far left of the support, D̂^αφ(t) ≈ M₀ |t|^{-α-1} / |Γ(-α)|.
        let quad = QuadratureSpec::default();
        let phi = TestFunction::gaussian(0.0, 1.0).unwrap();
        for &a in &[0.25, 0.5, 0.75] {
            let alpha = order(a);
            let t = -1e4;
            let got = backward_deriv(alpha, &phi, t, &quad).unwrap();
            let want = phi.moment(0).re * t.abs().powf(-a - 1.0) / crate::special::abs_gamma_neg(a);
            assert_relative_eq!(got.re, want, max_relative = 1e-2);
            assert!(got.im.abs() < 1e-3 * want);
        }
    }

    #[test]
    fn width_scaling_law() {
        // For φ_w(t) = φ(t/w): D̂^α φ_w(t) = w^{-α} (D̂^α φ)(t/w).
        let quad = QuadratureSpec::default();
        let alpha = order(0.5);
        let base = TestFunction::gaussian(0.0, 1.0).unwrap();
        for &w in &[2.0, 10.0, 1e3, 1e6] {
            let wide = TestFunction::gaussian(0.0, w).unwrap();
            let got = backward_deriv(alpha, &wide, 0.0, &quad).unwrap();
            let want = w.powf(-0.5) * backward_deriv(alpha, &base, 0.0, &quad).unwrap();
            assert!(
                (got - want).norm() <= 1e-9 * want.norm(),
                "w={w}: got {got}, want {want}"
            );
        }
        // A very wide bump is locally constant-like: the derivative is tiny
        // but *not* zero — it is exactly the w^{-α}-scaled base value.
        let wide = TestFunction::gaussian(0.0, 1e6).unwrap();
        let got = backward_deriv(alpha, &wide, 0.0, &quad).unwrap();
        assert!(got.norm() < 1e-3);
        assert_relative_eq!(got.re, -0.6913673390364e-3, max_relative = 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn translation_equivariance(s in -3.0f64..3.0, t in -4.0f64..4.0) {
            let quad = QuadratureSpec::default();
            let alpha = order(0.5);
            let phi = TestFunction::gaussian(0.5, 1.0).unwrap();
            let lhs = backward_deriv(alpha, &phi.translated(s), t, &quad).unwrap();
            let rhs = backward_deriv(alpha, &phi, t + s, &quad).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
        }

        #[test]
        fn conjugation_commutes(t in -3.0f64..3.0) {
            let quad = QuadratureSpec::default();
            let alpha = order(0.33);
            let phi = TestFunction::monomial_gaussian(Complex64::new(0.4, -0.9), 1, 0.3, 1.1).unwrap();
            let lhs = backward_deriv(alpha, &phi.conjugated(), t, &quad).unwrap();
            let rhs = backward_deriv(alpha, &phi, t, &quad).unwrap().conj();
            prop_assert!((lhs - rhs).norm() <= 1e-11 * (1.0 + rhs.norm()));
        }

        #[test]
        fn linearity(re1 in -2.0f64..2.0, im1 in -2.0f64..2.0,
                     re2 in -2.0f64..2.0, im2 in -2.0f64..2.0,
                     t in -2.0f64..2.0) {
            let quad = QuadratureSpec::default();
            let alpha = order(0.6);
            let c1 = Complex64::new(re1, im1);
            let c2 = Complex64::new(re2, im2);
            let f = TestFunction::gaussian(0.0, 1.0).unwrap();
            let g = TestFunction::monomial_gaussian(Complex64::new(1.0, 0.0), 2, 1.0, 0.7).unwrap();
            let combo = f.scaled(c1).plus(&g.scaled(c2));
            let lhs = backward_deriv(alpha, &combo, t, &quad).unwrap();
            let rhs = backward_deriv(alpha, &f, t, &quad).unwrap() * c1
                + backward_deriv(alpha, &g, t, &quad).unwrap() * c2;
            prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
        }
    }

    // ---- Weak pairing ----

    #[test]
    fn weak_pairing_recovers_symbol_on_oscillations() {
        let quad = QuadratureSpec::default();
        for &a in &[0.25, 0.5, 0.75] {
            let alpha = order(a);
            let u = ExponentialSignal::new(Complex64::new(1.0, 0.0), 1.0).unwrap();
            let phi = TestFunction::gaussian(0.0, 1.0).unwrap();
            let lhs = weak_pairing(alpha, &u, &phi, &quad).unwrap();
            let rhs = complex_power(alpha, 1.0) * signal_pairing(&u, &phi, &quad).unwrap();
            assert!(
                (lhs - rhs).norm() <= 1e-5 * (1.0 + rhs.norm()),
                "alpha={a}: |Δ|={:.3e}",
                (lhs - rhs).norm()
            );
        }
    }

    #[test]
    fn weak_pairing_annihilates_constants() {
        // ⟨D^α 1, φ⟩ = 0: the tail closure is what makes this reachable.
        let quad = QuadratureSpec::default();
        for &a in &[0.25, 0.5, 0.75] {
            let alpha = order(a);
            let u = ExponentialSignal::new(Complex64::new(1.0, 0.0), 0.0).unwrap();
            for phi in sample_family() {
                let got = weak_pairing(alpha, &u, &phi, &quad).unwrap();
                assert!(got.norm() <= 1e-8, "alpha={a}: {:.3e}", got.norm());
            }
        }
    }

    // ---- Mittag-Leffler ----

    /// erf by its entire series — plenty for |x| ≤ 2.5 at 1e-14.
    fn erf_series(x: f64) -> f64 {
        let mut term = x;
        let mut sum = 0.0;
        for n in 0..120 {
            sum += term / (2 * n + 1) as f64;
            term *= -x * x / (n + 1) as f64;
        }
        2.0 / crate::special::SQRT_PI * sum
    }

    #[test]
    fn mittag_leffler_at_zero_and_alpha_one() {
        assert_eq!(
            mittag_leffler(0.5, Complex64::new(0.0, 0.0)).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        // E_1(z) = e^z.
        let z = Complex64::new(0.3, 0.2);
        let got = mittag_leffler(1.0, z).unwrap();
        assert!((got - z.exp()).norm() < 1e-14);
    }

    #[test]
    fn mittag_leffler_half_matches_erfc_oracle() {
        // E_{1/2}(x) = e^{x²} erfc(-x) = e^{x²} (1 + erf(x)) on the real line.
        for &x in &[-1.0, -0.3, 0.2, 0.5, 1.0, 2.0] {
            let got = mittag_leffler(0.5, Complex64::new(x, 0.0)).unwrap();
            let want = (x * x).exp() * (1.0 + erf_series(x));
            assert_relative_eq!(got.re, want, max_relative = 1e-12);
            assert!(got.im.abs() < 1e-13 * want.abs().max(1.0));
        }
        // Frozen values (independent high-precision evaluation).
        let got = mittag_leffler(0.5, Complex64::new(0.5, 0.0)).unwrap();
        assert_relative_eq!(got.re, 1.9523604891825571, max_relative = 1e-13);
        let got = mittag_leffler(0.5, Complex64::new(2.0, 1.5)).unwrap();
        assert_relative_eq!(got.re, 10.867462239577854, max_relative = 1e-11);
        assert_relative_eq!(got.im, -3.0965521143001142, max_relative = 1e-11);
    }

    #[test]
    fn mittag_leffler_domain_errors() {
        assert!(mittag_leffler(0.0, Complex64::new(0.1, 0.0)).is_err());
        assert!(mittag_leffler(1.2, Complex64::new(0.1, 0.0)).is_err());
        assert!(mittag_leffler(0.5, Complex64::new(6.0, 0.0)).is_err());
        assert!(mittag_leffler(0.5, Complex64::new(f64::NAN, 0.0)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn complex_power_modulus(a in prop_oneof![-8.0f64..-0.05, 0.05f64..8.0],
                                 al in 0.05f64..0.95) {
            let alpha = order(al);
            let z = complex_power(alpha, a);
            prop_assert!((z.norm() - a.abs().powf(al)).abs() <= 1e-12 * z.norm());
            // arg = ± απ/2.
            let want_arg = al * std::f64::consts::FRAC_PI_2 * a.signum();
            prop_assert!((z.arg() - want_arg).abs() <= 1e-12);
        }
    }
}
