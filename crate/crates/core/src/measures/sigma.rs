use super::balayage::inner_opts;
use super::robin::check_half_width;
use super::{FieldParams, IntervalDensity, RieszConstants};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_semi_infinite_with, SemiInfinite, SingularityProfile};
use crate::specfun::{hyp2f1, hyp2f1_complement};

/// Below this `ε/X` the closed form of [`sigma_unit`] cancels too much.
const SIGMA_CANCELLATION_ZONE: f64 = 1e-4;

/// `σ'_a(x)/q` at `X = x² + b²`, `ε = a² − x²`:
///
/// `b^{1−s}/(B₁B₂) ∫₀^∞ v^{−(1+s)/2}/(1+v) [X^p − (X + ε(1+v))^p] dv`,
/// evaluated as `X^p B₂ − A^p B(α, 3/2) ₂F₁(1−s/2, α; 2−s/2; 1 − ε/A)` away
/// from the endpoints and by quadrature close to them.
pub(crate) fn sigma_unit(k: &RieszConstants, b: f64, big_x: f64, eps: f64) -> Result<f64> {
    if eps <= 0.0 {
        return Ok(0.0);
    }
    if eps < SIGMA_CANCELLATION_ZONE * big_x {
        return sigma_unit_quadrature(k, b, big_x, eps);
    }
    let (alpha, p) = (k.alpha, k.p);
    let big_a = big_x + eps;
    let f = hyp2f1_complement(-p, alpha, 1.0 - p, eps / big_a)?;
    let v = big_x.powf(p) * k.b_real - big_a.powf(p) * k.b_sigma * f;
    Ok(b.powf(1.0 - k.s) / (k.b_line * k.b_real) * v)
}

/// [`sigma_unit`] by quadrature; the bracket is formed with `expm1`/`ln1p`
/// so there is no cancellation near the endpoints.
pub(crate) fn sigma_unit_quadrature(k: &RieszConstants, b: f64, big_x: f64, eps: f64) -> Result<f64> {
    if eps <= 0.0 {
        return Ok(0.0);
    }
    let (alpha, p) = (k.alpha, k.p);
    let xp = big_x.powf(p);
    let r = eps / big_x;
    let g = move |v: f64| {
        let bracket = -xp * (p * (r * (1.0 + v)).ln_1p()).exp_m1();
        v.powf(alpha - 1.0) / (1.0 + v) * bracket
    };
    let tail = SemiInfinite {
        origin_exponent: alpha - 1.0,
        tail_decay: Some(2.0 - alpha),
        scale: (1.0 / r).max(1.0),
    };
    let v = integrate_semi_infinite_with(g, &tail, &inner_opts())?.value;
    Ok(b.powf(1.0 - k.s) / (k.b_line * k.b_real) * v)
}

/// Density of σ_a, the positive measure with `U^{σ_a} + Q ≡ E_a` on `[−a, a]`.
pub fn sigma_density(params: &FieldParams, a: f64) -> Result<IntervalDensity> {
    params.validate()?;
    check_half_width(a)?;
    let k = RieszConstants::new(params.s)?;
    let (q, b) = (params.q, params.b);
    let d = IntervalDensity::new(a, SingularityProfile::symmetric(0.5 * (1.0 + params.s)), move |x, eps| {
        sigma_unit(&k, b, x * x + b * b, eps).map_or(f64::NAN, |v| q * v)
    })?;
    // a coarse positivity audit; values are tiny near the edges, so the
    // threshold is absolute
    for i in 0..33 {
        let x = a * (i as f64 / 33.0);
        let v = d.evaluate(x);
        if !(v >= -1e-12) {
            return Err(Error::Consistency(format!(
                "σ density negative ({v}) at x = {x}, a = {a}"
            )));
        }
    }
    Ok(d)
}

/// `‖σ_a‖` by quadrature of [`sigma_density`].
pub fn sigma_mass(params: &FieldParams, a: f64) -> Result<f64> {
    sigma_density(params, a)?.mass()
}

/// `‖σ_a‖ = qκ c^{s/2} [F_s(c) − (1 − c)^{(1−s)/2}]`, `c = a²/(a² + b²)`.
pub fn sigma_mass_closed_form(params: &FieldParams, a: f64) -> Result<f64> {
    params.validate()?;
    check_half_width(a)?;
    let s = params.s;
    let k = RieszConstants::new(s)?;
    let c = a * a / (a * a + params.b * params.b);
    let f = hyp2f1(0.5 * s, 0.5 * (1.0 + s), 1.0 + 0.5 * s, c)?;
    Ok(params.q * k.kappa * c.powf(0.5 * s) * (f - (1.0 - c).powf(k.alpha)))
}
