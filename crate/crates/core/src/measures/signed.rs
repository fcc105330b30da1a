use serde::{Deserialize, Serialize};

use super::sigma::sigma_unit;
use super::{bal_z_interval_density, robin_constant, EdgeLimit, FieldParams, IntervalDensity, RieszConstants};
use crate::error::{Error, Result};
use crate::quadrature::SingularityProfile;

/// Signed equilibrium measure `η_a` of `[−a, a]` and its key features.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignedDensityReport {
    pub half_width: f64,
    /// `lim (a² − x²)^{(1−s)/2} η'_a(x)` at `x → ±a`.
    pub endpoint_coeff: f64,
    /// Half-width of the support of the positive part.
    pub positive_halfwidth: f64,
    /// `m_a`, the mass of the balayage of `δ_{bi}`.
    pub balayage_mass: f64,
    pub total_mass: f64,
    #[serde(skip)]
    pub density: Option<IntervalDensity>,
}

/// `q γ_s b^{1−s}/√(a² + b²) − (q m_a − 1) C_a`, from a known `m_a`.
pub(crate) fn endpoint_coeff_from_mass(params: &FieldParams, a: f64, m_a: f64) -> Result<f64> {
    let k = RieszConstants::new(params.s)?;
    let (s, q, b) = (params.s, params.q, params.b);
    let edge = k.gamma_s * b.powf(1.0 - s) / (a * a + b * b).sqrt();
    Ok(q * edge - (q * m_a - 1.0) * robin_constant(s, a)?)
}

/// Endpoint coefficient of `η_a`; `m_a` comes from quadrature of the balayage.
pub fn signed_endpoint_coeff(params: &FieldParams, a: f64) -> Result<f64> {
    let m_a = bal_z_interval_density(params, a)?.mass()?;
    endpoint_coeff_from_mass(params, a, m_a)
}

/// `η'_a = σ'_a + coeff·(a² − x²)^{−(1−s)/2}`, which equals
/// `q Bal'(δ_z) − (q m_a − 1) ω'` without the endpoint cancellation.
pub(crate) fn signed_density_from_coeff(params: &FieldParams, a: f64, coeff: f64) -> Result<IntervalDensity> {
    let k = RieszConstants::new(params.s)?;
    let (q, b, alpha) = (params.q, params.b, k.alpha);
    let edge = EdgeLimit {
        coeff,
        exponent: -alpha,
    };
    let d = IntervalDensity::new(a, SingularityProfile::symmetric(-alpha), move |x, eps| {
        sigma_unit(&k, b, x * x + b * b, eps).map_or(f64::NAN, |v| q * v + coeff * eps.powf(-alpha))
    })?;
    Ok(d.with_edge_limits(edge, edge))
}

pub fn signed_eq_density(params: &FieldParams, a: f64) -> Result<SignedDensityReport> {
    params.validate()?;
    let m_a = bal_z_interval_density(params, a)?.mass()?;
    let coeff = endpoint_coeff_from_mass(params, a, m_a)?;
    let density = signed_density_from_coeff(params, a, coeff)?;
    let positive_halfwidth = positive_part_halfwidth(params, a, coeff)?;
    Ok(SignedDensityReport {
        half_width: a,
        endpoint_coeff: coeff,
        positive_halfwidth,
        balayage_mass: m_a,
        total_mass: density.mass()?,
        density: Some(density),
    })
}

/// Largest `a′ ∈ (0, a]` with `η'_a ≥ 0` on `[−a′, a′]`. Works with
/// `g(x) = σ'_a(x)(a² − x²)^{(1−s)/2} + coeff`, which has the sign of `η'_a`.
pub(crate) fn positive_part_halfwidth(params: &FieldParams, a: f64, coeff: f64) -> Result<f64> {
    if coeff >= 0.0 {
        return Ok(a);
    }
    let k = RieszConstants::new(params.s)?;
    let b = params.b;
    let g = |x: f64| -> Result<f64> {
        let eps = (a - x) * (a + x);
        Ok(params.q * sigma_unit(&k, b, x * x + b * b, eps)? * eps.powf(k.alpha) + coeff)
    };
    // isolate the sign change
    let n = 32;
    let mut changes = 0;
    let mut prev = g(0.0)?;
    if prev <= 0.0 {
        return Err(Error::Root {
            what: "positive support half-width",
            reason: format!("signed density is non-positive at the origin (a = {a})"),
        });
    }
    for i in 1..n {
        let v = g(a * i as f64 / n as f64)?;
        if (v > 0.0) != (prev > 0.0) {
            changes += 1;
        }
        prev = v;
    }
    if changes > 1 {
        return Err(Error::Root {
            what: "positive support half-width",
            reason: format!("{changes} sign changes of the signed density on (0, {a})"),
        });
    }
    let mut hi = a * (1.0 - 1e-12);
    let mut lo = 0.5 * a;
    while g(lo)? <= 0.0 {
        hi = lo;
        lo *= 0.5;
    }
    if g(hi)? > 0.0 {
        // the sign change is closer to the edge than the bracket resolves
        return Ok(hi);
    }
    while hi - lo > 1e-10 * a {
        let mid = 0.5 * (lo + hi);
        if g(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{equilibrium_density_at, robin_density};
    use approx::assert_relative_eq;

    const A_TILDE: f64 = 1.442_271_172_624_855_8;

    #[test]
    fn charge_below_one_is_positive_everywhere() {
        let p = FieldParams::new(0.5, 0.5, 1.0).unwrap();
        for a in [0.5, 3.0, 50.0] {
            let r = signed_eq_density(&p, a).unwrap();
            assert!(r.endpoint_coeff > 0.0);
            assert_eq!(r.positive_halfwidth, a);
        }
    }

    #[test]
    fn unit_total_mass() {
        for (q, a) in [(5.0, 0.3), (5.0, 4.0), (2.0, 1.0), (0.5, 2.0)] {
            let p = FieldParams::new(0.5, q, 1.0).unwrap();
            let r = signed_eq_density(&p, a).unwrap();
            assert!((r.total_mass - 1.0).abs() < 1e-8, "q={q} a={a}: {}", r.total_mass);
        }
    }

    #[test]
    fn endpoint_coefficient_sign() {
        let p = FieldParams::new(0.5, 5.0, 1.0).unwrap();
        assert!(signed_endpoint_coeff(&p, 4.0).unwrap() < 0.0);
        assert!(signed_endpoint_coeff(&p, 0.12).unwrap() > 0.0);
        assert!(signed_endpoint_coeff(&p, A_TILDE).unwrap().abs() < 1e-9);
        let mut prev = f64::INFINITY;
        for a in [1.2, 1.4, 1.5, 2.0] {
            let c = signed_endpoint_coeff(&p, a).unwrap();
            assert!(c < prev);
            prev = c;
        }
    }

    #[test]
    fn matches_balayage_minus_robin() {
        let p = FieldParams::new(0.5, 5.0, 1.0).unwrap();
        for a in [0.5, 4.0] {
            let r = signed_eq_density(&p, a).unwrap();
            let eta = r.density.unwrap();
            let bal = bal_z_interval_density(&p, a).unwrap();
            let w = robin_density(0.5, a).unwrap();
            let m = bal.mass().unwrap();
            for i in 0..=40 {
                let x = a * (-0.999 + 1.998 * i as f64 / 40.0);
                let want = p.q * bal.evaluate(x) - (p.q * m - 1.0) * w.evaluate(x);
                assert_relative_eq!(eta.evaluate(x), want, max_relative = 1e-10, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn critical_signed_measure_is_the_equilibrium() {
        let p = FieldParams::new(0.5, 5.0, 1.0).unwrap();
        let eta = signed_eq_density(&p, A_TILDE).unwrap().density.unwrap();
        let mu = equilibrium_density_at(&p, A_TILDE).unwrap();
        // the coefficient is zero only to solver accuracy, so stay off ±ã
        for i in 1..100 {
            let x = A_TILDE * (-1.0 + 2.0 * i as f64 / 100.0);
            assert!((eta.evaluate(x) - mu.evaluate(x)).abs() < 1e-8);
        }
    }

    #[test]
    fn positive_part_support() {
        let p = FieldParams::new(0.5, 5.0, 1.0).unwrap();
        let r4 = signed_eq_density(&p, 4.0).unwrap();
        assert!(r4.positive_halfwidth < 4.0 && r4.positive_halfwidth > A_TILDE);
        let eta = r4.density.unwrap();
        let x = r4.positive_halfwidth;
        assert!(eta.evaluate(x - 1e-6) > 0.0 && eta.evaluate(x + 1e-6) < 0.0);
        assert_eq!(signed_eq_density(&p, 1.0).unwrap().positive_halfwidth, 1.0);
        let a = A_TILDE * (1.0 + 1e-3);
        let near = signed_eq_density(&p, a).unwrap().positive_halfwidth;
        assert!(near <= a && near > A_TILDE * (1.0 - 1e-3));
    }
}
