use super::{EdgeLimit, IntervalDensity, RieszConstants};
use crate::error::{domain, Result};
use crate::quadrature::SingularityProfile;
use crate::specfun::gamma_fn;

pub(crate) fn check_half_width(a: f64) -> Result<()> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(domain(format!("half-width a must be positive, got {a}")));
    }
    Ok(())
}

/// `C_a = 1/(a^s B(1/2, (1+s)/2))`.
pub fn robin_constant(s: f64, a: f64) -> Result<f64> {
    check_half_width(a)?;
    let c = RieszConstants::new(s)?;
    Ok(1.0 / (a.powf(s) * c.b_robin))
}

/// Equilibrium measure of `[−a, a]`: `C_a (a² − x²)^{-(1−s)/2}`.
pub fn robin_density(s: f64, a: f64) -> Result<IntervalDensity> {
    let ca = robin_constant(s, a)?;
    let alpha = 0.5 * (1.0 - s);
    let edge = EdgeLimit {
        coeff: ca,
        exponent: -alpha,
    };
    Ok(
        IntervalDensity::new(a, SingularityProfile::symmetric(-alpha), move |_, eps| ca * eps.powf(-alpha))?
            .with_edge_limits(edge, edge),
    )
}

/// Riesz s-energy of `[−a, a]`.
pub fn interval_energy(s: f64, a: f64) -> Result<f64> {
    check_half_width(a)?;
    RieszConstants::new(s)?;
    Ok(gamma_fn(0.5 * (1.0 - s))? * gamma_fn(1.0 + s)? * a.powf(-s) / (2f64.powf(s) * gamma_fn(0.5 * (1.0 + s))?))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::riesz_potential;
    use crate::specfun::beta_fn;
    use approx::assert_relative_eq;

    #[test]
    fn unit_mass_and_center_value() {
        let w = robin_density(0.5, 1.0).unwrap();
        assert_relative_eq!(w.mass().unwrap(), 1.0, max_relative = 1e-10);
        assert_relative_eq!(w.evaluate(0.0), 1.0 / beta_fn(0.5, 0.75).unwrap(), max_relative = 1e-13);
        assert_relative_eq!(w.evaluate(0.0), 0.417_313_420_837_036_6, max_relative = 1e-12);
        for x in [0.1, 0.5, 0.999] {
            assert_eq!(w.evaluate(x), w.evaluate(-x));
        }
    }

    #[test]
    fn energy_closed_form() {
        assert_relative_eq!(interval_energy(0.5, 1.0).unwrap(), 1.854_074_677_301_372, max_relative = 1e-12);
        let s = 0.3;
        assert_relative_eq!(
            interval_energy(s, 2.0).unwrap(),
            2f64.powf(-s) * interval_energy(s, 1.0).unwrap(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn potential_is_constant_on_support() {
        for (s, a) in [(0.5, 1.0), (0.25, 2.0), (0.8, 0.5)] {
            let w = robin_density(s, a).unwrap();
            let want = interval_energy(s, a).unwrap();
            for x in [0.0, 0.3 * a, -0.7 * a, 0.999 * a, a] {
                let u = riesz_potential(&w, s, x).unwrap();
                assert_relative_eq!(u, want, max_relative = 1e-8);
            }
            // below the energy off the support
            assert!(riesz_potential(&w, s, 1.5 * a).unwrap() < want);
        }
    }
}
