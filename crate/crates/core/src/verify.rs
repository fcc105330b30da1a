//! Numerical checks of the equilibrium conditions: Frostman inequalities,
//! endpoint exponents, and the weakly admissible case `q = 1`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::measures::{bal_line_density, bal_z_interval_density, equilibrium_density_at, FieldParams, IntervalDensity};
use crate::quadrature::{riesz_potential_with, QuadratureOptions};
use crate::solver::{critical_halfwidth, equilibrium_constant};

/// Exterior test points, in units of the support half-width.
pub const EXTERIOR_MULTIPLES: [f64; 5] = [1.1, 1.5, 2.0, 5.0, 10.0];
/// Interior grids stop this fraction of the half-width short of the endpoints.
pub const INTERIOR_MARGIN: f64 = 1e-3;
/// Distances to the endpoint used by [`endpoint_exponent_fit`], relative to `a`.
pub const FIT_WINDOW: (f64, f64) = (1e-5, 1e-2);
/// Largest RMS residual of the log-log fit that is accepted.
pub const FIT_RESIDUAL_MAX: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrostmanReport {
    pub on_support_max: f64,
    pub on_support_min: f64,
    pub constancy_gap: f64,
    /// `min (U + Q − F_Q)` over the exterior test points.
    pub off_support_min_excess: f64,
    #[serde(rename = "F_Q_used")]
    pub f_q_used: f64,
    pub half_width: f64,
    pub tol: f64,
    pub passed: bool,
}

/// `U^{μ_Q} + Q` against `F_Q` on `grid_size` interior points and at the
/// exterior test points.
pub fn frostman_check(params: &FieldParams, grid_size: usize, tol: f64) -> Result<FrostmanReport> {
    frostman_check_with(params, grid_size, tol, &QuadratureOptions::default())
}

pub fn frostman_check_with(
    params: &FieldParams,
    grid_size: usize,
    tol: f64,
    opts: &QuadratureOptions,
) -> Result<FrostmanReport> {
    let a = critical_halfwidth(params)?;
    let mu = equilibrium_density_at(params, a)?;
    let f_q = equilibrium_constant(params)?;
    frostman_check_density(params, &mu, f_q, grid_size, tol, opts)
}

/// The same check for any density on `[−a, a]` and a candidate constant.
pub fn frostman_check_density(
    params: &FieldParams,
    density: &IntervalDensity,
    constant: f64,
    grid_size: usize,
    tol: f64,
    opts: &QuadratureOptions,
) -> Result<FrostmanReport> {
    params.validate()?;
    if grid_size < 2 {
        return Err(domain(format!("grid_size must be at least 2, got {grid_size}")));
    }
    let s = params.s;
    let a = density.half_width();
    let total = |x: f64| -> Result<f64> { Ok(riesz_potential_with(density, s, x, opts)? + params.field(x)) };
    let lo = -a * (1.0 - INTERIOR_MARGIN);
    let step = 2.0 * a * (1.0 - INTERIOR_MARGIN) / (grid_size - 1) as f64;
    let (mut max, mut min) = (f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..grid_size {
        let v = total(lo + step * i as f64)?;
        max = max.max(v);
        min = min.min(v);
    }
    let mut excess = f64::INFINITY;
    for m in EXTERIOR_MULTIPLES {
        for x in [m * a, -m * a] {
            excess = excess.min(total(x)? - constant);
        }
    }
    let gap = max - min;
    Ok(FrostmanReport {
        on_support_max: max,
        on_support_min: min,
        constancy_gap: gap,
        off_support_min_excess: excess,
        f_q_used: constant,
        half_width: a,
        tol,
        passed: gap <= tol && excess >= -tol && (0.5 * (max + min) - constant).abs() <= tol.max(1e-12),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// Least-squares slope of `ln ρ` against the log distance to an endpoint.
pub fn endpoint_exponent_fit(density: &IntervalDensity, side: Side) -> Result<f64> {
    let a = density.half_width();
    let n = 41;
    let (lo, hi) = (FIT_WINDOW.0.ln(), FIT_WINDOW.1.ln());
    let mut pts = Vec::with_capacity(n);
    for i in 0..n {
        let d = a * (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp();
        let x = match side {
            Side::Left => d - a,
            Side::Right => a - d,
        };
        let v = density.evaluate_gap(x, d * (2.0 * a - d));
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Consistency(format!(
                "density is not positive near the endpoint (ρ = {v} at distance {d})"
            )));
        }
        pts.push((d.ln(), v.ln()));
    }
    let nf = n as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let rms = (pts
        .iter()
        .map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2))
        .sum::<f64>()
        / nf)
        .sqrt();
    if rms > FIT_RESIDUAL_MAX {
        return Err(Error::Consistency(format!("endpoint exponent fit residual {rms:e} is too large")));
    }
    Ok(slope)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeaklyAdmissibleReport {
    pub s: f64,
    pub b: f64,
    /// `max |U^{Bal(δ_z, ℝ)}(x) − |x − bi|^{−s}|` over the test points.
    pub max_potential_gap: f64,
    pub total_mass: f64,
    /// Mean of `U + Q` over the test points; zero for `q = 1`.
    pub equilibrium_constant: f64,
    pub tol: f64,
    pub passed: bool,
}

/// For `q = 1` the equilibrium measure is the balayage of `δ_{bi}` onto ℝ
/// and `U + Q ≡ 0`.
pub fn weakly_admissible_check(s: f64, b: f64, tol: f64) -> Result<WeaklyAdmissibleReport> {
    let params = FieldParams::new(s, 1.0, b)?;
    let bal = bal_line_density(s, b)?;
    let opts = QuadratureOptions::with_tol(1e-11);
    let pts = [0.0, b, -b, 5.0 * b, -5.0 * b, 20.0 * b, -20.0 * b];
    let mut worst: f64 = 0.0;
    let mut sum = 0.0;
    for x in pts {
        let v = bal.potential(s, x, &opts)? + params.field(x);
        worst = worst.max(v.abs());
        sum += v;
    }
    let total_mass = bal.mass()?;
    Ok(WeaklyAdmissibleReport {
        s,
        b,
        max_potential_gap: worst,
        total_mass,
        equilibrium_constant: sum / pts.len() as f64,
        tol,
        passed: worst <= tol && (total_mass - 1.0).abs() <= tol,
    })
}

/// Frostman conditions plus endpoint exponents of `μ_Q` and of the raw
/// balayage onto `[−ã, ã]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub frostman: FrostmanReport,
    pub equilibrium_exponent_left: f64,
    pub equilibrium_exponent_right: f64,
    pub expected_equilibrium_exponent: f64,
    pub balayage_exponent: f64,
    pub expected_balayage_exponent: f64,
    pub exponent_tol: f64,
    pub passed: bool,
}

pub const EXPONENT_TOL: f64 = 0.05;

pub fn verify_all(params: &FieldParams, grid_size: usize, tol: f64) -> Result<VerificationReport> {
    let frostman = frostman_check(params, grid_size, tol)?;
    let a = frostman.half_width;
    let mu = equilibrium_density_at(params, a)?;
    let left = endpoint_exponent_fit(&mu, Side::Left)?;
    let right = endpoint_exponent_fit(&mu, Side::Right)?;
    let bal = bal_z_interval_density(params, a)?;
    let bal_exp = endpoint_exponent_fit(&bal, Side::Right)?;
    let s = params.s;
    let (want_mu, want_bal) = (0.5 * (1.0 + s), -0.5 * (1.0 - s));
    let ok = |v: f64, w: f64| (v - w).abs() <= EXPONENT_TOL;
    let passed = frostman.passed && ok(left, want_mu) && ok(right, want_mu) && ok(bal_exp, want_bal);
    Ok(VerificationReport {
        frostman,
        equilibrium_exponent_left: left,
        equilibrium_exponent_right: right,
        expected_equilibrium_exponent: want_mu,
        balayage_exponent: bal_exp,
        expected_balayage_exponent: want_bal,
        exponent_tol: EXPONENT_TOL,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{robin_density, sigma_density, signed_eq_density};
    use crate::solver::sigma_constant;

    fn p5() -> FieldParams {
        FieldParams::new(0.5, 5.0, 1.0).unwrap()
    }

    #[test]
    fn frostman_for_charge_five() {
        let r = frostman_check(&p5(), 41, 1e-6 * 2.849).unwrap();
        assert!(r.passed, "{r:?}");
        assert!((r.f_q_used + 2.8490).abs() < 1e-4);
        assert!(r.constancy_gap < 1e-6 * r.f_q_used.abs());
        assert!(r.off_support_min_excess > 0.0);
        assert!((r.on_support_max - r.f_q_used).abs() < 1e-8);
    }

    #[test]
    fn loose_quadrature_widens_the_gap() {
        let p = p5();
        let loose = frostman_check_with(&p, 21, 1.0, &QuadratureOptions::with_tol(1e-3)).unwrap();
        let tight = frostman_check_with(&p, 21, 1.0, &QuadratureOptions::with_tol(1e-4)).unwrap();
        assert!(tight.constancy_gap <= loose.constancy_gap);
    }

    #[test]
    fn narrow_intervals_fail_outside() {
        let p = p5();
        let opts = QuadratureOptions::default();
        for a in [0.5, 1.0, 1.3] {
            // σ_a is constant on its support for every a and stays above E_a
            // outside, being the equilibrium measure of its own mass
            let sigma = sigma_density(&p, a).unwrap();
            let r = frostman_check_density(&p, &sigma, sigma_constant(&p, a), 21, 1e-7, &opts).unwrap();
            assert!(r.constancy_gap < 1e-7);
            assert!(r.off_support_min_excess > 0.0);
            // the unit-mass signed measure of a too narrow interval violates
            // the exterior inequality
            let eta = signed_eq_density(&p, a).unwrap().density.unwrap();
            let f = riesz_potential_with(&eta, p.s, 0.0, &opts).unwrap() + p.field(0.0);
            let r = frostman_check_density(&p, &eta, f, 21, 1e-7, &opts).unwrap();
            assert!(r.constancy_gap < 1e-7);
            assert!(r.off_support_min_excess < 0.0);
            assert!(!r.passed);
        }
    }

    #[test]
    fn exponents() {
        for s in [0.25, 0.5, 0.75] {
            let p = FieldParams::new(s, 5.0, 1.0).unwrap();
            let a = critical_halfwidth(&p).unwrap();
            let mu = equilibrium_density_at(&p, a).unwrap();
            for side in [Side::Left, Side::Right] {
                let e = endpoint_exponent_fit(&mu, side).unwrap();
                assert!((e - 0.5 * (1.0 + s)).abs() < 0.05, "s={s}: {e}");
            }
            let bal = bal_z_interval_density(&p, a).unwrap();
            let e = endpoint_exponent_fit(&bal, Side::Left).unwrap();
            assert!((e + 0.5 * (1.0 - s)).abs() < 0.05);
        }
        let w = robin_density(0.5, 2.0).unwrap();
        assert!((endpoint_exponent_fit(&w, Side::Right).unwrap() + 0.25).abs() < 1e-3);
    }

    #[test]
    fn exponent_fit_rejects_sign_changes() {
        let d = IntervalDensity::new(1.0, crate::quadrature::SingularityProfile::regular(), |x, _| x).unwrap();
        assert!(endpoint_exponent_fit(&d, Side::Left).is_err());
    }

    #[test]
    fn weakly_admissible() {
        let r = weakly_admissible_check(0.5, 1.0, 1e-6).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.equilibrium_constant.abs() < 1e-6);
        assert!((r.total_mass - 1.0).abs() < 1e-8);
    }

    #[test]
    fn full_report_round_trips() {
        let r = verify_all(&p5(), 11, 1e-5).unwrap();
        assert!(r.passed);
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"F_Q_used\""));
        assert_eq!(serde_json::from_str::<VerificationReport>(&s).unwrap(), r);
    }
}
