use super::{bal_z_interval_density, robin_density, sigma_density, FieldParams, IntervalDensity};
use crate::error::Result;
use crate::solver::{critical_halfwidth, require_admissible};

/// Density of the equilibrium measure `μ_Q` on `[−ã, ã]`.
pub fn equilibrium_density(params: &FieldParams) -> Result<IntervalDensity> {
    let a_tilde = critical_halfwidth(params)?;
    equilibrium_density_at(params, a_tilde)
}

/// `μ'_Q = σ'_ã` for a precomputed `ã`.
pub fn equilibrium_density_at(params: &FieldParams, a_tilde: f64) -> Result<IntervalDensity> {
    params.validate()?;
    require_admissible(params.q)?;
    sigma_density(params, a_tilde)
}

/// `q Bal'(δ_z, [−ã, ã]) − (q m_ã − 1) ω'`, with `m_ã` by quadrature.
pub fn equilibrium_density_alternative(params: &FieldParams, a_tilde: f64) -> Result<IntervalDensity> {
    params.validate()?;
    require_admissible(params.q)?;
    let bal = bal_z_interval_density(params, a_tilde)?;
    let m = bal.mass()?;
    let robin = robin_density(params.s, a_tilde)?;
    IntervalDensity::linear_combination(&[(params.q, &bal), (-(params.q * m - 1.0), &robin)])
}
