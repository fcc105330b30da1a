//! Densities and masses of the measures in the single-charge problem: Robin
//! measures, balayages, the σ_a family, signed equilibrium measures, the
//! equilibrium measure and the logarithmic reference case.

mod balayage;
mod density;
mod equilibrium;
mod logcase;
mod robin;
mod sigma;
mod signed;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::specfun::beta_fn;

pub use balayage::{
    bal_line_density, bal_realpoint_interval_density, bal_z_interval_density, balayage_mass, integral_i,
    superpose_atomic, BalayageMass,
};
pub use density::{EdgeLimit, Evaluator, IntervalDensity, LineDensity, MASS_TOL};
pub use equilibrium::{equilibrium_density, equilibrium_density_alternative, equilibrium_density_at};
pub use logcase::{log_case_reference, LogCase};
pub use robin::{interval_energy, robin_constant, robin_density};
pub use sigma::{sigma_density, sigma_mass, sigma_mass_closed_form};
pub use signed::{signed_endpoint_coeff, signed_eq_density, SignedDensityReport};

pub(crate) use signed::positive_part_halfwidth;

/// A problem instance: `Q(x) = −q|x − bi|^{-s}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldParams {
    pub s: f64,
    pub q: f64,
    pub b: f64,
}

impl FieldParams {
    pub fn new(s: f64, q: f64, b: f64) -> Result<Self> {
        let p = Self { s, q, b };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s > 0.0 && self.s < 1.0) {
            return Err(domain(format!("s must lie in (0, 1), got {}", self.s)));
        }
        if !(self.q > 0.0 && self.q.is_finite()) {
            return Err(domain(format!("charge q must be positive, got {}", self.q)));
        }
        if !(self.b > 0.0 && self.b.is_finite()) {
            return Err(domain(format!("height b must be positive, got {}", self.b)));
        }
        Ok(())
    }

    /// The external field `Q(x)`.
    pub fn field(&self, x: f64) -> f64 {
        -self.q * (x * x + self.b * self.b).powf(-0.5 * self.s)
    }

    pub fn with_q(self, q: f64) -> Self {
        Self { q, ..self }
    }
}

/// Beta-function constants that depend on `s` only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RieszConstants {
    pub s: f64,
    /// `(1 − s)/2`, the endpoint blow-up exponent of Robin and balayage densities.
    pub alpha: f64,
    /// `s/2 − 1`.
    pub p: f64,
    /// `B(1/2, (1 − s)/2)`.
    pub b_line: f64,
    /// `B((1 + s)/2, (1 − s)/2) = π / cos(πs/2)`.
    pub b_real: f64,
    /// `B(1/2, (1 + s)/2)`.
    pub b_robin: f64,
    /// `1 / b_real`.
    pub gamma_s: f64,
    /// `b_robin / b_real = √π/(Γ((1 − s)/2)Γ(1 + s/2))`.
    pub kappa: f64,
    /// `B((3 − s)/2, 1/2)`.
    pub b_gap: f64,
    /// `B((1 − s)/2, 3/2)`.
    pub b_sigma: f64,
}

impl RieszConstants {
    pub fn new(s: f64) -> Result<Self> {
        if !(s > 0.0 && s < 1.0) {
            return Err(domain(format!("s must lie in (0, 1), got {s}")));
        }
        let alpha = 0.5 * (1.0 - s);
        let b_line = beta_fn(0.5, alpha)?;
        let b_real = beta_fn(0.5 * (1.0 + s), alpha)?;
        let b_robin = beta_fn(0.5, 0.5 * (1.0 + s))?;
        Ok(Self {
            s,
            alpha,
            p: 0.5 * s - 1.0,
            b_line,
            b_real,
            b_robin,
            gamma_s: 1.0 / b_real,
            kappa: b_robin / b_real,
            b_gap: beta_fn(alpha + 1.0, 0.5)?,
            b_sigma: beta_fn(alpha, 1.5)?,
        })
    }
}

/// A point charge at `re + i·im` with positive weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub re: f64,
    pub im: f64,
    pub weight: f64,
}

/// A finite positive combination of point masses in the plane.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AtomicMeasure {
    pub atoms: Vec<Atom>,
}

impl AtomicMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            if !(a.weight > 0.0 && a.weight.is_finite()) || !a.re.is_finite() || !a.im.is_finite() {
                return Err(domain(format!("invalid atom {a:?}")));
            }
        }
        Ok(Self { atoms })
    }

    /// A single atom at `bi`.
    pub fn single(b: f64, weight: f64) -> Result<Self> {
        Self::new(vec![Atom { re: 0.0, im: b, weight }])
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// Riesz potential `Σ wᵢ |x − zᵢ|^{-s}` at the real point `x`.
    pub fn potential(&self, s: f64, x: f64) -> f64 {
        self.atoms
            .iter()
            .map(|a| a.weight * ((x - a.re).powi(2) + a.im * a.im).powf(-0.5 * s))
            .sum()
    }
}
