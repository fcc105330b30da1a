use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::IntervalDensity;
use crate::error::{domain, Result};
use crate::quadrature::SingularityProfile;

/// Logarithmic (s = 0) equilibrium in the field of a charge `q > 1` at `bi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogCase {
    pub q: f64,
    pub b: f64,
    /// `√(2q − 1) b/(q − 1)`.
    pub a_tilde: f64,
}

pub fn log_case_reference(q: f64, b: f64) -> Result<LogCase> {
    if !(q > 1.0 && q.is_finite()) {
        return Err(domain(format!("the logarithmic reference case needs q > 1, got {q}")));
    }
    if !(b > 0.0 && b.is_finite()) {
        return Err(domain(format!("height b must be positive, got {b}")));
    }
    Ok(LogCase {
        q,
        b,
        a_tilde: (2.0 * q - 1.0).sqrt() * b / (q - 1.0),
    })
}

impl LogCase {
    /// `(q − 1)√(ã² − x²)/(π(x² + b²))`; the factor `q − 1` gives unit mass.
    pub fn density(&self, x: f64) -> f64 {
        let a = self.a_tilde;
        if !(x.abs() < a) {
            return 0.0;
        }
        (self.q - 1.0) * ((a - x) * (a + x)).sqrt() / (PI * (x * x + self.b * self.b))
    }

    /// `(q − 1)(√(ã² + b²) − b)/b`, from `∫√(a² − x²)/(x² + b²) = π(√(a² + b²) − b)/b`.
    pub fn mass_closed_form(&self) -> f64 {
        let (a, b) = (self.a_tilde, self.b);
        (self.q - 1.0) * ((a * a + b * b).sqrt() - b) / b
    }

    pub fn as_interval_density(&self) -> Result<IntervalDensity> {
        let (q, b) = (self.q, self.b);
        IntervalDensity::new(self.a_tilde, SingularityProfile::symmetric(0.5), move |x, eps| {
            (q - 1.0) * eps.max(0.0).sqrt() / (PI * (x * x + b * b))
        })
    }
}
