use serde::{Deserialize, Serialize};

use super::robin::check_half_width;
use super::{sigma_mass, AtomicMeasure, EdgeLimit, FieldParams, IntervalDensity, LineDensity, RieszConstants};
use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_semi_infinite_with, QuadratureOptions, SemiInfinite, SingularityProfile};
use crate::specfun::hyp2f1_complement;

/// Tolerances for integrals evaluated inside density evaluators.
pub(crate) fn inner_opts() -> QuadratureOptions {
    QuadratureOptions {
        abs_tol: 1e-300,
        rel_tol: 1e-12,
        max_evals: 1 << 15,
    }
}

/// ∫₀^∞ u^α (u + A)^p / (u + ε) du for `A = a² + b²`, `ε = a² − x²`, in the
/// closed form `ε^α A^p B(α+1, 1/2) ₂F₁(1−s/2, α+1; 2−s/2; 1 − ε/A)`.
pub(crate) fn i_gap(k: &RieszConstants, big_a: f64, eps: f64) -> Result<f64> {
    if eps <= 0.0 {
        return Ok(k.b_line / big_a.sqrt());
    }
    let (alpha, p) = (k.alpha, k.p);
    let f = hyp2f1_complement(-p, alpha + 1.0, 1.0 - p, eps / big_a)?;
    Ok(eps.powf(alpha) * big_a.powf(p) * k.b_gap * f)
}

/// [`i_gap`] by direct quadrature of its defining integral.
#[cfg(test)]
pub(crate) fn i_gap_quadrature(k: &RieszConstants, big_a: f64, eps: f64) -> Result<f64> {
    if eps <= 0.0 {
        return Ok(k.b_line / big_a.sqrt());
    }
    let (alpha, p) = (k.alpha, k.p);
    let g = move |u: f64| u.powf(alpha) * (u + big_a).powf(p) / (u + eps);
    let tail = SemiInfinite {
        origin_exponent: 0.0,
        tail_decay: Some(1.5),
        scale: (eps * big_a).sqrt(),
    };
    Ok(integrate_semi_infinite_with(g, &tail, &inner_opts())?.value)
}

/// The integral `I_a(x)` of the balayage of `δ_{bi}` onto `[−a, a]`.
/// At `|x| = a` the closed form `B(1/2, (1−s)/2)/√(a² + b²)` is returned.
pub fn integral_i(s: f64, a: f64, b: f64, x: f64) -> Result<f64> {
    check_half_width(a)?;
    let k = RieszConstants::new(s)?;
    if !(b > 0.0) {
        return Err(domain(format!("height b must be positive, got {b}")));
    }
    if !(x.abs() <= a) {
        return Err(domain(format!("integral_i needs |x| ≤ a, got x = {x}, a = {a}")));
    }
    i_gap(&k, a * a + b * b, (a - x) * (a + x))
}

/// Balayage of `δ_{bi}` onto ℝ: `b^{1−s}/(B(1/2,(1−s)/2) (x² + b²)^{1−s/2})`.
pub fn bal_line_density(s: f64, b: f64) -> Result<LineDensity> {
    if !(0.0..1.0).contains(&s) {
        return Err(domain(format!("s must lie in [0, 1), got {s}")));
    }
    if !(b > 0.0 && b.is_finite()) {
        return Err(domain(format!("height b must be positive, got {b}")));
    }
    let b_line = crate::specfun::beta_fn(0.5, 0.5 * (1.0 - s))?;
    let pre = b.powf(1.0 - s) / b_line;
    let p = 0.5 * s - 1.0;
    LineDensity::new(b, 2.0 - s, move |x| pre * (x * x + b * b).powf(p))
}

/// Balayage of `δ_t`, `|t| > a`, onto `[−a, a]`.
pub fn bal_realpoint_interval_density(s: f64, a: f64, t: f64) -> Result<IntervalDensity> {
    check_half_width(a)?;
    let k = RieszConstants::new(s)?;
    if !(t.abs() > a) || !t.is_finite() {
        return Err(domain(format!("real atom must lie outside [−{a}, {a}], got t = {t}")));
    }
    let alpha = k.alpha;
    let num = (t.abs() - a) * (t.abs() + a);
    let g = k.gamma_s;
    let edge = |e: f64| EdgeLimit {
        coeff: g * num.powf(alpha) / (e - t).abs(),
        exponent: -alpha,
    };
    let d = IntervalDensity::new(a, SingularityProfile::symmetric(-alpha), move |x, eps| {
        g * (num / eps).powf(alpha) / (x - t).abs()
    })?;
    Ok(d.with_edge_limits(edge(-a), edge(a)).asymmetric())
}

/// Balayage of `δ_{bi}` onto `[−a, a]`; its mass is `m_a`.
pub fn bal_z_interval_density(params: &FieldParams, a: f64) -> Result<IntervalDensity> {
    params.validate()?;
    bal_offaxis_centered(params.s, params.b, a)
}

fn bal_offaxis_centered(s: f64, b: f64, a: f64) -> Result<IntervalDensity> {
    check_half_width(a)?;
    let k = RieszConstants::new(s)?;
    let big_a = a * a + b * b;
    let pre = b.powf(1.0 - s) / k.b_line;
    let (alpha, p, g) = (k.alpha, k.p, k.gamma_s);
    let edge = EdgeLimit {
        coeff: g * b.powf(1.0 - s) / big_a.sqrt(),
        exponent: -alpha,
    };
    let d = IntervalDensity::new(a, SingularityProfile::symmetric(-alpha), move |x, eps| {
        match i_gap(&k, big_a, eps) {
            Ok(i) => pre * ((x * x + b * b).powf(p) + g * i * eps.powf(-alpha)),
            Err(_) => f64::NAN,
        }
    })?;
    Ok(d.with_edge_limits(edge, edge))
}

/// Balayage onto `[−a, a]` of a unit atom at `x0 + iy`, `y ≠ 0`, built by
/// sweeping its line balayage off `|t| > a` with the real-atom kernel.
fn bal_offaxis_general(s: f64, x0: f64, y: f64, a: f64) -> Result<IntervalDensity> {
    let k = RieszConstants::new(s)?;
    let y = y.abs();
    let (alpha, p, g) = (k.alpha, k.p, k.gamma_s);
    let pre = y.powf(1.0 - s) / k.b_line;
    // J(δ; c) = ∫₀^∞ u^α (u + 2a)^α ((u + a − c)² + y²)^p / (u + δ) du
    let j = move |delta: f64, c: f64| -> Result<f64> {
        let h = move |u: f64| (u + 2.0 * a).powf(alpha) * ((u + a - c).powi(2) + y * y).powf(p);
        let (f, origin): (Box<dyn Fn(f64) -> f64>, f64) = if delta > 0.0 {
            (Box::new(move |u: f64| u.powf(alpha) * h(u) / (u + delta)), 0.0)
        } else {
            (Box::new(move |u: f64| u.powf(alpha - 1.0) * h(u)), alpha - 1.0)
        };
        let tail = SemiInfinite {
            origin_exponent: origin,
            tail_decay: Some(2.0),
            scale: if delta > 0.0 { (delta * a).sqrt().max(1e-3 * a) } else { a },
        };
        Ok(integrate_semi_infinite_with(f, &tail, &inner_opts())?.value)
    };
    let coeff = |right: bool| -> Result<f64> {
        let (jp, jm) = if right { (j(0.0, x0)?, j(2.0 * a, -x0)?) } else { (j(2.0 * a, x0)?, j(0.0, -x0)?) };
        Ok(pre * g * (jp + jm))
    };
    let left = EdgeLimit {
        coeff: coeff(false)?,
        exponent: -alpha,
    };
    let right = EdgeLimit {
        coeff: coeff(true)?,
        exponent: -alpha,
    };
    let d = IntervalDensity::new(a, SingularityProfile::symmetric(-alpha), move |x, eps| {
        let (dp, dm) = (a - x, a + x);
        match (j(dp, x0), j(dm, -x0)) {
            (Ok(jp), Ok(jm)) => pre * (((x - x0).powi(2) + y * y).powf(p) + g * eps.powf(-alpha) * (jp + jm)),
            _ => f64::NAN,
        }
    })?;
    Ok(d.with_edge_limits(left, right).asymmetric())
}

/// Balayage onto `[−a, a]` of a finite atomic measure, by superposition.
pub fn superpose_atomic(s: f64, measure: &AtomicMeasure, a: f64) -> Result<IntervalDensity> {
    check_half_width(a)?;
    RieszConstants::new(s)?;
    if measure.atoms.is_empty() {
        return IntervalDensity::zero(a);
    }
    let mut parts = Vec::with_capacity(measure.atoms.len());
    for atom in &measure.atoms {
        let d = if atom.im != 0.0 {
            if atom.re == 0.0 {
                bal_offaxis_centered(s, atom.im.abs(), a)?
            } else {
                bal_offaxis_general(s, atom.re, atom.im, a)?
            }
        } else if atom.re.abs() > a {
            bal_realpoint_interval_density(s, a, atom.re)?
        } else {
            return Err(domain(format!("atom at {} lies on [−{a}, {a}]", atom.re)));
        };
        parts.push((atom.weight, d));
    }
    let terms: Vec<(f64, &IntervalDensity)> = parts.iter().map(|(w, d)| (*w, d)).collect();
    IntervalDensity::linear_combination(&terms)
}

/// `m_a` by quadrature of the balayage density, with the σ-mass identity
/// `m_a = ‖σ_a‖/q + κ d^s/√(1 + d²)` as a cross-check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BalayageMass {
    pub value: f64,
    pub via_sigma: f64,
    pub discrepancy: f64,
}

pub fn balayage_mass(params: &FieldParams, a: f64) -> Result<BalayageMass> {
    let value = bal_z_interval_density(params, a)?.mass()?;
    let k = RieszConstants::new(params.s)?;
    let d = a / params.b;
    let h = d.powf(params.s) / (1.0 + d * d).sqrt();
    let via_sigma = sigma_mass(params, a)? / params.q + k.kappa * h;
    let discrepancy = (value - via_sigma).abs();
    if discrepancy > 1e-6 {
        return Err(Error::Consistency(format!(
            "balayage mass routes disagree at a = {a}: {value} vs {via_sigma}"
        )));
    }
    Ok(BalayageMass {
        value,
        via_sigma,
        discrepancy,
    })
}
