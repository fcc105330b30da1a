//! The iterated balayage algorithm: nested intervals `[−a_k, a_k]` obtained
//! from the supports of the positive parts of successive signed equilibrium
//! measures.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::measures::{positive_part_halfwidth, signed_endpoint_coeff, FieldParams};

pub const DEFAULT_STOP_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 200;
/// Doublings tried by [`IbaStart::Auto`] before giving up.
pub const AUTO_DOUBLINGS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Converged,
    PositiveEverywhere,
    MaxIterations,
    NonShrinking,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IbaStart {
    /// Double from `b` until the signed measure has a negative part.
    Auto,
    Value(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IBATrace {
    pub a_sequence: Vec<f64>,
    /// Endpoint coefficient of `η_{a_k}` for each visited `a_k`.
    pub coeff_sequence: Vec<f64>,
    pub stop_reason: StopReason,
    pub limit_halfwidth: f64,
}

/// Half-width of the support of the positive part of `η_a`.
pub fn positive_support_halfwidth(params: &FieldParams, a: f64) -> Result<f64> {
    params.validate()?;
    let coeff = signed_endpoint_coeff(params, a)?;
    positive_part_halfwidth(params, a, coeff)
}

pub fn run_iba(params: &FieldParams, a0: IbaStart, stop_tol: f64, max_iter: usize) -> Result<IBATrace> {
    params.validate()?;
    if !(stop_tol > 0.0) {
        return Err(domain(format!("stop tolerance must be positive, got {stop_tol}")));
    }
    if max_iter == 0 {
        return Err(domain("max_iter must be at least 1"));
    }
    let mut a = match a0 {
        IbaStart::Value(v) if v > 0.0 && v.is_finite() => v,
        IbaStart::Value(v) => return Err(domain(format!("a0 must be positive, got {v}"))),
        IbaStart::Auto => match auto_start(params)? {
            Ok(a) => a,
            Err((a, coeff)) => {
                return Ok(IBATrace {
                    a_sequence: vec![a],
                    coeff_sequence: vec![coeff],
                    stop_reason: StopReason::NonShrinking,
                    limit_halfwidth: a,
                })
            }
        },
    };

    let mut a_sequence = vec![a];
    let mut coeff_sequence = Vec::new();
    for k in 0..max_iter {
        let coeff = signed_endpoint_coeff(params, a)?;
        coeff_sequence.push(coeff);
        if k == 0 && coeff >= 0.0 {
            let reason = if params.q <= 1.0 {
                StopReason::NonShrinking
            } else {
                StopReason::PositiveEverywhere
            };
            return Ok(finish(a_sequence, coeff_sequence, reason));
        }
        if coeff >= -stop_tol {
            return Ok(finish(a_sequence, coeff_sequence, StopReason::Converged));
        }
        let next = positive_part_halfwidth(params, a, coeff)?;
        a_sequence.push(next);
        if (a - next).abs() < stop_tol * a {
            coeff_sequence.push(signed_endpoint_coeff(params, next)?);
            return Ok(finish(a_sequence, coeff_sequence, StopReason::Converged));
        }
        a = next;
    }
    Ok(finish(a_sequence, coeff_sequence, StopReason::MaxIterations))
}

fn finish(a_sequence: Vec<f64>, coeff_sequence: Vec<f64>, stop_reason: StopReason) -> IBATrace {
    let limit_halfwidth = a_sequence.last().copied().unwrap_or(f64::NAN);
    IBATrace {
        a_sequence,
        coeff_sequence,
        stop_reason,
        limit_halfwidth,
    }
}

/// `Ok(a)` with a negative endpoint coefficient, or `Err((a, coeff))` for the
/// last point tried.
fn auto_start(params: &FieldParams) -> Result<std::result::Result<f64, (f64, f64)>> {
    let mut a = params.b;
    let mut coeff = signed_endpoint_coeff(params, a)?;
    if params.q <= 1.0 {
        return Ok(Err((a, coeff)));
    }
    for _ in 0..AUTO_DOUBLINGS {
        if coeff < 0.0 {
            return Ok(Ok(a));
        }
        a *= 2.0;
        coeff = signed_endpoint_coeff(params, a)?;
    }
    Ok(Err((a, coeff)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const A_TILDE: f64 = 1.442_271_172_624_855_8;

    fn p5() -> FieldParams {
        FieldParams::new(0.5, 5.0, 1.0).unwrap()
    }

    #[test]
    fn support_of_positive_part() {
        let p = p5();
        assert!(positive_support_halfwidth(&p, 4.0).unwrap() < 4.0);
        assert_eq!(positive_support_halfwidth(&p, 1.0).unwrap(), 1.0);
        let a = A_TILDE * (1.0 + 1e-3);
        let a1 = positive_support_halfwidth(&p, a).unwrap();
        assert!((a1 - A_TILDE).abs() < 1e-3 * A_TILDE);
    }

    #[test]
    fn converges_from_above() {
        let t = run_iba(&p5(), IbaStart::Value(4.0), DEFAULT_STOP_TOL, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(t.stop_reason, StopReason::Converged);
        assert!((t.limit_halfwidth - 1.44227).abs() < 1e-4);
        for w in t.a_sequence.windows(2) {
            assert!(w[1] <= w[0]);
            assert!(w[1] >= A_TILDE * (1.0 - DEFAULT_STOP_TOL));
        }
        assert!(t.coeff_sequence.last().unwrap().abs() <= 1e-6);
    }

    #[test]
    fn small_start_is_already_positive() {
        let t = run_iba(&p5(), IbaStart::Value(1.0), DEFAULT_STOP_TOL, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(t.stop_reason, StopReason::PositiveEverywhere);
        assert_eq!(t.limit_halfwidth, 1.0);
    }

    #[test]
    fn weak_charge_never_shrinks() {
        let p = FieldParams::new(0.5, 0.5, 1.0).unwrap();
        for start in [IbaStart::Value(3.0), IbaStart::Value(100.0), IbaStart::Auto] {
            let t = run_iba(&p, start, DEFAULT_STOP_TOL, DEFAULT_MAX_ITER).unwrap();
            assert_eq!(t.stop_reason, StopReason::NonShrinking);
        }
    }

    #[test]
    fn auto_start_and_iteration_cap() {
        let t = run_iba(&p5(), IbaStart::Auto, DEFAULT_STOP_TOL, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(t.a_sequence[0], 2.0);
        assert_eq!(t.stop_reason, StopReason::Converged);
        let capped = run_iba(&p5(), IbaStart::Value(20.0), DEFAULT_STOP_TOL, 1).unwrap();
        assert_eq!(capped.stop_reason, StopReason::MaxIterations);
        assert_eq!(capped.a_sequence.len(), 2);
        assert!(run_iba(&p5(), IbaStart::Value(-1.0), 1e-8, 10).is_err());
    }

    #[test]
    fn trace_round_trips_through_json() {
        let t = run_iba(&p5(), IbaStart::Value(3.0), 1e-6, 50).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert!(s.contains("\"stop_reason\":\"converged\""));
        assert_eq!(serde_json::from_str::<IBATrace>(&s).unwrap(), t);
    }
}
