//! The critical endpoint ã and the scalars derived from it, computed by
//! three independent routes with a consensus check.

use std::collections::BTreeMap;
use std::thread;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::measures::{
    balayage_mass, interval_energy, sigma_mass, signed_endpoint_coeff, FieldParams, RieszConstants,
};
use crate::specfun::{gamma_fn, hyp2f1};

/// Relative agreement required between the three routes.
pub const CONSENSUS_TOL: f64 = 1e-6;
/// Tolerance in `c` for the hypergeometric route.
pub const C_TOL: f64 = 1e-12;
/// Relative tolerance in `a` for the quadrature routes.
pub const A_TOL: f64 = 1e-9;

pub const ROUTE_SIGMA_MASS: &str = "sigma_mass";
pub const ROUTE_C_EQUATION: &str = "c_equation";
pub const ROUTE_ENDPOINT_COEFF: &str = "endpoint_coeff";

/// Root bracket with `f_lo · f_hi ≤ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootBracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl RootBracket {
    pub fn new(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<Self> {
        if !(f_lo * f_hi <= 0.0) {
            return Err(Error::Root {
                what: "bracket",
                reason: format!("no sign change on [{lo}, {hi}]: f = {f_lo}, {f_hi}"),
            });
        }
        Ok(Self { lo, hi, f_lo, f_hi })
    }

    /// Grow geometrically from `start` until `f` changes sign.
    pub fn expand<F>(mut f: F, start: f64, what: &'static str) -> Result<Self>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let f0 = f(start)?;
        if f0 == 0.0 {
            return Self::new(start, start, f0, f0);
        }
        // f is increasing for every target used here, so the sign at the
        // start tells which way to go
        let factor = if f0 < 0.0 { 2.0 } else { 0.5 };
        let (mut x, mut fx) = (start, f0);
        for _ in 0..80 {
            let y = x * factor;
            let fy = f(y)?;
            if fx * fy <= 0.0 {
                let (lo, hi, flo, fhi) = if y > x { (x, y, fx, fy) } else { (y, x, fy, fx) };
                return Self::new(lo, hi, flo, fhi);
            }
            x = y;
            fx = fy;
        }
        Err(Error::Root {
            what,
            reason: format!("no sign change found expanding from {start}"),
        })
    }

    /// Bisection until the relative width is below `coarse`, then up to
    /// five safeguarded secant steps until the step is below `tol·|x|`.
    pub fn solve<F>(mut self, mut f: F, tol: f64) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        if self.f_lo == 0.0 {
            return Ok(self.lo);
        }
        if self.f_hi == 0.0 {
            return Ok(self.hi);
        }
        let coarse = tol.max(1e-7);
        let mut guard = 0;
        while self.hi - self.lo > coarse * self.hi.abs().max(f64::MIN_POSITIVE) {
            let mid = 0.5 * (self.lo + self.hi);
            let fm = f(mid)?;
            self.shrink(mid, fm);
            if fm == 0.0 {
                return Ok(mid);
            }
            guard += 1;
            if guard > 400 {
                break;
            }
        }
        let (mut x0, mut f0) = (self.lo, self.f_lo);
        let (mut x1, mut f1) = (self.hi, self.f_hi);
        for _ in 0..5 {
            if f1 == f0 {
                break;
            }
            let mut x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
            if !(x2 > self.lo && x2 < self.hi) {
                x2 = 0.5 * (self.lo + self.hi);
            }
            let f2 = f(x2)?;
            self.shrink(x2, f2);
            let step = (x2 - x1).abs();
            (x0, f0, x1, f1) = (x1, f1, x2, f2);
            if f2 == 0.0 || step <= tol * x2.abs() {
                break;
            }
        }
        Ok(x1)
    }

    fn shrink(&mut self, x: f64, fx: f64) {
        if (fx < 0.0) == (self.f_lo < 0.0) {
            self.lo = x;
            self.f_lo = fx;
        } else {
            self.hi = x;
            self.f_hi = fx;
        }
    }
}

/// Typed failure for charges that admit no compactly supported equilibrium.
pub fn require_admissible(q: f64) -> Result<()> {
    if q < 1.0 {
        Err(Error::NoEquilibrium { q })
    } else if q == 1.0 {
        Err(Error::WeaklyAdmissible)
    } else {
        Ok(())
    }
}

/// `U^{ω_{[−a,a]}}(bi) = (a² + b²)^{−s/2} ₂F₁(s/2, (1+s)/2; 1+s/2; a²/(a² + b²))`.
pub fn robin_potential_at_z(s: f64, a: f64, b: f64) -> Result<f64> {
    RieszConstants::new(s)?;
    if !(a > 0.0 && b > 0.0) {
        return Err(domain(format!("need a, b > 0, got a = {a}, b = {b}")));
    }
    let big_a = a * a + b * b;
    Ok(big_a.powf(-0.5 * s) * hyp2f1(0.5 * s, 0.5 * (1.0 + s), 1.0 + 0.5 * s, a * a / big_a)?)
}

/// Mhaskar–Saff functional `𝓕_s(a) = W_s(a) − q U^{ω}(bi)`.
pub fn ms_functional(params: &FieldParams, a: f64) -> Result<f64> {
    params.validate()?;
    Ok(interval_energy(params.s, a)? - params.q * robin_potential_at_z(params.s, a, params.b)?)
}

/// `Γ(1+s)/(2^s Γ((1+s)/2)) a^{−s} g(c, s)` with
/// `g = Γ((1−s)/2) − q √π/Γ(1+s/2) c^{s/2} ₂F₁(s/2, (1+s)/2; 1+s/2; c)`.
pub fn ms_functional_closed_form(params: &FieldParams, a: f64) -> Result<f64> {
    params.validate()?;
    if !(a > 0.0) {
        return Err(domain(format!("half-width a must be positive, got {a}")));
    }
    let s = params.s;
    let c = a * a / (a * a + params.b * params.b);
    let f = hyp2f1(0.5 * s, 0.5 * (1.0 + s), 1.0 + 0.5 * s, c)?;
    let g = gamma_fn(0.5 * (1.0 - s))? - params.q * std::f64::consts::PI.sqrt() / gamma_fn(1.0 + 0.5 * s)? * c.powf(0.5 * s) * f;
    Ok(gamma_fn(1.0 + s)? / (2f64.powf(s) * gamma_fn(0.5 * (1.0 + s))?) * a.powf(-s) * g)
}

/// `c^{s/2}[F_s(c) − (1 − c) G_s(c)] − 1/(qκ)`, increasing from `−1/(qκ)` at 0
/// to `(1 − 1/q)/κ` at 1; its root is the critical `c`.
fn c_equation(s: f64, q: f64, kappa: f64, c: f64) -> Result<f64> {
    let f = hyp2f1(0.5 * s, 0.5 * (1.0 + s), 1.0 + 0.5 * s, c)?;
    let g = hyp2f1(1.0 + 0.5 * s, 0.5 * (1.0 + s), 1.0 + 0.5 * s, c)?;
    Ok(c.powf(0.5 * s) * (f - (1.0 - c) * g) - 1.0 / (q * kappa))
}

/// Critical `c = ã²/(ã² + b²)` from the hypergeometric equation.
pub fn critical_c(params: &FieldParams) -> Result<f64> {
    params.validate()?;
    require_admissible(params.q)?;
    let (s, q) = (params.s, params.q);
    let k = RieszConstants::new(s)?;
    let eq = |c: f64| c_equation(s, q, k.kappa, c);
    // F_s diverges like a power of (1 − c) only through G_s, which is
    // multiplied by (1 − c); the end value is finite
    let mut hi = 0.5;
    let mut f_hi = eq(hi)?;
    while f_hi < 0.0 {
        hi = 1.0 - 0.5 * (1.0 - hi);
        if 1.0 - hi < 1e-15 {
            return Err(Error::Root {
                what: "critical c",
                reason: format!("no sign change below c = 1 for q = {q}"),
            });
        }
        f_hi = eq(hi)?;
    }
    let mut lo = hi * 0.5;
    let mut f_lo = eq(lo)?;
    while f_lo > 0.0 {
        lo *= 0.5;
        f_lo = eq(lo)?;
    }
    let mut bracket = RootBracket::new(lo, hi, f_lo, f_hi)?;
    while bracket.hi - bracket.lo > C_TOL {
        let mid = 0.5 * (bracket.lo + bracket.hi);
        let fm = eq(mid)?;
        bracket.shrink(mid, fm);
        if fm == 0.0 {
            return Ok(mid);
        }
    }
    let (mut x0, mut f0, mut x1, mut f1) = (bracket.lo, bracket.f_lo, bracket.hi, bracket.f_hi);
    for _ in 0..5 {
        if f1 == f0 {
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if !(x2 >= bracket.lo && x2 <= bracket.hi) {
            break;
        }
        let f2 = eq(x2)?;
        (x0, f0, x1, f1) = (x1, f1, x2, f2);
        if f2 == 0.0 {
            break;
        }
    }
    Ok(x1)
}

/// `ã = b √(c/(1 − c))` from [`critical_c`].
pub fn critical_halfwidth(params: &FieldParams) -> Result<f64> {
    let c = critical_c(params)?;
    Ok(params.b * (c / (1.0 - c)).sqrt())
}

fn route_sigma_mass(params: &FieldParams) -> Result<f64> {
    let f = |a: f64| Ok(sigma_mass(params, a)? - 1.0);
    RootBracket::expand(f, params.b, "sigma mass route")?.solve(f, A_TOL)
}

fn route_endpoint_coeff(params: &FieldParams) -> Result<f64> {
    // decreasing in a; negate for the increasing convention
    let f = |a: f64| Ok(-signed_endpoint_coeff(params, a)?);
    RootBracket::expand(f, params.b, "endpoint coefficient route")?.solve(f, A_TOL)
}

/// Everything known about the equilibrium support for one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    #[serde(flatten)]
    pub params: FieldParams,
    pub a_tilde: f64,
    pub c: f64,
    pub d: f64,
    pub m_a_tilde: f64,
    pub mass_loss: f64,
    pub mass_loss_closed_form: f64,
    pub f_q: f64,
    pub ms_value: f64,
    pub per_method: BTreeMap<String, f64>,
    pub consensus_spread: f64,
}

/// ã by three routes: `‖σ_a‖ = 1`, the `c`-equation, and vanishing of the
/// endpoint coefficient of `η_a`. The quadrature routes run on their own
/// threads.
pub fn critical_endpoint(params: &FieldParams) -> Result<SolverReport> {
    params.validate()?;
    require_admissible(params.q)?;
    let (r1, r2, r3) = thread::scope(|scope| {
        let h1 = scope.spawn(|| route_sigma_mass(params));
        let h3 = scope.spawn(|| route_endpoint_coeff(params));
        let r2 = critical_c(params);
        (join(h1), r2, join(h3))
    });
    let c = r2?;
    let a_c = params.b * (c / (1.0 - c)).sqrt();
    let (a1, a3) = (r1?, r3?);
    let mut per_method = BTreeMap::new();
    per_method.insert(ROUTE_SIGMA_MASS.to_string(), a1);
    per_method.insert(ROUTE_C_EQUATION.to_string(), a_c);
    per_method.insert(ROUTE_ENDPOINT_COEFF.to_string(), a3);
    let vals = [a1, a_c, a3];
    let spread = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max) - vals.iter().copied().fold(f64::INFINITY, f64::min);
    let allowed = CONSENSUS_TOL * a_c;
    if !(spread <= allowed) {
        return Err(Error::Consensus { spread, allowed });
    }
    let m = balayage_mass(params, a_c)?.value;
    let closed = mass_loss_closed_form(params, a_c)?;
    Ok(SolverReport {
        params: *params,
        a_tilde: a_c,
        c,
        d: a_c / params.b,
        m_a_tilde: m,
        mass_loss: 1.0 - m,
        mass_loss_closed_form: closed,
        f_q: equilibrium_constant_at(params, a_c),
        ms_value: ms_functional(params, a_c)?,
        per_method,
        consensus_spread: spread,
    })
}

fn join<T>(h: thread::ScopedJoinHandle<'_, Result<T>>) -> Result<T> {
    h.join()
        .unwrap_or_else(|_| Err(Error::Consistency("solver route panicked".into())))
}

/// `1 − 1/q − f(s) h(d, s)` with `f = B(1/2,(1+s)/2)/B((1−s)/2,(1+s)/2)`
/// and `h = d^s/√(1 + d²)`, from `m_a = ‖σ_a‖/q + f h` and `‖σ_ã‖ = 1`.
pub fn mass_loss_closed_form(params: &FieldParams, a_tilde: f64) -> Result<f64> {
    let k = RieszConstants::new(params.s)?;
    let d = a_tilde / params.b;
    Ok(1.0 - 1.0 / params.q - k.kappa * mass_loss_h(d, params.s))
}

/// `h(d, s) = d^s/√(1 + d²)`.
pub fn mass_loss_h(d: f64, s: f64) -> f64 {
    d.powf(s) / (1.0 + d * d).sqrt()
}

/// `1 − m_ã` from the closed form, checked against quadrature.
pub fn mass_loss(params: &FieldParams) -> Result<f64> {
    let a = critical_halfwidth(params)?;
    let closed = mass_loss_closed_form(params, a)?;
    let quad = 1.0 - balayage_mass(params, a)?.value;
    if (closed - quad).abs() > 1e-6 {
        return Err(Error::Consistency(format!(
            "mass loss closed form {closed} disagrees with quadrature {quad}"
        )));
    }
    Ok(closed)
}

fn equilibrium_constant_at(params: &FieldParams, a: f64) -> f64 {
    let b = params.b;
    -params.q * b.powf(1.0 - params.s) / (a * a + b * b).sqrt()
}

/// `F_Q = −q b^{1−s}/√(ã² + b²)`.
pub fn equilibrium_constant(params: &FieldParams) -> Result<f64> {
    Ok(equilibrium_constant_at(params, critical_halfwidth(params)?))
}

/// `E_a = −q b^{1−s}/√(a² + b²)`, the constant value of `U^{σ_a} + Q` on `[−a, a]`.
pub fn sigma_constant(params: &FieldParams, a: f64) -> f64 {
    equilibrium_constant_at(params, a)
}
