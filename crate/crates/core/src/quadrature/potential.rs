//! Riesz potentials ∫ ρ(t)|x − t|^{-s} dt of interval and line densities.

use super::{adaptive, integrate_semi_infinite_with, QuadratureOptions, SemiInfinite, Segment};
use crate::error::{domain, Result};
use crate::measures::IntervalDensity;

fn check_s(s: f64) -> Result<()> {
    if !(s > 0.0 && s < 1.0) {
        return Err(domain(format!("s must lie in (0, 1), got {s}")));
    }
    Ok(())
}

/// Potential of `density` at `x` with default tolerances.
pub fn riesz_potential(density: &IntervalDensity, s: f64, x: f64) -> Result<f64> {
    riesz_potential_with(density, s, x, &QuadratureOptions::default())
}

/// Potential of `density` at `x`. Inside the support the integral is split
/// at `x` and each side is split again halfway to the endpoint, so every
/// piece carries at most one singular end.
pub fn riesz_potential_with(density: &IntervalDensity, s: f64, x: f64, opts: &QuadratureOptions) -> Result<f64> {
    check_s(s)?;
    if !x.is_finite() {
        return Err(domain(format!("evaluation point must be finite, got {x}")));
    }
    let a = density.half_width();
    let profile = density.profile();
    let (el, er) = (profile.left_exponent, profile.right_exponent);
    // density at distance d from the right (+a) or left (−a) endpoint
    let at_right = move |d: f64| density.evaluate_gap(a - d, d * (2.0 * a - d));
    let at_left = move |d: f64| density.evaluate_gap(d - a, d * (2.0 * a - d));

    let mut segs: Vec<Segment<'_>> = Vec::with_capacity(4);
    if x >= a || x <= -a {
        // the kernel is smooth on the support; |x| = a keeps one singular end
        let gap = x.abs() - a;
        let far = x < 0.0;
        for right in [true, false] {
            let near_side = right != far;
            let exponent = if right { er } else { el };
            let singular = exponent + if near_side && gap == 0.0 { -s } else { 0.0 };
            let h: Box<dyn Fn(f64) -> f64 + '_> = if right {
                Box::new(move |d| {
                    let dist = if far { 2.0 * a - d + gap } else { gap + d };
                    at_right(d) * dist.powf(-s)
                })
            } else {
                Box::new(move |d| {
                    let dist = if far { gap + d } else { 2.0 * a - d + gap };
                    at_left(d) * dist.powf(-s)
                })
            };
            segs.push(Segment::from_origin(a, singular.min(0.0).max(-0.999_999), h));
        }
    } else {
        let to_right = a - x;
        let to_left = a + x;
        for (len, right) in [(to_right, true), (to_left, false)] {
            let half = 0.5 * len;
            // near x: t = x ± d, kernel d^{-s}
            let near: Box<dyn Fn(f64) -> f64 + '_> = if right {
                Box::new(move |d| at_right(to_right - d) * d.powf(-s))
            } else {
                Box::new(move |d| at_left(to_left - d) * d.powf(-s))
            };
            segs.push(Segment::from_origin(half, -s, near));
            // near the endpoint: distance d to it, len − d to x
            let exponent = if right { er } else { el };
            let edge: Box<dyn Fn(f64) -> f64 + '_> = if right {
                Box::new(move |d| at_right(d) * (to_right - d).powf(-s))
            } else {
                Box::new(move |d| at_left(d) * (to_left - d).powf(-s))
            };
            segs.push(Segment::from_origin(half, exponent.min(0.0), edge));
        }
    }
    Ok(adaptive(&segs, opts)?.value)
}

/// Potential at `x` of a density on all of ℝ decaying like `|t|^{-density_decay}`.
/// `scale` is the length over which the density varies.
pub fn riesz_potential_line<F>(
    f: F,
    s: f64,
    x: f64,
    scale: f64,
    density_decay: f64,
    opts: &QuadratureOptions,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    check_s(s)?;
    let g = |u: f64| (f(x + u) + f(x - u)) * u.powf(-s);
    let tail = SemiInfinite {
        origin_exponent: -s,
        tail_decay: Some(density_decay + s),
        scale,
    };
    Ok(integrate_semi_infinite_with(g, &tail, opts)?.value)
}
