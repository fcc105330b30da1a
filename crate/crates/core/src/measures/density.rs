use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::quadrature::{
    adaptive_segments, integrate_semi_infinite_with, QuadratureOptions, QuadratureResult, SemiInfinite,
    SingularityProfile,
};

/// Pointwise evaluator `(x, a² − x²) ↦ ρ(x)`. The gap is passed separately
/// so callers that know the distance to an endpoint can keep it exact.
pub type Evaluator = dyn Fn(f64, f64) -> f64 + Send + Sync;

/// Tolerance used for cached masses.
pub const MASS_TOL: f64 = 1e-12;

/// Leading endpoint behaviour `coeff · (a² − x²)^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeLimit {
    pub coeff: f64,
    pub exponent: f64,
}

/// A density on `[−a, a]` given by a closed-form evaluator.
#[derive(Clone)]
pub struct IntervalDensity {
    half_width: f64,
    profile: SingularityProfile,
    edges: Option<(EdgeLimit, EdgeLimit)>,
    even: bool,
    eval: Arc<Evaluator>,
    mass: Arc<OnceLock<Result<QuadratureResult>>>,
}

impl fmt::Debug for IntervalDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntervalDensity")
            .field("half_width", &self.half_width)
            .field("profile", &self.profile)
            .field("edges", &self.edges)
            .field("even", &self.even)
            .finish_non_exhaustive()
    }
}

/// Points within this relative distance of an endpoint use the edge limit.
const EDGE_ZONE: f64 = 1e-12;

impl IntervalDensity {
    /// An even density on `[−a, a]`.
    pub fn new<F>(half_width: f64, profile: SingularityProfile, eval: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(domain(format!("half-width must be positive, got {half_width}")));
        }
        Ok(Self {
            half_width,
            profile: SingularityProfile::new(profile.left_exponent, profile.right_exponent)?,
            edges: None,
            even: true,
            eval: Arc::new(eval),
            mass: Arc::new(OnceLock::new()),
        })
    }

    /// The zero density.
    pub fn zero(half_width: f64) -> Result<Self> {
        Self::new(half_width, SingularityProfile::regular(), |_, _| 0.0)
    }

    /// Replace the evaluator by its edge limits within `1e-12·a` of `∓a`.
    pub fn with_edge_limits(mut self, left: EdgeLimit, right: EdgeLimit) -> Self {
        self.edges = Some((left, right));
        self.mass = Arc::new(OnceLock::new());
        self
    }

    /// Mark the density as not even; masses then integrate both halves.
    pub fn asymmetric(mut self) -> Self {
        self.even = false;
        self.mass = Arc::new(OnceLock::new());
        self
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn profile(&self) -> SingularityProfile {
        self.profile
    }

    pub fn edge_limits(&self) -> Option<(EdgeLimit, EdgeLimit)> {
        self.edges
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    /// ρ(x); zero outside `[−a, a]`.
    pub fn evaluate(&self, x: f64) -> f64 {
        let a = self.half_width;
        if !(x.abs() <= a) {
            return 0.0;
        }
        let eps = (a - x) * (a + x);
        self.evaluate_gap(x, eps)
    }

    /// ρ(x) with `eps = a² − x²` supplied by the caller.
    pub fn evaluate_gap(&self, x: f64, eps: f64) -> f64 {
        let a = self.half_width;
        if let Some((left, right)) = self.edges {
            let d = eps / (a + x.abs());
            if d < EDGE_ZONE * a {
                let e = if x < 0.0 { left } else { right };
                return e.coeff * eps.max(0.0).powf(e.exponent);
            }
        }
        (self.eval)(x, eps)
    }

    /// Total mass, computed once.
    pub fn mass(&self) -> Result<f64> {
        self.mass_result().map(|r| r.value)
    }

    pub fn mass_result(&self) -> Result<QuadratureResult> {
        self.mass
            .get_or_init(|| self.integrate_with(&QuadratureOptions::with_tol(MASS_TOL)))
            .clone()
    }

    /// ∫ ρ over `[−a, a]` at the given tolerance, bypassing the cache.
    pub fn integrate_with(&self, opts: &QuadratureOptions) -> Result<QuadratureResult> {
        let a = self.half_width;
        let (el, er) = (self.profile.left_exponent, self.profile.right_exponent);
        let right = move |d: f64| self.evaluate_gap(a - d, d * (2.0 * a - d));
        let left = move |d: f64| self.evaluate_gap(d - a, d * (2.0 * a - d));
        if self.even {
            let mut r = adaptive_segments(vec![(a, er, Box::new(right))], opts)?;
            r.value *= 2.0;
            r.abs_error_estimate *= 2.0;
            Ok(r)
        } else {
            adaptive_segments(vec![(a, er, Box::new(right)), (a, el, Box::new(left))], opts)
        }
    }

    /// `Σ wᵢ ρᵢ` over densities sharing a half-width.
    pub fn linear_combination(terms: &[(f64, &IntervalDensity)]) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return Err(domain("empty linear combination"));
        };
        let a = first.half_width;
        if terms.iter().any(|(_, d)| (d.half_width - a).abs() > 1e-15 * a) {
            return Err(domain("linear combination of densities on different intervals"));
        }
        let left = terms
            .iter()
            .map(|(_, d)| d.profile.left_exponent)
            .fold(f64::INFINITY, f64::min);
        let right = terms
            .iter()
            .map(|(_, d)| d.profile.right_exponent)
            .fold(f64::INFINITY, f64::min);
        let even = terms.iter().all(|(_, d)| d.even);
        let edges = combine_edges(terms);
        let parts: Vec<(f64, IntervalDensity)> = terms.iter().map(|(w, d)| (*w, (*d).clone())).collect();
        let mut out = Self::new(a, SingularityProfile::new(left, right)?, move |x, eps| {
            parts.iter().map(|(w, d)| w * d.evaluate_gap(x, eps)).sum()
        })?;
        out.even = even;
        out.edges = edges;
        Ok(out)
    }
}

fn combine_edges(terms: &[(f64, &IntervalDensity)]) -> Option<(EdgeLimit, EdgeLimit)> {
    let mut acc: Option<(EdgeLimit, EdgeLimit)> = None;
    for (w, d) in terms {
        let (l, r) = d.edges?;
        acc = Some(match acc {
            None => (
                EdgeLimit {
                    coeff: w * l.coeff,
                    exponent: l.exponent,
                },
                EdgeLimit {
                    coeff: w * r.coeff,
                    exponent: r.exponent,
                },
            ),
            Some((al, ar)) => {
                if al.exponent != l.exponent || ar.exponent != r.exponent {
                    return None;
                }
                (
                    EdgeLimit {
                        coeff: al.coeff + w * l.coeff,
                        exponent: l.exponent,
                    },
                    EdgeLimit {
                        coeff: ar.coeff + w * r.coeff,
                        exponent: r.exponent,
                    },
                )
            }
        });
    }
    acc
}

/// A density on all of ℝ.
#[derive(Clone)]
pub struct LineDensity {
    scale: f64,
    tail_decay: f64,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    mass: Arc<OnceLock<Result<QuadratureResult>>>,
}

impl fmt::Debug for LineDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LineDensity")
            .field("scale", &self.scale)
            .field("tail_decay", &self.tail_decay)
            .finish_non_exhaustive()
    }
}

impl LineDensity {
    /// `tail_decay` is `k` in `ρ(t) ~ |t|^{-k}`; it must exceed 1.
    pub fn new<F>(scale: f64, tail_decay: f64, eval: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(scale > 0.0) || !(tail_decay > 1.0) {
            return Err(domain(format!(
                "line density needs scale > 0 and tail decay > 1, got {scale}, {tail_decay}"
            )));
        }
        Ok(Self {
            scale,
            tail_decay,
            eval: Arc::new(eval),
            mass: Arc::new(OnceLock::new()),
        })
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn tail_decay(&self) -> f64 {
        self.tail_decay
    }

    pub fn mass(&self) -> Result<f64> {
        self.mass
            .get_or_init(|| {
                let tail = SemiInfinite {
                    origin_exponent: 0.0,
                    tail_decay: Some(self.tail_decay),
                    scale: self.scale,
                };
                let f = |u: f64| self.evaluate(u) + self.evaluate(-u);
                integrate_semi_infinite_with(f, &tail, &QuadratureOptions::with_tol(MASS_TOL))
            })
            .clone()
            .map(|r| r.value)
    }

    /// Riesz potential at `x`.
    pub fn potential(&self, s: f64, x: f64, opts: &QuadratureOptions) -> Result<f64> {
        crate::quadrature::riesz_potential_line(|t| self.evaluate(t), s, x, self.scale, self.tail_decay, opts)
    }
}
