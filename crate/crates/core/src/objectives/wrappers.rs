use std::sync::Arc;

use super::{Bounds, Landscape, ObjectiveInstance};
use crate::error::ObjectiveError;

pub const DEFAULT_PENALTY_ALPHA: f64 = 1000.0;

/// Evaluates at the closest feasible point and adds `α·‖x − x_feasible‖²`.
#[derive(Clone, Debug)]
pub struct PenaltyWrapper {
    pub inner: ObjectiveInstance,
    pub alpha: f64,
}

impl PenaltyWrapper {
    pub fn new(inner: ObjectiveInstance) -> Self {
        Self::with_alpha(inner, DEFAULT_PENALTY_ALPHA)
    }

    pub fn with_alpha(inner: ObjectiveInstance, alpha: f64) -> Self {
        Self { inner, alpha }
    }

    pub fn penalize(&self, x: &[f64]) -> f64 {
        let bounds = self.inner.bounds();
        if bounds.contains(x) {
            return self.inner.eval(x);
        }
        let feasible = bounds.clamp(x);
        let violation: f64 = x
            .iter()
            .zip(&feasible)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        self.inner.eval(&feasible) + self.alpha * violation
    }

    /// The penalized function as a plain objective over the same box.
    pub fn into_objective(self) -> ObjectiveInstance {
        let name = format!("{}+penalty", self.inner.name());
        let bounds = self.inner.bounds().clone();
        let x_opt = self.inner.x_opt().map(<[f64]>::to_vec);
        let f_opt = self.inner.f_opt();
        let seed = self.inner.instance_seed();
        ObjectiveInstance::new(name, bounds, Arc::new(self))
            .with_optimum(x_opt, f_opt)
            .with_seed(seed)
    }
}

impl Landscape for PenaltyWrapper {
    fn eval(&self, x: &[f64]) -> f64 {
        self.penalize(x)
    }
}

#[derive(Debug)]
struct Normalized {
    inner: ObjectiveInstance,
    lo: Vec<f64>,
    width: Vec<f64>,
}

impl Normalized {
    fn to_inner(&self, u: &[f64]) -> Vec<f64> {
        u.iter()
            .zip(self.lo.iter().zip(&self.width))
            .map(|(u, (l, w))| l + u * w)
            .collect()
    }
}

impl Landscape for Normalized {
    fn eval(&self, u: &[f64]) -> f64 {
        self.inner.eval(&self.to_inner(u))
    }
}

/// Affine reparameterization of `inner` onto `[0, 1]^D`: `x = lo + u·(hi − lo)`.
pub fn normalize_domain(inner: ObjectiveInstance) -> Result<ObjectiveInstance, ObjectiveError> {
    let bounds = inner.bounds().clone();
    if !bounds.is_finite() {
        return Err(ObjectiveError::InvalidArgument(format!(
            "cannot normalize `{}`: unbounded domain",
            inner.name()
        )));
    }
    let width: Vec<f64> = bounds.lo.iter().zip(&bounds.hi).map(|(l, h)| h - l).collect();
    if width.iter().any(|w| *w <= 0.0) {
        return Err(ObjectiveError::InvalidArgument(format!(
            "cannot normalize `{}`: degenerate box",
            inner.name()
        )));
    }
    let x_opt = inner.x_opt().map(|x| {
        x.iter()
            .zip(bounds.lo.iter().zip(&width))
            .map(|(v, (l, w))| (v - l) / w)
            .collect()
    });
    let name = format!("{}@unit", inner.name());
    let dim = inner.dim();
    let f_opt = inner.f_opt();
    let seed = inner.instance_seed();
    let landscape = Normalized {
        inner,
        lo: bounds.lo,
        width,
    };
    Ok(
        ObjectiveInstance::new(name, Bounds::uniform(dim, 0.0, 1.0), Arc::new(landscape))
            .with_optimum(x_opt, f_opt)
            .with_seed(seed),
    )
}

#[derive(Debug)]
struct Negated(ObjectiveInstance);

impl Landscape for Negated {
    fn eval(&self, x: &[f64]) -> f64 {
        -self.0.eval(x)
    }
}

/// Turns a maximization problem into minimization.
pub fn negate(inner: ObjectiveInstance) -> ObjectiveInstance {
    let name = format!("-{}", inner.name());
    let bounds = inner.bounds().clone();
    let x_opt = inner.x_opt().map(<[f64]>::to_vec);
    let f_opt = inner.f_opt().map(|f| -f);
    let seed = inner.instance_seed();
    ObjectiveInstance::new(name, bounds, Arc::new(Negated(inner)))
        .with_optimum(x_opt, f_opt)
        .with_seed(seed)
}
