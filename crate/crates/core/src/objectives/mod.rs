//! Benchmark objectives: a registry of multi-modal test functions with seeded
//! shift/rotation instancing, plus wrappers for bound normalization,
//! out-of-bounds penalties and maximization.

mod functions;
mod transform;
mod wrappers;

use std::fmt;
use std::sync::Arc;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::ObjectiveError;
use crate::rng::{derive_seed, Rng};

pub use functions::{registry, FunctionInfo};
pub use transform::random_rotation;
pub use wrappers::{negate, normalize_domain, PenaltyWrapper, DEFAULT_PENALTY_ALPHA};

/// An objective to be minimized.
pub trait Landscape: Send + Sync + fmt::Debug {
    fn eval(&self, x: &[f64]) -> f64;
}

/// Closures are landscapes.
struct FnLandscape<F>(F);

impl<F> fmt::Debug for FnLandscape<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("FnLandscape")
    }
}

impl<F: Fn(&[f64]) -> f64 + Send + Sync> Landscape for FnLandscape<F> {
    fn eval(&self, x: &[f64]) -> f64 {
        (self.0)(x)
    }
}

/// Per-coordinate box `[lo_i, hi_i]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Bounds {
    pub fn uniform(dim: usize, lo: f64, hi: f64) -> Self {
        Self {
            lo: vec![lo; dim],
            hi: vec![hi; dim],
        }
    }

    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self, ObjectiveError> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(ObjectiveError::InvalidArgument(
                "bounds need matching, non-empty lo/hi".into(),
            ));
        }
        if lo.iter().zip(&hi).any(|(l, h)| !(l <= h)) {
            return Err(ObjectiveError::InvalidArgument("lo must not exceed hi".into()));
        }
        Ok(Self { lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn is_finite(&self) -> bool {
        self.lo.iter().chain(&self.hi).all(|v| v.is_finite())
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (l, h))| l <= v && v <= h)
    }

    /// Coordinate-wise closest feasible point.
    pub fn clamp(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(v, (l, h))| v.clamp(*l, *h))
            .collect()
    }

    /// Smallest box width.
    pub fn min_width(&self) -> f64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| h - l)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn sample_uniform(&self, rng: &mut Rng) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| if l == h { *l } else { rng.random_range(*l..*h) })
            .collect()
    }
}

/// Identifying metadata carried into run records.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub name: String,
    pub dim: usize,
    pub instance_seed: u64,
    pub f_opt: Option<f64>,
}

/// A dimension-parameterized objective with bounds and, when known, its optimum.
#[derive(Clone)]
pub struct ObjectiveInstance {
    name: String,
    dim: usize,
    bounds: Bounds,
    f_opt: Option<f64>,
    x_opt: Option<Vec<f64>>,
    instance_seed: u64,
    landscape: Arc<dyn Landscape>,
}

impl fmt::Debug for ObjectiveInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ObjectiveInstance")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("instance_seed", &self.instance_seed)
            .field("f_opt", &self.f_opt)
            .finish_non_exhaustive()
    }
}

impl ObjectiveInstance {
    pub fn new(
        name: impl Into<String>,
        bounds: Bounds,
        landscape: Arc<dyn Landscape>,
    ) -> Self {
        Self {
            name: name.into(),
            dim: bounds.dim(),
            bounds,
            f_opt: None,
            x_opt: None,
            instance_seed: 0,
            landscape,
        }
    }

    /// Wraps a closure.
    pub fn from_fn<F>(name: impl Into<String>, bounds: Bounds, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self::new(name, bounds, Arc::new(FnLandscape(f)))
    }

    pub fn with_optimum(mut self, x_opt: Option<Vec<f64>>, f_opt: Option<f64>) -> Self {
        self.x_opt = x_opt;
        self.f_opt = f_opt;
        self
    }

    pub fn with_seed(mut self, instance_seed: u64) -> Self {
        self.instance_seed = instance_seed;
        self
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        self.landscape.eval(x)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn f_opt(&self) -> Option<f64> {
        self.f_opt
    }

    pub fn x_opt(&self) -> Option<&[f64]> {
        self.x_opt.as_deref()
    }

    pub fn instance_seed(&self) -> u64 {
        self.instance_seed
    }

    pub fn landscape(&self) -> &Arc<dyn Landscape> {
        &self.landscape
    }

    pub fn meta(&self) -> InstanceMeta {
        InstanceMeta {
            name: self.name.clone(),
            dim: self.dim,
            instance_seed: self.instance_seed,
            f_opt: self.f_opt,
        }
    }
}

/// Where an instance puts its optimum.
#[derive(Clone, Debug, PartialEq)]
pub enum Shift {
    /// Uniform in the inner 80% of the box, drawn from the seed.
    Seeded(u64),
    /// Optimum at the origin.
    Zero,
    At(Vec<f64>),
}

/// Shift and rotation for one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Instancing {
    pub shift: Shift,
    pub rotation_seed: u64,
}

impl Instancing {
    /// Shift and rotation both derived from one instance seed.
    pub fn from_seed(instance_seed: u64) -> Self {
        Self {
            shift: Shift::Seeded(derive_seed(instance_seed, &[0])),
            rotation_seed: derive_seed(instance_seed, &[1]),
        }
    }
}

/// Default search box of every suite function.
pub const SUITE_BOUNDS: (f64, f64) = (-5.0, 5.0);

/// Builds a registered function for dimension `dim` and the given instance seed.
pub fn make_function(
    name: &str,
    dim: usize,
    instance_seed: u64,
) -> Result<ObjectiveInstance, ObjectiveError> {
    make_instance(name, dim, instance_seed, &Instancing::from_seed(instance_seed))
}

/// Like [`make_function`] with explicit shift/rotation control.
pub fn make_instance(
    name: &str,
    dim: usize,
    instance_seed: u64,
    instancing: &Instancing,
) -> Result<ObjectiveInstance, ObjectiveError> {
    let info = registry()
        .iter()
        .find(|f| f.name == name)
        .ok_or_else(|| ObjectiveError::UnknownFunction(name.to_string()))?;
    if dim < 2 {
        return Err(ObjectiveError::InvalidArgument(format!(
            "dimension must be at least 2, got {dim}"
        )));
    }
    let bounds = Bounds::uniform(dim, SUITE_BOUNDS.0, SUITE_BOUNDS.1);
    let built = (info.build)(dim, instancing, &bounds)?;
    Ok(ObjectiveInstance::new(name, bounds, built.landscape)
        .with_optimum(Some(built.x_opt), Some(built.f_opt))
        .with_seed(instance_seed))
}

/// Registered function names, in registry order.
pub fn function_names() -> Vec<&'static str> {
    registry().iter().map(|f| f.name).collect()
}

/// Stable numeric id of a registered function.
pub fn function_id(name: &str) -> Option<u64> {
    registry().iter().position(|f| f.name == name).map(|i| i as u64)
}
