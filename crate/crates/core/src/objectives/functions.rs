//! Canonical multi-modal test functions.
//!
//! Each function is built from an [`Instancing`]: a shift that places the
//! optimum and, where the landscape is rotated, a seeded orthonormal rotation.
//! All of them have `f_opt = 0` at the recorded `x_opt`.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng as _;

use super::transform::{random_rotation, resolve_shift, Rotation};
use super::{Bounds, Instancing, Landscape};
use crate::error::ObjectiveError;
use crate::rng::{derive_seed, seeded};

pub(crate) struct Built {
    pub landscape: Arc<dyn Landscape>,
    pub x_opt: Vec<f64>,
    pub f_opt: f64,
}

type Builder = fn(usize, &Instancing, &Bounds) -> Result<Built, ObjectiveError>;

/// A registry entry.
pub struct FunctionInfo {
    pub name: &'static str,
    /// Closest noiseless BBOB function.
    pub bbob_like: &'static str,
    pub description: &'static str,
    pub(crate) build: Builder,
}

static REGISTRY: [FunctionInfo; 15] = [
    FunctionInfo {
        name: "sphere",
        bbob_like: "f1",
        description: "shifted sphere",
        build: build_sphere,
    },
    FunctionInfo {
        name: "rosenbrock",
        bbob_like: "f8",
        description: "shifted Rosenbrock",
        build: build_rosenbrock,
    },
    FunctionInfo {
        name: "rastrigin",
        bbob_like: "f3",
        description: "shifted separable Rastrigin",
        build: build_rastrigin,
    },
    FunctionInfo {
        name: "buche_rastrigin",
        bbob_like: "f4",
        description: "shifted skew Rastrigin-Bueche",
        build: build_buche_rastrigin,
    },
    FunctionInfo {
        name: "rastrigin_rotated",
        bbob_like: "f15",
        description: "shifted rotated Rastrigin",
        build: build_rastrigin_rotated,
    },
    FunctionInfo {
        name: "weierstrass",
        bbob_like: "f16",
        description: "shifted rotated Weierstrass, 12 terms",
        build: build_weierstrass,
    },
    FunctionInfo {
        name: "schaffers_f7",
        bbob_like: "f17",
        description: "Schaffers F7, condition 10",
        build: build_schaffers,
    },
    FunctionInfo {
        name: "schaffers_f7_ill",
        bbob_like: "f18",
        description: "Schaffers F7, condition 1000",
        build: build_schaffers_ill,
    },
    FunctionInfo {
        name: "griewank_rosenbrock",
        bbob_like: "f19",
        description: "composite Griewank-Rosenbrock F8F2",
        build: build_griewank_rosenbrock,
    },
    FunctionInfo {
        name: "schwefel",
        bbob_like: "f20",
        description: "Schwefel x*sin(sqrt|x|), scaled to the box",
        build: build_schwefel,
    },
    FunctionInfo {
        name: "gallagher101",
        bbob_like: "f21",
        description: "Gallagher Gaussian 101-me peaks",
        build: build_gallagher101,
    },
    FunctionInfo {
        name: "gallagher21",
        bbob_like: "f22",
        description: "Gallagher Gaussian 21-hi peaks",
        build: build_gallagher21,
    },
    FunctionInfo {
        name: "katsuura",
        bbob_like: "f23",
        description: "Katsuura, 32-term product, Q·Λ^100·R map",
        build: build_katsuura,
    },
    FunctionInfo {
        name: "lunacek",
        bbob_like: "f24",
        description: "Lunacek bi-Rastrigin",
        build: build_lunacek,
    },
    FunctionInfo {
        name: "ellipsoid_rotated",
        bbob_like: "f10",
        description: "rotated ellipsoid, condition 1e6",
        build: build_ellipsoid,
    },
];

/// All registered functions.
pub fn registry() -> &'static [FunctionInfo] {
    &REGISTRY
}

fn rotation_for(dim: usize, inst: &Instancing) -> Rotation {
    random_rotation(dim, inst.rotation_seed)
}

/// `α^{½·i/(D−1)}` for i = 0..D.
fn conditioning(dim: usize, alpha: f64) -> Vec<f64> {
    (0..dim)
        .map(|i| alpha.powf(0.5 * i as f64 / (dim as f64 - 1.0)))
        .collect()
}

fn diff(x: &[f64], shift: &[f64]) -> Vec<f64> {
    x.iter().zip(shift).map(|(a, b)| a - b).collect()
}

fn rastrigin_core(z: &[f64]) -> f64 {
    let n = z.len() as f64;
    let cos: f64 = z.iter().map(|v| (2.0 * PI * v).cos()).sum();
    let sq: f64 = z.iter().map(|v| v * v).sum();
    10.0 * (n - cos) + sq
}

fn done(landscape: impl Landscape + 'static, x_opt: Vec<f64>) -> Result<Built, ObjectiveError> {
    Ok(Built {
        landscape: Arc::new(landscape),
        x_opt,
        f_opt: 0.0,
    })
}

#[derive(Debug)]
struct Sphere {
    shift: Vec<f64>,
}

impl Landscape for Sphere {
    fn eval(&self, x: &[f64]) -> f64 {
        x.iter().zip(&self.shift).map(|(a, b)| (a - b) * (a - b)).sum()
    }
}

fn build_sphere(_dim: usize, inst: &Instancing, b: &Bounds) -> Result<Built, ObjectiveError> {
    let shift = resolve_shift(&inst.shift, b);
    done(Sphere { shift: shift.clone() }, shift)
}

#[derive(Debug)]
struct Ellipsoid {
    shift: Vec<f64>,
    rot: Rotation,
    scale: Vec<f64>,
}

impl Landscape for Ellipsoid {
    fn eval(&self, x: &[f64]) -> f64 {
        let z = self.rot.apply(&diff(x, &self.shift));
        z.iter().zip(&self.scale).map(|(v, s)| s * v * v).sum()
    }
}

fn build_ellipsoid(dim: usize, inst: &Instancing, b: &Bounds) -> Result<Built, ObjectiveError> {
    let shift = resolve_shift(&inst.shift, b);
    let scale = (0..dim)
        .map(|i| 1e6f64.powf(i as f64 / (dim as f64 - 1.0)))
        .collect();
    done(
        Ellipsoid {
            shift: shift.clone(),
            rot: rotation_for(dim, inst),
            scale,
        },
        shift,
    )
}

#[derive(Debug)]
struct Rosenbrock {
    shift: Vec<f64>,
}

impl Landscape for Rosenbrock {
    fn eval(&self, x: &[f64]) -> f64 {
        let z: Vec<f64> = x.iter().zip(&self.shift).map(|(a, b)| a - b + 1.0).collect();
        z.windows(2)
            .map(|w| 100.0 * (w[0] * w[0] - w[1]).powi(2) + (w[0] - 1.0).powi(2))
            .sum()
    }
}

fn build_rosenbrock(_dim: usize, inst: &Instancing, b: &Bounds) -> Result<Built, ObjectiveError> {
    let shift = resolve_shift(&inst.shift, b);
    done(Rosenbrock { shift: shift.clone() }, shift)
}

#[derive(Debug)]
struct Rastrigin {
    shift: Vec<f64>,
    rot: Option<Rotation>,
}

impl Landscape for Rastrigin {
    fn eval(&self, x: &[f64]) -> f64 {
        let d = diff(x, &self.shift);
        match &self.rot {
            Some(r) => rastrigin_core(&r.apply(&d)),
            None => rastrigin_core(&d),
        }
    }
}

fn build_rastrigin(_dim: usize, inst: &Instancing, b: &Bounds) -> Result<Built, ObjectiveError> {
    let shift = resolve_shift(&inst.shift, b);
    done(
        Rastrigin {
            shift: shift.clone(),
            rot: None,
        },
        shift,
    )
}

fn build_rastrigin_rotated(
    dim: usize,
    inst: &Instancing,
    b: &Bounds,
) -> Result<Built, ObjectiveError> {
    let shift = resolve_shift(&inst.shift, b);
    done(
        Rastrigin {
            shift: shift.clone(),
            rot: Some(rotation_for(dim, inst)),
        },
        shift,
    )
}

/// Separable Rastrigin with per-coordinate scaling `10^{½·i/(D−1)}`, and a
/// further factor 10 on positive even-indexed coordinates.
#[derive(Debug)]
struct BucheRastrigin {
    shift: Vec<f64>,
    scale: Vec<f64>,
}

impl Landscape for BucheRastrigin {
    fn eval(&self, x: &[f64]) -> f64 {
        let z: Vec<f64> = x
            .iter()
            .zip(&self.shift)
            .zip(&self.scale)
            .enumerate()
            .map(|(i, ((a, b), s))| {
                let v = s * (a - b);
                if i % 2 == 0 && v > 0.0 {
                    10.0 * v
                } else {
                    v
                }
            })
            .collect();
        rastrigin_core(&z)
    }
}

fn build_buche_rastrigin(
    dim: usize,
    inst: &Instancing,
    b: &Bounds,
) -> Result<Built, ObjectiveError> {
    let shift = resolve_shift(&inst.shift, b);
    done(
        BucheRastrigin {
            shift: shift.clone(),
            scale: conditioning(dim, 10.0),
        },
        shift,
    )
}

const WEIERSTRASS_TERMS: i32 = 12;

/// Minima on every integer lattice point of the rotated, shifted coordinates.
#[derive(Debug)]
struct Weierstrass {
    shift: Vec<f64>,
    rot: Rotation,
    f0: f64,
}

impl Landscape for Weierstrass {
    fn eval(&self, x: &[f64]) -> f64 {
        let z = self.rot.apply(&diff(x, &self.shift));
        let mut acc = 0.0;
        for v in &z {
            for k in 0..WEIERSTRASS_TERMS {
                let a = 0.5f64.powi(k);
                let b = 3f64.powi(k);
                acc += a * (2.0 * PI * b * (v + 0.5)).cos();
            }
        }
        let inner = acc / z.len() as f64 - self.f0;
        10.0 * inner.powi(3)
    }
}

fn build_weierstrass(dim: usize, inst: &Instancing, b: &Bounds) -> Result<Built, ObjectiveError> {
    let shift = resolve_shift(&inst.shift, b);
    let f0 = (0..WEIERSTRASS_TERMS)
        .map(|k| 0.5f64.powi(k) * (2.0 * PI * 3f64.powi(k) * 0.5).cos())
        .sum();
    done(
        Weierstrass {
            shift: shift.clone(),
            rot: rotation_for(dim, inst),
            f0,
        },
        shift,
    )
}

#[derive(Debug)]
struct Schaffers {
    shift: Vec<f64>,
    rot: Rotation,
    scale: Vec<f64>,
}

impl Landscape for Schaffers {
    fn eval(&self, x: &[f64]) -> f64 {
        let z: Vec<f64> = self
            .rot
            .apply(&diff(x, &self.shift))
            .iter()
            .zip(&self.scale)
            .map(|(v, s)| v * s)
            .collect();
        let n = z.len() as f64;
        let sum: f64 = z
            .windows(2)
            .map(|w| {
                let s = (w[0] * w[0] + w[1] * w[1]).sqrt();
                let root = s.sqrt();
                root + root * (50.0 * s.powf(0.2)).sin().powi(2)
            })
            .sum();
        (sum / (n - 1.0)).powi(2)
    }
}

fn schaffers(dim: usize, inst: &Instancing, b: &Bounds, alpha: f64) -> Result<Built, ObjectiveError> {
    let shift = resolve_shift(&inst.shift, b);
    done(
        Schaffers {
            shift: shift.clone(),
            rot: rotation_for(dim, inst),
            scale: conditioning(dim, alpha),
        },
        shift,
    )
}

fn build_schaffers(dim: usize, inst: &Instancing, b: &Bounds) -> Result<Built, ObjectiveError> {
    schaffers(dim, inst, b, 10.0)
}

fn build_schaffers_ill(dim: usize, inst: &Instancing, b: &Bounds) -> Result<Built, ObjectiveError> {
    schaffers(dim, inst, b, 1000.0)
}

#[derive(Debug)]
struct GriewankRosenbrock {
    shift: Vec<f64>,
    rot: Rotation,
    scale: f64,
}

impl Landscape for GriewankRosenbrock {
    fn eval(&self, x: &[f64]) -> f64 {
        let z: Vec<f64> = self
            .rot
            .apply(&diff(x, &self.shift))
            .iter()
            .map(|v| self.scale * v + 1.0)
            .collect();
        let n = z.len() as f64;
        let sum: f64 = z
            .windows(2)
            .map(|w| {
                let s = 100.0 * (w[0] * w[0] - w[1]).powi(2) + (w[0] - 1.0).powi(2);
                s / 4000.0 - s.cos()
            })
            .sum();
        10.0 * sum / (n - 1.0) + 10.0
    }
}

fn build_griewank_rosenbrock(
    dim: usize,
    inst: &Instancing,
    b: &Bounds,
) -> Result<Built, ObjectiveError> {
    let shift = resolve_shift(&inst.shift, b);
    done(
        GriewankRosenbrock {
            shift: shift.clone(),
            rot: rotation_for(dim, inst),
            scale: 1f64.max((dim as f64).sqrt() / 8.0),
        },
        shift,
    )
}

/// `−z·sin(√|z|)` with a quadratic wall outside `|z| ≤ 500`.
fn schwefel_term(z: f64) -> f64 {
    let wall = (z.abs() - 500.0).max(0.0);
    -z * z.abs().sqrt().sin() + wall * wall
}

/// Maximizer of `z·sin(√z)` near 420.97, by bisection on its derivative.
fn schwefel_argmin() -> f64 {
    let slope = |z: f64| {
        let r = z.sqrt();
        r.sin() + 0.5 * r * r.cos()
    };
    let (mut lo, mut hi) = (400.0, 440.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if slope(lo).signum() == slope(mid).signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Each coordinate maps to `z = 100·(x − x_opt) + z*`.
#[derive(Debug)]
struct Schwefel {
    shift: Vec<f64>,
    z_star: f64,
    h_star: f64,
}

impl Landscape for Schwefel {
    fn eval(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(&self.shift)
            .map(|(a, b)| schwefel_term(100.0 * (a - b) + self.z_star) - self.h_star)
            .sum()
    }
}

fn build_schwefel(_dim: usize, inst: &Instancing, b: &Bounds) -> Result<Built, ObjectiveError> {
    let shift = resolve_shift(&inst.shift, b);
    let z_star = schwefel_argmin();
    done(
        Schwefel {
            shift: shift.clone(),
            z_star,
            h_star: schwefel_term(z_star),
        },
        shift,
    )
}

#[derive(Debug)]
struct Peak {
    /// `R·y_i`.
    center: Vec<f64>,
    /// Diagonal of the peak's precision matrix in rotated coordinates.
    precision: Vec<f64>,
    weight: f64,
}

/// `f(x) = (10 − max_i w_i·exp(−(x − y_i)ᵀRᵀC_iR(x − y_i) / 2D))²`.
///
/// Peak 0 is the global one (weight 10). The others have weights spread evenly
/// over [1.1, 9.1] and log-uniform condition numbers in [1, 1000²].
#[derive(Debug)]
struct Gallagher {
    rot: Rotation,
    peaks: Vec<Peak>,
}

impl Landscape for Gallagher {
    fn eval(&self, x: &[f64]) -> f64 {
        let rx = self.rot.apply(x);
        let scale = 1.0 / (2.0 * x.len() as f64);
        let best = self
            .peaks
            .iter()
            .map(|p| {
                let q: f64 = rx
                    .iter()
                    .zip(&p.center)
                    .zip(&p.precision)
                    .map(|((a, c), w)| w * (a - c) * (a - c))
                    .sum();
                p.weight * (-scale * q).exp()
            })
            .fold(f64::NEG_INFINITY, f64::max);
        (10.0 - best).powi(2)
    }
}

fn gallagher(
    dim: usize,
    inst: &Instancing,
    b: &Bounds,
    peaks: usize,
    global_condition: f64,
) -> Result<Built, ObjectiveError> {
    let rot = rotation_for(dim, inst);
    let x_opt = resolve_shift(&inst.shift, b);
    let mut rng = seeded(derive_seed(inst.rotation_seed, &[peaks as u64]));
    let mut precision_for = |condition: f64| -> Vec<f64> {
        let mut diag: Vec<f64> = conditioning(dim, condition)
            .iter()
            .map(|v| v / condition.powf(0.25))
            .collect();
        diag.shuffle(&mut rng);
        diag
    };
    let mut layout = vec![Peak {
        center: rot.apply(&x_opt),
        precision: precision_for(global_condition),
        weight: 10.0,
    }];
    let mut local_rng = seeded(derive_seed(inst.rotation_seed, &[peaks as u64, 1]));
    for i in 1..peaks {
        let y: Vec<f64> = b
            .lo
            .iter()
            .zip(&b.hi)
            .map(|(l, h)| {
                let mid = 0.5 * (l + h);
                let half = 0.49 * (h - l);
                local_rng.random_range(mid - half..=mid + half)
            })
            .collect();
        let condition = 1000f64.powf(2.0 * local_rng.random::<f64>());
        let weight = 1.1 + 8.0 * (i - 1) as f64 / (peaks - 2) as f64;
        layout.push(Peak {
            center: rot.apply(&y),
            precision: precision_for(condition),
            weight,
        });
    }
    done(Gallagher { rot, peaks: layout }, x_opt)
}

fn build_gallagher101(dim: usize, inst: &Instancing, b: &Bounds) -> Result<Built, ObjectiveError> {
    gallagher(dim, inst, b, 101, 1000.0)
}

fn build_gallagher21(dim: usize, inst: &Instancing, b: &Bounds) -> Result<Built, ObjectiveError> {
    gallagher(dim, inst, b, 21, 1000.0 * 1000.0)
}

const KATSUURA_TERMS: i32 = 32;

/// `10/D²·Π_i (1 + i·Σ_j |2^j z_i − [2^j z_i]| / 2^j)^{10/D^1.2} − 10/D²`
/// with `z = Q·Λ^100·R·(x − x_opt)`.
#[derive(Debug)]
struct Katsuura {
    shift: Vec<f64>,
    rot: Rotation,
}

const KATSUURA_CONDITION: f64 = 100.0;

impl Landscape for Katsuura {
    fn eval(&self, x: &[f64]) -> f64 {
        let z = self.rot.apply(&diff(x, &self.shift));
        let n = z.len() as f64;
        let exponent = 10.0 / n.powf(1.2);
        let mut product = 1.0;
        for (i, v) in z.iter().enumerate() {
            let mut sum = 0.0;
            let mut scale = 2.0;
            for _ in 0..KATSUURA_TERMS {
                let t = scale * v;
                sum += (t - t.round()).abs() / scale;
                scale *= 2.0;
            }
            product *= (1.0 + (i + 1) as f64 * sum).powf(exponent);
        }
        let factor = 10.0 / (n * n);
        factor * product - factor
    }
}

fn build_katsuura(dim: usize, inst: &Instancing, b: &Bounds) -> Result<Built, ObjectiveError> {
    let shift = resolve_shift(&inst.shift, b);
    done(
        Katsuura {
            shift: shift.clone(),
            rot: Rotation::sandwich(
                &random_rotation(dim, derive_seed(inst.rotation_seed, &[2])),
                &conditioning(dim, KATSUURA_CONDITION),
                &rotation_for(dim, inst),
            ),
        },
        shift,
    )
}

/// Double-funnel Rastrigin. The optimum sits at `μ₀/2·s` for a seeded sign
/// vector `s`, the deceptive funnel at the mirrored corner.
#[derive(Debug)]
struct Lunacek {
    signs: Vec<f64>,
    rot: Rotation,
    mu0: f64,
    mu1: f64,
    s: f64,
}

impl Landscape for Lunacek {
    fn eval(&self, x: &[f64]) -> f64 {
        let n = x.len() as f64;
        let hat: Vec<f64> = x.iter().zip(&self.signs).map(|(v, s)| 2.0 * s * v).collect();
        let near: f64 = hat.iter().map(|v| (v - self.mu0).powi(2)).sum();
        let far: f64 = n + self.s * hat.iter().map(|v| (v - self.mu1).powi(2)).sum::<f64>();
        let centered: Vec<f64> = hat.iter().map(|v| v - self.mu0).collect();
        let z = self.rot.apply(&centered);
        let cos: f64 = z.iter().map(|v| (2.0 * PI * v).cos()).sum();
        near.min(far) + 10.0 * (n - cos)
    }
}

fn build_lunacek(dim: usize, inst: &Instancing, _b: &Bounds) -> Result<Built, ObjectiveError> {
    let n = dim as f64;
    let mu0 = 2.5;
    let s = 1.0 - 1.0 / (2.0 * (n + 20.0).sqrt() - 8.2);
    let mu1 = -((mu0 * mu0 - 1.0) / s).sqrt();
    let mut rng = seeded(match &inst.shift {
        super::Shift::Seeded(seed) => *seed,
        _ => inst.rotation_seed,
    });
    let signs: Vec<f64> = (0..dim)
        .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
        .collect();
    let x_opt = signs.iter().map(|s| 0.5 * mu0 * s).collect();
    done(
        Lunacek {
            signs,
            rot: rotation_for(dim, inst),
            mu0,
            mu1,
            s,
        },
        x_opt,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schwefel_argmin_is_the_textbook_value() {
        assert!((schwefel_argmin() - 420.968_746).abs() < 1e-5);
    }

    #[test]
    fn schwefel_term_never_beats_its_argmin() {
        let h = schwefel_term(schwefel_argmin());
        let mut z = -2000.0;
        while z < 2000.0 {
            assert!(schwefel_term(z) >= h - 1e-9, "z = {z}");
            z += 0.01;
        }
    }

    #[test]
    fn weierstrass_offset_is_minus_two() {
        let f0: f64 = (0..WEIERSTRASS_TERMS)
            .map(|k| 0.5f64.powi(k) * (2.0 * PI * 3f64.powi(k) * 0.5).cos())
            .sum();
        assert!((f0 + 2.0 - 0.5f64.powi(WEIERSTRASS_TERMS - 1)).abs() < 1e-9);
    }

    #[test]
    fn registry_names_are_unique() {
        let mut names: Vec<_> = registry().iter().map(|f| f.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), registry().len());
    }
}
