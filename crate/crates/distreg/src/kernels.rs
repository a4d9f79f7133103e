//! Smoothing and regression kernels.
//!
//! Two kernels drive the estimator: a compactly supported smoothing kernel
//! used for density estimation, and a "boxed" Lipschitz regression kernel
//! that turns density distances into weights. The regression kernel carries
//! its declared constants (Lipschitz constant, lower box, upper box) so they
//! can be verified numerically.

use std::collections::HashMap;
use std::sync::{LazyLock, Mutex};

use crate::error::{Error, Result};

/// Families of compactly supported smoothing kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SmoothingFamily {
    Epanechnikov,
    Triangle,
    Boxcar,
}

impl SmoothingFamily {
    pub fn name(&self) -> &'static str {
        match self {
            SmoothingFamily::Epanechnikov => "epanechnikov",
            SmoothingFamily::Triangle => "triangle",
            SmoothingFamily::Boxcar => "boxcar",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "epanechnikov" => Ok(SmoothingFamily::Epanechnikov),
            "triangle" => Ok(SmoothingFamily::Triangle),
            "boxcar" => Ok(SmoothingFamily::Boxcar),
            other => Err(Error::invalid(format!(
                "unknown smoothing kernel family `{other}` (expected epanechnikov, triangle, or boxcar)"
            ))),
        }
    }
}

/// A compactly supported smoothing kernel for density estimation.
///
/// The one-dimensional form integrates to 1 over the real line. In higher
/// dimensions the same profile is applied radially and rescaled by
/// [`SmoothingKernel::radial_normalizer`] so that the k-dimensional
/// integral is again 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingKernel {
    family: SmoothingFamily,
    support_radius: f64,
}

impl SmoothingKernel {
    pub fn new(family: SmoothingFamily) -> Self {
        SmoothingKernel {
            family,
            support_radius: 1.0,
        }
    }

    pub fn epanechnikov() -> Self {
        Self::new(SmoothingFamily::Epanechnikov)
    }

    pub fn triangle() -> Self {
        Self::new(SmoothingFamily::Triangle)
    }

    pub fn boxcar() -> Self {
        Self::new(SmoothingFamily::Boxcar)
    }

    pub fn family(&self) -> SmoothingFamily {
        self.family
    }

    /// Radius of the support in canonical scale (always 1).
    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    /// Raw radial shape on `[0, 1]`, without any normalization.
    /// Zero for `t > 1` and for negative `t`.
    pub(crate) fn profile(&self, t: f64) -> f64 {
        if !(0.0..=self.support_radius).contains(&t) {
            return 0.0;
        }
        match self.family {
            SmoothingFamily::Epanechnikov => 1.0 - t * t,
            SmoothingFamily::Triangle => 1.0 - t,
            SmoothingFamily::Boxcar => 1.0,
        }
    }

    /// Evaluate the canonical one-dimensional kernel at `u`.
    ///
    /// Nonnegative, symmetric, zero outside `[-support_radius, support_radius]`,
    /// and integrates to 1 over the real line.
    pub fn eval(&self, u: f64) -> f64 {
        self.one_dim_constant() * self.profile(u.abs())
    }

    fn one_dim_constant(&self) -> f64 {
        match self.family {
            SmoothingFamily::Epanechnikov => 0.75,
            SmoothingFamily::Triangle => 1.0,
            SmoothingFamily::Boxcar => 0.5,
        }
    }

    /// Constant `c` such that `c * profile(||x||)` integrates to 1 over R^k.
    ///
    /// For k = 1 this is the closed-form constant of the canonical kernel;
    /// for k >= 2 it is computed once per (family, k) by midpoint-rule
    /// integration of the radial profile and cached.
    pub fn radial_normalizer(&self, k: usize) -> f64 {
        assert!(k >= 1, "dimension must be at least 1");
        if k == 1 {
            return self.one_dim_constant();
        }
        static CACHE: LazyLock<Mutex<HashMap<(SmoothingFamily, usize), f64>>> =
            LazyLock::new(|| Mutex::new(HashMap::new()));
        let mut cache = CACHE.lock().unwrap();
        *cache.entry((self.family, k)).or_insert_with(|| {
            // integral of profile(t) t^{k-1} over [0, radius], midpoint rule
            let cells = 200_000usize;
            let step = self.support_radius / cells as f64;
            let mut integral = 0.0;
            for i in 0..cells {
                let t = (i as f64 + 0.5) * step;
                integral += self.profile(t) * t.powi(k as i32 - 1);
            }
            integral *= step;
            1.0 / (unit_sphere_surface(k) * integral)
        })
    }

    /// Normalized radial kernel value in dimension `k` at radial distance `t`.
    pub fn radial_eval(&self, t: f64, k: usize) -> f64 {
        self.radial_normalizer(k) * self.profile(t)
    }
}

/// Surface area of the unit sphere in R^k (2 for k=1, 2*pi for k=2, ...).
fn unit_sphere_surface(k: usize) -> f64 {
    2.0 * std::f64::consts::PI.powf(k as f64 / 2.0) / gamma_half_integer(k as f64 / 2.0)
}

/// Gamma function at integer or half-integer arguments.
fn gamma_half_integer(mut x: f64) -> f64 {
    let mut g = 1.0;
    while x > 1.0 {
        x -= 1.0;
        g *= x;
    }
    if (x - 0.5).abs() < 1e-12 {
        g *= std::f64::consts::PI.sqrt();
    }
    g
}

/// Families of regression (weighting) kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegressionFamily {
    Triangle,
}

impl RegressionFamily {
    pub fn name(&self) -> &'static str {
        match self {
            RegressionFamily::Triangle => "triangle",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "triangle" => Ok(RegressionFamily::Triangle),
            other => Err(Error::invalid(format!(
                "unknown regression kernel family `{other}` (expected triangle)"
            ))),
        }
    }
}

/// A boxed, Lipschitz regression kernel on `[0, inf)`.
///
/// The declared constants claim that `lower_floor * 1{x < lower_radius}
/// <= K(x) <= 1{x <= upper_radius}` and that K is Lipschitz with constant
/// `lipschitz`. The claims are checked by [`RegressionKernel::verify_a2`];
/// the kernel function itself depends only on the family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegressionKernel {
    family: RegressionFamily,
    /// Declared Lipschitz constant L_K.
    pub lipschitz: f64,
    /// Declared weight floor inside the lower box, in (0, 1).
    pub lower_floor: f64,
    /// Radius of the lower box.
    pub lower_radius: f64,
    /// Radius of the support (upper box).
    pub upper_radius: f64,
}

impl RegressionKernel {
    /// The shipped triangle kernel `K(x) = max(0, 1 - x)` with its tightest
    /// declared constants.
    pub fn triangle() -> Self {
        RegressionKernel {
            family: RegressionFamily::Triangle,
            lipschitz: 1.0,
            lower_floor: 0.5,
            lower_radius: 0.5,
            upper_radius: 1.0,
        }
    }

    /// Same kernel function, different claimed constants. Used to exercise
    /// the verifier on invalid claims.
    pub fn triangle_with_constants(
        lipschitz: f64,
        lower_floor: f64,
        lower_radius: f64,
        upper_radius: f64,
    ) -> Self {
        RegressionKernel {
            family: RegressionFamily::Triangle,
            lipschitz,
            lower_floor,
            lower_radius,
            upper_radius,
        }
    }

    pub fn family(&self) -> RegressionFamily {
        self.family
    }

    /// Evaluate the kernel at `x >= 0`. Negative arguments are rejected.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if x < 0.0 || x.is_nan() {
            return Err(Error::invalid(format!(
                "regression kernel argument must be nonnegative, got {x}"
            )));
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: f64) -> f64 {
        match self.family {
            RegressionFamily::Triangle => (1.0 - x).max(0.0),
        }
    }

    /// Check the declared box and Lipschitz constants on a dense grid of
    /// `samples` points covering `[0, max(lower_radius, upper_radius)]`.
    pub fn verify_a2(&self, samples: usize) -> Result<A2Report> {
        if samples < 2 {
            return Err(Error::invalid(format!(
                "verify_a2 needs at least 2 sample points, got {samples}"
            )));
        }
        let span = self.lower_radius.max(self.upper_radius);
        let step = span / (samples - 1) as f64;

        let mut lower_box_violations = 0usize;
        let mut upper_box_violations = 0usize;
        let mut lipschitz_violations = 0usize;
        let mut max_ratio = 0.0f64;
        let mut prev = self.eval_unchecked(0.0);

        for i in 0..samples {
            let x = if i == samples - 1 {
                span
            } else {
                i as f64 * step
            };
            let v = self.eval_unchecked(x);
            if x < self.lower_radius && v < self.lower_floor {
                lower_box_violations += 1;
            }
            if (x <= self.upper_radius && v > 1.0) || (x > self.upper_radius && v > 0.0) {
                upper_box_violations += 1;
            }
            if i > 0 {
                let ratio = (v - prev).abs() / step;
                if ratio > max_ratio {
                    max_ratio = ratio;
                }
                // small slack absorbs rounding in the difference quotient
                if ratio > self.lipschitz * (1.0 + 1e-9) {
                    lipschitz_violations += 1;
                }
            }
            prev = v;
        }

        Ok(A2Report {
            samples,
            max_lipschitz_ratio: max_ratio,
            lipschitz_violations,
            lower_box_violations,
            upper_box_violations,
        })
    }
}

/// Outcome of a dense-grid check of the regression-kernel constants.
#[derive(Debug, Clone)]
pub struct A2Report {
    pub samples: usize,
    /// Largest observed difference quotient |K(x) - K(y)| / |x - y|.
    pub max_lipschitz_ratio: f64,
    pub lipschitz_violations: usize,
    pub lower_box_violations: usize,
    pub upper_box_violations: usize,
}

impl A2Report {
    pub fn total_violations(&self) -> usize {
        self.lipschitz_violations + self.lower_box_violations + self.upper_box_violations
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoothing_examples() {
        let epa = SmoothingKernel::epanechnikov();
        assert_eq!(epa.eval(0.0), 0.75);
        assert_eq!(epa.eval(2.0), 0.0);
        assert_eq!(epa.eval(-2.0), 0.0);
        let tri = SmoothingKernel::triangle();
        assert_eq!(tri.eval(0.5), 0.5);
        assert_eq!(tri.eval(-0.5), 0.5);
        let boxcar = SmoothingKernel::boxcar();
        assert_eq!(boxcar.eval(0.3), 0.5);
        assert_eq!(boxcar.eval(1.5), 0.0);
    }

    #[test]
    fn smoothing_integrates_to_one() {
        // midpoint rule over [-1, 1] with 10^4 cells, within 1e-3
        for kernel in [
            SmoothingKernel::epanechnikov(),
            SmoothingKernel::triangle(),
            SmoothingKernel::boxcar(),
        ] {
            let cells = 10_000;
            let r = kernel.support_radius();
            let step = 2.0 * r / cells as f64;
            let mut integral = 0.0;
            for i in 0..cells {
                let u = -r + (i as f64 + 0.5) * step;
                integral += kernel.eval(u);
            }
            integral *= step;
            assert!(
                (integral - 1.0).abs() < 1e-3,
                "{}: integral {integral}",
                kernel.family().name()
            );
        }
    }

    #[test]
    fn radial_normalizer_matches_closed_forms_in_2d() {
        use std::f64::consts::PI;
        // closed forms: 1 / (2*pi * int_0^1 profile(t) t dt)
        let cases = [
            (SmoothingKernel::epanechnikov(), 2.0 / PI),
            (SmoothingKernel::triangle(), 3.0 / PI),
            (SmoothingKernel::boxcar(), 1.0 / PI),
        ];
        for (kernel, expected) in cases {
            let c = kernel.radial_normalizer(2);
            assert!(
                (c - expected).abs() < 1e-8,
                "{}: {c} vs {expected}",
                kernel.family().name()
            );
        }
    }

    #[test]
    fn radial_kernel_mass_is_one_in_2d() {
        // direct 2-d midpoint integration of the normalized radial kernel
        let kernel = SmoothingKernel::epanechnikov();
        let cells = 400;
        let step = 2.2 / cells as f64;
        let mut mass = 0.0;
        for i in 0..cells {
            for j in 0..cells {
                let x = -1.1 + (i as f64 + 0.5) * step;
                let y = -1.1 + (j as f64 + 0.5) * step;
                mass += kernel.radial_eval((x * x + y * y).sqrt(), 2);
            }
        }
        mass *= step * step;
        assert!((mass - 1.0).abs() < 1e-3, "mass {mass}");
    }

    #[test]
    fn regression_examples() {
        let k = RegressionKernel::triangle();
        assert_eq!(k.eval(0.0).unwrap(), 1.0);
        assert_eq!(k.eval(1.0).unwrap(), 0.0);
        assert_eq!(k.eval(0.25).unwrap(), 0.75);
        assert_eq!(k.eval(3.0).unwrap(), 0.0);
        assert!(k.eval(-0.1).is_err());
    }

    #[test]
    fn verify_a2_declared_constants_pass() {
        let k = RegressionKernel::triangle();
        let report = k.verify_a2(100_000).unwrap();
        assert_eq!(report.total_violations(), 0, "{report:?}");
        assert!(report.max_lipschitz_ratio <= 1.0 + 1e-9);
    }

    #[test]
    fn verify_a2_detects_bad_lower_box() {
        // claiming r=2 fails: K(1.5) = 0 < 0.5
        let k = RegressionKernel::triangle_with_constants(1.0, 0.5, 2.0, 1.0);
        let report = k.verify_a2(10_000).unwrap();
        assert!(report.lower_box_violations >= 1);
    }

    #[test]
    fn verify_a2_two_samples_hits_endpoints() {
        let k = RegressionKernel::triangle();
        let report = k.verify_a2(2).unwrap();
        assert_eq!(report.total_violations(), 0);
    }

    #[test]
    fn verify_a2_rejects_single_sample() {
        assert!(RegressionKernel::triangle().verify_a2(1).is_err());
    }

    #[test]
    fn regression_kernel_nonincreasing() {
        let k = RegressionKernel::triangle();
        let mut prev = f64::INFINITY;
        for i in 0..=1000 {
            let x = i as f64 * 1.5e-3;
            let v = k.eval(x).unwrap();
            assert!(v <= prev + 1e-15);
            prev = v;
        }
    }

    #[test]
    fn family_names_round_trip() {
        for f in [
            SmoothingFamily::Epanechnikov,
            SmoothingFamily::Triangle,
            SmoothingFamily::Boxcar,
        ] {
            assert_eq!(SmoothingFamily::parse(f.name()).unwrap(), f);
        }
        assert!(SmoothingFamily::parse("gaussian").is_err());
        assert_eq!(
            RegressionFamily::parse("triangle").unwrap(),
            RegressionFamily::Triangle
        );
    }
}
