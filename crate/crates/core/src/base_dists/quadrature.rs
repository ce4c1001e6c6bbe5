//! Globally adaptive Gauss–Kronrod quadrature.
//!
//! Each subinterval is integrated with the 7-point Gauss / 15-point Kronrod
//! pair; the interval with the largest error estimate is bisected until the
//! summed estimate meets `max(abs_tol, rel_tol·|I|)`. Semi-infinite ranges
//! `(a, ∞)` are mapped to `[0, 1)` by `x = a + t/(1-t)`, `dx = dt/(1-t)²`.

use std::collections::BinaryHeap;

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-10, max_subdivisions: 200 }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = Self { abs_tol, rel_tol, max_subdivisions };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_tolerance(tol: f64) -> Self {
        Self { abs_tol: tol, rel_tol: tol, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return domain("quadrature tolerances must be strictly positive");
        }
        if self.max_subdivisions < 10 {
            return domain("max_subdivisions must be at least 10");
        }
        Ok(())
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    Segment { a, b, value, error }
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return domain("integration limits must be finite; use integrate_halfline");
    }
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return integrate(f, b, a, spec).map(|v| -v);
    }
    let first = kronrod15(&f, a, b);
    let mut total = first.value;
    let mut total_err = first.error;
    let mut heap = BinaryHeap::with_capacity(2 * spec.max_subdivisions + 1);
    heap.push(first);
    let mut subdivisions = 0;
    loop {
        if !total.is_finite() {
            return Err(Error::Convergence { estimate: total, error_bound: f64::INFINITY });
        }
        if total_err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
            return Ok(total);
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::Convergence { estimate: total, error_bound: total_err });
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval cannot be split further in floating point
            return Err(Error::Convergence { estimate: total, error_bound: total_err });
        }
        let left = kronrod15(&f, worst.a, mid);
        let right = kronrod15(&f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
        // re-sum occasionally so cancellation in the running totals cannot stall convergence
        if subdivisions % 32 == 0 {
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }
}

/// Integrates `f` over `(0, ∞)`.
pub fn integrate_halfline<F: Fn(f64) -> f64>(f: F, spec: &QuadratureSpec) -> Result<f64> {
    integrate_from(f, 0.0, spec)
}

/// Integrates `f` over `(a, ∞)`.
pub fn integrate_from<F: Fn(f64) -> f64>(f: F, a: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !a.is_finite() {
        return domain("lower limit must be finite");
    }
    let mapped = |t: f64| {
        let one_minus = 1.0 - t;
        let x = a + t / one_minus;
        if !x.is_finite() {
            return 0.0;
        }
        let v = f(x) / (one_minus * one_minus);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(mapped, 0.0, 1.0, spec)
}

/// Integrates `f` over `(-∞, b)`.
pub fn integrate_to<F: Fn(f64) -> f64>(f: F, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    integrate_from(|x| f(-x), -b, spec)
}

/// Integrates `f` over the real line, split at `split`.
pub fn integrate_whole_line<F: Fn(f64) -> f64>(f: F, split: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(integrate_to(&f, split, spec)? + integrate_from(&f, split, spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_halfline() {
        let v = integrate_halfline(|x| (-x).exp(), &QuadratureSpec::default()).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn polynomial_is_exact() {
        let v = integrate(|x| x.powi(5) - 3.0 * x, -1.0, 2.0, &QuadratureSpec::default()).unwrap();
        assert!((v - (64.0 / 6.0 - 1.0 / 6.0 - 4.5)).abs() < 1e-13);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let spec = QuadratureSpec::default();
        let fwd = integrate(f64::sin, 0.0, 1.0, &spec).unwrap();
        let rev = integrate(f64::sin, 1.0, 0.0, &spec).unwrap();
        assert_eq!(fwd, -rev);
    }

    #[test]
    fn non_convergence_reports_best_estimate() {
        let spec = QuadratureSpec::new(1e-14, 1e-14, 10).unwrap();
        let err = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &spec).unwrap_err();
        match err {
            Error::Convergence { estimate, error_bound } => {
                assert!(estimate.is_finite());
                assert!(error_bound > 1e-14);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(QuadratureSpec::new(0.0, 1e-10, 100).is_err());
        assert!(QuadratureSpec::new(1e-10, -1.0, 100).is_err());
        assert!(QuadratureSpec::new(1e-10, 1e-10, 9).is_err());
    }

    #[test]
    fn gaussian_over_whole_line() {
        let v = integrate_whole_line(|x| (-x * x).exp(), 0.3, &QuadratureSpec::default()).unwrap();
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }
}
