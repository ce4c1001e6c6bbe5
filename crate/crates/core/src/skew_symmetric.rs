//! Skew-symmetric densities `(2/σ) f(z) G(λ ω(z))`, `z = (x-μ)/σ`, plus the
//! two-piece and log-skew-symmetric variants.

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use serde_with::{DeserializeFromStr, SerializeDisplay};

use crate::base_dists::{integrate_from, QuadratureSpec, SymmetricBase};
use crate::error::{domain, Error, Result};
use crate::rng::CounterRng;

/// The odd function inside the skewing cdf.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Omega {
    Identity,
    /// `x·√((ν+1)/(ν+x²))`, the argument of the Azzalini–Capitanio skew-t.
    SkewT {
        dof: f64,
    },
}

impl Omega {
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Omega::Identity => x,
            Omega::SkewT { dof } => x * ((dof + 1.0) / (dof + x * x)).sqrt(),
        }
    }
}

/// Named `(f, G, ω)` triples. Written as `skew-normal`, `skew-logistic`,
/// `skew-laplace` or `skew-t:ν`.
#[derive(Debug, Clone, Copy, PartialEq, SerializeDisplay, DeserializeFromStr)]
pub enum SkewFamily {
    SkewNormal,
    SkewLogistic,
    SkewLaplace,
    SkewT { dof: f64 },
}

impl SkewFamily {
    pub fn skew_t(dof: f64) -> Result<Self> {
        SymmetricBase::student_t(dof)?;
        Ok(Self::SkewT { dof })
    }

    pub fn validate(&self) -> Result<()> {
        if let Self::SkewT { dof } = *self {
            SymmetricBase::student_t(dof)?;
        }
        Ok(())
    }

    /// The symmetric density being skewed.
    pub fn base(&self) -> SymmetricBase {
        match *self {
            Self::SkewNormal => SymmetricBase::Normal,
            Self::SkewLogistic => SymmetricBase::Logistic,
            Self::SkewLaplace => SymmetricBase::Laplace,
            Self::SkewT { dof } => SymmetricBase::StudentT { dof },
        }
    }

    /// The law whose cdf acts as skewing function.
    pub fn skewing(&self) -> SymmetricBase {
        match *self {
            Self::SkewT { dof } => SymmetricBase::StudentT { dof: dof + 1.0 },
            other => other.base(),
        }
    }

    pub fn omega(&self) -> Omega {
        match *self {
            Self::SkewT { dof } => Omega::SkewT { dof },
            _ => Omega::Identity,
        }
    }

    /// Standardized density `2 f(z) G(λ ω(z))`.
    pub(crate) fn std_pdf(&self, z: f64, lambda: f64) -> f64 {
        2.0 * self.base().pdf_unchecked(z) * self.skewing().cdf_unchecked(lambda * self.omega().eval(z))
    }

    pub(crate) fn std_ln_pdf(&self, z: f64, lambda: f64) -> f64 {
        LN_2 + self.base().ln_pdf_unchecked(z) + self.skewing().ln_cdf_unchecked(lambda * self.omega().eval(z))
    }

    /// Mass of the standardized density to the left of `z`, by quadrature.
    pub(crate) fn std_cdf(&self, z: f64, lambda: f64, spec: &QuadratureSpec) -> Result<f64> {
        let f = self.base();
        let g = self.skewing();
        let w = self.omega();
        if z <= 0.0 {
            // reflect onto (|z|, ∞) using the symmetry of f and G
            integrate_from(|t| 2.0 * f.pdf_unchecked(t) * g.cdf_unchecked(-lambda * w.eval(t)), -z, spec)
        } else {
            let upper = integrate_from(|t| 2.0 * f.pdf_unchecked(t) * g.cdf_unchecked(lambda * w.eval(t)), z, spec)?;
            Ok(1.0 - upper)
        }
    }

    /// One standardized draw.
    pub(crate) fn std_sample<R: Rng + ?Sized>(&self, lambda: f64, rng: &mut R) -> f64 {
        match *self {
            Self::SkewT { dof } => {
                // scale mixture of skew-normals: Z_λ / √V, V ~ χ²_ν/ν
                let z = Self::SkewNormal.std_sample(lambda, rng);
                let v: f64 = ChiSquared::new(dof).expect("validated dof").sample(rng) / dof;
                z / v.sqrt()
            }
            Self::SkewNormal => {
                let y: f64 = rng.sample(StandardNormal);
                let w: f64 = rng.sample(StandardNormal);
                if w <= lambda * y {
                    y
                } else {
                    -y
                }
            }
            _ => {
                let y = self.base().sample(rng);
                let w = self.skewing().sample(rng);
                if w <= lambda * self.omega().eval(y) {
                    y
                } else {
                    -y
                }
            }
        }
    }
}

impl fmt::Display for SkewFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SkewNormal => write!(f, "skew-normal"),
            Self::SkewLogistic => write!(f, "skew-logistic"),
            Self::SkewLaplace => write!(f, "skew-laplace"),
            Self::SkewT { dof } => write!(f, "skew-t:{dof}"),
        }
    }
}

impl FromStr for SkewFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase().replace('_', "-");
        match s.as_str() {
            "skew-normal" | "sn" => Ok(Self::SkewNormal),
            "skew-logistic" | "sl" => Ok(Self::SkewLogistic),
            "skew-laplace" => Ok(Self::SkewLaplace),
            _ => match s.strip_prefix("skew-t:") {
                Some(dof) => {
                    let dof: f64 = dof.trim().parse().map_err(|e| Error::Format(format!("skew-t dof `{dof}`: {e}")))?;
                    Self::skew_t(dof).map_err(|e| Error::Format(e.to_string()))
                }
                None => Err(Error::Format(format!(
                    "unknown family `{s}` (expected skew-normal, skew-logistic, skew-laplace or skew-t:ν)"
                ))),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkewSymmetricModel {
    pub family: SkewFamily,
    pub mu: f64,
    pub sigma: f64,
    pub lambda: f64,
}

impl SkewSymmetricModel {
    pub fn new(family: SkewFamily, mu: f64, sigma: f64, lambda: f64) -> Result<Self> {
        let model = Self { family, mu, sigma, lambda };
        model.validate()?;
        Ok(model)
    }

    /// Location 0, scale 1.
    pub fn standard(family: SkewFamily, lambda: f64) -> Result<Self> {
        Self::new(family, 0.0, 1.0, lambda)
    }

    pub fn validate(&self) -> Result<()> {
        self.family.validate()?;
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return domain(format!("scale must be positive and finite, got {}", self.sigma));
        }
        if !self.mu.is_finite() || !self.lambda.is_finite() {
            return domain("location and skewness must be finite");
        }
        Ok(())
    }

    fn standardize(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return domain(format!("argument must be finite, got {x}"));
        }
        Ok((x - self.mu) / self.sigma)
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        let z = self.standardize(x)?;
        Ok(self.family.std_pdf(z, self.lambda) / self.sigma)
    }

    pub fn log_pdf(&self, x: f64) -> Result<f64> {
        let z = self.standardize(x)?;
        Ok(self.family.std_ln_pdf(z, self.lambda) - self.sigma.ln())
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        self.cdf_with(x, &QuadratureSpec::default())
    }

    pub fn cdf_with(&self, x: f64, spec: &QuadratureSpec) -> Result<f64> {
        let z = self.standardize(x)?;
        self.family.std_cdf(z, self.lambda, spec)
    }

    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        if n == 0 {
            return domain("sample size must be at least 1");
        }
        let mut rng = CounterRng::new(seed);
        Ok(self.sample_with(n, &mut rng))
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        (0..n).map(|_| self.mu + self.sigma * self.family.std_sample(self.lambda, rng)).collect()
    }

    /// Density of `Y = exp(X)`.
    pub fn log_skew_pdf(&self, y: f64) -> Result<f64> {
        if !(y > 0.0 && y.is_finite()) {
            return domain(format!("log-skew-symmetric support is y > 0, got {y}"));
        }
        Ok(self.pdf(y.ln())? / y)
    }
}

/// Two-piece density `f(x/(1-γ))` on `x < 0`, `f(x/(1+γ))` on `x ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPieceModel {
    pub base: SymmetricBase,
    pub gamma: f64,
}

impl TwoPieceModel {
    pub fn new(base: SymmetricBase, gamma: f64) -> Result<Self> {
        base.validate()?;
        if !(gamma.abs() < 1.0) {
            return domain(format!("two-piece asymmetry must satisfy |γ| < 1, got {gamma}"));
        }
        Ok(Self { base, gamma })
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        if !(self.gamma.abs() < 1.0) {
            return domain(format!("two-piece asymmetry must satisfy |γ| < 1, got {}", self.gamma));
        }
        if !x.is_finite() {
            return domain(format!("argument must be finite, got {x}"));
        }
        let scaled = if x < 0.0 { x / (1.0 - self.gamma) } else { x / (1.0 + self.gamma) };
        Ok(self.base.pdf_unchecked(scaled))
    }
}
