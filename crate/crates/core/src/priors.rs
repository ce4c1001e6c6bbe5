//! Priors on the skewness parameter λ.
//!
//! The BTV(α, β) prior places a Beta(α, β) law, shifted to (-1/2, 1/2), on
//! `M_TV(λ)` and pushes it back to the λ scale:
//!
//! ```text
//! π(λ | α, β) = (M_TV(λ) + 1/2)^{α-1} (1/2 − M_TV(λ))^{β-1} M_TV'(λ) / B(α, β)
//! ```
//!
//! Both Beta factors are evaluated from the residual mass `1/2 − |M_TV|`
//! so that the tails keep full relative precision.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use serde_with::{DeserializeFromStr, SerializeDisplay};

use crate::base_dists::special::{beta_inc, beta_inc_inv, ln_beta, std_normal_quantile};
use crate::base_dists::{cauchy_pdf, SymmetricBase};
use crate::error::{domain, Error, Result};
use crate::perturbation::PerturbationMeasure;
use crate::skew_symmetric::SkewFamily;

/// Scale of the Cauchy approximation to the skew-logistic BTV(1,1) prior.
pub const LOGISTIC_BTV11_CAUCHY_SCALE: f64 = 0.92;

/// `s₀` of the skew-Laplace Jeffreys-prior approximation.
pub const LAPLACE_JEFFREYS_S0: f64 = 0.77;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BtvPrior {
    alpha: f64,
    beta: f64,
    measure: PerturbationMeasure,
}

impl BtvPrior {
    pub fn new(family: SkewFamily, alpha: f64, beta: f64) -> Result<Self> {
        Self::with_measure(PerturbationMeasure::new(family)?, alpha, beta)
    }

    pub fn with_measure(measure: PerturbationMeasure, alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
            return domain(format!("BTV hyperparameters must be positive, got ({alpha}, {beta})"));
        }
        Ok(Self { alpha, beta, measure })
    }

    /// BTV(1,1): uniform law on the perturbation measure.
    pub fn uniform_tv(family: SkewFamily) -> Result<Self> {
        Self::new(family, 1.0, 1.0)
    }

    /// BTV(1/2,1/2): Jeffreys' Bernoulli prior on the perturbation measure.
    pub fn jeffreys_tv(family: SkewFamily) -> Result<Self> {
        Self::new(family, 0.5, 0.5)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn measure(&self) -> &PerturbationMeasure {
        &self.measure
    }

    /// `(M_TV + 1/2, 1/2 − M_TV)`, each accurate near 0.
    fn beta_coordinates(&self, lambda: f64) -> Result<(f64, f64)> {
        let residual = self.measure.residual_mass(lambda)?.max(f64::MIN_POSITIVE);
        Ok(if lambda >= 0.0 { (1.0 - residual, residual) } else { (residual, 1.0 - residual) })
    }

    pub fn density(&self, lambda: f64) -> Result<f64> {
        Ok(self.ln_density(lambda)?.exp())
    }

    pub fn ln_density(&self, lambda: f64) -> Result<f64> {
        let (lower, upper) = self.beta_coordinates(lambda)?;
        let slope = self.measure.m_tv_derivative(lambda)?;
        Ok((self.alpha - 1.0) * lower.ln() + (self.beta - 1.0) * upper.ln() - ln_beta(self.alpha, self.beta)
            + ln_slope(&self.measure, lambda, slope))
    }

    /// Prior probability of `(-∞, λ]`, which is `I_{M_TV(λ)+1/2}(α, β)`.
    pub fn cdf(&self, lambda: f64) -> Result<f64> {
        let (lower, upper) = self.beta_coordinates(lambda)?;
        Ok(if lower <= 0.5 {
            beta_inc(self.alpha, self.beta, lower)
        } else {
            1.0 - beta_inc(self.beta, self.alpha, upper)
        })
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return domain(format!("probability must lie in (0, 1), got {p}"));
        }
        let u = beta_inc_inv(self.alpha, self.beta, p);
        let m = (u - 0.5).clamp(-0.5 + 1e-16, 0.5 - 1e-16);
        self.measure.m_tv_inverse(m)
    }
}

/// `ln M_TV'(λ)`, staying finite where the closed forms would underflow.
fn ln_slope(measure: &PerturbationMeasure, lambda: f64, slope: f64) -> f64 {
    use crate::perturbation::MeasureMode;
    if slope > 1e-250 || measure.mode() == MeasureMode::Quadrature {
        return slope.ln();
    }
    let a = lambda.abs();
    match measure.family() {
        SkewFamily::SkewLaplace => -LN_2 - 2.0 * a.ln() - 2.0 * (1.0 / a).ln_1p(),
        _ => -PI.ln() - 2.0 * a.ln() - (1.0 / (a * a)).ln_1p(),
    }
}

/// Beta–TV density from a perturbation value `m` in (-1/2, 1/2) and its
/// derivative with respect to whatever parameter `m` is expressed in.
pub fn beta_tv_density(alpha: f64, beta: f64, m: f64, dm: f64) -> f64 {
    ((alpha - 1.0) * (m + 0.5).ln() + (beta - 1.0) * (0.5 - m).ln() - ln_beta(alpha, beta)).exp() * dm
}

/// The three named Jeffreys-prior approximations.
pub fn jeffreys_approx_density(family: SkewFamily, lambda: f64) -> Result<f64> {
    Ok(jeffreys_approx_ln_density(family, lambda)?.exp())
}

fn jeffreys_approx_ln_density(family: SkewFamily, lambda: f64) -> Result<f64> {
    if !lambda.is_finite() {
        return domain(format!("skewness must be finite, got {lambda}"));
    }
    match family {
        SkewFamily::SkewNormal => Ok(ln_scaled_t(0.5, PI / 2.0, lambda)),
        SkewFamily::SkewLogistic => Ok(ln_scaled_t(0.5, 4.0 / 3.0, lambda)),
        SkewFamily::SkewLaplace => {
            let s0 = LAPLACE_JEFFREYS_S0;
            Ok(-(4.0 * s0).ln() - 1.5 * (lambda.abs() / s0).ln_1p())
        }
        SkewFamily::SkewT { .. } => domain("no Jeffreys-prior approximation is available for the skew-t family"),
    }
}

fn ln_scaled_t(dof: f64, scale: f64, x: f64) -> f64 {
    SymmetricBase::StudentT { dof }.ln_pdf_unchecked(x / scale) - scale.ln()
}

/// Cauchy(0, 0.92) approximation of the skew-logistic BTV(1,1) prior.
pub fn student_t_approx_btv11_logistic(lambda: f64) -> f64 {
    cauchy_pdf(LOGISTIC_BTV11_CAUCHY_SCALE, lambda)
}

/// Skew-normal prior `(2/σ₀) φ((λ−μ₀)/σ₀) Φ(λ₀(λ−μ₀)/σ₀)`.
pub fn cs13_density(mu0: f64, sigma0: f64, lambda0: f64, lambda: f64) -> Result<f64> {
    Ok(cs13_ln_density(mu0, sigma0, lambda0, lambda)?.exp())
}

fn cs13_ln_density(mu0: f64, sigma0: f64, lambda0: f64, lambda: f64) -> Result<f64> {
    if !(sigma0 > 0.0 && sigma0.is_finite()) {
        return domain(format!("skew-normal prior scale must be positive, got {sigma0}"));
    }
    let z = (lambda - mu0) / sigma0;
    Ok(SkewFamily::SkewNormal.std_ln_pdf(z, lambda0) - sigma0.ln())
}

/// A family-independent description of a prior, as written on the command
/// line or in a study configuration.
#[derive(Debug, Clone, Copy, PartialEq, SerializeDisplay, DeserializeFromStr)]
pub enum PriorSpec {
    Btv { alpha: f64, beta: f64 },
    Jeffreys,
    Cs13 { mu0: f64, sigma0: f64, lambda0: f64 },
    StudentT { dof: f64, scale: f64 },
}

impl PriorSpec {
    pub fn build(&self, family: SkewFamily) -> Result<LambdaPrior> {
        let prior = match *self {
            PriorSpec::Btv { alpha, beta } => LambdaPrior::Btv(BtvPrior::new(family, alpha, beta)?),
            PriorSpec::Jeffreys => {
                jeffreys_approx_ln_density(family, 0.0)?;
                LambdaPrior::JeffreysApprox(family)
            }
            PriorSpec::Cs13 { mu0, sigma0, lambda0 } => LambdaPrior::Cs13 { mu0, sigma0, lambda0 },
            PriorSpec::StudentT { dof, scale } => LambdaPrior::StudentTApprox { dof, scale },
        };
        prior.validate()?;
        Ok(prior)
    }
}

impl fmt::Display for PriorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PriorSpec::Btv { alpha, beta } => write!(f, "btv:{alpha},{beta}"),
            PriorSpec::Jeffreys => write!(f, "jeffreys"),
            PriorSpec::Cs13 { mu0, sigma0, lambda0 } => write!(f, "cs13:{mu0},{sigma0},{lambda0}"),
            PriorSpec::StudentT { dof, scale } => write!(f, "t:{dof},{scale}"),
        }
    }
}

impl FromStr for PriorSpec {
    type Err = Error;

    /// Accepts `btv:α,β`, `uniform-tv`, `jeffreys-tv`, `jeffreys`,
    /// `cs13:μ₀,σ₀,λ₀` and `t:ν,scale`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a)),
            None => (s, None),
        };
        let numbers = |expected: usize| -> Result<Vec<f64>> {
            let raw = args.ok_or_else(|| Error::Format(format!("prior `{name}` needs {expected} parameters")))?;
            let values: Vec<f64> = raw
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Format(format!("prior `{s}`: {e}")))?;
            if values.len() != expected {
                return Err(Error::Format(format!("prior `{name}` needs {expected} parameters, got {}", values.len())));
            }
            Ok(values)
        };
        let no_args = |spec: PriorSpec| -> Result<PriorSpec> {
            match args {
                None => Ok(spec),
                Some(_) => Err(Error::Format(format!("prior `{name}` takes no parameters"))),
            }
        };
        match name.to_ascii_lowercase().as_str() {
            "btv" => {
                let v = numbers(2)?;
                Ok(PriorSpec::Btv { alpha: v[0], beta: v[1] })
            }
            "uniform-tv" => no_args(PriorSpec::Btv { alpha: 1.0, beta: 1.0 }),
            "jeffreys-tv" => no_args(PriorSpec::Btv { alpha: 0.5, beta: 0.5 }),
            "jeffreys" => no_args(PriorSpec::Jeffreys),
            "cs13" => {
                let v = numbers(3)?;
                Ok(PriorSpec::Cs13 { mu0: v[0], sigma0: v[1], lambda0: v[2] })
            }
            "t" => {
                let v = numbers(2)?;
                Ok(PriorSpec::StudentT { dof: v[0], scale: v[1] })
            }
            "matching" => Err(Error::Format("the matching prior is not supported".into())),
            other => Err(Error::Format(format!("unknown prior `{other}`"))),
        }
    }
}

/// Proper prior density on λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaPrior {
    Btv(BtvPrior),
    JeffreysApprox(SkewFamily),
    Cs13 { mu0: f64, sigma0: f64, lambda0: f64 },
    StudentTApprox { dof: f64, scale: f64 },
}

impl LambdaPrior {
    pub fn validate(&self) -> Result<()> {
        match *self {
            LambdaPrior::Btv(_) => Ok(()),
            LambdaPrior::JeffreysApprox(family) => jeffreys_approx_ln_density(family, 0.0).map(|_| ()),
            LambdaPrior::Cs13 { sigma0, .. } if !(sigma0 > 0.0 && sigma0.is_finite()) => {
                domain(format!("skew-normal prior scale must be positive, got {sigma0}"))
            }
            LambdaPrior::StudentTApprox { dof, scale } if !(dof > 0.0 && scale > 0.0) => {
                domain(format!("Student-t prior needs positive dof and scale, got ({dof}, {scale})"))
            }
            _ => Ok(()),
        }
    }

    /// Natural log of the density.
    pub fn log_density(&self, lambda: f64) -> Result<f64> {
        if !lambda.is_finite() {
            return domain(format!("skewness must be finite, got {lambda}"));
        }
        match *self {
            LambdaPrior::Btv(ref p) => p.ln_density(lambda),
            LambdaPrior::JeffreysApprox(family) => jeffreys_approx_ln_density(family, lambda),
            LambdaPrior::Cs13 { mu0, sigma0, lambda0 } => cs13_ln_density(mu0, sigma0, lambda0, lambda),
            LambdaPrior::StudentTApprox { dof, scale } => {
                self.validate()?;
                Ok(ln_scaled_t(dof, scale, lambda))
            }
        }
    }

    pub fn density(&self, lambda: f64) -> Result<f64> {
        Ok(self.log_density(lambda)?.exp())
    }

    /// Short human-readable name, e.g. `BTV(0.5,0.5)`.
    pub fn label(&self) -> String {
        match *self {
            LambdaPrior::Btv(ref p) => format!("BTV({},{})", p.alpha, p.beta),
            LambdaPrior::JeffreysApprox(_) => "Jeffreys".to_string(),
            LambdaPrior::Cs13 { mu0, sigma0, lambda0 } => format!("SN({mu0},{sigma0},{lambda0})"),
            LambdaPrior::StudentTApprox { dof, scale } => format!("t({dof},{scale})"),
        }
    }
}

/// Bounds on the elicited hyperparameters.
const ELICIT_MIN: f64 = 1e-3;
const ELICIT_MAX: f64 = 1e6;
const ELICIT_TOL: f64 = 1e-10;

/// Beta(α, β) hyperparameters whose quantiles at `p_lo`, `p_hi` put the
/// perturbation measure at `q_lo`, `q_hi`.
///
/// Damped Newton on `(ln α, ln β)` with a finite-difference Jacobian; if that
/// has not converged after 200 iterations, a nested bisection takes over.
pub fn elicit_beta(p_lo: f64, q_lo: f64, p_hi: f64, q_hi: f64) -> Result<(f64, f64)> {
    let targets = ElicitTargets::new(p_lo, q_lo, p_hi, q_hi)?;
    match targets.newton() {
        Some(ab) => Ok(ab),
        None => targets.nested_bisection(),
    }
}

#[derive(Debug, Clone, Copy)]
struct ElicitTargets {
    p: [f64; 2],
    u: [f64; 2],
}

impl ElicitTargets {
    fn new(p_lo: f64, q_lo: f64, p_hi: f64, q_hi: f64) -> Result<Self> {
        if !(0.0 < p_lo && p_lo < p_hi && p_hi < 1.0) {
            return domain(format!("need 0 < p_lo < p_hi < 1, got ({p_lo}, {p_hi})"));
        }
        if !(-0.5 < q_lo && q_lo < 0.5 && -0.5 < q_hi && q_hi < 0.5) {
            return domain(format!("quantile targets must lie in (-1/2, 1/2), got ({q_lo}, {q_hi})"));
        }
        if q_lo >= q_hi {
            return Err(Error::Elicitation(format!("no Beta law has decreasing quantiles ({q_lo} ≥ {q_hi})")));
        }
        Ok(Self { p: [p_lo, p_hi], u: [q_lo + 0.5, q_hi + 0.5] })
    }

    fn residual(&self, ln_a: f64, ln_b: f64) -> [f64; 2] {
        let (a, b) = (ln_a.exp(), ln_b.exp());
        [beta_inc_inv(a, b, self.p[0]) - self.u[0], beta_inc_inv(a, b, self.p[1]) - self.u[1]]
    }

    fn initial_guess(&self) -> (f64, f64) {
        let mean = 0.5 * (self.u[0] + self.u[1]);
        let spread = (self.u[1] - self.u[0]) / (std_normal_quantile(self.p[1]) - std_normal_quantile(self.p[0]));
        let common = mean * (1.0 - mean) / (spread * spread) - 1.0;
        if common > 0.0 {
            (
                (mean * common).clamp(ELICIT_MIN, ELICIT_MAX).ln(),
                ((1.0 - mean) * common).clamp(ELICIT_MIN, ELICIT_MAX).ln(),
            )
        } else {
            (0.0, 0.0)
        }
    }

    fn newton(&self) -> Option<(f64, f64)> {
        let (lo, hi) = (ELICIT_MIN.ln(), ELICIT_MAX.ln());
        let (mut x, mut y) = self.initial_guess();
        let mut r = self.residual(x, y);
        let norm = |r: [f64; 2]| r[0].abs().max(r[1].abs());
        for _ in 0..200 {
            if norm(r) < ELICIT_TOL {
                return Some((x.exp(), y.exp()));
            }
            let h = 1e-6;
            let rx = self.residual(x + h, y);
            let ry = self.residual(x, y + h);
            let j = [[(rx[0] - r[0]) / h, (ry[0] - r[0]) / h], [(rx[1] - r[1]) / h, (ry[1] - r[1]) / h]];
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if !(det.abs() > 0.0) || !det.is_finite() {
                return None;
            }
            let dx = (j[1][1] * r[0] - j[0][1] * r[1]) / det;
            let dy = (-j[1][0] * r[0] + j[0][0] * r[1]) / det;
            let mut step = 1.0;
            loop {
                let nx = (x - step * dx).clamp(lo, hi);
                let ny = (y - step * dy).clamp(lo, hi);
                let nr = self.residual(nx, ny);
                if norm(nr) < norm(r) || step < 1e-4 {
                    x = nx;
                    y = ny;
                    r = nr;
                    break;
                }
                step *= 0.5;
            }
        }
        (norm(r) < ELICIT_TOL).then(|| (x.exp(), y.exp()))
    }

    /// For each α, solve the lower-quantile condition for β (the quantile
    /// decreases in β); then bisect α on the upper-quantile condition.
    fn nested_bisection(&self) -> Result<(f64, f64)> {
        let (lo, hi) = (ELICIT_MIN.ln(), ELICIT_MAX.ln());
        let beta_for = |ln_a: f64| -> Option<f64> {
            let f = |ln_b: f64| beta_inc_inv(ln_a.exp(), ln_b.exp(), self.p[0]) - self.u[0];
            bisect(f, lo, hi)
        };
        let upper_gap = |ln_a: f64| -> Option<f64> {
            let ln_b = beta_for(ln_a)?;
            Some(beta_inc_inv(ln_a.exp(), ln_b.exp(), self.p[1]) - self.u[1])
        };
        // scan for a sign change in the upper-quantile gap
        let steps = 400;
        let mut prev: Option<(f64, f64)> = None;
        for i in 0..=steps {
            let ln_a = lo + (hi - lo) * i as f64 / steps as f64;
            let Some(gap) = upper_gap(ln_a) else {
                prev = None;
                continue;
            };
            if let Some((pa, pg)) = prev {
                if pg.signum() != gap.signum() {
                    let ln_a = bisect(|a| upper_gap(a).unwrap_or(f64::NAN), pa, ln_a)
                        .ok_or_else(|| Error::Elicitation("bisection on α failed".into()))?;
                    let ln_b =
                        beta_for(ln_a).ok_or_else(|| Error::Elicitation("no β matches the lower quantile".into()))?;
                    let r = self.residual(ln_a, ln_b);
                    if r[0].abs().max(r[1].abs()) < 1e-6 {
                        return Ok((ln_a.exp(), ln_b.exp()));
                    }
                }
            }
            prev = Some((ln_a, gap));
        }
        Err(Error::Elicitation(format!(
            "no Beta(α, β) with α, β in [{ELICIT_MIN}, {ELICIT_MAX}] matches quantiles {:?} at probabilities {:?}",
            [self.u[0] - 0.5, self.u[1] - 0.5],
            self.p
        )))
    }
}

/// Root of a function with a sign change on `[a, b]`, or `None`.
fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> Option<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return None;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if !fm.is_finite() {
            return None;
        }
        if fm == 0.0 || (b - a).abs() < 1e-14 {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}
