//! Bivariate copula families: CDFs, densities, conditional (h-) functions
//! and their inverses, sampling, theoretical Kendall's tau and tail
//! dependence, under the four standard rotations.
//!
//! The ten families cover everything needed by the vine pipeline:
//! Independence, Gaussian, Student t, Clayton, Gumbel, Frank, Joe, BB7,
//! BB8 and the Tawn type-1 extreme-value copula. Negative dependence for
//! single-signed families is expressed through the 90/270 degree rotations;
//! the 180 degree rotation is the survival copula (the "S-" prefix in
//! reports).

mod archimedean;
mod bb;
mod elliptical;
mod tau;
pub(crate) mod tawn;

use crate::error::{Result, VineError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

pub use tau::{param_from_tau, tau_quadrature};

use archimedean::{clayton, frank, gumbel, joe};
use elliptical::{gaussian, student_t};

/// Inputs are clamped to `[CLAMP_EPS, 1 - CLAMP_EPS]` before evaluating
/// densities and h-functions; copula densities diverge on the boundary.
pub const CLAMP_EPS: f64 = 1e-10;

fn clamp_unit(x: f64) -> f64 {
    x.clamp(CLAMP_EPS, 1.0 - CLAMP_EPS)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BicopFamily {
    Independence,
    Gaussian,
    #[serde(rename = "Student t")]
    StudentT,
    Clayton,
    Gumbel,
    Frank,
    Joe,
    #[serde(rename = "BB7")]
    Bb7,
    #[serde(rename = "BB8")]
    Bb8,
    Tawn,
}

impl BicopFamily {
    pub const ALL: [BicopFamily; 10] = [
        BicopFamily::Independence,
        BicopFamily::Gaussian,
        BicopFamily::StudentT,
        BicopFamily::Clayton,
        BicopFamily::Gumbel,
        BicopFamily::Frank,
        BicopFamily::Joe,
        BicopFamily::Bb7,
        BicopFamily::Bb8,
        BicopFamily::Tawn,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BicopFamily::Independence => "Independence",
            BicopFamily::Gaussian => "Gaussian",
            BicopFamily::StudentT => "Student t",
            BicopFamily::Clayton => "Clayton",
            BicopFamily::Gumbel => "Gumbel",
            BicopFamily::Frank => "Frank",
            BicopFamily::Joe => "Joe",
            BicopFamily::Bb7 => "BB7",
            BicopFamily::Bb8 => "BB8",
            BicopFamily::Tawn => "Tawn",
        }
    }

    /// Number of free parameters.
    pub fn n_params(&self) -> usize {
        match self {
            BicopFamily::Independence => 0,
            BicopFamily::Gaussian
            | BicopFamily::Clayton
            | BicopFamily::Gumbel
            | BicopFamily::Frank
            | BicopFamily::Joe => 1,
            BicopFamily::StudentT | BicopFamily::Bb7 | BicopFamily::Bb8 | BicopFamily::Tawn => 2,
        }
    }

    /// True for families whose base copula only models positive dependence,
    /// so negative dependence needs a 90/270 degree rotation.
    pub fn needs_rotation_for_negative_tau(&self) -> bool {
        matches!(
            self,
            BicopFamily::Clayton
                | BicopFamily::Gumbel
                | BicopFamily::Joe
                | BicopFamily::Bb7
                | BicopFamily::Bb8
                | BicopFamily::Tawn
        )
    }

    /// Parse a family name as used on the command line (case-insensitive,
    /// "student-t"/"studentt" accepted for "Student t").
    pub fn parse(name: &str) -> Option<BicopFamily> {
        let lower = name.to_ascii_lowercase().replace([' ', '-', '_'], "");
        match lower.as_str() {
            "independence" | "indep" => Some(BicopFamily::Independence),
            "gaussian" | "normal" => Some(BicopFamily::Gaussian),
            "studentt" | "student" | "t" => Some(BicopFamily::StudentT),
            "clayton" => Some(BicopFamily::Clayton),
            "gumbel" => Some(BicopFamily::Gumbel),
            "frank" => Some(BicopFamily::Frank),
            "joe" => Some(BicopFamily::Joe),
            "bb7" => Some(BicopFamily::Bb7),
            "bb8" => Some(BicopFamily::Bb8),
            "tawn" | "tawn1" => Some(BicopFamily::Tawn),
        _ => None,
        }
    }
}

impl std::fmt::Display for BicopFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Copula rotation in degrees. 180 is the survival copula; 90 and 270
/// extend single-signed families to negative dependence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "u16", into = "u16")]
pub enum Rotation {
    #[default]
    R0,
    R90,
    R180,
    R270,
}

impl Rotation {
    pub const ALL: [Rotation; 4] = [Rotation::R0, Rotation::R90, Rotation::R180, Rotation::R270];

    pub fn degrees(&self) -> u16 {
        match self {
            Rotation::R0 => 0,
            Rotation::R90 => 90,
            Rotation::R180 => 180,
            Rotation::R270 => 270,
        }
    }

    /// Sign applied to the base copula's tau.
    fn tau_sign(&self) -> f64 {
        match self {
            Rotation::R0 | Rotation::R180 => 1.0,
            Rotation::R90 | Rotation::R270 => -1.0,
        }
    }
}

impl From<Rotation> for u16 {
    fn from(r: Rotation) -> u16 {
        r.degrees()
    }
}

impl TryFrom<u16> for Rotation {
    type Error = String;
    fn try_from(deg: u16) -> std::result::Result<Self, String> {
        match deg {
            0 => Ok(Rotation::R0),
            90 => Ok(Rotation::R90),
            180 => Ok(Rotation::R180),
            270 => Ok(Rotation::R270),
            other => Err(format!("invalid rotation {other}, expected 0/90/180/270")),
        }
    }
}

/// Which argument of the h-function is free.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HDirection {
    /// `P(U <= x | V = cond)`, the partial derivative in the second
    /// argument.
    FirstGivenSecond,
    /// `P(V <= x | U = cond)`, the partial derivative in the first
    /// argument.
    SecondGivenFirst,
}

/// Lower and upper tail-dependence coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailDependence {
    pub lambda_lower: f64,
    pub lambda_upper: f64,
}

/// A fully specified bivariate copula: family, rotation and parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CopulaSpec {
    pub family: BicopFamily,
    pub rotation: Rotation,
    pub params: Vec<f64>,
}

impl CopulaSpec {
    pub fn new(family: BicopFamily, rotation: Rotation, params: Vec<f64>) -> Result<Self> {
        let spec = CopulaSpec {
            family,
            rotation,
            params,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn independence() -> Self {
        CopulaSpec {
            family: BicopFamily::Independence,
            rotation: Rotation::R0,
            params: Vec::new(),
        }
    }

    pub fn n_params(&self) -> usize {
        self.family.n_params()
    }

    /// Table-V style display name: "S-" prefix for the survival rotation,
    /// degree suffix for 90/270.
    pub fn display_name(&self) -> String {
        match self.rotation {
            Rotation::R0 => self.family.name().to_string(),
            Rotation::R180 => format!("S-{}", self.family.name()),
            Rotation::R90 => format!("{}-90", self.family.name()),
            Rotation::R270 => format!("{}-270", self.family.name()),
        }
    }

    /// Check the parameter vector against the family's admissible domain.
    pub fn validate(&self) -> Result<()> {
        let fail = |detail: String| {
            Err(VineError::InvalidParameter {
                family: self.family.name(),
                detail,
            })
        };
        if self.params.len() != self.family.n_params() {
            return fail(format!(
                "expected {} parameters, got {}",
                self.family.n_params(),
                self.params.len()
            ));
        }
        if self.params.iter().any(|p| !p.is_finite()) {
            return fail("parameters must be finite".into());
        }
        let p = &self.params;
        match self.family {
            BicopFamily::Independence => Ok(()),
            BicopFamily::Gaussian => {
                if p[0].abs() < 1.0 {
                    Ok(())
                } else {
                    fail(format!("rho = {} outside (-1, 1)", p[0]))
                }
            }
            BicopFamily::StudentT => {
                if p[0].abs() >= 1.0 {
                    fail(format!("rho = {} outside (-1, 1)", p[0]))
                } else if p[1] <= 2.0 {
                    fail(format!("nu = {} must exceed 2", p[1]))
                } else {
                    Ok(())
                }
            }
            BicopFamily::Clayton => {
                if p[0] > 0.0 {
                    Ok(())
                } else {
                    fail(format!("theta = {} must be positive", p[0]))
                }
            }
            BicopFamily::Gumbel | BicopFamily::Joe => {
                if p[0] >= 1.0 {
                    Ok(())
                } else {
                    fail(format!("theta = {} must be >= 1", p[0]))
                }
            }
            BicopFamily::Frank => {
                if p[0] != 0.0 {
                    Ok(())
                } else {
                    fail("theta must be nonzero".into())
                }
            }
            BicopFamily::Bb7 => {
                if p[0] < 1.0 {
                    fail(format!("theta = {} must be >= 1", p[0]))
                } else if p[1] <= 0.0 {
                    fail(format!("delta = {} must be positive", p[1]))
                } else {
                    Ok(())
                }
            }
            BicopFamily::Bb8 => {
                if p[0] < 1.0 {
                    fail(format!("theta = {} must be >= 1", p[0]))
                } else if !(p[1] > 0.0 && p[1] <= 1.0) {
                    fail(format!("delta = {} outside (0, 1]", p[1]))
                } else {
                    Ok(())
                }
            }
            BicopFamily::Tawn => {
                if p[0] < 1.0 {
                    fail(format!("theta = {} must be >= 1", p[0]))
                } else if !(0.0..=1.0).contains(&p[1]) {
                    fail(format!("psi = {} outside [0, 1]", p[1]))
                } else {
                    Ok(())
                }
            }
        }
    }

    // ----- base (rotation 0) building blocks -------------------------------

    fn base_cdf(&self, u: f64, v: f64) -> f64 {
        let p = &self.params;
        match self.family {
            BicopFamily::Independence => u * v,
            BicopFamily::Gaussian => gaussian::cdf(p[0], u, v),
            BicopFamily::StudentT => student_t::cdf(p[0], p[1], u, v),
            BicopFamily::Clayton => clayton::cdf(p[0], u, v),
            BicopFamily::Gumbel => gumbel::cdf(p[0], u, v),
            BicopFamily::Frank => frank::cdf(p[0], u, v),
            BicopFamily::Joe => joe::cdf(p[0], u, v),
            BicopFamily::Bb7 => bb::bb7::cdf(p[0], p[1], u, v),
            BicopFamily::Bb8 => bb::bb8::cdf(p[0], p[1], u, v),
            BicopFamily::Tawn => tawn::cdf(p[0], p[1], u, v),
        }
    }

    fn base_log_density(&self, u: f64, v: f64) -> f64 {
        let p = &self.params;
        match self.family {
            BicopFamily::Independence => 0.0,
            BicopFamily::Gaussian => gaussian::log_density(p[0], u, v),
            BicopFamily::StudentT => student_t::log_density(p[0], p[1], u, v),
            BicopFamily::Clayton => clayton::log_density(p[0], u, v),
            BicopFamily::Gumbel => gumbel::log_density(p[0], u, v),
            BicopFamily::Frank => frank::log_density(p[0], u, v),
            BicopFamily::Joe => joe::log_density(p[0], u, v),
            BicopFamily::Bb7 => bb::bb7::log_density(p[0], p[1], u, v),
            BicopFamily::Bb8 => bb::bb8::log_density(p[0], p[1], u, v),
            BicopFamily::Tawn => tawn::log_density(p[0], p[1], u, v),
        }
    }

    /// dC/dv of the unrotated copula.
    fn base_h1(&self, u: f64, v: f64) -> f64 {
        let p = &self.params;
        let raw = match self.family {
            BicopFamily::Independence => u,
            BicopFamily::Gaussian => gaussian::h1(p[0], u, v),
            BicopFamily::StudentT => student_t::h1(p[0], p[1], u, v),
            BicopFamily::Clayton => clayton::h1(p[0], u, v),
            BicopFamily::Gumbel => gumbel::h1(p[0], u, v),
            BicopFamily::Frank => frank::h1(p[0], u, v),
            BicopFamily::Joe => joe::h1(p[0], u, v),
            BicopFamily::Bb7 => bb::bb7::h1(p[0], p[1], u, v),
            BicopFamily::Bb8 => bb::bb8::h1(p[0], p[1], u, v),
            BicopFamily::Tawn => tawn::h1(p[0], p[1], u, v),
        };
        raw.clamp(0.0, 1.0)
    }

    /// dC/du of the unrotated copula. All families except Tawn are
    /// exchangeable, for which this is `base_h1` with swapped arguments.
    fn base_h2(&self, u: f64, v: f64) -> f64 {
        match self.family {
            BicopFamily::Tawn => tawn::h2(self.params[0], self.params[1], u, v).clamp(0.0, 1.0),
            _ => self.base_h1(v, u),
        }
    }

    /// Analytic inverse of `base_h1` in `u`, where one exists.
    fn base_hinv1_analytic(&self, p: f64, v: f64) -> Option<f64> {
        let par = &self.params;
        match self.family {
            BicopFamily::Independence => Some(p),
            BicopFamily::Gaussian => gaussian::hinv1(par[0], p, v),
            BicopFamily::StudentT => student_t::hinv1(par[0], par[1], p, v),
            BicopFamily::Clayton => clayton::hinv1(par[0], p, v),
            BicopFamily::Frank => frank::hinv1(par[0], p, v),
            _ => None,
        }
    }

    /// Solve `base_h1(u, v) = p` for `u`, using the analytic inverse when
    /// available and a density-guided safeguarded Newton otherwise.
    fn base_hinv1(&self, p: f64, v: f64) -> Result<f64> {
        if let Some(u) = self.base_hinv1_analytic(p, v) {
            let u = clamp_unit(u);
            // Analytic forms can drift at extreme arguments; accept only if
            // the round trip holds.
            if (self.base_h1(u, v) - p).abs() < 1e-9 {
                return Ok(u);
            }
        }
        let h = |x: f64| self.base_h1(x, v);
        let dens = |x: f64| self.base_log_density(x, v).exp();
        invert_monotone(h, dens, p)
    }

    /// Solve `base_h2(u, v) = p` for `v`.
    fn base_hinv2(&self, p: f64, u: f64) -> Result<f64> {
        match self.family {
            BicopFamily::Tawn => {
                let h = |x: f64| self.base_h2(u, x);
                let dens = |x: f64| self.base_log_density(u, x).exp();
                invert_monotone(h, dens, p)
            }
            // exchangeable: h2(u, .) = h1(. , u)
            _ => self.base_hinv1(p, u),
        }
    }

    // ----- rotated public surface ------------------------------------------

    /// C(u, v) with boundary cases handled exactly.
    pub fn cdf(&self, u: f64, v: f64) -> Result<f64> {
        self.validate()?;
        if !(0.0..=1.0).contains(&u) || !(0.0..=1.0).contains(&v) {
            return Err(VineError::InputOutOfRange(format!(
                "cdf arguments ({u}, {v}) outside [0, 1]"
            )));
        }
        if u <= 0.0 || v <= 0.0 {
            return Ok(0.0);
        }
        if u >= 1.0 {
            return Ok(v);
        }
        if v >= 1.0 {
            return Ok(u);
        }
        Ok(self.raw_cdf(u, v))
    }

    pub(crate) fn raw_cdf(&self, u: f64, v: f64) -> f64 {
        let u = clamp_unit(u);
        let v = clamp_unit(v);
        let c = match self.rotation {
            Rotation::R0 => self.base_cdf(u, v),
            Rotation::R90 => v - self.base_cdf(1.0 - u, v),
            Rotation::R180 => u + v - 1.0 + self.base_cdf(1.0 - u, 1.0 - v),
            Rotation::R270 => u - self.base_cdf(u, 1.0 - v),
        };
        c.clamp(0.0, 1.0)
    }

    pub fn density(&self, u: f64, v: f64) -> Result<f64> {
        Ok(self.log_density(u, v)?.exp())
    }

    pub fn log_density(&self, u: f64, v: f64) -> Result<f64> {
        self.validate()?;
        let ld = self.raw_log_density(u, v);
        if ld.is_nan() || ld == f64::INFINITY {
            return Err(VineError::NumericalOverflow);
        }
        Ok(ld)
    }

    pub(crate) fn raw_log_density(&self, u: f64, v: f64) -> f64 {
        let u = clamp_unit(u);
        let v = clamp_unit(v);
        match self.rotation {
            Rotation::R0 => self.base_log_density(u, v),
            Rotation::R90 => self.base_log_density(1.0 - u, v),
            Rotation::R180 => self.base_log_density(1.0 - u, 1.0 - v),
            Rotation::R270 => self.base_log_density(u, 1.0 - v),
        }
    }

    /// Conditional distribution (h-function): the probability that the free
    /// argument is below `x` given the conditioning coordinate equals
    /// `cond`.
    pub fn hfunc(&self, x: f64, cond: f64, direction: HDirection) -> Result<f64> {
        self.validate()?;
        Ok(self.raw_hfunc(x, cond, direction))
    }

    pub(crate) fn raw_hfunc(&self, x: f64, cond: f64, direction: HDirection) -> f64 {
        let x = clamp_unit(x);
        let cond = clamp_unit(cond);
        let h = match direction {
            HDirection::FirstGivenSecond => match self.rotation {
                Rotation::R0 => self.base_h1(x, cond),
                Rotation::R90 => 1.0 - self.base_h1(1.0 - x, cond),
                Rotation::R180 => 1.0 - self.base_h1(1.0 - x, 1.0 - cond),
                Rotation::R270 => self.base_h1(x, 1.0 - cond),
            },
            HDirection::SecondGivenFirst => match self.rotation {
                Rotation::R0 => self.base_h2(cond, x),
                Rotation::R90 => self.base_h2(1.0 - cond, x),
                Rotation::R180 => 1.0 - self.base_h2(1.0 - cond, 1.0 - x),
                Rotation::R270 => 1.0 - self.base_h2(cond, 1.0 - x),
            },
        };
        h.clamp(0.0, 1.0)
    }

    /// Inverse h-function: the `x` with `hfunc(x, cond, direction) = p`.
    pub fn hinv(&self, p: f64, cond: f64, direction: HDirection) -> Result<f64> {
        self.validate()?;
        self.raw_hinv(p, cond, direction)
    }

    pub(crate) fn raw_hinv(&self, p: f64, cond: f64, direction: HDirection) -> Result<f64> {
        let p = clamp_unit(p);
        let cond = clamp_unit(cond);
        let x = match direction {
            HDirection::FirstGivenSecond => match self.rotation {
                Rotation::R0 => self.base_hinv1(p, cond)?,
                Rotation::R90 => 1.0 - self.base_hinv1(1.0 - p, cond)?,
                Rotation::R180 => 1.0 - self.base_hinv1(1.0 - p, 1.0 - cond)?,
                Rotation::R270 => self.base_hinv1(p, 1.0 - cond)?,
            },
            HDirection::SecondGivenFirst => match self.rotation {
                Rotation::R0 => self.base_hinv2(p, cond)?,
                Rotation::R90 => self.base_hinv2(p, 1.0 - cond)?,
                Rotation::R180 => 1.0 - self.base_hinv2(1.0 - p, 1.0 - cond)?,
                Rotation::R270 => 1.0 - self.base_hinv2(1.0 - p, cond)?,
            },
        };
        Ok(clamp_unit(x))
    }

    /// Draw `n` pairs by conditional inversion: `u = w1`,
    /// `v = hinv(w2 | u)`. Deterministic for a given seed.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<(f64, f64)>> {
        self.validate()?;
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let w1: f64 = rng.random();
            let w2: f64 = rng.random();
            let u = clamp_unit(w1);
            let v = self.raw_hinv(clamp_unit(w2), u, HDirection::SecondGivenFirst)?;
            out.push((u, v));
        }
        Ok(out)
    }

    /// Theoretical Kendall's tau: closed form where available, otherwise a
    /// one-dimensional generator or Pickands integral. Rotations by 90/270
    /// degrees negate the base value.
    pub fn theoretical_tau(&self) -> Result<f64> {
        self.validate()?;
        let p = &self.params;
        let base = match self.family {
            BicopFamily::Independence => 0.0,
            BicopFamily::Gaussian | BicopFamily::StudentT => tau::tau_gaussian(p[0]),
            BicopFamily::Clayton => tau::tau_clayton(p[0]),
            BicopFamily::Gumbel => tau::tau_gumbel(p[0]),
            BicopFamily::Frank => tau::tau_frank(p[0]),
            BicopFamily::Joe => tau::tau_joe(p[0]),
            BicopFamily::Bb7 => tau::tau_bb7(p[0], p[1]),
            BicopFamily::Bb8 => tau::tau_bb8(p[0], p[1]),
            BicopFamily::Tawn => tau::tau_tawn(p[0], p[1]),
        };
        Ok(self.rotation.tau_sign() * base)
    }

    /// Tail-dependence coefficients. The survival rotation swaps the
    /// tails; 90/270 rotations have none.
    pub fn tail_dependence(&self) -> Result<TailDependence> {
        self.validate()?;
        let p = &self.params;
        let (lower, upper) = match self.family {
            BicopFamily::Independence | BicopFamily::Gaussian | BicopFamily::Frank => (0.0, 0.0),
            BicopFamily::StudentT => {
                let (rho, nu) = (p[0], p[1]);
                let arg = -((nu + 1.0) * (1.0 - rho) / (1.0 + rho)).sqrt();
                let lambda = 2.0 * elliptical::t_cdf(nu + 1.0, arg);
                (lambda, lambda)
            }
            BicopFamily::Clayton => ((-1.0 / p[0]).exp2(), 0.0),
            BicopFamily::Gumbel | BicopFamily::Joe => (0.0, 2.0 - (1.0 / p[0]).exp2()),
            BicopFamily::Bb7 => ((-1.0 / p[1]).exp2(), 2.0 - (1.0 / p[0]).exp2()),
            BicopFamily::Bb8 => {
                // upper tail only in the Joe limit delta = 1
                if p[1] == 1.0 {
                    (0.0, 2.0 - (1.0 / p[0]).exp2())
                } else {
                    (0.0, 0.0)
                }
            }
            BicopFamily::Tawn => {
                let (theta, psi) = (p[0], p[1]);
                (0.0, 1.0 + psi - (1.0 + psi.powf(theta)).powf(1.0 / theta))
            }
        };
        let (lambda_lower, lambda_upper) = match self.rotation {
            Rotation::R0 => (lower, upper),
            Rotation::R180 => (upper, lower),
            Rotation::R90 | Rotation::R270 => (0.0, 0.0),
        };
        Ok(TailDependence {
            lambda_lower,
            lambda_upper,
        })
    }
}

/// Safeguarded Newton on a monotone nondecreasing `h` over the open unit
/// interval, with bisection fallback; `dens` is `dh/dx`.
fn invert_monotone<H, D>(h: H, dens: D, p: f64) -> Result<f64>
where
    H: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut lo = CLAMP_EPS;
    let mut hi = 1.0 - CLAMP_EPS;
    let f_lo = h(lo) - p;
    let f_hi = h(hi) - p;
    if !f_lo.is_finite() || !f_hi.is_finite() {
        return Err(VineError::ConvergenceFailure(
            "h-function is not finite at the bracket endpoints".into(),
        ));
    }
    // target outside the numerically attainable range: clamp to the edge
    if f_lo >= 0.0 {
        return Ok(lo);
    }
    if f_hi <= 0.0 {
        return Ok(hi);
    }
    let mut x = p;
    for _ in 0..200 {
        let fx = h(x) - p;
        if !fx.is_finite() {
            return Err(VineError::ConvergenceFailure(
                "h-function evaluation failed during inversion".into(),
            ));
        }
        if fx.abs() < 1e-12 {
            return Ok(x);
        }
        if fx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let slope = dens(x);
        let mut next = if slope.is_finite() && slope > 0.0 {
            x - fx / slope
        } else {
            f64::NAN
        };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() < 1e-16 {
            return Ok(next);
        }
        x = next;
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spec(family: BicopFamily, rotation: Rotation, params: &[f64]) -> CopulaSpec {
        CopulaSpec::new(family, rotation, params.to_vec()).unwrap()
    }

    #[test]
    fn independence_basics() {
        let c = CopulaSpec::independence();
        assert_abs_diff_eq!(c.cdf(0.3, 0.6).unwrap(), 0.18, epsilon = 1e-12);
        assert_abs_diff_eq!(c.density(0.2, 0.9).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            c.hfunc(0.25, 0.7, HDirection::FirstGivenSecond).unwrap(),
            0.25,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            c.hinv(0.25, 0.7, HDirection::FirstGivenSecond).unwrap(),
            0.25,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(c.theoretical_tau().unwrap(), 0.0);
    }

    #[test]
    fn clayton_cdf_fixed_point() {
        // (0.5^-2 + 0.5^-2 - 1)^(-1/2) = 7^(-1/2)
        let c = spec(BicopFamily::Clayton, Rotation::R0, &[2.0]);
        assert_abs_diff_eq!(
            c.cdf(0.5, 0.5).unwrap(),
            1.0 / 7.0f64.sqrt(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn gaussian_zero_rho_is_independence() {
        let c = spec(BicopFamily::Gaussian, Rotation::R0, &[0.0]);
        assert_abs_diff_eq!(c.density(0.3, 0.8).unwrap(), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(c.cdf(0.3, 0.8).unwrap(), 0.24, epsilon = 1e-9);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(CopulaSpec::new(BicopFamily::Clayton, Rotation::R0, vec![-1.0]).is_err());
        assert!(CopulaSpec::new(BicopFamily::Gumbel, Rotation::R0, vec![0.5]).is_err());
        assert!(CopulaSpec::new(BicopFamily::Frank, Rotation::R0, vec![0.0]).is_err());
        assert!(CopulaSpec::new(BicopFamily::StudentT, Rotation::R0, vec![0.2, 1.5]).is_err());
        assert!(CopulaSpec::new(BicopFamily::Bb8, Rotation::R0, vec![2.0, 1.5]).is_err());
        assert!(CopulaSpec::new(BicopFamily::Tawn, Rotation::R0, vec![2.0, -0.1]).is_err());
        assert!(CopulaSpec::new(BicopFamily::Independence, Rotation::R0, vec![1.0]).is_err());
    }

    #[test]
    fn display_names_follow_table_conventions() {
        assert_eq!(spec(BicopFamily::Joe, Rotation::R180, &[1.5]).display_name(), "S-Joe");
        assert_eq!(
            spec(BicopFamily::Bb8, Rotation::R270, &[1.5, 0.5]).display_name(),
            "BB8-270"
        );
        assert_eq!(spec(BicopFamily::Tawn, Rotation::R0, &[1.5, 0.5]).display_name(), "Tawn");
    }

    #[test]
    fn copula_spec_json_round_trip() {
        let c = spec(BicopFamily::StudentT, Rotation::R90, &[0.4, 7.5]);
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.contains("\"Student t\""), "{json}");
        assert!(json.contains("\"rotation\":90"), "{json}");
        let back: CopulaSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn sampling_is_deterministic() {
        let c = spec(BicopFamily::Gumbel, Rotation::R0, &[2.0]);
        let a = c.sample(64, 9).unwrap();
        let b = c.sample(64, 9).unwrap();
        assert_eq!(a, b);
        let other = c.sample(64, 10).unwrap();
        assert_ne!(a, other);
    }
}
