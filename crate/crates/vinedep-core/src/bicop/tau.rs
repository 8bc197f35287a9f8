//! Theoretical Kendall's tau per family, the tau -> parameter inversions
//! used for starting values, and the direct two-dimensional quadrature of
//! `tau = 4 * E[C(U, V)] - 1` kept as a consistency oracle.

use super::{tawn, BicopFamily, CopulaSpec, Rotation};
use crate::error::{Result, VineError};
use crate::numeric::{brent_root, debye1, gauss_legendre, integrate_graded_unit};

pub(crate) fn tau_clayton(theta: f64) -> f64 {
    theta / (theta + 2.0)
}

pub(crate) fn tau_gumbel(theta: f64) -> f64 {
    1.0 - 1.0 / theta
}

pub(crate) fn tau_gaussian(rho: f64) -> f64 {
    2.0 / std::f64::consts::PI * rho.asin()
}

/// Frank tau via the first Debye function; odd in theta.
pub(crate) fn tau_frank(theta: f64) -> f64 {
    1.0 - 4.0 / theta * (1.0 - debye1(theta))
}

/// Joe tau by its series expansion
/// `1 - 4 * sum_k 1 / (k (theta k + 2)(theta (k-1) + 2))`,
/// with an integral bound on the truncated tail.
pub(crate) fn tau_joe(theta: f64) -> f64 {
    let mut sum = 0.0;
    let mut k = 1u64;
    loop {
        let kf = k as f64;
        let term = 1.0 / (kf * (theta * kf + 2.0) * (theta * (kf - 1.0) + 2.0));
        sum += term;
        if (term < 1e-14 && k > 8) || k > 2_000_000 {
            sum += 1.0 / (2.0 * theta * theta * kf * kf);
            break;
        }
        k += 1;
    }
    1.0 - 4.0 * sum
}

/// Archimedean identity `tau = 1 + 4 * Int_0^1 phi(t)/phi'(t) dt` for BB7.
pub(crate) fn tau_bb7(theta: f64, delta: f64) -> f64 {
    let rule = gauss_legendre(16);
    let integrand = |t: f64| {
        let log_xbar = (1.0 - t).ln();
        let log_a = (-(theta * log_xbar).exp_m1()).ln();
        log_a.exp() * (delta * log_a).exp_m1() / (delta * theta * ((theta - 1.0) * log_xbar).exp())
    };
    1.0 + 4.0 * integrate_graded_unit(integrand, 45, &rule)
}

/// Archimedean identity for BB8.
pub(crate) fn tau_bb8(theta: f64, delta: f64) -> f64 {
    let eta = -(theta * (1.0 - delta).ln()).exp_m1();
    let rule = gauss_legendre(16);
    let integrand = |t: f64| {
        let log_base = (1.0 - delta * t).ln();
        let x = -(theta * log_base).exp_m1();
        x * (x / eta).ln() / (theta * delta * ((theta - 1.0) * log_base).exp())
    };
    1.0 + 4.0 * integrate_graded_unit(integrand, 45, &rule)
}

/// Extreme-value representation
/// `tau = Int_0^1 w(1-w) A''(w) / A(w) dw` for the Tawn copula.
pub(crate) fn tau_tawn(theta: f64, psi: f64) -> f64 {
    if theta <= 1.0 || psi <= 0.0 {
        return 0.0;
    }
    let rule = gauss_legendre(16);
    integrate_graded_unit(
        |w| {
            w * (1.0 - w) * tawn::pickands_second_derivative(theta, psi, w)
                / tawn::pickands(theta, psi, w)
        },
        45,
        &rule,
    )
}

/// Invert tau for the one-parameter families with a usable inversion
/// (Clayton, Gumbel, Frank, Gaussian). The result carries rotation 0; the
/// caller is responsible for mapping negative dependence onto rotations.
pub fn param_from_tau(family: BicopFamily, tau: f64) -> Result<CopulaSpec> {
    let spec = |params: Vec<f64>| CopulaSpec {
        family,
        rotation: Rotation::R0,
        params,
    };
    match family {
        BicopFamily::Clayton => {
            if tau > 0.0 && tau < 1.0 {
                Ok(spec(vec![2.0 * tau / (1.0 - tau)]))
            } else {
                Err(VineError::UnattainableTau {
                    family: family.name(),
                    tau,
                })
            }
        }
        BicopFamily::Gumbel => {
            if (0.0..1.0).contains(&tau) {
                Ok(spec(vec![1.0 / (1.0 - tau)]))
            } else {
                Err(VineError::UnattainableTau {
                    family: family.name(),
                    tau,
                })
            }
        }
        BicopFamily::Gaussian => {
            if tau.abs() < 1.0 {
                Ok(spec(vec![(std::f64::consts::PI * tau / 2.0).sin()]))
            } else {
                Err(VineError::UnattainableTau {
                    family: family.name(),
                    tau,
                })
            }
        }
        BicopFamily::Frank => {
            const THETA_MAX: f64 = 35.0;
            let abs_tau = tau.abs();
            if abs_tau < 1e-10 || abs_tau >= tau_frank(THETA_MAX) {
                return Err(VineError::UnattainableTau {
                    family: family.name(),
                    tau,
                });
            }
            let theta = brent_root(
                |t| tau_frank(t) - abs_tau,
                1e-8,
                THETA_MAX,
                1e-12,
                200,
            )?;
            Ok(spec(vec![theta.copysign(tau)]))
        }
        _ => Err(VineError::InvalidParameter {
            family: family.name(),
            detail: "no one-parameter tau inversion for this family".into(),
        }),
    }
}

/// Direct evaluation of `tau = 4 Int Int C(u,v) c(u,v) du dv - 1` by tensor
/// Gauss–Legendre quadrature on corner-refined panels.
pub fn tau_quadrature(spec: &CopulaSpec, levels: u32, nodes: usize) -> Result<f64> {
    spec.validate()?;
    let rule = gauss_legendre(nodes);
    let mut breaks = Vec::with_capacity(2 * levels as usize + 3);
    breaks.push(0.0);
    for k in (1..=levels).rev() {
        breaks.push(0.5 * 0.5f64.powi(k as i32));
    }
    breaks.push(0.5);
    for k in 1..=levels {
        breaks.push(1.0 - 0.5 * 0.5f64.powi(k as i32));
    }
    breaks.push(1.0);

    let mut total = 0.0;
    for pu in breaks.windows(2) {
        let (ua, ub) = (pu[0], pu[1]);
        let umid = 0.5 * (ua + ub);
        let ulen = 0.5 * (ub - ua);
        for pv in breaks.windows(2) {
            let (va, vb) = (pv[0], pv[1]);
            let vmid = 0.5 * (va + vb);
            let vlen = 0.5 * (vb - va);
            let mut panel = 0.0;
            for &(xu, wu) in &rule {
                let u = umid + ulen * xu;
                for &(xv, wv) in &rule {
                    let v = vmid + vlen * xv;
                    panel += wu * wv * spec.raw_cdf(u, v) * spec.raw_log_density(u, v).exp();
                }
            }
            total += panel * ulen * vlen;
        }
    }
    Ok(4.0 * total - 1.0)
}
