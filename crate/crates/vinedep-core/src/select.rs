//! Per-edge copula selection: independence pre-test, maximum-likelihood
//! fitting, and AIC ranking over a candidate family list.
//!
//! One-parameter families are fitted by bounded Brent search in a logit
//! reparameterization of the admissible box; two-parameter families start
//! from a coarse 8x8 grid over the box and refine with Nelder–Mead in the
//! transformed coordinates. The contract is the stationarity tolerance,
//! not the algorithm identity.

use crate::bicop::{param_from_tau, BicopFamily, CopulaSpec, Rotation};
use crate::dependence::{kendall_tau, TauMode};
use crate::error::{Result, VineError};
use crate::numeric::{brent_min, nelder_mead};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// A fitted bivariate copula with its log-likelihood and AIC.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeFit {
    pub spec: CopulaSpec,
    pub loglik: f64,
    pub aic: f64,
    pub n_params: usize,
}

impl EdgeFit {
    fn from_loglik(spec: CopulaSpec, loglik: f64) -> Self {
        let n_params = spec.n_params();
        EdgeFit {
            spec,
            loglik,
            aic: 2.0 * n_params as f64 - 2.0 * loglik,
            n_params,
        }
    }

    /// The zero-parameter independence fit (log-likelihood identically 0).
    pub fn independence() -> Self {
        EdgeFit::from_loglik(CopulaSpec::independence(), 0.0)
    }
}

/// Independence pre-test: accept independence when
/// `sqrt(9N(N-1) / (2(2N+5))) * |tau| < 2`. The threshold constant 2 is
/// used verbatim rather than the exact normal quantile.
pub fn independence_test(tau: f64, n: usize) -> bool {
    let nf = n as f64;
    let statistic = (9.0 * nf * (nf - 1.0) / (2.0 * (2.0 * nf + 5.0))).sqrt() * tau.abs();
    statistic < 2.0
}

/// Admissible box used by the optimizer, per family. Bounds are numerical
/// fitting ranges inside the mathematical domain.
fn param_box(family: BicopFamily) -> Vec<(f64, f64)> {
    match family {
        BicopFamily::Independence => Vec::new(),
        BicopFamily::Gaussian => vec![(-0.9999, 0.9999)],
        BicopFamily::StudentT => vec![(-0.9999, 0.9999), (2.05, 50.0)],
        BicopFamily::Clayton => vec![(1e-5, 28.0)],
        BicopFamily::Gumbel => vec![(1.0 + 1e-8, 50.0)],
        BicopFamily::Frank => vec![(-35.0, 35.0)],
        BicopFamily::Joe => vec![(1.0 + 1e-8, 30.0)],
        BicopFamily::Bb7 => vec![(1.0 + 1e-8, 7.0), (1e-4, 25.0)],
        BicopFamily::Bb8 => vec![(1.0 + 1e-8, 8.0), (1e-4, 1.0)],
        BicopFamily::Tawn => vec![(1.0 + 1e-8, 20.0), (1e-4, 1.0)],
    }
}

fn to_unconstrained(x: f64, lo: f64, hi: f64) -> f64 {
    let t = ((x - lo) / (hi - lo)).clamp(1e-12, 1.0 - 1e-12);
    (t / (1.0 - t)).ln()
}

fn from_unconstrained(s: f64, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) / (1.0 + (-s).exp())
}

fn negative_loglik(spec: &CopulaSpec, u: &[f64], v: &[f64]) -> f64 {
    let mut total = 0.0;
    for (&a, &b) in u.iter().zip(v) {
        total += spec.raw_log_density(a, b);
    }
    if total.is_finite() {
        -total
    } else {
        f64::INFINITY
    }
}

/// Starting value for one-parameter families from the empirical tau, where
/// the family's tau is invertible; the box midpoint otherwise.
fn one_param_start(family: BicopFamily, rotation: Rotation, tau_emp: f64) -> f64 {
    let base_tau = match rotation {
        Rotation::R0 | Rotation::R180 => tau_emp,
        Rotation::R90 | Rotation::R270 => -tau_emp,
    };
    let (lo, hi) = param_box(family)[0];
    let from_inversion = match family {
        // Frank and Gaussian act on the signed tau directly
        BicopFamily::Frank | BicopFamily::Gaussian => param_from_tau(family, tau_emp),
        _ => param_from_tau(family, base_tau.max(1e-3)),
    };
    match from_inversion {
        Ok(spec) => spec.params[0].clamp(lo, hi),
        Err(_) => match family {
            // Joe tau has no spec-level inversion; a Gumbel-like start is
            // close enough for a 1-D search
            BicopFamily::Joe => (1.0 / (1.0 - base_tau.clamp(0.05, 0.95))).clamp(lo, hi),
            _ => 0.5 * (lo + hi),
        },
    }
}

/// Maximum-likelihood fit of one family/rotation pair on pseudo-observation
/// columns `u`, `v`.
pub fn fit_bicop_mle(
    u: &[f64],
    v: &[f64],
    family: BicopFamily,
    rotation: Rotation,
) -> Result<EdgeFit> {
    if u.len() != v.len() {
        return Err(VineError::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    if u.len() < 30 {
        return Err(VineError::InputOutOfRange(format!(
            "MLE needs at least 30 observations, got {}",
            u.len()
        )));
    }
    if family == BicopFamily::Independence {
        return Ok(EdgeFit::independence());
    }

    let the_box = param_box(family);
    let make_spec = |params: Vec<f64>| CopulaSpec {
        family,
        rotation,
        params,
    };

    let fit = match family.n_params() {
        1 => {
            let (lo, hi) = the_box[0];
            let tau_emp = kendall_tau(u, v, TauMode::TauB)?;
            let start = one_param_start(family, rotation, tau_emp);
            let objective = |s: f64| {
                let spec = make_spec(vec![from_unconstrained(s, lo, hi)]);
                negative_loglik(&spec, u, v)
            };
            // bracket around the tau-matched start in transformed space
            let s0 = to_unconstrained(start, lo, hi);
            let (s_best, neg_ll) = brent_min(objective, s0 - 14.0, s0 + 14.0, 1e-9, 200);
            let spec = make_spec(vec![from_unconstrained(s_best, lo, hi)]);
            EdgeFit::from_loglik(spec, -neg_ll)
        }
        2 => {
            // coarse 8x8 grid for a starting point
            let (lo0, hi0) = the_box[0];
            let (lo1, hi1) = the_box[1];
            let grid = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * (i as f64 + 0.5) / 8.0;
            let mut best = (f64::INFINITY, vec![0.5 * (lo0 + hi0), 0.5 * (lo1 + hi1)]);
            for i in 0..8 {
                for j in 0..8 {
                    let params = vec![grid(lo0, hi0, i), grid(lo1, hi1, j)];
                    let nll = negative_loglik(&make_spec(params.clone()), u, v);
                    if nll < best.0 {
                        best = (nll, params);
                    }
                }
            }
            let start = vec![
                to_unconstrained(best.1[0], lo0, hi0),
                to_unconstrained(best.1[1], lo1, hi1),
            ];
            let objective = |s: &[f64]| {
                let params = vec![
                    from_unconstrained(s[0], lo0, hi0),
                    from_unconstrained(s[1], lo1, hi1),
                ];
                negative_loglik(&make_spec(params), u, v)
            };
            let (s_best, neg_ll, _) = nelder_mead(objective, &start, &[0.5, 0.5], 1e-10, 200);
            let spec = make_spec(vec![
                from_unconstrained(s_best[0], lo0, hi0),
                from_unconstrained(s_best[1], lo1, hi1),
            ]);
            EdgeFit::from_loglik(spec, -neg_ll)
        }
        _ => unreachable!("families have at most two parameters"),
    };

    if !fit.loglik.is_finite() {
        return Err(VineError::ConvergenceFailure(format!(
            "{} fit produced a non-finite log-likelihood",
            fit.spec.display_name()
        )));
    }
    Ok(fit)
}

/// Candidate (family, rotation) pairs for an edge with empirical tau
/// `tau_emp`: single-signed families are offered at rotations 0/180 for
/// positive tau and 90/270 for negative tau; sign-symmetric families are
/// always offered unrotated.
pub fn candidates_for_tau(families: &[BicopFamily], tau_emp: f64) -> Vec<(BicopFamily, Rotation)> {
    let mut out = Vec::new();
    for &family in families {
        match family {
            BicopFamily::Independence => {}
            _ if family.needs_rotation_for_negative_tau() => {
                if tau_emp >= 0.0 {
                    out.push((family, Rotation::R0));
                    out.push((family, Rotation::R180));
                } else {
                    out.push((family, Rotation::R90));
                    out.push((family, Rotation::R270));
                }
            }
            _ => out.push((family, Rotation::R0)),
        }
    }
    out
}

/// Fit every candidate and keep the smallest AIC; ties break toward fewer
/// parameters, then candidate-list order.
pub fn select_family_aic(
    u: &[f64],
    v: &[f64],
    candidates: &[(BicopFamily, Rotation)],
) -> Result<EdgeFit> {
    if candidates.is_empty() {
        return Err(VineError::AllCandidatesFailed);
    }
    let fits: Vec<Option<EdgeFit>> = candidates
        .par_iter()
        .map(|&(family, rotation)| fit_bicop_mle(u, v, family, rotation).ok())
        .collect();

    let mut best: Option<(usize, EdgeFit)> = None;
    for (idx, fit) in fits.into_iter().enumerate() {
        let Some(fit) = fit else { continue };
        let better = match &best {
            None => true,
            Some((best_idx, incumbent)) => {
                (fit.aic, fit.n_params, idx) < (incumbent.aic, incumbent.n_params, *best_idx)
            }
        };
        if better {
            best = Some((idx, fit));
        }
    }
    best.map(|(_, fit)| fit).ok_or(VineError::AllCandidatesFailed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn independence_statistic_threshold() {
        // sqrt(9*6000*5999 / (2*12005)) = 116.156...
        let n = 6000;
        assert!(independence_test(0.0172, n));
        assert!(!independence_test(0.35, n));
        assert!(independence_test(0.0, 77));
    }

    #[test]
    fn independence_statistic_value() {
        let n = 6000f64;
        let factor = (9.0 * n * (n - 1.0) / (2.0 * (2.0 * n + 5.0))).sqrt();
        assert_abs_diff_eq!(factor, 116.156, epsilon = 1e-3);
        assert!(factor * 0.0172 < 2.0);
        assert!(factor * 0.0173 > 2.0);
    }

    #[test]
    fn aic_identity_holds() {
        let fit = EdgeFit::from_loglik(CopulaSpec::independence(), 0.0);
        assert_abs_diff_eq!(fit.aic, 2.0 * fit.n_params as f64 - 2.0 * fit.loglik);
    }

    #[test]
    fn candidate_rotations_follow_tau_sign() {
        let fams = [BicopFamily::Clayton, BicopFamily::Frank];
        let pos = candidates_for_tau(&fams, 0.3);
        assert!(pos.contains(&(BicopFamily::Clayton, Rotation::R0)));
        assert!(pos.contains(&(BicopFamily::Clayton, Rotation::R180)));
        assert!(pos.contains(&(BicopFamily::Frank, Rotation::R0)));
        let neg = candidates_for_tau(&fams, -0.3);
        assert!(neg.contains(&(BicopFamily::Clayton, Rotation::R90)));
        assert!(neg.contains(&(BicopFamily::Clayton, Rotation::R270)));
        assert!(!neg.contains(&(BicopFamily::Clayton, Rotation::R0)));
    }

    #[test]
    fn single_candidate_is_returned() {
        let spec = CopulaSpec::new(BicopFamily::Clayton, Rotation::R0, vec![2.0]).unwrap();
        let data = spec.sample(200, 3).unwrap();
        let (u, v): (Vec<f64>, Vec<f64>) = data.into_iter().unzip();
        let fit = select_family_aic(&u, &v, &[(BicopFamily::Clayton, Rotation::R0)]).unwrap();
        assert_eq!(fit.spec.family, BicopFamily::Clayton);
    }
}
