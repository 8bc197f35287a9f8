//! Elliptical families: Gaussian and Student t.

use statrs::distribution::{ContinuousCDF, Normal, StudentsT};
use statrs::function::gamma::ln_gamma;

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

pub(crate) fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / SQRT_2PI
}

pub(crate) fn norm_cdf(x: f64) -> f64 {
    Normal::standard().cdf(x)
}

/// Standard normal quantile, polished with one Newton step so round trips
/// through `norm_cdf` hold to machine precision.
pub(crate) fn norm_quantile(p: f64) -> f64 {
    let mut x = Normal::standard().inverse_cdf(p);
    for _ in 0..2 {
        let density = norm_pdf(x);
        if density < 1e-280 {
            break;
        }
        let err = norm_cdf(x) - p;
        x -= err / density;
    }
    x
}

pub(crate) fn t_pdf(nu: f64, x: f64) -> f64 {
    let ln = ln_gamma((nu + 1.0) / 2.0)
        - ln_gamma(nu / 2.0)
        - 0.5 * (nu * std::f64::consts::PI).ln()
        - (nu + 1.0) / 2.0 * (x * x / nu).ln_1p();
    ln.exp()
}

pub(crate) fn t_cdf(nu: f64, x: f64) -> f64 {
    StudentsT::new(0.0, 1.0, nu).expect("valid dof").cdf(x)
}

pub(crate) fn t_quantile(nu: f64, p: f64) -> f64 {
    let dist = StudentsT::new(0.0, 1.0, nu).expect("valid dof");
    let mut x = dist.inverse_cdf(p);
    for _ in 0..2 {
        let density = t_pdf(nu, x);
        if density < 1e-280 {
            break;
        }
        let err = dist.cdf(x) - p;
        x -= err / density;
    }
    x
}

// Gauss-Legendre rules used by the bivariate normal integral, from the
// Drezner-Wesolowsky / Genz method (weight, node) on [-1, 1].
const BVN_QUAD_6: [(f64, f64); 3] = [
    (0.171_324_492_379_170_5, -0.932_469_514_203_152_2),
    (0.360_761_573_048_138_4, -0.661_209_386_466_264_7),
    (0.467_913_934_572_690_4, -0.238_619_186_083_197_0),
];
const BVN_QUAD_12: [(f64, f64); 6] = [
    (0.047_175_336_386_511_77, -0.981_560_634_246_719_1),
    (0.106_939_325_995_318_3, -0.904_117_256_370_475_0),
    (0.160_078_328_543_346_4, -0.769_902_674_194_305_0),
    (0.203_167_426_723_065_9, -0.587_317_954_286_617_1),
    (0.233_492_536_538_354_7, -0.367_831_498_998_180_2),
    (0.249_147_045_813_402_9, -0.125_233_408_511_469_2),
];
const BVN_QUAD_20: [(f64, f64); 10] = [
    (0.017_614_007_139_152_12, -0.993_128_599_185_094_9),
    (0.040_601_429_800_386_94, -0.963_971_927_277_913_8),
    (0.062_672_048_334_109_06, -0.912_234_428_251_325_9),
    (0.083_276_741_576_704_75, -0.839_116_971_822_218_8),
    (0.101_930_119_817_240_4, -0.746_331_906_460_150_8),
    (0.118_194_531_961_518_4, -0.636_053_680_726_515_0),
    (0.131_688_638_449_176_6, -0.510_867_001_950_827_1),
    (0.142_096_109_318_382_1, -0.373_706_088_715_419_6),
    (0.149_172_986_472_603_7, -0.227_785_851_141_645_1),
    (0.152_753_387_130_725_9, -0.076_526_521_133_497_33),
];

/// P(X > dh, Y > dk) for standard bivariate normal variables with
/// correlation `r`; Drezner-Wesolowsky with the Genz high-correlation
/// refinement. `P(X < x, Y < y) = bvnd(-x, -y, r)`.
fn bvnd(dh: f64, dk: f64, r: f64) -> f64 {
    let quad: &[(f64, f64)] = if r.abs() < 0.3 {
        &BVN_QUAD_6
    } else if r.abs() < 0.75 {
        &BVN_QUAD_12
    } else {
        &BVN_QUAD_20
    };

    let h = dh;
    let mut k = dk;
    let mut bvn = 0.0;

    if r.abs() <= 0.925 {
        let hk = h * k;
        if r.abs() > 0.0 {
            let hs = (h * h + k * k) / 2.0;
            let asr = 0.5 * r.asin();
            for &(w, x) in quad {
                for is in [-1.0, 1.0] {
                    let sn = (asr * (is * x + 1.0)).sin();
                    bvn += w * ((sn * hk - hs) / (1.0 - sn * sn)).exp();
                }
            }
            bvn *= asr / (2.0 * std::f64::consts::PI);
        }
        bvn + norm_cdf(-h) * norm_cdf(-k)
    } else {
        if r < 0.0 {
            k = -k;
        }
        if r.abs() < 1.0 {
            let hk = h * k;
            let a_s = (1.0 - r) * (1.0 + r);
            let mut a = a_s.sqrt();
            let b_s = (h - k) * (h - k);
            let c = (4.0 - hk) / 8.0;
            let d = (12.0 - hk) / 16.0;
            let asr = -0.5 * (b_s / a_s + hk);
            if asr > -100.0 {
                bvn = a
                    * asr.exp()
                    * (1.0 - c * (b_s - a_s) * (1.0 - d * b_s / 5.0) / 3.0
                        + c * d * a_s * a_s / 5.0);
            }
            if -hk < 100.0 {
                let b = b_s.sqrt();
                bvn -= (-0.5 * hk).exp()
                    * SQRT_2PI
                    * norm_cdf(-b / a)
                    * b
                    * (1.0 - c * b_s * (1.0 - d * b_s / 5.0) / 3.0);
            }
            a /= 2.0;
            for &(w, x) in quad {
                for is in [-1.0, 1.0] {
                    let xs = (a * (is * x + 1.0)) * (a * (is * x + 1.0));
                    let rs = (1.0 - xs).sqrt();
                    let asr = -0.5 * (b_s / xs + hk);
                    if asr > -100.0 {
                        bvn += a
                            * w
                            * asr.exp()
                            * ((-hk * (1.0 - rs) / (2.0 * (1.0 + rs))).exp() / rs
                                - (1.0 + c * xs * (1.0 + d * xs)));
                    }
                }
            }
            bvn = -bvn / (2.0 * std::f64::consts::PI);
        }
        if r > 0.0 {
            bvn + norm_cdf(-h.max(k))
        } else {
            let mut out = -bvn;
            if k > h {
                out += norm_cdf(k) - norm_cdf(h);
            }
            out
        }
    }
}

pub mod gaussian {
    use super::*;

    pub fn cdf(rho: f64, u: f64, v: f64) -> f64 {
        let x = norm_quantile(u);
        let y = norm_quantile(v);
        bvnd(-x, -y, rho).clamp(0.0, 1.0)
    }

    pub fn log_density(rho: f64, u: f64, v: f64) -> f64 {
        let x = norm_quantile(u);
        let y = norm_quantile(v);
        let r2 = 1.0 - rho * rho;
        -0.5 * r2.ln() - (rho * rho * (x * x + y * y) - 2.0 * rho * x * y) / (2.0 * r2)
    }

    pub fn h1(rho: f64, u: f64, v: f64) -> f64 {
        let x = norm_quantile(u);
        let y = norm_quantile(v);
        norm_cdf((x - rho * y) / (1.0 - rho * rho).sqrt())
    }

    pub fn hinv1(rho: f64, p: f64, v: f64) -> Option<f64> {
        let y = norm_quantile(v);
        let x = norm_quantile(p) * (1.0 - rho * rho).sqrt() + rho * y;
        let u = norm_cdf(x);
        u.is_finite().then_some(u)
    }
}

pub mod student_t {
    use super::*;
    use crate::numeric::{gauss_legendre, integrate};

    pub fn log_density(rho: f64, nu: f64, u: f64, v: f64) -> f64 {
        let x = t_quantile(nu, u);
        let y = t_quantile(nu, v);
        let r2 = 1.0 - rho * rho;
        let q = (x * x - 2.0 * rho * x * y + y * y) / r2;
        ln_gamma((nu + 2.0) / 2.0) + ln_gamma(nu / 2.0) - 2.0 * ln_gamma((nu + 1.0) / 2.0)
            - 0.5 * r2.ln()
            - (nu + 2.0) / 2.0 * (q / nu).ln_1p()
            + (nu + 1.0) / 2.0 * ((x * x / nu).ln_1p() + (y * y / nu).ln_1p())
    }

    pub fn h1(rho: f64, nu: f64, u: f64, v: f64) -> f64 {
        let x = t_quantile(nu, u);
        let y = t_quantile(nu, v);
        let scale = ((nu + y * y) * (1.0 - rho * rho) / (nu + 1.0)).sqrt();
        t_cdf(nu + 1.0, (x - rho * y) / scale)
    }

    pub fn hinv1(rho: f64, nu: f64, p: f64, v: f64) -> Option<f64> {
        let y = t_quantile(nu, v);
        let scale = ((nu + y * y) * (1.0 - rho * rho) / (nu + 1.0)).sqrt();
        let x = t_quantile(nu + 1.0, p) * scale + rho * y;
        let u = t_cdf(nu, x);
        u.is_finite().then_some(u)
    }

    /// C(u, v) = Int_0^v h1(u | t) dt, integrated on panels refined
    /// geometrically toward 0 where the quantile transform is steep.
    pub fn cdf(rho: f64, nu: f64, u: f64, v: f64) -> f64 {
        let rule = gauss_legendre(16);
        let mut total = 0.0;
        let mut hi = v;
        for _ in 0..28 {
            let lo = hi / 2.0;
            total += integrate(|t| h1(rho, nu, u, t), lo, hi, &rule);
            hi = lo;
        }
        // remaining [0, hi] panel: integrand is bounded by 1
        total += integrate(|t| h1(rho, nu, u, t), 0.0, hi, &rule);
        total.clamp(0.0, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn norm_quantile_round_trips() {
        for &p in &[1e-10, 1e-6, 0.01, 0.3, 0.5, 0.77, 0.999, 1.0 - 1e-9] {
            assert_abs_diff_eq!(norm_cdf(norm_quantile(p)), p, epsilon = 1e-14);
        }
    }

    #[test]
    fn t_quantile_round_trips() {
        for &nu in &[2.3, 5.0, 16.5] {
            for &p in &[1e-8, 0.05, 0.5, 0.9, 1.0 - 1e-8] {
                assert_abs_diff_eq!(t_cdf(nu, t_quantile(nu, p)), p, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn bvnd_matches_independence_and_symmetry() {
        // r = 0: product of the marginal tails
        assert_abs_diff_eq!(
            bvnd(0.5, -0.3, 0.0),
            norm_cdf(-0.5) * norm_cdf(0.3),
            epsilon = 1e-14
        );
        for &r in &[-0.95, -0.5, 0.2, 0.8, 0.99] {
            assert_abs_diff_eq!(bvnd(0.7, -1.1, r), bvnd(-1.1, 0.7, r), epsilon = 1e-13);
        }
    }

    #[test]
    fn bvnd_matches_quadrature_of_h() {
        // Independent check: C(u,v) = Int_0^v Phi((x - r t')/s) dPhi-path,
        // evaluated by direct 1-D quadrature in the v coordinate.
        let rule = crate::numeric::gauss_legendre(64);
        for &rho in &[-0.85, -0.3, 0.06, 0.5, 0.93] {
            for &(u, v) in &[(0.3, 0.7), (0.05, 0.9), (0.5, 0.5), (0.99, 0.2)] {
                let direct = gaussian::cdf(rho, u, v);
                let quad =
                    crate::numeric::integrate_composite(|t| gaussian::h1(rho, u, t), 1e-14, v, 8, &rule);
                assert_abs_diff_eq!(direct, quad, epsilon = 5e-8);
            }
        }
    }

    #[test]
    fn student_cdf_matches_gaussian_at_large_nu() {
        // nu -> infinity recovers the Gaussian copula
        let c_t = student_t::cdf(0.4, 4000.0, 0.3, 0.6);
        let c_g = gaussian::cdf(0.4, 0.3, 0.6);
        assert_abs_diff_eq!(c_t, c_g, epsilon = 5e-4);
    }

    #[test]
    fn student_cdf_boundary_values() {
        assert_abs_diff_eq!(student_t::cdf(0.5, 4.0, 0.42, 1.0 - 1e-12), 0.42, epsilon = 1e-9);
        assert!(student_t::cdf(0.5, 4.0, 0.42, 1e-12) < 1e-9);
    }
}
