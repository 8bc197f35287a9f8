//! Shared numerical machinery: Gauss–Legendre quadrature, the first Debye
//! function, and small derivative-free root finding / optimization routines.

use crate::error::{Result, VineError};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, computed by Newton
/// iteration on the Legendre recurrence. Accurate to machine precision for
/// the orders used here (n <= 512).
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut nodes = vec![(0.0, 0.0); n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let pk = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = pk;
            }
            // P_n'(x) from the derivative recurrence; x is never +-1 here.
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = (-x, w);
        nodes[n - 1 - i] = (x, w);
    }
    nodes
}

/// Integrate `f` over `[a, b]` with a supplied Gauss–Legendre rule.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rule: &[(f64, f64)]) -> f64 {
    let mid = 0.5 * (a + b);
    let len = 0.5 * (b - a);
    let mut sum = 0.0;
    for &(x, w) in rule {
        sum += w * f(mid + len * x);
    }
    sum * len
}

/// Composite Gauss–Legendre integration over `[a, b]` split into equal panels.
pub fn integrate_composite<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    panels: usize,
    rule: &[(f64, f64)],
) -> f64 {
    let width = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let lo = a + k as f64 * width;
            integrate(&mut f, lo, lo + width, rule)
        })
        .sum()
}

/// Integrate `f` over `[0, 1]` with panels refined geometrically toward both
/// endpoints, for integrands whose derivatives blow up at 0 or 1.
pub fn integrate_graded_unit<F: FnMut(f64) -> f64>(
    mut f: F,
    levels: u32,
    rule: &[(f64, f64)],
) -> f64 {
    let mut breaks = Vec::with_capacity(2 * levels as usize + 2);
    breaks.push(0.0);
    for k in (1..=levels).rev() {
        breaks.push(0.5 * 0.5f64.powi(k as i32));
    }
    breaks.push(0.5);
    for k in 1..=levels {
        breaks.push(1.0 - 0.5 * 0.5f64.powi(k as i32));
    }
    breaks.push(1.0);
    breaks
        .windows(2)
        .map(|w| integrate(&mut f, w[0], w[1], rule))
        .sum()
}

/// First Debye function `D1(x) = (1/x) * Int_0^x t/(e^t - 1) dt`, extended to
/// negative arguments via `D1(-x) = D1(x) + x/2`.
pub fn debye1(x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    if x < 0.0 {
        return debye1(-x) - x / 2.0;
    }
    let rule = gauss_legendre(48);
    let integrand = |t: f64| {
        if t < 1e-8 {
            1.0 - t / 2.0
        } else {
            t / t.exp_m1()
        }
    };
    // Panelled so large arguments keep full accuracy.
    let panels = 1 + (x / 8.0) as usize;
    integrate_composite(integrand, 0.0, x, panels, &rule) / x
}

/// Brent's root finder on a bracketing interval `[a, b]`.
pub fn brent_root<F: FnMut(f64) -> f64>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    tol: f64,
    max_iter: usize,
) -> Result<f64> {
    let mut fa = f(a);
    let mut fb = f(b);
    if !fa.is_finite() || !fb.is_finite() {
        return Err(VineError::ConvergenceFailure(
            "non-finite function value at bracket endpoint".into(),
        ));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa * fb > 0.0 {
        return Err(VineError::ConvergenceFailure(
            "root is not bracketed".into(),
        ));
    }
    let (mut c, mut fc) = (a, fa);
    let (mut d, mut e) = (b - a, b - a);
    for _ in 0..max_iter {
        if fb.abs() > fc.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic interpolation / secant
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 {
            d
        } else {
            tol1.copysign(xm)
        };
        fb = f(b);
        if !fb.is_finite() {
            return Err(VineError::ConvergenceFailure(
                "non-finite function value during root finding".into(),
            ));
        }
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    Ok(b)
}

/// Brent's derivative-free minimizer on `[a, b]`. Returns `(xmin, fmin)`.
pub fn brent_min<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_iter: usize,
) -> (f64, f64) {
    const GOLD: f64 = 0.381_966_011_250_105;
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    let mut x = lo + GOLD * (hi - lo);
    let (mut w, mut v) = (x, x);
    let mut fx = f(x);
    let (mut fw, mut fv) = (fx, fx);
    let (mut d, mut e) = (0.0f64, 0.0f64);
    for _ in 0..max_iter {
        let xm = 0.5 * (lo + hi);
        let tol1 = tol * x.abs() + 1e-12;
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (hi - lo) {
            break;
        }
        let mut use_golden = true;
        if e.abs() > tol1 {
            // parabolic fit through x, v, w
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let etemp = e;
            e = d;
            if p.abs() < (0.5 * q * etemp).abs() && p > q * (lo - x) && p < q * (hi - x) {
                d = p / q;
                let u = x + d;
                if u - lo < tol2 || hi - u < tol2 {
                    d = tol1.copysign(xm - x);
                }
                use_golden = false;
            }
        }
        if use_golden {
            e = if x >= xm { lo - x } else { hi - x };
            d = GOLD * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else {
            x + tol1.copysign(d)
        };
        let fu = f(u);
        if fu <= fx {
            if u >= x {
                lo = x;
            } else {
                hi = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                lo = u;
            } else {
                hi = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    (x, fx)
}

/// Classic Nelder–Mead simplex minimization. Returns `(xmin, fmin, iters)`.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    step: &[f64],
    ftol: f64,
    max_iter: usize,
) -> (Vec<f64>, f64, usize) {
    let dim = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += step[i];
        simplex.push(v);
    }
    let mut fvals: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

    let mut iters = 0;
    while iters < max_iter {
        iters += 1;
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&i, &j| fvals[i].partial_cmp(&fvals[j]).unwrap_or(std::cmp::Ordering::Equal));
        let best = order[0];
        let worst = order[dim];
        let second_worst = order[dim - 1];

        if (fvals[worst] - fvals[best]).abs() <= ftol * (1.0 + fvals[best].abs()) {
            break;
        }

        // centroid of all but the worst vertex
        let mut centroid = vec![0.0; dim];
        for (k, v) in simplex.iter().enumerate() {
            if k != worst {
                for (c, x) in centroid.iter_mut().zip(v) {
                    *c += x / dim as f64;
                }
            }
        }
        let lerp = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = lerp(1.0);
        let fr = f(&reflected);
        if fr < fvals[best] {
            let expanded = lerp(2.0);
            let fe = f(&expanded);
            if fe < fr {
                simplex[worst] = expanded;
                fvals[worst] = fe;
            } else {
                simplex[worst] = reflected;
                fvals[worst] = fr;
            }
        } else if fr < fvals[second_worst] {
            simplex[worst] = reflected;
            fvals[worst] = fr;
        } else {
            let contracted = lerp(-0.5);
            let fc = f(&contracted);
            if fc < fvals[worst] {
                simplex[worst] = contracted;
                fvals[worst] = fc;
            } else {
                // shrink toward the best vertex
                let best_point = simplex[best].clone();
                for (k, v) in simplex.iter_mut().enumerate() {
                    if k != best {
                        for (x, b) in v.iter_mut().zip(&best_point) {
                            *x = b + 0.5 * (*x - b);
                        }
                    }
                }
                for (k, v) in simplex.iter().enumerate() {
                    if k != best {
                        fvals[k] = f(v);
                    }
                }
            }
        }
    }

    let (argmin, _) = fvals
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(std::cmp::Ordering::Equal))
        .unwrap();
    (simplex[argmin].clone(), fvals[argmin], iters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let rule = gauss_legendre(8);
        // degree 15 is exact for an 8-point rule
        let val = integrate(|x| x.powi(14), -1.0, 1.0, &rule);
        assert_abs_diff_eq!(val, 2.0 / 15.0, epsilon = 1e-13);
        assert_abs_diff_eq!(rule.iter().map(|&(_, w)| w).sum::<f64>(), 2.0, epsilon = 1e-13);
    }

    #[test]
    fn gauss_legendre_handles_small_orders() {
        for n in 1..=4 {
            let rule = gauss_legendre(n);
            let val = integrate(|x| x.exp(), 0.0, 1.0, &rule);
            let exact = 1.0f64.exp() - 1.0;
            assert!((val - exact).abs() < 1e-2, "n={n} val={val}");
        }
    }

    #[test]
    fn debye_matches_reference_values() {
        // Reference values from the series expansion of D1.
        assert_abs_diff_eq!(debye1(1.0), 0.777504634112248, epsilon = 1e-12);
        assert_abs_diff_eq!(debye1(2.0), 0.606947284609810, epsilon = 1e-12);
        assert_abs_diff_eq!(debye1(-2.0), 0.606947284609810 + 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(debye1(0.0), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn brent_root_finds_cosine_zero() {
        let root = brent_root(|x: f64| x.cos(), 1.0, 2.0, 1e-14, 100).unwrap();
        assert_abs_diff_eq!(root, std::f64::consts::FRAC_PI_2, epsilon = 1e-10);
    }

    #[test]
    fn brent_min_finds_quartic_minimum() {
        let (x, fx) = brent_min(|x: f64| (x - 0.3).powi(4) + 1.0, -2.0, 2.0, 1e-12, 200);
        assert_abs_diff_eq!(x, 0.3, epsilon = 1e-3);
        assert_abs_diff_eq!(fx, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn nelder_mead_minimizes_rosenbrock() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let (x, fx, _) = nelder_mead(rosen, &[-1.2, 1.0], &[0.1, 0.1], 1e-14, 4000);
        assert!(fx < 1e-8, "fx={fx}");
        assert_abs_diff_eq!(x[0], 1.0, epsilon = 1e-3);
        assert_abs_diff_eq!(x[1], 1.0, epsilon = 1e-3);
    }

    #[test]
    fn graded_integration_handles_endpoint_steepness() {
        let rule = gauss_legendre(16);
        // Int_0^1 -ln(t) dt = 1, steep at 0.
        let val = integrate_graded_unit(|t| -t.ln(), 40, &rule);
        assert_abs_diff_eq!(val, 1.0, epsilon = 1e-10);
    }
}
