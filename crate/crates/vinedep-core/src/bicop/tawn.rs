//! Tawn type-1 copula: the asymmetric logistic extreme-value copula with
//! one asymmetry weight on the first coordinate.
//!
//! Stable tail dependence function `l(x, y) = (1-psi)*x +
//! ((psi*x)^theta + y^theta)^(1/theta)` with `x = -ln u`, `y = -ln v`;
//! `C(u, v) = exp(-l(x, y))`. Pickands function `A(w) = (1-psi)(1-w) +
//! ((psi(1-w))^theta + w^theta)^(1/theta)`. theta = 1 or psi = 0 degenerate
//! to independence; psi = 1 recovers Gumbel.

struct Parts {
    x: f64,
    y: f64,
    ell: f64,
    ell_x: f64,
    ell_y: f64,
    ell_xy: f64,
}

fn parts(theta: f64, psi: f64, u: f64, v: f64) -> Parts {
    let x = -u.ln();
    let y = -v.ln();
    // log T with T = (psi*x)^theta + y^theta; psi = 0 drops the first term
    let la = if psi > 0.0 {
        theta * (psi * x).ln()
    } else {
        f64::NEG_INFINITY
    };
    let lb = theta * y.ln();
    let m = la.max(lb);
    let log_t = m + ((la - m).exp() + (lb - m).exp()).ln();
    let t_pow = (log_t / theta).exp();
    let ell = (1.0 - psi) * x + t_pow;
    let ell_y = ((theta - 1.0) * y.ln() + (1.0 / theta - 1.0) * log_t).exp();
    let (ell_x, ell_xy) = if psi > 0.0 {
        let lpsi = theta * psi.ln();
        let ex = (1.0 - psi) + (lpsi + (theta - 1.0) * x.ln() + (1.0 / theta - 1.0) * log_t).exp();
        let exy = (1.0 - theta)
            * (lpsi + (theta - 1.0) * (x.ln() + y.ln()) + (1.0 / theta - 2.0) * log_t).exp();
        (ex, exy)
    } else {
        (1.0 - psi, 0.0)
    };
    Parts {
        x,
        y,
        ell,
        ell_x,
        ell_y,
        ell_xy,
    }
}

pub fn cdf(theta: f64, psi: f64, u: f64, v: f64) -> f64 {
    (-parts(theta, psi, u, v).ell).exp()
}

/// dC/dv = C * l_y / v
pub fn h1(theta: f64, psi: f64, u: f64, v: f64) -> f64 {
    let p = parts(theta, psi, u, v);
    (-p.ell + p.y).exp() * p.ell_y
}

/// dC/du = C * l_x / u
pub fn h2(theta: f64, psi: f64, u: f64, v: f64) -> f64 {
    let p = parts(theta, psi, u, v);
    (-p.ell + p.x).exp() * p.ell_x
}

pub fn log_density(theta: f64, psi: f64, u: f64, v: f64) -> f64 {
    let p = parts(theta, psi, u, v);
    // l_xy <= 0 for theta >= 1, so the bracket is positive
    -p.ell + p.x + p.y + (p.ell_x * p.ell_y - p.ell_xy).ln()
}

/// Pickands dependence function and its second derivative, used by the
/// extreme-value representation of Kendall's tau.
pub fn pickands(theta: f64, psi: f64, w: f64) -> f64 {
    let b = (psi * (1.0 - w)).powf(theta) + w.powf(theta);
    (1.0 - psi) * (1.0 - w) + b.powf(1.0 / theta)
}

pub fn pickands_second_derivative(theta: f64, psi: f64, w: f64) -> f64 {
    let pt = psi.powf(theta);
    let b = pt * (1.0 - w).powf(theta) + w.powf(theta);
    let bp = theta * (w.powf(theta - 1.0) - pt * (1.0 - w).powf(theta - 1.0));
    let bpp = theta * (theta - 1.0) * (w.powf(theta - 2.0) + pt * (1.0 - w).powf(theta - 2.0));
    let it = 1.0 / theta;
    it * (it - 1.0) * b.powf(it - 2.0) * bp * bp + it * b.powf(it - 1.0) * bpp
}
