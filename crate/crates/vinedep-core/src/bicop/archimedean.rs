//! Closed-form Archimedean families: Clayton, Gumbel, Frank, Joe.
//!
//! All functions assume inputs already clamped to the open unit square and a
//! parameter inside the family's admissible domain. Evaluations are carried
//! out in log space wherever the direct form can overflow near a corner.

pub mod clayton {
    /// log(u^-t + v^-t - 1), stable against overflow of the power terms.
    fn log_s(theta: f64, u: f64, v: f64) -> f64 {
        let a = -theta * u.ln();
        let b = -theta * v.ln();
        let m = a.max(b);
        m + ((a - m).exp() + (b - m).exp() - (-m).exp()).ln()
    }

    pub fn cdf(theta: f64, u: f64, v: f64) -> f64 {
        (-log_s(theta, u, v) / theta).exp()
    }

    pub fn log_density(theta: f64, u: f64, v: f64) -> f64 {
        (1.0 + theta).ln() - (1.0 + theta) * (u.ln() + v.ln())
            - (2.0 + 1.0 / theta) * log_s(theta, u, v)
    }

    /// dC/dv = v^-(t+1) * S^-(1/t + 1)
    pub fn h1(theta: f64, u: f64, v: f64) -> f64 {
        (-(theta + 1.0) * v.ln() - (1.0 / theta + 1.0) * log_s(theta, u, v)).exp()
    }

    /// Closed-form inverse of `h1` in its first argument.
    pub fn hinv1(theta: f64, p: f64, v: f64) -> Option<f64> {
        let b = (-theta / (theta + 1.0) * p.ln()).exp_m1();
        let a = (-theta * v.ln()).exp();
        let inner = a * b + 1.0;
        if !inner.is_finite() || inner <= 0.0 {
            return None;
        }
        let u = (-inner.ln() / theta).exp();
        u.is_finite().then_some(u)
    }
}

pub mod gumbel {
    /// log((-ln u)^t + (-ln v)^t)
    fn log_s(theta: f64, u: f64, v: f64) -> f64 {
        let lx = theta * (-u.ln()).ln();
        let ly = theta * (-v.ln()).ln();
        let m = lx.max(ly);
        m + ((lx - m).exp() + (ly - m).exp()).ln()
    }

    pub fn cdf(theta: f64, u: f64, v: f64) -> f64 {
        (-(log_s(theta, u, v) / theta).exp()).exp()
    }

    pub fn log_density(theta: f64, u: f64, v: f64) -> f64 {
        let x = -u.ln();
        let y = -v.ln();
        let ls = log_s(theta, u, v);
        let s_pow = (ls / theta).exp();
        -s_pow + x + y + (theta - 1.0) * (x.ln() + y.ln()) + (2.0 / theta - 2.0) * ls
            + (1.0 + (theta - 1.0) * (-ls / theta).exp()).ln()
    }

    pub fn h1(theta: f64, u: f64, v: f64) -> f64 {
        let y = -v.ln();
        let ls = log_s(theta, u, v);
        (-(ls / theta).exp() + (theta - 1.0) * y.ln() + (1.0 / theta - 1.0) * ls + y).exp()
    }
}

pub mod frank {
    pub fn cdf(theta: f64, u: f64, v: f64) -> f64 {
        let a = (-theta * u).exp_m1();
        let b = (-theta * v).exp_m1();
        let d = (-theta).exp_m1();
        -(a * b / d).ln_1p() / theta
    }

    pub fn log_density(theta: f64, u: f64, v: f64) -> f64 {
        let a = (-theta * u).exp_m1();
        let b = (-theta * v).exp_m1();
        let d = (-theta).exp_m1();
        // theta*(1 - e^-theta) = -theta*d > 0 for either sign of theta
        (-(theta * d)).ln() - theta * (u + v) - 2.0 * (d + a * b).abs().ln()
    }

    pub fn h1(theta: f64, u: f64, v: f64) -> f64 {
        let a = (-theta * u).exp_m1();
        let b = (-theta * v).exp_m1();
        let d = (-theta).exp_m1();
        (-theta * v).exp() * a / (d + a * b)
    }

    pub fn hinv1(theta: f64, p: f64, v: f64) -> Option<f64> {
        let b = (-theta * v).exp_m1();
        let d = (-theta).exp_m1();
        let denom = (-theta * v).exp() - p * b;
        let arg = p * d / denom;
        if !arg.is_finite() || arg <= -1.0 {
            return None;
        }
        let u = -arg.ln_1p() / theta;
        (u.is_finite() && u > 0.0 && u < 1.0).then_some(u)
    }
}

pub mod joe {
    /// S = x + y - x*y with x = (1-u)^t, y = (1-v)^t.
    fn s_parts(theta: f64, u: f64, v: f64) -> (f64, f64, f64) {
        let x = (theta * (1.0 - u).ln()).exp();
        let y = (theta * (1.0 - v).ln()).exp();
        (x, y, x + y - x * y)
    }

    pub fn cdf(theta: f64, u: f64, v: f64) -> f64 {
        let (_, _, s) = s_parts(theta, u, v);
        1.0 - (s.ln() / theta).exp()
    }

    pub fn log_density(theta: f64, u: f64, v: f64) -> f64 {
        let (_, _, s) = s_parts(theta, u, v);
        (1.0 / theta - 2.0) * s.ln()
            + (theta - 1.0) * ((1.0 - u).ln() + (1.0 - v).ln())
            + (theta - 1.0 + s).ln()
    }

    pub fn h1(theta: f64, u: f64, v: f64) -> f64 {
        let (_, _, s) = s_parts(theta, u, v);
        let one_minus_x = -(theta * (1.0 - u).ln()).exp_m1();
        ((1.0 / theta - 1.0) * s.ln() + one_minus_x.ln() + (theta - 1.0) * (1.0 - v).ln()).exp()
    }
}
