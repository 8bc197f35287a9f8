//! Two-parameter Archimedean families BB7 (Joe–Clayton) and BB8
//! (Joe–Frank).
//!
//! BB7 generator: phi(t) = (1 - (1-t)^theta)^-delta - 1, theta >= 1,
//! delta > 0. BB8 generator: phi(t) = -ln((1 - (1 - delta t)^theta) / eta)
//! with eta = 1 - (1 - delta)^theta, theta >= 1, delta in (0, 1].

pub mod bb7 {
    struct Parts {
        log_a: f64,
        log_b: f64,
        log_s: f64,
        w: f64,
        one_minus_w: f64,
    }

    fn parts(theta: f64, delta: f64, u: f64, v: f64) -> Parts {
        // a = 1 - (1-u)^theta, stable at both ends of the interval
        let log_a = (-(theta * (1.0 - u).ln()).exp_m1()).ln();
        let log_b = (-(theta * (1.0 - v).ln()).exp_m1()).ln();
        // S = a^-delta + b^-delta - 1 > 1
        let pa = -delta * log_a;
        let pb = -delta * log_b;
        let m = pa.max(pb);
        let log_s = m + ((pa - m).exp() + (pb - m).exp() - (-m).exp()).ln();
        let w = (-log_s / delta).exp();
        let one_minus_w = -(-log_s / delta).exp_m1();
        Parts {
            log_a,
            log_b,
            log_s,
            w,
            one_minus_w,
        }
    }

    pub fn cdf(theta: f64, delta: f64, u: f64, v: f64) -> f64 {
        let p = parts(theta, delta, u, v);
        -(p.one_minus_w.ln() / theta).exp_m1()
    }

    pub fn h1(theta: f64, delta: f64, u: f64, v: f64) -> f64 {
        let p = parts(theta, delta, u, v);
        ((1.0 / theta - 1.0) * p.one_minus_w.ln()
            + (-1.0 / delta - 1.0) * p.log_s
            + (-delta - 1.0) * p.log_b
            + (theta - 1.0) * (1.0 - v).ln())
        .exp()
    }

    pub fn log_density(theta: f64, delta: f64, u: f64, v: f64) -> f64 {
        let p = parts(theta, delta, u, v);
        let bracket = (1.0 + delta) * p.one_minus_w + (1.0 - 1.0 / theta) * p.w;
        theta.ln()
            + (-delta - 1.0) * (p.log_a + p.log_b)
            + (theta - 1.0) * ((1.0 - u).ln() + (1.0 - v).ln())
            + (1.0 / theta - 2.0) * p.one_minus_w.ln()
            + (-1.0 / delta - 2.0) * p.log_s
            + bracket.ln()
    }
}

pub mod bb8 {
    fn eta(theta: f64, delta: f64) -> f64 {
        -(theta * (1.0 - delta).ln()).exp_m1()
    }

    /// x = 1 - (1 - delta*u)^theta, in (0, eta]
    fn x_of(theta: f64, delta: f64, u: f64) -> f64 {
        -(theta * (1.0 - delta * u).ln()).exp_m1()
    }

    pub fn cdf(theta: f64, delta: f64, u: f64, v: f64) -> f64 {
        let e = eta(theta, delta);
        let x = x_of(theta, delta, u);
        let y = x_of(theta, delta, v);
        let log_s = (-x * y / e).ln_1p();
        -(log_s / theta).exp_m1() / delta
    }

    pub fn h1(theta: f64, delta: f64, u: f64, v: f64) -> f64 {
        let e = eta(theta, delta);
        let x = x_of(theta, delta, u);
        let y = x_of(theta, delta, v);
        let log_s = (-x * y / e).ln_1p();
        ((1.0 / theta - 1.0) * log_s + x.ln() - e.ln() + (theta - 1.0) * (1.0 - delta * v).ln())
            .exp()
    }

    pub fn log_density(theta: f64, delta: f64, u: f64, v: f64) -> f64 {
        let e = eta(theta, delta);
        let x = x_of(theta, delta, u);
        let y = x_of(theta, delta, v);
        let log_s = (-x * y / e).ln_1p();
        theta.ln() + delta.ln() - e.ln()
            + (theta - 1.0) * ((1.0 - delta * u).ln() + (1.0 - delta * v).ln())
            + (1.0 / theta - 2.0) * log_s
            + (1.0 - x * y / (theta * e)).ln()
    }
}
