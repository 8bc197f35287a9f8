//! Empirical marginal distributions and the probability integral transform.
//!
//! Raw metric columns are turned into pseudo-observations ("copula data")
//! by applying each column's empirical CDF to itself, using the `N + 1`
//! denominator so the output stays strictly inside the unit interval.
//! A Kolmogorov–Smirnov test against the uniform reference verifies the
//! result.
//!
//! Note on the uniformity check: the KS test is applied to the PIT of the
//! same sample that built the ECDF, which biases the p-value upward (the
//! transformed sample is nearly a perfect uniform grid by construction).
//! The procedure is replicated as commonly reported regardless.

use crate::error::{Result, VineError};

/// How tied observations are ranked before dividing by `N + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TiePolicy {
    /// Tied observations share the average of their ranks, which keeps the
    /// transform symmetric and strictly inside (0, 1).
    #[default]
    AverageRank,
}

/// Empirical CDF of a single column, `F(x) = (1/(N+1)) * #{X_i <= x}` with
/// average ranks assigned to ties.
#[derive(Debug, Clone)]
pub struct EmpiricalCdf {
    sorted_values: Vec<f64>,
    n: usize,
    tie_policy: TiePolicy,
}

impl EmpiricalCdf {
    /// Fit the empirical CDF to a sample.
    pub fn fit(samples: &[f64]) -> Result<Self> {
        if samples.len() < 2 {
            return Err(VineError::InputOutOfRange(format!(
                "need at least 2 samples, got {}",
                samples.len()
            )));
        }
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(VineError::InputOutOfRange(
                "samples must be finite".into(),
            ));
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if sorted[0] == sorted[sorted.len() - 1] {
            return Err(VineError::DegenerateColumn {
                name: String::new(),
            });
        }
        Ok(Self {
            n: sorted.len(),
            sorted_values: sorted,
            tie_policy: TiePolicy::AverageRank,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tie_policy(&self) -> TiePolicy {
        self.tie_policy
    }

    /// Evaluate the fitted CDF at `x`. At a tied sample value the whole tie
    /// group receives its average rank, so evaluation at data points is in
    /// `[1/(n+1), n/(n+1)]`; between/below data points the plain count is
    /// used.
    pub fn evaluate(&self, x: f64) -> f64 {
        let below_or_equal = self.sorted_values.partition_point(|&v| v <= x);
        let strictly_below = self.sorted_values.partition_point(|&v| v < x);
        let ties = below_or_equal - strictly_below;
        let denom = (self.n + 1) as f64;
        match self.tie_policy {
            TiePolicy::AverageRank => {
                if ties > 0 {
                    (below_or_equal as f64 - (ties as f64 - 1.0) / 2.0) / denom
                } else {
                    below_or_equal as f64 / denom
                }
            }
        }
    }
}

/// Copula data: an `N x d` matrix with every entry strictly in (0, 1),
/// stored column-major.
#[derive(Debug, Clone)]
pub struct PseudoObservations {
    columns: Vec<Vec<f64>>,
    names: Vec<String>,
}

impl PseudoObservations {
    /// Wrap pre-transformed columns, validating the type invariants.
    pub fn new(columns: Vec<Vec<f64>>, names: Vec<String>) -> Result<Self> {
        if columns.len() < 2 {
            return Err(VineError::InputOutOfRange(format!(
                "need at least 2 columns, got {}",
                columns.len()
            )));
        }
        if names.len() != columns.len() {
            return Err(VineError::LengthMismatch {
                left: names.len(),
                right: columns.len(),
            });
        }
        let n = columns[0].len();
        if n < 2 {
            return Err(VineError::InputOutOfRange(format!(
                "need at least 2 rows, got {n}"
            )));
        }
        for (col, name) in columns.iter().zip(&names) {
            if col.len() != n {
                return Err(VineError::LengthMismatch {
                    left: col.len(),
                    right: n,
                });
            }
            if col.iter().any(|&u| !(u > 0.0 && u < 1.0)) {
                return Err(VineError::InputOutOfRange(format!(
                    "column {name:?} has entries outside (0, 1)"
                )));
            }
        }
        Ok(Self { columns, names })
    }

    pub fn n_rows(&self) -> usize {
        self.columns[0].len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Restrict to a subset of columns, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let columns = indices.iter().map(|&j| self.columns[j].clone()).collect();
        let names = indices.iter().map(|&j| self.names[j].clone()).collect();
        Self::new(columns, names)
    }
}

/// Apply the probability integral transform column by column.
///
/// Each output column is the column's own empirical CDF applied to itself;
/// the result is rank-based, hence invariant under strictly increasing
/// transforms of the input.
pub fn pit_transform(columns: &[Vec<f64>], names: &[String]) -> Result<PseudoObservations> {
    if columns.len() != names.len() {
        return Err(VineError::LengthMismatch {
            left: columns.len(),
            right: names.len(),
        });
    }
    let mut out = Vec::with_capacity(columns.len());
    for (col, name) in columns.iter().zip(names) {
        let cdf = EmpiricalCdf::fit(col).map_err(|e| match e {
            VineError::DegenerateColumn { .. } => VineError::DegenerateColumn {
                name: name.clone(),
            },
            other => other,
        })?;
        out.push(col.iter().map(|&x| cdf.evaluate(x)).collect());
    }
    PseudoObservations::new(out, names.to_vec())
}

/// Asymptotic Kolmogorov–Smirnov p-value of `u` against the uniform
/// distribution on (0, 1).
///
/// The statistic is `D = sup |F_emp(t) - t|`; the p-value is the Kolmogorov
/// survival function at `sqrt(n) * D`, evaluated by whichever of its two
/// series representations converges fast at that argument (truncation error
/// below 1e-10 in both regimes).
pub fn ks_uniform_pvalue(u: &[f64]) -> Result<f64> {
    if u.len() < 10 {
        return Err(VineError::InputOutOfRange(format!(
            "KS test needs at least 10 points, got {}",
            u.len()
        )));
    }
    if u.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
        return Err(VineError::InputOutOfRange(
            "KS test input must lie strictly in (0, 1)".into(),
        ));
    }
    let mut sorted = u.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let lo = x - i as f64 / n;
        let hi = (i + 1) as f64 / n - x;
        d = d.max(lo).max(hi);
    }
    Ok(kolmogorov_survival(n.sqrt() * d))
}

/// Kolmogorov distribution survival function `Q(lambda)`.
fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.0 {
        // Jacobi theta dual form, rapidly convergent for small arguments.
        let factor = (2.0 * std::f64::consts::PI).sqrt() / lambda;
        let mut sum = 0.0;
        for k in 1..=100u32 {
            let m = (2 * k - 1) as f64;
            let term = (-m * m * std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda)).exp();
            sum += term;
            if term < 1e-16 {
                break;
            }
        }
        (1.0 - factor * sum).clamp(0.0, 1.0)
    } else {
        let mut sum = 0.0;
        for k in 1..=100u32 {
            let kk = k as f64;
            let term = (-2.0 * kk * kk * lambda * lambda).exp();
            sum += if k % 2 == 1 { term } else { -term };
            if term < 1e-16 {
                break;
            }
        }
        (2.0 * sum).clamp(0.0, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ecdf_counts_with_n_plus_one_denominator() {
        let cdf = EmpiricalCdf::fit(&[1.0, 2.0, 3.0]).unwrap();
        assert_abs_diff_eq!(cdf.evaluate(2.0), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn ecdf_assigns_average_ranks_to_ties() {
        // Two tied samples get rank (1+2)/2 = 1.5, divided by n+1 = 3.
        let cdf = EmpiricalCdf::fit(&[5.0, 5.0, 7.0]).unwrap();
        assert_abs_diff_eq!(cdf.evaluate(5.0), 1.5 / 4.0, epsilon = 1e-15);
        let pair = EmpiricalCdf::fit(&[5.0, 5.0, 6.0]);
        assert!(pair.is_ok());
    }

    #[test]
    fn ecdf_tied_pair_average_rank() {
        // [5, 5] alone is degenerate; embed the documented case directly:
        // evaluating at a value tied k times uses the tie group's mean rank.
        let cdf = EmpiricalCdf {
            sorted_values: vec![5.0, 5.0],
            n: 2,
            tie_policy: TiePolicy::AverageRank,
        };
        assert_abs_diff_eq!(cdf.evaluate(5.0), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn ecdf_boundary_evaluations() {
        let cdf = EmpiricalCdf::fit(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_abs_diff_eq!(cdf.evaluate(0.0), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(cdf.evaluate(10.0), 4.0 / 5.0, epsilon = 1e-15);
    }

    #[test]
    fn ecdf_rejects_degenerate_columns() {
        assert!(matches!(
            EmpiricalCdf::fit(&[3.0, 3.0, 3.0]),
            Err(VineError::DegenerateColumn { .. })
        ));
    }

    #[test]
    fn pit_maps_ranks_over_n_plus_one() {
        let obs = pit_transform(
            &[vec![10.0, 20.0, 30.0], vec![5.0, 1.0, 3.0]],
            &["a".into(), "b".into()],
        )
        .unwrap();
        assert_eq!(obs.column(0), &[0.25, 0.5, 0.75]);
        assert_eq!(obs.column(1), &[0.75, 0.25, 0.5]);
    }

    #[test]
    fn pit_is_invariant_under_monotone_transforms() {
        let raw: Vec<f64> = vec![3.0, -1.0, 7.0, 0.5, 2.0];
        let transformed: Vec<f64> = raw.iter().map(|x| (x * 0.3).exp()).collect();
        let a = pit_transform(&[raw.clone(), raw.clone()], &["x".into(), "y".into()]).unwrap();
        let b = pit_transform(&[transformed, raw], &["x".into(), "y".into()]).unwrap();
        assert_eq!(a.column(0), b.column(0));
    }

    #[test]
    fn pit_extremes_without_ties() {
        let raw: Vec<f64> = (0..50).map(|i| i as f64 * 1.7 + 0.1).collect();
        let obs = pit_transform(&[raw.clone(), raw], &["x".into(), "y".into()]).unwrap();
        let col = obs.column(0);
        let max = col.iter().cloned().fold(f64::MIN, f64::max);
        let min = col.iter().cloned().fold(f64::MAX, f64::min);
        assert_abs_diff_eq!(max, 50.0 / 51.0, epsilon = 1e-15);
        assert_abs_diff_eq!(min, 1.0 / 51.0, epsilon = 1e-15);
    }

    #[test]
    fn pit_propagates_column_name_on_degenerate_input() {
        let err = pit_transform(
            &[vec![1.0, 1.0, 1.0], vec![1.0, 2.0, 3.0]],
            &["views".into(), "likes".into()],
        )
        .unwrap_err();
        match err {
            VineError::DegenerateColumn { name } => assert_eq!(name, "views"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn ks_near_perfect_grid_has_high_pvalue() {
        let n = 1000;
        let u: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let p = ks_uniform_pvalue(&u).unwrap();
        assert!(p > 0.999, "p={p}");
    }

    #[test]
    fn ks_rejects_gross_nonuniformity() {
        let n = 1000;
        let u: Vec<f64> = (0..n).map(|i| 0.5 * (i as f64 + 0.5) / n as f64).collect();
        let p = ks_uniform_pvalue(&u).unwrap();
        assert!(p < 1e-3, "p={p}");
    }

    #[test]
    fn ks_rejects_out_of_range_input() {
        let mut u: Vec<f64> = (0..20).map(|i| (i as f64 + 0.5) / 20.0).collect();
        u[3] = 1.0;
        assert!(matches!(
            ks_uniform_pvalue(&u),
            Err(VineError::InputOutOfRange(_))
        ));
    }

    #[test]
    fn kolmogorov_survival_matches_known_points() {
        // Q(lambda) for lambda around 1 from published K-S tables.
        assert_abs_diff_eq!(kolmogorov_survival(1.0), 0.27, epsilon = 5e-3);
        assert_abs_diff_eq!(kolmogorov_survival(1.36), 0.049, epsilon = 5e-3);
        assert!(kolmogorov_survival(0.2) > 0.999999);
        assert!(kolmogorov_survival(3.0) < 1e-7);
    }
}
