//! Empirical rank-dependence measures over pseudo-observations.
//!
//! Kendall's tau is computed in `O(N log N)` with Knight's algorithm
//! (merge-sort inversion counting). The uncorrected tau-a reduces exactly
//! to the concordance-count formula `(A - B) / (N(N-1)/2)`; real count data
//! is heavy in ties, so the tie-corrected tau-b is the default.

use crate::error::{Result, VineError};
use crate::marginals::PseudoObservations;
use rayon::prelude::*;

/// Which flavour of Kendall's tau to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TauMode {
    /// `(A - B) / (N(N-1)/2)`, no tie correction.
    TauA,
    /// `(A - B) / sqrt((P - T_x)(P - T_y))`, tie-corrected.
    #[default]
    TauB,
}

/// Pairwise Kendall's tau over all columns: symmetric with unit diagonal.
#[derive(Debug, Clone)]
pub struct TauMatrix {
    values: Vec<Vec<f64>>,
    names: Vec<String>,
}

impl TauMatrix {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i][j]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// CSV rendering with a header row and one labelled row per variable.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("name");
        for name in &self.names {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (i, row) in self.values.iter().enumerate() {
            out.push_str(&self.names[i]);
            for v in row {
                out.push(',');
                out.push_str(&format!("{v:.6}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Tie-corrected empirical Kendall's tau (tau-b by default).
pub fn kendall_tau(x: &[f64], y: &[f64], mode: TauMode) -> Result<f64> {
    if x.len() != y.len() {
        return Err(VineError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    if n < 2 {
        return Err(VineError::InputOutOfRange(format!(
            "kendall tau needs at least 2 observations, got {n}"
        )));
    }

    // Knight's algorithm: sort by (x, y), count inversions of y.
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| {
        x[a].partial_cmp(&x[b])
            .unwrap()
            .then(y[a].partial_cmp(&y[b]).unwrap())
    });

    let n0 = n as u64 * (n as u64 - 1) / 2;
    let mut n1 = 0u64; // pairs tied in x
    let mut n3 = 0u64; // pairs tied in both
    {
        let mut i = 0;
        while i < n {
            let mut j = i + 1;
            while j < n && x[idx[j]] == x[idx[i]] {
                j += 1;
            }
            let t = (j - i) as u64;
            n1 += t * (t - 1) / 2;
            let mut k = i;
            while k < j {
                let mut m = k + 1;
                while m < j && y[idx[m]] == y[idx[k]] {
                    m += 1;
                }
                let tt = (m - k) as u64;
                n3 += tt * (tt - 1) / 2;
                k = m;
            }
            i = j;
        }
    }

    let mut ys: Vec<f64> = idx.iter().map(|&i| y[i]).collect();
    let swaps = count_inversions(&mut ys);

    let mut n2 = 0u64; // pairs tied in y
    {
        let mut sorted_y = y.to_vec();
        sorted_y.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut i = 0;
        while i < n {
            let mut j = i + 1;
            while j < n && sorted_y[j] == sorted_y[i] {
                j += 1;
            }
            let t = (j - i) as u64;
            n2 += t * (t - 1) / 2;
            i = j;
        }
    }

    let con_minus_dis = n0 as i64 - n1 as i64 - n2 as i64 + n3 as i64 - 2 * swaps as i64;
    match mode {
        TauMode::TauA => Ok(con_minus_dis as f64 / n0 as f64),
        TauMode::TauB => {
            let dx = (n0 - n1) as f64;
            let dy = (n0 - n2) as f64;
            if dx == 0.0 || dy == 0.0 {
                return Err(VineError::DegenerateColumn {
                    name: "kendall tau argument has no untied pairs".into(),
                });
            }
            Ok(con_minus_dis as f64 / (dx * dy).sqrt())
        }
    }
}

/// Merge sort that counts the crossings needed to sort `values` ascending.
fn count_inversions(values: &mut [f64]) -> u64 {
    let n = values.len();
    if n < 2 {
        return 0;
    }
    let mut buf = values.to_vec();
    merge_count(values, &mut buf)
}

fn merge_count(values: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = values.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let (left_buf, right_buf) = buf.split_at_mut(mid);
    let mut count = {
        let (left, right) = values.split_at_mut(mid);
        merge_count(left, left_buf) + merge_count(right, right_buf)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if values[i] <= values[j] {
            buf[k] = values[i];
            i += 1;
        } else {
            buf[k] = values[j];
            count += (mid - i) as u64;
            j += 1;
        }
        k += 1;
    }
    while i < mid {
        buf[k] = values[i];
        i += 1;
        k += 1;
    }
    while j < n {
        buf[k] = values[j];
        j += 1;
        k += 1;
    }
    values.copy_from_slice(&buf[..n]);
    count
}

/// Pairwise Kendall's tau over all `C(d, 2)` column pairs.
pub fn tau_matrix(u: &PseudoObservations, mode: TauMode) -> Result<TauMatrix> {
    let d = u.n_cols();
    let pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|i| ((i + 1)..d).map(move |j| (i, j)))
        .collect();
    let taus: Vec<Result<f64>> = pairs
        .par_iter()
        .map(|&(i, j)| kendall_tau(u.column(i), u.column(j), mode))
        .collect();

    let mut values = vec![vec![0.0; d]; d];
    for ((i, j), tau) in pairs.into_iter().zip(taus) {
        let tau = tau?;
        values[i][j] = tau;
        values[j][i] = tau;
    }
    for (i, row) in values.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    Ok(TauMatrix {
        values,
        names: u.names().to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Brute-force tau over all pairs, the oracle the fast path must match.
    fn tau_brute(x: &[f64], y: &[f64], mode: TauMode) -> f64 {
        let n = x.len();
        let (mut con, mut dis) = (0i64, 0i64);
        let (mut tx, mut ty) = (0i64, 0i64);
        for i in 0..n {
            for j in (i + 1)..n {
                let dx = x[i] - x[j];
                let dy = y[i] - y[j];
                if dx == 0.0 && dy == 0.0 {
                    continue;
                } else if dx == 0.0 {
                    tx += 1;
                } else if dy == 0.0 {
                    ty += 1;
                } else if dx * dy > 0.0 {
                    con += 1;
                } else {
                    dis += 1;
                }
            }
        }
        let n0 = (n * (n - 1) / 2) as f64;
        match mode {
            TauMode::TauA => (con - dis) as f64 / n0,
            TauMode::TauB => {
                (con - dis) as f64 / (((con + dis + tx) as f64) * ((con + dis + ty) as f64)).sqrt()
            }
        }
    }

    #[test]
    fn perfect_concordance_and_discordance() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_abs_diff_eq!(
            kendall_tau(&x, &[2.0, 4.0, 6.0, 8.0], TauMode::TauB).unwrap(),
            1.0
        );
        assert_abs_diff_eq!(
            kendall_tau(&x, &[8.0, 6.0, 4.0, 2.0], TauMode::TauB).unwrap(),
            -1.0
        );
    }

    #[test]
    fn three_point_example_matches_pair_count() {
        // pairs: (1,3)-(2,1) dis, (1,3)-(3,2) dis, (2,1)-(3,2) con -> (1-2)/3
        let tau = kendall_tau(&[1.0, 2.0, 3.0], &[3.0, 1.0, 2.0], TauMode::TauA).unwrap();
        assert_abs_diff_eq!(tau, -1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn fast_path_matches_brute_force_with_ties() {
        let mut state = 88172645463325252u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            // coarse grid to force plenty of ties
            ((state % 17) as f64) / 3.0
        };
        for n in [2usize, 3, 10, 137, 500] {
            let x: Vec<f64> = (0..n).map(|_| next()).collect();
            let y: Vec<f64> = (0..n).map(|_| next()).collect();
            for mode in [TauMode::TauA, TauMode::TauB] {
                let fast = kendall_tau(&x, &y, mode).unwrap();
                let brute = tau_brute(&x, &y, mode);
                assert_abs_diff_eq!(fast, brute, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn tau_is_rank_invariant() {
        let x: [f64; 6] = [0.3, 1.5, -0.2, 0.8, 2.2, 0.1];
        let y = [1.0, 0.4, 0.6, 2.0, 1.4, 0.2];
        let gx: Vec<f64> = x.iter().map(|v| v.exp()).collect();
        let a = kendall_tau(&x, &y, TauMode::TauB).unwrap();
        let b = kendall_tau(&gx, &y, TauMode::TauB).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-15);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        assert!(matches!(
            kendall_tau(&[1.0, 2.0], &[1.0], TauMode::TauB),
            Err(VineError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn matrix_is_symmetric_with_unit_diagonal() {
        let cols = vec![
            vec![0.1, 0.9, 0.4, 0.6, 0.2],
            vec![0.3, 0.7, 0.2, 0.9, 0.1],
            vec![0.8, 0.2, 0.6, 0.3, 0.5],
        ];
        let obs = PseudoObservations::new(cols, vec!["a".into(), "b".into(), "c".into()]).unwrap();
        let m = tau_matrix(&obs, TauMode::TauB).unwrap();
        for i in 0..3 {
            assert_abs_diff_eq!(m.get(i, i), 1.0);
            for j in 0..3 {
                assert_abs_diff_eq!(m.get(i, j), m.get(j, i));
            }
        }
        // off-diagonals agree with the scalar op
        let t01 = kendall_tau(obs.column(0), obs.column(1), TauMode::TauB).unwrap();
        assert_abs_diff_eq!(m.get(0, 1), t01);
    }

    #[test]
    fn identical_columns_have_unit_tau() {
        let col = vec![0.1, 0.5, 0.3, 0.9, 0.7];
        let obs =
            PseudoObservations::new(vec![col.clone(), col], vec!["a".into(), "b".into()]).unwrap();
        let m = tau_matrix(&obs, TauMode::TauB).unwrap();
        assert_abs_diff_eq!(m.get(0, 1), 1.0);
    }
}
