//! Direct tridiagonal elimination (Thomas algorithm).

/// Symmetric Toeplitz tridiagonal matrix with `diag` on the diagonal and
/// `off` on both off-diagonals, the only shape the stepper needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymTridiagonal {
    pub n: usize,
    pub diag: f64,
    pub off: f64,
}

impl SymTridiagonal {
    /// True when the matrix is a strictly diagonally dominant M-matrix:
    /// positive diagonal, nonpositive off-diagonals and positive row sums.
    pub fn is_m_matrix(&self) -> bool {
        self.diag > 0.0 && self.off <= 0.0 && self.diag + 2.0 * self.off > 0.0
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        assert_eq!(x.len(), n);
        (0..n)
            .map(|i| {
                let mut y = self.diag * x[i];
                if i > 0 {
                    y += self.off * x[i - 1];
                }
                if i + 1 < n {
                    y += self.off * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// Solves `A x = rhs` in place. Returns `None` if a pivot vanishes or the
    /// result is not finite (cannot happen for an M-matrix).
    pub fn solve_in_place(&self, rhs: &mut [f64], scratch: &mut Vec<f64>) -> Option<()> {
        let n = self.n;
        assert_eq!(rhs.len(), n);
        scratch.clear();
        scratch.resize(n, 0.0);
        let c = scratch;

        // forward sweep
        let mut den = self.diag;
        if den == 0.0 {
            return None;
        }
        c[0] = self.off / den;
        rhs[0] /= den;
        for i in 1..n {
            den = self.diag - self.off * c[i - 1];
            if den == 0.0 {
                return None;
            }
            c[i] = self.off / den;
            rhs[i] = (rhs[i] - self.off * rhs[i - 1]) / den;
        }
        // back substitution
        for i in (0..n.saturating_sub(1)).rev() {
            rhs[i] -= c[i] * rhs[i + 1];
        }
        rhs.iter().all(|v| v.is_finite()).then_some(())
    }

    pub fn solve(&self, rhs: &[f64]) -> Option<Vec<f64>> {
        let mut x = rhs.to_vec();
        let mut scratch = Vec::with_capacity(self.n);
        self.solve_in_place(&mut x, &mut scratch)?;
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Dense Gaussian elimination with partial pivoting, independent of the
    /// tridiagonal sweep.
    #[allow(clippy::needless_range_loop)]
    fn dense_solve(a: &SymTridiagonal, b: &[f64]) -> Vec<f64> {
        let n = a.n;
        let mut m = vec![vec![0.0; n + 1]; n];
        for i in 0..n {
            m[i][i] = a.diag;
            if i > 0 {
                m[i][i - 1] = a.off;
            }
            if i + 1 < n {
                m[i][i + 1] = a.off;
            }
            m[i][n] = b[i];
        }
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs())).unwrap();
            m.swap(k, p);
            for i in k + 1..n {
                let f = m[i][k] / m[k][k];
                for j in k..=n {
                    m[i][j] -= f * m[k][j];
                }
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| m[i][j] * x[j]).sum();
            x[i] = (m[i][n] - s) / m[i][i];
        }
        x
    }

    #[test]
    fn single_node() {
        let a = SymTridiagonal {
            n: 1,
            diag: 1.8,
            off: -0.4,
        };
        let x = a.solve(&[1.0]).unwrap();
        assert!((x[0] - 1.0 / 1.8).abs() < 1e-16);
    }

    #[test]
    fn matches_dense_elimination() {
        for n in [2, 5, 17] {
            let a = SymTridiagonal {
                n,
                diag: 3.1,
                off: -1.2,
            };
            let b: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin()).collect();
            let x = a.solve(&b).unwrap();
            let y = dense_solve(&a, &b);
            for (p, q) in x.iter().zip(&y) {
                assert!((p - q).abs() < 1e-13, "{p} vs {q}");
            }
            let r = a.apply(&x);
            for (p, q) in r.iter().zip(&b) {
                assert!((p - q).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn negation_is_exact() {
        let a = SymTridiagonal {
            n: 9,
            diag: 2.5,
            off: -1.0,
        };
        let b: Vec<f64> = (0..9).map(|i| (i as f64).cos()).collect();
        let nb: Vec<f64> = b.iter().map(|v| -v).collect();
        let x = a.solve(&b).unwrap();
        let y = a.solve(&nb).unwrap();
        for (p, q) in x.iter().zip(&y) {
            assert_eq!(*p, -*q);
        }
    }

    #[test]
    fn singular_pivot_is_reported() {
        let a = SymTridiagonal {
            n: 3,
            diag: 0.0,
            off: 1.0,
        };
        assert!(a.solve(&[1.0, 1.0, 1.0]).is_none());
    }

    #[test]
    fn m_matrix_inverse_is_positive() {
        let a = SymTridiagonal {
            n: 6,
            diag: 2.2,
            off: -1.0,
        };
        assert!(a.is_m_matrix());
        for k in 0..6 {
            let mut e = vec![0.0; 6];
            e[k] = 1.0;
            assert!(a.solve(&e).unwrap().iter().all(|&v| v > 0.0));
        }
    }
}
