//! Dense n-by-n matrix kernel for deformation gradients and co-differentials.
//!
//! Sized for n <= 8 with inline storage; determinants and adjugates use exact
//! cofactor expansion so rank-deficient inputs behave predictably, and the
//! operator norm comes from a Jacobi eigensolve of M^T M.

use crate::error::{Error, Result};
use crate::point::MAX_DIM;

const CAP: usize = MAX_DIM * MAX_DIM;

/// Row-major n-by-n real matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatN {
    n: usize,
    a: [f64; CAP],
}

impl MatN {
    pub fn zeros(n: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&n), "matrix dimension out of range");
        Self { n, a: [0.0; CAP] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        Self::from_fn(n, |i, j| rows[i][j])
    }

    pub fn diag(entries: &[f64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &v) in entries.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|v| v.is_finite())
    }

    pub fn entries(&self) -> &[f64] {
        &self.a[..self.n * self.n]
    }

    pub fn mul(&self, other: &MatN) -> MatN {
        let n = self.n;
        debug_assert_eq!(n, other.n);
        MatN::from_fn(n, |i, j| {
            let mut s = 0.0;
            for k in 0..n {
                s += self.get(i, k) * other.get(k, j);
            }
            s
        })
    }

    pub fn sub(&self, other: &MatN) -> MatN {
        MatN::from_fn(self.n, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn scale(&self, s: f64) -> MatN {
        MatN::from_fn(self.n, |i, j| self.get(i, j) * s)
    }

    pub fn transpose(&self) -> MatN {
        MatN::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn frobenius(&self) -> f64 {
        self.entries().iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Determinant: cofactor expansion for n <= 4, pivoted LU above.
    pub fn det(&self) -> f64 {
        if self.n <= 4 {
            det_cofactor(self.entries(), self.n)
        } else {
            det_lu(self)
        }
    }

    /// Adjugate (transposed cofactor matrix), so `adj(M) * M = det(M) * I`.
    ///
    /// Always computed by cofactor expansion; a rank-deficient input gives an
    /// exactly structured result instead of LU noise.
    pub fn adjugate(&self) -> MatN {
        let n = self.n;
        if n == 1 {
            return MatN::identity(1);
        }
        let mut adj = MatN::zeros(n);
        let mut minor = [0.0; CAP];
        for i in 0..n {
            for j in 0..n {
                let mut idx = 0;
                for r in 0..n {
                    if r == i {
                        continue;
                    }
                    for c in 0..n {
                        if c == j {
                            continue;
                        }
                        minor[idx] = self.get(r, c);
                        idx += 1;
                    }
                }
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                // transposed cofactor: C_ij lands at (j, i)
                adj.set(j, i, sign * det_cofactor(&minor[..(n - 1) * (n - 1)], n - 1));
            }
        }
        adj
    }

    /// Operator norm (largest singular value) via a Jacobi eigensolve of M^T M.
    pub fn op_norm(&self) -> f64 {
        let n = self.n;
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        // Scale first: M^T M squares the dynamic range.
        let m = self.scale(1.0 / scale);
        let mut s = MatN::from_fn(n, |i, j| {
            let mut acc = 0.0;
            for k in 0..n {
                acc += m.get(k, i) * m.get(k, j);
            }
            acc
        });
        let lambda = jacobi_max_eigenvalue(&mut s);
        scale * lambda.max(0.0).sqrt()
    }

    /// Checks all entries finite, as required before distortion computations.
    pub fn require_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParameter("matrix has non-finite entries".into()))
        }
    }
}

fn det_cofactor(a: &[f64], n: usize) -> f64 {
    match n {
        1 => a[0],
        2 => a[0] * a[3] - a[1] * a[2],
        3 => {
            a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6])
                + a[2] * (a[3] * a[7] - a[4] * a[6])
        }
        _ => {
            let m = n - 1;
            let mut minor = [0.0; CAP];
            let mut det = 0.0;
            let mut sign = 1.0;
            for j in 0..n {
                let mut idx = 0;
                for r in 1..n {
                    for c in 0..n {
                        if c != j {
                            minor[idx] = a[r * n + c];
                            idx += 1;
                        }
                    }
                }
                det += sign * a[j] * det_cofactor(&minor[..m * m], m);
                sign = -sign;
            }
            det
        }
    }
}

fn det_lu(m: &MatN) -> f64 {
    let n = m.dim();
    let mut a = *m;
    let mut det = 1.0;
    for k in 0..n {
        let mut piv = k;
        for r in k + 1..n {
            if a.get(r, k).abs() > a.get(piv, k).abs() {
                piv = r;
            }
        }
        if a.get(piv, k) == 0.0 {
            return 0.0;
        }
        if piv != k {
            for c in 0..n {
                let tmp = a.get(k, c);
                a.set(k, c, a.get(piv, c));
                a.set(piv, c, tmp);
            }
            det = -det;
        }
        det *= a.get(k, k);
        for r in k + 1..n {
            let f = a.get(r, k) / a.get(k, k);
            for c in k..n {
                a.set(r, c, a.get(r, c) - f * a.get(k, c));
            }
        }
    }
    det
}

/// Largest eigenvalue of a symmetric matrix by cyclic Jacobi rotations.
fn jacobi_max_eigenvalue(s: &mut MatN) -> f64 {
    let n = s.dim();
    if n == 1 {
        return s.get(0, 0);
    }
    let norm = s.frobenius().max(f64::MIN_POSITIVE);
    let tol = 1e-15 * norm;
    for _sweep in 0..40 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += s.get(p, q).powi(2);
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = s.get(p, q);
                if apq.abs() <= tol * 1e-2 {
                    continue;
                }
                let app = s.get(p, p);
                let aqq = s.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let akp = s.get(k, p);
                    let akq = s.get(k, q);
                    s.set(k, p, c * akp - sn * akq);
                    s.set(k, q, sn * akp + c * akq);
                }
                for k in 0..n {
                    let apk = s.get(p, k);
                    let aqk = s.get(q, k);
                    s.set(p, k, c * apk - sn * aqk);
                    s.set(q, k, sn * apk + c * aqk);
                }
            }
        }
    }
    let mut lambda = s.get(0, 0);
    for i in 1..n {
        lambda = lambda.max(s.get(i, i));
    }
    lambda
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_basics() {
        assert_eq!(MatN::identity(3).det(), 1.0);
        assert_eq!(MatN::diag(&[2.0, 3.0, 4.0]).det(), 24.0);
        let m5 = MatN::from_fn(5, |i, j| if i == j { (i + 2) as f64 } else { 0.1 });
        let m5_cof = det_cofactor(m5.entries(), 5);
        assert!((m5.det() - m5_cof).abs() < 1e-12 * m5_cof.abs());
    }

    #[test]
    fn rotation_has_unit_determinant_and_norm() {
        let th = 0.7f64;
        let r = MatN::from_rows(&[
            &[th.cos(), -th.sin(), 0.0],
            &[th.sin(), th.cos(), 0.0],
            &[0.0, 0.0, 1.0],
        ]);
        assert!((r.det() - 1.0).abs() < 1e-12);
        assert!((r.op_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn adjugate_examples() {
        assert_eq!(MatN::identity(3).adjugate(), MatN::identity(3));
        let adj = MatN::diag(&[2.0, 3.0, 4.0]).adjugate();
        assert_eq!(adj, MatN::diag(&[12.0, 8.0, 6.0]));
        // rank-1: all 2x2 minors vanish exactly for integer entries
        let r1 = MatN::from_fn(3, |i, j| ((i + 1) * (j + 2)) as f64);
        assert_eq!(r1.adjugate(), MatN::zeros(3));
    }

    #[test]
    fn op_norm_diag_and_scaled() {
        assert!((MatN::diag(&[1.0, 2.0, 3.0]).op_norm() - 3.0).abs() < 1e-13);
        // extreme scaling must not overflow through M^T M
        let m = MatN::diag(&[1e150, 2e150]);
        assert!((m.op_norm() - 2e150).abs() < 1e137);
    }

    #[test]
    fn cramer_rule_holds() {
        let m = MatN::from_rows(&[&[1.0, 2.0, -1.0], &[0.5, -3.0, 2.0], &[4.0, 0.0, 1.0]]);
        let prod = m.adjugate().mul(&m);
        let expect = MatN::identity(3).scale(m.det());
        assert!(prod.sub(&expect).max_abs() < 1e-12 * m.frobenius().powi(3));
    }
}
