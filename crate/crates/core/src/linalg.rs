//! Small dense and tridiagonal linear algebra used by the solver and the
//! numerical oracles. Everything here targets matrices of size at most a few
//! hundred, where simple O(n^3) methods are accurate and fast enough.

use crate::error::{Error, Result};

/// Solve a symmetric positive definite tridiagonal system by a root-free
/// LDL^T factorization without pivoting.
///
/// `diag` holds the n diagonal entries, `off` the n-1 sub/super-diagonal
/// entries. Fails if a pivot is not strictly positive.
pub fn ldlt_tridiag_solve(diag: &[f64], off: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    assert_eq!(rhs.len(), n, "rhs length mismatch");
    assert!(n == 0 || off.len() == n - 1, "off-diagonal length mismatch");
    if n == 0 {
        return Ok(Vec::new());
    }

    let mut d = vec![0.0; n];
    let mut l = vec![0.0; n.saturating_sub(1)];
    d[0] = diag[0];
    if d[0] <= 0.0 || !d[0].is_finite() {
        return Err(Error::NotPositiveDefinite(format!("pivot 0 = {}", d[0])));
    }
    for i in 0..n - 1 {
        l[i] = off[i] / d[i];
        d[i + 1] = diag[i + 1] - l[i] * off[i];
        if d[i + 1] <= 0.0 || !d[i + 1].is_finite() {
            return Err(Error::NotPositiveDefinite(format!(
                "pivot {} = {}",
                i + 1,
                d[i + 1]
            )));
        }
    }

    // L z = rhs, D y = z, L^T x = y.
    let mut x = rhs.to_vec();
    for i in 1..n {
        x[i] -= l[i - 1] * x[i - 1];
    }
    for i in 0..n {
        x[i] /= d[i];
    }
    for i in (0..n - 1).rev() {
        x[i] -= l[i] * x[i + 1];
    }
    Ok(x)
}

/// Dense symmetric matrix in row-major storage.
#[derive(Debug, Clone)]
pub struct SymMatrix {
    n: usize,
    a: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, a: vec![0.0; n * n] }
    }

    /// Build from full row-major data; the strict lower triangle is ignored
    /// and mirrored from the upper one.
    pub fn from_rows(n: usize, rows: &[f64]) -> Self {
        assert_eq!(rows.len(), n * n);
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = rows[i * n + j];
                m.a[i * n + j] = v;
                m.a[j * n + i] = v;
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
        self.a[j * self.n + i] = v;
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        self.a
            .chunks_exact(self.n)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Cholesky solve for a dense SPD system.
pub fn cholesky_solve(m: &SymMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = m.n;
    assert_eq!(rhs.len(), n);
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = m.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return Err(Error::NotPositiveDefinite(format!("pivot {i} = {s}")));
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    let mut y = rhs.to_vec();
    for i in 0..n {
        for k in 0..i {
            y[i] -= l[i * n + k] * y[k];
        }
        y[i] /= l[i * n + i];
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            y[i] -= l[k * n + i] * y[k];
        }
        y[i] /= l[i * n + i];
    }
    Ok(y)
}

/// Eigen-decomposition of a dense symmetric matrix by cyclic Jacobi
/// rotations. Returns eigenvalues in ascending order together with the
/// matching orthonormal eigenvectors (column k of `vecs`, stored column-major,
/// pairs with eigenvalue k).
pub fn sym_eigen(m: &SymMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.n;
    let mut a = m.a.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    if n <= 1 {
        return (a, v);
    }

    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
    for _sweep in 0..60 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a[i * n + j] * a[i * n + j];
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].partial_cmp(&a[j * n + j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vecs = vec![0.0; n * n];
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vecs[col * n + row] = v[row * n + src];
        }
    }
    (vals, vecs)
}
