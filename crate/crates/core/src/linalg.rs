//! Dense matrices and a one-sided Jacobi SVD.

use serde::{Deserialize, Serialize};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Panics if rows are ragged.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Option<Self> {
        (data.len() == rows * cols).then_some(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let src = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        out
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| *x == 0.0)
    }

    /// First `k` columns.
    pub fn leading_columns(&self, k: usize) -> Matrix {
        let k = k.min(self.cols);
        let mut out = Matrix::zeros(self.rows, k);
        for i in 0..self.rows {
            out.data[i * k..(i + 1) * k].copy_from_slice(&self.row(i)[..k]);
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Thin SVD `M = U diag(s) V^T` with `k = min(m, n)` components, singular
/// values non-increasing. Each column of V has its largest-magnitude entry
/// positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Svd {
    pub u: Matrix,
    pub s: Vec<f64>,
    pub v: Matrix,
}

const MAX_SWEEPS: usize = 100;

impl Svd {
    pub fn compute(m: &Matrix) -> Svd {
        if m.rows >= m.cols {
            jacobi_tall(m)
        } else {
            let t = jacobi_tall(&m.transpose());
            let mut svd = Svd {
                u: t.v,
                s: t.s,
                v: t.u,
            };
            fix_signs(&mut svd);
            svd
        }
    }

    /// `U_r diag(s_r) V_r^T` using the leading `r` components.
    pub fn reconstruct(&self, r: usize) -> Matrix {
        let r = r.min(self.s.len());
        let mut out = Matrix::zeros(self.u.rows, self.v.rows);
        for i in 0..self.u.rows {
            for j in 0..self.v.rows {
                out[(i, j)] = (0..r).map(|k| self.u[(i, k)] * self.s[k] * self.v[(j, k)]).sum();
            }
        }
        out
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rotate(a: &mut [f64], b: &mut [f64], c: f64, s: f64) {
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        let (p, q) = (*x, *y);
        *x = c * p - s * q;
        *y = s * p + c * q;
    }
}

/// Hestenes one-sided Jacobi for m >= n.
fn jacobi_tall(m: &Matrix) -> Svd {
    let (rows, n) = (m.rows, m.cols);
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| m.column(j)).collect();
    let mut vcols: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let tol = f64::EPSILON * rows.max(1) as f64;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma == 0.0 || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (lo, hi) = cols.split_at_mut(q);
                rotate(&mut lo[p], &mut hi[0], c, s);
                let (lo, hi) = vcols.split_at_mut(q);
                rotate(&mut lo[p], &mut hi[0], c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigma: Vec<f64> = cols.iter().map(|c| dot(c, c).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]).then(a.cmp(&b)));
    let smax = order.first().map_or(0.0, |&i| sigma[i]);
    let cutoff = smax * f64::EPSILON * rows.max(n) as f64;

    let mut u = Matrix::zeros(rows, n);
    let mut v = Matrix::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut pending = Vec::new();
    for (k, &j) in order.iter().enumerate() {
        if sigma[j] <= cutoff {
            sigma[j] = 0.0;
            pending.push(k);
            basis.push(Vec::new());
        } else {
            basis.push(cols[j].iter().map(|x| x / sigma[j]).collect());
        }
        s.push(sigma[j]);
        for i in 0..n {
            v[(i, k)] = vcols[j][i];
        }
    }
    complete_basis(&mut basis, &pending, rows);
    for (k, col) in basis.iter().enumerate() {
        for i in 0..rows {
            u[(i, k)] = col[i];
        }
    }
    let mut svd = Svd { u, s, v };
    fix_signs(&mut svd);
    svd
}

/// Fills the `pending` slots with unit vectors orthogonal to every other
/// slot (Gram-Schmidt over the standard basis, two passes).
fn complete_basis(basis: &mut [Vec<f64>], pending: &[usize], dim: usize) {
    let mut candidate = 0;
    for &slot in pending {
        loop {
            assert!(candidate < dim, "cannot complete orthonormal basis");
            let mut e = vec![0.0; dim];
            e[candidate] = 1.0;
            candidate += 1;
            for _ in 0..2 {
                for (k, b) in basis.iter().enumerate() {
                    if k == slot || b.is_empty() {
                        continue;
                    }
                    let proj = dot(&e, b);
                    for (x, y) in e.iter_mut().zip(b) {
                        *x -= proj * y;
                    }
                }
            }
            let norm = dot(&e, &e).sqrt();
            if norm > 1e-8 {
                basis[slot] = e.into_iter().map(|x| x / norm).collect();
                break;
            }
        }
    }
}

fn fix_signs(svd: &mut Svd) {
    for k in 0..svd.s.len() {
        let mut best = 0.0f64;
        let mut sign = 1.0;
        for i in 0..svd.v.rows {
            let x = svd.v[(i, k)];
            if x.abs() > best.abs() + 1e-12 {
                best = x;
                sign = x.signum();
            }
        }
        if sign < 0.0 {
            for i in 0..svd.v.rows {
                svd.v[(i, k)] = -svd.v[(i, k)];
            }
            for i in 0..svd.u.rows {
                svd.u[(i, k)] = -svd.u[(i, k)];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orthonormality_error(m: &Matrix) -> f64 {
        let g = m.transpose().matmul(m);
        g.sub(&Matrix::identity(m.cols())).data().iter().fold(0.0f64, |a, x| a.max(x.abs()))
    }

    #[test]
    fn identity_has_unit_singular_values() {
        let svd = Svd::compute(&Matrix::identity(3));
        assert_eq!(svd.s, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn rank_one_outer_product() {
        // [[1,2],[2,4]] = 5 * (1,2)/√5 (1,2)^T/√5
        let svd = Svd::compute(&Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]));
        assert!((svd.s[0] - 5.0).abs() < 1e-12);
        assert_eq!(svd.s[1], 0.0);
        assert!(orthonormality_error(&svd.u) < 1e-12);
        assert!(svd.v[(1, 0)] > 0.0);
    }

    #[test]
    fn wide_matrix_reconstructs() {
        let m = Matrix::from_rows(&[vec![1.0, 0.0, 2.0, -1.0], vec![0.5, 3.0, 0.0, 1.0]]);
        let svd = Svd::compute(&m);
        assert_eq!(svd.s.len(), 2);
        assert!(svd.reconstruct(2).sub(&m).frobenius() < 1e-12);
        assert!(orthonormality_error(&svd.v) < 1e-12);
    }

    #[test]
    fn zero_matrix_completes_basis() {
        let svd = Svd::compute(&Matrix::zeros(4, 2));
        assert_eq!(svd.s, vec![0.0, 0.0]);
        assert!(orthonormality_error(&svd.u) < 1e-12);
    }
}
