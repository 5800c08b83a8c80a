//! Dense complex matrix kernel.
//!
//! Everything downstream (field norms, extremizers, interpolation witnesses)
//! is built from a handful of factorizations implemented here:
//!
//! * one-sided (Hestenes) Jacobi SVD,
//! * cyclic Jacobi eigendecomposition for Hermitian matrices,
//! * polar decomposition and matrix absolute value derived from the SVD,
//! * complex powers of positive semidefinite matrices via the spectral theorem.
//!
//! Matrices are small (the Non-goal ceiling is 256×256, typical blocks are
//! below 10×10), so the kernels favour accuracy over blocking or SIMD.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::norms::ExponentP;

pub type C64 = Complex64;

/// Largest matrix dimension accepted by the factorizations.
pub const MAX_DIM: usize = 256;

/// Relative cutoff below which an eigenvalue of a PSD matrix is treated as
/// zero by [`psd_power`] (0^w := 0).
pub const EIG_ZERO_REL: f64 = 1e-12;

/// Relative tolerance used for Hermitian / PSD domain checks.
pub const DOMAIN_REL_TOL: f64 = 1e-10;

const SWEEPS_PER_DIM: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatError {
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix dimensions must be positive")]
    Empty,
    #[error("matrix of size {0} exceeds the supported maximum of {MAX_DIM}")]
    TooLarge(usize),
    #[error("entry count {len} does not match {rows}x{cols}")]
    BadLength { rows: usize, cols: usize, len: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("{algorithm} did not converge after {sweeps} sweeps")]
    NoConvergence {
        algorithm: &'static str,
        sweeps: usize,
    },
    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },
}

pub type MatResult<T> = Result<T, MatError>;

/// Dense row-major complex matrix with finite entries.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting NaN/Inf.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> MatResult<Self> {
        if rows == 0 || cols == 0 {
            return Err(MatError::Empty);
        }
        if data.len() != rows * cols {
            return Err(MatError::BadLength {
                rows,
                cols,
                len: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(MatError::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> MatResult<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(MatError::BadLength {
                rows: r,
                cols: c,
                len: bad.len(),
            });
        }
        Self::from_vec(r, c, rows.iter().flatten().copied().collect())
    }

    /// Real matrix from row-major entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> MatResult<Self> {
        Self::from_vec(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, alpha: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * alpha).collect(),
        }
    }

    pub fn scale_real(&self, alpha: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * alpha).collect(),
        }
    }

    /// `alpha * self + beta * other`.
    pub fn lincomb(&self, alpha: C64, other: &Self, beta: C64) -> MatResult<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| alpha * a + beta * b)
                .collect(),
        })
    }

    pub fn matmul(&self, other: &Self) -> MatResult<Self> {
        if self.cols != other.rows {
            return Err(MatError::DimensionMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Sum of the diagonal entries.
    pub fn trace(&self) -> MatResult<C64> {
        self.require_square()?;
        Ok((0..self.rows).map(|i| self[(i, i)]).sum())
    }

    /// Frobenius (Hilbert–Schmidt) norm computed from the entries.
    pub fn hs_norm(&self) -> f64 {
        // scaled accumulation guards against overflow for large entries
        let scale = self.data.iter().fold(0.0_f64, |m, z| m.max(z.re.abs()).max(z.im.abs()));
        if scale == 0.0 {
            return 0.0;
        }
        let sum: f64 = self
            .data
            .iter()
            .map(|z| (z.re / scale).powi(2) + (z.im / scale).powi(2))
            .sum();
        scale * sum.sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "max_abs_diff shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Frobenius distance between `self` and its adjoint.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `(self + self*) / 2`.
    pub fn hermitian_part(&self) -> MatResult<Self> {
        self.require_square()?;
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        Ok(out)
    }

    pub(crate) fn require_square(&self) -> MatResult<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(MatError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn check_same_shape(&self, other: &Self) -> MatResult<()> {
        if self.shape() == other.shape() {
            Ok(())
        } else {
            Err(MatError::DimensionMismatch {
                left: self.shape(),
                right: other.shape(),
            })
        }
    }

    fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    fn set_column(&mut self, j: usize, col: &[C64]) {
        for (i, &z) in col.iter().enumerate() {
            self[(i, j)] = z;
        }
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl<'a> Mul<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &'a CMatrix) -> CMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl<'a> Add<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &'a CMatrix) -> CMatrix {
        let one = C64::new(1.0, 0.0);
        self.lincomb(one, rhs, one).expect("matrix sum shape mismatch")
    }
}

impl<'a> Sub<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &'a CMatrix) -> CMatrix {
        let one = C64::new(1.0, 0.0);
        self.lincomb(one, rhs, -one).expect("matrix difference shape mismatch")
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;

    fn neg(self) -> CMatrix {
        self.scale_real(-1.0)
    }
}

/// `A*`, the conjugate transpose.
pub fn adjoint(a: &CMatrix) -> CMatrix {
    a.adjoint()
}

pub fn trace(a: &CMatrix) -> MatResult<C64> {
    a.trace()
}

pub fn hs_norm(a: &CMatrix) -> f64 {
    a.hs_norm()
}

/// `A = u · diag(sigma) · vstar` with `sigma` non-increasing.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub vstar: CMatrix,
}

impl SvdResult {
    pub fn reconstruct(&self) -> CMatrix {
        let mut us = self.u.clone();
        for j in 0..us.cols() {
            let s = self.sigma.get(j).copied().unwrap_or(0.0);
            for i in 0..us.rows() {
                us[(i, j)] *= s;
            }
        }
        &us * &self.vstar
    }
}

/// `A = u · absval` with `u` unitary and `absval = |A|` Hermitian PSD.
#[derive(Debug, Clone)]
pub struct PolarResult {
    pub u: CMatrix,
    pub absval: CMatrix,
}

fn check_size(a: &CMatrix) -> MatResult<()> {
    let n = a.rows().max(a.cols());
    if n > MAX_DIM {
        return Err(MatError::TooLarge(n));
    }
    if !a.is_finite() {
        let pos = a
            .as_slice()
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
            .unwrap_or(0);
        return Err(MatError::NonFinite {
            row: pos / a.cols(),
            col: pos % a.cols(),
        });
    }
    Ok(())
}

fn dot_conj(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

fn norm_sqr(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// Singular value decomposition by one-sided Jacobi rotations.
///
/// Columns of a working copy of `A` are pairwise orthogonalized; the
/// accumulated rotations form `V`, the final column norms are the singular
/// values and the normalized columns form `U`. Columns belonging to zero
/// singular values are completed to an orthonormal basis so `u` is always
/// unitary.
pub fn svd(a: &CMatrix) -> MatResult<SvdResult> {
    check_size(a)?;
    if a.rows() < a.cols() {
        let t = svd(&a.adjoint())?;
        return Ok(SvdResult {
            u: t.vstar.adjoint(),
            sigma: t.sigma,
            vstar: t.u.adjoint(),
        });
    }
    let m = a.rows();
    let n = a.cols();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    let mut vcols: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = vec![C64::new(0.0, 0.0); n];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();

    let eps = f64::EPSILON;
    // rounding leaves |γ| at a few ulps of √(αβ) after a rotation
    let orth_tol = 4.0 * eps * (m as f64).sqrt().max(1.0);
    let max_sweeps = SWEEPS_PER_DIM * n.max(1);
    let mut converged = n < 2;
    let mut sweeps = 0;
    while !converged && sweeps < max_sweeps {
        sweeps += 1;
        let mut rotated = false;
        for i in 0..n - 1 {
            for j in i + 1..n {
                let alpha = norm_sqr(&cols[i]);
                let beta = norm_sqr(&cols[j]);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = dot_conj(&cols[i], &cols[j]);
                let g = gamma.norm();
                if g <= orth_tol * (alpha * beta).sqrt() || g < f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut cols, i, j, c, s, phase);
                rotate_pair(&mut vcols, i, j, c, s, phase);
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(MatError::NoConvergence {
            algorithm: "one-sided Jacobi SVD",
            sweeps,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = cols.iter().map(|c| norm_sqr(c).sqrt()).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let sigma: Vec<f64> = order.iter().map(|&k| norms[k]).collect();
    let sigma_max = sigma.first().copied().unwrap_or(0.0);
    let cutoff = sigma_max * (m as f64) * eps;

    let mut u = CMatrix::zeros(m, m);
    let mut filled: Vec<Vec<C64>> = Vec::with_capacity(m);
    for (slot, &k) in order.iter().enumerate() {
        let s = norms[k];
        if s > cutoff && s > 0.0 {
            let col: Vec<C64> = cols[k].iter().map(|z| z / s).collect();
            u.set_column(slot, &col);
            filled.push(col);
        } else {
            let col = complete_orthonormal(&filled, m);
            u.set_column(slot, &col);
            filled.push(col);
        }
    }
    for slot in n..m {
        let col = complete_orthonormal(&filled, m);
        u.set_column(slot, &col);
        filled.push(col);
    }

    let mut vstar = CMatrix::zeros(n, n);
    for (slot, &k) in order.iter().enumerate() {
        for (r, z) in vcols[k].iter().enumerate() {
            vstar[(slot, r)] = z.conj();
        }
    }
    let mut sigma_full = sigma;
    sigma_full.truncate(n);
    Ok(SvdResult {
        u: if m == n { u } else { take_columns(&u, n) },
        sigma: sigma_full,
        vstar,
    })
}

fn take_columns(u: &CMatrix, n: usize) -> CMatrix {
    let mut out = CMatrix::zeros(u.rows(), n);
    for i in 0..u.rows() {
        for j in 0..n {
            out[(i, j)] = u[(i, j)];
        }
    }
    out
}

/// Applies the 2×2 unitary rotation to columns `i`, `j`:
/// `x ← c·x − s·conj(φ)·y`, `y ← s·φ·x + c·y`.
fn rotate_pair(cols: &mut [Vec<C64>], i: usize, j: usize, c: f64, s: f64, phase: C64) {
    let (left, right) = cols.split_at_mut(j);
    let x = &mut left[i];
    let y = &mut right[0];
    let pc = phase.conj();
    for (xi, yi) in x.iter_mut().zip(y.iter_mut()) {
        let a = *xi;
        let b = *yi;
        *xi = a * c - pc * b * s;
        *yi = phase * a * s + b * c;
    }
}

/// Unit vector orthogonal to every vector in `basis` (Gram–Schmidt over the
/// standard basis, two passes).
fn complete_orthonormal(basis: &[Vec<C64>], m: usize) -> Vec<C64> {
    let mut best: Option<(f64, Vec<C64>)> = None;
    for k in 0..m {
        let mut v = vec![C64::new(0.0, 0.0); m];
        v[k] = C64::new(1.0, 0.0);
        for _ in 0..2 {
            for b in basis {
                let proj = dot_conj(b, &v);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= proj * bi;
                }
            }
        }
        let nv = norm_sqr(&v).sqrt();
        if best.as_ref().is_none_or(|(bn, _)| nv > *bn) {
            best = Some((nv, v));
        }
        if nv > 0.5 {
            break;
        }
    }
    let (nv, v) = best.expect("completion needs m >= 1");
    v.into_iter().map(|z| z / nv).collect()
}

/// Singular values, non-increasing.
pub fn singular_values(a: &CMatrix) -> MatResult<Vec<f64>> {
    Ok(svd(a)?.sigma)
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the unitary matrix whose
/// columns are the matching eigenvectors.
pub fn eigh(a: &CMatrix) -> MatResult<(Vec<f64>, CMatrix)> {
    check_size(a)?;
    a.require_square()?;
    let n = a.rows();
    let scale = a.hs_norm().max(1.0);
    let defect = a.hermitian_defect();
    if defect > DOMAIN_REL_TOL * scale {
        return Err(MatError::NotHermitian { asymmetry: defect });
    }
    let mut m = a.hermitian_part()?;
    let mut v = CMatrix::identity(n);
    let total = m.hs_norm();
    let threshold = (f64::EPSILON * total).powi(2);

    let max_sweeps = SWEEPS_PER_DIM * n.max(1);
    let mut sweeps = 0;
    loop {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| m[(p, q)].norm_sqr())
            .sum();
        if off <= threshold || off == 0.0 {
            break;
        }
        if sweeps >= max_sweeps {
            return Err(MatError::NoConvergence {
                algorithm: "Hermitian Jacobi eigensolver",
                sweeps,
            });
        }
        sweeps += 1;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let g = apq.norm();
                if g < f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / g;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (2.0 * g);
                let t = if tau >= 0.0 { 1.0 } else { -1.0 } / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // G = D·R with D = diag(1, conj(phase)) on (p, q)
                let pc = phase.conj();
                let g_pp = C64::new(c, 0.0);
                let g_pq = C64::new(s, 0.0);
                let g_qp = -pc * s;
                let g_qq = pc * c;
                // columns: M ← M·G
                for k in 0..n {
                    let mp = m[(k, p)];
                    let mq = m[(k, q)];
                    m[(k, p)] = mp * g_pp + mq * g_qp;
                    m[(k, q)] = mp * g_pq + mq * g_qq;
                    let vp = v[(k, p)];
                    let vq = v[(k, q)];
                    v[(k, p)] = vp * g_pp + vq * g_qp;
                    v[(k, q)] = vp * g_pq + vq * g_qq;
                }
                // rows: M ← G*·M
                for k in 0..n {
                    let mp = m[(p, k)];
                    let mq = m[(q, k)];
                    m[(p, k)] = g_pp.conj() * mp + g_qp.conj() * mq;
                    m[(q, k)] = g_pq.conj() * mp + g_qq.conj() * mq;
                }
                m[(p, q)] = C64::new(0.0, 0.0);
                m[(q, p)] = C64::new(0.0, 0.0);
                m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[(x, x)].re.total_cmp(&m[(y, y)].re));
    let values = order.iter().map(|&k| m[(k, k)].re).collect();
    let mut vecs = CMatrix::zeros(n, n);
    for (slot, &k) in order.iter().enumerate() {
        for i in 0..n {
            vecs[(i, slot)] = v[(i, k)];
        }
    }
    Ok((values, vecs))
}

/// `V · diag(values) · V*`, Hermitized.
fn spectral_synthesis(vecs: &CMatrix, values: &[C64]) -> CMatrix {
    let n = vecs.rows();
    let mut scaled = vecs.clone();
    for j in 0..n {
        for i in 0..n {
            scaled[(i, j)] *= values[j];
        }
    }
    &scaled * &vecs.adjoint()
}

/// Polar decomposition `A = U|A|` from the SVD `A = W Σ V*`:
/// `U = W V*` (a unitary completion of the partial isometry) and
/// `|A| = V Σ V*`.
pub fn polar(a: &CMatrix) -> MatResult<PolarResult> {
    a.require_square()?;
    let s = svd(a)?;
    let u = &s.u * &s.vstar;
    let absval = abs_from_svd(&s);
    Ok(PolarResult { u, absval })
}

fn abs_from_svd(s: &SvdResult) -> CMatrix {
    let v = s.vstar.adjoint();
    let values: Vec<C64> = s.sigma.iter().map(|&x| C64::new(x, 0.0)).collect();
    let p = spectral_synthesis(&v, &values);
    p.hermitian_part().expect("square by construction")
}

/// `|A| = (A*A)^{1/2}`.
pub fn matabs(a: &CMatrix) -> MatResult<CMatrix> {
    a.require_square()?;
    Ok(abs_from_svd(&svd(a)?))
}

/// Complex power of a Hermitian PSD matrix, `λ ↦ exp(w·ln λ)` on the
/// spectrum with eigenvalues at or below `1e-12·λ_max` sent to zero.
pub fn psd_power(a: &CMatrix, w: C64) -> MatResult<CMatrix> {
    let (values, vecs) = eigh(a)?;
    let lambda_max = values.iter().fold(0.0_f64, |m, &x| m.max(x.abs()));
    let min = values.first().copied().unwrap_or(0.0);
    if min < -DOMAIN_REL_TOL * lambda_max.max(1.0) {
        return Err(MatError::NotPsd { min_eigenvalue: min });
    }
    let cutoff = EIG_ZERO_REL * lambda_max;
    let powered: Vec<C64> = values
        .iter()
        .map(|&lam| {
            if lam <= cutoff {
                C64::new(0.0, 0.0)
            } else {
                (w * lam.ln()).exp()
            }
        })
        .collect();
    Ok(spectral_synthesis(&vecs, &powered))
}

/// Real power of a PSD matrix.
pub fn psd_power_real(a: &CMatrix, s: f64) -> MatResult<CMatrix> {
    psd_power(a, C64::new(s, 0.0))
}

/// Schatten norm from singular values: `(Σ σᵖ)^{1/p}`, or `σ₁` at `p = ∞`.
pub fn schatten_from_singular(sigma: &[f64], p: ExponentP) -> f64 {
    if p.is_infinite() {
        return sigma.iter().fold(0.0, |m, &s| m.max(s));
    }
    let top = sigma.iter().fold(0.0, |m: f64, &s| m.max(s));
    if top == 0.0 {
        return 0.0;
    }
    top * schatten_pow_from_singular_scaled(sigma, p.value(), top).powf(1.0 / p.value())
}

/// `Σ (σᵢ/scale)ᵖ` for finite `p`.
pub(crate) fn schatten_pow_from_singular_scaled(sigma: &[f64], p: f64, scale: f64) -> f64 {
    sigma.iter().filter(|&&s| s > 0.0).map(|&s| (s / scale).powf(p)).sum()
}

pub fn schatten_norm(a: &CMatrix, p: ExponentP) -> MatResult<f64> {
    a.require_square()?;
    Ok(schatten_from_singular(&svd(a)?.sigma, p))
}

/// Operator (spectral) norm.
pub fn operator_norm(a: &CMatrix) -> MatResult<f64> {
    Ok(svd(a)?.sigma.first().copied().unwrap_or(0.0))
}



#[cfg(test)]
mod proptests {
    use super::test_support::ginibre;
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn schatten_invariant_under_adjoint_and_abs(seed in any::<u64>(), n in 1usize..6, pv in 1.0f64..8.0) {
            let a = ginibre(n, n, seed);
            let p = ExponentP::new(pv).unwrap();
            let base = schatten_norm(&a, p).unwrap();
            let adj = schatten_norm(&a.adjoint(), p).unwrap();
            let abs = schatten_norm(&matabs(&a).unwrap(), p).unwrap();
            prop_assert!((base - adj).abs() <= 1e-10 * base.max(1.0));
            prop_assert!((base - abs).abs() <= 1e-10 * base.max(1.0));
        }

        #[test]
        fn schatten_monotone_in_p(seed in any::<u64>(), n in 1usize..6, p1 in 1.0f64..6.0, dp in 0.0f64..4.0) {
            let a = ginibre(n, n, seed);
            let lo = schatten_norm(&a, ExponentP::new(p1).unwrap()).unwrap();
            let hi = schatten_norm(&a, ExponentP::new(p1 + dp).unwrap()).unwrap();
            let inf = schatten_norm(&a, ExponentP::INFINITY).unwrap();
            prop_assert!(hi <= lo * (1.0 + 1e-12));
            prop_assert!(inf <= hi * (1.0 + 1e-12));
        }

        #[test]
        fn polar_reconstructs(seed in any::<u64>(), n in 1usize..=16) {
            let a = ginibre(n, n, seed);
            let pr = polar(&a).unwrap();
            let resid = (&(&pr.u * &pr.absval) - &a).hs_norm();
            prop_assert!(resid <= 1e-10 * a.hs_norm().max(1.0));
        }
    }
}
