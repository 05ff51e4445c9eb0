//! Dense complex matrix kernels.
//!
//! Everything here works on small (at most 27x27) dense matrices, so the
//! algorithms favour accuracy over asymptotics: cyclic Jacobi for Hermitian
//! eigenproblems, one-sided Jacobi for singular values and a shifted
//! Hessenberg QR iteration for general eigenvalues.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

const MAX_JACOBI_SWEEPS: usize = 80;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                left: data.len(),
                right: rows * cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::from_vec(rows, cols, entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// `|v><v|` for a column vector `v`.
    pub fn outer(v: &[C64]) -> Self {
        Self::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[C64]) {
        for (i, &x) in col.iter().enumerate() {
            self[(i, j)] = x;
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Entrywise complex conjugate in the computational basis.
    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// `self += s * other`
    pub fn axpy(&mut self, s: C64, other: &CMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (r, c) = (other.rows, other.cols);
        CMatrix::from_fn(self.rows * r, self.cols * c, |i, j| {
            self[(i / r, j / c)] * other[(i % r, j % c)]
        })
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |H - H^dagger|` over entries.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// `max |Y - Y^T|` over entries.
    pub fn symmetric_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)]).norm());
            }
        }
        dev
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs)
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        let mut out = self.clone();
        out.axpy(ONE, rhs);
        out
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        let mut out = self.clone();
        out.axpy(-ONE, rhs);
        out
    }
}

/// Default symmetry/positivity tolerance for a matrix: `1e-10 * (max-norm + 1)`.
pub fn default_tol(m: &CMatrix) -> f64 {
    1e-10 * (m.max_norm() + 1.0)
}

/// Eigendecomposition `H = Q diag(values) Q^dagger`, values ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    /// Rebuilds `Q diag(f(values)) Q^dagger`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let q = &self.vectors;
        let n = q.rows();
        let weights: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        CMatrix::from_fn(n, n, |i, j| {
            let mut acc = ZERO;
            for (k, &w) in weights.iter().enumerate() {
                if w != 0.0 {
                    acc += q[(i, k)] * q[(j, k)].conj() * w;
                }
            }
            acc
        })
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
pub fn hermitian_eig(h: &CMatrix, tol: f64) -> Result<HermitianEigen> {
    h.require_square()?;
    let deviation = h.hermitian_deviation();
    if deviation > tol {
        return Err(Error::NotHermitian { deviation });
    }
    let n = h.rows();
    // Work on the exactly Hermitian part.
    let mut a = CMatrix::from_fn(n, n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * 0.5);
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_norm();
    if scale == 0.0 {
        return Ok(HermitianEigen {
            values: vec![0.0; n],
            vectors: v,
        });
    }

    let mut converged = false;
    for _ in 0..MAX_JACOBI_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-18 * scale {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let phase = apq / mag;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // U = [[c, s e^{i phi}], [-s e^{-i phi}, c]] on (p, q).
                let u_pq = phase * s;
                let u_qp = -phase.conj() * s;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c + akq * u_qp;
                    a[(k, q)] = akp * u_pq + akq * c;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c + aqk * u_qp.conj();
                    a[(q, k)] = apk * u_pq.conj() + aqk * c;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c + vkq * u_qp;
                    v[(k, q)] = vkp * u_pq + vkq * c;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence("Hermitian Jacobi eigensolver"));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// Principal square root of a PSD matrix; eigenvalues in `[-tol, 0)` are clamped to 0.
pub fn psd_sqrt(h: &CMatrix, tol: f64) -> Result<CMatrix> {
    let eig = hermitian_eig(h, tol)?;
    if let Some(&min) = eig.values.first() {
        if min < -tol {
            return Err(Error::NotPsd { eigenvalue: min });
        }
    }
    Ok(eig.reconstruct_with(|x| x.max(0.0).sqrt()))
}

/// Square root restricted to the numerical support: eigenvalues `<= tol` are dropped.
///
/// Used where the square root feeds a spectrum: eigensolver noise on an exact
/// zero eigenvalue would otherwise surface as `sqrt(1e-17) ~ 3e-9`.
pub fn psd_sqrt_support(h: &CMatrix, tol: f64) -> Result<CMatrix> {
    let eig = hermitian_eig(h, tol)?;
    if let Some(&min) = eig.values.first() {
        if min < -tol {
            return Err(Error::NotPsd { eigenvalue: min });
        }
    }
    Ok(eig.reconstruct_with(|x| if x <= tol { 0.0 } else { x.sqrt() }))
}

/// Singular values (descending) by one-sided Jacobi orthogonalisation.
///
/// Absolute accuracy is about `eps * ||A||`, including for zero singular values.
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    let (m, n) = (a.rows(), a.cols());
    // column-major working copy: column j is cols[j*m..(j+1)*m]
    let mut cols: Vec<C64> = (0..n).flat_map(|j| (0..m).map(move |i| (i, j))).map(|(i, j)| a[(i, j)]).collect();
    let mut converged = n < 2;
    let rel = 4.0 * m.max(1) as f64 * f64::EPSILON;
    // Columns below this norm cannot move any singular value by more than eps * ||A||.
    let negligible = (1e-18 * a.frobenius_norm()).powi(2);
    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (head, tail) = cols.split_at_mut(q * m);
                let cp = &mut head[p * m..(p + 1) * m];
                let cq = &mut tail[..m];
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = ZERO;
                for (x, y) in cp.iter().zip(cq.iter()) {
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                let g = gamma.norm();
                if g == 0.0 || alpha <= negligible || beta <= negligible || g <= rel * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase_conj = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let xv = *x;
                    let yv = *y * phase_conj;
                    *x = xv * c - yv * s;
                    *y = xv * s + yv * c;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence("one-sided Jacobi SVD"));
    }
    let mut sv: Vec<f64> = cols
        .chunks(m.max(1))
        .take(n)
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv.truncate(m.min(n));
    Ok(sv)
}

/// Eigenvalues of a general complex square matrix, sorted by descending real part.
///
/// Householder reduction to Hessenberg form followed by single-shift QR with
/// Wilkinson shifts and deflation.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<C64>> {
    a.require_square()?;
    let n = a.rows();
    let mut h = hessenberg(a);
    let norm = h.frobenius_norm();
    let mut out = vec![ZERO; n];
    if n == 0 {
        return Ok(out);
    }
    let eps = f64::EPSILON;
    let mut hi = n - 1;
    let mut iter = 0usize;
    let max_iter = 100 * n.max(1);
    let mut total = 0usize;
    loop {
        if hi == 0 {
            out[0] = h[(0, 0)];
            break;
        }
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let diag = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if sub <= eps * diag.max(1e-6 * norm) {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            out[hi] = h[(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > max_iter {
            return Err(Error::NoConvergence("Hessenberg QR"));
        }
        let mu = if iter % 11 == 10 {
            h[(hi, hi)] + h[(hi, hi - 1)].norm() * 0.75
        } else {
            let (pa, pb) = (h[(hi - 1, hi - 1)], h[(hi - 1, hi)]);
            let (pc, pd) = (h[(hi, hi - 1)], h[(hi, hi)]);
            let mean = (pa + pd) * 0.5;
            let disc = (((pa - pd) * 0.5).powi(2) + pb * pc).sqrt();
            let (m1, m2) = (mean + disc, mean - disc);
            if (m1 - pd).norm() <= (m2 - pd).norm() {
                m1
            } else {
                m2
            }
        };
        qr_step(&mut h, l, hi, mu);
    }
    out.sort_by(|x, y| y.re.total_cmp(&x.re));
    Ok(out)
}

fn hessenberg(a: &CMatrix) -> CMatrix {
    let n = a.rows();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { ONE };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // H <- (I - 2 v v^dagger) H (I - 2 v v^dagger), v living on rows k+1..n
        for j in 0..n {
            let dot: C64 = v
                .iter()
                .enumerate()
                .map(|(r, vr)| vr.conj() * h[(k + 1 + r, j)])
                .sum();
            for (r, vr) in v.iter().enumerate() {
                h[(k + 1 + r, j)] -= vr * dot * 2.0;
            }
        }
        for i in 0..n {
            let dot: C64 = v
                .iter()
                .enumerate()
                .map(|(r, vr)| h[(i, k + 1 + r)] * vr)
                .sum();
            for (r, vr) in v.iter().enumerate() {
                h[(i, k + 1 + r)] -= dot * vr.conj() * 2.0;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    h
}

/// One explicitly shifted QR sweep on the active block `lo..=hi`.
fn qr_step(h: &mut CMatrix, lo: usize, hi: usize, mu: C64) {
    for i in lo..=hi {
        h[(i, i)] -= mu;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        for j in k..=hi {
            let (x, y) = (h[(k, j)], h[(k + 1, j)]);
            h[(k, j)] = x * c + s * y;
            h[(k + 1, j)] = -s.conj() * x + y * c;
        }
        rotations.push((c, s));
    }
    for (offset, &(c, s)) in rotations.iter().enumerate() {
        let k = lo + offset;
        for i in lo..=(k + 2).min(hi) {
            let (x, y) = (h[(i, k)], h[(i, k + 1)]);
            h[(i, k)] = x * c + y * s.conj();
            h[(i, k + 1)] = -x * s + y * c;
        }
    }
    for i in lo..=hi {
        h[(i, i)] += mu;
    }
}

/// Rotation `[[c, s], [-conj(s), c]]` (real `c`) mapping `(x, y)` to `(r, 0)`.
fn givens(x: C64, y: C64) -> (f64, C64) {
    let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
    if r == 0.0 {
        return (1.0, ZERO);
    }
    let ax = x.norm();
    if ax == 0.0 {
        return (0.0, y.conj() / y.norm());
    }
    let c = ax / r;
    let s = (x / ax) * y.conj() / r;
    (c, s)
}

/// Takagi factorisation `Y = V diag(d) V^T` of a complex symmetric matrix.
#[derive(Debug, Clone)]
pub struct Takagi {
    pub vectors: CMatrix,
    /// Nonnegative, descending; equal to the singular values of `Y`.
    pub values: Vec<f64>,
}

impl Takagi {
    pub fn reconstruct(&self) -> CMatrix {
        let v = &self.vectors;
        let n = v.rows();
        CMatrix::from_fn(n, n, |i, j| {
            let mut acc = ZERO;
            for (k, &d) in self.values.iter().enumerate() {
                if d != 0.0 {
                    acc += v[(i, k)] * v[(j, k)] * d;
                }
            }
            acc
        })
    }
}

/// Takagi factorisation through the real symmetric embedding
/// `M = [[Re Y, Im Y], [Im Y, -Re Y]]`.
///
/// `M` has spectrum `{+d_i, -d_i}`; an eigenvector `(x, y)` for `+d_i` gives the
/// Takagi vector `x + i y`, which satisfies `Y conj(v) = d_i v`.
pub fn takagi(y: &CMatrix, tol: f64) -> Result<Takagi> {
    y.require_square()?;
    let deviation = y.symmetric_deviation();
    if deviation > tol {
        return Err(Error::NotSymmetric { deviation });
    }
    let n = y.rows();
    let sym = CMatrix::from_fn(n, n, |i, j| (y[(i, j)] + y[(j, i)]) * 0.5);
    let embed = CMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = sym[(i % n, j % n)];
        let v = match (i < n, j < n) {
            (true, true) => z.re,
            (false, false) => -z.re,
            _ => z.im,
        };
        C64::new(v, 0.0)
    });
    let eig = hermitian_eig(&embed, f64::INFINITY)?;
    let top = eig.values.last().copied().unwrap_or(0.0).max(0.0);
    let cutoff = 1e-10 * top.max(f64::MIN_POSITIVE);

    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for idx in (0..2 * n).rev() {
        if columns.len() == n {
            break;
        }
        let lam = eig.values[idx];
        if lam <= cutoff {
            break;
        }
        let mut v: Vec<C64> = (0..n)
            .map(|i| C64::new(eig.vectors[(i, idx)].re, eig.vectors[(n + i, idx)].re))
            .collect();
        if orthogonalize(&mut v, &columns) > 1e-6 {
            columns.push(v);
            values.push(lam);
        }
    }
    // Complete with the orthogonal complement; those directions carry d = 0.
    while columns.len() < n {
        let mut best: Option<Vec<C64>> = None;
        let mut best_norm = 0.0;
        for e in 0..n {
            let mut v = vec![ZERO; n];
            v[e] = ONE;
            let r = orthogonalize(&mut v, &columns);
            if r > best_norm {
                best_norm = r;
                best = Some(v);
            }
        }
        match best {
            Some(v) => {
                columns.push(v);
                values.push(0.0);
            }
            None => return Err(Error::NoConvergence("Takagi completion")),
        }
    }
    let mut vectors = CMatrix::zeros(n, n);
    for (j, col) in columns.iter().enumerate() {
        vectors.set_column(j, col);
    }
    Ok(Takagi { vectors, values })
}

/// Two-pass Gram-Schmidt against orthonormal `basis`; normalises `v` and
/// returns the residual norm before normalisation.
fn orthogonalize(v: &mut [C64], basis: &[Vec<C64>]) -> f64 {
    for _ in 0..2 {
        for b in basis {
            let dot: C64 = b.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= dot * bi;
            }
        }
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for z in v.iter_mut() {
            *z /= norm;
        }
    }
    norm
}
