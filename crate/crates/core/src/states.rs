//! Quantum states with explicit subsystem structure.
//!
//! Subsystem 0 is the leftmost tensor factor: the basis index of `|i j k>` on
//! dims `[d1, d2, d3]` is `i*d2*d3 + j*d3 + k`. Complex conjugation is always
//! entrywise in this computational basis.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::numerics::{hermitian_eig, CMatrix, C64, ONE, ZERO};

/// Norm tolerance for pure states and trace tolerance for density matrices.
pub const NORM_TOL: f64 = 1e-10;
/// Smallest admissible density-matrix eigenvalue.
pub const PSD_TOL: f64 = 1e-9;
/// Reconstruction tolerance for decompositions.
pub const DECOMPOSITION_TOL: f64 = 1e-9;
/// Eigenvalues at or below this are outside the support of a state.
pub const RANK_TOL: f64 = 1e-12;

fn check_dims(dims: &[usize], len: usize) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidState(format!("bad subsystem dimensions {dims:?}")));
    }
    let total: usize = dims.iter().product();
    if total != len {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: len,
        });
    }
    Ok(())
}

/// Mixed-radix digits of a basis index, most significant (subsystem 0) first.
fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

fn compose(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

fn normalize_subsystems(sel: &[usize], parties: usize) -> Result<Vec<usize>> {
    let mut out = sel.to_vec();
    out.sort_unstable();
    out.dedup();
    if let Some(&bad) = out.iter().find(|&&i| i >= parties) {
        return Err(Error::BadSubsystemIndex {
            index: bad,
            parties,
        });
    }
    Ok(out)
}

/// Unit-norm state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
    dims: Vec<usize>,
}

impl PureState {
    /// Validates that the vector has unit norm and matches `dims`.
    pub fn new(amplitudes: Vec<C64>, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, amplitudes.len())?;
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq.sqrt() - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("norm {} != 1", norm_sq.sqrt())));
        }
        Ok(Self { amplitudes, dims })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(mut amplitudes: Vec<C64>, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, amplitudes.len())?;
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState(format!("cannot normalise vector of norm {norm}")));
        }
        for z in amplitudes.iter_mut() {
            *z /= norm;
        }
        Ok(Self { amplitudes, dims })
    }

    /// Tensor product of local vectors (each normalised first).
    pub fn product(factors: &[Vec<C64>]) -> Result<Self> {
        let mut amps = vec![ONE];
        let mut dims = Vec::with_capacity(factors.len());
        for f in factors {
            let local = Self::normalized(f.clone(), vec![f.len()])?;
            amps = amps
                .iter()
                .flat_map(|&a| local.amplitudes.iter().map(move |&b| a * b))
                .collect();
            dims.push(f.len());
        }
        Self::new(amps, dims)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// `|psi*>` in the computational basis.
    pub fn conj(&self) -> Vec<C64> {
        self.amplitudes.iter().map(|z| z.conj()).collect()
    }

    /// `<psi| A |phi>` for a vector `phi`.
    pub fn braket(&self, op: &CMatrix, phi: &[C64]) -> C64 {
        self.amplitudes
            .iter()
            .zip(op.mul_vec(phi))
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: CMatrix::outer(&self.amplitudes),
            dims: self.dims.clone(),
        }
    }

    /// Reduced state on the `keep` subsystems.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        self.projector().partial_trace(keep)
    }

    /// Multiplies by a global phase so that the largest amplitude is real positive.
    pub fn canonical_phase(&self) -> Vec<C64> {
        let pivot = self
            .amplitudes
            .iter()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap_or(ONE);
        let phase = if pivot.norm() > 0.0 { pivot.conj() / pivot.norm() } else { ONE };
        self.amplitudes.iter().map(|&z| z * phase).collect()
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-10), unit trace (1e-10) and positivity (eigenvalues >= -1e-9).
    pub fn new(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NonSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        check_dims(&dims, matrix.rows())?;
        let deviation = matrix.hermitian_deviation();
        if deviation > NORM_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > NORM_TOL {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let eig = hermitian_eig(&matrix, NORM_TOL)?;
        if let Some(&min) = eig.values.first() {
            if min < -PSD_TOL {
                return Err(Error::NotPsd { eigenvalue: min });
            }
        }
        Ok(Self { matrix, dims })
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let d: usize = dims.iter().product();
        check_dims(&dims, d)?;
        Ok(Self {
            matrix: CMatrix::identity(d).scale_real(1.0 / d as f64),
            dims,
        })
    }

    /// Convex combination `sum_i w_i |psi_i><psi_i|`; weights are renormalised.
    pub fn mixture(members: &[(f64, PureState)]) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::InvalidState("empty mixture".into()))?;
        let dims = first.1.dims().to_vec();
        let total: f64 = members.iter().map(|(w, _)| *w).sum();
        if members.iter().any(|(w, _)| *w < 0.0) || total <= 0.0 {
            return Err(Error::InvalidState("mixture weights must be nonnegative".into()));
        }
        let d = first.1.dim();
        let mut m = CMatrix::zeros(d, d);
        for (w, psi) in members {
            if psi.dims() != dims.as_slice() {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: psi.dim(),
                });
            }
            m.axpy(C64::new(w / total, 0.0), &CMatrix::outer(psi.amplitudes()));
        }
        Self::new(m, dims)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    /// `rho*` in the computational basis.
    pub fn conj(&self) -> CMatrix {
        self.matrix.conj()
    }

    pub fn purity(&self) -> f64 {
        self.matrix.matmul(&self.matrix).trace().re
    }

    /// Eigenpairs of the state with eigenvalue above [`RANK_TOL`], largest first.
    pub fn support(&self) -> Result<Vec<(f64, Vec<C64>)>> {
        let eig = hermitian_eig(&self.matrix, NORM_TOL)?;
        Ok((0..self.dim())
            .rev()
            .filter(|&j| eig.values[j] > RANK_TOL)
            .map(|j| (eig.values[j], eig.vectors.column(j)))
            .collect())
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.support()?.len())
    }

    /// Reduced state over the `keep` subsystems (in ascending order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let parties = self.parties();
        let keep = normalize_subsystems(keep, parties)?;
        if keep.is_empty() {
            return Err(Error::InvalidState("partial trace must keep a subsystem".into()));
        }
        let kept_dims: Vec<usize> = keep.iter().map(|&i| self.dims[i]).collect();
        let traced: Vec<usize> = (0..parties).filter(|i| !keep.contains(i)).collect();
        let d_out: usize = kept_dims.iter().product();
        let mut out = CMatrix::zeros(d_out, d_out);
        let d = self.dim();
        let split: Vec<Vec<usize>> = (0..d).map(|i| digits(i, &self.dims)).collect();
        let kept_index = |dig: &[usize]| {
            keep.iter()
                .zip(&kept_dims)
                .fold(0, |acc, (&s, &dd)| acc * dd + dig[s])
        };
        for i in 0..d {
            for j in 0..d {
                if traced.iter().all(|&t| split[i][t] == split[j][t]) {
                    out[(kept_index(&split[i]), kept_index(&split[j]))] += self.matrix[(i, j)];
                }
            }
        }
        Ok(DensityMatrix {
            matrix: out,
            dims: kept_dims,
        })
    }

    /// Transpose on the `part` subsystems. The result need not be PSD.
    pub fn partial_transpose(&self, part: &[usize]) -> Result<CMatrix> {
        let part = normalize_subsystems(part, self.parties())?;
        let d = self.dim();
        let mut out = CMatrix::zeros(d, d);
        for i in 0..d {
            let di = digits(i, &self.dims);
            for j in 0..d {
                let dj = digits(j, &self.dims);
                let (mut si, mut sj) = (di.clone(), dj.clone());
                for &p in &part {
                    si[p] = dj[p];
                    sj[p] = di[p];
                }
                out[(i, j)] = self.matrix[(compose(&si, &self.dims), compose(&sj, &self.dims))];
            }
        }
        Ok(out)
    }

    /// `p * rho + (1 - p) * I / d`.
    pub fn white_noise_mix(&self, p: f64) -> Result<DensityMatrix> {
        white_noise_mix(self, p)
    }
}

/// `p * rho + (1 - p) * I / d` with `d` the total dimension.
pub fn white_noise_mix(rho: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let d = rho.dim();
    let mut m = rho.matrix.scale_real(p);
    let noise = (1.0 - p) / d as f64;
    for i in 0..d {
        m[(i, i)] += noise;
    }
    Ok(DensityMatrix {
        matrix: m,
        dims: rho.dims.clone(),
    })
}

fn basis_state(dims: &[usize], entries: &[(usize, f64)]) -> PureState {
    let d: usize = dims.iter().product();
    let mut amps = vec![ZERO; d];
    for &(i, a) in entries {
        amps[i] = C64::new(a, 0.0);
    }
    PureState::normalized(amps, dims.to_vec()).expect("nonzero basis combination")
}

/// `(|000> + |111>)/sqrt(2)`.
pub fn ghz_state() -> PureState {
    basis_state(&[2, 2, 2], &[(0, FRAC_1_SQRT_2), (7, FRAC_1_SQRT_2)])
}

/// `(|001> + |010> + |100>)/sqrt(3)`.
pub fn w_state() -> PureState {
    let a = 1.0 / 3f64.sqrt();
    basis_state(&[2, 2, 2], &[(1, a), (2, a), (4, a)])
}

/// `(|00> + |11>)/sqrt(2)`.
pub fn bell_state() -> PureState {
    basis_state(&[2, 2], &[(0, FRAC_1_SQRT_2), (3, FRAC_1_SQRT_2)])
}

/// `sum_i |ii> / sqrt(d)` on `d x d`.
pub fn maximally_entangled(d: usize) -> PureState {
    let a = 1.0 / (d as f64).sqrt();
    let entries: Vec<(usize, f64)> = (0..d).map(|i| (i * d + i, a)).collect();
    basis_state(&[d, d], &entries)
}

/// GHZ projector mixed with white noise.
pub fn ghz_noise(p: f64) -> Result<DensityMatrix> {
    white_noise_mix(&ghz_state().projector(), p)
}

/// W projector mixed with white noise.
pub fn w_noise(p: f64) -> Result<DensityMatrix> {
    white_noise_mix(&w_state().projector(), p)
}

/// Two-qubit Werner state `p |Bell><Bell| + (1 - p) I/4`.
pub fn werner(p: f64) -> Result<DensityMatrix> {
    white_noise_mix(&bell_state().projector(), p)
}

/// P. Horodecki's 3x3 family of PPT entangled states, `0 <= a <= 1`.
pub fn horodecki_state(a: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::OutOfRange {
            name: "a",
            value: a,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let mut m = [[0.0f64; 9]; 9];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = a;
    }
    for (i, j) in [(0, 4), (0, 8), (4, 8)] {
        m[i][j] = a;
        m[j][i] = a;
    }
    m[6][6] = (1.0 + a) / 2.0;
    m[8][8] = (1.0 + a) / 2.0;
    let off = (1.0 - a * a).sqrt() / 2.0;
    m[6][8] = off;
    m[8][6] = off;
    let norm = 8.0 * a + 1.0;
    let matrix = CMatrix::from_fn(9, 9, |i, j| C64::new(m[i][j] / norm, 0.0));
    DensityMatrix::new(matrix, vec![3, 3])
}

fn gaussian_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        })
        .collect()
}

/// Haar-random pure state (normalised complex Gaussian vector).
pub fn random_pure(dims: &[usize], seed: u64) -> Result<PureState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d: usize = dims.iter().product();
    PureState::normalized(gaussian_vector(d, &mut rng), dims.to_vec())
}

/// `A A^dagger / Tr(A A^dagger)` with `A` a `d x rank` complex Gaussian matrix.
pub fn random_density(dims: &[usize], rank: usize, seed: u64) -> Result<DensityMatrix> {
    if rank == 0 {
        return Err(Error::SizeTooSmall { size: 0, rank: 1 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d: usize = dims.iter().product();
    let a = CMatrix::from_vec(d, rank, gaussian_vector(d * rank, &mut rng))?;
    let m = a.matmul(&a.adjoint());
    let tr = m.trace().re;
    let mut m = m.scale_real(1.0 / tr);
    for i in 0..d {
        m[(i, i)] = C64::new(m[(i, i)].re, 0.0);
    }
    DensityMatrix::new(m, dims.to_vec())
}

/// Product of independent Haar-random local pure states.
pub fn random_product_state(dims: &[usize], seed: u64) -> Result<PureState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let factors: Vec<Vec<C64>> = dims.iter().map(|&d| gaussian_vector(d, &mut rng)).collect();
    PureState::product(&factors)
}

/// Random convex combination of `terms` random product states (fully separable).
pub fn random_separable(dims: &[usize], terms: usize, seed: u64) -> Result<DensityMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let members: Vec<(f64, PureState)> = (0..terms.max(1))
        .map(|_| {
            let w: f64 = rng.random_range(0.05..1.0);
            let s = rng.random::<u64>();
            random_product_state(dims, s).map(|psi| (w, psi))
        })
        .collect::<Result<_>>()?;
    DensityMatrix::mixture(&members)
}

/// Haar-random `n x n` unitary (Gram-Schmidt on Gaussian columns).
pub fn random_unitary(n: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v = gaussian_vector(n, &mut rng);
        for _ in 0..2 {
            for b in &cols {
                let dot: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= dot * bi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    let mut u = CMatrix::zeros(n, n);
    for (j, c) in cols.iter().enumerate() {
        u.set_column(j, c);
    }
    u
}

/// One member `(p_i, |psi_i>)` of an ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    pub weight: f64,
    pub state: PureState,
}

/// Pure-state ensemble realising a density matrix.
#[derive(Debug, Clone)]
pub struct Decomposition {
    members: Vec<Member>,
}

impl Decomposition {
    /// Checks weights and that the ensemble reconstructs `source` within 1e-9.
    pub fn new(members: Vec<Member>, source: &DensityMatrix) -> Result<Self> {
        if members.iter().any(|m| m.weight < 0.0) {
            return Err(Error::InvalidState("negative ensemble weight".into()));
        }
        let total: f64 = members.iter().map(|m| m.weight).sum();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("ensemble weights sum to {total}")));
        }
        let dec = Self { members };
        let err = dec.reconstruct(source.dim()).max_abs_diff(source.matrix());
        if err > DECOMPOSITION_TOL {
            return Err(Error::InvalidState(format!(
                "ensemble reconstruction error {err:.3e}"
            )));
        }
        Ok(dec)
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn reconstruct(&self, dim: usize) -> CMatrix {
        let mut m = CMatrix::zeros(dim, dim);
        for mem in &self.members {
            m.axpy(C64::new(mem.weight, 0.0), &CMatrix::outer(mem.state.amplitudes()));
        }
        m
    }
}

/// The eigen-ensemble `{lambda_j, |chi_j>}` of `rho`.
pub fn spectral_decomposition(rho: &DensityMatrix) -> Result<Decomposition> {
    let support = rho.support()?;
    let total: f64 = support.iter().map(|(l, _)| l).sum();
    let members = support
        .into_iter()
        .map(|(lam, v)| {
            Ok(Member {
                weight: lam / total,
                state: PureState::normalized(v, rho.dims().to_vec())?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Decomposition::new(members, rho)
}

/// Random ensemble of `size` members: `sqrt(p_i)|psi_i> = sum_j U*_ij sqrt(lambda_j)|chi_j>`
/// with `U` a Haar unitary, restricted to the `r` support eigenpairs.
pub fn random_decomposition(rho: &DensityMatrix, size: usize, seed: u64) -> Result<Decomposition> {
    let support = rho.support()?;
    let rank = support.len();
    if size < rank {
        return Err(Error::SizeTooSmall { size, rank });
    }
    let u = random_unitary(size, seed);
    let d = rho.dim();
    let mut members = Vec::with_capacity(size);
    for i in 0..size {
        let mut v = vec![ZERO; d];
        for (j, (lam, chi)) in support.iter().enumerate() {
            let coef = u[(i, j)].conj() * lam.sqrt();
            for (vk, &ck) in v.iter_mut().zip(chi) {
                *vk += coef * ck;
            }
        }
        let weight: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if weight < 1e-14 {
            continue;
        }
        members.push(Member {
            weight,
            state: PureState::normalized(v, rho.dims().to_vec())?,
        });
    }
    let total: f64 = members.iter().map(|m| m.weight).sum();
    for m in members.iter_mut() {
        m.weight /= total;
    }
    Decomposition::new(members, rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn min_eig(m: &CMatrix) -> f64 {
        hermitian_eig(m, 1e-9).unwrap().values[0]
    }

    #[test]
    fn bell_reduction_is_maximally_mixed() {
        let r = bell_state().reduced(&[0]).unwrap();
        assert!(r.matrix().max_abs_diff(&CMatrix::identity(2).scale_real(0.5)) < 1e-15);
    }

    #[test]
    fn product_reduction_is_pure() {
        let psi = PureState::product(&[vec![ONE, ZERO], vec![ZERO, ONE]]).unwrap();
        let r = psi.reduced(&[0]).unwrap();
        assert!(r.matrix().max_abs_diff(&CMatrix::from_real_diag(&[1.0, 0.0])) < 1e-15);
    }

    #[test]
    fn ghz_single_party_purity() {
        let r = ghz_state().reduced(&[0]).unwrap();
        assert!((r.purity() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn partial_trace_rejects_bad_index() {
        let rho = ghz_state().projector();
        assert!(matches!(rho.partial_trace(&[3]), Err(Error::BadSubsystemIndex { .. })));
        assert!(rho.partial_transpose(&[5]).is_err());
    }

    #[test]
    fn partial_trace_of_middle_factor() {
        // |0> (x) |+> (x) |1>: keeping {0, 2} gives |01><01|
        let s = FRAC_1_SQRT_2;
        let psi = PureState::product(&[vec![ONE, ZERO], vec![c(s), c(s)], vec![ZERO, ONE]]).unwrap();
        let r = psi.reduced(&[2, 0]).unwrap();
        assert_eq!(r.dims(), &[2, 2]);
        assert!((r.matrix()[(1, 1)] - ONE).norm() < 1e-14);
    }

    #[test]
    fn partial_transpose_examples() {
        let diag = DensityMatrix::new(CMatrix::from_real_diag(&[0.1, 0.2, 0.3, 0.4]), vec![2, 2]).unwrap();
        assert_eq!(&diag.partial_transpose(&[1]).unwrap(), diag.matrix());
        let pt = bell_state().projector().partial_transpose(&[1]).unwrap();
        assert!(pt.hermitian_deviation() < 1e-15);
        assert!((pt.trace() - ONE).norm() < 1e-15);
        assert!((min_eig(&pt) + 0.5).abs() < 1e-12);
    }

    #[test]
    fn w_noise_ppt_boundary() {
        let p = 3.0 * (8.0 * 2f64.sqrt() - 3.0) / 119.0;
        let rho = w_noise(p).unwrap();
        for part in 0..3 {
            let m = min_eig(&rho.partial_transpose(&[part]).unwrap());
            assert!(m.abs() < 1e-9, "split {part}: {m}");
        }
    }

    #[test]
    fn named_state_amplitudes() {
        let g = ghz_state();
        assert_eq!(g.dims(), &[2, 2, 2]);
        assert_eq!(g.amplitudes()[0], c(FRAC_1_SQRT_2));
        assert_eq!(g.amplitudes()[7], c(FRAC_1_SQRT_2));
        let w = w_state();
        for i in [1, 2, 4] {
            assert!((w.amplitudes()[i] - c(1.0 / 3f64.sqrt())).norm() < 1e-16);
        }
        for s in [g, w] {
            let n: f64 = s.amplitudes().iter().map(|z| z.norm_sqr()).sum();
            assert!((n - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn horodecki_is_valid_and_ppt() {
        for i in 0..=10 {
            let a = i as f64 / 10.0;
            let rho = horodecki_state(a).unwrap();
            assert!((rho.matrix().trace() - ONE).norm() < 1e-14);
            assert!(min_eig(&rho.partial_transpose(&[1]).unwrap()) >= -1e-9, "a = {a}");
        }
        assert!(horodecki_state(1.5).is_err());
        assert!(horodecki_state(-0.1).is_err());
    }

    #[test]
    fn horodecki_at_zero_is_product_projector() {
        let s = FRAC_1_SQRT_2;
        let psi = PureState::product(&[vec![ZERO, ZERO, ONE], vec![c(s), ZERO, c(s)]]).unwrap();
        let rho = horodecki_state(0.0).unwrap();
        assert!(rho.matrix().max_abs_diff(psi.projector().matrix()) < 1e-15);
    }

    #[test]
    fn white_noise_examples() {
        let rho = ghz_state().projector();
        assert_eq!(white_noise_mix(&rho, 1.0).unwrap().matrix(), rho.matrix());
        assert!(white_noise_mix(&rho, 0.0)
            .unwrap()
            .matrix()
            .max_abs_diff(&CMatrix::identity(8).scale_real(0.125))
            < 1e-16);
        let half = white_noise_mix(&rho, 0.5).unwrap();
        for i in 0..8 {
            let want = if i == 0 || i == 7 { 0.3125 } else { 0.0625 };
            assert!((half.matrix()[(i, i)].re - want).abs() < 1e-15);
        }
        assert!(white_noise_mix(&rho, 1.2).is_err());
    }

    #[test]
    fn white_noise_is_affine() {
        let rho = random_density(&[3, 3], 4, 2).unwrap();
        let (p1, p2, alpha) = (0.3, 0.9, 0.25);
        let lhs = &white_noise_mix(&rho, p1).unwrap().matrix().scale_real(alpha)
            + &white_noise_mix(&rho, p2).unwrap().matrix().scale_real(1.0 - alpha);
        let rhs = white_noise_mix(&rho, alpha * p1 + (1.0 - alpha) * p2).unwrap();
        assert!(lhs.max_abs_diff(rhs.matrix()) < 1e-12);
    }

    #[test]
    fn random_states_are_deterministic_and_valid() {
        assert_eq!(random_pure(&[3, 3], 4).unwrap(), random_pure(&[3, 3], 4).unwrap());
        let a = random_density(&[2, 3], 3, 8).unwrap();
        assert_eq!(a, random_density(&[2, 3], 3, 8).unwrap());
        assert!((a.matrix().trace() - ONE).norm() < 1e-12);
        assert!(min_eig(a.matrix()) > -1e-12);
        let pure = random_density(&[3, 3], 1, 8).unwrap();
        assert!((pure.purity() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn partial_trace_preserves_trace() {
        for seed in 0..5 {
            let rho = random_density(&[2, 3, 2], 5, seed).unwrap();
            for keep in [&[0][..], &[1], &[2], &[0, 2], &[1, 2]] {
                let r = rho.partial_trace(keep).unwrap();
                assert!((r.matrix().trace() - ONE).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn decompositions_reconstruct() {
        for (dims, seed) in [(vec![2, 2], 1u64), (vec![3, 3], 2)] {
            let rho = random_density(&dims, 3, seed).unwrap();
            let rank = rho.rank().unwrap();
            for m in [rank, rank + 2] {
                let dec = random_decomposition(&rho, m, seed + 10).unwrap();
                assert!(dec.reconstruct(rho.dim()).max_abs_diff(rho.matrix()) < 1e-9);
            }
            assert!(matches!(
                random_decomposition(&rho, rank - 1, 0),
                Err(Error::SizeTooSmall { .. })
            ));
        }
    }

    #[test]
    fn spectral_decomposition_is_eigen_ensemble() {
        let rho = DensityMatrix::new(CMatrix::from_real_diag(&[0.7, 0.3, 0.0, 0.0]), vec![2, 2]).unwrap();
        let dec = spectral_decomposition(&rho).unwrap();
        assert_eq!(dec.len(), 2);
        assert!((dec.members()[0].weight - 0.7).abs() < 1e-14);
    }

    #[test]
    fn pure_state_decomposition_members_equal_up_to_phase() {
        let psi = random_pure(&[3, 3], 77).unwrap();
        let dec = random_decomposition(&psi.projector(), 4, 3).unwrap();
        let target = psi.canonical_phase();
        for m in dec.members() {
            let got = m.state.canonical_phase();
            let err = got.iter().zip(&target).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err < 1e-9);
        }
    }

    #[test]
    fn invalid_density_matrices_rejected() {
        let bad_trace = CMatrix::from_real_diag(&[0.5, 0.2]);
        assert!(DensityMatrix::new(bad_trace, vec![2]).is_err());
        let negative = CMatrix::from_real_diag(&[1.1, -0.1]);
        assert!(matches!(DensityMatrix::new(negative, vec![2]), Err(Error::NotPsd { .. })));
        assert!(DensityMatrix::new(CMatrix::identity(4).scale_real(0.25), vec![3]).is_err());
        assert!(PureState::new(vec![ONE, ONE], vec![2]).is_err());
    }
}
