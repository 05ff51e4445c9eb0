//! Bipartite concurrence and its generalised Wootters lower bound.
//!
//! For a symmetric operator `S = sum_s u_s J_{t_s}` the lambda-spectrum of a
//! state `rho` is the list of eigenvalues of the Hermitian matrix
//! `sqrt(sqrt(rho) S rho* S^dagger sqrt(rho))`. `Delta = max(0, l_1 - sum_{i>1} l_i)`
//! lower-bounds the ensemble average of `|<psi_i|S|psi_i*>|` over every
//! decomposition of `rho`, which is what makes the aggregate a bound on `C^2`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{Bipartition, GeneratorSet};
use crate::numerics::{
    default_tol, eigenvalues, hermitian_eig, singular_values, CMatrix, C64, ONE,
};
use crate::report::{BoundKind, BoundReport, Coefficients, SubsetEntry};
use crate::states::{Decomposition, DensityMatrix, PureState, RANK_TOL};

/// Symmetry tolerance for operators fed into the spectrum.
pub const OPERATOR_SYMMETRY_TOL: f64 = 1e-10;
/// Partial-transpose eigenvalues smaller in modulus than this are reported as 0.
pub const PPT_ZERO_TOL: f64 = 1e-14;
/// Slack on `|u_s| <= 1`.
pub const COEFFICIENT_TOL: f64 = 1e-12;

/// Strictly increasing generator indices `t_1 < ... < t_k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SubsetSelector(Vec<usize>);

impl SubsetSelector {
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::BadSubset("empty subset".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadSubset(format!("{indices:?} not strictly increasing")));
        }
        if let Some(&last) = indices.last() {
            if last >= n {
                return Err(Error::BadSubset(format!("index {last} >= N = {n}")));
            }
        }
        Ok(Self(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// All `C(n, k)` subsets in lexicographic order.
pub fn all_subsets(n: usize, k: usize) -> Vec<SubsetSelector> {
    let mut out = Vec::new();
    if k == 0 || k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(SubsetSelector(idx.clone()));
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Weights `u_s` with `|u_s| <= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientVector(Vec<C64>);

impl CoefficientVector {
    pub fn new(weights: Vec<C64>) -> Result<Self> {
        if let Some(bad) = weights.iter().find(|u| u.norm() > 1.0 + COEFFICIENT_TOL) {
            return Err(Error::CoefficientTooLarge { modulus: bad.norm() });
        }
        Ok(Self(weights))
    }

    /// All weights equal to 1.
    pub fn ones(k: usize) -> Self {
        Self(alloc::vec![ONE; k])
    }

    pub fn weights(&self) -> &[C64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `sqrt(2 (1 - Tr rho_A^2))` for the reduced state on `split.side_a()`.
pub fn concurrence_pure(psi: &PureState, split: &Bipartition) -> Result<f64> {
    let reduced = psi.reduced(split.side_a())?;
    Ok((2.0 * (1.0 - reduced.purity())).max(0.0).sqrt())
}

/// `sqrt(sum_t |<psi|J_t|psi*>|^2)`.
pub fn concurrence_pure_sumrule(psi: &PureState, gens: &GeneratorSet) -> Result<f64> {
    if gens.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: gens.dim(),
            found: psi.dim(),
        });
    }
    let conj = psi.conj();
    let sum: f64 = gens
        .operators()
        .iter()
        .map(|j| psi.braket(j, &conj).norm_sqr())
        .sum();
    Ok(sum.sqrt())
}

/// A state reduced to its support, for repeated spectra.
///
/// With `sqrt(rho) = V L V^dagger` over the support (`V` is `d x r`), the
/// singular values of `sqrt(rho) S conj(sqrt(rho))` are those of the `r x r`
/// core `G S G^T` with `G = L V^dagger`, padded with `d - r` zeros.
#[derive(Debug, Clone)]
pub struct PreparedState {
    g: CMatrix,
    g_t: CMatrix,
    dim: usize,
}

impl PreparedState {
    pub fn new(rho: &DensityMatrix) -> Result<Self> {
        let m = rho.matrix();
        let tol = default_tol(m).max(RANK_TOL);
        let eig = hermitian_eig(m, tol)?;
        if let Some(&lowest) = eig.values.first() {
            if lowest < -tol {
                return Err(Error::NotPsd { eigenvalue: lowest });
            }
        }
        let d = m.rows();
        let support: Vec<usize> = (0..d).filter(|&k| eig.values[k] > tol).collect();
        let g = CMatrix::from_fn(support.len(), d, |row, col| {
            let k = support[row];
            eig.vectors[(col, k)].conj() * eig.values[k].sqrt()
        });
        let g_t = g.transpose();
        Ok(Self { g, g_t, dim: d })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Rank kept after dropping the null space.
    pub fn rank(&self) -> usize {
        self.g.rows()
    }

    /// The core `G S G^T` carrying the nonzero part of the spectrum.
    pub fn sandwich(&self, s: &CMatrix) -> CMatrix {
        self.g.matmul(s).matmul(&self.g_t)
    }

    /// Lambda-spectrum (descending, length `dim`) of an already sandwiched operator.
    pub fn spectrum_of_sandwich(&self, core: &CMatrix) -> Result<Vec<f64>> {
        let mut sv = if core.rows() == 0 {
            Vec::new()
        } else {
            singular_values(core)?
        };
        sv.resize(self.dim, 0.0);
        Ok(sv)
    }

    pub fn spectrum(&self, s: &CMatrix) -> Result<Vec<f64>> {
        self.spectrum_of_sandwich(&self.sandwich(s))
    }
}

fn check_operator(rho: &DensityMatrix, s: &CMatrix) -> Result<()> {
    if !s.is_square() || s.rows() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: s.rows(),
        });
    }
    let deviation = s.symmetric_deviation();
    if deviation > OPERATOR_SYMMETRY_TOL {
        return Err(Error::NotSymmetricOperator { deviation });
    }
    Ok(())
}

/// Eigenvalues (descending) of `sqrt(sqrt(rho) S rho* S^dagger sqrt(rho))`.
///
/// Evaluated as the singular values of `sqrt(rho) S conj(sqrt(rho))`, which are
/// exactly these eigenvalues and come out with absolute accuracy near `eps`;
/// the null space of `rho` is projected out first.
pub fn lambda_spectrum(rho: &DensityMatrix, s: &CMatrix) -> Result<Vec<f64>> {
    check_operator(rho, s)?;
    PreparedState::new(rho)?.spectrum(s)
}

/// Cross-check route: square roots of the eigenvalues of the non-Hermitian
/// `X = rho S rho* S^dagger` (real parts, clamped at zero), descending.
pub fn lambda_spectrum_via_x(rho: &DensityMatrix, s: &CMatrix) -> Result<Vec<f64>> {
    check_operator(rho, s)?;
    let m = rho.matrix();
    let x = m.matmul(s).matmul(&rho.conj()).matmul(&s.adjoint());
    let mut out: Vec<f64> = eigenvalues(&x)?
        .iter()
        .map(|z| z.re.max(0.0).sqrt())
        .collect();
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// `lambda_1 - sum_{i>1} lambda_i` without the clamp.
pub fn wootters_gap(spectrum: &[f64]) -> f64 {
    match spectrum.split_first() {
        Some((first, rest)) => first - rest.iter().sum::<f64>(),
        None => 0.0,
    }
}

/// `max(0, lambda_1 - sum_{i>1} lambda_i)`.
pub fn delta_from_spectrum(spectrum: &[f64]) -> f64 {
    wootters_gap(spectrum).max(0.0)
}

/// `sum_s u_s J_{t_s}`.
pub fn build_operator(gens: &GeneratorSet, t: &SubsetSelector, u: &CoefficientVector) -> Result<CMatrix> {
    if t.len() != u.len() {
        return Err(Error::LengthMismatch {
            left: t.len(),
            right: u.len(),
        });
    }
    if let Some(&last) = t.indices().last() {
        if last >= gens.len() {
            return Err(Error::BadSubset(format!("index {last} >= N = {}", gens.len())));
        }
    }
    let d = gens.dim();
    let mut s = CMatrix::zeros(d, d);
    for (&ti, &ui) in t.indices().iter().zip(u.weights()) {
        s.axpy(ui, gens.operator(ti));
    }
    Ok(s)
}

/// `Delta_k(rho, t, u)`.
pub fn delta_k(
    rho: &DensityMatrix,
    gens: &GeneratorSet,
    t: &SubsetSelector,
    u: &CoefficientVector,
) -> Result<f64> {
    let s = build_operator(gens, t, u)?;
    Ok(delta_from_spectrum(&lambda_spectrum(rho, &s)?))
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k < 1 || k > n {
        return Err(Error::BadK { k, n });
    }
    Ok(())
}

/// Aggregate bipartite bound on `C(rho)^2`.
///
/// Subsets missing from `assignments` contribute zero; the prefactor
/// `N / (k^2 C(N, k))` is fixed by `k` and `N` alone.
pub fn observation1_bound(
    rho: &DensityMatrix,
    gens: &GeneratorSet,
    k: usize,
    assignments: &BTreeMap<SubsetSelector, CoefficientVector>,
) -> Result<BoundReport> {
    let n = gens.len();
    check_k(k, n)?;
    if gens.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: gens.dim(),
            found: rho.dim(),
        });
    }
    let prepared = PreparedState::new(rho)?;
    let mut per_subset = Vec::with_capacity(assignments.len());
    for (t, u) in assignments {
        if t.len() != k {
            return Err(Error::LengthMismatch { left: t.len(), right: k });
        }
        let s = build_operator(gens, t, u)?;
        let delta = delta_from_spectrum(&prepared.spectrum(&s)?);
        per_subset.push(SubsetEntry {
            split: None,
            subset: t.indices().to_vec(),
            coefficients: Coefficients::Single(u.weights().to_vec()),
            delta,
        });
    }
    let prefactor = n as f64 / ((k * k) as f64 * binomial(n, k));
    let mut report = BoundReport {
        kind: BoundKind::Bipartite,
        bound_on_c_squared: 0.0,
        k,
        n_generators: n,
        prefactor,
        per_subset,
        config: None,
        wall_time: None,
    };
    report.bound_on_c_squared = report.recompute();
    Ok(report)
}

/// Two-qubit concurrence `max(0, l1 - l2 - l3 - l4)` from the single generator.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims() != [2, 2] {
        return Err(Error::WrongDims);
    }
    let gens = crate::generators::bipartite_generators(2, 2)?;
    Ok(delta_from_spectrum(&lambda_spectrum(rho, gens.operator(0))?))
}

/// `Delta` with `S = sum_t u_t J_t` over all `N` generators and `sum |u_t|^2 = 1`;
/// lower-bounds `C(rho)` itself.
pub fn delta_total_bound(rho: &DensityMatrix, gens: &GeneratorSet, u: &[C64]) -> Result<f64> {
    if u.len() != gens.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: gens.len(),
        });
    }
    let norm_sq: f64 = u.iter().map(|z| z.norm_sqr()).sum();
    if (norm_sq - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm_sq });
    }
    let d = gens.dim();
    let mut s = CMatrix::zeros(d, d);
    for (j, &ut) in gens.operators().iter().zip(u) {
        s.axpy(ut, j);
    }
    Ok(delta_from_spectrum(&lambda_spectrum(rho, &s)?))
}

/// `sum_i p_i |<psi_i| S |psi_i*>|` over an ensemble.
pub fn decomposition_average(dec: &Decomposition, s: &CMatrix) -> Result<f64> {
    let deviation = s.symmetric_deviation();
    if deviation > OPERATOR_SYMMETRY_TOL {
        return Err(Error::NotSymmetricOperator { deviation });
    }
    let mut total = 0.0;
    for m in dec.members() {
        if m.state.dim() != s.rows() {
            return Err(Error::DimensionMismatch {
                expected: s.rows(),
                found: m.state.dim(),
            });
        }
        total += m.weight * m.state.braket(s, &m.state.conj()).norm();
    }
    Ok(total)
}

/// Minimum eigenvalue of the partial transpose across `split`.
pub fn ppt_min_eigenvalue(rho: &DensityMatrix, split: &Bipartition) -> Result<f64> {
    let pt = rho.partial_transpose(split.side_b())?;
    let eig = hermitian_eig(&pt, 1e-9)?;
    let min = eig.values.first().copied().unwrap_or(0.0);
    // Rounding-level values are reported as exact zeros, like the Delta clamp.
    Ok(if min.abs() < PPT_ZERO_TOL { 0.0 } else { min })
}

/// Most negative partial-transpose eigenvalue over the single-party cuts.
pub fn ppt_min_eigenvalue_worst(rho: &DensityMatrix) -> Result<f64> {
    let parties = rho.parties();
    if parties < 2 {
        return Err(Error::WrongArity {
            expected: 2,
            found: parties,
        });
    }
    let cuts = if parties == 2 { 1 } else { parties };
    let mut worst = f64::INFINITY;
    for p in 0..cuts {
        worst = worst.min(ppt_min_eigenvalue(rho, &Bipartition::new(&[p], parties)?)?);
    }
    Ok(worst)
}

/// Complex weight with modulus `r` and phase `theta`.
pub fn polar(r: f64, theta: f64) -> C64 {
    C64::from_polar(r, theta)
}

/// Canonical generators for a two-party state.
pub fn bipartite_generators_for(rho: &DensityMatrix) -> Result<GeneratorSet> {
    match rho.dims() {
        &[m, n] => crate::generators::bipartite_generators(m, n),
        dims => Err(Error::WrongArity {
            expected: 2,
            found: dims.len(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::bipartite_generators;
    use crate::numerics::ZERO;
    use crate::states::{
        bell_state, maximally_entangled, random_pure, spectral_decomposition, werner, PureState,
    };

    fn one(n: usize) -> (SubsetSelector, CoefficientVector) {
        (SubsetSelector::new(alloc::vec![0], n).unwrap(), CoefficientVector::ones(1))
    }

    #[test]
    fn subsets_enumerate_lexicographically() {
        let s = all_subsets(4, 2);
        assert_eq!(s.len(), 6);
        assert_eq!(s[0].indices(), &[0, 1]);
        assert_eq!(s[5].indices(), &[2, 3]);
        assert_eq!(all_subsets(9, 2).len(), 36);
        assert_eq!(binomial(9, 2), 36.0);
        assert!(SubsetSelector::new(alloc::vec![2, 1], 4).is_err());
        assert!(SubsetSelector::new(alloc::vec![0, 4], 4).is_err());
    }

    #[test]
    fn coefficient_modulus_checked() {
        assert!(CoefficientVector::new(alloc::vec![C64::new(1.0, 0.5)]).is_err());
        assert!(CoefficientVector::new(alloc::vec![polar(1.0, 2.0)]).is_ok());
    }

    #[test]
    fn pure_concurrence_examples() {
        let split = Bipartition::first_vs_rest(2).unwrap();
        assert!((concurrence_pure(&bell_state(), &split).unwrap() - 1.0).abs() < 1e-14);
        let prod = PureState::product(&[alloc::vec![ONE, ZERO], alloc::vec![ZERO, ONE]]).unwrap();
        assert_eq!(concurrence_pure(&prod, &split).unwrap(), 0.0);
        let me = maximally_entangled(3);
        assert!((concurrence_pure(&me, &split).unwrap() - (4.0f64 / 3.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn sumrule_examples() {
        let g = bipartite_generators(2, 2).unwrap();
        assert!((concurrence_pure_sumrule(&bell_state(), &g).unwrap() - 1.0).abs() < 1e-14);
        let prod = PureState::product(&[alloc::vec![ONE, ZERO], alloc::vec![ONE, ONE]]).unwrap();
        assert!(concurrence_pure_sumrule(&prod, &g).unwrap() < 1e-15);
        let g33 = bipartite_generators(3, 3).unwrap();
        assert!(matches!(
            concurrence_pure_sumrule(&bell_state(), &g33),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn sumrule_matches_purity_formula() {
        let g = bipartite_generators(3, 3).unwrap();
        let split = Bipartition::first_vs_rest(2).unwrap();
        for seed in 0..1000 {
            let psi = random_pure(&[3, 3], seed).unwrap();
            let a = concurrence_pure(&psi, &split).unwrap();
            let b = concurrence_pure_sumrule(&psi, &g).unwrap();
            assert!((a - b).abs() < 1e-9, "seed {seed}: {a} vs {b}");
        }
    }

    #[test]
    fn spectrum_examples() {
        let j = bipartite_generators(2, 2).unwrap().operator(0).clone();
        let mixed = DensityMatrix::maximally_mixed(alloc::vec![2, 2]).unwrap();
        let l = lambda_spectrum(&mixed, &j).unwrap();
        assert!(l.iter().all(|x| (x - 0.25).abs() < 1e-14));
        let bell = bell_state().projector();
        let l = lambda_spectrum(&bell, &j).unwrap();
        assert!((l[0] - 1.0).abs() < 1e-14);
        assert!(l[1..].iter().all(|&x| x < 1e-14));
        let asym = crate::generators::so_generators(4).unwrap().remove(0);
        assert!(matches!(
            lambda_spectrum(&bell, &asym),
            Err(Error::NotSymmetricOperator { .. })
        ));
    }

    #[test]
    fn delta_examples() {
        let g = bipartite_generators(2, 2).unwrap();
        let (t, u) = one(1);
        let mixed = DensityMatrix::maximally_mixed(alloc::vec![2, 2]).unwrap();
        assert_eq!(delta_k(&mixed, &g, &t, &u).unwrap(), 0.0);
        let bell = bell_state().projector();
        assert!((delta_k(&bell, &g, &t, &u).unwrap() - 1.0).abs() < 1e-14);
        let short = CoefficientVector::ones(2);
        assert!(matches!(delta_k(&bell, &g, &t, &short), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn observation1_two_qubit_examples() {
        let g = bipartite_generators(2, 2).unwrap();
        let map: BTreeMap<_, _> = [one(1)].into_iter().collect();
        let bell = observation1_bound(&bell_state().projector(), &g, 1, &map).unwrap();
        assert!((bell.bound_on_c_squared - 1.0).abs() < 1e-13);
        let w = observation1_bound(&werner(1.0 / 3.0).unwrap(), &g, 1, &map).unwrap();
        assert!(w.bound_on_c_squared < 1e-15);
        assert!(matches!(
            observation1_bound(&werner(0.5).unwrap(), &g, 2, &map),
            Err(Error::BadK { .. })
        ));
        let empty = BTreeMap::new();
        assert_eq!(
            observation1_bound(&bell_state().projector(), &g, 1, &empty)
                .unwrap()
                .bound_on_c_squared,
            0.0
        );
    }

    #[test]
    fn report_recomputes() {
        let g = bipartite_generators(3, 3).unwrap();
        let rho = crate::states::random_density(&[3, 3], 2, 4).unwrap();
        let map: BTreeMap<_, _> = all_subsets(9, 2)
            .into_iter()
            .map(|t| (t, CoefficientVector::new(alloc::vec![polar(1.0, 0.3), polar(0.7, -1.0)]).unwrap()))
            .collect();
        let r = observation1_bound(&rho, &g, 2, &map).unwrap();
        assert!((r.recompute() - r.bound_on_c_squared).abs() < 1e-12);
        assert!((r.prefactor - 9.0 / (4.0 * 36.0)).abs() < 1e-15);
    }

    #[test]
    fn wootters_examples() {
        assert!((wootters_concurrence(&bell_state().projector()).unwrap() - 1.0).abs() < 1e-14);
        for p in [1.0, 1.0 / 3.0, 0.2, 0.6, 0.9] {
            let want = ((3.0 * p - 1.0) / 2.0).max(0.0);
            let got = wootters_concurrence(&werner(p).unwrap()).unwrap();
            assert!((got - want).abs() < 1e-12, "p={p}: {got} vs {want}");
        }
        let three = DensityMatrix::maximally_mixed(alloc::vec![3, 3]).unwrap();
        assert!(matches!(wootters_concurrence(&three), Err(Error::WrongDims)));
    }

    #[test]
    fn delta_total_examples() {
        let g = bipartite_generators(2, 2).unwrap();
        let rho = werner(0.8).unwrap();
        let d = delta_total_bound(&rho, &g, &[ONE]).unwrap();
        assert!((d - wootters_concurrence(&rho).unwrap()).abs() < 1e-14);
        let g9 = bipartite_generators(3, 3).unwrap();
        let mixed = DensityMatrix::maximally_mixed(alloc::vec![3, 3]).unwrap();
        let u: Vec<C64> = (0..9).map(|i| polar(1.0 / 3.0, i as f64)).collect();
        assert_eq!(delta_total_bound(&mixed, &g9, &u).unwrap(), 0.0);
        assert!(matches!(
            delta_total_bound(&mixed, &g9, &alloc::vec![ONE; 9]),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn decomposition_average_examples() {
        let j = bipartite_generators(2, 2).unwrap().operator(0).clone();
        let dec = spectral_decomposition(&bell_state().projector()).unwrap();
        assert!((decomposition_average(&dec, &j).unwrap() - 1.0).abs() < 1e-14);
        let diag = DensityMatrix::new(CMatrix::from_real_diag(&[0.4, 0.3, 0.2, 0.1]), alloc::vec![2, 2]).unwrap();
        let dec = spectral_decomposition(&diag).unwrap();
        assert!(decomposition_average(&dec, &j).unwrap() < 1e-15);
    }

    #[test]
    fn ppt_examples() {
        let split = Bipartition::first_vs_rest(2).unwrap();
        assert!((ppt_min_eigenvalue(&bell_state().projector(), &split).unwrap() + 0.5).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(alloc::vec![3, 3]).unwrap();
        assert!((ppt_min_eigenvalue(&mixed, &split).unwrap() - 1.0 / 9.0).abs() < 1e-14);
        for a in [0.0, 0.3, 0.5, 1.0] {
            let rho = crate::states::horodecki_state(a).unwrap();
            assert!(ppt_min_eigenvalue(&rho, &split).unwrap() >= -1e-9);
        }
    }
}
