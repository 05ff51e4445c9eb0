//! Tripartite concurrence `C_tau` and its two lower bounds.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::bipartite::{
    binomial, delta_from_spectrum, observation1_bound, CoefficientVector, PreparedState,
    SubsetSelector,
};
use crate::error::{Error, Result};
use crate::generators::{tripartite_generators, OperatorTriples, TripartiteSplit};
use crate::numerics::CMatrix;
use crate::report::{BoundKind, BoundReport, Coefficients, SubsetEntry};
use crate::states::{DensityMatrix, PureState};

/// Weights `(u, v, w)` for the three splits of one subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleCoefficients {
    pub u: CoefficientVector,
    pub v: CoefficientVector,
    pub w: CoefficientVector,
}

impl TripleCoefficients {
    pub fn new(u: CoefficientVector, v: CoefficientVector, w: CoefficientVector) -> Result<Self> {
        if u.len() != v.len() || u.len() != w.len() {
            return Err(Error::LengthMismatch {
                left: u.len(),
                right: if u.len() != v.len() { v.len() } else { w.len() },
            });
        }
        Ok(Self { u, v, w })
    }

    pub fn ones(k: usize) -> Self {
        Self {
            u: CoefficientVector::ones(k),
            v: CoefficientVector::ones(k),
            w: CoefficientVector::ones(k),
        }
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }
}

fn equal_local_dim(dims: &[usize]) -> Result<usize> {
    if dims.len() != 3 {
        return Err(Error::WrongArity {
            expected: 3,
            found: dims.len(),
        });
    }
    if dims[1] != dims[0] || dims[2] != dims[0] {
        return Err(Error::WrongDims);
    }
    Ok(dims[0])
}

/// `sqrt(3 - sum_i Tr rho_i^2)` for a three-party pure state.
pub fn ctau_pure(psi: &PureState) -> Result<f64> {
    if psi.dims().len() != 3 {
        return Err(Error::WrongArity {
            expected: 3,
            found: psi.dims().len(),
        });
    }
    let mut purity_sum = 0.0;
    for p in 0..3 {
        purity_sum += psi.reduced(&[p])?.purity();
    }
    Ok((3.0 - purity_sum).max(0.0).sqrt())
}

/// `S^tot = sum_s (u_s J^{1|23}_{t_s} + v_s J^{2|13}_{t_s} + w_s J^{3|12}_{t_s})`.
pub fn build_total_operator(
    triples: &OperatorTriples,
    t: &SubsetSelector,
    x: &TripleCoefficients,
) -> Result<CMatrix> {
    if t.len() != x.len() {
        return Err(Error::LengthMismatch {
            left: t.len(),
            right: x.len(),
        });
    }
    if let Some(&last) = t.indices().last() {
        if last >= triples.len() {
            return Err(Error::BadSubset(alloc::format!(
                "index {last} >= N = {}",
                triples.len()
            )));
        }
    }
    let d = triples.dim();
    let mut s = CMatrix::zeros(d, d);
    for (pos, &ti) in t.indices().iter().enumerate() {
        let [ja, jb, jc] = triples.triple(ti);
        s.axpy(x.u.weights()[pos], ja);
        s.axpy(x.v.weights()[pos], jb);
        s.axpy(x.w.weights()[pos], jc);
    }
    Ok(s)
}

/// `Delta^tot_k(rho, t, u, v, w)`.
pub fn delta_tot_k(
    rho: &DensityMatrix,
    triples: &OperatorTriples,
    t: &SubsetSelector,
    x: &TripleCoefficients,
) -> Result<f64> {
    let s = build_total_operator(triples, t, x)?;
    crate::bipartite::lambda_spectrum(rho, &s).map(|l| delta_from_spectrum(&l))
}

/// Joint-operator bound `C_tau^2 >= N/(6 k^2 C(N,k)) sum_t (Delta^tot_k)^2`.
///
/// With a hand-picked triple (`N = 1`) this reduces to `Delta^2 / 6`.
pub fn observation2_bound(
    rho: &DensityMatrix,
    triples: &OperatorTriples,
    k: usize,
    assignments: &BTreeMap<SubsetSelector, TripleCoefficients>,
) -> Result<BoundReport> {
    equal_local_dim(rho.dims())?;
    let n = triples.len();
    if k < 1 || k > n {
        return Err(Error::BadK { k, n });
    }
    if triples.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: triples.dim(),
            found: rho.dim(),
        });
    }
    let prepared = PreparedState::new(rho)?;
    let mut per_subset = Vec::with_capacity(assignments.len());
    for (t, x) in assignments {
        if t.len() != k {
            return Err(Error::LengthMismatch { left: t.len(), right: k });
        }
        let s = build_total_operator(triples, t, x)?;
        let delta = delta_from_spectrum(&prepared.spectrum(&s)?);
        per_subset.push(SubsetEntry {
            split: None,
            subset: t.indices().to_vec(),
            coefficients: Coefficients::Triple {
                u: x.u.weights().to_vec(),
                v: x.v.weights().to_vec(),
                w: x.w.weights().to_vec(),
            },
            delta,
        });
    }
    let prefactor = n as f64 / (6.0 * (k * k) as f64 * binomial(n, k));
    let mut report = BoundReport {
        kind: BoundKind::JointTripartite,
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

/// Half the sum of the bipartite aggregates over the three splits.
pub fn observation3_bound(
    rho: &DensityMatrix,
    k: usize,
    assignments: &BTreeMap<(TripartiteSplit, SubsetSelector), CoefficientVector>,
) -> Result<BoundReport> {
    let d = equal_local_dim(rho.dims())?;
    let mut per_subset = Vec::new();
    let mut n = 0;
    let mut prefactor = 0.0;
    for split in TripartiteSplit::ALL {
        let gens = tripartite_generators(d, split)?;
        let sub: BTreeMap<SubsetSelector, CoefficientVector> = assignments
            .iter()
            .filter(|((s, _), _)| *s == split)
            .map(|((_, t), u)| (t.clone(), u.clone()))
            .collect();
        let report = observation1_bound(rho, &gens, k, &sub)?;
        n = report.n_generators;
        prefactor = 0.5 * report.prefactor;
        per_subset.extend(report.per_subset.into_iter().map(|mut e| {
            e.split = Some(split);
            e
        }));
    }
    let mut report = BoundReport {
        kind: BoundKind::SplitTripartite,
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartite::concurrence_pure;
    use crate::generators::ExampleFamily;
    use crate::states::{ghz_noise, ghz_state, random_pure, w_noise, w_state};

    fn single() -> SubsetSelector {
        SubsetSelector::new(alloc::vec![0], 1).unwrap()
    }

    #[test]
    fn ctau_examples() {
        assert!((ctau_pure(&ghz_state()).unwrap() - 1.5f64.sqrt()).abs() < 1e-14);
        assert!((ctau_pure(&w_state()).unwrap() - (4.0f64 / 3.0).sqrt()).abs() < 1e-14);
        let prod = random_pure(&[2], 0).unwrap();
        assert!(matches!(ctau_pure(&prod), Err(Error::WrongArity { .. })));
        let bell = crate::states::bell_state();
        assert!(matches!(ctau_pure(&bell), Err(Error::WrongArity { .. })));
    }

    #[test]
    fn ctau_is_half_sum_of_split_concurrences() {
        for seed in 0..50 {
            let psi = random_pure(&[2, 3, 2], seed).unwrap();
            let half: f64 = TripartiteSplit::ALL
                .iter()
                .map(|s| concurrence_pure(&psi, &s.bipartition()).unwrap().powi(2))
                .sum::<f64>()
                / 2.0;
            assert!((ctau_pure(&psi).unwrap().powi(2) - half).abs() < 1e-12);
        }
    }

    #[test]
    fn ghz_example_closed_form() {
        let triples = OperatorTriples::example(ExampleFamily::Ghz);
        let map: BTreeMap<_, _> = [(single(), TripleCoefficients::ones(1))].into_iter().collect();
        for p in [0.2, 0.3, 0.5, 0.8, 1.0] {
            let r = observation2_bound(&ghz_noise(p).unwrap(), &triples, 1, &map).unwrap();
            let want = (0.75 * (5.0 * p - 1.0)).max(0.0).powi(2) / 6.0;
            assert!((r.bound_on_c_squared - want).abs() < 1e-12, "p={p}");
        }
    }

    #[test]
    fn w_example_closed_form() {
        let triples = OperatorTriples::example(ExampleFamily::W);
        let map: BTreeMap<_, _> = [(single(), TripleCoefficients::ones(1))].into_iter().collect();
        let s3 = 3.0f64.sqrt();
        for p in [0.3, 0.5, 0.8, 1.0] {
            let r = observation2_bound(&w_noise(p).unwrap(), &triples, 1, &map).unwrap();
            let want = (p * (8.0 + s3) - s3).max(0.0).powi(2) / 96.0;
            assert!((r.bound_on_c_squared - want).abs() < 1e-12, "p={p}");
        }
    }

    #[test]
    fn observation3_is_half_the_split_sum() {
        let rho = w_noise(0.7).unwrap();
        let mut map = BTreeMap::new();
        let mut direct = 0.0;
        for split in TripartiteSplit::ALL {
            let gens = tripartite_generators(2, split).unwrap();
            let sub: BTreeMap<_, _> = (0..gens.len())
                .map(|t| (SubsetSelector::new(alloc::vec![t], gens.len()).unwrap(), CoefficientVector::ones(1)))
                .collect();
            direct += observation1_bound(&rho, &gens, 1, &sub).unwrap().bound_on_c_squared;
            for (t, u) in sub {
                map.insert((split, t), u);
            }
        }
        let r = observation3_bound(&rho, 1, &map).unwrap();
        assert!((r.bound_on_c_squared - direct / 2.0).abs() < 1e-14);
        assert_eq!(r.per_subset.len(), 18);
    }

    #[test]
    fn canonical_mode_prefactor() {
        let triples = OperatorTriples::canonical(2).unwrap();
        assert_eq!(triples.len(), 6);
        let map = BTreeMap::new();
        let r = observation2_bound(&ghz_noise(0.9).unwrap(), &triples, 2, &map).unwrap();
        assert!((r.prefactor - 6.0 / (6.0 * 4.0 * 15.0)).abs() < 1e-15);
        assert!(matches!(
            observation2_bound(&ghz_noise(0.9).unwrap(), &triples, 7, &map),
            Err(Error::BadK { .. })
        ));
    }

    #[test]
    fn triple_lengths_checked() {
        let r = TripleCoefficients::new(
            CoefficientVector::ones(1),
            CoefficientVector::ones(2),
            CoefficientVector::ones(1),
        );
        assert!(matches!(r, Err(Error::LengthMismatch { .. })));
    }
}
