//! Pairwise thermal negativity in open Ising-DM chains.
//!
//! Exploratory: the chain extends the longitudinal two-qubit model to `n`
//! sites (open boundaries, field and DM vector along z). The Gibbs state is
//! built by exact diagonalization, reduced to each requested pair of sites,
//! and measured with the partial-transpose oracle. Nothing here asserts that
//! two-qubit behaviour carries over to longer chains; the reports are
//! descriptive.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entanglement::{negativity_oracle, NegativityResult};
use crate::error::{Error, Result};
use crate::models::{ModelKind, ModelParams, MAX_CHAIN_SITES};
use crate::qlinalg::{partial_trace, ComplexMatrix};
use crate::thermal::{gibbs_spectral, Temperature};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairEntry {
    pub sites: (usize, usize),
    #[serde(rename = "N")]
    pub negativity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseReport {
    pub n_sites: usize,
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub d: f64,
    #[serde(rename = "J")]
    pub j: f64,
    /// Nearest-neighbour pairs first, then (optionally) the rest, each in
    /// lexicographic order.
    pub entries: Vec<PairEntry>,
}

impl PairwiseReport {
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.sites == (i, j))
            .map(|e| e.negativity)
    }
}

fn check_chain(p: &ModelParams) -> Result<()> {
    if p.kind != ModelKind::ChainDm {
        return Err(Error::UnsupportedKind(p.kind.name()));
    }
    if p.n_sites > MAX_CHAIN_SITES {
        return Err(Error::SizeLimit(p.n_sites));
    }
    p.validate()
}

fn reduced_negativity(
    rho: &ComplexMatrix,
    pair: (usize, usize),
    n: usize,
) -> Result<NegativityResult> {
    negativity_oracle(&partial_trace(rho, pair, n)?)
}

/// Negativity of one pair of sites of the chain's Gibbs state.
pub fn pair_negativity(
    p: &ModelParams,
    t: Temperature,
    pair: (usize, usize),
) -> Result<NegativityResult> {
    check_chain(p)?;
    let state = gibbs_spectral(p, t)?;
    reduced_negativity(&state.rho, pair, p.n_sites)
}

/// Thermal negativity of every nearest-neighbour pair, and of all other
/// pairs when `include_distant` is set.
pub fn pairwise_thermal_negativity(
    p: &ModelParams,
    t: f64,
    include_distant: bool,
) -> Result<PairwiseReport> {
    check_chain(p)?;
    let temp = Temperature::positive(t)?;
    let n = p.n_sites;
    let state = gibbs_spectral(p, temp)?;

    let mut pairs: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    if include_distant {
        for i in 0..n {
            for j in (i + 2)..n {
                pairs.push((i, j));
            }
        }
    }
    let entries = pairs
        .into_par_iter()
        .map(|pair| {
            Ok(PairEntry {
                sites: pair,
                negativity: reduced_negativity(&state.rho, pair, n)?.negativity,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(PairwiseReport {
        n_sites: n,
        t,
        b: p.b,
        d: p.d,
        j: p.j,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::evaluate_point;

    #[test]
    fn two_sites_reproduce_the_longitudinal_model() {
        let p = ModelParams::chain(2, 1.0, 0.0, 1.0).unwrap();
        let r = pairwise_thermal_negativity(&p, 0.1, false).unwrap();
        assert_eq!(r.entries.len(), 1);
        let two = ModelParams::longitudinal(1.0, 0.0, 1.0).unwrap();
        let expected = evaluate_point(&two, 0.1).unwrap().negativity;
        assert!((r.get(0, 1).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn no_dm_three_sites_is_separable() {
        let p = ModelParams::chain(3, 1.0, 0.0, 0.0).unwrap();
        let r = pairwise_thermal_negativity(&p, 0.5, true).unwrap();
        assert_eq!(r.entries.len(), 3);
        assert!(r.entries.iter().all(|e| e.negativity == 0.0));
    }

    #[test]
    fn dm_entangles_neighbours() {
        let p = ModelParams::chain(3, 1.0, 0.0, 1.0).unwrap();
        let r = pairwise_thermal_negativity(&p, 0.1, false).unwrap();
        assert!(r.get(0, 1).unwrap() > 0.0);
        assert!(r.get(1, 2).unwrap() > 0.0);
    }

    #[test]
    fn errors() {
        let p = ModelParams::longitudinal(1.0, 0.0, 1.0).unwrap();
        assert!(matches!(
            pairwise_thermal_negativity(&p, 0.1, false),
            Err(Error::UnsupportedKind(_))
        ));
        let mut p = ModelParams::chain(3, 1.0, 0.0, 1.0).unwrap();
        assert!(pairwise_thermal_negativity(&p, 0.0, false).is_err());
        p.n_sites = 13;
        assert_eq!(
            pairwise_thermal_negativity(&p, 0.1, false),
            Err(Error::SizeLimit(13))
        );
    }
}
