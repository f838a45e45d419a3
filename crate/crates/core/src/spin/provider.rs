use std::collections::{BTreeMap, BTreeSet};

use super::index::{dirac_candidates, restrict_to_k, CandidateMode, DiracIndex};
use super::spinor::spinor_modules;
use crate::error::{Error, Result};
use crate::linalg::Q;
use crate::weights::{tensor, Cover, RootDatum, VirtualCharacter, Weight};

/// What a provider promises about where its K-types live.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SupportBound {
    /// Every K-type σ of X satisfies ‖σ‖² ≤ the bound.
    NormSquared(Q),
    /// The oracle answers any query exactly, whatever its support.
    PerQuery,
    Unbounded,
}

/// Multiplicity oracle for the K-types of an admissible module.
pub trait KTypeProvider: Sync {
    fn multiplicity(&self, sigma: &Weight) -> u64;
    fn support_bound(&self) -> SupportBound;
}

/// A module with finitely many K-types, listed explicitly.
#[derive(Clone, Debug, Default)]
pub struct FiniteProvider {
    types: BTreeMap<Weight, u64>,
    bound: Q,
}

impl FiniteProvider {
    pub fn new(datum: &RootDatum, types: BTreeMap<Weight, u64>) -> Self {
        let bound = types.keys().map(|w| datum.norm2(w)).max().unwrap_or_default();
        FiniteProvider { types, bound }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// K-types of the finite-dimensional g-module with highest weight `hw`.
    pub fn finite_dimensional(datum: &RootDatum, hw: &Weight) -> Result<Self> {
        let res = restrict_to_k(datum, hw)?;
        Self::from_character(datum, &res)
    }

    pub fn from_character(datum: &RootDatum, v: &VirtualCharacter) -> Result<Self> {
        let mut types = BTreeMap::new();
        for (w, c) in v.terms() {
            let c = u64::try_from(*c).map_err(|_| Error::InvalidParameter(format!("negative multiplicity at {w:?}")))?;
            types.insert(w.clone(), c);
        }
        Ok(Self::new(datum, types))
    }
}

impl KTypeProvider for FiniteProvider {
    fn multiplicity(&self, sigma: &Weight) -> u64 {
        self.types.get(sigma).copied().unwrap_or(0)
    }

    fn support_bound(&self) -> SupportBound {
        SupportBound::NormSquared(self.bound.clone())
    }
}

/// Multiplicity-one K-types `lowest + k·step`, k = 0, 1, 2, ….
///
/// For sl(2,ℝ) the holomorphic discrete series with parameter n is the ladder
/// with lowest (n+1) and step (2).
#[derive(Clone, Debug)]
pub struct LadderProvider {
    pub lowest: Weight,
    pub step: Weight,
}

impl KTypeProvider for LadderProvider {
    fn multiplicity(&self, sigma: &Weight) -> u64 {
        let diff = sigma - &self.lowest;
        let mut k: Option<i64> = None;
        for (d, s) in diff.coords().iter().zip(self.step.coords()) {
            match (*s, k) {
                (0, _) if *d != 0 => return 0,
                (0, _) => {}
                (s, None) => {
                    if d % s != 0 || d / s < 0 {
                        return 0;
                    }
                    k = Some(d / s);
                }
                (s, Some(k)) => {
                    if *d != s * k {
                        return 0;
                    }
                }
            }
        }
        u64::from(k.is_some() || diff.is_zero())
    }

    fn support_bound(&self) -> SupportBound {
        SupportBound::PerQuery
    }
}

/// Dirac index of an admissible module from its K-types and infinitesimal character Λ.
///
/// For each candidate τ only the K-types σ = τ − ν, ν a weight of S, can
/// contribute to τ in σ⊗S⁺ − σ⊗S⁻, so only those are queried.
pub fn dirac_index_admissible<P: KTypeProvider + ?Sized>(
    datum: &RootDatum,
    provider: &P,
    lambda: &Weight,
) -> Result<DiracIndex> {
    let bound = provider.support_bound();
    if bound == SupportBound::Unbounded {
        return Err(Error::UnboundedProvider);
    }
    let sp = spinor_modules(datum, 0)?;
    let diff = sp.difference();
    let spin_weights = sp.all_weights();
    let mut out = VirtualCharacter::zero(Cover::KTilde);
    for tau in dirac_candidates(datum, lambda, CandidateMode::Exact) {
        let sigmas: BTreeSet<Weight> = spin_weights
            .iter()
            .map(|nu| &tau - nu)
            .filter(|s| datum.is_k_dominant(s) && datum.on_cover(s, Cover::K))
            .filter(|s| match &bound {
                SupportBound::NormSquared(b) => datum.norm2(s) <= *b,
                _ => true,
            })
            .collect();
        let mut coeff = 0i64;
        for sigma in sigmas {
            let m = provider.multiplicity(&sigma);
            if m == 0 {
                continue;
            }
            let t = tensor(datum, &VirtualCharacter::irreducible(sigma, Cover::K), &diff)?;
            coeff += i64::try_from(m).expect("multiplicity fits in i64") * t.coeff(&tau);
        }
        out.add_term(tau, coeff);
    }
    Ok(DiracIndex { index: out })
}
