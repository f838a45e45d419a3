use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::spinor::{spinor_modules, wedge_p_degrees};
use crate::error::{Error, Result};
use crate::linalg::Q;
use crate::weights::{decompose, g_character, tensor, Cover, RootDatum, VirtualCharacter, Weight, WeylKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamKind {
    DiscreteSeries,
    Limit,
}

/// Harish-Chandra parameter χ of a (limit of) discrete series, with its chamber b.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HCParameter {
    pub chi: Weight,
    pub chamber: usize,
    pub kind: ParamKind,
}

impl HCParameter {
    /// Discrete series with regular parameter χ, in the chamber where χ is dominant.
    pub fn discrete_series(datum: &RootDatum, chi: Weight) -> Result<Self> {
        let chamber = datum
            .chamber_containing(&chi)
            .ok_or_else(|| Error::InvalidParameter(format!("{chi:?} is singular")))?;
        let p = HCParameter { chi, chamber, kind: ParamKind::DiscreteSeries };
        p.validate(datum)?;
        Ok(p)
    }

    pub fn validate(&self, datum: &RootDatum) -> Result<()> {
        let bad = |m: String| Error::InvalidParameter(m);
        if self.chi.rank() != datum.rank() {
            return Err(bad(format!("{:?} has the wrong rank", self.chi)));
        }
        datum.chamber(self.chamber)?;
        if !datum.on_k_lattice(&(&self.chi - &datum.reference_rho().rho)) {
            return Err(bad(format!("{:?} is not in ρ + Λ_K", self.chi)));
        }
        for a in datum.positive_roots(self.chamber) {
            let v = datum.dot(&self.chi, a);
            if v < 0 || (v == 0 && self.kind == ParamKind::DiscreteSeries) {
                return Err(bad(format!("⟨{:?}, {a:?}⟩ = {v} violates positivity", self.chi)));
            }
        }
        if self.kind == ParamKind::Limit && self.on_compact_wall(datum) {
            return Err(bad(format!("limit parameter {:?} lies on a compact wall", self.chi)));
        }
        Ok(())
    }

    pub fn on_compact_wall(&self, datum: &RootDatum) -> bool {
        (0..datum.roots().len()).any(|i| datum.is_compact(i) && datum.dot(&self.chi, &datum.roots()[i]) == 0)
    }

    /// Order of the stabilizer of χ in W.
    pub fn stabilizer_order(&self, datum: &RootDatum) -> usize {
        datum.weyl_group(WeylKind::Full).iter().filter(|w| w.apply(&self.chi) == self.chi).count()
    }

    /// The W_k-conjugate parameter whose chamber has compact positive system R_k⁺.
    pub fn normalized(&self, datum: &RootDatum) -> HCParameter {
        let s = datum.compact_normalizer(self.chamber);
        HCParameter { chi: s.apply(&self.chi), chamber: datum.act_on_chamber(s, self.chamber), kind: self.kind }
    }
}

/// I_Dir(X) = H⁺ − H⁻ as a virtual K̃-character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct DiracIndex {
    pub index: VirtualCharacter,
}

/// Index of a (limit of) discrete series: ±F_{χ−ρ_c}, signed by the chamber.
pub fn dirac_index_limits(datum: &RootDatum, p: &HCParameter) -> Result<DiracIndex> {
    p.validate(datum)?;
    let n = p.normalized(datum);
    let sign = i64::from(datum.chamber(n.chamber)?.sign);
    let hw = &n.chi - &datum.reference_rho().rho_c;
    datum.check_cover(&hw, Cover::KTilde)?;
    Ok(DiracIndex { index: VirtualCharacter::from_terms(Cover::KTilde, [(hw, sign)]) })
}

/// K-restriction of the finite-dimensional g-module with b₁-highest weight `hw`.
pub fn restrict_to_k(datum: &RootDatum, hw: &Weight) -> Result<VirtualCharacter> {
    decompose(datum, &g_character(datum, hw)?, Cover::K)
}

/// X⊗S⁺ − X⊗S⁻ for a finite-dimensional X.
pub fn dirac_index_finite_dim(datum: &RootDatum, g_highest_weight: &Weight) -> Result<DiracIndex> {
    let res = restrict_to_k(datum, g_highest_weight)?;
    let sp = spinor_modules(datum, 0)?;
    Ok(DiracIndex { index: tensor(datum, &res, &sp.difference())? })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidateMode {
    /// τ with w·Λ = τ + ρ_c for some w ∈ W.
    Exact,
    /// Every dominant τ with ‖τ + ρ_c‖² = ‖Λ‖².
    NormFilter,
}

/// Possible K̃-types of Dirac cohomology for infinitesimal character Λ.
pub fn dirac_candidates(datum: &RootDatum, lambda: &Weight, mode: CandidateMode) -> Vec<Weight> {
    let rho_c = &datum.reference_rho().rho_c;
    let keep = |tau: &Weight| datum.is_k_dominant(tau) && datum.on_cover(tau, Cover::KTilde);
    let mut out = BTreeSet::new();
    match mode {
        CandidateMode::Exact => {
            for w in datum.weyl_group(WeylKind::Full) {
                let tau = &w.apply(lambda) - rho_c;
                if keep(&tau) {
                    out.insert(tau);
                }
            }
        }
        CandidateMode::NormFilter => {
            let target = datum.dot(lambda, lambda);
            let bounds = box_bounds(datum, target);
            let mut x = bounds.iter().map(|b| -b).collect::<Vec<i64>>();
            loop {
                let w = Weight(x.clone());
                if datum.dot(&w, &w) == target {
                    let tau = &w - rho_c;
                    if keep(&tau) {
                        out.insert(tau);
                    }
                }
                let mut i = 0;
                loop {
                    if i == x.len() {
                        return out.into_iter().collect();
                    }
                    if x[i] < bounds[i] {
                        x[i] += 1;
                        break;
                    }
                    x[i] = -bounds[i];
                    i += 1;
                }
            }
        }
    }
    out.into_iter().collect()
}

/// |x_i| ≤ sqrt(target·(G⁻¹)_ii) for every x with xᵀGx = target.
fn box_bounds(datum: &RootDatum, target: i64) -> Vec<i64> {
    let g = crate::linalg::ExactMatrix::from_i64(datum.gram());
    let inv = g.inverse().expect("gram is definite");
    (0..datum.rank())
        .map(|i| {
            let cap: Q = &inv[(i, i)] * Q::from_integer(target.into());
            let mut b = 0i64;
            while Q::from_integer(((b + 1) * (b + 1)).into()) <= cap {
                b += 1;
            }
            b
        })
        .collect()
}

/// One summand [γ, I(X)]·[γ, I(Y)] of the Dirac pairing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingSummand {
    pub gamma: Weight,
    pub left: i64,
    pub right: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiracPairing {
    pub value: i64,
    pub summands: Vec<PairingSummand>,
}

pub fn dirac_pairing(a: &DiracIndex, b: &DiracIndex) -> Result<DiracPairing> {
    let value = a.index.pair(&b.index)?;
    let summands = a
        .index
        .terms()
        .iter()
        .filter(|(g, _)| b.index.coeff(g) != 0)
        .map(|(g, c)| PairingSummand { gamma: g.clone(), left: *c, right: b.index.coeff(g) })
        .collect();
    Ok(DiracPairing { value, summands })
}

/// dim Hom_K(∧^i p ⊗ X, Y) for i = 0..=dim p.
pub fn ep_terms(datum: &RootDatum, hw_x: &Weight, hw_y: &Weight) -> Result<Vec<i64>> {
    let x = g_character(datum, hw_x)?;
    let y = restrict_to_k(datum, hw_y)?;
    wedge_p_degrees(datum)
        .iter()
        .map(|w| decompose(datum, &(w * &x), Cover::K)?.pair(&y))
        .collect()
}

/// Σ_i (−1)^i dim Hom_K(∧^i p ⊗ X, Y) for finite-dimensional X, Y.
pub fn ep_pairing_finite_dim(datum: &RootDatum, hw_x: &Weight, hw_y: &Weight) -> Result<i64> {
    Ok(ep_terms(datum, hw_x, hw_y)?.iter().enumerate().map(|(i, d)| if i % 2 == 0 { *d } else { -d }).sum())
}

/// ‖τ + ρ_c‖² = ‖Λ‖².
pub fn norm_matches(datum: &RootDatum, tau: &Weight, lambda: &Weight) -> bool {
    let rho_c = &datum.reference_rho().rho_c;
    (datum.norm2(&(tau + rho_c)) - datum.norm2(lambda)).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2() -> RootDatum {
        RootDatum::preset("sl2R").unwrap()
    }

    fn ds(n: i64, holomorphic: bool) -> HCParameter {
        HCParameter {
            chi: Weight::from([if holomorphic { n } else { -n }]),
            chamber: usize::from(!holomorphic),
            kind: ParamKind::DiscreteSeries,
        }
    }

    #[test]
    fn sl2_discrete_series_indices() {
        let d = sl2();
        for n in 1..=5 {
            let plus = dirac_index_limits(&d, &ds(n, true)).unwrap();
            assert_eq!(plus.index, VirtualCharacter::irreducible(Weight::from([n]), Cover::KTilde));
            let minus = dirac_index_limits(&d, &ds(n, false)).unwrap();
            assert_eq!(minus.index, VirtualCharacter::from_terms(Cover::KTilde, [(Weight::from([-n]), -1)]));
        }
    }

    #[test]
    fn invalid_parameters() {
        let d = sl2();
        let wrong_chamber = HCParameter { chi: Weight::from([3]), chamber: 1, kind: ParamKind::DiscreteSeries };
        assert!(matches!(dirac_index_limits(&d, &wrong_chamber), Err(Error::InvalidParameter(_))));
        let singular = HCParameter { chi: Weight::from([0]), chamber: 0, kind: ParamKind::DiscreteSeries };
        assert!(matches!(singular.validate(&d), Err(Error::InvalidParameter(_))));
        let limit = HCParameter { chi: Weight::from([0]), chamber: 0, kind: ParamKind::Limit };
        assert!(limit.validate(&d).is_ok());
    }

    #[test]
    fn sl2_finite_dimensional_indices() {
        let d = sl2();
        for n in 0..=6 {
            let idx = dirac_index_finite_dim(&d, &Weight::from([n])).unwrap();
            let want = VirtualCharacter::from_terms(Cover::KTilde, [(Weight::from([-n - 1]), 1), (Weight::from([n + 1]), -1)]);
            assert_eq!(idx.index, want, "F_{n}");
        }
    }

    #[test]
    fn sl2_candidates() {
        let d = sl2();
        for n in 1..=6 {
            let c = dirac_candidates(&d, &Weight::from([n]), CandidateMode::Exact);
            assert_eq!(c, vec![Weight::from([-n]), Weight::from([n])]);
            assert_eq!(dirac_candidates(&d, &Weight::from([n]), CandidateMode::NormFilter), c);
        }
    }

    #[test]
    fn sl2_pairings() {
        let d = sl2();
        let f = |n| dirac_index_finite_dim(&d, &Weight::from([n])).unwrap();
        assert_eq!(dirac_pairing(&f(2), &f(2)).unwrap().value, 2);
        assert_eq!(dirac_pairing(&f(2), &f(4)).unwrap().value, 0);
        let p = dirac_index_limits(&d, &ds(3, true)).unwrap();
        let m = dirac_index_limits(&d, &ds(3, false)).unwrap();
        assert_eq!(dirac_pairing(&p, &p).unwrap().value, 1);
        assert_eq!(dirac_pairing(&p, &m).unwrap().value, 0);
        assert_eq!(ep_pairing_finite_dim(&d, &Weight::from([0]), &Weight::from([0])).unwrap(), 2);
        assert_eq!(ep_terms(&d, &Weight::from([3]), &Weight::from([3])).unwrap(), vec![4, 6, 4]);
        assert_eq!(ep_pairing_finite_dim(&d, &Weight::from([1]), &Weight::from([3])).unwrap(), 0);
    }

    #[test]
    fn su21_gram_of_three_discrete_series_is_identity() {
        let d = RootDatum::preset("su21").unwrap();
        // χ = ρ(b₁) + (2,2) is regular; its W-orbit meets three chambers with compact
        // positive system R_k⁺.
        let chi = &d.reference_rho().rho + &Weight::from([2, 2]);
        let params: Vec<HCParameter> = d
            .weyl_group(WeylKind::Full)
            .iter()
            .map(|w| HCParameter::discrete_series(&d, w.apply(&chi)).unwrap())
            .filter(|p| d.is_k_dominant(&p.chi))
            .collect();
        assert_eq!(params.len(), 3);
        let idx: Vec<DiracIndex> = params.iter().map(|p| dirac_index_limits(&d, p).unwrap()).collect();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(dirac_pairing(&idx[i], &idx[j]).unwrap().value, i64::from(i == j));
            }
        }
    }
}
