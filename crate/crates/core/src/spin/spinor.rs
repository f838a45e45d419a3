use serde::Serialize;

use crate::error::{Error, Result};
use crate::weights::{decompose, dual, tensor, Cover, LaurentElement, RootDatum, VirtualCharacter, Weight};

/// Half-spin modules S⁺, S⁻ as characters of K̃.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpinorPair {
    pub s_plus: VirtualCharacter,
    pub s_minus: VirtualCharacter,
    pub reference_chamber: usize,
    #[serde(skip)]
    pub weights_plus: LaurentElement,
    #[serde(skip)]
    pub weights_minus: LaurentElement,
}

impl SpinorPair {
    pub fn difference(&self) -> VirtualCharacter {
        self.s_plus.try_sub(&self.s_minus).expect("both halves live on K̃")
    }

    /// Every weight of S = S⁺ ⊕ S⁻.
    pub fn all_weights(&self) -> Vec<&Weight> {
        self.weights_plus.terms().keys().chain(self.weights_minus.terms().keys()).collect()
    }
}

/// S = ∧(u∩p) ⊗ ℂ_{−ρ_n}: weights −ρ_n + Σ_{β∈I} β, graded by |I| mod 2.
pub fn spinor_modules(datum: &RootDatum, reference_chamber: usize) -> Result<SpinorPair> {
    datum.chamber(reference_chamber)?;
    let noncompact = datum.noncompact_positive(reference_chamber);
    let rho_n = &datum.rho_vectors(reference_chamber)?.rho_n;
    let mut plus = LaurentElement::new();
    let mut minus = LaurentElement::new();
    for mask in 0u64..(1 << noncompact.len()) {
        let mut w = -rho_n;
        for (i, b) in noncompact.iter().enumerate() {
            if mask >> i & 1 == 1 {
                w = &w + b;
            }
        }
        if mask.count_ones() % 2 == 0 {
            plus.add_term(w, 1);
        } else {
            minus.add_term(w, 1);
        }
    }
    Ok(SpinorPair {
        s_plus: decompose(datum, &plus, Cover::KTilde)?,
        s_minus: decompose(datum, &minus, Cover::KTilde)?,
        reference_chamber,
        weights_plus: plus,
        weights_minus: minus,
    })
}

/// Weights of ∧^i p, one Laurent element per degree i = 0..=dim p.
pub fn wedge_p_degrees(datum: &RootDatum) -> Vec<LaurentElement> {
    let noncompact: Vec<&Weight> =
        datum.roots().iter().enumerate().filter(|(i, _)| !datum.is_compact(*i)).map(|(_, r)| r).collect();
    let mut out = vec![LaurentElement::new(); noncompact.len() + 1];
    for mask in 0u64..(1 << noncompact.len()) {
        let mut w = Weight::zero(datum.rank());
        for (i, b) in noncompact.iter().enumerate() {
            if mask >> i & 1 == 1 {
                w = &w + b;
            }
        }
        out[mask.count_ones() as usize].add_term(w, 1);
    }
    out
}

/// Σ_i (−1)^i [∧^i p], checked against (S⁺ − S⁻)* ⊗ (S⁺ − S⁻).
pub fn wedge_p_alternating(datum: &RootDatum) -> Result<VirtualCharacter> {
    let mut alt = LaurentElement::new();
    for (i, e) in wedge_p_degrees(datum).iter().enumerate() {
        alt = &alt + &e.scale(if i % 2 == 0 { 1 } else { -1 });
    }
    let lhs = decompose(datum, &alt, Cover::K)?;
    let sp = spinor_modules(datum, 0)?;
    let diff = sp.difference();
    let rhs = tensor(datum, &dual(datum, &diff), &diff)?;
    if lhs != rhs {
        return Err(Error::IdentityFailed(format!(
            "alternating wedge {} differs from spinor square {}",
            serde_json::to_string(&lhs).unwrap_or_default(),
            serde_json::to_string(&rhs).unwrap_or_default()
        )));
    }
    Ok(lhs)
}
