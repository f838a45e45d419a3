use std::collections::HashMap;

use num_rational::Ratio;

use super::datum::{RootDatum, WeylGroupElement, WeylKind};
use super::lattice::{Cover, LaurentElement, VirtualCharacter, Weight};
use crate::error::{Error, Result};

/// Weyl character of the irreducible with highest weight `hw`, for the
/// positive system `positive` and Weyl group `group`.
///
/// Built as e^{−ρ}·A_{hw+ρ} followed by exact division by each 1 − e^{−α}.
pub fn weyl_character(
    datum: &RootDatum,
    positive: &[&Weight],
    group: &[WeylGroupElement],
    hw: &Weight,
) -> LaurentElement {
    let mut rho2 = Weight::zero(datum.rank());
    for a in positive {
        rho2 = &rho2 + a;
    }
    let rho = rho2.halved().expect("half-sum checked at datum construction");
    let shifted = hw + &rho;
    let mut f = LaurentElement::from_terms(group.iter().map(|w| (&w.apply(&shifted) - &rho, i64::from(w.sign))));
    for a in positive {
        f = divide_one_minus(datum, &f, a).expect("Weyl numerator is divisible by its denominator");
    }
    f
}

/// Solves (1 − e^{−α})·g = f, returning `None` when no Laurent solution exists.
fn divide_one_minus(datum: &RootDatum, f: &LaurentElement, alpha: &Weight) -> Option<LaurentElement> {
    if f.is_empty() {
        return Some(LaurentElement::new());
    }
    let height = |w: &Weight| datum.dot(w, alpha);
    let step = datum.dot(alpha, alpha);
    let lo = f.iter().map(|(w, _)| height(w)).min().expect("nonempty");
    let hi = f.iter().map(|(w, _)| height(w)).max().expect("nonempty");
    // g(μ) = Σ_{k≥0} f(μ + kα), supported on strings running down from supp f.
    let mut g = LaurentElement::new();
    let mut visited = std::collections::HashSet::new();
    for (s, _) in f.iter() {
        let mut mu = s.clone();
        while height(&mu) >= lo {
            if visited.insert(mu.clone()) {
                let mut total = 0;
                let mut nu = mu.clone();
                while height(&nu) <= hi {
                    total += f.coeff(&nu);
                    nu = &nu + alpha;
                }
                g.add_term(mu.clone(), total);
            }
            mu = &mu - alpha;
            if step == 0 {
                return None;
            }
        }
    }
    let back = &g - &g.shift(&-alpha);
    (back == *f).then_some(g)
}

/// Full weight expansion of the irreducible K̃-character with highest weight `hw`.
pub fn irr_character(datum: &RootDatum, hw: &Weight) -> Result<LaurentElement> {
    if hw.rank() != datum.rank() {
        return Err(Error::ShapeMismatch(format!("weight {hw:?} has wrong rank")));
    }
    if !datum.is_k_dominant(hw) {
        return Err(Error::NonDominantWeight(hw.0.clone()));
    }
    Ok(weyl_character(datum, &datum.compact_positive(0), datum.weyl_group(WeylKind::Compact), hw))
}

/// Character of the finite-dimensional g-module with b₁-dominant highest weight `hw`.
pub fn g_character(datum: &RootDatum, hw: &Weight) -> Result<LaurentElement> {
    if hw.rank() != datum.rank() {
        return Err(Error::ShapeMismatch(format!("weight {hw:?} has wrong rank")));
    }
    if !datum.is_dominant_in(hw, 0) {
        return Err(Error::NonDominantWeight(hw.0.clone()));
    }
    Ok(weyl_character(datum, &datum.positive_roots(0), datum.weyl_group(WeylKind::Full), hw))
}

/// Weyl dimension formula for K̃: Π ⟨hw+ρ_c, α⟩ / ⟨ρ_c, α⟩.
pub fn weyl_dimension(datum: &RootDatum, hw: &Weight) -> i64 {
    let rho_c = &datum.reference_rho().rho_c;
    let shifted = hw + rho_c;
    let mut r = Ratio::from_integer(1i128);
    for a in datum.compact_positive(0) {
        r *= Ratio::new(i128::from(datum.dot(&shifted, a)), i128::from(datum.dot(rho_c, a)));
    }
    assert!(r.is_integer(), "Weyl dimension must be an integer");
    i64::try_from(r.to_integer()).expect("dimension fits in i64")
}

/// Signed dimension of a virtual character.
pub fn dim(datum: &RootDatum, v: &VirtualCharacter) -> i64 {
    v.terms().iter().map(|(w, c)| c * weyl_dimension(datum, w)).sum()
}

pub fn is_w_k_invariant(datum: &RootDatum, f: &LaurentElement) -> bool {
    datum
        .weyl_group(WeylKind::Compact)
        .iter()
        .all(|w| f.iter().all(|(mu, c)| f.coeff(&w.apply(mu)) == *c))
}

/// Rewrites a W_k-invariant Laurent element in the basis of irreducible characters.
pub fn decompose(datum: &RootDatum, f: &LaurentElement, cover: Cover) -> Result<VirtualCharacter> {
    if !is_w_k_invariant(datum, f) {
        return Err(Error::NotInvariant);
    }
    let rho_c = &datum.reference_rho().rho_c;
    let mut out = VirtualCharacter::zero(cover);
    for (mu, c) in f.iter() {
        let nu = mu + rho_c;
        let (dom, w) = datum.k_dominant_conjugate(&nu);
        if !datum.is_k_regular_dominant(&dom) {
            continue;
        }
        let hw = &dom - rho_c;
        datum.check_cover(&hw, cover)?;
        out.add_term(hw, i64::from(w.sign) * c);
    }
    Ok(out)
}

/// Re-expands a virtual character into its weight multiset.
pub fn expand(datum: &RootDatum, v: &VirtualCharacter) -> Result<LaurentElement> {
    let mut out = LaurentElement::new();
    for (w, c) in v.terms() {
        out = &out + &irr_character(datum, w)?.scale(*c);
    }
    Ok(out)
}

/// Tensor product of virtual characters.
pub fn tensor(datum: &RootDatum, a: &VirtualCharacter, b: &VirtualCharacter) -> Result<VirtualCharacter> {
    let cover = a.cover().combine(b.cover());
    let mut cache: HashMap<&Weight, LaurentElement> = HashMap::new();
    let mut product = LaurentElement::new();
    for (wa, ca) in a.terms() {
        // Σ_b c_b·ch(b) expanded once per factor of a.
        let ea = irr_character(datum, wa)?;
        for (wb, cb) in b.terms() {
            let eb = match cache.get(wb) {
                Some(e) => e.clone(),
                None => {
                    let e = irr_character(datum, wb)?;
                    cache.insert(wb, e.clone());
                    e
                }
            };
            product = &product + &(&ea * &eb).scale(ca * cb);
        }
    }
    decompose(datum, &product, cover)
}

/// Contragredient: highest weight λ ↦ −w₀λ.
pub fn dual(datum: &RootDatum, a: &VirtualCharacter) -> VirtualCharacter {
    let w0 = datum.compact_longest();
    VirtualCharacter::from_terms(a.cover(), a.terms().iter().map(|(w, c)| (-&w0.apply(w), *c)))
}

pub fn trivial(datum: &RootDatum) -> VirtualCharacter {
    VirtualCharacter::irreducible(Weight::zero(datum.rank()), Cover::K)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn su21() -> RootDatum {
        RootDatum::preset("su21").unwrap()
    }

    #[test]
    fn trivial_and_abelian_characters() {
        let d = RootDatum::preset("sl2R").unwrap();
        assert_eq!(irr_character(&d, &Weight::from([0])).unwrap(), LaurentElement::monomial(Weight::from([0]), 1));
        assert_eq!(irr_character(&d, &Weight::from([3])).unwrap(), LaurentElement::monomial(Weight::from([3]), 1));
    }

    #[test]
    fn su21_compact_fundamental_weight_is_two_dimensional() {
        let d = su21();
        // ω₁ of the compact SU(2): ⟨ω₁, α₁∨⟩ = 1, orthogonal to the U(1) direction.
        let hw = Weight::from([2, 0]);
        let ch = irr_character(&d, &hw).unwrap();
        assert_eq!(ch.len(), 2);
        assert_eq!(ch.augmentation(), 2);
        assert_eq!(weyl_dimension(&d, &hw), 2);
    }

    #[test]
    fn non_dominant_rejected() {
        let d = su21();
        assert_eq!(irr_character(&d, &Weight::from([-4, 2])), Err(Error::NonDominantWeight(vec![-4, 2])));
    }

    #[test]
    fn sl2_decompose_is_weightwise() {
        let d = RootDatum::preset("sl2R").unwrap();
        let f = LaurentElement::from_terms([(Weight::from([2]), 1), (Weight::from([-2]), 1), (Weight::from([0]), 1)]);
        let v = decompose(&d, &f, Cover::K).unwrap();
        assert_eq!(v.len(), 3);
        assert!(v.terms().values().all(|&c| c == 1));
    }

    #[test]
    fn non_invariant_rejected() {
        let d = su21();
        let f = LaurentElement::monomial(Weight::from([2, 0]), 1);
        assert_eq!(decompose(&d, &f, Cover::K), Err(Error::NotInvariant));
    }

    #[test]
    fn sl2_dual_negates() {
        let d = RootDatum::preset("sl2R").unwrap();
        let v = VirtualCharacter::irreducible(Weight::from([-1]), Cover::KTilde);
        assert_eq!(dual(&d, &v), VirtualCharacter::irreducible(Weight::from([1]), Cover::KTilde));
    }

    #[test]
    fn su21_product_dimensions() {
        let d = su21();
        let a = VirtualCharacter::irreducible(Weight::from([2, 0]), Cover::K);
        let b = VirtualCharacter::irreducible(Weight::from([4, 2]), Cover::K);
        let t = tensor(&d, &a, &b).unwrap();
        assert!(t.is_actual());
        assert_eq!(dim(&d, &t), dim(&d, &a) * dim(&d, &b));
    }

    #[test]
    fn g_character_of_sl3_adjoint() {
        let d = su21();
        // Highest root α₁+α₂ = (2,2) stored.
        let ch = g_character(&d, &Weight::from([2, 2])).unwrap();
        assert_eq!(ch.augmentation(), 8);
        assert_eq!(ch.coeff(&Weight::from([0, 0])), 2);
    }
}
