use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// A point of the weight lattice in doubled coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn scaled(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|x| x * k).collect())
    }

    /// Exact halving; `None` if some coordinate is odd.
    pub fn halved(&self) -> Option<Weight> {
        self.0.iter().all(|x| x % 2 == 0).then(|| Weight(self.0.iter().map(|x| x / 2).collect()))
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<i64>> for Weight {
    fn from(v: Vec<i64>) -> Self {
        Weight(v)
    }
}

impl<const N: usize> From<[i64; N]> for Weight {
    fn from(v: [i64; N]) -> Self {
        Weight(v.to_vec())
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, o: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), o.rank());
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, o: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), o.rank());
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

/// Which group a character lives on: K itself, or genuinely on the spin cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Cover {
    K,
    KTilde,
}

impl Cover {
    /// Cover of a tensor product: genuineness adds mod 2.
    pub fn combine(self, other: Cover) -> Cover {
        if self == other {
            Cover::K
        } else {
            Cover::KTilde
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Cover::K => "K",
            Cover::KTilde => "KTilde",
        }
    }
}

/// A finite integer combination of exponentials `e^μ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentElement {
    terms: BTreeMap<Weight, i64>,
}

impl LaurentElement {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn monomial(w: Weight, c: i64) -> Self {
        let mut e = Self::new();
        e.add_term(w, c);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (Weight, i64)>>(it: I) -> Self {
        let mut e = Self::new();
        for (w, c) in it {
            e.add_term(w, c);
        }
        e
    }

    pub fn add_term(&mut self, w: Weight, c: i64) {
        if c == 0 {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn coeff(&self, w: &Weight) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> &BTreeMap<Weight, i64> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, &i64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of coefficients: the value at the identity of the torus.
    pub fn augmentation(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::new();
        }
        LaurentElement { terms: self.terms.iter().map(|(w, c)| (w.clone(), c * k)).collect() }
    }

    /// Multiplication by `e^shift`.
    pub fn shift(&self, shift: &Weight) -> Self {
        LaurentElement { terms: self.terms.iter().map(|(w, c)| (w + shift, *c)).collect() }
    }

    pub fn map_weights<F: Fn(&Weight) -> Weight>(&self, f: F) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, c)| (f(w), *c)))
    }

    /// `f(μ) ↦ f(−μ)`.
    pub fn conjugate(&self) -> Self {
        self.map_weights(|w| -w)
    }

    /// Coefficient dot product.
    pub fn dot(&self, other: &Self) -> i64 {
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        small.terms.iter().map(|(w, c)| c * big.coeff(w)).sum()
    }
}

impl Add for &LaurentElement {
    type Output = LaurentElement;
    fn add(self, o: &LaurentElement) -> LaurentElement {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), *c);
        }
        out
    }
}

impl Sub for &LaurentElement {
    type Output = LaurentElement;
    fn sub(self, o: &LaurentElement) -> LaurentElement {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

impl Neg for &LaurentElement {
    type Output = LaurentElement;
    fn neg(self) -> LaurentElement {
        self.scale(-1)
    }
}

impl Mul for &LaurentElement {
    type Output = LaurentElement;
    fn mul(self, o: &LaurentElement) -> LaurentElement {
        let mut acc: BTreeMap<Weight, i64> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                *acc.entry(a + b).or_insert(0) += x * y;
            }
        }
        acc.retain(|_, c| *c != 0);
        LaurentElement { terms: acc }
    }
}

/// An integer combination of irreducible characters, keyed by highest weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VirtualCharacter {
    terms: BTreeMap<Weight, i64>,
    cover: Cover,
}

#[derive(Serialize)]
struct Term<'a> {
    weight: &'a Weight,
    coeff: i64,
}

impl Serialize for VirtualCharacter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (weight, coeff) in &self.terms {
            seq.serialize_element(&Term { weight, coeff: *coeff })?;
        }
        seq.end()
    }
}

impl VirtualCharacter {
    pub fn zero(cover: Cover) -> Self {
        VirtualCharacter { terms: BTreeMap::new(), cover }
    }

    pub fn irreducible(hw: Weight, cover: Cover) -> Self {
        Self::from_terms(cover, [(hw, 1)])
    }

    pub fn from_terms<I: IntoIterator<Item = (Weight, i64)>>(cover: Cover, it: I) -> Self {
        let mut v = Self::zero(cover);
        for (w, c) in it {
            v.add_term(w, c);
        }
        v
    }

    pub fn cover(&self) -> Cover {
        self.cover
    }

    pub fn add_term(&mut self, w: Weight, c: i64) {
        if c == 0 {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn coeff(&self, w: &Weight) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> &BTreeMap<Weight, i64> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every coefficient is nonnegative.
    pub fn is_actual(&self) -> bool {
        self.terms.values().all(|&c| c > 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.cover, self.terms.iter().map(|(w, c)| (w.clone(), c * k)))
    }

    fn check_cover(&self, o: &Self) -> Result<()> {
        if self.cover != o.cover {
            return Err(Error::CoverMismatch(self.cover.name(), o.cover.name()));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check_cover(o)?;
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), *c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.try_add(&o.scale(-1))
    }

    /// Σ_γ a(γ)·b(γ) over the irreducible basis.
    pub fn pair(&self, o: &Self) -> Result<i64> {
        self.check_cover(o)?;
        Ok(self.terms.iter().map(|(w, c)| c * o.coeff(w)).sum())
    }
}

pub fn pair(a: &VirtualCharacter, b: &VirtualCharacter) -> Result<i64> {
    a.pair(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laurent_terms_cancel() {
        let mut e = LaurentElement::monomial(Weight::from([1]), 2);
        e.add_term(Weight::from([1]), -2);
        assert!(e.is_empty());
        let a = LaurentElement::from_terms([(Weight::from([1]), 1), (Weight::from([-1]), 1)]);
        let sq = &a * &a;
        assert_eq!(sq.coeff(&Weight::from([0])), 2);
        assert_eq!(sq.augmentation(), 4);
    }

    #[test]
    fn cover_combination_is_mod_two() {
        assert_eq!(Cover::K.combine(Cover::K), Cover::K);
        assert_eq!(Cover::K.combine(Cover::KTilde), Cover::KTilde);
        assert_eq!(Cover::KTilde.combine(Cover::KTilde), Cover::K);
    }

    #[test]
    fn pairing_rejects_mixed_covers() {
        let a = VirtualCharacter::irreducible(Weight::from([1]), Cover::K);
        let b = VirtualCharacter::irreducible(Weight::from([1]), Cover::KTilde);
        assert_eq!(a.pair(&b), Err(Error::CoverMismatch("K", "KTilde")));
        assert_eq!(a.pair(&a), Ok(1));
    }

    #[test]
    fn virtual_character_json_is_sorted() {
        let v = VirtualCharacter::from_terms(Cover::K, [(Weight::from([2]), -1), (Weight::from([-2]), 3)]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"[{"weight":[-2],"coeff":3},{"weight":[2],"coeff":-1}]"#);
    }
}
