use num_traits::Zero;
use serde::Serialize;

use super::algebra::LabAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{q, qf, ExactMatrix, Q};
use crate::weights::Weight;

/// Clifford action of p on S = ∧U, basis ordered by subsets of U (by size, then lexicographically).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpinorMatrices {
    pub subsets: Vec<Vec<usize>>,
    /// γ of the p basis, U first, then U*.
    pub gamma: Vec<ExactMatrix>,
    /// Action α of each element of the compact basis.
    pub alpha: Vec<ExactMatrix>,
    pub odd: Vec<bool>,
    pub weights: Vec<Weight>,
}

pub(crate) fn subsets(m: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> =
        (0u32..1 << m).map(|mask| (0..m).filter(|i| mask & (1 << i) != 0).collect()).collect();
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    all
}

/// u_i ∧ u_I as (sign, sorted subset), or None if i ∈ I.
pub(crate) fn wedge_front(i: usize, set: &[usize]) -> Option<(i64, Vec<usize>)> {
    if set.contains(&i) {
        return None;
    }
    let before = set.iter().filter(|&&j| j < i).count();
    let mut out = set.to_vec();
    out.insert(before, i);
    Some((if before % 2 == 0 { 1 } else { -1 }, out))
}

impl SpinorMatrices {
    pub fn dim(&self) -> usize {
        self.subsets.len()
    }

    pub fn index_of(&self, set: &[usize]) -> usize {
        self.subsets.iter().position(|s| s == set).expect("subset of U")
    }

    /// Diagonal ±1 by exterior parity.
    pub fn grading(&self) -> ExactMatrix {
        let mut e = ExactMatrix::identity(self.dim());
        for (i, &o) in self.odd.iter().enumerate() {
            if o {
                e[(i, i)] = q(-1);
            }
        }
        e
    }

    /// γ(v) for v given by coordinates over the p basis.
    pub fn gamma_of(&self, coords: &[Q]) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(self.dim(), self.dim());
        for (c, g) in coords.iter().zip(&self.gamma) {
            if !c.is_zero() {
                out = &out + &g.scale(c);
            }
        }
        out
    }
}

/// Coordinates over the p basis of the element with full coordinates `c`.
fn p_coords(alg: &LabAlgebra, c: &[Q]) -> Vec<Q> {
    alg.p_basis().iter().map(|&i| c[i].clone()).collect()
}

/// γ(u_i)(λ) = u_i ∧ λ and γ(u*_i)(λ₁∧…∧λ_r) = 2 Σ_j (−1)^j B(u*_i, λ_j) λ₁∧…λ̂_j…∧λ_r.
pub fn build_spinor_matrices(alg: &LabAlgebra) -> Result<SpinorMatrices> {
    let m = alg.u().len();
    let sets = subsets(m);
    let n = sets.len();
    let index = |s: &[usize]| sets.iter().position(|t| t == s).expect("subset");
    let mut gamma = Vec::with_capacity(2 * m);
    for i in 0..m {
        let mut g = ExactMatrix::zeros(n, n);
        for (col, set) in sets.iter().enumerate() {
            if let Some((sign, out)) = wedge_front(i, set) {
                g[(index(&out), col)] += q(sign);
            }
        }
        gamma.push(g);
    }
    for i in 0..m {
        let mut g = ExactMatrix::zeros(n, n);
        for (col, set) in sets.iter().enumerate() {
            for (pos, &lam) in set.iter().enumerate() {
                let b = alg.form(alg.u_star()[i], alg.u()[lam]);
                if b.is_zero() {
                    continue;
                }
                let sign = if (pos + 1) % 2 == 0 { 1 } else { -1 };
                let mut rest = set.clone();
                rest.remove(pos);
                g[(index(&rest), col)] += b * q(2 * sign);
            }
        }
        gamma.push(g);
    }
    let p = alg.p_basis();
    for a in 0..p.len() {
        for b in a..p.len() {
            let anti = &(&gamma[a] * &gamma[b]) + &(&gamma[b] * &gamma[a]);
            if anti != ExactMatrix::identity(n).scale(&(alg.form(p[a], p[b]) * q(-2))) {
                return Err(Error::CliffordRelationFailed(p[a], p[b]));
            }
        }
    }
    let mut sp = SpinorMatrices {
        odd: sets.iter().map(|s| s.len() % 2 == 1).collect(),
        subsets: sets,
        gamma,
        alpha: Vec::new(),
        weights: Vec::new(),
    };
    // α(x) = −¼ Σ_k γ([x, Y_k]) γ(Z_k) with Z the B-dual basis of p.
    let ginv = alg.p_gram().inverse().expect("nondegenerate on p");
    for &x in alg.compact() {
        let mut a = ExactMatrix::zeros(n, n);
        for (k, &yk) in p.iter().enumerate() {
            let br = sp.gamma_of(&p_coords(alg, alg.bracket(x, yk)));
            if br.is_zero() {
                continue;
            }
            let zk: Vec<Q> = (0..p.len()).map(|j| ginv[(j, k)].clone()).collect();
            a = &a + &(&br * &sp.gamma_of(&zk));
        }
        sp.alpha.push(a.scale(&qf(-1, 4)));
    }
    for (xi, &x) in alg.compact().iter().enumerate() {
        for (vi, &v) in p.iter().enumerate() {
            let lhs = &(&sp.alpha[xi] * &sp.gamma[vi]) - &(&sp.gamma[vi] * &sp.alpha[xi]);
            if lhs != sp.gamma_of(&p_coords(alg, alg.bracket(x, v))) {
                return Err(Error::IdentityFailed(format!(
                    "spin action of {} is not a derivation on γ({})",
                    alg.names()[x],
                    alg.names()[v]
                )));
            }
        }
    }
    let cartan_pos: Vec<usize> =
        alg.cartan().iter().map(|t| alg.compact().iter().position(|c| c == t).expect("cartan in k")).collect();
    for s in 0..n {
        let eig: Vec<Q> = cartan_pos.iter().map(|&c| sp.alpha[c][(s, s)].clone()).collect();
        let w = alg
            .weight_from_eigenvalues(&eig)
            .ok_or_else(|| Error::IdentityFailed("spinor weight is not integral".into()))?;
        sp.weights.push(w);
    }
    for &c in &cartan_pos {
        let a = &sp.alpha[c];
        if (0..n).any(|r| (0..n).any(|s| r != s && !a[(r, s)].is_zero())) {
            return Err(Error::IdentityFailed("Cartan does not act diagonally on S".into()));
        }
    }
    Ok(sp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::LAB_PRESETS;

    #[test]
    fn sl2_gamma_matrices() {
        let a = LabAlgebra::preset("sl2R").unwrap();
        let sp = build_spinor_matrices(&a).unwrap();
        assert_eq!(sp.gamma[0], ExactMatrix::from_i64(&[vec![0, 0], vec![1, 0]]));
        assert_eq!(sp.gamma[1], ExactMatrix::from_i64(&[vec![0, -2], vec![0, 0]]));
        assert_eq!(sp.weights, vec![Weight::from([-1]), Weight::from([1])]);
    }

    #[test]
    fn spinor_weights_match_spin_dirac() {
        for p in LAB_PRESETS {
            let a = LabAlgebra::preset(p).unwrap();
            let sp = build_spinor_matrices(&a).unwrap();
            let pair = crate::spin::spinor_modules(a.datum(), 0).unwrap();
            let mut plus = crate::weights::LaurentElement::new();
            let mut minus = crate::weights::LaurentElement::new();
            for (w, &o) in sp.weights.iter().zip(&sp.odd) {
                if o { &mut minus } else { &mut plus }.add_term(w.clone(), 1);
            }
            assert_eq!(plus, pair.weights_plus, "{p}");
            assert_eq!(minus, pair.weights_minus, "{p}");
        }
    }

    #[test]
    fn wedge_signs() {
        assert_eq!(wedge_front(0, &[1, 2]), Some((1, vec![0, 1, 2])));
        assert_eq!(wedge_front(1, &[0, 2]), Some((-1, vec![0, 1, 2])));
        assert_eq!(wedge_front(2, &[2]), None);
    }
}
