use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::algebra::LabAlgebra;
use super::module::MatrixHCModule;
use super::spinor::SpinorMatrices;
use crate::error::{Error, Result};
use crate::fredholm::{fredholm_index, FredholmPairData};
use crate::linalg::{q, ExactMatrix, Subspace, Q};
use crate::spin::DiracIndex;
use crate::weights::{decompose, weyl_dimension, Cover, LaurentElement, VirtualCharacter, Weight};

/// K̃-weights of the basis x ⊗ s of X ⊗ S, in the order x·dim S + s.
pub fn tensor_weights(x: &MatrixHCModule, sp: &SpinorMatrices) -> Vec<Weight> {
    x.weights.iter().flat_map(|wx| sp.weights.iter().map(move |ws| wx + ws)).collect()
}

pub fn tensor_odd(x: &MatrixHCModule, sp: &SpinorMatrices) -> Vec<bool> {
    (0..x.dimension).flat_map(|_| sp.odd.iter().copied()).collect()
}

/// Grading operator on X ⊗ S.
pub fn tensor_grading(x: &MatrixHCModule, sp: &SpinorMatrices) -> ExactMatrix {
    ExactMatrix::identity(x.dimension).kron(&sp.grading())
}

/// Δ(k) = π(k) ⊗ 1 + 1 ⊗ α(k) for the `pos`-th compact basis element.
pub fn diagonal_action(alg: &LabAlgebra, x: &MatrixHCModule, sp: &SpinorMatrices, pos: usize) -> ExactMatrix {
    let k = alg.compact()[pos];
    &x.actions[k].kron(&ExactMatrix::identity(sp.dim())) + &ExactMatrix::identity(x.dimension).kron(&sp.alpha[pos])
}

/// D = Σ_{j,k} (G'⁻¹)_{jk} π(Y'_k) ⊗ γ(Y'_j) for the p basis Y' = P·Y, G' its Gram matrix.
pub fn dirac_matrix_in_basis(
    alg: &LabAlgebra,
    x: &MatrixHCModule,
    sp: &SpinorMatrices,
    change: &ExactMatrix,
) -> Result<ExactMatrix> {
    let p = alg.p_basis();
    if change.shape() != (p.len(), p.len()) || change.rank() != p.len() {
        return Err(Error::InvalidParameter("basis change must be invertible on p".into()));
    }
    let g = &(change * &alg.p_gram()) * &change.transpose();
    let ginv = g.inverse().expect("nondegenerate");
    let n = x.dimension;
    let pi: Vec<ExactMatrix> = (0..p.len())
        .map(|i| {
            let mut m = ExactMatrix::zeros(n, n);
            for (j, &pj) in p.iter().enumerate() {
                if !change[(i, j)].is_zero() {
                    m = &m + &x.actions[pj].scale(&change[(i, j)]);
                }
            }
            m
        })
        .collect();
    let gam: Vec<ExactMatrix> = (0..p.len()).map(|i| sp.gamma_of(change.row(i))).collect();
    let mut d = ExactMatrix::zeros(n * sp.dim(), n * sp.dim());
    for j in 0..p.len() {
        for k in 0..p.len() {
            if !ginv[(j, k)].is_zero() {
                d = &d + &pi[k].kron(&gam[j]).scale(&ginv[(j, k)]);
            }
        }
    }
    Ok(d)
}

pub fn dirac_matrix(alg: &LabAlgebra, x: &MatrixHCModule, sp: &SpinorMatrices) -> ExactMatrix {
    let n = alg.p_basis().len();
    dirac_matrix_in_basis(alg, x, sp, &ExactMatrix::identity(n)).expect("identity change")
}

/// Unimodular change of basis on p used for the independence check.
pub fn alternate_p_basis(n: usize) -> ExactMatrix {
    let mut m = ExactMatrix::identity(n);
    for i in 0..n.saturating_sub(1) {
        m[(i, i + 1)] = q(1);
    }
    if n > 1 {
        m[(n - 1, 0)] = q(-1);
    }
    m
}

/// Checks that D is odd and does not depend on the choice of basis of p.
pub fn check_dirac_operator(alg: &LabAlgebra, x: &MatrixHCModule, sp: &SpinorMatrices) -> Result<ExactMatrix> {
    let d = dirac_matrix(alg, x, sp);
    let other = dirac_matrix_in_basis(alg, x, sp, &alternate_p_basis(alg.p_basis().len()))?;
    if let Some((r, c)) = d.first_mismatch(&other) {
        return Err(Error::IdentityFailed(format!("D depends on the basis of p at entry ({r}, {c})")));
    }
    let eps = tensor_grading(x, sp);
    if &(&eps * &d) + &(&d * &eps) != ExactMatrix::zeros(d.rows(), d.cols()) {
        return Err(Error::IdentityFailed("D is not odd".into()));
    }
    Ok(d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParthasarathyReport {
    pub dimension: usize,
    #[serde(serialize_with = "crate::linalg::ser_q")]
    pub constant: Q,
}

/// D² = −Cas_g ⊗ 1 + Δ(Cas_k) + (‖ρ_c‖² − ‖ρ‖²) as matrices on X ⊗ S.
pub fn verify_parthasarathy(alg: &LabAlgebra, x: &MatrixHCModule, sp: &SpinorMatrices) -> Result<ParthasarathyReport> {
    let d = dirac_matrix(alg, x, sp);
    let lhs = &d * &d;
    let all: Vec<usize> = (0..alg.dim()).collect();
    let cas_g = alg.casimir(&all, &x.actions).kron(&ExactMatrix::identity(sp.dim()));
    let delta: Vec<ExactMatrix> = (0..alg.compact().len()).map(|i| diagonal_action(alg, x, sp, i)).collect();
    let mut full = vec![ExactMatrix::zeros(0, 0); alg.dim()];
    for (i, &k) in alg.compact().iter().enumerate() {
        full[k] = delta[i].clone();
    }
    let cas_k = alg.casimir(alg.compact(), &full);
    let constant = alg.norm2(&alg.rho_c()) - alg.norm2(&alg.rho());
    let rhs = &(&cas_k - &cas_g) + &ExactMatrix::identity(lhs.rows()).scale(&constant);
    if let Some((r, c)) = lhs.first_mismatch(&rhs) {
        return Err(Error::IdentityFailed(format!(
            "D² ≠ −Cas_g + Δ(Cas_k) + const at entry ({r}, {c}): {} vs {}",
            lhs[(r, c)],
            rhs[(r, c)]
        )));
    }
    Ok(ParthasarathyReport { dimension: lhs.rows(), constant })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsotypicScalar {
    pub k_type: Weight,
    pub highest_weight_vectors: usize,
    #[serde(serialize_with = "crate::linalg::ser_q")]
    pub scalar: Q,
}

/// D² acts on the τ-isotypic part of X ⊗ S by −‖Λ‖² + ‖τ + ρ_c‖².
///
/// The isotypic part is generated by its K-highest-weight vectors of weight τ,
/// so the scalar is checked on those, and their count times dim F_τ must
/// exhaust X ⊗ S.
pub fn verify_dsquared_scalar(
    alg: &LabAlgebra,
    x: &MatrixHCModule,
    sp: &SpinorMatrices,
) -> Result<Vec<IsotypicScalar>> {
    let d = dirac_matrix(alg, x, sp);
    let d2 = &d * &d;
    let weights = tensor_weights(x, sp);
    let raising: Vec<ExactMatrix> = alg
        .positive_compact()
        .iter()
        .map(|&k| diagonal_action(alg, x, sp, alg.compact().iter().position(|&c| c == k).expect("compact")))
        .collect();
    let lambda2 = alg.norm2(&x.infinitesimal_character);
    let rho_c = alg.rho_c();
    let mut by_weight: BTreeMap<&Weight, Vec<usize>> = BTreeMap::new();
    for (i, w) in weights.iter().enumerate() {
        by_weight.entry(w).or_default().push(i);
    }
    let n = weights.len();
    let mut out = Vec::new();
    let mut covered = 0i64;
    for (tau, idx) in by_weight {
        let cols: Vec<Vec<Q>> = idx
            .iter()
            .map(|&i| {
                let mut v = vec![Q::zero(); n];
                v[i] = q(1);
                v
            })
            .collect();
        let block = ExactMatrix::from_columns(n, &cols);
        let constraint = if raising.is_empty() {
            ExactMatrix::zeros(0, idx.len())
        } else {
            ExactMatrix::vstack(&raising.iter().map(|r| r * &block).collect::<Vec<_>>().iter().collect::<Vec<_>>())?
        };
        let hw: Vec<Vec<Q>> = constraint.kernel().iter().map(|c| block.apply(c)).collect();
        if hw.is_empty() {
            continue;
        }
        let scalar = alg.norm2(&(tau + &rho_c)) - &lambda2;
        for v in &hw {
            let image = d2.apply(v);
            if image.iter().zip(v).any(|(a, b)| *a != b * &scalar) {
                return Err(Error::IdentityFailed(format!("D² is not {scalar} on the K̃-type {:?}", tau.0)));
            }
        }
        covered += hw.len() as i64 * weyl_dimension(alg.datum(), tau);
        out.push(IsotypicScalar { k_type: tau.clone(), highest_weight_vectors: hw.len(), scalar });
    }
    if covered != n as i64 {
        return Err(Error::IdentityFailed(format!("K̃-types account for {covered} of {n} dimensions")));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyWeight {
    pub weight: Weight,
    pub plus: usize,
    pub minus: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiracCohomology {
    /// Per K̃-weight dimensions of H⁺ and H⁻.
    pub weights: Vec<CohomologyWeight>,
    pub dim_plus: usize,
    pub dim_minus: usize,
    /// H⁺ and H⁻ as K̃-characters.
    pub plus: VirtualCharacter,
    pub minus: VirtualCharacter,
    pub index: DiracIndex,
}

/// H_Dir = ker D/(ker D ∩ Im D), computed on each K̃-weight space.
///
/// On a weight space D is the odd map (D⁺⁻, D⁻⁺), and H⁺, H⁻ are exactly the
/// quotients a and b of that pair.
pub fn dirac_cohomology(alg: &LabAlgebra, x: &MatrixHCModule, sp: &SpinorMatrices) -> Result<DiracCohomology> {
    let d = dirac_matrix(alg, x, sp);
    let weights = tensor_weights(x, sp);
    let odd = tensor_odd(x, sp);
    let mut by_weight: BTreeMap<&Weight, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (i, w) in weights.iter().enumerate() {
        let e = by_weight.entry(w).or_default();
        if odd[i] { &mut e.1 } else { &mut e.0 }.push(i);
    }
    let mut rows = Vec::new();
    let mut plus = LaurentElement::new();
    let mut minus = LaurentElement::new();
    for (w, (ev, od)) in by_weight {
        let pair = FredholmPairData::new(d.select(&od, &ev), d.select(&ev, &od))?;
        let parts = fredholm_index(&pair)?;
        if parts.a + parts.b > 0 {
            plus.add_term(w.clone(), parts.a as i64);
            minus.add_term(w.clone(), parts.b as i64);
            rows.push(CohomologyWeight { weight: w.clone(), plus: parts.a, minus: parts.b });
        }
    }
    let plus = decompose(alg.datum(), &plus, Cover::KTilde)?;
    let minus = decompose(alg.datum(), &minus, Cover::KTilde)?;
    let index = DiracIndex { index: plus.try_sub(&minus)? };
    Ok(DiracCohomology {
        dim_plus: rows.iter().map(|r| r.plus).sum(),
        dim_minus: rows.iter().map(|r| r.minus).sum(),
        weights: rows,
        plus,
        minus,
        index,
    })
}

/// ker D and Im D on X ⊗ S, for direct inspection.
pub fn kernel_and_image(d: &ExactMatrix) -> (Subspace, Subspace) {
    (Subspace::kernel(d), Subspace::image(d))
}
