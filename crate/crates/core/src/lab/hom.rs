use num_traits::Zero;
use serde::Serialize;

use super::algebra::LabAlgebra;
use super::dirac::{diagonal_action, dirac_cohomology, dirac_matrix, tensor_grading, tensor_odd, tensor_weights};
use super::module::MatrixHCModule;
use super::spinor::SpinorMatrices;
use crate::error::{Error, Result};
use crate::fredholm::{fredholm_index, FredholmPairData, IndexParts};
use crate::linalg::{q, CoordinateChart, ExactMatrix, Subspace, Q};
use crate::spin::dirac_pairing;
use crate::weights::{decompose, pair, Cover, LaurentElement};

/// 𝒞 = Hom_K̃(X⊗S, Y⊗S) inside all (dim Y⊗S)×(dim X⊗S) matrices, flattened row-major.
#[derive(Clone, Debug)]
pub struct SuperHomSpace {
    pub rows: usize,
    pub cols: usize,
    /// Basis of 𝒞^{0̄}, maps preserving the S-parity.
    pub even: Vec<Vec<Q>>,
    /// Basis of 𝒞^{1̄}.
    pub odd: Vec<Vec<Q>>,
    even_chart: CoordinateChart,
    odd_chart: CoordinateChart,
}

pub(crate) fn flat(m: &ExactMatrix) -> Vec<Q> {
    m.to_rows().into_iter().flatten().collect()
}

pub(crate) fn unflat(rows: usize, cols: usize, v: &[Q]) -> ExactMatrix {
    ExactMatrix::from_rows(v.chunks(cols.max(1)).take(rows).map(<[Q]>::to_vec).collect())
        .unwrap_or_else(|_| ExactMatrix::zeros(rows, cols))
}

/// Basis of the K-equivariant maps among `units` (flattened indices), via the
/// constraint Φ ↦ A_Y Φ − Φ A_X for each pair in `actions`.
pub(crate) fn equivariant_basis(
    rows: usize,
    cols: usize,
    units: &[usize],
    actions: &[(ExactMatrix, ExactMatrix)],
) -> Result<Vec<Vec<Q>>> {
    let total = rows * cols;
    let unit_vec = |u: usize| {
        let mut v = vec![Q::zero(); total];
        v[u] = q(1);
        v
    };
    if actions.is_empty() {
        return Ok(units.iter().map(|&u| unit_vec(u)).collect());
    }
    let mut blocks = Vec::with_capacity(actions.len());
    for (ay, ax) in actions {
        let cols_c: Vec<Vec<Q>> = units
            .iter()
            .map(|&u| {
                let phi = unflat(rows, cols, &unit_vec(u));
                flat(&(&(ay * &phi) - &(&phi * ax)))
            })
            .collect();
        blocks.push(ExactMatrix::from_columns(total, &cols_c));
    }
    let constraint = ExactMatrix::vstack(&blocks.iter().collect::<Vec<_>>())?;
    Ok(constraint
        .kernel()
        .into_iter()
        .map(|k| {
            let mut v = vec![Q::zero(); total];
            for (c, &u) in k.iter().zip(units) {
                v[u] = c.clone();
            }
            v
        })
        .collect())
}

fn chart(ambient: usize, basis: &[Vec<Q>]) -> Result<CoordinateChart> {
    CoordinateChart::new(ambient, basis)
}

impl SuperHomSpace {
    pub fn build(alg: &LabAlgebra, x: &MatrixHCModule, y: &MatrixHCModule, sp: &SpinorMatrices) -> Result<Self> {
        let (wx, wy) = (tensor_weights(x, sp), tensor_weights(y, sp));
        let (ox, oy) = (tensor_odd(x, sp), tensor_odd(y, sp));
        let (rows, cols) = (wy.len(), wx.len());
        let mut units = [Vec::new(), Vec::new()];
        for r in 0..rows {
            for c in 0..cols {
                if wy[r] == wx[c] {
                    units[usize::from(oy[r] != ox[c])].push(r * cols + c);
                }
            }
        }
        let actions: Vec<(ExactMatrix, ExactMatrix)> = alg
            .compact()
            .iter()
            .enumerate()
            .filter(|(_, k)| !alg.cartan().contains(k))
            .map(|(pos, _)| (diagonal_action(alg, y, sp, pos), diagonal_action(alg, x, sp, pos)))
            .collect();
        let even = equivariant_basis(rows, cols, &units[0], &actions)?;
        let odd = equivariant_basis(rows, cols, &units[1], &actions)?;
        let space = SuperHomSpace {
            rows,
            cols,
            even_chart: chart(rows * cols, &even)?,
            odd_chart: chart(rows * cols, &odd)?,
            even,
            odd,
        };
        space.check_dimension(alg, x, y, sp)?;
        Ok(space)
    }

    /// dim 𝒞^{0̄} = [X⊗S⁺, Y⊗S⁺] + [X⊗S⁻, Y⊗S⁻] and dim 𝒞^{1̄} likewise, as K̃-character pairings.
    fn check_dimension(&self, alg: &LabAlgebra, x: &MatrixHCModule, y: &MatrixHCModule, sp: &SpinorMatrices) -> Result<()> {
        let split = |m: &MatrixHCModule| -> Result<[crate::weights::VirtualCharacter; 2]> {
            let w = tensor_weights(m, sp);
            let o = tensor_odd(m, sp);
            let mut parts = [LaurentElement::new(), LaurentElement::new()];
            for (wt, odd) in w.into_iter().zip(o) {
                parts[usize::from(odd)].add_term(wt, 1);
            }
            Ok([decompose(alg.datum(), &parts[0], Cover::KTilde)?, decompose(alg.datum(), &parts[1], Cover::KTilde)?])
        };
        let [xp, xm] = split(x)?;
        let [yp, ym] = split(y)?;
        let even = pair(&xp, &yp)? + pair(&xm, &ym)?;
        let odd = pair(&xp, &ym)? + pair(&xm, &yp)?;
        if (even, odd) != (self.even.len() as i64, self.odd.len() as i64) {
            return Err(Error::IdentityFailed(format!(
                "dim 𝒞 = ({}, {}) but the character pairing gives ({even}, {odd})",
                self.even.len(),
                self.odd.len()
            )));
        }
        Ok(())
    }

    pub fn even_coords(&self, v: &[Q]) -> Option<Vec<Q>> {
        self.even_chart.coords(v)
    }

    pub fn odd_coords(&self, v: &[Q]) -> Option<Vec<Q>> {
        self.odd_chart.coords(v)
    }

    /// Matrix of `f` from the `from` basis into the chart of `to` coordinates.
    fn restrict(&self, from_even: bool, to_even: bool, f: impl Fn(&ExactMatrix) -> ExactMatrix) -> Result<ExactMatrix> {
        let src = if from_even { &self.even } else { &self.odd };
        let dst_len = if to_even { self.even.len() } else { self.odd.len() };
        let mut cols = Vec::with_capacity(src.len());
        for v in src {
            let image = flat(&f(&unflat(self.rows, self.cols, v)));
            let c = if to_even { self.even_coords(&image) } else { self.odd_coords(&image) };
            cols.push(c.ok_or_else(|| Error::IdentityFailed("image leaves Hom_K̃(X⊗S, Y⊗S)".into()))?);
        }
        Ok(ExactMatrix::from_columns(dst_len, &cols))
    }
}

/// 𝐃Φ = D_Y Φ ε_X − Φ D_X, which is S on 𝒞^{0̄} and T on 𝒞^{1̄}.
pub fn super_commutator(dy: &ExactMatrix, dx: &ExactMatrix, eps_x: &ExactMatrix, phi: &ExactMatrix) -> ExactMatrix {
    &(&(dy * phi) * eps_x) - &(phi * dx)
}

#[derive(Clone, Debug)]
pub struct STOperators {
    pub space: SuperHomSpace,
    pub s: ExactMatrix,
    pub t: ExactMatrix,
    pub(crate) dx: ExactMatrix,
    pub(crate) dy: ExactMatrix,
}

pub fn build_st(alg: &LabAlgebra, x: &MatrixHCModule, y: &MatrixHCModule, sp: &SpinorMatrices) -> Result<STOperators> {
    let space = SuperHomSpace::build(alg, x, y, sp)?;
    let dx = dirac_matrix(alg, x, sp);
    let dy = dirac_matrix(alg, y, sp);
    let eps = tensor_grading(x, sp);
    let s = space.restrict(true, false, |phi| super_commutator(&dy, &dx, &eps, phi))?;
    let t = space.restrict(false, true, |phi| super_commutator(&dy, &dx, &eps, phi))?;
    Ok(STOperators { space, s, t, dx, dy })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct STReport {
    pub dim_even: usize,
    pub dim_odd: usize,
    pub index: IndexParts,
    pub dirac_pairing: i64,
    /// a and b predicted from Hom_K̃ between Dirac cohomologies.
    pub hom_cohomology: (usize, usize),
}

/// All identities for the pair (S, T): TS = D²∘φ + φ∘D², ST likewise,
/// ker ⊕ Im for TS and ST, the index against the Dirac pairing, and the
/// quotient dimensions against Hom_K̃ of the Dirac cohomologies.
pub fn verify_st(alg: &LabAlgebra, x: &MatrixHCModule, y: &MatrixHCModule, sp: &SpinorMatrices) -> Result<STReport> {
    let op = build_st(alg, x, y, sp)?;
    let dx2 = &op.dx * &op.dx;
    let dy2 = &op.dy * &op.dy;
    let squares = |phi: &ExactMatrix| &(&dy2 * phi) + &(phi * &dx2);
    let ts = &op.t * &op.s;
    let st = &op.s * &op.t;
    if ts != op.space.restrict(true, true, squares)? {
        return Err(Error::IdentityFailed("TS φ ≠ D²∘φ + φ∘D²".into()));
    }
    if st != op.space.restrict(false, false, squares)? {
        return Err(Error::IdentityFailed("ST ψ ≠ D²∘ψ + ψ∘D²".into()));
    }
    for (name, m) in [("TS", &ts), ("ST", &st)] {
        if Subspace::kernel(m).intersection_dim(&Subspace::image(m)) != 0 {
            return Err(Error::IdentityFailed(format!("ker {name} ∩ Im {name} ≠ 0")));
        }
    }
    let index = fredholm_index(&FredholmPairData::new(op.s.clone(), op.t.clone())?)?;
    let hx = dirac_cohomology(alg, x, sp)?;
    let hy = dirac_cohomology(alg, y, sp)?;
    let dp = dirac_pairing(&hx.index, &hy.index)?.value;
    if index.index != dp {
        return Err(Error::IdentityFailed(format!("ind(S, T) = {} but the Dirac pairing is {dp}", index.index)));
    }
    let hom = |a: &crate::weights::VirtualCharacter, b: &crate::weights::VirtualCharacter| -> Result<usize> {
        Ok(usize::try_from(pair(a, b)?).expect("actual modules"))
    };
    let hom_a = hom(&hx.plus, &hy.plus)? + hom(&hx.minus, &hy.minus)?;
    let hom_b = hom(&hx.plus, &hy.minus)? + hom(&hx.minus, &hy.plus)?;
    if (index.a, index.b) != (hom_a, hom_b) {
        return Err(Error::IdentityFailed(format!(
            "ker/(ker ∩ Im) dimensions ({}, {}) differ from Hom of Dirac cohomologies ({hom_a}, {hom_b})",
            index.a, index.b
        )));
    }
    Ok(STReport {
        dim_even: op.space.even.len(),
        dim_odd: op.space.odd.len(),
        index,
        dirac_pairing: dp,
        hom_cohomology: (hom_a, hom_b),
    })
}

/// ind(S, T) on 𝒞 computed by the Fredholm-pair definition.
pub fn index_st(alg: &LabAlgebra, x: &MatrixHCModule, y: &MatrixHCModule, sp: &SpinorMatrices) -> Result<i64> {
    let op = build_st(alg, x, y, sp)?;
    Ok(fredholm_index(&FredholmPairData::new(op.s, op.t)?)?.index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::build_spinor_matrices;

    #[test]
    fn trivial_pair_has_zero_operators() {
        let a = LabAlgebra::preset("sl2R").unwrap();
        let sp = build_spinor_matrices(&a).unwrap();
        let t = MatrixHCModule::trivial(&a);
        let op = build_st(&a, &t, &t, &sp).unwrap();
        assert!(op.s.is_zero() && op.t.is_zero());
        assert_eq!(index_st(&a, &t, &t, &sp).unwrap(), 2);
    }

    #[test]
    fn sl2_pairs() {
        let a = LabAlgebra::preset("sl2R").unwrap();
        let sp = build_spinor_matrices(&a).unwrap();
        for n in 0..=3 {
            for m in 0..=3 {
                let x = MatrixHCModule::sl2_irreducible(&a, n).unwrap();
                let y = MatrixHCModule::sl2_irreducible(&a, m).unwrap();
                let r = verify_st(&a, &x, &y, &sp).unwrap();
                assert_eq!(r.index.index, if n == m { 2 } else { 0 }, "F_{n}, F_{m}");
            }
        }
    }

    #[test]
    fn su21_pairs() {
        let a = LabAlgebra::preset("su21").unwrap();
        let sp = build_spinor_matrices(&a).unwrap();
        let mods = [MatrixHCModule::trivial(&a), MatrixHCModule::standard(&a).unwrap()];
        for x in &mods {
            for y in &mods {
                verify_st(&a, x, y, &sp).unwrap();
            }
        }
    }
}
