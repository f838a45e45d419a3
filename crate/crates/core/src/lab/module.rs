use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::algebra::LabAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{q, ExactMatrix, Q};
use crate::weights::Weight;

/// A finite-dimensional (g, K)-module given by matrices in a K-weight basis.
///
/// `actions[i]` is the action of the i-th basis element of the lab algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixHCModule {
    pub dimension: usize,
    pub weights: Vec<Weight>,
    pub actions: Vec<ExactMatrix>,
    pub infinitesimal_character: Weight,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleJson {
    dimension: usize,
    weights: Vec<Weight>,
    actions: BTreeMap<String, ExactMatrix>,
    infinitesimal_character: Weight,
}

/// Nonzero entries (row, col, value) of a matrix.
pub(crate) type Sparse = Vec<(usize, usize, Q)>;

pub(crate) fn sparse(m: &ExactMatrix) -> Sparse {
    let mut out = Vec::new();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if !m[(r, c)].is_zero() {
                out.push((r, c, m[(r, c)].clone()));
            }
        }
    }
    out
}

impl MatrixHCModule {
    pub fn from_json(alg: &LabAlgebra, text: &str) -> Result<Self> {
        let raw: ModuleJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if let Some(extra) = raw.actions.keys().find(|k| alg.index_of(k).is_none()) {
            return Err(Error::InvalidModule(format!("{extra:?} is not a basis element of {}", alg.name())));
        }
        let mut actions = Vec::with_capacity(alg.dim());
        for name in alg.names() {
            let m = raw.actions.get(name).ok_or_else(|| Error::InvalidModule(format!("missing action of {name}")))?;
            actions.push(m.clone());
        }
        let m = MatrixHCModule {
            dimension: raw.dimension,
            weights: raw.weights,
            actions,
            infinitesimal_character: raw.infinitesimal_character,
        };
        m.validate(alg)?;
        Ok(m)
    }

    pub fn to_json(&self, alg: &LabAlgebra) -> String {
        let raw = ModuleJson {
            dimension: self.dimension,
            weights: self.weights.clone(),
            actions: alg.names().iter().cloned().zip(self.actions.iter().cloned()).collect(),
            infinitesimal_character: self.infinitesimal_character.clone(),
        };
        serde_json::to_string(&raw).expect("module serializes")
    }

    pub fn trivial(alg: &LabAlgebra) -> Self {
        MatrixHCModule {
            dimension: 1,
            weights: vec![Weight::zero(alg.datum().rank())],
            actions: vec![ExactMatrix::zeros(1, 1); alg.dim()],
            infinitesimal_character: alg.rho(),
        }
    }

    /// The (n+1)-dimensional irreducible F_n of sl(2) with h v_k = (n−2k)v_k,
    /// f v_k = v_{k+1} and e v_k = k(n−k+1)v_{k−1}.
    pub fn sl2_irreducible(alg: &LabAlgebra, n: usize) -> Result<Self> {
        let (Some(h), Some(e), Some(f)) = (alg.index_of("h"), alg.index_of("e"), alg.index_of("f")) else {
            return Err(Error::InvalidParameter(format!("{} is not the sl(2) lab algebra", alg.name())));
        };
        let d = n + 1;
        let ni = n as i64;
        let mut actions = vec![ExactMatrix::zeros(d, d); alg.dim()];
        for k in 0..d {
            let ki = k as i64;
            actions[h][(k, k)] = q(ni - 2 * ki);
            if k + 1 < d {
                actions[f][(k + 1, k)] = q(1);
            }
            if k >= 1 {
                actions[e][(k - 1, k)] = q(ki * (ni - ki + 1));
            }
        }
        let m = MatrixHCModule {
            dimension: d,
            weights: (0..d).map(|k| Weight::from([ni - 2 * k as i64])).collect(),
            actions,
            infinitesimal_character: Weight::from([ni + 1]),
        };
        m.validate(alg)?;
        Ok(m)
    }

    /// Irreducible module from action matrices; weights are read off the Cartan
    /// and the infinitesimal character is highest weight plus ρ.
    pub fn from_actions(alg: &LabAlgebra, actions: Vec<ExactMatrix>) -> Result<Self> {
        let dimension = actions.first().map_or(0, ExactMatrix::rows);
        let mut weights = Vec::with_capacity(dimension);
        for v in 0..dimension {
            let eig: Vec<Q> = alg.cartan().iter().map(|&t| actions[t][(v, v)].clone()).collect();
            let w = alg
                .weight_from_eigenvalues(&eig)
                .ok_or_else(|| Error::InvalidModule(format!("basis vector {v} has a non-integral weight")))?;
            weights.push(w);
        }
        let rho = alg.rho();
        let hw = weights
            .iter()
            .max_by(|a, b| alg.inner(a, &rho).cmp(&alg.inner(b, &rho)))
            .cloned()
            .unwrap_or_else(|| Weight::zero(alg.datum().rank()));
        let m = MatrixHCModule { dimension, weights, actions, infinitesimal_character: &hw + &rho };
        m.validate(alg)?;
        Ok(m)
    }

    /// The defining matrix representation of the lab algebra.
    pub fn standard(alg: &LabAlgebra) -> Result<Self> {
        Self::from_actions(alg, alg.basis().to_vec())
    }

    pub fn dual_standard(alg: &LabAlgebra) -> Result<Self> {
        Self::from_actions(alg, alg.basis().iter().map(|b| -&b.transpose()).collect())
    }

    pub fn validate(&self, alg: &LabAlgebra) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidModule(m));
        let n = self.dimension;
        if self.weights.len() != n || self.actions.len() != alg.dim() {
            return bad("dimension, weights and actions disagree".into());
        }
        if let Some(i) = self.actions.iter().position(|a| a.shape() != (n, n)) {
            return bad(format!("action of {} has shape {:?}", alg.names()[i], self.actions[i].shape()));
        }
        let rank = alg.datum().rank();
        if self.weights.iter().chain([&self.infinitesimal_character]).any(|w| w.rank() != rank) {
            return bad(format!("weights must have {rank} coordinates"));
        }
        for i in 0..alg.dim() {
            for j in i + 1..alg.dim() {
                let lhs = &(&self.actions[i] * &self.actions[j]) - &(&self.actions[j] * &self.actions[i]);
                let mut rhs = ExactMatrix::zeros(n, n);
                for (k, c) in alg.bracket(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        rhs = &rhs + &self.actions[k].scale(c);
                    }
                }
                if let Some((r, c)) = lhs.first_mismatch(&rhs) {
                    return bad(format!("[{}, {}] fails at entry ({r}, {c})", alg.names()[i], alg.names()[j]));
                }
            }
        }
        let scale = q(alg.weight_scale());
        for (a, &t) in alg.cartan().iter().enumerate() {
            for r in 0..n {
                for c in 0..n {
                    let expected =
                        if r == c { q(self.weights[r].coords()[a]) / &scale } else { Q::zero() };
                    if self.actions[t][(r, c)] != expected {
                        return bad(format!("{} does not act diagonally by the weights", alg.names()[t]));
                    }
                }
            }
        }
        for i in 0..alg.dim() {
            let Some(root) = alg.root(i) else { continue };
            for (r, c, _) in sparse(&self.actions[i]) {
                if self.weights[r] != &self.weights[c] + root {
                    return bad(format!("{} maps weight {:?} outside weight {:?}", alg.names()[i], self.weights[c].0, (&self.weights[c] + root).0));
                }
            }
        }
        let all: Vec<usize> = (0..alg.dim()).collect();
        let cas = alg.casimir(&all, &self.actions);
        let expected = alg.norm2(&self.infinitesimal_character) - alg.norm2(&alg.rho());
        if cas != ExactMatrix::identity(n).scale(&expected) {
            return bad(format!("Casimir does not act by ‖Λ‖² − ‖ρ‖² = {expected}"));
        }
        Ok(())
    }

    pub(crate) fn sparse_actions(&self) -> Vec<Sparse> {
        self.actions.iter().map(sparse).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_irreducibles_validate() {
        let a = LabAlgebra::preset("sl2R").unwrap();
        for n in 0..=6 {
            let m = MatrixHCModule::sl2_irreducible(&a, n).unwrap();
            assert_eq!(m.dimension, n + 1);
        }
    }

    #[test]
    fn standard_of_sl2_is_f1() {
        let a = LabAlgebra::preset("sl2R").unwrap();
        let s = MatrixHCModule::standard(&a).unwrap();
        let f1 = MatrixHCModule::sl2_irreducible(&a, 1).unwrap();
        assert_eq!(s, f1);
    }

    #[test]
    fn su21_standard_and_dual() {
        let a = LabAlgebra::preset("su21").unwrap();
        let s = MatrixHCModule::standard(&a).unwrap();
        let d = MatrixHCModule::dual_standard(&a).unwrap();
        assert_eq!(s.dimension, 3);
        assert_eq!(a.norm2(&s.infinitesimal_character), a.norm2(&d.infinitesimal_character));
        MatrixHCModule::trivial(&a).validate(&a).unwrap();
    }

    #[test]
    fn json_round_trip_and_rejections() {
        let a = LabAlgebra::preset("sl2R").unwrap();
        let m = MatrixHCModule::sl2_irreducible(&a, 2).unwrap();
        let text = m.to_json(&a);
        assert_eq!(MatrixHCModule::from_json(&a, &text).unwrap(), m);

        let mut broken = m.clone();
        broken.actions[1][(0, 1)] = q(5);
        assert!(matches!(MatrixHCModule::from_json(&a, &broken.to_json(&a)), Err(Error::InvalidModule(_))));
        let mut wrong_lambda = m;
        wrong_lambda.infinitesimal_character = Weight::from([5]);
        assert!(matches!(wrong_lambda.validate(&a), Err(Error::InvalidModule(_))));
    }
}
