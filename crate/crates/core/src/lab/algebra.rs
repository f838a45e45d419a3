use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{q, CoordinateChart, ExactMatrix, Q};
use crate::weights::{RootDatum, Weight};

/// A complexified Cartan decomposition g = k ⊕ p realized by matrices, with
/// B(x, y) = form_scale·tr(xy) and a splitting p = U ⊕ U* into isotropic halves.
///
/// Weights are written in the coordinates of the attached root datum: the
/// coordinate vector of λ is `weight_scale` times (λ(t₁), …, λ(t_r)).
#[derive(Clone, Debug)]
pub struct LabAlgebra {
    name: String,
    datum: RootDatum,
    weight_scale: i64,
    basis: Vec<ExactMatrix>,
    names: Vec<String>,
    cartan: Vec<usize>,
    compact: Vec<usize>,
    u: Vec<usize>,
    u_star: Vec<usize>,
    form_scale: Q,
    chart: CoordinateChart,
    structure: Vec<Vec<Vec<Q>>>,
    roots: Vec<Option<Weight>>,
    gram: ExactMatrix,
    cartan_gram_inv: ExactMatrix,
}

pub const LAB_PRESETS: [&str; 2] = ["sl2R", "su21"];

fn unit(n: usize, i: usize, j: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(n, n);
    m[(i, j)] = q(1);
    m
}

fn flatten(m: &ExactMatrix) -> Vec<Q> {
    m.to_rows().into_iter().flatten().collect()
}

impl LabAlgebra {
    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "sl2R" => {
                let h = &unit(2, 0, 0) - &unit(2, 1, 1);
                Self::new(
                    name,
                    RootDatum::preset("sl2R")?,
                    1,
                    vec![("h", h), ("e", unit(2, 0, 1)), ("f", unit(2, 1, 0))],
                    vec![0],
                    vec![0],
                    vec![1],
                    vec![2],
                )
            }
            "su21" => {
                let h1 = &unit(3, 0, 0) - &unit(3, 1, 1);
                let h2 = &unit(3, 1, 1) - &unit(3, 2, 2);
                Self::new(
                    name,
                    RootDatum::preset("su21")?,
                    2,
                    vec![
                        ("H1", h1),
                        ("H2", h2),
                        ("E12", unit(3, 0, 1)),
                        ("E21", unit(3, 1, 0)),
                        ("E13", unit(3, 0, 2)),
                        ("E23", unit(3, 1, 2)),
                        ("E31", unit(3, 2, 0)),
                        ("E32", unit(3, 2, 1)),
                    ],
                    vec![0, 1],
                    vec![0, 1, 2, 3],
                    vec![4, 5],
                    vec![6, 7],
                )
            }
            other => Err(Error::InvalidParameter(format!("no lab preset named {other:?}"))),
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: &str,
        datum: RootDatum,
        weight_scale: i64,
        named_basis: Vec<(&str, ExactMatrix)>,
        cartan: Vec<usize>,
        compact: Vec<usize>,
        u: Vec<usize>,
        u_star: Vec<usize>,
    ) -> Result<Self> {
        let err = |m: &str| Error::InvalidParameter(format!("lab algebra {name}: {m}"));
        let bad = |m: String| Err(err(&m));
        let (names, basis): (Vec<String>, Vec<ExactMatrix>) =
            named_basis.into_iter().map(|(n, m)| (n.to_string(), m)).unzip();
        let n = basis.len();
        let size = basis.first().map_or(0, ExactMatrix::rows);
        if basis.iter().any(|b| b.shape() != (size, size)) {
            return bad("basis matrices differ in shape".into());
        }
        let chart = CoordinateChart::new(size * size, &basis.iter().map(flatten).collect::<Vec<_>>())
            .map_err(|_| err("basis is linearly dependent"))?;
        let mut structure = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let br = &(&basis[i] * &basis[j]) - &(&basis[j] * &basis[i]);
                match chart.coords(&flatten(&br)) {
                    Some(c) => structure[i][j] = c,
                    None => return bad(format!("[{}, {}] leaves the span", names[i], names[j])),
                }
            }
        }
        let mut seen = vec![0u8; n];
        for &i in compact.iter().chain(&u).chain(&u_star) {
            if i >= n {
                return bad(format!("index {i} out of range"));
            }
            seen[i] += 1;
        }
        if seen.iter().any(|&s| s != 1) || !cartan.iter().all(|c| compact.contains(c)) {
            return bad("k, U and U* must partition the basis with the Cartan inside k".into());
        }
        if u.len() != u_star.len() {
            return bad("U and U* differ in dimension".into());
        }
        let is_p = |i: usize| !compact.contains(&i);
        for i in 0..n {
            for j in 0..n {
                for (k, c) in structure[i][j].iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let ok = match (is_p(i), is_p(j)) {
                        (false, false) | (true, true) => !is_p(k),
                        _ => is_p(k),
                    };
                    if !ok {
                        return bad(format!("[{}, {}] breaks the Cartan decomposition", names[i], names[j]));
                    }
                }
            }
        }
        let form_scale = q(1);
        let gram = ExactMatrix::from_rows(
            (0..n).map(|i| (0..n).map(|j| trace(&(&basis[i] * &basis[j]))).collect()).collect(),
        )?;
        let cartan_gram = gram.select(&cartan, &cartan);
        let cartan_gram_inv =
            cartan_gram.inverse().ok_or_else(|| err("form is degenerate on the Cartan"))?;
        let mut roots = vec![None; n];
        for i in 0..n {
            if cartan.contains(&i) {
                continue;
            }
            let mut coords = Vec::with_capacity(cartan.len());
            for &t in &cartan {
                let c = &structure[t][i];
                let eig = c[i].clone();
                if c.iter().enumerate().any(|(k, v)| k != i && !v.is_zero()) {
                    return bad(format!("{} is not a root vector", names[i]));
                }
                let scaled = eig * q(weight_scale);
                if !scaled.is_integer() {
                    return bad(format!("root of {} is not integral in datum coordinates", names[i]));
                }
                coords.push(scaled.to_integer().try_into().expect("small root coordinate"));
            }
            let root = Weight(coords);
            let Some(idx) = datum.root_index(&root) else {
                return bad(format!("root {:?} of {} is not a root of {}", root.0, names[i], datum.name()));
            };
            if datum.is_compact(idx) == is_p(i) {
                return bad(format!("{} disagrees with the datum on compactness", names[i]));
            }
            roots[i] = Some(root);
        }
        for (a, &i) in u.iter().enumerate() {
            for (b, &j) in u.iter().enumerate() {
                if !gram[(i, j)].is_zero() || !gram[(u_star[a], u_star[b])].is_zero() {
                    return bad("U and U* must be isotropic".into());
                }
            }
        }
        let alg = LabAlgebra {
            name: name.to_string(),
            datum,
            weight_scale,
            basis,
            names,
            cartan,
            compact,
            u,
            u_star,
            form_scale,
            chart,
            structure,
            roots,
            gram,
            cartan_gram_inv,
        };
        if alg.p_gram().inverse().is_none() {
            return bad("form is degenerate on p".into());
        }
        Ok(alg)
    }

    /// Same algebra with B replaced by s·B.
    pub fn with_form_scale(&self, s: Q) -> Self {
        let mut a = self.clone();
        a.gram = self.gram.scale(&(&s / &self.form_scale));
        a.cartan_gram_inv = a.gram.select(&a.cartan, &a.cartan).inverse().expect("nondegenerate");
        a.form_scale = s;
        a
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ExactMatrix] {
        &self.basis
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn cartan(&self) -> &[usize] {
        &self.cartan
    }

    pub fn compact(&self) -> &[usize] {
        &self.compact
    }

    pub fn u(&self) -> &[usize] {
        &self.u
    }

    pub fn u_star(&self) -> &[usize] {
        &self.u_star
    }

    /// U followed by U*.
    pub fn p_basis(&self) -> Vec<usize> {
        self.u.iter().chain(&self.u_star).copied().collect()
    }

    pub fn weight_scale(&self) -> i64 {
        self.weight_scale
    }

    pub fn form_scale(&self) -> &Q {
        &self.form_scale
    }

    /// Coordinates of [b_i, b_j].
    pub fn bracket(&self, i: usize, j: usize) -> &[Q] {
        &self.structure[i][j]
    }

    pub fn form(&self, i: usize, j: usize) -> &Q {
        &self.gram[(i, j)]
    }

    pub fn gram(&self) -> &ExactMatrix {
        &self.gram
    }

    pub fn p_gram(&self) -> ExactMatrix {
        let p = self.p_basis();
        self.gram.select(&p, &p)
    }

    pub fn root(&self, i: usize) -> Option<&Weight> {
        self.roots[i].as_ref()
    }

    /// Compact root vectors whose root is positive for the reference chamber.
    pub fn positive_compact(&self) -> Vec<usize> {
        let pos = self.datum.compact_positive(0);
        self.compact
            .iter()
            .copied()
            .filter(|&i| self.roots[i].as_ref().is_some_and(|r| pos.contains(&r)))
            .collect()
    }

    /// ⟨λ, μ⟩ for the form dual to B on the Cartan.
    pub fn inner(&self, a: &Weight, b: &Weight) -> Q {
        let s = q(self.weight_scale);
        let ea: Vec<Q> = a.coords().iter().map(|&c| q(c) / &s).collect();
        let eb: Vec<Q> = b.coords().iter().map(|&c| q(c) / &s).collect();
        let t = self.cartan_gram_inv.apply(&eb);
        ea.iter().zip(&t).map(|(x, y)| x * y).sum()
    }

    pub fn norm2(&self, a: &Weight) -> Q {
        self.inner(a, a)
    }

    pub fn rho(&self) -> Weight {
        self.datum.reference_rho().rho.clone()
    }

    pub fn rho_c(&self) -> Weight {
        self.datum.reference_rho().rho_c.clone()
    }

    /// Weight of a vector on which each Cartan element t_a acts by `eig[a]`.
    pub fn weight_from_eigenvalues(&self, eig: &[Q]) -> Option<Weight> {
        eig.iter()
            .map(|e| {
                let v = e * q(self.weight_scale);
                v.is_integer().then(|| i64::try_from(v.to_integer()).ok()).flatten()
            })
            .collect::<Option<Vec<_>>>()
            .map(Weight)
    }

    /// Coordinates of a matrix in the basis, if it lies in g.
    pub fn coords_of(&self, m: &ExactMatrix) -> Option<Vec<Q>> {
        self.chart.coords(&flatten(m))
    }

    /// Σ G⁻¹_{ab} π(b_a)π(b_b) over the index set `idx` for a representation `pi`.
    pub fn casimir(&self, idx: &[usize], pi: &[ExactMatrix]) -> ExactMatrix {
        let inv = self.gram.select(idx, idx).inverse().expect("nondegenerate");
        let n = pi.first().map_or(0, ExactMatrix::rows);
        let mut out = ExactMatrix::zeros(n, n);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                if !inv[(a, b)].is_zero() {
                    out = &out + &(&pi[i] * &pi[j]).scale(&inv[(a, b)]);
                }
            }
        }
        out
    }
}

fn trace(m: &ExactMatrix) -> Q {
    (0..m.rows()).map(|i| m[(i, i)].clone()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_build() {
        for p in LAB_PRESETS {
            let a = LabAlgebra::preset(p).unwrap();
            assert_eq!(a.p_basis().len(), a.datum().dim_p());
        }
    }

    #[test]
    fn sl2_roots_and_form() {
        let a = LabAlgebra::preset("sl2R").unwrap();
        assert_eq!(a.root(1), Some(&Weight::from([2])));
        assert_eq!(a.root(2), Some(&Weight::from([-2])));
        assert_eq!(*a.form(1, 2), q(1));
        assert_eq!(*a.form(0, 0), q(2));
        assert!(a.positive_compact().is_empty());
    }

    #[test]
    fn lab_norms_match_the_datum() {
        for p in LAB_PRESETS {
            let a = LabAlgebra::preset(p).unwrap();
            for r in a.datum().roots() {
                assert_eq!(a.norm2(r), a.datum().norm2(r), "{p} {r:?}");
            }
            assert_eq!(a.norm2(&a.rho()), a.datum().norm2(&a.rho()));
        }
    }

    #[test]
    fn su21_positive_compact_is_e12() {
        let a = LabAlgebra::preset("su21").unwrap();
        assert_eq!(a.positive_compact(), vec![2]);
    }

    #[test]
    fn rejects_a_non_root_vector() {
        let d = RootDatum::preset("sl2R").unwrap();
        let h = &unit(2, 0, 0) - &unit(2, 1, 1);
        let ef = &unit(2, 0, 1) + &unit(2, 1, 0);
        let r = LabAlgebra::new("bad", d, 1, vec![("h", h), ("x", ef), ("f", unit(2, 1, 0))], vec![0], vec![0], vec![1], vec![2]);
        assert!(r.is_err());
    }
}
