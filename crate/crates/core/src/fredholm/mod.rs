//! Algebraic Fredholm pairs over the rationals.
//!
//! A pair S: X → Y, T: Y → X has index a − b with
//! a = dim ker S / (ker S ∩ Im T) and b = dim ker T / (ker T ∩ Im S).

pub mod random;
pub mod suite;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, Subspace, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FredholmPairData {
    pub s: ExactMatrix,
    pub t: ExactMatrix,
}

impl FredholmPairData {
    pub fn new(s: ExactMatrix, t: ExactMatrix) -> Result<Self> {
        let p = FredholmPairData { s, t };
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<()> {
        if self.s.rows() != self.t.cols() || self.s.cols() != self.t.rows() {
            return Err(Error::ShapeMismatch(format!(
                "S is {:?} but T is {:?}",
                self.s.shape(),
                self.t.shape()
            )));
        }
        Ok(())
    }

    pub fn dim_x(&self) -> usize {
        self.s.cols()
    }

    pub fn dim_y(&self) -> usize {
        self.s.rows()
    }

    /// Whether ST = 0 and TS = 0.
    pub fn is_two_periodic(&self) -> bool {
        (&self.s * &self.t).is_zero() && (&self.t * &self.s).is_zero()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IndexParts {
    pub a: usize,
    pub b: usize,
    pub index: i64,
}

/// Index from the definition, via kernels, images and intersections.
pub fn fredholm_index(p: &FredholmPairData) -> Result<IndexParts> {
    p.check()?;
    let ker_s = Subspace::kernel(&p.s);
    let ker_t = Subspace::kernel(&p.t);
    let im_s = Subspace::image(&p.s);
    let im_t = Subspace::image(&p.t);
    let a = ker_s.dim() - ker_s.intersection_dim(&im_t);
    let b = ker_t.dim() - ker_t.intersection_dim(&im_s);
    Ok(IndexParts { a, b, index: a as i64 - b as i64 })
}

/// Same index through ranks only: a = nullity S − rank T + rank ST, and symmetrically.
pub fn fredholm_index_by_ranks(p: &FredholmPairData) -> Result<IndexParts> {
    p.check()?;
    let a = p.s.nullity() + (&p.s * &p.t).rank() - p.t.rank();
    let b = p.t.nullity() + (&p.t * &p.s).rank() - p.s.rank();
    Ok(IndexParts { a, b, index: a as i64 - b as i64 })
}

/// A bounded cochain complex C⁰ → C¹ → … with `differentials[i]: C^i → C^{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedComplexData {
    pub dims: Vec<usize>,
    pub differentials: Vec<ExactMatrix>,
}

impl GradedComplexData {
    pub fn new(dims: Vec<usize>, differentials: Vec<ExactMatrix>) -> Result<Self> {
        let c = GradedComplexData { dims, differentials };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.differentials.len() + 1 != self.dims.len().max(1) {
            return Err(Error::ShapeMismatch("need one differential between consecutive spaces".into()));
        }
        for (i, d) in self.differentials.iter().enumerate() {
            if d.shape() != (self.dims[i + 1], self.dims[i]) {
                return Err(Error::ShapeMismatch(format!("d^{i} is {:?}", d.shape())));
            }
        }
        for i in 0..self.differentials.len().saturating_sub(1) {
            if !(&self.differentials[i + 1] * &self.differentials[i]).is_zero() {
                return Err(Error::NotAComplex(i));
            }
        }
        Ok(())
    }

    /// dim H^i = nullity d^i − rank d^{i−1}.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.differentials.iter().map(ExactMatrix::rank).collect();
        (0..self.dims.len())
            .map(|i| {
                let out = if i < ranks.len() { ranks[i] } else { 0 };
                let inc = if i > 0 { ranks[i - 1] } else { 0 };
                self.dims[i] - out - inc
            })
            .collect()
    }

    pub fn chain_euler(&self) -> i64 {
        alternating(&self.dims)
    }
}

fn alternating(v: &[usize]) -> i64 {
    v.iter().enumerate().map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
}

/// S = ⊕ d^{even}: C^{even} → C^{odd}, T = ⊕ d^{odd}: C^{odd} → C^{even}.
pub fn complex_to_pair(c: &GradedComplexData) -> Result<FredholmPairData> {
    c.validate()?;
    let offsets = |parity: usize| {
        let mut off = vec![usize::MAX; c.dims.len()];
        let mut acc = 0;
        for i in (parity..c.dims.len()).step_by(2) {
            off[i] = acc;
            acc += c.dims[i];
        }
        (off, acc)
    };
    let (even_off, dim_x) = offsets(0);
    let (odd_off, dim_y) = offsets(1);
    let mut s = ExactMatrix::zeros(dim_y, dim_x);
    let mut t = ExactMatrix::zeros(dim_x, dim_y);
    for (i, d) in c.differentials.iter().enumerate() {
        if i % 2 == 0 {
            s.set_block(odd_off[i + 1], even_off[i], d);
        } else {
            t.set_block(even_off[i + 1], odd_off[i], d);
        }
    }
    FredholmPairData::new(s, t)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerReport {
    pub index: i64,
    pub cohomology: Vec<usize>,
    pub cohomology_euler: i64,
    pub chain_euler: i64,
    pub holds: bool,
}

/// Index of the associated pair against both Euler characteristics.
pub fn euler_via_pair(c: &GradedComplexData) -> Result<EulerReport> {
    let index = fredholm_index(&complex_to_pair(c)?)?.index;
    let cohomology = c.cohomology_dims();
    let cohomology_euler = alternating(&cohomology);
    let chain_euler = c.chain_euler();
    Ok(EulerReport {
        index,
        holds: index == cohomology_euler && index == chain_euler,
        cohomology,
        cohomology_euler,
        chain_euler,
    })
}

/// Projection onto the span of `complement` along `sub`, in complement coordinates.
struct Quotient {
    complement: Vec<Vec<Q>>,
    inverse: ExactMatrix,
}

impl Quotient {
    fn new(sub: &Subspace) -> Self {
        let complement = sub.complement();
        let mut cols = complement.clone();
        cols.extend(sub.basis().iter().cloned());
        let inverse = ExactMatrix::from_columns(sub.ambient(), &cols).inverse().expect("basis of the ambient space");
        Quotient { complement, inverse }
    }

    fn dim(&self) -> usize {
        self.complement.len()
    }

    fn project(&self, v: &[Q]) -> Vec<Q> {
        let c = self.inverse.apply(v);
        c[..self.dim()].to_vec()
    }

    /// Matrix of the induced map X/U → Y/V of `m`.
    fn induced(&self, m: &ExactMatrix, target: &Quotient) -> ExactMatrix {
        let cols: Vec<Vec<Q>> = self.complement.iter().map(|x| target.project(&m.apply(x))).collect();
        ExactMatrix::from_columns(target.dim(), &cols)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedPairReport {
    pub reduced: FredholmPairData,
    pub index: i64,
    pub reduced_index: i64,
    /// dim X̄ − dim Ȳ.
    pub quotient_difference: i64,
    pub holds: bool,
}

/// The induced pair on X/Im(TS) and Y/Im(ST).
pub fn reduced_pair(p: &FredholmPairData) -> Result<ReducedPairReport> {
    let index = fredholm_index(p)?.index;
    let qx = Quotient::new(&Subspace::image(&(&p.t * &p.s)));
    let qy = Quotient::new(&Subspace::image(&(&p.s * &p.t)));
    let reduced = FredholmPairData::new(qx.induced(&p.s, &qy), qy.induced(&p.t, &qx))?;
    let reduced_index = fredholm_index(&reduced)?.index;
    let quotient_difference = qx.dim() as i64 - qy.dim() as i64;
    Ok(ReducedPairReport {
        holds: index == reduced_index && reduced_index == quotient_difference,
        reduced,
        index,
        reduced_index,
        quotient_difference,
    })
}

/// Three pairs in a short exact sequence 0 → (X₁,Y₁) → (X₂,Y₂) → (X₃,Y₃) → 0.
///
/// `alpha: X₁ → X₂`, `beta: X₂ → X₃`, `gamma: Y₁ → Y₂`, `delta: Y₂ → Y₃`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionDiagram {
    pub pairs: [FredholmPairData; 3],
    pub alpha: ExactMatrix,
    pub beta: ExactMatrix,
    pub gamma: ExactMatrix,
    pub delta: ExactMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdditivityReport {
    pub indices: [i64; 3],
    /// ind₁ − ind₂ + ind₃.
    pub alternating_sum: i64,
    pub holds: bool,
}

fn short_exact(name: &str, i: &ExactMatrix, p: &ExactMatrix) -> Result<()> {
    let err = |m: &str| Err(Error::SequenceNotExact(format!("{name}: {m}")));
    if i.rows() != p.cols() {
        return err("middle dimensions differ");
    }
    if i.rank() != i.cols() {
        return err("first map is not injective");
    }
    if p.rank() != p.rows() {
        return err("second map is not surjective");
    }
    if !(p * i).is_zero() || i.cols() + p.rows() != i.rows() {
        return err("image differs from kernel");
    }
    Ok(())
}

pub fn check_additivity(dg: &ExtensionDiagram) -> Result<AdditivityReport> {
    for p in &dg.pairs {
        p.check()?;
    }
    let [p1, p2, p3] = &dg.pairs;
    short_exact("X", &dg.alpha, &dg.beta)?;
    short_exact("Y", &dg.gamma, &dg.delta)?;
    let shapes_ok = dg.alpha.shape() == (p2.dim_x(), p1.dim_x())
        && dg.beta.shape() == (p3.dim_x(), p2.dim_x())
        && dg.gamma.shape() == (p2.dim_y(), p1.dim_y())
        && dg.delta.shape() == (p3.dim_y(), p2.dim_y());
    if !shapes_ok {
        return Err(Error::ShapeMismatch("connecting maps do not fit the pairs".into()));
    }
    let squares = [
        ("S₂α = γS₁", &p2.s * &dg.alpha, &dg.gamma * &p1.s),
        ("S₃β = δS₂", &p3.s * &dg.beta, &dg.delta * &p2.s),
        ("T₂γ = αT₁", &p2.t * &dg.gamma, &dg.alpha * &p1.t),
        ("T₃δ = βT₂", &p3.t * &dg.delta, &dg.beta * &p2.t),
    ];
    for (name, l, r) in squares {
        if l != r {
            return Err(Error::DiagramNotCommutative(name.into()));
        }
    }
    for (j, p) in dg.pairs.iter().enumerate() {
        if !p.is_two_periodic() {
            return Err(Error::HypothesisSTnotZero(j + 1));
        }
    }
    let indices = [fredholm_index(p1)?.index, fredholm_index(p2)?.index, fredholm_index(p3)?.index];
    let alternating_sum = indices[0] - indices[1] + indices[2];
    Ok(AdditivityReport { indices, alternating_sum, holds: alternating_sum == 0 })
}

/// A super vector space V = V⁰ ⊕ V¹; coordinates list V⁰ first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuperSpace {
    pub even: usize,
    pub odd: usize,
}

impl SuperSpace {
    pub fn dim(&self) -> usize {
        self.even + self.odd
    }

    fn is_odd(&self, m: &ExactMatrix) -> bool {
        let (e, o) = (self.even, self.odd);
        m.shape() == (self.dim(), self.dim()) && m.block(0, 0, e, e).is_zero() && m.block(e, e, o, o).is_zero()
    }

    /// (F⁺: V⁰ → V¹, F⁻: V¹ → V⁰) as a pair.
    pub fn split(&self, m: &ExactMatrix) -> FredholmPairData {
        let (e, o) = (self.even, self.odd);
        FredholmPairData { s: m.block(e, 0, o, e), t: m.block(0, e, e, o) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerturbationReport {
    pub index_perturbed: i64,
    pub index_unperturbed: i64,
    pub holds: bool,
}

/// ind(ℱ⁺, ℱ⁻) against ind(d⁺, d⁻) for ℱ = d + ∂.
pub fn perturbed_index(v: SuperSpace, d: &ExactMatrix, del: &ExactMatrix) -> Result<PerturbationReport> {
    for (name, m) in [("d", d), ("∂", del)] {
        if !v.is_odd(m) {
            return Err(Error::InvalidParameter(format!("{name} is not an odd endomorphism of V")));
        }
        if !(m * m).is_zero() {
            return Err(Error::InvalidParameter(format!("{name} does not square to zero")));
        }
    }
    let f = d + del;
    let f2 = &f * &f;
    let ker = Subspace::kernel(&f2);
    let im = Subspace::image(&f2);
    if ker.intersection_dim(&im) != 0 {
        return Err(Error::SemisimplicityFails);
    }
    let index_perturbed = fredholm_index(&v.split(&f))?.index;
    let index_unperturbed = fredholm_index(&v.split(d))?.index;
    Ok(PerturbationReport { index_perturbed, index_unperturbed, holds: index_perturbed == index_unperturbed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn m(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_i64(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn zero_pair_on_q3() {
        let z = ExactMatrix::zeros(3, 3);
        let p = FredholmPairData::new(z.clone(), z).unwrap();
        assert_eq!(fredholm_index(&p).unwrap(), IndexParts { a: 3, b: 3, index: 0 });
    }

    #[test]
    fn invertible_s_with_zero_t() {
        let p = FredholmPairData::new(ExactMatrix::identity(4), ExactMatrix::zeros(4, 4)).unwrap();
        assert_eq!(fredholm_index(&p).unwrap(), IndexParts { a: 0, b: 0, index: 0 });
    }

    #[test]
    fn rank_route_agrees() {
        let s = m(&[&[1, 0]]);
        let t = m(&[&[0], &[1]]);
        let p = FredholmPairData::new(s, t).unwrap();
        assert_eq!(fredholm_index(&p).unwrap(), fredholm_index_by_ranks(&p).unwrap());
        assert_eq!(fredholm_index(&p).unwrap().index, 0);
    }

    #[test]
    fn shape_mismatch() {
        let r = FredholmPairData::new(ExactMatrix::zeros(2, 3), ExactMatrix::zeros(2, 3));
        assert!(matches!(r, Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn two_term_complexes() {
        let acyclic = GradedComplexData::new(vec![1, 1], vec![ExactMatrix::identity(1)]).unwrap();
        let r = euler_via_pair(&acyclic).unwrap();
        assert_eq!((r.index, r.cohomology.clone()), (0, vec![0, 0]));
        let zero = GradedComplexData::new(vec![1, 1], vec![ExactMatrix::zeros(1, 1)]).unwrap();
        let r = euler_via_pair(&zero).unwrap();
        assert_eq!((r.index, r.cohomology.clone()), (0, vec![1, 1]));
        assert!(r.holds);
    }

    #[test]
    fn not_a_complex() {
        let c = GradedComplexData::new(vec![1, 1, 1], vec![ExactMatrix::identity(1), ExactMatrix::identity(1)]);
        assert_eq!(c, Err(Error::NotAComplex(0)));
    }

    #[test]
    fn reduction_of_inverse_pair() {
        let s = m(&[&[2, 1], &[1, 1]]);
        let t = s.inverse().unwrap();
        let r = reduced_pair(&FredholmPairData::new(s, t).unwrap()).unwrap();
        assert_eq!(r.reduced.dim_x(), 0);
        assert_eq!(r.reduced.dim_y(), 0);
        assert!(r.holds);
    }

    #[test]
    fn reduction_with_zero_t_is_identity() {
        let s = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let p = FredholmPairData::new(s, ExactMatrix::zeros(3, 2)).unwrap();
        let r = reduced_pair(&p).unwrap();
        assert_eq!(r.reduced, p);
    }

    #[test]
    fn direct_sum_diagram() {
        let p1 = FredholmPairData::new(m(&[&[1, 0]]), ExactMatrix::zeros(2, 1)).unwrap();
        let p3 = FredholmPairData::new(ExactMatrix::zeros(2, 1), ExactMatrix::zeros(1, 2)).unwrap();
        let p2 = FredholmPairData::new(
            ExactMatrix::block_diag(&[&p1.s, &p3.s]),
            ExactMatrix::block_diag(&[&p1.t, &p3.t]),
        )
        .unwrap();
        let inc = |a: usize, b: usize| ExactMatrix::vstack(&[&ExactMatrix::identity(a), &ExactMatrix::zeros(b, a)]).unwrap();
        let proj = |a: usize, b: usize| ExactMatrix::hstack(&[&ExactMatrix::zeros(b, a), &ExactMatrix::identity(b)]).unwrap();
        let dg = ExtensionDiagram {
            alpha: inc(2, 1),
            beta: proj(2, 1),
            gamma: inc(1, 2),
            delta: proj(1, 2),
            pairs: [p1, p2, p3],
        };
        let r = check_additivity(&dg).unwrap();
        assert!(r.holds, "{r:?}");

        let mut broken = dg.clone();
        broken.beta = ExactMatrix::zeros(1, 3);
        assert!(matches!(check_additivity(&broken), Err(Error::SequenceNotExact(_))));
        let mut twisted = dg;
        twisted.alpha[(0, 0)] = q(2);
        assert!(matches!(check_additivity(&twisted), Err(Error::DiagramNotCommutative(_))));
    }

    #[test]
    fn perturbation_trivial_cases() {
        let v = SuperSpace { even: 1, odd: 1 };
        let d = m(&[&[0, 0], &[1, 0]]);
        let z = ExactMatrix::zeros(2, 2);
        assert!(perturbed_index(v, &d, &z).unwrap().holds);
        // d = 0, ∂ = adjoint: ℱ² = identity, ind(∂⁺,∂⁻) = 0 = dim V⁰ − dim V¹.
        let r = perturbed_index(v, &z, &d.transpose()).unwrap();
        assert_eq!((r.index_perturbed, r.index_unperturbed), (0, 0));
        // On V⁰ = ⟨e⟩, V¹ = ⟨f₁, f₂⟩ with d e = f₁ and ∂ f₂ = e, ℱ² maps f₂ to f₁ and is nilpotent.
        let v = SuperSpace { even: 1, odd: 2 };
        let d = m(&[&[0, 0, 0], &[1, 0, 0], &[0, 0, 0]]);
        let del = m(&[&[0, 0, 1], &[0, 0, 0], &[0, 0, 0]]);
        assert_eq!(perturbed_index(v, &d, &del), Err(Error::SemisimplicityFails));
    }
}
