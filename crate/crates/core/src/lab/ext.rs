//! The relative complex Hom_K(∧p ⊗ X, Y), its differential, the operators
//! coming from A = Σ u_i ⊗ u_i^* and B = Σ u_i^* ⊗ u_i, and the transport to
//! Hom_K̃(X⊗S, Y⊗S).
//!
//! A cochain φ is stored as a vector indexed by (y, w, x), where w runs over
//! the basis u_I ∧ u*_J of ∧p.

use std::collections::HashMap;

use num_traits::Zero;
use serde::Serialize;

use super::algebra::LabAlgebra;
use super::dirac::{dirac_matrix, tensor_grading};
use super::hom::{equivariant_basis, flat, super_commutator, unflat, SuperHomSpace};
use super::module::{MatrixHCModule, Sparse};
use super::spinor::{subsets, wedge_front, SpinorMatrices};
use crate::error::{Error, Result};
use crate::fredholm::suite::PerturbationInstance;
use crate::fredholm::{complex_to_pair, fredholm_index, FredholmPairData, GradedComplexData, SuperSpace};
use crate::linalg::{q, qf, CoordinateChart, ExactMatrix, Q};
use crate::weights::Weight;

/// Basis u_I ∧ u*_J of ∧p, ordered by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeBasis {
    pub elems: Vec<(Vec<usize>, Vec<usize>)>,
    pub weights: Vec<Weight>,
    index: HashMap<(Vec<usize>, Vec<usize>), usize>,
}

impl WedgeBasis {
    pub fn new(alg: &LabAlgebra) -> Self {
        let m = alg.u().len();
        let sets = subsets(m);
        let mut elems: Vec<(Vec<usize>, Vec<usize>)> =
            sets.iter().flat_map(|i| sets.iter().map(move |j| (i.clone(), j.clone()))).collect();
        elems.sort_by_key(|(i, j)| i.len() + j.len());
        let weights = elems
            .iter()
            .map(|(i, j)| {
                let mut w = Weight::zero(alg.datum().rank());
                for &a in i {
                    w = &w + alg.root(alg.u()[a]).expect("root vector");
                }
                for &b in j {
                    w = &w + alg.root(alg.u_star()[b]).expect("root vector");
                }
                w
            })
            .collect();
        let index = elems.iter().cloned().enumerate().map(|(k, e)| (e, k)).collect();
        WedgeBasis { elems, weights, index }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn degree(&self, w: usize) -> usize {
        self.elems[w].0.len() + self.elems[w].1.len()
    }

    pub fn index_of(&self, i: &[usize], j: &[usize]) -> usize {
        self.index[&(i.to_vec(), j.to_vec())]
    }

    /// Matrix of ad(b_k) on ∧p, acting as a derivation.
    pub fn ad(&self, alg: &LabAlgebra, k: usize) -> ExactMatrix {
        let n = self.len();
        let p = alg.p_basis();
        let m = alg.u().len();
        let mut out = ExactMatrix::zeros(n, n);
        for (col, (i, j)) in self.elems.iter().enumerate() {
            let factors: Vec<(u8, usize)> = i.iter().map(|&a| (0, a)).chain(j.iter().map(|&b| (1, b))).collect();
            for pos in 0..factors.len() {
                let v = if factors[pos].0 == 0 { alg.u()[factors[pos].1] } else { alg.u_star()[factors[pos].1] };
                let br = alg.bracket(k, v);
                for (slot, &g) in p.iter().enumerate() {
                    let c = &br[g];
                    if c.is_zero() {
                        continue;
                    }
                    let mut new = factors.clone();
                    new[pos] = if slot < m { (0, slot) } else { (1, slot - m) };
                    let Some((sign, sorted)) = normal_order(new) else { continue };
                    let ni: Vec<usize> = sorted.iter().filter(|f| f.0 == 0).map(|f| f.1).collect();
                    let nj: Vec<usize> = sorted.iter().filter(|f| f.0 == 1).map(|f| f.1).collect();
                    out[(self.index_of(&ni, &nj), col)] += c * q(sign);
                }
            }
        }
        out
    }
}

/// Sorts a wedge monomial, returning the permutation sign, or None if a factor repeats.
fn normal_order(mut f: Vec<(u8, usize)>) -> Option<(i64, Vec<(u8, usize)>)> {
    let mut sign = 1;
    for a in 0..f.len() {
        for b in 0..f.len() - 1 - a {
            if f[b] == f[b + 1] {
                return None;
            }
            if f[b] > f[b + 1] {
                f.swap(b, b + 1);
                sign = -sign;
            }
        }
    }
    if f.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, f))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    /// π_Y(g) ∘ φ(…)
    Y,
    /// φ(… ⊗ π_X(g) x)
    X,
}

/// One term (Lφ)(w ⊗ x) += coeff · [π_Y(g) φ(source ⊗ x) or φ(source ⊗ π_X(g) x)].
#[derive(Clone, Debug)]
struct Move {
    target: usize,
    source: usize,
    coeff: Q,
    g: usize,
    side: Side,
}

/// The eight operators of the A/B split and the Chevalley-Eilenberg differential, as move lists.
#[derive(Clone, Debug)]
struct Lines {
    l1a: Vec<Move>,
    l2a: Vec<Move>,
    l3a: Vec<Move>,
    l4a: Vec<Move>,
    l1b: Vec<Move>,
    l2b: Vec<Move>,
    l3b: Vec<Move>,
    l4b: Vec<Move>,
    ce: Vec<Move>,
}

fn sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

impl Lines {
    fn new(alg: &LabAlgebra, wb: &WedgeBasis) -> Self {
        let (u, us) = (alg.u(), alg.u_star());
        let m = u.len();
        let mut l = Lines {
            l1a: vec![],
            l2a: vec![],
            l3a: vec![],
            l4a: vec![],
            l1b: vec![],
            l2b: vec![],
            l3b: vec![],
            l4b: vec![],
            ce: vec![],
        };
        let mv = |target, source, c: i64, g, side| Move { target, source, coeff: q(c), g, side };
        for (w, (i, j)) in wb.elems.iter().enumerate() {
            let r = i.len();
            for (jp, &lam) in i.iter().enumerate() {
                let s = sign(jp + 1);
                let mut ih = i.clone();
                ih.remove(jp);
                let src = wb.index_of(&ih, j);
                l.l1a.push(mv(w, src, 2 * s, u[lam], Side::Y));
                l.l3a.push(mv(w, src, -2 * s, u[lam], Side::X));
            }
            for a in 0..m {
                if let Some((s, jn)) = wedge_front(a, j) {
                    let src = wb.index_of(i, &jn);
                    l.l2a.push(mv(w, src, sign(r) * s, u[a], Side::Y));
                    l.l4a.push(mv(w, src, -sign(r) * s, u[a], Side::X));
                }
                if let Some((s, inew)) = wedge_front(a, i) {
                    let src = wb.index_of(&inew, j);
                    l.l1b.push(mv(w, src, s, us[a], Side::Y));
                    l.l3b.push(mv(w, src, -s, us[a], Side::X));
                }
            }
            for (jp, &mu) in j.iter().enumerate() {
                let s = sign(r) * sign(jp + 1);
                let mut jh = j.clone();
                jh.remove(jp);
                let src = wb.index_of(i, &jh);
                l.l2b.push(mv(w, src, 2 * s, us[mu], Side::Y));
                l.l4b.push(mv(w, src, -2 * s, us[mu], Side::X));
            }
            // dφ(X₁∧…∧X_k ⊗ x) = Σ_j (−1)^j [X_j φ(…X̂_j… ⊗ x) − φ(…X̂_j… ⊗ X_j x)], j from 1.
            let factors: Vec<(bool, usize)> = i.iter().map(|&a| (true, a)).chain(j.iter().map(|&b| (false, b))).collect();
            for (pos, &(is_u, ix)) in factors.iter().enumerate() {
                let s = sign(pos + 1);
                let (mut ih, mut jh) = (i.clone(), j.clone());
                let g = if is_u {
                    ih.remove(pos);
                    u[ix]
                } else {
                    jh.remove(pos - r);
                    us[ix]
                };
                let src = wb.index_of(&ih, &jh);
                l.ce.push(mv(w, src, s, g, Side::Y));
                l.ce.push(mv(w, src, -s, g, Side::X));
            }
        }
        l
    }
}

/// A pair of modules with everything needed to evaluate operators on Hom(∧p ⊗ X, Y).
struct Cochains<'a> {
    wb: WedgeBasis,
    dx: usize,
    dy: usize,
    sx: Vec<Sparse>,
    sy: Vec<Sparse>,
    x: &'a MatrixHCModule,
    y: &'a MatrixHCModule,
}

impl<'a> Cochains<'a> {
    fn new(alg: &LabAlgebra, x: &'a MatrixHCModule, y: &'a MatrixHCModule) -> Self {
        Cochains {
            wb: WedgeBasis::new(alg),
            dx: x.dimension,
            dy: y.dimension,
            sx: x.sparse_actions(),
            sy: y.sparse_actions(),
            x,
            y,
        }
    }

    fn total(&self) -> usize {
        self.dy * self.wb.len() * self.dx
    }

    fn at(&self, y: usize, w: usize, x: usize) -> usize {
        (y * self.wb.len() + w) * self.dx + x
    }

    fn apply(&self, moves: &[Move], phi: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); phi.len()];
        for mv in moves {
            match mv.side {
                Side::Y => {
                    for (r, c, v) in &self.sy[mv.g] {
                        let f = &mv.coeff * v;
                        for x in 0..self.dx {
                            let src = &phi[self.at(*c, mv.source, x)];
                            if !src.is_zero() {
                                out[self.at(*r, mv.target, x)] += &f * src;
                            }
                        }
                    }
                }
                Side::X => {
                    for (r, c, v) in &self.sx[mv.g] {
                        let f = &mv.coeff * v;
                        for y in 0..self.dy {
                            let src = &phi[self.at(y, mv.source, *r)];
                            if !src.is_zero() {
                                out[self.at(y, mv.target, *c)] += &f * src;
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Basis of Hom_K(∧^i p ⊗ X, Y) for each degree i.
    fn equivariant(&self, alg: &LabAlgebra) -> Result<Vec<Vec<Vec<Q>>>> {
        let top = 2 * alg.u().len();
        let mut units = vec![Vec::new(); top + 1];
        for y in 0..self.dy {
            for w in 0..self.wb.len() {
                for x in 0..self.dx {
                    if self.y.weights[y] == &self.wb.weights[w] + &self.x.weights[x] {
                        units[self.wb.degree(w)].push(self.at(y, w, x));
                    }
                }
            }
        }
        let actions: Vec<(ExactMatrix, ExactMatrix)> = alg
            .compact()
            .iter()
            .filter(|k| !alg.cartan().contains(k))
            .map(|&k| {
                let ax = &self.wb.ad(alg, k).kron(&ExactMatrix::identity(self.dx))
                    + &ExactMatrix::identity(self.wb.len()).kron(&self.x.actions[k]);
                (self.y.actions[k].clone(), ax)
            })
            .collect();
        units.iter().map(|u| equivariant_basis(self.dy, self.wb.len() * self.dx, u, &actions)).collect()
    }
}

/// Hom_K(∧p ⊗ X, Y) with its basis listed degree by degree.
struct HomK {
    top: usize,
    basis: Vec<Vec<Q>>,
    degree: Vec<usize>,
    chart: CoordinateChart,
}

impl HomK {
    fn new(by_degree: Vec<Vec<Vec<Q>>>, total: usize) -> Result<Self> {
        let top = by_degree.len().saturating_sub(1);
        let mut basis = Vec::new();
        let mut degree = Vec::new();
        for (i, b) in by_degree.into_iter().enumerate() {
            degree.extend(std::iter::repeat_n(i, b.len()));
            basis.extend(b);
        }
        let chart = CoordinateChart::new(total, &basis)?;
        Ok(HomK { top, basis, degree, chart })
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn dims(&self) -> Vec<usize> {
        (0..=self.top).map(|i| self.degree.iter().filter(|&&d| d == i).count()).collect()
    }

    fn restrict(&self, c: &Cochains, moves: &[Move], name: &str) -> Result<ExactMatrix> {
        let cols = self
            .basis
            .iter()
            .map(|v| {
                self.chart
                    .coords(&c.apply(moves, v))
                    .ok_or_else(|| Error::IdentityFailed(format!("{name} does not preserve Hom_K")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ExactMatrix::from_columns(self.dim(), &cols))
    }

    fn select(&self, m: &ExactMatrix, rows: impl Fn(usize) -> bool, cols: impl Fn(usize) -> bool) -> ExactMatrix {
        let r: Vec<usize> = (0..self.dim()).filter(|&i| rows(self.degree[i])).collect();
        let c: Vec<usize> = (0..self.dim()).filter(|&i| cols(self.degree[i])).collect();
        m.select(&r, &c)
    }

    /// (M⁺: even → odd, M⁻: odd → even) for an odd operator.
    fn split(&self, m: &ExactMatrix) -> FredholmPairData {
        FredholmPairData {
            s: self.select(m, |d| d % 2 == 1, |d| d % 2 == 0),
            t: self.select(m, |d| d % 2 == 0, |d| d % 2 == 1),
        }
    }
}

/// All operators of the A/B split restricted to Hom_K(∧p ⊗ X, Y).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitOperators {
    pub dims: Vec<usize>,
    /// Chevalley-Eilenberg differential.
    pub d: ExactMatrix,
    /// d₁ = L1A/2, d₂ = L3A/2, d₃ = L2B/2, d₄ = L4B/2.
    pub d_parts: [ExactMatrix; 4],
    /// δ₁ = L2A, δ₂ = L4A, δ₃ = L1B, δ₄ = L3B.
    pub delta_parts: [ExactMatrix; 4],
    /// 𝒟₁..𝒟₄ = L2A, L3A, L2B, L3B, so that 𝒟₁ = δ₁, 𝒟₂ = 2d₂, 𝒟₃ = 2d₃, 𝒟₄ = δ₄.
    pub dirac_parts: [ExactMatrix; 4],
    /// ℰ₁..ℰ₄ = L1A, L4A, L1B, L4B, so that ℰ₁ = 2d₁, ℰ₂ = δ₂, ℰ₃ = δ₃, ℰ₄ = 2d₄.
    pub error_parts: [ExactMatrix; 4],
    /// 𝒟 = 𝒟₁ + 𝒟₂ + 𝒟₃ + 𝒟₄.
    pub dirac_part: ExactMatrix,
    /// ℰ = ℰ₁ + ℰ₂ + ℰ₃ + ℰ₄.
    pub error_part: ExactMatrix,
}

fn sum4(m: &[ExactMatrix; 4]) -> ExactMatrix {
    &(&(&m[0] + &m[1]) + &m[2]) + &m[3]
}

impl SplitOperators {
    /// δ = δ₁ + δ₂ + δ₃ + δ₄.
    pub fn delta(&self) -> ExactMatrix {
        sum4(&self.delta_parts)
    }
}

struct Built<'a> {
    cochains: Cochains<'a>,
    homk: HomK,
    ops: SplitOperators,
}

fn build<'a>(alg: &LabAlgebra, x: &'a MatrixHCModule, y: &'a MatrixHCModule) -> Result<Built<'a>> {
    let cochains = Cochains::new(alg, x, y);
    let homk = HomK::new(cochains.equivariant(alg)?, cochains.total())?;
    let lines = Lines::new(alg, &cochains.wb);
    let r = |m: &[Move], n: &str| homk.restrict(&cochains, m, n);
    let half = qf(1, 2);
    let d = r(&lines.ce, "d")?;
    let (l1a, l2a, l3a, l4a) = (r(&lines.l1a, "L1A")?, r(&lines.l2a, "L2A")?, r(&lines.l3a, "L3A")?, r(&lines.l4a, "L4A")?);
    let (l1b, l2b, l3b, l4b) = (r(&lines.l1b, "L1B")?, r(&lines.l2b, "L2B")?, r(&lines.l3b, "L3B")?, r(&lines.l4b, "L4B")?);
    let dirac_parts = [l2a.clone(), l3a.clone(), l2b.clone(), l3b.clone()];
    let error_parts = [l1a.clone(), l4a.clone(), l1b.clone(), l4b.clone()];
    let ops = SplitOperators {
        dims: homk.dims(),
        d,
        d_parts: [l1a.scale(&half), l3a.scale(&half), l2b.scale(&half), l4b.scale(&half)],
        delta_parts: [l2a, l4a, l1b, l3b],
        dirac_part: sum4(&dirac_parts),
        error_part: sum4(&error_parts),
        dirac_parts,
        error_parts,
    };
    Ok(Built { cochains, homk, ops })
}

/// C^i = Hom_K(∧^i p ⊗ X, Y) with the Chevalley-Eilenberg differential.
pub fn ext_complex(alg: &LabAlgebra, x: &MatrixHCModule, y: &MatrixHCModule) -> Result<GradedComplexData> {
    let b = build(alg, x, y)?;
    complex_from(&b)
}

fn complex_from(b: &Built) -> Result<GradedComplexData> {
    let dims = b.ops.dims.clone();
    let differentials = (0..dims.len().saturating_sub(1))
        .map(|i| b.homk.select(&b.ops.d, |d| d == i + 1, |d| d == i))
        .collect();
    // d must not leave the degree-raising blocks.
    let mut stray = b.ops.d.clone();
    for i in 0..dims.len().saturating_sub(1) {
        let rows: Vec<usize> = (0..b.homk.dim()).filter(|&k| b.homk.degree[k] == i + 1).collect();
        let cols: Vec<usize> = (0..b.homk.dim()).filter(|&k| b.homk.degree[k] == i).collect();
        for &r in &rows {
            for &c in &cols {
                stray[(r, c)] = Q::zero();
            }
        }
    }
    if !stray.is_zero() {
        return Err(Error::IdentityFailed("d does not raise degree by one".into()));
    }
    GradedComplexData::new(dims, differentials)
}

pub fn split_operators(alg: &LabAlgebra, x: &MatrixHCModule, y: &MatrixHCModule) -> Result<SplitOperators> {
    Ok(build(alg, x, y)?.ops)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitReport {
    pub dims: Vec<usize>,
    pub d_is_sum_of_parts: bool,
    pub big_operator_identity: bool,
    pub d_squared_zero: bool,
    pub delta_squared_zero: bool,
    pub transport_intertwines: bool,
}

fn mismatch(name: &str, a: &ExactMatrix, b: &ExactMatrix) -> Result<()> {
    match a.first_mismatch(b) {
        None => Ok(()),
        Some((r, c)) if r < a.rows() && c < a.cols() => Err(Error::IdentityFailed(format!(
            "{name} fails at entry ({r}, {c}): {} vs {}",
            a[(r, c)],
            b[(r, c)]
        ))),
        Some(_) => Err(Error::IdentityFailed(format!("{name}: shapes differ"))),
    }
}

/// Ψ(φ)(x ⊗ u_I) = Σ_J (−1/2)^{|J|} φ(u_I ∧ u*_J ⊗ x) ⊗ u_J, as a flattened (Y⊗S)×(X⊗S) matrix.
fn transport(c: &Cochains, sp: &SpinorMatrices, phi: &[Q]) -> Vec<Q> {
    let ds = sp.dim();
    let cols = c.dx * ds;
    let mut out = vec![Q::zero(); c.dy * ds * cols];
    for (w, (i, j)) in c.wb.elems.iter().enumerate() {
        let coeff = qf(-1, 2).pow(j.len() as i32);
        let (si, sj) = (sp.index_of(i), sp.index_of(j));
        for y in 0..c.dy {
            for x in 0..c.dx {
                let v = &phi[c.at(y, w, x)];
                if !v.is_zero() {
                    out[(y * ds + sj) * cols + x * ds + si] = v * &coeff;
                }
            }
        }
    }
    out
}

/// Checks d = d₁+d₂+d₃+d₄, 2d + δ = 𝒟 + ℰ, d² = 0, δ² = 0 on Hom_K, and that the
/// transport Ψ is an isomorphism onto Hom_K̃(X⊗S, Y⊗S) with 𝐃Ψ = Ψ𝒟.
pub fn verify_split(
    alg: &LabAlgebra,
    x: &MatrixHCModule,
    y: &MatrixHCModule,
    sp: &SpinorMatrices,
) -> Result<SplitReport> {
    let b = build(alg, x, y)?;
    let ops = &b.ops;
    mismatch("d = d₁+d₂+d₃+d₄", &ops.d, &sum4(&ops.d_parts))?;
    let delta = ops.delta();
    mismatch("2d + δ = 𝒟 + ℰ", &(&ops.d.scale(&q(2)) + &delta), &(&ops.dirac_part + &ops.error_part))?;
    let zero = ExactMatrix::zeros(ops.d.rows(), ops.d.cols());
    mismatch("d² = 0", &(&ops.d * &ops.d), &zero)?;
    mismatch("δ² = 0", &(&delta * &delta), &zero)?;
    check_transport(alg, x, y, sp, &b)?;
    Ok(SplitReport {
        dims: ops.dims.clone(),
        d_is_sum_of_parts: true,
        big_operator_identity: true,
        d_squared_zero: true,
        delta_squared_zero: true,
        transport_intertwines: true,
    })
}

fn check_transport(alg: &LabAlgebra, x: &MatrixHCModule, y: &MatrixHCModule, sp: &SpinorMatrices, b: &Built) -> Result<()> {
    let unit = alg.u().iter().enumerate().all(|(a, &i)| {
        alg.u_star().iter().enumerate().all(|(c, &j)| *alg.form(i, j) == if a == c { q(1) } else { q(0) })
    });
    if !unit {
        return Err(Error::InvalidParameter("transport needs B(u_i, u*_j) = δ_ij".into()));
    }
    let space = SuperHomSpace::build(alg, x, y, sp)?;
    if space.even.len() + space.odd.len() != b.homk.dim() {
        return Err(Error::IdentityFailed(format!(
            "dim Hom_K(∧p⊗X, Y) = {} but dim Hom_K̃(X⊗S, Y⊗S) = {}",
            b.homk.dim(),
            space.even.len() + space.odd.len()
        )));
    }
    let dx = dirac_matrix(alg, x, sp);
    let dy = dirac_matrix(alg, y, sp);
    let eps = tensor_grading(x, sp);
    let (rows, cols) = (y.dimension * sp.dim(), x.dimension * sp.dim());
    for (k, phi) in b.homk.basis.iter().enumerate() {
        let psi = transport(&b.cochains, sp, phi);
        let in_space =
            if b.homk.degree[k] % 2 == 0 { space.even_coords(&psi).is_some() } else { space.odd_coords(&psi).is_some() };
        if !in_space {
            return Err(Error::IdentityFailed(format!("Ψ of basis cochain {k} is not K̃-equivariant of the right parity")));
        }
        let dcal_phi: Vec<Q> = b.homk.chart.vector(&b.ops.dirac_part.column(k));
        let lhs = flat(&super_commutator(&dy, &dx, &eps, &unflat(rows, cols, &psi)));
        let rhs = transport(&b.cochains, sp, &dcal_phi);
        if lhs != rhs {
            return Err(Error::IdentityFailed(format!("𝐃Ψ ≠ Ψ𝒟 on basis cochain {k}")));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub dims: Vec<usize>,
    pub euler: i64,
    pub index_d: i64,
    pub index_dirac_part: i64,
    pub equal: bool,
}

/// ind(d⁺, d⁻) against ind(𝒟⁺, 𝒟⁻), both from the Fredholm-pair definition.
pub fn conjecture_check(alg: &LabAlgebra, x: &MatrixHCModule, y: &MatrixHCModule) -> Result<ConjectureReport> {
    let b = build(alg, x, y)?;
    let complex = complex_from(&b)?;
    let index_d = fredholm_index(&complex_to_pair(&complex)?)?.index;
    let index_dirac_part = fredholm_index(&b.homk.split(&b.ops.dirac_part))?.index;
    let euler = complex.chain_euler();
    Ok(ConjectureReport {
        dims: complex.dims,
        euler,
        index_d,
        index_dirac_part,
        equal: euler == index_d && index_d == index_dirac_part,
    })
}

/// (V, 2d, δ) on V = Hom_K(∧p ⊗ X, Y) graded by degree parity, even degrees first.
pub fn perturbation_export(alg: &LabAlgebra, x: &MatrixHCModule, y: &MatrixHCModule, label: &str) -> Result<PerturbationInstance> {
    let b = build(alg, x, y)?;
    let order: Vec<usize> = (0..b.homk.dim())
        .filter(|&k| b.homk.degree[k] % 2 == 0)
        .chain((0..b.homk.dim()).filter(|&k| b.homk.degree[k] % 2 == 1))
        .collect();
    let even = b.homk.degree.iter().filter(|d| *d % 2 == 0).count();
    Ok(PerturbationInstance {
        label: label.to_string(),
        space: SuperSpace { even, odd: b.homk.dim() - even },
        d: b.ops.d.scale(&q(2)).select(&order, &order),
        del: b.ops.delta().select(&order, &order),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fredholm::perturbed_index;
    use crate::lab::build_spinor_matrices;

    fn sl2() -> (LabAlgebra, SpinorMatrices) {
        let a = LabAlgebra::preset("sl2R").unwrap();
        let sp = build_spinor_matrices(&a).unwrap();
        (a, sp)
    }

    #[test]
    fn trivial_complex() {
        let (a, sp) = sl2();
        let t = MatrixHCModule::trivial(&a);
        let c = ext_complex(&a, &t, &t).unwrap();
        assert_eq!(c.dims, vec![1, 0, 1]);
        assert!(c.differentials.iter().all(ExactMatrix::is_zero));
        assert_eq!(c.cohomology_dims(), vec![1, 0, 1]);
        let ops = split_operators(&a, &t, &t).unwrap();
        assert!(ops.d.is_zero() && ops.delta().is_zero() && ops.dirac_part.is_zero() && ops.error_part.is_zero());
        verify_split(&a, &t, &t, &sp).unwrap();
        let r = conjecture_check(&a, &t, &t).unwrap();
        assert_eq!((r.index_d, r.index_dirac_part), (2, 2));
    }

    #[test]
    fn f1_f3_euler_vanishes() {
        let (a, _) = sl2();
        let x = MatrixHCModule::sl2_irreducible(&a, 1).unwrap();
        let y = MatrixHCModule::sl2_irreducible(&a, 3).unwrap();
        let c = ext_complex(&a, &x, &y).unwrap();
        assert_eq!(c.dims, vec![2, 4, 2]);
        assert_eq!(c.chain_euler(), 0);
    }

    #[test]
    fn sl2_split_identities() {
        let (a, sp) = sl2();
        for n in 0..=3 {
            for m in 0..=3 {
                let x = MatrixHCModule::sl2_irreducible(&a, n).unwrap();
                let y = MatrixHCModule::sl2_irreducible(&a, m).unwrap();
                verify_split(&a, &x, &y, &sp).unwrap();
                let r = conjecture_check(&a, &x, &y).unwrap();
                let expected = if n == m { 2 } else { 0 };
                assert!(r.equal && r.index_d == expected, "F_{n}, F_{m}: {r:?}");
            }
        }
    }

    #[test]
    fn different_parity_gives_empty_complex() {
        let (a, _) = sl2();
        let x = MatrixHCModule::sl2_irreducible(&a, 1).unwrap();
        let y = MatrixHCModule::sl2_irreducible(&a, 2).unwrap();
        let c = ext_complex(&a, &x, &y).unwrap();
        assert_eq!(c.dims, vec![0, 0, 0]);
    }

    #[test]
    fn su21_split_identities() {
        let a = LabAlgebra::preset("su21").unwrap();
        let sp = build_spinor_matrices(&a).unwrap();
        let mods = [MatrixHCModule::trivial(&a), MatrixHCModule::standard(&a).unwrap()];
        for x in &mods {
            for y in &mods {
                verify_split(&a, x, y, &sp).unwrap();
                let r = conjecture_check(&a, x, y).unwrap();
                assert!(r.equal, "{r:?}");
            }
        }
    }

    #[test]
    fn exports_satisfy_the_perturbation_statement() {
        let (a, _) = sl2();
        for n in 0..=2 {
            let x = MatrixHCModule::sl2_irreducible(&a, n).unwrap();
            let e = perturbation_export(&a, &x, &x, "F").unwrap();
            let r = perturbed_index(e.space, &e.d, &e.del).unwrap();
            assert!(r.holds);
            assert_eq!(r.index_unperturbed, 2);
        }
    }
}
