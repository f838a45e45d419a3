//! Seeded generators of random exact instances.
//!
//! Every instance draws from its own ChaCha stream, so results do not depend
//! on the order in which a thread pool happens to run them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ExtensionDiagram, FredholmPairData, GradedComplexData, SuperSpace};
use crate::linalg::{q, ExactMatrix, Subspace};

/// RNG for instance `index` of the family tagged `family` under the run seed.
pub fn instance_rng(seed: u64, family: u32, index: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((u64::from(family) << 32) | u64::from(index));
    rng
}

/// Entries uniform in [−range, range], each zero with probability `sparsity`.
pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, range: i64, sparsity: f64) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            if !rng.random_bool(sparsity) {
                m[(r, c)] = q(rng.random_range(-range..=range));
            }
        }
    }
    m
}

/// A product of random rows×k and k×cols factors, so rank ≤ k.
pub fn random_low_rank<R: Rng>(rng: &mut R, rows: usize, cols: usize, k: usize) -> ExactMatrix {
    let a = random_matrix(rng, rows, k, 3, 0.2);
    let b = random_matrix(rng, k, cols, 3, 0.2);
    &a * &b
}

/// Random matrix with a random rank between 0 and min(rows, cols).
pub fn random_any_rank<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ExactMatrix {
    let k = rng.random_range(0..=rows.min(cols));
    random_low_rank(rng, rows, cols, k)
}

/// Unimodular upper-times-lower product; invertible over ℤ.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> ExactMatrix {
    let mut u = ExactMatrix::identity(n);
    let mut l = ExactMatrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            u[(i, j)] = q(rng.random_range(-2..=2));
            l[(j, i)] = q(rng.random_range(-2..=2));
        }
    }
    &u * &l
}

/// Random pair with independent random S and T, dimensions at most `max_dim`.
pub fn random_pair<R: Rng>(rng: &mut R, max_dim: usize) -> FredholmPairData {
    let x = rng.random_range(0..=max_dim);
    let y = rng.random_range(0..=max_dim);
    let s = random_any_rank(rng, y, x);
    let t = random_any_rank(rng, x, y);
    FredholmPairData { s, t }
}

/// M whose rows are random combinations of vectors spanning {v : v·m = 0}.
fn left_annihilator<R: Rng>(rng: &mut R, m: &ExactMatrix, rows: usize) -> ExactMatrix {
    let left = m.transpose().kernel();
    let coeffs = random_matrix(rng, rows, left.len(), 3, 0.2);
    if left.is_empty() {
        return ExactMatrix::zeros(rows, m.rows());
    }
    &coeffs * &ExactMatrix::from_columns(m.rows(), &left).transpose()
}

/// T = K·R·L with K spanning ker S and L annihilating Im S, so ST = 0 = TS.
pub fn random_two_periodic_t<R: Rng>(rng: &mut R, s: &ExactMatrix) -> ExactMatrix {
    let ker = Subspace::kernel(s);
    let left = Subspace::kernel(&s.transpose());
    if ker.dim() == 0 || left.dim() == 0 {
        return ExactMatrix::zeros(s.cols(), s.rows());
    }
    let k = ker.basis_matrix();
    let l = left.basis_matrix().transpose();
    let r = random_any_rank(rng, k.cols(), l.rows());
    &(&k * &r) * &l
}

/// Random pair with ST = 0 and TS = 0.
pub fn random_two_periodic<R: Rng>(rng: &mut R, max_dim: usize) -> FredholmPairData {
    let x = rng.random_range(0..=max_dim);
    let y = rng.random_range(0..=max_dim);
    let s = random_any_rank(rng, y, x);
    let t = random_two_periodic_t(rng, &s);
    FredholmPairData { s, t }
}

/// Random complex with `len` spaces of dimension at most `max_dim`.
pub fn random_complex<R: Rng>(rng: &mut R, len: usize, max_dim: usize) -> GradedComplexData {
    let dims: Vec<usize> = (0..len).map(|_| rng.random_range(0..=max_dim)).collect();
    let mut differentials: Vec<ExactMatrix> = Vec::new();
    for i in 0..len.saturating_sub(1) {
        let d = match differentials.last() {
            None => random_any_rank(rng, dims[1], dims[0]),
            Some(prev) => {
                let k = rng.random_range(0..=dims[i]);
                let ann = left_annihilator(rng, prev, k);
                &random_matrix(rng, dims[i + 1], k, 3, 0.2) * &ann
            }
        };
        differentials.push(d);
    }
    GradedComplexData { dims, differentials }
}

fn conjugated_extension(
    p1: FredholmPairData,
    p3: FredholmPairData,
    e: ExactMatrix,
    f: ExactMatrix,
    px: &ExactMatrix,
    py: &ExactMatrix,
) -> ExtensionDiagram {
    let (x1, y1, x3, y3) = (p1.dim_x(), p1.dim_y(), p3.dim_x(), p3.dim_y());
    let s2 = ExactMatrix::vstack(&[
        &ExactMatrix::hstack(&[&p1.s, &e]).unwrap(),
        &ExactMatrix::hstack(&[&ExactMatrix::zeros(y3, x1), &p3.s]).unwrap(),
    ])
    .unwrap();
    let t2 = ExactMatrix::vstack(&[
        &ExactMatrix::hstack(&[&p1.t, &f]).unwrap(),
        &ExactMatrix::hstack(&[&ExactMatrix::zeros(x3, y1), &p3.t]).unwrap(),
    ])
    .unwrap();
    let inc = |a: usize, b: usize| ExactMatrix::vstack(&[&ExactMatrix::identity(a), &ExactMatrix::zeros(b, a)]).unwrap();
    let proj = |a: usize, b: usize| ExactMatrix::hstack(&[&ExactMatrix::zeros(b, a), &ExactMatrix::identity(b)]).unwrap();
    let px_inv = px.inverse().expect("invertible");
    let py_inv = py.inverse().expect("invertible");
    let p2 = FredholmPairData { s: &(py * &s2) * &px_inv, t: &(px * &t2) * &py_inv };
    ExtensionDiagram {
        alpha: px * &inc(x1, x3),
        beta: &proj(x1, x3) * &px_inv,
        gamma: py * &inc(y1, y3),
        delta: &proj(y1, y3) * &py_inv,
        pairs: [p1, p2, p3],
    }
}

/// Extension of two random 2-periodic pairs, viewed in a random basis of the middle term.
///
/// With off-diagonal blocks E = S₁A + BS₃ and F = −(T₁B + AT₃) the middle
/// pair again satisfies ST = 0 = TS.
pub fn random_extension<R: Rng>(rng: &mut R, max_dim: usize) -> ExtensionDiagram {
    let p1 = random_two_periodic(rng, max_dim);
    let p3 = random_two_periodic(rng, max_dim);
    let a = random_matrix(rng, p1.dim_x(), p3.dim_x(), 2, 0.3);
    let b = random_matrix(rng, p1.dim_y(), p3.dim_y(), 2, 0.3);
    let e = &(&p1.s * &a) + &(&b * &p3.s);
    let f = -&(&(&p1.t * &b) + &(&a * &p3.t));
    let px = random_invertible(rng, p1.dim_x() + p3.dim_x());
    let py = random_invertible(rng, p1.dim_y() + p3.dim_y());
    conjugated_extension(p1, p3, e, f, &px, &py)
}

/// Odd d with d² = 0 and its adjoint ∂ = M⁻¹dᵀM for a random graded positive definite M.
///
/// ℱ = d + ∂ is then self-adjoint for M, so ℱ² is semisimple.
pub fn random_adjoint_perturbation<R: Rng>(rng: &mut R, max_dim: usize) -> (SuperSpace, ExactMatrix, ExactMatrix) {
    let p = random_two_periodic(rng, max_dim);
    let v = SuperSpace { even: p.dim_x(), odd: p.dim_y() };
    let d = odd_from_pair(v, &p);
    let gram = |rng: &mut R, n: usize| {
        let a = random_invertible(rng, n);
        &a.transpose() * &a
    };
    let m = ExactMatrix::block_diag(&[&gram(rng, v.even), &gram(rng, v.odd)]);
    let del = &(&m.inverse().expect("positive definite") * &d.transpose()) * &m;
    (v, d, del)
}

/// Odd d and ∂ built from two independent 2-periodic pairs; ℱ² need not be semisimple.
pub fn random_free_perturbation<R: Rng>(rng: &mut R, max_dim: usize) -> (SuperSpace, ExactMatrix, ExactMatrix) {
    let p = random_two_periodic(rng, max_dim);
    let v = SuperSpace { even: p.dim_x(), odd: p.dim_y() };
    let s = random_any_rank(rng, v.odd, v.even);
    let t = random_two_periodic_t(rng, &s);
    (v, odd_from_pair(v, &p), odd_from_pair(v, &FredholmPairData { s, t }))
}

/// [[0, T], [S, 0]] on V⁰ ⊕ V¹.
pub fn odd_from_pair(v: SuperSpace, p: &FredholmPairData) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(v.dim(), v.dim());
    m.set_block(v.even, 0, &p.s);
    m.set_block(0, v.even, &p.t);
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = random_pair(&mut instance_rng(7, 1, 3), 6);
        let b = random_pair(&mut instance_rng(7, 1, 3), 6);
        assert_eq!(a, b);
        let samples: Vec<_> = (0..8).map(|i| random_matrix(&mut instance_rng(7, 1, i), 3, 3, 5, 0.0)).collect();
        assert!(samples.windows(2).any(|w| w[0] != w[1]));
    }

    #[test]
    fn generated_objects_satisfy_their_constraints() {
        for i in 0..30 {
            let mut rng = instance_rng(11, 0, i);
            assert!(random_two_periodic(&mut rng, 6).is_two_periodic());
            random_complex(&mut rng, 4, 6).validate().unwrap();
            let n = rng.random_range(0..5);
            assert_eq!(random_invertible(&mut rng, n).rank(), n);
            let (v, d, del) = random_adjoint_perturbation(&mut rng, 5);
            assert!((&d * &d).is_zero() && (&del * &del).is_zero());
            assert_eq!(d.shape(), (v.dim(), v.dim()));
        }
    }
}
