//! Dense matrices over the rationals, with fraction-free rank and RREF kernels.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `p/q`, or `p` when integral.
pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn ser_q<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_q(x))
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(format_q).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(ExactMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Builds an `rows x cols` matrix from integer rows; panics on ragged input.
    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ExactMatrix { rows: r, cols: c, data: rows.iter().flatten().map(|&x| q(x)).collect() }
    }

    pub fn from_columns(rows: usize, cols: &[Vec<Q>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Q>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn scale(&self, s: &Q) -> Self {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!("{:?} vs {:?}", self.shape(), other.shape())));
        }
        Ok(())
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![Q::zero(); self.rows];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = &self[(i, j)];
                if !a.is_zero() {
                    *o += a * x;
                }
            }
        }
        out
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (r1, c1) = self.shape();
        let (r2, c2) = other.shape();
        let mut out = Self::zeros(r1 * r2, c1 * c2);
        for i in 0..r1 {
            for j in 0..c1 {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..r2 {
                    for l in 0..c2 {
                        let b = &other[(k, l)];
                        if !b.is_zero() {
                            out[(i * r2 + k, j * c2 + l)] = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn hstack(blocks: &[&Self]) -> Result<Self> {
        let rows = blocks.first().map_or(0, |b| b.rows);
        if blocks.iter().any(|b| b.rows != rows) {
            return Err(Error::ShapeMismatch("hstack row counts differ".into()));
        }
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            out.set_block(0, off, b);
            off += b.cols;
        }
        Ok(out)
    }

    pub fn vstack(blocks: &[&Self]) -> Result<Self> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        if blocks.iter().any(|b| b.cols != cols) {
            return Err(Error::ShapeMismatch("vstack column counts differ".into()));
        }
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = Self::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            out.set_block(off, 0, b);
            off += b.rows;
        }
        Ok(out)
    }

    pub fn block_diag(blocks: &[&Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols);
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        out
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out[(i, j)] = self[(r, c)].clone();
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m.data[r * m.cols + j] * &inv;
                m.data[r * m.cols + j] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m.data[r * m.cols + j].is_zero() {
                        continue;
                    }
                    let v = &m.data[r * m.cols + j] * &f;
                    m.data[i * m.cols + j] -= v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Rank by fraction-free (Bareiss) elimination over the integers.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<BigInt>> = (0..self.rows).map(|r| integer_row(self.row(r))).collect();
        let (rows, cols) = (self.rows, self.cols);
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let piv = m[r][c].clone();
            for i in r + 1..rows {
                let f = m[i][c].clone();
                for j in c..cols {
                    let v = &piv * &m[i][j] - &f * &m[r][j];
                    m[i][j] = v.div_floor(&prev);
                }
            }
            prev = piv;
            r += 1;
        }
        r
    }

    /// Rank by RREF; an independent route used to cross-check `rank`.
    pub fn rank_rref(&self) -> usize {
        self.rref().1.len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Kernel basis as columns; each basis vector has a 1 at its own free column.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Linearly independent spanning set of the column space, drawn from the columns.
    pub fn column_basis(&self) -> Vec<Vec<Q>> {
        let (_, pivots) = self.rref();
        pivots.iter().map(|&c| self.column(c)).collect()
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = Self::hstack(&[self, &Self::identity(n)]).ok()?;
        let (r, pivots) = aug.rref();
        if n > 0 && (pivots.len() < n || pivots[n - 1] != n - 1) {
            return None;
        }
        Some(r.block(0, n, n, n))
    }

    pub fn determinant(&self) -> Option<Q> {
        if !self.is_square() {
            return None;
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Some(Q::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &piv;
                for j in c..n {
                    let v = &m[(c, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
        }
        Some(det)
    }

    /// Solves `self * x = b` when consistent.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows);
        let col = Self::from_columns(self.rows, &[b.to_vec()]);
        let aug = Self::hstack(&[self, &col]).ok()?;
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    /// First entry where the two matrices differ.
    pub fn first_mismatch(&self, other: &Self) -> Option<(usize, usize)> {
        if self.shape() != other.shape() {
            return Some((usize::MAX, usize::MAX));
        }
        (0..self.rows)
            .flat_map(|r| (0..self.cols).map(move |c| (r, c)))
            .find(|&(r, c)| self[(r, c)] != other[(r, c)])
    }
}

fn integer_row(row: &[Q]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

impl std::ops::Index<(usize, usize)> for ExactMatrix {
    type Output = Q;
    fn index(&self, (r, c): (usize, usize)) -> &Q {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Q {
        &mut self.data[r * self.cols + c]
    }
}

impl std::ops::Mul for &ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.try_mul(rhs).expect("matrix product shape")
    }
}

impl std::ops::Add for &ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.try_add(rhs).expect("matrix sum shape")
    }
}

impl std::ops::Sub for &ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.try_sub(rhs).expect("matrix difference shape")
    }
}

impl std::ops::Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        self.scale(&-Q::one())
    }
}

impl Serialize for ExactMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|r| self.row(r).iter().map(format_q).collect()).collect();
        rows.serialize(s)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Int(i64),
    Text(String),
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<Entry>> = Vec::deserialize(d)?;
        let rows = rows
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|e| match e {
                        Entry::Int(n) => Ok(q(n)),
                        Entry::Text(t) => parse_q(&t),
                    })
                    .collect::<Result<Vec<Q>>>()
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        ExactMatrix::from_rows(rows).map_err(D::Error::custom)
    }
}

/// A subspace of `Q^n` held by a basis in column form.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Q>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, ExactMatrix::identity(ambient).columns())
    }

    /// Span of arbitrary vectors; dependent vectors are dropped.
    pub fn span(ambient: usize, vectors: Vec<Vec<Q>>) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let m = ExactMatrix::from_columns(ambient, &vectors);
        Subspace { ambient, basis: m.column_basis() }
    }

    pub fn kernel(m: &ExactMatrix) -> Self {
        Subspace { ambient: m.cols(), basis: m.kernel() }
    }

    pub fn image(m: &ExactMatrix) -> Self {
        Subspace { ambient: m.rows(), basis: m.column_basis() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> ExactMatrix {
        ExactMatrix::from_columns(self.ambient, &self.basis)
    }

    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient);
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Self::span(self.ambient, v)
    }

    /// dim(U ∩ V) = dim U + dim V − dim(U + V).
    pub fn intersection_dim(&self, other: &Self) -> usize {
        self.dim() + other.dim() - self.sum(other).dim()
    }

    pub fn intersection(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient);
        if self.dim() == 0 || other.dim() == 0 {
            return Self::zero(self.ambient);
        }
        let a = self.basis_matrix();
        let b = other.basis_matrix();
        let m = ExactMatrix::hstack(&[&a, &(-&b)]).expect("same ambient");
        let vecs = m.kernel().into_iter().map(|k| a.apply(&k[..self.dim()])).collect();
        Self::span(self.ambient, vecs)
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        if self.dim() == 0 {
            return false;
        }
        self.basis_matrix().solve(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        self.sum(other).dim() == self.dim()
    }

    /// Vectors extending this subspace's basis to a basis of the ambient space.
    pub fn complement(&self) -> Vec<Vec<Q>> {
        let mut cols = self.basis.clone();
        cols.extend(ExactMatrix::identity(self.ambient).columns());
        let m = ExactMatrix::from_columns(self.ambient, &cols);
        let (_, pivots) = m.rref();
        pivots.into_iter().filter(|&p| p >= self.dim()).map(|p| cols[p].clone()).collect()
    }
}

/// Coordinates with respect to a fixed basis of a subspace.
///
/// Picks rows on which the basis matrix is invertible; `coords` then costs a
/// single matrix-vector product plus a membership check.
#[derive(Clone, Debug)]
pub struct CoordinateChart {
    basis: ExactMatrix,
    rows: Vec<usize>,
    left_inverse: ExactMatrix,
}

impl CoordinateChart {
    pub fn new(ambient: usize, basis: &[Vec<Q>]) -> Result<Self> {
        let b = ExactMatrix::from_columns(ambient, basis);
        let (_, rows) = b.transpose().rref();
        if rows.len() != basis.len() {
            return Err(Error::ShapeMismatch("chart basis is dependent".into()));
        }
        let sq = b.select(&rows, &(0..basis.len()).collect::<Vec<_>>());
        let left_inverse = sq.inverse().expect("independent rows");
        Ok(CoordinateChart { basis: b, rows, left_inverse })
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn coords(&self, v: &[Q]) -> Option<Vec<Q>> {
        let picked: Vec<Q> = self.rows.iter().map(|&r| v[r].clone()).collect();
        let c = self.left_inverse.apply(&picked);
        (self.basis.apply(&c) == v).then_some(c)
    }

    pub fn vector(&self, coords: &[Q]) -> Vec<Q> {
        self.basis.apply(coords)
    }
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}
