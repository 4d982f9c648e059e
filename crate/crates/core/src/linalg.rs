//! Dense exact linear algebra over Q.
//!
//! Vectors are plain `Vec<Rational>`. Matrices act on column vectors, so a
//! matrix with `cols` columns maps Q^cols to Q^rows. Zero-sized matrices are
//! legal everywhere and behave like the zero map between the right spaces.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(rational::format).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]({}x{})", self.rows, self.cols)
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: RationalMatrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn scalar(n: usize, q: Rational) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = q.clone();
        }
        m
    }

    /// Builds from explicit rows. `cols` is needed to describe 0-row matrices.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(RationalMatrix {
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| rational::int(x)).collect())
            .collect();
        Self::from_rows(rows, cols).expect("ragged integer matrix")
    }

    /// Columns given as vectors of length `rows`.
    pub fn from_columns(columns: &[Vec<Rational>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column {j} has wrong length");
            for (i, x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, q: Rational) {
        self.data[i * self.cols + j] = q;
    }

    pub fn add_to(&mut self, i: usize, j: usize, q: &Rational) {
        let e = &mut self.data[i * self.cols + j];
        *e += q;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn scale(&self, q: &Rational) -> Self {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * q).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "vector length does not match matrix columns");
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Side-by-side concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut out = Self::zeros(self.rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i * cols + j] = self.get(i, j).clone();
            }
            for j in 0..other.cols {
                out.data[i * cols + self.cols + j] = other.get(i, j).clone();
            }
        }
        out
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        RationalMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (jj, &j) in idx.iter().enumerate() {
                out.data[i * idx.len() + jj] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        RationalMatrix {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = block.get(i, j).clone();
            }
        }
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m.get(r, c).recip();
            if !inv.is_one() {
                for j in c..m.cols {
                    let x = &m.data[r * m.cols + j] * &inv;
                    m.data[r * m.cols + j] = x;
                }
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let pj = &m.data[r * m.cols + j];
                    if pj.is_zero() {
                        continue;
                    }
                    let delta = &f * pj;
                    m.data[i * m.cols + j] -= delta;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    pub fn kernel_basis(&self) -> Subspace {
        let rref = self.rref();
        let n = self.cols;
        let mut is_pivot = vec![false; n];
        for &p in &rref.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..n).filter(|&j| !is_pivot[j]) {
            let mut v = vec![Rational::zero(); n];
            v[free] = Rational::one();
            for (row, &p) in rref.pivots.iter().enumerate() {
                v[p] = -rref.matrix.get(row, free).clone();
            }
            basis.push(v);
        }
        Subspace { ambient_dim: n, basis }
    }

    /// Column space, with a basis read off the reduced row echelon form of
    /// the transpose (canonical for a given subspace).
    pub fn column_space(&self) -> Subspace {
        let rref = self.transpose().rref();
        let basis = (0..rref.rank()).map(|i| rref.matrix.row(i).to_vec()).collect();
        Subspace {
            ambient_dim: self.rows,
            basis,
        }
    }

    /// Particular solution of `A x = b` with all free variables set to zero,
    /// or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {}, matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let col = RationalMatrix::from_columns(&[b.to_vec()], self.rows);
        let aug = self.hstack(&col).rref();
        if aug.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &p) in aug.pivots.iter().enumerate() {
            x[p] = aug.matrix.get(row, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Solves `A X = B` column by column; `None` if any column is unsolvable.
    pub fn solve_matrix(&self, b: &RationalMatrix) -> Result<Option<RationalMatrix>> {
        if b.rows != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has {} rows, matrix has {}",
                b.rows, self.rows
            )));
        }
        let aug = self.hstack(b).rref();
        if aug.pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = RationalMatrix::zeros(self.cols, b.cols);
        for (row, &p) in aug.pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(p, j, aug.matrix.get(row, self.cols + j).clone());
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<RationalMatrix> {
        if !self.is_square() {
            return None;
        }
        let aug = self.hstack(&Self::identity(self.rows)).rref();
        if aug.rank() < self.rows || aug.pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let idx: Vec<usize> = (self.cols..2 * self.cols).collect();
        Some(aug.matrix.select_columns(&idx))
    }

    /// A matrix `L` with `L * self = I`, for `self` of full column rank.
    pub fn left_inverse(&self) -> Option<RationalMatrix> {
        let k = self.cols;
        let rows = self.transpose().rref().pivots;
        if rows.len() < k {
            return None;
        }
        let square = self.select_rows(&rows);
        let inv = square.inverse()?;
        let mut l = RationalMatrix::zeros(k, self.rows);
        for (jj, &j) in rows.iter().enumerate() {
            for i in 0..k {
                l.set(i, j, inv.get(i, jj).clone());
            }
        }
        Some(l)
    }

    pub fn determinant(&self) -> Option<Rational> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let p = (c..n).find(|&i| !m.get(i, c).is_zero());
            let Some(p) = p else {
                return Some(Rational::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det *= &piv;
            for i in c + 1..n {
                let f = m.get(i, c) / &piv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let delta = &f * m.get(c, j);
                    m.data[i * n + j] -= delta;
                }
            }
        }
        Some(det)
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;
    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        self.checked_mul(rhs).expect("matrix product dimension mismatch")
    }
}

impl Add for &RationalMatrix {
    type Output = RationalMatrix;
    fn add(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix sum shape mismatch"
        );
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &RationalMatrix {
    type Output = RationalMatrix;
    fn sub(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix difference shape mismatch"
        );
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &RationalMatrix {
    type Output = RationalMatrix;
    fn neg(self) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    #[serde(with = "crate::rational::serde_rational_vecs")]
    entries: Vec<Vec<Rational>>,
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            entries: self.to_rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = MatrixRepr::deserialize(d)?;
        if r.entries.len() != r.rows {
            return Err(serde::de::Error::custom("row count mismatch"));
        }
        RationalMatrix::from_rows(r.entries, r.cols).map_err(serde::de::Error::custom)
    }
}

/// A subspace of Q^n given by a linearly independent spanning list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: RationalMatrix::identity(ambient_dim).columns(),
        }
    }

    /// Span of arbitrary vectors; the stored basis is canonical (reduced echelon).
    pub fn span(ambient_dim: usize, vectors: &[Vec<Rational>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient_dim);
        }
        RationalMatrix::from_columns(vectors, ambient_dim).column_space()
    }

    /// Wraps vectors already known to be independent, keeping them as given.
    pub fn from_independent(ambient_dim: usize, basis: Vec<Vec<Rational>>) -> Result<Self> {
        let s = Subspace { ambient_dim, basis };
        if s.basis.iter().any(|v| v.len() != ambient_dim) {
            return Err(Error::DimensionMismatch("basis vector of wrong length".into()));
        }
        if s.basis_matrix().rank() != s.basis.len() {
            return Err(Error::Invariant("basis vectors are linearly dependent".into()));
        }
        Ok(s)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    /// Basis vectors as the columns of an `ambient_dim x dim` matrix.
    pub fn basis_matrix(&self) -> RationalMatrix {
        RationalMatrix::from_columns(&self.basis, self.ambient_dim)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        self.basis_matrix().solve(v).ok().flatten()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient_dim, &all)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // Solve a·x = b·y and map the solutions back through a.
        let a = self.basis_matrix();
        let b = other.basis_matrix();
        let combined = a.hstack(&(-&b));
        let ker = combined.kernel_basis();
        let vecs: Vec<Vec<Rational>> = ker.basis.iter().map(|k| a.mul_vec(&k[..self.dim()])).collect();
        Subspace::span(self.ambient_dim, &vecs)
    }
}

/// Homology of `Q^a --d_in--> Q^n --d_out--> Q^b`.
#[derive(Clone, Debug)]
pub struct Homology {
    pub dim: usize,
    /// Kernel vectors of `d_out` independent modulo the image of `d_in`.
    pub representatives: Vec<Vec<Rational>>,
}

pub fn homology(d_out: &RationalMatrix, d_in: &RationalMatrix) -> Result<Homology> {
    if d_out.cols() != d_in.rows() {
        return Err(Error::DimensionMismatch(format!(
            "outgoing map has {} columns, incoming map has {} rows",
            d_out.cols(),
            d_in.rows()
        )));
    }
    if !d_out.checked_mul(d_in)?.is_zero() {
        return Err(Error::NotAComplex { position: 0, degree: 0 });
    }
    let n = d_out.cols();
    let ker = d_out.kernel_basis();
    let im = d_in.column_space();
    let reps = extend_basis(n, im.basis(), ker.basis());
    Ok(Homology {
        dim: ker.dim() - im.dim(),
        representatives: reps,
    })
}

/// Dimension-only form of [`homology`].
pub fn homology_dim(d_out: &RationalMatrix, d_in: &RationalMatrix) -> Result<usize> {
    homology(d_out, d_in).map(|h| h.dim)
}

/// Picks, in order, the vectors of `candidates` that are independent modulo
/// the span of `fixed` and of the previously picked candidates.
pub fn extend_basis(ambient_dim: usize, fixed: &[Vec<Rational>], candidates: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut cols = fixed.to_vec();
    cols.extend(candidates.iter().cloned());
    if cols.is_empty() {
        return Vec::new();
    }
    let m = RationalMatrix::from_columns(&cols, ambient_dim);
    m.rref()
        .pivots
        .into_iter()
        .filter(|&p| p >= fixed.len())
        .map(|p| candidates[p - fixed.len()].clone())
        .collect()
}

/// The quotient `S / U` of a subspace `S` of Q^n by a subspace `U ⊆ S`.
///
/// `representatives` are vectors of `S` whose classes form the quotient
/// basis; `projection` sends a vector of `S` (ambient coordinates) to its
/// quotient coordinates. Its values on vectors outside `S` are meaningless.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub representatives: Vec<Vec<Rational>>,
    pub projection: RationalMatrix,
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn new(space: &Subspace, sub: &[Vec<Rational>]) -> Result<Quotient> {
        let n = space.ambient_dim();
        let sub_basis = Subspace::span(n, sub);
        if !space.contains_subspace(&sub_basis) {
            return Err(Error::Invariant(
                "quotient by a subspace not contained in the space".into(),
            ));
        }
        let reps = extend_basis(n, sub_basis.basis(), space.basis());
        let mut cols = sub_basis.basis().to_vec();
        cols.extend(reps.iter().cloned());
        let projection = if cols.is_empty() {
            RationalMatrix::zeros(0, n)
        } else {
            let b = RationalMatrix::from_columns(&cols, n);
            let l = b
                .left_inverse()
                .ok_or_else(|| Error::Invariant("quotient basis is not independent".into()))?;
            let idx: Vec<usize> = (sub_basis.dim()..cols.len()).collect();
            l.select_rows(&idx)
        };
        Ok(Quotient {
            representatives: reps,
            projection,
        })
    }
}

/// Matrix of `map` restricted to subspaces, in their basis coordinates:
/// returns `X` with `target_basis * X = map * source_basis`.
pub fn restrict_map(map: &RationalMatrix, source: &Subspace, target: &Subspace) -> Result<RationalMatrix> {
    let image = map.checked_mul(&source.basis_matrix())?;
    target
        .basis_matrix()
        .solve_matrix(&image)?
        .ok_or_else(|| Error::Invariant("map does not preserve the given subspaces".into()))
}
