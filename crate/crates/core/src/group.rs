//! Finite groups given by multiplication tables, their rational
//! representations, and group averaging.

use std::sync::Arc;

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{RationalMatrix, Subspace};
use crate::rational::{self, Rational};

/// A finite group. Elements are indices `0..order`; `table[a][b]` is `a*b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a multiplication table. The first violated axiom is reported.
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if names.len() != n {
            return Err(Error::InvalidGroup(format!(
                "{} element names for a table of size {n}",
                names.len()
            )));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::InvalidGroup(format!("duplicate element name {name:?}")));
            }
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!(
                    "row {a} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidGroup(format!(
                    "closure: entry {x} in row {a} is not an element"
                )));
            }
        }
        for a in 0..n {
            let mut seen = vec![false; n];
            for b in 0..n {
                if std::mem::replace(&mut seen[table[a][b]], true) {
                    return Err(Error::InvalidGroup(format!(
                        "cancellation: row {a} ({}) is not a permutation",
                        names[a]
                    )));
                }
            }
            let mut seen = vec![false; n];
            for b in 0..n {
                if std::mem::replace(&mut seen[table[b][a]], true) {
                    return Err(Error::InvalidGroup(format!(
                        "cancellation: column {a} ({}) is not a permutation",
                        names[a]
                    )));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails for ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inverses = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {} has no inverse", names[a])))?;
            inverses.push(inv);
        }
        Ok(FiniteGroup {
            names,
            table,
            identity,
            inverses,
        })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Z/n with elements `e, g, g2, ..., g{n-1}`; for n = 2 the generator is `w`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let names = (0..n)
            .map(|k| match (k, n) {
                (0, _) => "e".to_string(),
                (1, 2) => "w".to_string(),
                (1, _) => "g".to_string(),
                _ => format!("g{k}"),
            })
            .collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(names, table).expect("cyclic table is a group")
    }

    /// The Klein four group with elements `e, a, b, ab`.
    pub fn klein_four() -> Self {
        let names = ["e", "a", "b", "ab"].iter().map(|s| s.to_string()).collect();
        let table = (0..4).map(|x| (0..4).map(|y| x ^ y).collect()).collect();
        Self::from_table(names, table).expect("Klein four table is a group")
    }

    /// Symmetric group on three letters: `e, t12, t13, t23, c123, c132`.
    pub fn symmetric3() -> Self {
        // Permutations of {0,1,2} as images of 0,1,2.
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
        let names = ["e", "t12", "t13", "t23", "c123", "c132"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        // (a*b)(i) = a(b(i)).
        let table = (0..6)
            .map(|a| {
                (0..6)
                    .map(|b| index([perms[a][perms[b][0]], perms[a][perms[b][1]], perms[a][perms[b][2]]]))
                    .collect()
            })
            .collect();
        Self::from_table(names, table).expect("S3 table is a group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }
}

/// A representation of a finite group on Q^dim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    group: Arc<FiniteGroup>,
    dim: usize,
    matrices: Vec<RationalMatrix>,
}

impl Representation {
    /// Validates `rho(e) = I` and `rho(gh) = rho(g) rho(h)` for every pair.
    pub fn new(group: Arc<FiniteGroup>, dim: usize, matrices: Vec<RationalMatrix>) -> Result<Self> {
        if matrices.len() != group.order() {
            return Err(Error::InvalidRepresentation(format!(
                "{} matrices for a group of order {}",
                matrices.len(),
                group.order()
            )));
        }
        for (g, m) in matrices.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::InvalidRepresentation(format!(
                    "matrix for {} is {}x{}, expected {dim}x{dim}",
                    group.name(g),
                    m.rows(),
                    m.cols()
                )));
            }
        }
        if !matrices[group.identity()].is_identity() {
            return Err(Error::InvalidRepresentation(
                "identity element does not act as the identity".into(),
            ));
        }
        for g in group.elements() {
            for h in group.elements() {
                if matrices[group.mul(g, h)] != &matrices[g] * &matrices[h] {
                    return Err(Error::InvalidRepresentation(format!(
                        "rho({}*{}) != rho({}) rho({})",
                        group.name(g),
                        group.name(h),
                        group.name(g),
                        group.name(h)
                    )));
                }
            }
        }
        Ok(Representation { group, dim, matrices })
    }

    /// For matrices produced by restricting or inducing a validated action.
    pub(crate) fn new_unchecked(group: Arc<FiniteGroup>, dim: usize, matrices: Vec<RationalMatrix>) -> Self {
        debug_assert_eq!(matrices.len(), group.order());
        Representation { group, dim, matrices }
    }

    pub fn trivial(group: Arc<FiniteGroup>, dim: usize) -> Self {
        let matrices = vec![RationalMatrix::identity(dim); group.order()];
        Representation { group, dim, matrices }
    }

    /// Left regular representation on Q[W] with basis the group elements.
    pub fn regular(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        let matrices = group
            .elements()
            .map(|g| {
                let mut m = RationalMatrix::zeros(n, n);
                for h in 0..n {
                    m.set(group.mul(g, h), h, rational::one());
                }
                m
            })
            .collect();
        Representation {
            group,
            dim: n,
            matrices,
        }
    }

    /// One-dimensional representation from a homomorphism to {±1}.
    pub fn character(group: Arc<FiniteGroup>, signs: &[i64]) -> Result<Self> {
        let matrices = signs.iter().map(|&s| RationalMatrix::from_i64(&[&[s]])).collect();
        Self::new(group, 1, matrices)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &RationalMatrix {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[RationalMatrix] {
        &self.matrices
    }

    pub fn direct_sum(&self, other: &Representation) -> Representation {
        let dim = self.dim + other.dim;
        let matrices = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(a, b)| {
                let mut m = RationalMatrix::zeros(dim, dim);
                m.set_block(0, 0, a);
                m.set_block(self.dim, self.dim, b);
                m
            })
            .collect();
        Representation {
            group: self.group.clone(),
            dim,
            matrices,
        }
    }

    /// Tensor product with basis `e_i ⊗ f_j` ordered by `i` then `j`.
    pub fn tensor(&self, other: &Representation) -> Representation {
        let matrices = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(a, b)| kronecker(a, b))
            .collect();
        Representation {
            group: self.group.clone(),
            dim: self.dim * other.dim,
            matrices,
        }
    }

    /// Dual representation `g -> rho(g^{-1})^T`.
    pub fn dual(&self) -> Representation {
        let matrices = self
            .group
            .elements()
            .map(|g| self.matrices[self.group.inverse(g)].transpose())
            .collect();
        Representation {
            group: self.group.clone(),
            dim: self.dim,
            matrices,
        }
    }

    /// Restriction to the trivial group.
    pub fn forget(&self) -> Representation {
        Representation::trivial(Arc::new(FiniteGroup::trivial()), self.dim)
    }
}

pub fn kronecker(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    m.set(i * b.rows() + k, j * b.cols() + l, x * b.get(k, l));
                }
            }
        }
    }
    m
}

/// `(1/|W|) Σ_w rho(w)`, the projection onto the invariants.
pub fn averaging_idempotent(rho: &Representation) -> RationalMatrix {
    let mut sum = RationalMatrix::zeros(rho.dim, rho.dim);
    for m in &rho.matrices {
        sum = &sum + m;
    }
    sum.scale(&rational::frac(1, rho.group.order() as i64))
}

pub fn invariants(rho: &Representation) -> Subspace {
    averaging_idempotent(rho).column_space()
}

/// Averages an arbitrary linear map `f: source -> target` into an equivariant
/// one: `(1/|W|) Σ_w rho_t(w) f rho_s(w^{-1})`.
pub fn average_map(source: &Representation, target: &Representation, f: &RationalMatrix) -> RationalMatrix {
    let group = source.group();
    let mut sum = RationalMatrix::zeros(target.dim, source.dim);
    for w in group.elements() {
        let term = &(target.matrix(w) * f) * source.matrix(group.inverse(w));
        sum = &sum + &term;
    }
    sum.scale(&rational::frac(1, group.order() as i64))
}

pub fn is_equivariant(source: &Representation, target: &Representation, f: &RationalMatrix) -> bool {
    source
        .group()
        .elements()
        .all(|w| (f * source.matrix(w)) == (target.matrix(w) * f))
}

/// Equivariant section of an equivariant surjection `p: source -> target`.
///
/// Starts from the particular-solution preimage of each target basis vector
/// (free variables zero) and averages it over the group. The result `s`
/// satisfies `p s = id` and commutes with the actions.
pub fn maschke_split(source: &Representation, target: &Representation, p: &RationalMatrix) -> Result<RationalMatrix> {
    if p.rows() != target.dim || p.cols() != source.dim {
        return Err(Error::DimensionMismatch(format!(
            "map is {}x{}, representations have dimensions {} -> {}",
            p.rows(),
            p.cols(),
            source.dim,
            target.dim
        )));
    }
    if source.group() != target.group() {
        return Err(Error::InvalidRepresentation(
            "representations of different groups".into(),
        ));
    }
    if !is_equivariant(source, target, p) {
        return Err(Error::NotEquivariant(
            "projection does not commute with the group action".into(),
        ));
    }
    let rank = p.rank();
    if rank != target.dim {
        return Err(Error::NotSurjective {
            rank,
            target: target.dim,
        });
    }
    let naive = p
        .solve_matrix(&RationalMatrix::identity(target.dim))?
        .ok_or_else(|| Error::Invariant("surjective map without preimages".into()))?;
    let s = average_map(target, source, &naive);
    debug_assert!((p * &s).is_identity());
    Ok(s)
}

/// Basis of `Hom_W(a, b)`: all `X` with `X a(w) = b(w) X`.
pub fn intertwiners(a: &Representation, b: &Representation) -> Vec<RationalMatrix> {
    let (n, m) = (a.dim, b.dim);
    // Unknown X (m x n) flattened row-major; one block of equations per element.
    let unknowns = m * n;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for w in a.group().elements() {
        let aw = a.matrix(w);
        let bw = b.matrix(w);
        for i in 0..m {
            for j in 0..n {
                // (X a)_{ij} - (b X)_{ij} = Σ_k X_{ik} a_{kj} - Σ_k b_{ik} X_{kj}
                let mut row = vec![Rational::zero(); unknowns];
                for k in 0..n {
                    row[i * n + k] += aw.get(k, j);
                }
                for k in 0..m {
                    row[k * n + j] -= bw.get(i, k);
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let system = RationalMatrix::from_rows(rows, unknowns).expect("consistent row lengths");
    system
        .kernel_basis()
        .basis()
        .iter()
        .map(|v| RationalMatrix::from_rows(v.chunks(n.max(1)).map(|c| c.to_vec()).take(m).collect(), n).unwrap())
        .collect()
}

/// An explicit equivariant isomorphism `a -> b`, if the representations are
/// isomorphic.
///
/// Isomorphism is decided by intertwiner dimensions: over Q, a ≅ b iff
/// dim Hom(a,a) = dim Hom(a,b) = dim Hom(b,b) (semisimplicity). A witness is
/// then found among integer combinations of the intertwiner basis.
pub fn equivariant_isomorphism(a: &Representation, b: &Representation) -> Option<RationalMatrix> {
    if a.dim != b.dim || a.group() != b.group() {
        return None;
    }
    if a.dim == 0 {
        return Some(RationalMatrix::zeros(0, 0));
    }
    let ab = intertwiners(a, b);
    let aa = intertwiners(a, a).len();
    let bb = intertwiners(b, b).len();
    if ab.len() != aa || aa != bb {
        return None;
    }
    // det of a generic combination is a nonzero polynomial of degree <= dim,
    // so one of dim*len+1 Vandermonde-style points avoids its zero set.
    let attempts = a.dim * ab.len() + 1;
    for k in 0..attempts {
        let base = rational::int(k as i64 + 1);
        let mut coeff = rational::one();
        let mut x = RationalMatrix::zeros(b.dim, a.dim);
        for basis in &ab {
            x = &x + &basis.scale(&coeff);
            coeff = &coeff * &base;
        }
        if x.determinant().is_some_and(|d| !d.is_zero()) {
            return Some(x);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn z2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    fn swap_rep() -> Representation {
        let g = z2();
        Representation::new(
            g,
            2,
            vec![
                RationalMatrix::identity(2),
                RationalMatrix::from_i64(&[&[0, 1], &[1, 0]]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn group_tables() {
        assert_eq!(FiniteGroup::cyclic(2).order(), 2);
        assert_eq!(FiniteGroup::klein_four().order(), 4);
        let s3 = FiniteGroup::symmetric3();
        assert_eq!(s3.order(), 6);
        let t12 = s3.element("t12").unwrap();
        let t13 = s3.element("t13").unwrap();
        assert_ne!(s3.mul(t12, t13), s3.mul(t13, t12));

        let names = vec!["e".to_string(), "a".to_string()];
        let err = FiniteGroup::from_table(names, vec![vec![0, 1], vec![1, 1]]).unwrap_err();
        assert!(err.to_string().contains("cancellation"), "{err}");
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // A Latin square with identity that is not associative (order 5 loop).
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let names = (0..5).map(|i| format!("x{i}")).collect();
        let err = FiniteGroup::from_table(names, t).unwrap_err();
        assert!(err.to_string().contains("associativity"), "{err}");
    }

    #[test]
    fn averaging_examples() {
        let e = averaging_idempotent(&swap_rep());
        assert_eq!(
            e,
            RationalMatrix::from_rows(vec![vec![frac(1, 2), frac(1, 2)], vec![frac(1, 2), frac(1, 2)]], 2).unwrap()
        );
        let sign = Representation::character(z2(), &[1, -1]).unwrap();
        assert!(averaging_idempotent(&sign).is_zero());
        let triv = Representation::trivial(z2(), 3);
        assert!(averaging_idempotent(&triv).is_identity());
    }

    #[test]
    fn invariants_examples() {
        let inv = invariants(&swap_rep());
        assert_eq!(inv.dim(), 1);
        assert!(inv.contains(&[int(1), int(1)]));
        assert_eq!(invariants(&Representation::character(z2(), &[1, -1]).unwrap()).dim(), 0);
        assert_eq!(invariants(&Representation::regular(z2())).dim(), 1);
    }

    #[test]
    fn maschke_examples() {
        let triv = Representation::trivial(z2(), 1);
        let p = RationalMatrix::from_i64(&[&[1, 1]]);
        let s = maschke_split(&swap_rep(), &triv, &p).unwrap();
        assert_eq!(
            s,
            RationalMatrix::from_rows(vec![vec![frac(1, 2)], vec![frac(1, 2)]], 1).unwrap()
        );

        let rep = swap_rep();
        let s = maschke_split(&rep, &rep, &RationalMatrix::identity(2)).unwrap();
        assert!(s.is_identity());

        // Oracle: check the defining identities exhaustively over both elements.
        let reg = Representation::regular(z2());
        let sign = Representation::character(z2(), &[1, -1]).unwrap();
        let p = RationalMatrix::from_i64(&[&[1, -1]]);
        let s = maschke_split(&reg, &sign, &p).unwrap();
        assert!((&p * &s).is_identity());
        for w in 0..2 {
            assert_eq!(reg.matrix(w) * &s, &s * sign.matrix(w));
        }
        assert_eq!(
            s,
            RationalMatrix::from_rows(vec![vec![frac(1, 2)], vec![frac(-1, 2)]], 1).unwrap()
        );
    }

    #[test]
    fn maschke_errors() {
        let triv = Representation::trivial(z2(), 1);
        let sign = Representation::character(z2(), &[1, -1]).unwrap();
        let p = RationalMatrix::from_i64(&[&[1]]);
        assert!(matches!(maschke_split(&triv, &sign, &p), Err(Error::NotEquivariant(_))));
        let zero = RationalMatrix::from_i64(&[&[0, 0]]);
        assert!(matches!(
            maschke_split(&swap_rep(), &triv, &zero),
            Err(Error::NotSurjective { .. })
        ));
    }

    #[test]
    fn isomorphism_detection() {
        let reg = Representation::regular(z2());
        let sign = Representation::character(z2(), &[1, -1]).unwrap();
        let triv = Representation::trivial(z2(), 1);
        let split = triv.direct_sum(&sign);
        let x = equivariant_isomorphism(&split, &reg).unwrap();
        assert!(is_equivariant(&split, &reg, &x));
        assert!(x.inverse().is_some());
        assert!(equivariant_isomorphism(&Representation::trivial(z2(), 2), &reg).is_none());
        assert!(equivariant_isomorphism(&swap_rep(), &reg).is_some());
    }
}
