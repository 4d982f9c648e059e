//! Truncated commutative DG algebras with a W-action, and the equivariant
//! formality map `Symm(V) -> C` for algebras with polynomial cohomology.
//!
//! Degrees are homological: the algebra lives in degrees `0, -1, ..., -depth`
//! and `d` lowers degree by one. Homology in degree n needs `d` out of
//! degree n, so it is available for `n >= -cutoff` with `cutoff = depth - 1`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::group::{equivariant_isomorphism, kronecker, maschke_split, FiniteGroup, Representation};
use crate::linalg::{restrict_map, Quotient, RationalMatrix, Subspace};
use crate::parse::{parse_expr, ExprContext};
use crate::rational::Rational;
use crate::ring::{GeneratorSpace, Monomial, TwistedGroupRing};

#[derive(Clone, Debug, PartialEq)]
pub struct EquivariantDGA {
    group: Arc<FiniteGroup>,
    /// Basis names per degree, indexed by `k = -degree`.
    names: Vec<Vec<String>>,
    /// `differentials[k]`: `C_{-k} -> C_{-k-1}`.
    differentials: Vec<RationalMatrix>,
    /// `(k1, k2)` -> matrix `C_{-k1} ⊗ C_{-k2} -> C_{-k1-k2}`, column `i·dim_{k2} + j`.
    products: BTreeMap<(usize, usize), RationalMatrix>,
    action: Vec<Representation>,
    unit: Vec<Rational>,
}

fn index_of(n: i64) -> usize {
    (-n) as usize
}

impl EquivariantDGA {
    /// Validates shapes, `d² = 0`, equivariance of `d` and of the product,
    /// the unit, graded commutativity, associativity and the Leibniz rule on
    /// every basis pair or triple whose result lies in the stored range.
    pub fn new(
        group: Arc<FiniteGroup>,
        names: Vec<Vec<String>>,
        differentials: Vec<RationalMatrix>,
        products: BTreeMap<(usize, usize), RationalMatrix>,
        action: Vec<Representation>,
        unit: Vec<Rational>,
    ) -> Result<Self> {
        let dga = EquivariantDGA {
            group,
            names,
            differentials,
            products,
            action,
            unit,
        };
        dga.validate()?;
        Ok(dga)
    }

    fn bad(detail: impl Into<String>) -> Error {
        Error::InvalidDga(detail.into())
    }

    pub fn validate(&self) -> Result<()> {
        let depth = self
            .names
            .len()
            .checked_sub(1)
            .ok_or_else(|| Self::bad("no degree pieces"))?;
        if depth == 0 {
            return Err(Self::bad("a DGA needs at least degrees 0 and -1"));
        }
        let dims: Vec<usize> = self.names.iter().map(Vec::len).collect();
        if self.differentials.len() != depth {
            return Err(Self::bad(format!(
                "expected {depth} differentials, got {}",
                self.differentials.len()
            )));
        }
        for (k, d) in self.differentials.iter().enumerate() {
            if d.rows() != dims[k + 1] || d.cols() != dims[k] {
                return Err(Self::bad(format!(
                    "differential out of degree {} has the wrong shape",
                    -(k as i64)
                )));
            }
        }
        if self.action.len() != depth + 1 {
            return Err(Self::bad("one representation per degree is required"));
        }
        for (k, rho) in self.action.iter().enumerate() {
            if rho.dim() != dims[k] || **rho.group() != *self.group {
                return Err(Self::bad(format!(
                    "action in degree {} does not match the basis",
                    -(k as i64)
                )));
            }
        }
        if self.unit.len() != dims[0] {
            return Err(Self::bad("unit has the wrong length"));
        }
        for k1 in 0..=depth {
            for k2 in 0..=depth - k1 {
                let m = self.products.get(&(k1, k2)).ok_or_else(|| {
                    Self::bad(format!(
                        "missing product table for degrees {} and {}",
                        -(k1 as i64),
                        -(k2 as i64)
                    ))
                })?;
                if m.rows() != dims[k1 + k2] || m.cols() != dims[k1] * dims[k2] {
                    return Err(Self::bad(format!(
                        "product table for degrees {} and {} has the wrong shape",
                        -(k1 as i64),
                        -(k2 as i64)
                    )));
                }
            }
        }
        if self.products.keys().any(|&(a, b)| a + b > depth) {
            return Err(Self::bad("product table beyond the stored degrees"));
        }

        for k in 0..depth.saturating_sub(1) {
            if !(&self.differentials[k + 1] * &self.differentials[k]).is_zero() {
                return Err(Self::bad(format!("d² ≠ 0 on degree {}", -(k as i64))));
            }
        }
        for k in 0..depth {
            for w in self.group.elements() {
                let left = &self.differentials[k] * self.action[k].matrix(w);
                let right = self.action[k + 1].matrix(w) * &self.differentials[k];
                if left != right {
                    return Err(Self::bad(format!(
                        "d out of degree {} does not commute with {}",
                        -(k as i64),
                        self.group.name(w)
                    )));
                }
            }
        }
        for k in 0..=depth {
            let m = &self.products[&(0, k)];
            let u = RationalMatrix::from_columns(std::slice::from_ref(&self.unit), dims[0]);
            if !(m * &kronecker(&u, &RationalMatrix::identity(dims[k]))).is_identity() {
                return Err(Self::bad(format!(
                    "unit does not act as the identity in degree {}",
                    -(k as i64)
                )));
            }
        }
        for (&(k1, k2), m) in &self.products {
            for w in self.group.elements() {
                let left = self.action[k1 + k2].matrix(w) * m;
                let right = m * &kronecker(self.action[k1].matrix(w), self.action[k2].matrix(w));
                if left != right {
                    return Err(Self::bad(format!(
                        "product of degrees {} and {} is not equivariant",
                        -(k1 as i64),
                        -(k2 as i64)
                    )));
                }
            }
            if k1 <= k2 {
                let other = &self.products[&(k2, k1)];
                let sign = if (k1 * k2) % 2 == 1 {
                    -Rational::one()
                } else {
                    Rational::one()
                };
                for i in 0..dims[k1] {
                    for j in 0..dims[k2] {
                        let xy = m.column(i * dims[k2] + j);
                        let yx = other.column(j * dims[k1] + i);
                        if xy.iter().zip(&yx).any(|(a, b)| *a != &sign * b) {
                            return Err(Self::bad(format!(
                                "product is not graded commutative on {} and {}",
                                self.names[k1][i], self.names[k2][j]
                            )));
                        }
                    }
                }
            }
            if k1 + k2 < depth {
                // d(xy) = d(x) y + (-1)^{|x|} x d(y)
                let left = &self.differentials[k1 + k2] * m;
                let a = &self.products[&(k1 + 1, k2)]
                    * &kronecker(&self.differentials[k1], &RationalMatrix::identity(dims[k2]));
                let b = &self.products[&(k1, k2 + 1)]
                    * &kronecker(&RationalMatrix::identity(dims[k1]), &self.differentials[k2]);
                let right = if k1 % 2 == 0 { &a + &b } else { &a - &b };
                if left != right {
                    return Err(Self::bad(format!(
                        "Leibniz rule fails on degrees {} and {}",
                        -(k1 as i64),
                        -(k2 as i64)
                    )));
                }
            }
        }
        for k1 in 1..=depth {
            for k2 in 1..=depth - k1 {
                for k3 in 1..=depth - k1 - k2 {
                    let left = &self.products[&(k1 + k2, k3)]
                        * &kronecker(&self.products[&(k1, k2)], &RationalMatrix::identity(dims[k3]));
                    let right = &self.products[&(k1, k2 + k3)]
                        * &kronecker(&RationalMatrix::identity(dims[k1]), &self.products[&(k2, k3)]);
                    if left != right {
                        return Err(Self::bad(format!(
                            "product is not associative on degrees {}, {}, {}",
                            -(k1 as i64),
                            -(k2 as i64),
                            -(k3 as i64)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    /// The lowest stored degree is `-depth`.
    pub fn depth(&self) -> usize {
        self.names.len() - 1
    }

    /// Homology is available in degrees `0..=-cutoff`.
    pub fn cutoff(&self) -> usize {
        self.depth() - 1
    }

    fn check_stored(&self, n: i64, what: &str) -> Result<usize> {
        if n > 0 || -n > self.depth() as i64 {
            return Err(Error::window(
                format!("{what} in degree {n}"),
                (n, n),
                (-(self.depth() as i64), 0),
            ));
        }
        Ok(index_of(n))
    }

    fn check_homology_range(&self, n: i64, what: &str) -> Result<usize> {
        if n > 0 || -n > self.cutoff() as i64 {
            return Err(Error::window(
                format!("{what} in degree {n} needs the differential out of degree {n}"),
                (n - 1, n),
                (-(self.depth() as i64), 0),
            ));
        }
        Ok(index_of(n))
    }

    pub fn dim(&self, n: i64) -> Result<usize> {
        Ok(self.names[self.check_stored(n, "dimension")?].len())
    }

    pub fn names(&self, n: i64) -> Result<&[String]> {
        Ok(&self.names[self.check_stored(n, "basis")?])
    }

    pub fn basis_vector(&self, n: i64, name: &str) -> Option<Vec<Rational>> {
        let names = self.names(n).ok()?;
        let i = names.iter().position(|x| x == name)?;
        let mut v = vec![Rational::zero(); names.len()];
        v[i] = Rational::one();
        Some(v)
    }

    /// `d: C_n -> C_{n-1}`.
    pub fn differential(&self, n: i64) -> Result<&RationalMatrix> {
        Ok(&self.differentials[self.check_homology_range(n, "differential")?])
    }

    pub fn action(&self, n: i64) -> Result<&Representation> {
        Ok(&self.action[self.check_stored(n, "action")?])
    }

    pub fn unit(&self) -> &[Rational] {
        &self.unit
    }

    pub fn multiply(&self, n1: i64, x: &[Rational], n2: i64, y: &[Rational]) -> Result<Vec<Rational>> {
        let k1 = self.check_stored(n1, "product")?;
        let k2 = self.check_stored(n2, "product")?;
        self.check_stored(n1 + n2, "product")?;
        let m = &self.products[&(k1, k2)];
        let mut xy = Vec::with_capacity(x.len() * y.len());
        for a in x {
            for b in y {
                xy.push(a * b);
            }
        }
        Ok(m.mul_vec(&xy))
    }

    /// Kernel of `d` in degree n.
    pub fn cycles(&self, n: i64) -> Result<Subspace> {
        Ok(self.differential(n)?.kernel_basis())
    }

    /// Image of `d` from degree `n + 1`.
    pub fn boundaries(&self, n: i64) -> Result<Subspace> {
        let k = self.check_stored(n, "boundaries")?;
        if k == 0 {
            return Ok(Subspace::zero(self.names[0].len()));
        }
        Ok(self.differentials[k - 1].column_space())
    }

    pub fn homology(&self, n: i64) -> Result<DgaHomology> {
        let cycles = self.cycles(n)?;
        let boundaries = self.boundaries(n)?;
        let q = Quotient::new(&cycles, boundaries.basis())?;
        let rho = self.action(n)?;
        let dim = q.dim();
        let matrices = self
            .group
            .elements()
            .map(|w| {
                let cols: Vec<Vec<Rational>> = q
                    .representatives
                    .iter()
                    .map(|r| q.projection.mul_vec(&rho.matrix(w).mul_vec(r)))
                    .collect();
                RationalMatrix::from_columns(&cols, dim)
            })
            .collect();
        Ok(DgaHomology {
            degree: n,
            dim,
            representatives: q.representatives.clone(),
            projection: q.projection.clone(),
            action: Representation::new_unchecked(self.group.clone(), dim, matrices),
        })
    }

    /// The same algebra in a new basis of degree n: column j of `p` is the
    /// j-th new basis vector in old coordinates.
    pub fn with_basis_change(&self, n: i64, names: Vec<String>, p: &RationalMatrix) -> Result<Self> {
        let k = self.check_stored(n, "basis change")?;
        let dim = self.names[k].len();
        if p.rows() != dim || p.cols() != dim || names.len() != dim {
            return Err(Self::bad(format!(
                "basis change in degree {n} must be {dim}x{dim} with {dim} names"
            )));
        }
        let inv = p
            .inverse()
            .ok_or_else(|| Self::bad(format!("basis change in degree {n} is singular")))?;
        let change = |j: usize| -> (RationalMatrix, RationalMatrix) {
            if j == k {
                (p.clone(), inv.clone())
            } else {
                let d = self.names[j].len();
                (RationalMatrix::identity(d), RationalMatrix::identity(d))
            }
        };
        let mut out = self.clone();
        out.names[k] = names;
        for (j, d) in out.differentials.iter_mut().enumerate() {
            if j == k || j + 1 == k {
                *d = &(&change(j + 1).1 * d) * &change(j).0;
            }
        }
        for (&(k1, k2), m) in out.products.iter_mut() {
            if k1 == k || k2 == k || k1 + k2 == k {
                *m = &(&change(k1 + k2).1 * m) * &kronecker(&change(k1).0, &change(k2).0);
            }
        }
        let matrices = self.action[k].matrices().iter().map(|m| &(&inv * m) * p).collect();
        out.action[k] = Representation::new_unchecked(self.group.clone(), dim, matrices);
        if k == 0 {
            out.unit = inv.mul_vec(&self.unit);
        }
        out.validate()?;
        Ok(out)
    }
}

/// `ker d_n / im d_{n+1}` with the induced W-action.
#[derive(Clone, Debug)]
pub struct DgaHomology {
    pub degree: i64,
    pub dim: usize,
    /// Cycles whose classes form a basis.
    pub representatives: Vec<Vec<Rational>>,
    /// Sends a cycle (ambient coordinates) to its class.
    pub projection: RationalMatrix,
    pub action: Representation,
}

/// Generators of a free graded-commutative algebra: even degrees give
/// polynomial generators, odd degrees exterior ones. `differentials[i]` is
/// an expression in the generators of degree `degrees[i] - 1` (empty or "0"
/// for a cycle); `action` is the W-action on the span of the generators.
#[derive(Clone, Debug)]
pub struct FreeCdgaSpec {
    pub names: Vec<String>,
    pub degrees: Vec<i64>,
    pub differentials: Vec<String>,
    pub action: Representation,
}

type FreeElement = BTreeMap<Vec<u32>, Rational>;

struct FreeAlgebra<'a> {
    spec: &'a FreeCdgaSpec,
}

impl FreeAlgebra<'_> {
    fn nvars(&self) -> usize {
        self.spec.names.len()
    }

    fn odd(&self, i: usize) -> bool {
        self.spec.degrees[i] % 2 != 0
    }

    fn generator(&self, i: usize) -> FreeElement {
        let mut e = vec![0; self.nvars()];
        e[i] = 1;
        FreeElement::from([(e, Rational::one())])
    }

    fn degree(&self, m: &[u32]) -> i64 {
        m.iter().zip(&self.spec.degrees).map(|(&e, &d)| e as i64 * d).sum()
    }

    fn mul_monomials(&self, a: &[u32], b: &[u32]) -> Option<(bool, Vec<u32>)> {
        let mut negative = false;
        for j in 0..self.nvars() {
            if b[j] == 0 || !self.odd(j) {
                continue;
            }
            if a[j] > 0 {
                return None;
            }
            let passed = (j + 1..self.nvars()).filter(|&i| a[i] > 0 && self.odd(i)).count();
            negative ^= passed % 2 == 1;
        }
        Some((negative, a.iter().zip(b).map(|(x, y)| x + y).collect()))
    }

    fn mul(&self, a: &FreeElement, b: &FreeElement) -> FreeElement {
        let mut out = FreeElement::new();
        for (ma, ca) in a {
            for (mb, cb) in b {
                if let Some((negative, m)) = self.mul_monomials(ma, mb) {
                    let c = ca * cb;
                    let entry = out.entry(m).or_insert_with(Rational::zero);
                    if negative {
                        *entry -= c;
                    } else {
                        *entry += c;
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    fn add_into(out: &mut FreeElement, x: &FreeElement, q: &Rational) {
        for (m, c) in x {
            *out.entry(m.clone()).or_insert_with(Rational::zero) += c * q;
        }
        out.retain(|_, c| !c.is_zero());
    }

    /// Exponent vectors of degree n; exterior generators appear at most once.
    fn monomials(&self, n: i64) -> Vec<Vec<u32>> {
        fn go(alg: &FreeAlgebra, i: usize, left: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if i == alg.nvars() {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let d = -alg.spec.degrees[i];
            let max = if alg.odd(i) { 1.min(left / d) } else { left / d };
            for e in (0..=max).rev() {
                cur[i] = e as u32;
                go(alg, i + 1, left - e * d, cur, out);
            }
            cur[i] = 0;
        }
        let mut out = Vec::new();
        go(self, 0, -n, &mut vec![0; self.nvars()], &mut out);
        out
    }

    fn format(&self, m: &[u32]) -> String {
        let parts: Vec<String> = m
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    self.spec.names[i].clone()
                } else {
                    format!("{}^{e}", self.spec.names[i])
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// `m = g · m'` with g the first generator present.
    fn split_first(m: &[u32]) -> Option<(usize, Vec<u32>)> {
        let i = m.iter().position(|&e| e > 0)?;
        let mut rest = m.to_vec();
        rest[i] -= 1;
        Some((i, rest))
    }

    fn differential(&self, m: &[u32], gens: &[FreeElement], memo: &mut HashMap<Vec<u32>, FreeElement>) -> FreeElement {
        if let Some(x) = memo.get(m) {
            return x.clone();
        }
        let Some((i, rest)) = Self::split_first(m) else {
            return FreeElement::new();
        };
        let rest_el = FreeElement::from([(rest.clone(), Rational::one())]);
        let mut out = self.mul(&gens[i], &rest_el);
        let d_rest = self.differential(&rest, gens, memo);
        let sign = if self.odd(i) { -Rational::one() } else { Rational::one() };
        let term = self.mul(&self.generator(i), &d_rest);
        Self::add_into(&mut out, &term, &sign);
        memo.insert(m.to_vec(), out.clone());
        out
    }

    fn act(&self, w: usize, m: &[u32], memo: &mut HashMap<(usize, Vec<u32>), FreeElement>) -> FreeElement {
        if let Some(x) = memo.get(&(w, m.to_vec())) {
            return x.clone();
        }
        let Some((i, rest)) = Self::split_first(m) else {
            return FreeElement::from([(m.to_vec(), Rational::one())]);
        };
        let rho = self.spec.action.matrix(w);
        let mut wg = FreeElement::new();
        for h in 0..self.nvars() {
            let c = rho.get(h, i);
            if !c.is_zero() {
                Self::add_into(&mut wg, &self.generator(h), c);
            }
        }
        let out = self.mul(&wg, &self.act(w, &rest, memo));
        memo.insert((w, m.to_vec()), out.clone());
        out
    }
}

impl ExprContext for FreeAlgebra<'_> {
    type Value = FreeElement;

    fn scalar(&self, q: Rational) -> FreeElement {
        let mut out = FreeElement::new();
        if !q.is_zero() {
            out.insert(vec![0; self.nvars()], q);
        }
        out
    }

    fn atom(&self, name: &str) -> Result<FreeElement> {
        let i = self
            .spec
            .names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Parse(format!("unknown generator {name:?}")))?;
        Ok(self.generator(i))
    }

    fn add(&self, a: FreeElement, b: FreeElement) -> Result<FreeElement> {
        let mut out = a;
        Self::add_into(&mut out, &b, &Rational::one());
        Ok(out)
    }

    fn mul(&self, a: FreeElement, b: FreeElement) -> Result<FreeElement> {
        Ok(FreeAlgebra::mul(self, &a, &b))
    }

    fn mul_scalar(&self, a: FreeElement, q: Rational) -> FreeElement {
        let mut out = FreeElement::new();
        Self::add_into(&mut out, &a, &q);
        out
    }
}

/// The free graded-commutative DGA on `spec`, with homology available down
/// to degree `-cutoff`.
pub fn free_cdga(spec: &FreeCdgaSpec, cutoff: usize) -> Result<EquivariantDGA> {
    let nv = spec.names.len();
    if spec.degrees.len() != nv || spec.differentials.len() != nv || spec.action.dim() != nv {
        return Err(Error::InvalidDga(
            "generator names, degrees, differentials and action disagree in length".into(),
        ));
    }
    if let Some(i) = spec.degrees.iter().position(|&d| d >= 0) {
        return Err(Error::InvalidDga(format!(
            "generator {} has degree {}; generators must have negative degree",
            spec.names[i], spec.degrees[i]
        )));
    }
    for (i, name) in spec.names.iter().enumerate() {
        if spec.names[..i].contains(name) {
            return Err(Error::InvalidDga(format!("duplicate generator {name:?}")));
        }
    }
    let alg = FreeAlgebra { spec };
    let mut gens_d = Vec::with_capacity(nv);
    for (i, text) in spec.differentials.iter().enumerate() {
        let el = if text.trim().is_empty() {
            FreeElement::new()
        } else {
            parse_expr(&alg, text)?
        };
        if let Some(m) = el.keys().find(|m| alg.degree(m) != spec.degrees[i] - 1) {
            return Err(Error::InvalidDga(format!(
                "d({}) has a term {} of degree {}, expected {}",
                spec.names[i],
                alg.format(m),
                alg.degree(m),
                spec.degrees[i] - 1
            )));
        }
        gens_d.push(el);
    }
    let depth = cutoff + 1;
    let bases: Vec<Vec<Vec<u32>>> = (0..=depth).map(|k| alg.monomials(-(k as i64))).collect();
    let index: Vec<HashMap<Vec<u32>, usize>> = bases
        .iter()
        .map(|b| b.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect())
        .collect();
    let to_vector = |k: usize, x: &FreeElement| -> Vec<Rational> {
        let mut v = vec![Rational::zero(); bases[k].len()];
        for (m, c) in x {
            v[index[k][m]] += c;
        }
        v
    };
    let names: Vec<Vec<String>> = bases
        .iter()
        .map(|b| b.iter().map(|m| alg.format(m)).collect())
        .collect();

    let mut memo = HashMap::new();
    let differentials = (0..depth)
        .map(|k| {
            let cols: Vec<Vec<Rational>> = bases[k]
                .iter()
                .map(|m| to_vector(k + 1, &alg.differential(m, &gens_d, &mut memo)))
                .collect();
            RationalMatrix::from_columns(&cols, bases[k + 1].len())
        })
        .collect();

    let mut products = BTreeMap::new();
    for k1 in 0..=depth {
        for k2 in 0..=depth - k1 {
            let mut cols = Vec::with_capacity(bases[k1].len() * bases[k2].len());
            for a in &bases[k1] {
                for b in &bases[k2] {
                    let mut v = vec![Rational::zero(); bases[k1 + k2].len()];
                    if let Some((negative, m)) = alg.mul_monomials(a, b) {
                        v[index[k1 + k2][&m]] = if negative { -Rational::one() } else { Rational::one() };
                    }
                    cols.push(v);
                }
            }
            products.insert((k1, k2), RationalMatrix::from_columns(&cols, bases[k1 + k2].len()));
        }
    }

    let group = spec.action.group().clone();
    let mut act_memo = HashMap::new();
    let action = (0..=depth)
        .map(|k| {
            let matrices = group
                .elements()
                .map(|w| {
                    let cols: Vec<Vec<Rational>> = bases[k]
                        .iter()
                        .map(|m| to_vector(k, &alg.act(w, m, &mut act_memo)))
                        .collect();
                    RationalMatrix::from_columns(&cols, bases[k].len())
                })
                .collect();
            Representation::new(group.clone(), bases[k].len(), matrices)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut unit = vec![Rational::zero(); bases[0].len()];
    unit[0] = Rational::one();
    EquivariantDGA::new(group, names, differentials, products, action, unit)
}

/// The target generators V of the formality map: even negative degrees
/// with a degree-preserving W-action.
#[derive(Clone, Debug)]
pub struct IndecomposableData {
    space: GeneratorSpace,
}

impl IndecomposableData {
    pub fn new(names: Vec<String>, degrees: Vec<i64>, action: Representation) -> Result<Self> {
        if let Some(i) = degrees.iter().position(|&d| d == 0) {
            return Err(Error::Formality {
                degree: 0,
                detail: format!(
                    "generator {} has degree 0; the construction starts from the zero map in degree 0 and has no recipe for a degree-0 part",
                    names.get(i).map_or("?", String::as_str)
                ),
            });
        }
        Ok(IndecomposableData {
            space: GeneratorSpace::new(names, degrees, action)?,
        })
    }

    pub fn from_space(space: GeneratorSpace) -> Self {
        IndecomposableData { space }
    }

    pub fn space(&self) -> &GeneratorSpace {
        &self.space
    }

    pub fn max_codegree(&self) -> i64 {
        self.space.degrees().iter().map(|d| -d).max().unwrap_or(0)
    }

    fn degree_part(&self, n: i64) -> (Vec<usize>, Representation) {
        let idx: Vec<usize> = (0..self.space.len())
            .filter(|&i| self.space.degrees()[i] == n)
            .collect();
        let rho = self.space.action();
        let matrices = rho
            .matrices()
            .iter()
            .map(|m| m.select_rows(&idx).select_columns(&idx))
            .collect();
        (
            idx.clone(),
            Representation::new_unchecked(rho.group().clone(), idx.len(), matrices),
        )
    }
}

/// A cycle of C for every generator of V.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalityMap {
    pub images: Vec<Vec<Rational>>,
    v: GeneratorSpace,
}

impl FormalityMap {
    pub fn new(v: &IndecomposableData, images: Vec<Vec<Rational>>) -> Self {
        FormalityMap {
            images,
            v: v.space.clone(),
        }
    }

    pub fn generators(&self) -> &GeneratorSpace {
        &self.v
    }

    pub fn image(&self, name: &str) -> Option<&[Rational]> {
        let i = self.v.names().iter().position(|n| n == name)?;
        Some(&self.images[i])
    }

    /// Whether every image is a cycle.
    pub fn lands_in_cycles(&self, c: &EquivariantDGA) -> Result<bool> {
        for (i, v) in self.images.iter().enumerate() {
            if !c
                .differential(self.v.degrees()[i])?
                .mul_vec(v)
                .iter()
                .all(Zero::is_zero)
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether `φ(w·v) = w·φ(v)` for every generator.
    pub fn is_equivariant(&self, c: &EquivariantDGA) -> Result<bool> {
        let rho = self.v.action();
        for w in rho.group().elements() {
            for (j, img) in self.images.iter().enumerate() {
                let n = self.v.degrees()[j];
                let left = c.action(n)?.matrix(w).mul_vec(img);
                let mut right = vec![Rational::zero(); left.len()];
                for (i, other) in self.images.iter().enumerate() {
                    let q = rho.matrix(w).get(i, j);
                    if !q.is_zero() {
                        for (r, x) in right.iter_mut().zip(other) {
                            *r += q * x;
                        }
                    }
                }
                if left != right {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The induced algebra map `Symm(V)_n -> C_n` for `n` in `0..=-cutoff`,
    /// columns indexed by the monomials of the polynomial ring on V.
    pub fn assemble(&self, c: &EquivariantDGA, cutoff: usize) -> Result<Vec<(i64, RationalMatrix)>> {
        let symm = TwistedGroupRing::new(self.v.clone())?;
        let mut memo: HashMap<Monomial, Vec<Rational>> = HashMap::new();
        let mut out = Vec::with_capacity(cutoff + 1);
        for k in 0..=cutoff {
            let n = -(k as i64);
            let dim = c.dim(n)?;
            let mut cols = Vec::new();
            for m in symm.monomials(n).iter() {
                cols.push(self.image_of_monomial(c, &symm, m, &mut memo)?);
            }
            out.push((n, RationalMatrix::from_columns(&cols, dim)));
        }
        Ok(out)
    }

    fn image_of_monomial(
        &self,
        c: &EquivariantDGA,
        symm: &TwistedGroupRing,
        m: &Monomial,
        memo: &mut HashMap<Monomial, Vec<Rational>>,
    ) -> Result<Vec<Rational>> {
        if let Some(v) = memo.get(m) {
            return Ok(v.clone());
        }
        let factors = m.factors();
        let v = match factors.first() {
            None => c.unit().to_vec(),
            Some(&i) => {
                let rest = m.div_var(i).expect("factor divides");
                let tail = self.image_of_monomial(c, symm, &rest, memo)?;
                c.multiply(self.v.degrees()[i], &self.images[i], symm.monomial_degree(&rest), &tail)?
            }
        };
        memo.insert(m.clone(), v.clone());
        Ok(v)
    }
}

/// Classes in `H_n` that are products of classes of degrees strictly
/// between n and 0, in homology coordinates.
fn decomposables(
    c: &EquivariantDGA,
    n: i64,
    homologies: &BTreeMap<i64, DgaHomology>,
    target: &DgaHomology,
) -> Result<Vec<Vec<Rational>>> {
    let mut out = Vec::new();
    for a in (n + 1)..0 {
        let b = n - a;
        if b > a {
            continue;
        }
        let (ha, hb) = (&homologies[&a], &homologies[&b]);
        for x in &ha.representatives {
            for y in &hb.representatives {
                out.push(target.projection.mul_vec(&c.multiply(a, x, b, y)?));
            }
        }
    }
    Ok(out)
}

/// Assigns to each generator of V a cycle of C, degree by degree in
/// increasing codegree: the surjection `Z_n -> H_n -> QH_n ≅ V_n` is split
/// equivariantly by averaging.
pub fn build_formality_map(c: &EquivariantDGA, v: &IndecomposableData) -> Result<FormalityMap> {
    if **v.space.action().group() != **c.group() {
        return Err(Error::Formality {
            degree: 0,
            detail: "V and the algebra carry actions of different groups".into(),
        });
    }
    let top = v.max_codegree();
    if top > c.cutoff() as i64 {
        return Err(Error::window(
            format!("V has generators in degree {}, beyond the algebra's cutoff", -top),
            (-top, 0),
            (-(c.cutoff() as i64), 0),
        ));
    }
    let mut homologies = BTreeMap::new();
    for k in 1..=top {
        homologies.insert(-k, c.homology(-k)?);
    }
    let mut images = vec![Vec::new(); v.space.len()];
    let mut degrees: Vec<i64> = v.space.degrees().to_vec();
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    degrees.dedup();
    for n in degrees {
        let h = &homologies[&n];
        let dec = decomposables(c, n, &homologies, h)?;
        let q = Quotient::new(&Subspace::full(h.dim), &dec)?;
        let q_matrices = c
            .group()
            .elements()
            .map(|w| {
                let cols: Vec<Vec<Rational>> = q
                    .representatives
                    .iter()
                    .map(|r| q.projection.mul_vec(&h.action.matrix(w).mul_vec(r)))
                    .collect();
                RationalMatrix::from_columns(&cols, q.dim())
            })
            .collect();
        let q_rep = Representation::new_unchecked(c.group().clone(), q.dim(), q_matrices);
        let (idx, v_rep) = v.degree_part(n);
        if q.dim() != idx.len() {
            return Err(Error::Formality {
                degree: n,
                detail: format!(
                    "homology is not polynomial on V: {} indecomposable classes, {} generators of V",
                    q.dim(),
                    idx.len()
                ),
            });
        }
        let iso = equivariant_isomorphism(&q_rep, &v_rep).ok_or_else(|| Error::Formality {
            degree: n,
            detail: "indecomposable homology and V are different representations".into(),
        })?;
        let z = c.cycles(n)?;
        let z_basis = z.basis_matrix();
        let rho = c.action(n)?;
        let z_matrices = c
            .group()
            .elements()
            .map(|w| restrict_map(rho.matrix(w), &z, &z))
            .collect::<Result<Vec<_>>>()?;
        let z_rep = Representation::new_unchecked(c.group().clone(), z.dim(), z_matrices);
        let p = &(&(&iso * &q.projection) * &h.projection) * &z_basis;
        let s = maschke_split(&z_rep, &v_rep, &p).map_err(|e| match e {
            Error::NotSurjective { rank, target } => Error::Formality {
                degree: n,
                detail: format!("cycles reach only {rank} of {target} generators; decomposables exhaust the homology"),
            },
            other => other,
        })?;
        let section = &z_basis * &s;
        for (j, &i) in idx.iter().enumerate() {
            images[i] = section.column(j);
        }
    }
    Ok(FormalityMap::new(v, images))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeVerdict {
    pub degree: i64,
    pub symmetric_dim: usize,
    pub homology_dim: usize,
    pub rank: usize,
    pub equivariant: bool,
    pub iso: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiIsoReport {
    pub degrees: Vec<DegreeVerdict>,
}

impl QuasiIsoReport {
    pub fn all_pass(&self) -> bool {
        self.degrees.iter().all(|d| d.iso && d.equivariant)
    }

    pub fn failures(&self) -> Vec<i64> {
        self.degrees
            .iter()
            .filter(|d| !(d.iso && d.equivariant))
            .map(|d| d.degree)
            .collect()
    }

    pub fn summary(&self) -> String {
        if self.all_pass() {
            "quasi-iso: all degrees pass".into()
        } else {
            let list: Vec<String> = self.failures().iter().map(i64::to_string).collect();
            format!("quasi-iso: fails in degrees {}", list.join(", "))
        }
    }
}

/// Checks degreewise that `Symm(V)_n -> H_n(C)` is an equivariant
/// isomorphism for n in `0..=-cutoff`. The cutoff must reach twice the top
/// codegree of V so that products of generators are covered.
pub fn verify_quasi_iso(c: &EquivariantDGA, map: &FormalityMap, cutoff: usize) -> Result<QuasiIsoReport> {
    let top = map.v.degrees().iter().map(|d| -d).max().unwrap_or(0);
    if (cutoff as i64) < 2 * top {
        return Err(Error::window(
            format!(
                "verification to degree {} does not reach products of the top generators",
                -(cutoff as i64)
            ),
            (-2 * top, 0),
            (-(cutoff as i64), 0),
        ));
    }
    if cutoff > c.cutoff() {
        return Err(Error::window(
            "verification beyond the algebra's cutoff",
            (-(cutoff as i64), 0),
            (-(c.cutoff() as i64), 0),
        ));
    }
    if !map.lands_in_cycles(c)? {
        return Err(Error::Formality {
            degree: 0,
            detail: "assignment sends a generator outside the cycles".into(),
        });
    }
    let symm = TwistedGroupRing::new(map.v.clone())?;
    let mut degrees = Vec::with_capacity(cutoff + 1);
    for (n, f) in map.assemble(c, cutoff)? {
        let h = c.homology(n)?;
        let g = &h.projection * &f;
        let rank = g.rank();
        let rho = c.action(n)?;
        let equivariant = c.group().elements().all(|w| {
            let sym = symm.action_matrix(w, n);
            rho.matrix(w) * &f == &f * &*sym
        });
        let symmetric_dim = f.cols();
        degrees.push(DegreeVerdict {
            degree: n,
            symmetric_dim,
            homology_dim: h.dim,
            rank,
            equivariant,
            iso: symmetric_dim == h.dim && rank == h.dim,
        });
    }
    Ok(QuasiIsoReport { degrees })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn z2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    fn c1(cutoff: usize) -> EquivariantDGA {
        let g = z2();
        let plus = Representation::trivial(g.clone(), 1);
        let minus = Representation::character(g, &[1, -1]).unwrap();
        let action = plus.direct_sum(&minus).direct_sum(&plus);
        let spec = FreeCdgaSpec {
            names: vec!["a".into(), "c".into(), "b".into()],
            degrees: vec![-1, -2, -2],
            differentials: vec!["b".into(), String::new(), String::new()],
            action,
        };
        free_cdga(&spec, cutoff).unwrap()
    }

    #[test]
    fn free_algebra_basics() {
        let c = c1(6);
        assert_eq!(c.names(-2).unwrap(), &["c".to_string(), "b".to_string()]);
        assert_eq!(c.names(-3).unwrap(), &["a*c".to_string(), "a*b".to_string()]);
        assert_eq!(c.cycles(-1).unwrap().dim(), 0);
        assert_eq!(c.cycles(0).unwrap().dim(), 1);
        for k in 0..=6 {
            let h = c.homology(-k).unwrap();
            assert_eq!(h.dim, usize::from(k % 2 == 0), "degree {}", -k);
        }
    }

    #[test]
    fn c1_formality() {
        let c = c1(8);
        let p = RationalMatrix::from_i64(&[&[1, 0], &[1, 1]]);
        let c = c.with_basis_change(-2, vec!["u".into(), "b".into()], &p).unwrap();
        let v = IndecomposableData::new(
            vec!["x".into()],
            vec![-2],
            Representation::character(z2(), &[1, -1]).unwrap(),
        )
        .unwrap();
        let map = build_formality_map(&c, &v).unwrap();
        // c = u - b in the new basis
        assert_eq!(map.images[0], vec![int(1), int(-1)]);
        assert!(map.is_equivariant(&c).unwrap());
        let report = verify_quasi_iso(&c, &map, 8).unwrap();
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn zero_assignment_fails_in_its_degree() {
        let c = c1(4);
        let v = IndecomposableData::new(
            vec!["x".into()],
            vec![-2],
            Representation::character(z2(), &[1, -1]).unwrap(),
        )
        .unwrap();
        let map = FormalityMap::new(&v, vec![vec![int(0), int(0)]]);
        let report = verify_quasi_iso(&c, &map, 4).unwrap();
        assert_eq!(report.failures(), vec![-2, -4]);
    }

    #[test]
    fn degree_zero_generator_rejected() {
        let r = IndecomposableData::new(vec!["x".into()], vec![0], Representation::trivial(z2(), 1));
        assert!(matches!(r, Err(Error::Formality { degree: 0, .. })));
    }

    #[test]
    fn bad_differential_rejected() {
        let g = z2();
        let spec = FreeCdgaSpec {
            names: vec!["a".into(), "b".into()],
            degrees: vec![-1, -2],
            differentials: vec!["b*b".into(), String::new()],
            action: Representation::trivial(g, 2),
        };
        assert!(matches!(free_cdga(&spec, 3), Err(Error::InvalidDga(_))));
    }
}
