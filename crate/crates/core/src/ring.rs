//! The graded polynomial ring R = Q[x_1..x_r] with a finite group W acting by
//! graded automorphisms, and the twisted group ring R[W].
//!
//! Degrees are homological: every generator sits in a negative even degree,
//! so multiplying by a generator lowers degree. An element `w` acts on a
//! generator by `w(x_j) = Σ_i rho(w)[i][j] x_i`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Representation};
use crate::linalg::RationalMatrix;
use crate::parse::{parse_expr, ExprContext};
use crate::rational::{self, Rational};

/// Exponent vector. The derived order is lexicographic; canonical bases list
/// monomials in decreasing order, so `x1^2 > x1 x2 > x2^2`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn times_var(&self, i: usize) -> Monomial {
        let mut e = self.0.clone();
        e[i] += 1;
        Monomial(e)
    }

    /// `self / x_i` if divisible.
    pub fn div_var(&self, i: usize) -> Option<Monomial> {
        if self.0[i] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[i] -= 1;
        Some(Monomial(e))
    }

    /// The generators in the monomial, with multiplicity, ascending.
    pub fn factors(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
            .collect()
    }

    pub fn format(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    names[i].clone()
                } else {
                    format!("{}^{e}", names[i])
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// A polynomial in R, not necessarily homogeneous.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Polynomial {
    #[serde(with = "poly_terms")]
    terms: BTreeMap<Monomial, Rational>,
}

mod poly_terms {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Term {
        exponents: Vec<u32>,
        #[serde(with = "crate::rational::serde_rational")]
        coeff: Rational,
    }

    pub fn serialize<S: Serializer>(t: &BTreeMap<Monomial, Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(t.iter().map(|(m, c)| Term {
            exponents: m.0.clone(),
            coeff: c.clone(),
        }))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<Monomial, Rational>, D::Error> {
        let v = Vec::<Term>::deserialize(d)?;
        Ok(v.into_iter()
            .filter(|t| !t.coeff.is_zero())
            .map(|t| (Monomial(t.exponents), t.coeff))
            .collect())
    }
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(nvars: usize, q: Rational) -> Self {
        Self::term(Monomial::one(nvars), q)
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, Rational::one())
    }

    pub fn term(m: Monomial, q: Rational) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(m, q);
        p
    }

    pub fn add_term(&mut self, m: Monomial, q: Rational) {
        if q.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Rational::zero);
        *e += q;
        if e.is_zero() {
            let key = self.terms.iter().find(|(_, c)| c.is_zero()).map(|(k, _)| k.clone());
            if let Some(k) = key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, q: &Rational) -> Polynomial {
        if q.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    /// True when every term has zero constant part, i.e. the polynomial lies in 𝔪.
    pub fn in_augmentation_ideal(&self) -> bool {
        self.terms.keys().all(|m| !m.is_one())
    }

    pub fn format(&self, names: &[String]) -> String {
        format_terms(self.terms.iter().rev().map(|(m, c)| (m.format(names), c)))
    }
}

fn format_terms<'a>(terms: impl Iterator<Item = (String, &'a Rational)>) -> String {
    let mut out = String::new();
    for (body, c) in terms {
        let neg = rational::is_negative(c);
        let abs = if neg { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if body == "1" {
            out.push_str(&rational::format(&abs));
        } else if abs.is_one() {
            out.push_str(&body);
        } else {
            out.push_str(&format!("{}*{}", rational::format(&abs), body));
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Polynomial generators with their degrees and the W-action on their span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpace {
    names: Vec<String>,
    degrees: Vec<i64>,
    action: Representation,
}

impl GeneratorSpace {
    pub fn new(names: Vec<String>, degrees: Vec<i64>, action: Representation) -> Result<Self> {
        if names.len() != degrees.len() || action.dim() != degrees.len() {
            return Err(Error::InvalidRing(format!(
                "{} names, {} degrees and an action of dimension {}",
                names.len(),
                degrees.len(),
                action.dim()
            )));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::InvalidRing(format!("duplicate generator name {name:?}")));
            }
        }
        for (name, &d) in names.iter().zip(&degrees) {
            if d >= 0 || d % 2 != 0 {
                return Err(Error::InvalidRing(format!(
                    "generator {name} has degree {d}; generators must have even negative degree"
                )));
            }
        }
        for w in action.group().elements() {
            let m = action.matrix(w);
            for i in 0..degrees.len() {
                for j in 0..degrees.len() {
                    if degrees[i] != degrees[j] && !m.get(i, j).is_zero() {
                        return Err(Error::InvalidRing(format!(
                            "action of {} mixes {} (degree {}) with {} (degree {})",
                            action.group().name(w),
                            names[j],
                            degrees[j],
                            names[i],
                            degrees[i]
                        )));
                    }
                }
            }
        }
        Ok(GeneratorSpace { names, degrees, action })
    }

    /// Generators all fixed by the group.
    pub fn trivial_action(group: Arc<FiniteGroup>, names: Vec<String>, degrees: Vec<i64>) -> Result<Self> {
        let n = names.len();
        Self::new(names, degrees, Representation::trivial(group, n))
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn action(&self) -> &Representation {
        &self.action
    }
}

/// The twisted group ring R[W].
pub struct TwistedGroupRing {
    generators: GeneratorSpace,
    group: Arc<FiniteGroup>,
    monomial_cache: Mutex<HashMap<i64, Arc<Vec<Monomial>>>>,
    index_cache: Mutex<HashMap<i64, Arc<HashMap<Monomial, usize>>>>,
    action_cache: Mutex<HashMap<(usize, i64), Arc<RationalMatrix>>>,
}

impl fmt::Debug for TwistedGroupRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TwistedGroupRing")
            .field("generators", &self.generators.names)
            .field("degrees", &self.generators.degrees)
            .field("group_order", &self.group.order())
            .finish()
    }
}

impl PartialEq for TwistedGroupRing {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators && self.group == other.group
    }
}

impl TwistedGroupRing {
    pub fn new(generators: GeneratorSpace) -> Result<Arc<Self>> {
        let group = generators.action().group().clone();
        for g in group.names() {
            if generators.names().contains(g) {
                return Err(Error::InvalidRing(format!(
                    "name {g:?} is used both for a generator and a group element"
                )));
            }
        }
        Ok(Arc::new(TwistedGroupRing {
            generators,
            group,
            monomial_cache: Mutex::new(HashMap::new()),
            index_cache: Mutex::new(HashMap::new()),
            action_cache: Mutex::new(HashMap::new()),
        }))
    }

    /// The same polynomial ring with the group forgotten.
    pub fn polynomial_subring(&self) -> Arc<Self> {
        let trivial = Arc::new(FiniteGroup::trivial());
        let gens =
            GeneratorSpace::trivial_action(trivial, self.generators.names.clone(), self.generators.degrees.clone())
                .expect("restriction of a valid generator space");
        TwistedGroupRing::new(gens).expect("restriction of a valid ring")
    }

    pub fn generators(&self) -> &GeneratorSpace {
        &self.generators
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn nvars(&self) -> usize {
        self.generators.len()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.generators.degrees[i]
    }

    /// Largest |deg x_i|; 0 for the ring with no generators.
    pub fn max_step(&self) -> i64 {
        self.generators.degrees.iter().map(|d| -d).max().unwrap_or(0)
    }

    /// Sum of all generator degrees (the degree of x_1...x_r).
    pub fn total_degree(&self) -> i64 {
        self.generators.degrees.iter().sum()
    }

    pub fn monomial_degree(&self, m: &Monomial) -> i64 {
        m.0.iter()
            .zip(&self.generators.degrees)
            .map(|(&e, &d)| e as i64 * d)
            .sum()
    }

    /// Monomials of degree `t` in canonical (decreasing lexicographic) order.
    pub fn monomials(&self, t: i64) -> Arc<Vec<Monomial>> {
        if let Some(v) = self.monomial_cache.lock().unwrap().get(&t) {
            return v.clone();
        }
        let mut out = Vec::new();
        if t <= 0 {
            let mut e = vec![0u32; self.nvars()];
            self.enumerate(0, t, &mut e, &mut out);
        }
        out.sort_by(|a, b| b.cmp(a));
        let out = Arc::new(out);
        self.monomial_cache.lock().unwrap().insert(t, out.clone());
        out
    }

    fn enumerate(&self, i: usize, remaining: i64, e: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == self.nvars() {
            if remaining == 0 {
                out.push(Monomial(e.clone()));
            }
            return;
        }
        let d = self.generators.degrees[i];
        let mut k = 0u32;
        loop {
            let rest = remaining - k as i64 * d;
            if rest > 0 {
                break;
            }
            e[i] = k;
            self.enumerate(i + 1, rest, e, out);
            k += 1;
        }
        e[i] = 0;
    }

    pub fn dim_polynomial(&self, t: i64) -> usize {
        self.monomials(t).len()
    }

    /// Index of a monomial within the canonical basis of its degree.
    pub fn monomial_index(&self, m: &Monomial) -> usize {
        let t = self.monomial_degree(m);
        let map = {
            let cached = self.index_cache.lock().unwrap().get(&t).cloned();
            match cached {
                Some(map) => map,
                None => {
                    let map: HashMap<Monomial, usize> = self
                        .monomials(t)
                        .iter()
                        .enumerate()
                        .map(|(i, m)| (m.clone(), i))
                        .collect();
                    let map = Arc::new(map);
                    self.index_cache.lock().unwrap().insert(t, map.clone());
                    map
                }
            }
        };
        map[m]
    }

    /// Canonical basis of (R[W])_t: monomials crossed with group elements.
    pub fn graded_piece(&self, t: i64) -> Vec<(Monomial, usize)> {
        let mut out = Vec::new();
        for m in self.monomials(t).iter() {
            for g in self.group.elements() {
                out.push((m.clone(), g));
            }
        }
        out
    }

    /// Degreewise bases of the augmentation ideal 𝔪 ⊂ R over `lo..=hi`.
    pub fn augmentation_ideal_basis(&self, lo: i64, hi: i64) -> BTreeMap<i64, Vec<Monomial>> {
        (lo..=hi)
            .map(|t| {
                let basis = if t < 0 { self.monomials(t).to_vec() } else { Vec::new() };
                (t, basis)
            })
            .collect()
    }

    fn generator_image(&self, w: usize, j: usize) -> Polynomial {
        let n = self.nvars();
        let m = self.generators.action.matrix(w);
        let mut p = Polynomial::zero();
        for i in 0..n {
            p.add_term(Monomial::var(n, i), m.get(i, j).clone());
        }
        p
    }

    pub fn act_monomial(&self, w: usize, m: &Monomial) -> Polynomial {
        let n = self.nvars();
        let mut acc = Polynomial::constant(n, Rational::one());
        for j in m.factors() {
            acc = acc.mul(&self.generator_image(w, j));
        }
        acc
    }

    /// The algebra automorphism of R determined by `w`.
    pub fn act(&self, w: usize, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in p.terms() {
            out = out.add(&self.act_monomial(w, m).scale(c));
        }
        out
    }

    /// Matrix of `w` on R_t in the canonical monomial basis.
    pub fn action_matrix(&self, w: usize, t: i64) -> Arc<RationalMatrix> {
        if let Some(m) = self.action_cache.lock().unwrap().get(&(w, t)) {
            return m.clone();
        }
        let basis = self.monomials(t);
        let n = basis.len();
        let mut mat = RationalMatrix::zeros(n, n);
        for (j, m) in basis.iter().enumerate() {
            for (m2, c) in self.act_monomial(w, m).terms() {
                mat.set(self.monomial_index(m2), j, c.clone());
            }
        }
        let mat = Arc::new(mat);
        self.action_cache.lock().unwrap().insert((w, t), mat.clone());
        mat
    }

    pub fn check_element(&self, a: &RingElement) -> Result<()> {
        for (m, g) in a.terms.keys() {
            if m.nvars() != self.nvars() || *g >= self.group.order() {
                return Err(Error::RingMismatch(format!(
                    "term with {} variables and group index {g} in a ring with {} variables and |W| = {}",
                    m.nvars(),
                    self.nvars(),
                    self.group.order()
                )));
            }
        }
        Ok(())
    }

    /// `(p·w)(q·v) = (p·w(q))·(wv)`, extended bilinearly.
    pub fn multiply(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.check_element(a)?;
        self.check_element(b)?;
        let mut out = RingElement::zero();
        for ((p, w), c1) in &a.terms {
            for ((q, v), c2) in &b.terms {
                let wq = self.act_monomial(*w, q);
                let g = self.group.mul(*w, *v);
                let coeff = c1 * c2;
                for (m, c3) in wq.terms() {
                    out.add_term(p.mul(m), g, &coeff * c3);
                }
            }
        }
        Ok(out)
    }

    pub fn one(&self) -> RingElement {
        RingElement::term(Monomial::one(self.nvars()), self.group.identity(), Rational::one())
    }

    pub fn generator(&self, i: usize) -> RingElement {
        RingElement::term(Monomial::var(self.nvars(), i), self.group.identity(), Rational::one())
    }

    pub fn group_element(&self, g: usize) -> RingElement {
        RingElement::term(Monomial::one(self.nvars()), g, Rational::one())
    }

    pub fn from_polynomial(&self, p: &Polynomial) -> RingElement {
        let mut out = RingElement::zero();
        for (m, c) in p.terms() {
            out.add_term(m.clone(), self.group.identity(), c.clone());
        }
        out
    }

    /// Degree of a homogeneous element; `None` for zero, error if inhomogeneous.
    pub fn element_degree(&self, a: &RingElement) -> Result<Option<i64>> {
        let mut deg = None;
        for (m, _) in a.terms.keys() {
            let d = self.monomial_degree(m);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => {
                    return Err(Error::Inhomogeneous {
                        index: 0,
                        detail: format!("terms of degrees {e} and {d}"),
                    })
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn parse(&self, s: &str) -> Result<RingElement> {
        parse_expr(self, s)
    }

    pub fn format(&self, a: &RingElement) -> String {
        let names = self.generators.names();
        format_terms(a.terms.iter().rev().map(|((m, g), c)| {
            let mono = m.format(names);
            let body = if *g == self.group.identity() {
                mono
            } else if mono == "1" {
                self.group.name(*g).to_string()
            } else {
                format!("{mono}*{}", self.group.name(*g))
            };
            (body, c)
        }))
    }
}

impl ExprContext for TwistedGroupRing {
    type Value = RingElement;

    fn scalar(&self, q: Rational) -> RingElement {
        RingElement::term(Monomial::one(self.nvars()), self.group.identity(), q)
    }

    fn atom(&self, name: &str) -> Result<RingElement> {
        if let Some(i) = self.generators.names().iter().position(|n| n == name) {
            return Ok(self.generator(i));
        }
        if let Some(g) = self.group.element(name) {
            return Ok(self.group_element(g));
        }
        Err(Error::Parse(format!("unknown generator or group element {name:?}")))
    }

    fn add(&self, a: RingElement, b: RingElement) -> Result<RingElement> {
        Ok(a.add(&b))
    }

    fn mul(&self, a: RingElement, b: RingElement) -> Result<RingElement> {
        self.multiply(&a, &b)
    }

    fn mul_scalar(&self, a: RingElement, q: Rational) -> RingElement {
        a.scale(&q)
    }
}

/// An element of R[W]: a Q-linear combination of `monomial · group element`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RingElement {
    terms: BTreeMap<(Monomial, usize), Rational>,
}

impl RingElement {
    pub fn zero() -> Self {
        RingElement::default()
    }

    pub fn term(m: Monomial, g: usize, q: Rational) -> Self {
        let mut e = RingElement::zero();
        e.add_term(m, g, q);
        e
    }

    pub fn add_term(&mut self, m: Monomial, g: usize, q: Rational) {
        if q.is_zero() {
            return;
        }
        let key = (m, g);
        let e = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *e += q;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial, usize), &Rational)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &RingElement) -> RingElement {
        let mut out = self.clone();
        for ((m, g), c) in &other.terms {
            out.add_term(m.clone(), *g, c.clone());
        }
        out
    }

    pub fn scale(&self, q: &Rational) -> RingElement {
        let mut out = RingElement::zero();
        for ((m, g), c) in &self.terms {
            out.add_term(m.clone(), *g, c * q);
        }
        out
    }

    pub fn in_augmentation_ideal(&self) -> bool {
        self.terms.keys().all(|(m, _)| !m.is_one())
    }
}

/// `Q[c][Z/2]` with `deg c = -2` and the nontrivial element negating `c`.
pub fn o2_ring() -> Arc<TwistedGroupRing> {
    let group = Arc::new(FiniteGroup::cyclic(2));
    let action = Representation::character(group, &[1, -1]).expect("sign character");
    let gens = GeneratorSpace::new(vec!["c".into()], vec![-2], action).expect("valid generator");
    TwistedGroupRing::new(gens).expect("valid ring")
}

/// `Q[x1..xr]` with all generators in degree -2 and trivial group.
pub fn polynomial_ring(r: usize) -> Arc<TwistedGroupRing> {
    polynomial_ring_with_degrees(&vec![-2; r])
}

pub fn polynomial_ring_with_degrees(degrees: &[i64]) -> Arc<TwistedGroupRing> {
    let names = (1..=degrees.len()).map(|i| format!("x{i}")).collect();
    let gens = GeneratorSpace::trivial_action(Arc::new(FiniteGroup::trivial()), names, degrees.to_vec())
        .expect("valid generators");
    TwistedGroupRing::new(gens).expect("valid ring")
}
