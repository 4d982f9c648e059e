//! Graded modules over R[W]: finite presentations, degreewise realization,
//! module maps, Hom, duals, suspension and the torsion functor Γ_𝔪.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::group::{averaging_idempotent, Representation};
use crate::linalg::{restrict_map, Quotient, RationalMatrix, Subspace};
use crate::par;
use crate::parse::{parse_expr, ExprContext};
use crate::rational::{self, Rational};
use crate::ring::{Monomial, Polynomial, RingElement, TwistedGroupRing};

/// Reported degrees `[t_min, t_max]`; computations run on the window widened
/// by `margin` on both sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DegreeWindow {
    pub t_min: i64,
    pub t_max: i64,
    pub margin: i64,
}

impl DegreeWindow {
    pub fn new(t_min: i64, t_max: i64, margin: i64) -> Result<Self> {
        if t_min > t_max {
            return Err(Error::Window {
                detail: format!("empty window [{t_min}, {t_max}]"),
                needed_lo: t_min,
                needed_hi: t_max,
                available_lo: t_min,
                available_hi: t_max,
            });
        }
        if margin < 0 {
            return Err(Error::Window {
                detail: format!("negative margin {margin}"),
                needed_lo: t_min,
                needed_hi: t_max,
                available_lo: t_min,
                available_hi: t_max,
            });
        }
        Ok(DegreeWindow { t_min, t_max, margin })
    }

    pub fn lo(&self) -> i64 {
        self.t_min - self.margin
    }

    pub fn hi(&self) -> i64 {
        self.t_max + self.margin
    }

    /// Twice the margin and twice the reported range, about the same center.
    pub fn doubled(&self) -> DegreeWindow {
        let width = self.t_max - self.t_min;
        let extra = width / 2 + 1;
        DegreeWindow {
            t_min: self.t_min - extra,
            t_max: self.t_max + extra,
            margin: self.margin * 2,
        }
    }
}

/// A finitely presented graded R[W]-module: generators with degrees and
/// relations, each relation a homogeneous R[W]-combination of generators.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedModulePresentation {
    ring: Arc<TwistedGroupRing>,
    generators: Vec<(String, i64)>,
    relations: Vec<Vec<RingElement>>,
    relation_degrees: Vec<i64>,
}

impl GradedModulePresentation {
    pub fn new(
        ring: Arc<TwistedGroupRing>,
        generators: Vec<(String, i64)>,
        relations: Vec<Vec<RingElement>>,
    ) -> Result<Self> {
        for (i, (name, _)) in generators.iter().enumerate() {
            if generators[..i].iter().any(|(n, _)| n == name) {
                return Err(Error::Parse(format!("duplicate module generator {name:?}")));
            }
        }
        let mut relation_degrees = Vec::with_capacity(relations.len());
        let mut kept = Vec::with_capacity(relations.len());
        for (k, rel) in relations.into_iter().enumerate() {
            if rel.len() != generators.len() {
                return Err(Error::DimensionMismatch(format!(
                    "relation {k} has {} coefficients for {} generators",
                    rel.len(),
                    generators.len()
                )));
            }
            let mut degree: Option<i64> = None;
            for (j, coeff) in rel.iter().enumerate() {
                ring.check_element(coeff)?;
                let d = ring.element_degree(coeff).map_err(|e| match e {
                    Error::Inhomogeneous { detail, .. } => Error::Inhomogeneous {
                        index: k,
                        detail: format!("coefficient of {}: {detail}", generators[j].0),
                    },
                    other => other,
                })?;
                if let Some(d) = d {
                    let total = d + generators[j].1;
                    match degree {
                        None => degree = Some(total),
                        Some(e) if e != total => {
                            return Err(Error::Inhomogeneous {
                                index: k,
                                detail: format!("terms in degrees {e} and {total}"),
                            })
                        }
                        _ => {}
                    }
                }
            }
            if let Some(d) = degree {
                relation_degrees.push(d);
                kept.push(rel);
            }
        }
        Ok(GradedModulePresentation {
            ring,
            generators,
            relations: kept,
            relation_degrees,
        })
    }

    /// Parses relations such as `"c^2*u - w*v"` in terms of the ring's
    /// generators and group elements and the module generator names.
    pub fn parse(ring: Arc<TwistedGroupRing>, generators: Vec<(String, i64)>, relations: &[String]) -> Result<Self> {
        let ctx = FreeModuleContext {
            ring: &ring,
            names: generators.iter().map(|(n, _)| n.as_str()).collect(),
        };
        let mut rels = Vec::new();
        for s in relations {
            match parse_expr(&ctx, s)? {
                FreeExpr::Free(v) => rels.push(v),
                FreeExpr::Ring(a) if a.is_zero() => {}
                FreeExpr::Ring(_) => {
                    return Err(Error::Parse(format!(
                        "relation {s:?} does not involve any module generator"
                    )))
                }
            }
        }
        Self::new(ring, generators, rels)
    }

    pub fn zero(ring: Arc<TwistedGroupRing>) -> Self {
        GradedModulePresentation {
            ring,
            generators: Vec::new(),
            relations: Vec::new(),
            relation_degrees: Vec::new(),
        }
    }

    /// R[W] with its generator in `degree`.
    pub fn free(ring: Arc<TwistedGroupRing>, degree: i64) -> Self {
        Self::new(ring, vec![("u".into(), degree)], Vec::new()).expect("no relations")
    }

    /// QW = R[W]/𝔪R[W] in degree 0.
    pub fn residue_regular(ring: Arc<TwistedGroupRing>) -> Self {
        let rels = (0..ring.nvars()).map(|i| vec![ring.generator(i)]).collect();
        Self::new(ring, vec![("u".into(), 0)], rels).expect("homogeneous relations")
    }

    /// Q with trivial W-action in degree 0.
    pub fn residue_trivial(ring: Arc<TwistedGroupRing>) -> Self {
        let mut rels: Vec<Vec<RingElement>> = (0..ring.nvars()).map(|i| vec![ring.generator(i)]).collect();
        let group = ring.group().clone();
        for w in group.elements().filter(|&w| w != group.identity()) {
            let rel = ring.group_element(w).add(&ring.one().scale(&-Rational::one()));
            rels.push(vec![rel]);
        }
        Self::new(ring, vec![("u".into(), 0)], rels).expect("homogeneous relations")
    }

    pub fn ring(&self) -> &Arc<TwistedGroupRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[(String, i64)] {
        &self.generators
    }

    pub fn relations(&self) -> &[Vec<RingElement>] {
        &self.relations
    }

    pub fn relation_degree(&self, k: usize) -> i64 {
        self.relation_degrees[k]
    }

    pub fn relation_degrees(&self) -> &[i64] {
        &self.relation_degrees
    }

    pub fn max_generator_degree(&self) -> Option<i64> {
        self.generators.iter().map(|g| g.1).max()
    }

    pub fn min_generator_degree(&self) -> Option<i64> {
        self.generators.iter().map(|g| g.1).min()
    }

    /// Lowest degree of a generator or relation.
    pub fn min_degree(&self) -> Option<i64> {
        self.generators
            .iter()
            .map(|g| g.1)
            .chain(self.relation_degrees.iter().copied())
            .min()
    }

    /// Largest degree drop from a generator to a relation it appears in.
    pub fn longest_relation_span(&self) -> i64 {
        let mut span = 0;
        for (rel, &d) in self.relations.iter().zip(&self.relation_degrees) {
            for (j, c) in rel.iter().enumerate() {
                if !c.is_zero() {
                    span = span.max(self.generators[j].1 - d);
                }
            }
        }
        span
    }

    /// `max|deg x_i| · (r + longest relation span)`.
    pub fn default_margin(&self) -> i64 {
        self.ring.max_step() * (self.ring.nvars() as i64 + self.longest_relation_span())
    }

    pub fn suspend(&self, d: i64) -> Self {
        GradedModulePresentation {
            ring: self.ring.clone(),
            generators: self.generators.iter().map(|(n, e)| (n.clone(), e + d)).collect(),
            relations: self.relations.clone(),
            relation_degrees: self.relation_degrees.iter().map(|e| e + d).collect(),
        }
    }

    /// Direct sum; generators of `other` are renamed if they clash.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if *self.ring != *other.ring {
            return Err(Error::RingMismatch("direct sum of modules over different rings".into()));
        }
        let mut generators = self.generators.clone();
        for (name, d) in &other.generators {
            let mut n = name.clone();
            while generators.iter().any(|(m, _)| *m == n) {
                n.push('\'');
            }
            generators.push((n, *d));
        }
        let (a, b) = (self.generators.len(), other.generators.len());
        let mut relations = Vec::new();
        for rel in &self.relations {
            let mut r = rel.clone();
            r.extend(std::iter::repeat_n(RingElement::zero(), b));
            relations.push(r);
        }
        for rel in &other.relations {
            let mut r = vec![RingElement::zero(); a];
            r.extend(rel.iter().cloned());
            relations.push(r);
        }
        Self::new(self.ring.clone(), generators, relations)
    }

    /// The same module viewed over R alone: generator `j` splits into the
    /// generators `g·u_j`, one per group element, and each relation into its
    /// W-translates.
    pub fn restrict_to_polynomial_ring(&self) -> Self {
        let sub = self.ring.polynomial_subring();
        let group = self.ring.group().clone();
        let order = group.order();
        let mut generators = Vec::new();
        for (name, d) in &self.generators {
            for g in group.elements() {
                let gen_name = if group.is_trivial() {
                    name.clone()
                } else {
                    format!("{}.{name}", group.name(g))
                };
                generators.push((gen_name, *d));
            }
        }
        let mut relations = Vec::new();
        for rel in &self.relations {
            for v in group.elements() {
                let mut out = vec![RingElement::zero(); generators.len()];
                for (j, coeff) in rel.iter().enumerate() {
                    let translated = self
                        .ring
                        .multiply(&self.ring.group_element(v), coeff)
                        .expect("same ring");
                    for ((m, g), c) in translated.terms() {
                        out[j * order + g].add_term(m.clone(), 0, c.clone());
                    }
                }
                relations.push(out);
            }
        }
        Self::new(sub, generators, relations).expect("restriction preserves homogeneity")
    }

    /// Canonical text used for cache keys and reports.
    pub fn canonical_string(&self) -> String {
        let mut s = String::new();
        let gens = self.ring.generators();
        write!(s, "ring:").unwrap();
        for (n, d) in gens.names().iter().zip(gens.degrees()) {
            write!(s, "{n}@{d},").unwrap();
        }
        write!(s, ";group:{:?}", self.ring.group().table()).unwrap();
        for w in self.ring.group().elements() {
            write!(s, ";act{w}:{:?}", gens.action().matrix(w)).unwrap();
        }
        write!(s, ";gens:").unwrap();
        for (n, d) in &self.generators {
            write!(s, "{n}@{d},").unwrap();
        }
        for rel in &self.relations {
            write!(s, ";rel:").unwrap();
            for c in rel {
                write!(s, "[{}]", self.ring.format(c)).unwrap();
            }
        }
        s
    }

    fn free_layout(&self, t: i64) -> FreeLayout {
        let order = self.ring.group().order();
        let mut offsets = Vec::with_capacity(self.generators.len());
        let mut total = 0;
        for (_, d) in &self.generators {
            offsets.push(total);
            total += order * self.ring.dim_polynomial(t - d);
        }
        FreeLayout {
            offsets,
            total,
            degree: t,
        }
    }

    fn free_index(&self, layout: &FreeLayout, j: usize, m: &Monomial, g: usize) -> usize {
        layout.offsets[j] + self.ring.monomial_index(m) * self.ring.group().order() + g
    }

    /// The free-module vector of `a · (element with coefficients rel)` in
    /// degree `t`.
    fn free_vector(&self, layout: &FreeLayout, a: &RingElement, rel: &[RingElement]) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); layout.total];
        for (j, coeff) in rel.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let prod = self.ring.multiply(a, coeff).expect("same ring");
            for ((m, g), c) in prod.terms() {
                v[self.free_index(layout, j, m, *g)] += c;
            }
        }
        v
    }

    fn realize_degree(&self, t: i64) -> RealizedDegree {
        let layout = self.free_layout(t);
        let mut rel_rows = Vec::new();
        for (rel, &d) in self.relations.iter().zip(&self.relation_degrees) {
            for (m, g) in self.ring.graded_piece(t - d) {
                let a = RingElement::term(m, g, Rational::one());
                let v = self.free_vector(&layout, &a, rel);
                if v.iter().any(|x| !x.is_zero()) {
                    rel_rows.push(v);
                }
            }
        }
        let n = layout.total;
        let (pivots, reduced) = if rel_rows.is_empty() {
            (Vec::new(), RationalMatrix::zeros(0, n))
        } else {
            let rref = RationalMatrix::from_rows(rel_rows, n)
                .expect("rows of equal length")
                .rref();
            let rank = rref.rank();
            let rows: Vec<usize> = (0..rank).collect();
            (rref.pivots.clone(), rref.matrix.select_rows(&rows))
        };
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let basis: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        // The class of a free vector v has coordinates v[N] - Σ_i v[p_i] row_i[N].
        let mut projection = RationalMatrix::zeros(basis.len(), n);
        for (k, &c) in basis.iter().enumerate() {
            projection.set(k, c, Rational::one());
            for (i, &p) in pivots.iter().enumerate() {
                let x = reduced.get(i, c);
                if !x.is_zero() {
                    projection.set(k, p, -x.clone());
                }
            }
        }
        RealizedDegree {
            layout,
            basis,
            projection,
        }
    }

    fn free_label(&self, layout: &FreeLayout, index: usize) -> String {
        let order = self.ring.group().order();
        let j = layout
            .offsets
            .iter()
            .rposition(|&o| o <= index)
            .expect("index in range");
        let local = index - layout.offsets[j];
        let (mi, g) = (local / order, local % order);
        let mons = self.ring.monomials(layout.degree - self.generators[j].1);
        let mono = mons[mi].format(self.ring.generators().names());
        let group = self.ring.group();
        let mut parts = Vec::new();
        if mono != "1" {
            parts.push(mono);
        }
        if g != group.identity() {
            parts.push(group.name(g).to_string());
        }
        parts.push(self.generators[j].0.clone());
        parts.join("*")
    }

    /// Degreewise realization on `[lo, hi]`.
    pub fn realize(&self, lo: i64, hi: i64) -> Result<GradedModule> {
        if lo > hi {
            return Err(Error::window(
                format!("empty realization range [{lo}, {hi}]"),
                (lo, hi),
                (lo, hi),
            ));
        }
        let degrees = par::try_map_degrees(lo, hi, |t| Ok(self.realize_degree(t)))?;
        let realized: HashMap<i64, RealizedDegree> = degrees.into_iter().collect();
        let ring = &self.ring;
        let group = ring.group().clone();
        let nvars = ring.nvars();
        let pieces = par::map((lo..=hi).collect::<Vec<_>>(), |t| {
            let here = &realized[&t];
            let dim = here.basis.len();
            let entries: Vec<(usize, Monomial, usize)> = here
                .basis
                .iter()
                .map(|&c| {
                    let j = here.layout.offsets.iter().rposition(|&o| o <= c).unwrap();
                    let local = c - here.layout.offsets[j];
                    let order = group.order();
                    let mons = ring.monomials(t - self.generators[j].1);
                    (j, mons[local / order].clone(), local % order)
                })
                .collect();
            let x = (0..nvars)
                .map(|i| {
                    let target = t + ring.degree(i);
                    match realized.get(&target) {
                        None => RationalMatrix::zeros(0, dim),
                        Some(there) => {
                            let mut m = RationalMatrix::zeros(there.basis.len(), dim);
                            for (b, (j, mono, g)) in entries.iter().enumerate() {
                                let idx = self.free_index(&there.layout, *j, &mono.times_var(i), *g);
                                for k in 0..there.basis.len() {
                                    let q = there.projection.get(k, idx);
                                    if !q.is_zero() {
                                        m.set(k, b, q.clone());
                                    }
                                }
                            }
                            m
                        }
                    }
                })
                .collect();
            let reps = group
                .elements()
                .map(|w| {
                    let mut m = RationalMatrix::zeros(dim, dim);
                    for (b, (j, mono, g)) in entries.iter().enumerate() {
                        let image = ring.act_monomial(w, mono);
                        let wg = group.mul(w, *g);
                        for (m2, c) in image.terms() {
                            let idx = self.free_index(&here.layout, *j, m2, wg);
                            for k in 0..dim {
                                let q = here.projection.get(k, idx);
                                if !q.is_zero() {
                                    m.add_to(k, b, &(q * c));
                                }
                            }
                        }
                    }
                    m
                })
                .collect();
            let labels = here.basis.iter().map(|&c| self.free_label(&here.layout, c)).collect();
            Piece {
                dim,
                group: reps,
                x,
                labels,
            }
        });
        let zero_above = match self.max_generator_degree() {
            None => true,
            Some(top) => hi >= top,
        };
        let mut module = GradedModule {
            ring: self.ring.clone(),
            lo,
            hi,
            zero_below: false,
            zero_above,
            pieces,
        };
        module.zero_below = match self.min_generator_degree() {
            None => true,
            Some(bottom) => module.has_vanishing_band_below(bottom),
        };
        Ok(module)
    }

    pub fn realize_window(&self, window: &DegreeWindow) -> Result<GradedModule> {
        self.realize(window.lo(), window.hi())
    }

    /// Certified support `[lo, hi]` of the module if it is finite, searching
    /// at most `depth` degrees below the lowest generator. `None` for the
    /// zero module or when no certificate was found.
    pub fn finite_support(&self, depth: i64) -> Result<Option<(i64, i64)>> {
        let (Some(bottom), Some(top)) = (self.min_generator_degree(), self.max_generator_degree()) else {
            return Ok(None);
        };
        let step = self.ring.max_step();
        let module = self.realize(bottom - depth - step, top)?;
        if !module.zero_below {
            return Ok(None);
        }
        Ok(module.support_range())
    }
}

struct FreeLayout {
    offsets: Vec<usize>,
    total: usize,
    degree: i64,
}

struct RealizedDegree {
    layout: FreeLayout,
    basis: Vec<usize>,
    projection: RationalMatrix,
}

#[derive(Clone)]
enum FreeExpr {
    Ring(RingElement),
    Free(Vec<RingElement>),
}

struct FreeModuleContext<'a> {
    ring: &'a TwistedGroupRing,
    names: Vec<&'a str>,
}

impl ExprContext for FreeModuleContext<'_> {
    type Value = FreeExpr;

    fn scalar(&self, q: Rational) -> FreeExpr {
        FreeExpr::Ring(self.ring.scalar(q))
    }

    fn atom(&self, name: &str) -> Result<FreeExpr> {
        if let Some(j) = self.names.iter().position(|n| *n == name) {
            let mut v = vec![RingElement::zero(); self.names.len()];
            v[j] = self.ring.one();
            return Ok(FreeExpr::Free(v));
        }
        self.ring.atom(name).map(FreeExpr::Ring)
    }

    fn add(&self, a: FreeExpr, b: FreeExpr) -> Result<FreeExpr> {
        match (a, b) {
            (FreeExpr::Ring(x), FreeExpr::Ring(y)) => Ok(FreeExpr::Ring(x.add(&y))),
            (FreeExpr::Free(x), FreeExpr::Free(y)) => {
                Ok(FreeExpr::Free(x.iter().zip(&y).map(|(p, q)| p.add(q)).collect()))
            }
            (FreeExpr::Ring(x), other) | (other, FreeExpr::Ring(x)) if x.is_zero() => Ok(other),
            _ => Err(Error::Parse("cannot add a ring element to a module element".into())),
        }
    }

    fn mul(&self, a: FreeExpr, b: FreeExpr) -> Result<FreeExpr> {
        match (a, b) {
            (FreeExpr::Ring(x), FreeExpr::Ring(y)) => Ok(FreeExpr::Ring(self.ring.multiply(&x, &y)?)),
            (FreeExpr::Ring(x), FreeExpr::Free(v)) => Ok(FreeExpr::Free(
                v.iter().map(|c| self.ring.multiply(&x, c)).collect::<Result<_>>()?,
            )),
            (FreeExpr::Free(_), FreeExpr::Ring(_)) => Err(Error::Parse(
                "module generators must be multiplied on the left (write c*u, not u*c)".into(),
            )),
            (FreeExpr::Free(_), FreeExpr::Free(_)) => Err(Error::Parse("cannot multiply two module elements".into())),
        }
    }

    fn mul_scalar(&self, a: FreeExpr, q: Rational) -> FreeExpr {
        match a {
            FreeExpr::Ring(x) => FreeExpr::Ring(x.scale(&q)),
            FreeExpr::Free(v) => FreeExpr::Free(v.iter().map(|c| c.scale(&q)).collect()),
        }
    }
}

/// Data of a realized module in one degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Piece {
    pub dim: usize,
    /// One `dim x dim` matrix per group element.
    pub group: Vec<RationalMatrix>,
    /// `x[i]`: multiplication by the i-th generator, `M_t -> M_{t + deg x_i}`.
    /// Has zero rows when the target degree is outside the realized range.
    pub x: Vec<RationalMatrix>,
    pub labels: Vec<String>,
}

/// A graded R[W]-module known degreewise on `[lo, hi]`.
///
/// `zero_below` / `zero_above` certify that the module vanishes outside the
/// range in that direction; otherwise those degrees are simply unknown.
#[derive(Clone, Debug)]
pub struct GradedModule {
    ring: Arc<TwistedGroupRing>,
    lo: i64,
    hi: i64,
    zero_below: bool,
    zero_above: bool,
    pieces: Vec<Piece>,
}

impl GradedModule {
    /// Builds a module from explicit pieces and checks the module axioms.
    pub fn from_pieces(
        ring: Arc<TwistedGroupRing>,
        lo: i64,
        zero_below: bool,
        zero_above: bool,
        pieces: Vec<Piece>,
    ) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::DimensionMismatch(
                "a realized module needs at least one degree".into(),
            ));
        }
        let hi = lo + pieces.len() as i64 - 1;
        let m = GradedModule {
            ring,
            lo,
            hi,
            zero_below,
            zero_above,
            pieces,
        };
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn from_pieces_unchecked(
        ring: Arc<TwistedGroupRing>,
        lo: i64,
        zero_below: bool,
        zero_above: bool,
        pieces: Vec<Piece>,
    ) -> Self {
        let hi = lo + pieces.len() as i64 - 1;
        GradedModule {
            ring,
            lo,
            hi,
            zero_below,
            zero_above,
            pieces,
        }
    }

    pub fn ring(&self) -> &Arc<TwistedGroupRing> {
        &self.ring
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn zero_below(&self) -> bool {
        self.zero_below
    }

    pub fn zero_above(&self) -> bool {
        self.zero_above
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn contains_degree(&self, t: i64) -> bool {
        (self.lo..=self.hi).contains(&t)
    }

    pub fn piece(&self, t: i64) -> Option<&Piece> {
        if self.contains_degree(t) {
            Some(&self.pieces[(t - self.lo) as usize])
        } else {
            None
        }
    }

    /// `Some(dim M_t)` if known, `None` outside the certified range.
    pub fn dim(&self, t: i64) -> Option<usize> {
        match self.piece(t) {
            Some(p) => Some(p.dim),
            None if (t < self.lo && self.zero_below) || (t > self.hi && self.zero_above) => Some(0),
            None => None,
        }
    }

    pub fn dims(&self) -> Vec<(i64, usize)> {
        (self.lo..=self.hi)
            .map(|t| (t, self.pieces[(t - self.lo) as usize].dim))
            .collect()
    }

    pub fn total_dim(&self) -> usize {
        self.pieces.iter().map(|p| p.dim).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.zero_below && self.zero_above && self.total_dim() == 0
    }

    /// Degrees in range carrying a nonzero piece.
    pub fn support(&self) -> Vec<i64> {
        self.dims()
            .into_iter()
            .filter(|&(_, d)| d > 0)
            .map(|(t, _)| t)
            .collect()
    }

    pub fn support_range(&self) -> Option<(i64, i64)> {
        let s = self.support();
        Some((*s.first()?, *s.last()?))
    }

    pub(crate) fn has_vanishing_band_below(&self, bottom: i64) -> bool {
        let step = self.ring.max_step().max(1);
        let mut run = 0;
        let mut t = bottom.min(self.hi);
        while t >= self.lo {
            if self.pieces[(t - self.lo) as usize].dim == 0 {
                run += 1;
                if run >= step && t < bottom {
                    return true;
                }
            } else {
                run = 0;
            }
            t -= 1;
        }
        false
    }

    fn unknown(&self, t: i64, what: &str) -> Error {
        let (lo, hi) = (t.min(self.lo), t.max(self.hi));
        Error::window(
            format!(
                "{what} needs degree {t}, outside the realized range [{}, {}]",
                self.lo, self.hi
            ),
            (lo, hi),
            (self.lo, self.hi),
        )
    }

    pub fn group_rep(&self, t: i64) -> Result<Representation> {
        let group = self.ring.group().clone();
        match self.piece(t) {
            Some(p) => Ok(Representation::new_unchecked(group, p.dim, p.group.clone())),
            None => match self.dim(t) {
                Some(0) => Ok(Representation::trivial(group, 0)),
                _ => Err(self.unknown(t, "group action")),
            },
        }
    }

    pub fn group_matrix(&self, w: usize, t: i64) -> Result<RationalMatrix> {
        Ok(self.group_rep(t)?.matrix(w).clone())
    }

    /// Matrix of `x_i: M_t -> M_{t + deg x_i}`.
    pub fn x_matrix(&self, i: usize, t: i64) -> Result<RationalMatrix> {
        let target = t + self.ring.degree(i);
        let (src, tgt) = (self.dim(t), self.dim(target));
        match (src, tgt) {
            (Some(0), Some(n)) => Ok(RationalMatrix::zeros(n, 0)),
            (Some(n), Some(0)) => Ok(RationalMatrix::zeros(0, n)),
            (Some(_), Some(_)) => Ok(self.piece(t).expect("nonzero piece is realized").x[i].clone()),
            (None, _) => Err(self.unknown(t, "generator action")),
            (_, None) => Err(self.unknown(target, "generator action")),
        }
    }

    /// Matrix of a monomial, `M_t -> M_{t + deg m}`.
    pub fn monomial_action(&self, m: &Monomial, t: i64) -> Result<RationalMatrix> {
        let mut cur = t;
        let n = self.dim(t).ok_or_else(|| self.unknown(t, "monomial action"))?;
        let mut acc = RationalMatrix::identity(n);
        for i in m.factors() {
            let x = self.x_matrix(i, cur)?;
            acc = &x * &acc;
            cur += self.ring.degree(i);
        }
        Ok(acc)
    }

    pub fn polynomial_action(&self, p: &Polynomial, t: i64, degree: i64) -> Result<RationalMatrix> {
        let rows = self
            .dim(t + degree)
            .ok_or_else(|| self.unknown(t + degree, "polynomial action"))?;
        let cols = self.dim(t).ok_or_else(|| self.unknown(t, "polynomial action"))?;
        let mut acc = RationalMatrix::zeros(rows, cols);
        for (m, c) in p.terms() {
            debug_assert_eq!(self.ring.monomial_degree(m), degree);
            acc = &acc + &self.monomial_action(m, t)?.scale(c);
        }
        Ok(acc)
    }

    /// Matrix of a homogeneous ring element of the given degree on `M_t`.
    pub fn element_action(&self, a: &RingElement, t: i64, degree: i64) -> Result<RationalMatrix> {
        let rows = self
            .dim(t + degree)
            .ok_or_else(|| self.unknown(t + degree, "ring element action"))?;
        let cols = self.dim(t).ok_or_else(|| self.unknown(t, "ring element action"))?;
        let mut acc = RationalMatrix::zeros(rows, cols);
        if rows == 0 || cols == 0 {
            return Ok(acc);
        }
        for ((m, g), c) in a.terms() {
            let gm = self.group_matrix(*g, t)?;
            let mm = self.monomial_action(m, t)?;
            acc = &acc + &(&mm * &gm).scale(c);
        }
        Ok(acc)
    }

    /// Checks commutation of the generators, the group law, and the twist
    /// `w x_j = w(x_j) w` in every degree where all terms are known.
    pub fn validate(&self) -> Result<()> {
        let ring = &self.ring;
        let group = ring.group();
        let n = ring.nvars();
        let action = ring.generators().action();
        for t in self.lo..=self.hi {
            let p = &self.pieces[(t - self.lo) as usize];
            if p.group.len() != group.order() || p.x.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "degree {t}: wrong number of action matrices"
                )));
            }
            for (w, m) in p.group.iter().enumerate() {
                if m.rows() != p.dim || m.cols() != p.dim {
                    return Err(Error::DimensionMismatch(format!(
                        "degree {t}: group matrix for {} has the wrong shape",
                        group.name(w)
                    )));
                }
            }
            let rep = Representation::new(group.clone(), p.dim, p.group.clone())
                .map_err(|e| Error::InvalidRepresentation(format!("degree {t}: {e}")))?;
            for i in 0..n {
                let target = t + ring.degree(i);
                let rows = self.piece(target).map_or(0, |q| q.dim);
                if (p.x[i].rows() != rows || p.x[i].cols() != p.dim)
                    && (self.piece(target).is_some() || p.x[i].rows() != 0)
                {
                    return Err(Error::DimensionMismatch(format!(
                        "degree {t}: matrix of {} is {}x{}, expected {}x{}",
                        ring.generators().names()[i],
                        p.x[i].rows(),
                        p.x[i].cols(),
                        rows,
                        p.dim
                    )));
                }
            }
            for i in 0..n {
                for j in i + 1..n {
                    let ij = (t + ring.degree(i) + ring.degree(j)) >= self.lo;
                    if !ij {
                        continue;
                    }
                    let a = &self.x_matrix(j, t + ring.degree(i))? * &self.x_matrix(i, t)?;
                    let b = &self.x_matrix(i, t + ring.degree(j))? * &self.x_matrix(j, t)?;
                    if a != b {
                        return Err(Error::Invariant(format!(
                            "degree {t}: generators {i} and {j} do not commute"
                        )));
                    }
                }
            }
            for j in 0..n {
                let target = t + ring.degree(j);
                if !self.contains_degree(target) {
                    continue;
                }
                let tgt_rep = self.group_rep(target)?;
                for w in group.elements() {
                    let lhs = tgt_rep.matrix(w) * &self.x_matrix(j, t)?;
                    let mut rhs = RationalMatrix::zeros(lhs.rows(), lhs.cols());
                    for i in 0..n {
                        let c = action.matrix(w).get(i, j);
                        if !c.is_zero() {
                            rhs = &rhs + &(&self.x_matrix(i, t)? * rep.matrix(w)).scale(c);
                        }
                    }
                    if lhs != rhs {
                        return Err(Error::NotEquivariant(format!(
                            "degree {t}: {} does not twist {} correctly",
                            group.name(w),
                            ring.generators().names()[j]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `(Σ^d M)_t = M_{t-d}`.
    pub fn suspend(&self, d: i64) -> GradedModule {
        GradedModule {
            lo: self.lo + d,
            hi: self.hi + d,
            ..self.clone()
        }
    }

    /// `(M^∨)_t = (M_{-t})^*`; x_i acts by transposes and w by `rho(w^{-1})^T`.
    pub fn dual(&self) -> GradedModule {
        let ring = &self.ring;
        let group = ring.group();
        let (lo, hi) = (-self.hi, -self.lo);
        let pieces = (lo..=hi)
            .map(|t| {
                let p = &self.pieces[(-t - self.lo) as usize];
                let x = (0..ring.nvars())
                    .map(|i| {
                        let d = ring.degree(i);
                        // (x_i f)(m) = f(x_i m) for m in M_{-t-d}.
                        match self.piece(-t - d) {
                            Some(q) if t + d >= lo => q.x[i].transpose(),
                            _ => RationalMatrix::zeros(0, p.dim),
                        }
                    })
                    .collect();
                let reps = group
                    .elements()
                    .map(|w| p.group[group.inverse(w)].transpose())
                    .collect();
                Piece {
                    dim: p.dim,
                    group: reps,
                    x,
                    labels: p.labels.iter().map(|l| format!("{l}^*")).collect(),
                }
            })
            .collect();
        GradedModule {
            ring: ring.clone(),
            lo,
            hi,
            zero_below: self.zero_above,
            zero_above: self.zero_below,
            pieces,
        }
    }

    /// Direct sum on the common range.
    pub fn direct_sum(&self, other: &GradedModule) -> Result<GradedModule> {
        if *self.ring != *other.ring {
            return Err(Error::RingMismatch("direct sum of modules over different rings".into()));
        }
        let (lo, hi) = (self.lo.max(other.lo), self.hi.min(other.hi));
        if lo > hi {
            return Err(Error::window(
                "modules realized on disjoint ranges",
                (self.lo, self.hi),
                (other.lo, other.hi),
            ));
        }
        let ring = &self.ring;
        let pieces = (lo..=hi)
            .map(|t| {
                let (a, b) = (self.piece(t).unwrap(), other.piece(t).unwrap());
                let dim = a.dim + b.dim;
                let group = a.group.iter().zip(&b.group).map(|(x, y)| block_diag(x, y)).collect();
                let x = (0..ring.nvars())
                    .map(|i| {
                        if (lo..=hi).contains(&(t + ring.degree(i))) {
                            block_diag(&a.x[i], &b.x[i])
                        } else {
                            RationalMatrix::zeros(0, dim)
                        }
                    })
                    .collect();
                let mut labels = a.labels.clone();
                labels.extend(b.labels.iter().map(|l| format!("{l}'")));
                Piece { dim, group, x, labels }
            })
            .collect();
        Ok(GradedModule {
            ring: ring.clone(),
            lo,
            hi,
            zero_below: self.zero_below && other.zero_below && lo == self.lo.min(other.lo),
            zero_above: self.zero_above && other.zero_above && hi == self.hi.max(other.hi),
            pieces,
        })
    }

    /// The same vector spaces and generator actions, over R with the group
    /// forgotten.
    pub fn restrict_to_polynomial_ring(&self) -> GradedModule {
        let sub = self.ring.polynomial_subring();
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece {
                dim: p.dim,
                group: vec![RationalMatrix::identity(p.dim)],
                x: p.x.clone(),
                labels: p.labels.clone(),
            })
            .collect();
        GradedModule {
            ring: sub,
            pieces,
            ..self.clone()
        }
    }

    /// Restriction to `[lo, hi]`, which must lie inside the realized range.
    pub fn truncate(&self, lo: i64, hi: i64) -> Result<GradedModule> {
        if lo < self.lo || hi > self.hi || lo > hi {
            return Err(Error::window(
                "truncation outside the realized range",
                (lo, hi),
                (self.lo, self.hi),
            ));
        }
        let ring = &self.ring;
        let pieces = (lo..=hi)
            .map(|t| {
                let mut p = self.piece(t).unwrap().clone();
                for i in 0..ring.nvars() {
                    if t + ring.degree(i) < lo {
                        p.x[i] = RationalMatrix::zeros(0, p.dim);
                    }
                }
                p
            })
            .collect();
        Ok(GradedModule {
            ring: ring.clone(),
            lo,
            hi,
            zero_below: self.zero_below && lo == self.lo,
            zero_above: self.zero_above && hi == self.hi,
            pieces,
        })
    }

    /// Submodule spanned degreewise by the columns of `bases` (ambient
    /// coordinates), with actions restricted; errors if not stable.
    pub fn submodule(&self, bases: &[Subspace]) -> Result<(GradedModule, ModuleMap)> {
        let ring = &self.ring;
        let group = ring.group();
        let mut pieces = Vec::with_capacity(bases.len());
        for t in self.lo..=self.hi {
            let idx = (t - self.lo) as usize;
            let s = &bases[idx];
            let p = &self.pieces[idx];
            let reps = group
                .elements()
                .map(|w| restrict_map(&p.group[w], s, s))
                .collect::<Result<Vec<_>>>()
                .map_err(|_| Error::Invariant(format!("degree {t}: subspace is not W-stable")))?;
            let mut x = Vec::with_capacity(ring.nvars());
            for i in 0..ring.nvars() {
                let target = t + ring.degree(i);
                match self.piece(target) {
                    Some(_) => {
                        let ts = &bases[(target - self.lo) as usize];
                        x.push(
                            restrict_map(&p.x[i], s, ts)
                                .map_err(|_| Error::Invariant(format!("degree {t}: subspace is not R-stable")))?,
                        );
                    }
                    None => x.push(RationalMatrix::zeros(0, s.dim())),
                }
            }
            let labels = s.basis().iter().map(|v| format_vector(v, &p.labels)).collect();
            pieces.push(Piece {
                dim: s.dim(),
                group: reps,
                x,
                labels,
            });
        }
        let sub = GradedModule {
            ring: ring.clone(),
            lo: self.lo,
            hi: self.hi,
            zero_below: self.zero_below,
            zero_above: self.zero_above,
            pieces,
        };
        let inclusion = ModuleMap {
            shift: 0,
            lo: self.lo,
            hi: self.hi,
            matrices: bases.iter().map(|s| s.basis_matrix()).collect(),
        };
        Ok((sub, inclusion))
    }
}

fn block_diag(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(a.rows(), a.cols(), b);
    m
}

/// `"2*a - 1/2*b"` from coordinates and labels.
pub fn format_vector(v: &[Rational], labels: &[String]) -> String {
    let mut out = String::new();
    for (c, l) in v.iter().zip(labels) {
        if c.is_zero() {
            continue;
        }
        let neg = rational::is_negative(c);
        let abs = if neg { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if abs.is_one() {
            out.push_str(l);
        } else {
            write!(out, "{}*{l}", rational::format(&abs)).unwrap();
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// A degreewise map `M_t -> N_{t + shift}` for `t` in `[lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleMap {
    pub shift: i64,
    pub lo: i64,
    pub hi: i64,
    pub matrices: Vec<RationalMatrix>,
}

impl ModuleMap {
    pub fn matrix(&self, t: i64) -> Option<&RationalMatrix> {
        if (self.lo..=self.hi).contains(&t) {
            Some(&self.matrices[(t - self.lo) as usize])
        } else {
            None
        }
    }

    pub fn identity(m: &GradedModule) -> ModuleMap {
        ModuleMap {
            shift: 0,
            lo: m.lo,
            hi: m.hi,
            matrices: m.pieces.iter().map(|p| RationalMatrix::identity(p.dim)).collect(),
        }
    }

    /// Checks shapes and commutation with every x_i and every group element
    /// wherever source and target degrees are realized.
    pub fn is_homomorphism(&self, source: &GradedModule, target: &GradedModule) -> bool {
        self.check(source, target).is_ok()
    }

    pub fn check(&self, source: &GradedModule, target: &GradedModule) -> Result<()> {
        let ring = source.ring();
        for t in self.lo..=self.hi {
            let f = &self.matrices[(t - self.lo) as usize];
            let (Some(ds), Some(dt)) = (source.dim(t), target.dim(t + self.shift)) else {
                return Err(Error::window(
                    "map defined outside the realized modules",
                    (self.lo, self.hi),
                    (source.lo, source.hi),
                ));
            };
            if f.rows() != dt || f.cols() != ds {
                return Err(Error::DimensionMismatch(format!(
                    "degree {t}: map is {}x{}, expected {dt}x{ds}",
                    f.rows(),
                    f.cols()
                )));
            }
            if ds == 0 {
                continue;
            }
            for w in ring.group().elements() {
                let lhs = &target.group_matrix(w, t + self.shift)? * f;
                let rhs = f * &source.group_matrix(w, t)?;
                if lhs != rhs {
                    return Err(Error::NotEquivariant(format!(
                        "degree {t}: map does not commute with {}",
                        ring.group().name(w)
                    )));
                }
            }
            for i in 0..ring.nvars() {
                let s = t + ring.degree(i);
                let Some(g) = self.matrix(s) else { continue };
                let (Ok(xs), Ok(xt)) = (source.x_matrix(i, t), target.x_matrix(i, t + self.shift)) else {
                    continue;
                };
                if &xt * f != g * &xs {
                    return Err(Error::Invariant(format!(
                        "degree {t}: map does not commute with {}",
                        ring.generators().names()[i]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn compose(&self, first: &ModuleMap) -> Result<ModuleMap> {
        let (lo, hi) = (first.lo.max(self.lo - first.shift), first.hi.min(self.hi - first.shift));
        let mut matrices = Vec::new();
        for t in lo..=hi {
            matrices.push(
                self.matrix(t + first.shift)
                    .unwrap()
                    .checked_mul(first.matrix(t).unwrap())?,
            );
        }
        Ok(ModuleMap {
            shift: self.shift + first.shift,
            lo,
            hi,
            matrices,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.matrices.iter().all(|m| m.is_zero())
    }
}

/// Degree-t maps `M -> N`, recorded by the images of M's generators: the
/// coordinate vector is the concatenation of images in `N_{deg g_j + t}`.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub t: i64,
    pub block_offsets: Vec<usize>,
    pub space: Subspace,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

fn hom_unknowns(m: &GradedModulePresentation, n: &GradedModule, t: i64) -> Result<(Vec<usize>, usize)> {
    let mut offsets = Vec::new();
    let mut total = 0;
    for (_, d) in m.generators() {
        offsets.push(total);
        total += n.dim(d + t).ok_or_else(|| n.unknown(d + t, "Hom"))?;
    }
    Ok((offsets, total))
}

fn hom_relation_system(
    m: &GradedModulePresentation,
    n: &GradedModule,
    t: i64,
    offsets: &[usize],
    total: usize,
) -> Result<RationalMatrix> {
    let mut system = RationalMatrix::zeros(0, total);
    for (rel, &d) in m.relations().iter().zip(m.relation_degrees()) {
        let rows = n.dim(d + t).ok_or_else(|| n.unknown(d + t, "Hom"))?;
        let mut block = RationalMatrix::zeros(rows, total);
        for (j, coeff) in rel.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let gd = m.generators()[j].1;
            let a = n.element_action(coeff, gd + t, d - gd)?;
            block.set_block(0, offsets[j], &a);
        }
        system = system.vstack(&block);
    }
    Ok(system)
}

/// `Hom_{R[W]}(M, N)_t`: generator images in N that satisfy every relation.
/// Equivariance is part of R[W]-linearity, since the relations and the
/// solution space are taken over the whole twisted ring.
pub fn hom_graded(m: &GradedModulePresentation, n: &GradedModule, t: i64) -> Result<HomSpace> {
    if *m.ring() != *n.ring() {
        return Err(Error::RingMismatch("Hom between modules over different rings".into()));
    }
    let (offsets, total) = hom_unknowns(m, n, t)?;
    let system = hom_relation_system(m, n, t, &offsets, total)?;
    Ok(HomSpace {
        t,
        block_offsets: offsets,
        space: system.kernel_basis(),
    })
}

/// `Hom_{R[W]}(M, N)_t` computed the other way round: first `Hom_R` of the
/// restrictions, then the W-invariants under `(w f)(m) = w f(w^{-1} m)` via
/// the averaging projector. The result is in the coordinates of the
/// restricted presentation (one block per generator `g·u_j`).
pub fn hom_graded_via_invariants(m: &GradedModulePresentation, n: &GradedModule, t: i64) -> Result<HomSpace> {
    if *m.ring() != *n.ring() {
        return Err(Error::RingMismatch("Hom between modules over different rings".into()));
    }
    let group = m.ring().group().clone();
    let order = group.order();
    let mr = m.restrict_to_polynomial_ring();
    let nr = n.restrict_to_polynomial_ring();
    let (offsets, total) = hom_unknowns(&mr, &nr, t)?;
    let system = hom_relation_system(&mr, &nr, t, &offsets, total)?;
    let hom_r = system.kernel_basis();
    // Block (v, j) of w·f is rho_N(w) applied to block (w^{-1} v, j) of f.
    let reps: Vec<RationalMatrix> = group
        .elements()
        .map(|w| {
            let mut mat = RationalMatrix::zeros(total, total);
            for (j, (_, d)) in m.generators().iter().enumerate() {
                let rho = n.group_matrix(w, d + t)?;
                for v in group.elements() {
                    let src = offsets[j * order + group.mul(group.inverse(w), v)];
                    let dst = offsets[j * order + v];
                    for a in 0..rho.rows() {
                        for b in 0..rho.cols() {
                            mat.set(dst + a, src + b, rho.get(a, b).clone());
                        }
                    }
                }
            }
            Ok(mat)
        })
        .collect::<Result<_>>()?;
    let rep = Representation::new_unchecked(group, total, reps);
    let e = averaging_idempotent(&rep);
    let images: Vec<Vec<Rational>> = hom_r.basis().iter().map(|v| e.mul_vec(v)).collect();
    Ok(HomSpace {
        t,
        block_offsets: offsets,
        space: Subspace::span(total, &images),
    })
}

/// Result of the torsion functor: Γ_𝔪 M realized on the same range as M,
/// with its inclusion into M.
#[derive(Clone, Debug)]
pub struct TorsionSubmodule {
    pub module: GradedModule,
    pub inclusion: ModuleMap,
}

fn torsion_spaces(m: &GradedModule, band_top: i64) -> Result<Vec<Subspace>> {
    let ring = m.ring();
    let mut spaces: Vec<Subspace> = Vec::with_capacity(m.pieces.len());
    for t in m.lo..=m.hi {
        let p = &m.pieces[(t - m.lo) as usize];
        if !m.zero_below && t < band_top {
            spaces.push(Subspace::zero(p.dim));
            continue;
        }
        let mut system = RationalMatrix::zeros(0, p.dim);
        for i in 0..ring.nvars() {
            let target = t + ring.degree(i);
            if target < m.lo {
                continue;
            }
            let a = &spaces[(target - m.lo) as usize];
            let q = Quotient::new(&Subspace::full(a.ambient_dim()), a.basis())?;
            system = system.vstack(&(&q.projection * &p.x[i]));
        }
        spaces.push(if system.rows() == 0 {
            Subspace::full(p.dim)
        } else {
            system.kernel_basis()
        });
    }
    Ok(spaces)
}

/// Γ_𝔪 M = {x : 𝔪^s x = 0 for s large}, computed bottom-up as
/// `A_t = ∩_i x_i^{-1}(A_{t + deg x_i})`.
///
/// If M is certified zero below its range this is exact. Otherwise A is
/// started at zero on a bottom band one generator-step wide, the computation
/// is repeated with the band raised by one step, and any disagreement inside
/// the reported window is a window error.
pub fn torsion_submodule(m: &GradedModule, window: &DegreeWindow) -> Result<TorsionSubmodule> {
    let step = m.ring().max_step();
    if !m.contains_degree(window.t_min) || !m.contains_degree(window.t_max) {
        return Err(Error::window(
            "torsion: module not realized on the reported window",
            (window.t_min, window.t_max),
            (m.lo, m.hi),
        ));
    }
    let band = m.lo + step;
    let spaces = torsion_spaces(m, band)?;
    if !m.zero_below {
        if band + step > window.t_min {
            return Err(Error::window(
                "torsion: no room below the reported window to confirm stabilization",
                (window.t_min - 2 * step, window.t_max),
                (m.lo, m.hi),
            ));
        }
        let check = torsion_spaces(m, band + step)?;
        for t in window.t_min..=window.t_max {
            let idx = (t - m.lo) as usize;
            if spaces[idx].dim() != check[idx].dim() {
                return Err(Error::window(
                    format!("torsion: degree {t} has not stabilized; enlarge the margin"),
                    (m.lo - 2 * step, m.hi),
                    (m.lo, m.hi),
                ));
            }
        }
    }
    let (module, inclusion) = m.submodule(&spaces)?;
    Ok(TorsionSubmodule { module, inclusion })
}

/// True iff Γ_𝔪 M = M in every reported degree.
pub fn is_torsion(m: &GradedModule, window: &DegreeWindow) -> Result<bool> {
    let gamma = torsion_submodule(m, window)?;
    Ok((window.t_min..=window.t_max).all(|t| gamma.module.dim(t) == m.dim(t)))
}

/// Degree-t element of `N` given by its coordinates; zero-dimensional if the
/// degree is certified empty.
pub fn zero_vector(n: &GradedModule, t: i64) -> Option<Vec<Rational>> {
    n.dim(t).map(|d| vec![Rational::zero(); d])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{o2_ring, polynomial_ring};

    #[test]
    fn truncated_polynomial_ring() {
        let ring = polynomial_ring(1);
        let m = GradedModulePresentation::parse(ring, vec![("u".into(), 0)], &["x1^2*u".into()]).unwrap();
        let real = m.realize(-6, 0).unwrap();
        assert_eq!(
            real.dims(),
            vec![(-6, 0), (-5, 0), (-4, 0), (-3, 0), (-2, 1), (-1, 0), (0, 1)]
        );
        assert!(real.zero_below());
        assert!(real.zero_above());
        real.validate().unwrap();
    }

    #[test]
    fn free_and_residue_modules() {
        let ring = o2_ring();
        let free = GradedModulePresentation::free(ring.clone(), 0).realize(-6, 0).unwrap();
        assert!(free.dims().iter().all(|&(t, d)| d == if t % 2 == 0 { 2 } else { 0 }));
        assert!(!free.zero_below());
        free.validate().unwrap();
        let qw = GradedModulePresentation::residue_regular(ring).realize(-6, 2).unwrap();
        assert_eq!(qw.support(), vec![0]);
        assert_eq!(qw.dim(0), Some(2));
        assert!(qw.zero_below());
        qw.validate().unwrap();
    }

    #[test]
    fn inhomogeneous_relations_are_rejected() {
        let ring = polynomial_ring(2);
        let err = GradedModulePresentation::parse(ring, vec![("u".into(), 0)], &["x1*u + x1^2*u".into()]).unwrap_err();
        assert!(matches!(err, Error::Inhomogeneous { index: 0, .. }));
    }

    #[test]
    fn hom_examples() {
        let ring = o2_ring();
        let qw = GradedModulePresentation::residue_regular(ring.clone());
        let free = GradedModulePresentation::free(ring.clone(), 0);
        let qw_real = qw.realize(-8, 4).unwrap();
        let free_real = free.realize(-8, 4).unwrap();
        assert_eq!(hom_graded(&qw, &qw_real, 0).unwrap().dim(), 2);
        assert_eq!(hom_graded(&qw, &free_real, 0).unwrap().dim(), 0);
        for t in -6..=0 {
            assert_eq!(hom_graded(&free, &qw_real, t).unwrap().dim(), qw_real.dim(t).unwrap());
            assert_eq!(
                hom_graded(&qw, &qw_real, t).unwrap().dim(),
                hom_graded_via_invariants(&qw, &qw_real, t).unwrap().dim()
            );
        }
    }

    #[test]
    fn dual_and_suspension() {
        let ring = o2_ring();
        let qw = GradedModulePresentation::residue_regular(ring.clone())
            .realize(-4, 4)
            .unwrap();
        let d = qw.dual();
        d.validate().unwrap();
        assert_eq!(d.support(), vec![0]);
        let free = GradedModulePresentation::free(ring, 0).realize(-8, 0).unwrap();
        let fd = free.dual();
        fd.validate().unwrap();
        for t in 0..=8 {
            assert_eq!(fd.dim(t), free.dim(-t));
        }
        let dd = fd.dual();
        assert_eq!(dd.dims(), free.dims());
        assert_eq!(qw.suspend(3).support(), vec![3]);
    }

    #[test]
    fn torsion_examples() {
        let ring = polynomial_ring(1);
        let w = DegreeWindow::new(-6, 0, 8).unwrap();
        let trunc = GradedModulePresentation::parse(ring.clone(), vec![("u".into(), 0)], &["x1^2*u".into()]).unwrap();
        let free = GradedModulePresentation::free(ring.clone(), 0);
        let sum = trunc.direct_sum(&free).unwrap().realize_window(&w).unwrap();
        let gamma = torsion_submodule(&sum, &w).unwrap();
        assert_eq!(gamma.module.dim(0), Some(1));
        assert_eq!(gamma.module.dim(-2), Some(1));
        assert_eq!(gamma.module.dim(-4), Some(0));
        assert!(gamma.inclusion.is_homomorphism(&gamma.module, &sum));
        assert!(!is_torsion(&sum, &w).unwrap());
        let fr = free.realize_window(&w).unwrap();
        assert_eq!(torsion_submodule(&fr, &w).unwrap().module.total_dim(), 0);
    }
}
