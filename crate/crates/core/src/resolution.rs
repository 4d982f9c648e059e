//! Koszul complexes, minimal projective resolutions over R[W], realized
//! chain complexes and exactness checks.
//!
//! A term of a resolution is `R ⊗ V` for a graded W-representation V, with
//! W acting diagonally: `w(p ⊗ v) = w(p) ⊗ w v`. It is projective over R[W],
//! and free when V is a sum of regular representations.

use std::sync::Arc;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{maschke_split, Representation};
use crate::linalg::{homology, restrict_map, Quotient, RationalMatrix, Subspace};
use crate::module::{DegreeWindow, GradedModule, GradedModulePresentation, ModuleMap, Piece};
use crate::par;
use crate::rational::Rational;
use crate::ring::{Monomial, Polynomial, RingElement, TwistedGroupRing};

/// `R ⊗ V`: one entry per basis vector of V.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectiveTerm {
    pub degrees: Vec<i64>,
    /// Matrix of each group element on V; block diagonal by degree.
    pub action: Vec<RationalMatrix>,
    pub labels: Vec<String>,
}

impl ProjectiveTerm {
    pub fn zero(order: usize) -> Self {
        ProjectiveTerm {
            degrees: Vec::new(),
            action: vec![RationalMatrix::zeros(0, 0); order],
            labels: Vec::new(),
        }
    }

    /// Rank over R, i.e. dim V.
    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Rank over R[W] when V is a sum of regular representations.
    pub fn free_rank(&self, ring: &TwistedGroupRing) -> Option<usize> {
        let order = ring.group().order();
        let mut rest: Vec<i64> = self.degrees.clone();
        rest.sort();
        rest.dedup();
        let mut total = 0;
        for d in rest {
            let idx: Vec<usize> = (0..self.rank()).filter(|&k| self.degrees[k] == d).collect();
            // V_d is a multiple of the regular representation iff its character
            // vanishes off the identity and equals dim at the identity.
            for w in ring.group().elements() {
                let m = self.action[w].select_rows(&idx).select_columns(&idx);
                let trace: Rational = (0..idx.len()).map(|i| m.get(i, i).clone()).sum();
                let expected = if w == ring.group().identity() {
                    Rational::from_integer(idx.len().into())
                } else {
                    Rational::zero()
                };
                if trace != expected {
                    return None;
                }
            }
            if !idx.len().is_multiple_of(order) {
                return None;
            }
            total += idx.len() / order;
        }
        Some(total)
    }

    pub fn representation(&self, ring: &TwistedGroupRing) -> Representation {
        Representation::new_unchecked(ring.group().clone(), self.rank(), self.action.clone())
    }

    /// Generator degrees, highest first, with multiplicity.
    pub fn sorted_degrees(&self) -> Vec<i64> {
        let mut d = self.degrees.clone();
        d.sort_by(|a, b| b.cmp(a));
        d
    }

    fn layout(&self, ring: &TwistedGroupRing, t: i64) -> (Vec<usize>, usize) {
        let mut offsets = Vec::with_capacity(self.rank());
        let mut total = 0;
        for &e in &self.degrees {
            offsets.push(total);
            total += ring.dim_polynomial(t - e);
        }
        (offsets, total)
    }

    /// Realizes `R ⊗ V` on `[lo, hi]`; basis `(k, monomial)` ordered by `k`
    /// then monomial.
    pub fn realize(&self, ring: &Arc<TwistedGroupRing>, lo: i64, hi: i64) -> GradedModule {
        let group = ring.group().clone();
        let pieces = par::map((lo..=hi).collect::<Vec<_>>(), |t| {
            let (offsets, dim) = self.layout(ring, t);
            let x = (0..ring.nvars())
                .map(|i| {
                    let target = t + ring.degree(i);
                    if target < lo {
                        return RationalMatrix::zeros(0, dim);
                    }
                    let (toff, tdim) = self.layout(ring, target);
                    let mut m = RationalMatrix::zeros(tdim, dim);
                    for (k, &e) in self.degrees.iter().enumerate() {
                        for (a, mono) in ring.monomials(t - e).iter().enumerate() {
                            let b = ring.monomial_index(&mono.times_var(i));
                            m.set(toff[k] + b, offsets[k] + a, Rational::one());
                        }
                    }
                    m
                })
                .collect();
            let reps = group
                .elements()
                .map(|w| {
                    let mut m = RationalMatrix::zeros(dim, dim);
                    let rho = &self.action[w];
                    for (k, &e) in self.degrees.iter().enumerate() {
                        let act = ring.action_matrix(w, t - e);
                        for l in 0..self.rank() {
                            let c = rho.get(l, k);
                            if c.is_zero() {
                                continue;
                            }
                            for a in 0..act.cols() {
                                for b in 0..act.rows() {
                                    let q = act.get(b, a);
                                    if !q.is_zero() {
                                        m.add_to(offsets[l] + b, offsets[k] + a, &(q * c));
                                    }
                                }
                            }
                        }
                    }
                    m
                })
                .collect();
            let mut labels = Vec::with_capacity(dim);
            for (k, &e) in self.degrees.iter().enumerate() {
                for mono in ring.monomials(t - e).iter() {
                    let mstr = mono.format(ring.generators().names());
                    labels.push(if mstr == "1" {
                        self.labels[k].clone()
                    } else {
                        format!("{mstr}*{}", self.labels[k])
                    });
                }
            }
            Piece {
                dim,
                group: reps,
                x,
                labels,
            }
        });
        let zero_above = self.degrees.iter().all(|&e| e <= hi);
        let zero_below = ring.nvars() == 0 && self.degrees.iter().all(|&e| e >= lo);
        GradedModule::from_pieces_unchecked(ring.clone(), lo, zero_below, zero_above, pieces)
    }
}

/// `d(1 ⊗ v_k) = Σ_l images[k][l] ⊗ v'_l`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Differential {
    pub images: Vec<Vec<Polynomial>>,
}

impl Differential {
    /// Matrix of the differential in degree `t`.
    pub fn matrix(
        &self,
        ring: &TwistedGroupRing,
        source: &ProjectiveTerm,
        target: &ProjectiveTerm,
        t: i64,
    ) -> RationalMatrix {
        let (soff, sdim) = source.layout(ring, t);
        let (toff, tdim) = target.layout(ring, t);
        let mut m = RationalMatrix::zeros(tdim, sdim);
        for (k, &e) in source.degrees.iter().enumerate() {
            for (a, mono) in ring.monomials(t - e).iter().enumerate() {
                for (l, p) in self.images[k].iter().enumerate() {
                    for (m2, c) in p.terms() {
                        let b = ring.monomial_index(&mono.mul(m2));
                        m.add_to(toff[l] + b, soff[k] + a, c);
                    }
                }
            }
        }
        m
    }

    /// True if no entry has a nonzero constant term.
    pub fn is_minimal(&self) -> bool {
        self.images.iter().flatten().all(|p| p.in_augmentation_ideal())
    }
}

/// A projective resolution `... -> P_1 -> P_0 -> M`, possibly truncated
/// below `lo`. In every degree ≥ `lo` the truncation agrees with the full
/// resolution; `complete` certifies that nothing lies below.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolutionData {
    pub lo: i64,
    pub hi: i64,
    pub complete: bool,
    pub terms: Vec<ProjectiveTerm>,
    /// `differentials[s - 1]` is `d_s: P_s -> P_{s-1}`.
    pub differentials: Vec<Differential>,
    /// Images of the generators of `P_0` in M, in M's coordinates.
    #[serde(with = "crate::rational::serde_rational_vecs")]
    pub augmentation: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug)]
pub struct Resolution {
    ring: Arc<TwistedGroupRing>,
    data: ResolutionData,
}

impl Resolution {
    pub fn from_data(ring: Arc<TwistedGroupRing>, data: ResolutionData) -> Result<Self> {
        let order = ring.group().order();
        for (s, term) in data.terms.iter().enumerate() {
            if term.action.len() != order
                || term.labels.len() != term.rank()
                || term
                    .action
                    .iter()
                    .any(|m| m.rows() != term.rank() || m.cols() != term.rank())
            {
                return Err(Error::DimensionMismatch(format!("term {s} has inconsistent shapes")));
            }
        }
        if data.differentials.len() + 1 != data.terms.len().max(1) {
            return Err(Error::DimensionMismatch("wrong number of differentials".into()));
        }
        for (s, d) in data.differentials.iter().enumerate() {
            let (src, tgt) = (&data.terms[s + 1], &data.terms[s]);
            if d.images.len() != src.rank() || d.images.iter().any(|row| row.len() != tgt.rank()) {
                return Err(Error::DimensionMismatch(format!(
                    "differential {} has inconsistent shape",
                    s + 1
                )));
            }
            for row in &d.images {
                for p in row {
                    if p.terms().any(|(m, _)| m.nvars() != ring.nvars()) {
                        return Err(Error::RingMismatch("differential entry over another ring".into()));
                    }
                }
            }
        }
        Ok(Resolution { ring, data })
    }

    pub fn ring(&self) -> &Arc<TwistedGroupRing> {
        &self.ring
    }

    pub fn data(&self) -> &ResolutionData {
        &self.data
    }

    /// Number of nonzero terms minus one; -1 for the zero module.
    pub fn length(&self) -> i64 {
        self.data
            .terms
            .iter()
            .rposition(|t| !t.is_zero())
            .map_or(-1, |s| s as i64)
    }

    pub fn terms(&self) -> &[ProjectiveTerm] {
        &self.data.terms
    }

    pub fn term(&self, s: usize) -> Option<&ProjectiveTerm> {
        self.data.terms.get(s)
    }

    pub fn differential(&self, s: usize) -> Option<&Differential> {
        if s == 0 {
            None
        } else {
            self.data.differentials.get(s - 1)
        }
    }

    pub fn is_complete(&self) -> bool {
        self.data.complete
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.data.terms.iter().map(|t| t.rank()).collect()
    }

    /// R[W]-ranks, where every term is free.
    pub fn free_ranks(&self) -> Option<Vec<usize>> {
        self.data.terms.iter().map(|t| t.free_rank(&self.ring)).collect()
    }

    pub fn is_minimal(&self) -> bool {
        self.data.differentials.iter().all(|d| d.is_minimal())
    }

    /// Checks that every differential commutes with the group action:
    /// `d(w v_k) = w d(v_k)` as elements of `P_{s-1}`.
    pub fn check_equivariance(&self) -> Result<()> {
        let ring = &self.ring;
        for (s, d) in self.data.differentials.iter().enumerate() {
            let (src, tgt) = (&self.data.terms[s + 1], &self.data.terms[s]);
            for w in ring.group().elements() {
                for k in 0..src.rank() {
                    // d(w v_k) = Σ_j rho(w)_{jk} d(v_j)
                    let mut lhs = vec![Polynomial::zero(); tgt.rank()];
                    for j in 0..src.rank() {
                        let c = src.action[w].get(j, k);
                        if c.is_zero() {
                            continue;
                        }
                        for (slot, p) in lhs.iter_mut().zip(&d.images[j]) {
                            *slot = slot.add(&p.scale(c));
                        }
                    }
                    // w(Σ_l p_l ⊗ v_l) = Σ_l w(p_l) ⊗ Σ_m rho(w)_{ml} v_m
                    let mut rhs = vec![Polynomial::zero(); tgt.rank()];
                    for l in 0..tgt.rank() {
                        let wp = ring.act(w, &d.images[k][l]);
                        for (m, slot) in rhs.iter_mut().enumerate() {
                            let c = tgt.action[w].get(m, l);
                            if !c.is_zero() {
                                *slot = slot.add(&wp.scale(c));
                            }
                        }
                    }
                    if lhs != rhs {
                        return Err(Error::NotEquivariant(format!(
                            "differential {} does not commute with {} on generator {}",
                            s + 1,
                            ring.group().name(w),
                            src.labels[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Terms `P_n, ..., P_0` realized on `[lo, hi]` with their differentials,
    /// in arrow order.
    pub fn realize(&self, lo: i64, hi: i64) -> RealizedComplex {
        let ring = &self.ring;
        let n = self.data.terms.len();
        let mut terms = Vec::with_capacity(n);
        let mut maps = Vec::with_capacity(n.saturating_sub(1));
        for s in (0..n).rev() {
            terms.push(self.data.terms[s].realize(ring, lo, hi));
            if s > 0 {
                let d = &self.data.differentials[s - 1];
                let matrices = par::map((lo..=hi).collect::<Vec<_>>(), |t| {
                    d.matrix(ring, &self.data.terms[s], &self.data.terms[s - 1], t)
                });
                maps.push(ModuleMap {
                    shift: 0,
                    lo,
                    hi,
                    matrices,
                });
            }
        }
        RealizedComplex { terms, maps }
    }

    /// Matrix of the augmentation `P_0 -> M` in degree `t`.
    pub fn augmentation_matrix(&self, module: &GradedModule, t: i64) -> Result<RationalMatrix> {
        let ring = &self.ring;
        let p0 = match self.data.terms.first() {
            Some(p) => p,
            None => return Ok(RationalMatrix::zeros(module.dim(t).unwrap_or(0), 0)),
        };
        let (offsets, dim) = p0.layout(ring, t);
        let rows = module.dim(t).ok_or_else(|| {
            Error::window(
                "augmentation outside the module range",
                (t, t),
                (module.lo(), module.hi()),
            )
        })?;
        let mut m = RationalMatrix::zeros(rows, dim);
        for (k, &e) in p0.degrees.iter().enumerate() {
            let gen = &self.data.augmentation[k];
            for (a, mono) in ring.monomials(t - e).iter().enumerate() {
                let image = module.monomial_action(mono, e)?.mul_vec(gen);
                for (i, q) in image.into_iter().enumerate() {
                    m.set(i, offsets[k] + a, q);
                }
            }
        }
        Ok(m)
    }

    /// `P_n -> ... -> P_0 -> M` on `[lo, hi]`.
    pub fn realize_augmented(&self, module: &GradedModule, lo: i64, hi: i64) -> Result<RealizedComplex> {
        let mut complex = self.realize(lo, hi);
        let m = module.truncate(lo.max(module.lo()), hi.min(module.hi()))?;
        if m.lo() != lo || m.hi() != hi {
            return Err(Error::window(
                "module not realized on the requested range",
                (lo, hi),
                (module.lo(), module.hi()),
            ));
        }
        let matrices = (lo..=hi)
            .map(|t| self.augmentation_matrix(module, t))
            .collect::<Result<_>>()?;
        complex.maps.push(ModuleMap {
            shift: 0,
            lo,
            hi,
            matrices,
        });
        complex.terms.push(m);
        Ok(complex)
    }

    /// Relabels nothing but shifts every degree by `d` (resolution of Σ^d M).
    pub fn suspend(&self, d: i64) -> Resolution {
        let mut data = self.data.clone();
        data.lo += d;
        data.hi += d;
        for term in &mut data.terms {
            for e in &mut term.degrees {
                *e += d;
            }
        }
        Resolution {
            ring: self.ring.clone(),
            data,
        }
    }
}

/// A finite complex of realized modules, listed in arrow order:
/// `maps[j]: terms[j] -> terms[j + 1]`.
#[derive(Clone, Debug)]
pub struct RealizedComplex {
    pub terms: Vec<GradedModule>,
    pub maps: Vec<ModuleMap>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub lo: i64,
    pub hi: i64,
    /// `homology[j]` lists `(t, dim H)` for every degree with nonzero homology
    /// at position `j`.
    pub homology: Vec<Vec<(i64, usize)>>,
    pub exact: bool,
}

impl RealizedComplex {
    /// Dualizes every term and transposes every map; the order reverses.
    pub fn dual(&self) -> RealizedComplex {
        let terms = self.terms.iter().rev().map(|m| m.dual()).collect();
        let maps = self
            .maps
            .iter()
            .rev()
            .map(|f| ModuleMap {
                shift: -f.shift,
                lo: -(f.hi + f.shift),
                hi: -(f.lo + f.shift),
                matrices: f.matrices.iter().rev().map(|m| m.transpose()).collect(),
            })
            .collect();
        RealizedComplex { terms, maps }
    }

    /// Every map is a module homomorphism.
    pub fn check_maps(&self) -> Result<()> {
        for (j, f) in self.maps.iter().enumerate() {
            f.check(&self.terms[j], &self.terms[j + 1])?;
        }
        Ok(())
    }

    fn map_at(&self, j: usize, t: i64) -> Option<&RationalMatrix> {
        self.maps.get(j).and_then(|f| f.matrix(t))
    }

    /// Homology at every position and degree in `[lo, hi]`; fails with
    /// `NotAComplex` if some composite of consecutive maps is nonzero.
    pub fn verify_exactness(&self, lo: i64, hi: i64) -> Result<ExactnessReport> {
        let n = self.terms.len();
        let rows = par::try_map_degrees(lo, hi, |t| {
            let mut out = Vec::with_capacity(n);
            for j in 0..n {
                let dim = self.terms[j].dim(t).ok_or_else(|| {
                    Error::window(
                        "exactness check outside the realized range",
                        (lo, hi),
                        (self.terms[j].lo(), self.terms[j].hi()),
                    )
                })?;
                let d_out = match self.map_at(j, t) {
                    Some(m) => m.clone(),
                    None => RationalMatrix::zeros(0, dim),
                };
                let d_in = match j.checked_sub(1).and_then(|i| self.map_at(i, t)) {
                    Some(m) => m.clone(),
                    None => RationalMatrix::zeros(dim, 0),
                };
                let h = homology(&d_out, &d_in).map_err(|e| match e {
                    Error::NotAComplex { .. } => Error::NotAComplex { position: j, degree: t },
                    other => other,
                })?;
                out.push(h.dim);
            }
            Ok(out)
        })?;
        let mut homology_table = vec![Vec::new(); n];
        for (t, dims) in rows {
            for (j, d) in dims.into_iter().enumerate() {
                if d > 0 {
                    homology_table[j].push((t, d));
                }
            }
        }
        let exact = homology_table.iter().all(|h| h.is_empty());
        Ok(ExactnessReport {
            lo,
            hi,
            homology: homology_table,
            exact,
        })
    }
}

/// New generators in one degree: `(degree, vectors, action on their span)`.
type GeneratorBlock = (i64, Vec<Vec<Rational>>, Vec<RationalMatrix>);

/// Minimal generators of a submodule `K` (given degreewise on the module's
/// range): a W-stable complement of `(𝔪K)_t = Σ_i x_i K_{t - deg x_i}` in each
/// `K_t`, chosen by Maschke averaging. Returns `(degree, vectors, action)`.
fn minimal_generators(
    m: &GradedModule,
    kernels: &[Subspace],
) -> Result<Vec<GeneratorBlock>> {
    let ring = m.ring();
    let (lo, hi) = (m.lo(), m.hi());
    let found = par::try_map_degrees(lo, hi, |t| {
        let k = &kernels[(t - lo) as usize];
        if k.dim() == 0 {
            return Ok(None);
        }
        let mut decomposables = Vec::new();
        for i in 0..ring.nvars() {
            let src = t - ring.degree(i);
            if src > hi {
                continue;
            }
            let x = m.x_matrix(i, src)?;
            for v in kernels[(src - lo) as usize].basis() {
                decomposables.push(x.mul_vec(v));
            }
        }
        let q = Quotient::new(k, &decomposables)?;
        if q.dim() == 0 {
            return Ok(None);
        }
        let group = ring.group().clone();
        let kb = k.basis_matrix();
        let krep = Representation::new_unchecked(
            group.clone(),
            k.dim(),
            group
                .elements()
                .map(|w| restrict_map(&m.group_matrix(w, t)?, k, k))
                .collect::<Result<_>>()?,
        );
        let reps = RationalMatrix::from_columns(&q.representatives, k.ambient_dim());
        let qrep = Representation::new_unchecked(
            group.clone(),
            q.dim(),
            group
                .elements()
                .map(|w| Ok(&(&q.projection * &m.group_matrix(w, t)?) * &reps))
                .collect::<Result<_>>()?,
        );
        let p = &q.projection * &kb;
        let s = maschke_split(&krep, &qrep, &p)?;
        let gens = (&kb * &s).columns();
        Ok(Some((t, gens, qrep.matrices().to_vec())))
    })?;
    let mut out: Vec<_> = found.into_iter().filter_map(|(_, x)| x).collect();
    out.sort_by_key(|g| std::cmp::Reverse(g.0));
    Ok(out)
}

fn polynomials_of(ring: &TwistedGroupRing, term: &ProjectiveTerm, t: i64, v: &[Rational]) -> Vec<Polynomial> {
    let mut out = Vec::with_capacity(term.rank());
    let mut offset = 0;
    for &e in &term.degrees {
        let mons = ring.monomials(t - e);
        let mut p = Polynomial::zero();
        for (a, mono) in mons.iter().enumerate() {
            p.add_term(mono.clone(), v[offset + a].clone());
        }
        offset += mons.len();
        out.push(p);
    }
    out
}

fn assemble_term(
    ring: &TwistedGroupRing,
    step: usize,
    gens: &[GeneratorBlock],
) -> ProjectiveTerm {
    let order = ring.group().order();
    let rank: usize = gens.iter().map(|g| g.1.len()).sum();
    let mut degrees = Vec::with_capacity(rank);
    let mut labels = Vec::with_capacity(rank);
    let mut action = vec![RationalMatrix::zeros(rank, rank); order];
    let mut offset = 0;
    for (t, vecs, mats) in gens {
        for (k, _) in vecs.iter().enumerate() {
            degrees.push(*t);
            labels.push(format!("g{step}_{}{}", degree_tag(*t), k));
        }
        for w in 0..order {
            action[w].set_block(offset, offset, &mats[w]);
        }
        offset += vecs.len();
    }
    ProjectiveTerm {
        degrees,
        action,
        labels,
    }
}

fn degree_tag(t: i64) -> String {
    if t < 0 {
        format!("m{}_", -t)
    } else {
        format!("{t}_")
    }
}

/// Minimal projective resolution of a realized module, exact in every degree
/// of the module's range. Stops when the kernel vanishes or after
/// `max_steps` terms. A term beyond `P_r` is an invariant violation: R[W]
/// has global dimension r.
pub fn resolve_realized(module: &GradedModule, max_steps: Option<usize>) -> Result<Resolution> {
    let ring = module.ring().clone();
    let r = ring.nvars();
    let (lo, hi) = (module.lo(), module.hi());
    let limit = max_steps.unwrap_or(usize::MAX);
    let mut terms: Vec<ProjectiveTerm> = Vec::new();
    let mut differentials: Vec<Differential> = Vec::new();
    let mut augmentation = Vec::new();

    let full: Vec<Subspace> = module.pieces().iter().map(|p| Subspace::full(p.dim)).collect();
    let gens = minimal_generators(module, &full)?;
    let p0 = assemble_term(&ring, 0, &gens);
    for (_, vecs, _) in &gens {
        augmentation.extend(vecs.iter().cloned());
    }
    terms.push(p0);

    let first = Resolution {
        ring: ring.clone(),
        data: ResolutionData {
            lo,
            hi,
            complete: false,
            terms: terms.clone(),
            differentials: Vec::new(),
            augmentation: augmentation.clone(),
        },
    };
    let mut kernels: Vec<Subspace> =
        par::try_map_degrees(lo, hi, |t| Ok(first.augmentation_matrix(module, t)?.kernel_basis()))?
            .into_iter()
            .map(|(_, k)| k)
            .collect();

    let mut s = 1;
    while s < limit && kernels.iter().any(|k| k.dim() > 0) {
        if s > r {
            return Err(Error::Invariant(format!(
                "resolution has a nonzero term P_{s} beyond the global dimension {r}"
            )));
        }
        let prev = terms[s - 1].clone();
        let amb = prev.realize(&ring, lo, hi);
        let gens = minimal_generators(&amb, &kernels)?;
        let term = assemble_term(&ring, s, &gens);
        let mut images = Vec::with_capacity(term.rank());
        for (t, vecs, _) in &gens {
            for v in vecs {
                images.push(polynomials_of(&ring, &prev, *t, v));
            }
        }
        let d = Differential { images };
        kernels = par::map((lo..=hi).collect::<Vec<_>>(), |t| {
            d.matrix(&ring, &term, &prev, t).kernel_basis()
        });
        terms.push(term);
        differentials.push(d);
        s += 1;
    }
    let complete = kernels.iter().all(|k| k.dim() == 0)
        && module.zero_below()
        && module.zero_above()
        && module
            .support_range()
            .is_none_or(|(bottom, _)| lo <= bottom + ring.total_degree());
    Ok(Resolution {
        ring,
        data: ResolutionData {
            lo,
            hi,
            complete,
            terms,
            differentials,
            augmentation,
        },
    })
}

/// Lowest degree `lo` such that a resolution computed on `[lo, ..]` contains
/// every generator, when the module has certified finite support.
pub fn complete_resolution_floor(ring: &TwistedGroupRing, support_lo: i64) -> i64 {
    support_lo + ring.total_degree()
}

/// Minimal projective resolution of a presentation.
///
/// If the module has finite support (found by searching `window.margin`
/// plus the window width below the lowest generator) the resolution is
/// complete. Otherwise it is exact on `[window.lo(), ..]`, and a generator
/// found in the bottom guard band of width max|deg x_i| is reported as a
/// window error because further syzygies may lie below.
pub fn minimal_free_resolution(m: &GradedModulePresentation, window: &DegreeWindow) -> Result<Resolution> {
    let ring = m.ring().clone();
    let Some(top) = m.max_generator_degree() else {
        return Ok(Resolution {
            ring: ring.clone(),
            data: ResolutionData {
                lo: window.lo(),
                hi: window.hi(),
                complete: true,
                terms: vec![ProjectiveTerm::zero(ring.group().order())],
                differentials: Vec::new(),
                augmentation: Vec::new(),
            },
        });
    };
    let hi = top.max(window.hi());
    let depth = window.margin + (window.t_max - window.t_min);
    if let Some((bottom, _)) = m.finite_support(depth)? {
        let lo = complete_resolution_floor(&ring, bottom).min(window.lo());
        let module = m.realize(lo, hi)?;
        return resolve_realized(&module, None);
    }
    let lo = window.lo();
    let module = m.realize(lo, hi)?;
    let res = resolve_realized(&module, None)?;
    check_guard_band(&res)?;
    Ok(res)
}

/// Window error if a generator of a non-certified resolution sits within one
/// generator step of the bottom of its range.
pub fn check_guard_band(res: &Resolution) -> Result<()> {
    if res.is_complete() {
        return Ok(());
    }
    let step = res.ring.max_step();
    let lo = res.data.lo;
    for (s, term) in res.data.terms.iter().enumerate() {
        if let Some(&e) = term.degrees.iter().find(|&&e| e < lo + step) {
            return Err(Error::window(
                format!("syzygy generator of P_{s} in degree {e} at the bottom edge of the range; more may lie below"),
                (lo - step, res.data.hi),
                (lo, res.data.hi),
            ));
        }
    }
    Ok(())
}

/// A presentation of a realized module from the first two steps of its
/// minimal resolution: generators `u_k` spanning `V_0`, the relations
/// `w·u_k - Σ_l rho(w)_{lk} u_l` identifying `R[W] ⊗_{QW} V_0` with `R ⊗ V_0`,
/// and one relation per generator of `P_1`. Valid in degrees of the range.
pub fn present_realized(module: &GradedModule) -> Result<GradedModulePresentation> {
    let ring = module.ring().clone();
    let res = resolve_realized(module, Some(2))?;
    let p0 = &res.data.terms[0];
    let generators: Vec<(String, i64)> = p0
        .degrees
        .iter()
        .enumerate()
        .map(|(k, &e)| (format!("u{k}"), e))
        .collect();
    let n = generators.len();
    let mut relations = Vec::new();
    let group = ring.group();
    for w in group.elements().filter(|&w| w != group.identity()) {
        for k in 0..n {
            let mut rel = vec![RingElement::zero(); n];
            rel[k] = ring.group_element(w);
            for (l, slot) in rel.iter_mut().enumerate() {
                let c = p0.action[w].get(l, k);
                if !c.is_zero() {
                    *slot = slot.add(&ring.one().scale(&-c.clone()));
                }
            }
            relations.push(rel);
        }
    }
    if let Some(d1) = res.data.differentials.first() {
        for row in &d1.images {
            relations.push(row.iter().map(|p| ring.from_polynomial(p)).collect());
        }
    }
    GradedModulePresentation::new(ring, generators, relations)
}

fn exterior_subsets(r: usize, s: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, r: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for i in start..r {
            cur.push(i);
            rec(i + 1, r, s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, r, s, &mut Vec::new(), &mut out);
    out
}

/// Matrix of `Λ^s rho(w)` on the basis of ascending subsets: minors.
fn exterior_power(rho: &RationalMatrix, subsets: &[Vec<usize>]) -> RationalMatrix {
    let n = subsets.len();
    let mut m = RationalMatrix::zeros(n, n);
    for (a, sa) in subsets.iter().enumerate() {
        for (b, sb) in subsets.iter().enumerate() {
            let minor = rho.select_rows(sb).select_columns(sa);
            let det = if sa.is_empty() {
                Rational::one()
            } else {
                minor.determinant().expect("square minor")
            };
            m.set(b, a, det);
        }
    }
    m
}

/// The Koszul complex `Λ^s V ⊗ U ⊗ R`, with `U` either the regular
/// representation (a resolution of QW by free R[W]-modules of rank C(r,s))
/// or the trivial one-dimensional representation (a resolution of Q).
fn koszul(ring: &Arc<TwistedGroupRing>, regular: bool) -> Resolution {
    let r = ring.nvars();
    let group = ring.group().clone();
    let u = if regular {
        Representation::regular(group.clone())
    } else {
        Representation::trivial(group.clone(), 1)
    };
    let names = ring.generators().names();
    let action = ring.generators().action();
    let mut terms = Vec::with_capacity(r + 1);
    let mut subsets_by_s = Vec::with_capacity(r + 1);
    for s in 0..=r {
        let subsets = exterior_subsets(r, s);
        let mut degrees = Vec::new();
        let mut labels = Vec::new();
        for a in &subsets {
            let d: i64 = a.iter().map(|&i| ring.degree(i)).sum();
            let wedge = format!(
                "[{}]",
                a.iter().map(|&i| names[i].as_str()).collect::<Vec<_>>().join(",")
            );
            for g in 0..u.dim() {
                degrees.push(d);
                labels.push(if regular {
                    format!("{wedge}*{}", group.name(g))
                } else {
                    wedge.clone()
                });
            }
        }
        let mats = group
            .elements()
            .map(|w| crate::group::kronecker(&exterior_power(action.matrix(w), &subsets), u.matrix(w)))
            .collect();
        terms.push(ProjectiveTerm {
            degrees,
            action: mats,
            labels,
        });
        subsets_by_s.push(subsets);
    }
    let nvars = ring.nvars();
    let mut differentials = Vec::with_capacity(r);
    for s in 1..=r {
        let src = &subsets_by_s[s];
        let tgt = &subsets_by_s[s - 1];
        let mut images = vec![vec![Polynomial::zero(); tgt.len() * u.dim()]; src.len() * u.dim()];
        for (a, sa) in src.iter().enumerate() {
            for (pos, &i) in sa.iter().enumerate() {
                let mut rest = sa.clone();
                rest.remove(pos);
                let b = tgt.iter().position(|x| *x == rest).expect("face of a subset");
                let sign = if pos % 2 == 0 {
                    Rational::one()
                } else {
                    -Rational::one()
                };
                for g in 0..u.dim() {
                    images[a * u.dim() + g][b * u.dim() + g] = Polynomial::term(Monomial::var(nvars, i), sign.clone());
                }
            }
        }
        differentials.push(Differential { images });
    }
    let augmentation = (0..u.dim())
        .map(|g| {
            let mut v = vec![Rational::zero(); u.dim()];
            v[g] = Rational::one();
            v
        })
        .collect();
    let total = ring.total_degree();
    Resolution {
        ring: ring.clone(),
        data: ResolutionData {
            lo: total,
            hi: 0,
            complete: true,
            terms,
            differentials,
            augmentation,
        },
    }
}

/// Koszul resolution of QW by free R[W]-modules `Λ^s V ⊗ R[W]`.
///
/// The augmentation targets the realization of
/// [`GradedModulePresentation::residue_regular`], whose degree-0 basis is the
/// group elements in table order.
pub fn koszul_complex(ring: &Arc<TwistedGroupRing>) -> Resolution {
    koszul(ring, true)
}

/// Koszul resolution `Λ^s V ⊗ R` of the trivial module Q.
pub fn koszul_complex_trivial(ring: &Arc<TwistedGroupRing>) -> Resolution {
    koszul(ring, false)
}

/// The dual of an augmented resolution: `M^∨ -> P_0^∨ -> ... -> P_n^∨`.
pub fn dual_injective_complex(complex: &RealizedComplex) -> RealizedComplex {
    complex.dual()
}
