//! Bigraded Ext^{s,t} over R[W] (the Adams E2 page), change of rings,
//! sparsity analysis of the chart and cell recognition.
//!
//! A degree-t map raises degree by t. Ext^{s,t}(M, N) is the degree-t
//! cohomology of `Hom_{R[W]}(P_•, N)` for a minimal projective resolution
//! `P_•` of M, with `Hom_{R[W]}(R ⊗ V, N)_t = Hom_W(V, N_{• + t})`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{averaging_idempotent, equivariant_isomorphism, Representation};
use crate::linalg::{homology, restrict_map, RationalMatrix, Subspace};
use crate::module::{hom_graded, DegreeWindow, GradedModule, GradedModulePresentation};
use crate::par;
use crate::rational::Rational;
use crate::resolution::{check_guard_band, complete_resolution_floor, resolve_realized, Resolution};

/// Bidegree of the differentials considered in the sparsity analysis:
/// `d_k: (s, t) -> (s + k, t + a·k + b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Convention {
    pub a: i64,
    pub b: i64,
}

impl Default for Convention {
    fn default() -> Self {
        Convention { a: 1, b: -1 }
    }
}

impl Convention {
    pub fn target(&self, s: usize, t: i64, k: usize) -> (usize, i64) {
        (s + k, t + self.a * k as i64 + self.b)
    }

    pub fn describe(&self) -> String {
        let b = match self.b.cmp(&0) {
            std::cmp::Ordering::Less => format!(" - {}", -self.b),
            std::cmp::Ordering::Greater => format!(" + {}", self.b),
            std::cmp::Ordering::Equal => String::new(),
        };
        let a = match self.a {
            1 => "k".to_string(),
            -1 => "-k".to_string(),
            0 => "0".to_string(),
            a => format!("{a}k"),
        };
        format!("d_k: (s,t) -> (s+k, t + {a}{b})")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtEntry {
    pub s: usize,
    pub t: i64,
    pub dim: usize,
    pub basis: Vec<String>,
}

/// Ext^{s,t} for `0 <= s <= rows` and `t` in `[t_min, t_max]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedExtTable {
    pub r: usize,
    pub t_min: i64,
    pub t_max: i64,
    pub rows: usize,
    entries: BTreeMap<(usize, i64), ExtEntry>,
}

impl BigradedExtTable {
    pub fn dim(&self, s: usize, t: i64) -> usize {
        self.entries.get(&(s, t)).map_or(0, |e| e.dim)
    }

    pub fn entry(&self, s: usize, t: i64) -> Option<&ExtEntry> {
        self.entries.get(&(s, t))
    }

    /// Nonzero entries ordered by `(s, t)`.
    pub fn nonzero(&self) -> Vec<&ExtEntry> {
        self.entries.values().filter(|e| e.dim > 0).collect()
    }

    /// `(s, t) -> dim` for the nonzero entries.
    pub fn dims(&self) -> BTreeMap<(usize, i64), usize> {
        self.nonzero().into_iter().map(|e| ((e.s, e.t), e.dim)).collect()
    }

    /// Nonzero dims restricted to `[lo, hi]` in t.
    pub fn dims_in(&self, lo: i64, hi: i64) -> BTreeMap<(usize, i64), usize> {
        self.dims()
            .into_iter()
            .filter(|((_, t), _)| (lo..=hi).contains(t))
            .collect()
    }

    /// The same table with every t moved by `d`.
    pub fn shifted(&self, d: i64) -> BigradedExtTable {
        BigradedExtTable {
            r: self.r,
            t_min: self.t_min + d,
            t_max: self.t_max + d,
            rows: self.rows,
            entries: self
                .entries
                .iter()
                .map(|(&(s, t), e)| {
                    (
                        (s, t + d),
                        ExtEntry {
                            t: e.t + d,
                            ..e.clone()
                        },
                    )
                })
                .collect(),
        }
    }
}

struct Cochains {
    /// Offset of each generator's block in `U = ⊕_k N_{e_k + t}`.
    offsets: Vec<usize>,
    total: usize,
    /// Basis of `Hom_W(V, N_{• + t})` inside U.
    invariants: Subspace,
}

fn cochains(res: &Resolution, n: &GradedModule, s: usize, t: i64) -> Result<Cochains> {
    let ring = res.ring();
    let group = ring.group().clone();
    let Some(term) = res.term(s) else {
        return Ok(Cochains {
            offsets: Vec::new(),
            total: 0,
            invariants: Subspace::zero(0),
        });
    };
    let mut offsets = Vec::with_capacity(term.rank());
    let mut total = 0;
    let mut dims = Vec::with_capacity(term.rank());
    for &e in &term.degrees {
        let d = n.dim(e + t).ok_or_else(|| {
            Error::window(
                format!("Ext needs the target in degree {}", e + t),
                (e + t, e + t),
                (n.lo(), n.hi()),
            )
        })?;
        offsets.push(total);
        dims.push(d);
        total += d;
    }
    if total == 0 {
        return Ok(Cochains {
            offsets,
            total,
            invariants: Subspace::zero(0),
        });
    }
    if group.is_trivial() {
        return Ok(Cochains {
            offsets,
            total,
            invariants: Subspace::full(total),
        });
    }
    // (w·f)(v_a) = rho_N(w) Σ_b rho_V(w^{-1})_{ba} f(v_b)
    let mats = group
        .elements()
        .map(|w| {
            let mut m = RationalMatrix::zeros(total, total);
            let inv = &term.action[group.inverse(w)];
            for (a, &ea) in term.degrees.iter().enumerate() {
                if dims[a] == 0 {
                    continue;
                }
                let rho_n = n.group_matrix(w, ea + t)?;
                for b in 0..term.rank() {
                    let c = inv.get(b, a);
                    if c.is_zero() {
                        continue;
                    }
                    for i in 0..dims[a] {
                        for j in 0..dims[b] {
                            let q = rho_n.get(i, j);
                            if !q.is_zero() {
                                m.add_to(offsets[a] + i, offsets[b] + j, &(q * c));
                            }
                        }
                    }
                }
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    let rep = Representation::new_unchecked(group, total, mats);
    Ok(Cochains {
        offsets,
        total,
        invariants: averaging_idempotent(&rep).column_space(),
    })
}

/// `δ: Hom(P_s, N)_t -> Hom(P_{s+1}, N)_t` on the full block spaces:
/// `(δf)(v_k) = Σ_l p_{kl} · f(v_l)` where `d(v_k) = Σ_l p_{kl} ⊗ v_l`.
fn coboundary(
    res: &Resolution,
    n: &GradedModule,
    s: usize,
    t: i64,
    src: &Cochains,
    tgt: &Cochains,
) -> Result<RationalMatrix> {
    let mut m = RationalMatrix::zeros(tgt.total, src.total);
    let Some(d) = res.differential(s + 1) else {
        return Ok(m);
    };
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(m);
    }
    let upper = res.term(s + 1).expect("differential has a source");
    let lower = res.term(s).expect("differential has a target");
    for (k, &ek) in upper.degrees.iter().enumerate() {
        for (l, &el) in lower.degrees.iter().enumerate() {
            let p = &d.images[k][l];
            if p.is_zero() {
                continue;
            }
            let block = n.polynomial_action(p, el + t, ek - el)?;
            m.set_block(tgt.offsets[k], src.offsets[l], &block);
        }
    }
    Ok(m)
}

/// Rows of a reduced echelon basis, used to normalize vectors modulo a span.
fn reduce(v: &mut [Rational], echelon: &Subspace) {
    for row in echelon.basis() {
        let Some(p) = row.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        if v[p].is_zero() {
            continue;
        }
        let f = v[p].clone();
        for (x, y) in v.iter_mut().zip(row) {
            *x -= &f * y;
        }
    }
}

/// Ext table from a resolution of M and a realization of N.
///
/// Rows run from 0 to `max(r, length + 1)`; a nonzero row above r is an
/// invariant violation.
pub fn ext_from_resolution(res: &Resolution, n: &GradedModule, t_min: i64, t_max: i64) -> Result<BigradedExtTable> {
    let ring = res.ring();
    if **ring != **n.ring() {
        return Err(Error::RingMismatch("resolution and target over different rings".into()));
    }
    let r = ring.nvars();
    let len = res.length().max(0) as usize;
    let rows = r.max(len + 1);
    let ts: Vec<i64> = (t_min..=t_max).collect();
    let mut jobs = Vec::new();
    for s in 0..=rows + 1 {
        for &t in &ts {
            jobs.push((s, t));
        }
    }
    let spaces: BTreeMap<(usize, i64), Cochains> = par::try_map(jobs, |(s, t)| Ok(((s, t), cochains(res, n, s, t)?)))?
        .into_iter()
        .collect();
    let mut jobs = Vec::new();
    for s in 0..=rows {
        for &t in &ts {
            jobs.push((s, t));
        }
    }
    let labels_of = |s: usize, t: i64, coord: usize| -> String {
        let term = res.term(s).expect("nonzero cochains come from a term");
        let c = &spaces[&(s, t)];
        let k = c.offsets.partition_point(|&o| o <= coord) - 1;
        let e = term.degrees[k];
        let local = coord - c.offsets[k];
        let nl = n
            .piece(e + t)
            .map(|p| p.labels[local].clone())
            .unwrap_or_else(|| format!("#{local}"));
        format!("{}>{nl}", term.labels[k])
    };
    let entries = par::try_map(jobs, |(s, t)| {
        let here = &spaces[&(s, t)];
        if here.invariants.dim() == 0 {
            return Ok(ExtEntry {
                s,
                t,
                dim: 0,
                basis: Vec::new(),
            });
        }
        let next = &spaces[&(s + 1, t)];
        let out_full = coboundary(res, n, s, t, here, next)?;
        let d_out = restrict_map(&out_full, &here.invariants, &next.invariants)?;
        let (d_in, boundaries) = if s == 0 {
            (
                RationalMatrix::zeros(here.invariants.dim(), 0),
                Subspace::zero(here.total),
            )
        } else {
            let prev = &spaces[&(s - 1, t)];
            let in_full = coboundary(res, n, s - 1, t, prev, here)?;
            let d_in = restrict_map(&in_full, &prev.invariants, &here.invariants)?;
            let images: Vec<Vec<Rational>> = prev.invariants.basis().iter().map(|v| in_full.mul_vec(v)).collect();
            (d_in, Subspace::span(here.total, &images))
        };
        let h = homology(&d_out, &d_in).map_err(|e| match e {
            Error::NotAComplex { .. } => Error::NotAComplex { position: s, degree: t },
            other => other,
        })?;
        if h.dim == 0 {
            return Ok(ExtEntry {
                s,
                t,
                dim: 0,
                basis: Vec::new(),
            });
        }
        let basis_matrix = here.invariants.basis_matrix();
        let reduced: Vec<Vec<Rational>> = h
            .representatives
            .iter()
            .map(|rep| {
                let mut v = basis_matrix.mul_vec(rep);
                reduce(&mut v, &boundaries);
                v
            })
            .collect();
        let canonical = Subspace::span(here.total, &reduced);
        let basis = canonical
            .basis()
            .iter()
            .map(|v| labels_of(s, t, v.iter().position(|x| !x.is_zero()).expect("nonzero class")))
            .collect();
        Ok(ExtEntry {
            s,
            t,
            dim: h.dim,
            basis,
        })
    })?;
    let mut map = BTreeMap::new();
    for e in entries {
        if e.s > r && e.dim > 0 {
            return Err(Error::Invariant(format!(
                "Ext^{{{},{}}} has dimension {} above the vanishing line s = {r}",
                e.s, e.t, e.dim
            )));
        }
        map.insert((e.s, e.t), e);
    }
    Ok(BigradedExtTable {
        r,
        t_min,
        t_max,
        rows,
        entries: map,
    })
}

/// Range of target degrees Ext needs: every `e + t` for generator degrees
/// `e` of the resolution.
pub fn target_range(res: &Resolution, t_min: i64, t_max: i64) -> Option<(i64, i64)> {
    let degrees: Vec<i64> = res.terms().iter().flat_map(|t| t.degrees.iter().copied()).collect();
    let lo = degrees.iter().min()?;
    let hi = degrees.iter().max()?;
    Some((lo + t_min, hi + t_max))
}

/// Search depth used to certify finite support of the modules in a window.
pub fn support_search_depth(window: &DegreeWindow, step: i64) -> i64 {
    window.margin + (window.t_max - window.t_min) + step
}

/// A resolution of M adequate for Ext^{•,t}(M, N) with `t <= t_max`.
///
/// Exact answers are certified in two cases: M has finite support (the
/// resolution is complete), or N is bounded below by `n_lo` (generators
/// below `n_lo - t_max` contribute no cochains). Otherwise the resolution is
/// computed down to `window.lo()` and a generator in the bottom guard band is
/// a window error.
pub fn resolution_for_ext(
    m: &GradedModulePresentation,
    n: &GradedModulePresentation,
    window: &DegreeWindow,
) -> Result<Resolution> {
    let ring = m.ring();
    let step = ring.max_step();
    let depth = support_search_depth(window, step);
    let Some(top) = m.max_generator_degree() else {
        return resolve_realized(&m.realize(0, 0)?, None);
    };
    if let Some((bottom, _)) = m.finite_support(depth)? {
        let lo = complete_resolution_floor(ring, bottom);
        return resolve_realized(&m.realize(lo, top)?, None);
    }
    if let Some((n_lo, _)) = n.finite_support(depth)? {
        let lo = (n_lo - window.t_max).min(top);
        return resolve_realized(&m.realize(lo, top)?, None);
    }
    let base = m.min_degree().unwrap_or(top);
    let lo = (base - window.margin - step).min(window.lo());
    let res = resolve_realized(&m.realize(lo, top)?, None)?;
    check_guard_band(&res)?;
    Ok(res)
}

/// Ext with a given resolution of M: realizes N where needed.
pub fn ext_with_resolution(
    res: &Resolution,
    n: &GradedModulePresentation,
    t_min: i64,
    t_max: i64,
) -> Result<BigradedExtTable> {
    let (lo, hi) = target_range(res, t_min, t_max).unwrap_or((t_min, t_max));
    let nr = n.realize(lo, hi.max(lo))?;
    ext_from_resolution(res, &nr, t_min, t_max)
}

/// Ext^{s,t}(M, N) for t in `[window.t_min, window.t_max]`.
pub fn ext_table(
    m: &GradedModulePresentation,
    n: &GradedModulePresentation,
    window: &DegreeWindow,
) -> Result<BigradedExtTable> {
    if **m.ring() != **n.ring() {
        return Err(Error::RingMismatch("Ext between modules over different rings".into()));
    }
    let res = resolution_for_ext(m, n, window)?;
    ext_with_resolution(&res, n, window.t_min, window.t_max)
}

/// `Ext_{R[W]}(QW, N)` against `Ext_R(Q, N|_R)`.
#[derive(Clone, Debug)]
pub struct ChangeOfRingsReport {
    pub twisted: BigradedExtTable,
    pub untwisted: BigradedExtTable,
    pub agree: bool,
}

pub fn change_of_rings_check(n: &GradedModulePresentation, window: &DegreeWindow) -> Result<ChangeOfRingsReport> {
    let ring = n.ring().clone();
    let qw = GradedModulePresentation::residue_regular(ring.clone());
    let twisted = ext_table(&qw, n, window)?;
    let sub = ring.polynomial_subring();
    let q = GradedModulePresentation::residue_trivial(sub);
    let restricted = n.restrict_to_polynomial_ring();
    let untwisted = ext_table(&q, &restricted, window)?;
    let agree = twisted.dims() == untwisted.dims();
    Ok(ChangeOfRingsReport {
        twisted,
        untwisted,
        agree,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub s: usize,
    pub t: i64,
    pub dim: usize,
    /// Nonzero bidegrees some d_k (k >= 2) could hit from here.
    pub targets: Vec<(usize, i64)>,
    /// Nonzero bidegrees from which some d_k (k >= 2) could hit here.
    pub sources: Vec<(usize, i64)>,
    pub permanent: bool,
}

#[derive(Clone, Debug)]
pub struct E2Report {
    pub table: BigradedExtTable,
    pub convention: Convention,
    pub classes: Vec<ClassReport>,
    pub chart: String,
}

/// Sparsity flags for every nonzero class of `table` inside `[t_min, t_max]`;
/// the table must cover the t-range reachable by differentials.
pub fn sparsity(table: &BigradedExtTable, convention: Convention, t_min: i64, t_max: i64) -> Vec<ClassReport> {
    let r = table.r;
    let mut out = Vec::new();
    for e in table.nonzero() {
        if e.t < t_min || e.t > t_max {
            continue;
        }
        let mut targets = Vec::new();
        let mut sources = Vec::new();
        for k in 2..=r {
            if e.s + k <= r {
                let (s2, t2) = convention.target(e.s, e.t, k);
                if table.dim(s2, t2) > 0 {
                    targets.push((s2, t2));
                }
            }
            if e.s >= k {
                let s0 = e.s - k;
                let t0 = e.t - convention.a * k as i64 - convention.b;
                if table.dim(s0, t0) > 0 {
                    sources.push((s0, t0));
                }
            }
        }
        let permanent = targets.is_empty() && sources.is_empty();
        out.push(ClassReport {
            s: e.s,
            t: e.t,
            dim: e.dim,
            targets,
            sources,
            permanent,
        });
    }
    out
}

/// How far beyond the window differentials can reach in t.
pub fn sparsity_reach(r: usize, convention: Convention) -> i64 {
    convention.a.abs() * r as i64 + convention.b.abs()
}

pub fn render_chart(table: &BigradedExtTable, convention: Convention, t_min: i64, t_max: i64) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "# Ext^{{s,t}}: s upward, t across; a degree-t map raises degree by t"
    )
    .unwrap();
    writeln!(out, "# cohomological bicodegree = (s,-t); {}", convention.describe()).unwrap();
    let ts: Vec<i64> = (t_min..=t_max).collect();
    let width = ts.iter().map(|t| t.to_string().len()).max().unwrap_or(1).max(2);
    let rows = table.r.max(table.rows.min(table.r));
    for s in (0..=rows).rev() {
        write!(out, "s={s:<3}|").unwrap();
        for &t in &ts {
            let d = table.dim(s, t);
            let cell = if d == 0 { ".".to_string() } else { d.to_string() };
            write!(out, " {cell:>width$}").unwrap();
        }
        out.push('\n');
    }
    write!(out, "     +").unwrap();
    out.push_str(&"-".repeat(ts.len() * (width + 1)));
    out.push('\n');
    write!(out, "   t  ").unwrap();
    for &t in &ts {
        write!(out, " {t:>width$}").unwrap();
    }
    out.push('\n');
    out
}

/// Ext table, chart and sparsity flags for `[window.t_min, window.t_max]`.
pub fn adams_e2_report(
    m: &GradedModulePresentation,
    n: &GradedModulePresentation,
    window: &DegreeWindow,
    convention: Convention,
) -> Result<E2Report> {
    let res = resolution_for_ext(m, n, window)?;
    e2_report_with_resolution(&res, n, window, convention)
}

pub fn e2_report_with_resolution(
    res: &Resolution,
    n: &GradedModulePresentation,
    window: &DegreeWindow,
    convention: Convention,
) -> Result<E2Report> {
    let reach = sparsity_reach(res.ring().nvars(), convention);
    let wide = ext_with_resolution(res, n, window.t_min - reach, window.t_max + reach)?;
    let classes = sparsity(&wide, convention, window.t_min, window.t_max);
    let chart = render_chart(&wide, convention, window.t_min, window.t_max);
    let table = ext_with_resolution(res, n, window.t_min, window.t_max)?;
    Ok(E2Report {
        table,
        convention,
        classes,
        chart,
    })
}

/// `Some(d)` iff M is `Σ^d QW`: concentrated in one degree d, of dimension
/// |W| there, with the regular representation. The module must be certified
/// zero outside its realized range, unless two nonzero degrees are already
/// visible.
pub fn recognize_cell_realized(m: &GradedModule) -> Result<Option<i64>> {
    let support = m.support();
    if support.len() > 1 {
        return Ok(None);
    }
    if !m.zero_below() || !m.zero_above() {
        return Err(Error::window(
            "cannot certify that the module vanishes outside the realized range",
            (m.lo() - m.ring().max_step(), m.hi()),
            (m.lo(), m.hi()),
        ));
    }
    let Some(&d) = support.first() else {
        return Ok(None);
    };
    let group = m.ring().group().clone();
    if m.dim(d) != Some(group.order()) {
        return Ok(None);
    }
    let rep = m.group_rep(d)?;
    let regular = Representation::regular(group);
    Ok(equivariant_isomorphism(&regular, &rep).map(|_| d))
}

pub fn recognize_cell(m: &GradedModulePresentation, window: &DegreeWindow) -> Result<Option<i64>> {
    let Some(top) = m.max_generator_degree() else {
        return Ok(None);
    };
    let step = m.ring().max_step();
    let bottom = m.min_generator_degree().unwrap_or(top);
    let lo = (bottom - support_search_depth(window, step)).min(window.lo());
    let realized = m.realize(lo, top.max(window.hi()))?;
    recognize_cell_realized(&realized)
}

/// Ext^0 agrees with Hom computed directly from the presentation.
pub fn hom_dims(m: &GradedModulePresentation, n: &GradedModule, t_min: i64, t_max: i64) -> Result<Vec<(i64, usize)>> {
    (t_min..=t_max).map(|t| Ok((t, hom_graded(m, n, t)?.dim()))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{o2_ring, polynomial_ring};

    fn dims(pairs: &[((usize, i64), usize)]) -> BTreeMap<(usize, i64), usize> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn o2_self_ext() {
        let ring = o2_ring();
        let qw = GradedModulePresentation::residue_regular(ring);
        let w = DegreeWindow::new(-10, 10, 4).unwrap();
        let table = ext_table(&qw, &qw, &w).unwrap();
        assert_eq!(table.dims(), dims(&[((0, 0), 2), ((1, 2), 2)]));
    }

    #[test]
    fn residue_field_over_one_variable() {
        let ring = polynomial_ring(1);
        let q = GradedModulePresentation::residue_trivial(ring);
        let w = DegreeWindow::new(-6, 6, 4).unwrap();
        let table = ext_table(&q, &q, &w).unwrap();
        assert_eq!(table.dims(), dims(&[((0, 0), 1), ((1, 2), 1)]));
        assert_eq!(table.entry(1, 2).unwrap().basis, vec!["g1_m2_0>u".to_string()]);
    }

    #[test]
    fn free_source_has_only_row_zero() {
        let ring = o2_ring();
        let free = GradedModulePresentation::free(ring.clone(), 0);
        let qw = GradedModulePresentation::residue_regular(ring);
        let table = ext_table(&free, &qw, &DegreeWindow::new(-4, 4, 4).unwrap()).unwrap();
        assert!(table.nonzero().iter().all(|e| e.s == 0));
        assert_eq!(table.dims(), dims(&[((0, 0), 2)]));
    }

    #[test]
    fn cells() {
        let ring = o2_ring();
        let w = DegreeWindow::new(-10, 10, 4).unwrap();
        let qw = GradedModulePresentation::residue_regular(ring.clone());
        assert_eq!(recognize_cell(&qw.suspend(3), &w).unwrap(), Some(3));
        let q = GradedModulePresentation::residue_trivial(ring.clone());
        assert_eq!(recognize_cell(&q, &w).unwrap(), None);
        let two = q.direct_sum(&q).unwrap();
        assert_eq!(recognize_cell(&two, &w).unwrap(), None);
    }

    #[test]
    fn o2_classes_are_permanent() {
        let ring = o2_ring();
        let qw = GradedModulePresentation::residue_regular(ring);
        let w = DegreeWindow::new(-6, 6, 4).unwrap();
        let report = adams_e2_report(&qw, &qw, &w, Convention::default()).unwrap();
        assert_eq!(report.classes.len(), 2);
        assert!(report.classes.iter().all(|c| c.permanent));
        assert!(report.chart.contains("bicodegree = (s,-t)"));
    }
}
