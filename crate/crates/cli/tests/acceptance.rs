//! Acceptance suite: one PASS/FAIL line per criterion, with the time limit
//! each criterion must meet. Run with `cargo test --test acceptance`.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tormod::examples::{bundled_representations, c1_dga, c1_indecomposables, klein_ring, o2_torsion_examples, s3_ring};
use tormod::group::{averaging_idempotent, is_equivariant, maschke_split};
use tormod::module::hom_graded;
use tormod::rational::int;
use tormod::ring::{o2_ring, polynomial_ring};
use tormod::{
    build_formality_map, change_of_rings_check, ext_table, koszul_complex, recognize_cell, torsion_submodule,
    verify_quasi_iso, DegreeWindow, GradedModulePresentation, RationalMatrix, Representation, TwistedGroupRing,
};

type Dims = BTreeMap<(usize, i64), usize>;
type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn engine<T>(r: tormod::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

// Criterion 1

const O2_WINDOW: (i64, i64, i64) = (-10, 10, 4);

fn o2_window() -> DegreeWindow {
    DegreeWindow::new(O2_WINDOW.0, O2_WINDOW.1, O2_WINDOW.2).unwrap()
}

fn o2_self_ext(w: &DegreeWindow) -> Result<Dims, String> {
    let qw = GradedModulePresentation::residue_regular(o2_ring());
    Ok(engine(ext_table(&qw, &qw, w))?.dims_in(O2_WINDOW.0, O2_WINDOW.1))
}

fn criterion_1() -> Verdict {
    let dims = o2_self_ext(&o2_window())?;
    let expected: Dims = [((0, 0), 2), ((1, 2), 2)].into_iter().collect();
    ensure(dims == expected, || format!("got {dims:?}"))?;
    Ok("dims {(0,0): 2, (1,2): 2}, zero elsewhere".into())
}

// Criterion 2

fn criterion_2() -> Verdict {
    for r in 1..=3 {
        let ring = polynomial_ring(r);
        ensure(
            ring.group().is_trivial() && (0..r).all(|i| ring.degree(i) == -2),
            || "ring shape".into(),
        )?;
        let k = koszul_complex(&ring);
        let expected: Vec<usize> = (0..=r).map(|s| binomial(r, s)).collect();
        ensure(k.ranks() == expected, || format!("r = {r}: ranks {:?}", k.ranks()))?;
        let q = engine(GradedModulePresentation::residue_trivial(ring).realize(-12, 0))?;
        let complex = engine(k.realize_augmented(&q, -12, 0))?;
        engine(complex.check_maps())?;
        let report = engine(complex.verify_exactness(-12, 0))?;
        ensure(report.exact, || format!("r = {r}: homology {:?}", report.homology))?;
    }
    Ok("ranks C(r,s), exact at every position for t in [-12, 0], r = 1, 2, 3".into())
}

// Criterion 3

fn vanishing_rings() -> Vec<std::sync::Arc<TwistedGroupRing>> {
    vec![
        polynomial_ring(1),
        polynomial_ring(2),
        o2_ring(),
        klein_ring(),
        s3_ring(),
    ]
}

fn criterion_3() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let w = DegreeWindow::new(-8, 8, 6).unwrap();
    let rings = vanishing_rings();
    let mut checked = 0;
    for k in 0..50 {
        let ring = rings[k % rings.len()].clone();
        let r = ring.nvars();
        let m = common::random_torsion_module(&mut rng, ring.clone());
        let n = common::random_torsion_module(&mut rng, ring);
        let table = engine(ext_table(&m, &n, &w))?;
        for s in r + 1..table.rows {
            for t in w.t_min..=w.t_max {
                ensure(table.dim(s, t) == 0, || {
                    format!("module {k}: Ext^{{{s},{t}}} nonzero with r = {r}")
                })?;
            }
        }
        ensure(table.nonzero().iter().all(|e| e.s <= r), || {
            format!("module {k}: class above row {r}")
        })?;
        checked += 1;
    }
    Ok(format!("{checked} random torsion modules, no class above row r"))
}

// Criterion 4

fn change_of_rings_targets() -> Vec<(String, GradedModulePresentation)> {
    let mut out = Vec::new();
    let o2 = o2_ring();
    let qw = GradedModulePresentation::residue_regular(o2.clone());
    for d in [-4, 3, 6] {
        out.push((format!("O(2) sigma{d} QW"), qw.suspend(d)));
    }
    out.push(("O(2) R[W]".into(), GradedModulePresentation::free(o2.clone(), 0)));
    out.push(("O(2) sigma-2 R[W]".into(), GradedModulePresentation::free(o2, -2)));
    for (name, m) in o2_torsion_examples() {
        out.push((format!("O(2) {name}"), m));
    }
    for (label, ring) in [("Klein", klein_ring()), ("S3", s3_ring())] {
        let qw = GradedModulePresentation::residue_regular(ring.clone());
        out.push((format!("{label} QW"), qw.clone()));
        out.push((format!("{label} sigma2 QW"), qw.suspend(2)));
        out.push((format!("{label} R[W]"), GradedModulePresentation::free(ring, 0)));
    }
    out
}

fn change_of_rings_tables(w: &DegreeWindow) -> Result<Vec<(String, Dims)>, String> {
    let mut out = Vec::new();
    for (name, n) in change_of_rings_targets() {
        let report = engine(change_of_rings_check(&n, w))?;
        let twisted = report.twisted.dims_in(O2_WINDOW.0, O2_WINDOW.1);
        let untwisted = report.untwisted.dims_in(O2_WINDOW.0, O2_WINDOW.1);
        ensure(report.agree && twisted == untwisted, || {
            format!("{name}: twisted {twisted:?} vs untwisted {untwisted:?}")
        })?;
        out.push((name, twisted));
    }
    Ok(out)
}

fn criterion_4() -> Verdict {
    let tables = change_of_rings_tables(&o2_window())?;
    Ok(format!("{} targets, twisted and untwisted tables agree", tables.len()))
}

// Criterion 5

const HOM_DEGREES: (i64, i64) = (-8, 4);

struct AdjunctionCase {
    torsion: GradedModulePresentation,
    module: GradedModulePresentation,
}

fn adjunction_cases() -> Vec<AdjunctionCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let rings = common::small_rings();
    (0..20)
        .map(|k| {
            let ring = rings[k % rings.len()].clone();
            let torsion = common::random_torsion_module(&mut rng, ring.clone());
            let mut module = common::random_module(&mut rng, ring.clone());
            // Every other M gets a torsion summand so that Hom(T, M) is not
            // mostly zero.
            if k % 2 == 1 {
                let extra = common::random_torsion_module(&mut rng, ring);
                module = module.direct_sum(&extra).expect("same ring");
            }
            AdjunctionCase { torsion, module }
        })
        .collect()
}

/// Per case: `(t, dim Hom(T, M)_t, dim Hom(T, Γ M)_t)` and the dimensions
/// of Γ M on the Hom degrees.
type AdjunctionDims = Vec<(Vec<(i64, usize, usize)>, Vec<usize>)>;

fn adjunction(cases: &[AdjunctionCase], realized: (i64, i64), w: &DegreeWindow) -> Result<AdjunctionDims, String> {
    let mut out = Vec::new();
    for (k, case) in cases.iter().enumerate() {
        let m = engine(case.module.realize(realized.0, realized.1))?;
        let gamma = engine(torsion_submodule(&m, w))?;
        let mut homs = Vec::new();
        for t in HOM_DEGREES.0..=HOM_DEGREES.1 {
            let a = engine(hom_graded(&case.torsion, &m, t))?.dim();
            let b = engine(hom_graded(&case.torsion, &gamma.module, t))?.dim();
            ensure(a == b, || {
                format!("pair {k}, t = {t}: Hom(T, M) = {a}, Hom(T, Γ M) = {b}")
            })?;
            homs.push((t, a, b));
        }
        let gamma_dims = (HOM_DEGREES.0..=HOM_DEGREES.1)
            .map(|t| gamma.module.dim(t).unwrap_or(0))
            .collect();
        out.push((homs, gamma_dims));
    }
    Ok(out)
}

const ADJ_REALIZED: (i64, i64) = (-40, 8);

fn adjunction_window() -> DegreeWindow {
    DegreeWindow::new(-20, 8, 4).unwrap()
}

fn criterion_5() -> Verdict {
    let cases = adjunction_cases();
    let dims = adjunction(&cases, ADJ_REALIZED, &adjunction_window())?;
    let nonzero = dims.iter().flat_map(|(h, _)| h).filter(|(_, a, _)| *a > 0).count();
    Ok(format!(
        "{} pairs, {nonzero} nonzero Hom degrees, all equal",
        cases.len()
    ))
}

// Criterion 6

fn check_split(name: &str, source: &Representation, target: &Representation, p: &RationalMatrix) -> Result<(), String> {
    ensure(is_equivariant(source, target, p), || {
        format!("{name}: projection not equivariant")
    })?;
    let s = engine(maschke_split(source, target, p))?;
    let e = &s * p;
    ensure(&e * &e == e, || format!("{name}: e^2 != e"))?;
    ensure((p * &s).is_identity(), || format!("{name}: p s != 1"))?;
    ensure(is_equivariant(target, source, &s), || {
        format!("{name}: section not equivariant")
    })?;
    ensure(is_equivariant(source, source, &e), || {
        format!("{name}: idempotent not equivariant")
    })?;
    let complement = &RationalMatrix::identity(source.dim()) - &e;
    ensure((p * &complement).is_zero(), || {
        format!("{name}: 1 - e does not land in ker p")
    })?;
    let avg = averaging_idempotent(source);
    ensure(&avg * &avg == avg, || {
        format!("{name}: averaging operator not idempotent")
    })
}

fn criterion_6() -> Verdict {
    let reps = bundled_representations();
    let mut count = 0;
    for (name, v) in &reps {
        // V ⊕ V -> V, (x, y) -> x + A y with A an intertwiner.
        let source = v.direct_sum(v);
        let a = tormod::group::intertwiners(v, v)
            .into_iter()
            .enumerate()
            .fold(RationalMatrix::zeros(v.dim(), v.dim()), |acc, (i, x)| {
                &acc + &x.scale(&int(i as i64 + 2))
            });
        let p = RationalMatrix::identity(v.dim()).hstack(&a);
        check_split(name, &source, v, &p)?;
        count += 1;
    }
    let mut groups: Vec<std::sync::Arc<tormod::FiniteGroup>> = Vec::new();
    for (_, v) in &reps {
        if !groups.iter().any(|g| g == v.group()) {
            groups.push(v.group().clone());
        }
    }
    for g in groups {
        let regular = Representation::regular(g.clone());
        let trivial = Representation::trivial(g.clone(), 1);
        let ones = RationalMatrix::from_rows(vec![vec![int(1); g.order()]], g.order()).unwrap();
        check_split(&format!("{} augmentation", g.order()), &regular, &trivial, &ones)?;
        count += 1;
    }
    Ok(format!("{count} surjections over Z/2, Z/2xZ/2, S3 split equivariantly"))
}

// Criterion 7

const C1_CUTOFF: usize = 12;

fn criterion_7() -> Verdict {
    let c = engine(c1_dga(C1_CUTOFF))?;
    let v = engine(c1_indecomposables())?;
    let map = engine(build_formality_map(&c, &v))?;
    ensure(engine(map.lands_in_cycles(&c))?, || "image is not a cycle".into())?;
    ensure(engine(map.is_equivariant(&c))?, || "image is not equivariant".into())?;
    let report = engine(verify_quasi_iso(&c, &map, C1_CUTOFF))?;
    let degrees: Vec<i64> = report.degrees.iter().map(|d| d.degree).collect();
    let expected: Vec<i64> = (0..=C1_CUTOFF as i64).map(|k| -k).collect();
    ensure(degrees == expected, || format!("checked degrees {degrees:?}"))?;
    ensure(report.all_pass(), || report.summary())?;
    Ok(format!("{} in degrees 0..-{C1_CUTOFF}", report.summary()))
}

// Criterion 8

fn criterion_8() -> Verdict {
    let ring = o2_ring();
    let w = o2_window();
    let qw = GradedModulePresentation::residue_regular(ring.clone());
    for d in [-3, 0, 5] {
        let got = engine(recognize_cell(&qw.suspend(d), &w))?;
        ensure(got == Some(d), || format!("sigma{d} QW recognized as {got:?}"))?;
    }
    let trivial = GradedModulePresentation::residue_trivial(ring);
    let got = engine(recognize_cell(&trivial, &w))?;
    ensure(got.is_none(), || format!("trivial module recognized as {got:?}"))?;
    let wrong = engine(trivial.direct_sum(&trivial))?;
    let got = engine(recognize_cell(&wrong, &w))?;
    ensure(got.is_none(), || format!("trivial+trivial recognized as {got:?}"))?;
    Ok("d = -3, 0, 5 recognized; trivial and wrong-representation modules rejected".into())
}

// Criterion 9

fn criterion_9() -> Verdict {
    let base = o2_self_ext(&o2_window())?;
    let doubled = o2_self_ext(&o2_window().doubled())?;
    ensure(base == doubled, || {
        format!("criterion 1 table changed: {base:?} -> {doubled:?}")
    })?;

    let base = change_of_rings_tables(&o2_window())?;
    let doubled = change_of_rings_tables(&o2_window().doubled())?;
    for ((name, a), (_, b)) in base.iter().zip(&doubled) {
        ensure(a == b, || format!("{name}: {a:?} -> {b:?}"))?;
    }

    let cases = adjunction_cases();
    let base = adjunction(&cases, ADJ_REALIZED, &adjunction_window())?;
    let wide = adjunction_window().doubled();
    let below = adjunction_window().lo() - ADJ_REALIZED.0;
    let realized = (wide.lo() - below, wide.hi());
    let doubled = adjunction(&cases, realized, &wide)?;
    ensure(base == doubled, || {
        "criterion 5 dimensions changed under doubling".into()
    })?;
    Ok("criteria 1, 4, 5 unchanged with margin and window doubled".into())
}

// Criterion 10

fn configs() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut out: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "cfg"))
        .collect();
    out.sort();
    out
}

fn run(cache: &Path, command: &str, config: &Path) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_tormod"))
        .args([command, "--config", config.to_str().unwrap()])
        .env("TORMOD_CACHE_DIR", cache)
        .output()
        .expect("binary runs");
    (out.status.code(), out.stdout)
}

fn criterion_10() -> Verdict {
    let cache = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut reports = 0;
    let configs = configs();
    for config in &configs {
        let mut succeeded = 0;
        for command in ["ext", "chart", "koszul", "resolve", "torsion", "formality"] {
            let first = run(cache.path(), command, config);
            let second = run(cache.path(), command, config);
            let name = config.file_name().unwrap().to_string_lossy();
            ensure(first == second, || format!("{name} {command}: runs differ"))?;
            if first.0 == Some(0) {
                succeeded += 1;
                reports += 1;
            }
        }
        ensure(succeeded > 0, || format!("{}: no command succeeded", config.display()))?;
    }
    Ok(format!(
        "{} configs, {reports} reports byte-identical across runs",
        configs.len()
    ))
}

fn main() {
    type Criterion = (u32, &'static str, Option<u64>, fn() -> Verdict);
    let criteria: [Criterion; 10] = [
        (1, "O(2) self-Ext", Some(1), criterion_1),
        (2, "Koszul exactness", Some(5), criterion_2),
        (3, "vanishing line", Some(60), criterion_3),
        (4, "change of rings", Some(10), criterion_4),
        (5, "torsion adjunction", Some(30), criterion_5),
        (6, "Maschke splitting", Some(5), criterion_6),
        (7, "C1 formality", Some(5), criterion_7),
        (8, "cell recognition", Some(1), criterion_8),
        (9, "window doubling", None, criterion_9),
        (10, "determinism", None, criterion_10),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    for (n, name, limit, f) in criteria {
        if !filter.is_empty() && !filter.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let over = limit.is_some_and(|s| elapsed > Duration::from_secs(s));
        let limit_text = limit.map_or("no limit".to_string(), |s| format!("limit {s}s"));
        let (pass, detail) = match result {
            Ok(d) if over => (false, format!("{d}; over the time limit")),
            Ok(d) => (true, d),
            Err(e) => (false, e),
        };
        println!(
            "{} criterion {n:>2} {name}: {:.3}s ({limit_text}) {detail}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        if !pass {
            failed.push(n);
        }
    }
    if !failed.is_empty() {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
    println!("acceptance: all criteria pass");
}
