mod common;

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tormod::examples::{klein_ring, o2_torsion_examples, s3_ring};
use tormod::ext::{ext_from_resolution, ext_with_resolution, resolution_for_ext};
use tormod::module::hom_graded;
use tormod::ring::{o2_ring, polynomial_ring};
use tormod::{change_of_rings_check, ext_table, DegreeWindow, Error, GradedModulePresentation, Representation};

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn window(lo: i64, hi: i64) -> DegreeWindow {
    DegreeWindow::new(lo, hi, 6).unwrap()
}

#[test]
fn residue_field_of_polynomial_rings() {
    for r in 1..=3 {
        let q = GradedModulePresentation::residue_trivial(polynomial_ring(r));
        let table = ext_table(&q, &q, &window(-8, 8)).unwrap();
        let expected: BTreeMap<(usize, i64), usize> = (0..=r).map(|s| ((s, 2 * s as i64), binomial(r, s))).collect();
        assert_eq!(table.dims(), expected, "r = {r}");
    }
}

#[test]
fn regular_residue_module_over_twisted_rings() {
    // Hom_W(Λ^s V ⊗ QW, QW) ≅ Hom_Q(Λ^s V, QW) has dimension |W|·C(r, s).
    for ring in [o2_ring(), klein_ring(), s3_ring()] {
        let order = ring.group().order();
        let r = ring.nvars();
        let qw = GradedModulePresentation::residue_regular(ring.clone());
        let table = ext_table(&qw, &qw, &window(-8, 8)).unwrap();
        let expected: BTreeMap<(usize, i64), usize> =
            (0..=r).map(|s| ((s, 2 * s as i64), order * binomial(r, s))).collect();
        assert_eq!(table.dims(), expected);
    }
}

fn exterior_character(rho: &Representation, w: usize, s: usize) -> tormod::Rational {
    // Trace of Λ^s rho(w): sum of the principal s×s minors.
    let m = rho.matrix(w);
    let n = m.rows();
    let mut total = tormod::Rational::from_integer(0.into());
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != s {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let minor = m.select_rows(&idx).select_columns(&idx);
        total += minor
            .determinant()
            .unwrap_or_else(|| tormod::Rational::from_integer(1.into()));
    }
    total
}

#[test]
fn trivial_residue_module_counts_invariant_exterior_powers() {
    for ring in [o2_ring(), klein_ring(), s3_ring()] {
        let rho = ring.generators().action().clone();
        let group = ring.group().clone();
        let r = ring.nvars();
        let q = GradedModulePresentation::residue_trivial(ring.clone());
        let table = ext_table(&q, &q, &window(-8, 8)).unwrap();
        for s in 0..=r {
            let sum = group
                .elements()
                .fold(tormod::Rational::from_integer(0.into()), |acc, w| {
                    acc + exterior_character(&rho, w, s)
                });
            let avg = sum / tormod::Rational::from_integer((group.order() as i64).into());
            assert!(avg.is_integer());
            assert_eq!(
                table.dim(s, 2 * s as i64) as i64,
                avg.to_integer().try_into().unwrap_or(-1),
                "s = {s}"
            );
        }
    }
}

#[test]
fn ext_zero_is_hom() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for ring in common::small_rings() {
        for _ in 0..3 {
            let m = common::random_torsion_module(&mut rng, ring.clone());
            let n = common::random_torsion_module(&mut rng, ring.clone());
            let table = ext_table(&m, &n, &window(-6, 6)).unwrap();
            let nr = n.realize(-30, 10).unwrap();
            for t in -6..=6 {
                assert_eq!(table.dim(0, t), hom_graded(&m, &nr, t).unwrap().dim(), "t = {t}");
            }
        }
    }
}

#[test]
fn suspension_shifts_t() {
    let ring = o2_ring();
    let examples = o2_torsion_examples();
    let m = &examples[4].1;
    let n = &examples[5].1;
    let w = window(-10, 10);
    let base = ext_table(m, n, &w).unwrap();
    for d in [-4i64, 2] {
        let left = ext_table(&m.suspend(d), n, &w).unwrap();
        let right = ext_table(m, &n.suspend(d), &w).unwrap();
        for s in 0..=ring.nvars() {
            for t in -6..=6 {
                assert_eq!(left.dim(s, t), base.dim(s, t + d));
                assert_eq!(right.dim(s, t), base.dim(s, t - d));
            }
        }
    }
}

#[test]
fn additive_in_the_source() {
    let ex = o2_torsion_examples();
    let (a, b, n) = (&ex[3].1, &ex[4].1, &ex[0].1);
    let w = window(-8, 8);
    let sum = ext_table(&a.direct_sum(b).unwrap(), n, &w).unwrap();
    let ta = ext_table(a, n, &w).unwrap();
    let tb = ext_table(b, n, &w).unwrap();
    for s in 0..=1 {
        for t in -8..=8 {
            assert_eq!(sum.dim(s, t), ta.dim(s, t) + tb.dim(s, t));
        }
    }
}

#[test]
fn change_of_rings_on_bundled_modules() {
    let ring = o2_ring();
    let mut targets: Vec<GradedModulePresentation> = o2_torsion_examples().into_iter().map(|(_, m)| m).collect();
    targets.push(GradedModulePresentation::free(ring, 0));
    for n in &targets {
        let report = change_of_rings_check(n, &window(-8, 8)).unwrap();
        assert!(
            report.agree,
            "{:?} vs {:?}",
            report.twisted.dims(),
            report.untwisted.dims()
        );
    }
}

#[test]
fn labels_are_stable_and_sized() {
    let ex = o2_torsion_examples();
    let w = window(-8, 8);
    for (_, m) in &ex {
        for (_, n) in &ex {
            let a = ext_table(m, n, &w).unwrap();
            let b = ext_table(m, n, &w).unwrap();
            assert_eq!(a, b);
            for e in a.nonzero() {
                assert_eq!(e.basis.len(), e.dim);
                assert!(e.basis.iter().all(|l| l.contains('>')));
            }
        }
    }
}

#[test]
fn resolution_reuse_matches_direct_computation() {
    let ex = o2_torsion_examples();
    let w = window(-8, 8);
    let (m, n) = (&ex[5].1, &ex[3].1);
    let res = resolution_for_ext(m, n, &w).unwrap();
    let direct = ext_table(m, n, &w).unwrap();
    assert_eq!(ext_with_resolution(&res, n, -8, 8).unwrap(), direct);
    let nr = n.realize(-40, 10).unwrap();
    assert_eq!(ext_from_resolution(&res, &nr, -8, 8).unwrap().dims(), direct.dims());
}

#[test]
fn deep_syzygy_without_margin_is_a_window_error() {
    let ring = polynomial_ring(2);
    let m = GradedModulePresentation::parse(
        ring.clone(),
        vec![("u".into(), 0)],
        &["x1^2*u".into(), "x1*x2*u".into()],
    )
    .unwrap();
    let n = GradedModulePresentation::free(ring, 0);
    let tight = DegreeWindow::new(-2, 2, 0).unwrap();
    let err = ext_table(&m, &n, &tight).unwrap_err();
    assert!(err.is_window(), "{err}");
    assert!(matches!(err, Error::Window { .. }));
    let roomy = DegreeWindow::new(-2, 2, 8).unwrap();
    assert!(ext_table(&m, &n, &roomy).is_ok());
}

#[test]
fn random_torsion_modules_respect_the_vanishing_line() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for ring in common::small_rings() {
        for _ in 0..2 {
            let m = common::random_torsion_module(&mut rng, ring.clone());
            let n = common::random_torsion_module(&mut rng, ring.clone());
            let table = ext_table(&m, &n, &window(-8, 8)).unwrap();
            assert!(table.nonzero().iter().all(|e| e.s <= ring.nvars()));
        }
    }
}
