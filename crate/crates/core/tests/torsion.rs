mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tormod::module::{hom_graded, is_torsion};
use tormod::ring::{o2_ring, polynomial_ring};
use tormod::{torsion_submodule, DegreeWindow, GradedModulePresentation};

#[test]
fn free_module_has_no_torsion() {
    let ring = o2_ring();
    let m = GradedModulePresentation::free(ring, 0).realize(-24, 0).unwrap();
    let w = DegreeWindow::new(-12, 0, 4).unwrap();
    let g = torsion_submodule(&m, &w).unwrap();
    assert!((-12..=0).all(|t| g.module.dim(t) == Some(0)));
    assert!(!is_torsion(&m, &w).unwrap());
}

#[test]
fn torsion_modules_are_their_own_torsion() {
    let w = DegreeWindow::new(-12, 0, 4).unwrap();
    for (_, m) in tormod::examples::o2_torsion_examples() {
        let r = m.realize(-24, 4).unwrap();
        assert!(is_torsion(&r, &w).unwrap());
    }
}

#[test]
fn torsion_of_a_mixed_quotient() {
    // Q[x1, x2]/(x1^2, x1 x2): the class of x1 is killed by both variables,
    // everything else lives in Q[x2] and is torsion-free.
    let ring = polynomial_ring(2);
    let m = GradedModulePresentation::parse(ring, vec![("u".into(), 0)], &["x1^2*u".into(), "x1*x2*u".into()]).unwrap();
    let r = m.realize(-30, 0).unwrap();
    let w = DegreeWindow::new(-12, 0, 4).unwrap();
    let g = torsion_submodule(&r, &w).unwrap();
    for t in -12..=0 {
        assert_eq!(g.module.dim(t), Some(usize::from(t == -2)), "degree {t}");
    }
    g.inclusion.check(&g.module, &r).unwrap();
}

#[test]
fn torsion_splits_off_a_direct_sum() {
    let ring = o2_ring();
    let t = GradedModulePresentation::parse(ring.clone(), vec![("u".into(), 0)], &["c^2*u".into()]).unwrap();
    let m = t.direct_sum(&GradedModulePresentation::free(ring, -2)).unwrap();
    let r = m.realize(-30, 2).unwrap();
    let w = DegreeWindow::new(-12, 2, 4).unwrap();
    let g = torsion_submodule(&r, &w).unwrap();
    let tr = t.realize(-30, 2).unwrap();
    for deg in -12..=2 {
        assert_eq!(g.module.dim(deg), tr.dim(deg));
    }
}

#[test]
fn hom_from_torsion_sees_only_torsion() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for ring in common::small_rings() {
        for _ in 0..2 {
            let t = common::random_torsion_module(&mut rng, ring.clone());
            let m = common::random_module(&mut rng, ring.clone());
            let r = m.realize(-40, 8).unwrap();
            let w = DegreeWindow::new(-20, 8, 4).unwrap();
            let g = torsion_submodule(&r, &w).unwrap();
            for deg in -4..=4 {
                let a = hom_graded(&t, &r, deg).unwrap().dim();
                let b = hom_graded(&t, &g.module, deg).unwrap().dim();
                assert_eq!(a, b, "t = {deg}");
            }
        }
    }
}
