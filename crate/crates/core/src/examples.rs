//! Bundled rings, modules, representations and DG algebras.

use std::sync::Arc;

use crate::error::Result;
use crate::formality::{free_cdga, EquivariantDGA, FreeCdgaSpec, IndecomposableData};
use crate::group::{FiniteGroup, Representation};
use crate::linalg::{restrict_map, RationalMatrix, Subspace};
use crate::module::GradedModulePresentation;
use crate::rational::int;
use crate::ring::{o2_ring, GeneratorSpace, TwistedGroupRing};

pub fn z2() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::cyclic(2))
}

pub fn klein() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::klein_four())
}

pub fn s3() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::symmetric3())
}

/// Permutation representation of S3 on Q^3, matching the element order of
/// [`FiniteGroup::symmetric3`].
pub fn s3_permutation() -> Representation {
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
    let matrices = perms
        .iter()
        .map(|p| {
            let mut m = RationalMatrix::zeros(3, 3);
            for (i, &j) in p.iter().enumerate() {
                m.set(j, i, int(1));
            }
            m
        })
        .collect();
    Representation::new(s3(), 3, matrices).expect("permutation matrices")
}

/// The 2-dimensional irreducible representation of S3 on the sum-zero
/// plane, basis `e1 - e2, e2 - e3`.
pub fn s3_standard() -> Representation {
    let perm = s3_permutation();
    let plane = Subspace::from_independent(3, vec![vec![int(1), int(-1), int(0)], vec![int(0), int(1), int(-1)]])
        .expect("independent");
    let matrices = perm
        .matrices()
        .iter()
        .map(|m| restrict_map(m, &plane, &plane).expect("invariant plane"))
        .collect();
    Representation::new(s3(), 2, matrices).expect("restricted representation")
}

pub fn s3_sign() -> Representation {
    Representation::character(s3(), &[1, -1, -1, -1, 1, 1]).expect("sign character")
}

/// Named representations of Z/2, Z/2×Z/2 and S3.
pub fn bundled_representations() -> Vec<(String, Representation)> {
    let mut out = Vec::new();
    let z = z2();
    let sign = Representation::character(z.clone(), &[1, -1]).expect("sign");
    out.push(("Z2 trivial".into(), Representation::trivial(z.clone(), 1)));
    out.push(("Z2 sign".into(), sign.clone()));
    out.push(("Z2 regular".into(), Representation::regular(z.clone())));
    out.push((
        "Z2 trivial+2sign".into(),
        Representation::trivial(z, 1).direct_sum(&sign).direct_sum(&sign),
    ));
    let k = klein();
    for (name, signs) in [("a", [1, -1, 1, -1]), ("b", [1, 1, -1, -1]), ("ab", [1, -1, -1, 1])] {
        out.push((
            format!("Klein character {name}"),
            Representation::character(k.clone(), &signs).expect("character"),
        ));
    }
    out.push(("Klein regular".into(), Representation::regular(k.clone())));
    let ka = Representation::character(k.clone(), &[1, -1, 1, -1]).expect("character");
    let kb = Representation::character(k, &[1, 1, -1, -1]).expect("character");
    out.push(("Klein a+b".into(), ka.direct_sum(&kb)));
    out.push(("S3 trivial".into(), Representation::trivial(s3(), 1)));
    out.push(("S3 sign".into(), s3_sign()));
    out.push(("S3 standard".into(), s3_standard()));
    out.push(("S3 permutation".into(), s3_permutation()));
    out.push(("S3 regular".into(), Representation::regular(s3())));
    out
}

/// `Q[x1, x2]` in degree -2 with Z/2×Z/2 acting by independent sign changes.
pub fn klein_ring() -> Arc<TwistedGroupRing> {
    let k = klein();
    let a = Representation::character(k.clone(), &[1, -1, 1, -1]).expect("character");
    let b = Representation::character(k, &[1, 1, -1, -1]).expect("character");
    let gens = GeneratorSpace::new(vec!["x1".into(), "x2".into()], vec![-2, -2], a.direct_sum(&b)).expect("valid");
    TwistedGroupRing::new(gens).expect("valid ring")
}

/// `Q[x1, x2]` in degree -2 with S3 acting through its standard representation.
pub fn s3_ring() -> Arc<TwistedGroupRing> {
    let gens = GeneratorSpace::new(vec!["x1".into(), "x2".into()], vec![-2, -2], s3_standard()).expect("valid");
    TwistedGroupRing::new(gens).expect("valid ring")
}

/// Torsion modules over `Q[c][Z/2]` used throughout the tests.
pub fn o2_torsion_examples() -> Vec<(String, GradedModulePresentation)> {
    let ring = o2_ring();
    let qw = GradedModulePresentation::residue_regular(ring.clone());
    let parse = |rels: &[&str]| {
        let rels: Vec<String> = rels.iter().map(|s| s.to_string()).collect();
        GradedModulePresentation::parse(ring.clone(), vec![("u".into(), 0)], &rels).expect("bundled presentation")
    };
    vec![
        ("QW".into(), qw.clone()),
        ("sigma2 QW".into(), qw.suspend(2)),
        ("sigma-4 QW".into(), qw.suspend(-4)),
        (
            "Q trivial".into(),
            GradedModulePresentation::residue_trivial(ring.clone()),
        ),
        ("R[W]/c^2".into(), parse(&["c^2*u"])),
        ("R[W]/(c^3, c*(e+w))".into(), parse(&["c^3*u", "c*e*u + c*w*u"])),
    ]
}

/// The free graded-commutative algebra `Q[c] ⊗ Λ[a] ⊗ Q[b]` with
/// `deg a = -1`, `deg b = deg c = -2`, `d a = b`, and Z/2 negating `c`,
/// written in the basis `{u, b}` of degree -2, `u = c + b`.
pub fn c1_dga(cutoff: usize) -> Result<EquivariantDGA> {
    let g = z2();
    let plus = Representation::trivial(g.clone(), 1);
    let minus = Representation::character(g, &[1, -1])?;
    let spec = FreeCdgaSpec {
        names: vec!["a".into(), "c".into(), "b".into()],
        degrees: vec![-1, -2, -2],
        differentials: vec!["b".into(), String::new(), String::new()],
        action: plus.direct_sum(&minus).direct_sum(&plus),
    };
    let c = free_cdga(&spec, cutoff)?;
    let p = RationalMatrix::from_i64(&[&[1, 0], &[1, 1]]);
    c.with_basis_change(-2, vec!["u".into(), "b".into()], &p)
}

/// One generator `x` in degree -2 with the sign action of Z/2.
pub fn c1_indecomposables() -> Result<IndecomposableData> {
    IndecomposableData::new(vec!["x".into()], vec![-2], Representation::character(z2(), &[1, -1])?)
}

/// `Q[c]` with zero differential and Z/2 negating `c`.
pub fn formal_dga(cutoff: usize) -> Result<EquivariantDGA> {
    let spec = FreeCdgaSpec {
        names: vec!["c".into()],
        degrees: vec![-2],
        differentials: vec![String::new()],
        action: Representation::character(z2(), &[1, -1])?,
    };
    free_cdga(&spec, cutoff)
}

/// `Q[x, y]`, `deg x = -2`, `deg y = -4`, zero differential, trivial Z/2.
pub fn two_degree_formal_dga(cutoff: usize) -> Result<(EquivariantDGA, IndecomposableData)> {
    let action = Representation::trivial(z2(), 2);
    let spec = FreeCdgaSpec {
        names: vec!["x".into(), "y".into()],
        degrees: vec![-2, -4],
        differentials: vec![String::new(), String::new()],
        action: action.clone(),
    };
    let v = IndecomposableData::new(vec!["x".into(), "y".into()], vec![-2, -4], action)?;
    Ok((free_cdga(&spec, cutoff)?, v))
}
