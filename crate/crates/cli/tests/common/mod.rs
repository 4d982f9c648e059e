#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use tormod::examples::{klein_ring, s3_ring};
use tormod::rational::int;
use tormod::ring::{o2_ring, polynomial_ring, RingElement};
use tormod::{GradedModulePresentation, TwistedGroupRing};

pub fn small_rings() -> Vec<Arc<TwistedGroupRing>> {
    vec![
        o2_ring(),
        polynomial_ring(1),
        polynomial_ring(2),
        klein_ring(),
        s3_ring(),
    ]
}

fn random_element<R: Rng>(rng: &mut R, ring: &TwistedGroupRing, degree: i64) -> RingElement {
    let monomials = ring.monomials(degree);
    let mut a = RingElement::zero();
    if monomials.is_empty() {
        return a;
    }
    for _ in 0..rng.gen_range(1..=2) {
        let m = monomials[rng.gen_range(0..monomials.len())].clone();
        let g = rng.gen_range(0..ring.group().order());
        let c = rng.gen_range(-2i64..=2);
        if c != 0 {
            a.add_term(m, g, int(c));
        }
    }
    a
}

/// Generators in degrees 0 or -2, relations in degrees >= -6.
fn random_presentation<R: Rng>(rng: &mut R, ring: Arc<TwistedGroupRing>, torsion: bool) -> GradedModulePresentation {
    let ngens = rng.gen_range(1..=2);
    let gens: Vec<(String, i64)> = (0..ngens)
        .map(|j| (format!("u{j}"), -2 * rng.gen_range(0..=1i64)))
        .collect();
    let mut relations = Vec::new();
    if torsion {
        for (j, &(_, d)) in gens.iter().enumerate() {
            for i in 0..ring.nvars() {
                let room = (6 + d) / -ring.degree(i);
                let k = rng.gen_range(1..=room.max(1)) as u32;
                let mut exps = vec![0; ring.nvars()];
                exps[i] = k;
                let mut rel = vec![RingElement::zero(); ngens];
                rel[j] = RingElement::term(tormod::ring::Monomial(exps), 0, int(1));
                relations.push(rel);
            }
        }
    }
    for _ in 0..rng.gen_range(0..=2) {
        let top = gens.iter().map(|g| g.1).max().unwrap();
        let degree = (top - 2 * rng.gen_range(0..=3i64)).max(-6);
        let rel: Vec<RingElement> = gens
            .iter()
            .map(|&(_, d)| {
                if d >= degree {
                    random_element(rng, &ring, degree - d)
                } else {
                    RingElement::zero()
                }
            })
            .collect();
        if rel.iter().any(|a| !a.is_zero()) {
            relations.push(rel);
        }
    }
    GradedModulePresentation::new(ring, gens, relations).expect("homogeneous by construction")
}

pub fn random_torsion_module<R: Rng>(rng: &mut R, ring: Arc<TwistedGroupRing>) -> GradedModulePresentation {
    random_presentation(rng, ring, true)
}

pub fn random_module<R: Rng>(rng: &mut R, ring: Arc<TwistedGroupRing>) -> GradedModulePresentation {
    random_presentation(rng, ring, false)
}
