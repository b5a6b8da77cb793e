//! Seeded random labeled complexes for the property suites.
//!
//! The complexes are cones and suspensions over random connected graphs,
//! in dimensions two and three, with singular structure confined to a
//! vertex-edge stratum (as in the gallery): a labeled path through a pole
//! or apex, optionally ending in a larger group, plus isolated labeled
//! vertices. Monomorphisms are drawn uniformly from the valid choices for
//! each group pair and reused along the stratum, so composed routes agree
//! and every sector cell complex is a genuine chain complex.

use std::collections::BTreeSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::complex::VertexComplexBuilder;
use crate::group::FiniteGroup;
use crate::model::LabeledComplex;

const POLE_A: usize = 100;
const POLE_B: usize = 101;
const POLE_C: usize = 200;
const POLE_D: usize = 201;

/// A deterministic random labeled complex. With `require_closed` the
/// result has no declared boundary; otherwise roughly half the samples
/// declare their natural base or link as boundary.
pub fn random_labeled_complex(seed: u64, require_closed: bool) -> LabeledComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Random connected base graph: a cycle plus chords.
    let n = rng.gen_range(3..=6usize);
    let mut edges: BTreeSet<(usize, usize)> = (0..n).map(|i| ordered(i, (i + 1) % n)).collect();
    for _ in 0..rng.gen_range(0..=3usize) {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            edges.insert(ordered(a, b));
        }
    }

    let three_dimensional = rng.gen_bool(0.5);
    let bounded = !require_closed && rng.gen_bool(0.5);

    let mut vb = VertexComplexBuilder::new();
    let mut boundary_labels: Option<BTreeSet<usize>> = None;
    if three_dimensional {
        if bounded {
            // Cone over the suspension of the graph; boundary = suspension.
            for &(a, b) in &edges {
                for pole in [POLE_A, POLE_B] {
                    vb.add(&[a, b, pole, POLE_C]);
                }
            }
            let mut bd: BTreeSet<usize> = (0..n).collect();
            bd.insert(POLE_A);
            bd.insert(POLE_B);
            boundary_labels = Some(bd);
        } else {
            // Double suspension of the graph.
            for &(a, b) in &edges {
                for p in [POLE_A, POLE_B] {
                    for q in [POLE_C, POLE_D] {
                        vb.add(&[a, b, p, q]);
                    }
                }
            }
        }
    } else if bounded {
        // Cone over the graph; boundary = the graph.
        for &(a, b) in &edges {
            vb.add(&[a, b, POLE_C]);
        }
        boundary_labels = Some((0..n).collect());
    } else {
        // Suspension of the graph.
        for &(a, b) in &edges {
            vb.add(&[a, b, POLE_A]);
            vb.add(&[a, b, POLE_B]);
        }
    }
    let complex = vb.build();

    let boundary: BTreeSet<usize> = match &boundary_labels {
        Some(labels) => vb
            .vertex_table()
            .iter()
            .filter(|(_, vs)| vs.iter().all(|v| labels.contains(v)))
            .map(|(&id, _)| id)
            .collect(),
        None => BTreeSet::new(),
    };

    let mut b = LabeledComplex::builder(complex);

    // Singular path through the cone/suspension point, sometimes absent.
    if rng.gen_bool(0.75) {
        let base_group = random_base_group(&mut rng);
        b.group("G", base_group.clone());
        let hub = if three_dimensional || bounded { POLE_C } else { POLE_A };
        let v = rng.gen_range(0..n);

        // Path hub - v, extended across a second pole when available.
        let mut path_vertices = vec![hub, v];
        if !three_dimensional && !bounded && rng.gen_bool(0.5) {
            path_vertices.push(POLE_B);
        }
        if three_dimensional && !bounded && rng.gen_bool(0.5) {
            path_vertices.push(POLE_D);
        }

        // Either the hub keeps the base group or it gets an overgroup.
        let hub_overgroup = if rng.gen_bool(0.5) {
            let (h, mono) = random_overgroup(&mut rng, &base_group);
            b.group("H", h);
            Some(mono)
        } else {
            None
        };

        let identity: Vec<usize> = (0..base_group.order()).collect();
        let group_at = |label: usize| -> (&str, Option<&Vec<usize>>) {
            if label == hub && hub_overgroup.is_some() {
                ("H", hub_overgroup.as_ref())
            } else {
                ("G", None)
            }
        };

        for &label in &path_vertices {
            let (gid, _) = group_at(label);
            b.label(vb.id_of(&[label]).unwrap(), gid);
        }
        for window in path_vertices.windows(2) {
            let (u, w) = (window[0], window[1]);
            let edge = vb.id_of(&[u, w]).expect("path edges exist in the shape");
            b.label(edge, "G");
            // Position 0 omits the smaller label, facing the larger one.
            let (small, large) = if u < w { (u, w) } else { (w, u) };
            for (pos, vertex) in [(0usize, large), (1, small)] {
                let map = match group_at(vertex) {
                    (_, Some(mono)) => mono.clone(),
                    _ => identity.clone(),
                };
                b.mono(edge, pos, map);
            }
        }

        // Isolated singular vertices away from the path.
        let mut extra = 0;
        for _ in 0..rng.gen_range(0..=2usize) {
            let w = rng.gen_range(0..n);
            if path_vertices.contains(&w) {
                continue;
            }
            let gid = format!("S{extra}");
            extra += 1;
            b.group(gid.clone(), random_base_group(&mut rng));
            b.label(vb.id_of(&[w]).unwrap(), &gid);
        }
    }

    b.boundary(boundary);
    b.finish()
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn random_base_group(rng: &mut ChaCha8Rng) -> FiniteGroup {
    match rng.gen_range(0..7usize) {
        0 => FiniteGroup::cyclic(2),
        1 => FiniteGroup::cyclic(3),
        2 => FiniteGroup::cyclic(4),
        3 => FiniteGroup::cyclic(5),
        4 => FiniteGroup::cyclic(6),
        5 => FiniteGroup::dihedral(2),
        _ => FiniteGroup::dihedral(3),
    }
}

/// A strictly larger group containing `base`, with a monomorphism drawn
/// uniformly among the valid generator images (or the identity embedding
/// pattern for dihedral bases).
fn random_overgroup(rng: &mut ChaCha8Rng, base: &FiniteGroup) -> (FiniteGroup, Vec<usize>) {
    let k = base.order();
    let cyclic_base = (0..k).all(|i| base.mul(1.min(k - 1), i) == (i + 1) % k);
    if cyclic_base && k >= 2 {
        let target = match rng.gen_range(0..3usize) {
            0 => FiniteGroup::cyclic(2 * k),
            1 => FiniteGroup::cyclic(3 * k),
            _ => FiniteGroup::dihedral(k),
        };
        // All elements of order exactly k generate valid embeddings.
        let candidates: Vec<usize> = (0..target.order())
            .filter(|&h| target.element_order(h) == k)
            .collect();
        let image = candidates[rng.gen_range(0..candidates.len())];
        let mut map = Vec::with_capacity(k);
        let mut h = 0usize;
        for _ in 0..k {
            map.push(h);
            h = target.mul(h, image);
        }
        (target, map)
    } else {
        // Dihedral(m) into dihedral(2m): r -> r^2, s -> s.
        let m = k / 2;
        let target = FiniteGroup::dihedral(2 * m);
        let map = (0..k)
            .map(|e| {
                let (a, b) = (e % m, e / m);
                2 * a + 2 * m * b
            })
            .collect();
        (target, map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_complexes_validate() {
        for seed in 0..40u64 {
            let l = random_labeled_complex(seed, seed % 2 == 0);
            let report = l.validate();
            assert!(
                report.is_valid(),
                "seed {seed}: {:?}",
                report
                    .violations
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn closed_flag_is_respected() {
        for seed in 0..20u64 {
            let l = random_labeled_complex(seed, true);
            assert!(l.is_closed());
        }
    }

    #[test]
    fn generation_is_deterministic() {
        for seed in [0u64, 7, 99] {
            let a = random_labeled_complex(seed, false);
            let b = random_labeled_complex(seed, false);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn samples_cover_bounded_and_labeled_cases() {
        let mut bounded = 0;
        let mut labeled = 0;
        for seed in 0..40u64 {
            let l = random_labeled_complex(seed, false);
            if !l.is_closed() {
                bounded += 1;
            }
            if l.complex().ids().any(|id| !l.group_of(id).is_trivial()) {
                labeled += 1;
            }
        }
        assert!(bounded > 5);
        assert!(labeled > 20);
    }
}
