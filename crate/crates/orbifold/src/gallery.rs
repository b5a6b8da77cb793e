//! The example gallery: teardrops, footballs, solid and solid hollow
//! footballs, the figure-eight singular set, the antipodal cone, and the
//! group actions behind the global-quotient examples.
//!
//! Triangulations are the smallest convenient ones with the required
//! isotropy structure; every invariant computed downstream is
//! triangulation-independent.

use std::collections::{BTreeMap, BTreeSet};

use crate::complex::{octahedron, Simplex, SimplicialComplex, VertexComplexBuilder};
use crate::group::FiniteGroup;
use crate::model::{GroupAction, LabeledComplex};
use crate::sectors::ShiftData;

/// A single point with the trivial action of `group`.
pub fn point_with_group(group: FiniteGroup, group_id: &str) -> LabeledComplex {
    let complex = SimplicialComplex::from_simplices(vec![Simplex::vertex(0)]).unwrap();
    let mut shift = ShiftData::new();
    for e in 0..group.order() {
        shift.insert(group_id, e, Vec::new());
    }
    let mut b = LabeledComplex::builder(complex);
    b.group(group_id, group);
    b.label(0, group_id);
    b.shift_data(shift);
    b.finish()
}

/// The Z_k-teardrop: a triangulated sphere whose north pole (vertex 4 of
/// the octahedron) carries a cyclic group of order `k`.
pub fn teardrop(k: usize) -> LabeledComplex {
    assert!(k >= 1);
    let (complex, _) = octahedron();
    let gid = format!("Z{k}");
    let mut shift = ShiftData::new();
    for i in 0..k {
        shift.insert(gid.clone(), i, vec![(i as u64, k as u64)]);
    }
    let mut b = LabeledComplex::builder(complex);
    b.group(gid.clone(), FiniteGroup::cyclic(k));
    b.label(4, &gid);
    b.shift_data(shift);
    b.finish()
}

/// The Z_k-Z_l-football: a sphere whose poles carry cyclic groups of
/// orders `k` and `l`.
pub fn football(k: usize, l: usize) -> LabeledComplex {
    assert!(k >= 1 && l >= 1);
    let (complex, _) = octahedron();
    let north = format!("Z{k}");
    let south = if l == k { north.clone() } else { format!("Z{l}") };
    let mut shift = ShiftData::new();
    for i in 0..k {
        shift.insert(north.clone(), i, vec![(i as u64, k as u64)]);
    }
    for j in 0..l {
        shift.insert(south.clone(), j, vec![(j as u64, l as u64)]);
    }
    let mut b = LabeledComplex::builder(complex);
    b.group(north.clone(), FiniteGroup::cyclic(k));
    if south != north {
        b.group(south.clone(), FiniteGroup::cyclic(l));
    }
    b.label(4, &north);
    b.label(5, &south);
    b.shift_data(shift);
    b.finish()
}

/// The solid Z_k-football: the closed ball (cone over the octahedron, apex
/// vertex 6) with the rotation axis 4 - 6 - 5 carrying cyclic order `k`.
/// The boundary sphere is the Z_k-Z_k-football.
pub fn solid_football(k: usize) -> LabeledComplex {
    assert!(k >= 1);
    let mut vb = VertexComplexBuilder::new();
    for &x in &[0usize, 1] {
        for &y in &[2usize, 3] {
            for &z in &[4usize, 5] {
                vb.add(&[x, y, z, 6]);
            }
        }
    }
    let complex = vb.build();
    let boundary = simplices_within(&vb, &(0..=5).collect::<BTreeSet<_>>());
    let gid = format!("Z{k}");
    let axis_edges = [vb.id_of(&[4, 6]).unwrap(), vb.id_of(&[5, 6]).unwrap()];
    let axis_vertices = [
        vb.id_of(&[4]).unwrap(),
        vb.id_of(&[5]).unwrap(),
        vb.id_of(&[6]).unwrap(),
    ];
    let mut b = LabeledComplex::builder(complex);
    b.group(gid.clone(), FiniteGroup::cyclic(k));
    for v in axis_vertices {
        b.label(v, &gid);
    }
    let identity: Vec<usize> = (0..k).collect();
    for e in axis_edges {
        b.label(e, &gid);
        b.mono_all(e, identity.clone());
    }
    b.boundary(boundary);
    b.finish()
}

/// The Z_k-Z_l solid hollow football: a triangulated spherical shell whose
/// boundary is two footballs and whose interior carries two singular arcs
/// (the vertical pole edges) of orders `k` and `l`.
pub fn solid_hollow_football(k: usize, l: usize) -> LabeledComplex {
    assert!(k >= 1 && l >= 1);
    let mut vb = VertexComplexBuilder::new();
    add_shell(&mut vb, 10);
    let complex = vb.build();

    let outer: BTreeSet<usize> = (0..=5).collect();
    let inner: BTreeSet<usize> = (10..=15).collect();
    let mut boundary = simplices_within(&vb, &outer);
    boundary.extend(simplices_within(&vb, &inner));

    let north = format!("Z{k}");
    let south = if l == k { north.clone() } else { format!("Z{l}") };
    let mut b = LabeledComplex::builder(complex);
    b.group(north.clone(), FiniteGroup::cyclic(k));
    if south != north {
        b.group(south.clone(), FiniteGroup::cyclic(l));
    }
    for (pole, gid, order) in [(4usize, &north, k), (5usize, &south, l)] {
        let arc_vertices = [vb.id_of(&[pole]).unwrap(), vb.id_of(&[pole + 10]).unwrap()];
        let arc_edge = vb.id_of(&[pole, pole + 10]).unwrap();
        for v in arc_vertices {
            b.label(v, gid);
        }
        b.label(arc_edge, gid);
        b.mono_all(arc_edge, (0..order).collect());
    }
    b.boundary(boundary);
    b.finish()
}

/// A triangulated 3-ball whose interior singular set is a figure eight:
/// two circles meeting at a hub vertex carrying the dihedral group of
/// order six, with the circles carrying its cyclic subgroups of orders
/// two and three. The boundary sphere is trivially labeled.
pub fn figure8_disk() -> LabeledComplex {
    let mut vb = VertexComplexBuilder::new();
    add_shell(&mut vb, 10);
    // Cone over the inner octahedron, apex 20 (the hub).
    for &x in &[10usize, 11] {
        for &y in &[12usize, 13] {
            for &z in &[14usize, 15] {
                vb.add(&[x, y, z, 20]);
            }
        }
    }
    let complex = vb.build();
    let boundary = simplices_within(&vb, &(0..=5).collect::<BTreeSet<_>>());

    let d6 = FiniteGroup::dihedral(3);
    let hub = vb.id_of(&[20]).unwrap();
    // D6 element indices: r^a s^b at a + 3b, so r = 1, s = 3.
    let z2_into_d6 = vec![0usize, 3];
    let z3_into_d6 = vec![0usize, 1, 2];

    let mut b = LabeledComplex::builder(complex);
    b.group("D6", d6);
    b.group("Z2", FiniteGroup::cyclic(2));
    b.group("Z3", FiniteGroup::cyclic(3));
    b.label(hub, "D6");

    // Circle A through inner vertices 10, 12 carries Z2.
    label_circle(&vb, &mut b, "Z2", &[10, 12], 20, &z2_into_d6);
    // Circle B through inner vertices 11, 13 carries Z3.
    label_circle(&vb, &mut b, "Z3", &[11, 13], 20, &z3_into_d6);

    b.boundary(boundary);
    b.finish()
}

/// The compactified antipodal quotient: a cone over the real projective
/// plane with the cone point carrying cyclic order two, bounded by the
/// projective plane itself.
pub fn antipodal_ball() -> LabeledComplex {
    let quotient = antipodal_octahedron_action()
        .global_quotient(&BTreeSet::new())
        .expect("antipodal action is regular and orientation-consistent");
    let rp2 = quotient.complex().clone();
    let boundary: BTreeSet<usize> = rp2.ids().collect();
    let (ball, apex) = cone(&rp2);
    let mut b = LabeledComplex::builder(ball);
    b.group("Z2", FiniteGroup::cyclic(2));
    b.label(apex, "Z2");
    b.boundary(boundary);
    b.finish()
}

/// Builds a gallery example by name; parameters follow the CLI surface.
pub fn example(name: &str, k: usize, l: usize) -> Option<LabeledComplex> {
    match name {
        "point_with_group" => None, // needs a group parameter; handled by the caller
        "teardrop" => Some(teardrop(k)),
        "football" => Some(football(k, l)),
        "solid_football" => Some(solid_football(k)),
        "solid_hollow_football" => Some(solid_hollow_football(k, l)),
        "figure8_disk" => Some(figure8_disk()),
        "antipodal_ball" => Some(antipodal_ball()),
        _ => None,
    }
}

/// The antipodal Z2 action on the octahedron sphere (vertex pairs (0,1),
/// (2,3), (4,5) are antipodal).
pub fn antipodal_octahedron_action() -> GroupAction {
    let (k, _) = octahedron();
    let ids: Vec<usize> = k.simplices().filter(|s| s.dim == 0).map(|s| s.id).collect();
    let identity: BTreeMap<usize, usize> = ids.iter().map(|&v| (v, v)).collect();
    let flip: BTreeMap<usize, usize> = ids.iter().map(|&v| (v, v ^ 1)).collect();
    GroupAction::new(FiniteGroup::cyclic(2), k, vec![identity, flip])
        .expect("antipodal map is simplicial")
}

/// Z3 rotating the suspension of a triangle: a triangulated sphere with
/// the two poles (vertices 3 and 4) fixed.
pub fn football_suspension_action() -> GroupAction {
    let mut b = VertexComplexBuilder::new();
    for e in [[0usize, 1], [1, 2], [0, 2]] {
        b.add(&[e[0], e[1], 3]);
        b.add(&[e[0], e[1], 4]);
    }
    let k = b.build();
    let rot = |v: usize| -> usize {
        match v {
            0 => 1,
            1 => 2,
            2 => 0,
            p => p,
        }
    };
    let perms: Vec<BTreeMap<usize, usize>> = (0..3)
        .map(|g| {
            (0..5)
                .map(|v| {
                    let mut x = v;
                    for _ in 0..g {
                        x = rot(x);
                    }
                    (v, x)
                })
                .collect()
        })
        .collect();
    GroupAction::new(FiniteGroup::cyclic(3), k, perms).expect("rotation is simplicial")
}

/// Cone over an arbitrary complex: keeps the base's ids, adds an apex and
/// one cone simplex per base simplex. Returns the cone and the apex id.
pub fn cone(base: &SimplicialComplex) -> (SimplicialComplex, usize) {
    let offset = base.ids().max().map_or(1, |m| m + 1);
    let apex = offset;
    let cone_id = |id: usize| id + offset + 1;
    let mut entries: Vec<Simplex> = base.simplices().cloned().collect();
    entries.push(Simplex::vertex(apex));
    for s in base.simplices() {
        let mut facets: Vec<usize>;
        if s.dim == 0 {
            // Cone edge over a vertex v: boundary apex - v.
            facets = vec![apex, s.id];
        } else {
            facets = s.facets.iter().map(|&f| cone_id(f)).collect();
            facets.push(s.id);
        }
        entries.push(Simplex::new(cone_id(s.id), s.dim + 1, facets));
    }
    let complex = SimplicialComplex::from_simplices(entries).expect("cone of a complex is a complex");
    (complex, apex)
}

/// Number of simplices carrying a group of the given order; used as the
/// independent cell count for the figure-eight circle sectors.
pub fn figure8_circle_size(l: &LabeledComplex, order: usize) -> usize {
    l.complex()
        .ids()
        .filter(|&id| l.group_of(id).order() == order)
        .count()
}

/// Ids of all simplices whose vertex labels lie inside `vertices`.
fn simplices_within(vb: &VertexComplexBuilder, vertices: &BTreeSet<usize>) -> BTreeSet<usize> {
    vb.vertex_table()
        .iter()
        .filter(|(_, vs)| vs.iter().all(|v| vertices.contains(v)))
        .map(|(&id, _)| id)
        .collect()
}

/// Adds the triangulated shell (octahedron x interval) between the
/// octahedron on vertex labels 0..=5 and its copy shifted by `offset`.
/// Every prism is split by the staircase over ascending vertex labels.
fn add_shell(vb: &mut VertexComplexBuilder, offset: usize) {
    for &x in &[0usize, 1] {
        for &y in &[2usize, 3] {
            for &z in &[4usize, 5] {
                let (a, b, c) = (x, y, z); // already ascending: x < y < z
                vb.add(&[a, b, c, c + offset]);
                vb.add(&[a, b, b + offset, c + offset]);
                vb.add(&[a, a + offset, b + offset, c + offset]);
            }
        }
    }
}

/// Labels one circle of the figure eight: the inner edge between `pair`,
/// the two cone edges to the hub, and the two vertices.
fn label_circle(
    vb: &VertexComplexBuilder,
    b: &mut crate::model::LabeledComplexBuilder,
    gid: &str,
    pair: &[usize; 2],
    hub_label: usize,
    into_hub: &[usize],
) {
    let order = into_hub.len();
    let identity: Vec<usize> = (0..order).collect();
    for &v in pair {
        b.label(vb.id_of(&[v]).unwrap(), gid);
    }
    let inner_edge = vb.id_of(&[pair[0], pair[1]]).unwrap();
    b.label(inner_edge, gid);
    b.mono_all(inner_edge, identity.clone());
    for &v in pair {
        let e = vb.id_of(&[v, hub_label]).unwrap();
        b.label(e, gid);
        // Position 0 omits the smaller vertex (the circle vertex), so it
        // faces the hub; position 1 faces the circle vertex.
        b.mono(e, 0, into_hub.to_vec());
        b.mono(e, 1, identity.clone());
    }
}
