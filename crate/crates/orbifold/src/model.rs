//! Orbifolds presented combinatorially.
//!
//! A [`LabeledComplex`] is the combinatorial stand-in for a triangulated
//! orbifold whose isotropy order is constant on open simplices: each simplex
//! carries a finite group, and each (simplex, facet) pair carries a
//! monomorphism from the simplex's group into the facet's group. Boundary is
//! declared, not inferred. A [`GroupAction`] on a complex produces such a
//! labeled complex as its global quotient.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::complex::{ComplexError, Simplex, SimplicialComplex};
use crate::group::{FiniteGroup, Monomorphism};
use crate::sectors::ShiftData;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("element {element} does not act by a vertex bijection")]
    NotBijective { element: usize },
    #[error("expected one vertex permutation per group element")]
    PermutationCount,
    #[error("element {element} does not map simplex {simplex} to a simplex")]
    NotSimplicial { element: usize, simplex: usize },
    #[error("vertex permutations are not a homomorphism at ({a}, {b})")]
    NotHomomorphism { a: usize, b: usize },
    #[error("simplex {simplex} does not store facets in ascending vertex order")]
    NotCanonicalOrder { simplex: usize },
    #[error("simplices {a} and {b} share a vertex set")]
    DuplicateVertexSet { a: usize, b: usize },
    #[error("action is not regular: element {element} fixes simplex {simplex} setwise but not pointwise")]
    NotRegular { element: usize, simplex: usize },
    #[error("declared boundary is not invariant: element {element} moves simplex {simplex} out of it")]
    BoundaryNotInvariant { element: usize, simplex: usize },
    #[error("declared boundary is not face-closed at simplex {id}")]
    BoundaryNotClosed { id: usize },
    #[error(
        "orbit identifications are orientation-inconsistent at quotient simplex {simplex}; \
         barycentrically subdivide the action first"
    )]
    InconsistentOrientation { simplex: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A group in a labeled complex's registry, addressable by a stable id
/// (the id is what shift data and the JSON schema refer to).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedGroup {
    pub id: String,
    pub group: FiniteGroup,
}

/// A simplicial complex with isotropy labels, face monomorphisms, and a
/// declared boundary subcomplex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledComplex {
    complex: SimplicialComplex,
    groups: Vec<NamedGroup>,
    group_of: BTreeMap<usize, usize>,
    /// Raw monomorphism maps keyed by (simplex id, facet position).
    face_monos: BTreeMap<(usize, usize), Vec<usize>>,
    boundary_ids: BTreeSet<usize>,
    shift_data: Option<ShiftData>,
    implicit_trivial: Option<usize>,
}

impl LabeledComplex {
    /// Assembles a labeled complex, filling in the forced data: simplices
    /// without an assignment get a trivial group, and every facet position
    /// whose source group is trivial gets the unique monomorphism.
    pub fn assemble(
        complex: SimplicialComplex,
        groups: Vec<NamedGroup>,
        mut group_of: BTreeMap<usize, usize>,
        mut face_monos: BTreeMap<(usize, usize), Vec<usize>>,
        boundary_ids: BTreeSet<usize>,
        shift_data: Option<ShiftData>,
    ) -> Self {
        let mut groups = groups;
        let needs_trivial = complex.ids().any(|id| !group_of.contains_key(&id));
        let implicit_trivial = if needs_trivial {
            let idx = groups.len();
            let mut name = "1".to_string();
            while groups.iter().any(|g| g.id == name) {
                name.push('_');
            }
            groups.push(NamedGroup {
                id: name,
                group: FiniteGroup::trivial(),
            });
            Some(idx)
        } else {
            None
        };
        if let Some(idx) = implicit_trivial {
            for id in complex.ids().collect::<Vec<_>>() {
                group_of.entry(id).or_insert(idx);
            }
        }
        for s in complex.simplices() {
            let gi = group_of[&s.id];
            if groups[gi].group.is_trivial() {
                for pos in 0..s.facets.len() {
                    face_monos.entry((s.id, pos)).or_insert_with(|| vec![0]);
                }
            }
        }
        LabeledComplex {
            complex,
            groups,
            group_of,
            face_monos,
            boundary_ids,
            shift_data,
            implicit_trivial,
        }
    }

    pub fn builder(complex: SimplicialComplex) -> LabeledComplexBuilder {
        LabeledComplexBuilder {
            complex,
            groups: Vec::new(),
            group_of: BTreeMap::new(),
            face_monos: BTreeMap::new(),
            boundary_ids: BTreeSet::new(),
            shift_data: None,
        }
    }

    pub fn trivially_labeled(complex: SimplicialComplex) -> Self {
        LabeledComplex::assemble(
            complex,
            Vec::new(),
            BTreeMap::new(),
            BTreeMap::new(),
            BTreeSet::new(),
            None,
        )
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn groups(&self) -> &[NamedGroup] {
        &self.groups
    }

    pub fn group_index_of(&self, simplex: usize) -> usize {
        self.group_of[&simplex]
    }

    pub fn group_of(&self, simplex: usize) -> &FiniteGroup {
        &self.groups[self.group_of[&simplex]].group
    }

    pub fn group_id_of(&self, simplex: usize) -> &str {
        &self.groups[self.group_of[&simplex]].id
    }

    pub fn mono_map(&self, simplex: usize, position: usize) -> Option<&[usize]> {
        self.face_monos
            .get(&(simplex, position))
            .map(|v| v.as_slice())
    }

    pub fn face_monos(&self) -> &BTreeMap<(usize, usize), Vec<usize>> {
        &self.face_monos
    }

    pub fn boundary_ids(&self) -> &BTreeSet<usize> {
        &self.boundary_ids
    }

    pub fn is_closed(&self) -> bool {
        self.boundary_ids.is_empty()
    }

    pub fn shift_data(&self) -> Option<&ShiftData> {
        self.shift_data.as_ref()
    }

    pub fn set_shift_data(&mut self, data: Option<ShiftData>) {
        self.shift_data = data;
    }

    pub fn implicit_trivial_index(&self) -> Option<usize> {
        self.implicit_trivial
    }

    /// The boundary subcomplex with its labels, as a closed labeled complex.
    pub fn boundary_restriction(&self) -> LabeledComplex {
        let sub = self
            .complex
            .subcomplex(&self.boundary_ids)
            .expect("declared boundary of a validated complex is face-closed");
        let group_of = self
            .group_of
            .iter()
            .filter(|(id, _)| self.boundary_ids.contains(id))
            .map(|(&id, &g)| (id, g))
            .collect();
        let face_monos = self
            .face_monos
            .iter()
            .filter(|((id, _), _)| self.boundary_ids.contains(id))
            .map(|(&k, v)| (k, v.clone()))
            .collect();
        LabeledComplex {
            complex: sub,
            groups: self.groups.clone(),
            group_of,
            face_monos,
            boundary_ids: BTreeSet::new(),
            shift_data: self.shift_data.clone(),
            implicit_trivial: self.implicit_trivial,
        }
    }

    /// Checks every structural invariant and returns the full list of
    /// violations (empty for a valid complex).
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();

        for s in self.complex.simplices() {
            let Some(&gi) = self.group_of.get(&s.id) else {
                violations.push(Violation::MissingGroup { simplex: s.id });
                continue;
            };
            let source = &self.groups[gi].group;
            for (pos, &facet) in s.facets.iter().enumerate() {
                let target = self.group_of(facet);
                if target.order() % source.order() != 0 {
                    violations.push(Violation::OrderDoesNotDivide {
                        simplex: s.id,
                        facet,
                    });
                }
                match self.face_monos.get(&(s.id, pos)) {
                    None => violations.push(Violation::MissingFaceMono {
                        simplex: s.id,
                        position: pos,
                    }),
                    Some(map) => {
                        if let Err(e) = Monomorphism::new(source, target, map.clone()) {
                            violations.push(Violation::InvalidFaceMono {
                                simplex: s.id,
                                position: pos,
                                reason: e.to_string(),
                            });
                        }
                    }
                }
            }
        }

        for &id in &self.boundary_ids {
            if !self.complex.contains(id) {
                violations.push(Violation::BoundaryMissingSimplex { id });
                continue;
            }
            if self.complex.simplex(id).dim == self.complex.dim() {
                violations.push(Violation::BoundaryContainsTop { id });
            }
            for &f in &self.complex.simplex(id).facets {
                if !self.boundary_ids.contains(&f) {
                    violations.push(Violation::BoundaryNotFaceClosed { id, missing: f });
                }
            }
        }

        if let Some(data) = &self.shift_data {
            let dim = self.complex.dim();
            for (gid, per_elem) in data.entries() {
                let Some(named) = self.groups.iter().find(|g| &g.id == gid) else {
                    violations.push(Violation::ShiftDataUnknownGroup { group: gid.clone() });
                    continue;
                };
                for (&elem, pairs) in per_elem {
                    if elem >= named.group.order() {
                        violations.push(Violation::ShiftDataBadElement {
                            group: gid.clone(),
                            element: elem,
                        });
                        continue;
                    }
                    for &(mi, m) in pairs {
                        if m == 0 || mi >= m {
                            violations.push(Violation::ShiftDataBadExponent {
                                group: gid.clone(),
                                element: elem,
                            });
                        }
                    }
                    if dim % 2 == 0 && pairs.len() != dim / 2 {
                        violations.push(Violation::ShiftDataBadLength {
                            group: gid.clone(),
                            element: elem,
                            expected: dim / 2,
                            found: pairs.len(),
                        });
                    }
                }
            }
        }

        // With the local data consistent, the sector cell complexes must be
        // genuine chain complexes; incoherently composed monomorphisms are
        // the only way to break this.
        if violations.is_empty() {
            let dec = crate::sectors::decompose(self);
            for (t, sector) in dec.sectors().iter().enumerate() {
                if !sector.chain().square_is_zero() {
                    violations.push(Violation::SectorBoundaryBroken { sector: t });
                }
            }
        }

        ValidationReport { violations }
    }
}

/// Incremental construction of a labeled complex; used by the gallery, the
/// JSON loader and the random generator.
pub struct LabeledComplexBuilder {
    complex: SimplicialComplex,
    groups: Vec<NamedGroup>,
    group_of: BTreeMap<usize, usize>,
    face_monos: BTreeMap<(usize, usize), Vec<usize>>,
    boundary_ids: BTreeSet<usize>,
    shift_data: Option<ShiftData>,
}

impl LabeledComplexBuilder {
    pub fn group(&mut self, id: impl Into<String>, group: FiniteGroup) -> &mut Self {
        self.groups.push(NamedGroup {
            id: id.into(),
            group,
        });
        self
    }

    pub fn label(&mut self, simplex: usize, group_id: &str) -> &mut Self {
        let idx = self
            .groups
            .iter()
            .position(|g| g.id == group_id)
            .unwrap_or_else(|| panic!("unknown group id {group_id}"));
        self.group_of.insert(simplex, idx);
        self
    }

    pub fn mono(&mut self, simplex: usize, position: usize, map: Vec<usize>) -> &mut Self {
        self.face_monos.insert((simplex, position), map);
        self
    }

    /// Declares the monomorphism `map` on every facet position of `simplex`
    /// (the common case for edges inside a singular stratum).
    pub fn mono_all(&mut self, simplex: usize, map: Vec<usize>) -> &mut Self {
        let n = self.complex.simplex(simplex).facets.len();
        for pos in 0..n {
            self.face_monos.insert((simplex, pos), map.clone());
        }
        self
    }

    pub fn boundary(&mut self, ids: impl IntoIterator<Item = usize>) -> &mut Self {
        self.boundary_ids.extend(ids);
        self
    }

    pub fn shift_data(&mut self, data: ShiftData) -> &mut Self {
        self.shift_data = Some(data);
        self
    }

    pub fn finish(self) -> LabeledComplex {
        LabeledComplex::assemble(
            self.complex,
            self.groups,
            self.group_of,
            self.face_monos,
            self.boundary_ids,
            self.shift_data,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MissingGroup { simplex: usize },
    MissingFaceMono { simplex: usize, position: usize },
    InvalidFaceMono { simplex: usize, position: usize, reason: String },
    OrderDoesNotDivide { simplex: usize, facet: usize },
    BoundaryMissingSimplex { id: usize },
    BoundaryContainsTop { id: usize },
    BoundaryNotFaceClosed { id: usize, missing: usize },
    ShiftDataUnknownGroup { group: String },
    ShiftDataBadElement { group: String, element: usize },
    ShiftDataBadExponent { group: String, element: usize },
    ShiftDataBadLength { group: String, element: usize, expected: usize, found: usize },
    SectorBoundaryBroken { sector: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingGroup { simplex } => write!(f, "simplex {simplex} has no group"),
            Violation::MissingFaceMono { simplex, position } => {
                write!(f, "missing face_mono at simplex {simplex}, position {position}")
            }
            Violation::InvalidFaceMono {
                simplex,
                position,
                reason,
            } => write!(
                f,
                "invalid face_mono at simplex {simplex}, position {position}: {reason}"
            ),
            Violation::OrderDoesNotDivide { simplex, facet } => write!(
                f,
                "group order of simplex {simplex} does not divide that of facet {facet}"
            ),
            Violation::BoundaryMissingSimplex { id } => {
                write!(f, "boundary references missing simplex {id}")
            }
            Violation::BoundaryContainsTop { id } => {
                write!(f, "boundary contains top-dimensional simplex {id}")
            }
            Violation::BoundaryNotFaceClosed { id, missing } => {
                write!(f, "boundary is not face-closed: {id} needs {missing}")
            }
            Violation::ShiftDataUnknownGroup { group } => {
                write!(f, "shift data references unknown group {group}")
            }
            Violation::ShiftDataBadElement { group, element } => {
                write!(f, "shift data for group {group} has out-of-range element {element}")
            }
            Violation::ShiftDataBadExponent { group, element } => {
                write!(f, "shift data for group {group}, element {element} violates 0 <= m_i < m")
            }
            Violation::ShiftDataBadLength {
                group,
                element,
                expected,
                found,
            } => write!(
                f,
                "shift data for group {group}, element {element} has {found} exponent pairs, expected {expected}"
            ),
            Violation::SectorBoundaryBroken { sector } => {
                write!(f, "sector {sector} chain complex has nonzero boundary square")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A simplicial action of a finite group on a complex, given by vertex
/// permutations. The complex must be in canonical form: facet position `i`
/// omits the `i`-th smallest vertex, and same-dimension simplices have
/// distinct vertex sets.
#[derive(Debug, Clone)]
pub struct GroupAction {
    group: FiniteGroup,
    complex: SimplicialComplex,
    vertex_perms: Vec<BTreeMap<usize, usize>>,
    vertices_of: BTreeMap<usize, Vec<usize>>,
    simplex_by_vertices: BTreeMap<Vec<usize>, usize>,
}

impl GroupAction {
    pub fn new(
        group: FiniteGroup,
        complex: SimplicialComplex,
        vertex_perms: Vec<BTreeMap<usize, usize>>,
    ) -> Result<Self, ModelError> {
        if vertex_perms.len() != group.order() {
            return Err(ModelError::PermutationCount);
        }
        let vertex_ids: BTreeSet<usize> = complex
            .simplices()
            .filter(|s| s.dim == 0)
            .map(|s| s.id)
            .collect();
        for (g, perm) in vertex_perms.iter().enumerate() {
            let keys: BTreeSet<usize> = perm.keys().copied().collect();
            let values: BTreeSet<usize> = perm.values().copied().collect();
            if keys != vertex_ids || values != vertex_ids {
                return Err(ModelError::NotBijective { element: g });
            }
        }

        let vertices_of = canonical_vertex_lists(&complex)?;
        let mut simplex_by_vertices = BTreeMap::new();
        for (&id, vs) in &vertices_of {
            if let Some(prev) = simplex_by_vertices.insert(vs.clone(), id) {
                return Err(ModelError::DuplicateVertexSet { a: prev, b: id });
            }
        }

        let action = GroupAction {
            group,
            complex,
            vertex_perms,
            vertices_of,
            simplex_by_vertices,
        };

        // Homomorphism property of the permutation assignment.
        for a in 0..action.group.order() {
            for b in 0..action.group.order() {
                let ab = action.group.mul(a, b);
                for &v in action.vertex_perms[0].keys() {
                    if action.vertex_perms[ab][&v]
                        != action.vertex_perms[a][&action.vertex_perms[b][&v]]
                    {
                        return Err(ModelError::NotHomomorphism { a, b });
                    }
                }
            }
        }

        // Every simplex must map to a simplex under every element.
        for g in 0..action.group.order() {
            for s in action.complex.simplices() {
                if action.try_image(g, s.id).is_none() {
                    return Err(ModelError::NotSimplicial {
                        element: g,
                        simplex: s.id,
                    });
                }
            }
        }
        Ok(action)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn vertices_of(&self, simplex: usize) -> &[usize] {
        &self.vertices_of[&simplex]
    }

    fn try_image(&self, g: usize, simplex: usize) -> Option<usize> {
        let mut image: Vec<usize> = self.vertices_of[&simplex]
            .iter()
            .map(|v| self.vertex_perms[g][v])
            .collect();
        image.sort_unstable();
        self.simplex_by_vertices.get(&image).copied()
    }

    /// Image simplex id of `simplex` under element `g`.
    pub fn image(&self, g: usize, simplex: usize) -> usize {
        self.try_image(g, simplex)
            .expect("validated action maps simplices to simplices")
    }

    /// Image of a single vertex id under element `g`.
    pub fn image_vertex(&self, g: usize, vertex: usize) -> usize {
        self.vertex_perms[g][&vertex]
    }

    /// First regularity violation, if any: an element fixing a simplex
    /// setwise without fixing its vertices.
    pub fn regularity_violation(&self) -> Option<(usize, usize)> {
        for g in 1..self.group.order() {
            for s in self.complex.simplices() {
                if self.image(g, s.id) == s.id
                    && self.vertices_of[&s.id]
                        .iter()
                        .any(|&v| self.vertex_perms[g][&v] != v)
                {
                    return Some((g, s.id));
                }
            }
        }
        None
    }

    pub fn is_regular(&self) -> bool {
        self.regularity_violation().is_none()
    }

    /// Orbit partition of the simplex set; each orbit is ascending, and
    /// orbits are listed by their least member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for s in self.complex.simplices() {
            if seen.contains(&s.id) {
                continue;
            }
            let orbit: BTreeSet<usize> =
                (0..self.group.order()).map(|g| self.image(g, s.id)).collect();
            seen.extend(orbit.iter().copied());
            out.push(orbit.into_iter().collect());
        }
        out
    }

    /// Stabilizer elements of a simplex (setwise, which for a regular
    /// action is pointwise), ascending, so the identity comes first.
    pub fn stabilizer(&self, simplex: usize) -> Vec<usize> {
        (0..self.group.order())
            .filter(|&g| self.image(g, simplex) == simplex)
            .collect()
    }

    /// The quotient labeled complex of a regular action.
    ///
    /// Orbits become simplices (keeping the least member's id), the
    /// stabilizer of each orbit representative becomes its isotropy group,
    /// and stabilizer inclusions (conjugated back to the representatives)
    /// become the face monomorphisms. `boundary` declares an invariant,
    /// face-closed boundary subcomplex of the total space.
    pub fn global_quotient(
        &self,
        boundary: &BTreeSet<usize>,
    ) -> Result<LabeledComplex, ModelError> {
        for &id in boundary {
            for &f in &self.complex.simplex(id).facets {
                if !boundary.contains(&f) {
                    return Err(ModelError::BoundaryNotClosed { id });
                }
            }
            for g in 0..self.group.order() {
                if !boundary.contains(&self.image(g, id)) {
                    return Err(ModelError::BoundaryNotInvariant {
                        element: g,
                        simplex: id,
                    });
                }
            }
        }
        if let Some((element, simplex)) = self.regularity_violation() {
            return Err(ModelError::NotRegular { element, simplex });
        }

        let orbits = self.orbits();
        let mut rep_of = BTreeMap::new();
        for orbit in &orbits {
            let rep = orbit[0];
            for &member in orbit {
                rep_of.insert(member, rep);
            }
        }

        let entries: Vec<Simplex> = orbits
            .iter()
            .map(|orbit| {
                let rep = self.complex.simplex(orbit[0]);
                Simplex::new(
                    rep.id,
                    rep.dim,
                    rep.facets.iter().map(|f| rep_of[f]).collect(),
                )
            })
            .collect();
        let quotient_complex = match SimplicialComplex::from_simplices(entries) {
            Ok(c) => c,
            Err(ComplexError::BoundarySquare { id }) => {
                return Err(ModelError::InconsistentOrientation { simplex: id })
            }
            Err(e) => return Err(ModelError::Complex(e)),
        };

        // Stabilizer subgroups, deduplicated by element set.
        let mut subgroup_index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut groups: Vec<NamedGroup> = Vec::new();
        let mut group_of = BTreeMap::new();
        let mut stab_elements: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for orbit in &orbits {
            let rep = orbit[0];
            let stab = self.stabilizer(rep);
            stab_elements.insert(rep, stab.clone());
            if stab.len() == 1 {
                continue; // implicit trivial label
            }
            let idx = *subgroup_index.entry(stab.clone()).or_insert_with(|| {
                let sub = subgroup_as_group(&self.group, &stab);
                groups.push(NamedGroup {
                    id: format!("stab{rep}"),
                    group: sub,
                });
                groups.len() - 1
            });
            group_of.insert(rep, idx);
        }

        // Face monomorphisms: conjugate the face back to the facet-orbit
        // representative and include the stabilizer.
        let mut face_monos = BTreeMap::new();
        for orbit in &orbits {
            let rep_id = orbit[0];
            let stab = &stab_elements[&rep_id];
            if stab.len() == 1 {
                continue;
            }
            let rep = self.complex.simplex(rep_id);
            for (pos, &facet) in rep.facets.iter().enumerate() {
                let facet_rep = rep_of[&facet];
                let facet_stab = &stab_elements[&facet_rep];
                let h = (0..self.group.order())
                    .find(|&g| self.image(g, facet_rep) == facet)
                    .expect("facet lies in the orbit of its representative");
                let h_inv = self.group.inverse(h);
                let map: Vec<usize> = stab
                    .iter()
                    .map(|&x| {
                        let conj = self.group.mul(self.group.mul(h_inv, x), h);
                        facet_stab
                            .binary_search(&conj)
                            .expect("stabilizer of a simplex embeds in each face stabilizer")
                    })
                    .collect();
                face_monos.insert((rep_id, pos), map);
            }
        }

        let boundary_ids: BTreeSet<usize> = boundary.iter().map(|id| rep_of[id]).collect();

        Ok(LabeledComplex::assemble(
            quotient_complex,
            groups,
            group_of,
            face_monos,
            boundary_ids,
            None,
        ))
    }

    /// Barycentric subdivision with the induced action.
    ///
    /// Subdivision vertices are the original simplices, numbered in
    /// ascending (dimension, id) order; a subdivision simplex is a chain in
    /// the face order. The induced action preserves those vertex orders, so
    /// the subdivided action is always regular and its quotient is always
    /// orientation-consistent.
    pub fn subdivide(&self) -> Subdivision {
        let mut old_ids: Vec<usize> = self.complex.ids().collect();
        old_ids.sort_by_key(|&id| (self.complex.simplex(id).dim, id));
        let vertex_of: BTreeMap<usize, usize> = old_ids
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, i))
            .collect();

        let mut builder = crate::complex::VertexComplexBuilder::new();
        let mut flags_memo: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
        for s in self.complex.simplices() {
            let flags = maximal_flags(&self.complex, s.id, &mut flags_memo);
            for flag in flags {
                let vs: Vec<usize> = flag.iter().map(|t| vertex_of[t]).collect();
                builder.add(&vs);
            }
        }
        let new_complex = builder.build();
        let vertex_table = builder.vertex_table();

        let perms: Vec<BTreeMap<usize, usize>> = (0..self.group.order())
            .map(|g| {
                self.complex
                    .ids()
                    .map(|id| (vertex_of[&id], vertex_of[&self.image(g, id)]))
                    .collect()
            })
            .collect();
        let action = GroupAction::new(self.group.clone(), new_complex, perms)
            .expect("induced action on the barycentric subdivision is simplicial");

        Subdivision {
            action,
            vertex_of,
            vertex_table,
        }
    }
}

/// Result of a barycentric subdivision: the induced action plus enough
/// bookkeeping to transport face-closed id sets (e.g. declared boundaries).
pub struct Subdivision {
    pub action: GroupAction,
    vertex_of: BTreeMap<usize, usize>,
    vertex_table: BTreeMap<usize, Vec<usize>>,
}

impl Subdivision {
    /// New-complex ids of all simplices whose chain lies inside `old_ids`.
    pub fn carried_set(&self, old_ids: &BTreeSet<usize>) -> BTreeSet<usize> {
        let allowed: BTreeSet<usize> = old_ids.iter().map(|id| self.vertex_of[id]).collect();
        self.vertex_table
            .iter()
            .filter(|(_, vs)| vs.iter().all(|v| allowed.contains(v)))
            .map(|(&id, _)| id)
            .collect()
    }
}

/// Spec-level operation name for [`GroupAction::subdivide`].
pub fn subdivide(action: &GroupAction) -> GroupAction {
    action.subdivide().action
}

fn subgroup_as_group(group: &FiniteGroup, elements: &[usize]) -> FiniteGroup {
    let pos: BTreeMap<usize, usize> = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let table: Vec<Vec<usize>> = elements
        .iter()
        .map(|&a| elements.iter().map(|&b| pos[&group.mul(a, b)]).collect())
        .collect();
    FiniteGroup::from_table(&table).expect("stabilizer subsets are subgroups")
}

/// Vertex list of each simplex, verifying the canonical facet order
/// (position `i` omits the `i`-th smallest vertex).
fn canonical_vertex_lists(
    complex: &SimplicialComplex,
) -> Result<BTreeMap<usize, Vec<usize>>, ModelError> {
    let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut ids: Vec<usize> = complex.ids().collect();
    ids.sort_by_key(|&id| (complex.simplex(id).dim, id));
    for id in ids {
        let s = complex.simplex(id);
        if s.dim == 0 {
            out.insert(id, vec![id]);
            continue;
        }
        let mut vertices: BTreeSet<usize> = BTreeSet::new();
        for &f in &s.facets {
            vertices.extend(out[&f].iter().copied());
        }
        let vertices: Vec<usize> = vertices.into_iter().collect();
        if vertices.len() != s.dim + 1 {
            return Err(ModelError::NotCanonicalOrder { simplex: id });
        }
        for (i, &f) in s.facets.iter().enumerate() {
            let expected: Vec<usize> = vertices
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &v)| v)
                .collect();
            if out[&f] != expected {
                return Err(ModelError::NotCanonicalOrder { simplex: id });
            }
        }
        out.insert(id, vertices);
    }
    Ok(out)
}

/// All maximal chains of faces ending at `id` (length `dim + 1`).
fn maximal_flags(
    complex: &SimplicialComplex,
    id: usize,
    memo: &mut BTreeMap<usize, Vec<Vec<usize>>>,
) -> Vec<Vec<usize>> {
    if let Some(flags) = memo.get(&id) {
        return flags.clone();
    }
    let s = complex.simplex(id);
    let flags: Vec<Vec<usize>> = if s.dim == 0 {
        vec![vec![id]]
    } else {
        let mut out = Vec::new();
        let facets: BTreeSet<usize> = s.facets.iter().copied().collect();
        for f in facets {
            for mut flag in maximal_flags(complex, f, memo) {
                flag.push(id);
                out.push(flag);
            }
        }
        out
    };
    memo.insert(id, flags.clone());
    flags
}

#[cfg(test)]
pub(crate) mod test_actions {
    use super::*;
    use crate::complex::{octahedron, VertexComplexBuilder};

    /// The antipodal Z2 action on the octahedron sphere; antipodal pairs
    /// are (0,1), (2,3), (4,5).
    pub(crate) fn antipodal_octahedron() -> GroupAction {
        let (k, _) = octahedron();
        let ids: Vec<usize> = k.simplices().filter(|s| s.dim == 0).map(|s| s.id).collect();
        let identity: BTreeMap<usize, usize> = ids.iter().map(|&v| (v, v)).collect();
        let flip: BTreeMap<usize, usize> = ids.iter().map(|&v| (v, v ^ 1)).collect();
        GroupAction::new(FiniteGroup::cyclic(2), k, vec![identity, flip]).unwrap()
    }

    /// Z3 rotating the suspension of a triangle (a triangulated sphere with
    /// poles 3 and 4 fixed).
    pub(crate) fn football_action() -> GroupAction {
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
        GroupAction::new(FiniteGroup::cyclic(3), k, perms).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::test_actions::{antipodal_octahedron, football_action};
    use super::*;
    use crate::complex::{hollow_triangle, octahedron, VertexComplexBuilder};

    #[test]
    fn trivial_action_quotient_is_the_complex_itself() {
        let (k, _) = octahedron();
        let ids: Vec<usize> = k.simplices().filter(|s| s.dim == 0).map(|s| s.id).collect();
        let identity: BTreeMap<usize, usize> = ids.iter().map(|&v| (v, v)).collect();
        let a = GroupAction::new(FiniteGroup::cyclic(1), k.clone(), vec![identity]).unwrap();
        let q = a.global_quotient(&BTreeSet::new()).unwrap();
        assert_eq!(q.complex().euler_characteristic(), 2);
        assert_eq!(q.complex().len(), k.len());
        assert!(q.complex().ids().all(|id| q.group_of(id).is_trivial()));
        assert!(q.validate().is_valid());
    }

    #[test]
    fn antipodal_quotient_is_rp2() {
        let a = antipodal_octahedron();
        assert!(a.is_regular());

        // Oracle: direct orbit enumeration by dimension.
        let orbits = a.orbits();
        let mut by_dim = [0usize; 3];
        for orbit in &orbits {
            assert_eq!(orbit.len(), 2, "antipodal action is free");
            by_dim[a.complex().simplex(orbit[0]).dim] += 1;
        }
        assert_eq!(by_dim, [3, 6, 4]);

        let q = a.global_quotient(&BTreeSet::new()).unwrap();
        assert_eq!(q.complex().count_by_dim(), vec![3, 6, 4]);
        assert_eq!(q.complex().euler_characteristic(), 1);
        assert!(q.complex().ids().all(|id| q.group_of(id).is_trivial()));
        // chi(quotient) = chi(total) / |G| for a free action.
        assert_eq!(q.complex().euler_characteristic(), 2 / 2);
        // Rational homology of RP^2.
        assert_eq!(q.complex().betti_numbers(), vec![1, 0, 0]);
        assert!(q.validate().is_valid());
    }

    #[test]
    fn football_quotient_labels_the_poles() {
        let a = football_action();
        assert!(a.is_regular());
        let q = a.global_quotient(&BTreeSet::new()).unwrap();
        assert_eq!(q.complex().euler_characteristic(), 2);
        // Exactly the two pole vertices carry Z3.
        let singular: Vec<usize> = q
            .complex()
            .ids()
            .filter(|&id| !q.group_of(id).is_trivial())
            .collect();
        assert_eq!(singular.len(), 2);
        for &id in &singular {
            assert_eq!(q.complex().simplex(id).dim, 0);
            assert_eq!(q.group_of(id).order(), 3);
        }
        assert!(q.validate().is_valid());
    }

    #[test]
    fn quotient_euler_equals_orbit_alternating_sum() {
        for a in [antipodal_octahedron(), football_action()] {
            let q = a.global_quotient(&BTreeSet::new()).unwrap();
            let expected: i64 = a
                .orbits()
                .iter()
                .map(|orbit| {
                    if a.complex().simplex(orbit[0]).dim % 2 == 0 {
                        1
                    } else {
                        -1
                    }
                })
                .sum();
            assert_eq!(q.complex().euler_characteristic(), expected);
        }
    }

    #[test]
    fn edge_swap_is_not_regular_until_subdivided() {
        let mut b = VertexComplexBuilder::new();
        b.add(&[0, 1]);
        let k = b.build();
        let perms = vec![
            [(0usize, 0usize), (1, 1)].into_iter().collect(),
            [(0usize, 1usize), (1, 0)].into_iter().collect(),
        ];
        let a = GroupAction::new(FiniteGroup::cyclic(2), k, perms).unwrap();
        assert!(a.regularity_violation().is_some());
        assert!(matches!(
            a.global_quotient(&BTreeSet::new()),
            Err(ModelError::NotRegular { .. })
        ));

        let sub = a.subdivide().action;
        assert!(sub.is_regular());
        let q = sub.global_quotient(&BTreeSet::new()).unwrap();
        // Quotient of an edge by the flip is half an edge; chi = 1.
        assert_eq!(q.complex().euler_characteristic(), 1);
    }

    #[test]
    fn subdivision_preserves_euler_characteristics() {
        for a in [antipodal_octahedron(), football_action()] {
            let sub = a.subdivide().action;
            assert_eq!(
                sub.complex().euler_characteristic(),
                a.complex().euler_characteristic()
            );
            assert!(sub.is_regular());
            let q0 = a.global_quotient(&BTreeSet::new()).unwrap();
            let q1 = sub.global_quotient(&BTreeSet::new()).unwrap();
            assert_eq!(
                q0.complex().euler_characteristic(),
                q1.complex().euler_characteristic()
            );
        }
    }

    #[test]
    fn free_action_stays_free_after_subdivision() {
        let a = antipodal_octahedron();
        let sub = a.subdivide().action;
        for s in sub.complex().simplices() {
            assert_eq!(sub.stabilizer(s.id), vec![0]);
        }
    }

    #[test]
    fn validation_flags_missing_mono_and_bad_boundary() {
        let k = hollow_triangle();
        let top_edge = k.simplices().find(|s| s.dim == 1).unwrap().id;
        let vertex = k.simplices().find(|s| s.dim == 0).unwrap().id;
        let mut builder = LabeledComplex::builder(k.clone());
        builder.group("Z2", FiniteGroup::cyclic(2));
        builder.label(top_edge, "Z2");
        builder.label(vertex, "Z2");
        // No mono declared for the labeled edge.
        let l = builder.finish();
        let report = l.validate();
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::MissingFaceMono { .. })));

        // Boundary containing a top simplex.
        let mut builder = LabeledComplex::builder(k);
        builder.boundary([top_edge]);
        let l = builder.finish();
        let report = l.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::BoundaryContainsTop { .. })));
    }
}
