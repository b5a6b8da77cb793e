//! Finite simplicial complexes with explicit facet lists.
//!
//! A simplex stores its facets in a fixed order (position `i` is the face
//! omitting vertex `i`), and the boundary operator uses alternating signs
//! over that order. No global vertex ordering is assumed, which lets the
//! same machinery serve honest triangulations, quotient complexes and the
//! sector cell complexes.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::homology::{ChainComplex, IntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("duplicate simplex id {id}")]
    DuplicateId { id: usize },
    #[error("simplex {referenced_by} references missing face {missing}")]
    NotClosed { missing: usize, referenced_by: usize },
    #[error("simplex {id} has a facet of the wrong dimension")]
    BadDimension { id: usize },
    #[error("simplex {id} has {found} facets, expected {expected}")]
    FacetCount {
        id: usize,
        found: usize,
        expected: usize,
    },
    #[error("boundary of boundary is nonzero at simplex {id}")]
    BoundarySquare { id: usize },
    #[error("subcomplex selection is not face-closed: simplex {referenced_by} needs {missing}")]
    SelectionNotClosed { missing: usize, referenced_by: usize },
}

/// A single cell: `facets[i]` is the id of the face omitting vertex `i`;
/// a vertex has no facet list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simplex {
    pub id: usize,
    pub dim: usize,
    pub facets: Vec<usize>,
}

impl Simplex {
    pub fn vertex(id: usize) -> Self {
        Simplex {
            id,
            dim: 0,
            facets: Vec::new(),
        }
    }

    pub fn new(id: usize, dim: usize, facets: Vec<usize>) -> Self {
        Simplex { id, dim, facets }
    }
}

/// A finite complex, closed under faces, with `boundary . boundary = 0`
/// verified at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    simplices: BTreeMap<usize, Simplex>,
    dim: usize,
}

impl SimplicialComplex {
    pub fn from_simplices(entries: Vec<Simplex>) -> Result<Self, ComplexError> {
        let mut simplices = BTreeMap::new();
        for s in entries {
            let id = s.id;
            if simplices.insert(id, s).is_some() {
                return Err(ComplexError::DuplicateId { id });
            }
        }
        let dim = simplices.values().map(|s| s.dim).max().unwrap_or(0);
        let complex = SimplicialComplex { simplices, dim };
        complex.validate()?;
        Ok(complex)
    }

    fn validate(&self) -> Result<(), ComplexError> {
        for s in self.simplices.values() {
            if s.dim == 0 {
                if !s.facets.is_empty() {
                    return Err(ComplexError::FacetCount {
                        id: s.id,
                        found: s.facets.len(),
                        expected: 0,
                    });
                }
                continue;
            }
            if s.facets.len() != s.dim + 1 {
                return Err(ComplexError::FacetCount {
                    id: s.id,
                    found: s.facets.len(),
                    expected: s.dim + 1,
                });
            }
            for &f in &s.facets {
                let facet = self.simplices.get(&f).ok_or(ComplexError::NotClosed {
                    missing: f,
                    referenced_by: s.id,
                })?;
                if facet.dim + 1 != s.dim {
                    return Err(ComplexError::BadDimension { id: s.id });
                }
            }
        }
        // boundary^2 = 0, checked exactly on the induced chain complex.
        let (chain, index) = self.chain_complex();
        for d in 2..chain.boundaries.len() {
            let prod = chain.boundaries[d - 1].mul(&chain.boundaries[d]);
            if !prod.is_zero() {
                // Report some top cell of the offending degree.
                let id = index.cells_of_dim(d).first().copied().unwrap_or(0);
                return Err(ComplexError::BoundarySquare { id });
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.simplices.contains_key(&id)
    }

    pub fn simplex(&self, id: usize) -> &Simplex {
        &self.simplices[&id]
    }

    pub fn get(&self, id: usize) -> Option<&Simplex> {
        self.simplices.get(&id)
    }

    /// All simplices in ascending id order.
    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.simplices.keys().copied()
    }

    pub fn count_by_dim(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.dim + 1];
        for s in self.simplices.values() {
            counts[s.dim] += 1;
        }
        counts
    }

    /// `sum_sigma (-1)^(dim sigma)`.
    pub fn euler_characteristic(&self) -> i64 {
        self.simplices
            .values()
            .map(|s| if s.dim % 2 == 0 { 1 } else { -1 })
            .sum()
    }

    /// All faces (iterated facets) of `id`, including `id` itself.
    pub fn closure(&self, id: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            if out.insert(x) {
                stack.extend(self.simplex(x).facets.iter().copied());
            }
        }
        out
    }

    pub fn is_face_closed(&self, ids: &BTreeSet<usize>) -> bool {
        ids.iter()
            .all(|&id| self.simplex(id).facets.iter().all(|f| ids.contains(f)))
    }

    /// Restriction to a face-closed id set.
    pub fn subcomplex(&self, ids: &BTreeSet<usize>) -> Result<SimplicialComplex, ComplexError> {
        for &id in ids {
            for &f in &self.simplex(id).facets {
                if !ids.contains(&f) {
                    return Err(ComplexError::SelectionNotClosed {
                        missing: f,
                        referenced_by: id,
                    });
                }
            }
        }
        let entries: Vec<Simplex> = ids.iter().map(|&id| self.simplex(id).clone()).collect();
        SimplicialComplex::from_simplices(entries)
    }

    /// The complex's chain complex over the integers, plus the cell
    /// indexing used for its matrices.
    pub fn chain_complex(&self) -> (ChainComplex, CellIndex) {
        let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); self.dim + 1];
        for s in self.simplices.values() {
            by_dim[s.dim].push(s.id);
        }
        let mut position = BTreeMap::new();
        for cells in &by_dim {
            for (i, &id) in cells.iter().enumerate() {
                position.insert(id, i);
            }
        }
        let cell_counts: Vec<usize> = by_dim.iter().map(|v| v.len()).collect();
        let mut boundaries = Vec::with_capacity(self.dim + 1);
        boundaries.push(IntMatrix::zeros(0, cell_counts[0]));
        for d in 1..=self.dim {
            let mut m = IntMatrix::zeros(cell_counts[d - 1], cell_counts[d]);
            for (col, &id) in by_dim[d].iter().enumerate() {
                for (i, &f) in self.simplex(id).facets.iter().enumerate() {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    m.add_to(position[&f], col, sign);
                }
            }
            boundaries.push(m);
        }
        (
            ChainComplex {
                cell_counts,
                boundaries,
            },
            CellIndex { by_dim, position },
        )
    }

    /// Rational Betti numbers, indices `0..=dim`.
    pub fn betti_numbers(&self) -> Vec<usize> {
        self.chain_complex().0.betti_numbers()
    }
}

/// Maps between simplex ids and chain-complex matrix coordinates.
pub struct CellIndex {
    by_dim: Vec<Vec<usize>>,
    position: BTreeMap<usize, usize>,
}

impl CellIndex {
    pub fn cells_of_dim(&self, d: usize) -> &[usize] {
        &self.by_dim[d]
    }

    pub fn position(&self, id: usize) -> usize {
        self.position[&id]
    }
}

/// Builder utilities shared by the gallery, quotients and tests: a complex
/// described by vertex lists, closed under faces automatically.
///
/// Ids are assigned at `build` time in ascending (dimension, vertex list)
/// order, so vertex ids are ordered like the vertex labels and facet
/// position `i` omits the `i`-th smallest vertex id — the canonical form
/// that group actions require.
pub struct VertexComplexBuilder {
    keys: BTreeSet<Vec<usize>>,
    ids: BTreeMap<Vec<usize>, usize>,
    frozen: bool,
}

impl VertexComplexBuilder {
    pub fn new() -> Self {
        VertexComplexBuilder {
            keys: BTreeSet::new(),
            ids: BTreeMap::new(),
            frozen: false,
        }
    }

    /// Inserts the simplex spanned by `vertices` together with all its
    /// faces. Vertex labels are arbitrary distinct integers.
    pub fn add(&mut self, vertices: &[usize]) -> &mut Self {
        assert!(!self.frozen, "cannot add simplices after build");
        let mut key: Vec<usize> = vertices.to_vec();
        key.sort_unstable();
        key.dedup();
        assert_eq!(key.len(), vertices.len(), "repeated vertex in simplex");
        self.add_sorted(key);
        self
    }

    fn add_sorted(&mut self, key: Vec<usize>) {
        if self.keys.contains(&key) {
            return;
        }
        if key.len() > 1 {
            for omit in 0..key.len() {
                let mut face = key.clone();
                face.remove(omit);
                self.add_sorted(face);
            }
        }
        self.keys.insert(key);
    }

    fn finalize(&mut self) {
        if self.frozen {
            return;
        }
        let mut keys: Vec<Vec<usize>> = self.keys.iter().cloned().collect();
        keys.sort_by_key(|k| (k.len(), k.clone()));
        self.ids = keys
            .into_iter()
            .enumerate()
            .map(|(i, k)| (k, i))
            .collect();
        self.frozen = true;
    }

    /// Id of the simplex with this vertex label set; only valid after `build`.
    pub fn id_of(&self, vertices: &[usize]) -> Option<usize> {
        let mut key: Vec<usize> = vertices.to_vec();
        key.sort_unstable();
        Some(*self.ids.get(&key)?)
    }

    pub fn build(&mut self) -> SimplicialComplex {
        self.finalize();
        let mut entries = Vec::with_capacity(self.ids.len());
        for (key, &id) in &self.ids {
            let dim = key.len() - 1;
            let facets = if dim == 0 {
                Vec::new()
            } else {
                (0..key.len())
                    .map(|omit| {
                        let mut face = key.clone();
                        face.remove(omit);
                        self.ids[&face]
                    })
                    .collect()
            };
            entries.push(Simplex::new(id, dim, facets));
        }
        SimplicialComplex::from_simplices(entries).expect("vertex-built complex is valid")
    }

    /// Vertex label list (ascending) of each simplex id; valid after `build`.
    pub fn vertex_table(&self) -> BTreeMap<usize, Vec<usize>> {
        self.ids.iter().map(|(k, &v)| (v, k.clone())).collect()
    }
}

impl Default for VertexComplexBuilder {
    fn default() -> Self {
        Self::new()
    }
}

/// The octahedron boundary sphere: vertices `0..6` with antipodal pairs
/// `(0,1)`, `(2,3)`, `(4,5)` (one per axis) and one triangle per octant.
/// Vertices 4 and 5 serve as the poles in the football constructions.
pub fn octahedron() -> (SimplicialComplex, VertexComplexBuilder) {
    let mut b = VertexComplexBuilder::new();
    for &x in &[0usize, 1] {
        for &y in &[2usize, 3] {
            for &z in &[4usize, 5] {
                b.add(&[x, y, z]);
            }
        }
    }
    let k = b.build();
    (k, b)
}

/// Hollow triangle (a triangulated circle) on vertices `0, 1, 2`.
pub fn hollow_triangle() -> SimplicialComplex {
    let mut b = VertexComplexBuilder::new();
    b.add(&[0, 1]);
    b.add(&[1, 2]);
    b.add(&[0, 2]);
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex() {
        let k = SimplicialComplex::from_simplices(vec![Simplex::vertex(0)]).unwrap();
        assert_eq!(k.dim(), 0);
        assert_eq!(k.euler_characteristic(), 1);
        assert_eq!(k.betti_numbers(), vec![1]);
    }

    #[test]
    fn hollow_triangle_is_a_circle() {
        let k = hollow_triangle();
        assert_eq!(k.euler_characteristic(), 0);
        assert_eq!(k.betti_numbers(), vec![1, 1]);
    }

    #[test]
    fn missing_face_is_rejected() {
        let entries = vec![
            Simplex::vertex(0),
            Simplex::new(2, 1, vec![0, 7]), // vertex 7 does not exist
        ];
        assert!(matches!(
            SimplicialComplex::from_simplices(entries),
            Err(ComplexError::NotClosed { missing: 7, .. })
        ));
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let entries = vec![Simplex::vertex(0), Simplex::vertex(0)];
        assert!(matches!(
            SimplicialComplex::from_simplices(entries),
            Err(ComplexError::DuplicateId { id: 0 })
        ));
    }

    #[test]
    fn tetrahedron_boundary_is_a_sphere() {
        let mut b = VertexComplexBuilder::new();
        for omit in 0..4 {
            let vs: Vec<usize> = (0..4).filter(|&v| v != omit).collect();
            b.add(&vs);
        }
        let k = b.build();
        assert_eq!(k.euler_characteristic(), 2);
        assert_eq!(k.betti_numbers(), vec![1, 0, 1]);
    }

    #[test]
    fn octahedron_counts_and_betti() {
        let (k, _) = octahedron();
        assert_eq!(k.count_by_dim(), vec![6, 12, 8]);
        assert_eq!(k.euler_characteristic(), 2);
        assert_eq!(k.betti_numbers(), vec![1, 0, 1]);
    }

    #[test]
    fn two_points() {
        let k =
            SimplicialComplex::from_simplices(vec![Simplex::vertex(0), Simplex::vertex(1)]).unwrap();
        assert_eq!(k.betti_numbers(), vec![2]);
    }

    #[test]
    fn subcomplex_restrictions() {
        let (k, b) = octahedron();
        let all: BTreeSet<usize> = k.ids().collect();
        assert_eq!(k.subcomplex(&all).unwrap(), k);

        let vertices: BTreeSet<usize> = k
            .simplices()
            .filter(|s| s.dim == 0)
            .map(|s| s.id)
            .collect();
        let skeleton = k.subcomplex(&vertices).unwrap();
        assert_eq!(skeleton.dim(), 0);
        assert_eq!(skeleton.len(), 6);

        // One closed triangle is a disk.
        let tri = b.id_of(&[0, 2, 4]).unwrap();
        let disk = k.subcomplex(&k.closure(tri)).unwrap();
        assert_eq!(disk.euler_characteristic(), 1);

        // A non-closed selection errors.
        let bad: BTreeSet<usize> = [tri].into_iter().collect();
        assert!(matches!(
            k.subcomplex(&bad),
            Err(ComplexError::SelectionNotClosed { .. })
        ));
    }

    #[test]
    fn euler_poincare_on_samples() {
        for k in [hollow_triangle(), octahedron().0] {
            let chi: i64 = k
                .betti_numbers()
                .iter()
                .enumerate()
                .map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) })
                .sum();
            assert_eq!(chi, k.euler_characteristic());
        }
    }

    #[test]
    fn betti_invariant_under_id_relabeling() {
        let (k, _) = octahedron();
        let entries: Vec<Simplex> = k
            .simplices()
            .map(|s| {
                Simplex::new(
                    s.id * 7 + 100,
                    s.dim,
                    s.facets.iter().map(|f| f * 7 + 100).collect(),
                )
            })
            .collect();
        let relabeled = SimplicialComplex::from_simplices(entries).unwrap();
        assert_eq!(relabeled.betti_numbers(), k.betti_numbers());
    }

    #[test]
    fn broken_boundary_square_is_rejected() {
        // A triangle whose facet list repeats one edge with mismatched
        // signs against the shared vertices: boundary^2 != 0.
        let entries = vec![
            Simplex::vertex(0),
            Simplex::vertex(1),
            Simplex::new(2, 1, vec![1, 0]),
            Simplex::new(3, 1, vec![0, 1]),
            Simplex::new(4, 1, vec![1, 0]),
            Simplex::new(5, 2, vec![2, 2, 3]),
        ];
        assert!(matches!(
            SimplicialComplex::from_simplices(entries),
            Err(ComplexError::BoundarySquare { .. })
        ));
    }
}
