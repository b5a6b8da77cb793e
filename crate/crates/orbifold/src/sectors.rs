//! The twisted-sector decomposition of a labeled complex.
//!
//! An *atom* is a pair (simplex, conjugacy class of its group). Atoms are
//! glued into equivalence classes by the induced class maps along facet
//! monomorphisms; each class carries a cell complex whose cells are its
//! atoms, with boundary inherited from the underlying facet signs. The
//! class containing the identity atoms is the nontwisted sector.

use std::collections::{BTreeMap, BTreeSet};

use num::Zero;
use thiserror::Error;

use crate::group::ConjugacyClass;
use crate::homology::{ChainComplex, IntMatrix};
use crate::model::LabeledComplex;
use crate::rational::{alternating, rat_int, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShiftError {
    #[error("no shift data covers sector {sector}")]
    MissingShiftData { sector: usize },
    #[error("shift data for sector {sector} is inconsistent across its atoms")]
    InconsistentShift { sector: usize },
}

/// Eigenvalue exponent data for the local almost-complex representations:
/// per group id and element index, the exponent pairs `(m_i, m)` of the
/// diagonalized matrix, with `0 <= m_i < m`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ShiftData {
    entries: BTreeMap<String, BTreeMap<usize, Vec<(u64, u64)>>>,
}

impl ShiftData {
    pub fn new() -> Self {
        ShiftData::default()
    }

    pub fn insert(&mut self, group_id: impl Into<String>, element: usize, pairs: Vec<(u64, u64)>) {
        self.entries
            .entry(group_id.into())
            .or_default()
            .insert(element, pairs);
    }

    pub fn lookup(&self, group_id: &str, element: usize) -> Option<&[(u64, u64)]> {
        self.entries
            .get(group_id)
            .and_then(|m| m.get(&element))
            .map(|v| v.as_slice())
    }

    pub fn entries(&self) -> &BTreeMap<String, BTreeMap<usize, Vec<(u64, u64)>>> {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One cell of the sector decomposition: a simplex together with a
/// conjugacy class (by index) of its isotropy group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorAtom {
    pub simplex: usize,
    pub class_index: usize,
}

/// How an atom is weighted in a sector Euler characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EulerMode {
    /// `sum (-1)^dim` over all atoms.
    Underlying,
    /// `sum (-1)^dim / |C(g)|` over all atoms.
    Orbifold,
    /// Orbifold weights, restricted to atoms off the declared boundary.
    InnerOrbifold,
    /// Orbifold weights, restricted to atoms on the declared boundary.
    BoundaryOrbifold,
}

/// One equivalence class of atoms, with its cell complex.
#[derive(Debug, Clone)]
pub struct Sector {
    /// Global atom indices in this class, ascending.
    atoms: Vec<usize>,
    /// Atom cells bucketed by simplex dimension; cell positions index the
    /// chain complex matrices.
    cells: Vec<Vec<usize>>,
    chain: ChainComplex,
    boundary_atoms: BTreeSet<usize>,
    contains_identity: bool,
}

impl Sector {
    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    pub fn cells_of_dim(&self, d: usize) -> &[usize] {
        &self.cells[d]
    }

    pub fn chain(&self) -> &ChainComplex {
        &self.chain
    }

    pub fn boundary_atoms(&self) -> &BTreeSet<usize> {
        &self.boundary_atoms
    }

    /// True for the class containing the identity atoms.
    pub fn is_nontwisted(&self) -> bool {
        self.contains_identity
    }

    /// Largest simplex dimension among the atoms.
    pub fn top_dim(&self) -> usize {
        self.cells.len().saturating_sub(1)
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        self.chain.betti_numbers()
    }

    /// Connected components of the cell complex, via structural incidence
    /// (an atom is incident to each facet atom regardless of coefficient
    /// cancellation).
    pub fn connected_components(&self, dec: &SectorDecomposition) -> usize {
        let index: BTreeMap<usize, usize> = self
            .atoms
            .iter()
            .enumerate()
            .map(|(i, &a)| (a, i))
            .collect();
        let mut parent: Vec<usize> = (0..self.atoms.len()).collect();
        for &atom in &self.atoms {
            for (facet_atom, _) in dec.atom_boundary(atom) {
                let a = find(&mut parent, index[&atom]);
                let b = find(&mut parent, index[&facet_atom]);
                if a != b {
                    parent[a] = b;
                }
            }
        }
        (0..self.atoms.len())
            .filter(|&i| find(&mut parent, i) == i)
            .count()
    }
}

fn find(parent: &mut Vec<usize>, x: usize) -> usize {
    if parent[x] != x {
        let root = find(parent, parent[x]);
        parent[x] = root;
    }
    parent[x]
}

/// The full decomposition: all atoms of the labeled complex partitioned
/// into sectors.
#[derive(Debug, Clone)]
pub struct SectorDecomposition {
    atoms: Vec<SectorAtom>,
    atom_dims: Vec<usize>,
    centralizer_orders: Vec<usize>,
    on_boundary: Vec<bool>,
    /// Signed facet-atom incidences of each atom.
    boundaries: Vec<Vec<(usize, i64)>>,
    sector_of: Vec<usize>,
    sectors: Vec<Sector>,
}

/// Builds the sector decomposition of a labeled complex.
///
/// Atoms are enumerated per simplex in ascending id order, one per
/// conjugacy class; the equivalence closure follows every facet
/// monomorphism's induced class map.
pub fn decompose(labeled: &LabeledComplex) -> SectorDecomposition {
    let complex = labeled.complex();

    // Conjugacy data per registry group, computed once.
    let group_count = labeled.groups().len();
    let classes: Vec<Vec<ConjugacyClass>> = (0..group_count)
        .map(|i| labeled.groups()[i].group.conjugacy_classes())
        .collect();
    let class_of_element: Vec<Vec<usize>> = (0..group_count)
        .map(|i| labeled.groups()[i].group.class_index_table())
        .collect();

    let simplex_ids: Vec<usize> = complex.ids().collect();
    let mut atom_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut atoms = Vec::new();
    let mut atom_dims = Vec::new();
    let mut centralizer_orders = Vec::new();
    let mut on_boundary = Vec::new();
    for &id in &simplex_ids {
        let gi = labeled.group_index_of(id);
        let order = labeled.groups()[gi].group.order();
        for (c, class) in classes[gi].iter().enumerate() {
            let idx = atoms.len();
            atom_index.insert((id, c), idx);
            atoms.push(SectorAtom {
                simplex: id,
                class_index: c,
            });
            atom_dims.push(complex.simplex(id).dim);
            centralizer_orders.push(order / class.len());
            on_boundary.push(labeled.boundary_ids().contains(&id));
        }
    }

    // Signed boundary of each atom, and union-find closure along it.
    let mut parent: Vec<usize> = (0..atoms.len()).collect();
    let mut boundaries: Vec<Vec<(usize, i64)>> = vec![Vec::new(); atoms.len()];
    for (idx, atom) in atoms.iter().enumerate() {
        let s = complex.simplex(atom.simplex);
        let gi = labeled.group_index_of(atom.simplex);
        let rep = classes[gi][atom.class_index].representative;
        for (pos, &facet) in s.facets.iter().enumerate() {
            let map = labeled
                .mono_map(atom.simplex, pos)
                .expect("decompose requires a structurally complete labeled complex");
            let ti = labeled.group_index_of(facet);
            let target_class = class_of_element[ti][map[rep]];
            let target_atom = atom_index[&(facet, target_class)];
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            boundaries[idx].push((target_atom, sign));
            let a = find(&mut parent, idx);
            let b = find(&mut parent, target_atom);
            if a != b {
                parent[a] = b;
            }
        }
    }

    // Sectors ordered by least atom index; atom 0 has class index 0, so for
    // a connected complex sector 0 is the nontwisted sector.
    let mut root_to_sector: BTreeMap<usize, usize> = BTreeMap::new();
    let mut sector_atoms: Vec<Vec<usize>> = Vec::new();
    for idx in 0..atoms.len() {
        let root = find(&mut parent, idx);
        let s = *root_to_sector.entry(root).or_insert_with(|| {
            sector_atoms.push(Vec::new());
            sector_atoms.len() - 1
        });
        sector_atoms[s].push(idx);
    }
    let mut sector_of = vec![0usize; atoms.len()];
    for (s, members) in sector_atoms.iter().enumerate() {
        for &a in members {
            sector_of[a] = s;
        }
    }

    let sectors = sector_atoms
        .into_iter()
        .map(|members| {
            let top = members.iter().map(|&a| atom_dims[a]).max().unwrap_or(0);
            let mut cells: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
            for &a in &members {
                cells[atom_dims[a]].push(a);
            }
            let mut position = BTreeMap::new();
            for dim_cells in &cells {
                for (i, &a) in dim_cells.iter().enumerate() {
                    position.insert(a, i);
                }
            }
            let cell_counts: Vec<usize> = cells.iter().map(|c| c.len()).collect();
            let mut matrices = Vec::with_capacity(top + 1);
            matrices.push(IntMatrix::zeros(0, cell_counts[0]));
            for d in 1..=top {
                let mut m = IntMatrix::zeros(cell_counts[d - 1], cell_counts[d]);
                for (col, &a) in cells[d].iter().enumerate() {
                    for &(facet_atom, sign) in &boundaries[a] {
                        m.add_to(position[&facet_atom], col, sign);
                    }
                }
                matrices.push(m);
            }
            let boundary_atoms: BTreeSet<usize> = members
                .iter()
                .copied()
                .filter(|&a| on_boundary[a])
                .collect();
            let contains_identity = members.iter().any(|&a| atoms[a].class_index == 0);
            Sector {
                atoms: members,
                cells,
                chain: ChainComplex {
                    cell_counts,
                    boundaries: matrices,
                },
                boundary_atoms,
                contains_identity,
            }
        })
        .collect();

    SectorDecomposition {
        atoms,
        atom_dims,
        centralizer_orders,
        on_boundary,
        boundaries,
        sector_of,
        sectors,
    }
}

impl SectorDecomposition {
    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom(&self, idx: usize) -> &SectorAtom {
        &self.atoms[idx]
    }

    pub fn atom_dim(&self, idx: usize) -> usize {
        self.atom_dims[idx]
    }

    pub fn centralizer_order(&self, idx: usize) -> usize {
        self.centralizer_orders[idx]
    }

    pub fn atom_boundary(&self, idx: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.boundaries[idx].iter().copied()
    }

    pub fn sector_of_atom(&self, idx: usize) -> usize {
        self.sector_of[idx]
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    pub fn sector_count(&self) -> usize {
        self.sectors.len()
    }

    /// Index of the sector containing the identity atoms, when it is
    /// unique (always, for a complex with connected face-incidence graph).
    pub fn nontwisted_sector(&self) -> Option<usize> {
        let mut found = None;
        for (i, s) in self.sectors.iter().enumerate() {
            if s.is_nontwisted() {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    /// All atoms lying over the declared boundary, as (simplex, class) pairs.
    pub fn boundary_atom_pairs(&self) -> BTreeSet<(usize, usize)> {
        (0..self.atoms.len())
            .filter(|&a| self.on_boundary[a])
            .map(|a| (self.atoms[a].simplex, self.atoms[a].class_index))
            .collect()
    }

    /// Exact Euler characteristic of one sector in the requested mode.
    pub fn sector_euler(&self, sector: usize, mode: EulerMode) -> Rational {
        let mut total = Rational::zero();
        for &a in &self.sectors[sector].atoms {
            let on_bd = self.on_boundary[a];
            let weight_centralizer = match mode {
                EulerMode::Underlying => false,
                EulerMode::Orbifold => true,
                EulerMode::InnerOrbifold => {
                    if on_bd {
                        continue;
                    }
                    true
                }
                EulerMode::BoundaryOrbifold => {
                    if !on_bd {
                        continue;
                    }
                    true
                }
            };
            let mut term = alternating(self.atom_dims[a]);
            if weight_centralizer {
                term /= rat_int(self.centralizer_orders[a] as i64);
            }
            total += term;
        }
        total
    }

    /// Betti numbers of the sector cell complex.
    pub fn sector_betti(&self, sector: usize) -> Vec<usize> {
        self.sectors[sector].betti_numbers()
    }

    /// The degree shifting number of a sector: `sum_i m_i / m` evaluated on
    /// any covered element of any atom's class. Identity elements always
    /// contribute zero; all covered values must agree.
    pub fn degree_shift(
        &self,
        labeled: &LabeledComplex,
        data: &ShiftData,
        sector: usize,
    ) -> Result<Rational, ShiftError> {
        let mut value: Option<Rational> = None;
        let merge = |value: &mut Option<Rational>, v: Rational| -> Result<(), ShiftError> {
            match value {
                None => {
                    *value = Some(v);
                    Ok(())
                }
                Some(prev) if *prev == v => Ok(()),
                Some(_) => Err(ShiftError::InconsistentShift { sector }),
            }
        };
        for &a in &self.sectors[sector].atoms {
            let atom = &self.atoms[a];
            let group = labeled.group_of(atom.simplex);
            let gid = labeled.group_id_of(atom.simplex);
            let class = &group.conjugacy_classes()[atom.class_index];
            for &elem in &class.members {
                if elem == 0 {
                    // The identity acts as the identity matrix; its shift
                    // is zero whether or not data spells that out.
                    merge(&mut value, Rational::zero())?;
                }
                if let Some(pairs) = data.lookup(gid, elem) {
                    let mut iota = Rational::zero();
                    for &(mi, m) in pairs {
                        iota += Rational::new((mi as i64).into(), (m as i64).into());
                    }
                    merge(&mut value, iota)?;
                }
            }
        }
        value.ok_or(ShiftError::MissingShiftData { sector })
    }
}
