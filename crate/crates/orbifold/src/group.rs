//! Finite groups as multiplication tables.
//!
//! Everything downstream (isotropy labels, sector decompositions, Euler
//! weights) consumes groups through this module. The canonical form is the
//! Cayley table over element indices `0..order`, with index `0` the
//! identity; this makes every structural check exhaustive and exact at the
//! sizes that occur in orbifold presentations.

use std::collections::BTreeSet;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("not a monomorphism: {0}")]
    NotMonomorphism(String),
}

/// A finite group presented by its full Cayley table.
///
/// `table[i * order + j]` is the product `i * j`. Element `0` is always the
/// two-sided identity; constructors re-index input tables if necessary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    name: Option<String>,
}

impl FiniteGroup {
    /// Validates a square table as a group law and returns the group with
    /// the identity re-indexed to element `0`.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self, GroupError> {
        let order = table.len();
        if order == 0 {
            return Err(GroupError::NotAGroup("empty table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(GroupError::NotAGroup(format!(
                    "row {i} has length {}, expected {order}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= order {
                    return Err(GroupError::NotAGroup(format!(
                        "entry {v} in row {i} out of range"
                    )));
                }
            }
        }

        // Locate the two-sided identity before any further checks.
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| GroupError::NotAGroup("no two-sided identity".into()))?;

        // Re-index so the identity is element 0.
        let mut perm: Vec<usize> = (0..order).collect();
        perm.swap(0, identity);
        let mut flat = vec![0usize; order * order];
        for i in 0..order {
            for j in 0..order {
                flat[perm[i] * order + perm[j]] = perm[table[i][j]];
            }
        }

        let group = FiniteGroup {
            order,
            table: flat,
            name: None,
        };
        group.check_axioms()?;
        Ok(group)
    }

    fn check_axioms(&self) -> Result<(), GroupError> {
        let n = self.order;
        for x in 0..n {
            if self.mul(0, x) != x || self.mul(x, 0) != x {
                return Err(GroupError::NotAGroup(format!("0 is not an identity for {x}")));
            }
        }
        for x in 0..n {
            let has_inverse = (0..n).any(|y| self.mul(x, y) == 0 && self.mul(y, x) == 0);
            if !has_inverse {
                return Err(GroupError::NotAGroup(format!("element {x} has no inverse")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(GroupError::NotAGroup(format!(
                            "associativity fails on ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Cyclic group of order `k`, table `(i, j) -> (i + j) mod k`.
    pub fn cyclic(k: usize) -> Self {
        assert!(k >= 1, "cyclic group order must be positive");
        let mut table = vec![0usize; k * k];
        for i in 0..k {
            for j in 0..k {
                table[i * k + j] = (i + j) % k;
            }
        }
        FiniteGroup {
            order: k,
            table,
            name: Some(format!("Z{k}")),
        }
    }

    /// Dihedral group of order `2k`: `<r, s | r^k = s^2 = 1, s r s = r^-1>`.
    ///
    /// Element `a + k*b` represents `r^a s^b` with `0 <= a < k`, `b in {0,1}`.
    pub fn dihedral(k: usize) -> Self {
        assert!(k >= 1, "dihedral parameter must be positive");
        let n = 2 * k;
        let mut table = vec![0usize; n * n];
        for a1 in 0..k {
            for b1 in 0..2 {
                for a2 in 0..k {
                    for b2 in 0..2 {
                        // (r^a1 s^b1)(r^a2 s^b2) = r^(a1 + (-1)^b1 a2) s^(b1+b2)
                        let a = if b1 == 0 {
                            (a1 + a2) % k
                        } else {
                            (a1 + k - a2 % k) % k
                        };
                        let b = (b1 + b2) % 2;
                        table[(a1 + k * b1) * n + (a2 + k * b2)] = a + k * b;
                    }
                }
            }
        }
        FiniteGroup {
            order: n,
            table,
            name: Some(format!("D{n}")),
        }
    }

    pub fn trivial() -> Self {
        FiniteGroup {
            order: 1,
            table: vec![0],
            name: Some("1".into()),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order)
            .find(|&b| self.mul(a, b) == 0)
            .expect("validated group element has an inverse")
    }

    pub fn conjugate(&self, h: usize, g: usize) -> usize {
        // h g h^-1
        self.mul(self.mul(h, g), self.inverse(h))
    }

    /// Order of a single element.
    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, g);
            n += 1;
        }
        n
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Rows of the Cayley table, for serialization.
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|i| self.table[i * self.order..(i + 1) * self.order].to_vec())
            .collect()
    }

    /// Conjugacy classes, listed in ascending order of least member.
    /// The class of the identity is always first.
    pub fn conjugacy_classes(&self) -> Vec<ConjugacyClass> {
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        for g in 0..self.order {
            if seen[g] {
                continue;
            }
            let members: BTreeSet<usize> = (0..self.order).map(|h| self.conjugate(h, g)).collect();
            for &m in &members {
                seen[m] = true;
            }
            classes.push(ConjugacyClass {
                representative: g,
                members: members.into_iter().collect(),
            });
        }
        classes
    }

    /// Centralizer `{ h : hg = gh }` of `g`, ascending.
    pub fn centralizer(&self, g: usize) -> Vec<usize> {
        (0..self.order)
            .filter(|&h| self.mul(h, g) == self.mul(g, h))
            .collect()
    }

    /// Map from element index to the index of its conjugacy class within
    /// `conjugacy_classes()`.
    pub fn class_index_table(&self) -> Vec<usize> {
        let classes = self.conjugacy_classes();
        let mut idx = vec![usize::MAX; self.order];
        for (c, class) in classes.iter().enumerate() {
            for &m in &class.members {
                idx[m] = c;
            }
        }
        idx
    }
}

/// One conjugacy class: its least member is the representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub representative: usize,
    pub members: Vec<usize>,
}

impl ConjugacyClass {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }
}

/// An injective homomorphism between two finite groups, stored as the image
/// of each source element. The source and target live in whatever registry
/// holds the groups; validation is done against explicit group references.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomorphism {
    map: Vec<usize>,
}

impl Monomorphism {
    /// Validates injectivity and the homomorphism law for `map : source -> target`.
    pub fn new(
        source: &FiniteGroup,
        target: &FiniteGroup,
        map: Vec<usize>,
    ) -> Result<Self, GroupError> {
        if map.len() != source.order() {
            return Err(GroupError::NotMonomorphism(format!(
                "map length {} does not match source order {}",
                map.len(),
                source.order()
            )));
        }
        for &v in &map {
            if v >= target.order() {
                return Err(GroupError::NotMonomorphism(format!(
                    "image {v} out of range for target of order {}",
                    target.order()
                )));
            }
        }
        if map[0] != 0 {
            return Err(GroupError::NotMonomorphism("identity does not map to identity".into()));
        }
        let distinct: BTreeSet<usize> = map.iter().copied().collect();
        if distinct.len() != map.len() {
            return Err(GroupError::NotMonomorphism("map is not injective".into()));
        }
        for i in 0..source.order() {
            for j in 0..source.order() {
                if map[source.mul(i, j)] != target.mul(map[i], map[j]) {
                    return Err(GroupError::NotMonomorphism(format!(
                        "homomorphism law fails on ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Monomorphism { map })
    }

    /// The unique monomorphism from the trivial group.
    pub fn from_trivial() -> Self {
        Monomorphism { map: vec![0] }
    }

    pub fn identity(group: &FiniteGroup) -> Self {
        Monomorphism {
            map: (0..group.order()).collect(),
        }
    }

    pub fn apply(&self, g: usize) -> usize {
        self.map[g]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn source_order(&self) -> usize {
        self.map.len()
    }

    /// The induced map on conjugacy classes: the class of `h` goes to the
    /// class of its image. Independent of the choice of representative.
    /// Returns, per source class index, the target class index.
    pub fn induced_class_map(&self, source: &FiniteGroup, target: &FiniteGroup) -> Vec<usize> {
        let target_class_of = target.class_index_table();
        source
            .conjugacy_classes()
            .iter()
            .map(|c| target_class_of[self.apply(c.representative)])
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force conjugation partition, kept independent of
    /// `conjugacy_classes` as the oracle for the derived examples.
    fn oracle_classes(g: &FiniteGroup) -> Vec<BTreeSet<usize>> {
        let mut out: Vec<BTreeSet<usize>> = Vec::new();
        for x in 0..g.order() {
            let class: BTreeSet<usize> = (0..g.order()).map(|h| g.conjugate(h, x)).collect();
            if !out.contains(&class) {
                out.push(class);
            }
        }
        out.sort_by_key(|c| *c.iter().next().unwrap());
        out
    }

    #[test]
    fn trivial_table_is_the_trivial_group() {
        let g = FiniteGroup::from_table(&[vec![0]]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.conjugacy_classes().len(), 1);
        assert_eq!(g.conjugacy_classes()[0].members, vec![0]);
    }

    #[test]
    fn addition_mod_3_is_cyclic() {
        let table = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
        let g = FiniteGroup::from_table(&table).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.conjugacy_classes().len(), 3);
        assert_eq!(g.table_rows(), FiniteGroup::cyclic(3).table_rows());
    }

    #[test]
    fn identity_elsewhere_is_reindexed() {
        // Z2 with the identity stored at index 1.
        let table = vec![vec![1, 0], vec![0, 1]];
        let g = FiniteGroup::from_table(&table).unwrap();
        assert_eq!(g.mul(0, 1), 1);
        assert_eq!(g.mul(1, 1), 0);
    }

    #[test]
    fn perturbed_klein_table_is_rejected() {
        // Start from the Klein four-group and break one entry; the oracle
        // below confirms the perturbation kills associativity.
        let mut table = FiniteGroup::dihedral(2).table_rows();
        table[1][2] = 1;
        let broken = |a: usize, b: usize| table[a][b];
        let mut assoc = true;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    if broken(broken(a, b), c) != broken(a, broken(b, c)) {
                        assoc = false;
                    }
                }
            }
        }
        assert!(!assoc, "perturbation should break associativity");
        assert!(matches!(
            FiniteGroup::from_table(&table),
            Err(GroupError::NotAGroup(_))
        ));
    }

    #[test]
    fn cyclic_groups_are_abelian_with_singleton_classes() {
        assert_eq!(FiniteGroup::cyclic(1).order(), 1);
        let c3 = FiniteGroup::cyclic(3);
        assert_eq!(c3.conjugacy_classes().len(), 3);
        let c5 = FiniteGroup::cyclic(5);
        assert_eq!(c5.conjugacy_classes().len(), 5);
        let c6 = FiniteGroup::cyclic(6);
        for g in 0..6 {
            assert_eq!(c6.centralizer(g).len(), 6);
        }
    }

    #[test]
    fn dihedral_3_class_structure() {
        let d6 = FiniteGroup::dihedral(3);
        assert_eq!(d6.order(), 6);
        let classes = d6.conjugacy_classes();
        assert_eq!(classes.len(), 3);
        let oracle = oracle_classes(&d6);
        assert_eq!(oracle.len(), 3);
        for (class, o) in classes.iter().zip(&oracle) {
            assert_eq!(class.members, o.iter().copied().collect::<Vec<_>>());
        }
        let mut sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
        // {1}, {r, r^2}, {s, rs, r^2 s} in the r^a s^b indexing.
        assert_eq!(classes[0].members, vec![0]);
        assert_eq!(classes[1].members, vec![1, 2]);
        assert_eq!(classes[2].members, vec![3, 4, 5]);
    }

    #[test]
    fn dihedral_small_cases() {
        let d2 = FiniteGroup::dihedral(1);
        assert_eq!(d2.order(), 2);
        assert!(d2.is_abelian());

        let klein = FiniteGroup::dihedral(2);
        assert_eq!(klein.order(), 4);
        assert_eq!(oracle_classes(&klein).len(), 4);
        assert_eq!(klein.conjugacy_classes().len(), 4);
    }

    #[test]
    fn centralizers_in_dihedral_3() {
        let d6 = FiniteGroup::dihedral(3);
        // r = index 1, s = index 3.
        assert_eq!(d6.centralizer(1), vec![0, 1, 2]);
        assert_eq!(d6.centralizer(3), vec![0, 3]);
    }

    #[test]
    fn class_times_centralizer_equals_order() {
        for g in [
            FiniteGroup::cyclic(1),
            FiniteGroup::cyclic(6),
            FiniteGroup::dihedral(3),
            FiniteGroup::dihedral(4),
        ] {
            let class_of = g.class_index_table();
            let classes = g.conjugacy_classes();
            for x in 0..g.order() {
                assert_eq!(
                    classes[class_of[x]].len() * g.centralizer(x).len(),
                    g.order()
                );
            }
        }
    }

    #[test]
    fn monomorphism_validation() {
        let c3 = FiniteGroup::cyclic(3);
        let ident = Monomorphism::new(&c3, &c3, vec![0, 1, 2]).unwrap();
        assert_eq!(ident.induced_class_map(&c3, &c3), vec![0, 1, 2]);

        // Z2 into D6 sending the generator to s (index 3): s^2 = 1.
        let c2 = FiniteGroup::cyclic(2);
        let d6 = FiniteGroup::dihedral(3);
        assert_eq!(d6.mul(3, 3), 0);
        assert!(Monomorphism::new(&c2, &d6, vec![0, 3]).is_ok());

        // Z2 into Z4 sending the generator to an order-4 element fails.
        let c4 = FiniteGroup::cyclic(4);
        assert!(matches!(
            Monomorphism::new(&c2, &c4, vec![0, 1]),
            Err(GroupError::NotMonomorphism(_))
        ));
    }

    #[test]
    fn induced_class_map_merges_rotations_in_d6() {
        // Z3 into D6 via r: the source classes {r} and {r^2} both land in
        // the single class {r, r^2} because conjugation by s inverts r.
        let c3 = FiniteGroup::cyclic(3);
        let d6 = FiniteGroup::dihedral(3);
        let m = Monomorphism::new(&c3, &d6, vec![0, 1, 2]).unwrap();
        let induced = m.induced_class_map(&c3, &d6);
        assert_eq!(induced, vec![0, 1, 1]);
    }

    #[test]
    fn induced_class_map_is_representative_independent() {
        let c3 = FiniteGroup::cyclic(3);
        let d6 = FiniteGroup::dihedral(3);
        let m = Monomorphism::new(&c3, &d6, vec![0, 1, 2]).unwrap();
        let target_class_of = d6.class_index_table();
        for class in c3.conjugacy_classes() {
            let images: BTreeSet<usize> = class
                .members
                .iter()
                .map(|&h| target_class_of[m.apply(h)])
                .collect();
            assert_eq!(images.len(), 1);
        }
    }

    #[test]
    fn trivial_group_into_any_group() {
        let d6 = FiniteGroup::dihedral(3);
        let m = Monomorphism::from_trivial();
        assert_eq!(m.induced_class_map(&FiniteGroup::trivial(), &d6), vec![0]);
    }

    #[test]
    fn element_orders() {
        let d6 = FiniteGroup::dihedral(3);
        assert_eq!(d6.element_order(0), 1);
        assert_eq!(d6.element_order(1), 3);
        assert_eq!(d6.element_order(3), 2);
    }
}
