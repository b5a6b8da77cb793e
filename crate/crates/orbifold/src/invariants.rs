//! Orbifold Euler characteristics and the exact counting identities
//! relating them.
//!
//! All quantities are computed over the rationals with no rounding; the
//! `verify_*` operations evaluate both sides of each identity through
//! independent code paths (sector sums on one side, plain simplex counts
//! on the other) and report exact equality.

use std::collections::BTreeMap;

use num::Zero;
use thiserror::Error;

use crate::model::{GroupAction, LabeledComplex, ModelError};
use crate::rational::{alternating, rat, rat_int, Rational};
use crate::sectors::{decompose, EulerMode, SectorDecomposition, ShiftData, ShiftError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("complex has a declared boundary; the closed identity does not apply")]
    HasBoundary,
    #[error("complex has no declared boundary; the boundary identity does not apply")]
    NoBoundary,
    #[error(transparent)]
    Shift(#[from] ShiftError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Satake's orbifold Euler characteristic:
/// `sum over simplices of (-1)^dim / |G_sigma|`.
pub fn chi_orb(labeled: &LabeledComplex) -> Rational {
    labeled
        .complex()
        .simplices()
        .map(|s| alternating(s.dim) / rat_int(labeled.group_of(s.id).order() as i64))
        .sum()
}

/// The inner orbifold Euler characteristic: the same sum restricted to
/// simplices not contained in the declared boundary.
pub fn chi_orb_inner(labeled: &LabeledComplex) -> Rational {
    labeled
        .complex()
        .simplices()
        .filter(|s| !labeled.boundary_ids().contains(&s.id))
        .map(|s| alternating(s.dim) / rat_int(labeled.group_of(s.id).order() as i64))
        .sum()
}

/// Roan's stringy Euler number, evaluated over open simplices:
/// `sum of (-1)^dim * (number of conjugacy classes of G_sigma)`.
pub fn chi_roan(labeled: &LabeledComplex) -> i64 {
    labeled
        .complex()
        .simplices()
        .map(|s| {
            let e = labeled.group_of(s.id).conjugacy_classes().len() as i64;
            if s.dim % 2 == 0 {
                e
            } else {
                -e
            }
        })
        .sum()
}

/// The Dixon et al. orbifold Euler number of a global quotient:
/// `(1/|G|) * sum over commuting pairs (g, h) of chi(M^g intersect M^h)`,
/// with `M^g` the subcomplex fixed pointwise by `g`.
pub fn chi_dixon(action: &GroupAction) -> Result<Rational, InvariantError> {
    if let Some((element, simplex)) = action.regularity_violation() {
        return Err(InvariantError::Model(ModelError::NotRegular {
            element,
            simplex,
        }));
    }
    let group = action.group();
    let n = group.order();
    // chi of each pointwise-fixed subcomplex intersection, computed by a
    // direct alternating count over simplices fixed by both elements.
    let fixed: Vec<Vec<bool>> = (0..n)
        .map(|g| {
            action
                .complex()
                .simplices()
                .map(|s| {
                    action
                        .vertices_of(s.id)
                        .iter()
                        .all(|&v| action.image_vertex(g, v) == v)
                })
                .collect()
        })
        .collect();
    let signs: Vec<i64> = action
        .complex()
        .simplices()
        .map(|s| if s.dim % 2 == 0 { 1 } else { -1 })
        .collect();
    let mut total = 0i64;
    for g in 0..n {
        for h in 0..n {
            if group.mul(g, h) != group.mul(h, g) {
                continue;
            }
            total += signs
                .iter()
                .zip(fixed[g].iter().zip(fixed[h].iter()))
                .filter(|(_, (fg, fh))| **fg && **fh)
                .map(|(sign, _)| *sign)
                .sum::<i64>();
        }
    }
    Ok(rat(total, n as i64))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedIdentity {
    pub sector_sum: Rational,
    pub chi: i64,
    pub holds: bool,
}

/// The closed counting identity: the orbifold Euler characteristics of the
/// sectors sum to the Euler characteristic of the underlying space.
pub fn verify_closed_identity(labeled: &LabeledComplex) -> Result<ClosedIdentity, InvariantError> {
    if !labeled.is_closed() {
        return Err(InvariantError::HasBoundary);
    }
    let dec = decompose(labeled);
    verify_closed_identity_with(labeled, &dec)
}

pub fn verify_closed_identity_with(
    labeled: &LabeledComplex,
    dec: &SectorDecomposition,
) -> Result<ClosedIdentity, InvariantError> {
    if !labeled.is_closed() {
        return Err(InvariantError::HasBoundary);
    }
    let sector_sum: Rational = (0..dec.sector_count())
        .map(|t| dec.sector_euler(t, EulerMode::Orbifold))
        .sum();
    let chi = labeled.complex().euler_characteristic();
    let holds = sector_sum == rat_int(chi);
    Ok(ClosedIdentity {
        sector_sum,
        chi,
        holds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryIdentity {
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
}

/// The boundary counting identity: over the sectors,
/// `sum_t [ chi'_orb(sector) - (1/2) chi_orb(boundary part of sector) ]`
/// equals the plain count `(chi(Q) - chi(dQ)) - (1/2) chi(dQ)` on the
/// underlying complex.
pub fn verify_boundary_identity(
    labeled: &LabeledComplex,
) -> Result<BoundaryIdentity, InvariantError> {
    if labeled.is_closed() {
        return Err(InvariantError::NoBoundary);
    }
    let dec = decompose(labeled);
    verify_boundary_identity_with(labeled, &dec)
}

pub fn verify_boundary_identity_with(
    labeled: &LabeledComplex,
    dec: &SectorDecomposition,
) -> Result<BoundaryIdentity, InvariantError> {
    if labeled.is_closed() {
        return Err(InvariantError::NoBoundary);
    }
    let mut lhs = Rational::zero();
    for t in 0..dec.sector_count() {
        let inner = dec.sector_euler(t, EulerMode::InnerOrbifold);
        let boundary = dec.sector_euler(t, EulerMode::BoundaryOrbifold);
        lhs += inner - boundary / rat_int(2);
    }
    let chi = labeled.complex().euler_characteristic();
    let chi_bd = labeled
        .complex()
        .simplices()
        .filter(|s| labeled.boundary_ids().contains(&s.id))
        .map(|s| if s.dim % 2 == 0 { 1i64 } else { -1 })
        .sum::<i64>();
    let rhs = rat_int(chi - chi_bd) - rat(chi_bd, 2);
    let holds = lhs == rhs;
    Ok(BoundaryIdentity { lhs, rhs, holds })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppendixIdentity {
    pub chi_roan: i64,
    pub sector_sum_plain: i64,
    pub holds: bool,
}

/// The stringy identity: Roan's Euler number equals the sum of the plain
/// Euler characteristics of the sectors.
pub fn verify_appendix_identity(labeled: &LabeledComplex) -> AppendixIdentity {
    let dec = decompose(labeled);
    verify_appendix_identity_with(labeled, &dec)
}

pub fn verify_appendix_identity_with(
    labeled: &LabeledComplex,
    dec: &SectorDecomposition,
) -> AppendixIdentity {
    let roan = chi_roan(labeled);
    let sector_sum: Rational = (0..dec.sector_count())
        .map(|t| dec.sector_euler(t, EulerMode::Underlying))
        .sum();
    let plain = sector_sum
        .to_integer()
        .try_into()
        .expect("plain sector sums are small integers");
    AppendixIdentity {
        chi_roan: roan,
        sector_sum_plain: plain,
        holds: roan == plain,
    }
}

/// Dimension table of the orbifold cohomology: for each sector with shift
/// `iota` and Betti numbers `b_j`, adds `b_j` in degree `2 iota + j`.
pub fn orbifold_betti_table(
    labeled: &LabeledComplex,
    data: &ShiftData,
) -> Result<BTreeMap<Rational, usize>, InvariantError> {
    let dec = decompose(labeled);
    orbifold_betti_table_with(labeled, &dec, data)
}

pub fn orbifold_betti_table_with(
    labeled: &LabeledComplex,
    dec: &SectorDecomposition,
    data: &ShiftData,
) -> Result<BTreeMap<Rational, usize>, InvariantError> {
    let mut table: BTreeMap<Rational, usize> = BTreeMap::new();
    for t in 0..dec.sector_count() {
        let iota = dec.degree_shift(labeled, data, t)?;
        let base = iota.clone() + iota;
        for (j, b) in dec.sector_betti(t).into_iter().enumerate() {
            if b == 0 {
                continue;
            }
            *table.entry(base.clone() + rat_int(j as i64)).or_insert(0) += b;
        }
    }
    Ok(table)
}

/// Everything the `chi` report carries, computed in one pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantReport {
    pub chi_underlying: i64,
    pub chi_boundary: i64,
    pub chi_orb: Rational,
    pub chi_orb_inner: Rational,
    pub chi_orb_boundary: Rational,
    pub chi_roan: i64,
    pub sector_count: usize,
    pub sector_sum_orb: Rational,
    pub sector_sum_plain: i64,
    pub closed_identity: Option<ClosedIdentity>,
    pub boundary_identity: Option<BoundaryIdentity>,
    pub appendix_identity: AppendixIdentity,
    pub orbifold_betti: Option<BTreeMap<Rational, usize>>,
}

impl InvariantReport {
    pub fn identities_hold(&self) -> bool {
        self.closed_identity.as_ref().map_or(true, |c| c.holds)
            && self.boundary_identity.as_ref().map_or(true, |b| b.holds)
            && self.appendix_identity.holds
    }
}

/// Assembles the full report for a validated labeled complex.
pub fn invariant_report(labeled: &LabeledComplex) -> Result<InvariantReport, InvariantError> {
    let dec = decompose(labeled);
    let boundary = labeled.boundary_restriction();
    let closed_identity = if labeled.is_closed() {
        Some(verify_closed_identity_with(labeled, &dec)?)
    } else {
        None
    };
    let boundary_identity = if labeled.is_closed() {
        None
    } else {
        Some(verify_boundary_identity_with(labeled, &dec)?)
    };
    let appendix_identity = verify_appendix_identity_with(labeled, &dec);
    let orbifold_betti = match labeled.shift_data() {
        Some(data) if !data.is_empty() => {
            Some(orbifold_betti_table_with(labeled, &dec, data)?)
        }
        _ => None,
    };
    let sector_sum_orb: Rational = (0..dec.sector_count())
        .map(|t| dec.sector_euler(t, EulerMode::Orbifold))
        .sum();
    Ok(InvariantReport {
        chi_underlying: labeled.complex().euler_characteristic(),
        chi_boundary: boundary.complex().euler_characteristic(),
        chi_orb: chi_orb(labeled),
        chi_orb_inner: chi_orb_inner(labeled),
        chi_orb_boundary: chi_orb(&boundary),
        chi_roan: chi_roan(labeled),
        sector_count: dec.sector_count(),
        sector_sum_orb,
        sector_sum_plain: appendix_identity.sector_sum_plain,
        closed_identity,
        boundary_identity,
        appendix_identity,
        orbifold_betti,
    })
}
