//! Linear-chart analysis: orthogonal representations of finite groups,
//! singular dimensions, equivariant planar vector fields and their
//! winding-number indices, and eigenvalue exponents of finite-order
//! unitary matrices.
//!
//! This is the one numerical corner of the crate. Matrices are exact
//! rotations up to rounding, so a single absolute tolerance (default 1e-9
//! for matrix identities, 1e-7 relative for ranks) sits far from any
//! failure mode; everything downstream of the integer outputs here is
//! exact again.

use nalgebra::{Complex, DMatrix};
use thiserror::Error;

use crate::group::FiniteGroup;
use crate::rational::{rat, Rational};

pub const MATRIX_TOL: f64 = 1e-9;
pub const RANK_TOL: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChartError {
    #[error("expected one matrix of size {n}x{n} per group element")]
    MatrixShape { n: usize },
    #[error("matrix for element {element} is not orthogonal")]
    NotOrthogonal { element: usize },
    #[error("matrices do not form a representation at ({a}, {b})")]
    NotRepresentation { a: usize, b: usize },
    #[error("element {element} acts nontrivially with fixed space of codimension < 2")]
    FixedCodimensionTooSmall { element: usize },
    #[error("field vanishes on the sampling circle (|f| = {norm:.3e} at angle {angle:.3})")]
    VanishesOnCircle { norm: f64, angle: f64 },
    #[error("field is not equivariant for the chart group")]
    NotEquivariant,
    #[error("matrix is not of finite order {m} within tolerance")]
    NotFiniteOrder { m: usize },
}

/// An orthogonal representation of a finite group on R^n.
#[derive(Debug, Clone)]
pub struct LinearChart {
    n: usize,
    group: FiniteGroup,
    matrices: Vec<DMatrix<f64>>,
}

impl LinearChart {
    /// Validates the matrices as an orthogonal representation whose
    /// nontrivially-acting elements fix a subspace of codimension >= 2.
    pub fn new(
        group: FiniteGroup,
        matrices: Vec<DMatrix<f64>>,
        tol: f64,
    ) -> Result<Self, ChartError> {
        let n = matrices.first().map_or(0, |m| m.nrows());
        if matrices.len() != group.order()
            || matrices.iter().any(|m| m.nrows() != n || m.ncols() != n)
        {
            return Err(ChartError::MatrixShape { n });
        }
        let eye = DMatrix::<f64>::identity(n, n);
        for (e, m) in matrices.iter().enumerate() {
            if ((m.transpose() * m) - &eye).abs().max() > tol {
                return Err(ChartError::NotOrthogonal { element: e });
            }
        }
        for a in 0..group.order() {
            for b in 0..group.order() {
                let prod = &matrices[a] * &matrices[b];
                if (&prod - &matrices[group.mul(a, b)]).abs().max() > tol {
                    return Err(ChartError::NotRepresentation { a, b });
                }
            }
        }
        for e in 1..group.order() {
            let m = &matrices[e];
            if (m - &eye).abs().max() <= tol {
                continue; // acts trivially
            }
            let fixed = fixed_space_dimension(m, n);
            if n - fixed < 2 {
                return Err(ChartError::FixedCodimensionTooSmall { element: e });
            }
        }
        Ok(LinearChart { n, group, matrices })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn matrix(&self, element: usize) -> &DMatrix<f64> {
        &self.matrices[element]
    }

    /// Dimension of the subspace fixed by the whole group: the singular
    /// dimension of the chart's center.
    pub fn singular_dimension(&self) -> usize {
        if self.group.order() == 1 {
            return self.n;
        }
        // Kernel of the stacked (M_g - I) blocks.
        let rows = self.n * (self.group.order() - 1);
        let mut stacked = DMatrix::<f64>::zeros(rows, self.n);
        let eye = DMatrix::<f64>::identity(self.n, self.n);
        for (i, m) in self.matrices.iter().enumerate().skip(1) {
            let block = m - &eye;
            stacked
                .view_mut(((i - 1) * self.n, 0), (self.n, self.n))
                .copy_from(&block);
        }
        self.n - rank(&stacked)
    }

    /// Fixed-space dimension of each element; entry 0 (the identity) is
    /// the ambient dimension.
    pub fn stratum_dimensions(&self) -> Vec<usize> {
        self.matrices
            .iter()
            .map(|m| fixed_space_dimension(m, self.n))
            .collect()
    }

    /// The chart conjugated by an orthogonal matrix `q`.
    pub fn conjugated(&self, q: &DMatrix<f64>) -> LinearChart {
        let qt = q.transpose();
        LinearChart {
            n: self.n,
            group: self.group.clone(),
            matrices: self.matrices.iter().map(|m| q * m * &qt).collect(),
        }
    }
}

/// True when the conjugated chart has the same singular dimension;
/// well-definedness of the singular dimension under chart changes.
pub fn singular_dimension_invariant(chart: &LinearChart, q: &DMatrix<f64>) -> bool {
    chart.conjugated(q).singular_dimension() == chart.singular_dimension()
}

fn rank(m: &DMatrix<f64>) -> usize {
    let svd = m.clone().svd(false, false);
    let max = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    if max == 0.0 {
        return 0;
    }
    svd.singular_values
        .iter()
        .filter(|&&s| s > RANK_TOL * max)
        .count()
}

fn fixed_space_dimension(m: &DMatrix<f64>, n: usize) -> usize {
    let eye = DMatrix::<f64>::identity(n, n);
    n - rank(&(m - eye))
}

/// A deterministic planar vector field sampled as a function of (x, y).
pub struct PlanarField {
    label: String,
    sampler: Box<dyn Fn(f64, f64) -> (f64, f64) + Send + Sync>,
}

impl std::fmt::Debug for PlanarField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PlanarField")
            .field("label", &self.label)
            .finish_non_exhaustive()
    }
}

impl PlanarField {
    pub fn new(
        label: impl Into<String>,
        sampler: impl Fn(f64, f64) -> (f64, f64) + Send + Sync + 'static,
    ) -> Self {
        PlanarField {
            label: label.into(),
            sampler: Box::new(sampler),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, x: f64, y: f64) -> (f64, f64) {
        (self.sampler)(x, y)
    }
}

/// Checks `f(g x) = g f(x)` on a `samples x samples` grid over [-1, 1]^2
/// for every group element, within `tol`.
pub fn equivariance_check(
    field: &PlanarField,
    chart: &LinearChart,
    samples: usize,
    tol: f64,
) -> bool {
    assert_eq!(chart.dimension(), 2, "equivariance check is planar");
    let steps = samples.max(2);
    for i in 0..steps {
        for j in 0..steps {
            let x = -1.0 + 2.0 * (i as f64) / (steps - 1) as f64;
            let y = -1.0 + 2.0 * (j as f64) / (steps - 1) as f64;
            let (fx, fy) = field.eval(x, y);
            for g in 0..chart.group().order() {
                let m = chart.matrix(g);
                let gx = m[(0, 0)] * x + m[(0, 1)] * y;
                let gy = m[(1, 0)] * x + m[(1, 1)] * y;
                let (fgx, fgy) = field.eval(gx, gy);
                let gfx = m[(0, 0)] * fx + m[(0, 1)] * fy;
                let gfy = m[(1, 0)] * fx + m[(1, 1)] * fy;
                if ((fgx - gfx).powi(2) + (fgy - gfy).powi(2)).sqrt() > tol {
                    return false;
                }
            }
        }
    }
    true
}

/// Winding number of the field around the circle of the given radius:
/// total angular increment divided by 2 pi, with the sample count doubled
/// until consecutive angle steps stay below pi/2.
pub fn winding_index(
    field: &PlanarField,
    radius: f64,
    samples: usize,
) -> Result<i64, ChartError> {
    let mut n = samples.clamp(256, 1 << 20);
    loop {
        match try_winding(field, radius, n) {
            Ok(w) => return Ok(w),
            Err(WindingRetry::StepTooLarge) => {
                if n >= 1 << 20 {
                    // Angle steps refuse to settle; treat as a vanishing
                    // approach to zero on the circle.
                    return Err(ChartError::VanishesOnCircle {
                        norm: 0.0,
                        angle: 0.0,
                    });
                }
                n *= 2;
            }
            Err(WindingRetry::Vanishes { norm, angle }) => {
                return Err(ChartError::VanishesOnCircle { norm, angle })
            }
        }
    }
}

enum WindingRetry {
    StepTooLarge,
    Vanishes { norm: f64, angle: f64 },
}

fn try_winding(field: &PlanarField, radius: f64, n: usize) -> Result<i64, WindingRetry> {
    let mut total = 0.0f64;
    let mut prev_angle = 0.0f64;
    for i in 0..=n {
        let theta = 2.0 * std::f64::consts::PI * (i as f64) / (n as f64);
        let (u, v) = field.eval(radius * theta.cos(), radius * theta.sin());
        let norm = (u * u + v * v).sqrt();
        if norm <= 10.0 * MATRIX_TOL {
            return Err(WindingRetry::Vanishes { norm, angle: theta });
        }
        let angle = v.atan2(u);
        if i > 0 {
            let mut step = angle - prev_angle;
            while step > std::f64::consts::PI {
                step -= 2.0 * std::f64::consts::PI;
            }
            while step < -std::f64::consts::PI {
                step += 2.0 * std::f64::consts::PI;
            }
            if step.abs() >= std::f64::consts::FRAC_PI_2 {
                return Err(WindingRetry::StepTooLarge);
            }
            total += step;
        }
        prev_angle = angle;
    }
    Ok((total / (2.0 * std::f64::consts::PI)).round() as i64)
}

/// The orbifold index of a field at the chart center: the winding number
/// of the lift divided by the chart group order. Requires equivariance.
pub fn orbifold_index(
    field: &PlanarField,
    chart: &LinearChart,
    radius: f64,
    samples: usize,
) -> Result<Rational, ChartError> {
    if !equivariance_check(field, chart, 33, MATRIX_TOL.max(1e-7)) {
        return Err(ChartError::NotEquivariant);
    }
    let winding = winding_index(field, radius, samples)?;
    Ok(rat(winding, chart.group().order() as i64))
}

/// Recovers the eigenvalue exponents `(m_j, m)` of a unitary matrix of
/// finite order `m`: multiplicities of each m-th root of unity, computed
/// by character orthogonality from the traces of the powers.
pub fn exponent_pairs(
    matrix: &DMatrix<Complex<f64>>,
    m: usize,
    tol: f64,
) -> Result<Vec<(u64, u64)>, ChartError> {
    assert!(m >= 1);
    let n = matrix.nrows();
    assert_eq!(matrix.ncols(), n, "exponent_pairs needs a square matrix");
    let eye = DMatrix::<Complex<f64>>::identity(n, n);

    // Traces of U^t for t = 0..m, checking U^m = I.
    let mut power = eye.clone();
    let mut traces = Vec::with_capacity(m);
    for _ in 0..m {
        traces.push(power.diagonal().sum());
        power *= matrix;
    }
    if (&power - &eye).map(|c| c.norm()).max() > tol {
        return Err(ChartError::NotFiniteOrder { m });
    }

    let mut pairs = Vec::with_capacity(n);
    for j in 0..m {
        let mut mult = Complex::new(0.0, 0.0);
        for (t, tr) in traces.iter().enumerate() {
            let phase = -2.0 * std::f64::consts::PI * (j as f64) * (t as f64) / (m as f64);
            mult += tr * Complex::new(phase.cos(), phase.sin());
        }
        mult /= Complex::new(m as f64, 0.0);
        let count = mult.re.round();
        if (mult.re - count).abs() > 1e-6 || mult.im.abs() > 1e-6 {
            return Err(ChartError::NotFiniteOrder { m });
        }
        for _ in 0..count as usize {
            pairs.push((j as u64, m as u64));
        }
    }
    if pairs.len() != n {
        return Err(ChartError::NotFiniteOrder { m });
    }
    Ok(pairs)
}

/// 2x2 rotation by `2 pi j / k`.
pub fn rotation2(j: usize, k: usize) -> DMatrix<f64> {
    let theta = 2.0 * std::f64::consts::PI * (j as f64) / (k as f64);
    DMatrix::from_row_slice(2, 2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()])
}

/// The planar cyclic rotation chart of order `k`.
pub fn cyclic_rotation_chart(k: usize) -> LinearChart {
    let matrices = (0..k).map(|j| rotation2(j, k)).collect();
    LinearChart::new(FiniteGroup::cyclic(k), matrices, MATRIX_TOL)
        .expect("rotations are an orthogonal representation")
}

/// Z2 acting on R^3 by the antipodal map.
pub fn antipodal_chart() -> LinearChart {
    let matrices = vec![
        DMatrix::<f64>::identity(3, 3),
        -DMatrix::<f64>::identity(3, 3),
    ];
    LinearChart::new(FiniteGroup::cyclic(2), matrices, MATRIX_TOL).expect("antipodal chart")
}

/// Z_k rotating R^3 about the z-axis.
pub fn axis_rotation_chart(k: usize) -> LinearChart {
    let matrices = (0..k)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * (j as f64) / (k as f64);
            DMatrix::from_row_slice(
                3,
                3,
                &[
                    theta.cos(),
                    -theta.sin(),
                    0.0,
                    theta.sin(),
                    theta.cos(),
                    0.0,
                    0.0,
                    0.0,
                    1.0,
                ],
            )
        })
        .collect();
    LinearChart::new(FiniteGroup::cyclic(k), matrices, MATRIX_TOL).expect("axis rotation chart")
}

/// The dihedral chart of the figure-eight hub: D6 generated by the
/// rotation of pi about the x-axis and the rotation of 2 pi / 3 about the
/// z-axis. Element `a + 3b` is `(R_z)^a (R_x)^b`.
pub fn figure8_chart() -> LinearChart {
    let r_x = DMatrix::from_row_slice(
        3,
        3,
        &[1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, -1.0],
    );
    let c = (2.0 * std::f64::consts::PI / 3.0).cos();
    let s = (2.0 * std::f64::consts::PI / 3.0).sin();
    let r_z = DMatrix::from_row_slice(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0]);
    let matrices = (0..6)
        .map(|e| {
            let (a, b) = (e % 3, e / 3);
            let mut m = DMatrix::<f64>::identity(3, 3);
            for _ in 0..a {
                m = &r_z * m;
            }
            for _ in 0..b {
                m = m * &r_x;
            }
            m
        })
        .collect();
    LinearChart::new(FiniteGroup::dihedral(3), matrices, MATRIX_TOL)
        .expect("figure-eight hub chart")
}

/// Deterministic random orthogonal matrix built from seeded Givens
/// rotations (and a possible axis flip), for invariance tests.
pub fn seeded_orthogonal(n: usize, seed: u64) -> DMatrix<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut q = DMatrix::<f64>::identity(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let theta: f64 = rng.gen_range(0.0..(2.0 * std::f64::consts::PI));
            let mut g = DMatrix::<f64>::identity(n, n);
            g[(i, i)] = theta.cos();
            g[(j, j)] = theta.cos();
            g[(i, j)] = -theta.sin();
            g[(j, i)] = theta.sin();
            q = g * q;
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field_z() -> PlanarField {
        PlanarField::new("z", |x, y| (x, y))
    }

    fn field_z_squared() -> PlanarField {
        PlanarField::new("z^2", |x, y| (x * x - y * y, 2.0 * x * y))
    }

    fn field_conj_z() -> PlanarField {
        PlanarField::new("conj(z)", |x, y| (x, -y))
    }

    fn field_z_pow4() -> PlanarField {
        PlanarField::new("z^4", |x, y| {
            let (a, b) = (x * x - y * y, 2.0 * x * y);
            (a * a - b * b, 2.0 * a * b)
        })
    }

    #[test]
    fn singular_dimensions_of_standard_charts() {
        let trivial = LinearChart::new(
            FiniteGroup::cyclic(1),
            vec![DMatrix::<f64>::identity(3, 3)],
            MATRIX_TOL,
        )
        .unwrap();
        assert_eq!(trivial.singular_dimension(), 3);
        assert_eq!(antipodal_chart().singular_dimension(), 0);
        assert_eq!(axis_rotation_chart(3).singular_dimension(), 1);
        assert_eq!(cyclic_rotation_chart(4).singular_dimension(), 0);
    }

    #[test]
    fn figure8_chart_strata() {
        let chart = figure8_chart();
        let dims = chart.stratum_dimensions();
        assert_eq!(dims[0], 3); // identity
        assert_eq!(dims[3], 1); // R_x, the x-axis
        assert_eq!(dims[1], 1); // R_z, the z-axis
        assert_eq!(dims[2], 1);
        assert_eq!(chart.singular_dimension(), 0);
    }

    #[test]
    fn codimension_violation_is_reported() {
        // A planar reflection fixes a line: codimension 1.
        let reflect = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let result = LinearChart::new(
            FiniteGroup::cyclic(2),
            vec![DMatrix::<f64>::identity(2, 2), reflect],
            MATRIX_TOL,
        );
        assert!(matches!(
            result,
            Err(ChartError::FixedCodimensionTooSmall { element: 1 })
        ));
    }

    #[test]
    fn singular_dimension_is_conjugation_invariant() {
        for (i, chart) in [
            antipodal_chart(),
            axis_rotation_chart(3),
            figure8_chart(),
        ]
        .iter()
        .enumerate()
        {
            for s in 0..20u64 {
                let q = seeded_orthogonal(chart.dimension(), 1000 * (i as u64) + s);
                assert!(singular_dimension_invariant(chart, &q));
            }
        }
        let chart = antipodal_chart();
        let q = DMatrix::<f64>::identity(3, 3);
        assert!(singular_dimension_invariant(&chart, &q));
    }

    #[test]
    fn equivariance_examples() {
        let c3 = cyclic_rotation_chart(3);
        assert!(equivariance_check(&field_z(), &c3, 17, 1e-8));
        assert!(!equivariance_check(&field_conj_z(), &c3, 17, 1e-8));
        // z^4 commutes with rotations of order 3 since w^4 = w.
        assert!(equivariance_check(&field_z_pow4(), &c3, 17, 1e-8));
        // z^2 does not.
        assert!(!equivariance_check(&field_z_squared(), &c3, 17, 1e-8));
    }

    #[test]
    fn winding_numbers() {
        for radius in [0.5, 1.25] {
            assert_eq!(winding_index(&field_z(), radius, 256).unwrap(), 1);
            assert_eq!(winding_index(&field_z_squared(), radius, 256).unwrap(), 2);
            assert_eq!(winding_index(&field_conj_z(), radius, 256).unwrap(), -1);
            assert_eq!(winding_index(&field_z_pow4(), radius, 256).unwrap(), 4);
        }
    }

    #[test]
    fn vanishing_on_circle_is_reported() {
        // A field vanishing on the unit circle.
        let f = PlanarField::new("(1 - |z|^2) z", |x, y| {
            let s = 1.0 - (x * x + y * y);
            (s * x, s * y)
        });
        assert!(matches!(
            winding_index(&f, 1.0, 256),
            Err(ChartError::VanishesOnCircle { .. })
        ));
    }

    #[test]
    fn orbifold_indices() {
        let c3 = cyclic_rotation_chart(3);
        assert_eq!(orbifold_index(&field_z(), &c3, 0.7, 256).unwrap(), rat(1, 3));
        assert_eq!(
            orbifold_index(&field_z_pow4(), &c3, 0.7, 256).unwrap(),
            rat(4, 3)
        );
        let trivial = cyclic_rotation_chart(1);
        assert_eq!(
            orbifold_index(&field_z(), &trivial, 0.7, 256).unwrap(),
            rat(1, 1)
        );
        assert_eq!(
            orbifold_index(&field_z_squared(), &trivial, 0.7, 256).unwrap(),
            rat(2, 1)
        );
        assert!(matches!(
            orbifold_index(&field_conj_z(), &c3, 0.7, 256),
            Err(ChartError::NotEquivariant)
        ));
    }

    #[test]
    fn equivariant_fields_vanish_at_a_zero_dimensional_singularity() {
        // With a nontrivial planar rotation group the singular dimension is
        // zero, so an equivariant field must vanish at the origin.
        for k in [2usize, 3, 5] {
            let chart = cyclic_rotation_chart(k);
            assert_eq!(chart.singular_dimension(), 0);
            for field in [field_z(), field_z_pow4()] {
                if equivariance_check(&field, &chart, 9, 1e-8) {
                    let (fx, fy) = field.eval(0.0, 0.0);
                    assert!((fx * fx + fy * fy).sqrt() <= MATRIX_TOL);
                }
            }
        }
    }

    #[test]
    fn exponent_pairs_of_rotations() {
        let identity = DMatrix::<Complex<f64>>::identity(2, 2);
        assert_eq!(
            exponent_pairs(&identity, 1, 1e-9).unwrap(),
            vec![(0, 1), (0, 1)]
        );

        // Rotation by 2 pi / 3 as a 1x1 unitary matrix.
        let theta = 2.0 * std::f64::consts::PI / 3.0;
        let u = DMatrix::from_row_slice(1, 1, &[Complex::new(theta.cos(), theta.sin())]);
        assert_eq!(exponent_pairs(&u, 3, 1e-9).unwrap(), vec![(1, 3)]);

        // Rotation by 4 pi / 5: eigenvalue exponent 2 of 5.
        let theta = 4.0 * std::f64::consts::PI / 5.0;
        let u = DMatrix::from_row_slice(1, 1, &[Complex::new(theta.cos(), theta.sin())]);
        assert_eq!(exponent_pairs(&u, 5, 1e-9).unwrap(), vec![(2, 5)]);

        // Wrong order claim.
        assert!(matches!(
            exponent_pairs(&u, 3, 1e-9),
            Err(ChartError::NotFiniteOrder { m: 3 })
        ));
    }

    #[test]
    fn exponent_pairs_match_gallery_shift_data() {
        // The teardrop shift data (i, k) reproduces sum m_i / m for the
        // rotation e^{2 pi i j / k} acting on one complex coordinate.
        for k in [3usize, 5] {
            for j in 1..k {
                let theta = 2.0 * std::f64::consts::PI * (j as f64) / (k as f64);
                let u = DMatrix::from_row_slice(1, 1, &[Complex::new(theta.cos(), theta.sin())]);
                let pairs = exponent_pairs(&u, k, 1e-9).unwrap();
                let total: Rational = pairs
                    .iter()
                    .map(|&(mi, m)| rat(mi as i64, m as i64))
                    .sum();
                assert_eq!(total, rat(j as i64, k as i64));
            }
        }
    }
}
