//! Integer chain complexes and exact rank computation.
//!
//! Betti numbers are ranks of rational homology, computed by fraction-free
//! (Bareiss) Gaussian elimination over arbitrary-precision integers, so no
//! rounding ever enters the Euler/Betti identities.

use num::{BigInt, One, Signed, Zero};

/// Dense integer matrix with small entries; rank computation promotes to
/// `BigInt` internally where Bareiss intermediates can grow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn add_to(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] += v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    /// Exact rank over the rationals by Bareiss elimination.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| BigInt::from(self.get(r, c))).collect())
            .collect();
        let mut rank = 0usize;
        let mut prev = BigInt::one();
        let mut row = 0usize;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            // Prefer a pivot of minimal magnitude to keep intermediates small.
            let pivot = (row..self.rows)
                .filter(|&r| !m[r][col].is_zero())
                .min_by_key(|&r| m[r][col].abs());
            let Some(p) = pivot else { continue };
            m.swap(row, p);
            for r in row + 1..self.rows {
                for c in col + 1..self.cols {
                    let num = &m[row][col] * &m[r][c] - &m[r][col] * &m[row][c];
                    // Bareiss: this division is exact.
                    m[r][c] = num / &prev;
                }
                m[r][col] = BigInt::zero();
            }
            prev = m[row][col].clone();
            row += 1;
            rank += 1;
        }
        rank
    }
}

/// A finite chain complex of free modules: `cell_counts[d]` cells in degree
/// `d`, with `boundaries[d]` the map from degree `d` to degree `d - 1`
/// (`boundaries[0]` is the zero map out of degree 0 and has no rows).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    pub cell_counts: Vec<usize>,
    pub boundaries: Vec<IntMatrix>,
}

impl ChainComplex {
    pub fn top_dim(&self) -> usize {
        self.cell_counts.len().saturating_sub(1)
    }

    /// Checks `boundary . boundary == 0` in every degree.
    pub fn square_is_zero(&self) -> bool {
        for d in 2..self.boundaries.len() {
            if !self.boundaries[d - 1].mul(&self.boundaries[d]).is_zero() {
                return false;
            }
        }
        true
    }

    /// Alternating sum of cell counts.
    pub fn euler_characteristic(&self) -> i64 {
        self.cell_counts
            .iter()
            .enumerate()
            .map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// Rational Betti numbers `b_d = n_d - rank d_d - rank d_{d+1}`.
    pub fn betti_numbers(&self) -> Vec<usize> {
        let top = self.cell_counts.len();
        let ranks: Vec<usize> = (0..=top)
            .map(|d| {
                if d == 0 || d >= self.boundaries.len() {
                    0
                } else {
                    self.boundaries[d].rank()
                }
            })
            .collect();
        (0..top)
            .map(|d| self.cell_counts[d] - ranks[d] - ranks[d + 1])
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_rows(rows: &[&[i64]]) -> IntMatrix {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = IntMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.add_to(i, j, v);
            }
        }
        m
    }

    #[test]
    fn rank_of_simple_matrices() {
        assert_eq!(from_rows(&[&[1, 0], &[0, 1]]).rank(), 2);
        assert_eq!(from_rows(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(from_rows(&[&[0, 0], &[0, 0]]).rank(), 0);
        assert_eq!(IntMatrix::zeros(0, 5).rank(), 0);
        // A matrix that overflows naive floating pivots is still exact here.
        assert_eq!(
            from_rows(&[
                &[1_000_000_007, 2, 3],
                &[4, 1_000_000_007, 6],
                &[7, 8, 1_000_000_007],
            ])
            .rank(),
            3
        );
    }

    #[test]
    fn rank_matches_row_reduction_oracle_on_random_small_matrices() {
        // Oracle: rational Gaussian elimination with i128 fractions avoided
        // by clearing denominators row by row.
        fn oracle_rank(mut m: Vec<Vec<i128>>) -> usize {
            let rows = m.len();
            if rows == 0 {
                return 0;
            }
            let cols = m[0].len();
            let mut rank = 0;
            let mut row = 0;
            for col in 0..cols {
                if row >= rows {
                    break;
                }
                let Some(p) = (row..rows).find(|&r| m[r][col] != 0) else {
                    continue;
                };
                m.swap(row, p);
                for r in 0..rows {
                    if r != row && m[r][col] != 0 {
                        let a = m[row][col];
                        let b = m[r][col];
                        for c in 0..cols {
                            m[r][c] = m[r][c] * a - m[row][c] * b;
                        }
                    }
                }
                row += 1;
                rank += 1;
            }
            rank
        }

        let mut state = 0x2545F4914F6CDD1Du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..50 {
            let rows = (next() % 5 + 1) as usize;
            let cols = (next() % 5 + 1) as usize;
            let mut m = IntMatrix::zeros(rows, cols);
            let mut o = vec![vec![0i128; cols]; rows];
            for r in 0..rows {
                for c in 0..cols {
                    let v = (next() % 7) as i64 - 3;
                    m.add_to(r, c, v);
                    o[r][c] = v as i128;
                }
            }
            assert_eq!(m.rank(), oracle_rank(o));
        }
    }

    #[test]
    fn circle_chain_complex() {
        // Three vertices, three edges in a cycle.
        let mut d1 = IntMatrix::zeros(3, 3);
        // edge i: v_i -> v_{i+1}
        for e in 0..3 {
            d1.add_to((e + 1) % 3, e, 1);
            d1.add_to(e, e, -1);
        }
        let c = ChainComplex {
            cell_counts: vec![3, 3],
            boundaries: vec![IntMatrix::zeros(0, 3), d1],
        };
        assert!(c.square_is_zero());
        assert_eq!(c.euler_characteristic(), 0);
        assert_eq!(c.betti_numbers(), vec![1, 1]);
    }
}
