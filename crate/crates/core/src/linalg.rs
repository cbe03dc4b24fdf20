//! Exact dense linear algebra over the rationals: row echelon form, rank,
//! kernel bases, linear solves, and reduction modulo a subspace. Small and
//! dense on purpose; the cone dimensions here stay far below a hundred.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::rational::{QVec, Rat};

/// Row echelon form with pivot bookkeeping. Rows are reduced upwards as well
/// (RREF), so pivot columns contain a single 1.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<QVec>,
    pub pivots: Vec<usize>,
    pub dim: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Canonical representative of `v` modulo the row space: subtracts the
    /// unique combination of echelon rows that zeroes every pivot coordinate.
    pub fn reduce(&self, v: &[Rat]) -> QVec {
        debug_assert_eq!(v.len(), self.dim);
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !out[p].is_zero() {
                let c = out[p].clone();
                for (x, r) in out.iter_mut().zip(row) {
                    if !r.is_zero() {
                        *x -= &c * r;
                    }
                }
            }
        }
        out
    }

    /// True iff `v` lies in the row space.
    pub fn contains(&self, v: &[Rat]) -> bool {
        self.reduce(v).iter().all(Rat::is_zero)
    }
}

/// Reduced row echelon form of the given rows.
pub fn echelon(rows: &[QVec], dim: usize) -> Echelon {
    let mut work: Vec<QVec> = rows.iter().filter(|r| !r.iter().all(Rat::is_zero)).cloned().collect();
    let mut pivots = Vec::new();
    let mut next_row = 0usize;
    for col in 0..dim {
        let Some(src) = (next_row..work.len()).find(|&r| !work[r][col].is_zero()) else {
            continue;
        };
        work.swap(next_row, src);
        let inv = {
            let p = work[next_row][col].clone();
            p.recip()
        };
        for x in work[next_row].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = work[next_row].clone();
        for (r, row) in work.iter_mut().enumerate() {
            if r != next_row && !row[col].is_zero() {
                let c = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *x -= &c * p;
                    }
                }
            }
        }
        pivots.push(col);
        next_row += 1;
        if next_row == work.len() {
            break;
        }
    }
    work.truncate(next_row);
    Echelon { rows: work, pivots, dim }
}

pub fn rank(rows: &[QVec], dim: usize) -> usize {
    echelon(rows, dim).rank()
}

/// Basis of `{x : row · x = 0 for every row}`, one vector per non-pivot
/// coordinate, each scaled to coprime integers.
pub fn kernel_basis(rows: &[QVec], dim: usize) -> Vec<QVec> {
    let ech = echelon(rows, dim);
    let pivot_set: Vec<bool> = {
        let mut v = vec![false; dim];
        for &p in &ech.pivots {
            v[p] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..dim {
        if pivot_set[free] {
            continue;
        }
        let mut v = vec![Rat::zero(); dim];
        v[free] = Rat::from_integer(BigInt::from(1));
        for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
            if !row[free].is_zero() {
                v[p] = -row[free].clone();
            }
        }
        basis.push(crate::rational::canonical_form(&v));
    }
    basis
}

/// Solves `sum_j x_j columns[j] = rhs` exactly; `None` when inconsistent.
pub fn solve_columns(columns: &[QVec], rhs: &[Rat], dim: usize) -> Option<QVec> {
    // Augmented elimination over the column matrix.
    let k = columns.len();
    let mut aug: Vec<QVec> = (0..dim)
        .map(|r| {
            let mut row: QVec = columns.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let ech = echelon(&aug, k + 1);
    // Inconsistent iff some echelon row pivots in the rhs column.
    if ech.pivots.iter().any(|&p| p == k) {
        return None;
    }
    let mut x = vec![Rat::zero(); k];
    for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
        x[p] = row[k].clone();
    }
    // Free variables stay zero; the particular solution needs verification
    // only in debug builds.
    debug_assert!({
        aug.clear();
        (0..dim).all(|r| {
            let mut acc = Rat::zero();
            for (j, c) in columns.iter().enumerate() {
                acc += &x[j] * &c[r];
            }
            acc == rhs[r]
        })
    });
    Some(x)
}

/// Inverse of a square matrix given by rows; `None` when singular.
pub fn invert(rows: &[QVec]) -> Option<Vec<QVec>> {
    let n = rows.len();
    let aug: Vec<QVec> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            debug_assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rat::from_integer(BigInt::from(1))
                } else {
                    Rat::zero()
                }
            }));
            r
        })
        .collect();
    let ech = echelon(&aug, 2 * n);
    if ech.rank() < n || ech.pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(ech.rows.iter().take(n).map(|r| r[n..].to_vec()).collect())
}

/// True iff the two row spans coincide.
pub fn same_span(a: &[QVec], b: &[QVec], dim: usize) -> bool {
    let ea = echelon(a, dim);
    let eb = echelon(b, dim);
    ea.rank() == eb.rank() && a.iter().all(|r| eb.contains(r)) && b.iter().all(|r| ea.contains(r))
}

/// Rank of a set of integer rows by fraction-free (Bareiss) elimination:
/// entries stay integers, every division is exact, and intermediate growth
/// is bounded by minors of the input.
pub fn rank_int(rows: &[Vec<BigInt>], dim: usize) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .map(|r| r.to_vec())
        .collect();
    if m.is_empty() {
        return 0;
    }
    let mut prev = BigInt::from(1);
    let mut rank = 0usize;
    for col in 0..dim {
        let Some(pivot_row) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let pivot = m[rank][col].clone();
        for r in rank + 1..m.len() {
            for c in col + 1..dim {
                let num = &pivot * &m[r][c] - &m[r][col] * &m[rank][c];
                m[r][c] = num / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
        if rank == m.len() || rank == dim {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint};

    #[test]
    fn rank_and_kernel() {
        let rows = vec![
            vec![rint(1), rint(2), rint(3)],
            vec![rint(2), rint(4), rint(6)],
            vec![rint(0), rint(1), rint(1)],
        ];
        assert_eq!(rank(&rows, 3), 2);
        let kernel = kernel_basis(&rows, 3);
        assert_eq!(kernel.len(), 1);
        for row in &rows {
            assert!(crate::rational::dot(row, &kernel[0]).is_zero());
        }
    }

    #[test]
    fn kernel_of_empty_system_is_identity() {
        let kernel = kernel_basis(&[], 3);
        assert_eq!(kernel.len(), 3);
        assert_eq!(rank(&kernel, 3), 3);
    }

    #[test]
    fn solve_columns_examples() {
        let cols = vec![vec![rint(1), rint(0)], vec![rint(1), rint(1)]];
        let x = solve_columns(&cols, &[rint(3), rint(2)], 2).unwrap();
        assert_eq!(x, vec![rint(1), rint(2)]);

        // Inconsistent system.
        let cols = vec![vec![rint(1), rint(2)]];
        assert!(solve_columns(&cols, &[rint(1), rint(1)], 2).is_none());

        // Rational arithmetic stays exact.
        let cols = vec![vec![rat(1, 3), rint(0)], vec![rint(0), rat(2, 7)]];
        let x = solve_columns(&cols, &[rint(1), rint(1)], 2).unwrap();
        assert_eq!(x, vec![rint(3), rat(7, 2)]);
    }

    #[test]
    fn reduce_mod_subspace_is_canonical() {
        let space = echelon(&[vec![rint(1), rint(0), rint(-1)]], 3);
        let v = vec![rint(2), rint(1), rint(0)];
        let reduced = space.reduce(&v);
        assert_eq!(reduced, vec![rint(0), rint(1), rint(2)]);
        // Reducing again changes nothing.
        assert_eq!(space.reduce(&reduced), reduced);
        // Vectors differing by the subspace reduce identically.
        let w = vec![rint(5), rint(1), rint(-3)];
        assert_eq!(space.reduce(&w), reduced);
    }

    #[test]
    fn integer_rank_agrees_with_rational_rank() {
        use num_bigint::BigInt;
        let cases: Vec<Vec<Vec<i64>>> = vec![
            vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]],
            vec![vec![0, 0, 0]],
            vec![vec![2, 0], vec![0, 3], vec![2, 3]],
            vec![vec![1, 1, 0, 0], vec![0, 1, 1, 0], vec![0, 0, 1, 1], vec![1, 0, 0, 1]],
        ];
        for rows in cases {
            let dim = rows[0].len();
            let int_rows: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            let rat_rows: Vec<QVec> = rows
                .iter()
                .map(|r| r.iter().map(|&x| rint(x)).collect())
                .collect();
            assert_eq!(rank_int(&int_rows, dim), rank(&rat_rows, dim));
        }
    }

    #[test]
    fn same_span_detects_equality() {
        let a = vec![vec![rint(1), rint(1)], vec![rint(1), rint(-1)]];
        let b = vec![vec![rint(1), rint(0)], vec![rint(0), rint(1)]];
        assert!(same_span(&a, &b, 2));
        let c = vec![vec![rint(1), rint(0)]];
        assert!(!same_span(&a, &c, 2));
    }
}
