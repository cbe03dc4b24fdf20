//! Exact feasibility solver for `A x = b, x >= 0` via phase-1 simplex with
//! Bland's rule (finite termination, no cycling). Infeasible systems yield a
//! Farkas vector `y` with `y . col <= 0` for every column and `y . b > 0`.

use num_traits::{One, Signed, Zero};

use crate::rational::{QVec, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    /// Componentwise nonnegative solution, one entry per input column.
    Feasible(QVec),
    /// Farkas certificate of infeasibility.
    Infeasible(QVec),
}

/// Decides feasibility of `sum_j x_j * columns[j] = rhs` with `x >= 0`.
pub fn solve_nonneg(columns: &[QVec], rhs: &[Rat]) -> Feasibility {
    let m = rhs.len();
    let k = columns.len();
    debug_assert!(columns.iter().all(|c| c.len() == m));

    // Sign-normalize rows so the right-hand side is nonnegative and the
    // artificial basis is the identity.
    let signs: Vec<bool> = rhs.iter().map(|b| !b.is_negative()).collect();
    let flip = |i: usize, x: &Rat| if signs[i] { x.clone() } else { -x.clone() };

    // Tableau: m rows, k structural + m artificial columns, plus rhs.
    let mut t: Vec<QVec> = (0..m)
        .map(|i| {
            let mut row: QVec = (0..k).map(|j| flip(i, &columns[j][i])).collect();
            row.extend((0..m).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            row.push(flip(i, &rhs[i]));
            row
        })
        .collect();
    let width = k + m + 1;
    let mut basis: Vec<usize> = (k..k + m).collect();

    // Objective: minimize the sum of artificials. Reduced-cost row starts as
    // c - sum of basic rows (artificials are basic with cost 1).
    let mut reduced: QVec = vec![Rat::zero(); width];
    for j in 0..width {
        let mut acc = if (k..k + m).contains(&j) { Rat::one() } else { Rat::zero() };
        for row in t.iter() {
            acc -= &row[j];
        }
        reduced[j] = acc;
    }
    // reduced[width-1] now holds -(objective value).

    loop {
        // Bland: entering column = lowest index with negative reduced cost.
        let Some(enter) = (0..k + m).find(|&j| reduced[j].is_negative()) else {
            break;
        };
        // Ratio test; ties resolved by the smallest basic-variable index.
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for (i, row) in t.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[width - 1] / &row[enter];
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let leave = leave.expect("phase-1 objective is bounded below by zero");

        // Pivot.
        let inv = t[leave][enter].clone().recip();
        for x in t[leave].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = t[leave].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != leave && !row[enter].is_zero() {
                let c = row[enter].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *x -= &c * p;
                    }
                }
            }
        }
        if !reduced[enter].is_zero() {
            let c = reduced[enter].clone();
            for (x, p) in reduced.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &c * p;
                }
            }
        }
        basis[leave] = enter;
    }

    let objective = -reduced[width - 1].clone();
    debug_assert!(!objective.is_negative());

    if objective.is_positive() {
        // Simplex multipliers off the artificial columns: the reduced cost of
        // artificial i at optimum is 1 - y'_i.
        let y: QVec = (0..m)
            .map(|i| {
                let yi = Rat::one() - &reduced[k + i];
                if signs[i] {
                    yi
                } else {
                    -yi
                }
            })
            .collect();
        debug_assert!(columns.iter().all(|c| !crate::rational::dot(&y, c).is_positive()));
        debug_assert!(crate::rational::dot(&y, rhs).is_positive());
        return Feasibility::Infeasible(y);
    }

    let mut x = vec![Rat::zero(); k];
    for (i, &b) in basis.iter().enumerate() {
        if b < k {
            x[b] = t[i][width - 1].clone();
        }
    }
    debug_assert!((0..m).all(|i| {
        let mut acc = Rat::zero();
        for (j, c) in columns.iter().enumerate() {
            acc += &x[j] * &c[i];
        }
        acc == rhs[i]
    }));
    Feasibility::Feasible(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{dot, rat, rint};

    #[test]
    fn quadrant_targets() {
        let cols = vec![vec![rint(1), rint(0)], vec![rint(0), rint(1)]];
        match solve_nonneg(&cols, &[rint(2), rint(3)]) {
            Feasibility::Feasible(x) => assert_eq!(x, vec![rint(2), rint(3)]),
            other => panic!("expected feasible, got {other:?}"),
        }
        match solve_nonneg(&cols, &[rint(-1), rint(0)]) {
            Feasibility::Infeasible(y) => {
                for c in &cols {
                    assert!(!dot(&y, c).is_positive());
                }
                assert!(dot(&y, &[rint(-1), rint(0)]).is_positive());
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn negative_rhs_rows_are_handled() {
        // x1*(1,-1) + x2*(0,-1) = (2,-3) has x = (2,1).
        let cols = vec![vec![rint(1), rint(-1)], vec![rint(0), rint(-1)]];
        match solve_nonneg(&cols, &[rint(2), rint(-3)]) {
            Feasibility::Feasible(x) => assert_eq!(x, vec![rint(2), rint(1)]),
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn rational_data_stays_exact() {
        let cols = vec![vec![rat(1, 3)], vec![rat(1, 7)]];
        match solve_nonneg(&cols, &[rat(2, 21)]) {
            Feasibility::Feasible(x) => {
                assert_eq!(&x[0] * rat(1, 3) + &x[1] * rat(1, 7), rat(2, 21));
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn no_columns() {
        assert_eq!(solve_nonneg(&[], &[rint(0)]), Feasibility::Feasible(vec![]));
        assert!(matches!(solve_nonneg(&[], &[rint(1)]), Feasibility::Infeasible(_)));
    }

    #[test]
    fn degenerate_system_terminates() {
        // Redundant equations plus a zero column exercise Bland tie-breaking.
        let cols = vec![
            vec![rint(0), rint(0)],
            vec![rint(1), rint(2)],
            vec![rint(2), rint(4)],
        ];
        match solve_nonneg(&cols, &[rint(1), rint(2)]) {
            Feasibility::Feasible(x) => {
                assert_eq!(&x[1] + &x[2] * rint(2), rint(1));
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }
}
