//! Dense exact-rational primal simplex for `max c·x` s.t. `A x ≤ b`, `x ≥ 0`
//! with `b ≥ 0`, so the slack basis is feasible from the start. Bland's rule
//! (lowest index enters, lowest basic index leaves on ties) prevents cycling.

use num_traits::{Signed, Zero};

use crate::number::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational, pivots: usize },
    Unbounded,
}

/// Solves the packing-type LP. Panics if a right-hand side is negative or
/// the row lengths disagree with `objective`.
pub fn maximize(objective: &[Rational], rows: &[Vec<Rational>], rhs: &[Rational]) -> LpOutcome {
    let vars = objective.len();
    let m = rows.len();
    assert_eq!(rhs.len(), m, "one right-hand side per row");
    assert!(rhs.iter().all(|b| !b.is_negative()), "right-hand sides must be nonnegative");
    let width = vars + m;

    // Row i: [A_i | e_i | b_i]; basis[i] is the basic column of row i.
    let mut tableau: Vec<Vec<Rational>> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), vars, "row {i} has the wrong length");
            let mut line = row.clone();
            line.extend((0..m).map(|j| if i == j { Rational::from_integer(1.into()) } else { Rational::zero() }));
            line.push(rhs[i].clone());
            line
        })
        .collect();
    let mut basis: Vec<usize> = (vars..width).collect();
    // Reduced costs c_j − z_j and the current objective value.
    let mut reduced: Vec<Rational> = objective.iter().cloned().chain((0..m).map(|_| Rational::zero())).collect();
    let mut value = Rational::zero();
    let mut pivots = 0;

    while let Some(enter) = (0..width).find(|&j| reduced[j].is_positive()) {
        let mut leave: Option<(usize, Rational)> = None;
        for (i, line) in tableau.iter().enumerate() {
            if line[enter].is_positive() {
                let ratio = &line[width] / &line[enter];
                let better = match &leave {
                    None => true,
                    Some((r, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*r]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = leave else { return LpOutcome::Unbounded };

        let pivot = tableau[row][enter].clone();
        for entry in tableau[row].iter_mut() {
            *entry /= &pivot;
        }
        let pivot_line = tableau[row].clone();
        for (i, line) in tableau.iter_mut().enumerate() {
            if i != row && !line[enter].is_zero() {
                let factor = line[enter].clone();
                for (entry, p) in line.iter_mut().zip(&pivot_line) {
                    if !p.is_zero() {
                        *entry -= &factor * p;
                    }
                }
            }
        }
        let factor = reduced[enter].clone();
        for (entry, p) in reduced.iter_mut().zip(&pivot_line) {
            if !p.is_zero() {
                *entry -= &factor * p;
            }
        }
        value += &factor * &pivot_line[width];
        basis[row] = enter;
        pivots += 1;
    }

    let mut x = vec![Rational::zero(); vars];
    for (i, &column) in basis.iter().enumerate() {
        if column < vars {
            x[column] = tableau[i][width].clone();
        }
    }
    LpOutcome::Optimal { x, value, pivots }
}
