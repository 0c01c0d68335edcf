//! Dense primal simplex over exact rationals.

use num::{Signed, Zero};

use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub x: Vec<Q>,
    /// `b - A x` per row.
    pub slack: Vec<Q>,
    pub value: Q,
}

/// Maximizes `c·x` subject to `A x <= b`, `x >= 0`, for `b >= 0`.
///
/// Starts from the all-slack basis and pivots by Bland's rule, so it
/// terminates on degenerate problems. Returns `None` when unbounded.
pub fn maximize(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> Option<LpSolution> {
    let (m, n) = (a.len(), c.len());
    assert!(b.iter().all(|v| !v.is_negative()), "right-hand side must be nonnegative");
    let width = n + m;
    // tableau rows: constraint coefficients over structural + slack columns, then rhs
    let mut t: Vec<Vec<Q>> = (0..m)
        .map(|r| {
            let mut row = a[r].clone();
            row.resize(width, Q::zero());
            row[n + r] = Q::from_integer(1.into());
            row.push(b[r].clone());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..width).collect();
    let mut reduced: Vec<Q> = c.to_vec();
    reduced.resize(width, Q::zero());
    let mut value = Q::zero();

    while let Some(enter) = (0..width).find(|&j| reduced[j].is_positive()) {
        let mut leave: Option<(usize, Q)> = None;
        for (r, row) in t.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &row[width] / &row[enter];
            let better = match &leave {
                None => true,
                Some((lr, lq)) => ratio < *lq || (ratio == *lq && basis[r] < basis[*lr]),
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        let (r, _) = leave?;
        let piv = t[r][enter].clone();
        for v in t[r].iter_mut() {
            *v /= &piv;
        }
        let pivot_row = t[r].clone();
        for (rr, row) in t.iter_mut().enumerate() {
            if rr == r || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        let f = reduced[enter].clone();
        for (v, p) in reduced.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *v -= &f * p;
            }
        }
        value += &f * &pivot_row[width];
        basis[r] = enter;
    }

    let mut full = vec![Q::zero(); width];
    for (r, &j) in basis.iter().enumerate() {
        full[j] = t[r][width].clone();
    }
    let slack = full.split_off(n);
    Some(LpSolution { x: full, slack, value })
}
