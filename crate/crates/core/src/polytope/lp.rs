//! Exact convex-combination feasibility by phase-one simplex.

use num_traits::{One, Signed, Zero};

use super::{RationalPoint, VPolytope};
use crate::rational::Rational;
use crate::{Error, Result};

/// True iff `p` is a convex combination of the vertices of `poly`.
///
/// Solves `sum_i l_i v_i = p`, `sum_i l_i = 1`, `l >= 0` by minimizing the
/// sum of artificial variables with Bland's rule, in exact arithmetic.
pub fn membership_by_lp(poly: &VPolytope, p: &RationalPoint) -> Result<bool> {
    if p.dim() != poly.dimension() {
        return Err(Error::DimensionMismatch {
            expected: poly.dimension(),
            found: p.dim(),
        });
    }
    let verts = poly.vertices();
    if verts.is_empty() {
        return Ok(false);
    }
    let n = poly.dimension();
    let nv = verts.len();
    let m = n + 1;
    let width = nv + m + 1;
    let rhs = width - 1;

    let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for r in 0..m {
        let mut row = vec![Rational::zero(); width];
        for (j, v) in verts.iter().enumerate() {
            row[j] = if r < n { v.coords()[r].clone() } else { Rational::one() };
        }
        row[nv + r] = Rational::one();
        row[rhs] = if r < n { p.coords()[r].clone() } else { Rational::one() };
        if row[rhs].is_negative() {
            for (j, x) in row.iter_mut().enumerate() {
                if j != nv + r {
                    *x = -&*x;
                }
            }
        }
        tab.push(row);
    }
    let mut basis: Vec<usize> = (nv..nv + m).collect();

    // Objective: sum of artificials = cost[rhs] + sum_j cost[j] * x_j.
    let mut cost = vec![Rational::zero(); width];
    for row in &tab {
        for j in 0..nv {
            cost[j] -= &row[j];
        }
        cost[rhs] += &row[rhs];
    }

    while let Some(enter) = (0..nv + m).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for (r, row) in tab.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &row[rhs] / &row[enter];
            let better = match &leave {
                None => true,
                Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        // The phase-one objective is bounded below by zero.
        let (lr, _) = leave.expect("phase-one objective is bounded");
        let piv = tab[lr][enter].clone();
        for x in tab[lr].iter_mut() {
            *x /= &piv;
        }
        let pivot_row = tab[lr].clone();
        for (r, row) in tab.iter_mut().enumerate() {
            if r == lr || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        let f = cost[enter].clone();
        for (j, (x, y)) in cost.iter_mut().zip(&pivot_row).enumerate() {
            if y.is_zero() {
                continue;
            }
            if j == rhs {
                *x += &f * y;
            } else {
                *x -= &f * y;
            }
        }
        basis[lr] = enter;
    }
    Ok(cost[rhs].is_zero())
}
