//! Independent oracles shared by the integration tests. Nothing here calls
//! the facet enumerator or the LP solver under test.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Kernel of an exact matrix, one basis vector per free column.
pub fn kernel(mut m: Vec<Vec<Q>>, cols: usize) -> Vec<Vec<Q>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &f * &m[r][j];
                    m[i][j] = &m[i][j] - t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); cols];
            v[free] = Q::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][free].clone();
            }
            v
        })
        .collect()
}

/// Integer vector with gcd 1 along the same ray.
pub fn primitive(v: &[Q]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter().map(|x| x / &g).collect()
}

/// Brute-force facets of a full-dimensional polytope: every hyperplane
/// through `n` vertices that leaves all vertices on one side. Returned as
/// primitive integer `(a_1..a_n, a)` with `a . p + a >= 0` inside.
pub fn brute_force_facets(vertices: &[Vec<Q>]) -> BTreeSet<Vec<BigInt>> {
    let n = vertices[0].len();
    let mut out = BTreeSet::new();
    for subset in combinations(vertices.len(), n) {
        let rows: Vec<Vec<Q>> = subset
            .iter()
            .map(|&i| vertices[i].iter().cloned().chain([Q::one()]).collect())
            .collect();
        let ker = kernel(rows, n + 1);
        if ker.len() != 1 {
            continue;
        }
        let h = &ker[0];
        if h[..n].iter().all(Zero::is_zero) {
            continue;
        }
        let vals: Vec<Q> = vertices
            .iter()
            .map(|v| v.iter().zip(h).map(|(a, b)| a * b).sum::<Q>() + &h[n])
            .collect();
        let pos = vals.iter().any(Signed::is_positive);
        let neg = vals.iter().any(Signed::is_negative);
        if pos && neg {
            continue;
        }
        let sign = if neg { -q(1) } else { q(1) };
        let oriented: Vec<Q> = h.iter().map(|x| x * &sign).collect();
        out.insert(primitive(&oriented));
    }
    out
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Rank of the differences `v_i - v_0`.
pub fn affine_rank(points: &[Vec<Q>]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let cols = points[0].len();
    let rows: Vec<Vec<Q>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect())
        .collect();
    if rows.is_empty() {
        return 0;
    }
    cols - kernel(rows, cols).len()
}

/// Independent rendering of the truth-table rows for a conjunction system.
pub fn truth_table(n: usize, keep: impl Fn(&[u8]) -> bool) -> Vec<Vec<u8>> {
    (0..1u32 << n)
        .map(|m| (0..n).map(|i| ((m >> (n - 1 - i)) & 1) as u8).collect::<Vec<u8>>())
        .filter(|r| keep(r))
        .collect()
}
