//! Double description method for the extreme rays of a pointed cone
//! `{y : g_i . y >= 0}` given by integer constraint rows.
//!
//! Rays carry the set of processed constraints they are tight on; two rays
//! are adjacent when no third ray is tight on every constraint they share.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::rational::{self, Rational};

/// Zero sets are `u128` bitmasks over constraint indices.
pub(crate) const MAX_CONSTRAINTS: usize = 128;

struct Ray {
    coords: Vec<BigInt>,
    zeros: u128,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Extreme rays of `{y in Q^dim : rows[i] . y >= 0 for all i}`.
///
/// The rows must have rank `dim`, so that the cone is pointed.
pub(crate) fn extreme_rays(rows: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    assert!(rows.len() <= MAX_CONSTRAINTS);
    let to_q = |r: &Vec<BigInt>| r.iter().cloned().map(Rational::from_integer).collect::<Vec<_>>();

    // Greedy initial basis of `dim` independent rows.
    let mut chosen: Vec<usize> = Vec::with_capacity(dim);
    let mut echelon: Vec<Vec<Rational>> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut trial = echelon.clone();
        trial.push(to_q(row));
        if rational::rref(&mut trial).len() > echelon.len() {
            echelon = trial;
            chosen.push(i);
            if chosen.len() == dim {
                break;
            }
        }
    }
    assert_eq!(chosen.len(), dim, "constraint rows must have full rank");

    let basis: Vec<Vec<Rational>> = chosen.iter().map(|&i| to_q(&rows[i])).collect();
    let inv = rational::inverse(&basis).expect("independent rows");
    let mut processed: u128 = chosen.iter().fold(0, |m, &i| m | (1u128 << i));
    let mut rays: Vec<Ray> = (0..dim)
        .map(|k| {
            let col: Vec<Rational> = inv.iter().map(|r| r[k].clone()).collect();
            let coords = rational::primitive_integer_vector(&col);
            let zeros = chosen
                .iter()
                .filter(|&&i| dot(&rows[i], &coords).is_zero())
                .fold(0u128, |m, &i| m | (1u128 << i));
            Ray { coords, zeros }
        })
        .collect();

    for (c, row) in rows.iter().enumerate() {
        if processed & (1u128 << c) != 0 {
            continue;
        }
        let bit = 1u128 << c;
        let values: Vec<BigInt> = rays.iter().map(|r| dot(row, &r.coords)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();

        let mut created = Vec::new();
        if !neg.is_empty() {
            for &p in &pos {
                for &n in &neg {
                    let common = rays[p].zeros & rays[n].zeros;
                    if (common.count_ones() as usize) + 2 < dim {
                        continue;
                    }
                    let blocked = rays.iter().enumerate().any(|(k, r)| {
                        k != p && k != n && r.zeros & common == common
                    });
                    if blocked {
                        continue;
                    }
                    let (vp, vn) = (&values[p], &values[n]);
                    let mut coords: Vec<BigInt> = rays[n]
                        .coords
                        .iter()
                        .zip(&rays[p].coords)
                        .map(|(yn, yp)| vp * yn - vn * yp)
                        .collect();
                    rational::reduce_integer_vector(&mut coords);
                    created.push(Ray {
                        coords,
                        zeros: common | bit,
                    });
                }
            }
        }

        let old = std::mem::take(&mut rays);
        for (ray, v) in old.into_iter().zip(&values) {
            if v.is_positive() {
                rays.push(ray);
            } else if v.is_zero() {
                rays.push(Ray {
                    zeros: ray.zeros | bit,
                    ..ray
                });
            }
        }
        rays.extend(created);
        processed |= bit;
    }

    rays.into_iter().map(|r| r.coords).collect()
}
