//! Balanced random variables, Pearson correlations and the elliptope.
//!
//! For three balanced variables the pairwise correlations satisfy
//!
//! ```text
//! 1 - rxy^2 - rxz^2 - ryz^2 + 2 rxy rxz ryz >= 0,   |r| <= 1,
//! ```
//!
//! which is the determinant condition for the unit-diagonal correlation
//! matrix to be positive semidefinite. The solution set is the elliptope.
//! [`psd_check`] tests the same set through eigenvalues and [`gram_realize`]
//! produces three unit vectors whose dot products are a given triple.
//!
//! Supports are finite; continuous balanced variables are not modelled.

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, EXACT_TOL, FLOAT_TOL};

/// A finite-support random variable with `Pr(x) = Pr(-x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BalancedVariableSpec {
    support: Vec<f64>,
    probabilities: Vec<f64>,
}

impl BalancedVariableSpec {
    /// Repeated support values are merged. Zero-probability values are kept.
    pub fn new(support: Vec<f64>, probabilities: Vec<f64>) -> Result<Self> {
        if support.len() != probabilities.len() {
            return Err(Error::LengthMismatch {
                expected: support.len(),
                found: probabilities.len(),
            });
        }
        if support.is_empty() {
            return Err(Error::EmptyInput("variable needs a nonempty support"));
        }
        if support.iter().chain(&probabilities).any(|x| !x.is_finite())
            || probabilities.iter().any(|&p| p < 0.0)
        {
            return Err(Error::InvalidArgument(
                "support and probabilities must be finite, probabilities nonnegative".into(),
            ));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > EXACT_TOL {
            return Err(Error::InvalidArgument(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for (&x, &p) in support.iter().zip(&probabilities) {
            match merged.iter_mut().find(|(y, _)| (x - *y).abs() <= EXACT_TOL) {
                Some(slot) => slot.1 += p,
                None => merged.push((x, p)),
            }
        }
        merged.sort_by(|a, b| a.0.total_cmp(&b.0));
        for &(x, p) in &merged {
            let mirror = merged.iter().find(|(y, _)| (x + y).abs() <= EXACT_TOL);
            match mirror {
                Some(&(_, q)) if (p - q).abs() <= EXACT_TOL => {}
                _ => return Err(Error::UnbalancedMarginal(0)),
            }
        }
        let (support, probabilities) = merged.into_iter().unzip();
        Ok(BalancedVariableSpec {
            support,
            probabilities,
        })
    }

    /// Uniform distribution over a support closed under negation.
    pub fn uniform(support: Vec<f64>) -> Result<Self> {
        let p = 1.0 / support.len() as f64;
        let n = support.len();
        Self::new(support, vec![p; n])
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Zero up to rounding, by balance.
    pub fn mean(&self) -> f64 {
        self.support
            .iter()
            .zip(&self.probabilities)
            .map(|(x, p)| x * p)
            .sum()
    }

    pub fn variance(&self) -> f64 {
        self.support
            .iter()
            .zip(&self.probabilities)
            .map(|(x, p)| x * x * p)
            .sum()
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }
}

/// Joint distribution of two or three balanced variables.
///
/// `table` is row-major over the product of the supports, first variable
/// most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    supports: Vec<Vec<f64>>,
    marginals: Vec<Vec<f64>>,
    table: Vec<f64>,
}

impl JointDistribution {
    /// Builds the joint and derives each marginal, which must be balanced.
    pub fn new(supports: Vec<Vec<f64>>, table: Vec<f64>) -> Result<Self> {
        let shape = check_table(&supports, &table)?;
        let marginals: Vec<Vec<f64>> = (0..supports.len())
            .map(|i| marginal(&shape, &table, i))
            .collect();
        for (i, (support, m)) in supports.iter().zip(&marginals).enumerate() {
            BalancedVariableSpec::new(support.clone(), m.clone()).map_err(|e| match e {
                Error::UnbalancedMarginal(_) => Error::UnbalancedMarginal(i),
                other => other,
            })?;
        }
        Ok(JointDistribution {
            supports,
            marginals,
            table,
        })
    }

    /// Builds the joint and checks its marginals against declared specs.
    pub fn with_specs(variables: Vec<BalancedVariableSpec>, table: Vec<f64>) -> Result<Self> {
        let supports: Vec<Vec<f64>> = variables.iter().map(|v| v.support.clone()).collect();
        let shape = check_table(&supports, &table)?;
        let marginals: Vec<Vec<f64>> = (0..supports.len())
            .map(|i| marginal(&shape, &table, i))
            .collect();
        for (i, (v, m)) in variables.iter().zip(&marginals).enumerate() {
            if m
                .iter()
                .zip(&v.probabilities)
                .any(|(a, b)| (a - b).abs() > EXACT_TOL)
            {
                return Err(Error::UnbalancedMarginal(i));
            }
        }
        Ok(JointDistribution {
            supports,
            marginals,
            table,
        })
    }

    pub fn num_variables(&self) -> usize {
        self.supports.len()
    }

    /// Marginal of variable `i` as a balanced spec.
    pub fn marginal(&self, i: usize) -> BalancedVariableSpec {
        BalancedVariableSpec::new(self.supports[i].clone(), self.marginals[i].clone())
            .expect("validated at construction")
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    fn variance(&self, i: usize) -> f64 {
        self.supports[i]
            .iter()
            .zip(&self.marginals[i])
            .map(|(x, p)| x * x * p)
            .sum()
    }

    /// `E[Xi Xj]`, which is the covariance since the means vanish.
    pub fn product_moment(&self, i: usize, j: usize) -> f64 {
        let shape: Vec<usize> = self.supports.iter().map(Vec::len).collect();
        let mut idx = vec![0usize; shape.len()];
        let mut acc = 0.0;
        for &p in &self.table {
            if p != 0.0 {
                acc += p * self.supports[i][idx[i]] * self.supports[j][idx[j]];
            }
            advance(&mut idx, &shape);
        }
        acc
    }
}

fn check_table(supports: &[Vec<f64>], table: &[f64]) -> Result<Vec<usize>> {
    if !(2..=3).contains(&supports.len()) {
        return Err(Error::InvalidArgument(format!(
            "joint distribution needs 2 or 3 variables, got {}",
            supports.len()
        )));
    }
    let shape: Vec<usize> = supports.iter().map(Vec::len).collect();
    let cells: usize = shape.iter().product();
    if table.len() != cells {
        return Err(Error::LengthMismatch {
            expected: cells,
            found: table.len(),
        });
    }
    if table.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::InvalidArgument("table entries must be nonnegative".into()));
    }
    let total: f64 = table.iter().sum();
    if (total - 1.0).abs() > EXACT_TOL {
        return Err(Error::InvalidArgument(format!("table sums to {total}, not 1")));
    }
    Ok(shape)
}

fn advance(idx: &mut [usize], shape: &[usize]) {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < shape[k] {
            return;
        }
        idx[k] = 0;
    }
}

fn marginal(shape: &[usize], table: &[f64], var: usize) -> Vec<f64> {
    let mut m = vec![0.0; shape[var]];
    let mut idx = vec![0usize; shape.len()];
    for &p in table {
        m[idx[var]] += p;
        advance(&mut idx, shape);
    }
    m
}

/// Pearson correlation of a two-variable joint distribution.
pub fn pearson(joint: &JointDistribution) -> Result<f64> {
    pearson_pair(joint, 0, 1)
}

/// Pearson correlation between variables `i` and `j` of `joint`.
pub fn pearson_pair(joint: &JointDistribution, i: usize, j: usize) -> Result<f64> {
    let n = joint.num_variables();
    if i >= n || j >= n {
        return Err(Error::InvalidArgument(format!(
            "variable index out of range for {n} variables"
        )));
    }
    let si = joint.variance(i).sqrt();
    let sj = joint.variance(j).sqrt();
    if si == 0.0 {
        return Err(Error::ZeroVariance(i));
    }
    if sj == 0.0 {
        return Err(Error::ZeroVariance(j));
    }
    Ok(joint.product_moment(i, j) / (si * sj))
}

/// Pairwise correlations `(rho_xy, rho_xz, rho_yz)`, each in `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct CorrelationTriple {
    rho_xy: f64,
    rho_xz: f64,
    rho_yz: f64,
}

impl CorrelationTriple {
    pub fn new(rho_xy: f64, rho_xz: f64, rho_yz: f64) -> Result<Self> {
        for r in [rho_xy, rho_xz, rho_yz] {
            if !r.is_finite() || r.abs() > 1.0 + EXACT_TOL {
                return Err(Error::InvalidArgument(format!(
                    "correlation {r} outside [-1, 1]"
                )));
            }
        }
        Ok(CorrelationTriple {
            rho_xy,
            rho_xz,
            rho_yz,
        })
    }

    pub fn rho_xy(&self) -> f64 {
        self.rho_xy
    }

    pub fn rho_xz(&self) -> f64 {
        self.rho_xz
    }

    pub fn rho_yz(&self) -> f64 {
        self.rho_yz
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.rho_xy, self.rho_xz, self.rho_yz]
    }

    /// Unit-diagonal symmetric matrix with the triple off the diagonal.
    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::new(
            1.0, self.rho_xy, self.rho_xz,
            self.rho_xy, 1.0, self.rho_yz,
            self.rho_xz, self.rho_yz, 1.0,
        )
    }

    pub fn max_abs_diff(&self, other: &CorrelationTriple) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl TryFrom<[f64; 3]> for CorrelationTriple {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        CorrelationTriple::new(v[0], v[1], v[2])
    }
}

impl From<CorrelationTriple> for [f64; 3] {
    fn from(t: CorrelationTriple) -> Self {
        t.as_array()
    }
}

/// Left-hand side `1 - rxy^2 - rxz^2 - ryz^2 + 2 rxy rxz ryz`.
pub fn elliptope_value(t: &CorrelationTriple) -> f64 {
    let (a, b, c) = (t.rho_xy, t.rho_xz, t.rho_yz);
    1.0 - a * a - b * b - c * c + 2.0 * a * b * c
}

/// Both the determinant inequality and `|rho| <= 1` on every component.
pub fn elliptope_contains(t: &CorrelationTriple, tol: f64) -> bool {
    elliptope_value(t) >= -tol && t.as_array().iter().all(|r| r.abs() <= 1.0 + tol)
}

/// Classification of a triple relative to the elliptope boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Placement {
    Inside,
    Boundary,
    Outside,
}

pub fn classify(t: &CorrelationTriple, tol: f64) -> Placement {
    let v = elliptope_value(t);
    if !elliptope_contains(t, tol) {
        Placement::Outside
    } else if v.abs() <= tol || t.as_array().iter().any(|r| (r.abs() - 1.0).abs() <= tol) {
        Placement::Boundary
    } else {
        Placement::Inside
    }
}

/// Eigenvalues of the correlation matrix in ascending order.
pub fn correlation_eigenvalues(t: &CorrelationTriple) -> [f64; 3] {
    let eig = SymmetricEigen::new(t.matrix());
    let mut v = [eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2]];
    v.sort_by(f64::total_cmp);
    v
}

/// Positive semidefiniteness of the correlation matrix, by eigenvalues.
pub fn psd_check(t: &CorrelationTriple, tol: f64) -> bool {
    correlation_eigenvalues(t)[0] >= -tol
}

/// Three unit vectors whose pairwise dot products reproduce `t`.
///
/// Factorizes the correlation matrix through its eigendecomposition with
/// negative eigenvalues clamped to zero, which also covers singular
/// boundary matrices, then normalizes the rows.
pub fn gram_realize(t: &CorrelationTriple) -> Result<[Vector3<f64>; 3]> {
    if !elliptope_contains(t, FLOAT_TOL) {
        return Err(Error::NotInElliptope(t.rho_xy, t.rho_xz, t.rho_yz));
    }
    let eig = SymmetricEigen::new(t.matrix());
    let roots = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    let factor = eig.eigenvectors * Matrix3::from_diagonal(&roots);
    let mut out = [Vector3::zeros(); 3];
    for (i, v) in out.iter_mut().enumerate() {
        let row = factor.row(i).transpose();
        let norm = row.norm();
        *v = if norm > 0.0 { row / norm } else { Vector3::x() };
    }
    Ok(out)
}

/// Uniform points in the elliptope by rejection from `[-1, 1]^3`.
pub fn sample_elliptope(count: usize, seed: u64) -> Vec<CorrelationTriple> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let t = CorrelationTriple {
            rho_xy: rng.random_range(-1.0..=1.0),
            rho_xz: rng.random_range(-1.0..=1.0),
            rho_yz: rng.random_range(-1.0..=1.0),
        };
        if elliptope_value(&t) >= 0.0 {
            out.push(t);
        }
    }
    out
}

/// Boundary points on a `grid x grid` lattice over `(rho_xy, rho_xz)`:
/// both roots `rho_yz = a b +- sqrt((1 - a^2)(1 - b^2))` of the zero set.
pub fn elliptope_boundary(grid: usize) -> Vec<CorrelationTriple> {
    let mut out = Vec::new();
    if grid < 2 {
        return out;
    }
    let step = 2.0 / (grid - 1) as f64;
    for i in 0..grid {
        let a = -1.0 + step * i as f64;
        for j in 0..grid {
            let b = -1.0 + step * j as f64;
            let r = ((1.0 - a * a) * (1.0 - b * b)).max(0.0).sqrt();
            let mid = a * b;
            for c in [mid - r, mid + r] {
                out.push(CorrelationTriple {
                    rho_xy: a,
                    rho_xz: b,
                    rho_yz: c.clamp(-1.0, 1.0),
                });
                if r == 0.0 {
                    break;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(a: f64, b: f64, c: f64) -> CorrelationTriple {
        CorrelationTriple::new(a, b, c).unwrap()
    }

    fn pm1() -> Vec<f64> {
        vec![-1.0, 1.0]
    }

    #[test]
    fn pearson_examples() {
        let same = JointDistribution::new(vec![pm1(), pm1()], vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert_eq!(pearson(&same).unwrap(), 1.0);
        let opp = JointDistribution::new(vec![pm1(), pm1()], vec![0.0, 0.5, 0.5, 0.0]).unwrap();
        assert_eq!(pearson(&opp).unwrap(), -1.0);
        let ind = JointDistribution::new(vec![pm1(), pm1()], vec![0.25; 4]).unwrap();
        assert_eq!(pearson(&ind).unwrap(), 0.0);
    }

    #[test]
    fn pearson_errors() {
        let zero = JointDistribution::new(vec![vec![0.0], pm1()], vec![0.5, 0.5]).unwrap();
        assert_eq!(pearson(&zero), Err(Error::ZeroVariance(0)));
        let skew = JointDistribution::new(vec![pm1(), pm1()], vec![0.5, 0.25, 0.0, 0.25]);
        assert_eq!(skew.unwrap_err(), Error::UnbalancedMarginal(0));
        let y_skew = JointDistribution::new(vec![pm1(), pm1()], vec![0.5, 0.0, 0.25, 0.25]);
        assert_eq!(y_skew.unwrap_err(), Error::UnbalancedMarginal(1));
        assert!(JointDistribution::new(vec![pm1()], vec![0.5, 0.5]).is_err());
    }

    #[test]
    fn declared_specs_must_match() {
        let x = BalancedVariableSpec::uniform(pm1()).unwrap();
        let y = BalancedVariableSpec::new(vec![-2.0, 0.0, 2.0], vec![0.25, 0.5, 0.25]).unwrap();
        let table = vec![0.25, 0.25, 0.0, 0.0, 0.25, 0.25];
        let j = JointDistribution::with_specs(vec![x.clone(), y.clone()], table).unwrap();
        assert!((pearson(&j).unwrap() - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        let bad = vec![0.5, 0.0, 0.0, 0.0, 0.0, 0.5];
        assert_eq!(
            JointDistribution::with_specs(vec![x, y], bad).unwrap_err(),
            Error::UnbalancedMarginal(1)
        );
    }

    #[test]
    fn balanced_spec_validation() {
        assert!(BalancedVariableSpec::new(vec![1.0, 2.0], vec![0.5, 0.5]).is_err());
        assert!(BalancedVariableSpec::new(vec![-1.0, 1.0], vec![0.3, 0.7]).is_err());
        assert!(BalancedVariableSpec::new(vec![-1.0, 1.0], vec![0.5]).is_err());
        let merged = BalancedVariableSpec::new(vec![1.0, -1.0, 1.0], vec![0.25, 0.5, 0.25]).unwrap();
        assert_eq!(merged.support(), &[-1.0, 1.0]);
        assert_eq!(merged.mean(), 0.0);
        assert_eq!(merged.variance(), 1.0);
    }

    #[test]
    fn elliptope_examples() {
        assert_eq!(elliptope_value(&t(0.0, 0.0, 0.0)), 1.0);
        assert_eq!(elliptope_value(&t(1.0, 1.0, 1.0)), 0.0);
        assert_eq!(elliptope_value(&t(1.0, 1.0, -1.0)), -4.0);
        assert!((elliptope_value(&t(0.9, 0.9, 0.9)) - 0.028).abs() < 1e-12);

        assert!(elliptope_contains(&t(1.0, 1.0, 1.0), 1e-12));
        assert!(elliptope_contains(&t(0.9, 0.9, 0.9), 1e-12));
        assert!(!elliptope_contains(&t(1.0, 1.0, -1.0), 1e-12));
        assert!(CorrelationTriple::new(1.5, 0.0, 0.0).is_err());
    }

    #[test]
    fn psd_examples() {
        assert!(psd_check(&t(0.0, 0.0, 0.0), 1e-12));
        let ev = correlation_eigenvalues(&t(1.0, 1.0, 1.0));
        assert!(ev[0].abs() < 1e-12 && ev[1].abs() < 1e-12 && (ev[2] - 3.0).abs() < 1e-12);
        assert!(psd_check(&t(1.0, 1.0, 1.0), 1e-12));
        assert!(!psd_check(&t(1.0, 1.0, -1.0), 1e-12));
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&t(0.0, 0.0, 0.0), 1e-12), Placement::Inside);
        assert_eq!(classify(&t(1.0, 1.0, 1.0), 1e-12), Placement::Boundary);
        assert_eq!(classify(&t(-0.5, -0.5, -0.5), 1e-12), Placement::Boundary);
        assert_eq!(classify(&t(1.0, 1.0, -1.0), 1e-12), Placement::Outside);
    }

    fn assert_dots(v: &[Vector3<f64>; 3], target: &CorrelationTriple) {
        for e in v {
            assert!((e.norm() - 1.0).abs() < 1e-12);
        }
        let got = t(v[0].dot(&v[1]), v[0].dot(&v[2]), v[1].dot(&v[2]));
        assert!(got.max_abs_diff(target) <= 1e-9, "{got:?} vs {target:?}");
    }

    #[test]
    fn gram_examples() {
        for target in [t(0.0, 0.0, 0.0), t(1.0, 1.0, 1.0), t(0.5, 0.5, 0.5), t(-0.5, -0.5, -0.5), t(1.0, -1.0, -1.0)] {
            assert_dots(&gram_realize(&target).unwrap(), &target);
        }
        let same = gram_realize(&t(1.0, 1.0, 1.0)).unwrap();
        assert!((same[0] - same[1]).norm() < 1e-9 && (same[0] - same[2]).norm() < 1e-9);
        assert!(matches!(gram_realize(&t(1.0, 1.0, -1.0)), Err(Error::NotInElliptope(..))));
    }

    #[test]
    fn sampler_and_mesh() {
        let a = sample_elliptope(1000, 7);
        assert_eq!(a.len(), 1000);
        assert!(a.iter().all(|x| elliptope_contains(x, 1e-12)));
        assert_eq!(a, sample_elliptope(1000, 7));
        let mesh = elliptope_boundary(21);
        assert!(!mesh.is_empty());
        assert!(mesh.iter().all(|x| elliptope_value(x).abs() < 1e-12));
    }

    #[test]
    fn triple_json() {
        let x = t(0.5, -0.25, 1.0);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, "[0.5,-0.25,1.0]");
        assert_eq!(serde_json::from_str::<CorrelationTriple>(&s).unwrap(), x);
        assert!(serde_json::from_str::<CorrelationTriple>("[2.0,0.0,0.0]").is_err());
    }
}
