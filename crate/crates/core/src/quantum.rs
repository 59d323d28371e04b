//! Spin-`s` operators and the two-party singlet (with `hbar = 1`).
//!
//! Correlations between outcomes on the two halves of a singlet are perfect
//! anticorrelations for equal settings. Reading the twin's outcome as the
//! negation of the first system's value turns two-party correlations into
//! same-system triples, which fill the entire elliptope.
//!
//! Matrices are dense; basis order is `m = s, s-1, ..., -s`.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen, Vector3};
use serde::{Deserialize, Serialize};

use crate::correlations::{gram_realize, CorrelationTriple};
use crate::{Error, Limits, Result, FLOAT_TOL};

pub type C64 = Complex<f64>;

fn c(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

/// A spin quantum number `s`, stored as `2s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Spin {
    twice: u32,
}

impl Spin {
    pub fn from_twice(twice: u32) -> Result<Self> {
        Self::from_twice_with_limits(twice, &Limits::default())
    }

    pub fn from_twice_with_limits(twice: u32, limits: &Limits) -> Result<Self> {
        if twice == 0 {
            return Err(Error::InvalidSpin("spin must be positive".into()));
        }
        if twice > limits.max_twice_spin {
            return Err(Error::InvalidSpin(format!(
                "spin {}/2 exceeds the cap {}/2",
                twice, limits.max_twice_spin
            )));
        }
        Ok(Spin { twice })
    }

    /// Parses `"1/2"`, `"3/2"`, `"1"`, `"0.5"`.
    pub fn parse(s: &str, limits: &Limits) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidSpin(format!("cannot parse spin {s:?}"));
        let twice = if let Some((n, d)) = s.split_once('/') {
            let n: u32 = n.trim().parse().map_err(|_| bad())?;
            match d.trim() {
                "2" => n,
                "1" => 2 * n,
                _ => return Err(bad()),
            }
        } else {
            let x: f64 = s.parse().map_err(|_| bad())?;
            let t = 2.0 * x;
            if t.fract() != 0.0 || t < 0.0 {
                return Err(bad());
            }
            t as u32
        };
        Self::from_twice_with_limits(twice, limits)
    }

    pub fn twice(&self) -> u32 {
        self.twice
    }

    pub fn value(&self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// `2s + 1`.
    pub fn dim(&self) -> usize {
        self.twice as usize + 1
    }

    /// Eigenvalues `s, s-1, ..., -s` in basis order.
    pub fn m_values(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.value() - i as f64).collect()
    }
}

/// A unit vector in 3-space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct Direction(Vector3<f64>);

impl Direction {
    /// Normalizes `v`.
    pub fn new(v: Vector3<f64>) -> Result<Self> {
        let n = v.norm();
        if !n.is_finite() || n == 0.0 {
            return Err(Error::InvalidArgument("direction must be a nonzero finite vector".into()));
        }
        Ok(Direction(v / n))
    }

    /// Rejects input whose norm differs from 1 by more than `1e-12`.
    pub fn strict(v: Vector3<f64>) -> Result<Self> {
        if (v.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "direction {:?} is not a unit vector",
                [v.x, v.y, v.z]
            )));
        }
        Ok(Direction(v))
    }

    pub fn from_array(v: [f64; 3]) -> Result<Self> {
        Self::new(Vector3::new(v[0], v[1], v[2]))
    }

    pub fn x() -> Self {
        Direction(Vector3::x())
    }

    pub fn y() -> Self {
        Direction(Vector3::y())
    }

    pub fn z() -> Self {
        Direction(Vector3::z())
    }

    pub fn vector(&self) -> &Vector3<f64> {
        &self.0
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.0.x, self.0.y, self.0.z]
    }

    pub fn negated(&self) -> Direction {
        Direction(-self.0)
    }
}

impl TryFrom<[f64; 3]> for Direction {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        Direction::from_array(v)
    }
}

impl From<Direction> for [f64; 3] {
    fn from(d: Direction) -> Self {
        d.as_array()
    }
}

/// A Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable(DMatrix<C64>);

impl Observable {
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidArgument("observable must be square".into()));
        }
        let dev = (&m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if dev > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "matrix is not Hermitian (deviation {dev:e})"
            )));
        }
        Ok(Observable(m))
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = SymmetricEigen::new(self.0.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Frobenius norm of `[a, b]`.
pub fn commutator_norm(a: &Observable, b: &Observable) -> f64 {
    (&a.0 * &b.0 - &b.0 * &a.0).norm()
}

/// A unit vector in `C^d` or, for bipartite states, `C^(d*d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState(DVector<C64>);

impl PureState {
    pub fn new(v: DVector<C64>) -> Result<Self> {
        if (v.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument("state must have unit norm".into()));
        }
        Ok(PureState(v))
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.0
    }

    /// Reshapes a bipartite state into the `d x d` coefficient matrix.
    fn coefficients(&self, d: usize) -> DMatrix<C64> {
        assert_eq!(self.0.len(), d * d, "state is not bipartite in dimension {d}");
        DMatrix::from_fn(d, d, |i, j| self.0[i * d + j])
    }

    /// `<psi| A (x) B |psi>`.
    pub fn expectation(&self, a: &DMatrix<C64>, b: &DMatrix<C64>) -> C64 {
        let psi = self.coefficients(a.nrows());
        let applied = a * &psi * b.transpose();
        psi.iter().zip(applied.iter()).map(|(x, y)| x.conj() * y).sum()
    }

    /// `(A (x) B) |psi>` as a flat vector.
    pub fn apply(&self, a: &DMatrix<C64>, b: &DMatrix<C64>) -> DVector<C64> {
        let d = a.nrows();
        let out = a * self.coefficients(d) * b.transpose();
        DVector::from_fn(d * d, |k, _| out[(k / d, k % d)])
    }

    /// Reduced density matrix of party 0 or 1.
    pub fn reduced_state(&self, d: usize, party: usize) -> DMatrix<C64> {
        let psi = self.coefficients(d);
        if party == 0 {
            &psi * psi.adjoint()
        } else {
            (psi.adjoint() * &psi).transpose()
        }
    }
}

/// `(S_x, S_y, S_z)` from the ladder operators.
pub fn spin_matrices(spin: Spin) -> [DMatrix<C64>; 3] {
    let d = spin.dim();
    let s = spin.value();
    let m = spin.m_values();
    // S+ |m> = sqrt(s(s+1) - m(m+1)) |m+1>; |m+1> sits one index earlier.
    let mut raise = DMatrix::<C64>::zeros(d, d);
    for j in 1..d {
        let mj = m[j];
        raise[(j - 1, j)] = c((s * (s + 1.0) - mj * (mj + 1.0)).sqrt());
    }
    let lower = raise.adjoint();
    let sx = (&raise + &lower) * c(0.5);
    let sy = (&raise - &lower) * Complex::new(0.0, -0.5);
    let sz = DMatrix::from_diagonal(&DVector::from_iterator(d, m.iter().map(|&v| c(v))));
    [sx, sy, sz]
}

fn component_matrix(spin: Spin, e: &Vector3<f64>) -> DMatrix<C64> {
    let [sx, sy, sz] = spin_matrices(spin);
    sx * c(e.x) + sy * c(e.y) + sz * c(e.z)
}

/// `S_e = e_x S_x + e_y S_y + e_z S_z`.
pub fn spin_component(spin: Spin, e: &Direction) -> Observable {
    Observable(component_matrix(spin, &e.0))
}

/// The total-spin-zero state `(2s+1)^(-1/2) sum_m (-1)^(s-m) |m>|-m>`,
/// phase fixed so the first nonzero amplitude is real and positive.
pub fn singlet_state(spin: Spin) -> PureState {
    let d = spin.dim();
    let norm = (d as f64).sqrt().recip();
    let mut v = DVector::<C64>::zeros(d * d);
    for i in 0..d {
        // m at index i pairs with -m at index d-1-i; (-1)^(s-m) = (-1)^i
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        v[i * d + (d - 1 - i)] = c(sign * norm);
    }
    PureState(v)
}

/// `||(S_e (x) I + I (x) S_e) psi||`.
pub fn total_spin_residual(spin: Spin, state: &PureState, e: &Direction) -> f64 {
    let s = component_matrix(spin, &e.0);
    let id = DMatrix::<C64>::identity(spin.dim(), spin.dim());
    (state.apply(&s, &id) + state.apply(&id, &s)).norm()
}

/// Outcome distribution of `S_e` measured on `party`: pairs
/// `(eigenvalue, probability)` in ascending eigenvalue order.
pub fn outcome_distribution(
    spin: Spin,
    state: &PureState,
    e: &Direction,
    party: usize,
) -> Vec<(f64, f64)> {
    let rho = state.reduced_state(spin.dim(), party);
    let eig = SymmetricEigen::new(component_matrix(spin, &e.0));
    let mut out: Vec<(f64, f64)> = (0..spin.dim())
        .map(|k| {
            let v = eig.eigenvectors.column(k);
            let p = (v.adjoint() * &rho * v)[(0, 0)].re;
            ((eig.eigenvalues[k] * 2.0).round() / 2.0, p)
        })
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Pearson correlation between `S_a` on system 1 and `S_b` on system 2 in
/// the singlet; equals `-cos` of the angle between the directions.
pub fn pair_correlation(spin: Spin, e_a: &Direction, e_b: &Direction) -> f64 {
    pair_correlation_in(spin, &singlet_state(spin), e_a, e_b)
}

fn pair_correlation_in(spin: Spin, psi: &PureState, e_a: &Direction, e_b: &Direction) -> f64 {
    let d = spin.dim();
    let id = DMatrix::<C64>::identity(d, d);
    let a = component_matrix(spin, &e_a.0);
    let b = component_matrix(spin, &e_b.0);
    let mean_a = psi.expectation(&a, &id).re;
    let mean_b = psi.expectation(&id, &b).re;
    let var_a = psi.expectation(&(&a * &a), &id).re - mean_a * mean_a;
    let var_b = psi.expectation(&id, &(&b * &b)).re - mean_b * mean_b;
    let cov = psi.expectation(&a, &b).re - mean_a * mean_b;
    cov / (var_a * var_b).sqrt()
}

/// Same-system correlations among three settings, inferred through the
/// twin: each component is the negated two-party correlation.
pub fn inferred_triple(
    spin: Spin,
    e1: &Direction,
    e2: &Direction,
    e3: &Direction,
) -> CorrelationTriple {
    let psi = singlet_state(spin);
    let r = |a: &Direction, b: &Direction| (-pair_correlation_in(spin, &psi, a, b)).clamp(-1.0, 1.0);
    CorrelationTriple::new(r(e1, e2), r(e1, e3), r(e2, e3)).expect("clamped to [-1, 1]")
}

/// Result of steering the singlet to a target triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Saturation {
    pub directions: [Direction; 3],
    pub achieved: CorrelationTriple,
    pub max_deviation: f64,
}

/// Realizes `target` with measurement directions from its Gram factorization.
pub fn saturate_point(spin: Spin, target: &CorrelationTriple) -> Result<Saturation> {
    let vecs = gram_realize(target)?;
    let directions = [
        Direction::new(vecs[0])?,
        Direction::new(vecs[1])?,
        Direction::new(vecs[2])?,
    ];
    let achieved = inferred_triple(spin, &directions[0], &directions[1], &directions[2]);
    Ok(Saturation {
        directions,
        max_deviation: achieved.max_abs_diff(target),
        achieved,
    })
}

/// `S_e1 + S_e2 + S_e3`.
pub fn sum_observable(spin: Spin, e1: &Direction, e2: &Direction, e3: &Direction) -> Observable {
    Observable(component_matrix(spin, &(e1.0 + e2.0 + e3.0)))
}

/// Three coplanar directions at 120 degrees in the x-y plane; they sum to zero.
pub fn trine() -> [Direction; 3] {
    let at = |k: f64| {
        let a = 2.0 * std::f64::consts::PI * k / 3.0;
        Direction(Vector3::new(a.cos(), a.sin(), 0.0))
    };
    [at(0.0), at(1.0), at(2.0)]
}

/// Default tolerance for saturation checks.
pub const SATURATION_TOL: f64 = FLOAT_TOL;

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> Spin {
        Spin::from_twice(1).unwrap()
    }

    fn one() -> Spin {
        Spin::from_twice(2).unwrap()
    }

    fn diag(m: &DMatrix<C64>) -> Vec<f64> {
        (0..m.nrows()).map(|i| m[(i, i)].re).collect()
    }

    fn is_diagonal(m: &DMatrix<C64>) -> bool {
        (0..m.nrows()).all(|i| (0..m.ncols()).all(|j| i == j || m[(i, j)].norm() == 0.0))
    }

    #[test]
    fn z_components() {
        let sz = spin_component(half(), &Direction::z());
        assert!(is_diagonal(sz.matrix()));
        assert_eq!(diag(sz.matrix()), vec![0.5, -0.5]);
        let sz = spin_component(one(), &Direction::z());
        assert_eq!(diag(sz.matrix()), vec![1.0, 0.0, -1.0]);
    }

    #[test]
    fn commutation_relations() {
        for twice in 1..=4 {
            let spin = Spin::from_twice(twice).unwrap();
            let [sx, sy, sz] = spin_matrices(spin);
            let comm = &sx * &sy - &sy * &sx;
            assert!((comm - &sz * Complex::new(0.0, 1.0)).norm() < 1e-12);
            let s = spin.value();
            let casimir = &sx * &sx + &sy * &sy + &sz * &sz;
            let expected = DMatrix::<C64>::identity(spin.dim(), spin.dim()) * c(s * (s + 1.0));
            assert!((casimir - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn arbitrary_direction_spectrum() {
        let e = Direction::from_array([0.3, -0.7, 0.2]).unwrap();
        let ev = spin_component(half(), &e).eigenvalues();
        assert!((ev[0] + 0.5).abs() < 1e-9 && (ev[1] - 0.5).abs() < 1e-9);
        let ev = spin_component(Spin::from_twice(3).unwrap(), &e).eigenvalues();
        for (got, want) in ev.iter().zip([-1.5, -0.5, 0.5, 1.5]) {
            assert!((got - want).abs() < 1e-9);
        }
    }

    #[test]
    fn spin_half_singlet() {
        let psi = singlet_state(half());
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let amps: Vec<f64> = psi.amplitudes().iter().map(|z| z.re).collect();
        for (a, b) in amps.iter().zip([0.0, r, -r, 0.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(PureState::new(psi.amplitudes().clone()).is_ok());
    }

    #[test]
    fn reduced_state_maximally_mixed() {
        for twice in 1..=4 {
            let spin = Spin::from_twice(twice).unwrap();
            let psi = singlet_state(spin);
            for party in 0..2 {
                let rho = psi.reduced_state(spin.dim(), party);
                let ev = Observable::new(rho).unwrap().eigenvalues();
                for v in ev {
                    assert!((v - 1.0 / spin.dim() as f64).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn pair_correlation_examples() {
        let z = Direction::z();
        assert!((pair_correlation(half(), &z, &z) + 1.0).abs() < 1e-12);
        assert!(pair_correlation(half(), &z, &Direction::x()).abs() < 1e-12);
        assert!((pair_correlation(one(), &z, &z.negated()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inferred_triple_examples() {
        let z = Direction::z();
        let t = inferred_triple(half(), &z, &z, &z);
        assert_eq!(t.as_array().map(|x| (x * 1e9).round() / 1e9), [1.0, 1.0, 1.0]);
        let t = inferred_triple(one(), &Direction::x(), &Direction::y(), &z);
        assert!(t.as_array().iter().all(|r| r.abs() < 1e-12));
        let [a, b, cc] = trine();
        let t = inferred_triple(half(), &a, &b, &cc);
        assert!(t.as_array().iter().all(|r| (r + 0.5).abs() < 1e-9));
        assert!(crate::correlations::elliptope_value(&t).abs() < 1e-9);
    }

    #[test]
    fn saturation_examples() {
        for target in [[1.0, 1.0, 1.0], [0.0, 0.0, 0.0], [0.5, 0.5, 0.5]] {
            let t = CorrelationTriple::try_from(target).unwrap();
            let sat = saturate_point(half(), &t).unwrap();
            assert!(sat.max_deviation <= 1e-9);
        }
        let bad = CorrelationTriple::new(1.0, 1.0, -1.0).unwrap();
        assert!(matches!(saturate_point(half(), &bad), Err(Error::NotInElliptope(..))));
    }

    #[test]
    fn sum_observable_examples() {
        let [a, b, cc] = trine();
        let sum = sum_observable(one(), &a, &b, &cc);
        assert!(sum.max_abs() <= 1e-12);
        for (p, q) in [(&a, &b), (&a, &cc), (&b, &cc)] {
            let n = commutator_norm(&spin_component(one(), p), &spin_component(one(), q));
            assert!(n > 0.1);
        }
        let z = Direction::z();
        let sum = sum_observable(half(), &z, &z, &z);
        assert_eq!(diag(sum.matrix()), vec![1.5, -1.5]);
    }

    #[test]
    fn spin_parsing_and_caps() {
        let l = Limits::default();
        assert_eq!(Spin::parse("1/2", &l).unwrap().twice(), 1);
        assert_eq!(Spin::parse("3/2", &l).unwrap().twice(), 3);
        assert_eq!(Spin::parse("1", &l).unwrap().twice(), 2);
        assert_eq!(Spin::parse("0.5", &l).unwrap().twice(), 1);
        assert!(Spin::parse("0.3", &l).is_err());
        assert!(Spin::parse("0", &l).is_err());
        assert!(matches!(Spin::from_twice(9), Err(Error::InvalidSpin(_))));
    }

    #[test]
    fn directions() {
        assert!(Direction::new(Vector3::zeros()).is_err());
        assert!(Direction::strict(Vector3::new(2.0, 0.0, 0.0)).is_err());
        let d = Direction::from_array([0.0, 3.0, 4.0]).unwrap();
        assert_eq!(d.as_array(), [0.0, 0.6, 0.8]);
        let j = serde_json::to_string(&d).unwrap();
        assert_eq!(serde_json::from_str::<Direction>(&j).unwrap(), d);
        assert!(Observable::new(DMatrix::from_element(2, 2, Complex::new(0.0, 1.0))).is_err());
    }
}
