//! Local hidden-variable ("raffle") models of the three-setting experiment.
//!
//! A ticket pre-assigns values `(x, y, z)` to all three variables at once; a
//! model is a probability distribution over tickets. Values come from the
//! symmetric set `V_k = {-s, -s+1, ..., s}` with `k = 2s + 1`, the spin
//! analogy.
//!
//! Admissible models are global-sign symmetrized: a ticket and its negation
//! always carry equal weight. That leaves every pairwise product unchanged
//! and makes each marginal balanced, so Pearson correlations are defined.
//! This is the model class used here for general `k`; other readings of
//! "more values per variable" are possible.
//!
//! For `k = 2` every variable has unit variance, correlations are linear in
//! the weights, and the achievable region is the tetrahedron with vertices
//! `(1,1,1), (1,-1,-1), (-1,1,-1), (-1,-1,1)`. For larger `k` variances move
//! with the mixture and the region is no longer a polytope; it is estimated
//! by the convex hull of a sampled cloud, an inner approximation.

mod hull;

pub use hull::ConvexHull3;

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::correlations::{
    elliptope_value, pearson_pair, CorrelationTriple, JointDistribution,
};
use crate::polytope::{self, HPolytope, RationalPoint, VPolytope};
use crate::rational::{self, Rational};
use crate::{Error, Limits, Result};

/// A joint value assignment `(x, y, z)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Ticket(pub [f64; 3]);

impl Ticket {
    pub fn values(&self) -> [f64; 3] {
        self.0
    }

    pub fn negated(&self) -> Ticket {
        Ticket(self.0.map(|v| -v))
    }
}

/// `V_k = {-s, ..., s}` with `s = (k - 1) / 2`.
pub fn value_set(k: usize) -> Vec<f64> {
    let s = (k as f64 - 1.0) / 2.0;
    (0..k).map(|i| -s + i as f64).collect()
}

/// Tickets over `V_k^3` in lexicographic order, optionally only those whose
/// values sum to zero.
pub fn ticket_set(k: usize, zero_sum: bool) -> Result<Vec<Ticket>> {
    ticket_set_with_limits(k, zero_sum, &Limits::default())
}

pub fn ticket_set_with_limits(k: usize, zero_sum: bool, limits: &Limits) -> Result<Vec<Ticket>> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k must be at least 2, got {k}")));
    }
    if k > limits.max_k {
        return Err(Error::KTooLarge { k, cap: limits.max_k });
    }
    let vals = value_set(k);
    let mut out = Vec::new();
    for &x in &vals {
        for &y in &vals {
            for &z in &vals {
                if !zero_sum || x + y + z == 0.0 {
                    out.push(Ticket([x, y, z]));
                }
            }
        }
    }
    Ok(out)
}

/// A probability distribution over tickets.
#[derive(Debug, Clone, PartialEq)]
pub struct RaffleModel {
    tickets: Vec<Ticket>,
    weights: Vec<f64>,
    symmetrized: bool,
}

impl RaffleModel {
    /// Validates weights; `symmetrized` is verified, not trusted.
    pub fn new(tickets: Vec<Ticket>, weights: Vec<f64>, symmetrized: bool) -> Result<Self> {
        check_weights(&tickets, &weights)?;
        let model = RaffleModel {
            tickets,
            weights,
            symmetrized,
        };
        if symmetrized && !model.is_sign_symmetric() {
            return Err(Error::InvalidArgument(
                "model flagged symmetrized but a ticket and its negation differ in weight".into(),
            ));
        }
        Ok(model)
    }

    /// Splits each weight evenly between a ticket and its negation.
    pub fn symmetrize(tickets: &[Ticket], weights: &[f64]) -> Result<Self> {
        check_weights(tickets, weights)?;
        let mut out_t: Vec<Ticket> = Vec::with_capacity(2 * tickets.len());
        let mut out_w: Vec<f64> = Vec::with_capacity(2 * tickets.len());
        let mut add = |t: Ticket, w: f64| match out_t.iter().position(|u| *u == t) {
            Some(i) => out_w[i] += w,
            None => {
                out_t.push(t);
                out_w.push(w);
            }
        };
        for (t, &w) in tickets.iter().zip(weights) {
            add(*t, w / 2.0);
            add(t.negated(), w / 2.0);
        }
        Ok(RaffleModel {
            tickets: out_t,
            weights: out_w,
            symmetrized: true,
        })
    }

    pub fn tickets(&self) -> &[Ticket] {
        &self.tickets
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_symmetrized(&self) -> bool {
        self.symmetrized
    }

    fn is_sign_symmetric(&self) -> bool {
        self.tickets.iter().zip(&self.weights).all(|(t, &w)| {
            let neg = t.negated();
            let mirror: f64 = self
                .tickets
                .iter()
                .zip(&self.weights)
                .filter(|(u, _)| **u == neg)
                .map(|(_, &v)| v)
                .sum();
            (mirror - w).abs() <= 1e-12
        })
    }

    /// Joint distribution of `(X, Y, Z)` induced by the model.
    pub fn joint(&self) -> Result<JointDistribution> {
        let mut supports: [Vec<f64>; 3] = Default::default();
        for t in &self.tickets {
            for (axis, v) in supports.iter_mut().zip(t.0) {
                if !axis.contains(&v) {
                    axis.push(v);
                }
            }
        }
        for axis in supports.iter_mut() {
            axis.sort_by(f64::total_cmp);
        }
        let (ny, nz) = (supports[1].len(), supports[2].len());
        let mut table = vec![0.0; supports[0].len() * ny * nz];
        for (t, &w) in self.tickets.iter().zip(&self.weights) {
            let idx: Vec<usize> = (0..3)
                .map(|a| supports[a].iter().position(|&v| v == t.0[a]).unwrap())
                .collect();
            table[(idx[0] * ny + idx[1]) * nz + idx[2]] += w;
        }
        JointDistribution::new(supports.to_vec(), table)
    }
}

fn check_weights(tickets: &[Ticket], weights: &[f64]) -> Result<()> {
    if tickets.len() != weights.len() {
        return Err(Error::LengthMismatch {
            expected: tickets.len(),
            found: weights.len(),
        });
    }
    if tickets.is_empty() {
        return Err(Error::EmptyTicketSet);
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::InvalidArgument("weights must be nonnegative".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("weights sum to {total}, not 1")));
    }
    Ok(())
}

/// Pearson triple of the model's joint distribution.
pub fn raffle_correlations(model: &RaffleModel) -> Result<CorrelationTriple> {
    if !model.symmetrized {
        return Err(Error::InvalidArgument(
            "raffle correlations need a symmetrized model".into(),
        ));
    }
    let joint = model.joint()?;
    let clamp = |r: f64| r.clamp(-1.0, 1.0);
    CorrelationTriple::new(
        clamp(pearson_pair(&joint, 0, 1)?),
        clamp(pearson_pair(&joint, 0, 2)?),
        clamp(pearson_pair(&joint, 1, 2)?),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionMode {
    ExactPolytope,
    SampledCloud,
    /// The elliptope itself, used to validate coverage estimates.
    Elliptope,
}

/// An achievable correlation region, exact or sampled.
#[derive(Debug, Clone)]
pub struct RegionEstimate {
    pub mode: RegionMode,
    pub vertices: Option<VPolytope>,
    pub facets: Option<HPolytope>,
    pub cloud: Vec<CorrelationTriple>,
    pub seed: Option<u64>,
    pub samples: usize,
}

impl RegionEstimate {
    pub fn elliptope() -> Self {
        RegionEstimate {
            mode: RegionMode::Elliptope,
            vertices: None,
            facets: None,
            cloud: Vec::new(),
            seed: None,
            samples: 0,
        }
    }

    /// A sampled region from an explicit point cloud.
    pub fn from_cloud(cloud: Vec<CorrelationTriple>) -> Self {
        let samples = cloud.len();
        RegionEstimate {
            mode: RegionMode::SampledCloud,
            vertices: None,
            facets: None,
            cloud,
            seed: None,
            samples,
        }
    }

    /// Convex hull of the cloud, `None` if it is flat.
    pub fn cloud_hull(&self) -> Option<ConvexHull3> {
        let pts: Vec<[f64; 3]> = self.cloud.iter().map(CorrelationTriple::as_array).collect();
        ConvexHull3::new(&pts)
    }
}

/// Exact volume of a tetrahedron: `|det(b - a, c - a, d - a)| / 6`.
pub fn tetrahedron_volume(v: &[RationalPoint]) -> Result<Rational> {
    if v.len() != 4 || v.iter().any(|p| p.dim() != 3) {
        return Err(Error::InvalidArgument(
            "tetrahedron volume needs four points in 3-space".into(),
        ));
    }
    let e: Vec<Vec<Rational>> = v[1..]
        .iter()
        .map(|p| p.coords().iter().zip(v[0].coords()).map(|(a, b)| a - b).collect())
        .collect();
    let det = &e[0][0] * (&e[1][1] * &e[2][2] - &e[1][2] * &e[2][1])
        - &e[0][1] * (&e[1][0] * &e[2][2] - &e[1][2] * &e[2][0])
        + &e[0][2] * (&e[1][0] * &e[2][1] - &e[1][1] * &e[2][0]);
    Ok(det.abs() / rational::int(6))
}

/// The exact two-valued region: hull of the triples of deterministic tickets.
pub fn lhv_region_exact_k2() -> Result<RegionEstimate> {
    let mut vertices: Vec<RationalPoint> = Vec::new();
    for t in ticket_set(2, false)? {
        let model = RaffleModel::symmetrize(&[t], &[1.0])?;
        let triple = raffle_correlations(&model)?;
        let p = RationalPoint::new(
            triple
                .as_array()
                .iter()
                .map(|&r| rational::int(r.round() as i64))
                .collect(),
        );
        if !vertices.contains(&p) {
            vertices.push(p);
        }
    }
    vertices.sort_by(|a, b| b.cmp(a));
    let v = VPolytope::new(3, vertices)?;
    let h = polytope::facet_enumeration(&v)?;
    Ok(RegionEstimate {
        mode: RegionMode::ExactPolytope,
        vertices: Some(v),
        facets: Some(h),
        cloud: Vec::new(),
        seed: None,
        samples: 0,
    })
}

/// Most tickets mixed into one sampled model.
const MAX_MIXTURE_SUPPORT: usize = 4;
/// Consecutive degenerate draws tolerated before giving up.
const MAX_DEGENERATE_DRAWS: usize = 10_000;

/// Random symmetrized mixture over `tickets`: a support of one to
/// [`MAX_MIXTURE_SUPPORT`] tickets drawn uniformly, with flat Dirichlet
/// weights on it.
pub fn random_mixture(tickets: &[Ticket], rng: &mut impl Rng) -> Result<RaffleModel> {
    if tickets.is_empty() {
        return Err(Error::EmptyTicketSet);
    }
    let m = rng.random_range(1..=MAX_MIXTURE_SUPPORT);
    let chosen: Vec<Ticket> = (0..m)
        .map(|_| tickets[rng.random_range(0..tickets.len())])
        .collect();
    let raw: Vec<f64> = (0..m).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    let mut weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    // Absorb rounding so the weights sum to one.
    let drift: f64 = 1.0 - weights.iter().sum::<f64>();
    weights[0] += drift;
    RaffleModel::symmetrize(&chosen, &weights)
}

/// Cloud of correlation triples from `samples` random mixtures.
///
/// Draws with a zero-variance marginal are redrawn.
pub fn lhv_region_sampled(
    k: usize,
    zero_sum: bool,
    samples: usize,
    seed: u64,
) -> Result<RegionEstimate> {
    lhv_region_sampled_with_limits(k, zero_sum, samples, seed, &Limits::default())
}

pub fn lhv_region_sampled_with_limits(
    k: usize,
    zero_sum: bool,
    samples: usize,
    seed: u64,
    limits: &Limits,
) -> Result<RegionEstimate> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let tickets = ticket_set_with_limits(k, zero_sum, limits)?;
    if tickets.is_empty() {
        return Err(Error::EmptyTicketSet);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cloud = Vec::with_capacity(samples);
    let mut failures = 0;
    while cloud.len() < samples {
        let model = random_mixture(&tickets, &mut rng)?;
        match raffle_correlations(&model) {
            Ok(t) => {
                cloud.push(t);
                failures = 0;
            }
            Err(Error::ZeroVariance(i)) => {
                failures += 1;
                if failures >= MAX_DEGENERATE_DRAWS {
                    return Err(Error::ZeroVariance(i));
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(RegionEstimate {
        mode: RegionMode::SampledCloud,
        vertices: None,
        facets: None,
        cloud,
        seed: Some(seed),
        samples,
    })
}

/// Monte Carlo estimate of region volume over elliptope volume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coverage {
    pub fraction: f64,
    /// 95% normal-approximation confidence half-width.
    pub half_width: f64,
    /// MC points that landed in the elliptope.
    pub elliptope_points: u64,
    /// Of those, points inside the region.
    pub region_points: u64,
    pub mc_samples: u64,
    pub seed: u64,
}

/// Distance tolerance for hull and facet membership in coverage estimates.
const COVERAGE_TOL: f64 = 1e-12;

/// Fraction of the elliptope covered by `region`: uniform points in
/// `[-1, 1]^3` that land in the elliptope are tested against the region
/// (its facets for exact polytopes, its cloud hull for sampled regions).
pub fn coverage_fraction(region: &RegionEstimate, mc_samples: u64, seed: u64) -> Result<Coverage> {
    if mc_samples == 0 {
        return Err(Error::InvalidArgument("mc_samples must be at least 1".into()));
    }
    let member: Box<dyn Fn([f64; 3]) -> bool> = match region.mode {
        RegionMode::Elliptope => Box::new(|_| true),
        RegionMode::ExactPolytope => {
            let h = region.facets.as_ref().ok_or(Error::EmptyRegion)?;
            let planes: Vec<(Vec<f64>, f64)> = h
                .inequalities()
                .iter()
                .map(|i| {
                    let c: Vec<f64> = i
                        .coefficients()
                        .iter()
                        .map(|x| rational::to_f64(&Rational::from_integer(x.clone())))
                        .collect();
                    let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
                    let k = rational::to_f64(&Rational::from_integer(i.constant().clone()));
                    (c.iter().map(|x| x / norm).collect(), k / norm)
                })
                .collect();
            if !h.equalities().is_empty() {
                Box::new(|_| false)
            } else {
                Box::new(move |q: [f64; 3]| {
                    planes.iter().all(|(c, k)| {
                        c[0] * q[0] + c[1] * q[1] + c[2] * q[2] + k >= -COVERAGE_TOL
                    })
                })
            }
        }
        RegionMode::SampledCloud => {
            if region.cloud.is_empty() {
                return Err(Error::EmptyRegion);
            }
            match region.cloud_hull() {
                Some(hull) => Box::new(move |q| hull.contains(q, COVERAGE_TOL)),
                None => Box::new(|_| false),
            }
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut in_ellip, mut in_region) = (0u64, 0u64);
    for _ in 0..mc_samples {
        let q: [f64; 3] = [
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        ];
        let t = CorrelationTriple::new(q[0], q[1], q[2]).expect("sample lies in the cube");
        if elliptope_value(&t) < 0.0 {
            continue;
        }
        in_ellip += 1;
        if member(q) {
            in_region += 1;
        }
    }
    if in_ellip == 0 {
        return Err(Error::InvalidArgument(
            "no Monte Carlo point landed in the elliptope".into(),
        ));
    }
    let p = in_region as f64 / in_ellip as f64;
    Ok(Coverage {
        fraction: p,
        half_width: 1.96 * (p * (1.0 - p) / in_ellip as f64).sqrt(),
        elliptope_points: in_ellip,
        region_points: in_region,
        mc_samples,
        seed,
    })
}

/// Float membership of a triple in a 3D H-polytope, with each inequality
/// relaxed by `tol` times its coefficient norm.
pub fn facets_contain(h: &HPolytope, t: &CorrelationTriple, tol: f64) -> bool {
    let q = t.as_array();
    let as_f = |x: &num_bigint::BigInt| rational::to_f64(&Rational::from_integer(x.clone()));
    let lhs = |c: &[num_bigint::BigInt], k: &num_bigint::BigInt| {
        let cf: Vec<f64> = c.iter().map(as_f).collect();
        let norm = cf.iter().map(|x| x * x).sum::<f64>().sqrt();
        (cf.iter().zip(q).map(|(a, b)| a * b).sum::<f64>() + as_f(k), norm)
    };
    h.equalities().iter().all(|e| {
        let (v, n) = lhs(e.coefficients(), e.constant());
        v.abs() <= tol * n
    }) && h.inequalities().iter().all(|i| {
        let (v, n) = lhs(i.coefficients(), i.constant());
        v >= -tol * n
    })
}
