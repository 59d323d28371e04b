//! Exact rational convex polytopes.
//!
//! A [`VPolytope`] lists vertices; [`facet_enumeration`] converts it into an
//! [`HPolytope`] of irredundant facet inequalities
//! `a1*p1 + ... + an*pn + a >= 0` plus the equalities of its affine hull.
//! [`membership_by_lp`] decides membership directly from the vertices with
//! an exact simplex and serves as an independent check on the facet list.
//!
//! Everything is computed over big rationals; the canonical integer form of
//! each inequality makes facet sets comparable bit for bit.

mod dd;
mod lp;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};
use crate::{Error, Limits, Result};

pub use lp::membership_by_lp;

/// A point with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint(Vec<Rational>);

impl RationalPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        RationalPoint(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RationalPoint(coords.iter().map(|&c| rational::int(c)).collect())
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(rational::to_f64).collect()
    }
}

impl From<Vec<Rational>> for RationalPoint {
    fn from(v: Vec<Rational>) -> Self {
        RationalPoint(v)
    }
}

/// `a1*p1 + ... + an*pn + a >= 0`, stored as integers with collective gcd 1.
///
/// Orientation is fixed by the inequality itself, so only positive scaling
/// is applied during canonicalization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearInequality {
    coefficients: Vec<BigInt>,
    constant: BigInt,
}

impl LinearInequality {
    pub fn new(coefficients: &[Rational], constant: &Rational) -> Result<Self> {
        if coefficients.iter().all(Zero::is_zero) {
            return Err(Error::InvalidArgument(
                "inequality needs a nonzero coefficient".into(),
            ));
        }
        let mut all: Vec<Rational> = coefficients.to_vec();
        all.push(constant.clone());
        let mut ints = rational::primitive_integer_vector(&all);
        let constant = ints.pop().unwrap();
        Ok(LinearInequality {
            coefficients: ints,
            constant,
        })
    }

    pub fn from_ints(coefficients: &[i64], constant: i64) -> Result<Self> {
        let c: Vec<Rational> = coefficients.iter().map(|&x| rational::int(x)).collect();
        Self::new(&c, &rational::int(constant))
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn constant(&self) -> &BigInt {
        &self.constant
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    /// Left-hand side `a1*p1 + ... + an*pn + a` at `p`.
    pub fn evaluate(&self, p: &[Rational]) -> Rational {
        let s: Rational = self
            .coefficients
            .iter()
            .zip(p)
            .map(|(a, x)| x * a)
            .sum();
        s + Rational::from_integer(self.constant.clone())
    }

    pub fn is_satisfied(&self, p: &[Rational]) -> bool {
        !self.evaluate(p).is_negative()
    }

    /// Renders with the given labels, e.g. `-E1 - E2 + E3 + 1 >= 0`.
    pub fn render(&self, labels: &[String]) -> String {
        format!("{} >= 0", render_affine(&self.coefficients, &self.constant, labels))
    }

    fn sort_key(&self) -> impl Iterator<Item = &BigInt> {
        self.coefficients.iter().chain(std::iter::once(&self.constant))
    }
}

impl Ord for LinearInequality {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(other.sort_key())
    }
}

impl PartialOrd for LinearInequality {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `a1*p1 + ... + an*pn + a = 0` with integer coefficients, gcd 1 and the
/// first nonzero coefficient positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearEquality {
    coefficients: Vec<BigInt>,
    constant: BigInt,
}

impl LinearEquality {
    pub fn new(coefficients: &[Rational], constant: &Rational) -> Result<Self> {
        let ineq = LinearInequality::new(coefficients, constant)?;
        let (mut coefficients, mut constant) = (ineq.coefficients, ineq.constant);
        if coefficients.iter().find(|c| !c.is_zero()).unwrap().is_negative() {
            coefficients.iter_mut().for_each(|c| *c = -&*c);
            constant = -constant;
        }
        Ok(LinearEquality {
            coefficients,
            constant,
        })
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn constant(&self) -> &BigInt {
        &self.constant
    }

    pub fn evaluate(&self, p: &[Rational]) -> Rational {
        let s: Rational = self
            .coefficients
            .iter()
            .zip(p)
            .map(|(a, x)| x * a)
            .sum();
        s + Rational::from_integer(self.constant.clone())
    }

    pub fn render(&self, labels: &[String]) -> String {
        format!("{} = 0", render_affine(&self.coefficients, &self.constant, labels))
    }
}

fn render_affine(coefficients: &[BigInt], constant: &BigInt, labels: &[String]) -> String {
    let mut out = String::new();
    let mut term = |c: &BigInt, name: Option<&str>| {
        if c.is_zero() {
            return;
        }
        let mag = c.abs();
        let body = match name {
            Some(n) if mag == BigInt::from(1) => n.to_string(),
            Some(n) => format!("{mag}*{n}"),
            None => mag.to_string(),
        };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        out.push_str(&body);
    };
    for (i, c) in coefficients.iter().enumerate() {
        let fallback = format!("p{}", i + 1);
        let name = labels.get(i).map(String::as_str).unwrap_or(&fallback);
        term(c, Some(name));
    }
    term(constant, None);
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("p{i}")).collect()
}

/// Vertex-listed polytope.
#[derive(Debug, Clone, PartialEq)]
pub struct VPolytope {
    dimension: usize,
    vertices: Vec<RationalPoint>,
}

impl VPolytope {
    pub fn new(dimension: usize, vertices: Vec<RationalPoint>) -> Result<Self> {
        if let Some(v) = vertices.iter().find(|v| v.dim() != dimension) {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                found: v.dim(),
            });
        }
        Ok(VPolytope {
            dimension,
            vertices,
        })
    }

    /// Uses the first vertex to fix the ambient dimension.
    pub fn from_vertices(vertices: Vec<RationalPoint>) -> Result<Self> {
        let dim = vertices
            .first()
            .map(RationalPoint::dim)
            .ok_or(Error::EmptyInput("polytope needs at least one vertex"))?;
        Self::new(dim, vertices)
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_vertices(rows.iter().map(|r| RationalPoint::from_ints(r)).collect())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vertices(&self) -> &[RationalPoint] {
        &self.vertices
    }
}

/// Facet-listed polytope together with the equalities of its affine hull.
#[derive(Debug, Clone, PartialEq)]
pub struct HPolytope {
    dimension: usize,
    inequalities: Vec<LinearInequality>,
    equalities: Vec<LinearEquality>,
}

impl HPolytope {
    pub fn new(
        dimension: usize,
        inequalities: Vec<LinearInequality>,
        equalities: Vec<LinearEquality>,
    ) -> Result<Self> {
        for found in inequalities
            .iter()
            .map(LinearInequality::dim)
            .chain(equalities.iter().map(|e| e.coefficients.len()))
        {
            if found != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found,
                });
            }
        }
        Ok(HPolytope {
            dimension,
            inequalities,
            equalities,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn inequalities(&self) -> &[LinearInequality] {
        &self.inequalities
    }

    pub fn equalities(&self) -> &[LinearEquality] {
        &self.equalities
    }

    /// Copy without the inequality at `index`.
    pub fn without_inequality(&self, index: usize) -> HPolytope {
        let mut h = self.clone();
        h.inequalities.remove(index);
        h
    }

    pub fn render(&self, labels: Option<&[String]>) -> String {
        let owned;
        let labels = match labels {
            Some(l) => l,
            None => {
                owned = default_labels(self.dimension);
                &owned
            }
        };
        let mut out = String::new();
        for e in &self.equalities {
            out.push_str(&e.render(labels));
            out.push('\n');
        }
        for i in &self.inequalities {
            out.push_str(&i.render(labels));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for HPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(None))
    }
}

/// Dimension of the affine hull of the vertices, by exact rank.
pub fn affine_dimension(poly: &VPolytope) -> usize {
    let Some(v0) = poly.vertices.first() else {
        return 0;
    };
    let diffs: Vec<Vec<Rational>> = poly.vertices[1..]
        .iter()
        .map(|v| v.0.iter().zip(&v0.0).map(|(a, b)| a - b).collect())
        .collect();
    rational::rank(&diffs)
}

/// Facet enumeration under the default [`Limits`].
pub fn facet_enumeration(poly: &VPolytope) -> Result<HPolytope> {
    facet_enumeration_with_limits(poly, &Limits::default())
}

/// Irredundant H-representation of the convex hull of `poly`.
///
/// Lower-dimensional hulls are handled by extracting the affine-hull
/// equalities, enumerating facets inside the flat and lifting them back with
/// zero coefficients on the eliminated coordinates. Facets come out sorted
/// lexicographically on their canonical integer coefficients.
pub fn facet_enumeration_with_limits(poly: &VPolytope, limits: &Limits) -> Result<HPolytope> {
    let mut verts = poly.vertices.clone();
    verts.sort();
    verts.dedup();
    if verts.is_empty() {
        return Err(Error::EmptyInput("facet enumeration needs at least one vertex"));
    }
    if verts.len() > limits.max_vertices || verts.len() > dd::MAX_CONSTRAINTS {
        return Err(Error::SizeLimitExceeded(format!(
            "{} vertices, limit {}",
            verts.len(),
            limits.max_vertices.min(dd::MAX_CONSTRAINTS)
        )));
    }
    let n = poly.dimension;
    let v0 = verts[0].0.clone();
    let mut basis: Vec<Vec<Rational>> = verts[1..]
        .iter()
        .map(|v| v.0.iter().zip(&v0).map(|(a, b)| a - b).collect())
        .collect();
    let pivots = rational::rref(&mut basis);
    let d = pivots.len();
    if d > limits.max_dim {
        return Err(Error::SizeLimitExceeded(format!(
            "affine dimension {d}, limit {}",
            limits.max_dim
        )));
    }

    // Null space of the difference vectors: one equality per free column.
    let mut equalities = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut c = vec![Rational::zero(); n];
        c[free] = rational::int(1);
        for (row, &p) in basis.iter().zip(&pivots) {
            c[p] = -row[free].clone();
        }
        let constant = -rational::dot(&c, &v0);
        equalities.push(LinearEquality::new(&c, &constant)?);
    }
    equalities.sort();

    let mut inequalities = Vec::new();
    if d > 0 {
        // Homogenized constraint rows (1, x_J) for the projected vertices.
        let rows: Vec<Vec<BigInt>> = verts
            .iter()
            .map(|v| {
                let mut r = vec![rational::int(1)];
                r.extend(pivots.iter().map(|&j| v.0[j].clone()));
                rational::primitive_integer_vector(&r)
            })
            .collect();
        for ray in dd::extreme_rays(&rows, d + 1) {
            let mut coefficients = vec![Rational::zero(); n];
            for (k, &j) in pivots.iter().enumerate() {
                coefficients[j] = Rational::from_integer(ray[k + 1].clone());
            }
            inequalities.push(LinearInequality::new(
                &coefficients,
                &Rational::from_integer(ray[0].clone()),
            )?);
        }
    }
    inequalities.sort();
    inequalities.dedup();
    HPolytope::new(n, inequalities, equalities)
}

/// Exact membership test against the facets and affine-hull equalities.
pub fn membership_by_facets(h: &HPolytope, p: &RationalPoint) -> Result<bool> {
    if p.dim() != h.dimension {
        return Err(Error::DimensionMismatch {
            expected: h.dimension,
            found: p.dim(),
        });
    }
    // Clear denominators once so each facet is an integer dot product.
    let l = p.0.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = p.0.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let lhs = |c: &[BigInt], k: &BigInt| -> BigInt {
        c.iter().zip(&ints).map(|(a, x)| a * x).sum::<BigInt>() + k * &l
    };
    Ok(h.equalities.iter().all(|e| lhs(&e.coefficients, &e.constant).is_zero())
        && h.inequalities
            .iter()
            .all(|i| !lhs(&i.coefficients, &i.constant).is_negative()))
}

#[derive(Serialize, Deserialize)]
struct InequalityDoc {
    coefficients: Vec<String>,
    constant: String,
}

#[derive(Serialize, Deserialize)]
struct HPolytopeDoc {
    dimension: usize,
    inequalities: Vec<InequalityDoc>,
    equalities: Vec<InequalityDoc>,
}

#[derive(Serialize, Deserialize)]
struct VPolytopeDoc {
    dimension: usize,
    vertices: Vec<Vec<String>>,
}

fn int_doc(coefficients: &[BigInt], constant: &BigInt) -> InequalityDoc {
    let q = |x: &BigInt| rational::format(&Rational::from_integer(x.clone()));
    InequalityDoc {
        coefficients: coefficients.iter().map(q).collect(),
        constant: q(constant),
    }
}

fn parse_doc(doc: &InequalityDoc) -> Result<(Vec<Rational>, Rational)> {
    let c = doc
        .coefficients
        .iter()
        .map(|s| rational::parse(s))
        .collect::<Result<Vec<_>>>()?;
    Ok((c, rational::parse(&doc.constant)?))
}

impl HPolytope {
    /// JSON with rationals as `"numerator/denominator"` strings.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(HPolytopeDoc {
            dimension: self.dimension,
            inequalities: self
                .inequalities
                .iter()
                .map(|i| int_doc(&i.coefficients, &i.constant))
                .collect(),
            equalities: self
                .equalities
                .iter()
                .map(|e| int_doc(&e.coefficients, &e.constant))
                .collect(),
        })
        .expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let doc: HPolytopeDoc =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let inequalities = doc
            .inequalities
            .iter()
            .map(|d| parse_doc(d).and_then(|(c, k)| LinearInequality::new(&c, &k)))
            .collect::<Result<Vec<_>>>()?;
        let equalities = doc
            .equalities
            .iter()
            .map(|d| parse_doc(d).and_then(|(c, k)| LinearEquality::new(&c, &k)))
            .collect::<Result<Vec<_>>>()?;
        HPolytope::new(doc.dimension, inequalities, equalities)
    }
}

impl VPolytope {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(VPolytopeDoc {
            dimension: self.dimension,
            vertices: self
                .vertices
                .iter()
                .map(|v| v.0.iter().map(rational::format).collect())
                .collect(),
        })
        .expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let doc: VPolytopeDoc =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let vertices = doc
            .vertices
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| rational::parse(s))
                    .collect::<Result<Vec<_>>>()
                    .map(RationalPoint)
            })
            .collect::<Result<Vec<_>>>()?;
        VPolytope::new(doc.dimension, vertices)
    }
}
