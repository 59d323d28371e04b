mod common;

use std::collections::BTreeSet;

use boole_core::event_algebra::{bell_facet_kind, bell_scenario, EventSystem, FacetKind, Formula};
use boole_core::polytope::{
    affine_dimension, facet_enumeration, facet_enumeration_with_limits, membership_by_facets,
    membership_by_lp, HPolytope, LinearInequality, RationalPoint, VPolytope,
};
use boole_core::rational::{self, Rational};
use boole_core::Limits;
use common::{affine_rank, brute_force_facets, q, qf, Q};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn polytope_of(sys: &EventSystem) -> VPolytope {
    let rows: Vec<Vec<i64>> = sys
        .enumerate_extremal_vectors()
        .iter()
        .map(|v| v.bits().iter().map(|&b| b as i64).collect())
        .collect();
    VPolytope::from_int_rows(&rows).unwrap()
}

fn conjunction() -> EventSystem {
    EventSystem::new(
        vec!["E1".into(), "E2".into(), "E3".into()],
        vec![Formula::parse("(iff E3 (and E1 E2))").unwrap()],
    )
    .unwrap()
}

fn keyed(h: &HPolytope) -> BTreeSet<Vec<BigInt>> {
    h.inequalities()
        .iter()
        .map(|f| f.coefficients().iter().cloned().chain([f.constant().clone()]).collect())
        .collect()
}

fn vertex_coords(v: &VPolytope) -> Vec<Vec<Q>> {
    v.vertices().iter().map(|p| p.coords().to_vec()).collect()
}

fn eval(f: &LinearInequality, p: &[Q]) -> Q {
    f.coefficients()
        .iter()
        .zip(p)
        .map(|(a, x)| Q::from_integer(a.clone()) * x)
        .sum::<Q>()
        + Q::from_integer(f.constant().clone())
}

/// Each facet is valid and tight on `d` affinely independent vertices.
fn assert_facets_valid(v: &VPolytope, h: &HPolytope) {
    let d = affine_dimension(v);
    let verts = vertex_coords(v);
    for f in h.inequalities() {
        let vals: Vec<Q> = verts.iter().map(|p| eval(f, p)).collect();
        assert!(vals.iter().all(|x| !x.is_negative()), "{f:?} cut off a vertex");
        let tight: Vec<Vec<Q>> = verts
            .iter()
            .zip(&vals)
            .filter(|(_, x)| x.is_zero())
            .map(|(p, _)| p.clone())
            .collect();
        assert!(affine_rank(&tight) + 1 >= d, "{f:?} is not a facet");
    }
}

/// Removing any facet admits a point the full list rejects.
fn assert_irredundant(v: &VPolytope, h: &HPolytope) {
    let verts = vertex_coords(v);
    let n = v.dimension();
    let facets = h.inequalities();
    let stride = facets.len().div_ceil(50);
    // Facet values are affine, so values at averages are averages of values.
    // Test polytopes have integer vertices, which keeps the table integral.
    let vals: Vec<Vec<i64>> = facets
        .iter()
        .map(|g| {
            verts
                .iter()
                .map(|p| {
                    let x = eval(g, p);
                    assert!(x.is_integer());
                    i64::try_from(x.to_integer()).unwrap()
                })
                .collect()
        })
        .collect();
    let mean = |g: usize, idx: &[usize]| qf(idx.iter().map(|&i| vals[g][i]).sum(), idx.len() as i64);
    let all: Vec<usize> = (0..verts.len()).collect();
    let centroid: Vec<Q> = (0..n)
        .map(|j| verts.iter().map(|p| p[j].clone()).sum::<Q>() / q(verts.len() as i64))
        .collect();
    facets.par_iter().enumerate().for_each(|(k, _)| {
        let tight: Vec<usize> = all.iter().copied().filter(|&i| vals[k][i] == 0).collect();
        let center: Vec<Q> = (0..n)
            .map(|j| tight.iter().map(|&i| verts[i][j].clone()).sum::<Q>() / q(tight.len() as i64))
            .collect();
        // Step outward from the facet center, less than halfway to any other facet.
        let mut t = q(1);
        for m in (0..facets.len()).filter(|&m| m != k) {
            let (gc, gg) = (mean(m, &tight), mean(m, &all));
            assert!(gc.is_positive(), "facet center lies on another facet");
            if gg > gc {
                let limit = &gc / (q(2) * (&gg - &gc));
                if limit < t {
                    t = limit;
                }
            }
        }
        let witness: Vec<Q> = center
            .iter()
            .zip(&centroid)
            .map(|(c, g)| c + &t * (c - g))
            .collect();
        let p = RationalPoint::new(witness);
        assert!(!membership_by_facets(h, &p).unwrap());
        assert!(membership_by_facets(&h.without_inequality(k), &p).unwrap());
        // The LP cross-check is slow; sample it on large facet lists.
        if k % stride == 0 {
            assert!(!membership_by_lp(v, &p).unwrap());
        }
    });
}

#[test]
fn conjunction_matches_brute_force() {
    let v = polytope_of(&conjunction());
    let h = facet_enumeration(&v).unwrap();
    assert_eq!(keyed(&h), brute_force_facets(&vertex_coords(&v)));
    let labels: Vec<String> = ["p1", "p2", "p3"].iter().map(|s| s.to_string()).collect();
    let rendered: Vec<String> = h.inequalities().iter().map(|f| f.render(&labels)).collect();
    assert_eq!(
        rendered,
        vec!["-p1 - p2 + p3 + 1 >= 0", "p3 >= 0", "p2 - p3 >= 0", "p1 - p3 >= 0"]
    );
    assert_facets_valid(&v, &h);
    assert_irredundant(&v, &h);
}

#[test]
fn tetrahedron_fixture() {
    let v = VPolytope::from_int_rows(&[
        vec![1, 1, 1],
        vec![1, -1, -1],
        vec![-1, 1, -1],
        vec![-1, -1, 1],
    ])
    .unwrap();
    let h = facet_enumeration(&v).unwrap();
    assert_eq!(keyed(&h), brute_force_facets(&vertex_coords(&v)));
    let expected: Vec<LinearInequality> = [[-1, -1, 1], [-1, 1, -1], [1, -1, -1], [1, 1, 1]]
        .iter()
        .map(|c| LinearInequality::from_ints(c, 1).unwrap())
        .collect();
    assert_eq!(h.inequalities(), expected.as_slice());
    assert_irredundant(&v, &h);
}

#[test]
fn chsh_polytope_fixture() {
    let sys = bell_scenario(2, 2).unwrap();
    let v = polytope_of(&sys);
    assert_eq!(v.vertices().len(), 16);
    assert_eq!(affine_dimension(&v), 8);
    let h = facet_enumeration(&v).unwrap();
    assert_eq!(h.inequalities().len(), 24);
    assert!(h.equalities().is_empty());
    assert_eq!(keyed(&h), brute_force_facets(&vertex_coords(&v)));

    let kinds: Vec<FacetKind> = h.inequalities().iter().map(|f| bell_facet_kind(2, f)).collect();
    let count = |k| kinds.iter().filter(|&&x| x == k).count();
    assert_eq!(count(FacetKind::Trivial), 16);
    assert_eq!(count(FacetKind::ClauserHorne), 8);
    assert_eq!(count(FacetKind::OtherBell), 0);

    // The textbook CH form: p11 + p12 + p21 - p22 - pA1 - pB1 <= 0.
    let ch = LinearInequality::from_ints(&[1, 0, 1, 0, -1, -1, -1, 1], 0).unwrap();
    assert!(h.inequalities().contains(&ch));
    assert_facets_valid(&v, &h);
    assert_irredundant(&v, &h);
}

#[test]
fn three_setting_polytope_fixture() {
    let sys = bell_scenario(2, 3).unwrap();
    let v = polytope_of(&sys);
    assert_eq!(v.vertices().len(), 64);
    assert_eq!(affine_dimension(&v), 15);
    let limits = Limits {
        max_vertices: 64,
        max_dim: 15,
        ..Limits::default()
    };
    let h = facet_enumeration_with_limits(&v, &limits).unwrap();
    // 36 trivial, 72 Clauser-Horne liftings and 576 of the I3322 class.
    assert_eq!(h.inequalities().len(), 684);
    let kinds: Vec<FacetKind> = h.inequalities().iter().map(|f| bell_facet_kind(3, f)).collect();
    let count = |k| kinds.iter().filter(|&&x| x == k).count();
    assert_eq!(count(FacetKind::Trivial), 36);
    assert_eq!(count(FacetKind::ClauserHorne), 72);
    assert_eq!(count(FacetKind::OtherBell), 576);
    assert_facets_valid(&v, &h);
    assert_irredundant(&v, &h);
}

#[test]
fn default_limits_reject_three_settings() {
    let v = polytope_of(&bell_scenario(2, 3).unwrap());
    assert!(facet_enumeration(&v).is_err());
}

fn random_rational(rng: &mut impl Rng, lo: i64, hi: i64) -> Rational {
    let d = rng.random_range(1..=12i64);
    rational::frac(rng.random_range(lo * d..=hi * d), d)
}

/// Random vertex sets in dimensions 2..=8, some of them flat.
fn random_polytopes(seed: u64) -> Vec<VPolytope> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for n in 2..=8usize {
        for flat in [false, true] {
            let count = rng.random_range(n + 1..=20);
            let rows: Vec<Vec<i64>> = (0..count)
                .map(|_| {
                    let mut r: Vec<i64> = (0..n).map(|_| rng.random_range(0..=3)).collect();
                    if flat {
                        r[n - 1] = r[0] - r[1];
                    }
                    r
                })
                .collect();
            out.push(VPolytope::from_int_rows(&rows).unwrap());
        }
    }
    out
}

fn probe_points(v: &VPolytope, rng: &mut impl Rng, count: usize) -> Vec<RationalPoint> {
    let n = v.dimension();
    (0..count)
        .map(|i| {
            if i % 2 == 0 {
                RationalPoint::new((0..n).map(|_| random_rational(rng, -1, 4)).collect())
            } else {
                // Convex combination of two vertices, nudged off it half the time.
                let a = &v.vertices()[rng.random_range(0..v.vertices().len())];
                let b = &v.vertices()[rng.random_range(0..v.vertices().len())];
                let t = random_rational(rng, 0, 1);
                let mut c: Vec<Rational> = a
                    .coords()
                    .iter()
                    .zip(b.coords())
                    .map(|(x, y)| x * &t + y * (rational::int(1) - &t))
                    .collect();
                if rng.random_bool(0.5) {
                    let j = rng.random_range(0..n);
                    c[j] += rational::frac(rng.random_range(-2..=2), 7);
                }
                RationalPoint::new(c)
            }
        })
        .collect()
}

#[test]
fn facets_agree_with_lp_on_random_polytopes() {
    for (i, v) in random_polytopes(2024).into_iter().enumerate() {
        let h = facet_enumeration(&v).unwrap();
        assert_facets_valid(&v, &h);
        let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
        let points = probe_points(&v, &mut rng, 1000);
        let disagreements = points
            .par_iter()
            .filter(|p| membership_by_facets(&h, p).unwrap() != membership_by_lp(&v, p).unwrap())
            .count();
        assert_eq!(disagreements, 0, "polytope {i}");
    }
}

proptest! {
    #[test]
    fn canonical_form_is_idempotent(
        coeffs in prop::collection::vec(-20i64..=20, 1..6),
        constant in -20i64..=20,
        scale in 1i64..=9,
    ) {
        prop_assume!(coeffs.iter().any(|&c| c != 0));
        let f = LinearInequality::from_ints(&coeffs, constant).unwrap();
        let back: Vec<Rational> = f.coefficients().iter().map(|c| Rational::from_integer(c.clone())).collect();
        let again = LinearInequality::new(&back, &Rational::from_integer(f.constant().clone())).unwrap();
        prop_assert_eq!(&again, &f);

        let scaled: Vec<Rational> = coeffs.iter().map(|&c| rational::frac(c * scale, 7)).collect();
        let g = LinearInequality::new(&scaled, &rational::frac(constant * scale, 7)).unwrap();
        prop_assert_eq!(&g, &f);
    }

    #[test]
    fn vertices_are_members(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 1..10)) {
        let v = VPolytope::from_int_rows(&rows).unwrap();
        let h = facet_enumeration(&v).unwrap();
        for p in v.vertices() {
            prop_assert!(membership_by_facets(&h, p).unwrap());
            prop_assert!(membership_by_lp(&v, p).unwrap());
        }
    }

    #[test]
    fn lp_matches_facets_in_the_plane(
        rows in prop::collection::vec(prop::collection::vec(0i64..=4, 2), 1..8),
        x in -1i64..=10, y in -1i64..=10,
    ) {
        let v = VPolytope::from_int_rows(&rows).unwrap();
        let h = facet_enumeration(&v).unwrap();
        let p = RationalPoint::new(vec![rational::frac(x, 2), rational::frac(y, 2)]);
        prop_assert_eq!(membership_by_facets(&h, &p).unwrap(), membership_by_lp(&v, &p).unwrap());
    }
}
