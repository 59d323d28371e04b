//! Incremental 3D convex hull over floating-point points with exact
//! orientation predicates.

use std::collections::{HashMap, HashSet};

// Faces thinner than this (normal length over squared longest edge) are
// tested with the exact predicate instead of a float plane.
const SLIVER: f64 = 1e-9;
const PREFILTER_DIRECTIONS: usize = 256;

fn orient(a: [f64; 3], b: [f64; 3], c: [f64; 3], d: [f64; 3]) -> f64 {
    let p = |v: [f64; 3]| robust::Coord3D {
        x: v[0],
        y: v[1],
        z: v[2],
    };
    // Positive when `d` lies on the inner side of the counterclockwise face abc.
    robust::orient3d(p(a), p(b), p(c), p(d))
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[derive(Debug, Clone)]
enum Plane {
    Float([f64; 3], f64),
    Sliver([[f64; 3]; 3]),
}

/// Faces grouped by the cube-map cells their cones (seen from an interior
/// center) touch, so a query only tests the faces around its direction.
#[derive(Debug, Clone)]
struct DirectionIndex {
    center: [f64; 3],
    grid: usize,
    cells: Vec<Vec<u32>>,
}

impl DirectionIndex {
    fn new(points: &[[f64; 3]], faces: &[[usize; 3]]) -> Self {
        let mut verts: Vec<usize> = faces.iter().flatten().copied().collect();
        verts.sort_unstable();
        verts.dedup();
        let mut center = [0.0; 3];
        for &i in &verts {
            for k in 0..3 {
                center[k] += points[i][k] / verts.len() as f64;
            }
        }
        let grid = ((faces.len() as f64 / 6.0).sqrt().ceil() as usize).clamp(1, 128);
        let mut cells = vec![Vec::new(); 6 * grid * grid];
        for (fi, &[a, b, c]) in faces.iter().enumerate() {
            let tri = [sub(points[a], center), sub(points[b], center), sub(points[c], center)];
            for side in 0..6 {
                let (axis, sign) = (side / 2, if side % 2 == 0 { 1.0 } else { -1.0 });
                let (j, k) = ((axis + 1) % 3, (axis + 2) % 3);
                let mut poly = tri.to_vec();
                for (o, t) in [(j, 1.0), (j, -1.0), (k, 1.0), (k, -1.0)] {
                    let mut h = [0.0; 3];
                    h[axis] = sign;
                    h[o] = -t;
                    poly = clip(&poly, h);
                    if poly.is_empty() {
                        break;
                    }
                }
                if poly.is_empty() {
                    continue;
                }
                let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
                for v in &poly {
                    let uv = [v[j] / (sign * v[axis]), v[k] / (sign * v[axis])];
                    for d in 0..2 {
                        lo[d] = lo[d].min(uv[d]);
                        hi[d] = hi[d].max(uv[d]);
                    }
                }
                let range = |l: f64, h: f64| {
                    let g = grid as f64;
                    let from = (((l + 1.0) / 2.0 * g) - 1e-6).floor().max(0.0) as usize;
                    let to = (((h + 1.0) / 2.0 * g) + 1e-6).floor().min(g - 1.0) as usize;
                    from..=to
                };
                for u in range(lo[0], hi[0]) {
                    for v in range(lo[1], hi[1]) {
                        cells[(side * grid + u) * grid + v].push(fi as u32);
                    }
                }
            }
        }
        DirectionIndex {
            center,
            grid,
            cells,
        }
    }

    fn cell(&self, q: [f64; 3]) -> Option<&[u32]> {
        let d = sub(q, self.center);
        let axis = (0..3).max_by(|&i, &j| d[i].abs().total_cmp(&d[j].abs())).unwrap();
        if d[axis] == 0.0 {
            return None;
        }
        let sign = d[axis].signum();
        let side = 2 * axis + usize::from(sign < 0.0);
        let (j, k) = ((axis + 1) % 3, (axis + 2) % 3);
        let g = self.grid as f64;
        let idx = |x: f64| (((x / (sign * d[axis]) + 1.0) / 2.0 * g).floor().clamp(0.0, g - 1.0)) as usize;
        Some(&self.cells[(side * self.grid + idx(d[j])) * self.grid + idx(d[k])])
    }
}

// Sutherland-Hodgman clip of a planar polygon against `h . v >= 0`.
fn clip(poly: &[[f64; 3]], h: [f64; 3]) -> Vec<[f64; 3]> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        let (dp, dq) = (dot(h, p), dot(h, q));
        if dp >= 0.0 {
            out.push(p);
        }
        if (dp >= 0.0) != (dq >= 0.0) {
            let t = dp / (dp - dq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]), p[2] + t * (q[2] - p[2])]);
        }
    }
    out
}

/// Triangulated convex hull with outward-facing counterclockwise faces.
#[derive(Debug, Clone)]
pub struct ConvexHull3 {
    points: Vec<[f64; 3]>,
    faces: Vec<[usize; 3]>,
    planes: Vec<Plane>,
    index: DirectionIndex,
}

/// Roughly uniform unit directions on the sphere.
fn fibonacci_directions(n: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

fn support_indices(points: &[[f64; 3]], idx: &[usize], dirs: &[[f64; 3]]) -> Vec<usize> {
    let mut out: Vec<usize> = dirs
        .iter()
        .map(|&u| {
            *idx.iter()
                .max_by(|&&i, &&j| dot(u, points[i]).total_cmp(&dot(u, points[j])))
                .unwrap()
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn strictly_inside(tris: &[[[f64; 3]; 3]], q: [f64; 3]) -> bool {
    tris.iter().all(|&[a, b, c]| orient(a, b, c, q) > 0.0)
}

fn triangles(points: &[[f64; 3]], faces: &[[usize; 3]]) -> Vec<[[f64; 3]; 3]> {
    faces
        .iter()
        .map(|&[a, b, c]| [points[a], points[b], points[c]])
        .collect()
}

impl ConvexHull3 {
    /// `None` when the points do not span three dimensions.
    pub fn new(points: &[[f64; 3]]) -> Option<Self> {
        if points.len() < 4 || points.iter().flatten().any(|x| !x.is_finite()) {
            return None;
        }
        let all: Vec<usize> = (0..points.len()).collect();
        let mut candidates = all.clone();
        if points.len() > 4 * PREFILTER_DIRECTIONS {
            // Points strictly inside the hull of a few extreme points cannot be vertices.
            let sup = support_indices(points, &all, &fibonacci_directions(PREFILTER_DIRECTIONS));
            if let Some(inner) = build(points, &sup) {
                let tris = triangles(points, &inner);
                candidates.retain(|&i| !strictly_inside(&tris, points[i]));
            }
        }
        let faces = build(points, &candidates)?;

        let planes = faces
            .iter()
            .map(|&[a, b, c]| {
                let (pa, pb, pc) = (points[a], points[b], points[c]);
                let n = cross(sub(pb, pa), sub(pc, pa));
                let len = dot(n, n).sqrt();
                let scale = [sub(pb, pa), sub(pc, pb), sub(pa, pc)]
                    .iter()
                    .map(|&e| dot(e, e))
                    .fold(0.0, f64::max);
                if len <= SLIVER * scale {
                    Plane::Sliver([pa, pb, pc])
                } else {
                    let n = [n[0] / len, n[1] / len, n[2] / len];
                    Plane::Float(n, dot(n, pa))
                }
            })
            .collect();

        let index = DirectionIndex::new(points, &faces);
        Some(ConvexHull3 {
            points: points.to_vec(),
            faces,
            planes,
            index,
        })
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    /// Indices of points used by some face, ascending.
    pub fn vertex_indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.faces.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Membership with an absolute distance tolerance to the face planes
    /// around the direction of `q`.
    /// Sliver faces are decided exactly and ignore the tolerance.
    pub fn contains(&self, q: [f64; 3], tol: f64) -> bool {
        let test = |p: &Plane| match p {
            Plane::Float(n, off) => dot(*n, q) - off <= tol,
            Plane::Sliver([a, b, c]) => orient(*a, *b, *c, q) >= 0.0,
        };
        match self.index.cell(q) {
            Some(cell) => cell.iter().all(|&f| test(&self.planes[f as usize])),
            None => true,
        }
    }

    pub fn volume(&self) -> f64 {
        self.faces
            .iter()
            .map(|&[a, b, c]| dot(self.points[a], cross(self.points[b], self.points[c])))
            .sum::<f64>()
            / 6.0
    }
}

fn argmax(points: &[[f64; 3]], idx: &[usize], f: impl Fn([f64; 3]) -> f64) -> usize {
    let mut best = idx[0];
    let mut best_v = f64::NEG_INFINITY;
    for &i in idx {
        let v = f(points[i]);
        if v > best_v {
            best = i;
            best_v = v;
        }
    }
    best
}

/// Outward counterclockwise faces of the hull of `points[idx]`.
fn build(points: &[[f64; 3]], idx: &[usize]) -> Option<Vec<[usize; 3]>> {
    if idx.len() < 4 {
        return None;
    }
    let i0 = *idx
        .iter()
        .min_by(|&&i, &&j| points[i].partial_cmp(&points[j]).unwrap())
        .unwrap();
    let i1 = argmax(points, idx, |p| {
        let d = sub(p, points[i0]);
        dot(d, d)
    });
    let axis = sub(points[i1], points[i0]);
    let i2 = argmax(points, idx, |p| {
        let c = cross(axis, sub(p, points[i0]));
        dot(c, c)
    });
    let i3 = argmax(points, idx, |p| orient(points[i0], points[i1], points[i2], p).abs());
    if orient(points[i0], points[i1], points[i2], points[i3]) == 0.0 {
        return None;
    }

    let mut hull = Builder {
        points,
        faces: Vec::new(),
        alive: Vec::new(),
        outside: Vec::new(),
        edges: HashMap::new(),
    };
    let seed = [i0, i1, i2, i3];
    for skip in 0..4 {
        let f: Vec<usize> = (0..4).filter(|&k| k != skip).map(|k| seed[k]).collect();
        let (a, b, c) = (f[0], f[1], f[2]);
        if orient(points[a], points[b], points[c], points[seed[skip]]) > 0.0 {
            hull.add([a, b, c]);
        } else {
            hull.add([a, c, b]);
        }
    }
    let rest: Vec<usize> = idx.iter().copied().filter(|i| !seed.contains(i)).collect();
    hull.assign(&rest, &[0, 1, 2, 3]);

    let mut stack: Vec<usize> = (0..4).collect();
    while let Some(f) = stack.pop() {
        if !hull.alive[f] || hull.outside[f].is_empty() {
            continue;
        }
        let pi = hull.farthest(f);
        let p = points[pi];

        let mut visible = vec![f];
        let mut seen: HashSet<usize> = HashSet::from([f]);
        let mut k = 0;
        while k < visible.len() {
            let [a, b, c] = hull.faces[visible[k]];
            for (u, v) in [(a, b), (b, c), (c, a)] {
                let g = hull.edges[&(v, u)];
                if !seen.contains(&g) {
                    let [x, y, z] = hull.faces[g];
                    if orient(points[x], points[y], points[z], p) < 0.0 {
                        seen.insert(g);
                        visible.push(g);
                    }
                }
            }
            k += 1;
        }

        let mut horizon = Vec::new();
        let mut orphans = Vec::new();
        for &v in &visible {
            let [a, b, c] = hull.faces[v];
            for (u, w) in [(a, b), (b, c), (c, a)] {
                if !seen.contains(&hull.edges[&(w, u)]) {
                    horizon.push((u, w));
                }
            }
            orphans.extend(hull.outside[v].drain(..).filter(|&q| q != pi));
        }
        for &v in &visible {
            let [a, b, c] = hull.faces[v];
            hull.alive[v] = false;
            for e in [(a, b), (b, c), (c, a)] {
                hull.edges.remove(&e);
            }
        }
        let new: Vec<usize> = horizon.into_iter().map(|(a, b)| hull.add([a, b, pi])).collect();
        hull.assign(&orphans, &new);
        stack.extend(new);
    }

    Some(
        (0..hull.faces.len())
            .filter(|&k| hull.alive[k])
            .map(|k| hull.faces[k])
            .collect(),
    )
}

struct Builder<'a> {
    points: &'a [[f64; 3]],
    faces: Vec<[usize; 3]>,
    alive: Vec<bool>,
    outside: Vec<Vec<usize>>,
    edges: HashMap<(usize, usize), usize>,
}

impl Builder<'_> {
    fn add(&mut self, f: [usize; 3]) -> usize {
        let k = self.faces.len();
        let [a, b, c] = f;
        for e in [(a, b), (b, c), (c, a)] {
            self.edges.insert(e, k);
        }
        self.faces.push(f);
        self.alive.push(true);
        self.outside.push(Vec::new());
        k
    }

    fn depth(&self, f: usize, q: usize) -> f64 {
        let [a, b, c] = self.faces[f];
        orient(self.points[a], self.points[b], self.points[c], self.points[q])
    }

    // Points seeing none of `faces` are inside and dropped.
    fn assign(&mut self, pts: &[usize], faces: &[usize]) {
        for &q in pts {
            if let Some(&f) = faces.iter().find(|&&f| self.depth(f, q) < 0.0) {
                self.outside[f].push(q);
            }
        }
    }

    fn farthest(&self, f: usize) -> usize {
        *self.outside[f]
            .iter()
            .min_by(|&&p, &&q| self.depth(f, p).total_cmp(&self.depth(f, q)))
            .unwrap()
    }
}
