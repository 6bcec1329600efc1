//! Winding numbers, planar arrangements and the area invariant
//! `J(i, j) = ∫ w_i w_j dA` of closed polygonal curves, in exact rationals.
//!
//! The arrangement is built by cutting the plane into vertical slabs at every
//! vertex and crossing abscissa. Inside a slab no two edges cross, so the
//! regions between consecutive edges are trapezoids with constant winding
//! vector; trapezoids that touch across a slab boundary with the same winding
//! vector are glued into faces.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::charges::ChargeSystem;
use crate::exec::Exec;
use crate::rational::{fmt_q, from_f64, parse_q, parse_q_list, q, qf, to_f64, Q};

pub type Point2 = [Q; 2];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlanarError {
    #[error("a closed curve needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("zero-length edge at vertex {0}")]
    DegenerateEdge(usize),
    #[error("non-finite coordinate at vertex {0}")]
    NonFinite(usize),
    #[error("point ({x}, {y}) lies on the curve")]
    PointOnCurve { x: String, y: String },
    #[error("non-generic curve {curve} at ({x}, {y}): {reason}")]
    NonGeneric { curve: usize, x: String, y: String, reason: &'static str },
}

fn non_generic(curve: usize, p: &Point2, reason: &'static str) -> PlanarError {
    PlanarError::NonGeneric { curve, x: fmt_q(&p[0]), y: fmt_q(&p[1]), reason }
}

/// Twice the signed area of the triangle `abc`.
pub fn orient(a: &Point2, b: &Point2, c: &Point2) -> Q {
    (&b[0] - &a[0]) * (&c[1] - &a[1]) - (&b[1] - &a[1]) * (&c[0] - &a[0])
}

fn on_segment(a: &Point2, b: &Point2, p: &Point2) -> bool {
    orient(a, b, p).is_zero()
        && a[0].clone().min(b[0].clone()) <= p[0]
        && p[0] <= a[0].clone().max(b[0].clone())
        && a[1].clone().min(b[1].clone()) <= p[1]
        && p[1] <= a[1].clone().max(b[1].clone())
}

/// How two closed segments meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Contact {
    None,
    /// Interiors cross transversally at this point.
    Crossing(Point2),
    /// Any other contact; carries one contact point.
    Touching(Point2),
}

pub fn segment_contact(a: &Point2, b: &Point2, c: &Point2, d: &Point2) -> Contact {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if (&d1 * &d2).is_negative() && (&d3 * &d4).is_negative() {
        let t = &d1 / (&d1 - &d2);
        let p = [&a[0] + (&b[0] - &a[0]) * &t, &a[1] + (&b[1] - &a[1]) * &t];
        return Contact::Crossing(p);
    }
    for (s0, s1, p) in [(c, d, a), (c, d, b), (a, b, c), (a, b, d)] {
        if on_segment(s0, s1, p) {
            return Contact::Touching(p.clone());
        }
    }
    Contact::None
}

/// A closed polygon in the plane; orientation is the vertex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyCurve2 {
    vertices: Vec<Point2>,
}

impl PolyCurve2 {
    pub fn new(vertices: Vec<Point2>) -> Result<Self, PlanarError> {
        let n = vertices.len();
        if n < 3 {
            return Err(PlanarError::TooFewVertices(n));
        }
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(PlanarError::DegenerateEdge(i));
            }
        }
        Ok(PolyCurve2 { vertices })
    }

    pub fn from_ints(vertices: &[[i64; 2]]) -> Result<Self, PlanarError> {
        Self::new(vertices.iter().map(|&[x, y]| [q(x), q(y)]).collect())
    }

    /// Floating vertices are converted exactly.
    pub fn from_f64(vertices: &[[f64; 2]]) -> Result<Self, PlanarError> {
        let mut out = Vec::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            match (from_f64(v[0]), from_f64(v[1])) {
                (Some(x), Some(y)) => out.push([x, y]),
                _ => return Err(PlanarError::NonFinite(i)),
            }
        }
        Self::new(out)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge(&self, i: usize) -> (&Point2, &Point2) {
        (&self.vertices[i], &self.vertices[(i + 1) % self.vertices.len()])
    }

    pub fn reversed(&self) -> Self {
        let mut v = self.vertices.clone();
        v.reverse();
        PolyCurve2 { vertices: v }
    }

    pub fn repeated(&self, k: usize) -> Self {
        PolyCurve2 { vertices: (0..k.max(1)).flat_map(|_| self.vertices.iter().cloned()).collect() }
    }

    pub fn translated(&self, dx: &Q, dy: &Q) -> Self {
        PolyCurve2 { vertices: self.vertices.iter().map(|[x, y]| [x + dx, y + dy]).collect() }
    }

    /// Shoelace area, i.e. `∫ w dA` counted with multiplicity.
    pub fn signed_area(&self) -> Q {
        let s: Q = (0..self.edge_count())
            .map(|i| {
                let (a, b) = self.edge(i);
                &a[0] * &b[1] - &b[0] * &a[1]
            })
            .sum();
        s * qf(1, 2)
    }

    /// Self-intersections must be transversal double points in edge interiors.
    pub fn check_generic(&self, curve: usize) -> Result<(), PlanarError> {
        let n = self.edge_count();
        let mut crossings: Vec<Point2> = Vec::new();
        for i in 0..n {
            let (a, b) = self.edge(i);
            // consecutive edges meet at a shared vertex; they must not fold back
            let (_, c) = self.edge((i + 1) % n);
            if orient(a, b, c).is_zero() {
                let dot = (&b[0] - &a[0]) * (&c[0] - &b[0]) + (&b[1] - &a[1]) * (&c[1] - &b[1]);
                if dot.is_negative() {
                    return Err(non_generic(curve, b, "edges fold back onto each other"));
                }
            }
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (c, d) = self.edge(j);
                match segment_contact(a, b, c, d) {
                    Contact::None => {}
                    Contact::Crossing(p) => {
                        if crossings.contains(&p) {
                            return Err(non_generic(curve, &p, "three or more strands meet"));
                        }
                        crossings.push(p);
                    }
                    Contact::Touching(p) => return Err(non_generic(curve, &p, "tangential or vertex contact")),
                }
            }
        }
        Ok(())
    }
}

/// Crossing-count winding number of `c` around `p`.
pub fn winding_number(c: &PolyCurve2, p: &Point2) -> Result<i64, PlanarError> {
    let mut w = 0;
    for i in 0..c.edge_count() {
        let (a, b) = c.edge(i);
        if on_segment(a, b, p) {
            return Err(PlanarError::PointOnCurve { x: fmt_q(&p[0]), y: fmt_q(&p[1]) });
        }
        if a[1] <= p[1] {
            if b[1] > p[1] && orient(a, b, p).is_positive() {
                w += 1;
            }
        } else if b[1] <= p[1] && orient(a, b, p).is_negative() {
            w -= 1;
        }
    }
    Ok(w)
}

/// A bounded face of the arrangement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub area: Q,
    pub winding: Vec<i64>,
    /// A point in the interior of the face.
    pub sample: Point2,
}

/// Bounded faces of the overlay of all curves; the single unbounded face has
/// winding vector zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    faces: Vec<Face>,
    curve_count: usize,
}

impl Arrangement {
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// Bounded faces plus the unbounded one.
    pub fn face_count(&self) -> usize {
        self.faces.len() + 1
    }

    pub fn curve_count(&self) -> usize {
        self.curve_count
    }

    pub fn unbounded_winding(&self) -> Vec<i64> {
        vec![0; self.curve_count]
    }

    /// `sum_faces area * w_i`; equals the shoelace area of curve `i`.
    pub fn weighted_area(&self, i: usize) -> Q {
        self.faces.iter().map(|f| &f.area * q(f.winding[i])).sum()
    }
}

struct Edge {
    a: Point2,
    b: Point2,
    curve: usize,
}

impl Edge {
    fn y_at(&self, x: &Q) -> Q {
        &self.a[1] + (&self.b[1] - &self.a[1]) * (x - &self.a[0]) / (&self.b[0] - &self.a[0])
    }

    fn direction(&self) -> i64 {
        if self.b[0] > self.a[0] {
            1
        } else {
            -1
        }
    }
}

/// One trapezoid of a slab; `None` bounds are infinite.
struct Piece {
    lo: Option<(Q, Q, Q)>,
    hi: Option<(Q, Q, Q)>,
    winding: Vec<i64>,
}

impl Piece {
    fn unbounded(&self) -> bool {
        self.lo.is_none() || self.hi.is_none()
    }

    fn left(&self) -> (Option<&Q>, Option<&Q>) {
        (self.lo.as_ref().map(|t| &t.0), self.hi.as_ref().map(|t| &t.0))
    }

    fn right(&self) -> (Option<&Q>, Option<&Q>) {
        (self.lo.as_ref().map(|t| &t.2), self.hi.as_ref().map(|t| &t.2))
    }
}

/// Whether two vertical intervals (with infinite ends as `None`) overlap in positive length.
fn overlaps(a: (Option<&Q>, Option<&Q>), b: (Option<&Q>, Option<&Q>)) -> bool {
    let lo = match (a.0, b.0) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, y) => x.or(y),
    };
    let hi = match (a.1, b.1) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    match (lo, hi) {
        (Some(l), Some(h)) => l < h,
        _ => true,
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

pub fn build_arrangement(curves: &[PolyCurve2]) -> Result<Arrangement, PlanarError> {
    build_arrangement_with(curves, Exec::default())
}

pub fn build_arrangement_with(curves: &[PolyCurve2], exec: Exec) -> Result<Arrangement, PlanarError> {
    for (i, c) in curves.iter().enumerate() {
        c.check_generic(i)?;
    }
    let edges: Vec<Edge> = curves
        .iter()
        .enumerate()
        .flat_map(|(ci, c)| {
            (0..c.edge_count()).map(move |e| {
                let (a, b) = c.edge(e);
                Edge { a: a.clone(), b: b.clone(), curve: ci }
            })
        })
        .collect();
    let mut xs: Vec<Q> = edges.iter().map(|e| e.a[0].clone()).collect();
    let crossing_xs = exec.map_range(edges.len(), |i| {
        let mut out = Vec::new();
        for j in i + 1..edges.len() {
            if let Contact::Crossing(p) = segment_contact(&edges[i].a, &edges[i].b, &edges[j].a, &edges[j].b) {
                out.push(p[0].clone());
            }
        }
        out
    });
    xs.extend(crossing_xs.into_iter().flatten());
    xs.sort();
    xs.dedup();

    let n = curves.len();
    let slabs: Vec<Vec<Piece>> = exec.map_range(xs.len().saturating_sub(1), |k| {
        let (xl, xr) = (&xs[k], &xs[k + 1]);
        let xm = (xl + xr) * qf(1, 2);
        let mut spanning: Vec<(Q, Q, Q, &Edge)> = edges
            .iter()
            .filter(|e| {
                let (lo, hi) = if e.a[0] < e.b[0] { (&e.a[0], &e.b[0]) } else { (&e.b[0], &e.a[0]) };
                lo <= xl && xr <= hi && lo != hi
            })
            .map(|e| (e.y_at(xl), e.y_at(&xm), e.y_at(xr), e))
            .collect();
        spanning.sort_by(|a, b| a.1.cmp(&b.1));
        let mut pieces = Vec::new();
        let mut winding = vec![0i64; n];
        let mut below: Option<(Q, Q, Q)> = None;
        let mut i = 0;
        while i < spanning.len() {
            let boundary = (spanning[i].0.clone(), spanning[i].1.clone(), spanning[i].2.clone());
            pieces.push(Piece { lo: below.take(), hi: Some(boundary.clone()), winding: winding.clone() });
            // edges with equal mid-height coincide across the whole slab
            let mut j = i;
            while j < spanning.len() && spanning[j].1 == spanning[i].1 {
                winding[spanning[j].3.curve] += spanning[j].3.direction();
                j += 1;
            }
            below = Some(boundary);
            i = j;
        }
        debug_assert!(winding.iter().all(|&x| x == 0), "closed curves have zero winding far above");
        pieces.push(Piece { lo: below, hi: None, winding });
        pieces
    });

    // Index pieces and glue across slab boundaries.
    let offsets: Vec<usize> = slabs.iter().scan(1, |acc, s| Some(std::mem::replace(acc, *acc + s.len()))).collect();
    let total = offsets.last().map_or(1, |o| o + slabs.last().unwrap().len());
    let mut parent: Vec<usize> = (0..total).collect();
    const OUTER: usize = 0;
    for (k, slab) in slabs.iter().enumerate() {
        for (p, piece) in slab.iter().enumerate() {
            let id = offsets[k] + p;
            let open_left = k == 0 && piece.winding.iter().all(|&w| w == 0) && overlaps(piece.left(), piece.left());
            let open_right =
                k + 1 == slabs.len() && piece.winding.iter().all(|&w| w == 0) && overlaps(piece.right(), piece.right());
            if piece.unbounded() || open_left || open_right {
                union(&mut parent, id, OUTER);
            }
        }
        if let Some(next) = slabs.get(k + 1) {
            let (mut a, mut b) = (0, 0);
            while a < slab.len() && b < next.len() {
                let (pa, pb) = (&slab[a], &next[b]);
                if pa.winding == pb.winding && overlaps(pa.right(), pb.left()) {
                    union(&mut parent, offsets[k] + a, offsets[k + 1] + b);
                }
                // advance the piece whose top ends first at this abscissa
                let top_a = pa.right().1;
                let top_b = pb.left().1;
                match (top_a, top_b) {
                    (Some(ta), Some(tb)) if ta < tb => a += 1,
                    (Some(ta), Some(tb)) if tb < ta => b += 1,
                    (Some(_), None) => a += 1,
                    (None, Some(_)) => b += 1,
                    _ => {
                        a += 1;
                        b += 1;
                    }
                }
            }
        }
    }

    let mut faces: Vec<(usize, Face, Q)> = Vec::new();
    for (k, slab) in slabs.iter().enumerate() {
        let width = &xs[k + 1] - &xs[k];
        let xm = (&xs[k] + &xs[k + 1]) * qf(1, 2);
        for (p, piece) in slab.iter().enumerate() {
            if piece.unbounded() {
                continue;
            }
            let root = find(&mut parent, offsets[k] + p);
            if root == find(&mut parent, OUTER) {
                continue;
            }
            let (lo, hi) = (piece.lo.as_ref().unwrap(), piece.hi.as_ref().unwrap());
            let area = &width * ((&hi.0 - &lo.0) + (&hi.2 - &lo.2)) * qf(1, 2);
            if area.is_zero() {
                continue;
            }
            let sample = [xm.clone(), (&lo.1 + &hi.1) * qf(1, 2)];
            match faces.iter_mut().find(|(r, _, _)| *r == root) {
                Some((_, face, best)) => {
                    if area > *best {
                        face.sample = sample;
                        *best = area.clone();
                    }
                    face.area += area;
                }
                None => faces.push((root, Face { area: area.clone(), winding: piece.winding.clone(), sample }, area)),
            }
        }
    }
    Ok(Arrangement { faces: faces.into_iter().map(|(_, f, _)| f).collect(), curve_count: n })
}

/// `sum_faces area * w_i * w_j`.
pub fn j_invariant(arr: &Arrangement, i: usize, j: usize) -> Q {
    arr.faces.iter().map(|f| &f.area * q(f.winding[i] * f.winding[j])).sum()
}

/// `sum_{i,j} Tr(c_i, c_j) J(i, j)`, diagonal included.
pub fn ym_s0(arr: &Arrangement, charges: &ChargeSystem) -> Q {
    assert_eq!(arr.curve_count, charges.len(), "one charge per curve");
    let mut total = Q::zero();
    for i in 0..charges.len() {
        for j in 0..charges.len() {
            let pair = charges.pair(i, j);
            if !pair.is_zero() {
                total += pair * j_invariant(arr, i, j);
            }
        }
    }
    total
}

/// Area-preserving maps of the plane.
#[derive(Debug, Clone, PartialEq)]
pub enum AreaMap {
    /// `(x, y) -> (x + s y, y)`.
    Shear(Q),
    /// Rotation by the given fraction of a full turn, in floating point.
    Rotation(f64),
    /// `(x, y) -> (x + s(y), y)` with `s(y) = sum_k c_k y^k`.
    NonlinearShear(Vec<Q>),
}

impl AreaMap {
    pub fn is_linear(&self) -> bool {
        !matches!(self, AreaMap::NonlinearShear(_))
    }

    pub fn apply(&self, p: &Point2) -> Point2 {
        match self {
            AreaMap::Shear(s) => [&p[0] + s * &p[1], p[1].clone()],
            AreaMap::Rotation(turns) => {
                let (sin, cos) = (turns * std::f64::consts::TAU).sin_cos();
                let (x, y) = (to_f64(&p[0]), to_f64(&p[1]));
                let exact = |v: f64| from_f64(v).expect("finite");
                [exact(cos * x - sin * y), exact(sin * x + cos * y)]
            }
            AreaMap::NonlinearShear(c) => {
                let s = c.iter().rev().fold(Q::zero(), |acc, ck| acc * &p[1] + ck);
                [&p[0] + s, p[1].clone()]
            }
        }
    }
}

impl fmt::Display for AreaMap {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            AreaMap::Shear(s) => write!(f, "shear:{}", fmt_q(s)),
            AreaMap::Rotation(t) => write!(f, "rotate:{t}"),
            AreaMap::NonlinearShear(c) => {
                write!(f, "nlshear:{}", c.iter().map(fmt_q).collect::<Vec<_>>().join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown map {0:?}; expected shear:S, rotate:TURNS or nlshear:C0,C1,...")]
pub struct ParseMapError(pub String);

impl FromStr for AreaMap {
    type Err = ParseMapError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseMapError(s.to_string());
        let (kind, arg) = s.split_once(':').ok_or_else(err)?;
        match kind {
            "shear" => parse_q(arg).map(AreaMap::Shear).map_err(|_| err()),
            "rotate" | "rotation" => parse_q(arg).map(|t| AreaMap::Rotation(to_f64(&t))).map_err(|_| err()),
            "nlshear" => parse_q_list(arg).map(AreaMap::NonlinearShear).map_err(|_| err()),
            _ => Err(err()),
        }
    }
}

/// Image of `c` under `map`. Linear maps act on the vertices; nonlinear maps
/// act on `resample` equally spaced points per edge.
pub fn apply_area_preserving(c: &PolyCurve2, map: &AreaMap, resample: usize) -> Result<PolyCurve2, PlanarError> {
    let points: Vec<Point2> = if map.is_linear() {
        c.vertices.clone()
    } else {
        let m = resample.max(1);
        (0..c.edge_count())
            .flat_map(|e| {
                let (a, b) = c.edge(e);
                (0..m).map(move |k| {
                    let t = qf(k as i64, m as i64);
                    [&a[0] + (&b[0] - &a[0]) * &t, &a[1] + (&b[1] - &a[1]) * &t]
                })
            })
            .collect()
    };
    PolyCurve2::new(points.iter().map(|p| map.apply(p)).collect())
}

/// Moves every vertex by an independent offset in `[-eps, eps]^2`.
pub fn jittered(c: &PolyCurve2, eps: f64, seed: u64) -> Result<PolyCurve2, PlanarError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut offset = || from_f64(rng.random_range(-eps..=eps)).expect("finite");
    PolyCurve2::new(c.vertices.iter().map(|[x, y]| [x + offset(), y + offset()]).collect())
}

/// The unit square `[0,1]^2`, counter-clockwise.
pub fn unit_square() -> PolyCurve2 {
    PolyCurve2::from_ints(&[[0, 0], [1, 0], [1, 1], [0, 1]]).unwrap()
}

/// The unit square and its translate by `(1/2, 0)`.
pub fn offset_squares() -> Vec<PolyCurve2> {
    let a = unit_square();
    let b = a.translated(&qf(1, 2), &Q::zero());
    vec![a, b]
}

/// A figure eight crossing itself once at `(1, 1)`.
pub fn figure_eight() -> PolyCurve2 {
    PolyCurve2::from_ints(&[[0, 0], [2, 2], [2, 0], [0, 2]]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: Q, y: Q) -> Point2 {
        [x, y]
    }

    #[test]
    fn winding_examples() {
        let sq = unit_square();
        let c = pt(qf(1, 2), qf(1, 2));
        assert_eq!(winding_number(&sq, &c).unwrap(), 1);
        assert_eq!(winding_number(&sq, &pt(q(10), q(10))).unwrap(), 0);
        assert_eq!(winding_number(&sq.repeated(2), &c).unwrap(), 2);
        assert_eq!(winding_number(&sq.reversed(), &c).unwrap(), -1);
        assert!(winding_number(&sq, &pt(qf(1, 2), q(0))).is_err());
    }

    #[test]
    fn single_square() {
        let arr = build_arrangement(&[unit_square()]).unwrap();
        assert_eq!(arr.face_count(), 2);
        assert_eq!(arr.faces()[0].area, q(1));
        assert_eq!(arr.faces()[0].winding, vec![1]);
        assert_eq!(j_invariant(&arr, 0, 0), q(1));
    }

    #[test]
    fn offset_squares_faces() {
        let arr = build_arrangement(&offset_squares()).unwrap();
        let mut faces: Vec<(Vec<i64>, Q)> = arr.faces().iter().map(|f| (f.winding.clone(), f.area.clone())).collect();
        faces.sort();
        assert_eq!(
            faces,
            vec![(vec![0, 1], qf(1, 2)), (vec![1, 0], qf(1, 2)), (vec![1, 1], qf(1, 2))]
        );
        assert_eq!(j_invariant(&arr, 0, 1), qf(1, 2));
        assert_eq!(ym_s0(&arr, &ChargeSystem::unit(2, 1)), q(3));
    }

    #[test]
    fn figure_eight_faces() {
        let arr = build_arrangement(&[figure_eight()]).unwrap();
        let mut w: Vec<i64> = arr.faces().iter().map(|f| f.winding[0]).collect();
        w.sort();
        assert_eq!(w, vec![-1, 1]);
        assert_eq!(arr.weighted_area(0), figure_eight().signed_area());
        assert_eq!(figure_eight().signed_area(), q(0));
    }

    #[test]
    fn annulus_hole_is_bounded_face() {
        let outer = PolyCurve2::from_ints(&[[0, 0], [4, 0], [4, 4], [0, 4]]).unwrap();
        let inner = PolyCurve2::from_ints(&[[1, 1], [3, 1], [3, 3], [1, 3]]).unwrap().reversed();
        let arr = build_arrangement(&[outer, inner]).unwrap();
        assert_eq!(arr.faces().len(), 2);
        assert_eq!(arr.weighted_area(0), q(16));
        assert_eq!(arr.weighted_area(1), q(-4));
    }

    #[test]
    fn c_shape_concavity_joins_unbounded_face() {
        let c = PolyCurve2::from_ints(&[[0, 0], [3, 0], [3, 1], [1, 1], [1, 2], [3, 2], [3, 3], [0, 3]]).unwrap();
        let arr = build_arrangement(std::slice::from_ref(&c)).unwrap();
        assert_eq!(arr.faces().len(), 1);
        assert_eq!(arr.faces()[0].area, c.signed_area());
    }

    #[test]
    fn tangential_self_contact_is_rejected() {
        let c = PolyCurve2::from_ints(&[[0, 0], [2, 0], [1, 1], [2, 2], [0, 2], [1, 1]]);
        assert!(c.is_err() || build_arrangement(&[c.unwrap()]).is_err());
        let bowtie_at_vertex = PolyCurve2::from_ints(&[[0, 0], [2, 2], [2, 0], [1, 1], [0, 2]]).unwrap();
        assert!(matches!(
            build_arrangement(&[bowtie_at_vertex]),
            Err(PlanarError::NonGeneric { .. })
        ));
    }

    #[test]
    fn shear_keeps_j() {
        let curves = offset_squares();
        let m: AreaMap = "shear:1".parse().unwrap();
        let sheared: Vec<PolyCurve2> = curves.iter().map(|c| apply_area_preserving(c, &m, 1).unwrap()).collect();
        assert_eq!(j_invariant(&build_arrangement(&sheared).unwrap(), 0, 1), qf(1, 2));
    }

    #[test]
    fn map_syntax() {
        assert_eq!("nlshear:0,0,1/4".parse::<AreaMap>().unwrap(), AreaMap::NonlinearShear(vec![q(0), q(0), qf(1, 4)]));
        assert!("twist:1".parse::<AreaMap>().is_err());
    }
}
