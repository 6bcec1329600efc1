//! Gauss linking numbers of closed polygonal curves in space.

use std::f64::consts::PI;

use num_traits::Zero;

use crate::charges::ChargeSystem;
use crate::exec::{pairwise_sum, Exec};
use crate::rational::{q, qf, Q};

pub type Point3 = [f64; 3];

/// Minimum admissible distance between two curves.
pub const MIN_DISTANCE: f64 = 1e-9;
/// Largest accepted distance of the solid-angle sum from an integer.
pub const MAX_ROUNDING_DEFECT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinkError {
    #[error("a closed curve needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("zero-length edge at vertex {0}")]
    DegenerateEdge(usize),
    #[error("non-finite coordinate at vertex {0}")]
    NonFinite(usize),
    #[error("curves come within {distance:e} of each other (edges {edge_a} and {edge_b})")]
    TooClose { distance: f64, edge_a: usize, edge_b: usize },
    #[error("solid-angle sum {value} is not within {MAX_ROUNDING_DEFECT:e} of an integer")]
    RoundingDefect { value: f64 },
}

/// A closed polygon; the edge from the last vertex back to the first is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCurve3 {
    vertices: Vec<Point3>,
}

impl PolyCurve3 {
    pub fn new(vertices: Vec<Point3>) -> Result<Self, LinkError> {
        let n = vertices.len();
        if n < 3 {
            return Err(LinkError::TooFewVertices(n));
        }
        for (i, v) in vertices.iter().enumerate() {
            if v.iter().any(|x| !x.is_finite()) {
                return Err(LinkError::NonFinite(i));
            }
            if *v == vertices[(i + 1) % n] {
                return Err(LinkError::DegenerateEdge(i));
            }
        }
        Ok(PolyCurve3 { vertices })
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge(&self, i: usize) -> (Point3, Point3) {
        (self.vertices[i], self.vertices[(i + 1) % self.vertices.len()])
    }

    pub fn reversed(&self) -> Self {
        let mut v = self.vertices.clone();
        v.reverse();
        PolyCurve3 { vertices: v }
    }

    /// The same curve traversed `k` times.
    pub fn repeated(&self, k: usize) -> Self {
        PolyCurve3 { vertices: self.vertices.repeat(k.max(1)) }
    }

    /// `x -> R x + t` for a 3x3 matrix `R` given by rows.
    pub fn transformed(&self, r: &[[f64; 3]; 3], t: Point3) -> Self {
        let vertices = self
            .vertices
            .iter()
            .map(|v| std::array::from_fn(|i| r[i][0] * v[0] + r[i][1] * v[1] + r[i][2] * v[2] + t[i]))
            .collect();
        PolyCurve3 { vertices }
    }
}

fn sub(a: Point3, b: Point3) -> Point3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: Point3, b: Point3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: Point3, b: Point3) -> Point3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn norm(a: Point3) -> f64 {
    dot(a, a).sqrt()
}

fn unit(a: Point3) -> Option<Point3> {
    let n = norm(a);
    (n > 0.0).then(|| [a[0] / n, a[1] / n, a[2] / n])
}

/// Distance between segments `p0p1` and `q0q1`.
pub fn segment_distance(p0: Point3, p1: Point3, q0: Point3, q1: Point3) -> f64 {
    let d1 = sub(p1, p0);
    let d2 = sub(q1, q0);
    let r = sub(p0, q0);
    let a = dot(d1, d1);
    let e = dot(d2, d2);
    let f = dot(d2, r);
    let c = dot(d1, r);
    let b = dot(d1, d2);
    let denom = a * e - b * b;
    let mut s = if denom > 0.0 { ((b * f - c * e) / denom).clamp(0.0, 1.0) } else { 0.0 };
    let mut t = (b * s + f) / e;
    if t < 0.0 {
        t = 0.0;
        s = (-c / a).clamp(0.0, 1.0);
    } else if t > 1.0 {
        t = 1.0;
        s = ((b - c) / a).clamp(0.0, 1.0);
    }
    let cp = [p0[0] + d1[0] * s, p0[1] + d1[1] * s, p0[2] + d1[2] * s];
    let cq = [q0[0] + d2[0] * t, q0[1] + d2[1] * t, q0[2] + d2[2] * t];
    norm(sub(cp, cq))
}

/// Smallest distance between the two curves and the edge pair attaining it.
pub fn min_distance(c1: &PolyCurve3, c2: &PolyCurve3) -> (f64, usize, usize) {
    let mut best = (f64::INFINITY, 0, 0);
    for i in 0..c1.edge_count() {
        let (p0, p1) = c1.edge(i);
        for j in 0..c2.edge_count() {
            let (q0, q1) = c2.edge(j);
            let d = segment_distance(p0, p1, q0, q1);
            if d < best.0 {
                best = (d, i, j);
            }
        }
    }
    best
}

/// Signed solid angle of the quadrilateral spanned by two segments, as seen in
/// the Gauss integral over `p0p1 x q0q1`, divided by `4 pi`.
pub fn edge_pair_linking(p0: Point3, p1: Point3, q0: Point3, q1: Point3) -> f64 {
    let r13 = sub(q0, p0);
    let r14 = sub(q1, p0);
    let r23 = sub(q0, p1);
    let r24 = sub(q1, p1);
    let normals = [cross(r13, r14), cross(r14, r24), cross(r24, r23), cross(r23, r13)];
    let Some(n) = normals.iter().map(|&v| unit(v)).collect::<Option<Vec<_>>>() else {
        // coplanar segments subtend no solid angle
        return 0.0;
    };
    let omega: f64 = (0..4).map(|k| dot(n[k], n[(k + 1) % 4]).clamp(-1.0, 1.0).asin()).sum();
    let orientation = dot(cross(sub(q1, q0), sub(p1, p0)), r13);
    if orientation == 0.0 {
        return 0.0;
    }
    omega.copysign(orientation) / (4.0 * PI)
}

/// Unrounded solid-angle sum over all edge pairs.
pub fn linking_sum(c1: &PolyCurve3, c2: &PolyCurve3, exec: Exec) -> f64 {
    let rows = exec.map_range(c1.edge_count(), |i| {
        let (p0, p1) = c1.edge(i);
        let terms: Vec<f64> = (0..c2.edge_count())
            .map(|j| {
                let (q0, q1) = c2.edge(j);
                edge_pair_linking(p0, p1, q0, q1)
            })
            .collect();
        pairwise_sum(&terms)
    });
    pairwise_sum(&rows)
}

pub fn linking_number_exact(c1: &PolyCurve3, c2: &PolyCurve3) -> Result<i64, LinkError> {
    linking_number_exact_with(c1, c2, Exec::default())
}

pub fn linking_number_exact_with(c1: &PolyCurve3, c2: &PolyCurve3, exec: Exec) -> Result<i64, LinkError> {
    let (distance, edge_a, edge_b) = min_distance(c1, c2);
    if distance <= MIN_DISTANCE {
        return Err(LinkError::TooClose { distance, edge_a, edge_b });
    }
    let value = linking_sum(c1, c2, exec);
    let rounded = value.round();
    if (value - rounded).abs() >= MAX_ROUNDING_DEFECT {
        return Err(LinkError::RoundingDefect { value });
    }
    Ok(rounded as i64)
}

/// Midpoint rule for `(1/4pi) ∮∮ (x - y) . (dx × dy) / |x - y|^3`.
pub fn linking_number_quadrature(c1: &PolyCurve3, c2: &PolyCurve3, samples_per_edge: usize, exec: Exec) -> f64 {
    let m = samples_per_edge.max(1);
    let sample = |c: &PolyCurve3| -> Vec<(Point3, Point3)> {
        (0..c.edge_count())
            .flat_map(|e| {
                let (a, b) = c.edge(e);
                let d = sub(b, a);
                let h = 1.0 / m as f64;
                (0..m).map(move |k| {
                    let t = (k as f64 + 0.5) * h;
                    ([a[0] + d[0] * t, a[1] + d[1] * t, a[2] + d[2] * t], [d[0] * h, d[1] * h, d[2] * h])
                })
            })
            .collect()
    };
    let xs = sample(c1);
    let ys = sample(c2);
    let rows = exec.map(&xs, |&(x, dx)| {
        let terms: Vec<f64> = ys
            .iter()
            .map(|&(y, dy)| {
                let r = sub(x, y);
                let n = norm(r);
                dot(r, cross(dx, dy)) / (n * n * n)
            })
            .collect();
        pairwise_sum(&terms)
    });
    pairwise_sum(&rows) / (4.0 * PI)
}

/// `1/4 sum_{i != j} Tr(c_i, c_j) lk(gamma_i, gamma_j)`; self-linking terms are omitted.
pub fn cs_s0(curves: &[PolyCurve3], charges: &ChargeSystem) -> Result<Q, LinkError> {
    assert_eq!(curves.len(), charges.len(), "one charge per curve");
    let mut total = Q::zero();
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            let pair = charges.pair(i, j);
            if pair.is_zero() {
                continue;
            }
            let lk = linking_number_exact(&curves[i], &curves[j])?;
            total += pair * q(2 * lk);
        }
    }
    Ok(total * qf(1, 4))
}

/// A square of side 2 in the xy-plane centred at the origin, and one in the
/// xz-plane centred at `(1, 0, 0)` passing through it.
pub fn hopf_fixture() -> (PolyCurve3, PolyCurve3) {
    let a = PolyCurve3::new(vec![[-1.0, -1.0, 0.0], [1.0, -1.0, 0.0], [1.0, 1.0, 0.0], [-1.0, 1.0, 0.0]]).unwrap();
    let b = PolyCurve3::new(vec![[0.0, 0.0, -1.0], [2.0, 0.0, -1.0], [2.0, 0.0, 1.0], [0.0, 0.0, 1.0]]).unwrap();
    (a, b)
}

/// Two unit squares far apart.
pub fn split_fixture() -> (PolyCurve3, PolyCurve3) {
    let a = PolyCurve3::new(vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]]).unwrap();
    let b = PolyCurve3::new(vec![[10.0, 0.0, 0.0], [11.0, 0.0, 0.0], [11.0, 1.0, 0.0], [10.0, 1.0, 0.0]]).unwrap();
    (a, b)
}
