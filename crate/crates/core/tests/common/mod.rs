//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use pertinv::geom2d::PolyCurve2;
use pertinv::geom3d::{Point3, PolyCurve3};
use pertinv::rational::{q, to_f64};
use pertinv::solver::{Multilinear, TensorFamily};
use pertinv::{QMatrix, QVec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `|T_n^0|` from the large Schroeder recurrence
/// `(n+1) r_n = 3(2n-1) r_{n-1} - (n-2) r_{n-2}`, halved for `n >= 1`.
pub fn zero_label_counts(n_max: usize) -> Vec<u64> {
    let mut r: Vec<u64> = vec![1, 2];
    for n in 2..=n_max as u64 {
        let k = n as usize;
        let v = 3 * (2 * n - 1) * r[k - 1] - (n - 2) * r[k - 2];
        assert_eq!(v % (n + 1), 0);
        r.push(v / (n + 1));
    }
    (0..=n_max).map(|n| if n == 0 { 1 } else { r[n] / 2 }).collect()
}

/// Counts trees by structure alone: a vertex of label `l` with `k >= 2`
/// children adds `l + k - 1` to the order.
pub fn brute_tree_counts(n_max: usize, allow: impl Fn(usize, usize) -> bool) -> Vec<u64> {
    // ways[k][m]: ordered k-tuples of trees with total order m
    let mut count = vec![0u64; n_max + 1];
    count[0] = 1;
    for m in 1..=n_max {
        let mut total = 0;
        for k in 2..=m + 1 {
            for l in 0..=(m + 1 - k) {
                if !allow(l, k) {
                    continue;
                }
                total += tuples(&count, k, m + 1 - k - l);
            }
        }
        count[m] = total;
    }
    count
}

fn tuples(count: &[u64], k: usize, m: usize) -> u64 {
    if k == 0 {
        return u64::from(m == 0);
    }
    (0..=m).map(|first| count[first] * tuples(count, k - 1, m - first)).sum()
}

/// A random polynomial operator family with an invertible linear part.
pub fn random_family(rng: &mut ChaCha8Rng, dim: usize, max_arity: usize, max_label: usize) -> TensorFamily {
    let linear = loop {
        let rows: Vec<Vec<_>> =
            (0..dim).map(|_| (0..dim).map(|_| q(rng.random_range(-2..=2))).collect()).collect();
        let m = QMatrix::from_rows(rows);
        if m.inverse().is_some() {
            break m;
        }
    };
    let mut family = TensorFamily::new(linear);
    let ops = rng.random_range(1..=3);
    for _ in 0..ops {
        let arity = rng.random_range(2..=max_arity);
        let label = rng.random_range(0..=max_label);
        let mut op = Multilinear::new(arity, dim, dim);
        for _ in 0..rng.random_range(1..=4) {
            let out = rng.random_range(0..dim);
            let inputs: Vec<usize> = (0..arity).map(|_| rng.random_range(0..dim)).collect();
            op.add_term(out, &inputs, q(rng.random_range(-3..=3)));
        }
        family.set_op(label, op);
    }
    family
}

pub fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> QVec {
    QVec((0..dim).map(|_| q(rng.random_range(-3..=3))).collect())
}

/// Random rotation from a uniformly sampled unit quaternion.
pub fn random_rotation(rng: &mut ChaCha8Rng) -> [[f64; 3]; 3] {
    let (u1, u2, u3): (f64, f64, f64) = (rng.random(), rng.random(), rng.random());
    let tau = std::f64::consts::TAU;
    let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
    let (w, x, y, z) = (a * (tau * u2).sin(), a * (tau * u2).cos(), b * (tau * u3).sin(), b * (tau * u3).cos());
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - z * w), 2.0 * (x * z + y * w)],
        [2.0 * (x * y + z * w), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - x * w)],
        [2.0 * (x * z - y * w), 2.0 * (y * z + x * w), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

fn sub(a: Point3, b: Point3) -> Point3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn lerp(a: Point3, b: Point3, t: f64) -> Point3 {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])]
}

/// Linking number from the signed crossings of the xy-projection, after a
/// seeded rotation to make the projection regular. Each crossing contributes
/// `sign((x - y) . (dx x dy)) / 2`.
pub fn crossing_linking_number(c1: &PolyCurve3, c2: &PolyCurve3, seed: u64) -> i64 {
    let r = random_rotation(&mut rng(seed));
    let (c1, c2) = (c1.transformed(&r, [0.0; 3]), c2.transformed(&r, [0.0; 3]));
    let mut twice = 0i64;
    for i in 0..c1.edge_count() {
        let (p0, p1) = c1.edge(i);
        let dp = sub(p1, p0);
        for j in 0..c2.edge_count() {
            let (q0, q1) = c2.edge(j);
            let dq = sub(q1, q0);
            let den = dp[0] * dq[1] - dp[1] * dq[0];
            if den.abs() < 1e-12 {
                continue;
            }
            let w = sub(q0, p0);
            let s = (w[0] * dq[1] - w[1] * dq[0]) / den;
            let t = (w[0] * dp[1] - w[1] * dp[0]) / den;
            if !(0.0..1.0).contains(&s) || !(0.0..1.0).contains(&t) {
                continue;
            }
            let gap = sub(lerp(p0, p1, s), lerp(q0, q1, t));
            let cross = [dp[1] * dq[2] - dp[2] * dq[1], dp[2] * dq[0] - dp[0] * dq[2], dp[0] * dq[1] - dp[1] * dq[0]];
            let triple = gap[0] * cross[0] + gap[1] * cross[1] + gap[2] * cross[2];
            twice += if triple > 0.0 { 1 } else { -1 };
        }
    }
    assert_eq!(twice % 2, 0, "projection crossings must pair up");
    twice / 2
}

fn winding_f64(c: &[[f64; 2]], p: [f64; 2]) -> f64 {
    let mut angle = 0.0;
    for k in 0..c.len() {
        let a = [c[k][0] - p[0], c[k][1] - p[1]];
        let b = [c[(k + 1) % c.len()][0] - p[0], c[(k + 1) % c.len()][1] - p[1]];
        angle += (a[0] * b[1] - a[1] * b[0]).atan2(a[0] * b[0] + a[1] * b[1]);
    }
    (angle / std::f64::consts::TAU).round()
}

/// Stratified Monte-Carlo estimate of `integral w_i w_j dA` over the bounding
/// box, one uniform sample per cell of a `grid x grid` partition.
pub fn monte_carlo_j(curves: &[PolyCurve2], i: usize, j: usize, grid: usize, seed: u64) -> f64 {
    let float = |c: &PolyCurve2| -> Vec<[f64; 2]> {
        c.vertices().iter().map(|p| [to_f64(&p[0]), to_f64(&p[1])]).collect()
    };
    let (a, b) = (float(&curves[i]), float(&curves[j]));
    let all = a.iter().chain(&b);
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in all {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let (hx, hy) = ((hi[0] - lo[0]) / grid as f64, (hi[1] - lo[1]) / grid as f64);
    let mut r = rng(seed);
    let mut sum = 0.0;
    for gx in 0..grid {
        for gy in 0..grid {
            let p = [lo[0] + (gx as f64 + r.random::<f64>()) * hx, lo[1] + (gy as f64 + r.random::<f64>()) * hy];
            sum += winding_f64(&a, p) * winding_f64(&b, p);
        }
    }
    sum * hx * hy
}
