//! Simplicial cochain complexes with the cup product.

use std::collections::{BTreeSet, HashMap};

use num_traits::One;

use super::GradedComplex;
use crate::linalg::QMatrix;
use crate::rational::{q, Q};
use crate::solver::Multilinear;

/// An abstract simplicial complex with ordered vertex lists per simplex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    /// `simplices[p]` lists the `p`-simplices as increasing vertex tuples.
    simplices: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    /// Closes the given facets under taking faces.
    pub fn from_facets(facets: &[Vec<usize>]) -> Self {
        let top = facets.iter().map(|f| f.len()).max().unwrap_or(1).max(1) - 1;
        let mut sets: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); top + 1];
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            let n = f.len();
            for mask in 1u64..(1u64 << n) {
                let face: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                sets[face.len() - 1].insert(face);
            }
        }
        SimplicialComplex { simplices: sets.into_iter().map(|s| s.into_iter().collect()).collect() }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn simplices(&self, p: usize) -> &[Vec<usize>] {
        &self.simplices[p]
    }

    fn index(&self) -> Vec<HashMap<&[usize], usize>> {
        self.simplices
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect())
            .collect()
    }

    /// Coboundary `(d a)(v_0..v_{p+1}) = sum_i (-1)^i a(v_0..^v_i..v_{p+1})`.
    pub fn coboundary(&self, p: usize) -> QMatrix {
        let index = self.index();
        let mut d = QMatrix::zeros(self.simplices[p + 1].len(), self.simplices[p].len());
        for (r, s) in self.simplices[p + 1].iter().enumerate() {
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                let c = index[p][face.as_slice()];
                d[(r, c)] += if i % 2 == 0 { q(1) } else { q(-1) };
            }
        }
        d
    }

    pub fn cochain_complex(&self) -> GradedComplex {
        let dims = self.dims();
        let d = (0..dims.len() - 1).map(|p| self.coboundary(p)).collect();
        GradedComplex::new(dims, d, None).expect("simplicial coboundary squares to zero")
    }

    /// Cup product `(a ⌣ b)(v_0..v_{p+q}) = a(v_0..v_p) b(v_p..v_{p+q})` on the
    /// total cochain space.
    pub fn cup_product(&self) -> Multilinear {
        let dims = self.dims();
        let offsets: Vec<usize> = dims.iter().scan(0, |acc, &n| Some(std::mem::replace(acc, *acc + n))).collect();
        let total: usize = dims.iter().sum();
        let index = self.index();
        let mut m = Multilinear::new(2, total, total);
        for (deg, level) in self.simplices.iter().enumerate() {
            for (r, s) in level.iter().enumerate() {
                for p in 0..=deg {
                    let front = &s[..=p];
                    let back = &s[p..];
                    let a = offsets[p] + index[p][front];
                    let b = offsets[deg - p] + index[deg - p][back];
                    m.add_term(offsets[deg] + r, &[a, b], Q::one());
                }
            }
        }
        m
    }
}

/// The interval: two vertices and one edge.
pub fn interval() -> SimplicialComplex {
    SimplicialComplex::from_facets(&[vec![0, 1]])
}

/// A circle triangulated with `n >= 3` vertices and `n` edges.
pub fn circle(n: usize) -> SimplicialComplex {
    assert!(n >= 3, "a simplicial circle needs at least three vertices");
    let facets: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    SimplicialComplex::from_facets(&facets)
}

/// A single filled triangle (contractible, cochain dimensions 3, 3, 1).
pub fn filled_triangle() -> SimplicialComplex {
    SimplicialComplex::from_facets(&[vec![0, 1, 2]])
}

/// The seven-vertex torus: triangles `{i, i+1, i+3}` and `{i, i+2, i+3}` mod 7.
pub fn torus7() -> SimplicialComplex {
    let mut facets = Vec::new();
    for i in 0..7 {
        facets.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        facets.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    SimplicialComplex::from_facets(&facets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_dimensions() {
        assert_eq!(interval().dims(), vec![2, 1]);
        assert_eq!(circle(5).dims(), vec![5, 5]);
        assert_eq!(filled_triangle().dims(), vec![3, 3, 1]);
        assert_eq!(torus7().dims(), vec![7, 21, 14]);
    }

    #[test]
    fn interval_coboundary() {
        assert_eq!(interval().coboundary(0), QMatrix::from_int_rows(&[&[-1, 1]]));
    }

    #[test]
    fn torus_edges_lie_in_two_triangles() {
        let t = torus7();
        let d1 = t.coboundary(1);
        for e in 0..21 {
            let hits = (0..14).filter(|&r| d1[(r, e)] != q(0)).count();
            assert_eq!(hits, 2);
        }
    }
}
