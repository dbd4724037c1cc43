//! Standard complexes used by tests, scenarios and the CLI.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{faces, orient, Chain, OrientedSimplicialComplex, Simplex};
use crate::error::Result;

/// Facets of the boundary of the n-simplex on vertices 0..=n.
pub fn sphere_facets(n: usize) -> Vec<Simplex> {
    let full: Simplex = (0..=n).collect();
    faces(&full).map(|(f, _)| f).collect()
}

pub fn boundary_of_simplex(n: usize) -> OrientedSimplicialComplex {
    OrientedSimplicialComplex::new(&sphere_facets(n)).expect("sphere triangulation")
}

/// The n-cycle graph on 0..n (n ≥ 3).
pub fn cycle_graph(n: usize) -> OrientedSimplicialComplex {
    let edges: Vec<Simplex> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    OrientedSimplicialComplex::new(&edges).expect("cycle graph")
}

/// Six-vertex real projective plane.
pub fn rp2_triangles() -> Vec<Simplex> {
    [
        [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 1, 5],
        [1, 2, 4], [2, 3, 5], [1, 3, 4], [2, 4, 5], [1, 3, 5],
    ]
    .iter()
    .map(|t| t.to_vec())
    .collect()
}

/// Staircase triangulation of a product of two complexes. Vertex (a, b)
/// gets label `a * stride + b`, with `stride` larger than every label of
/// the second factor.
pub fn product(a: &[Simplex], b: &[Simplex], stride: usize) -> Vec<Simplex> {
    let mut out = Vec::new();
    for s in a {
        for t in b {
            // monotone lattice paths from (0,0) to (p,q)
            let (p, q) = (s.len() - 1, t.len() - 1);
            for mask in 0u32..(1 << (p + q)) {
                if mask.count_ones() as usize != p {
                    continue;
                }
                let (mut i, mut j) = (0, 0);
                let mut simplex = vec![s[0] * stride + t[0]];
                for step in 0..p + q {
                    if mask >> step & 1 == 1 {
                        i += 1;
                    } else {
                        j += 1;
                    }
                    simplex.push(s[i] * stride + t[j]);
                }
                out.push(simplex);
            }
        }
    }
    out
}

/// Barycentric subdivision with vertices labelled by the faces of the
/// original complex, ordered by (dimension, lexicographic). Every simplex of
/// the subdivision therefore has its smallest face as leading vertex.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub complex: OrientedSimplicialComplex,
    pub face_of: Vec<Simplex>,
    pub label_of: HashMap<Simplex, usize>,
}

impl Subdivision {
    pub fn new(k: &OrientedSimplicialComplex) -> Result<Self> {
        let face_of: Vec<Simplex> = (0..=k.dim()).flat_map(|d| k.simplices(d).iter().cloned()).collect();
        let label_of: HashMap<Simplex, usize> =
            face_of.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mut flags = Vec::new();
        for d in 0..=k.dim() {
            for s in k.simplices(d) {
                full_flags(s, &label_of, &mut vec![], &mut flags);
            }
        }
        Ok(Subdivision { complex: OrientedSimplicialComplex::new(&flags)?, face_of, label_of })
    }

    /// Subdivision chain map applied to an integer chain of oriented tuples.
    pub fn chain_map(&self, degree: usize, terms: &[(Vec<usize>, i64)]) -> Result<Chain> {
        let mut acc: BTreeMap<Simplex, i64> = BTreeMap::new();
        for (t, x) in terms {
            let (s, sign) = orient(t)?;
            for (f, y) in self.subdivide(&s) {
                *acc.entry(f).or_default() += x * sign as i64 * y;
            }
        }
        let terms: Vec<(Vec<usize>, i64)> = acc.into_iter().filter(|(_, x)| *x != 0).collect();
        self.complex.chain(degree, &terms)
    }

    fn subdivide(&self, s: &[usize]) -> BTreeMap<Simplex, i64> {
        let b = self.label_of[s];
        let mut out = BTreeMap::new();
        if s.len() == 1 {
            out.insert(vec![b], 1);
            return out;
        }
        for (f, sign) in faces(s) {
            for (t, x) in self.subdivide(&f) {
                let mut cone = vec![b];
                cone.extend(t);
                let (c, csign) = orient(&cone).expect("distinct labels");
                *out.entry(c).or_default() += sign * x * csign as i64;
            }
        }
        out.retain(|_, x| *x != 0);
        out
    }

    /// Charts U_i: labels of faces containing vertex i, for each vertex of
    /// the original complex.
    pub fn star_cover(&self, vertices: impl IntoIterator<Item = usize>) -> Vec<BTreeSet<usize>> {
        vertices
            .into_iter()
            .map(|i| (0..self.face_of.len()).filter(|&l| self.face_of[l].contains(&i)).collect())
            .collect()
    }

    /// Vertex map of the subdivision induced by a simplicial vertex map of
    /// the original complex into `target`.
    pub fn induced_map(&self, target: &Subdivision, phi: impl Fn(usize) -> usize) -> Vec<usize> {
        self.face_of
            .iter()
            .map(|f| {
                let img: BTreeSet<usize> = f.iter().map(|&v| phi(v)).collect();
                target.label_of[&img.into_iter().collect::<Vec<_>>()]
            })
            .collect()
    }
}

fn full_flags(s: &[usize], label_of: &HashMap<Simplex, usize>, prefix: &mut Vec<usize>, out: &mut Vec<Simplex>) {
    prefix.push(label_of[s]);
    if s.len() == 1 {
        let mut flag = prefix.clone();
        flag.reverse();
        out.push(flag);
    } else {
        for (f, _) in faces(s) {
            full_flags(&f, label_of, prefix, out);
        }
    }
    prefix.pop();
}

/// sd(∂Δⁿ) with its star cover; the nerve is ∂Δⁿ itself.
pub fn subdivided_sphere(n: usize) -> (Subdivision, Vec<BTreeSet<usize>>) {
    let sd = Subdivision::new(&boundary_of_simplex(n)).expect("subdivision");
    let charts = sd.star_cover(0..=n);
    (sd, charts)
}

/// Fundamental cycle of ∂Δⁿ as oriented facet terms: ∂[0..n].
pub fn sphere_fundamental_terms(n: usize) -> Vec<(Vec<usize>, i64)> {
    let full: Simplex = (0..=n).collect();
    faces(&full).map(|(f, s)| (f, s)).collect()
}
