//! Ready-made covers and gerbes on standard complexes.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cech::CoverNerve;
use crate::complex::standard::{
    cycle_graph, product, rp2_triangles, sphere_fundamental_terms, subdivided_sphere, Subdivision,
};
use crate::complex::{Chain, OrientedSimplicialComplex};
use crate::fibered::FiniteCovering;
use crate::gerbe::{CentralExtension, PrincipalBundleData};
use crate::error::Result;

/// sd(∂Δⁿ) with its star cover, whose nerve is ∂Δⁿ.
#[derive(Debug, Clone)]
pub struct SphereCover {
    pub sd: Subdivision,
    pub cover: Arc<CoverNerve>,
    pub n: usize,
}

impl SphereCover {
    pub fn new(n: usize) -> Result<Self> {
        let (sd, charts) = subdivided_sphere(n);
        let cover = Arc::new(CoverNerve::new(Arc::new(sd.complex.clone()), charts)?);
        Ok(SphereCover { sd, cover, n })
    }

    /// k times the cocycle supported on the facet [0, …, n−1] of the nerve;
    /// its class is k times the generator.
    pub fn generator_cocycle(&self, k: i64) -> Vec<i64> {
        let nerve = &self.cover.nerve;
        let mut c = vec![0; nerve.count(self.n - 1)];
        let facet: Vec<usize> = (0..self.n).collect();
        c[nerve.index_of(&facet).expect("facet")] = k;
        c
    }

    /// Fundamental cycle of the subdivided sphere.
    pub fn fundamental_cycle(&self) -> Chain {
        self.sd.chain_map(self.n - 1, &sphere_fundamental_terms(self.n)).expect("fundamental cycle")
    }

    /// Subdivided facet of ∂Δⁿ, oriented as in the fundamental cycle.
    pub fn facet_chain(&self, omitted: usize) -> Chain {
        let terms: Vec<_> = sphere_fundamental_terms(self.n)
            .into_iter()
            .filter(|(f, _)| !f.contains(&omitted))
            .collect();
        self.sd.chain_map(self.n - 1, &terms).expect("facet")
    }

    /// Boundary of the subdivided star of an original vertex: a sphere
    /// whose faces each lie in exactly two charts.
    pub fn vertex_sphere(&self, v: usize) -> Chain {
        let base = &self.cover.base;
        let label = self.sd.label_of[&vec![v]];
        let mut ball = Chain::zero(self.n - 1);
        for (&i, x) in &self.fundamental_cycle().coeffs {
            if base.simplex(self.n - 1, i).contains(&label) {
                ball.add_term(i, x.clone());
            }
        }
        base.boundary(&ball)
    }
}

/// Barycentric subdivision of `k` with the star cover of the original
/// vertices; the nerve is `k` itself.
pub fn star_covered(k: &OrientedSimplicialComplex) -> Result<(Subdivision, Arc<CoverNerve>)> {
    let sd = Subdivision::new(k)?;
    let charts = sd.star_cover(k.vertices());
    let cover = Arc::new(CoverNerve::new(Arc::new(sd.complex.clone()), charts)?);
    Ok((sd, cover))
}

/// Two-sheeted covering of the subdivided n-cycle; when `twisted` the
/// sheets swap across the overlap of charts 0 and n−1, giving the
/// connected double cover.
pub fn circle_double_cover(n: usize, twisted: bool) -> Result<FiniteCovering> {
    let (_, cover) = star_covered(&cycle_graph(n))?;
    let mut transitions = vec![vec![0, 1]; cover.level_len(1)];
    if twisted {
        let (i, _) = cover.locate(&[0, n - 1]).expect("closing edge");
        transitions[i] = vec![1, 0];
    }
    FiniteCovering::new(cover, 2, transitions)
}

/// A covering of sd(∂Δⁿ) presented with seeded per-chart relabelings of
/// the sheets, so its transitions are nontrivial coboundaries.
pub fn relabeled_sphere_covering(n: usize, sheets: usize, seed: u64) -> Result<FiniteCovering> {
    let sc = SphereCover::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels: Vec<Vec<usize>> = (0..sc.cover.level_len(0))
        .map(|_| {
            let mut p: Vec<usize> = (0..sheets).collect();
            p.shuffle(&mut rng);
            p
        })
        .collect();
    let transitions = sc
        .cover
        .nerve
        .simplices(1)
        .iter()
        .map(|e| {
            (0..sheets)
                .map(|x| labels[e[1]].iter().position(|&y| y == labels[e[0]][x]).expect("permutation"))
                .collect()
        })
        .collect();
    FiniteCovering::new(sc.cover, sheets, transitions)
}

/// A ℤ/2-valued 1-cocycle on the six-vertex RP² that is not a coboundary,
/// one entry per edge in the complex's order.
fn rp2_twist(rp2: &OrientedSimplicialComplex) -> Vec<u8> {
    let edges = rp2.simplices(1);
    let idx = |a: usize, b: usize| rp2.index_of(&[a, b]).expect("edge");
    let closed = |c: &[u8]| rp2.simplices(2).iter().all(|t| (c[idx(t[0], t[1])] + c[idx(t[1], t[2])] + c[idx(t[0], t[2])]) % 2 == 0);
    let exact = |c: &[u8]| {
        (0u32..1 << rp2.count(0)).any(|f| edges.iter().enumerate().all(|(i, e)| c[i] as u32 == ((f >> e[0]) ^ (f >> e[1])) & 1))
    };
    (0u32..1 << edges.len())
        .map(|m| (0..edges.len()).map(|i| (m >> i & 1) as u8).collect::<Vec<u8>>())
        .find(|c| closed(c) && !exact(c))
        .expect("RP² carries a nontrivial ℤ/2 class")
}

/// Flat (ℤ/2)²-bundle over sd(RP² × S¹) whose transitions pair the
/// nontrivial ℤ/2 classes of the two factors; its Heisenberg lifting
/// obstruction is the nonzero torsion class.
pub fn rp2_circle_bundle() -> Result<(CentralExtension<f64>, PrincipalBundleData)> {
    let rp2 = OrientedSimplicialComplex::new(&rp2_triangles())?;
    let a = rp2_twist(&rp2);
    let circle = vec![vec![0, 1], vec![1, 2], vec![0, 2]];
    let k = OrientedSimplicialComplex::new(&product(&rp2_triangles(), &circle, 3))?;
    let (_, cover) = star_covered(&k)?;
    let transitions = cover
        .nerve
        .simplices(1)
        .iter()
        .map(|e| {
            let (x, y, x2, y2) = (e[0] / 3, e[0] % 3, e[1] / 3, e[1] % 3);
            let first = if x == x2 { 0 } else { a[rp2.index_of(&[x, x2]).expect("edge")] as usize };
            let second = usize::from(y == 0 && y2 == 2);
            2 * first + second
        })
        .collect();
    let ext = CentralExtension::heisenberg();
    let pb = PrincipalBundleData::new(&ext, cover, transitions)?;
    Ok((ext, pb))
}
