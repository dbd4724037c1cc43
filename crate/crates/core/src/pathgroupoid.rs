//! The ℂ× groupoid of path classes on a simply connected complex carrying
//! a closed 2-form f with integral periods: (γ, z) ~ (γ̃, z̃) when
//! z = exp(∫_D f) z̃ for a 2-chain D with ∂D = γ − γ̃.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use num_complex::Complex;

use crate::cech::CxValue;
use crate::complex::{Chain, Cochain, OrientedSimplicialComplex};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const GROUPOID_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgePath {
    pub vertices: Vec<usize>,
}

impl EdgePath {
    pub fn new(complex: &OrientedSimplicialComplex, vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() || !complex.contains_vertex(vertices[0]) {
            return Err(Error::InconsistentInput("a path needs a starting vertex of the complex".into()));
        }
        for w in vertices.windows(2) {
            if w[0] != w[1] && complex.index_of(&[w[0].min(w[1]), w[0].max(w[1])]).is_none() {
                return Err(Error::InconsistentInput(format!("{} and {} are not adjacent", w[0], w[1])));
            }
        }
        Ok(EdgePath { vertices })
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().expect("nonempty path")
    }

    pub fn reversed(&self) -> Self {
        EdgePath { vertices: self.vertices.iter().rev().copied().collect() }
    }

    pub fn concat(&self, o: &Self) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&o.vertices[1..]);
        EdgePath { vertices }
    }

    pub fn to_chain(&self, complex: &OrientedSimplicialComplex) -> Result<Chain> {
        let terms: Vec<(Vec<usize>, i64)> =
            self.vertices.windows(2).filter(|w| w[0] != w[1]).map(|w| (w.to_vec(), 1)).collect();
        complex.chain(1, &terms)
    }
}

#[derive(Debug, Clone)]
pub struct GroupoidElement<T> {
    pub path: EdgePath,
    pub z: CxValue<T>,
}

impl<T: Real> GroupoidElement<T> {
    pub fn new(path: EdgePath, z: CxValue<T>) -> Self {
        GroupoidElement { path, z }
    }
}

/// The complex together with its 2-form, validated once.
#[derive(Debug, Clone)]
pub struct PathGroupoid<T> {
    pub complex: Arc<OrientedSimplicialComplex>,
    pub f: Cochain<T>,
}

impl<T: Real> PathGroupoid<T> {
    pub fn new(complex: Arc<OrientedSimplicialComplex>, f: Cochain<T>) -> Result<Self> {
        if f.degree != 2 || f.len() != complex.count(2) {
            return Err(Error::InconsistentInput("f must be a 2-cochain on the complex".into()));
        }
        if !complex.is_connected() {
            return Err(Error::NotConnected);
        }
        let h1 = complex.homology(1);
        if h1.betti != 0 || !h1.torsion.is_empty() {
            return Err(Error::NotSimplyConnected);
        }
        if complex.dim() > 2 {
            let df = complex.coboundary(&f)?.max_abs();
            if df > T::from_f64_lossy(GROUPOID_TOL) {
                return Err(Error::NotClosed(df.to_f64().unwrap_or(f64::NAN)));
            }
        }
        for z in complex.homology(2).cycle_basis {
            let x = complex.integrate(&f, &z)? / Complex::new(T::zero(), T::two_pi());
            let dev = (x - Complex::new(x.re.round(), T::zero())).norm();
            if dev > T::from_f64_lossy(GROUPOID_TOL) {
                return Err(Error::NonIntegralForm(dev.to_f64().unwrap_or(f64::NAN)));
            }
        }
        Ok(PathGroupoid { complex, f })
    }

    pub fn path(&self, vertices: Vec<usize>) -> Result<EdgePath> {
        EdgePath::new(&self.complex, vertices)
    }

    pub fn identity(&self, x: usize) -> Result<GroupoidElement<T>> {
        Ok(GroupoidElement::new(self.path(vec![x])?, CxValue::one()))
    }

    pub fn inverse(&self, a: &GroupoidElement<T>) -> GroupoidElement<T> {
        GroupoidElement::new(a.path.reversed(), a.z.inv())
    }

    pub fn product(&self, a: &GroupoidElement<T>, b: &GroupoidElement<T>) -> Result<GroupoidElement<T>> {
        if a.path.end() != b.path.start() {
            return Err(Error::EndpointMismatch(a.path.end(), b.path.start()));
        }
        Ok(GroupoidElement::new(a.path.concat(&b.path), a.z.mul(&b.z)))
    }

    /// a.z / (exp(∫_D f) b.z) for a given filling D of a.path − b.path.
    pub fn ratio_with_filling(&self, a: &GroupoidElement<T>, b: &GroupoidElement<T>, d: &Chain) -> Result<CxValue<T>> {
        let gap = self.gap(a, b)?;
        if !self.complex.boundary(d).sub(&gap).is_zero() {
            return Err(Error::InconsistentInput("the 2-chain does not fill the two paths".into()));
        }
        let transport = CxValue::from_log(self.complex.integrate(&self.f, d)?);
        Ok(a.z.div(&transport.mul(&b.z)))
    }

    /// A filling of a.path − b.path.
    pub fn filling(&self, a: &GroupoidElement<T>, b: &GroupoidElement<T>) -> Result<Chain> {
        let gap = self.gap(a, b)?;
        if gap.is_zero() {
            return Ok(Chain::zero(2));
        }
        self.complex.fill_boundary(&gap)
    }

    pub fn ratio(&self, a: &GroupoidElement<T>, b: &GroupoidElement<T>) -> Result<CxValue<T>> {
        let d = self.filling(a, b)?;
        self.ratio_with_filling(a, b, &d)
    }

    pub fn equal(&self, a: &GroupoidElement<T>, b: &GroupoidElement<T>) -> Result<bool> {
        let r = self.ratio(a, b)?;
        Ok(r.distance_from_one() < T::from_f64_lossy(GROUPOID_TOL))
    }

    fn gap(&self, a: &GroupoidElement<T>, b: &GroupoidElement<T>) -> Result<Chain> {
        if a.path.start() != b.path.start() {
            return Err(Error::EndpointMismatch(a.path.start(), b.path.start()));
        }
        if a.path.end() != b.path.end() {
            return Err(Error::EndpointMismatch(a.path.end(), b.path.end()));
        }
        Ok(a.path.to_chain(&self.complex)?.sub(&b.path.to_chain(&self.complex)?))
    }

    /// Breadth-first geodesics from `x`, visiting neighbours in increasing
    /// order.
    pub fn trivialize_at(&self, x: usize) -> Result<BasepointTrivialization> {
        if !self.complex.contains_vertex(x) {
            return Err(Error::InconsistentInput(format!("{x} is not a vertex")));
        }
        let mut paths = BTreeMap::from([(x, vec![x])]);
        let mut queue = VecDeque::from([x]);
        while let Some(u) = queue.pop_front() {
            let mut nb = self.complex.neighbours(u);
            nb.sort_unstable();
            for w in nb {
                if !paths.contains_key(&w) {
                    let mut p = paths[&u].clone();
                    p.push(w);
                    paths.insert(w, p);
                    queue.push_back(w);
                }
            }
        }
        if paths.len() != self.complex.count(0) {
            return Err(Error::NotConnected);
        }
        Ok(BasepointTrivialization { basepoint: x, paths: paths.into_iter().map(|(v, p)| (v, EdgePath { vertices: p })).collect() })
    }

    /// a ↦ (p, q) with p = (path x→y, 1) ∈ P_(x,y), q ∈ P_(x,z), p⁻¹q ~ a.
    pub fn split(
        &self,
        t: &BasepointTrivialization,
        a: &GroupoidElement<T>,
    ) -> Result<(GroupoidElement<T>, GroupoidElement<T>)> {
        let p = GroupoidElement::new(t.paths[&a.path.start()].clone(), CxValue::one());
        let q0 = GroupoidElement::new(t.paths[&a.path.end()].clone(), CxValue::one());
        let candidate = self.product(&self.inverse(&p), &q0)?;
        let r = self.ratio(&candidate, a)?;
        Ok((p, GroupoidElement::new(q0.path, r.inv())))
    }

    /// p⁻¹q for p, q starting at the same basepoint.
    pub fn join(&self, p: &GroupoidElement<T>, q: &GroupoidElement<T>) -> Result<GroupoidElement<T>> {
        self.product(&self.inverse(p), q)
    }
}

#[derive(Debug, Clone)]
pub struct BasepointTrivialization {
    pub basepoint: usize,
    pub paths: BTreeMap<usize, EdgePath>,
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::complex::standard::{boundary_of_simplex, cycle_graph};

    fn tetra(values: [Complex<f64>; 4]) -> Result<PathGroupoid<f64>> {
        let k = Arc::new(boundary_of_simplex(3));
        let f = Cochain { degree: 2, values: values.to_vec() };
        PathGroupoid::new(k, f)
    }

    /// Random f on ∂Δ³ with period ±2πi·m; the fundamental cycle is
    /// ±([012] − [013] + [023] − [123]).
    fn integral(rng: &mut ChaCha8Rng, m: i64) -> PathGroupoid<f64> {
        let mut v: Vec<Complex<f64>> =
            (0..3).map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-3.0..3.0))).collect();
        v.push(v[0] - v[1] + v[2] - Complex::new(0.0, std::f64::consts::TAU * m as f64));
        tetra([v[0], v[1], v[2], v[3]]).unwrap()
    }

    #[test]
    fn preconditions() {
        let zero = Complex::new(0.0, 0.0);
        let half = Complex::new(0.0, std::f64::consts::PI);
        assert!(matches!(tetra([half, zero, zero, zero]), Err(Error::NonIntegralForm(_))));
        let circle = Arc::new(cycle_graph(4));
        let bad = PathGroupoid::new(circle, Cochain::<f64> { degree: 2, values: vec![] });
        assert!(matches!(bad, Err(Error::NotSimplyConnected)));
    }

    #[test]
    fn single_triangle() {
        let zero = Complex::new(0.0, 0.0);
        let c = Complex::new(0.3, 0.7);
        let pg = tetra([c, c, zero, zero]).unwrap();
        let a = GroupoidElement::new(pg.path(vec![0, 1, 2]).unwrap(), CxValue::from_log(c));
        let b = GroupoidElement::new(pg.path(vec![0, 2]).unwrap(), CxValue::one());
        // ∂[0,1,2] = [1,2] − [0,2] + [0,1] = a − b
        assert!(pg.equal(&a, &b).unwrap());
        let wrong = GroupoidElement::new(b.path.clone(), CxValue::from_log(-c));
        assert!(!pg.equal(&a, &wrong).unwrap());
        assert!(matches!(pg.equal(&a, &pg.identity(0).unwrap()), Err(Error::EndpointMismatch(2, 0))));
    }

    #[test]
    fn axioms_on_random_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for m in -1..=2 {
            let pg = integral(&mut rng, m);
            let walk = |rng: &mut ChaCha8Rng, start: usize| {
                let mut v = vec![start];
                for _ in 0..rng.gen_range(0..6) {
                    let nb = pg.complex.neighbours(*v.last().unwrap());
                    v.push(nb[rng.gen_range(0..nb.len())]);
                }
                GroupoidElement::new(pg.path(v).unwrap(), CxValue::new(rng.gen_range(-1.0..1.0), rng.gen_range(-3.0..3.0)))
            };
            for _ in 0..10 {
                let a = walk(&mut rng, 0);
                let b = walk(&mut rng, a.path.end());
                let c = walk(&mut rng, b.path.end());
                let e = pg.identity(a.path.end()).unwrap();
                assert!(pg.equal(&pg.product(&a, &e).unwrap(), &a).unwrap());
                let aa = pg.product(&a, &pg.inverse(&a)).unwrap();
                assert!(pg.equal(&aa, &pg.identity(0).unwrap()).unwrap());
                let l = pg.product(&pg.product(&a, &b).unwrap(), &c).unwrap();
                let r = pg.product(&a, &pg.product(&b, &c).unwrap()).unwrap();
                assert!(pg.equal(&l, &r).unwrap());
                // a second filling differs by the fundamental cycle
                let other = walk(&mut rng, 0);
                if other.path.end() == l.path.end() {
                    let d = pg.filling(&l, &other).unwrap();
                    let z = pg.complex.homology(2).cycle_basis.remove(0);
                    let r1 = pg.ratio_with_filling(&l, &other, &d).unwrap();
                    let r2 = pg.ratio_with_filling(&l, &other, &d.add(&z)).unwrap();
                    assert!(r1.distance(&r2) < 1e-8);
                }
                let t = pg.trivialize_at(rng.gen_range(0..4)).unwrap();
                let (p, q) = pg.split(&t, &a).unwrap();
                assert_eq!(p.path.start(), t.basepoint);
                assert!(pg.equal(&pg.join(&p, &q).unwrap(), &a).unwrap());
                let ab = pg.product(&a, &b).unwrap();
                let (p2, q2) = pg.split(&t, &b).unwrap();
                let (p3, q3) = pg.split(&t, &ab).unwrap();
                let composed = pg.product(&pg.join(&p, &q).unwrap(), &pg.join(&p2, &q2).unwrap()).unwrap();
                assert!(pg.equal(&composed, &pg.join(&p3, &q3).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn basepoint_identity() {
        let pg = tetra([Complex::new(0.0, 0.0); 4]).unwrap();
        let t = pg.trivialize_at(2).unwrap();
        let (p, q) = pg.split(&t, &pg.identity(2).unwrap()).unwrap();
        assert_eq!(p.path.vertices, vec![2]);
        assert_eq!(q.path.vertices, vec![2]);
        assert!(q.z.distance_from_one() < 1e-15);
    }
}
