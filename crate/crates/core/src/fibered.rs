//! The fibered-product complex of a finite covering Y → M: cochains on
//! Y^[p], the differential δ, contraction and partition-of-unity patching.

use std::sync::Arc;

use num_complex::Complex;

use crate::cech::{CoverNerve, Partition};
use crate::complex::Cochain;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest fiber arity handled (the fiber of Y^[p] has k^p points).
pub const MAX_ARITY: usize = 6;
pub const FIBERED_TOL: f64 = 1e-9;

/// A k-sheeted covering, trivialized over every chart; `transitions[e]`
/// maps sheets of the lower chart of nerve edge e to sheets of the upper one.
#[derive(Debug, Clone)]
pub struct FiniteCovering {
    pub cover: Arc<CoverNerve>,
    pub sheets: usize,
    pub transitions: Vec<Vec<usize>>,
}

impl FiniteCovering {
    pub fn new(cover: Arc<CoverNerve>, sheets: usize, transitions: Vec<Vec<usize>>) -> Result<Self> {
        if sheets == 0 {
            return Err(Error::InconsistentInput("a covering needs at least one sheet".into()));
        }
        if transitions.len() != cover.level_len(1) {
            return Err(Error::InconsistentInput(format!(
                "{} transitions for {} double overlaps",
                transitions.len(),
                cover.level_len(1)
            )));
        }
        for t in &transitions {
            let mut seen = vec![false; sheets];
            if t.len() != sheets || t.iter().any(|&x| x >= sheets || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::InconsistentInput(format!("transition {t:?} is not a permutation")));
            }
        }
        let c = FiniteCovering { cover, sheets, transitions };
        for s in c.cover.nerve.simplices(2) {
            for x in 0..sheets {
                if c.transport(s[1], s[2], c.transport(s[0], s[1], x)) != c.transport(s[0], s[2], x) {
                    return Err(Error::InconsistentInput(format!("transitions fail the cocycle condition on {s:?}")));
                }
            }
        }
        Ok(c)
    }

    pub fn trivial(cover: Arc<CoverNerve>, sheets: usize) -> Self {
        let transitions = vec![(0..sheets).collect(); cover.level_len(1)];
        FiniteCovering { cover, sheets, transitions }
    }

    /// Sheet of chart `b` corresponding to sheet `x` of chart `a`.
    pub fn transport(&self, a: usize, b: usize, x: usize) -> usize {
        if a == b {
            return x;
        }
        let (i, sign) = self.cover.locate(&[a, b]).expect("charts overlap");
        let t = &self.transitions[i];
        if sign > 0 {
            t[x]
        } else {
            t.iter().position(|&y| y == x).expect("permutation")
        }
    }

    fn tuples(&self, p: usize) -> usize {
        self.sheets.pow(p as u32)
    }

    fn decode(&self, mut idx: usize, p: usize) -> Vec<usize> {
        let mut t = vec![0; p];
        for slot in t.iter_mut().rev() {
            *slot = idx % self.sheets;
            idx /= self.sheets;
        }
        t
    }

    fn encode(&self, t: &[usize]) -> usize {
        t.iter().fold(0, |acc, &x| acc * self.sheets + x)
    }
}

/// A q-form on Y^[p]: for every chart and every p-tuple of its sheets, a
/// q-cochain on the chart.
#[derive(Debug, Clone)]
pub struct FiberedCochain<T> {
    pub p: usize,
    pub q: usize,
    /// `values[chart][tuple index]`, tuples in mixed radix of the sheet count.
    pub values: Vec<Vec<Cochain<T>>>,
}

impl<T: Real> FiberedCochain<T> {
    pub fn zero(cov: &FiniteCovering, p: usize, q: usize) -> Self {
        let cover = &cov.cover;
        let values = (0..cover.level_len(0))
            .map(|a| vec![cover.overlap(0, a).complex.zero_cochain(q); cov.tuples(p)])
            .collect();
        FiberedCochain { p, q, values }
    }

    /// Compatible cochain from `f(simplex, tuple)`, the tuple read in the
    /// sheets of the lowest chart containing the simplex.
    pub fn from_fn(
        cov: &FiniteCovering,
        p: usize,
        q: usize,
        mut f: impl FnMut(&[usize], &[usize]) -> Complex<T>,
    ) -> Self {
        let cover = &cov.cover;
        let base = &cover.base;
        let mut global: Vec<Vec<Complex<T>>> = Vec::with_capacity(base.count(q));
        let mut home = Vec::with_capacity(base.count(q));
        for s in base.simplices(q) {
            let h = cover.charts_containing(s)[0];
            home.push(h);
            global.push((0..cov.tuples(p)).map(|t| f(s, &cov.decode(t, p))).collect());
        }
        let mut out = Self::zero(cov, p, q);
        for (ai, a) in cover.nerve.vertices().enumerate() {
            let sub = cover.overlap(0, ai);
            for (t, slot) in out.values[ai].iter_mut().enumerate() {
                let tuple = cov.decode(t, p);
                for (i, &gi) in sub.global[q].iter().enumerate() {
                    let h = home[gi];
                    let there: Vec<usize> = tuple.iter().map(|&x| cov.transport(a, h, x)).collect();
                    slot.values[i] = global[gi][cov.encode(&there)];
                }
            }
        }
        out
    }

    /// Pullback of a q-cochain on M (arity 0).
    pub fn from_base(cov: &FiniteCovering, mu: &Cochain<T>) -> Self {
        let cover = &cov.cover;
        let values = (0..cover.level_len(0)).map(|a| vec![cover.overlap(0, a).restrict(mu)]).collect();
        FiberedCochain { p: 0, q: mu.degree, values }
    }

    /// Value on a chart and tuple of its sheets.
    pub fn get(&self, cov: &FiniteCovering, chart_index: usize, tuple: &[usize]) -> &Cochain<T> {
        &self.values[chart_index][cov.encode(tuple)]
    }

    /// Largest disagreement between charts on their overlaps.
    pub fn compatibility_defect(&self, cov: &FiniteCovering) -> T {
        let cover = &cov.cover;
        let mut worst = T::zero();
        for (e, s) in cover.nerve.simplices(1).iter().enumerate() {
            let (ia, ib) = (cover.nerve.index_of(&[s[0]]).unwrap(), cover.nerve.index_of(&[s[1]]).unwrap());
            let (ua, ub) = (&cover.overlap(0, ia).complex, &cover.overlap(0, ib).complex);
            for t in 0..cov.tuples(self.p) {
                let tuple = cov.decode(t, self.p);
                let moved: Vec<usize> = tuple.iter().map(|&x| cov.transport(s[0], s[1], x)).collect();
                let (ca, cb) = (&self.values[ia][t], &self.values[ib][cov.encode(&moved)]);
                for simplex in cover.overlap(1, e).complex.simplices(self.q) {
                    let x = ca.values[ua.index_of(simplex).unwrap()] - cb.values[ub.index_of(simplex).unwrap()];
                    worst = worst.max(x.norm());
                }
            }
        }
        worst
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().flatten().fold(T::zero(), |m, c| m.max(c.max_abs()))
    }

    pub fn max_diff(&self, o: &Self) -> T {
        self.values
            .iter()
            .flatten()
            .zip(o.values.iter().flatten())
            .fold(T::zero(), |m, (a, b)| m.max(a.max_diff(b)))
    }

    pub fn scale(&self, s: T) -> Self {
        let s = Complex::new(s, T::zero());
        FiberedCochain {
            p: self.p,
            q: self.q,
            values: self.values.iter().map(|v| v.iter().map(|c| c.scale(s)).collect()).collect(),
        }
    }
}

/// δ(w)(s_0, …, s_p) = Σ_i (−1)^i w(s_0, …, ŝ_i, …, s_p); at arity 0 this
/// is the pullback along the projection.
pub fn delta<T: Real>(cov: &FiniteCovering, w: &FiberedCochain<T>) -> Result<FiberedCochain<T>> {
    let p = w.p + 1;
    if p > MAX_ARITY {
        return Err(Error::ArityOutOfRange(format!("arity {p} exceeds {MAX_ARITY}")));
    }
    let mut out = FiberedCochain::zero(cov, p, w.q);
    for (a, per_chart) in out.values.iter_mut().enumerate() {
        for (t, slot) in per_chart.iter_mut().enumerate() {
            let tuple = cov.decode(t, p);
            for i in 0..p {
                let mut face = tuple.clone();
                face.remove(i);
                let term = &w.values[a][cov.encode(&face)];
                *slot = if i % 2 == 0 { slot.add(term) } else { slot.sub(term) };
            }
        }
    }
    Ok(out)
}

fn closedness<T: Real>(cov: &FiniteCovering, w: &FiberedCochain<T>) -> Result<()> {
    let d = delta(cov, w)?.max_abs();
    if d > T::from_f64_lossy(FIBERED_TOL) {
        return Err(Error::NotClosed(d.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(())
}

/// Chart-local contraction ρ(s…) = w(s…, b) at the basepoint sheet b = 0;
/// δρ = (−1)^{p+1} w on every chart.
pub fn contract<T: Real>(cov: &FiniteCovering, w: &FiberedCochain<T>) -> Result<FiberedCochain<T>> {
    if w.p == 0 {
        return Err(Error::ArityOutOfRange("cannot contract arity 0".into()));
    }
    closedness(cov, w)?;
    let p = w.p - 1;
    let values = w
        .values
        .iter()
        .map(|per_chart| {
            (0..cov.tuples(p))
                .map(|t| {
                    let mut tuple = cov.decode(t, p);
                    tuple.push(0);
                    per_chart[cov.encode(&tuple)].clone()
                })
                .collect()
        })
        .collect();
    Ok(FiberedCochain { p, q: w.q, values })
}

/// Global ρ with δρ = w: ρ = Σ_α ψ_α ∪ ((−1)^{p+1} contract_α(w)),
/// transported to each chart's sheets.
pub fn patch_primitive<T: Real>(
    cov: &FiniteCovering,
    w: &FiberedCochain<T>,
    partition: &Partition<T>,
) -> Result<FiberedCochain<T>> {
    let cover = &cov.cover;
    partition.validate(cover)?;
    let local = contract(cov, w)?;
    let sign = if w.p % 2 == 1 { T::one() } else { -T::one() };
    let p = local.p;
    let charts: Vec<usize> = cover.nerve.vertices().collect();
    let mut out = FiberedCochain::zero(cov, p, w.q);
    for (bi, &b) in charts.iter().enumerate() {
        let sub = cover.overlap(0, bi);
        for (t, slot) in out.values[bi].iter_mut().enumerate() {
            let tuple = cov.decode(t, p);
            for (si, s) in sub.complex.simplices(w.q).iter().enumerate() {
                let lead = cover.base.index_of(&[s[0]]).expect("base vertex");
                let mut acc = Complex::new(T::zero(), T::zero());
                for (ai, &a) in charts.iter().enumerate() {
                    let psi = partition.psi[a][lead];
                    if psi == T::zero() {
                        continue;
                    }
                    let there: Vec<usize> = tuple.iter().map(|&x| cov.transport(b, a, x)).collect();
                    let ua = &cover.overlap(0, ai).complex;
                    let j = ua.index_of(s).expect("admissible chart contains the simplex");
                    acc += local.values[ai][cov.encode(&there)].values[j] * psi;
                }
                slot.values[si] = acc * sign;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::scenarios::{circle_double_cover, relabeled_sphere_covering};

    fn random(cov: &FiniteCovering, p: usize, q: usize, seed: u64) -> FiberedCochain<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        FiberedCochain::from_fn(cov, p, q, |_, _| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    fn coverings() -> Vec<(FiniteCovering, usize)> {
        vec![
            (circle_double_cover(3, true).unwrap(), 1),
            (circle_double_cover(4, true).unwrap(), 1),
            (relabeled_sphere_covering(3, 2, 7).unwrap(), 2),
        ]
    }

    #[test]
    fn rejects_bad_transitions() {
        let sphere = relabeled_sphere_covering(3, 2, 1).unwrap();
        let mut t = vec![vec![0, 1]; sphere.cover.level_len(1)];
        t[0] = vec![1, 0];
        assert!(FiniteCovering::new(sphere.cover.clone(), 2, t).is_err());
        let t = vec![vec![0, 0]; sphere.cover.level_len(1)];
        assert!(FiniteCovering::new(sphere.cover.clone(), 2, t).is_err());
    }

    #[test]
    fn from_fn_is_compatible() {
        for (cov, dim) in coverings() {
            for q in 0..=dim {
                let w = random(&cov, 2, q, q as u64);
                assert_eq!(w.compatibility_defect(&cov), 0.0);
            }
        }
    }

    #[test]
    fn delta_squares_to_zero() {
        for (cov, dim) in coverings() {
            for p in 0..3 {
                let w = random(&cov, p, dim, 11 + p as u64);
                let dd = delta(&cov, &delta(&cov, &w).unwrap()).unwrap();
                assert!(dd.max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn arity_one_delta_is_difference() {
        let cov = circle_double_cover(4, true).unwrap();
        let w = random(&cov, 1, 0, 3);
        let dw = delta(&cov, &w).unwrap();
        let lhs = dw.get(&cov, 2, &[0, 1]);
        let rhs = w.get(&cov, 2, &[1]).sub(w.get(&cov, 2, &[0]));
        assert!(lhs.max_diff(&rhs) < 1e-15);
    }

    #[test]
    fn contraction_and_patching() {
        for (cov, dim) in coverings() {
            let psi = Partition::weighted(&cov.cover, 5).unwrap();
            for p in 1..=3 {
                let u = random(&cov, p - 1, dim, 100 + p as u64);
                let w = delta(&cov, &u).unwrap();
                let rho = contract(&cov, &w).unwrap();
                let sign = if p % 2 == 1 { 1.0 } else { -1.0 };
                assert!(delta(&cov, &rho).unwrap().max_diff(&w.scale(sign)) < 1e-12);
                let glued = patch_primitive(&cov, &w, &psi).unwrap();
                assert!(delta(&cov, &glued).unwrap().max_diff(&w) < 1e-9);
                assert!(glued.compatibility_defect(&cov) < 1e-12);
            }
        }
    }

    #[test]
    fn closed_arity_one_descends() {
        let cov = circle_double_cover(3, true).unwrap();
        let base = &cov.cover.base;
        let mu = base.cochain_from_fn(1, |s| Complex::new(s[0] as f64, s[1] as f64));
        let w = delta(&cov, &FiberedCochain::from_base(&cov, &mu)).unwrap();
        assert!(w.max_abs() > 0.0);
        let rho = patch_primitive(&cov, &w, &Partition::hat(&cov.cover).unwrap()).unwrap();
        assert!(rho.max_diff(&FiberedCochain::from_base(&cov, &mu)) < 1e-12);
    }

    #[test]
    fn open_cochain_is_rejected() {
        let cov = circle_double_cover(4, true).unwrap();
        let w = random(&cov, 2, 0, 9);
        assert!(matches!(contract(&cov, &w), Err(Error::NotClosed(_))));
        assert!(matches!(delta(&cov, &FiberedCochain::<f64>::zero(&cov, MAX_ARITY, 0)), Err(Error::ArityOutOfRange(_))));
    }
}
