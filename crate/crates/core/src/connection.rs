//! Deligne data (f_α, A_αβ, g_αβγ), its construction by partition of unity,
//! the curvature 3-form and curvings.

use std::sync::Arc;

use num_complex::Complex;

use crate::cech::{cup_into, CoverNerve, CxCochain, IntegerClass, Partition};
use crate::complex::{orient, Cochain, OrientedSimplicialComplex};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const DELIGNE_TOL: f64 = 1e-9;

/// Sign in the curvature split on double overlaps: f_β − f_α = SIGN · dA_αβ,
/// i.e. δf = SIGN · F with F the curvature of A on U_αβ.
pub const CURVATURE_SPLIT_SIGN: f64 = 1.0;

#[derive(Debug, Clone)]
pub struct DeligneData<T> {
    pub cover: Arc<CoverNerve>,
    pub g: CxCochain<T>,
    /// A 1-cochain on each double overlap (ascending chart pairs).
    pub a: Vec<Cochain<T>>,
    /// A 2-cochain on each chart (nerve vertex order).
    pub f: Vec<Cochain<T>>,
}

/// How the curving f is obtained from A.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CurvingRoute {
    /// f_α = −SIGN · Σ_β ψ_β ∪ dA_αβ.
    #[default]
    PartitionOfUnity,
    /// f = primitive of the fiber-product curvature F under δ, by
    /// contraction and patching.
    FiberedPrimitive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeligneReport {
    pub cocycle_residual: f64,
    /// Per triple overlap: max |A_αβ + A_βγ + A_γα − dlog g_αβγ|.
    pub triple: Vec<(Vec<usize>, f64)>,
    /// Per double overlap: max |f_β − f_α − SIGN·dA_αβ|.
    pub double: Vec<(Vec<usize>, f64)>,
    pub tolerance: f64,
}

impl DeligneReport {
    pub fn max_triple(&self) -> f64 {
        self.triple.iter().fold(0.0, |m, x| m.max(x.1))
    }

    pub fn max_double(&self) -> f64 {
        self.double.iter().fold(0.0, |m, x| m.max(x.1))
    }

    pub fn max_residual(&self) -> f64 {
        self.cocycle_residual.max(self.max_triple()).max(self.max_double())
    }

    pub fn passed(&self) -> bool {
        self.max_residual() < self.tolerance
    }
}

fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Value of a per-overlap cochain family on a chart tuple (antisymmetric in
/// the tuple) at an ascending base simplex.
pub fn overlap_value<T: Real>(
    cover: &CoverNerve,
    family: &[Cochain<T>],
    tuple: &[usize],
    simplex: &[usize],
) -> Option<Complex<T>> {
    let (i, sign) = cover.locate(tuple)?;
    let local = cover.overlap(tuple.len() - 1, i).complex.index_of(simplex)?;
    let x = family[i].values[local];
    Some(if sign > 0 { x } else { -x })
}

/// Edge increment of the continuous logarithm of a cochain on a chart tuple.
pub fn dlog_on_edge<T: Real>(cover: &CoverNerve, g: &CxCochain<T>, tuple: &[usize], edge: &[usize]) -> Complex<T> {
    let head = g.log_at(cover, tuple, edge[1]).expect("edge in overlap");
    let tail = g.log_at(cover, tuple, edge[0]).expect("edge in overlap");
    head - tail
}

impl<T: Real> DeligneData<T> {
    pub fn trivial(cover: Arc<CoverNerve>) -> Self {
        let g = CxCochain::one(&cover, 2);
        let a = (0..cover.level_len(1)).map(|i| cover.overlap(1, i).complex.zero_cochain(1)).collect();
        let f = (0..cover.level_len(0)).map(|i| cover.overlap(0, i).complex.zero_cochain(2)).collect();
        DeligneData { cover, g, a, f }
    }

    /// Nerve vertex index of a chart label.
    pub fn chart_index(&self, chart: usize) -> Result<usize> {
        self.cover.nerve.index_of(&[chart]).ok_or(Error::ChartUnknown(chart))
    }

    pub fn a_on(&self, tuple: &[usize], edge: &[usize]) -> Option<Complex<T>> {
        if tuple[0] == tuple[1] {
            return Some(czero());
        }
        overlap_value(&self.cover, &self.a, tuple, edge)
    }

    pub fn f_on(&self, chart: usize, tri: &[usize]) -> Option<Complex<T>> {
        overlap_value(&self.cover, &self.f, &[chart], tri)
    }
}

pub fn check_deligne<T: Real>(d: &DeligneData<T>) -> DeligneReport {
    let cover = &d.cover;
    let to = |x: T| x.to_f64().unwrap_or(f64::INFINITY);
    let cocycle_residual = to(d.g.coboundary(cover).distance_from_one());
    let mut triple = Vec::new();
    for (i, s) in cover.nerve.simplices(2).iter().enumerate() {
        let sub = &cover.overlap(2, i).complex;
        let mut worst = 0.0f64;
        for e in sub.simplices(1) {
            let lhs = d.a_on(&[s[0], s[1]], e).unwrap()
                + d.a_on(&[s[1], s[2]], e).unwrap()
                + d.a_on(&[s[2], s[0]], e).unwrap();
            worst = worst.max(to((lhs - dlog_on_edge(cover, &d.g, s, e)).norm()));
        }
        triple.push((s.clone(), worst));
    }
    let sign = T::from_f64_lossy(CURVATURE_SPLIT_SIGN);
    let mut double = Vec::new();
    for (i, s) in cover.nerve.simplices(1).iter().enumerate() {
        let sub = &cover.overlap(1, i).complex;
        let da = sub.coboundary_unchecked(&d.a[i]);
        let mut worst = 0.0f64;
        for (t, tri) in sub.simplices(2).iter().enumerate() {
            let lhs = d.f_on(s[1], tri).unwrap() - d.f_on(s[0], tri).unwrap();
            worst = worst.max(to((lhs - da.values[t] * sign).norm()));
        }
        double.push((s.clone(), worst));
    }
    DeligneReport { cocycle_residual, triple, double, tolerance: DELIGNE_TOL }
}

/// Connection and curving for a cocycle g by partition of unity.
pub fn build_connection<T: Real>(
    cover: Arc<CoverNerve>,
    g: &CxCochain<T>,
    partition: &Partition<T>,
    route: CurvingRoute,
) -> Result<DeligneData<T>> {
    partition.validate(&cover)?;
    let residual = g.coboundary(&cover).distance_from_one();
    if residual > T::from_f64_lossy(DELIGNE_TOL) {
        return Err(Error::NotACocycle(residual.to_f64().unwrap_or(f64::NAN)));
    }
    let charts: Vec<usize> = cover.nerve.vertices().collect();
    let a: Vec<Cochain<T>> = cover
        .nerve
        .simplices(1)
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let sub = cover.overlap(1, i);
            charts.iter().fold(sub.complex.zero_cochain(1), |acc, &c| {
                if s.contains(&c) {
                    return acc;
                }
                let term = cup_into(&cover, &partition.psi[c], sub, 1, |e| dlog_on_edge(&cover, g, &[s[0], s[1], c], e));
                acc.add(&term)
            })
        })
        .collect();
    let da: Vec<Cochain<T>> =
        (0..a.len()).map(|i| cover.overlap(1, i).complex.coboundary_unchecked(&a[i])).collect();
    let sign = T::from_f64_lossy(CURVATURE_SPLIT_SIGN);
    let f = charts
        .iter()
        .enumerate()
        .map(|(ai, &alpha)| {
            let sub = cover.overlap(0, ai);
            charts.iter().fold(sub.complex.zero_cochain(2), |acc, &c| {
                if c == alpha {
                    return acc;
                }
                let term = cup_into(&cover, &partition.psi[c], sub, 2, |t| {
                    let dat = overlap_value(&cover, &da, &[alpha, c], t).expect("triangle in overlap");
                    match route {
                        CurvingRoute::PartitionOfUnity => -(dat * sign),
                        // contraction of F = SIGN·dA at the last slot,
                        // patched with the (−1)^{p+1} = −1 sign for p = 2
                        CurvingRoute::FiberedPrimitive => {
                            let big_f = dat * sign;
                            -big_f
                        }
                    }
                });
                acc.add(&term)
            })
        })
        .collect();
    Ok(DeligneData { cover, g: g.clone(), a, f })
}

/// The curvature 3-form ω on the base.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureForm<T> {
    pub omega: Cochain<T>,
}

pub fn curvature_three_form<T: Real>(d: &DeligneData<T>) -> Result<CurvatureForm<T>> {
    let cover = &d.cover;
    let base: &OrientedSimplicialComplex = &cover.base;
    let mut omega: Vec<Option<Complex<T>>> = vec![None; base.count(3)];
    let tol = T::from_f64_lossy(DELIGNE_TOL);
    for (ai, fa) in d.f.iter().enumerate() {
        let sub = cover.overlap(0, ai);
        let df = sub.complex.coboundary_unchecked(fa);
        for (t, &gi) in sub.global.get(3).map_or(&[][..], Vec::as_slice).iter().enumerate() {
            match omega[gi] {
                None => omega[gi] = Some(df.values[t]),
                Some(x) if (x - df.values[t]).norm() > tol => {
                    return Err(Error::GlueMismatch((x - df.values[t]).norm().to_f64().unwrap_or(f64::NAN)))
                }
                _ => {}
            }
        }
    }
    let values = omega
        .into_iter()
        .enumerate()
        .map(|(i, x)| x.ok_or_else(|| Error::InconsistentInput(format!("3-simplex {:?} in no chart", base.simplex(3, i)))))
        .collect::<Result<_>>()?;
    Ok(CurvatureForm { omega: Cochain { degree: 3, values } })
}

/// K(A) = dA_local − f_α on U_α.
pub fn curving_from_chart<T: Real>(d: &DeligneData<T>, chart: usize, a_local: &Cochain<T>) -> Result<Cochain<T>> {
    let ai = d.chart_index(chart)?;
    let sub = &d.cover.overlap(0, ai).complex;
    if a_local.degree != 1 || a_local.len() != sub.count(1) {
        return Err(Error::InconsistentInput("local connection must be a 1-cochain on the chart".into()));
    }
    Ok(sub.coboundary_unchecked(a_local).sub(&d.f[ai]))
}

/// g_αβγ(v) = exp(2πi Σ_δ ψ_δ(v) n_δαβγ).
pub fn build_from_integer_class<T: Real>(
    cover: &CoverNerve,
    n: &[i64],
    partition: &Partition<T>,
) -> Result<CxCochain<T>> {
    IntegerClass::from_cocycle(&cover.nerve, 3, n.to_vec())?;
    partition.validate(cover)?;
    let tau = T::two_pi();
    Ok(CxCochain::from_log_fn(cover, 2, |s, v| {
        let mut x = T::zero();
        for &c in cover.charts_at(v) {
            let mut t = vec![c];
            t.extend_from_slice(s);
            if let Ok((sorted, sign)) = orient(&t) {
                if let Some(i) = cover.nerve.index_of(&sorted) {
                    x += partition.at(cover, c, v) * T::from_f64_lossy((sign as i64 * n[i]) as f64);
                }
            }
        }
        Complex::new(T::zero(), tau * x)
    }))
}

/// Deligne coboundary action: g·δρ, A_αβ + dlog ρ_αβ + μ_β − μ_α,
/// f_α + SIGN·dμ_α.
pub fn gauge_transform<T: Real>(d: &DeligneData<T>, rho: &CxCochain<T>, mu: &[Cochain<T>]) -> DeligneData<T> {
    let cover = &d.cover;
    let g = d.g.mul(&rho.coboundary(cover));
    let a = cover
        .nerve
        .simplices(1)
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let sub = &cover.overlap(1, i).complex;
            let vals = sub
                .simplices(1)
                .iter()
                .enumerate()
                .map(|(e, edge)| {
                    d.a[i].values[e] + dlog_on_edge(cover, rho, s, edge)
                        + overlap_value(cover, mu, &[s[1]], edge).unwrap()
                        - overlap_value(cover, mu, &[s[0]], edge).unwrap()
                })
                .collect();
            Cochain { degree: 1, values: vals }
        })
        .collect();
    let sign = Complex::new(T::from_f64_lossy(CURVATURE_SPLIT_SIGN), T::zero());
    let f = d
        .f
        .iter()
        .enumerate()
        .map(|(i, fa)| fa.add(&cover.overlap(0, i).complex.coboundary_unchecked(&mu[i]).scale(sign)))
        .collect();
    DeligneData { cover: d.cover.clone(), g, a, f }
}

/// f_α + β|U_α for a global 2-form β: the identities are unchanged and ω
/// moves by dβ.
pub fn shift_curving<T: Real>(d: &DeligneData<T>, beta: &Cochain<T>) -> DeligneData<T> {
    let f = d.f.iter().enumerate().map(|(i, fa)| fa.add(&d.cover.overlap(0, i).restrict(beta))).collect();
    DeligneData { f, ..d.clone() }
}

/// μ_α = −Σ_γ ψ_γ ∪ (A′_αγ − A_αγ); two connections for the same g satisfy
/// A′_αβ − A_αβ = μ_β − μ_α.
pub fn affine_primitive<T: Real>(
    cover: &CoverNerve,
    partition: &Partition<T>,
    a: &[Cochain<T>],
    a_prime: &[Cochain<T>],
) -> Vec<Cochain<T>> {
    let eta: Vec<Cochain<T>> = a_prime.iter().zip(a).map(|(x, y)| x.sub(y)).collect();
    let charts: Vec<usize> = cover.nerve.vertices().collect();
    charts
        .iter()
        .enumerate()
        .map(|(ai, &alpha)| {
            let sub = cover.overlap(0, ai);
            charts.iter().fold(sub.complex.zero_cochain(1), |acc, &c| {
                if c == alpha {
                    return acc;
                }
                acc.sub(&cup_into(cover, &partition.psi[c], sub, 1, |e| {
                    overlap_value(cover, &eta, &[alpha, c], e).expect("edge in overlap")
                }))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cech::integer_class;
    use crate::scenarios::SphereCover;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pairing(sc: &SphereCover, w: &CurvatureForm<f64>) -> Complex<f64> {
        sc.cover.base.integrate(&w.omega, &sc.fundamental_cycle()).unwrap() / Complex::new(0.0, std::f64::consts::TAU)
    }

    #[test]
    fn trivial_data() {
        let sc = SphereCover::new(4).unwrap();
        let d = DeligneData::<f64>::trivial(sc.cover.clone());
        let r = check_deligne(&d);
        assert!(r.passed());
        assert_eq!(r.max_residual(), 0.0);
        let psi = Partition::<f64>::hat(&sc.cover).unwrap();
        let b = build_connection(sc.cover.clone(), &d.g, &psi, CurvingRoute::default()).unwrap();
        assert!(b.a.iter().all(|x| x.max_abs() == 0.0) && b.f.iter().all(|x| x.max_abs() == 0.0));
        assert_eq!(curvature_three_form(&b).unwrap().omega.max_abs(), 0.0);
        let k = curving_from_chart(&b, 0, &sc.cover.overlap(0, 0).complex.zero_cochain(1)).unwrap();
        assert_eq!(k.max_abs(), 0.0);
        assert_eq!(curving_from_chart(&b, 9, &k).unwrap_err(), Error::ChartUnknown(9));
    }

    #[test]
    fn class_k_pipeline() {
        let sc = SphereCover::new(4).unwrap();
        let hat = Partition::<f64>::hat(&sc.cover).unwrap();
        let weighted = Partition::<f64>::weighted(&sc.cover, 3).unwrap();
        for k in -2..=3 {
            let g = build_from_integer_class(&sc.cover, &sc.generator_cocycle(k), &hat).unwrap();
            assert!(g.coboundary(&sc.cover).distance_from_one() < 1e-12);
            assert_eq!(integer_class(&sc.cover, &g).unwrap().class_vector, vec![k]);
            let d = build_connection(sc.cover.clone(), &g, &hat, CurvingRoute::PartitionOfUnity).unwrap();
            assert!(check_deligne(&d).passed(), "{:?}", check_deligne(&d).max_residual());
            let w = curvature_three_form(&d).unwrap();
            let p = pairing(&sc, &w);
            assert!((p - Complex::new(k as f64, 0.0)).norm() < 1e-8, "k={k}: {p}");
            let d2 = build_connection(sc.cover.clone(), &g, &weighted, CurvingRoute::PartitionOfUnity).unwrap();
            let p2 = pairing(&sc, &curvature_three_form(&d2).unwrap());
            assert!((p - p2).norm() < 1e-8);
            let d3 = build_connection(sc.cover.clone(), &g, &hat, CurvingRoute::FiberedPrimitive).unwrap();
            assert!(d3.f.iter().zip(&d.f).all(|(x, y)| x.max_diff(y) < 1e-12));
            // dK = −ω on each chart
            for (ai, &chart) in sc.cover.nerve.vertices().collect::<Vec<_>>().iter().enumerate() {
                let sub = sc.cover.overlap(0, ai);
                let mut rng = ChaCha8Rng::seed_from_u64((k + 100) as u64);
                let al = Cochain::from_real(1, (0..sub.complex.count(1)).map(|_| rng.gen_range(-1.0..1.0)));
                let kk = curving_from_chart(&d, chart, &al).unwrap();
                let dk = sub.complex.coboundary_unchecked(&kk);
                assert!(dk.add(&sub.restrict(&w.omega)).max_abs() < 1e-9);
            }
        }
    }

    #[test]
    fn perturbed_connection_fails_locally() {
        let sc = SphereCover::new(4).unwrap();
        let hat = Partition::<f64>::hat(&sc.cover).unwrap();
        let g = build_from_integer_class(&sc.cover, &sc.generator_cocycle(1), &hat).unwrap();
        let mut d = build_connection(sc.cover.clone(), &g, &hat, CurvingRoute::default()).unwrap();
        d.a[0].values[0] += Complex::new(1e-3, 0.0);
        let r = check_deligne(&d);
        assert!(!r.passed());
        let all: Vec<f64> = r.triple.iter().chain(&r.double).map(|x| x.1).collect();
        assert!(all.iter().any(|x| *x > 5e-4));
        assert!(all.iter().any(|x| *x < 1e-9));
    }

    #[test]
    fn connections_differ_by_a_coboundary() {
        let sc = SphereCover::new(4).unwrap();
        let hat = Partition::<f64>::hat(&sc.cover).unwrap();
        let weighted = Partition::<f64>::weighted(&sc.cover, 11).unwrap();
        let g = build_from_integer_class(&sc.cover, &sc.generator_cocycle(2), &hat).unwrap();
        let d1 = build_connection(sc.cover.clone(), &g, &hat, CurvingRoute::default()).unwrap();
        let d2 = build_connection(sc.cover.clone(), &g, &weighted, CurvingRoute::default()).unwrap();
        let mu = affine_primitive(&sc.cover, &hat, &d1.a, &d2.a);
        for (i, s) in sc.cover.nerve.simplices(1).iter().enumerate() {
            for (e, edge) in sc.cover.overlap(1, i).complex.simplices(1).iter().enumerate() {
                let eta = d2.a[i].values[e] - d1.a[i].values[e];
                let diff = overlap_value(&sc.cover, &mu, &[s[1]], edge).unwrap()
                    - overlap_value(&sc.cover, &mu, &[s[0]], edge).unwrap();
                assert!((eta - diff).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn coboundary_gerbe_has_exact_curvature() {
        let sc = SphereCover::new(4).unwrap();
        let hat = Partition::<f64>::hat(&sc.cover).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let rho = CxCochain::from_log_fn(&sc.cover, 1, |_, _| Complex::new(0.0, rng.gen_range(-7.0..7.0)));
        let g = rho.coboundary(&sc.cover);
        let d = build_connection(sc.cover.clone(), &g, &hat, CurvingRoute::default()).unwrap();
        let w = curvature_three_form(&d).unwrap();
        assert!(pairing(&sc, &w).norm() < 1e-8);
        assert!(matches!(build_from_integer_class(&sc.cover, &[1, 0], &hat), Err(Error::InconsistentInput(_))));
    }
}
