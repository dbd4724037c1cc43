use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{Signed, ToPrimitive, Zero};

use super::cochain::CxCochain;
use super::cover::CoverNerve;
use crate::complex::snf::SmithForm;
use crate::complex::{faces, OrientedSimplicialComplex};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const INTEGRALITY_TOL: f64 = 1e-6;
pub const RESIDUAL_TOL: f64 = 1e-9;

/// An integer Čech cocycle on the nerve and its pairing with the free
/// homology generators of the nerve in the same degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerClass {
    pub degree: usize,
    pub cocycle: Vec<i64>,
    pub class_vector: Vec<i64>,
}

/// Integer coboundary of a cochain on the nerve.
pub fn integer_coboundary(nerve: &OrientedSimplicialComplex, degree: usize, c: &[i64]) -> Vec<i64> {
    nerve
        .boundary_matrix(degree + 1)
        .cols
        .iter()
        .map(|col| col.iter().map(|&(i, s)| s * c[i]).sum())
        .collect()
}

/// Free homology generators of the nerve, each normalized so that its
/// first nonzero coefficient is positive.
pub fn homology_generators(nerve: &OrientedSimplicialComplex, degree: usize) -> Vec<Vec<(usize, i64)>> {
    nerve
        .homology(degree)
        .cycle_basis
        .iter()
        .map(|z| {
            let terms: Vec<(usize, BigInt)> = z.integer_terms().expect("integral generator");
            let flip = terms.first().is_some_and(|(_, x)| x.is_negative());
            terms
                .into_iter()
                .map(|(i, x)| (i, x.to_i64().expect("small coefficient") * if flip { -1 } else { 1 }))
                .collect()
        })
        .collect()
}

impl IntegerClass {
    pub fn from_cocycle(nerve: &OrientedSimplicialComplex, degree: usize, cocycle: Vec<i64>) -> Result<Self> {
        if cocycle.len() != nerve.count(degree) {
            return Err(Error::InconsistentInput(format!(
                "integer cochain of degree {degree} needs {} values",
                nerve.count(degree)
            )));
        }
        if integer_coboundary(nerve, degree, &cocycle).iter().any(|&x| x != 0) {
            return Err(Error::NotAnIntegerCocycle);
        }
        let class_vector = homology_generators(nerve, degree)
            .iter()
            .map(|z| z.iter().map(|&(i, x)| x * cocycle[i]).sum())
            .collect();
        Ok(IntegerClass { degree, cocycle, class_vector })
    }

    /// `Some(m)` with δm = n when the class vanishes in integer cohomology.
    pub fn trivializing_cochain(&self, nerve: &OrientedSimplicialComplex) -> Option<Vec<i64>> {
        if self.degree == 0 {
            return self.cocycle.iter().all(|&x| x == 0).then(Vec::new);
        }
        let d = nerve.boundary_matrix(self.degree);
        let (rows, cols) = (d.ncols(), d.nrows);
        let mut a = vec![vec![BigInt::zero(); cols]; rows];
        for (j, col) in d.cols.iter().enumerate() {
            for &(i, x) in col {
                a[j][i] = BigInt::from(x);
            }
        }
        let b: Vec<BigInt> = self.cocycle.iter().map(|&x| BigInt::from(x)).collect();
        let m = SmithForm::compute(&a, rows, cols).solve_integer(&b)?;
        m.into_iter().map(|x| x.to_i64()).collect()
    }

    pub fn is_trivial(&self, nerve: &OrientedSimplicialComplex) -> bool {
        self.trivializing_cochain(nerve).is_some()
    }
}

/// Integer cocycle n = (1/2πi)·δ(branch log g) of a ℂ×-valued cocycle.
pub fn integer_class<T: Real>(cover: &CoverNerve, g: &CxCochain<T>) -> Result<IntegerClass> {
    let branch = g.branch_logs();
    let q = g.level + 1;
    let tau = T::two_pi();
    let mut cocycle = Vec::with_capacity(cover.level_len(q));
    for (i, s) in cover.nerve.simplices(q).iter().enumerate() {
        let mut value: Option<i64> = None;
        for v in cover.overlap(q, i).complex.vertices() {
            let sum = faces(s).fold(Complex::new(T::zero(), T::zero()), |acc, (f, sign)| {
                let (fi, _) = cover.locate(&f).expect("face of nerve simplex");
                let local = cover.overlap(g.level, fi).complex.index_of(&[v]).expect("vertex in face overlap");
                let l = branch[fi][local];
                if sign > 0 { acc + l } else { acc - l }
            });
            if sum.re.abs() > T::from_f64_lossy(RESIDUAL_TOL) {
                return Err(Error::NotACocycle(sum.re.abs().to_f64().unwrap_or(f64::NAN)));
            }
            let x = (sum.im / tau).to_f64().unwrap_or(f64::NAN);
            let n = x.round();
            if (x - n).abs() > INTEGRALITY_TOL || !x.is_finite() {
                return Err(Error::NonIntegralResult((x - n).abs()));
            }
            match value {
                None => value = Some(n as i64),
                Some(m) if m != n as i64 => {
                    return Err(Error::BranchAmbiguity(format!(
                        "overlap {s:?}: integer {m} at one vertex, {n} at {v}"
                    )))
                }
                _ => {}
            }
        }
        cocycle.push(value.expect("nonempty overlap"));
    }
    IntegerClass::from_cocycle(&cover.nerve, q, cocycle)
}

/// Least-norm ρ with δρ = g, when the integer class of g is trivial.
pub fn solve_trivialization<T: Real>(cover: &CoverNerve, g: &CxCochain<T>) -> Result<CxCochain<T>> {
    let n = integer_class(cover, g)?;
    let m = n.trivializing_cochain(&cover.nerve).ok_or(Error::ClassNonTrivial)?;
    let tau = T::two_pi();
    let h_logs: Vec<Vec<Complex<T>>> = g
        .branch_logs()
        .into_iter()
        .zip(&m)
        .map(|(l, &mi)| {
            let shift = Complex::new(T::zero(), tau * T::from_f64_lossy(mi as f64));
            l.into_iter().map(|x| x - shift).collect()
        })
        .collect();
    let h = CxCochain::from_logs(g.level, h_logs);
    // on the full simplex of charts at a vertex, averaging the cone
    // contractions inverts δ with minimal norm
    let rho = CxCochain::from_log_fn(cover, g.level - 1, |s, v| {
        let charts = cover.charts_at(v);
        let sum = charts.iter().fold(Complex::new(T::zero(), T::zero()), |acc, &c| {
            let mut t = vec![c];
            t.extend_from_slice(s);
            acc + h.log_at(cover, &t, v).expect("charts at v overlap")
        });
        sum / T::from_f64_lossy(charts.len() as f64)
    });
    let residual = rho.coboundary(cover).distance(g);
    if residual > T::from_f64_lossy(RESIDUAL_TOL) {
        return Err(Error::NotACocycle(residual.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(rho)
}
