use std::collections::VecDeque;

use num_complex::Complex;

use super::cover::CoverNerve;
use super::value::{wrap_angle, CxValue};
use crate::complex::Cochain;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A ℂ×-valued Čech cochain: on every level-q overlap, a nonvanishing
/// function on the overlap's vertices.
///
/// Each function is stored as a continuous logarithm (one complex number
/// per vertex, continuous along edges). Normalized values and the integer
/// winding of every overlap edge are read off from it; the logarithm is
/// determined by them up to one 2πi shift per overlap.
#[derive(Debug, Clone, PartialEq)]
pub struct CxCochain<T> {
    pub level: usize,
    logs: Vec<Vec<Complex<T>>>,
}

fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

impl<T: Real> CxCochain<T> {
    /// From a continuous logarithm `f(chart tuple, vertex label)` on every
    /// level-q overlap (chart tuples ascending).
    pub fn from_log_fn(cover: &CoverNerve, level: usize, mut f: impl FnMut(&[usize], usize) -> Complex<T>) -> Self {
        let logs = (0..cover.level_len(level))
            .map(|i| {
                let s = cover.nerve.simplex(level, i);
                cover.overlap(level, i).complex.vertices().map(|v| f(s, v)).collect()
            })
            .collect();
        CxCochain { level, logs }
    }

    pub(crate) fn from_logs(level: usize, logs: Vec<Vec<Complex<T>>>) -> Self {
        CxCochain { level, logs }
    }

    pub fn one(cover: &CoverNerve, level: usize) -> Self {
        Self::from_log_fn(cover, level, |_, _| zero())
    }

    /// From normalized values and optional edge windings (default 0),
    /// unwrapping along a spanning tree of every overlap.
    pub fn from_values(
        cover: &CoverNerve,
        level: usize,
        values: &[Vec<CxValue<T>>],
        windings: Option<&[Vec<i64>]>,
    ) -> Result<Self> {
        if values.len() != cover.level_len(level) {
            return Err(Error::InconsistentInput(format!(
                "level {level} cochain needs {} overlaps, got {}",
                cover.level_len(level),
                values.len()
            )));
        }
        let tau = T::two_pi();
        let mut logs = Vec::with_capacity(values.len());
        for (i, vals) in values.iter().enumerate() {
            let sub = &cover.overlap(level, i).complex;
            if vals.len() != sub.count(0) {
                return Err(Error::InconsistentInput(format!("overlap {i}: wrong number of vertex values")));
            }
            let wind = windings.map(|w| &w[i]);
            let diff = |e: usize| -> Complex<T> {
                let m = &sub.boundary_matrix(1).cols[e];
                let (a, b) = (m[0].0, m[1].0);
                let w = wind.and_then(|w| w.get(e)).copied().unwrap_or(0);
                Complex::new(
                    vals[b].log_modulus - vals[a].log_modulus,
                    wrap_angle(vals[b].angle - vals[a].angle) + tau * T::from_f64_lossy(w as f64),
                )
            };
            let mut log: Vec<Option<Complex<T>>> = vec![None; vals.len()];
            log[0] = Some(vals[0].log());
            let mut adj = vec![Vec::new(); vals.len()];
            for (e, col) in sub.boundary_matrix(1).cols.iter().enumerate() {
                adj[col[0].0].push(e);
                adj[col[1].0].push(e);
            }
            let mut queue = VecDeque::from([0]);
            while let Some(a) = queue.pop_front() {
                for &e in &adj[a] {
                    let col = &sub.boundary_matrix(1).cols[e];
                    let (tail, head) = (col[0].0, col[1].0);
                    let (other, l) = if tail == a {
                        (head, log[a].unwrap() + diff(e))
                    } else {
                        (tail, log[a].unwrap() - diff(e))
                    };
                    if log[other].is_none() {
                        log[other] = Some(l);
                        queue.push_back(other);
                    }
                }
            }
            let log: Vec<Complex<T>> = log
                .into_iter()
                .map(|l| l.ok_or_else(|| Error::BranchAmbiguity(format!("overlap {i} is disconnected"))))
                .collect::<Result<_>>()?;
            let tol = T::from_f64_lossy(1e-9);
            for (e, col) in sub.boundary_matrix(1).cols.iter().enumerate() {
                if (log[col[1].0] - log[col[0].0] - diff(e)).norm() > tol {
                    let s = cover.nerve.simplex(level, i);
                    return Err(Error::BranchAmbiguity(format!(
                        "overlap {s:?}: unwrapping disagrees on edge {:?}",
                        sub.simplex(1, e)
                    )));
                }
            }
            logs.push(log);
        }
        Ok(CxCochain { level, logs })
    }

    pub fn len(&self) -> usize {
        self.logs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.logs.is_empty()
    }

    /// Continuous logarithm on overlap i, by local vertex index.
    pub fn logs(&self, i: usize) -> &[Complex<T>] {
        &self.logs[i]
    }

    pub fn value(&self, i: usize, local_vertex: usize) -> CxValue<T> {
        CxValue::from_log(self.logs[i][local_vertex])
    }

    pub fn values(&self) -> Vec<Vec<CxValue<T>>> {
        self.logs.iter().map(|l| l.iter().map(|&x| CxValue::from_log(x)).collect()).collect()
    }

    /// Winding of every overlap edge (local edge order).
    pub fn windings(&self, cover: &CoverNerve) -> Vec<Vec<i64>> {
        let tau = T::two_pi();
        self.logs
            .iter()
            .enumerate()
            .map(|(i, log)| {
                cover.overlap(self.level, i).complex.boundary_matrix(1).cols.iter()
                    .map(|col| {
                        let (a, b) = (log[col[0].0], log[col[1].0]);
                        let wrapped = wrap_angle(b.im - a.im);
                        ((b.im - a.im - wrapped) / tau).round().to_i64().unwrap_or(0)
                    })
                    .collect()
            })
            .collect()
    }

    /// Logarithm at vertex `v` for an arbitrary chart tuple, honouring
    /// antisymmetry; repeated charts give the identity.
    pub fn log_at(&self, cover: &CoverNerve, tuple: &[usize], v: usize) -> Option<Complex<T>> {
        if tuple.len() != self.level + 1 {
            return None;
        }
        let mut sorted = tuple.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Some(zero());
        }
        let (i, sign) = cover.locate(tuple)?;
        let local = cover.overlap(self.level, i).complex.index_of(&[v])?;
        let l = self.logs[i][local];
        Some(if sign > 0 { l } else { -l })
    }

    pub fn map_logs(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        CxCochain { level: self.level, logs: self.logs.iter().map(|l| l.iter().map(|&x| f(x)).collect()).collect() }
    }

    pub fn zip_logs(&self, o: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Self {
        assert_eq!(self.level, o.level);
        CxCochain {
            level: self.level,
            logs: self.logs.iter().zip(&o.logs).map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.zip_logs(o, |a, b| a + b)
    }

    pub fn div(&self, o: &Self) -> Self {
        self.zip_logs(o, |a, b| a - b)
    }

    pub fn inv(&self) -> Self {
        self.map_logs(|a| -a)
    }

    /// Pointwise complex conjugate (the inverse for unit-modulus data).
    pub fn conj(&self) -> Self {
        self.map_logs(|a| a.conj())
    }

    pub fn pow(&self, k: i64) -> Self {
        let k = T::from_f64_lossy(k as f64);
        self.map_logs(|a| a * k)
    }

    /// Multiplicative Čech coboundary (δc)_σ = Π c_{∂_iσ}^{(−1)^i}.
    pub fn coboundary(&self, cover: &CoverNerve) -> Self {
        let q = self.level + 1;
        let logs = (0..cover.level_len(q))
            .map(|i| {
                let s = cover.nerve.simplex(q, i);
                let sub = &cover.overlap(q, i).complex;
                sub.vertices()
                    .map(|v| {
                        crate::complex::faces(s).fold(zero(), |acc, (f, sign)| {
                            let l = self.log_at(cover, &f, v).expect("face overlap contains vertex");
                            if sign > 0 { acc + l } else { acc - l }
                        })
                    })
                    .collect()
            })
            .collect();
        CxCochain { level: q, logs }
    }

    /// Continuous branch of the logarithm with the basepoint (lowest
    /// vertex) angle in (−π, π].
    pub fn branch_logs(&self) -> Vec<Vec<Complex<T>>> {
        let tau = T::two_pi();
        self.logs
            .iter()
            .map(|l| {
                let shift = l[0].im - wrap_angle(l[0].im);
                let shift = tau * (shift / tau).round();
                l.iter().map(|&x| Complex::new(x.re, x.im - shift)).collect()
            })
            .collect()
    }

    /// Edge-wise logarithmic derivative on overlap i: a 1-cochain on the
    /// overlap subcomplex.
    pub fn dlog(&self, cover: &CoverNerve, i: usize) -> Cochain<T> {
        let sub = &cover.overlap(self.level, i).complex;
        let log = &self.logs[i];
        Cochain {
            degree: 1,
            values: sub.boundary_matrix(1).cols.iter().map(|c| log[c[1].0] - log[c[0].0]).collect(),
        }
    }

    /// max over all vertices of the distance of the value from 1.
    pub fn distance_from_one(&self) -> T {
        self.logs
            .iter()
            .flatten()
            .fold(T::zero(), |m, &x| m.max(CxValue::from_log(x).distance_from_one()))
    }

    pub fn distance(&self, o: &Self) -> T {
        self.div(o).distance_from_one()
    }
}
