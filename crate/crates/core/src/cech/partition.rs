use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cover::CoverNerve;
use crate::complex::{Cochain, Subcomplex};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Partition of unity subordinate to a cover, as 0-cochains on the base.
///
/// `psi[α][v]` is indexed by base vertex index. Chart α may be nonzero at v
/// only when v and all its higher-labelled neighbours lie in U_α, so that
/// the leading-vertex cup product ψ_α ∪ η only ever evaluates η on
/// simplices inside U_α.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition<T> {
    pub psi: Vec<Vec<T>>,
}

/// Charts admissible at every base vertex.
fn admissible(cover: &CoverNerve) -> Vec<Vec<usize>> {
    let base = &cover.base;
    base.vertices()
        .map(|v| {
            let up: Vec<usize> = base.neighbours(v).into_iter().filter(|&w| w > v).collect();
            cover.charts_at(v).iter().copied().filter(|&a| up.iter().all(|w| cover.charts[a].contains(w))).collect()
        })
        .collect()
}

impl<T: Real> Partition<T> {
    /// Equal weights on the admissible charts.
    pub fn hat(cover: &CoverNerve) -> Result<Self> {
        Self::weighted_by(cover, |_, _| T::one())
    }

    /// Seeded positive weights on the same support as [`Partition::hat`].
    pub fn weighted(cover: &CoverNerve, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = cover.base.count(0);
        let w: Vec<Vec<f64>> = (0..cover.charts.len()).map(|_| (0..n).map(|_| rng.gen_range(0.5..2.0)).collect()).collect();
        Self::weighted_by(cover, |a, i| T::from_f64_lossy(w[a][i]))
    }

    fn weighted_by(cover: &CoverNerve, weight: impl Fn(usize, usize) -> T) -> Result<Self> {
        let n = cover.base.count(0);
        let mut psi = vec![vec![T::zero(); n]; cover.charts.len()];
        for (i, adm) in admissible(cover).into_iter().enumerate() {
            if adm.is_empty() {
                return Err(Error::PartitionInvalid(format!(
                    "no chart contains vertex {} together with its upper neighbours",
                    cover.base.simplex(0, i)[0]
                )));
            }
            let total = adm.iter().fold(T::zero(), |s, &a| s + weight(a, i));
            for a in adm {
                psi[a][i] = weight(a, i) / total;
            }
        }
        let p = Partition { psi };
        p.validate(cover)?;
        Ok(p)
    }

    pub fn validate(&self, cover: &CoverNerve) -> Result<()> {
        let n = cover.base.count(0);
        if self.psi.len() != cover.charts.len() || self.psi.iter().any(|p| p.len() != n) {
            return Err(Error::PartitionInvalid("shape does not match the cover".into()));
        }
        let adm = admissible(cover);
        for i in 0..n {
            let mut sum = T::zero();
            for (a, p) in self.psi.iter().enumerate() {
                if p[i] < T::zero() {
                    return Err(Error::PartitionInvalid(format!("negative weight for chart {a}")));
                }
                if p[i] != T::zero() && !adm[i].contains(&a) {
                    return Err(Error::PartitionInvalid(format!(
                        "chart {a} is not admissible at vertex {}",
                        cover.base.simplex(0, i)[0]
                    )));
                }
                sum += p[i];
            }
            if (sum - T::one()).abs() > T::from_f64_lossy(1e-12) {
                return Err(Error::PartitionInvalid(format!("weights sum to {sum} at vertex index {i}")));
            }
        }
        Ok(())
    }

    /// Weight of chart α at a base vertex label.
    pub fn at(&self, cover: &CoverNerve, a: usize, v: usize) -> T {
        self.psi[a][cover.base.index_of(&[v]).expect("base vertex")]
    }

    pub fn as_cochain(&self, a: usize) -> Cochain<T> {
        Cochain::from_real(0, self.psi[a].iter().copied())
    }
}

/// Leading-vertex cup product ψ ∪ η on a target subcomplex of the base.
///
/// `eta(simplex)` is consulted only where ψ is nonzero at the leading
/// vertex, and must return the value of η there.
pub fn cup_into<T: Real>(
    cover: &CoverNerve,
    psi: &[T],
    target: &Subcomplex,
    degree: usize,
    mut eta: impl FnMut(&[usize]) -> num_complex::Complex<T>,
) -> Cochain<T> {
    let mut out = Cochain::zeros(degree, target.complex.count(degree));
    for (i, s) in target.complex.simplices(degree).iter().enumerate() {
        let w = psi[cover.base.index_of(&[s[0]]).expect("base vertex")];
        if w != T::zero() {
            out.values[i] = eta(s) * w;
        }
    }
    out
}
