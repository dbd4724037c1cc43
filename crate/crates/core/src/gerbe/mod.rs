//! Bundle gerbes over the disjoint union of the charts of a good cover:
//! Dixmier-Douady classes, trivialization, products and pullbacks.

mod lifting;

use std::collections::BTreeSet;
use std::sync::Arc;


use num_complex::Complex;

use crate::cech::{integer_class, solve_trivialization, CoverNerve, CxCochain, IntegerClass, Partition, RESIDUAL_TOL};
use crate::complex::{Chain, OrientedSimplicialComplex};
use crate::connection::{build_connection, curvature_three_form, CurvingRoute};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub use lifting::{
    cyclic_table, lift_defect, lift_exists, lifting_obstruction, CentralExtension, Element, Lift, PrincipalBundleData,
};

/// A bundle gerbe on Y = ⊔U_α, recorded by its cocycle g_αβγ; `sections`
/// holds the σ_αβ used to produce g, when known.
#[derive(Debug, Clone)]
pub struct GerbePresentation<T> {
    pub cover: Arc<CoverNerve>,
    pub g: CxCochain<T>,
    pub sections: Option<CxCochain<T>>,
}

/// Clutching data ρ with δρ = g, and how well π₁⁻¹Q* ⊗ π₂⁻¹Q reproduces g.
#[derive(Debug, Clone)]
pub struct Trivialization<T> {
    pub rho: CxCochain<T>,
    pub residual: f64,
}

impl<T: Real> GerbePresentation<T> {
    pub fn new(cover: Arc<CoverNerve>, g: CxCochain<T>) -> Result<Self> {
        if g.level != 2 || g.len() != cover.level_len(2) {
            return Err(Error::InconsistentInput("a gerbe cocycle lives on triple overlaps".into()));
        }
        let defect = g.coboundary(&cover).distance_from_one();
        if defect > T::from_f64_lossy(RESIDUAL_TOL) {
            return Err(Error::NotACocycle(defect.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(GerbePresentation { cover, g, sections: None })
    }

    pub fn trivial(cover: Arc<CoverNerve>) -> Self {
        let g = CxCochain::one(&cover, 2);
        GerbePresentation { cover, g, sections: None }
    }

    /// The gerbe of the local sections σ_αβ over a trivial bundle: g = δσ.
    pub fn from_sections(cover: Arc<CoverNerve>, sigma: CxCochain<T>) -> Result<Self> {
        let mut gp = Self::new(cover.clone(), sigma.coboundary(&cover))?;
        gp.sections = Some(sigma);
        Ok(gp)
    }

    /// Same gerbe with the sections multiplied by ρ; g changes by δρ.
    pub fn resection(&self, rho: &CxCochain<T>) -> Self {
        GerbePresentation {
            cover: self.cover.clone(),
            g: self.g.mul(&rho.coboundary(&self.cover)),
            sections: Some(self.sections.as_ref().map_or_else(|| rho.clone(), |s| s.mul(rho))),
        }
    }

    /// Pointwise inverse; for unitary data the complex conjugate.
    pub fn inverse(&self) -> Self {
        GerbePresentation { cover: self.cover.clone(), g: self.g.inv(), sections: self.sections.as_ref().map(|s| s.inv()) }
    }
}

pub fn dd_cocycle<T: Real>(gp: &GerbePresentation<T>) -> Result<IntegerClass> {
    integer_class(&gp.cover, &gp.g)
}

pub fn reconstruction_residual<T: Real>(gp: &GerbePresentation<T>, rho: &CxCochain<T>) -> f64 {
    rho.coboundary(&gp.cover).distance(&gp.g).to_f64().unwrap_or(f64::NAN)
}

pub fn trivialize<T: Real>(gp: &GerbePresentation<T>) -> Result<Trivialization<T>> {
    let class = dd_cocycle(gp)?;
    if !class.is_trivial(&gp.cover.nerve) {
        return Err(Error::ClassNonTrivial);
    }
    let rho = solve_trivialization(&gp.cover, &gp.g)?;
    let residual = reconstruction_residual(gp, &rho);
    Ok(Trivialization { rho, residual })
}

/// Gerbe cocycle transported to a cover of `domain` whose chart i maps into
/// chart `chart_map[i]` of the original cover under `phi`.
fn transport<T: Real>(
    gp: &GerbePresentation<T>,
    target: &CoverNerve,
    chart_map: &[usize],
    phi: impl Fn(usize) -> usize,
) -> CxCochain<T> {
    CxCochain::from_log_fn(target, 2, |s, v| {
        let old: Vec<usize> = s.iter().map(|&i| chart_map[i]).collect();
        gp.g.log_at(&gp.cover, &old, phi(v)).expect("refined overlap maps into an overlap")
    })
}

/// The maximal nonempty intersections U_α ∩ V_β, with their (α, β).
fn intersection_charts(a: &CoverNerve, b: &CoverNerve) -> (Vec<BTreeSet<usize>>, Vec<(usize, usize)>) {
    let mut cand: Vec<(BTreeSet<usize>, (usize, usize))> = Vec::new();
    for (i, u) in a.charts.iter().enumerate() {
        for (j, v) in b.charts.iter().enumerate() {
            let w: BTreeSet<usize> = u.intersection(v).copied().collect();
            if !w.is_empty() && !cand.iter().any(|(c, _)| *c == w) {
                cand.push((w, (i, j)));
            }
        }
    }
    let keep: Vec<bool> =
        cand.iter().map(|(w, _)| !cand.iter().any(|(x, _)| x.len() > w.len() && w.is_subset(x))).collect();
    cand.into_iter().zip(keep).filter(|(_, k)| *k).map(|(c, _)| c).unzip()
}

/// Product of two gerbes on the same base; distinct covers are replaced by
/// their maximal pairwise intersections.
pub fn gerbe_product<T: Real>(a: &GerbePresentation<T>, b: &GerbePresentation<T>) -> Result<GerbePresentation<T>> {
    if a.cover.base.simplices(0) != b.cover.base.simplices(0) || a.cover.base.dim() != b.cover.base.dim() {
        return Err(Error::InconsistentInput("gerbes live on different bases".into()));
    }
    if Arc::ptr_eq(&a.cover, &b.cover) || a.cover.charts == b.cover.charts {
        return GerbePresentation::new(a.cover.clone(), a.g.mul(&b.g));
    }
    let (charts, pairs) = intersection_charts(&a.cover, &b.cover);
    let cover = CoverNerve::new(a.cover.base.clone(), charts).map_err(|e| Error::RefinementNotGood(e.to_string()))?;
    let (ma, mb): (Vec<usize>, Vec<usize>) = pairs.into_iter().unzip();
    let g = transport(a, &cover, &ma, |v| v).mul(&transport(b, &cover, &mb, |v| v));
    GerbePresentation::new(Arc::new(cover), g)
}

/// Pullback along a simplicial map from `domain`, given on vertex labels;
/// the cover is the family of nonempty preimages.
pub fn pullback<T: Real>(
    gp: &GerbePresentation<T>,
    domain: Arc<OrientedSimplicialComplex>,
    phi: impl Fn(usize) -> usize,
) -> Result<GerbePresentation<T>> {
    let base = &gp.cover.base;
    for d in 0..=domain.dim() {
        for s in domain.simplices(d) {
            let img: BTreeSet<usize> = s.iter().map(|&v| phi(v)).collect();
            let img: Vec<usize> = img.into_iter().collect();
            if base.index_of(&img).is_none() {
                return Err(Error::InconsistentInput(format!("{s:?} maps to {img:?}, not a simplex")));
            }
        }
    }
    let mut charts = Vec::new();
    let mut chart_map = Vec::new();
    for (a, u) in gp.cover.charts.iter().enumerate() {
        let pre: BTreeSet<usize> = domain.vertices().filter(|&v| u.contains(&phi(v))).collect();
        if !pre.is_empty() {
            charts.push(pre);
            chart_map.push(a);
        }
    }
    let cover = CoverNerve::new(domain, charts).map_err(|e| Error::PullbackCoverNotGood(e.to_string()))?;
    let g = transport(gp, &cover, &chart_map, phi);
    GerbePresentation::new(Arc::new(cover), g)
}

/// (1/2πi)∫_z ω for the curvature of the partition-of-unity connection:
/// the DD class evaluated on a 3-cycle of the base, independent of the
/// cover's labelling.
pub fn base_pairing<T: Real>(gp: &GerbePresentation<T>, z: &Chain) -> Result<Complex<T>> {
    let psi = Partition::hat(&gp.cover)?;
    let d = build_connection(gp.cover.clone(), &gp.g, &psi, CurvingRoute::default())?;
    let omega = curvature_three_form(&d)?.omega;
    Ok(gp.cover.base.integrate(&omega, z)? / Complex::new(T::zero(), T::two_pi()))
}

#[cfg(test)]
mod tests;
