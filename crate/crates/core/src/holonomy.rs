//! Surface holonomy of Deligne data, the WZW action and the ball-boundary
//! identity.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::cech::{CoverNerve, CxValue};
use crate::complex::{orient, Chain, OrientedSimplicialComplex};
use crate::connection::{check_deligne, CurvatureForm, DeligneData};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const HOLONOMY_TOL: f64 = 1e-8;

/// An integer 2-cycle on a triangulated surface, mapped simplicially into
/// the base, with a chart assigned to every face of its support.
#[derive(Debug, Clone)]
pub struct SurfaceInBase {
    pub surface: Arc<OrientedSimplicialComplex>,
    /// Oriented fundamental cycle.
    pub cycle: Chain,
    /// Base vertex label of every surface vertex label.
    pub vertex_map: HashMap<usize, usize>,
    /// Chart of every face in the support (surface triangle index).
    pub subordination: HashMap<usize, usize>,
}

fn image(map: &HashMap<usize, usize>, s: &[usize]) -> Vec<usize> {
    s.iter().map(|v| map[v]).collect()
}

/// Base simplex and sign of an image tuple; `None` when degenerate.
fn image_simplex(tuple: &[usize]) -> Option<(Vec<usize>, f64)> {
    orient(tuple).ok().map(|(s, sign)| (s, sign as f64))
}

impl SurfaceInBase {
    /// Surface from oriented triangles (the tuple order is the orientation).
    pub fn new(
        triangles: &[Vec<usize>],
        vertex_map: HashMap<usize, usize>,
        subordination: &[(Vec<usize>, usize)],
    ) -> Result<Self> {
        let surface = OrientedSimplicialComplex::new(triangles)?;
        let cycle = surface.chain(2, &triangles.iter().map(|t| (t.clone(), 1)).collect::<Vec<_>>())?;
        let mut sub = HashMap::new();
        for (t, chart) in subordination {
            let (i, _) = surface
                .oriented_index(t)
                .ok_or_else(|| Error::SubordinationInvalid(format!("{t:?} is not a face")))?;
            sub.insert(i, *chart);
        }
        Ok(SurfaceInBase { surface: Arc::new(surface), cycle, vertex_map, subordination: sub })
    }

    /// A 2-cycle of the base itself, each face assigned its lowest chart.
    pub fn from_base_cycle(cover: &CoverNerve, cycle: Chain) -> Result<Self> {
        let base = cover.base.clone();
        let vertex_map = base.vertices().map(|v| (v, v)).collect();
        let mut subordination = HashMap::new();
        for &i in cycle.coeffs.keys() {
            let t = base.simplex(2, i);
            let chart = *cover
                .charts_containing(t)
                .first()
                .ok_or_else(|| Error::SubordinationInvalid(format!("{t:?} lies in no chart")))?;
            subordination.insert(i, chart);
        }
        Ok(SurfaceInBase { surface: base, cycle, vertex_map, subordination })
    }

    /// Charts that contain the image of a support face.
    pub fn valid_charts(&self, cover: &CoverNerve, face: usize) -> Vec<usize> {
        let img = image(&self.vertex_map, self.surface.simplex(2, face));
        let mut img_sorted = img.clone();
        img_sorted.sort_unstable();
        img_sorted.dedup();
        cover.charts_containing(&img_sorted)
    }

    /// Pushforward of the fundamental cycle to the base.
    pub fn pushforward(&self, base: &OrientedSimplicialComplex) -> Result<Chain> {
        let mut out = Chain::zero(2);
        for (&i, x) in &self.cycle.coeffs {
            let img = image(&self.vertex_map, self.surface.simplex(2, i));
            if let Some((s, sign)) = image_simplex(&img) {
                let j = base
                    .index_of(&s)
                    .ok_or_else(|| Error::InconsistentInput(format!("image {s:?} is not a base simplex")))?;
                out.add_term(j, x * BigRational::from_integer((sign as i64).into()));
            }
        }
        Ok(out)
    }

    fn validate(&self, cover: &CoverNerve) -> Result<()> {
        if !self.surface.boundary(&self.cycle).is_zero() {
            return Err(Error::InconsistentInput("surface is not closed".into()));
        }
        if !self.cycle.is_integral() {
            return Err(Error::InconsistentInput("surface cycle must be integral".into()));
        }
        for (v, w) in self.surface.vertices().map(|v| (v, self.vertex_map.get(&v))) {
            match w {
                Some(w) if cover.base.contains_vertex(*w) => {}
                _ => return Err(Error::InconsistentInput(format!("vertex {v} has no image in the base"))),
            }
        }
        for &i in self.cycle.coeffs.keys() {
            let chart = *self
                .subordination
                .get(&i)
                .ok_or_else(|| Error::SubordinationInvalid(format!("face {:?} unassigned", self.surface.simplex(2, i))))?;
            if !self.valid_charts(cover, i).contains(&chart) {
                return Err(Error::SubordinationInvalid(format!(
                    "image of face {:?} is not inside chart {chart}",
                    self.surface.simplex(2, i)
                )));
            }
        }
        for k in 1..=2 {
            for s in self.surface.simplices(k) {
                let mut img = image(&self.vertex_map, s);
                img.sort_unstable();
                img.dedup();
                if cover.base.index_of(&img).is_none() {
                    return Err(Error::InconsistentInput(format!("vertex map is not simplicial on {s:?}")));
                }
            }
        }
        Ok(())
    }
}

fn is_unitary<T: Real>(d: &DeligneData<T>) -> bool {
    let tol = T::from_f64_lossy(1e-12);
    d.g.values().iter().flatten().all(|v| v.log_modulus.abs() < tol)
        && d.a.iter().chain(&d.f).all(|c| c.values.iter().all(|x| x.re.abs() < tol))
}

/// Local-formula holonomy: Σ_t ∫_t f_ρ(t) + Σ_{e⊂t} [e:t] ∫_e A_ρ(t)ρ(e)
/// − Σ_{v⊂e⊂t} [e:t][v:e] log g_ρ(t)ρ(e)ρ(v)(v), exponentiated.
pub fn surface_holonomy<T: Real>(d: &DeligneData<T>, sigma: &SurfaceInBase) -> Result<CxValue<T>> {
    let report = check_deligne(d);
    if !report.passed() {
        return Err(Error::DeligneInvalid(report.max_residual()));
    }
    let cover = &d.cover;
    sigma.validate(cover)?;
    let surf = &sigma.surface;
    let map = &sigma.vertex_map;
    // edge and vertex charts: first support face inducing the edge
    // orientation, first support face at the vertex
    let mut edge_chart: HashMap<usize, usize> = HashMap::new();
    let mut vertex_chart: HashMap<usize, usize> = HashMap::new();
    for (&t, x) in &sigma.cycle.coeffs {
        let chart = sigma.subordination[&t];
        for &(e, s) in &surf.boundary_matrix(2).cols[t] {
            let positive = (s > 0) == x.is_positive();
            if positive {
                edge_chart.entry(e).or_insert(chart);
            }
        }
        for &v in surf.simplex(2, t) {
            vertex_chart.entry(v).or_insert(chart);
        }
    }
    for (&t, _) in &sigma.cycle.coeffs {
        for &(e, _) in &surf.boundary_matrix(2).cols[t] {
            edge_chart.entry(e).or_insert(sigma.subordination[&t]);
        }
    }
    let zero = Complex::new(T::zero(), T::zero());
    let mut h = zero;
    for (&t, x) in &sigma.cycle.coeffs {
        let c = T::from_f64_lossy(x.to_f64().unwrap_or(f64::NAN));
        let rt = sigma.subordination[&t];
        let tri = surf.simplex(2, t);
        let mut term = zero;
        if let Some((s, sign)) = image_simplex(&image(map, tri)) {
            term += d.f_on(rt, &s).expect("face inside chart") * T::from_f64_lossy(sign);
        }
        for &(e, inc) in &surf.boundary_matrix(2).cols[t] {
            let inc = T::from_f64_lossy(inc as f64);
            let re = edge_chart[&e];
            let edge = surf.simplex(1, e);
            if let Some((s, sign)) = image_simplex(&image(map, edge)) {
                let a = d.a_on(&[rt, re], &s).ok_or_else(|| {
                    Error::SubordinationInvalid(format!("edge {edge:?} not in overlap of charts {rt}, {re}"))
                })?;
                term += a * inc * T::from_f64_lossy(sign);
            }
            for (v, sv) in [(edge[1], T::one()), (edge[0], -T::one())] {
                let l = d
                    .g
                    .log_at(cover, &[rt, re, vertex_chart[&v]], map[&v])
                    .ok_or_else(|| Error::SubordinationInvalid(format!("vertex {v} outside a triple overlap")))?;
                term -= l * inc * sv;
            }
        }
        h += term * c;
    }
    let value = CxValue::from_log(h);
    if is_unitary(d) && value.log_modulus.abs() > T::from_f64_lossy(HOLONOMY_TOL) {
        return Err(Error::DeligneInvalid(value.log_modulus.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(value)
}

/// Fails with NonIntegralAmbiguity unless ω/(2πi) pairs integrally with
/// every free 3-cycle of the base.
pub fn check_integrality<T: Real>(base: &OrientedSimplicialComplex, omega: &CurvatureForm<T>) -> Result<()> {
    if base.dim() < 3 {
        return Ok(());
    }
    let tau = T::two_pi();
    for z in base.homology(3).cycle_basis {
        let p = base.integrate(&omega.omega, &z)? / Complex::new(T::zero(), tau);
        let off = (p - Complex::new(p.re.round(), T::zero())).norm().to_f64().unwrap_or(f64::NAN);
        if !(off < HOLONOMY_TOL) {
            return Err(Error::NonIntegralAmbiguity(off));
        }
    }
    Ok(())
}

/// exp(∫_B ω) for any 3-chain B with ∂B the given 2-cycle of the base.
pub fn wzw_cycle<T: Real>(base: &OrientedSimplicialComplex, cycle: &Chain, omega: &CurvatureForm<T>) -> Result<CxValue<T>> {
    let b = base.fill_boundary(cycle)?;
    check_integrality(base, omega)?;
    Ok(CxValue::from_log(base.integrate(&omega.omega, &b)?))
}

pub fn wzw<T: Real>(cover: &CoverNerve, sigma: &SurfaceInBase, omega: &CurvatureForm<T>) -> Result<CxValue<T>> {
    wzw_cycle(&cover.base, &sigma.pushforward(&cover.base)?, omega)
}

/// WZW of the sphere glued from two 2-chains with common boundary.
pub fn wzw_pair<T: Real>(
    base: &OrientedSimplicialComplex,
    a: &Chain,
    b: &Chain,
    omega: &CurvatureForm<T>,
) -> Result<CxValue<T>> {
    if base.boundary(a) != base.boundary(b) {
        return Err(Error::InconsistentInput("surfaces do not share their boundary".into()));
    }
    wzw_cycle(base, &a.sub(b), omega)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BallReport<T> {
    pub holonomy: CxValue<T>,
    pub wzw: CxValue<T>,
    /// Distance of holonomy / wzw from 1.
    pub ratio_distance: T,
}

impl<T: Real> BallReport<T> {
    pub fn passed(&self) -> bool {
        self.ratio_distance < T::from_f64_lossy(HOLONOMY_TOL)
    }
}

/// hol(∂B) against exp(∫_B ω).
pub fn ball_boundary_check<T: Real>(d: &DeligneData<T>, ball: &Chain, omega: &CurvatureForm<T>) -> Result<BallReport<T>> {
    let base = &d.cover.base;
    if ball.degree != 3 {
        return Err(Error::DegreeMismatch { cochain: 3, chain: ball.degree });
    }
    let sigma = SurfaceInBase::from_base_cycle(&d.cover, base.boundary(ball))?;
    let holonomy = if sigma.cycle.is_zero() { CxValue::one() } else { surface_holonomy(d, &sigma)? };
    let wzw = CxValue::from_log(base.integrate(&omega.omega, ball)?);
    Ok(BallReport { holonomy, wzw, ratio_distance: holonomy.distance(&wzw) })
}
