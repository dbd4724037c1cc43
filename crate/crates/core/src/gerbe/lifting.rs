use std::sync::Arc;


use super::{dd_cocycle, GerbePresentation};
use crate::cech::{solve_trivialization, CoverNerve, CxCochain, CxValue, RESIDUAL_TOL};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Ĝ = G × ℂ× with (g, z)(h, w) = (gh, zw·c(g, h)), G given by its table.
#[derive(Debug, Clone)]
pub struct CentralExtension<T> {
    pub table: Vec<Vec<usize>>,
    pub cocycle: Vec<Vec<CxValue<T>>>,
    identity: usize,
    inverse: Vec<usize>,
}

pub type Element<T> = (usize, CxValue<T>);

impl<T: Real> CentralExtension<T> {
    pub fn new(table: Vec<Vec<usize>>, cocycle: Vec<Vec<CxValue<T>>>) -> Result<Self> {
        let n = table.len();
        let bad = |m: &str| Err(Error::InconsistentInput(m.into()));
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return bad("multiplication table is not square over its elements");
        }
        if cocycle.len() != n || cocycle.iter().any(|r| r.len() != n) {
            return bad("cocycle table has the wrong shape");
        }
        let Some(identity) = (0..n).find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x)) else {
            return bad("no identity element");
        };
        let mut inverse = vec![0; n];
        for (x, inv) in inverse.iter_mut().enumerate() {
            *inv = match (0..n).find(|&y| table[x][y] == identity && table[y][x] == identity) {
                Some(y) => y,
                None => return bad("an element has no inverse"),
            };
        }
        let tol = T::from_f64_lossy(RESIDUAL_TOL);
        for a in 0..n {
            if cocycle[identity][a].distance_from_one() > tol || cocycle[a][identity].distance_from_one() > tol {
                return bad("cocycle is not normalized");
            }
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return bad("multiplication is not associative");
                    }
                    let lhs = cocycle[a][b].mul(&cocycle[table[a][b]][c]);
                    let rhs = cocycle[a][table[b][c]].mul(&cocycle[b][c]);
                    if lhs.distance(&rhs) > tol {
                        return bad("c fails the group 2-cocycle identity");
                    }
                }
            }
        }
        Ok(CentralExtension { table, cocycle, identity, inverse })
    }

    /// Trivial cocycle c ≡ 1.
    pub fn split(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        Self::new(table, vec![vec![CxValue::one(); n]; n])
    }

    /// ℤ/2 × ℤ/2, element (a, b) stored as 2a + b, with c = (−1)^{b·a′}.
    pub fn heisenberg() -> Self {
        let split = |x: usize| (x >> 1, x & 1);
        let table = (0..4).map(|x| (0..4).map(|y| x ^ y).collect()).collect();
        let cocycle = (0..4)
            .map(|x| {
                (0..4)
                    .map(|y| {
                        let (_, b) = split(x);
                        let (a2, _) = split(y);
                        if b * a2 == 1 { CxValue::unit(T::PI()) } else { CxValue::one() }
                    })
                    .collect()
            })
            .collect();
        Self::new(table, cocycle).expect("Heisenberg cocycle")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn group_inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn mul(&self, x: &Element<T>, y: &Element<T>) -> Element<T> {
        (self.table[x.0][y.0], x.1.mul(&y.1).mul(&self.cocycle[x.0][y.0]))
    }

    pub fn inv(&self, x: &Element<T>) -> Element<T> {
        let gi = self.inverse[x.0];
        (gi, x.1.mul(&self.cocycle[x.0][gi]).inv())
    }
}

/// Cyclic group table ℤ/n.
pub fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
}

/// G-valued transition data, constant on each (connected) double overlap.
#[derive(Debug, Clone)]
pub struct PrincipalBundleData {
    pub cover: Arc<CoverNerve>,
    /// One element per nerve edge [α, β] with α < β.
    pub transitions: Vec<usize>,
}

impl PrincipalBundleData {
    pub fn new<T: Real>(ext: &CentralExtension<T>, cover: Arc<CoverNerve>, transitions: Vec<usize>) -> Result<Self> {
        if transitions.len() != cover.level_len(1) || transitions.iter().any(|&g| g >= ext.order()) {
            return Err(Error::InconsistentInput("one group element per double overlap".into()));
        }
        let pb = PrincipalBundleData { cover, transitions };
        for s in pb.cover.nerve.simplices(2) {
            let [a, b, c] = [s[0], s[1], s[2]];
            if ext.table[pb.get(ext, a, b)][pb.get(ext, b, c)] != pb.get(ext, a, c) {
                return Err(Error::InconsistentInput(format!("transitions fail the cocycle identity on {s:?}")));
            }
        }
        Ok(pb)
    }

    /// g_αβ for any ordered pair of overlapping charts.
    pub fn get<T: Real>(&self, ext: &CentralExtension<T>, a: usize, b: usize) -> usize {
        if a == b {
            return ext.identity();
        }
        let (i, sign) = self.cover.locate(&[a, b]).expect("charts overlap");
        if sign > 0 { self.transitions[i] } else { ext.group_inverse(self.transitions[i]) }
    }
}

/// A Ĝ-valued lift: the transitions of G together with ℂ×-valued functions
/// on the double overlaps.
#[derive(Debug, Clone)]
pub struct Lift<T> {
    pub group: Vec<usize>,
    pub z: CxCochain<T>,
}

fn hat_on<T: Real>(ext: &CentralExtension<T>, group: &[usize], z: &[CxValue<T>], cover: &CoverNerve, a: usize, b: usize) -> Element<T> {
    let (i, sign) = cover.locate(&[a, b]).expect("charts overlap");
    let x = (group[i], z[i]);
    if sign > 0 { x } else { ext.inv(&x) }
}

/// e_αβγ = ĝ_αβ ĝ_βγ ĝ_γα for a lift with constant ℂ× parts.
pub fn lifting_obstruction<T: Real>(
    ext: &CentralExtension<T>,
    pb: &PrincipalBundleData,
    lift: &[Element<T>],
) -> Result<GerbePresentation<T>> {
    let cover = &pb.cover;
    if lift.len() != pb.transitions.len() {
        return Err(Error::NotALift(format!("{} lifts for {} overlaps", lift.len(), pb.transitions.len())));
    }
    if let Some(i) = (0..lift.len()).find(|&i| lift[i].0 != pb.transitions[i]) {
        return Err(Error::NotALift(format!("overlap {:?} projects to the wrong element", cover.nerve.simplex(1, i))));
    }
    let group: Vec<usize> = lift.iter().map(|x| x.0).collect();
    let z: Vec<CxValue<T>> = lift.iter().map(|x| x.1).collect();
    let mut logs = Vec::with_capacity(cover.level_len(2));
    for s in cover.nerve.simplices(2) {
        let h = |a, b| hat_on(ext, &group, &z, cover, a, b);
        let e = ext.mul(&ext.mul(&h(s[0], s[1]), &h(s[1], s[2])), &h(s[2], s[0]));
        if e.0 != ext.identity() {
            return Err(Error::ObstructionNotCentral(format!("{s:?} gives group element {}", e.0)));
        }
        logs.push(e.1.log());
    }
    let g = CxCochain::from_log_fn(cover, 2, |s, _| logs[cover.locate(s).expect("nerve triangle").0]);
    GerbePresentation::new(cover.clone(), g)
}

/// A lift satisfying the cocycle identity in Ĝ when the obstruction class
/// vanishes: the naive lift (g, 1) divided by a trivialization of e.
pub fn lift_exists<T: Real>(ext: &CentralExtension<T>, pb: &PrincipalBundleData) -> Result<Option<Lift<T>>> {
    let naive: Vec<Element<T>> = pb.transitions.iter().map(|&g| (g, CxValue::one())).collect();
    let e = lifting_obstruction(ext, pb, &naive)?;
    if !dd_cocycle(&e)?.is_trivial(&pb.cover.nerve) {
        return Ok(None);
    }
    let rho = solve_trivialization(&pb.cover, &e.g)?;
    Ok(Some(Lift { group: pb.transitions.clone(), z: rho.inv() }))
}

/// Largest distance from the identity of ĝ_αβ ĝ_βγ ĝ_γα over all vertices
/// of all triple overlaps; infinite if the G part ever fails.
pub fn lift_defect<T: Real>(ext: &CentralExtension<T>, pb: &PrincipalBundleData, lift: &Lift<T>) -> f64 {
    let cover = &pb.cover;
    let mut worst = 0.0f64;
    for (i, s) in cover.nerve.simplices(2).iter().enumerate() {
        for v in cover.overlap(2, i).complex.vertices() {
            let h = |a: usize, b: usize| {
                let (j, sign) = cover.locate(&[a, b]).expect("charts overlap");
                let up = [a.min(b), a.max(b)];
                let x = (lift.group[j], CxValue::from_log(lift.z.log_at(cover, &up, v).expect("vertex in overlap")));
                if sign > 0 { x } else { ext.inv(&x) }
            };
            let e = ext.mul(&ext.mul(&h(s[0], s[1]), &h(s[1], s[2])), &h(s[2], s[0]));
            if e.0 != ext.identity() {
                return f64::INFINITY;
            }
            worst = worst.max(e.1.distance_from_one().to_f64().unwrap_or(f64::NAN));
        }
    }
    worst
}
