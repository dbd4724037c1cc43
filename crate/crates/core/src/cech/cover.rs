use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::complex::{orient, OrientedSimplicialComplex, Simplex, Subcomplex};
use crate::error::{Error, Result};

/// A good cover of a base complex by full subcomplexes, with its nerve and
/// all nonempty overlaps.
#[derive(Debug, Clone)]
pub struct CoverNerve {
    pub base: Arc<OrientedSimplicialComplex>,
    pub charts: Vec<BTreeSet<usize>>,
    /// Simplicial complex on chart indices.
    pub nerve: OrientedSimplicialComplex,
    overlaps: Vec<Vec<Subcomplex>>,
    /// Charts containing each base vertex (by base vertex index).
    charts_at: Vec<Vec<usize>>,
}

impl CoverNerve {
    pub fn new(base: Arc<OrientedSimplicialComplex>, charts: Vec<BTreeSet<usize>>) -> Result<Self> {
        let n0 = base.count(0);
        let mut charts_at = vec![Vec::new(); n0];
        for (a, u) in charts.iter().enumerate() {
            for &v in u {
                let i = base
                    .index_of(&[v])
                    .ok_or_else(|| Error::InconsistentInput(format!("chart {a} has unknown vertex {v}")))?;
                charts_at[i].push(a);
            }
        }
        if let Some(i) = charts_at.iter().position(Vec::is_empty) {
            return Err(Error::CoverNotGood(format!("vertex {} is in no chart", base.simplex(0, i)[0])));
        }
        for k in 1..=base.dim() {
            for s in base.simplices(k) {
                if !charts.iter().any(|u| s.iter().all(|v| u.contains(v))) {
                    return Err(Error::CoverNotGood(format!("simplex {s:?} lies in no chart")));
                }
            }
        }
        // nonempty chart intersections, by depth-first extension
        let mut found: Vec<Simplex> = Vec::new();
        fn extend(
            charts: &[BTreeSet<usize>],
            current: &mut Vec<usize>,
            common: &BTreeSet<usize>,
            out: &mut Vec<Simplex>,
        ) {
            out.push(current.clone());
            let start = current.last().map_or(0, |&a| a + 1);
            for b in start..charts.len() {
                let next: BTreeSet<usize> = common.intersection(&charts[b]).cloned().collect();
                if !next.is_empty() {
                    current.push(b);
                    extend(charts, current, &next, out);
                    current.pop();
                }
            }
        }
        for (a, u) in charts.iter().enumerate() {
            if !u.is_empty() {
                extend(&charts, &mut vec![a], u, &mut found);
            }
        }
        let nerve = OrientedSimplicialComplex::new(&found)?;
        let mut overlaps = Vec::new();
        for k in 0..=nerve.dim() {
            let mut level = Vec::new();
            for s in nerve.simplices(k) {
                let common = s
                    .iter()
                    .skip(1)
                    .fold(charts[s[0]].clone(), |acc, &b| acc.intersection(&charts[b]).cloned().collect());
                let sub = base.full_subcomplex(&common).expect("nonempty overlap");
                if !sub.complex.is_connected() {
                    return Err(Error::CoverNotGood(format!("overlap {s:?} is disconnected")));
                }
                if sub.complex.betti_rational(1) != 0 {
                    return Err(Error::CoverNotGood(format!("overlap {s:?} has H_1 != 0")));
                }
                level.push(sub);
            }
            overlaps.push(level);
        }
        Ok(CoverNerve { base, charts, nerve, overlaps, charts_at })
    }

    pub fn overlap(&self, level: usize, i: usize) -> &Subcomplex {
        &self.overlaps[level][i]
    }

    pub fn level_len(&self, level: usize) -> usize {
        self.nerve.count(level)
    }

    /// Nerve index and orientation sign of a chart tuple, `None` if the
    /// tuple repeats a chart or the overlap is empty.
    pub fn locate(&self, tuple: &[usize]) -> Option<(usize, i32)> {
        let (s, sign) = orient(tuple).ok()?;
        Some((self.nerve.index_of(&s)?, sign))
    }

    /// Charts containing a base vertex (given by label).
    pub fn charts_at(&self, v: usize) -> &[usize] {
        &self.charts_at[self.base.index_of(&[v]).expect("base vertex")]
    }

    /// Charts containing every vertex of a base simplex.
    pub fn charts_containing(&self, s: &[usize]) -> Vec<usize> {
        self.charts_at(s[0]).iter().copied().filter(|&a| s.iter().all(|v| self.charts[a].contains(v))).collect()
    }

    /// Index maps from base vertex labels to local vertex indices, per overlap.
    pub fn local_vertex_maps(&self, level: usize) -> Vec<HashMap<usize, usize>> {
        self.overlaps[level]
            .iter()
            .map(|o| o.complex.vertices().enumerate().map(|(i, v)| (v, i)).collect())
            .collect()
    }
}
