//! JSON scenario documents and their conversion into library objects.
//! Complex numbers are `[re, im]` pairs; multiplicative values are given by
//! their logarithms.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cech::{CoverNerve, CxCochain, CxValue, Partition};
use crate::complex::standard::Subdivision;
use crate::complex::{Chain, Cochain, OrientedSimplicialComplex};
use crate::connection::{build_connection, build_from_integer_class, CurvingRoute, DeligneData};
use crate::error::{Error, Result};
use crate::fibered::{delta, FiberedCochain, FiniteCovering, MAX_ARITY};
use crate::gerbe::{CentralExtension, GerbePresentation, PrincipalBundleData};
use crate::holonomy::SurfaceInBase;
use crate::pathgroupoid::{GroupoidElement, PathGroupoid};

pub const SCENARIO_VERSION: u32 = 1;

pub type C = [f64; 2];

fn cx(c: &C) -> Complex<f64> {
    Complex::new(c[0], c[1])
}

pub fn uncx(z: Complex<f64>) -> C {
    [z.re, z.im]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scenario {
    pub version: u32,
    pub base: BaseDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<CoverDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gerbe: Option<GerbeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lift: Option<LiftDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fibered: Option<FiberedDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groupoid: Option<GroupoidDoc>,
    #[serde(default)]
    pub options: OptionsDoc,
}

/// Maximal simplices; with `subdivide` the base is their barycentric
/// subdivision and all later vertex labels refer to it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BaseDoc {
    pub simplices: Vec<Vec<usize>>,
    #[serde(default)]
    pub subdivide: bool,
}

/// Explicit charts as vertex sets; when absent the cover is the star cover
/// of the original vertices of a subdivided base.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverDoc {
    pub charts: Vec<Vec<usize>>,
}

/// Either an integer 3-cocycle on the nerve, realized with the partition of
/// unity, or continuous logarithms of g per triple overlap and overlap vertex.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct GerbeDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integer_cocycle: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub logs: Option<Vec<Vec<C>>>,
    /// Connection forms per nerve edge and curvings per chart, on the
    /// overlap complexes; built from the partition of unity when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deligne: Option<DeligneDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeligneDoc {
    pub a: Vec<Vec<C>>,
    pub f: Vec<Vec<C>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LiftDoc {
    pub extension: ExtensionDoc,
    /// Group element per nerve edge.
    pub transitions: Vec<usize>,
}

/// `named: "heisenberg"`, or a table with logarithms of the cocycle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtensionDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub named: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<Vec<Vec<C>>>,
}

/// A covering with a closed cochain on its fibered power; without `values`
/// the cochain is δ of a seeded random cochain of arity p − 1.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiberedDoc {
    pub sheets: usize,
    #[serde(default)]
    pub transitions: Vec<Vec<usize>>,
    pub p: usize,
    pub q: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<Vec<Vec<C>>>>,
}

/// Either a 2-cycle of the base or a triangulated surface mapped into it.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SurfaceDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_cycle: Option<Vec<(Vec<usize>, i64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triangles: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub vertex_map: Vec<(usize, usize)>,
    /// Charts for some faces; the rest take their lowest admissible chart.
    #[serde(default)]
    pub subordination: Vec<(Vec<usize>, usize)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementDoc {
    pub path: Vec<usize>,
    pub log_z: C,
}

/// A 2-form on the base and two elements to compare.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupoidDoc {
    pub f: Vec<C>,
    pub a: ElementDoc,
    pub b: ElementDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basepoint: Option<usize>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct OptionsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn missing(what: &str) -> Error {
    Error::InconsistentInput(format!("scenario has no {what} section"))
}

/// Everything a command may need, built lazily from a scenario.
pub struct Loaded {
    pub scenario: Scenario,
    pub base: Arc<OrientedSimplicialComplex>,
    pub original: OrientedSimplicialComplex,
    pub partition_kind: String,
    pub seed: u64,
}

impl Loaded {
    pub fn new(scenario: Scenario, partition: Option<String>, seed: Option<u64>) -> Result<Self> {
        if scenario.version != SCENARIO_VERSION {
            return Err(Error::Parse(format!("unsupported scenario version {}", scenario.version)));
        }
        let original = OrientedSimplicialComplex::new(&scenario.base.simplices)?;
        let base = if scenario.base.subdivide { Subdivision::new(&original)?.complex } else { original.clone() };
        let partition_kind = partition.or(scenario.options.partition.clone()).unwrap_or_else(|| "hat".into());
        let seed = seed.or(scenario.options.seed).unwrap_or(0);
        Ok(Loaded { scenario, base: Arc::new(base), original, partition_kind, seed })
    }

    pub fn cover(&self) -> Result<Arc<CoverNerve>> {
        let charts: Vec<BTreeSet<usize>> = match &self.scenario.cover {
            Some(c) => c.charts.iter().map(|u| u.iter().copied().collect()).collect(),
            None if self.scenario.base.subdivide => {
                Subdivision::new(&self.original)?.star_cover(self.original.vertices())
            }
            None => return Err(missing("cover (and the base is not subdivided)")),
        };
        Ok(Arc::new(CoverNerve::new(self.base.clone(), charts)?))
    }

    pub fn partition(&self, cover: &CoverNerve) -> Result<Partition<f64>> {
        match self.partition_kind.as_str() {
            "hat" => Partition::hat(cover),
            "weighted" => Partition::weighted(cover, self.seed),
            other => Err(Error::PartitionInvalid(format!("unknown partition {other:?}"))),
        }
    }

    /// The gerbe; a scenario without one carries the trivial gerbe.
    pub fn gerbe(&self, cover: &Arc<CoverNerve>) -> Result<GerbePresentation<f64>> {
        let Some(doc) = &self.scenario.gerbe else {
            return Ok(GerbePresentation::trivial(cover.clone()));
        };
        let g = match (&doc.integer_cocycle, &doc.logs) {
            (Some(n), None) => build_from_integer_class(cover, n, &self.partition(cover)?)?,
            (None, Some(logs)) => {
                if logs.len() != cover.level_len(2)
                    || logs.iter().enumerate().any(|(i, l)| l.len() != cover.overlap(2, i).complex.count(0))
                {
                    return Err(Error::InconsistentInput("logs do not match the triple overlaps".into()));
                }
                CxCochain::from_log_fn(cover, 2, |s, v| {
                    let i = cover.locate(s).expect("nerve triangle").0;
                    let j = cover.overlap(2, i).complex.index_of(&[v]).expect("overlap vertex");
                    cx(&logs[i][j])
                })
            }
            (None, None) => CxCochain::one(cover, 2),
            (Some(_), Some(_)) => {
                return Err(Error::InconsistentInput("give either integer_cocycle or logs, not both".into()))
            }
        };
        GerbePresentation::new(cover.clone(), g)
    }

    pub fn deligne(&self, cover: &Arc<CoverNerve>) -> Result<DeligneData<f64>> {
        let gp = self.gerbe(cover)?;
        match self.scenario.gerbe.as_ref().and_then(|g| g.deligne.as_ref()) {
            None => build_connection(cover.clone(), &gp.g, &self.partition(cover)?, CurvingRoute::default()),
            Some(doc) => {
                let form = |level: usize, i: usize, deg: usize, v: &[C]| -> Result<Cochain<f64>> {
                    let n = cover.overlap(level, i).complex.count(deg);
                    if v.len() != n {
                        return Err(Error::InconsistentInput(format!("expected {n} values on overlap {i}")));
                    }
                    Ok(Cochain { degree: deg, values: v.iter().map(cx).collect() })
                };
                if doc.a.len() != cover.level_len(1) || doc.f.len() != cover.level_len(0) {
                    return Err(Error::InconsistentInput("one A per double overlap and one f per chart".into()));
                }
                let a = doc.a.iter().enumerate().map(|(i, v)| form(1, i, 1, v)).collect::<Result<_>>()?;
                let f = doc.f.iter().enumerate().map(|(i, v)| form(0, i, 2, v)).collect::<Result<_>>()?;
                Ok(DeligneData { cover: cover.clone(), g: gp.g, a, f })
            }
        }
    }

    pub fn extension_and_bundle(&self, cover: &Arc<CoverNerve>) -> Result<(CentralExtension<f64>, PrincipalBundleData)> {
        let doc = self.scenario.lift.as_ref().ok_or_else(|| missing("lift"))?;
        let e = &doc.extension;
        let ext = match (&e.named, &e.table) {
            (Some(name), None) if name == "heisenberg" => CentralExtension::heisenberg(),
            (None, Some(table)) => match &e.cocycle {
                None => CentralExtension::split(table.clone())?,
                Some(c) => CentralExtension::new(
                    table.clone(),
                    c.iter().map(|r| r.iter().map(|x| CxValue::from_log(cx(x))).collect()).collect(),
                )?,
            },
            _ => return Err(Error::InconsistentInput("extension needs `named: heisenberg` or a table".into())),
        };
        let pb = PrincipalBundleData::new(&ext, cover.clone(), doc.transitions.clone())?;
        Ok((ext, pb))
    }

    pub fn fibered(&self, cover: &Arc<CoverNerve>) -> Result<(FiniteCovering, FiberedCochain<f64>)> {
        let doc = self.scenario.fibered.as_ref().ok_or_else(|| missing("fibered"))?;
        if doc.q > self.base.dim() {
            return Err(Error::DegreeOutOfRange { degree: doc.q, dim: self.base.dim() });
        }
        if doc.p > MAX_ARITY || (doc.sheets as f64).powi(doc.p as i32 + 1) > 1e6 {
            return Err(Error::ArityOutOfRange(format!("{} sheets at arity {} is too large", doc.sheets, doc.p)));
        }
        let cov = if doc.transitions.is_empty() {
            FiniteCovering::trivial(cover.clone(), doc.sheets)
        } else {
            FiniteCovering::new(cover.clone(), doc.sheets, doc.transitions.clone())?
        };
        let w = match &doc.values {
            Some(values) => {
                let mut w = FiberedCochain::zero(&cov, doc.p, doc.q);
                if values.len() != w.values.len() {
                    return Err(Error::InconsistentInput("one entry per chart".into()));
                }
                for (slot, given) in w.values.iter_mut().zip(values) {
                    if slot.len() != given.len() || slot.iter().zip(given).any(|(c, g)| c.values.len() != g.len()) {
                        return Err(Error::InconsistentInput("fibered values have the wrong shape".into()));
                    }
                    for (c, g) in slot.iter_mut().zip(given) {
                        c.values = g.iter().map(cx).collect();
                    }
                }
                w
            }
            None => {
                if doc.p == 0 {
                    return Err(Error::ArityOutOfRange("a random exact cochain needs arity ≥ 1".into()));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                let u = FiberedCochain::from_fn(&cov, doc.p - 1, doc.q, |_, _| {
                    Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                });
                delta(&cov, &u)?
            }
        };
        Ok((cov, w))
    }

    pub fn base_chain(&self, degree: usize, terms: &[(Vec<usize>, i64)]) -> Result<Chain> {
        self.base.chain(degree, terms)
    }

    pub fn surface(&self, cover: &CoverNerve) -> Result<SurfaceInBase> {
        let doc = self.scenario.surface.as_ref().ok_or_else(|| missing("surface"))?;
        match (&doc.base_cycle, &doc.triangles) {
            (Some(terms), None) => SurfaceInBase::from_base_cycle(cover, self.base_chain(2, terms)?),
            (None, Some(tri)) => {
                let map: HashMap<usize, usize> = doc.vertex_map.iter().copied().collect();
                if let Some(v) = tri.iter().flatten().find(|v| !map.contains_key(v)) {
                    return Err(Error::InconsistentInput(format!("vertex {v} has no image in the base")));
                }
                let mut sigma = SurfaceInBase::new(tri, map, &doc.subordination)?;
                // faces left unassigned take their lowest admissible chart
                let faces: Vec<usize> = sigma.cycle.coeffs.keys().copied().collect();
                for i in faces {
                    if !sigma.subordination.contains_key(&i) {
                        if let Some(&c) = sigma.valid_charts(cover, i).first() {
                            sigma.subordination.insert(i, c);
                        }
                    }
                }
                Ok(sigma)
            }
            _ => Err(Error::InconsistentInput("surface needs either base_cycle or triangles".into())),
        }
    }

    pub fn groupoid(&self) -> Result<(PathGroupoid<f64>, GroupoidElement<f64>, GroupoidElement<f64>, Option<usize>)> {
        let doc = self.scenario.groupoid.as_ref().ok_or_else(|| missing("groupoid"))?;
        let f = Cochain { degree: 2, values: doc.f.iter().map(cx).collect() };
        let pg = PathGroupoid::new(self.base.clone(), f)?;
        let el = |e: &ElementDoc| -> Result<GroupoidElement<f64>> {
            Ok(GroupoidElement::new(pg.path(e.path.clone())?, CxValue::from_log(cx(&e.log_z))))
        };
        let (a, b) = (el(&doc.a)?, el(&doc.b)?);
        Ok((pg, a, b, doc.basepoint))
    }
}

pub fn read_scenario(path: &std::path::Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Terms (oriented tuple, coefficient) of an integral chain.
pub fn chain_terms(complex: &OrientedSimplicialComplex, c: &Chain) -> Vec<(Vec<usize>, i64)> {
    c.integer_terms()
        .expect("integral chain")
        .into_iter()
        .map(|(i, x)| (complex.simplex(c.degree, i).to_vec(), i64::try_from(x).expect("small coefficient")))
        .collect()
}
