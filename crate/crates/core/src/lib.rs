//! Bundle gerbes on simplicial models: Čech cocycles, Dixmier-Douady
//! classes, Deligne connections and surface holonomy.

pub mod cech;
pub mod cli;
pub mod complex;
pub mod connection;
pub mod error;
pub mod fibered;
pub mod gerbe;
pub mod holonomy;
pub mod io;
pub mod pathgroupoid;
pub mod scalar;
pub mod scenarios;

pub use error::{Error, ErrorKind, Result};
pub use scalar::{Real, Ring};

pub use cech::{CoverNerve, IntegerClass};
pub use complex::{Chain, OrientedSimplicialComplex, Simplex};
pub use fibered::FiniteCovering;
pub use gerbe::PrincipalBundleData;
pub use holonomy::SurfaceInBase;
pub use pathgroupoid::EdgePath;

// Double-precision instances of the generic types.
pub type Cochain = complex::Cochain<f64>;
pub type CxValue = cech::CxValue<f64>;
pub type CxCochain = cech::CxCochain<f64>;
pub type Partition = cech::Partition<f64>;
pub type DeligneData = connection::DeligneData<f64>;
pub type CurvatureForm = connection::CurvatureForm<f64>;
pub type FiberedCochain = fibered::FiberedCochain<f64>;
pub type GerbePresentation = gerbe::GerbePresentation<f64>;
pub type CentralExtension = gerbe::CentralExtension<f64>;
pub type GroupoidElement = pathgroupoid::GroupoidElement<f64>;
pub type PathGroupoid = pathgroupoid::PathGroupoid<f64>;
