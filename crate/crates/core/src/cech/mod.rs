//! Good covers, ℂ×-valued Čech cochains and their integer classes.

mod class;
mod cochain;
mod cover;
mod partition;
mod value;

pub use class::{
    homology_generators, integer_class, integer_coboundary, solve_trivialization, IntegerClass, INTEGRALITY_TOL,
    RESIDUAL_TOL,
};
pub use cochain::CxCochain;
pub use cover::CoverNerve;
pub use partition::{cup_into, Partition};
pub use value::{wrap_angle, CxValue};

/// Multiplicative Čech coboundary.
pub fn cech_coboundary<T: crate::Real>(cover: &CoverNerve, c: &CxCochain<T>) -> CxCochain<T> {
    c.coboundary(cover)
}
