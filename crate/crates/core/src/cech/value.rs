use num_complex::Complex;

use crate::scalar::Real;

/// Wrap an angle into (−π, π].
pub fn wrap_angle<T: Real>(x: T) -> T {
    let tau = T::two_pi();
    let mut y = x - tau * (x / tau).round();
    if y <= -T::PI() {
        y += tau;
    } else if y > T::PI() {
        y -= tau;
    }
    y
}

/// A nonzero complex number exp(log_modulus + i·angle), angle in (−π, π].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CxValue<T> {
    pub log_modulus: T,
    pub angle: T,
}

impl<T: Real> CxValue<T> {
    pub fn new(log_modulus: T, angle: T) -> Self {
        CxValue { log_modulus, angle: wrap_angle(angle) }
    }

    pub fn one() -> Self {
        CxValue { log_modulus: T::zero(), angle: T::zero() }
    }

    /// exp of an arbitrary complex logarithm.
    pub fn from_log(l: Complex<T>) -> Self {
        Self::new(l.re, l.im)
    }

    pub fn from_complex(z: Complex<T>) -> Self {
        Self::new(z.norm().ln(), z.arg())
    }

    pub fn unit(angle: T) -> Self {
        Self::new(T::zero(), angle)
    }

    /// Principal logarithm.
    pub fn log(&self) -> Complex<T> {
        Complex::new(self.log_modulus, self.angle)
    }

    pub fn to_complex(&self) -> Complex<T> {
        self.log().exp()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.log_modulus + o.log_modulus, self.angle + o.angle)
    }

    pub fn div(&self, o: &Self) -> Self {
        Self::new(self.log_modulus - o.log_modulus, self.angle - o.angle)
    }

    pub fn inv(&self) -> Self {
        Self::new(-self.log_modulus, -self.angle)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.log_modulus, -self.angle)
    }

    /// max(|log|z||, |arg z|): distance from 1 in log coordinates.
    pub fn distance_from_one(&self) -> T {
        self.log_modulus.abs().max(self.angle.abs())
    }

    pub fn distance(&self, o: &Self) -> T {
        self.div(o).distance_from_one()
    }
}
