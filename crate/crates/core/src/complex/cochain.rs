use num_complex::Complex;

use crate::scalar::Real;

/// A p-cochain: one complex value per p-simplex, in the complex's index order.
///
/// Values are attached to the ascending (positively oriented) simplex; the
/// value on the reversed orientation is the negative.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain<T> {
    pub degree: usize,
    pub values: Vec<Complex<T>>,
}

impl<T: Real> Cochain<T> {
    pub fn zeros(degree: usize, len: usize) -> Self {
        Cochain { degree, values: vec![Complex::new(T::zero(), T::zero()); len] }
    }

    pub fn from_real(degree: usize, values: impl IntoIterator<Item = T>) -> Self {
        Cochain {
            degree,
            values: values.into_iter().map(|x| Complex::new(x, T::zero())).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree);
        Cochain {
            degree: self.degree,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree);
        Cochain {
            degree: self.degree,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Cochain { degree: self.degree, values: self.values.iter().map(|a| a * s).collect() }
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.norm()))
    }

    pub fn max_diff(&self, other: &Self) -> T {
        self.values.iter().zip(&other.values).fold(T::zero(), |m, (a, b)| m.max((a - b).norm()))
    }
}
