use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// A k-chain with rational coefficients, keyed by simplex index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub degree: usize,
    pub coeffs: BTreeMap<usize, BigRational>,
}

impl Chain {
    pub fn zero(degree: usize) -> Self {
        Chain { degree, coeffs: BTreeMap::new() }
    }

    pub fn from_ints(degree: usize, terms: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut c = Chain::zero(degree);
        for (i, x) in terms {
            c.add_term(i, BigRational::from_integer(BigInt::from(x)));
        }
        c
    }

    pub fn add_term(&mut self, index: usize, x: BigRational) {
        if x.is_zero() {
            return;
        }
        let e = self.coeffs.entry(index).or_insert_with(BigRational::zero);
        *e += x;
        if e.is_zero() {
            self.coeffs.remove(&index);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|x| x.is_integer())
    }

    pub fn scaled(&self, s: &BigRational) -> Chain {
        let mut out = Chain::zero(self.degree);
        for (&i, x) in &self.coeffs {
            out.add_term(i, x * s);
        }
        out
    }

    pub fn neg(&self) -> Chain {
        self.scaled(&-BigRational::from_integer(1.into()))
    }

    pub fn add(&self, other: &Chain) -> Chain {
        assert_eq!(self.degree, other.degree, "adding chains of different degree");
        let mut out = self.clone();
        for (&i, x) in &other.coeffs {
            out.add_term(i, x.clone());
        }
        out
    }

    pub fn sub(&self, other: &Chain) -> Chain {
        self.add(&other.neg())
    }

    /// Coefficients as floats, for pairing with numeric cochains.
    pub fn float_terms(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.coeffs.iter().map(|(&i, x)| (i, x.to_f64().unwrap_or(f64::NAN)))
    }

    /// Integer coefficients, `None` if any coefficient is fractional.
    pub fn integer_terms(&self) -> Option<Vec<(usize, BigInt)>> {
        self.coeffs
            .iter()
            .map(|(&i, x)| x.is_integer().then(|| (i, x.to_integer())))
            .collect()
    }
}
