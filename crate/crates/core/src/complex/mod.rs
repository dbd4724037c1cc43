//! Oriented simplicial complexes, chains, cochains and integer homology.

mod chain;
mod cochain;
pub mod snf;
pub mod sparse;
pub mod standard;

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use chain::Chain;
pub use cochain::Cochain;
pub use sparse::SparseMatrix;

use crate::error::{Error, Result};
use crate::scalar::Real;
use snf::SmithForm;

/// Vertex labels in ascending order.
pub type Simplex = Vec<usize>;

/// Sort a vertex tuple, returning the ascending simplex and the sign of the
/// sorting permutation.
pub fn orient(tuple: &[usize]) -> Result<(Simplex, i32)> {
    let mut s = tuple.to_vec();
    let mut sign = 1;
    // insertion sort, counting transpositions
    for i in 1..s.len() {
        let mut j = i;
        while j > 0 && s[j - 1] > s[j] {
            s.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if s.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DuplicateVertexInSimplex(tuple.to_vec()));
    }
    Ok((s, sign))
}

/// The faces of an ascending simplex with their incidence signs `(-1)^i`.
pub fn faces(s: &[usize]) -> impl Iterator<Item = (Simplex, i64)> + '_ {
    (0..s.len()).map(move |i| {
        let mut f = s.to_vec();
        f.remove(i);
        (f, if i % 2 == 0 { 1 } else { -1 })
    })
}

#[derive(Debug, Clone)]
pub struct OrientedSimplicialComplex {
    simplices: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
    /// `boundary[k]`: C_k → C_{k−1}, for k in 0..=dim+1 (both ends zero maps).
    boundary: Vec<SparseMatrix>,
    snf: Vec<OnceLock<SmithForm<BigInt>>>,
}

#[derive(Debug, Clone)]
pub struct Homology {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
    /// Free generators (`betti` of them).
    pub cycle_basis: Vec<Chain>,
    /// One representative per torsion coefficient, same order.
    pub torsion_cycles: Vec<Chain>,
}

impl OrientedSimplicialComplex {
    /// Face closure of the given tuples.
    pub fn new<S: AsRef<[usize]>>(simplex_list: &[S]) -> Result<Self> {
        let mut by_dim: Vec<BTreeSet<Simplex>> = Vec::new();
        for t in simplex_list {
            let t = t.as_ref();
            if t.is_empty() {
                return Err(Error::InconsistentInput("empty simplex".into()));
            }
            let (s, _) = orient(t)?;
            let mut stack = vec![s];
            while let Some(s) = stack.pop() {
                let k = s.len() - 1;
                if by_dim.len() <= k {
                    by_dim.resize_with(k + 1, BTreeSet::new);
                }
                if by_dim[k].contains(&s) {
                    continue;
                }
                if k > 0 {
                    stack.extend(faces(&s).map(|(f, _)| f));
                }
                by_dim[k].insert(s);
            }
        }
        Self::from_closed(by_dim.into_iter().map(|d| d.into_iter().collect()).collect())
    }

    fn from_closed(simplices: Vec<Vec<Simplex>>) -> Result<Self> {
        let index: Vec<HashMap<Simplex, usize>> = simplices
            .iter()
            .map(|d| d.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        let n = |k: usize| simplices.get(k).map_or(0, Vec::len);
        let top = simplices.len();
        let mut boundary = vec![SparseMatrix::zeros(0, n(0))];
        for k in 1..top {
            let mut m = SparseMatrix::zeros(n(k - 1), n(k));
            for (j, s) in simplices[k].iter().enumerate() {
                for (f, sign) in faces(s) {
                    let i = *index[k - 1]
                        .get(&f)
                        .ok_or_else(|| Error::InconsistentInput(format!("face {f:?} missing")))?;
                    m.cols[j].push((i, sign));
                }
                m.cols[j].sort_unstable();
            }
            boundary.push(m);
        }
        boundary.push(SparseMatrix::zeros(n(top.saturating_sub(1)), 0));
        for k in 1..top {
            if !boundary[k - 1].mul(&boundary[k]).is_zero() {
                return Err(Error::InconsistentInput(format!("boundary^2 != 0 in degree {k}")));
            }
        }
        let snf = (0..boundary.len()).map(|_| OnceLock::new()).collect();
        Ok(OrientedSimplicialComplex { simplices, index, boundary, snf })
    }

    /// Highest simplex dimension (0 for the empty complex).
    pub fn dim(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices.get(k).map_or(0, Vec::len)
    }

    pub fn simplices(&self, k: usize) -> &[Simplex] {
        self.simplices.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn simplex(&self, k: usize, i: usize) -> &Simplex {
        &self.simplices[k][i]
    }

    /// Index of an ascending simplex.
    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        let k = s.len().checked_sub(1)?;
        self.index.get(k)?.get(s).copied()
    }

    /// Index and orientation sign of an arbitrary vertex tuple.
    pub fn oriented_index(&self, tuple: &[usize]) -> Option<(usize, i32)> {
        let (s, sign) = orient(tuple).ok()?;
        Some((self.index_of(&s)?, sign))
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.simplices(0).iter().map(|s| s[0])
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.index_of(&[v]).is_some()
    }

    /// Boundary matrix C_k → C_{k−1}.
    pub fn boundary_matrix(&self, k: usize) -> &SparseMatrix {
        &self.boundary[k.min(self.boundary.len() - 1)]
    }

    /// Neighbours of a vertex along edges.
    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        self.simplices(1)
            .iter()
            .filter_map(|e| match (e[0] == v, e[1] == v) {
                (true, _) => Some(e[1]),
                (_, true) => Some(e[0]),
                _ => None,
            })
            .collect()
    }

    /// Chain from oriented tuples with integer coefficients.
    pub fn chain(&self, k: usize, terms: &[(Vec<usize>, i64)]) -> Result<Chain> {
        let mut c = Chain::zero(k);
        for (t, x) in terms {
            if t.len() != k + 1 {
                return Err(Error::InconsistentInput(format!("{t:?} is not a {k}-simplex")));
            }
            let (i, sign) = self
                .oriented_index(t)
                .ok_or_else(|| Error::InconsistentInput(format!("{t:?} not in complex")))?;
            c.add_term(i, BigRational::from_integer(BigInt::from(x * sign as i64)));
        }
        Ok(c)
    }

    /// Sum of all k-simplices with coefficient 1.
    pub fn all_simplices_chain(&self, k: usize) -> Chain {
        Chain::from_ints(k, (0..self.count(k)).map(|i| (i, 1)))
    }

    pub fn boundary(&self, c: &Chain) -> Chain {
        if c.degree == 0 {
            return Chain::zero(0);
        }
        let m = self.boundary_matrix(c.degree);
        let mut out = Chain::zero(c.degree - 1);
        for (&j, x) in &c.coeffs {
            for &(i, s) in &m.cols[j] {
                out.add_term(i, x * BigRational::from_integer(BigInt::from(s)));
            }
        }
        out
    }

    pub fn zero_cochain<T: Real>(&self, p: usize) -> Cochain<T> {
        Cochain::zeros(p, self.count(p))
    }

    /// Cochain with values given on ascending simplices.
    pub fn cochain_from_fn<T: Real>(&self, p: usize, f: impl Fn(&[usize]) -> Complex<T>) -> Cochain<T> {
        Cochain { degree: p, values: self.simplices(p).iter().map(|s| f(s)).collect() }
    }

    pub fn coboundary<T: Real>(&self, c: &Cochain<T>) -> Result<Cochain<T>> {
        let p = c.degree;
        if self.is_empty() || p >= self.dim() {
            return Err(Error::DegreeOutOfRange { degree: p, dim: self.dim() });
        }
        Ok(self.coboundary_unchecked(c))
    }

    /// d without the degree check; the top-degree result is the empty cochain.
    pub fn coboundary_unchecked<T: Real>(&self, c: &Cochain<T>) -> Cochain<T> {
        let m = self.boundary_matrix(c.degree + 1);
        let values = m
            .cols
            .iter()
            .map(|col| {
                col.iter().fold(Complex::new(T::zero(), T::zero()), |acc, &(i, s)| {
                    acc + c.values[i] * T::from_f64_lossy(s as f64)
                })
            })
            .collect();
        Cochain { degree: c.degree + 1, values }
    }

    pub fn integrate<T: Real>(&self, c: &Cochain<T>, z: &Chain) -> Result<Complex<T>> {
        if c.degree != z.degree {
            return Err(Error::DegreeMismatch { cochain: c.degree, chain: z.degree });
        }
        Ok(z.float_terms().fold(Complex::new(T::zero(), T::zero()), |acc, (i, x)| {
            acc + c.values[i] * T::from_f64_lossy(x)
        }))
    }

    fn smith(&self, k: usize) -> &SmithForm<BigInt> {
        let k = k.min(self.boundary.len() - 1);
        self.snf[k].get_or_init(|| {
            let m = &self.boundary[k];
            let dense: Vec<Vec<BigInt>> = m
                .to_dense()
                .into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect();
            SmithForm::compute(&dense, m.nrows, m.ncols())
        })
    }

    /// Integral homology in degree k via Smith normal form.
    pub fn homology(&self, k: usize) -> Homology {
        let nk = self.count(k);
        let (z_basis, r) = if k == 0 {
            (snf::identity::<BigInt>(nk), 0)
        } else {
            let s = self.smith(k);
            (s.q.clone(), s.rank())
        };
        let z = nk - r;
        let sq_inv = if k == 0 { snf::identity::<BigInt>(nk) } else { self.smith(k).q_inv.clone() };
        // next boundary in kernel coordinates
        let next = self.boundary_matrix(k + 1);
        let mut m = vec![vec![BigInt::zero(); next.ncols()]; z];
        for (j, col) in next.cols.iter().enumerate() {
            for &(i, x) in col {
                for (row, mrow) in m.iter_mut().enumerate() {
                    let q = &sq_inv[r + row][i];
                    if !q.is_zero() {
                        mrow[j] += q * x;
                    }
                }
            }
        }
        let s2 = SmithForm::compute(&m, z, next.ncols());
        let rank_m = s2.rank();
        let gen = |col: usize| -> Chain {
            let mut c = Chain::zero(k);
            for (i, row) in z_basis.iter().enumerate() {
                let mut acc = BigInt::zero();
                for t in 0..z {
                    acc += &row[r + t] * &s2.p_inv[t][col];
                }
                c.add_term(i, BigRational::from_integer(acc));
            }
            c
        };
        let mut torsion = Vec::new();
        let mut torsion_cycles = Vec::new();
        for (i, d) in s2.diag.iter().enumerate() {
            if !d.is_one() {
                torsion.push(d.clone());
                torsion_cycles.push(gen(i));
            }
        }
        Homology { betti: z - rank_m, torsion, cycle_basis: (rank_m..z).map(gen).collect(), torsion_cycles }
    }

    /// A (k+1)-chain whose boundary is z. Integer when one exists with the
    /// Smith normal form's choice of basis; rational otherwise.
    pub fn fill_boundary(&self, z: &Chain) -> Result<Chain> {
        if !self.boundary(z).is_zero() {
            return Err(Error::NotACycle);
        }
        let k = z.degree;
        if z.is_zero() {
            return Ok(Chain::zero(k + 1));
        }
        if k + 1 >= self.boundary.len() - 1 {
            return Err(Error::NotNullHomologous);
        }
        let s = self.smith(k + 1);
        let c: Vec<BigRational> = s
            .p
            .iter()
            .map(|row| {
                z.coeffs.iter().fold(BigRational::zero(), |acc, (&j, x)| {
                    acc + x * BigRational::from_integer(row[j].clone())
                })
            })
            .collect();
        if c[s.rank()..].iter().any(|x| !x.is_zero()) {
            return Err(Error::NotNullHomologous);
        }
        let y: Vec<BigRational> =
            s.diag.iter().zip(&c).map(|(d, x)| x / BigRational::from_integer(d.clone())).collect();
        let mut out = Chain::zero(k + 1);
        for (i, row) in s.q.iter().enumerate() {
            let v = y.iter().enumerate().fold(BigRational::zero(), |acc, (t, yt)| {
                acc + yt * BigRational::from_integer(row[t].clone())
            });
            out.add_term(i, v);
        }
        Ok(out)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.count(0);
        if n == 0 {
            return false;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut comps = n;
        for col in &self.boundary_matrix(1).cols {
            let (a, b) = (find(&mut parent, col[0].0), find(&mut parent, col[1].0));
            if a != b {
                parent[a] = b;
                comps -= 1;
            }
        }
        comps == 1
    }

    /// Rational Betti number (rank computed modulo a large prime).
    pub fn betti_rational(&self, k: usize) -> usize {
        let rk = if k == 0 { 0 } else { self.boundary_matrix(k).rank_mod_p() };
        self.count(k) - rk - self.boundary_matrix(k + 1).rank_mod_p()
    }

    /// Full subcomplex spanned by a vertex set, `None` if it is empty.
    pub fn full_subcomplex(&self, verts: &BTreeSet<usize>) -> Option<Subcomplex> {
        let simplices: Vec<Vec<Simplex>> = self
            .simplices
            .iter()
            .map(|d| d.iter().filter(|s| s.iter().all(|v| verts.contains(v))).cloned().collect::<Vec<_>>())
            .take_while(|d| !d.is_empty())
            .collect();
        if simplices.is_empty() {
            return None;
        }
        let global = simplices
            .iter()
            .enumerate()
            .map(|(k, d)| d.iter().map(|s| self.index[k][s]).collect())
            .collect();
        let complex = Self::from_closed(simplices).expect("full subcomplex is closed");
        Some(Subcomplex { complex, global })
    }
}

/// A subcomplex with the same vertex labels and a map to ambient indices.
#[derive(Debug, Clone)]
pub struct Subcomplex {
    pub complex: OrientedSimplicialComplex,
    /// `global[k][i]`: ambient index of the local k-simplex i.
    pub global: Vec<Vec<usize>>,
}

impl Subcomplex {
    pub fn restrict<T: Real>(&self, c: &Cochain<T>) -> Cochain<T> {
        let values = self.global.get(c.degree).map_or(Vec::new(), |g| g.iter().map(|&i| c.values[i]).collect());
        Cochain { degree: c.degree, values }
    }

    /// Extend by zero to the ambient complex with `ambient_len` p-simplices.
    pub fn extend<T: Real>(&self, c: &Cochain<T>, ambient_len: usize) -> Cochain<T> {
        let mut out = Cochain::zeros(c.degree, ambient_len);
        if let Some(g) = self.global.get(c.degree) {
            for (&i, v) in g.iter().zip(&c.values) {
                out.values[i] = *v;
            }
        }
        out
    }

    pub fn push_chain(&self, c: &Chain) -> Chain {
        let mut out = Chain::zero(c.degree);
        for (&i, x) in &c.coeffs {
            out.add_term(self.global[c.degree][i], x.clone());
        }
        out
    }
}
