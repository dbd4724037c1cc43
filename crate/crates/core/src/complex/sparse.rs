//! Column-sparse integer matrices and rank over a prime field.

/// Integer matrix stored by columns; each column is sorted by row.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub cols: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, cols: vec![Vec::new(); ncols] }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.ncols()]; self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                d[i][j] = v;
            }
        }
        d
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut cols = vec![Vec::new(); self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                cols[i].push((j, v));
            }
        }
        SparseMatrix { nrows: self.ncols(), cols }
    }

    /// `self * other`, exact.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols(), other.nrows);
        let cols = other
            .cols
            .iter()
            .map(|col| {
                let mut acc = std::collections::BTreeMap::<usize, i64>::new();
                for &(k, b) in col {
                    for &(i, a) in &self.cols[k] {
                        *acc.entry(i).or_insert(0) += a * b;
                    }
                }
                acc.into_iter().filter(|&(_, v)| v != 0).collect()
            })
            .collect();
        SparseMatrix { nrows: self.nrows, cols }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.iter().all(|&(_, v)| v == 0))
    }

    /// Rank over GF(p) with p = 2^61 - 1, by column reduction.
    ///
    /// Agrees with the rational rank unless p divides a torsion coefficient,
    /// which cannot happen for the small integer matrices used here.
    pub fn rank_mod_p(&self) -> usize {
        let mut pivots: std::collections::HashMap<usize, Vec<(usize, u64)>> = Default::default();
        for col in &self.cols {
            let mut v: Vec<(usize, u64)> =
                col.iter().filter(|e| e.1 != 0).map(|&(i, x)| (i, to_field(x))).collect();
            while let Some(&(low, lv)) = v.last() {
                match pivots.get(&low) {
                    Some(p) => {
                        let plv = p.last().unwrap().1;
                        let factor = mul_mod(lv, inv_mod(plv));
                        v = axpy(&v, p, MODULUS - factor);
                    }
                    None => {
                        pivots.insert(low, v);
                        break;
                    }
                }
            }
        }
        pivots.len()
    }
}

const MODULUS: u64 = (1 << 61) - 1;

fn to_field(x: i64) -> u64 {
    let m = MODULUS as i128;
    (((x as i128) % m + m) % m) as u64
}

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODULUS as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, MODULUS - 2)
}

/// `x + f * y` on sorted sparse vectors, dropping zeros.
fn axpy(x: &[(usize, u64)], y: &[(usize, u64)], f: u64) -> Vec<(usize, u64)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take = match (x.get(i), y.get(j)) {
            (Some(a), Some(b)) => a.0.cmp(&b.0),
            (Some(_), None) => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Greater,
        };
        let (row, val) = match take {
            std::cmp::Ordering::Less => {
                i += 1;
                x[i - 1]
            }
            std::cmp::Ordering::Greater => {
                j += 1;
                (y[j - 1].0, mul_mod(f, y[j - 1].1))
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
                (x[i - 1].0, (x[i - 1].1 + mul_mod(f, y[j - 1].1)) % MODULUS)
            }
        };
        if val != 0 {
            out.push((row, val));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        let m = SparseMatrix { nrows: 2, cols: vec![vec![(0, 1), (1, 1)], vec![(0, 2), (1, 2)]] };
        assert_eq!(m.rank_mod_p(), 1);
        let id = SparseMatrix { nrows: 3, cols: (0..3).map(|i| vec![(i, 1)]).collect() };
        assert_eq!(id.rank_mod_p(), 3);
        // 2 is invertible mod p, so rank 1 over Q as well
        let two = SparseMatrix { nrows: 1, cols: vec![vec![(0, 2)]] };
        assert_eq!(two.rank_mod_p(), 1);
    }

    #[test]
    fn product_and_transpose() {
        let a = SparseMatrix { nrows: 2, cols: vec![vec![(0, 1)], vec![(1, -1)]] };
        let p = a.mul(&a.transpose());
        assert_eq!(p.to_dense(), vec![vec![1, 0], vec![0, 1]]);
    }
}
