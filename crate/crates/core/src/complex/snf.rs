//! Smith normal form over a Euclidean ring with full transform tracking.

use crate::scalar::Ring;

pub type Matrix<T> = Vec<Vec<T>>;

/// `diag = P · A · Q` with `P`, `Q` unimodular.
///
/// The inverses are tracked alongside so callers never invert integer
/// matrices themselves.
#[derive(Debug, Clone)]
pub struct SmithForm<T> {
    pub nrows: usize,
    pub ncols: usize,
    /// Nonzero invariant factors d_0 | d_1 | ..., all positive.
    pub diag: Vec<T>,
    pub p: Matrix<T>,
    pub p_inv: Matrix<T>,
    pub q: Matrix<T>,
    pub q_inv: Matrix<T>,
}

impl<T: Ring> SmithForm<T> {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// Integer solution of A x = b, if one exists.
    pub fn solve_integer(&self, b: &[T]) -> Option<Vec<T>> {
        let c = mat_vec(&self.p, b);
        let mut y = vec![T::zero(); self.ncols];
        for (i, ci) in c.iter().enumerate() {
            match self.diag.get(i) {
                Some(d) if ci.is_multiple_of(d) => y[i] = ci.div_floor(d),
                Some(_) => return None,
                None if !ci.is_zero() => return None,
                None => {}
            }
        }
        Some(mat_vec(&self.q, &y))
    }

    pub fn compute(a: &Matrix<T>, nrows: usize, ncols: usize) -> Self {
        let mut w = Work {
            a: a.clone(),
            p: identity(nrows),
            p_inv: identity(nrows),
            q: identity(ncols),
            q_inv: identity(ncols),
        };
        let mut diag = Vec::new();
        let mut t = 0;
        while t < nrows.min(ncols) {
            let Some((pi, pj)) = w.smallest_nonzero(t) else { break };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            loop {
                // clear column t and row t by Euclidean steps
                let mut dirty = false;
                for i in t + 1..nrows {
                    if !w.a[i][t].is_zero() {
                        let qt = w.a[i][t].div_floor(&w.a[t][t]);
                        w.add_row(i, t, -qt);
                        if !w.a[i][t].is_zero() {
                            dirty = true;
                        }
                    }
                }
                for j in t + 1..ncols {
                    if !w.a[t][j].is_zero() {
                        let qt = w.a[t][j].div_floor(&w.a[t][t]);
                        w.add_col(j, t, -qt);
                        if !w.a[t][j].is_zero() {
                            dirty = true;
                        }
                    }
                }
                if dirty {
                    let (pi, pj) = w.smallest_in_cross(t);
                    w.swap_rows(t, pi);
                    w.swap_cols(t, pj);
                    continue;
                }
                // divisibility of the remaining block
                let bad = (t + 1..nrows).find_map(|i| {
                    (t + 1..ncols)
                        .find(|&j| !w.a[i][j].is_multiple_of(&w.a[t][t]))
                        .map(|_| i)
                });
                match bad {
                    Some(i) => w.add_row(t, i, T::one()),
                    None => break,
                }
            }
            if w.a[t][t].is_negative() {
                w.negate_row(t);
            }
            diag.push(w.a[t][t].clone());
            t += 1;
        }
        SmithForm { nrows, ncols, diag, p: w.p, p_inv: w.p_inv, q: w.q, q_inv: w.q_inv }
    }
}

pub fn identity<T: Ring>(n: usize) -> Matrix<T> {
    (0..n).map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect()
}

pub fn mat_vec<T: Ring>(m: &Matrix<T>, v: &[T]) -> Vec<T> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
        .collect()
}

struct Work<T> {
    a: Matrix<T>,
    p: Matrix<T>,
    p_inv: Matrix<T>,
    q: Matrix<T>,
    q_inv: Matrix<T>,
}

impl<T: Ring> Work<T> {
    fn smallest_nonzero(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, T)> = None;
        for (i, row) in self.a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|b| ax < b.2) {
                    let unit = ax.is_one();
                    best = Some((i, j, ax));
                    if unit {
                        return best.map(|b| (b.0, b.1));
                    }
                }
            }
        }
        best.map(|b| (b.0, b.1))
    }

    fn smallest_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t, self.a[t][t].abs());
        for i in t + 1..self.a.len() {
            let x = self.a[i][t].abs();
            if !x.is_zero() && x < best.2 {
                best = (i, t, x);
            }
        }
        for j in t + 1..self.a[t].len() {
            let x = self.a[t][j].abs();
            if !x.is_zero() && x < best.2 {
                best = (t, j, x);
            }
        }
        (best.0, best.1)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.p.swap(i, j);
        for row in &mut self.p_inv {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.a {
            row.swap(i, j);
        }
        for row in &mut self.q {
            row.swap(i, j);
        }
        self.q_inv.swap(i, j);
    }

    /// row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: T) {
        if c.is_zero() {
            return;
        }
        add_scaled_row(&mut self.a, i, j, &c);
        add_scaled_row(&mut self.p, i, j, &c);
        // P_inv <- P_inv E^-1 : col_j -= c col_i
        for row in &mut self.p_inv {
            let v = row[i].clone() * c.clone();
            row[j] = row[j].clone() - v;
        }
    }

    /// col_j += c * col_i
    fn add_col(&mut self, j: usize, i: usize, c: T) {
        if c.is_zero() {
            return;
        }
        for m in [&mut self.a, &mut self.q] {
            for row in m.iter_mut() {
                let v = row[i].clone() * c.clone();
                row[j] = row[j].clone() + v;
            }
        }
        // Q_inv <- F^-1 Q_inv : row_i -= c row_j
        add_scaled_row(&mut self.q_inv, i, j, &-c);
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut().chain(self.p[i].iter_mut()) {
            *x = -x.clone();
        }
        for row in &mut self.p_inv {
            row[i] = -row[i].clone();
        }
    }
}

fn add_scaled_row<T: Ring>(m: &mut Matrix<T>, i: usize, j: usize, c: &T) {
    let src = m[j].clone();
    for (x, s) in m[i].iter_mut().zip(src) {
        if !s.is_zero() {
            *x = x.clone() + s * c.clone();
        }
    }
}
