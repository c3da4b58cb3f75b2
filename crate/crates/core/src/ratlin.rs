//! Exact linear algebra over the rationals.
//!
//! Dimensions here are tiny (at most 14, the dimension of the G2 Lie
//! algebra), so plain fraction-free-ish Gaussian elimination on
//! `BigRational` entries is more than fast enough and never overflows.

use crate::Rat;
use num_traits::{One, Signed, Zero};

pub type Vecr = Vec<Rat>;

#[derive(Clone, Debug, PartialEq)]
pub struct Matr {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<Vecr>,
}

pub fn rz() -> Rat {
    Rat::zero()
}

pub fn ri(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

pub fn rq(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

impl Matr {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matr { rows, cols, a: vec![vec![rz(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matr::zeros(n, n);
        for i in 0..n {
            m.a[i][i] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vecr>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        debug_assert!(rows.iter().all(|row| row.len() == c));
        Matr { rows: r, cols: c, a: rows }
    }

    pub fn from_cols(cols: Vec<Vecr>) -> Self {
        let c = cols.len();
        let r = if c == 0 { 0 } else { cols[0].len() };
        let mut m = Matr::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for i in 0..r {
                m.a[i][j] = col[i].clone();
            }
        }
        m
    }

    pub fn col(&self, j: usize) -> Vecr {
        (0..self.rows).map(|i| self.a[i][j].clone()).collect()
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vecr {
        debug_assert_eq!(v.len(), self.cols);
        self.a
            .iter()
            .map(|row| {
                let mut s = rz();
                for (x, y) in row.iter().zip(v) {
                    s += x * y;
                }
                s
            })
            .collect()
    }

    pub fn mul(&self, other: &Matr) -> Matr {
        debug_assert_eq!(self.cols, other.rows);
        let mut m = Matr::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.a[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = &self.a[i][k] * &other.a[k][j];
                    m.a[i][j] += p;
                }
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|row| row.iter().all(|x| x.is_zero()))
    }

    /// Row echelon form; returns pivot column indices.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            // choose pivot with largest absolute value to keep entries tame
            let mut best: Option<usize> = None;
            for i in row..self.rows {
                if !self.a[i][col].is_zero() {
                    best = match best {
                        None => Some(i),
                        Some(b) => {
                            if self.a[i][col].abs() > self.a[b][col].abs() {
                                Some(i)
                            } else {
                                Some(b)
                            }
                        }
                    };
                }
            }
            let Some(p) = best else { continue };
            self.a.swap(row, p);
            let inv = Rat::one() / self.a[row][col].clone();
            for j in col..self.cols {
                self.a[row][j] = &self.a[row][j] * &inv;
            }
            for i in 0..self.rows {
                if i != row && !self.a[i][col].is_zero() {
                    let f = self.a[i][col].clone();
                    for j in col..self.cols {
                        let t = &self.a[row][j] * &f;
                        self.a[i][j] -= t;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce().len()
    }

    /// Basis of the right null space.
    pub fn null_space(&self) -> Vec<Vecr> {
        let mut m = self.clone();
        let pivots = m.row_reduce();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|j| !pivot_set.contains(j)).collect();
        let mut basis = Vec::new();
        for &fj in &free {
            let mut v = vec![rz(); self.cols];
            v[fj] = Rat::one();
            for (pi, &pj) in pivots.iter().enumerate() {
                v[pj] = -m.a[pi][fj].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `self * x = b`, if any.
    pub fn solve(&self, b: &[Rat]) -> Option<Vecr> {
        debug_assert_eq!(b.len(), self.rows);
        let mut aug = Matr::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.a[i][j] = self.a[i][j].clone();
            }
            aug.a[i][self.cols] = b[i].clone();
        }
        let pivots = aug.row_reduce();
        if pivots.contains(&self.cols) {
            return None; // inconsistent
        }
        let mut x = vec![rz(); self.cols];
        for (pi, &pj) in pivots.iter().enumerate() {
            x[pj] = aug.a[pi][self.cols].clone();
        }
        Some(x)
    }

    /// Intersection of the row-span null spaces: basis of `{x : self x = 0 and other x = 0}`.
    pub fn stacked(&self, other: &Matr) -> Matr {
        debug_assert_eq!(self.cols, other.cols);
        let mut rows = self.a.clone();
        rows.extend(other.a.clone());
        Matr::from_rows(rows)
    }
}

/// Basis of the span of `vecs` (subset of input, exact).
pub fn span_basis(vecs: &[Vecr]) -> Vec<Vecr> {
    if vecs.is_empty() {
        return Vec::new();
    }
    let mut out: Vec<Vecr> = Vec::new();
    for v in vecs {
        let mut m = Matr::from_rows(out.iter().cloned().chain(std::iter::once(v.clone())).collect());
        if m.row_reduce().len() > out.len() {
            out.push(v.clone());
        }
    }
    out
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    let mut s = rz();
    for (x, y) in a.iter().zip(b) {
        s += x * y;
    }
    s
}

pub fn scale(v: &[Rat], s: &Rat) -> Vecr {
    v.iter().map(|x| x * s).collect()
}

pub fn add(a: &[Rat], b: &[Rat]) -> Vecr {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rat], b: &[Rat]) -> Vecr {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Smith normal form of a small integer matrix: returns (u, d, v) with
/// `u * a * v = d`, `u`, `v` unimodular and `d` diagonal with nonnegative
/// entries.  Only used for lattice quotients of rank <= 2.
pub fn smith_normal_form(a: &[Vec<i64>]) -> (Vec<Vec<i64>>, Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let n = a.len();
    let m = if n == 0 { 0 } else { a[0].len() };
    let mut d: Vec<Vec<i64>> = a.to_vec();
    let mut u = ident_i64(n);
    let mut v = ident_i64(m);

    fn ident_i64(n: usize) -> Vec<Vec<i64>> {
        let mut e = vec![vec![0i64; n]; n];
        for i in 0..n {
            e[i][i] = 1;
        }
        e
    }

    let mut t = 0usize;
    while t < n.min(m) {
        // find a nonzero entry with minimal absolute value in the lower right block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..n {
            for j in t..m {
                if d[i][j] != 0 {
                    pivot = match pivot {
                        None => Some((i, j)),
                        Some((pi, pj)) => {
                            if d[i][j].abs() < d[pi][pj].abs() {
                                Some((i, j))
                            } else {
                                Some((pi, pj))
                            }
                        }
                    };
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        for row in d.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        let mut again = false;
        for i in 0..n {
            if i != t && d[i][t] != 0 {
                let f = d[i][t] / d[t][t];
                for j in 0..m {
                    d[i][j] -= f * d[t][j];
                }
                for j in 0..n {
                    u[i][j] -= f * u[t][j];
                }
                if d[i][t] != 0 {
                    again = true;
                }
            }
        }
        for j in 0..m {
            if j != t && d[t][j] != 0 {
                let f = d[t][j] / d[t][t];
                for i in 0..n {
                    d[i][j] -= f * d[i][t];
                    v[i][j] -= f * v[i][t];
                }
                if d[t][j] != 0 {
                    again = true;
                }
            }
        }
        if again {
            continue;
        }
        if d[t][t] < 0 {
            for j in 0..m {
                d[t][j] = -d[t][j];
            }
            for j in 0..n {
                u[t][j] = -u[t][j];
            }
        }
        t += 1;
    }
    (u, d, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_singular_matrix() {
        let m = Matr::from_rows(vec![
            vec![ri(1), ri(2), ri(3)],
            vec![ri(2), ri(4), ri(6)],
        ]);
        let ns = m.null_space();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(is_zero_vec(&m.mul_vec(v)));
        }
    }

    #[test]
    fn solve_consistent_system() {
        let m = Matr::from_rows(vec![vec![ri(2), ri(1)], vec![ri(1), ri(-1)]]);
        let x = m.solve(&[ri(5), ri(1)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![ri(5), ri(1)]);
    }

    #[test]
    fn smith_form_diagonalizes() {
        let a = vec![vec![2i64, 1], vec![0, 3]];
        let (u, d, v) = smith_normal_form(&a);
        // u*a*v == d
        let mul = |x: &Vec<Vec<i64>>, y: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
            let n = x.len();
            let m = y[0].len();
            let k = y.len();
            let mut z = vec![vec![0i64; m]; n];
            for i in 0..n {
                for t in 0..k {
                    for j in 0..m {
                        z[i][j] += x[i][t] * y[t][j];
                    }
                }
            }
            z
        };
        let lhs = mul(&mul(&u, &a), &v);
        assert_eq!(lhs, d);
        assert_eq!(d[0][1], 0);
        assert_eq!(d[1][0], 0);
        assert_eq!(d[0][0] * d[1][1], 6);
    }
}
