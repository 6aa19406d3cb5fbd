//! Exact dense linear algebra over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Dense matrix over `Q`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Q>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn set_int(&mut self, r: usize, c: usize, v: i64) {
        self.set(r, c, q(v));
    }

    pub fn mul_vec(&self, x: &[Q]) -> Vec<Q> {
        (0..self.rows)
            .map(|r| {
                let mut acc = Q::zero();
                for c in 0..self.cols {
                    let a = self.get(r, c);
                    if !a.is_zero() && !x[c].is_zero() {
                        acc += a * &x[c];
                    }
                }
                acc
            })
            .collect()
    }

    /// Inverse of a square matrix; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut id = Matrix::zeros(n, n);
        for i in 0..n {
            id.set(i, i, Q::one());
        }
        eliminate(self.clone(), id)
    }

    /// Solution of `self * x = b` for square `self`; `None` when singular.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(self.rows, self.cols, "solve with a non-square matrix");
        let mut rhs = Matrix::zeros(self.rows, 1);
        for (i, v) in b.iter().enumerate() {
            rhs.set(i, 0, v.clone());
        }
        eliminate(self.clone(), rhs).map(|x| x.data)
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            let Some(p) = (rank..m.rows).find(|&r| !m.get(r, c).is_zero()) else { continue };
            swap_rows(&mut m, p, rank);
            for r in rank + 1..m.rows {
                if !m.get(r, c).is_zero() {
                    let f = m.get(r, c) / m.get(rank, c);
                    row_axpy(&mut m, r, rank, &f);
                }
            }
            rank += 1;
        }
        rank
    }
}

impl Matrix {
    /// Basis of the right kernel `{x : self * x = 0}`, from the reduced row
    /// echelon form: one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            swap_rows(&mut m, p, r);
            let inv = m.get(r, c).recip();
            for k in 0..m.cols {
                let v = m.get(r, k) * &inv;
                m.set(r, k, v);
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c).clone();
                    row_axpy(&mut m, i, r, &f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (0..m.cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut x = vec![Q::zero(); m.cols];
                x[free] = Q::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    x[pc] = -m.get(row, free).clone();
                }
                x
            })
            .collect()
    }
}

/// Smallest integer multiple of a nonzero rational vector: denominators
/// cleared, content divided out.
pub fn primitive_integer(v: &[Q]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

fn swap_rows(m: &mut Matrix, a: usize, b: usize) {
    if a != b {
        for c in 0..m.cols {
            m.data.swap(a * m.cols + c, b * m.cols + c);
        }
    }
}

/// `row[dst] -= f * row[src]`.
fn row_axpy(m: &mut Matrix, dst: usize, src: usize, f: &Q) {
    for c in 0..m.cols {
        let s = &m.data[src * m.cols + c];
        if !s.is_zero() {
            let t = f * s;
            m.data[dst * m.cols + c] -= t;
        }
    }
}

/// Gauss–Jordan on `[a | b]`, returning `a^{-1} b`.
fn eliminate(mut a: Matrix, mut b: Matrix) -> Option<Matrix> {
    let n = a.rows;
    for c in 0..n {
        let p = (c..n).find(|&r| !a.get(r, c).is_zero())?;
        swap_rows(&mut a, p, c);
        swap_rows(&mut b, p, c);
        let inv = a.get(c, c).recip();
        for k in 0..a.cols {
            let v = a.get(c, k) * &inv;
            a.set(c, k, v);
        }
        for k in 0..b.cols {
            let v = b.get(c, k) * &inv;
            b.set(c, k, v);
        }
        for r in 0..n {
            if r != c && !a.get(r, c).is_zero() {
                let f = a.get(r, c).clone();
                row_axpy(&mut a, r, c, &f);
                row_axpy(&mut b, r, c, &f);
            }
        }
    }
    Some(b)
}
