//! Small exact rational matrix helpers. Matrices here are at most 8x8.

use num_rational::Rational64;
use num_traits::{One, Zero};

pub type RatMatrix = Vec<Vec<Rational64>>;

pub fn from_int(m: &[Vec<i64>]) -> RatMatrix {
    m.iter()
        .map(|row| row.iter().map(|&x| Rational64::from_integer(x)).collect())
        .collect()
}

pub fn transpose(m: &RatMatrix) -> RatMatrix {
    let n = m.len();
    let cols = if n == 0 { 0 } else { m[0].len() };
    (0..cols)
        .map(|j| (0..n).map(|i| m[i][j]).collect())
        .collect()
}

pub fn mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Rational64::zero(), |acc, k| acc + row[k] * b[k][j]))
                .collect()
        })
        .collect()
}

pub fn mul_vec(a: &RatMatrix, v: &[Rational64]) -> Vec<Rational64> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Rational64::zero(), |acc, (x, y)| acc + x * y)
        })
        .collect()
}

/// Gauss-Jordan inverse. Panics on a singular matrix, which cannot occur for
/// Cartan matrices of finite type.
pub fn inverse(m: &RatMatrix) -> RatMatrix {
    let n = m.len();
    let mut a: RatMatrix = m.clone();
    let mut inv: RatMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational64::one()
                    } else {
                        Rational64::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("singular matrix");
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for j in 0..n {
                    let (x, y) = (a[col][j], inv[col][j]);
                    a[r][j] -= f * x;
                    inv[r][j] -= f * y;
                }
            }
        }
    }
    inv
}

pub fn det(m: &RatMatrix) -> Rational64 {
    let n = m.len();
    let mut a = m.clone();
    let mut d = Rational64::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational64::zero();
        };
        if pivot != col {
            a.swap(col, pivot);
            d = -d;
        }
        let p = a[col][col];
        d *= p;
        for r in col + 1..n {
            let f = a[r][col] / p;
            if !f.is_zero() {
                let (top, bottom) = a.split_at_mut(r);
                for (x, &y) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                    *x -= f * y;
                }
            }
        }
    }
    d
}

pub fn int_det(m: &[Vec<i64>]) -> i64 {
    det(&from_int(m)).to_integer()
}
