//! Helpers on plain coordinate vectors.

use crate::scalar::{fma, Field, Scalar};

use super::matrix::Matrix;

pub fn zeros(field: Field, n: usize) -> Vec<Scalar> {
    vec![field.zero(); n]
}

pub fn unit(field: Field, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = zeros(field, n);
    v[i] = field.one();
    v
}

pub fn is_zero(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// `y += a·x`.
pub fn axpy(y: &mut [Scalar], a: &Scalar, x: &[Scalar]) {
    debug_assert_eq!(y.len(), x.len());
    if a.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            fma(yi, a, xi);
        }
    }
}

pub fn add(x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn sub(x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn scale(a: &Scalar, x: &[Scalar]) -> Vec<Scalar> {
    x.iter().map(|xi| a * xi).collect()
}

pub fn neg(x: &[Scalar]) -> Vec<Scalar> {
    x.iter().map(|xi| -xi).collect()
}

pub fn dot(x: &[Scalar], y: &[Scalar]) -> Scalar {
    let field = x.first().map_or(Field::Rational, Scalar::field);
    let mut acc = field.zero();
    for (a, b) in x.iter().zip(y) {
        fma(&mut acc, a, b);
    }
    acc
}

/// Row vector times matrix: `wᵀ·m`.
pub fn row_times(w: &[Scalar], m: &Matrix) -> Vec<Scalar> {
    assert_eq!(w.len(), m.rows());
    let mut out = zeros(m.field(), m.cols());
    for (r, wr) in w.iter().enumerate() {
        if !wr.is_zero() {
            axpy(&mut out, wr, m.row(r));
        }
    }
    out
}

pub fn from_i64(field: Field, xs: &[i64]) -> Vec<Scalar> {
    xs.iter().map(|&x| field.from_i64(x)).collect()
}

pub fn to_strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}
