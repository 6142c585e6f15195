//! Cayley's closure criterion for conic pairs: the truncated square-root
//! series of det(xA + B)/det(B) and the Hankel determinants whose vanishing
//! detects the n-gon condition.

use thiserror::Error;

use crate::conic::{self, Conic};
use crate::field::{Fp, PrimeField};
use crate::poly::{self, PolyError, TruncatedSeries};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CayleyError {
    #[error("second conic of the pair is singular")]
    SingularConic,
    #[error("n-gon condition needs n >= 3, got {0}")]
    UnsupportedN(u64),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// First `n_terms` coefficients of s(x) = sqrt(det(xA + B)/det(B)), the
/// square-root series normalized to constant term 1.
pub fn cayley_coeffs(a: &Conic, b: &Conic, n_terms: usize) -> Result<Vec<Fp>, CayleyError> {
    let det_b = b.det();
    if det_b.is_zero() {
        return Err(CayleyError::SingularConic);
    }
    let cubic = conic::char_cubic(a, b);
    let inv = det_b.inv().expect("nonzero by the check above");
    let normalized = TruncatedSeries::from_poly(&cubic, n_terms).scale(inv);
    let s = poly::series_sqrt(&normalized)?;
    Ok(s.coeffs().to_vec())
}

/// Coefficients d0..d3 of det(xA + B).
fn char_coeffs(a: &Conic, b: &Conic) -> [Fp; 4] {
    let c = conic::char_cubic(a, b);
    [c.coeff(0), c.coeff(1), c.coeff(2), c.coeff(3)]
}

/// 4 d0 d2 - d1^2, a denominator-free multiple of the triangle determinant:
/// f_3 = s_2 = (4 d0 d2 - d1^2) / (8 d0^2). Defined for every pair, smooth
/// or not.
pub fn cleared_f3(a: &Conic, b: &Conic) -> Fp {
    let field = a.field();
    let [d0, d1, d2, _] = char_coeffs(a, b);
    field.elem(4) * d0 * d2 - d1 * d1
}

/// 8 d0^2 d3 - 4 d0 d1 d2 + d1^3, the same for the tetragon determinant:
/// f_4 = s_3 = (8 d0^2 d3 - 4 d0 d1 d2 + d1^3) / (16 d0^3).
pub fn cleared_f4(a: &Conic, b: &Conic) -> Fp {
    let field = a.field();
    let [d0, d1, d2, d3] = char_coeffs(a, b);
    field.elem(8) * d0 * d0 * d3 - field.elem(4) * d0 * d1 * d2 + d1 * d1 * d1
}

fn determinant(field: PrimeField, mut m: Vec<Vec<Fp>>) -> Fp {
    let n = m.len();
    let mut det = field.one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => return field.zero(),
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col];
        det = det * p;
        let pinv = p.inv().expect("pivot is nonzero");
        for row in col + 1..n {
            let factor = m[row][col] * pinv;
            if factor.is_zero() {
                continue;
            }
            for k in col..n {
                let sub = factor * m[col][k];
                m[row][k] = m[row][k] - sub;
            }
        }
    }
    det
}

/// The Hankel determinant f_n of the pair (A, B), built from the normalized
/// square-root series. For n = 2m+1 it is the m x m determinant with entries
/// s_{2+i+j}; for n = 2m the (m-1) x (m-1) determinant with entries s_{3+i+j}.
/// Vanishing of f_n is the n-gon condition.
pub fn hankel_f(a: &Conic, b: &Conic, n: u64) -> Result<Fp, CayleyError> {
    if n < 3 {
        return Err(CayleyError::UnsupportedN(n));
    }
    let field = a.field();
    let s = cayley_coeffs(a, b, n as usize)?;
    let (size, base) = if n % 2 == 1 {
        ((n as usize - 1) / 2, 2usize)
    } else {
        (n as usize / 2 - 1, 3usize)
    };
    let m: Vec<Vec<Fp>> = (0..size)
        .map(|i| (0..size).map(|j| s[base + i + j]).collect())
        .collect();
    Ok(determinant(field, m))
}

pub fn satisfies_ngon_cayley(a: &Conic, b: &Conic, n: u64) -> Result<bool, CayleyError> {
    Ok(hankel_f(a, b, n)?.is_zero())
}
