//! Plane conics as symmetric 3x3 matrices: smoothness, transversality,
//! rational parametrization, and intersection-type classification of a pair.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::field::{Fp, PrimeField};
use crate::poly::{self, Poly, PolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConicError {
    #[error("conic is not smooth")]
    NotSmooth,
    #[error("conics do not intersect transversally")]
    NotTransversal,
    #[error("bad conic coefficient list: {0}")]
    Parse(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

pub type Vec3 = [Fp; 3];
pub type Mat3 = [[Fp; 3]; 3];

/// Conic ax^2+bxy+cxz+dy^2+eyz+fz^2 stored as the symmetric matrix
/// [[a, b/2, c/2], [b/2, d, e/2], [c/2, e/2, f]].
#[derive(Debug, Clone, Copy, Eq)]
pub struct Conic {
    field: PrimeField,
    m: Mat3,
}

impl Conic {
    /// From the coefficient list (a, b, c, d, e, f) in the fixed ordering
    /// ax^2 + bxy + cxz + dy^2 + eyz + fz^2.
    pub fn from_coeffs(field: PrimeField, coeffs: [Fp; 6]) -> Conic {
        let [a, b, c, d, e, f] = coeffs;
        let half = field.elem(2).inv().expect("char > 2");
        Conic {
            field,
            m: [
                [a, b * half, c * half],
                [b * half, d, e * half],
                [c * half, e * half, f],
            ],
        }
    }

    pub fn from_i64_coeffs(field: PrimeField, coeffs: [i64; 6]) -> Conic {
        Conic::from_coeffs(field, coeffs.map(|c| field.elem_i64(c)))
    }

    pub fn from_matrix(field: PrimeField, m: Mat3) -> Conic {
        debug_assert!(m[0][1] == m[1][0] && m[0][2] == m[2][0] && m[1][2] == m[2][1]);
        Conic { field, m }
    }

    /// Back to (a, b, c, d, e, f).
    pub fn coeffs(&self) -> [Fp; 6] {
        let two = self.field.elem(2);
        [
            self.m[0][0],
            self.m[0][1] * two,
            self.m[0][2] * two,
            self.m[1][1],
            self.m[1][2] * two,
            self.m[2][2],
        ]
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.m
    }

    pub fn det(&self) -> Fp {
        det3(&self.m)
    }

    pub fn is_smooth(&self) -> bool {
        !self.det().is_zero()
    }

    /// v^T M v.
    pub fn eval(&self, v: &Vec3) -> Fp {
        self.bilinear(v, v)
    }

    /// u^T M v, the symmetric bilinear form.
    pub fn bilinear(&self, u: &Vec3, v: &Vec3) -> Fp {
        let mut acc = self.field.zero();
        for i in 0..3 {
            for j in 0..3 {
                acc += u[i] * self.m[i][j] * v[j];
            }
        }
        acc
    }

    pub fn scale(&self, c: Fp) -> Conic {
        let mut m = self.m;
        for row in m.iter_mut() {
            for entry in row.iter_mut() {
                *entry = *entry * c;
            }
        }
        Conic { field: self.field, m }
    }

    pub fn add(&self, other: &Conic) -> Conic {
        let mut m = self.m;
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += other.m[i][j];
            }
        }
        Conic { field: self.field, m }
    }

    /// Congruence transform M^T A M.
    pub fn transform(&self, t: &Mat3) -> Conic {
        let z = self.field.zero();
        let mut am = [[z; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    am[i][j] += self.m[i][k] * t[k][j];
                }
            }
        }
        let mut out = [[z; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    out[i][j] += t[k][i] * am[k][j];
                }
            }
        }
        Conic { field: self.field, m: out }
    }

    /// Some F_p-point on a smooth conic, by deterministic scan of P^2 in the
    /// order (0:0:1), (0:1:z), (1:y:z).
    pub fn rational_point(&self) -> Vec3 {
        let f = self.field;
        let (zero, one) = (f.zero(), f.one());
        let candidate = [zero, zero, one];
        if self.eval(&candidate).is_zero() {
            return candidate;
        }
        for z in 0..f.modulus() {
            let v = [zero, one, f.elem(z)];
            if self.eval(&v).is_zero() {
                return v;
            }
        }
        for y in 0..f.modulus() {
            for z in 0..f.modulus() {
                let v = [one, f.elem(y), f.elem(z)];
                if self.eval(&v).is_zero() {
                    return v;
                }
            }
        }
        panic!("smooth conic over a finite field has a rational point");
    }
}

// Projective identity: equal up to a non-zero scalar.
impl PartialEq for Conic {
    fn eq(&self, other: &Conic) -> bool {
        if self.field != other.field {
            return false;
        }
        let a: Vec<Fp> = self.m.iter().flatten().copied().collect();
        let b: Vec<Fp> = other.m.iter().flatten().copied().collect();
        let pivot = match a.iter().position(|c| !c.is_zero()) {
            Some(i) => i,
            None => return b.iter().all(|c| c.is_zero()),
        };
        if b[pivot].is_zero() {
            return false;
        }
        (0..9).all(|i| a[i] * b[pivot] == b[i] * a[pivot])
    }
}

impl fmt::Display for Conic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coeffs();
        write!(f, "{},{},{},{},{},{}", c[0], c[1], c[2], c[3], c[4], c[5])
    }
}

/// Parse the CLI text form `a,b,c,d,e,f`.
pub fn parse_conic(field: PrimeField, s: &str) -> Result<Conic, ConicError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 6 {
        return Err(ConicError::Parse(format!(
            "expected 6 comma-separated coefficients, got {}",
            parts.len()
        )));
    }
    let mut coeffs = [field.zero(); 6];
    for (i, part) in parts.iter().enumerate() {
        let v: i64 = part
            .trim()
            .parse()
            .map_err(|_| ConicError::Parse(format!("bad coefficient '{part}'")))?;
        coeffs[i] = field.elem_i64(v);
    }
    Ok(Conic::from_coeffs(field, coeffs))
}

fn det3(m: &Mat3) -> Fp {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// det(xA + B) as a polynomial of degree <= 3.
pub fn char_cubic(a: &Conic, b: &Conic) -> Poly {
    let field = a.field();
    // Entries are linear in x; expand the 3x3 determinant cofactor-wise.
    let entry = |i: usize, j: usize| -> Poly {
        Poly::new(field, vec![b.m[i][j], a.m[i][j]])
    };
    let minor = |r0: usize, r1: usize, c0: usize, c1: usize| -> Poly {
        entry(r0, c0).mul(&entry(r1, c1)).sub(&entry(r0, c1).mul(&entry(r1, c0)))
    };
    entry(0, 0)
        .mul(&minor(1, 2, 1, 2))
        .sub(&entry(0, 1).mul(&minor(1, 2, 0, 2)))
        .add(&entry(0, 2).mul(&minor(1, 2, 0, 1)))
}

/// True iff det(xA + B) has degree 3 and is squarefree.
pub fn is_transversal(a: &Conic, b: &Conic) -> Result<bool, ConicError> {
    if !a.is_smooth() || !b.is_smooth() {
        return Err(ConicError::NotSmooth);
    }
    let cubic = char_cubic(a, b);
    Ok(cubic.degree() == Some(3) && cubic.is_squarefree())
}

/// Partition of 4 recording the Frobenius orbit sizes of the base points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntersectionType {
    /// (1,1,1,1)
    Split,
    /// (2,1,1)
    OnePair,
    /// (2,2)
    TwoPairs,
    /// (3,1)
    CubicPoint,
    /// (4)
    Quartic,
}

impl IntersectionType {
    pub const ALL: [IntersectionType; 5] = [
        IntersectionType::Split,
        IntersectionType::OnePair,
        IntersectionType::TwoPairs,
        IntersectionType::CubicPoint,
        IntersectionType::Quartic,
    ];

    pub fn partition(&self) -> &'static [usize] {
        match self {
            IntersectionType::Split => &[1, 1, 1, 1],
            IntersectionType::OnePair => &[1, 1, 2],
            IntersectionType::TwoPairs => &[2, 2],
            IntersectionType::CubicPoint => &[1, 3],
            IntersectionType::Quartic => &[4],
        }
    }

    pub fn from_partition(parts: &[usize]) -> Option<IntersectionType> {
        IntersectionType::ALL
            .into_iter()
            .find(|t| t.partition() == parts)
    }

    pub fn label(&self) -> &'static str {
        match self {
            IntersectionType::Split => "(1,1,1,1)",
            IntersectionType::OnePair => "(2,1,1)",
            IntersectionType::TwoPairs => "(2,2)",
            IntersectionType::CubicPoint => "(3,1)",
            IntersectionType::Quartic => "(4)",
        }
    }
}

impl fmt::Display for IntersectionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for IntersectionType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s.chars().filter(|c| c.is_ascii_digit()).collect();
        match norm.as_str() {
            "1111" => Ok(IntersectionType::Split),
            "211" => Ok(IntersectionType::OnePair),
            "22" => Ok(IntersectionType::TwoPairs),
            "31" => Ok(IntersectionType::CubicPoint),
            "4" => Ok(IntersectionType::Quartic),
            _ => Err(format!("unknown intersection type '{s}'")),
        }
    }
}

// Binary form in (u, v), index = u-degree.
type Quadratic = [Fp; 3];

fn mul_forms(a: &[Fp], b: &[Fp], field: PrimeField) -> Vec<Fp> {
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Rational parametrization of a smooth conic: three binary quadratic forms
/// phi(u,v) in P^2 giving a bijection P^1 -> conic.
pub fn parametrize(c: &Conic) -> [Quadratic; 3] {
    let field = c.field();
    let p0 = c.rational_point();
    // Two coordinate directions spanning a line avoiding p0.
    let pivot = (0..3).position(|i| !p0[i].is_zero()).unwrap();
    let (i1, i2) = match pivot {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let basis = |k: usize| -> Vec3 {
        let mut v = [field.zero(); 3];
        v[k] = field.one();
        v
    };
    let r1 = basis(i1);
    let r2 = basis(i2);
    // Line through p0 in direction D = u r1 + v r2 meets the conic again at
    // Phi(D,D) p0 - 2 Phi(p0,D) D.
    let qdd = [
        c.bilinear(&r1, &r1),
        c.bilinear(&r1, &r2) * field.elem(2),
        c.bilinear(&r2, &r2),
    ];
    let l1 = c.bilinear(&p0, &r1);
    let l2 = c.bilinear(&p0, &r2);
    let two = field.elem(2);
    let mut phi = [[field.zero(); 3]; 3];
    for k in 0..3 {
        // quadratic part
        for d in 0..3 {
            phi[k][d] = qdd[d] * p0[k];
        }
        // -2 * (l1 u + l2 v) * D_k with D_k = u [k==i1] + v [k==i2]
        if k == i1 {
            phi[k][0] -= two * l1;
            phi[k][1] -= two * l2;
        }
        if k == i2 {
            phi[k][1] -= two * l1;
            phi[k][2] -= two * l2;
        }
    }
    phi
}

/// Pull back the second conic through the parametrization of the first:
/// the binary quartic whose projective roots are the base points.
pub fn pullback_quartic(a: &Conic, b: &Conic) -> [Fp; 5] {
    let field = a.field();
    let phi = parametrize(a);
    let mut out = [field.zero(); 5];
    for i in 0..3 {
        for j in 0..3 {
            let coeff = b.matrix()[i][j];
            if coeff.is_zero() {
                continue;
            }
            let prod = mul_forms(&phi[i], &phi[j], field);
            for (k, &c) in prod.iter().enumerate() {
                out[k] += coeff * c;
            }
        }
    }
    out
}

/// Classify the pair by the degree partition of the pullback quartic; a root
/// at infinity counts as a rational linear factor.
pub fn intersection_type(a: &Conic, b: &Conic) -> Result<IntersectionType, ConicError> {
    if !a.is_smooth() || !b.is_smooth() {
        return Err(ConicError::NotSmooth);
    }
    let field = a.field();
    let q = pullback_quartic(a, b);
    let poly = Poly::new(field, q.to_vec());
    let mut parts = match poly.degree() {
        Some(4) => {
            if !poly.is_squarefree() {
                return Err(ConicError::NotTransversal);
            }
            poly::degree_partition(&poly)?
        }
        Some(3) => {
            if !poly.is_squarefree() {
                return Err(ConicError::NotTransversal);
            }
            let mut p = poly::irreducible_degree_multiset(&poly)?;
            p.push(1); // the root at infinity
            p
        }
        // A double root at infinity (or worse) is non-transversal.
        _ => return Err(ConicError::NotTransversal),
    };
    parts.sort();
    IntersectionType::from_partition(&parts).ok_or(ConicError::NotTransversal)
}
