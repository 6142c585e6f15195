//! Pencils of conics rF + G: member enumeration, singular members, the five
//! canonical constructions with deterministic parameter scans, and the
//! pencil-census closed forms.

use thiserror::Error;

use crate::conic::{self, Conic, ConicError, IntersectionType};
use crate::field::{Fp, PrimeField};
use crate::poly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PencilError {
    #[error("pencil has no pair of smooth transversal members")]
    Degenerate,
    #[error(transparent)]
    Conic(#[from] ConicError),
}

/// A point of P^1(F_p) indexing a pencil member; member(inf) = F,
/// member(r) = rF + G.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PencilParam {
    Finite(Fp),
    Infinity,
}

impl std::fmt::Display for PencilParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PencilParam::Finite(r) => write!(f, "{r}"),
            PencilParam::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Pencil {
    f: Conic,
    g: Conic,
    itype: IntersectionType,
}

impl Pencil {
    /// Build from an ordered generator pair; classifies the pencil by its
    /// first two smooth members (the generators themselves may be singular).
    pub fn new(f: Conic, g: Conic) -> Result<Pencil, PencilError> {
        let field = f.field();
        let probe = Pencil {
            f,
            g,
            itype: IntersectionType::Split, // placeholder until classified
        };
        let smooth: Vec<PencilParam> = probe.smooth_params();
        for (i, &a) in smooth.iter().enumerate() {
            for &b in smooth.iter().skip(i + 1) {
                let (ca, cb) = (probe.member(a), probe.member(b));
                if let Ok(t) = conic::intersection_type(&ca, &cb) {
                    return Ok(Pencil { f, g, itype: t });
                }
            }
        }
        let _ = field;
        Err(PencilError::Degenerate)
    }

    pub fn generators(&self) -> (&Conic, &Conic) {
        (&self.f, &self.g)
    }

    pub fn itype(&self) -> IntersectionType {
        self.itype
    }

    pub fn field(&self) -> PrimeField {
        self.f.field()
    }

    pub fn member(&self, param: PencilParam) -> Conic {
        match param {
            PencilParam::Infinity => self.f,
            PencilParam::Finite(r) => self.f.scale(r).add(&self.g),
        }
    }

    /// All of P^1(F_p): finite parameters in residue order, then infinity.
    pub fn all_params(&self) -> Vec<PencilParam> {
        let field = self.field();
        let mut v: Vec<PencilParam> = field.elements().map(PencilParam::Finite).collect();
        v.push(PencilParam::Infinity);
        v
    }

    /// Parameters of the non-smooth members: roots of det(rF + G), plus
    /// infinity when det F = 0.
    pub fn singular_members(&self) -> Vec<PencilParam> {
        let cubic = conic::char_cubic(&self.f, &self.g);
        let mut out: Vec<PencilParam> = if cubic.is_zero() {
            self.field().elements().map(PencilParam::Finite).collect()
        } else {
            poly::roots(&cubic)
                .unwrap()
                .into_iter()
                .map(PencilParam::Finite)
                .collect()
        };
        if !self.f.is_smooth() {
            out.push(PencilParam::Infinity);
        }
        out
    }

    pub fn smooth_params(&self) -> Vec<PencilParam> {
        let singular = self.singular_members();
        self.all_params()
            .into_iter()
            .filter(|p| !singular.contains(p))
            .collect()
    }
}

/// The deterministically scanned parameters behind each canonical pencil.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalParams {
    /// F = xy, G = z^2 + yz + xz.
    Split,
    /// F = xy, G = y^2 + yz + xz + e z^2 with T^2 + T + e irreducible.
    OnePair { e: Fp },
    /// F = xy, G = e1 x^2 + e2 y^2 + xz + yz + z^2, both quadratics irreducible.
    TwoPairs { e1: Fp, e2: Fp },
    /// F = y^2 - xz, G = x^2 + b y^2 + c xy + yz with T^3 + bT^2 + cT + 1 irreducible.
    CubicPoint { b: Fp, c: Fp },
    /// F = x^2 - a y^2, G = z^2 - b y^2 + 2c xy, a and b^2 - 4ac^2 non-squares.
    Quartic { a: Fp, b: Fp, c: Fp },
}

fn quadratic_irreducible(field: PrimeField, e: Fp) -> bool {
    // T^2 + T + e irreducible iff 1 - 4e is a non-square.
    (field.one() - field.elem(4) * e).legendre() == -1
}

fn cubic_irreducible(field: PrimeField, b: Fp, c: Fp) -> bool {
    // A cubic with no roots is irreducible.
    let f = crate::poly::Poly::new(field, vec![field.one(), c, b, field.one()]);
    poly::count_roots(&f).unwrap() == 0
}

/// Parameters for the canonical pencil of the given type, found by
/// smallest-first scan; a pure function of (type, p).
pub fn canonical_params(itype: IntersectionType, field: PrimeField) -> CanonicalParams {
    match itype {
        IntersectionType::Split => CanonicalParams::Split,
        IntersectionType::OnePair => {
            let e = field
                .elements()
                .find(|&e| quadratic_irreducible(field, e))
                .expect("irreducible quadratic exists");
            CanonicalParams::OnePair { e }
        }
        IntersectionType::TwoPairs => {
            let mut it = field.elements().filter(|&e| quadratic_irreducible(field, e));
            let e1 = it.next().expect("irreducible quadratic exists");
            let e2 = it.next().expect("a second irreducible quadratic exists for p > 3");
            CanonicalParams::TwoPairs { e1, e2 }
        }
        IntersectionType::CubicPoint => {
            for b in field.elements() {
                for c in field.elements() {
                    if cubic_irreducible(field, b, c) {
                        return CanonicalParams::CubicPoint { b, c };
                    }
                }
            }
            unreachable!("irreducible cubics exist over every finite field")
        }
        IntersectionType::Quartic => {
            let a = field.non_residue();
            for b in field.elements() {
                for c in field.elements() {
                    let disc = b * b - field.elem(4) * a * c * c;
                    if disc.legendre() == -1 {
                        return CanonicalParams::Quartic { a, b, c };
                    }
                }
            }
            unreachable!("suitable (b, c) exists for p > 3")
        }
    }
}

/// The explicit generator pair for each intersection type.
pub fn canonical_pencil(itype: IntersectionType, field: PrimeField) -> Pencil {
    let params = canonical_params(itype, field);
    let (f, g) = canonical_generators(field, params);
    let pencil = Pencil::new(f, g).expect("canonical pencils are non-degenerate");
    debug_assert_eq!(pencil.itype(), itype);
    pencil
}

pub fn canonical_generators(field: PrimeField, params: CanonicalParams) -> (Conic, Conic) {
    match params {
        CanonicalParams::Split => (
            Conic::from_i64_coeffs(field, [0, 1, 0, 0, 0, 0]),
            Conic::from_i64_coeffs(field, [0, 0, 1, 0, 1, 1]),
        ),
        CanonicalParams::OnePair { e } => (
            Conic::from_i64_coeffs(field, [0, 1, 0, 0, 0, 0]),
            Conic::from_coeffs(
                field,
                [field.zero(), field.zero(), field.one(), field.one(), field.one(), e],
            ),
        ),
        CanonicalParams::TwoPairs { e1, e2 } => (
            Conic::from_i64_coeffs(field, [0, 1, 0, 0, 0, 0]),
            Conic::from_coeffs(
                field,
                [e1, field.zero(), field.one(), e2, field.one(), field.one()],
            ),
        ),
        CanonicalParams::CubicPoint { b, c } => (
            Conic::from_i64_coeffs(field, [0, 0, -1, 1, 0, 0]),
            Conic::from_coeffs(
                field,
                [field.one(), c, field.zero(), b, field.one(), field.zero()],
            ),
        ),
        CanonicalParams::Quartic { a, b, c } => (
            Conic::from_coeffs(
                field,
                [field.one(), field.zero(), field.zero(), -a, field.zero(), field.zero()],
            ),
            Conic::from_coeffs(
                field,
                [field.zero(), field.elem(2) * c, field.zero(), -b, field.zero(), field.one()],
            ),
        ),
    }
}

/// Closed-form number of pencils of each type in P^2(F_q):
/// (q^8 - q^6 - q^5 + q^3) times 1/24, 1/4, 1/8, 1/3, 1/4.
pub fn pencil_census(itype: IntersectionType, q: u64) -> u128 {
    let q = q as u128;
    let total = q.pow(8) - q.pow(6) - q.pow(5) + q.pow(3);
    let denom: u128 = match itype {
        IntersectionType::Split => 24,
        IntersectionType::OnePair => 4,
        IntersectionType::TwoPairs => 8,
        IntersectionType::CubicPoint => 3,
        IntersectionType::Quartic => 4,
    };
    debug_assert_eq!(total % denom, 0);
    total / denom
}

/// Ordered pairs of distinct smooth members in a single pencil of each type.
pub fn smooth_pair_count(itype: IntersectionType, q: u64) -> u128 {
    let q = q as u128;
    match itype {
        IntersectionType::Split | IntersectionType::TwoPairs => (q - 2) * (q - 3),
        IntersectionType::OnePair | IntersectionType::Quartic => q * (q - 1),
        IntersectionType::CubicPoint => (q + 1) * q,
    }
}
