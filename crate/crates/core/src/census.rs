//! Torsion censuses over curve families, closed-form expected values, n-gon
//! counts per pencil via the Hankel sweep, and the equality bridging the two
//! routes.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cayley::{self, CayleyError};
use crate::conic::IntersectionType;
use crate::elliptic::{self, Curve, EllipticError};
use crate::field::{FieldError, Fp, PrimeField};
use crate::pencil;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error("parameter {0} is a bad-reduction point of the family")]
    BadReduction(u64),
    #[error("index {0} is divisible by the characteristic")]
    UnsupportedCharacteristic(u64),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error(transparent)]
    Cayley(#[from] CayleyError),
}

/// The two instantiated elliptic-curve families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// y^2 = x(x-1)(x-lambda); bad reduction at lambda = 0, 1.
    Legendre,
    /// y^2 = (x-lambda)(x^2-b) with b the smallest non-residue; every lambda
    /// is good since lambda^2 = b would make b a square.
    QuadraticTwist,
}

impl FamilyKind {
    pub fn label(&self) -> &'static str {
        match self {
            FamilyKind::Legendre => "legendre",
            FamilyKind::QuadraticTwist => "quadratic-twist",
        }
    }
}

impl std::fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for FamilyKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "legendre" => Ok(FamilyKind::Legendre),
            "quadratic-twist" | "quadratic_twist" => Ok(FamilyKind::QuadraticTwist),
            other => Err(format!("unknown family: {other}")),
        }
    }
}

pub fn family_curve(
    kind: FamilyKind,
    field: PrimeField,
    lambda0: Fp,
) -> Result<Curve, CensusError> {
    match kind {
        FamilyKind::Legendre => {
            if lambda0.is_zero() || lambda0 == field.one() {
                return Err(CensusError::BadReduction(lambda0.value()));
            }
            Ok(Curve::new(
                field,
                -(field.one() + lambda0),
                lambda0,
                field.zero(),
            )?)
        }
        FamilyKind::QuadraticTwist => {
            let b = field.non_residue();
            Ok(Curve::new(field, -lambda0, -b, b * lambda0)?)
        }
    }
}

/// Good reduction parameters of the family, in residue order.
pub fn good_lambdas(kind: FamilyKind, field: PrimeField) -> Vec<Fp> {
    field
        .elements()
        .filter(|l| match kind {
            FamilyKind::Legendre => !l.is_zero() && *l != field.one(),
            FamilyKind::QuadraticTwist => true,
        })
        .collect()
}

/// Number of F_p-roots of the n-torsion x-polynomial at one parameter.
pub fn r_for_lambda(
    kind: FamilyKind,
    field: PrimeField,
    lambda0: Fp,
    n: u64,
) -> Result<u64, CensusError> {
    let curve = family_curve(kind, field, lambda0)?;
    Ok(elliptic::r_count(&curve, n)? as u64)
}

/// d(n) and d'(n): all divisors, and divisors other than 1 and 2.
pub fn divisor_counts(n: u64) -> (u64, u64) {
    assert!(n >= 1);
    let mut d = 0;
    let mut d_prime = 0;
    for k in 1..=n {
        if n % k == 0 {
            d += 1;
            if k > 2 {
                d_prime += 1;
            }
        }
    }
    (d, d_prime)
}

/// What the closed-form main term predicts the census for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpectedTarget {
    Family(FamilyKind),
    /// The global density target: d'(n)/q of all smooth transversal pairs.
    GlobalPairs,
}

/// Main term only, no error term. Odd n: (d(n)-1)q on either family.
/// n = 2^m: 3mq on the Legendre family, mq on the quadratic-twist family.
/// Other even n have no stated family closed form and yield None.
pub fn expected_total(n: u64, q: u64, target: ExpectedTarget) -> Option<u128> {
    let q = q as u128;
    match target {
        ExpectedTarget::Family(kind) => {
            if n % 2 == 1 {
                let (d, _) = divisor_counts(n);
                Some((d as u128 - 1) * q)
            } else if n.is_power_of_two() {
                let m = n.trailing_zeros() as u128;
                match kind {
                    FamilyKind::Legendre => Some(3 * m * q),
                    FamilyKind::QuadraticTwist => Some(m * q),
                }
            } else {
                None
            }
        }
        ExpectedTarget::GlobalPairs => {
            let (_, d_prime) = divisor_counts(n);
            let pairs = (q.pow(8) - q.pow(6) - q.pow(5) + q.pow(3)) * (q * q - q);
            // d'(n)/q of all ordered pairs of distinct pencil members;
            // |pairs| counts (pencil, ordered member pair) incidences
            Some(d_prime as u128 * pairs / q)
        }
    }
}

/// total/p rendered to five decimals, rounding half up.
pub fn render_ratio(total: u128, p: u128) -> String {
    let scaled = (2 * total * 100_000 + p) / (2 * p);
    format!("{}.{:05}", scaled / 100_000, scaled % 100_000)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub p: u64,
    pub n: u64,
    pub family: String,
    pub total: u64,
    pub ratio: String,
    pub expected: Option<u64>,
    pub elapsed_ms: u64,
}

/// Sums r(n, lambda) over the good parameters of the family.
pub fn family_sum(kind: FamilyKind, p: u64, n: u64) -> Result<CensusReport, CensusError> {
    let field = PrimeField::new(p)?;
    if n % p == 0 {
        return Err(CensusError::UnsupportedCharacteristic(n));
    }
    let start = Instant::now();
    let lambdas = good_lambdas(kind, field);
    let total: u64 = lambdas
        .par_iter()
        .map(|&l| r_for_lambda(kind, field, l, n).expect("good lambda"))
        .sum();
    Ok(CensusReport {
        p,
        n,
        family: kind.label().to_string(),
        total,
        ratio: render_ratio(total as u128, p as u128),
        expected: expected_total(n, p, ExpectedTarget::Family(kind)).map(|e| e as u64),
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Per-parameter root counts, for breakdown output and sharded runs.
pub fn family_breakdown(
    kind: FamilyKind,
    p: u64,
    n: u64,
) -> Result<Vec<(u64, u64)>, CensusError> {
    let field = PrimeField::new(p)?;
    if n % p == 0 {
        return Err(CensusError::UnsupportedCharacteristic(n));
    }
    let lambdas = good_lambdas(kind, field);
    lambdas
        .par_iter()
        .map(|&l| Ok((l.value(), r_for_lambda(kind, field, l, n)?)))
        .collect()
}

/// Ordered pairs (r, s) of distinct smooth members of the canonical pencil
/// whose Hankel determinant f_n vanishes.
pub fn pencil_ngon_count(
    itype: IntersectionType,
    q: u64,
    n: u64,
) -> Result<u64, CensusError> {
    let field = PrimeField::new(q)?;
    let pencil = pencil::canonical_pencil(itype, field);
    let smooth = pencil.smooth_params();
    let count = smooth
        .par_iter()
        .map(|&r| {
            let mut c = 0u64;
            for &s in &smooth {
                if r == s {
                    continue;
                }
                let (ca, cb) = (pencil.member(r), pencil.member(s));
                if cayley::satisfies_ngon_cayley(&ca, &cb, n).expect("smooth member") {
                    c += 1;
                }
            }
            c
        })
        .sum();
    Ok(count)
}

/// The odd-n equality between the two routes: the (1,1,1,1) and (2,2) Hankel
/// sweeps both equal the Legendre torsion census.
pub fn bridge_check(q: u64, n: u64) -> Result<bool, CensusError> {
    assert!(n % 2 == 1, "the bridge comparison is stated for odd n");
    let total = family_sum(FamilyKind::Legendre, q, n)?.total;
    let split = pencil_ngon_count(IntersectionType::Split, q, n)?;
    let two_pairs = pencil_ngon_count(IntersectionType::TwoPairs, q, n)?;
    Ok(split == total && two_pairs == total)
}

/// Closed-form count of ordered triangle pairs over F_q and its exact density
/// among smooth transversal pairs: (q^5-q^2)(q+1)q(q-1)^2 and
/// (q-1)/(q^2-q+1), the latter already in lowest terms.
pub fn gamma3_exact(q: u64) -> (u128, (u128, u128)) {
    let q = q as u128;
    let count = (q.pow(5) - q * q) * (q + 1) * q * (q - 1) * (q - 1);
    (count, (q - 1, q * q - q + 1))
}

/// Per-pencil triangle count from the closed forms: q-5, q-1, q-5, q+1, q-1.
pub fn triangle_count_formula(itype: IntersectionType, q: u64) -> u64 {
    match itype {
        IntersectionType::Split | IntersectionType::TwoPairs => q - 5,
        IntersectionType::OnePair | IntersectionType::Quartic => q - 1,
        IntersectionType::CubicPoint => q + 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    #[test]
    fn family_curve_examples() {
        let field = f7();
        let c = family_curve(FamilyKind::Legendre, field, field.elem(2)).unwrap();
        assert_eq!(
            c.coefficients(),
            (field.elem(4), field.elem(2), field.zero())
        );
        assert_eq!(
            family_curve(FamilyKind::Legendre, field, field.zero()),
            Err(CensusError::BadReduction(0))
        );
        // b = 3 is the smallest non-residue mod 7; lambda = 0 gives y^2 = x(x^2-3)
        let c = family_curve(FamilyKind::QuadraticTwist, field, field.zero()).unwrap();
        assert_eq!(
            c.coefficients(),
            (field.zero(), field.elem_i64(-3), field.zero())
        );
    }

    #[test]
    fn good_lambda_sets() {
        let field = f7();
        assert_eq!(good_lambdas(FamilyKind::Legendre, field).len(), 5);
        assert_eq!(good_lambdas(FamilyKind::QuadraticTwist, field).len(), 7);
    }

    #[test]
    fn divisor_count_examples() {
        assert_eq!(divisor_counts(12), (6, 4));
        assert_eq!(divisor_counts(9), (3, 2));
        assert_eq!(divisor_counts(2), (2, 0));
        assert_eq!(divisor_counts(15), (4, 3));
    }

    #[test]
    fn expected_total_examples() {
        let legendre = ExpectedTarget::Family(FamilyKind::Legendre);
        let twist = ExpectedTarget::Family(FamilyKind::QuadraticTwist);
        assert_eq!(expected_total(15, 7, legendre), Some(21));
        assert_eq!(expected_total(4, 7, legendre), Some(42));
        assert_eq!(expected_total(3, 7, legendre), Some(7));
        assert_eq!(expected_total(4, 7, twist), Some(14));
        assert_eq!(expected_total(6, 7, legendre), None);
    }

    #[test]
    fn ratio_rendering() {
        assert_eq!(render_ratio(599, 100), "5.99000");
        assert_eq!(render_ratio(1, 8), "0.12500");
        assert_eq!(render_ratio(1, 3), "0.33333");
        assert_eq!(render_ratio(2, 3), "0.66667");
        // exact half rounds up
        assert_eq!(render_ratio(1, 200_000), "0.00001");
    }

    #[test]
    fn gamma3_values() {
        let (count, density) = gamma3_exact(7);
        assert_eq!(count, 33_784_128);
        assert_eq!(density, (6, 43));
        assert_eq!(gamma3_exact(5).1, (4, 21));
    }

    #[test]
    fn census_times_counts_equals_gamma3() {
        for q in [7u64, 11, 13, 31, 97] {
            let total: u128 = IntersectionType::ALL
                .iter()
                .map(|&t| {
                    pencil::pencil_census(t, q) * triangle_count_formula(t, q) as u128
                })
                .sum();
            assert_eq!(total, gamma3_exact(q).0, "q={q}");
        }
    }

    #[test]
    fn small_family_sum() {
        let report = family_sum(FamilyKind::Legendre, 7, 3).unwrap();
        assert_eq!(report.total, 2);
        assert_eq!(report.family, "legendre");
        assert_eq!(report.expected, Some(7));
        let breakdown = family_breakdown(FamilyKind::Legendre, 7, 3).unwrap();
        assert_eq!(breakdown.len(), 5);
        assert_eq!(breakdown.iter().map(|&(_, r)| r).sum::<u64>(), 2);
    }

    #[test]
    fn family_sum_rejects_characteristic() {
        assert_eq!(
            family_sum(FamilyKind::Legendre, 7, 7).unwrap_err(),
            CensusError::UnsupportedCharacteristic(7)
        );
    }

    #[test]
    fn pencil_ngon_examples() {
        assert_eq!(
            pencil_ngon_count(IntersectionType::Split, 7, 3).unwrap(),
            2
        );
        assert_eq!(
            pencil_ngon_count(IntersectionType::TwoPairs, 7, 3).unwrap(),
            2
        );
        assert_eq!(
            pencil_ngon_count(IntersectionType::CubicPoint, 7, 4).unwrap(),
            0
        );
    }

    #[test]
    fn bridge_small() {
        assert!(bridge_check(7, 3).unwrap());
        assert!(bridge_check(11, 3).unwrap());
    }

    #[test]
    fn report_json_round_trip() {
        let report = family_sum(FamilyKind::Legendre, 7, 3).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let back: CensusReport = serde_json::from_str(&json).unwrap();
        assert_eq!(report, back);
    }
}
