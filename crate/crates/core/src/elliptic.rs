//! Elliptic curves y^2 = x^3 + a2 x^2 + a4 x + a6 over F_p: chord-tangent
//! group law (also over the quadratic extension, for oracles), division
//! polynomials, the n-torsion x-polynomial, and root censuses.

use thiserror::Error;

use crate::field::{FieldOps, Fp, PrimeField, QuadExt, QuadExtField};
use crate::poly::{self, Poly, PolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EllipticError {
    #[error("cubic has a repeated root; the curve is singular")]
    Singular,
    #[error("expected a cubic, got degree {0:?}")]
    NotACubic(Option<usize>),
    #[error("point is not on the curve")]
    OffCurve,
    #[error("index {0} is divisible by the characteristic")]
    UnsupportedCharacteristic(u64),
    #[error("the plus/minus root split is defined for odd n only, got {0}")]
    EvenSplit(u64),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Curve {
    field: PrimeField,
    a2: Fp,
    a4: Fp,
    a6: Fp,
}

impl Curve {
    pub fn new(field: PrimeField, a2: Fp, a4: Fp, a6: Fp) -> Result<Curve, EllipticError> {
        let (a, b, c) = (a2, a4, a6);
        let disc = field.elem(18) * a * b * c - field.elem(4) * a * a * a * c
            + a * a * b * b
            - field.elem(4) * b * b * b
            - field.elem(27) * c * c;
        if disc.is_zero() {
            return Err(EllipticError::Singular);
        }
        Ok(Curve { field, a2, a4, a6 })
    }

    /// Curve attached to a non-monic cubic d3 x^3 + ... + d0 via the unit
    /// substitution x -> x/d3, y -> y/d3, which preserves F_p-rationality of
    /// x-coordinates and keeps the x = 0 locus in place:
    /// a2 = d2, a4 = d1 d3, a6 = d0 d3^2.
    pub fn from_cubic(cubic: &Poly) -> Result<Curve, EllipticError> {
        if cubic.degree() != Some(3) {
            return Err(EllipticError::NotACubic(cubic.degree()));
        }
        let field = cubic.field();
        let l = cubic.coeff(3);
        Curve::new(
            field,
            cubic.coeff(2),
            cubic.coeff(1) * l,
            cubic.coeff(0) * l * l,
        )
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coefficients(&self) -> (Fp, Fp, Fp) {
        (self.a2, self.a4, self.a6)
    }

    /// The right-hand side x^3 + a2 x^2 + a4 x + a6.
    pub fn rhs(&self) -> Poly {
        Poly::new(
            self.field,
            vec![self.a6, self.a4, self.a2, self.field.one()],
        )
    }

    pub fn eval_rhs(&self, x: Fp) -> Fp {
        ((x + self.a2) * x + self.a4) * x + self.a6
    }

    pub fn group_law(&self) -> GroupLaw<Fp> {
        GroupLaw {
            a2: self.a2,
            a4: self.a4,
            a6: self.a6,
        }
    }

    /// Group law with coordinates in the quadratic extension; used by the
    /// brute-force torsion oracles.
    pub fn group_law_ext(&self, ext: &QuadExtField) -> GroupLaw<QuadExt> {
        GroupLaw {
            a2: ext.from_base(self.a2),
            a4: ext.from_base(self.a4),
            a6: ext.from_base(self.a6),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurvePoint<K: FieldOps> {
    Infinity,
    Affine { x: K, y: K },
}

impl<K: FieldOps> CurvePoint<K> {
    pub fn affine(x: K, y: K) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }
}

/// Chord-tangent arithmetic for y^2 = x^3 + a2 x^2 + a4 x + a6 with
/// coefficients embedded in the coordinate field K.
#[derive(Debug, Clone)]
pub struct GroupLaw<K: FieldOps> {
    a2: K,
    a4: K,
    a6: K,
}

impl<K: FieldOps> GroupLaw<K> {
    pub fn contains(&self, p: &CurvePoint<K>) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => {
                let rhs = x
                    .add(&self.a2)
                    .mul(x)
                    .add(&self.a4)
                    .mul(x)
                    .add(&self.a6);
                y.mul(y) == rhs
            }
        }
    }

    pub fn neg(&self, p: &CurvePoint<K>) -> CurvePoint<K> {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine {
                x: x.clone(),
                y: y.neg(),
            },
        }
    }

    pub fn add(
        &self,
        p: &CurvePoint<K>,
        q: &CurvePoint<K>,
    ) -> Result<CurvePoint<K>, EllipticError> {
        if !self.contains(p) || !self.contains(q) {
            return Err(EllipticError::OffCurve);
        }
        Ok(self.add_unchecked(p, q))
    }

    fn add_unchecked(&self, p: &CurvePoint<K>, q: &CurvePoint<K>) -> CurvePoint<K> {
        let (x1, y1) = match p {
            CurvePoint::Infinity => return q.clone(),
            CurvePoint::Affine { x, y } => (x, y),
        };
        let (x2, y2) = match q {
            CurvePoint::Infinity => return p.clone(),
            CurvePoint::Affine { x, y } => (x, y),
        };
        let slope = if x1 == x2 {
            if y1.add(y2).is_zero() {
                return CurvePoint::Infinity;
            }
            // tangent: (3x^2 + 2 a2 x + a4) / (2y), with small multiples
            // written as repeated sums since K has no integer embedding
            let xsq = x1.mul(x1);
            let a2x = self.a2.mul(x1);
            let num = xsq.add(&xsq).add(&xsq).add(&a2x).add(&a2x).add(&self.a4);
            let den = y1.add(y1);
            num.mul(&den.invert().expect("y != 0 here"))
        } else {
            let num = y2.sub(y1);
            let den = x2.sub(x1);
            num.mul(&den.invert().expect("x1 != x2"))
        };
        let x3 = slope.mul(&slope).sub(&self.a2).sub(x1).sub(x2);
        let y3 = slope.mul(&x1.sub(&x3)).sub(y1);
        CurvePoint::Affine { x: x3, y: y3 }
    }

    pub fn scalar_mul(
        &self,
        n: u64,
        p: &CurvePoint<K>,
    ) -> Result<CurvePoint<K>, EllipticError> {
        if !self.contains(p) {
            return Err(EllipticError::OffCurve);
        }
        let mut acc = CurvePoint::Infinity;
        let mut base = p.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &base);
            }
            base = self.add_unchecked(&base, &base);
            k >>= 1;
        }
        Ok(acc)
    }
}

/// ev(x) + od(x)·y with the relation y^2 = f(x).
#[derive(Debug, Clone)]
struct YPoly {
    ev: Poly,
    od: Poly,
}

impl YPoly {
    fn zero(field: PrimeField) -> YPoly {
        YPoly {
            ev: Poly::zero(field),
            od: Poly::zero(field),
        }
    }

    fn from_ev(ev: Poly) -> YPoly {
        let field = ev.field();
        YPoly {
            ev,
            od: Poly::zero(field),
        }
    }

    fn from_od(od: Poly) -> YPoly {
        let field = od.field();
        YPoly {
            ev: Poly::zero(field),
            od,
        }
    }

    fn mul(&self, other: &YPoly, f: &Poly) -> YPoly {
        YPoly {
            ev: self.ev.mul(&other.ev).add(&self.od.mul(&other.od).mul(f)),
            od: self.ev.mul(&other.od).add(&self.od.mul(&other.ev)),
        }
    }

    fn sub(&self, other: &YPoly) -> YPoly {
        YPoly {
            ev: self.ev.sub(&other.ev),
            od: self.od.sub(&other.od),
        }
    }
}

/// Division polynomials psi_0 .. psi_max for the curve, seeded from the
/// b-invariants and extended by the index-doubling recurrences.
fn division_polys(curve: &Curve, max: u64) -> Vec<YPoly> {
    let field = curve.field;
    let (a2, a4, a6) = (curve.a2, curve.a4, curve.a6);
    let f = curve.rhs();
    let b2 = field.elem(4) * a2;
    let b4 = field.elem(2) * a4;
    let b6 = field.elem(4) * a6;
    let b8 = field.elem(4) * a2 * a6 - a4 * a4;

    let mut psi = Vec::with_capacity(max as usize + 1);
    psi.push(YPoly::zero(field));
    psi.push(YPoly::from_ev(Poly::constant(field.one())));
    if max >= 2 {
        psi.push(YPoly::from_od(Poly::constant(field.elem(2))));
    }
    if max >= 3 {
        psi.push(YPoly::from_ev(Poly::new(
            field,
            vec![b8, field.elem(3) * b6, field.elem(3) * b4, b2, field.elem(3)],
        )));
    }
    if max >= 4 {
        let w = Poly::new(
            field,
            vec![
                b4 * b8 - b6 * b6,
                b2 * b8 - b4 * b6,
                field.elem(10) * b8,
                field.elem(10) * b6,
                field.elem(5) * b4,
                b2,
                field.elem(2),
            ],
        );
        psi.push(YPoly::from_od(w.scale(field.elem(2))));
    }
    let two_f = f.scale(field.elem(2));
    for idx in 5..=max as usize {
        let next = if idx % 2 == 1 {
            let m = (idx - 1) / 2;
            let cube = |p: &YPoly| p.mul(p, &f).mul(p, &f);
            psi[m + 2]
                .mul(&cube(&psi[m]), &f)
                .sub(&psi[m - 1].mul(&cube(&psi[m + 1]), &f))
        } else {
            let m = idx / 2;
            let square = |p: &YPoly| p.mul(p, &f);
            let inner = psi[m + 2]
                .mul(&square(&psi[m - 1]), &f)
                .sub(&psi[m - 2].mul(&square(&psi[m + 1]), &f));
            let rhs = psi[m].mul(&inner, &f);
            debug_assert!(rhs.od.is_zero(), "even-index numerator must be y-free");
            // rhs = psi_{2m} * 2y, and psi_{2m} = g·y, so g = rhs.ev / (2f)
            YPoly::from_od(rhs.ev.exact_div(&two_f))
        };
        psi.push(next);
    }
    psi
}

/// The n-torsion x-polynomial: its F_p-roots are exactly the x-coordinates
/// of the nonzero n-torsion points. For even n the 2-torsion cubic factor is
/// included.
#[derive(Debug, Clone)]
pub struct TorsionPoly {
    pub n: u64,
    pub lambda_poly: Poly,
}

pub fn torsion_poly(curve: &Curve, n: u64) -> Result<TorsionPoly, EllipticError> {
    assert!(n >= 2, "torsion index must be at least 2");
    let p = curve.field.modulus();
    if n % p == 0 {
        return Err(EllipticError::UnsupportedCharacteristic(n));
    }
    let psi = division_polys(curve, n);
    let lambda_poly = if n % 2 == 1 {
        debug_assert!(psi[n as usize].od.is_zero());
        psi[n as usize].ev.clone()
    } else {
        debug_assert!(psi[n as usize].ev.is_zero());
        psi[n as usize].od.mul(&curve.rhs())
    };
    let expected_deg = if n % 2 == 1 {
        ((n * n - 1) / 2) as usize
    } else {
        ((n * n - 4) / 2 + 3) as usize
    };
    debug_assert_eq!(lambda_poly.degree(), Some(expected_deg));
    Ok(TorsionPoly { n, lambda_poly })
}

/// Number of distinct F_p-roots of the n-torsion x-polynomial.
pub fn r_count(curve: &Curve, n: u64) -> Result<usize, EllipticError> {
    let t = torsion_poly(curve, n)?;
    Ok(poly::count_roots(&t.lambda_poly)?)
}

/// Splits the F_p-roots of the n-torsion x-polynomial (n odd) by whether the
/// points above them are F_p-rational: f(x0) a square or zero counts toward
/// the plus part (Frobenius fixes the point), a non-square toward the minus
/// part (Frobenius negates it).
pub fn r_split(curve: &Curve, n: u64) -> Result<(usize, usize), EllipticError> {
    if n % 2 == 0 {
        return Err(EllipticError::EvenSplit(n));
    }
    let t = torsion_poly(curve, n)?;
    let mut plus = 0;
    let mut minus = 0;
    for x0 in poly::roots(&t.lambda_poly)? {
        if curve.eval_rhs(x0).legendre() >= 0 {
            plus += 1;
        } else {
            minus += 1;
        }
    }
    Ok((plus, minus))
}

/// True iff the points with the given x-coordinate are n-torsion.
pub fn is_ntorsion_x(curve: &Curve, x0: Fp, n: u64) -> Result<bool, EllipticError> {
    let t = torsion_poly(curve, n)?;
    Ok(t.lambda_poly.eval(x0).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn legendre_curve(p: u64, lambda: i64) -> Curve {
        let field = PrimeField::new(p).unwrap();
        let l = field.elem_i64(lambda);
        Curve::new(field, -(field.one() + l), l, field.zero()).unwrap()
    }

    /// x-coordinates of nonzero n-torsion, found by exhaustive scalar
    /// multiplication with y lifted into the quadratic extension.
    fn torsion_xs_oracle(curve: &Curve, n: u64) -> BTreeSet<u64> {
        let field = curve.field();
        let ext = QuadExtField::new(field);
        let law = curve.group_law_ext(&ext);
        let mut out = BTreeSet::new();
        for x0 in field.elements() {
            let y = ext.sqrt_of_base(curve.eval_rhs(x0));
            let p = CurvePoint::affine(ext.from_base(x0), y);
            assert!(law.contains(&p));
            if law.scalar_mul(n, &p).unwrap().is_infinity() {
                out.insert(x0.value());
            }
        }
        out
    }

    fn lambda_roots(curve: &Curve, n: u64) -> BTreeSet<u64> {
        poly::roots(&torsion_poly(curve, n).unwrap().lambda_poly)
            .unwrap()
            .into_iter()
            .map(|x| x.value())
            .collect()
    }

    #[test]
    fn two_torsion_points_sum_to_the_third() {
        let curve = legendre_curve(7, 2);
        let field = curve.field();
        let law = curve.group_law();
        let p = CurvePoint::affine(field.zero(), field.zero());
        let q = CurvePoint::affine(field.one(), field.zero());
        let sum = law.add(&p, &q).unwrap();
        assert_eq!(sum, CurvePoint::affine(field.elem(2), field.zero()));
        assert!(law.scalar_mul(2, &p).unwrap().is_infinity());
        assert_eq!(law.add(&p, &CurvePoint::Infinity).unwrap(), p);
        assert!(law.add(&p, &law.neg(&p)).unwrap().is_infinity());
        assert!(law.scalar_mul(0, &q).unwrap().is_infinity());
    }

    #[test]
    fn off_curve_points_are_rejected() {
        let curve = legendre_curve(7, 2);
        let field = curve.field();
        let law = curve.group_law();
        let bad = CurvePoint::affine(field.elem(3), field.one());
        assert!(!law.contains(&bad));
        assert_eq!(
            law.add(&bad, &CurvePoint::Infinity),
            Err(EllipticError::OffCurve)
        );
    }

    #[test]
    fn legendre_third_division_polynomial() {
        // 3x^4 - 4(1 + l)x^3 + 6lx^2 - l^2
        for p in [7u64, 31] {
            let field = PrimeField::new(p).unwrap();
            for lv in 2..p.min(12) {
                let l = field.elem(lv);
                let curve = legendre_curve(p, lv as i64);
                let expected = Poly::new(
                    field,
                    vec![
                        -(l * l),
                        field.zero(),
                        field.elem(6) * l,
                        -(field.elem(4) * (field.one() + l)),
                        field.elem(3),
                    ],
                );
                let got = torsion_poly(&curve, 3).unwrap().lambda_poly;
                assert_eq!(got, expected, "p={p} lambda={lv}");
            }
        }
    }

    #[test]
    fn two_torsion_poly_is_the_cubic() {
        let curve = legendre_curve(7, 3);
        let t = torsion_poly(&curve, 2).unwrap();
        assert_eq!(t.lambda_poly.monic(), curve.rhs());
        assert_eq!(r_count(&curve, 2).unwrap(), 3);
    }

    #[test]
    fn torsion_poly_degrees() {
        let curve = legendre_curve(31, 5);
        assert_eq!(
            torsion_poly(&curve, 4).unwrap().lambda_poly.degree(),
            Some(9)
        );
        assert_eq!(
            torsion_poly(&curve, 7).unwrap().lambda_poly.degree(),
            Some(24)
        );
    }

    #[test]
    fn characteristic_divides_index_is_rejected() {
        let curve = legendre_curve(7, 2);
        assert!(matches!(
            torsion_poly(&curve, 7),
            Err(EllipticError::UnsupportedCharacteristic(7))
        ));
        assert!(matches!(
            r_split(&curve, 4),
            Err(EllipticError::EvenSplit(4))
        ));
    }

    #[test]
    fn roots_match_group_law_oracle() {
        for p in [7u64, 11, 31] {
            for lv in [2i64, 3, 5] {
                if lv as u64 % p == 0 || lv as u64 % p == 1 {
                    continue;
                }
                let curve = legendre_curve(p, lv);
                for n in 2..=10u64 {
                    if n % p == 0 {
                        continue;
                    }
                    assert_eq!(
                        lambda_roots(&curve, n),
                        torsion_xs_oracle(&curve, n),
                        "p={p} lambda={lv} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn torsion_poly_divisibility() {
        let curve = legendre_curve(31, 7);
        for n in 2..=10u64 {
            for m in 2..n {
                if n % m != 0 {
                    continue;
                }
                let big = torsion_poly(&curve, n).unwrap().lambda_poly;
                let small = torsion_poly(&curve, m).unwrap().lambda_poly;
                assert!(
                    big.rem(&small).is_zero(),
                    "torsion poly for {m} should divide the one for {n}"
                );
            }
        }
    }

    #[test]
    fn odd_torsion_polys_are_squarefree() {
        let curve = legendre_curve(31, 7);
        for n in [3u64, 5, 7, 9] {
            assert!(torsion_poly(&curve, n).unwrap().lambda_poly.is_squarefree());
        }
    }

    #[test]
    fn even_count_minus_two_torsion_count_is_even() {
        for lv in [2i64, 4, 6, 9] {
            let curve = legendre_curve(31, lv);
            let r2 = r_count(&curve, 2).unwrap();
            for n in [4u64, 6, 8, 10] {
                let rn = r_count(&curve, n).unwrap();
                assert_eq!((rn - r2) % 2, 0, "lambda={lv} n={n}");
            }
        }
    }

    #[test]
    fn split_parts_sum_to_count() {
        let curve = legendre_curve(31, 7);
        for n in [3u64, 5, 9] {
            let (plus, minus) = r_split(&curve, n).unwrap();
            assert_eq!(plus + minus, r_count(&curve, n).unwrap());
        }
    }

    #[test]
    fn split_matches_pointwise_oracle() {
        let curve = legendre_curve(31, 7);
        let field = curve.field();
        for n in [3u64, 5, 9] {
            let (plus, minus) = r_split(&curve, n).unwrap();
            let mut oplus = 0;
            let mut ominus = 0;
            for x0 in field.elements() {
                if !is_ntorsion_x(&curve, x0, n).unwrap() {
                    continue;
                }
                if curve.eval_rhs(x0).sqrt().is_some() {
                    oplus += 1;
                } else {
                    ominus += 1;
                }
            }
            assert_eq!((plus, minus), (oplus, ominus), "n={n}");
        }
    }

    #[test]
    fn split_multiplicativity_small_prime() {
        // r±(15) − r±(3) − r±(5) = 2 r±(3) r±(5)
        for lv in 2..31u64 {
            let curve = legendre_curve(31, lv as i64);
            let (p3, m3) = r_split(&curve, 3).unwrap();
            let (p5, m5) = r_split(&curve, 5).unwrap();
            let (p15, m15) = r_split(&curve, 15).unwrap();
            assert_eq!(p15, p3 + p5 + 2 * p3 * p5, "lambda={lv}");
            assert_eq!(m15, m3 + m5 + 2 * m3 * m5, "lambda={lv}");
        }
    }

    #[test]
    fn two_torsion_roots_and_odd_indices() {
        let curve = legendre_curve(7, 3);
        let field = curve.field();
        // x0 = 1 is a 2-torsion x-coordinate
        assert!(is_ntorsion_x(&curve, field.one(), 2).unwrap());
        assert!(is_ntorsion_x(&curve, field.one(), 4).unwrap());
        assert!(!is_ntorsion_x(&curve, field.one(), 3).unwrap());
    }
}
