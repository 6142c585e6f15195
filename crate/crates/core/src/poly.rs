//! Dense univariate polynomials over F_p: gcd, x^p powering, root counting
//! and extraction, degree partitions of squarefree quartics, and truncated
//! power series with a Newton square root.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::{Fp, PrimeField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("operation requires a non-zero polynomial")]
    ZeroPolynomial,
    #[error("modulus polynomial must have degree >= 1")]
    DegreeTooSmall,
    #[error("expected a squarefree polynomial")]
    NotSquarefree,
    #[error("expected degree {expected}, got {got:?}")]
    WrongDegree { expected: usize, got: Option<usize> },
    #[error("series constant term must be 1")]
    ConstantTermNotOne,
}

/// Coefficients lowest-degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    field: PrimeField,
    coeffs: Vec<Fp>,
}

impl Poly {
    pub fn new(field: PrimeField, mut coeffs: Vec<Fp>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: PrimeField) -> Poly {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: Fp) -> Poly {
        Poly::new(c.field(), vec![c])
    }

    pub fn one(field: PrimeField) -> Poly {
        Poly::constant(field.one())
    }

    /// The monomial x.
    pub fn x(field: PrimeField) -> Poly {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    /// c * x^k.
    pub fn monomial(c: Fp, k: usize) -> Poly {
        let field = c.field();
        let mut coeffs = vec![field.zero(); k + 1];
        coeffs[k] = c;
        Poly::new(field, coeffs)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> Fp {
        self.coeffs.get(i).copied().unwrap_or_else(|| self.field.zero())
    }

    pub fn coeffs(&self) -> &[Fp] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<Fp> {
        self.coeffs.last().copied()
    }

    pub fn eval(&self, x: Fp) -> Fp {
        let mut acc = self.field.zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Poly::new(self.field, coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect();
        Poly::new(self.field, coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|&c| -c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::new(self.field, coeffs)
    }

    pub fn scale(&self, c: Fp) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// (quotient, remainder); panics on a zero divisor.
    pub fn divmod(&self, divisor: &Poly) -> (Poly, Poly) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.leading().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() < d + 1 {
            return (Poly::zero(self.field), self.clone());
        }
        let mut quot = vec![self.field.zero(); rem.len() - d];
        for i in (d..rem.len()).rev() {
            let c = rem[i] * lead_inv;
            if c.is_zero() {
                continue;
            }
            quot[i - d] = c;
            for j in 0..=d {
                let t = divisor.coeff(j) * c;
                rem[i - d + j] -= t;
            }
        }
        (Poly::new(self.field, quot), Poly::new(self.field, rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.divmod(divisor).1
    }

    /// Exact division; panics if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.divmod(divisor);
        assert!(r.is_zero(), "exact_div with non-zero remainder");
        q
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(l.inv().unwrap()),
        }
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero(self.field);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * self.field.elem(i as u64))
            .collect();
        Poly::new(self.field, coeffs)
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => gcd(self, &self.derivative())
                .map(|g| g.degree() == Some(0))
                .unwrap_or(false),
        }
    }
}

/// Monic greatest common divisor.
pub fn gcd(f: &Poly, g: &Poly) -> Result<Poly, PolyError> {
    if f.is_zero() && g.is_zero() {
        return Err(PolyError::BothZero);
    }
    let mut a = f.clone();
    let mut b = g.clone();
    while !b.is_zero() {
        let r = a.rem(&b);
        a = b;
        b = r;
    }
    Ok(a.monic())
}

/// base^e mod m by square-and-multiply.
pub fn pow_mod(base: &Poly, mut e: u64, m: &Poly) -> Poly {
    let field = base.field();
    let mut acc = Poly::one(field);
    let mut b = base.rem(m);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&b).rem(m);
        }
        b = b.mul(&b).rem(m);
        e >>= 1;
    }
    acc
}

/// x^p mod f, the Frobenius image of x.
pub fn powmod_frobenius(f: &Poly) -> Result<Poly, PolyError> {
    match f.degree() {
        None | Some(0) => Err(PolyError::DegreeTooSmall),
        Some(_) => Ok(pow_mod(&Poly::x(f.field()), f.field().modulus(), f)),
    }
}

/// Number of distinct roots in F_p, as deg gcd(x^p - x, f).
pub fn count_roots(f: &Poly) -> Result<usize, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if f.degree() == Some(0) {
        return Ok(0);
    }
    let frob = powmod_frobenius(f)?;
    let g = gcd(&frob.sub(&Poly::x(f.field())), f)?;
    Ok(g.degree().unwrap_or(0))
}

/// The distinct F_p-roots, via seeded equal-degree splitting of
/// gcd(x^p - x, f). Sorted ascending for reproducibility.
pub fn roots_seeded(f: &Poly, seed: u64) -> Result<Vec<Fp>, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if f.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let field = f.field();
    let x = Poly::x(field);
    let frob = powmod_frobenius(f)?;
    let linear_part = gcd(&frob.sub(&x), f)?;
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    split_linear_product(&linear_part, &mut rng, &mut out);
    out.sort();
    Ok(out)
}

pub fn roots(f: &Poly) -> Result<Vec<Fp>, PolyError> {
    roots_seeded(f, 0)
}

// g is monic, squarefree, and a product of linear factors.
fn split_linear_product(g: &Poly, rng: &mut ChaCha8Rng, out: &mut Vec<Fp>) {
    match g.degree() {
        None | Some(0) => {}
        Some(1) => out.push(-g.coeff(0)),
        Some(_) => {
            let field = g.field();
            let p = field.modulus();
            loop {
                let a = field.elem(rng.gen_range(0..p));
                let shifted = Poly::new(field, vec![a, field.one()]);
                let h = pow_mod(&shifted, (p - 1) / 2, g).sub(&Poly::one(field));
                let d = match gcd(&h, g) {
                    Ok(d) => d,
                    Err(_) => continue,
                };
                let dd = d.degree().unwrap_or(0);
                if dd > 0 && dd < g.degree().unwrap() {
                    let rest = g.exact_div(&d);
                    split_linear_product(&d, rng, out);
                    split_linear_product(&rest, rng, out);
                    return;
                }
            }
        }
    }
}

/// Degrees of the irreducible factors of a squarefree polynomial, via
/// distinct-degree factorization. Sorted ascending.
pub fn irreducible_degree_multiset(f: &Poly) -> Result<Vec<usize>, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if !f.is_squarefree() {
        return Err(PolyError::NotSquarefree);
    }
    let field = f.field();
    let p = field.modulus();
    let x = Poly::x(field);
    let mut work = f.monic();
    let mut h = x.clone();
    let mut parts = Vec::new();
    let mut d = 0usize;
    while let Some(deg) = work.degree() {
        if deg == 0 {
            break;
        }
        d += 1;
        if 2 * d > deg {
            // The remainder is irreducible.
            parts.push(deg);
            break;
        }
        h = pow_mod(&h.rem(&work), p, &work);
        let g = gcd(&h.sub(&x.rem(&work)), &work)?;
        if let Some(gd) = g.degree() {
            if gd > 0 {
                for _ in 0..gd / d {
                    parts.push(d);
                }
                work = work.exact_div(&g);
                h = h.rem(&work);
            }
        }
    }
    parts.sort();
    Ok(parts)
}

/// Degree partition of a squarefree quartic.
pub fn degree_partition(f: &Poly) -> Result<Vec<usize>, PolyError> {
    if f.degree() != Some(4) {
        return Err(PolyError::WrongDegree {
            expected: 4,
            got: f.degree(),
        });
    }
    irreducible_degree_multiset(f)
}

/// Power series truncated at order N: coefficients of x^0 .. x^{N-1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    field: PrimeField,
    coeffs: Vec<Fp>,
}

impl TruncatedSeries {
    pub fn new(field: PrimeField, mut coeffs: Vec<Fp>, n: usize) -> TruncatedSeries {
        coeffs.resize(n, field.zero());
        TruncatedSeries { field, coeffs }
    }

    pub fn from_poly(p: &Poly, n: usize) -> TruncatedSeries {
        TruncatedSeries::new(p.field(), p.coeffs().to_vec(), n)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize) -> Fp {
        self.coeffs.get(i).copied().unwrap_or_else(|| self.field.zero())
    }

    pub fn coeffs(&self) -> &[Fp] {
        &self.coeffs
    }

    fn truncate(&self, n: usize) -> TruncatedSeries {
        TruncatedSeries::new(self.field, self.coeffs[..n.min(self.coeffs.len())].to_vec(), n)
    }

    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let n = self.coeffs.len();
        let mut coeffs = vec![self.field.zero(); n];
        for i in 0..n {
            let a = self.coeffs[i];
            if a.is_zero() {
                continue;
            }
            for j in 0..n - i {
                let t = a * other.coeff(j);
                coeffs[i + j] += t;
            }
        }
        TruncatedSeries { field: self.field, coeffs }
    }

    pub fn add(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let n = self.coeffs.len();
        TruncatedSeries::new(
            self.field,
            (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect(),
            n,
        )
    }

    pub fn scale(&self, c: Fp) -> TruncatedSeries {
        TruncatedSeries {
            field: self.field,
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
        }
    }

    /// Multiplicative inverse by Newton iteration; constant term must be a unit.
    pub fn inverse(&self) -> Result<TruncatedSeries, PolyError> {
        let c0 = self.coeff(0);
        let c0_inv = c0.inv().map_err(|_| PolyError::ZeroPolynomial)?;
        let n = self.coeffs.len();
        let mut g = TruncatedSeries::new(self.field, vec![c0_inv], 1);
        let mut prec = 1usize;
        while prec < n {
            prec = (2 * prec).min(n);
            let f_trunc = self.truncate(prec);
            let g_ext = TruncatedSeries::new(self.field, g.coeffs.clone(), prec);
            let two = TruncatedSeries::new(
                self.field,
                vec![self.field.elem(2)],
                prec,
            );
            g = g_ext.mul(&two.add(&f_trunc.mul(&g_ext).scale(-self.field.one())));
        }
        Ok(g)
    }
}

/// Series square root by Newton iteration g <- (g + f/g)/2; requires f(0) = 1.
pub fn series_sqrt(f: &TruncatedSeries) -> Result<TruncatedSeries, PolyError> {
    let field = f.field;
    if f.coeff(0) != field.one() {
        return Err(PolyError::ConstantTermNotOne);
    }
    let n = f.order();
    let half = field.elem(2).inv().unwrap();
    let mut g = TruncatedSeries::new(field, vec![field.one()], 1);
    let mut prec = 1usize;
    while prec < n {
        prec = (2 * prec).min(n);
        let f_trunc = f.truncate(prec);
        let g_ext = TruncatedSeries::new(field, g.coeffs.clone(), prec);
        let quotient = f_trunc.mul(&g_ext.inverse()?);
        g = g_ext.add(&quotient).scale(half);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    fn poly(field: PrimeField, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.elem_i64(c)).collect())
    }

    // Brute-force factor count over tiny fields: the independent oracle
    // for gcd / root / partition checks.
    fn brute_roots(f: &Poly) -> Vec<Fp> {
        f.field()
            .elements()
            .filter(|&x| f.eval(x).is_zero())
            .collect()
    }

    #[test]
    fn gcd_examples() {
        let f = f7();
        let a = poly(f, &[-1, 0, 1]); // x^2 - 1
        let b = poly(f, &[-1, 1]); // x - 1
        assert_eq!(gcd(&a, &b).unwrap(), b.monic());

        let c = poly(f, &[3, 6]);
        assert_eq!(gcd(&c, &Poly::zero(f)).unwrap(), c.monic());

        assert_eq!(
            gcd(&Poly::zero(f), &Poly::zero(f)),
            Err(PolyError::BothZero)
        );
    }

    #[test]
    fn gcd_matches_brute_force_over_f3() {
        // x^2+1 and x^2+x over F_5: oracle via common roots and degrees.
        let f = PrimeField::new(5).unwrap();
        let a = poly(f, &[1, 0, 1]);
        let b = poly(f, &[0, 1, 1]);
        let g = gcd(&a, &b).unwrap();
        for x in f.elements() {
            if a.eval(x).is_zero() && b.eval(x).is_zero() {
                assert!(g.eval(x).is_zero());
            }
        }
        assert_eq!(g.degree(), Some(0));
    }

    #[test]
    fn frobenius_examples() {
        let f = f7();
        // x^7 mod (x^2+1) = -x
        let m = poly(f, &[1, 0, 1]);
        assert_eq!(powmod_frobenius(&m).unwrap(), poly(f, &[0, -1]));
        // x^p mod x = 0
        assert_eq!(powmod_frobenius(&Poly::x(f)).unwrap(), Poly::zero(f));
        // degree 1: x - c maps x to c
        let c = f.elem(3);
        let m1 = poly(f, &[-3, 1]);
        assert_eq!(powmod_frobenius(&m1).unwrap(), Poly::constant(c));
        assert_eq!(
            powmod_frobenius(&Poly::one(f)),
            Err(PolyError::DegreeTooSmall)
        );
    }

    #[test]
    fn count_roots_examples() {
        let f = f7();
        assert_eq!(count_roots(&poly(f, &[0, -1, 0, 1])).unwrap(), 3); // x^3 - x
        assert_eq!(count_roots(&poly(f, &[1, 0, 1])).unwrap(), 0); // x^2 + 1
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(count_roots(&poly(f5, &[-1, 0, 0, 0, 1])).unwrap(), 4); // x^4 - 1
        assert_eq!(count_roots(&Poly::zero(f)), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn roots_examples() {
        let f = f7();
        let r = roots(&poly(f, &[-2, 0, 1])).unwrap(); // x^2 - 2
        assert_eq!(r, vec![f.elem(3), f.elem(4)]);
        assert!(roots(&poly(f, &[1, 0, 1])).unwrap().is_empty());
    }

    #[test]
    fn roots_match_brute_force() {
        let f = PrimeField::new(31).unwrap();
        for c in [0i64, 1, 5, 17, 30] {
            let g = poly(f, &[c, 3, 0, 1, 1, 0, 2]);
            if g.is_zero() {
                continue;
            }
            let got = roots(&g).unwrap();
            assert_eq!(got, brute_roots(&g));
            assert_eq!(got.len(), count_roots(&g).unwrap());
        }
    }

    #[test]
    fn degree_partition_examples() {
        let f = f7();
        let lin = poly(f, &[-1, 1])
            .mul(&poly(f, &[-2, 1]))
            .mul(&poly(f, &[-3, 1]))
            .mul(&poly(f, &[-4, 1]));
        assert_eq!(degree_partition(&lin).unwrap(), vec![1, 1, 1, 1]);

        let mixed = poly(f, &[1, 0, 1])
            .mul(&poly(f, &[-1, 1]))
            .mul(&poly(f, &[-2, 1]));
        assert_eq!(degree_partition(&mixed).unwrap(), vec![1, 1, 2]);

        // Find an irreducible quartic by scanning, oracle-checked: no roots
        // and no quadratic factor (checked via x^{p^2} fixed points).
        let mut found = None;
        'outer: for c0 in 0..7i64 {
            for c1 in 0..7i64 {
                let cand = poly(f, &[c0, c1, 0, 0, 1]);
                if !cand.is_squarefree() || count_roots(&cand).unwrap() > 0 {
                    continue;
                }
                let h = powmod_frobenius(&cand).unwrap();
                let h2 = pow_mod(&h, 7, &cand);
                let g2 = gcd(&h2.sub(&Poly::x(f)), &cand).unwrap();
                if g2.degree() == Some(0) {
                    found = Some(cand);
                    break 'outer;
                }
            }
        }
        let quartic = found.expect("irreducible quartic exists over F_7");
        assert_eq!(degree_partition(&quartic).unwrap(), vec![4]);
    }

    #[test]
    fn degree_partition_rejects_bad_input() {
        let f = f7();
        let sq = poly(f, &[-1, 1]).mul(&poly(f, &[-1, 1])).mul(&poly(f, &[1, 0, 1]));
        assert_eq!(degree_partition(&sq), Err(PolyError::NotSquarefree));
        assert!(matches!(
            degree_partition(&poly(f, &[1, 1])),
            Err(PolyError::WrongDegree { .. })
        ));
    }

    #[test]
    fn series_sqrt_examples() {
        let f = f7();
        let one = TruncatedSeries::new(f, vec![f.one()], 3);
        assert_eq!(series_sqrt(&one).unwrap(), one);

        // 1 + 2x + x^2 -> 1 + x
        let sq = TruncatedSeries::new(f, vec![f.elem(1), f.elem(2), f.elem(1)], 3);
        let r = series_sqrt(&sq).unwrap();
        assert_eq!(r.coeffs(), &[f.elem(1), f.elem(1), f.elem(0)]);

        // 1 + x over F_7, N = 3 -> 1 + 4x + 6x^2 (1/2 = 4, -1/8 = -1 = 6)
        let s = TruncatedSeries::new(f, vec![f.elem(1), f.elem(1)], 3);
        let r = series_sqrt(&s).unwrap();
        assert_eq!(r.coeffs(), &[f.elem(1), f.elem(4), f.elem(6)]);
        assert_eq!(r.mul(&r), s);

        let bad = TruncatedSeries::new(f, vec![f.elem(2)], 3);
        assert_eq!(series_sqrt(&bad), Err(PolyError::ConstantTermNotOne));
    }

    proptest! {
        #[test]
        fn count_matches_roots(coeffs in proptest::collection::vec(0u64..31, 1..7)) {
            let f = PrimeField::new(31).unwrap();
            let g = Poly::new(f, coeffs.into_iter().map(|c| f.elem(c)).collect());
            prop_assume!(!g.is_zero());
            prop_assert_eq!(roots(&g).unwrap().len(), count_roots(&g).unwrap());
        }

        #[test]
        fn count_subadditive(a in proptest::collection::vec(0u64..31, 2..5),
                             b in proptest::collection::vec(0u64..31, 2..5)) {
            let f = PrimeField::new(31).unwrap();
            let pa = Poly::new(f, a.into_iter().map(|c| f.elem(c)).collect());
            let pb = Poly::new(f, b.into_iter().map(|c| f.elem(c)).collect());
            prop_assume!(!pa.is_zero() && !pb.is_zero());
            let lhs = count_roots(&pa.mul(&pb)).unwrap();
            let ra = count_roots(&pa).unwrap();
            let rb = count_roots(&pb).unwrap();
            prop_assert!(lhs <= ra + rb);
            if gcd(&pa, &pb).unwrap().degree() == Some(0) {
                prop_assert_eq!(lhs, ra + rb);
            }
        }

        #[test]
        fn sqrt_squares_back(coeffs in proptest::collection::vec(0u64..31, 1..8)) {
            let f = PrimeField::new(31).unwrap();
            let mut v: Vec<Fp> = coeffs.into_iter().map(|c| f.elem(c)).collect();
            v[0] = f.one();
            let n = v.len();
            let s = TruncatedSeries::new(f, v, n);
            let r = series_sqrt(&s).unwrap();
            prop_assert_eq!(r.mul(&r), s);
        }
    }
}
