//! Arithmetic in prime fields F_p, p > 3.
//!
//! Elements carry their modulus and are always kept reduced. A small
//! quadratic extension F_p[t]/(t^2 - d) is provided for oracles that need
//! y-coordinates living outside F_p.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} must exceed 3")]
    CharacteristicTooSmall(u64),
    #[error("division by zero in F_{0}")]
    DivisionByZero(u64),
}

/// The field F_p for a prime p > 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p <= 3 {
            return Err(FieldError::CharacteristicTooSmall(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Element from an unsigned representative.
    pub fn elem(&self, v: u64) -> Fp {
        Fp {
            value: v % self.p,
            p: self.p,
        }
    }

    /// Element from a signed representative.
    pub fn elem_i64(&self, v: i64) -> Fp {
        let m = self.p as i64;
        self.elem(v.rem_euclid(m) as u64)
    }

    pub fn zero(&self) -> Fp {
        self.elem(0)
    }

    pub fn one(&self) -> Fp {
        self.elem(1)
    }

    /// All field elements, 0 up to p-1.
    pub fn elements(&self) -> impl Iterator<Item = Fp> {
        let f = *self;
        (0..self.p).map(move |v| f.elem(v))
    }

    /// Smallest quadratic non-residue, scanning 2, 3, 4, ...
    pub fn non_residue(&self) -> Fp {
        for v in 2..self.p {
            let x = self.elem(v);
            if x.legendre() == -1 {
                return x;
            }
        }
        unreachable!("every prime field with p > 2 has a non-residue")
    }
}

/// A residue in F_p, kept in [0, p).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp {
    value: u64,
    p: u64,
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Fp {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check_same_field(&self, other: &Fp) {
        assert_eq!(
            self.p, other.p,
            "elements of F_{} and F_{} cannot be combined",
            self.p, other.p
        );
    }

    pub fn pow(self, mut e: u64) -> Fp {
        let mut base = self;
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(self) -> Result<Fp, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero(self.p));
        }
        Ok(self.pow(self.p - 2))
    }

    /// 0 for zero, 1 for a non-zero square, -1 for a non-square.
    pub fn legendre(self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        let r = self.pow((self.p - 1) / 2);
        if r.value == 1 {
            1
        } else {
            -1
        }
    }

    /// Square root by Tonelli-Shanks; the smaller of the two residues.
    /// `None` exactly when the element is a non-square.
    pub fn sqrt(self) -> Option<Fp> {
        let field = self.field();
        if self.is_zero() {
            return Some(self);
        }
        if self.legendre() == -1 {
            return None;
        }
        let p = self.p;
        let root = if p % 4 == 3 {
            self.pow((p + 1) / 4)
        } else {
            // Tonelli-Shanks: p - 1 = q * 2^s with q odd.
            let mut q = p - 1;
            let mut s = 0u32;
            while q % 2 == 0 {
                q /= 2;
                s += 1;
            }
            let z = field.non_residue();
            let mut m = s;
            let mut c = z.pow(q);
            let mut t = self.pow(q);
            let mut r = self.pow((q + 1) / 2);
            while t.value != 1 {
                let mut i = 0u32;
                let mut t2 = t;
                while t2.value != 1 {
                    t2 *= t2;
                    i += 1;
                }
                let mut b = c;
                for _ in 0..(m - i - 1) {
                    b *= b;
                }
                m = i;
                c = b * b;
                t *= c;
                r *= b;
            }
            r
        };
        Some(root.min(-root))
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        self.check_same_field(&rhs);
        let s = self.value + rhs.value;
        Fp {
            value: if s >= self.p { s - self.p } else { s },
            p: self.p,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self.check_same_field(&rhs);
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + self.p - rhs.value
        };
        Fp { value: v, p: self.p }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        self.check_same_field(&rhs);
        let v = ((self.value as u128) * (rhs.value as u128) % (self.p as u128)) as u64;
        Fp { value: v, p: self.p }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            value: if self.value == 0 { 0 } else { self.p - self.value },
            p: self.p,
        }
    }
}

impl AddAssign for Fp {
    fn add_assign(&mut self, rhs: Fp) {
        *self = *self + rhs;
    }
}
impl SubAssign for Fp {
    fn sub_assign(&mut self, rhs: Fp) {
        *self = *self - rhs;
    }
}
impl MulAssign for Fp {
    fn mul_assign(&mut self, rhs: Fp) {
        *self = *self * rhs;
    }
}

/// The minimal interface the curve group law needs from a coefficient field.
/// Implemented by `Fp` and by the quadratic extension.
pub trait FieldOps: Clone + PartialEq {
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `None` on zero.
    fn invert(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
}

impl FieldOps for Fp {
    fn add(&self, other: &Self) -> Self {
        *self + *other
    }
    fn sub(&self, other: &Self) -> Self {
        *self - *other
    }
    fn mul(&self, other: &Self) -> Self {
        *self * *other
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn invert(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn is_zero(&self) -> bool {
        Fp::is_zero(self)
    }
}

/// F_p[t]/(t^2 - d) with d a fixed non-residue. Oracle support only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadExtField {
    base: PrimeField,
    d: Fp,
}

impl QuadExtField {
    /// Extension by the smallest non-residue of the base field.
    pub fn new(base: PrimeField) -> Self {
        QuadExtField {
            base,
            d: base.non_residue(),
        }
    }

    pub fn base(&self) -> PrimeField {
        self.base
    }

    pub fn d(&self) -> Fp {
        self.d
    }

    /// Embed a base-field element.
    pub fn from_base(&self, a: Fp) -> QuadExt {
        QuadExt {
            a,
            b: self.base.zero(),
            d: self.d,
        }
    }

    pub fn elem(&self, a: Fp, b: Fp) -> QuadExt {
        QuadExt { a, b, d: self.d }
    }

    /// A square root of a base-field element, always exists in the extension.
    pub fn sqrt_of_base(&self, x: Fp) -> QuadExt {
        match x.sqrt() {
            Some(r) => self.from_base(r),
            None => {
                // x = d * (x/d) with x/d a square since both are non-squares.
                let r = (x * self.d.inv().expect("non-residue is non-zero"))
                    .sqrt()
                    .expect("quotient of two non-squares is a square");
                self.elem(self.base.zero(), r)
            }
        }
    }
}

/// a + b·t with t^2 = d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: Fp,
    b: Fp,
    d: Fp,
}

impl QuadExt {
    pub fn parts(&self) -> (Fp, Fp) {
        (self.a, self.b)
    }

    pub fn is_in_base(&self) -> bool {
        self.b.is_zero()
    }
}

impl FieldOps for QuadExt {
    fn add(&self, o: &Self) -> Self {
        QuadExt {
            a: self.a + o.a,
            b: self.b + o.b,
            d: self.d,
        }
    }
    fn sub(&self, o: &Self) -> Self {
        QuadExt {
            a: self.a - o.a,
            b: self.b - o.b,
            d: self.d,
        }
    }
    fn mul(&self, o: &Self) -> Self {
        QuadExt {
            a: self.a * o.a + self.b * o.b * self.d,
            b: self.a * o.b + self.b * o.a,
            d: self.d,
        }
    }
    fn neg(&self) -> Self {
        QuadExt {
            a: -self.a,
            b: -self.b,
            d: self.d,
        }
    }
    fn invert(&self) -> Option<Self> {
        let norm = self.a * self.a - self.b * self.b * self.d;
        let n = norm.inv().ok()?;
        Some(QuadExt {
            a: self.a * n,
            b: -self.b * n,
            d: self.d,
        })
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
