//! Exact scalars: arbitrary-precision rationals and elements of a quadratic
//! field `Q(sqrt d)`.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num::bigint::BigInt;
use num::integer::Integer;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use num::Complex;

pub type Rational = BigRational;

/// `n / d` as a big rational. Panics on a zero denominator.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Very large heights: shift both sides down before dividing.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = (nb.max(db) - 900).max(0) as usize;
    let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
    if d == 0.0 {
        if n == 0.0 {
            0.0
        } else {
            f64::INFINITY * n.signum()
        }
    } else {
        n / d
    }
}

/// Parses `"p/q"` or `"p"`. Rejects zero denominators.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let d: BigInt = d.parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rational::new(n, d))
}

/// Number of bits needed for the larger of numerator and denominator.
pub fn rational_bits(r: &Rational) -> u64 {
    r.numer().bits().max(r.denom().bits())
}

/// A field element with exact arithmetic, usable by the generic linear
/// algebra in [`crate::linalg`].
pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + Hash
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(r: Rational) -> Self;
    /// Largest absolute value over all complex embeddings.
    fn max_conjugate_abs(&self) -> f64;
    /// Least common multiple of the denominators in the canonical basis.
    fn denominator_lcm(&self) -> BigInt;
    /// Membership in the ring of integers of the coefficient field.
    fn is_algebraic_integer(&self) -> bool;
    fn height_bits(&self) -> u64;
    fn to_complex(&self) -> Complex<f64>;
}

impl Scalar for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn max_conjugate_abs(&self) -> f64 {
        rational_to_f64(self).abs()
    }
    fn denominator_lcm(&self) -> BigInt {
        self.denom().clone()
    }
    fn is_algebraic_integer(&self) -> bool {
        self.is_integer()
    }
    fn height_bits(&self) -> u64 {
        rational_bits(self)
    }
    fn to_complex(&self) -> Complex<f64> {
        Complex::new(rational_to_f64(self), 0.0)
    }
}

/// `a + b sqrt(d)` with `a, b` rational and `d` a squarefree integer other
/// than 0 and 1. Purely rational values are normalised to `d = 1, b = 0`,
/// so they combine with any field.
///
/// Mixing two different non-trivial `d` in one operation panics; callers
/// building data from files validate this up front.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgebraicScalar {
    a: Rational,
    b: Rational,
    d: i64,
}

pub fn is_squarefree(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let n = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

impl AlgebraicScalar {
    pub fn rational(a: Rational) -> Self {
        AlgebraicScalar { a, b: Rational::zero(), d: 1 }
    }

    /// `a + b sqrt(d)`. Returns `None` if `d` is not squarefree.
    pub fn quadratic(a: Rational, b: Rational, d: i64) -> Option<Self> {
        if b.is_zero() {
            return Some(Self::rational(a));
        }
        if !is_squarefree(d) {
            return None;
        }
        Some(AlgebraicScalar { a, b, d })
    }

    /// `sqrt(d)` for squarefree `d`.
    pub fn sqrt_of(d: i64) -> Option<Self> {
        Self::quadratic(Rational::zero(), Rational::one(), d)
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(int(n))
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }
    pub fn irrational_part(&self) -> &Rational {
        &self.b
    }
    /// The radicand, or `None` for a rational value.
    pub fn radicand(&self) -> Option<i64> {
        if self.b.is_zero() {
            None
        } else {
            Some(self.d)
        }
    }
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        AlgebraicScalar { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    /// Field norm `a^2 - d b^2`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - int(self.d) * &self.b * &self.b
    }

    /// Trace `2a`.
    pub fn trace(&self) -> Rational {
        int(2) * &self.a
    }

    /// Real value. Panics for a non-real element (`d < 0`, `b != 0`).
    pub fn to_f64(&self) -> f64 {
        assert!(
            self.b.is_zero() || self.d > 0,
            "to_f64 on a non-real quadratic element"
        );
        if self.b.is_zero() {
            return rational_to_f64(&self.a);
        }
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * (self.d as f64).sqrt()
    }

    /// Real values under both embeddings `sqrt d -> +sqrt d` and `-sqrt d`.
    pub fn real_embeddings(&self) -> Option<[f64; 2]> {
        if !self.b.is_zero() && self.d < 0 {
            return None;
        }
        let x = self.to_f64();
        Some([x, self.conjugate().to_f64()])
    }

    pub fn sign(&self) -> i32 {
        let x = self.to_f64();
        if self.is_zero() {
            0
        } else if x > 0.0 {
            1
        } else if x < 0.0 {
            -1
        } else {
            // Float shadow underflowed: decide exactly.
            exact_sign(&self.a, &self.b, self.d)
        }
    }

    fn field_with(&self, other: &Self) -> i64 {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, true) => 1,
            (true, false) => other.d,
            (false, true) => self.d,
            (false, false) => {
                assert_eq!(self.d, other.d, "mixed quadratic fields Q(sqrt {}) and Q(sqrt {})", self.d, other.d);
                self.d
            }
        }
    }

    fn normalized(mut self) -> Self {
        if self.b.is_zero() {
            self.d = 1;
        }
        self
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        let n = self.norm();
        AlgebraicScalar { a: &self.a / &n, b: -(&self.b / &n), d: self.d }.normalized()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }
}

fn exact_sign(a: &Rational, b: &Rational, d: i64) -> i32 {
    // sign(a + b sqrt d) for d > 0 without floats.
    let sa = if a.is_zero() { 0 } else if a.is_positive() { 1 } else { -1 };
    let sb = if b.is_zero() { 0 } else if b.is_positive() { 1 } else { -1 };
    if sa == sb || sb == 0 {
        return sa;
    }
    if sa == 0 {
        return sb;
    }
    let aa = a * a;
    let bb = int(d) * b * b;
    if aa > bb {
        sa
    } else {
        sb
    }
}

impl fmt::Debug for AlgebraicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for AlgebraicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*sqrt({})", self.b, self.d)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

impl Zero for AlgebraicScalar {
    fn zero() -> Self {
        Self::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for AlgebraicScalar {
    fn one() -> Self {
        Self::rational(Rational::one())
    }
}

impl Add for AlgebraicScalar {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let d = self.field_with(&rhs);
        AlgebraicScalar { a: self.a + rhs.a, b: self.b + rhs.b, d }.normalized()
    }
}

impl Sub for AlgebraicScalar {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let d = self.field_with(&rhs);
        AlgebraicScalar { a: self.a - rhs.a, b: self.b - rhs.b, d }.normalized()
    }
}

impl Mul for AlgebraicScalar {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let d = self.field_with(&rhs);
        if self.b.is_zero() && rhs.b.is_zero() {
            return Self::rational(self.a * rhs.a);
        }
        let a = &self.a * &rhs.a + int(d) * &self.b * &rhs.b;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        AlgebraicScalar { a, b, d }.normalized()
    }
}

impl Div for AlgebraicScalar {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        if rhs.b.is_zero() {
            assert!(!rhs.a.is_zero(), "division by zero");
            let d = self.d;
            return AlgebraicScalar { a: self.a / &rhs.a, b: self.b / &rhs.a, d }.normalized();
        }
        self * rhs.inv()
    }
}

impl Neg for AlgebraicScalar {
    type Output = Self;
    fn neg(self) -> Self {
        AlgebraicScalar { a: -self.a, b: -self.b, d: self.d }
    }
}

impl AddAssign for AlgebraicScalar {
    fn add_assign(&mut self, rhs: Self) {
        *self = self.clone() + rhs;
    }
}
impl SubAssign for AlgebraicScalar {
    fn sub_assign(&mut self, rhs: Self) {
        *self = self.clone() - rhs;
    }
}
impl MulAssign for AlgebraicScalar {
    fn mul_assign(&mut self, rhs: Self) {
        *self = self.clone() * rhs;
    }
}

impl From<Rational> for AlgebraicScalar {
    fn from(r: Rational) -> Self {
        Self::rational(r)
    }
}

impl Scalar for AlgebraicScalar {
    fn from_rational(r: Rational) -> Self {
        Self::rational(r)
    }
    fn max_conjugate_abs(&self) -> f64 {
        match self.real_embeddings() {
            Some([x, y]) => x.abs().max(y.abs()),
            None => rational_to_f64(&self.norm()).abs().sqrt(),
        }
    }
    fn denominator_lcm(&self) -> BigInt {
        self.a.denom().lcm(self.b.denom())
    }
    fn is_algebraic_integer(&self) -> bool {
        self.trace().is_integer() && self.norm().is_integer()
    }
    fn height_bits(&self) -> u64 {
        rational_bits(&self.a).max(rational_bits(&self.b))
    }
    fn to_complex(&self) -> Complex<f64> {
        if self.b.is_zero() {
            Complex::new(rational_to_f64(&self.a), 0.0)
        } else if self.d > 0 {
            Complex::new(self.to_f64(), 0.0)
        } else {
            Complex::new(
                rational_to_f64(&self.a),
                rational_to_f64(&self.b) * ((-self.d) as f64).sqrt(),
            )
        }
    }
}

/// `p`-adic valuation of a nonzero integer.
pub fn valuation_int(n: &BigInt, p: u64) -> i64 {
    assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `p`-adic valuation of a nonzero rational.
pub fn valuation(x: &Rational, p: u64) -> i64 {
    valuation_int(x.numer(), p) - valuation_int(x.denom(), p)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= p {
        if p % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Prime factors (without multiplicity) of `|n|`, by trial division.
pub fn prime_factors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = 2u64;
    while BigInt::from(p) * BigInt::from(p) <= n {
        let bp = BigInt::from(p);
        if (&n % &bp).is_zero() {
            out.push(p);
            while (&n % &bp).is_zero() {
                n /= &bp;
            }
        }
        p += 1;
    }
    if n > BigInt::one() {
        if let Some(x) = n.to_u64() {
            out.push(x);
        }
    }
    out
}
