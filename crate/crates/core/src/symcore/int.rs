//! Arbitrary-precision integers with an inline fast path for values that fit
//! in an `i64`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::{BigInt, Sign};
use num_integer::Integer as _;
use num_traits::{One, ToPrimitive, Zero};

/// An exact integer. Values in `i64` range are always stored as `Small`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Int {
    Small(i64),
    Big(BigInt),
}

impl Int {
    pub const ZERO: Int = Int::Small(0);
    pub const ONE: Int = Int::Small(1);

    fn from_big(b: BigInt) -> Int {
        match b.to_i64() {
            Some(v) => Int::Small(v),
            None => Int::Big(b),
        }
    }

    fn from_i128(v: i128) -> Int {
        if let Ok(s) = i64::try_from(v) {
            Int::Small(s)
        } else {
            Int::Big(BigInt::from(v))
        }
    }

    pub fn to_bigint(&self) -> BigInt {
        match self {
            Int::Small(v) => BigInt::from(*v),
            Int::Big(b) => b.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Int::Small(1))
    }

    pub fn signum(&self) -> i32 {
        match self {
            Int::Small(v) => v.signum() as i32,
            Int::Big(b) => match b.sign() {
                Sign::Minus => -1,
                Sign::NoSign => 0,
                Sign::Plus => 1,
            },
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Int {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn gcd(&self, other: &Int) -> Int {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => {
                let g = (*a as i128).unsigned_abs().gcd(&(*b as i128).unsigned_abs());
                Int::from_i128(g as i128)
            }
            _ => Int::from_big(self.to_bigint().gcd(&other.to_bigint())),
        }
    }

    /// Exact quotient; panics in debug builds if `other` does not divide `self`.
    pub fn div_exact(&self, other: &Int) -> Int {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => {
                debug_assert!(*b != 0 && (*a as i128) % (*b as i128) == 0);
                Int::from_i128(*a as i128 / *b as i128)
            }
            _ => {
                let (q, r) = self.to_bigint().div_rem(&other.to_bigint());
                debug_assert!(r.is_zero());
                Int::from_big(q)
            }
        }
    }

    /// Quotient and remainder, truncating toward zero.
    pub fn div_rem(&self, other: &Int) -> (Int, Int) {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => {
                let (a, b) = (*a as i128, *b as i128);
                (Int::from_i128(a / b), Int::from_i128(a % b))
            }
            _ => {
                let (q, r) = self.to_bigint().div_rem(&other.to_bigint());
                (Int::from_big(q), Int::from_big(r))
            }
        }
    }

    pub fn divides(&self, other: &Int) -> bool {
        !self.is_zero() && other.div_rem(self).1.is_zero()
    }

    pub fn pow(&self, exp: u32) -> Int {
        let mut acc = Int::ONE;
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Residue in `[0, modulus)`.
    pub fn rem_u64(&self, modulus: u64) -> u64 {
        match self {
            Int::Small(v) => (*v as i128).rem_euclid(modulus as i128) as u64,
            Int::Big(b) => {
                let r = b.mod_floor(&BigInt::from(modulus));
                r.to_u64().expect("residue fits in u64")
            }
        }
    }

    /// `self += a * b` without allocating on the small path.
    pub fn add_mul(&mut self, a: &Int, b: &Int) {
        if let (Int::Small(s), Int::Small(x), Int::Small(y)) = (&*self, a, b) {
            let v = *s as i128 + (*x as i128) * (*y as i128);
            *self = Int::from_i128(v);
            return;
        }
        let prod = a * b;
        *self += &prod;
    }
}

impl Default for Int {
    fn default() -> Self {
        Int::ZERO
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int::Small(v)
    }
}

impl From<i32> for Int {
    fn from(v: i32) -> Self {
        Int::Small(v as i64)
    }
}

impl From<u64> for Int {
    fn from(v: u64) -> Self {
        Int::from_i128(v as i128)
    }
}

impl From<BigInt> for Int {
    fn from(b: BigInt) -> Self {
        Int::from_big(b)
    }
}

impl From<&Int> for BigInt {
    fn from(v: &Int) -> Self {
        v.to_bigint()
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Int {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a.cmp(b),
            _ => self.to_bigint().cmp(&other.to_bigint()),
        }
    }
}

impl Neg for &Int {
    type Output = Int;
    fn neg(self) -> Int {
        match self {
            Int::Small(v) => Int::from_i128(-(*v as i128)),
            Int::Big(b) => Int::from_big(-b),
        }
    }
}

impl Neg for Int {
    type Output = Int;
    fn neg(self) -> Int {
        -&self
    }
}

impl Add for &Int {
    type Output = Int;
    fn add(self, rhs: &Int) -> Int {
        match (self, rhs) {
            (Int::Small(a), Int::Small(b)) => Int::from_i128(*a as i128 + *b as i128),
            _ => Int::from_big(self.to_bigint() + rhs.to_bigint()),
        }
    }
}

impl Sub for &Int {
    type Output = Int;
    fn sub(self, rhs: &Int) -> Int {
        match (self, rhs) {
            (Int::Small(a), Int::Small(b)) => Int::from_i128(*a as i128 - *b as i128),
            _ => Int::from_big(self.to_bigint() - rhs.to_bigint()),
        }
    }
}

impl Mul for &Int {
    type Output = Int;
    fn mul(self, rhs: &Int) -> Int {
        match (self, rhs) {
            (Int::Small(a), Int::Small(b)) => Int::from_i128(*a as i128 * *b as i128),
            (Int::Big(a), Int::Small(b)) | (Int::Small(b), Int::Big(a)) => Int::from_big(a * *b),
            (Int::Big(a), Int::Big(b)) => Int::from_big(a * b),
        }
    }
}

impl Add for Int {
    type Output = Int;
    fn add(self, rhs: Int) -> Int {
        &self + &rhs
    }
}

impl Sub for Int {
    type Output = Int;
    fn sub(self, rhs: Int) -> Int {
        &self - &rhs
    }
}

impl Mul for Int {
    type Output = Int;
    fn mul(self, rhs: Int) -> Int {
        &self * &rhs
    }
}

impl AddAssign<&Int> for Int {
    fn add_assign(&mut self, rhs: &Int) {
        match (&mut *self, rhs) {
            (Int::Small(a), Int::Small(b)) => *self = Int::from_i128(*a as i128 + *b as i128),
            (Int::Big(a), _) => {
                *a += rhs.to_bigint();
                if let Some(v) = a.to_i64() {
                    *self = Int::Small(v);
                }
            }
            _ => *self = &*self + rhs,
        }
    }
}

impl SubAssign<&Int> for Int {
    fn sub_assign(&mut self, rhs: &Int) {
        *self += &-rhs;
    }
}

impl Zero for Int {
    fn zero() -> Self {
        Int::ZERO
    }
    fn is_zero(&self) -> bool {
        Int::is_zero(self)
    }
}

impl One for Int {
    fn one() -> Self {
        Int::ONE
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(v) => write!(f, "{v}"),
            Int::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes_to_big() {
        let a = Int::from(i64::MAX);
        let b = &a + &Int::ONE;
        assert!(matches!(b, Int::Big(_)));
        let c = &b - &Int::ONE;
        assert_eq!(c, Int::Small(i64::MAX));
    }

    #[test]
    fn min_negation() {
        let a = Int::from(i64::MIN);
        assert_eq!(-(-&a), a);
        assert!(matches!(-&a, Int::Big(_)));
    }

    #[test]
    fn add_mul_and_gcd() {
        let mut acc = Int::from(3);
        acc.add_mul(&Int::from(i64::MAX), &Int::from(4));
        let expect = BigInt::from(i64::MAX) * 4 + 3;
        assert_eq!(acc.to_bigint(), expect);
        assert_eq!(Int::from(12).gcd(&Int::from(-18)), Int::from(6));
        assert_eq!(Int::from(7).rem_u64(5), 2);
        assert_eq!(Int::from(-7).rem_u64(5), 3);
    }
}
