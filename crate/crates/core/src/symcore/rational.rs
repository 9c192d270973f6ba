use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use super::gcd::gcd;
use super::int::Int;
use super::poly::Polynomial;
use super::var::{Ring, Variable};
use super::SymError;

/// A quotient of polynomials in lowest terms.
///
/// Canonical form: numerator and denominator share no non-constant factor,
/// their joint integer content is 1, and the denominator has a positive
/// leading coefficient. Zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, SymError> {
        if den.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(Self::canonicalize(num, den))
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let den = Polynomial::one(p.ring());
        RationalFunction { num: p, den }
    }

    pub fn constant(ring: &Arc<Ring>, c: impl Into<Int>) -> Self {
        Self::from_poly(Polynomial::constant(ring, c))
    }

    pub fn var(ring: &Arc<Ring>, v: Variable) -> Result<Self, SymError> {
        Ok(Self::from_poly(Polynomial::var(ring, v)?))
    }

    pub fn zero(ring: &Arc<Ring>) -> Self {
        Self::from_poly(Polynomial::zero(ring))
    }

    /// Trusts the caller that `num/den` is already canonical.
    pub(crate) fn from_canonical_parts(num: Polynomial, den: Polynomial) -> Self {
        debug_assert!(!den.is_zero());
        RationalFunction { num, den }
    }

    fn canonicalize(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero(den.ring());
        }
        let g = gcd(&num, &den);
        let (mut num, mut den) = if g.is_constant() {
            let c = g.as_constant().expect("constant");
            if c.is_one() {
                (num, den)
            } else {
                (num.div_int_exact(&c), den.div_int_exact(&c))
            }
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        if den.leading_coeff().is_negative() {
            num = -&num;
            den = -&den;
        }
        let r = RationalFunction { num, den };
        debug_assert!(gcd(&r.num, &r.den).is_constant());
        r
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.num.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::canonicalize(&self.num + &other.num, self.den.clone());
        }
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        Self::canonicalize(num, &self.den * &other.den)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::canonicalize(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn div(&self, other: &Self) -> Result<Self, SymError> {
        if other.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(Self::canonicalize(&self.num * &other.den, &self.den * &other.num))
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }

    /// Weighted degree of the denominator, which equals that of the numerator
    /// for homogeneous iterates.
    pub fn degree(&self) -> Result<u64, SymError> {
        self.den.weighted_degree()
    }

    /// Both parts homogeneous of the same weighted degree (zero counts as
    /// matching any degree).
    pub fn is_balanced(&self) -> Result<bool, SymError> {
        if !self.den.is_homogeneous()? {
            return Ok(false);
        }
        if self.num.is_zero() {
            return Ok(true);
        }
        Ok(self.num.is_homogeneous()? && self.num.weighted_degree()? == self.den.weighted_degree()?)
    }

    /// Exact value at a rational point; `None` where the denominator vanishes.
    pub fn eval_rational(&self, point: &[BigRational]) -> Option<BigRational> {
        let d = self.den.eval_rational(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_rational(point) / d)
    }

    /// Equality as functions, by cross-multiplication.
    pub fn equals(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().is_some_and(|c| c.is_one()) {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_with_opposite_sign_convention() {
        let ring = Ring::new([Variable::p(0), Variable::p(1), Variable::r(1), Variable::q(), Variable::z(0, 0)]);
        let v = |x| Polynomial::var(&ring, x).unwrap();
        let (p0, p1, r1, q, z) = (v(Variable::p(0)), v(Variable::p(1)), v(Variable::r(1)), v(Variable::q()), v(Variable::z(0, 0)));
        let a = RationalFunction::new(p0.clone(), q.clone()).unwrap();
        let b = RationalFunction::new(&z * &q, &r1 - &p1).unwrap();
        let s = a.add(&b);
        let expect_num = &(&(&p0 * &p1) - &(&p0 * &r1)) - &(&z * &(&q * &q));
        let expect_den = &q * &(&p1 - &r1);
        assert_eq!(s.num(), &expect_num);
        assert_eq!(s.den(), &expect_den);
        assert!(s.is_balanced().unwrap());
    }

    #[test]
    fn cancels_common_factor() {
        let ring = Ring::new([Variable::p(1), Variable::r(1)]);
        let p1 = Polynomial::var(&ring, Variable::p(1)).unwrap();
        let r1 = Polynomial::var(&ring, Variable::r(1)).unwrap();
        let f = RationalFunction::new(&(&p1 * &p1) - &(&r1 * &r1), &p1 - &r1).unwrap();
        assert_eq!(f.num(), &(&p1 + &r1));
        assert!(f.den().is_constant());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let ring = Ring::new([Variable::p(1)]);
        let a = RationalFunction::var(&ring, Variable::p(1)).unwrap();
        assert_eq!(a.div(&RationalFunction::zero(&ring)), Err(SymError::DivisionByZero));
        assert_eq!(RationalFunction::new(a.num().clone(), Polynomial::zero(&ring)), Err(SymError::DivisionByZero));
    }
}
