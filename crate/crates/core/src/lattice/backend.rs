//! Arithmetic backends the iteration engine can run over.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::symcore::modp::{self, UniPoly};
use crate::symcore::{FactorPool, Factored, Polynomial, RationalFunction, Ring, Variable};

/// Field-like arithmetic over lattice values. `div` returns `None` when the
/// divisor is zero.
pub trait Backend {
    type Value: Clone;
    fn int(&mut self, c: i64) -> Self::Value;
    fn symbol(&mut self, v: Variable) -> Self::Value;
    fn add(&mut self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn sub(&mut self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&mut self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn neg(&mut self, a: &Self::Value) -> Self::Value;
    fn div(&mut self, a: &Self::Value, b: &Self::Value) -> Option<Self::Value>;
    /// Brings a freshly computed cell value into normal form.
    fn finish(&mut self, v: Self::Value) -> Self::Value {
        v
    }
}

/// Exact symbolic values as products of coprime factors.
pub struct ExactBackend {
    pub pool: FactorPool,
}

impl ExactBackend {
    pub fn new(ring: &Arc<Ring>) -> Self {
        ExactBackend { pool: FactorPool::new(ring, 0x5eed) }
    }
}

impl Backend for ExactBackend {
    type Value = Factored;
    fn int(&mut self, c: i64) -> Factored {
        self.pool.from_int(c)
    }
    fn symbol(&mut self, v: Variable) -> Factored {
        let p = Polynomial::var(self.pool.ring(), v).expect("variable in ring");
        self.pool.from_polynomial(&p)
    }
    fn add(&mut self, a: &Factored, b: &Factored) -> Factored {
        self.pool.add(a, b)
    }
    fn sub(&mut self, a: &Factored, b: &Factored) -> Factored {
        self.pool.sub(a, b)
    }
    fn mul(&mut self, a: &Factored, b: &Factored) -> Factored {
        self.pool.mul(a, b)
    }
    fn neg(&mut self, a: &Factored) -> Factored {
        a.neg()
    }
    fn div(&mut self, a: &Factored, b: &Factored) -> Option<Factored> {
        self.pool.div(a, b).ok()
    }
    fn finish(&mut self, v: Factored) -> Factored {
        self.pool.normalize(&v)
    }
}

/// Exact symbolic values as expanded canonical rational functions with a gcd
/// after every operation. Slow; an independent check of [`ExactBackend`].
pub struct NaiveBackend {
    pub ring: Arc<Ring>,
}

impl Backend for NaiveBackend {
    type Value = RationalFunction;
    fn int(&mut self, c: i64) -> RationalFunction {
        RationalFunction::constant(&self.ring, c)
    }
    fn symbol(&mut self, v: Variable) -> RationalFunction {
        RationalFunction::var(&self.ring, v).expect("variable in ring")
    }
    fn add(&mut self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a.add(b)
    }
    fn sub(&mut self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a.sub(b)
    }
    fn mul(&mut self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a.mul(b)
    }
    fn neg(&mut self, a: &RationalFunction) -> RationalFunction {
        a.neg()
    }
    fn div(&mut self, a: &RationalFunction, b: &RationalFunction) -> Option<RationalFunction> {
        a.div(b).ok()
    }
}

/// Exact rational numbers at a fixed point.
pub struct NumericBackend {
    pub values: HashMap<Variable, BigRational>,
}

impl Backend for NumericBackend {
    type Value = BigRational;
    fn int(&mut self, c: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(c))
    }
    fn symbol(&mut self, v: Variable) -> BigRational {
        self.values.get(&v).cloned().unwrap_or_else(|| panic!("no value for {v}"))
    }
    fn add(&mut self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&mut self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&mut self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&mut self, a: &BigRational) -> BigRational {
        -a
    }
    fn div(&mut self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        if b.is_zero() {
            None
        } else {
            Some(a / b)
        }
    }
}

/// Quotient of univariate polynomials over `GF(2^61 - 1)`. Kept unreduced
/// during a rule evaluation; [`SpecializedBackend::finish`] reduces it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniRational {
    pub num: UniPoly,
    pub den: UniPoly,
}

impl UniRational {
    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }
}

/// Values restricted to a random line: every weight-1 datum becomes `a + b t`,
/// coefficient symbols become random constants, all modulo a prime.
pub struct SpecializedBackend {
    pub subst: HashMap<Variable, UniPoly>,
}

impl Backend for SpecializedBackend {
    type Value = UniRational;
    fn int(&mut self, c: i64) -> UniRational {
        UniRational { num: UniPoly::constant(modp::from_i64(c)), den: UniPoly::constant(1) }
    }
    fn symbol(&mut self, v: Variable) -> UniRational {
        let p = self.subst.get(&v).cloned().unwrap_or_else(|| panic!("no substitution for {v}"));
        UniRational { num: p, den: UniPoly::constant(1) }
    }
    fn add(&mut self, a: &UniRational, b: &UniRational) -> UniRational {
        if a.den == b.den {
            return UniRational { num: a.num.add(&b.num), den: a.den.clone() };
        }
        UniRational { num: a.num.mul(&b.den).add(&b.num.mul(&a.den)), den: a.den.mul(&b.den) }
    }
    fn sub(&mut self, a: &UniRational, b: &UniRational) -> UniRational {
        let nb = self.neg(b);
        self.add(a, &nb)
    }
    fn mul(&mut self, a: &UniRational, b: &UniRational) -> UniRational {
        UniRational { num: a.num.mul(&b.num), den: a.den.mul(&b.den) }
    }
    fn neg(&mut self, a: &UniRational) -> UniRational {
        UniRational { num: a.num.scale(modp::neg(1)), den: a.den.clone() }
    }
    fn div(&mut self, a: &UniRational, b: &UniRational) -> Option<UniRational> {
        if b.num.is_zero() {
            return None;
        }
        Some(UniRational { num: a.num.mul(&b.den), den: a.den.mul(&b.num) })
    }
    fn finish(&mut self, v: UniRational) -> UniRational {
        if v.num.is_zero() {
            return UniRational { num: UniPoly::zero(), den: UniPoly::constant(1) };
        }
        let g = v.num.gcd(&v.den);
        let (num, den) = if g.degree() == Some(0) {
            (v.num, v.den)
        } else {
            (v.num.div_rem(&g).0, v.den.div_rem(&g).0)
        };
        let lead = modp::inv(den.leading());
        UniRational { num: num.scale(lead), den: den.scale(lead) }
    }
}
