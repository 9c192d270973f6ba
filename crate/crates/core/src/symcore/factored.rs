//! Rational functions kept as products of pairwise coprime polynomial factors.
//!
//! A [`FactorPool`] owns a growing list of primitive polynomials that are
//! pairwise coprime. Values are stored as a rational unit times integer powers
//! of pool factors, so products and quotients are exponent arithmetic and the
//! canonical form never needs a full multivariate gcd of large operands.
//! Sums are expanded, then re-absorbed into the pool; coprimality against
//! existing factors is certified by univariate images modulo a prime, and exact
//! trial division or gcd is only run where an image reports a common factor.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gcd::gcd;
use super::int::Int;
use super::modp::{self, UniPoly};
use super::poly::Polynomial;
use super::rational::RationalFunction;
use super::var::Ring;
use super::SymError;

/// `unit * Π factor(id)^e`; zero has a zero unit and no factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factored {
    unit: BigRational,
    exps: Vec<(usize, i32)>,
}

impl Factored {
    pub fn zero() -> Self {
        Factored { unit: BigRational::zero(), exps: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Factored { unit: c, exps: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn unit(&self) -> &BigRational {
        &self.unit
    }

    /// Pool factor ids with nonzero exponents, sorted by id.
    pub fn exps(&self) -> &[(usize, i32)] {
        &self.exps
    }

    pub fn neg(&self) -> Self {
        Factored { unit: -&self.unit, exps: self.exps.clone() }
    }

    fn combine(a: &[(usize, i32)], b: &[(usize, i32)], sign: i32) -> Vec<(usize, i32)> {
        let mut m: BTreeMap<usize, i32> = a.iter().copied().collect();
        for &(id, e) in b {
            *m.entry(id).or_insert(0) += sign * e;
        }
        m.into_iter().filter(|&(_, e)| e != 0).collect()
    }
}

struct Entry {
    poly: Polynomial,
    degrees: Vec<u32>,
    images: Vec<UniPoly>,
    /// Whether every image kept its full degree at the pool's point.
    images_exact: bool,
    wdeg: u64,
    homogeneous: bool,
    split: Option<Vec<(usize, u32)>>,
}

enum Screen {
    Coprime,
    /// The images share a factor; `full` when they suggest the whole pool
    /// factor divides the candidate.
    Flagged { full: bool },
}

/// Pairwise coprime factor store for one polynomial ring.
pub struct FactorPool {
    ring: Arc<Ring>,
    entries: Vec<Entry>,
    var_ids: Vec<Option<usize>>,
    point: Vec<u64>,
}

impl FactorPool {
    pub fn new(ring: &Arc<Ring>, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let point = (0..ring.len()).map(|_| rng.gen_range(1..modp::PRIME)).collect();
        FactorPool { ring: ring.clone(), entries: Vec::new(), var_ids: vec![None; ring.len()], point }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn factor(&self, id: usize) -> &Polynomial {
        &self.entries[id].poly
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Whether the factor has been replaced by finer factors.
    pub fn is_split(&self, id: usize) -> bool {
        self.entries[id].split.is_some()
    }

    fn push(&mut self, poly: Polynomial) -> usize {
        debug_assert!(!poly.is_constant());
        let degrees = poly.degrees();
        let images = poly.univariate_images_mod(&self.point);
        let images_exact = images_exact(&images, &degrees);
        let wdeg = poly.weighted_degree().expect("nonzero factor");
        let homogeneous = poly.is_homogeneous().expect("nonzero factor");
        self.entries.push(Entry { poly, degrees, images, images_exact, wdeg, homogeneous, split: None });
        self.entries.len() - 1
    }

    fn var_id(&mut self, v: usize) -> usize {
        if let Some(id) = self.var_ids[v] {
            return id;
        }
        let mut e = vec![0u16; self.ring.len()];
        e[v] = 1;
        let id = self.push(Polynomial::monomial(&self.ring, e, Int::ONE));
        self.var_ids[v] = Some(id);
        id
    }

    /// Rewrites split factors in terms of their current replacements.
    pub fn normalize(&self, x: &Factored) -> Factored {
        if x.exps.iter().all(|&(id, _)| self.entries[id].split.is_none()) {
            return x.clone();
        }
        let mut m: BTreeMap<usize, i32> = BTreeMap::new();
        let mut stack: Vec<(usize, i32)> = x.exps.clone();
        while let Some((id, e)) = stack.pop() {
            match &self.entries[id].split {
                None => *m.entry(id).or_insert(0) += e,
                Some(children) => stack.extend(children.iter().map(|&(c, k)| (c, e * k as i32))),
            }
        }
        Factored { unit: x.unit.clone(), exps: m.into_iter().filter(|&(_, e)| e != 0).collect() }
    }

    pub fn from_int(&self, c: i64) -> Factored {
        Factored::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn from_polynomial(&mut self, p: &Polynomial) -> Factored {
        if p.is_zero() {
            return Factored::zero();
        }
        let (unit, exps) = self.absorb(p);
        Factored { unit: BigRational::from_integer(unit.to_bigint()), exps: exps.into_iter().map(|(i, e)| (i, e as i32)).collect() }
    }

    pub fn from_rational(&mut self, r: &RationalFunction) -> Result<Factored, SymError> {
        let n = self.from_polynomial(r.num());
        let d = self.from_polynomial(r.den());
        self.div(&n, &d)
    }

    pub fn mul(&self, a: &Factored, b: &Factored) -> Factored {
        if a.is_zero() || b.is_zero() {
            return Factored::zero();
        }
        let (a, b) = (self.normalize(a), self.normalize(b));
        Factored { unit: &a.unit * &b.unit, exps: Factored::combine(&a.exps, &b.exps, 1) }
    }

    pub fn div(&self, a: &Factored, b: &Factored) -> Result<Factored, SymError> {
        if b.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        if a.is_zero() {
            return Ok(Factored::zero());
        }
        let (a, b) = (self.normalize(a), self.normalize(b));
        Ok(Factored { unit: &a.unit / &b.unit, exps: Factored::combine(&a.exps, &b.exps, -1) })
    }

    pub fn add(&mut self, a: &Factored, b: &Factored) -> Factored {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        let (a, b) = (self.normalize(a), self.normalize(b));
        let mut ea: BTreeMap<usize, i32> = a.exps.iter().copied().collect();
        let mut eb: BTreeMap<usize, i32> = b.exps.iter().copied().collect();
        let ids: Vec<usize> = ea.keys().chain(eb.keys()).copied().collect();
        let mut common: Vec<(usize, i32)> = Vec::new();
        for id in ids {
            let x = ea.get(&id).copied().unwrap_or(0);
            let y = eb.get(&id).copied().unwrap_or(0);
            let m = x.min(y);
            if m != 0 && !common.iter().any(|&(c, _)| c == id) {
                common.push((id, m));
                ea.insert(id, x - m);
                eb.insert(id, y - m);
            }
        }
        common.sort_unstable();
        let l = a.unit.denom().lcm(b.unit.denom());
        let ca = Int::from(a.unit.numer() * (&l / a.unit.denom()));
        let cb = Int::from(b.unit.numer() * (&l / b.unit.denom()));
        let pa = self.expand(ea.iter().map(|(&i, &e)| (i, e)));
        let pb = self.expand(eb.iter().map(|(&i, &e)| (i, e)));
        let s = &pa.scale(&ca) + &pb.scale(&cb);
        if s.is_zero() {
            return Factored::zero();
        }
        let fs = self.from_polynomial(&s);
        let mut out = Factored { unit: fs.unit / BigRational::from_integer(l), exps: fs.exps };
        out.exps = Factored::combine(&out.exps, &common, 1);
        out
    }

    pub fn sub(&mut self, a: &Factored, b: &Factored) -> Factored {
        self.add(a, &b.neg())
    }

    /// Product of factor powers with nonnegative exponents.
    fn expand(&self, exps: impl Iterator<Item = (usize, i32)>) -> Polynomial {
        let mut parts: Vec<Polynomial> = Vec::new();
        let mut mono = vec![0u16; self.ring.len()];
        for (id, e) in exps {
            debug_assert!(e >= 0);
            if e == 0 {
                continue;
            }
            let p = &self.entries[id].poly;
            if p.is_monomial() && p.coeff(0).is_one() {
                for (v, &x) in p.exps(0).iter().enumerate() {
                    mono[v] += x * e as u16;
                }
            } else {
                parts.push(p.pow(e as u32));
            }
        }
        parts.sort_by_key(|p| p.nterms());
        let mut acc = Polynomial::monomial(&self.ring, mono, Int::ONE);
        for p in &parts {
            acc = &acc * p;
        }
        acc
    }

    /// Numerator and denominator as canonical polynomials.
    pub fn to_rational(&self, x: &Factored) -> RationalFunction {
        if x.is_zero() {
            return RationalFunction::zero(&self.ring);
        }
        let x = self.normalize(x);
        let num = self.expand(x.exps.iter().filter(|e| e.1 > 0).copied()).scale(&Int::from(x.unit.numer().clone()));
        let den = self.expand(x.exps.iter().filter(|e| e.1 < 0).map(|&(i, e)| (i, -e))).scale(&Int::from(x.unit.denom().clone()));
        RationalFunction::from_canonical_parts(num, den)
    }

    /// Weighted degree of the denominator.
    pub fn den_degree(&self, x: &Factored) -> u64 {
        let x = self.normalize(x);
        x.exps.iter().filter(|e| e.1 < 0).map(|&(i, e)| (-e) as u64 * self.entries[i].wdeg).sum()
    }

    /// Weighted degree of the numerator; an error for zero.
    pub fn num_degree(&self, x: &Factored) -> Result<u64, SymError> {
        if x.is_zero() {
            return Err(SymError::ZeroPolynomial);
        }
        let x = self.normalize(x);
        Ok(x.exps.iter().filter(|e| e.1 > 0).map(|&(i, e)| e as u64 * self.entries[i].wdeg).sum())
    }

    /// Numerator and denominator homogeneous of equal weighted degree.
    pub fn is_balanced(&self, x: &Factored) -> bool {
        if x.is_zero() {
            return true;
        }
        let x = self.normalize(x);
        x.exps.iter().all(|&(i, _)| self.entries[i].homogeneous)
            && self.num_degree(&x).ok() == Some(self.den_degree(&x))
    }

    pub fn factor_degree(&self, id: usize) -> u64 {
        self.entries[id].wdeg
    }

    /// Splits `p` into an integer unit and pool factors, extending or refining
    /// the pool as needed.
    fn absorb(&mut self, p: &Polynomial) -> (Int, Vec<(usize, u32)>) {
        let (unit, prim) = p.unit_and_primitive();
        let mono = prim.monomial_content();
        let mut out: Vec<(usize, u32)> = Vec::new();
        for (v, &e) in mono.iter().enumerate() {
            if e > 0 {
                out.push((self.var_id(v), e as u32));
            }
        }
        let mut rest = if mono.iter().any(|&e| e > 0) { prim.div_monomial(&mono) } else { prim };
        if !rest.is_constant() {
            rest = self.absorb_primitive(rest, &mut out);
            if !rest.is_constant() {
                let id = self.push(rest);
                out.push((id, 1));
            }
        }
        let mut m: BTreeMap<usize, u32> = BTreeMap::new();
        for (id, e) in out {
            *m.entry(id).or_insert(0) += e;
        }
        (unit, m.into_iter().collect())
    }

    /// Divides out every pool factor sharing a factor with `p` and returns the
    /// cofactor, which is coprime to the whole pool.
    fn absorb_primitive(&mut self, mut p: Polynomial, out: &mut Vec<(usize, u32)>) -> Polynomial {
        let mut dp = p.degrees();
        let mut ip = p.univariate_images_mod(&self.point);
        let mut worklist: Vec<usize> = (0..self.entries.len())
            .filter(|&i| self.entries[i].split.is_none() && !self.var_ids.contains(&Some(i)))
            .collect();
        let mut idx = 0;
        while idx < worklist.len() && !p.is_constant() {
            let id = worklist[idx];
            if self.entries[id].split.is_some() {
                idx += 1;
                continue;
            }
            let full = match self.screen(id, &ip, &dp) {
                Screen::Coprime => {
                    idx += 1;
                    continue;
                }
                Screen::Flagged { full } => full,
            };
            if full {
                if let Some(q) = p.div_exact(&self.entries[id].poly) {
                    p = q;
                    dp = p.degrees();
                    ip = p.univariate_images_mod(&self.point);
                    out.push((id, 1));
                    continue;
                }
            }
            let f = self.entries[id].poly.clone();
            let g = gcd(&f, &p);
            if g.is_constant() {
                idx += 1;
                continue;
            }
            if g == f {
                p = p.div_exact(&f).expect("gcd divides");
                dp = p.degrees();
                ip = p.univariate_images_mod(&self.point);
                out.push((id, 1));
                continue;
            }
            let cof = f.div_exact(&g).expect("gcd divides");
            let children = coprime_basis(vec![(g, 1), (cof, 1)]);
            let mut split = Vec::new();
            for (c, e) in children {
                let cid = self.push(c);
                split.push((cid, e));
                worklist.push(cid);
            }
            self.entries[id].split = Some(split);
            idx += 1;
        }
        p
    }

    fn screen(&self, id: usize, ip: &[UniPoly], dp: &[u32]) -> Screen {
        let e = &self.entries[id];
        let shared: Vec<usize> = (0..dp.len()).filter(|&v| dp[v] > 0 && e.degrees[v] > 0).collect();
        if shared.is_empty() {
            return Screen::Coprime;
        }
        let subset = (0..dp.len()).all(|v| e.degrees[v] == 0 || dp[v] >= e.degrees[v]);
        if !e.images_exact || !images_exact(ip, dp) {
            return Screen::Flagged { full: subset };
        }
        let mut coprime = true;
        let mut full = subset;
        for &v in &shared {
            let dg = e.images[v].gcd(&ip[v]).degree().unwrap_or(0);
            if dg > 0 {
                coprime = false;
            }
            if dg < e.degrees[v] as usize {
                full = false;
            }
        }
        if coprime {
            Screen::Coprime
        } else {
            Screen::Flagged { full }
        }
    }
}

fn images_exact(images: &[UniPoly], degrees: &[u32]) -> bool {
    images.iter().zip(degrees).all(|(im, &d)| d == 0 || im.degree() == Some(d as usize))
}

/// Refines `Π a_i^e_i` into a product of pairwise coprime canonical factors.
fn coprime_basis(items: Vec<(Polynomial, u32)>) -> Vec<(Polynomial, u32)> {
    let mut items: Vec<(Polynomial, u32)> = items.into_iter().filter(|(p, _)| !p.is_constant()).map(|(p, e)| (p.canonical(), e)).collect();
    'outer: loop {
        for i in 0..items.len() {
            for j in i + 1..items.len() {
                let g = gcd(&items[i].0, &items[j].0);
                if g.is_constant() {
                    continue;
                }
                let (a, ea) = items[i].clone();
                let (b, eb) = items[j].clone();
                items.remove(j);
                items.remove(i);
                for (p, e) in [(a.div_exact(&g).expect("gcd divides"), ea), (b.div_exact(&g).expect("gcd divides"), eb), (g, ea + eb)] {
                    if p.is_constant() {
                        continue;
                    }
                    let p = p.canonical();
                    if let Some(slot) = items.iter_mut().find(|(q, _)| *q == p) {
                        slot.1 += e;
                    } else {
                        items.push((p, e));
                    }
                }
                continue 'outer;
            }
        }
        return items;
    }
}

impl FactorPool {
    /// Evaluates at a rational point; `None` if a denominator factor vanishes.
    pub fn eval_rational(&self, x: &Factored, point: &[BigRational]) -> Option<BigRational> {
        let x = self.normalize(x);
        let mut acc = x.unit.clone();
        for &(id, e) in &x.exps {
            let v = self.entries[id].poly.eval_rational(point);
            if v.is_zero() {
                if e < 0 {
                    return None;
                }
                return Some(BigRational::zero());
            }
            let v = if e < 0 { v.recip() } else { v };
            acc *= num_traits::pow(v, e.unsigned_abs() as usize);
        }
        Some(acc)
    }

    /// Sign-insensitive check that the unit is a unit (nonzero, no factors).
    pub fn is_constant(&self, x: &Factored) -> bool {
        self.normalize(x).exps.is_empty()
    }

    /// Whether `x` equals one.
    pub fn is_one(&self, x: &Factored) -> bool {
        self.is_constant(x) && x.unit.is_one()
    }

    /// Whether `x` is a negative constant.
    pub fn is_negative_constant(&self, x: &Factored) -> bool {
        self.is_constant(x) && x.unit.is_negative()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::var::Variable;

    fn setup() -> (Arc<Ring>, FactorPool) {
        let ring = Ring::new([Variable::p(0), Variable::p(1), Variable::r(1), Variable::q(), Variable::z(0, 0)]);
        let pool = FactorPool::new(&ring, 1);
        (ring, pool)
    }

    #[test]
    fn matches_rational_function_arithmetic() {
        let (ring, mut pool) = setup();
        let v = |x| RationalFunction::var(&ring, x).unwrap();
        let (p0, p1, r1, q, z) = (v(Variable::p(0)), v(Variable::p(1)), v(Variable::r(1)), v(Variable::q()), v(Variable::z(0, 0)));
        let x00 = p0.div(&q).unwrap();
        let x01 = p1.div(&q).unwrap();
        let x10 = r1.div(&q).unwrap();
        let expect = x00.add(&z.div(&x10.sub(&x01)).unwrap());
        let f00 = pool.from_rational(&x00).unwrap();
        let f01 = pool.from_rational(&x01).unwrap();
        let f10 = pool.from_rational(&x10).unwrap();
        let fz = pool.from_rational(&z).unwrap();
        let diff = pool.sub(&f10, &f01);
        let quot = pool.div(&fz, &diff).unwrap();
        let got = pool.add(&f00, &quot);
        assert_eq!(pool.to_rational(&got), expect);
        assert_eq!(pool.den_degree(&got), 2);
        assert!(pool.is_balanced(&got));
    }

    #[test]
    fn splits_factor_on_partial_overlap() {
        let (ring, mut pool) = setup();
        let v = |x| Polynomial::var(&ring, x).unwrap();
        let a = &v(Variable::p(0)) + &v(Variable::p(1));
        let b = &v(Variable::r(1)) + &v(Variable::q());
        let ab = &a * &b;
        let fab = pool.from_polynomial(&ab);
        let fa = pool.from_polynomial(&a);
        let quotient = pool.div(&fab, &fa).unwrap();
        assert_eq!(pool.to_rational(&quotient), RationalFunction::from_poly(b));
        let sum = pool.add(&fab, &fa);
        let expect = RationalFunction::from_poly(&ab + &a);
        assert_eq!(pool.to_rational(&sum), expect);
    }

    #[test]
    fn cancellation_through_sum() {
        let (ring, mut pool) = setup();
        let v = |x| Polynomial::var(&ring, x).unwrap();
        let (p1, r1) = (v(Variable::p(1)), v(Variable::r(1)));
        // (p1^2 - r1^2)/(p1 - r1) via p1^2/(p1-r1) - r1^2/(p1-r1)
        let d = pool.from_polynomial(&(&p1 - &r1));
        let a = pool.from_polynomial(&(&p1 * &p1));
        let b = pool.from_polynomial(&(&r1 * &r1));
        let x = pool.div(&a, &d).unwrap();
        let y = pool.div(&b, &d).unwrap();
        let s = pool.sub(&x, &y);
        assert_eq!(pool.to_rational(&s), RationalFunction::from_poly(&p1 + &r1));
        assert_eq!(pool.den_degree(&s), 0);
    }
}
