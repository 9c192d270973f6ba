//! Exact multivariate gcd over the integers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::modp::{self, UniPoly};
use super::poly::Polynomial;

/// Which gcd algorithm to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GcdStrategy {
    /// Shortcuts (contents, monomials, modular coprimality certificates,
    /// trial division) in front of the recursive algorithm.
    #[default]
    Fast,
    /// Plain recursive primitive PRS; slow but always correct.
    Recursive,
}

/// Greatest common divisor in canonical form: positive leading coefficient,
/// integer content equal to the gcd of the input contents.
/// `gcd(a, 0)` is `a` up to sign; `gcd(0, 0)` is `0`.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    gcd_with(a, b, GcdStrategy::Fast)
}

pub fn gcd_with(a: &Polynomial, b: &Polynomial, strategy: GcdStrategy) -> Polynomial {
    let g = match strategy {
        GcdStrategy::Fast => gcd_fast(a, b),
        GcdStrategy::Recursive => gcd_recursive(a, b),
    };
    normalize_sign(g)
}

fn normalize_sign(g: Polynomial) -> Polynomial {
    if g.leading_coeff().is_negative() {
        -&g
    } else {
        g
    }
}

fn trivial(a: &Polynomial, b: &Polynomial) -> Option<Polynomial> {
    if a.is_zero() {
        return Some(normalize_sign(b.clone()));
    }
    if b.is_zero() {
        return Some(normalize_sign(a.clone()));
    }
    if a.is_constant() || b.is_constant() {
        return Some(Polynomial::constant(a.ring(), a.content().gcd(&b.content())));
    }
    None
}

fn monomial_gcd(a: &Polynomial, b: &Polynomial) -> Vec<u16> {
    a.monomial_content().iter().zip(b.monomial_content()).map(|(x, y)| (*x).min(y)).collect()
}

fn gcd_fast(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if let Some(g) = trivial(a, b) {
        return g;
    }
    if a == b {
        return normalize_sign(a.clone());
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mono: Vec<u16> = ma.iter().zip(&mb).map(|(x, y)| (*x).min(*y)).collect();
    let (ca, pa) = a.div_monomial(&ma).unit_and_primitive();
    let (cb, pb) = b.div_monomial(&mb).unit_and_primitive();
    let c = ca.gcd(&cb);
    let scale = |g: Polynomial| g.mul_monomial(&mono).scale(&c);
    if pa.is_constant() || pb.is_constant() {
        return scale(Polynomial::one(a.ring()));
    }
    if pa == pb {
        return scale(pa);
    }
    match modular_screen(&pa, &pb) {
        Screen::Coprime => return scale(Polynomial::one(a.ring())),
        Screen::MaybeADividesB => {
            if pb.div_exact(&pa).is_some() {
                return scale(pa);
            }
        }
        Screen::MaybeBDividesA => {
            if pa.div_exact(&pb).is_some() {
                return scale(pb);
            }
        }
        Screen::Unknown => {}
    }
    scale(gcd_recursive(&pa, &pb))
}

enum Screen {
    Coprime,
    MaybeADividesB,
    MaybeBDividesA,
    Unknown,
}

/// Compares univariate images modulo a prime at a pseudo-random point.
/// A degree-0 image gcd (with leading coefficients surviving) certifies that
/// the gcd has degree 0 in that variable.
fn modular_screen(a: &Polynomial, b: &Polynomial) -> Screen {
    let da = a.degrees();
    let db = b.degrees();
    let shared: Vec<usize> = (0..da.len()).filter(|&v| da[v] > 0 && db[v] > 0).collect();
    if shared.is_empty() {
        return Screen::Coprime;
    }
    let seed = (a.nterms() as u64) << 32 ^ b.nterms() as u64 ^ (da.iter().sum::<u32>() as u64) << 16;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _attempt in 0..3 {
        let point: Vec<u64> = (0..da.len()).map(|_| rng.gen_range(1..modp::PRIME)).collect();
        let ia = a.univariate_images_mod(&point);
        let ib = b.univariate_images_mod(&point);
        let mut ok = true;
        let mut all_zero = true;
        let mut a_full = true;
        let mut b_full = true;
        for &v in &shared {
            if ia[v].degree() != Some(da[v] as usize) || ib[v].degree() != Some(db[v] as usize) {
                ok = false;
                break;
            }
            let g: UniPoly = ia[v].gcd(&ib[v]);
            let dg = g.degree().unwrap_or(0);
            if dg > 0 {
                all_zero = false;
            }
            if dg < da[v] as usize {
                a_full = false;
            }
            if dg < db[v] as usize {
                b_full = false;
            }
        }
        if !ok {
            continue;
        }
        if all_zero {
            return Screen::Coprime;
        }
        // a can only divide b if it has no variable outside b
        if a_full && (0..da.len()).all(|v| da[v] == 0 || db[v] > 0) {
            return Screen::MaybeADividesB;
        }
        if b_full && (0..db.len()).all(|v| db[v] == 0 || da[v] > 0) {
            return Screen::MaybeBDividesA;
        }
        return Screen::Unknown;
    }
    Screen::Unknown
}

/// Recursive content / primitive-part gcd with a primitive pseudo-remainder
/// sequence in the most significant variable.
pub(crate) fn gcd_recursive(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if let Some(g) = trivial(a, b) {
        return g;
    }
    let mono = monomial_gcd(a, b);
    let a = a.div_monomial(&a.monomial_content());
    let b = b.div_monomial(&b.monomial_content());
    if let Some(g) = trivial(&a, &b) {
        return g.mul_monomial(&mono);
    }
    let ua = a.used_vars();
    let ub = b.used_vars();
    let v = *ua.iter().chain(ub.iter()).min().expect("non-constant input");
    let g = if !ua.contains(&v) {
        gcd_recursive(&a, &content_in(&b, v))
    } else if !ub.contains(&v) {
        gcd_recursive(&content_in(&a, v), &b)
    } else {
        let ca = content_in(&a, v);
        let cb = content_in(&b, v);
        let c = gcd_recursive(&ca, &cb);
        let pa = a.div_exact(&ca).expect("content divides");
        let pb = b.div_exact(&cb).expect("content divides");
        let p = primitive_prs(pa, pb, v);
        &c * &p
    };
    normalize_sign(g).mul_monomial(&mono)
}

/// Gcd of the coefficients of `p` viewed as a polynomial in variable `v`.
fn content_in(p: &Polynomial, v: usize) -> Polynomial {
    let mut coeffs = p.to_univariate(v).into_iter().filter(|c| !c.is_zero());
    let mut g = coeffs.next().expect("nonzero polynomial");
    for c in coeffs {
        if g.is_constant() && g.content().is_one() {
            break;
        }
        g = gcd_recursive(&g, &c);
    }
    normalize_sign(g)
}

fn primitive_part_in(p: &Polynomial, v: usize) -> Polynomial {
    let c = content_in(p, v);
    normalize_sign(p.div_exact(&c).expect("content divides"))
}

/// Gcd of two polynomials primitive in `v`, both of positive degree in `v`.
fn primitive_prs(a: Polynomial, b: Polynomial, v: usize) -> Polynomial {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    loop {
        if b.is_zero() {
            return primitive_part_in(&a, v);
        }
        if b.degree_in(v) == 0 {
            return Polynomial::one(a.ring());
        }
        let r = pseudo_rem(&a, &b, v);
        a = b;
        b = if r.is_zero() { r } else { primitive_part_in(&r, v) };
    }
}

/// Sparse pseudo-remainder of `a` by `b` with respect to variable `v`.
fn pseudo_rem(a: &Polynomial, b: &Polynomial, v: usize) -> Polynomial {
    let ring = a.ring().clone();
    let bu = b.to_univariate(v);
    let db = bu.len() - 1;
    let lb = &bu[db];
    let mut r = a.clone();
    let mut shift = vec![0u16; ring.len()];
    while !r.is_zero() && r.degree_in(v) as usize >= db {
        let ru = r.to_univariate(v);
        let dr = ru.len() - 1;
        shift[v] = (dr - db) as u16;
        let lr = &ru[dr];
        let lhs = &r * lb;
        let rhs = &(lr * b).mul_monomial(&shift);
        r = &lhs - rhs;
        // divide out the integer content to curb growth
        let c = r.content();
        if !c.is_zero() && !c.is_one() {
            r = r.div_int_exact(&c);
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::int::Int;
    use crate::symcore::var::{Ring, Variable};
    use std::sync::Arc;

    fn ring() -> Arc<Ring> {
        Ring::new([Variable::p(0), Variable::p(1), Variable::r(1), Variable::q(), Variable::z(0, 0)])
    }

    fn v(r: &Arc<Ring>, x: Variable) -> Polynomial {
        Polynomial::var(r, x).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = ring();
        let p1 = v(&r, Variable::p(1));
        let r1 = v(&r, Variable::r(1));
        let a = &p1 - &r1;
        let b = &(&p1 * &p1) - &(&r1 * &r1);
        for s in [GcdStrategy::Fast, GcdStrategy::Recursive] {
            assert_eq!(gcd_with(&a, &b, s), a);
        }
    }

    #[test]
    fn shared_variable_factor() {
        let r = ring();
        let p1 = v(&r, Variable::p(1));
        let r1 = v(&r, Variable::r(1));
        let q = v(&r, Variable::q());
        let a = &q * &(&p1 - &r1);
        let b = &q * &q;
        for s in [GcdStrategy::Fast, GcdStrategy::Recursive] {
            assert_eq!(gcd_with(&a, &b, s), q);
        }
    }

    #[test]
    fn zero_and_sign() {
        let r = ring();
        let p0 = v(&r, Variable::p(0));
        let a = -&p0.scale(&Int::from(6));
        assert_eq!(gcd(&a, &Polynomial::zero(&r)), p0.scale(&Int::from(6)));
        assert_eq!(gcd(&a, &Polynomial::constant(&r, 4)), Polynomial::constant(&r, 2));
        assert!(gcd(&Polynomial::zero(&r), &Polynomial::zero(&r)).is_zero());
    }

    #[test]
    fn hidden_common_factor() {
        let r = ring();
        let p0 = v(&r, Variable::p(0));
        let p1 = v(&r, Variable::p(1));
        let q = v(&r, Variable::q());
        let z = v(&r, Variable::z(0, 0));
        let g = &(&(&p0 * &p1) + &(&z * &(&q * &q))) + &Polynomial::constant(&r, 3);
        let a = &g * &(&p0 + &z);
        let b = &g * &(&(&p1 * &q) - &Polynomial::constant(&r, 2));
        for s in [GcdStrategy::Fast, GcdStrategy::Recursive] {
            assert_eq!(gcd_with(&a, &b, s), g, "{s:?}");
        }
    }
}
