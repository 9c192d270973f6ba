//! Arithmetic in the prime field of order `2^61 - 1` and dense univariate
//! polynomials over it.

/// The Mersenne prime `2^61 - 1`.
pub const PRIME: u64 = (1 << 61) - 1;

#[inline]
pub fn reduce128(x: u128) -> u64 {
    let lo = (x as u64) & PRIME;
    let hi = (x >> 61) as u64;
    let mut s = lo + (hi & PRIME) + (hi >> 61);
    while s >= PRIME {
        s -= PRIME;
    }
    s
}

#[inline]
pub fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= PRIME {
        s - PRIME
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + PRIME - b
    }
}

#[inline]
pub fn neg(a: u64) -> u64 {
    if a == 0 {
        0
    } else {
        PRIME - a
    }
}

#[inline]
pub fn mul(a: u64, b: u64) -> u64 {
    reduce128(a as u128 * b as u128)
}

pub fn pow(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse; `a` must be nonzero.
pub fn inv(a: u64) -> u64 {
    debug_assert!(a != 0);
    pow(a, PRIME - 2)
}

pub fn from_i64(v: i64) -> u64 {
    (v as i128).rem_euclid(PRIME as i128) as u64
}

const KARATSUBA_CUTOFF: usize = 48;

/// Dense univariate polynomial over `GF(2^61 - 1)`, lowest degree first,
/// without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<u64>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: u64) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `a + b t`.
    pub fn linear(a: u64, b: u64) -> Self {
        Self::from_coeffs(vec![a, b])
    }

    pub fn from_coeffs(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| add(*self.coeffs.get(i).unwrap_or(&0), *other.coeffs.get(i).unwrap_or(&0)))
            .collect();
        Self::from_coeffs(c)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| sub(*self.coeffs.get(i).unwrap_or(&0), *other.coeffs.get(i).unwrap_or(&0)))
            .collect();
        Self::from_coeffs(c)
    }

    pub fn scale(&self, k: u64) -> UniPoly {
        Self::from_coeffs(self.coeffs.iter().map(|&c| mul(c, k)).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        mul_into(&self.coeffs, &other.coeffs, &mut out);
        Self::from_coeffs(out)
    }

    /// Euclidean division; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        if self.coeffs.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let lead_inv = inv(divisor.leading());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = mul(rem[i + dd], lead_inv);
            quot[i] = c;
            if c != 0 {
                for (j, &d) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] = sub(rem[i + j], mul(c, d));
                }
            }
        }
        rem.truncate(dd);
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    pub fn make_monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv(self.leading()))
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem_monic_divisor(&b.make_monic());
            a = b;
            b = r;
        }
        a.make_monic()
    }

    fn rem_monic_divisor(&self, monic: &UniPoly) -> UniPoly {
        let dd = monic.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return self.clone();
        }
        let mut rem = self.coeffs.clone();
        for i in (0..rem.len() - dd).rev() {
            let c = rem[i + dd];
            if c != 0 {
                for (j, &d) in monic.coeffs[..dd].iter().enumerate() {
                    rem[i + j] = sub(rem[i + j], mul(c, d));
                }
                rem[i + dd] = 0;
            }
        }
        rem.truncate(dd);
        Self::from_coeffs(rem)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| add(mul(acc, x), c))
    }
}

fn mul_schoolbook(a: &[u64], b: &[u64], out: &mut [u64]) {
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add(out[i + j], mul(x, y));
        }
    }
}

/// `out += a * b`; `out.len() >= a.len() + b.len() - 1`.
fn mul_into(a: &[u64], b: &[u64], out: &mut [u64]) {
    if a.len() < KARATSUBA_CUTOFF || b.len() < KARATSUBA_CUTOFF {
        mul_schoolbook(a, b, out);
        return;
    }
    let (a, b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if b.len() * 2 <= a.len() {
        // unbalanced: slice the longer operand
        for (k, chunk) in a.chunks(b.len()).enumerate() {
            let off = k * b.len();
            mul_into(chunk, b, &mut out[off..]);
        }
        return;
    }
    let h = a.len() / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h.min(b.len()));
    let mut z0 = vec![0u64; a0.len() + b0.len() - 1];
    mul_into(a0, b0, &mut z0);
    let mut z2 = vec![0u64; a1.len() + b1.len().max(1) - 1];
    if !b1.is_empty() {
        mul_into(a1, b1, &mut z2);
    }
    let sa: Vec<u64> = (0..a0.len().max(a1.len()))
        .map(|i| add(*a0.get(i).unwrap_or(&0), *a1.get(i).unwrap_or(&0)))
        .collect();
    let sb: Vec<u64> = (0..b0.len().max(b1.len()))
        .map(|i| add(*b0.get(i).unwrap_or(&0), *b1.get(i).unwrap_or(&0)))
        .collect();
    let mut z1 = vec![0u64; sa.len() + sb.len() - 1];
    mul_into(&sa, &sb, &mut z1);
    for (i, v) in z0.iter().enumerate() {
        z1[i] = sub(z1[i], *v);
    }
    if !b1.is_empty() {
        for (i, v) in z2.iter().enumerate() {
            z1[i] = sub(z1[i], *v);
        }
    }
    for (i, v) in z0.iter().enumerate() {
        out[i] = add(out[i], *v);
    }
    for (i, v) in z1.iter().enumerate() {
        if i + h < out.len() {
            out[i + h] = add(out[i + h], *v);
        } else {
            debug_assert_eq!(*v, 0);
        }
    }
    if !b1.is_empty() {
        for (i, v) in z2.iter().enumerate() {
            out[i + 2 * h] = add(out[i + 2 * h], *v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(a: &UniPoly, b: &UniPoly) -> UniPoly {
        let mut out = vec![0u64; a.coeffs.len() + b.coeffs.len() - 1];
        mul_schoolbook(&a.coeffs, &b.coeffs, &mut out);
        UniPoly::from_coeffs(out)
    }

    fn pseudo_random(n: usize, seed: u64) -> UniPoly {
        let mut s = seed;
        let c = (0..n)
            .map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (s >> 3) % PRIME
            })
            .collect();
        UniPoly::from_coeffs(c)
    }

    #[test]
    fn field_basics() {
        assert_eq!(mul(inv(12345), 12345), 1);
        assert_eq!(add(PRIME - 1, 2), 1);
        assert_eq!(sub(1, 2), PRIME - 1);
        assert_eq!(from_i64(-1), PRIME - 1);
    }

    #[test]
    fn karatsuba_matches_schoolbook() {
        for (n, m) in [(50, 50), (130, 61), (200, 7), (97, 300), (64, 49)] {
            let a = pseudo_random(n, n as u64);
            let b = pseudo_random(m, 7 + m as u64);
            assert_eq!(a.mul(&b), naive(&a, &b), "sizes {n}x{m}");
        }
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let g = pseudo_random(20, 3);
        let a = g.mul(&pseudo_random(31, 4));
        let b = g.mul(&pseudo_random(17, 5));
        assert_eq!(a.gcd(&b), g.make_monic());
        let (q, r) = a.div_rem(&g);
        assert!(r.is_zero());
        assert_eq!(q.mul(&g), a);
    }
}
