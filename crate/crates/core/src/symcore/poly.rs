use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use super::int::Int;
use super::modp::{self, UniPoly};
use super::var::{Ring, Variable};
use super::SymError;

/// Sparse multivariate polynomial with exact integer coefficients.
///
/// Terms are kept sorted in strictly descending lexicographic order of their
/// exponent vectors (variable 0 most significant); no zero coefficients are
/// stored.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<Ring>,
    exps: Vec<u16>,
    coeffs: Vec<Int>,
}

/// Packs exponent vectors into a single `u128` so that monomial products
/// become integer additions and lexicographic order becomes integer order.
pub(crate) struct Packer {
    shifts: Vec<u32>,
    widths: Vec<u32>,
}

impl Packer {
    /// `bounds[v]` is the largest exponent of variable `v` that will ever be packed.
    pub(crate) fn new(bounds: &[u32]) -> Option<Packer> {
        let widths: Vec<u32> = bounds.iter().map(|&b| 32 - b.leading_zeros()).collect();
        let total: u32 = widths.iter().sum();
        if total > 128 {
            return None;
        }
        let mut shifts = vec![0; widths.len()];
        let mut acc = 0;
        for v in (0..widths.len()).rev() {
            shifts[v] = acc;
            acc += widths[v];
        }
        Some(Packer { shifts, widths })
    }

    #[inline]
    pub(crate) fn pack(&self, e: &[u16]) -> u128 {
        let mut k = 0u128;
        for (v, &x) in e.iter().enumerate() {
            if x != 0 {
                k |= (x as u128) << self.shifts[v];
            }
        }
        k
    }

    #[inline]
    pub(crate) fn unpack(&self, k: u128, out: &mut [u16]) {
        for v in 0..out.len() {
            let w = self.widths[v];
            out[v] = if w == 0 {
                0
            } else {
                ((k >> self.shifts[v]) & ((1u128 << w) - 1)) as u16
            };
        }
    }
}

fn check_ring(a: &Arc<Ring>, b: &Arc<Ring>) {
    assert!(Arc::ptr_eq(a, b) || **a == **b, "polynomials belong to different rings");
}

impl Polynomial {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Polynomial { ring: ring.clone(), exps: Vec::new(), coeffs: Vec::new() }
    }

    pub fn constant(ring: &Arc<Ring>, c: impl Into<Int>) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero(ring);
        }
        Polynomial { ring: ring.clone(), exps: vec![0; ring.len()], coeffs: vec![c] }
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, 1)
    }

    pub fn var(ring: &Arc<Ring>, v: Variable) -> Result<Self, SymError> {
        let i = ring.index_of(&v).ok_or_else(|| SymError::UnknownVariable(v.to_string()))?;
        let mut exps = vec![0; ring.len()];
        exps[i] = 1;
        Ok(Polynomial { ring: ring.clone(), exps, coeffs: vec![Int::ONE] })
    }

    pub fn monomial(ring: &Arc<Ring>, exps: Vec<u16>, c: Int) -> Self {
        assert_eq!(exps.len(), ring.len());
        if c.is_zero() {
            return Self::zero(ring);
        }
        Polynomial { ring: ring.clone(), exps, coeffs: vec![c] }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms(ring: &Arc<Ring>, terms: impl IntoIterator<Item = (Vec<u16>, Int)>) -> Self {
        let mut map: BTreeMap<Vec<u16>, Int> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), ring.len());
            *map.entry(e).or_default() += &c;
        }
        let mut p = Self::zero(ring);
        for (e, c) in map.into_iter().rev() {
            if !c.is_zero() {
                p.exps.extend_from_slice(&e);
                p.coeffs.push(c);
            }
        }
        p
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.len()
    }

    pub fn nterms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn exps(&self, i: usize) -> &[u16] {
        let n = self.nvars();
        &self.exps[i * n..(i + 1) * n]
    }

    pub fn coeff(&self, i: usize) -> &Int {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u16], &Int)> + '_ {
        (0..self.nterms()).map(move |i| (self.exps(i), &self.coeffs[i]))
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.nterms() == 1 && self.exps(0).iter().all(|&e| e == 0))
    }

    /// The constant value, if this polynomial is constant.
    pub fn as_constant(&self) -> Option<Int> {
        if self.is_zero() {
            Some(Int::ZERO)
        } else if self.is_constant() {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.nterms() == 1
    }

    pub fn leading_coeff(&self) -> Int {
        self.coeffs.first().cloned().unwrap_or(Int::ZERO)
    }

    pub fn leading_exps(&self) -> Option<&[u16]> {
        if self.is_zero() {
            None
        } else {
            Some(self.exps(0))
        }
    }

    /// Largest exponent of each variable.
    pub fn degrees(&self) -> Vec<u32> {
        let n = self.nvars();
        let mut d = vec![0u32; n];
        for t in 0..self.nterms() {
            for (v, &e) in self.exps(t).iter().enumerate() {
                d[v] = d[v].max(e as u32);
            }
        }
        d
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms().map(|(e, _)| e[v] as u32).max().unwrap_or(0)
    }

    /// Indices of variables that occur in some term.
    pub fn used_vars(&self) -> Vec<usize> {
        self.degrees().iter().enumerate().filter(|(_, &d)| d > 0).map(|(v, _)| v).collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms().map(|(e, _)| e.iter().map(|&x| x as u32).sum()).max().unwrap_or(0)
    }

    fn term_weight(&self, e: &[u16]) -> u64 {
        e.iter().zip(self.ring.vars()).map(|(&x, v)| x as u64 * v.weight as u64).sum()
    }

    /// Largest weighted degree over the terms; coefficient symbols weigh nothing.
    pub fn weighted_degree(&self) -> Result<u64, SymError> {
        if self.is_zero() {
            return Err(SymError::ZeroPolynomial);
        }
        Ok(self.terms().map(|(e, _)| self.term_weight(e)).max().unwrap_or(0))
    }

    /// Smallest weighted degree over the terms.
    pub fn weighted_low_degree(&self) -> Result<u64, SymError> {
        if self.is_zero() {
            return Err(SymError::ZeroPolynomial);
        }
        Ok(self.terms().map(|(e, _)| self.term_weight(e)).min().unwrap_or(0))
    }

    pub fn is_homogeneous(&self) -> Result<bool, SymError> {
        Ok(self.weighted_degree()? == self.weighted_low_degree()?)
    }

    /// Positive gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> Int {
        let mut g = Int::ZERO;
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Minimum exponent of each variable over all terms.
    pub fn monomial_content(&self) -> Vec<u16> {
        let n = self.nvars();
        if self.is_zero() {
            return vec![0; n];
        }
        let mut m = self.exps(0).to_vec();
        for t in 1..self.nterms() {
            for (v, &e) in self.exps(t).iter().enumerate() {
                m[v] = m[v].min(e);
            }
        }
        m
    }

    pub fn div_monomial(&self, mono: &[u16]) -> Polynomial {
        let n = self.nvars();
        let mut exps = self.exps.clone();
        for chunk in exps.chunks_mut(n) {
            for v in 0..n {
                assert!(chunk[v] >= mono[v], "monomial does not divide");
                chunk[v] -= mono[v];
            }
        }
        Polynomial { ring: self.ring.clone(), exps, coeffs: self.coeffs.clone() }
    }

    pub fn mul_monomial(&self, mono: &[u16]) -> Polynomial {
        let n = self.nvars();
        let mut exps = self.exps.clone();
        for chunk in exps.chunks_mut(n) {
            for v in 0..n {
                chunk[v] = chunk[v].checked_add(mono[v]).expect("exponent overflow");
            }
        }
        Polynomial { ring: self.ring.clone(), exps, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, k: &Int) -> Polynomial {
        if k.is_zero() {
            return Self::zero(&self.ring);
        }
        Polynomial { ring: self.ring.clone(), exps: self.exps.clone(), coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Divides every coefficient by `k`, which must divide them all.
    pub fn div_int_exact(&self, k: &Int) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            exps: self.exps.clone(),
            coeffs: self.coeffs.iter().map(|c| c.div_exact(k)).collect(),
        }
    }

    /// Splits `self = unit * prim` where `prim` has content 1 and a positive
    /// leading coefficient. The zero polynomial yields `(0, 0)`.
    pub fn unit_and_primitive(&self) -> (Int, Polynomial) {
        if self.is_zero() {
            return (Int::ZERO, self.clone());
        }
        let mut c = self.content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        let prim = if c.is_one() { self.clone() } else { self.div_int_exact(&c) };
        (c, prim)
    }

    /// Canonical associate: content 1 and positive leading coefficient.
    pub fn canonical(&self) -> Polynomial {
        self.unit_and_primitive().1
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Self::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn merge(&self, other: &Polynomial, negate_other: bool) -> Polynomial {
        check_ring(&self.ring, &other.ring);
        let n = self.nvars();
        let mut out = Polynomial::zero(&self.ring);
        out.exps.reserve(self.exps.len() + other.exps.len());
        out.coeffs.reserve(self.nterms() + other.nterms());
        let (mut i, mut j) = (0, 0);
        let push = |out: &mut Polynomial, e: &[u16], c: Int| {
            if !c.is_zero() {
                out.exps.extend_from_slice(e);
                out.coeffs.push(c);
            }
        };
        while i < self.nterms() || j < other.nterms() {
            let ord = if i == self.nterms() {
                std::cmp::Ordering::Less
            } else if j == other.nterms() {
                std::cmp::Ordering::Greater
            } else {
                self.exps(i).cmp(other.exps(j))
            };
            match ord {
                std::cmp::Ordering::Greater => {
                    push(&mut out, self.exps(i), self.coeffs[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate_other { -&other.coeffs[j] } else { other.coeffs[j].clone() };
                    push(&mut out, other.exps(j), c);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate_other {
                        &self.coeffs[i] - &other.coeffs[j]
                    } else {
                        &self.coeffs[i] + &other.coeffs[j]
                    };
                    push(&mut out, self.exps(i), c);
                    i += 1;
                    j += 1;
                }
            }
        }
        debug_assert_eq!(out.exps.len(), out.coeffs.len() * n);
        out
    }

    fn mul_impl(&self, other: &Polynomial) -> Polynomial {
        check_ring(&self.ring, &other.ring);
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ring);
        }
        let (a, b) = if self.nterms() <= other.nterms() { (self, other) } else { (other, self) };
        if a.nterms() == 1 {
            // a single term preserves the order of b
            let mono = a.exps(0);
            let c = &a.coeffs[0];
            let mut out = b.mul_monomial(mono);
            if !c.is_one() {
                out.coeffs.iter_mut().for_each(|x| *x = &*x * c);
            }
            return out;
        }
        let n = self.nvars();
        let da = a.degrees();
        let db = b.degrees();
        let bounds: Vec<u32> = da.iter().zip(&db).map(|(x, y)| x + y).collect();
        assert!(bounds.iter().all(|&d| d <= u16::MAX as u32), "exponent overflow");
        if let Some(packer) = Packer::new(&bounds) {
            let ka: Vec<u128> = (0..a.nterms()).map(|i| packer.pack(a.exps(i))).collect();
            let kb: Vec<u128> = (0..b.nterms()).map(|i| packer.pack(b.exps(i))).collect();
            let mut acc: FxHashMap<u128, Int> = FxHashMap::default();
            acc.reserve(b.nterms() * 2);
            for (i, &x) in ka.iter().enumerate() {
                let ca = &a.coeffs[i];
                for (j, &y) in kb.iter().enumerate() {
                    acc.entry(x + y).or_insert(Int::ZERO).add_mul(ca, &b.coeffs[j]);
                }
            }
            let mut terms: Vec<(u128, Int)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            terms.sort_unstable_by_key(|x| std::cmp::Reverse(x.0));
            let mut out = Polynomial::zero(&self.ring);
            out.exps = vec![0; terms.len() * n];
            for (t, (k, _)) in terms.iter().enumerate() {
                packer.unpack(*k, &mut out.exps[t * n..(t + 1) * n]);
            }
            out.coeffs = terms.into_iter().map(|(_, c)| c).collect();
            out
        } else {
            let mut acc: HashMap<Vec<u16>, Int> = HashMap::new();
            let mut buf = vec![0u16; n];
            for i in 0..a.nterms() {
                for j in 0..b.nterms() {
                    for v in 0..n {
                        buf[v] = a.exps(i)[v] + b.exps(j)[v];
                    }
                    match acc.get_mut(buf.as_slice()) {
                        Some(c) => c.add_mul(&a.coeffs[i], &b.coeffs[j]),
                        None => {
                            acc.insert(buf.clone(), &a.coeffs[i] * &b.coeffs[j]);
                        }
                    }
                }
            }
            Polynomial::from_terms(&self.ring, acc)
        }
    }

    /// Exact division: `Some(q)` with `self = q * divisor`, or `None` when
    /// `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        check_ring(&self.ring, &divisor.ring);
        assert!(!divisor.is_zero(), "exact division by the zero polynomial");
        if self.is_zero() {
            return Some(self.clone());
        }
        if let Some(c) = divisor.as_constant() {
            if self.coeffs.iter().all(|x| c.divides(x)) {
                return Some(self.div_int_exact(&c));
            }
            return None;
        }
        let n = self.nvars();
        let ds = self.degrees();
        let dd = divisor.degrees();
        if ds.iter().zip(&dd).any(|(s, d)| d > s) {
            return None;
        }
        let lead = divisor.exps(0);
        if self.exps(0).iter().zip(lead).any(|(s, d)| d > s) {
            return None;
        }
        if divisor.nterms() == 1 {
            let c = &divisor.coeffs[0];
            if !self.coeffs.iter().all(|x| c.divides(x)) {
                return None;
            }
            if (0..self.nterms()).any(|t| self.exps(t).iter().zip(lead).any(|(s, d)| d > s)) {
                return None;
            }
            return Some(self.div_monomial(lead).div_int_exact(c));
        }
        let bound: Vec<u32> = ds.iter().zip(&dd).map(|(s, d)| s - d).collect();
        let packer = Packer::new(&ds);
        let lc = &divisor.coeffs[0];
        let mut quot = Polynomial::zero(&self.ring);
        let mut qe = vec![0u16; n];
        match packer {
            Some(packer) => {
                let dk: Vec<u128> = (0..divisor.nterms()).map(|j| packer.pack(divisor.exps(j))).collect();
                let mut rem: BTreeMap<u128, Int> =
                    (0..self.nterms()).map(|t| (packer.pack(self.exps(t)), self.coeffs[t].clone())).collect();
                let mut re = vec![0u16; n];
                while let Some((k, c)) = rem.pop_last() {
                    packer.unpack(k, &mut re);
                    for v in 0..n {
                        if re[v] < lead[v] || (re[v] - lead[v]) as u32 > bound[v] {
                            return None;
                        }
                        qe[v] = re[v] - lead[v];
                    }
                    if !lc.divides(&c) {
                        return None;
                    }
                    let qc = c.div_exact(lc);
                    let qk = k - dk[0];
                    for j in 1..divisor.nterms() {
                        let key = qk + dk[j];
                        let entry = rem.entry(key).or_insert(Int::ZERO);
                        entry.add_mul(&-&qc, &divisor.coeffs[j]);
                        if entry.is_zero() {
                            rem.remove(&key);
                        }
                    }
                    quot.exps.extend_from_slice(&qe);
                    quot.coeffs.push(qc);
                }
            }
            None => {
                let mut rem: BTreeMap<Vec<u16>, Int> = self.terms().map(|(e, c)| (e.to_vec(), c.clone())).collect();
                while let Some((re, c)) = rem.pop_last() {
                    for v in 0..n {
                        if re[v] < lead[v] || (re[v] - lead[v]) as u32 > bound[v] {
                            return None;
                        }
                        qe[v] = re[v] - lead[v];
                    }
                    if !lc.divides(&c) {
                        return None;
                    }
                    let qc = c.div_exact(lc);
                    for j in 1..divisor.nterms() {
                        let key: Vec<u16> = qe.iter().zip(divisor.exps(j)).map(|(a, b)| a + b).collect();
                        let entry = rem.entry(key.clone()).or_insert(Int::ZERO);
                        entry.add_mul(&-&qc, &divisor.coeffs[j]);
                        if entry.is_zero() {
                            rem.remove(&key);
                        }
                    }
                    quot.exps.extend_from_slice(&qe);
                    quot.coeffs.push(qc);
                }
            }
        }
        Some(quot)
    }

    /// Pseudo-remainder-free view as a polynomial in variable `v`: entry `k`
    /// is the coefficient of `v^k` (with `v` removed from its terms).
    pub fn to_univariate(&self, v: usize) -> Vec<Polynomial> {
        let d = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Vec<u16>, Int)>> = vec![Vec::new(); d + 1];
        for (e, c) in self.terms() {
            let mut e2 = e.to_vec();
            let k = e2[v] as usize;
            e2[v] = 0;
            buckets[k].push((e2, c.clone()));
        }
        buckets
            .into_iter()
            .map(|terms| {
                // terms stay in descending order once v is zeroed within a bucket
                let mut p = Polynomial::zero(&self.ring);
                for (e, c) in terms {
                    p.exps.extend_from_slice(&e);
                    p.coeffs.push(c);
                }
                p
            })
            .collect()
    }

    /// Inverse of [`Polynomial::to_univariate`].
    pub fn from_univariate(ring: &Arc<Ring>, v: usize, coeffs: &[Polynomial]) -> Polynomial {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            for (e, x) in c.terms() {
                let mut e2 = e.to_vec();
                e2[v] += k as u16;
                terms.push((e2, x.clone()));
            }
        }
        Polynomial::from_terms(ring, terms)
    }

    /// Replaces bound variables by polynomials of the same ring.
    pub fn substitute(&self, bindings: &HashMap<Variable, Polynomial>) -> Polynomial {
        let n = self.nvars();
        let bound: Vec<Option<&Polynomial>> = self.ring.vars().iter().map(|v| bindings.get(v)).collect();
        for p in bindings.values() {
            check_ring(&self.ring, &p.ring);
        }
        if bound.iter().all(|b| b.is_none()) {
            return self.clone();
        }
        let degs = self.degrees();
        let mut powers: Vec<Vec<Polynomial>> = vec![Vec::new(); n];
        for v in 0..n {
            if let Some(p) = bound[v] {
                let mut pw = vec![Polynomial::one(&self.ring)];
                for k in 1..=degs[v] as usize {
                    let next = &pw[k - 1] * p;
                    pw.push(next);
                }
                powers[v] = pw;
            }
        }
        let mut acc = Polynomial::zero(&self.ring);
        let mut chunk: Vec<(Vec<u16>, Int)> = Vec::new();
        for (e, c) in self.terms() {
            let mut free = e.to_vec();
            let mut factor = Polynomial::one(&self.ring);
            let mut any = false;
            for v in 0..n {
                if bound[v].is_some() && e[v] > 0 {
                    factor = &factor * &powers[v][e[v] as usize];
                    free[v] = 0;
                    any = true;
                }
            }
            if !any {
                chunk.push((free, c.clone()));
                continue;
            }
            let term = factor.mul_monomial(&free).scale(c);
            acc = &acc + &term;
        }
        &acc + &Polynomial::from_terms(&self.ring, chunk)
    }

    /// Groups terms by the exponents of the variables where `outer` holds.
    /// Each group's coefficient is a polynomial in the remaining variables.
    pub fn collect_by(&self, outer: impl Fn(&Variable) -> bool) -> Vec<(Vec<u16>, Polynomial)> {
        let mask: Vec<bool> = self.ring.vars().iter().map(outer).collect();
        let mut groups: BTreeMap<Vec<u16>, Vec<(Vec<u16>, Int)>> = BTreeMap::new();
        for (e, c) in self.terms() {
            let key: Vec<u16> = e.iter().zip(&mask).map(|(&x, &m)| if m { x } else { 0 }).collect();
            let inner: Vec<u16> = e.iter().zip(&mask).map(|(&x, &m)| if m { 0 } else { x }).collect();
            groups.entry(key).or_default().push((inner, c.clone()));
        }
        groups
            .into_iter()
            .rev()
            .map(|(k, terms)| (k, Polynomial::from_terms(&self.ring, terms)))
            .collect()
    }

    /// Value modulo [`modp::PRIME`] at a point given per variable index.
    pub fn eval_mod(&self, point: &[u64]) -> u64 {
        let tables = power_tables_mod(point, &self.degrees());
        let mut acc = 0u64;
        for (e, c) in self.terms() {
            let mut t = c.rem_u64(modp::PRIME);
            for (v, &x) in e.iter().enumerate() {
                if x > 0 {
                    t = modp::mul(t, tables[v][x as usize]);
                }
            }
            acc = modp::add(acc, t);
        }
        acc
    }

    /// For every variable `x`, the univariate image obtained by evaluating all
    /// other variables at `point` (modulo [`modp::PRIME`]).
    pub fn univariate_images_mod(&self, point: &[u64]) -> Vec<UniPoly> {
        let n = self.nvars();
        let degs = self.degrees();
        let tables = power_tables_mod(point, &degs);
        let mut images: Vec<Vec<u64>> = degs.iter().map(|&d| vec![0u64; d as usize + 1]).collect();
        let mut prefix = vec![0u64; n + 1];
        let mut suffix = vec![0u64; n + 1];
        for (e, c) in self.terms() {
            let cm = c.rem_u64(modp::PRIME);
            prefix[0] = cm;
            for v in 0..n {
                prefix[v + 1] = modp::mul(prefix[v], tables[v][e[v] as usize]);
            }
            suffix[n] = 1;
            for v in (0..n).rev() {
                suffix[v] = modp::mul(suffix[v + 1], tables[v][e[v] as usize]);
            }
            for v in 0..n {
                if degs[v] == 0 {
                    continue;
                }
                let t = modp::mul(prefix[v], suffix[v + 1]);
                let slot = &mut images[v][e[v] as usize];
                *slot = modp::add(*slot, t);
            }
        }
        images.into_iter().map(UniPoly::from_coeffs).collect()
    }

    pub fn eval_rational(&self, point: &[BigRational]) -> BigRational {
        let degs = self.degrees();
        let tables: Vec<Vec<BigRational>> = point
            .iter()
            .zip(&degs)
            .map(|(x, &d)| {
                let mut t = vec![BigRational::one()];
                for k in 1..=d as usize {
                    let next = &t[k - 1] * x;
                    t.push(next);
                }
                t
            })
            .collect();
        let mut acc = BigRational::zero();
        for (e, c) in self.terms() {
            let mut t = BigRational::from_integer(c.to_bigint());
            for (v, &x) in e.iter().enumerate() {
                if x > 0 {
                    t *= &tables[v][x as usize];
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_int(&self, point: &[BigInt]) -> BigInt {
        let q: Vec<BigRational> = point.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        self.eval_rational(&q).to_integer()
    }

    /// Re-expresses this polynomial in a ring containing all its used variables.
    pub fn embed(&self, target: &Arc<Ring>) -> Result<Polynomial, SymError> {
        let map: Vec<Option<usize>> = self.ring.vars().iter().map(|v| target.index_of(v)).collect();
        let degs = self.degrees();
        for (v, m) in map.iter().enumerate() {
            if m.is_none() && degs[v] > 0 {
                return Err(SymError::UnknownVariable(self.ring.var(v).to_string()));
            }
        }
        let terms = self.terms().map(|(e, c)| {
            let mut e2 = vec![0u16; target.len()];
            for (v, &x) in e.iter().enumerate() {
                if let Some(i) = map[v] {
                    e2[i] = x;
                }
            }
            (e2, c.clone())
        });
        Ok(Polynomial::from_terms(target, terms))
    }
}

fn power_tables_mod(point: &[u64], degs: &[u32]) -> Vec<Vec<u64>> {
    point
        .iter()
        .zip(degs)
        .map(|(&x, &d)| {
            let mut t = vec![1u64];
            for k in 1..=d as usize {
                t.push(modp::mul(t[k - 1], x));
            }
            t
        })
        .collect()
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring)
            && self.exps == other.exps
            && self.coeffs == other.coeffs
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.exps.hash(state);
        self.coeffs.hash(state);
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.merge(rhs, false)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.merge(rhs, true)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.mul_impl(rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { ring: self.ring.clone(), exps: self.exps.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (t, (e, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (t, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(v, &x)| {
                    let name = self.ring.var(v).to_string();
                    if x == 1 {
                        name
                    } else {
                        format!("{name}^{x}")
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
