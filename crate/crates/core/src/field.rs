//! Small prime-power finite fields GF(p^e).
//!
//! Elements are encoded by their index: the coordinates of the element in the
//! polynomial basis `1, x, ..., x^(e-1)` read as base-`p` digits, constant term
//! least significant. Index 0 is zero and index 1 is one; the prime subfield
//! is exactly the indices below `p`.
//!
//! The modulus of GF(p^e) is the monic irreducible polynomial of degree `e`
//! whose lower coefficients, read as a base-`p` number, are smallest. This
//! makes the whole encoding a pure function of `(p, e)`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;

/// Orders up to this bound get a full addition table.
const ADD_TABLE_LIMIT: u32 = 256;

/// A field element, identified by its index in `[0, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^e` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut rest = q;
    let mut e = 0u32;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense polynomials over GF(p), constant term first, no trailing zeros.
pub(crate) mod poly {
    pub type Poly = Vec<u64>;

    pub fn trim(mut a: Poly) -> Poly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        // p is prime: a^(p-2)
        let mut result = 1u64;
        let mut base = a % p;
        let mut exp = p - 2;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        result
    }

    /// Remainder of `a` modulo a nonzero `m`.
    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Poly {
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let dr = r.len() - 1;
            let factor = r[dr] * lead_inv % p;
            let shift = dr - dm;
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - factor * c % p) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Poly {
        rem(&mul(a, b, p), m, p)
    }

    pub fn pow_mod(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Poly {
        let mut result = rem(&[1], m, p);
        let mut b = rem(base, m, p);
        while exp > 0 {
            if exp & 1 == 1 {
                result = mul_mod(&result, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            exp >>= 1;
        }
        result
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
        let mut x = trim(a.to_vec());
        let mut y = trim(b.to_vec());
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// Rabin's test for a monic polynomial of degree `e >= 1`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let e = f.len() - 1;
        let x: Poly = vec![0, 1];
        // frob[k] = x^(p^k) mod f
        let mut frob = vec![rem(&x, f, p)];
        for _ in 0..e {
            let next = pow_mod(frob.last().unwrap(), p, f, p);
            frob.push(next);
        }
        if frob[e] != rem(&x, f, p) {
            return false;
        }
        super::prime_factors(e as u64).into_iter().all(|l| {
            let g = sub(&frob[e / l as usize], &x, p);
            gcd(f, &g, p).len() == 1
        })
    }
}

/// The field GF(p^e), immutable after construction.
#[derive(Clone)]
pub struct FiniteField {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteField")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

impl FiniteField {
    /// Builds GF(p^e) with the smallest monic irreducible modulus.
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if e == 0 {
            return Err(Error::ZeroExponent);
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(Error::FieldTooLarge { p, e })?;

        let modulus = smallest_irreducible(p, e as usize);
        let prim = find_primitive(p, q, &modulus);

        let qq = q as usize;
        let mut exp = vec![0u32; qq - 1];
        let mut log = vec![0u32; qq];
        let mut cur: poly::Poly = vec![1];
        for (i, slot) in exp.iter_mut().enumerate() {
            let idx = poly_to_index(&cur, p);
            *slot = idx as u32;
            log[idx as usize] = i as u32;
            cur = poly::mul_mod(&cur, &prim, &modulus, p);
        }

        let mut field = FiniteField {
            p: p as u32,
            e,
            q: q as u32,
            modulus: modulus.iter().map(|&c| c as u32).collect(),
            exp,
            log,
            add_table: None,
        };
        if field.q <= ADD_TABLE_LIMIT {
            let mut table = vec![0u32; qq * qq];
            for a in 0..field.q {
                for b in 0..field.q {
                    table[(a * field.q + b) as usize] = field.add_digits(a, b);
                }
            }
            field.add_table = Some(table);
        }
        Ok(field)
    }

    /// Builds the field of order `q`, which must be a prime power.
    pub fn with_order(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p, e)
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.e
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn is_even(&self) -> bool {
        self.p == 2
    }

    /// Modulus coefficients, constant term first; the last entry is 1.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elem(&self, index: u64) -> Result<Elem> {
        if index < self.q as u64 {
            Ok(Elem(index as u32))
        } else {
            Err(Error::InvalidElement {
                index,
                q: self.q as u64,
            })
        }
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.q).map(Elem)
    }

    /// The prime-field element `n mod p`.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.p as i64) as u32)
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let mut out = 0u32;
        let mut place = 1u32;
        while a > 0 || b > 0 {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.add_table {
            Some(t) => Elem(t[(a.0 * self.q + b.0) as usize]),
            None => Elem(self.add_digits(a.0, b.0)),
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        let mut x = a.0;
        let mut out = 0u32;
        let mut place = 1u32;
        while x > 0 {
            let d = x % self.p;
            out += ((self.p - d) % self.p) * place;
            place *= self.p;
            x /= self.p;
        }
        Elem(out)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let s = self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64;
        Elem(self.exp[(s % (self.q as u64 - 1)) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::InverseOfZero);
        }
        let n = self.q - 1;
        Ok(Elem(self.exp[((n - self.log[a.0 as usize]) % n) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, n: u64) -> Elem {
        if n == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let order = self.q as u64 - 1;
        let l = self.log[a.0 as usize] as u64 % order;
        Elem(self.exp[((l * (n % order)) % order) as usize])
    }

    #[inline]
    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    /// Absolute trace `a + a^p + ... + a^(p^(e-1))`, an element of GF(p).
    pub fn trace(&self, a: Elem) -> Elem {
        let mut acc = Elem::ZERO;
        let mut cur = a;
        for _ in 0..self.e {
            acc = self.add(acc, cur);
            cur = self.pow(cur, self.p as u64);
        }
        acc
    }

    /// Quadratic character: 0 at zero, +1 on nonzero squares, -1 otherwise.
    pub fn quadratic_character(&self, a: Elem) -> Result<i8> {
        if self.is_even() {
            return Err(Error::EvenCharacteristic);
        }
        if a.is_zero() {
            return Ok(0);
        }
        let t = self.pow(a, (self.q as u64 - 1) / 2);
        Ok(if t == Elem::ONE { 1 } else { -1 })
    }

    pub fn smallest_nonsquare(&self) -> Result<Elem> {
        if self.is_even() {
            return Err(Error::EvenCharacteristic);
        }
        for a in self.elements() {
            if self.quadratic_character(a)? == -1 {
                return Ok(a);
            }
        }
        unreachable!("every odd-order field has nonsquares")
    }

    pub fn smallest_trace_one(&self) -> Result<Elem> {
        if !self.is_even() {
            return Err(Error::OddCharacteristic);
        }
        self.elements()
            .skip(1)
            .find(|&a| self.trace(a) == Elem::ONE)
            .ok_or_else(|| Error::Inconsistent("no element of trace one".into()))
    }

    /// Square root in characteristic 2, where squaring is a bijection.
    pub fn sqrt_even(&self, a: Elem) -> Result<Elem> {
        if !self.is_even() {
            return Err(Error::OddCharacteristic);
        }
        Ok(self.pow(a, self.q as u64 / 2))
    }
}

fn poly_to_index(f: &[u64], p: u64) -> u64 {
    f.iter().rev().fold(0u64, |acc, &c| acc * p + c)
}

fn index_to_poly(mut idx: u64, p: u64) -> poly::Poly {
    let mut out = Vec::new();
    while idx > 0 {
        out.push(idx % p);
        idx /= p;
    }
    out
}

fn smallest_irreducible(p: u64, e: usize) -> poly::Poly {
    let lower = p.pow(e as u32);
    for low in 0..lower {
        let mut f = index_to_poly(low, p);
        f.resize(e, 0);
        f.push(1);
        if poly::is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn find_primitive(p: u64, q: u64, modulus: &[u64]) -> poly::Poly {
    if q == 2 {
        return vec![1];
    }
    let factors = prime_factors(q - 1);
    (2..q)
        .map(|idx| index_to_poly(idx, p))
        .find(|g| {
            factors
                .iter()
                .all(|&l| poly::pow_mod(g, (q - 1) / l, modulus, p) != vec![1])
        })
        .expect("the multiplicative group is cyclic")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Irreducibility by exhaustive trial division, independent of Rabin's test.
    fn irreducible_by_trial(f: &[u64], p: u64) -> bool {
        let e = f.len() - 1;
        for d in 1..=e / 2 {
            for low in 0..p.pow(d as u32) {
                let mut g = index_to_poly(low, p);
                g.resize(d, 0);
                g.push(1);
                if poly::rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn rabin_matches_trial_division() {
        for (p, e) in [(2u64, 2usize), (2, 3), (2, 4), (2, 6), (3, 2), (3, 3), (5, 2), (2, 8)] {
            for low in 0..p.pow(e as u32) {
                let mut f = index_to_poly(low, p);
                f.resize(e, 0);
                f.push(1);
                assert_eq!(
                    poly::is_irreducible(&f, p),
                    irreducible_by_trial(&f, p),
                    "p={p} f={f:?}"
                );
            }
        }
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(64), Some((2, 6)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(12), None);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FiniteField::new(4, 1).unwrap_err(), Error::NonPrime(4));
        assert_eq!(FiniteField::new(2, 0).unwrap_err(), Error::ZeroExponent);
        assert_eq!(
            FiniteField::new(2, 21).unwrap_err(),
            Error::FieldTooLarge { p: 2, e: 21 }
        );
        assert_eq!(
            FiniteField::with_order(10).unwrap_err(),
            Error::NotPrimePower(10)
        );
    }

    #[test]
    fn moduli() {
        assert_eq!(FiniteField::new(2, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(FiniteField::new(3, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(FiniteField::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FiniteField::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(FiniteField::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn worked_arithmetic() {
        let gf3 = FiniteField::new(3, 1).unwrap();
        assert_eq!(gf3.add(Elem(1), Elem(2)), Elem(0));
        let gf4 = FiniteField::new(2, 2).unwrap();
        assert_eq!(gf4.mul(Elem(2), Elem(2)), Elem(3));
        let gf5 = FiniteField::new(5, 1).unwrap();
        assert_eq!(gf5.inv(Elem(2)).unwrap(), Elem(3));
        assert_eq!(gf5.inv(Elem(0)).unwrap_err(), Error::InverseOfZero);
        // x * x = x^2 = -1 in GF(9) = GF(3)[x]/(x^2+1)
        let gf9 = FiniteField::new(3, 2).unwrap();
        assert_eq!(gf9.mul(Elem(3), Elem(3)), Elem(2));
    }

    #[test]
    fn traces_and_characters() {
        let gf2 = FiniteField::new(2, 1).unwrap();
        assert_eq!(gf2.trace(Elem(1)), Elem(1));
        let gf4 = FiniteField::new(2, 2).unwrap();
        assert_eq!(gf4.trace(Elem(2)), Elem(1));
        assert_eq!(gf4.trace(Elem(1)), Elem(0));

        let gf3 = FiniteField::new(3, 1).unwrap();
        assert_eq!(gf3.quadratic_character(Elem(1)).unwrap(), 1);
        assert_eq!(gf3.quadratic_character(Elem(2)).unwrap(), -1);
        assert_eq!(gf3.quadratic_character(Elem(0)).unwrap(), 0);
        let gf5 = FiniteField::new(5, 1).unwrap();
        assert_eq!(gf5.quadratic_character(Elem(4)).unwrap(), 1);
        assert_eq!(
            gf4.quadratic_character(Elem(1)).unwrap_err(),
            Error::EvenCharacteristic
        );
    }

    #[test]
    fn special_elements() {
        let gf3 = FiniteField::new(3, 1).unwrap();
        assert_eq!(gf3.smallest_nonsquare().unwrap(), Elem(2));
        let gf5 = FiniteField::new(5, 1).unwrap();
        assert_eq!(gf5.smallest_nonsquare().unwrap(), Elem(2));

        // GF(9): squares found by squaring every element
        let gf9 = FiniteField::new(3, 2).unwrap();
        let squares: Vec<Elem> = gf9.elements().map(|a| gf9.square(a)).collect();
        let expected = gf9
            .elements()
            .find(|a| !squares.contains(a))
            .unwrap();
        assert_eq!(gf9.smallest_nonsquare().unwrap(), expected);

        assert_eq!(FiniteField::new(2, 1).unwrap().smallest_trace_one().unwrap(), Elem(1));
        assert_eq!(FiniteField::new(2, 2).unwrap().smallest_trace_one().unwrap(), Elem(2));
        let gf8 = FiniteField::new(2, 3).unwrap();
        let expected = (1..8)
            .map(Elem)
            .find(|&a| {
                let a2 = gf8.mul(a, a);
                let a4 = gf8.mul(a2, a2);
                gf8.add(gf8.add(a, a2), a4) == Elem::ONE
            })
            .unwrap();
        assert_eq!(gf8.smallest_trace_one().unwrap(), expected);
        assert_eq!(gf3.smallest_trace_one().unwrap_err(), Error::OddCharacteristic);
    }

    #[test]
    fn sqrt_in_characteristic_two() {
        let gf8 = FiniteField::new(2, 3).unwrap();
        for a in gf8.elements() {
            let r = gf8.sqrt_even(a).unwrap();
            assert_eq!(gf8.square(r), a);
        }
    }
}
