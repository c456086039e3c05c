//! Exact arithmetic in finite fields GF(p^e).
//!
//! Elements are encoded as integers in `0..q`: the base-`p` digits of the
//! code are the coefficients of the element written in the power basis of
//! a fixed monic irreducible modulus (the least one in the digit encoding,
//! so every field has one canonical presentation).  The prime subfield is
//! the codes `0..p`, which makes subfield embeddings of small examples the
//! identity on codes.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};

/// A finite field of order `p^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    p: u64,
    e: u32,
    q: u64,
    /// Monic irreducible modulus, coefficients low-to-high, length `e + 1`.
    modulus: Vec<u64>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FiniteField {
    /// Field of the given prime-power order.
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::Parameter(format!("field order must be >= 2, got {q}")));
        }
        let p = (2..=q).find(|d| q.is_multiple_of(*d)).expect("q >= 2 has a least factor");
        if !is_prime(p) {
            return Err(Error::Parameter(format!("{q} is not a prime power")));
        }
        let mut e = 0u32;
        let mut rest = q;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(Error::Parameter(format!("{q} is not a prime power")));
        }
        Self::prime_power(p, e)
    }

    /// Field of order `p^e` with `p` prime and `e >= 1`.
    pub fn prime_power(p: u64, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Parameter(format!("characteristic {p} is not prime")));
        }
        if e == 0 {
            return Err(Error::Parameter("extension degree must be >= 1".into()));
        }
        let q = p
            .checked_pow(e)
            .ok_or_else(|| Error::Parameter(format!("{p}^{e} overflows the element encoding")))?;
        let modulus = if e == 1 {
            vec![0, 1] // x; unused for prime fields
        } else {
            least_irreducible(p, e)
        };
        Ok(Self { p, e, q, modulus })
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    /// All element codes, ascending.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.q
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn one(&self) -> u64 {
        1
    }

    fn digits(&self, a: u64) -> Vec<u64> {
        let mut out = vec![0u64; self.e as usize];
        let mut a = a;
        for d in out.iter_mut() {
            *d = a % self.p;
            a /= self.p;
        }
        debug_assert_eq!(a, 0, "element code out of range");
        out
    }

    fn encode(&self, digits: &[u64]) -> u64 {
        let mut acc = 0u64;
        for &d in digits.iter().rev() {
            acc = acc * self.p + d % self.p;
        }
        acc
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&sum)
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.e == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let da = self.digits(a);
        let neg: Vec<u64> = da.iter().map(|x| (self.p - x) % self.p).collect();
        self.encode(&neg)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.e == 1 {
            return ((a as u128 * b as u128) % self.p as u128) as u64;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let n = self.e as usize;
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // Reduce by the monic modulus, top down.
        for i in (n..prod.len()).rev() {
            let lead = prod[i];
            if lead == 0 {
                continue;
            }
            prod[i] = 0;
            for (j, &m) in self.modulus.iter().enumerate().take(n) {
                let idx = i - n + j;
                prod[idx] = (prod[idx] + lead * (self.p - m % self.p)) % self.p;
            }
        }
        self.encode(&prod[..n])
    }

    /// `a^n` with `0^0 = 1`.
    pub fn pow(&self, a: u64, mut n: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::Parameter("zero is not invertible".into()));
        }
        Ok(self.pow(a, self.q - 2))
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Image of an integer under the prime-subfield embedding.
    pub fn from_bigint(&self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let mut r = n % &p;
        if r.is_negative() {
            r += &p;
        }
        r.to_u64().expect("residue fits")
    }

    pub fn from_i64(&self, n: i64) -> u64 {
        self.from_bigint(&BigInt::from(n))
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::Parameter("zero has no multiplicative order".into()));
        }
        let mut acc = a;
        let mut order = 1u64;
        while acc != 1 {
            acc = self.mul(acc, a);
            order += 1;
        }
        Ok(order)
    }

    /// The least element (in the code ordering) of multiplicative order
    /// exactly `n`, if `n` divides `q - 1`.
    pub fn root_of_unity(&self, n: u64) -> Option<u64> {
        if n == 0 || !(self.q - 1).is_multiple_of(n) {
            return None;
        }
        (1..self.q).find(|&a| self.element_order(a).expect("nonzero") == n)
    }
}

/// Polynomial remainder of `a` by monic `b` over F_p (coefficient vectors
/// low-to-high).
fn poly_rem(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().expect("nonempty");
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (j, &m) in b.iter().enumerate() {
                let idx = shift + j;
                r[idx] = (r[idx] + lead * (p - m % p)) % p;
            }
        }
        r.pop();
    }
    while r.len() > 1 && *r.last().expect("nonempty") == 0 {
        r.pop();
    }
    r
}

fn poly_is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

/// Least monic irreducible polynomial of degree `e` over F_p, in the
/// base-`p` encoding of its lower coefficients.
fn least_irreducible(p: u64, e: u32) -> Vec<u64> {
    let e = e as usize;
    let count = p.pow(e as u32);
    'candidates: for code in 0..count {
        let mut f = Vec::with_capacity(e + 1);
        let mut c = code;
        for _ in 0..e {
            f.push(c % p);
            c /= p;
        }
        f.push(1);
        // Trial division by every monic polynomial of degree 1..=e/2.
        for d in 1..=e / 2 {
            let divisors = p.pow(d as u32);
            for dcode in 0..divisors {
                let mut g = Vec::with_capacity(d + 1);
                let mut c = dcode;
                for _ in 0..d {
                    g.push(c % p);
                    c /= p;
                }
                g.push(1);
                if poly_is_zero(&poly_rem(p, &f, &g)) {
                    continue 'candidates;
                }
            }
        }
        return f;
    }
    unreachable!("irreducible polynomials exist in every degree");
}
