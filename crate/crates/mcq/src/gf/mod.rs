//! Finite fields GF(p^e) with e = a*m, seen as degree-m extensions of GF(q), q = p^a.
//!
//! Elements are plain integers: the base-p digits of an element are the
//! coefficients (lowest degree first) of its polynomial representative.

mod fp;
pub mod poly;

pub use poly::{is_squarefree, poly_roots, random_irreducible, Poly};

use crate::error::{Error, Result};

pub type Elt = u32;

/// Largest field that gets log/antilog tables.
const TABLE_LIMIT: u32 = 1 << 16;
/// Odd-characteristic fields up to this size also get an addition table.
const ADD_TABLE_LIMIT: u32 = 256;

#[derive(Clone, Debug)]
pub struct FieldCtx {
    p: u32,
    a: u32,
    m: u32,
    e: u32,
    size: u32,
    q: u32,
    modulus: Vec<u32>,
    pw: Vec<u32>,
    modbits: u64,
    log: Vec<u32>,
    exp: Vec<u32>,
    gen: Elt,
    add_tab: Vec<u32>,
}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
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

impl FieldCtx {
    /// GF(p^(a*m)) viewed over GF(p^a).
    pub fn new(p: u32, a: u32, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParams(format!("p = {p} is not prime")));
        }
        if a == 0 || m == 0 {
            return Err(Error::InvalidParams("a and m must be positive".into()));
        }
        let e = a * m;
        if (e as f64) * (p as f64).log2() > 24.0 + 1e-9 {
            return Err(Error::InvalidParams(format!(
                "field GF({p}^{e}) exceeds 2^24 elements"
            )));
        }
        let size = p.pow(e);
        let q = p.pow(a);
        let modulus = fp::lowest_irreducible(p, e);
        let pw: Vec<u32> = (0..=e).map(|i| p.pow(i)).collect();
        let modbits = if p == 2 {
            modulus.iter().enumerate().map(|(i, &c)| (c as u64) << i).sum()
        } else {
            0
        };
        let mut ctx = FieldCtx {
            p,
            a,
            m,
            e,
            size,
            q,
            modulus,
            pw,
            modbits,
            log: Vec::new(),
            exp: Vec::new(),
            gen: 1,
            add_tab: Vec::new(),
        };
        if p != 2 && size <= ADD_TABLE_LIMIT {
            let mut t = vec![0u32; (size * size) as usize];
            for x in 0..size {
                for y in 0..size {
                    t[(x * size + y) as usize] = ctx.add_digits(x, y);
                }
            }
            ctx.add_tab = t;
        }
        ctx.gen = ctx.find_generator();
        if size <= TABLE_LIMIT {
            let n = (size - 1) as usize;
            let mut exp = vec![0u32; 2 * n.max(1)];
            let mut log = vec![0u32; size as usize];
            let mut x = 1u32;
            for i in 0..n {
                exp[i] = x;
                log[x as usize] = i as u32;
                x = ctx.mul_slow(x, ctx.gen);
            }
            for i in n..2 * n {
                exp[i] = exp[i - n];
            }
            ctx.exp = exp;
            ctx.log = log;
        }
        Ok(ctx)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn a(&self) -> u32 {
        self.a
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    /// Degree of the full field over its prime field.
    pub fn degree(&self) -> u32 {
        self.e
    }
    pub fn size(&self) -> u32 {
        self.size
    }
    /// Size of the subfield GF(q).
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    /// The primitive element used for the log tables.
    pub fn generator(&self) -> Elt {
        self.gen
    }
    pub fn has_tables(&self) -> bool {
        !self.exp.is_empty()
    }
    pub fn elements(&self) -> impl Iterator<Item = Elt> {
        0..self.size
    }

    fn add_digits(&self, x: Elt, y: Elt) -> Elt {
        let p = self.p;
        let (mut x, mut y) = (x, y);
        let mut out = 0;
        let mut base = 1;
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * base;
            x /= p;
            y /= p;
            base *= p;
        }
        out
    }

    fn neg_digits(&self, x: Elt) -> Elt {
        let p = self.p;
        let mut x = x;
        let mut out = 0;
        let mut base = 1;
        while x > 0 {
            out += ((p - x % p) % p) * base;
            x /= p;
            base *= p;
        }
        out
    }

    #[inline]
    pub fn add(&self, x: Elt, y: Elt) -> Elt {
        if self.p == 2 {
            x ^ y
        } else if !self.add_tab.is_empty() {
            self.add_tab[(x * self.size + y) as usize]
        } else {
            self.add_digits(x, y)
        }
    }

    #[inline]
    pub fn neg(&self, x: Elt) -> Elt {
        if self.p == 2 {
            x
        } else {
            self.neg_digits(x)
        }
    }

    #[inline]
    pub fn sub(&self, x: Elt, y: Elt) -> Elt {
        if self.p == 2 {
            x ^ y
        } else {
            self.add(x, self.neg(y))
        }
    }

    #[inline]
    pub fn mul(&self, x: Elt, y: Elt) -> Elt {
        if x == 0 || y == 0 {
            return 0;
        }
        if !self.exp.is_empty() {
            let l = self.log[x as usize] + self.log[y as usize];
            return self.exp[l as usize];
        }
        self.mul_slow(x, y)
    }

    /// Polynomial product reduced by the modulus, no tables.
    pub fn mul_slow(&self, x: Elt, y: Elt) -> Elt {
        if self.p == 2 {
            let (x, y) = (x as u64, y as u64);
            let mut acc = 0u64;
            for i in 0..self.e {
                if (y >> i) & 1 == 1 {
                    acc ^= x << i;
                }
            }
            for i in (self.e..2 * self.e).rev() {
                if (acc >> i) & 1 == 1 {
                    acc ^= self.modbits << (i - self.e);
                }
            }
            return acc as Elt;
        }
        let p = self.p as u64;
        let e = self.e as usize;
        let dx = self.digits(x);
        let dy = self.digits(y);
        let mut prod = vec![0u64; 2 * e];
        for i in 0..e {
            if dx[i] == 0 {
                continue;
            }
            for j in 0..e {
                prod[i + j] = (prod[i + j] + dx[i] as u64 * dy[j] as u64) % p;
            }
        }
        for i in (e..2 * e).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for j in 0..=e {
                let t = c * self.modulus[j] as u64 % p;
                prod[i - e + j] = (prod[i - e + j] + p - t) % p;
            }
        }
        let mut out = 0u32;
        for i in 0..e {
            out += prod[i] as u32 * self.pw[i];
        }
        out
    }

    /// Base-p digits, lowest first, exactly `e` of them.
    pub fn digits(&self, x: Elt) -> Vec<u32> {
        let mut x = x;
        (0..self.e)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, d: &[u32]) -> Elt {
        d.iter().zip(&self.pw).map(|(&c, &b)| (c % self.p) * b).sum()
    }

    fn pow_slow(&self, x: Elt, mut k: u64) -> Elt {
        let mut base = x;
        let mut acc = 1;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            k >>= 1;
        }
        acc
    }

    fn find_generator(&self) -> Elt {
        if self.size == 2 {
            return 1;
        }
        let order = (self.size - 1) as u64;
        let fs = prime_factors(order);
        (2..self.size)
            .find(|&g| fs.iter().all(|&l| self.pow_slow(g, order / l) != 1))
            .expect("multiplicative group is cyclic")
    }

    pub fn pow(&self, x: Elt, k: u64) -> Elt {
        if k == 0 {
            return 1;
        }
        if x == 0 {
            return 0;
        }
        let order = (self.size - 1) as u64;
        let k = k % order;
        if !self.exp.is_empty() {
            let l = (self.log[x as usize] as u64 * k) % order;
            return self.exp[l as usize];
        }
        self.pow_slow(x, k)
    }

    pub fn inv(&self, x: Elt) -> Result<Elt> {
        if x == 0 {
            return Err(Error::DivByZero);
        }
        if !self.exp.is_empty() {
            let order = self.size - 1;
            return Ok(self.exp[((order - self.log[x as usize]) % order) as usize]);
        }
        Ok(self.pow_slow(x, self.size as u64 - 2))
    }

    pub fn div(&self, x: Elt, y: Elt) -> Result<Elt> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// x^(q^j), with j taken mod m.
    pub fn frobenius(&self, x: Elt, j: u32) -> Elt {
        let j = j % self.m;
        if j == 0 || x == 0 {
            return x;
        }
        let order = (self.size - 1) as u64;
        let mut k = 1u64;
        for _ in 0..j {
            k = k * self.q as u64 % order;
        }
        if k == 0 {
            k = order;
        }
        self.pow(x, k)
    }

    /// Membership in GF(q).
    pub fn in_subfield(&self, x: Elt) -> bool {
        self.frobenius(x, 1) == x
    }

    /// Elements of GF(q), in increasing integer order.
    pub fn subfield_elements(&self) -> Vec<Elt> {
        self.elements().filter(|&x| self.in_subfield(x)).collect()
    }

    /// Relative trace down to GF(q).
    pub fn trace(&self, x: Elt) -> Elt {
        let mut acc = 0;
        let mut y = x;
        for _ in 0..self.m {
            acc = self.add(acc, y);
            y = self.pow(y, self.q as u64);
        }
        acc
    }

    /// Embed the prime-field integer `c` (reduced mod p).
    pub fn from_int(&self, c: u64) -> Elt {
        (c % self.p as u64) as Elt
    }

    pub fn sum<I: IntoIterator<Item = Elt>>(&self, it: I) -> Elt {
        it.into_iter().fold(0, |a, b| self.add(a, b))
    }

    pub fn dot(&self, u: &[Elt], v: &[Elt]) -> Elt {
        u.iter()
            .zip(v)
            .fold(0, |a, (&x, &y)| self.add(a, self.mul(x, y)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_arithmetic() {
        let f = FieldCtx::new(2, 2, 1).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        // z * z = z + 1
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.mul(2, 3), 1);
        assert_eq!(f.inv(3).unwrap(), 2);
    }

    #[test]
    fn gf256_uses_lowest_modulus() {
        let f = FieldCtx::new(2, 8, 1).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 0, 1, 1, 0, 0, 0, 1]);
        assert_eq!(f.mul(0x57, 0x83), 0xc1);
    }

    #[test]
    fn odd_fields() {
        let f = FieldCtx::new(3, 1, 2).unwrap();
        assert_eq!(f.size(), 9);
        assert_eq!(f.q(), 3);
        assert_eq!(f.subfield_elements(), vec![0, 1, 2]);
        for x in 1..9 {
            assert_eq!(f.mul(x, f.inv(x).unwrap()), 1);
            assert_eq!(f.add(x, f.neg(x)), 0);
        }
        let g = FieldCtx::new(7, 1, 2).unwrap();
        for x in g.elements() {
            assert_eq!(g.pow(x, 49), x);
        }
    }

    #[test]
    fn table_and_slow_paths_agree() {
        for &(p, e) in &[(2u32, 8u32), (3, 4), (5, 3), (2, 16)] {
            let f = FieldCtx::new(p, e, 1).unwrap();
            let step = (f.size() / 97).max(1);
            for x in (0..f.size()).step_by(step as usize) {
                for y in (0..f.size()).step_by((step * 3) as usize) {
                    assert_eq!(f.mul(x, y), f.mul_slow(x, y));
                }
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = FieldCtx::new(2, 1, 20).unwrap();
        assert!(!f.has_tables());
        let x = 123_456;
        assert_eq!(f.mul(x, f.inv(x).unwrap()), 1);
        assert_eq!(f.frobenius(x, 20), x);
        assert!(FieldCtx::new(2, 5, 5).is_err());
        assert!(FieldCtx::new(4, 1, 1).is_err());
    }

    #[test]
    fn frobenius_and_subfield() {
        let f = FieldCtx::new(2, 2, 3).unwrap();
        assert_eq!(f.subfield_elements().len(), 4);
        for x in f.elements() {
            assert_eq!(f.frobenius(x, 3), x);
            assert!(f.in_subfield(f.trace(x)));
            assert_eq!(
                f.frobenius(f.frobenius(x, 1), 1),
                f.frobenius(x, 2)
            );
        }
    }
}
