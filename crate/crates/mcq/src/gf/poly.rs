//! Univariate polynomials over a `FieldCtx`, lowest coefficient first.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{prime_factors, Elt, FieldCtx};
use crate::error::{Error, Result};

/// Trimmed coefficient vector; the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Poly(pub Vec<Elt>);

impl Poly {
    pub fn new(mut c: Vec<Elt>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly(c)
    }
    pub fn zero() -> Self {
        Poly(Vec::new())
    }
    pub fn one() -> Self {
        Poly(vec![1])
    }
    /// The monomial z.
    pub fn z() -> Self {
        Poly(vec![0, 1])
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    pub fn deg(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }
    pub fn lead(&self) -> Elt {
        *self.0.last().unwrap_or(&0)
    }
    pub fn coeffs(&self) -> &[Elt] {
        &self.0
    }

    pub fn eval(&self, f: &FieldCtx, x: Elt) -> Elt {
        self.0.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, f: &FieldCtx, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let c = (0..n)
            .map(|i| {
                let a = *self.0.get(i).unwrap_or(&0);
                let b = *o.0.get(i).unwrap_or(&0);
                f.add(a, b)
            })
            .collect();
        Poly::new(c)
    }

    pub fn sub(&self, f: &FieldCtx, o: &Poly) -> Poly {
        self.add(f, &o.scale(f, f.neg(1)))
    }

    pub fn scale(&self, f: &FieldCtx, c: Elt) -> Poly {
        Poly::new(self.0.iter().map(|&x| f.mul(x, c)).collect())
    }

    pub fn mul(&self, f: &FieldCtx, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![0; self.0.len() + o.0.len() - 1];
        for (i, &x) in self.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in o.0.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(x, y));
            }
        }
        Poly::new(c)
    }

    pub fn divrem(&self, f: &FieldCtx, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.deg().ok_or(Error::DivByZero)?;
        let inv = f.inv(d.lead())?;
        let mut r = self.0.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut qc = vec![0; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = f.mul(r[i], inv);
            if c == 0 {
                continue;
            }
            qc[i - dd] = c;
            for j in 0..=dd {
                r[i - dd + j] = f.sub(r[i - dd + j], f.mul(c, d.0[j]));
            }
        }
        r.truncate(dd);
        Ok((Poly::new(qc), Poly::new(r)))
    }

    pub fn rem(&self, f: &FieldCtx, d: &Poly) -> Result<Poly> {
        Ok(self.divrem(f, d)?.1)
    }

    pub fn monic(&self, f: &FieldCtx) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(f, f.inv(self.lead()).expect("nonzero lead"))
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, f: &FieldCtx, o: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(f, &b).expect("b nonzero");
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn derivative(&self, f: &FieldCtx) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(c, f.from_int(i as u64)))
                .collect(),
        )
    }

    /// self^k mod m.
    pub fn pow_mod(&self, f: &FieldCtx, mut k: u64, m: &Poly) -> Result<Poly> {
        let mut base = self.rem(f, m)?;
        let mut acc = Poly::one().rem(f, m)?;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(f, &base).rem(f, m)?;
            }
            base = base.mul(f, &base).rem(f, m)?;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Product of (z - r) over the given roots.
    pub fn from_roots(f: &FieldCtx, roots: &[Elt]) -> Poly {
        roots.iter().fold(Poly::one(), |acc, &r| {
            acc.mul(f, &Poly::new(vec![f.neg(r), 1]))
        })
    }
}

/// z^(Q^k) mod g, Q the full field size.
fn z_pow_qk(f: &FieldCtx, g: &Poly, k: u32) -> Result<Poly> {
    let mut cur = Poly::z().rem(f, g)?;
    for _ in 0..k {
        cur = cur.pow_mod(f, f.size() as u64, g)?;
    }
    Ok(cur)
}

/// Rabin's test over the full field.
pub fn is_irreducible(f: &FieldCtx, g: &Poly) -> Result<bool> {
    let d = match g.deg() {
        None | Some(0) => return Ok(false),
        Some(1) => return Ok(true),
        Some(d) => d as u32,
    };
    if !z_pow_qk(f, g, d)?.sub(f, &Poly::z()).is_zero() {
        return Ok(false);
    }
    for l in prime_factors(d as u64) {
        let h = z_pow_qk(f, g, d / l as u32)?.sub(f, &Poly::z());
        if g.gcd(f, &h).deg() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_squarefree(f: &FieldCtx, g: &Poly) -> bool {
    if g.is_zero() {
        return false;
    }
    g.gcd(f, &g.derivative(f)).deg() == Some(0)
}

/// Random monic irreducible of degree r, by rejection sampling.
pub fn random_irreducible(f: &FieldCtx, r: usize, seed: u64) -> Result<Poly> {
    if r == 0 {
        return Err(Error::InvalidParams("degree must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = 64 * r * f.degree() as usize;
    for _ in 0..cap {
        let mut c: Vec<Elt> = (0..r).map(|_| rng.gen_range(0..f.size())).collect();
        c.push(1);
        let g = Poly::new(c);
        if is_irreducible(f, &g)? {
            return Ok(g);
        }
    }
    Err(Error::RetryCap(format!(
        "no irreducible of degree {r} after {cap} draws"
    )))
}

/// Distinct roots in the full field, sorted.
pub fn poly_roots(f: &FieldCtx, g: &Poly) -> Vec<Elt> {
    match g.deg() {
        None => return f.elements().collect(),
        Some(0) => return Vec::new(),
        _ => {}
    }
    if f.size() <= 1 << 16 {
        return f.elements().filter(|&x| g.eval(f, x) == 0).collect();
    }
    let zq = z_pow_qk(f, g, 1).expect("g nonzero");
    let split = g.gcd(f, &zq.sub(f, &Poly::z()));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    equal_degree_split(f, &split, &mut rng, &mut out);
    out.sort_unstable();
    out
}

/// Split a product of distinct linear factors.
fn equal_degree_split(f: &FieldCtx, g: &Poly, rng: &mut ChaCha8Rng, out: &mut Vec<Elt>) {
    match g.deg() {
        None | Some(0) => return,
        Some(1) => {
            let g = g.monic(f);
            out.push(f.neg(g.0[0]));
            return;
        }
        _ => {}
    }
    loop {
        let d = g.deg().unwrap();
        let a = Poly::new((0..d).map(|_| rng.gen_range(0..f.size())).collect());
        if a.deg().unwrap_or(0) == 0 {
            continue;
        }
        let h = if f.p() == 2 {
            let mut t = a.rem(f, g).unwrap();
            let mut acc = t.clone();
            for _ in 1..f.degree() {
                t = t.mul(f, &t).rem(f, g).unwrap();
                acc = acc.add(f, &t);
            }
            acc
        } else {
            let e = (f.size() as u64 - 1) / 2;
            a.pow_mod(f, e, g).unwrap().sub(f, &Poly::one())
        };
        let c = g.gcd(f, &h);
        let dc = c.deg().unwrap_or(0);
        if dc > 0 && dc < d {
            let other = g.divrem(f, &c).unwrap().0;
            equal_degree_split(f, &c, rng, out);
            equal_degree_split(f, &other, rng, out);
            return;
        }
    }
}
