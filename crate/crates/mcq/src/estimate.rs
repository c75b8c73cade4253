//! Closed-form predicates and cost estimates.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::CodeKind;
use crate::pfaffian::{big_binom, dreg_random};

/// log2 of a positive big integer.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 60 {
        return (x.to_u64().unwrap() as f64).log2();
    }
    let top = (x >> (bits - 60)).to_u64().unwrap() as f64;
    top.log2() + (bits - 60) as f64
}

/// Largest e with q^e <= v (v >= 1).
fn ilog(q: u64, v: u64) -> u32 {
    let mut e = 0;
    let mut p = q;
    while p <= v {
        e += 1;
        p *= q;
    }
    e
}

fn c2(n: i128) -> i128 {
    n * (n - 1) / 2
}

/// Twice the MT22 expression for dim of the square of the extended dual.
fn mt22_twice(q: u64, m: u32, r: usize, kind: CodeKind) -> Result<i128> {
    let (q, m, r) = (q as i128, m as i128, r as i128);
    let s = r * m;
    match kind {
        CodeKind::Goppa if r < q - 1 => Ok(2 * c2(s + 1) - m * (r - 1) * (r - 2)),
        CodeKind::Goppa => {
            let base = (q - 1) * (q - 1);
            let mut i = 0u32;
            while base * q.pow(i) < r {
                i += 1;
            }
            let eg = i as i128 + 1;
            let inner = (2 * eg + 1) * r - 2 * (q - 1) * q.pow(eg as u32 - 1) - 1;
            Ok(2 * c2(s + 1) - m * r * inner)
        }
        _ => {
            if r < 2 {
                return Err(Error::InvalidParams("alternant formula needs r >= 2".into()));
            }
            let ea = ilog(q as u64, (r - 1) as u64) as u32;
            let geo = (q.pow(ea + 1) - 1) / (q - 1);
            Ok(2 * c2(s + 1) - m * (r - 1) * ((2 * ea as i128 + 1) * r - 2 * geo))
        }
    }
}

/// The square of the extended dual has dimension below n.
pub fn square_dist_alternant(q: u64, m: u32, r: usize, n: usize) -> Result<bool> {
    Ok(2 * n as i128 > mt22_twice(q, m, r, CodeKind::Alternant)?)
}

pub fn square_dist_goppa(q: u64, m: u32, r: usize, n: usize) -> Result<bool> {
    Ok(2 * n as i128 > mt22_twice(q, m, r, CodeKind::Goppa)?)
}

/// min(n, expression), the expression rounded down.
pub fn mt22_sq_dual_bound(q: u64, m: u32, r: usize, n: usize, kind: CodeKind) -> Result<i128> {
    let t = mt22_twice(q, m, r, kind)?;
    Ok((n as i128).min(t.div_euclid(2)))
}

fn pow_big(q: u64, e: u64) -> BigUint {
    num_traits::pow(BigUint::from(q), e as usize)
}

fn ratio_product(q: u64, t: usize, rank: usize, num_pow: impl Fn(u64) -> u64) -> BigUint {
    let s = rank / 2;
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 1..=s as u64 {
        num *= pow_big(q, num_pow(i));
        den *= pow_big(q, 2 * i) - 1u32;
    }
    for i in 0..rank as u64 {
        num *= pow_big(q, t as u64 - i) - 1u32;
    }
    num / den
}

/// Symmetric t x t matrices of the given rank over GF(q).
pub fn count_sym_rank(t: usize, rank: usize, q: u64) -> BigUint {
    if rank > t {
        return BigUint::zero();
    }
    ratio_product(q, t, rank, |i| 2 * i)
}

/// Alternating t x t matrices of the given rank over GF(q).
pub fn count_skew_rank(t: usize, rank: usize, q: u64) -> BigUint {
    if rank > t || rank % 2 == 1 {
        return BigUint::zero();
    }
    ratio_product(q, t, rank, |i| 2 * i - 2)
}

/// Whether a random code is expected to contain matrices of rank <= d.
pub fn gv_rank_threshold(n: usize, rm: usize, d: usize, skew: bool) -> Result<bool> {
    if c2(rm as i128 + 1) <= n as i128 {
        return Err(Error::InvalidParams("need C(rm+1, 2) > n".into()));
    }
    let (n, rm, d) = (n as i128, rm as i128, d as i128);
    Ok(if skew { n <= (d + 1) * rm - c2(d + 1) } else { n <= d * rm - c2(d) })
}

fn mobius(mut n: usize) -> i32 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Monic irreducibles of degree r over GF(Q).
pub fn irreducible_count(big_q: &BigUint, r: usize) -> BigUint {
    let mut acc = BigInt::zero();
    for a in (1..=r).filter(|a| r % a == 0) {
        let term = BigInt::from(num_traits::pow(big_q.clone(), r / a));
        match mobius(a) {
            1 => acc += term,
            -1 => acc -= term,
            _ => {}
        }
    }
    (acc / BigInt::from(r)).abs().to_biguint().unwrap()
}

/// log2 of (supports) x (Goppa polynomials).
pub fn keyattack_log2(q: u64, m: u32, n: usize, r: usize) -> f64 {
    let big_q = pow_big(q, m as u64);
    let supports = big_binom(big_q.to_usize().expect("field fits usize"), n);
    log2_big(&(supports * irreducible_count(&big_q, r)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostMode {
    Sparse,
    Dense,
}

/// log2(2^2.807): the exponent that reproduces the dense column of Table 3.
pub const CALIBRATED_OMEGA: f64 = 2.807_354_922_057_604;

/// Distinguisher cost at the random-code regularity degree; returns (d_reg, log2 cost).
pub fn dist_cost_log2(m: u32, n: usize, r: usize, mode: CostMode, omega: f64) -> Result<(usize, f64)> {
    let s = r * m as usize;
    if n <= s {
        return Err(Error::InvalidParams("need n > rm".into()));
    }
    let k = n - s;
    let nv = s * (s - 1) / 2;
    let d = dreg_random(s, k)?;
    let cost = match mode {
        CostMode::Sparse => {
            let c = big_binom(nv + d - 1, d);
            let v = BigUint::from(3u32) * BigUint::from(nv + 1 - k.min(nv + 1)) * &c * &c;
            log2_big(&v)
        }
        CostMode::Dense => {
            if nv + d < k + 1 {
                return Err(Error::InvalidParams("more linear forms than variables".into()));
            }
            let base = log2_big(&(big_binom(s, 4) * BigUint::from(d)));
            base + omega * log2_big(&big_binom(nv - k + d - 1, d))
        }
    };
    Ok((d, cost))
}

/// d_reg * k / s^2 for the random-code prediction.
pub fn dreg_ratio(s: usize, k: usize) -> Result<f64> {
    Ok(dreg_random(s, k)? as f64 * k as f64 / (s * s) as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostRow {
    pub category: u32,
    pub n: usize,
    pub r: usize,
    pub m: u32,
    pub d_reg: usize,
    pub sparse: f64,
    pub key: f64,
    pub dense: f64,
}

/// Classic McEliece parameter sets, binary.
pub const MCELIECE_SETS: [(u32, usize, usize, u32); 5] =
    [(1, 3488, 64, 12), (2, 4608, 96, 13), (3, 6688, 128, 13), (4, 6960, 119, 13), (5, 8192, 128, 13)];

pub fn cost_table(omega: f64) -> Result<Vec<CostRow>> {
    MCELIECE_SETS
        .iter()
        .map(|&(category, n, r, m)| {
            let (d_reg, sparse) = dist_cost_log2(m, n, r, CostMode::Sparse, omega)?;
            let (_, dense) = dist_cost_log2(m, n, r, CostMode::Dense, omega)?;
            Ok(CostRow { category, n, r, m, d_reg, sparse, key: keyattack_log2(2, m, n, r), dense })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SublinearRow {
    pub n: f64,
    pub rm: f64,
    pub key: f64,
    pub message: f64,
    pub distinguisher: f64,
}

/// Leading terms of the three log2 costs when rm = ceil(n^alpha).
pub fn sublinear_exponents(alpha: f64, c: f64, n: f64) -> Result<SublinearRow> {
    if !(0.5..1.0).contains(&alpha) {
        return Err(Error::InvalidParams("alpha must lie in [1/2, 1)".into()));
    }
    let rm = n.powf(alpha).ceil();
    Ok(SublinearRow {
        n,
        rm,
        key: rm,
        message: (1.0 - alpha) * rm,
        distinguisher: 4.0 * alpha * c * rm * rm / n * n.log2(),
    })
}

pub fn sublinear_csv(alpha: f64, c: f64, ns: &[f64]) -> Result<String> {
    let mut out = String::from("n,alpha,c,rm,key,message,distinguisher\n");
    for &n in ns {
        let r = sublinear_exponents(alpha, c, n)?;
        out.push_str(&format!(
            "{},{},{},{},{:.3},{:.3},{:.3}\n",
            r.n, alpha, c, r.rm, r.key, r.message, r.distinguisher
        ));
    }
    Ok(out)
}
