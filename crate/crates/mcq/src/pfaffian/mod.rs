//! Pfaffian systems attached to a matrix code, their Hilbert function in a
//! given degree, and the predictions for random codes.

pub mod rank;

use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codes::{frobenius_closed_basis, LinearCode};
use crate::error::{Error, Result};
use crate::gf::{Elt, FieldCtx};
use crate::linalg::Matrix;
use crate::par::Exec;
use crate::qrel::{annihilator_forms, binom, mat_code, skew_index};
use rank::SparseRow;

/// One quadric: three signed products of variables.
pub type Quadric = [(i8, usize, usize); 3];

/// m_ij m_kl - m_ik m_jl + m_il m_jk for i < j < k < l.
pub fn pfaffian_quadrics(s: usize) -> Vec<Quadric> {
    let mut out = Vec::with_capacity(binom(s, 4));
    for i in 0..s {
        for j in i + 1..s {
            for k in j + 1..s {
                for l in k + 1..s {
                    let v = |a, b| skew_index(a, b, s);
                    out.push([(1, v(i, j), v(k, l)), (-1, v(i, k), v(j, l)), (1, v(i, l), v(j, k))]);
                }
            }
        }
    }
    out
}

/// Pfaffian quadrics in the C(s, 2) variables m_ij plus linear forms.
#[derive(Clone, Debug)]
pub struct PfaffianSystem {
    pub s: usize,
    /// RREF rows over the variables, one leading variable each.
    pub forms: Matrix,
}

impl PfaffianSystem {
    pub fn pure(s: usize) -> Self {
        PfaffianSystem { s, forms: Matrix::zeros(0, binom(s, 2)) }
    }
    pub fn n_vars(&self) -> usize {
        binom(self.s, 2)
    }
    pub fn t(&self) -> usize {
        self.forms.rows
    }
    /// Variables that are not leading in any form.
    pub fn free_vars(&self) -> Vec<usize> {
        let mut lead = vec![false; self.n_vars()];
        for i in 0..self.forms.rows {
            if let Some(c) = self.forms.row(i).iter().position(|&x| x != 0) {
                lead[c] = true;
            }
        }
        (0..self.n_vars()).filter(|&v| !lead[v]).collect()
    }
}

/// System attached to an ordered basis of the extended dual (rows of `hb`).
pub fn system_from_basis(f: &FieldCtx, hb: &Matrix) -> Result<PfaffianSystem> {
    let cm = mat_code(f, hb);
    let forms = annihilator_forms(f, &cm, hb.rows)?;
    Ok(PfaffianSystem { s: hb.rows, forms })
}

/// Frobenius-closed basis of the extended dual, then its system.
pub fn build_system(f: &FieldCtx, public: &LinearCode, r: usize, seed: u64) -> Result<PfaffianSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hb = frobenius_closed_basis(f, public, r, &mut rng)?;
    system_from_basis(f, &hb)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum RankMode {
    /// Linear forms eliminated first, then dense rank of the reduced quadric rows.
    #[default]
    Sparse,
    /// Full Macaulay matrix with quadric and linear rows.
    Dense,
}

#[derive(Clone, Copy, Debug)]
pub struct HfOptions {
    pub exec: Exec,
    pub budget_mb: u64,
    pub mode: RankMode,
}

impl Default for HfOptions {
    fn default() -> Self {
        HfOptions { exec: Exec::Parallel, budget_mb: 4096, mode: RankMode::Sparse }
    }
}

/// Rank of a sorted multiset in the combinatorial number system; increasing
/// rank is decreasing grevlex order.
fn mono_rank(sorted: &[usize]) -> usize {
    sorted.iter().enumerate().map(|(i, &a)| binom(a + i, i + 1)).sum()
}

/// Sorted multisets of size d over 0..nv, in increasing rank.
fn monomials(nv: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d);
    fn rec(nv: usize, d: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for v in start..nv {
            cur.push(v);
            rec(nv, d, v, cur, out);
            cur.pop();
        }
    }
    rec(nv, d, 0, &mut cur, &mut out);
    out.sort_by_key(|m| mono_rank(m));
    out
}

fn merge(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v
}

fn check_budget(f: &FieldCtx, rows: usize, cols: usize, budget_mb: u64) -> Result<()> {
    let need = rank::dense_bytes(f, rows, cols).div_ceil(1 << 20);
    if need > budget_mb {
        return Err(Error::Budget { need_mb: need, budget_mb });
    }
    Ok(())
}

fn signed(f: &FieldCtx, s: i8) -> Elt {
    if s < 0 {
        f.neg(1)
    } else {
        1
    }
}

/// Quadrics rewritten in the free variables: list of (pair (a <= b), coeff).
fn reduced_quadrics(f: &FieldCtx, sys: &PfaffianSystem) -> Vec<Vec<(usize, usize, Elt)>> {
    let free = sys.free_vars();
    let nf = free.len();
    let mut pos = vec![usize::MAX; sys.n_vars()];
    for (i, &v) in free.iter().enumerate() {
        pos[v] = i;
    }
    // each variable as a combination of free variables
    let mut expr: Vec<Vec<(usize, Elt)>> = (0..sys.n_vars())
        .map(|v| if pos[v] != usize::MAX { vec![(pos[v], 1)] } else { Vec::new() })
        .collect();
    for i in 0..sys.forms.rows {
        let row = sys.forms.row(i);
        let lead = row.iter().position(|&x| x != 0).expect("nonzero form");
        let inv = f.inv(row[lead]).unwrap();
        expr[lead] = row
            .iter()
            .enumerate()
            .filter(|&(c, &x)| c != lead && x != 0)
            .map(|(c, &x)| {
                debug_assert!(pos[c] != usize::MAX, "forms must be in RREF");
                (pos[c], f.neg(f.mul(x, inv)))
            })
            .collect();
    }
    let npairs = binom(nf + 1, 2);
    pfaffian_quadrics(sys.s)
        .into_iter()
        .map(|q| {
            let mut acc = vec![0 as Elt; npairs];
            for (sg, u, v) in q {
                let c = signed(f, sg);
                for &(a, x) in &expr[u] {
                    let cx = f.mul(c, x);
                    for &(b, y) in &expr[v] {
                        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                        let idx = mono_rank(&[lo, hi]);
                        acc[idx] = f.add(acc[idx], f.mul(cx, y));
                    }
                }
            }
            let mut out = Vec::new();
            for b in 0..nf {
                for a in 0..=b {
                    let c = acc[mono_rank(&[a, b])];
                    if c != 0 {
                        out.push((a, b, c));
                    }
                }
            }
            out
        })
        .collect()
}

/// HF(d) of the quotient by the quadrics and the linear forms.
pub fn macaulay_hf(f: &FieldCtx, sys: &PfaffianSystem, d: usize, opts: &HfOptions) -> Result<u64> {
    match opts.mode {
        RankMode::Sparse => hf_reduced(f, sys, d, opts),
        RankMode::Dense => hf_full(f, sys, d, opts),
    }
}

fn hf_reduced(f: &FieldCtx, sys: &PfaffianSystem, d: usize, opts: &HfOptions) -> Result<u64> {
    let nf = sys.free_vars().len();
    let cols = if nf == 0 { usize::from(d == 0) } else { binom(nf + d - 1, d) };
    if d < 2 || nf == 0 {
        return Ok(cols as u64);
    }
    let shifts = monomials(nf, d - 2);
    let nrows = binom(sys.s, 4) * shifts.len();
    check_budget(f, nrows, cols, opts.budget_mb)?;
    let quads = reduced_quadrics(f, sys);
    let mut rows: Vec<SparseRow> = Vec::with_capacity(nrows);
    for q in &quads {
        if q.is_empty() {
            continue;
        }
        for mu in &shifts {
            let row = q.iter().map(|&(a, b, c)| (mono_rank(&merge(mu, &[a, b])), c)).collect();
            rows.push(row);
        }
    }
    let rk = rank::rank(f, &rows, cols, opts.exec);
    Ok((cols - rk) as u64)
}

/// Unreduced Macaulay matrix: mu * quadric and mu * linear form rows.
fn hf_full(f: &FieldCtx, sys: &PfaffianSystem, d: usize, opts: &HfOptions) -> Result<u64> {
    let nv = sys.n_vars();
    if d == 0 {
        return Ok(1);
    }
    let cols = binom(nv + d - 1, d);
    let q_shifts = if d >= 2 { monomials(nv, d - 2) } else { Vec::new() };
    let l_shifts = monomials(nv, d - 1);
    let nrows = binom(sys.s, 4) * q_shifts.len() + sys.t() * l_shifts.len();
    check_budget(f, nrows, cols, opts.budget_mb)?;
    let mut rows: Vec<SparseRow> = Vec::with_capacity(nrows);
    if d >= 2 {
        for q in pfaffian_quadrics(sys.s) {
            for mu in &q_shifts {
                rows.push(
                    q.iter()
                        .map(|&(sg, u, v)| {
                            let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
                            (mono_rank(&merge(mu, &[lo, hi])), signed(f, sg))
                        })
                        .collect(),
                );
            }
        }
    }
    for i in 0..sys.t() {
        let form: Vec<(usize, Elt)> =
            sys.forms.row(i).iter().enumerate().filter(|(_, &x)| x != 0).map(|(c, &x)| (c, x)).collect();
        for mu in &l_shifts {
            rows.push(form.iter().map(|&(c, x)| (mono_rank(&merge(mu, &[c])), x)).collect());
        }
    }
    let rk = rank::rank(f, &rows, cols, opts.exec);
    Ok((cols - rk) as u64)
}

/// HF of the Pfaffian ideal of a generic s x s skew matrix.
pub fn narayana_hf(s: usize, d: usize) -> BigUint {
    if d == 0 {
        return BigUint::from(1u32);
    }
    let a = big_binom(s + d - 1, d + 1) * big_binom(s + d - 1, d);
    a / BigUint::from(s + d - 1)
}

pub fn big_binom(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Expected HF(d) for a random code of dimension k (t = k linear forms).
pub fn hf_random_prediction(s: usize, k: usize, d: usize) -> BigUint {
    let mut out = BigUint::zero();
    for dd in 0..=d {
        let mut acc = BigInt::zero();
        for i in 0..=dd {
            let term = BigInt::from(big_binom(k, i) * narayana_hf(s, dd - i));
            if i % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        match acc.to_biguint() {
            Some(v) if !v.is_zero() => out = v,
            _ => return BigUint::zero(),
        }
    }
    out
}

/// First degree where the random prediction reaches zero.
pub fn dreg_random(s: usize, k: usize) -> Result<usize> {
    let limit = s * s;
    let mut nars: Vec<BigInt> = Vec::new();
    let mut binoms: Vec<BigInt> = Vec::new();
    for d in 0..=limit {
        nars.push(BigInt::from(narayana_hf(s, d)));
        binoms.push(BigInt::from(big_binom(k, d)));
        let mut acc = BigInt::zero();
        for i in 0..=d {
            let term = &binoms[i] * &nars[d - i];
            if i % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        if acc <= BigInt::zero() {
            return Ok(d);
        }
    }
    Err(Error::InvalidParams(format!("no regularity degree below s^2 = {limit}")))
}

/// m * (C(r+d-2, d)^2 - C(r+d-2, d+1) C(r+d-2, d-1)).
pub fn goppa_hf_lower_bound(r: usize, m: usize, d: usize) -> BigUint {
    if d == 0 {
        return BigUint::from(m);
    }
    let n = r + d - 2;
    let a = big_binom(n, d);
    let b = big_binom(n, d + 1) * big_binom(n, d - 1);
    BigUint::from(m) * (&a * &a - b)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistinguishRecord {
    pub n: usize,
    pub q: u64,
    pub m: u32,
    pub r: usize,
    pub d: usize,
    #[serde(rename = "HF_observed")]
    pub hf_observed: u64,
    #[serde(rename = "HF_predicted")]
    pub hf_predicted: u64,
    pub verdict: String,
    pub seed: u64,
    pub wall_time: f64,
}

/// Compare the observed HF(d) with the random-code prediction.
pub fn distinguish(
    f: &FieldCtx,
    public: &LinearCode,
    r: usize,
    d: usize,
    seed: u64,
    opts: &HfOptions,
) -> Result<DistinguishRecord> {
    let t0 = Instant::now();
    let sys = build_system(f, public, r, seed)?;
    let hf = macaulay_hf(f, &sys, d, opts)?;
    let pred = hf_random_prediction(sys.s, public.dim(), d)
        .to_u64()
        .ok_or_else(|| Error::InvalidParams("prediction overflows u64".into()))?;
    Ok(DistinguishRecord {
        n: public.len(),
        q: f.q() as u64,
        m: f.m(),
        r,
        d,
        hf_observed: hf,
        hf_predicted: pred,
        verdict: if hf != pred { "distinguished" } else { "random-like" }.into(),
        seed,
        wall_time: t0.elapsed().as_secs_f64(),
    })
}
