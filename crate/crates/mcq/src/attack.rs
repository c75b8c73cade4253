//! Key recovery: isolate one GRS block of the extended dual from low-rank
//! elements of the matrix code, then recover its support and multipliers.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codes::{self, frobenius_closed_basis, grs, square_dim, LinearCode};
use crate::error::{Error, Result};
use crate::gf::{poly_roots, Elt, FieldCtx, Poly};
use crate::linalg::{intersect_rowspaces, same_rowspace, Matrix};
use crate::qrel::mat_code;

const PENCIL_DRAWS: usize = 200;

/// Right r-cyclic block shift: block (i, i+1) and block (m-1, 0) are I_r.
pub fn shift_matrix(r: usize, m: usize) -> Matrix {
    let s = r * m;
    let mut out = Matrix::zeros(s, s);
    for b in 0..m {
        let nb = (b + 1) % m;
        for i in 0..r {
            out.set(b * r + i, nb * r + i, 1);
        }
    }
    out
}

/// (S^T)^i M^(q^i) S^i.
pub fn dickson_shift_matrix(f: &FieldCtx, mat: &Matrix, s: &Matrix, i: u32) -> Matrix {
    let st = s.transpose();
    let mut out = mat.clone();
    for _ in 0..i {
        out = st.mul(f, &out.frobenius(f, 1)).mul(f, s);
    }
    out
}

/// v^(q^i) S^i.
pub fn dickson_shift_vec(f: &FieldCtx, v: &[Elt], s: &Matrix, i: u32) -> Vec<Elt> {
    let mut out = v.to_vec();
    for _ in 0..i {
        let fr: Vec<Elt> = out.iter().map(|&x| f.frobenius(x, 1)).collect();
        out = s.vec_mul(f, &fr);
    }
    out
}

fn random_combo<R: Rng>(f: &FieldCtx, mats: &[Matrix], rng: &mut R) -> Matrix {
    let n = mats[0].rows;
    let mut acc = Matrix::zeros(n, n);
    for m in mats {
        acc = acc.add(f, &m.scale(f, rng.gen_range(0..f.size())));
    }
    acc
}

/// Lagrange interpolation through (xs[k], ys[k]).
fn interpolate(f: &FieldCtx, xs: &[Elt], ys: &[Elt]) -> Poly {
    let mut out = Poly::zero();
    for k in 0..xs.len() {
        if ys[k] == 0 {
            continue;
        }
        let mut basis = Poly::one();
        let mut denom = 1;
        for l in 0..xs.len() {
            if l != k {
                basis = basis.mul(f, &Poly::new(vec![f.neg(xs[l]), 1]));
                denom = f.mul(denom, f.sub(xs[k], xs[l]));
            }
        }
        out = out.add(f, &basis.scale(f, f.div(ys[k], denom).unwrap()));
    }
    out
}

/// An element of the span of `mats` with the given rank, found at a root of
/// det(w D1 + D2) for a random pencil.
pub fn sample_rank_defective<R: Rng>(
    f: &FieldCtx,
    mats: &[Matrix],
    target: usize,
    rng: &mut R,
) -> Result<Matrix> {
    if mats.is_empty() {
        return Err(Error::Degenerate("empty matrix code".into()));
    }
    let s = mats[0].rows;
    if (f.size() as usize) <= s {
        return Err(Error::InvalidParams("field too small to interpolate the pencil".into()));
    }
    let xs: Vec<Elt> = (0..=s as Elt).collect();
    for _ in 0..PENCIL_DRAWS {
        let d1 = random_combo(f, mats, rng);
        let d2 = random_combo(f, mats, rng);
        let ys: Vec<Elt> = xs.iter().map(|&w| d1.scale(f, w).add(f, &d2).det(f)).collect();
        let det = interpolate(f, &xs, &ys);
        if det.is_zero() {
            continue;
        }
        let mut roots = poly_roots(f, &det);
        roots.shuffle(rng);
        for w in roots {
            let cand = d1.scale(f, w).add(f, &d2);
            if cand.rank(f) == target {
                return Ok(cand);
            }
        }
    }
    Err(Error::RetryCap(format!("no rank-{target} element after {PENCIL_DRAWS} pencils")))
}

fn rank_of(f: &FieldCtx, rows: &[Vec<Elt>], cols: usize) -> usize {
    Matrix::from_rows(rows.to_vec(), cols).rank(f)
}

/// Rows of B-coordinates c such that c * hb spans one Frobenius image of
/// GRS_r(x, y).
pub fn isolate_block<R: Rng>(
    f: &FieldCtx,
    mats: &[Matrix],
    r: usize,
    rng: &mut R,
) -> Result<Matrix> {
    let m = f.m() as usize;
    let s = r * m;
    let sh = shift_matrix(r, m);
    let odd = f.p() != 2;
    if !odd && r % 2 == 1 {
        return Err(Error::InvalidParams("characteristic 2 needs even r".into()));
    }
    let cap = 20 * r;
    let v = if odd && r == 3 {
        // a whole block vanishes at once
        let mat = sample_rank_defective(f, mats, s - 3, rng)?;
        mat.kernel(f)
    } else {
        let target = if odd { s - 1 } else { s - 2 };
        let draw = |rng: &mut R| -> Result<Vec<Vec<Elt>>> {
            let mat = sample_rank_defective(f, mats, target, rng)?;
            Ok(mat.kernel(f).row_vecs())
        };
        // grow S_aux with every shift of every kernel vector
        let full = (r - 1) * m;
        let mut aux: Vec<Vec<Elt>> = Vec::new();
        let mut draws = 0;
        'grow: while rank_of(f, &aux, s) < full {
            draws += 1;
            if draws > cap {
                return Err(Error::RetryCap("S_aux did not fill up".into()));
            }
            for u in draw(rng)? {
                for i in 0..m as u32 {
                    aux.push(dickson_shift_vec(f, &u, &sh, i));
                }
                let rk = rank_of(f, &aux, s);
                if rk > full {
                    return Err(Error::Degenerate("S_aux overshoots (r-1)m".into()));
                }
                if rk == full {
                    break 'grow;
                }
            }
        }
        let in_one_block = |extra: &[Vec<Elt>]| -> bool {
            let mut all = aux.clone();
            all.extend_from_slice(extra);
            rank_of(f, &all, s) == full + 1
        };
        let mut v: Vec<Vec<Elt>> = Vec::new();
        draws = 0;
        while rank_of(f, &v, s) < r {
            draws += 1;
            if draws > cap {
                return Err(Error::RetryCap("could not collect r aligned kernel vectors".into()));
            }
            let ker = draw(rng)?;
            if !in_one_block(&ker[..1]) {
                continue;
            }
            if v.is_empty() {
                v = ker;
                continue;
            }
            let Some(l) = (0..m as u32).find(|&l| {
                in_one_block(&[v[0].clone(), dickson_shift_vec(f, &ker[0], &sh, l)])
            }) else {
                continue;
            };
            for u in ker {
                let w = dickson_shift_vec(f, &u, &sh, l);
                let mut t = v.clone();
                t.push(w.clone());
                if rank_of(f, &t, s) > rank_of(f, &v, s) && rank_of(f, &t, s) <= r {
                    v.push(w);
                }
            }
        }
        Matrix::from_rows(v, s)
    };
    if v.rank(f) != r {
        return Err(Error::Degenerate(format!("kernel space has rank {} instead of {r}", v.rank(f))));
    }
    // D = V^perp covers every block but one; intersect its shifts
    let d0 = v.kernel(f);
    let mut d = d0.clone();
    let mut g = d0;
    for _ in 1..m.saturating_sub(1) {
        d = d.frobenius(f, 1).mul(f, &sh);
        g = intersect_rowspaces(f, &g, &d);
    }
    if g.rows != r {
        return Err(Error::Degenerate(format!("intersection has dimension {} instead of {r}", g.rows)));
    }
    Ok(g)
}

/// Support and multipliers of a GRS code given by any generator matrix,
/// normalized to x_0 = 0, x_1 = 1, y_0 = 1.
pub fn sidelnikov_shestakov(f: &FieldCtx, g: &Matrix) -> Result<(Vec<Elt>, Vec<Elt>)> {
    let mut sys = g.clone();
    let piv = sys.rref(f);
    let (k, n) = (sys.rows, sys.cols);
    if k < 2 || n < k + 2 {
        return Err(Error::NotGrs(format!("need 2 <= k <= n - 2, got k = {k}, n = {n}")));
    }
    if piv != (0..k).collect::<Vec<_>>() {
        return Err(Error::NotGrs("first k columns are not an information set".into()));
    }
    let ratio = |i: usize, j: usize| -> Result<Elt> {
        f.div(sys.get(0, j), sys.get(i, j))
            .map_err(|_| Error::NotGrs("zero in the redundant part".into()))
    };
    let c: Vec<Elt> = (k..n).map(|j| ratio(1, j)).collect::<Result<_>>()?;
    let dual = sys.kernel(f);
    for kappa in 1..f.size() {
        if c.contains(&kappa) {
            continue;
        }
        let mut x = vec![0 as Elt; n];
        x[1] = 1;
        for j in k..n {
            x[j] = f.div(kappa, f.sub(kappa, c[j - k]))?;
        }
        let (x1, x2) = (x[k], x[k + 1]);
        let mut ok = true;
        for i in 2..k {
            let (d1, d2) = (ratio(i, k)?, ratio(i, k + 1)?);
            let num = f.sub(f.mul(d1, x1), f.mul(d2, x2));
            let kap = f.div(num, f.sub(x1, x2))?;
            if kap == 0 {
                ok = false;
                break;
            }
            let mu = f.sub(f.mul(kap, x1), f.mul(d1, x1));
            x[i] = f.div(mu, kap)?;
        }
        if !ok {
            continue;
        }
        let mut seen = x.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != n {
            continue;
        }
        // y spans the joint kernel of h * x^a * y for h in the dual
        let mut eqs = Matrix::zeros(0, n);
        for h in 0..dual.rows {
            let mut row = dual.row(h).to_vec();
            for _ in 0..k {
                eqs.push_row(&row);
                for (v, &xv) in row.iter_mut().zip(&x) {
                    *v = f.mul(*v, xv);
                }
            }
        }
        let ker = eqs.kernel(f);
        if ker.rows != 1 || ker.row(0).contains(&0) {
            continue;
        }
        let inv = f.inv(ker.get(0, 0))?;
        let y: Vec<Elt> = ker.row(0).iter().map(|&v| f.mul(v, inv)).collect();
        if same_rowspace(f, &grs(f, &x, &y, k), g) {
            return Ok((x, y));
        }
    }
    Err(Error::NotGrs("no consistent support".into()))
}

/// alternant(x, y, r) equals the public code.
pub fn verify_key(f: &FieldCtx, public: &LinearCode, x: &[Elt], y: &[Elt], r: usize) -> bool {
    match codes::alternant(f, x, y, r) {
        Ok(c) => c.generator() == public.generator(),
        Err(_) => false,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AttackReport {
    pub success: bool,
    pub x: Vec<Elt>,
    pub y: Vec<Elt>,
    pub frobenius_power: u32,
    pub attempts: usize,
    pub seed: u64,
    pub wall_time: f64,
}

/// Full pipeline from a public generator matrix.
pub fn attack(f: &FieldCtx, public: &LinearCode, r: usize, seed: u64) -> Result<AttackReport> {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = Error::RetryCap("no attempt made".into());
    for attempt in 1..=5 {
        let hb = frobenius_closed_basis(f, public, r, &mut rng)?;
        let mats = mat_code(f, &hb);
        if mats.is_empty() {
            return Err(Error::Degenerate("matrix code is trivial".into()));
        }
        let block = match isolate_block(f, &mats, r, &mut rng) {
            Ok(g) => g.mul(f, &hb),
            Err(e @ Error::InvalidParams(_)) => return Err(e),
            Err(e) => {
                last = e;
                continue;
            }
        };
        if square_dim(f, &block) != 2 * r - 1 {
            last = Error::Degenerate("isolated block is not GRS-like".into());
            continue;
        }
        let (x, y) = match sidelnikov_shestakov(f, &block) {
            Ok(v) => v,
            Err(e) => {
                last = e;
                continue;
            }
        };
        for j in 0..f.m() {
            let xj: Vec<Elt> = x.iter().map(|&v| f.frobenius(v, j)).collect();
            let yj: Vec<Elt> = y.iter().map(|&v| f.frobenius(v, j)).collect();
            if verify_key(f, public, &xj, &yj, r) {
                return Ok(AttackReport {
                    success: true,
                    x: xj,
                    y: yj,
                    frobenius_power: j,
                    attempts: attempt,
                    seed,
                    wall_time: t0.elapsed().as_secs_f64(),
                });
            }
        }
        last = Error::Degenerate("recovered key does not reproduce the public code".into());
    }
    Err(last)
}
