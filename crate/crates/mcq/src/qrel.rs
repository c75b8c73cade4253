//! Quadratic relations of an ordered basis and the associated matrix codes.

use crate::error::{Error, Result};
use crate::gf::{Elt, FieldCtx};
use crate::linalg::{intersect_rowspaces, Matrix};
use crate::par::{map_range, Exec};

pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Pairs (i, j) with i <= j < k, lexicographic.
pub fn sym_pairs(k: usize) -> Vec<(usize, usize)> {
    (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect()
}

/// Pairs (i, j) with i < j < k, lexicographic.
pub fn skew_pairs(k: usize) -> Vec<(usize, usize)> {
    (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect()
}

/// Position of (i, j), i < j, in `skew_pairs(k)`.
pub fn skew_index(i: usize, j: usize, k: usize) -> usize {
    debug_assert!(i < j && j < k);
    i * (2 * k - i - 1) / 2 + (j - i - 1)
}

/// Basis of C_rel(V): coefficient vectors c (indexed by `sym_pairs`) with
/// sum c_ij v_i * v_j = 0.
pub fn quad_rel_code(f: &FieldCtx, v: &Matrix) -> Matrix {
    let pairs = sym_pairs(v.rows);
    let mut t = Matrix::zeros(v.cols, pairs.len());
    for (c, &(i, j)) in pairs.iter().enumerate() {
        for l in 0..v.cols {
            t.set(l, c, f.mul(v.get(i, l), v.get(j, l)));
        }
    }
    t.kernel(f)
}

/// The symmetric matrix of a relation: off-diagonal c_ij, diagonal 2 c_ii.
pub fn rel_matrix(f: &FieldCtx, c: &[Elt], k: usize) -> Matrix {
    let mut m = Matrix::zeros(k, k);
    for (&v, (i, j)) in c.iter().zip(sym_pairs(k)) {
        if i == j {
            m.set(i, i, f.add(v, v));
        } else {
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
    m
}

/// Basis of C_mat(V).
pub fn mat_code(f: &FieldCtx, v: &Matrix) -> Vec<Matrix> {
    let rel = quad_rel_code(f, v);
    (0..rel.rows).map(|i| rel_matrix(f, rel.row(i), v.rows)).collect()
}

/// P^T M P.
pub fn congruence(f: &FieldCtx, m: &Matrix, p: &Matrix) -> Matrix {
    p.transpose().mul(f, &m.mul(f, p))
}

/// Each matrix flattened to one row.
pub fn flatten(mats: &[Matrix]) -> Matrix {
    let cols = mats.first().map_or(0, |m| m.rows * m.cols);
    let mut out = Matrix::zeros(0, cols);
    for m in mats {
        out.push_row(&m.data);
    }
    out
}

pub fn same_span(f: &FieldCtx, a: &[Matrix], b: &[Matrix]) -> bool {
    let fa = flatten(a);
    let fb = flatten(b);
    let ra = fa.rank(f);
    ra == fb.rank(f) && fa.vstack(&fb).rank(f) == ra
}

/// Strictly upper-triangular coordinates of a square matrix.
pub fn skew_coords(m: &Matrix) -> Vec<Elt> {
    skew_pairs(m.rows).into_iter().map(|(i, j)| m.get(i, j)).collect()
}

/// Linear forms on the strictly upper coordinates vanishing on every matrix
/// of the span, in RREF so each form has its own leading variable.
pub fn annihilator_forms(f: &FieldCtx, mats: &[Matrix], s: usize) -> Result<Matrix> {
    if f.p() != 2 {
        return Err(Error::InvalidParams("annihilator forms need characteristic 2".into()));
    }
    let mut coords = Matrix::zeros(0, binom(s, 2));
    for m in mats {
        coords.push_row(&skew_coords(m));
    }
    let mut k = coords.kernel(f);
    k.rref(f);
    Ok(k)
}

/// Matrices of the formal relations x^a y * x^b y = x^c y * x^d y inside
/// one r x r block (a + b = c + d); a basis of dimension C(r-1, 2).
pub fn block_relation_space(f: &FieldCtx, r: usize) -> Vec<Matrix> {
    let pairs = sym_pairs(r);
    let mut e = Matrix::zeros(pairs.len(), 2 * r - 1);
    for (row, &(a, b)) in pairs.iter().enumerate() {
        e.set(row, a + b, 1);
    }
    let rel = e.left_kernel(f);
    (0..rel.rows).map(|i| rel_matrix(f, rel.row(i), r)).collect()
}

/// Histogram of ranks over every matrix of `block_relation_space(f, r)`.
pub fn rank_census_blocks(f: &FieldCtx, r: usize, exec: Exec) -> Result<Vec<u64>> {
    let basis = block_relation_space(f, r);
    let dim = basis.len();
    let size = f.size() as u64;
    let total = (dim as f64) * (size as f64).log2();
    if total > 24.0 + 1e-9 {
        return Err(Error::Budget { need_mb: 1 << ((total - 20.0).max(0.0) as u32), budget_mb: 16 });
    }
    // shard on the first coordinate
    let head = if dim == 0 { 1 } else { size as usize };
    let rest = if dim == 0 { 1 } else { size.pow(dim as u32 - 1) };
    let parts = map_range(exec, head, |u0| {
        let mut hist = vec![0u64; r + 1];
        let mut coeff = vec![0 as Elt; dim];
        if dim > 0 {
            coeff[0] = u0 as Elt;
        }
        for idx in 0..rest {
            let mut t = idx;
            for c in coeff.iter_mut().skip(1) {
                *c = (t % size) as Elt;
                t /= size;
            }
            let mut m = Matrix::zeros(r, r);
            for (b, &u) in basis.iter().zip(&coeff) {
                if u != 0 {
                    m = m.add(f, &b.scale(f, u));
                }
            }
            hist[m.rank(f)] += 1;
        }
        hist
    });
    let mut hist = vec![0u64; r + 1];
    for h in parts {
        for (a, b) in hist.iter_mut().zip(h) {
            *a += b;
        }
    }
    Ok(hist)
}

/// E_ij + E_ji in an s x s matrix.
fn sym_unit(s: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(s, s);
    m.set(i, j, 1);
    m.set(j, i, 1);
    m
}

/// Largest dimension of a subspace of C_mat(a) supported on one row and
/// column of the first block, together with the max rank found in it.
/// Characteristic 2 only; `a` must be the canonical basis.
pub fn low_rank_subspace(f: &FieldCtx, a: &Matrix, r: usize) -> Result<(usize, usize)> {
    if f.p() != 2 {
        return Err(Error::InvalidParams("low-rank subspace needs characteristic 2".into()));
    }
    let s = a.rows;
    let cm = mat_code(f, a);
    let cm_flat = flatten(&cm);
    let mut best = (0, 0);
    for j in 0..r {
        let w: Vec<Matrix> = (0..r).filter(|&b| b != j).map(|b| sym_unit(s, j, b)).collect();
        let inter = intersect_rowspaces(f, &cm_flat, &flatten(&w));
        let max_rank = (0..inter.rows)
            .map(|i| Matrix { rows: s, cols: s, data: inter.row(i).to_vec() }.rank(f))
            .max()
            .unwrap_or(0);
        if inter.rows > best.0 {
            best = (inter.rows, max_rank);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{canonical_basis, square_dim};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn index_helpers() {
        assert_eq!(binom(17, 2), 136);
        let p = skew_pairs(7);
        for (idx, &(i, j)) in p.iter().enumerate() {
            assert_eq!(skew_index(i, j, 7), idx);
        }
    }

    #[test]
    fn relation_dimension_identity() {
        let f = FieldCtx::new(3, 1, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v = Matrix::random(&f, 5, 9, &mut rng);
        let rel = quad_rel_code(&f, &v);
        assert_eq!(rel.rows, 15 - square_dim(&f, &v));
    }

    #[test]
    fn three_term_relation_ranks() {
        // a_0 a_2 = a_1^2
        let odd = FieldCtx::new(5, 1, 1).unwrap();
        let b = block_relation_space(&odd, 3);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].rank(&odd), 3);
        let even = FieldCtx::new(2, 1, 2).unwrap();
        let b = block_relation_space(&even, 3);
        assert_eq!(b[0].rank(&even), 2);
    }

    #[test]
    fn block_space_matches_key_relations() {
        let f = FieldCtx::new(2, 3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut all: Vec<Elt> = f.elements().collect();
        all.shuffle(&mut rng);
        let x = all[..30].to_vec();
        let y: Vec<Elt> = (0..30).map(|_| rng.gen_range(1..f.size())).collect();
        let a = canonical_basis(&f, &x, &y, 5);
        let first = a.select_rows(&[0, 1, 2, 3, 4]);
        assert!(same_span(&f, &mat_code(&f, &first), &block_relation_space(&f, 5)));
    }

    #[test]
    fn small_census_rows() {
        let f = FieldCtx::new(3, 1, 1).unwrap();
        assert_eq!(rank_census_blocks(&f, 3, Exec::Sequential).unwrap(), vec![1, 0, 0, 2]);
        let g = FieldCtx::new(2, 1, 1).unwrap();
        assert_eq!(rank_census_blocks(&g, 4, Exec::Parallel).unwrap(), vec![1, 0, 3, 0, 4]);
    }
}
