//! Dense matrices over a `FieldCtx`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elt, FieldCtx};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Elt>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Elt>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn random<R: Rng>(f: &FieldCtx, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| rng.gen_range(0..f.size())).collect();
        Matrix { rows, cols, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elt {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elt) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> &[Elt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn row_vecs(&self) -> Vec<Vec<Elt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn push_row(&mut self, r: &[Elt]) {
        assert_eq!(r.len(), self.cols);
        self.data.extend_from_slice(r);
        self.rows += 1;
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, f: &FieldCtx, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows);
        let mut out = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let v = f.add(out.get(i, j), f.mul(a, o.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, f: &FieldCtx, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| f.add(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, f: &FieldCtx, c: Elt) -> Matrix {
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// Entrywise x -> x^(q^j).
    pub fn frobenius(&self, f: &FieldCtx, j: u32) -> Matrix {
        let data = self.data.iter().map(|&a| f.frobenius(a, j)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(0, self.cols);
        for &i in idx {
            m.push_row(self.row(i));
        }
        m
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                m.set(i, k, self.get(i, j));
            }
        }
        m
    }

    pub fn vstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&o.data);
        Matrix { rows: self.rows + o.rows, cols: self.cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Reduced row echelon form in place; zero rows are dropped.
    /// Returns the pivot columns.
    pub fn rref(&mut self, f: &FieldCtx) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.get(r, c)).unwrap();
            for j in c..cols {
                let v = f.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            let prow: Vec<Elt> = self.row(r)[c..].to_vec();
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let t = self.get(i, c);
                if t == 0 {
                    continue;
                }
                let nt = f.neg(t);
                let base = i * cols;
                for (k, &pv) in prow.iter().enumerate() {
                    if pv != 0 {
                        let idx = base + c + k;
                        self.data[idx] = f.add(self.data[idx], f.mul(nt, pv));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        self.data.truncate(r * cols);
        self.rows = r;
        pivots
    }

    pub fn rank(&self, f: &FieldCtx) -> usize {
        let mut m = self.clone();
        m.rref(f).len()
    }

    /// Basis (as rows) of { v : self * v^T = 0 }.
    pub fn kernel(&self, f: &FieldCtx) -> Matrix {
        let mut m = self.clone();
        let piv = m.rref(f);
        let mut is_piv = vec![false; self.cols];
        for &c in &piv {
            is_piv[c] = true;
        }
        let mut out = Matrix::zeros(0, self.cols);
        for fc in (0..self.cols).filter(|&c| !is_piv[c]) {
            let mut v = vec![0; self.cols];
            v[fc] = 1;
            for (i, &pc) in piv.iter().enumerate() {
                v[pc] = f.neg(m.get(i, fc));
            }
            out.push_row(&v);
        }
        out
    }

    /// Basis of { v : v * self = 0 }.
    pub fn left_kernel(&self, f: &FieldCtx) -> Matrix {
        self.transpose().kernel(f)
    }

    pub fn inverse(&self, f: &FieldCtx) -> Result<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let piv = aug.rref(f);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return Err(Error::Degenerate("singular matrix".into()));
        }
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j));
            }
        }
        Ok(out)
    }

    pub fn det(&self, f: &FieldCtx) -> Elt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = 1;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| m.get(i, c) != 0) else {
                return 0;
            };
            if pr != c {
                for j in 0..n {
                    m.data.swap(pr * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let pv = m.get(c, c);
            det = f.mul(det, pv);
            let inv = f.inv(pv).unwrap();
            for i in c + 1..n {
                let t = f.mul(m.get(i, c), inv);
                if t == 0 {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(m.get(i, j), f.mul(t, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// X with X * self = b, when self has full row rank.
    pub fn solve_left(&self, f: &FieldCtx, b: &Matrix) -> Result<Matrix> {
        assert_eq!(self.cols, b.cols);
        let mut t = self.clone();
        let piv = t.rref(f);
        if piv.len() != self.rows {
            return Err(Error::Degenerate("rows are dependent".into()));
        }
        let a = self.select_cols(&piv);
        let x = b.select_cols(&piv).mul(f, &a.inverse(f)?);
        if x.mul(f, self) != *b {
            return Err(Error::Degenerate("no solution".into()));
        }
        Ok(x)
    }

    pub fn vec_mul(&self, f: &FieldCtx, v: &[Elt]) -> Vec<Elt> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![0; self.cols];
        for (i, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(self.row(i)) {
                *o = f.add(*o, f.mul(c, x));
            }
        }
        out
    }
}

/// Row-space basis (RREF) of the intersection of two row spaces.
pub fn intersect_rowspaces(f: &FieldCtx, a: &Matrix, b: &Matrix) -> Matrix {
    let da = a.kernel(f);
    let db = b.kernel(f);
    let mut k = da.vstack(&db).kernel(f);
    k.rref(f);
    k
}

pub fn same_rowspace(f: &FieldCtx, a: &Matrix, b: &Matrix) -> bool {
    let mut x = a.clone();
    let mut y = b.clone();
    x.rref(f);
    y.rref(f);
    x == y
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kernel_and_inverse() {
        let f = FieldCtx::new(3, 1, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = Matrix::random(&f, 4, 7, &mut rng);
        let k = a.kernel(&f);
        assert_eq!(k.rows + a.rank(&f), 7);
        assert!(a.mul(&f, &k.transpose()).is_zero());
        let s = Matrix::random(&f, 5, 5, &mut rng);
        if s.det(&f) != 0 {
            let inv = s.inverse(&f).unwrap();
            assert_eq!(s.mul(&f, &inv), Matrix::identity(5));
        }
    }

    #[test]
    fn det_matches_rank() {
        let f = FieldCtx::new(2, 1, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let s = Matrix::random(&f, 4, 4, &mut rng);
            assert_eq!(s.det(&f) != 0, s.rank(&f) == 4);
        }
    }

    #[test]
    fn intersection_dimension() {
        let f = FieldCtx::new(5, 1, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = Matrix::random(&f, 4, 6, &mut rng);
        let b = Matrix::random(&f, 4, 6, &mut rng);
        let i = intersect_rowspaces(&f, &a, &b);
        assert_eq!(i.rows, 2);
        assert_eq!(a.vstack(&i).rank(&f), 4);
        assert_eq!(b.vstack(&i).rank(&f), 4);
    }
}
