//! Rank of dense matrices given as sparse rows. Characteristic 2 rows are
//! bit-sliced: one u64 plane per coefficient bit.

use crate::gf::{Elt, FieldCtx};
use crate::par::{for_each_mut, Exec};

pub type SparseRow = Vec<(usize, Elt)>;

/// Bytes needed to hold the dense form.
pub fn dense_bytes(f: &FieldCtx, rows: usize, cols: usize) -> u64 {
    if f.p() == 2 {
        let words = cols.div_ceil(64) as u64;
        rows as u64 * words * 8 * f.degree() as u64
    } else {
        rows as u64 * cols as u64 * 4
    }
}

pub fn rank(f: &FieldCtx, rows: &[SparseRow], cols: usize, exec: Exec) -> usize {
    if f.p() == 2 {
        rank_sliced(f, rows, cols, exec)
    } else {
        rank_generic(f, rows, cols, exec)
    }
}

/// Plain elimination on u32 entries; works in any characteristic.
pub fn rank_generic(f: &FieldCtx, rows: &[SparseRow], cols: usize, exec: Exec) -> usize {
    let mut m: Vec<Vec<Elt>> = rows
        .iter()
        .map(|r| {
            let mut v = vec![0; cols];
            for &(c, x) in r {
                v[c] = f.add(v[c], x);
            }
            v
        })
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let inv = f.inv(m[rank][c]).unwrap();
        for x in m[rank][c..].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let (top, rest) = m.split_at_mut(rank + 1);
        let piv = &top[rank];
        for_each_mut(exec, rest, |row| {
            let t = row[c];
            if t == 0 {
                return;
            }
            let nt = f.neg(t);
            for (x, &pv) in row[c..].iter_mut().zip(&piv[c..]) {
                if pv != 0 {
                    *x = f.add(*x, f.mul(nt, pv));
                }
            }
        });
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

struct Sliced {
    e: usize,
    words: usize,
}

impl Sliced {
    #[inline]
    fn get(&self, row: &[u64], c: usize) -> Elt {
        let (w, b) = (c / 64, c % 64);
        let mut v = 0;
        for k in 0..self.e {
            v |= (((row[k * self.words + w] >> b) & 1) as Elt) << k;
        }
        v
    }

    /// dst += (c * src) on words from `w0` on. `img[b]` = c * z^b.
    #[inline]
    fn axpy(&self, dst: &mut [u64], src: &[u64], img: &[Elt], w0: usize) {
        let n = self.words;
        for (b, &im) in img.iter().enumerate() {
            let s = &src[b * n + w0..(b + 1) * n];
            for k in 0..self.e {
                if (im >> k) & 1 == 1 {
                    let d = &mut dst[k * n + w0..(k + 1) * n];
                    for (x, y) in d.iter_mut().zip(s) {
                        *x ^= *y;
                    }
                }
            }
        }
    }

    fn images(&self, f: &FieldCtx, c: Elt) -> Vec<Elt> {
        (0..self.e).map(|b| f.mul(c, 1 << b)).collect()
    }
}

/// Elimination over GF(2^e) on bit-sliced rows.
pub fn rank_sliced(f: &FieldCtx, rows: &[SparseRow], cols: usize, exec: Exec) -> usize {
    assert_eq!(f.p(), 2);
    let sl = Sliced { e: f.degree() as usize, words: cols.div_ceil(64).max(1) };
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            let mut v = vec![0u64; sl.e * sl.words];
            for &(c, x) in r {
                for k in 0..sl.e {
                    if (x >> k) & 1 == 1 {
                        v[k * sl.words + c / 64] ^= 1 << (c % 64);
                    }
                }
            }
            v
        })
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        if rank == m.len() {
            break;
        }
        let Some(p) = (rank..m.len()).find(|&i| sl.get(&m[i], c) != 0) else {
            continue;
        };
        m.swap(rank, p);
        let w0 = c / 64;
        let inv = f.inv(sl.get(&m[rank], c)).unwrap();
        if inv != 1 {
            let old = m[rank].clone();
            let img = sl.images(f, inv);
            let row = &mut m[rank];
            for k in 0..sl.e {
                row[k * sl.words + w0..(k + 1) * sl.words].fill(0);
            }
            sl.axpy(row, &old, &img, w0);
        }
        let (top, rest) = m.split_at_mut(rank + 1);
        let piv = &top[rank];
        for_each_mut(exec, rest, |row| {
            let t = sl.get(row, c);
            if t != 0 {
                sl.axpy(row, piv, &sl.images(f, t), w0);
            }
        });
        rank += 1;
    }
    rank
}
