//! Linear codes: GRS, alternant and Goppa codes, duals, Schur products and
//! Frobenius-closed bases of extended duals.

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{Elt, FieldCtx, Poly};
use crate::linalg::{intersect_rowspaces, Matrix};

/// A code stored by its RREF generator matrix. `over_subfield` marks codes
/// defined over GF(q) rather than the full field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    gen: Matrix,
    over_subfield: bool,
}

impl LinearCode {
    pub fn from_generator(f: &FieldCtx, g: &Matrix, over_subfield: bool) -> Result<Self> {
        if over_subfield && !g.data.iter().all(|&x| f.in_subfield(x)) {
            return Err(Error::InvalidParams("generator has entries outside GF(q)".into()));
        }
        let mut gen = g.clone();
        gen.rref(f);
        Ok(LinearCode { gen, over_subfield })
    }

    pub fn generator(&self) -> &Matrix {
        &self.gen
    }
    pub fn dim(&self) -> usize {
        self.gen.rows
    }
    pub fn len(&self) -> usize {
        self.gen.cols
    }
    pub fn is_empty(&self) -> bool {
        self.gen.rows == 0
    }
    pub fn over_subfield(&self) -> bool {
        self.over_subfield
    }

    pub fn dual(&self, f: &FieldCtx) -> LinearCode {
        let mut k = self.gen.kernel(f);
        k.rref(f);
        LinearCode { gen: k, over_subfield: self.over_subfield }
    }

    /// The same generator read over the full field.
    pub fn extend_field(&self) -> LinearCode {
        LinearCode { gen: self.gen.clone(), over_subfield: false }
    }

    pub fn contains(&self, f: &FieldCtx, v: &[Elt]) -> bool {
        let mut m = self.gen.clone();
        m.push_row(v);
        m.rank(f) == self.dim()
    }

    pub fn intersect(&self, f: &FieldCtx, o: &LinearCode) -> LinearCode {
        LinearCode {
            gen: intersect_rowspaces(f, &self.gen, &o.gen),
            over_subfield: self.over_subfield && o.over_subfield,
        }
    }
}

pub fn star(f: &FieldCtx, u: &[Elt], v: &[Elt]) -> Vec<Elt> {
    u.iter().zip(v).map(|(&a, &b)| f.mul(a, b)).collect()
}

/// Span of all componentwise products a_i * b_j.
pub fn schur_product(f: &FieldCtx, a: &Matrix, b: &Matrix) -> LinearCode {
    let mut m = Matrix::zeros(0, a.cols);
    for i in 0..a.rows {
        for j in 0..b.rows {
            m.push_row(&star(f, a.row(i), b.row(j)));
        }
    }
    m.rref(f);
    LinearCode { gen: m, over_subfield: false }
}

/// dim of the square code of the row space of `a`.
pub fn square_dim(f: &FieldCtx, a: &Matrix) -> usize {
    let mut m = Matrix::zeros(0, a.cols);
    for i in 0..a.rows {
        for j in i..a.rows {
            m.push_row(&star(f, a.row(i), a.row(j)));
        }
    }
    m.rank(f)
}

/// Rows y * x^j for j < k.
pub fn grs(f: &FieldCtx, x: &[Elt], y: &[Elt], k: usize) -> Matrix {
    let n = x.len();
    let mut m = Matrix::zeros(k, n);
    for i in 0..n {
        let mut v = y[i];
        for j in 0..k {
            m.set(j, i, v);
            v = f.mul(v, x[i]);
        }
    }
    m
}

/// y' with GRS_k(x, y)^perp = GRS_{n-k}(x, y').
pub fn grs_dual_multiplier(f: &FieldCtx, x: &[Elt], y: &[Elt]) -> Result<Vec<Elt>> {
    (0..x.len())
        .map(|i| {
            let mut d = y[i];
            for j in 0..x.len() {
                if j != i {
                    d = f.mul(d, f.sub(x[i], x[j]));
                }
            }
            f.inv(d).map_err(|_| Error::Degenerate("support has repeated points".into()))
        })
        .collect()
}

fn check_support(f: &FieldCtx, x: &[Elt], y: &[Elt]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::InvalidParams("x and y differ in length".into()));
    }
    let mut seen = std::collections::HashSet::new();
    for &v in x {
        if v >= f.size() || !seen.insert(v) {
            return Err(Error::InvalidParams("support must be distinct field elements".into()));
        }
    }
    if y.iter().any(|&v| v == 0 || v >= f.size()) {
        return Err(Error::InvalidParams("multipliers must be nonzero".into()));
    }
    Ok(())
}

/// { c in GF(q)^n : h * c^T = 0 } for h over the full field.
pub fn subfield_kernel(f: &FieldCtx, h: &Matrix) -> Result<LinearCode> {
    // c in GF(q)^n kills h iff it kills every Tr(w_t * h) for a GF(q)-basis w_t.
    let basis: Vec<Elt> = (0..f.m()).map(|t| f.pow(f.generator(), t as u64)).collect();
    let mut t = Matrix::zeros(0, h.cols);
    for i in 0..h.rows {
        for &w in &basis {
            let row: Vec<Elt> = h.row(i).iter().map(|&v| f.trace(f.mul(w, v))).collect();
            t.push_row(&row);
        }
    }
    LinearCode::from_generator(f, &t.kernel(f), true)
}

/// GRS_r(x, y)^perp restricted to GF(q)^n.
pub fn alternant(f: &FieldCtx, x: &[Elt], y: &[Elt], r: usize) -> Result<LinearCode> {
    check_support(f, x, y)?;
    let n = x.len();
    let m = f.m() as usize;
    let code = subfield_kernel(f, &grs(f, x, y, r))?;
    if code.dim() + r * m != n {
        return Err(Error::Degenerate(format!(
            "alternant code has dimension {} instead of {}",
            code.dim(),
            n as i64 - (r * m) as i64
        )));
    }
    Ok(code)
}

/// Goppa multipliers y_i = 1 / gamma(x_i).
pub fn goppa_multipliers(f: &FieldCtx, x: &[Elt], gamma: &Poly) -> Result<Vec<Elt>> {
    x.iter()
        .map(|&v| {
            f.inv(gamma.eval(f, v))
                .map_err(|_| Error::Degenerate("Goppa polynomial vanishes on the support".into()))
        })
        .collect()
}

pub fn goppa(f: &FieldCtx, x: &[Elt], gamma: &Poly) -> Result<LinearCode> {
    let r = gamma.deg().ok_or_else(|| Error::InvalidParams("zero Goppa polynomial".into()))?;
    alternant(f, x, &goppa_multipliers(f, x, gamma)?, r)
}

/// Rows (y x^a)^(q^j), block j = 0..m, a = 0..r inside each block.
pub fn canonical_basis(f: &FieldCtx, x: &[Elt], y: &[Elt], r: usize) -> Matrix {
    let g = grs(f, x, y, r);
    let mut out = Matrix::zeros(0, x.len());
    for j in 0..f.m() {
        out = out.vstack(&g.frobenius(f, j));
    }
    out
}

/// Blocks (b_1..b_r)^(q^j) for random b_i in the extended dual of `public`.
pub fn frobenius_closed_basis<R: Rng>(
    f: &FieldCtx,
    public: &LinearCode,
    r: usize,
    rng: &mut R,
) -> Result<Matrix> {
    let dual = public.dual(f);
    let m = f.m() as usize;
    if dual.dim() != r * m {
        return Err(Error::Degenerate(format!(
            "dual has dimension {} but r*m = {}",
            dual.dim(),
            r * m
        )));
    }
    for _ in 0..100 {
        let coeffs = Matrix::random(f, r, dual.dim(), rng);
        let b = coeffs.mul(f, dual.generator());
        let mut out = Matrix::zeros(0, public.len());
        for j in 0..f.m() {
            out = out.vstack(&b.frobenius(f, j));
        }
        if out.rank(f) == r * m {
            return Ok(out);
        }
    }
    Err(Error::RetryCap("no Frobenius-closed basis after 100 draws".into()))
}

/// P with hb = P * ha.
pub fn change_of_basis(f: &FieldCtx, hb: &Matrix, ha: &Matrix) -> Result<Matrix> {
    ha.solve_left(f, hb)
}

/// Random code over GF(q) with the given dimension.
pub fn random_subfield_code<R: Rng>(f: &FieldCtx, k: usize, n: usize, rng: &mut R) -> Result<LinearCode> {
    let sub = f.subfield_elements();
    for _ in 0..100 {
        let data = (0..k * n).map(|_| sub[rng.gen_range(0..sub.len())]).collect();
        let g = Matrix { rows: k, cols: n, data };
        let c = LinearCode::from_generator(f, &g, true)?;
        if c.dim() == k {
            return Ok(c);
        }
    }
    Err(Error::RetryCap("random code kept losing rank".into()))
}
