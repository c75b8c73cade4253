//! Key instances and the on-disk instance format.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codes::{self, LinearCode};
use crate::error::{Error, Result};
use crate::gf::{random_irreducible, Elt, FieldCtx, Poly};
use crate::linalg::Matrix;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeKind {
    Random,
    Alternant,
    Goppa,
}

impl std::str::FromStr for CodeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(CodeKind::Random),
            "alternant" => Ok(CodeKind::Alternant),
            "goppa" => Ok(CodeKind::Goppa),
            _ => Err(Error::InvalidParams(format!("unknown code kind {s}"))),
        }
    }
}

/// Field GF(p^(a*m)) over GF(p^a), degree r, length n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub p: u32,
    pub a: u32,
    pub m: u32,
    pub r: usize,
    pub n: usize,
}

impl Params {
    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.a)
    }
    pub fn s(&self) -> usize {
        self.r * self.m as usize
    }
    pub fn field(&self) -> Result<FieldCtx> {
        FieldCtx::new(self.p, self.a, self.m)
    }
    pub fn check(&self) -> Result<()> {
        let size = (self.p as u64).pow(self.a * self.m);
        if self.n as u64 > size {
            return Err(Error::InvalidParams(format!("n = {} exceeds field size {size}", self.n)));
        }
        if self.r == 0 || self.s() >= self.n {
            return Err(Error::InvalidParams("need 0 < r*m < n".into()));
        }
        Ok(())
    }
}

/// A secret key: support, multipliers and the Goppa polynomial when there is one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyInstance {
    pub params: Params,
    pub kind: CodeKind,
    pub x: Vec<Elt>,
    pub y: Vec<Elt>,
    pub gamma: Option<Poly>,
}

impl KeyInstance {
    /// Random support and multipliers (or Goppa polynomial); retries on
    /// degenerate draws up to a fixed cap.
    pub fn generate(params: Params, kind: CodeKind, seed: u64) -> Result<(Self, LinearCode)> {
        params.check()?;
        let f = params.field()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let mut all: Vec<Elt> = f.elements().collect();
            all.shuffle(&mut rng);
            let x = all[..params.n].to_vec();
            let (y, gamma) = match kind {
                CodeKind::Goppa => {
                    let g = random_irreducible(&f, params.r, rng.gen())?;
                    (codes::goppa_multipliers(&f, &x, &g)?, Some(g))
                }
                _ => ((0..params.n).map(|_| rng.gen_range(1..f.size())).collect(), None),
            };
            let key = KeyInstance { params, kind, x, y, gamma };
            match key.public_code(&f) {
                Ok(c) => return Ok((key, c)),
                Err(Error::Degenerate(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::RetryCap("key generation kept producing degenerate codes".into()))
    }

    pub fn public_code(&self, f: &FieldCtx) -> Result<LinearCode> {
        codes::alternant(f, &self.x, &self.y, self.params.r)
    }

    pub fn canonical_basis(&self, f: &FieldCtx) -> Matrix {
        codes::canonical_basis(f, &self.x, &self.y, self.params.r)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub format_version: u32,
    pub p: u32,
    pub a: u32,
    pub m: u32,
    pub r: usize,
    pub n: usize,
    pub kind: CodeKind,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Secret {
    pub x: Vec<Elt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<Elt>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<Elt>>,
}

/// One JSON object per file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub header: Header,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secret: Option<Secret>,
    pub public: Vec<Vec<Elt>>,
}

impl InstanceFile {
    pub fn params(&self) -> Params {
        let h = &self.header;
        Params { p: h.p, a: h.a, m: h.m, r: h.r, n: h.n }
    }

    /// Build a fresh instance of the given kind.
    pub fn generate(params: Params, kind: CodeKind, seed: u64) -> Result<Self> {
        let header = Header {
            format_version: FORMAT_VERSION,
            p: params.p,
            a: params.a,
            m: params.m,
            r: params.r,
            n: params.n,
            kind,
            seed,
        };
        if kind == CodeKind::Random {
            params.check()?;
            let f = params.field()?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = codes::random_subfield_code(&f, params.n - params.s(), params.n, &mut rng)?;
            return Ok(InstanceFile { header, secret: None, public: c.generator().row_vecs() });
        }
        let (key, c) = KeyInstance::generate(params, kind, seed)?;
        let secret = Secret {
            x: key.x.clone(),
            y: if kind == CodeKind::Goppa { None } else { Some(key.y.clone()) },
            gamma: key.gamma.as_ref().map(|g| g.0.clone()),
        };
        Ok(InstanceFile { header, secret: Some(secret), public: c.generator().row_vecs() })
    }

    pub fn public_code(&self, f: &FieldCtx) -> Result<LinearCode> {
        let n = self.header.n;
        if self.public.iter().any(|r| r.len() != n) {
            return Err(Error::Format("public rows must have length n".into()));
        }
        let g = Matrix::from_rows(self.public.clone(), n);
        LinearCode::from_generator(f, &g, true)
    }

    pub fn key(&self, f: &FieldCtx) -> Result<Option<KeyInstance>> {
        let Some(s) = &self.secret else { return Ok(None) };
        let params = self.params();
        let (y, gamma) = match (&s.y, &s.gamma) {
            (Some(y), _) => (y.clone(), s.gamma.clone().map(Poly::new)),
            (None, Some(g)) => {
                let g = Poly::new(g.clone());
                (codes::goppa_multipliers(f, &s.x, &g)?, Some(g))
            }
            _ => return Err(Error::Format("secret needs y or gamma".into())),
        };
        Ok(Some(KeyInstance { params, kind: self.header.kind, x: s.x.clone(), y, gamma }))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: InstanceFile = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        if v.header.format_version != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported format_version {}", v.header.format_version)));
        }
        Ok(v)
    }
}
