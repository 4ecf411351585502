//! JSON and CSV export, and an on-disk cache of S-matrices keyed by a content
//! hash of what was computed.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fusion::FusionTable;
use crate::lie::{FiniteType, Weight};
use crate::smatrix::{SMatrixMeta, SMatrixTable};
use crate::twisted::WeightList;

/// Environment variable naming the cache root.
pub const CACHE_ENV: &str = "TVF_CACHE_DIR";

/// Negative zero prints as `-0.0`; normalize so output does not depend on it.
fn clean(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

#[derive(Serialize, Deserialize)]
pub struct WeightListDoc {
    #[serde(rename = "type")]
    pub type_label: String,
    pub algebra: String,
    pub level: u32,
    pub weights: Vec<Vec<i64>>,
}

impl From<&WeightList> for WeightListDoc {
    fn from(w: &WeightList) -> Self {
        WeightListDoc {
            type_label: w.label().to_string(),
            algebra: w.ty().to_string(),
            level: w.level(),
            weights: w.iter().map(|x| x.coeffs().to_vec()).collect(),
        }
    }
}

impl WeightListDoc {
    pub fn into_list(self) -> Result<WeightList> {
        let ty: FiniteType = self.algebra.parse()?;
        let weights = self
            .weights
            .into_iter()
            .map(|c| Weight::new(ty, c))
            .collect::<Result<_>>()?;
        Ok(WeightList::new(self.type_label, ty, self.level, weights))
    }
}

#[derive(Serialize, Deserialize)]
pub struct SMatrixDoc {
    #[serde(rename = "type")]
    pub type_label: String,
    pub level: u32,
    pub meta: SMatrixMeta,
    pub rows: WeightListDoc,
    pub cols: WeightListDoc,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl From<&SMatrixTable> for SMatrixDoc {
    fn from(s: &SMatrixTable) -> Self {
        SMatrixDoc {
            type_label: s.meta().type_label.clone(),
            level: s.meta().level,
            meta: s.meta().clone(),
            rows: s.rows().into(),
            cols: s.cols().into(),
            entries: s
                .entries()
                .iter()
                .map(|r| r.iter().map(|z| [clean(z.re), clean(z.im)]).collect())
                .collect(),
        }
    }
}

impl SMatrixDoc {
    pub fn into_table(self) -> Result<SMatrixTable> {
        let entries = self
            .entries
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|[re, im]| Complex64::new(re, im))
                    .collect()
            })
            .collect();
        SMatrixTable::from_parts(
            self.rows.into_list()?,
            self.cols.into_list()?,
            entries,
            self.meta,
        )
    }
}

pub fn smatrix_to_json(s: &SMatrixTable) -> String {
    serde_json::to_string_pretty(&SMatrixDoc::from(s)).expect("plain data serializes")
}

pub fn smatrix_from_json(json: &str) -> Result<SMatrixTable> {
    serde_json::from_str::<SMatrixDoc>(json)?.into_table()
}

pub fn weights_to_json(w: &WeightList) -> String {
    serde_json::to_string_pretty(&WeightListDoc::from(w)).expect("plain data serializes")
}

fn csv_weight(w: &Weight) -> String {
    let parts: Vec<String> = w.coeffs().iter().map(|b| b.to_string()).collect();
    format!("[{}]", parts.join(" "))
}

/// A complex number as `re+imj`.
pub fn format_complex(z: Complex64) -> String {
    let (re, im) = (clean(z.re), clean(z.im));
    if im < 0.0 {
        format!("{re}-{}j", -im)
    } else {
        format!("{re}+{im}j")
    }
}

/// Header row of column weights, then one row per row weight.
pub fn smatrix_to_csv(s: &SMatrixTable) -> String {
    let mut out = String::from("row\\col");
    for c in s.cols().iter() {
        let _ = write!(out, ",{}", csv_weight(c));
    }
    out.push('\n');
    for (r, row) in s.rows().iter().zip(s.entries()) {
        out.push_str(&csv_weight(r));
        for &z in row {
            let _ = write!(out, ",{}", format_complex(z));
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct FusionDoc<'a> {
    #[serde(rename = "type")]
    type_label: &'a str,
    level: u32,
    ring: crate::fusion::RingTag,
    basis: Vec<Vec<i64>>,
    /// `constants[lambda][mu][nu] = N_{lambda mu}^nu`.
    constants: Vec<Vec<Vec<[f64; 2]>>>,
}

pub fn fusion_to_json(f: &FusionTable) -> String {
    let n = f.len();
    let doc = FusionDoc {
        type_label: f.basis().label(),
        level: f.basis().level(),
        ring: f.ring(),
        basis: f.basis().iter().map(|w| w.coeffs().to_vec()).collect(),
        constants: (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        (0..n)
                            .map(|c| {
                                let z = f.get(a, b, c);
                                [clean(z.re), clean(z.im)]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes")
}

/// Hex SHA-256 of `(formula, type, level)`.
pub fn cache_key(formula: &str, type_label: &str, level: u32) -> String {
    let mut h = Sha256::new();
    h.update(formula.as_bytes());
    h.update([0]);
    h.update(type_label.as_bytes());
    h.update([0]);
    h.update(level.to_le_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// A directory of serialized S-matrices.
#[derive(Clone, Debug)]
pub struct Cache {
    root: PathBuf,
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Cache { root: root.into() }
    }

    /// The cache named by [`CACHE_ENV`], if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(Cache::new)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn path(&self, formula: &str, type_label: &str, level: u32) -> PathBuf {
        self.root
            .join(format!("{}.json", cache_key(formula, type_label, level)))
    }

    pub fn load(
        &self,
        formula: &str,
        type_label: &str,
        level: u32,
    ) -> Result<Option<SMatrixTable>> {
        let path = self.path(formula, type_label, level);
        match fs::read_to_string(&path) {
            Ok(text) => Ok(Some(smatrix_from_json(&text)?)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(Error::Io(e)),
        }
    }

    /// Writes to a temporary file in the cache directory, then renames it
    /// into place so readers never see a partial file.
    pub fn store(
        &self,
        formula: &str,
        type_label: &str,
        level: u32,
        s: &SMatrixTable,
    ) -> Result<PathBuf> {
        fs::create_dir_all(&self.root)?;
        let path = self.path(formula, type_label, level);
        let tmp = self.root.join(format!(
            ".{}.{}.tmp",
            path.file_name().and_then(|n| n.to_str()).unwrap_or("entry"),
            std::process::id()
        ));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(smatrix_to_json(s).as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    /// Loads the entry if present, otherwise computes and stores it.
    pub fn get_or_compute(
        &self,
        formula: &str,
        type_label: &str,
        level: u32,
        compute: impl FnOnce() -> Result<SMatrixTable>,
    ) -> Result<SMatrixTable> {
        if let Some(s) = self.load(formula, type_label, level)? {
            return Ok(s);
        }
        let s = compute()?;
        self.store(formula, type_label, level, &s)?;
        Ok(s)
    }
}
