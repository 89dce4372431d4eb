//! On-disk JSON format for pencils and descriptor systems.
//!
//! Matrices are row-major; every entry is either a plain number (real) or a
//! two-element array `[re, im]`. The `b` vector is optional — present for
//! feedback problems, absent for bare pencils.

use crate::feedback::DaeSystem;
use crate::pencil::Pencil;
use crate::scalar::Tol;
use crate::{CMat, CVec, Error, Result};
use ndarray::{Array1, Array2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const FORMAT_VERSION: &str = "1";

/// One matrix or vector entry: `3.5` or `[3.5, -1.0]`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    pub fn to_complex(self) -> Complex64 {
        match self {
            Entry::Real(re) => Complex64::new(re, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        }
    }

    pub fn from_complex(z: Complex64) -> Entry {
        if z.im == 0.0 {
            Entry::Real(z.re)
        } else {
            Entry::Complex([z.re, z.im])
        }
    }
}

/// The file payload: `{"format_version": "1", "n": 2, "E": [...], "A": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PencilFile {
    pub format_version: String,
    pub n: usize,
    #[serde(rename = "E")]
    pub e: Vec<Vec<Entry>>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<Entry>>,
}

fn check_matrix(name: &str, rows: &[Vec<Entry>], n: usize) -> Result<()> {
    if rows.len() != n {
        return Err(Error::Parse(format!(
            "{name} has {} rows, expected {n}",
            rows.len()
        )));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Parse(format!(
                "{name} row {i} has {} entries, expected {n} (ragged rows are rejected)",
                row.len()
            )));
        }
    }
    Ok(())
}

fn to_cmat(rows: &[Vec<Entry>], n: usize) -> CMat {
    Array2::from_shape_fn((n, n), |(i, j)| rows[i][j].to_complex())
}

fn from_cmat(m: &CMat) -> Vec<Vec<Entry>> {
    m.rows()
        .into_iter()
        .map(|r| r.iter().map(|&z| Entry::from_complex(z)).collect())
        .collect()
}

impl PencilFile {
    pub fn parse(text: &str) -> Result<PencilFile> {
        let file: PencilFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid pencil file: {e}")))?;
        file.validate()?;
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<PencilFile> {
        let text = std::fs::read_to_string(path)?;
        PencilFile::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Parse(format!(
                "unsupported format_version {:?}, this build reads {:?}",
                self.format_version, FORMAT_VERSION
            )));
        }
        check_matrix("E", &self.e, self.n)?;
        check_matrix("A", &self.a, self.n)?;
        if let Some(b) = &self.b {
            if b.len() != self.n {
                return Err(Error::Parse(format!(
                    "b has {} entries, expected {}",
                    b.len(),
                    self.n
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("pencil files always serialize")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn pencil(&self) -> Result<Pencil> {
        Pencil::new(to_cmat(&self.e, self.n), to_cmat(&self.a, self.n))
    }

    /// The descriptor system, requiring the optional `b`.
    pub fn system(&self, tol: &Tol) -> Result<DaeSystem> {
        let b = self.b.as_ref().ok_or_else(|| {
            Error::Parse("this command needs an input vector: add a \"b\" field".into())
        })?;
        let bv: CVec = Array1::from_iter(b.iter().map(|e| e.to_complex()));
        DaeSystem::new(to_cmat(&self.e, self.n), to_cmat(&self.a, self.n), bv, tol)
    }

    pub fn from_pencil(p: &Pencil) -> PencilFile {
        PencilFile {
            format_version: FORMAT_VERSION.into(),
            n: p.n(),
            e: from_cmat(&p.e),
            a: from_cmat(&p.a),
            b: None,
        }
    }

    pub fn from_system(sys: &DaeSystem) -> PencilFile {
        let mut file = PencilFile::from_pencil(&sys.pencil);
        file.b = Some(sys.b.iter().map(|&z| Entry::from_complex(z)).collect());
        file
    }
}
