//! Structured command output: one [`Report`] per CLI invocation, rendered
//! either as human-readable text or as JSON carrying exactly the same data.

use crate::scalar::{ExtComplex, Tol};
use crate::spectral::SpectralData;
use crate::{CMat, CVec, Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// One spectral table row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigRow {
    pub lambda: ExtComplex,
    /// Chain lengths, longest first.
    pub segre: Vec<usize>,
    /// Root-subspace dimension (algebraic multiplicity).
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedScalar {
    pub name: String,
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedVector {
    pub name: String,
    pub entries: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedMatrix {
    pub name: String,
    pub rows: Vec<Vec<Complex64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedResidual {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

/// Everything a command wants to say: echoed invocation and tolerances,
/// spectral tables, constructed data, residuals and verdicts. The JSON form
/// (`to_json`/`from_json`) round-trips losslessly; the text form (`render`)
/// shows the same fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub tolerances: Tol,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub spectrum: Vec<EigRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacity: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub scalars: Vec<NamedScalar>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vectors: Vec<NamedVector>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub matrices: Vec<NamedMatrix>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub residuals: Vec<NamedResidual>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<Verdict>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn fmt_complex(z: Complex64) -> String {
    ExtComplex::Finite(z).to_string()
}

impl Report {
    pub fn new(command: impl Into<String>, tol: &Tol) -> Report {
        Report {
            command: command.into(),
            tolerances: *tol,
            spectrum: Vec::new(),
            capacity: None,
            scalars: Vec::new(),
            vectors: Vec::new(),
            matrices: Vec::new(),
            residuals: Vec::new(),
            verdicts: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn set_spectrum(&mut self, sd: &SpectralData) {
        self.spectrum = sd
            .eigs
            .iter()
            .map(|e| EigRow {
                lambda: e.lambda,
                segre: e.segre.clone(),
                dim: e.root_dim,
            })
            .collect();
        self.capacity = Some(sd.capacity);
    }

    pub fn push_scalar(&mut self, name: &str, value: Complex64) {
        self.scalars.push(NamedScalar {
            name: name.into(),
            value,
        });
    }

    pub fn push_vector(&mut self, name: &str, v: &CVec) {
        self.vectors.push(NamedVector {
            name: name.into(),
            entries: v.to_vec(),
        });
    }

    pub fn push_matrix(&mut self, name: &str, m: &CMat) {
        self.matrices.push(NamedMatrix {
            name: name.into(),
            rows: m.rows().into_iter().map(|r| r.to_vec()).collect(),
        });
    }

    pub fn push_residual(&mut self, name: &str, value: f64) {
        self.residuals.push(NamedResidual {
            name: name.into(),
            value,
        });
    }

    pub fn push_verdict(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.verdicts.push(Verdict {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    pub fn push_note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// `Some(true)` when every verdict passed, `None` when there are none.
    pub fn overall_pass(&self) -> Option<bool> {
        if self.verdicts.is_empty() {
            None
        } else {
            Some(self.verdicts.iter().all(|v| v.pass))
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn from_json(text: &str) -> Result<Report> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid report: {e}")))
    }

    /// Human-readable rendering of the same content.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let t = &self.tolerances;
        let _ = writeln!(
            out,
            "tolerances: rank {:e}, cluster {:e}, regularity {:e}, residual {:e}, seed {}",
            t.rank, t.cluster, t.regularity, t.residual, t.seed
        );
        if !self.spectrum.is_empty() {
            let _ = writeln!(out, "spectrum:");
            let _ = writeln!(out, "  {:<22} {:<14} dim", "lambda", "chains");
            for row in &self.spectrum {
                let segre = row
                    .segre
                    .iter()
                    .map(|m| m.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                let _ = writeln!(out, "  {:<22} [{segre}]{:<w$} {}", row.lambda.to_string(), "", row.dim,
                    w = 12usize.saturating_sub(segre.len()));
            }
        }
        if let Some(cap) = self.capacity {
            let _ = writeln!(out, "capacity: {cap}");
        }
        for s in &self.scalars {
            let _ = writeln!(out, "{}: {}", s.name, fmt_complex(s.value));
        }
        for v in &self.vectors {
            let entries = v
                .entries
                .iter()
                .map(|&z| fmt_complex(z))
                .collect::<Vec<_>>()
                .join(", ");
            let _ = writeln!(out, "{}: [{entries}]", v.name);
        }
        for m in &self.matrices {
            let _ = writeln!(out, "{}:", m.name);
            for row in &m.rows {
                let entries = row
                    .iter()
                    .map(|&z| fmt_complex(z))
                    .collect::<Vec<_>>()
                    .join(", ");
                let _ = writeln!(out, "  [{entries}]");
            }
        }
        for r in &self.residuals {
            let _ = writeln!(out, "residual {}: {:.3e}", r.name, r.value);
        }
        for v in &self.verdicts {
            let tag = if v.pass { "PASS" } else { "FAIL" };
            if v.detail.is_empty() {
                let _ = writeln!(out, "verdict {}: {tag}", v.name);
            } else {
                let _ = writeln!(out, "verdict {}: {tag} ({})", v.name, v.detail);
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}
