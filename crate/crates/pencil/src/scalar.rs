//! Scalars on the extended complex plane, plus the tolerance bundle shared by
//! the numerical routines.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A point of the extended complex plane `C ∪ {∞}`.
///
/// Spectra of singular-`E` pencils contain the point at infinity, which is
/// treated as a first-class eigenvalue throughout this crate (its chain
/// structure lives on the dual pencil at zero).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtComplex {
    pub fn finite(re: f64, im: f64) -> Self {
        ExtComplex::Finite(Complex64::new(re, im))
    }

    pub fn real(re: f64) -> Self {
        ExtComplex::Finite(Complex64::new(re, 0.0))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtComplex::Infinity)
    }

    pub fn as_finite(&self) -> Option<Complex64> {
        match self {
            ExtComplex::Finite(z) => Some(*z),
            ExtComplex::Infinity => None,
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            ExtComplex::Finite(z) => ExtComplex::Finite(z.conj()),
            ExtComplex::Infinity => ExtComplex::Infinity,
        }
    }

    /// Distance for matching purposes. Infinity matches only infinity
    /// (distance 0); a finite/infinite pair is infinitely far apart.
    pub fn dist(&self, other: &ExtComplex) -> f64 {
        match (self, other) {
            (ExtComplex::Finite(a), ExtComplex::Finite(b)) => (a - b).norm(),
            (ExtComplex::Infinity, ExtComplex::Infinity) => 0.0,
            _ => f64::INFINITY,
        }
    }

    /// True when the two points agree within `tol`, scaled by magnitude for
    /// finite points.
    pub fn matches(&self, other: &ExtComplex, tol: f64) -> bool {
        match (self, other) {
            (ExtComplex::Finite(a), ExtComplex::Finite(b)) => {
                (a - b).norm() <= tol * 1.0f64.max(a.norm()).max(b.norm())
            }
            (ExtComplex::Infinity, ExtComplex::Infinity) => true,
            _ => false,
        }
    }

    /// Deterministic sort key: finite values lexicographically by (re, im),
    /// infinity last.
    pub fn sort_key(&self) -> (u8, f64, f64) {
        match self {
            ExtComplex::Finite(z) => (0, z.re, z.im),
            ExtComplex::Infinity => (1, 0.0, 0.0),
        }
    }
}

impl fmt::Display for ExtComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtComplex::Infinity => write!(f, "inf"),
            ExtComplex::Finite(z) => {
                if z.im == 0.0 {
                    write!(f, "{}", z.re)
                } else if z.re == 0.0 {
                    write!(f, "{}i", z.im)
                } else if z.im < 0.0 {
                    write!(f, "{}{}i", z.re, z.im)
                } else {
                    write!(f, "{}+{}i", z.re, z.im)
                }
            }
        }
    }
}

impl From<Complex64> for ExtComplex {
    fn from(z: Complex64) -> Self {
        ExtComplex::Finite(z)
    }
}

/// Parse an extended-complex literal: `inf`, `3`, `-1.5`, `2i`, `1+2i`,
/// `-1.5-0.5i`, `+i`, `-i`.
pub fn parse_ext_complex(s: &str) -> Option<ExtComplex> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
        return Some(ExtComplex::Infinity);
    }
    parse_complex(s).map(ExtComplex::Finite)
}

/// Parse a finite complex literal (see [`parse_ext_complex`]).
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    if let Some(body) = s.strip_suffix(['i', 'j']) {
        // Split body into "real-part op imag-part" at the last +/- that is not
        // an exponent sign and not the leading sign.
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let c = bytes[idx] as char;
            if (c == '+' || c == '-') && !matches!(bytes[idx - 1] as char, 'e' | 'E') {
                split = Some(idx);
                break;
            }
        }
        match split {
            Some(idx) => {
                let re: f64 = body[..idx].parse().ok()?;
                let imag_str = &body[idx..];
                let im: f64 = match imag_str {
                    "+" => 1.0,
                    "-" => -1.0,
                    other => other.parse().ok()?,
                };
                Some(Complex64::new(re, im))
            }
            None => {
                // Pure imaginary: "2i", "i", "-i".
                let im: f64 = match body {
                    "" | "+" => 1.0,
                    "-" => -1.0,
                    other => other.parse().ok()?,
                };
                Some(Complex64::new(0.0, im))
            }
        }
    } else {
        let re: f64 = s.parse().ok()?;
        Some(Complex64::new(re, 0.0))
    }
}

/// Tolerance bundle threaded through the numerical routines.
///
/// The defaults are the crate's contract; every entry can be overridden (the
/// CLI exposes the first two).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tol {
    /// Relative threshold for SVD rank decisions: singular values below
    /// `rank * sigma_max * max_dim` count as zero.
    pub rank: f64,
    /// Base clustering tolerance for root/eigenvalue grouping; applied
    /// relative to `max(1, |root|)`.
    pub cluster: f64,
    /// Relative regularity threshold for `det(sE - A)` test-node evaluations.
    pub regularity: f64,
    /// Relative residual accepted when a sampled linear solve is checked
    /// against its defining identity.
    pub residual: f64,
    /// Seed for randomized verification sampling (deterministic by default).
    pub seed: u64,
}

impl Default for Tol {
    fn default() -> Self {
        Tol {
            rank: 1e-9,
            cluster: 1e-7,
            regularity: 1e-10,
            residual: 1e-8,
            seed: 0,
        }
    }
}
