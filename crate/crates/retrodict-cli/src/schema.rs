//! On-disk JSON schemas (plans, matrices, targets, errors), the inline
//! complex-coefficient syntax, and the canonical input hash.
//!
//! Every document rejects unknown fields on read, and serialization is
//! deterministic: fixed field order, no timestamps.

use serde::{Deserialize, Serialize};

use retrodict::multiport::MultiportUnitary;
use retrodict::C64;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for ComplexJson {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<&ComplexJson> for C64 {
    fn from(z: &ComplexJson) -> Self {
        C64::new(z.re, z.im)
    }
}

/// Complex vector as parallel real/imaginary arrays.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorJson {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl VectorJson {
    pub fn from_complex(v: &[C64]) -> Self {
        Self {
            re: v.iter().map(|z| z.re).collect(),
            im: v.iter().map(|z| z.im).collect(),
        }
    }

    pub fn to_complex(&self) -> Result<Vec<C64>, String> {
        if self.re.len() != self.im.len() {
            return Err(format!(
                "re has {} entries but im has {}",
                self.re.len(),
                self.im.len()
            ));
        }
        Ok(self
            .re
            .iter()
            .zip(&self.im)
            .map(|(&re, &im)| C64::new(re, im))
            .collect())
    }
}

/// Matrix schema shared with the plan files: row-major re/im grids.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_unitary(u: &MultiportUnitary<f64>) -> Self {
        let dim = u.dim();
        let grid = |pick: fn(C64) -> f64| {
            (0..dim)
                .map(|n| (0..dim).map(|m| pick(u.get(n, m))).collect())
                .collect()
        };
        Self {
            dim,
            re: grid(|z| z.re),
            im: grid(|z| z.im),
        }
    }

    pub fn to_unitary(&self) -> Result<MultiportUnitary<f64>, String> {
        let dim = self.dim;
        let shape_ok = |grid: &Vec<Vec<f64>>| {
            grid.len() == dim && grid.iter().all(|row| row.len() == dim)
        };
        if !shape_ok(&self.re) || !shape_ok(&self.im) {
            return Err(format!("matrix grids do not form a {dim}x{dim} square"));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for n in 0..dim {
            for m in 0..dim {
                entries.push(C64::new(self.re[n][m], self.im[n][m]));
            }
        }
        MultiportUnitary::from_entries(dim, entries).map_err(|e| e.to_string())
    }
}

/// Target file schema: unnormalized coefficients, normalized on ingest.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetJson {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

/// A complete plan document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    /// Tool version that produced the file.
    pub version: String,
    /// FNV-1a hash of the canonical inputs (target, unitary source, mode,
    /// phase).
    pub input_hash: String,
    /// Where the unitary came from ("dft", "file:...", "optimized:...").
    pub provenance: String,
    /// "multi-input" or "single-input".
    pub mode: String,
    /// Coherent phase, present for single-input plans.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase: Option<f64>,
    /// Normalized target coefficients c_0..c_N.
    pub target: VectorJson,
    pub unitary: MatrixJson,
    /// beta_1..beta_N.
    pub betas: VectorJson,
    /// Roots g_1..g_N.
    pub g: VectorJson,
    pub g0: ComplexJson,
    /// Normalization constant of the factorized target.
    pub k: ComplexJson,
    pub kbar: ComplexJson,
    /// |kbar|^2.
    pub success: f64,
    /// success / |k|^2.
    pub ratio: f64,
}

/// Machine-readable error envelope printed on standard error.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorJson {
    pub error: ErrorBody,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
}

/// One row of the reference-reproduction report.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReproRow {
    pub case: String,
    pub quantity: String,
    pub paper: f64,
    pub computed: f64,
    pub diff: f64,
    pub pass: bool,
}

/// 64-bit FNV-1a.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Parse one complex literal: `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`, `2.5e-3i`.
pub fn parse_complex(input: &str) -> Result<C64, String> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty coefficient".into());
    }
    let parse_part = |p: &str, unit_default: f64| -> Result<f64, String> {
        match p {
            "" | "+" => Ok(unit_default),
            "-" => Ok(-unit_default),
            other => other
                .parse::<f64>()
                .map_err(|_| format!("cannot parse '{other}' in '{input}'")),
        }
    };
    match s.strip_suffix(['i', 'I']) {
        None => Ok(C64::new(parse_part(&s, 1.0)?, 0.0)),
        Some(body) => {
            // Last sign that starts the imaginary part, skipping exponents
            // and the leading sign.
            let mut split = None;
            for (idx, ch) in body.char_indices().skip(1) {
                if (ch == '+' || ch == '-')
                    && !matches!(body.as_bytes()[idx - 1], b'e' | b'E')
                {
                    split = Some(idx);
                }
            }
            match split {
                Some(idx) => Ok(C64::new(
                    parse_part(&body[..idx], 1.0)?,
                    parse_part(&body[idx..], 1.0)?,
                )),
                None => Ok(C64::new(0.0, parse_part(body, 1.0)?)),
            }
        }
    }
}

/// Parse a comma-separated inline coefficient list.
pub fn parse_inline_coefficients(input: &str) -> Result<Vec<C64>, String> {
    input.split(',').map(parse_complex).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals_cover_the_syntax() {
        let cases = [
            ("1", C64::new(1.0, 0.0)),
            ("-0.5", C64::new(-0.5, 0.0)),
            ("2i", C64::new(0.0, 2.0)),
            ("-i", C64::new(0.0, -1.0)),
            ("i", C64::new(0.0, 1.0)),
            ("1+2i", C64::new(1.0, 2.0)),
            ("1-2i", C64::new(1.0, -2.0)),
            ("-1.5+0.25i", C64::new(-1.5, 0.25)),
            ("1e-3i", C64::new(0.0, 1e-3)),
            ("2.5e-3+1E2i", C64::new(2.5e-3, 1e2)),
            (" 0.3 - 0.4i ", C64::new(0.3, -0.4)),
            ("1+i", C64::new(1.0, 1.0)),
        ];
        for (text, expect) in cases {
            let got = parse_complex(text).unwrap();
            assert!(
                (got - expect).norm() < 1e-15,
                "'{text}' parsed as {got}, expected {expect}"
            );
        }
        assert!(parse_complex("nonsense").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn inline_lists_split_on_commas() {
        let v = parse_inline_coefficients("1, 1+0.5i, -2i").unwrap();
        assert_eq!(v.len(), 3);
        assert!((v[1] - C64::new(1.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn fnv_is_stable() {
        assert_eq!(fnv1a64(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a64(b"a"), 0xaf63dc4c8601ec8c);
    }
}
