//! Coefficient files.
//!
//! ```text
//! sobofit-coeffs v1
//! degree 2
//! 0.7974683544303798
//! 0.5
//! 0.056368670886075944
//! domain -8 8
//! cost 0.41350210970464143
//! condition 101.3
//! residual 0 0.6244725738396626
//! residual 1 0.5063291139240507
//! ```
//!
//! Coefficients are ascending, one per line, in shortest round-trip decimal.
//! Every line after them is optional metadata. `#` starts a comment.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{CliError, Result};
use sobofit::Polynomial;

pub const VERSION_LINE: &str = "sobofit-coeffs v1";

#[derive(Debug, Clone, PartialEq)]
pub struct CoeffFile {
    /// Ascending coefficients, exactly `degree + 1` of them.
    pub coeffs: Vec<f64>,
    pub domain: Option<(f64, f64)>,
    pub cost: Option<f64>,
    pub condition: Option<f64>,
    /// `(order, ∫ (D^k f - D^k p)²)` summed over segments.
    pub residuals: Vec<(usize, f64)>,
}

impl CoeffFile {
    pub fn bare(coeffs: Vec<f64>) -> Self {
        CoeffFile { coeffs, domain: None, cost: None, condition: None, residuals: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn polynomial(&self) -> Polynomial {
        Polynomial::new(self.coeffs.clone()).expect("coefficients validated on parse")
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{VERSION_LINE}").unwrap();
        writeln!(out, "degree {}", self.degree()).unwrap();
        for c in &self.coeffs {
            writeln!(out, "{c}").unwrap();
        }
        if let Some((lo, hi)) = self.domain {
            writeln!(out, "domain {lo} {hi}").unwrap();
        }
        if let Some(c) = self.cost {
            writeln!(out, "cost {c}").unwrap();
        }
        if let Some(c) = self.condition {
            writeln!(out, "condition {c}").unwrap();
        }
        for (k, r) in &self.residuals {
            writeln!(out, "residual {k} {r}").unwrap();
        }
        out
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let err = |line: usize, message: String| CliError::Parse {
            origin: origin.to_string(),
            line,
            message,
        };
        let num = |line: usize, tok: &str| -> Result<f64> {
            tok.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| err(line, format!("`{tok}` is not a finite number")))
        };

        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split_once('#').map_or(l, |(h, _)| h).trim()))
            .filter(|(_, l)| !l.is_empty());

        match lines.next() {
            Some((_, VERSION_LINE)) => {}
            Some((n, other)) => {
                return Err(err(n, format!("expected `{VERSION_LINE}`, got `{other}`")))
            }
            None => return Err(err(1, "empty coefficient file".into())),
        }
        let degree = match lines.next() {
            Some((n, l)) => match l.split_whitespace().collect::<Vec<_>>()[..] {
                ["degree", d] => d
                    .parse::<usize>()
                    .map_err(|_| err(n, format!("bad degree `{d}`")))?,
                _ => return Err(err(n, format!("expected `degree N`, got `{l}`"))),
            },
            None => return Err(err(2, "missing `degree` line".into())),
        };
        let mut coeffs = Vec::with_capacity(degree + 1);
        for _ in 0..=degree {
            let (n, l) = lines
                .next()
                .ok_or_else(|| err(0, format!("expected {} coefficients", degree + 1)))?;
            coeffs.push(num(n, l)?);
        }

        let mut file = CoeffFile::bare(coeffs);
        for (n, l) in lines {
            let toks: Vec<&str> = l.split_whitespace().collect();
            match toks[..] {
                ["domain", lo, hi] => file.domain = Some((num(n, lo)?, num(n, hi)?)),
                ["cost", v] => file.cost = Some(num(n, v)?),
                ["condition", v] => file.condition = Some(num(n, v)?),
                ["residual", k, v] => {
                    let k = k.parse().map_err(|_| err(n, format!("bad order `{k}`")))?;
                    file.residuals.push((k, num(n, v)?));
                }
                _ => return Err(err(n, format!("unrecognized line `{l}`"))),
            }
        }
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.render()).map_err(|e| CliError::io(path, e))
    }
}

/// Column label for a coefficient file: its file stem.
pub fn label_for(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}
