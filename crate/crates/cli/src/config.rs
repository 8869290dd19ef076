//! Fit-spec config files.
//!
//! Line-oriented text. `#` starts a comment. Top-level settings are
//! `key = value` lines; tables are introduced by a `[name]` header and hold
//! one row per line until the next header. A `key = value` line may appear
//! anywhere and is never part of a table.
//!
//! ```text
//! # gradient-augmented fit of ReLU
//! target = relu            # relu | abs | sigmoid | tanh
//! domain = [-8, 8]
//! degree = 2
//! weights = [1, 1]         # λ_0, λ_1, ... shared by all segments
//! surrogate_degree = 13    # sigmoid/tanh/samples only
//! grid_points = 4001
//! out = relu_lg.coeffs     # relative to this file
//! ```
//!
//! Explicit piecewise targets use a `[segments]` table with rows
//! `lo hi : c0 c1 ...` (ascending coefficients); sampled targets use
//! `samples = path` pointing at a two-column `x, y` file. Per-segment weights
//! use a `[weights]` table with one row `λ_0 λ_1 ...` per segment, in order.
//! Exactly one of `target`, `[segments]` and `samples` must be present.

use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};
use sobofit::{default_surrogate_degree, SURROGATE_DEGREE_CAP};

pub const DEFAULT_GRID_POINTS: usize = 4001;
/// Uniform samples drawn from smooth builtins before the surrogate fit.
pub const SMOOTH_BUILTIN_SAMPLES: usize = 10_001;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Relu,
    Abs,
    Sigmoid,
    Tanh,
}

impl Builtin {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "relu" => Some(Builtin::Relu),
            "abs" => Some(Builtin::Abs),
            "sigmoid" => Some(Builtin::Sigmoid),
            "tanh" => Some(Builtin::Tanh),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Relu => "relu",
            Builtin::Abs => "abs",
            Builtin::Sigmoid => "sigmoid",
            Builtin::Tanh => "tanh",
        }
    }

    pub fn eval(self, x: f64) -> f64 {
        match self {
            Builtin::Relu => x.max(0.0),
            Builtin::Abs => x.abs(),
            Builtin::Sigmoid => 1.0 / (1.0 + (-x).exp()),
            Builtin::Tanh => x.tanh(),
        }
    }

    /// Smooth builtins go through the sampled surrogate pipeline.
    pub fn is_smooth(self) -> bool {
        matches!(self, Builtin::Sigmoid | Builtin::Tanh)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentSpec {
    pub lo: f64,
    pub hi: f64,
    pub coeffs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TargetSpec {
    Builtin { kind: Builtin, lo: f64, hi: f64 },
    Segments(Vec<SegmentSpec>),
    Samples { path: PathBuf, domain: Option<(f64, f64)> },
}

impl TargetSpec {
    pub fn uses_surrogate(&self) -> bool {
        match self {
            TargetSpec::Builtin { kind, .. } => kind.is_smooth(),
            TargetSpec::Segments(_) => false,
            TargetSpec::Samples { .. } => true,
        }
    }

    /// Number of segments the fit will see.
    pub fn segment_count(&self) -> usize {
        match self {
            TargetSpec::Builtin { kind, .. } if !kind.is_smooth() => 2,
            TargetSpec::Segments(s) => s.len(),
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    PerOrder(Vec<f64>),
    PerSegment(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitSpecConfig {
    pub target: TargetSpec,
    pub degree: usize,
    pub weights: WeightSpec,
    /// Resolved surrogate degree; `Some` exactly when the target needs a surrogate.
    pub surrogate_degree: Option<usize>,
    pub grid_points: usize,
    /// Output path as written in the file (resolved against the config location by callers).
    pub out: Option<PathBuf>,
}

const KEYS: &[&str] = &[
    "target",
    "domain",
    "degree",
    "weights",
    "surrogate_degree",
    "grid_points",
    "out",
    "samples",
];

struct Raw<'a> {
    origin: &'a str,
    keys: Vec<(&'static str, String, usize)>,
    segments: Option<(usize, Vec<(usize, String)>)>,
    weights_table: Option<(usize, Vec<(usize, String)>)>,
}

impl Raw<'_> {
    fn get(&self, key: &str) -> Option<(&str, usize)> {
        self.keys
            .iter()
            .find(|(k, _, _)| *k == key)
            .map(|(_, v, l)| (v.as_str(), *l))
    }

    fn field_err(&self, field: &str, message: impl Into<String>) -> CliError {
        CliError::Field {
            origin: self.origin.to_string(),
            field: field.to_string(),
            message: message.into(),
        }
    }

    fn line_err(&self, line: usize, message: impl Into<String>) -> CliError {
        CliError::Parse { origin: self.origin.to_string(), line, message: message.into() }
    }
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(head, _)| head).trim()
}

/// Splits a list such as `[1, 2.5]` or `1 2.5` into numbers.
fn parse_numbers(text: &str) -> std::result::Result<Vec<f64>, String> {
    text.trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("`{t}` is not a finite number"))
        })
        .collect()
}

fn parse_count(raw: &Raw, key: &str) -> Result<Option<usize>> {
    raw.get(key)
        .map(|(v, _)| {
            v.parse::<usize>()
                .map_err(|_| raw.field_err(key, format!("expected a nonnegative integer, got `{v}`")))
        })
        .transpose()
}

fn check_weight_row(raw: &Raw, field: &str, row: &[f64], degree: usize) -> Result<()> {
    if row.is_empty() {
        return Err(raw.field_err(field, "at least one weight is required"));
    }
    if let Some(w) = row.iter().find(|w| **w < 0.0) {
        return Err(raw.field_err(field, format!("weights must be no less than zero, got {w}")));
    }
    if row.len() > degree + 1 {
        return Err(raw.field_err(
            field,
            format!(
                "{} weights given (orders 0..{}) but derivative orders above the degree {degree} are not allowed",
                row.len(),
                row.len() - 1
            ),
        ));
    }
    Ok(())
}

/// Parses a config. `origin` names the source in error messages.
pub fn parse_config(text: &str, origin: &str) -> Result<FitSpecConfig> {
    let mut raw = Raw { origin, keys: Vec::new(), segments: None, weights_table: None };
    enum Section {
        None,
        Segments,
        Weights,
    }
    let mut section = Section::None;

    for (idx, full) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(full);
        if line.is_empty() {
            continue;
        }
        if let Some((key, value)) = line.split_once('=') {
            let key = key.trim();
            let Some(&known) = KEYS.iter().find(|k| **k == key) else {
                return Err(raw.line_err(line_no, format!("unknown key `{key}`")));
            };
            if raw.get(known).is_some() {
                return Err(raw.line_err(line_no, format!("duplicate key `{key}`")));
            }
            raw.keys.push((known, value.trim().to_string(), line_no));
            continue;
        }
        if line.starts_with('[') && line.ends_with(']') && parse_numbers(line).is_err() {
            let name = line[1..line.len() - 1].trim();
            let slot = match name {
                "segments" => {
                    section = Section::Segments;
                    &mut raw.segments
                }
                "weights" => {
                    section = Section::Weights;
                    &mut raw.weights_table
                }
                _ => return Err(raw.line_err(line_no, format!("unknown table `[{name}]`"))),
            };
            if slot.is_some() {
                return Err(raw.line_err(line_no, format!("duplicate table `[{name}]`")));
            }
            *slot = Some((line_no, Vec::new()));
            continue;
        }
        let rows = match section {
            Section::Segments => &mut raw.segments,
            Section::Weights => &mut raw.weights_table,
            Section::None => {
                return Err(raw.line_err(line_no, format!("expected `key = value`, got `{line}`")))
            }
        };
        rows.as_mut().unwrap().1.push((line_no, line.to_string()));
    }

    let degree = parse_count(&raw, "degree")?
        .ok_or_else(|| raw.field_err("degree", "missing required key"))?;

    let domain = raw
        .get("domain")
        .map(|(v, line)| {
            let nums = parse_numbers(v).map_err(|m| raw.line_err(line, m))?;
            match nums[..] {
                [lo, hi] if lo < hi => Ok((lo, hi)),
                [_, _] => Err(raw.field_err("domain", "expected lo < hi")),
                _ => Err(raw.field_err("domain", format!("expected [lo, hi], got `{v}`"))),
            }
        })
        .transpose()?;

    let present = [
        raw.get("target").is_some(),
        raw.segments.is_some(),
        raw.get("samples").is_some(),
    ];
    match present.iter().filter(|p| **p).count() {
        0 => {
            return Err(raw.field_err(
                "target",
                "no target given; set `target`, a `[segments]` table or `samples`",
            ))
        }
        1 => {}
        _ => {
            return Err(raw.field_err(
                "target",
                "exactly one of `target`, `[segments]` and `samples` may be given",
            ))
        }
    }

    let target = if let Some((name, _)) = raw.get("target") {
        let kind = Builtin::parse(name).ok_or_else(|| {
            raw.field_err("target", format!("unknown builtin `{name}` (relu, abs, sigmoid, tanh)"))
        })?;
        let (lo, hi) = domain.ok_or_else(|| raw.field_err("domain", "required for builtin targets"))?;
        if !kind.is_smooth() && !(lo < 0.0 && 0.0 < hi) {
            return Err(raw.field_err("domain", format!("{} needs lo < 0 < hi", kind.name())));
        }
        TargetSpec::Builtin { kind, lo, hi }
    } else if let Some((_, rows)) = &raw.segments {
        if domain.is_some() {
            return Err(raw.field_err("domain", "not used with `[segments]`; segments carry their own bounds"));
        }
        if rows.is_empty() {
            return Err(raw.field_err("segments", "table has no rows"));
        }
        let mut segs = Vec::with_capacity(rows.len());
        for (line, row) in rows {
            let (bounds, coeffs) = row
                .split_once(':')
                .ok_or_else(|| raw.line_err(*line, "segment rows look like `lo hi : c0 c1 ...`"))?;
            let bounds = parse_numbers(bounds).map_err(|m| raw.line_err(*line, m))?;
            let coeffs = parse_numbers(coeffs).map_err(|m| raw.line_err(*line, m))?;
            let [lo, hi] = bounds[..] else {
                return Err(raw.line_err(*line, "expected two bounds before `:`"));
            };
            if !(lo < hi) {
                return Err(raw.line_err(*line, format!("segment [{lo}, {hi}] needs lo < hi")));
            }
            if coeffs.is_empty() {
                return Err(raw.line_err(*line, "segment needs at least one coefficient"));
            }
            if let Some(prev) = segs.last().map(|s: &SegmentSpec| s.hi) {
                if lo < prev {
                    return Err(raw.line_err(*line, "segments must be sorted and non-overlapping"));
                }
            }
            segs.push(SegmentSpec { lo, hi, coeffs });
        }
        TargetSpec::Segments(segs)
    } else {
        let (path, _) = raw.get("samples").unwrap();
        if path.is_empty() {
            return Err(raw.field_err("samples", "empty path"));
        }
        TargetSpec::Samples { path: PathBuf::from(path), domain }
    };

    let weights = match (raw.get("weights"), &raw.weights_table) {
        (Some(_), Some(_)) => {
            return Err(raw.field_err("weights", "give either `weights = [...]` or a `[weights]` table, not both"))
        }
        (Some((v, line)), None) => {
            let row = parse_numbers(v).map_err(|m| raw.line_err(line, m))?;
            check_weight_row(&raw, "weights", &row, degree)?;
            WeightSpec::PerOrder(row)
        }
        (None, Some((_, rows))) => {
            let expected = target.segment_count();
            if rows.len() != expected {
                return Err(raw.field_err(
                    "weights",
                    format!("table has {} rows but the target has {expected} segments", rows.len()),
                ));
            }
            let mut table = Vec::with_capacity(rows.len());
            for (line, row) in rows {
                let row = parse_numbers(row).map_err(|m| raw.line_err(*line, m))?;
                check_weight_row(&raw, "weights", &row, degree)?;
                table.push(row);
            }
            WeightSpec::PerSegment(table)
        }
        // λ_0 = λ_1 = 1, capped at the degree
        (None, None) => WeightSpec::PerOrder(vec![1.0; degree.min(1) + 1]),
    };

    let surrogate_degree = match parse_count(&raw, "surrogate_degree")? {
        Some(_) if !target.uses_surrogate() => {
            return Err(raw.field_err(
                "surrogate_degree",
                "only applies to sigmoid, tanh and sample targets",
            ))
        }
        Some(n) if n < degree || n > SURROGATE_DEGREE_CAP => {
            return Err(raw.field_err(
                "surrogate_degree",
                format!("must lie in [{degree}, {SURROGATE_DEGREE_CAP}], got {n}"),
            ))
        }
        Some(n) => Some(n),
        None if target.uses_surrogate() => {
            let n = default_surrogate_degree(degree);
            if n < degree {
                return Err(raw.field_err(
                    "degree",
                    format!("sampled targets support degrees up to {SURROGATE_DEGREE_CAP}"),
                ));
            }
            Some(n)
        }
        None => None,
    };

    let grid_points = parse_count(&raw, "grid_points")?.unwrap_or(DEFAULT_GRID_POINTS);
    if grid_points < 2 {
        return Err(raw.field_err("grid_points", "must be at least 2"));
    }

    let out = match raw.get("out") {
        Some(("", _)) => return Err(raw.field_err("out", "empty path")),
        Some((v, _)) => Some(PathBuf::from(v)),
        None => None,
    };

    Ok(FitSpecConfig { target, degree, weights, surrogate_degree, grid_points, out })
}

/// Reads and parses a config file, resolving relative `samples`/`out`
/// paths against the file's directory.
pub fn load_config(path: &Path) -> Result<FitSpecConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut cfg = parse_config(&text, &path.display().to_string())?;
    let base = path.parent().unwrap_or(Path::new(""));
    if let TargetSpec::Samples { path: p, .. } = &mut cfg.target {
        if p.is_relative() {
            *p = base.join(&*p);
        }
    }
    if let Some(out) = &mut cfg.out {
        if out.is_relative() {
            *out = base.join(&*out);
        }
    }
    Ok(cfg)
}

/// Reads a two-column sample file: `x, y` or `x y` per line, `#` comments,
/// an optional non-numeric header on the first data line.
pub fn parse_samples(text: &str, origin: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut seen_data = false;
    for (idx, full) in text.lines().enumerate() {
        let line = strip_comment(full);
        if line.is_empty() {
            continue;
        }
        let nums = match parse_numbers(line) {
            Ok(n) => n,
            Err(_) if !seen_data => {
                seen_data = true;
                continue;
            }
            Err(m) => {
                return Err(CliError::Parse { origin: origin.into(), line: idx + 1, message: m })
            }
        };
        seen_data = true;
        let [x, y] = nums[..] else {
            return Err(CliError::Parse {
                origin: origin.into(),
                line: idx + 1,
                message: format!("expected two columns, got {}", nums.len()),
            });
        };
        xs.push(x);
        ys.push(y);
    }
    Ok((xs, ys))
}
