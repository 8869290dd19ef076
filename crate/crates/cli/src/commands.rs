use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::coeffs::{label_for, CoeffFile};
use crate::config::{
    load_config, parse_samples, Builtin, FitSpecConfig, TargetSpec, WeightSpec,
    SMOOTH_BUILTIN_SAMPLES,
};
use crate::error::{CliError, Result};
use crate::format::sig9;
use sobofit::{
    abs_target, compare, error_report, fit, relu_target, surrogate, Error, PiecewiseTarget,
    Polynomial, SampleSet, Segment, SobolevObjective, WeightTable,
};

/// A config turned into something the fitter can consume.
pub struct Problem {
    /// The exact target, or the surrogate standing in for sampled data.
    pub target: PiecewiseTarget,
    pub weights: WeightTable,
    pub degree: usize,
    pub grid_points: usize,
    pub description: String,
}

fn input_error(origin: &str, field: &str, e: Error) -> CliError {
    match e {
        Error::InvalidSamples(_) | Error::InvalidTarget(_) | Error::InvalidDomain { .. } => {
            CliError::Field { origin: origin.into(), field: field.into(), message: e.to_string() }
        }
        other => CliError::Numerical(other),
    }
}

fn weight_table(spec: &WeightSpec, origin: &str) -> Result<WeightTable> {
    match spec {
        WeightSpec::PerOrder(w) => WeightTable::per_order(w.clone()),
        WeightSpec::PerSegment(rows) => WeightTable::per_segment(rows.clone()),
    }
    .map_err(|e| input_error(origin, "weights", e))
}

fn load_samples(path: &Path, domain: Option<(f64, f64)>) -> Result<SampleSet> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let (xs, ys) = parse_samples(&text, &origin)?;
    match domain {
        Some((lo, hi)) => SampleSet::new(xs, ys, lo, hi),
        None => SampleSet::from_points(xs, ys),
    }
    .map_err(|e| input_error(&origin, "samples", e))
}

fn kinked_target(kind: Builtin, lo: f64, hi: f64) -> std::result::Result<PiecewiseTarget, Error> {
    match kind {
        Builtin::Abs => abs_target(lo, hi),
        _ => relu_target(lo, hi),
    }
}

/// Builds the target (exact or surrogate) and weights for a parsed config.
pub fn build_problem(cfg: &FitSpecConfig, origin: &str) -> Result<Problem> {
    let weights = weight_table(&cfg.weights, origin)?;
    let (target, description) = match &cfg.target {
        TargetSpec::Builtin { kind, lo, hi } if !kind.is_smooth() => (
            kinked_target(*kind, *lo, *hi).map_err(|e| input_error(origin, "domain", e))?,
            format!("{} on [{lo}, {hi}]", kind.name()),
        ),
        TargetSpec::Builtin { kind, lo, hi } => {
            let n = cfg.surrogate_degree.expect("smooth targets carry a surrogate degree");
            let samples = SampleSet::uniform(*lo, *hi, SMOOTH_BUILTIN_SAMPLES, |x| kind.eval(x))
                .map_err(|e| input_error(origin, "domain", e))?;
            (
                surrogate(&samples, n)?,
                format!(
                    "{} on [{lo}, {hi}], {SMOOTH_BUILTIN_SAMPLES} samples, surrogate degree {n}",
                    kind.name()
                ),
            )
        }
        TargetSpec::Segments(specs) => {
            let segments = specs
                .iter()
                .map(|s| {
                    let poly = Polynomial::new(s.coeffs.clone())?;
                    Segment::new(s.lo, s.hi, poly)
                })
                .collect::<std::result::Result<Vec<_>, _>>()
                .and_then(PiecewiseTarget::new)
                .map_err(|e| input_error(origin, "segments", e))?;
            let desc = specs
                .iter()
                .map(|s| format!("[{}, {}]", s.lo, s.hi))
                .collect::<Vec<_>>()
                .join(" u ");
            (segments, format!("{} segment(s) {desc}", specs.len()))
        }
        TargetSpec::Samples { path, domain } => {
            let n = cfg.surrogate_degree.expect("sampled targets carry a surrogate degree");
            let samples = load_samples(path, *domain)?;
            let (lo, hi) = samples.domain();
            (
                surrogate(&samples, n)?,
                format!(
                    "{} samples from {} on [{lo}, {hi}], surrogate degree {n}",
                    samples.len(),
                    path.display()
                ),
            )
        }
    };
    Ok(Problem { target, weights, degree: cfg.degree, grid_points: cfg.grid_points, description })
}

/// Fits the problem and packages the result as a coefficient file.
pub fn solve_problem(problem: &Problem) -> Result<(CoeffFile, sobofit::ErrorReport)> {
    let obj = SobolevObjective::new(problem.target.clone(), problem.weights.clone(), problem.degree)?;
    let res = fit(&obj)?;
    let mut coeffs = res.poly.coeffs().to_vec();
    coeffs.resize(problem.degree + 1, 0.0);
    let report = error_report(&problem.target, &res.poly, &problem.weights, problem.grid_points);
    let file = CoeffFile {
        coeffs,
        domain: Some(problem.target.domain()),
        cost: Some(res.cost),
        condition: Some(res.gram_condition_estimate),
        residuals: report.l2_sq_by_order.iter().copied().enumerate().collect(),
    };
    Ok((file, report))
}

fn default_out(config: &Path) -> PathBuf {
    config.with_extension("coeffs")
}

fn weights_text(spec: &WeightSpec) -> String {
    let row = |w: &[f64]| format!("[{}]", w.iter().map(|v| sig9(*v)).collect::<Vec<_>>().join(", "));
    match spec {
        WeightSpec::PerOrder(w) => row(w),
        WeightSpec::PerSegment(rows) => rows.iter().map(|r| row(r)).collect::<Vec<_>>().join(" "),
    }
}

pub fn cmd_fit(config: &Path, quiet: bool, out: &mut dyn Write) -> Result<()> {
    let cfg = load_config(config)?;
    let origin = config.display().to_string();
    let problem = build_problem(&cfg, &origin)?;
    let (file, report) = solve_problem(&problem)?;
    let dest = cfg.out.clone().unwrap_or_else(|| default_out(config));
    file.write(&dest)?;
    if quiet {
        return Ok(());
    }

    let mut s = String::new();
    writeln!(s, "target      {}", problem.description).unwrap();
    writeln!(s, "degree      {}", problem.degree).unwrap();
    writeln!(s, "weights     {}", weights_text(&cfg.weights)).unwrap();
    writeln!(s, "coefficients (ascending)").unwrap();
    for (i, c) in file.coeffs.iter().enumerate() {
        writeln!(s, "  x^{i:<3} {}", sig9(*c)).unwrap();
    }
    let desc: Vec<String> = file.coeffs.iter().rev().map(|c| sig9(*c)).collect();
    writeln!(s, "descending  [{}]", desc.join(", ")).unwrap();
    writeln!(s, "cost        {}", sig9(file.cost.unwrap_or(0.0))).unwrap();
    writeln!(s, "condition   {}", sig9(file.condition.unwrap_or(0.0))).unwrap();
    for (k, r) in &file.residuals {
        writeln!(s, "residual    order {k}: {}", sig9(*r)).unwrap();
    }
    writeln!(
        s,
        "max error   {} at x = {} ({} grid points per segment)",
        sig9(report.linf_grid),
        sig9(report.linf_argmax),
        report.grid_points
    )
    .unwrap();
    writeln!(s, "wrote       {}", dest.display()).unwrap();
    out.write_all(s.as_bytes()).map_err(|e| CliError::io("<stdout>", e))
}

/// What the `target` column of `sample` shows.
pub enum SampleTarget {
    /// A builtin evaluated on the whole real line.
    Function(Builtin),
    /// A builtin restricted to a config's domain.
    Windowed(Builtin, f64, f64),
    Piecewise(PiecewiseTarget),
}

impl SampleTarget {
    /// A builtin name, or a path to a config whose target is used.
    pub fn resolve(spec: &str) -> Result<Self> {
        if let Some(kind) = Builtin::parse(spec) {
            return Ok(SampleTarget::Function(kind));
        }
        let path = Path::new(spec);
        let cfg = load_config(path)?;
        Ok(match &cfg.target {
            TargetSpec::Builtin { kind, lo, hi } => SampleTarget::Windowed(*kind, *lo, *hi),
            _ => SampleTarget::Piecewise(build_problem(&cfg, spec)?.target),
        })
    }

    pub fn eval(&self, x: f64) -> Option<f64> {
        match self {
            SampleTarget::Function(kind) => Some(kind.eval(x)),
            SampleTarget::Windowed(kind, lo, hi) => (*lo <= x && x <= *hi).then(|| kind.eval(x)),
            SampleTarget::Piecewise(t) => t.eval(x),
        }
    }
}

/// Grid `from, from + step, ...` up to `to`, with round-off near zero snapped to 0.
pub fn sample_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(from.is_finite() && to.is_finite() && step.is_finite()) {
        return Err(CliError::Usage("--from, --to and --step must be finite".into()));
    }
    if !(step > 0.0) {
        return Err(CliError::Usage(format!("--step must be positive, got {step}")));
    }
    if !(from < to) {
        return Err(CliError::Usage(format!("--from must be below --to, got {from} and {to}")));
    }
    let n = ((to - from) / step + 1e-9).floor() as usize + 1;
    Ok((0..n)
        .map(|i| {
            let x = from + i as f64 * step;
            if x.abs() < 1e-6 * step {
                0.0
            } else {
                x
            }
        })
        .collect())
}

pub fn render_samples(target: &SampleTarget, fits: &[(String, Polynomial)], grid: &[f64]) -> String {
    let mut s = String::from("x,target");
    for (label, _) in fits {
        s.push(',');
        s.push_str(label);
    }
    s.push('\n');
    for &x in grid {
        s.push_str(&sig9(x));
        s.push(',');
        if let Some(y) = target.eval(x) {
            s.push_str(&sig9(y));
        }
        for (_, p) in fits {
            s.push(',');
            s.push_str(&sig9(p.eval(x)));
        }
        s.push('\n');
    }
    s
}

fn load_fits(paths: &[PathBuf]) -> Result<Vec<(String, Polynomial)>> {
    if paths.is_empty() {
        return Err(CliError::Usage("at least one coefficient file is required".into()));
    }
    paths
        .iter()
        .map(|p| Ok((label_for(p), CoeffFile::read(p)?.polynomial())))
        .collect()
}

/// Everything is read and computed before the first byte is written.
pub fn cmd_sample(
    coeffs: &[PathBuf],
    target: &str,
    from: f64,
    to: f64,
    step: f64,
    out: &mut dyn Write,
) -> Result<()> {
    let grid = sample_grid(from, to, step)?;
    let fits = load_fits(coeffs)?;
    let target = SampleTarget::resolve(target)?;
    let csv = render_samples(&target, &fits, &grid);
    out.write_all(csv.as_bytes()).map_err(|e| CliError::io("<stdout>", e))
}

pub fn render_comparison(rows: &[(String, sobofit::ErrorReport)], csv: bool) -> String {
    let orders = rows.iter().map(|(_, r)| r.l2_sq_by_order.len()).max().unwrap_or(0);
    let mut header = vec!["label".to_string()];
    header.extend((0..orders).map(|k| format!("l2sq_{k}")));
    header.extend(["linf".to_string(), "linf_x".to_string(), "weighted_cost".to_string()]);
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|(label, r)| {
            let mut row = vec![label.clone()];
            row.extend((0..orders).map(|k| r.l2_sq_by_order.get(k).map_or(String::new(), |v| sig9(*v))));
            row.extend([sig9(r.linf_grid), sig9(r.linf_argmax), sig9(r.total_weighted_cost)]);
            row
        })
        .collect();

    let mut s = String::new();
    if csv {
        for row in std::iter::once(&header).chain(&body) {
            s.push_str(&row.join(","));
            s.push('\n');
        }
        return s;
    }
    let widths: Vec<usize> = (0..header.len())
        .map(|c| {
            std::iter::once(&header)
                .chain(&body)
                .map(|r| r[c].chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    for row in std::iter::once(&header).chain(&body) {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(c, (cell, w))| if c == 0 { format!("{cell:<w$}") } else { format!("{cell:>w$}") })
            .collect();
        s.push_str(cells.join("  ").trim_end());
        s.push('\n');
    }
    s
}

pub fn cmd_compare(config: &Path, coeffs: &[PathBuf], csv: bool, out: &mut dyn Write) -> Result<()> {
    let fits = load_fits(coeffs)?;
    let cfg = load_config(config)?;
    let problem = build_problem(&cfg, &config.display().to_string())?;
    let rows = compare(&problem.target, &fits, &problem.weights, problem.grid_points);
    out.write_all(render_comparison(&rows, csv).as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_counts_and_zero_snap() {
        let g = sample_grid(-8.0, 8.0, 0.1).unwrap();
        assert_eq!(g.len(), 161);
        assert_eq!(g[80], 0.0);
        assert_eq!(g[160], -8.0 + 160.0 * 0.1);
        assert_eq!(sample_grid(0.0, 1.0, 0.3).unwrap().len(), 4);
        assert!(sample_grid(1.0, 0.0, 0.1).is_err());
        assert!(sample_grid(0.0, 1.0, 0.0).is_err());
        assert!(sample_grid(0.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn sample_rows_leave_gaps_empty() {
        let t = PiecewiseTarget::new(vec![
            Segment::new(-6.0, -3.0, Polynomial::zero()).unwrap(),
            Segment::new(3.0, 6.0, Polynomial::monomial(1)).unwrap(),
        ])
        .unwrap();
        let fits = vec![("p".to_string(), Polynomial::new(vec![1.1110537229, 0.5, 0.054235537]).unwrap())];
        let csv = render_samples(&SampleTarget::Piecewise(t), &fits, &[-4.0, 0.0, 6.0]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x,target,p");
        assert_eq!(lines[1], "-4,0,-0.0211776851");
        assert_eq!(lines[2], "0,,1.11105372");
        assert!(lines[3].starts_with("6,6,6.063533"));
    }

    #[test]
    fn comparison_table_alignment() {
        let rep = |a: f64| sobofit::ErrorReport {
            l2_sq_by_order: vec![a, 2.0 * a],
            linf_grid: a,
            linf_argmax: 0.0,
            grid_points: 3,
            total_weighted_cost: 3.0 * a,
        };
        let rows = vec![("ls".to_string(), rep(1.0)), ("long_label".to_string(), rep(0.125))];
        let table = render_comparison(&rows, false);
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("label     "));
        assert_eq!(lines[1].len(), lines[2].len());
        let csv = render_comparison(&rows, true);
        assert_eq!(csv.lines().next(), Some("label,l2sq_0,l2sq_1,linf,linf_x,weighted_cost"));
        assert_eq!(csv.lines().nth(2), Some("long_label,0.125,0.25,0.125,0,0.375"));
    }
}
