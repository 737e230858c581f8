//! Parameter sweeps behind the purification and amplification figures, and
//! their CSV emission.
//!
//! Every value in a table comes from [`crate::analytic`]. Rows whose
//! parameters hit a degenerate or zero-density case are kept, zero-filled,
//! with `degenerate = 1`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::analytic::{self, CssParams, MixedCss, TapSetting};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid sweep spec for {figure}: {}", problems.join("; "))]
    Schema {
        figure: String,
        problems: Vec<String>,
    },

    #[error("unknown figure id {0:?}")]
    UnknownFigure(String),

    #[error("row {row} has {got} values, table has {want} columns")]
    Ragged { row: usize, got: usize, want: usize },

    #[error("non-finite value in row {row}, column {column}")]
    NonFinite { row: usize, column: String },

    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv encoding failed: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FigureId {
    Fig2Densities,
    Fig3Densities,
    Fig4GainVsKPhi0,
    Fig5GainVsKPhiPi,
    Fig6PoutVsPin,
    Fig7GainVsAlpha,
    Fig8GainAndDensityVsT,
    ConcatScan,
}

impl FigureId {
    pub const ALL: [FigureId; 8] = [
        FigureId::Fig2Densities,
        FigureId::Fig3Densities,
        FigureId::Fig4GainVsKPhi0,
        FigureId::Fig5GainVsKPhiPi,
        FigureId::Fig6PoutVsPin,
        FigureId::Fig7GainVsAlpha,
        FigureId::Fig8GainAndDensityVsT,
        FigureId::ConcatScan,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FigureId::Fig2Densities => "fig2_densities",
            FigureId::Fig3Densities => "fig3_densities",
            FigureId::Fig4GainVsKPhi0 => "fig4_gain_vs_k_phi0",
            FigureId::Fig5GainVsKPhiPi => "fig5_gain_vs_k_phipi",
            FigureId::Fig6PoutVsPin => "fig6_pout_vs_pin",
            FigureId::Fig7GainVsAlpha => "fig7_gain_vs_alpha",
            FigureId::Fig8GainAndDensityVsT => "fig8_gain_and_density_vs_T",
            FigureId::ConcatScan => "concat_scan",
        }
    }

    /// Conventional output file name, `<figure_id>.csv`.
    pub fn file_name(&self) -> String {
        format!("{}.csv", self.as_str())
    }

    fn required_fixed(&self) -> &'static [&'static str] {
        match self {
            FigureId::Fig2Densities | FigureId::Fig3Densities => &["T", "alpha", "phi"],
            FigureId::Fig4GainVsKPhi0 | FigureId::Fig5GainVsKPhiPi => {
                &["T", "alpha", "phi", "p_in"]
            }
            FigureId::Fig6PoutVsPin => &["T", "alpha"],
            FigureId::Fig7GainVsAlpha => &["T", "p_in"],
            FigureId::Fig8GainAndDensityVsT => &["alpha", "p_in"],
            FigureId::ConcatScan => &[],
        }
    }

    fn axes(&self) -> &'static [&'static str] {
        match self {
            FigureId::Fig2Densities
            | FigureId::Fig3Densities
            | FigureId::Fig4GainVsKPhi0
            | FigureId::Fig5GainVsKPhiPi => &["k"],
            FigureId::Fig6PoutVsPin => &["p_in"],
            FigureId::Fig7GainVsAlpha => &["alpha"],
            FigureId::Fig8GainAndDensityVsT => &["T"],
            FigureId::ConcatScan => &["alpha", "p_in"],
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FigureId::ALL
            .iter()
            .copied()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| SweepError::UnknownFigure(s.to_string()))
    }
}

/// One sweep axis: `start, start + step, ...` up to `stop` inclusive.
#[derive(Debug, Clone, PartialEq)]
pub struct GridAxis {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridAxis {
    pub fn new(name: &str, start: f64, stop: f64, step: f64) -> Self {
        Self {
            name: name.to_string(),
            start,
            stop,
            step,
        }
    }

    /// `floor((stop - start) / step) + 1`, with a small allowance so that
    /// decimal steps land on `stop`.
    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn value(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.step > 0.0 && self.step.is_finite()) {
            out.push(format!("axis {}: step must be > 0", self.name));
        }
        if !(self.start < self.stop) || !self.start.is_finite() || !self.stop.is_finite() {
            out.push(format!("axis {}: start must be < stop", self.name));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub figure: FigureId,
    pub fixed: BTreeMap<String, f64>,
    pub grid: Vec<GridAxis>,
}

impl SweepSpec {
    /// Defaults: `T = 1/2`, `α = 1`, `p_in = 1/2`; k on `[-4, 4]` step 0.01,
    /// p_in step 0.001, α step 0.01, T step 0.005.
    pub fn default_for(figure: FigureId) -> Self {
        let fixed = |pairs: &[(&str, f64)]| -> BTreeMap<String, f64> {
            pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
        };
        let k_axis = || vec![GridAxis::new("k", -4.0, 4.0, 0.01)];
        let (fixed, grid) = match figure {
            FigureId::Fig2Densities => {
                (fixed(&[("T", 0.5), ("alpha", 1.0), ("phi", 0.0)]), k_axis())
            }
            FigureId::Fig3Densities => {
                (fixed(&[("T", 0.5), ("alpha", 1.0), ("phi", PI)]), k_axis())
            }
            FigureId::Fig4GainVsKPhi0 => (
                fixed(&[("T", 0.5), ("alpha", 1.0), ("phi", 0.0), ("p_in", 0.5)]),
                k_axis(),
            ),
            FigureId::Fig5GainVsKPhiPi => (
                fixed(&[("T", 0.5), ("alpha", 1.0), ("phi", PI), ("p_in", 0.5)]),
                k_axis(),
            ),
            FigureId::Fig6PoutVsPin => (
                fixed(&[("T", 0.5), ("alpha", 1.0)]),
                vec![GridAxis::new("p_in", 0.001, 0.999, 0.001)],
            ),
            FigureId::Fig7GainVsAlpha => (
                fixed(&[("T", 0.5), ("p_in", 0.5)]),
                vec![GridAxis::new("alpha", 0.01, 3.0, 0.01)],
            ),
            FigureId::Fig8GainAndDensityVsT => (
                fixed(&[("alpha", 1.0), ("p_in", 0.5)]),
                vec![GridAxis::new("T", 0.005, 1.0, 0.005)],
            ),
            FigureId::ConcatScan => (
                BTreeMap::new(),
                vec![
                    GridAxis::new("alpha", 0.05, 2.0, 0.01),
                    GridAxis::new("p_in", 0.01, 0.99, 0.01),
                ],
            ),
        };
        Self {
            figure,
            fixed,
            grid,
        }
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        let mut problems = Vec::new();
        for key in self.figure.required_fixed() {
            match self.fixed.get(*key) {
                None => problems.push(format!("missing fixed parameter {key}")),
                Some(v) if !v.is_finite() => {
                    problems.push(format!("fixed parameter {key} is not finite"))
                }
                _ => {}
            }
        }
        for key in self.fixed.keys() {
            if !self.figure.required_fixed().contains(&key.as_str()) {
                problems.push(format!("unexpected fixed parameter {key}"));
            }
        }
        let want = self.figure.axes();
        let got: Vec<&str> = self.grid.iter().map(|a| a.name.as_str()).collect();
        if got != want {
            problems.push(format!("grid axes {got:?} do not match {want:?}"));
        }
        for axis in &self.grid {
            problems.extend(axis.problems());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(SweepError::Schema {
                figure: self.figure.to_string(),
                problems,
            })
        }
    }

    fn get(&self, key: &str) -> f64 {
        self.fixed[key]
    }

    fn describe_fixed(&self) -> String {
        self.fixed
            .iter()
            .map(|(k, v)| format!("{k}={}", format_sig(*v, 12)))
            .collect::<Vec<_>>()
            .join(", ")
    }

    fn describe_grid(&self) -> String {
        self.grid
            .iter()
            .map(|a| {
                format!(
                    "{} from {} to {} step {}",
                    a.name,
                    format_sig(a.start, 12),
                    format_sig(a.stop, 12),
                    format_sig(a.step, 12)
                )
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: &str, unit: &str) -> Self {
        Self {
            name: name.to_string(),
            unit: unit.to_string(),
        }
    }

    pub fn header(&self) -> String {
        format!("{}[{}]", self.name, self.unit)
    }
}

/// Rectangular, labelled result of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    columns: Vec<Column>,
    rows: Vec<Vec<f64>>,
    metadata: Vec<(String, String)>,
    timestamp: Option<String>,
}

impl SweepTable {
    pub fn new(columns: Vec<Column>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            metadata: Vec::new(),
            timestamp: None,
        }
    }

    pub fn with_metadata(mut self, key: &str, value: impl Into<String>) -> Self {
        self.metadata.push((key.to_string(), value.into()));
        self
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<(), SweepError> {
        if row.len() != self.columns.len() {
            return Err(SweepError::Ragged {
                row: self.rows.len(),
                got: row.len(),
                want: self.columns.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn metadata(&self) -> &[(String, String)] {
        &self.metadata
    }

    pub fn timestamp(&self) -> Option<&str> {
        self.timestamp.as_deref()
    }

    /// Stamps the table with the current UTC time.
    pub fn stamped(mut self) -> Self {
        self.timestamp =
            Some(chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true));
        self
    }

    /// Drops the timestamp so that emission is byte-reproducible.
    pub fn reproducible(mut self) -> Self {
        self.timestamp = None;
        self
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Values of one column, by name.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn check_finite(&self) -> Result<(), SweepError> {
        for (r, row) in self.rows.iter().enumerate() {
            if let Some(c) = row.iter().position(|v| !v.is_finite()) {
                return Err(SweepError::NonFinite {
                    row: r,
                    column: self.columns[c].name.clone(),
                });
            }
        }
        Ok(())
    }
}

/// Evaluates `spec` row by row. The result is stamped with the current time;
/// call [`SweepTable::reproducible`] before emitting for byte-stable output.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable, SweepError> {
    spec.validate()?;
    let mut table = SweepTable::new(columns_for(spec.figure))
        .with_metadata("figure_id", spec.figure.as_str())
        .with_metadata("fixed", spec.describe_fixed())
        .with_metadata("grid", spec.describe_grid())
        .with_metadata("version", concat!("css-purify ", env!("CARGO_PKG_VERSION")));

    match spec.figure {
        FigureId::ConcatScan => {
            let (alphas, pins) = (&spec.grid[0], &spec.grid[1]);
            for i in 0..alphas.len() {
                for j in 0..pins.len() {
                    let (alpha, p_in) = (alphas.value(i), pins.value(j));
                    let row = match analytic::concatenate(p_in, alpha) {
                        Ok(p) => vec![alpha, p_in, p, p - p_in, 0.0],
                        Err(_) => vec![alpha, p_in, 0.0, 0.0, 1.0],
                    };
                    table.push_row(row)?;
                }
            }
        }
        figure => {
            let axis = &spec.grid[0];
            let width = table.columns().len();
            for i in 0..axis.len() {
                let x = axis.value(i);
                let row = match eval_row(figure, spec, x) {
                    Some(values) => {
                        let mut row = vec![x];
                        row.extend(values);
                        row.push(0.0);
                        row
                    }
                    None => {
                        let mut row = vec![0.0; width];
                        row[0] = x;
                        row[width - 1] = 1.0;
                        row
                    }
                };
                table.push_row(row)?;
            }
        }
    }
    table.check_finite()?;
    Ok(table.stamped())
}

fn columns_for(figure: FigureId) -> Vec<Column> {
    let c = Column::new;
    let mut cols = match figure {
        FigureId::Fig2Densities | FigureId::Fig3Densities => {
            vec![c("k", "1"), c("P_C", "1/k"), c("P_0", "1/k")]
        }
        FigureId::Fig4GainVsKPhi0 | FigureId::Fig5GainVsKPhiPi => vec![
            c("k", "1"),
            c("theta", "rad"),
            c("p_out", "1"),
            c("gain", "1"),
            c("P_C", "1/k"),
            c("P_0", "1/k"),
        ],
        FigureId::Fig6PoutVsPin => vec![
            c("p_in", "1"),
            c("p_out_phi0", "1"),
            c("p_out_phipi", "1"),
            c("improvement_phi0", "1"),
            c("improvement_phipi", "1"),
        ],
        FigureId::Fig7GainVsAlpha => {
            vec![c("alpha", "1"), c("gain_phi0", "1"), c("gain_phipi", "1")]
        }
        FigureId::Fig8GainAndDensityVsT => vec![
            c("T", "1"),
            c("gain_phi0", "1"),
            c("density_phi0", "1/k"),
            c("gain_phipi", "1"),
            c("density_phipi", "1/k"),
        ],
        FigureId::ConcatScan => vec![
            c("alpha", "1"),
            c("p_in", "1"),
            c("p_final", "1"),
            c("delta", "1"),
        ],
    };
    cols.push(c("degenerate", "flag"));
    cols
}

/// Optimal-outcome purification at one setting: `(p_out, P_C(k_opt))`.
fn optimal_purify(alpha: f64, phi: f64, t: f64, p_in: f64) -> Option<(f64, f64)> {
    let params = CssParams::new(alpha, phi).ok()?;
    let k = analytic::optimal_k(&params, 1.0 - t).ok()?;
    let out = analytic::purify(
        &MixedCss::new(params, p_in).ok()?,
        &TapSetting::new(t, k).ok()?,
    )
    .ok()?;
    Some((out.state.p(), out.density_css))
}

/// Values after the axis column, or `None` for a degenerate point.
fn eval_row(figure: FigureId, spec: &SweepSpec, x: f64) -> Option<Vec<f64>> {
    match figure {
        FigureId::Fig2Densities | FigureId::Fig3Densities => {
            let params = CssParams::new(spec.get("alpha"), spec.get("phi")).ok()?;
            let pc = analytic::homodyne_density_css(x, &params, spec.get("T")).ok()?;
            Some(vec![pc, analytic::homodyne_density_mix(x)])
        }
        FigureId::Fig4GainVsKPhi0 | FigureId::Fig5GainVsKPhiPi => {
            let params = CssParams::new(spec.get("alpha"), spec.get("phi")).ok()?;
            let p_in = spec.get("p_in");
            let state = MixedCss::new(params, p_in).ok()?;
            let out = analytic::purify(&state, &TapSetting::new(spec.get("T"), x).ok()?).ok()?;
            Some(vec![
                out.theta,
                out.state.p(),
                out.state.p() / p_in,
                out.density_css,
                out.density_mix,
            ])
        }
        FigureId::Fig6PoutVsPin => {
            let (t, alpha) = (spec.get("T"), spec.get("alpha"));
            let (p0, _) = optimal_purify(alpha, 0.0, t, x)?;
            let (pp, _) = optimal_purify(alpha, PI, t, x)?;
            Some(vec![p0, pp, p0 - x, pp - x])
        }
        FigureId::Fig7GainVsAlpha => {
            let (t, p_in) = (spec.get("T"), spec.get("p_in"));
            let (p0, _) = optimal_purify(x, 0.0, t, p_in)?;
            let (pp, _) = optimal_purify(x, PI, t, p_in)?;
            Some(vec![p0 / p_in, pp / p_in])
        }
        FigureId::Fig8GainAndDensityVsT => {
            let (alpha, p_in) = (spec.get("alpha"), spec.get("p_in"));
            let (p0, d0) = optimal_purify(alpha, 0.0, x, p_in)?;
            let (pp, dp) = optimal_purify(alpha, PI, x, p_in)?;
            Some(vec![p0 / p_in, d0, pp / p_in, dp])
        }
        FigureId::ConcatScan => unreachable!("two-axis sweep handled by run_sweep"),
    }
}

/// `%.{digits}g`-style formatting: fixed notation for exponents in
/// `[-5, digits)`, scientific otherwise, trailing zeros trimmed.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Renders the table as CSV: `#` metadata lines, a `name[unit]` header,
/// then one record per row with 12 significant digits, LF-terminated.
pub fn write_csv<W: Write>(table: &SweepTable, mut out: W) -> Result<(), SweepError> {
    table.check_finite()?;
    let mut buf = Vec::new();
    for (k, v) in &table.metadata {
        writeln!(buf, "# {k}: {v}").expect("write to Vec");
    }
    if let Some(ts) = &table.timestamp {
        writeln!(buf, "# generated: {ts}").expect("write to Vec");
    }
    {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(&mut buf);
        w.write_record(table.columns.iter().map(Column::header))?;
        for row in &table.rows {
            w.write_record(row.iter().map(|v| format_sig(*v, 12)))?;
        }
        w.flush().map_err(|e| SweepError::Csv(e.into()))?;
    }
    out.write_all(&buf).map_err(|source| SweepError::Io {
        path: PathBuf::from("<writer>"),
        source,
    })
}

/// Writes the table to `path`. Nothing is written if the table holds a
/// non-finite value.
pub fn emit_csv(table: &SweepTable, path: &Path) -> Result<(), SweepError> {
    let mut buf = Vec::new();
    write_csv(table, &mut buf)?;
    std::fs::write(path, buf).map_err(|source| SweepError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_sig_cases() {
        assert_eq!(format_sig(0.0, 12), "0");
        assert_eq!(format_sig(-0.0, 12), "0");
        assert_eq!(format_sig(1.0, 12), "1");
        assert_eq!(format_sig(0.5, 12), "0.5");
        assert_eq!(format_sig(-4.0, 12), "-4");
        assert_eq!(format_sig(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_sig(std::f64::consts::PI, 12), "3.14159265359");
        assert_eq!(format_sig(1.5e-7, 12), "1.5e-7");
        assert_eq!(format_sig(123456789012345.0, 12), "1.23456789012e14");
        assert_eq!(format_sig(0.00012, 12), "0.00012");
        // rounding that bumps the exponent
        assert_eq!(format_sig(9.9999999999999, 12), "10");
        assert_eq!(format_sig(-0.01 + 1e-18, 12), "-0.01");
    }

    #[test]
    fn figure_ids_round_trip() {
        for f in FigureId::ALL {
            assert_eq!(f.as_str().parse::<FigureId>().unwrap(), f);
        }
        assert!("fig9".parse::<FigureId>().is_err());
        assert_eq!(
            FigureId::Fig8GainAndDensityVsT.file_name(),
            "fig8_gain_and_density_vs_T.csv"
        );
    }

    #[test]
    fn grid_len_counts_endpoints() {
        assert_eq!(GridAxis::new("k", -4.0, 4.0, 0.01).len(), 801);
        assert_eq!(GridAxis::new("p_in", 0.001, 0.999, 0.001).len(), 999);
        assert_eq!(GridAxis::new("x", 0.0, 1.0, 0.3).len(), 4);
    }

    #[test]
    fn schema_errors_are_collected() {
        let mut spec = SweepSpec::default_for(FigureId::Fig2Densities);
        spec.fixed.remove("alpha");
        spec.fixed.insert("bogus".into(), 1.0);
        spec.grid[0].step = -1.0;
        match spec.validate() {
            Err(SweepError::Schema { problems, .. }) => {
                assert_eq!(problems.len(), 3, "{problems:?}")
            }
            other => panic!("expected schema error, got {other:?}"),
        }
        let mut spec = SweepSpec::default_for(FigureId::ConcatScan);
        spec.grid.pop();
        assert!(spec.validate().is_err());
    }

    #[test]
    fn empty_table_has_header_only() {
        let table = SweepTable::new(vec![Column::new("k", "1"), Column::new("P_C", "1/k")])
            .with_metadata("figure_id", "x");
        let mut buf = Vec::new();
        write_csv(&table, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "# figure_id: x\nk[1],P_C[1/k]\n"
        );
    }

    #[test]
    fn ragged_rows_rejected() {
        let mut table = SweepTable::new(vec![Column::new("a", "1")]);
        assert!(matches!(
            table.push_row(vec![1.0, 2.0]),
            Err(SweepError::Ragged { .. })
        ));
    }

    #[test]
    fn degenerate_rows_are_flagged() {
        let table = run_sweep(&SweepSpec::default_for(FigureId::Fig8GainAndDensityVsT)).unwrap();
        let flags = table.column("degenerate").unwrap();
        let t = table.column("T").unwrap();
        assert_eq!(flags.len(), 200);
        assert_eq!(*flags.last().unwrap(), 1.0);
        assert!((t.last().unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(flags.iter().filter(|f| **f == 1.0).count(), 1);
    }
}
