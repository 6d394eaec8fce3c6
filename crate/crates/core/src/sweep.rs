//! Batch evaluation over flux or temperature grids and CSV output.
//!
//! A sweep evaluates a list of quantities at every grid point. Points where
//! a quantity sits on a level crossing, outside its validity window, or
//! outside its domain are kept and tagged in the `status` column.
//!
//! The CSV layout is
//!
//! ```text
//! # abshift-version: 0.1.0
//! # constants-sha256: ...
//! # ...
//! phi (h/e),S_even (1),S_odd (1),status
//! -5.0000000000000000e-1,0.0000000000000000e0,0.0000000000000000e0,degenerate-averaged
//! ```
//!
//! Floats carry 17 significant digits, so reading a file back and writing
//! it again reproduces it byte for byte.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::constants::{ReducedFlux, SI};
use crate::cylinder;
use crate::error::{Error, Result};
use crate::parallel::{self, Execution};
use crate::string::{self, Parity};
use crate::thermal::{self, ThermalConfig};

pub const STATUS_OK: &str = "ok";
pub const STATUS_DEGENERATE: &str = "degenerate-averaged";
pub const STATUS_OUTSIDE_WINDOW: &str = "outside-window";
pub const STATUS_WEIGHT_ASSUMPTION: &str = "weight-assumption";
pub const STATUS_UNDEFINED: &str = "undefined";

/// Float formatting used in every file this crate writes.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// `count` evenly spaced points from `lo` to `hi` inclusive. Endpoints are
/// exact, and so is the midpoint of a symmetric range.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let n = (count - 1) as f64;
    (0..count)
        .map(|i| ((n - i as f64) * lo + i as f64 * hi) / n)
        .collect()
}

/// Midpoints of `count` equal cells covering (lo, hi).
pub fn cell_centres(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let n2 = 2.0 * count as f64;
    (0..count)
        .map(|i| {
            let k = 2.0 * i as f64 + 1.0;
            ((n2 - k) * lo + k * hi) / n2
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Variable {
    Flux,
    Temperature,
}

impl Variable {
    pub fn name(self) -> &'static str {
        match self {
            Variable::Flux => "flux",
            Variable::Temperature => "temperature",
        }
    }

    fn key(self) -> &'static str {
        match self {
            Variable::Flux => "phi",
            Variable::Temperature => "T",
        }
    }

    fn column(self) -> Column {
        match self {
            Variable::Flux => Column::new("phi", "h/e"),
            Variable::Temperature => Column::new("T", "K"),
        }
    }
}

impl FromStr for Variable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flux" | "phi" => Ok(Variable::Flux),
            "temperature" | "T" => Ok(Variable::Temperature),
            other => Err(Error::Config(format!(
                "unknown sweep variable '{other}' (expected flux or temperature)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Quantity {
    /// Even-N0 sawtooth branch.
    SEven,
    /// Odd-N0 sawtooth branch.
    SOdd,
    /// S_N for the configured n0.
    SN,
    /// Parity-weighted cylinder mean, exact arithmetic.
    SAvg,
    /// The same mean in floating point.
    SAvgFloat,
    CTDirect,
    CTAsymptotic,
    /// -eF/hbar.
    AbShift,
}

impl Quantity {
    pub const ALL: [Quantity; 8] = [
        Quantity::SEven,
        Quantity::SOdd,
        Quantity::SN,
        Quantity::SAvg,
        Quantity::SAvgFloat,
        Quantity::CTDirect,
        Quantity::CTAsymptotic,
        Quantity::AbShift,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::SEven => "S_even",
            Quantity::SOdd => "S_odd",
            Quantity::SN => "S_N",
            Quantity::SAvg => "S_avg",
            Quantity::SAvgFloat => "S_avg_float",
            Quantity::CTDirect => "C_T_direct",
            Quantity::CTAsymptotic => "C_T_asymptotic",
            Quantity::AbShift => "ab_shift",
        }
    }

    fn unit(self) -> &'static str {
        match self {
            Quantity::AbShift => "rad",
            _ => "1",
        }
    }

    fn is_thermal(self) -> bool {
        matches!(self, Quantity::CTDirect | Quantity::CTAsymptotic)
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Quantity::ALL.iter().map(|q| q.name()).collect();
                Error::Config(format!("unknown output '{s}' (expected one of {})", names.join(", ")))
            })
    }
}

/// Parameters a sweep may hold fixed.
pub const FIXED_KEYS: [&str; 6] = ["n0", "R", "a0", "T", "phi", "trunc_eps"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub variable: Variable,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    /// Use cell centres of (lo, hi) instead of a grid including the ends.
    pub open: bool,
    pub fixed: BTreeMap<String, f64>,
    pub outputs: Vec<Quantity>,
}

impl SweepSpec {
    pub fn new(variable: Variable, lo: f64, hi: f64, count: usize, outputs: Vec<Quantity>) -> Self {
        Self {
            variable,
            lo,
            hi,
            count,
            open: false,
            fixed: BTreeMap::new(),
            outputs,
        }
    }

    pub fn open(mut self) -> Self {
        self.open = true;
        self
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.fixed.insert(key.to_string(), value);
        self
    }

    pub fn grid(&self) -> Vec<f64> {
        if self.open {
            cell_centres(self.lo, self.hi, self.count)
        } else {
            linspace(self.lo, self.hi, self.count)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::Config(format!("count = {} (expected >= 2)", self.count)));
        }
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(Error::Config(format!(
                "range [{}, {}] (expected finite lo < hi)",
                self.lo, self.hi
            )));
        }
        if self.variable == Variable::Temperature && self.lo <= 0.0 {
            return Err(Error::Config(format!("T range starts at {} K (expected > 0)", self.lo)));
        }
        if self.outputs.is_empty() {
            return Err(Error::Config("no outputs requested".into()));
        }
        for (k, v) in &self.fixed {
            if !FIXED_KEYS.contains(&k.as_str()) {
                return Err(Error::Config(format!("unknown parameter '{k}'")));
            }
            if k == self.variable.key() {
                return Err(Error::Config(format!("'{k}' is the swept variable and cannot be fixed")));
            }
            if !v.is_finite() {
                return Err(Error::Config(format!("parameter '{k}' = {v} is not finite")));
            }
        }
        self.setup().map(|_| ())
    }

    fn require(&self, key: &'static str, unit: &str, why: Quantity) -> Result<f64> {
        self.fixed.get(key).copied().ok_or_else(|| {
            Error::Config(format!("missing parameter '{key}' ({unit}) needed for {}", why.name()))
        })
    }

    fn setup(&self) -> Result<Setup> {
        let mut s = Setup::default();
        for &q in &self.outputs {
            match q {
                Quantity::SN => s.n0 = Some(self.count_param(q)?),
                _ if q.is_thermal() => {
                    let radius = self.require("R", "m", q)?;
                    let n0 = match self.fixed.get("n0") {
                        Some(_) => self.count_param(q)?,
                        None => thermal::electrons_on_ring(radius, self.require("a0", "m", q)?)?,
                    };
                    s.n0.get_or_insert(n0);
                    let phi = match self.variable {
                        Variable::Flux => 0.0,
                        Variable::Temperature => self.require("phi", "h/e", q)?,
                    };
                    let t = match self.variable {
                        Variable::Flux => {
                            let t = self.require("T", "K", q)?;
                            if t <= 0.0 {
                                return Err(Error::Config(format!("T = {t} K (expected > 0)")));
                            }
                            t
                        }
                        Variable::Temperature => self.lo,
                    };
                    let mut cfg = ThermalConfig::new(n0, radius, t, ReducedFlux::new(phi)?);
                    if let Some(&eps) = self.fixed.get("trunc_eps") {
                        cfg.trunc_eps = eps;
                    }
                    if let Some(&a0) = self.fixed.get("a0") {
                        cfg.a0 = a0;
                    }
                    cfg.validate()?;
                    s.thermal = Some(cfg);
                }
                _ => {
                    if self.variable == Variable::Temperature {
                        self.require("phi", "h/e", q)?;
                    }
                }
            }
        }
        if let (Some(n), Some(cfg)) = (s.n0, s.thermal) {
            if n != cfg.n0 {
                return Err(Error::Config(format!(
                    "n0 = {n} conflicts with the {} electrons used for C_T",
                    cfg.n0
                )));
            }
        }
        Ok(s)
    }

    fn count_param(&self, why: Quantity) -> Result<u64> {
        let v = self.require("n0", "electrons", why)?;
        if v < 1.0 || v.fract() != 0.0 || v > 9.0e15 {
            return Err(Error::Config(format!("n0 = {v} (expected a positive integer)")));
        }
        Ok(v as u64)
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct Setup {
    n0: Option<u64>,
    thermal: Option<ThermalConfig>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    fn new(name: &str, unit: &str) -> Self {
        Self {
            name: name.into(),
            unit: unit.into(),
        }
    }

    pub fn header(&self) -> String {
        format!("{} ({})", self.name, self.unit)
    }

    fn parse(header: &str) -> Result<Self> {
        let (name, rest) = header
            .split_once(" (")
            .ok_or_else(|| Error::Config(format!("header '{header}' has no unit")))?;
        let unit = rest
            .strip_suffix(')')
            .ok_or_else(|| Error::Config(format!("header '{header}' has no unit")))?;
        Ok(Column::new(name, unit))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub values: Vec<f64>,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    /// Numeric columns; the first is the swept variable.
    pub columns: Vec<Column>,
    pub rows: Vec<Row>,
    /// Written as `# key: value` lines.
    pub metadata: Vec<(String, String)>,
}

impl SweepResult {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r.values[i]).collect())
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    run_sweep_with(spec, Execution::default())
}

pub fn run_sweep_with(spec: &SweepSpec, exec: Execution) -> Result<SweepResult> {
    spec.validate()?;
    let setup = spec.setup()?;
    let grid = spec.grid();
    let rows = parallel::map(exec, &grid, |&x| evaluate(spec, &setup, x))
        .into_iter()
        .collect::<Result<Vec<Row>>>()?;

    let mut columns = vec![spec.variable.column()];
    columns.extend(spec.outputs.iter().map(|q| Column::new(q.name(), q.unit())));
    Ok(SweepResult {
        columns,
        rows,
        metadata: metadata(spec, &setup),
    })
}

fn metadata(spec: &SweepSpec, setup: &Setup) -> Vec<(String, String)> {
    let fixed: Vec<String> = spec
        .fixed
        .iter()
        .map(|(k, v)| format!("{k}={}", format_float(*v)))
        .collect();
    let outputs: Vec<&str> = spec.outputs.iter().map(|q| q.name()).collect();
    let mut m = vec![
        ("abshift-version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ("constants-sha256".to_string(), SI.checksum()),
        ("variable".to_string(), spec.variable.name().to_string()),
        (
            "grid".to_string(),
            format!(
                "{} {} {} {}",
                if spec.open { "open" } else { "closed" },
                format_float(spec.lo),
                format_float(spec.hi),
                spec.count
            ),
        ),
        ("fixed".to_string(), fixed.join(";")),
        ("outputs".to_string(), outputs.join(";")),
    ];
    if let Some(cfg) = setup.thermal {
        m.push(("thermal-n0".to_string(), cfg.n0.to_string()));
    }
    m
}

fn evaluate(spec: &SweepSpec, setup: &Setup, x: f64) -> Result<Row> {
    let (phi_v, t) = match spec.variable {
        Variable::Flux => (x, spec.fixed.get("T").copied()),
        Variable::Temperature => (spec.fixed.get("phi").copied().unwrap_or(0.0), Some(x)),
    };
    let phi = ReducedFlux::new(phi_v)?;
    let mut flags: Vec<&'static str> = Vec::new();
    let flag = |f: &'static str, flags: &mut Vec<&'static str>| {
        if !flags.contains(&f) {
            flags.push(f);
        }
    };
    let mut values = vec![x];
    for &q in &spec.outputs {
        let v = match q {
            Quantity::SEven | Quantity::SOdd => {
                let parity = if q == Quantity::SEven { Parity::Even } else { Parity::Odd };
                if string::is_degenerate(parity, phi) {
                    flag(STATUS_DEGENERATE, &mut flags);
                }
                string::s_branch(parity, phi.wrap().reduced)
            }
            Quantity::SN => {
                let n0 = setup.n0.expect("validated");
                if string::is_degenerate(Parity::of(n0), phi) {
                    flag(STATUS_DEGENERATE, &mut flags);
                }
                string::s_n_closed(n0, phi)?
            }
            Quantity::SAvg | Quantity::SAvgFloat => {
                let r = if q == Quantity::SAvg {
                    cylinder::averaged_s_exact(phi)
                } else {
                    cylinder::averaged_s(phi)
                };
                match r {
                    Ok(s) => {
                        if cylinder::parity_weights(phi)?.beyond_weight_assumption {
                            flag(STATUS_WEIGHT_ASSUMPTION, &mut flags);
                        }
                        s
                    }
                    Err(Error::Domain { .. }) => {
                        flag(STATUS_UNDEFINED, &mut flags);
                        f64::NAN
                    }
                    Err(e) => return Err(e),
                }
            }
            Quantity::CTDirect | Quantity::CTAsymptotic => {
                let cfg = setup
                    .thermal
                    .expect("validated")
                    .at_flux(phi)
                    .at_temperature(t.expect("validated"));
                if q == Quantity::CTDirect {
                    thermal::c_t_direct(&cfg)?
                } else {
                    let a = thermal::c_t_asymptotic(&cfg)?;
                    if !a.in_window {
                        flag(STATUS_OUTSIDE_WINDOW, &mut flags);
                    }
                    a.value
                }
            }
            Quantity::AbShift => phi.ab_shift(),
        };
        values.push(v);
    }
    let status = if flags.is_empty() {
        STATUS_OK.to_string()
    } else {
        flags.join(";")
    };
    Ok(Row { values, status })
}

/// Serialize to CSV bytes.
pub fn to_csv(result: &SweepResult) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for (k, v) in &result.metadata {
        out.extend_from_slice(format!("# {k}: {v}\n").as_bytes());
    }
    let internal = |e: csv::Error| Error::Internal(format!("CSV encoding: {e}"));
    let mut w = csv::Writer::from_writer(&mut out);
    let mut header: Vec<String> = result.columns.iter().map(Column::header).collect();
    header.push("status".into());
    w.write_record(&header).map_err(internal)?;
    for row in &result.rows {
        let mut rec: Vec<String> = row.values.iter().map(|v| format_float(*v)).collect();
        rec.push(row.status.clone());
        w.write_record(&rec).map_err(internal)?;
    }
    w.flush().map_err(|e| Error::Internal(format!("CSV encoding: {e}")))?;
    drop(w);
    Ok(out)
}

pub fn emit_csv(result: &SweepResult, path: &Path) -> Result<()> {
    let bytes = to_csv(result)?;
    std::fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parse CSV bytes written by [`to_csv`].
pub fn from_csv(bytes: &[u8]) -> Result<SweepResult> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Config(format!("not UTF-8: {e}")))?;
    let mut metadata = Vec::new();
    let mut body_start = 0;
    for line in text.split_inclusive('\n') {
        let Some(rest) = line.strip_prefix("# ") else { break };
        let rest = rest.trim_end_matches('\n');
        let (k, v) = rest
            .split_once(": ")
            .ok_or_else(|| Error::Config(format!("malformed metadata line '{rest}'")))?;
        metadata.push((k.to_string(), v.to_string()));
        body_start += line.len();
    }
    let bad = |e: csv::Error| Error::Config(format!("CSV: {e}"));
    let mut r = csv::Reader::from_reader(&bytes[body_start..]);
    let header = r.headers().map_err(bad)?.clone();
    let n = header.len();
    if n < 2 || &header[n - 1] != "status" {
        return Err(Error::Config("last column must be 'status'".into()));
    }
    let columns = header
        .iter()
        .take(n - 1)
        .map(Column::parse)
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(bad)?;
        let values = rec
            .iter()
            .take(n - 1)
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| Error::Config(format!("'{s}' is not a number")))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(Row {
            values,
            status: rec[n - 1].to_string(),
        });
    }
    Ok(SweepResult {
        columns,
        rows,
        metadata,
    })
}

pub fn read_csv(path: &Path) -> Result<SweepResult> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    from_csv(&bytes)
}

/// Minimal SVG line plot of the named columns against the swept variable.
/// Lines break wherever a column jumps by more than a quarter of the plotted
/// range, so the sawtooth discontinuities are not drawn as vertical strokes.
pub fn render_svg(result: &SweepResult, names: &[&str]) -> Result<String> {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const PAD: f64 = 40.0;
    const COLOURS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

    let xs: Vec<f64> = result.rows.iter().map(|r| r.values[0]).collect();
    let mut series = Vec::new();
    for name in names {
        let ys = result
            .column(name)
            .ok_or_else(|| Error::Config(format!("no column '{name}' to plot")))?;
        series.push((name, ys));
    }
    let finite = |v: &&f64| v.is_finite();
    let (x_lo, x_hi) = bounds(xs.iter().filter(finite));
    let (y_lo, y_hi) = bounds(series.iter().flat_map(|(_, ys)| ys.iter()).filter(finite));
    let sx = |x: f64| PAD + (x - x_lo) / (x_hi - x_lo) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y_lo) / (y_hi - y_lo) * (H - 2.0 * PAD);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    if y_lo < 0.0 && y_hi > 0.0 {
        let _ = writeln!(
            svg,
            r#"<line x1="{PAD}" y1="{y:.3}" x2="{}" y2="{y:.3}" stroke="gray" stroke-dasharray="4"/>"#,
            W - PAD,
            y = sy(0.0)
        );
    }
    for (k, (name, ys)) in series.iter().enumerate() {
        let colour = COLOURS[k % COLOURS.len()];
        let jump = 0.25 * (y_hi - y_lo);
        let mut segment: Vec<String> = Vec::new();
        let flush = |segment: &mut Vec<String>, svg: &mut String| {
            if segment.len() > 1 {
                let _ = writeln!(
                    svg,
                    r#"<polyline fill="none" stroke="{colour}" points="{}"/>"#,
                    segment.join(" ")
                );
            }
            segment.clear();
        };
        let mut prev: Option<f64> = None;
        for (x, y) in xs.iter().zip(ys) {
            if !y.is_finite() {
                flush(&mut segment, &mut svg);
                prev = None;
                continue;
            }
            if prev.is_some_and(|p| (y - p).abs() > jump) {
                flush(&mut segment, &mut svg);
            }
            segment.push(format!("{:.3},{:.3}", sx(*x), sy(*y)));
            prev = Some(*y);
        }
        flush(&mut segment, &mut svg);
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" fill="{colour}" font-size="12">{name}</text>"#,
            PAD + 8.0,
            PAD + 16.0 * (k as f64 + 1.0)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{}</text>"#,
        W / 2.0,
        H - 10.0,
        result.columns[0].header()
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn bounds<'a>(values: impl Iterator<Item = &'a f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(*v), hi.max(*v))
    });
    if !(lo.is_finite() && hi.is_finite()) {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig4(count: usize) -> SweepSpec {
        SweepSpec::new(Variable::Flux, -0.5, 0.5, count, vec![Quantity::SEven, Quantity::SOdd])
    }

    #[test]
    fn linspace_exact_points() {
        let g = linspace(-0.5, 0.5, 1001);
        assert_eq!(g.len(), 1001);
        assert_eq!((g[0], g[500], g[1000]), (-0.5, 0.0, 0.5));
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        let c = cell_centres(-0.5, 0.5, 1001);
        assert_eq!(c[500], 0.0);
        assert!(c[0] > -0.5 && c[1000] < 0.5);
    }

    #[test]
    fn fig4_rows_and_flags() {
        let r = run_sweep(&fig4(1001)).unwrap();
        assert_eq!(r.rows.len(), 1001);
        assert_eq!(r.rows[500].status, STATUS_DEGENERATE);
        assert_eq!(r.rows[0].status, STATUS_DEGENERATE);
        assert_eq!(r.rows[250].status, STATUS_OK);
        let even = r.column("S_even").unwrap();
        assert!((even[501] - even[499] + 0.998).abs() < 1e-12);
    }

    #[test]
    fn missing_parameters_are_named() {
        let spec = SweepSpec::new(Variable::Flux, -0.4, 0.4, 5, vec![Quantity::SN]);
        match run_sweep(&spec) {
            Err(Error::Config(m)) => assert!(m.contains("n0"), "{m}"),
            other => panic!("{other:?}"),
        }
        let spec = SweepSpec::new(Variable::Temperature, 1.0, 2.0, 3, vec![Quantity::CTDirect])
            .with("phi", 0.1);
        match run_sweep(&spec) {
            Err(Error::Config(m)) => assert!(m.contains("'R'"), "{m}"),
            other => panic!("{other:?}"),
        }
        let bad = fig4(3).with("colour", 1.0);
        assert!(matches!(run_sweep(&bad), Err(Error::Config(_))));
        assert!(run_sweep(&fig4(1)).is_err());
        let swapped = SweepSpec::new(Variable::Flux, 0.5, -0.5, 3, vec![Quantity::SOdd]);
        assert!(run_sweep(&swapped).is_err());
    }

    #[test]
    fn cylinder_column_edges_undefined() {
        let spec = SweepSpec::new(Variable::Flux, -0.5, 0.5, 11, vec![Quantity::SAvg]);
        let r = run_sweep(&spec).unwrap();
        assert!(r.rows[0].values[1].is_nan());
        assert_eq!(r.rows[0].status, STATUS_UNDEFINED);
        assert_eq!(r.rows[5].values[1], 0.0);
        assert_eq!(r.rows[1].status, STATUS_WEIGHT_ASSUMPTION);
    }

    #[test]
    fn csv_round_trip() {
        let r = run_sweep(&fig4(101).with("trunc_eps", 1e-12)).unwrap();
        let bytes = to_csv(&r).unwrap();
        let back = from_csv(&bytes).unwrap();
        assert_eq!(to_csv(&back).unwrap(), bytes);
        assert_eq!(back.rows.len(), 101);
        assert_eq!(back.columns, r.columns);
    }

    #[test]
    fn empty_rows_give_header_only() {
        let mut r = run_sweep(&fig4(3)).unwrap();
        r.rows.clear();
        let text = String::from_utf8(to_csv(&r).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), r.metadata.len() + 1);
        assert_eq!(*lines.last().unwrap(), "phi (h/e),S_even (1),S_odd (1),status");
    }

    #[test]
    fn svg_breaks_at_jumps() {
        let r = run_sweep(&fig4(201)).unwrap();
        let svg = render_svg(&r, &["S_even", "S_odd"]).unwrap();
        assert!(svg.starts_with("<svg"));
        // even: two pieces either side of 0; odd: one continuous piece
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert!(render_svg(&r, &["nope"]).is_err());
    }
}
