mod config;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use abshift::classical::{self, ClassicalParams, ClassicalState, IntegrationOptions};
use abshift::constants::ReducedFlux;
use abshift::cylinder;
use abshift::measurability::{self, SemiStringScenario, ShieldScenario};
use abshift::rotator::{self, RotatorParams};
use abshift::string::{self, Parity, StringConfig};
use abshift::sweep::{self, Quantity, SweepSpec, Variable};
use abshift::thermal::{self, ChemicalPotential, ThermalConfig};
use abshift::{selfcheck, Execution};
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use output::Report;

/// Environment variable naming the directory for relative output paths.
pub const OUTPUT_DIR_ENV: &str = "ABSHIFT_OUTPUT_DIR";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Compute(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Compute(_) => 1,
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<abshift::Error> for CliError {
    fn from(e: abshift::Error) -> Self {
        use abshift::Error as E;
        match e {
            E::Domain { .. } | E::Usage(_) | E::Config(_) => CliError::Config(e.to_string()),
            E::Io { .. } | E::Csv { .. } => CliError::Io(e.to_string()),
            E::Integration { .. } | E::Internal(_) => CliError::Compute(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "abshift",
    version,
    about = "Aharonov-Bohm phase shifts with shielding rotators, rings and cylinders",
    arg_required_else_help = true
)]
struct Cli {
    /// Flat key = value file; keys are flag names, flags on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output format (default: text, csv for sweep).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write data here instead of stdout; relative paths resolve under $ABSHIFT_OUTPUT_DIR.
    #[arg(long, short = 'o', global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Single charged rotator around the flux line.
    Rotator(RotatorArgs),
    /// Circular metallic string at zero temperature.
    String(StringArgs),
    /// Metallic string at finite temperature.
    Thermal(ThermalArgs),
    /// Mesoscopic cylinder (parity-averaged strings).
    Cylinder(CylinderArgs),
    /// Classical trajectory of charge, ring and flux.
    Classical(ClassicalArgs),
    /// Measurability estimates.
    #[command(subcommand)]
    Measure(MeasureCommand),
    /// Evaluate quantities over a flux or temperature grid.
    Sweep(SweepArgs),
    /// Run the built-in consistency checks.
    Selfcheck,
}

#[derive(Debug, Args)]
#[group(multiple = false)]
struct Flux {
    /// Flux in units of h/e.
    #[arg(long, allow_negative_numbers = true)]
    phi: Option<f64>,
    /// Flux in Wb.
    #[arg(long = "flux-wb", allow_negative_numbers = true)]
    flux_wb: Option<f64>,
}

impl Flux {
    fn resolve(&self, required: bool) -> Result<ReducedFlux, CliError> {
        let r = match (self.phi, self.flux_wb) {
            (Some(p), _) => ReducedFlux::new(p),
            (None, Some(f)) => ReducedFlux::from_flux(f),
            (None, None) if required => {
                return Err(CliError::Config("missing flux: give --phi (h/e) or --flux-wb (Wb)".into()))
            }
            (None, None) => ReducedFlux::new(0.0),
        };
        r.map_err(|_| CliError::Config("flux must be finite".into()))
    }
}

fn positive(key: &str, unit: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Config(format!("--{key} must be a positive value in {unit}, got {v}")))
    }
}

fn finite(key: &str, unit: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Config(format!("--{key} must be a finite value in {unit}, got {v}")))
    }
}

#[derive(Debug, Args)]
struct RotatorArgs {
    /// Angular momentum quantum number of the rotator.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    n: i64,
    #[command(flatten)]
    flux: Flux,
    /// Impact distance (m).
    #[arg(long, default_value_t = 1e-6, allow_negative_numbers = true)]
    d: f64,
    /// Rotator radius (m).
    #[arg(long, default_value_t = 1e-6, allow_negative_numbers = true)]
    radius: f64,
    /// Incident speed (m/s).
    #[arg(long, default_value_t = 1e6, allow_negative_numbers = true)]
    v: f64,
    /// Also evaluate the rotator phase at this time (s).
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
}

#[derive(Debug, Args)]
struct StringArgs {
    /// Number of conduction electrons.
    #[arg(long)]
    n0: u64,
    #[command(flatten)]
    flux: Flux,
    /// Impact distance (m).
    #[arg(long, default_value_t = 1e-6, allow_negative_numbers = true)]
    d: f64,
    /// Ring radius (m).
    #[arg(long, default_value_t = 1e-6, allow_negative_numbers = true)]
    radius: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MuMode {
    /// Solve for the chemical potential at each temperature.
    Conserving,
    /// Keep the zero-temperature Fermi energy.
    Frozen,
}

#[derive(Debug, Args)]
struct ThermalArgs {
    /// Number of electrons (default: 2 pi R / a0).
    #[arg(long)]
    n0: Option<u64>,
    #[command(flatten)]
    flux: Flux,
    /// Temperature (K).
    #[arg(long, allow_negative_numbers = true)]
    temperature: f64,
    /// Ring radius (m).
    #[arg(long, default_value_t = 1e-6, allow_negative_numbers = true)]
    radius: f64,
    /// Interatomic distance (m).
    #[arg(long, default_value_t = thermal::DEFAULT_A0, allow_negative_numbers = true)]
    a0: f64,
    /// Impact distance (m).
    #[arg(long, default_value_t = 1e-6, allow_negative_numbers = true)]
    d: f64,
    /// Relative tail-truncation tolerance.
    #[arg(long = "trunc-eps", default_value_t = thermal::DEFAULT_TRUNC_EPS)]
    trunc_eps: f64,
    #[arg(long = "chemical-potential", value_enum, default_value = "conserving")]
    chemical_potential: MuMode,
    /// Also fit the decay of C_T over [2 T_lo, 10 T_lo].
    #[arg(long)]
    fit: bool,
    /// Grid points for --fit.
    #[arg(long, default_value_t = 33)]
    points: usize,
}

#[derive(Debug, Args)]
struct CylinderArgs {
    /// Number of free electrons.
    #[arg(long)]
    n: u64,
    #[command(flatten)]
    flux: Flux,
    /// Impact distance (m).
    #[arg(long, default_value_t = 1e-6, allow_negative_numbers = true)]
    d: f64,
}

#[derive(Debug, Args)]
struct ClassicalArgs {
    #[command(flatten)]
    flux: Flux,
    /// Impact distance (m).
    #[arg(long, default_value_t = 1e-6, allow_negative_numbers = true)]
    d: f64,
    /// Ring radius (m).
    #[arg(long, default_value_t = 1e-6, allow_negative_numbers = true)]
    radius: f64,
    /// Initial speed (m/s).
    #[arg(long, default_value_t = 1e6, allow_negative_numbers = true)]
    v: f64,
    /// Initial ring angular velocity (rad/s).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    omega: f64,
    /// Integrator tolerance.
    #[arg(long, default_value_t = classical::DEFAULT_TOL)]
    tol: f64,
    /// Starting distance before the ring, in units of d.
    #[arg(long, default_value_t = classical::START_DISTANCE)]
    start: f64,
    /// End time (s); default is the symmetric point past the ring.
    #[arg(long = "t-end", allow_negative_numbers = true)]
    t_end: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum MeasureCommand {
    /// Observing the response of the shielding electrons.
    Shield(ShieldArgs),
    /// Measuring the transient field with a semi-infinite string.
    Semistring(SemiStringArgs),
}

#[derive(Debug, Args)]
struct ShieldArgs {
    /// Orbit radius of the shielding electrons (m).
    #[arg(long, default_value_t = 1e-6, allow_negative_numbers = true)]
    radius: f64,
    /// Distance to the incident electron (m).
    #[arg(long, default_value_t = 1e-6, allow_negative_numbers = true)]
    d: f64,
    /// Incident speed (m/s).
    #[arg(long, default_value_t = 1e6, allow_negative_numbers = true)]
    v: f64,
    /// Number of shielding electrons.
    #[arg(long, default_value_t = 1e9, allow_negative_numbers = true)]
    electrons: f64,
}

#[derive(Debug, Args)]
struct SemiStringArgs {
    #[command(flatten)]
    flux: Flux,
    /// Path separation scale (m).
    #[arg(long, default_value_t = 1e-6, allow_negative_numbers = true)]
    d: f64,
    /// Incident speed (m/s).
    #[arg(long, default_value_t = 1e6, allow_negative_numbers = true)]
    v: f64,
    /// Position uncertainty of the string end (m).
    #[arg(long, allow_negative_numbers = true)]
    dz: f64,
    /// Field to measure (T); default is the field of the incident electron.
    #[arg(long, allow_negative_numbers = true)]
    field: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SweepVar {
    Flux,
    Temperature,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_enum, default_value = "flux")]
    variable: SweepVar,
    /// Lower end (h/e or K); flux default -0.5, temperature default 2 T_lo.
    #[arg(long, allow_negative_numbers = true)]
    lo: Option<f64>,
    /// Upper end (h/e or K); flux default 0.5, temperature default 10 T_lo.
    #[arg(long, allow_negative_numbers = true)]
    hi: Option<f64>,
    #[arg(long, default_value_t = 1001)]
    count: usize,
    /// Use cell centres of (lo, hi) instead of a grid including both ends.
    #[arg(long)]
    open: bool,
    /// Comma-separated quantities: S_even, S_odd, S_N, S_avg, S_avg_float,
    /// C_T_direct, C_T_asymptotic, ab_shift.
    #[arg(long, default_value = "S_even,S_odd")]
    outputs: String,
    #[arg(long)]
    n0: Option<u64>,
    /// Ring radius (m).
    #[arg(long, allow_negative_numbers = true)]
    radius: Option<f64>,
    /// Interatomic distance (m); default 2.5e-10 when --n0 is absent.
    #[arg(long, allow_negative_numbers = true)]
    a0: Option<f64>,
    /// Fixed temperature for flux sweeps (K).
    #[arg(long, allow_negative_numbers = true)]
    temperature: Option<f64>,
    /// Fixed flux for temperature sweeps (h/e).
    #[arg(long, allow_negative_numbers = true)]
    phi: Option<f64>,
    #[arg(long = "trunc-eps")]
    trunc_eps: Option<f64>,
    /// Also write an SVG plot of the outputs.
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
    /// Evaluate grid points on one thread.
    #[arg(long)]
    sequential: bool,
}

fn resolve_path(path: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn write_data(bytes: &[u8], output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(p) => {
            let p = resolve_path(p);
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)
                    .map_err(|e| CliError::Io(format!("{}: {e}", parent.display())))?;
            }
            std::fs::write(&p, bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            eprintln!("wrote {}", p.display());
            Ok(())
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

fn emit(report: &Report, format: Format, output: Option<&Path>) -> Result<(), CliError> {
    let bytes = match format {
        Format::Text => report.text(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json())
                .map_err(|e| CliError::Compute(format!("JSON encoding: {e}")))?;
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("key,value\n");
            for line in report.text().lines() {
                let (k, v) = line.split_once(" = ").unwrap_or((line, ""));
                s.push_str(&format!("{k},{}\n", csv_field(v)));
            }
            s
        }
    };
    write_data(bytes.as_bytes(), output)
}

fn csv_field(v: &str) -> String {
    if v.contains([',', '"', '\n']) {
        format!("\"{}\"", v.replace('"', "\"\""))
    } else {
        v.to_string()
    }
}

fn add_shift(r: &mut Report, s: &abshift::PhaseShiftReport) {
    r.add("ab", s.ab).add("supplementary", s.supplementary).add("total", s.total);
}

fn add_flux(r: &mut Report, phi: ReducedFlux) {
    r.add("phi", phi.value()).add("flux_wb", phi.flux_wb());
}

fn cmd_rotator(a: &RotatorArgs) -> Result<Report, CliError> {
    let phi = a.flux.resolve(false)?;
    let p = RotatorParams::electron(
        positive("radius", "m", a.radius)?,
        positive("d", "m", a.d)?,
        positive("v", "m/s", a.v)?,
        phi.flux_wb(),
    );
    let s = rotator::total_shift_rotator(a.n, &p)?;
    let mut r = Report::new();
    add_flux(&mut r, phi);
    r.add("n", a.n)
        .add("nu", p.shifted_momentum(a.n))
        .add("delta_n_per_arm", s.term("delta_n_per_arm").unwrap_or(f64::NAN));
    add_shift(&mut r, &s);
    if let Some(t) = a.t {
        r.add("t", t).add("phase", rotator::rotator_phase(a.n, finite("t", "s", t)?, &p)?.phase);
    }
    Ok(r)
}

fn cmd_string(a: &StringArgs) -> Result<Report, CliError> {
    let phi = a.flux.resolve(true)?;
    let cfg = StringConfig {
        n0: a.n0,
        radius: positive("radius", "m", a.radius)?,
        impact: positive("d", "m", a.d)?,
    };
    let s = string::string_shift(&cfg, phi)?;
    let parity = Parity::of(a.n0);
    let mut r = Report::new();
    r.add("n0", a.n0)
        .add("parity", if parity == Parity::Even { "even" } else { "odd" });
    add_flux(&mut r, phi);
    r.add("phi_reduced", phi.wrap().reduced)
        .add("winding", phi.wrap().winding)
        .add("S_N", s.term("S_N").unwrap_or(f64::NAN))
        .add("degenerate_averaged", string::is_degenerate(parity, phi));
    add_shift(&mut r, &s);
    Ok(r)
}

fn cmd_thermal(a: &ThermalArgs) -> Result<Report, CliError> {
    let phi = a.flux.resolve(true)?;
    let radius = positive("radius", "m", a.radius)?;
    let a0 = positive("a0", "m", a.a0)?;
    let temperature = positive("temperature", "K", a.temperature)?;
    let n0 = match a.n0 {
        Some(n) => n,
        None => thermal::electrons_on_ring(radius, a0)?,
    };
    let mut cfg = ThermalConfig::new(n0, radius, temperature, phi);
    cfg.a0 = a0;
    cfg.trunc_eps = a.trunc_eps;
    cfg.chemical_potential = match a.chemical_potential {
        MuMode::Conserving => ChemicalPotential::NumberConserving,
        MuMode::Frozen => ChemicalPotential::FrozenGroundState,
    };
    let s = thermal::thermal_shift(&cfg, positive("d", "m", a.d)?)?;
    let w = thermal::validity_window(n0, radius)?;
    let mut r = Report::new();
    r.add("n0", n0);
    add_flux(&mut r, phi);
    r.add("temperature", temperature)
        .add("T_lo", w.t_lo)
        .add("T_hi", w.t_hi)
        .add("in_window", w.contains(temperature))
        .add("E0_over_eps_R", s.term("E0_over_eps_R").unwrap_or(f64::NAN))
        .add("C_T", s.term("C_T").unwrap_or(f64::NAN))
        .add("C_T_asymptotic", s.term("C_T_asymptotic").unwrap_or(f64::NAN));
    add_shift(&mut r, &s);
    if a.fit {
        let fit = thermal::decay_fit(&cfg, 2.0 * w.t_lo, 10.0 * w.t_lo, a.points, Execution::Parallel)?;
        r.add("predicted_slope", fit.predicted)
            .add("exponent_slope", fit.exponent_slope)
            .add("raw_slope", fit.raw_slope);
    }
    Ok(r)
}

fn cmd_cylinder(a: &CylinderArgs) -> Result<Report, CliError> {
    let phi = a.flux.resolve(true)?;
    let s = cylinder::cylinder_shift(a.n, phi, positive("d", "m", a.d)?)?;
    let w = cylinder::parity_weights(phi)?;
    if w.beyond_weight_assumption {
        eprintln!("note: |phi| >= 1/4 lies beyond the range assumed for the parity weights");
    }
    let mut r = Report::new();
    r.add("n", a.n);
    add_flux(&mut r, phi);
    r.add("w_even", w.w_even)
        .add("w_odd", w.w_odd)
        .add("beyond_weight_assumption", w.beyond_weight_assumption)
        .add("S_avg", s.term("S_avg").unwrap_or(f64::NAN))
        .add("S_avg_float", s.term("S_avg_float").unwrap_or(f64::NAN))
        .add("even_families", s.term("even_families").unwrap_or(f64::NAN))
        .add("odd_families", s.term("odd_families").unwrap_or(f64::NAN));
    add_shift(&mut r, &s);
    Ok(r)
}

fn cmd_classical(a: &ClassicalArgs, format: Format, output: Option<&Path>) -> Result<(), CliError> {
    let phi = a.flux.resolve(false)?;
    let d = positive("d", "m", a.d)?;
    let p = ClassicalParams::electrons(positive("radius", "m", a.radius)?, d, phi.flux_wb());
    for w in p.warnings() {
        eprintln!("warning: {w}");
    }
    let v = positive("v", "m/s", a.v)?;
    let start = positive("start", "units of d", a.start)?;
    let s0 = ClassicalState {
        x: -start * d,
        v,
        theta: 0.0,
        omega: finite("omega", "rad/s", a.omega)?,
        t: 0.0,
    };
    let t_end = match a.t_end {
        Some(t) => finite("t-end", "s", t)?,
        None => 2.0 * start * d / v,
    };
    let traj = classical::integrate_trajectory_with(
        &s0,
        &p,
        t_end,
        &IntegrationOptions {
            tol: a.tol,
            ..Default::default()
        },
    )?;
    if format == Format::Csv {
        let mut buf = Vec::new();
        classical::write_trajectory_csv(&traj, &p, &mut buf)
            .map_err(|e| CliError::Compute(format!("CSV encoding: {e}")))?;
        return write_data(&buf, output);
    }
    let inv = classical::invariants_check(&traj, &p);
    let mut r = Report::new();
    add_flux(&mut r, phi);
    r.add("a0", p.a0())
        .add("kappa", inv.kappa)
        .add("omega0", inv.omega0)
        .add("eq2_residual", inv.eq2_residual)
        .add("eq3_minus_residual", inv.eq3_minus_residual)
        .add("eq3_plus_residual", inv.eq3_plus_residual)
        .add("eq3_minus_over_kappa", inv.eq3_minus_over_kappa)
        .add("eq3_plus_over_kappa", inv.eq3_plus_over_kappa)
        .add("conserved_sign", format!("{:?}", inv.conserved).to_lowercase())
        .add("speed_change_at_closest", inv.speed_change)
        .add("samples", traj.samples.len())
        .add("steps", traj.stats.accepted)
        .add("rejected", traj.stats.rejected)
        .add("max_local_error", traj.stats.max_local_error)
        .add("tol", traj.tol);
    emit(&r, format, output)
}

fn cmd_shield(a: &ShieldArgs) -> Result<Report, CliError> {
    let rep = measurability::shield_analysis(&ShieldScenario {
        radius: positive("radius", "m", a.radius)?,
        distance: positive("d", "m", a.d)?,
        speed: positive("v", "m/s", a.v)?,
        electrons: positive("electrons", "count", a.electrons)?,
    })?;
    let mut r = Report::new();
    r.add("displacement", rep.displacement)
        .add("dp", rep.dp)
        .add("dB", rep.d_b)
        .add("dFlux", rep.d_flux)
        .add("dFlux_from_field", rep.d_flux_from_field)
        .add("dPhase", rep.d_phase)
        .add("destroys_interference", rep.destroys_interference)
        .add("note", rep.note);
    Ok(r)
}

fn cmd_semistring(a: &SemiStringArgs) -> Result<Report, CliError> {
    let phi = a.flux.resolve(true)?;
    let d = positive("d", "m", a.d)?;
    let v = positive("v", "m/s", a.v)?;
    let field = match a.field {
        Some(b) => positive("field", "T", b)?,
        None => measurability::b_e(d, v)?,
    };
    let s = SemiStringScenario {
        flux_wb: positive("flux-wb", "Wb", phi.flux_wb())?,
        distance: d,
        speed: v,
        dz: positive("dz", "m", a.dz)?,
        field,
    };
    let rep = measurability::semistring_analysis(&s)?;
    let mut r = Report::new();
    add_flux(&mut r, phi);
    r.add("field", field)
        .add("pz", rep.pz)
        .add("pz_resolution", rep.pz_resolution)
        .add("detectable", rep.detectable)
        .add("threshold_field", s.threshold_field())
        .add("flux_uncertainty", rep.flux_uncertainty)
        .add("dPhase", rep.d_phase)
        .add("product", rep.product)
        .add("B_e", rep.b_e)
        .add("destroys_interference", rep.destroys_interference)
        .add("note", rep.note);
    Ok(r)
}

fn cmd_sweep(a: &SweepArgs, format: Format, output: Option<&Path>) -> Result<(), CliError> {
    let outputs = a
        .outputs
        .split(',')
        .map(|s| s.trim().parse::<Quantity>())
        .collect::<Result<Vec<_>, _>>()?;
    let variable = match a.variable {
        SweepVar::Flux => Variable::Flux,
        SweepVar::Temperature => Variable::Temperature,
    };
    let (lo, hi) = match variable {
        Variable::Flux => (a.lo.unwrap_or(-0.5), a.hi.unwrap_or(0.5)),
        Variable::Temperature => {
            let (lo, hi) = match (a.lo, a.hi) {
                (Some(lo), Some(hi)) => (lo, hi),
                (lo, hi) => {
                    let radius = a.radius.ok_or_else(|| {
                        CliError::Config("temperature sweep needs --lo and --hi (K) or --radius (m)".into())
                    })?;
                    let n0 = match a.n0 {
                        Some(n) => n,
                        None => thermal::electrons_on_ring(radius, a.a0.unwrap_or(thermal::DEFAULT_A0))?,
                    };
                    let w = thermal::validity_window(n0, radius)?;
                    (lo.unwrap_or(2.0 * w.t_lo), hi.unwrap_or(10.0 * w.t_lo))
                }
            };
            (lo, hi)
        }
    };
    let mut spec = SweepSpec::new(variable, lo, hi, a.count, outputs);
    spec.open = a.open;
    let fixed = [
        ("n0", a.n0.map(|n| n as f64)),
        ("R", a.radius),
        ("a0", a.a0.or((a.n0.is_none() && a.radius.is_some()).then_some(thermal::DEFAULT_A0))),
        ("T", a.temperature),
        ("phi", a.phi),
        ("trunc_eps", a.trunc_eps),
    ];
    for (k, v) in fixed {
        if let Some(v) = v {
            spec = spec.with(k, v);
        }
    }
    let exec = if a.sequential { Execution::Sequential } else { Execution::Parallel };
    let result = sweep::run_sweep_with(&spec, exec)?;
    if let Some(svg) = &a.svg {
        let names: Vec<&str> = spec.outputs.iter().map(|q| q.name()).collect();
        let p = resolve_path(svg);
        std::fs::write(&p, sweep::render_svg(&result, &names)?)
            .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
        eprintln!("wrote {}", p.display());
    }
    let bytes = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&result)
                .map_err(|e| CliError::Compute(format!("JSON encoding: {e}")))?;
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv | Format::Text => sweep::to_csv(&result)?,
    };
    write_data(&bytes, output)
}

fn cmd_selfcheck(format: Format, output: Option<&Path>) -> Result<(), CliError> {
    let checks = selfcheck::run();
    let failed = checks.iter().filter(|c| !c.passed).count();
    let bytes = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&checks)
                .map_err(|e| CliError::Compute(format!("JSON encoding: {e}")))?;
            s.push('\n');
            s
        }
        _ => {
            let mut s = String::new();
            for c in &checks {
                let mark = if c.passed { "PASS" } else { "FAIL" };
                s.push_str(&format!("{mark}  {}: {}\n", c.name, c.detail));
            }
            s.push_str(&format!("{} of {} checks passed\n", checks.len() - failed, checks.len()));
            s
        }
    };
    write_data(bytes.as_bytes(), output)?;
    if failed > 0 {
        return Err(CliError::Compute(format!("{failed} self-check(s) failed")));
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let output = cli.output.as_deref();
    let format = cli.format;
    let text = format.unwrap_or(Format::Text);
    match &cli.command {
        Command::Rotator(a) => emit(&cmd_rotator(a)?, text, output),
        Command::String(a) => emit(&cmd_string(a)?, text, output),
        Command::Thermal(a) => emit(&cmd_thermal(a)?, text, output),
        Command::Cylinder(a) => emit(&cmd_cylinder(a)?, text, output),
        Command::Classical(a) => cmd_classical(a, text, output),
        Command::Measure(MeasureCommand::Shield(a)) => emit(&cmd_shield(a)?, text, output),
        Command::Measure(MeasureCommand::Semistring(a)) => emit(&cmd_semistring(a)?, text, output),
        Command::Sweep(a) => cmd_sweep(a, format.unwrap_or(Format::Csv), output),
        Command::Selfcheck => cmd_selfcheck(text, output),
    }
}

fn with_config(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config::config_path(&args) else {
        return Ok(args);
    };
    let path = PathBuf::from(path);
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Io(format!("config file {}: {e}", path.display())))?;
    let entries = config::parse(&text, &path)?;
    config::merge(&Cli::command(), args, &entries)
}

fn main() -> ExitCode {
    let args: Vec<OsString> = std::env::args_os().collect();
    let args = match with_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("abshift: {e}");
            return ExitCode::from(e.code());
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("abshift: {e}");
            ExitCode::from(e.code())
        }
    }
}
