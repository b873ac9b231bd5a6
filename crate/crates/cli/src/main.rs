use std::fmt::Write as _;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polrot::atomic::{analogy_map, atomic_wavenumbers, eigenpairs, rabi_wavelength, AtomScenario};
use polrot::constants::{AMU, C};
use polrot::dispersion::propagation_modes;
use polrot::interface::{flux_transmittance, penetration_length, surviving_transmittance};
use polrot::pulse::synthesize_field;
use polrot::{FieldGridRequest, PropagationModes, SusceptibilityTensor, UniformAxis, C64};
use polrot_cli::output::{render, run_header, write_all};
use polrot_cli::pipeline::{self, num, Artifact, RunOptions};
use polrot_cli::scenario::{parse_complex, Medium, Observable, ScenarioConfig};
use polrot_cli::{
    figure_scenario, parse_scenario, presets, run_scenario, FigureError, ScenarioError,
};

#[derive(Parser)]
#[command(
    name = "polrot",
    version,
    about = "Polarization rotation of light pulses in optically active media"
)]
struct Cli {
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Relative tolerance of the quadrature doubling test.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Directory for CSV output; tables go to stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct MediumArgs {
    /// Scenario file.
    #[arg(long, conflicts_with = "preset")]
    scenario: Option<PathBuf>,
    /// Bundled scenario (fig1 ... fig10).
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    chi11: Option<C64>,
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    chi12: Option<C64>,
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    chi33: Option<C64>,
    /// Vacuum wavelength in um.
    #[arg(long, default_value_t = 0.5)]
    lambda0: f64,
}

#[derive(Args, Clone)]
struct ScenarioArgs {
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    scenario: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Propagation modes of a medium.
    Modes(MediumArgs),
    /// Reflection and transmission amplitudes at the vacuum/medium interface.
    Interface(MediumArgs),
    /// Complex field on the scenario's space-time grid.
    Propagate(ScenarioArgs),
    /// Integrated polarization intensities versus time.
    Intensities(ScenarioArgs),
    /// Filtering-region map over frequency and axial field.
    FilterMap(ScenarioArgs),
    /// Mode eccentricities along a transverse field sweep.
    EccentricityScan(ScenarioArgs),
    /// Two-level atom formulas, optionally mapped from an optical medium.
    Atomic(AtomicArgs),
    /// Regenerate the tables of a bundled figure.
    Figure {
        #[arg(value_parser = clap::value_parser!(u32).range(1..=10))]
        n: u32,
    },
    /// Print a bundled scenario.
    Preset { name: String },
}

#[derive(Args)]
struct AtomicArgs {
    /// On-resonance Rabi frequency (rad/s), complex allowed.
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    omega: C64,
    /// Detuning (rad/s).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    delta: f64,
    /// Mass in atomic mass units.
    #[arg(long, default_value_t = 133.0)]
    mass: f64,
    /// Incident wavenumber (rad/m); the default is a cesium atom at about 1 m/s.
    #[arg(long, default_value_t = 2e9)]
    k: f64,
    /// Packet width in um.
    #[arg(long, default_value_t = 1.0)]
    sigma_z: f64,
    /// Also map this optical chi12 (with --chi11, --lambda0) onto an atom.
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    chi12: Option<C64>,
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    chi11: Option<C64>,
    #[arg(long, default_value_t = 0.5)]
    lambda0: f64,
}

fn complex_arg(s: &str) -> Result<C64, String> {
    parse_complex(s).ok_or_else(|| format!("not a complex number: `{s}`"))
}

enum Failure {
    Usage(String),
    Numeric(polrot::Error),
    Io(io::Error),
}

impl From<polrot::Error> for Failure {
    fn from(e: polrot::Error) -> Self {
        Failure::Numeric(e)
    }
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<FigureError> for Failure {
    fn from(e: FigureError) -> Self {
        match e {
            FigureError::Numeric(e) => Failure::Numeric(e),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let mut opts = RunOptions::default();
    if let Some(tol) = cli.tolerance {
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Failure::Usage("--tolerance must be in (0, 1)".into()));
        }
        opts.quadrature.rel_tol = tol;
    }
    let out = cli.out.as_deref();
    match cli.command {
        Command::Modes(m) => print(&modes_report(&m)?),
        Command::Interface(m) => print(&interface_report(&m)?),
        Command::Propagate(s) => propagate(&load(&s)?, &opts, out),
        Command::Intensities(s) => observe(&load(&s)?, Observable::Intensities, &opts, out),
        Command::FilterMap(s) => observe(&load(&s)?, Observable::Regions, &opts, out),
        Command::EccentricityScan(s) => observe(&load(&s)?, Observable::Eccentricity, &opts, out),
        Command::Atomic(a) => print(&atomic_report(&a)?),
        Command::Figure { n } => {
            let cfg = figure_scenario(n)?;
            let dir = out
                .map(Path::to_path_buf)
                .unwrap_or_else(|| PathBuf::from(format!("fig{n}")));
            let artifacts = run_scenario(&cfg, &opts)?;
            for p in write_all(&dir, &artifacts, &run_header(&cfg))? {
                println!("{}", p.display());
            }
            Ok(())
        }
        Command::Preset { name } => {
            let text = presets::preset_text(&name)
                .ok_or_else(|| Failure::Usage(format!("no preset `{name}`")))?;
            print(&polrot_cli::serialize_scenario(&parse_scenario(text)?))
        }
    }
}

fn print(text: &str) -> Result<(), Failure> {
    io::stdout().write_all(text.as_bytes())?;
    Ok(())
}

fn read(path: &std::path::Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn load(args: &ScenarioArgs) -> Result<ScenarioConfig, Failure> {
    match (&args.scenario, &args.preset) {
        (Some(path), _) => Ok(parse_scenario(&read(path)?)?),
        (None, Some(name)) => presets::preset(name)
            .ok_or_else(|| Failure::Usage(format!("no preset `{name}`")))?
            .map_err(Into::into),
        (None, None) => Err(Failure::Usage("give --scenario or --preset".into())),
    }
}

/// Runs one observable of a scenario, whatever the scenario itself lists.
fn observe(
    cfg: &ScenarioConfig,
    which: Observable,
    opts: &RunOptions,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let mut cfg = cfg.clone();
    cfg.observables = vec![which];
    let text = polrot_cli::serialize_scenario(&cfg);
    let cfg = parse_scenario(&text)?;
    let artifacts = run_scenario(&cfg, opts)?;
    emit(&cfg, &artifacts, out)
}

fn emit(cfg: &ScenarioConfig, artifacts: &[Artifact], out: Option<&Path>) -> Result<(), Failure> {
    let header = run_header(cfg);
    match out {
        Some(dir) => {
            for p in write_all(dir, artifacts, &header)? {
                println!("{}", p.display());
            }
        }
        None => {
            let mut stdout = io::stdout().lock();
            for a in artifacts {
                stdout.write_all(&render(a, &header)?)?;
            }
        }
    }
    Ok(())
}

fn propagate(cfg: &ScenarioConfig, opts: &RunOptions, out: Option<&Path>) -> Result<(), Failure> {
    let (Some(chi), Some(p), Some(t)) = (pipeline::direct_tensor(&cfg.medium), cfg.pulse, cfg.t)
    else {
        return Err(Failure::Usage(
            "propagate needs susceptibility entries, a pulse and a time grid".into(),
        ));
    };
    let spec = pipeline::pulse_spec(&p, p.sigma_t_fs)?;
    let sol = pipeline::interface_for(&chi, &spec)?;
    let t = pipeline::time_axis(&t)?;
    let req = match cfg.z {
        Some(z) => FieldGridRequest {
            z: UniformAxis::new(0.0, z.step * 1e-6, z.count())?,
            t,
        },
        None => FieldGridRequest::medium(&spec, &sol, t)?,
    };
    let grid = synthesize_field(&spec, &sol, &req, &opts.quadrature)?;
    let mut a = Artifact {
        file_name: "field.csv".into(),
        notes: vec![
            ("panels".into(), grid.panels.to_string()),
            ("doubling_change".into(), num(grid.doubling_change)),
        ],
        columns: ["t_fs", "z_um", "ex_re", "ex_im", "ey_re", "ey_im"]
            .map(String::from)
            .to_vec(),
        rows: Vec::with_capacity(req.samples()),
    };
    for it in 0..grid.nt() {
        for s in grid.row(it) {
            a.rows.push(
                [s.t * 1e15, s.z * 1e6, s.ex.re, s.ex.im, s.ey.re, s.ey.im]
                    .iter()
                    .map(|&v| num(v))
                    .collect(),
            );
        }
    }
    emit(cfg, &[a], out)
}

/// Tensor and angular frequency (rad/s for direct entries, units of the
/// resonance frequency for a Lorentz medium).
fn medium_of(m: &MediumArgs) -> Result<(SusceptibilityTensor, f64), Failure> {
    let from_flags = m.chi11.is_some() || m.chi12.is_some() || m.chi33.is_some();
    let cfg = match (&m.scenario, &m.preset) {
        (None, None) => None,
        (s, p) => {
            if from_flags {
                return Err(Failure::Usage(
                    "give chi entries or a scenario, not both".into(),
                ));
            }
            Some(load(&ScenarioArgs {
                scenario: s.clone(),
                preset: p.clone(),
            })?)
        }
    };
    if m.lambda0.is_nan() || m.lambda0 <= 0.0 {
        return Err(Failure::Usage("--lambda0 must be positive".into()));
    }
    let omega_vac = |lambda_um: f64| 2.0 * std::f64::consts::PI * C / (lambda_um * 1e-6);
    match cfg {
        None => {
            let z = C64::new(0.0, 0.0);
            let chi = SusceptibilityTensor::faraday(
                m.chi11.unwrap_or(z),
                m.chi12.unwrap_or(z),
                m.chi33.unwrap_or(z),
            );
            Ok((chi, omega_vac(m.lambda0)))
        }
        Some(cfg) => match cfg.medium {
            Medium::Direct { .. } => {
                let chi = pipeline::direct_tensor(&cfg.medium).unwrap();
                let lambda = cfg.pulse.map_or(m.lambda0, |p| p.lambda0_um);
                Ok((chi, omega_vac(lambda)))
            }
            Medium::Lorentz { omega, .. } => {
                let w =
                    omega.ok_or_else(|| Failure::Usage("scenario needs medium.omega".into()))?;
                let medium = pipeline::lorentz_medium(&cfg.medium).unwrap()?;
                Ok((medium.susceptibility(w)?, w))
            }
        },
    }
}

fn fmt_c(z: C64) -> String {
    // values that print as zero lose their sign
    let r = |x: f64| if x.abs() < 5e-11 { 0.0 } else { x };
    format!("{:.10}{:+.10}i", r(z.re), r(z.im))
}

fn describe_modes(s: &mut String, modes: &PropagationModes) {
    for (label, m) in [("+", &modes.plus), ("-", &modes.minus)] {
        let e = m.ellipse();
        let _ = writeln!(s, "n{label} = {}  ({:?})", fmt_c(m.n), m.kind);
        let _ = writeln!(s, "k{label} = {}", fmt_c(m.k));
        let _ = writeln!(
            s,
            "jones{label} = ({}, {})",
            fmt_c(m.jones[0]),
            fmt_c(m.jones[1])
        );
        let _ = writeln!(
            s,
            "ellipse{label}: eccentricity = {:.6}, handedness = {}",
            e.eccentricity, e.handedness
        );
    }
}

fn modes_report(m: &MediumArgs) -> Result<String, Failure> {
    let (chi, w) = medium_of(m)?;
    let modes = propagation_modes(&chi, w)?;
    let mut s = String::new();
    let _ = writeln!(s, "omega = {}", num(w));
    let _ = writeln!(
        s,
        "n+ / n- = {:.10} / {:.10}",
        modes.plus.n.re, modes.minus.n.re
    );
    describe_modes(&mut s, &modes);
    let _ = writeln!(s, "degenerate = {}", modes.degenerate);
    Ok(s)
}

fn interface_report(m: &MediumArgs) -> Result<String, Failure> {
    let (chi, w) = medium_of(m)?;
    let modes = propagation_modes(&chi, w)?;
    let sol = pipeline::interface_at(modes.k0(), &modes)?;
    let mut s = String::new();
    let _ = writeln!(s, "R11 = {}", fmt_c(sol.r11));
    let _ = writeln!(s, "R21 = {}", fmt_c(sol.r21));
    let _ = writeln!(s, "C+ = {}", fmt_c(sol.c_plus));
    let _ = writeln!(s, "C- = {}", fmt_c(sol.c_minus));
    let _ = writeln!(s, "reflectance = {:.10}", sol.reflectance());
    let _ = writeln!(s, "flux transmittance = {:.10}", flux_transmittance(&sol));
    if let Ok(t) = surviving_transmittance(&sol) {
        let _ = writeln!(s, "surviving-mode transmittance = {t:.10}");
    }
    if let Ok(l) = penetration_length(&modes) {
        let _ = writeln!(s, "penetration length = {}", num(l));
    }
    Ok(s)
}

fn atomic_report(a: &AtomicArgs) -> Result<String, Failure> {
    let atom = AtomScenario::new(a.omega, a.delta, a.mass * AMU, a.k, a.sigma_z * 1e-6)?;
    let mut s = String::new();
    let _ = writeln!(s, "omega' = {}", num(atom.omega_prime()));
    let _ = writeln!(s, "rabi period = {}", num(atom.rabi_period()));
    let _ = writeln!(s, "rabi wavelength = {}", num(rabi_wavelength(&atom)));
    let _ = writeln!(s, "splitting time = {}", num(atom.splitting_time()));
    match eigenpairs(&atom) {
        Ok(ep) => {
            let _ = writeln!(
                s,
                "lambda+ = {}  v+ = (1, {})",
                num(ep.lambda_plus),
                fmt_c(ep.v_plus[1])
            );
            let _ = writeln!(
                s,
                "lambda- = {}  v- = (1, {})",
                num(ep.lambda_minus),
                fmt_c(ep.v_minus[1])
            );
        }
        Err(e) => {
            let _ = writeln!(s, "eigenpairs: {}", e.name());
        }
    }
    let k = atomic_wavenumbers(&atom);
    let tag = |ev: bool| if ev { "  (evanescent)" } else { "" };
    let _ = writeln!(s, "k+ = {}{}", fmt_c(k.plus), tag(k.plus_evanescent));
    let _ = writeln!(s, "k- = {}{}", fmt_c(k.minus), tag(k.minus_evanescent));
    if let Some(chi12) = a.chi12 {
        let omega = 2.0 * std::f64::consts::PI * C / (a.lambda0 * 1e-6);
        let map = analogy_map(a.chi11.unwrap_or_default(), chi12, omega)?;
        let _ = writeln!(s, "analogy: omega_eff = {}", fmt_c(map.omega_eff));
        let _ = writeln!(s, "analogy: delta_eff = {}", num(map.delta_eff));
        let _ = writeln!(s, "analogy: mass = {}", num(map.mass));
        let _ = writeln!(s, "analogy: optical period = {}", num(map.optical_period));
        let _ = writeln!(s, "analogy: atomic period = {}", num(map.atomic_period));
    }
    Ok(s)
}
