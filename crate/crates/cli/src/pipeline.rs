//! Runs a scenario's observables and collects them as CSV tables.

use polrot::dispersion::propagation_modes;
use polrot::filter::{cell_report, eccentricity_scan, region_map, FilterRegion};
use polrot::interface::{match_interface, match_interface_general};
use polrot::observables::{
    circular_overlap, classify_regime, fluence_fraction, integrated_intensities,
    oscillation_metrics, IntensityTrace,
};
use polrot::pulse::synthesize_field;
use polrot::{
    Error, FieldGrid, FieldGridRequest, InterfaceSolution, LorentzMedium, OscillationMetrics,
    PropagationModes, PulseSpec, QuadratureOptions, RegimeReport, Result, SusceptibilityTensor,
    UniformAxis,
};
use rayon::prelude::*;

use crate::scenario::{Medium, Observable, PulseParams, ScenarioConfig, Span};

const UM: f64 = 1e-6;
const FS: f64 = 1e-15;

/// Time rows synthesized per call, to bound memory.
const T_CHUNK: usize = 100;
/// `z` columns per call for fluence maps.
const Z_CHUNK: usize = 200;

/// One CSV table plus `key: value` notes for its header.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub file_name: String,
    pub notes: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Artifact {
    fn new(file_name: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            file_name: file_name.into(),
            notes: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn note(&mut self, key: &str, value: impl ToString) {
        self.notes.push((key.to_string(), value.to_string()));
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// Shortest round-trip form, scientific outside `[1e-4, 1e15)`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn nums(xs: &[f64]) -> Vec<String> {
    xs.iter().map(|&x| num(x)).collect()
}

pub fn direct_tensor(medium: &Medium) -> Option<SusceptibilityTensor> {
    match *medium {
        Medium::Direct {
            chi11,
            chi12,
            chi33,
        } => Some(SusceptibilityTensor::faraday(chi11, chi12, chi33)),
        Medium::Lorentz { .. } => None,
    }
}

/// Lorentz medium in units of its resonance frequency.
pub fn lorentz_medium(medium: &Medium) -> Option<Result<LorentzMedium>> {
    match *medium {
        Medium::Lorentz {
            omega_p,
            omega_c,
            gamma,
            ..
        } => Some(LorentzMedium::scaled(omega_p, omega_c, gamma)),
        Medium::Direct { .. } => None,
    }
}

pub fn pulse_spec(p: &PulseParams, sigma_t_fs: f64) -> Result<PulseSpec> {
    PulseSpec::from_wavelength(p.lambda0_um * UM, sigma_t_fs * FS, p.z0_um * UM)
}

/// Interface amplitudes at the carrier, by the circular closed form when
/// the modes allow it.
pub fn interface_for(chi: &SusceptibilityTensor, spec: &PulseSpec) -> Result<InterfaceSolution> {
    interface_at(spec.k0, &propagation_modes(chi, spec.omega0())?)
}

pub fn interface_at(k: f64, modes: &PropagationModes) -> Result<InterfaceSolution> {
    match match_interface(k, modes) {
        Err(Error::NonCircularModes) => match_interface_general(k, modes),
        other => other,
    }
}

pub fn time_axis(t: &Span) -> Result<UniformAxis> {
    UniformAxis::new(t.start * FS, t.step * FS, t.count())
}

fn chunks(axis: &UniformAxis, size: usize) -> Vec<UniformAxis> {
    (0..axis.len)
        .step_by(size)
        .map(|i| UniformAxis {
            start: axis.at(i),
            step: axis.step,
            len: size.min(axis.len - i),
        })
        .collect()
}

/// Integrated intensities over the medium, synthesized in blocks of
/// [`T_CHUNK`] times. Each block gets a `z` grid reaching past the pulse
/// front at the block's last time.
pub fn intensity_trace(
    spec: &PulseSpec,
    solution: &InterfaceSolution,
    t: &UniformAxis,
    opts: &QuadratureOptions,
) -> Result<IntensityTrace> {
    let mut out = IntensityTrace {
        times: Vec::new(),
        i1: Vec::new(),
        i2: Vec::new(),
        i_plus: Vec::new(),
        i_minus: Vec::new(),
    };
    for block in chunks(t, T_CHUNK) {
        let req = FieldGridRequest::medium(spec, solution, block)?;
        let grid = synthesize_field(spec, solution, &req, opts)?;
        let tr = integrated_intensities(&grid)?;
        out.times.extend(tr.times);
        out.i1.extend(tr.i1);
        out.i2.extend(tr.i2);
        out.i_plus.extend(tr.i_plus);
        out.i_minus.extend(tr.i_minus);
    }
    Ok(out)
}

/// Start of the window over which oscillations are measured: the pulse
/// peak has entered and the entrance transient is over.
pub fn settled_time(spec: &PulseSpec) -> f64 {
    spec.arrival_time() + 5.0 * spec.sigma_t()
}

#[derive(Debug, Clone)]
pub struct IntensityRun {
    pub spec: PulseSpec,
    pub solution: InterfaceSolution,
    pub trace: IntensityTrace,
    pub regime: RegimeReport,
    pub i1: OscillationMetrics,
    pub i2: OscillationMetrics,
}

pub fn intensity_run(
    chi: &SusceptibilityTensor,
    spec: &PulseSpec,
    t: &UniformAxis,
    opts: &QuadratureOptions,
) -> Result<IntensityRun> {
    let solution = interface_for(chi, spec)?;
    let trace = intensity_trace(spec, &solution, t, opts)?;
    let regime = classify_regime(chi, spec, spec.omega0(), t.end())?;
    let window = (settled_time(spec), t.end());
    let i1 = oscillation_metrics(&trace.times, &trace.i1, window);
    let i2 = oscillation_metrics(&trace.times, &trace.i2, window);
    Ok(IntensityRun {
        spec: *spec,
        solution,
        trace,
        regime,
        i1,
        i2,
    })
}

/// Field at one depth for every time on the axis.
pub fn field_at(
    spec: &PulseSpec,
    solution: &InterfaceSolution,
    z: f64,
    t: &UniformAxis,
    opts: &QuadratureOptions,
) -> Result<FieldGrid> {
    let req = FieldGridRequest {
        z: UniformAxis::point(z),
        t: *t,
    };
    synthesize_field(spec, solution, &req, opts)
}

/// Field over the medium at one time.
pub fn field_snapshot(
    spec: &PulseSpec,
    solution: &InterfaceSolution,
    t: f64,
    opts: &QuadratureOptions,
) -> Result<FieldGrid> {
    let req = FieldGridRequest::medium(spec, solution, UniformAxis::point(t))?;
    synthesize_field(spec, solution, &req, opts)
}

/// Fraction of the time-integrated energy in `Ex` along `z`, in blocks of
/// [`Z_CHUNK`] positions.
pub fn fluence_profile(
    spec: &PulseSpec,
    solution: &InterfaceSolution,
    z: &UniformAxis,
    t: &UniformAxis,
    opts: &QuadratureOptions,
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(z.len);
    for block in chunks(z, Z_CHUNK) {
        let req = FieldGridRequest { z: block, t: *t };
        let grid = synthesize_field(spec, solution, &req, opts)?;
        out.extend(fluence_fraction(&grid));
    }
    Ok(out)
}

fn intensities_of(grid: &FieldGrid, it: usize, iz: usize) -> [f64; 4] {
    let s = grid.sample(it, iz);
    let (p, m) = s.circular();
    [s.ex.norm_sqr(), s.ey.norm_sqr(), p.norm_sqr(), m.norm_sqr()]
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub quadrature: QuadratureOptions,
}

/// Every observable listed in the scenario, in order.
pub fn run_scenario(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<Vec<Artifact>> {
    let mut out = Vec::new();
    for &o in &cfg.observables {
        match o {
            Observable::Intensities => out.extend(intensities(cfg, opts)?),
            Observable::Traces => out.push(traces(cfg, opts)?),
            Observable::Snapshots => out.push(snapshots(cfg, opts)?),
            Observable::Fluence => out.push(fluence(cfg, opts)?),
            Observable::Regions => out.extend(regions(cfg)?),
            Observable::Eccentricity => out.push(eccentricity(cfg)?),
            Observable::Penetration | Observable::Transmittance => out.push(filter_scan(cfg, o)?),
        }
    }
    Ok(out)
}

struct TimeDomain {
    chi: SusceptibilityTensor,
    pulse: PulseParams,
}

fn time_domain(cfg: &ScenarioConfig) -> Result<TimeDomain> {
    let missing = |what: &str| Error::InvalidParameter(format!("scenario has no {what}"));
    Ok(TimeDomain {
        chi: direct_tensor(&cfg.medium).ok_or_else(|| missing("susceptibility entries"))?,
        pulse: cfg.pulse.ok_or_else(|| missing("pulse"))?,
    })
}

fn t_axis(cfg: &ScenarioConfig) -> Result<UniformAxis> {
    time_axis(
        cfg.t
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("scenario has no time grid".into()))?,
    )
}

fn note_metrics(a: &mut Artifact, label: &str, m: &OscillationMetrics) {
    a.note(&format!("{label}.extrema"), m.extrema.len());
    a.note(&format!("{label}.amplitude"), num(m.amplitude));
    if let Some(p) = m.period {
        a.note(&format!("{label}.period_fs"), num(p / FS));
    }
    let times: Vec<String> = m
        .extrema
        .iter()
        .map(|e| format!("{:.1}", e.at / FS))
        .collect();
    if !times.is_empty() {
        a.note(&format!("{label}.extrema_fs"), times.join(" "));
    }
}

fn intensities(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<Vec<Artifact>> {
    let td = time_domain(cfg)?;
    let t = t_axis(cfg)?;
    let durations = if cfg.scan_sigma_t.is_empty() {
        vec![td.pulse.sigma_t_fs]
    } else {
        cfg.scan_sigma_t.clone()
    };
    let multi = durations.len() > 1;
    durations
        .iter()
        .map(|&st| {
            let spec = pulse_spec(&td.pulse, st)?;
            let run = intensity_run(&td.chi, &spec, &t, &opts.quadrature)?;
            let name = if multi {
                format!("intensities_sigma_t_{}fs.csv", num(st))
            } else {
                "intensities.csv".to_string()
            };
            let mut a = Artifact::new(name, &["t_fs", "I1", "I2", "I_plus", "I_minus"]);
            a.note("sigma_t_fs", num(st));
            a.note("regime", run.regime.regime);
            a.note("visibility", num(run.regime.visibility));
            if let Some(s) = run.regime.scales {
                a.note("rotation_period_fs", num(s.period / FS));
                a.note("rotation_length_um", num(s.length / UM));
                a.note("transition_time_fs", num(s.transition_time / FS));
            }
            a.note("settled_from_fs", num(settled_time(&spec) / FS));
            note_metrics(&mut a, "I1", &run.i1);
            note_metrics(&mut a, "I2", &run.i2);
            a.note("basis_defect", num(run.trace.basis_defect()));
            if let Ok(tr) = polrot::interface::surviving_transmittance(&run.solution) {
                a.note("transmittance", num(tr));
            }
            if let Ok(modes) = propagation_modes(&td.chi, spec.omega0()) {
                if let Ok(l) = polrot::interface::penetration_length(&modes) {
                    a.note("penetration_nm", num(l * 1e9));
                }
            }
            let tr = &run.trace;
            for j in 0..tr.len() {
                a.push(nums(&[
                    tr.times[j] / FS,
                    tr.i1[j],
                    tr.i2[j],
                    tr.i_plus[j],
                    tr.i_minus[j],
                ]));
            }
            Ok(a)
        })
        .collect()
}

fn traces(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<Artifact> {
    let td = time_domain(cfg)?;
    let spec = pulse_spec(&td.pulse, td.pulse.sigma_t_fs)?;
    let sol = interface_for(&td.chi, &spec)?;
    let t = t_axis(cfg)?;
    let mut a = Artifact::new(
        "traces.csv",
        &["z_um", "t_fs", "Ex2", "Ey2", "Eplus2", "Eminus2"],
    );
    for &z in &cfg.positions_um {
        let grid = field_at(&spec, &sol, z * UM, &t, &opts.quadrature)?;
        let rows: Vec<[f64; 4]> = (0..grid.nt())
            .map(|it| intensities_of(&grid, it, 0))
            .collect();
        let fx: f64 = rows.iter().map(|r| r[0]).sum();
        let all: f64 = rows.iter().map(|r| r[0] + r[1]).sum();
        let peak = (0..rows.len())
            .max_by(|&i, &j| (rows[i][0] + rows[i][1]).total_cmp(&(rows[j][0] + rows[j][1])))
            .unwrap_or(0);
        a.note(
            &format!("z_{}um", num(z)),
            format!(
                "peak_fs={} ex_fraction={}",
                num(t.at(peak) / FS),
                num(fx / all)
            ),
        );
        for (it, r) in rows.iter().enumerate() {
            a.push(nums(&[z, t.at(it) / FS, r[0], r[1], r[2], r[3]]));
        }
    }
    Ok(a)
}

fn snapshots(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<Artifact> {
    let td = time_domain(cfg)?;
    let spec = pulse_spec(&td.pulse, td.pulse.sigma_t_fs)?;
    let sol = interface_for(&td.chi, &spec)?;
    let mut a = Artifact::new(
        "snapshots.csv",
        &["t_fs", "z_um", "Ex2", "Ey2", "Eplus2", "Eminus2"],
    );
    for &t in &cfg.times_fs {
        let grid = field_snapshot(&spec, &sol, t * FS, &opts.quadrature)?;
        let rows: Vec<[f64; 4]> = (0..grid.nz())
            .map(|iz| intensities_of(&grid, 0, iz))
            .collect();
        let fx: f64 = rows.iter().map(|r| r[0]).sum();
        let all: f64 = rows.iter().map(|r| r[0] + r[1]).sum();
        a.note(
            &format!("t_{}fs", num(t)),
            format!(
                "ex_fraction={} circular_overlap={}",
                num(if all > 0.0 { fx / all } else { f64::NAN }),
                num(circular_overlap(&grid, 0))
            ),
        );
        for (iz, r) in rows.iter().enumerate() {
            a.push(nums(&[t, grid.z.at(iz) / UM, r[0], r[1], r[2], r[3]]));
        }
    }
    Ok(a)
}

fn fluence(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<Artifact> {
    let td = time_domain(cfg)?;
    let spec = pulse_spec(&td.pulse, td.pulse.sigma_t_fs)?;
    let sol = interface_for(&td.chi, &spec)?;
    let t = t_axis(cfg)?;
    let zs = cfg
        .z
        .ok_or_else(|| Error::InvalidParameter("scenario has no z grid".into()))?;
    let z = UniformAxis::new(0.0, zs.step * UM, zs.count())?;
    let frac = fluence_profile(&spec, &sol, &z, &t, &opts.quadrature)?;
    let zum: Vec<f64> = z.values().iter().map(|v| v / UM).collect();
    let m = oscillation_metrics(&zum, &frac, (0.0, zs.end));
    let mut a = Artifact::new("fluence.csv", &["z_um", "ex_fraction"]);
    a.note("extrema", m.extrema.len());
    if let Some(p) = m.period {
        a.note("alternation_spacing_um", num(0.5 * p));
    }
    let at: Vec<String> = m.extrema.iter().map(|e| format!("{:.1}", e.at)).collect();
    a.note("extrema_um", at.join(" "));
    for (zv, f) in zum.iter().zip(&frac) {
        a.push(nums(&[*zv, *f]));
    }
    Ok(a)
}

fn lorentz(cfg: &ScenarioConfig) -> Result<LorentzMedium> {
    lorentz_medium(&cfg.medium).unwrap_or_else(|| {
        Err(Error::InvalidParameter(
            "scenario has no Lorentz medium".into(),
        ))
    })
}

fn region_name(r: FilterRegion) -> String {
    r.to_string()
}

fn regions(cfg: &ScenarioConfig) -> Result<Vec<Artifact>> {
    let m = lorentz(cfg)?;
    let omegas = cfg.scan_omega.map(|l| l.values()).unwrap_or_default();
    let czs = cfg.scan_omega_cz.map(|l| l.values()).unwrap_or_default();
    let map = region_map(&m, &omegas, &czs);
    let mut cells = Artifact::new(
        "regions.csv",
        &[
            "omega",
            "omega_cz",
            "region",
            "r_plus_re",
            "r_plus_im",
            "e_plus",
            "e_minus",
            "penetration",
            "transmittance",
        ],
    );
    let c = map.crossings;
    cells.note(
        "crossings",
        format!("{} {} {}", num(c[0]), num(c[1]), num(c[2])),
    );
    for r in [
        FilterRegion::BothPropagating,
        FilterRegion::Filtering,
        FilterRegion::TotalReflection,
        FilterRegion::Resonant,
    ] {
        cells.note(&format!("count.{r}"), map.count(r));
    }
    let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
    let rows: Vec<Vec<String>> = omegas
        .par_iter()
        .flat_map_iter(|&w| czs.iter().map(move |&wc| (w, wc)))
        .map(|(w, wc)| {
            let rep = cell_report(&m, w, wc);
            vec![
                num(w),
                num(wc),
                region_name(rep.region),
                opt(rep.r_plus.map(|r| r.re)),
                opt(rep.r_plus.map(|r| r.im)),
                opt(Some(rep.e_plus).filter(|e| e.is_finite())),
                opt(Some(rep.e_minus).filter(|e| e.is_finite())),
                opt(rep.penetration),
                opt(rep.transmittance),
            ]
        })
        .collect();
    cells.rows = rows;
    let mut curves = Artifact::new(
        "boundary_curves.csv",
        &["omega", "subregion", "w1", "w2", "w3", "w4"],
    );
    for (b, s) in map.curves.iter().zip(&map.subregions) {
        let mut row = vec![num(b.omega), format!("{s:?}")];
        row.extend(nums(&b.as_array()));
        curves.push(row);
    }
    Ok(vec![cells, curves])
}

fn eccentricity(cfg: &ScenarioConfig) -> Result<Artifact> {
    let m = lorentz(cfg)?;
    let Medium::Lorentz {
        omega: Some(w),
        omega_c,
        ..
    } = cfg.medium
    else {
        return Err(Error::InvalidParameter(
            "eccentricity needs a probe frequency".into(),
        ));
    };
    let xs = cfg.scan_omega_cx.map(|l| l.values()).unwrap_or_default();
    let pts = eccentricity_scan(&m, w, &xs, omega_c[1], omega_c[2])?;
    let mut a = Artifact::new(
        "eccentricity.csv",
        &[
            "omega_cx",
            "e_plus",
            "e_minus",
            "ratio_plus_re",
            "ratio_plus_im",
            "ratio_minus_re",
            "ratio_minus_im",
        ],
    );
    let worst = pts.iter().map(|p| p.real_fraction).fold(0.0, f64::max);
    a.note("max_real_fraction", num(worst));
    for p in &pts {
        let (rp, rm) = (
            p.ratio_plus.unwrap_or_default(),
            p.ratio_minus.unwrap_or_default(),
        );
        a.push(nums(&[
            p.omega_cx,
            p.plus.eccentricity,
            p.minus.eccentricity,
            rp.re,
            rp.im,
            rm.re,
            rm.im,
        ]));
    }
    Ok(a)
}

/// Penetration length or transmittance of the filtering cells along a
/// field scan, at the scenario's probe frequency or `omega_0p`.
fn filter_scan(cfg: &ScenarioConfig, which: Observable) -> Result<Artifact> {
    let m = lorentz(cfg)?;
    let w = match cfg.medium {
        Medium::Lorentz { omega: Some(w), .. } => w,
        _ => m.omega_0p(),
    };
    let czs = cfg.scan_omega_cz.map(|l| l.values()).unwrap_or_default();
    let (file, col) = match which {
        Observable::Penetration => ("penetration.csv", "penetration"),
        _ => ("transmittance.csv", "transmittance"),
    };
    let mut a = Artifact::new(file, &["omega_cz", col]);
    a.note("omega", num(w));
    if which == Observable::Penetration {
        a.note("units", "c/omega0");
    }
    let mut best: Option<(f64, f64)> = None;
    for wc in czs {
        let rep = cell_report(&m, w, wc);
        let v = match which {
            Observable::Penetration => rep.penetration,
            _ => rep.transmittance,
        };
        if let Some(v) = v {
            let better = match (which, best) {
                (_, None) => true,
                (Observable::Penetration, Some((_, b))) => v < b,
                (_, Some((_, b))) => v > b,
            };
            if better {
                best = Some((wc, v));
            }
            a.push(nums(&[wc, v]));
        }
    }
    if let Some((wc, v)) = best {
        let label = if which == Observable::Penetration {
            "min"
        } else {
            "max"
        };
        a.note(&format!("{label}.{col}"), num(v));
        a.note(&format!("{label}.omega_cz"), num(wc));
    }
    Ok(a)
}
