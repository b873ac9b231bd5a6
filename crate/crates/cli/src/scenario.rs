//! Scenario files: `key = value` lines with `#` comments and dotted keys.
//!
//! Units: lengths in μm, times in fs. In Lorentz mode every frequency is a
//! ratio to the resonance frequency ω0. Susceptibilities are complex
//! literals such as `0.0002i`, `1.5-0.3i` or `0`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use polrot::C64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },
}

fn parse_err(line: usize, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Parse {
        line,
        message: message.into(),
    }
}

fn invalid(field: &str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Validation {
        field: field.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Medium {
    Direct {
        chi11: C64,
        chi12: C64,
        chi33: C64,
    },
    Lorentz {
        omega_p: f64,
        omega_c: [f64; 3],
        gamma: f64,
        /// Probe frequency, if the scenario fixes one.
        omega: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseParams {
    pub lambda0_um: f64,
    pub sigma_t_fs: f64,
    pub z0_um: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Span {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl Span {
    /// Number of points from `start` up to `end` inclusive.
    pub fn count(&self) -> usize {
        ((self.end - self.start) / self.step + 1e-9).floor() as usize + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Linspace {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Linspace {
    pub fn values(&self) -> Vec<f64> {
        polrot::filter::linspace(self.min, self.max, self.count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Observable {
    Intensities,
    Traces,
    Snapshots,
    Fluence,
    Regions,
    Eccentricity,
    Penetration,
    Transmittance,
}

impl Observable {
    pub const ALL: [Observable; 8] = [
        Observable::Intensities,
        Observable::Traces,
        Observable::Snapshots,
        Observable::Fluence,
        Observable::Regions,
        Observable::Eccentricity,
        Observable::Penetration,
        Observable::Transmittance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Observable::Intensities => "intensities",
            Observable::Traces => "traces",
            Observable::Snapshots => "snapshots",
            Observable::Fluence => "fluence",
            Observable::Regions => "regions",
            Observable::Eccentricity => "eccentricity",
            Observable::Penetration => "penetration",
            Observable::Transmittance => "transmittance",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|o| o.name() == s)
    }

    fn is_time_domain(self) -> bool {
        matches!(
            self,
            Observable::Intensities
                | Observable::Traces
                | Observable::Snapshots
                | Observable::Fluence
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: Option<String>,
    pub caption: Option<String>,
    pub medium: Medium,
    pub pulse: Option<PulseParams>,
    pub t: Option<Span>,
    /// Medium-side `z` grid from 0; chosen automatically when absent.
    pub z: Option<Span>,
    pub scan_omega: Option<Linspace>,
    pub scan_omega_cz: Option<Linspace>,
    pub scan_omega_cx: Option<Linspace>,
    /// Pulse durations to repeat the run for (fs); empty means `pulse.sigma_t`.
    pub scan_sigma_t: Vec<f64>,
    pub observables: Vec<Observable>,
    pub positions_um: Vec<f64>,
    pub times_fs: Vec<f64>,
}

const KEYS: &[&str] = &[
    "name",
    "caption",
    "medium.chi11",
    "medium.chi12",
    "medium.chi33",
    "medium.omega_p",
    "medium.omega_cx",
    "medium.omega_cy",
    "medium.omega_cz",
    "medium.gamma",
    "medium.omega",
    "pulse.lambda0",
    "pulse.sigma_t",
    "pulse.z0",
    "grid.t_start",
    "grid.t_end",
    "grid.t_step",
    "grid.z_end",
    "grid.z_step",
    "scan.omega_min",
    "scan.omega_max",
    "scan.omega_count",
    "scan.omega_cz_min",
    "scan.omega_cz_max",
    "scan.omega_cz_count",
    "scan.omega_cx_min",
    "scan.omega_cx_max",
    "scan.omega_cx_count",
    "scan.sigma_t",
    "output.observables",
    "output.positions",
    "output.times",
];

const DIRECT_KEYS: [&str; 3] = ["medium.chi11", "medium.chi12", "medium.chi33"];
const LORENTZ_KEYS: [&str; 6] = [
    "medium.omega_p",
    "medium.omega_cx",
    "medium.omega_cy",
    "medium.omega_cz",
    "medium.gamma",
    "medium.omega",
];

/// Parses `a`, `bi`, `a+bi` or `a-bi` (also `i`, `-i`).
pub fn parse_complex(s: &str) -> Option<C64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().ok().map(|re| C64::new(re, 0.0));
    };
    // split at the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&j| matches!(bytes[j], b'+' | b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
    let imag = |t: &str| match t {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => t.parse::<f64>().ok(),
    };
    match split {
        Some(j) => {
            let re = body[..j].parse::<f64>().ok()?;
            Some(C64::new(re, imag(&body[j..])?))
        }
        None => Some(C64::new(0.0, imag(body)?)),
    }
}

pub fn format_complex(z: C64) -> String {
    match (z.re == 0.0, z.im == 0.0) {
        (_, true) => format!("{:?}", z.re),
        (true, false) => format!("{:?}i", z.im),
        (false, false) if z.im < 0.0 => format!("{:?}-{:?}i", z.re, -z.im),
        (false, false) => format!("{:?}+{:?}i", z.re, z.im),
    }
}

struct Entries {
    values: BTreeMap<&'static str, (usize, String)>,
}

impl Entries {
    fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    fn raw(&self, key: &str) -> Option<&(usize, String)> {
        self.values.get(key)
    }

    fn text(&self, key: &str) -> Option<String> {
        self.raw(key).map(|(_, v)| v.clone())
    }

    fn real(&self, key: &str) -> Result<Option<f64>, ScenarioError> {
        self.raw(key)
            .map(|(line, v)| {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| parse_err(*line, format!("{key}: expected a number, got `{v}`")))
            })
            .transpose()
    }

    fn count(&self, key: &str) -> Result<Option<usize>, ScenarioError> {
        self.raw(key)
            .map(|(line, v)| {
                v.parse::<usize>()
                    .map_err(|_| parse_err(*line, format!("{key}: expected a count, got `{v}`")))
            })
            .transpose()
    }

    fn complex(&self, key: &str) -> Result<Option<C64>, ScenarioError> {
        self.raw(key)
            .map(|(line, v)| {
                parse_complex(v)
                    .filter(|z| z.re.is_finite() && z.im.is_finite())
                    .ok_or_else(|| {
                        parse_err(
                            *line,
                            format!("{key}: expected a complex number, got `{v}`"),
                        )
                    })
            })
            .transpose()
    }

    fn list(&self, key: &str) -> Result<Vec<f64>, ScenarioError> {
        let Some((line, v)) = self.raw(key) else {
            return Ok(Vec::new());
        };
        v.split(',')
            .map(|item| {
                let item = item.trim();
                item.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| {
                        parse_err(*line, format!("{key}: expected a number, got `{item}`"))
                    })
            })
            .collect()
    }

    fn real_or(&self, key: &str, default: f64) -> Result<f64, ScenarioError> {
        Ok(self.real(key)?.unwrap_or(default))
    }
}

pub fn parse_scenario(text: &str) -> Result<ScenarioConfig, ScenarioError> {
    let mut values = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let Some((k, v)) = s.split_once('=') else {
            return Err(parse_err(
                line,
                format!("expected `key = value`, got `{s}`"),
            ));
        };
        let k = k.trim();
        let Some(&key) = KEYS.iter().find(|&&known| known == k) else {
            return Err(parse_err(line, format!("unknown key `{k}`")));
        };
        let v = v.trim();
        if v.is_empty() {
            return Err(parse_err(line, format!("{key}: missing value")));
        }
        if values.insert(key, (line, v.to_string())).is_some() {
            return Err(parse_err(line, format!("duplicate key `{key}`")));
        }
    }
    if values.is_empty() {
        return Err(parse_err(text.lines().count().max(1), "empty scenario"));
    }
    build(&Entries { values })
}

fn span(e: &Entries, prefix: &str, parts: &[&str]) -> Result<Option<[f64; 3]>, ScenarioError> {
    let keys: Vec<String> = parts.iter().map(|p| format!("{prefix}{p}")).collect();
    let vals = keys
        .iter()
        .map(|k| e.real(k))
        .collect::<Result<Vec<_>, _>>()?;
    let present = vals.iter().filter(|v| v.is_some()).count();
    if present == 0 {
        return Ok(None);
    }
    if present != keys.len() {
        let missing = keys.iter().find(|k| !e.has(k)).unwrap();
        return Err(invalid(
            missing,
            "required together with the rest of its group",
        ));
    }
    let mut out = [0.0; 3];
    for (o, v) in out.iter_mut().zip(vals) {
        *o = v.unwrap();
    }
    Ok(Some(out))
}

fn linspace(e: &Entries, prefix: &str) -> Result<Option<Linspace>, ScenarioError> {
    let keys = [
        format!("{prefix}_min"),
        format!("{prefix}_max"),
        format!("{prefix}_count"),
    ];
    let (min, max, count) = (e.real(&keys[0])?, e.real(&keys[1])?, e.count(&keys[2])?);
    let present = keys.iter().filter(|k| e.has(k)).count();
    if present == 0 {
        return Ok(None);
    }
    if present != 3 {
        let missing = keys.iter().find(|k| !e.has(k)).unwrap();
        return Err(invalid(
            missing,
            "required together with the rest of its group",
        ));
    }
    let l = Linspace {
        min: min.unwrap(),
        max: max.unwrap(),
        count: count.unwrap(),
    };
    if l.count == 0 {
        return Err(invalid(&keys[2], "must be at least 1"));
    }
    if l.max < l.min {
        return Err(invalid(&keys[1], "must not be below the minimum"));
    }
    Ok(Some(l))
}

fn build(e: &Entries) -> Result<ScenarioConfig, ScenarioError> {
    let direct = DIRECT_KEYS.iter().any(|k| e.has(k));
    let lorentz = LORENTZ_KEYS.iter().any(|k| e.has(k));
    let medium = match (direct, lorentz) {
        (true, true) => {
            return Err(invalid(
                "medium",
                "give either susceptibility entries or Lorentz parameters, not both",
            ))
        }
        (false, false) => return Err(invalid("medium", "no medium specified")),
        (true, false) => Medium::Direct {
            chi11: e.complex("medium.chi11")?.unwrap_or_default(),
            chi12: e.complex("medium.chi12")?.unwrap_or_default(),
            chi33: e.complex("medium.chi33")?.unwrap_or_default(),
        },
        (false, true) => {
            let omega_p = e
                .real("medium.omega_p")?
                .ok_or_else(|| invalid("medium.omega_p", "required for a Lorentz medium"))?;
            if omega_p < 0.0 {
                return Err(invalid("medium.omega_p", "must be non-negative"));
            }
            let gamma = e.real_or("medium.gamma", 0.0)?;
            if gamma < 0.0 {
                return Err(invalid("medium.gamma", "must be non-negative"));
            }
            let omega = e.real("medium.omega")?;
            if omega.is_some_and(|w| w <= 0.0) {
                return Err(invalid("medium.omega", "must be positive"));
            }
            Medium::Lorentz {
                omega_p,
                omega_c: [
                    e.real_or("medium.omega_cx", 0.0)?,
                    e.real_or("medium.omega_cy", 0.0)?,
                    e.real_or("medium.omega_cz", 0.0)?,
                ],
                gamma,
                omega,
            }
        }
    };

    let pulse = span(e, "pulse.", &["lambda0", "sigma_t", "z0"])?.map(|[l, s, z]| PulseParams {
        lambda0_um: l,
        sigma_t_fs: s,
        z0_um: z,
    });
    if let Some(p) = pulse {
        if p.lambda0_um <= 0.0 {
            return Err(invalid("pulse.lambda0", "must be positive"));
        }
        if p.sigma_t_fs <= 0.0 {
            return Err(invalid("pulse.sigma_t", "must be positive"));
        }
        if p.z0_um >= 0.0 {
            return Err(invalid(
                "pulse.z0",
                "the pulse must start in vacuum (z0 < 0)",
            ));
        }
    }

    let t = span(e, "grid.t_", &["start", "end", "step"])?.map(|[start, end, step]| Span {
        start,
        end,
        step,
    });
    if let Some(t) = t {
        if t.step <= 0.0 {
            return Err(invalid("grid.t_step", "must be positive"));
        }
        if t.end < t.start {
            return Err(invalid("grid.t_end", "must not precede grid.t_start"));
        }
    }
    let z = span(e, "grid.z_", &["end", "step"])?.map(|[end, step, _]| Span {
        start: 0.0,
        end,
        step,
    });
    if let Some(z) = z {
        if z.step <= 0.0 {
            return Err(invalid("grid.z_step", "must be positive"));
        }
        if z.end <= 0.0 {
            return Err(invalid("grid.z_end", "must be positive"));
        }
    }

    let scan_sigma_t = e.list("scan.sigma_t")?;
    if scan_sigma_t.iter().any(|&s| s <= 0.0) {
        return Err(invalid("scan.sigma_t", "durations must be positive"));
    }

    let mut observables = Vec::new();
    if let Some((line, v)) = e.raw("output.observables") {
        for item in v.split(',').map(str::trim) {
            let o = Observable::from_name(item).ok_or_else(|| {
                parse_err(
                    *line,
                    format!("output.observables: unknown observable `{item}`"),
                )
            })?;
            if observables.contains(&o) {
                return Err(invalid(
                    "output.observables",
                    format!("`{item}` listed twice"),
                ));
            }
            observables.push(o);
        }
    }

    let cfg = ScenarioConfig {
        name: e.text("name"),
        caption: e.text("caption"),
        medium,
        pulse,
        t,
        z,
        scan_omega: linspace(e, "scan.omega")?,
        scan_omega_cz: linspace(e, "scan.omega_cz")?,
        scan_omega_cx: linspace(e, "scan.omega_cx")?,
        scan_sigma_t,
        observables,
        positions_um: e.list("output.positions")?,
        times_fs: e.list("output.times")?,
    };
    check_requirements(&cfg)?;
    Ok(cfg)
}

/// Each observable's inputs must be present.
fn check_requirements(cfg: &ScenarioConfig) -> Result<(), ScenarioError> {
    let lorentz = matches!(cfg.medium, Medium::Lorentz { .. });
    for &o in &cfg.observables {
        let name = o.name();
        if o.is_time_domain() {
            if lorentz {
                return Err(invalid(
                    "medium",
                    format!("{name} needs susceptibility entries"),
                ));
            }
            if cfg.pulse.is_none() {
                return Err(invalid("pulse.lambda0", format!("{name} needs a pulse")));
            }
            if cfg.t.is_none() && o != Observable::Snapshots {
                return Err(invalid("grid.t_start", format!("{name} needs a time grid")));
            }
        } else if !lorentz {
            return Err(invalid(
                "medium.omega_p",
                format!("{name} needs a Lorentz medium"),
            ));
        }
        match o {
            Observable::Traces if cfg.positions_um.is_empty() => {
                return Err(invalid(
                    "output.positions",
                    "traces need at least one position",
                ))
            }
            Observable::Snapshots if cfg.times_fs.is_empty() => {
                return Err(invalid("output.times", "snapshots need at least one time"))
            }
            Observable::Fluence if cfg.z.is_none() => {
                return Err(invalid("grid.z_end", "fluence needs an explicit z grid"))
            }
            Observable::Regions if cfg.scan_omega.is_none() => {
                return Err(invalid("scan.omega_min", "regions need a frequency scan"))
            }
            Observable::Regions | Observable::Penetration | Observable::Transmittance
                if cfg.scan_omega_cz.is_none() =>
            {
                return Err(invalid(
                    "scan.omega_cz_min",
                    format!("{name} needs a field scan"),
                ))
            }
            Observable::Eccentricity if cfg.scan_omega_cx.is_none() => {
                return Err(invalid(
                    "scan.omega_cx_min",
                    "eccentricity needs a transverse field scan",
                ))
            }
            Observable::Eccentricity
                if !matches!(cfg.medium, Medium::Lorentz { omega: Some(_), .. }) =>
            {
                return Err(invalid(
                    "medium.omega",
                    "eccentricity needs a probe frequency",
                ))
            }
            _ => {}
        }
    }
    if cfg.positions_um.iter().any(|&z| z < 0.0) {
        return Err(invalid(
            "output.positions",
            "positions must be inside the medium (z >= 0)",
        ));
    }
    Ok(())
}

fn list(v: &[f64]) -> String {
    v.iter()
        .map(|x| format!("{x:?}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Canonical text form; `parse_scenario` reads it back to an equal config.
pub fn serialize_scenario(cfg: &ScenarioConfig) -> String {
    let mut out = String::new();
    out.push_str("# polrot scenario\n");
    out.push_str("# lengths in um, times in fs, Lorentz frequencies as ratios to omega0\n");
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    if let Some(n) = &cfg.name {
        kv("name", n.clone());
    }
    if let Some(c) = &cfg.caption {
        kv("caption", c.clone());
    }
    match cfg.medium {
        Medium::Direct {
            chi11,
            chi12,
            chi33,
        } => {
            kv("medium.chi11", format_complex(chi11));
            kv("medium.chi12", format_complex(chi12));
            kv("medium.chi33", format_complex(chi33));
        }
        Medium::Lorentz {
            omega_p,
            omega_c,
            gamma,
            omega,
        } => {
            kv("medium.omega_p", format!("{omega_p:?}"));
            kv("medium.omega_cx", format!("{:?}", omega_c[0]));
            kv("medium.omega_cy", format!("{:?}", omega_c[1]));
            kv("medium.omega_cz", format!("{:?}", omega_c[2]));
            kv("medium.gamma", format!("{gamma:?}"));
            if let Some(w) = omega {
                kv("medium.omega", format!("{w:?}"));
            }
        }
    }
    if let Some(p) = cfg.pulse {
        kv("pulse.lambda0", format!("{:?}", p.lambda0_um));
        kv("pulse.sigma_t", format!("{:?}", p.sigma_t_fs));
        kv("pulse.z0", format!("{:?}", p.z0_um));
    }
    if let Some(t) = cfg.t {
        kv("grid.t_start", format!("{:?}", t.start));
        kv("grid.t_end", format!("{:?}", t.end));
        kv("grid.t_step", format!("{:?}", t.step));
    }
    if let Some(z) = cfg.z {
        kv("grid.z_end", format!("{:?}", z.end));
        kv("grid.z_step", format!("{:?}", z.step));
    }
    for (prefix, l) in [
        ("scan.omega", cfg.scan_omega),
        ("scan.omega_cz", cfg.scan_omega_cz),
        ("scan.omega_cx", cfg.scan_omega_cx),
    ] {
        if let Some(l) = l {
            kv(&format!("{prefix}_min"), format!("{:?}", l.min));
            kv(&format!("{prefix}_max"), format!("{:?}", l.max));
            kv(&format!("{prefix}_count"), l.count.to_string());
        }
    }
    if !cfg.scan_sigma_t.is_empty() {
        kv("scan.sigma_t", list(&cfg.scan_sigma_t));
    }
    if !cfg.observables.is_empty() {
        let names: Vec<&str> = cfg.observables.iter().map(|o| o.name()).collect();
        kv("output.observables", names.join(", "));
    }
    if !cfg.positions_um.is_empty() {
        kv("output.positions", list(&cfg.positions_um));
    }
    if !cfg.times_fs.is_empty() {
        kv("output.times", list(&cfg.times_fs));
    }
    out
}
