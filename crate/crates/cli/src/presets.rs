//! Bundled scenarios `fig1` to `fig10`.

use crate::scenario::{parse_scenario, ScenarioConfig, ScenarioError};

pub const NAMES: [&str; 10] = [
    "fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10",
];

const FIG1: &str = "\
name = fig1
caption = x0=-600 um, sigma_t=100 fs, lambda0=500 nm, chi11=0, chi12=0.0002
medium.chi11 = 0
medium.chi12 = 0.0002i
pulse.lambda0 = 0.5
pulse.sigma_t = 100
pulse.z0 = -600
grid.t_start = 0
grid.t_end = 25000
grid.t_step = 25
output.observables = intensities
";

const FIG2: &str = "\
name = fig2
caption = fixed positions z = 1241, 2492, 3742, 4993 um; snapshots t = 6200, 10368, 14536, 18704 fs
medium.chi11 = 0
medium.chi12 = 0.0002i
pulse.lambda0 = 0.5
pulse.sigma_t = 100
pulse.z0 = -600
grid.t_start = 0
grid.t_end = 22000
grid.t_step = 10
grid.z_end = 5500
grid.z_step = 5
output.observables = traces, snapshots, fluence
output.positions = 1241, 2492, 3742, 4993
output.times = 6200, 10368, 14536, 18704
";

const FIG3: &str = "\
name = fig3
caption = sigma_t = 100, 200, 600 fs; chi12=0.002
medium.chi11 = 0
medium.chi12 = 0.002i
pulse.lambda0 = 0.5
pulse.sigma_t = 100
pulse.z0 = -600
grid.t_start = 0
grid.t_end = 12000
grid.t_step = 10
scan.sigma_t = 100, 200, 600
output.observables = intensities
";

const FIG4: &str = "\
name = fig4
caption = chi12=0.08; transition time 4.5 ps
medium.chi11 = 0
medium.chi12 = 0.08i
pulse.lambda0 = 0.5
pulse.sigma_t = 100
pulse.z0 = -600
grid.t_start = 0
grid.t_end = 10000
grid.t_step = 10
output.observables = intensities
";

const FIG5: &str = "\
name = fig5
caption = z = 741, 1341, 1941, 2541, 3141 um; chi12=0.08
medium.chi11 = 0
medium.chi12 = 0.08i
pulse.lambda0 = 0.5
pulse.sigma_t = 100
pulse.z0 = -600
grid.t_start = 0
grid.t_end = 16000
grid.t_step = 5
output.observables = traces, snapshots
output.positions = 741, 1341, 1941, 2541, 3141
output.times = 12000
";

const FIG6: &str = "\
name = fig6
caption = chi12=1.2
medium.chi11 = 0
medium.chi12 = 1.2i
pulse.lambda0 = 0.5
pulse.sigma_t = 100
pulse.z0 = -600
grid.t_start = 0
grid.t_end = 5000
grid.t_step = 20
output.observables = intensities
";

const FIG7: &str = "\
name = fig7
caption = omega/omega0=0.98, 0 <= omega_cx/omega0 <= 3.98, omega_cy=0, omega_cz/omega0=2.65
medium.omega_p = 0.84
medium.omega_cx = 0
medium.omega_cy = 0
medium.omega_cz = 2.65
medium.gamma = 0
medium.omega = 0.98
scan.omega_cx_min = 0
scan.omega_cx_max = 3.98
scan.omega_cx_count = 200
output.observables = eccentricity
";

const FIG8: &str = "\
name = fig8
caption = omega_p/omega0=0.84
medium.omega_p = 0.84
medium.gamma = 0
scan.omega_min = 0.5
scan.omega_max = 2
scan.omega_count = 200
scan.omega_cz_min = 0
scan.omega_cz_max = 3
scan.omega_cz_count = 200
output.observables = regions
";

const FIG9: &str = "\
name = fig9
caption = omega=omega_0p, omega_p/omega0=1
medium.omega_p = 1
medium.gamma = 0
scan.omega_cz_min = 0.001
scan.omega_cz_max = 1.5
scan.omega_cz_count = 1500
output.observables = penetration
";

const FIG10: &str = "\
name = fig10
caption = omega=omega_0p, omega_p/omega0=1
medium.omega_p = 1
medium.gamma = 0
scan.omega_cz_min = 0.001
scan.omega_cz_max = 1.5
scan.omega_cz_count = 1500
output.observables = transmittance
";

/// Scenario text of a bundled preset.
pub fn preset_text(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig1" => FIG1,
        "fig2" => FIG2,
        "fig3" => FIG3,
        "fig4" => FIG4,
        "fig5" => FIG5,
        "fig6" => FIG6,
        "fig7" => FIG7,
        "fig8" => FIG8,
        "fig9" => FIG9,
        "fig10" => FIG10,
        _ => return None,
    })
}

pub fn preset(name: &str) -> Option<Result<ScenarioConfig, ScenarioError>> {
    preset_text(name).map(parse_scenario)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{serialize_scenario, Medium, Observable};
    use polrot::C64;

    #[test]
    fn every_preset_parses_and_round_trips() {
        for name in NAMES {
            let cfg = preset(name).unwrap().unwrap();
            assert_eq!(cfg.name.as_deref(), Some(name));
            let text = serialize_scenario(&cfg);
            assert_eq!(parse_scenario(&text).unwrap(), cfg, "{name}");
            assert_eq!(serialize_scenario(&parse_scenario(&text).unwrap()), text);
        }
        assert!(preset("fig11").is_none());
    }

    #[test]
    fn fig1_parameters() {
        let cfg = preset("fig1").unwrap().unwrap();
        let p = cfg.pulse.unwrap();
        assert_eq!((p.z0_um, p.sigma_t_fs, p.lambda0_um), (-600.0, 100.0, 0.5));
        assert_eq!(
            cfg.medium,
            Medium::Direct {
                chi11: C64::new(0.0, 0.0),
                chi12: C64::new(0.0, 2e-4),
                chi33: C64::new(0.0, 0.0)
            }
        );
    }

    #[test]
    fn fig8_parameters() {
        let cfg = preset("fig8").unwrap().unwrap();
        assert!(matches!(cfg.medium, Medium::Lorentz { omega_p, .. } if omega_p == 0.84));
        assert_eq!(cfg.scan_omega.unwrap().count, 200);
        assert_eq!(cfg.scan_omega_cz.unwrap().count, 200);
        assert_eq!(cfg.observables, vec![Observable::Regions]);
    }
}
