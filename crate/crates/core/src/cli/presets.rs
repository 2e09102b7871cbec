//! Built-in scenarios, one per reproducible table or figure.

use super::config::{ConfigError, ScenarioConfig};

const ANALYSIS_BASE: &str = "
model.omega = 3
model.sigma = 3
model.r_m = 1.35
coupling.n = 2
scan.u_start = -0.99
scan.u_end = -0.01
";

const SIM_BASE: &str = "
model.omega = 0.01
model.a = 0.8
model.eta = 0.05
model.sigma = 3
model.r_m = 1.35
coupling.n = 2
coupling.kappa1 = 0.001
coupling.kappa2 = 0.2
integrator.dt = 0.001
integrator.sample_dt = 0.05
integrator.t_end = 3000
integrator.noise_amplitude = 1e-5
init.kind = uniform
init.r0 = 0.001
init.u0 = -0.5
run.seeds = 10
";

/// `(name, base, overrides, description)`.
const PRESETS: &[(&str, &str, &str, &str)] = &[
    (
        "table1",
        ANALYSIS_BASE,
        "coupling.kappa1 = 0\ncoupling.kappa2 = 0.2\nscan.kind = branch",
        "asymptotic and numeric stability-change points, kappa2 = 0.2",
    ),
    (
        "table2",
        ANALYSIS_BASE,
        "coupling.kappa1 = 0\ncoupling.kappa2 = -0.2\nscan.kind = branch",
        "asymptotic and numeric stability-change points, kappa2 = -0.2",
    ),
    (
        "fig2",
        SIM_BASE,
        "model.omega = 3\nmodel.eta = 0.1\nmodel.sigma = 0\ncoupling.n = 1\ncoupling.kappa1 = 0\n\
         coupling.kappa2 = 0\nintegrator.noise_amplitude = 0\nintegrator.rel_tol = 1e-10\n\
         integrator.abs_tol = 1e-12\nintegrator.sample_dt = 0.005\nintegrator.t_end = 400\n\
         init.r0 = 0.01\nrun.seeds = 1",
        "single burster: delayed Hopf onset, fold offset",
    ),
    (
        "fig3",
        SIM_BASE,
        "",
        "two bursters, inphase to antiphase within each burst",
    ),
    (
        "fig4",
        SIM_BASE,
        "coupling.kappa2 = -0.2",
        "two bursters, antiphase to inphase within each burst",
    ),
    (
        "fig5a",
        ANALYSIS_BASE,
        "coupling.kappa1 = 0.001\ncoupling.kappa2 = 0.2\nscan.kind = branch",
        "phase-difference branches against u",
    ),
    (
        "fig5b",
        ANALYSIS_BASE,
        "coupling.kappa1 = -0.001\ncoupling.kappa2 = 0.2\nscan.kind = branch",
        "phase-difference branches against u",
    ),
    (
        "fig5c",
        ANALYSIS_BASE,
        "coupling.kappa1 = 0.001\ncoupling.kappa2 = -0.2\nscan.kind = branch",
        "phase-difference branches against u",
    ),
    (
        "fig5d",
        ANALYSIS_BASE,
        "coupling.kappa1 = -0.001\ncoupling.kappa2 = -0.2\nscan.kind = branch",
        "phase-difference branches against u",
    ),
    (
        "fig6",
        ANALYSIS_BASE,
        "coupling.kappa1 = 0.001\ncoupling.kappa2 = 0.2\nscan.kind = boundary\nscan.plane = sigma\n\
         scan.lambda_start = 2\nscan.lambda_end = 6\nscan.lambda_n = 41\nscan.u_n = 197",
        "stability boundaries in the (sigma, u) plane",
    ),
    (
        "fig7",
        ANALYSIS_BASE,
        "coupling.kappa1 = 0.001\ncoupling.kappa2 = 0.2\nscan.kind = boundary\nscan.plane = r_m\n\
         scan.lambda_start = 1.2\nscan.lambda_end = 1.4\nscan.lambda_n = 41\nscan.u_n = 197",
        "stability boundaries in the (r_m, u) plane",
    ),
    (
        "fig8",
        ANALYSIS_BASE,
        "coupling.kappa1 = 0.001\ncoupling.kappa2 = 0.2\nscan.kind = boundary\nscan.plane = kappa1\n\
         scan.lambda_start = -0.1\nscan.lambda_end = 0.1\nscan.lambda_n = 41\nscan.u_n = 197",
        "stability boundaries in the (kappa1, u) plane, kappa2 = 0.2",
    ),
    (
        "fig9",
        ANALYSIS_BASE,
        "coupling.kappa1 = 0.001\ncoupling.kappa2 = -0.2\nscan.kind = boundary\nscan.plane = kappa1\n\
         scan.lambda_start = -0.1\nscan.lambda_end = 0.1\nscan.lambda_n = 41\nscan.u_n = 197",
        "stability boundaries in the (kappa1, u) plane, kappa2 = -0.2",
    ),
    (
        "fig10",
        ANALYSIS_BASE,
        "coupling.kappa1 = 0.001\ncoupling.kappa2 = 0.2\nscan.kind = boundary\nscan.plane = kappa2\n\
         scan.lambda_start = -0.4\nscan.lambda_end = 0.4\nscan.lambda_n = 81\nscan.u_n = 197",
        "stability boundaries in the (kappa2, u) plane, kappa1 = 0.001",
    ),
    (
        "fig11",
        ANALYSIS_BASE,
        "coupling.kappa1 = -0.001\ncoupling.kappa2 = 0.2\nscan.kind = boundary\nscan.plane = kappa2\n\
         scan.lambda_start = -0.4\nscan.lambda_end = 0.4\nscan.lambda_n = 81\nscan.u_n = 197",
        "stability boundaries in the (kappa2, u) plane, kappa1 = -0.001",
    ),
    (
        "fig12",
        SIM_BASE,
        "model.omega = 0.1\nmodel.sigma = 5\nmodel.eta = 0.005\ncoupling.n = 3\n\
         coupling.kappa1 = -0.001\ncoupling.kappa2 = -0.2\nintegrator.t_end = 20000\nrun.seeds = 5",
        "three bursters, splay to inphase within each burst",
    ),
    (
        "slowpassage",
        SIM_BASE,
        "model.omega = 0.0003\nmodel.eta = 0.005\nintegrator.t_end = 20000",
        "delay of the simulated transition behind the frozen-u prediction",
    ),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|p| p.0)
}

pub fn describe(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|p| p.0 == name).map(|p| p.3)
}

/// Resolves a preset to a full scenario.
pub fn preset(name: &str) -> Result<ScenarioConfig, ConfigError> {
    let (_, base, over, _) = PRESETS
        .iter()
        .find(|p| p.0 == name)
        .ok_or_else(|| ConfigError::Invalid(format!("unknown preset `{name}`")))?;
    let mut c = ScenarioConfig::default();
    c.apply_text(base)?;
    c.apply_text(over)?;
    c.preset = Some(name.to_string());
    c.out_dir = format!("out/{name}").into();
    Ok(c)
}

/// Canonical, commented config text for a preset, suitable for `--config`.
pub fn dump(name: &str) -> Result<String, ConfigError> {
    let c = preset(name)?;
    Ok(format!(
        "# {name}: {}\n{}",
        describe(name).unwrap_or(""),
        c.to_text()
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_resolves_and_validates() {
        for n in names() {
            let c = preset(n).unwrap();
            c.validate().unwrap_or_else(|e| panic!("{n}: {e}"));
        }
    }

    #[test]
    fn dump_round_trips() {
        for n in names() {
            let text = dump(n).unwrap();
            assert_eq!(ScenarioConfig::from_text(&text).unwrap(), preset(n).unwrap(), "{n}");
        }
    }

    #[test]
    fn unknown_preset() {
        assert!(preset("fig99").is_err());
    }
}
