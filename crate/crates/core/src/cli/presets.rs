use super::config::{IntegratorConfig, OutputConfig, ScenarioConfig};
use crate::environment::{BathSpec, BosonicBath, SpectralForm, SpinGas, DEFAULT_IR_CUTOFF};
use crate::molecule::{FieldProfile, Trajectory};
use crate::Real;

pub const PRESET_NAMES: &[&str] = &[
    "fig3",
    "fig4",
    "cme-spingas",
    "lms-tau6",
    "lms-tau20",
    "lms-tau100",
    "constspeed",
    "subohmic",
    "supraohmic",
    "solvent",
];

fn harmonic(x1_0: Real, amplitude: Real, period: Real) -> Trajectory {
    Trajectory::Harmonic {
        x1_0,
        x2_0: -x1_0,
        amplitude,
        period,
    }
}

const HOT_FIELD: FieldProfile = FieldProfile {
    b0: 1.3,
    b1: 2.4,
    sigma: 120.0,
    j0: 1e4,
};

const GAS_FIELD: FieldProfile = FieldProfile {
    b0: 1.2,
    b1: 1.2,
    sigma: 120.0,
    j0: 1.2e3,
};

fn bosonic(spectral: SpectralForm) -> BathSpec {
    BathSpec::Bosonic(BosonicBath {
        kappa: 0.01,
        beta: 1.0,
        spectral,
    })
}

fn gas(gamma: Real, s: Real) -> BathSpec {
    BathSpec::SpinGas(SpinGas { gamma, s })
}

fn scenario(name: &str, trajectory: Trajectory, fields: FieldProfile, bath: BathSpec) -> ScenarioConfig {
    ScenarioConfig {
        scenario: name.into(),
        trajectory,
        fields,
        bath,
        integrator: IntegratorConfig::default(),
        output: OutputConfig::default(),
    }
}

/// Built-in scenario by name.
pub fn preset(name: &str) -> Option<ScenarioConfig> {
    let hot = harmonic(-20.0, 5.0, 100.0);
    let power = |exponent| {
        bosonic(SpectralForm::PowerLaw {
            exponent,
            ir_cutoff: DEFAULT_IR_CUTOFF,
        })
    };
    let lms = |tau| scenario(name, harmonic(-25.0, 10.0, tau), GAS_FIELD, gas(0.1, 0.2));
    Some(match name {
        "fig3" => scenario(name, hot, HOT_FIELD, bosonic(SpectralForm::Ohmic)),
        "fig4" => lms(10.0),
        "cme-spingas" => scenario(name, hot, HOT_FIELD, gas(0.025, 0.16)),
        "lms-tau6" => lms(6.0),
        "lms-tau20" => lms(20.0),
        "lms-tau100" => lms(100.0),
        "constspeed" => scenario(
            name,
            Trajectory::ConstantSpeed {
                x1_0: -20.0,
                x2_0: 20.0,
                speed: 0.2,
                d_min: 20.0,
                dwell: 0.0,
            },
            HOT_FIELD,
            bosonic(SpectralForm::Ohmic),
        ),
        "subohmic" => scenario(name, hot, HOT_FIELD, power(0.8)),
        "supraohmic" => scenario(name, hot, HOT_FIELD, power(1.2)),
        "solvent" => scenario(
            name,
            hot,
            HOT_FIELD,
            bosonic(SpectralForm::OneOverOmega {
                ir_cutoff: DEFAULT_IR_CUTOFF,
            }),
        ),
        _ => return None,
    })
}
