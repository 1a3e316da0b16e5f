//! Gate-attached noise channels as Kraus sets.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{consts, CMatrix, ONE, ZERO};

/// Noise attached to every participating qubit after each gate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseModel {
    None,
    /// Stochastic Pauli flips with independent X/Y/Z probabilities.
    Pauli { p_x: f64, p_y: f64, p_z: f64 },
    /// Amplitude damping plus pure dephasing over the gate duration.
    Thermal {
        t1_us: f64,
        t2_us: f64,
        t_1q_ns: f64,
        t_2q_ns: f64,
    },
    /// With probability `probability/2` each, an extra `±angle` rotation
    /// about the gate's own axis.
    Coherent { probability: f64, angle: f64 },
}

impl NoiseModel {
    pub fn pauli_default() -> Self {
        NoiseModel::Pauli {
            p_x: 0.001,
            p_y: 0.003,
            p_z: 0.001,
        }
    }

    pub fn thermal_default() -> Self {
        NoiseModel::Thermal {
            t1_us: 50.0,
            t2_us: 70.0,
            t_1q_ns: 100.0,
            t_2q_ns: 300.0,
        }
    }

    pub fn coherent_default() -> Self {
        NoiseModel::Coherent {
            probability: 0.01,
            angle: PI / 6.0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            NoiseModel::None => "none",
            NoiseModel::Pauli { .. } => "pauli",
            NoiseModel::Thermal { .. } => "thermal",
            NoiseModel::Coherent { .. } => "coherent",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let prob = |name: &str, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(Error::config(format!("{name} = {p} is not a probability")))
            }
        };
        match *self {
            NoiseModel::None => Ok(()),
            NoiseModel::Pauli { p_x, p_y, p_z } => {
                prob("p_x", p_x)?;
                prob("p_y", p_y)?;
                prob("p_z", p_z)?;
                if p_x + p_y + p_z > 1.0 {
                    return Err(Error::config("p_x + p_y + p_z exceeds 1"));
                }
                Ok(())
            }
            NoiseModel::Thermal {
                t1_us,
                t2_us,
                t_1q_ns,
                t_2q_ns,
            } => {
                if !(t1_us > 0.0 && t2_us > 0.0) {
                    return Err(Error::config("T1 and T2 must be positive"));
                }
                if t2_us > 2.0 * t1_us {
                    return Err(Error::config(format!(
                        "T2 = {t2_us} µs exceeds 2·T1 = {} µs",
                        2.0 * t1_us
                    )));
                }
                if t_1q_ns.is_nan() || t_2q_ns.is_nan() || t_1q_ns < 0.0 || t_2q_ns < 0.0 {
                    return Err(Error::config("gate durations must be non-negative"));
                }
                Ok(())
            }
            NoiseModel::Coherent { probability, angle } => {
                prob("probability", probability)?;
                if !angle.is_finite() {
                    return Err(Error::config("coherent angle must be finite"));
                }
                Ok(())
            }
        }
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `ρ → (1-p)ρ + p_x XρX + p_y YρY + p_z ZρZ`.
pub fn pauli_kraus(p_x: f64, p_y: f64, p_z: f64) -> Vec<CMatrix> {
    let p_i = (1.0 - p_x - p_y - p_z).max(0.0);
    vec![
        CMatrix::identity(2).scale(real(p_i.sqrt())),
        consts::pauli_x().scale(real(p_x.sqrt())),
        consts::pauli_y().scale(real(p_y.sqrt())),
        consts::pauli_z().scale(real(p_z.sqrt())),
    ]
}

/// Amplitude damping `γ = 1 - exp(-t/T1)` followed by pure dephasing chosen
/// so that coherences decay by exactly `exp(-t/T2)`. `t`, `t1`, `t2` share a
/// unit; `t` may be infinite.
pub fn thermal_kraus(t: f64, t1: f64, t2: f64) -> Vec<CMatrix> {
    let gamma = 1.0 - (-t / t1).exp();
    // damping alone leaves coherences scaled by exp(-t/2T1)
    let rate = 1.0 / t2 - 1.0 / (2.0 * t1);
    let lambda = if rate <= 0.0 || t == 0.0 {
        1.0
    } else {
        (-t * rate).exp()
    };
    let damp = [
        CMatrix::from_rows([[ONE, ZERO], [ZERO, real((1.0 - gamma).sqrt())]]),
        CMatrix::from_rows([[ZERO, real(gamma.sqrt())], [ZERO, ZERO]]),
    ];
    let dephase = [
        CMatrix::identity(2).scale(real(((1.0 + lambda) / 2.0).sqrt())),
        consts::pauli_z().scale(real(((1.0 - lambda) / 2.0).sqrt())),
    ];
    dephase
        .iter()
        .flat_map(|d| damp.iter().map(move |a| d * a))
        .collect()
}

/// `ρ → (1-p)ρ + p/2 R(δ)ρR(δ)† + p/2 R(-δ)ρR(-δ)†` about `axis`.
pub fn coherent_kraus(probability: f64, angle: f64, axis: [f64; 3]) -> Vec<CMatrix> {
    let half = real((probability / 2.0).sqrt());
    vec![
        CMatrix::identity(2).scale(real((1.0 - probability).sqrt())),
        consts::axis_rotation(angle, axis).scale(half),
        consts::axis_rotation(-angle, axis).scale(half),
    ]
}

/// `max |Σ K†K - I|` for a Kraus set.
pub fn completeness_error(kraus: &[CMatrix]) -> f64 {
    let dim = kraus[0].dim();
    let sum = kraus
        .iter()
        .fold(CMatrix::zeros(dim), |acc, k| acc.add(&(&k.adjoint() * k)));
    sum.max_abs_diff(&CMatrix::identity(dim))
}
