//! Thermal states `ρ(T) = e^{−Ĥ/T}/Z(T)` with temperature in energy units.
//!
//! The purity follows from the partition function alone,
//! `μ(T) = Z(T/2)/Z²(T)`. For the oscillator this is identically
//! `tanh(ħω/2T)`, which approaches `ħω/2T` at high temperature. Everything
//! is evaluated through `ln Z` so that neither `sinh` nor the exponentials
//! overflow at small `T`.

use crate::bounds::{effective_hbar_with_phi, PhiMode, PhiValue};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum ThermalKind {
    OscillatorClosedForm,
    /// Energy levels, ascending.
    SpectrumList(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermalModel {
    pub kind: ThermalKind,
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
}

/// `Z(T)` together with its logarithm and, for a finite spectrum, the
/// truncation estimate `e^{−E_max/T}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionValue {
    pub value: f64,
    pub ln_value: f64,
    pub tail_bound: Option<f64>,
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(name, value, "positive and finite"))
    }
}

impl ThermalModel {
    /// Unit oscillator, `ħ = m = ω = 1`.
    pub fn oscillator() -> Self {
        ThermalModel {
            kind: ThermalKind::OscillatorClosedForm,
            hbar: 1.0,
            mass: 1.0,
            omega: 1.0,
        }
    }

    pub fn oscillator_with(hbar: f64, mass: f64, omega: f64) -> Result<Self> {
        check_positive("hbar", hbar)?;
        check_positive("mass", mass)?;
        check_positive("omega", omega)?;
        Ok(ThermalModel {
            kind: ThermalKind::OscillatorClosedForm,
            hbar,
            mass,
            omega,
        })
    }

    /// Arbitrary finite spectrum in natural units for the bound (`ħ = 1`).
    pub fn spectrum(levels: Vec<f64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Malformed("spectrum must contain at least one level".into()));
        }
        if levels.iter().any(|e| !e.is_finite()) {
            return Err(Error::Malformed("spectrum levels must be finite".into()));
        }
        if levels.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Malformed("spectrum levels must be sorted ascending".into()));
        }
        Ok(ThermalModel {
            kind: ThermalKind::SpectrumList(levels),
            hbar: 1.0,
            mass: 1.0,
            omega: 1.0,
        })
    }

    /// Oscillator levels `ħω(n + ½)` for `n < count`.
    pub fn oscillator_spectrum(count: usize) -> Result<Self> {
        Self::spectrum((0..count).map(|n| n as f64 + 0.5).collect())
    }

    pub fn partition(&self, temperature: f64) -> Result<PartitionValue> {
        check_positive("T", temperature)?;
        match &self.kind {
            ThermalKind::OscillatorClosedForm => {
                let ln_value = oscillator_ln_z(self.hbar * self.omega / (2.0 * temperature));
                Ok(PartitionValue {
                    value: ln_value.exp(),
                    ln_value,
                    tail_bound: None,
                })
            }
            ThermalKind::SpectrumList(levels) => {
                let ground = levels[0];
                let sum: f64 = levels.iter().map(|e| (-(e - ground) / temperature).exp()).sum();
                let ln_value = -ground / temperature + sum.ln();
                let e_max = *levels.last().expect("nonempty");
                Ok(PartitionValue {
                    value: ln_value.exp(),
                    ln_value,
                    tail_bound: Some((-e_max / temperature).exp()),
                })
            }
        }
    }

    pub fn partition_function(&self, temperature: f64) -> Result<f64> {
        Ok(self.partition(temperature)?.value)
    }

    pub fn ln_partition_function(&self, temperature: f64) -> Result<f64> {
        Ok(self.partition(temperature)?.ln_value)
    }

    /// Mean occupation `1/(e^{ħω/T} − 1)`; `None` for a spectrum list.
    pub fn mean_occupation(&self, temperature: f64) -> Result<Option<f64>> {
        check_positive("T", temperature)?;
        Ok(match self.kind {
            ThermalKind::OscillatorClosedForm => Some(1.0 / (self.hbar * self.omega / temperature).exp_m1()),
            ThermalKind::SpectrumList(_) => None,
        })
    }
}

/// `ln(1/(2 sinh x)) = −x − ln(1 − e^{−2x})`
fn oscillator_ln_z(x: f64) -> f64 {
    let t = 2.0 * x;
    let ln_one_minus = if t < std::f64::consts::LN_2 {
        (-(-t).exp_m1()).ln()
    } else {
        (-(-t).exp()).ln_1p()
    };
    -x - ln_one_minus
}

/// `Z(T/2)/Z²(T)`
pub fn thermal_purity(model: &ThermalModel, temperature: f64) -> Result<f64> {
    let half = model.ln_partition_function(0.5 * temperature)?;
    let full = model.ln_partition_function(temperature)?;
    Ok((half - 2.0 * full).exp())
}

/// `tanh(ħω/2T)`, the oscillator purity in closed form.
pub fn oscillator_purity_closed_form(model: &ThermalModel, temperature: f64) -> f64 {
    (model.hbar * model.omega / (2.0 * temperature)).tanh()
}

/// High-temperature purity `ħω/2T` (reduces to `1/(2T)` in natural units).
pub fn high_temperature_purity(model: &ThermalModel, temperature: f64) -> f64 {
    model.hbar * model.omega / (2.0 * temperature)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalBoundReport {
    pub temperature: f64,
    pub r: f64,
    pub mu: f64,
    pub phi: PhiValue,
    pub hbar_eff: f64,
    /// `ħ²Φ²(μ(T))/(4(1−r²))`
    pub purity_bound: f64,
    /// `ħ²(n̄ + ½)²` for the oscillator.
    pub actual_product: Option<f64>,
    pub slack: Option<f64>,
}

pub fn thermal_bound_report(
    model: &ThermalModel,
    temperature: f64,
    r: f64,
    mode: PhiMode,
) -> Result<ThermalBoundReport> {
    let mu = thermal_purity(model, temperature)?;
    let (hbar_eff, phi) = effective_hbar_with_phi(model.hbar, r, mu, mode)?;
    let purity_bound = 0.25 * hbar_eff * hbar_eff;
    let actual_product = model
        .mean_occupation(temperature)?
        .map(|n| (model.hbar * (n + 0.5)).powi(2));
    Ok(ThermalBoundReport {
        temperature,
        r,
        mu,
        phi,
        hbar_eff,
        purity_bound,
        actual_product,
        slack: actual_product.map(|p| p - purity_bound),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalRecord {
    pub temperature: f64,
    pub z: f64,
    pub mu: f64,
    pub mu_asymptote: f64,
    pub phi: PhiValue,
    pub hbar_eff: f64,
}

/// `steps` logarithmically spaced points from `min` to `max` inclusive. A
/// single step requires `min == max`.
pub fn log_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    check_positive("T_min", min)?;
    check_positive("T_max", max)?;
    match steps {
        0 => Err(Error::domain("steps", 0.0, "steps >= 1")),
        1 if min == max => Ok(vec![min]),
        1 => Err(Error::domain("steps", 1.0, "a single step needs equal endpoints")),
        _ if min >= max => Err(Error::domain("T_min", min, "T_min < T_max")),
        _ => {
            let ratio = (max / min).ln();
            Ok((0..steps)
                .map(|i| {
                    if i + 1 == steps {
                        max
                    } else {
                        min * (ratio * i as f64 / (steps - 1) as f64).exp()
                    }
                })
                .collect())
        }
    }
}

pub fn thermal_sweep(
    model: &ThermalModel,
    t_min: f64,
    t_max: f64,
    steps: usize,
    r: f64,
    mode: PhiMode,
) -> Result<Vec<ThermalRecord>> {
    log_grid(t_min, t_max, steps)?
        .into_iter()
        .map(|t| {
            let mu = thermal_purity(model, t)?;
            let (hbar_eff, phi) = effective_hbar_with_phi(model.hbar, r, mu, mode)?;
            Ok(ThermalRecord {
                temperature: t,
                z: model.partition_function(t)?,
                mu,
                mu_asymptote: high_temperature_purity(model, t),
                phi,
                hbar_eff,
            })
        })
        .collect()
}
