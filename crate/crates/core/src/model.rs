//! Physical parameters of the converter and the quantities derived from them.
//!
//! Rates are nominally angular frequencies (rad/s), but everything downstream
//! of [`CouplingConfig`] depends only on the dimensionless pair `(k, Ωt)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The three bosonic modes of the linearized model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelId {
    Optical,
    Microwave,
    Mechanical,
}

impl ChannelId {
    pub const ALL: [ChannelId; 3] = [ChannelId::Optical, ChannelId::Microwave, ChannelId::Mechanical];

    /// Optical and microwave are field channels; the mechanical mode only mediates.
    pub fn is_field(self) -> bool {
        !matches!(self, ChannelId::Mechanical)
    }
}

/// Pump and cavity parameters of one field channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelDrive {
    /// Drive amplitude `E_j`.
    pub drive_amplitude: f64,
    /// Detuning `Δ_j` of the cavity from the drive.
    pub detuning: f64,
    /// Total cavity decay rate `κ_j`.
    pub cavity_decay: f64,
    /// Single-photon optomechanical coupling `g_j`.
    pub single_photon_coupling: f64,
}

impl ChannelDrive {
    pub fn new(drive_amplitude: f64, detuning: f64, cavity_decay: f64, single_photon_coupling: f64) -> Result<Self> {
        let drive = ChannelDrive { drive_amplitude, detuning, cavity_decay, single_photon_coupling };
        drive.validate()?;
        Ok(drive)
    }

    fn validate(&self) -> Result<()> {
        let all_finite = [self.drive_amplitude, self.detuning, self.cavity_decay, self.single_photon_coupling]
            .iter()
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::param("drive parameters must be finite"));
        }
        if self.cavity_decay <= 0.0 {
            return Err(Error::param(format!("cavity decay must be > 0, got {}", self.cavity_decay)));
        }
        if self.drive_amplitude < 0.0 {
            return Err(Error::param(format!("drive amplitude must be >= 0, got {}", self.drive_amplitude)));
        }
        if self.single_photon_coupling < 0.0 {
            return Err(Error::param(format!(
                "single-photon coupling must be >= 0, got {}",
                self.single_photon_coupling
            )));
        }
        Ok(())
    }

    /// `N = E² / (κ² + Δ²)`.
    pub fn intracavity_photon_number(&self) -> Result<f64> {
        self.validate()?;
        let e = self.drive_amplitude;
        Ok(e * e / (self.cavity_decay * self.cavity_decay + self.detuning * self.detuning))
    }

    /// `G = g √N`.
    pub fn multiphoton_coupling(&self) -> Result<f64> {
        Ok(self.single_photon_coupling * self.intracavity_photon_number()?.sqrt())
    }
}

/// Drive parameters for both field channels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveParams {
    pub optical: ChannelDrive,
    pub microwave: ChannelDrive,
}

impl DriveParams {
    pub fn channel(&self, channel: ChannelId) -> Result<&ChannelDrive> {
        match channel {
            ChannelId::Optical => Ok(&self.optical),
            ChannelId::Microwave => Ok(&self.microwave),
            ChannelId::Mechanical => Err(Error::InvalidChannel(channel)),
        }
    }

    pub fn intracavity_photon_number(&self, channel: ChannelId) -> Result<f64> {
        self.channel(channel)?.intracavity_photon_number()
    }

    pub fn multiphoton_coupling(&self, channel: ChannelId) -> Result<f64> {
        self.channel(channel)?.multiphoton_coupling()
    }

    /// Linearized couplings `(G_o, G_w)` packaged as a validated config.
    pub fn coupling_config(&self) -> Result<CouplingConfig> {
        CouplingConfig::new(
            self.multiphoton_coupling(ChannelId::Optical)?,
            self.multiphoton_coupling(ChannelId::Microwave)?,
        )
    }
}

/// Linearized couplings `G_o` (two-mode squeezing, optical side) and `G_w`
/// (beam splitter, microwave side), with the derived ratio `k = G_o/G_w` and
/// oscillation frequency `Ω = √(G_w² − G_o²)`.
///
/// Construction rejects `k ≥ 1`; only the oscillatory branch is supported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingConfig {
    optical_coupling: f64,
    microwave_coupling: f64,
    ratio: f64,
    omega: f64,
}

impl CouplingConfig {
    pub fn new(optical_coupling: f64, microwave_coupling: f64) -> Result<Self> {
        if !optical_coupling.is_finite() || !microwave_coupling.is_finite() {
            return Err(Error::param("couplings must be finite"));
        }
        if microwave_coupling <= 0.0 {
            return Err(Error::param(format!("G_w must be > 0, got {microwave_coupling}")));
        }
        if optical_coupling < 0.0 {
            return Err(Error::param(format!("G_o must be >= 0, got {optical_coupling}")));
        }
        let ratio = optical_coupling / microwave_coupling;
        if optical_coupling >= microwave_coupling {
            return Err(Error::UnsupportedRegime { ratio });
        }
        // (G_w - G_o)(G_w + G_o) avoids cancellation near k -> 1.
        let omega = ((microwave_coupling - optical_coupling) * (microwave_coupling + optical_coupling)).sqrt();
        Ok(CouplingConfig { optical_coupling, microwave_coupling, ratio, omega })
    }

    /// Config from the coupling ratio with the given microwave coupling.
    pub fn from_ratio(ratio: f64, microwave_coupling: f64) -> Result<Self> {
        if !ratio.is_finite() || ratio < 0.0 {
            return Err(Error::param(format!("coupling ratio must be >= 0, got {ratio}")));
        }
        if ratio >= 1.0 {
            return Err(Error::UnsupportedRegime { ratio });
        }
        Self::new(ratio * microwave_coupling, microwave_coupling)
    }

    /// Config with `G_w = 1`, the unit used by all figures.
    pub fn unit(ratio: f64) -> Result<Self> {
        Self::from_ratio(ratio, 1.0)
    }

    pub fn optical_coupling(&self) -> f64 {
        self.optical_coupling
    }

    pub fn microwave_coupling(&self) -> f64 {
        self.microwave_coupling
    }

    /// `k = G_o / G_w`.
    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    /// `Ω = √(G_w² − G_o²)`.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Period `2π/Ω` of the coefficient dynamics.
    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.omega
    }
}

/// Validates a bare coupling ratio for the closed-form rate formulas.
pub(crate) fn check_ratio(ratio: f64) -> Result<()> {
    if !ratio.is_finite() || !(0.0..1.0).contains(&ratio) {
        return Err(Error::param(format!("coupling ratio must lie in [0, 1), got {ratio}")));
    }
    Ok(())
}
