//! Total cross section of the fractional collision: contraction of the
//! irreducible polarization tensors with the rank-X partial cross sections
//! over the four mode quadruples, plus the closed-form recoil-limit
//! expressions, branching ratios and phase-control contrasts.
//!
//! Cross sections are reported in arbitrary units; only ratios between
//! channels and parameter points are physical.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::channels::{q_tensor, ChannelSpec, CollisionKinematics, SegmentCorrelations};
use crate::error::{Error, Result};
use crate::light::{
    correlations_from_strength, opo_correlations, weak_limit_correlations, GEnvelope,
    ModePairCorrelations, OpoLightModel,
};
use crate::polarization::{enumerate_mode_quadruples, phi_tensor, PolarizationVector};

/// Residue ceiling for imaginary parts and negative excursions of the
/// contracted cross section.
const RESIDUE_TOL: f64 = 1e-10;

/// Light source driving the excitation.
#[derive(Clone, Copy, Debug)]
pub enum LightInput {
    /// Subthreshold OPO with finite gain.
    Opo(OpoLightModel),
    /// kappa -> 0 law with the divergent common factor stripped.
    WeakLimit { phi: f64, envelope: GEnvelope },
    /// Correlation strength G = coth^2(kappa) g pinned directly,
    /// independent of delay.
    FixedStrength { phi: f64, coth2_g: f64 },
    /// Two independent classical beams of equal intensity: no cross
    /// correlations, hence no entanglement-phase dependence.
    ClassicalIndependent,
}

impl LightInput {
    /// Correlation table at photon-pair delay `tau`.
    pub fn table(&self, tau: f64) -> Result<ModePairCorrelations> {
        match self {
            LightInput::Opo(model) => opo_correlations(model, tau),
            LightInput::WeakLimit { phi, envelope } => {
                Ok(weak_limit_correlations(*phi, envelope.eval(tau)))
            }
            LightInput::FixedStrength { phi, coth2_g } => {
                Ok(correlations_from_strength(*phi, *coth2_g, tau))
            }
            LightInput::ClassicalIndependent => Ok(ModePairCorrelations::classical_reference()),
        }
    }

    /// Same source with the entanglement phase replaced (no-op for
    /// classical light).
    pub fn with_phase(&self, phi: f64) -> LightInput {
        match *self {
            LightInput::Opo(model) => LightInput::Opo(model.with_phi(phi)),
            LightInput::WeakLimit { envelope, .. } => LightInput::WeakLimit { phi, envelope },
            LightInput::FixedStrength { coth2_g, .. } => {
                LightInput::FixedStrength { phi, coth2_g }
            }
            LightInput::ClassicalIndependent => LightInput::ClassicalIndependent,
        }
    }
}

/// Total cross section with its rank-resolved partial contributions.
#[derive(Clone, Debug)]
pub struct CrossSectionResult {
    /// Total cross section in arbitrary units (only ratios are physical).
    pub sigma0: f64,
    /// Contribution of each tensor rank X = 0, 1, 2.
    pub partials: [Complex64; 3],
    /// Channel label.
    pub channel: String,
}

/// Evaluate the total cross section for one channel.
///
/// The mode quadruples are built over `basis` (the two orthogonal OPO
/// polarizations; defaults to x and y). `delay_override`, when set,
/// replaces the active segment's duration as the photon-pair delay fed to
/// the correlation table.
pub fn total_cross_section(
    channel: &ChannelSpec,
    kin: &CollisionKinematics,
    light: &LightInput,
    basis: Option<(PolarizationVector, PolarizationVector)>,
    delay_override: Option<f64>,
) -> Result<CrossSectionResult> {
    let (ex, ey) = basis.unwrap_or((PolarizationVector::x_hat(), PolarizationVector::y_hat()));
    let quads = enumerate_mode_quadruples((&ex, &ey))?;

    let seg = kin.active_segment();
    let (_, seg_tau) = kin.segment(seg);
    let tau = delay_override.unwrap_or(seg_tau);
    let corr = SegmentCorrelations::single(seg, light.table(tau)?);

    let mut partials = [Complex64::ZERO; 3];
    for (xi_rank, partial) in partials.iter_mut().enumerate() {
        let x = xi_rank as u32;
        let q = q_tensor(channel, kin, &corr, x)?;
        for quad in &quads {
            let phi1 = phi_tensor(&quad.e1.spherical(), &quad.e1_prime.spherical(), x)?;
            let phi2 = phi_tensor(&quad.e2.spherical(), &quad.e2_prime.spherical(), x)?;
            let mut contraction = Complex64::ZERO;
            for xi in -(x as i32)..=(x as i32) {
                let sign = if (x as i32 + xi).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                contraction += sign * phi1.component(xi) * phi2.component(-xi);
            }
            *partial += contraction * q.get(quad.label);
        }
    }

    let total: Complex64 = partials.iter().sum();
    if total.im.abs() > RESIDUE_TOL {
        return Err(Error::numerical(format!(
            "cross section has imaginary residue {:.3e}",
            total.im
        )));
    }
    if total.re < -RESIDUE_TOL {
        return Err(Error::numerical(format!(
            "cross section is negative: {:.3e}",
            total.re
        )));
    }
    Ok(CrossSectionResult {
        sigma0: total.re,
        partials,
        channel: channel.label().to_string(),
    })
}

/// Closed-form recoil-limit cross section for the five worked channels at
/// unit Franck-Condon weights, as a function of the entanglement phase and
/// the correlation strength G = coth^2(kappa) g(tau):
///
/// ```text
/// Σ→Σ→Σ, Σ→Π→Σ:  (1/15) [1 + (1 + cos phi) G]
/// Σ→Σ→Π, Σ→Π→Π:  (4/15) [1 + (1 - cos(phi)/4) G]
/// Σ→Π→Δ:         (1/5)  [1 + (1 + cos phi) G]
/// ```
pub fn recoil_oracle(channel: &ChannelSpec, phi: f64, coth2_g: f64) -> Result<f64> {
    let (prefactor, bracket) = match channel.lambdas() {
        [0, 0, 0] | [0, 1, 0] => (1.0 / 15.0, 1.0 + (1.0 + phi.cos()) * coth2_g),
        [0, 0, 1] | [0, 1, 1] => (4.0 / 15.0, 1.0 + (1.0 - 0.25 * phi.cos()) * coth2_g),
        [0, 1, 2] => (1.0 / 5.0, 1.0 + (1.0 + phi.cos()) * coth2_g),
        other => {
            return Err(Error::domain(format!(
                "no closed-form recoil expression for channel {:?}; supported: {}",
                other,
                ChannelSpec::worked_labels().join(", ")
            )))
        }
    };
    Ok(prefactor * bracket)
}

/// Normalized branching fractions over a set of channels evaluated with
/// shared kinematics and light parameters. Fractions preserve the input
/// channel order.
pub fn branching_ratios(
    channels: &[ChannelSpec],
    kin: &CollisionKinematics,
    light: &LightInput,
) -> Result<Vec<(String, f64)>> {
    if channels.is_empty() {
        return Err(Error::domain("branching ratios need at least one channel"));
    }
    let sigmas: Vec<(String, f64)> = channels
        .iter()
        .map(|ch| {
            total_cross_section(ch, kin, light, None, None)
                .map(|r| (ch.label().to_string(), r.sigma0))
        })
        .collect::<Result<_>>()?;
    let total: f64 = sigmas.iter().map(|(_, s)| s).sum();
    if total <= 0.0 {
        return Err(Error::domain(
            "all cross sections vanish; branching ratios undefined",
        ));
    }
    Ok(sigmas.into_iter().map(|(l, s)| (l, s / total)).collect())
}

/// Ratio sigma0(phi_a) / sigma0(phi_b) for one channel, quantifying how
/// far the entanglement phase closes or opens it.
pub fn control_contrast(
    channel: &ChannelSpec,
    kin: &CollisionKinematics,
    light: &LightInput,
    phi_a: f64,
    phi_b: f64,
) -> Result<f64> {
    let denom = total_cross_section(channel, kin, &light.with_phase(phi_b), None, None)?.sigma0;
    if denom <= 0.0 {
        return Err(Error::domain(format!(
            "contrast denominator sigma0(phi = {phi_b}) vanishes"
        )));
    }
    let num = total_cross_section(channel, kin, &light.with_phase(phi_a), None, None)?.sigma0;
    Ok(num / denom)
}

/// Channel -> sigma0 map for a common parameter point, in deterministic
/// label order.
pub fn sigma_by_channel(
    channels: &[ChannelSpec],
    kin: &CollisionKinematics,
    light: &LightInput,
) -> Result<BTreeMap<String, f64>> {
    channels
        .iter()
        .map(|ch| {
            total_cross_section(ch, kin, light, None, None)
                .map(|r| (ch.label().to_string(), r.sigma0))
        })
        .collect()
}
