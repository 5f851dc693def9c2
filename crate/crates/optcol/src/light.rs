//! Two-mode OPO light source model: normalized second-order correlation
//! tables, the entangled photon-pair state and classicality diagnostics.
//!
//! The source emits photon pairs into two orthogonal polarization modes
//! x and y. Its normalized correlation table, as a function of the delay
//! tau between the two photons, is
//!
//! ```text
//! D_xyxy = D_yxyx = 1/2 + 1/2 coth^2(kappa) g(tau)
//! D_xyyx = conj(D_yxxy) = 1/2 exp(-i phi) coth^2(kappa) g(tau)
//! ```
//!
//! with gain parameter kappa, entanglement phase phi and an even envelope
//! g(tau) normalized to g(0) = 1. Values of coth^2(kappa) g(tau) above 1
//! have no classical-field counterpart.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polarization::QuadrupleLabel;

/// Time-correlation envelope g(tau): even, g(0) = 1, decaying to 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GEnvelope {
    /// g(tau) = exp(-|tau| / tau_c).
    Exponential { tau_c: f64 },
    /// g(tau) = 1 for |tau| <= width, 0 beyond.
    Rectangular { width: f64 },
}

impl GEnvelope {
    pub fn eval(&self, tau: f64) -> f64 {
        match *self {
            GEnvelope::Exponential { tau_c } => (-tau.abs() / tau_c).exp(),
            GEnvelope::Rectangular { width } => {
                if tau.abs() <= width {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            GEnvelope::Exponential { tau_c } => tau_c > 0.0 && tau_c.is_finite(),
            GEnvelope::Rectangular { width } => width >= 0.0 && width.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain("envelope parameter must be positive and finite"))
        }
    }
}

/// Subthreshold OPO source: gain parameter kappa > 0, entanglement phase
/// phi, and a time-correlation envelope. sinh^2(kappa) is of the order of
/// the photon number per coherence volume.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OpoLightModel {
    kappa: f64,
    phi: f64,
    envelope: GEnvelope,
}

impl OpoLightModel {
    pub fn new(kappa: f64, phi: f64, envelope: GEnvelope) -> Result<Self> {
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(Error::domain(format!(
                "OPO gain parameter must satisfy kappa > 0, got {kappa} \
                 (use the weak-limit correlations for the kappa -> 0 law)"
            )));
        }
        envelope.validate()?;
        Ok(OpoLightModel { kappa, phi, envelope })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn with_phi(&self, phi: f64) -> Self {
        OpoLightModel { phi, ..*self }
    }

    pub fn envelope(&self) -> GEnvelope {
        self.envelope
    }

    pub fn coth2_kappa(&self) -> f64 {
        let c = 1.0 / self.kappa.tanh();
        c * c
    }
}

/// Evaluate the model's time-correlation envelope g(tau).
pub fn g_envelope_eval(model: &OpoLightModel, tau: f64) -> f64 {
    model.envelope.eval(tau)
}

/// Normalized correlation table over the four restricted mode-pair
/// quadruples of a two-mode source. Only quadruples with p1 != p2 and
/// p1' != p2' are populated; hermiticity D_xyyx = conj(D_yxxy) holds by
/// construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModePairCorrelations {
    delay: f64,
    d_xyxy: f64,
    d_yxyx: f64,
    d_xyyx: Complex64,
}

impl ModePairCorrelations {
    /// Build a table from its independent entries; the yxxy entry is the
    /// conjugate of xyyx.
    pub fn from_parts(delay: f64, d_xyxy: f64, d_yxyx: f64, d_xyyx: Complex64) -> Self {
        ModePairCorrelations { delay, d_xyxy, d_yxyx, d_xyyx }
    }

    /// Independent classical beams of equal intensity: diagonal 1, no
    /// cross correlations.
    pub fn classical_reference() -> Self {
        ModePairCorrelations {
            delay: 0.0,
            d_xyxy: 1.0,
            d_yxyx: 1.0,
            d_xyyx: Complex64::ZERO,
        }
    }

    pub fn delay(&self) -> f64 {
        self.delay
    }

    /// Table entry for a quadruple (p1 p2 | p1' p2').
    pub fn get(&self, label: QuadrupleLabel) -> Complex64 {
        match label {
            QuadrupleLabel::XyXy => Complex64::from(self.d_xyxy),
            QuadrupleLabel::YxYx => Complex64::from(self.d_yxyx),
            QuadrupleLabel::XyYx => self.d_xyyx,
            QuadrupleLabel::YxXy => self.d_xyyx.conj(),
        }
    }

    /// Diagonal entries must be real and >= 1/2 for a physical source;
    /// the cross magnitude cannot exceed the quantum excess of the
    /// diagonal.
    pub fn validate_physical(&self) -> Result<()> {
        for d in [self.d_xyxy, self.d_yxyx] {
            if !(d >= 0.5) {
                return Err(Error::domain(format!(
                    "diagonal correlation {d} below the classical floor 1/2"
                )));
            }
        }
        let excess = self.d_xyxy.min(self.d_yxyx) - 0.5;
        if self.d_xyyx.norm() > excess + 1e-12 {
            return Err(Error::domain(
                "cross correlation exceeds the diagonal quantum excess",
            ));
        }
        Ok(())
    }

    /// Scale every entry by a common positive factor.
    pub fn scaled(&self, factor: f64) -> Self {
        ModePairCorrelations {
            delay: self.delay,
            d_xyxy: self.d_xyxy * factor,
            d_yxyx: self.d_yxyx * factor,
            d_xyyx: self.d_xyyx * factor,
        }
    }
}

/// Correlation table of the OPO source at delay tau.
pub fn opo_correlations(model: &OpoLightModel, tau: f64) -> Result<ModePairCorrelations> {
    let strength = model.coth2_kappa() * model.envelope.eval(tau);
    Ok(correlations_from_strength(model.phi, strength, tau))
}

/// Correlation table with the combined strength G = coth^2(kappa) g(tau)
/// pinned directly: diagonal 1/2 + G/2, cross (G/2) exp(-/+ i phi).
pub fn correlations_from_strength(phi: f64, coth2_g: f64, delay: f64) -> ModePairCorrelations {
    let diag = 0.5 + 0.5 * coth2_g;
    let cross = 0.5 * coth2_g * Complex64::new(0.0, -phi).exp();
    ModePairCorrelations::from_parts(delay, diag, diag, cross)
}

/// Weak-output limit: the divergent common factor coth^2(kappa) is
/// stripped and the subdominant classical 1/2 terms dropped, leaving
/// diagonal g and cross exp(-/+ i phi) g. Branching ratios are invariant
/// under the stripped factor since it multiplies every channel alike.
pub fn weak_limit_correlations(phi: f64, g_tau: f64) -> ModePairCorrelations {
    let cross = g_tau * Complex64::new(0.0, -phi).exp();
    ModePairCorrelations::from_parts(0.0, g_tau, g_tau, cross)
}

/// Nonclassicality witness coth^2(kappa) g(tau); values above 1 exceed
/// the classical ceiling of the normalized diagonal correlation.
pub fn classicality_witness(model: &OpoLightModel, tau: f64) -> f64 {
    model.coth2_kappa() * model.envelope.eval(tau)
}

/// Cooperative polarization state of a photon pair from the weak-output
/// OPO: (|xy> + exp(i phi) |yx>)/sqrt(2).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairState {
    /// Amplitudes indexed by (polarization of photon 1, of photon 2),
    /// 0 = x, 1 = y.
    amps: [[Complex64; 2]; 2],
}

impl PairState {
    pub fn amplitude(&self, p1: usize, p2: usize) -> Complex64 {
        self.amps[p1][p2]
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().flatten().map(|a| a.norm_sqr()).sum()
    }

    /// Probability that both photons are found polarized along the same
    /// axis of a linear basis rotated by `angle` in the x-y plane (sum of
    /// the two same-axis outcomes).
    pub fn same_polarization_probability(&self, angle: f64) -> f64 {
        let (c, s) = (angle.cos(), angle.sin());
        // <theta| = c <x| + s <y| ; <theta_perp| = -s <x| + c <y|
        let project = |b1: [f64; 2], b2: [f64; 2]| -> Complex64 {
            let mut acc = Complex64::ZERO;
            for p1 in 0..2 {
                for p2 in 0..2 {
                    acc += b1[p1] * b2[p2] * self.amps[p1][p2];
                }
            }
            acc
        };
        let para = project([c, s], [c, s]);
        let perp = project([-s, c], [-s, c]);
        para.norm_sqr() + perp.norm_sqr()
    }
}

/// Entangled pair wave function for entanglement phase phi.
pub fn pair_state(phi: f64) -> PairState {
    let a = Complex64::from(FRAC_1_SQRT_2);
    let b = Complex64::new(0.0, phi).exp() * FRAC_1_SQRT_2;
    PairState {
        amps: [[Complex64::ZERO, a], [b, Complex64::ZERO]],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn opo_table_matches_closed_form() {
        // coth^2(kappa) = 2 at kappa = atanh(1/sqrt(2)); with g(0) = 1 and
        // a half-width envelope pick g so coth^2 kappa g = 1.
        let kappa = (1.0f64 / 2.0f64.sqrt()).atanh();
        let model = OpoLightModel::new(kappa, 0.3, GEnvelope::Exponential { tau_c: 1.0 }).unwrap();
        assert_abs_diff_eq!(model.coth2_kappa(), 2.0, epsilon = 1e-12);
        let tau = 2.0f64.ln(); // g = 1/2, so coth^2 kappa g = 1
        let table = opo_correlations(&model, tau).unwrap();
        assert_abs_diff_eq!(table.get(QuadrupleLabel::XyXy).re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            (table.get(QuadrupleLabel::XyYx)
                - 0.5 * Complex64::new(0.0, -0.3).exp())
            .norm(),
            0.0,
            epsilon = 1e-12
        );
        table.validate_physical().unwrap();
    }

    #[test]
    fn opo_cross_is_half_at_phi_zero_unit_strength() {
        let table = correlations_from_strength(0.0, 1.0, 0.0);
        assert_abs_diff_eq!(table.get(QuadrupleLabel::XyYx).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(table.get(QuadrupleLabel::XyYx).im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn long_delay_kills_cross_terms() {
        let model =
            OpoLightModel::new(0.7, 1.2, GEnvelope::Rectangular { width: 1.0 }).unwrap();
        let table = opo_correlations(&model, 5.0).unwrap();
        assert_abs_diff_eq!(table.get(QuadrupleLabel::XyXy).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(table.get(QuadrupleLabel::XyYx).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn kappa_zero_is_domain_error() {
        let r = OpoLightModel::new(0.0, 0.0, GEnvelope::Exponential { tau_c: 1.0 });
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn hermiticity_and_diagonal_dominance() {
        for (kappa, phi, tau) in [(0.3, 0.7, 0.2), (1.5, -2.0, 1.0), (0.05, PI, 0.0)] {
            let model =
                OpoLightModel::new(kappa, phi, GEnvelope::Exponential { tau_c: 0.7 }).unwrap();
            let t = opo_correlations(&model, tau).unwrap();
            let xyyx = t.get(QuadrupleLabel::XyYx);
            let yxxy = t.get(QuadrupleLabel::YxXy);
            assert_eq!(xyyx, yxxy.conj());
            let excess = t.get(QuadrupleLabel::XyXy).re - 0.5;
            assert!(xyyx.norm() <= excess + 1e-12);
            t.validate_physical().unwrap();
        }
    }

    #[test]
    fn weak_limit_examples() {
        let t = weak_limit_correlations(PI, 1.0);
        assert_abs_diff_eq!((t.get(QuadrupleLabel::XyYx) + 1.0).norm(), 0.0, epsilon = 1e-15);
        let t0 = weak_limit_correlations(0.0, 1.0);
        for label in QuadrupleLabel::ALL {
            assert_abs_diff_eq!((t0.get(label) - 1.0).norm(), 0.0, epsilon = 1e-15);
        }
        let tz = weak_limit_correlations(0.4, 0.0);
        for label in QuadrupleLabel::ALL {
            assert_abs_diff_eq!(tz.get(label).norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn weak_limit_matches_opo_ratios_at_small_kappa() {
        let model =
            OpoLightModel::new(1e-4, 0.9, GEnvelope::Exponential { tau_c: 1.0 }).unwrap();
        let tau = 0.35;
        let opo = opo_correlations(&model, tau).unwrap();
        let weak = weak_limit_correlations(0.9, model.envelope().eval(tau));
        for num in QuadrupleLabel::ALL {
            for den in QuadrupleLabel::ALL {
                let r_opo = opo.get(num) / opo.get(den);
                let r_weak = weak.get(num) / weak.get(den);
                assert!(
                    (r_opo - r_weak).norm() <= 1e-6 * r_weak.norm(),
                    "ratio {num:?}/{den:?}: {r_opo} vs {r_weak}"
                );
            }
        }
    }

    #[test]
    fn witness_values() {
        let model = OpoLightModel::new(0.1, 0.0, GEnvelope::Rectangular { width: 2.0 }).unwrap();
        let w = classicality_witness(&model, 0.0);
        assert!(w > 1.0, "kappa = 0.1 must be nonclassical, got {w}");
        assert_abs_diff_eq!(w, 1.0 / 0.1f64.tanh().powi(2), epsilon = 1e-12);
        // Large kappa approaches the classical boundary from above.
        let strong = OpoLightModel::new(20.0, 0.0, GEnvelope::Rectangular { width: 2.0 }).unwrap();
        assert_abs_diff_eq!(classicality_witness(&strong, 0.0), 1.0, epsilon = 1e-12);
        // Dead envelope kills the witness.
        assert_abs_diff_eq!(classicality_witness(&model, 5.0), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn witness_decreases_with_kappa() {
        let mut last = f64::INFINITY;
        for kappa in [0.05, 0.1, 0.5, 1.0, 2.0, 5.0] {
            let model =
                OpoLightModel::new(kappa, 0.0, GEnvelope::Rectangular { width: 1.0 }).unwrap();
            let w = classicality_witness(&model, 0.0);
            assert!(w < last, "witness must strictly decrease in kappa");
            last = w;
        }
    }

    #[test]
    fn g_envelope_examples() {
        let exp_model =
            OpoLightModel::new(0.5, 0.0, GEnvelope::Exponential { tau_c: 2.0 }).unwrap();
        assert_abs_diff_eq!(g_envelope_eval(&exp_model, 0.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g_envelope_eval(&exp_model, 2.0), (-1.0f64).exp(), epsilon = 1e-15);
        let rect_model =
            OpoLightModel::new(0.5, 0.0, GEnvelope::Rectangular { width: 1.0 }).unwrap();
        assert_abs_diff_eq!(g_envelope_eval(&rect_model, 3.0), 0.0, epsilon = 1e-15);
        // Evenness.
        assert_abs_diff_eq!(
            g_envelope_eval(&exp_model, -1.3),
            g_envelope_eval(&exp_model, 1.3),
            epsilon = 1e-15
        );
    }

    #[test]
    fn pair_state_norm_and_probabilities() {
        for phi in [0.0, 0.4, PI, 5.0] {
            assert_abs_diff_eq!(pair_state(phi).norm_sq(), 1.0, epsilon = 1e-15);
        }
        let s0 = pair_state(0.0);
        assert_abs_diff_eq!(s0.amplitude(0, 1).norm_sqr(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s0.amplitude(1, 0).norm_sqr(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s0.amplitude(0, 0).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn pair_state_pi_has_no_same_axis_outcomes_in_any_linear_basis() {
        let s = pair_state(PI);
        for k in 0..20 {
            let angle = k as f64 * 0.37;
            assert_abs_diff_eq!(s.same_polarization_probability(angle), 0.0, epsilon = 1e-12);
        }
    }
}
