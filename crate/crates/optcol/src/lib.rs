//! Two-photon excitation of colliding atom pairs driven by two-mode light
//! with entangled polarizations.
//!
//! The crate computes total cross sections of fractional optical collisions
//! (continuum-continuum two-photon processes where the first photon starts
//! and the second interrupts motion on an intermediate molecular potential)
//! and their dependence on the entanglement phase of the light. It contains:
//!
//! * [`angular`] — Clebsch-Gordan coefficients, Wigner d matrices,
//!   spherical-basis conversion and irreducible-tensor rotation;
//! * [`light`] — the two-mode subthreshold OPO source model: normalized
//!   second-order correlation tables, the entangled pair state and a
//!   classicality witness;
//! * [`polarization`] — irreducible polarization tensors and the restricted
//!   mode-pair quadruples of a two-mode source;
//! * [`channels`] — molecular excitation channels, Franck-Condon body-frame
//!   selection and the rank-X partial cross section with trajectory-segment
//!   weighting;
//! * [`cross_section`] — the total cross section, the closed-form
//!   recoil-limit expressions, branching ratios and control contrasts;
//! * [`trajectory`] — semiclassical Condon-point kinematics: root-finding
//!   for Condon and turning points, singular quadrature for deflection
//!   angles and durations, trajectory-case classification and quasistatic
//!   Franck-Condon weights;
//! * [`scan`] — deterministic parameter scans with CSV/JSON emission,
//!   driving the `optcol` CLI.

pub mod angular;
pub mod channels;
pub mod cross_section;
pub mod error;
pub mod light;
pub mod numerics;
pub mod polarization;
pub mod scan;
pub mod trajectory;

pub use error::{Error, Result};
