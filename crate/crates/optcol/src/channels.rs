//! Molecular excitation channels, Franck-Condon body-frame selection and
//! the rank-X partial cross section Q^(X) with trajectory-segment
//! weighting.
//!
//! A channel is an ordered triple of molecular term symmetries |Lambda|
//! (0 = Sigma, 1 = Pi, 2 = Delta) for the initial, intermediate and final
//! states. Each photon changes the signed axis projection Lambda by its
//! body-frame spherical component nu in {-1, 0, +1}; the quasistatic
//! Franck-Condon principle keeps only those components compatible with the
//! channel, both signed Lambda branches of degenerate terms being summed
//! with equal weight.

use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::angular::{cg_int, small_d_int, HalfIntSpin};
use crate::error::{Error, Result};
use crate::light::ModePairCorrelations;
use crate::polarization::QuadrupleLabel;

/// Display names for |Lambda| = 0, 1, 2.
const LAMBDA_NAMES: [&str; 3] = ["Σ", "Π", "Δ"];

/// Ordered molecular term symmetries of a two-photon excitation channel.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChannelSpec {
    lambdas: [u8; 3],
    label: String,
}

impl ChannelSpec {
    /// Build a channel from |Lambda| values of the initial, intermediate
    /// and final states. Each optical step must change |Lambda| by 0 or 1.
    pub fn new(initial: u8, intermediate: u8, final_: u8) -> Result<Self> {
        for (a, b) in [(initial, intermediate), (intermediate, final_)] {
            if a > 2 || b > 2 {
                return Err(Error::domain("term symmetries up to Delta (|Lambda| = 2) supported"));
            }
            if a.abs_diff(b) > 1 {
                return Err(Error::domain(format!(
                    "dipole selection forbids |Lambda| {a} -> {b}"
                )));
            }
        }
        let label = format!(
            "{}→{}→{}",
            LAMBDA_NAMES[initial as usize],
            LAMBDA_NAMES[intermediate as usize],
            LAMBDA_NAMES[final_ as usize]
        );
        Ok(ChannelSpec {
            lambdas: [initial, intermediate, final_],
            label,
        })
    }

    /// Bypass dipole validation; channels built this way may have no
    /// allowed body components and contribute zero cross section.
    #[cfg(test)]
    pub(crate) fn new_unchecked(lambdas: [u8; 3]) -> Self {
        let label = format!(
            "{}→{}→{}",
            LAMBDA_NAMES[lambdas[0] as usize],
            LAMBDA_NAMES[lambdas[1] as usize],
            LAMBDA_NAMES[lambdas[2] as usize]
        );
        ChannelSpec { lambdas, label }
    }

    /// Parse a label such as `Σ→Π→Δ`, `sigma-pi-delta` or `S-P-D`
    /// (case-insensitive, arrows or dashes).
    pub fn from_label(label: &str) -> Result<Self> {
        let norm = label.to_lowercase();
        let parts: Vec<&str> = norm
            .split(|c| c == '→' || c == '-' || c == '>' || c == ' ')
            .filter(|s| !s.is_empty())
            .collect();
        if parts.len() != 3 {
            return Err(Error::config(format!(
                "channel label `{label}` not recognized; valid labels: {}",
                Self::worked_labels().join(", ")
            )));
        }
        let mut lambdas = [0u8; 3];
        for (slot, part) in lambdas.iter_mut().zip(&parts) {
            *slot = match *part {
                "σ" | "sigma" | "s" | "0" => 0,
                "π" | "pi" | "p" | "1" => 1,
                "δ" | "delta" | "d" | "2" => 2,
                other => {
                    return Err(Error::config(format!(
                        "unknown term symmetry `{other}` in channel label `{label}`; \
                         valid labels: {}",
                        Self::worked_labels().join(", ")
                    )))
                }
            };
        }
        Self::new(lambdas[0], lambdas[1], lambdas[2])
            .map_err(|e| Error::config(format!("channel label `{label}`: {e}")))
    }

    /// The five channels with closed-form recoil-limit cross sections.
    pub fn worked_channels() -> Vec<ChannelSpec> {
        [(0, 0, 0), (0, 1, 0), (0, 0, 1), (0, 1, 1), (0, 1, 2)]
            .into_iter()
            .map(|(a, b, c)| ChannelSpec::new(a, b, c).unwrap())
            .collect()
    }

    pub fn worked_labels() -> Vec<String> {
        Self::worked_channels()
            .iter()
            .map(|c| c.label.clone())
            .collect()
    }

    pub fn lambdas(&self) -> [u8; 3] {
        self.lambdas
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Body-frame photon components (nu1, nu2) permitted by the Franck-Condon
/// principle for the channel, over all signed Lambda branches, sorted and
/// deduplicated.
pub fn allowed_body_components(channel: &ChannelSpec) -> Vec<(i8, i8)> {
    let mut pairs = signed_paths(channel)
        .into_iter()
        .flat_map(|(_, paths)| paths)
        .collect::<Vec<_>>();
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

/// Allowed (nu1, nu2) pairs grouped by the signed initial Lambda branch.
/// Amplitude and conjugate-amplitude paths interfere only within one
/// branch (they must connect the same initial state).
fn signed_paths(channel: &ChannelSpec) -> Vec<(i8, Vec<(i8, i8)>)> {
    let [l0, l1, l2] = channel.lambdas;
    let branches: Vec<i8> = if l0 == 0 {
        vec![0]
    } else {
        vec![-(l0 as i8), l0 as i8]
    };
    branches
        .into_iter()
        .map(|lambda0| {
            let mut paths = Vec::new();
            for nu1 in -1..=1i8 {
                let li = lambda0 + nu1;
                if li.unsigned_abs() != l1 {
                    continue;
                }
                for nu2 in -1..=1i8 {
                    let lf = li + nu2;
                    if lf.unsigned_abs() == l2 {
                        paths.push((nu1, nu2));
                    }
                }
            }
            (lambda0, paths)
        })
        .collect()
}

/// Trajectory cases of the two Condon passes relative to the turning
/// point: both straddling it, both on the incoming branch, or both on the
/// outgoing branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TrajectoryCase {
    IncomingOutgoing,
    Incoming,
    Outgoing,
}

impl fmt::Display for TrajectoryCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrajectoryCase::IncomingOutgoing => write!(f, "incoming-outgoing"),
            TrajectoryCase::Incoming => write!(f, "incoming"),
            TrajectoryCase::Outgoing => write!(f, "outgoing"),
        }
    }
}

/// Trajectory segments between the two Condon passes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Segment {
    /// Through the turning point (incoming then outgoing).
    Pm,
    /// Both passes on the incoming branch.
    Minus,
    /// Both passes on the outgoing branch.
    Plus,
}

/// Condon radii, deflection angles, durations and Franck-Condon weights of
/// one excitation pathway. Segments not selected by `case` carry zero
/// weight in Q^(X) rather than being structurally removed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CollisionKinematics {
    pub r1: f64,
    pub r2: f64,
    pub case: TrajectoryCase,
    pub xi_pm: f64,
    pub xi_minus: f64,
    pub xi_plus: f64,
    pub tau_pm: f64,
    pub tau_minus: f64,
    pub tau_plus: f64,
    pub w1: f64,
    pub w2: f64,
    pub j0: HalfIntSpin,
}

impl CollisionKinematics {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        r1: f64,
        r2: f64,
        case: TrajectoryCase,
        angles: (f64, f64, f64),
        durations: (f64, f64, f64),
        weights: (f64, f64),
        j0: HalfIntSpin,
    ) -> Result<Self> {
        let (xi_pm, xi_minus, xi_plus) = angles;
        let (tau_pm, tau_minus, tau_plus) = durations;
        let (w1, w2) = weights;
        if tau_pm < 0.0 || tau_minus < 0.0 || tau_plus < 0.0 {
            return Err(Error::domain("segment durations must be non-negative"));
        }
        if w1 < 0.0 || w2 < 0.0 {
            return Err(Error::domain("Franck-Condon weights must be non-negative"));
        }
        match case {
            TrajectoryCase::Incoming if !(r1 > r2) => {
                return Err(Error::domain(
                    "incoming case needs R1 > R2 (the first photon is absorbed first)",
                ))
            }
            TrajectoryCase::Outgoing if !(r2 > r1) => {
                return Err(Error::domain(
                    "outgoing case needs R2 > R1 (the first photon is absorbed first)",
                ))
            }
            _ => {}
        }
        Ok(CollisionKinematics {
            r1,
            r2,
            case,
            xi_pm,
            xi_minus,
            xi_plus,
            tau_pm,
            tau_minus,
            tau_plus,
            w1,
            w2,
            j0,
        })
    }

    /// Recoil-limit idealization: one incoming-outgoing segment with no
    /// axis rotation, unit weights and a single photon-pair delay.
    pub fn recoil(delay: f64) -> Self {
        CollisionKinematics {
            r1: 1.0,
            r2: 1.0,
            case: TrajectoryCase::IncomingOutgoing,
            xi_pm: 0.0,
            xi_minus: 0.0,
            xi_plus: 0.0,
            tau_pm: delay,
            tau_minus: 0.0,
            tau_plus: 0.0,
            w1: 1.0,
            w2: 1.0,
            j0: HalfIntSpin::integer(0),
        }
    }

    /// The single segment selected by the trajectory case (theta-function
    /// logic of the cross-section formula).
    pub fn active_segment(&self) -> Segment {
        match self.case {
            TrajectoryCase::IncomingOutgoing => Segment::Pm,
            TrajectoryCase::Incoming => Segment::Minus,
            TrajectoryCase::Outgoing => Segment::Plus,
        }
    }

    /// Deflection angle and duration of a segment.
    pub fn segment(&self, seg: Segment) -> (f64, f64) {
        match seg {
            Segment::Pm => (self.xi_pm, self.tau_pm),
            Segment::Minus => (self.xi_minus, self.tau_minus),
            Segment::Plus => (self.xi_plus, self.tau_plus),
        }
    }
}

/// Correlation tables supplied per trajectory segment.
#[derive(Clone, Copy, Debug, Default)]
pub struct SegmentCorrelations {
    pub pm: Option<ModePairCorrelations>,
    pub minus: Option<ModePairCorrelations>,
    pub plus: Option<ModePairCorrelations>,
}

impl SegmentCorrelations {
    pub fn single(seg: Segment, table: ModePairCorrelations) -> Self {
        let mut out = SegmentCorrelations::default();
        match seg {
            Segment::Pm => out.pm = Some(table),
            Segment::Minus => out.minus = Some(table),
            Segment::Plus => out.plus = Some(table),
        }
        out
    }

    fn get(&self, seg: Segment) -> Option<&ModePairCorrelations> {
        match seg {
            Segment::Pm => self.pm.as_ref(),
            Segment::Minus => self.minus.as_ref(),
            Segment::Plus => self.plus.as_ref(),
        }
    }
}

/// Rank-X partial cross section per mode quadruple.
#[derive(Clone, Copy, Debug, Default)]
pub struct QuadrupleValues {
    values: [Complex64; 4],
}

impl QuadrupleValues {
    pub fn get(&self, label: QuadrupleLabel) -> Complex64 {
        self.values[label.index()]
    }
}

/// Body-frame Clebsch-Gordan kernel of the channel, resolved over the
/// body projection Xi: sum over amplitude paths (nu1, nu2) and
/// conjugate-amplitude paths (nu1', nu2') of
/// (-1)^(Xi + nu1 + nu2) C^{X Xi}_{1 nu2 1 -nu2'} C^{X Xi}_{1 -nu1 1 nu1'},
/// branch by signed-Lambda branch.
fn channel_kernel(channel: &ChannelSpec, x: u32) -> Vec<f64> {
    static CACHE: OnceLock<std::sync::Mutex<std::collections::HashMap<([u8; 3], u32), Vec<f64>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().unwrap().get(&(channel.lambdas, x)) {
        return hit.clone();
    }

    let x_i = x as i32;
    let mut kernel = vec![0.0; (2 * x + 1) as usize];
    for (_, paths) in signed_paths(channel) {
        for &(n1, n2) in &paths {
            for &(n1p, n2p) in &paths {
                let (n1, n2, n1p, n2p) = (n1 as i32, n2 as i32, n1p as i32, n2p as i32);
                for xi in -x_i..=x_i {
                    let c = cg_int(1, n2, 1, -n2p, x, xi) * cg_int(1, -n1, 1, n1p, x, xi);
                    if c == 0.0 {
                        continue;
                    }
                    let sign = if (xi + n1 + n2).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                    kernel[(xi + x_i) as usize] += sign * c;
                }
            }
        }
    }
    cache
        .lock()
        .unwrap()
        .insert((channel.lambdas, x), kernel.clone());
    kernel
}

/// Rank-X partial cross section Q^(X) for every mode quadruple.
///
/// For each body projection Xi the channel kernel is weighted by the
/// Wigner d factor d^X_{Xi Xi}(xi_segment) and the segment's correlation
/// value, summed over the segments selected by the trajectory case, with
/// the overall factor w1 w2 / ((2 j0 + 1)(2X + 1)).
pub fn q_tensor(
    channel: &ChannelSpec,
    kin: &CollisionKinematics,
    corr: &SegmentCorrelations,
    x: u32,
) -> Result<QuadrupleValues> {
    if x > 2 {
        return Err(Error::domain(format!(
            "partial cross sections exist for X in 0..=2, got {x}"
        )));
    }
    let seg = kin.active_segment();
    let table = corr.get(seg).ok_or_else(|| {
        Error::config(format!(
            "missing correlation table for the active trajectory segment ({:?})",
            seg
        ))
    })?;
    let (xi_angle, _) = kin.segment(seg);

    let kernel = channel_kernel(channel, x);
    let x_i = x as i32;
    let prefactor =
        kin.w1 * kin.w2 / (f64::from(kin.j0.multiplicity()) * f64::from(2 * x + 1));

    // Kernel contracted with the segment's rotation factor; a single
    // segment is active per case, the others carry zero weight.
    let mut rotated_kernel = 0.0;
    for xi in -x_i..=x_i {
        rotated_kernel += kernel[(xi + x_i) as usize] * small_d_int(x, xi, xi, xi_angle);
    }

    let mut out = QuadrupleValues::default();
    for label in QuadrupleLabel::ALL {
        out.values[label.index()] = prefactor * rotated_kernel * table.get(label);
    }
    Ok(out)
}
