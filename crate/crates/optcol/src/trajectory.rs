//! Semiclassical single-trajectory machinery: Condon-point location,
//! turning-point analysis, deflection angles and durations per trajectory
//! segment, trajectory-case classification and quasistatic Franck-Condon
//! weights.
//!
//! Radial motion at total energy E_tot and angular momentum L = mu v b
//! (v the asymptotic speed of the ground-surface collision energy E) is
//! governed by
//!
//! ```text
//! F(R) = E_tot - V(R) - E b^2 / R^2,      v_R = sqrt(2 F / mu),
//! d(theta)/dR = b sqrt(E / F) / R^2,      dt/dR = sqrt(mu / (2 F)).
//! ```
//!
//! Between the two Condon passes the pair moves on the intermediate
//! potential with E_tot = E + detuning_1 (the vertical transition preserves
//! kinetic energy). Integrals from the turning point use the substitution
//! R = R_t (1 + u^2), which removes the inverse-square-root singularity.
//! Deflection angles are the polar angle swept by the interatomic axis
//! strictly between the two Condon passes.

use serde::{Deserialize, Serialize};

use crate::channels::{CollisionKinematics, TrajectoryCase};
use crate::error::{Error, Result};
use crate::numerics::{find_roots, integrate};

/// Default panel count of the sign-change scan for root location.
pub const DEFAULT_SCAN_PANELS: usize = 2048;
/// Relative tolerance of refined roots.
const ROOT_TOL: f64 = 1e-12;
/// Relative tolerance of segment integrals.
const QUAD_TOL: f64 = 1e-10;

/// Parametrized radial potential V(R).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PotentialForm {
    /// V(R) = coeff / R^power (signed coefficient).
    InversePower { coeff: f64, power: i32 },
    /// V(R) = depth [(1 - exp(-steepness (R - r_eq)))^2 - 1]; zero
    /// asymptote, well depth `depth` at R = r_eq.
    Morse { depth: f64, steepness: f64, r_eq: f64 },
    /// Piecewise-linear interpolation of a strictly increasing R grid.
    Tabulated { r: Vec<f64>, v: Vec<f64> },
}

/// Named potential with a declared radial domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialModel {
    pub name: String,
    pub form: PotentialForm,
    pub r_min: f64,
    pub r_max: f64,
}

impl PotentialModel {
    pub fn new(name: impl Into<String>, form: PotentialForm, r_min: f64, r_max: f64) -> Result<Self> {
        if !(r_min > 0.0) || !(r_max > r_min) {
            return Err(Error::domain(format!(
                "potential domain must satisfy 0 < r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if let PotentialForm::Tabulated { r, v } = &form {
            if r.len() < 2 || r.len() != v.len() {
                return Err(Error::domain("tabulated potential needs >= 2 (R, V) pairs"));
            }
            if r.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::domain("tabulated R grid must be strictly increasing"));
            }
            if v.iter().chain(r.iter()).any(|x| !x.is_finite()) {
                return Err(Error::domain("tabulated potential values must be finite"));
            }
        }
        Ok(PotentialModel {
            name: name.into(),
            form,
            r_min,
            r_max,
        })
    }

    pub fn inverse_power(name: impl Into<String>, coeff: f64, power: i32) -> Self {
        PotentialModel {
            name: name.into(),
            form: PotentialForm::InversePower { coeff, power },
            r_min: 1e-6,
            r_max: 1e6,
        }
    }

    /// Flat V = 0 potential (free motion).
    pub fn free() -> Self {
        Self::inverse_power("free", 0.0, 1)
    }

    pub fn morse(name: impl Into<String>, depth: f64, steepness: f64, r_eq: f64) -> Self {
        PotentialModel {
            name: name.into(),
            form: PotentialForm::Morse { depth, steepness, r_eq },
            r_min: 1e-6,
            r_max: 1e6,
        }
    }

    /// Parse two-column numeric text (R, V), `#` starting comment lines.
    pub fn tabulated_from_text(name: impl Into<String>, text: &str) -> Result<Self> {
        let mut r = Vec::new();
        let mut v = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split_whitespace();
            let (rv, vv) = (cols.next(), cols.next());
            match (rv, vv) {
                (Some(rs), Some(vs)) => {
                    let parse = |s: &str| {
                        s.parse::<f64>().map_err(|_| {
                            Error::config(format!(
                                "tabulated potential line {}: cannot parse `{s}`",
                                lineno + 1
                            ))
                        })
                    };
                    r.push(parse(rs)?);
                    v.push(parse(vs)?);
                }
                _ => {
                    return Err(Error::config(format!(
                        "tabulated potential line {}: need two columns",
                        lineno + 1
                    )))
                }
            }
        }
        let (r_min, r_max) = match (r.first(), r.last()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => return Err(Error::config("tabulated potential has no data rows")),
        };
        PotentialModel::new(name, PotentialForm::Tabulated { r, v }, r_min, r_max)
    }

    pub fn with_domain(mut self, r_min: f64, r_max: f64) -> Result<Self> {
        if !(r_min > 0.0) || !(r_max > r_min) {
            return Err(Error::domain("invalid potential domain"));
        }
        self.r_min = r_min;
        self.r_max = r_max;
        Ok(self)
    }

    pub fn value(&self, r: f64) -> f64 {
        match &self.form {
            PotentialForm::InversePower { coeff, power } => coeff / r.powi(*power),
            PotentialForm::Morse { depth, steepness, r_eq } => {
                let x = (-steepness * (r - r_eq)).exp();
                depth * ((1.0 - x) * (1.0 - x) - 1.0)
            }
            PotentialForm::Tabulated { r: grid, v } => {
                let i = match grid.binary_search_by(|g| g.partial_cmp(&r).unwrap()) {
                    Ok(i) => return v[i],
                    Err(0) => 0,
                    Err(i) if i >= grid.len() => grid.len() - 2,
                    Err(i) => i - 1,
                };
                let t = (r - grid[i]) / (grid[i + 1] - grid[i]);
                v[i] + t * (v[i + 1] - v[i])
            }
        }
    }

    pub fn slope(&self, r: f64) -> f64 {
        match &self.form {
            PotentialForm::InversePower { coeff, power } => {
                -f64::from(*power) * coeff / r.powi(*power + 1)
            }
            PotentialForm::Morse { depth, steepness, r_eq } => {
                let x = (-steepness * (r - r_eq)).exp();
                2.0 * depth * steepness * x * (1.0 - x)
            }
            PotentialForm::Tabulated { r: grid, v } => {
                let i = grid.partition_point(|&g| g < r).clamp(1, grid.len() - 1) - 1;
                (v[i + 1] - v[i]) / (grid[i + 1] - grid[i])
            }
        }
    }
}

/// Inputs of one semiclassical trajectory: ground-surface collision energy,
/// impact parameter, reduced mass, the three potential surfaces and the
/// two photon detunings defining the Condon conditions
/// V_upper - V_lower = detuning.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryInputs {
    pub collision_energy: f64,
    pub impact_parameter: f64,
    pub reduced_mass: f64,
    pub ground: PotentialModel,
    pub intermediate: PotentialModel,
    pub final_state: PotentialModel,
    pub photon_detunings: (f64, f64),
}

impl TrajectoryInputs {
    pub fn validate(&self) -> Result<()> {
        if !(self.collision_energy > 0.0) {
            return Err(Error::domain("collision energy must be positive"));
        }
        if !(self.reduced_mass > 0.0) {
            return Err(Error::domain("reduced mass must be positive"));
        }
        if self.impact_parameter < 0.0 {
            return Err(Error::domain("impact parameter must be non-negative"));
        }
        Ok(())
    }

    /// Asymptotic relative speed sqrt(2 E / mu).
    pub fn asymptotic_speed(&self) -> f64 {
        (2.0 * self.collision_energy / self.reduced_mass).sqrt()
    }
}

/// All roots of V_upper(R) - V_lower(R) = detuning over the shared domain,
/// ascending, refined to relative tolerance 1e-10 after a sign-change
/// scan with `panels` panels.
pub fn condon_points_with_scan(
    lower: &PotentialModel,
    upper: &PotentialModel,
    detuning: f64,
    panels: usize,
) -> Result<Vec<f64>> {
    let lo = lower.r_min.max(upper.r_min);
    let hi = lower.r_max.min(upper.r_max);
    if !(hi > lo) {
        return Err(Error::domain(format!(
            "potentials `{}` and `{}` have non-overlapping domains",
            lower.name, upper.name
        )));
    }
    find_roots(
        |r| upper.value(r) - lower.value(r) - detuning,
        lo,
        hi,
        panels,
        ROOT_TOL,
    )
}

/// [`condon_points_with_scan`] at the default scan density.
pub fn condon_points(
    lower: &PotentialModel,
    upper: &PotentialModel,
    detuning: f64,
) -> Result<Vec<f64>> {
    condon_points_with_scan(lower, upper, detuning, DEFAULT_SCAN_PANELS)
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Turning {
    /// Radial velocity vanishes at this radius.
    Radius(f64),
    /// F > 0 down to the inner domain edge: the head-on trajectory runs
    /// through the origin and the axis direction flips by pi.
    PassThrough,
}

/// Radial-motion kernel on one potential surface.
struct RadialMotion<'a> {
    potential: &'a PotentialModel,
    /// Total energy on this surface.
    e_tot: f64,
    /// Centrifugal coefficient E b^2 (ground-surface collision energy).
    cb: f64,
    /// sqrt(E) b for the angular rate.
    sqrt_e_b: f64,
    mu: f64,
}

impl<'a> RadialMotion<'a> {
    fn new(potential: &'a PotentialModel, e_tot: f64, inputs: &TrajectoryInputs) -> Self {
        let b = inputs.impact_parameter;
        let e = inputs.collision_energy;
        RadialMotion {
            potential,
            e_tot,
            cb: e * b * b,
            sqrt_e_b: e.sqrt() * b,
            mu: inputs.reduced_mass,
        }
    }

    /// F(R) = E_tot - V(R) - E b^2 / R^2; radial kinetic energy.
    fn f(&self, r: f64) -> f64 {
        self.e_tot - self.potential.value(r) - self.cb / (r * r)
    }

    fn radial_speed(&self, r: f64) -> f64 {
        (2.0 * self.f(r).max(0.0) / self.mu).sqrt()
    }

    /// Largest zero of F in the domain, or the pass-through marker when F
    /// stays positive down to the inner domain edge (head-on, b = 0).
    fn turning(&self) -> Result<Turning> {
        let roots = find_roots(
            |r| self.f(r),
            self.potential.r_min,
            self.potential.r_max,
            DEFAULT_SCAN_PANELS,
            ROOT_TOL,
        )?;
        match roots.last() {
            Some(&rt) => Ok(Turning::Radius(rt)),
            None if self.f(self.potential.r_min) > 0.0 => Ok(Turning::PassThrough),
            None => Err(Error::domain(format!(
                "no classical turning point on `{}` and the inner domain edge is not reachable",
                self.potential.name
            ))),
        }
    }

    /// Integral of h(R)/sqrt(F(R)) from the turning structure out to `r`.
    /// The turning-point singularity is removed by R = R_t (1 + u^2).
    fn from_turning<H: Fn(f64) -> f64>(&self, turning: &Turning, r: f64, h: H) -> Result<f64> {
        match *turning {
            Turning::PassThrough => {
                let lo = self.potential.r_min;
                if r <= lo {
                    return Ok(0.0);
                }
                integrate(|x| h(x) / self.f(x).max(0.0).sqrt(), lo, r, QUAD_TOL)
            }
            Turning::Radius(rt) => {
                if r <= rt * (1.0 + 1e-14) {
                    return Ok(0.0);
                }
                let u_max = (r / rt - 1.0).sqrt();
                integrate(
                    |u| {
                        let x = rt * (1.0 + u * u);
                        2.0 * rt * u * h(x) / self.f(x).max(0.0).sqrt()
                    },
                    0.0,
                    u_max,
                    QUAD_TOL,
                )
            }
        }
    }

    /// Time from the turning point out to radius r.
    fn time_from_turning(&self, turning: &Turning, r: f64) -> Result<f64> {
        let half_mu = (self.mu / 2.0).sqrt();
        self.from_turning(turning, r, |_| half_mu)
    }

    /// Polar angle swept from the turning point out to radius r.
    fn angle_from_turning(&self, turning: &Turning, r: f64) -> Result<f64> {
        if self.sqrt_e_b == 0.0 {
            return Ok(0.0);
        }
        let seb = self.sqrt_e_b;
        self.from_turning(turning, r, move |x| seb / (x * x))
    }
}

/// Largest classical turning point E - V(R) - E b^2/R^2 = 0 on the given
/// potential at the ground-surface collision energy.
pub fn turning_point(potential: &PotentialModel, inputs: &TrajectoryInputs) -> Result<f64> {
    inputs.validate()?;
    let motion = RadialMotion::new(potential, inputs.collision_energy, inputs);
    match motion.turning()? {
        Turning::Radius(rt) => Ok(rt),
        Turning::PassThrough => Err(Error::domain(format!(
            "no classical turning point on `{}` in its domain",
            potential.name
        ))),
    }
}

/// Deflection angles and durations of the three trajectory segments
/// between the Condon radii R1 and R2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SegmentSet {
    pub xi_pm: f64,
    pub xi_minus: f64,
    pub xi_plus: f64,
    pub tau_pm: f64,
    pub tau_minus: f64,
    pub tau_plus: f64,
}

/// Segment kinematics of the intermediate-state motion between the Condon
/// passes at R1 (first photon) and R2 (second photon).
///
/// The motion runs on the intermediate potential at total energy
/// E + detuning_1. Same-branch segments are time-reversal symmetric, so
/// the minus and plus entries coincide; the case argument validates the
/// radius ordering it requires.
pub fn segment_kinematics(
    inputs: &TrajectoryInputs,
    r1: f64,
    r2: f64,
    case: TrajectoryCase,
) -> Result<SegmentSet> {
    inputs.validate()?;
    match case {
        TrajectoryCase::Incoming if !(r1 > r2) => {
            return Err(Error::domain("incoming case needs R1 > R2"))
        }
        TrajectoryCase::Outgoing if !(r2 > r1) => {
            return Err(Error::domain("outgoing case needs R2 > R1"))
        }
        _ => {}
    }

    let e_tot = inputs.collision_energy + inputs.photon_detunings.0;
    let motion = RadialMotion::new(&inputs.intermediate, e_tot, inputs);
    let turning = motion.turning()?;
    if let Turning::Radius(rt) = turning {
        for (r, tag) in [(r1, "R1"), (r2, "R2")] {
            if r < rt * (1.0 - 1e-12) {
                return Err(Error::domain(format!(
                    "Condon radius {tag} = {r} lies below the turning point {rt}"
                )));
            }
        }
    }

    let t1 = motion.time_from_turning(&turning, r1)?;
    let t2 = motion.time_from_turning(&turning, r2)?;
    let a1 = motion.angle_from_turning(&turning, r1)?;
    let a2 = motion.angle_from_turning(&turning, r2)?;

    // Head-on pass through the origin reverses the axis direction.
    let flip = match turning {
        Turning::PassThrough => std::f64::consts::PI,
        Turning::Radius(_) => 0.0,
    };

    Ok(SegmentSet {
        xi_pm: a1 + a2 + flip,
        xi_minus: (a1 - a2).abs(),
        xi_plus: (a1 - a2).abs(),
        tau_pm: t1 + t2,
        tau_minus: (t1 - t2).abs(),
        tau_plus: (t1 - t2).abs(),
    })
}

/// Classify the trajectory case of the two Condon passes.
///
/// The first photon is absorbed first in time. On the incoming branch the
/// radius decreases, so a second pass at R2 >= R1 can only sit on the
/// outgoing branch (incoming-outgoing), while R2 < R1 is classified as
/// both-incoming. A first pass on the outgoing branch forces the second
/// pass outward at R2 > R1.
pub fn classify_case(
    r1: f64,
    r2: f64,
    first_photon_on_incoming: bool,
    turning: f64,
) -> Result<TrajectoryCase> {
    if r1 < turning || r2 < turning {
        return Err(Error::domain(
            "Condon radii must not lie below the turning point",
        ));
    }
    if first_photon_on_incoming {
        if r2 >= r1 {
            Ok(TrajectoryCase::IncomingOutgoing)
        } else {
            Ok(TrajectoryCase::Incoming)
        }
    } else if r2 > r1 {
        Ok(TrajectoryCase::Outgoing)
    } else {
        Err(Error::domain(
            "on the outgoing branch the second photon cannot precede the first spatially",
        ))
    }
}

/// Quasistatic Franck-Condon weight of the optical transition at Condon
/// point `r_c` between `lower` and `upper`:
/// w = 1 / (v_R(r_c) |d(V_upper - V_lower)/dR|).
///
/// `lower` must be the ground or intermediate surface of `inputs`; the
/// intermediate surface carries total energy E + detuning_1. Normalize
/// against a declared reference via [`normalized_fc_weight`].
pub fn franck_condon_weight(
    lower: &PotentialModel,
    upper: &PotentialModel,
    r_c: f64,
    inputs: &TrajectoryInputs,
) -> Result<f64> {
    inputs.validate()?;
    let e_tot = if *lower == inputs.ground {
        inputs.collision_energy
    } else if *lower == inputs.intermediate {
        inputs.collision_energy + inputs.photon_detunings.0
    } else {
        return Err(Error::domain(
            "lower potential must be the ground or intermediate surface of the trajectory inputs",
        ));
    };
    let motion = RadialMotion::new(lower, e_tot, inputs);
    let v_r = motion.radial_speed(r_c);
    if v_r <= 0.0 {
        return Err(Error::domain(format!(
            "radial speed vanishes at R = {r_c}; quasistatic weight undefined at the turning point"
        )));
    }
    let slope = upper.slope(r_c) - lower.slope(r_c);
    if slope.abs() < 1e-300 {
        return Err(Error::domain(format!(
            "difference-potential slope vanishes at R = {r_c}; stationary-phase point beyond the quasistatic model"
        )));
    }
    Ok(1.0 / (v_r * slope.abs()))
}

/// Weight normalized so the declared reference configuration maps to 1.
pub fn normalized_fc_weight(raw: f64, reference_raw: f64) -> Result<f64> {
    if !(reference_raw > 0.0) {
        return Err(Error::domain("reference Franck-Condon weight must be positive"));
    }
    Ok(raw / reference_raw)
}

/// Net scattering deflection of a full incoming-outgoing ground-surface
/// path out to `r_far` on both sides: pi minus the swept polar angle
/// (0 for free motion as r_far grows).
pub fn scattering_deflection(inputs: &TrajectoryInputs, r_far: f64) -> Result<f64> {
    inputs.validate()?;
    let motion = RadialMotion::new(&inputs.ground, inputs.collision_energy, inputs);
    let turning = motion.turning()?;
    let swept = 2.0 * motion.angle_from_turning(&turning, r_far)?
        + match turning {
            Turning::PassThrough => std::f64::consts::PI,
            Turning::Radius(_) => 0.0,
        };
    Ok(std::f64::consts::PI - swept)
}

/// Resolved trajectory report for one excitation pathway.
#[derive(Clone, Debug)]
pub struct KinematicsReport {
    pub r1: f64,
    pub r2: f64,
    pub turning: f64,
    pub case: TrajectoryCase,
    pub segments: SegmentSet,
    pub w1_raw: f64,
    pub w2_raw: f64,
    pub r1_candidates: Vec<f64>,
    pub r2_candidates: Vec<f64>,
}

/// Resolve explicit collision kinematics from trajectory inputs.
///
/// Condon radii come from the two detunings (`root_select` picks among
/// multiple roots); Franck-Condon weights are normalized to the first
/// transition (w1 = 1).
pub fn resolve_kinematics(
    inputs: &TrajectoryInputs,
    first_photon_on_incoming: bool,
    root_select: (usize, usize),
    j0: crate::angular::HalfIntSpin,
) -> Result<(CollisionKinematics, KinematicsReport)> {
    inputs.validate()?;
    let r1_candidates =
        condon_points(&inputs.ground, &inputs.intermediate, inputs.photon_detunings.0)?;
    let r2_candidates =
        condon_points(&inputs.intermediate, &inputs.final_state, inputs.photon_detunings.1)?;
    let pick = |roots: &[f64], idx: usize, tag: &str| -> Result<f64> {
        roots.get(idx).copied().ok_or_else(|| {
            Error::domain(format!(
                "no Condon point for the {tag} transition at index {idx} ({} found)",
                roots.len()
            ))
        })
    };
    let r1 = pick(&r1_candidates, root_select.0, "first")?;
    let r2 = pick(&r2_candidates, root_select.1, "second")?;

    let e_tot = inputs.collision_energy + inputs.photon_detunings.0;
    let motion = RadialMotion::new(&inputs.intermediate, e_tot, inputs);
    let turning = match motion.turning()? {
        Turning::Radius(rt) => rt,
        Turning::PassThrough => 0.0,
    };
    let case = classify_case(r1, r2, first_photon_on_incoming, turning)?;
    let segments = segment_kinematics(inputs, r1, r2, case)?;

    let w1_raw = franck_condon_weight(&inputs.ground, &inputs.intermediate, r1, inputs)?;
    let w2_raw = franck_condon_weight(&inputs.intermediate, &inputs.final_state, r2, inputs)?;
    let w1 = 1.0;
    let w2 = normalized_fc_weight(w2_raw, w1_raw)?;

    let kin = CollisionKinematics::new(
        r1,
        r2,
        case,
        (segments.xi_pm, segments.xi_minus, segments.xi_plus),
        (segments.tau_pm, segments.tau_minus, segments.tau_plus),
        (w1, w2),
        j0,
    )?;
    let report = KinematicsReport {
        r1,
        r2,
        turning,
        case,
        segments,
        w1_raw,
        w2_raw,
        r1_candidates,
        r2_candidates,
    };
    Ok((kin, report))
}

/// Thermal averaging over a declared (E, b) distribution, a layer separate
/// from the single-trajectory quantities.
pub mod averaging {
    use super::*;

    /// Weight over collision energies.
    #[derive(Clone, Copy, Debug)]
    pub enum EnergyWeight {
        Uniform,
        /// Flux-weighted Maxwell-Boltzmann, w(E) = E exp(-E / kt).
        MaxwellBoltzmann { kt: f64 },
    }

    /// Weight over impact parameters.
    #[derive(Clone, Copy, Debug)]
    pub enum ImpactWeight {
        Uniform,
        /// Annulus measure, w(b) = 2 b.
        Geometric,
    }

    /// Gaussian-quadrature average of a trajectory functional over
    /// declared (E, b) ranges.
    #[derive(Clone, Copy, Debug)]
    pub struct AveragingSpec {
        pub energy_range: (f64, f64),
        pub impact_range: (f64, f64),
        pub energy_weight: EnergyWeight,
        pub impact_weight: ImpactWeight,
    }

    impl AveragingSpec {
        fn energy_w(&self, e: f64) -> f64 {
            match self.energy_weight {
                EnergyWeight::Uniform => 1.0,
                EnergyWeight::MaxwellBoltzmann { kt } => e * (-e / kt).exp(),
            }
        }

        fn impact_w(&self, b: f64) -> f64 {
            match self.impact_weight {
                ImpactWeight::Uniform => 1.0,
                ImpactWeight::Geometric => 2.0 * b,
            }
        }
    }

    /// Average `f(E, b)` over the declared distribution with fixed
    /// 16-node Gauss-Legendre rules per axis.
    pub fn thermal_average<F>(spec: &AveragingSpec, mut f: F) -> Result<f64>
    where
        F: FnMut(f64, f64) -> Result<f64>,
    {
        let (e_lo, e_hi) = spec.energy_range;
        let (b_lo, b_hi) = spec.impact_range;
        if !(e_hi >= e_lo) || !(b_hi >= b_lo) {
            return Err(Error::domain("invalid averaging ranges"));
        }
        let nodes = gauss_rule::<16>();
        let mut num = 0.0;
        let mut den = 0.0;
        for &(xe, we) in &nodes {
            let e = 0.5 * (e_lo + e_hi) + 0.5 * (e_hi - e_lo) * xe;
            for &(xb, wb) in &nodes {
                let b = 0.5 * (b_lo + b_hi) + 0.5 * (b_hi - b_lo) * xb;
                let weight = we * wb * spec.energy_w(e) * spec.impact_w(b);
                num += weight * f(e, b)?;
                den += weight;
            }
        }
        if den <= 0.0 {
            return Err(Error::domain("averaging weights integrate to zero"));
        }
        Ok(num / den)
    }

    fn gauss_rule<const N: usize>() -> [(f64, f64); N] {
        let mut out = [(0.0, 0.0); N];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (N as f64 + 0.5)).cos();
            let eval = |x: f64| {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=N {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = N as f64 * (x * p1 - p0) / (x * x - 1.0);
                (p1, dp)
            };
            for _ in 0..100 {
                let (p, dp) = eval(x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = eval(x);
            *slot = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        out
    }
}
