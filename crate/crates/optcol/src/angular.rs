//! Exact-convention angular momentum algebra: Clebsch-Gordan coefficients,
//! Wigner small-d matrices, spherical-basis conversion and rank-X tensor
//! rotation.
//!
//! Phase conventions follow Varshalovich, Moskalev and Khersonskii,
//! *Quantum Theory of Angular Momentum*. Spherical components of a vector
//! are the covariant ones,
//!
//! ```text
//! e_{+1} = -(v_x + i v_y)/sqrt(2),   e_0 = v_z,   e_{-1} = (v_x - i v_y)/sqrt(2),
//! ```
//!
//! under which a Cartesian rotation R acts on rank-1 components as the
//! matrix built by [`rotate_tensor`] with the same Euler angles.

use std::sync::OnceLock;

use num::rational::BigRational;
use num::{BigInt, One, Signed, ToPrimitive, Zero};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported 2j for the factorial-sum Wigner d evaluation.
const TWICE_J_CAP: u32 = 34;

/// Angular momentum magnitude stored as 2j, so integer and half-integer
/// values are represented exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfIntSpin {
    twice: u32,
}

impl HalfIntSpin {
    pub fn from_twice(twice: u32) -> Self {
        HalfIntSpin { twice }
    }

    /// Integer angular momentum j.
    pub fn integer(j: u32) -> Self {
        HalfIntSpin { twice: 2 * j }
    }

    pub fn twice(self) -> u32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice) / 2.0
    }

    /// Number of projection states, 2j + 1.
    pub fn multiplicity(self) -> u32 {
        self.twice + 1
    }

    /// A projection m is valid when |2m| <= 2j and 2m has the parity of 2j.
    pub fn valid_projection(self, m: Projection) -> bool {
        m.twice.unsigned_abs() <= self.twice && (m.twice - self.twice as i32) % 2 == 0
    }

    /// All projections -j..=j in ascending order.
    pub fn projections(self) -> impl Iterator<Item = Projection> {
        let tj = self.twice as i32;
        (-tj..=tj).step_by(2).map(Projection::from_twice)
    }
}

/// Magnetic projection stored as 2m.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Projection {
    twice: i32,
}

impl Projection {
    pub fn from_twice(twice: i32) -> Self {
        Projection { twice }
    }

    pub fn integer(m: i32) -> Self {
        Projection { twice: 2 * m }
    }

    pub fn twice(self) -> i32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice) / 2.0
    }
}

fn big_factorials() -> &'static Vec<BigInt> {
    static TABLE: OnceLock<Vec<BigInt>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut v = Vec::with_capacity(128);
        v.push(BigInt::one());
        for n in 1..=127u32 {
            let last = v.last().unwrap().clone();
            v.push(last * BigInt::from(n));
        }
        v
    })
}

fn big_fact(n: i64) -> &'static BigInt {
    &big_factorials()[n as usize]
}

fn fact_f64(n: i64) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        // Exact u128 products, rounded once on conversion.
        let mut v = Vec::with_capacity(35);
        let mut acc: u128 = 1;
        v.push(1.0);
        for n in 1..=34u128 {
            acc *= n;
            v.push(acc as f64);
        }
        v
    });
    table[n as usize]
}

/// Clebsch-Gordan coefficient C^{JM}_{j1 m1 j2 m2} in the Varshalovich
/// (Condon-Shortley) phase convention.
///
/// Evaluated by Racah's closed sum with exact big-integer factorial
/// arithmetic, promoted to floating point only at the end. Selection-rule
/// violations (triangle rule, M != m1 + m2, out-of-range projections)
/// return 0; a projection whose parity does not match its j is a domain
/// error.
pub fn clebsch_gordan(
    j1: HalfIntSpin,
    m1: Projection,
    j2: HalfIntSpin,
    m2: Projection,
    j: HalfIntSpin,
    m: Projection,
) -> Result<f64> {
    for (jj, mm, tag) in [(j1, m1, "m1"), (j2, m2, "m2"), (j, m, "M")] {
        if (mm.twice - jj.twice as i32) % 2 != 0 {
            return Err(Error::domain(format!(
                "projection parity mismatch: 2{tag} = {} with 2j = {}",
                mm.twice, jj.twice
            )));
        }
    }
    if m1.twice.unsigned_abs() > j1.twice
        || m2.twice.unsigned_abs() > j2.twice
        || m.twice.unsigned_abs() > j.twice
    {
        return Ok(0.0);
    }
    if m1.twice + m2.twice != m.twice {
        return Ok(0.0);
    }

    type CgKey = (u32, i32, u32, i32, u32, i32);
    static MEMO: OnceLock<std::sync::Mutex<std::collections::HashMap<CgKey, f64>>> =
        OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    let key = (j1.twice, m1.twice, j2.twice, m2.twice, j.twice, m.twice);
    if let Some(&hit) = memo.lock().unwrap().get(&key) {
        return Ok(hit);
    }

    let (t1, t2, tj) = (j1.twice as i64, j2.twice as i64, j.twice as i64);
    let (tm1, tm2, tm) = (m1.twice as i64, m2.twice as i64, m.twice as i64);

    // Triangle rule; j1 + j2 + J must also be an integer.
    let ta = t1 + t2 - tj;
    let tb = t1 - t2 + tj;
    let tc = -t1 + t2 + tj;
    if ta < 0 || tb < 0 || tc < 0 || ta % 2 != 0 {
        return Ok(0.0);
    }

    // Whole-number factorial arguments (units of 1, not 1/2).
    let a = ta / 2;
    let b = tb / 2;
    let c = tc / 2;
    let jsum1 = (t1 + t2 + tj) / 2 + 1;
    let j1p = (t1 + tm1) / 2;
    let j1m = (t1 - tm1) / 2;
    let j2p = (t2 + tm2) / 2;
    let j2m = (t2 - tm2) / 2;
    let jp = (tj + tm) / 2;
    let jm = (tj - tm) / 2;

    let mut prefactor = BigRational::from_integer(BigInt::from(tj + 1));
    for n in [a, b, c, jp, jm, j1p, j1m, j2p, j2m] {
        prefactor *= BigRational::from_integer(big_fact(n).clone());
    }
    prefactor /= BigRational::from_integer(big_fact(jsum1).clone());

    // k-sum bounds from non-negativity of every factorial argument.
    let k_lo = 0i64.max((tj - t2 + tm1) / -2).max((tj - t1 - tm2) / -2);
    let k_hi = a.min(j1m).min(j2p);
    let mut series = BigRational::zero();
    for k in k_lo..=k_hi {
        let mut den = big_fact(k).clone();
        den *= big_fact(a - k);
        den *= big_fact(j1m - k);
        den *= big_fact(j2p - k);
        den *= big_fact((tj - t2 + tm1) / 2 + k);
        den *= big_fact((tj - t1 - tm2) / 2 + k);
        let term = BigRational::new(BigInt::one(), den);
        if k % 2 == 0 {
            series += term;
        } else {
            series -= term;
        }
    }

    let sign = if series.is_negative() { -1.0 } else { 1.0 };
    // C = series * sqrt(prefactor); promote the exact rationals once.
    let value = sign
        * (series.clone() * series * prefactor)
            .to_f64()
            .unwrap_or(f64::NAN)
            .sqrt();
    memo.lock().unwrap().insert(key, value);
    Ok(value)
}

/// Clebsch-Gordan coefficient for integer angular momenta.
pub fn cg_int(j1: u32, m1: i32, j2: u32, m2: i32, j: u32, m: i32) -> f64 {
    clebsch_gordan(
        HalfIntSpin::integer(j1),
        Projection::integer(m1),
        HalfIntSpin::integer(j2),
        Projection::integer(m2),
        HalfIntSpin::integer(j),
        Projection::integer(m),
    )
    .expect("integer projections always have valid parity")
}

/// Wigner small-d matrix element d^j_{m1 m2}(beta) = <j m1|exp(-i beta J_y)|j m2>,
/// from the standard explicit factorial sum.
pub fn wigner_small_d(j: HalfIntSpin, m1: Projection, m2: Projection, beta: f64) -> Result<f64> {
    for (mm, tag) in [(m1, "m1"), (m2, "m2")] {
        if (mm.twice - j.twice as i32) % 2 != 0 {
            return Err(Error::domain(format!(
                "projection parity mismatch: 2{tag} = {} with 2j = {}",
                mm.twice, j.twice
            )));
        }
    }
    if j.twice > TWICE_J_CAP {
        return Err(Error::domain(format!(
            "wigner_small_d supports 2j <= {TWICE_J_CAP}, got {}",
            j.twice
        )));
    }
    if m1.twice.unsigned_abs() > j.twice || m2.twice.unsigned_abs() > j.twice {
        return Ok(0.0);
    }

    let tj = j.twice as i64;
    let (tmp, tm) = (m1.twice as i64, m2.twice as i64); // m' = row, m = column
    let jpm = (tj + tm) / 2;
    let jmm = (tj - tm) / 2;
    let jpmp = (tj + tmp) / 2;
    let jmmp = (tj - tmp) / 2;
    let m_diff = (tm - tmp) / 2; // m - m'

    let prefactor = (fact_f64(jpm) * fact_f64(jmm) * fact_f64(jpmp) * fact_f64(jmmp)).sqrt();
    let (half_cos, half_sin) = ((beta / 2.0).cos(), (beta / 2.0).sin());

    let k_lo = 0i64.max(m_diff);
    let k_hi = jpm.min(jmmp);
    let mut sum = 0.0;
    for k in k_lo..=k_hi {
        let den = fact_f64(jpm - k) * fact_f64(k) * fact_f64(jmmp - k) * fact_f64(k - m_diff);
        let cos_exp = (tj - 2 * k + m_diff) as i32; // 2j - 2k + m - m'
        let sin_exp = (2 * k - m_diff) as i32;
        let sign = if (k - m_diff) % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * half_cos.powi(cos_exp) * half_sin.powi(sin_exp) / den;
    }
    Ok(prefactor * sum)
}

/// Wigner small-d for integer angular momenta.
pub fn small_d_int(j: u32, m1: i32, m2: i32, beta: f64) -> f64 {
    wigner_small_d(
        HalfIntSpin::integer(j),
        Projection::integer(m1),
        Projection::integer(m2),
        beta,
    )
    .expect("integer projections always have valid parity")
}

/// Active rotation matrix R_z(alpha) R_y(beta) R_z(gamma) in Cartesian form.
pub fn rotation_matrix(alpha: f64, beta: f64, gamma: f64) -> [[f64; 3]; 3] {
    let (ca, sa) = (alpha.cos(), alpha.sin());
    let (cb, sb) = (beta.cos(), beta.sin());
    let (cg, sg) = (gamma.cos(), gamma.sin());
    // R_z(a) R_y(b) R_z(g)
    [
        [ca * cb * cg - sa * sg, -ca * cb * sg - sa * cg, ca * sb],
        [sa * cb * cg + ca * sg, -sa * cb * sg + ca * cg, sa * sb],
        [-sb * cg, sb * sg, cb],
    ]
}

/// Apply a real 3x3 matrix to a complex Cartesian triplet.
pub fn apply_matrix(m: &[[f64; 3]; 3], v: [Complex64; 3]) -> [Complex64; 3] {
    let mut out = [Complex64::ZERO; 3];
    for (i, row) in m.iter().enumerate() {
        out[i] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
    }
    out
}

/// Complex 3-vector in the spherical basis, components indexed by
/// nu = -1, 0, +1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphericalVector {
    comps: [Complex64; 3],
}

impl SphericalVector {
    pub fn new(minus: Complex64, zero: Complex64, plus: Complex64) -> Self {
        SphericalVector {
            comps: [minus, zero, plus],
        }
    }

    pub fn from_cartesian(v: [Complex64; 3]) -> Self {
        to_spherical(v)
    }

    /// Component e_nu; nu must be -1, 0 or +1.
    pub fn component(&self, nu: i32) -> Complex64 {
        self.comps[(nu + 1) as usize]
    }

    /// Components ordered (nu = -1, 0, +1).
    pub fn components(&self) -> [Complex64; 3] {
        self.comps
    }

    pub fn norm_sq(&self) -> f64 {
        self.comps.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Inverse of [`to_spherical`]; the round trip is the identity.
    pub fn to_cartesian(&self) -> [Complex64; 3] {
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let [em, e0, ep] = self.comps;
        let vx = (em - ep) * inv_sqrt2;
        let vy = (em + ep) * Complex64::i() * inv_sqrt2;
        [vx, vy, e0]
    }
}

/// Covariant spherical components of a complex Cartesian vector:
/// e_{+1} = -(v_x + i v_y)/sqrt(2), e_0 = v_z, e_{-1} = (v_x - i v_y)/sqrt(2).
pub fn to_spherical(v: [Complex64; 3]) -> SphericalVector {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let [vx, vy, vz] = v;
    SphericalVector {
        comps: [
            (vx - Complex64::i() * vy) * inv_sqrt2,
            vz,
            -(vx + Complex64::i() * vy) * inv_sqrt2,
        ],
    }
}

/// Irreducible spherical tensor of rank X with 2X + 1 components indexed by
/// Xi = -X..X.
#[derive(Clone, Debug, PartialEq)]
pub struct IrreducibleTensor {
    rank: u32,
    comps: Vec<Complex64>,
}

impl IrreducibleTensor {
    pub fn new(rank: u32, comps: Vec<Complex64>) -> Result<Self> {
        if comps.len() != (2 * rank + 1) as usize {
            return Err(Error::domain(format!(
                "rank-{rank} tensor needs {} components, got {}",
                2 * rank + 1,
                comps.len()
            )));
        }
        Ok(IrreducibleTensor { rank, comps })
    }

    pub fn zero(rank: u32) -> Self {
        IrreducibleTensor {
            rank,
            comps: vec![Complex64::ZERO; (2 * rank + 1) as usize],
        }
    }

    /// Rank-1 tensor carrying the components of a spherical vector.
    pub fn from_vector(v: &SphericalVector) -> Self {
        IrreducibleTensor {
            rank: 1,
            comps: v.components().to_vec(),
        }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// Component T_Xi; Xi must satisfy |Xi| <= rank.
    pub fn component(&self, xi: i32) -> Complex64 {
        self.comps[(xi + self.rank as i32) as usize]
    }

    pub fn set_component(&mut self, xi: i32, value: Complex64) {
        self.comps[(xi + self.rank as i32) as usize] = value;
    }

    pub fn norm_sq(&self) -> f64 {
        self.comps.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Rotate an irreducible tensor by Euler angles (alpha, beta, gamma).
///
/// Components mix as t'_Xi = sum_{Xi'} exp(i Xi alpha) d^X_{Xi Xi'}(beta)
/// exp(i Xi' gamma) t_{Xi'}, the rank-X image of the Cartesian rotation
/// [`rotation_matrix`] under the component convention of [`to_spherical`].
pub fn rotate_tensor(
    t: &IrreducibleTensor,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> Result<IrreducibleTensor> {
    let x = t.rank;
    if 2 * x > TWICE_J_CAP {
        return Err(Error::domain(format!("rotation rank cap exceeded: {x}")));
    }
    let xi_range = -(x as i32)..=(x as i32);
    let mut out = IrreducibleTensor::zero(x);
    for xi in xi_range.clone() {
        let mut acc = Complex64::ZERO;
        for xi_p in xi_range.clone() {
            let d = small_d_int(x, xi, xi_p, beta);
            let phase = Complex64::new(0.0, f64::from(xi) * alpha).exp()
                * Complex64::new(0.0, f64::from(xi_p) * gamma).exp();
            acc += phase * d * t.component(xi_p);
        }
        out.set_component(xi, acc);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Independent oracle for |C|^2: the projector onto total J built from
    /// the matrix polynomial prod_{J' != J} (J^2 - J'(J'+1)) / (J(J+1) - J'(J'+1))
    /// applied to a product state, all assembled from ladder operators.
    fn cg_sq_projector_oracle(j1: u32, m1: i32, j2: u32, m2: i32, j: u32, m: i32) -> f64 {
        if m1 + m2 != m {
            return 0.0;
        }
        let d1 = (2 * j1 + 1) as usize;
        let d2 = (2 * j2 + 1) as usize;
        let dim = d1 * d2;
        let idx = |a: usize, b: usize| a * d2 + b;
        // J^2 = J1^2 + J2^2 + 2 J1z J2z + J1+ J2- + J1- J2+
        let mut jsq = vec![vec![0.0f64; dim]; dim];
        let mval = |j: u32, a: usize| a as f64 - j as f64;
        let up = |j: u32, mm: f64| ((j as f64) * (j as f64 + 1.0) - mm * (mm + 1.0)).sqrt();
        for a in 0..d1 {
            for b in 0..d2 {
                let (ma, mb) = (mval(j1, a), mval(j2, b));
                jsq[idx(a, b)][idx(a, b)] += (j1 * (j1 + 1) + j2 * (j2 + 1)) as f64 + 2.0 * ma * mb;
                if a + 1 < d1 && b > 0 {
                    jsq[idx(a + 1, b - 1)][idx(a, b)] += up(j1, ma) * up(j2, mb - 1.0);
                }
                if a > 0 && b + 1 < d2 {
                    jsq[idx(a - 1, b + 1)][idx(a, b)] += up(j1, ma - 1.0) * up(j2, mb);
                }
            }
        }
        let matvec = |mat: &Vec<Vec<f64>>, v: &Vec<f64>| -> Vec<f64> {
            (0..dim)
                .map(|r| (0..dim).map(|c| mat[r][c] * v[c]).sum())
                .collect()
        };
        let mut v = vec![0.0; dim];
        v[idx((m1 + j1 as i32) as usize, (m2 + j2 as i32) as usize)] = 1.0;
        let jmin = j1.abs_diff(j2);
        let jmax = j1 + j2;
        for jp in jmin..=jmax {
            if jp == j {
                continue;
            }
            let shifted = matvec(&jsq, &v)
                .iter()
                .zip(&v)
                .map(|(av, vv)| av - (jp * (jp + 1)) as f64 * vv)
                .collect::<Vec<_>>();
            let denom = (j * (j + 1)) as f64 - (jp * (jp + 1)) as f64;
            v = shifted.iter().map(|x| x / denom).collect();
        }
        // <product| P_J |product> = |C|^2
        v[idx((m1 + j1 as i32) as usize, (m2 + j2 as i32) as usize)]
    }

    #[test]
    fn cg_stretched_state() {
        assert_eq!(cg_int(1, 1, 1, 1, 2, 2), 1.0);
    }

    #[test]
    fn cg_odd_rank_identical_projections() {
        assert_eq!(cg_int(1, 0, 1, 0, 1, 0), 0.0);
    }

    #[test]
    fn cg_singlet_value() {
        // |C|^2 from the total-J^2 projector oracle, sign from the
        // Condon-Shortley convention.
        let expected_sq = cg_sq_projector_oracle(1, 0, 1, 0, 0, 0);
        assert_abs_diff_eq!(expected_sq, 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cg_int(1, 0, 1, 0, 0, 0), -(1.0f64 / 3.0).sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn cg_magnitudes_match_projector_oracle() {
        for (j1, j2) in [(1u32, 1u32), (1, 2), (2, 2)] {
            for j in j1.abs_diff(j2)..=(j1 + j2) {
                for m1 in -(j1 as i32)..=(j1 as i32) {
                    for m2 in -(j2 as i32)..=(j2 as i32) {
                        let m = m1 + m2;
                        if m.unsigned_abs() > j {
                            continue;
                        }
                        let c = cg_int(j1, m1, j2, m2, j, m);
                        let c2 = cg_sq_projector_oracle(j1, m1, j2, m2, j, m);
                        assert_abs_diff_eq!(c * c, c2, epsilon = 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn cg_parity_mismatch_is_domain_error() {
        let r = clebsch_gordan(
            HalfIntSpin::integer(1),
            Projection::from_twice(1), // m = 1/2 for j = 1
            HalfIntSpin::integer(1),
            Projection::integer(0),
            HalfIntSpin::integer(1),
            Projection::integer(0),
        );
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn cg_orthogonality_all_j_up_to_4() {
        // Half-integers included: 2j runs over 0..=8.
        for tj1 in 0..=8u32 {
            for tj2 in 0..=8u32 {
                let j1 = HalfIntSpin::from_twice(tj1);
                let j2 = HalfIntSpin::from_twice(tj2);
                for tjj in (tj1.abs_diff(tj2)..=(tj1 + tj2)).step_by(2) {
                    let jj = HalfIntSpin::from_twice(tjj);
                    for tjp in (tj1.abs_diff(tj2)..=(tj1 + tj2)).step_by(2) {
                        let jp = HalfIntSpin::from_twice(tjp);
                        for mm in jj.projections() {
                            for mp in jp.projections() {
                                let mut sum = 0.0;
                                for m1 in j1.projections() {
                                    for m2 in j2.projections() {
                                        sum += clebsch_gordan(j1, m1, j2, m2, jj, mm).unwrap()
                                            * clebsch_gordan(j1, m1, j2, m2, jp, mp).unwrap();
                                    }
                                }
                                let expect = if tjj == tjp && mm == mp { 1.0 } else { 0.0 };
                                assert_abs_diff_eq!(sum, expect, epsilon = 1e-12);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cg_exchange_symmetry_exact() {
        for tj1 in 0..=8u32 {
            for tj2 in 0..=8u32 {
                let j1 = HalfIntSpin::from_twice(tj1);
                let j2 = HalfIntSpin::from_twice(tj2);
                for tjj in (tj1.abs_diff(tj2)..=(tj1 + tj2)).step_by(2) {
                    let jj = HalfIntSpin::from_twice(tjj);
                    let phase_exp = (tj1 + tj2 - tjj) / 2;
                    let phase = if phase_exp % 2 == 0 { 1.0 } else { -1.0 };
                    for m1 in j1.projections() {
                        for m2 in j2.projections() {
                            let m = Projection::from_twice(m1.twice() + m2.twice());
                            let lhs = clebsch_gordan(j1, m1, j2, m2, jj, m).unwrap();
                            let rhs = clebsch_gordan(j2, m2, j1, m1, jj, m).unwrap();
                            assert_eq!(lhs, phase * rhs, "2j1={tj1} 2j2={tj2} 2J={tjj}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn small_d_identity_at_zero_angle() {
        for x in 0..=4u32 {
            for m1 in -(x as i32)..=(x as i32) {
                for m2 in -(x as i32)..=(x as i32) {
                    let expect = if m1 == m2 { 1.0 } else { 0.0 };
                    assert_abs_diff_eq!(small_d_int(x, m1, m2, 0.0), expect, epsilon = 1e-15);
                }
            }
        }
    }

    #[test]
    fn small_d_rank1_matches_spherical_rotation_matrix() {
        // Independent oracle: conjugate the Cartesian R_y(beta) into the
        // spherical basis and compare element by element.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let beta = rng.gen_range(-3.0..3.0);
            let r = rotation_matrix(0.0, beta, 0.0);
            for m1 in -1..=1i32 {
                for m2 in -1..=1i32 {
                    // column m2: rotate the basis vector whose covariant
                    // components are delta_{nu, m2}.
                    let basis = SphericalVector::new(
                        c64(f64::from(m2 == -1), 0.0),
                        c64(f64::from(m2 == 0), 0.0),
                        c64(f64::from(m2 == 1), 0.0),
                    );
                    let rotated = to_spherical(apply_matrix(&r, basis.to_cartesian()));
                    let expect = rotated.component(m1);
                    assert_abs_diff_eq!(expect.im, 0.0, epsilon = 1e-14);
                    assert_abs_diff_eq!(small_d_int(1, m1, m2, beta), expect.re, epsilon = 1e-13);
                }
            }
        }
        assert_abs_diff_eq!(small_d_int(1, 0, 0, 0.73), 0.73f64.cos(), epsilon = 1e-15);
    }

    #[test]
    fn small_d_rank2_legendre_value() {
        // d^2_00(beta) = P2(cos beta); at beta = pi/2 this is -1/2.
        assert_abs_diff_eq!(
            small_d_int(2, 0, 0, std::f64::consts::FRAC_PI_2),
            -0.5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn small_d_orthogonality_and_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for j in 0..=4u32 {
            for _ in 0..20 {
                let b1 = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
                let b2 = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
                let jr = j as i32;
                for m1 in -jr..=jr {
                    for m2 in -jr..=jr {
                        let dot: f64 = (-jr..=jr)
                            .map(|m| small_d_int(j, m1, m, b1) * small_d_int(j, m2, m, b1))
                            .sum();
                        let expect = if m1 == m2 { 1.0 } else { 0.0 };
                        assert_abs_diff_eq!(dot, expect, epsilon = 1e-12);

                        let composed: f64 = (-jr..=jr)
                            .map(|m| small_d_int(j, m1, m, b1) * small_d_int(j, m, m2, b2))
                            .sum();
                        assert_abs_diff_eq!(
                            composed,
                            small_d_int(j, m1, m2, b1 + b2),
                            epsilon = 1e-12
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn spherical_axis_examples() {
        let z = to_spherical([c64(0.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)]);
        assert_eq!(z.components(), [c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)]);

        let x = to_spherical([c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(x.component(-1).re, s, epsilon = 1e-15);
        assert_abs_diff_eq!(x.component(1).re, -s, epsilon = 1e-15);
        assert_abs_diff_eq!(x.component(0).norm(), 0.0, epsilon = 1e-15);

        // Circular (x + iy)/sqrt(2): the convention formula puts the whole
        // amplitude in the nu = -1 slot.
        let circ = to_spherical([c64(s, 0.0), c64(0.0, s), c64(0.0, 0.0)]);
        assert_abs_diff_eq!((circ.component(-1) - c64(1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(circ.component(0).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(circ.component(1).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn spherical_round_trip_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let v = [
                c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            ];
            let back = to_spherical(v).to_cartesian();
            for (a, b) in v.iter().zip(back.iter()) {
                assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn rotate_tensor_rank0_invariant_and_identity_angles() {
        let t0 = IrreducibleTensor::new(0, vec![c64(0.7, -0.2)]).unwrap();
        let r = rotate_tensor(&t0, 1.1, 2.2, -0.4).unwrap();
        assert_abs_diff_eq!((r.component(0) - t0.component(0)).norm(), 0.0, epsilon = 1e-15);

        let t2 = IrreducibleTensor::new(
            2,
            vec![c64(0.1, 0.2), c64(-0.3, 0.0), c64(0.4, 0.5), c64(0.0, -0.1), c64(0.2, 0.2)],
        )
        .unwrap();
        let r2 = rotate_tensor(&t2, 0.0, 0.0, 0.0).unwrap();
        for xi in -2..=2 {
            assert_abs_diff_eq!((r2.component(xi) - t2.component(xi)).norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn rotate_tensor_z_to_x() {
        let z = to_spherical([c64(0.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)]);
        let x = to_spherical([c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]);
        let rotated = rotate_tensor(
            &IrreducibleTensor::from_vector(&z),
            0.0,
            std::f64::consts::FRAC_PI_2,
            0.0,
        )
        .unwrap();
        for xi in -1..=1 {
            assert_abs_diff_eq!((rotated.component(xi) - x.component(xi)).norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn rotate_tensor_preserves_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for rank in 0..=4u32 {
            let comps: Vec<Complex64> = (0..(2 * rank + 1))
                .map(|_| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let t = IrreducibleTensor::new(rank, comps).unwrap();
            for _ in 0..10 {
                let (a, b, g) = (
                    rng.gen_range(0.0..std::f64::consts::TAU),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                );
                let r = rotate_tensor(&t, a, b, g).unwrap();
                assert_abs_diff_eq!(r.norm_sq(), t.norm_sq(), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn rank1_rotation_consistent_with_cartesian_rotation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let (a, b, g) = (
                rng.gen_range(0.0..std::f64::consts::TAU),
                rng.gen_range(0.0..std::f64::consts::TAU),
                rng.gen_range(0.0..std::f64::consts::TAU),
            );
            let v = [
                c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            ];
            let via_tensor = rotate_tensor(&IrreducibleTensor::from_vector(&to_spherical(v)), a, b, g)
                .unwrap();
            let via_cartesian = to_spherical(apply_matrix(&rotation_matrix(a, b, g), v));
            for xi in -1..=1 {
                assert_abs_diff_eq!(
                    (via_tensor.component(xi) - via_cartesian.component(xi)).norm(),
                    0.0,
                    epsilon = 1e-13
                );
            }
        }
    }
}
