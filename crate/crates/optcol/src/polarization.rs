//! Irreducible polarization tensors Phi_{X Xi}(e, e') for the two-photon
//! cross-section contraction, and the four restricted mode-pair quadruples
//! of a two-mode source.
//!
//! The tensor is bilinear in the amplitude vector e and the conjugate-slot
//! vector e',
//!
//! ```text
//! Phi_{X Xi}(e, e') = - sum_{nu, nu'} C^{X Xi}_{1 nu' 1 nu} (e')_{nu'} (e)_{nu},
//! ```
//!
//! over the covariant spherical components of both vectors, the two printed
//! forms of the definition being related by raising the primed index. Under
//! a common rotation of both vectors Phi transforms as a rank-X irreducible
//! tensor through [`crate::angular::rotate_tensor`].

use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::angular::{cg_int, to_spherical, IrreducibleTensor, SphericalVector};
use crate::error::{Error, Result};

/// Complex unit polarization vector, stored in Cartesian form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarizationVector {
    cart: [Complex64; 3],
}

impl PolarizationVector {
    pub fn from_cartesian(cart: [Complex64; 3]) -> Self {
        PolarizationVector { cart }
    }

    pub fn x_hat() -> Self {
        Self::from_cartesian([Complex64::ONE, Complex64::ZERO, Complex64::ZERO])
    }

    pub fn y_hat() -> Self {
        Self::from_cartesian([Complex64::ZERO, Complex64::ONE, Complex64::ZERO])
    }

    pub fn z_hat() -> Self {
        Self::from_cartesian([Complex64::ZERO, Complex64::ZERO, Complex64::ONE])
    }

    /// Linear polarization at `angle` from x toward y in the x-y plane.
    pub fn linear(angle: f64) -> Self {
        Self::from_cartesian([
            Complex64::from(angle.cos()),
            Complex64::from(angle.sin()),
            Complex64::ZERO,
        ])
    }

    pub fn cartesian(&self) -> [Complex64; 3] {
        self.cart
    }

    pub fn spherical(&self) -> SphericalVector {
        to_spherical(self.cart)
    }

    pub fn norm_sq(&self) -> f64 {
        self.cart.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Hermitian inner product <self|other>.
    pub fn dot_conj(&self, other: &PolarizationVector) -> Complex64 {
        self.cart
            .iter()
            .zip(other.cart.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Polarization mode label of the two-mode source.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModePolarization {
    X,
    Y,
}

impl fmt::Display for ModePolarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModePolarization::X => write!(f, "x"),
            ModePolarization::Y => write!(f, "y"),
        }
    }
}

/// The four mode-pair quadruples (p1 p2 | p1' p2') allowed by the
/// restriction p1 != p2, p1' != p2'.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuadrupleLabel {
    XyXy,
    XyYx,
    YxXy,
    YxYx,
}

impl QuadrupleLabel {
    pub const ALL: [QuadrupleLabel; 4] = [
        QuadrupleLabel::XyXy,
        QuadrupleLabel::XyYx,
        QuadrupleLabel::YxXy,
        QuadrupleLabel::YxYx,
    ];

    /// Labels (p1, p2, p1', p2').
    pub fn labels(self) -> (ModePolarization, ModePolarization, ModePolarization, ModePolarization) {
        use ModePolarization::{X, Y};
        match self {
            QuadrupleLabel::XyXy => (X, Y, X, Y),
            QuadrupleLabel::XyYx => (X, Y, Y, X),
            QuadrupleLabel::YxXy => (Y, X, X, Y),
            QuadrupleLabel::YxYx => (Y, X, Y, X),
        }
    }

    pub fn index(self) -> usize {
        match self {
            QuadrupleLabel::XyXy => 0,
            QuadrupleLabel::XyYx => 1,
            QuadrupleLabel::YxXy => 2,
            QuadrupleLabel::YxYx => 3,
        }
    }
}

impl fmt::Display for QuadrupleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p1, p2, p1p, p2p) = self.labels();
        write!(f, "{p1}{p2}|{p1p}{p2p}")
    }
}

/// One term of the mode-pair expansion: the labels and the four
/// polarization vectors (e1, e2, e1', e2').
#[derive(Clone, Copy, Debug)]
pub struct ModeQuadruple {
    pub label: QuadrupleLabel,
    pub e1: PolarizationVector,
    pub e2: PolarizationVector,
    pub e1_prime: PolarizationVector,
    pub e2_prime: PolarizationVector,
}

/// Enumerate the four restricted quadruples over an orthonormal mode basis,
/// in the deterministic order (xy|xy), (xy|yx), (yx|xy), (yx|yx).
pub fn enumerate_mode_quadruples(
    basis: (&PolarizationVector, &PolarizationVector),
) -> Result<Vec<ModeQuadruple>> {
    let (ex, ey) = basis;
    let tol = 1e-12;
    if (ex.norm_sq() - 1.0).abs() > tol || (ey.norm_sq() - 1.0).abs() > tol {
        return Err(Error::domain("mode basis vectors must be unit vectors"));
    }
    if ex.dot_conj(ey).norm() > tol {
        return Err(Error::domain("mode basis vectors must be orthogonal"));
    }
    let pick = |p: ModePolarization| match p {
        ModePolarization::X => *ex,
        ModePolarization::Y => *ey,
    };
    Ok(QuadrupleLabel::ALL
        .iter()
        .map(|&label| {
            let (p1, p2, p1p, p2p) = label.labels();
            ModeQuadruple {
                label,
                e1: pick(p1),
                e2: pick(p2),
                e1_prime: pick(p1p),
                e2_prime: pick(p2p),
            }
        })
        .collect())
}

/// Cached C^{X Xi}_{1 nu' 1 nu} for X <= 2, indexed [X][Xi + X][nu' + 1][nu + 1].
fn cg11_table() -> &'static [Vec<[[f64; 3]; 3]>; 3] {
    static TABLE: OnceLock<[Vec<[[f64; 3]; 3]>; 3]> = OnceLock::new();
    TABLE.get_or_init(|| {
        std::array::from_fn(|x| {
            let x_i = x as i32;
            (-x_i..=x_i)
                .map(|xi| {
                    let mut block = [[0.0; 3]; 3];
                    for nu_p in -1..=1i32 {
                        for nu in -1..=1i32 {
                            block[(nu_p + 1) as usize][(nu + 1) as usize] =
                                cg_int(1, nu_p, 1, nu, x as u32, xi);
                        }
                    }
                    block
                })
                .collect()
        })
    })
}

/// Irreducible polarization tensor Phi_{X Xi}(e, e') of rank X in {0, 1, 2}.
///
/// `e` is the amplitude-slot vector and `e_prime` the conjugate-slot
/// vector; the overall leading minus sign of the definition is retained.
pub fn phi_tensor(e: &SphericalVector, e_prime: &SphericalVector, x: u32) -> Result<IrreducibleTensor> {
    if x > 2 {
        return Err(Error::domain(format!(
            "two rank-1 photons couple to at most rank 2, got X = {x}"
        )));
    }
    let table = &cg11_table()[x as usize];
    let mut out = IrreducibleTensor::zero(x);
    for xi in -(x as i32)..=(x as i32) {
        let block = &table[(xi + x as i32) as usize];
        let mut acc = Complex64::ZERO;
        for nu_p in -1..=1i32 {
            for nu in -1..=1i32 {
                let c = block[(nu_p + 1) as usize][(nu + 1) as usize];
                if c != 0.0 {
                    acc += c * e_prime.component(nu_p) * e.component(nu);
                }
            }
        }
        out.set_component(xi, -acc);
    }
    Ok(out)
}
