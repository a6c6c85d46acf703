//! Wigner phases of the massless little group.
//!
//! A Lorentz transformation taking the null direction `p` to `Λp` acts
//! on helicity eigenstates through a phase `exp(-i σ θ)`. The angle θ
//! is the rotation part of the stabilizer element
//! `W = L(Λp)⁻¹ Λ L(p)`, an element of the Euclidean group fixing the
//! standard momentum; its noncompact translation parameters carry no
//! physics and are discarded. The standard transform `L(p)` is chosen
//! as the pure rotation `rz(phi)·ry(theta)` taking the standard
//! direction to `p`, which is enough because all momenta carry unit
//! energy.
//!
//! Closed forms exist for the three generators: y-rotations produce a
//! nontrivial angle, z-rotations and z-boosts produce none (away from
//! the standard direction itself). [`wigner_angle_numeric`] extracts
//! the angle for arbitrary transformations and doubles as the oracle
//! the closed forms are validated against.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::helicity::Helicity;
use crate::kinematics::{FourMomentum, LorentzTransform};
use crate::tol;

/// Rotation angle of a little-group element, reduced to `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerPhase {
    pub angle: f64,
}

impl WignerPhase {
    pub fn new(angle: f64) -> Self {
        Self {
            angle: reduce(angle),
        }
    }

    /// Phase factor `exp(-i σ θ)` applied to a helicity eigenstate.
    pub fn factor(&self, sigma: Helicity) -> Complex64 {
        Complex64::new(0.0, -sigma.sign() * self.angle).exp()
    }
}

/// Reduces an angle to `(-pi, pi]`.
pub fn reduce(angle: f64) -> f64 {
    let a = angle.rem_euclid(2.0 * PI);
    if a > PI {
        a - 2.0 * PI
    } else {
        a
    }
}

/// Distance between two angles modulo 2π.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    reduce(a - b).abs()
}

/// Standard transform `L(p) = rz(phi)·ry(theta)` taking the standard
/// direction to `p`.
pub fn standard_transform(p: &FourMomentum) -> LorentzTransform {
    LorentzTransform::rz(p.phi())
        .expect("stored azimuth is finite")
        .compose(&LorentzTransform::ry(p.theta()).expect("stored polar angle is finite"))
}

/// Wigner angle induced by `ry(varpi)` on the direction
/// `(theta, phi)`:
/// `atan2(sin varpi sin phi, sin varpi cos theta cos phi + cos varpi sin theta)`.
///
/// The two-argument arctangent fixes the branch; agreement with the
/// stabilizer extraction is checked property-wise.
pub fn wigner_angle_ry(varpi: f64, theta: f64, phi: f64) -> Result<f64> {
    if !varpi.is_finite() || !theta.is_finite() || !phi.is_finite() {
        return Err(Error::NonFinite("wigner_angle_ry"));
    }
    let numerator = varpi.sin() * phi.sin();
    let denominator = varpi.sin() * theta.cos() * phi.cos() + varpi.cos() * theta.sin();
    if denominator.abs() < tol::WIGNER_DENOMINATOR {
        return Err(Error::WignerSingular { varpi, theta, phi });
    }
    Ok(reduce(numerator.atan2(denominator)))
}

/// Wigner angle induced by `rz(lambda)`: zero for every direction other
/// than the standard one, which is excluded.
pub fn wigner_angle_rz(lambda: f64, p: &FourMomentum) -> Result<f64> {
    if !lambda.is_finite() {
        return Err(Error::NonFinite("wigner_angle_rz"));
    }
    if p.is_standard(tol::STANDARD_DIRECTION) {
        return Err(Error::ExcludedDirection(p.theta()));
    }
    Ok(0.0)
}

/// Wigner angle induced by `bz(eta)`: zero for every direction.
pub fn wigner_angle_bz(eta: f64, _p: &FourMomentum) -> Result<f64> {
    if !eta.is_finite() {
        return Err(Error::NonFinite("wigner_angle_bz"));
    }
    Ok(0.0)
}

/// Extracts the Wigner angle of an arbitrary transformation at `p` from
/// the stabilizer element `W = L(Λp)⁻¹ Λ L(p)`.
///
/// `W` fixes the standard momentum; its transverse spatial block is the
/// rotation part, read off as `atan2(W[2][1], W[1][1])`. The remaining
/// translation parameters of the Euclidean stabilizer are discarded.
pub fn wigner_angle_numeric(transform: &LorentzTransform, p: &FourMomentum) -> Result<f64> {
    let q = transform.apply(p);
    let w = standard_transform(&q)
        .inverse()
        .compose(transform)
        .compose(&standard_transform(p));
    let k = FourMomentum::standard().cartesian();
    // With L(p) a pure rotation, W scales k by the Doppler factor of the
    // transformation; the stabilizer condition is on the ray.
    let image = w.matrix() * k;
    let residual = if image[0] > 0.0 {
        (image / image[0] - k).amax()
    } else {
        f64::INFINITY
    };
    if residual > tol::STABILIZER {
        return Err(Error::StabilizerResidual(residual));
    }
    Ok(reduce(w.matrix()[(2, 1)].atan2(w.matrix()[(1, 1)])))
}
