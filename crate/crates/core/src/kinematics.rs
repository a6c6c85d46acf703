//! Null four-momenta and proper orthochronous Lorentz transformations.
//!
//! Momenta live on the future light cone, normalized to unit energy, so
//! a direction `(theta, phi)` fixes the four-vector
//! `(1, sin(theta)cos(phi), sin(theta)sin(phi), cos(theta))` completely.
//! Transformations are built from three generators: rotations about the
//! z and y axes and boosts along z. Applying a transformation to a
//! momentum renormalizes the result back to unit energy; the discarded
//! scale is the Doppler factor, reported separately.

use std::f64::consts::{PI, TAU};
use std::fmt;

use nalgebra::{Matrix4, Vector3, Vector4};

use crate::error::{Error, Result};
use crate::tol;

/// Minkowski metric with signature `(-+++)`.
pub fn metric() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 1.0, 1.0))
}

/// Direction on the future light cone with `p^0 = 1`.
///
/// `theta` is the polar angle in `[0, pi]`, `phi` the azimuth reduced to
/// `[0, 2pi)`. At the poles the azimuth is undefined and stored as 0 as
/// a normal form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourMomentum {
    theta: f64,
    phi: f64,
}

impl FourMomentum {
    /// Builds a momentum from its polar angles.
    pub fn from_angles(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::NonFinite("from_angles"));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::PolarRange(theta));
        }
        Ok(Self::normalized(theta, phi))
    }

    /// Builds a momentum from arbitrary real angles, folding them onto
    /// the canonical chart `theta in [0, pi]`, `phi in [0, 2pi)`.
    pub fn from_angles_wrapping(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::NonFinite("from_angles_wrapping"));
        }
        let mut t = theta.rem_euclid(TAU);
        let mut f = phi;
        if t > PI {
            t = TAU - t;
            f += PI;
        }
        Ok(Self::normalized(t, f))
    }

    fn normalized(theta: f64, phi: f64) -> Self {
        let at_pole = theta == 0.0 || theta == PI || theta.sin() == 0.0;
        let phi = if at_pole { 0.0 } else { phi.rem_euclid(TAU) };
        Self { theta, phi }
    }

    /// The standard momentum `k`, pointing along z.
    pub fn standard() -> Self {
        Self {
            theta: 0.0,
            phi: 0.0,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Components `(1, sin t cos f, sin t sin f, cos t)`.
    pub fn cartesian(&self) -> Vector4<f64> {
        let (st, ct) = (self.theta.sin(), self.theta.cos());
        let (sf, cf) = (self.phi.sin(), self.phi.cos());
        Vector4::new(1.0, st * cf, st * sf, ct)
    }

    /// Spatial part of [`Self::cartesian`].
    pub fn spatial(&self) -> Vector3<f64> {
        let c = self.cartesian();
        Vector3::new(c[1], c[2], c[3])
    }

    /// Minkowski norm `p_mu p^mu`; zero up to rounding by construction.
    pub fn norm_sqr(&self) -> f64 {
        let p = self.cartesian();
        -p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]
    }

    /// True when the direction lies within `tol` (on the polar angle) of
    /// the standard momentum.
    pub fn is_standard(&self, tol: f64) -> bool {
        self.theta.abs() < tol
    }

    /// Componentwise comparison of the Cartesian forms.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let d = self.cartesian() - other.cartesian();
        d.amax() <= tol
    }

    /// Recovers the canonical momentum closest to an explicit null
    /// four-vector with positive energy.
    pub(crate) fn from_cartesian(v: &Vector4<f64>) -> Self {
        let spatial = Vector3::new(v[1], v[2], v[3]);
        let r = spatial.norm();
        let ct = (v[3] / r).clamp(-1.0, 1.0);
        let theta = ct.acos();
        let rho = v[1].hypot(v[2]);
        let phi = if rho == 0.0 { 0.0 } else { v[2].atan2(v[1]) };
        Self::normalized(theta, phi)
    }
}

/// One generator application in a composition, leftmost factor acting
/// last.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Factor {
    Rz(f64),
    Ry(f64),
    Bz(f64),
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Rz(a) => write!(f, "rz({a})"),
            Factor::Ry(a) => write!(f, "ry({a})"),
            Factor::Bz(a) => write!(f, "bz({a})"),
        }
    }
}

/// Real 4x4 matrix of the proper orthochronous Lorentz group, together
/// with the generator sequence it was composed from (when known).
#[derive(Debug, Clone, PartialEq)]
pub struct LorentzTransform {
    m: Matrix4<f64>,
    factors: Vec<Factor>,
}

impl LorentzTransform {
    pub fn identity() -> Self {
        Self {
            m: Matrix4::identity(),
            factors: Vec::new(),
        }
    }

    /// Rotation about the z axis through `lambda` (active convention:
    /// azimuths increase by `lambda`).
    pub fn rz(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::NonFinite("rz"));
        }
        let (s, c) = lambda.sin_cos();
        let mut m = Matrix4::identity();
        m[(1, 1)] = c;
        m[(1, 2)] = -s;
        m[(2, 1)] = s;
        m[(2, 2)] = c;
        Ok(Self {
            m,
            factors: vec![Factor::Rz(lambda)],
        })
    }

    /// Rotation about the y axis through `varpi`; takes the z direction
    /// toward positive x.
    pub fn ry(varpi: f64) -> Result<Self> {
        if !varpi.is_finite() {
            return Err(Error::NonFinite("ry"));
        }
        let (s, c) = varpi.sin_cos();
        let mut m = Matrix4::identity();
        m[(1, 1)] = c;
        m[(1, 3)] = s;
        m[(3, 1)] = -s;
        m[(3, 3)] = c;
        Ok(Self {
            m,
            factors: vec![Factor::Ry(varpi)],
        })
    }

    /// Boost along z with rapidity `eta` (`v = tanh eta`).
    pub fn bz(eta: f64) -> Result<Self> {
        if !eta.is_finite() {
            return Err(Error::NonFinite("bz"));
        }
        if eta.abs() > tol::MAX_RAPIDITY {
            return Err(Error::RapidityRange {
                eta,
                max: tol::MAX_RAPIDITY,
            });
        }
        let (sh, ch) = (eta.sinh(), eta.cosh());
        let mut m = Matrix4::identity();
        m[(0, 0)] = ch;
        m[(0, 3)] = sh;
        m[(3, 0)] = sh;
        m[(3, 3)] = ch;
        Ok(Self {
            m,
            factors: vec![Factor::Bz(eta)],
        })
    }

    /// Builds the normal form `rz(lambda) · ry(varpi) · bz(eta)`; the
    /// boost acts first.
    pub fn normal_form(lambda: f64, varpi: f64, eta: f64) -> Result<Self> {
        Ok(Self::rz(lambda)?
            .compose(&Self::ry(varpi)?)
            .compose(&Self::bz(eta)?))
    }

    /// Matrix product `self · other`: `other` acts first.
    pub fn compose(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Self {
            m: self.m * other.m,
            factors,
        }
    }

    /// Group inverse, computed as `g mᵀ g`.
    pub fn inverse(&self) -> Self {
        let g = metric();
        let factors = self
            .factors
            .iter()
            .rev()
            .map(|f| match *f {
                Factor::Rz(a) => Factor::Rz(-a),
                Factor::Ry(a) => Factor::Ry(-a),
                Factor::Bz(a) => Factor::Bz(-a),
            })
            .collect();
        Self {
            m: g * self.m.transpose() * g,
            factors,
        }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.m
    }

    /// Generator sequence, when the transform was built compositionally.
    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Largest entry of `mᵀ g m − g`.
    pub fn metric_residual(&self) -> f64 {
        let g = metric();
        (self.m.transpose() * g * self.m - g).amax()
    }

    /// Checks metric preservation, unit determinant and orthochronicity.
    ///
    /// Residuals are compared against `tol` scaled by the squared
    /// magnitude of the matrix: rounding in `mᵀ g m` grows with the
    /// entries, which large rapidities make exponentially big.
    pub fn is_lorentz(&self, tol: f64) -> bool {
        let scale = self.m.amax().powi(2).max(1.0);
        self.metric_residual() <= tol * scale
            && (self.m.determinant() - 1.0).abs() <= tol * scale * scale
            && self.m[(0, 0)] >= 1.0 - tol * scale
    }

    /// Applies the transformation and renormalizes to unit energy.
    pub fn apply(&self, p: &FourMomentum) -> FourMomentum {
        self.apply_with_doppler(p).0
    }

    /// As [`Self::apply`], also returning the pre-normalization energy
    /// (the Doppler factor suppressed by the renormalization).
    pub fn apply_with_doppler(&self, p: &FourMomentum) -> (FourMomentum, f64) {
        let q = self.m * p.cartesian();
        debug_assert!(q[0] > 0.0, "orthochronous transform left the future cone");
        (FourMomentum::from_cartesian(&q), q[0])
    }
}

impl fmt::Display for LorentzTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "identity");
        }
        let mut first = true;
        for factor in &self.factors {
            if !first {
                write!(f, "·")?;
            }
            write!(f, "{factor}")?;
            first = false;
        }
        Ok(())
    }
}
