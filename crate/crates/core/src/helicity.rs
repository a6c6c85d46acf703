//! Helicity triads and the transverse polarization projection.
//!
//! States are kept in the helicity basis throughout: the basis-change
//! matrix `S` maps them to linear polarization components when needed
//! (completeness checks, four-vector form). "Flooring" a triad applies
//! the rank-2 projector onto the plane transverse to the standard
//! direction, i.e. drops the third helicity component, and renormalizes;
//! the lost squared norm is the per-mode detection weight.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{Matrix3, Vector2, Vector3, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kinematics::{FourMomentum, LorentzTransform};
use crate::tol;

/// Helicity quantum number of a photon, `sigma = ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Helicity {
    Plus,
    Minus,
}

impl Helicity {
    pub fn sign(self) -> f64 {
        match self {
            Helicity::Plus => 1.0,
            Helicity::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Helicity::Plus => Helicity::Minus,
            Helicity::Minus => Helicity::Plus,
        }
    }
}

fn cis(phi: f64) -> Complex64 {
    Complex64::new(phi.cos(), phi.sin())
}

/// Unitary change of basis from helicity to linear polarization
/// components for the standard direction.
pub fn s_matrix() -> Matrix3<Complex64> {
    let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let i = Complex64::new(0.0, FRAC_1_SQRT_2);
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    Matrix3::new(
        r, -i, zero, //
        r, i, zero, //
        zero, zero, one,
    )
}

/// Inverse of [`s_matrix`]; equal to its adjoint since `S` is unitary.
pub fn s_matrix_inv() -> Matrix3<Complex64> {
    s_matrix().adjoint()
}

/// Rotation operator in the helicity basis for the direction
/// `(theta, phi)`. Columns are the images of the helicity eigenstates
/// of the standard direction; equals `S · rz(phi) ry(theta) · S⁻¹`.
pub fn helicity_rotation(theta: f64, phi: f64) -> Matrix3<Complex64> {
    let c = theta.cos();
    let s = theta.sin();
    let em = cis(-phi);
    let ep = cis(phi);
    let sqrt2 = 2.0_f64.sqrt();
    Matrix3::new(
        0.5 * (c + 1.0) * em,
        0.5 * (c - 1.0) * em,
        0.5 * sqrt2 * s * em,
        0.5 * (c - 1.0) * ep,
        0.5 * (c + 1.0) * ep,
        0.5 * sqrt2 * s * ep,
        Complex64::new(-0.5 * sqrt2 * s, 0.0),
        Complex64::new(-0.5 * sqrt2 * s, 0.0),
        Complex64::new(c, 0.0),
    )
}

/// Helicity eigenstate of a momentum direction, stored as its three
/// helicity-basis components.
#[derive(Debug, Clone, PartialEq)]
pub struct HelicityTriad {
    pub v: Vector3<Complex64>,
    pub p: FourMomentum,
    pub sigma: Helicity,
}

/// Helicity eigenstate for direction `p`:
/// `(1/2)((cos t ± 1)e^{-i f}, (cos t ∓ 1)e^{i f}, -√2 sin t)`.
pub fn triad(p: &FourMomentum, sigma: Helicity) -> HelicityTriad {
    let (theta, phi) = (p.theta(), p.phi());
    let c = theta.cos();
    let s = theta.sin();
    let sg = sigma.sign();
    let v = Vector3::new(
        0.5 * (c + sg) * cis(-phi),
        0.5 * (c - sg) * cis(phi),
        Complex64::new(-0.5 * 2.0_f64.sqrt() * s, 0.0),
    );
    HelicityTriad { v, p: *p, sigma }
}

impl HelicityTriad {
    /// Components in the linear polarization (Cartesian) basis.
    pub fn linear_components(&self) -> Vector3<Complex64> {
        s_matrix_inv() * self.v
    }
}

/// Rank-2 projector onto the plane transverse to `p`,
/// `delta_ij - p_i p_j / |p|²`.
pub fn transverse_projector(p: &FourMomentum) -> Matrix3<f64> {
    let n = p.spatial();
    Matrix3::identity() - n * n.transpose() / n.norm_squared()
}

/// Per-mode detection weight retained by flooring a triad at polar
/// angle `theta`: `(1 + cos² theta)/2`.
pub fn floor_weight(theta: f64) -> f64 {
    let c = theta.cos();
    0.5 * (1.0 + c * c)
}

/// Result of projecting a triad onto the transverse plane of the
/// standard direction and renormalizing.
#[derive(Debug, Clone, PartialEq)]
pub struct FlooredKet {
    pub v: Vector2<Complex64>,
    pub p: FourMomentum,
    pub sigma: Helicity,
}

/// Drops the longitudinal helicity component and renormalizes.
///
/// Returns the floored ket together with the detection weight (the
/// squared norm removed by the projection is `1 - weight`).
pub fn floor(triad: &HelicityTriad) -> Result<(FlooredKet, f64)> {
    let raw = Vector2::new(triad.v[0], triad.v[1]);
    let weight = raw.norm_squared();
    if weight < tol::NULL_OUTCOME {
        return Err(Error::Degenerate("floored ket vanished"));
    }
    let v = raw / Complex64::new(weight.sqrt(), 0.0);
    Ok((
        FlooredKet {
            v,
            p: triad.p,
            sigma: triad.sigma,
        },
        weight,
    ))
}

/// Complex polarization four-vector attached to a momentum with unit
/// energy.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarizationFourVector {
    pub eps: Vector4<Complex64>,
    pub p: FourMomentum,
}

impl PolarizationFourVector {
    /// Four-vector form of a triad: zero time component, spatial part in
    /// the linear polarization basis.
    pub fn from_triad(triad: &HelicityTriad) -> Self {
        let lin = triad.linear_components();
        let eps = Vector4::new(Complex64::new(0.0, 0.0), lin[0], lin[1], lin[2]);
        Self { eps, p: triad.p }
    }

    /// Applies a Lorentz transformation to both the four-vector and its
    /// momentum (the momentum is renormalized, the polarization is not).
    pub fn transformed(&self, t: &LorentzTransform) -> Self {
        let m = t.matrix();
        let re = m * self.eps.map(|z| z.re);
        let im = m * self.eps.map(|z| z.im);
        let eps = Vector4::from_fn(|i, _| Complex64::new(re[i], im[i]));
        Self {
            eps,
            p: t.apply(&self.p),
        }
    }

    /// Restores the radiation gauge after a transformation:
    /// `eps -> eps - (eps^0 / q^0) q` with `q^0 = 1`.
    pub fn gauge_fix(&self) -> Self {
        let g = self.eps[0];
        let q = self.p.cartesian();
        let eps = Vector4::from_fn(|i, _| self.eps[i] - g * Complex64::new(q[i], 0.0));
        Self { eps, p: self.p }
    }

    /// Max of `|eps^0|` and `|q · eps|` (spatial); zero in the gauge.
    pub fn transversality_residual(&self) -> f64 {
        let q = self.p.spatial();
        let dot = (1..4)
            .map(|i| self.eps[i] * Complex64::new(q[i - 1], 0.0))
            .sum::<Complex64>();
        self.eps[0].norm().max(dot.norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::LorentzTransform;
    use nalgebra::Matrix3;
    use proptest::prelude::*;
    use std::f64::consts::{PI, TAU};

    const TOL: f64 = tol::GEOMETRY;

    fn unitarity_residual(m: &Matrix3<Complex64>) -> f64 {
        let id = Matrix3::<Complex64>::identity();
        (m * m.adjoint() - id).map(|z| z.norm()).max()
    }

    #[test]
    fn s_matrix_is_unitary() {
        assert!(unitarity_residual(&s_matrix()) < TOL);
    }

    #[test]
    fn helicity_rotation_identity_at_origin() {
        let r = helicity_rotation(0.0, 0.0);
        assert!((r - Matrix3::identity()).map(|z| z.norm()).max() < TOL);
    }

    #[test]
    fn helicity_rotation_matches_conjugated_spatial_rotation() {
        // Second algebraic route: S · rz(phi) ry(theta) · S⁻¹.
        for (theta, phi) in [(0.4, 1.3), (2.2, 5.9), (PI / 2.0, 0.0), (3.0, 2.0)] {
            let rz = LorentzTransform::rz(phi).unwrap();
            let ry = LorentzTransform::ry(theta).unwrap();
            let spatial = (rz.compose(&ry).matrix())
                .fixed_view::<3, 3>(1, 1)
                .map(|x| Complex64::new(x, 0.0));
            let conjugated = s_matrix() * spatial * s_matrix_inv();
            let direct = helicity_rotation(theta, phi);
            assert!(
                (conjugated - direct).map(|z| z.norm()).max() < TOL,
                "theta={theta} phi={phi}"
            );
        }
    }

    #[test]
    fn rotation_columns_are_the_triads() {
        let p = FourMomentum::from_angles(1.1, 2.3).unwrap();
        let r = helicity_rotation(p.theta(), p.phi());
        let plus = triad(&p, Helicity::Plus);
        let minus = triad(&p, Helicity::Minus);
        assert!((r.column(0) - plus.v).map(|z| z.norm()).max() < TOL);
        assert!((r.column(1) - minus.v).map(|z| z.norm()).max() < TOL);
    }

    #[test]
    fn triad_at_standard_direction() {
        let k = FourMomentum::standard();
        let t = triad(&k, Helicity::Plus);
        assert!((t.v[0] - Complex64::new(1.0, 0.0)).norm() < TOL);
        assert!(t.v[1].norm() < TOL);
        assert!(t.v[2].norm() < TOL);
    }

    #[test]
    fn triad_at_south_pole() {
        let p = FourMomentum::from_angles(PI, 0.0).unwrap();
        let t = triad(&p, Helicity::Plus);
        let expected = Vector3::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 0.0),
        );
        assert!((t.v - expected).map(|z| z.norm()).max() < TOL);
    }

    #[test]
    fn projector_at_standard_direction() {
        let pi_k = transverse_projector(&FourMomentum::standard());
        let expected = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, 0.0));
        assert!((pi_k - expected).amax() < TOL);
    }

    #[test]
    fn floor_at_standard_direction() {
        let k = FourMomentum::standard();
        let (ket, w) = floor(&triad(&k, Helicity::Plus)).unwrap();
        assert!((ket.v[0] - Complex64::new(1.0, 0.0)).norm() < TOL);
        assert!(ket.v[1].norm() < TOL);
        assert!((w - 1.0).abs() < TOL);
    }

    #[test]
    fn floor_at_equator() {
        let p = FourMomentum::from_angles(PI / 2.0, 0.0).unwrap();
        let (ket, w) = floor(&triad(&p, Helicity::Plus)).unwrap();
        let r = FRAC_1_SQRT_2;
        assert!((ket.v[0] - Complex64::new(r, 0.0)).norm() < TOL);
        assert!((ket.v[1] - Complex64::new(-r, 0.0)).norm() < TOL);
        assert!((w - 0.5).abs() < TOL);

        // Opposite-helicity floored kets are anti-parallel here.
        let (ket_m, _) = floor(&triad(&p, Helicity::Minus)).unwrap();
        let overlap = ket.v.dotc(&ket_m.v);
        assert!((overlap - Complex64::new(-1.0, 0.0)).norm() < TOL);
    }

    #[test]
    fn gauge_fix_is_idempotent_on_transverse_input() {
        let p = FourMomentum::from_angles(0.8, 0.3).unwrap();
        let eps = PolarizationFourVector::from_triad(&triad(&p, Helicity::Plus));
        assert!(eps.transversality_residual() < TOL);
        let fixed = eps.gauge_fix();
        assert!((fixed.eps - eps.eps).map(|z| z.norm()).max() < TOL);
    }

    #[test]
    fn boosted_polarization_regains_transversality() {
        let p = FourMomentum::from_angles(PI / 2.0, 0.0).unwrap();
        let boost = LorentzTransform::bz(1.0).unwrap();
        for sigma in [Helicity::Plus, Helicity::Minus] {
            let eps = PolarizationFourVector::from_triad(&triad(&p, sigma));
            let moved = eps.transformed(&boost);
            assert!(
                moved.transversality_residual() > 1e-3,
                "boost breaks the gauge"
            );
            let fixed = moved.gauge_fix();
            assert!(fixed.transversality_residual() < TOL);
        }
    }

    #[test]
    fn gauge_fixed_helicity_vectors_stay_orthogonal() {
        let p = FourMomentum::from_angles(1.2, 0.7).unwrap();
        let t = LorentzTransform::normal_form(0.3, 0.8, 1.1).unwrap();
        let plus = PolarizationFourVector::from_triad(&triad(&p, Helicity::Plus))
            .transformed(&t)
            .gauge_fix();
        let minus = PolarizationFourVector::from_triad(&triad(&p, Helicity::Minus))
            .transformed(&t)
            .gauge_fix();
        let overlap = plus.eps.dotc(&minus.eps);
        assert!(overlap.norm() < TOL);
    }

    proptest! {
        #[test]
        fn rotation_is_unitary_everywhere(theta in 0.0..PI, phi in 0.0..TAU) {
            prop_assert!(unitarity_residual(&helicity_rotation(theta, phi)) < TOL);
        }

        #[test]
        fn triads_are_orthonormal(theta in 0.0..PI, phi in 0.0..TAU) {
            let p = FourMomentum::from_angles(theta, phi).unwrap();
            let plus = triad(&p, Helicity::Plus);
            let minus = triad(&p, Helicity::Minus);
            prop_assert!((plus.v.norm() - 1.0).abs() < TOL);
            prop_assert!((minus.v.norm() - 1.0).abs() < TOL);
            prop_assert!(plus.v.dotc(&minus.v).norm() < TOL);
        }

        #[test]
        fn completeness_gives_transverse_projector(theta in 0.0..PI, phi in 0.0..TAU) {
            let p = FourMomentum::from_angles(theta, phi).unwrap();
            let mut sum = Matrix3::<Complex64>::zeros();
            for sigma in [Helicity::Plus, Helicity::Minus] {
                let lin = triad(&p, sigma).linear_components();
                sum += lin * lin.adjoint();
            }
            let expected = transverse_projector(&p).map(|x| Complex64::new(x, 0.0));
            prop_assert!((sum - expected).map(|z| z.norm()).max() < TOL);
        }

        #[test]
        fn projector_properties(theta in 0.0..PI, phi in 0.0..TAU) {
            let p = FourMomentum::from_angles(theta, phi).unwrap();
            let proj = transverse_projector(&p);
            prop_assert!((proj * proj - proj).amax() < TOL);
            prop_assert!((proj.trace() - 2.0).abs() < TOL);
            prop_assert!((proj * p.spatial()).amax() < TOL);
        }

        #[test]
        fn floor_weight_and_overlap_identities(theta in 0.0..PI, phi in 0.0..TAU) {
            let p = FourMomentum::from_angles(theta, phi).unwrap();
            let (plus, w_plus) = floor(&triad(&p, Helicity::Plus)).unwrap();
            let (minus, w_minus) = floor(&triad(&p, Helicity::Minus)).unwrap();
            let c2 = theta.cos().powi(2);
            prop_assert!((w_plus - 0.5 * (1.0 + c2)).abs() < TOL);
            prop_assert!((w_plus - floor_weight(theta)).abs() < TOL);
            prop_assert!((w_minus - w_plus).abs() < TOL);
            prop_assert!((plus.v.norm() - 1.0).abs() < TOL);
            let overlap = plus.v.dotc(&minus.v);
            let expected = (c2 - 1.0) / (1.0 + c2);
            prop_assert!((overlap - Complex64::new(expected, 0.0)).norm() < TOL);
        }
    }
}
