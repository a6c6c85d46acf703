//! Photonic momentum-helicity states under the Lorentz group.
//!
//! The crate models massless momentum-helicity eigenstates, the Wigner
//! phases they pick up under rotations and boosts, and two-mode Bell
//! states whose momenta are correlated so that those phases cancel.
//! On top of that sit discretized wave packets: a qubit encoded in the
//! Bell basis survives arbitrary `Rz·Ry·Bz` transformations with its
//! amplitudes intact and stays perfectly readable through the
//! transverse (Peres-Terno) polarization projection, while the naive
//! single-mode encoding decoheres.
//!
//! Modules follow the physics pipeline:
//!
//! * [`kinematics`] — null four-momenta and the `Rz`, `Ry`, `Bz` matrices;
//! * [`little_group`] — Wigner angles, closed forms and the stabilizer oracle;
//! * [`helicity`] — helicity triads, the transverse projector, floored kets;
//! * [`bell`] — correlated Bell pairs, fixed-point curves, the `Π⊗Π` projection;
//! * [`wavepacket`] — packet quadrature, measurement, effective density matrices.

pub mod bell;
pub mod error;
pub mod helicity;
pub mod kinematics;
pub mod little_group;
pub mod tol;
pub mod wavepacket;

pub use error::{Error, Result};
