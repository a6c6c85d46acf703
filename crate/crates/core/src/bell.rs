//! Two-mode Bell states over momentum pairs.
//!
//! The four Bell states are assembled from helicity triads of a
//! momentum pair. Correlating the pair per one of the eight fixed-point
//! solutions makes the two modes' Wigner phases cancel (Φ family) or
//! coincide (Ψ family) for every y-rotation, which is what keeps the
//! Bell amplitudes frame-independent. The module also provides the
//! fixed-point residual of the phase-matching condition, a
//! marching-squares extractor for its zero-level curves, and the
//! per-mode transverse projection that produces the floored (2⊗2)
//! states the measurement acts on.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::fmt;

use nalgebra::{SVector, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::helicity::{triad, Helicity};
use crate::kinematics::{FourMomentum, LorentzTransform};
use crate::little_group::{wigner_angle_numeric, WignerPhase};
use crate::tol;

/// Momentum correlation carried by a pair, one of the eight fixed-point
/// solutions or none.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Correlation {
    PhiA,
    PhiB,
    PhiC,
    PhiD,
    PsiA,
    PsiB,
    PsiC,
    PsiD,
    Uncorrelated,
}

impl Correlation {
    pub fn name(self) -> &'static str {
        match self {
            Correlation::PhiA => "phi-a",
            Correlation::PhiB => "phi-b",
            Correlation::PhiC => "phi-c",
            Correlation::PhiD => "phi-d",
            Correlation::PsiA => "psi-a",
            Correlation::PsiB => "psi-b",
            Correlation::PsiC => "psi-c",
            Correlation::PsiD => "psi-d",
            Correlation::Uncorrelated => "none",
        }
    }

    pub fn family(self) -> Option<Family> {
        match self {
            Correlation::PhiA | Correlation::PhiB | Correlation::PhiC | Correlation::PhiD => {
                Some(Family::Phi)
            }
            Correlation::PsiA | Correlation::PsiB | Correlation::PsiC | Correlation::PsiD => {
                Some(Family::Psi)
            }
            Correlation::Uncorrelated => None,
        }
    }

    /// The four tagged solutions of a family, in label order.
    pub fn family_tags(family: Family) -> [Correlation; 4] {
        match family {
            Family::Phi => [
                Correlation::PhiA,
                Correlation::PhiB,
                Correlation::PhiC,
                Correlation::PhiD,
            ],
            Family::Psi => [
                Correlation::PsiA,
                Correlation::PsiB,
                Correlation::PsiC,
                Correlation::PsiD,
            ],
        }
    }
}

impl fmt::Display for Correlation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which of the two phase-matching equations a solution belongs to:
/// conjugated phases (Φ) or equal phases (Ψ).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Phi,
    Psi,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Phi => "phi",
            Family::Psi => "psi",
        }
    }
}

/// Partner angles of the fixed-point solution `tag` for a mode at
/// `(theta1, phi1)`; returned raw (the polar angle may leave `[0, pi]`),
/// with the azimuth reduced modulo 2π.
pub fn fixed_point_partner(theta1: f64, phi1: f64, tag: Correlation) -> (f64, f64) {
    let (theta2, phi2) = match tag {
        Correlation::PhiA => (theta1, -phi1),
        Correlation::PhiB => (-theta1, PI - phi1),
        Correlation::PhiC => (PI - theta1, PI + phi1),
        Correlation::PhiD => (theta1 + PI, phi1),
        Correlation::PsiA => (theta1 + PI, -phi1),
        Correlation::PsiB => (PI - theta1, PI - phi1),
        Correlation::PsiC => (-theta1, PI + phi1),
        Correlation::PsiD => (theta1, phi1),
        Correlation::Uncorrelated => (theta1, phi1),
    };
    (theta2, phi2.rem_euclid(TAU))
}

/// Offsets `(x, y) = (phi2 - phi1, theta2 - theta1)` of a solution,
/// reduced to `[0, 2pi)` — the fixed points of the residual equations.
pub fn fixed_point_offsets(theta1: f64, phi1: f64, tag: Correlation) -> (f64, f64) {
    let (theta2, phi2) = fixed_point_partner(theta1, phi1, tag);
    (
        (phi2 - phi1).rem_euclid(TAU),
        (theta2 - theta1).rem_euclid(TAU),
    )
}

/// An ordered pair of momenta with its declared correlation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumPair {
    pub p1: FourMomentum,
    pub p2: FourMomentum,
    pub correlation: Correlation,
}

impl MomentumPair {
    /// Builds the pair from the first mode's angles, deriving the
    /// partner from the fixed-point solution.
    pub fn correlated(theta1: f64, phi1: f64, tag: Correlation) -> Result<Self> {
        let p1 = FourMomentum::from_angles(theta1, phi1)?;
        let (theta2, phi2) = fixed_point_partner(theta1, phi1, tag);
        let p2 = FourMomentum::from_angles_wrapping(theta2, phi2)?;
        let pair = Self {
            p1,
            p2,
            correlation: tag,
        };
        pair.validate()?;
        Ok(pair)
    }

    /// Wraps explicit momenta, checking the declared correlation.
    pub fn new(p1: FourMomentum, p2: FourMomentum, correlation: Correlation) -> Result<Self> {
        let pair = Self {
            p1,
            p2,
            correlation,
        };
        pair.validate()?;
        Ok(pair)
    }

    pub fn uncorrelated(p1: FourMomentum, p2: FourMomentum) -> Self {
        Self {
            p1,
            p2,
            correlation: Correlation::Uncorrelated,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.correlation == Correlation::Uncorrelated {
            return Ok(());
        }
        if self.correlation.family() == Some(Family::Phi)
            && (self.p1.is_standard(tol::STANDARD_DIRECTION)
                || self.p2.is_standard(tol::STANDARD_DIRECTION))
        {
            return Err(Error::ExcludedDirection(
                self.p1.theta().min(self.p2.theta()),
            ));
        }
        let residual = self.correlation_residual();
        if residual > tol::GEOMETRY {
            return Err(Error::BrokenCorrelation {
                tag: self.correlation.name(),
                residual,
            });
        }
        Ok(())
    }

    /// Distance between `p2` and the partner the tag prescribes.
    pub fn correlation_residual(&self) -> f64 {
        let (theta2, phi2) = fixed_point_partner(self.p1.theta(), self.p1.phi(), self.correlation);
        let expected = FourMomentum::from_angles_wrapping(theta2, phi2)
            .expect("partner of finite angles is finite");
        (self.p2.cartesian() - expected.cartesian()).amax()
    }

    /// True when the stored momenta still satisfy the tag.
    pub fn correlation_holds(&self, tol: f64) -> bool {
        self.correlation != Correlation::Uncorrelated && self.correlation_residual() <= tol
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.p1.approx_eq(&other.p1, tol) && self.p2.approx_eq(&other.p2, tol)
    }
}

/// The four maximally entangled helicity states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    /// Coefficients over the helicity products
    /// `(++, +-, -+, --)`, including the 1/√2.
    fn coefficients(self) -> [Complex64; 4] {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        match self {
            BellState::PhiPlus => [h, zero, zero, h],
            BellState::PhiMinus => [h, zero, zero, -h],
            BellState::PsiPlus => [zero, h, h, zero],
            BellState::PsiMinus => [zero, h, -h, zero],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BellState::PhiPlus => "phi+",
            BellState::PhiMinus => "phi-",
            BellState::PsiPlus => "psi+",
            BellState::PsiMinus => "psi-",
        }
    }
}

const HELICITY_PAIRS: [(Helicity, Helicity); 4] = [
    (Helicity::Plus, Helicity::Plus),
    (Helicity::Plus, Helicity::Minus),
    (Helicity::Minus, Helicity::Plus),
    (Helicity::Minus, Helicity::Minus),
];

/// Amplitudes of a two-mode state: the realized 9-component vector over
/// both modes' helicity-basis components, or the 4-component transverse
/// block after projection (ordering `++, +-, -+, --`).
#[derive(Debug, Clone, PartialEq)]
pub enum StateAmps {
    Full(SVector<Complex64, 9>),
    Floored(SVector<Complex64, 4>),
}

/// A two-mode helicity state tagged with its momentum pair.
///
/// `norm_weight` is the squared norm retained through the last
/// projection: the post-selection probability of detecting both modes.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    pub amps: StateAmps,
    pub pair: MomentumPair,
    pub norm_weight: f64,
}

fn kron3(a: &Vector3<Complex64>, b: &Vector3<Complex64>) -> SVector<Complex64, 9> {
    SVector::from_fn(|idx, _| a[idx / 3] * b[idx % 3])
}

fn helicity_product(pair: &MomentumPair, s1: Helicity, s2: Helicity) -> SVector<Complex64, 9> {
    kron3(&triad(&pair.p1, s1).v, &triad(&pair.p2, s2).v)
}

/// Assembles a Bell state on a momentum pair as a full 9-component
/// vector.
pub fn bell(pair: &MomentumPair, which: BellState) -> Result<TwoModeState> {
    if matches!(which, BellState::PhiPlus | BellState::PhiMinus)
        && (pair.p1.is_standard(tol::STANDARD_DIRECTION)
            || pair.p2.is_standard(tol::STANDARD_DIRECTION))
    {
        return Err(Error::ExcludedDirection(
            pair.p1.theta().min(pair.p2.theta()),
        ));
    }
    let coeffs = which.coefficients();
    let mut amps = SVector::<Complex64, 9>::zeros();
    for (c, (s1, s2)) in coeffs.iter().zip(HELICITY_PAIRS) {
        if c.norm() > 0.0 {
            amps += helicity_product(pair, s1, s2) * *c;
        }
    }
    Ok(TwoModeState {
        amps: StateAmps::Full(amps),
        pair: *pair,
        norm_weight: 1.0,
    })
}

impl TwoModeState {
    pub fn full_amps(&self) -> Result<&SVector<Complex64, 9>> {
        match &self.amps {
            StateAmps::Full(v) => Ok(v),
            StateAmps::Floored(_) => Err(Error::WrongForm { expected: "full" }),
        }
    }

    pub fn floored_amps(&self) -> Result<&SVector<Complex64, 4>> {
        match &self.amps {
            StateAmps::Floored(v) => Ok(v),
            StateAmps::Full(_) => Err(Error::WrongForm {
                expected: "floored",
            }),
        }
    }

    pub fn norm(&self) -> f64 {
        match &self.amps {
            StateAmps::Full(v) => v.norm(),
            StateAmps::Floored(v) => v.norm(),
        }
    }

    /// Coefficients of a full state over the four helicity products of
    /// its pair, in the order `++, +-, -+, --`. Errors when the state
    /// has support outside that span.
    pub fn helicity_coefficients(&self) -> Result<[Complex64; 4]> {
        let amps = self.full_amps()?;
        let mut coeffs = [Complex64::new(0.0, 0.0); 4];
        let mut reconstructed = SVector::<Complex64, 9>::zeros();
        for (slot, (s1, s2)) in coeffs.iter_mut().zip(HELICITY_PAIRS) {
            let basis = helicity_product(&self.pair, s1, s2);
            *slot = basis.dotc(amps);
            reconstructed += basis * *slot;
        }
        let residual = (amps - reconstructed).norm();
        if residual > 1e-8 * amps.norm().max(1.0) {
            return Err(Error::OutsideHelicitySpan(residual));
        }
        Ok(coeffs)
    }
}

/// Applies a Lorentz transformation to a full two-mode state: momenta
/// move along the orbit and every helicity component picks up its mode's
/// Wigner phase.
///
/// For a pair carrying a matching correlation tag and a transformation
/// composed of `rz`, `ry`, `bz` in normal-form order, the four phases
/// multiply to one on every Bell component and the amplitudes come back
/// unchanged.
pub fn transform_bell(state: &TwoModeState, transform: &LorentzTransform) -> Result<TwoModeState> {
    let coeffs = state.helicity_coefficients()?;
    let angle1 = wigner_angle_numeric(transform, &state.pair.p1)?;
    let angle2 = wigner_angle_numeric(transform, &state.pair.p2)?;
    let phase1 = WignerPhase::new(angle1);
    let phase2 = WignerPhase::new(angle2);

    let q1 = transform.apply(&state.pair.p1);
    let q2 = transform.apply(&state.pair.p2);
    let moved = MomentumPair {
        p1: q1,
        p2: q2,
        correlation: state.pair.correlation,
    };
    let pair = if moved.correlation_holds(tol::GEOMETRY) {
        moved
    } else {
        MomentumPair {
            correlation: Correlation::Uncorrelated,
            ..moved
        }
    };

    let mut amps = SVector::<Complex64, 9>::zeros();
    for (c, (s1, s2)) in coeffs.iter().zip(HELICITY_PAIRS) {
        if c.norm() > 0.0 {
            let phased = *c * phase1.factor(s1) * phase2.factor(s2);
            amps += helicity_product(&pair, s1, s2) * phased;
        }
    }
    Ok(TwoModeState {
        amps: StateAmps::Full(amps),
        pair,
        norm_weight: state.norm_weight,
    })
}

/// Net phases `exp(-i σ1 θ1) exp(-i σ2 θ2)` a transformation puts on the
/// four helicity components of states over `pair`; all one exactly when
/// the correlation does its job.
pub fn component_phases(
    pair: &MomentumPair,
    transform: &LorentzTransform,
) -> Result<[Complex64; 4]> {
    let phase1 = WignerPhase::new(wigner_angle_numeric(transform, &pair.p1)?);
    let phase2 = WignerPhase::new(wigner_angle_numeric(transform, &pair.p2)?);
    Ok(HELICITY_PAIRS.map(|(s1, s2)| phase1.factor(s1) * phase2.factor(s2)))
}

/// Projects both modes onto the transverse plane of the standard
/// direction, keeping the raw (subnormalized) 4-component block.
///
/// `norm_weight` of the output is the squared norm of the projected
/// vector: the joint detection probability of the two-mode state.
pub fn pt_project(state: &TwoModeState) -> Result<TwoModeState> {
    let amps = state.full_amps()?;
    let floored = SVector::<Complex64, 4>::from_fn(|idx, _| {
        let (i, j) = (idx / 2, idx % 2);
        amps[3 * i + j]
    });
    let weight = floored.norm_squared();
    if weight < tol::NULL_OUTCOME {
        return Err(Error::NullOutcome(weight));
    }
    Ok(TwoModeState {
        amps: StateAmps::Floored(floored),
        pair: state.pair,
        norm_weight: state.norm_weight * weight,
    })
}

/// Hermitian inner product of two renormalized floored states on the
/// same momentum pair.
pub fn floored_overlap(a: &TwoModeState, b: &TwoModeState) -> Result<Complex64> {
    let va = a.floored_amps()?;
    let vb = b.floored_amps()?;
    if !a.pair.approx_eq(&b.pair, tol::GEOMETRY) {
        return Err(Error::MismatchedPairs);
    }
    Ok((va / Complex64::new(va.norm(), 0.0)).dotc(&(vb / Complex64::new(vb.norm(), 0.0))))
}

/// Fixed Bell vectors of the floored 2⊗2 space, built on the transverse
/// basis of the standard direction.
pub fn floored_bell_basis(which: BellState) -> SVector<Complex64, 4> {
    SVector::from_column_slice(&which.coefficients())
}

/// One evaluation of the fixed-point residual: a value, or a marker for
/// the singular loci that show up as gaps on the curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Residual {
    Value(f64),
    Singular,
}

impl Residual {
    pub fn value(self) -> Option<f64> {
        match self {
            Residual::Value(v) => Some(v),
            Residual::Singular => None,
        }
    }
}

struct RatioParts {
    numerator: f64,
    denominator: f64,
}

fn phase_ratio(varpi: f64, theta: f64, phi: f64) -> RatioParts {
    RatioParts {
        numerator: varpi.sin() * phi.sin(),
        denominator: varpi.sin() * theta.cos() * phi.cos() + varpi.cos() * theta.sin(),
    }
}

/// Residual of the phase-matching condition at partner offsets
/// `phi2 = phi1 + x`, `theta2 = theta1 + y`: the difference between the
/// first mode's phase ratio and minus (Φ) or plus (Ψ) the second's.
pub fn fixed_point_residual(
    varpi: f64,
    theta1: f64,
    phi1: f64,
    x: f64,
    y: f64,
    family: Family,
) -> Residual {
    let lhs = phase_ratio(varpi, theta1, phi1);
    let rhs = phase_ratio(varpi, theta1 + y, phi1 + x);
    if lhs.denominator.abs() < tol::WIGNER_DENOMINATOR
        || rhs.denominator.abs() < tol::WIGNER_DENOMINATOR
    {
        return Residual::Singular;
    }
    let r1 = lhs.numerator / lhs.denominator;
    let r2 = rhs.numerator / rhs.denominator;
    Residual::Value(match family {
        Family::Phi => r1 + r2,
        Family::Psi => r1 - r2,
    })
}

/// Zero-level curves of the fixed-point residual for one rotation angle.
#[derive(Debug, Clone)]
pub struct CurveSet {
    pub varpi: f64,
    pub polylines: Vec<Vec<[f64; 2]>>,
}

/// A labelled analytic fixed point in the offset plane.
#[derive(Debug, Clone, Copy)]
pub struct FixedPoint {
    pub label: &'static str,
    pub x: f64,
    pub y: f64,
}

/// Extracted curves for a list of rotation angles plus the four
/// analytic fixed points of the family.
#[derive(Debug, Clone)]
pub struct FixedPointCurves {
    pub family: Family,
    pub theta1: f64,
    pub phi1: f64,
    pub curves: Vec<CurveSet>,
    pub fixed_points: [FixedPoint; 4],
}

/// Residual values above this are treated as the flank of a pole and
/// excluded from curve extraction.
const RESIDUAL_CUT: f64 = 1e3;

#[derive(Clone, Copy)]
struct NodeSample {
    residual: Residual,
    den1: f64,
    den2: f64,
    num1: f64,
    num2: f64,
}

fn sample_node(varpi: f64, theta1: f64, phi1: f64, x: f64, y: f64, family: Family) -> NodeSample {
    let lhs = phase_ratio(varpi, theta1, phi1);
    let rhs = phase_ratio(varpi, theta1 + y, phi1 + x);
    NodeSample {
        residual: fixed_point_residual(varpi, theta1, phi1, x, y, family),
        den1: lhs.denominator,
        den2: rhs.denominator,
        num1: lhs.numerator,
        num2: rhs.numerator,
    }
}

/// Extracts iso-residual curves on `(x, y) in [0, 2pi]²` for each
/// rotation angle, by marching squares on a `grid x grid` cell lattice.
/// Cells touching singular markers, pole flanks, or a sign change of a
/// denominator with a non-vanishing numerator are split out of the
/// curves, which is where the gaps in the level sets come from.
pub fn fixed_point_curves(
    varpi_list: &[f64],
    theta1: f64,
    phi1: f64,
    family: Family,
    grid: usize,
) -> Result<FixedPointCurves> {
    if grid < 2 {
        return Err(Error::Config(format!(
            "grid must be at least 2, got {grid}"
        )));
    }
    if !theta1.is_finite() || !phi1.is_finite() {
        return Err(Error::NonFinite("fixed_point_curves"));
    }
    for v in varpi_list {
        if !v.is_finite() {
            return Err(Error::NonFinite("fixed_point_curves varpi"));
        }
    }

    let labels = ["a", "b", "c", "d"];
    let tags = Correlation::family_tags(family);
    let mut fixed_points = [FixedPoint {
        label: "",
        x: 0.0,
        y: 0.0,
    }; 4];
    for (slot, (label, tag)) in fixed_points.iter_mut().zip(labels.iter().zip(tags)) {
        let (x, y) = fixed_point_offsets(theta1, phi1, tag);
        *slot = FixedPoint { label, x, y };
    }

    let curves = varpi_list
        .iter()
        .map(|&varpi| CurveSet {
            varpi,
            polylines: extract_level_set(varpi, theta1, phi1, family, grid),
        })
        .collect();

    Ok(FixedPointCurves {
        family,
        theta1,
        phi1,
        curves,
        fixed_points,
    })
}

fn extract_level_set(
    varpi: f64,
    theta1: f64,
    phi1: f64,
    family: Family,
    grid: usize,
) -> Vec<Vec<[f64; 2]>> {
    let h = TAU / grid as f64;
    let nodes: Vec<Vec<NodeSample>> = (0..=grid)
        .into_par_iter()
        .map(|i| {
            let x = i as f64 * h;
            (0..=grid)
                .map(|j| sample_node(varpi, theta1, phi1, x, j as f64 * h, family))
                .collect()
        })
        .collect();

    let mut segments: Vec<([f64; 2], [f64; 2])> = Vec::new();
    for i in 0..grid {
        for j in 0..grid {
            let corners = [
                &nodes[i][j],         // bottom-left
                &nodes[i + 1][j],     // bottom-right
                &nodes[i + 1][j + 1], // top-right
                &nodes[i][j + 1],     // top-left
            ];
            let mut values = [0.0; 4];
            let mut usable = true;
            for (v, c) in values.iter_mut().zip(corners) {
                match c.residual {
                    Residual::Value(r) if r.abs() <= RESIDUAL_CUT => *v = r,
                    _ => {
                        usable = false;
                        break;
                    }
                }
            }
            if !usable || asymptote_crosses(&corners) {
                continue;
            }
            // Corner coordinates as plain node multiples so neighboring
            // cells produce bit-identical points on shared edges.
            let corners_xy = [
                i as f64 * h,
                (i + 1) as f64 * h,
                j as f64 * h,
                (j + 1) as f64 * h,
            ];
            emit_cell_segments(&values, &corners_xy, &mut segments, || {
                sample_node(
                    varpi,
                    theta1,
                    phi1,
                    corners_xy[0] + 0.5 * h,
                    corners_xy[2] + 0.5 * h,
                    family,
                )
                .residual
                .value()
                .unwrap_or(0.0)
            });
        }
    }
    join_segments(segments)
}

/// A denominator changing sign across a cell while its numerator stays
/// bounded away from zero marks a pole sweeping through the cell.
fn asymptote_crosses(corners: &[&NodeSample; 4]) -> bool {
    let crosses = |den: [f64; 4], num: [f64; 4]| {
        let all_same_sign = den.iter().all(|d| *d > 0.0) || den.iter().all(|d| *d < 0.0);
        !all_same_sign && num.iter().all(|n| n.abs() > 1e-6)
    };
    crosses(corners.map(|c| c.den1), corners.map(|c| c.num1))
        || crosses(corners.map(|c| c.den2), corners.map(|c| c.num2))
}

fn interpolate(a: f64, b: f64, va: f64, vb: f64) -> f64 {
    a + (b - a) * (va / (va - vb))
}

fn emit_cell_segments(
    values: &[f64; 4],
    corners_xy: &[f64; 4],
    segments: &mut Vec<([f64; 2], [f64; 2])>,
    center: impl Fn() -> f64,
) {
    let [bl, br, tr, tl] = *values;
    let [x0, x1, y0, y1] = *corners_xy;
    let mut case = 0u8;
    if bl > 0.0 {
        case |= 1;
    }
    if br > 0.0 {
        case |= 2;
    }
    if tr > 0.0 {
        case |= 4;
    }
    if tl > 0.0 {
        case |= 8;
    }
    if case == 0 || case == 15 {
        return;
    }

    let bottom = || [interpolate(x0, x1, bl, br), y0];
    let right = || [x1, interpolate(y0, y1, br, tr)];
    let top = || [interpolate(x0, x1, tl, tr), y1];
    let left = || [x0, interpolate(y0, y1, bl, tl)];

    match case {
        1 | 14 => segments.push((left(), bottom())),
        2 | 13 => segments.push((bottom(), right())),
        3 | 12 => segments.push((left(), right())),
        4 | 11 => segments.push((right(), top())),
        6 | 9 => segments.push((bottom(), top())),
        7 | 8 => segments.push((left(), top())),
        5 | 10 => {
            // Saddle: the center value decides which diagonal pairs up.
            let positive_diagonal_connected = (center() > 0.0) == (case == 5);
            if positive_diagonal_connected {
                segments.push((left(), top()));
                segments.push((bottom(), right()));
            } else {
                segments.push((left(), bottom()));
                segments.push((right(), top()));
            }
        }
        _ => unreachable!(),
    }
}

fn key(p: [f64; 2]) -> (u64, u64) {
    (p[0].to_bits(), p[1].to_bits())
}

/// Chains segments that share endpoints bit-exactly into polylines.
/// Crossing coordinates are pure functions of the shared edge's node
/// values, so neighbors agree exactly.
fn join_segments(segments: Vec<([f64; 2], [f64; 2])>) -> Vec<Vec<[f64; 2]>> {
    let mut adjacency: HashMap<(u64, u64), Vec<usize>> = HashMap::new();
    for (idx, (a, b)) in segments.iter().enumerate() {
        adjacency.entry(key(*a)).or_default().push(idx);
        adjacency.entry(key(*b)).or_default().push(idx);
    }
    let mut used = vec![false; segments.len()];
    let mut polylines = Vec::new();

    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a, b) = segments[start];
        let mut line = std::collections::VecDeque::from([a, b]);

        for forward in [true, false] {
            loop {
                let tip = if forward {
                    *line.back().unwrap()
                } else {
                    *line.front().unwrap()
                };
                let Some(candidates) = adjacency.get(&key(tip)) else {
                    break;
                };
                let Some(&next) = candidates.iter().find(|&&i| !used[i]) else {
                    break;
                };
                used[next] = true;
                let (na, nb) = segments[next];
                let extend = if key(na) == key(tip) { nb } else { na };
                if forward {
                    line.push_back(extend);
                } else {
                    line.push_front(extend);
                }
            }
        }
        polylines.push(line.into_iter().collect());
    }
    polylines
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    const TOL: f64 = tol::GEOMETRY;

    fn phi_a_pair(theta1: f64, phi1: f64) -> MomentumPair {
        MomentumPair::correlated(theta1, phi1, Correlation::PhiA).unwrap()
    }

    #[test]
    fn partner_examples() {
        let (t, f) = fixed_point_partner(PI / 4.0, PI / 6.0, Correlation::PhiA);
        assert!((t - PI / 4.0).abs() < TOL);
        assert!((f - (TAU - PI / 6.0)).abs() < TOL);

        let (t, f) = fixed_point_partner(PI / 4.0, PI / 6.0, Correlation::PhiC);
        assert!((t - 3.0 * PI / 4.0).abs() < TOL);
        assert!((f - 7.0 * PI / 6.0).abs() < TOL);

        let (t, f) = fixed_point_partner(1.234, 5.0, Correlation::PsiD);
        assert_eq!(t, 1.234);
        assert!((f - 5.0).abs() < TOL);
    }

    #[test]
    fn phi_c_partner_points_opposite() {
        let pair = MomentumPair::correlated(PI / 4.0, PI / 6.0, Correlation::PhiC).unwrap();
        let sum = pair.p1.spatial() + pair.p2.spatial();
        assert!(sum.amax() < TOL, "partner direction is the antipode");
    }

    #[test]
    fn phi_pair_rejects_standard_direction() {
        assert!(matches!(
            MomentumPair::correlated(0.0, 0.3, Correlation::PhiA),
            Err(Error::ExcludedDirection(_))
        ));
        // Psi-d at the pole is fine: no Phi-family constraint.
        assert!(MomentumPair::correlated(0.0, 0.3, Correlation::PsiD).is_ok());
    }

    #[test]
    fn pair_validation_catches_mismatch() {
        let p1 = FourMomentum::from_angles(0.9, 0.7).unwrap();
        let p2 = FourMomentum::from_angles(0.9, 0.7).unwrap();
        assert!(matches!(
            MomentumPair::new(p1, p2, Correlation::PhiA),
            Err(Error::BrokenCorrelation { .. })
        ));
    }

    #[test]
    fn bell_states_are_normalized_and_orthogonal() {
        let pair = phi_a_pair(1.0, 0.5);
        let states = [
            bell(&pair, BellState::PhiPlus).unwrap(),
            bell(&pair, BellState::PhiMinus).unwrap(),
            bell(&pair, BellState::PsiPlus).unwrap(),
            bell(&pair, BellState::PsiMinus).unwrap(),
        ];
        for s in &states {
            assert!((s.norm() - 1.0).abs() < TOL);
        }
        for i in 0..4 {
            for j in (i + 1)..4 {
                let overlap = states[i]
                    .full_amps()
                    .unwrap()
                    .dotc(states[j].full_amps().unwrap());
                assert!(overlap.norm() < TOL, "states {i} and {j} overlap");
            }
        }
    }

    #[test]
    fn bell_components_match_tensor_assembly() {
        let pair = phi_a_pair(PI / 4.0, PI / 6.0);
        let state = bell(&pair, BellState::PhiPlus).unwrap();
        let plus1 = triad(&pair.p1, Helicity::Plus).v;
        let plus2 = triad(&pair.p2, Helicity::Plus).v;
        let minus1 = triad(&pair.p1, Helicity::Minus).v;
        let minus2 = triad(&pair.p2, Helicity::Minus).v;
        let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                let expected = r * (plus1[i] * plus2[j] + minus1[i] * minus2[j]);
                let got = state.full_amps().unwrap()[3 * i + j];
                assert!((got - expected).norm() < TOL);
            }
        }
    }

    #[test]
    fn bell_rejects_standard_direction_for_phi() {
        let pair = MomentumPair::uncorrelated(
            FourMomentum::standard(),
            FourMomentum::from_angles(0.4, 0.0).unwrap(),
        );
        assert!(matches!(
            bell(&pair, BellState::PhiPlus),
            Err(Error::ExcludedDirection(_))
        ));
        assert!(bell(&pair, BellState::PsiPlus).is_ok());
    }

    #[test]
    fn residual_vanishes_on_phi_a_offsets() {
        let (theta1, phi1) = (0.9, 0.7);
        for varpi in [0.3, 0.7, 1.2] {
            let r = fixed_point_residual(varpi, theta1, phi1, -2.0 * phi1, 0.0, Family::Phi)
                .value()
                .unwrap();
            assert!(r.abs() < 1e-12, "varpi={varpi}: residual {r}");
        }
    }

    #[test]
    fn psi_identity_offset_is_globally_fixed() {
        for varpi in [0.25, 1.1, 2.4] {
            for (theta1, phi1) in [(0.5, 0.3), (1.4, 2.0), (2.8, 5.5)] {
                let r = fixed_point_residual(varpi, theta1, phi1, 0.0, 0.0, Family::Psi)
                    .value()
                    .unwrap();
                assert_eq!(r, 0.0);
            }
        }
    }

    #[test]
    fn zero_offset_is_not_a_phi_solution() {
        let r = fixed_point_residual(0.5, 0.9, 0.7, 0.0, 0.0, Family::Phi)
            .value()
            .unwrap();
        assert!(r.abs() > 1e-3);
    }

    #[test]
    fn all_eight_solutions_annihilate_their_residual() {
        // 20x20x20 grid over (varpi, theta1, phi1). Points where either
        // denominator drops below 0.05 count as the singular
        // neighborhood: there the phase ratio amplifies the last-ulp
        // rounding of the wrapped offsets past 1e-12.
        let denominator = |varpi: f64, theta: f64, phi: f64| {
            varpi.sin() * theta.cos() * phi.cos() + varpi.cos() * theta.sin()
        };
        let mut evaluated = 0u32;
        for family in [Family::Phi, Family::Psi] {
            for tag in Correlation::family_tags(family) {
                for i in 0..20 {
                    let varpi = -3.0 + 6.0 * (i as f64 + 0.5) / 20.0;
                    for j in 0..20 {
                        let theta1 = PI * (j as f64 + 0.5) / 20.0;
                        for k in 0..20 {
                            let phi1 = TAU * (k as f64 + 0.5) / 20.0;
                            let (x, y) = fixed_point_offsets(theta1, phi1, tag);
                            let near_singular = denominator(varpi, theta1, phi1).abs() < 0.05
                                || denominator(varpi, theta1 + y, phi1 + x).abs() < 0.05;
                            if near_singular {
                                continue;
                            }
                            match fixed_point_residual(varpi, theta1, phi1, x, y, family) {
                                Residual::Value(r) => {
                                    assert!(
                                        r.abs() < 1e-12,
                                        "{tag:?} varpi={varpi} theta1={theta1} phi1={phi1}: {r}"
                                    );
                                    evaluated += 1;
                                }
                                Residual::Singular => {}
                            }
                        }
                    }
                }
            }
        }
        assert!(
            evaluated > 55_000,
            "grid mostly nonsingular, got {evaluated}"
        );
    }

    #[test]
    fn transform_rz_moves_momenta_only() {
        let pair = phi_a_pair(1.0, 0.5);
        let state = bell(&pair, BellState::PhiPlus).unwrap();
        let rotated = transform_bell(&state, &LorentzTransform::rz(0.8).unwrap()).unwrap();
        let coeffs_in = state.helicity_coefficients().unwrap();
        let coeffs_out = rotated.helicity_coefficients().unwrap();
        for (a, b) in coeffs_in.iter().zip(coeffs_out) {
            assert!((a - b).norm() < tol::PHASE);
        }
        assert!((rotated.pair.p1.phi() - 1.3).abs() < TOL);
        assert!((rotated.pair.p2.phi() - 0.3).abs() < 1e-11);
    }

    #[test]
    fn transform_ry_preserves_correlated_amplitudes() {
        let pair = phi_a_pair(1.0, 0.5);
        for which in [BellState::PhiPlus, BellState::PhiMinus] {
            let state = bell(&pair, which).unwrap();
            let rotated = transform_bell(&state, &LorentzTransform::ry(0.9).unwrap()).unwrap();
            let coeffs_in = state.helicity_coefficients().unwrap();
            let coeffs_out = rotated.helicity_coefficients().unwrap();
            for (a, b) in coeffs_in.iter().zip(coeffs_out) {
                assert!((a - b).norm() < tol::PHASE);
            }
            assert!(
                rotated.pair.correlation_holds(1e-9),
                "ry keeps the mirror pairing"
            );
        }
    }

    #[test]
    fn transform_ry_dephases_uncorrelated_pair() {
        let p1 = FourMomentum::from_angles(1.0, 0.5).unwrap();
        let p2 = FourMomentum::from_angles(1.3, 0.5).unwrap();
        let pair = MomentumPair::uncorrelated(p1, p2);
        let state = bell(&pair, BellState::PhiPlus).unwrap();
        let rotated = transform_bell(&state, &LorentzTransform::ry(0.9).unwrap()).unwrap();
        let coeffs_in = state.helicity_coefficients().unwrap();
        let coeffs_out = rotated.helicity_coefficients().unwrap();
        let deviation = coeffs_in
            .iter()
            .zip(coeffs_out)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        assert!(deviation > 1e-3, "uncorrelated phases must not cancel");
    }

    #[test]
    fn normal_form_preserves_phi_amplitudes_and_projected_orthogonality() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(31415);
        let pair = phi_a_pair(0.7, 1.9);
        let plus = bell(&pair, BellState::PhiPlus).unwrap();
        let minus = bell(&pair, BellState::PhiMinus).unwrap();
        for _ in 0..25 {
            let transform = LorentzTransform::normal_form(
                rng.random_range(-PI..PI),
                rng.random_range(-PI..PI),
                rng.random_range(-2.0..2.0),
            )
            .unwrap();
            let moved_plus = transform_bell(&plus, &transform).unwrap();
            let moved_minus = transform_bell(&minus, &transform).unwrap();
            for (state, moved) in [(&plus, &moved_plus), (&minus, &moved_minus)] {
                let before = state.helicity_coefficients().unwrap();
                let after = moved.helicity_coefficients().unwrap();
                for (a, b) in before.iter().zip(after) {
                    assert!((a - b).norm() < tol::PHASE, "under {transform}");
                }
            }
            let overlap = floored_overlap(
                &pt_project(&moved_plus).unwrap(),
                &pt_project(&moved_minus).unwrap(),
            )
            .unwrap();
            assert!(overlap.norm() < tol::PHASE, "under {transform}");
        }
    }

    #[test]
    fn phases_cancel_for_normal_form_on_phi_a() {
        let pair = phi_a_pair(0.8, 2.1);
        let transform = LorentzTransform::normal_form(0.4, 0.9, 0.6).unwrap();
        let phases = component_phases(&pair, &transform).unwrap();
        let one = Complex64::new(1.0, 0.0);
        // Only the ++ and -- components matter for Phi states.
        assert!((phases[0] - one).norm() < tol::PHASE);
        assert!((phases[3] - one).norm() < tol::PHASE);
    }

    #[test]
    fn project_phi_minus_on_phi_a_pair() {
        let pair = phi_a_pair(PI / 4.0, 0.6);
        let projected = pt_project(&bell(&pair, BellState::PhiMinus).unwrap()).unwrap();
        let amps = projected.floored_amps().unwrap();
        // Direction (1, 0, 0, -1) up to normalization.
        let scale = amps[0];
        assert!(scale.norm() > 0.1);
        assert!((amps[3] + scale).norm() < TOL);
        assert!(amps[1].norm() < TOL);
        assert!(amps[2].norm() < TOL);
        // Detection weight for Phi- at equal polar angles is cos² theta.
        let c = (PI / 4.0).cos();
        assert!((projected.norm_weight - c * c).abs() < TOL);
    }

    #[test]
    fn project_phi_plus_at_equator() {
        let phi1 = 0.77;
        let pair = phi_a_pair(PI / 2.0, phi1);
        let projected = pt_project(&bell(&pair, BellState::PhiPlus).unwrap()).unwrap();
        let amps = projected.floored_amps().unwrap();
        let normalized = amps / Complex64::new(amps.norm(), 0.0);
        let expected = [
            Complex64::new(0.5, 0.0),
            -Complex64::new(0.0, -2.0 * phi1).exp() * 0.5,
            -Complex64::new(0.0, 2.0 * phi1).exp() * 0.5,
            Complex64::new(0.5, 0.0),
        ];
        for (got, want) in normalized.iter().zip(expected) {
            assert!((got - want).norm() < TOL);
        }
    }

    #[test]
    fn phi_minus_projection_vanishes_at_equatorial_pair() {
        let pair = phi_a_pair(PI / 2.0, 0.3);
        let state = bell(&pair, BellState::PhiMinus).unwrap();
        assert!(matches!(pt_project(&state), Err(Error::NullOutcome(_))));
    }

    #[test]
    fn projection_normalization_factors_match_closed_forms() {
        for i in 1..50 {
            let theta1 = PI * i as f64 / 50.0;
            if (theta1 - PI / 2.0).abs() < 0.02 {
                continue;
            }
            let pair = phi_a_pair(theta1, 1.3);
            let c2 = theta1.cos().powi(2);

            let plus = pt_project(&bell(&pair, BellState::PhiPlus).unwrap()).unwrap();
            // The printed projected vector has leading entry 1; our raw
            // amplitudes carry (1+c²)/(2√2) there, so the closed-form
            // normalization factor equals (1+c²)/(2√2 · ‖raw‖).
            let factor = (1.0 + c2) / (2.0 * 2.0f64.sqrt() * plus.norm());
            let expected = (1.0 + c2) / (2.0 * (1.0 + c2 * c2).sqrt());
            assert!((factor - expected).abs() < TOL, "theta1={theta1}");

            let minus = pt_project(&bell(&pair, BellState::PhiMinus).unwrap()).unwrap();
            let factor = (1.0 + c2) / (2.0 * 2.0f64.sqrt() * minus.norm());
            let expected = (1.0 + c2) / (8.0f64.sqrt() * theta1.cos().abs());
            assert!((factor - expected).abs() < TOL, "theta1={theta1}");
        }
    }

    #[test]
    fn floored_bell_images_stay_orthogonal() {
        let pair = phi_a_pair(1.0, 0.5);
        let plus = pt_project(&bell(&pair, BellState::PhiPlus).unwrap()).unwrap();
        let minus = pt_project(&bell(&pair, BellState::PhiMinus).unwrap()).unwrap();
        assert!(floored_overlap(&plus, &minus).unwrap().norm() < TOL);
        assert!((floored_overlap(&plus, &plus).unwrap() - Complex64::new(1.0, 0.0)).norm() < TOL);
    }

    #[test]
    fn floored_phi_images_orthogonal_even_for_uncorrelated_pairs() {
        // The floored components make this an identity in the angles: the
        // (+,+)/(-,-) and (+,-)/(-,+) cross terms cancel pairwise, so
        // the projected Phi+ and Phi- stay orthogonal for arbitrary
        // pairs, not only correlated ones. What the correlation buys is
        // the phase cancellation and the frame-independent Phi- ray.
        let p1 = FourMomentum::from_angles(1.0, 0.5).unwrap();
        let p2 = FourMomentum::from_angles(1.3, 0.5).unwrap();
        let pair = MomentumPair::uncorrelated(p1, p2);
        let plus = pt_project(&bell(&pair, BellState::PhiPlus).unwrap()).unwrap();
        let minus = pt_project(&bell(&pair, BellState::PhiMinus).unwrap()).unwrap();
        assert!(floored_overlap(&plus, &minus).unwrap().norm() < TOL);
        // The Psi overlap is the quantity that survives: the floored
        // Phi+ leans on the Psi triplet instead.
        let psi = pt_project(&bell(&pair, BellState::PsiPlus).unwrap()).unwrap();
        assert!(floored_overlap(&plus, &psi).unwrap().norm() > 1e-2);
    }

    #[test]
    fn floored_overlap_rejects_mismatched_pairs() {
        let a = pt_project(&bell(&phi_a_pair(1.0, 0.5), BellState::PhiPlus).unwrap()).unwrap();
        let b = pt_project(&bell(&phi_a_pair(1.1, 0.5), BellState::PhiPlus).unwrap()).unwrap();
        assert!(matches!(
            floored_overlap(&a, &b),
            Err(Error::MismatchedPairs)
        ));
    }

    #[test]
    fn triplet_expansion_of_projected_phi_plus() {
        let pair = phi_a_pair(1.1, 0.9);
        let projected = pt_project(&bell(&pair, BellState::PhiPlus).unwrap()).unwrap();
        let v = projected.floored_amps().unwrap();
        let v = v / Complex64::new(v.norm(), 0.0);
        let a1 = floored_bell_basis(BellState::PhiPlus).dotc(&v);
        let a2 = floored_bell_basis(BellState::PsiPlus).dotc(&v);
        let a3 = floored_bell_basis(BellState::PsiMinus).dotc(&v) / Complex64::new(0.0, 1.0);
        for (name, a) in [("a1", a1), ("a2", a2), ("a3", a3)] {
            assert!(a.im.abs() < TOL, "{name} should be real, got {a}");
        }
        let sum = a1.re.powi(2) + a2.re.powi(2) + a3.re.powi(2);
        assert!((sum - 1.0).abs() < TOL);
        let phi_minus_part = floored_bell_basis(BellState::PhiMinus).dotc(&v);
        assert!(phi_minus_part.norm() < TOL);
    }

    #[test]
    fn curves_pass_near_all_fixed_points() {
        let result = fixed_point_curves(&[0.3, 0.7, 1.2], 0.9, 0.7, Family::Phi, 96).unwrap();
        let cell = TAU / 96.0 * 2.0f64.sqrt();
        for set in &result.curves {
            for fp in &result.fixed_points {
                let min_dist = set
                    .polylines
                    .iter()
                    .flatten()
                    .map(|v| torus_distance(*v, [fp.x, fp.y]))
                    .fold(f64::INFINITY, f64::min);
                assert!(
                    min_dist <= cell,
                    "varpi={} misses point {} by {min_dist}",
                    set.varpi,
                    fp.label
                );
            }
        }
    }

    #[test]
    fn psi_curves_contain_the_trivial_centre_point() {
        let result = fixed_point_curves(&[0.6], 1.1, 2.3, Family::Psi, 96).unwrap();
        let trivial = result
            .fixed_points
            .iter()
            .find(|fp| fp.label == "d")
            .unwrap();
        assert!(trivial.x.abs() < TOL && trivial.y.abs() < TOL);
        let cell = TAU / 96.0 * 2.0f64.sqrt();
        let min_dist = result.curves[0]
            .polylines
            .iter()
            .flatten()
            .map(|v| torus_distance(*v, [0.0, 0.0]))
            .fold(f64::INFINITY, f64::min);
        assert!(min_dist <= cell);
    }

    #[test]
    fn curve_vertices_sit_on_the_level_set() {
        // Every vertex comes from linear interpolation along one grid
        // edge, so its true residual is bounded by the residuals at the
        // edge's endpoints; fake crossings (poles) would blow past that.
        let grid = 96;
        let h = TAU / grid as f64;
        let eval = |x: f64, y: f64| {
            fixed_point_residual(0.7, 0.9, 0.7, x, y, Family::Phi)
                .value()
                .unwrap_or(f64::INFINITY)
        };
        let edge_bound = |v: &[f64; 2]| {
            let mut bound = f64::INFINITY;
            let (fx, fy) = (v[0] / h, v[1] / h);
            if (fy - fy.round()).abs() < 1e-9 {
                let y = fy.round() * h;
                bound = bound.min(eval(fx.floor() * h, y).abs() + eval(fx.ceil() * h, y).abs());
            }
            if (fx - fx.round()).abs() < 1e-9 {
                let x = fx.round() * h;
                bound = bound.min(eval(x, fy.floor() * h).abs() + eval(x, fy.ceil() * h).abs());
            }
            bound
        };
        let result = fixed_point_curves(&[0.7], 0.9, 0.7, Family::Phi, grid).unwrap();
        let mut residuals = Vec::new();
        for line in &result.curves[0].polylines {
            for v in line {
                let r = fixed_point_residual(0.7, 0.9, 0.7, v[0], v[1], Family::Phi)
                    .value()
                    .expect("vertices avoid singular loci");
                assert!(
                    r.abs() <= edge_bound(v) + 1e-9,
                    "vertex {v:?} has residual {r} beyond its edge bound"
                );
                residuals.push(r.abs());
            }
        }
        assert!(residuals.len() > 50, "expected a substantial curve");
        residuals.sort_by(f64::total_cmp);
        assert!(
            residuals[residuals.len() / 2] < 0.01,
            "median vertex residual too large: {}",
            residuals[residuals.len() / 2]
        );
    }

    #[test]
    fn minimal_grid_does_not_crash() {
        let result = fixed_point_curves(&[0.5], 0.9, 0.7, Family::Phi, 2).unwrap();
        assert_eq!(result.curves.len(), 1);
        assert!(fixed_point_curves(&[0.5], 0.9, 0.7, Family::Phi, 1).is_err());
    }

    fn torus_distance(a: [f64; 2], b: [f64; 2]) -> f64 {
        let d = |u: f64, v: f64| {
            let raw = (u - v).rem_euclid(TAU);
            raw.min(TAU - raw)
        };
        d(a[0], b[0]).hypot(d(a[1], b[1]))
    }

    proptest! {
        #[test]
        fn specialization_matches_mirror_forms(theta1 in 0.05..3.0f64, phi1 in 0.0..TAU) {
            // Equal polar angles and opposite azimuths: the projected
            // Phi states must reduce to their special mirror forms.
            prop_assume!((theta1 - PI / 2.0).abs() > 0.05);
            let pair = phi_a_pair(theta1, phi1);
            let c2 = theta1.cos().powi(2);

            let plus = pt_project(&bell(&pair, BellState::PhiPlus).unwrap()).unwrap();
            let amps = plus.floored_amps().unwrap();
            let lead = amps[0];
            let ratio = (c2 - 1.0) / (c2 + 1.0);
            prop_assert!(
                (amps[1] / lead - Complex64::new(0.0, -2.0 * phi1).exp() * ratio).norm() < 1e-9
            );
            prop_assert!(
                (amps[2] / lead - Complex64::new(0.0, 2.0 * phi1).exp() * ratio).norm() < 1e-9
            );
            prop_assert!((amps[3] - lead).norm() < 1e-9 * lead.norm().max(1.0));

            let minus = pt_project(&bell(&pair, BellState::PhiMinus).unwrap()).unwrap();
            let m = minus.floored_amps().unwrap();
            prop_assert!(m[1].norm() < 1e-11 && m[2].norm() < 1e-11);
            prop_assert!((m[0] + m[3]).norm() < 1e-11);
        }

        #[test]
        fn projection_is_trace_decreasing(
            theta1 in 0.05..3.0f64,
            theta2 in 0.05..3.0f64,
            phi1 in 0.0..TAU,
            phi2 in 0.0..TAU,
        ) {
            let pair = MomentumPair::uncorrelated(
                FourMomentum::from_angles(theta1, phi1).unwrap(),
                FourMomentum::from_angles(theta2, phi2).unwrap(),
            );
            for which in [BellState::PhiPlus, BellState::PsiPlus, BellState::PsiMinus] {
                let projected = pt_project(&bell(&pair, which).unwrap()).unwrap();
                prop_assert!(projected.norm_weight <= 1.0 + TOL);
            }
        }
    }
}
