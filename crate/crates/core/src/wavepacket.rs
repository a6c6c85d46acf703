//! Discretized wave packets and their measurement.
//!
//! The continuum integral over momentum directions is replaced by a
//! seeded finite quadrature: samples carry complex weights with
//! `Σ|f|² = 1`, folding the invariant measure into the envelope. A
//! packet qubit stores logical amplitudes `(alpha, beta)` over the
//! `Φ±` Bell basis of mirror-correlated momentum pairs; the correlation
//! keeps the amplitudes untouched by any `rz·ry·bz` transformation, and
//! the transverse projection then lands the two logical states in
//! orthogonal floored subspaces, so the post-selected readout recovers
//! them exactly.
//!
//! The single-mode packet is the baseline the encoding is measured
//! against: its per-sample Wigner phases do not cancel, and the
//! effective 2×2 density matrix left behind by the transverse
//! projection decoheres under rotations.

use nalgebra::{Matrix2, SVector, Vector2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::bell::{
    bell, component_phases, pt_project, transform_bell, BellState, Correlation, MomentumPair,
    TwoModeState,
};
use crate::error::{Error, Result};
use crate::helicity::{triad, Helicity};
use crate::kinematics::{FourMomentum, LorentzTransform};
use crate::little_group::{wigner_angle_numeric, WignerPhase};
use crate::tol;

/// Serialize a complex number as a `[re, im]` pair.
mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// Envelope schemes for drawing momentum directions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "kebab-case")]
pub enum Envelope {
    /// Polar angle normally distributed around `theta0`, azimuth uniform.
    GaussianCone { theta0: f64, width: f64 },
    /// Direction uniform on the spherical cap `theta <= theta_max`.
    UniformCap { theta_max: f64 },
    /// Fixed polar angle, azimuth uniform.
    Ring { theta0: f64 },
}

impl Envelope {
    fn validate(&self) -> Result<()> {
        match *self {
            Envelope::GaussianCone { theta0, width } => {
                if !theta0.is_finite() || !width.is_finite() || width <= 0.0 {
                    return Err(Error::Config(format!(
                        "gaussian-cone requires finite theta0 and width > 0, got ({theta0}, {width})"
                    )));
                }
            }
            Envelope::UniformCap { theta_max } => {
                if !(theta_max > 0.0 && theta_max <= PI) {
                    return Err(Error::Config(format!(
                        "uniform-cap requires theta_max in (0, pi], got {theta_max}"
                    )));
                }
            }
            Envelope::Ring { theta0 } => {
                if !theta0.is_finite() {
                    return Err(Error::Config("ring requires finite theta0".into()));
                }
            }
        }
        Ok(())
    }
}

/// Sampling metadata kept alongside a packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub envelope: Envelope,
    pub seed: u64,
    pub band_half_width: f64,
    /// Samples that entered the polar exclusion band under the most
    /// recent transformation.
    pub band_crossings: usize,
}

/// One quadrature node: a correlated momentum pair and its weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub pair: MomentumPair,
    pub f: Complex64,
}

/// Bell-encoded wave-packet qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct WavePacketQubit {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub samples: Vec<Sample>,
    pub quadrature: Quadrature,
}

fn check_logical_amplitudes(alpha: Complex64, beta: Complex64) -> Result<()> {
    if !alpha.re.is_finite()
        || !alpha.im.is_finite()
        || !beta.re.is_finite()
        || !beta.im.is_finite()
    {
        return Err(Error::NonFinite("logical amplitudes"));
    }
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::Config(format!(
            "logical amplitudes must be normalized, |alpha|^2 + |beta|^2 = {norm}"
        )));
    }
    Ok(())
}

fn draw_directions(
    envelope: &Envelope,
    n_samples: usize,
    seed: u64,
    band_half_width: f64,
) -> Result<Vec<(f64, f64)>> {
    envelope.validate()?;
    if n_samples == 0 {
        return Err(Error::EmptyPacket("n_samples must be at least 1"));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n_samples);
    let max_attempts = 1000 * n_samples.max(64);
    let mut attempts = 0;
    while out.len() < n_samples && attempts < max_attempts {
        attempts += 1;
        let (theta, phi) = match *envelope {
            Envelope::GaussianCone { theta0, width } => {
                let z: f64 = rng.sample(StandardNormal);
                (theta0 + width * z, rng.random_range(0.0..TAU))
            }
            Envelope::UniformCap { theta_max } => {
                let ct = rng.random_range(theta_max.cos()..1.0);
                (ct.acos(), rng.random_range(0.0..TAU))
            }
            Envelope::Ring { theta0 } => (theta0, rng.random_range(0.0..TAU)),
        };
        if !(0.0..=PI).contains(&theta) {
            continue;
        }
        if theta < tol::STANDARD_DIRECTION || (theta - FRAC_PI_2).abs() < band_half_width {
            continue;
        }
        out.push((theta, phi));
    }
    if out.len() < n_samples {
        return Err(Error::EmptyPacket("exclusion bands rejected every draw"));
    }
    Ok(out)
}

/// Builds a Bell-encoded packet with mirror-correlated pairs.
pub fn build_packet(
    alpha: Complex64,
    beta: Complex64,
    envelope: &Envelope,
    n_samples: usize,
    seed: u64,
) -> Result<WavePacketQubit> {
    build_packet_tagged(
        alpha,
        beta,
        envelope,
        n_samples,
        seed,
        tol::EQUATOR_BAND,
        Correlation::PhiA,
    )
}

/// As [`build_packet`], with an explicit exclusion band and correlation
/// tag. `Correlation::Uncorrelated` reuses the drawn direction for the
/// partner, which breaks the phase cancellation on purpose.
pub fn build_packet_tagged(
    alpha: Complex64,
    beta: Complex64,
    envelope: &Envelope,
    n_samples: usize,
    seed: u64,
    band_half_width: f64,
    correlation: Correlation,
) -> Result<WavePacketQubit> {
    check_logical_amplitudes(alpha, beta)?;
    let directions = draw_directions(envelope, n_samples, seed, band_half_width)?;
    let weight = Complex64::new(1.0 / (n_samples as f64).sqrt(), 0.0);
    let samples = directions
        .into_iter()
        .map(|(theta, phi)| {
            let pair = match correlation {
                Correlation::Uncorrelated => {
                    let p = FourMomentum::from_angles(theta, phi)?;
                    Ok::<_, Error>(MomentumPair::uncorrelated(p, p))
                }
                tag => MomentumPair::correlated(theta, phi, tag),
            }?;
            Ok(Sample { pair, f: weight })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WavePacketQubit {
        alpha,
        beta,
        samples,
        quadrature: Quadrature {
            envelope: *envelope,
            seed,
            band_half_width,
            band_crossings: 0,
        },
    })
}

impl WavePacketQubit {
    /// `Σ|f|²` over the quadrature.
    pub fn weight_norm(&self) -> f64 {
        self.samples.iter().map(|s| s.f.norm_sqr()).sum()
    }
}

/// Transforms every sample pair, leaving the logical amplitudes
/// untouched. Pairs whose polar angles enter the exclusion band are
/// counted in the quadrature metadata.
pub fn transform_packet(packet: &WavePacketQubit, t: &LorentzTransform) -> WavePacketQubit {
    let mut band_crossings = 0;
    let band = packet.quadrature.band_half_width;
    let samples = packet
        .samples
        .iter()
        .map(|s| {
            let p1 = t.apply(&s.pair.p1);
            let p2 = t.apply(&s.pair.p2);
            if (p1.theta() - FRAC_PI_2).abs() < band || (p2.theta() - FRAC_PI_2).abs() < band {
                band_crossings += 1;
            }
            let moved = MomentumPair {
                p1,
                p2,
                correlation: s.pair.correlation,
            };
            let pair = if moved.correlation_holds(tol::GEOMETRY) {
                moved
            } else {
                MomentumPair {
                    correlation: Correlation::Uncorrelated,
                    ..moved
                }
            };
            Sample { pair, f: s.f }
        })
        .collect();
    WavePacketQubit {
        alpha: packet.alpha,
        beta: packet.beta,
        samples,
        quadrature: Quadrature {
            band_crossings,
            ..packet.quadrature
        },
    }
}

/// Outcome of the per-sample phase verification run alongside a
/// transformation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct InvarianceCheck {
    /// Largest deviation of any Bell coefficient from its original value
    /// after transforming the sample's `Φ±` states.
    pub max_amplitude_deviation: f64,
    /// Largest deviation of a net component phase from unity.
    pub max_phase_deviation: f64,
}

/// Transforms a packet and verifies, per sample, that the net Wigner
/// phases on the Bell components are unity and the transformed Bell
/// coefficients match the originals.
pub fn transform_packet_verified(
    packet: &WavePacketQubit,
    t: &LorentzTransform,
) -> Result<(WavePacketQubit, InvarianceCheck)> {
    let mut max_amplitude_deviation = 0.0f64;
    let mut max_phase_deviation = 0.0f64;
    for sample in &packet.samples {
        let phases = component_phases(&sample.pair, t)?;
        // Phi states live on the ++ and -- components.
        for idx in [0, 3] {
            let dev = (phases[idx] - Complex64::new(1.0, 0.0)).norm();
            max_phase_deviation = max_phase_deviation.max(dev);
        }
        for which in [BellState::PhiPlus, BellState::PhiMinus] {
            let state = bell(&sample.pair, which)?;
            let moved = transform_bell(&state, t)?;
            let before = state.helicity_coefficients()?;
            let after = moved.helicity_coefficients()?;
            for (a, b) in before.iter().zip(after) {
                max_amplitude_deviation = max_amplitude_deviation.max((a - b).norm());
            }
        }
    }
    Ok((
        transform_packet(packet, t),
        InvarianceCheck {
            max_amplitude_deviation,
            max_phase_deviation,
        },
    ))
}

/// Exact measurement statistics of a packet under the two-outcome
/// floored-Bell measurement, conditioned on joint detection.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MeasurementRecord {
    /// `P(Γ1 | detect)`: the floored `Φ−` outcome.
    pub gamma1_given_detect: f64,
    /// `P(Γ2 | detect)`.
    pub gamma2_given_detect: f64,
    /// Probability that both modes survive the transverse projection.
    pub detect_prob: f64,
}

struct SampleStats {
    weight: f64,
    detect: f64,
    gamma1_given_detect: f64,
}

fn floored_unit(state: &TwoModeState) -> Result<SVector<Complex64, 4>> {
    let v = state.floored_amps()?;
    Ok(v / Complex64::new(v.norm(), 0.0))
}

fn sample_statistics(packet: &WavePacketQubit) -> Result<Vec<SampleStats>> {
    packet
        .samples
        .iter()
        .map(|sample| {
            let plus = pt_project(&bell(&sample.pair, BellState::PhiPlus)?)?;
            let minus = pt_project(&bell(&sample.pair, BellState::PhiMinus)?);
            let weight = sample.f.norm_sqr();
            match minus {
                Err(Error::NullOutcome(_)) => {
                    // The floored Phi- direction vanished; only the
                    // alpha component can be detected and it always
                    // lands in Γ2.
                    Ok(SampleStats {
                        weight,
                        detect: packet.alpha.norm_sqr() * plus.norm_weight,
                        gamma1_given_detect: 0.0,
                    })
                }
                Err(e) => Err(e),
                Ok(minus) => {
                    let raw_plus = plus.floored_amps()?;
                    let raw_minus = minus.floored_amps()?;
                    let detect = (raw_plus * packet.alpha + raw_minus * packet.beta).norm_squared();
                    let unit_plus = floored_unit(&plus)?;
                    let unit_minus = floored_unit(&minus)?;
                    // Post-selected state with the logical amplitudes
                    // carried onto the renormalized projected basis.
                    let conditional = unit_plus * packet.alpha + unit_minus * packet.beta;
                    let gamma1 =
                        unit_minus.dotc(&conditional).norm_sqr() / conditional.norm_squared();
                    Ok(SampleStats {
                        weight,
                        detect,
                        gamma1_given_detect: gamma1,
                    })
                }
            }
        })
        .collect()
}

/// Measures a packet: post-selects on joint transverse detection, then
/// distinguishes the floored `Φ−` ray (`Γ1`) from its complement (`Γ2`).
pub fn measure_packet(packet: &WavePacketQubit) -> Result<MeasurementRecord> {
    if packet.samples.is_empty() {
        return Err(Error::EmptyPacket("measurement needs at least one sample"));
    }
    let stats = sample_statistics(packet)?;
    let detect_prob: f64 = stats.iter().map(|s| s.weight * s.detect).sum();
    if detect_prob < tol::NULL_OUTCOME {
        return Err(Error::AllNull);
    }
    let gamma1: f64 = stats
        .iter()
        .map(|s| s.weight * s.detect * s.gamma1_given_detect)
        .sum::<f64>()
        / detect_prob;
    Ok(MeasurementRecord {
        gamma1_given_detect: gamma1,
        gamma2_given_detect: 1.0 - gamma1,
        detect_prob,
    })
}

/// Outcome of one simulated shot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Gamma1,
    Gamma2,
    Null,
}

/// Tallies of simulated shots.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct ShotTallies {
    pub gamma1: u64,
    pub gamma2: u64,
    pub null: u64,
}

/// Draws `shots` single-shot outcomes with a seeded generator.
pub fn draw_shots(packet: &WavePacketQubit, shots: u64, seed: u64) -> Result<ShotTallies> {
    let stats = sample_statistics(packet)?;
    let total_weight: f64 = stats.iter().map(|s| s.weight).sum();
    if total_weight <= 0.0 {
        return Err(Error::EmptyPacket("no quadrature weight"));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut tallies = ShotTallies::default();
    for _ in 0..shots {
        let mut pick = rng.random_range(0.0..total_weight);
        let mut chosen = stats.last().expect("nonempty");
        for s in &stats {
            if pick < s.weight {
                chosen = s;
                break;
            }
            pick -= s.weight;
        }
        if rng.random_range(0.0..1.0) >= chosen.detect {
            tallies.null += 1;
        } else if rng.random_range(0.0..1.0) < chosen.gamma1_given_detect {
            tallies.gamma1 += 1;
        } else {
            tallies.gamma2 += 1;
        }
    }
    Ok(tallies)
}

/// Baseline packet: one momentum per sample, with per-helicity phase
/// factors accumulated by transformations.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleModePacket {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub samples: Vec<SingleSample>,
    pub quadrature: Quadrature,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingleSample {
    pub p: FourMomentum,
    pub f: Complex64,
    pub phase_plus: Complex64,
    pub phase_minus: Complex64,
}

pub fn build_single_mode(
    alpha: Complex64,
    beta: Complex64,
    envelope: &Envelope,
    n_samples: usize,
    seed: u64,
) -> Result<SingleModePacket> {
    check_logical_amplitudes(alpha, beta)?;
    let directions = draw_directions(envelope, n_samples, seed, tol::EQUATOR_BAND)?;
    let weight = Complex64::new(1.0 / (n_samples as f64).sqrt(), 0.0);
    let one = Complex64::new(1.0, 0.0);
    let samples = directions
        .into_iter()
        .map(|(theta, phi)| {
            Ok(SingleSample {
                p: FourMomentum::from_angles(theta, phi)?,
                f: weight,
                phase_plus: one,
                phase_minus: one,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SingleModePacket {
        alpha,
        beta,
        samples,
        quadrature: Quadrature {
            envelope: *envelope,
            seed,
            band_half_width: tol::EQUATOR_BAND,
            band_crossings: 0,
        },
    })
}

/// Moves every sample along the orbit and multiplies the per-helicity
/// Wigner phase factors in.
pub fn transform_single_mode(
    packet: &SingleModePacket,
    t: &LorentzTransform,
) -> Result<SingleModePacket> {
    let samples = packet
        .samples
        .iter()
        .map(|s| {
            let phase = WignerPhase::new(wigner_angle_numeric(t, &s.p)?);
            Ok(SingleSample {
                p: t.apply(&s.p),
                f: s.f,
                phase_plus: s.phase_plus * phase.factor(Helicity::Plus),
                phase_minus: s.phase_minus * phase.factor(Helicity::Minus),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SingleModePacket {
        alpha: packet.alpha,
        beta: packet.beta,
        samples,
        quadrature: packet.quadrature,
    })
}

/// Effective 2×2 helicity matrix left behind by the transverse
/// projection, renormalized, with the lost trace reported separately.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveDensityMatrix {
    pub m: Matrix2<Complex64>,
    pub trace_deficit: f64,
}

impl EffectiveDensityMatrix {
    /// Trace retained by the projection before renormalization.
    pub fn pre_trace(&self) -> f64 {
        1.0 - self.trace_deficit
    }

    pub fn hermiticity_residual(&self) -> f64 {
        (self.m - self.m.adjoint()).map(|z| z.norm()).max()
    }

    /// Eigenvalues of the renormalized matrix, descending.
    pub fn eigenvalues(&self) -> (f64, f64) {
        hermitian2_eigenvalues(&self.m)
    }

    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        (self.m - other.m).map(|z| z.norm_sqr()).sum().sqrt()
    }
}

fn hermitian2_eigenvalues(m: &Matrix2<Complex64>) -> (f64, f64) {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d).powi(2) + m[(0, 1)].norm_sqr()).sqrt();
    (mean + radius, mean - radius)
}

/// Accumulates the floored outer products of a single-mode packet:
/// the discrete transverse-projection statistical mixture.
pub fn effective_density_matrix(packet: &SingleModePacket) -> Result<EffectiveDensityMatrix> {
    if packet.samples.is_empty() {
        return Err(Error::EmptyPacket(
            "density matrix needs at least one sample",
        ));
    }
    let mut m = Matrix2::<Complex64>::zeros();
    for s in &packet.samples {
        let psi = triad(&s.p, Helicity::Plus).v * (packet.alpha * s.phase_plus)
            + triad(&s.p, Helicity::Minus).v * (packet.beta * s.phase_minus);
        let floored = Vector2::new(psi[0], psi[1]);
        m += floored * floored.adjoint() * Complex64::new(s.f.norm_sqr(), 0.0);
    }
    let pre_trace = (m[(0, 0)] + m[(1, 1)]).re;
    if pre_trace < tol::NULL_OUTCOME {
        return Err(Error::AllNull);
    }
    Ok(EffectiveDensityMatrix {
        m: m / Complex64::new(pre_trace, 0.0),
        trace_deficit: 1.0 - pre_trace,
    })
}

/// Minimum error probability for distinguishing two equiprobable states
/// given their (renormalized) effective density matrices.
pub fn helstrom_error(a: &EffectiveDensityMatrix, b: &EffectiveDensityMatrix) -> f64 {
    let (l1, l2) = hermitian2_eigenvalues(&(a.m - b.m));
    0.5 * (1.0 - 0.5 * (l1.abs() + l2.abs()))
}

/// Quadrature parameters shared by the channel-comparison rows.
#[derive(Debug, Clone, Copy)]
pub struct PacketParams {
    pub envelope: Envelope,
    pub n_samples: usize,
    pub seed: u64,
}

/// One row of the encoding comparison.
#[derive(Debug, Clone, Serialize)]
pub struct ChannelRow {
    pub lambda_desc: String,
    pub encoding: &'static str,
    pub error_prob: f64,
    pub detect_prob: f64,
}

/// Compares the Bell encoding against the single-mode baseline for each
/// transformation: discrimination error over pairs of initially
/// orthogonal preparations and the detection probability of the channel.
///
/// `preparations` holds consecutive orthogonal pairs (its length must be
/// even). Bell rows discriminate the post-selected pure states per
/// sample (worst case over samples and pairs); single-mode rows apply
/// the Helstrom bound to the pair of effective density matrices.
pub fn distinguishability_report(
    preparations: &[(Complex64, Complex64)],
    transforms: &[LorentzTransform],
    params: &PacketParams,
) -> Result<Vec<ChannelRow>> {
    if preparations.len() < 2 || !preparations.len().is_multiple_of(2) || transforms.is_empty() {
        return Err(Error::Config(
            "need an even number of preparations (>= 2) and at least one transform".into(),
        ));
    }
    for pair in preparations.chunks_exact(2) {
        let (a1, b1) = pair[0];
        let (a2, b2) = pair[1];
        let overlap = (a1.conj() * a2 + b1.conj() * b2).norm();
        if overlap > 1e-9 {
            return Err(Error::Config(format!(
                "each preparation pair must be orthogonal, overlap {overlap}"
            )));
        }
    }
    let n_pairs = preparations.chunks_exact(2).len();

    let rows = transforms
        .par_iter()
        .map(|t| -> Result<[ChannelRow; 2]> {
            let lambda_desc = t.to_string();

            // Bell channel.
            let mut bell_error = 0.0f64;
            let mut bell_detect = 0.0f64;
            for pair in preparations.chunks_exact(2) {
                for (alpha, beta) in pair {
                    let packet = build_packet(
                        *alpha,
                        *beta,
                        &params.envelope,
                        params.n_samples,
                        params.seed,
                    )?;
                    let moved = transform_packet(&packet, t);
                    bell_detect += measure_packet(&moved)?.detect_prob;
                }
                let (a1, b1) = pair[0];
                let (a2, b2) = pair[1];
                let base = build_packet(a1, b1, &params.envelope, params.n_samples, params.seed)?;
                let moved = transform_packet(&base, t);
                for sample in &moved.samples {
                    let plus =
                        floored_unit(&pt_project(&bell(&sample.pair, BellState::PhiPlus)?)?)?;
                    let minus =
                        floored_unit(&pt_project(&bell(&sample.pair, BellState::PhiMinus)?)?)?;
                    let u1 = plus * a1 + minus * b1;
                    let u2 = plus * a2 + minus * b2;
                    let overlap = u1.dotc(&u2).norm_sqr() / (u1.norm_squared() * u2.norm_squared());
                    bell_error = bell_error.max(0.5 * (1.0 - (1.0 - overlap).sqrt()));
                }
            }
            bell_detect /= (2 * n_pairs) as f64;

            // Single-mode baseline.
            let mut single_error = 0.0f64;
            let mut single_detect = 0.0f64;
            for pair in preparations.chunks_exact(2) {
                let mut rhos = Vec::with_capacity(2);
                for (alpha, beta) in pair {
                    let packet = build_single_mode(
                        *alpha,
                        *beta,
                        &params.envelope,
                        params.n_samples,
                        params.seed,
                    )?;
                    let moved = transform_single_mode(&packet, t)?;
                    let rho = effective_density_matrix(&moved)?;
                    single_detect += rho.pre_trace();
                    rhos.push(rho);
                }
                single_error = single_error.max(helstrom_error(&rhos[0], &rhos[1]));
            }
            single_detect /= (2 * n_pairs) as f64;

            Ok([
                ChannelRow {
                    lambda_desc: lambda_desc.clone(),
                    encoding: "bell",
                    error_prob: bell_error,
                    detect_prob: bell_detect,
                },
                ChannelRow {
                    lambda_desc,
                    encoding: "single-mode",
                    error_prob: single_error,
                    detect_prob: single_detect,
                },
            ])
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(rows.into_iter().flatten().collect())
}

// ---------------------------------------------------------------------
// Packet serialization: partner angles are recomputed on load, never
// stored.
// ---------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PacketFile {
    #[serde(with = "complex_pair")]
    alpha: Complex64,
    #[serde(with = "complex_pair")]
    beta: Complex64,
    samples: Vec<SampleFile>,
    envelope: Envelope,
    seed: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SampleFile {
    theta1: f64,
    phi1: f64,
    #[serde(with = "complex_pair")]
    f: Complex64,
}

/// Serializes a mirror-correlated packet to its JSON form.
pub fn packet_to_json(packet: &WavePacketQubit) -> Result<String> {
    for s in &packet.samples {
        if s.pair.correlation != Correlation::PhiA || !s.pair.correlation_holds(1e-9) {
            return Err(Error::Config(
                "only mirror-correlated (phi-a) packets are serializable".into(),
            ));
        }
    }
    let file = PacketFile {
        alpha: packet.alpha,
        beta: packet.beta,
        samples: packet
            .samples
            .iter()
            .map(|s| SampleFile {
                theta1: s.pair.p1.theta(),
                phi1: s.pair.p1.phi(),
                f: s.f,
            })
            .collect(),
        envelope: packet.quadrature.envelope,
        seed: packet.quadrature.seed,
    };
    serde_json::to_string_pretty(&file).map_err(|e| Error::Config(e.to_string()))
}

/// Parses a packet from JSON, recomputing partner momenta and
/// re-checking every stored invariant.
pub fn packet_from_json(text: &str) -> Result<WavePacketQubit> {
    let file: PacketFile =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("packet JSON: {e}")))?;
    check_logical_amplitudes(file.alpha, file.beta)?;
    file.envelope.validate()?;
    if file.samples.is_empty() {
        return Err(Error::EmptyPacket("packet file has no samples"));
    }
    let mut weight_norm = 0.0;
    let samples = file
        .samples
        .iter()
        .map(|s| {
            if !s.theta1.is_finite() || !s.phi1.is_finite() {
                return Err(Error::NonFinite("packet sample angles"));
            }
            if !s.f.re.is_finite() || !s.f.im.is_finite() {
                return Err(Error::NonFinite("packet sample weight"));
            }
            weight_norm += s.f.norm_sqr();
            Ok(Sample {
                pair: MomentumPair::correlated(s.theta1, s.phi1, Correlation::PhiA)?,
                f: s.f,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if (weight_norm - 1.0).abs() > 1e-8 {
        return Err(Error::Config(format!(
            "sample weights must satisfy sum |f|^2 = 1, got {weight_norm}"
        )));
    }
    Ok(WavePacketQubit {
        alpha: file.alpha,
        beta: file.beta,
        samples,
        quadrature: Quadrature {
            envelope: file.envelope,
            seed: file.seed,
            band_half_width: tol::EQUATOR_BAND,
            band_crossings: 0,
        },
    })
}
