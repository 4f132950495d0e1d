//! Co-located MIMO signal model: steering vectors, the virtual array,
//! analytic covariances and simulated snapshots.
//!
//! Virtual element `t * N + r` pairs transmitter `t` with receiver `r`, so
//! the virtual steering vector is `a_t(θ) ⊗ a_r(θ)`. Spacings are stored in
//! wavelengths and phases use `cos θ`, which puts broadside at 90°.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{CMatrix, CVector, C64};

/// Default receive spacing, half a wavelength.
pub const DEFAULT_RX_SPACING: f64 = 0.5;

/// Uniform linear transmit and receive apertures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrayGeometry {
    tx_elements: usize,
    rx_elements: usize,
    tx_spacing: f64,
    rx_spacing: f64,
}

impl ArrayGeometry {
    /// `M` transmitters and `N` receivers with `d_r = λ/2` and `d_t = N d_r`.
    pub fn new(tx_elements: usize, rx_elements: usize) -> Result<Self> {
        Self::with_spacings(
            tx_elements,
            rx_elements,
            rx_elements as f64 * DEFAULT_RX_SPACING,
            DEFAULT_RX_SPACING,
        )
    }

    pub fn with_spacings(
        tx_elements: usize,
        rx_elements: usize,
        tx_spacing: f64,
        rx_spacing: f64,
    ) -> Result<Self> {
        if tx_elements == 0 || rx_elements == 0 {
            return Err(Error::domain("element counts must be positive"));
        }
        if !(tx_spacing > 0.0
            && tx_spacing.is_finite()
            && rx_spacing > 0.0
            && rx_spacing.is_finite())
        {
            return Err(Error::domain(
                "element spacings must be positive and finite",
            ));
        }
        Ok(Self {
            tx_elements,
            rx_elements,
            tx_spacing,
            rx_spacing,
        })
    }

    pub fn tx_elements(&self) -> usize {
        self.tx_elements
    }

    pub fn rx_elements(&self) -> usize {
        self.rx_elements
    }

    pub fn tx_spacing(&self) -> f64 {
        self.tx_spacing
    }

    pub fn rx_spacing(&self) -> f64 {
        self.rx_spacing
    }

    /// Number of virtual elements, `M N`.
    pub fn virtual_len(&self) -> usize {
        self.tx_elements * self.rx_elements
    }

    fn side(&self, side: Side) -> (usize, f64) {
        match side {
            Side::Transmit => (self.tx_elements, self.tx_spacing),
            Side::Receive => (self.rx_elements, self.rx_spacing),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Transmit,
    Receive,
}

/// A far-field emitter: direction and average received power (linear).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceSpec {
    pub angle_deg: f64,
    pub power: f64,
}

impl SourceSpec {
    pub fn new(angle_deg: f64, power: f64) -> Result<Self> {
        let s = Self { angle_deg, power };
        s.validate()?;
        Ok(s)
    }

    /// Power set `db` decibels above `noise_power`.
    pub fn from_db(angle_deg: f64, db: f64, noise_power: f64) -> Result<Self> {
        Self::new(angle_deg, noise_power * crate::from_db(db))
    }

    pub fn validate(&self) -> Result<()> {
        check_angle(self.angle_deg)?;
        if !(self.power > 0.0 && self.power.is_finite()) {
            return Err(Error::domain(format!(
                "source power must be positive, got {}",
                self.power
            )));
        }
        Ok(())
    }
}

/// Everything that shapes the received data on the full virtual array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub geometry: ArrayGeometry,
    /// Target returns.
    pub targets: Vec<SourceSpec>,
    /// Interferers that mimic the transmitted waveforms and are therefore
    /// coherent across the whole virtual array.
    pub clutter_interferers: Vec<SourceSpec>,
    /// Narrowband emitters uncorrelated with the transmit waveforms; coherent
    /// only across the receive aperture.
    pub jammers: Vec<SourceSpec>,
    pub noise_power: f64,
    pub snapshots: Option<usize>,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.targets.is_empty() {
            return Err(Error::domain("scenario needs at least one target"));
        }
        for s in self
            .targets
            .iter()
            .chain(&self.clutter_interferers)
            .chain(&self.jammers)
        {
            s.validate()?;
        }
        if !(self.noise_power > 0.0 && self.noise_power.is_finite()) {
            return Err(Error::domain("noise power must be positive"));
        }
        if self.snapshots == Some(0) {
            return Err(Error::domain("snapshot count must be positive"));
        }
        Ok(())
    }
}

/// Target, interference-plus-noise and total data correlation matrices on
/// the full virtual array.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceModel {
    pub r_s: CMatrix,
    pub r_n: CMatrix,
    pub r_x: CMatrix,
}

impl CovarianceModel {
    pub fn dim(&self) -> usize {
        self.r_x.nrows()
    }
}

fn check_angle(angle_deg: f64) -> Result<()> {
    if !(0.0..=180.0).contains(&angle_deg) {
        return Err(Error::domain(format!(
            "angle {angle_deg}° outside [0, 180]"
        )));
    }
    Ok(())
}

/// Transmit or receive steering vector; element `m` is
/// `exp(j 2π m d cos θ)` with `d` the side's spacing in wavelengths.
pub fn steering_vector(geometry: &ArrayGeometry, side: Side, angle_deg: f64) -> Result<CVector> {
    check_angle(angle_deg)?;
    let (len, spacing) = geometry.side(side);
    let phase = 2.0 * PI * spacing * angle_deg.to_radians().cos();
    Ok(CVector::from_fn(len, |m, _| {
        C64::from_polar(1.0, phase * m as f64)
    }))
}

/// Virtual-array response `a_t(θ) ⊗ a_r(θ)`.
pub fn virtual_steering(geometry: &ArrayGeometry, angle_deg: f64) -> Result<CVector> {
    let at = steering_vector(geometry, Side::Transmit, angle_deg)?;
    let ar = steering_vector(geometry, Side::Receive, angle_deg)?;
    Ok(at.kronecker(&ar))
}

fn add_rank_one(acc: &mut CMatrix, v: &CVector, power: f64) {
    let n = v.len();
    for j in 0..n {
        let vj = v[j].conj() * power;
        for i in 0..n {
            acc[(i, j)] += v[i] * vj;
        }
    }
}

/// `σ² (I_M ⊗ a_r a_r^H)`: a white jammer seen through each of the `M`
/// matched filters.
fn add_jammer(acc: &mut CMatrix, geometry: &ArrayGeometry, jammer: &SourceSpec) -> Result<()> {
    let ar = steering_vector(geometry, Side::Receive, jammer.angle_deg)?;
    let n = geometry.rx_elements();
    for t in 0..geometry.tx_elements() {
        let base = t * n;
        for j in 0..n {
            let vj = ar[j].conj() * jammer.power;
            for i in 0..n {
                acc[(base + i, base + j)] += ar[i] * vj;
            }
        }
    }
    Ok(())
}

/// Analytic covariances for `scenario`; `R_x = R_s + R_n` exactly.
pub fn build_covariances(scenario: &Scenario) -> Result<CovarianceModel> {
    scenario.validate()?;
    let g = &scenario.geometry;
    let dim = g.virtual_len();

    let mut r_s = CMatrix::zeros(dim, dim);
    for t in &scenario.targets {
        add_rank_one(&mut r_s, &virtual_steering(g, t.angle_deg)?, t.power);
    }

    let mut r_n = CMatrix::identity(dim, dim).scale(scenario.noise_power);
    for c in &scenario.clutter_interferers {
        add_rank_one(&mut r_n, &virtual_steering(g, c.angle_deg)?, c.power);
    }
    for j in &scenario.jammers {
        add_jammer(&mut r_n, g, j)?;
    }

    let r_x = &r_s + &r_n;
    Ok(CovarianceModel { r_s, r_n, r_x })
}

/// Amplitude statistics of simulated source signals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmplitudeModel {
    /// Circular complex Gaussian with the source's power.
    #[default]
    Gaussian,
    /// Unit-modulus random phase scaled to the source's power.
    ConstantModulus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnapshotOptions {
    pub amplitude: AmplitudeModel,
    pub include_noise: bool,
}

impl Default for SnapshotOptions {
    fn default() -> Self {
        Self {
            amplitude: AmplitudeModel::Gaussian,
            include_noise: true,
        }
    }
}

fn draw(rng: &mut ChaCha8Rng, power: f64, model: AmplitudeModel) -> C64 {
    match model {
        AmplitudeModel::Gaussian => {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re, im) * (power / 2.0).sqrt()
        }
        AmplitudeModel::ConstantModulus => {
            let phase: f64 = rng.random::<f64>() * 2.0 * PI;
            C64::from_polar(power.sqrt(), phase)
        }
    }
}

/// `T` matched-filter output snapshots (columns) of the full virtual array.
pub fn simulate_snapshots(
    scenario: &Scenario,
    snapshots: usize,
    seed: u64,
    options: SnapshotOptions,
) -> Result<CMatrix> {
    scenario.validate()?;
    if snapshots == 0 {
        return Err(Error::domain("snapshot count must be positive"));
    }
    let g = &scenario.geometry;
    let dim = g.virtual_len();
    let (m, n) = (g.tx_elements(), g.rx_elements());

    let coherent: Vec<(CVector, f64)> = scenario
        .targets
        .iter()
        .chain(&scenario.clutter_interferers)
        .map(|s| Ok((virtual_steering(g, s.angle_deg)?, s.power)))
        .collect::<Result<_>>()?;
    let jammers: Vec<(CVector, f64)> = scenario
        .jammers
        .iter()
        .map(|s| Ok((steering_vector(g, Side::Receive, s.angle_deg)?, s.power)))
        .collect::<Result<_>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = CMatrix::zeros(dim, snapshots);
    for col in 0..snapshots {
        let mut column = x.column_mut(col);
        for (b, power) in &coherent {
            let amp = draw(&mut rng, *power, options.amplitude);
            column.axpy(amp, b, C64::new(1.0, 0.0));
        }
        for (ar, power) in &jammers {
            for t in 0..m {
                let amp = draw(&mut rng, *power, options.amplitude);
                for r in 0..n {
                    column[t * n + r] += amp * ar[r];
                }
            }
        }
        if options.include_noise {
            for i in 0..dim {
                column[i] += draw(&mut rng, scenario.noise_power, AmplitudeModel::Gaussian);
            }
        }
    }
    Ok(x)
}

/// `(1/T) Σ x(n) x(n)^H`, Hermitian by construction.
pub fn sample_covariance(snapshots: &CMatrix) -> Result<CMatrix> {
    let (dim, t) = snapshots.shape();
    if t == 0 {
        return Err(Error::domain("no snapshots"));
    }
    let inv_t = 1.0 / t as f64;
    let mut r = CMatrix::zeros(dim, dim);
    for j in 0..dim {
        for i in 0..=j {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..t {
                acc += snapshots[(i, k)] * snapshots[(j, k)].conj();
            }
            let v = acc * inv_t;
            if i == j {
                r[(i, i)] = C64::new(v.re, 0.0);
            } else {
                r[(i, j)] = v;
                r[(j, i)] = v.conj();
            }
        }
    }
    Ok(r)
}

/// Covariances with `R_x` replaced by the sample covariance of simulated
/// snapshots. `R_s` and `R_n` stay analytic so that SINR remains measurable.
pub fn build_sampled_covariances(
    scenario: &Scenario,
    snapshots: usize,
    seed: u64,
) -> Result<CovarianceModel> {
    let mut model = build_covariances(scenario)?;
    let x = simulate_snapshots(scenario, snapshots, seed, SnapshotOptions::default())?;
    model.r_x = sample_covariance(&x)?;
    Ok(model)
}

/// Real matrix of `|R_ij|`, handy for debugging dumps.
pub fn magnitude(r: &CMatrix) -> DMatrix<f64> {
    r.map(|z| z.norm())
}
