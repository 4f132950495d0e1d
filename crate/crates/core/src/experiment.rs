//! Experiment configuration, single designs and angle sweeps.
//!
//! A configuration is a TOML file describing the array, the target, the
//! interferers, the selection parameters and (for sweeps) the angle grid.
//! See `configs/` in the repository for commented examples.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::array_model::{
    build_covariances, build_sampled_covariances, ArrayGeometry, CovarianceModel, Scenario,
    SourceSpec,
};
use crate::beamformer::{evaluate_selection, sinr_of, subarray_restrict, BeamWeights, Selection};
use crate::error::{Error, Result};
use crate::oracle::{self, RandomBaseline};
use crate::sca::{
    run_sca, IterationRecord, Normalization, ProblemScaling, ScaParams, SelectionResult,
};
use crate::{from_db, CVector, C64};

/// Environment variable overriding the default sweep worker count.
pub const JOBS_ENV: &str = "MIMO_SELECT_JOBS";

/// Exact header of sweep CSV files.
pub const SWEEP_HEADER: [&str; 11] = [
    "angle_deg",
    "sinr_full_db",
    "sinr_sca_db",
    "sinr_oracle_db",
    "sinr_random_median_db",
    "sinr_random_best_db",
    "tx_mask",
    "rx_mask",
    "iterations",
    "converged",
    "status",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayConfig {
    pub tx_elements: usize,
    pub rx_elements: usize,
    /// Receive spacing in wavelengths; defaults to 0.5.
    pub rx_spacing: Option<f64>,
    /// Transmit spacing in wavelengths; defaults to `N * rx_spacing`.
    pub tx_spacing: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetConfig {
    /// Required by `design`; sweeps substitute each grid angle.
    pub angle_deg: Option<f64>,
    pub snr_db: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterferenceKind {
    /// Transmits the radar's own waveforms; coherent over the virtual array.
    Deliberate,
    /// Shares the band with uncorrelated waveforms; coherent over the
    /// receive aperture only.
    Coexisting,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterfererConfig {
    /// Absolute direction, used in `fixed` mode.
    pub angle_deg: Option<f64>,
    /// Offset from the target direction, used in `relative` mode.
    pub offset_deg: Option<f64>,
    pub inr_db: f64,
    pub kind: InterferenceKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnapshotConfig {
    pub count: usize,
    #[serde(default)]
    pub seed: u64,
}

/// Selection parameters as written in the configuration file; unset fields
/// take the [`ScaParams`] defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelectionConfig {
    pub tx_select: usize,
    pub rx_select: usize,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub alpha0: Option<f64>,
    pub beta0: Option<f64>,
    pub epsilon: Option<f64>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub stall_window: Option<usize>,
    pub subproblem_tol: Option<f64>,
    pub normalization: Option<Normalization>,
}

impl SelectionConfig {
    pub fn params(&self) -> ScaParams {
        let d = ScaParams::new(self.tx_select, self.rx_select);
        ScaParams {
            alpha: self.alpha.unwrap_or(d.alpha),
            beta: self.beta.unwrap_or(d.beta),
            alpha0: self.alpha0.unwrap_or(d.alpha0),
            beta0: self.beta0.unwrap_or(d.beta0),
            epsilon: self.epsilon.unwrap_or(d.epsilon),
            tol: self.tol.unwrap_or(d.tol),
            max_iter: self.max_iter.unwrap_or(d.max_iter),
            stall_window: self.stall_window.unwrap_or(d.stall_window),
            subproblem_tol: self.subproblem_tol.unwrap_or(d.subproblem_tol),
            normalization: self.normalization.unwrap_or(d.normalization),
            ..d
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterferenceMode {
    /// Interferers stay at their configured `angle_deg`.
    #[default]
    Fixed,
    /// Interferers sit at `target + offset_deg`.
    Relative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub start_deg: f64,
    pub stop_deg: f64,
    pub step_deg: f64,
    pub mode: InterferenceMode,
    /// Random configurations drawn per angle.
    pub trials: usize,
    pub seed: u64,
    /// Run the exhaustive oracle at every angle.
    pub oracle: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            start_deg: 0.0,
            stop_deg: 90.0,
            step_deg: 1.0,
            mode: InterferenceMode::Fixed,
            trials: 20,
            seed: 0,
            oracle: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_noise_power")]
    pub noise_power: f64,
    pub array: ArrayConfig,
    pub target: TargetConfig,
    #[serde(default)]
    pub interferers: Vec<InterfererConfig>,
    pub selection: SelectionConfig,
    #[serde(default)]
    pub snapshots: Option<SnapshotConfig>,
    #[serde(default)]
    pub sweep: SweepConfig,
}

fn default_noise_power() -> f64 {
    1.0
}

fn ensure(ok: bool, field: impl Into<String>, message: impl Into<String>) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::config(field, message))
    }
}

fn finite_angle(v: f64) -> bool {
    v.is_finite() && (0.0..=180.0).contains(&v)
}

/// Maps a direction outside `[0°, 180°]` onto the equivalent direction
/// inside it. Steering vectors depend on `cos θ` only, so the reflection
/// leaves the array response unchanged.
pub fn fold_angle(deg: f64) -> f64 {
    let mut a = deg.rem_euclid(360.0);
    if a > 180.0 {
        a = 360.0 - a;
    }
    a
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
            let field = e
                .message()
                .split('`')
                .nth(1)
                .map(str::to_owned)
                .unwrap_or_else(|| "config".into());
            Error::config(field, e.message().trim().to_owned())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(
            self.noise_power > 0.0 && self.noise_power.is_finite(),
            "noise_power",
            "must be positive",
        )?;
        ensure(
            self.array.tx_elements >= 1,
            "array.tx_elements",
            "must be at least 1",
        )?;
        ensure(
            self.array.rx_elements >= 1,
            "array.rx_elements",
            "must be at least 1",
        )?;
        for (name, v) in [
            ("array.rx_spacing", self.array.rx_spacing),
            ("array.tx_spacing", self.array.tx_spacing),
        ] {
            if let Some(v) = v {
                ensure(v > 0.0 && v.is_finite(), name, "must be positive")?;
            }
        }
        if let Some(a) = self.target.angle_deg {
            ensure(
                finite_angle(a),
                "target.angle_deg",
                format!("{a}° is outside [0, 180]"),
            )?;
        }
        ensure(
            self.target.snr_db.is_finite(),
            "target.snr_db",
            "must be finite",
        )?;
        for (i, itf) in self.interferers.iter().enumerate() {
            ensure(
                itf.inr_db.is_finite(),
                format!("interferers[{i}].inr_db"),
                "must be finite",
            )?;
            if let Some(a) = itf.angle_deg {
                ensure(
                    finite_angle(a),
                    format!("interferers[{i}].angle_deg"),
                    format!("{a}° is outside [0, 180]"),
                )?;
            }
            if let Some(o) = itf.offset_deg {
                ensure(
                    o.is_finite(),
                    format!("interferers[{i}].offset_deg"),
                    "must be finite",
                )?;
            }
        }
        let geometry = self.geometry()?;
        self.selection
            .params()
            .validate(&geometry)
            .map_err(|e| match e {
                Error::Config { field, message } => {
                    Error::config(format!("selection.{field}"), message)
                }
                other => other,
            })?;
        if let Some(s) = &self.snapshots {
            ensure(s.count >= 1, "snapshots.count", "must be at least 1")?;
        }
        let sw = &self.sweep;
        ensure(
            sw.step_deg > 0.0 && sw.step_deg.is_finite(),
            "sweep.step_deg",
            "must be positive",
        )?;
        ensure(
            finite_angle(sw.start_deg),
            "sweep.start_deg",
            "must lie in [0, 180]",
        )?;
        ensure(
            finite_angle(sw.stop_deg),
            "sweep.stop_deg",
            "must lie in [0, 180]",
        )?;
        ensure(
            sw.stop_deg >= sw.start_deg,
            "sweep",
            "empty angle grid: stop_deg < start_deg",
        )?;
        ensure(sw.trials >= 1, "sweep.trials", "must be at least 1")?;
        Ok(())
    }

    /// Checks what a sweep needs beyond [`ExperimentConfig::validate`].
    pub fn validate_sweep(&self) -> Result<()> {
        for (i, itf) in self.interferers.iter().enumerate() {
            match self.sweep.mode {
                InterferenceMode::Fixed => ensure(
                    itf.angle_deg.is_some(),
                    format!("interferers[{i}].angle_deg"),
                    "required in fixed mode",
                )?,
                InterferenceMode::Relative => ensure(
                    itf.offset_deg.is_some(),
                    format!("interferers[{i}].offset_deg"),
                    "required in relative mode",
                )?,
            }
        }
        Ok(())
    }

    pub fn geometry(&self) -> Result<ArrayGeometry> {
        let rx = self
            .array
            .rx_spacing
            .unwrap_or(crate::array_model::DEFAULT_RX_SPACING);
        let tx = self
            .array
            .tx_spacing
            .unwrap_or(self.array.rx_elements as f64 * rx);
        ArrayGeometry::with_spacings(self.array.tx_elements, self.array.rx_elements, tx, rx)
    }

    /// The configured target direction, required for single designs.
    pub fn design_angle(&self) -> Result<f64> {
        self.target
            .angle_deg
            .ok_or_else(|| Error::config("target.angle_deg", "required for a single design"))
    }

    /// Scenario with the target at `target_deg`. Interferers use their
    /// absolute angle in fixed mode and `target + offset` in relative mode.
    pub fn scenario_at(&self, target_deg: f64, mode: InterferenceMode) -> Result<Scenario> {
        let geometry = self.geometry()?;
        let target = SourceSpec::from_db(target_deg, self.target.snr_db, self.noise_power)
            .map_err(|e| Error::config("target.angle_deg", e.to_string()))?;
        let mut clutter = Vec::new();
        let mut jammers = Vec::new();
        for (i, itf) in self.interferers.iter().enumerate() {
            let angle = match mode {
                InterferenceMode::Fixed => itf.angle_deg.ok_or_else(|| {
                    Error::config(
                        format!("interferers[{i}].angle_deg"),
                        "required in fixed mode",
                    )
                })?,
                InterferenceMode::Relative => {
                    let off = itf.offset_deg.ok_or_else(|| {
                        Error::config(
                            format!("interferers[{i}].offset_deg"),
                            "required in relative mode",
                        )
                    })?;
                    fold_angle(target_deg + off)
                }
            };
            let src = SourceSpec::new(angle, from_db(itf.inr_db) * self.noise_power)
                .map_err(|e| Error::config(format!("interferers[{i}]"), e.to_string()))?;
            match itf.kind {
                InterferenceKind::Deliberate => clutter.push(src),
                InterferenceKind::Coexisting => jammers.push(src),
            }
        }
        let scenario = Scenario {
            geometry,
            targets: vec![target],
            clutter_interferers: clutter,
            jammers,
            noise_power: self.noise_power,
            snapshots: self.snapshots.as_ref().map(|s| s.count),
        };
        scenario.validate()?;
        Ok(scenario)
    }

    /// Grid angles, `start + k·step` up to `stop` inclusive.
    pub fn grid(&self) -> Vec<f64> {
        let sw = &self.sweep;
        let count = ((sw.stop_deg - sw.start_deg) / sw.step_deg + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| round9(sw.start_deg + k as f64 * sw.step_deg))
            .collect()
    }
}

fn round9(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

/// Covariances for `scenario`, from simulated snapshots when the scenario
/// asks for them.
pub fn covariances_for(scenario: &Scenario, snapshot_seed: u64) -> Result<CovarianceModel> {
    match scenario.snapshots {
        Some(t) => build_sampled_covariances(scenario, t, snapshot_seed),
        None => build_covariances(scenario),
    }
}

/// Output of a single design, as written to disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignDocument {
    pub scenario: Scenario,
    pub snapshot_seed: u64,
    pub params: ScaParams,
    pub tx_mask: String,
    pub rx_mask: String,
    pub c_final: Vec<f64>,
    pub r_final: Vec<f64>,
    /// `[re, im]` pairs ordered as the selected virtual indices.
    pub weights: Vec<[f64; 2]>,
    pub virtual_indices: Vec<usize>,
    pub sinr_db: f64,
    pub sinr_linear: f64,
    pub sinr_full_db: f64,
    pub relaxed_sinr_db: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub stalled: bool,
    pub scaling: ProblemScaling,
    pub trace: Vec<IterationRecord>,
}

impl DesignDocument {
    pub fn selection(&self) -> Result<Selection> {
        Selection::from_bits(&self.tx_mask, &self.rx_mask)
    }

    pub fn weights(&self) -> Result<BeamWeights> {
        BeamWeights::new(CVector::from_iterator(
            self.weights.len(),
            self.weights.iter().map(|&[re, im]| C64::new(re, im)),
        ))
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut w = std::io::BufWriter::new(file);
        serde_json::to_writer_pretty(&mut w, self)?;
        w.write_all(b"\n")?;
        Ok(())
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Ok(serde_json::from_reader(std::io::BufReader::new(file))?)
    }

    /// Rebuilds the covariances from the embedded scenario and evaluates the
    /// stored weights on the stored selection.
    pub fn reevaluate_db(&self) -> Result<f64> {
        let cov = covariances_for(&self.scenario, self.snapshot_seed)?;
        let sel = self.selection()?;
        let r_s = subarray_restrict(&cov.r_s, &sel)?;
        let r_n = subarray_restrict(&cov.r_n, &sel)?;
        Ok(sinr_of(&self.weights()?, &r_s, &r_n)?.db)
    }
}

pub struct Design {
    pub result: SelectionResult,
    pub document: DesignDocument,
}

/// Runs the antenna selection for the configured target direction.
pub fn design(cfg: &ExperimentConfig) -> Result<Design> {
    let angle = cfg.design_angle()?;
    let scenario = cfg.scenario_at(angle, InterferenceMode::Fixed)?;
    let seed = cfg.snapshots.as_ref().map_or(0, |s| s.seed);
    let cov = covariances_for(&scenario, seed)?;
    let params = cfg.selection.params();
    let result = run_sca(&cov, &params, &scenario.geometry)?;
    let full = evaluate_selection(
        &Selection::full(cfg.array.tx_elements, cfg.array.rx_elements),
        &cov,
    )?;
    let (tx_mask, rx_mask) = result.selection.to_bits();
    let document = DesignDocument {
        scenario,
        snapshot_seed: seed,
        params,
        tx_mask,
        rx_mask,
        c_final: result.c_final.clone(),
        r_final: result.r_final.clone(),
        weights: result
            .weights
            .as_vector()
            .iter()
            .map(|z| [z.re, z.im])
            .collect(),
        virtual_indices: result.selection.virtual_indices(),
        sinr_db: result.sinr.db,
        sinr_linear: result.sinr.linear,
        sinr_full_db: full.sinr.db,
        relaxed_sinr_db: result.relaxed_sinr.map(|s| s.db),
        iterations: result.iterations,
        converged: result.converged,
        stalled: result.stalled,
        scaling: result.scaling,
        trace: result.trace.clone(),
    };
    Ok(Design { result, document })
}

/// One sweep row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub angle_deg: f64,
    pub sinr_full_db: Option<f64>,
    pub sinr_sca_db: Option<f64>,
    pub sinr_oracle_db: Option<f64>,
    pub sinr_random_median_db: Option<f64>,
    pub sinr_random_best_db: Option<f64>,
    pub tx_mask: String,
    pub rx_mask: String,
    pub iterations: Option<usize>,
    pub converged: Option<bool>,
    pub status: String,
}

impl SweepRecord {
    fn failed(angle_deg: f64, err: &Error) -> Self {
        SweepRecord {
            angle_deg,
            sinr_full_db: None,
            sinr_sca_db: None,
            sinr_oracle_db: None,
            sinr_random_median_db: None,
            sinr_random_best_db: None,
            tx_mask: String::new(),
            rx_mask: String::new(),
            iterations: None,
            converged: None,
            status: format!("error: {err}"),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    /// Overrides `sweep.oracle` when set.
    pub oracle: Option<bool>,
    pub jobs: usize,
    pub oracle_cap: u128,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            oracle: None,
            jobs: default_jobs(),
            oracle_cap: oracle::DEFAULT_CAP,
        }
    }
}

/// Worker count from [`JOBS_ENV`], else the available parallelism.
pub fn default_jobs() -> usize {
    std::env::var(JOBS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn angle_seed(base: u64, index: usize) -> u64 {
    base.wrapping_add(index as u64)
}

fn sweep_point(
    cfg: &ExperimentConfig,
    index: usize,
    angle: f64,
    oracle_on: bool,
    cap: u128,
) -> Result<SweepRecord> {
    let scenario = cfg.scenario_at(angle, cfg.sweep.mode)?;
    let geometry = &scenario.geometry;
    let seed = angle_seed(cfg.sweep.seed, index);
    let snap_seed = cfg
        .snapshots
        .as_ref()
        .map_or(0, |s| angle_seed(s.seed, index));
    let cov = covariances_for(&scenario, snap_seed)?;
    let params = cfg.selection.params();
    let res = run_sca(&cov, &params, geometry)?;
    let full = evaluate_selection(
        &Selection::full(geometry.tx_elements(), geometry.rx_elements()),
        &cov,
    )?;
    let rb: RandomBaseline = oracle::random_baseline(
        &cov,
        geometry,
        params.tx_select,
        params.rx_select,
        cfg.sweep.trials,
        seed,
    )?;
    let oracle_db = if oracle_on {
        Some(
            oracle::enumerate_optimal(
                &cov,
                geometry,
                params.tx_select,
                params.rx_select,
                cap,
                false,
            )?
            .best
            .sinr_db,
        )
    } else {
        None
    };
    let (tx_mask, rx_mask) = res.selection.to_bits();
    Ok(SweepRecord {
        angle_deg: angle,
        sinr_full_db: Some(full.sinr.db),
        sinr_sca_db: Some(res.sinr.db),
        sinr_oracle_db: oracle_db,
        sinr_random_median_db: Some(rb.median_db),
        sinr_random_best_db: Some(rb.best_db),
        tx_mask,
        rx_mask,
        iterations: Some(res.iterations),
        converged: Some(res.converged),
        status: "ok".into(),
    })
}

/// Runs the configured sweep. Rows come back in grid order regardless of
/// the worker count; failures at individual angles are recorded in the
/// row's status.
pub fn sweep(cfg: &ExperimentConfig, opts: &SweepOptions) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    cfg.validate_sweep()?;
    let grid = cfg.grid();
    let oracle_on = opts.oracle.unwrap_or(cfg.sweep.oracle);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| Error::Solver(format!("cannot start worker pool: {e}")))?;
    let rows = pool.install(|| {
        grid.par_iter()
            .enumerate()
            .map(|(k, &angle)| {
                sweep_point(cfg, k, angle, oracle_on, opts.oracle_cap)
                    .unwrap_or_else(|e| SweepRecord::failed(angle, &e))
            })
            .collect()
    });
    Ok(rows)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.10}")).unwrap_or_default()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRecord], out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(SWEEP_HEADER)?;
    for r in rows {
        wtr.write_record([
            format!("{}", r.angle_deg),
            fmt_opt(r.sinr_full_db),
            fmt_opt(r.sinr_sca_db),
            fmt_opt(r.sinr_oracle_db),
            fmt_opt(r.sinr_random_median_db),
            fmt_opt(r.sinr_random_best_db),
            r.tx_mask.clone(),
            r.rx_mask.clone(),
            r.iterations.map(|v| v.to_string()).unwrap_or_default(),
            r.converged.map(|v| v.to_string()).unwrap_or_default(),
            r.status.clone(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

fn parse_opt<T: std::str::FromStr>(s: &str) -> Option<T> {
    if s.is_empty() {
        None
    } else {
        s.parse().ok()
    }
}

/// Reads a CSV written by [`write_sweep_csv`], checking the header.
pub fn read_sweep_csv<R: std::io::Read>(input: R) -> Result<Vec<SweepRecord>> {
    let mut rdr = csv::Reader::from_reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header != SWEEP_HEADER {
        return Err(Error::domain(format!(
            "unexpected sweep header: {}",
            header.join(",")
        )));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let angle_deg = rec[0]
            .parse()
            .map_err(|_| Error::domain(format!("bad angle {:?}", &rec[0])))?;
        rows.push(SweepRecord {
            angle_deg,
            sinr_full_db: parse_opt(&rec[1]),
            sinr_sca_db: parse_opt(&rec[2]),
            sinr_oracle_db: parse_opt(&rec[3]),
            sinr_random_median_db: parse_opt(&rec[4]),
            sinr_random_best_db: parse_opt(&rec[5]),
            tx_mask: rec[6].to_owned(),
            rx_mask: rec[7].to_owned(),
            iterations: parse_opt(&rec[8]),
            converged: parse_opt(&rec[9]),
            status: rec[10].to_owned(),
        });
    }
    Ok(rows)
}
