//! Ground truth and baselines: exhaustive enumeration of every transmit and
//! receive subset pair, and uniformly random sparse arrays.

use std::io::Write;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::array_model::{ArrayGeometry, CovarianceModel};
use crate::beamformer::{evaluate_selection, Selection};
use crate::error::{Error, Result};

/// Largest number of configurations [`enumerate_optimal`] will evaluate.
pub const DEFAULT_CAP: u128 = 1_000_000;

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredSelection {
    pub selection: Selection,
    pub sinr_db: f64,
}

#[derive(Debug, Clone)]
pub struct EnumerationReport {
    pub best: ScoredSelection,
    pub evaluated: usize,
    /// Every configuration in enumeration order, when requested.
    pub all: Option<Vec<ScoredSelection>>,
}

fn check_counts(geometry: &ArrayGeometry, tx_select: usize, rx_select: usize) -> Result<()> {
    if tx_select == 0 || tx_select > geometry.tx_elements() {
        return Err(Error::domain(format!(
            "cannot select {tx_select} of {} transmitters",
            geometry.tx_elements()
        )));
    }
    if rx_select == 0 || rx_select > geometry.rx_elements() {
        return Err(Error::domain(format!(
            "cannot select {rx_select} of {} receivers",
            geometry.rx_elements()
        )));
    }
    Ok(())
}

/// Evaluates every `(M_t, N_r)` configuration, transmit subsets outermost,
/// both in lexicographic order. The optimum is the first configuration
/// attaining the largest SINR.
pub fn enumerate_optimal(
    cov: &CovarianceModel,
    geometry: &ArrayGeometry,
    tx_select: usize,
    rx_select: usize,
    cap: u128,
    retain_all: bool,
) -> Result<EnumerationReport> {
    check_counts(geometry, tx_select, rx_select)?;
    let (m, n) = (geometry.tx_elements(), geometry.rx_elements());
    let count = binomial(m, tx_select).saturating_mul(binomial(n, rx_select));
    if count > cap {
        return Err(Error::CapExceeded { count, cap });
    }
    let tx_sets = combinations(m, tx_select);
    let rx_sets = combinations(n, rx_select);
    let scored: Vec<ScoredSelection> = tx_sets
        .par_iter()
        .map(|tx| {
            rx_sets
                .iter()
                .map(|rx| {
                    let selection = Selection::from_indices(m, n, tx, rx)?;
                    let eval = evaluate_selection(&selection, cov)?;
                    Ok(ScoredSelection {
                        selection,
                        sinr_db: eval.sinr.db,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let mut best = 0;
    for (i, s) in scored.iter().enumerate() {
        if s.sinr_db > scored[best].sinr_db {
            best = i;
        }
    }
    Ok(EnumerationReport {
        best: scored[best].clone(),
        evaluated: scored.len(),
        all: retain_all.then_some(scored.clone()),
    })
}

/// Writes `tx_mask,rx_mask,sinr_db` rows.
pub fn write_enumeration_csv<W: Write>(rows: &[ScoredSelection], out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["tx_mask", "rx_mask", "sinr_db"])?;
    for row in rows {
        let (tx, rx) = row.selection.to_bits();
        wtr.write_record([tx, rx, format!("{:.10}", row.sinr_db)])?;
    }
    wtr.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomBaseline {
    pub trials: Vec<ScoredSelection>,
    pub median_db: f64,
    pub best_db: f64,
    pub worst_db: f64,
}

/// Median of a non-empty sample; the mean of the two central values for an
/// even count.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// Draws `trials` configurations; each picks `M_t` distinct transmitters and
/// `N_r` distinct receivers uniformly at random.
pub fn random_baseline(
    cov: &CovarianceModel,
    geometry: &ArrayGeometry,
    tx_select: usize,
    rx_select: usize,
    trials: usize,
    seed: u64,
) -> Result<RandomBaseline> {
    check_counts(geometry, tx_select, rx_select)?;
    if trials == 0 {
        return Err(Error::domain("random baseline needs at least one trial"));
    }
    let (m, n) = (geometry.tx_elements(), geometry.rx_elements());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let tx = sample(&mut rng, m, tx_select).into_vec();
        let rx = sample(&mut rng, n, rx_select).into_vec();
        let selection = Selection::from_indices(m, n, &tx, &rx)?;
        let eval = evaluate_selection(&selection, cov)?;
        out.push(ScoredSelection {
            selection,
            sinr_db: eval.sinr.db,
        });
    }
    let db: Vec<f64> = out.iter().map(|s| s.sinr_db).collect();
    Ok(RandomBaseline {
        median_db: median(&db),
        best_db: db.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        worst_db: db.iter().copied().fold(f64::INFINITY, f64::min),
        trials: out,
    })
}
