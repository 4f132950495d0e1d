//! MaxSINR beamforming on full and sub-selected virtual arrays.
//!
//! The optimum weight vector is the principal generalized eigenvector of the
//! pencil `(R_s, R_x)`, i.e. the principal eigenvector of `R_x^{-1} R_s`,
//! and the optimum output SINR is the largest eigenvalue of `R_n^{-1} R_s`.
//! Both are computed by Cholesky whitening followed by a Hermitian
//! eigendecomposition (see [`crate::linalg::generalized_eigh`]).

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::array_model::CovarianceModel;
use crate::error::{Error, Result};
use crate::linalg::{ensure_hermitian, generalized_max_eig, quad_form};
use crate::{to_db, CMatrix, CVector, C64};

/// Hermitian tolerance used when validating inputs to the real lift.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Receive beamformer weights; finite and nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamWeights(CVector);

impl BeamWeights {
    pub fn new(w: CVector) -> Result<Self> {
        if w.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::domain("beamformer weights must be finite"));
        }
        if w.norm() == 0.0 {
            return Err(Error::domain("beamformer weights must be nonzero"));
        }
        Ok(Self(w))
    }

    pub fn as_vector(&self) -> &CVector {
        &self.0
    }

    pub fn into_vector(self) -> CVector {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Output SINR as a linear ratio and in decibels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sinr {
    pub linear: f64,
    pub db: f64,
}

impl Sinr {
    pub fn from_linear(linear: f64) -> Self {
        Self {
            linear,
            db: to_db(linear),
        }
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Beamformer output `y = w^H x`.
pub fn apply_beamformer(w: &BeamWeights, x: &CVector) -> Result<C64> {
    check_dims(w.len(), x.len())?;
    Ok(w.0.dotc(x))
}

/// Rotates `w` so that its largest-magnitude entry (first one on ties) is
/// real and positive. Keeps weight dumps reproducible.
fn fix_phase(w: &mut CVector) {
    let peak = w.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    if peak == 0.0 {
        return;
    }
    if let Some(anchor) = w.iter().find(|z| z.norm() >= peak * (1.0 - 1e-9)) {
        let rot = anchor.conj() / anchor.norm();
        w.apply(|z| *z *= rot);
    }
}

/// Principal eigenvector of `R_x^{-1} R_s`, scaled so that `w^H R_s w = 1`.
pub fn max_sinr_weights(r_x: &CMatrix, r_s: &CMatrix) -> Result<BeamWeights> {
    check_dims(r_x.nrows(), r_s.nrows())?;
    let (lambda, mut v) = generalized_max_eig(r_s, r_x)?;
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(Error::domain(
            "target covariance has no positive generalized eigenvalue",
        ));
    }
    v.unscale_mut(lambda.sqrt());
    fix_phase(&mut v);
    BeamWeights::new(v)
}

/// `(w^H R_s w) / (w^H R_n w)`.
pub fn sinr_of(w: &BeamWeights, r_s: &CMatrix, r_n: &CMatrix) -> Result<Sinr> {
    check_dims(w.len(), r_s.nrows())?;
    check_dims(w.len(), r_n.nrows())?;
    let num = quad_form(&w.0, r_s, &w.0).re;
    let den = quad_form(&w.0, r_n, &w.0).re;
    if den.is_nan() || den <= 0.0 {
        return Err(Error::domain(
            "interference-plus-noise power is not positive",
        ));
    }
    Ok(Sinr::from_linear(num / den))
}

/// `Λ_max{R_n^{-1} R_s}`, the best SINR any weight vector can reach.
pub fn max_sinr(r_s: &CMatrix, r_n: &CMatrix) -> Result<Sinr> {
    check_dims(r_n.nrows(), r_s.nrows())?;
    let (lambda, _) = generalized_max_eig(r_s, r_n)?;
    Ok(Sinr::from_linear(lambda))
}

/// `[[Re R, -Im R], [Im R, Re R]]`, so that `w̃' R̃ w̃ = w^H R w` with
/// `w̃ = [Re w; Im w]`.
pub fn real_lift(r: &CMatrix) -> Result<DMatrix<f64>> {
    ensure_hermitian(r, HERMITIAN_TOL)?;
    let n = r.nrows();
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        for i in 0..n {
            let z = r[(i, j)];
            out[(i, j)] = z.re;
            out[(i + n, j + n)] = z.re;
            out[(i, j + n)] = -z.im;
            out[(i + n, j)] = z.im;
        }
    }
    Ok(out)
}

/// `[Re w; Im w]`.
pub fn real_lift_vec(w: &CVector) -> DVector<f64> {
    let n = w.len();
    DVector::from_fn(2 * n, |i, _| if i < n { w[i].re } else { w[i - n].im })
}

/// Inverse of [`real_lift_vec`]: `w(i) = w̃(i) + j w̃(i + L)`.
pub fn real_unlift_vec(w_tilde: &DVector<f64>) -> Result<CVector> {
    if !w_tilde.len().is_multiple_of(2) {
        return Err(Error::domain("lifted vector must have even length"));
    }
    let n = w_tilde.len() / 2;
    Ok(CVector::from_fn(n, |i, _| {
        C64::new(w_tilde[i], w_tilde[i + n])
    }))
}

/// Active transmitters and receivers. Virtual element `t * N + r` is kept
/// when both `tx[t]` and `rx[r]` are set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Selection {
    pub tx: Vec<bool>,
    pub rx: Vec<bool>,
}

impl Selection {
    pub fn new(tx: Vec<bool>, rx: Vec<bool>) -> Result<Self> {
        if !tx.iter().any(|&b| b) || !rx.iter().any(|&b| b) {
            return Err(Error::domain(
                "selection masks must activate at least one element",
            ));
        }
        Ok(Self { tx, rx })
    }

    pub fn full(m: usize, n: usize) -> Self {
        Self {
            tx: vec![true; m],
            rx: vec![true; n],
        }
    }

    /// Builds masks from zero-based active indices.
    pub fn from_indices(m: usize, n: usize, tx: &[usize], rx: &[usize]) -> Result<Self> {
        let mut tx_mask = vec![false; m];
        let mut rx_mask = vec![false; n];
        for &t in tx {
            *tx_mask
                .get_mut(t)
                .ok_or_else(|| Error::domain(format!("transmitter index {t} out of range")))? =
                true;
        }
        for &r in rx {
            *rx_mask
                .get_mut(r)
                .ok_or_else(|| Error::domain(format!("receiver index {r} out of range")))? = true;
        }
        Self::new(tx_mask, rx_mask)
    }

    pub fn tx_count(&self) -> usize {
        self.tx.iter().filter(|&&b| b).count()
    }

    pub fn rx_count(&self) -> usize {
        self.rx.iter().filter(|&&b| b).count()
    }

    pub fn tx_indices(&self) -> Vec<usize> {
        active(&self.tx)
    }

    pub fn rx_indices(&self) -> Vec<usize> {
        active(&self.rx)
    }

    /// Kept virtual indices in ascending order.
    pub fn virtual_indices(&self) -> Vec<usize> {
        let n = self.rx.len();
        let rx = self.rx_indices();
        self.tx_indices()
            .into_iter()
            .flat_map(|t| rx.iter().map(move |&r| t * n + r))
            .collect()
    }

    /// Mask bit strings, transmit first, e.g. `("10010110", "01100110")`.
    pub fn to_bits(&self) -> (String, String) {
        (bits(&self.tx), bits(&self.rx))
    }

    pub fn from_bits(tx: &str, rx: &str) -> Result<Self> {
        Self::new(parse_bits(tx)?, parse_bits(rx)?)
    }
}

fn active(mask: &[bool]) -> Vec<usize> {
    mask.iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i))
        .collect()
}

fn bits(mask: &[bool]) -> String {
    mask.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|ch| match ch {
            '1' => Ok(true),
            '0' => Ok(false),
            other => Err(Error::domain(format!("invalid mask character {other:?}"))),
        })
        .collect()
}

/// Principal submatrix of `r` on the selection's virtual indices.
pub fn subarray_restrict(r: &CMatrix, selection: &Selection) -> Result<CMatrix> {
    check_dims(selection.tx.len() * selection.rx.len(), r.nrows())?;
    if selection.tx_count() == 0 || selection.rx_count() == 0 {
        return Err(Error::domain("empty selection mask"));
    }
    let idx = selection.virtual_indices();
    Ok(CMatrix::from_fn(idx.len(), idx.len(), |i, j| {
        r[(idx[i], idx[j])]
    }))
}

/// Zero-padded embedding of sub-array weights into the full virtual array.
pub fn embed(weights: &CVector, indices: &[usize], dim: usize) -> CVector {
    let mut full = CVector::zeros(dim);
    for (k, &i) in indices.iter().enumerate() {
        full[i] = weights[k];
    }
    full
}

/// Optimum weights and SINR of one transmit/receive configuration.
#[derive(Debug, Clone)]
pub struct SelectionEval {
    pub selection: Selection,
    pub indices: Vec<usize>,
    pub weights: BeamWeights,
    /// Output SINR of `weights` against the restricted `R_s`, `R_n`.
    pub sinr: Sinr,
}

/// Re-optimizes MaxSINR weights on the sub-array picked by `selection`.
pub fn evaluate_selection(selection: &Selection, cov: &CovarianceModel) -> Result<SelectionEval> {
    let r_x = subarray_restrict(&cov.r_x, selection)?;
    let r_s = subarray_restrict(&cov.r_s, selection)?;
    let r_n = subarray_restrict(&cov.r_n, selection)?;
    let weights = max_sinr_weights(&r_x, &r_s)?;
    let sinr = sinr_of(&weights, &r_s, &r_n)?;
    Ok(SelectionEval {
        selection: selection.clone(),
        indices: selection.virtual_indices(),
        weights,
        sinr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array_model::{build_covariances, ArrayGeometry, Scenario, SourceSpec};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn scenario(m: usize, n: usize) -> Scenario {
        Scenario {
            geometry: ArrayGeometry::new(m, n).unwrap(),
            targets: vec![SourceSpec::from_db(30.0, 20.0, 1.0).unwrap()],
            clutter_interferers: vec![SourceSpec::from_db(60.0, 13.0, 1.0).unwrap()],
            jammers: vec![SourceSpec::from_db(100.0, 13.0, 1.0).unwrap()],
            noise_power: 1.0,
            snapshots: None,
        }
    }

    #[test]
    fn beamformer_output_examples() {
        let ones = CVector::from_element(4, c(1.0, 0.0));
        let w = BeamWeights::new(ones.clone()).unwrap();
        assert_eq!(apply_beamformer(&w, &ones).unwrap(), c(4.0, 0.0));

        let x = CVector::from_vec(vec![c(2.0, -1.0), c(5.0, 5.0)]);
        let e1 = BeamWeights::new(CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)])).unwrap();
        assert_eq!(apply_beamformer(&e1, &x).unwrap(), c(2.0, -1.0));

        let u = BeamWeights::new(CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 1.0)])).unwrap();
        let v = CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 1.0)]).map(|z| z * c(0.0, 1.0));
        let orth = CVector::from_vec(vec![c(0.0, 1.0), c(1.0, 0.0)]);
        assert!(apply_beamformer(&u, &orth).unwrap().norm() < 1e-15);
        assert!(apply_beamformer(&u, &v).unwrap().norm() > 0.0);
        assert!(apply_beamformer(&u, &ones).is_err());
    }

    #[test]
    fn zero_weights_are_rejected() {
        assert!(BeamWeights::new(CVector::zeros(3)).is_err());
    }

    #[test]
    fn matched_filter_in_white_noise() {
        let mut sc = scenario(8, 8);
        sc.clutter_interferers.clear();
        sc.jammers.clear();
        let cov = build_covariances(&sc).unwrap();
        let w = max_sinr_weights(&cov.r_x, &cov.r_s).unwrap();
        let s = sinr_of(&w, &cov.r_s, &cov.r_n).unwrap();
        assert!((s.linear - 6400.0).abs() < 1e-6);
        assert!((s.db - 38.061_799_739_838_87).abs() < 1e-9);
        let b = crate::array_model::virtual_steering(&sc.geometry, 30.0).unwrap();
        let cos = w.as_vector().dotc(&b).norm() / (w.as_vector().norm() * b.norm());
        assert!((cos - 1.0).abs() < 1e-10);
        assert!((quad_form(w.as_vector(), &cov.r_s, w.as_vector()).re - 1.0).abs() < 1e-9);
    }

    #[test]
    fn scaling_r_x_keeps_direction() {
        let cov = build_covariances(&scenario(3, 4)).unwrap();
        let w1 = max_sinr_weights(&cov.r_x, &cov.r_s).unwrap();
        let w2 = max_sinr_weights(&cov.r_x.scale(10.0), &cov.r_s).unwrap();
        let a = w1.as_vector();
        let b = w2.as_vector();
        let cos = a.dotc(b).norm() / (a.norm() * b.norm());
        assert!((cos - 1.0).abs() < 1e-10);
    }

    #[test]
    fn sinr_is_scale_invariant_and_bounded() {
        let cov = build_covariances(&scenario(3, 4)).unwrap();
        let w = max_sinr_weights(&cov.r_x, &cov.r_s).unwrap();
        let s = sinr_of(&w, &cov.r_s, &cov.r_n).unwrap();
        let best = max_sinr(&cov.r_s, &cov.r_n).unwrap();
        assert!((s.linear - best.linear).abs() <= 1e-8 * best.linear);
        let scaled = BeamWeights::new(w.as_vector().scale(5.0)).unwrap();
        assert!(
            (sinr_of(&scaled, &cov.r_s, &cov.r_n).unwrap().linear - s.linear).abs()
                < 1e-8 * s.linear
        );
        let arbitrary = BeamWeights::new(CVector::from_fn(12, |i, _| c(i as f64, 1.0))).unwrap();
        assert!(sinr_of(&arbitrary, &cov.r_s, &cov.r_n).unwrap().linear <= best.linear);
    }

    #[test]
    fn real_lift_examples() {
        let r = CMatrix::from_element(1, 1, c(2.0, 0.0));
        let lifted = real_lift(&r).unwrap();
        assert_eq!(lifted, DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 2.0]));
        let w = CVector::from_vec(vec![c(1.0, 2.0)]);
        assert_eq!(real_lift_vec(&w).as_slice(), &[1.0, 2.0]);
        assert_eq!(real_unlift_vec(&real_lift_vec(&w)).unwrap(), w);
        let bad =
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 1.0), c(1.0, 1.0), c(1.0, 0.0)]);
        assert!(matches!(real_lift(&bad), Err(Error::NotHermitian(_))));
        assert!(real_unlift_vec(&DVector::from_vec(vec![1.0, 2.0, 3.0])).is_err());
    }

    #[test]
    fn restriction_index_arithmetic() {
        let sel = Selection::from_indices(2, 2, &[0], &[1]).unwrap();
        assert_eq!(sel.virtual_indices(), vec![1]);
        let sel = Selection::from_indices(3, 4, &[0, 2], &[1, 3]).unwrap();
        assert_eq!(sel.virtual_indices(), vec![1, 3, 9, 11]);
        assert!(Selection::new(vec![false, false], vec![true]).is_err());
        assert_eq!(sel.to_bits(), ("101".to_string(), "0101".to_string()));
        assert_eq!(Selection::from_bits("101", "0101").unwrap(), sel);
    }

    #[test]
    fn full_restriction_is_identity() {
        let cov = build_covariances(&scenario(2, 3)).unwrap();
        let sub = subarray_restrict(&cov.r_x, &Selection::full(2, 3)).unwrap();
        assert_eq!(sub, cov.r_x);
        let eval = evaluate_selection(&Selection::full(2, 3), &cov).unwrap();
        let best = max_sinr(&cov.r_s, &cov.r_n).unwrap();
        assert!((eval.sinr.linear - best.linear).abs() < 1e-8 * best.linear);
    }

    #[test]
    fn restricted_sinr_never_beats_full_array() {
        let cov = build_covariances(&scenario(3, 3)).unwrap();
        let full = max_sinr(&cov.r_s, &cov.r_n).unwrap();
        let sel = Selection::from_indices(3, 3, &[0, 2], &[1, 2]).unwrap();
        let eval = evaluate_selection(&sel, &cov).unwrap();
        assert!(eval.sinr.linear <= full.linear * (1.0 + 1e-12));
        // The zero-padded weights reach the same SINR on the full array.
        let padded = BeamWeights::new(embed(eval.weights.as_vector(), &eval.indices, 9)).unwrap();
        let s = sinr_of(&padded, &cov.r_s, &cov.r_n).unwrap();
        assert!((s.linear - eval.sinr.linear).abs() < 1e-9 * s.linear);
    }
}
