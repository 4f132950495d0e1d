//! Successive convex approximation with reweighted two-dimensional group
//! sparsity.
//!
//! Each outer iteration linearizes the concave objective `w̃'R̃_s w̃` at the
//! current iterate, refreshes the transmit and receive reweighting vectors
//! from the previous relaxed selection, and solves the cone program in
//! [`crate::socp`]. After the loop the relaxed selection vectors are rounded
//! to hard masks and the beamformer is re-optimized on the chosen sub-array.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::array_model::{ArrayGeometry, CovarianceModel};
use crate::beamformer::{
    evaluate_selection, max_sinr_weights, real_lift, real_unlift_vec, sinr_of, BeamWeights,
    Selection, Sinr,
};
use crate::error::{Error, Result};
use crate::linalg::{quad_form, quad_form_r};
use crate::socp::{self, SolveStatus, SubproblemSpec};
use crate::CMatrix;

/// How the covariances are scaled before entering the cone program.
///
/// SINR is invariant to rescaling `R_s` and `R_x`, but the balance between
/// the linearized objective and the `α p'c + β q'r` penalty is not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Use the covariances as given.
    #[default]
    None,
    /// Scale `R_x` so that the full-array MaxSINR beamformer on the
    /// ellipsoid boundary exactly exhausts the tighter of the two group
    /// budgets (`Σ_i ||P_i ⊙ w̃|| = M_t` or `Σ_j ||Q_j ⊙ w̃|| = N_r`), and
    /// scale `R_s` so that beamformer attains `w̃'R_s w̃ = 1`.
    GroupBudget,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScaParams {
    pub alpha: f64,
    pub beta: f64,
    pub alpha0: f64,
    pub beta0: f64,
    pub epsilon: f64,
    pub tx_select: usize,
    pub rx_select: usize,
    pub tol: f64,
    pub max_iter: usize,
    /// Consecutive iterations with unchanged masks after which the loop stops
    /// even though `||Δw̃||` is still above `tol`.
    pub stall_window: usize,
    pub subproblem_tol: f64,
    pub normalization: Normalization,
}

impl Default for ScaParams {
    fn default() -> Self {
        ScaParams {
            alpha: 0.5,
            beta: 0.5,
            alpha0: 1.0,
            beta0: 1.0,
            epsilon: 0.01,
            tx_select: 1,
            rx_select: 1,
            tol: 1e-5,
            max_iter: 200,
            stall_window: 10,
            subproblem_tol: socp::DEFAULT_TOL,
            normalization: Normalization::None,
        }
    }
}

impl ScaParams {
    pub fn new(tx_select: usize, rx_select: usize) -> Self {
        ScaParams {
            tx_select,
            rx_select,
            ..Self::default()
        }
    }

    pub fn validate(&self, geometry: &ArrayGeometry) -> Result<()> {
        let check = |ok: bool, field: &str, msg: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::config(field, msg))
            }
        };
        check(
            self.tx_select >= 1 && self.tx_select <= geometry.tx_elements(),
            "tx_select",
            "must lie in 1..=M",
        )?;
        check(
            self.rx_select >= 1 && self.rx_select <= geometry.rx_elements(),
            "rx_select",
            "must lie in 1..=N",
        )?;
        check(
            self.alpha >= 0.0 && self.alpha.is_finite(),
            "alpha",
            "must be finite and >= 0",
        )?;
        check(
            self.beta >= 0.0 && self.beta.is_finite(),
            "beta",
            "must be finite and >= 0",
        )?;
        check(
            self.alpha0 > 0.0 && self.alpha0.is_finite(),
            "alpha0",
            "must be positive",
        )?;
        check(
            self.beta0 > 0.0 && self.beta0.is_finite(),
            "beta0",
            "must be positive",
        )?;
        check(
            self.epsilon > 0.0 && self.epsilon.is_finite(),
            "epsilon",
            "must be positive",
        )?;
        check(self.tol > 0.0, "tol", "must be positive")?;
        check(self.max_iter >= 1, "max_iter", "must be at least 1")?;
        check(self.stall_window >= 1, "stall_window", "must be at least 1")?;
        check(
            self.subproblem_tol > 0.0,
            "subproblem_tol",
            "must be positive",
        )?;
        Ok(())
    }
}

/// Iterate carried between outer iterations.
#[derive(Debug, Clone)]
pub struct ScaState {
    pub w_tilde: DVector<f64>,
    pub m: DVector<f64>,
    pub b: f64,
    pub p: DVector<f64>,
    pub q: DVector<f64>,
    pub c: DVector<f64>,
    pub r: DVector<f64>,
    pub iteration: usize,
}

/// One outer iteration of the trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    /// `w̃'R̃_s w̃ + α p'c + β q'r` at the incoming iterate, with this
    /// iteration's `p`, `q`.
    pub objective_before: f64,
    /// The same function at the subproblem solution.
    pub objective_after: f64,
    /// Linearized objective including `b`, at the subproblem solution.
    pub model_objective: f64,
    pub step_norm: f64,
    pub subproblem_status: SolveStatus,
    pub subproblem_iterations: usize,
    pub max_residual: f64,
    pub tx_mask: String,
    pub rx_mask: String,
}

/// Factors applied to the covariances before the loop (see
/// [`Normalization`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemScaling {
    pub r_x_scale: f64,
    pub r_s_scale: f64,
}

#[derive(Debug, Clone)]
pub struct SelectionResult {
    pub selection: Selection,
    pub c_final: Vec<f64>,
    pub r_final: Vec<f64>,
    /// MaxSINR weights re-optimized on the selected sub-array, ordered as
    /// [`Selection::virtual_indices`].
    pub weights: BeamWeights,
    pub sinr: Sinr,
    /// SINR of the final relaxed full-array iterate.
    pub relaxed_sinr: Option<Sinr>,
    pub iterations: usize,
    pub converged: bool,
    /// Set when the loop stopped on the unchanged-mask rule.
    pub stalled: bool,
    pub trace: Vec<IterationRecord>,
    pub scaling: ProblemScaling,
}

impl SelectionResult {
    pub fn tx_mask(&self) -> &[bool] {
        &self.selection.tx
    }

    pub fn rx_mask(&self) -> &[bool] {
        &self.selection.rx
    }
}

/// `P_i`: ones on the real and imaginary weight groups of transmitter `i`
/// (1-indexed) in the stacked real vector of length `2MN`.
pub fn tx_mask_vector(i: usize, m: usize, n: usize) -> Result<DVector<f64>> {
    if i == 0 || i > m {
        return Err(Error::domain(format!(
            "transmitter index {i} outside 1..={m}"
        )));
    }
    let mut v = DVector::zeros(2 * m * n);
    for g in [i - 1, m + i - 1] {
        v.rows_mut(g * n, n).fill(1.0);
    }
    Ok(v)
}

/// `Q_j`: a one at offset `j` (1-indexed) within each of the `2M` groups.
pub fn rx_mask_vector(j: usize, m: usize, n: usize) -> Result<DVector<f64>> {
    if j == 0 || j > n {
        return Err(Error::domain(format!("receiver index {j} outside 1..={n}")));
    }
    let mut v = DVector::zeros(2 * m * n);
    for g in 0..2 * m {
        v[g * n + j - 1] = 1.0;
    }
    Ok(v)
}

/// Tangent affine model of `v'R̃_s v` at `w`: `m = 2R̃_s w`, `b = -w'R̃_s w`.
pub fn linearize(r_s_tilde: &DMatrix<f64>, w_tilde: &DVector<f64>) -> (DVector<f64>, f64) {
    let rw = r_s_tilde * w_tilde;
    (&rw * 2.0, -w_tilde.dot(&rw))
}

/// Reweighting rule `p = (1 - c) / (1 - e^{-β0 c} + ε) - c^{α0} / ε`.
pub fn reweight_update(c: f64, alpha0: f64, beta0: f64, epsilon: f64) -> f64 {
    (1.0 - c) / (1.0 - (-beta0 * c).exp() + epsilon) - c.powf(alpha0) / epsilon
}

fn top_k(v: &[f64], k: usize) -> Vec<bool> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[b].total_cmp(&v[a]).then(a.cmp(&b)));
    let mut mask = vec![false; v.len()];
    for &i in order.iter().take(k) {
        mask[i] = true;
    }
    mask
}

/// Keeps the `M_t` largest entries of `c` and the `N_r` largest of `r`;
/// ties go to the lower index.
pub fn extract_selection(
    c: &[f64],
    r: &[f64],
    tx_select: usize,
    rx_select: usize,
) -> (Vec<bool>, Vec<bool>) {
    (top_k(c, tx_select), top_k(r, rx_select))
}

fn group_norm(w: &DVector<f64>, mask: &DVector<f64>) -> f64 {
    w.iter()
        .zip(mask.iter())
        .filter(|(_, &k)| k != 0.0)
        .map(|(x, _)| x * x)
        .sum::<f64>()
        .sqrt()
}

fn problem_scaling(
    cov: &CovarianceModel,
    geometry: &ArrayGeometry,
    params: &ScaParams,
) -> Result<ProblemScaling> {
    match params.normalization {
        Normalization::None => Ok(ProblemScaling {
            r_x_scale: 1.0,
            r_s_scale: 1.0,
        }),
        Normalization::GroupBudget => {
            let (m, n) = (geometry.tx_elements(), geometry.rx_elements());
            let w = max_sinr_weights(&cov.r_x, &cov.r_s)?.into_vector();
            let w = &w / crate::C64::from(quad_form(&w, &cov.r_x, &w).re.sqrt());
            let tx_sum: f64 = (0..m).map(|t| w.rows(t * n, n).norm()).sum();
            let rx_sum: f64 = (0..n)
                .map(|r| (0..m).map(|t| w[t * n + r].norm_sqr()).sum::<f64>().sqrt())
                .sum();
            let f = (tx_sum / params.tx_select as f64).max(rx_sum / params.rx_select as f64);
            // w / f lies on the boundary of {R_x f^2}; its signal power is
            // w^H R_s w / f^2.
            let signal = quad_form(&w, &cov.r_s, &w).re / (f * f);
            if !(f.is_finite() && f > 0.0 && signal > 0.0) {
                return Err(Error::domain(
                    "cannot normalize: MaxSINR beamformer carries no signal",
                ));
            }
            Ok(ProblemScaling {
                r_x_scale: f * f,
                r_s_scale: 1.0 / signal,
            })
        }
    }
}

fn relaxed_objective(r_s_tilde: &DMatrix<f64>, params: &ScaParams, st: &ScaState) -> f64 {
    quad_form_r(&st.w_tilde, r_s_tilde)
        + params.alpha * st.p.dot(&st.c)
        + params.beta * st.q.dot(&st.r)
}

/// Successive convex approximation with reweighted group sparsity: selects
/// `M_t` transmitters and `N_r` receivers.
pub fn run_sca(
    cov: &CovarianceModel,
    params: &ScaParams,
    geometry: &ArrayGeometry,
) -> Result<SelectionResult> {
    params.validate(geometry)?;
    let (m, n) = (geometry.tx_elements(), geometry.rx_elements());
    let dim = geometry.virtual_len();
    if cov.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: cov.dim(),
        });
    }
    let scaling = problem_scaling(cov, geometry, params)?;
    let r_s: CMatrix = &cov.r_s * crate::C64::from(scaling.r_s_scale);
    let r_x: CMatrix = &cov.r_x * crate::C64::from(scaling.r_x_scale);
    let r_s_tilde = -real_lift(&r_s)?;
    let r_x_tilde = real_lift(&r_x)?;

    let tx_masks = (1..=m)
        .map(|i| tx_mask_vector(i, m, n))
        .collect::<Result<Vec<_>>>()?;
    let rx_masks = (1..=n)
        .map(|j| rx_mask_vector(j, m, n))
        .collect::<Result<Vec<_>>>()?;
    let mut spec = SubproblemSpec::new(
        DVector::zeros(2 * dim),
        &r_x_tilde,
        &tx_masks,
        &rx_masks,
        DVector::from_element(m, 1.0),
        DVector::from_element(n, 1.0),
        params.alpha,
        params.beta,
        params.tx_select,
        params.rx_select,
    )?;

    let c0 = params.tx_select as f64 / m as f64;
    let r0 = params.rx_select as f64 / n as f64;
    let mut w0 = DVector::zeros(2 * dim);
    w0.rows_mut(0, dim).fill(1.0);
    w0 /= spec.factor().tr_mul(&w0).norm();
    let shrink = tx_masks
        .iter()
        .map(|mk| c0 / group_norm(&w0, mk))
        .chain(rx_masks.iter().map(|mk| r0 / group_norm(&w0, mk)))
        .fold(1.0, f64::min);
    w0 *= shrink;

    let mut st = ScaState {
        w_tilde: w0,
        m: DVector::zeros(2 * dim),
        b: 0.0,
        p: DVector::from_element(m, 1.0),
        q: DVector::from_element(n, 1.0),
        c: DVector::from_element(m, c0),
        r: DVector::from_element(n, r0),
        iteration: 0,
    };
    let mut trace = Vec::new();
    let mut converged = false;
    let mut stalled = false;
    let mut last_masks: Option<(Vec<bool>, Vec<bool>)> = None;
    let mut unchanged = 0usize;

    while st.iteration < params.max_iter {
        st.iteration += 1;
        if st.iteration > 1 {
            let rw = |v: &DVector<f64>, a0: f64, b0: f64| {
                v.map(|x| reweight_update(x.clamp(0.0, 1.0), a0, b0, params.epsilon))
            };
            st.p = rw(&st.c, params.alpha0, params.beta0);
            st.q = rw(&st.r, params.alpha0, params.beta0);
        }
        let (grad, b) = linearize(&r_s_tilde, &st.w_tilde);
        st.m = grad;
        st.b = b;
        spec.set_gradient(st.m.clone())?;
        spec.set_reweights(st.p.clone(), st.q.clone())?;
        let before = relaxed_objective(&r_s_tilde, params, &st);

        let sol = socp::solve(&spec, params.subproblem_tol)?;
        if sol.status == SolveStatus::Infeasible {
            return Err(Error::Solver(format!(
                "subproblem infeasible at outer iteration {}",
                st.iteration
            )));
        }
        let step = (&sol.w_tilde - &st.w_tilde).norm();
        st.w_tilde = sol.w_tilde;
        st.c = sol.c;
        st.r = sol.r;
        let after = relaxed_objective(&r_s_tilde, params, &st);

        let masks = extract_selection(
            st.c.as_slice(),
            st.r.as_slice(),
            params.tx_select,
            params.rx_select,
        );
        let sel = Selection {
            tx: masks.0.clone(),
            rx: masks.1.clone(),
        };
        let (tx_bits, rx_bits) = sel.to_bits();
        trace.push(IterationRecord {
            iteration: st.iteration,
            objective_before: before,
            objective_after: after,
            model_objective: sol.objective + st.b,
            step_norm: step,
            subproblem_status: sol.status,
            subproblem_iterations: sol.iterations,
            max_residual: sol.residuals.max(),
            tx_mask: tx_bits,
            rx_mask: rx_bits,
        });

        if step < params.tol {
            converged = true;
            break;
        }
        if last_masks.as_ref() == Some(&masks) {
            unchanged += 1;
        } else {
            unchanged = 0;
        }
        last_masks = Some(masks);
        if unchanged >= params.stall_window {
            converged = true;
            stalled = true;
            break;
        }
    }

    let (tx, rx) = extract_selection(
        st.c.as_slice(),
        st.r.as_slice(),
        params.tx_select,
        params.rx_select,
    );
    let selection = Selection::new(tx, rx)?;
    let eval = evaluate_selection(&selection, cov)?;
    let relaxed_sinr = BeamWeights::new(real_unlift_vec(&st.w_tilde)?)
        .ok()
        .and_then(|w| sinr_of(&w, &cov.r_s, &cov.r_n).ok());

    Ok(SelectionResult {
        selection,
        c_final: st.c.iter().copied().collect(),
        r_final: st.r.iter().copied().collect(),
        weights: eval.weights,
        sinr: eval.sinr,
        relaxed_sinr,
        iterations: st.iteration,
        converged,
        stalled,
        trace,
        scaling,
    })
}
