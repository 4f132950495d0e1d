//! The convex subproblem solved at every outer iteration:
//!
//! ```text
//! minimize    m'w + α p'c + β q'r
//! subject to  ||Lx' w|| <= 1
//!             ||w[P_i]|| <= c_i,   0 <= c_i <= 1,   Σ c = M_t
//!             ||w[Q_j]|| <= r_j,   0 <= r_j <= 1,   Σ r = N_r
//! ```
//!
//! `P_i` and `Q_j` are given as index sets (the supports of the binary
//! selection vectors). The program is solved with the interior-point method
//! in [`ipm`].

mod cones;
mod ipm;

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use cones::ConeKind;
use ipm::{Block, ConeProgram, IpmSettings, IpmStatus};

pub const DEFAULT_TOL: f64 = 1e-7;
const MAX_IPM_ITER: usize = 120;

#[derive(Debug, Clone)]
pub struct SubproblemSpec {
    gradient: DVector<f64>,
    factor: DMatrix<f64>,
    gram: DMatrix<f64>,
    jitter: f64,
    tx_groups: Vec<Vec<usize>>,
    rx_groups: Vec<Vec<usize>>,
    tx_reweight: DVector<f64>,
    rx_reweight: DVector<f64>,
    alpha: f64,
    beta: f64,
    tx_select: usize,
    rx_select: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    MaxIter,
    Infeasible,
}

/// Constraint violations of a candidate `(w, c, r)`; all zero when feasible.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `max(0, w'R̃_x w - 1)`
    pub ball: f64,
    pub tx_group: f64,
    pub rx_group: f64,
    pub tx_box: f64,
    pub rx_box: f64,
    pub tx_sum: f64,
    pub rx_sum: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        [
            self.ball,
            self.tx_group,
            self.rx_group,
            self.tx_box,
            self.rx_box,
            self.tx_sum,
            self.rx_sum,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct SubproblemSolution {
    pub w_tilde: DVector<f64>,
    pub c: DVector<f64>,
    pub r: DVector<f64>,
    pub objective: f64,
    pub residuals: Residuals,
    pub iterations: usize,
    pub status: SolveStatus,
    /// Multipliers of the transmit group cones, `(z_0, z_1)` per group.
    pub tx_duals: Vec<DVector<f64>>,
    pub rx_duals: Vec<DVector<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KktReport {
    pub residuals: Residuals,
    pub max_primal: f64,
    pub objective: f64,
    /// Lagrangian lower bound on the optimum built from the solution's group
    /// multipliers.
    pub dual_bound: f64,
    /// `objective - dual_bound`.
    pub gap: f64,
}

impl KktReport {
    pub fn within(&self, tol: f64) -> bool {
        self.max_primal <= tol && self.gap <= tol * self.objective.abs().max(1.0)
    }
}

fn support(mask: &DVector<f64>) -> Vec<usize> {
    mask.iter()
        .enumerate()
        .filter(|(_, &v)| v != 0.0)
        .map(|(i, _)| i)
        .collect()
}

impl SubproblemSpec {
    /// Builds a spec from `R̃_x` (factorized here, with jitter if needed) and
    /// the binary selection vectors.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        gradient: DVector<f64>,
        r_x_tilde: &DMatrix<f64>,
        tx_masks: &[DVector<f64>],
        rx_masks: &[DVector<f64>],
        tx_reweight: DVector<f64>,
        rx_reweight: DVector<f64>,
        alpha: f64,
        beta: f64,
        tx_select: usize,
        rx_select: usize,
    ) -> Result<Self> {
        let n = gradient.len();
        if r_x_tilde.nrows() != n || r_x_tilde.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: r_x_tilde.nrows(),
            });
        }
        let (chol, jitter) = linalg::cholesky_r(r_x_tilde)?;
        let factor = chol.l();
        let mut gram = r_x_tilde.clone();
        for i in 0..n {
            gram[(i, i)] += jitter;
        }
        let groups = |masks: &[DVector<f64>]| -> Result<Vec<Vec<usize>>> {
            masks
                .iter()
                .map(|mk| {
                    if mk.len() != n {
                        Err(Error::DimensionMismatch {
                            expected: n,
                            found: mk.len(),
                        })
                    } else {
                        Ok(support(mk))
                    }
                })
                .collect()
        };
        let tx_groups = groups(tx_masks)?;
        let rx_groups = groups(rx_masks)?;
        if tx_reweight.len() != tx_groups.len() {
            return Err(Error::DimensionMismatch {
                expected: tx_groups.len(),
                found: tx_reweight.len(),
            });
        }
        if rx_reweight.len() != rx_groups.len() {
            return Err(Error::DimensionMismatch {
                expected: rx_groups.len(),
                found: rx_reweight.len(),
            });
        }
        if !(alpha >= 0.0 && beta >= 0.0 && alpha.is_finite() && beta.is_finite()) {
            return Err(Error::domain(
                "alpha and beta must be finite and nonnegative",
            ));
        }
        if gradient.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("gradient has non-finite entries"));
        }
        Ok(SubproblemSpec {
            gradient,
            factor,
            gram,
            jitter,
            tx_groups,
            rx_groups,
            tx_reweight,
            rx_reweight,
            alpha,
            beta,
            tx_select,
            rx_select,
        })
    }

    pub fn dim(&self) -> usize {
        self.gradient.len()
    }

    pub fn gradient(&self) -> &DVector<f64> {
        &self.gradient
    }

    /// Lower-triangular `Lx` with `Lx Lx' = R̃_x + jitter·I`.
    pub fn factor(&self) -> &DMatrix<f64> {
        &self.factor
    }

    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    pub fn tx_groups(&self) -> &[Vec<usize>] {
        &self.tx_groups
    }

    pub fn rx_groups(&self) -> &[Vec<usize>] {
        &self.rx_groups
    }

    pub fn set_gradient(&mut self, gradient: DVector<f64>) -> Result<()> {
        if gradient.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: gradient.len(),
            });
        }
        self.gradient = gradient;
        Ok(())
    }

    pub fn set_reweights(&mut self, p: DVector<f64>, q: DVector<f64>) -> Result<()> {
        if p.len() != self.tx_groups.len() || q.len() != self.rx_groups.len() {
            return Err(Error::DimensionMismatch {
                expected: self.tx_groups.len() + self.rx_groups.len(),
                found: p.len() + q.len(),
            });
        }
        self.tx_reweight = p;
        self.rx_reweight = q;
        Ok(())
    }

    pub fn objective(&self, w: &DVector<f64>, c: &DVector<f64>, r: &DVector<f64>) -> f64 {
        self.gradient.dot(w)
            + self.alpha * self.tx_reweight.dot(c)
            + self.beta * self.rx_reweight.dot(r)
    }

    pub fn residuals(&self, w: &DVector<f64>, c: &DVector<f64>, r: &DVector<f64>) -> Residuals {
        let ball = (self.factor.tr_mul(w).norm_squared() - 1.0).max(0.0);
        let group = |groups: &[Vec<usize>], caps: &DVector<f64>| {
            groups
                .iter()
                .zip(caps.iter())
                .map(|(g, &cap)| {
                    (g.iter().map(|&k| w[k] * w[k]).sum::<f64>().sqrt() - cap).max(0.0)
                })
                .fold(0.0, f64::max)
        };
        let boxed = |v: &DVector<f64>| {
            v.iter()
                .map(|&x| (-x).max(x - 1.0).max(0.0))
                .fold(0.0, f64::max)
        };
        Residuals {
            ball,
            tx_group: group(&self.tx_groups, c),
            rx_group: group(&self.rx_groups, r),
            tx_box: boxed(c),
            rx_box: boxed(r),
            tx_sum: (c.sum() - self.tx_select as f64).abs(),
            rx_sum: (r.sum() - self.rx_select as f64).abs(),
        }
    }

    fn feasible_sums(&self) -> bool {
        self.tx_select <= self.tx_groups.len() && self.rx_select <= self.rx_groups.len()
    }

    fn program(&self) -> ConeProgram {
        let nw = self.dim();
        let mt = self.tx_groups.len();
        let nr = self.rx_groups.len();
        let nx = nw + mt + nr;

        let mut cost = DVector::zeros(nx);
        cost.rows_mut(0, nw).copy_from(&self.gradient);
        cost.rows_mut(nw, mt)
            .copy_from(&(&self.tx_reweight * self.alpha));
        cost.rows_mut(nw + mt, nr)
            .copy_from(&(&self.rx_reweight * self.beta));

        let mut a = DMatrix::zeros(2, nx);
        for i in 0..mt {
            a[(0, nw + i)] = 1.0;
        }
        for j in 0..nr {
            a[(1, nw + mt + j)] = 1.0;
        }
        let b = DVector::from_vec(vec![self.tx_select as f64, self.rx_select as f64]);

        let mut blocks = Vec::with_capacity(mt + nr + 2);
        let mut g = DMatrix::zeros(nw + 1, nw);
        g.rows_mut(1, nw).copy_from(&(-self.factor.transpose()));
        let mut h = DVector::zeros(nw + 1);
        h[0] = 1.0;
        blocks.push(Block::with_gram(
            ConeKind::Soc,
            (0..nw).collect(),
            g,
            h,
            self.gram.clone(),
        ));

        let group_blocks = |blocks: &mut Vec<Block>, groups: &[Vec<usize>], first: usize| {
            for (i, grp) in groups.iter().enumerate() {
                let k = grp.len() + 1;
                let mut cols = Vec::with_capacity(k);
                cols.push(first + i);
                cols.extend_from_slice(grp);
                blocks.push(Block::new(
                    ConeKind::Soc,
                    cols,
                    -DMatrix::identity(k, k),
                    DVector::zeros(k),
                ));
            }
        };
        group_blocks(&mut blocks, &self.tx_groups, nw);
        group_blocks(&mut blocks, &self.rx_groups, nw + mt);

        let nb = mt + nr;
        let mut g = DMatrix::zeros(2 * nb, nb);
        let mut h = DVector::zeros(2 * nb);
        for k in 0..nb {
            g[(k, k)] = -1.0;
            g[(nb + k, k)] = 1.0;
            h[nb + k] = 1.0;
        }
        blocks.push(Block::new(ConeKind::Nonneg, (nw..nx).collect(), g, h));

        ConeProgram::new(cost, a, b, blocks)
    }

    fn split(&self, x: &DVector<f64>) -> (DVector<f64>, DVector<f64>, DVector<f64>) {
        let nw = self.dim();
        let mt = self.tx_groups.len();
        let nr = self.rx_groups.len();
        (
            x.rows(0, nw).into_owned(),
            x.rows(nw, mt).into_owned(),
            x.rows(nw + mt, nr).into_owned(),
        )
    }
}

/// Solves the subproblem to duality gap and feasibility `tol`.
pub fn solve(spec: &SubproblemSpec, tol: f64) -> Result<SubproblemSolution> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::domain("tolerance must be positive"));
    }
    let nw = spec.dim();
    let mt = spec.tx_groups.len();
    let nr = spec.rx_groups.len();
    if !spec.feasible_sums() {
        let c = DVector::from_element(mt, 1.0);
        let r = DVector::from_element(nr, 1.0);
        let w = DVector::zeros(nw);
        return Ok(SubproblemSolution {
            objective: spec.objective(&w, &c, &r),
            residuals: spec.residuals(&w, &c, &r),
            w_tilde: w,
            c,
            r,
            iterations: 0,
            status: SolveStatus::Infeasible,
            tx_duals: Vec::new(),
            rx_duals: Vec::new(),
        });
    }

    let prog = spec.program();
    let mut x0 = DVector::zeros(nw + mt + nr);
    for i in 0..mt {
        x0[nw + i] = spec.tx_select as f64 / mt as f64;
    }
    for j in 0..nr {
        x0[nw + mt + j] = spec.rx_select as f64 / nr as f64;
    }
    let settings = IpmSettings {
        feas_tol: tol * 1e-2,
        gap_tol: tol * 1e-2,
        max_iter: MAX_IPM_ITER,
    };
    let res = prog.solve(&x0, &settings).ok_or_else(|| {
        Error::Solver("interior-point iteration failed before the first step".into())
    })?;

    let (w, c, r) = spec.split(&res.x);
    let residuals = spec.residuals(&w, &c, &r);
    let duals = |first: usize, count: usize| {
        (first..first + count)
            .map(|b| DVector::from_column_slice(prog.block_slice(b, &res.z)))
            .collect::<Vec<_>>()
    };
    let tx_duals = duals(1, mt);
    let rx_duals = duals(1 + mt, nr);
    let status = match res.status {
        IpmStatus::Optimal => SolveStatus::Optimal,
        _ if res.primal_residual <= tol && res.dual_residual <= tol && res.gap <= tol => {
            SolveStatus::Optimal
        }
        _ => SolveStatus::MaxIter,
    };
    Ok(SubproblemSolution {
        objective: spec.objective(&w, &c, &r),
        residuals,
        w_tilde: w,
        c,
        r,
        iterations: res.iterations,
        status,
        tx_duals,
        rx_duals,
    })
}

fn project_soc(v: &DVector<f64>) -> DVector<f64> {
    let t = v[0];
    let tail = v.rows(1, v.len() - 1);
    let nt = tail.norm();
    if nt <= t {
        v.clone()
    } else if nt <= -t {
        DVector::zeros(v.len())
    } else {
        let a = (t + nt) / 2.0;
        let mut out = DVector::zeros(v.len());
        out[0] = a;
        out.rows_mut(1, v.len() - 1).copy_from(&(tail * (a / nt)));
        out
    }
}

/// Minimum of `d'v` over `{0 <= v <= 1, Σv = k}`: the sum of the `k`
/// smallest entries.
fn capped_simplex_min(d: &DVector<f64>, k: usize) -> f64 {
    let mut v: Vec<f64> = d.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v.iter().take(k).sum()
}

/// Primal residuals plus a Lagrangian dual bound obtained by dualizing the
/// group cones with the solution's multipliers (projected onto the cone) and
/// minimizing the remaining separable problem in closed form.
pub fn check_kkt(spec: &SubproblemSpec, sol: &SubproblemSolution) -> KktReport {
    let residuals = spec.residuals(&sol.w_tilde, &sol.c, &sol.r);
    let objective = spec.objective(&sol.w_tilde, &sol.c, &sol.r);
    let mut a = spec.gradient.clone();
    let mut d_tx = &spec.tx_reweight * spec.alpha;
    let mut d_rx = &spec.rx_reweight * spec.beta;
    let mut fold = |groups: &[Vec<usize>], duals: &[DVector<f64>], d: &mut DVector<f64>| {
        for (i, grp) in groups.iter().enumerate() {
            let Some(zi) = duals.get(i) else { continue };
            let z = project_soc(zi);
            d[i] -= z[0];
            for (k, &col) in grp.iter().enumerate() {
                a[col] -= z[k + 1];
            }
        }
    };
    fold(&spec.tx_groups, &sol.tx_duals, &mut d_tx);
    fold(&spec.rx_groups, &sol.rx_duals, &mut d_rx);
    let ball = spec
        .factor
        .clone()
        .solve_lower_triangular(&a)
        .map(|u| -u.norm())
        .unwrap_or(f64::NEG_INFINITY);
    let dual_bound = ball
        + capped_simplex_min(&d_tx, spec.tx_select)
        + capped_simplex_min(&d_rx, spec.rx_select);
    KktReport {
        residuals,
        max_primal: residuals.max(),
        objective,
        dual_bound,
        gap: objective - dual_bound,
    }
}

#[derive(Serialize, Deserialize)]
struct DebugDump {
    gradient: Vec<f64>,
    factor_rows: Vec<Vec<f64>>,
    jitter: f64,
    tx_groups: Vec<Vec<usize>>,
    rx_groups: Vec<Vec<usize>>,
    tx_reweight: Vec<f64>,
    rx_reweight: Vec<f64>,
    alpha: f64,
    beta: f64,
    tx_select: usize,
    rx_select: usize,
    w_tilde: Vec<f64>,
    c: Vec<f64>,
    r: Vec<f64>,
    objective: f64,
    residuals: Residuals,
    iterations: usize,
    status: SolveStatus,
}

/// Writes a spec/solution pair as JSON for offline inspection.
pub fn write_debug_dump(
    spec: &SubproblemSpec,
    sol: &SubproblemSolution,
    path: &Path,
) -> Result<()> {
    let v = |x: &DVector<f64>| x.iter().copied().collect::<Vec<_>>();
    let dump = DebugDump {
        gradient: v(&spec.gradient),
        factor_rows: spec
            .factor
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect(),
        jitter: spec.jitter,
        tx_groups: spec.tx_groups.clone(),
        rx_groups: spec.rx_groups.clone(),
        tx_reweight: v(&spec.tx_reweight),
        rx_reweight: v(&spec.rx_reweight),
        alpha: spec.alpha,
        beta: spec.beta,
        tx_select: spec.tx_select,
        rx_select: spec.rx_select,
        w_tilde: v(&sol.w_tilde),
        c: v(&sol.c),
        r: v(&sol.r),
        objective: sol.objective,
        residuals: sol.residuals,
        iterations: sol.iterations,
        status: sol.status,
    };
    let file = std::fs::File::create(path)?;
    serde_json::to_writer_pretty(std::io::BufWriter::new(file), &dump)?;
    Ok(())
}
