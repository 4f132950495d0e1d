//! Primal-dual interior-point method for cone programs
//!
//! ```text
//! minimize    c'x
//! subject to  A x = b
//!             G x + s = h,   s ∈ K
//! ```
//!
//! where `K` is a product of nonnegative orthants and second-order cones.
//! Search directions use Nesterov-Todd scaling with a Mehrotra
//! predictor-corrector; the Newton system is reduced to the normal equations
//! `G'W^{-2}G` and solved by dense Cholesky with a Schur complement for the
//! equality rows.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use super::cones::{self, ConeKind, Scaling};

const REFINE_STEPS: usize = 3;

/// One cone block `s_b = h_b - g_b x[cols] ∈ K_b`.
#[derive(Debug, Clone)]
pub struct Block {
    pub kind: ConeKind,
    pub cols: Vec<usize>,
    pub g: DMatrix<f64>,
    pub h: DVector<f64>,
    gram: DMatrix<f64>,
    offset: usize,
}

impl Block {
    pub fn new(kind: ConeKind, cols: Vec<usize>, g: DMatrix<f64>, h: DVector<f64>) -> Self {
        let gram = g.tr_mul(&g);
        Self::with_gram(kind, cols, g, h, gram)
    }

    /// As [`Block::new`] with a precomputed `g'g`.
    pub fn with_gram(
        kind: ConeKind,
        cols: Vec<usize>,
        g: DMatrix<f64>,
        h: DVector<f64>,
        gram: DMatrix<f64>,
    ) -> Self {
        debug_assert_eq!(g.ncols(), cols.len());
        debug_assert_eq!(g.nrows(), h.len());
        Block {
            kind,
            cols,
            g,
            h,
            gram,
            offset: 0,
        }
    }

    fn dim(&self) -> usize {
        self.h.len()
    }

    fn range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.dim()
    }
}

#[derive(Debug, Clone)]
pub struct ConeProgram {
    pub c: DVector<f64>,
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    blocks: Vec<Block>,
    cone_dim: usize,
    degree: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IpmStatus {
    Optimal,
    MaxIter,
    Stalled,
}

#[derive(Debug, Clone)]
pub struct IpmResult {
    pub x: DVector<f64>,
    pub z: DVector<f64>,
    pub status: IpmStatus,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct IpmSettings {
    pub feas_tol: f64,
    pub gap_tol: f64,
    pub max_iter: usize,
}

impl ConeProgram {
    pub fn new(c: DVector<f64>, a: DMatrix<f64>, b: DVector<f64>, mut blocks: Vec<Block>) -> Self {
        let mut offset = 0;
        let mut degree = 0;
        for blk in &mut blocks {
            blk.offset = offset;
            offset += blk.dim();
            degree += cones::degree(blk.kind, blk.dim());
        }
        ConeProgram {
            c,
            a,
            b,
            blocks,
            cone_dim: offset,
            degree,
        }
    }

    pub fn block_slice<'a>(&self, index: usize, v: &'a DVector<f64>) -> &'a [f64] {
        &v.as_slice()[self.blocks[index].range()]
    }

    fn n(&self) -> usize {
        self.c.len()
    }

    fn h(&self) -> DVector<f64> {
        let mut h = DVector::zeros(self.cone_dim);
        for blk in &self.blocks {
            h.rows_mut(blk.offset, blk.dim()).copy_from(&blk.h);
        }
        h
    }

    /// `G x`
    fn g_mul(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.cone_dim);
        for blk in &self.blocks {
            let xs = DVector::from_iterator(blk.cols.len(), blk.cols.iter().map(|&j| x[j]));
            out.rows_mut(blk.offset, blk.dim())
                .copy_from(&(&blk.g * xs));
        }
        out
    }

    /// `G' z`
    fn gt_mul(&self, z: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.n());
        for blk in &self.blocks {
            let zb = z.rows(blk.offset, blk.dim());
            let local = blk.g.tr_mul(&zb);
            for (k, &j) in blk.cols.iter().enumerate() {
                out[j] += local[k];
            }
        }
        out
    }

    fn for_each_block<F>(&self, scalings: &[Scaling], v: &DVector<f64>, mut f: F) -> DVector<f64>
    where
        F: FnMut(&Scaling, ConeKind, &[f64], &mut [f64]),
    {
        let mut out = DVector::zeros(self.cone_dim);
        for (blk, sc) in self.blocks.iter().zip(scalings) {
            let r = blk.range();
            f(
                sc,
                blk.kind,
                &v.as_slice()[r.clone()],
                &mut out.as_mut_slice()[r],
            );
        }
        out
    }

    fn w_mul(&self, sc: &[Scaling], v: &DVector<f64>) -> DVector<f64> {
        self.for_each_block(sc, v, |s, _, a, o| s.apply(a, o))
    }

    fn w_inv_mul(&self, sc: &[Scaling], v: &DVector<f64>) -> DVector<f64> {
        self.for_each_block(sc, v, |s, _, a, o| s.apply_inv(a, o))
    }

    fn jordan(&self, u: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.cone_dim);
        for blk in &self.blocks {
            let r = blk.range();
            cones::jordan_product(
                blk.kind,
                &u.as_slice()[r.clone()],
                &v.as_slice()[r.clone()],
                &mut out.as_mut_slice()[r],
            );
        }
        out
    }

    fn jordan_div(&self, lambda: &DVector<f64>, d: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.cone_dim);
        for blk in &self.blocks {
            let r = blk.range();
            cones::jordan_solve(
                blk.kind,
                &lambda.as_slice()[r.clone()],
                &d.as_slice()[r.clone()],
                &mut out.as_mut_slice()[r],
            );
        }
        out
    }

    fn identity(&self) -> DVector<f64> {
        let mut e = DVector::zeros(self.cone_dim);
        for blk in &self.blocks {
            cones::add_identity(blk.kind, &mut e.as_mut_slice()[blk.range()], 1.0);
        }
        e
    }

    fn max_step(&self, u: &DVector<f64>, du: &DVector<f64>) -> f64 {
        self.blocks
            .iter()
            .map(|blk| {
                let r = blk.range();
                cones::max_step(blk.kind, &u.as_slice()[r.clone()], &du.as_slice()[r])
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Shifts each block of `s` so its minimum eigenvalue is at least `floor`.
    fn push_interior(&self, s: &mut DVector<f64>, floor: f64) {
        for blk in &self.blocks {
            let r = blk.range();
            let lo = cones::min_eig(blk.kind, &s.as_slice()[r.clone()]);
            if lo < floor {
                cones::add_identity(blk.kind, &mut s.as_mut_slice()[r], 1.0 - lo);
            }
        }
    }

    /// `G' W^{-2} G`, assembled block by block.
    fn normal_matrix(&self, scalings: &[Scaling]) -> DMatrix<f64> {
        let n = self.n();
        let mut hmat = DMatrix::zeros(n, n);
        for (blk, sc) in self.blocks.iter().zip(scalings) {
            let local = match sc {
                Scaling::Nonneg { d } => {
                    let k = blk.cols.len();
                    let mut scaled = blk.g.clone();
                    for (i, mut row) in scaled.row_iter_mut().enumerate() {
                        row /= d[i] * d[i];
                    }
                    let mut out = DMatrix::zeros(k, k);
                    out.gemm_tr(1.0, &blk.g, &scaled, 0.0);
                    out
                }
                Scaling::Soc { eta, wbar } => {
                    let mut jw = wbar.clone();
                    jw.rows_mut(1, jw.len() - 1).neg_mut();
                    let u = blk.g.tr_mul(&jw);
                    let v = blk.g.tr_mul(wbar);
                    let mut out = blk.gram.clone();
                    out.ger(4.0 * wbar.norm_squared(), &u, &u, 1.0);
                    out.ger(-2.0, &u, &v, 1.0);
                    out.ger(-2.0, &v, &u, 1.0);
                    out / (eta * eta)
                }
            };
            for (a, &ja) in blk.cols.iter().enumerate() {
                for (b, &jb) in blk.cols.iter().enumerate() {
                    hmat[(ja, jb)] += local[(a, b)];
                }
            }
        }
        hmat
    }

    pub fn solve(&self, x0: &DVector<f64>, settings: &IpmSettings) -> Option<IpmResult> {
        let h = self.h();
        let p = self.b.len();
        let mut x = x0.clone();
        let mut y = DVector::zeros(p);
        let mut s = &h - self.g_mul(&x);
        self.push_interior(&mut s, 1e-3);
        let mut z = self.identity();
        let e = self.identity();
        let nb = 1.0 + self.b.norm();
        let nh = 1.0 + h.norm();
        let nc = 1.0 + self.c.norm();

        let mut best: Option<(f64, IpmResult)> = None;
        let mut status = IpmStatus::MaxIter;
        let mut iter = 0;
        loop {
            let rx = &self.a.tr_mul(&y) + self.gt_mul(&z) + &self.c;
            let ry = &self.a * &x - &self.b;
            let rz = self.g_mul(&x) + &s - &h;
            let pres = (ry.norm() / nb).max(rz.norm() / nh);
            let dres = rx.norm() / nc;
            let gap = s.dot(&z);
            let pcost = self.c.dot(&x);
            let dcost = -h.dot(&z) - self.b.dot(&y);
            let relgap = gap / (1.0f64).max(pcost.abs().min(dcost.abs()));
            let score = pres.max(dres).max(relgap.min(gap));
            if best.as_ref().is_none_or(|(b, _)| score <= *b) {
                let snapshot = IpmResult {
                    x: x.clone(),
                    z: z.clone(),
                    status,
                    iterations: iter,
                    primal_residual: pres,
                    dual_residual: dres,
                    gap,
                };
                best = Some((score, snapshot));
            }
            if pres <= settings.feas_tol
                && dres <= settings.feas_tol
                && (gap <= settings.gap_tol || relgap <= settings.gap_tol)
            {
                status = IpmStatus::Optimal;
                break;
            }
            if iter >= settings.max_iter {
                status = IpmStatus::MaxIter;
                break;
            }
            iter += 1;

            let scalings: Vec<Scaling> = self
                .blocks
                .iter()
                .map(|blk| {
                    let r = blk.range();
                    Scaling::compute(blk.kind, &s.as_slice()[r.clone()], &z.as_slice()[r])
                })
                .collect();
            let lambda = self.w_mul(&scalings, &z);
            let mu = gap / self.degree as f64;

            let Some(kkt) = Kkt::factor(self, &scalings) else {
                status = IpmStatus::Stalled;
                break;
            };

            // Predictor.
            let ds_aff = -self.jordan(&lambda, &lambda);
            let (_, _, dz_a, dsv_a) = kkt.solve(self, &scalings, &lambda, &rx, &ry, &rz, &ds_aff);
            let alpha_aff = self
                .max_step(&s, &dsv_a)
                .min(self.max_step(&z, &dz_a))
                .min(1.0);
            let sigma = (1.0 - alpha_aff).powi(3);

            // Corrector.
            let cross = self.jordan(
                &self.w_inv_mul(&scalings, &dsv_a),
                &self.w_mul(&scalings, &dz_a),
            );
            let ds = &ds_aff - cross + &e * (sigma * mu);
            let (dx, dy, dz, dsv) = kkt.solve(self, &scalings, &lambda, &rx, &ry, &rz, &ds);
            let step = (0.99 * self.max_step(&s, &dsv).min(self.max_step(&z, &dz))).min(1.0);
            if step.is_nan() || step <= 1e-12 {
                status = IpmStatus::Stalled;
                break;
            }
            x += &dx * step;
            y += &dy * step;
            s += &dsv * step;
            z += &dz * step;
        }

        if status == IpmStatus::Optimal {
            let rz = self.g_mul(&x) + &s - &h;
            let ry = &self.a * &x - &self.b;
            let rx = &self.a.tr_mul(&y) + self.gt_mul(&z) + &self.c;
            let gap = s.dot(&z);
            return Some(IpmResult {
                x,
                z,
                status,
                iterations: iter,
                primal_residual: (ry.norm() / nb).max(rz.norm() / nh),
                dual_residual: rx.norm() / nc,
                gap,
            });
        }
        let (_, mut out) = best?;
        out.status = status;
        out.iterations = iter;
        Some(out)
    }
}

/// Factorized reduced Newton system for one iteration.
struct Kkt {
    chol: Cholesky<f64, Dyn>,
    hinv_at: DMatrix<f64>,
    schur: Option<Cholesky<f64, Dyn>>,
}

impl Kkt {
    fn factor(prog: &ConeProgram, scalings: &[Scaling]) -> Option<Self> {
        let hmat = prog.normal_matrix(scalings);
        if hmat.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let n = hmat.nrows();
        let scale = (0..n)
            .map(|i| hmat[(i, i)].abs())
            .fold(0.0, f64::max)
            .max(1.0);
        let mut delta = 0.0;
        let chol = loop {
            let mut hreg = hmat.clone();
            if delta > 0.0 {
                for i in 0..n {
                    hreg[(i, i)] += delta;
                }
            }
            if let Some(ch) = Cholesky::new(hreg) {
                break ch;
            }
            delta = if delta == 0.0 {
                scale * 1e-14
            } else {
                delta * 100.0
            };
            if delta > scale * 1e-4 {
                return None;
            }
        };
        let p = prog.a.nrows();
        let (hinv_at, schur) = if p > 0 {
            let at = prog.a.transpose();
            let hinv_at = chol.solve(&at);
            let s = &prog.a * &hinv_at;
            (hinv_at, Some(Cholesky::new(s)?))
        } else {
            (DMatrix::zeros(n, 0), None)
        };
        Some(Kkt {
            chol,
            hinv_at,
            schur,
        })
    }

    /// Solves `[H A'; A 0][dx; dy] = [r1; r2]`, refining against `H` applied
    /// as `G' W^{-1} W^{-1} G` rather than the assembled matrix.
    fn solve_reduced(
        &self,
        prog: &ConeProgram,
        sc: &[Scaling],
        r1: &DVector<f64>,
        r2: &DVector<f64>,
    ) -> (DVector<f64>, DVector<f64>) {
        let a = &prog.a;
        let base = |r1: &DVector<f64>, r2: &DVector<f64>| {
            let hr = self.chol.solve(r1);
            match &self.schur {
                Some(sch) => {
                    let dy = sch.solve(&(a * &hr - r2));
                    let dx = hr - &self.hinv_at * &dy;
                    (dx, dy)
                }
                None => (hr, DVector::zeros(0)),
            }
        };
        let (mut dx, mut dy) = base(r1, r2);
        for _ in 0..REFINE_STEPS {
            let hdx = prog.gt_mul(&prog.w_inv_mul(sc, &prog.w_inv_mul(sc, &prog.g_mul(&dx))));
            let e1 = r1 - hdx - a.tr_mul(&dy);
            let e2 = r2 - a * &dx;
            let (cx, cy) = base(&e1, &e2);
            dx += cx;
            dy += cy;
        }
        (dx, dy)
    }

    /// Newton direction for `λ ∘ (W dz + W^{-1} ds) = d_s` and the linearized
    /// residual equations.
    #[allow(clippy::too_many_arguments)]
    fn solve(
        &self,
        prog: &ConeProgram,
        sc: &[Scaling],
        lambda: &DVector<f64>,
        rx: &DVector<f64>,
        ry: &DVector<f64>,
        rz: &DVector<f64>,
        d_s: &DVector<f64>,
    ) -> (DVector<f64>, DVector<f64>, DVector<f64>, DVector<f64>) {
        // Scaled form: with ξ = λ \ d_s and dz̃ = W dz,
        //   dz̃ = W^{-1}(G dx + r_z) + ξ,   ds = -r_z - G dx.
        let xi = prog.jordan_div(lambda, d_s);
        let winv_rz = prog.w_inv_mul(sc, rz);
        let r1 = -rx - prog.gt_mul(&prog.w_inv_mul(sc, &(&winv_rz + &xi)));
        let r2 = -ry;
        let (dx, dy) = self.solve_reduced(prog, sc, &r1, &r2);
        let gdx = prog.g_mul(&dx);
        let dz_scaled = prog.w_inv_mul(sc, &(&gdx + rz)) + xi;
        let dz = prog.w_inv_mul(sc, &dz_scaled);
        let ds = -rz - gdx;
        (dx, dy, dz, ds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_lp_over_box() {
        // minimize x0 + 2 x1 s.t. x0 + x1 = 1, 0 <= x <= 1
        let c = DVector::from_vec(vec![1.0, 2.0]);
        let a = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
        let b = DVector::from_vec(vec![1.0]);
        let g = DMatrix::from_row_slice(4, 2, &[-1.0, 0.0, 0.0, -1.0, 1.0, 0.0, 0.0, 1.0]);
        let h = DVector::from_vec(vec![0.0, 0.0, 1.0, 1.0]);
        let prog = ConeProgram::new(
            c,
            a,
            b,
            vec![Block::new(ConeKind::Nonneg, vec![0, 1], g, h)],
        );
        let res = prog
            .solve(
                &DVector::from_vec(vec![0.5, 0.5]),
                &IpmSettings {
                    feas_tol: 1e-10,
                    gap_tol: 1e-10,
                    max_iter: 100,
                },
            )
            .unwrap();
        assert_eq!(res.status, IpmStatus::Optimal);
        assert!(
            (res.x[0] - 1.0).abs() < 1e-8 && res.x[1].abs() < 1e-8,
            "{}",
            res.x
        );
    }

    #[test]
    fn linear_objective_over_unit_ball() {
        // minimize 3 x0 - 4 x1 s.t. ||x|| <= 1  ->  x = (-0.6, 0.8)
        let c = DVector::from_vec(vec![3.0, -4.0]);
        let g = DMatrix::from_row_slice(3, 2, &[0.0, 0.0, -1.0, 0.0, 0.0, -1.0]);
        let h = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        let prog = ConeProgram::new(
            c,
            DMatrix::zeros(0, 2),
            DVector::zeros(0),
            vec![Block::new(ConeKind::Soc, vec![0, 1], g, h)],
        );
        let res = prog
            .solve(
                &DVector::zeros(2),
                &IpmSettings {
                    feas_tol: 1e-10,
                    gap_tol: 1e-10,
                    max_iter: 100,
                },
            )
            .unwrap();
        assert_eq!(res.status, IpmStatus::Optimal);
        assert!(
            (res.x[0] + 0.6).abs() < 1e-8 && (res.x[1] - 0.8).abs() < 1e-8,
            "{}",
            res.x
        );
    }
}
