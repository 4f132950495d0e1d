#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};

/// A group-sparse subproblem in plain data form:
/// minimize `m'w + α p'c + β q'r` subject to `w'Rw ≤ 1`,
/// `‖w[P_i]‖ ≤ c_i`, `‖w[Q_j]‖ ≤ r_j`, `0 ≤ c, r ≤ 1`, `Σc = k_t`, `Σr = k_r`.
pub struct Instance {
    pub m: DVector<f64>,
    pub r: DMatrix<f64>,
    pub tx_groups: Vec<Vec<usize>>,
    pub rx_groups: Vec<Vec<usize>>,
    pub p: DVector<f64>,
    pub q: DVector<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub k_t: usize,
    pub k_r: usize,
}

pub struct Reference {
    pub objective: f64,
    pub w: DVector<f64>,
    pub c: DVector<f64>,
    pub r: DVector<f64>,
}

impl Instance {
    fn n(&self) -> usize {
        self.m.len()
    }

    fn unpack(&self, z: &DVector<f64>) -> (DVector<f64>, DVector<f64>, DVector<f64>) {
        let n = self.n();
        let (mt, nr) = (self.tx_groups.len(), self.rx_groups.len());
        let w = z.rows(0, n).into_owned();
        let mut c = DVector::zeros(mt);
        let mut s = 0.0;
        for i in 0..mt - 1 {
            c[i] = z[n + i];
            s += c[i];
        }
        c[mt - 1] = self.k_t as f64 - s;
        let mut r = DVector::zeros(nr);
        let mut s = 0.0;
        for j in 0..nr - 1 {
            r[j] = z[n + mt - 1 + j];
            s += r[j];
        }
        r[nr - 1] = self.k_r as f64 - s;
        (w, c, r)
    }

    pub fn objective(&self, w: &DVector<f64>, c: &DVector<f64>, r: &DVector<f64>) -> f64 {
        self.m.dot(w) + self.alpha * self.p.dot(c) + self.beta * self.q.dot(r)
    }

    /// Gradient of `c_i` (or `r_j`) with respect to the free coordinates.
    fn coord_grad(&self, dim: usize, offset: usize, count: usize, i: usize) -> DVector<f64> {
        let mut g = DVector::zeros(dim);
        if i + 1 < count {
            g[offset + i] = 1.0;
        } else {
            for k in 0..count - 1 {
                g[offset + k] = -1.0;
            }
        }
        g
    }

    /// Most violated constraint at `z` and a subgradient of it, or `None`
    /// when `z` is strictly feasible.
    fn violation(&self, z: &DVector<f64>) -> Option<DVector<f64>> {
        let n = self.n();
        let (mt, nr) = (self.tx_groups.len(), self.rx_groups.len());
        let dim = z.len();
        let (w, c, r) = self.unpack(z);
        let mut worst = 0.0;
        let mut grad = None;
        let mut consider = |val: f64, g: &dyn Fn() -> DVector<f64>| {
            if val >= worst {
                worst = val;
                grad = Some(g());
            }
        };
        let rw = &self.r * &w;
        consider(w.dot(&rw) - 1.0, &|| {
            let mut g = DVector::zeros(dim);
            g.rows_mut(0, n).copy_from(&(&rw * 2.0));
            g
        });
        let sides = [
            (&self.tx_groups, &c, n, mt),
            (&self.rx_groups, &r, n + mt - 1, nr),
        ];
        for (groups, caps, offset, count) in sides {
            for (i, grp) in groups.iter().enumerate() {
                let norm = grp.iter().map(|&k| w[k] * w[k]).sum::<f64>().sqrt();
                consider(norm - caps[i], &|| {
                    let mut g = -self.coord_grad(dim, offset, count, i);
                    if norm > 0.0 {
                        for &k in grp {
                            g[k] += w[k] / norm;
                        }
                    }
                    g
                });
                consider(-caps[i], &|| -self.coord_grad(dim, offset, count, i));
                consider(caps[i] - 1.0, &|| self.coord_grad(dim, offset, count, i));
            }
        }
        grad
    }

    fn objective_grad(&self, dim: usize) -> DVector<f64> {
        let n = self.n();
        let (mt, nr) = (self.tx_groups.len(), self.rx_groups.len());
        let mut g = DVector::zeros(dim);
        g.rows_mut(0, n).copy_from(&self.m);
        for i in 0..mt {
            g += self.coord_grad(dim, n, mt, i) * (self.alpha * self.p[i]);
        }
        for j in 0..nr {
            g += self.coord_grad(dim, n + mt - 1, nr, j) * (self.beta * self.q[j]);
        }
        g
    }

    /// Central-cut ellipsoid method over `(w, c_1..c_{M-1}, r_1..r_{N-1})`.
    /// Only strictly feasible centres are recorded, so the returned point
    /// satisfies every constraint exactly.
    pub fn solve_reference(&self, max_iter: usize) -> Reference {
        let n = self.n();
        let (mt, nr) = (self.tx_groups.len(), self.rx_groups.len());
        assert!(
            self.k_t < mt && self.k_r < nr,
            "reference needs an interior"
        );
        let dim = n + mt - 1 + nr - 1;
        let lmin = self.r.clone().symmetric_eigen().eigenvalues.min();
        let radius2 = 1.0 / lmin + (mt + nr) as f64 + 1.0;
        let mut z = DVector::zeros(dim);
        for i in 0..mt - 1 {
            z[n + i] = self.k_t as f64 / mt as f64;
        }
        for j in 0..nr - 1 {
            z[n + mt - 1 + j] = self.k_r as f64 / nr as f64;
        }
        let mut p = DMatrix::identity(dim, dim) * radius2;
        let fo = self.objective_grad(dim);
        let d = dim as f64;
        let mut best: Option<(f64, DVector<f64>)> = None;
        for _ in 0..max_iter {
            let g = match self.violation(&z) {
                Some(g) => g,
                None => {
                    let (w, c, r) = self.unpack(&z);
                    let f = self.objective(&w, &c, &r);
                    if best.as_ref().is_none_or(|(b, _)| f < *b) {
                        best = Some((f, z.clone()));
                    }
                    fo.clone()
                }
            };
            let pg = &p * &g;
            let gpg = g.dot(&pg);
            if gpg.is_nan() || gpg <= 1e-300 {
                break;
            }
            let width = gpg.sqrt();
            if best.is_some() && fo.dot(&(&p * &fo)).sqrt() < 1e-13 {
                break;
            }
            let pgn = pg / width;
            z -= &pgn * (1.0 / (d + 1.0));
            p = (&p - (&pgn * pgn.transpose()) * (2.0 / (d + 1.0))) * (d * d / (d * d - 1.0));
            p = (&p + p.transpose()) * 0.5;
        }
        let (objective, z) = best.expect("no feasible centre found");
        let (w, c, r) = self.unpack(&z);
        Reference { objective, w, c, r }
    }
}
