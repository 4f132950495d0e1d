//! Jordan algebra and Nesterov-Todd scaling for the nonnegative orthant and
//! second-order cones.
//!
//! A second-order cone block `(u0, u1)` satisfies `u0 >= ||u1||`. All
//! routines operate on slices of the stacked cone vector.

use nalgebra::DVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeKind {
    Nonneg,
    Soc,
}

/// `min eig(u)`: the entry minimum for the orthant, `u0 - ||u1||` for a
/// second-order cone.
pub fn min_eig(kind: ConeKind, u: &[f64]) -> f64 {
    match kind {
        ConeKind::Nonneg => u.iter().copied().fold(f64::INFINITY, f64::min),
        ConeKind::Soc => u[0] - norm(&u[1..]),
    }
}

/// Number of cone "eigenvalues" contributed to the barrier degree.
pub fn degree(kind: ConeKind, dim: usize) -> usize {
    match kind {
        ConeKind::Nonneg => dim,
        ConeKind::Soc => 1,
    }
}

pub fn add_identity(kind: ConeKind, u: &mut [f64], t: f64) {
    match kind {
        ConeKind::Nonneg => u.iter_mut().for_each(|v| *v += t),
        ConeKind::Soc => u[0] += t,
    }
}

fn norm(u: &[f64]) -> f64 {
    u.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `u0^2 - ||u1||^2` evaluated as a product to limit cancellation.
fn soc_det(u: &[f64]) -> f64 {
    let n1 = norm(&u[1..]);
    (u[0] - n1) * (u[0] + n1)
}

/// Jordan product `u ∘ v` written into `out`.
pub fn jordan_product(kind: ConeKind, u: &[f64], v: &[f64], out: &mut [f64]) {
    match kind {
        ConeKind::Nonneg => {
            for i in 0..u.len() {
                out[i] = u[i] * v[i];
            }
        }
        ConeKind::Soc => {
            out[0] = dot(u, v);
            for i in 1..u.len() {
                out[i] = u[0] * v[i] + v[0] * u[i];
            }
        }
    }
}

/// Solves `λ ∘ x = d` for `x`.
pub fn jordan_solve(kind: ConeKind, lambda: &[f64], d: &[f64], out: &mut [f64]) {
    match kind {
        ConeKind::Nonneg => {
            for i in 0..d.len() {
                out[i] = d[i] / lambda[i];
            }
        }
        ConeKind::Soc => {
            let l0 = lambda[0];
            let det = soc_det(lambda);
            let x0 = (l0 * d[0] - dot(&lambda[1..], &d[1..])) / det;
            out[0] = x0;
            for i in 1..d.len() {
                out[i] = (d[i] - x0 * lambda[i]) / l0;
            }
        }
    }
}

/// Largest `α >= 0` keeping `u + α du` in the cone (`f64::INFINITY` when
/// unbounded). `u` must be interior.
pub fn max_step(kind: ConeKind, u: &[f64], du: &[f64]) -> f64 {
    match kind {
        ConeKind::Nonneg => u
            .iter()
            .zip(du)
            .filter(|(_, &d)| d < 0.0)
            .map(|(&v, &d)| -v / d)
            .fold(f64::INFINITY, f64::min),
        ConeKind::Soc => {
            let a = soc_det(du);
            let b = u[0] * du[0] - dot(&u[1..], &du[1..]);
            let c = soc_det(u).max(0.0);
            let disc = b * b - a * c;
            if a < 0.0 || (b < 0.0 && disc >= 0.0) {
                let root = disc.max(0.0).sqrt();
                let denom = root - b;
                if denom <= 0.0 {
                    0.0
                } else {
                    c / denom
                }
            } else {
                f64::INFINITY
            }
        }
    }
}

/// Nesterov-Todd scaling `W` of one block, with `W z = W^{-1} s = λ`.
#[derive(Debug, Clone)]
pub enum Scaling {
    /// `W = diag(d)`, `d = sqrt(s / z)`.
    Nonneg { d: DVector<f64> },
    /// `W = η (2 w̄ w̄' - J)`, `J = diag(1, -1, ..., -1)`, `w̄' J w̄ = 1`.
    Soc { eta: f64, wbar: DVector<f64> },
}

impl Scaling {
    pub fn compute(kind: ConeKind, s: &[f64], z: &[f64]) -> Self {
        match kind {
            ConeKind::Nonneg => Scaling::Nonneg {
                d: DVector::from_iterator(s.len(), s.iter().zip(z).map(|(a, b)| (a / b).sqrt())),
            },
            ConeKind::Soc => {
                let sn = soc_det(s).max(f64::MIN_POSITIVE).sqrt();
                let zn = soc_det(z).max(f64::MIN_POSITIVE).sqrt();
                let eta = (sn / zn).sqrt();
                let sbar: Vec<f64> = s.iter().map(|v| v / sn).collect();
                let zbar: Vec<f64> = z.iter().map(|v| v / zn).collect();
                let gamma = ((1.0 + dot(&sbar, &zbar)) / 2.0)
                    .max(f64::MIN_POSITIVE)
                    .sqrt();
                // w = (s̄ + J z̄) / 2γ is the NT point; W = η (2 v v' - J)
                // with v = (w + e) / sqrt(2 (w0 + 1)).
                let mut v = DVector::zeros(s.len());
                let w0 = (sbar[0] + zbar[0]) / (2.0 * gamma);
                let k = (2.0 * (w0 + 1.0)).sqrt();
                v[0] = (w0 + 1.0) / k;
                for i in 1..s.len() {
                    v[i] = (sbar[i] - zbar[i]) / (2.0 * gamma) / k;
                }
                Scaling::Soc { eta, wbar: v }
            }
        }
    }

    /// `out = W v`.
    pub fn apply(&self, v: &[f64], out: &mut [f64]) {
        match self {
            Scaling::Nonneg { d } => {
                for i in 0..v.len() {
                    out[i] = d[i] * v[i];
                }
            }
            Scaling::Soc { eta, wbar } => {
                let wv = dot(wbar.as_slice(), v);
                out[0] = eta * (2.0 * wbar[0] * wv - v[0]);
                for i in 1..v.len() {
                    out[i] = eta * (2.0 * wbar[i] * wv + v[i]);
                }
            }
        }
    }

    /// `out = W^{-1} v`, with `W^{-1} = η^{-1} (2 J w̄ w̄' J - J)`.
    pub fn apply_inv(&self, v: &[f64], out: &mut [f64]) {
        match self {
            Scaling::Nonneg { d } => {
                for i in 0..v.len() {
                    out[i] = v[i] / d[i];
                }
            }
            Scaling::Soc { eta, wbar } => {
                // w̄' J v
                let wjv = wbar[0] * v[0] - dot(&wbar.as_slice()[1..], &v[1..]);
                out[0] = (2.0 * wbar[0] * wjv - v[0]) / eta;
                for i in 1..v.len() {
                    out[i] = (-2.0 * wbar[i] * wjv + v[i]) / eta;
                }
            }
        }
    }
}
