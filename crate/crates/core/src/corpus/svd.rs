//! Truncated SVD by Golub–Kahan–Lanczos bidiagonalization.
//!
//! The operator is bidiagonalized with full reorthogonalization from a seeded
//! start vector, `A V_p = U_p B_p`, and the small bidiagonal `B_p` is solved
//! with one-sided Jacobi. Ritz triplet `i` has residual
//! `|beta_p * x_i[p-1]|`, where `x_i` is the i-th left singular vector of
//! `B_p`; iteration stops when the top-k residuals are below `tol * sigma_1`.
//! After `min(rows, cols)` steps the factorization is complete and exact up
//! to rounding.

use super::CorpusError;
use crate::rng::Lcg64;

/// Matrix-free access to a real matrix.
pub trait LinearOperator {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    /// `y = A x`
    fn apply(&self, x: &[f64], y: &mut [f64]);
    /// `y = Aᵀ x`
    fn apply_transpose(&self, x: &[f64], y: &mut [f64]);
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        DenseMatrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }
}

impl LinearOperator for DenseMatrix {
    fn nrows(&self) -> usize {
        self.rows
    }

    fn ncols(&self) -> usize {
        self.cols
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (r, out) in y.iter_mut().enumerate() {
            *out = dot(&self.data[r * self.cols..(r + 1) * self.cols], x);
        }
    }

    fn apply_transpose(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for (r, &xr) in x.iter().enumerate() {
            axpy(xr, &self.data[r * self.cols..(r + 1) * self.cols], y);
        }
    }
}

struct Transposed<'a, M: ?Sized>(&'a M);

impl<M: LinearOperator + ?Sized> LinearOperator for Transposed<'_, M> {
    fn nrows(&self) -> usize {
        self.0.ncols()
    }
    fn ncols(&self) -> usize {
        self.0.nrows()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.0.apply_transpose(x, y)
    }
    fn apply_transpose(&self, x: &[f64], y: &mut [f64]) {
        self.0.apply(x, y)
    }
}

#[derive(Debug, Clone)]
pub struct SvdOptions {
    pub tol: f64,
    /// Maximum number of Lanczos steps; `None` means `10 * min(rows, cols)`.
    pub max_iter: Option<usize>,
    pub seed: u64,
}

impl Default for SvdOptions {
    fn default() -> Self {
        SvdOptions {
            tol: 1e-10,
            max_iter: None,
            seed: 0,
        }
    }
}

/// Rank-k factorization `A ≈ U diag(s) Vᵀ`.
///
/// `u[i]` and `v[i]` are the i-th left and right singular vectors.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Vec<Vec<f64>>,
    pub s: Vec<f64>,
    pub v: Vec<Vec<f64>>,
    /// Lanczos steps taken.
    pub iterations: usize,
}

impl Svd {
    /// Dense reconstruction `U diag(s) Vᵀ`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let rows = self.u.first().map_or(0, Vec::len);
        let cols = self.v.first().map_or(0, Vec::len);
        let mut out = DenseMatrix::zeros(rows, cols);
        for ((u, &s), v) in self.u.iter().zip(&self.s).zip(&self.v) {
            for (r, ur) in u.iter().enumerate() {
                let f = ur * s;
                for (c, vc) in v.iter().enumerate() {
                    out.data[r * cols + c] += f * vc;
                }
            }
        }
        out
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

/// Two rounds of classical Gram–Schmidt against `basis`.
fn reorthogonalize(w: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(w, b);
            axpy(-c, b, w);
        }
    }
}

/// Seeded random unit vector orthogonal to `basis`, if the space allows one.
fn fresh_direction(dim: usize, basis: &[Vec<f64>], rng: &mut Lcg64) -> Option<Vec<f64>> {
    if basis.len() >= dim {
        return None;
    }
    for _ in 0..8 {
        let mut w: Vec<f64> = (0..dim).map(|_| rng.next_f64() - 0.5).collect();
        let before = norm(&w);
        reorthogonalize(&mut w, basis);
        let n = norm(&w);
        if n > 1e-8 * before {
            w.iter_mut().for_each(|x| *x /= n);
            return Some(w);
        }
    }
    None
}

/// Dense SVD of a small square matrix by one-sided Jacobi rotations.
///
/// `cols[j]` is column j. Returns `(sigma, left, right)` sorted by
/// decreasing singular value, vectors as columns.
pub(crate) fn jacobi_svd(cols: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let n = cols.len();
    let mut w = cols;
    let mut y: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let eps = 1e-15;
    for _sweep in 0..100 {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let a = dot(&w[i], &w[i]);
                let b = dot(&w[j], &w[j]);
                let g = dot(&w[i], &w[j]);
                if g == 0.0 || g.abs() <= eps * (a * b).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (b - a) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..n {
                    let (wi, wj) = (w[i][k], w[j][k]);
                    w[i][k] = c * wi - s * wj;
                    w[j][k] = s * wi + c * wj;
                    let (yi, yj) = (y[i][k], y[j][k]);
                    y[i][k] = c * yi - s * yj;
                    y[j][k] = s * yi + c * yj;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma: Vec<f64> = w.iter().map(|c| norm(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]).then(a.cmp(&b)));

    // Normalized columns in decreasing-sigma order, re-orthogonalized against
    // their predecessors. Columns for tiny singular values are rounding noise
    // and may be nearly parallel to earlier ones; those get a completion
    // vector from the standard basis instead.
    let mut left: Vec<Vec<f64>> = Vec::with_capacity(n);
    for &j in &order {
        let mut col: Vec<f64> = if sigma[j] > 0.0 {
            w[j].iter().map(|x| x / sigma[j]).collect()
        } else {
            vec![0.0; n]
        };
        reorthogonalize(&mut col, &left);
        let nn = norm(&col);
        if nn > 0.5 {
            col.iter_mut().for_each(|x| *x /= nn);
        } else {
            col = (0..n)
                .find_map(|e| {
                    let mut cand = vec![0.0; n];
                    cand[e] = 1.0;
                    reorthogonalize(&mut cand, &left);
                    let cn = norm(&cand);
                    (cn > 1e-8).then(|| cand.iter().map(|x| x / cn).collect())
                })
                .expect("fewer than n vectors leave room");
        }
        left.push(col);
    }
    let sigma_sorted = order.iter().map(|&j| sigma[j]).collect();
    let right = order.iter().map(|&j| y[j].clone()).collect();
    (sigma_sorted, left, right)
}

/// Top-`k` singular triplets of `a`.
pub fn truncated_svd<M: LinearOperator + ?Sized>(
    a: &M,
    k: usize,
    opts: &SvdOptions,
) -> Result<Svd, CorpusError> {
    let max_rank = a.nrows().min(a.ncols());
    if k == 0 || k > max_rank {
        return Err(CorpusError::InvalidRank { k, max: max_rank });
    }
    if a.nrows() < a.ncols() {
        let t = lanczos_svd(&Transposed(a), k, opts)?;
        return Ok(Svd {
            u: t.v,
            s: t.s,
            v: t.u,
            iterations: t.iterations,
        });
    }
    lanczos_svd(a, k, opts)
}

/// Requires `nrows >= ncols`, so the right space is exhausted first.
fn lanczos_svd<M: LinearOperator + ?Sized>(
    a: &M,
    k: usize,
    opts: &SvdOptions,
) -> Result<Svd, CorpusError> {
    let (m, n) = (a.nrows(), a.ncols());
    let max_steps = opts.max_iter.unwrap_or(10 * n).max(1);
    let mut rng = Lcg64::new(opts.seed);

    let mut us: Vec<Vec<f64>> = Vec::new();
    let mut vs: Vec<Vec<f64>> = vec![fresh_direction(n, &[], &mut rng).expect("n >= 1")];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut scale = 0.0f64;
    let mut next_check = k.max(2 * k).max(k + 8).min(n);
    let mut last_residual = f64::INFINITY;

    loop {
        let j = us.len();
        let mut w = vec![0.0; m];
        a.apply(&vs[j], &mut w);
        if j > 0 {
            axpy(-betas[j - 1], &us[j - 1], &mut w);
        }
        reorthogonalize(&mut w, &us);
        let mut alpha = norm(&w);
        scale = scale.max(alpha);
        let u = if alpha > 1e-13 * scale && alpha > 0.0 {
            w.iter().map(|x| x / alpha).collect()
        } else {
            alpha = 0.0;
            fresh_direction(m, &us, &mut rng).expect("m >= n > j leaves room")
        };
        us.push(u);
        alphas.push(alpha);
        let p = us.len();

        let complete = p == n;
        let mut beta = 0.0;
        let mut next_v = None;
        if !complete {
            let mut z = vec![0.0; n];
            a.apply_transpose(&us[j], &mut z);
            axpy(-alpha, &vs[j], &mut z);
            reorthogonalize(&mut z, &vs);
            beta = norm(&z);
            scale = scale.max(beta);
            next_v = Some(if beta > 1e-13 * scale && beta > 0.0 {
                z.iter().map(|x| x / beta).collect()
            } else {
                beta = 0.0;
                fresh_direction(n, &vs, &mut rng).expect("j + 1 < n leaves room")
            });
        }

        let at_limit = p >= max_steps;
        if p >= k && (complete || p >= next_check || at_limit) {
            // B_p columns: B[j][j] = alpha_j, B[j-1][j] = beta_{j-1}
            let cols: Vec<Vec<f64>> = (0..p)
                .map(|c| {
                    let mut col = vec![0.0; p];
                    col[c] = alphas[c];
                    if c > 0 {
                        col[c - 1] = betas[c - 1];
                    }
                    col
                })
                .collect();
            let (sigma, left, right) = jacobi_svd(cols);
            let residual = if complete {
                0.0
            } else {
                (0..k)
                    .map(|i| (beta * left[i][p - 1]).abs())
                    .fold(0.0, f64::max)
            };
            last_residual = residual;
            let threshold = opts.tol * sigma[0];
            if complete || residual <= threshold || sigma[0] == 0.0 {
                let u = (0..k).map(|i| combine(&us, &left[i], m)).collect();
                let v = (0..k).map(|i| combine(&vs[..p], &right[i], n)).collect();
                return Ok(Svd {
                    u,
                    s: sigma[..k].to_vec(),
                    v,
                    iterations: p,
                });
            }
            next_check = (p + (p / 2).max(4)).min(n);
        }
        if at_limit {
            return Err(CorpusError::NonConvergence {
                iterations: p,
                residual: last_residual,
            });
        }
        betas.push(beta);
        vs.push(next_v.expect("not complete"));
    }
}

fn combine(basis: &[Vec<f64>], coeffs: &[f64], dim: usize) -> Vec<f64> {
    let mut out = vec![0.0; dim];
    for (b, &c) in basis.iter().zip(coeffs) {
        axpy(c, b, &mut out);
    }
    out
}
