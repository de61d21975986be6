//! Primal-dual interior-point method for block-diagonal linear matrix
//! inequalities
//!
//! ```text
//! minimize   c . y
//! subject to Z_b = sum_k y_k F_{k,b} - F_{0,b}  PSD  for every block b
//! ```
//!
//! paired with the dual `maximize <F_0, X>` over `X PSD`, `<F_k, X> = c_k`.
//! Search directions are HKM with a Mehrotra predictor-corrector; the Schur
//! system is factored with a dense Cholesky.

use faer::linalg::solvers::Solve;
use faer::{Mat, Side};
use nalgebra::DMatrix;

/// One nonzero entry `(row, col, value)` of a symmetric block matrix; both
/// triangles are listed explicitly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Entry {
    pub r: usize,
    pub c: usize,
    pub v: f64,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Lmi {
    pub block_dims: Vec<usize>,
    pub c: Vec<f64>,
    /// Constant term per block.
    pub f0: Vec<Vec<Entry>>,
    /// Per variable: `(block, entries)` pairs, blocks ascending.
    pub f: Vec<Vec<(usize, Vec<Entry>)>>,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Options {
    pub max_iter: usize,
    pub gap_tol: f64,
    pub feas_tol: f64,
    pub step: f64,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            max_iter: 200,
            gap_tol: 1e-10,
            feas_tol: 1e-10,
            step: 0.95,
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct LmiSolution {
    pub y: Vec<f64>,
    pub primal_obj: f64,
    pub dual_obj: f64,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    pub iterations: usize,
    pub converged: bool,
    pub message: String,
}

type Block = DMatrix<f64>;

impl Lmi {
    fn assemble(&self, y: &[f64]) -> Vec<Block> {
        let mut z: Vec<Block> = self.block_dims.iter().map(|&n| Block::zeros(n, n)).collect();
        for (b, entries) in self.f0.iter().enumerate() {
            for e in entries {
                z[b][(e.r, e.c)] -= e.v;
            }
        }
        for (k, parts) in self.f.iter().enumerate() {
            if y[k] == 0.0 {
                continue;
            }
            for (b, entries) in parts {
                for e in entries {
                    z[*b][(e.r, e.c)] += y[k] * e.v;
                }
            }
        }
        z
    }

    /// `<F_k, W>` for every variable, with `W` given per block.
    fn pair(&self, w: &[Block]) -> Vec<f64> {
        self.f
            .iter()
            .map(|parts| {
                parts
                    .iter()
                    .map(|(b, entries)| entries.iter().map(|e| e.v * w[*b][(e.c, e.r)]).sum::<f64>())
                    .sum()
            })
            .collect()
    }

    fn apply(&self, dy: &[f64]) -> Vec<Block> {
        let mut out: Vec<Block> = self.block_dims.iter().map(|&n| Block::zeros(n, n)).collect();
        for (k, parts) in self.f.iter().enumerate() {
            for (b, entries) in parts {
                for e in entries {
                    out[*b][(e.r, e.c)] += dy[k] * e.v;
                }
            }
        }
        out
    }

    /// `M_kl = sum_b tr(F_kb X_b F_lb Z_b^{-1})`.
    fn schur(&self, x: &[Block], zinv: &[Block]) -> Mat<f64> {
        let m = self.f.len();
        let mut by_block: Vec<Vec<(usize, &[Entry])>> = vec![Vec::new(); self.block_dims.len()];
        for (k, parts) in self.f.iter().enumerate() {
            for (b, entries) in parts {
                by_block[*b].push((k, entries.as_slice()));
            }
        }
        let mut mat = Mat::<f64>::zeros(m, m);
        for (b, members) in by_block.iter().enumerate() {
            let (xb, zb) = (&x[b], &zinv[b]);
            for (pos, &(k, fk)) in members.iter().enumerate() {
                for &(l, fl) in &members[pos..] {
                    let mut acc = 0.0;
                    for ek in fk {
                        for el in fl {
                            acc += ek.v * el.v * zb[(el.c, ek.r)] * xb[(ek.c, el.r)];
                        }
                    }
                    mat[(k, l)] += acc;
                    if k != l {
                        mat[(l, k)] += acc;
                    }
                }
            }
        }
        mat
    }
}

fn symmetrize(a: &Block) -> Block {
    (a + a.transpose()) * 0.5
}

fn inner(a: &[Block], b: &[Block]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p.component_mul(q).sum()).sum()
}

/// Largest `alpha` with `x + alpha dx` PSD (infinite when `dx` is PSD in the `x` metric).
fn max_step(x: &Block, dx: &Block) -> Option<f64> {
    let chol = x.clone().cholesky()?;
    let l = chol.l();
    let left = l.solve_lower_triangular(dx)?;
    let s = l.solve_lower_triangular(&left.transpose())?;
    let lam = symmetrize(&s).symmetric_eigenvalues().min();
    Some(if lam >= 0.0 { f64::INFINITY } else { -1.0 / lam })
}

fn inverse_psd(z: &Block) -> Option<Block> {
    let chol = z.clone().cholesky()?;
    Some(symmetrize(&chol.inverse()))
}

fn max_abs(blocks: &[Block]) -> f64 {
    blocks.iter().map(|b| b.amax()).fold(0.0, f64::max)
}

struct Direction {
    dy: Vec<f64>,
    dx: Vec<Block>,
    dz: Vec<Block>,
}

struct Newton<'a> {
    lmi: &'a Lmi,
    x: &'a [Block],
    zinv: &'a [Block],
    rd: &'a [Block],
    rp: &'a [f64],
    schur: Mat<f64>,
    chol: faer::linalg::solvers::Llt<f64>,
}

impl Newton<'_> {
    fn direction(&self, rc: &[Block]) -> Direction {
        let w: Vec<Block> = rc
            .iter()
            .zip(self.x)
            .zip(self.rd)
            .zip(self.zinv)
            .map(|(((rc, x), rd), zi)| (rc - x * rd) * zi)
            .collect();
        let paired = self.lmi.pair(&w);
        let m = paired.len();
        let rhs = Mat::<f64>::from_fn(m, 1, |k, _| paired[k] - self.rp[k]);
        let mut sol = self.chol.solve(&rhs);
        for _ in 0..2 {
            let residual = &rhs - &self.schur * &sol;
            sol += self.chol.solve(&residual);
        }
        let dy: Vec<f64> = (0..m).map(|k| sol[(k, 0)]).collect();
        let mut dz = self.lmi.apply(&dy);
        for (d, r) in dz.iter_mut().zip(self.rd) {
            *d += r;
        }
        let dx = rc
            .iter()
            .zip(self.x)
            .zip(&dz)
            .zip(self.zinv)
            .map(|(((rc, x), dz), zi)| symmetrize(&((rc - x * dz) * zi)))
            .collect();
        Direction { dy, dx, dz }
    }
}

fn step_lengths(x: &[Block], z: &[Block], dir: &Direction, gamma: f64) -> Option<(f64, f64)> {
    let mut ap = f64::INFINITY;
    let mut ad = f64::INFINITY;
    for b in 0..x.len() {
        ap = ap.min(max_step(&x[b], &dir.dx[b])?);
        ad = ad.min(max_step(&z[b], &dir.dz[b])?);
    }
    Some(((gamma * ap).min(1.0), (gamma * ad).min(1.0)))
}

fn factor(m: &Mat<f64>) -> Option<faer::linalg::solvers::Llt<f64>> {
    let mut m = m.clone();
    if let Ok(llt) = m.llt(Side::Lower) {
        return Some(llt);
    }
    let n = m.nrows();
    let scale = (0..n).map(|i| m[(i, i)].abs()).fold(0.0, f64::max).max(1.0);
    for shift in [1e-14, 1e-12, 1e-10] {
        for i in 0..n {
            m[(i, i)] += shift * scale;
        }
        if let Ok(llt) = m.llt(Side::Lower) {
            return Some(llt);
        }
    }
    None
}

/// Runs the interior-point iteration from a strictly feasible `y0`.
pub(crate) fn solve(lmi: &Lmi, y0: &[f64], opts: Options) -> LmiSolution {
    let n_total: usize = lmi.block_dims.iter().sum();
    let c_norm = lmi.c.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let f0_norm = lmi.f0.iter().flatten().fold(0.0f64, |a, e| a.max(e.v.abs()));
    let mut y = y0.to_vec();
    let mut z = lmi.assemble(&y);
    let x_scale = 1.0f64.max(c_norm).max(f0_norm);
    let mut x: Vec<Block> = lmi
        .block_dims
        .iter()
        .map(|&n| Block::identity(n, n) * x_scale)
        .collect();

    let mut out = LmiSolution {
        y: y.clone(),
        primal_obj: f64::NAN,
        dual_obj: f64::NAN,
        primal_infeasibility: f64::NAN,
        dual_infeasibility: f64::NAN,
        iterations: 0,
        converged: false,
        message: String::new(),
    };
    let mut stalled = 0;
    let mut best: Option<(f64, LmiSolution)> = None;
    let mut gamma = opts.step;
    for it in 0..=opts.max_iter {
        let primal_obj: f64 = lmi.c.iter().zip(&y).map(|(c, y)| c * y).sum();
        let f0_blocks: Vec<Block> = {
            let mut f = lmi.block_dims.iter().map(|&n| Block::zeros(n, n)).collect::<Vec<_>>();
            for (b, entries) in lmi.f0.iter().enumerate() {
                for e in entries {
                    f[b][(e.r, e.c)] += e.v;
                }
            }
            f
        };
        let dual_obj = inner(&f0_blocks, &x);
        let assembled = lmi.assemble(&y);
        let rd: Vec<Block> = assembled.iter().zip(&z).map(|(a, z)| a - z).collect();
        let fx = lmi.pair(&x);
        let rp: Vec<f64> = lmi.c.iter().zip(&fx).map(|(c, f)| c - f).collect();
        let pinf = max_abs(&rd);
        let dinf = rp.iter().fold(0.0f64, |a, v| a.max(v.abs())) / (1.0 + c_norm);
        let gap = primal_obj - dual_obj;
        out.y = y.clone();
        out.primal_obj = primal_obj;
        out.dual_obj = dual_obj;
        out.primal_infeasibility = pinf;
        out.dual_infeasibility = dinf;
        out.iterations = it;
        let scale = 1.0 + primal_obj.abs().max(dual_obj.abs());
        if gap.abs() <= opts.gap_tol * scale && pinf <= opts.feas_tol && dinf <= opts.feas_tol {
            out.converged = true;
            out.message = "converged".into();
            return out;
        }
        let merit = (gap.abs() / scale).max(pinf).max(dinf);
        if best.as_ref().is_none_or(|(m, _)| merit < *m) {
            best = Some((merit, out.clone()));
        }
        if it == opts.max_iter {
            return stop(best, "iteration limit reached");
        }
        let mu = inner(&x, &z) / n_total as f64;
        let zinv: Vec<Block> = match z.iter().map(inverse_psd).collect::<Option<Vec<_>>>() {
            Some(v) => v,
            None => return stop(best, "slack lost positive definiteness"),
        };
        let schur = lmi.schur(&x, &zinv);
        let chol = match factor(&schur) {
            Some(c) => c,
            None => return stop(best, "Schur complement is singular"),
        };
        let newton = Newton {
            lmi,
            x: &x,
            zinv: &zinv,
            rd: &rd,
            rp: &rp,
            schur,
            chol,
        };
        let xz: Vec<Block> = x.iter().zip(&z).map(|(x, z)| x * z).collect();
        let rc_aff: Vec<Block> = xz.iter().map(|p| -p).collect();
        let aff = newton.direction(&rc_aff);
        let Some((ap, ad)) = step_lengths(&x, &z, &aff, 1.0) else {
            return stop(best, "iterate lost positive definiteness");
        };
        let x_aff: Vec<Block> = x.iter().zip(&aff.dx).map(|(x, d)| x + d * ap).collect();
        let z_aff: Vec<Block> = z.iter().zip(&aff.dz).map(|(z, d)| z + d * ad).collect();
        let mu_aff = inner(&x_aff, &z_aff) / n_total as f64;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);
        let rc: Vec<Block> = xz
            .iter()
            .zip(&aff.dx)
            .zip(&aff.dz)
            .map(|((p, dx), dz)| {
                let n = p.nrows();
                Block::identity(n, n) * (sigma * mu) - p - dx * dz
            })
            .collect();
        let dir = newton.direction(&rc);
        let Some((ap, ad)) = step_lengths(&x, &z, &dir, gamma) else {
            return stop(best, "iterate lost positive definiteness");
        };
        gamma = (opts.step + 0.04 * ap.min(ad)).min(0.99);
        for b in 0..x.len() {
            x[b] += &dir.dx[b] * ap;
            z[b] += &dir.dz[b] * ad;
        }
        for (yk, d) in y.iter_mut().zip(&dir.dy) {
            *yk += ad * d;
        }
        if ap < 1e-10 && ad < 1e-10 {
            stalled += 1;
            if stalled >= 3 {
                return stop(best, "step lengths collapsed");
            }
        } else {
            stalled = 0;
        }
    }
    stop(best, "iteration limit reached")
}

fn stop(best: Option<(f64, LmiSolution)>, message: &str) -> LmiSolution {
    let (_, mut sol) = best.expect("at least one iterate is recorded");
    sol.message = message.into();
    sol
}
