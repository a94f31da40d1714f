use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{MinFactors, Mode, NormEstimate, WitnessConfig};
use crate::error::{Error, Result};
use crate::linalg::{
    kron, polar_unitary, random_unit_vector, random_unitary, top_eigenpair, CMatrix, CVector, C64,
    ZERO,
};
use crate::model::{quad_coeffs, quad_form, represent, SpanElement, Triplet};

const MAX_HALVINGS: usize = 20;
const MAX_STEP: f64 = 1e6;
const EIGEN_TOL: f64 = 1e-12;
const EIGEN_SWEEPS: usize = 100;

/// Best witness over `cfg.restarts` alternating-maximization runs. Restart `r`
/// draws from `ChaCha8Rng` seeded with `cfg.seed ^ r`; ties go to the lower
/// restart index.
pub fn estimate_lower_bound(x: &SpanElement, cfg: &WitnessConfig) -> Result<NormEstimate> {
    cfg.validate()?;
    let runs = run_all(x, cfg)?;
    let restart_values: Vec<f64> = runs.iter().map(|r| r.value).collect();
    let (winning_restart, best) = runs
        .into_iter()
        .enumerate()
        .reduce(|best, cur| {
            if cur.1.value > best.1.value {
                cur
            } else {
                best
            }
        })
        .expect("at least one restart");

    let witness = Triplet::new(x.n(), best.unitaries, best.xi)?;
    let value_sq = quad_form(&quad_coeffs(x), &witness)?;
    let factors = match cfg.mode {
        Mode::Full => None,
        Mode::Min => Some(MinFactors {
            alpha: best.alpha,
            beta: best.beta,
        }),
    };
    Ok(NormEstimate {
        mode: cfg.mode,
        value_sq,
        witness,
        factors,
        history: best.history,
        restart_values,
        winning_restart,
    })
}

/// Iteration histories of every restart, in restart order.
pub fn restart_histories(x: &SpanElement, cfg: &WitnessConfig) -> Result<Vec<Vec<f64>>> {
    cfg.validate()?;
    Ok(run_all(x, cfg)?.into_iter().map(|r| r.history).collect())
}

/// `‖X ξ‖²` with `X` built by [`represent`] and `ξ` the stacked witness vector.
pub fn replay_value(x: &SpanElement, t: &Triplet) -> Result<f64> {
    let op = represent(x, t)?;
    Ok(op.matvec(&t.stacked()).norm_sqr())
}

fn run_all(x: &SpanElement, cfg: &WitnessConfig) -> Result<Vec<Run>> {
    (0..cfg.restarts)
        .into_par_iter()
        .map(|r| Run::execute(x, cfg, r))
        .collect()
}

struct Run {
    value: f64,
    unitaries: Vec<CMatrix>,
    alpha: Vec<CMatrix>,
    beta: Vec<CMatrix>,
    xi: Vec<CVector>,
    history: Vec<f64>,
}

impl Run {
    fn execute(x: &SpanElement, cfg: &WitnessConfig, restart: usize) -> Result<Run> {
        let n = x.n();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ restart as u64);
        let d = cfg.rep_dim;
        let dim = cfg.witness_dim();

        let (alpha, beta, unitaries) = match cfg.mode {
            Mode::Full => {
                let u = (0..2 * n).map(|_| random_unitary(d, &mut rng)).collect();
                (Vec::new(), Vec::new(), u)
            }
            Mode::Min => {
                let alpha: Vec<CMatrix> = (0..n).map(|_| random_unitary(d, &mut rng)).collect();
                let beta: Vec<CMatrix> = (0..n).map(|_| random_unitary(d, &mut rng)).collect();
                let id = CMatrix::identity(d);
                let mut u = Vec::with_capacity(2 * n);
                for a in &alpha {
                    u.push(kron(a, &id)?);
                }
                for b in &beta {
                    u.push(kron(&id, b)?);
                }
                (alpha, beta, u)
            }
        };
        let xi = split(&random_unit_vector(dim * x.k(), &mut rng), x.k());
        let value = objective(x, &unitaries, &xi);
        let mut run = Run {
            value,
            unitaries,
            alpha,
            beta,
            xi,
            history: Vec::with_capacity(cfg.iters),
        };

        let mut steps = vec![1.0; 2 * n];
        for _ in 0..cfg.iters {
            let before = run.value;
            run.eigen_step(x)?;
            for l in 1..=2 * n {
                run.unitary_step(x, cfg.mode, d, l, &mut steps[l - 1])?;
            }
            run.history.push(run.value);
            if run.value - before <= cfg.tol * run.value.abs() {
                break;
            }
        }
        Ok(run)
    }

    /// `ξ ←` top eigenvector of `X*X`, kept only if it does not lose value.
    fn eigen_step(&mut self, x: &SpanElement) -> Result<()> {
        let op = operator(x, &self.unitaries, self.xi[0].dim());
        let gram = &op.adjoint() * &op;
        let vector = match top_eigenpair(&gram, EIGEN_TOL, EIGEN_SWEEPS) {
            Ok((_, v)) => v,
            Err(Error::Convergence { vector, .. }) => vector,
            Err(e) => return Err(e),
        };
        let xi = split(&vector, x.k());
        let value = objective(x, &self.unitaries, &xi);
        if value >= self.value {
            self.xi = xi;
            self.value = value;
        }
        Ok(())
    }

    /// One retracted ascent step on generator `l`. The objective is convex in
    /// each unitary, so `polar(U + tG)` never decreases it in exact arithmetic;
    /// the acceptance test only guards rounding.
    fn unitary_step(
        &mut self,
        x: &SpanElement,
        mode: Mode,
        d: usize,
        l: usize,
        step: &mut f64,
    ) -> Result<()> {
        let n = x.n();
        let grad = gradient(x, &self.unitaries, &self.xi, l);
        let (base, grad) = match mode {
            Mode::Full => (self.unitaries[l - 1].clone(), grad),
            Mode::Min if l <= n => (self.alpha[l - 1].clone(), partial_trace_second(&grad, d)),
            Mode::Min => (self.beta[l - n - 1].clone(), partial_trace_first(&grad, d)),
        };
        let norm = grad.frobenius_norm();
        if norm == 0.0 || !norm.is_finite() {
            return Ok(());
        }
        let mut t = *step;
        for _ in 0..=MAX_HALVINGS {
            let moved = &base + &grad.scale(C64::new(t / norm, 0.0));
            if let Ok(factor) = polar_unitary(&moved) {
                let full = match mode {
                    Mode::Full => factor.clone(),
                    Mode::Min if l <= n => kron(&factor, &CMatrix::identity(d))?,
                    Mode::Min => kron(&CMatrix::identity(d), &factor)?,
                };
                let mut unitaries = self.unitaries.clone();
                unitaries[l - 1] = full;
                let value = objective(x, &unitaries, &self.xi);
                if value >= self.value {
                    self.unitaries = unitaries;
                    self.value = value;
                    match mode {
                        Mode::Full => {}
                        Mode::Min if l <= n => self.alpha[l - 1] = factor,
                        Mode::Min => self.beta[l - n - 1] = factor,
                    }
                    *step = (2.0 * t).min(MAX_STEP);
                    return Ok(());
                }
            }
            t *= 0.5;
        }
        *step = 1.0;
        Ok(())
    }
}

fn split(v: &CVector, k: usize) -> Vec<CVector> {
    let dim = v.dim() / k;
    v.as_slice()
        .chunks(dim)
        .map(|c| CVector::from(c.to_vec()))
        .collect()
}

/// Block operator with block `(r, s) = Σ_i λ^i_{r,s} U_i`.
fn operator(x: &SpanElement, unitaries: &[CMatrix], dim: usize) -> CMatrix {
    let k = x.k();
    let mut out = CMatrix::zeros(dim * k, dim * k);
    for r in 0..k {
        for s in 0..k {
            let mut block = CMatrix::zeros(dim, dim);
            for d in 0..dim {
                block[(d, d)] = x.coeff(0, r, s);
            }
            for (i, u) in unitaries.iter().enumerate() {
                let c = x.coeff(i + 1, r, s);
                if c != ZERO {
                    block = &block + &u.scale(c);
                }
            }
            out.set_block(r * dim, s * dim, &block);
        }
    }
    out
}

/// Blocks `y_r = Σ_{i,s} λ^i_{r,s} U_i ξ_s` of `X ξ`.
fn image(x: &SpanElement, unitaries: &[CMatrix], xi: &[CVector]) -> Vec<CVector> {
    let k = x.k();
    let dim = xi[0].dim();
    let orbit: Vec<Vec<CVector>> = std::iter::once(xi.to_vec())
        .chain(
            unitaries
                .iter()
                .map(|u| xi.iter().map(|v| u.matvec(v)).collect()),
        )
        .collect();
    (0..k)
        .map(|r| {
            let mut y = vec![ZERO; dim];
            for (i, row) in orbit.iter().enumerate() {
                for (s, v) in row.iter().enumerate() {
                    let c = x.coeff(i, r, s);
                    if c == ZERO {
                        continue;
                    }
                    for (acc, z) in y.iter_mut().zip(v.as_slice()) {
                        *acc += c * z;
                    }
                }
            }
            CVector::from(y)
        })
        .collect()
}

fn objective(x: &SpanElement, unitaries: &[CMatrix], xi: &[CVector]) -> f64 {
    image(x, unitaries, xi).iter().map(CVector::norm_sqr).sum()
}

/// `∂f/∂conj(U_l) = Σ_r y_r v_r*` with `v_r = Σ_s λ^l_{r,s} ξ_s`.
fn gradient(x: &SpanElement, unitaries: &[CMatrix], xi: &[CVector], l: usize) -> CMatrix {
    let k = x.k();
    let dim = xi[0].dim();
    let y = image(x, unitaries, xi);
    let mut g = CMatrix::zeros(dim, dim);
    for (r, yr) in y.iter().enumerate() {
        let mut v = vec![ZERO; dim];
        for (s, xs) in xi.iter().enumerate().take(k) {
            let c = x.coeff(l, r, s);
            if c == ZERO {
                continue;
            }
            for (acc, z) in v.iter_mut().zip(xs.as_slice()) {
                *acc += c * z;
            }
        }
        for p in 0..dim {
            for q in 0..dim {
                g[(p, q)] += yr[p] * v[q].conj();
            }
        }
    }
    g
}

/// `Tr_2` on `C^d ⊗ C^d`: the gradient with respect to `α` in `α ⊗ Id`.
fn partial_trace_second(g: &CMatrix, d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |p, q| (0..d).map(|r| g[(p * d + r, q * d + r)]).sum())
}

/// `Tr_1` on `C^d ⊗ C^d`: the gradient with respect to `β` in `Id ⊗ β`.
fn partial_trace_first(g: &CMatrix, d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |p, q| (0..d).map(|r| g[(r * d + p, r * d + q)]).sum())
}
