//! Lanczos iteration with full reorthogonalization for the lowest eigenpairs
//! of a Hermitian [`LinearOperator`].
//!
//! Each cycle builds a Krylov basis of at most `krylov_dim` vectors, keeping
//! every vector orthogonal to all previous ones (classical Gram-Schmidt,
//! applied twice). Convergence is judged on the true residual `‖Hx − θx‖` of
//! the Ritz vector, not on the Ritz value. When a cycle ends without meeting
//! the tolerance the solver restarts from the current Ritz vector.

mod tridiagonal;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::scalar::{self, Scalar};
use crate::xxz::LinearOperator;

pub use tridiagonal::{eigenvector as tridiagonal_eigenvector, kth_eigenvalue, sturm_count};

const PAR_THRESHOLD: usize = 1 << 13;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LanczosOptions {
    /// Bound on `‖Hx − Ex‖`.
    pub tol: f64,
    /// Total operator applications over all restart cycles.
    pub max_iter: usize,
    pub seed: u64,
    /// Largest Krylov basis kept in memory before restarting.
    pub krylov_dim: usize,
}

impl LanczosOptions {
    pub fn for_dim(dim: usize) -> Self {
        LanczosOptions {
            tol: 1e-12,
            max_iter: 2 * dim.clamp(1, 500),
            seed: 0,
            krylov_dim: 250,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }
}

#[derive(Clone, Debug)]
pub struct LanczosResult<S> {
    pub energy: f64,
    /// Unit norm.
    pub vector: Vec<S>,
    pub residual: f64,
    pub iterations: usize,
    /// Distance between the two lowest Ritz values of the final cycle.
    pub gap_estimate: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum LanczosError<S: Scalar> {
    #[error("operator has dimension zero")]
    EmptyOperator,
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("not converged: residual {:e} after {} iterations", .0.residual, .0.iterations)]
    NotConverged(Box<LanczosResult<S>>),
}

impl<S: Scalar> LanczosError<S> {
    /// The best iterate, when the failure was non-convergence.
    pub fn best(&self) -> Option<&LanczosResult<S>> {
        match self {
            LanczosError::NotConverged(r) => Some(r),
            _ => None,
        }
    }
}

/// Lowest eigenpair of `op`.
pub fn ground_state<S: Scalar>(
    op: &impl LinearOperator<S>,
    opts: &LanczosOptions,
) -> Result<LanczosResult<S>, LanczosError<S>> {
    solve(op, opts, &[])
}

/// Two lowest eigenpairs. The second is found by deflating the first, so the
/// vectors are orthogonal to working precision.
pub fn lowest_two<S: Scalar>(
    op: &impl LinearOperator<S>,
    opts: &LanczosOptions,
) -> Result<(LanczosResult<S>, LanczosResult<S>), LanczosError<S>> {
    let first = solve(op, opts, &[])?;
    let opts2 = opts.with_seed(opts.seed.wrapping_add(1));
    let second = solve(op, &opts2, &[first.vector.as_slice()])?;
    Ok((first, second))
}

/// Tridiagonal coefficients and basis of one Lanczos run without restarts.
#[derive(Clone, Debug)]
pub struct KrylovDecomposition<S> {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub basis: Vec<Vec<S>>,
}

impl<S: Scalar> KrylovDecomposition<S> {
    /// Lowest Ritz value using the first `steps` Lanczos steps.
    pub fn ritz_value(&self, steps: usize) -> f64 {
        let m = steps.min(self.alpha.len());
        kth_eigenvalue(&self.alpha[..m], &self.beta[..m.saturating_sub(1)], 0)
    }
}

/// Runs up to `steps` Lanczos steps from `start` and keeps everything.
pub fn krylov<S: Scalar>(
    op: &impl LinearOperator<S>,
    start: &[S],
    steps: usize,
) -> KrylovDecomposition<S> {
    let cycle = Cycle::run(op, start.to_vec(), steps, &[], |_, _, _| false);
    KrylovDecomposition {
        alpha: cycle.alpha,
        beta: cycle.beta,
        basis: cycle.basis,
    }
}

fn random_vector<S: Scalar>(dim: usize, seed: u64) -> Vec<S> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..dim).map(|_| S::random(&mut rng)).collect()
}

fn solve<S: Scalar>(
    op: &impl LinearOperator<S>,
    opts: &LanczosOptions,
    deflate: &[&[S]],
) -> Result<LanczosResult<S>, LanczosError<S>> {
    let dim = op.dim();
    if dim == 0 {
        return Err(LanczosError::EmptyOperator);
    }
    if !(opts.tol > 0.0) {
        return Err(LanczosError::InvalidTolerance(opts.tol));
    }
    let room = dim - deflate.len().min(dim);
    let krylov_dim = opts.krylov_dim.clamp(2, dim.max(2)).min(room.max(1));
    let mut start = random_vector::<S>(dim, opts.seed);
    let mut iterations = 0;
    let mut gap_refinements = 0;
    let mut best: Option<LanczosResult<S>> = None;

    while iterations < opts.max_iter {
        let budget = krylov_dim.min(opts.max_iter - iterations);
        let tol = opts.tol;
        let cycle = Cycle::run(op, start, budget, deflate, |alpha, beta, next_beta| {
            // Cheap estimate |β_m y_m| of the Ritz residual
            let theta = kth_eigenvalue(alpha, &beta[..alpha.len() - 1], 0);
            let y = tridiagonal::eigenvector(alpha, &beta[..alpha.len() - 1], theta);
            (next_beta * y[y.len() - 1]).abs() < 0.1 * tol
        });
        iterations += cycle.alpha.len();

        let (energy, vector, gap_estimate) = cycle.ritz();
        let residual = residual(op, &vector, energy);
        let candidate = LanczosResult {
            energy,
            vector,
            residual,
            iterations,
            gap_estimate,
        };
        let converged = residual <= opts.tol;
        if converged && (gap_estimate >= 10.0 * opts.tol || gap_refinements >= 2 || cycle.invariant)
        {
            return Ok(candidate);
        }
        if converged {
            gap_refinements += 1;
        }
        start = candidate.vector.clone();
        if cycle.invariant && !converged {
            // exhausted an invariant subspace without reaching the tolerance:
            // nothing more can be gained from this start vector
            best = Some(candidate);
            break;
        }
        best = Some(candidate);
    }
    let best = best.expect("at least one Lanczos cycle runs");
    if best.residual <= opts.tol {
        return Ok(best);
    }
    Err(LanczosError::NotConverged(Box::new(best)))
}

fn residual<S: Scalar>(op: &impl LinearOperator<S>, x: &[S], theta: f64) -> f64 {
    let mut hx = vec![S::zero(); x.len()];
    op.apply(x, &mut hx);
    scalar::axpy(S::from_real(-theta), x, &mut hx);
    scalar::norm(&hx)
}

struct Cycle<S> {
    alpha: Vec<f64>,
    beta: Vec<f64>,
    basis: Vec<Vec<S>>,
    /// The Krylov space closed on itself (β ≈ 0).
    invariant: bool,
}

impl<S: Scalar> Cycle<S> {
    /// Lanczos recurrence from `start`; `stop(alpha, beta, next_beta)` is
    /// consulted every few steps.
    fn run<F>(
        op: &impl LinearOperator<S>,
        mut start: Vec<S>,
        steps: usize,
        deflate: &[&[S]],
        stop: F,
    ) -> Self
    where
        F: Fn(&[f64], &[f64], f64) -> bool,
    {
        let dim = op.dim();
        project_out(deflate, &mut start);
        project_out(deflate, &mut start);
        if scalar::normalize(&mut start) == 0.0 {
            start = random_vector(dim, 0x5eed);
            project_out(deflate, &mut start);
            scalar::normalize(&mut start);
        }
        let mut basis: Vec<Vec<S>> = vec![start];
        let mut alpha = Vec::with_capacity(steps);
        let mut beta: Vec<f64> = Vec::with_capacity(steps);
        let mut w = vec![S::zero(); dim];
        let mut scale = 0.0f64;
        let mut invariant = false;

        for j in 0..steps {
            op.apply(&basis[j], &mut w);
            project_out(deflate, &mut w);
            let a = scalar::dot(&basis[j], &w).re();
            alpha.push(a);
            scalar::axpy(S::from_real(-a), &basis[j], &mut w);
            if j > 0 {
                scalar::axpy(S::from_real(-beta[j - 1]), &basis[j - 1], &mut w);
            }
            reorthogonalize(&basis, &mut w);
            reorthogonalize(&basis, &mut w);
            project_out(deflate, &mut w);
            let b = scalar::norm(&w);
            scale = scale.max(a.abs()).max(b);
            beta.push(b);

            if b <= 1e-13 * scale.max(f64::MIN_POSITIVE) || basis.len() == dim - deflate.len() {
                invariant = true;
                break;
            }
            if j + 1 == steps {
                break;
            }
            let check = j < 8 || (j + 1) % 5 == 0;
            if check && stop(&alpha, &beta, b) {
                break;
            }
            let inv = 1.0 / b;
            basis.push(w.iter().map(|x| x.scale(inv)).collect());
        }
        beta.truncate(alpha.len());
        Cycle {
            alpha,
            beta,
            basis,
            invariant,
        }
    }

    /// Lowest Ritz pair and the gap to the next Ritz value.
    fn ritz(&self) -> (f64, Vec<S>, f64) {
        let m = self.alpha.len();
        let off = &self.beta[..m - 1];
        let theta = kth_eigenvalue(&self.alpha, off, 0);
        let gap = if m > 1 {
            kth_eigenvalue(&self.alpha, off, 1) - theta
        } else {
            f64::INFINITY
        };
        let y = tridiagonal::eigenvector(&self.alpha, off, theta);
        let dim = self.basis[0].len();
        let mut x = vec![S::zero(); dim];
        for (yk, vk) in y.iter().zip(&self.basis) {
            scalar::axpy(S::from_real(*yk), vk, &mut x);
        }
        scalar::normalize(&mut x);
        (theta, x, gap)
    }
}

fn project_out<S: Scalar>(vectors: &[&[S]], w: &mut [S]) {
    for u in vectors {
        let c = scalar::dot(u, w);
        scalar::axpy(-c, u, w);
    }
}

/// One classical Gram-Schmidt pass of `w` against the orthonormal `basis`.
fn reorthogonalize<S: Scalar>(basis: &[Vec<S>], w: &mut [S]) {
    let dim = w.len();
    if dim < PAR_THRESHOLD {
        let coeffs: Vec<S> = basis.iter().map(|u| scalar::dot(u, w)).collect();
        for (c, u) in coeffs.iter().zip(basis) {
            scalar::axpy(-*c, u, w);
        }
        return;
    }
    let coeffs: Vec<S> = basis.par_iter().map(|u| scalar::dot(u, w)).collect();
    const CHUNK: usize = 4096;
    w.par_chunks_mut(CHUNK).enumerate().for_each(|(ci, chunk)| {
        let offset = ci * CHUNK;
        for (c, u) in coeffs.iter().zip(basis) {
            let uc = &u[offset..offset + chunk.len()];
            for (wi, &ui) in chunk.iter_mut().zip(uc) {
                *wi -= *c * ui;
            }
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xxz::FnOperator;

    fn diag_op(d: Vec<f64>) -> impl LinearOperator<f64> {
        FnOperator::new(d.len(), move |x: &[f64], y: &mut [f64]| {
            for i in 0..x.len() {
                y[i] = d[i] * x[i];
            }
        })
    }

    #[test]
    fn diagonal_operator() {
        let d: Vec<f64> = (0..50).map(|i| i as f64).collect();
        let op = diag_op(d);
        let r = ground_state(&op, &LanczosOptions::for_dim(50)).unwrap();
        assert!(r.energy.abs() < 1e-12);
        assert!((r.vector[0].abs() - 1.0).abs() < 1e-12);
        assert!(r.residual <= 1e-12);
        assert!((scalar::norm(&r.vector) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_by_two_flip() {
        let op = FnOperator::new(2, |x: &[f64], y: &mut [f64]| {
            y[0] = x[1];
            y[1] = x[0];
        });
        let r = ground_state(&op, &LanczosOptions::for_dim(2)).unwrap();
        assert!((r.energy + 1.0).abs() < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r.vector[0].abs() - s).abs() < 1e-12);
        assert!((r.vector[0] + r.vector[1]).abs() < 1e-12);
    }

    #[test]
    fn one_dimensional_operator() {
        let op = diag_op(vec![3.5]);
        let r = ground_state(&op, &LanczosOptions::for_dim(1)).unwrap();
        assert_eq!(r.energy, 3.5);
        assert_eq!(r.vector[0].abs(), 1.0);
    }

    #[test]
    fn rejects_empty_and_bad_tolerance() {
        let op = diag_op(vec![]);
        assert!(matches!(
            ground_state(&op, &LanczosOptions::for_dim(0)),
            Err(LanczosError::EmptyOperator)
        ));
        let op = diag_op(vec![1.0, 2.0]);
        let opts = LanczosOptions::for_dim(2).with_tol(0.0);
        assert!(matches!(
            ground_state(&op, &opts),
            Err(LanczosError::InvalidTolerance(_))
        ));
    }

    #[test]
    fn lowest_two_of_diagonal() {
        let mut d = vec![0.0, 0.5];
        d.extend((2..40).map(|i| i as f64));
        let op = diag_op(d);
        let (a, b) = lowest_two(&op, &LanczosOptions::for_dim(40)).unwrap();
        assert!(a.energy.abs() < 1e-12);
        assert!((b.energy - 0.5).abs() < 1e-12);
        assert!(scalar::dot(&a.vector, &b.vector).abs() < 1e-10);
    }

    #[test]
    fn non_convergence_carries_best_iterate() {
        let d: Vec<f64> = (0..400).map(|i| (i as f64).sqrt()).collect();
        let op = diag_op(d);
        let opts = LanczosOptions::for_dim(400).with_max_iter(3);
        let err = ground_state(&op, &opts).unwrap_err();
        let best = err.best().expect("best iterate");
        assert_eq!(best.iterations, 3);
        assert!(best.residual > 1e-12);
        assert_eq!(best.vector.len(), 400);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let d: Vec<f64> = (0..100).map(|i| ((i * 37 % 101) as f64).cos()).collect();
        let op = diag_op(d);
        let opts = LanczosOptions::for_dim(100).with_seed(9);
        let a = ground_state(&op, &opts).unwrap();
        let b = ground_state(&op, &opts).unwrap();
        assert_eq!(a.vector, b.vector);
        assert_eq!(a.energy.to_bits(), b.energy.to_bits());
    }

    #[test]
    fn ritz_values_decrease_with_steps() {
        let d: Vec<f64> = (0..200).map(|i| ((i * 13 % 97) as f64) * 0.1).collect();
        let op = diag_op(d);
        let start = random_vector::<f64>(200, 3);
        let k = krylov(&op, &start, 60);
        let mut last = f64::INFINITY;
        for m in 1..=k.alpha.len() {
            let e = k.ritz_value(m);
            assert!(e <= last + 1e-12);
            last = e;
        }
        for i in 0..k.basis.len() {
            for j in 0..i {
                assert!(scalar::dot(&k.basis[i], &k.basis[j]).abs() < 1e-10);
            }
        }
    }
}
