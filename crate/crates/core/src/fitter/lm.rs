//! Box-constrained Levenberg-Marquardt with a central-difference Jacobian.
//!
//! Parameters sitting on a bound whose gradient points outward are frozen for
//! the step (active set); every trial point is projected back into the box.
//! Damping is Marquardt's diagonal scaling, so multiplying all weights by a
//! constant leaves the iterates unchanged.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub(crate) struct LmOptions {
    pub max_iterations: usize,
    pub param_tol: f64,
    pub cost_tol: f64,
    pub fd_step: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct LmOutcome {
    pub x: Vec<f64>,
    pub residuals: Vec<f64>,
    pub cost: f64,
    pub initial_cost: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Unweighted Jacobian at `x`.
    pub jacobian: DMatrix<f64>,
    pub at_bound: Vec<bool>,
}

pub(crate) struct Problem<'a, F> {
    pub residuals: F,
    pub lower: &'a [f64],
    pub upper: &'a [f64],
    pub weights: &'a [f64],
}

impl<F> Problem<'_, F>
where
    F: Fn(&[f64]) -> Result<Vec<f64>> + Sync,
{
    fn project(&self, x: &mut [f64]) {
        for ((xi, lo), hi) in x.iter_mut().zip(self.lower).zip(self.upper) {
            *xi = xi.clamp(*lo, *hi);
        }
    }

    fn cost(&self, r: &[f64]) -> f64 {
        r.iter().zip(self.weights).map(|(ri, wi)| wi * ri * ri).sum()
    }

    pub fn jacobian(&self, x: &[f64], h_rel: f64) -> Result<DMatrix<f64>> {
        let columns: Vec<Vec<f64>> = (0..x.len())
            .into_par_iter()
            .map(|j| {
                let h = h_rel * x[j].abs().max(1.0);
                let mut plus = x.to_vec();
                let mut minus = x.to_vec();
                let up = x[j] + h <= self.upper[j];
                let down = x[j] - h >= self.lower[j];
                let span = match (up, down) {
                    (true, true) => {
                        plus[j] += h;
                        minus[j] -= h;
                        2.0 * h
                    }
                    (true, false) => {
                        plus[j] += h;
                        h
                    }
                    (false, true) => {
                        minus[j] -= h;
                        h
                    }
                    (false, false) => {
                        return Err(Error::domain("parameter box narrower than the difference step"))
                    }
                };
                let rp = (self.residuals)(&plus)?;
                let rm = (self.residuals)(&minus)?;
                Ok(rp.iter().zip(&rm).map(|(a, b)| (a - b) / span).collect())
            })
            .collect::<Result<_>>()?;
        let m = columns.first().map_or(0, Vec::len);
        Ok(DMatrix::from_fn(m, x.len(), |i, j| columns[j][i]))
    }

    pub fn minimize(&self, x0: &[f64], opts: LmOptions) -> Result<LmOutcome> {
        let n = x0.len();
        let mut x = x0.to_vec();
        self.project(&mut x);
        let mut r = (self.residuals)(&x)?;
        let mut cost = self.cost(&r);
        let initial_cost = cost;
        let w = DVector::from_column_slice(self.weights);
        let mut lambda: Option<f64> = None;
        let mut converged = false;
        let mut iterations = 0;

        'outer: while iterations < opts.max_iterations {
            iterations += 1;
            let jac = self.jacobian(&x, opts.fd_step)?;
            let jw = DMatrix::from_fn(jac.nrows(), n, |i, j| jac[(i, j)] * w[i]);
            let hess = jac.transpose() * &jw;
            let grad = jw.transpose() * DVector::from_column_slice(&r);

            let free: Vec<usize> = (0..n)
                .filter(|&i| {
                    let pinned_low = x[i] <= self.lower[i] && grad[i] > 0.0;
                    let pinned_high = x[i] >= self.upper[i] && grad[i] < 0.0;
                    !(pinned_low || pinned_high)
                })
                .collect();
            if free.is_empty() {
                converged = true;
                break;
            }
            let diag_max = free.iter().map(|&i| hess[(i, i)]).fold(0.0, f64::max);
            if diag_max <= 0.0 {
                return Err(Error::Identifiability(
                    "residuals do not depend on any free parameter".into(),
                ));
            }
            let lam = lambda.get_or_insert(1e-3);

            loop {
                let k = free.len();
                let mut a = DMatrix::from_fn(k, k, |p, q| hess[(free[p], free[q])]);
                for p in 0..k {
                    let d = hess[(free[p], free[p])].max(1e-12 * diag_max);
                    a[(p, p)] += *lam * d;
                }
                let b = DVector::from_fn(k, |p, _| -grad[free[p]]);
                let delta = match a.clone().cholesky() {
                    Some(ch) => ch.solve(&b),
                    None => match a.lu().solve(&b) {
                        Some(d) => d,
                        None => {
                            *lam *= 4.0;
                            if *lam > 1e20 {
                                break 'outer;
                            }
                            continue;
                        }
                    },
                };
                let mut trial = x.clone();
                for (p, &i) in free.iter().enumerate() {
                    trial[i] += delta[p];
                }
                self.project(&mut trial);
                let step_norm = trial
                    .iter()
                    .zip(&x)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                let x_norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                let rel_step = step_norm / (x_norm + 1e-12);
                let r_trial = (self.residuals)(&trial)?;
                let cost_trial = self.cost(&r_trial);

                if cost_trial < cost {
                    let rel_cost = (cost - cost_trial) / cost;
                    x = trial;
                    r = r_trial;
                    cost = cost_trial;
                    *lam = (*lam / 3.0).max(1e-15);
                    if (rel_step < opts.param_tol && rel_cost < opts.cost_tol)
                        || cost <= f64::EPSILON * f64::EPSILON * initial_cost
                    {
                        converged = true;
                        break 'outer;
                    }
                    break;
                }
                // no decrease: either we sit on the noise floor of the
                // model or the step was too bold
                if rel_step < opts.param_tol {
                    converged = true;
                    break 'outer;
                }
                *lam *= 4.0;
                if *lam > 1e20 {
                    break 'outer;
                }
            }
        }

        let jacobian = self.jacobian(&x, opts.fd_step)?;
        let at_bound = (0..n)
            .map(|i| x[i] <= self.lower[i] || x[i] >= self.upper[i])
            .collect();
        Ok(LmOutcome {
            x,
            residuals: r,
            cost,
            initial_cost,
            iterations,
            converged,
            jacobian,
            at_bound,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> LmOptions {
        LmOptions {
            max_iterations: 500,
            param_tol: 1e-10,
            cost_tol: 1e-12,
            fd_step: 1e-7,
        }
    }

    #[test]
    fn fits_an_exponential() {
        let t: Vec<f64> = (0..20).map(|i| f64::from(i) * 0.2).collect();
        let data: Vec<f64> = t.iter().map(|&t| 2.5 * (-1.3 * t).exp() + 0.4).collect();
        let problem = Problem {
            residuals: |p: &[f64]| -> Result<Vec<f64>> {
                Ok(t.iter()
                    .zip(&data)
                    .map(|(&t, &y)| y - (p[0] * (-p[1] * t).exp() + p[2]))
                    .collect())
            },
            lower: &[f64::NEG_INFINITY; 3],
            upper: &[f64::INFINITY; 3],
            weights: &[1.0; 20],
        };
        let out = problem.minimize(&[1.0, 0.5, 0.0], opts()).unwrap();
        assert!(out.converged);
        for (got, want) in out.x.iter().zip([2.5, 1.3, 0.4]) {
            assert!((got - want).abs() < 1e-7, "{got} vs {want}");
        }
    }

    #[test]
    fn respects_an_active_bound() {
        // unconstrained minimum at x = 3, box caps it at 1
        let problem = Problem {
            residuals: |p: &[f64]| -> Result<Vec<f64>> { Ok(vec![p[0] - 3.0, p[1] - 0.5]) },
            lower: &[0.0, 0.0],
            upper: &[1.0, 1.0],
            weights: &[1.0, 1.0],
        };
        let out = problem.minimize(&[0.2, 0.2], opts()).unwrap();
        assert!(out.converged);
        assert_eq!(out.x[0], 1.0);
        assert!((out.x[1] - 0.5).abs() < 1e-9);
        assert_eq!(out.at_bound, vec![true, false]);
    }
}
