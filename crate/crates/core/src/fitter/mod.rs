//! Joint least-squares fit of shared dispersion coefficients and
//! per-isotopologue dissociation offsets to observed level energies.
//!
//! Every line contributes `E_obs - E(v_d + |dv|)`, where `E(count)` is the
//! near-dissociation level energy of the isotopologue's reduced mass. `C6`
//! and `C8` are shared; only `v_d` differs between isotopologues, so the
//! second isotopologue constrains the tail purely through the mass scaling.

mod lm;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataio::{IsotopologueSpec, LineRecord};
use crate::error::{Error, Result};
use crate::nde::NdeModel;
use crate::potential::PotentialParams;
use crate::units::{cm1_to_hartree, hartree_to_cm1};

use lm::{LmOptions, Problem};

/// Upper edge of the `v_d` box; the interval is half-open.
pub const V_D_MAX: f64 = 1.0 - 1e-9;

/// Condition numbers above this are reported as an identifiability warning.
pub const CONDITION_WARNING: f64 = 1e8;

/// `(3/2) I6 / pi`, with `I6 = Gamma(2/3) Gamma(1/2) / (6 Gamma(7/6))`:
/// the pure-C6 law reads `count^3 = (K^3 sqrt(C6)) (2 mu)^(3/2) |E|`.
const PURE_C6_SLOPE_ROOT: f64 = 0.646_777_389_807_447_6 / std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservedLine {
    pub isotopologue: String,
    pub dv: i32,
    pub energy_cm1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialGuess {
    pub params: PotentialParams,
    pub v_d: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub max_iterations: usize,
    /// Relative parameter change below which a step counts as converged.
    pub param_tol: f64,
    /// Relative cost change below which a step counts as converged.
    pub cost_tol: f64,
    /// Relative central-difference step.
    pub fd_step: f64,
    /// `C8` is optimised as `ln(1 + C8 / c8_scale)`.
    pub c8_scale: f64,
    pub quad_abs_tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            param_tol: 1e-8,
            cost_tol: 1e-10,
            fd_step: 1e-6,
            c8_scale: 1e5,
            quad_abs_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitProblem {
    pub lines: Vec<ObservedLine>,
    pub isotopologues: Vec<IsotopologueSpec>,
    pub initial: Option<InitialGuess>,
    /// Per-line weights; uniform when `None`.
    pub weights: Option<Vec<f64>>,
    /// Hold `C8` at this value instead of fitting it.
    pub fixed_c8: Option<f64>,
    pub options: FitOptions,
}

impl FitProblem {
    pub fn new(lines: Vec<ObservedLine>, isotopologues: Vec<IsotopologueSpec>) -> Self {
        Self {
            lines,
            isotopologues,
            initial: None,
            weights: None,
            fixed_c8: None,
            options: FitOptions::default(),
        }
    }

    /// Observed, assigned F'=2 lines with a position. Placeholders and F'=1
    /// rows are skipped.
    pub fn from_records(records: &[LineRecord], isotopologues: &[IsotopologueSpec]) -> Self {
        let lines = records
            .iter()
            .filter(|r| r.observed && r.f_prime == 2)
            .filter_map(|r| {
                Some(ObservedLine {
                    isotopologue: r.isotopologue.clone(),
                    dv: r.dv?,
                    energy_cm1: r.delta_pa?,
                })
            })
            .collect();
        Self::new(lines, isotopologues.to_vec())
    }

    /// Ids of the isotopologues that actually have lines, sorted.
    pub fn fitted_isotopologues(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.lines.iter().map(|l| l.isotopologue.clone()).collect();
        ids.sort();
        ids.dedup();
        ids
    }

    fn spec(&self, id: &str) -> Result<&IsotopologueSpec> {
        self.isotopologues
            .iter()
            .find(|i| i.id == id)
            .ok_or_else(|| Error::UnknownIsotopologue(id.to_string()))
    }

    fn free_parameter_count(&self) -> usize {
        1 + usize::from(self.fixed_c8.is_none()) + self.fitted_isotopologues().len()
    }

    fn validate(&self) -> Result<()> {
        for line in &self.lines {
            self.spec(&line.isotopologue)?;
            if line.dv > -1 {
                return Err(Error::domain(format!(
                    "line at {} cm-1 has dv = {}; need dv <= -1",
                    line.energy_cm1, line.dv
                )));
            }
            if !(line.energy_cm1 < 0.0 && line.energy_cm1.is_finite()) {
                return Err(Error::domain(format!(
                    "line energy must be negative, got {}",
                    line.energy_cm1
                )));
            }
        }
        if let Some(w) = &self.weights {
            if w.len() != self.lines.len() {
                return Err(Error::domain(format!(
                    "{} weights for {} lines",
                    w.len(),
                    self.lines.len()
                )));
            }
            if w.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
                return Err(Error::domain("weights must be positive and finite"));
            }
        }
        if let Some(c8) = self.fixed_c8 {
            if !(c8 >= 0.0 && c8.is_finite()) {
                return Err(Error::domain(format!("fixed c8 must be >= 0, got {c8}")));
            }
        }
        let free = self.free_parameter_count();
        if self.lines.len() < free {
            return Err(Error::Identifiability(format!(
                "{} lines cannot determine {free} parameters",
                self.lines.len()
            )));
        }
        Ok(())
    }
}

/// Seed from the pure-C6 law: regress `count^3` on `(2 mu)^(3/2) |E|` with
/// every `v_d` at 0.5 and `C8` at zero.
pub fn initial_guess(problem: &FitProblem) -> Result<InitialGuess> {
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for line in &problem.lines {
        let mu = problem.spec(&line.isotopologue)?.mu_au();
        let count = 0.5 - f64::from(line.dv);
        let x = (2.0 * mu).powf(1.5) * cm1_to_hartree(-line.energy_cm1);
        sxy += x * count.powi(3);
        sxx += x * x;
    }
    if sxx == 0.0 {
        return Err(Error::Identifiability("no lines to seed from".into()));
    }
    let slope = sxy / sxx;
    let c6 = (slope / PURE_C6_SLOPE_ROOT.powi(3)).powi(2);
    let v_d = problem
        .fitted_isotopologues()
        .into_iter()
        .map(|id| (id, 0.5))
        .collect();
    Ok(InitialGuess {
        params: PotentialParams::new(c6, problem.fixed_c8.unwrap_or(0.0))?,
        v_d,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub c6: f64,
    pub c8: f64,
    pub v_d: BTreeMap<String, f64>,
    /// `observed - predicted` in cm-1, in the problem's line order.
    pub residuals: Vec<f64>,
    pub predicted_cm1: Vec<f64>,
    pub rms: f64,
    /// Names of the rows/columns of `covariance`: `c6`, `c8` (when fitted),
    /// then `v_d:<id>`.
    pub parameter_names: Vec<String>,
    pub covariance: DMatrix<f64>,
    pub condition_number: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Parameters that finished on an edge of their box.
    pub active_bounds: Vec<String>,
    pub warnings: Vec<String>,
    pub initial_cost: f64,
    pub final_cost: f64,
}

impl FitResult {
    pub fn params(&self) -> PotentialParams {
        PotentialParams::new_unchecked(self.c6, self.c8)
    }

    /// Fitted values in the order of `parameter_names`.
    pub fn values(&self) -> Vec<f64> {
        self.parameter_names
            .iter()
            .map(|name| match name.as_str() {
                "c6" => self.c6,
                "c8" => self.c8,
                other => self.v_d[other.trim_start_matches("v_d:")],
            })
            .collect()
    }

    pub fn uncertainties(&self) -> Vec<f64> {
        (0..self.covariance.nrows())
            .map(|i| self.covariance[(i, i)].max(0.0).sqrt())
            .collect()
    }
}

struct Layout {
    fit_c8: bool,
    c8_scale: f64,
    fixed_c8: f64,
    isotopologues: Vec<String>,
}

impl Layout {
    fn v_d_index(&self, id: &str) -> usize {
        let base = 1 + usize::from(self.fit_c8);
        base + self.isotopologues.iter().position(|i| i == id).expect("known id")
    }

    fn decode(&self, theta: &[f64]) -> (PotentialParams, usize) {
        let c6 = theta[0].exp();
        let c8 = if self.fit_c8 {
            self.c8_scale * theta[1].exp_m1()
        } else {
            self.fixed_c8
        };
        (
            PotentialParams::new_unchecked(c6, c8.max(0.0)),
            1 + usize::from(self.fit_c8),
        )
    }

    fn encode(&self, guess: &InitialGuess) -> Vec<f64> {
        let mut theta = vec![guess.params.c6.ln()];
        if self.fit_c8 {
            theta.push((guess.params.c8 / self.c8_scale).ln_1p());
        }
        for id in &self.isotopologues {
            theta.push(guess.v_d.get(id).copied().unwrap_or(0.5));
        }
        theta
    }

    /// `d(physical)/d(theta)` for each parameter.
    fn chain(&self, theta: &[f64]) -> Vec<f64> {
        let mut d = vec![theta[0].exp()];
        if self.fit_c8 {
            d.push(self.c8_scale * theta[1].exp());
        }
        d.extend(std::iter::repeat(1.0).take(self.isotopologues.len()));
        d
    }

    fn names(&self) -> Vec<String> {
        let mut names = vec!["c6".to_string()];
        if self.fit_c8 {
            names.push("c8".into());
        }
        names.extend(self.isotopologues.iter().map(|id| format!("v_d:{id}")));
        names
    }
}

/// Fit `C6`, `C8` and one `v_d` per isotopologue.
///
/// Lines are put in a canonical order first, so permuting the input changes
/// nothing but the order of the returned residuals.
pub fn fit_nde(problem: &FitProblem) -> Result<FitResult> {
    problem.validate()?;
    let opts = problem.options;
    let layout = Layout {
        fit_c8: problem.fixed_c8.is_none(),
        c8_scale: opts.c8_scale,
        fixed_c8: problem.fixed_c8.unwrap_or(0.0),
        isotopologues: problem.fitted_isotopologues(),
    };

    let mut order: Vec<usize> = (0..problem.lines.len()).collect();
    let weight_of = |i: usize| problem.weights.as_ref().map_or(1.0, |w| w[i]);
    order.sort_by(|&a, &b| {
        let (la, lb) = (&problem.lines[a], &problem.lines[b]);
        la.isotopologue
            .cmp(&lb.isotopologue)
            .then(lb.dv.cmp(&la.dv))
            .then(la.energy_cm1.total_cmp(&lb.energy_cm1))
            .then(weight_of(a).total_cmp(&weight_of(b)))
    });
    let lines: Vec<&ObservedLine> = order.iter().map(|&i| &problem.lines[i]).collect();
    // Normalising by the largest weight makes a common rescaling of all
    // weights a bitwise no-op.
    let w_max = order.iter().map(|&i| weight_of(i)).fold(0.0, f64::max);
    let weights: Vec<f64> = order.iter().map(|&i| weight_of(i) / w_max).collect();
    let mus: Vec<f64> = lines
        .iter()
        .map(|l| problem.spec(&l.isotopologue).map(IsotopologueSpec::mu_au))
        .collect::<Result<_>>()?;
    let slots: Vec<usize> = lines.iter().map(|l| layout.v_d_index(&l.isotopologue)).collect();

    let predict = |theta: &[f64]| -> Result<Vec<f64>> {
        let (params, _) = layout.decode(theta);
        (0..lines.len())
            .into_par_iter()
            .map(|k| {
                let model = NdeModel::with_tolerances(params, mus[k], opts.quad_abs_tol, 60)?;
                let count = theta[slots[k]] - f64::from(lines[k].dv);
                if !(count > 0.0) {
                    return Err(Error::domain(format!("non-positive count {count}")));
                }
                Ok(hartree_to_cm1(model.level_energy(count)?))
            })
            .collect()
    };
    let residual_fn = |theta: &[f64]| -> Result<Vec<f64>> {
        Ok(predict(theta)?
            .iter()
            .zip(&lines)
            .map(|(p, l)| l.energy_cm1 - p)
            .collect())
    };

    let guess = match &problem.initial {
        Some(g) => g.clone(),
        None => {
            let canonical = FitProblem {
                lines: lines.iter().map(|&l| l.clone()).collect(),
                ..problem.clone()
            };
            initial_guess(&canonical)?
        }
    };
    let x0 = layout.encode(&guess);
    let n_par = x0.len();
    let mut lower = vec![f64::NEG_INFINITY; n_par];
    let mut upper = vec![f64::INFINITY; n_par];
    if layout.fit_c8 {
        lower[1] = 0.0;
    }
    for id in &layout.isotopologues {
        let i = layout.v_d_index(id);
        lower[i] = 0.0;
        upper[i] = V_D_MAX;
    }
    let lm_problem = Problem {
        residuals: residual_fn,
        lower: &lower,
        upper: &upper,
        weights: &weights,
    };
    let mut x_start = x0.clone();
    for i in 0..n_par {
        x_start[i] = x_start[i].clamp(lower[i], upper[i]);
    }

    let mut warnings = Vec::new();
    let start_condition = scaled_condition(&lm_problem.jacobian(&x_start, opts.fd_step)?, &weights);
    if !start_condition.is_finite() {
        return Err(Error::Identifiability(
            "Jacobian is rank deficient at the starting point".into(),
        ));
    }

    let out = lm_problem.minimize(
        &x_start,
        LmOptions {
            max_iterations: opts.max_iterations,
            param_tol: opts.param_tol,
            cost_tol: opts.cost_tol,
            fd_step: opts.fd_step,
        },
    )?;

    let names = layout.names();
    let condition_number = scaled_condition(&out.jacobian, &weights);
    if condition_number > CONDITION_WARNING {
        warnings.push(format!(
            "parameters poorly identifiable: scaled Jacobian condition number {condition_number:.3e}"
        ));
    }
    let n_lines = lines.len();
    let free: Vec<usize> = (0..n_par).filter(|&i| !out.at_bound[i]).collect();
    if n_lines <= free.len() {
        warnings.push(format!(
            "{n_lines} lines for {} free parameters: no residual degrees of freedom, covariance is unscaled",
            free.len()
        ));
    }
    let covariance = physical_covariance(
        &out.jacobian,
        &weights,
        &free,
        out.cost,
        n_lines,
        &layout.chain(&out.x),
    );
    let active_bounds = names
        .iter()
        .zip(&out.at_bound)
        .filter(|(_, &b)| b)
        .map(|(n, _)| n.clone())
        .collect();

    let (params, _) = layout.decode(&out.x);
    let mut residuals = vec![0.0; n_lines];
    let mut predicted = vec![0.0; n_lines];
    for (k, &orig) in order.iter().enumerate() {
        residuals[orig] = out.residuals[k];
        predicted[orig] = lines[k].energy_cm1 - out.residuals[k];
    }
    let rms = (residuals.iter().map(|r| r * r).sum::<f64>() / n_lines as f64).sqrt();
    let v_d = layout
        .isotopologues
        .iter()
        .map(|id| (id.clone(), out.x[layout.v_d_index(id)]))
        .collect();

    Ok(FitResult {
        c6: params.c6,
        c8: params.c8,
        v_d,
        residuals,
        predicted_cm1: predicted,
        rms,
        parameter_names: names,
        covariance,
        condition_number,
        converged: out.converged,
        iterations: out.iterations,
        active_bounds,
        warnings,
        initial_cost: out.initial_cost,
        final_cost: out.cost,
    })
}

/// Condition number of the weighted Jacobian after scaling columns to unit norm.
fn scaled_condition(jac: &DMatrix<f64>, weights: &[f64]) -> f64 {
    let mut a = DMatrix::from_fn(jac.nrows(), jac.ncols(), |i, j| jac[(i, j)] * weights[i].sqrt());
    for mut col in a.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 {
            col /= norm;
        }
    }
    let sv = a.singular_values();
    let max = sv.max();
    let min = sv.min();
    if min <= 1e-12 * max {
        f64::INFINITY
    } else {
        max / min
    }
}

fn physical_covariance(
    jac: &DMatrix<f64>,
    weights: &[f64],
    free: &[usize],
    cost: f64,
    n_lines: usize,
    chain: &[f64],
) -> DMatrix<f64> {
    let n = jac.ncols();
    let mut cov = DMatrix::zeros(n, n);
    if free.is_empty() {
        return cov;
    }
    let jw = DMatrix::from_fn(jac.nrows(), free.len(), |i, p| {
        jac[(i, free[p])] * weights[i].sqrt()
    });
    let hess = jw.transpose() * &jw;
    let Some(inv) = hess.try_inverse() else {
        cov.fill(f64::NAN);
        return cov;
    };
    let dof = n_lines.saturating_sub(free.len());
    let s2 = if dof > 0 { cost / dof as f64 } else { 1.0 };
    for (p, &i) in free.iter().enumerate() {
        for (q, &j) in free.iter().enumerate() {
            cov[(i, j)] = s2 * inv[(p, q)] * chain[i] * chain[j];
        }
    }
    cov
}

/// Result of [`auto_assign`].
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub dv: Vec<i32>,
    /// `(index of the deeper line, missing levels)` for every skipped level.
    pub gaps: Vec<(usize, i32)>,
    pub warnings: Vec<String>,
}

/// Assign relative vibrational numbers to a series of line energies
/// (cm-1, strictly decreasing) from a trial model.
pub fn auto_assign(energies_cm1: &[f64], model: &NdeModel, v_d_guess: f64) -> Result<Assignment> {
    if energies_cm1.is_empty() {
        return Ok(Assignment {
            dv: Vec::new(),
            gaps: Vec::new(),
            warnings: Vec::new(),
        });
    }
    if energies_cm1.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::domain("energies must be strictly decreasing"));
    }
    let counts: Vec<f64> = energies_cm1
        .iter()
        .map(|&e| model.quantum_defect(cm1_to_hartree(e)))
        .collect::<Result<_>>()?;
    let first = (v_d_guess - counts[0]).round() as i32;
    if first > -1 {
        return Err(Error::domain(format!(
            "the shallowest line would get dv = {first}; adjust v_d_guess"
        )));
    }
    let mut dv = vec![first];
    let mut gaps = Vec::new();
    let mut warnings = Vec::new();
    if counts.len() == 1 {
        warnings.push("single line: assignment rests entirely on the trial model".into());
    }
    for i in 1..counts.len() {
        let spacing = counts[i] - counts[i - 1];
        let step = spacing.round();
        if !(step > 0.5 && step < 3.5) {
            return Err(Error::Assignment {
                first: i - 1,
                second: i,
                spacing,
            });
        }
        let step = step as i32;
        if step > 1 {
            gaps.push((i, step - 1));
        }
        dv.push(dv[i - 1] - step);
    }
    Ok(Assignment { dv, gaps, warnings })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualRow {
    pub isotopologue: String,
    pub dv: i32,
    pub observed_cm1: f64,
    pub predicted_cm1: f64,
    pub residual_cm1: f64,
    /// `(v_d - dv) * sqrt(mu_ref / mu)`
    pub scaled_count: f64,
    pub scale: f64,
}

/// The isotopologue others are mass-scaled to: the one with the most lines
/// (ties go to the lexically first id).
pub fn reference_isotopologue(problem: &FitProblem) -> Option<String> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for l in &problem.lines {
        *counts.entry(&l.isotopologue).or_default() += 1;
    }
    let max = counts.values().copied().max()?;
    counts
        .into_iter()
        .find(|&(_, c)| c == max)
        .map(|(id, _)| id.to_string())
}

pub fn residual_report(result: &FitResult, problem: &FitProblem) -> Result<Vec<ResidualRow>> {
    let Some(reference) = reference_isotopologue(problem) else {
        return Ok(Vec::new());
    };
    let mu_ref = problem.spec(&reference)?.reduced_mass;
    problem
        .lines
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let mu = problem.spec(&l.isotopologue)?.reduced_mass;
            let scale = (mu_ref / mu).sqrt();
            let v_d = result.v_d[&l.isotopologue];
            Ok(ResidualRow {
                isotopologue: l.isotopologue.clone(),
                dv: l.dv,
                observed_cm1: l.energy_cm1,
                predicted_cm1: result.predicted_cm1[i],
                residual_cm1: result.residuals[i],
                scaled_count: (v_d - f64::from(l.dv)) * scale,
                scale,
            })
        })
        .collect()
}

pub const RESIDUAL_HEADER: &str =
    "isotopologue,dv,observed_cm1,predicted_cm1,residual_cm1,scaled_count,scale";

pub fn write_residual_csv(rows: &[ResidualRow]) -> String {
    let mut out = String::from(RESIDUAL_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.isotopologue, r.dv, r.observed_cm1, r.predicted_cm1, r.residual_cm1, r.scaled_count, r.scale
        );
    }
    out
}

pub fn parse_residual_csv(text: &str) -> Result<Vec<ResidualRow>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for row in rdr.deserialize() {
        rows.push(row?);
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceReport {
    pub parameters: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
}

/// The stable JSON document emitted by `pafit fit`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub schema_version: u32,
    pub c6_au: f64,
    pub c8_au: f64,
    pub v_d: BTreeMap<String, f64>,
    pub rms_cm1: f64,
    pub residuals: Vec<ResidualRow>,
    pub converged: bool,
    pub iterations: usize,
    pub uncertainties: BTreeMap<String, f64>,
    pub covariance: CovarianceReport,
    pub condition_number: Option<f64>,
    pub active_bounds: Vec<String>,
    pub warnings: Vec<String>,
    pub isotopologues: Vec<IsotopologueSpec>,
}

impl FitReport {
    pub const SCHEMA_VERSION: u32 = 1;

    pub fn new(result: &FitResult, problem: &FitProblem) -> Result<Self> {
        let n = result.covariance.nrows();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| result.covariance[(i, j)]).collect())
            .collect();
        let uncertainties = result
            .parameter_names
            .iter()
            .cloned()
            .zip(result.uncertainties())
            .collect();
        Ok(Self {
            schema_version: Self::SCHEMA_VERSION,
            c6_au: result.c6,
            c8_au: result.c8,
            v_d: result.v_d.clone(),
            rms_cm1: result.rms,
            residuals: residual_report(result, problem)?,
            converged: result.converged,
            iterations: result.iterations,
            uncertainties,
            covariance: CovarianceReport {
                parameters: result.parameter_names.clone(),
                matrix,
            },
            condition_number: result
                .condition_number
                .is_finite()
                .then_some(result.condition_number),
            active_bounds: result.active_bounds.clone(),
            warnings: result.warnings.clone(),
            isotopologues: problem.isotopologues.clone(),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let report: Self = serde_json::from_str(text)?;
        if report.schema_version != Self::SCHEMA_VERSION {
            return Err(Error::domain(format!(
                "unsupported fit schema_version {}",
                report.schema_version
            )));
        }
        PotentialParams::new(report.c6_au, report.c8_au)?;
        Ok(report)
    }

    pub fn params(&self) -> PotentialParams {
        PotentialParams::new_unchecked(self.c6_au, self.c8_au)
    }

    pub fn isotopologue(&self, id: &str) -> Result<&IsotopologueSpec> {
        self.isotopologues
            .iter()
            .find(|i| i.id == id)
            .ok_or_else(|| Error::UnknownIsotopologue(id.to_string()))
    }

    pub fn model(&self, id: &str) -> Result<NdeModel> {
        NdeModel::new(self.params(), self.isotopologue(id)?.mu_au())
    }

    pub fn v_d_of(&self, id: &str) -> Result<f64> {
        self.v_d
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownIsotopologue(id.to_string()))
    }
}
