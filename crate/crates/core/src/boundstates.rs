//! Numerov eigensolver for the long-range potential behind a hard inner wall.
//!
//! Eigenvalues are located by counting the nodes of the outward solution
//! (the count at energy `E` equals the number of eigenvalues below `E`) and
//! bisecting on that count, which is the same as bisecting on the sign of
//! the outward solution at the outer boundary. Wavefunctions are built by
//! matching outward and inward integrations at the outer turning point.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::nde::NdeModel;
use crate::potential::PotentialParams;
use crate::units::{cm1_to_hartree, hartree_to_cm1};

pub const DEFAULT_R_MAX: f64 = 400.0;
pub const DEFAULT_POINTS: usize = 250_000;
pub const MIN_POINTS: usize = 2000;

const RESCALE: f64 = 1e150;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub n_points: usize,
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, n_points: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
            return Err(Error::domain(format!(
                "grid needs 0 < r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if n_points < MIN_POINTS {
            return Err(Error::domain(format!(
                "grid needs at least {MIN_POINTS} points, got {n_points}"
            )));
        }
        Ok(Self {
            r_min,
            r_max,
            n_points,
        })
    }

    /// `[r_min, 400 a0]` with the default point count.
    pub fn with_wall(r_min: f64) -> Result<Self> {
        Self::new(r_min, DEFAULT_R_MAX, DEFAULT_POINTS)
    }

    pub fn spacing(&self) -> f64 {
        (self.r_max - self.r_min) / (self.n_points - 1) as f64
    }

    pub fn radius(&self, i: usize) -> f64 {
        self.r_min + i as f64 * self.spacing()
    }

    /// Same interval with the spacing halved.
    pub fn refined(&self) -> Self {
        Self {
            n_points: 2 * self.n_points - 1,
            ..*self
        }
    }

    /// Highest energy whose outer turning point still sits at or inside
    /// `r_max / 3`.
    pub fn highest_resolvable_energy(&self, p: &PotentialParams) -> f64 {
        p.value(self.r_max / 3.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundState {
    /// Hartree.
    pub energy: f64,
    /// Values on the grid, normalised so that `sum(psi^2) * h = 1`.
    pub psi: Vec<f64>,
    pub nodes: usize,
    pub r_eff: f64,
    pub grid: RadialGrid,
}

impl BoundState {
    pub fn energy_cm1(&self) -> f64 {
        hartree_to_cm1(self.energy)
    }

    pub fn norm(&self) -> f64 {
        self.psi.iter().map(|y| y * y).sum::<f64>() * self.grid.spacing()
    }

    pub fn overlap(&self, other: &BoundState) -> f64 {
        self.psi.iter().zip(&other.psi).map(|(a, b)| a * b).sum::<f64>() * self.grid.spacing()
    }

    /// Two-column CSV `r_a0,psi`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r_a0,psi\n");
        for (i, y) in self.psi.iter().enumerate() {
            let _ = writeln!(out, "{},{}", self.grid.radius(i), y);
        }
        out
    }
}

/// `sqrt(sum psi^2 r^2 h)` for a normalised wavefunction.
pub fn effective_radius(psi: &[f64], grid: &RadialGrid) -> f64 {
    let h = grid.spacing();
    psi.iter()
        .enumerate()
        .map(|(i, y)| {
            let r = grid.radius(i);
            y * y * r * r
        })
        .sum::<f64>()
        .sqrt()
        * h.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Bisection stops once the bracket is this narrow (cm-1).
    pub energy_tol_cm1: f64,
    /// Re-solve on the refined grid and fail if any level moves further.
    pub check_resolution: bool,
    pub resolution_tol_cm1: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            energy_tol_cm1: 1e-10,
            check_resolution: true,
            resolution_tol_cm1: 1e-4,
        }
    }
}

/// Discretised problem on one grid: `f_i = 1 + (h^2/12) 2 mu (E - V_i)`.
struct Numerov {
    grid: RadialGrid,
    scale: f64,
    minus_v: Vec<f64>,
}

impl Numerov {
    fn new(p: &PotentialParams, mu: f64, grid: RadialGrid) -> Self {
        let h = grid.spacing();
        let scale = h * h / 12.0 * 2.0 * mu;
        let minus_v = (0..grid.n_points)
            .map(|i| -scale * p.value(grid.radius(i)))
            .collect();
        Self { grid, scale, minus_v }
    }

    fn f(&self, e: f64, i: usize) -> f64 {
        1.0 + self.scale * e + self.minus_v[i]
    }

    /// Number of eigenvalues strictly below `e`.
    ///
    /// Runs the recurrence on `u = f y`, `u[i+1] = (12 / f[i] - 10) u[i] - u[i-1]`,
    /// which keeps the division off the loop-carried dependency. `f` stays
    /// positive on any grid fine enough to resolve the potential, so `u` and
    /// `y` share their signs.
    fn node_count(&self, e: f64) -> usize {
        let a = 1.0 + self.scale * e;
        let (mut u0, mut u1) = (0.0_f64, 1e-30_f64);
        let mut nodes = 0;
        for &mv in &self.minus_v[1..self.grid.n_points - 1] {
            let u2 = (12.0 / (a + mv) - 10.0) * u1 - u0;
            if u2 == 0.0 || (u2 < 0.0) != (u1 < 0.0) {
                nodes += 1;
            }
            u0 = u1;
            u1 = u2;
            if u1.abs() > RESCALE {
                u0 /= RESCALE;
                u1 /= RESCALE;
            }
        }
        nodes
    }

    /// Outward and inward solutions compared at `m`: the sine of their phase
    /// difference there, which vanishes exactly at an eigenvalue.
    fn matching_defect(&self, e: f64, m: usize) -> f64 {
        let a = 1.0 + self.scale * e;
        let mv = &self.minus_v;
        let n = self.grid.n_points;
        let (mut u0, mut u1) = (0.0_f64, 1e-30_f64);
        for &v in &mv[1..=m] {
            let u2 = (12.0 / (a + v) - 10.0) * u1 - u0;
            u0 = u1;
            u1 = u2;
            if u1.abs() > RESCALE {
                u0 /= RESCALE;
                u1 /= RESCALE;
            }
        }
        let (om, om1) = (u0, u1);
        let (mut w0, mut w1) = (0.0_f64, 1e-30_f64);
        for &v in mv[m + 1..n - 1].iter().rev() {
            let w2 = (12.0 / (a + v) - 10.0) * w1 - w0;
            w0 = w1;
            w1 = w2;
            if w1.abs() > RESCALE {
                w0 /= RESCALE;
                w1 /= RESCALE;
            }
        }
        let (im1, im) = (w0, w1);
        (om * im1 - om1 * im) / (om.hypot(om1) * im.hypot(im1))
    }

    /// Index of the last classically allowed point at energy `e`.
    fn match_index(&self, e: f64) -> usize {
        let n = self.grid.n_points;
        (0..n)
            .rev()
            .find(|&i| self.f(e, i) > 1.0)
            .unwrap_or(2)
            .clamp(2, n - 3)
    }

    /// Brackets `(q, lo, hi)` holding exactly one eigenvalue each, for every
    /// index between `count(lo)` and `count(hi)`.
    fn isolate(&self, lo: f64, hi: f64, tol: f64) -> Vec<(usize, f64, f64)> {
        let mut out = Vec::new();
        let mut stack = vec![(lo, hi, self.node_count(lo), self.node_count(hi))];
        while let Some((a, b, ca, cb)) = stack.pop() {
            if cb <= ca {
                continue;
            }
            let mid = 0.5 * (a + b);
            if cb - ca == 1 || b - a <= tol || mid <= a || mid >= b {
                out.extend((ca..cb).map(|q| (q, a, b)));
                continue;
            }
            let cm = self.node_count(mid);
            stack.push((mid, b, cm, cb));
            stack.push((a, mid, ca, cm));
        }
        out.sort_by_key(|t| t.0);
        out
    }

    /// Converge the single eigenvalue inside an isolating bracket with the
    /// Illinois variant of regula falsi on the matching defect.
    fn eigenvalue(&self, q: usize, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
        if hi - lo <= tol {
            return 0.5 * (lo + hi);
        }
        let m = self.match_index(0.5 * (lo + hi));
        let mut f_lo = self.matching_defect(lo, m);
        let mut f_hi = self.matching_defect(hi, m);
        if f_lo == 0.0 {
            return lo;
        }
        if f_hi == 0.0 || f_lo.signum() == f_hi.signum() {
            return self.bisect_count(q, lo, hi, tol);
        }
        let mut side = 0;
        for _ in 0..200 {
            if hi - lo <= tol {
                break;
            }
            let mut x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
            if !(x > lo && x < hi) {
                x = 0.5 * (lo + hi);
            }
            let fx = self.matching_defect(x, m);
            if fx == 0.0 {
                return x;
            }
            if fx.signum() == f_lo.signum() {
                lo = x;
                f_lo = fx;
                if side == -1 {
                    f_hi *= 0.5;
                }
                side = -1;
            } else {
                hi = x;
                f_hi = fx;
                if side == 1 {
                    f_lo *= 0.5;
                }
                side = 1;
            }
            // Regula falsi can stall with one end fixed; a tiny step off the
            // converged end closes the bracket.
            let width = hi - lo;
            if width > tol && (x - lo).min(hi - x) < 0.5 * tol {
                let probe = if side == -1 {
                    (x + tol).min(hi)
                } else {
                    (x - tol).max(lo)
                };
                let fp = self.matching_defect(probe, m);
                if fp.signum() == f_lo.signum() {
                    lo = probe;
                    f_lo = fp;
                } else {
                    hi = probe;
                    f_hi = fp;
                }
            }
        }
        0.5 * (lo + hi)
    }

    fn bisect_count(&self, q: usize, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.node_count(mid) > q {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn state(&self, e: f64) -> BoundState {
        let n = self.grid.n_points;
        let f: Vec<f64> = (0..n).map(|i| self.f(e, i)).collect();
        let mut m = self.match_index(e);

        let mut out = vec![0.0; n];
        out[1] = 1e-30;
        for i in 2..=m + 1 {
            out[i] = ((12.0 - 10.0 * f[i - 1]) * out[i - 1] - f[i - 2] * out[i - 2]) / f[i];
            if out[i].abs() > RESCALE {
                out[..=i].iter_mut().for_each(|y| *y /= RESCALE);
            }
        }
        let mut inw = vec![0.0; n];
        inw[n - 2] = 1e-30;
        for i in (m - 2..=n - 3).rev() {
            inw[i] = ((12.0 - 10.0 * f[i + 1]) * inw[i + 1] - f[i + 2] * inw[i + 2]) / f[i];
            if inw[i].abs() > RESCALE {
                inw[i..].iter_mut().for_each(|y| *y /= RESCALE);
            }
        }
        // Avoid matching on a node of either piece.
        if out[m].abs() < 1e-8 * out[m - 1].abs() || inw[m] == 0.0 {
            m -= 1;
        }
        let ratio = out[m] / inw[m];
        let mut psi = out;
        for i in m + 1..n {
            psi[i] = inw[i] * ratio;
        }
        psi[0] = 0.0;
        psi[n - 1] = 0.0;

        let h = self.grid.spacing();
        let norm = (psi.iter().map(|y| y * y).sum::<f64>() * h).sqrt();
        psi.iter_mut().for_each(|y| *y /= norm);
        // Fix the overall sign so the outermost lobe is positive.
        let sign = psi
            .iter()
            .rev()
            .find(|y| y.abs() > 1e-12)
            .map_or(1.0, |y| y.signum());
        psi.iter_mut().for_each(|y| *y *= sign);

        let nodes = psi[1..n - 1]
            .windows(2)
            .filter(|w| (w[0] < 0.0) != (w[1] < 0.0) && w[0] != 0.0 && w[1] != 0.0)
            .count();
        let r_eff = effective_radius(&psi, &self.grid);
        BoundState {
            energy: e,
            psi,
            nodes,
            r_eff,
            grid: self.grid,
        }
    }
}

fn check_window(p: &PotentialParams, grid: &RadialGrid, e_lo: f64, e_hi: f64) -> Result<()> {
    if !(e_lo < e_hi && e_hi < 0.0) {
        return Err(Error::domain(format!(
            "energy window must satisfy e_lo < e_hi < 0, got ({e_lo}, {e_hi})"
        )));
    }
    if e_lo <= p.value(grid.r_min) {
        return Err(Error::domain(format!(
            "window bottom {} cm-1 lies below the potential at the wall",
            hartree_to_cm1(e_lo)
        )));
    }
    let rt = p.outer_turning_point(e_hi)?;
    if grid.r_max < 3.0 * rt {
        return Err(Error::domain(format!(
            "r_max = {} a0 is less than 3x the turning point {rt:.2} a0 of the window top",
            grid.r_max
        )));
    }
    Ok(())
}

/// All eigenstates with energy in `(e_lo, e_hi)` (hartree), deepest first.
pub fn solve_bound(
    p: &PotentialParams,
    mu: f64,
    grid: &RadialGrid,
    window: (f64, f64),
    opts: &SolveOptions,
) -> Result<Vec<BoundState>> {
    let (e_lo, e_hi) = window;
    check_window(p, grid, e_lo, e_hi)?;
    let solver = Numerov::new(p, mu, *grid);
    let tol = cm1_to_hartree(opts.energy_tol_cm1);
    let brackets = solver.isolate(e_lo, e_hi, tol);
    let energies: Vec<(usize, f64)> = brackets
        .par_iter()
        .map(|&(q, lo, hi)| (q, solver.eigenvalue(q, lo, hi, tol)))
        .collect();

    if opts.check_resolution && !energies.is_empty() {
        // The refined eigenvalue lies within `reach` exactly when the node
        // count steps past `q` inside `e +- reach`.
        let fine = Numerov::new(p, mu, grid.refined());
        let reach = cm1_to_hartree(opts.resolution_tol_cm1);
        let unresolved = energies
            .par_iter()
            .find_any(|&&(q, e)| !(fine.node_count(e - reach) <= q && fine.node_count(e + reach) > q));
        if let Some(&(q, e)) = unresolved {
            let fine_e = fine
                .isolate(e_lo, e_hi, tol)
                .into_iter()
                .find(|b| b.0 == q)
                .map(|(q, lo, hi)| fine.eigenvalue(q, lo, hi, tol));
            return Err(Error::Resolution {
                shift_cm1: fine_e.map_or(f64::INFINITY, |f| hartree_to_cm1((f - e).abs())),
            });
        }
    }

    Ok(energies
        .par_iter()
        .map(|&(q, e)| {
            let mut s = solver.state(e);
            s.nodes = q;
            s
        })
        .collect())
}

/// A bound state together with its index below threshold (`0` = last bound level).
#[derive(Debug, Clone, PartialEq)]
pub struct LabelledState {
    pub dv: i32,
    pub state: BoundState,
}

/// Eigenstates between `e_lo` and the highest resolvable energy of the grid,
/// labelled by their distance from the last bound level of the box.
pub fn threshold_levels(
    p: &PotentialParams,
    mu: f64,
    grid: &RadialGrid,
    e_lo: f64,
    opts: &SolveOptions,
) -> Result<Vec<LabelledState>> {
    let e_hi = grid.highest_resolvable_energy(p);
    let top = Numerov::new(p, mu, *grid).node_count(0.0);
    let states = solve_bound(p, mu, grid, (e_lo, e_hi), opts)?;
    Ok(states
        .into_iter()
        .map(|s| LabelledState {
            dv: s.nodes as i32 - (top as i32 - 1),
            state: s,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallSearch {
    pub r_lo: f64,
    pub r_hi: f64,
    pub step: f64,
    /// Grid size used while scanning; the final wall is refined on `grid_points`.
    pub scan_points: usize,
    pub grid_points: usize,
    pub r_max: f64,
    pub tol_cm1: f64,
}

impl Default for WallSearch {
    fn default() -> Self {
        Self {
            r_lo: 8.0,
            r_hi: 12.0,
            step: 0.01,
            scan_points: 40_000,
            grid_points: DEFAULT_POINTS,
            r_max: DEFAULT_R_MAX,
            tol_cm1: 1e-4,
        }
    }
}

struct Probe {
    top: usize,
    above: usize,
}

fn probe(p: &PotentialParams, mu: f64, r_wall: f64, r_max: f64, n: usize, e: f64) -> Probe {
    let solver = Numerov::new(
        p,
        mu,
        RadialGrid {
            r_min: r_wall,
            r_max,
            n_points: n,
        },
    );
    let top = solver.node_count(0.0);
    Probe {
        top,
        above: top.saturating_sub(solver.node_count(e)),
    }
}

/// Bisect the wall inside a bracket where the count of levels above the
/// anchor switches between `k` and `k + 1`.
#[allow(clippy::too_many_arguments)]
fn refine_wall(
    p: &PotentialParams,
    mu: f64,
    bracket: (f64, f64),
    search: &WallSearch,
    n: usize,
    e: f64,
    k: usize,
    wall_tol: f64,
) -> Option<f64> {
    let (mut a, mut b) = bracket;
    let pa = probe(p, mu, a, search.r_max, n, e);
    let pb = probe(p, mu, b, search.r_max, n, e);
    if pa.top != pb.top
        || pa.above == pb.above
        || !(k..=k + 1).contains(&pa.above)
        || !(k..=k + 1).contains(&pb.above)
    {
        return None;
    }
    let at_a = pa.above;
    let count_above = |w: f64| {
        let solver = Numerov::new(
            p,
            mu,
            RadialGrid {
                r_min: w,
                r_max: search.r_max,
                n_points: n,
            },
        );
        pa.top.saturating_sub(solver.node_count(e))
    };
    for _ in 0..60 {
        if b - a < wall_tol {
            break;
        }
        let mid = 0.5 * (a + b);
        if count_above(mid) == at_a {
            a = mid;
        } else {
            b = mid;
        }
    }
    let w = 0.5 * (a + b);
    (probe(p, mu, w, search.r_max, n, e).top == pa.top).then_some(w)
}

fn level_below_top(
    p: &PotentialParams,
    mu: f64,
    grid: RadialGrid,
    depth: usize,
    e_lo: f64,
    tol: f64,
) -> Option<f64> {
    let solver = Numerov::new(p, mu, grid);
    let q = solver.node_count(0.0).checked_sub(depth + 1)?;
    let (_, lo, hi) = solver.isolate(e_lo, 0.0, tol).into_iter().find(|b| b.0 == q)?;
    Some(solver.eigenvalue(q, lo, hi, tol))
}

/// Place the inner wall so that the level `anchor.0` (negative, counted from
/// the last bound level) sits at `anchor.1` cm-1.
///
/// Several wall positions in the search range usually qualify; the one whose
/// `dv = -1` level lies closest to the near-dissociation prediction with
/// offset `v_d` is taken.
pub fn calibrate_wall(
    p: &PotentialParams,
    mu: f64,
    anchor: (i32, f64),
    v_d: f64,
    search: &WallSearch,
) -> Result<f64> {
    let (dv, e_cm1) = anchor;
    if !(e_cm1 < 0.0) {
        return Err(Error::domain(format!(
            "anchor energy must be negative, got {e_cm1}"
        )));
    }
    if dv > -1 {
        return Err(Error::domain(format!("anchor dv must be <= -1, got {dv}")));
    }
    if !(search.r_lo > 0.0 && search.r_hi > search.r_lo && search.step > 0.0) {
        return Err(Error::domain("invalid wall search range"));
    }
    let e = cm1_to_hartree(e_cm1);
    let k = dv.unsigned_abs() as usize;
    let steps = ((search.r_hi - search.r_lo) / search.step).round() as usize;
    let walls: Vec<f64> = (0..=steps)
        .map(|i| (search.r_lo + i as f64 * search.step).min(search.r_hi))
        .collect();
    let n_scan = search.scan_points.max(MIN_POINTS);
    let probes: Vec<Probe> = walls
        .par_iter()
        .map(|&w| probe(p, mu, w, search.r_max, n_scan, e))
        .collect();

    let brackets: Vec<(f64, f64)> = (0..walls.len() - 1)
        .filter(|&i| {
            let (x, y) = (&probes[i], &probes[i + 1]);
            x.top == y.top
                && x.above != y.above
                && (k..=k + 1).contains(&x.above)
                && (k..=k + 1).contains(&y.above)
        })
        .map(|i| (walls[i], walls[i + 1]))
        .collect();
    if brackets.is_empty() {
        return Err(Error::Calibration(format!(
            "no wall in [{}, {}] a0 puts level {dv} at {e_cm1} cm-1",
            search.r_lo, search.r_hi
        )));
    }

    let target = NdeModel::new(*p, mu)?.level_energy(v_d + 1.0)?;
    let e_floor = e * 1.5;
    let mut scored: Vec<(f64, (f64, f64))> = brackets
        .par_iter()
        .filter_map(|&br| {
            let w = refine_wall(p, mu, br, search, n_scan, e, k, 1e-5)?;
            let grid = RadialGrid {
                r_min: w,
                r_max: search.r_max,
                n_points: n_scan,
            };
            let top1 = level_below_top(p, mu, grid, 1, e_floor, cm1_to_hartree(1e-8))?;
            Some(((top1 - target).abs(), br))
        })
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1 .0.total_cmp(&b.1 .0)));

    for (_, (a, b)) in scored {
        // The bracket may move slightly between the scan grid and the full grid.
        let widen = search.step;
        let full = (a - widen).max(search.r_lo * 0.5)..=(b + widen);
        let sub: Vec<f64> = (0..=8)
            .map(|i| full.start() + (full.end() - full.start()) * i as f64 / 8.0)
            .collect();
        for pair in sub.windows(2) {
            let Some(w) = refine_wall(p, mu, (pair[0], pair[1]), search, search.grid_points, e, k, 1e-10)
            else {
                continue;
            };
            let grid = RadialGrid::new(w, search.r_max, search.grid_points)?;
            if let Some(level) = level_below_top(p, mu, grid, k, e_floor, cm1_to_hartree(1e-10)) {
                if hartree_to_cm1((level - e).abs()) <= search.tol_cm1 {
                    return Ok(w);
                }
            }
        }
    }
    Err(Error::Calibration(format!(
        "wall refinement could not reproduce {e_cm1} cm-1 within {} cm-1",
        search.tol_cm1
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> PotentialParams {
        PotentialParams::new(6300.0, 4.0e5).unwrap()
    }

    const MU: f64 = 106_043.95;

    #[test]
    fn grid_validation() {
        assert!(RadialGrid::new(10.0, 400.0, 1999).is_err());
        assert!(RadialGrid::new(0.0, 400.0, 5000).is_err());
        assert!(RadialGrid::new(10.0, 5.0, 5000).is_err());
        let g = RadialGrid::new(10.0, 20.0, 2001).unwrap();
        assert!((g.spacing() - 0.005).abs() < 1e-15);
        assert_eq!(g.refined().n_points, 4001);
        assert!((g.refined().spacing() - 0.0025).abs() < 1e-15);
    }

    #[test]
    fn harmonic_like_node_count_is_monotone() {
        let g = RadialGrid::new(10.5, 400.0, 20_000).unwrap();
        let s = Numerov::new(&params(), MU, g);
        let es = [-30.0, -10.0, -3.0, -1.0, -0.1];
        let counts: Vec<usize> = es.iter().map(|&e| s.node_count(cm1_to_hartree(e))).collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{counts:?}");
        assert!(counts[4] > counts[0]);
    }

    #[test]
    fn defect_root_agrees_with_count_bisection() {
        let g = RadialGrid::new(10.5, 400.0, 20_000).unwrap();
        let s = Numerov::new(&params(), MU, g);
        let (lo, hi) = (cm1_to_hartree(-12.0), cm1_to_hartree(-0.01));
        let tol = cm1_to_hartree(1e-10);
        for (q, a_lo, a_hi) in s.isolate(lo, hi, tol) {
            let a = s.eigenvalue(q, a_lo, a_hi, tol);
            let b = s.bisect_count(q, lo, hi, tol);
            assert!(hartree_to_cm1((a - b).abs()) < 1e-9, "{q}: {a} {b}");
        }
    }

    #[test]
    fn window_checks() {
        let g = RadialGrid::new(10.5, 100.0, 5000).unwrap();
        let o = SolveOptions::default();
        let err = solve_bound(
            &params(),
            MU,
            &g,
            (cm1_to_hartree(-3.0), cm1_to_hartree(-0.01)),
            &o,
        );
        assert!(matches!(err, Err(Error::Domain(_))));
        let err = solve_bound(
            &params(),
            MU,
            &g,
            (cm1_to_hartree(-1.0), cm1_to_hartree(-2.0)),
            &o,
        );
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn coarse_grid_trips_resolution_check() {
        let g = RadialGrid::new(10.5, 400.0, 2000).unwrap();
        let err = solve_bound(
            &params(),
            MU,
            &g,
            (cm1_to_hartree(-6.0), cm1_to_hartree(-1.0)),
            &SolveOptions::default(),
        );
        assert!(matches!(err, Err(Error::Resolution { .. })), "{err:?}");
    }

    #[test]
    fn states_are_normalised_and_nodal() {
        let g = RadialGrid::new(10.5, 400.0, 60_000).unwrap();
        let o = SolveOptions {
            check_resolution: false,
            ..SolveOptions::default()
        };
        let states = solve_bound(
            &params(),
            MU,
            &g,
            (cm1_to_hartree(-6.0), cm1_to_hartree(-0.5)),
            &o,
        )
        .unwrap();
        assert!(states.len() >= 3);
        for pair in states.windows(2) {
            assert_eq!(pair[1].nodes, pair[0].nodes + 1);
            assert!(pair[1].energy > pair[0].energy);
            assert!(pair[0].overlap(&pair[1]).abs() < 1e-6);
        }
        for s in &states {
            assert!((s.norm() - 1.0).abs() < 1e-8);
            assert_eq!(s.psi[0], 0.0);
            assert_eq!(*s.psi.last().unwrap(), 0.0);
            let counted = s.psi[1..s.psi.len() - 1]
                .windows(2)
                .filter(|w| (w[0] < 0.0) != (w[1] < 0.0) && w[0] != 0.0 && w[1] != 0.0)
                .count();
            assert_eq!(counted, s.nodes);
            let rt = params().outer_turning_point(s.energy).unwrap();
            assert!(s.r_eff < rt);
        }
    }

    #[test]
    fn effective_radius_of_narrow_gaussian() {
        let g = RadialGrid::new(1.0, 100.0, 200_001).unwrap();
        for width in [1.0, 0.3, 0.1] {
            let r0 = 40.0;
            let mut psi: Vec<f64> = (0..g.n_points)
                .map(|i| (-((g.radius(i) - r0) / width).powi(2) / 2.0).exp())
                .collect();
            let norm = (psi.iter().map(|y| y * y).sum::<f64>() * g.spacing()).sqrt();
            psi.iter_mut().for_each(|y| *y /= norm);
            let r = effective_radius(&psi, &g);
            assert!((r - r0).abs() < 0.6 * width * width / r0 + 1e-6, "{width}: {r}");
        }
    }
}
