//! Calibrate the inner wall to one observed level and compare the Numerov
//! spectrum with the near-dissociation expansion.

use pafit::boundstates::{calibrate_wall, threshold_levels, RadialGrid, SolveOptions, WallSearch};
use pafit::dataio::{bundled_isotopologues, bundled_table1};
use pafit::fitter::{fit_nde, FitProblem};
use pafit::units::{cm1_to_hartree, hartree_to_cm1};
use pafit::NdeModel;

fn main() -> pafit::Result<()> {
    let isos = bundled_isotopologues();
    let fit = fit_nde(&FitProblem::from_records(&bundled_table1(), &isos))?;
    let mu = isos
        .iter()
        .find(|i| i.id == "176Yb87Rb")
        .expect("bundled")
        .mu_au();
    let v_d = fit.v_d["176Yb87Rb"];
    let p = fit.params();

    let wall = calibrate_wall(&p, mu, (-11, -4.897), v_d, &WallSearch::default())?;
    println!("wall = {wall:.6} a0");
    let grid = RadialGrid::with_wall(wall)?;
    let levels = threshold_levels(&p, mu, &grid, cm1_to_hartree(-25.0), &SolveOptions::default())?;
    let nde = NdeModel::new(p, mu)?;
    println!(
        "{:>4} {:>12} {:>12} {:>8} {:>8}",
        "dv", "numerov", "nde", "r_eff", "r_t"
    );
    for l in levels.iter().rev() {
        let e_nde = hartree_to_cm1(nde.level_energy(v_d - f64::from(l.dv))?);
        let rt = p.outer_turning_point(l.state.energy)?;
        println!(
            "{:>4} {:>12.5} {:>12.5} {:>8.2} {:>8.2}",
            l.dv,
            l.state.energy_cm1(),
            e_nde,
            l.state.r_eff,
            rt
        );
    }
    Ok(())
}
