//! Fit the bundled line list and print the parameters with their uncertainties.

use pafit::dataio::{bundled_isotopologues, bundled_table1};
use pafit::fitter::{fit_nde, FitProblem};

fn main() -> pafit::Result<()> {
    let problem = FitProblem::from_records(&bundled_table1(), &bundled_isotopologues());
    let fit = fit_nde(&problem)?;
    for (name, (value, sigma)) in fit
        .parameter_names
        .iter()
        .zip(fit.values().iter().zip(fit.uncertainties()))
    {
        println!("{name:>14} = {value:.6e} +- {sigma:.1e}");
    }
    println!("rms = {:.4} cm-1 after {} iterations", fit.rms, fit.iterations);
    Ok(())
}
