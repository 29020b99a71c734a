//! Synthetic trap-loss spectra and peak recovery.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rotation::LineComponent;

pub const DEFAULT_STEP_CM1: f64 = 2e-5;
pub const DEFAULT_FWHM_CM1: f64 = 1.6e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LineShape {
    Gaussian,
    Lorentzian,
}

impl LineShape {
    /// Unit-peak profile at offset `x` for full width at half maximum `w`.
    pub fn profile(self, x: f64, w: f64) -> f64 {
        let u = x / w;
        match self {
            LineShape::Gaussian => (-4.0 * std::f64::consts::LN_2 * u * u).exp(),
            LineShape::Lorentzian => 1.0 / (1.0 + 4.0 * u * u),
        }
    }
}

impl std::str::FromStr for LineShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" => Ok(Self::Gaussian),
            "lorentzian" => Ok(Self::Lorentzian),
            other => Err(Error::domain(format!("unknown line shape `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumConfig {
    pub grid_start: f64,
    pub grid_stop: f64,
    pub grid_step: f64,
    pub line_fwhm: f64,
    pub line_shape: LineShape,
    pub noise_rms: f64,
    pub seed: u64,
}

impl SpectrumConfig {
    pub fn new(grid_start: f64, grid_stop: f64) -> Self {
        Self {
            grid_start,
            grid_stop,
            grid_step: DEFAULT_STEP_CM1,
            line_fwhm: DEFAULT_FWHM_CM1,
            line_shape: LineShape::Gaussian,
            noise_rms: 0.0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.grid_start < self.grid_stop && self.grid_start.is_finite() && self.grid_stop.is_finite()) {
            return Err(Error::domain(format!(
                "grid needs start < stop, got [{}, {}]",
                self.grid_start, self.grid_stop
            )));
        }
        if !(self.line_fwhm > 0.0) {
            return Err(Error::domain("line width must be positive"));
        }
        if !(self.grid_step > 0.0 && self.grid_step < self.line_fwhm / 4.0) {
            return Err(Error::domain(format!(
                "grid step {} must be positive and below a quarter of the line width {}",
                self.grid_step, self.line_fwhm
            )));
        }
        if !(self.noise_rms >= 0.0 && self.noise_rms.is_finite()) {
            return Err(Error::domain("noise rms must be >= 0"));
        }
        Ok(())
    }

    pub fn n_points(&self) -> usize {
        ((self.grid_stop - self.grid_start) / self.grid_step + 1e-9).floor() as usize + 1
    }
}

/// One absorption feature: position (cm-1, detuning convention) and depth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dip {
    pub delta_pa: f64,
    pub depth: f64,
}

/// Dips for rotational components of a line whose R'=0 depth is `depth`.
pub fn dips_from_components(components: &[LineComponent], depth: f64, nu_res: f64) -> Vec<Dip> {
    components
        .iter()
        .map(|c| Dip {
            delta_pa: c.delta_pa(nu_res),
            depth: depth * c.rel_amplitude,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub delta_pa: Vec<f64>,
    pub signal: Vec<f64>,
}

/// `clamp(1 - sum depth_i g(delta - delta_i), 0, 1)` plus optional Gaussian noise.
pub fn synthesize(dips: &[Dip], cfg: &SpectrumConfig) -> Result<Spectrum> {
    cfg.validate()?;
    if let Some(d) = dips.iter().find(|d| !(0.0..=1.0).contains(&d.depth)) {
        return Err(Error::domain(format!(
            "dip depth must lie in [0, 1], got {}",
            d.depth
        )));
    }
    let n = cfg.n_points();
    let delta_pa: Vec<f64> = (0..n)
        .map(|i| cfg.grid_start + i as f64 * cfg.grid_step)
        .collect();
    let mut signal: Vec<f64> = delta_pa
        .par_iter()
        .map(|&x| {
            let loss: f64 = dips
                .iter()
                .map(|d| d.depth * cfg.line_shape.profile(x - d.delta_pa, cfg.line_fwhm))
                .sum();
            (1.0 - loss).clamp(0.0, 1.0)
        })
        .collect();
    if cfg.noise_rms > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let normal = Normal::new(0.0, cfg.noise_rms).map_err(|e| Error::domain(e.to_string()))?;
        for s in &mut signal {
            *s += normal.sample(&mut rng);
        }
    }
    Ok(Spectrum { delta_pa, signal })
}

/// Local minima at least `min_depth` below 1, refined by a parabola through
/// the minimum and its two neighbours. Flat-bottomed (clamped) minima report
/// the middle of the plateau.
pub fn find_peaks(s: &Spectrum, min_depth: f64) -> Vec<Dip> {
    let y = &s.signal;
    let n = y.len();
    let mut peaks = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if !(y[i] < y[i - 1]) {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < n && y[j + 1] == y[i] {
            j += 1;
        }
        if j + 1 >= n || !(y[j + 1] > y[i]) {
            i = j + 1;
            continue;
        }
        if 1.0 - y[i] >= min_depth {
            let dip = if j > i {
                Dip {
                    delta_pa: 0.5 * (s.delta_pa[i] + s.delta_pa[j]),
                    depth: 1.0 - y[i],
                }
            } else {
                let (a, b, c) = (y[i - 1], y[i], y[i + 1]);
                let curvature = a - 2.0 * b + c;
                let t = if curvature > 0.0 {
                    0.5 * (a - c) / curvature
                } else {
                    0.0
                };
                let step = s.delta_pa[i + 1] - s.delta_pa[i];
                Dip {
                    delta_pa: s.delta_pa[i] + t * step,
                    depth: 1.0 - (b - 0.25 * (a - c) * t),
                }
            };
            peaks.push(dip);
        }
        i = j + 1;
    }
    peaks
}

pub const SPECTRUM_HEADER: &str = "delta_pa_cm1,signal";

pub fn write_spectrum_csv(s: &Spectrum) -> String {
    let mut out = String::with_capacity(32 * s.signal.len());
    out.push_str(SPECTRUM_HEADER);
    out.push('\n');
    for (x, y) in s.delta_pa.iter().zip(&s.signal) {
        let _ = writeln!(out, "{x},{y}");
    }
    out
}

pub fn parse_spectrum_csv(text: &str) -> Result<Spectrum> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    if rdr.headers()?.iter().collect::<Vec<_>>().join(",") != SPECTRUM_HEADER {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header `{SPECTRUM_HEADER}`"),
        });
    }
    let mut s = Spectrum {
        delta_pa: Vec::new(),
        signal: Vec::new(),
    };
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let num = |i: usize| -> Result<f64> {
            row.get(i).unwrap_or("").parse().map_err(|_| Error::Parse {
                line,
                message: format!("column {} is not a number", i + 1),
            })
        };
        s.delta_pa.push(num(0)?);
        s.signal.push(num(1)?);
    }
    Ok(s)
}

/// Minimal SVG line plot of the spectrum.
pub fn to_svg(s: &Spectrum, title: &str) -> String {
    const W: f64 = 800.0;
    const H: f64 = 400.0;
    const PAD: f64 = 50.0;
    let (x0, x1) = match (s.delta_pa.first(), s.delta_pa.last()) {
        (Some(&a), Some(&b)) if b > a => (a, b),
        _ => (0.0, 1.0),
    };
    let y_lo = s.signal.iter().copied().fold(0.0, f64::min);
    let y_hi = s.signal.iter().copied().fold(1.0, f64::max);
    let px = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let py = |y: f64| H - PAD - (y - y_lo) / (y_hi - y_lo) * (H - 2.0 * PAD);

    let mut points = String::new();
    for (x, y) in s.delta_pa.iter().zip(&s.signal) {
        let _ = write!(points, "{:.2},{:.2} ", px(*x), py(*y));
    }
    let title = title
        .replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;");
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    let _ = writeln!(
        out,
        r#"<polyline fill="none" stroke="steelblue" stroke-width="1" points="{}"/>"#,
        points.trim_end()
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="30" text-anchor="middle" font-size="16">{title}</text>"#,
        W / 2.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">Δ_PA (cm⁻¹): {x0:.5} … {x1:.5}</text>"#,
        W / 2.0,
        H - 15.0
    );
    out.push_str("</svg>\n");
    out
}
