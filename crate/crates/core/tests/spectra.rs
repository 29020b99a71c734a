use pafit::dataio::{bundled_isotopologues, bundled_table1};
use pafit::rotation::{
    components, parse_components_csv, radius_from_b, write_components_csv, RotationConfig, RotationalLevel,
};
use pafit::spectra::{
    dips_from_components, find_peaks, parse_spectrum_csv, synthesize, write_spectrum_csv, Dip, LineShape,
    SpectrumConfig,
};

// Effective radii (a0) listed with the bundled lines, in file order.
const TABLE_RADII: [f64; 19] = [
    34.9, 26.3, 27.7, 24.7, 24.7, 24.9, 22.5, 20.3, 19.9, 18.8, 18.4, 18.1, 17.7, 35.0, 30.1, 27.2, 24.9,
    23.1, 21.1,
];

#[test]
fn rotational_constants_give_tabulated_radii() {
    let isos = bundled_isotopologues();
    let measured: Vec<_> = bundled_table1()
        .into_iter()
        .filter(|r| r.b_rot_cm1().is_some())
        .collect();
    assert_eq!(measured.len(), TABLE_RADII.len());
    for (rec, &r_table) in measured.iter().zip(&TABLE_RADII) {
        let mu = isos.iter().find(|i| i.id == rec.isotopologue).unwrap().mu_au();
        let r = radius_from_b(rec.b_rot_cm1().unwrap(), mu).unwrap();
        assert!(
            (r - r_table).abs() <= 0.1,
            "{} dv {:?}: {r:.2} vs {r_table}",
            rec.isotopologue,
            rec.dv
        );
    }
}

fn dv8_components(delta_pa: f64) -> Vec<pafit::rotation::LineComponent> {
    let lvl = RotationalLevel::new(1.70e-3, 0.4e-3, 2, 2).unwrap();
    components(delta_pa, &lvl, &RotationConfig::default())
}

#[test]
fn nine_component_structure_is_recovered() {
    let nu = RotationConfig::default().nu_res;
    let comps = dv8_components(-1.938);
    assert_eq!(comps.len(), 9);
    let dips = dips_from_components(&comps, 0.09, nu);
    let spec = synthesize(&dips, &SpectrumConfig::new(-1.945, -1.920)).unwrap();
    let peaks = find_peaks(&spec, 0.01);
    let recovered = dips
        .iter()
        .filter(|d| peaks.iter().any(|p| (p.delta_pa - d.delta_pa).abs() <= 2e-5))
        .count();
    assert!(recovered >= 7, "{recovered} of 9");
}

#[test]
fn isolated_lines_are_recovered_for_every_shape() {
    for shape in [LineShape::Gaussian, LineShape::Lorentzian] {
        let dips = [
            Dip {
                delta_pa: -1.0003,
                depth: 0.3,
            },
            Dip {
                delta_pa: -0.99713,
                depth: 0.6,
            },
        ];
        let cfg = SpectrumConfig {
            line_shape: shape,
            ..SpectrumConfig::new(-1.002, -0.995)
        };
        let peaks = find_peaks(&synthesize(&dips, &cfg).unwrap(), 0.05);
        assert_eq!(peaks.len(), 2, "{shape:?}");
        for (p, d) in peaks.iter().zip(&dips) {
            assert!(
                (p.delta_pa - d.delta_pa).abs() <= 2e-5,
                "{shape:?}: {} vs {}",
                p.delta_pa,
                d.delta_pa
            );
        }
    }
}

#[test]
fn shifting_the_line_shifts_every_peak() {
    let nu = RotationConfig::default().nu_res;
    let shift = 0.01;
    let a = dips_from_components(&dv8_components(-1.938), 0.09, nu);
    let b = dips_from_components(&dv8_components(-1.938 + shift), 0.09, nu);
    let pa = find_peaks(
        &synthesize(&a, &SpectrumConfig::new(-1.945, -1.920)).unwrap(),
        0.01,
    );
    let pb = find_peaks(
        &synthesize(&b, &SpectrumConfig::new(-1.935, -1.910)).unwrap(),
        0.01,
    );
    assert_eq!(pa.len(), pb.len());
    for (x, y) in pa.iter().zip(&pb) {
        assert!((y.delta_pa - x.delta_pa - shift).abs() <= 1e-9);
        assert!((y.depth - x.depth).abs() <= 1e-9);
    }
}

#[test]
fn noisy_spectra_are_reproducible_per_seed() {
    let dips = [Dip {
        delta_pa: 0.0,
        depth: 0.4,
    }];
    let cfg = SpectrumConfig {
        noise_rms: 0.01,
        seed: 7,
        ..SpectrumConfig::new(-0.002, 0.002)
    };
    let a = synthesize(&dips, &cfg).unwrap();
    assert_eq!(a, synthesize(&dips, &cfg).unwrap());
    let other = synthesize(&dips, &SpectrumConfig { seed: 8, ..cfg }).unwrap();
    assert_ne!(a.signal, other.signal);
}

#[test]
fn csv_round_trips() {
    let comps = dv8_components(-1.938);
    assert_eq!(
        parse_components_csv(&write_components_csv(&comps)).unwrap(),
        comps
    );
    let nu = RotationConfig::default().nu_res;
    let spec = synthesize(
        &dips_from_components(&comps, 0.09, nu),
        &SpectrumConfig::new(-1.94, -1.93),
    )
    .unwrap();
    assert_eq!(parse_spectrum_csv(&write_spectrum_csv(&spec)).unwrap(), spec);
}
