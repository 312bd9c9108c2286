use qgraph_core::diophantine::dirichlet_simultaneous;
use qgraph_core::floquet::{
    in_spectrum, min_abs_secular, momentum_period, scan_bands, secular, PeriodicCellGraph, SpectrumOptions,
};
use qgraph_core::lattice::{gap_condition, predict_gap_count_golden, scan_gaps, GapCount, LatticeParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn in_spectrum_agrees_with_gap_condition_on_random_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let opts = SpectrumOptions { parallel: false, ..Default::default() };
    let mut checked = 0;
    while checked < 200 {
        let a = rng.gen_range(0.5..2.0);
        let b = rng.gen_range(0.5..2.0);
        let alpha = if rng.gen_bool(0.5) { 1.0 } else { -1.0 } * rng.gen_range(0.5..20.0);
        let k = rng.gen_range(0.2..12.0);
        let p = LatticeParams::new(a, b, alpha).unwrap();
        let (holds, margin) = gap_condition(k, &p).unwrap();
        // Stay away from band edges.
        let near_edge = [-1e-3, 1e-3].iter().any(|d| gap_condition(k + d, &p).unwrap().0 != holds);
        if near_edge || margin.abs() < 1e-6 {
            continue;
        }
        let g = PeriodicCellGraph::rectangular_lattice(a, b, alpha).unwrap();
        assert_eq!(in_spectrum(&g, k, &opts).unwrap(), !holds, "a {a}, b {b}, alpha {alpha}, k {k}, margin {margin}");
        checked += 1;
    }
}

#[test]
fn golden_lattice_gap_is_where_secular_stays_away_from_zero() {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let p = LatticeParams::new(1.0, 1.0 / phi, -4.35).unwrap();
    assert_eq!(predict_gap_count_golden(-4.35, 1.0).unwrap(), GapCount::Finite(1));
    let gaps = scan_gaps(&p, 60.0, 1e-13).unwrap();
    assert_eq!(gaps.len(), 1);
    let gap = gaps[0];
    let g = PeriodicCellGraph::rectangular_lattice(p.a, p.b, p.alpha).unwrap();
    let opts = SpectrumOptions { parallel: false, ..Default::default() };
    let eps = opts.eps_for(&g);
    let width = gap.k_hi - gap.k_lo;
    for t in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let k = gap.k_lo + t * width;
        assert!(min_abs_secular(&g, k, &opts).unwrap().value > eps, "k = {k}");
    }
    for k in [gap.k_lo - 0.05, gap.k_hi + 0.05, 0.5 * gap.k_lo] {
        assert!(in_spectrum(&g, k, &opts).unwrap(), "k = {k}");
    }
}

#[test]
fn band_scan_of_golden_lattices() {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let opts = SpectrumOptions::default();
    // Repulsive coupling below the threshold: nothing but the region under the spectrum.
    let g = PeriodicCellGraph::rectangular_lattice(phi, 1.0, 2.0).unwrap();
    let bands = scan_bands(&g, 0.02, 50.0, 0.02, &opts).unwrap();
    assert!(bands.iter().all(|b| !b.certified), "{bands:?}");
    assert!(bands.iter().all(|b| b.k_lo == 0.02));
    // Attractive coupling with exactly one gap.
    let g = PeriodicCellGraph::rectangular_lattice(1.0, 1.0 / phi, -4.35).unwrap();
    let bands = scan_bands(&g, 0.02, 30.0, 0.02, &opts).unwrap();
    assert_eq!(bands.len(), 1, "{bands:?}");
    let closed = scan_gaps(&LatticeParams::new(1.0, 1.0 / phi, -4.35).unwrap(), 30.0, 1e-13).unwrap();
    assert!((bands[0].k_lo - closed[0].k_lo).abs() < 1e-6);
    assert!((bands[0].k_hi - closed[0].k_hi).abs() < 1e-6);
}

#[test]
fn parallel_and_serial_scans_agree() {
    let g = PeriodicCellGraph::rectangular_lattice(1.0, 0.7, 6.0).unwrap();
    let serial = SpectrumOptions { parallel: false, ..Default::default() };
    let parallel = SpectrumOptions { parallel: true, ..Default::default() };
    let a = scan_bands(&g, 0.1, 12.0, 0.05, &serial).unwrap();
    let b = scan_bands(&g, 0.1, 12.0, 0.05, &parallel).unwrap();
    assert_eq!(a, b);
}

/// The step in the paper's argument for infinitely many gaps: shifting `k` by
/// `2 pi m q / l0` with a simultaneous Dirichlet approximation of the length
/// ratios changes `F` only slightly, uniformly in `theta`.
#[test]
fn dirichlet_shift_keeps_secular_values_close() {
    let lengths = [1.0, 2f64.sqrt(), 3f64.sqrt()];
    let g = PeriodicCellGraph::from_json(&format!(
        r#"{{"nu": 2,
            "vertices": [{{"id": "u", "coupling": {{"type": "delta", "alpha": 3.0}}}},
                         {{"id": "w", "coupling": {{"type": "delta", "alpha": -2.0}}}}],
            "edges": [{{"id": "e0", "from": "u", "to": "w", "length": {}, "z": [0, 0]}},
                      {{"id": "e1", "from": "w", "to": "u", "length": {}, "z": [1, 0]}},
                      {{"id": "e2", "from": "w", "to": "u", "length": {}, "z": [0, 1]}}]}}"#,
        lengths[0], lengths[1], lengths[2]
    ))
    .unwrap();
    let ratios: Vec<f64> = lengths[1..].iter().map(|l| l / lengths[0]).collect();
    let n = 1_000_000;
    let hit = dirichlet_simultaneous(&ratios, n).unwrap();
    // Start high enough that the couplings' 1/k corrections are small.
    let k = 300.3;
    let shift = 2.0 * std::f64::consts::PI * hit.q as f64 / lengths[0];
    let detuned = shift + 1.1;
    let mut worst: f64 = 0.0;
    let mut baseline: f64 = 0.0;
    for i in 0..8 {
        for j in 0..8 {
            let theta = [-3.0 + 0.75 * i as f64, -3.0 + 0.75 * j as f64];
            let a = secular(&g, k, &theta).unwrap();
            let b = secular(&g, k + shift, &theta).unwrap();
            let c = secular(&g, k + detuned, &theta).unwrap();
            worst = worst.max((a - b).norm());
            baseline = baseline.max((a - c).norm());
        }
    }
    // Phases move by at most 2 pi / sqrt(n) and the 1/k terms shrink.
    println!("worst {worst}, baseline {baseline}");
    assert!(worst < 0.2 * baseline, "worst change {worst}, generic change {baseline}");
    assert!(momentum_period(&g).is_none());
}
