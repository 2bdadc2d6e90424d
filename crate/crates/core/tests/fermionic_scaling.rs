use arealab_core::fermionic::{
    block_entropy, disorder_average, entropy_scan_2d, ground_state, halfspace_scan, periodic_chain_state,
    single_copy_entanglement, DisorderEnsemble, QuadraticFermionModel, XyParams,
};
use arealab_core::lattice::{Boundary, LatticeGraph, Region};
use arealab_core::numerics::SymmetricMatrix;
use arealab_core::numerics::{fit_log_scaling, DEFAULT_WINDOW};
use nalgebra::DMatrix;
use num_complex::Complex64;

fn window_sizes() -> Vec<usize> {
    (16..=128).step_by(8).collect()
}

fn fit(f: impl Fn(&Region) -> f64) -> f64 {
    let pts: Vec<(f64, f64)> = window_sizes().into_iter().map(|n| (n as f64, f(&Region::interval(0, n)))).collect();
    fit_log_scaling(&pts, DEFAULT_WINDOW).unwrap().slope
}

#[test]
fn xx_renyi_and_single_copy_slopes() {
    let s = XyParams::new(0.0, 0.0, 2048, Boundary::Periodic).unwrap().periodic_state();
    let vn = fit(|r| block_entropy(&s, r, 1.0).unwrap());
    let s2 = fit(|r| block_entropy(&s, r, 2.0).unwrap());
    let e1 = fit(|r| single_copy_entanglement(&s, r).unwrap().smooth);
    println!("XX slopes: S {vn:.4}, S2 {s2:.4}, E1 {e1:.4}, ratio {:.4}", e1 / vn);
    assert!((vn - 1.0 / 3.0).abs() < 0.02);
    assert!((s2 - 0.25).abs() < 0.03);
    assert!((e1 / vn - 0.5).abs() < 0.05);
}

#[test]
fn critical_and_gapped_ising() {
    let crit = XyParams::new(1.0, 1.0, 2048, Boundary::Periodic).unwrap().periodic_state();
    let slope = fit(|r| block_entropy(&crit, r, 1.0).unwrap());
    println!("Ising slope {slope:.4}");
    assert!((slope - 1.0 / 6.0).abs() < 0.02);
    let gapped = XyParams::new(1.0, 2.0, 2048, Boundary::Periodic).unwrap().periodic_state();
    let d = block_entropy(&gapped, &Region::interval(0, 128), 1.0).unwrap()
        - block_entropy(&gapped, &Region::interval(0, 64), 1.0).unwrap();
    assert!(d.abs() < 1e-3);
}

#[test]
fn doubling_fermi_points_doubles_slope() {
    // nearest-neighbour hopping has two Fermi points, next-nearest hopping four
    let one = periodic_chain_state(2050, |q| Complex64::new(-q.cos(), 0.0));
    let two = periodic_chain_state(2050, |q| Complex64::new(-(2.0 * q).cos(), 0.0));
    let s1 = fit(|r| block_entropy(&one, r, 1.0).unwrap());
    let s2 = fit(|r| block_entropy(&two, r, 1.0).unwrap());
    println!("jump slopes {s1:.4} {s2:.4}");
    assert!((s2 / s1 - 2.0).abs() < 0.2);
}

#[test]
fn two_dimensional_dichotomy() {
    let sides: Vec<usize> = (4..=12).collect();
    let g = LatticeGraph::cubic(32, 2, Boundary::Periodic).unwrap();
    let gapless = ground_state(&QuadraticFermionModel::hopping(g.clone(), 1.0, 0.05, 0.0).unwrap()).unwrap();
    let rows = entropy_scan_2d(&gapless, &g, &sides).unwrap();
    let ratios: Vec<f64> = rows.iter().map(|r| r.log_ratio).collect();
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    println!("gapless S/(n log n) in [{lo:.4}, {hi:.4}]");
    assert!(lo > 0.0 && hi / lo < 2.0);
    assert!(rows.windows(2).all(|w| w[1].per_side > w[0].per_side));

    let gapped = ground_state(&QuadraticFermionModel::hopping(g.clone(), 1.0, 0.0, 2.0).unwrap()).unwrap();
    let rows = entropy_scan_2d(&gapped, &g, &(2..=10).collect::<Vec<_>>()).unwrap();
    let per: Vec<f64> = rows.iter().map(|r| r.per_side).collect();
    let (lo, hi) = per.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    println!("gapped S/n in [{lo:.4}, {hi:.4}]");
    assert!(hi / lo < 1.2);
}

#[test]
fn halfspace_growth() {
    let critical = LatticeGraph::grid(&[256, 16], Boundary::Periodic).unwrap();
    let m = QuadraticFermionModel::hopping(critical, 1.0, 0.05, 0.0).unwrap();
    let cuts = [4usize, 8, 16, 32, 64];
    let pts: Vec<(f64, f64)> =
        halfspace_scan(&m, &cuts).unwrap().iter().zip(cuts).map(|(h, c)| (c as f64, h.per_boundary_site)).collect();
    let f = fit_log_scaling(&pts, (4.0, 64.0)).unwrap();
    println!("half-space slope per boundary site {:.4} (rms {:.3})", f.slope, f.residual);
    assert!(f.slope > 0.05);

    // potential staggered along the cut direction only keeps transverse invariance
    let gapped = LatticeGraph::grid(&[256, 16], Boundary::Periodic).unwrap();
    let mut a = QuadraticFermionModel::hopping(gapped.clone(), 1.0, 0.0, 0.0).unwrap().a().matrix().clone();
    for i in 0..gapped.vertex_count() {
        a[(i, i)] = if gapped.coords(i)[0].is_multiple_of(2) { 3.0 } else { -3.0 };
    }
    let n = gapped.vertex_count();
    let m = QuadraticFermionModel::new(gapped, SymmetricMatrix::symmetrized(a), DMatrix::zeros(n, n)).unwrap();
    let h = halfspace_scan(&m, &[32, 64]).unwrap();
    assert!((h[0].per_boundary_site - h[1].per_boundary_site).abs() < 1e-6);
}

#[test]
fn disorder_lowers_the_slope() {
    let sizes = window_sizes();
    let slope = |e: DisorderEnsemble, samples| {
        let rep = disorder_average(&e, 512, &sizes, samples, 7).unwrap();
        let pts: Vec<(f64, f64)> = rep.rows.iter().map(|r| (r.n as f64, r.mean)).collect();
        fit_log_scaling(&pts, DEFAULT_WINDOW).unwrap().slope
    };
    let clean = slope(DisorderEnsemble::RandomXx { low: 1.0, high: 1.0 }, 2);
    let dirty = slope(DisorderEnsemble::RandomXx { low: 0.5, high: 1.5 }, 8);
    println!("clean {clean:.4} disordered {dirty:.4}");
    assert!(dirty < clean);
}
