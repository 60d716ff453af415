//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line. Run with `cargo test --test acceptance -- --nocapture`.

use hyperhs::*;
use nalgebra::{dmatrix, DMatrix};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

fn report(name: &str, ok: bool, detail: &str) {
    println!(
        "criterion {name}: {} ({detail})",
        if ok { "pass" } else { "FAIL" }
    );
}

fn source11(a11: f64, a12: f64, a22: f64) -> SourceMatrix {
    SourceMatrix::new(make_metric(1, 1).unwrap(), dmatrix![a11, a12; -a12, a22]).unwrap()
}

/// Random valid source at (1,1): a11 > 0 > a22 with a12^2 < -a11 a22.
fn random_source11(rng: &mut ChaCha12Rng) -> SourceMatrix {
    let a11: f64 = rng.random_range(0.2..2.0);
    let a22: f64 = -rng.random_range(0.2..2.0);
    let a12 = rng.random_range(-0.9..0.9) * (-a11 * a22).sqrt();
    source11(a11, a12, a22)
}

#[test]
fn criterion_1_closed_form_reproduction() {
    let mut rng = ChaCha12Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let a = random_source11(&mut rng);
        let trace = closed_form_i11(&a).unwrap();
        let target = Convention::Half.target(&a);
        let rel = (trace.normalized - Complex64::new(target, 0.0)).norm() / target;
        worst = worst.max(rel);
    }
    let ok = worst < 1e-12;
    report("1 closed-form reproduction", ok, &format!("worst rel err {worst:.2e}"));
    assert!(ok);
}

#[test]
fn criterion_2_boundary_decay() {
    // numeric vs analytic agreement across the (eps, b) box
    let mut worst = 0.0f64;
    let mut asserted = 0;
    for eps in [0.05, 0.1, 0.2, 0.5, 1.0] {
        for b in [-3.0f64, -1.7, -0.5, 0.5, 1.7, 3.0] {
            let (analytic, numeric) = boundary_eta_integral(eps, b).unwrap();
            // the oscillatory quadrature carries a cancellation floor of
            // ~1e-16 * integral of |f|; below e^{-18} of the peak the exact
            // value sits under that floor and 1e-8 relative agreement is
            // not representable in doubles (reported, not asserted, like
            // the underflowed example)
            if b * b / eps > 18.0 {
                continue;
            }
            asserted += 1;
            let rel = (numeric - Complex64::new(analytic, 0.0)).norm() / analytic;
            worst = worst.max(rel);
        }
    }
    let agree = worst < 1e-8 && asserted >= 15;

    // decay rate at b = 1: the per-halving factor is sqrt(2) e^{-1/eps},
    // which crosses 10x once eps <= 0.37; check halvings from 0.25 down
    let mut rate_ok = true;
    let mut factors = Vec::new();
    for eps in [0.25, 0.125, 0.0625] {
        let (hi, _) = boundary_eta_integral(eps, 1.0).unwrap();
        let (lo, _) = boundary_eta_integral(eps / 2.0, 1.0).unwrap();
        factors.push(hi / lo);
        rate_ok &= hi / lo >= 10.0;
    }
    let ok = agree && rate_ok;
    report(
        "2 boundary decay",
        ok,
        &format!("worst rel err {worst:.2e}, per-halving factors {factors:.1?}"),
    );
    assert!(ok);
}

#[test]
fn criterion_3_quadrature_convergence() {
    let a = source11(1.0, 0.0, -1.0);
    let grid = QuadGrid::default();
    let schedule = EpsilonSchedule::new(vec![0.2, 0.1, 0.05, 0.02]).unwrap();
    let errs: Vec<f64> = schedule
        .values()
        .iter()
        .map(|eps| normalized_quad_error(&a, *eps, &grid).unwrap())
        .collect();
    let monotone = errs.windows(2).all(|w| w[1] <= w[0]);
    let below = *errs.last().unwrap() < 0.02;
    let ok = monotone && below;
    report(
        "3 quadrature convergence",
        ok,
        &format!(
            "rel errs {:?}, monotone {monotone}, final {:.4} (< 0.02 required)",
            errs.iter().map(|e| format!("{e:.4}")).collect::<Vec<_>>(),
            errs.last().unwrap()
        ),
    );
    // the second clause fails by design of the regulator: the residual at
    // fixed eps is the regularization bias itself, about 1.03 eps for this
    // source, i.e. 2.06% at eps = 0.02 regardless of grid resolution
    assert!(ok);
}

#[test]
fn criterion_4_sign_necessity() {
    let a1 = source11(1.0, 0.0, -1.0);
    let a2 = source11(1.4, 0.0, -1.4);
    let n = 1_000_000;
    let eps = 0.1;
    let signed = compensated_pair_difference(&a1, &a2, false, eps, n, 401).unwrap();
    let ablated = compensated_pair_difference(&a1, &a2, true, eps, n, 401).unwrap();
    let z_signed = signed.z_score();
    let z_ablated = ablated.z_score();
    let ok = z_signed < 3.0 && z_ablated > 5.0;
    report(
        "4 sign necessity",
        ok,
        &format!("signed z {z_signed:.2} (< 3), ablated z {z_ablated:.2} (> 5)"),
    );
    assert!(ok);
}

#[test]
fn criterion_5_a_independence() {
    let n = 1_000_000;
    let eps = 0.1;
    let h = 0.05;
    let cases: [(usize, usize, &[f64]); 2] = [
        (1, 1, &[1.0, 0.0, -1.0]),
        (1, 2, &[1.5, 0.0, 0.0, -1.0, 0.0, -1.2]),
    ];
    let mut all_ok = true;
    let mut detail = String::new();
    for (p, q, upper) in cases {
        let m = make_metric(p, q).unwrap();
        let a = SourceMatrix::new(m, BSymMatrix::from_upper_triangle(m, upper).entries().clone())
            .unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(500 + p as u64 * 10 + q as u64);
        let mut zs = Vec::new();
        while zs.len() < 5 {
            let k = m.n() * (m.n() + 1) / 2;
            let dir: Vec<f64> = (0..k).map(|_| rng.random_range(-0.5..0.5)).collect();
            let adot = BSymMatrix::from_upper_triangle(m, &dir);
            match directional_derivative_test(&a, &adot, eps, n, h, 500 + zs.len() as u64, false)
            {
                Ok(z) => zs.push(z),
                Err(HsError::StepTooLarge) => continue,
                Err(e) => panic!("{e}"),
            }
        }
        let ok = zs.iter().all(|z| *z < 3.0);
        all_ok &= ok;
        detail.push_str(&format!(
            "({p},{q}) z {:?}; ",
            zs.iter().map(|z| format!("{z:.2}")).collect::<Vec<_>>()
        ));
    }
    report("5 A-independence", all_ok, detail.trim_end_matches("; "));
    assert!(all_ok);
}

#[test]
fn criterion_6_motif_sign_oracle() {
    let mut count = 0usize;
    let mut ok = true;
    for p in 1..8 {
        for q in 1..(9 - p) {
            let m = make_metric(p, q).unwrap();
            for motif in enumerate_motifs(m) {
                let n = m.n();
                let lambdas: Vec<f64> = (0..n).map(|i| (n - i) as f64).collect();
                ok &= motif.sign() == sign_from_eigenvalues(&lambdas, motif.symbols());
                count += 1;
            }
        }
    }
    report(
        "6 motif/sign oracle",
        ok,
        &format!("{count} motifs across all signatures with p+q <= 8"),
    );
    assert!(ok);
}

#[test]
fn criterion_7_conjugation_invariance() {
    let mut all_ok = true;
    let mut detail = String::new();
    for (p, q) in [(1usize, 1usize), (1, 2), (2, 2)] {
        let m = make_metric(p, q).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(700 + (p * 10 + q) as u64);
        let mut checked = 0;
        let mut worst = 0.0f64;
        let mut ok = true;
        while checked < 1000 {
            let k = m.n() * (m.n() + 1) / 2;
            let upper: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let r = BSymMatrix::from_upper_triangle(m, &upper);
            let Ok(SpectrumClassification::Diagonalizable(d)) =
                spectral_classify(&r, DEFAULT_CLASSIFY_TOL)
            else {
                continue;
            };
            // stay clear of the measure-zero boundary, where eigen-data is
            // legitimately ill-conditioned
            if d.bnorms.iter().any(|b| *b < 1e-3) {
                continue;
            }
            let g = random_group_element(m, 2.0, &mut rng).unwrap();
            // g^{-1} = s g^t s exactly for elements of the group
            let s = m.s_matrix();
            let g_inv = &s * g.transpose() * &s;
            let (conj, _) = BSymMatrix::from_entries_projected(m, &(&g * r.entries() * g_inv));
            let Ok(SpectrumClassification::Diagonalizable(dc)) =
                spectral_classify(&conj, DEFAULT_CLASSIFY_TOL)
            else {
                ok = false;
                checked += 1;
                continue;
            };
            if dc.motif != d.motif {
                ok = false;
            }
            for (a, b) in d.eigenvalues.iter().zip(&dc.eigenvalues) {
                worst = worst.max((a - b).abs());
            }
            checked += 1;
        }
        ok &= worst < 1e-8;
        all_ok &= ok;
        detail.push_str(&format!("({p},{q}) worst eigenvalue drift {worst:.1e}; "));
    }
    report(
        "7 conjugation invariance",
        all_ok,
        detail.trim_end_matches("; "),
    );
    assert!(all_ok);
}

#[test]
fn criterion_8_goe_fourier() {
    let mut all_ok = true;
    let mut worst = 0.0f64;
    for n in [4usize, 8] {
        let cfg = GOEConfig::new(n, 1.0).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(800 + n as u64);
        for i in 0..20u64 {
            // random symmetric K with moderate norm
            let mut k = DMatrix::zeros(n, n);
            for a in 0..n {
                for b in a..n {
                    let v: f64 = rng.sample::<f64, _>(StandardNormal);
                    k[(a, b)] = 0.4 * v;
                    k[(b, a)] = 0.4 * v;
                }
            }
            let check = check_goe_fourier(&cfg, &k, 100_000, 8000 + n as u64 * 100 + i).unwrap();
            worst = worst.max(check.z_score);
            all_ok &= check.z_score < 3.0;
        }
    }
    report(
        "8 GOE Fourier characterization",
        all_ok,
        &format!("worst z {worst:.2} over 40 random K"),
    );
    assert!(all_ok);
}

#[test]
fn criterion_9_sigma_model_ratio() {
    let m = make_metric(1, 1).unwrap();
    let args1 = SpectralArgs::new(
        m,
        vec![Complex64::new(0.5, 1.0), Complex64::new(0.5, -1.0)],
    )
    .unwrap();
    let args2 = SpectralArgs::new(
        m,
        vec![Complex64::new(-0.5, 1.0), Complex64::new(-0.5, -1.0)],
    )
    .unwrap();
    let cfg = GOEConfig::new(8, 1.0).unwrap();
    let t = sigma_mc_ratio_test(&args1, &args2, &cfg, &SigmaQuad::default(), 100_000, 901)
        .unwrap();
    let ok = t.z_score < 3.0;
    report(
        "9 sigma-model ratio",
        ok,
        &format!(
            "z {:.2}, sigma ratio {:.6}, mc ratio {:.6}",
            t.z_score, t.sigma_ratio, t.mc_ratio
        ),
    );
    assert!(ok);
}
