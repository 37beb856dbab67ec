use graf::fit::{fit_circle_geometric, fit_circle_reduced, fit_conic_reweight, FitConfig, FitParams};
use graf::moments::MomentVector;
use graf::synth::{generate, SyntheticCurve, SyntheticSpec};

fn noisy_circle(a: f64, b: f64, r: f64, n: usize, seed: u64) -> Vec<(f64, f64)> {
    generate(&SyntheticSpec {
        curve: SyntheticCurve::Circle { a, b, r },
        n,
        sigma: 0.03,
        arc: None,
        seed,
    })
    .unwrap()
}

fn reduced(points: &[(f64, f64)]) -> [f64; 3] {
    let mv = MomentVector::from_points(4, points, 1).unwrap();
    fit_circle_reduced(&mv, &FitConfig::default())
        .unwrap()
        .params
        .circle()
        .unwrap()
        .as_array()
}

#[test]
fn reduced_fit_is_translation_equivariant() {
    let pts = noisy_circle(0.0, 0.0, 1.0, 300, 3);
    let base = reduced(&pts);
    let (dx, dy) = (250.0, -75.5);
    let moved: Vec<_> = pts.iter().map(|(x, y)| (x + dx, y + dy)).collect();
    let shifted = reduced(&moved);
    assert!((shifted[0] - dx - base[0]).abs() < 1e-9);
    assert!((shifted[1] - dy - base[1]).abs() < 1e-9);
    assert!((shifted[2] - base[2]).abs() < 1e-9);
}

#[test]
fn reduced_fit_is_rotation_equivariant() {
    let pts = noisy_circle(1.0, 0.5, 2.0, 300, 4);
    let base = reduced(&pts);
    let (s, c) = 1.1f64.sin_cos();
    let turned: Vec<_> = pts.iter().map(|(x, y)| (c * x - s * y, s * x + c * y)).collect();
    let got = reduced(&turned);
    let want = (c * base[0] - s * base[1], s * base[0] + c * base[1]);
    assert!((got[0] - want.0).abs() < 1e-9 && (got[1] - want.1).abs() < 1e-9);
    assert!((got[2] - base[2]).abs() < 1e-9);
}

#[test]
fn merged_moments_give_the_same_fit() {
    let pts = noisy_circle(-1.0, 2.0, 0.8, 1000, 5);
    let whole = reduced(&pts);
    let (left, right) = pts.split_at(337);
    let mut mv = MomentVector::from_points(4, left, 1).unwrap();
    mv.merge(&MomentVector::from_points(4, right, 1).unwrap())
        .unwrap();
    let merged = fit_circle_reduced(&mv, &FitConfig::default())
        .unwrap()
        .params
        .circle()
        .unwrap();
    for (a, b) in merged.as_array().iter().zip(&whole) {
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn reduced_fit_makes_one_data_pass() {
    let pts = noisy_circle(0.0, 0.0, 1.0, 200, 6);
    let mv = MomentVector::from_points(4, &pts, 1).unwrap();
    let fit = fit_circle_reduced(&mv, &FitConfig::default()).unwrap();
    assert_eq!(fit.data_passes, 1);
    let reweight = fit_conic_reweight(&pts, &FitConfig::default()).unwrap();
    // one pass per iteration plus the final objective and stationarity passes
    assert_eq!(reweight.data_passes, reweight.iterations + 2);
}

#[test]
fn geometric_fit_minimizes_orthogonal_distances() {
    let pts = noisy_circle(0.3, -0.2, 1.5, 150, 7);
    let fit = fit_circle_geometric(&pts, &FitConfig::default()).unwrap();
    let FitParams::Circle(c) = fit.params else {
        panic!("circle expected");
    };
    let cost = |a: f64, b: f64, r: f64| {
        pts.iter()
            .map(|(x, y)| ((x - a).hypot(y - b) - r).powi(2))
            .sum::<f64>()
    };
    let best = cost(c.a, c.b, c.r);
    for (da, db, dr) in [
        (1e-4, 0.0, 0.0),
        (0.0, -1e-4, 0.0),
        (0.0, 0.0, 1e-4),
        (-1e-4, 1e-4, -1e-4),
    ] {
        assert!(cost(c.a + da, c.b + db, c.r + dr) >= best);
    }
}
