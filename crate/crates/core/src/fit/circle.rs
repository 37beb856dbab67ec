use nalgebra::{DMatrix, DVector, Matrix3, SymmetricEigen, Vector3};

use super::{
    damped_newton, newton_direction, CircleParams, FitConfig, FitError, FitParams, FitResult, Initializer,
    Local,
};
use crate::moments::{CircleStats, MomentVector};

/// Value, gradient and Hessian of the reduced circle objective in `(a, b, R)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircleObjective {
    pub value: f64,
    pub gradient: [f64; 3],
    pub hessian: [[f64; 3]; 3],
}

/// `F(a, b, R) = R⁻² [z₁ + a z₂ + b z₃ + a² z₄ + b² z₅ + ab z₆ + c z₇ + ac z₈
/// + bc z₉ + c² n]` with `c = a² + b² − R²`, which equals
/// `Σ R⁻² ((xᵢ − a)² + (yᵢ − b)² − R²)²`.
///
/// `params` are in data coordinates; they are shifted into the frame of
/// `stats.origin` before evaluation. The cost does not depend on `n`.
pub fn eval_fa_circle(stats: &CircleStats, params: &CircleParams) -> Result<CircleObjective, FitError> {
    let r = params.r;
    if !(r > 0.0) || !r.is_finite() {
        return Err(FitError::InvalidRadius(r));
    }
    let [z1, z2, z3, z4, z5, z6, z7, z8, z9] = stats.z;
    let n = stats.n;
    let a = params.a - stats.origin.0;
    let b = params.b - stats.origin.1;
    let c = a * a + b * b - r * r;

    // G(a, b, c): the bracket with c treated as independent.
    let g = z1
        + a * z2
        + b * z3
        + a * a * z4
        + b * b * z5
        + a * b * z6
        + c * z7
        + a * c * z8
        + b * c * z9
        + c * c * n;
    let g_a = z2 + 2.0 * a * z4 + b * z6 + c * z8;
    let g_b = z3 + 2.0 * b * z5 + a * z6 + c * z9;
    let g_c = z7 + a * z8 + b * z9 + 2.0 * c * n;
    let (g_aa, g_bb, g_ab, g_ac, g_bc, g_cc) = (2.0 * z4, 2.0 * z5, z6, z8, z9, 2.0 * n);

    // H(a, b, R) = G(a, b, a² + b² − R²)
    let h_a = g_a + 2.0 * a * g_c;
    let h_b = g_b + 2.0 * b * g_c;
    let h_r = -2.0 * r * g_c;
    let h_aa = g_aa + 4.0 * a * g_ac + 4.0 * a * a * g_cc + 2.0 * g_c;
    let h_bb = g_bb + 4.0 * b * g_bc + 4.0 * b * b * g_cc + 2.0 * g_c;
    let h_ab = g_ab + 2.0 * b * g_ac + 2.0 * a * g_bc + 4.0 * a * b * g_cc;
    let h_ar = -2.0 * r * (g_ac + 2.0 * a * g_cc);
    let h_br = -2.0 * r * (g_bc + 2.0 * b * g_cc);
    let h_rr = 4.0 * r * r * g_cc - 2.0 * g_c;

    // F = u H with u = R⁻²
    let u = 1.0 / (r * r);
    let u_r = -2.0 * u / r;
    let u_rr = 6.0 * u * u;
    let value = u * g;
    let gradient = [u * h_a, u * h_b, u * h_r + u_r * g];
    let f_ar = u * h_ar + u_r * h_a;
    let f_br = u * h_br + u_r * h_b;
    let f_rr = u * h_rr + 2.0 * u_r * h_r + u_rr * g;
    let hessian = [
        [u * h_aa, u * h_ab, f_ar],
        [u * h_ab, u * h_bb, f_br],
        [f_ar, f_br, f_rr],
    ];
    Ok(CircleObjective {
        value,
        gradient,
        hessian,
    })
}

/// Algebraic circle fit: least squares for `x² + y² + αx + βy + γ ≈ 0`,
/// from the normal equations assembled out of moments up to degree 3.
pub fn kasa_init(mv: &MomentVector) -> Result<CircleParams, FitError> {
    if mv.count() < 3 {
        return Err(FitError::TooFewPoints {
            needed: 3,
            got: mv.count(),
        });
    }
    if mv.degree() < 3 {
        return Err(FitError::DegreeMismatch {
            needed: 3,
            found: mv.degree(),
        });
    }
    let m = |p, q| mv.moment(p, q);
    let normal = Matrix3::new(
        m(2, 0),
        m(1, 1),
        m(1, 0),
        m(1, 1),
        m(0, 2),
        m(0, 1),
        m(1, 0),
        m(0, 1),
        m(0, 0),
    );
    let rhs = -Vector3::new(m(3, 0) + m(1, 2), m(2, 1) + m(0, 3), m(2, 0) + m(0, 2));
    let eig = SymmetricEigen::new(normal).eigenvalues;
    let (lo, hi) = (eig.min(), eig.amax());
    if !(lo > 1e-12 * hi) {
        return Err(FitError::DegenerateData(
            "points are collinear or coincide; no circle through them".into(),
        ));
    }
    let sol = normal
        .cholesky()
        .ok_or_else(|| FitError::DegenerateData("singular normal equations".into()))?
        .solve(&rhs);
    let (a, b) = (-sol[0] / 2.0, -sol[1] / 2.0);
    let r2 = a * a + b * b - sol[2];
    if !(r2 > 0.0) {
        return Err(FitError::ImaginaryRadius(r2));
    }
    let (ox, oy) = mv.origin();
    CircleParams::new(a + ox, b + oy, r2.sqrt())
}

fn local(stats: &CircleStats, x: &DVector<f64>) -> Option<Local> {
    let p = CircleParams {
        a: x[0],
        b: x[1],
        r: x[2],
    };
    let obj = eval_fa_circle(stats, &p).ok()?;
    Some(Local {
        f: obj.value,
        g: DVector::from_row_slice(&obj.gradient),
        h: DMatrix::from_fn(3, 3, |i, j| obj.hessian[i][j]),
    })
}

fn initial_circle(mv: &MomentVector, cfg: &FitConfig) -> Result<CircleParams, FitError> {
    match &cfg.init {
        Initializer::Default => kasa_init(mv),
        Initializer::Params(v) if v.len() == 3 => CircleParams::new(v[0], v[1], v[2]),
        Initializer::Params(v) => Err(FitError::InvalidInit(format!(
            "a circle takes 3 parameters, got {}",
            v.len()
        ))),
    }
}

/// Minimizes the reduced circle objective by damped Newton steps on
/// `(a, b, R)`, starting from [`kasa_init`] unless `cfg.init` says otherwise.
///
/// Only the moments are read, so the cost after accumulation does not depend
/// on the number of points.
pub fn fit_circle_reduced(mv: &MomentVector, cfg: &FitConfig) -> Result<FitResult, FitError> {
    cfg.validate()?;
    let stats = mv.circle_z_view()?;
    let init = initial_circle(mv, cfg)?;
    let x0 = DVector::from_row_slice(&init.as_array());
    let out = damped_newton(x0, cfg, |x, _| local(&stats, x))?;
    Ok(FitResult {
        params: FitParams::Circle(CircleParams {
            a: out.x[0],
            b: out.x[1],
            r: out.x[2],
        }),
        objective: out.f,
        iterations: out.iterations,
        converged: out.converged,
        iteration_times: out.times,
        data_passes: 1,
        gradient_norm: out.gradient_norm,
        stationarity_residual: None,
    })
}

/// One undamped Newton step of the reduced circle fit, the unit of work the
/// complexity benchmark times.
pub fn reduced_circle_iteration(
    stats: &CircleStats,
    params: &CircleParams,
) -> Result<CircleParams, FitError> {
    let x = DVector::from_row_slice(&params.as_array());
    let l = local(stats, &x).ok_or(FitError::InvalidRadius(params.r))?;
    let p = newton_direction(&l.h, &l.g)
        .ok_or_else(|| FitError::NumericalFailure("no Newton direction".into()))?;
    let next = x + p;
    Ok(CircleParams {
        a: next[0],
        b: next[1],
        r: next[2].abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stats_of(points: &[(f64, f64)]) -> CircleStats {
        let mut mv = MomentVector::new(4);
        mv.extend(points.iter().copied()).unwrap();
        mv.circle_z_view().unwrap()
    }

    fn direct(points: &[(f64, f64)], p: &CircleParams) -> f64 {
        points
            .iter()
            .map(|(x, y)| ((x - p.a).powi(2) + (y - p.b).powi(2) - p.r * p.r).powi(2))
            .sum::<f64>()
            / (p.r * p.r)
    }

    fn circle_points(c: &CircleParams, n: usize) -> Vec<(f64, f64)> {
        (0..n)
            .map(|i| {
                let t = i as f64 * std::f64::consts::TAU / n as f64;
                (c.a + c.r * t.cos(), c.b + c.r * t.sin())
            })
            .collect()
    }

    #[test]
    fn single_point_example() {
        let stats = stats_of(&[(2.0, 0.0)]);
        assert_eq!(stats.z[0], 16.0);
        assert_eq!(stats.z[1], -32.0);
        assert_eq!(stats.z[3], 16.0);
        assert_eq!(stats.z[6], 8.0);
        assert_eq!(stats.z[7], -8.0);
        let obj = eval_fa_circle(&stats, &CircleParams::new(0.0, 0.0, 1.0).unwrap()).unwrap();
        assert_eq!(obj.value, 9.0);
    }

    #[test]
    fn zero_on_exact_points() {
        let c = CircleParams::new(1.0, -2.0, 3.0).unwrap();
        let obj = eval_fa_circle(&stats_of(&circle_points(&c, 12)), &c).unwrap();
        assert!(obj.value.abs() < 1e-10);
    }

    #[test]
    fn invalid_radius() {
        let stats = stats_of(&[(1.0, 0.0)]);
        let bad = CircleParams {
            a: 0.0,
            b: 0.0,
            r: 0.0,
        };
        assert!(matches!(
            eval_fa_circle(&stats, &bad),
            Err(FitError::InvalidRadius(_))
        ));
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let pts = [(0.3, 1.2), (-1.0, 0.4), (2.2, -0.7), (0.9, 0.9), (-0.4, -1.5)];
        let stats = stats_of(&pts);
        let p = CircleParams::new(0.2, -0.1, 1.3).unwrap();
        let obj = eval_fa_circle(&stats, &p).unwrap();
        let h = 1e-5;
        for j in 0..3 {
            let mut up = p.as_array();
            let mut dn = p.as_array();
            up[j] += h;
            dn[j] -= h;
            let at = |v: [f64; 3]| {
                eval_fa_circle(
                    &stats,
                    &CircleParams {
                        a: v[0],
                        b: v[1],
                        r: v[2],
                    },
                )
                .unwrap()
            };
            let fd = (at(up).value - at(dn).value) / (2.0 * h);
            assert!((fd - obj.gradient[j]).abs() <= 1e-6 * (1.0 + fd.abs()));
            for k in 0..3 {
                let fd2 = (at(up).gradient[k] - at(dn).gradient[k]) / (2.0 * h);
                assert!((fd2 - obj.hessian[j][k]).abs() <= 1e-5 * (1.0 + fd2.abs()));
            }
            assert!((obj.value - direct(&pts, &p)).abs() <= 1e-12 * obj.value);
        }
    }

    #[test]
    fn kasa_circumcircle() {
        // Circumcenter of (0,0), (4,0), (0,2): perpendicular bisectors x = 2, y = 1.
        let mut mv = MomentVector::new(4);
        mv.extend([(0.0, 0.0), (4.0, 0.0), (0.0, 2.0)]).unwrap();
        let c = kasa_init(&mv).unwrap();
        assert!((c.a - 2.0).abs() < 1e-12);
        assert!((c.b - 1.0).abs() < 1e-12);
        assert!((c.r - 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn kasa_collinear_rejected() {
        let mut mv = MomentVector::centered(4);
        mv.extend((0..10).map(|i| (i as f64, 2.0 * i as f64 - 1.0)))
            .unwrap();
        assert!(matches!(kasa_init(&mv), Err(FitError::DegenerateData(_))));
        let mut two = MomentVector::new(4);
        two.extend([(0.0, 0.0), (1.0, 1.0)]).unwrap();
        assert!(matches!(kasa_init(&two), Err(FitError::TooFewPoints { .. })));
    }

    #[test]
    fn reduced_fit_recovers_exact_circle() {
        let truth = CircleParams::new(1.0, -2.0, 3.0).unwrap();
        let mut mv = MomentVector::centered(4);
        mv.extend(circle_points(&truth, 20)).unwrap();
        let fit = fit_circle_reduced(&mv, &FitConfig::default()).unwrap();
        let c = fit.params.circle().unwrap();
        assert!(fit.converged);
        assert!((c.a - 1.0).abs() < 1e-9 && (c.b + 2.0).abs() < 1e-9 && (c.r - 3.0).abs() < 1e-9);
        assert_eq!(fit.data_passes, 1);
    }

    #[test]
    fn reduced_fit_descends_from_a_poor_start() {
        let pts: Vec<(f64, f64)> = (0..30)
            .map(|i| {
                let t = i as f64 * 0.2;
                (
                    2.0 * t.cos() + 0.05 * (7.0 * t).sin(),
                    2.0 * t.sin() + 0.05 * (5.0 * t).cos(),
                )
            })
            .collect();
        let mut mv = MomentVector::centered(4);
        mv.extend(pts.iter().copied()).unwrap();
        let cfg = FitConfig {
            init: Initializer::Params(vec![0.7, -0.4, 3.5]),
            ..FitConfig::default()
        };
        let fit = fit_circle_reduced(&mv, &cfg).unwrap();
        let kasa = fit_circle_reduced(&mv, &FitConfig::default()).unwrap();
        assert!(fit.converged);
        let (c, k) = (fit.params.circle().unwrap(), kasa.params.circle().unwrap());
        assert!((c.a - k.a).abs() < 1e-8 && (c.r - k.r).abs() < 1e-8);
        assert!((fit.objective - direct(&pts, &c)).abs() <= 1e-9 * fit.objective);
    }
}
