use graf::poly::{rat, RatPoly, RealPoly, SimilarityTransform};
use proptest::prelude::*;

fn small_poly() -> impl Strategy<Value = RatPoly> {
    prop::collection::vec((0u32..3, 0u32..3, -4i64..=4, 1i64..=3), 1..6)
        .prop_map(|terms| RatPoly::from_terms(terms.into_iter().map(|(p, q, n, d)| (p, q, rat(n, d)))))
}

proptest! {
    #[test]
    fn text_roundtrip(p in small_poly()) {
        let back: RatPoly = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn product_evaluates_pointwise(p in small_poly(), q in small_poly(), x in -2.0..2.0f64, y in -2.0..2.0f64) {
        let (pr, qr) = (p.to_real(), q.to_real());
        let lhs = (&p * &q).to_real().eval_real(x, y);
        let rhs = pr.eval_real(x, y) * qr.eval_real(x, y);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
    }

    #[test]
    fn transformed_zero_set_is_the_image(
        angle in -3.0..3.0f64,
        scale in 0.2..4.0f64,
        tx in -3.0..3.0f64,
        ty in -3.0..3.0f64,
        mirror: bool,
        t in 0.0..std::f64::consts::TAU,
    ) {
        // point on x² + 2y² − 2
        let p: RealPoly = "1 x^2 + 2 y^2 - 2".parse().unwrap();
        let tr = SimilarityTransform::new(angle, scale, (tx, ty), mirror).unwrap();
        let (x, y) = (2f64.sqrt() * t.cos(), t.sin());
        let (u, v) = tr.apply_point(x, y);
        let moved = p.apply_transform(&tr);
        prop_assert!(moved.eval_real(u, v).abs() < 1e-9);
    }

    #[test]
    fn gradient_norm_scales_under_similarity(angle in -3.0..3.0f64, scale in 0.2..4.0f64, x in -2.0..2.0f64, y in -2.0..2.0f64) {
        // |∇P̃|² at T(u) equals |∇P|² at u divided by scale²
        let p: RealPoly = "1 x^3 - 2 x y + 1 y^2 - 1".parse().unwrap();
        let tr = SimilarityTransform::new(angle, scale, (0.5, -1.0), false).unwrap();
        let (u, v) = tr.apply_point(x, y);
        let q = p.gradient_norm_squared().eval_real(x, y);
        let qt = p.apply_transform(&tr).gradient_norm_squared().eval_real(u, v);
        prop_assert!((qt * scale * scale - q).abs() <= 1e-8 * (1.0 + q));
    }
}

#[test]
fn exact_rotation_keeps_circles_circles() {
    let p: RatPoly = "1 x^2 + 1 y^2 - 4".parse().unwrap();
    let moved = p.apply_transform(&SimilarityTransform::new(0.7, 1.5, (1.0, 2.0), true).unwrap());
    assert_eq!(moved.coeff(1, 1), rat(0, 1));
    assert_eq!(moved.coeff(2, 0), moved.coeff(0, 2));
}
