use inner_entropy_core::hypgeo::{hyperbolic_distance, mobius_apply, pseudo_hyperbolic};
use inner_entropy_core::DiskPoint;
use proptest::prelude::*;

fn point(max: f64) -> impl Strategy<Value = DiskPoint> {
    (0.0..max, 0.0..1.0f64).prop_map(|(r, t)| DiskPoint::from_polar(r, t))
}

proptest! {
    #[test]
    fn automorphisms_preserve_pseudo_distance(a in point(0.95), theta in 0.0..1.0f64, z in point(0.99), w in point(0.99)) {
        let before = pseudo_hyperbolic(z, w).unwrap();
        let after = pseudo_hyperbolic(mobius_apply(a, theta, z).unwrap(), mobius_apply(a, theta, w).unwrap()).unwrap();
        prop_assert!((before - after).abs() < 1e-12, "{} vs {}", before, after);
    }

    #[test]
    fn triangle_inequality(x in point(0.99), y in point(0.99), z in point(0.99)) {
        let xy = hyperbolic_distance(x, y).unwrap();
        let yz = hyperbolic_distance(y, z).unwrap();
        let xz = hyperbolic_distance(x, z).unwrap();
        prop_assert!(xz <= xy + yz + 1e-12);
    }

    #[test]
    fn twice_pseudo_distance_is_below_distance(z in point(0.999), w in point(0.999)) {
        let rho = pseudo_hyperbolic(z, w).unwrap();
        let d = hyperbolic_distance(z, w).unwrap();
        prop_assert!(2.0 * rho <= d + 1e-15);
    }
}

#[test]
fn radial_distance_from_origin() {
    for r in [0.1, 0.5, 0.9, 0.999] {
        let d = hyperbolic_distance(DiskPoint::ORIGIN, DiskPoint::new(r, 0.0)).unwrap();
        assert!((d - ((1.0 + r) / (1.0 - r)).ln()).abs() < 1e-13);
    }
}
