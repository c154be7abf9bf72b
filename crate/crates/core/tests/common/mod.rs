#![allow(dead_code)]

use inner_entropy_core::innerfn::BlaschkeFactor;
use inner_entropy_core::measures::{Atom, AtomAngle, DyadicTree};
use inner_entropy_core::{DiskPoint, InnerFunctionSpec, SingularMeasure};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_point(rng: &mut ChaCha8Rng, max_modulus: f64) -> DiskPoint {
    let r = max_modulus * rng.gen::<f64>().sqrt();
    DiskPoint::from_polar(r, rng.gen::<f64>())
}

/// Blaschke product with a zero at the origin and `extra` zeros of modulus at most `max_modulus`.
pub fn blaschke_through_origin(rng: &mut ChaCha8Rng, extra: usize, max_modulus: f64) -> InnerFunctionSpec {
    let mut zeros = vec![DiskPoint::ORIGIN];
    zeros.extend((0..extra).map(|_| random_point(rng, max_modulus)));
    InnerFunctionSpec::blaschke(&zeros).unwrap()
}

pub fn random_atoms(rng: &mut ChaCha8Rng, count: usize) -> SingularMeasure {
    let atoms = (0..count)
        .map(|_| Atom {
            angle: AtomAngle::ratio(rng.gen_range(0..1024), 1024),
            mass: rng.gen_range(0.05..1.0),
        })
        .collect();
    SingularMeasure::new(atoms, None).unwrap()
}

/// A mixed spec: two zeros, one atom and a coarse dyadic tree.
pub fn mixed_spec() -> InnerFunctionSpec {
    let tree = DyadicTree::new(3, vec![0.0, 0.2, 0.0, 0.0, 0.1, 0.0, 0.05, 0.0]).unwrap();
    let mu = SingularMeasure::new(
        vec![Atom {
            angle: AtomAngle::ratio(1, 3),
            mass: 0.3,
        }],
        Some(tree),
    )
    .unwrap();
    InnerFunctionSpec::new(
        0.1,
        vec![
            BlaschkeFactor {
                zero: DiskPoint::new(0.2, -0.4),
                multiplicity: 2,
            },
            BlaschkeFactor {
                zero: DiskPoint::new(-0.6, 0.1),
                multiplicity: 1,
            },
        ],
        mu,
    )
    .unwrap()
}

/// `f(z)` by direct complex arithmetic, atoms only in the singular part.
pub fn naive_value(f: &InnerFunctionSpec, z: Complex64) -> Complex64 {
    let mut v = Complex64::from_polar(1.0, 2.0 * PI * f.rotation());
    for fac in f.factors() {
        let a = Complex64::new(fac.zero.re, fac.zero.im);
        let b = (a - z) / (Complex64::new(1.0, 0.0) - a.conj() * z);
        v *= b.powu(fac.multiplicity);
    }
    let mu = f.singular_measure();
    assert!(mu.tree().is_none(), "naive oracle covers atoms only");
    for atom in mu.atoms() {
        let eta = Complex64::from_polar(1.0, 2.0 * PI * atom.angle.turns());
        v *= (-(eta + z) / (eta - z) * atom.mass).exp();
    }
    v
}

/// `D_h f(z)` with `f'` from a central complex difference of [`naive_value`].
pub fn naive_dh(f: &InnerFunctionSpec, z: Complex64) -> f64 {
    let h = 1e-5;
    let d = (naive_value(f, z + h) - naive_value(f, z - h)) / (2.0 * h);
    let v = naive_value(f, z);
    (1.0 - z.norm_sqr()) * d.norm() / (1.0 - v.norm_sqr())
}
