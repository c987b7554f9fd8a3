use num_bigint::BigInt;
use proptest::prelude::*;
use zstab_core::corpus::{cubic, plateau, standard_corpus};
use zstab_core::num::{int, pow2, rat};
use zstab_core::uniform::{
    falsify_uniform, sublevel_coverage, uniform_modulus, Coverage, PolyFactorization, Threshold,
};
use zstab_core::{ComplexRational, LocatedZeroSet, Rational};

fn dyadic(k: i64, level: u32) -> Rational {
    Rational::new(BigInt::from(k), BigInt::from(1i64 << level))
}

#[test]
fn plateau_degradation_law() {
    let z = LocatedZeroSet::finite(vec![int(1)]);
    for n in 1..=20u32 {
        let f = plateau(n).unwrap();
        let c = uniform_modulus(&f, &z, &rat(1, 4), &pow2(-30)).unwrap();
        assert_eq!(c.delta, Threshold::Finite(pow2(-i64::from(n))), "n = {n}");
    }
}

#[test]
fn falsifier_never_defeats_certifier_on_corpus() {
    let eps = rat(1, 4);
    for e in standard_corpus() {
        let c = uniform_modulus(&e.func, &e.zeros, &eps, &pow2(-20)).unwrap();
        let Threshold::Finite(d) = c.delta else {
            continue;
        };
        let r = falsify_uniform(&e.func, &e.zeros, &eps, &d, 4000).unwrap();
        assert!(r.witness.is_none(), "{} defeated: {:?}", e.name, r.witness);
    }
}

#[test]
fn grid_soundness_on_corpus() {
    let eps = rat(1, 4);
    let step = pow2(-9);
    for e in standard_corpus() {
        let c = uniform_modulus(&e.func, &e.zeros, &eps, &pow2(-20)).unwrap();
        let mut x = e.func.domain().lo().clone();
        while &x <= e.func.domain().hi() {
            if c.delta.exceeds(&e.func.abs_at(&x).unwrap()) {
                assert!(
                    e.zeros.exact_distance(&x).unwrap() < eps,
                    "{} at {x}",
                    e.name
                );
            }
            x += &step;
        }
    }
}

#[test]
fn coverage_shrinks_with_delta() {
    let f = cubic(int(0)).unwrap();
    let s = [int(0), rat(1, 2)];
    let eps = rat(1, 4);
    let tau = pow2(-16);
    for k in 10..=16 {
        let r = sublevel_coverage(&f, &pow2(-k), &s, &eps, &tau).unwrap();
        assert_eq!(r.verdict, Coverage::Covered, "delta = 2^-{k}");
    }
    let p = plateau(10).unwrap();
    let r = sublevel_coverage(&p, &pow2(-9), &[int(1)], &eps, &tau).unwrap();
    assert_eq!(r.verdict, Coverage::NotCovered);
    let w = r.witness.unwrap();
    assert!(p.abs_at(&w).unwrap() <= pow2(-9));
}

fn complex_dyadic() -> impl Strategy<Value = ComplexRational> {
    // coordinates k/16 inside the unit disk
    (-16i64..=16, -16i64..=16)
        .prop_filter("unit disk", |(a, b)| a * a + b * b <= 256)
        .prop_map(|(a, b)| ComplexRational::new(dyadic(a, 4), dyadic(b, 4)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_bound_is_sound(
        roots in prop::collection::vec(complex_dyadic(), 1..=5),
        samples in prop::collection::vec((-256i64..=256, -256i64..=256), 200),
        half in any::<bool>(),
    ) {
        let eps = if half { rat(1, 2) } else { rat(1, 4) };
        let pf = PolyFactorization::new(roots.clone(), int(1)).unwrap();
        let delta = pf.delta(&eps).unwrap();
        let d2 = &delta * &delta;
        let e2 = &eps * &eps;
        for (a, b) in samples {
            let z = ComplexRational::new(dyadic(a, 7), dyadic(b, 7));
            // oracle: expand the product directly
            let mut prod = ComplexRational::one();
            for r in &roots {
                prod = &prod * &(&z - r);
            }
            if prod.norm_sqr() < d2 {
                let close = roots.iter().any(|r| (&z - r).norm_sqr() < e2);
                prop_assert!(close);
            }
        }
    }

    #[test]
    fn falsifier_witnesses_are_genuine(n in 2u32..16, k in 0i64..6) {
        let f = plateau(n).unwrap();
        let z = LocatedZeroSet::finite(vec![int(1)]);
        let eps = rat(1, 4);
        let delta = pow2(-i64::from(n) + k);
        let r = falsify_uniform(&f, &z, &eps, &delta, 2000).unwrap();
        if let Some(w) = r.witness {
            prop_assert!(w.verify(&f, &z).unwrap());
        }
    }
}
