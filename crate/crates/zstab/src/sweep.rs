//! Parameter sweeps and seeded random trials.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use zstab_core::corpus::plateau;
use zstab_core::num::{int, rat};
use zstab_core::uniform::{uniform_modulus, PolyFactorization, Threshold};
use zstab_core::{ComplexRational, LocatedZeroSet, Rational};

use crate::format::{format_rational, RatStr};

/// `δ` certified for each plateau member `n` in `ns` at the given `ε`.
pub fn plateau_sweep(
    ns: impl IntoIterator<Item = u32>,
    eps: &Rational,
    tau: &Rational,
) -> zstab_core::Result<Vec<(u32, Threshold)>> {
    let z = LocatedZeroSet::finite(vec![int(1)]);
    ns.into_iter()
        .map(|n| Ok((n, uniform_modulus(&plateau(n)?, &z, eps, tau)?.delta)))
        .collect()
}

pub fn plateau_sweep_csv(rows: &[(u32, Threshold)]) -> String {
    let mut s = String::from("n,delta\n");
    for (n, d) in rows {
        let d = match d {
            Threshold::Finite(d) => format_rational(d),
            Threshold::Infinite => "inf".to_string(),
        };
        s.push_str(&format!("{n},{d}\n"));
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialSummary {
    pub trials: usize,
    pub samples: usize,
    pub violations: usize,
    pub seed: u64,
}

impl TrialSummary {
    pub fn csv(&self) -> String {
        format!(
            "trials,samples,violations,seed\n{},{},{},{}\n",
            self.trials, self.samples, self.violations, self.seed
        )
    }
}

/// A counterexample to the product bound found by [`polybound_trials`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub trial: usize,
    pub z: [RatStr; 2],
}

fn dyadic(k: i64, level: u32) -> Rational {
    Rational::new(BigInt::from(k), BigInt::from(1) << level)
}

/// Random point of the grid `(a + bi)/16` inside the closed unit disk.
fn disk_point(rng: &mut ChaCha8Rng) -> ComplexRational {
    loop {
        let (a, b) = (rng.random_range(-16i64..=16), rng.random_range(-16i64..=16));
        if a * a + b * b <= 256 {
            return ComplexRational::new(dyadic(a, 4), dyadic(b, 4));
        }
    }
}

/// Offset of size about `2^-s` in a random direction.
fn offset(rng: &mut ChaCha8Rng) -> ComplexRational {
    let s = rng.random_range(0u32..=48);
    let a = rng.random_range(-1024i64..=1024);
    let b = rng.random_range(-1024i64..=1024);
    ComplexRational::new(dyadic(a, s + 10), dyadic(b, s + 10))
}

/// Attempts allowed per accepted sample before a trial gives up.
const ATTEMPTS_PER_SAMPLE: usize = 64;

/// Seeded trials of the product bound `δ = γ(ε/2)^m`.
///
/// Each trial draws 1 to 5 roots on the `1/16` grid of the unit disk, a
/// leading coefficient `k/4` with `k` in `1..=8`, and `ε` alternating
/// between `1/2` and `1/4`. Points near a random root at random scales are
/// drawn until `samples_per_trial` of them satisfy `|f(z)| < δ`; each of
/// those must lie within `ε` of some root.
pub fn polybound_trials(
    trials: usize,
    samples_per_trial: usize,
    seed: u64,
) -> zstab_core::Result<(TrialSummary, Vec<Violation>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = 0;
    let mut violations = Vec::new();
    for t in 0..trials {
        let degree = rng.random_range(1usize..=5);
        let roots: Vec<_> = (0..degree).map(|_| disk_point(&mut rng)).collect();
        let gamma = rat(rng.random_range(1i64..=8), 4);
        let eps = if t % 2 == 0 { rat(1, 2) } else { rat(1, 4) };
        let pf = PolyFactorization::new(roots, gamma)?;
        let delta = pf.delta(&eps)?;
        let (d2, e2) = (&delta * &delta, &eps * &eps);
        let mut accepted = 0;
        let mut attempts = 0;
        while accepted < samples_per_trial && attempts < samples_per_trial * ATTEMPTS_PER_SAMPLE {
            attempts += 1;
            let k = rng.random_range(0..degree);
            let z = &pf.roots()[k] + &offset(&mut rng);
            if pf.value_norm_sqr(&z) >= d2 {
                continue;
            }
            accepted += 1;
            if pf.root_distance_sqr(&z) >= e2 {
                violations.push(Violation {
                    trial: t,
                    z: [(&z.re).into(), (&z.im).into()],
                });
            }
        }
        samples += accepted;
    }
    Ok((
        TrialSummary {
            trials,
            samples,
            violations: violations.len(),
            seed,
        },
        violations,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use zstab_core::num::pow2;

    #[test]
    fn empty_sweep_is_header_only() {
        let rows = plateau_sweep(std::iter::empty(), &rat(1, 4), &pow2(-20)).unwrap();
        assert_eq!(plateau_sweep_csv(&rows), "n,delta\n");
    }

    #[test]
    fn small_sweep_rows() {
        let rows = plateau_sweep(1..=3, &rat(1, 4), &pow2(-20)).unwrap();
        assert_eq!(plateau_sweep_csv(&rows), "n,delta\n1,1/2\n2,1/4\n3,1/8\n");
    }

    #[test]
    fn trials_are_seeded() {
        let a = polybound_trials(4, 50, 11).unwrap();
        let b = polybound_trials(4, 50, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.0.samples, 200);
    }
}
