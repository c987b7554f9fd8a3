//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p zstab --test acceptance`.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zstab::sweep::polybound_trials;
use zstab_core::corpus::{
    cubic, plateau, reciprocal_zeros, signed_plateau, signed_plateau_domain, spike_barrier_parts,
    standard_corpus, Reciprocals, SpikeBarrierParams,
};
use zstab_core::func::{grid_points, spike, FuncKind, Spike};
use zstab_core::isolation::finite_intersection_rank;
use zstab_core::num::{int, pow2, rat};
use zstab_core::poly::sign_variations;
use zstab_core::rootfind::{
    isolate_real_roots, tolerance_scan, zstable_bisect, RootKind, RootLocation, Stopper,
};
use zstab_core::uniform::{falsify_uniform, uniform_modulus, PolyFactorization, Threshold};
use zstab_core::zstability::ZeroEnumeration;
use zstab_core::{ComplexRational, LocatedZeroSet, RatInterval, Rational};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dyadic(k: i64, level: u32) -> Rational {
    Rational::new(BigInt::from(k), BigInt::from(1) << level)
}

fn c1_spike_exactness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let level = rng.random_range(1u32..=30);
        let t = dyadic(rng.random_range(-(1i64 << level)..=(1i64 << level)), level);
        let d = dyadic(rng.random_range(1i64..=(1i64 << level)), level);
        let s = Spike::new(t.clone(), d.clone()).map_err(|e| e.to_string())?;
        let f = spike(t.clone(), d.clone()).map_err(|e| e.to_string())?;
        let half = &d / int(2);
        let expected = [
            (t.clone(), int(1)),
            (&t - &d, int(0)),
            (&t + &d, int(0)),
            (&t - &half, rat(1, 2)),
            (&t + &half, rat(1, 2)),
        ];
        for (x, v) in expected {
            ensure(s.value(&x) == v, || {
                format!("s({t}, {d}, {x}) = {}", s.value(&x))
            })?;
            let fv = f.eval_exact(&x).map_err(|e| e.to_string())?;
            ensure(fv == v, || format!("spike function at {x} gave {fv}"))?;
        }
    }
    Ok("100 random dyadic spikes exact at t, t±δ, t±δ/2".into())
}

fn c2_spike_sum() -> Check {
    let custom = SpikeBarrierParams {
        centers: vec![rat(1, 8), rat(3, 8), rat(5, 8)],
        halfwidths: vec![rat(1, 16), rat(1, 16), rat(1, 32)],
    };
    let cases = [
        (3usize, SpikeBarrierParams::standard(3)),
        (8, SpikeBarrierParams::standard(8)),
        (3, custom),
    ];
    for (k, p) in cases {
        let (f, g) = spike_barrier_parts(&p).map_err(|e| e.to_string())?;
        let FuncKind::SpikeSum(terms) = f.kind() else {
            return Err("spike sum expected".into());
        };
        for (i, a) in terms.iter().enumerate() {
            for b in &terms[i + 1..] {
                let (sa, sb) = (a.spike.support(), b.spike.support());
                ensure(sa.hi() <= sb.lo() || sb.hi() <= sa.lo(), || {
                    format!("supports {sa} and {sb} overlap")
                })?;
            }
        }
        // at most one spike is nonzero at any grid point
        for x in grid_points(f.domain(), &pow2(-12)).map_err(|e| e.to_string())? {
            let active = terms
                .iter()
                .filter(|t| !t.spike.value(&x).is_zero())
                .count();
            ensure(active <= 1, || format!("{active} spikes active at {x}"))?;
        }
        let top = int(1) - pow2(-(k as i64));
        let sup = f.sup_exact().map_err(|e| e.to_string())?;
        let inf = g.inf_exact().map_err(|e| e.to_string())?;
        ensure(sup == top, || {
            format!("K={k}: sup f = {sup}, expected {top}")
        })?;
        ensure(inf == pow2(-(k as i64)), || format!("K={k}: inf g = {inf}"))?;
        ensure(inf == int(1) - &sup, || "inf g != 1 - sup f".into())?;
    }
    Ok("K=3, K=8 and a hand-built K=3: disjoint, sup f = 1-2^-K, inf g = 2^-K".into())
}

fn c3_plateau_law() -> Check {
    let z = LocatedZeroSet::finite(vec![int(1)]);
    let eps = rat(1, 4);
    for n in 1..=20u32 {
        let f = plateau(n).map_err(|e| e.to_string())?;
        let c = uniform_modulus(&f, &z, &eps, &pow2(-30)).map_err(|e| e.to_string())?;
        let want = pow2(-i64::from(n));
        ensure(c.delta == Threshold::Finite(want.clone()), || {
            format!("n={n}: delta {:?}, expected {want}", c.delta)
        })?;
        let r = falsify_uniform(&f, &z, &eps, &pow2(1 - i64::from(n)), 4000)
            .map_err(|e| e.to_string())?;
        let w = r
            .witness
            .ok_or_else(|| format!("n={n}: no witness at 2^-n+1"))?;
        // recheck the witness from scratch
        let fx = f.eval_exact(&w.x).map_err(|e| e.to_string())?.abs();
        let dist = (int(1) - &w.x).abs();
        ensure(fx < pow2(1 - i64::from(n)), || {
            format!("n={n}: |f({})| = {fx}", w.x)
        })?;
        ensure(dist >= rat(3, 4), || {
            format!("n={n}: witness {} at distance {dist}", w.x)
        })?;
    }
    Ok("delta = 2^-n for n=1..20, witnesses at distance >= 3/4".into())
}

type G = (BigInt, BigInt);

fn gmul(a: &G, b: &G) -> G {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

fn gadd(a: &G, b: &G) -> G {
    (&a.0 + &b.0, &a.1 + &b.1)
}

fn gnorm(a: &G) -> BigInt {
    &a.0 * &a.0 + &a.1 * &a.1
}

/// Gaussian-integer coefficients of `Π(w - R)`, lowest degree first.
fn expand(roots: &[G]) -> Vec<G> {
    let zero = || (BigInt::zero(), BigInt::zero());
    let mut c = vec![(BigInt::from(1), BigInt::zero())];
    for r in roots {
        let neg = (-r.0.clone(), -r.1.clone());
        let mut next = vec![zero(); c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i + 1] = gadd(&next[i + 1], ci);
            next[i] = gadd(&next[i], &gmul(ci, &neg));
        }
        c = next;
    }
    c
}

/// `Σ q_j W^j E^(m-j)`: the polynomial at `W/E`, scaled by `E^m`.
fn horner(coeffs: &[G], w: &G, e: &BigInt) -> G {
    let m = coeffs.len() - 1;
    let mut acc = coeffs[m].clone();
    let mut ep = BigInt::from(1);
    for q in coeffs[..m].iter().rev() {
        ep *= e;
        acc = gadd(&gmul(&acc, w), &(&q.0 * &ep, &q.1 * &ep));
    }
    acc
}

// Roots are (a + bi)/16 and sample points are dyadic, so with w = 16z = W/E
// every comparison below is between Gaussian integers. For f = γ·Π(z - r)
// and δ = γ(ε/2)^m, |f(z)| < δ becomes |H|² < (8εE)^(2m) and |z - r| < ε
// becomes |W - R·E|² < (16εE)².
fn c4_polybound() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut samples, mut checked) = (0usize, 0usize);
    for t in 0..200 {
        let m = rng.random_range(1usize..=5);
        let roots: Vec<G> = (0..m)
            .map(|_| loop {
                let (a, b) = (rng.random_range(-16i64..=16), rng.random_range(-16i64..=16));
                if a * a + b * b <= 256 {
                    break (BigInt::from(a), BigInt::from(b));
                }
            })
            .collect();
        let gamma = rat(rng.random_range(1i64..=8), 4);
        let (eps, eight_eps) = if t % 2 == 0 {
            (rat(1, 2), 4)
        } else {
            (rat(1, 4), 2)
        };
        let pf = PolyFactorization::new(
            roots
                .iter()
                .map(|r| {
                    ComplexRational::new(
                        Rational::new(r.0.clone(), 16.into()),
                        Rational::new(r.1.clone(), 16.into()),
                    )
                })
                .collect(),
            gamma.clone(),
        )
        .map_err(|e| e.to_string())?;
        let delta = pf.delta(&eps).map_err(|e| e.to_string())?;
        let mut oracle_delta = gamma.clone();
        for _ in 0..m {
            oracle_delta *= &eps / int(2);
        }
        ensure(delta == oracle_delta, || {
            format!("trial {t}: delta {delta} vs {oracle_delta}")
        })?;
        let coeffs = expand(&roots);
        let mut accepted = 0;
        while accepted < 1000 {
            let s = rng.random_range(0u32..=40);
            let k = rng.random_range(0..m);
            let e = BigInt::from(1) << (s + 6);
            let off = (
                BigInt::from(rng.random_range(-1024i64..=1024)),
                BigInt::from(rng.random_range(-1024i64..=1024)),
            );
            let w = gadd(&(&roots[k].0 * &e, &roots[k].1 * &e), &off);
            samples += 1;
            let bound = num_traits::pow(BigInt::from(eight_eps) * &e, 2 * m);
            if gnorm(&horner(&coeffs, &w, &e)) >= bound {
                continue;
            }
            accepted += 1;
            let radius2 = num_traits::pow(BigInt::from(2 * eight_eps) * &e, 2);
            let close = roots
                .iter()
                .any(|r| gnorm(&(&w.0 - &r.0 * &e, &w.1 - &r.1 * &e)) < radius2);
            ensure(close, || {
                format!(
                    "trial {t}: W = ({}, {}), E = {e} violates the bound",
                    w.0, w.1
                )
            })?;
        }
        checked += accepted;
    }
    let (summary, _) = polybound_trials(200, 1000, 7).map_err(|e| e.to_string())?;
    ensure(
        summary.violations == 0 && summary.samples == 200_000,
        || format!("library trials: {summary:?}"),
    )?;
    Ok(format!(
        "200 instances, {checked} sublevel samples ({samples} drawn) by Horner oracle, \
         library trials {} samples, 0 violations",
        summary.samples
    ))
}

fn c5_grid_soundness() -> Check {
    let eps = rat(1, 4);
    let step = pow2(-12);
    let mut certified = 0;
    for e in standard_corpus() {
        let c =
            uniform_modulus(&e.func, &e.zeros, &eps, &pow2(-20)).map_err(|er| er.to_string())?;
        certified += 1;
        let zs = e.zeros.points().unwrap_or_default().to_vec();
        for x in grid_points(e.func.domain(), &step).map_err(|er| er.to_string())? {
            let v = e.func.abs_at(&x).map_err(|er| er.to_string())?;
            if !c.delta.exceeds(&v) {
                continue;
            }
            let dist = zs.iter().map(|z| (z - &x).abs()).min().unwrap();
            ensure(dist < eps, || {
                format!("{}: |f({x})| = {v} < delta at distance {dist}", e.name)
            })?;
        }
    }
    let f = cubic(int(0)).map_err(|e| e.to_string())?;
    let z = LocatedZeroSet::finite(vec![int(0), rat(1, 2)]);
    let tau = pow2(-20);
    let c = uniform_modulus(&f, &z, &eps, &tau).map_err(|e| e.to_string())?;
    let d = c
        .delta
        .finite()
        .ok_or("cubic certificate is vacuous")?
        .clone();
    // oracle: |x²(x - 1/2)| at x = 1/8
    let oracle = rat(1, 64) * rat(3, 8);
    ensure(d <= oracle && d >= &oracle - &tau, || {
        format!("cubic a=0: delta {d} not within tau below {oracle}")
    })?;
    Ok(format!(
        "{certified} certificates sound on the 2^-12 grid; cubic a=0 delta = {d}"
    ))
}

fn c6_certified_ivt() -> Check {
    let f = cubic(int(0)).map_err(|e| e.to_string())?;
    let r = zstable_bisect(&f, &rat(1, 4), &rat(3, 4), &pow2(-20), &Stopper::None)
        .map_err(|e| e.to_string())?;
    ensure(r.kind == RootKind::ExactZero(rat(1, 2)), || {
        format!("cubic(0): {:?}", r.kind)
    })?;
    for k in [6i64, 20, 40] {
        let f = cubic(pow2(-k)).map_err(|e| e.to_string())?;
        let p = f.as_polynomial().unwrap();
        let r = zstable_bisect(&f, &rat(1, 2), &rat(3, 4), &pow2(-20), &Stopper::None)
            .map_err(|e| e.to_string())?;
        let RootKind::Bracket { lo, hi } = &r.kind else {
            return Err(format!("k={k}: expected a bracket, got {:?}", r.kind));
        };
        ensure(hi - lo <= pow2(-19), || format!("k={k}: width {}", hi - lo))?;
        ensure((p.eval(lo) * p.eval(hi)).is_negative(), || {
            format!("k={k}: no sign change")
        })?;
        let roots = isolate_real_roots(
            p,
            &RatInterval::new(rat(1, 2), rat(3, 4)).unwrap(),
            &pow2(-30),
        )
        .map_err(|e| e.to_string())?;
        ensure(roots.len() == 1, || {
            format!("k={k}: {} isolated roots", roots.len())
        })?;
        let iso = roots[0].enclosure();
        ensure(iso.width() <= pow2(-30), || {
            format!("k={k}: isolation width {}", iso.width())
        })?;
        if let RootLocation::Bracket(b) = &roots[0].location {
            ensure((p.eval(b.lo()) * p.eval(b.hi())).is_negative(), || {
                format!("k={k}: isolation bracket has no sign change")
            })?;
        }
        let bis = RatInterval::new(lo.clone(), hi.clone()).unwrap();
        ensure(bis.contains_interval(&iso), || {
            format!("k={k}: {iso} not inside {bis}")
        })?;
        let chain = p.squarefree_part().sturm_chain();
        let count = sign_variations(&chain, lo) - sign_variations(&chain, hi);
        ensure(count == 1, || {
            format!("k={k}: Sturm count {count} in the bracket")
        })?;
    }
    Ok("cubic(0) -> ExactZero(1/2); k=6,20,40 brackets <= 2^-19 contain the isolated root".into())
}

fn bin(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_zstab"))
        .args(args)
        .output()
        .expect("zstab binary runs")
}

fn c7_stopping() -> Check {
    let f = plateau(12).map_err(|e| e.to_string())?;
    let x = tolerance_scan(&f, &pow2(-11), &pow2(-14))
        .map_err(|e| e.to_string())?
        .ok_or("scan accepted nothing")?;
    let dist = (int(1) - &x).abs();
    ensure(dist >= rat(3, 4), || {
        format!("scan point {x} at distance {dist}")
    })?;

    let eps = rat(1, 4);
    let z = LocatedZeroSet::finite(vec![int(1)]);
    let g = signed_plateau(12).map_err(|e| e.to_string())?;
    let d = signed_plateau_domain();
    let cert = uniform_modulus(&g, &z, &eps, &pow2(-20)).map_err(|e| e.to_string())?;
    let mut localized = 0;
    for stopper in [Stopper::Pointwise(z.clone()), Stopper::Uniform(cert)] {
        for lo in [int(0), rat(1, 4), rat(1, 2), rat(3, 4)] {
            let r = zstable_bisect(&g, &lo, d.hi(), &eps, &stopper).map_err(|e| e.to_string())?;
            if let RootKind::Localized { center, .. } = &r.kind {
                localized += 1;
                let err = (int(1) - center).abs();
                ensure(err < eps, || {
                    format!("certified stop at {center}, error {err}")
                })?;
            }
        }
    }
    let o = bin(&["demo-stopping"]);
    ensure(o.status.code() == Some(1), || {
        format!("demo-stopping exit {:?}", o.status.code())
    })?;
    Ok(format!(
        "scan stops at {x} (distance {dist}); {localized} certified stops all within 1/4; demo-stopping exit 1"
    ))
}

fn c8_isolation() -> Check {
    let z = reciprocal_zeros();
    for (x, n, sep) in [
        (
            RatInterval::new(rat(21, 100), int(1)).unwrap(),
            4usize,
            Some(rat(1, 100)),
        ),
        (RatInterval::new(rat(1, 2), int(1)).unwrap(), 2, None),
    ] {
        let c = finite_intersection_rank(&z, &x).map_err(|e| e.to_string())?;
        ensure(c.rank == n, || format!("{x}: rank {} expected {n}", c.rank))?;
        if let Some(s) = sep {
            ensure(c.sep == s, || format!("{x}: sep {}", c.sep))?;
        }
        ensure(c.sep.is_positive(), || "non-positive sep".into())?;
        let brute: Vec<Rational> = (1..=1000i64)
            .map(|k| rat(1, k))
            .filter(|q| x.contains(q))
            .collect();
        ensure(c.zeros_in_region(&Reciprocals) == brute, || {
            format!("{x}: zeros differ")
        })?;
        for k in c.rank + 1..=1000 {
            let q = Reciprocals.term(k);
            let gap = x.distance_to(&q);
            ensure(gap >= c.sep, || {
                format!("{x}: z_{k} at distance {gap} < sep")
            })?;
        }
    }
    Ok("[21/100,1] -> N=4, sep=1/100; [1/2,1] -> N=2; verified to horizon 1000".into())
}

fn c9_duality() -> Check {
    let eps = rat(1, 4);
    let corpus = standard_corpus();
    ensure(corpus.len() >= 30, || {
        format!("corpus has {} entries", corpus.len())
    })?;
    let mut evaluations = 0;
    for e in &corpus {
        let c =
            uniform_modulus(&e.func, &e.zeros, &eps, &pow2(-20)).map_err(|er| er.to_string())?;
        let Threshold::Finite(d) = &c.delta else {
            continue;
        };
        let r = falsify_uniform(&e.func, &e.zeros, &eps, d, 4000).map_err(|er| er.to_string())?;
        evaluations += r.evaluations;
        ensure(r.witness.is_none(), || {
            format!("{} defeated by {:?}", e.name, r.witness)
        })?;
    }
    Ok(format!(
        "{} parameterizations, {evaluations} falsifier evaluations, no defeat",
        corpus.len()
    ))
}

fn c10_determinism() -> Check {
    let runs: &[&[&str]] = &[
        &["corpus", "list"],
        &["corpus", "list", "--format", "csv"],
        &["corpus", "export", "--family", "plateau", "--n", "7"],
        &["modulus", "--family", "cubic", "--a", "0", "--eps", "1/4"],
        &[
            "modulus",
            "--sweep-n",
            "1:20",
            "--eps",
            "1/4",
            "--format",
            "csv",
        ],
        &[
            "polybound",
            "--trials",
            "20",
            "--samples",
            "100",
            "--seed",
            "7",
        ],
        &[
            "polybound",
            "--trials",
            "20",
            "--samples",
            "100",
            "--seed",
            "7",
            "--format",
            "csv",
        ],
        &[
            "falsify", "--family", "plateau", "--n", "10", "--eps", "1/4", "--delta", "1/512",
        ],
        &[
            "bisect",
            "--family",
            "signed-plateau",
            "--n",
            "8",
            "--lo",
            "0",
            "--hi",
            "5/4",
            "--eps",
            "1/8",
            "--stopper",
            "uniform",
        ],
        &[
            "coverage", "--family", "cubic", "--a", "0", "--delta", "1/1024", "--eps", "1/4",
        ],
        &["isolate", "--zeros", "reciprocal", "--X", "21/100:1"],
        &["demo-stopping"],
    ];
    for args in runs {
        let (a, b) = (bin(args), bin(args));
        ensure(matches!(a.status.code(), Some(0 | 1)), || {
            format!("{args:?} failed: {}", String::from_utf8_lossy(&a.stderr))
        })?;
        ensure(a.stdout == b.stdout && !a.stdout.is_empty(), || {
            format!("{args:?} differs between runs")
        })?;
        ensure(!a.stdout.contains(&b'\r'), || {
            format!("{args:?} emitted CR")
        })?;
    }
    Ok(format!(
        "{} commands byte-identical across two runs",
        runs.len()
    ))
}

/// Id, name, runtime limit and check.
type Criterion = (&'static str, &'static str, Option<Duration>, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "1",
            "spike exactness",
            Some(Duration::from_secs(1)),
            c1_spike_exactness,
        ),
        (
            "2",
            "spike-sum disjointness and extrema",
            Some(Duration::from_secs(1)),
            c2_spike_sum,
        ),
        (
            "3",
            "plateau degradation law",
            Some(Duration::from_secs(5)),
            c3_plateau_law,
        ),
        (
            "4",
            "polynomial bound soundness",
            Some(Duration::from_secs(60)),
            c4_polybound,
        ),
        (
            "5",
            "uniform-modulus grid soundness",
            Some(Duration::from_secs(30)),
            c5_grid_soundness,
        ),
        (
            "6",
            "certified IVT",
            Some(Duration::from_secs(5)),
            c6_certified_ivt,
        ),
        (
            "7",
            "stopping-criterion demonstration",
            Some(Duration::from_secs(2)),
            c7_stopping,
        ),
        ("8", "isolation", Some(Duration::from_secs(1)), c8_isolation),
        (
            "9",
            "falsifier/certifier duality",
            Some(Duration::from_secs(60)),
            c9_duality,
        ),
        ("10", "determinism", None, c10_determinism),
    ];
    let mut failed = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let timing = match limit {
            Some(l) => format!("{:.2}s, limit {}s", took.as_secs_f64(), l.as_secs()),
            None => format!("{:.2}s", took.as_secs_f64()),
        };
        let verdict = match (&result, limit) {
            (Err(e), _) => Err(e.clone()),
            (Ok(_), Some(l)) if took > l => Err(format!("over time limit ({timing})")),
            (Ok(msg), _) => Ok(msg.clone()),
        };
        match verdict {
            Ok(msg) => println!("[PASS] {id:>2} {name}: {msg} ({timing})"),
            Err(e) => {
                failed += 1;
                println!("[FAIL] {id:>2} {name}: {e} ({timing})");
            }
        }
    }
    if failed == 0 {
        println!("all 10 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("{failed} of 10 criteria failed");
        ExitCode::FAILURE
    }
}
