//! Parameterized test functions with known zero sets and known extrema.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::func::{PiecewiseLinear, RealFunc, SpikeTerm};
use crate::num::{int, max_rat, min_rat, pow2, rat, RatInterval, Rational};
use crate::poly::Poly;
use crate::zstability::{LocatedZeroSet, ZeroEnumeration};

pub fn cubic_domain() -> RatInterval {
    RatInterval::new(rat(-3, 4), rat(3, 4)).expect("ordered")
}

/// `x²(x - 1/2) - a` on `[-3/4, 3/4]`, for `0 <= a < 1/2`.
pub fn cubic(a: Rational) -> Result<RealFunc> {
    cubic_on(a, cubic_domain())
}

pub fn cubic_on(a: Rational, domain: RatInterval) -> Result<RealFunc> {
    if a.is_negative() || a >= rat(1, 2) {
        return Err(Error::OutOfRange {
            what: "cubic parameter a",
            detail: format!("{a} is not in [0, 1/2)"),
        });
    }
    Ok(RealFunc::polynomial(
        Poly::from_coeffs(vec![-a, int(0), rat(-1, 2), int(1)]),
        domain,
    ))
}

/// Cubic member whose only real zero is the rational `r > 1/2`.
pub fn cubic_with_root(r: &Rational) -> Result<RealFunc> {
    cubic(r * r * (r - rat(1, 2)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlateauParams {
    /// Floor height is `2^-n`.
    pub n: u32,
    /// Where the floor sits inside `(0, 1/2)`.
    pub floor_center: Rational,
    /// End of the flat shoulder in `(1/2, 1)`; the function falls linearly to 0 after it.
    pub shoulder: Rational,
}

impl PlateauParams {
    pub fn new(n: u32) -> Self {
        Self {
            n,
            floor_center: rat(1, 4),
            shoulder: rat(15, 16),
        }
    }

    pub fn with_center(mut self, c: Rational) -> Self {
        self.floor_center = c;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::OutOfRange {
                what: "plateau n",
                detail: String::from("n must be at least 1"),
            });
        }
        if !self.floor_center.is_positive() || self.floor_center >= rat(1, 2) {
            return Err(Error::OutOfRange {
                what: "plateau floor_center",
                detail: format!("{} is not in (0, 1/2)", self.floor_center),
            });
        }
        if self.shoulder <= rat(1, 2) || self.shoulder >= int(1) {
            return Err(Error::OutOfRange {
                what: "plateau shoulder",
                detail: format!("{} is not in (1/2, 1)", self.shoulder),
            });
        }
        Ok(())
    }
}

/// Plateau member with default floor center and shoulder.
pub fn plateau(n: u32) -> Result<RealFunc> {
    plateau_with(&PlateauParams::new(n))
}

/// Piecewise-linear on `[0, 1]`. On `[0, 1/2]` it is `max(2^-n, |x - c|)`;
/// on `[1/2, shoulder]` it stays at its value at `1/2`; it then falls
/// linearly to `0` at `x = 1`. Positive on `[0, 1)`, zero only at `1`.
pub fn plateau_with(p: &PlateauParams) -> Result<RealFunc> {
    p.validate()?;
    let h = pow2(-i64::from(p.n));
    let c = &p.floor_center;
    let half = rat(1, 2);
    let left = |x: &Rational| max_rat(&h, &(x - c).abs()).clone();
    let mut xs = vec![
        int(0),
        max_rat(&int(0), &(c - &h)).clone(),
        min_rat(&half, &(c + &h)).clone(),
        half.clone(),
    ];
    xs.dedup();
    let mut ys: Vec<Rational> = xs.iter().map(left).collect();
    let top = left(&half);
    xs.push(p.shoulder.clone());
    ys.push(top);
    xs.push(int(1));
    ys.push(int(0));
    Ok(RealFunc::piecewise_linear(PiecewiseLinear::new(xs, ys)?))
}

/// Domain of [`signed_plateau`].
pub fn signed_plateau_domain() -> RatInterval {
    RatInterval::new(int(0), rat(5, 4)).expect("ordered")
}

/// The plateau continued by `4(1 - x)` on `[1, 5/4]`, so it changes sign at
/// its only zero `x = 1`.
pub fn signed_plateau(n: u32) -> Result<RealFunc> {
    let right = RealFunc::polynomial(
        Poly::from_coeffs(vec![int(4), int(-4)]),
        RatInterval::new(int(1), rat(5, 4)).expect("ordered"),
    );
    RealFunc::affine_join(plateau(n)?, right)
}

/// Centers and halfwidths for `g = 1 - Σ (1 - 2^-k) s(z_k, δ_k, ·)` on `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpikeBarrierParams {
    pub centers: Vec<Rational>,
    pub halfwidths: Vec<Rational>,
}

impl SpikeBarrierParams {
    /// `z_k = k/(K+1)`, `δ_k = min(2^-k, 1/(2(K+1)))`.
    pub fn standard(k: usize) -> Self {
        let denom = k as i64 + 1;
        let cap = rat(1, 2 * denom);
        let centers = (1..=k).map(|i| rat(i as i64, denom)).collect();
        let halfwidths = (1..=k)
            .map(|i| min_rat(&pow2(-(i as i64)), &cap).clone())
            .collect();
        Self {
            centers,
            halfwidths,
        }
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    fn validate(&self) -> Result<()> {
        if self.centers.is_empty() {
            return Err(Error::OutOfRange {
                what: "spike barrier K",
                detail: String::from("at least one spike is required"),
            });
        }
        if self.centers.len() != self.halfwidths.len() {
            return Err(Error::OutOfRange {
                what: "spike barrier halfwidths",
                detail: String::from("one halfwidth per center is required"),
            });
        }
        let unit = RatInterval::new(int(0), int(1)).expect("ordered");
        for (k, (z, d)) in self.centers.iter().zip(&self.halfwidths).enumerate() {
            if !unit.contains(z) {
                return Err(Error::OutOfRange {
                    what: "spike barrier center",
                    detail: format!("z_{} = {z} is not in [0, 1]", k + 1),
                });
            }
            let mut cap = pow2(-(k as i64 + 1));
            if k > 0 {
                cap = min_rat(&cap, &self.halfwidths[k - 1]).clone();
            }
            if !d.is_positive() || d > &cap {
                return Err(Error::OutOfRange {
                    what: "spike barrier halfwidth",
                    detail: format!("delta_{} = {d} is not in (0, {cap}]", k + 1),
                });
            }
        }
        Ok(())
    }

    fn terms(&self) -> Result<Vec<SpikeTerm>> {
        self.centers
            .iter()
            .zip(&self.halfwidths)
            .enumerate()
            .map(|(k, (z, d))| SpikeTerm::new(z.clone(), d.clone(), int(1) - pow2(-(k as i64 + 1))))
            .collect()
    }
}

/// The inner spike sum `f` and the barrier `g = 1 - f`, both on `[0, 1]`.
pub fn spike_barrier_parts(p: &SpikeBarrierParams) -> Result<(RealFunc, RealFunc)> {
    p.validate()?;
    let unit = RatInterval::new(int(0), int(1)).expect("ordered");
    let f = RealFunc::spike_sum(p.terms()?, unit)?;
    let pl = f
        .to_piecewise_linear()
        .expect("spike sums on a proper interval lower to piecewise-linear");
    let one = Rational::one();
    let g_values = pl.values().iter().map(|v| &one - v).collect();
    let g = RealFunc::piecewise_linear(PiecewiseLinear::new(pl.breakpoints().to_vec(), g_values)?);
    Ok((f, g))
}

pub fn spike_barrier(p: &SpikeBarrierParams) -> Result<RealFunc> {
    spike_barrier_parts(p).map(|(_, g)| g)
}

/// `z_k = 1/k`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Reciprocals;

impl ZeroEnumeration for Reciprocals {
    fn term(&self, n: usize) -> Rational {
        Rational::new(1.into(), n.into())
    }

    /// The tail `{1/m : m > n}` lies in `(0, 1/(n+1)]`.
    fn tail_sep(&self, n: usize, region: &RatInterval) -> Rational {
        let top = Rational::new(1.into(), (n + 1).into());
        let above = region.lo() - top;
        let below = -region.hi().clone();
        let best = max_rat(&above, &below);
        if best.is_positive() {
            best.clone()
        } else {
            Rational::zero()
        }
    }

    fn name(&self) -> &str {
        "reciprocal"
    }
}

pub fn reciprocal_zeros() -> LocatedZeroSet {
    LocatedZeroSet::enumerated(Reciprocals)
}

/// A corpus function with its declared zero set.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub func: RealFunc,
    pub zeros: LocatedZeroSet,
}

fn entry(name: String, func: RealFunc, zeros: Vec<Rational>, mult: Vec<usize>) -> CorpusEntry {
    CorpusEntry {
        name,
        func,
        zeros: LocatedZeroSet::finite_with_multiplicities(zeros, mult)
            .expect("one multiplicity per zero"),
    }
}

/// Fixed list of parameterizations with exactly known finite zero sets.
pub fn standard_corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for n in 1..=20 {
        out.push(entry(
            format!("plateau(n={n})"),
            plateau(n).expect("valid"),
            vec![int(1)],
            vec![1],
        ));
    }
    for c in [rat(1, 8), rat(3, 8)] {
        let p = PlateauParams::new(6).with_center(c.clone());
        out.push(entry(
            format!("plateau(n=6, floor_center={c})"),
            plateau_with(&p).expect("valid"),
            vec![int(1)],
            vec![1],
        ));
    }
    for n in [4, 8, 12] {
        out.push(entry(
            format!("signed_plateau(n={n})"),
            signed_plateau(n).expect("valid"),
            vec![int(1)],
            vec![1],
        ));
    }
    out.push(entry(
        String::from("cubic(a=0)"),
        cubic(int(0)).expect("valid"),
        vec![int(0), rat(1, 2)],
        vec![2, 1],
    ));
    for r in [rat(17, 32), rat(9, 16), rat(5, 8), rat(11, 16), rat(3, 4)] {
        let f = cubic_with_root(&r).expect("valid");
        out.push(entry(format!("cubic(root={r})"), f, vec![r], vec![1]));
    }
    out.push(entry(
        String::from("linear(x-1/2)"),
        RealFunc::polynomial(
            Poly::from_coeffs(vec![rat(-1, 2), int(1)]),
            RatInterval::new(int(0), int(1)).expect("ordered"),
        ),
        vec![rat(1, 2)],
        vec![1],
    ));
    out
}
