//! Interval-halving root finder with certified early stopping, the naive
//! tolerance scan it is compared against, and exact real-root isolation.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::func::{grid_points, RealFunc};
use crate::num::{int, RatInterval, Rational};
use crate::poly::{sign_variations, Poly};
use crate::uniform::{Threshold, UniformCertificate};
use crate::zstability::{pointwise_modulus_from_located, LocatedZeroSet, Proximity};

/// Where the early-stopping threshold comes from.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Stopper {
    /// Plain bisection: only exact zeros and final brackets are reported.
    None,
    /// Pointwise modulus from a declared zero set, computed at every midpoint.
    Pointwise(LocatedZeroSet),
    /// One threshold for every midpoint.
    Uniform(UniformCertificate),
}

/// Why a midpoint was accepted as localizing a zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StopEvidence {
    Pointwise {
        delta: Rational,
        case: Proximity,
    },
    Uniform {
        delta: Threshold,
        cert_eps: Rational,
    },
}

impl StopEvidence {
    pub fn delta(&self) -> Option<&Rational> {
        match self {
            StopEvidence::Pointwise { delta, .. } => Some(delta),
            StopEvidence::Uniform { delta, .. } => delta.finite(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootKind {
    ExactZero(Rational),
    /// A zero lies within `radius` of `center`.
    Localized {
        center: Rational,
        radius: Rational,
        fx_abs: Rational,
        evidence: StopEvidence,
    },
    /// `f(lo)` and `f(hi)` have strictly opposite signs.
    Bracket {
        lo: Rational,
        hi: Rational,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Zero,
    Stop,
    KeepLeft,
    KeepRight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub midpoint: Rational,
    pub decision: Decision,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootResult {
    pub kind: RootKind,
    pub trace: Vec<TraceStep>,
}

impl RootResult {
    /// A point of the result: the zero, the center, or the bracket midpoint.
    pub fn point(&self) -> Rational {
        match &self.kind {
            RootKind::ExactZero(x) => x.clone(),
            RootKind::Localized { center, .. } => center.clone(),
            RootKind::Bracket { lo, hi } => (lo + hi) / int(2),
        }
    }
}

fn sign_of(v: &Rational) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Bisects `[lo, hi]` until its width is at most `2·eps`.
///
/// At each midpoint `m` the exact value decides between an exact zero,
/// a stop (`|f(m)| < δ` for the stopper's `δ`), or keeping the half whose
/// endpoints still have opposite signs.
pub fn zstable_bisect(
    f: &RealFunc,
    lo: &Rational,
    hi: &Rational,
    eps: &Rational,
    stopper: &Stopper,
) -> Result<RootResult> {
    if !eps.is_positive() {
        return Err(Error::NonPositive { what: "epsilon" });
    }
    if lo >= hi {
        return Err(Error::OutOfRange {
            what: "bracket",
            detail: format!("[{lo}, {hi}] is not a proper interval"),
        });
    }
    let (mut a, mut b) = (lo.clone(), hi.clone());
    let sa = sign_of(&f.eval_exact(&a)?);
    let sb = sign_of(&f.eval_exact(&b)?);
    if sa * sb >= 0 {
        return Err(Error::NotBracketing);
    }
    let two_eps = eps * int(2);
    let mut trace = Vec::new();
    while &b - &a > two_eps {
        let m = (&a + &b) / int(2);
        let fm = f.eval_exact(&m)?;
        if fm.is_zero() {
            trace.push(TraceStep {
                midpoint: m.clone(),
                decision: Decision::Zero,
            });
            return Ok(RootResult {
                kind: RootKind::ExactZero(m),
                trace,
            });
        }
        let fm_abs = fm.abs();
        if let Some((radius, evidence)) = stop_test(f, &m, &fm_abs, eps, stopper)? {
            trace.push(TraceStep {
                midpoint: m.clone(),
                decision: Decision::Stop,
            });
            return Ok(RootResult {
                kind: RootKind::Localized {
                    center: m,
                    radius,
                    fx_abs: fm_abs,
                    evidence,
                },
                trace,
            });
        }
        if sign_of(&fm) == sa {
            trace.push(TraceStep {
                midpoint: m.clone(),
                decision: Decision::KeepRight,
            });
            a = m;
        } else {
            trace.push(TraceStep {
                midpoint: m.clone(),
                decision: Decision::KeepLeft,
            });
            b = m;
        }
    }
    Ok(RootResult {
        kind: RootKind::Bracket { lo: a, hi: b },
        trace,
    })
}

fn stop_test(
    f: &RealFunc,
    m: &Rational,
    fm_abs: &Rational,
    eps: &Rational,
    stopper: &Stopper,
) -> Result<Option<(Rational, StopEvidence)>> {
    match stopper {
        Stopper::None => Ok(None),
        Stopper::Pointwise(z) => {
            let p = pointwise_modulus_from_located(f, z, m, eps).map_err(|e| {
                Error::ModulusFailure {
                    at: m.clone(),
                    reason: format!("{e}"),
                }
            })?;
            if !p.delta.is_positive() {
                return Err(Error::ModulusFailure {
                    at: m.clone(),
                    reason: format!("non-positive delta {}", p.delta),
                });
            }
            Ok((fm_abs < &p.delta).then(|| {
                (
                    eps.clone(),
                    StopEvidence::Pointwise {
                        delta: p.delta,
                        case: p.case,
                    },
                )
            }))
        }
        Stopper::Uniform(cert) => {
            if let Threshold::Finite(d) = &cert.delta {
                if !d.is_positive() {
                    return Err(Error::ModulusFailure {
                        at: m.clone(),
                        reason: format!("non-positive delta {d}"),
                    });
                }
            }
            Ok(cert.delta.exceeds(fm_abs).then(|| {
                (
                    cert.eps.clone(),
                    StopEvidence::Uniform {
                        delta: cert.delta.clone(),
                        cert_eps: cert.eps.clone(),
                    },
                )
            }))
        }
    }
}

/// Re-derives the stopping threshold at a localized result's center and
/// checks `|f(center)| < δ` again.
pub fn verify_localized(f: &RealFunc, result: &RootResult, stopper: &Stopper) -> Result<bool> {
    let RootKind::Localized {
        center,
        radius,
        fx_abs,
        evidence,
    } = &result.kind
    else {
        return Ok(false);
    };
    let v = f.abs_at(center)?;
    if &v != fx_abs {
        return Ok(false);
    }
    Ok(match stop_test(f, center, &v, radius, stopper)? {
        Some((r, e)) => &r == radius && &e == evidence,
        None => false,
    })
}

/// First grid point, ascending, with `|f(x)| < tol`.
pub fn tolerance_scan(
    f: &RealFunc,
    tol: &Rational,
    grid_step: &Rational,
) -> Result<Option<Rational>> {
    if !tol.is_positive() {
        return Err(Error::NonPositive { what: "tolerance" });
    }
    for x in grid_points(f.domain(), grid_step)? {
        if &f.abs_at(&x)? < tol {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootLocation {
    Exact(Rational),
    /// Open interval holding exactly one root; the square-free part of the
    /// polynomial has opposite nonzero signs at its ends.
    Bracket(RatInterval),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatedRoot {
    pub location: RootLocation,
    pub multiplicity: usize,
}

impl IsolatedRoot {
    pub fn enclosure(&self) -> RatInterval {
        match &self.location {
            RootLocation::Exact(x) => RatInterval::point(x.clone()),
            RootLocation::Bracket(iv) => iv.clone(),
        }
    }
}

/// `1 + max |a_i / a_n|`: every real root has smaller modulus.
pub fn cauchy_bound(p: &Poly) -> Result<Rational> {
    let lead = p.leading_coeff().ok_or(Error::ZeroPolynomial)?.abs();
    let n = p.coeffs().len() - 1;
    let m = p.coeffs()[..n]
        .iter()
        .map(|c| c.abs() / &lead)
        .max()
        .unwrap_or_else(Rational::zero);
    Ok(m + int(1))
}

/// Every rational root of `q` has a denominator dividing the returned
/// integer: the leading coefficient of `q` scaled to integer coefficients.
fn rational_root_denominator_bound(q: &Poly) -> Rational {
    let lcm = q
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let lead = q.leading_coeff().expect("nonzero polynomial");
    (lead * Rational::from_integer(lcm)).abs()
}

/// Isolates every real root of `p` on the real line.
pub fn isolate_all_real_roots(p: &Poly, width: &Rational) -> Result<Vec<IsolatedRoot>> {
    let b = cauchy_bound(p)?;
    isolate_real_roots(p, &RatInterval::spanning(-b.clone(), b), width)
}

/// Isolates the real roots of `p` in the closed interval `domain`.
///
/// Works on the square-free part with a Sturm chain: `V(a) - V(b)` counts
/// roots in `(a, b]`. Rational roots hit by a bisection point come back as
/// exact zeros; the rest as pairwise disjoint brackets of width at most
/// `width`. Multiplicities come from the square-free decomposition.
pub fn isolate_real_roots(
    p: &Poly,
    domain: &RatInterval,
    width: &Rational,
) -> Result<Vec<IsolatedRoot>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !width.is_positive() {
        return Err(Error::NonPositive { what: "width" });
    }
    let q = p.squarefree_part();
    let denom_bound = rational_root_denominator_bound(&q);
    let factors = p.squarefree_decomposition();
    let chain = q.sturm_chain();
    let count =
        |a: &Rational, b: &Rational| sign_variations(&chain, a) - sign_variations(&chain, b);
    let mut exact: Vec<Rational> = Vec::new();
    let mut open: Vec<RatInterval> = Vec::new();
    if q.eval(domain.lo()).is_zero() {
        exact.push(domain.lo().clone());
    }
    let mut stack = alloc::vec![domain.clone()];
    while let Some(iv) = stack.pop() {
        let c = count(iv.lo(), iv.hi());
        if c == 0 {
            continue;
        }
        if q.eval(iv.hi()).is_zero() {
            exact.push(iv.hi().clone());
            if c == 1 {
                continue;
            }
        } else if c == 1 {
            open.push(iv);
            continue;
        }
        let (l, r) = iv.bisect();
        stack.push(r);
        stack.push(l);
    }
    exact.sort();
    let mut out: Vec<IsolatedRoot> = Vec::with_capacity(exact.len() + open.len());
    let mut brackets: Vec<RatInterval> = Vec::new();
    open.sort_by(|a, b| a.lo().cmp(b.lo()));
    for (i, iv) in open.iter().enumerate() {
        let mut cur = iv.clone();
        loop {
            let touches = |c: &RatInterval| {
                exact.iter().any(|x| c.contains(x))
                    || (i > 0 && c.lo() == open[i - 1].hi())
                    || (i + 1 < open.len() && c.hi() == open[i + 1].lo())
            };
            let ends_nonzero = !q.eval(cur.lo()).is_zero() && !q.eval(cur.hi()).is_zero();
            let narrow = &cur.width() * &denom_bound < int(1);
            if ends_nonzero && narrow && &cur.width() <= width && !touches(&cur) {
                // At most one rational with denominator dividing the bound fits.
                let scaled = (cur.lo() * &denom_bound).floor() + int(1);
                let candidate = scaled / &denom_bound;
                if cur.hi() > &candidate && q.eval(&candidate).is_zero() {
                    exact.push(candidate.clone());
                    exact.sort();
                    cur = RatInterval::point(candidate);
                }
                break;
            }
            let m = cur.mid();
            if q.eval(&m).is_zero() {
                exact.push(m.clone());
                exact.sort();
                cur = RatInterval::point(m);
                break;
            }
            cur = if count(&m, cur.hi()) == 1 {
                RatInterval::new(m, cur.hi().clone()).expect("ordered")
            } else {
                RatInterval::new(cur.lo().clone(), m).expect("ordered")
            };
        }
        if !cur.is_degenerate() {
            brackets.push(cur);
        }
    }
    for x in exact {
        let multiplicity = factors
            .iter()
            .find(|(f, _)| f.eval(&x).is_zero())
            .map(|(_, k)| *k)
            .expect("root of the square-free part is a root of some factor");
        out.push(IsolatedRoot {
            location: RootLocation::Exact(x),
            multiplicity,
        });
    }
    for iv in brackets {
        let multiplicity = factors
            .iter()
            .find(|(f, _)| (f.eval(iv.lo()) * f.eval(iv.hi())).is_negative())
            .map(|(_, k)| *k)
            .expect("exactly one factor changes sign across the bracket");
        out.push(IsolatedRoot {
            location: RootLocation::Bracket(iv),
            multiplicity,
        });
    }
    out.sort_by(|a, b| a.enclosure().lo().cmp(b.enclosure().lo()));
    Ok(out)
}
