//! Uniform moduli: certified infima away from the zeros, the product bound
//! for polynomials with known roots, a falsifier for claimed moduli and the
//! sublevel-set coverage check.

use alloc::collections::BinaryHeap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::func::{InfBracket, RealFunc};
use crate::num::{int, max_rat, pow2, ComplexRational, RatInterval, Rational};
use crate::zstability::{CertifiedEntry, LocatedZeroSet, Modulus, ModulusKind, Representation};

/// `domain` minus the open balls of radius `r` around `centers`, as sorted
/// disjoint closed intervals (possibly degenerate).
pub fn complement_of_balls(
    domain: &RatInterval,
    centers: &[Rational],
    r: &Rational,
) -> Vec<RatInterval> {
    let mut holes: Vec<(Rational, Rational)> = centers.iter().map(|z| (z - r, z + r)).collect();
    holes.sort();
    let mut out = Vec::new();
    // Invariant: `cursor` lies outside every ball seen so far.
    let mut cursor = domain.lo().clone();
    for (a, b) in holes {
        if &a > domain.hi() {
            break;
        }
        if a >= cursor {
            out.push(RatInterval::new(cursor.clone(), a).expect("ordered"));
        }
        if b > cursor {
            cursor = b;
        }
    }
    if &cursor <= domain.hi() {
        out.push(RatInterval::new(cursor, domain.hi().clone()).expect("ordered"));
    }
    out
}

/// `δ` of a uniform certificate; `Infinite` when the region is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Threshold {
    Finite(Rational),
    Infinite,
}

impl Threshold {
    /// `v < δ`.
    pub fn exceeds(&self, v: &Rational) -> bool {
        match self {
            Threshold::Finite(d) => v < d,
            Threshold::Infinite => true,
        }
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Threshold::Finite(d) => Some(d),
            Threshold::Infinite => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateMethod {
    InfOverK,
    PolynomialFormula,
}

impl CertificateMethod {
    pub fn name(self) -> &'static str {
        match self {
            CertificateMethod::InfOverK => "inf_over_k",
            CertificateMethod::PolynomialFormula => "polynomial_formula",
        }
    }
}

/// Evidence that `|f(x)| < delta` forces `dist(x, Z) < eps`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformCertificate {
    pub eps: Rational,
    pub delta: Threshold,
    /// Points at distance at least `eps/2` from the zeros.
    pub region: Vec<RatInterval>,
    pub inf_bracket: Option<InfBracket>,
    pub method: CertificateMethod,
    /// Set when the region is empty and the claim holds trivially.
    pub vacuous: bool,
}

impl UniformCertificate {
    /// Packs a single certificate as a one-entry uniform modulus.
    pub fn to_modulus(&self) -> Result<Modulus> {
        let delta = self.delta.finite().cloned().ok_or(Error::InvalidModulus(
            "vacuous certificate has no finite delta",
        ))?;
        Modulus::new(
            ModulusKind::Uniform,
            Representation::Certified(alloc::vec![CertifiedEntry {
                eps: self.eps.clone(),
                delta,
                certificate: String::from(self.method.name()),
            }]),
        )
    }
}

fn finite_zeros(z: &LocatedZeroSet) -> Result<&[Rational]> {
    match z.points() {
        Some([]) => Err(Error::UninhabitedZeroSet),
        Some(p) => Ok(p),
        None => Err(Error::Unsupported {
            op: "uniform_modulus",
            variant: "enumerated zero set",
        }),
    }
}

/// Certified uniform modulus at `eps`: `δ` is a certified lower bound on
/// `inf |f|` over the points at distance at least `eps/2` from `z`.
pub fn uniform_modulus(
    f: &RealFunc,
    z: &LocatedZeroSet,
    eps: &Rational,
    tau: &Rational,
) -> Result<UniformCertificate> {
    uniform_modulus_with_budget(f, z, eps, tau, crate::func::DEFAULT_INF_BUDGET)
}

pub fn uniform_modulus_with_budget(
    f: &RealFunc,
    z: &LocatedZeroSet,
    eps: &Rational,
    tau: &Rational,
    budget: usize,
) -> Result<UniformCertificate> {
    if !eps.is_positive() {
        return Err(Error::NonPositive { what: "epsilon" });
    }
    if !tau.is_positive() {
        return Err(Error::NonPositive { what: "tolerance" });
    }
    let zeros = finite_zeros(z)?;
    let region = complement_of_balls(f.domain(), zeros, &(eps / int(2)));
    if region.is_empty() {
        return Ok(UniformCertificate {
            eps: eps.clone(),
            delta: Threshold::Infinite,
            region,
            inf_bracket: None,
            method: CertificateMethod::InfOverK,
            vacuous: true,
        });
    }
    let bracket = match f.inf_certified_with_budget(&region, tau, budget) {
        Ok(b) => b,
        // An exhausted search still yields a valid lower bound.
        Err(Error::Unresolved { lower, upper }) => InfBracket {
            lower,
            upper,
            work: budget,
        },
        Err(e) => return Err(e),
    };
    if !bracket.lower.is_positive() {
        return Err(Error::CannotCertifyPositivity {
            lower: bracket.lower,
        });
    }
    Ok(UniformCertificate {
        eps: eps.clone(),
        delta: Threshold::Finite(bracket.lower.clone()),
        region,
        inf_bracket: Some(bracket),
        method: CertificateMethod::InfOverK,
        vacuous: false,
    })
}

/// Certified modulus tabulated at several tolerances. Deltas are clipped so
/// the table is nondecreasing in `eps`, which keeps every entry sound.
pub fn uniform_modulus_table(
    f: &RealFunc,
    z: &LocatedZeroSet,
    eps_values: &[Rational],
    tau: &Rational,
) -> Result<Modulus> {
    let mut eps_sorted = eps_values.to_vec();
    eps_sorted.sort();
    eps_sorted.dedup();
    let mut entries = Vec::with_capacity(eps_sorted.len());
    for e in eps_sorted {
        let cert = uniform_modulus(f, z, &e, tau)?;
        let delta = match cert.delta {
            Threshold::Finite(d) => d,
            Threshold::Infinite => continue,
        };
        entries.push(CertifiedEntry {
            certificate: format!(
                "{} on {} interval(s)",
                cert.method.name(),
                cert.region.len()
            ),
            eps: e,
            delta,
        });
    }
    for i in (0..entries.len().saturating_sub(1)).rev() {
        if entries[i].delta > entries[i + 1].delta {
            entries[i].delta = entries[i + 1].delta.clone();
        }
    }
    Modulus::new(ModulusKind::Uniform, Representation::Certified(entries))
}

/// `γ·Π(z - z_k)`: a polynomial given by its complex roots and a lower bound
/// `γ` on the modulus of its cofactor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFactorization {
    roots: Vec<ComplexRational>,
    gamma: Rational,
}

impl PolyFactorization {
    pub fn new(roots: Vec<ComplexRational>, gamma: Rational) -> Result<Self> {
        if !gamma.is_positive() {
            return Err(Error::NonPositive { what: "gamma" });
        }
        if roots.is_empty() {
            return Err(Error::OutOfRange {
                what: "roots",
                detail: String::from("at least one root is required"),
            });
        }
        Ok(Self { roots, gamma })
    }

    pub fn roots(&self) -> &[ComplexRational] {
        &self.roots
    }

    pub fn gamma(&self) -> &Rational {
        &self.gamma
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    /// `γ(ε/2)^m`.
    pub fn delta(&self, eps: &Rational) -> Result<Rational> {
        poly_uniform_modulus(&self.roots, &self.gamma, eps)
    }

    /// `|γ·Π(z - z_k)|²`, exact.
    pub fn value_norm_sqr(&self, z: &ComplexRational) -> Rational {
        self.roots
            .iter()
            .fold(&self.gamma * &self.gamma, |acc, r| acc * (z - r).norm_sqr())
    }

    /// `min_k |z - z_k|²`, exact.
    pub fn root_distance_sqr(&self, z: &ComplexRational) -> Rational {
        self.roots
            .iter()
            .map(|r| (z - r).norm_sqr())
            .min()
            .expect("at least one root")
    }

    pub fn certificate(&self, eps: &Rational) -> Result<UniformCertificate> {
        Ok(UniformCertificate {
            eps: eps.clone(),
            delta: Threshold::Finite(self.delta(eps)?),
            region: Vec::new(),
            inf_bracket: None,
            method: CertificateMethod::PolynomialFormula,
            vacuous: false,
        })
    }
}

/// `δ = γ(ε/2)^m` with `m` the number of roots counted with multiplicity.
pub fn poly_uniform_modulus(
    roots: &[ComplexRational],
    gamma: &Rational,
    eps: &Rational,
) -> Result<Rational> {
    if !gamma.is_positive() {
        return Err(Error::NonPositive { what: "gamma" });
    }
    if !eps.is_positive() {
        return Err(Error::NonPositive { what: "epsilon" });
    }
    if roots.is_empty() {
        return Err(Error::OutOfRange {
            what: "roots",
            detail: String::from("at least one root is required"),
        });
    }
    Ok(gamma * num_traits::pow(eps / int(2), roots.len()))
}

/// Outcome of a falsification search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FalsifyReport {
    pub witness: Option<crate::zstability::FalsificationWitness>,
    pub evaluations: usize,
    /// The budget ran out before every search phase finished.
    pub exhausted: bool,
}

/// Deepest dyadic level visited by the grid phase of [`falsify_uniform`].
pub const FALSIFY_MAX_LEVEL: u32 = 40;

/// Looks for `x` with `|f(x)| < delta` and `dist(x, z) >= eps`.
///
/// The search region is the domain minus the open `eps`-balls. Level `L`
/// evaluates the region endpoints (at level 0) and the dyadics `k/2^L` not
/// seen at coarser levels; the first level holding a witness returns its
/// smallest `|f|` (ties to the smaller `x`). Piecewise-linear functions then
/// have their breakpoints inside the region checked, and finally the best
/// point found so far is refined locally with shrinking dyadic steps.
/// Each exact evaluation costs one unit of `budget`.
pub fn falsify_uniform(
    f: &RealFunc,
    z: &LocatedZeroSet,
    eps: &Rational,
    delta: &Rational,
    budget: usize,
) -> Result<FalsifyReport> {
    if !delta.is_positive() {
        return Err(Error::NonPositive { what: "delta" });
    }
    if !eps.is_positive() {
        return Err(Error::NonPositive { what: "epsilon" });
    }
    let zeros = finite_zeros(z)?;
    let region = complement_of_balls(f.domain(), zeros, eps);
    let mut search = Search {
        f,
        zeros,
        eps,
        delta,
        budget,
        evaluations: 0,
        best: None,
    };
    if region.is_empty() {
        return Ok(search.report(None, false));
    }

    // Grid phase; half the budget at most.
    let grid_budget = budget / 2 + 1;
    for level in 0..=FALSIFY_MAX_LEVEL {
        let mut candidates: Vec<Rational> = Vec::new();
        if level == 0 {
            for iv in &region {
                candidates.push(iv.lo().clone());
                candidates.push(iv.hi().clone());
            }
        }
        for iv in &region {
            dyadics_in(iv, level, grid_budget, &mut candidates);
        }
        candidates.sort();
        candidates.dedup();
        let mut level_best: Option<(Rational, Rational)> = None;
        for x in candidates {
            if search.evaluations >= grid_budget {
                break;
            }
            let v = search.eval(&x)?;
            if level_best.as_ref().is_none_or(|(_, bv)| &v < bv) {
                level_best = Some((x, v));
            }
        }
        if let Some((x, v)) = level_best {
            if &v < delta {
                return Ok(search.report(Some(x), false));
            }
        }
        if search.evaluations >= grid_budget {
            break;
        }
    }

    // Breakpoints of a piecewise-linear lowering carry the exact minimum.
    if let Some(pl) = f.to_piecewise_linear() {
        for b in pl.breakpoints() {
            if region.iter().any(|iv| iv.contains(b)) {
                if search.evaluations >= budget {
                    return Ok(search.report(None, true));
                }
                search.eval(b)?;
            }
        }
        if let Some(x) = search.witness() {
            return Ok(search.report(Some(x), false));
        }
    }

    // Local refinement around the incumbent.
    let mut step = pow2(-i64::from(FALSIFY_MAX_LEVEL.min(20)));
    let floor = pow2(-96);
    while step >= floor {
        let Some((x0, _)) = search.best.clone() else {
            break;
        };
        let mut moved = false;
        for x in [&x0 - &step, &x0 + &step] {
            if !region.iter().any(|iv| iv.contains(&x)) {
                continue;
            }
            if search.evaluations >= budget {
                return Ok(search.report(None, true));
            }
            let before = search.best.clone();
            search.eval(&x)?;
            if search.best != before {
                moved = true;
            }
        }
        if let Some(x) = search.witness() {
            return Ok(search.report(Some(x), false));
        }
        if !moved {
            step /= int(2);
        }
    }
    Ok(search.report(None, false))
}

/// Dyadics `k/2^level` in `iv`, odd `k` only when `level > 0`, appended in
/// ascending order until `cap` candidates are present.
fn dyadics_in(iv: &RatInterval, level: u32, cap: usize, out: &mut Vec<Rational>) {
    let scale = BigInt::one() << level;
    let lo = (iv.lo() * Rational::from_integer(scale.clone()))
        .ceil()
        .to_integer();
    let hi = (iv.hi() * Rational::from_integer(scale.clone()))
        .floor()
        .to_integer();
    let mut k = lo;
    if level > 0 && (&k % 2u8).is_zero() {
        k += 1u8;
    }
    let stride: u8 = if level > 0 { 2 } else { 1 };
    while k <= hi && out.len() < cap {
        out.push(Rational::new(k.clone(), scale.clone()));
        k += stride;
    }
}

struct Search<'a> {
    f: &'a RealFunc,
    zeros: &'a [Rational],
    eps: &'a Rational,
    delta: &'a Rational,
    budget: usize,
    evaluations: usize,
    best: Option<(Rational, Rational)>,
}

impl Search<'_> {
    fn eval(&mut self, x: &Rational) -> Result<Rational> {
        self.evaluations += 1;
        let v = self.f.abs_at(x)?;
        let better = match &self.best {
            None => true,
            Some((bx, bv)) => v < *bv || (v == *bv && x < bx),
        };
        if better {
            self.best = Some((x.clone(), v.clone()));
        }
        Ok(v)
    }

    fn witness(&self) -> Option<Rational> {
        self.best
            .as_ref()
            .filter(|(_, v)| v < self.delta)
            .map(|(x, _)| x.clone())
    }

    fn report(&self, x: Option<Rational>, exhausted: bool) -> FalsifyReport {
        let witness = x.map(|x| {
            let fx_abs = self.f.abs_at(&x).expect("candidate lies in the domain");
            let dist_lower = self
                .zeros
                .iter()
                .map(|z| (&x - z).abs())
                .min()
                .expect("inhabited");
            debug_assert!(&dist_lower >= self.eps);
            crate::zstability::FalsificationWitness {
                x,
                fx_abs,
                dist_lower,
                delta: self.delta.clone(),
                eps: self.eps.clone(),
            }
        });
        FalsifyReport {
            witness,
            evaluations: self.evaluations,
            exhausted: exhausted || self.evaluations >= self.budget,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coverage {
    /// The sublevel set lies within `eps` of `S`.
    Covered,
    /// Some point of the sublevel set is farther than `eps/2` from `S`.
    NotCovered,
    Unresolved,
}

impl Coverage {
    pub fn name(self) -> &'static str {
        match self {
            Coverage::Covered => "covered",
            Coverage::NotCovered => "not_covered",
            Coverage::Unresolved => "unresolved",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageReport {
    pub verdict: Coverage,
    /// Bracket on `sup { dist(x, S) : |f(x)| <= delta }`.
    pub sup: RatInterval,
    /// A point of the sublevel set realizing the lower end of `sup`.
    pub witness: Option<Rational>,
    pub empty_sublevel: bool,
    pub boxes: usize,
}

/// Default box budget for [`sublevel_coverage`].
pub const DEFAULT_COVERAGE_BUDGET: usize = 200_000;

pub fn sublevel_coverage(
    f: &RealFunc,
    delta: &Rational,
    s: &[Rational],
    eps: &Rational,
    tau: &Rational,
) -> Result<CoverageReport> {
    sublevel_coverage_with_budget(f, delta, s, eps, tau, DEFAULT_COVERAGE_BUDGET)
}

/// Brackets `sup dist(x, S)` over `K = {x : |f(x)| <= delta}` by
/// best-first branch-and-bound. Boxes whose enclosure misses `[-delta, delta]`
/// are discarded; the upper bound of a box is the exact maximum of the
/// distance to `S` over it, and lower bounds come only from exactly
/// evaluated points of `K`.
pub fn sublevel_coverage_with_budget(
    f: &RealFunc,
    delta: &Rational,
    s: &[Rational],
    eps: &Rational,
    tau: &Rational,
    budget: usize,
) -> Result<CoverageReport> {
    for (v, what) in [(delta, "delta"), (eps, "epsilon"), (tau, "tolerance")] {
        if !v.is_positive() {
            return Err(Error::NonPositive { what });
        }
    }
    let mut sorted = s.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.is_empty() {
        return Err(Error::UninhabitedZeroSet);
    }
    let band = RatInterval::new(-delta.clone(), delta.clone()).expect("ordered");
    let mut lower: Option<(Rational, Rational)> = None;
    let consider = |x: &Rational, lower: &mut Option<(Rational, Rational)>| -> Result<()> {
        if &f.abs_at(x)? <= delta {
            let d = point_distance(&sorted, x);
            if lower.as_ref().is_none_or(|(_, l)| &d > l) {
                *lower = Some((x.clone(), d));
            }
        }
        Ok(())
    };
    let mut heap = BinaryHeap::new();
    let mut boxes = 0usize;
    let mut seq = 0usize;
    let root = f.domain().clone();
    consider(root.lo(), &mut lower)?;
    consider(root.hi(), &mut lower)?;
    boxes += 1;
    if f.eval_enclosure(&root)?.intersect(&band).is_some() {
        let upper = max_distance(&sorted, &root);
        heap.push(CovBox {
            upper,
            seq,
            iv: root,
        });
        seq += 1;
    }
    loop {
        let lo_val = lower
            .as_ref()
            .map(|(_, l)| l.clone())
            .unwrap_or_else(Rational::zero);
        heap.retain(|b| b.upper > lo_val);
        let hi_val = match heap.peek() {
            Some(b) => max_rat(&b.upper, &lo_val).clone(),
            None => lo_val.clone(),
        };
        if heap.is_empty() && lower.is_none() {
            return Ok(CoverageReport {
                verdict: Coverage::Covered,
                sup: RatInterval::point(Rational::zero()),
                witness: None,
                empty_sublevel: true,
                boxes,
            });
        }
        if &hi_val - &lo_val <= *tau || boxes >= budget {
            let verdict = if &hi_val < eps {
                Coverage::Covered
            } else if lo_val > eps / int(2) {
                Coverage::NotCovered
            } else {
                Coverage::Unresolved
            };
            return Ok(CoverageReport {
                verdict,
                sup: RatInterval::new(lo_val, hi_val).expect("ordered"),
                witness: lower.map(|(x, _)| x),
                empty_sublevel: false,
                boxes,
            });
        }
        let b = heap.pop().expect("gap is positive only while boxes remain");
        let (l, r) = b.iv.bisect();
        consider(l.hi(), &mut lower)?;
        for child in [l, r] {
            boxes += 1;
            if f.eval_enclosure(&child)?.intersect(&band).is_none() {
                continue;
            }
            let upper = max_distance(&sorted, &child);
            heap.push(CovBox {
                upper,
                seq,
                iv: child,
            });
            seq += 1;
        }
    }
}

fn point_distance(sorted: &[Rational], x: &Rational) -> Rational {
    sorted
        .iter()
        .map(|z| (x - z).abs())
        .min()
        .expect("nonempty")
}

/// Exact `max_{x in iv} dist(x, S)` for sorted `S`: attained at an endpoint
/// or at a midpoint between consecutive elements of `S`.
fn max_distance(sorted: &[Rational], iv: &RatInterval) -> Rational {
    let mut best = max_rat(
        &point_distance(sorted, iv.lo()),
        &point_distance(sorted, iv.hi()),
    )
    .clone();
    for w in sorted.windows(2) {
        let m = (&w[0] + &w[1]) / int(2);
        if iv.contains(&m) {
            let d = point_distance(sorted, &m);
            if d > best {
                best = d;
            }
        }
    }
    best
}

struct CovBox {
    upper: Rational,
    seq: usize,
    iv: RatInterval,
}

impl PartialEq for CovBox {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for CovBox {}

impl PartialOrd for CovBox {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CovBox {
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper
            .cmp(&other.upper)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}
