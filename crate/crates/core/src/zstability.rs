//! Moduli as data, distances to located zero sets, the pointwise
//! near/far modulus combinator and the well-behavedness checks.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::func::{grid_points, RealFunc};
use crate::num::{int, RatInterval, Rational};

/// Longest enumeration prefix examined by [`LocatedZeroSet::distance`].
pub const ENUMERATION_BUDGET: usize = 1 << 20;

/// A one-one enumeration `z_1, z_2, ...` of a countable zero set together
/// with a tail-separation bound.
pub trait ZeroEnumeration {
    /// The `n`-th term, 1-based.
    fn term(&self, n: usize) -> Rational;

    /// A lower bound on `inf_{m > n} dist(z_m, region)`. Must be
    /// nonnegative and nondecreasing in `n` for a fixed region.
    fn tail_sep(&self, n: usize, region: &RatInterval) -> Rational;

    fn name(&self) -> &str;
}

/// Zero set with a computable distance function.
#[derive(Clone)]
pub enum LocatedZeroSet {
    Finite {
        points: Vec<Rational>,
        multiplicities: Vec<usize>,
    },
    Enumerated(Arc<dyn ZeroEnumeration + Send + Sync>),
}

impl fmt::Debug for LocatedZeroSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocatedZeroSet::Finite {
                points,
                multiplicities,
            } => f
                .debug_struct("Finite")
                .field("points", points)
                .field("multiplicities", multiplicities)
                .finish(),
            LocatedZeroSet::Enumerated(e) => f.debug_tuple("Enumerated").field(&e.name()).finish(),
        }
    }
}

impl LocatedZeroSet {
    /// Finite set of simple zeros.
    pub fn finite(points: Vec<Rational>) -> Self {
        let multiplicities = alloc::vec![1; points.len()];
        Self::Finite {
            points,
            multiplicities,
        }
    }

    pub fn finite_with_multiplicities(
        points: Vec<Rational>,
        multiplicities: Vec<usize>,
    ) -> Result<Self> {
        if points.len() != multiplicities.len() {
            return Err(Error::OutOfRange {
                what: "multiplicities",
                detail: String::from("one multiplicity per point is required"),
            });
        }
        if multiplicities.contains(&0) {
            return Err(Error::NonPositive {
                what: "multiplicity",
            });
        }
        Ok(Self::Finite {
            points,
            multiplicities,
        })
    }

    pub fn enumerated(e: impl ZeroEnumeration + Send + Sync + 'static) -> Self {
        Self::Enumerated(Arc::new(e))
    }

    pub fn points(&self) -> Option<&[Rational]> {
        match self {
            LocatedZeroSet::Finite { points, .. } => Some(points),
            LocatedZeroSet::Enumerated(_) => None,
        }
    }

    pub fn is_inhabited(&self) -> bool {
        match self {
            LocatedZeroSet::Finite { points, .. } => !points.is_empty(),
            LocatedZeroSet::Enumerated(_) => true,
        }
    }

    /// Exact distance for a finite set.
    pub fn exact_distance(&self, x: &Rational) -> Result<Rational> {
        match self {
            LocatedZeroSet::Finite { points, .. } => finite_distance(points, x),
            LocatedZeroSet::Enumerated(_) => Err(Error::Unsupported {
                op: "exact_distance",
                variant: "enumerated",
            }),
        }
    }

    /// An interval of width at most `precision` containing `dist(x, Z)`.
    ///
    /// Finite sets give a degenerate interval. Enumerations double the
    /// prefix length until the prefix minimum and the tail bound meet
    /// within `precision`; the prefix is capped at [`ENUMERATION_BUDGET`].
    pub fn distance(&self, x: &Rational, precision: &Rational) -> Result<RatInterval> {
        if !precision.is_positive() {
            return Err(Error::NonPositive { what: "precision" });
        }
        match self {
            LocatedZeroSet::Finite { points, .. } => {
                finite_distance(points, x).map(RatInterval::point)
            }
            LocatedZeroSet::Enumerated(e) => {
                let at = RatInterval::point(x.clone());
                let mut best = (x - e.term(1)).abs();
                let mut seen = 1usize;
                loop {
                    let tail = e.tail_sep(seen, &at);
                    let lower = if tail < best { tail } else { best.clone() };
                    if &best - &lower <= *precision {
                        return Ok(RatInterval::new(lower, best).expect("ordered"));
                    }
                    if seen >= ENUMERATION_BUDGET {
                        return Err(Error::DecisionBudget { x: x.clone() });
                    }
                    let next = (seen * 2).min(ENUMERATION_BUDGET);
                    for n in seen + 1..=next {
                        let d = (x - e.term(n)).abs();
                        if d < best {
                            best = d;
                        }
                    }
                    seen = next;
                }
            }
        }
    }
}

fn finite_distance(points: &[Rational], x: &Rational) -> Result<Rational> {
    points
        .iter()
        .map(|z| (x - z).abs())
        .min()
        .ok_or(Error::UninhabitedZeroSet)
}

/// Whether a modulus speaks about one point or the whole domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModulusKind {
    Pointwise(Rational),
    Uniform,
}

/// One certified `(ε, δ)` pair and a human-readable pointer to its evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedEntry {
    pub eps: Rational,
    pub delta: Rational,
    pub certificate: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Representation {
    /// `δ(ε) = γ·(ε/2)^m`.
    Formula {
        gamma: Rational,
        m: u32,
    },
    /// `(ε, δ)` pairs with `ε` strictly increasing.
    Table(Vec<(Rational, Rational)>),
    Certified(Vec<CertifiedEntry>),
}

/// A monotone map `ε ↦ δ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Modulus {
    kind: ModulusKind,
    representation: Representation,
}

impl Modulus {
    /// Validates positivity of every `δ`, strictly increasing `ε` and
    /// nondecreasing `δ`.
    pub fn new(kind: ModulusKind, representation: Representation) -> Result<Self> {
        match &representation {
            Representation::Formula { gamma, m } => {
                if !gamma.is_positive() {
                    return Err(Error::InvalidModulus("gamma must be positive"));
                }
                if *m == 0 {
                    return Err(Error::InvalidModulus("exponent must be positive"));
                }
            }
            Representation::Table(entries) => {
                check_entries(entries.iter().map(|(e, d)| (e, d)))?;
            }
            Representation::Certified(entries) => {
                check_entries(entries.iter().map(|c| (&c.eps, &c.delta)))?;
            }
        }
        Ok(Self {
            kind,
            representation,
        })
    }

    pub fn formula(kind: ModulusKind, gamma: Rational, m: u32) -> Result<Self> {
        Self::new(kind, Representation::Formula { gamma, m })
    }

    pub fn kind(&self) -> &ModulusKind {
        &self.kind
    }

    pub fn representation(&self) -> &Representation {
        &self.representation
    }

    /// `δ` for the query `ε`. Tables answer with the entry whose `ε'` is the
    /// largest one not exceeding `ε`.
    pub fn delta(&self, eps: &Rational) -> Result<Rational> {
        if !eps.is_positive() {
            return Err(Error::NonPositive { what: "epsilon" });
        }
        let lookup = |pairs: &mut dyn Iterator<Item = (&Rational, &Rational)>| {
            pairs
                .take_while(|(e, _)| *e <= eps)
                .last()
                .map(|(_, d)| d.clone())
                .ok_or_else(|| Error::NoTableEntry { eps: eps.clone() })
        };
        match &self.representation {
            Representation::Formula { gamma, m } => {
                let half = eps / int(2);
                Ok(gamma * num_traits::pow(half, *m as usize))
            }
            Representation::Table(entries) => lookup(&mut entries.iter().map(|(e, d)| (e, d))),
            Representation::Certified(entries) => {
                lookup(&mut entries.iter().map(|c| (&c.eps, &c.delta)))
            }
        }
    }
}

fn check_entries<'a>(entries: impl Iterator<Item = (&'a Rational, &'a Rational)>) -> Result<()> {
    let mut prev: Option<(&Rational, &Rational)> = None;
    for (e, d) in entries {
        if !e.is_positive() {
            return Err(Error::InvalidModulus("tabulated epsilon must be positive"));
        }
        if !d.is_positive() {
            return Err(Error::InvalidModulus("tabulated delta must be positive"));
        }
        if let Some((pe, pd)) = prev {
            if e <= pe {
                return Err(Error::InvalidModulus("epsilon must be strictly increasing"));
            }
            if d < pd {
                return Err(Error::InvalidModulus(
                    "delta must be nondecreasing in epsilon",
                ));
            }
        }
        prev = Some((e, d));
    }
    Ok(())
}

/// The claim "every `x` with `dist(x, Z) >= eps` has `|f(x)| >= delta`".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WellBehavedClaim {
    pub eps: Rational,
    pub delta: Rational,
}

/// Reads a uniform modulus as a lower bound on `|f|` away from the zeros.
pub fn wellbehaved_lower_bound(m: &Modulus, eps: &Rational) -> Result<WellBehavedClaim> {
    if m.kind != ModulusKind::Uniform {
        return Err(Error::InvalidModulus("a uniform modulus is required"));
    }
    Ok(WellBehavedClaim {
        eps: eps.clone(),
        delta: m.delta(eps)?,
    })
}

/// Which branch the pointwise combinator took.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Proximity {
    /// A zero lies closer than `ε`; `δ = 1`.
    Near,
    /// `x` is at positive distance from the zeros; `δ = |f(x)| > 0`.
    Far,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointwiseDelta {
    pub delta: Rational,
    pub case: Proximity,
    /// Bracket on `dist(x, Z)` used to decide the case.
    pub distance: RatInterval,
}

/// Pointwise modulus at `x` for tolerance `eps`.
///
/// The case split only needs `dist < eps` or `dist > 0`, so a distance
/// bracket of width `eps/2` always decides it: if its upper end is below
/// `eps` the point is near, otherwise the lower end is at least `eps/2`.
pub fn pointwise_modulus_from_located(
    f: &RealFunc,
    z: &LocatedZeroSet,
    x: &Rational,
    eps: &Rational,
) -> Result<PointwiseDelta> {
    if !eps.is_positive() {
        return Err(Error::NonPositive { what: "epsilon" });
    }
    let fx = f.eval_exact(x)?;
    let distance = z.distance(x, &(eps / int(2)))?;
    if distance.hi() < eps {
        return Ok(PointwiseDelta {
            delta: Rational::one(),
            case: Proximity::Near,
            distance,
        });
    }
    debug_assert!(distance.lo().is_positive());
    if fx.is_zero() {
        return Err(Error::WellBehavednessViolation { x: x.clone() });
    }
    Ok(PointwiseDelta {
        delta: fx.abs(),
        case: Proximity::Far,
        distance,
    })
}

/// Grid points at certified positive distance from `z` where `f` vanishes.
/// An empty finite set counts every point as far from the zeros.
pub fn check_well_behaved_on_grid(
    f: &RealFunc,
    z: &LocatedZeroSet,
    grid_step: &Rational,
) -> Result<Vec<Rational>> {
    let mut violations = Vec::new();
    for x in grid_points(f.domain(), grid_step)? {
        let far = match z.distance(&x, grid_step) {
            Ok(d) => d.lo().is_positive(),
            Err(Error::UninhabitedZeroSet) => true,
            Err(e) => return Err(e),
        };
        if far && f.eval_exact(&x)?.is_zero() {
            violations.push(x);
        }
    }
    Ok(violations)
}

/// A point refuting the uniform claim `(eps, delta)`:
/// `|f(x)| < delta` while `dist(x, Z) >= eps`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FalsificationWitness {
    pub x: Rational,
    pub fx_abs: Rational,
    pub dist_lower: Rational,
    pub delta: Rational,
    pub eps: Rational,
}

impl FalsificationWitness {
    /// Re-checks both inequalities by exact evaluation.
    pub fn verify(&self, f: &RealFunc, z: &LocatedZeroSet) -> Result<bool> {
        let fx = f.abs_at(&self.x)?;
        let d = z.distance(&self.x, &self.eps)?;
        Ok(fx == self.fx_abs
            && fx < self.delta
            && d.lo() >= &self.dist_lower
            && self.dist_lower >= self.eps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{cubic, plateau, reciprocal_zeros};
    use crate::num::{pow2, rat};
    use crate::poly::Poly;

    #[test]
    fn finite_distance_is_exact() {
        let z = LocatedZeroSet::finite(alloc::vec![int(0), rat(1, 2)]);
        let d = z.distance(&rat(3, 8), &pow2(-10)).unwrap();
        assert_eq!(d, RatInterval::point(rat(1, 8)));
        assert_eq!(
            z.distance(&rat(1, 2), &pow2(-10)).unwrap(),
            RatInterval::point(int(0))
        );
    }

    #[test]
    fn empty_finite_set_is_uninhabited() {
        let z = LocatedZeroSet::finite(Vec::new());
        assert_eq!(z.distance(&int(0), &int(1)), Err(Error::UninhabitedZeroSet));
    }

    #[test]
    fn reciprocal_distance_at_origin() {
        let z = reciprocal_zeros();
        let p = pow2(-10);
        let d = z.distance(&int(0), &p).unwrap();
        assert!(d.contains(&int(0)));
        assert!(d.width() <= p);
    }

    #[test]
    fn plateau_far_and_near() {
        let f = plateau(10).unwrap();
        let z = LocatedZeroSet::finite(alloc::vec![int(1)]);
        let far = pointwise_modulus_from_located(&f, &z, &rat(1, 4), &rat(1, 4)).unwrap();
        assert_eq!((far.delta, far.case), (pow2(-10), Proximity::Far));
        let near = pointwise_modulus_from_located(&f, &z, &rat(15, 16), &rat(1, 4)).unwrap();
        assert_eq!((near.delta, near.case), (int(1), Proximity::Near));
        let on = pointwise_modulus_from_located(&f, &z, &int(1), &pow2(-30)).unwrap();
        assert_eq!(on.case, Proximity::Near);
    }

    #[test]
    fn wrong_zero_set_is_a_violation() {
        let f = cubic(int(0)).unwrap();
        let z = LocatedZeroSet::finite(alloc::vec![rat(1, 2)]);
        assert_eq!(
            pointwise_modulus_from_located(&f, &z, &int(0), &rat(1, 4)),
            Err(Error::WellBehavednessViolation { x: int(0) })
        );
        assert_eq!(
            check_well_behaved_on_grid(&f, &z, &pow2(-8)).unwrap(),
            alloc::vec![int(0)]
        );
    }

    #[test]
    fn correct_zero_set_has_no_violations() {
        let f = cubic(int(0)).unwrap();
        let z = LocatedZeroSet::finite(alloc::vec![int(0), rat(1, 2)]);
        assert!(check_well_behaved_on_grid(&f, &z, &pow2(-8))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn constant_one_with_no_zeros() {
        let f = RealFunc::polynomial(
            Poly::constant(int(1)),
            RatInterval::new(int(0), int(1)).unwrap(),
        );
        let z = LocatedZeroSet::finite(Vec::new());
        assert!(check_well_behaved_on_grid(&f, &z, &pow2(-4))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn formula_modulus_substitution() {
        let m = Modulus::formula(ModulusKind::Uniform, int(1), 2).unwrap();
        let claim = wellbehaved_lower_bound(&m, &rat(1, 2)).unwrap();
        assert_eq!(claim.delta, rat(1, 16));
        assert!(wellbehaved_lower_bound(&m, &int(0)).is_err());
    }

    #[test]
    fn table_lookup_uses_largest_entry_below() {
        let m = Modulus::new(
            ModulusKind::Uniform,
            Representation::Table(alloc::vec![
                (rat(1, 8), rat(1, 100)),
                (rat(1, 4), rat(1, 10))
            ]),
        )
        .unwrap();
        assert_eq!(m.delta(&rat(3, 16)).unwrap(), rat(1, 100));
        assert_eq!(m.delta(&int(1)).unwrap(), rat(1, 10));
        assert_eq!(
            m.delta(&rat(1, 16)),
            Err(Error::NoTableEntry { eps: rat(1, 16) })
        );
    }

    #[test]
    fn table_rejects_decreasing_delta() {
        let bad = Modulus::new(
            ModulusKind::Uniform,
            Representation::Table(alloc::vec![(rat(1, 8), rat(1, 2)), (rat(1, 4), rat(1, 10))]),
        );
        assert!(bad.is_err());
    }

    #[test]
    fn pointwise_modulus_is_not_a_lower_bound() {
        let m = Modulus::formula(ModulusKind::Pointwise(int(0)), int(1), 1).unwrap();
        assert!(wellbehaved_lower_bound(&m, &int(1)).is_err());
    }
}
