//! Exactly represented real functions on closed rational intervals.
//!
//! A [`RealFunc`] is a polynomial, a piecewise-linear interpolant, a sum of
//! spike functions with disjoint supports, or the continuous join of two
//! such functions on adjacent intervals. All of them support exact point
//! evaluation and rigorous range enclosure; the piecewise-linear family
//! additionally has exact extrema.

use alloc::boxed::Box;
use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::num::{max_rat, min_rat, RatInterval, Rational};
use crate::poly::Poly;

/// Default work limit for [`RealFunc::inf_certified`], counted in range enclosures.
pub const DEFAULT_INF_BUDGET: usize = 200_000;

/// The bump `s(t, δ, ·)`: 1 at `t`, 0 outside `(t-δ, t+δ)`, linear on
/// `[t-δ, t]` and `[t, t+δ]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Spike {
    center: Rational,
    halfwidth: Rational,
}

impl Spike {
    pub fn new(center: Rational, halfwidth: Rational) -> Result<Self> {
        if !halfwidth.is_positive() {
            return Err(Error::NonPositive {
                what: "spike halfwidth",
            });
        }
        Ok(Self { center, halfwidth })
    }

    pub fn center(&self) -> &Rational {
        &self.center
    }

    pub fn halfwidth(&self) -> &Rational {
        &self.halfwidth
    }

    /// Value at any real point.
    pub fn value(&self, x: &Rational) -> Rational {
        let d = (x - &self.center).abs();
        if d >= self.halfwidth {
            Rational::zero()
        } else {
            Rational::one() - d / &self.halfwidth
        }
    }

    pub fn support(&self) -> RatInterval {
        RatInterval::spanning(
            &self.center - &self.halfwidth,
            &self.center + &self.halfwidth,
        )
    }

    fn kinks(&self) -> [Rational; 3] {
        [
            &self.center - &self.halfwidth,
            self.center.clone(),
            &self.center + &self.halfwidth,
        ]
    }
}

/// One term `coefficient · s(center, halfwidth, ·)` of a spike sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpikeTerm {
    pub spike: Spike,
    pub coefficient: Rational,
}

impl SpikeTerm {
    pub fn new(center: Rational, halfwidth: Rational, coefficient: Rational) -> Result<Self> {
        Ok(Self {
            spike: Spike::new(center, halfwidth)?,
            coefficient,
        })
    }

    pub fn value(&self, x: &Rational) -> Rational {
        &self.coefficient * self.spike.value(x)
    }
}

/// Continuous piecewise-linear interpolant through `(breakpoints[i], values[i])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiecewiseLinear {
    breakpoints: Vec<Rational>,
    values: Vec<Rational>,
}

impl PiecewiseLinear {
    /// Needs at least two strictly increasing breakpoints and one value per breakpoint.
    pub fn new(breakpoints: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidFunction(
                "piecewise-linear function needs at least two breakpoints",
            ));
        }
        if breakpoints.len() != values.len() {
            return Err(Error::InvalidFunction("breakpoint and value counts differ"));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidFunction(
                "breakpoints must be strictly increasing",
            ));
        }
        Ok(Self {
            breakpoints,
            values,
        })
    }

    /// Builds the interpolant of `g` through the given (sorted, deduplicated) points.
    fn sample(points: Vec<Rational>, g: impl Fn(&Rational) -> Rational) -> Result<Self> {
        let values = points.iter().map(g).collect();
        Self::new(points, values)
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn domain(&self) -> RatInterval {
        RatInterval::spanning(
            self.breakpoints[0].clone(),
            self.breakpoints[self.breakpoints.len() - 1].clone(),
        )
    }

    /// Exact interpolation; the caller guarantees `x` lies in the domain.
    fn eval_unchecked(&self, x: &Rational) -> Rational {
        let bp = &self.breakpoints;
        let i = match bp.binary_search(x) {
            Ok(i) => return self.values[i].clone(),
            Err(i) => i,
        };
        let (x0, x1) = (&bp[i - 1], &bp[i]);
        let (y0, y1) = (&self.values[i - 1], &self.values[i]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// Exact range over `iv`, which must lie in the domain.
    fn range_unchecked(&self, iv: &RatInterval) -> RatInterval {
        let mut lo = self.eval_unchecked(iv.lo());
        let mut hi = lo.clone();
        let mut visit = |v: Rational| {
            if v < lo {
                lo = v;
            } else if v > hi {
                hi = v;
            }
        };
        visit(self.eval_unchecked(iv.hi()));
        for (b, v) in self.breakpoints.iter().zip(&self.values) {
            if iv.lo() < b && b < iv.hi() {
                visit(v.clone());
            }
        }
        RatInterval::new(lo, hi).expect("ordered")
    }

    /// Exact minimum of `|f|` over `iv` (inside the domain).
    fn abs_min_unchecked(&self, iv: &RatInterval) -> Rational {
        let mut points = vec![iv.lo().clone()];
        points.extend(
            self.breakpoints
                .iter()
                .filter(|b| iv.lo() < *b && *b < iv.hi())
                .cloned(),
        );
        if !iv.is_degenerate() {
            points.push(iv.hi().clone());
        }
        let values: Vec<Rational> = points.iter().map(|x| self.eval_unchecked(x)).collect();
        let mut best = values[0].abs();
        for w in values.windows(2) {
            if !(&w[0] * &w[1]).is_positive() {
                return Rational::zero();
            }
            let m = w[1].abs();
            if m < best {
                best = m;
            }
        }
        best
    }

    pub fn max_value(&self) -> Rational {
        self.values.iter().max().expect("nonempty").clone()
    }

    pub fn min_value(&self) -> Rational {
        self.values.iter().min().expect("nonempty").clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FuncKind {
    Polynomial(Poly),
    PiecewiseLinear(PiecewiseLinear),
    SpikeSum(Vec<SpikeTerm>),
    /// `left` on `[a, b]` followed by `right` on `[b, c]`, equal at `b`.
    AffineJoin(Box<RealFunc>, Box<RealFunc>),
}

impl FuncKind {
    pub fn name(&self) -> &'static str {
        match self {
            FuncKind::Polynomial(_) => "polynomial",
            FuncKind::PiecewiseLinear(_) => "piecewise_linear",
            FuncKind::SpikeSum(_) => "spike_sum",
            FuncKind::AffineJoin(..) => "affine_join",
        }
    }
}

/// Derivative of a polynomial or piecewise-linear function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Derivative {
    Polynomial(Poly),
    /// Slope on each open segment between consecutive breakpoints.
    Steps(Vec<(RatInterval, Rational)>),
}

impl Derivative {
    /// Slope at an interior point of a segment; `None` at breakpoints or outside.
    pub fn slope_at(&self, x: &Rational) -> Option<Rational> {
        match self {
            Derivative::Polynomial(p) => Some(p.eval(x)),
            Derivative::Steps(steps) => steps
                .iter()
                .find(|(iv, _)| iv.lo() < x && x < iv.hi())
                .map(|(_, s)| s.clone()),
        }
    }
}

/// Two-sided bracket `lower <= inf |f| <= upper`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfBracket {
    pub lower: Rational,
    pub upper: Rational,
    /// Number of range enclosures spent; zero for the exact piecewise-linear path.
    pub work: usize,
}

impl InfBracket {
    pub fn gap(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }
}

/// A real function on a closed rational interval.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RealFunc {
    domain: RatInterval,
    kind: FuncKind,
}

impl RealFunc {
    pub fn polynomial(poly: Poly, domain: RatInterval) -> Self {
        Self {
            domain,
            kind: FuncKind::Polynomial(poly),
        }
    }

    pub fn piecewise_linear(pl: PiecewiseLinear) -> Self {
        Self {
            domain: pl.domain(),
            kind: FuncKind::PiecewiseLinear(pl),
        }
    }

    /// Constant function on `domain`, stored as a two-breakpoint interpolant.
    pub fn constant(c: Rational, domain: RatInterval) -> Result<Self> {
        if domain.is_degenerate() {
            return Ok(Self::polynomial(Poly::constant(c), domain));
        }
        let (lo, hi) = domain.into_bounds();
        Ok(Self::piecewise_linear(PiecewiseLinear::new(
            vec![lo, hi],
            vec![c.clone(), c],
        )?))
    }

    /// Sum of spikes whose supports are pairwise disjoint:
    /// `|z_j - z_k| >= 2·max(δ_j, δ_k)` for `j != k`.
    pub fn spike_sum(terms: Vec<SpikeTerm>, domain: RatInterval) -> Result<Self> {
        check_disjoint_supports(&terms)?;
        Ok(Self {
            domain,
            kind: FuncKind::SpikeSum(terms),
        })
    }

    /// Joins `left` on `[a, b]` with `right` on `[b, c]`; both must agree at `b`.
    pub fn affine_join(left: RealFunc, right: RealFunc) -> Result<Self> {
        if left.domain.hi() != right.domain.lo() {
            return Err(Error::InvalidFunction(
                "joined pieces must share an endpoint",
            ));
        }
        let b = left.domain.hi().clone();
        if left.eval_exact(&b)? != right.eval_exact(&b)? {
            return Err(Error::InvalidFunction(
                "joined pieces disagree at the junction",
            ));
        }
        Ok(Self {
            domain: left.domain.hull(&right.domain),
            kind: FuncKind::AffineJoin(Box::new(left), Box::new(right)),
        })
    }

    pub fn domain(&self) -> &RatInterval {
        &self.domain
    }

    pub fn kind(&self) -> &FuncKind {
        &self.kind
    }

    pub fn as_polynomial(&self) -> Option<&Poly> {
        match &self.kind {
            FuncKind::Polynomial(p) => Some(p),
            _ => None,
        }
    }

    pub fn eval_exact(&self, x: &Rational) -> Result<Rational> {
        if !self.domain.contains(x) {
            return Err(Error::OutsideDomain { x: x.clone() });
        }
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: &Rational) -> Rational {
        match &self.kind {
            FuncKind::Polynomial(p) => p.eval(x),
            FuncKind::PiecewiseLinear(pl) => pl.eval_unchecked(x),
            FuncKind::SpikeSum(terms) => terms.iter().map(|t| t.value(x)).sum(),
            FuncKind::AffineJoin(left, right) => {
                if x <= left.domain.hi() {
                    left.eval_unchecked(x)
                } else {
                    right.eval_unchecked(x)
                }
            }
        }
    }

    /// `|f(x)|`, exact.
    pub fn abs_at(&self, x: &Rational) -> Result<Rational> {
        self.eval_exact(x).map(|v| v.abs())
    }

    /// An interval containing `{f(x) : x ∈ iv}`; exact for degenerate `iv`.
    pub fn eval_enclosure(&self, iv: &RatInterval) -> Result<RatInterval> {
        if !self.domain.contains_interval(iv) {
            return Err(Error::IntervalOutsideDomain {
                lo: iv.lo().clone(),
                hi: iv.hi().clone(),
            });
        }
        Ok(self.enclosure_unchecked(iv))
    }

    fn enclosure_unchecked(&self, iv: &RatInterval) -> RatInterval {
        if iv.is_degenerate() {
            return RatInterval::point(self.eval_unchecked(iv.lo()));
        }
        match &self.kind {
            FuncKind::Polynomial(p) => p.range_enclosure(iv),
            FuncKind::PiecewiseLinear(pl) => pl.range_unchecked(iv),
            FuncKind::SpikeSum(terms) => spike_sum_range(terms, iv),
            FuncKind::AffineJoin(left, right) => {
                let pieces = [left, right]
                    .into_iter()
                    .filter_map(|piece| piece.domain.intersect(iv).map(|sub| (piece, sub)))
                    .map(|(piece, sub)| piece.enclosure_unchecked(&sub));
                pieces
                    .reduce(|a, b| a.hull(&b))
                    .expect("interval meets at least one piece")
            }
        }
    }

    /// Exact lowering to a piecewise-linear interpolant, when one exists
    /// (piecewise-linear, spike sums, polynomials of degree <= 1, and joins of those).
    pub fn to_piecewise_linear(&self) -> Option<PiecewiseLinear> {
        if self.domain.is_degenerate() {
            return None;
        }
        let (lo, hi) = (self.domain.lo().clone(), self.domain.hi().clone());
        match &self.kind {
            FuncKind::PiecewiseLinear(pl) => Some(pl.clone()),
            FuncKind::Polynomial(p) if p.degree().unwrap_or(0) <= 1 => {
                PiecewiseLinear::sample(vec![lo, hi], |x| p.eval(x)).ok()
            }
            FuncKind::Polynomial(_) => None,
            FuncKind::SpikeSum(terms) => {
                let mut points = vec![lo, hi];
                for t in terms {
                    points.extend(
                        t.spike
                            .kinks()
                            .into_iter()
                            .filter(|k| self.domain.contains(k)),
                    );
                }
                points.sort();
                points.dedup();
                PiecewiseLinear::sample(points, |x| self.eval_unchecked(x)).ok()
            }
            FuncKind::AffineJoin(left, right) => {
                let l = left.to_piecewise_linear()?;
                let r = right.to_piecewise_linear()?;
                let mut bps = l.breakpoints;
                let mut vals = l.values;
                bps.extend(r.breakpoints.into_iter().skip(1));
                vals.extend(r.values.into_iter().skip(1));
                PiecewiseLinear::new(bps, vals).ok()
            }
        }
    }

    pub fn derivative(&self) -> Result<Derivative> {
        if let FuncKind::Polynomial(p) = &self.kind {
            return Ok(Derivative::Polynomial(p.derivative()));
        }
        if let FuncKind::AffineJoin(..) = &self.kind {
            return Err(Error::Unsupported {
                op: "derivative",
                variant: self.kind.name(),
            });
        }
        let pl = self.to_piecewise_linear().ok_or(Error::Unsupported {
            op: "derivative",
            variant: self.kind.name(),
        })?;
        let steps = pl
            .breakpoints
            .windows(2)
            .zip(pl.values.windows(2))
            .map(|(x, y)| {
                (
                    RatInterval::spanning(x[0].clone(), x[1].clone()),
                    (&y[1] - &y[0]) / (&x[1] - &x[0]),
                )
            })
            .collect();
        Ok(Derivative::Steps(steps))
    }

    /// Exact supremum over the domain for functions that lower to a
    /// piecewise-linear interpolant.
    pub fn sup_exact(&self) -> Result<Rational> {
        if self.domain.is_degenerate() {
            return Ok(self.eval_unchecked(self.domain.lo()));
        }
        self.to_piecewise_linear()
            .map(|pl| pl.max_value())
            .ok_or(Error::Unsupported {
                op: "sup_exact",
                variant: self.kind.name(),
            })
    }

    /// Exact infimum over the domain, for the same class as [`sup_exact`](Self::sup_exact).
    pub fn inf_exact(&self) -> Result<Rational> {
        if self.domain.is_degenerate() {
            return Ok(self.eval_unchecked(self.domain.lo()));
        }
        self.to_piecewise_linear()
            .map(|pl| pl.min_value())
            .ok_or(Error::Unsupported {
                op: "inf_exact",
                variant: self.kind.name(),
            })
    }

    /// Certified bracket on `inf |f|` over a union of intervals, with gap at most `tol`.
    pub fn inf_certified(&self, region: &[RatInterval], tol: &Rational) -> Result<InfBracket> {
        self.inf_certified_with_budget(region, tol, DEFAULT_INF_BUDGET)
    }

    /// Like [`inf_certified`](Self::inf_certified) with an explicit enclosure budget.
    ///
    /// Functions that lower to a piecewise-linear interpolant are handled
    /// exactly by enumerating breakpoints and region endpoints. Everything
    /// else goes through branch-and-bound on `|f|`: the widest live box is
    /// bisected, boxes whose enclosure lower bound exceeds the best exact
    /// value seen so far are dropped, and the search stops once the gap
    /// between that value and the smallest live lower bound is at most `tol`.
    /// Running out of budget yields [`Error::Unresolved`] carrying the
    /// current (still valid) bracket.
    pub fn inf_certified_with_budget(
        &self,
        region: &[RatInterval],
        tol: &Rational,
        budget: usize,
    ) -> Result<InfBracket> {
        if !tol.is_positive() {
            return Err(Error::NonPositive { what: "tolerance" });
        }
        if region.is_empty() {
            return Err(Error::EmptyRegion);
        }
        for iv in region {
            if !self.domain.contains_interval(iv) {
                return Err(Error::IntervalOutsideDomain {
                    lo: iv.lo().clone(),
                    hi: iv.hi().clone(),
                });
            }
        }
        if let Some(pl) = self.to_piecewise_linear() {
            let m = region
                .iter()
                .map(|iv| pl.abs_min_unchecked(iv))
                .min()
                .expect("nonempty region");
            return Ok(InfBracket {
                lower: m.clone(),
                upper: m,
                work: 0,
            });
        }
        self.abs_branch_and_bound(region, tol, budget)
    }

    fn abs_branch_and_bound(
        &self,
        region: &[RatInterval],
        tol: &Rational,
        budget: usize,
    ) -> Result<InfBracket> {
        let mut upper: Option<Rational> = None;
        let offer = |v: Rational, upper: &mut Option<Rational>| {
            if upper.as_ref().is_none_or(|u| &v < u) {
                *upper = Some(v);
            }
        };
        for iv in region {
            offer(self.eval_unchecked(iv.lo()).abs(), &mut upper);
            offer(self.eval_unchecked(iv.hi()).abs(), &mut upper);
        }
        let mut heap: BinaryHeap<Box_> = BinaryHeap::new();
        let mut seq = 0usize;
        let mut work = 0usize;
        for iv in region {
            let lower = self.enclosure_unchecked(iv).abs().lo().clone();
            work += 1;
            heap.push(Box_::new(iv.clone(), lower, seq));
            seq += 1;
        }
        loop {
            let u = upper.clone().expect("region endpoints evaluated");
            // Boxes that cannot beat the incumbent are pruned lazily here.
            heap.retain(|b| b.lower <= u);
            let live_min = heap.iter().map(|b| &b.lower).min().cloned();
            let lower = match live_min {
                Some(l) => min_rat(&l, &u).clone(),
                None => u.clone(),
            };
            if &u - &lower <= *tol {
                return Ok(InfBracket {
                    lower,
                    upper: u,
                    work,
                });
            }
            if work >= budget {
                return Err(Error::Unresolved { lower, upper: u });
            }
            let Some(b) = heap.pop() else {
                unreachable!("gap is positive only while live boxes remain")
            };
            if b.iv.is_degenerate() {
                continue;
            }
            let (l, r) = b.iv.bisect();
            offer(self.eval_unchecked(l.hi()).abs(), &mut upper);
            for child in [l, r] {
                let lower = self.enclosure_unchecked(&child).abs().lo().clone();
                work += 1;
                heap.push(Box_::new(child, lower, seq));
                seq += 1;
            }
        }
    }
}

/// A live branch-and-bound box, ordered so the heap pops the widest box
/// first and, among equal widths, the one created earliest.
struct Box_ {
    iv: RatInterval,
    width: Rational,
    lower: Rational,
    seq: usize,
}

impl Box_ {
    fn new(iv: RatInterval, lower: Rational, seq: usize) -> Self {
        let width = iv.width();
        Self {
            iv,
            width,
            lower,
            seq,
        }
    }
}

impl PartialEq for Box_ {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Box_ {}

impl PartialOrd for Box_ {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Box_ {
    fn cmp(&self, other: &Self) -> Ordering {
        self.width
            .cmp(&other.width)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

fn check_disjoint_supports(terms: &[SpikeTerm]) -> Result<()> {
    let mut order: Vec<usize> = (0..terms.len()).collect();
    order.sort_by(|&a, &b| terms[a].spike.center.cmp(&terms[b].spike.center));
    // Adjacent checks suffice: the gaps add up while the required
    // separation only needs the larger of the two halfwidths.
    for w in order.windows(2) {
        let (a, b) = (&terms[w[0]].spike, &terms[w[1]].spike);
        let gap = &b.center - &a.center;
        let need = max_rat(&a.halfwidth, &b.halfwidth) * Rational::from_integer(2.into());
        if gap < need {
            let (first, second) = (w[0].min(w[1]), w[0].max(w[1]));
            return Err(Error::OverlappingSupports { first, second });
        }
    }
    Ok(())
}

fn spike_sum_range(terms: &[SpikeTerm], iv: &RatInterval) -> RatInterval {
    let eval = |x: &Rational| -> Rational { terms.iter().map(|t| t.value(x)).sum() };
    let mut lo = eval(iv.lo());
    let mut hi = lo.clone();
    let mut visit = |v: Rational| {
        if v < lo {
            lo = v;
        } else if v > hi {
            hi = v;
        }
    };
    visit(eval(iv.hi()));
    for t in terms {
        for k in t.spike.kinks() {
            if iv.lo() < &k && &k < iv.hi() {
                visit(eval(&k));
            }
        }
    }
    RatInterval::new(lo, hi).expect("ordered")
}

/// `s(t, δ, ·)` as a piecewise-linear function on `[0, 1]` widened to cover
/// the support.
pub fn spike(t: Rational, delta: Rational) -> Result<RealFunc> {
    let s = Spike::new(t, delta)?;
    let unit = RatInterval::spanning(Rational::zero(), Rational::one());
    spike_on(s.clone(), unit.hull(&s.support()))
}

/// `s(t, δ, ·)` restricted to `domain`, with breakpoints `t-δ, t, t+δ` clipped to it.
pub fn spike_on(s: Spike, domain: RatInterval) -> Result<RealFunc> {
    if domain.is_degenerate() {
        let v = s.value(domain.lo());
        return Ok(RealFunc::polynomial(Poly::constant(v), domain));
    }
    let mut points = vec![domain.lo().clone(), domain.hi().clone()];
    points.extend(s.kinks().into_iter().filter(|k| domain.contains(k)));
    points.sort();
    points.dedup();
    Ok(RealFunc::piecewise_linear(PiecewiseLinear::sample(
        points,
        |x| s.value(x),
    )?))
}

/// Spike sum on `[0, 1]` widened to cover every support; see [`RealFunc::spike_sum`].
pub fn spike_sum(terms: Vec<SpikeTerm>) -> Result<RealFunc> {
    let domain = terms.iter().fold(
        RatInterval::spanning(Rational::zero(), Rational::one()),
        |d, t| d.hull(&t.spike.support()),
    );
    RealFunc::spike_sum(terms, domain)
}

/// Points `lo, lo + step, ...` not exceeding `hi`, with `hi` appended when the
/// step does not land on it.
pub fn grid_points(domain: &RatInterval, step: &Rational) -> Result<Vec<Rational>> {
    if !step.is_positive() {
        return Err(Error::NonPositive { what: "grid step" });
    }
    let mut out = Vec::new();
    let mut x = domain.lo().clone();
    while &x <= domain.hi() {
        out.push(x.clone());
        x += step;
    }
    if out.last() != Some(domain.hi()) {
        out.push(domain.hi().clone());
    }
    Ok(out)
}
