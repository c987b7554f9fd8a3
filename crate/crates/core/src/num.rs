//! Exact scalars, closed rational intervals and complex rationals.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational in canonical form (gcd 1, positive denominator).
pub type Rational = BigRational;

/// `n / d` as a rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^k` for any integer exponent.
pub fn pow2(k: i64) -> Rational {
    let mag = BigInt::one() << k.unsigned_abs();
    if k >= 0 {
        Rational::from_integer(mag)
    } else {
        Rational::new(BigInt::one(), mag)
    }
}

pub fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) / int(2)
}

pub(crate) fn min_rat<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a <= b {
        a
    } else {
        b
    }
}

pub(crate) fn max_rat<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a >= b {
        a
    } else {
        b
    }
}

/// Closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatInterval {
    lo: Rational,
    hi: Rational,
}

impl RatInterval {
    /// Returns `None` when `lo > hi`.
    pub fn new(lo: Rational, hi: Rational) -> Option<Self> {
        (lo <= hi).then_some(Self { lo, hi })
    }

    /// Builds the hull of two endpoints given in either order.
    pub fn spanning(a: Rational, b: Rational) -> Self {
        if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    pub fn point(x: Rational) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn into_bounds(self) -> (Rational, Rational) {
        (self.lo, self.hi)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        midpoint(&self.lo, &self.hi)
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &RatInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn intersect(&self, other: &RatInterval) -> Option<RatInterval> {
        RatInterval::new(
            max_rat(&self.lo, &other.lo).clone(),
            min_rat(&self.hi, &other.hi).clone(),
        )
    }

    pub fn hull(&self, other: &RatInterval) -> RatInterval {
        RatInterval {
            lo: min_rat(&self.lo, &other.lo).clone(),
            hi: max_rat(&self.hi, &other.hi).clone(),
        }
    }

    pub fn bisect(&self) -> (RatInterval, RatInterval) {
        let m = self.mid();
        (
            RatInterval {
                lo: self.lo.clone(),
                hi: m.clone(),
            },
            RatInterval {
                lo: m,
                hi: self.hi.clone(),
            },
        )
    }

    /// Range of `|x|` over the interval.
    pub fn abs(&self) -> RatInterval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            RatInterval {
                lo: -&self.hi,
                hi: -&self.lo,
            }
        } else {
            RatInterval {
                lo: Rational::zero(),
                hi: max_rat(&-&self.lo, &self.hi).clone(),
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> RatInterval {
        RatInterval::spanning(&self.lo * c, &self.hi * c)
    }

    /// Distance from the interval to a point (zero when the point is inside).
    pub fn distance_to(&self, x: &Rational) -> Rational {
        if x < &self.lo {
            &self.lo - x
        } else if x > &self.hi {
            x - &self.hi
        } else {
            Rational::zero()
        }
    }
}

impl fmt::Debug for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Add for &RatInterval {
    type Output = RatInterval;
    fn add(self, rhs: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl Sub for &RatInterval {
    type Output = RatInterval;
    fn sub(self, rhs: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl Mul for &RatInterval {
    type Output = RatInterval;
    fn mul(self, rhs: &RatInterval) -> RatInterval {
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let mut lo = &products[0];
        let mut hi = &products[0];
        for p in &products[1..] {
            lo = min_rat(lo, p);
            hi = max_rat(hi, p);
        }
        RatInterval {
            lo: lo.clone(),
            hi: hi.clone(),
        }
    }
}

impl Neg for &RatInterval {
    type Output = RatInterval;
    fn neg(self) -> RatInterval {
        RatInterval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

/// `re + i·im` with exact rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ComplexRational {
    pub re: Rational,
    pub im: Rational,
}

impl ComplexRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self {
            re,
            im: Rational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::real(Rational::zero())
    }

    pub fn one() -> Self {
        Self::real(Rational::one())
    }

    pub fn i() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    /// `|z|^2`, exact.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl Add for &ComplexRational {
    type Output = ComplexRational;
    fn add(self, rhs: &ComplexRational) -> ComplexRational {
        ComplexRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &ComplexRational {
    type Output = ComplexRational;
    fn sub(self, rhs: &ComplexRational) -> ComplexRational {
        ComplexRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &ComplexRational {
    type Output = ComplexRational;
    fn mul(self, rhs: &ComplexRational) -> ComplexRational {
        ComplexRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &ComplexRational {
    type Output = ComplexRational;
    fn neg(self) -> ComplexRational {
        ComplexRational::new(-&self.re, -&self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow2_handles_both_signs() {
        assert_eq!(pow2(3), int(8));
        assert_eq!(pow2(-10), rat(1, 1024));
        assert_eq!(pow2(0), int(1));
    }

    #[test]
    fn interval_mul_covers_sign_mixes() {
        let a = RatInterval::new(int(-2), int(3)).unwrap();
        let b = RatInterval::new(int(-1), int(4)).unwrap();
        let p = &a * &b;
        assert_eq!(p.lo(), &int(-8));
        assert_eq!(p.hi(), &int(12));
    }

    #[test]
    fn abs_of_straddling_interval_starts_at_zero() {
        let a = RatInterval::new(rat(-3, 2), rat(1, 2)).unwrap();
        assert_eq!(a.abs(), RatInterval::new(int(0), rat(3, 2)).unwrap());
        let b = RatInterval::new(int(-3), int(-1)).unwrap();
        assert_eq!(b.abs(), RatInterval::new(int(1), int(3)).unwrap());
    }

    #[test]
    fn rejects_reversed_bounds() {
        assert!(RatInterval::new(int(1), int(0)).is_none());
    }

    #[test]
    fn complex_norm_is_exact() {
        let z = ComplexRational::new(rat(3, 5), rat(4, 5));
        assert_eq!(z.norm_sqr(), int(1));
        let w = &z * &ComplexRational::i();
        assert_eq!(w, ComplexRational::new(rat(-4, 5), rat(3, 5)));
    }
}
