//! JSON shapes for functions, moduli, certificates, witnesses and results.
//! Every number travels as an exact `"p/q"` string.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use zstab_core::func::{FuncKind, InfBracket, SpikeTerm};
use zstab_core::isolation::IsolationCertificate;
use zstab_core::rootfind::{RootKind, RootResult};
use zstab_core::uniform::{CertificateMethod, CoverageReport, Threshold, UniformCertificate};
use zstab_core::zstability::{
    CertifiedEntry, FalsificationWitness, Modulus, ModulusKind, Representation,
};
use zstab_core::{PiecewiseLinear, Poly, RatInterval, Rational, RealFunc};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("malformed rational `{0}`: expected p/q with integer p and q")]
    Rational(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("invalid {what}: {detail}")]
    Invalid { what: &'static str, detail: String },
    #[error(transparent)]
    Core(#[from] zstab_core::Error),
}

/// Parses `p/q` or a bare integer. Decimals and exponents are rejected.
pub fn parse_rational(s: &str) -> Result<Rational, FormatError> {
    let t = s.trim();
    let bad = || FormatError::Rational(s.to_string());
    let int = |p: &str| -> Result<BigInt, FormatError> {
        let digits = p.strip_prefix(['-', '+']).unwrap_or(p);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        BigInt::from_str(p).map_err(|_| bad())
    };
    match t.split_once('/') {
        Some((p, q)) => {
            let (p, q) = (int(p)?, int(q)?);
            if q.is_zero() {
                return Err(FormatError::ZeroDenominator(s.to_string()));
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(int(t)?)),
    }
}

/// `p/q` with the denominator always written out.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// A rational serialized as a `"p/q"` string.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatStr(pub Rational);

impl fmt::Debug for RatStr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl fmt::Display for RatStr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl FromStr for RatStr {
    type Err = FormatError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rational(s).map(RatStr)
    }
}

impl From<Rational> for RatStr {
    fn from(r: Rational) -> Self {
        RatStr(r)
    }
}

impl From<&Rational> for RatStr {
    fn from(r: &Rational) -> Self {
        RatStr(r.clone())
    }
}

impl Serialize for RatStr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for RatStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s)
            .map(RatStr)
            .map_err(serde::de::Error::custom)
    }
}

fn pair(iv: &RatInterval) -> [RatStr; 2] {
    [iv.lo().into(), iv.hi().into()]
}

fn interval(p: &[RatStr; 2]) -> Result<RatInterval, FormatError> {
    RatInterval::new(p[0].0.clone(), p[1].0.clone()).ok_or_else(|| FormatError::Invalid {
        what: "interval",
        detail: format!("[{}, {}] has lo > hi", p[0], p[1]),
    })
}

fn rats(v: &[Rational]) -> Vec<RatStr> {
    v.iter().map(RatStr::from).collect()
}

fn unrats(v: Vec<RatStr>) -> Vec<Rational> {
    v.into_iter().map(|r| r.0).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Polynomial,
    PiecewiseLinear,
    SpikeSum,
    AffineJoin,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpikeDto {
    pub center: RatStr,
    pub halfwidth: RatStr,
    pub coefficient: RatStr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Payload {
    Polynomial {
        coefficients: Vec<RatStr>,
    },
    PiecewiseLinear {
        breakpoints: Vec<RatStr>,
        values: Vec<RatStr>,
    },
    SpikeSum {
        spikes: Vec<SpikeDto>,
    },
    AffineJoin {
        left: Box<FuncDto>,
        right: Box<FuncDto>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuncDto {
    pub variant: Variant,
    pub domain: [RatStr; 2],
    pub payload: Payload,
}

impl From<&RealFunc> for FuncDto {
    fn from(f: &RealFunc) -> Self {
        let (variant, payload) = match f.kind() {
            FuncKind::Polynomial(p) => (
                Variant::Polynomial,
                Payload::Polynomial {
                    coefficients: rats(p.coeffs()),
                },
            ),
            FuncKind::PiecewiseLinear(pl) => (
                Variant::PiecewiseLinear,
                Payload::PiecewiseLinear {
                    breakpoints: rats(pl.breakpoints()),
                    values: rats(pl.values()),
                },
            ),
            FuncKind::SpikeSum(terms) => (
                Variant::SpikeSum,
                Payload::SpikeSum {
                    spikes: terms
                        .iter()
                        .map(|t| SpikeDto {
                            center: t.spike.center().into(),
                            halfwidth: t.spike.halfwidth().into(),
                            coefficient: (&t.coefficient).into(),
                        })
                        .collect(),
                },
            ),
            FuncKind::AffineJoin(l, r) => (
                Variant::AffineJoin,
                Payload::AffineJoin {
                    left: Box::new(FuncDto::from(l.as_ref())),
                    right: Box::new(FuncDto::from(r.as_ref())),
                },
            ),
        };
        FuncDto {
            variant,
            domain: pair(f.domain()),
            payload,
        }
    }
}

impl TryFrom<FuncDto> for RealFunc {
    type Error = FormatError;

    fn try_from(d: FuncDto) -> Result<Self, FormatError> {
        let domain = interval(&d.domain)?;
        let mismatch = || FormatError::Invalid {
            what: "function",
            detail: format!("payload does not match variant {:?}", d.variant),
        };
        let f = match (&d.variant, d.payload.clone()) {
            (Variant::Polynomial, Payload::Polynomial { coefficients }) => {
                RealFunc::polynomial(Poly::from_coeffs(unrats(coefficients)), domain.clone())
            }
            (
                Variant::PiecewiseLinear,
                Payload::PiecewiseLinear {
                    breakpoints,
                    values,
                },
            ) => RealFunc::piecewise_linear(PiecewiseLinear::new(
                unrats(breakpoints),
                unrats(values),
            )?),
            (Variant::SpikeSum, Payload::SpikeSum { spikes }) => {
                let terms = spikes
                    .into_iter()
                    .map(|s| SpikeTerm::new(s.center.0, s.halfwidth.0, s.coefficient.0))
                    .collect::<Result<Vec<_>, _>>()?;
                RealFunc::spike_sum(terms, domain.clone())?
            }
            (Variant::AffineJoin, Payload::AffineJoin { left, right }) => {
                RealFunc::affine_join(Self::try_from(*left)?, Self::try_from(*right)?)?
            }
            _ => return Err(mismatch()),
        };
        if f.domain() != &domain {
            return Err(FormatError::Invalid {
                what: "function",
                detail: format!("declared domain {domain} differs from {}", f.domain()),
            });
        }
        Ok(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaDto {
    pub gamma: RatStr,
    pub m: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDto {
    pub eps: RatStr,
    pub delta: RatStr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModulusDto {
    /// `uniform` or `pointwise`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at: Option<RatStr>,
    /// `formula`, `table` or `certified`.
    pub representation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<FormulaDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<EntryDto>>,
}

impl From<&Modulus> for ModulusDto {
    fn from(m: &Modulus) -> Self {
        let (kind, at) = match m.kind() {
            ModulusKind::Uniform => ("uniform", None),
            ModulusKind::Pointwise(x) => ("pointwise", Some(x.into())),
        };
        let (representation, formula, entries) = match m.representation() {
            Representation::Formula { gamma, m } => (
                "formula",
                Some(FormulaDto {
                    gamma: gamma.into(),
                    m: *m,
                }),
                None,
            ),
            Representation::Table(t) => (
                "table",
                None,
                Some(
                    t.iter()
                        .map(|(e, d)| EntryDto {
                            eps: e.into(),
                            delta: d.into(),
                            certificate: None,
                        })
                        .collect(),
                ),
            ),
            Representation::Certified(c) => (
                "certified",
                None,
                Some(
                    c.iter()
                        .map(|e| EntryDto {
                            eps: (&e.eps).into(),
                            delta: (&e.delta).into(),
                            certificate: Some(e.certificate.clone()),
                        })
                        .collect(),
                ),
            ),
        };
        ModulusDto {
            kind: kind.to_string(),
            at,
            representation: representation.to_string(),
            formula,
            entries,
        }
    }
}

impl TryFrom<ModulusDto> for Modulus {
    type Error = FormatError;

    fn try_from(d: ModulusDto) -> Result<Self, FormatError> {
        let kind = match (d.kind.as_str(), d.at) {
            ("uniform", None) => ModulusKind::Uniform,
            ("pointwise", Some(x)) => ModulusKind::Pointwise(x.0),
            (k, _) => {
                return Err(FormatError::Invalid {
                    what: "modulus kind",
                    detail: k.to_string(),
                })
            }
        };
        let missing = |what: &'static str| FormatError::Invalid {
            what,
            detail: "missing".to_string(),
        };
        let repr = match d.representation.as_str() {
            "formula" => {
                let f = d.formula.ok_or_else(|| missing("formula"))?;
                Representation::Formula {
                    gamma: f.gamma.0,
                    m: f.m,
                }
            }
            "table" => Representation::Table(
                d.entries
                    .ok_or_else(|| missing("entries"))?
                    .into_iter()
                    .map(|e| (e.eps.0, e.delta.0))
                    .collect(),
            ),
            "certified" => Representation::Certified(
                d.entries
                    .ok_or_else(|| missing("entries"))?
                    .into_iter()
                    .map(|e| CertifiedEntry {
                        eps: e.eps.0,
                        delta: e.delta.0,
                        certificate: e.certificate.unwrap_or_default(),
                    })
                    .collect(),
            ),
            other => {
                return Err(FormatError::Invalid {
                    what: "modulus representation",
                    detail: other.to_string(),
                })
            }
        };
        Ok(Modulus::new(kind, repr)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDto {
    pub x: RatStr,
    pub fx_abs: RatStr,
    pub dist_lower: RatStr,
    pub delta: RatStr,
    pub eps: RatStr,
}

impl From<&FalsificationWitness> for WitnessDto {
    fn from(w: &FalsificationWitness) -> Self {
        WitnessDto {
            x: (&w.x).into(),
            fx_abs: (&w.fx_abs).into(),
            dist_lower: (&w.dist_lower).into(),
            delta: (&w.delta).into(),
            eps: (&w.eps).into(),
        }
    }
}

impl From<WitnessDto> for FalsificationWitness {
    fn from(d: WitnessDto) -> Self {
        FalsificationWitness {
            x: d.x.0,
            fx_abs: d.fx_abs.0,
            dist_lower: d.dist_lower.0,
            delta: d.delta.0,
            eps: d.eps.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDto {
    pub eps: RatStr,
    /// `"p/q"`, or `"inf"` for a vacuous certificate.
    pub delta: String,
    pub region: Vec<[RatStr; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inf_lower: Option<RatStr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inf_upper: Option<RatStr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub work: Option<usize>,
    pub method: String,
    pub vacuous: bool,
}

impl From<&UniformCertificate> for CertificateDto {
    fn from(c: &UniformCertificate) -> Self {
        CertificateDto {
            eps: (&c.eps).into(),
            delta: match &c.delta {
                Threshold::Finite(d) => format_rational(d),
                Threshold::Infinite => "inf".to_string(),
            },
            region: c.region.iter().map(pair).collect(),
            inf_lower: c.inf_bracket.as_ref().map(|b| (&b.lower).into()),
            inf_upper: c.inf_bracket.as_ref().map(|b| (&b.upper).into()),
            work: c.inf_bracket.as_ref().map(|b| b.work),
            method: c.method.name().to_string(),
            vacuous: c.vacuous,
        }
    }
}

impl TryFrom<CertificateDto> for UniformCertificate {
    type Error = FormatError;

    fn try_from(d: CertificateDto) -> Result<Self, FormatError> {
        let delta = match d.delta.as_str() {
            "inf" => Threshold::Infinite,
            s => Threshold::Finite(parse_rational(s)?),
        };
        let method = match d.method.as_str() {
            "inf_over_k" => CertificateMethod::InfOverK,
            "polynomial_formula" => CertificateMethod::PolynomialFormula,
            other => {
                return Err(FormatError::Invalid {
                    what: "certificate method",
                    detail: other.to_string(),
                })
            }
        };
        let inf_bracket = match (d.inf_lower, d.inf_upper) {
            (Some(l), Some(u)) => Some(InfBracket {
                lower: l.0,
                upper: u.0,
                work: d.work.unwrap_or(0),
            }),
            (None, None) => None,
            _ => {
                return Err(FormatError::Invalid {
                    what: "certificate",
                    detail: "inf_lower and inf_upper must appear together".to_string(),
                })
            }
        };
        Ok(UniformCertificate {
            eps: d.eps.0,
            delta,
            region: d.region.iter().map(interval).collect::<Result<_, _>>()?,
            inf_bracket,
            method,
            vacuous: d.vacuous,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageDto {
    pub verdict: String,
    pub sup_lo: RatStr,
    pub sup_hi: RatStr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<RatStr>,
    pub empty_sublevel: bool,
}

impl From<&CoverageReport> for CoverageDto {
    fn from(r: &CoverageReport) -> Self {
        CoverageDto {
            verdict: r.verdict.name().to_string(),
            sup_lo: r.sup.lo().into(),
            sup_hi: r.sup.hi().into(),
            witness: r.witness.as_ref().map(RatStr::from),
            empty_sublevel: r.empty_sublevel,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDto {
    /// `exact_zero`, `localized` or `bracket`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<RatStr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bracket: Option<[RatStr; 2]>,
    /// Localization radius: the tolerance for brackets and exact zeros,
    /// the stopper's radius for localized results.
    pub epsilon: RatStr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<RatStr>,
    pub trace_length: usize,
}

impl RootDto {
    pub fn new(r: &RootResult, eps: &Rational) -> Self {
        let n = r.trace.len();
        match &r.kind {
            RootKind::ExactZero(x) => RootDto {
                kind: "exact_zero".to_string(),
                point: Some(x.into()),
                bracket: None,
                epsilon: eps.into(),
                delta: None,
                trace_length: n,
            },
            RootKind::Localized {
                center,
                radius,
                evidence,
                ..
            } => RootDto {
                kind: "localized".to_string(),
                point: Some(center.into()),
                bracket: None,
                epsilon: radius.into(),
                delta: evidence.delta().map(RatStr::from),
                trace_length: n,
            },
            RootKind::Bracket { lo, hi } => RootDto {
                kind: "bracket".to_string(),
                point: None,
                bracket: Some([lo.into(), hi.into()]),
                epsilon: eps.into(),
                delta: None,
                trace_length: n,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolationDto {
    pub rank: usize,
    pub region: [RatStr; 2],
    pub sep: RatStr,
    pub zeros_in_region: Vec<RatStr>,
}

impl IsolationDto {
    pub fn new(c: &IsolationCertificate, zeros_in_region: &[Rational]) -> Self {
        IsolationDto {
            rank: c.rank,
            region: pair(&c.region),
            sep: (&c.sep).into(),
            zeros_in_region: rats(zeros_in_region),
        }
    }
}

impl TryFrom<IsolationDto> for IsolationCertificate {
    type Error = FormatError;

    fn try_from(d: IsolationDto) -> Result<Self, FormatError> {
        Ok(IsolationCertificate {
            rank: d.rank,
            region: interval(&d.region)?,
            sep: d.sep.0,
        })
    }
}

/// Pretty JSON followed by a single LF.
pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("DTOs always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use zstab_core::num::{int, rat};

    #[test]
    fn rationals_parse_and_print() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-6/8").unwrap(), rat(-3, 4));
        assert_eq!(parse_rational("5").unwrap(), int(5));
        assert_eq!(format_rational(&int(1)), "1/1");
        assert_eq!(format_rational(&rat(-1, 1024)), "-1/1024");
    }

    #[test]
    fn rationals_reject_decimals_and_garbage() {
        for s in ["0.5", "1e3", "1/", "/2", "a/b", "", "1/0", "1//2", "--1/2"] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn mismatched_payload_is_rejected() {
        let d = FuncDto {
            variant: Variant::SpikeSum,
            domain: [int(0).into(), int(1).into()],
            payload: Payload::Polynomial {
                coefficients: vec![int(1).into()],
            },
        };
        assert!(RealFunc::try_from(d).is_err());
    }
}
