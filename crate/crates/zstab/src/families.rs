//! Named function families selectable from the command line.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;
use zstab_core::corpus::{
    cubic, cubic_with_root, plateau_with, signed_plateau, spike_barrier_parts, PlateauParams,
    SpikeBarrierParams,
};
use zstab_core::num::{int, pow2, rat};
use zstab_core::rootfind::{isolate_real_roots, RootLocation};
use zstab_core::{LocatedZeroSet, Poly, RatInterval, Rational, RealFunc};

use crate::format::{parse_rational, FormatError, RatStr};

pub const FAMILIES: [&str; 5] = [
    "cubic",
    "plateau",
    "signed-plateau",
    "spike-barrier",
    "linear",
];

/// Parameter names accepted by each family.
pub fn allowed_params(family: &str) -> Option<&'static [&'static str]> {
    Some(match family {
        "cubic" => &["a", "root"],
        "plateau" => &["n", "center"],
        "signed-plateau" => &["n"],
        "spike-barrier" => &["k"],
        "linear" => &["root"],
        _ => return None,
    })
}

/// A constructed family member and what is known about it.
#[derive(Clone, Debug)]
pub struct Instance {
    pub family: String,
    pub params: BTreeMap<String, String>,
    pub func: RealFunc,
    /// `None` when the zeros are irrational and not exactly representable.
    pub zeros: Option<Vec<Rational>>,
    pub multiplicities: Option<Vec<usize>>,
    pub known_inf: Option<Rational>,
    pub construction: &'static str,
}

impl Instance {
    pub fn located_zeros(&self) -> Result<LocatedZeroSet, FormatError> {
        let (Some(z), Some(m)) = (&self.zeros, &self.multiplicities) else {
            return Err(FormatError::Invalid {
                what: "zero set",
                detail: format!(
                    "{} with these parameters has no rational zeros to locate; \
                     choose the member by its root instead",
                    self.family
                ),
            });
        };
        Ok(LocatedZeroSet::finite_with_multiplicities(
            z.clone(),
            m.clone(),
        )?)
    }

    pub fn metadata(&self) -> Metadata {
        Metadata {
            family: self.family.clone(),
            params: self.params.clone(),
            known_zeros: self
                .zeros
                .as_ref()
                .map(|z| z.iter().map(RatStr::from).collect()),
            known_inf: self.known_inf.as_ref().map(RatStr::from),
            construction: self.construction.to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Metadata {
    pub family: String,
    pub params: BTreeMap<String, String>,
    pub known_zeros: Option<Vec<RatStr>>,
    pub known_inf: Option<RatStr>,
    pub construction: String,
}

fn invalid(what: &'static str, detail: impl Into<String>) -> FormatError {
    FormatError::Invalid {
        what,
        detail: detail.into(),
    }
}

/// Parses `k=v,k=v` pairs.
pub fn parse_params(s: &str) -> Result<BTreeMap<String, String>, FormatError> {
    let mut out = BTreeMap::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| invalid("params", format!("`{part}` is not key=value")))?;
        if out
            .insert(k.trim().to_string(), v.trim().to_string())
            .is_some()
        {
            return Err(invalid("params", format!("`{k}` given twice")));
        }
    }
    Ok(out)
}

fn positive_int<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, FormatError> {
    v.parse().map_err(|_| {
        invalid(
            "params",
            format!("{key} must be a positive integer, got `{v}`"),
        )
    })
}

/// Zeros with their multiplicities.
type ZeroList = (Vec<Rational>, Vec<usize>);

/// Rational roots of a polynomial on its domain, when all of them are rational.
fn rational_roots(f: &RealFunc) -> Result<Option<ZeroList>, FormatError> {
    let p = f.as_polynomial().expect("polynomial family");
    let mut zs = Vec::new();
    let mut ms = Vec::new();
    for r in isolate_real_roots(p, f.domain(), &pow2(-20))? {
        match r.location {
            RootLocation::Exact(x) => {
                zs.push(x);
                ms.push(r.multiplicity);
            }
            RootLocation::Bracket(_) => return Ok(None),
        }
    }
    Ok(Some((zs, ms)))
}

/// Builds a family member. Parameters not listed by [`allowed_params`] are rejected.
pub fn build(family: &str, params: BTreeMap<String, String>) -> Result<Instance, FormatError> {
    let allowed = allowed_params(family).ok_or_else(|| {
        invalid(
            "family",
            format!(
                "unknown family `{family}`; expected one of {}",
                FAMILIES.join(", ")
            ),
        )
    })?;
    if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(invalid(
            "params",
            format!(
                "{family} does not take `{k}`; accepted: {}",
                allowed.join(", ")
            ),
        ));
    }
    let rat_param = |k: &str| params.get(k).map(|v| parse_rational(v)).transpose();
    let n_param = || -> Result<u32, FormatError> {
        let n = params
            .get("n")
            .ok_or_else(|| invalid("params", format!("{family} needs n")))?;
        let n: u32 = positive_int("n", n)?;
        if n == 0 {
            return Err(invalid("params", "n must be at least 1"));
        }
        Ok(n)
    };

    let inst = |func, zeros: Option<ZeroList>, known_inf, construction| {
        let (zeros, multiplicities) = zeros.unzip();
        Instance {
            family: family.to_string(),
            params: params.clone(),
            func,
            zeros,
            multiplicities,
            known_inf,
            construction,
        }
    };

    Ok(match family {
        "cubic" => {
            let (a, root) = (rat_param("a")?, rat_param("root")?);
            let func = match (&a, &root) {
                (Some(a), None) => cubic(a.clone())?,
                (None, Some(r)) => {
                    if *r <= rat(1, 2) {
                        return Err(invalid("params", "cubic root must exceed 1/2"));
                    }
                    cubic_with_root(r)?
                }
                (None, None) => cubic(int(0))?,
                (Some(_), Some(_)) => return Err(invalid("params", "give a or root, not both")),
            };
            let zeros = rational_roots(&func)?;
            // f peaks at the right endpoint, so it has a zero iff f(3/4) >= 0
            let right = func.eval_exact(func.domain().hi())?;
            let inf = if right < int(0) { -right } else { int(0) };
            inst(func, zeros, Some(inf), "x^2(x - 1/2) - a on [-3/4, 3/4]")
        }
        "plateau" => {
            let mut p = PlateauParams::new(n_param()?);
            if let Some(c) = rat_param("center")? {
                p = p.with_center(c);
            }
            let func = plateau_with(&p)?;
            inst(
                func,
                Some((vec![int(1)], vec![1])),
                Some(int(0)),
                "max(2^-n, |x - c|) on [0, 1/2], flat, then linear down to 0 at 1",
            )
        }
        "signed-plateau" => {
            let func = signed_plateau(n_param()?)?;
            inst(
                func,
                Some((vec![int(1)], vec![1])),
                Some(int(0)),
                "plateau continued by 4(1 - x) on [1, 5/4]",
            )
        }
        "spike-barrier" => {
            let k = match params.get("k") {
                Some(v) => positive_int::<usize>("k", v)?,
                None => 3,
            };
            if k == 0 || k > 62 {
                return Err(invalid("params", "k must be in 1..=62"));
            }
            let (_, g) = spike_barrier_parts(&SpikeBarrierParams::standard(k))?;
            let inf = g.inf_exact()?;
            inst(
                g,
                Some((Vec::new(), Vec::new())),
                Some(inf),
                "1 - sum of (1 - 2^-k) s(z_k, d_k, x) over disjoint spikes",
            )
        }
        "linear" => {
            let r = rat_param("root")?.unwrap_or_else(|| rat(1, 2));
            let domain = RatInterval::new(int(0), int(1)).expect("ordered");
            if !domain.contains(&r) {
                return Err(invalid("params", "linear root must lie in [0, 1]"));
            }
            let func = RealFunc::polynomial(Poly::from_coeffs(vec![-r.clone(), int(1)]), domain);
            inst(
                func,
                Some((vec![r], vec![1])),
                Some(Rational::zero()),
                "x - r on [0, 1]",
            )
        }
        _ => unreachable!("checked by allowed_params"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> BTreeMap<String, String> {
        parse_params(s).unwrap()
    }

    #[test]
    fn unknown_params_are_rejected() {
        assert!(build("plateau", p("n=3,k=2")).is_err());
        assert!(build("nonesuch", p("")).is_err());
        assert!(parse_params("n=1,n=2").is_err());
        assert!(parse_params("n").is_err());
    }

    #[test]
    fn cubic_zero_set_is_exact_when_rational() {
        let i = build("cubic", p("a=0")).unwrap();
        assert_eq!(i.zeros, Some(vec![int(0), rat(1, 2)]));
        assert_eq!(i.multiplicities, Some(vec![2, 1]));
        let i = build("cubic", p("a=1/64")).unwrap();
        assert!(i.zeros.is_none());
        assert!(i.located_zeros().is_err());
        assert_eq!(i.known_inf, Some(int(0)));
        let i = build("cubic", p("a=11/64")).unwrap();
        assert_eq!(i.known_inf, Some(rat(1, 32)));
        let i = build("cubic", p("root=5/8")).unwrap();
        assert_eq!(i.zeros, Some(vec![rat(5, 8)]));
    }

    #[test]
    fn barrier_reports_its_infimum() {
        let i = build("spike-barrier", p("k=3")).unwrap();
        assert_eq!(i.known_inf, Some(rat(1, 8)));
    }
}
