//! Command-line front end. Each command writes one artifact (JSON or CSV)
//! and maps its verdict onto the exit status.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use zstab_core::corpus::{reciprocal_zeros, standard_corpus};
use zstab_core::isolation::finite_intersection_rank;
use zstab_core::num::{int, pow2};
use zstab_core::rootfind::{tolerance_scan, zstable_bisect, RootKind, Stopper};
use zstab_core::uniform::{
    falsify_uniform, sublevel_coverage, uniform_modulus, Coverage, PolyFactorization,
};
use zstab_core::{ComplexRational, RatInterval, Rational};

use crate::families::{build, parse_params, Instance, FAMILIES};
use crate::format::{
    parse_rational, to_json, CertificateDto, CoverageDto, FuncDto, IsolationDto, RatStr, RootDto,
    WitnessDto,
};
use crate::sweep::{plateau_sweep, plateau_sweep_csv, polybound_trials};

/// Exit status for success, a certificate, or an unresolved verdict.
pub const EXIT_OK: u8 = 0;
/// Exit status when a finding was made: a witness, a `not_covered` verdict,
/// or the stopping demonstration.
pub const EXIT_FINDING: u8 = 1;
/// Exit status for usage and computation errors.
pub const EXIT_ERROR: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "zstab",
    version,
    about = "Exact experiments on zero-stability of real functions"
)]
pub struct Cli {
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StopperArg {
    None,
    Pointwise,
    Uniform,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ZerosArg {
    Reciprocal,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn positive(s: &str) -> Result<Rational, String> {
    let r = rational(s)?;
    if r <= int(0) {
        return Err(format!("{s} must be positive"));
    }
    Ok(r)
}

fn interval(s: &str) -> Result<RatInterval, String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    RatInterval::new(rational(lo)?, rational(hi)?).ok_or_else(|| format!("{s}: lo exceeds hi"))
}

fn n_range(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(':').ok_or("expected a:b")?;
    let p = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|_| format!("`{t}` is not an integer"))
    };
    Ok((p(a)?, p(b)?))
}

/// Roots parsed from one `re:im,re:im,...` argument.
#[derive(Clone, Debug)]
pub struct RootList(pub Vec<ComplexRational>);

fn roots(s: &str) -> Result<RootList, String> {
    s.split(',')
        .map(|r| {
            let (re, im) = r.split_once(':').unwrap_or((r, "0"));
            Ok(ComplexRational::new(rational(re)?, rational(im)?))
        })
        .collect::<Result<_, String>>()
        .map(RootList)
}

/// Selects a family member, by named flags or `--params k=v,...`.
#[derive(Clone, Debug, Args)]
pub struct FamilyArgs {
    /// One of cubic, plateau, signed-plateau, spike-barrier, linear.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub center: Option<String>,
    #[arg(long)]
    pub root: Option<String>,
    #[arg(long)]
    pub k: Option<String>,
    /// Extra parameters as `key=value` pairs separated by commas.
    #[arg(long)]
    pub params: Option<String>,
}

impl FamilyArgs {
    pub fn instance(&self) -> anyhow::Result<Instance> {
        let mut params = match &self.params {
            Some(p) => parse_params(p)?,
            None => BTreeMap::new(),
        };
        for (k, v) in [
            ("n", &self.n),
            ("a", &self.a),
            ("center", &self.center),
            ("root", &self.root),
            ("k", &self.k),
        ] {
            if let Some(v) = v {
                if params.insert(k.to_string(), v.clone()).is_some() {
                    bail!("parameter `{k}` given both as a flag and in --params");
                }
            }
        }
        let family = self.family.as_deref().context("--family is required")?;
        Ok(build(family, params)?)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the standard corpus or export one family member.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Certify a uniform modulus, or sweep plateau members.
    Modulus {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_parser = positive)]
        eps: Rational,
        /// Gap allowed between the certified infimum bounds.
        #[arg(long, value_parser = positive, default_value = "1/1048576")]
        tau: Rational,
        /// Plateau members `a:b` (inclusive); `a > b` is an empty sweep.
        #[arg(long, value_parser = n_range)]
        sweep_n: Option<(u32, u32)>,
    },
    /// Product bound for a polynomial given by its roots, or seeded random trials.
    Polybound {
        /// Roots as `re:im` separated by commas.
        #[arg(long, value_parser = roots)]
        roots: Option<RootList>,
        #[arg(long, value_parser = positive, default_value = "1")]
        gamma: Rational,
        #[arg(long, value_parser = positive)]
        eps: Option<Rational>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Search for a point refuting a claimed (eps, delta) pair.
    Falsify {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_parser = positive)]
        eps: Rational,
        #[arg(long, value_parser = positive)]
        delta: Rational,
        #[arg(long, default_value_t = 4000)]
        budget: usize,
    },
    /// Bisection with an optional certified stopping rule.
    Bisect {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_parser = rational)]
        lo: Rational,
        #[arg(long, value_parser = rational)]
        hi: Rational,
        #[arg(long, value_parser = positive)]
        eps: Rational,
        #[arg(long, value_enum, default_value_t = StopperArg::None)]
        stopper: StopperArg,
        #[arg(long, value_parser = positive, default_value = "1/1048576")]
        tau: Rational,
    },
    /// Does the sublevel set {|f| <= delta} stay within eps of the zeros?
    Coverage {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_parser = positive)]
        delta: Rational,
        #[arg(long, value_parser = positive)]
        eps: Rational,
        #[arg(long, value_parser = positive, default_value = "1/65536")]
        tau: Rational,
    },
    /// How many enumerated zeros can meet a closed interval.
    Isolate {
        #[arg(long, value_enum)]
        zeros: ZerosArg,
        #[arg(long = "X", value_parser = interval)]
        region: RatInterval,
    },
    /// Tolerance scan against certified bisection on a plateau member.
    DemoStopping {
        #[arg(long, default_value_t = 12)]
        n: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum CorpusAction {
    List,
    Export {
        #[command(flatten)]
        family: FamilyArgs,
    },
}

/// Rendered artifact and exit status.
pub struct Outcome {
    pub artifact: String,
    pub exit: u8,
}

fn ok(artifact: String) -> Outcome {
    Outcome {
        artifact,
        exit: EXIT_OK,
    }
}

fn json_only(format: Format, what: &str) -> anyhow::Result<()> {
    if format == Format::Csv {
        bail!("{what} has no CSV form; use --format json");
    }
    Ok(())
}

#[derive(Serialize)]
struct CorpusRow {
    name: String,
    variant: &'static str,
    domain: [RatStr; 2],
    zeros: Vec<RatStr>,
}

pub fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let fmt = cli.format;
    match &cli.command {
        Command::Corpus { action } => match action {
            CorpusAction::List => {
                let rows: Vec<_> = standard_corpus()
                    .into_iter()
                    .map(|e| CorpusRow {
                        variant: e.func.kind().name(),
                        domain: [e.func.domain().lo().into(), e.func.domain().hi().into()],
                        zeros: e
                            .zeros
                            .points()
                            .unwrap_or_default()
                            .iter()
                            .map(RatStr::from)
                            .collect(),
                        name: e.name,
                    })
                    .collect();
                Ok(ok(match fmt {
                    Format::Json => to_json(&json!({ "families": FAMILIES, "entries": rows })),
                    Format::Csv => {
                        let mut s = String::from("name,variant,domain_lo,domain_hi,zeros\n");
                        for r in rows {
                            let zs: Vec<_> = r.zeros.iter().map(ToString::to_string).collect();
                            s.push_str(&format!(
                                "\"{}\",{},{},{},{}\n",
                                r.name,
                                r.variant,
                                r.domain[0],
                                r.domain[1],
                                zs.join(" ")
                            ));
                        }
                        s
                    }
                }))
            }
            CorpusAction::Export { family } => {
                json_only(fmt, "corpus export")?;
                let inst = family.instance()?;
                Ok(ok(to_json(&json!({
                    "function": FuncDto::from(&inst.func),
                    "metadata": inst.metadata(),
                }))))
            }
        },
        Command::Modulus {
            family,
            eps,
            tau,
            sweep_n,
        } => match (sweep_n, family.family.is_some().then_some(family)) {
            (Some(_), Some(_)) => bail!("--sweep-n runs the plateau family; drop --family"),
            (Some((a, b)), None) => {
                let rows = plateau_sweep(*a..=*b, eps, tau)?;
                Ok(ok(match fmt {
                    Format::Csv => plateau_sweep_csv(&rows),
                    Format::Json => {
                        let rows: Vec<_> = rows
                            .iter()
                            .map(|(n, d)| {
                                json!({
                                    "n": n,
                                    "delta": d.finite().map_or("inf".to_string(), |d| RatStr::from(d).to_string()),
                                })
                            })
                            .collect();
                        to_json(&rows)
                    }
                }))
            }
            (None, None) => bail!("modulus needs --family or --sweep-n"),
            (None, Some(family)) => {
                json_only(fmt, "a single certificate")?;
                let inst = family.instance()?;
                let cert = uniform_modulus(&inst.func, &inst.located_zeros()?, eps, tau)?;
                Ok(ok(to_json(&CertificateDto::from(&cert))))
            }
        },
        Command::Polybound {
            roots,
            gamma,
            eps,
            trials,
            samples,
        } => match (roots, trials) {
            (Some(roots), None) => {
                json_only(fmt, "a polynomial certificate")?;
                let eps = eps.as_ref().context("--roots needs --eps")?;
                let pf = PolyFactorization::new(roots.0.clone(), gamma.clone())?;
                Ok(ok(to_json(&CertificateDto::from(&pf.certificate(eps)?))))
            }
            (None, Some(trials)) => {
                if eps.is_some() {
                    bail!("random trials choose eps themselves; drop --eps");
                }
                let (summary, violations) = polybound_trials(*trials, *samples, cli.seed)?;
                let exit = if violations.is_empty() {
                    EXIT_OK
                } else {
                    EXIT_FINDING
                };
                let artifact = match fmt {
                    Format::Csv => summary.csv(),
                    Format::Json => to_json(&json!({
                        "summary": summary,
                        "violations": violations,
                    })),
                };
                Ok(Outcome { artifact, exit })
            }
            _ => bail!("polybound needs exactly one of --roots or --trials"),
        },
        Command::Falsify {
            family,
            eps,
            delta,
            budget,
        } => {
            json_only(fmt, "falsify")?;
            let inst = family.instance()?;
            let r = falsify_uniform(&inst.func, &inst.located_zeros()?, eps, delta, *budget)?;
            let found = r.witness.is_some();
            let artifact = to_json(&json!({
                "witness": r.witness.as_ref().map(WitnessDto::from),
                "evaluations": r.evaluations,
                "exhausted": r.exhausted,
            }));
            Ok(Outcome {
                artifact,
                exit: if found { EXIT_FINDING } else { EXIT_OK },
            })
        }
        Command::Bisect {
            family,
            lo,
            hi,
            eps,
            stopper,
            tau,
        } => {
            json_only(fmt, "bisect")?;
            let inst = family.instance()?;
            let stopper = match stopper {
                StopperArg::None => Stopper::None,
                StopperArg::Pointwise => Stopper::Pointwise(inst.located_zeros()?),
                StopperArg::Uniform => Stopper::Uniform(uniform_modulus(
                    &inst.func,
                    &inst.located_zeros()?,
                    eps,
                    tau,
                )?),
            };
            let r = zstable_bisect(&inst.func, lo, hi, eps, &stopper)?;
            Ok(ok(to_json(&RootDto::new(&r, eps))))
        }
        Command::Coverage {
            family,
            delta,
            eps,
            tau,
        } => {
            json_only(fmt, "coverage")?;
            let inst = family.instance()?;
            let zeros = inst
                .zeros
                .clone()
                .context("coverage needs a family member with rational zeros")?;
            let r = sublevel_coverage(&inst.func, delta, &zeros, eps, tau)?;
            Ok(Outcome {
                artifact: to_json(&CoverageDto::from(&r)),
                exit: if r.verdict == Coverage::NotCovered {
                    EXIT_FINDING
                } else {
                    EXIT_OK
                },
            })
        }
        Command::Isolate { zeros, region } => {
            json_only(fmt, "isolate")?;
            let ZerosArg::Reciprocal = zeros;
            let cert = finite_intersection_rank(&reciprocal_zeros(), region)?;
            let inside = cert.zeros_in_region(&zstab_core::corpus::Reciprocals);
            Ok(ok(to_json(&IsolationDto::new(&cert, &inside))))
        }
        Command::DemoStopping { n } => {
            json_only(fmt, "demo-stopping")?;
            demo_stopping(*n)
        }
    }
}

/// A tolerance scan on `plateau(n)` stops far from the only zero; the
/// certified bisection on the signed plateau does not.
fn demo_stopping(n: u32) -> anyhow::Result<Outcome> {
    if !(2..=40).contains(&n) {
        bail!("demo-stopping needs n in 2..=40");
    }
    let eps = zstab_core::num::rat(1, 4);
    let tol = pow2(1 - i64::from(n));
    let plateau = build("plateau", BTreeMap::from([("n".into(), n.to_string())]))?;
    let zeros = plateau.located_zeros()?;
    let step = pow2(-i64::from(n) - 2);
    let scan =
        tolerance_scan(&plateau.func, &tol, &step)?.context("tolerance scan accepted no point")?;
    let scan_dist = zeros.exact_distance(&scan)?;

    let signed = build(
        "signed-plateau",
        BTreeMap::from([("n".into(), n.to_string())]),
    )?;
    let d = signed.func.domain().clone();
    let stopper = Stopper::Pointwise(signed.located_zeros()?);
    let r = zstable_bisect(&signed.func, d.lo(), d.hi(), &eps, &stopper)?;
    let certified_dist = signed.located_zeros()?.exact_distance(&r.point())?;
    if certified_dist > eps {
        bail!(
            "certified bisection reported {} at distance {certified_dist}",
            r.point()
        );
    }
    let misled = scan_dist >= eps;
    let artifact = to_json(&json!({
        "n": n,
        "tolerance": RatStr::from(&tol),
        "scan_point": RatStr::from(&scan),
        "scan_distance": RatStr::from(&scan_dist),
        "certified": RootDto::new(&r, &eps),
        "certified_distance": RatStr::from(&certified_dist),
        "certified_localized": matches!(r.kind, RootKind::Localized { .. }),
        "scan_misled": misled,
    }));
    Ok(Outcome {
        artifact,
        exit: if misled { EXIT_FINDING } else { EXIT_OK },
    })
}
