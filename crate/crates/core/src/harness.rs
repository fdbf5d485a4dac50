//! Experiment harness: run reports, CSV output and the bound verification sweep.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use crate::codec::AdvicePayload;
use crate::error::{Error, Result};
use crate::generators::{
    random_instance, tightness_certificate, tightness_family, worked_example,
    worked_example_certificate, RandomSpec,
};
use crate::model::{normalize_sequence, read_instance, Sequence};
use crate::opt::{
    canonical_optimum, check_bound, decompose, floor_load_bound, normalize_certificate, opt_exact,
    verify_certificate, verify_count_identities, BoundSpec, Certificate, IdentityCheck,
    MAX_SIZE_LIMIT,
};
use crate::oracle::compute_advice;
use crate::rational::Rational;
use crate::strategies::StrategyConfig;

pub const CSV_HEADER: [&str; 14] = [
    "instance_id",
    "n",
    "k",
    "strategy",
    "m",
    "x_m_num",
    "x_m_den",
    "covered",
    "opt",
    "opt_kind",
    "bound_ok",
    "ratio_num",
    "ratio_den",
    "ms",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OptKind {
    /// Solved exactly, or a certificate matching the floor bound.
    Exact,
    /// Only the floor-of-load upper bound is known.
    BoundOnly,
}

impl fmt::Display for OptKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OptKind::Exact => "exact",
            OptKind::BoundOnly => "bound-only",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptInfo {
    pub value: usize,
    pub kind: OptKind,
    pub floor_bound: usize,
    /// Optimal covering when `kind` is exact.
    pub certificate: Option<Certificate>,
}

/// Pins the optimum: a certificate meeting the floor bound settles it, otherwise the exact
/// solver runs when the instance is within `limit`, otherwise only the floor bound is known.
pub fn resolve_opt(
    seq: &Sequence,
    certificate: Option<&Certificate>,
    limit: usize,
) -> Result<OptInfo> {
    let floor_bound = floor_load_bound(seq);
    if let Some(cert) = certificate {
        if verify_certificate(seq, cert)? == floor_bound {
            return Ok(OptInfo {
                value: floor_bound,
                kind: OptKind::Exact,
                floor_bound,
                certificate: Some(cert.clone()),
            });
        }
    }
    match opt_exact(seq, limit) {
        Ok((value, cert)) => Ok(OptInfo {
            value,
            kind: OptKind::Exact,
            floor_bound,
            certificate: Some(cert),
        }),
        Err(Error::LimitExceeded { .. }) => Ok(OptInfo {
            value: floor_bound,
            kind: OptKind::BoundOnly,
            floor_bound,
            certificate: None,
        }),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunReport {
    pub instance_id: String,
    pub n: usize,
    pub k: Option<u32>,
    pub strategy: &'static str,
    pub advice: Option<AdvicePayload>,
    pub covered: usize,
    pub opt: Option<(usize, OptKind)>,
    pub bound: Option<BoundSpec>,
    pub bound_ok: Option<bool>,
    /// `covered / opt` for an exact, nonzero optimum.
    pub ratio: Option<Rational>,
    pub millis: Option<u128>,
}

impl RunReport {
    pub fn new(
        instance_id: impl Into<String>,
        n: usize,
        config: &StrategyConfig,
        covered: usize,
        opt: Option<&OptInfo>,
    ) -> Self {
        let advice = match config {
            StrategyConfig::AdviceDh { m, x_m, .. } => Some(AdvicePayload {
                m: *m,
                x_m: x_m.clone(),
            }),
            _ => None,
        };
        let bound = match config {
            StrategyConfig::AdviceDh { k, .. } => BoundSpec::for_k(*k),
            _ => None,
        };
        let exact = opt.filter(|o| o.kind == OptKind::Exact);
        let bound_ok = match (&bound, exact) {
            (Some(spec), Some(o)) => Some(check_bound(covered, o.value, spec)),
            _ => None,
        };
        let ratio = exact
            .filter(|o| o.value > 0)
            .map(|o| Rational::frac(covered as i64, o.value as i64));
        RunReport {
            instance_id: instance_id.into(),
            n,
            k: config.k(),
            strategy: config.name(),
            advice,
            covered,
            opt: opt.map(|o| (o.value, o.kind)),
            bound,
            bound_ok,
            ratio,
            millis: None,
        }
    }

    pub fn csv_record(&self) -> Vec<String> {
        let opt_str =
            |f: &dyn Fn(&(usize, OptKind)) -> String| self.opt.as_ref().map(f).unwrap_or_default();
        vec![
            self.instance_id.clone(),
            self.n.to_string(),
            self.k.map(|k| k.to_string()).unwrap_or_default(),
            self.strategy.to_string(),
            self.advice
                .as_ref()
                .map(|a| a.m.to_string())
                .unwrap_or_default(),
            self.advice
                .as_ref()
                .map(|a| a.x_m.numer().to_string())
                .unwrap_or_default(),
            self.advice
                .as_ref()
                .map(|a| a.x_m.denom().to_string())
                .unwrap_or_default(),
            self.covered.to_string(),
            opt_str(&|(v, _)| v.to_string()),
            opt_str(&|(_, kind)| kind.to_string()),
            self.bound_ok.map(|b| b.to_string()).unwrap_or_default(),
            self.ratio
                .as_ref()
                .map(|r| r.numer().to_string())
                .unwrap_or_default(),
            self.ratio
                .as_ref()
                .map(|r| r.denom().to_string())
                .unwrap_or_default(),
            self.millis.map(|ms| ms.to_string()).unwrap_or_default(),
        ]
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "instance:  {}", self.instance_id)?;
        writeln!(f, "n:         {}", self.n)?;
        write!(f, "strategy:  {}", self.strategy)?;
        if let Some(k) = self.k {
            write!(f, " (k = {k})")?;
        }
        writeln!(f)?;
        if let Some(a) = &self.advice {
            writeln!(f, "advice:    m = {}, x_m = {}", a.m, a.x_m)?;
        }
        writeln!(f, "covered:   {}", self.covered)?;
        if let Some((v, kind)) = &self.opt {
            writeln!(f, "opt:       {v} ({kind})")?;
        }
        if let Some(r) = &self.ratio {
            writeln!(f, "ratio:     {r} ~ {}", r.to_decimal(4))?;
        }
        if let (Some(spec), Some(ok)) = (&self.bound, self.bound_ok) {
            writeln!(
                f,
                "bound:     covered >= {spec}: {}",
                if ok { "holds" } else { "VIOLATED" }
            )?;
        }
        if let Some(ms) = self.millis {
            writeln!(f, "time:      {ms} ms")?;
        }
        Ok(())
    }
}

pub fn write_csv<W: Write>(reports: &[RunReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in reports {
        w.write_record(r.csv_record()).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(reports: &[RunReport]) -> String {
    let mut buf = Vec::new();
    write_csv(reports, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

/// A named instance with an optional known optimal covering.
#[derive(Clone, Debug)]
pub struct Instance {
    pub id: String,
    pub sequence: Sequence,
    pub certificate: Option<Certificate>,
}

/// Source of instances for [`verify_bounds`].
#[derive(Clone, Debug)]
pub enum Family {
    Example,
    /// Default tightness parameters (big 11/20, small 9/100) for each `N`.
    Tightness(Vec<usize>),
    /// `trials` seeded instances with `n_min..=n_max` items.
    Random {
        trials: usize,
        n_min: usize,
        n_max: usize,
        seed: u64,
    },
    /// Every `*.txt` instance in a directory; `<stem>.cert` alongside is used as certificate.
    Dir(std::path::PathBuf),
}

/// Value ranges cycled through by the random family: mixed sizes, mostly big items, mostly
/// small items.
fn random_ranges() -> [(Rational, Rational); 3] {
    [
        (Rational::frac(1, 50), Rational::frac(49, 50)),
        (Rational::frac(1, 50), Rational::frac(3, 5)),
        (Rational::frac(1, 20), Rational::frac(7, 20)),
    ]
}

pub fn random_spec(trial: usize, n_min: usize, n_max: usize, seed: u64) -> RandomSpec {
    let span = n_max.saturating_sub(n_min) + 1;
    let (value_min, value_max) = random_ranges()[trial % 3].clone();
    RandomSpec {
        n: n_min + trial % span,
        value_min,
        value_max,
        denominator_bound: 100,
        seed: seed.wrapping_add(trial as u64),
    }
}

impl Family {
    pub fn instances(&self) -> Result<Vec<Instance>> {
        Ok(match self {
            Family::Example => vec![Instance {
                id: "example".into(),
                sequence: worked_example(),
                certificate: Some(worked_example_certificate()),
            }],
            Family::Tightness(ns) => {
                let big = Rational::frac(11, 20);
                let small = Rational::frac(9, 100);
                ns.iter()
                    .map(|&n| {
                        Ok(Instance {
                            id: format!("tight-{n}"),
                            sequence: tightness_family(n, &big, &small)?,
                            certificate: Some(tightness_certificate(n, &big, &small)?),
                        })
                    })
                    .collect::<Result<_>>()?
            }
            Family::Random {
                trials,
                n_min,
                n_max,
                seed,
            } => (0..*trials)
                .map(|trial| {
                    let spec = random_spec(trial, *n_min, *n_max, *seed);
                    Ok(Instance {
                        id: format!("rand-{}", spec.seed),
                        sequence: random_instance(&spec)?,
                        certificate: None,
                    })
                })
                .collect::<Result<_>>()?,
            Family::Dir(dir) => {
                let mut paths: Vec<_> = std::fs::read_dir(dir)?
                    .filter_map(|e| e.ok().map(|e| e.path()))
                    .filter(|p| p.extension().is_some_and(|e| e == "txt"))
                    .collect();
                paths.sort();
                paths
                    .into_iter()
                    .map(|path| load_instance(&path))
                    .collect::<Result<_>>()?
            }
        })
    }
}

fn load_instance(path: &Path) -> Result<Instance> {
    let normalized = normalize_sequence(&read_instance(path)?)?;
    let cert_path = path.with_extension("cert");
    let certificate = if cert_path.exists() {
        Some(Certificate::read(&cert_path)?)
    } else {
        None
    };
    Ok(Instance {
        id: path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
        sequence: normalized.sequence,
        certificate,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityFailure {
    pub instance_id: String,
    pub k: u32,
    pub check: IdentityCheck,
    pub unplaced_t_items: usize,
    /// Set when exhaustive search showed that every canonical optimum leaves t-items out.
    pub unavoidable: bool,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOutcome {
    pub reports: Vec<RunReport>,
    /// Reports whose bound check failed.
    pub violations: Vec<RunReport>,
    /// Instances skipped because the optimum could not be pinned.
    pub bound_only: Vec<String>,
    pub identity_checks: usize,
    pub identity_failures: Vec<IdentityFailure>,
    /// Smallest observed `covered / opt` per `k`.
    pub min_ratio: BTreeMap<u32, Rational>,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub ks: Vec<u32>,
    pub limit: usize,
    pub timing: bool,
}

/// Runs the oracle-advised strategy on every instance for every `k`, checks the competitive
/// bound against the exact optimum and the count identities on the normalized optimum.
pub fn verify_bounds(instances: &[Instance], options: &VerifyOptions) -> Result<VerifyOutcome> {
    let mut outcome = VerifyOutcome::default();
    for instance in instances {
        let seq = &instance.sequence;
        let opt = resolve_opt(seq, instance.certificate.as_ref(), options.limit)?;
        if opt.kind == OptKind::BoundOnly {
            outcome.bound_only.push(instance.id.clone());
        }
        for &k in &options.ks {
            let start = Instant::now();
            let advice = compute_advice(seq, k)?;
            let config = StrategyConfig::AdviceDh {
                k,
                m: advice.m,
                x_m: advice.x_m.clone(),
            };
            let covered = config.run(seq)?.covered_count;
            let mut report = RunReport::new(&instance.id, seq.n(), &config, covered, Some(&opt));
            if options.timing {
                report.millis = Some(start.elapsed().as_millis());
            }
            if report.bound_ok == Some(false) {
                outcome.violations.push(report.clone());
            }
            if let Some(r) = &report.ratio {
                let entry = outcome.min_ratio.entry(k).or_insert_with(|| r.clone());
                if r < entry {
                    *entry = r.clone();
                }
            }
            if let Some(cert) = &opt.certificate {
                let (normalized, norm) = normalize_certificate(seq, cert, k)?;
                let mut check = verify_count_identities(&decompose(seq, &normalized, k)?, seq)?;
                let mut unplaced = norm.unplaced_t_items;
                let mut unavoidable = false;
                if !check.holds() && seq.n() <= options.limit.min(MAX_SIZE_LIMIT) {
                    let (canonical, left) = canonical_optimum(seq, k, options.limit)?;
                    check = verify_count_identities(&decompose(seq, &canonical, k)?, seq)?;
                    unplaced = left;
                    unavoidable = left > 0;
                }
                outcome.identity_checks += 1;
                if !check.holds() {
                    outcome.identity_failures.push(IdentityFailure {
                        instance_id: instance.id.clone(),
                        k,
                        check,
                        unplaced_t_items: unplaced,
                        unavoidable,
                    });
                }
            }
            outcome.reports.push(report);
        }
    }
    Ok(outcome)
}
