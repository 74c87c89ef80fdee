use std::fs;
use std::path::Path;

use mitlab_core::equi::{
    equi_obstruction_pipeline, profile_difference_integrable, ChiProfile, DifferenceVerdict, Profile, TailRule,
};
use mitlab_core::oracle::{
    difference_integrability_2d, numeric_threshold, ConvergenceVerdict, QuadratureConfig, ThresholdBracket,
};
use mitlab_core::rational::{self, RatStr};
use mitlab_core::threshold::{
    cluster_report, jumping_spectrum, multiplier_staircase, Threshold, ThresholdEngine, ThresholdResult,
};
use mitlab_core::verify::{self, Suite};
use mitlab_core::{Error, Monomial, ToricModel, Q};
use serde::{Deserialize, Serialize};

use crate::report::{num, InputDigest, Output, Status};

/// A failed command: message for stderr plus the exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::usage(e.to_string())
    }
}

type Outcome = Result<Output, Failure>;

fn read(path: &Path, digest: &mut InputDigest) -> Result<String, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    digest.add(text.as_bytes());
    Ok(text)
}

fn in_file<T>(path: &Path, r: mitlab_core::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path, digest: &mut InputDigest) -> Result<ToricModel, Failure> {
    let text = read(path, digest)?;
    in_file(path, ToricModel::from_json(&text))
}

fn load_profile(path: &Path, digest: &mut InputDigest) -> Result<Profile, Failure> {
    let text = read(path, digest)?;
    in_file(path, Profile::from_json(&text))
}

fn load_chi(path: &Path, digest: &mut InputDigest) -> Result<ChiProfile, Failure> {
    let text = read(path, digest)?;
    in_file(path, ChiProfile::from_json(&text))
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("payloads serialize")
}

pub fn cluster(base: u32, kmax: u32, mmax: u32, digest: &mut InputDigest) -> Outcome {
    if base < 2 {
        return Err(Failure::usage("--M must be at least 2"));
    }
    if kmax < 1 {
        return Err(Failure::usage("--kmax must be at least 1"));
    }
    digest
        .field("M", &base.to_string())
        .field("kmax", &kmax.to_string())
        .field("mmax", &mmax.to_string());
    let report = cluster_report(base, kmax, mmax)?;
    let mut text = report.to_text();
    text.push_str(&format!(
        "every m <= {mmax} witnessed by some k <= {kmax}: {}\n",
        if report.all_witnessed { "yes" } else { "no" }
    ));
    Ok(Output {
        payload: to_value(&report),
        text,
        tsv: report.to_tsv(),
        status: if report.all_witnessed {
            Status::Ok
        } else {
            Status::PropertyFailure
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum NumericOutcome {
    Bracket(ThresholdBracket),
    /// No divergence up to `searched_to`.
    Unbounded {
        searched_to: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPayload {
    pub monomial: Vec<RatStr>,
    pub exact: Option<ThresholdResult>,
    pub numeric: Option<NumericOutcome>,
    pub agreement: Option<bool>,
}

fn agrees(exact: &Threshold, numeric: &NumericOutcome) -> bool {
    match (exact, numeric) {
        (Threshold::Infinite, NumericOutcome::Unbounded { .. }) => true,
        (Threshold::Finite(c), NumericOutcome::Bracket(b)) => b.contains(rational::to_f64(c)),
        _ => false,
    }
}

fn ray_text(ray: &[Q; 2]) -> String {
    format!("({}, {})", rational::format(&ray[0]), rational::format(&ray[1]))
}

pub fn threshold(model: &Path, monomial: &str, numeric: bool, digest: &mut InputDigest) -> Outcome {
    let a: Monomial = monomial
        .parse()
        .map_err(|e: Error| Failure::usage(format!("--monomial: {e}")))?;
    let m = load_model(model, digest)?;
    digest
        .field("monomial", &a.to_string())
        .field("numeric", &numeric.to_string());
    if a.dim() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: a.dim(),
        }
        .into());
    }
    if m.dim() != 2 && !numeric {
        return Err(Failure::usage(format!(
            "the exact engine handles dimension 2 only (model has dimension {}); pass --numeric",
            m.dim()
        )));
    }
    let exact = if m.dim() == 2 {
        Some(ThresholdEngine::new(&m)?.threshold(&a)?)
    } else {
        None
    };
    let numeric = if numeric {
        Some(match numeric_threshold(&m, &a, &QuadratureConfig::default()) {
            Ok(b) => NumericOutcome::Bracket(b),
            Err(Error::UnboundedThreshold(c)) => NumericOutcome::Unbounded { searched_to: c },
            Err(e) => return Err(e.into()),
        })
    } else {
        None
    };
    let agreement = match (&exact, &numeric) {
        (Some(e), Some(n)) => Some(agrees(&e.value, n)),
        _ => None,
    };

    let mut text = String::new();
    let mut tsv_row = vec![a.to_string()];
    match &exact {
        Some(r) => {
            text.push_str(&format!("{}\n", r.value));
            if let Some(ray) = &r.argmin_ray {
                text.push_str(&format!("argmin ray: {}\n", ray_text(ray)));
            }
            tsv_row.push(r.value.to_string());
        }
        None => tsv_row.push(String::new()),
    }
    match &numeric {
        Some(NumericOutcome::Bracket(b)) => {
            text.push_str(&format!(
                "numeric bracket: [{}, {}] ({:?} below, {:?} above, {} probes)\n",
                num(b.lo),
                num(b.hi),
                b.lo_kind,
                b.hi_kind,
                b.probes
            ));
            tsv_row.extend([num(b.lo), num(b.hi)]);
        }
        Some(NumericOutcome::Unbounded { searched_to }) => {
            text.push_str(&format!("numeric: no divergence up to c = {}\n", num(*searched_to)));
            tsv_row.extend(["inf".to_string(), "inf".to_string()]);
        }
        None => tsv_row.extend([String::new(), String::new()]),
    }
    if agreement == Some(false) {
        text.push_str("exact and numeric engines disagree\n");
    }
    let payload = ThresholdPayload {
        monomial: a.exponents().iter().cloned().map(RatStr).collect(),
        exact,
        numeric,
        agreement,
    };
    Ok(Output {
        payload: to_value(&payload),
        text,
        tsv: format!("monomial\tthreshold\tnumeric_lo\tnumeric_hi\n{}\n", tsv_row.join("\t")),
        status: if agreement == Some(false) {
            Status::Disagreement
        } else {
            Status::Ok
        },
    })
}

fn parse_rational(flag: &str, s: &str) -> Result<Q, Failure> {
    rational::parse(s).map_err(|e| Failure::usage(format!("{flag}: {e}")))
}

fn dim2_model(path: &Path, digest: &mut InputDigest) -> Result<ToricModel, Failure> {
    let m = load_model(path, digest)?;
    if m.dim() != 2 {
        return Err(Error::UnsupportedDimension(m.dim()).into());
    }
    Ok(m)
}

pub fn spectrum(model: &Path, max_degree: u32, cutoff: &str, digest: &mut InputDigest) -> Outcome {
    let cutoff = parse_rational("--cutoff", cutoff)?;
    let m = dim2_model(model, digest)?;
    digest
        .field("max-degree", &max_degree.to_string())
        .field("cutoff", &rational::format(&cutoff));
    let table = jumping_spectrum(&m, max_degree, &cutoff)?;
    let mut text = format!(
        "monomial spectrum (degree <= {max_degree}, c <= {}):\n",
        rational::format(&cutoff)
    );
    for e in &table.entries {
        let ws: Vec<String> = e.witnesses.iter().map(|w| format!("({w})")).collect();
        text.push_str(&format!("{}: {}\n", rational::format(&e.threshold), ws.join(" ")));
    }
    if table.entries.is_empty() {
        text.push_str("no jumping coefficients up to the cutoff\n");
    }
    Ok(Output {
        payload: to_value(&table),
        text,
        tsv: table.to_tsv(),
        status: Status::Ok,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaircasePayload {
    pub c: RatStr,
    pub degree_bound: u32,
    pub generators: Vec<Vec<RatStr>>,
}

pub fn staircase(model: &Path, c: &str, max_degree: u32, digest: &mut InputDigest) -> Outcome {
    let c = parse_rational("--c", c)?;
    let m = dim2_model(model, digest)?;
    digest
        .field("c", &rational::format(&c))
        .field("max-degree", &max_degree.to_string());
    let gens = multiplier_staircase(&m, &c, max_degree)?;
    let mut text = String::new();
    let mut tsv = String::from("a1\ta2\n");
    for g in &gens {
        text.push_str(&format!("({g})\n"));
        tsv.push_str(&format!(
            "{}\t{}\n",
            rational::format(g.exponent(0)),
            rational::format(g.exponent(1))
        ));
    }
    if gens.is_empty() {
        text.push_str("no monomials of degree <= the bound are members\n");
    }
    let payload = StaircasePayload {
        c: RatStr(c),
        degree_bound: max_degree,
        generators: gens
            .iter()
            .map(|g| g.exponents().iter().cloned().map(RatStr).collect())
            .collect(),
    };
    Ok(Output {
        payload: to_value(&payload),
        text,
        tsv,
        status: Status::Ok,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum EquiMode {
    Profiles,
    Models,
    Pipeline,
}

fn verdict_text(v: &DifferenceVerdict) -> (String, String) {
    let r = &v.reason;
    let rule = match r.rule {
        TailRule::BothIntegrable => "both exponentials integrable".to_string(),
        TailRule::IdenticalTails => "identical tails".to_string(),
        TailRule::DominantDiverges { dominant } => format!("tail {} dominates and diverges", dominant + 1),
    };
    let mut text = format!("{:?}\nrule: {rule}\nweight k: {}\n", v.kind, r.weight_k);
    for i in 0..2 {
        text.push_str(&format!(
            "tail {}: slope {}, offset {}{}, log coefficient {}\n",
            i + 1,
            r.slopes[i],
            r.offsets[i],
            if r.offsets_exact[i] { "" } else { " (inexact)" },
            r.log_coeffs[i],
        ));
    }
    let mut tsv = String::from("tail\tslope\toffset\toffset_exact\tlog_coeff\n");
    for i in 0..2 {
        tsv.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            i + 1,
            r.slopes[i],
            r.offsets[i],
            r.offsets_exact[i],
            r.log_coeffs[i]
        ));
    }
    (text, tsv)
}

fn shells_text(v: &ConvergenceVerdict) -> (String, String) {
    let text = format!(
        "{:?}\nfitted rate: {}\nlog estimate: {}\nshells: {}\n",
        v.kind,
        num(v.fitted_rate),
        num(v.log_estimate),
        v.shells.len()
    );
    let mut tsv = String::from("shell\tlog_mass\n");
    for (j, s) in v.shells.iter().enumerate() {
        tsv.push_str(&format!("{j}\t{}\n", num(*s)));
    }
    (text, tsv)
}

pub fn equi(mode: EquiMode, files: &[std::path::PathBuf], weight: Option<&str>, digest: &mut InputDigest) -> Outcome {
    let want = if mode == EquiMode::Pipeline { 3 } else { 2 };
    if files.len() != want {
        return Err(Failure::usage(format!(
            "{mode:?} mode takes {want} files, got {}",
            files.len()
        )));
    }
    digest.field("mode", &format!("{mode:?}"));
    match mode {
        EquiMode::Profiles => {
            let k: u32 = match weight {
                None => 1,
                Some(w) => w
                    .parse()
                    .ok()
                    .filter(|k| *k >= 1)
                    .ok_or_else(|| Failure::usage(format!("--weight: expected an integer k >= 1, got {w:?}")))?,
            };
            digest.field("weight", &k.to_string());
            let first = load_profile(&files[0], digest)?;
            let second = load_profile(&files[1], digest)?;
            let v = profile_difference_integrable(&first, &second, k);
            let (text, tsv) = verdict_text(&v);
            Ok(Output {
                payload: to_value(&v),
                text,
                tsv,
                status: Status::Ok,
            })
        }
        EquiMode::Models => {
            let w: f64 = match weight {
                None => 0.0,
                Some(s) => s
                    .parse()
                    .ok()
                    .filter(|w: &f64| w.is_finite() && *w >= 0.0)
                    .ok_or_else(|| Failure::usage(format!("--weight: expected a number w >= 0, got {s:?}")))?,
            };
            digest.field("weight", &w.to_string());
            let first = load_model(&files[0], digest)?;
            let second = load_model(&files[1], digest)?;
            let v = difference_integrability_2d(&first, &second, w, &QuadratureConfig::default())?;
            let (text, tsv) = shells_text(&v);
            Ok(Output {
                payload: to_value(&v),
                text,
                tsv,
                status: Status::Ok,
            })
        }
        EquiMode::Pipeline => {
            if weight.is_some() {
                return Err(Failure::usage(
                    "--weight does not apply in pipeline mode (k is the dimension)",
                ));
            }
            let model = load_model(&files[0], digest)?;
            let chi = load_chi(&files[1], digest)?;
            let analytic = load_profile(&files[2], digest)?;
            let v = equi_obstruction_pipeline(&model, &chi, &analytic)?;
            let (text, tsv) = verdict_text(&v);
            Ok(Output {
                payload: to_value(&v),
                text,
                tsv,
                status: Status::Ok,
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum SuiteArg {
    Exact,
    Oracle,
    Lemmas,
    All,
}

pub fn run_verify(suite: SuiteArg, seed: u64, digest: &mut InputDigest) -> Outcome {
    digest
        .field("suite", &format!("{suite:?}"))
        .field("seed", &seed.to_string());
    let suite = match suite {
        SuiteArg::Exact => Suite::Exact,
        SuiteArg::Oracle => Suite::Oracle,
        SuiteArg::Lemmas => Suite::Lemmas,
        SuiteArg::All => Suite::All,
    };
    let report = verify::run(suite, seed)?;
    let mut tsv = String::from("property\tpassed\ttotal\n");
    for p in &report.properties {
        tsv.push_str(&format!("{}\t{}\t{}\n", p.name, p.passed, p.total));
    }
    Ok(Output {
        payload: to_value(&report),
        text: report.to_text(),
        tsv,
        status: if report.all_passed() {
            Status::Ok
        } else {
            Status::PropertyFailure
        },
    })
}
