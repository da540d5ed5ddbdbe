use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};

use intersective::certifier::{certify_intersective, CertifyOptions, IntersectivityCertificate};
use intersective::constructor::{
    construct, replay, ChoicePolicy, ConstructionParams, ConstructionTrace, ResiduePair,
    DEFAULT_SEARCH_CAP,
};
use intersective::minimality::{certify_minimal, MinimalityReport};
use intersective::ntheory::ResidueClass;
use intersective::oracle::{audit, density_scan, sweep, sweep_naive, DensityEstimate, SweepResult};
use intersective::QuadraticFamily;

use crate::document::{stamp, CertificateDocument, Provenance};
use crate::{exit, CliError};

#[derive(Debug, Parser)]
#[command(name = "mip", version, about = "Minimally intersective products of quadratics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Leave the timestamp out so identical runs give identical output.
    #[arg(long, global = true)]
    pub no_timestamp: bool,

    /// Write the document here instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,

    /// More log output on stderr (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a minimally intersective family from two seed primes.
    Construct(ConstructArgs),
    /// Decide intersectivity and emit a certificate.
    Certify(FamilyArgs),
    /// Check minimal intersectivity via the drop-one divisors.
    Minimal(FamilyArgs),
    /// Search for a root modulo every m up to a bound.
    Sweep(SweepArgs),
    /// Count square-free members of a residue class.
    Density(DensityArgs),
    /// Re-check a document written by this tool.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct FamilyInput {
    /// Comma-separated members, e.g. 15,17,255,2161.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "file", required_unless_present = "file")]
    pub coeffs: Option<String>,

    /// JSON file with the members (`-` reads stdin).
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[command(flatten)]
    pub input: FamilyInput,

    /// Largest prime tried when searching for a witness modulus.
    #[arg(long, env = "MIP_SCAN_BOUND", default_value_t = 100_000)]
    pub scan_bound: u64,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "3")]
    pub p1: BigUint,
    #[arg(long, default_value = "5")]
    pub p2: BigUint,
    /// `smallest` or `offset:K`.
    #[arg(long, default_value = "smallest")]
    pub policy: String,
    /// Per-index policy, e.g. `4=offset:1` (repeatable).
    #[arg(long = "step-policy")]
    pub step_policies: Vec<String>,
    /// Non-residue and residue modulo p1.
    #[arg(long, requires = "c1")]
    pub b1: Option<BigUint>,
    #[arg(long, requires = "b1")]
    pub c1: Option<BigUint>,
    /// Non-residue and residue modulo p2.
    #[arg(long, requires = "c2")]
    pub b2: Option<BigUint>,
    #[arg(long, requires = "b2")]
    pub c2: Option<BigUint>,
    /// Use this odd square-free multiple of p1·p2 as the first member.
    #[arg(long)]
    pub a1: Option<BigUint>,
    #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
    pub search_cap: u64,
    #[arg(long, env = "MIP_SCAN_BOUND", default_value_t = 100_000)]
    pub scan_bound: u64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: FamilyInput,
    #[arg(long)]
    pub max_m: u64,
    /// Scan every modulus directly instead of combining prime powers.
    #[arg(long)]
    pub naive: bool,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long)]
    pub modulus: BigUint,
    #[arg(long, allow_hyphen_values = true)]
    pub residue: BigInt,
    #[arg(long, default_value = "0")]
    pub lower_bound: BigUint,
    #[arg(long)]
    pub limit: u64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Document to check (`-` reads stdin).
    #[arg(long)]
    pub file: PathBuf,
}

/// Run a subcommand; returns the document and the exit code to use.
pub fn run(cli: &Cli) -> Result<(CertificateDocument, i32), CliError> {
    let (mut doc, code) = match &cli.command {
        Command::Construct(args) => (cmd_construct(args)?, exit::OK),
        Command::Certify(args) => (cmd_certify(args)?, exit::OK),
        Command::Minimal(args) => (cmd_minimal(args)?, exit::OK),
        Command::Sweep(args) => (cmd_sweep(args)?, exit::OK),
        Command::Density(args) => (cmd_density(args)?, exit::OK),
        Command::Verify(args) => cmd_verify(args)?,
    };
    if !cli.no_timestamp {
        doc.provenance.timestamp = Some(stamp());
    }
    Ok((doc, code))
}

fn read_source(path: &PathBuf) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn parse_int(v: &Value) -> Result<BigInt, CliError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(CliError::Invalid(format!("not an integer: {other}"))),
    };
    BigInt::from_str(text.trim()).map_err(|_| CliError::Invalid(format!("not an integer: {text}")))
}

/// Members from a JSON array, an object with `coeffs` or `family`, or a
/// document whose inputs carry `coeffs`.
fn members_from_json(v: &Value) -> Result<Vec<BigInt>, CliError> {
    match v {
        Value::Array(items) => items.iter().map(parse_int).collect(),
        Value::Object(map) => {
            for key in ["coeffs", "family"] {
                if let Some(inner) = map.get(key) {
                    return members_from_json(inner);
                }
            }
            match map.get("inputs") {
                Some(inputs) => members_from_json(inputs),
                None => Err(CliError::Invalid("no coeffs or family in JSON input".into())),
            }
        }
        _ => Err(CliError::Invalid("expected a JSON array or object".into())),
    }
}

pub fn parse_coeffs(text: &str) -> Result<Vec<BigInt>, CliError> {
    text.split(',')
        .map(|s| {
            BigInt::from_str(s.trim()).map_err(|_| CliError::Invalid(format!("not an integer: {s:?}")))
        })
        .collect()
}

fn read_family(input: &FamilyInput) -> Result<QuadraticFamily, CliError> {
    let raw = match (&input.coeffs, &input.file) {
        (Some(text), _) => parse_coeffs(text)?,
        (None, Some(path)) => members_from_json(&serde_json::from_str(&read_source(path)?)?)?,
        (None, None) => return Err(CliError::Invalid("give --coeffs or --file".into())),
    };
    Ok(QuadraticFamily::validate(&raw)?)
}

fn strings(values: &[BigInt]) -> Value {
    Value::Array(values.iter().map(|v| Value::String(v.to_string())).collect())
}

fn bounds(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn checked(problems: Vec<String>) -> Result<bool, CliError> {
    if problems.is_empty() {
        Ok(true)
    } else {
        Err(CliError::Library(intersective::Error::Postcondition(format!(
            "emitted document fails verification: {}",
            problems.join("; ")
        ))))
    }
}

fn cmd_certify(args: &FamilyArgs) -> Result<CertificateDocument, CliError> {
    let family = read_family(&args.input)?;
    let options = CertifyOptions {
        scan_bound: args.scan_bound,
    };
    let cert = certify_intersective(&family, &options);
    let mut provenance = Provenance::new(bounds(&[("scan_bound", args.scan_bound.to_string())]));
    provenance.verified = checked(audit(&cert))?;
    Ok(CertificateDocument::new(
        "certify",
        json!({ "coeffs": strings(&family.values()), "scan_bound": args.scan_bound.to_string() }),
        serde_json::to_value(&cert)?,
        provenance,
    ))
}

fn cmd_minimal(args: &FamilyArgs) -> Result<CertificateDocument, CliError> {
    let family = read_family(&args.input)?;
    let options = CertifyOptions {
        scan_bound: args.scan_bound,
    };
    let report = certify_minimal(&family, &options)?;
    let mut provenance = Provenance::new(bounds(&[("scan_bound", args.scan_bound.to_string())]));
    provenance.verified = checked(audit(&report))?;
    Ok(CertificateDocument::new(
        "minimal",
        json!({ "coeffs": strings(&family.values()), "scan_bound": args.scan_bound.to_string() }),
        serde_json::to_value(&report)?,
        provenance,
    ))
}

fn parse_step_policy(text: &str) -> Result<(usize, ChoicePolicy), CliError> {
    let (index, policy) = text
        .split_once('=')
        .ok_or_else(|| CliError::Invalid(format!("step policy {text:?} is not INDEX=POLICY")))?;
    let index = index
        .trim()
        .parse()
        .map_err(|_| CliError::Invalid(format!("bad step index in {text:?}")))?;
    Ok((index, policy.parse()?))
}

fn construction_params(args: &ConstructArgs) -> Result<ConstructionParams, CliError> {
    let pair = |b: &Option<BigUint>, c: &Option<BigUint>| match (b, c) {
        (Some(b), Some(c)) => Some(ResiduePair {
            b: b.clone(),
            c: c.clone(),
        }),
        _ => None,
    };
    Ok(ConstructionParams {
        n: args.n,
        p1: args.p1.clone(),
        p2: args.p2.clone(),
        pair1: pair(&args.b1, &args.c1),
        pair2: pair(&args.b2, &args.c2),
        a1: args.a1.clone(),
        prime_residues: BTreeMap::new(),
        policy: args.policy.parse()?,
        step_policies: args
            .step_policies
            .iter()
            .map(|s| parse_step_policy(s))
            .collect::<Result<_, _>>()?,
        search_cap: args.search_cap,
        max_retries: intersective::constructor::DEFAULT_MAX_RETRIES,
        certify: CertifyOptions {
            scan_bound: args.scan_bound,
        },
    })
}

fn cmd_construct(args: &ConstructArgs) -> Result<CertificateDocument, CliError> {
    let params = construction_params(args)?;
    let built = construct(&params)?;
    let mut provenance = Provenance::new(bounds(&[
        ("scan_bound", args.scan_bound.to_string()),
        ("search_cap", args.search_cap.to_string()),
    ]));
    provenance.choice_policy = Some(params.policy.to_string());
    let mut problems = audit(&built.report);
    if replay(&built.trace).as_ref() != Ok(&built.family) {
        problems.push("trace does not replay to the family".into());
    }
    provenance.verified = checked(problems)?;
    let step_policies: BTreeMap<String, String> = params
        .step_policies
        .iter()
        .map(|(i, p)| (i.to_string(), p.to_string()))
        .collect();
    let inputs = json!({
        "n": args.n.to_string(),
        "p1": args.p1.to_string(),
        "p2": args.p2.to_string(),
        "policy": params.policy.to_string(),
        "step_policies": step_policies,
        "a1": args.a1.as_ref().map(|a| a.to_string()),
        "b1": args.b1.as_ref().map(|a| a.to_string()),
        "c1": args.c1.as_ref().map(|a| a.to_string()),
        "b2": args.b2.as_ref().map(|a| a.to_string()),
        "c2": args.c2.as_ref().map(|a| a.to_string()),
        "search_cap": args.search_cap.to_string(),
        "scan_bound": args.scan_bound.to_string(),
    });
    let result = json!({
        "family": strings(&built.family.values()),
        "trace": serde_json::to_value(&built.trace)?,
        "minimality": serde_json::to_value(&built.report)?,
    });
    Ok(CertificateDocument::new("construct", inputs, result, provenance))
}

fn run_sweep(family: &QuadraticFamily, max_m: u64, naive: bool) -> Result<SweepResult, CliError> {
    if max_m < 2 {
        return Err(CliError::Invalid("--max-m must be at least 2".into()));
    }
    Ok(if naive {
        sweep_naive(family, max_m)
    } else {
        sweep(family, max_m)
    })
}

fn cmd_sweep(args: &SweepArgs) -> Result<CertificateDocument, CliError> {
    let family = read_family(&args.input)?;
    let result = run_sweep(&family, args.max_m, args.naive)?;
    let mut provenance = Provenance::new(bounds(&[("max_m", args.max_m.to_string())]));
    provenance.verified = true;
    Ok(CertificateDocument::new(
        "sweep",
        json!({
            "coeffs": strings(&family.values()),
            "max_m": args.max_m.to_string(),
            "method": if args.naive { "naive" } else { "prime-power-crt" },
        }),
        serde_json::to_value(&result)?,
        provenance,
    ))
}

fn cmd_density(args: &DensityArgs) -> Result<CertificateDocument, CliError> {
    let class = ResidueClass::new(&args.residue, &args.modulus)?;
    let estimate = density_scan(&class, &args.lower_bound, args.limit)?;
    let mut provenance = Provenance::new(bounds(&[("limit", args.limit.to_string())]));
    provenance.verified = true;
    Ok(CertificateDocument::new(
        "density",
        json!({
            "modulus": args.modulus.to_string(),
            "residue": args.residue.to_string(),
            "lower_bound": args.lower_bound.to_string(),
            "limit": args.limit.to_string(),
        }),
        serde_json::to_value(&estimate)?,
        provenance,
    ))
}

fn input_str<'a>(doc: &'a CertificateDocument, key: &str) -> Result<&'a str, CliError> {
    doc.inputs
        .get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::Invalid(format!("document inputs lack {key}")))
}

fn input_u64(doc: &CertificateDocument, key: &str) -> Result<u64, CliError> {
    input_str(doc, key)?
        .parse()
        .map_err(|_| CliError::Invalid(format!("document input {key} is not an integer")))
}

/// Everything wrong with a document; empty if it checks out.
pub fn verify_document(doc: &CertificateDocument) -> Result<Vec<String>, CliError> {
    let mut problems = Vec::new();
    match doc.command.as_str() {
        "certify" => {
            let cert: IntersectivityCertificate = serde_json::from_value(doc.result.clone())?;
            if members_from_json(&doc.inputs)? != cert.family {
                problems.push("certificate family differs from the inputs".into());
            }
            problems.extend(audit(&cert));
        }
        "minimal" => {
            let report: MinimalityReport = serde_json::from_value(doc.result.clone())?;
            if members_from_json(&doc.inputs)? != report.family {
                problems.push("report family differs from the inputs".into());
            }
            problems.extend(audit(&report));
        }
        "construct" => {
            let family = members_from_json(&doc.result["family"])?;
            let trace: ConstructionTrace = serde_json::from_value(doc.result["trace"].clone())?;
            let report: MinimalityReport = serde_json::from_value(doc.result["minimality"].clone())?;
            match replay(&trace) {
                Ok(f) if f.values() == family => {}
                Ok(_) => problems.push("trace replays to a different family".into()),
                Err(e) => problems.push(format!("trace does not replay: {e}")),
            }
            if report.family != family {
                problems.push("minimality report is for a different family".into());
            }
            problems.extend(audit(&report));
        }
        "sweep" => {
            let claimed: SweepResult = serde_json::from_value(doc.result.clone())?;
            let family = QuadraticFamily::validate(&members_from_json(&doc.inputs)?)?;
            let naive = input_str(doc, "method")? == "naive";
            let again = run_sweep(&family, input_u64(doc, "max_m")?, naive)?;
            if again != claimed {
                problems.push("sweep result does not reproduce".into());
            }
        }
        "density" => {
            let claimed: DensityEstimate = serde_json::from_value(doc.result.clone())?;
            let modulus: BigUint = input_str(doc, "modulus")?
                .parse()
                .map_err(|_| CliError::Invalid("bad modulus".into()))?;
            let residue: BigInt = input_str(doc, "residue")?
                .parse()
                .map_err(|_| CliError::Invalid("bad residue".into()))?;
            let lower_bound: BigUint = input_str(doc, "lower_bound")?
                .parse()
                .map_err(|_| CliError::Invalid("bad lower bound".into()))?;
            let class = ResidueClass::new(&residue, &modulus)?;
            let again = density_scan(&class, &lower_bound, input_u64(doc, "limit")?)?;
            if again != claimed {
                problems.push("density estimate does not reproduce".into());
            }
        }
        other => return Err(CliError::Invalid(format!("cannot verify {other:?} documents"))),
    }
    Ok(problems)
}

fn cmd_verify(args: &VerifyArgs) -> Result<(CertificateDocument, i32), CliError> {
    let doc: CertificateDocument = serde_json::from_str(&read_source(&args.file)?)?;
    let problems = verify_document(&doc)?;
    let valid = problems.is_empty();
    let mut provenance = Provenance::new(BTreeMap::new());
    provenance.verified = valid;
    let out = CertificateDocument::new(
        "verify",
        json!({ "command": doc.command, "file": args.file.display().to_string() }),
        json!({ "valid": valid, "problems": problems }),
        provenance,
    );
    Ok((out, if valid { exit::OK } else { exit::REJECTED }))
}
