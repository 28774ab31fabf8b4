use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use bicyclic::census::{self, Census, CensusOptions, Violation};
use bicyclic::fusion::{self, FusionError};
use bicyclic::group::GroupFile;
use bicyclic::numtheory::{self, ExponentFamily};
use bicyclic::subgroups::{all_subgroups, DEFAULT_BUDGET};
use bicyclic::{invariants, morphisms, FamilySpec, GroupTable};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "bicyclic", version, about = "Bicyclic 2-groups, essential subgroups and fusion-system counts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a group from a family presentation and write a group file.
    Construct {
        #[command(flatten)]
        family: FamilyArgs,
        /// Output path; the group file is embedded in the report when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Structural invariants and shape tags.
    Analyze(GroupArgs),
    /// Subgroup lattice up to conjugacy.
    Subgroups(GroupArgs),
    /// Essential-subgroup candidates.
    Essential(GroupArgs),
    /// Nonnilpotent fusion-system verdict and multiplicity.
    Fusion(GroupArgs),
    /// Census of bicyclic groups.
    Census(CensusArgs),
    /// Empirical and closed-form counts.
    Count(CensusArgs),
    /// Every census check.
    Verify {
        #[command(flatten)]
        census: CensusArgs,
        /// Also check metacyclic groups up to this order (or exponent, when at most 8).
        #[arg(long)]
        metacyclic_max_order: Option<u64>,
    },
    /// Exponent formulas and section-bound scans.
    Numtheory {
        /// gl2, sl2, sz or psu3.
        #[arg(long)]
        family: String,
        /// Largest r scanned.
        #[arg(long, default_value_t = 24)]
        r_max: u32,
        /// Parameter for the exponent formula.
        #[arg(long)]
        n: Option<u32>,
    },
}

#[derive(Args, Debug, Clone, Serialize)]
struct FamilyArgs {
    /// cyclic, homocyclic, dihedral, quaternion, semidihedral, modular, wreath,
    /// min_nonabelian, direct_C2m_x_C2sq, direct_C2m_x_Q8, central_C2m_Q8, janko.
    #[arg(long)]
    family: Option<String>,
    /// Family parameter n (for min_nonabelian: r).
    #[arg(long)]
    n: Option<u32>,
    /// Family parameter m (for min_nonabelian: s).
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    i: Option<u32>,
    #[arg(long)]
    xsq: Option<u8>,
    #[arg(long)]
    apow: Option<u8>,
    /// Group order; fills in the parameter of one-parameter families.
    #[arg(long)]
    order: Option<u64>,
}

#[derive(Args, Debug, Clone, Serialize)]
struct GroupArgs {
    /// Group file to read instead of a family.
    #[arg(long, conflicts_with = "family")]
    input: Option<PathBuf>,
    #[command(flatten)]
    family: FamilyArgs,
    /// Subgroup-count budget.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
struct CensusArgs {
    /// Largest order, or its base-2 logarithm when at most 8.
    #[arg(long)]
    max_order: u64,
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Subgroup-count budget per record.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

#[derive(Serialize)]
struct Timing {
    elapsed_ms: u128,
}

#[derive(Serialize)]
struct ReportEnvelope {
    schema_version: u32,
    command: String,
    inputs: Value,
    results: Value,
    violations: Vec<Violation>,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    timing: Timing,
}

struct Outcome {
    results: Value,
    violations: Vec<Violation>,
}

fn ok(results: Value) -> Result<Outcome, String> {
    Ok(Outcome {
        results,
        violations: Vec::new(),
    })
}

fn log2_exact(order: u64) -> Result<u32, String> {
    if order == 0 || !order.is_power_of_two() {
        return Err(format!("order {order} is not a power of 2"));
    }
    Ok(order.trailing_zeros())
}

/// `--max-order`: at most 8 is read as an exponent.
fn max_level(v: u64) -> Result<u32, String> {
    let n = if v <= 8 { v as u32 } else { log2_exact(v)? };
    if !(1..=8).contains(&n) {
        return Err(format!("--max-order {v} is outside 2..256"));
    }
    Ok(n)
}

fn spec_from_args(a: &FamilyArgs) -> Result<FamilySpec, String> {
    let name = a.family.as_deref().ok_or("one of --family or --input is required")?;
    let log = a.order.map(log2_exact).transpose()?;
    let need = |v: Option<u32>, flag: &str| v.ok_or(format!("--{flag} is required for family {name}"));
    let by_log = |f: fn(u32) -> Option<u32>, flag: &str| -> Result<u32, String> {
        match (a.n.or(a.m), log) {
            (Some(v), _) => Ok(v),
            (None, Some(l)) => f(l).ok_or(format!("no {name} group of order {}", 1u64 << l)),
            (None, None) => Err(format!("--{flag} or --order is required for family {name}")),
        }
    };
    use FamilySpec::*;
    let spec = match name.to_ascii_lowercase().as_str() {
        "cyclic" => Cyclic { n: by_log(Some, "n")? },
        "dihedral" => Dihedral { n: by_log(Some, "n")? },
        "quaternion" => Quaternion { n: by_log(Some, "n")? },
        "semidihedral" => Semidihedral { n: by_log(Some, "n")? },
        "modular" => Modular { n: by_log(Some, "n")? },
        "homocyclic" => Homocyclic {
            n: by_log(|l| (l % 2 == 0).then_some(l / 2), "n")?,
        },
        "wreath" => Wreath {
            n: by_log(|l| (l % 2 == 1).then_some(l / 2), "n")?,
        },
        "min_nonabelian" => MinNonabelian {
            r: need(a.n, "n")?,
            s: need(a.m, "m")?,
        },
        "direct_c2m_x_c2sq" => DirectC2mXC2sq {
            m: by_log(|l| l.checked_sub(2), "m")?,
        },
        "direct_c2m_x_q8" => DirectC2mXQ8 {
            m: by_log(|l| l.checked_sub(3), "m")?,
        },
        "central_c2m_q8" => CentralC2mQ8 {
            m: by_log(|l| l.checked_sub(2), "m")?,
        },
        "janko" => Janko {
            n: need(a.n, "n")?,
            m: need(a.m, "m")?,
            i: need(a.i, "i")?,
            x_sq: a.xsq.unwrap_or(0),
            a_pow: a.apow.unwrap_or(0),
        },
        other => return Err(format!("unknown family {other}")),
    };
    spec.validate().map_err(|e| e.to_string())?;
    if let Some(l) = log {
        if l != spec.log_order() {
            return Err(format!("{spec} has order {}, not {}", 1u64 << spec.log_order(), 1u64 << l));
        }
    }
    Ok(spec)
}

fn read_group(path: &PathBuf) -> Result<GroupTable, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    GroupFile::from_json(&text)
        .and_then(|f| f.to_table())
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn load_group(a: &GroupArgs) -> Result<(GroupTable, Option<FamilySpec>), String> {
    match &a.input {
        Some(p) => Ok((read_group(p)?, None)),
        None => {
            let spec = spec_from_args(&a.family)?;
            Ok((spec.build().map_err(|e| e.to_string())?, Some(spec)))
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn run_census(a: &CensusArgs) -> Result<(u32, Census), String> {
    let n = max_level(a.max_order)?;
    let opts = CensusOptions {
        cache: a.cache.clone(),
        budget: a.budget,
        ..Default::default()
    };
    let c = census::bicyclic_census(n, &opts).map_err(|e| e.to_string())?;
    Ok((n, c))
}

fn dispatch(cmd: &Command) -> Result<Outcome, String> {
    match cmd {
        Command::Construct { family, out } => {
            let spec = spec_from_args(family)?;
            let g = spec.build().map_err(|e| e.to_string())?;
            let file = GroupFile::from_table(&g, None);
            let mut res = json!({ "spec": spec, "name": spec.to_string(), "order": g.order() });
            match out {
                Some(p) => {
                    fs::write(p, file.to_json()).map_err(|e| format!("{}: {e}", p.display()))?;
                    res["file"] = json!(p.display().to_string());
                }
                None => res["group_file"] = to_value(&file),
            }
            ok(res)
        }
        Command::Analyze(a) => {
            let (g, spec) = load_group(a)?;
            ok(json!({
                "spec": spec,
                "order": g.order(),
                "invariants": invariants::structural_invariants(&g),
                "shape": invariants::classify_shape(&g),
                "fingerprint": morphisms::fingerprint(&g),
            }))
        }
        Command::Subgroups(a) => {
            let (g, spec) = load_group(a)?;
            let lat = all_subgroups(&g, a.budget).map_err(|e| e.to_string())?;
            let classes: Vec<Value> = lat
                .classes
                .iter()
                .map(|c| {
                    json!({
                        "order": c.representative.len(),
                        "representative": c.representative.elems(),
                        "class_size": c.members.len(),
                        "normal": c.members.len() == 1,
                    })
                })
                .collect();
            ok(json!({
                "spec": spec,
                "order": g.order(),
                "subgroup_count": lat.count(),
                "class_count": classes.len(),
                "classes": classes,
            }))
        }
        Command::Essential(a) => {
            let (g, spec) = load_group(a)?;
            if !invariants::is_bicyclic(&g) {
                return Err(FusionError::NotBicyclic.to_string());
            }
            let lat = all_subgroups(&g, a.budget).map_err(|e| e.to_string())?;
            let cands = fusion::essential_candidates(&g, &lat).map_err(|e| e.to_string())?;
            ok(json!({
                "spec": spec,
                "order": g.order(),
                "candidate_class_count": cands.len(),
                "candidates": cands,
                "structural_checks": fusion::structural_checks(&g, &cands),
            }))
        }
        Command::Fusion(a) => {
            let (g, spec) = load_group(a)?;
            let lat = all_subgroups(&g, a.budget).map_err(|e| e.to_string())?;
            match fusion::fs_multiplicity_with(&g, &lat) {
                Ok(v) => ok(json!({ "spec": spec, "order": g.order(), "verdict": v })),
                Err(FusionError::UnmatchedGroup) => {
                    let v = fusion::admits_nonnilpotent_with(&g, &lat).map_err(|e| e.to_string())?;
                    Ok(Outcome {
                        results: json!({ "spec": spec, "order": g.order(), "verdict": v }),
                        violations: vec![Violation {
                            check: "fs_consistency".into(),
                            order: g.order(),
                            index: None,
                            detail: "admits a nonnilpotent system but matches no case".into(),
                        }],
                    })
                }
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Census(a) => {
            let (n, c) = run_census(a)?;
            let levels: Vec<Value> = (1..=n)
                .map(|l| {
                    let recs: Vec<_> = c.level(l).iter().map(|r| r.summary()).collect();
                    json!({ "order": 1u64 << l, "count": recs.len(), "records": recs })
                })
                .collect();
            let violations = c
                .records()
                .filter(|r| r.unmatched)
                .map(|r| Violation {
                    check: "fs_consistency".into(),
                    order: r.canonical_rep.order(),
                    index: Some(r.index),
                    detail: "admits a nonnilpotent system but matches no case".into(),
                })
                .collect();
            Ok(Outcome {
                results: json!({ "max_log_order": n, "levels": levels }),
                violations,
            })
        }
        Command::Count(a) => {
            let (n, c) = run_census(a)?;
            let table = census::count_table(&c, n);
            let violations = table
                .iter()
                .filter(|r| r.f_empirical != r.f_formula || r.g_empirical != r.g_formula)
                .map(|r| Violation {
                    check: "counts".into(),
                    order: 1 << r.n,
                    index: None,
                    detail: format!("f = {} vs {}, g = {} vs {}", r.f_empirical, r.f_formula, r.g_empirical, r.g_formula),
                })
                .collect();
            Ok(Outcome {
                results: json!({ "table": table }),
                violations,
            })
        }
        Command::Verify {
            census: a,
            metacyclic_max_order,
        } => {
            let (_, c) = run_census(a)?;
            let mut rep = census::verify_suite(&c);
            if let Some(m) = metacyclic_max_order {
                let extra = census::verify_metacyclic(max_level(*m)?);
                rep.checks.extend(extra.checks);
                rep.violations.extend(extra.violations);
            }
            Ok(Outcome {
                results: json!({ "checks": rep.checks }),
                violations: rep.violations,
            })
        }
        Command::Numtheory { family, r_max, n } => {
            let fam: ExponentFamily = family.parse().map_err(|e: numtheory::NumTheoryError| e.to_string())?;
            if *r_max > 64 {
                return Err("--r-max must be at most 64".into());
            }
            let exponent = n
                .map(|n| numtheory::group_exponent(fam, n))
                .transpose()
                .map_err(|e| e.to_string())?;
            let scan = numtheory::section_bound_verify(fam, *r_max);
            let violations = scan
                .failures
                .iter()
                .map(|&(r, n)| Violation {
                    check: "section_bound".into(),
                    order: 0,
                    index: None,
                    detail: format!("r = {r}, n = {n} violates the bound but is not obstructed"),
                })
                .collect();
            Ok(Outcome {
                results: json!({
                    "exponent": exponent,
                    "largest_unobstructed": scan.largest_unobstructed,
                    "failures": scan.failures,
                    "rows": scan.rows,
                }),
                violations,
            })
        }
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Construct { .. } => "construct",
        Command::Analyze(_) => "analyze",
        Command::Subgroups(_) => "subgroups",
        Command::Essential(_) => "essential",
        Command::Fusion(_) => "fusion",
        Command::Census(_) => "census",
        Command::Count(_) => "count",
        Command::Verify { .. } => "verify",
        Command::Numtheory { .. } => "numtheory",
    }
}

fn inputs(cmd: &Command) -> Value {
    match cmd {
        Command::Construct { family, out } => json!({ "family": family, "out": out }),
        Command::Analyze(a) | Command::Subgroups(a) | Command::Essential(a) | Command::Fusion(a) => to_value(a),
        Command::Census(a) | Command::Count(a) => to_value(a),
        Command::Verify {
            census,
            metacyclic_max_order,
        } => json!({ "census": census, "metacyclic_max_order": metacyclic_max_order }),
        Command::Numtheory { family, r_max, n } => json!({ "family": family, "r_max": r_max, "n": n }),
    }
}

fn num(v: &Value) -> u64 {
    v.as_u64().unwrap_or(0)
}

fn render_text(env: &ReportEnvelope) -> String {
    let mut out = format!("{}: {}\n", env.command, env.status);
    if let Some(e) = &env.error {
        out.push_str(&format!("error: {e}\n"));
    }
    if let Some(table) = env.results.get("table").and_then(Value::as_array) {
        out.push_str("   N  f_emp  f_form  g_emp  g_form\n");
        for r in table {
            out.push_str(&format!(
                "{:>4} {:>6} {:>7} {:>6} {:>7}\n",
                num(&r["n"]),
                num(&r["f_empirical"]),
                num(&r["f_formula"]),
                num(&r["g_empirical"]),
                num(&r["g_formula"])
            ));
        }
    } else if !env.results.is_null() {
        out.push_str(&serde_json::to_string_pretty(&env.results).expect("results serialize"));
        out.push('\n');
    }
    for v in &env.violations {
        out.push_str(&format!("violation [{}] order {}: {}\n", v.check, v.order, v.detail));
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("--jobs: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let outcome = dispatch(&cli.command);
    let elapsed_ms = start.elapsed().as_millis();
    let (results, violations, error) = match outcome {
        Ok(o) => (o.results, o.violations, None),
        Err(e) => (Value::Null, Vec::new(), Some(e)),
    };
    let status = match (&error, violations.is_empty()) {
        (Some(_), _) => "error",
        (None, true) => "pass",
        (None, false) => "fail",
    };
    let env = ReportEnvelope {
        schema_version: SCHEMA_VERSION,
        command: command_name(&cli.command).into(),
        inputs: inputs(&cli.command),
        results,
        violations,
        status,
        error,
        timing: Timing { elapsed_ms },
    };
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&env).expect("envelope serializes")),
        Format::Text => print!("{}", render_text(&env)),
    }
    ExitCode::from(match status {
        "pass" => 0,
        "fail" => 1,
        _ => 2,
    })
}
