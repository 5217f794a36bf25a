use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use mto1::family::{fired_clauses, predict, FamilyKind};
use mto1::field::FieldCtx;
use mto1::inverse::invert_f;
use mto1::involution::involution_of_f;
use mto1::reduction::{load_spec, HShape, MapInstance};
use mto1::sweep::{sweep_plan, verify_family, Budget, FamilyReport, SweepOptions, DEFAULT_SEED};
use mto1::verdict::Scope;

mod render;

use render::{el_ext, el_base, interpolate_ext};

#[derive(Parser)]
#[command(name = "mto1", version, about = "m-to-1 maps h(ax^q+bx+c)+ux^q+vx over F_{q^2}")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Describe the tower F_p < F_q < F_{q^2} for q = p^n.
    FieldInfo {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        n: u32,
    },
    /// Oracle and theorem verdicts for one map spec (JSON file, "-" for stdin).
    Classify {
        spec: PathBuf,
        #[arg(short)]
        m: Option<u64>,
    },
    /// Sweep family theorems against the oracle.
    Verify(VerifyArgs),
    /// Compositional inverse of a 1-to-1 spec.
    Invert { spec: PathBuf },
    /// Involution of a 2-to-1 spec (q even).
    Involute { spec: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Default)]
struct VerifyArgs {
    /// TOML file with the same keys as the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(short)]
    p: Option<u64>,
    #[arg(short)]
    n: Option<u32>,
    /// Family tag, repeatable.
    #[arg(long = "family")]
    families: Vec<String>,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long)]
    t: Option<u64>,
    /// Every family over every field of the standard plan.
    #[arg(long)]
    all: bool,
    /// auto, exhaustive, or a sample count.
    #[arg(long)]
    budget: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, env = "MTO1_OUT_DIR")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    no_inverse: bool,
    #[arg(long)]
    no_involution: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepConfig {
    p: Option<u64>,
    n: Option<u32>,
    #[serde(default)]
    families: Vec<String>,
    s: Option<u32>,
    t: Option<u64>,
    #[serde(default)]
    all: bool,
    budget: Option<toml::Value>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    format: Option<Format>,
}

#[derive(Debug)]
enum Failure {
    /// Bad input: exit code 2.
    Usage(String),
    /// A check disagreed: exit code 1.
    Mismatch,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::FieldInfo { p, n } => field_info(p, n),
        Cmd::Classify { spec, m } => classify(&spec, m),
        Cmd::Verify(args) => verify(args),
        Cmd::Invert { spec } => invert(&spec),
        Cmd::Involute { spec } => involute(&spec),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn print_json(v: &impl Serialize) -> CmdResult {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        Ok(std::io::read_to_string(std::io::stdin())?)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }
}

fn field_info(p: u64, n: u32) -> CmdResult {
    let ctx = FieldCtx::new(p, n)?;
    let spec = ctx.spec();
    let f = ctx.ext();
    print_json(&json!({
        "p": p,
        "n": n,
        "q": ctx.q(),
        "q2": ctx.q2(),
        "irr_q": spec.irr_q,
        "irr_q2": spec.irr_q2,
        "xi": spec.xi,
        "xi_order": f.element_order(ctx.xi()),
        "base_generator": el_base(&ctx, ctx.base().exp(1)),
        "base_generator_in_ext": el_ext(&ctx, ctx.embed(ctx.base().exp(1))),
    }))
}

fn classify(path: &Path, m: Option<u64>) -> CmdResult {
    let (ctx, spec) = load_spec(&read_input(path)?)?;
    let h = spec.h.clone();
    let inst = MapInstance::new(&ctx, spec)?;
    let q = ctx.q();
    let dc = inst.constants();
    let f_cls = inst.classify_f();
    let g_cls = inst.classify_g()?;
    let reduced = inst.reduce_valid_ms()?;
    let oracle_le_q: Vec<u64> = f_cls.valid_ms().iter().copied().filter(|&m| m <= q).collect();
    let commute = inst.check_commute();
    let mut agree = commute && oracle_le_q == reduced;

    let mut out = json!({
        "field": {"p": ctx.p(), "n": ctx.n(), "q": q},
        "constants": {
            "A": el_ext(&ctx, dc.big_a),
            "B": el_ext(&ctx, dc.big_b),
            "k": dc.k,
            "gamma0": el_base(&ctx, dc.gamma0),
        },
        "commute": commute,
        "f": {"valid_ms": f_cls.valid_ms(), "fiber_sizes": f_cls.size_histogram()},
        "g": {"valid_ms": g_cls.valid_ms(), "fiber_sizes": g_cls.size_histogram()},
        "reduced_valid_ms": reduced,
    });

    if let HShape::Family(kind) = h {
        let scope = fired_clauses(&inst, kind);
        let mut fam = json!({"name": kind.name(), "r": inst.exponent()});
        match &scope {
            Scope::Out(reason) => fam["out_of_scope"] = json!(reason),
            Scope::In(clauses) => {
                fam["clauses"] = json!(clauses);
                let mut predicted = Vec::new();
                for mm in 1..=q {
                    if let Some(says) = predict(&inst, kind, mm)?.is_m_to_1() {
                        if says {
                            predicted.push(mm);
                        }
                        agree &= says == oracle_le_q.contains(&mm);
                    }
                }
                fam["predicted_ms"] = json!(predicted);
            }
        }
        if let Some(mm) = m.filter(|&mm| mm <= q) {
            fam["verdict"] = serde_json::to_value(predict(&inst, kind, mm)?)?;
        }
        out["family"] = fam;
    }
    if let Some(mm) = m {
        let rv = inst.reduce_classify(mm)?;
        let exceptional = f_cls
            .exceptional_set(mm)
            .map(|xs| xs.into_iter().map(|x| el_ext(&ctx, x)).collect::<Vec<_>>());
        out["m"] = json!({
            "m": mm,
            "oracle": f_cls.is_m_to_1(mm)?,
            "exceptional_set": exceptional,
            "reduce": rv,
        });
    }
    out["agreement"] = json!(agree);
    print_json(&out)?;
    if agree {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn invert(path: &Path) -> CmdResult {
    let text = read_input(path)?;
    let (ctx, spec) = load_spec(&text)?;
    let inst = MapInstance::new(&ctx, spec)?;
    let inv = invert_f(&inst)?;
    print_json(&json!({
        "spec": serde_json::from_str::<Value>(&text)?,
        "kind": "inverse",
        "g_inverse": inv.g_inverse.source.describe(),
        "poly_coeffs": interpolate_ext(&ctx, &inv.values),
        "verified": inv.verified,
    }))?;
    if inv.verified {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn involute(path: &Path) -> CmdResult {
    let text = read_input(path)?;
    let (ctx, spec) = load_spec(&text)?;
    let inst = MapInstance::new(&ctx, spec)?;
    let inv = involution_of_f(&inst)?;
    print_json(&json!({
        "spec": serde_json::from_str::<Value>(&text)?,
        "kind": "involution",
        "method": format!("{:?}", inv.method),
        "alpha": inv.alpha.map(|a| el_base(&ctx, a)),
        "poly_coeffs": interpolate_ext(&ctx, &inv.values),
        "involution": inv.is_involution,
        "fixed_point_free": inv.fixed_point_free,
        "preserves_f": inv.preserves_f,
        "verified": inv.verified(),
    }))?;
    if inv.verified() {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn parse_budget(v: &str) -> Result<Budget, Failure> {
    match v {
        "auto" => Ok(Budget::Auto),
        "exhaustive" => Ok(Budget::Exhaustive),
        n => match n.parse::<u64>() {
            Ok(k) if k > 0 => Ok(Budget::Samples(k)),
            _ => Err(Failure::Usage(format!("budget must be auto, exhaustive or a positive count, got {n}"))),
        },
    }
}

const CSV_HEADER: [&str; 14] = [
    "family", "p", "n", "index", "sub", "a", "b", "c", "u", "v", "k", "oracle_ms", "predicted_ms", "clauses",
];

fn verify(args: VerifyArgs) -> CmdResult {
    let cfg: SweepConfig = match &args.config {
        Some(path) => toml::from_str(&read_input(path)?)?,
        None => SweepConfig::default(),
    };
    let budget = match (&args.budget, &cfg.budget) {
        (Some(b), _) => parse_budget(b)?,
        (None, Some(toml::Value::Integer(k))) => parse_budget(&k.to_string())?,
        (None, Some(toml::Value::String(s))) => parse_budget(s)?,
        (None, Some(other)) => return Err(Failure::Usage(format!("bad budget {other}"))),
        (None, None) => Budget::Auto,
    };
    let format = args.format.or(cfg.format).unwrap_or(Format::Json);
    let out = args.out.or(cfg.out);
    let s = args.s.or(cfg.s);
    let t = args.t.or(cfg.t);
    let families = if args.families.is_empty() { cfg.families } else { args.families };

    let jobs: Vec<(FamilyKind, u64, u32)> = if args.all || cfg.all {
        sweep_plan()
    } else {
        let (p, n) = match (args.p.or(cfg.p), args.n.or(cfg.n)) {
            (Some(p), Some(n)) => (p, n),
            _ => return Err(Failure::Usage("need -p and -n (or --all)".into())),
        };
        if families.is_empty() {
            return Err(Failure::Usage("need at least one --family".into()));
        }
        families
            .iter()
            .map(|name| FamilyKind::from_parts(name, s, t).map(|k| (k, p, n)))
            .collect::<Result<_, _>>()?
    };

    let opts = SweepOptions {
        budget,
        seed: args.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED),
        check_inverse: !args.no_inverse,
        check_involution: !args.no_involution,
        keep_rows: format == Format::Csv,
        ..Default::default()
    };
    if let Some(dir) = &out {
        std::fs::create_dir_all(dir)?;
    }

    let mut reports = Vec::new();
    let mut ctx_cache: Option<FieldCtx> = None;
    for (kind, p, n) in jobs {
        if ctx_cache.as_ref().map(|c| (c.p(), c.n())) != Some((p, n)) {
            ctx_cache = Some(FieldCtx::new(p, n)?);
        }
        let ctx = ctx_cache.as_ref().expect("just built");
        let start = Instant::now();
        let rep = verify_family(ctx, kind, &opts);
        eprintln!(
            "{:<12} q={:<3} {:<10} tuples={:<7} mismatches={} {}({:.1}s)",
            stem(&rep),
            rep.field.q,
            if rep.exhaustive { "exhaustive" } else { "sampled" },
            rep.tuples_checked,
            rep.mismatch_count,
            rep.scope_note.as_deref().map(|s| format!("[{s}] ")).unwrap_or_default(),
            start.elapsed().as_secs_f64()
        );
        if let Some(dir) = &out {
            let path = dir.join(format!("{}-p{}n{}", stem(&rep), p, n));
            std::fs::write(path.with_extension("json"), serde_json::to_string_pretty(&rep)? + "\n")?;
            if format == Format::Csv {
                write_csv(std::fs::File::create(path.with_extension("csv"))?, &[&rep])?;
            }
        }
        reports.push(rep);
    }

    if out.is_none() {
        match format {
            Format::Json => print_json(&reports)?,
            Format::Csv => write_csv(std::io::stdout(), &reports.iter().collect::<Vec<_>>())?,
        }
    }
    if reports.iter().all(FamilyReport::ok) {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn stem(rep: &FamilyReport) -> String {
    let mut s = rep.family.clone();
    if let Some(x) = rep.s {
        s += &format!("-s{x}");
    }
    if let Some(x) = rep.t {
        s += &format!("-t{x}");
    }
    s
}

fn write_csv(w: impl std::io::Write, reports: &[&FamilyReport]) -> CmdResult {
    // the csv crate cannot derive headers for a struct nested in a tuple
    let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    wr.write_record(CSV_HEADER)?;
    for rep in reports {
        let family = stem(rep);
        for row in &rep.rows {
            wr.serialize((&family, rep.field.p, rep.field.n, row))?;
        }
    }
    wr.flush()?;
    Ok(())
}
