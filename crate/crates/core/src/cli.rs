//! The `twosq` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::colorings::{Coloring, ColoringSource, ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::ground::{builtin_predicate, is_member, BuildOptions, GroundTable, SIGMA_ID};
use crate::hjlab::{self, LocatedWord, PhjPoint};
use crate::patterns::{generate, Generators, PatternSpec, PhiExpr, Witness};
use crate::search::{self, Outcome, SearchBounds, SearchMode, SearchReport, ThresholdOptions};
use crate::semigroup::{finite_products, power, star, Monomial};

/// Directory searched for `sigma.sgt` when `--cache` is not given.
pub const CACHE_DIR_ENV: &str = "TWOSQ_CACHE_DIR";
pub const DEFAULT_CACHE_FILE: &str = "sigma.sgt";
pub const DEFAULT_LIMIT: u64 = 10_000_000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_FOUND: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_OUT_OF_RANGE: i32 = 3;
pub const EXIT_CORRUPT: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "twosq",
    version,
    about = "Ranks, products and monochromatic patterns over the sums of two squares"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Table cache file; otherwise $TWOSQ_CACHE_DIR/sigma.sgt, otherwise an in-memory build.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Limit of the in-memory table built when no cache is found.
    #[arg(long, global = true, default_value_t = DEFAULT_LIMIT)]
    limit: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sieve the table up to --limit and write the binary cache.
    BuildCache {
        #[arg(long, default_value = SIGMA_ID)]
        predicate: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Is N a sum of two squares?
    Member { n: u64 },
    /// m *_f n.
    Op { m: u64, n: u64 },
    /// The n-fold *_f-power of x.
    Power { x: u64, n: u64 },
    /// Rank of a member s.
    Rank { s: u64 },
    /// The n-th member s_n.
    Element { n: u64 },
    /// Finite *_f-products of a sequence.
    Fp {
        #[arg(required = true)]
        xs: Vec<u64>,
    },
    /// Print the configuration generated by explicit generators.
    Pattern {
        #[command(flatten)]
        family: FamilyArgs,
        /// Generator indices: fpf/deuber/mt take the sequence, brauer X Z, geo B A D, pvw B C.
        #[arg(long = "gen", num_args = 1.., value_delimiter = ',', required = true)]
        gens: Vec<u64>,
        /// γ for the geo family.
        #[arg(long, value_delimiter = ',')]
        gamma: Vec<u64>,
    },
    /// Search one coloring for a monochromatic witness.
    Search {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        coloring: String,
        /// Configuration values must be below this; also the coloring's domain.
        #[arg(long)]
        bound: u64,
        #[arg(long, default_value_t = 100)]
        gen_max: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Det)]
        mode: ModeArg,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        include_one: bool,
        /// Also write the witness document here.
        #[arg(long)]
        witness_out: Option<PathBuf>,
        /// Include elapsed time in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Least N such that every r-coloring of {1..N} has a witness.
    Threshold {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        colors: u32,
        #[arg(long, default_value_t = 2)]
        start_bound: u64,
        #[arg(long)]
        max_bound: u64,
        #[arg(long)]
        include_one: bool,
    },
    /// Hales–Jewett variant search over located words.
    Hj {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        ap_k: Option<u64>,
        /// Numeric coloring composed with the word projection; defaults to random:seed=0,r=R.
        #[arg(long)]
        coloring: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        bound: u64,
        /// Instead, find the least window that works for every coloring of words.
        #[arg(long)]
        threshold: bool,
    },
    /// Polynomial Hales–Jewett search over X(q, N, d).
    Phj {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        colors: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        coloring: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        bound: u64,
        #[arg(long)]
        threshold: bool,
    },
    /// Re-derive a witness from its generators and check it against a coloring.
    Verify {
        /// A witness document or a search report containing one.
        #[arg(long)]
        witness: PathBuf,
        #[arg(long)]
        coloring: String,
        /// Domain of the coloring; defaults to just past the largest value.
        #[arg(long)]
        bound: Option<u64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Det,
    Fast,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long, value_parser = ["fpf", "brauer", "deuber", "mt", "geo", "pvw"])]
    family: String,
    /// fpf/mt sequence length, brauer and geo size.
    #[arg(long)]
    k: Option<u64>,
    /// deuber and mt arity.
    #[arg(long)]
    m: Option<usize>,
    /// deuber exponent bound.
    #[arg(long)]
    p: Option<u64>,
    /// mt map: sum, product, star, proj:I, linear:C1,C2+K.
    #[arg(long, default_value = "sum")]
    phi: String,
    /// pvw index sets, e.g. "2,3;4,5".
    #[arg(long)]
    sets: Option<String>,
}

impl FamilyArgs {
    /// `seq_len` overrides `k` for sequence families when generators are given.
    fn spec(&self, seq_len: Option<usize>) -> Result<PatternSpec> {
        let k = self.k.unwrap_or(1);
        let spec = match self.family.as_str() {
            "fpf" => PatternSpec::Fpf {
                k: seq_len.unwrap_or(self.k.unwrap_or(2) as usize),
            },
            "brauer" => PatternSpec::Brauer { k },
            "deuber" => PatternSpec::Deuber {
                m: seq_len.map(|l| l.saturating_sub(1)).or(self.m).unwrap_or(1),
                p: self.p.unwrap_or(1),
            },
            "mt" => {
                let m = self.m.unwrap_or(1);
                PatternSpec::Mt {
                    m,
                    k: seq_len.unwrap_or(self.k.map_or(m, |k| k as usize)),
                    phi: self.phi.parse::<PhiExpr>()?,
                }
            }
            "geo" => PatternSpec::Geo { k },
            "pvw" => {
                let text = self
                    .sets
                    .as_deref()
                    .ok_or_else(|| Error::InvalidParameter("pvw needs --sets".into()))?;
                let sets = parse_sets(text)?;
                PatternSpec::Pvw {
                    d: sets.first().map_or(0, Vec::len),
                    sets,
                }
            }
            other => return Err(Error::InvalidParameter(format!("unknown family {other}"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn parse_sets(text: &str) -> Result<Vec<Vec<u64>>> {
    text.split(';')
        .map(|set| {
            set.split(',')
                .map(|v| {
                    v.trim()
                        .parse()
                        .map_err(|_| Error::InvalidParameter(format!("bad set member {v:?}")))
                })
                .collect()
        })
        .collect()
}

fn generators_for(spec: &PatternSpec, gens: &[u64], gamma: &[u64]) -> Result<Generators> {
    let want = |n: usize| {
        if gens.len() == n {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "{} takes {n} generators, got {}",
                spec.family(),
                gens.len()
            )))
        }
    };
    Ok(match spec {
        PatternSpec::Fpf { .. } => Generators::Fpf { xs: gens.to_vec() },
        PatternSpec::Deuber { .. } => Generators::Deuber { xs: gens.to_vec() },
        PatternSpec::Mt { .. } => Generators::Mt { xs: gens.to_vec() },
        PatternSpec::Brauer { .. } => {
            want(2)?;
            Generators::Brauer {
                x: gens[0],
                z: gens[1],
                y: None,
            }
        }
        PatternSpec::Geo { .. } => {
            want(3)?;
            Generators::Geo {
                b: Monomial::single(gens[0]),
                gamma: gamma.to_vec(),
                a: gens[1],
                d: gens[2],
            }
        }
        PatternSpec::Pvw { .. } => {
            want(2)?;
            Generators::Pvw {
                b: Monomial::single(gens[0]),
                c: gens[1],
            }
        }
    })
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        e if e.is_out_of_range() => EXIT_OUT_OF_RANGE,
        Error::CorruptCache(_)
        | Error::PredicateMismatch { .. }
        | Error::MalformedWitness(_)
        | Error::Schema(_)
        | Error::Io { .. } => EXIT_CORRUPT,
        Error::NotMember(_) => EXIT_NOT_FOUND,
        _ => EXIT_USAGE,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::OutOfRange { .. }
        | Error::IndexOutOfRange { .. }
        | Error::SubsetOutOfRange { .. } => "out-of-range",
        Error::NotMember(_) => "not-member",
        Error::ResourceExhausted { .. } => "resource-exhausted",
        Error::CorruptCache(_) => "corrupt-cache",
        Error::PredicateMismatch { .. } => "predicate-mismatch",
        Error::OutOfDomain { .. } => "out-of-domain",
        Error::Schema(_) => "schema",
        Error::CapExceeded { .. } => "cap-exceeded",
        Error::OrderViolation(..) => "order-violation",
        Error::DomainOverlap(_) => "domain-overlap",
        Error::LetterOutOfAlphabet { .. } => "letter-out-of-alphabet",
        Error::EmptyGamma => "empty-gamma",
        Error::InvalidParameter(_) => "invalid-parameter",
        Error::MalformedWitness(_) => "malformed-witness",
        Error::Io { .. } => "io",
    }
}

struct Ctx<'a> {
    format: Format,
    cache: Option<PathBuf>,
    limit: u64,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    /// Print `doc` as JSON, or `human` in human mode.
    fn emit(&mut self, doc: &Value, human: &str) {
        let text = match self.format {
            Format::Json => serde_json::to_string_pretty(doc).expect("json"),
            Format::Human => human.trim_end().to_string(),
        };
        let _ = writeln!(self.out, "{text}");
    }

    fn warn(&mut self, msg: &str) {
        let _ = match self.format {
            Format::Json => writeln!(self.err, "{}", json!({ "warning": msg })),
            Format::Human => writeln!(self.err, "warning: {msg}"),
        };
    }

    fn table(&mut self) -> Result<GroundTable> {
        if let Some(path) = self.cache.clone() {
            return GroundTable::load_cache_for(&path, SIGMA_ID);
        }
        if let Some(dir) = std::env::var_os(CACHE_DIR_ENV) {
            let path = Path::new(&dir).join(DEFAULT_CACHE_FILE);
            if path.exists() {
                return GroundTable::load_cache_for(&path, SIGMA_ID);
            }
        }
        self.warn(&format!(
            "no table cache found; building one in memory up to {}",
            self.limit
        ));
        GroundTable::build(self.limit)
    }
}

/// Parse `args` (including the program name) and run, writing to the given streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let mut ctx = Ctx {
        format: cli.format,
        cache: cli.cache,
        limit: cli.limit,
        out,
        err,
    };
    match dispatch(&mut ctx, cli.command) {
        Ok(code) => code,
        Err(e) => {
            let code = exit_code(&e);
            let _ = match ctx.format {
                Format::Json => writeln!(
                    ctx.err,
                    "{}",
                    json!({ "error": { "kind": error_kind(&e), "message": e.to_string(), "exit": code } })
                ),
                Format::Human => writeln!(ctx.err, "error: {e}"),
            };
            code
        }
    }
}

fn dispatch(ctx: &mut Ctx, command: Command) -> Result<i32> {
    match command {
        Command::BuildCache { predicate, out } => {
            let limit = ctx.limit;
            let pred = builtin_predicate(&predicate).ok_or_else(|| {
                Error::InvalidParameter(format!("unknown predicate {predicate:?}"))
            })?;
            let path = match out {
                Some(p) => p,
                None => std::env::var_os(CACHE_DIR_ENV)
                    .map(|d| Path::new(&d).join(DEFAULT_CACHE_FILE))
                    .ok_or_else(|| {
                        Error::InvalidParameter(format!("need --out or ${CACHE_DIR_ENV}"))
                    })?,
            };
            let table = GroundTable::build_with(limit, pred, BuildOptions::default())?;
            table.save_cache(&path)?;
            ctx.emit(
                &json!({ "path": path, "limit": limit, "predicate": table.predicate_id(), "size": table.len() }),
                &format!("wrote {} elements below {limit} to {}", table.len(), path.display()),
            );
            Ok(EXIT_OK)
        }
        Command::Member { n } => {
            let m = is_member(n);
            ctx.emit(&json!({ "n": n, "member": m }), &m.to_string());
            Ok(EXIT_OK)
        }
        Command::Op { m, n } => {
            let t = ctx.table()?;
            let v = star(&t, m, n)?;
            ctx.emit(
                &json!({ "op": "star", "m": m, "n": n, "result": v }),
                &v.to_string(),
            );
            Ok(EXIT_OK)
        }
        Command::Power { x, n } => {
            let t = ctx.table()?;
            let v = power(&t, x, n)?;
            ctx.emit(
                &json!({ "op": "power", "x": x, "n": n, "result": v }),
                &v.to_string(),
            );
            Ok(EXIT_OK)
        }
        Command::Rank { s } => {
            let t = ctx.table()?;
            let v = t.rank(s)?;
            ctx.emit(
                &json!({ "op": "rank", "s": s, "result": v }),
                &v.to_string(),
            );
            Ok(EXIT_OK)
        }
        Command::Element { n } => {
            let t = ctx.table()?;
            let v = t.element(n)?;
            ctx.emit(
                &json!({ "op": "element", "n": n, "result": v }),
                &v.to_string(),
            );
            Ok(EXIT_OK)
        }
        Command::Fp { xs } => {
            let t = ctx.table()?;
            let set = finite_products(&t, &xs)?;
            ctx.emit(&json!({ "op": "fp", "xs": xs, "result": set }), &join(&set));
            Ok(EXIT_OK)
        }
        Command::Pattern {
            family,
            gens,
            gamma,
        } => {
            let spec = family.spec(Some(gens.len()))?;
            let generators = generators_for(&spec, &gens, &gamma)?;
            let t = ctx.table()?;
            let config = generate(&spec, &generators, &t)?;
            ctx.emit(
                &json!({ "spec": spec, "generators": generators, "configuration": config }),
                &join(&config),
            );
            Ok(EXIT_OK)
        }
        Command::Search {
            family,
            coloring,
            bound,
            gen_max,
            mode,
            budget,
            include_one,
            witness_out,
            timings,
        } => {
            let spec = family.spec(None)?;
            let source: ColoringSource = coloring.parse()?;
            let col = source.realize(bound)?;
            let t = ctx.table()?;
            let bounds = SearchBounds {
                generator_max: gen_max,
                value_bound: bound.min(col.bound()),
                node_budget: budget.unwrap_or(u64::MAX),
                include_one,
            };
            let mode = match mode {
                ModeArg::Det => SearchMode::Det,
                ModeArg::Fast => SearchMode::Fast,
            };
            let report = search::find_witness(&t, &col, &spec, &bounds, mode)?;
            if let (Some(path), Some(w)) = (&witness_out, report.witness()) {
                w.save(path)?;
            }
            let doc = search_document(&spec, &source, &bounds, &report, timings);
            let human = search_summary(&report, timings);
            ctx.emit(&doc, &human);
            Ok(if report.witness().is_some() {
                EXIT_OK
            } else {
                EXIT_NOT_FOUND
            })
        }
        Command::Threshold {
            family,
            colors,
            start_bound,
            max_bound,
            include_one,
        } => {
            let spec = family.spec(None)?;
            let t = ctx.table()?;
            let opts = ThresholdOptions {
                cap: ENUMERATION_CAP,
                include_one,
            };
            let n = search::threshold(&spec, colors, start_bound, max_bound, &t, opts)?;
            ctx.emit(
                &json!({ "spec": spec, "colors": colors, "start-bound": start_bound, "max-bound": max_bound, "threshold": n }),
                &n.map_or("none".to_string(), |n| n.to_string()),
            );
            Ok(if n.is_some() { EXIT_OK } else { EXIT_NOT_FOUND })
        }
        Command::Hj {
            q,
            r,
            n,
            ap_k,
            coloring,
            bound,
            threshold,
        } => {
            if threshold {
                let found = hjlab::hj_threshold(q, r, ap_k, n, ENUMERATION_CAP)?;
                ctx.emit(
                    &json!({ "q": q, "r": r, "ap-k": ap_k, "max-n": n, "threshold": found }),
                    &found.map_or("none".to_string(), |n| n.to_string()),
                );
                return Ok(if found.is_some() {
                    EXIT_OK
                } else {
                    EXIT_NOT_FOUND
                });
            }
            let source = numeric_source(coloring, r)?;
            let col = source.realize(bound)?;
            let t = ctx.table()?;
            let color_word = hjlab::projected_coloring(&col, &t);
            let outcome = hjlab::hj_search(q, n, ap_k, &color_word)?;
            let human = match outcome.instance() {
                Some(inst) => format!(
                    "alpha {}\ngamma {}\n{}color {}",
                    word_text(&inst.alpha),
                    join(&inst.gamma),
                    inst.ap
                        .as_ref()
                        .map_or(String::new(), |f| format!("ap {}\n", join(f))),
                    inst.color
                ),
                None => "exhausted".to_string(),
            };
            ctx.emit(
                &json!({ "q": q, "n": n, "ap-k": ap_k, "coloring": source.to_string(), "outcome": outcome }),
                &human,
            );
            Ok(if outcome.instance().is_some() {
                EXIT_OK
            } else {
                EXIT_NOT_FOUND
            })
        }
        Command::Phj {
            q,
            colors,
            d,
            n,
            coloring,
            bound,
            threshold,
        } => {
            if threshold {
                let found = hjlab::phj_threshold(q, colors, d, n, ENUMERATION_CAP)?;
                ctx.emit(
                    &json!({ "q": q, "colors": colors, "d": d, "max-n": n, "threshold": found }),
                    &found.map_or("none".to_string(), |n| n.to_string()),
                );
                return Ok(if found.is_some() {
                    EXIT_OK
                } else {
                    EXIT_NOT_FOUND
                });
            }
            let source = numeric_source(coloring, colors)?;
            let col = source.realize(bound)?;
            let t = ctx.table()?;
            let color_point = hjlab::projected_point_coloring(&col, &t);
            let outcome = hjlab::phj_search(q, d, n, ENUMERATION_CAP, &color_point)?;
            let human = match outcome.instance() {
                Some(inst) => format!(
                    "a {}\ngamma {}\ncolor {}",
                    point_text(&inst.a),
                    join(&inst.gamma),
                    inst.color
                ),
                None => "exhausted".to_string(),
            };
            ctx.emit(
                &json!({ "q": q, "d": d, "n": n, "coloring": source.to_string(), "outcome": outcome }),
                &human,
            );
            Ok(if outcome.instance().is_some() {
                EXIT_OK
            } else {
                EXIT_NOT_FOUND
            })
        }
        Command::Verify {
            witness,
            coloring,
            bound,
        } => {
            let w = read_witness(&witness)?;
            let source: ColoringSource = coloring.parse()?;
            let top = w.configuration.iter().max().copied().unwrap_or(0);
            let col: Coloring = source.realize(bound.unwrap_or(top + 1))?;
            let t = ctx.table()?;
            let ok = search::verify_witness(&w, &col, &t)?;
            ctx.emit(
                &json!({ "witness": witness, "coloring": source.to_string(), "verified": ok }),
                if ok { "verified" } else { "rejected" },
            );
            Ok(if ok { EXIT_OK } else { EXIT_NOT_FOUND })
        }
    }
}

fn numeric_source(coloring: Option<String>, r: u32) -> Result<ColoringSource> {
    match coloring {
        Some(text) => text.parse(),
        None => Ok(ColoringSource::Random { seed: 0, r }),
    }
}

/// A witness document, or a search report with a `witness` field.
fn read_witness(path: &Path) -> Result<Witness> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| Error::MalformedWitness(e.to_string()))?;
    let inner = match value.get("witness") {
        Some(w) if value.get("generators").is_none() => w.clone(),
        _ => value,
    };
    serde_json::from_value(inner).map_err(|e| Error::MalformedWitness(e.to_string()))
}

fn search_document(
    spec: &PatternSpec,
    source: &ColoringSource,
    bounds: &SearchBounds,
    report: &SearchReport,
    timings: bool,
) -> Value {
    let outcome = match &report.outcome {
        Outcome::Witness { .. } => "witness",
        Outcome::Exhausted { .. } => "exhausted",
        Outcome::BudgetHit { .. } => "budget-hit",
    };
    let seed = match source {
        ColoringSource::Random { seed, .. } => Some(*seed),
        _ => None,
    };
    let mut doc = json!({
        "report": "search",
        "spec": spec,
        "coloring": source.to_string(),
        "seed": seed,
        "mode": report.mode,
        "bounds": {
            "generator-max": bounds.generator_max,
            "value-bound": bounds.value_bound,
            "node-budget": (bounds.node_budget != u64::MAX).then_some(bounds.node_budget),
            "include-one": bounds.include_one,
        },
        "outcome": outcome,
        "nodes": report.nodes,
        "skipped-out-of-range": report.skipped_out_of_range,
        "rejected": report.rejected,
        "witness": report.witness(),
    });
    if timings {
        doc["elapsed-ms"] = json!(report.elapsed.as_secs_f64() * 1e3);
    }
    doc
}

fn search_summary(report: &SearchReport, timings: bool) -> String {
    let mut s = match &report.outcome {
        Outcome::Witness { witness } => format!(
            "witness {}\nconfiguration {}\ncolor {}\n",
            serde_json::to_string(&witness.generators).expect("json"),
            join(&witness.configuration),
            witness.color
        ),
        Outcome::Exhausted { .. } => "exhausted\n".to_string(),
        Outcome::BudgetHit { .. } => "budget hit\n".to_string(),
    };
    s += &format!(
        "nodes {}  skipped {}  rejected {}\n",
        report.nodes, report.skipped_out_of_range, report.rejected
    );
    if timings {
        s += &format!("elapsed {:.3?}\n", report.elapsed);
    }
    s
}

fn join<'a>(xs: impl IntoIterator<Item = &'a u64>) -> String {
    xs.into_iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn word_text(w: &LocatedWord) -> String {
    if w.is_empty() {
        return "{}".into();
    }
    let parts: Vec<String> = w
        .letters()
        .iter()
        .map(|(p, l)| format!("{p}:{l}"))
        .collect();
    parts.join(" ")
}

fn point_text(p: &PhjPoint) -> String {
    let comps: Vec<String> = p
        .components()
        .iter()
        .map(|c| c.iter().map(u32::to_string).collect::<Vec<_>>().join(""))
        .collect();
    comps.join(" | ")
}
