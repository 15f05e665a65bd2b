use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use icg::canonical::enumerate_separated;
use icg::distance::{bfs_work, BFS_WORK_WARN_THRESHOLD};
use icg::numtheory::{factorize, Factorization};
use icg::verify::{verify_range, verify_transitivity, VerifyOptions, SCHEMA_VERSION};
use icg::{
    bfs_profile, diameter, enumerate_connected, extremal_check_t_eq_k, extremal_check_t_lt_k,
    predict_max_for_t, predict_overall_max, pst_admissible, saxena_family, separation_witness,
    small_family_lookup, worst_vertex, Cardinality, DivisorSet, IcgError, IcgInstance,
    WorstVertexVariant, DEFAULT_MAX_SUBSETS, DEFAULT_ORACLE_BOUND,
};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "icg", version, about = "Diameters of integral circulant graphs")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text", env = "ICG_FORMAT")]
    format: Format,

    /// Worker threads for `verify` (default: all cores).
    #[arg(long, global = true, env = "ICG_JOBS")]
    jobs: Option<usize>,

    /// Cap on the number of divisor subsets any enumeration may visit.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_SUBSETS, env = "ICG_MAX_SUBSETS",
          value_parser = clap::value_parser!(u64).range(1..))]
    max_subsets: u64,

    /// Largest order for which the all-pairs oracle may run.
    #[arg(long, global = true, default_value_t = DEFAULT_ORACLE_BOUND, env = "ICG_ORACLE_BOUND",
          value_parser = clap::value_parser!(u64).range(1..))]
    oracle_bound: u64,

    /// Write output here instead of stdout.
    #[arg(long, global = true, env = "ICG_OUTPUT")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Diameter of ICG_n(D) with a witness vertex and path.
    Diameter { n: u64, divisors: Divisors },
    /// Distances from vertex 0.
    Profile { n: u64, divisors: Divisors },
    /// Predicted maximal diameter of order n, overall or for |D| = t.
    Predict {
        n: u64,
        #[arg(long)]
        t: Option<usize>,
    },
    /// Compare predictions with exhaustive BFS over an inclusive range lo..hi.
    Verify {
        range: Range,
        #[arg(long, env = "ICG_FAIL_FAST")]
        fail_fast: bool,
    },
    /// List connected divisor sets, or only separated ones.
    Enumerate {
        n: u64,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        separated: bool,
    },
    /// Test whether D reaches the maximal diameter for its size.
    Extremal { n: u64, divisors: Divisors },
    /// Vertex at maximal distance from 0 built from a separation witness.
    WorstVertex {
        n: u64,
        divisors: Divisors,
        #[arg(long, value_parser = parse_variant, default_value = "I")]
        variant: WorstVertexVariant,
    },
    /// Perfect state transfer admissibility of D.
    Pst { n: u64, divisors: Divisors },
    /// Known extremal families.
    Family {
        #[command(subcommand)]
        kind: FamilyKind,
    },
    /// Check that every vertex has the same distance distribution, n <= n_max.
    Transitivity { n_max: u64 },
}

#[derive(Subcommand)]
enum FamilyKind {
    /// n = 2 p_1^2 ... p_k^2 with D = { m / p_i^2 }.
    Saxena { primes: Divisors },
    /// Small-order templates matching n.
    Small { n: u64 },
}

#[derive(Clone)]
struct Divisors(Vec<u64>);

impl std::str::FromStr for Divisors {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|x| x.parse::<u64>().map_err(|_| format!("bad number {x:?} in {s:?}")))
            .collect::<Result<_, _>>()
            .map(Divisors)
    }
}

#[derive(Clone, Copy)]
struct Range(u64, u64);

impl std::str::FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (lo, hi) = s.split_once("..").ok_or_else(|| format!("expected lo..hi, got {s:?}"))?;
        let parse = |x: &str| x.parse::<u64>().map_err(|_| format!("bad bound {x:?}"));
        Ok(Range(parse(lo)?, parse(hi)?))
    }
}

fn parse_variant(s: &str) -> Result<WorstVertexVariant, String> {
    match s {
        "I" | "i" | "1" => Ok(WorstVertexVariant::I),
        "II" | "ii" | "2" => Ok(WorstVertexVariant::II),
        _ => Err(format!("variant must be I or II, got {s:?}")),
    }
}

enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<IcgError> for Failure {
    fn from(e: IcgError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

/// What a command produced: JSON payload, CSV rows, text lines, and
/// whether it counts as a verification mismatch.
struct Rendered {
    json: Value,
    csv: Vec<String>,
    text: Vec<String>,
    mismatch: bool,
}

impl Rendered {
    fn new(json: Value, csv: Vec<String>, text: Vec<String>) -> Self {
        Rendered { json, csv, text, mismatch: false }
    }
}

fn to_json(x: &impl Serialize) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn instance(n: u64, d: &Divisors) -> Result<IcgInstance, Failure> {
    let g = IcgInstance::new(n, &d.0)?;
    if bfs_work(&g) > BFS_WORK_WARN_THRESHOLD {
        eprintln!(
            "warning: BFS over n = {n} with {} symbols visits more than {BFS_WORK_WARN_THRESHOLD} edges",
            g.symbols().len()
        );
    }
    Ok(g)
}

fn cmd_diameter(n: u64, d: &Divisors) -> Result<Rendered, Failure> {
    let g = instance(n, d)?;
    let res = diameter(&g);
    let ds = g.divisor_set();
    let value = match res.value.finite() {
        Some(v) => v.to_string(),
        None => "infinite (disconnected)".to_string(),
    };
    let mut text = vec![value.clone()];
    if res.value.finite().is_some() {
        text.push(format!("witness vertex {}", res.witness_vertex));
        text.push(format!("path {}", join(&res.witness_path)));
    }
    let json = json!({ "n": n, "divisors": ds.divisors(), "result": to_json(&res) });
    let csv = vec![
        "n,divisors,diameter,witness_vertex".into(),
        format!("{n},\"{}\",{},{}", join(ds.divisors()), res.value, res.witness_vertex),
    ];
    Ok(Rendered::new(json, csv, text))
}

fn cmd_profile(n: u64, d: &Divisors) -> Result<Rendered, Failure> {
    let g = instance(n, d)?;
    let p = bfs_profile(&g);
    let mut csv = Vec::new();
    p.write_csv(&mut csv)?;
    let csv: Vec<String> = String::from_utf8(csv).expect("ascii").lines().map(String::from).collect();
    let text = csv[1..].iter().map(|l| l.replace(',', " ")).collect();
    Ok(Rendered::new(to_json(&p), csv, text))
}

fn cmd_predict(n: u64, t: Option<usize>) -> Result<Rendered, Failure> {
    let f = factorize(n)?;
    let p = match t {
        Some(t) => predict_max_for_t(&f, t)?,
        None => predict_overall_max(&f),
    };
    let mut text = vec![format!("{} ({})", p.value, p.case_label.as_str())];
    if !p.applicable {
        text.push(format!("t exceeds k = {}; value is the overall upper bound", f.k()));
    }
    let json = json!({ "n": n, "t": t, "prediction": to_json(&p) });
    let t_col = t.map_or("all".to_string(), |t| t.to_string());
    let csv = vec![
        "n,t,value,case_label,applicable".into(),
        format!("{n},{t_col},{},{},{}", p.value, p.case_label.as_str(), p.applicable),
    ];
    Ok(Rendered::new(json, csv, text))
}

fn cmd_verify(cli: &Cli, range: Range, fail_fast: bool) -> Result<Rendered, Failure> {
    let opts = VerifyOptions { max_subsets: cli.max_subsets, jobs: cli.jobs, fail_fast };
    let report = verify_range(range.0, range.1, &opts)?;
    let mut csv = Vec::new();
    report.write_csv(&mut csv)?;
    let csv = String::from_utf8(csv).expect("ascii").lines().map(String::from).collect();
    let mut text = vec![format!(
        "{} orders: {} match, {} mismatch, {} not applicable",
        report.orders_checked, report.match_count, report.mismatch_count, report.not_applicable_count
    )];
    for r in &report.mismatches {
        text.push(format!(
            "mismatch n = {} t = {:?}: predicted {}, observed {:?}",
            r.n, r.t, r.predicted.value, r.observed_max
        ));
    }
    if !report.anomalous_orders.is_empty() {
        text.push(format!("anomalous orders: {}", join(&report.anomalous_orders)));
    }
    let mismatch = !report.passed();
    Ok(Rendered { json: to_json(&report), csv, text, mismatch })
}

fn cmd_enumerate(cli: &Cli, n: u64, t: Option<usize>, separated: bool) -> Result<Rendered, Failure> {
    let f = factorize(n)?;
    let sets = if separated {
        let sizes = match t {
            Some(t) => vec![t],
            None => (1..=f.k()).collect(),
        };
        let mut out = Vec::new();
        for t in sizes {
            out.extend(enumerate_separated(&f, t, cli.max_subsets)?);
        }
        out
    } else {
        let card = t.map_or(Cardinality::All, Cardinality::Exactly);
        enumerate_connected(&f, card, cli.max_subsets)?
    };
    let lists: Vec<&[u64]> = sets.iter().map(DivisorSet::divisors).collect();
    let json = json!({ "n": n, "t": t, "separated": separated, "count": sets.len(), "sets": lists });
    let mut csv = vec!["n,size,divisors".to_string()];
    csv.extend(lists.iter().map(|d| format!("{n},{},\"{}\"", d.len(), join(d))));
    let text = lists.iter().map(|d| join(d)).collect();
    Ok(Rendered::new(json, csv, text))
}

fn cmd_extremal(f: &Factorization, ds: &DivisorSet) -> Result<Rendered, Failure> {
    let verdict = if ds.len() == f.k() {
        let w = separation_witness(f, ds)
            .ok_or_else(|| Failure::Usage(format!("D = {ds} has no separation witness")))?;
        extremal_check_t_eq_k(f, ds, &w)?
    } else {
        extremal_check_t_lt_k(f, ds)?
    };
    let cond = verdict.matched_condition.map(|c| to_json(&c));
    let cond_text = cond.as_ref().and_then(Value::as_str).unwrap_or("none").to_string();
    let text = vec![format!(
        "{} bound {} (condition {cond_text})",
        if verdict.attains { "attains" } else { "misses" },
        verdict.bound
    )];
    let csv = vec![
        "n,divisors,attains,bound,condition".into(),
        format!("{},\"{}\",{},{},{cond_text}", f.n(), join(ds.divisors()), verdict.attains, verdict.bound),
    ];
    let json = json!({ "n": f.n(), "divisors": ds.divisors(), "verdict": to_json(&verdict) });
    Ok(Rendered::new(json, csv, text))
}

fn cmd_worst_vertex(n: u64, d: &Divisors, variant: WorstVertexVariant) -> Result<Rendered, Failure> {
    let f = factorize(n)?;
    let ds = DivisorSet::new(n, &d.0)?;
    let w = separation_witness(&f, &ds)
        .ok_or_else(|| Failure::Usage(format!("D = {ds} has no separation witness")))?;
    let l = worst_vertex(&f, &ds, &w, variant)?;
    let json = json!({ "n": n, "divisors": ds.divisors(), "variant": to_json(&variant), "vertex": l });
    let csv = vec!["n,divisors,vertex".into(), format!("{n},\"{}\",{l}", join(ds.divisors()))];
    Ok(Rendered::new(json, csv, vec![l.to_string()]))
}

fn cmd_pst(n: u64, d: &Divisors) -> Result<Rendered, Failure> {
    let f = factorize(n)?;
    let ds = DivisorSet::new(n, &d.0)?;
    let dec = pst_admissible(&f, &ds);
    let text = match &dec {
        Some(p) => vec![
            "admissible".into(),
            format!("d3tilde {}", join(&p.d3tilde)),
            format!("d2 {}", join(&p.d2)),
            format!("2*d2 {}", join(&p.two_d2)),
            format!("4*d2 {}", join(&p.four_d2)),
            format!("hub {} (a = {})", p.hub, p.a),
        ],
        None => vec!["not admissible".into()],
    };
    let csv = vec![
        "n,divisors,admissible,a,hub".into(),
        match &dec {
            Some(p) => format!("{n},\"{}\",true,{},{}", join(ds.divisors()), p.a, p.hub),
            None => format!("{n},\"{}\",false,,", join(ds.divisors())),
        },
    ];
    let json = json!({
        "n": n,
        "divisors": ds.divisors(),
        "admissible": dec.is_some(),
        "decomposition": dec.as_ref().map(to_json),
    });
    Ok(Rendered::new(json, csv, text))
}

fn family_rows(rows: &[(u64, &[u64], u32)]) -> Rendered {
    let json = json!({
        "instances": rows.iter().map(|(n, d, p)| json!({ "n": n, "divisors": d, "predicted": p }))
            .collect::<Vec<_>>()
    });
    let mut csv = vec!["n,divisors,predicted".to_string()];
    csv.extend(rows.iter().map(|(n, d, p)| format!("{n},\"{}\",{p}", join(d))));
    let text = rows.iter().map(|(n, d, p)| format!("n={n} D={} predicted {p}", join(d))).collect();
    Rendered::new(json, csv, text)
}

fn cmd_family(kind: &FamilyKind) -> Result<Rendered, Failure> {
    match kind {
        FamilyKind::Saxena { primes } => {
            let fam = saxena_family(&primes.0)?;
            Ok(family_rows(&[(fam.n, fam.divisor_set.divisors(), fam.predicted)]))
        }
        FamilyKind::Small { n } => {
            let f = factorize(*n)?;
            let fam = small_family_lookup(&f);
            let rows: Vec<_> = fam.iter().map(|(ds, p)| (*n, ds.divisors(), *p)).collect();
            Ok(family_rows(&rows))
        }
    }
}

fn cmd_transitivity(cli: &Cli, n_max: u64) -> Result<Rendered, Failure> {
    let report = verify_transitivity(n_max, cli.oracle_bound)?;
    let text = vec![format!(
        "{} instances up to n = {}: {} failures",
        report.instances_checked,
        report.n_max,
        report.failures.len()
    )];
    let mut csv = vec!["n,divisors".to_string()];
    csv.extend(report.failures.iter().map(|ds| format!("{},\"{}\"", ds.n(), join(ds.divisors()))));
    let mismatch = !report.passed();
    Ok(Rendered { json: to_json(&report), csv, text, mismatch })
}

fn run(cli: &Cli) -> Result<Rendered, Failure> {
    match &cli.command {
        Command::Diameter { n, divisors } => cmd_diameter(*n, divisors),
        Command::Profile { n, divisors } => cmd_profile(*n, divisors),
        Command::Predict { n, t } => cmd_predict(*n, *t),
        Command::Verify { range, fail_fast } => cmd_verify(cli, *range, *fail_fast),
        Command::Enumerate { n, t, separated } => cmd_enumerate(cli, *n, *t, *separated),
        Command::Extremal { n, divisors } => {
            let f = factorize(*n)?;
            let ds = DivisorSet::new(*n, &divisors.0)?;
            cmd_extremal(&f, &ds)
        }
        Command::WorstVertex { n, divisors, variant } => cmd_worst_vertex(*n, divisors, *variant),
        Command::Pst { n, divisors } => cmd_pst(*n, divisors),
        Command::Family { kind } => cmd_family(kind),
        Command::Transitivity { n_max } => cmd_transitivity(cli, *n_max),
    }
}

fn emit(cli: &Cli, out: &Rendered) -> io::Result<()> {
    let sink: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = BufWriter::new(sink);
    match cli.format {
        Format::Json => {
            let mut v = out.json.clone();
            if let Value::Object(map) = &mut v {
                map.insert("schema_version".into(), SCHEMA_VERSION.into());
            }
            serde_json::to_writer_pretty(&mut w, &v)?;
            writeln!(w)?;
        }
        Format::Csv => out.csv.iter().try_for_each(|l| writeln!(w, "{l}"))?,
        Format::Text => out.text.iter().try_for_each(|l| writeln!(w, "{l}"))?,
    }
    w.flush()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli, &out) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if out.mismatch {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
