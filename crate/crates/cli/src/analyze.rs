use std::path::PathBuf;

use clap::Args;
use ivmap_core::{
    build_covering_graph, estimate_entropy, verify_mixing, verify_type, EdgeKind, EntropyEstimate, Error, MapDocument,
    Scalar, Verdict,
};
use serde_json::{json, Map, Value};

use crate::util::{branch_cap, read_to_string, write_atomic, Failure, EXIT_INCONCLUSIVE, EXIT_REFUTED};

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Map document to analyze.
    pub input: PathBuf,
    /// Estimate the entropy from the lap counts of f, ..., f^N.
    #[arg(long, value_name = "N")]
    pub entropy: Option<usize>,
    /// Largest accepted gap between the estimate and the claimed entropy.
    #[arg(long, default_value_t = 0.05)]
    pub entropy_tol: f64,
    /// Check the claimed type against all periods up to Q.
    #[arg(long = "type", value_name = "Q")]
    pub type_q: Option<u64>,
    /// Mixing check: seed width (fraction or decimal), grid size, iteration cap.
    #[arg(long, num_args = 3, value_names = ["WIDTH", "GRID", "N"])]
    pub mixing: Option<Vec<String>>,
    /// Write the covering graph of the I/J/K partition as DOT.
    #[arg(long, value_name = "PATH")]
    pub graph: Option<PathBuf>,
    /// Write the lap counts as CSV (needs --entropy).
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Branch budget (default: $IVMAP_BRANCH_CAP or 10^7).
    #[arg(long)]
    pub cap: Option<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub entropy: Option<usize>,
    pub entropy_tol: f64,
    pub type_q: Option<u64>,
    pub mixing: Option<(Scalar, usize, usize)>,
    /// Longest cycle counted when a graph is requested.
    pub graph_len: Option<usize>,
    pub cap: usize,
}

#[derive(Debug, Default)]
pub struct Analysis {
    pub report: Map<String, Value>,
    pub refutations: Vec<String>,
    pub inconclusive: Vec<String>,
    pub entropy: Option<EntropyEstimate>,
    pub type_verdict: Option<Verdict>,
    pub mixing_max_n: Option<usize>,
    pub dot: Option<String>,
}

impl Analysis {
    pub fn status(&self) -> &'static str {
        if !self.refutations.is_empty() {
            "refuted"
        } else if !self.inconclusive.is_empty() {
            "inconclusive"
        } else {
            "consistent"
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.status() {
            "refuted" => EXIT_REFUTED,
            "inconclusive" => EXIT_INCONCLUSIVE,
            _ => 0,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = self.report.clone();
        m.insert("status".into(), json!(self.status()));
        m.insert("refutations".into(), json!(self.refutations));
        m.insert("inconclusive".into(), json!(self.inconclusive));
        Value::Object(m)
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports are serializable")
}

pub fn parse_width(s: &str) -> Result<Scalar, Failure> {
    let w = match Scalar::parse_exact(s) {
        Ok(w) => w,
        Err(_) => s
            .trim()
            .parse::<f64>()
            .map_err(|_| Failure::usage(format!("not a seed width: {s:?}")))
            .and_then(|x| Ok(Scalar::float(x)?))?,
    };
    if w.signum() <= 0 {
        return Err(Failure::usage(format!("seed width must be positive, got {s}")));
    }
    Ok(w)
}

pub fn analyze(doc: &MapDocument, opts: &Options) -> Result<Analysis, Failure> {
    let f = doc.to_plmap()?;
    if opts.graph_len.is_some() && doc.partition().is_none() {
        return Err(Failure::usage(
            "the covering graph needs the I/J/K partition, which exists only for d = 0",
        ));
    }
    let mut out = Analysis::default();
    out.report.insert(
        "document".into(),
        json!({
            "p": doc.params.p,
            "d": doc.params.d,
            "lambda": doc.params.lambda,
            "mode": doc.params.mode,
            "type": doc.claims.type_n,
            "entropy": doc.claims.entropy,
        }),
    );

    if let Some(q_max) = opts.type_q {
        let r = verify_type(&f, doc.claimed_type(), q_max, doc.partition(), opts.cap)?;
        match r.verdict {
            Verdict::Refuted => out.refutations.push(format!("type: {}", r.refutation.clone().unwrap_or_default())),
            Verdict::Inconclusive => out.inconclusive.push(format!(
                "type: branch budget {} exhausted after q = {}",
                opts.cap, r.checked_through
            )),
            Verdict::Consistent => {}
        }
        out.type_verdict = Some(r.verdict);
        out.report.insert("type".into(), to_value(&r));
    }

    if let Some(n) = opts.entropy {
        let target = doc.claims.entropy_value;
        match estimate_entropy(&f, n, Some(target), opts.cap) {
            Ok(e) => {
                let gap = e.gap.unwrap_or(f64::INFINITY);
                let pass = gap < opts.entropy_tol;
                if !pass {
                    out.refutations.push(format!(
                        "entropy: estimate {:.6} is {gap:.6} from {} ~ {target:.6} (tolerance {})",
                        e.h, doc.claims.entropy, opts.entropy_tol
                    ));
                }
                let mut v = to_value(&e);
                v["tolerance"] = json!(opts.entropy_tol);
                v["pass"] = json!(pass);
                out.report.insert("entropy".into(), v);
                out.entropy = Some(e);
            }
            Err(e @ Error::BranchCapExceeded { .. }) => {
                out.inconclusive.push(format!("entropy: {e}"));
                out.report.insert("entropy".into(), json!({ "error": e.to_string() }));
            }
            Err(e) => return Err(e.into()),
        }
    }

    if let Some((width, grid, cap)) = &opts.mixing {
        let r = verify_mixing(&f, width, *grid, *cap)?;
        if !r.all_mixed {
            let stuck = r.seeds.iter().find(|s| s.first_n.is_none()).expect("some seed failed");
            out.refutations
                .push(format!("mixing: f^n({}) is not the whole domain for any n <= {cap}", stuck.seed));
        }
        out.mixing_max_n = r.max_n;
        out.report.insert("mixing".into(), to_value(&r));
    }

    if let Some(len) = opts.graph_len {
        let parts = doc.partition().expect("checked above");
        let g = build_covering_graph(&f, parts)?;
        let census = g.primitive_cycle_census(len);
        let edges: Vec<Value> = g
            .edges
            .iter()
            .map(|e| json!({ "from": g.vertices[e.from].label, "to": g.vertices[e.to].label, "kind": e.kind }))
            .collect();
        out.report.insert(
            "graph".into(),
            json!({
                "vertices": g.vertices,
                "edges": edges,
                "full": g.edges_of_kind(EdgeKind::Full).count(),
                "partial": g.edges_of_kind(EdgeKind::Partial).count(),
                "census": census,
            }),
        );
        out.dot = Some(g.to_dot());
    }
    Ok(out)
}

pub fn laps_csv(e: &EntropyEstimate) -> Result<Vec<u8>, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Failure::usage(format!("csv: {e}"));
    w.write_record(["n", "lap_count", "log_ratio"]).map_err(io)?;
    for (i, &l) in e.laps.iter().enumerate() {
        let ratio = if i == 0 { String::new() } else { e.log_ratios[i - 1].to_string() };
        w.write_record([(i + 1).to_string(), l.to_string(), ratio]).map_err(io)?;
    }
    w.into_inner().map_err(|e| Failure::usage(format!("csv: {e}")))
}

pub fn run(args: &AnalyzeArgs) -> Result<u8, Failure> {
    if args.entropy.is_none() && args.type_q.is_none() && args.mixing.is_none() && args.graph.is_none() {
        return Err(Failure::usage("nothing to do: pass --entropy, --type, --mixing and/or --graph"));
    }
    if args.csv.is_some() && args.entropy.is_none() {
        return Err(Failure::usage("--csv needs --entropy"));
    }
    let mixing = match &args.mixing {
        Some(v) => {
            let count = |s: &str, what: &str| {
                s.parse::<usize>()
                    .ok()
                    .filter(|&n| n > 0)
                    .ok_or_else(|| Failure::usage(format!("mixing {what} must be a positive integer, got {s:?}")))
            };
            Some((parse_width(&v[0])?, count(&v[1], "grid")?, count(&v[2], "cap")?))
        }
        None => None,
    };
    let doc = MapDocument::from_json(&read_to_string(&args.input)?)
        .map_err(|e| Failure::usage(format!("{}: {e}", args.input.display())))?;
    let opts = Options {
        entropy: args.entropy,
        entropy_tol: args.entropy_tol,
        type_q: args.type_q,
        mixing,
        graph_len: args.graph.as_ref().map(|_| args.type_q.unwrap_or(9).max(1) as usize),
        cap: branch_cap(args.cap)?,
    };
    let analysis = analyze(&doc, &opts)?;

    if let (Some(path), Some(dot)) = (&args.graph, &analysis.dot) {
        write_atomic(path, dot.as_bytes())?;
    }
    if let (Some(path), Some(e)) = (&args.csv, &analysis.entropy) {
        write_atomic(path, &laps_csv(e)?)?;
    }
    let text = serde_json::to_string_pretty(&analysis.to_json()).expect("report is serializable");
    println!("{text}");
    for r in &analysis.refutations {
        eprintln!("refuted: {r}");
    }
    for r in &analysis.inconclusive {
        eprintln!("inconclusive: {r}");
    }
    Ok(analysis.exit_code())
}
