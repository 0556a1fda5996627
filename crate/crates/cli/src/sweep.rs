use std::path::PathBuf;

use clap::Args;
use ivmap_core::{MapDocument, Verdict};
use rayon::prelude::*;
use serde_json::json;

use crate::analyze::{analyze, parse_width, Options};
use crate::construct::{build_document, build_for_entropy, Mode};
use crate::util::{branch_cap, split_list, write_atomic, Failure, EXIT_INCONCLUSIVE, EXIT_REFUTED, EXIT_USAGE};

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Comma-separated odd periods.
    #[arg(long, default_value = "")]
    pub p: String,
    /// Comma-separated numbers of square roots.
    #[arg(long, default_value = "0")]
    pub d: String,
    /// Comma-separated slopes (see `construct --lambda`).
    #[arg(long, default_value = "")]
    pub lambda: String,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    /// Comma-separated target entropies; each adds a p = 3 cell with the
    /// least d and lambda = exp(2^d h).
    #[arg(long, default_value = "")]
    pub target_h: String,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Lap depth for the entropy estimate.
    #[arg(long, default_value_t = 14)]
    pub entropy: usize,
    #[arg(long, default_value_t = 0.05)]
    pub entropy_tol: f64,
    /// Largest period checked against the claimed type.
    #[arg(long = "type", default_value_t = 11)]
    pub type_q: u64,
    /// Mixing seed width; mixing is checked for d = 0 cells only.
    #[arg(long, default_value = "1/1024")]
    pub mixing_width: String,
    #[arg(long, default_value_t = 16)]
    pub mixing_grid: usize,
    #[arg(long, default_value_t = 200)]
    pub mixing_cap: usize,
    /// Branch budget (default: $IVMAP_BRANCH_CAP or 10^7).
    #[arg(long)]
    pub cap: Option<usize>,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Worker threads; 1 runs the cells sequentially.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Clone, Debug)]
enum Cell {
    Grid { p: u64, d: u32, lambda: String },
    Target { h: f64 },
}

#[derive(Debug)]
struct Row {
    p: String,
    d: String,
    lambda: String,
    h_target: String,
    h_estimate: String,
    type_verdict: String,
    mixing_max_n: String,
    /// Worst exit code of the cell.
    code: u8,
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Failure> {
    split_list(s)
        .map(|x| x.parse().map_err(|_| Failure::usage(format!("bad {what} {x:?}"))))
        .collect()
}

fn cells(args: &SweepArgs) -> Result<Vec<Cell>, Failure> {
    let ps: Vec<u64> = parse_list(&args.p, "p")?;
    let ds: Vec<u32> = parse_list(&args.d, "d")?;
    let lambdas: Vec<&str> = split_list(&args.lambda).collect();
    let hs: Vec<f64> = parse_list(&args.target_h, "target entropy")?;
    let mut out = Vec::new();
    for &p in &ps {
        for &d in &ds {
            for l in &lambdas {
                out.push(Cell::Grid { p, d, lambda: l.to_string() });
            }
        }
    }
    out.extend(hs.into_iter().map(|h| Cell::Target { h }));
    if out.is_empty() {
        return Err(Failure::usage("empty sweep: give --p, --d and --lambda lists, or --target-h"));
    }
    Ok(out)
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Consistent => "consistent",
        Verdict::Refuted => "refuted",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn run_cell(index: usize, cell: &Cell, args: &SweepArgs, base: &Options) -> Row {
    let built: Result<MapDocument, Failure> = match cell {
        Cell::Grid { p, d, lambda } => build_document(*p, *d, lambda, args.mode, args.tol, true),
        Cell::Target { h } => build_for_entropy(*h, args.tol),
    };
    let (p, d, lambda) = match cell {
        Cell::Grid { p, d, lambda } => (p.to_string(), d.to_string(), lambda.clone()),
        Cell::Target { .. } => ("3".to_string(), String::new(), String::new()),
    };
    let h_target = match cell {
        Cell::Target { h } => h.to_string(),
        Cell::Grid { .. } => String::new(),
    };
    let mut row = Row {
        p,
        d,
        lambda,
        h_target,
        h_estimate: String::new(),
        type_verdict: String::new(),
        mixing_max_n: String::new(),
        code: 0,
    };
    let stem = format!("cell-{index:03}");
    let doc = match built {
        Ok(doc) => doc,
        Err(e) => {
            row.type_verdict = "error".into();
            row.code = e.code;
            let report = json!({ "status": "error", "error": e.message });
            let _ = write_atomic(&args.out_dir.join(format!("{stem}.report.json")), report.to_string().as_bytes());
            eprintln!("{stem}: {}", e.message);
            return row;
        }
    };
    row.d = doc.params.d.to_string();
    if matches!(cell, Cell::Target { .. }) || row.lambda.eq_ignore_ascii_case("lambda_p") {
        row.lambda = doc.params.lambda.to_string();
    }
    if row.h_target.is_empty() {
        row.h_target = doc.claims.entropy_value.to_string();
    }
    let mut opts = base.clone();
    if doc.params.d > 0 {
        // square roots swap two blocks and are never mixing
        opts.mixing = None;
    }
    let written = write_atomic(&args.out_dir.join(format!("{stem}.json")), doc.to_json().as_bytes());
    let analysis = match written.and_then(|_| analyze(&doc, &opts)) {
        Ok(a) => a,
        Err(e) => {
            row.type_verdict = "error".into();
            row.code = e.code;
            eprintln!("{stem}: {}", e.message);
            return row;
        }
    };
    if let Some(e) = &analysis.entropy {
        row.h_estimate = e.h.to_string();
    }
    row.type_verdict = analysis.type_verdict.map(verdict_name).unwrap_or("").into();
    if let Some(n) = analysis.mixing_max_n {
        row.mixing_max_n = n.to_string();
    } else if opts.mixing.is_some() {
        row.mixing_max_n = "failed".into();
    }
    row.code = analysis.exit_code();
    let report = serde_json::to_string_pretty(&analysis.to_json()).expect("report is serializable") + "\n";
    if let Err(e) = write_atomic(&args.out_dir.join(format!("{stem}.report.json")), report.as_bytes()) {
        row.code = e.code;
        eprintln!("{stem}: {}", e.message);
    }
    row
}

pub fn run(args: &SweepArgs) -> Result<u8, Failure> {
    let cells = cells(args)?;
    if args.workers == 0 {
        return Err(Failure::usage("--workers must be at least 1"));
    }
    let opts = Options {
        entropy: Some(args.entropy),
        entropy_tol: args.entropy_tol,
        type_q: Some(args.type_q),
        mixing: Some((parse_width(&args.mixing_width)?, args.mixing_grid, args.mixing_cap)),
        graph_len: None,
        cap: branch_cap(args.cap)?,
    };
    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| Failure::usage(format!("creating {}: {e}", args.out_dir.display())))?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.workers)
        .build()
        .map_err(|e| Failure::usage(format!("thread pool: {e}")))?;
    // collect() keeps the cell order whatever the schedule
    let rows: Vec<Row> = pool.install(|| {
        cells
            .par_iter()
            .enumerate()
            .map(|(i, c)| run_cell(i, c, args, &opts))
            .collect()
    });

    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Failure::usage(format!("csv: {e}"));
    w.write_record(["p", "d", "lambda", "h_target", "h_estimate", "type_verdict", "mixing_max_n"])
        .map_err(io)?;
    for r in &rows {
        w.write_record([&r.p, &r.d, &r.lambda, &r.h_target, &r.h_estimate, &r.type_verdict, &r.mixing_max_n])
            .map_err(io)?;
    }
    let table = w.into_inner().map_err(|e| Failure::usage(format!("csv: {e}")))?;
    let summary = args.out_dir.join("summary.csv");
    write_atomic(&summary, &table)?;
    print!("{}", String::from_utf8_lossy(&table));

    // usage/IO errors outrank refutations, which outrank budget exhaustion
    let codes: Vec<u8> = rows.iter().map(|r| r.code).collect();
    Ok([EXIT_USAGE, EXIT_REFUTED, EXIT_INCONCLUSIVE]
        .into_iter()
        .find(|c| codes.contains(c))
        .unwrap_or(0))
}
