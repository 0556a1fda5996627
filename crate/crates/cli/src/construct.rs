use std::path::PathBuf;

use clap::{Args, ValueEnum};
use ivmap_core::{build_typed, ConstructionParams, LambdaSpec, MapDocument};

use crate::util::{now_unix, write_atomic, Failure};

pub const TOOL: &str = concat!("ivmap ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Rational arithmetic; lambda must be an integer or a fraction.
    Exact,
    /// Binary64 arithmetic; decimals allowed.
    Float,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    /// Odd period p >= 3.
    #[arg(long)]
    pub p: u64,
    /// Number of square roots; the type is 2^d p.
    #[arg(long, default_value_t = 0)]
    pub d: u32,
    /// Slope: an integer, a fraction such as 7/4, "lambda_p", or a decimal
    /// (float mode only).
    #[arg(long)]
    pub lambda: String,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    /// Tolerance for the lambda = lambda_p comparisons.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Keep each square root on [0, 3b] instead of rescaling onto [0, 1].
    #[arg(long)]
    pub raw: bool,
    /// Output path; the document goes to standard output when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

pub fn build_document(
    p: u64,
    d: u32,
    lambda: &str,
    mode: Mode,
    tol: f64,
    rescale: bool,
) -> Result<MapDocument, Failure> {
    let spec = LambdaSpec::parse(lambda, mode == Mode::Float)?;
    let params = ConstructionParams::from_spec(p, d, &spec, tol)?.with_rescale(rescale);
    let typed = build_typed(&params)?;
    Ok(MapDocument::from_typed(&typed, lambda, TOOL, now_unix()))
}

/// Parameters for a target entropy `h`, as a document.
pub fn build_for_entropy(h: f64, tol: f64) -> Result<MapDocument, Failure> {
    let params = ConstructionParams::for_entropy(h, tol)?;
    let typed = build_typed(&params)?;
    Ok(MapDocument::from_typed(&typed, &format!("exp(2^{} * {h})", params.d), TOOL, now_unix()))
}

pub fn summary(doc: &MapDocument) -> String {
    format!(
        "type {}, entropy {} ~ {:.6}, {} breakpoints",
        doc.claims.type_n,
        doc.claims.entropy,
        doc.claims.entropy_value,
        doc.map.breakpoints.len()
    )
}

pub fn run(args: &ConstructArgs) -> Result<(), Failure> {
    let doc = build_document(args.p, args.d, &args.lambda, args.mode, args.tol, !args.raw)?;
    let text = doc.to_json();
    match &args.out {
        Some(path) => {
            write_atomic(path, text.as_bytes())?;
            println!("{} -> {}", summary(&doc), path.display());
        }
        None => {
            print!("{text}");
            eprintln!("{}", summary(&doc));
        }
    }
    Ok(())
}
