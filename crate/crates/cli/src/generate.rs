use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use bigraphgen::io::{export_dot, serialize};
use clap::Args;

use crate::output::write_file;
use crate::pipeline::{
    generate, load_signature, parse_arity_range, uniform_arity_signature, LinkChoice, LinkSpec,
    ModeChoice, SignatureSource,
};

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Number of roots t.
    #[arg(long, default_value_t = 1)]
    pub roots: usize,
    /// Number of places n (roots plus nodes).
    #[arg(long)]
    pub places: usize,
    /// Signature file with one `label arity` pair per line.
    #[arg(long, conflicts_with = "uniform_arity")]
    pub signature: Option<PathBuf>,
    /// Generate controls with arities cycling through a..b.
    #[arg(long, value_name = "A..B")]
    pub uniform_arity: Option<String>,
    /// Number of controls for --uniform-arity (default: one per arity).
    #[arg(long, requires = "uniform_arity")]
    pub count: Option<usize>,
    #[arg(long, value_enum, default_value_t = LinkChoice::None)]
    pub link: LinkChoice,
    /// Fraction of positive-arity nodes to link (mppl).
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// Weight of outer names (mppl).
    #[arg(long, default_value_t = 1.0)]
    pub po: f64,
    /// Weight of edges (mppl).
    #[arg(long, default_value_t = 1.0)]
    pub pe: f64,
    #[arg(long, value_enum, default_value_t = ModeChoice::Assortative)]
    pub mode: ModeChoice,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output document; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a Graphviz rendering.
    #[arg(long)]
    pub dot: Option<PathBuf>,
}

pub fn signature_from_flags(
    file: Option<&PathBuf>,
    uniform: Option<&str>,
    count: Option<usize>,
) -> Result<SignatureSource> {
    match (file, uniform) {
        (Some(path), _) => load_signature(path),
        (None, Some(range)) => {
            let (lo, hi) = parse_arity_range(range)?;
            uniform_arity_signature(lo, hi, count.unwrap_or(hi - lo + 1))
        }
        (None, None) => bail!("a signature is required: pass --signature or --uniform-arity"),
    }
}

pub fn run(args: &GenerateArgs) -> Result<ExitCode> {
    let sig = signature_from_flags(
        args.signature.as_ref(),
        args.uniform_arity.as_deref(),
        args.count,
    )?;
    let spec = LinkSpec {
        choice: args.link,
        p: args.p,
        p_o: args.po,
        p_e: args.pe,
        mode: args.mode,
    };
    let out = generate(args.roots, args.places, &sig, &spec, args.seed)?;
    if let Some(w) = &out.warning {
        eprintln!("warning: {w}");
    }
    let text = serialize(&out.bigraph, &out.meta);
    match &args.out {
        Some(path) => write_file(path, &text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    if let Some(path) = &args.dot {
        write_file(path, &export_dot(&out.bigraph))?;
    }
    Ok(ExitCode::SUCCESS)
}
