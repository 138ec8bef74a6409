use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use bigraphgen::io::GenerationMeta;
use bigraphgen::io::{
    decode, fmt_float, write_assortativity_csv, write_histogram_csv,
    write_keyed_assortativity_summary_csv,
};
use bigraphgen::metrics::{
    degree_distribution, node_assortativity, positive_arity_count, Assortativity, MetricsError,
};
use bigraphgen::{validate, Bigraph, ValidationReport};
use clap::Args;

use crate::output::{create_dir, write_file};

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Bigraph document to analyze.
    pub file: PathBuf,
    /// Output directory (default: <file>.analysis next to the input).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Correlation coefficient r used to scale assortativity scores.
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Bigraph document to check.
    pub file: PathBuf,
}

pub fn read_document(path: &Path) -> Result<(Bigraph, GenerationMeta, ValidationReport)> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let (b, meta) = decode(&text).with_context(|| format!("in {}", path.display()))?;
    let report = validate(&b);
    Ok((b, meta, report))
}

pub fn validate_cmd(args: &ValidateArgs) -> Result<ExitCode> {
    let (_, _, report) = read_document(&args.file)?;
    print!("{report}");
    Ok(if report.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

/// Link-graph scores, or `None` when no node carries a link.
pub fn assortativity(b: &Bigraph, r: f64) -> Result<Option<Assortativity>> {
    match node_assortativity(&b.link, r) {
        Ok(a) => Ok(Some(a)),
        Err(MetricsError::NoLinkedNodes) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

pub fn run(args: &AnalyzeArgs) -> Result<ExitCode> {
    let (b, _, report) = read_document(&args.file)?;
    if !report.is_empty() {
        eprint!("{report}");
        anyhow::bail!(
            "{} is not a valid agent ({} violation(s))",
            args.file.display(),
            report.len()
        );
    }
    let dir = args.out.clone().unwrap_or_else(|| {
        let mut p = args.file.clone().into_os_string();
        p.push(".analysis");
        p.into()
    });
    create_dir(&dir)?;
    write_file(&dir.join("validation.txt"), &report.to_string())?;

    let hist = degree_distribution(&b.place);
    write_file(&dir.join("histogram.csv"), &write_histogram_csv(&hist))?;

    let summary = format!(
        "roots,nodes,edges,outer_names,average_degree,max_degree,positive_arity,saturation\n\
         {},{},{},{},{},{},{},{}\n",
        b.place.root_count(),
        b.place.node_count(),
        b.link.edge_count(),
        b.link.outer_names().len(),
        fmt_float(hist.average_degree()),
        hist.max_degree(),
        positive_arity_count(&b.place),
        fmt_float(b.link.saturation()),
    );
    write_file(&dir.join("summary.csv"), &summary)?;

    match assortativity(&b, args.r)? {
        Some(a) => {
            write_file(&dir.join("assortativity.csv"), &write_assortativity_csv(&a))?;
            let row = bigraphgen::io::assortativity_summary_fields(&a);
            write_file(
                &dir.join("assortativity_summary.csv"),
                &write_keyed_assortativity_summary_csv(&[], [(Vec::new(), row)]),
            )?;
        }
        None => eprintln!("note: no linked nodes, assortativity skipped"),
    }
    print!("{report}");
    print!("{summary}");
    println!("results written to {}", dir.display());
    Ok(ExitCode::SUCCESS)
}
