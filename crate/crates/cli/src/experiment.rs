//! Batch campaigns over a (signature, t, n) grid with r replications each.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use bigraphgen::io::{
    assortativity_summary_fields, write_assortativity_csv, write_keyed_assortativity_summary_csv,
    write_keyed_fits_csv, write_keyed_moments_csv, write_mean_histogram_csv,
};
use bigraphgen::metrics::{
    degree_distribution, fit_all, mean_fractions, positive_arity_count, sample_moments,
    Assortativity, DegreeHistogram,
};
use bigraphgen::rng::derive_seed;
use clap::Args;
use rayon::prelude::*;
use serde::Deserialize;

use crate::analyze::assortativity;
use crate::generate::signature_from_flags;
use crate::output::{create_dir, write_file};
use crate::pipeline::{
    generate, positive_fraction_signature, LinkChoice, LinkSpec, ModeChoice, SignatureSource,
};

const DEFAULT_CONTROLS: usize = 26;
const DEFAULT_REPLICATIONS: usize = 1000;

/// Plan file contents. Every field can also be given as a flag; flags win.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Plan {
    pub roots: Option<Vec<usize>>,
    pub places: Option<Vec<usize>>,
    pub positive_fractions: Option<Vec<f64>>,
    pub controls: Option<usize>,
    pub signature: Option<PathBuf>,
    pub uniform_arity: Option<String>,
    pub count: Option<usize>,
    pub link: Option<LinkChoice>,
    pub p: Option<f64>,
    pub po: Option<f64>,
    pub pe: Option<f64>,
    pub mode: Option<ModeChoice>,
    pub coefficient: Option<f64>,
    pub replications: Option<usize>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// TOML plan file.
    #[arg(long)]
    pub plan: Option<PathBuf>,
    /// Comma-separated root counts.
    #[arg(long, value_delimiter = ',')]
    pub roots: Option<Vec<usize>>,
    /// Comma-separated place counts.
    #[arg(long, value_delimiter = ',')]
    pub places: Option<Vec<usize>>,
    /// Comma-separated fractions of positive-arity controls; each one is a
    /// grid axis value.
    #[arg(long, value_delimiter = ',')]
    pub positive_fractions: Option<Vec<f64>>,
    /// Signature size for --positive-fractions.
    #[arg(long)]
    pub controls: Option<usize>,
    #[arg(long)]
    pub signature: Option<PathBuf>,
    #[arg(long, value_name = "A..B")]
    pub uniform_arity: Option<String>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, value_enum)]
    pub link: Option<LinkChoice>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub po: Option<f64>,
    #[arg(long)]
    pub pe: Option<f64>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeChoice>,
    /// Correlation coefficient r used to scale assortativity scores.
    #[arg(long)]
    pub coefficient: Option<f64>,
    /// Runs per combination.
    #[arg(long, short = 'r')]
    pub replications: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct Combination {
    index: usize,
    roots: usize,
    places: usize,
    fraction: Option<f64>,
    signature: SignatureSource,
}

impl Combination {
    fn key(&self) -> String {
        match self.fraction {
            Some(p) => format!("p{p}_t{}_n{}", self.roots, self.places),
            None => format!("t{}_n{}", self.roots, self.places),
        }
    }

    fn key_fields(&self) -> Vec<String> {
        vec![
            self.index.to_string(),
            self.fraction.map(|p| p.to_string()).unwrap_or_default(),
            self.roots.to_string(),
            self.places.to_string(),
        ]
    }
}

const KEY_COLUMNS: [&str; 4] = ["combination", "positive_fraction", "roots", "places"];

struct RunResult {
    seed: u64,
    positive: u64,
    histogram: DegreeHistogram,
    assortativity: Option<Assortativity>,
    warning: Option<String>,
}

fn read_plan(path: &Path) -> Result<Plan> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read plan {}", path.display()))?;
    let mut plan: Plan =
        toml::from_str(&text).with_context(|| format!("invalid plan {}", path.display()))?;
    // Relative paths in a plan are relative to the plan file.
    let base = path.parent().unwrap_or(Path::new(""));
    if let Some(sig) = &plan.signature {
        plan.signature = Some(base.join(sig));
    }
    if let Some(out) = &plan.output {
        plan.output = Some(base.join(out));
    }
    Ok(plan)
}

fn merge(args: &ExperimentArgs, plan: Plan) -> Plan {
    Plan {
        roots: args.roots.clone().or(plan.roots),
        places: args.places.clone().or(plan.places),
        positive_fractions: args.positive_fractions.clone().or(plan.positive_fractions),
        controls: args.controls.or(plan.controls),
        signature: args.signature.clone().or(plan.signature),
        uniform_arity: args.uniform_arity.clone().or(plan.uniform_arity),
        count: args.count.or(plan.count),
        link: args.link.or(plan.link),
        p: args.p.or(plan.p),
        po: args.po.or(plan.po),
        pe: args.pe.or(plan.pe),
        mode: args.mode.or(plan.mode),
        coefficient: args.coefficient.or(plan.coefficient),
        replications: args.replications.or(plan.replications),
        seed: args.seed.or(plan.seed),
        output: args.out.clone().or(plan.output),
    }
}

fn combinations(plan: &Plan) -> Result<Vec<Combination>> {
    let roots = plan.roots.clone().unwrap_or_else(|| vec![1]);
    let Some(places) = plan.places.clone() else {
        bail!("the plan needs a places list");
    };
    if roots.is_empty() || places.is_empty() {
        bail!("roots and places lists must be non-empty");
    }
    let signatures: Vec<(Option<f64>, SignatureSource)> = match &plan.positive_fractions {
        Some(fractions) => {
            if fractions.is_empty() {
                bail!("positive_fractions must be non-empty");
            }
            if plan.signature.is_some() || plan.uniform_arity.is_some() {
                bail!("positive_fractions cannot be combined with another signature source");
            }
            let controls = plan.controls.unwrap_or(DEFAULT_CONTROLS);
            fractions
                .iter()
                .map(|f| Ok((Some(*f), positive_fraction_signature(controls, *f)?)))
                .collect::<Result<_>>()?
        }
        None => vec![(
            None,
            signature_from_flags(
                plan.signature.as_ref(),
                plan.uniform_arity.as_deref(),
                plan.count,
            )?,
        )],
    };

    let mut out = Vec::new();
    let mut index = 0;
    for (fraction, sig) in &signatures {
        for t in &roots {
            for n in &places {
                // Skipped cells keep their index so seeds do not shift.
                if n < t {
                    eprintln!("warning: skipping t={t}, n={n}: n < t");
                } else {
                    out.push(Combination {
                        index,
                        roots: *t,
                        places: *n,
                        fraction: *fraction,
                        signature: sig.clone(),
                    });
                }
                index += 1;
            }
        }
    }
    if out.is_empty() {
        bail!("no valid (t, n) combination in the plan");
    }
    Ok(out)
}

pub fn run(args: &ExperimentArgs) -> Result<ExitCode> {
    let plan = match &args.plan {
        Some(path) => merge(args, read_plan(path)?),
        None => merge(args, Plan::default()),
    };
    let combos = combinations(&plan)?;
    let replications = plan.replications.unwrap_or(DEFAULT_REPLICATIONS);
    if replications == 0 {
        bail!("replications must be at least 1");
    }
    let base_seed = plan.seed.unwrap_or(0);
    let coefficient = plan.coefficient.unwrap_or(1.0);
    let link = LinkSpec {
        choice: plan.link.unwrap_or(LinkChoice::None),
        p: plan.p.unwrap_or(1.0),
        p_o: plan.po.unwrap_or(1.0),
        p_e: plan.pe.unwrap_or(1.0),
        mode: plan.mode.unwrap_or(ModeChoice::Assortative),
    };
    let Some(dir) = plan.output.clone() else {
        bail!("an output directory is required (--out or `output` in the plan)");
    };

    let jobs: Vec<(usize, usize)> = (0..combos.len())
        .flat_map(|c| (0..replications).map(move |run| (c, run)))
        .collect();
    let results: Vec<RunResult> = jobs
        .par_iter()
        .map(|&(c, run)| {
            let combo = &combos[c];
            let seed = derive_seed(base_seed, combo.index as u64, run as u64);
            let out = generate(combo.roots, combo.places, &combo.signature, &link, seed)
                .with_context(|| format!("combination {}, run {run}", combo.key()))?;
            let assort = match link.choice {
                LinkChoice::None => None,
                _ => assortativity(&out.bigraph, coefficient)?,
            };
            Ok(RunResult {
                seed,
                positive: positive_arity_count(&out.bigraph.place) as u64,
                histogram: degree_distribution(&out.bigraph.place),
                assortativity: assort,
                warning: out.warning,
            })
        })
        .collect::<Result<_>>()?;

    create_dir(&dir)?;
    let mut runs_csv = String::from(
        "combination,positive_fraction,roots,places,run,seed,positive_arity,average_degree\n",
    );
    let mut moment_rows = Vec::new();
    let mut fit_rows = Vec::new();
    let mut summary_rows = Vec::new();

    for (combo, chunk) in combos.iter().zip(results.chunks(replications)) {
        let key = combo.key();
        let fields = combo.key_fields();
        let warned = chunk.iter().filter(|r| r.warning.is_some()).count();
        if warned > 0 {
            eprintln!("warning: {key}: {warned} run(s) had fewer than 4 linkable nodes");
        }

        let histograms: Vec<DegreeHistogram> = chunk.iter().map(|r| r.histogram.clone()).collect();
        write_file(
            &dir.join(format!("histogram_{key}.csv")),
            &write_mean_histogram_csv(&mean_fractions(&histograms)),
        )?;

        for (run, r) in chunk.iter().enumerate() {
            runs_csv.push_str(&format!(
                "{},{run},{},{},{}\n",
                fields.join(","),
                r.seed,
                r.positive,
                bigraphgen::io::fmt_float(r.histogram.average_degree()),
            ));
        }

        let samples: Vec<u64> = chunk.iter().map(|r| r.positive).collect();
        let as_f64: Vec<f64> = samples.iter().map(|s| *s as f64).collect();
        match sample_moments(&as_f64) {
            Ok(m) => moment_rows.push((fields.clone(), m)),
            Err(e) => eprintln!("warning: {key}: moments skipped: {e}"),
        }
        let trials = (combo.places - combo.roots) as u64;
        match fit_all(&samples, trials) {
            Ok(fits) => fit_rows.extend(fits.into_iter().map(|f| (fields.clone(), f))),
            Err(e) => eprintln!("warning: {key}: fits skipped: {e}"),
        }

        if link.choice != LinkChoice::None {
            if let Some(a) = &chunk[0].assortativity {
                write_file(
                    &dir.join(format!("assortativity_{key}.csv")),
                    &write_assortativity_csv(a),
                )?;
            }
            for (run, r) in chunk.iter().enumerate() {
                if let Some(a) = &r.assortativity {
                    let mut k = fields.clone();
                    k.push(run.to_string());
                    summary_rows.push((k, assortativity_summary_fields(a)));
                }
            }
        }
    }

    write_file(&dir.join("runs.csv"), &runs_csv)?;
    write_file(
        &dir.join("moments.csv"),
        &write_keyed_moments_csv(&KEY_COLUMNS, moment_rows),
    )?;
    write_file(
        &dir.join("fits.csv"),
        &write_keyed_fits_csv(&KEY_COLUMNS, fit_rows),
    )?;
    if link.choice != LinkChoice::None {
        let mut keys = KEY_COLUMNS.to_vec();
        keys.push("run");
        write_file(
            &dir.join("assortativity_summary.csv"),
            &write_keyed_assortativity_summary_csv(&keys, summary_rows),
        )?;
    }
    println!(
        "{} combination(s) x {replications} run(s) written to {}",
        combos.len(),
        dir.display()
    );
    Ok(ExitCode::SUCCESS)
}
