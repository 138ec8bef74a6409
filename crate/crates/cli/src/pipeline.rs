//! Place generation followed by an optional link strategy, shared by
//! `generate` and `experiment`.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use bigraphgen::io::{parse_signature, GenerationMeta};
use bigraphgen::linkgen::{mdc, mppl, positive_arity_nodes, MdcParams, Mixing, MpplParams};
use bigraphgen::placegen::{generate_place_graph, PlaceGenParams};
use bigraphgen::rng::link_seed;
use bigraphgen::{Bigraph, Control, LinkGraph, Signature};
use clap::ValueEnum;
use serde::Deserialize;
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkChoice {
    None,
    Mppl,
    Mdc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeChoice {
    Assortative,
    Disassortative,
}

impl From<ModeChoice> for Mixing {
    fn from(m: ModeChoice) -> Self {
        match m {
            ModeChoice::Assortative => Mixing::Assortative,
            ModeChoice::Disassortative => Mixing::Disassortative,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkSpec {
    pub choice: LinkChoice,
    pub p: f64,
    pub p_o: f64,
    pub p_e: f64,
    pub mode: ModeChoice,
}

impl Default for LinkSpec {
    fn default() -> Self {
        LinkSpec {
            choice: LinkChoice::None,
            p: 1.0,
            p_o: 1.0,
            p_e: 1.0,
            mode: ModeChoice::Assortative,
        }
    }
}

/// A signature together with a short description recorded in metadata.
#[derive(Debug, Clone)]
pub struct SignatureSource {
    pub signature: Arc<Signature>,
    pub description: String,
}

pub fn load_signature(path: &Path) -> Result<SignatureSource> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read signature file {}", path.display()))?;
    let sig = parse_signature(&text).with_context(|| format!("in {}", path.display()))?;
    Ok(SignatureSource {
        signature: Arc::new(sig),
        description: format!("file:{}", path.display()),
    })
}

/// Parses `a..b` (inclusive).
pub fn parse_arity_range(s: &str) -> Result<(usize, usize)> {
    let Some((lo, hi)) = s.split_once("..") else {
        bail!("arity range must look like a..b, got {s:?}");
    };
    let lo: usize = lo
        .trim()
        .parse()
        .with_context(|| format!("bad range start in {s:?}"))?;
    let hi: usize = hi
        .trim()
        .parse()
        .with_context(|| format!("bad range end in {s:?}"))?;
    if lo > hi {
        bail!("empty arity range {s:?}");
    }
    Ok((lo, hi))
}

/// `count` controls whose arities cycle through `lo..=hi`. Labels are
/// `A<arity>`, with a `.k` suffix on the k-th repeat of an arity.
pub fn uniform_arity_signature(lo: usize, hi: usize, count: usize) -> Result<SignatureSource> {
    if count == 0 {
        bail!("--count must be at least 1");
    }
    let span = hi - lo + 1;
    let controls = (0..count)
        .map(|i| {
            let arity = lo + i % span;
            let label = match i / span {
                0 => format!("A{arity}"),
                k => format!("A{arity}.{k}"),
            };
            Control::new(label, arity)
        })
        .collect();
    Ok(SignatureSource {
        signature: Arc::new(Signature::new(controls)?),
        description: format!("uniform-arity:{lo}..{hi}x{count}"),
    })
}

pub fn positive_fraction_signature(controls: usize, fraction: f64) -> Result<SignatureSource> {
    if controls == 0 {
        bail!("a signature needs at least one control");
    }
    if !(0.0..=1.0).contains(&fraction) {
        bail!("positive fraction {fraction} outside [0, 1]");
    }
    Ok(SignatureSource {
        signature: Arc::new(Signature::with_positive_fraction(controls, fraction)),
        description: format!("positive-fraction:{fraction}x{controls}"),
    })
}

pub struct Generated {
    pub bigraph: Bigraph,
    pub meta: GenerationMeta,
    pub warning: Option<String>,
}

/// Generates one bigraph. The place graph uses `seed`; the link strategy
/// uses `link_seed(seed)`.
pub fn generate(
    roots: usize,
    places: usize,
    sig: &SignatureSource,
    link: &LinkSpec,
    seed: u64,
) -> Result<Generated> {
    let place = generate_place_graph(&PlaceGenParams::new(
        roots,
        places,
        sig.signature.clone(),
        seed,
    ))?;
    let skeleton = LinkGraph::over(&place);
    let pool = positive_arity_nodes(&skeleton);
    let lseed = link_seed(seed);

    let mut meta = GenerationMeta {
        algorithm: "preferential-attachment".into(),
        seed: Some(seed),
        ..Default::default()
    };
    let params = &mut meta.parameters;
    params.insert("roots".into(), json!(roots));
    params.insert("places".into(), json!(places));
    params.insert("signature".into(), json!(sig.description));
    params.insert("controls".into(), json!(sig.signature.len()));

    let mut warning = None;
    let link_graph = match link.choice {
        LinkChoice::None => skeleton,
        LinkChoice::Mppl => {
            meta.algorithm.push_str("+mppl");
            params.insert("p".into(), json!(link.p));
            params.insert("p_o".into(), json!(link.p_o));
            params.insert("p_e".into(), json!(link.p_e));
            params.insert("link_seed".into(), json!(lseed));
            let mp = MpplParams {
                p: link.p,
                p_o: link.p_o,
                p_e: link.p_e,
                seed: lseed,
            };
            mppl(&skeleton, &pool, &mp)?
        }
        LinkChoice::Mdc => {
            let mode = Mixing::from(link.mode);
            meta.algorithm.push_str("+mdc");
            params.insert("mode".into(), json!(mode.to_string()));
            params.insert("link_seed".into(), json!(lseed));
            let out = mdc(&skeleton, &pool, &MdcParams { mode, seed: lseed })?;
            warning = out.diagnostic;
            out.graph
        }
    };
    Ok(Generated {
        bigraph: Bigraph::new(place, link_graph),
        meta,
        warning,
    })
}
