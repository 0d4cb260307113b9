//! Command-line surface: `construct`, `verify`, `search`, `pipeline`, and
//! the `tools` grab bag, all thin wrappers over the library.
//!
//! Exit codes: 0 verdict reached, 1 input error, 2 search budget exhausted,
//! 3 a verified claim was refuted.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::constructions::{
    construct_a2_lower, construct_a3_lower, construct_layered_lower, ramsey_bounds,
    verify_no_blue_antichain, verify_no_red_cube, AntichainCheck, RedCubeCheck,
};
use crate::embeddings::find_red_cube;
use crate::error::{Error, Result};
use crate::lattice::{layer, LatticeColoring, VertexSet};
use crate::search::{ramsey_exact, theorem2_pipeline, PipelineOptions, RamseyWitness, SearchOptions, WitnessKind};
use crate::chains;
use crate::sequences::{consistent_triple, LinearOrdering};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_REFUTED: i32 = 3;

#[derive(Parser)]
#[command(
    name = "poset-ramsey",
    version,
    about = "Colorings, chain covers, cube extraction, and exact search for R(A_t, Q_n)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Output format for stdout reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for randomized utilities. The shipped subcommands are all
    /// deterministic; the flag pins reproducibility for extensions.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Worker threads for the search.
    #[arg(long, global = true, env = "POSET_RAMSEY_THREADS", default_value_t = 1)]
    threads: usize,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Build one of the lower-bound colorings and write it as a coloring file.
    Construct {
        #[arg(value_enum)]
        kind: ConstructKind,
        /// Cube dimension parameter n of the claim "no red Q_n".
        #[arg(long)]
        n: u32,
        /// Layer radius (layered construction only).
        #[arg(long)]
        r: Option<u32>,
        /// Output path for the coloring JSON; stdout report always includes it.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Check coloring claims: --t "no blue antichain of size t" and/or
    /// --n "no red copy of Q_n". Exit 3 if any requested claim is refuted.
    Verify {
        file: PathBuf,
        #[arg(long)]
        t: Option<u32>,
        #[arg(long)]
        n: Option<u8>,
    },
    /// Exact search for R(A_t, Q_n) over dimensions up to --nmax.
    Search {
        #[arg(long)]
        t: u32,
        #[arg(long)]
        n: u8,
        #[arg(long)]
        nmax: u8,
        /// Node budget for the pruned DFS.
        #[arg(long, default_value_t = 1_000_000_000)]
        budget: u64,
        /// Disable orbit symmetry reduction.
        #[arg(long)]
        no_symmetry: bool,
        /// Write the deciding witness as JSON.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Extract a verified red cube from an antichain-free coloring of
    /// Q_{n+3}, tracing every stage.
    Pipeline {
        file: PathBuf,
        #[arg(long)]
        t: u32,
        /// Run even below the dimension that guarantees triple extraction.
        #[arg(long)]
        allow_undersized: bool,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Stand-alone utilities.
    Tools {
        #[command(subcommand)]
        tool: Tool,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ConstructKind {
    /// Q_{n+1} with only the empty and full sets blue.
    A2,
    /// Q_{n+2} with all prefixes and suffixes of the index order blue.
    A3,
    /// Q_{n+2r+1} with the r outermost layers on both ends blue.
    Layered,
}

#[derive(Subcommand)]
enum Tool {
    /// Symmetric chain decomposition of Q_N.
    Scd {
        #[arg(long)]
        n: u8,
    },
    /// Minimum chain cover and maximum antichain of a vertex family
    /// (JSON array of masks).
    Dilworth { file: PathBuf },
    /// Consistent triple across a family of orderings (JSON array of
    /// arrays of elements).
    Triple { file: PathBuf },
    /// Closed-form bounds for R(A_t, Q_n).
    Bounds {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t: u64,
    },
    /// Search a coloring for a red copy of Q_n by the canonical-form search.
    Redcube {
        file: PathBuf,
        #[arg(long)]
        n: u8,
    },
}

/// Entry point used by the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExhausted { .. } => EXIT_BUDGET,
                _ => EXIT_INPUT,
            }
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Construct { kind, n, r, out } => {
            cmd_construct(&cli.common, *kind, *n, *r, out.as_deref())
        }
        Command::Verify { file, t, n } => cmd_verify(&cli.common, file, *t, *n),
        Command::Search {
            t,
            n,
            nmax,
            budget,
            no_symmetry,
            out,
        } => cmd_search(&cli.common, *t, *n, *nmax, *budget, *no_symmetry, out.as_deref()),
        Command::Pipeline {
            file,
            t,
            allow_undersized,
            out,
        } => cmd_pipeline(&cli.common, file, *t, *allow_undersized, out.as_deref()),
        Command::Tools { tool } => cmd_tools(&cli.common, tool),
    }
}

fn read_coloring(path: &Path) -> Result<LatticeColoring> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn print_doc(common: &Common, doc: &serde_json::Value, text: impl FnOnce()) {
    match common.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(doc).unwrap()),
        Format::Text => text(),
    }
}

/// Layered diagram with B/R marks, for small lattices.
fn render_lattice(c: &LatticeColoring) -> String {
    let mut out = String::new();
    for i in (0..=c.dim()).rev() {
        let row: Vec<String> = layer(c.dim(), i)
            .expect("layer index in range")
            .iter()
            .map(|v| format!("{v}:{}", if c.is_blue(*v) { "B" } else { "R" }))
            .collect();
        out.push_str(&format!("size {i}:  {}\n", row.join("  ")));
    }
    out
}

fn cmd_construct(
    common: &Common,
    kind: ConstructKind,
    n: u32,
    r: Option<u32>,
    out: Option<&Path>,
) -> Result<i32> {
    let (coloring, claims) = match kind {
        ConstructKind::A2 => (
            construct_a2_lower(n)?,
            vec![
                "no blue antichain of size 2 (blue set is a single chain)".to_string(),
                format!("no red copy of Q_{n} (red height {n} < {})", n + 1),
            ],
        ),
        ConstructKind::A3 => (
            construct_a3_lower(n)?,
            vec![
                "no blue antichain of size 3 (blue set is two chains)".to_string(),
                format!("no red copy of Q_{n} (certified by exhaustive search)"),
            ],
        ),
        ConstructKind::Layered => {
            let r = r.ok_or_else(|| {
                Error::InvalidParameter("layered construction requires --r".into())
            })?;
            let dim = n + 2 * r + 1;
            (
                construct_layered_lower(n, r)?,
                vec![
                    format!(
                        "no blue antichain of size C({dim},{r})+1 (blue covered by the \
                         symmetric chains through layer {r})"
                    ),
                    format!("no red copy of Q_{n} (red height {n} < {})", n + 1),
                ],
            )
        }
    };
    if let Some(path) = out {
        write_json(path, &coloring)?;
    }
    let doc = json!({
        "coloring": coloring,
        "claims": claims,
        "written": out.map(|p| p.display().to_string()),
    });
    print_doc(common, &doc, || {
        println!(
            "constructed coloring of Q_{} ({} blue vertices)",
            coloring.dim(),
            coloring.count_of(crate::lattice::Color::Blue)
        );
        for claim in &claims {
            println!("claim: {claim}");
        }
        if coloring.dim() <= 5 {
            print!("{}", render_lattice(&coloring));
        }
        if let Some(path) = out {
            println!("written to {}", path.display());
        } else {
            println!("coloring JSON: {}", serde_json::to_string(&coloring).unwrap());
        }
    });
    Ok(EXIT_OK)
}

fn cmd_verify(common: &Common, file: &Path, t: Option<u32>, n: Option<u8>) -> Result<i32> {
    if t.is_none() && n.is_none() {
        return Err(Error::InvalidParameter(
            "verify needs at least one of --t or --n".into(),
        ));
    }
    let coloring = read_coloring(file)?;
    let mut checks = Vec::new();
    let mut texts = Vec::new();
    let mut all_certified = true;

    if let Some(t) = t {
        match verify_no_blue_antichain(&coloring, t)? {
            AntichainCheck::Certified { cover } => {
                texts.push(format!(
                    "no blue antichain of size {t}: CERTIFIED (blue covered by {} chains)",
                    cover.len()
                ));
                checks.push(json!({
                    "claim": "no-blue-antichain", "t": t,
                    "result": "certified", "cover_chains": cover.len(),
                    "cover": cover,
                }));
            }
            AntichainCheck::Refuted { antichain } => {
                all_certified = false;
                texts.push(format!(
                    "no blue antichain of size {t}: REFUTED by {:?}",
                    antichain.vertices()
                ));
                checks.push(json!({
                    "claim": "no-blue-antichain", "t": t,
                    "result": "refuted", "antichain": antichain,
                }));
            }
        }
    }
    if let Some(n) = n {
        match verify_no_red_cube(&coloring, n)? {
            RedCubeCheck::CertifiedByHeight { red_height } => {
                texts.push(format!(
                    "no red copy of Q_{n}: CERTIFIED (red height {red_height} < {})",
                    n as u32 + 1
                ));
                checks.push(json!({
                    "claim": "no-red-cube", "n": n,
                    "result": "certified", "certificate": "height", "red_height": red_height,
                }));
            }
            RedCubeCheck::CertifiedExhaustive => {
                texts.push(format!(
                    "no red copy of Q_{n}: CERTIFIED (exhaustive canonical search)"
                ));
                checks.push(json!({
                    "claim": "no-red-cube", "n": n,
                    "result": "certified", "certificate": "exhaustive",
                }));
            }
            RedCubeCheck::Refuted { embedding } => {
                all_certified = false;
                texts.push(format!(
                    "no red copy of Q_{n}: REFUTED (red copy over ground {})",
                    embedding.ground()
                ));
                checks.push(json!({
                    "claim": "no-red-cube", "n": n,
                    "result": "refuted", "embedding": embedding,
                }));
            }
        }
    }

    let doc = json!({
        "file": file.display().to_string(),
        "n_dim": coloring.dim(),
        "checks": checks,
        "all_certified": all_certified,
    });
    print_doc(common, &doc, || {
        for line in &texts {
            println!("{line}");
        }
    });
    Ok(if all_certified { EXIT_OK } else { EXIT_REFUTED })
}

fn cmd_search(
    common: &Common,
    t: u32,
    n: u8,
    nmax: u8,
    budget: u64,
    no_symmetry: bool,
    out: Option<&Path>,
) -> Result<i32> {
    let opts = SearchOptions {
        node_budget: budget,
        threads: common.threads,
        symmetry_reduction: !no_symmetry,
    };
    let report = ramsey_exact(t, n, nmax, &opts)?;

    let witness = if let Some(value) = report.exact {
        RamseyWitness {
            kind: WitnessKind::Exhaustiveness,
            coloring: None,
            t,
            n,
            dim: value,
            nodes: report.total_nodes,
            classes: report.total_classes,
        }
    } else {
        RamseyWitness {
            kind: WitnessKind::EscapingColoring,
            coloring: report.witness.clone(),
            t,
            n,
            dim: report.witness_dim.unwrap_or(n),
            nodes: report.total_nodes,
            classes: report.total_classes,
        }
    };
    if let Some(path) = out {
        write_json(path, &witness)?;
    }

    let doc = json!({
        "t": t, "n": n, "nmax": nmax,
        "exact": report.exact,
        "certified_lower": report.certified_lower,
        "budget_exhausted_at": report.budget_exhausted_at,
        "escaping_witness": report.witness,
        "witness_dim": report.witness_dim,
        "nodes": report.total_nodes,
        "classes": report.total_classes,
        "witness_file": out.map(|p| p.display().to_string()),
    });
    print_doc(common, &doc, || {
        match report.exact {
            Some(v) => println!("R(A_{t}, Q_{n}) = {v}"),
            None => match report.budget_exhausted_at {
                Some(d) => println!(
                    "R(A_{t}, Q_{n}) ≥ {} (budget exhausted at N = {d})",
                    report.certified_lower
                ),
                None => println!(
                    "R(A_{t}, Q_{n}) ≥ {} (escaping coloring exists at N = {nmax})",
                    report.certified_lower
                ),
            },
        }
        println!(
            "nodes: {}, root classes: {}",
            report.total_nodes, report.total_classes
        );
        if let (Some(d), Some(w)) = (report.witness_dim, &report.witness) {
            println!("escaping witness at N = {d}:");
            if w.dim() <= 5 {
                print!("{}", render_lattice(w));
            }
        }
        if let Some(path) = out {
            println!("witness written to {}", path.display());
        }
    });

    if report.budget_exhausted_at.is_some() {
        return Ok(EXIT_BUDGET);
    }
    Ok(EXIT_OK)
}

fn cmd_pipeline(
    common: &Common,
    file: &Path,
    t: u32,
    allow_undersized: bool,
    out: Option<&Path>,
) -> Result<i32> {
    let coloring = read_coloring(file)?;
    let trace = match theorem2_pipeline(&coloring, t, &PipelineOptions { allow_undersized }) {
        Ok(trace) => trace,
        Err(Error::BlueAntichainPresent { antichain }) => {
            // Input violates the hypothesis; show the refuting antichain.
            let doc = json!({
                "error": "blue antichain present",
                "t": t,
                "antichain": antichain,
            });
            print_doc(common, &doc, || {
                println!("input contains a blue antichain of size {t}: {:?}", antichain.vertices());
            });
            return Ok(EXIT_INPUT);
        }
        Err(e) => return Err(e),
    };
    if let Some(path) = out {
        write_json(path, &trace)?;
    }
    let doc = serde_json::to_value(&trace)?;
    print_doc(common, &doc, || {
        println!(
            "blue cover: {} chains over {} blue vertices",
            trace.blue_cover.len(),
            trace.blue_cover.elements().len()
        );
        println!("full chains extended: {}", trace.full_chains.len());
        let (x, y, z) = trace.triple;
        println!(
            "consistent triple: x={x}, y={y}, z={z} (guarantee held: {})",
            trace.triple_guarantee_held
        );
        println!("partition: X = {}, Y ordered {:?}", trace.x_ground, trace.y_order.elements_in_order());
        println!(
            "red Q_{} extracted over ground {} (verified)",
            trace.cube_dim,
            trace.embedding.ground()
        );
        if let Some(path) = out {
            println!("trace written to {}", path.display());
        }
    });
    Ok(EXIT_OK)
}

fn cmd_tools(common: &Common, tool: &Tool) -> Result<i32> {
    match tool {
        Tool::Scd { n } => {
            let d = chains::symmetric_chain_decomposition(*n)?;
            let doc = serde_json::to_value(&d)?;
            print_doc(common, &doc, || {
                println!("Q_{n}: {} symmetric chains", d.len());
                for c in d.chains() {
                    let row: Vec<String> = c.vertices().iter().map(|v| v.to_string()).collect();
                    println!("  {}", row.join(" ⊂ "));
                }
            });
        }
        Tool::Dilworth { file } => {
            let text = fs::read_to_string(file)?;
            let masks: Vec<u32> = serde_json::from_str(&text)?;
            let elems: Vec<VertexSet> = masks.into_iter().map(VertexSet::from_mask).collect();
            let cover = chains::min_chain_cover(&elems)?;
            let anti = chains::max_antichain(&elems)?;
            let doc = json!({ "cover": cover, "max_antichain": anti });
            print_doc(common, &doc, || {
                println!(
                    "{} elements: minimum chain cover {} = maximum antichain {}",
                    cover.elements().len(),
                    cover.len(),
                    anti.len()
                );
                for c in cover.chains() {
                    let row: Vec<String> = c.vertices().iter().map(|v| v.to_string()).collect();
                    println!("  chain: {}", row.join(" ⊂ "));
                }
                println!("  antichain: {:?}", anti.vertices());
            });
        }
        Tool::Triple { file } => {
            let text = fs::read_to_string(file)?;
            let orderings: Vec<LinearOrdering> = serde_json::from_str(&text)?;
            let triple = consistent_triple(&orderings)?;
            let doc = json!([triple.x, triple.y, triple.z]);
            // Triples print as JSON arrays in both modes.
            println!("{doc}");
            if common.format == Format::Text && !triple.guarantee_held {
                eprintln!("note: element count below the guarantee; triple found anyway");
            }
        }
        Tool::Bounds { n, t } => {
            let report = ramsey_bounds(*n, *t)?;
            let doc = serde_json::to_value(&report)?;
            print_doc(common, &doc, || match report.exact {
                Some(v) => println!(
                    "R(A_{t}, Q_{n}) = {v} (lower: {} via {}, upper: {})",
                    report.lower, report.lower_certificate, report.upper
                ),
                None => {
                    println!(
                        "{} ≤ R(A_{t}, Q_{n}) ≤ {} (lower via {})",
                        report.lower, report.upper, report.lower_certificate
                    );
                    if let Some(cl) = report.corollary_lower {
                        println!("asymptotic-form lower bound: {cl}");
                    }
                }
            });
        }
        Tool::Redcube { file, n } => {
            let coloring = read_coloring(file)?;
            if *n > coloring.dim() {
                return Err(Error::InvalidParameter(format!(
                    "--n {n} exceeds the coloring dimension {}",
                    coloring.dim()
                )));
            }
            let found = find_red_cube(&coloring, *n);
            let doc = json!({ "n": n, "found": found.is_some(), "embedding": found });
            print_doc(common, &doc, || match &found {
                Some(e) => println!("red Q_{n} found over ground {}", e.ground()),
                None => println!("no red Q_{n} (exhaustive canonical search)"),
            });
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_declaration_is_consistent() {
        Cli::command().debug_assert();
    }
}
