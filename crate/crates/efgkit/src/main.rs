//! Command line front end: segment alignments, build and query graph
//! indexes, convert to Wheeler automata, generate stress instances.
//!
//! Exit codes: 0 success, 2 unusable input or unsupported option
//! combination, 3 no valid segmentation under `--strict`, 4 verification
//! failure (stored index disagrees with its graph, graph fails a validity
//! check, or no consistent automaton order exists).

use clap::{Args, Parser, Subcommand, ValueEnum};
use efgkit::efg::{build_efg, Efg};
use efgkit::hardness::{build_ov_graph, build_ov_query, ov_has_orthogonal_pair, OvInstance};
use efgkit::index::{
    build_index, check_repeat_structure, read_index, write_index, IndexIoError, IndexKind,
    OccursIndex,
};
use efgkit::msa::{parse_fasta, Msa};
use efgkit::segmentation::{
    maximize_blocks, minimize_max_length, minimize_max_length_gapless,
    minimize_max_length_repeat_free_elastic, ScoreKind, SegScore, Segmentation,
};
use efgkit::validity::{ValidityError, ValidityMode, ValidityTable};
use efgkit::wheeler::{wheeler_automaton, WheelerError};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::io::Read;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "efgkit", version, about = "Founder graphs from alignments: segmentation, indexing, queries")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Segment an aligned FASTA file so the induced graph supports exact matching
    Segment(SegmentArgs),
    /// Segment an alignment and emit the founder graph
    Build(BuildArgs),
    /// Build a pattern index over a graph
    Index(IndexArgs),
    /// Answer pattern queries from a stored index
    Query(QueryArgs),
    /// Check a stored index against its graph, or a graph against a validity mode
    Verify(VerifyArgs),
    /// Convert a repeat-free graph into a Wheeler automaton
    Wheeler(WheelerArgs),
    /// Generate an orthogonal-vectors stress instance: graph plus query string
    Ovgadget(OvArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    RepeatFree,
    SemiRepeatFree,
}

impl From<ModeArg> for ValidityMode {
    fn from(m: ModeArg) -> ValidityMode {
        match m {
            ModeArg::RepeatFree => ValidityMode::RepeatFree,
            ModeArg::SemiRepeatFree => ValidityMode::SemiRepeatFree,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScoreArg {
    Maxblocks,
    Minmaxlength,
}

impl From<ScoreArg> for ScoreKind {
    fn from(s: ScoreArg) -> ScoreKind {
        match s {
            ScoreArg::Maxblocks => ScoreKind::MaxBlocks,
            ScoreArg::Minmaxlength => ScoreKind::MinMaxLength,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    /// Pick by input: gapless alignments use the linear tables
    Auto,
    GaplessLinear,
    Elastic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Classic,
    Ebwt,
    Triple,
}

impl From<KindArg> for IndexKind {
    fn from(k: KindArg) -> IndexKind {
        match k {
            KindArg::Classic => IndexKind::Classic,
            KindArg::Ebwt => IndexKind::Ebwt,
            KindArg::Triple => IndexKind::Triple,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Dot,
    Gfa,
}

#[derive(Args)]
struct SegmentArgs {
    /// Aligned FASTA file, '-' for standard input
    msa: String,
    #[arg(long, value_enum, default_value_t = ModeArg::RepeatFree)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = ScoreArg::Maxblocks)]
    score: ScoreArg,
    #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
    engine: EngineArg,
    /// Fail (exit 3) instead of falling back to a single block
    #[arg(long)]
    strict: bool,
    /// Output file, '-' for standard output
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct BuildArgs {
    /// Aligned FASTA file, '-' for standard input
    msa: String,
    #[arg(long, value_enum, default_value_t = ModeArg::RepeatFree)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = ScoreArg::Maxblocks)]
    score: ScoreArg,
    #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
    engine: EngineArg,
    #[arg(long)]
    strict: bool,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Output file, '-' for standard output
    #[arg(long, default_value = "-")]
    out: String,
    /// Also write the segmentation as JSON
    #[arg(long)]
    segments_out: Option<String>,
}

#[derive(Args)]
struct IndexArgs {
    /// Graph JSON produced by `build`
    #[arg(long)]
    graph: String,
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Index file to write
    #[arg(long)]
    out: String,
}

#[derive(Args)]
struct QueryArgs {
    /// Index file produced by `index`
    #[arg(long)]
    index: String,
    /// Newline-delimited patterns, '-' for standard input
    #[arg(long, default_value = "-")]
    patterns: String,
    /// Append the matched node and offset to positive answers
    #[arg(long)]
    witness: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Index file to re-derive and compare
    #[arg(long, conflicts_with_all = ["graph", "mode"])]
    index: Option<String>,
    /// Graph JSON to check against --mode
    #[arg(long, requires = "mode")]
    graph: Option<String>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(Args)]
struct WheelerArgs {
    /// Graph JSON produced by `build`
    #[arg(long)]
    graph: String,
    /// Automaton JSON output, '-' for standard output
    #[arg(long, default_value = "-")]
    out: String,
    /// Also write a DOT rendering
    #[arg(long)]
    dot: Option<String>,
}

#[derive(Args)]
struct OvArgs {
    /// Instance file: "n d" header, then n x-vectors and n y-vectors as bit rows
    #[arg(long, conflicts_with_all = ["n", "d", "seed"])]
    instance: Option<String>,
    /// Number of vectors per side for a random instance
    #[arg(long, requires = "d")]
    n: Option<usize>,
    /// Vector dimension for a random instance
    #[arg(long, requires = "n")]
    d: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Where to write the graph JSON
    #[arg(long)]
    graph_out: String,
    /// Where to write the query string
    #[arg(long)]
    query_out: String,
}

struct Fail {
    code: u8,
    msg: String,
}

impl Fail {
    fn input(msg: impl Into<String>) -> Fail {
        Fail { code: 2, msg: msg.into() }
    }

    fn verification(msg: impl Into<String>) -> Fail {
        Fail { code: 4, msg: msg.into() }
    }
}

type R<T> = Result<T, Fail>;

fn read_input(path: &str) -> R<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Fail::input(format!("standard input: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Fail::input(format!("{path}: {e}")))
    }
}

fn write_output(path: &str, data: &[u8]) -> R<()> {
    if path == "-" {
        use std::io::Write;
        std::io::stdout()
            .write_all(data)
            .map_err(|e| Fail::input(format!("standard output: {e}")))
    } else {
        std::fs::write(path, data).map_err(|e| Fail::input(format!("{path}: {e}")))
    }
}

fn load_msa(path: &str) -> R<Msa> {
    let text = read_input(path)?;
    parse_fasta(&text, true).map_err(|e| Fail::input(e.to_string()))
}

fn load_graph(path: &str) -> R<Efg> {
    let text = read_input(path)?;
    Efg::from_json(&text).map_err(|e| Fail::input(e.to_string()))
}

fn compute_segmentation(
    msa: &Msa,
    mode: ValidityMode,
    score: ScoreKind,
    engine: EngineArg,
    strict: bool,
) -> R<Segmentation> {
    let engine = match engine {
        EngineArg::Auto => {
            if msa.is_gapless() {
                EngineArg::GaplessLinear
            } else {
                EngineArg::Elastic
            }
        }
        e => e,
    };
    let seg = match engine {
        EngineArg::GaplessLinear => {
            let table = ValidityTable::gapless(msa, mode).map_err(|e| match e {
                ValidityError::GapsPresent => {
                    Fail::input("alignment contains gaps; use --engine elastic or --engine auto")
                }
                other => Fail::input(other.to_string()),
            })?;
            match score {
                ScoreKind::MaxBlocks => maximize_blocks(&table),
                ScoreKind::MinMaxLength => minimize_max_length_gapless(&table),
            }
        }
        EngineArg::Elastic => match (mode, score) {
            (ValidityMode::SemiRepeatFree, _) => {
                let table =
                    ValidityTable::elastic_semi(msa).map_err(|e| Fail::input(e.to_string()))?;
                match score {
                    ScoreKind::MaxBlocks => maximize_blocks(&table),
                    ScoreKind::MinMaxLength => minimize_max_length(&table),
                }
            }
            (ValidityMode::RepeatFree, ScoreKind::MinMaxLength) => {
                minimize_max_length_repeat_free_elastic(msa)
                    .map_err(|e| Fail::input(e.to_string()))?
            }
            (ValidityMode::RepeatFree, ScoreKind::MaxBlocks) => {
                return Err(Fail::input(
                    "maximizing block count under repeat-free validity is only \
                     available for gapless alignments; use --score minmaxlength \
                     or --mode semi-repeat-free",
                ))
            }
        },
        EngineArg::Auto => unreachable!(),
    };
    match seg {
        Some(s) => Ok(s),
        None if strict => {
            Err(Fail { code: 3, msg: "no valid segmentation exists for this alignment".into() })
        }
        None => {
            eprintln!("note: no valid segmentation exists; falling back to a single block");
            let value = match score {
                ScoreKind::MaxBlocks => 1,
                ScoreKind::MinMaxLength => msa.n_cols() as u64,
            };
            Ok(Segmentation {
                mode,
                score: SegScore { kind: score, value },
                segments: vec![(0, msa.n_cols())],
            })
        }
    }
}

fn run(cli: Cli) -> R<()> {
    match cli.cmd {
        Cmd::Segment(a) => {
            let msa = load_msa(&a.msa)?;
            let seg =
                compute_segmentation(&msa, a.mode.into(), a.score.into(), a.engine, a.strict)?;
            eprintln!(
                "segments={} score[{}]={}",
                seg.n_segments(),
                seg.score.kind.as_str(),
                seg.score.value
            );
            write_output(&a.out, seg.to_json().as_bytes())
        }
        Cmd::Build(a) => {
            let msa = load_msa(&a.msa)?;
            let seg =
                compute_segmentation(&msa, a.mode.into(), a.score.into(), a.engine, a.strict)?;
            let g = build_efg(&msa, &seg.segments).map_err(|e| Fail::input(e.to_string()))?;
            if let Some(path) = &a.segments_out {
                write_output(path, seg.to_json().as_bytes())?;
            }
            let stats = g.stats();
            eprintln!(
                "blocks={} nodes={} edges={}",
                g.n_blocks(),
                g.n_nodes(),
                stats.edges
            );
            let rendered = match a.format {
                FormatArg::Json => g.to_json(),
                FormatArg::Dot => g.to_dot(),
                FormatArg::Gfa => g.to_gfa(),
            };
            write_output(&a.out, rendered.as_bytes())
        }
        Cmd::Index(a) => {
            let g = load_graph(&a.graph)?;
            let idx = build_index(&g, a.kind.into()).map_err(|v| {
                Fail::input(format!(
                    "graph does not satisfy the index precondition: label of node {} \
                     occurs at node {} offset {}",
                    v.pattern_node, v.at_node, v.offset
                ))
            })?;
            let bytes = write_index(&idx);
            std::fs::write(&a.out, &bytes).map_err(|e| Fail::input(format!("{}: {e}", a.out)))?;
            eprintln!("kind={} bytes={}", IndexKind::from(a.kind).as_str(), bytes.len());
            Ok(())
        }
        Cmd::Query(a) => {
            let bytes =
                std::fs::read(&a.index).map_err(|e| Fail::input(format!("{}: {e}", a.index)))?;
            let idx = read_index(&bytes).map_err(map_io_error)?;
            let patterns = read_input(&a.patterns)?;
            use std::io::Write;
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            for line in patterns.lines() {
                let q = line.trim_end_matches('\r').as_bytes();
                let answer = idx.occurs_with_witness(q);
                let shown = match (answer, a.witness) {
                    (Some(w), true) => format!("1\t{}\t{}", w.node, w.offset),
                    (Some(_), false) => "1".to_string(),
                    (None, _) => "0".to_string(),
                };
                writeln!(out, "{shown}").map_err(|e| Fail::input(e.to_string()))?;
            }
            Ok(())
        }
        Cmd::Verify(a) => match (&a.index, &a.graph) {
            (Some(path), None) => {
                let bytes =
                    std::fs::read(path).map_err(|e| Fail::input(format!("{path}: {e}")))?;
                let idx = read_index(&bytes).map_err(map_io_error)?;
                println!(
                    "ok: {} index over {} nodes",
                    idx.kind().as_str(),
                    idx.graph().n_nodes()
                );
                Ok(())
            }
            (None, Some(path)) => {
                let g = load_graph(path)?;
                let mode: ValidityMode = a.mode.expect("clap enforces --mode").into();
                match check_repeat_structure(&g, mode) {
                    None => {
                        println!("ok: graph satisfies the {} check", mode_name(mode));
                        Ok(())
                    }
                    Some(v) => Err(Fail::verification(format!(
                        "label of node {} occurs at node {} offset {}",
                        v.pattern_node, v.at_node, v.offset
                    ))),
                }
            }
            _ => Err(Fail::input("pass exactly one of --index or --graph")),
        },
        Cmd::Wheeler(a) => {
            let g = load_graph(&a.graph)?;
            let aut = wheeler_automaton(&g).map_err(|e| match e {
                WheelerError::NotRepeatFree(_) => Fail::input(e.to_string()),
                WheelerError::NotOrderable(_) => Fail::verification(e.to_string()),
            })?;
            eprintln!("states={} edges={}", aut.n_states(), aut.edges.len());
            if let Some(path) = &a.dot {
                write_output(path, aut.to_dot().as_bytes())?;
            }
            write_output(&a.out, aut.to_json().as_bytes())
        }
        Cmd::Ovgadget(a) => {
            let inst = match (&a.instance, a.n, a.d) {
                (Some(path), None, None) => {
                    let text = read_input(path)?;
                    OvInstance::parse(&text).map_err(Fail::input)?
                }
                (None, Some(n), Some(d)) => {
                    if n == 0 || d == 0 {
                        return Err(Fail::input("need --n and --d of at least 1"));
                    }
                    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
                    let side = |rng: &mut ChaCha8Rng| -> Vec<Vec<u8>> {
                        (0..n).map(|_| (0..d).map(|_| rng.gen_range(0..2u8)).collect()).collect()
                    };
                    let xs = side(&mut rng);
                    let ys = side(&mut rng);
                    OvInstance { d, xs, ys }
                }
                _ => return Err(Fail::input("pass either --instance or both --n and --d")),
            };
            let (g, _meta) = build_ov_graph(&inst);
            let query = build_ov_query(&inst.xs);
            write_output(&a.graph_out, g.to_json().as_bytes())?;
            write_output(&a.query_out, &query)?;
            eprintln!(
                "n={} d={} nodes={} edges={} query_len={}",
                inst.xs.len(),
                inst.d,
                g.n_nodes(),
                g.stats().edges,
                query.len()
            );
            println!("{}", if ov_has_orthogonal_pair(&inst) { 1 } else { 0 });
            Ok(())
        }
    }
}

fn mode_name(mode: ValidityMode) -> &'static str {
    match mode {
        ValidityMode::RepeatFree => "repeat-free",
        ValidityMode::SemiRepeatFree => "semi-repeat-free",
    }
}

fn map_io_error(e: IndexIoError) -> Fail {
    match e {
        IndexIoError::Mismatch(_) => Fail::verification(e.to_string()),
        _ => Fail::input(e.to_string()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("EFGKIT_LOG")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
