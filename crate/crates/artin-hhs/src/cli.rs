//! The command-line driver. `run` is a pure function from argv to an
//! exit code and the bytes for stdout, so the binary stays a three-line
//! shim and the whole surface is testable against golden files.
//!
//! Exit codes: 0 success, 1 for an UNKNOWN verdict or a failed axiom
//! check, 2 for usage errors and unparseable input files, 3 for
//! internal errors (an unwritable `--out` path, serialization trouble).

use crate::blowup::{
    augmented_graph, chhs_check, hyperbolicity_delta, parse_blowup, ChhsReport, LinkClass,
};
use crate::classify::{classify_report, product_region_graph, Outcome};
use crate::graph::{parse_graph, LabelledGraph};
use crate::presentation::{
    artin_presentation, hyperbolic_quotient_presentation, kernel_presentation, parse_kernel_spec,
    shephard_presentation, Presentation,
};
use crate::projection::{
    cps_check, crf_check, parse_cps, parse_crf, parse_ratio, ratio_text, CpsReport, CrfReport,
    Verdict,
};
use crate::random::{parse_sweep, run_sweep, sweep_csv};
use crate::simple::SimpleGraph;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

pub struct CommandOutcome {
    pub exit_code: u8,
    pub stdout: String,
}

const EXIT_OK: u8 = 0;
const EXIT_VERDICT: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "artin-hhs",
    version,
    about = "Classification, blowup and projection-axiom checks, quotient presentations, \
             and genericity experiments for Artin groups given by labelled defining graphs"
)]
struct Cli {
    /// Emit the JSON report instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Also write the report to a file
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Override the seed of any randomized subcommand
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (affects wall time only, never output)
    #[arg(long, global = true, value_name = "COUNT")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Type flags, odd components, and the Hopf criterion verdict
    Classify { graph: PathBuf },
    /// Product region graph as DOT (or a JSON structure dump)
    PrGraph { graph: PathBuf },
    /// Squid blowup of a support graph: simplices, classes, link shapes
    Blowup { file: PathBuf },
    /// Check the blowup axioms: chain length, link hyperbolicity,
    /// containers, fullness
    ChhsCheck {
        file: PathBuf,
        /// Hyperbolicity bound for augmented links, as `p/q` or an integer
        #[arg(long, default_value = "2")]
        delta: String,
        /// Complexity bound for strict link chains
        #[arg(long, default_value = "25")]
        n: usize,
    },
    /// Check the composite projection system axioms of a distance table
    CpsCheck { file: PathBuf },
    /// Check the composite rotating family axioms of a table with
    /// permutations
    CrfCheck { file: PathBuf },
    /// Emit a presentation derived from a defining graph
    Present {
        graph: PathBuf,
        #[command(flatten)]
        mode: PresentMode,
        /// Power for --shephard and --hyperbolic-quotient
        #[arg(long = "N", value_name = "N")]
        n: Option<u32>,
        /// Kernel base description file (`component`/`dihedral` lines)
        #[arg(long, value_name = "SPECFILE")]
        kernel: Option<PathBuf>,
    },
    /// Run a Monte Carlo sweep from a config file
    Random { config: PathBuf },
    /// Four-point hyperbolicity constant of a graph file or of the
    /// augmented graph of a blowup file
    Delta { file: PathBuf },
}

#[derive(Args)]
#[group(multiple = false)]
struct PresentMode {
    /// The Artin presentation itself
    #[arg(long)]
    artin: bool,
    /// Add c^N per vertex
    #[arg(long)]
    shephard: bool,
    /// Add c^N per vertex and (ab)^{mN} per edge
    #[arg(long)]
    hyperbolic_quotient: bool,
}

enum CliError {
    Parse(String),
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => EXIT_USAGE,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Internal(m) => m,
        }
    }
}

fn parse_err<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Parse(e.to_string())
}

fn read_input(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Internal(e.to_string()))
}

pub fn run<I, T>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let exit_code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            return CommandOutcome {
                exit_code,
                stdout: e.render().to_string(),
            };
        }
    };
    if let Some(jobs) = cli.jobs {
        // only the first call per process can set the pool size; later
        // calls keep the existing pool, which never changes outputs
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let (exit_code, payload) = match dispatch(&cli) {
        Ok(outcome) => outcome,
        Err(e) => (e.exit_code(), format!("error: {}\n", e.message())),
    };
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &payload) {
            return CommandOutcome {
                exit_code: EXIT_INTERNAL,
                stdout: format!("error: cannot write {}: {e}\n", path.display()),
            };
        }
    }
    CommandOutcome {
        exit_code,
        stdout: payload,
    }
}

fn dispatch(cli: &Cli) -> Result<(u8, String), CliError> {
    match &cli.command {
        Command::Classify { graph } => run_classify(graph, cli.json),
        Command::PrGraph { graph } => run_pr_graph(graph, cli.json),
        Command::Blowup { file } => run_blowup(file, cli.json),
        Command::ChhsCheck { file, delta, n } => run_chhs_check(file, delta, *n, cli.json),
        Command::CpsCheck { file } => run_cps_check(file, cli.json),
        Command::CrfCheck { file } => run_crf_check(file, cli.json),
        Command::Present {
            graph,
            mode,
            n,
            kernel,
        } => run_present(graph, mode, *n, kernel.as_deref(), cli.json),
        Command::Random { config } => run_random(config, cli.seed, cli.json),
        Command::Delta { file } => run_delta(file, cli.json),
    }
}

fn run_classify(path: &Path, json: bool) -> Result<(u8, String), CliError> {
    let g = parse_graph(&read_input(path)?).map_err(parse_err)?;
    let report = classify_report(&g);
    let exit = match report.verdict.outcome {
        Outcome::Hopfian => EXIT_OK,
        Outcome::Unknown => EXIT_VERDICT,
    };
    let payload = if json {
        to_json(&report)?
    } else {
        report.render_text()
    };
    Ok((exit, payload))
}

fn run_pr_graph(path: &Path, json: bool) -> Result<(u8, String), CliError> {
    let g = parse_graph(&read_input(path)?).map_err(parse_err)?;
    let pr = product_region_graph(&g).map_err(parse_err)?;
    let payload = if json {
        let components: Vec<_> = pr
            .components()
            .iter()
            .map(|(_, members)| {
                members
                    .iter()
                    .map(|&v| g.name(v).to_string())
                    .collect::<Vec<_>>()
            })
            .collect();
        let dihedrals: Vec<_> = pr
            .dihedrals()
            .iter()
            .map(|&(a, b)| vec![g.name(a).to_string(), g.name(b).to_string()])
            .collect();
        let edges: Vec<_> = pr.edges().iter().collect();
        to_json(&json!({
            "components": components,
            "dihedrals": dihedrals,
            "edges": edges,
        }))?
    } else {
        pr.to_dot(&g)
    };
    Ok((EXIT_OK, payload))
}

fn link_class_text(class: &LinkClass) -> String {
    match class {
        LinkClass::Empty => "empty simplex".to_string(),
        LinkClass::EdgeType => "edge-type".to_string(),
        LinkClass::TriangleType => "triangle-type".to_string(),
        LinkClass::Maximal => "maximal".to_string(),
        LinkClass::Bounded { diameter: Some(d) } => format!("bounded (diameter {d})"),
        LinkClass::Bounded { diameter: None } => "bounded (disconnected link)".to_string(),
    }
}

fn names_set(x: &crate::blowup::BlowupComplex, verts: &[usize]) -> String {
    let names: Vec<&str> = verts.iter().map(|&v| x.x_name(v)).collect();
    format!("{{{}}}", names.join(","))
}

fn run_blowup(path: &Path, json: bool) -> Result<(u8, String), CliError> {
    let (x, w) = parse_blowup(&read_input(path)?).map_err(parse_err)?;
    let maximal = x.maximal_simplices();
    let classes = x.simplex_classes();
    let classifications: Vec<Option<LinkClass>> = classes
        .iter()
        .map(|c| x.classify_simplex_link(c.representative()).ok())
        .collect();
    let payload = if json {
        let classes_json: Vec<_> = classes
            .iter()
            .zip(&classifications)
            .map(|(c, tag)| {
                json!({
                    "representative": x.simplex_display(c.representative()),
                    "members": c.members.iter().map(|m| x.simplex_display(m)).collect::<Vec<_>>(),
                    "link": c.link.iter().map(|&v| x.x_name(v)).collect::<Vec<_>>(),
                    "classification": tag,
                })
            })
            .collect();
        to_json(&json!({
            "support_vertices": x.support_count(),
            "x_vertices": x.x_count(),
            "wedges": w.edge_count(),
            "maximal_simplices": maximal.iter().map(|m| x.simplex_display(m)).collect::<Vec<_>>(),
            "classes": classes_json,
        }))?
    } else {
        let mut s = String::new();
        s.push_str(&format!(
            "support: {} vertices, {} edges\n",
            x.support_count(),
            x.support_graph().edge_count()
        ));
        s.push_str(&format!(
            "blowup: {} vertices, {} wedges\n",
            x.x_count(),
            w.edge_count()
        ));
        s.push_str(&format!("maximal simplices ({}):\n", maximal.len()));
        for m in &maximal {
            s.push_str(&format!("  {}\n", x.simplex_display(m)));
        }
        s.push_str(&format!("non-maximal classes ({}):\n", classes.len()));
        for (c, tag) in classes.iter().zip(&classifications) {
            let shape = match tag {
                Some(t) => link_class_text(t),
                None => "unclassified (support hypothesis fails)".to_string(),
            };
            s.push_str(&format!(
                "  {}  link {}  {}  ({} member{})\n",
                x.simplex_display(c.representative()),
                names_set(&x, &c.link),
                shape,
                c.members.len(),
                if c.members.len() == 1 { "" } else { "s" }
            ));
        }
        s
    };
    Ok((EXIT_OK, payload))
}

fn chhs_text(r: &ChhsReport) -> String {
    let ok = |b: bool| if b { "ok" } else { "FAIL" };
    let mut s = String::new();
    s.push_str(&format!(
        "link chains: max {} (bound {}): {}\n",
        r.max_chain,
        r.complexity_bound,
        ok(r.complexity_ok)
    ));
    if !r.chain_witness.is_empty() {
        s.push_str(&format!("  longest chain: {}\n", r.chain_witness.join(" < ")));
    }
    s.push_str(&format!(
        "link hyperbolicity: max delta {} (bound {}): {}\n",
        r.max_link_delta,
        r.delta_bound,
        ok(r.hyperbolicity_ok)
    ));
    if let Some(w) = &r.delta_witness {
        s.push_str(&format!("  extremal link: {w}\n"));
    }
    s.push_str(&format!("distortion (reported): max {}", r.max_distortion));
    if let Some(w) = &r.distortion_witness {
        s.push_str(&format!(" at {w}"));
    }
    s.push('\n');
    s.push_str(&format!("containers: {}\n", ok(r.containers_ok)));
    for f in &r.container_failures {
        s.push_str(&format!(
            "  no container for {} against {} (candidates {})\n",
            f.first,
            f.second,
            f.witnesses.join(", ")
        ));
    }
    s.push_str(&format!("fullness: {}\n", ok(r.fullness_ok)));
    for f in &r.fullness_failures {
        s.push_str(&format!(
            "  {} and {} in the link of {} have no joining wedge\n",
            f.u, f.v, f.simplex
        ));
    }
    s.push_str(if r.passed { "result: pass\n" } else { "result: fail\n" });
    s
}

fn run_chhs_check(path: &Path, delta: &str, n: usize, json: bool) -> Result<(u8, String), CliError> {
    let (x, w) = parse_blowup(&read_input(path)?).map_err(parse_err)?;
    let delta = parse_ratio(delta)
        .ok_or_else(|| CliError::Parse(format!("bad --delta value `{delta}`")))?;
    let report = chhs_check(&x, &w, delta, n);
    let exit = if report.passed { EXIT_OK } else { EXIT_VERDICT };
    let payload = if json { to_json(&report)? } else { chhs_text(&report) };
    Ok((exit, payload))
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "FAIL",
        Verdict::Vacuous => "vacuous",
    }
}

fn cps_text(r: &CpsReport) -> Result<String, CliError> {
    let mut s = String::new();
    for a in &r.axioms {
        s.push_str(&format!("{}: {}", a.axiom, verdict_word(a.verdict)));
        if let Some(w) = &a.witness {
            let wj = serde_json::to_string(w).map_err(|e| CliError::Internal(e.to_string()))?;
            s.push_str(&format!(" witness {wj}"));
        }
        if let Some(d) = &a.detail {
            s.push_str(&format!(" ({d})"));
        }
        s.push('\n');
    }
    s.push_str(&format!("note: {}\n", r.note));
    s.push_str(if r.passed { "result: pass\n" } else { "result: fail\n" });
    Ok(s)
}

fn crf_text(r: &CrfReport) -> Result<String, CliError> {
    let mut s = String::new();
    for a in &r.axioms {
        s.push_str(&format!("{}: {}", a.axiom, verdict_word(a.verdict)));
        if let Some(w) = &a.witness {
            let wj = serde_json::to_string(w).map_err(|e| CliError::Internal(e.to_string()))?;
            s.push_str(&format!(" witness {wj}"));
        }
        if let Some(d) = &a.detail {
            s.push_str(&format!(" ({d})"));
        }
        s.push('\n');
    }
    s.push_str(&format!("note: {}\n", r.note));
    s.push_str(if r.passed { "result: pass\n" } else { "result: fail\n" });
    Ok(s)
}

fn run_cps_check(path: &Path, json: bool) -> Result<(u8, String), CliError> {
    let data = parse_cps(&read_input(path)?).map_err(parse_err)?;
    let report = cps_check(&data);
    let exit = if report.passed { EXIT_OK } else { EXIT_VERDICT };
    let payload = if json { to_json(&report)? } else { cps_text(&report)? };
    Ok((exit, payload))
}

fn run_crf_check(path: &Path, json: bool) -> Result<(u8, String), CliError> {
    let data = parse_crf(&read_input(path)?).map_err(parse_err)?;
    let report = crf_check(&data);
    let exit = if report.passed { EXIT_OK } else { EXIT_VERDICT };
    let payload = if json { to_json(&report)? } else { crf_text(&report)? };
    Ok((exit, payload))
}

fn run_present(
    path: &Path,
    mode: &PresentMode,
    n: Option<u32>,
    kernel: Option<&Path>,
    json: bool,
) -> Result<(u8, String), CliError> {
    let g: LabelledGraph = parse_graph(&read_input(path)?).map_err(parse_err)?;
    let chosen =
        mode.artin as u8 + mode.shephard as u8 + mode.hyperbolic_quotient as u8
            + kernel.is_some() as u8;
    if chosen != 1 {
        return Err(CliError::Parse(
            "choose exactly one of --artin, --shephard, --hyperbolic-quotient, --kernel"
                .to_string(),
        ));
    }
    let power = || {
        n.ok_or_else(|| {
            CliError::Parse("--N is required for --shephard and --hyperbolic-quotient".to_string())
        })
    };
    let p: Presentation = if mode.artin {
        if n.is_some() {
            return Err(CliError::Parse("--N does not apply to --artin".to_string()));
        }
        artin_presentation(&g)
    } else if mode.shephard {
        shephard_presentation(&g, power()?).map_err(parse_err)?
    } else if mode.hyperbolic_quotient {
        hyperbolic_quotient_presentation(&g, power()?).map_err(parse_err)?
    } else {
        if n.is_some() {
            return Err(CliError::Parse(
                "--N does not apply to --kernel; multipliers live in the spec file".to_string(),
            ));
        }
        let spec_path = kernel.unwrap();
        let spec = parse_kernel_spec(&read_input(spec_path)?, &g).map_err(parse_err)?;
        kernel_presentation(&g, &spec).map_err(parse_err)?
    };
    let payload = if json { to_json(&p.to_json())? } else { p.serialize() };
    Ok((EXIT_OK, payload))
}

fn run_random(path: &Path, seed: Option<u64>, json: bool) -> Result<(u8, String), CliError> {
    let mut cfg = parse_sweep(&read_input(path)?).map_err(parse_err)?;
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    let rows = run_sweep(&cfg).map_err(parse_err)?;
    let payload = if json { to_json(&rows)? } else { sweep_csv(&rows) };
    Ok((EXIT_OK, payload))
}

fn run_delta(path: &Path, json: bool) -> Result<(u8, String), CliError> {
    let text = read_input(path)?;
    let (kind, graph) = match parse_graph(&text) {
        Ok(g) => {
            let mut s = SimpleGraph::new(g.vertex_count());
            for (a, b, _) in g.edges() {
                s.add_edge(a.index(), b.index());
            }
            ("defining-graph", s)
        }
        Err(graph_err) => match parse_blowup(&text) {
            Ok((x, w)) => ("augmented-blowup", augmented_graph(&x, &w)),
            Err(blowup_err) => {
                return Err(CliError::Parse(format!(
                    "not a graph file ({graph_err}) nor a blowup file ({blowup_err})"
                )));
            }
        },
    };
    let delta = hyperbolicity_delta(&graph);
    let payload = if json {
        to_json(&json!({
            "input": kind,
            "vertices": graph.n(),
            "delta": ratio_text(delta),
        }))?
    } else {
        format!("input: {kind}\nvertices: {}\ndelta: {}\n", graph.n(), ratio_text(delta))
    };
    Ok((EXIT_OK, payload))
}
