use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use ech_core::capacities::{ratio_scan, CapacityTable, RatioScanResult};
use ech_core::criterion::{
    obstruct, CMode, EmbeddingProblem, Factorization, ObstructionReport, Outcome, SearchConfig, DEFAULT_NODE_LIMIT,
};
use ech_core::render::render_svg;
use ech_core::witness::{build_witness, Witness, WitnessSpec};
use ech_core::{ConvexGenerator, Rational, ToricDomain};

#[derive(Parser)]
#[command(name = "ech", version, about = "Exact ECH indices, actions, capacities and embedding obstructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// ECH index of a generator, e.g. "e(5,2)^2"
    Index { generator: String },
    /// Symplectic action of a generator on a domain
    Action {
        #[arg(long)]
        domain: String,
        generator: String,
    },
    /// ECH capacities c_0..c_kmax
    Capacities {
        #[arg(long)]
        domain: String,
        #[arg(long)]
        kmax: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        /// Add a decimal column next to the exact values
        #[arg(long)]
        float: bool,
    },
    /// Largest capacity ratio c_k(num)/c_k(den) for k <= kmax
    Ratio {
        #[arg(long)]
        num: String,
        #[arg(long)]
        den: String,
        #[arg(long)]
        kmax: usize,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Run the criterion for P(a,1) into E(pc/q, c) against e(p,q)^d0
    Obstruct {
        #[arg(long)]
        a: Rational,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long)]
        d0: u64,
        /// Test this c only, instead of every c below (qa+p)/p
        #[arg(long)]
        c: Option<Rational>,
        #[arg(long)]
        no_prune: bool,
        #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
        node_limit: u64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Build a generator that defeats the criterion
    Witness {
        #[arg(long, value_enum)]
        variant: Variant,
        #[arg(long)]
        d0: u64,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        epsilon: Option<Rational>,
        /// Defaults to the middle of the family's interval
        #[arg(long)]
        c: Option<Rational>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
    /// Draw a generator as SVG
    Render {
        generator: String,
        #[arg(short, long)]
        output: PathBuf,
        /// Second generator drawn dashed
        #[arg(long)]
        overlay: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
    #[value(name = "C", alias = "c")]
    C,
}

enum Failure {
    Usage(String),
    Domain(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<ech_core::Error> for Failure {
    fn from(e: ech_core::Error) -> Self {
        Failure::Domain(e.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn generator(text: &str) -> anyhow::Result<ConvexGenerator> {
    text.parse().with_context(|| format!("bad generator {text:?}"))
}

fn domain(text: &str) -> anyhow::Result<ToricDomain> {
    text.parse().with_context(|| format!("bad domain {text:?}"))
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn run(command: Command) -> Result<(String, u8), Failure> {
    let out = match command {
        Command::Index { generator: g } => format!("{}\n", generator(&g)?.ech_index()),
        Command::Action { domain: d, generator: g } => format!("{}\n", domain(&d)?.action(&generator(&g)?)),
        Command::Capacities { domain: d, kmax, format, float } => {
            let table = CapacityTable::compute(&domain(&d)?, kmax)?;
            match format {
                TableFormat::Csv => table.to_csv(float),
                TableFormat::Json => capacities_json(&table, float),
            }
        }
        Command::Ratio { num, den, kmax, format } => {
            let scan = ratio_scan(&domain(&num)?, &domain(&den)?, kmax)?;
            match format {
                ReportFormat::Json => json(&scan),
                ReportFormat::Text => ratio_text(&scan),
            }
        }
        Command::Obstruct { a, p, q, d0, c, no_prune, node_limit, format } => {
            let mode = match c {
                Some(c) => CMode::Exact { c },
                None => CMode::SupremumStrict,
            };
            let prob = EmbeddingProblem::new(a, p, q, d0, mode)?;
            let config = SearchConfig { prune: !no_prune, node_limit, ..SearchConfig::default() };
            let report = obstruct(&prob, &config);
            let code = if report.outcome == Outcome::Inconclusive { 3 } else { 0 };
            let out = match format {
                ReportFormat::Json => json(&report),
                ReportFormat::Text => obstruct_text(&report),
            };
            return Ok((out, code));
        }
        Command::Witness { variant, d0, p, q, epsilon, c, format } => {
            let need = |flag: &str| Failure::Usage(format!("variant needs --{flag}"));
            let spec = match variant {
                Variant::A => WitnessSpec::A {
                    d0,
                    epsilon: epsilon.ok_or_else(|| need("epsilon"))?,
                    p: p.ok_or_else(|| need("p"))?,
                },
                Variant::B => WitnessSpec::B { d0 },
                Variant::C => WitnessSpec::C { d0, p: p.ok_or_else(|| need("p"))?, q: q.ok_or_else(|| need("q"))? },
            };
            let witness = build_witness(&spec, c)?;
            match format {
                ReportFormat::Json => json(&witness),
                ReportFormat::Text => witness_text(&witness),
            }
        }
        Command::Render { generator: g, output, overlay } => {
            let g = generator(&g)?;
            let overlay = overlay.as_deref().map(generator).transpose()?;
            std::fs::write(&output, render_svg(&g, overlay.as_ref()))
                .with_context(|| format!("writing {}", output.display()))?;
            format!("{} (L = {}) -> {}\n", g, g.lattice_count(), output.display())
        }
    };
    Ok((out, 0))
}

fn capacities_json(table: &CapacityTable, float: bool) -> String {
    let entries: Vec<_> = table
        .entries
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let mut row = serde_json::json!({ "k": k, "capacity": c });
            if float {
                row["capacity_float"] = serde_json::json!(c.to_f64());
            }
            row
        })
        .collect();
    json(&serde_json::json!({ "domain": table.domain, "k_max": table.k_max(), "capacities": entries }))
}

fn ratio_text(scan: &RatioScanResult) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "max_ratio {} at k = {} ({} / {})",
        scan.max_ratio, scan.argmax_k, scan.num_capacity_at_argmax, scan.den_capacity_at_argmax
    )
    .unwrap();
    writeln!(out, "ratio at k = {}: {}", scan.k_max, scan.final_ratio).unwrap();
    let v = &scan.volume_limit;
    writeln!(out, "volume limit sqrt({}) ~ {:.6}", v.ratio(), v.limit_f64()).unwrap();
    out
}

fn factorization_text(f: &Factorization, prob: &EmbeddingProblem) -> String {
    f.lambda_parts
        .iter()
        .zip(&f.dprime_parts)
        .map(|(l, d)| format!("[{l}] vs e({},{})^{d}", prob.p, prob.q))
        .collect::<Vec<_>>()
        .join(", ")
}

fn obstruct_text(report: &ObstructionReport) -> String {
    let prob = &report.problem;
    let mut out = String::new();
    match report.outcome {
        Outcome::Obstructed => {
            let bound = report.bound.as_ref().expect("obstructed reports carry a bound");
            match prob.mode {
                CMode::SupremumStrict => writeln!(out, "Obstructed: c ≥ {bound}").unwrap(),
                CMode::Exact { .. } => writeln!(out, "Obstructed: no embedding at c = {bound}").unwrap(),
            }
        }
        Outcome::NotObstructed => {
            let f = report.witness.as_ref().expect("unobstructed reports carry a witness");
            writeln!(out, "Not obstructed: {}", factorization_text(f, prob)).unwrap();
        }
        Outcome::Inconclusive => {
            writeln!(out, "Inconclusive: {}", report.reason.as_deref().unwrap_or("no reason given")).unwrap();
        }
    }
    let s = &report.stats;
    writeln!(
        out,
        "endpoints {} (pruned {}), assemblies {}, factorizations {}, nodes {}",
        s.endpoints, s.endpoints_pruned, s.assemblies, s.factorizations, s.nodes_visited
    )
    .unwrap();
    for c in &s.candidates {
        writeln!(out, "  d = {}: {} candidates", c.d, c.count).unwrap();
    }
    out
}

fn witness_text(w: &Witness) -> String {
    let p = &w.params;
    let le = &w.le_check;
    let mut out = String::new();
    writeln!(out, "a = {}, e({},{})^{}, c = {}", p.a, p.p, p.q, p.d0, w.c).unwrap();
    writeln!(out, "pc in ({}, {})", p.pc_interval.0, p.pc_interval.1).unwrap();
    writeln!(out, "generator {} (L = {})", w.generator, w.generator.lattice_count()).unwrap();
    writeln!(out, "index  {} = {}: {}", le.index_lhs, le.index_rhs, le.index_ok).unwrap();
    writeln!(out, "action {} <= {}: {}", le.action_lhs, le.action_rhs, le.action_ok).unwrap();
    writeln!(out, "genus  {} >= {}: {}", le.genus_lhs, le.genus_rhs, le.genus_ok).unwrap();
    writeln!(out, "{}", if le.passes() { "PASS" } else { "FAIL" }).unwrap();
    out
}
