use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use stirling_gamma::action::{canonical_representative, is_canonical, orbit, prune};
use stirling_gamma::eulerian::{
    c_polynomial_enum, gamma_count_mma, gamma_count_perms, gamma_count_ternary, gamma_count_trees,
    stirling_square_order,
};
use stirling_gamma::gamma::{gamma_extract, GammaTable};
use stirling_gamma::grammar::{c_polynomial_grammar, derivation_steps, gamma_polynomial_grammar};
use stirling_gamma::harness::{
    golden_examples, verify_many, CheckId, CheckReport, FamilySpec, Verdict, VerifyOptions,
    DEFAULT_COST_CAP,
};
use stirling_gamma::stirling::{enumerate_stirling, parse_word};
use stirling_gamma::tree::{gessel_forward, gessel_inverse};
use stirling_gamma::{Error, GesselTree, Multiset, Poly3, StirlingPermutation, Vars};

#[derive(Parser)]
#[command(
    name = "stirling-gamma",
    version,
    about = "Stirling permutations, Gessel trees and partial gamma-expansions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolyVia {
    Enum,
    Grammar,
}

#[derive(Clone, Copy, ValueEnum)]
enum GammaVia {
    Extract,
    Grammar,
    Trees,
    Perms,
    Mma,
    Ternary,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rules {
    Xyz,
    Uvz,
}

#[derive(Subcommand)]
enum Command {
    /// List the Stirling permutations of a multiset in lexicographic order.
    Enumerate {
        #[arg(long)]
        multiset: Multiset,
        #[arg(long)]
        stats: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// The Gessel tree of a permutation.
    Tree {
        #[arg(long)]
        perm: String,
    },
    /// The permutation read back from a Gessel tree.
    Perm {
        #[arg(long)]
        tree: String,
    },
    /// The Eulerian polynomial C_M(x, y, z).
    Poly {
        #[arg(long)]
        multiset: Multiset,
        #[arg(long, value_enum, default_value = "enum")]
        via: PolyVia,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// The partial gamma-coefficients of C_M.
    Gamma {
        #[arg(long)]
        multiset: Multiset,
        #[arg(long, value_enum, default_value = "extract")]
        via: GammaVia,
    },
    /// The orbit of a permutation's tree under the flips, and its canonical tree.
    Orbit {
        #[arg(long)]
        perm: String,
    },
    /// The pruned tree and its (u, v)-weight.
    Prune {
        #[arg(long)]
        tree: String,
    },
    /// Apply D_{k_1}, ..., D_{k_n} to x, printing each intermediate polynomial.
    GrammarDerive {
        #[arg(long, value_enum)]
        rules: Rules,
        #[arg(long = "k-seq", value_delimiter = ',', required = true)]
        k_seq: Vec<u32>,
    },
    /// Run theorem checks over a family of multisets.
    Verify {
        /// A check id, or `all`.
        #[arg(long)]
        check: String,
        #[arg(long = "max-n")]
        max_n: Option<usize>,
        #[arg(long = "max-k")]
        max_k: Option<u32>,
        #[arg(long = "max-K")]
        max_size: Option<usize>,
        /// Multisets separated by ';', e.g. "2,2;2,2,2".
        #[arg(long, conflicts_with_all = ["max_n", "max_k", "max_size"])]
        multisets: Option<String>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Add [7]_2 to the default campaign.
        #[arg(long)]
        with_seven_squared: bool,
        #[arg(long, default_value_t = DEFAULT_COST_CAP)]
        cost_cap: u128,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Replay the worked examples.
    Golden {
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

/// Failure modes that map to exit codes: input errors give 2, failed checks give 1.
enum Failure {
    Input(String),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn print_json<T: Serialize>(out: &mut impl Write, v: &T) -> Outcome {
    serde_json::to_writer(&mut *out, v).map_err(|e| Failure::Input(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn parse_perm(s: &str) -> Result<StirlingPermutation, Error> {
    StirlingPermutation::from_word(parse_word(s)?)
}

fn compact(s: &StirlingPermutation) -> String {
    let sep = if s.multiset().n() > 9 { " " } else { "" };
    s.word()
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(sep)
}

fn run(command: Command) -> Outcome {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match command {
        Command::Enumerate {
            multiset,
            stats,
            format,
        } => enumerate(&mut out, &multiset, stats, format),
        Command::Tree { perm } => {
            let t = gessel_forward(&parse_perm(&perm)?);
            writeln!(out, "{t}")?;
            Ok(())
        }
        Command::Perm { tree } => {
            let t: GesselTree = tree.parse()?;
            writeln!(out, "{}", compact(&gessel_inverse(&t)?))?;
            Ok(())
        }
        Command::Poly {
            multiset,
            via,
            format,
        } => {
            let p = match via {
                PolyVia::Enum => c_polynomial_enum(&multiset),
                PolyVia::Grammar => c_polynomial_grammar(&multiset),
            };
            write_poly(&mut out, &p, format)
        }
        Command::Gamma { multiset, via } => {
            let table = gamma(&multiset, via)?;
            print_json(&mut out, &table)
        }
        Command::Orbit { perm } => {
            let t = gessel_forward(&parse_perm(&perm)?);
            let members: Vec<OrbitMember> = orbit(&t)
                .into_iter()
                .map(|m| OrbitMember {
                    perm: compact(&gessel_inverse(&m).expect("orbit members are valid")),
                    canonical: is_canonical(&m),
                    tree: m.to_string(),
                })
                .collect();
            let report = OrbitReport {
                size: members.len(),
                canonical: canonical_representative(&t).to_string(),
                members,
            };
            print_json(&mut out, &report)
        }
        Command::Prune { tree } => {
            let t: GesselTree = tree.parse()?;
            let p = prune(&t);
            let weight = p
                .weight()
                .ok()
                .map(|(u, v)| Poly3::monomial(Vars::Uvz, [u, v, 0], 1).to_string());
            let report = PruneReport {
                pruned: p.to_string(),
                canonical: is_canonical(&t),
                weight,
                zleaf: p.zleaf,
            };
            print_json(&mut out, &report)
        }
        Command::GrammarDerive { rules, k_seq } => {
            if let Some(k) = k_seq.iter().find(|&&k| k == 0) {
                return Err(Failure::Input(format!(
                    "k-seq entries must be positive, got {k}"
                )));
            }
            let vars = match rules {
                Rules::Xyz => Vars::Xyz,
                Rules::Uvz => Vars::Uvz,
            };
            for (step, p) in derivation_steps(vars, &k_seq)?.iter().enumerate() {
                print_json(
                    &mut out,
                    &DerivationStep {
                        step: step + 1,
                        k: k_seq[step],
                        poly: p,
                    },
                )?;
                out.flush()?;
            }
            Ok(())
        }
        Command::Verify {
            check,
            max_n,
            max_k,
            max_size,
            multisets,
            jobs,
            with_seven_squared,
            cost_cap,
            format,
        } => {
            let ids: Vec<CheckId> = if check.eq_ignore_ascii_case("all") {
                CheckId::ALL.to_vec()
            } else {
                vec![check.parse()?]
            };
            let family = if let Some(list) = multisets {
                let members = list
                    .split(';')
                    .filter(|s| !s.trim().is_empty())
                    .map(str::parse)
                    .collect::<Result<Vec<Multiset>, Error>>()?;
                FamilySpec::list(members)
            } else if max_n.is_some() || max_k.is_some() || max_size.is_some() {
                let d = FamilySpec::default_campaign(false);
                let mut f = FamilySpec::grid(
                    max_n.unwrap_or(d.max_n),
                    max_k.unwrap_or(d.max_k),
                    max_size.unwrap_or(d.max_size),
                );
                if with_seven_squared {
                    f.list.push(Multiset::uniform(7, 2));
                }
                f
            } else {
                FamilySpec::default_campaign(with_seven_squared)
            };
            let reports = verify_many(&ids, &family, &VerifyOptions { jobs, cost_cap })?;
            match format {
                Format::Json if reports.len() == 1 => print_json(&mut out, &reports[0])?,
                Format::Json => print_json(&mut out, &reports)?,
                Format::Csv | Format::Text => verify_table(&mut out, &reports, format)?,
            }
            if reports.iter().all(CheckReport::is_pass) {
                Ok(())
            } else {
                Err(Failure::Checks)
            }
        }
        Command::Golden { format } => {
            let g = golden_examples();
            match format {
                Format::Json => print_json(&mut out, &g)?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut out);
                    for i in &g.items {
                        w.serialize(i)?;
                    }
                    w.flush()?;
                }
                Format::Text => {
                    for i in &g.items {
                        writeln!(out, "{:<32} {}", i.name, verdict_str(i.verdict))?;
                        if i.verdict == Verdict::Fail {
                            writeln!(out, "  expected: {}\n  actual:   {}", i.expected, i.actual)?;
                        }
                    }
                }
            }
            if g.verdict == Verdict::Pass {
                Ok(())
            } else {
                Err(Failure::Checks)
            }
        }
    }
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
        Verdict::Skip => "SKIP",
    }
}

#[derive(Serialize)]
struct OrbitMember {
    tree: String,
    perm: String,
    canonical: bool,
}

#[derive(Serialize)]
struct OrbitReport {
    size: usize,
    canonical: String,
    members: Vec<OrbitMember>,
}

#[derive(Serialize)]
struct PruneReport {
    pruned: String,
    canonical: bool,
    weight: Option<String>,
    zleaf: usize,
}

#[derive(Serialize)]
struct DerivationStep<'a> {
    step: usize,
    k: u32,
    poly: &'a Poly3,
}

#[derive(Serialize)]
struct PermRow {
    perm: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    asc: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    des: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    plat: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dfall: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    aplat: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dplat: Option<usize>,
}

fn enumerate(out: &mut impl Write, m: &Multiset, stats: bool, format: Format) -> Outcome {
    let rows = enumerate_stirling(m).map(|s| {
        let p = stats.then(|| s.statistics());
        PermRow {
            perm: compact(&s),
            asc: p.as_ref().map(|p| p.asc),
            des: p.as_ref().map(|p| p.des),
            plat: p.as_ref().map(|p| p.plat),
            dfall: p.as_ref().map(|p| p.dfall),
            aplat: p.as_ref().map(|p| p.aplat),
            dplat: p.as_ref().map(|p| p.dplat),
        }
    });
    match format {
        Format::Json => {
            for r in rows {
                print_json(out, &r)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Text => {
            for r in rows {
                match (r.asc, r.des, r.plat, r.dfall, r.aplat, r.dplat) {
                    (Some(a), Some(d), Some(p), Some(f), Some(ap), Some(dp)) => writeln!(
                        out,
                        "{} asc={a} des={d} plat={p} dfall={f} aplat={ap} dplat={dp}",
                        r.perm
                    )?,
                    _ => writeln!(out, "{}", r.perm)?,
                }
            }
        }
    }
    Ok(())
}

fn write_poly(out: &mut impl Write, p: &Poly3, format: Format) -> Outcome {
    match format {
        Format::Json => print_json(out, p),
        Format::Text => {
            writeln!(out, "{p}")?;
            Ok(())
        }
        Format::Csv => {
            let names = p.vars().names();
            let mut w = csv::Writer::from_writer(out);
            w.write_record([names[0], names[1], names[2], "coeff"])?;
            for (e, c) in p.terms() {
                w.write_record([
                    e[0].to_string(),
                    e[1].to_string(),
                    e[2].to_string(),
                    c.to_string(),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn gamma(m: &Multiset, via: GammaVia) -> Result<GammaTable, Error> {
    Ok(match via {
        GammaVia::Extract => gamma_extract(&c_polynomial_enum(m), m.size())?,
        GammaVia::Grammar => GammaTable::from_uvz(&gamma_polynomial_grammar(m)?, m.size())?,
        GammaVia::Trees => gamma_count_trees(m),
        GammaVia::Perms => gamma_count_perms(m),
        GammaVia::Mma => gamma_count_mma(stirling_square_order(m)?),
        GammaVia::Ternary => gamma_count_ternary(stirling_square_order(m)?),
    })
}

fn verify_table(out: &mut impl Write, reports: &[CheckReport], format: Format) -> Outcome {
    if let Format::Csv = format {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["check", "multiset", "verdict", "items", "elapsed_ms"])?;
        for r in reports {
            for m in &r.results {
                w.write_record([
                    r.check.as_str(),
                    &m.multiset,
                    verdict_str(m.verdict),
                    &m.items.to_string(),
                    &format!("{:.3}", m.elapsed_ms),
                ])?;
            }
        }
        w.flush()?;
        return Ok(());
    }
    for r in reports {
        writeln!(
            out,
            "{:<10} {}  pass={} fail={} skip={}  {:.0} ms",
            r.check.as_str(),
            verdict_str(r.verdict),
            r.passed,
            r.failed,
            r.skipped,
            r.elapsed_ms
        )?;
        for m in r.results.iter().filter(|m| m.verdict == Verdict::Fail) {
            if let Some(c) = &m.counterexample {
                writeln!(out, "  {} {}: {} != {}", c.multiset, c.what, c.lhs, c.rhs)?;
                writeln!(out, "  reproduce: {}", c.reproduce)?;
            }
        }
    }
    Ok(())
}
