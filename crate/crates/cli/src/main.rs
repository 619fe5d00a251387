//! Command-line driver: builds the projective-line groups, enumerates
//! string C-group generator tuples (regular polytopes), runs subgroup
//! censuses, and verifies the headline classification facts.
//!
//! Exit codes: 0 success / all checks pass, 1 an expectation failed,
//! 2 invalid configuration, 3 a resource cap was exceeded.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use polyatlas_core::census::run_census;
use polyatlas_core::cgsearch::{enumerate_polytopes, PolytopeRecord};
use polyatlas_core::engine::FiniteGroup;
use polyatlas_core::error::Error as CoreError;
use polyatlas_core::gf::{factor_prime_power, make_field};
use polyatlas_core::projgroups::{build_group, GroupKind, ProjLine};
use report::{enum_row, CensusCsvRow, RunMeta};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(
    name = "polyatlas",
    version,
    about = "Regular polytopes and subgroup censuses for projective-line groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate regular-polytope generator tuples of a given rank
    Enumerate(EnumerateArgs),
    /// Compare closed-form subgroup counts against the brute-force lattice
    Census(CensusArgs),
    /// Check that rank 4/5 polytopes for the pgl family exist only at q=5
    VerifyTheorem(VerifyTheoremArgs),
    /// Run the fixed battery of special-group checks
    SpecialChecks(SpecialChecksArgs),
    /// Print the canonical field model for a prime power
    FieldInfo(FieldInfoArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DedupMode {
    /// One record per conjugation orbit
    Iso,
    /// Additionally identify a tuple with its reversal
    IsoDual,
}

impl DedupMode {
    fn label(self) -> &'static str {
        match self {
            DedupMode::Iso => "iso",
            DedupMode::IsoDual => "iso-dual",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Group family: psl, pgl, psigmal, pslc, or pgammal
    #[arg(long)]
    group: String,
    /// Field size (a prime power)
    #[arg(long)]
    q: u64,
    /// Polytope rank to search (3..=5)
    #[arg(long)]
    rank: u32,
    #[arg(long, value_enum, default_value = "iso-dual")]
    dedup: DedupMode,
    /// Worker threads (0 = all cores); never changes the results
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Report file; rows go to stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Hard bound on group closure size
    #[arg(long, default_value_t = 1_000_000)]
    closure_cap: u64,
    /// Permutes work distribution only; results are identical for any value
    #[arg(long, default_value_t = 0)]
    seed_partition: u64,
}

#[derive(Args)]
struct CensusArgs {
    /// Group family: psl or pgl
    #[arg(long)]
    group: String,
    /// Field size (a prime power)
    #[arg(long)]
    q: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Largest group order accepted for full lattice enumeration
    #[arg(long, default_value_t = 1_000)]
    census_cap: u64,
    #[arg(long, default_value_t = 1_000_000)]
    closure_cap: u64,
}

#[derive(Args)]
struct VerifyTheoremArgs {
    /// Largest q to sweep (odd prime powers from 3 up)
    #[arg(long, default_value_t = 13)]
    qmax: u64,
    /// Refuse sweeps beyond this q; raise it along with --closure-cap for
    /// bigger runs
    #[arg(long, default_value_t = 13)]
    qmax_cap: u64,
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long, default_value_t = 1_000_000)]
    closure_cap: u64,
}

#[derive(Args)]
struct SpecialChecksArgs {
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long, default_value_t = 1_000_000)]
    closure_cap: u64,
}

#[derive(Args)]
struct FieldInfoArgs {
    /// Field size (a prime power)
    #[arg(long)]
    q: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<CoreError>() {
        Some(
            CoreError::ClosureCapExceeded(_)
            | CoreError::CensusCapExceeded { .. }
            | CoreError::TableTooLarge(_)
            | CoreError::SearchTooLarge { .. },
        ) => EXIT_CAP,
        _ => EXIT_USAGE,
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Enumerate(args) => with_pool(args.workers, || cmd_enumerate(&args)),
        Command::Census(args) => cmd_census(&args),
        Command::VerifyTheorem(args) => with_pool(args.workers, || cmd_verify_theorem(&args)),
        Command::SpecialChecks(args) => with_pool(args.workers, || cmd_special_checks(&args)),
        Command::FieldInfo(args) => cmd_field_info(&args),
    }
}

fn with_pool<F: FnOnce() -> anyhow::Result<u8> + Send>(workers: usize, f: F) -> anyhow::Result<u8> {
    if workers == 0 {
        return f();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .context("building worker pool")?;
    pool.install(f)
}

fn parse_kind(name: &str) -> anyhow::Result<GroupKind> {
    GroupKind::parse(name).ok_or_else(|| {
        anyhow!("unknown group {name:?} (expected psl, pgl, psigmal, pslc, or pgammal)")
    })
}

/// Builds and closes the group together with its deduplication action (the
/// full semilinear closure on the same line).
fn close_with_dedup(
    kind: GroupKind,
    q: u64,
    closure_cap: u64,
) -> anyhow::Result<(FiniteGroup, FiniteGroup, bool)> {
    let (p, r) = factor_prime_power(q)?;
    let line = ProjLine::new(make_field(p, r)?);
    let g = build_group(&line, kind)?.close(closure_cap as usize)?;
    let dedup = build_group(&line, GroupKind::PGammaL)?.close(closure_cap as usize)?;
    Ok((g, dedup, p == 2))
}

fn cmd_enumerate(args: &EnumerateArgs) -> anyhow::Result<u8> {
    let kind = parse_kind(&args.group)?;
    let (g, dedup, char2) = close_with_dedup(kind, args.q, args.closure_cap)?;
    let e = enumerate_polytopes(&g, &dedup, args.rank, args.seed_partition)?;

    let chosen: Vec<&PolytopeRecord> = match args.dedup {
        DedupMode::Iso => e.records.iter().collect(),
        DedupMode::IsoDual => e.iso_dual_records(),
    };
    let rows: Vec<_> = chosen
        .iter()
        .map(|rec| enum_row(kind.name(), args.q, args.rank, &g, rec))
        .collect();

    let mut meta = RunMeta::new("enumerate");
    meta.group = Some(kind.name().to_string());
    meta.q = Some(args.q);
    meta.rank = Some(args.rank);
    meta.dedup = Some(args.dedup.label().to_string());
    meta.closure_cap = Some(args.closure_cap);
    meta.characteristic_two = char2;
    meta.counts = serde_json::json!({
        "iso": e.iso_count(),
        "iso_dual": e.iso_dual_count(),
    });

    match args.format {
        Format::Csv => report::write_csv(args.out.as_deref(), &rows, &meta)?,
        Format::Json => report::write_json(args.out.as_deref(), &rows, &meta)?,
    }
    eprintln!(
        "{} q={} rank={}: {} up to isomorphism, {} up to isomorphism and duality{}",
        kind.name(),
        args.q,
        args.rank,
        e.iso_count(),
        e.iso_dual_count(),
        if char2 { " (characteristic 2)" } else { "" },
    );
    Ok(0)
}

fn cmd_census(args: &CensusArgs) -> anyhow::Result<u8> {
    let kind = parse_kind(&args.group)?;
    if !matches!(kind, GroupKind::Psl | GroupKind::Pgl) {
        return Err(anyhow!("census supports only psl and pgl"));
    }
    let report = run_census(kind, args.q, args.census_cap, args.closure_cap as usize)?;

    let rows: Vec<CensusCsvRow> = report
        .rows
        .iter()
        .map(|r| CensusCsvRow {
            group: report.group.clone(),
            q: report.q,
            family: r.family.clone(),
            scope: r.scope.label(),
            rule: r.rule.clone(),
            predicted: r.predicted.map_or(String::new(), |v| v.to_string()),
            observed: r.observed,
            predicted_classes: r.predicted_classes.map_or(String::new(), |v| v.to_string()),
            observed_classes: r.observed_classes,
            matched: r.matched.map_or("-".to_string(), |m| {
                if m { "yes" } else { "no" }.to_string()
            }),
            note: r.note.clone().unwrap_or_default(),
        })
        .collect();

    let mut meta = RunMeta::new("census");
    meta.group = Some(report.group.clone());
    meta.q = Some(report.q);
    meta.census_cap = Some(args.census_cap);
    meta.closure_cap = Some(args.closure_cap);
    meta.characteristic_two = args.q.is_multiple_of(2);
    meta.counts = serde_json::json!({
        "total_subgroups": report.total_subgroups,
        "all_match": report.all_match,
    });

    match args.format {
        Format::Csv => report::write_csv(args.out.as_deref(), &rows, &meta)?,
        Format::Json => report::write_json(args.out.as_deref(), &rows, &meta)?,
    }
    eprintln!(
        "{} q={}: {} subgroups, formula rows {}",
        report.group,
        report.q,
        report.total_subgroups,
        if report.all_match {
            "all match"
        } else {
            "MISMATCH"
        },
    );
    Ok(if report.all_match {
        0
    } else {
        EXIT_CHECK_FAILED
    })
}

fn odd_prime_powers_up_to(qmax: u64) -> Vec<u64> {
    (3..=qmax)
        .filter(|&q| q % 2 == 1 && factor_prime_power(q).is_ok())
        .collect()
}

fn cmd_verify_theorem(args: &VerifyTheoremArgs) -> anyhow::Result<u8> {
    if args.qmax > args.qmax_cap {
        return Err(anyhow!(
            "qmax {} exceeds the feasibility cap {} (raise --qmax-cap to go further)",
            args.qmax,
            args.qmax_cap
        ));
    }
    let mut pass = true;
    for q in odd_prime_powers_up_to(args.qmax) {
        let (g, dedup, _) = close_with_dedup(GroupKind::Pgl, q, args.closure_cap)?;
        for rank in [4, 5] {
            let e = enumerate_polytopes(&g, &dedup, rank, 0)?;
            let expect_simplex = q == 5 && rank == 4;
            let ok = if expect_simplex {
                e.iso_dual_count() == 1
                    && e.records.len() == 1
                    && e.records[0].schlafli.entries() == [3, 3, 3]
            } else {
                e.records.is_empty()
            };
            let detail = if expect_simplex {
                "expected exactly the {3,3,3} simplex".to_string()
            } else {
                format!("expected none, found {}", e.iso_count())
            };
            println!(
                "pgl q={q} rank={rank}: {} ({detail})",
                if ok { "PASS" } else { "FAIL" },
            );
            pass &= ok;
        }
    }
    println!(
        "verify-theorem qmax={}: {}",
        args.qmax,
        if pass { "PASS" } else { "FAIL" }
    );
    Ok(if pass { 0 } else { EXIT_CHECK_FAILED })
}

fn cmd_special_checks(args: &SpecialChecksArgs) -> anyhow::Result<u8> {
    let cap = args.closure_cap;
    let mut pass = true;
    let mut check = |name: &str, ok: bool, detail: String| {
        println!("{}: {} ({detail})", name, if ok { "PASS" } else { "FAIL" });
        pass &= ok;
    };

    // the twisted extension for q=9 is M10: not generated by involutions
    {
        let (g, _, _) = close_with_dedup(GroupKind::PslC, 9, cap)?;
        let (generated, order) = polyatlas_core::census::verify_involution_generation(&g);
        check(
            "pslc q=9 not involution-generated",
            !generated && order == 360,
            format!("involution closure has order {order}"),
        );
    }

    // the twisted extension for q=25 admits no polytope of rank 3 or 4
    {
        let (g, dedup, _) = close_with_dedup(GroupKind::PslC, 25, cap)?;
        for rank in [3, 4] {
            let e = enumerate_polytopes(&g, &dedup, rank, 0)?;
            check(
                &format!("pslc q=25 rank={rank} empty"),
                e.records.is_empty(),
                format!("found {}", e.iso_count()),
            );
        }
    }

    // the field-automorphism extension for q=9 has ranks 4 and 5
    {
        let (g, dedup, _) = close_with_dedup(GroupKind::PSigmaL, 9, cap)?;
        for rank in [4, 5] {
            let e = enumerate_polytopes(&g, &dedup, rank, 0)?;
            check(
                &format!("psigmal q=9 rank={rank} non-empty"),
                !e.records.is_empty(),
                format!("found {}", e.iso_count()),
            );
        }
    }

    // no polyhedra for psl at q=7 and q=9
    for q in [7, 9] {
        let (g, dedup, _) = close_with_dedup(GroupKind::Psl, q, cap)?;
        let e = enumerate_polytopes(&g, &dedup, 3, 0)?;
        check(
            &format!("psl q={q} rank=3 empty"),
            e.records.is_empty(),
            format!("found {}", e.iso_count()),
        );
    }

    // polyhedra for pgl at every prime power 2 < q <= 9
    for q in [3, 4, 5, 7, 8, 9] {
        let (g, dedup, _) = close_with_dedup(GroupKind::Pgl, q, cap)?;
        let e = enumerate_polytopes(&g, &dedup, 3, 0)?;
        check(
            &format!("pgl q={q} rank=3 non-empty"),
            !e.records.is_empty(),
            format!("found {}", e.iso_count()),
        );
    }

    // rank 4 for psl at q=11 contains the {3,5,3} 11-cell
    {
        let (g, dedup, _) = close_with_dedup(GroupKind::Psl, 11, cap)?;
        let e = enumerate_polytopes(&g, &dedup, 4, 0)?;
        check(
            "psl q=11 rank=4 contains {3,5,3}",
            e.records.iter().any(|r| r.schlafli.entries() == [3, 5, 3]),
            format!("found {} records", e.iso_count()),
        );
    }

    println!("special-checks: {}", if pass { "PASS" } else { "FAIL" });
    Ok(if pass { 0 } else { EXIT_CHECK_FAILED })
}

fn cmd_field_info(args: &FieldInfoArgs) -> anyhow::Result<u8> {
    let (p, r) = factor_prime_power(args.q)?;
    let f = make_field(p, r)?;
    let modulus: Vec<String> = f.modulus().iter().map(|c| c.to_string()).collect();
    match args.format {
        Format::Json => {
            let doc = serde_json::json!({
                "q": f.q(),
                "p": f.p(),
                "r": f.r(),
                "modulus_coefficients": f.modulus(),
                "characteristic_two": p == 2,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        Format::Csv => {
            println!("q,p,r,modulus");
            println!("{},{},{},{}", f.q(), f.p(), f.r(), modulus.join(" "));
        }
    }
    Ok(0)
}
