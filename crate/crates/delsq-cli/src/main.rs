//! `delsq`: invariants of deleted squares of 3-dimensional lens spaces.
//!
//! Subcommands: `massey` (triple Massey product tables), `cs`
//! (Cheeger-Simons character values), `homology` ((co)homology tables),
//! `heq` (admissible scalar classification), `compare` (the full
//! obstruction search for one pair), `survey` (batch comparison over all
//! homotopy-equivalent pairs up to a prime bound).
//!
//! Exit codes: 0 for a decisive verdict (obstructed or not homotopy
//! equivalent), 10 when solutions exist (inconclusive), 2 on usage errors.
//! The environment variable `DELSQ_MAX_P` overrides the search bound.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use delsq::chern_simons::{self, character_variety};
use delsq::heq;
use delsq::homology;
use delsq::massey::MasseyStructure;
use delsq::naturality::{self, SearchOptions, SearchReport, Verdict};
use delsq::{CycloPoly, LensPair};

#[derive(Parser)]
#[command(
    name = "delsq",
    version,
    about = "Exact invariants of deleted squares of 3-dimensional lens spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Write a JSON report to this path in addition to the text output.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the table of Massey products <t^k, 1, t^j> for L(p, q).
    Massey {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        /// Evaluate a single product <t^a, t^b, t^c> instead of the table.
        #[arg(long, value_name = "A,B,C")]
        triple: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print Cheeger-Simons character values on H_3 of the deleted square.
    Cs {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print the (co)homology tables for L, L x L and the deleted square.
    Homology {
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Classify the admissible character-level scalars for a pair.
    Heq {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long = "qp")]
        q_prime: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the full obstruction search for one pair of lens spaces.
    Compare {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long = "qp")]
        q_prime: u64,
        /// Restrict candidates to units (pullback an isomorphism).
        #[arg(long)]
        require_unit: bool,
        /// Worker threads over the candidate space.
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare every homotopy-equivalent pair for all odd primes up to a
    /// bound.
    Survey {
        #[arg(long = "p-max")]
        p_max: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Prints a line to stdout, exiting quietly when the consumer has closed
/// the pipe (e.g. `delsq ... | head`).
macro_rules! outln {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let mut out = std::io::stdout().lock();
        if writeln!(out, $($arg)*).is_err() {
            std::process::exit(0);
        }
    }};
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Massey { p, q, triple, output } => run_massey(p, q, triple, output),
        Command::Cs { p, q, output } => run_cs(p, q, output),
        Command::Homology { p, output } => run_homology(p, output),
        Command::Heq { p, q, q_prime, output } => run_heq(p, q, q_prime, output),
        Command::Compare {
            p,
            q,
            q_prime,
            require_unit,
            threads,
            output,
        } => run_compare(p, q, q_prime, require_unit, threads, output),
        Command::Survey { p_max, threads, output } => run_survey(p_max, threads, output),
    }
}

/// The search bound: DELSQ_MAX_P when set, otherwise the library default.
fn max_search_p() -> Result<u64, Box<dyn std::error::Error>> {
    match std::env::var("DELSQ_MAX_P") {
        Ok(s) => Ok(s
            .parse()
            .map_err(|_| format!("DELSQ_MAX_P must be an integer, got {s:?}"))?),
        Err(_) => Ok(naturality::DEFAULT_MAX_SEARCH_P),
    }
}

fn exit_code_for(verdict: Verdict) -> ExitCode {
    match verdict {
        Verdict::LensSpacesNotHomotopyEquivalent | Verdict::DeletedSquaresObstructed => {
            ExitCode::SUCCESS
        }
        Verdict::InconclusiveSolutionsExist => ExitCode::from(10),
    }
}

fn write_json(output: &OutputArgs, value: &serde_json::Value) -> Result<(), Box<dyn std::error::Error>> {
    if let Some(path) = &output.json {
        fs::write(path, format!("{:#}\n", value))?;
    }
    Ok(())
}

fn note_normalization(pair: &LensPair) {
    if pair.q_reflected() {
        outln!(
            "note: q = {} normalized to {} (same space, mirrored convention)",
            pair.q(),
            pair.q_norm()
        );
    }
    if pair.q_prime_reflected() {
        outln!(
            "note: q' = {} normalized to {} (same space, mirrored convention)",
            pair.q_prime(),
            pair.q_prime_norm()
        );
    }
}

fn print_table(header: Vec<String>, rows: Vec<Vec<String>>) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let fmt_row = |cells: &[String]| {
        cells
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{:<width$}", c, width = widths[i]))
            .collect::<Vec<_>>()
            .join("  ")
    };
    outln!("{}", fmt_row(&header));
    outln!("{}", "-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
    for row in &rows {
        outln!("{}", fmt_row(row));
    }
}

fn parse_triple(s: &str) -> Result<(u64, u64, u64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("--triple expects A,B,C, got {s:?}"));
    }
    let nums: Result<Vec<u64>, _> = parts.iter().map(|t| t.trim().parse::<u64>()).collect();
    let nums = nums.map_err(|_| format!("--triple expects three integers, got {s:?}"))?;
    Ok((nums[0], nums[1], nums[2]))
}

fn run_massey(
    p: u64,
    q: u64,
    triple: Option<String>,
    output: OutputArgs,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let pair = LensPair::new(p, q, q)?;
    note_normalization(&pair);
    let mu = MasseyStructure::new(p, pair.q_norm())?;

    if let Some(spec) = triple {
        let (a, b, c) = parse_triple(&spec)?;
        let value = mu.monomial_product(a, b, c);
        let diagonal = (a % p) == (b % p) && (b % p) == (c % p);
        outln!("{value}");
        if diagonal {
            outln!("note: fully diagonal triple; value is the 0 convention");
        }
        outln!(
            "indeterminacy: spanned by {} and {}",
            CycloPoly::monomial(p, a),
            CycloPoly::monomial(p, c)
        );
        let json = json!({
            "p": p,
            "q": pair.q_norm(),
            "triple": [a % p, b % p, c % p],
            "value": value.to_hex(),
            "text": value.to_string(),
            "diagonal_convention": diagonal,
            "indeterminacy": [CycloPoly::monomial(p, a).to_hex(), CycloPoly::monomial(p, c).to_hex()],
        });
        write_json(&output, &json)?;
        return Ok(ExitCode::SUCCESS);
    }

    outln!("Massey products <t^k, 1, t^j> for L({}, {}):", p, pair.q_norm());
    let mut rows = Vec::new();
    let mut cells_json = Vec::new();
    for k in 0..p {
        for j in 0..p {
            let diagonal = k == 0 && j == 0;
            let value = mu.monomial_product(k, 0, j);
            let x = CycloPoly::monomial(p, k);
            let z = CycloPoly::monomial(p, j);
            rows.push(vec![
                k.to_string(),
                j.to_string(),
                if diagonal {
                    format!("{value} (convention)")
                } else {
                    value.to_string()
                },
                format!("{{0, {x}, {z}, sum}}"),
            ]);
            cells_json.push(json!({
                "k": k,
                "j": j,
                "value": value.to_hex(),
                "text": value.to_string(),
                "diagonal_convention": diagonal,
                "indeterminacy": [x.to_hex(), z.to_hex()],
            }));
        }
    }
    print_table(
        vec![
            "k".into(),
            "j".into(),
            "<t^k,1,t^j>".into(),
            "indeterminacy".into(),
        ],
        rows,
    );
    outln!(
        "all products vanish up to indeterminacy: {}",
        mu.all_products_vanish()
    );
    let json = json!({
        "p": p,
        "q": pair.q_norm(),
        "all_products_vanish": mu.all_products_vanish(),
        "table": cells_json,
    });
    write_json(&output, &json)?;
    Ok(ExitCode::SUCCESS)
}

fn run_cs(p: u64, q: u64, output: OutputArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let pair = LensPair::new(p, q, q)?;
    note_normalization(&pair);
    let q = pair.q_norm();
    outln!(
        "Cheeger-Simons values on H_3 of the deleted square of L({p}, {q}) \
         ({} conjugacy classes; torsion sign: plus convention):",
        (p * p).div_ceil(2)
    );
    let mut rows = Vec::new();
    let mut values_json = Vec::new();
    for rep in character_variety(p) {
        let v = chern_simons::cs_on_deleted_square(p, q, &rep)?;
        rows.push(vec![
            rep.k().to_string(),
            rep.l().to_string(),
            v.on_free.to_string(),
            v.on_torsion.to_string(),
        ]);
        values_json.push(json!({
            "k": rep.k(),
            "l": rep.l(),
            "on_free": v.on_free.to_string(),
            "on_torsion": v.on_torsion.to_string(),
        }));
    }
    print_table(
        vec!["k".into(), "l".into(), "on_free".into(), "on_torsion".into()],
        rows,
    );
    let json = json!({
        "p": p,
        "q": q,
        "classes": (p * p).div_ceil(2),
        "torsion_sign_convention": "+",
        "values": values_json,
    });
    write_json(&output, &json)?;
    Ok(ExitCode::SUCCESS)
}

fn run_homology(p: u64, output: OutputArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    // validate through the pair constructor (q = 1 is always coprime)
    LensPair::new(p, 1, 1)?;
    let rows = |f: &dyn Fn(u32) -> homology::AbGroup, top: u32| -> Vec<Vec<String>> {
        (0..=top)
            .map(|k| vec![k.to_string(), f(k).to_string()])
            .collect()
    };
    outln!("H_k of L({p}, q):");
    print_table(
        vec!["k".into(), "group".into()],
        rows(&|k| homology::homology_lens(p, k), 3),
    );
    outln!("\nH_k of the square L x L:");
    print_table(
        vec!["k".into(), "group".into()],
        rows(&|k| homology::homology_square(p, k), 6),
    );
    outln!("\nH_k of the deleted square:");
    print_table(
        vec!["k".into(), "group".into()],
        rows(&|k| homology::homology_delsq(p, k), 5),
    );
    outln!("\nH^k of the deleted square:");
    print_table(
        vec!["k".into(), "group".into()],
        rows(&|k| homology::cohomology_delsq(p, k), 6),
    );
    outln!("\nH^k of the universal cover of the deleted square:");
    print_table(
        vec!["k".into(), "group".into()],
        rows(&|k| homology::cohomology_cover(p, k), 5),
    );
    let inc = homology::i_star_h3(p);
    outln!("\nInclusion on H_3: (1,0) -> (1,1,0), (0,1) -> (0,0,1)");
    let to_json = |f: &dyn Fn(u32) -> homology::AbGroup, top: u32| -> Vec<serde_json::Value> {
        (0..=top)
            .map(|k| json!({"k": k, "group": serde_json::to_value(f(k)).unwrap()}))
            .collect()
    };
    let json = json!({
        "p": p,
        "lens_homology": to_json(&|k| homology::homology_lens(p, k), 3),
        "square_homology": to_json(&|k| homology::homology_square(p, k), 6),
        "deleted_square_homology": to_json(&|k| homology::homology_delsq(p, k), 5),
        "deleted_square_cohomology": to_json(&|k| homology::cohomology_delsq(p, k), 6),
        "cover_cohomology": to_json(&|k| homology::cohomology_cover(p, k), 5),
        "inclusion_h3": serde_json::to_value(inc).unwrap(),
    });
    write_json(&output, &json)?;
    Ok(ExitCode::SUCCESS)
}

fn run_heq(
    p: u64,
    q: u64,
    q_prime: u64,
    output: OutputArgs,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let pair = LensPair::new(p, q, q_prime)?;
    note_normalization(&pair);
    let admissible = heq::classify(&pair);
    let equivalent = !admissible.is_empty();
    outln!(
        "L({p}, {}) and L({p}, {}) homotopy equivalent: {equivalent}",
        pair.q_norm(),
        pair.q_prime_norm()
    );
    if equivalent {
        let rows = admissible
            .iter()
            .map(|a| {
                vec![
                    a.alpha.to_string(),
                    a.eps.to_string(),
                    a.beta.to_string(),
                ]
            })
            .collect();
        print_table(vec!["alpha".into(), "eps".into(), "beta".into()], rows);
    }
    let json = json!({
        "admissible": serde_json::to_value(&admissible).unwrap(),
        "lens_homotopy_equivalent": equivalent,
    });
    write_json(&output, &json)?;
    Ok(ExitCode::SUCCESS)
}

fn print_report(report: &SearchReport) {
    let pair = &report.pair;
    outln!(
        "comparing deleted squares of L({}, {}) and L({}, {})",
        pair.p(),
        pair.q_norm(),
        pair.p(),
        pair.q_prime_norm()
    );
    if heq::lens_spaces_homeomorphic(pair) {
        outln!("note: the lens spaces are homeomorphic; any verdict other than");
        outln!("      solutions-exist would indicate a defect");
    }
    for a in &report.per_alpha {
        let sols = if a.solutions.is_empty() {
            "none".to_string()
        } else {
            a.solutions
                .iter()
                .map(|f| f.to_string())
                .collect::<Vec<_>>()
                .join("; ")
        };
        outln!(
            "alpha = {:>2} (eps = {}, beta = {:>2}): {} solution(s) in {} orbit(s): {}",
            a.alpha.alpha,
            a.alpha.eps,
            a.alpha.beta,
            a.solutions.len(),
            a.orbit_count,
            sols
        );
        if a.diagonal_terms > 0 {
            outln!(
                "  note: {} constraint term(s) used the <1,1,1> = 0 convention",
                a.diagonal_terms
            );
        }
    }
    outln!(
        "verdict: {}  ({} candidates, {} ms)",
        report.verdict, report.candidates_tested, report.elapsed_ms
    );
}

fn run_compare(
    p: u64,
    q: u64,
    q_prime: u64,
    require_unit: bool,
    threads: usize,
    output: OutputArgs,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let pair = LensPair::new(p, q, q_prime)?;
    note_normalization(&pair);
    let options = SearchOptions {
        require_unit,
        dedupe_orbits: false,
        threads,
        max_p: max_search_p()?,
    };
    let report = naturality::compare_deleted_squares(&pair, &options)?;
    print_report(&report);
    write_json(&output, &serde_json::to_value(&report)?)?;
    Ok(exit_code_for(report.verdict))
}

fn run_survey(
    p_max: u64,
    threads: usize,
    output: OutputArgs,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let max_p = max_search_p()?;
    let options = SearchOptions {
        require_unit: false,
        dedupe_orbits: false,
        threads,
        max_p,
    };
    let mut rows = Vec::new();
    let mut rows_json = Vec::new();
    let mut stats = (0u64, 0u64, 0u64, 0u64); // distinguishing pairs, obstructed, inconclusive, skipped
    for p in (3..=p_max).filter(|&n| delsq::modp::is_odd_prime(n)) {
        let half = (p - 1) / 2;
        for q in 1..=half {
            for q_prime in q + 1..=half {
                let pair = LensPair::new(p, q, q_prime)?;
                if !heq::lens_homotopy_equivalent(&pair) {
                    continue;
                }
                let homeomorphic = heq::lens_spaces_homeomorphic(&pair);
                let (verdict_text, verdict_json, candidates, ms) = if p > max_p {
                    let estimate = format!("2^{}", p - 1);
                    stats.3 += 1;
                    (
                        format!("SKIPPED (~{estimate} candidates per alpha)"),
                        json!(null),
                        json!(estimate),
                        json!(null),
                    )
                } else {
                    let report = naturality::compare_deleted_squares(&pair, &options)?;
                    if !homeomorphic {
                        stats.0 += 1;
                        match report.verdict {
                            Verdict::DeletedSquaresObstructed => stats.1 += 1,
                            Verdict::InconclusiveSolutionsExist => stats.2 += 1,
                            Verdict::LensSpacesNotHomotopyEquivalent => {}
                        }
                    }
                    (
                        report.verdict.to_string(),
                        json!(report.verdict),
                        json!(report.candidates_tested),
                        json!(report.elapsed_ms),
                    )
                };
                rows.push(vec![
                    p.to_string(),
                    q.to_string(),
                    q_prime.to_string(),
                    if homeomorphic { "yes".into() } else { "no".into() },
                    verdict_text.clone(),
                ]);
                rows_json.push(json!({
                    "p": p,
                    "q": q,
                    "q_prime": q_prime,
                    "homeomorphic": homeomorphic,
                    "verdict": verdict_json,
                    "candidates_tested": candidates,
                    "elapsed_ms": ms,
                }));
            }
        }
    }
    outln!(
        "homotopy-equivalent pairs with q < q' < p/2, odd primes p <= {p_max} \
         (homeomorphic pairs annotated, excluded from statistics):"
    );
    if rows.is_empty() {
        outln!("(no pairs)");
    } else {
        print_table(
            vec![
                "p".into(),
                "q".into(),
                "q'".into(),
                "homeo".into(),
                "verdict".into(),
            ],
            rows,
        );
    }
    outln!(
        "distinguishing pairs: {}; obstructed: {}; inconclusive: {}; skipped: {}",
        stats.0, stats.1, stats.2, stats.3
    );
    let json = json!({
        "p_max": p_max,
        "max_search_p": max_p,
        "rows": rows_json,
        "summary": {
            "distinguishing_pairs": stats.0,
            "obstructed": stats.1,
            "inconclusive": stats.2,
            "skipped": stats.3,
        },
    });
    write_json(&output, &json)?;
    Ok(ExitCode::SUCCESS)
}
