use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use cubal::counting::{free_algebra_size, size_table, SizeRow};
use cubal::export::{atoms_export, lx_hasse_dot, lx_table};
use cubal::free::{format_label, FreeInstance, MAX_BUILD_K, MAX_ENUMERATE_K};
use cubal::suite::{self, CheckLine};
use cubal::table::{
    check_cubic_axioms, check_mr_axiom, AxiomOutcome, CheckReport, Coverage, CubicTable,
};

#[derive(Parser)]
#[command(
    name = "cubal",
    version,
    about = "Free cubic implication algebras: construction, counting and checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Size of the free cubic implication algebra on m generators.
    Size {
        #[arg(long)]
        generators: usize,
        /// Also list rows for 1..=N generators.
        #[arg(long, value_name = "N")]
        table: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Build B_k and report its atoms and generator images.
    Build {
        #[arg(long)]
        k: usize,
        /// Enumerate L(X) (k <= 2).
        #[arg(long)]
        enumerate: bool,
        /// Write the JSON dump here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Run the generation check and the structural checks for B_k.
    Verify {
        #[arg(long)]
        k: usize,
        /// Allow k = 2 (56943-element closure).
        #[arg(long)]
        long: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check the cubic and MR axioms on a table file.
    Check {
        #[arg(long)]
        input: PathBuf,
        /// Sampled tuples when the carrier is too big for exhaustive checks.
        #[arg(long, default_value_t = Coverage::default().samples)]
        samples: usize,
        #[arg(long, default_value_t = Coverage::default().seed)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Write L(X) as a table or Hasse diagram, or the atoms of B_k.
    Export {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        what: What,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Table,
    Hasse,
    Atoms,
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn cmd_size(generators: usize, table: Option<usize>, json: bool) -> Result<bool> {
    if generators == 0 {
        bail!("--generators must be at least 1: the construction starts from a non-empty generating set");
    }
    let size = free_algebra_size(generators)?;
    let rows: Vec<SizeRow> = match table {
        Some(n) => size_table(n)?,
        None => Vec::new(),
    };
    if json {
        #[derive(serde::Serialize)]
        struct Out {
            generators: usize,
            size: String,
            #[serde(skip_serializing_if = "Vec::is_empty")]
            table: Vec<SizeRow>,
        }
        print!(
            "{}",
            to_json(&Out {
                generators,
                size: size.to_string(),
                table: rows,
            })?
        );
        return Ok(true);
    }
    println!("{size}");
    if !rows.is_empty() {
        let cells: Vec<[String; 4]> = rows
            .iter()
            .map(|r| {
                [
                    r.generators.to_string(),
                    r.atoms.to_string(),
                    r.size.to_string(),
                    short(&r.upper_bound.to_string()),
                ]
            })
            .collect();
        let head = ["m", "atoms", "size", "upper bound"];
        let width: Vec<usize> = (0..4)
            .map(|c| {
                cells
                    .iter()
                    .map(|r| r[c].len())
                    .chain([head[c].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        println!();
        println!(
            "{:>w0$}  {:>w1$}  {:>w2$}  {:>w3$}",
            head[0],
            head[1],
            head[2],
            head[3],
            w0 = width[0],
            w1 = width[1],
            w2 = width[2],
            w3 = width[3]
        );
        for r in &cells {
            println!(
                "{:>w0$}  {:>w1$}  {:>w2$}  {:>w3$}",
                r[0],
                r[1],
                r[2],
                r[3],
                w0 = width[0],
                w1 = width[1],
                w2 = width[2],
                w3 = width[3]
            );
        }
    }
    Ok(true)
}

/// Long numbers as leading digits plus a digit count.
fn short(n: &str) -> String {
    if n.len() <= 24 {
        n.to_owned()
    } else {
        format!("{}...({} digits)", &n[..12], n.len())
    }
}

fn cmd_build(k: usize, enumerate: bool, out: Option<PathBuf>, json: bool) -> Result<bool> {
    if k > MAX_BUILD_K {
        bail!("--k {k} is too large: B_k is built for k <= {MAX_BUILD_K}");
    }
    if enumerate && k > MAX_ENUMERATE_K {
        bail!(
            "--enumerate needs k <= {MAX_ENUMERATE_K}: I(B_{k}) has 3^{} intervals",
            (3usize.pow(k as u32 + 1) - 1) / 2
        );
    }
    let b = FreeInstance::build(k)?;
    let lx_size = if enumerate {
        Some(b.lx_packed()?.len())
    } else {
        None
    };
    let (sigma, tau) = b.sigma_tau().pop().expect("non-empty");
    let sigma_ok = sigma.is_bottom() && tau.is_bottom();
    let dump = b.to_json(lx_size);
    if let Some(p) = &out {
        emit(Some(p), &to_json(&dump)?)?;
    }
    if json {
        print!("{}", to_json(&dump)?);
        return Ok(sigma_ok);
    }
    println!("atoms: {}", b.alg().atom_count());
    println!(
        "σ_{k} = τ_{k} = 0: {}",
        if sigma_ok { "OK" } else { "FAILED" }
    );
    for g in &dump.generator_images {
        println!("{}: lo {:?} hi {:?}", g.name, g.lo, g.hi);
    }
    if b.alg().atom_count() <= 40 {
        for i in 0..b.alg().atom_count() {
            println!(
                "atom {i}: {}",
                format_label(b.alg().generator_names(), b.alg().atom_labels()[i])
            );
        }
    }
    if let Some(n) = lx_size {
        println!("|L(X)| = {n}");
    }
    Ok(sigma_ok)
}

fn cmd_verify(k: usize, long: bool, json: bool) -> Result<bool> {
    let max = if long {
        suite::LONG_MAX_K
    } else {
        suite::QUICK_MAX_K
    };
    if k > max {
        if long || k > suite::LONG_MAX_K {
            bail!("verify supports k <= {}", suite::LONG_MAX_K);
        }
        bail!("verify --k {k} needs --long");
    }
    let lines = suite::run(k, |w| {
        if long {
            eprintln!("wave {}: +{} ({} total)", w.wave, w.added, w.total);
        }
    })?;
    let ok = lines.iter().all(|l| l.passed);
    if json {
        #[derive(serde::Serialize)]
        struct Out<'a> {
            k: usize,
            passed: bool,
            checks: &'a [CheckLine],
        }
        print!(
            "{}",
            to_json(&Out {
                k,
                passed: ok,
                checks: &lines
            })?
        );
    } else {
        for l in &lines {
            println!(
                "{:<18} {}  {}",
                l.name,
                if l.passed { "pass" } else { "FAIL" },
                l.detail
            );
        }
    }
    Ok(ok)
}

fn print_outcome(a: &AxiomOutcome) {
    let name = if a.axiom.len() == 1 {
        format!("axiom ({})", a.axiom)
    } else {
        a.axiom.clone()
    };
    match &a.witness {
        None => println!("  {name}: pass ({} checked)", a.checked),
        Some(w) => println!(
            "  {name}: FAIL ({} of {} tuples), witness {:?}",
            a.failures, a.checked, w
        ),
    }
}

fn print_report(title: &str, r: &CheckReport) {
    println!(
        "{title}: {} ({} elements, {})",
        if r.passed() { "pass" } else { "FAIL" },
        r.carrier,
        if r.exhaustive {
            "exhaustive"
        } else {
            "sampled"
        }
    );
    for a in r.structure.iter().filter(|a| !a.passed()) {
        print_outcome(a);
    }
    for a in &r.axioms {
        print_outcome(a);
    }
}

fn cmd_check(input: PathBuf, samples: usize, seed: u64, json: bool) -> Result<bool> {
    let text =
        fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
    let table =
        CubicTable::from_json_str(&text).with_context(|| format!("in {}", input.display()))?;
    let cov = Coverage { samples, seed };
    let cubic = check_cubic_axioms(&table, cov);
    let mr = check_mr_axiom(&table, cov);
    let ok = cubic.passed() && mr.passed();
    if json {
        #[derive(serde::Serialize)]
        struct Out<'a> {
            passed: bool,
            cubic: &'a CheckReport,
            mr: &'a CheckReport,
        }
        print!(
            "{}",
            to_json(&Out {
                passed: ok,
                cubic: &cubic,
                mr: &mr
            })?
        );
    } else {
        print_report("cubic", &cubic);
        print_report("MR", &mr);
    }
    Ok(ok)
}

fn cmd_export(k: usize, what: What, out: Option<PathBuf>) -> Result<bool> {
    let limit = match what {
        What::Table => cubal::export::TABLE_EXPORT_MAX_K,
        What::Hasse => MAX_ENUMERATE_K,
        What::Atoms => MAX_BUILD_K,
    };
    if k > limit {
        bail!("this export needs k <= {limit}");
    }
    let b = FreeInstance::build(k)?;
    let text = match what {
        What::Table => to_json(&lx_table(&b)?.to_json())?,
        What::Hasse => lx_hasse_dot(&b)?,
        What::Atoms => to_json(&atoms_export(&b)?)?,
    };
    emit(out.as_ref(), &text)?;
    Ok(true)
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("CUBAL_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .with_context(|| format!("CUBAL_THREADS must be a positive integer, got {v:?}"))?;
        if n == 0 {
            bail!("CUBAL_THREADS must be a positive integer, got 0");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    configure_threads()?;
    match cli.command {
        Command::Size {
            generators,
            table,
            json,
        } => cmd_size(generators, table, json),
        Command::Build {
            k,
            enumerate,
            out,
            json,
        } => cmd_build(k, enumerate, out, json),
        Command::Verify { k, long, json } => cmd_verify(k, long, json),
        Command::Check {
            input,
            samples,
            seed,
            json,
        } => cmd_check(input, samples, seed, json),
        Command::Export { k, what, out } => cmd_export(k, what, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
