//! `knotcalc`: E1/E2 pages and Betti numbers of long-knot spaces.

mod cache;
mod store;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use knotcalc_core::report::{page_cells, PageReport};
use knotcalc_core::spectral::betti_cells;
use knotcalc_core::{parse, LinearCombo, Parity, Rational, SignedMonomial};
use num_traits::One;
use serde_json::json;

use crate::cache::Cache;
use crate::store::{ratio_string, Store};

#[derive(Parser, Debug)]
#[command(name = "knotcalc", version, about = "Exact E1/E2 pages for spaces of long knots")]
struct Cli {
    /// Directory for the persistent cell cache.
    #[arg(long, env = "KNOTCALC_CACHE", global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,

    /// Ignore the cache entirely: no reads, no writes.
    #[arg(long, global = true)]
    no_cache: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cohomology of the configuration space in chord degree K.
    Cohomology {
        #[arg(long)]
        points: u32,
        #[arg(long)]
        chords: usize,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        json: bool,
    },
    /// The E2 page up to KMAX chords, with Betti numbers.
    E2 {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        kmax: u32,
        #[arg(long)]
        json: bool,
    },
    /// A single rational Betti number and the cells it comes from.
    Betti {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        degree: u32,
    },
    /// The diagonal cell of order M.
    Diagonal {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        order: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        json: bool,
    },
    /// Coordinates of a diagram class in the E1 basis.
    Reduce {
        /// Diagram text such as "4: 1-3 2-4".
        diagram: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    OutOfRange(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::OutOfRange(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::OutOfRange(m) => m,
        }
    }
}

fn parity_of(n: u32) -> Result<Parity, Failure> {
    Parity::of(n).map_err(|e| Failure::OutOfRange(e.to_string()))
}

fn convergent_parity(n: u32) -> Result<Parity, Failure> {
    if n <= 3 {
        return Err(Failure::OutOfRange(format!(
            "n = {n} is outside the convergence range of the spectral sequence; Betti numbers and pages are only reported for n >= 4"
        )));
    }
    parity_of(n)
}

fn print_json(value: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cache = match (&cli.cache_dir, cli.no_cache) {
        (Some(dir), false) => Cache::at(dir),
        _ => Cache::disabled(),
    };
    match cli.command {
        Command::Cohomology { points, chords, n, json } => {
            let parity = parity_of(n)?;
            let h = Store::new(parity, cache).cohomology(points, chords);
            if json {
                print_json(&json!({
                    "points": points,
                    "chords": chords,
                    "n": n,
                    "parity": parity,
                    "dim": h.dim,
                    "basis": h.basis,
                }));
            } else {
                println!("dim {}", h.dim);
                for b in &h.basis {
                    println!("{b}");
                }
            }
        }
        Command::E2 { n, kmax, json } => {
            let store = Store::new(convergent_parity(n)?, cache);
            let dims: Vec<(u32, u32, usize)> =
                page_cells(kmax).into_iter().map(|(p, k)| (p, k, store.e2(p, k as usize).dim)).collect();
            let report = PageReport::from_cells(n, kmax, &dims);
            if json {
                print_json(&report);
            } else {
                print_page(&report);
            }
        }
        Command::Betti { n, degree } => {
            let store = Store::new(convergent_parity(n)?, cache);
            if degree == 0 {
                println!("1");
                return Ok(());
            }
            let cells: Vec<(u32, usize, usize)> = betti_cells(n, degree)
                .into_iter()
                .map(|(p, k)| (p, k, store.e2(p, k).dim))
                .filter(|c| c.2 > 0)
                .collect();
            let dim: usize = cells.iter().map(|c| c.2).sum();
            if cells.is_empty() {
                println!("{dim}");
            } else {
                let list: Vec<String> = cells.iter().map(|(p, k, _)| format!("p={p} k={k}")).collect();
                println!("{dim} (cells: {})", list.join(", "));
            }
        }
        Command::Diagonal { order, n, json } => {
            let parity = parity_of(n)?;
            let store = Store::new(parity, cache);
            let (p, k) = (2 * order, order as usize);
            let dim = store.e2(p, k).dim;
            if json {
                print_json(&json!({
                    "order": order,
                    "n": n,
                    "parity": parity,
                    "dim": dim,
                    "diagrams": store.e1(p, k).basis,
                }));
            } else {
                println!("{dim}");
            }
        }
        Command::Reduce { diagram, n, json } => {
            let parity = parity_of(n)?;
            let term = parse(&diagram, parity).map_err(|e| Failure::Usage(e.to_string()))?;
            let store = Store::new(parity, cache);
            let (points, chords) = match &term {
                SignedMonomial::Term { monomial, .. } => (monomial.points(), monomial.degree()),
                SignedMonomial::Zero => {
                    if json {
                        print_json(&json!({ "zero": true, "basis": [], "coordinates": [] }));
                    } else {
                        println!("0");
                    }
                    return Ok(());
                }
            };
            let mut combo = LinearCombo::zero(points, chords);
            combo.add_signed(term, Rational::one());
            let cell = store.engine().e1(points, chords);
            let coords = cell.reduce(&combo).map_err(|e| Failure::Usage(e.to_string()))?;
            if json {
                let basis: Vec<String> = cell.basis_monomials().map(ToString::to_string).collect();
                let mut dense = vec![String::from("0/1"); cell.dim()];
                for (i, q) in &coords {
                    dense[*i] = ratio_string(q);
                }
                print_json(&json!({ "zero": coords.is_empty(), "basis": basis, "coordinates": dense }));
            } else if coords.is_empty() {
                println!("0");
            } else {
                for (i, q) in &coords {
                    println!("{q}  {}", cell.basis_monomial(*i));
                }
            }
        }
    }
    Ok(())
}

fn print_page(report: &PageReport) {
    println!("n = {} ({} parity)", report.n, report.parity);
    println!("{:>3} {:>3} {:>4} {:>6} {:>4}  exact", "p", "k", "q", "degree", "dim");
    for c in &report.cells {
        println!("{:>3} {:>3} {:>4} {:>6} {:>4}  {}", c.p, c.k, c.q, c.total_degree, c.dim, c.exact);
    }
    println!("betti:");
    for b in &report.betti {
        let flag = if b.exact { "" } else { "  (partial, cells beyond kmax omitted)" };
        println!("  H^{} = {}{flag}", b.degree, b.dim);
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}
