//! `semiflex`: characters, Lie algebra and semi-infinite cohomology tables,
//! Wakimoto modules and verification runs from the command line.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use semiflex::cohomology::{ce_cohomology, ce_homology, CohomologyTable};
use semiflex::forms::semiinf_cohomology;
use semiflex::induction::{
    check_prop_iso, check_prop_iso1, check_shapiro, check_universal_property, semiregular_series,
    universal_semijective, wakimoto,
};
use semiflex::io::{character_rows, dump_module, parse_lambda, table_rows, write_rows, Format, Row};
use semiflex::lie::{builtin, AlgebraFile, GradedLieAlgebra, Selector};
use semiflex::modules::{coverma, product_formula_character, trivial, verma, Lambda, WeightModule};
use semiflex::Error;

const DEFAULT_LAMBDA: &str = "h=0,K=1,d=0";

#[derive(Parser)]
#[command(name = "semiflex", version, about = "Exact semi-infinite cohomology for graded Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Antisymmetry and Jacobi identity on every basis triple in the window.
    AlgebraCheck(Common),
    /// Character of a module, one row per weight.
    Character {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Kind::Verma)]
        module: Kind,
    },
    /// Cohomology of g₊ (or homology of g<0) with coefficients in a module.
    LieCohomology {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Kind::Coverma)]
        module: Kind,
        #[arg(long, value_enum, default_value_t = Side::Plus)]
        side: Side,
        /// Degree range `lo..hi` (inclusive).
        #[arg(long, default_value = "0..2", value_parser = parse_range)]
        degrees: RangeInclusive<i64>,
    },
    /// Semi-infinite cohomology of the algebra (or of `--sub`) with
    /// coefficients in a module.
    SemiinfCohomology {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Kind::Wakimoto)]
        module: Kind,
        /// Restrict the module to this subalgebra first.
        #[arg(long)]
        sub: Option<String>,
        /// Ghost range `lo..hi` (inclusive); all ghost degrees when omitted.
        #[arg(long, value_parser = parse_range)]
        ghosts: Option<RangeInclusive<i64>>,
    },
    /// Builds W(λ), checks it, and writes its character.
    Wakimoto {
        #[command(flatten)]
        common: Common,
        /// Also write basis labels and action matrices as JSON lines.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Compares H(h, M) with H(g, S-ind M) cell by cell.
    VerifyShapiro {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "loop-nminus")]
        sub: String,
        #[arg(long, value_enum, default_value_t = Kind::Trivial)]
        module: Kind,
        #[arg(long, value_parser = parse_range)]
        ghosts: Option<RangeInclusive<i64>>,
        /// Structured JSON report with per-cell differences.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Both models of US: dimensions, bimodule structure, generator actions.
    VerifyUs {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// N ⊗ US ≅ N for a module N.
    VerifyUniv {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Kind::Trivial)]
        module: Kind,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Built-in name (affine_sl2, a, abelian) or path to a JSON definition.
    #[arg(long, default_value = "affine_sl2")]
    algebra: String,
    #[arg(long, default_value_t = 4)]
    depth: i64,
    /// Degree window of built-in algebras; defaults to three times the depth.
    #[arg(long)]
    window: Option<i64>,
    /// Values on degree zero, e.g. `h=0,K=1,d=0`.
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: Format,
    /// Worker threads; all available cores by default.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Trivial,
    Verma,
    Coverma,
    Wakimoto,
    Us,
    Product,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Plus,
    Below,
}

enum Failure {
    Check(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Anomaly { .. } | Error::Construction(_) => Failure::Check(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Run = Result<(), Failure>;

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("expected lo..hi, got `{s}`"))?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let lo: i64 = lo.trim().parse().map_err(|_| format!("bad lower bound in `{s}`"))?;
    let hi: i64 = hi.trim().parse().map_err(|_| format!("bad upper bound in `{s}`"))?;
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok(lo..=hi)
}

impl Common {
    fn setup(&self) -> Result<Arc<GradedLieAlgebra>, Failure> {
        if self.depth <= 0 {
            return Err(Failure::Input("--depth must be positive".into()));
        }
        if let Some(n) = self.jobs {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global()
                .map_err(|e| Failure::Input(format!("--jobs: {e}")))?;
        }
        let window = self.window.unwrap_or(3 * self.depth);
        if window < self.depth {
            return Err(Failure::Input(format!("--window {window} is smaller than --depth {}", self.depth)));
        }
        let path = Path::new(&self.algebra);
        let alg = if path.extension().is_some_and(|e| e == "json") || path.exists() {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Input(format!("reading {}: {e}", path.display())))?;
            AlgebraFile::from_json(&text)?.build()?
        } else {
            builtin(&self.algebra, window)?
        };
        Ok(Arc::new(alg))
    }

    fn lambda(&self, alg: &GradedLieAlgebra) -> Result<Lambda, Failure> {
        match &self.lambda {
            Some(text) => Ok(parse_lambda(alg, text)?),
            None if alg.graded_component(0).is_empty() => Ok(Lambda::zero()),
            None => {
                eprintln!("warning: no --lambda given, using {DEFAULT_LAMBDA}");
                Ok(parse_lambda(alg, DEFAULT_LAMBDA)?)
            }
        }
    }

    fn emit(&self, rows: &[Row], rank: usize) -> Run {
        let Some(path) = &self.out else { return Ok(()) };
        let file = File::create(path).map_err(|e| Failure::Input(format!("creating {}: {e}", path.display())))?;
        write_rows(rows, rank, self.format, BufWriter::new(file))?;
        println!("wrote {} rows to {}", rows.len(), path.display());
        Ok(())
    }
}

fn build(kind: Kind, alg: &Arc<GradedLieAlgebra>, lambda: &Lambda, depth: i64) -> Result<WeightModule, Failure> {
    Ok(match kind {
        Kind::Trivial => trivial(alg),
        Kind::Verma => verma(alg, lambda, depth)?,
        Kind::Coverma => coverma(alg, lambda, depth)?,
        Kind::Wakimoto => wakimoto(alg, lambda, depth)?.module,
        Kind::Us => universal_semijective(alg, depth)?.left_module(),
        Kind::Product => return Err(Failure::Input("`product` is only a character, not a module".into())),
    })
}

fn restricted(alg: &GradedLieAlgebra, sub: &str) -> Result<Arc<GradedLieAlgebra>, Failure> {
    let sel: Selector = sub.parse()?;
    Ok(Arc::new(alg.restrict(&alg.subalgebra(&sel)?, sub)?))
}

fn print_rows(rows: &[Row]) {
    println!("{:>12} {:>7} {:>10}", "weight", "degree", "dimension");
    for r in rows.iter().filter(|r| r.dimension > 0) {
        let w: Vec<String> = r.weight.iter().map(i64::to_string).collect();
        println!("{:>12} {:>7} {:>10}", format!("({})", w.join(",")), r.degree, r.dimension);
    }
}

fn verdict(ok: bool, what: &str) -> Run {
    if ok {
        println!("PASS {what}");
        Ok(())
    } else {
        println!("FAIL {what}");
        Err(Failure::Check(format!("{what} failed")))
    }
}

fn write_report(path: &Option<PathBuf>, value: serde_json::Value) -> Run {
    let Some(path) = path else { return Ok(()) };
    let mut file = File::create(path).map_err(|e| Failure::Input(format!("creating {}: {e}", path.display())))?;
    writeln!(file, "{}", serde_json::to_string_pretty(&value).expect("report serializes"))
        .map_err(|e| Failure::Input(format!("writing {}: {e}", path.display())))
}

fn table_summary(t: &CohomologyTable, common: &Common, rank: usize) -> Run {
    let rows = table_rows(t);
    print_rows(&rows);
    common.emit(&rows, rank)?;
    verdict(t.euler_consistent(), "Euler characteristic consistency")
}

fn run(cli: Cli) -> Run {
    match cli.command {
        Command::AlgebraCheck(common) => {
            let alg = common.setup()?;
            let (lo, hi) = alg.window();
            let r = alg.check_jacobi(lo, hi);
            println!("{}: {} triples checked in [{lo}, {hi}]", alg.name(), r.triples_checked);
            for (x, y) in &r.antisymmetry_failures {
                println!("antisymmetry fails for ({x}, {y})");
            }
            for (x, y, z) in &r.jacobi_failures {
                println!("Jacobi fails for ({x}, {y}, {z})");
            }
            verdict(r.passed(), "Jacobi identity")
        }
        Command::Character { common, module } => {
            let alg = common.setup()?;
            let ch = match module {
                Kind::Product => product_formula_character(&alg, common.depth),
                kind => build(kind, &alg, &common.lambda(&alg)?, common.depth)?.character(common.depth),
            };
            let rows = character_rows(&alg, &ch);
            print_rows(&rows);
            common.emit(&rows, alg.rank())
        }
        Command::LieCohomology { common, module, side, degrees } => {
            let alg = common.setup()?;
            let m = build(module, &alg, &common.lambda(&alg)?, common.depth)?;
            let t = match side {
                Side::Plus => ce_cohomology(&alg.subalgebra(&Selector::GPlus)?, &m, common.depth, Some(degrees))?,
                Side::Below => ce_homology(&alg.subalgebra(&Selector::GBelowZero)?, &m, common.depth, Some(degrees))?,
            };
            table_summary(&t, &common, alg.rank())
        }
        Command::SemiinfCohomology { common, module, sub, ghosts } => {
            let alg = common.setup()?;
            let mut m = build(module, &alg, &common.lambda(&alg)?, common.depth)?;
            if let Some(sub) = &sub {
                m = m.restrict_to(&restricted(&alg, sub)?)?;
            }
            let t = semiinf_cohomology(&m, common.depth, ghosts)?;
            table_summary(&t, &common, alg.rank())
        }
        Command::Wakimoto { common, dump } => {
            let alg = common.setup()?;
            let lambda = common.lambda(&alg)?;
            let w = wakimoto(&alg, &lambda, common.depth)?;
            let ch = w.module.character(common.depth);
            let rows = character_rows(&alg, &ch);
            print_rows(&rows);
            common.emit(&rows, alg.rank())?;
            if let Some(path) = &dump {
                let file = File::create(path).map_err(|e| Failure::Input(format!("creating {}: {e}", path.display())))?;
                dump_module(&w.module, BufWriter::new(file))?;
                println!("wrote module dump to {}", path.display());
            }
            let rep = w.module.check_representation();
            verdict(rep.passed(), &format!("commutator oracle on {} generator pairs", rep.pairs_checked))?;
            verdict(ch == verma(&alg, &lambda, common.depth)?.character(common.depth), "ch W = ch V")
        }
        Command::VerifyShapiro { common, sub, module, ghosts, report } => {
            let alg = common.setup()?;
            let h = alg.subalgebra(&sub.parse()?)?;
            let halg = Arc::new(alg.restrict(&h, sub.as_str())?);
            let m = build(module, &halg, &common.lambda(&halg)?, common.depth)?;
            let r = check_shapiro(&alg, &h, &m, common.depth, ghosts)?;
            let rows = table_rows(&r.induced_side);
            print_rows(&rows);
            common.emit(&rows, alg.rank())?;
            for (w, i, a, b) in &r.mismatches {
                println!("cell {w} ghost {i}: H(h, M) = {a}, H(g, S-ind M) = {b}");
            }
            let diffs: Vec<_> = r
                .mismatches
                .iter()
                .map(|(w, i, a, b)| json!({"weight": w.coords(), "ghost": i, "subalgebra": a, "induced": b}))
                .collect();
            write_report(
                &report,
                json!({"check": "shapiro", "passed": r.passed(), "cells": table_rows(&r.subalgebra_side).len(), "mismatches": diffs}),
            )?;
            verdict(r.passed(), "semi-infinite Shapiro lemma")
        }
        Command::VerifyUs { common, report } => {
            let alg = common.setup()?;
            let d = common.depth;
            let model = universal_semijective(&alg, d)?;
            let series = semiregular_series(&alg, d);
            let dims_ok = series.iter().all(|(w, n)| model.left_module().dim(w) as u64 == *n);
            let iso = check_prop_iso(&alg, d)?;
            let iso1 = check_prop_iso1(&alg, d)?;
            let bi = model.check_bimodule();
            let rows: Vec<Row> = series
                .iter()
                .map(|(w, n)| Row { weight: w.coords().to_vec(), degree: alg.degree_of(w), dimension: *n })
                .collect();
            common.emit(&rows, alg.rank())?;
            write_report(
                &report,
                json!({
                    "check": "us",
                    "dimensions": dims_ok,
                    "first_model": {"weights": iso.weights_checked, "samples": iso.samples_checked, "failures": iso.failures.len()},
                    "second_model": {"weights": iso1.weights_checked, "samples": iso1.samples_checked, "failures": iso1.failures.len()},
                    "bimodule": {"pairs": bi.pairs_checked, "failures": bi.failures.len()},
                }),
            )?;
            let checks = [
                verdict(dims_ok, "graded dimensions match the product series"),
                verdict(iso.passed(), &format!("first model ({} samples)", iso.samples_checked)),
                verdict(iso1.passed(), &format!("second model ({} samples)", iso1.samples_checked)),
                verdict(bi.passed(), &format!("left and right actions commute ({} pairs)", bi.pairs_checked)),
            ];
            checks.into_iter().collect()
        }
        Command::VerifyUniv { common, module, report } => {
            let alg = common.setup()?;
            let n = build(module, &alg, &common.lambda(&alg)?, common.depth)?;
            let r = check_universal_property(&alg, &n, common.depth)?;
            for (w, a, b) in &r.dim_mismatches {
                println!("weight {w}: dim N = {a}, dim N ⊗ US = {b}");
            }
            write_report(
                &report,
                json!({
                    "check": "universal",
                    "isomorphic": r.isomorphic,
                    "mismatches": r.dim_mismatches.iter().map(|(w, a, b)| json!({"weight": w.coords(), "module": a, "tensor": b})).collect::<Vec<_>>(),
                }),
            )?;
            verdict(r.dim_mismatches.is_empty(), "graded dimensions")?;
            verdict(r.isomorphic, "explicit isomorphism")
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
