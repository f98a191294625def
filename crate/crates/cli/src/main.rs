//! `sqav`: JSON reports and rank-2 pictures for a positive-definite form.
//!
//! Exit codes: 0 success, 2 invalid input, 3 a violated invariant or a
//! failing verification line, 1 for output errors.

mod spec;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use sqav_core::complex::{h0_ld, quotient_complex, ComplexError};
use sqav_core::degeneration::DegenError;
use sqav_core::delaunay::{
    is_generating, is_totally_generating, nilpotency, nilpotency_of_decomposition, primitive_vectors,
    sample_maximal_cells, star, voronoi_cell, DelaunayError, StarComplex, StarOptions, DEFAULT_RANK_LIMIT,
};
use sqav_core::invariants::{theta_basis, verify, Check, InvariantError, ThetaBasisReport, VerifyOptions};
use sqav_core::linalg::fmt_rat;

use spec::{FormSpec, Input, SpecError};

#[derive(Parser)]
#[command(name = "sqav", version, about = "Delaunay combinatorics and special-fiber invariants of a lattice form")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cells of the vertex star, cell classes and duality checks.
    Star(Args),
    /// Every verification line for the form.
    Verify(Args),
    /// Theta basis of degree `--depth`.
    Theta(Args),
    /// SVG picture of a rank-2 tiling.
    Svg(Args),
    /// Cell classification: generating, totally generating, nilpotency.
    Classify(Args),
}

#[derive(clap::Args)]
struct Args {
    /// Form description (JSON).
    input: String,
    /// Cross-check the star by both constructions.
    #[arg(long)]
    verify: bool,
    /// Largest degree `d` (verify) or the degree itself (theta).
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(i64).range(1..))]
    depth: i64,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Violation(String),
    #[error("cannot write {path}: {source}")]
    Output { path: String, source: std::io::Error },
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Violation(_) => 3,
            CliError::Output { .. } => 1,
        }
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<DelaunayError> for CliError {
    fn from(e: DelaunayError) -> Self {
        match e {
            DelaunayError::RankLimit { .. } => CliError::Invalid(e.to_string()),
            _ => CliError::Violation(e.to_string()),
        }
    }
}

impl From<ComplexError> for CliError {
    fn from(e: ComplexError) -> Self {
        match e {
            ComplexError::Delaunay(d) => d.into(),
            ComplexError::BadPeriod(_) | ComplexError::NotTorsion(_, _) => CliError::Invalid(e.to_string()),
            _ => CliError::Violation(e.to_string()),
        }
    }
}

impl From<DegenError> for CliError {
    fn from(e: DegenError) -> Self {
        match e {
            DegenError::Delaunay(d) => d.into(),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<InvariantError> for CliError {
    fn from(e: InvariantError) -> Self {
        match e {
            InvariantError::Delaunay(d) => d.into(),
            InvariantError::Complex(c) => c.into(),
            InvariantError::Degeneration(d) => d.into(),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    command: &'static str,
    input: &'a FormSpec,
    result: T,
}

fn rank_limit() -> Result<usize, CliError> {
    match std::env::var("SQAV_RANK_LIMIT") {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Invalid(format!("SQAV_RANK_LIMIT={v:?} is not a rank"))),
        Err(_) => Ok(DEFAULT_RANK_LIMIT),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Output { path: p.display().to_string(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(args: &Args, command: &'static str, input: &Input, result: T) -> Result<(), CliError> {
    let report = Report { command, input: &input.echo, result };
    let mut text = serde_json::to_string_pretty(&report).expect("reports serialize");
    text.push('\n');
    emit(&args.out, &text)
}

fn load(args: &Args) -> Result<(Input, usize), CliError> {
    let input = FormSpec::read(&args.input)?.resolve()?;
    Ok((input, rank_limit()?))
}

fn full_star(input: &Input, limit: usize, verify: bool) -> Result<StarComplex, CliError> {
    Ok(star(input.data.form(), StarOptions { rank_limit: limit, verify })?)
}

fn vertices(c: &sqav_core::delaunay::DelaunayCell) -> Vec<Vec<i64>> {
    c.vertices().iter().map(|v| v.0.clone()).collect()
}

#[derive(Serialize)]
struct CellOut {
    dim: usize,
    vertices: Vec<Vec<i64>>,
    hole: Vec<String>,
    radius_sq: String,
    voronoi_vertices: usize,
}

#[derive(Serialize)]
struct StarOut {
    counts: Vec<usize>,
    classes_mod_x: Vec<usize>,
    cells: Vec<CellOut>,
    checks: Vec<Check>,
}

fn line(id: &str, statement: &str, pass: bool, detail: String) -> Check {
    Check { id: id.to_string(), statement: statement.to_string(), pass, detail }
}

fn cmd_star(args: &Args) -> Result<(), CliError> {
    let (input, limit) = load(args)?;
    let s = full_star(&input, limit, args.verify)?;
    let r = s.rank();
    let mut cells = Vec::new();
    let mut dims_ok = true;
    let mut duals = Vec::new();
    for c in s.cells() {
        let v = voronoi_cell(&s, c)?;
        dims_ok &= c.dim() + v.dim() == r;
        cells.push(CellOut {
            dim: c.dim(),
            vertices: vertices(c),
            hole: c.hole().to_strings(),
            radius_sq: fmt_rat(c.radius_sq()),
            voronoi_vertices: v.vertices.len(),
        });
        duals.push(v.vertices);
    }
    let incl_ok = s.cells().iter().enumerate().all(|(i, a)| {
        s.cells().iter().enumerate().all(|(j, b)| {
            let faces = a.is_face_of(b);
            let dual = duals[j].iter().all(|p| duals[i].contains(p));
            faces == dual
        })
    });
    let mut checks = vec![
        line("duality.dims", "dim σ + dim V(σ) = r", dims_ok, String::new()),
        line("duality.order", "σ ⊂ τ iff V(τ) ⊂ V(σ)", incl_ok, String::new()),
    ];
    if args.verify {
        checks.push(line("star.agreement", "both star constructions give the same cells", true, String::new()));
    }
    let failed = checks.iter().any(|c| !c.pass);
    let out = StarOut { counts: s.counts(), classes_mod_x: quotient_complex(&s, 1)?.class_counts(), cells, checks };
    emit_json(args, "star", &input, out)?;
    if failed {
        return Err(CliError::Violation("star duality check failed".into()));
    }
    Ok(())
}

fn cmd_verify(args: &Args) -> Result<(), CliError> {
    let (input, limit) = load(args)?;
    let opts = VerifyOptions {
        depth: args.depth,
        verify_star: args.verify || input.data.form().rank() <= 3,
        rank_limit: limit,
        abelian_rank: input.echo.abelian_rank,
        ..VerifyOptions::default()
    };
    let report = verify(&input.data, input.echo.preset.as_deref(), opts)?;
    let pass = report.all_pass();
    emit_json(args, "verify", &input, &report)?;
    if !pass {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.id.as_str()).collect();
        return Err(CliError::Violation(format!("failing lines: {}", failed.join(", "))));
    }
    Ok(())
}

#[derive(Serialize)]
struct ThetaOut {
    basis: ThetaBasisReport,
    h0: usize,
}

fn cmd_theta(args: &Args) -> Result<(), CliError> {
    let (input, limit) = load(args)?;
    let s = full_star(&input, limit, args.verify)?;
    let basis = theta_basis(&s, args.depth)?;
    let (h0, _) = h0_ld(&s, args.depth)?;
    let ok = h0 == basis.total;
    emit_json(args, "theta", &input, ThetaOut { basis, h0 })?;
    if !ok {
        return Err(CliError::Violation("theta basis size differs from h^0".into()));
    }
    Ok(())
}

fn cmd_svg(args: &Args) -> Result<(), CliError> {
    let (input, limit) = load(args)?;
    let r = input.data.form().rank();
    if r != 2 {
        return Err(CliError::Invalid(format!("svg needs a rank-2 form, got rank {r}")));
    }
    let s = full_star(&input, limit, args.verify)?;
    emit(&args.out, &svg::render(&s))
}

#[derive(Serialize)]
struct ClassifiedCell {
    dim: usize,
    vertices: Vec<Vec<i64>>,
    generating: bool,
    totally_generating: bool,
    nilpotency: u64,
    multiplicity: Option<u64>,
}

#[derive(Serialize)]
struct ClassifyOut {
    cells: Vec<ClassifiedCell>,
    primitive_vectors: Vec<Vec<i64>>,
    nilpotency: u64,
    minimal_base_change: u64,
}

#[derive(Serialize)]
struct SampledCell {
    point: Vec<String>,
    vertices: usize,
    index: u64,
    multiplicity: u64,
}

#[derive(Serialize)]
struct SampledOut {
    samples: Vec<SampledCell>,
    minimal_base_change_over_samples: u64,
}

fn cmd_classify(args: &Args) -> Result<(), CliError> {
    let (input, limit) = load(args)?;
    let data = &input.data;
    if data.form().rank() > limit {
        let opts = VerifyOptions::default();
        let samples = sample_maximal_cells(data.form(), opts.samples, opts.seed)?;
        let out = SampledOut {
            samples: samples
                .iter()
                .map(|s| {
                    Ok(SampledCell {
                        point: s.point.to_strings(),
                        vertices: s.cell.vertices().len(),
                        index: s.index,
                        multiplicity: data.multiplicity(&s.cell)?,
                    })
                })
                .collect::<Result<_, CliError>>()?,
            minimal_base_change_over_samples: data.sampled_base_change(&samples)?,
        };
        return emit_json(args, "classify", &input, out);
    }
    let s = full_star(&input, limit, args.verify)?;
    let cells = s
        .cells()
        .iter()
        .map(|c| {
            Ok(ClassifiedCell {
                dim: c.dim(),
                vertices: vertices(c),
                generating: is_generating(c),
                totally_generating: is_totally_generating(&s, c)?,
                nilpotency: nilpotency(c),
                multiplicity: if c.is_maximal() { Some(data.multiplicity(c)?) } else { None },
            })
        })
        .collect::<Result<_, CliError>>()?;
    let out = ClassifyOut {
        cells,
        primitive_vectors: primitive_vectors(&s).into_iter().map(|v| v.0).collect(),
        nilpotency: nilpotency_of_decomposition(&s),
        minimal_base_change: data.minimal_base_change(&s)?,
    };
    emit_json(args, "classify", &input, out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Star(a) => cmd_star(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Theta(a) => cmd_theta(a),
        Command::Svg(a) => cmd_svg(a),
        Command::Classify(a) => cmd_classify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sqav: {e}");
            ExitCode::from(e.code())
        }
    }
}
