use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use quantgroupoid::algebra::make_multimatrix;
use quantgroupoid::io::{self, Document, Loaded};
use quantgroupoid::morita::{base_change_auto, canonical_context};
use quantgroupoid::towers::{self, BratteliFloor, InclusionStep};
use quantgroupoid::Error;

#[derive(Parser)]
#[command(name = "qgroupoid", version, about = "Weak bialgebras by structure constants: verification, Morita base change, subfactor towers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Table,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suite for the kind of document in PATH.
    Verify {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Include the elapsed time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Transport a weak bialgebra along a Morita context, or a Bratteli
    /// diagram to new lower ranks.
    BaseChange {
        path: PathBuf,
        /// `canonical` (with --blocks) or a context file.
        #[arg(long, default_value = "canonical")]
        context: String,
        /// Block sizes of the multi-matrix side of the canonical context.
        #[arg(long, value_delimiter = ',')]
        blocks: Vec<usize>,
        /// New lower ranks for an inclusion document.
        #[arg(long, value_delimiter = ',')]
        lower_ranks: Vec<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also run the full weak-bialgebra suite on the result.
        #[arg(long)]
        check: bool,
    },
    /// Bratteli diagrams of the subfactor tower for index 4cos²(π/(n+3)).
    Tower {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "table")]
        emit: Emit,
        /// Also reduce the counital subalgebras to ranks 1.
        #[arg(long)]
        base_change: bool,
    },
}

fn read_document(path: &Path) -> Result<Document> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(io::parse_document(&text).with_context(|| format!("parsing {}", path.display()))?)
}

fn load(path: &Path) -> Result<Loaded> {
    let doc = read_document(path)?;
    Ok(io::load(&doc).with_context(|| format!("loading {}", path.display()))?)
}

fn cmd_verify(path: &Path, format: Format, timing: bool) -> Result<u8> {
    let loaded = load(path)?;
    let start = Instant::now();
    let mut v = io::verify_loaded(&loaded)?;
    if timing {
        v.report.elapsed_ms = Some(start.elapsed().as_millis());
    }
    match format {
        Format::Text => {
            print!("{}", v.report);
            for n in &v.notes {
                println!("  {n}");
            }
        }
        Format::Json => println!("{}", serde_json::to_string_pretty(&v)?),
    }
    Ok(if v.report.passed() { 0 } else { 1 })
}

fn bratteli_mode(loaded: &Loaded, lower_ranks: &[u64]) -> Result<u8> {
    match loaded {
        Loaded::Tower { n, .. } => {
            let d = towers::subfactor_data(*n)?;
            let r = d.reduced()?;
            println!("dim H_t = {}", d.h_t().dim());
            println!("dim H = {}", d.h().dim());
            println!("dim H̃_t = {}", d.h_t().len());
            println!("dim H̃ = {}", r.upper.dim());
        }
        Loaded::Inclusion { lower, upper, matrix, new_lower } => {
            let step = InclusionStep::new(BratteliFloor::unlabeled(lower)?, BratteliFloor::unlabeled(upper)?, matrix.clone())?;
            let ranks = if !lower_ranks.is_empty() {
                lower_ranks.to_vec()
            } else {
                new_lower.clone().context("no new lower ranks: pass --lower-ranks or set `new_lower`")?
            };
            let out = towers::bratteli_base_change(&step, &ranks)?;
            println!("upper ranks {:?} -> {:?}", step.upper.ranks, out.upper.ranks);
            println!("dim {} -> {}", step.upper.dim(), out.upper.dim());
        }
        _ => unreachable!("only Bratteli documents"),
    }
    Ok(0)
}

fn cmd_base_change(path: &Path, context: &str, blocks: &[usize], lower_ranks: &[u64], out: Option<&Path>, check: bool) -> Result<u8> {
    let loaded = load(path)?;
    let lw = match &loaded {
        Loaded::Tower { .. } | Loaded::Inclusion { .. } => return bratteli_mode(&loaded, lower_ranks),
        Loaded::Weak(w) => (**w).clone(),
        Loaded::Groupoid(g) => {
            let b = quantgroupoid::weak::groupoid_based(g)?;
            io::LoadedWeak { h: b.h.clone(), base: Some((b.base, b.source)), antipode: None }
        }
        _ => bail!("base change needs a weak_bialgebra, groupoid, tower or inclusion document"),
    };
    let based = lw.based()?;
    let ctx = if context == "canonical" {
        if blocks.is_empty() {
            bail!("--context canonical needs --blocks");
        }
        canonical_context(&make_multimatrix(blocks)?)?
    } else {
        match load(Path::new(context))? {
            Loaded::Context(c) => c.for_base(&based.base)?,
            _ => bail!("{context} is not a context document"),
        }
    };
    let bc = base_change_auto(&based, &ctx)?;
    println!("dim L = {}, dim R = {}", based.dim(), based.base.dim());
    println!("dim L̃ = {}, dim S = {}", bc.dim(), bc.based.base.dim());
    let mut code = 0;
    match towers::bratteli_invariance(&bc) {
        Ok(rep) => {
            print!("{rep}");
            if !rep.passed() {
                code = 1;
            }
        }
        Err(Error::NotSplit(why)) => println!("Bratteli diagram under base change: skipped ({why})"),
        Err(e) => return Err(e.into()),
    }
    if check {
        let v = io::verify_loaded(&Loaded::Weak(Box::new(io::LoadedWeak { h: bc.based.h.clone(), base: Some((bc.based.base.clone(), bc.based.source.clone())), antipode: None })))?;
        print!("{}", v.report);
        if !v.report.passed() {
            code = 1;
        }
    }
    if let Some(p) = out {
        fs::write(p, io::to_json(&Document::WeakBialgebra(io::weak_file(&bc.based)))).with_context(|| format!("writing {}", p.display()))?;
        println!("wrote {}", p.display());
    }
    Ok(code)
}

fn cmd_tower(n: u32, emit: Emit, base_change: bool) -> Result<u8> {
    let d = towers::subfactor_data(n)?;
    match emit {
        Emit::Table => print!("{}", towers::tower_table(&d, base_change)?),
        Emit::Dot => print!("{}", towers::tower_dot(&d, base_change)?),
    }
    Ok(0)
}

/// 2 for unreadable or malformed input, 1 for everything else.
fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(err) = cause.downcast_ref::<Error>() {
            return match err {
                Error::Malformed(_) | Error::Parse(_) | Error::BadDiscriminant(_) | Error::MismatchedField(..) => 2,
                _ => 1,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 2;
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify { path, format, timing } => cmd_verify(path, *format, *timing),
        Command::BaseChange { path, context, blocks, lower_ranks, out, check } => cmd_base_change(path, context, blocks, lower_ranks, out.as_deref(), *check),
        Command::Tower { n, emit, base_change } => cmd_tower(*n, *emit, *base_change),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
