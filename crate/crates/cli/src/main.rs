//! `cartwheel-discharge`: verify discharging certificates, print derived
//! outlet tables and lint input files.
//!
//! Exit codes: 0 success, 1 verification failure (or golden mismatch, or
//! lint findings), 2 malformed input, 3 internal invariant breach.

use std::fs;
use std::io::{self, Write};
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cartwheel_core::axle::Degree;
use cartwheel_core::input::{content_lines, InputError};
use cartwheel_core::presentation::{lint_presentation, parse_presentation, Runtime, TraceRecord};
use cartwheel_core::reduce::{lint_database, ConfigDatabase};
use cartwheel_core::rules::{derive_outlets, diff_tables, parse_outlet_table, parse_rules, OutletTable};
use clap::{Parser, Subcommand, ValueEnum};

const OK: u8 = 0;
const FAILED: u8 = 1;
const MALFORMED: u8 = 2;
const INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "cartwheel-discharge", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TraceFormat {
    V1,
}

#[derive(Subcommand)]
enum Command {
    /// Verify a presentation against a rules file and configuration database.
    Verify {
        #[arg(short = 'd', long, value_parser = clap::value_parser!(u64).range(7..=11))]
        degree: u64,
        #[arg(short = 'r', long)]
        rules: PathBuf,
        #[arg(short = 'p', long)]
        presentation: PathBuf,
        #[arg(short = 'c', long)]
        configs: PathBuf,
        /// Golden outlet table the derived table must match.
        #[arg(long)]
        golden: Option<PathBuf>,
        /// Print one trace record per processed line.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value = "v1")]
        trace_format: TraceFormat,
        /// Worker threads; 1 forces the sequential schedule.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Print the outlet table derived from a rules file.
    DeriveOutlets {
        #[arg(short = 'd', long, value_parser = clap::value_parser!(u64).range(5..=11))]
        degree: u64,
        #[arg(short = 'r', long)]
        rules: PathBuf,
        #[arg(long)]
        golden: Option<PathBuf>,
    },
    /// Report every static finding in the given files.
    Lint {
        #[arg(short = 'r', long)]
        rules: Option<PathBuf>,
        #[arg(short = 'p', long)]
        presentation: Option<PathBuf>,
        #[arg(short = 'c', long)]
        configs: Option<PathBuf>,
    },
}

/// An early exit with a message for stderr.
struct Exit(u8, String);

fn read(path: &Path) -> Result<String, Exit> {
    fs::read_to_string(path).map_err(|e| Exit(MALFORMED, format!("{}: cannot read: {e}", path.display())))
}

fn malformed(path: &Path, e: InputError) -> Exit {
    Exit(MALFORMED, format!("{}: {e}", path.display()))
}

fn degree(d: u64) -> Degree {
    Degree::new(d as usize).expect("clap restricts the range")
}

fn table(rules_path: &Path, d: Degree, golden: Option<&Path>) -> Result<OutletTable, Exit> {
    let rules = parse_rules(&read(rules_path)?).map_err(|e| malformed(rules_path, e))?;
    let table = derive_outlets(&rules, d).map_err(|e| Exit(MALFORMED, format!("{}: {e}", rules_path.display())))?;
    if let Some(g) = golden {
        let gold = parse_outlet_table(&read(g)?, d).map_err(|e| malformed(g, e))?;
        let diff = diff_tables(&table, &gold);
        if !diff.is_empty() {
            let mut msg = format!("derived outlet table differs from {}", g.display());
            for line in diff {
                msg.push_str("\n  ");
                msg.push_str(&line);
            }
            return Err(Exit(FAILED, msg));
        }
    }
    Ok(table)
}

/// The presentation's `degree` line must name the degree given on the
/// command line; checked before anything else in the file.
fn check_degree_line(path: &Path, text: &str, d: Degree) -> Result<(), Exit> {
    if let Some((line, body)) = content_lines(text).next() {
        if let ["degree", x] = body.split_whitespace().collect::<Vec<_>>().as_slice() {
            if let Ok(x) = x.parse::<usize>() {
                if x != d.get() {
                    return Err(malformed(path, InputError::new(line, format!("degree {x} but -d {}", d.get()))));
                }
            }
        }
    }
    Ok(())
}

struct Verify<'a> {
    d: Degree,
    rules: &'a Path,
    presentation: &'a Path,
    configs: &'a Path,
    golden: Option<&'a Path>,
    trace: bool,
    jobs: Option<usize>,
}

fn verify(v: Verify) -> Result<String, Exit> {
    let table = table(v.rules, v.d, v.golden)?;
    let db = ConfigDatabase::parse(&read(v.configs)?).map_err(|e| malformed(v.configs, e))?;
    let text = read(v.presentation)?;
    check_degree_line(v.presentation, &text, v.d)?;
    let p = parse_presentation(&text).map_err(|e| malformed(v.presentation, e))?;

    let outlets: Vec<_> = table.outlets().cloned().collect();
    let mut rt = Runtime::new(&outlets, &db);
    let jobs = v.jobs.unwrap_or(0);
    rt.parallel = jobs != 1;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Exit(INTERNAL, format!("cannot start workers: {e}")))?;

    let mut sink: Option<Box<dyn Write + Send>> = None;
    if v.trace {
        sink = Some(match std::env::var_os("CARTWHEEL_TRACE_DIR") {
            Some(dir) => {
                let path = Path::new(&dir).join(format!("trace-d{}.txt", v.d.get()));
                let f = fs::File::create(&path)
                    .map_err(|e| Exit(MALFORMED, format!("{}: cannot create: {e}", path.display())))?;
                Box::new(io::BufWriter::new(f))
            }
            None => Box::new(io::stdout()),
        });
    }
    let outcome = panic::catch_unwind(AssertUnwindSafe(|| {
        pool.install(|| {
            let mut emit = |r: &TraceRecord| {
                if let Some(w) = sink.as_mut() {
                    let _ = writeln!(w, "{r}");
                }
            };
            let trace: Option<&mut dyn FnMut(&TraceRecord)> = if v.trace { Some(&mut emit) } else { None };
            rt.run(&p, trace)
        })
    }));
    if let Some(mut w) = sink {
        let _ = w.flush();
    }
    match outcome {
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            Err(Exit(INTERNAL, format!("internal error: {msg}")))
        }
        Ok(Err(f)) => Err(Exit(FAILED, format!("FAILED degree {}: {}: {f}", v.d.get(), v.presentation.display()))),
        Ok(Ok(s)) => Ok(format!(
            "verified degree {}: {} lines, {} conditions, {} hubcaps, {} reducible, {} symmetries, {} outlets",
            v.d.get(),
            s.lines,
            s.conditions,
            s.hubcaps,
            s.reducible,
            s.symmetries,
            outlets.len()
        )),
    }
}

fn lint(rules: Option<&Path>, presentation: Option<&Path>, configs: Option<&Path>) -> Result<String, Exit> {
    if rules.is_none() && presentation.is_none() && configs.is_none() {
        return Err(Exit(MALFORMED, "lint needs at least one of -r, -p, -c".into()));
    }
    let mut findings: Vec<String> = Vec::new();
    let mut note = |path: &Path, errs: Vec<InputError>| {
        findings.extend(errs.into_iter().map(|e| format!("{}: {e}", path.display())));
    };
    if let Some(r) = rules {
        note(r, parse_rules(&read(r)?).err().into_iter().collect());
    }
    if let Some(p) = presentation {
        note(p, lint_presentation(&read(p)?));
    }
    if let Some(c) = configs {
        note(c, lint_database(&read(c)?));
    }
    if findings.is_empty() {
        Ok("no findings".into())
    } else {
        let n = findings.len();
        findings.push(format!("{n} finding{}", if n == 1 { "" } else { "s" }));
        Err(Exit(FAILED, findings.join("\n")))
    }
}

fn run(cli: Cli) -> Result<String, Exit> {
    match cli.command {
        Command::Verify { degree: d, rules, presentation, configs, golden, trace, trace_format: _, jobs } => {
            verify(Verify {
                d: degree(d),
                rules: &rules,
                presentation: &presentation,
                configs: &configs,
                golden: golden.as_deref(),
                trace,
                jobs,
            })
        }
        Command::DeriveOutlets { degree: d, rules, golden } => {
            let t = table(&rules, degree(d), golden.as_deref())?;
            Ok(t.render().trim_end().to_string())
        }
        Command::Lint { rules, presentation, configs } => {
            lint(rules.as_deref(), presentation.as_deref(), configs.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            if !out.is_empty() {
                println!("{out}");
            }
            ExitCode::from(OK)
        }
        Err(Exit(code, msg)) => {
            eprintln!("{msg}");
            ExitCode::from(code)
        }
    }
}
