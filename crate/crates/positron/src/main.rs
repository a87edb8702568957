use clap::{Args, Parser, Subcommand};
use positron::harness::{
    emit_csv, parse_tile_spec, run_matrix, run_tile_sweep, to_csv, MatrixReport, RunOptions,
};
use positron::isa;
use positron::kernels::arith::ArithMode;
use positron::kernels::init::DatasetSize;
use positron::kernels::Kernel;
use positron::verify;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "positron", disable_help_subcommand = true)]
struct Cli {
    /// Worker threads for configuration-level parallelism.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run benchmark kernels and report accuracy metrics.
    Bench(BenchArgs),
    /// Sweep tiled-GEMM tile sizes in posit64-quire arithmetic.
    SweepTiles(SweepArgs),
    /// Assemble Xposit text, one instruction per line, to hex words.
    Asm { file: PathBuf },
    /// Disassemble hex words, one per line, to Xposit text.
    Dis { file: PathBuf },
    /// Cross-check the arithmetic library against the exact oracle.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct BenchArgs {
    /// Kernel name or `all`.
    #[arg(long, default_values = ["all"])]
    kernel: Vec<String>,
    /// Dataset size or `all`.
    #[arg(long, default_values = ["mini", "small"])]
    size: Vec<String>,
    /// Arithmetic mode or `all`.
    #[arg(long, default_values = ["all"])]
    mode: Vec<String>,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Leave the wall_s column empty for byte-reproducible output.
    #[arg(long)]
    no_timing: bool,
    /// Use the logarithm-approximate posit division and square-root units.
    #[arg(long)]
    approx_div_sqrt: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Tile sizes, e.g. `5..25,30..40:2`.
    #[arg(long, default_value = "5..25,30..40:2")]
    sizes: String,
    /// GEMM dataset size.
    #[arg(long, default_value = "small")]
    size: String,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Width checked exhaustively (8) — wider widths are sampled.
    #[arg(long, default_value_t = 8)]
    exhaustive_width: u32,
    /// Random operand pairs per op for sampled widths.
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
}

fn fail_config(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

fn parse_selection<T: Copy>(
    raw: &[String],
    all: &[T],
    parse: impl Fn(&str) -> Option<T>,
    what: &str,
) -> Result<Vec<T>, String> {
    let mut out = Vec::new();
    for s in raw {
        if s == "all" {
            out.extend_from_slice(all);
        } else {
            out.push(parse(s).ok_or_else(|| format!("unknown {what} {s:?}"))?);
        }
    }
    Ok(out)
}

fn finish(report: MatrixReport, csv: Option<PathBuf>, no_timing: bool) -> ExitCode {
    let failed = report.results.iter().any(|r| r.error.is_some());
    for r in report.results.iter().filter(|r| r.error.is_some()) {
        eprintln!(
            "error: {} {} {}: {}",
            r.kernel.name(),
            r.size.name(),
            r.mode.name(),
            r.error.as_deref().unwrap_or("")
        );
    }
    match csv {
        Some(path) => {
            if let Err(e) = emit_csv(&report.results, &path, no_timing) {
                return fail_config(e);
            }
        }
        None => print!("{}", to_csv(&report.results, no_timing)),
    }
    if failed {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return fail_config("--jobs must be positive");
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            return fail_config(e);
        }
    }
    match cli.command {
        Command::Bench(args) => {
            let kernels =
                match parse_selection(&args.kernel, &Kernel::ALL, Kernel::parse, "kernel") {
                    Ok(v) => v,
                    Err(e) => return fail_config(e),
                };
            let sizes =
                match parse_selection(&args.size, &DatasetSize::ALL, DatasetSize::parse, "size") {
                    Ok(v) => v,
                    Err(e) => return fail_config(e),
                };
            let modes = match parse_selection(&args.mode, &ArithMode::ALL, ArithMode::parse, "mode")
            {
                Ok(v) => v,
                Err(e) => return fail_config(e),
            };
            let opts = RunOptions {
                approx_div_sqrt: args.approx_div_sqrt,
                no_timing: args.no_timing,
            };
            finish(run_matrix(&kernels, &sizes, &modes, opts), args.csv, args.no_timing)
        }
        Command::SweepTiles(args) => {
            let tiles = match parse_tile_spec(&args.sizes) {
                Ok(t) => t,
                Err(e) => return fail_config(e),
            };
            let size = match DatasetSize::parse(&args.size) {
                Some(z) => z,
                None => return fail_config(format!("unknown size {:?}", args.size)),
            };
            let opts = RunOptions { no_timing: args.no_timing, ..Default::default() };
            finish(run_tile_sweep(size, &tiles, opts), args.csv, args.no_timing)
        }
        Command::Asm { file } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => return fail_config(format!("{}: {e}", file.display())),
            };
            for (lineno, line) in text.lines().enumerate() {
                if line.trim().is_empty() || line.trim_start().starts_with('#') {
                    continue;
                }
                match isa::assemble_text(line) {
                    Ok(w) => println!("0x{w:08x}"),
                    Err(e) => {
                        eprintln!("error: {}:{}: {e}", file.display(), lineno + 1);
                        return ExitCode::from(2);
                    }
                }
            }
            ExitCode::SUCCESS
        }
        Command::Dis { file } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => return fail_config(format!("{}: {e}", file.display())),
            };
            for (lineno, line) in text.lines().enumerate() {
                let t = line.trim();
                if t.is_empty() || t.starts_with('#') {
                    continue;
                }
                let parsed = u32::from_str_radix(t.trim_start_matches("0x"), 16)
                    .map_err(|e| e.to_string())
                    .and_then(|w| isa::disassemble(w).map_err(|e| e.to_string()));
                match parsed {
                    Ok(s) => println!("{s}"),
                    Err(e) => {
                        eprintln!("error: {}:{}: {e}", file.display(), lineno + 1);
                        return ExitCode::from(2);
                    }
                }
            }
            ExitCode::SUCCESS
        }
        Command::Verify(args) => {
            if args.exhaustive_width != 8 {
                return fail_config("only --exhaustive-width 8 is supported");
            }
            let mut all_ok = true;
            let reports = [
                ("posit8 exhaustive", verify::exhaustive8()),
                ("posit16 sampled", verify::sampled::<16>(args.samples, 0x16)),
                ("posit32 sampled", verify::sampled::<32>(args.samples, 0x32)),
                ("posit64 sampled", verify::sampled::<64>(args.samples, 0x64)),
            ];
            for (name, r) in reports {
                let status = if r.ok() { "ok" } else { "FAILED" };
                println!("{name}: {} checks, {status}", r.checked);
                for f in &r.failures {
                    eprintln!("  {f}");
                }
                all_ok &= r.ok();
            }
            if all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
    }
}
