//! Benchmark matrix runner and CSV emission.

use crate::exact::Dyadic;
use crate::kernels::arith::{Arith, ArithMode, OpCounts, Posit64Quire};
use crate::kernels::gemm::{gemm_tiled, GemmArgs};
use crate::kernels::init::{gemm_init, DatasetSize};
use crate::kernels::progs::conv;
use crate::kernels::{compute_metrics, run_kernel_opt, Kernel, KernelOutput};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::io::Write;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

#[derive(Clone, Debug)]
pub struct BenchmarkResult {
    pub kernel: Kernel,
    pub size: DatasetSize,
    pub mode: ArithMode,
    pub tile: Option<usize>,
    pub mse: f64,
    pub max_abs_e: f64,
    pub counts: OpCounts,
    pub nar_count: usize,
    pub wall_s: f64,
    /// Per-configuration failure; metric fields are not meaningful when set.
    pub error: Option<String>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub approx_div_sqrt: bool,
    /// Tile sizes for gemm-tiled rows; empty means no tiled runs.
    pub no_timing: bool,
}

pub struct MatrixReport {
    pub results: Vec<BenchmarkResult>,
    /// Reference runs performed; one per (kernel, size) when reuse works.
    pub reference_runs: u64,
}

fn catch<T>(f: impl FnOnce() -> T + std::panic::UnwindSafe) -> Result<T, String> {
    std::panic::catch_unwind(f).map_err(|e| {
        e.downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "kernel panicked".into())
    })
}


fn compute_references(
    configs: &[(Kernel, DatasetSize)],
    counter: &AtomicU64,
) -> BTreeMap<(Kernel, DatasetSize), Result<Vec<Option<Dyadic>>, String>> {
    let mut keys: Vec<(Kernel, DatasetSize)> = configs.to_vec();
    keys.sort();
    keys.dedup();
    keys.par_iter()
        .map(|&(kernel, size)| {
            counter.fetch_add(1, Ordering::Relaxed);
            let out = catch(move || run_kernel_opt(kernel, size, ArithMode::Reference, false));
            ((kernel, size), out.map(|o| o.values))
        })
        .collect()
}

/// Full cross product of the selections; the reference output is computed once
/// per (kernel, size) and shared across modes.
pub fn run_matrix(
    kernels: &[Kernel],
    sizes: &[DatasetSize],
    modes: &[ArithMode],
    opts: RunOptions,
) -> MatrixReport {
    let ref_counter = AtomicU64::new(0);
    let pairs: Vec<(Kernel, DatasetSize)> = kernels
        .iter()
        .flat_map(|&k| sizes.iter().map(move |&z| (k, z)))
        .collect();
    let refs = compute_references(&pairs, &ref_counter);
    let mut results: Vec<BenchmarkResult> = pairs
        .par_iter()
        .flat_map_iter(|&(kernel, size)| {
            let refs = &refs;
            modes.iter().map(move |&mode| run_one(kernel, size, mode, opts, refs))
        })
        .collect();
    results.sort_by_key(|r| (r.kernel, r.size, r.mode, r.tile));
    MatrixReport { results, reference_runs: ref_counter.load(Ordering::Relaxed) }
}

fn run_one(
    kernel: Kernel,
    size: DatasetSize,
    mode: ArithMode,
    opts: RunOptions,
    refs: &BTreeMap<(Kernel, DatasetSize), Result<Vec<Option<Dyadic>>, String>>,
) -> BenchmarkResult {
    let mut row = BenchmarkResult {
        kernel,
        size,
        mode,
        tile: None,
        mse: 0.0,
        max_abs_e: 0.0,
        counts: OpCounts::default(),
        nar_count: 0,
        wall_s: 0.0,
        error: None,
    };
    let reference = match &refs[&(kernel, size)] {
        Ok(v) => v,
        Err(e) => {
            row.error = Some(format!("reference failed: {e}"));
            return row;
        }
    };
    let started = Instant::now();
    let out = match mode {
        ArithMode::Reference => Ok(KernelOutput {
            values: reference.clone(),
            counts: OpCounts::default(),
        }),
        _ => catch(move || run_kernel_opt(kernel, size, mode, opts.approx_div_sqrt)),
    };
    let wall = started.elapsed().as_secs_f64();
    match out {
        Ok(out) => {
            let m = compute_metrics(&out.values, reference);
            row.mse = m.mse;
            row.max_abs_e = m.max_abs_e;
            row.counts = out.counts;
            row.nar_count = m.nar_count;
            row.wall_s = if opts.no_timing { 0.0 } else { wall };
        }
        Err(e) => row.error = Some(e),
    }
    row
}

/// Tiled-GEMM sweep at the given tile sizes in posit64-quire arithmetic,
/// plus untiled quire and no-quire anchor rows.
pub fn run_tile_sweep(size: DatasetSize, tiles: &[usize], opts: RunOptions) -> MatrixReport {
    let refs_counter = AtomicU64::new(1);
    let reference = run_kernel_opt(Kernel::Gemm, size, ArithMode::Reference, false).values;
    let mut results: Vec<BenchmarkResult> = tiles
        .par_iter()
        .map(|&nt| {
            let started = Instant::now();
            let out = catch(move || {
                let init = gemm_init(size);
                let m = Posit64Quire::default();
                let a = conv(&m, &init.a);
                let b = conv(&m, &init.b);
                let c = conv(&m, &init.c);
                let g = GemmArgs {
                    a: &a,
                    b: &b,
                    c: &c,
                    alpha: m.from_rational(&init.alpha),
                    beta: m.from_rational(&init.beta),
                };
                let out = gemm_tiled(&m, &g, nt);
                KernelOutput {
                    values: out.as_slice().iter().map(|v| m.to_exact(v)).collect(),
                    counts: m.counters().snapshot(),
                }
            });
            let wall = started.elapsed().as_secs_f64();
            let mut row = BenchmarkResult {
                kernel: Kernel::Gemm,
                size,
                mode: ArithMode::Posit64Quire,
                tile: Some(nt),
                mse: 0.0,
                max_abs_e: 0.0,
                counts: OpCounts::default(),
                nar_count: 0,
                wall_s: 0.0,
                error: None,
            };
            match out {
                Ok(out) => {
                    let m = compute_metrics(&out.values, &reference);
                    row.mse = m.mse;
                    row.max_abs_e = m.max_abs_e;
                    row.counts = out.counts;
                    row.nar_count = m.nar_count;
                    row.wall_s = if opts.no_timing { 0.0 } else { wall };
                }
                Err(e) => row.error = Some(e),
            }
            row
        })
        .collect();
    let mut refmap: BTreeMap<(Kernel, DatasetSize), Result<Vec<Option<Dyadic>>, String>> =
        BTreeMap::new();
    refmap.insert((Kernel::Gemm, size), Ok(reference));
    for mode in [ArithMode::Posit64Quire, ArithMode::Posit64NoQuire] {
        results.push(run_one(Kernel::Gemm, size, mode, opts, &refmap));
    }
    results.sort_by_key(|r| (r.kernel, r.size, r.mode, r.tile));
    MatrixReport { results, reference_runs: refs_counter.load(Ordering::Relaxed) }
}

pub const CSV_HEADER: &str =
    "kernel,size,mode,tile,mse,max_abs_e,muls,adds,qmadds,qrounds,nar_count,wall_s";

fn sci17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn to_csv(results: &[BenchmarkResult], no_timing: bool) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in results {
        let tile = r.tile.map(|t| t.to_string()).unwrap_or_default();
        let (mse, max) = if r.error.is_some() {
            (String::new(), String::new())
        } else {
            (sci17(r.mse), sci17(r.max_abs_e))
        };
        let wall = if no_timing || r.error.is_some() { String::new() } else { sci17(r.wall_s) };
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.kernel.name(),
            r.size.name(),
            r.mode.name(),
            tile,
            mse,
            max,
            r.counts.muls,
            r.counts.adds,
            r.counts.qmadds,
            r.counts.qrounds,
            r.nar_count,
            wall,
        ));
    }
    s
}

pub fn emit_csv(
    results: &[BenchmarkResult],
    path: &std::path::Path,
    no_timing: bool,
) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    f.write_all(to_csv(results, no_timing).as_bytes())
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

/// Parses a CSV produced by `to_csv`; used by the round-trip tests.
pub fn parse_csv(text: &str) -> Result<Vec<Vec<String>>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => return Err(format!("bad header: {other:?}")),
    }
    Ok(lines.map(|l| l.split(',').map(str::to_string).collect()).collect())
}

/// Parses a tile-size set such as `5..25,30..40:2` (inclusive ranges with an
/// optional step).
pub fn parse_tile_spec(spec: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in spec.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (range, step) = match part.split_once(':') {
            Some((r, s)) => {
                (r, s.parse::<usize>().map_err(|_| format!("bad step in {part:?}"))?)
            }
            None => (part, 1),
        };
        if step == 0 {
            return Err(format!("zero step in {part:?}"));
        }
        match range.split_once("..") {
            Some((lo, hi)) => {
                let lo: usize = lo.parse().map_err(|_| format!("bad bound in {part:?}"))?;
                let hi: usize = hi.parse().map_err(|_| format!("bad bound in {part:?}"))?;
                if lo == 0 || hi < lo {
                    return Err(format!("bad range {part:?}"));
                }
                out.extend((lo..=hi).step_by(step));
            }
            None => {
                let v: usize = range.parse().map_err(|_| format!("bad tile {part:?}"))?;
                if v == 0 {
                    return Err("tile size must be positive".into());
                }
                out.push(v);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err("empty tile set".into());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tile_spec_parsing() {
        assert_eq!(parse_tile_spec("5..8").unwrap(), vec![5, 6, 7, 8]);
        let full = parse_tile_spec("5..25,30..40:2").unwrap();
        assert_eq!(full.len(), 21 + 6);
        assert!(full.contains(&40) && full.contains(&5) && !full.contains(&31));
        assert!(parse_tile_spec("0..4").is_err());
        assert!(parse_tile_spec("7..3").is_err());
        assert!(parse_tile_spec("x").is_err());
    }

    #[test]
    fn csv_round_trip_and_header() {
        let empty = to_csv(&[], false);
        assert_eq!(empty.trim_end(), CSV_HEADER);
        let row = BenchmarkResult {
            kernel: Kernel::Gemm,
            size: DatasetSize::Mini,
            mode: ArithMode::DoubleFma,
            tile: Some(7),
            mse: 1.25e-10,
            max_abs_e: 3.5e-6,
            counts: OpCounts { muls: 10, adds: 20, divs: 0, sqrts: 0, qmadds: 0, qrounds: 0 },
            nar_count: 0,
            wall_s: 0.25,
            error: None,
        };
        let text = to_csv(&[row], false);
        let rows = parse_csv(&text).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0][0], "gemm");
        assert_eq!(rows[0][3], "7");
        assert_eq!(rows[0][4].parse::<f64>().unwrap(), 1.25e-10);
        assert_eq!(rows[0][6], "10");
    }

    #[test]
    fn reference_mode_row_has_zero_mse() {
        let rep = run_matrix(
            &[Kernel::Durbin],
            &[DatasetSize::Mini],
            &[ArithMode::Reference],
            RunOptions::default(),
        );
        assert_eq!(rep.results.len(), 1);
        assert_eq!(rep.results[0].mse, 0.0);
        assert_eq!(rep.reference_runs, 1);
    }

    #[test]
    fn empty_selection_is_empty_output() {
        let rep = run_matrix(&[], &[DatasetSize::Mini], &[ArithMode::DoubleFma], RunOptions::default());
        assert!(rep.results.is_empty());
        assert_eq!(rep.reference_runs, 0);
    }

    #[test]
    fn reference_reused_across_modes() {
        let rep = run_matrix(
            &[Kernel::Durbin],
            &[DatasetSize::Mini],
            &[ArithMode::DoubleFma, ArithMode::Posit64Quire, ArithMode::Posit64NoQuire],
            RunOptions::default(),
        );
        assert_eq!(rep.results.len(), 3);
        assert_eq!(rep.reference_runs, 1);
        for r in &rep.results {
            assert!(r.error.is_none());
            assert!(r.mse >= 0.0 && r.max_abs_e >= 0.0);
        }
    }

    #[test]
    fn no_timing_csv_is_reproducible() {
        let run = || {
            let rep = run_matrix(
                &[Kernel::Durbin],
                &[DatasetSize::Mini],
                &[ArithMode::DoubleFma, ArithMode::Posit64NoQuire],
                RunOptions { no_timing: true, ..Default::default() },
            );
            to_csv(&rep.results, true)
        };
        assert_eq!(run(), run());
    }
}
