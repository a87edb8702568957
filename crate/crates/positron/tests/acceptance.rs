//! Acceptance gate: one test per criterion, named `criterion_NN_*` so the
//! harness emits a pass/fail line per criterion. Each test also prints its
//! measured evidence (visible with `--nocapture` or on failure).

use num_bigint::BigInt;
use positron::exact::{Dyadic, ExactReal};
use positron::harness::{parse_tile_spec, run_matrix, run_tile_sweep, RunOptions};
use positron::isa::{self, InstrForm, Mnemonic, XpositInstruction};
use positron::kernels::arith::{Arith, ArithMode, Posit64Quire};
use positron::kernels::gemm::{gemm_quire, gemm_tiled, GemmArgs};
use positron::kernels::init::{gemm_init, DatasetSize};
use positron::kernels::Kernel;
use positron::verify::{self, SplitMix64};
use positron::{approx, ops, Posit, Quire, P16, P64};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::time::Instant;

const BUDGET_EXHAUSTIVE8_S: f64 = 60.0;
const BUDGET_SAMPLED_S: f64 = 300.0;
const BUDGET_KERNELS_S: f64 = 600.0;

#[test]
fn criterion_01_posit8_exhaustive_vs_oracle() {
    let started = Instant::now();
    let r = verify::exhaustive8();
    let elapsed = started.elapsed().as_secs_f64();
    println!("posit8 exhaustive: {} checks in {elapsed:.2}s", r.checked);
    assert!(r.ok(), "oracle disagreements: {:?}", r.failures);
    assert!(elapsed < BUDGET_EXHAUSTIVE8_S, "took {elapsed:.2}s");
}

#[test]
fn criterion_02_sampled_wide_widths_vs_oracle() {
    let started = Instant::now();
    // 10^6 operand pairs per width; every pair exercises each binary op once
    // plus sqrt and the conversions, so each op sees the full 10^6 pairs.
    let reports = [
        ("posit16", verify::sampled::<16>(1_000_000, 0x16)),
        ("posit32", verify::sampled::<32>(1_000_000, 0x32)),
        ("posit64", verify::sampled::<64>(1_000_000, 0x64)),
    ];
    let elapsed = started.elapsed().as_secs_f64();
    for (name, r) in &reports {
        println!("{name} sampled: {} checks", r.checked);
        assert!(r.ok(), "{name}: {:?}", r.failures);
        assert!(r.checked >= 4_000_000, "{name}: only {} checks", r.checked);
    }
    println!("sampled widths done in {elapsed:.2}s");
    assert!(elapsed < BUDGET_SAMPLED_S, "took {elapsed:.2}s");
}

#[test]
fn criterion_03_figure_vector_0xfa96() {
    let p = P16::from_bits(0xFA96);
    // -1.4140625 * 2^-15 = -(181/128) * 2^-15 = -181 * 2^-22
    let want = Dyadic::new(BigInt::from(-181), -22);
    assert_eq!(p.exact_value(), ExactReal::Finite(want));
    // printed decimal matches to 5 significant digits
    let v = p.to_f64();
    assert_eq!(format!("{v:.4e}"), "-4.3154e-5");
    println!("p16:0xFA96 = {v:e} (exactly -181*2^-22)");
}

#[test]
fn criterion_04_quire_random_programs_bit_exact() {
    fn run_programs<const N: u32>(programs: usize, base_seed: u64) {
        (0..programs).into_par_iter().for_each(|i| {
            let mut rng = SplitMix64(base_seed.wrapping_add(i as u64 * 0x9E37));
            let len = 1 + (rng.next() % 10_000) as usize;
            let mut q = Quire::<N>::new();
            // Independent oracle: exact dyadic sum of the same products.
            let mut sum = Dyadic::zero();
            let mut nar = false;
            for _ in 0..len {
                match rng.next() % 10 {
                    0 => {
                        q.negate();
                        sum = sum.neg();
                    }
                    d => {
                        let a = Posit::<N>::from_bits(rng.next());
                        let b = Posit::<N>::from_bits(rng.next());
                        let sub = d >= 6;
                        if sub {
                            q.msub(a, b);
                        } else {
                            q.madd(a, b);
                        }
                        if a.is_nar() || b.is_nar() {
                            nar = true;
                        } else if !nar {
                            let p = a
                                .exact_value()
                                .finite()
                                .unwrap()
                                .mul(b.exact_value().finite().unwrap());
                            sum = if sub { sum.sub(&p) } else { sum.add(&p) };
                        }
                    }
                }
            }
            let want = if nar {
                Posit::<N>::NAR
            } else {
                Posit::<N>::encode_round(&ExactReal::Finite(sum))
            };
            assert_eq!(q.round(), want, "width {N} program {i} len {len}");
        });
    }
    run_programs::<32>(500, 0x51C0_32);
    run_programs::<64>(500, 0x51C0_64);
    println!("1000 random quire programs bit-exact vs dyadic oracle");
}

#[test]
fn criterion_05_posit16_ordering_law_exhaustive() {
    let signed: Vec<i64> = (0..65536u64).map(|b| P16::from_bits(b).signed()).collect();
    (0..65536u64).into_par_iter().for_each(|ab| {
        let a = P16::from_bits(ab);
        let sa = signed[ab as usize];
        for bb in 0..65536u64 {
            let b = P16::from_bits(bb);
            let sb = signed[bb as usize];
            assert_eq!(ops::cmp_eq(a, b), sa == sb, "{ab:#x} {bb:#x}");
            assert_eq!(ops::cmp_lt(a, b), sa < sb, "{ab:#x} {bb:#x}");
            assert_eq!(ops::cmp_le(a, b), sa <= sb, "{ab:#x} {bb:#x}");
            assert_eq!(ops::min(a, b).signed(), sa.min(sb), "{ab:#x} {bb:#x}");
            assert_eq!(ops::max(a, b).signed(), sa.max(sb), "{ab:#x} {bb:#x}");
        }
    });
    // NaR is strictly least, and the pattern order is the value order: exact
    // values are strictly increasing across the sorted non-NaR patterns.
    let nar = P16::NAR.signed();
    assert!(signed.iter().all(|&s| s == nar || s > nar));
    let mut order: Vec<u64> = (0..65536u64).filter(|&b| !P16::from_bits(b).is_nar()).collect();
    order.sort_by_key(|&b| signed[b as usize]);
    for w in order.windows(2) {
        let lo = P16::from_bits(w[0]).exact_value();
        let hi = P16::from_bits(w[1]).exact_value();
        let diff = hi.finite().unwrap().sub(lo.finite().unwrap());
        assert!(!diff.is_negative() && !diff.is_zero(), "{:#x} !< {:#x}", w[0], w[1]);
    }
    println!("65536^2 comparison pairs match two's-complement order; NaR least");
}

#[test]
fn criterion_06_xposit_codec_identity() {
    let mut words = 0u64;
    let mut check = |instr: XpositInstruction| {
        let w = isa::encode(&instr).unwrap();
        assert_eq!(isa::decode(w).unwrap(), instr, "word {w:#010x}");
        words += 1;
    };
    for mn in Mnemonic::all() {
        match isa::instr_form(mn) {
            InstrForm::Load | InstrForm::Store => {
                // all 4096 immediates crossed with one full register field
                for imm in -2048..=2047i16 {
                    for reg in 0..32u8 {
                        check(XpositInstruction::mem(mn, reg, imm, 17));
                    }
                }
                // full base-register enumeration at a fixed immediate
                for reg in 0..32u8 {
                    for base in 0..32u8 {
                        check(XpositInstruction::mem(mn, reg, -256, base));
                    }
                }
            }
            InstrForm::Comp { rd, rs1, rs2 } => {
                let range = |s: Option<_>| if s.is_some() { 0..32u8 } else { 0..1u8 };
                for d in range(rd) {
                    for s1 in range(rs1) {
                        for s2 in range(rs2) {
                            let mut i = XpositInstruction::new(mn);
                            i.rd = rd.map(|_| d);
                            i.rs1 = rs1.map(|_| s1);
                            i.rs2 = rs2.map(|_| s2);
                            check(i);
                        }
                    }
                }
            }
        }
    }
    assert!(words > 900_000, "only {words} words enumerated");
    assert_eq!(
        isa::encode(&XpositInstruction::rrr(Mnemonic::PaddS, 3, 1, 2)).unwrap(),
        0x0420_818B
    );
    assert_eq!(isa::encode(&XpositInstruction::mem(Mnemonic::Pld, 2, 8, 10)).unwrap(), 0x0085_510B);
    // qclr.s under the funct5<<27 | fmt<<25 layout is 0x09<<27 | 0x2<<25 | 0x0B
    // = 0x4C00000B; the sometimes-quoted 0x1240000B is inconsistent with that
    // field layout (it would place funct5 at bit 24) and is rejected.
    assert_eq!(isa::encode(&XpositInstruction::new(Mnemonic::QclrS)).unwrap(), 0x4C00_000B);
    assert!(isa::decode(0x1240_000B).is_err());
    println!("{words} encode/decode round trips; derived words match (qclr.s = 0x4C00000B)");
}

fn metric_map(
    sizes: &[DatasetSize],
) -> BTreeMap<(Kernel, DatasetSize, ArithMode), (f64, f64)> {
    let modes = [ArithMode::DoubleFma, ArithMode::Posit64Quire, ArithMode::Posit64NoQuire];
    let report = run_matrix(&Kernel::ALL, sizes, &modes, RunOptions::default());
    let mut map = BTreeMap::new();
    for r in report.results {
        assert!(r.error.is_none(), "{} {} {} failed: {:?}", r.kernel.name(), r.size.name(),
            r.mode.name(), r.error);
        map.insert((r.kernel, r.size, r.mode), (r.mse, r.max_abs_e));
    }
    map
}

#[test]
fn criterion_07_posit64_quire_beats_double_mini_small() {
    let started = Instant::now();
    let map = metric_map(&[DatasetSize::Mini, DatasetSize::Small]);
    let elapsed = started.elapsed().as_secs_f64();
    for kernel in Kernel::ALL {
        for size in [DatasetSize::Mini, DatasetSize::Small] {
            let (mse_d, max_d) = map[&(kernel, size, ArithMode::DoubleFma)];
            let (mse_q, max_q) = map[&(kernel, size, ArithMode::Posit64Quire)];
            println!(
                "{} {}: mse {mse_q:.3e} vs {mse_d:.3e}, max {max_q:.3e} vs {max_d:.3e}",
                kernel.name(),
                size.name()
            );
            assert!(mse_q < mse_d, "{} {}: MSE {mse_q:e} !< {mse_d:e}", kernel.name(), size.name());
            assert!(
                max_q < max_d,
                "{} {}: MaxAbsE {max_q:e} !< {max_d:e}",
                kernel.name(),
                size.name()
            );
            if matches!(kernel, Kernel::Gemm | Kernel::ThreeMm) {
                let ratio = mse_d / mse_q;
                println!("  {} {} MSE ratio {ratio:.1}", kernel.name(), size.name());
                assert!(ratio >= 10.0, "{} {}: ratio {ratio}", kernel.name(), size.name());
            }
        }
    }
    println!("kernel matrix in {elapsed:.2}s");
    assert!(elapsed < BUDGET_KERNELS_S, "took {elapsed:.2}s");
}

#[test]
fn criterion_08_posit64_noquire_beats_double_mini() {
    let map = metric_map(&[DatasetSize::Mini]);
    for kernel in Kernel::ALL {
        let (mse_d, _) = map[&(kernel, DatasetSize::Mini, ArithMode::DoubleFma)];
        let (mse_n, _) = map[&(kernel, DatasetSize::Mini, ArithMode::Posit64NoQuire)];
        println!("{}: no-quire mse {mse_n:.3e} vs double {mse_d:.3e}", kernel.name());
        assert!(mse_n < mse_d, "{}: {mse_n:e} !< {mse_d:e}", kernel.name());
    }
}

#[test]
fn criterion_09_tiled_gemm_properties() {
    // Full-tile bit equality with the untiled quire formulation.
    for size in [DatasetSize::Mini, DatasetSize::Small] {
        let init = gemm_init(size);
        let m = Posit64Quire::default();
        let a = init.a.map(|v| m.from_rational(v));
        let b = init.b.map(|v| m.from_rational(v));
        let c = init.c.map(|v| m.from_rational(v));
        let g = GemmArgs {
            a: &a,
            b: &b,
            c: &c,
            alpha: m.from_rational(&init.alpha),
            beta: m.from_rational(&init.beta),
        };
        let full = gemm_quire(&m, &g);
        for nt in [init.nk, init.nk + 13] {
            assert_eq!(
                gemm_tiled(&m, &g, nt).as_slice(),
                full.as_slice(),
                "{} nt={nt}",
                size.name()
            );
        }
    }
    let tiles = parse_tile_spec("5..25,30..40:2").unwrap();
    for size in [DatasetSize::Mini, DatasetSize::Small] {
        let report = run_tile_sweep(size, &tiles, RunOptions::default());
        let mse_at = |nt: Option<usize>, mode: ArithMode| {
            report
                .results
                .iter()
                .find(|r| r.tile == nt && r.mode == mode)
                .map(|r| {
                    assert!(r.error.is_none(), "{:?}", r.error);
                    r.mse
                })
                .unwrap()
        };
        let quire = mse_at(None, ArithMode::Posit64Quire);
        let noquire = mse_at(None, ArithMode::Posit64NoQuire);
        assert!(
            mse_at(Some(40), ArithMode::Posit64Quire) <= mse_at(Some(5), ArithMode::Posit64Quire),
            "{}: coarser tiling did not help",
            size.name()
        );
        let sandwiched = tiles
            .iter()
            .filter(|&&nt| {
                let t = mse_at(Some(nt), ArithMode::Posit64Quire);
                quire <= t && t <= noquire
            })
            .count();
        println!(
            "{}: sandwich holds for {sandwiched}/{} tile sizes (quire {quire:.3e}, no-quire {noquire:.3e})",
            size.name(),
            tiles.len()
        );
        assert!(
            sandwiched * 10 >= tiles.len() * 9,
            "{}: only {sandwiched}/{}",
            size.name(),
            tiles.len()
        );
    }
}

#[test]
fn criterion_10_approximate_unit_error_bounds() {
    // Random positive posit64 operands, relative error vs the exact units,
    // compared in exact dyadic arithmetic.
    let val = |p: P64| p.exact_value().finite().cloned();
    (0..16u64).into_par_iter().for_each(|chunk| {
        let mut rng = SplitMix64(0xAB0C ^ chunk);
        let mut positive = || loop {
            let bits = rng.next() & !(1 << 63);
            if bits != 0 {
                return P64::from_bits(bits);
            }
        };
        for _ in 0..62_500 {
            let a = positive();
            let b = positive();
            let exact = val(ops::mul(a, b)).unwrap();
            let got = val(approx::approx_mul(a, b)).unwrap();
            assert!(
                approx::rel_err_within(&got, &exact, 125, 1000),
                "mul {a} {b}: {got:?} vs {exact:?}"
            );
            let exact = val(ops::div(a, b)).unwrap();
            let got = val(approx::approx_div(a, b)).unwrap();
            assert!(
                approx::rel_err_within(&got, &exact, 125, 1000),
                "div {a} {b}: {got:?} vs {exact:?}"
            );
            let exact = val(ops::sqrt(a)).unwrap();
            let got = val(approx::approx_sqrt(a)).unwrap();
            assert!(
                approx::rel_err_within(&got, &exact, 65, 1000),
                "sqrt {a}: {got:?} vs {exact:?}"
            );
        }
    });
    // Exact on pure powers of two.
    let pow2 = |k: i64| P64::encode_round(&ExactReal::Finite(Dyadic::pow2(k)));
    for i in (-120..=120).step_by(17) {
        for j in (-120..=120).step_by(23) {
            let (a, b) = (pow2(i), pow2(j));
            assert_eq!(approx::approx_mul(a, b), ops::mul(a, b), "2^{i} * 2^{j}");
            assert_eq!(approx::approx_div(a, b), ops::div(a, b), "2^{i} / 2^{j}");
        }
        assert_eq!(approx::approx_sqrt(pow2(2 * i)), pow2(i), "sqrt 4^{i}");
    }
    // Special values behave exactly like the exact units.
    let one = P64::ONE;
    assert!(approx::approx_mul(P64::NAR, one).is_nar());
    assert!(approx::approx_mul(P64::ZERO, one).is_zero());
    assert!(approx::approx_div(one, P64::ZERO).is_nar());
    assert!(approx::approx_div(P64::ZERO, one).is_zero());
    assert!(approx::approx_sqrt(P64::from_i64(-3)).is_nar());
    assert!(approx::approx_sqrt(P64::ZERO).is_zero());
    assert_eq!(approx::approx_mul(P64::MAXPOS, P64::MAXPOS), P64::MAXPOS);
    println!("10^6 samples per op within bounds (mul/div 12.5%, sqrt 6.5%)");
}

#[test]
fn criterion_11_counter_reports_replace_hardware_tables() {
    println!("not reproducible in software: hardware wall-clock seconds (50 MHz soft core)");
    println!("not reproducible in software: synthesis LUT/FF/DSP resource counts");
    println!("substituted: operation-counter assertions on the kernel programs");
    let init = gemm_init(DatasetSize::Mini);
    let (ni, nj, nk) = (init.ni as u64, init.nj as u64, init.nk as u64);
    for nt in [5u64, 7, 16, 30, 40] {
        let m = Posit64Quire::default();
        let a = init.a.map(|v| m.from_rational(v));
        let b = init.b.map(|v| m.from_rational(v));
        let c = init.c.map(|v| m.from_rational(v));
        let g = GemmArgs {
            a: &a,
            b: &b,
            c: &c,
            alpha: m.from_rational(&init.alpha),
            beta: m.from_rational(&init.beta),
        };
        gemm_tiled(&m, &g, nt as usize);
        let counts = m.counters().snapshot();
        let tiles_per_elem = nk.div_ceil(nt);
        // one rounding per output element per k-tile, one quire load per tile
        assert_eq!(counts.qrounds, ni * nj * tiles_per_elem, "nt={nt}");
        assert_eq!(counts.qmadds, ni * nj * (nk + tiles_per_elem), "nt={nt}");
        assert_eq!(counts.muls, ni * nj * (nk + 1), "nt={nt}");
        println!(
            "gemm mini nt={nt}: {} qrounds = {}*{}*ceil({}/{nt})",
            counts.qrounds, ni, nj, nk
        );
    }
    // untiled quire formulation: exactly one rounding per output element
    let m = Posit64Quire::default();
    let a = init.a.map(|v| m.from_rational(v));
    let b = init.b.map(|v| m.from_rational(v));
    let c = init.c.map(|v| m.from_rational(v));
    let g = GemmArgs {
        a: &a,
        b: &b,
        c: &c,
        alpha: m.from_rational(&init.alpha),
        beta: m.from_rational(&init.beta),
    };
    gemm_quire(&m, &g);
    let counts = m.counters().snapshot();
    assert_eq!(counts.qrounds, ni * nj);
    assert_eq!(counts.qmadds, ni * nj * (nk + 1));
}
