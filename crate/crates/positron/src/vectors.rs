//! Test-vector files: one case per line, `op width in1 in2 expected` with hex
//! operands (`-` in the in2 column for unary ops). Blank lines and `#`
//! comments are skipped.

use crate::ops;
use crate::posit::Posit;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VecOp {
    Add,
    Sub,
    Mul,
    Div,
    Sqrt,
    Min,
    Max,
}

impl VecOp {
    fn parse(s: &str) -> Option<VecOp> {
        Some(match s {
            "add" => VecOp::Add,
            "sub" => VecOp::Sub,
            "mul" => VecOp::Mul,
            "div" => VecOp::Div,
            "sqrt" => VecOp::Sqrt,
            "min" => VecOp::Min,
            "max" => VecOp::Max,
            _ => return None,
        })
    }

    fn is_unary(self) -> bool {
        self == VecOp::Sqrt
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VectorCase {
    pub op: VecOp,
    pub width: u32,
    pub in1: u64,
    pub in2: Option<u64>,
    pub expected: u64,
}

fn parse_word(s: &str, width: u32) -> Result<u64, String> {
    let digits = s.strip_prefix("0x").unwrap_or(s);
    let v = u64::from_str_radix(digits, 16).map_err(|_| format!("bad hex value {s:?}"))?;
    if width < 64 && v >> width != 0 {
        return Err(format!("value {s} does not fit in {width} bits"));
    }
    Ok(v)
}

/// Parses one line; `Ok(None)` for blanks and comments.
pub fn parse_line(line: &str) -> Result<Option<VectorCase>, String> {
    let t = line.trim();
    if t.is_empty() || t.starts_with('#') {
        return Ok(None);
    }
    let fields: Vec<&str> = t.split_whitespace().collect();
    if fields.len() != 5 {
        return Err(format!("expected 5 fields, found {}", fields.len()));
    }
    let op = VecOp::parse(fields[0]).ok_or_else(|| format!("unknown op {:?}", fields[0]))?;
    let width: u32 = fields[1].parse().map_err(|_| format!("bad width {:?}", fields[1]))?;
    if !matches!(width, 8 | 16 | 32 | 64) {
        return Err(format!("unsupported width {width}"));
    }
    let in1 = parse_word(fields[2], width)?;
    let in2 = if fields[3] == "-" {
        if !op.is_unary() {
            return Err(format!("{:?} needs a second operand", fields[0]));
        }
        None
    } else {
        Some(parse_word(fields[3], width)?)
    };
    if op.is_unary() && in2.is_some() {
        return Err(format!("{:?} takes `-` for in2", fields[0]));
    }
    let expected = parse_word(fields[4], width)?;
    Ok(Some(VectorCase { op, width, in1, in2, expected }))
}

fn eval<const N: u32>(op: VecOp, in1: u64, in2: Option<u64>) -> u64 {
    let a = Posit::<N>::from_bits(in1);
    let b = Posit::<N>::from_bits(in2.unwrap_or(0));
    match op {
        VecOp::Add => ops::add(a, b),
        VecOp::Sub => ops::sub(a, b),
        VecOp::Mul => ops::mul(a, b),
        VecOp::Div => ops::div(a, b),
        VecOp::Sqrt => ops::sqrt(a),
        VecOp::Min => ops::min(a, b),
        VecOp::Max => ops::max(a, b),
    }
    .bits()
}

/// Runs one case against the arithmetic library.
pub fn run_case(case: &VectorCase) -> Result<(), String> {
    let got = match case.width {
        8 => eval::<8>(case.op, case.in1, case.in2),
        16 => eval::<16>(case.op, case.in1, case.in2),
        32 => eval::<32>(case.op, case.in1, case.in2),
        _ => eval::<64>(case.op, case.in1, case.in2),
    };
    if got == case.expected {
        Ok(())
    } else {
        Err(format!(
            "{:?} width {}: got {:#x}, expected {:#x}",
            case.op, case.width, got, case.expected
        ))
    }
}

/// Runs every case in a vector file, returning the count of passed cases or
/// the first failure tagged with its line number.
pub fn run_text(text: &str) -> Result<usize, String> {
    let mut passed = 0;
    for (lineno, line) in text.lines().enumerate() {
        let case = parse_line(line).map_err(|e| format!("line {}: {e}", lineno + 1))?;
        if let Some(case) = case {
            run_case(&case).map_err(|e| format!("line {}: {e}", lineno + 1))?;
            passed += 1;
        }
    }
    Ok(passed)
}
