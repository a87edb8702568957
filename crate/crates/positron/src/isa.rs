//! Assembler/disassembler for the Xposit custom RISC-V extension: bit-exact
//! encoding and decoding of every instruction under the 0x0B custom opcode,
//! plus a text assembly parser.
//!
//! Posit registers are rendered `p0..p31`, integer registers `x0..x31`.
//! Operand order follows RISC-V conventions: `rd, rs1, rs2`, and
//! `rs2, imm(rs1)` for stores.

use std::fmt;

pub const XPOSIT_OPCODE: u32 = 0x0B;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mnemonic {
    Plw,
    Pld,
    Psw,
    Psd,
    PaddS,
    PsubS,
    PmulS,
    PdivS,
    PminS,
    PmaxS,
    PsqrtS,
    QmaddS,
    QmsubS,
    QclrS,
    QnegS,
    QroundS,
    PcvtWS,
    PcvtWuS,
    PcvtLS,
    PcvtLuS,
    PcvtSW,
    PcvtSWu,
    PcvtSL,
    PcvtSLu,
    PsgnjS,
    PsgnjnS,
    PsgnjxS,
    PmvXW,
    PmvWX,
    PeqS,
    PltS,
    PleS,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegClass {
    Posit,
    Int,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Reg(RegClass),
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    /// I-type: imm[11:0] | rs1 | funct3 | rd.
    Load,
    /// S-type: imm[11:5] | rs2 | rs1 | funct3 | imm[4:0].
    Store,
    /// funct5 | 0x2 | rs2 | rs1 | 0x0 | rd.
    Comp { rs2: Slot, rs1: Slot, rd: Slot },
}

struct Row {
    mn: Mnemonic,
    name: &'static str,
    shape: Shape,
    /// funct3 for loads/stores, funct5 for computational rows.
    funct: u32,
}

use RegClass::{Int, Posit};
use Slot::{Reg, Zero};

const PPP: Shape = Shape::Comp { rs2: Reg(Posit), rs1: Reg(Posit), rd: Reg(Posit) };
const UNARY_PP: Shape = Shape::Comp { rs2: Zero, rs1: Reg(Posit), rd: Reg(Posit) };
const UNARY_PX: Shape = Shape::Comp { rs2: Zero, rs1: Reg(Posit), rd: Reg(Int) };
const UNARY_XP: Shape = Shape::Comp { rs2: Zero, rs1: Reg(Int), rd: Reg(Posit) };
const CMP: Shape = Shape::Comp { rs2: Reg(Posit), rs1: Reg(Posit), rd: Reg(Int) };
const QMAC: Shape = Shape::Comp { rs2: Reg(Posit), rs1: Reg(Posit), rd: Zero };
const QNULL: Shape = Shape::Comp { rs2: Zero, rs1: Zero, rd: Zero };
const QRD: Shape = Shape::Comp { rs2: Zero, rs1: Zero, rd: Reg(Posit) };

const TABLE: &[Row] = &[
    Row { mn: Mnemonic::Plw, name: "plw", shape: Shape::Load, funct: 0x1 },
    Row { mn: Mnemonic::Pld, name: "pld", shape: Shape::Load, funct: 0x5 },
    Row { mn: Mnemonic::Psw, name: "psw", shape: Shape::Store, funct: 0x3 },
    Row { mn: Mnemonic::Psd, name: "psd", shape: Shape::Store, funct: 0x6 },
    Row { mn: Mnemonic::PaddS, name: "padd.s", shape: PPP, funct: 0x00 },
    Row { mn: Mnemonic::PsubS, name: "psub.s", shape: PPP, funct: 0x01 },
    Row { mn: Mnemonic::PmulS, name: "pmul.s", shape: PPP, funct: 0x02 },
    Row { mn: Mnemonic::PdivS, name: "pdiv.s", shape: PPP, funct: 0x03 },
    Row { mn: Mnemonic::PminS, name: "pmin.s", shape: PPP, funct: 0x04 },
    Row { mn: Mnemonic::PmaxS, name: "pmax.s", shape: PPP, funct: 0x05 },
    Row { mn: Mnemonic::PsqrtS, name: "psqrt.s", shape: UNARY_PP, funct: 0x06 },
    Row { mn: Mnemonic::QmaddS, name: "qmadd.s", shape: QMAC, funct: 0x07 },
    Row { mn: Mnemonic::QmsubS, name: "qmsub.s", shape: QMAC, funct: 0x08 },
    Row { mn: Mnemonic::QclrS, name: "qclr.s", shape: QNULL, funct: 0x09 },
    Row { mn: Mnemonic::QnegS, name: "qneg.s", shape: QNULL, funct: 0x0A },
    Row { mn: Mnemonic::QroundS, name: "qround.s", shape: QRD, funct: 0x0B },
    Row { mn: Mnemonic::PcvtWS, name: "pcvt.w.s", shape: UNARY_PX, funct: 0x0C },
    Row { mn: Mnemonic::PcvtWuS, name: "pcvt.wu.s", shape: UNARY_PX, funct: 0x0D },
    Row { mn: Mnemonic::PcvtLS, name: "pcvt.l.s", shape: UNARY_PX, funct: 0x0E },
    Row { mn: Mnemonic::PcvtLuS, name: "pcvt.lu.s", shape: UNARY_PX, funct: 0x0F },
    Row { mn: Mnemonic::PcvtSW, name: "pcvt.s.w", shape: UNARY_XP, funct: 0x10 },
    Row { mn: Mnemonic::PcvtSWu, name: "pcvt.s.wu", shape: UNARY_XP, funct: 0x11 },
    Row { mn: Mnemonic::PcvtSL, name: "pcvt.s.l", shape: UNARY_XP, funct: 0x12 },
    Row { mn: Mnemonic::PcvtSLu, name: "pcvt.s.lu", shape: UNARY_XP, funct: 0x13 },
    Row { mn: Mnemonic::PsgnjS, name: "psgnj.s", shape: PPP, funct: 0x14 },
    Row { mn: Mnemonic::PsgnjnS, name: "psgnjn.s", shape: PPP, funct: 0x15 },
    Row { mn: Mnemonic::PsgnjxS, name: "psgnjx.s", shape: PPP, funct: 0x16 },
    Row { mn: Mnemonic::PmvXW, name: "pmv.x.w", shape: UNARY_PX, funct: 0x17 },
    Row { mn: Mnemonic::PmvWX, name: "pmv.w.x", shape: UNARY_XP, funct: 0x18 },
    Row { mn: Mnemonic::PeqS, name: "peq.s", shape: CMP, funct: 0x19 },
    Row { mn: Mnemonic::PltS, name: "plt.s", shape: CMP, funct: 0x1A },
    Row { mn: Mnemonic::PleS, name: "ple.s", shape: CMP, funct: 0x1B },
];

fn row(mn: Mnemonic) -> &'static Row {
    TABLE.iter().find(|r| r.mn == mn).unwrap()
}

impl Mnemonic {
    pub fn name(self) -> &'static str {
        row(self).name
    }

    pub fn all() -> impl Iterator<Item = Mnemonic> {
        TABLE.iter().map(|r| r.mn)
    }
}

/// Register-operand layout of a mnemonic, for tooling that enumerates
/// instruction forms. Memory forms also take a 12-bit immediate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstrForm {
    Load,
    Store,
    Comp { rd: Option<RegClass>, rs1: Option<RegClass>, rs2: Option<RegClass> },
}

pub fn instr_form(mn: Mnemonic) -> InstrForm {
    let cls = |s: Slot| match s {
        Reg(c) => Some(c),
        Zero => None,
    };
    match row(mn).shape {
        Shape::Load => InstrForm::Load,
        Shape::Store => InstrForm::Store,
        Shape::Comp { rs2, rs1, rd } => {
            InstrForm::Comp { rd: cls(rd), rs1: cls(rs1), rs2: cls(rs2) }
        }
    }
}

/// One Xposit instruction in operand form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct XpositInstruction {
    pub mnemonic: Mnemonic,
    pub rd: Option<u8>,
    pub rs1: Option<u8>,
    pub rs2: Option<u8>,
    pub imm: Option<i16>,
}

impl XpositInstruction {
    pub fn new(mnemonic: Mnemonic) -> Self {
        XpositInstruction { mnemonic, rd: None, rs1: None, rs2: None, imm: None }
    }

    pub fn rrr(mnemonic: Mnemonic, rd: u8, rs1: u8, rs2: u8) -> Self {
        XpositInstruction { mnemonic, rd: Some(rd), rs1: Some(rs1), rs2: Some(rs2), imm: None }
    }

    pub fn mem(mnemonic: Mnemonic, reg: u8, imm: i16, base: u8) -> Self {
        match row(mnemonic).shape {
            Shape::Load => XpositInstruction {
                mnemonic,
                rd: Some(reg),
                rs1: Some(base),
                rs2: None,
                imm: Some(imm),
            },
            Shape::Store => XpositInstruction {
                mnemonic,
                rd: None,
                rs1: Some(base),
                rs2: Some(reg),
                imm: Some(imm),
            },
            Shape::Comp { .. } => panic!("{} is not a memory instruction", mnemonic.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodecError {
    /// The word does not carry the Xposit opcode.
    NotXposit { opcode: u32 },
    /// Opcode matches but the funct fields or a must-be-zero field do not.
    InvalidEncoding { field: &'static str, value: u32 },
    MissingOperand { field: &'static str },
    UnexpectedOperand { field: &'static str },
    OutOfRange { field: &'static str, value: i64 },
}

impl fmt::Display for CodecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodecError::NotXposit { opcode } => {
                write!(f, "not an Xposit word: opcode {opcode:#04x}")
            }
            CodecError::InvalidEncoding { field, value } => {
                write!(f, "invalid encoding: field {field} has value {value:#x}")
            }
            CodecError::MissingOperand { field } => write!(f, "missing operand {field}"),
            CodecError::UnexpectedOperand { field } => {
                write!(f, "operand supplied for zero field {field}")
            }
            CodecError::OutOfRange { field, value } => {
                write!(f, "{field} value {value} out of range")
            }
        }
    }
}

impl std::error::Error for CodecError {}

fn reg_field(v: Option<u8>, field: &'static str) -> Result<u32, CodecError> {
    let r = v.ok_or(CodecError::MissingOperand { field })?;
    if r >= 32 {
        return Err(CodecError::OutOfRange { field, value: r as i64 });
    }
    Ok(r as u32)
}

fn zero_field(v: Option<u8>, field: &'static str) -> Result<u32, CodecError> {
    if v.is_some() {
        return Err(CodecError::UnexpectedOperand { field });
    }
    Ok(0)
}

fn slot_field(s: Slot, v: Option<u8>, field: &'static str) -> Result<u32, CodecError> {
    match s {
        Reg(_) => reg_field(v, field),
        Zero => zero_field(v, field),
    }
}

/// The unique 32-bit word for a valid instruction.
pub fn encode(instr: &XpositInstruction) -> Result<u32, CodecError> {
    let r = row(instr.mnemonic);
    match r.shape {
        Shape::Load => {
            let rd = reg_field(instr.rd, "rd")?;
            let rs1 = reg_field(instr.rs1, "rs1")?;
            zero_field(instr.rs2, "rs2")?;
            let imm = instr.imm.ok_or(CodecError::MissingOperand { field: "imm" })?;
            if !(-2048..=2047).contains(&imm) {
                return Err(CodecError::OutOfRange { field: "imm", value: imm as i64 });
            }
            let imm = (imm as u32) & 0xFFF;
            Ok(imm << 20 | rs1 << 15 | r.funct << 12 | rd << 7 | XPOSIT_OPCODE)
        }
        Shape::Store => {
            let rs2 = reg_field(instr.rs2, "rs2")?;
            let rs1 = reg_field(instr.rs1, "rs1")?;
            zero_field(instr.rd, "rd")?;
            let imm = instr.imm.ok_or(CodecError::MissingOperand { field: "imm" })?;
            if !(-2048..=2047).contains(&imm) {
                return Err(CodecError::OutOfRange { field: "imm", value: imm as i64 });
            }
            let imm = (imm as u32) & 0xFFF;
            Ok((imm >> 5) << 25
                | rs2 << 20
                | rs1 << 15
                | r.funct << 12
                | (imm & 0x1F) << 7
                | XPOSIT_OPCODE)
        }
        Shape::Comp { rs2, rs1, rd } => {
            if instr.imm.is_some() {
                return Err(CodecError::UnexpectedOperand { field: "imm" });
            }
            let rs2 = slot_field(rs2, instr.rs2, "rs2")?;
            let rs1 = slot_field(rs1, instr.rs1, "rs1")?;
            let rd = slot_field(rd, instr.rd, "rd")?;
            Ok(r.funct << 27 | 0x2 << 25 | rs2 << 20 | rs1 << 15 | rd << 7 | XPOSIT_OPCODE)
        }
    }
}

/// Exact inverse of `encode` on valid words.
pub fn decode(w: u32) -> Result<XpositInstruction, CodecError> {
    let opcode = w & 0x7F;
    if opcode != XPOSIT_OPCODE {
        return Err(CodecError::NotXposit { opcode });
    }
    let funct3 = w >> 12 & 0x7;
    let rd = (w >> 7 & 0x1F) as u8;
    let rs1 = (w >> 15 & 0x1F) as u8;
    let rs2 = (w >> 20 & 0x1F) as u8;
    match funct3 {
        0x1 | 0x5 => {
            let mn = if funct3 == 0x1 { Mnemonic::Plw } else { Mnemonic::Pld };
            let imm = sign_extend_12(w >> 20);
            Ok(XpositInstruction {
                mnemonic: mn,
                rd: Some(rd),
                rs1: Some(rs1),
                rs2: None,
                imm: Some(imm),
            })
        }
        0x3 | 0x6 => {
            let mn = if funct3 == 0x3 { Mnemonic::Psw } else { Mnemonic::Psd };
            let imm = sign_extend_12((w >> 25) << 5 | (w >> 7 & 0x1F));
            Ok(XpositInstruction {
                mnemonic: mn,
                rd: None,
                rs1: Some(rs1),
                rs2: Some(rs2),
                imm: Some(imm),
            })
        }
        0x0 => {
            let fmt = w >> 25 & 0x3;
            if fmt != 0x2 {
                return Err(CodecError::InvalidEncoding { field: "bits 26-25", value: fmt });
            }
            let funct5 = w >> 27;
            let r = TABLE
                .iter()
                .find(|r| matches!(r.shape, Shape::Comp { .. }) && r.funct == funct5)
                .ok_or(CodecError::InvalidEncoding { field: "funct5", value: funct5 })?;
            let Shape::Comp { rs2: s2, rs1: s1, rd: sd } = r.shape else { unreachable!() };
            let take = |s: Slot, v: u8, field: &'static str| match s {
                Reg(_) => Ok(Some(v)),
                Zero => {
                    if v != 0 {
                        Err(CodecError::InvalidEncoding { field, value: v as u32 })
                    } else {
                        Ok(None)
                    }
                }
            };
            Ok(XpositInstruction {
                mnemonic: r.mn,
                rd: take(sd, rd, "rd")?,
                rs1: take(s1, rs1, "rs1")?,
                rs2: take(s2, rs2, "rs2")?,
                imm: None,
            })
        }
        other => Err(CodecError::InvalidEncoding { field: "funct3", value: other }),
    }
}

fn sign_extend_12(v: u32) -> i16 {
    let v = (v & 0xFFF) as i16;
    (v << 4) >> 4
}

// ---------------------------------------------------------------------------
// Text assembly
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

fn perr(column: usize, message: impl Into<String>) -> ParseError {
    ParseError { column, message: message.into() }
}

fn parse_reg(tok: &str, class: RegClass, col: usize) -> Result<u8, ParseError> {
    let (prefix, want) = match class {
        Posit => ('p', "posit register p0..p31"),
        Int => ('x', "integer register x0..x31"),
    };
    let rest = tok
        .strip_prefix(prefix)
        .ok_or_else(|| perr(col, format!("expected {want}, found {tok:?}")))?;
    let n: u8 = rest.parse().map_err(|_| perr(col, format!("expected {want}, found {tok:?}")))?;
    if n >= 32 {
        return Err(perr(col, format!("register index {n} out of range")));
    }
    Ok(n)
}

/// Assembles one instruction line into its 32-bit word.
pub fn assemble_text(line: &str) -> Result<u32, ParseError> {
    let trimmed = line.trim();
    if trimmed.is_empty() {
        return Err(perr(0, "empty line"));
    }
    let mstart = line.len() - line.trim_start().len();
    let (mn_tok, rest) = match trimmed.split_once(char::is_whitespace) {
        Some((m, r)) => (m, r.trim()),
        None => (trimmed, ""),
    };
    let lower = mn_tok.to_ascii_lowercase();
    let r = TABLE
        .iter()
        .find(|r| r.name == lower)
        .ok_or_else(|| perr(mstart, format!("unknown mnemonic {mn_tok:?}")))?;
    let ops: Vec<&str> = if rest.is_empty() {
        Vec::new()
    } else {
        rest.split(',').map(str::trim).collect()
    };
    let opcol = |i: usize| {
        // Column of the i-th operand, for error messages.
        ops.iter().take(i).fold(line.find(rest).unwrap_or(0), |c, o| c + o.len() + 1)
    };
    let instr = match r.shape {
        Shape::Load | Shape::Store => {
            if ops.len() != 2 {
                return Err(perr(mstart, format!("{} takes 2 operands, found {}", r.name, ops.len())));
            }
            let reg = parse_reg(ops[0], Posit, opcol(0))?;
            let (imm_s, base_s) = ops[1]
                .strip_suffix(')')
                .and_then(|s| s.split_once('('))
                .ok_or_else(|| perr(opcol(1), format!("expected imm(xN), found {:?}", ops[1])))?;
            let imm: i16 = imm_s
                .trim()
                .parse()
                .map_err(|_| perr(opcol(1), format!("bad immediate {imm_s:?}")))?;
            if !(-2048..=2047).contains(&imm) {
                return Err(perr(opcol(1), format!("immediate {imm} out of 12-bit range")));
            }
            let base = parse_reg(base_s.trim(), Int, opcol(1))?;
            XpositInstruction::mem(r.mn, reg, imm, base)
        }
        Shape::Comp { rs2, rs1, rd } => {
            let mut want: Vec<(&'static str, RegClass)> = Vec::new();
            if let Reg(c) = rd {
                want.push(("rd", c));
            }
            if let Reg(c) = rs1 {
                want.push(("rs1", c));
            }
            if let Reg(c) = rs2 {
                want.push(("rs2", c));
            }
            if ops.len() != want.len() {
                return Err(perr(
                    mstart,
                    format!("{} takes {} operands, found {}", r.name, want.len(), ops.len()),
                ));
            }
            let mut instr = XpositInstruction::new(r.mn);
            for (i, ((field, class), tok)) in want.iter().zip(&ops).enumerate() {
                let v = parse_reg(tok, *class, opcol(i))?;
                match *field {
                    "rd" => instr.rd = Some(v),
                    "rs1" => instr.rs1 = Some(v),
                    _ => instr.rs2 = Some(v),
                }
            }
            instr
        }
    };
    encode(&instr).map_err(|e| perr(mstart, e.to_string()))
}

/// Canonical text for a word: `assemble_text(disassemble(w)) == w`.
pub fn disassemble(w: u32) -> Result<String, CodecError> {
    let instr = decode(w)?;
    let r = row(instr.mnemonic);
    let s = match r.shape {
        Shape::Load => format!(
            "{} p{}, {}(x{})",
            r.name,
            instr.rd.unwrap(),
            instr.imm.unwrap(),
            instr.rs1.unwrap()
        ),
        Shape::Store => format!(
            "{} p{}, {}(x{})",
            r.name,
            instr.rs2.unwrap(),
            instr.imm.unwrap(),
            instr.rs1.unwrap()
        ),
        Shape::Comp { rs2, rs1, rd } => {
            let mut parts: Vec<String> = Vec::new();
            let letter = |c: RegClass| match c {
                Posit => 'p',
                Int => 'x',
            };
            if let Reg(c) = rd {
                parts.push(format!("{}{}", letter(c), instr.rd.unwrap()));
            }
            if let Reg(c) = rs1 {
                parts.push(format!("{}{}", letter(c), instr.rs1.unwrap()));
            }
            if let Reg(c) = rs2 {
                parts.push(format!("{}{}", letter(c), instr.rs2.unwrap()));
            }
            if parts.is_empty() {
                r.name.to_string()
            } else {
                format!("{} {}", r.name, parts.join(", "))
            }
        }
    };
    Ok(s)
}
