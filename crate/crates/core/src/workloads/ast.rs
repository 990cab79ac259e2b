//! Evaluation of [`Ast`] expressions.
//!
//! Arithmetic wraps on overflow; `i64::MIN / -1` wraps to `i64::MIN`.
//! Division truncates toward zero.

use crate::format::{DecodeError, Indirect, IndirectSkipLast, Layout, Plain};
use crate::reader::{Cursor, Packed, RawCursor};

use super::{Ast, AstCase};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

impl Op {
    pub fn apply(self, l: i64, r: i64) -> Result<i64, EvalError> {
        match self {
            Op::Add => Ok(l.wrapping_add(r)),
            Op::Sub => Ok(l.wrapping_sub(r)),
            Op::Mul => Ok(l.wrapping_mul(r)),
            Op::Div if r == 0 => Err(EvalError::DivisionByZero),
            Op::Div => Ok(l.wrapping_div(r)),
        }
    }

    /// Operator of the constructor with this tag (1 to 4).
    fn from_tag(tag: u8) -> Option<Op> {
        match tag {
            1 => Some(Op::Add),
            2 => Some(Op::Sub),
            3 => Some(Op::Mul),
            4 => Some(Op::Div),
            _ => None,
        }
    }
}

pub fn eval_native(ast: &Ast) -> Result<i64, EvalError> {
    let (op, l, r) = match ast {
        Ast::Value(v) => return Ok(*v),
        Ast::Add(l, r) => (Op::Add, l, r),
        Ast::Sub(l, r) => (Op::Sub, l, r),
        Ast::Mul(l, r) => (Op::Mul, l, r),
        Ast::Div(l, r) => (Op::Div, l, r),
    };
    op.apply(eval_native(l)?, eval_native(r)?)
}

type One<'a, L> = Cursor<'a, L, (Ast, ())>;
type Done<'a, L> = Cursor<'a, L, ()>;

/// Packed evaluation for one layout.
pub trait AstLayout: Layout {
    fn eval(c: One<'_, Self>) -> Result<(i64, Done<'_, Self>), EvalError>;
}

fn plain_operands<'a>(
    c: Cursor<'a, Plain, (Ast, (Ast, ()))>,
    op: Op,
) -> Result<(i64, Done<'a, Plain>), EvalError> {
    let (l, c) = c.focus(Plain::eval)?;
    let (r, c) = Plain::eval(c)?;
    Ok((op.apply(l, r)?, c))
}

impl AstLayout for Plain {
    fn eval(c: One<'_, Self>) -> Result<(i64, Done<'_, Self>), EvalError> {
        c.case_ast(
            |c| Ok(c.read_int()?),
            |c| plain_operands(c, Op::Add),
            |c| plain_operands(c, Op::Sub),
            |c| plain_operands(c, Op::Mul),
            |c| plain_operands(c, Op::Div),
        )
    }
}

type IndirectOperands<'a> = Cursor<'a, Indirect, (crate::FieldSize, (Ast, (crate::FieldSize, (Ast, ()))))>;

fn indirect_operands(c: IndirectOperands<'_>, op: Op) -> Result<(i64, Done<'_, Indirect>), EvalError> {
    let (l, c) = c.skip_field_size()?.focus(Indirect::eval)?;
    let (r, c) = Indirect::eval(c.skip_field_size()?)?;
    Ok((op.apply(l, r)?, c))
}

impl AstLayout for Indirect {
    fn eval(c: One<'_, Self>) -> Result<(i64, Done<'_, Self>), EvalError> {
        c.case_ast(
            |c| Ok(c.skip_field_size()?.read_int()?),
            |c| indirect_operands(c, Op::Add),
            |c| indirect_operands(c, Op::Sub),
            |c| indirect_operands(c, Op::Mul),
            |c| indirect_operands(c, Op::Div),
        )
    }
}

type SkipLastOperands<'a> = Cursor<'a, IndirectSkipLast, (crate::FieldSize, (Ast, (Ast, ())))>;

fn skip_last_operands(
    c: SkipLastOperands<'_>,
    op: Op,
) -> Result<(i64, Done<'_, IndirectSkipLast>), EvalError> {
    let (l, c) = c.skip_field_size()?.focus(IndirectSkipLast::eval)?;
    let (r, c) = IndirectSkipLast::eval(c)?;
    Ok((op.apply(l, r)?, c))
}

impl AstLayout for IndirectSkipLast {
    fn eval(c: One<'_, Self>) -> Result<(i64, Done<'_, Self>), EvalError> {
        c.case_ast(
            |c| Ok(c.read_int()?),
            |c| skip_last_operands(c, Op::Add),
            |c| skip_last_operands(c, Op::Sub),
            |c| skip_last_operands(c, Op::Mul),
            |c| skip_last_operands(c, Op::Div),
        )
    }
}

pub type PackedAst<L> = Packed<L, (Ast, ())>;

pub fn eval_packed<L: AstLayout>(p: &PackedAst<L>) -> Result<i64, EvalError> {
    L::eval(p.cursor()).map(|(v, _)| v)
}

pub fn unpack_then_eval<L: AstLayout>(p: &PackedAst<L>) -> Result<i64, EvalError>
where
    Ast: crate::Unpack<L>,
{
    eval_native(&p.unpack()?)
}

fn raw_eval_at<L: Layout>(c: &mut RawCursor<'_>) -> Result<i64, EvalError> {
    let tag = c.read_tag()?;
    if tag == 0 {
        if L::MODE.has_field_size(0, 1) {
            c.read_size()?;
        }
        return Ok(c.read_int()?);
    }
    let op = Op::from_tag(tag).ok_or(DecodeError::InvalidTag {
        offset: c.offset() - 1,
        tag,
        constructors: 5,
    })?;
    if L::MODE.has_field_size(0, 2) {
        c.read_size()?;
    }
    let l = raw_eval_at::<L>(c)?;
    if L::MODE.has_field_size(1, 2) {
        c.read_size()?;
    }
    let r = raw_eval_at::<L>(c)?;
    op.apply(l, r)
}

/// Evaluation over the raw cursor.
pub fn raw_eval<L: Layout>(bytes: &[u8]) -> Result<i64, EvalError> {
    raw_eval_at::<L>(&mut RawCursor::new(bytes))
}
