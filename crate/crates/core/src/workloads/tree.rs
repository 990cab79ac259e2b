//! Sum, right-most leaf and increment over [`Tree`].
//!
//! The packed traversals differ per layout only in how they treat field
//! sizes: [`Plain`] has none, [`Indirect`] has one before every field and
//! [`IndirectSkipLast`] one before the left child of a node only. Sizes the
//! traversal does not need are skipped explicitly.

use crate::format::{DecodeError, Indirect, IndirectSkipLast, Layout, Plain};
use crate::reader::{Cursor, Packed, RawCursor};
use crate::builder::{Needs, Pack, Scope};

use super::{Tree, TreeCase};

pub fn sum_native(tree: &Tree) -> i64 {
    match tree {
        Tree::Leaf(v) => *v,
        Tree::Node(l, r) => sum_native(l).wrapping_add(sum_native(r)),
    }
}

pub fn rightmost_native(mut tree: &Tree) -> i64 {
    loop {
        match tree {
            Tree::Leaf(v) => return *v,
            Tree::Node(_, r) => tree = r,
        }
    }
}

pub fn increment_native(tree: &Tree) -> Tree {
    match tree {
        Tree::Leaf(v) => Tree::Leaf(v.wrapping_add(1)),
        Tree::Node(l, r) => Tree::node(increment_native(l), increment_native(r)),
    }
}

type One<'a, L> = Cursor<'a, L, (Tree, ())>;
type Done<'a, L> = Cursor<'a, L, ()>;

/// Per-layout packed traversals of a single tree.
pub trait TreeLayout: Layout {
    fn sum(c: One<'_, Self>) -> Result<(i64, Done<'_, Self>), DecodeError>;

    /// Reads past a tree without looking at it.
    fn skip(c: One<'_, Self>) -> Result<((), Done<'_, Self>), DecodeError>;

    /// Right-most leaf, reading every left subtree on the way.
    fn rightmost(c: One<'_, Self>) -> Result<(i64, Done<'_, Self>), DecodeError>;

    /// Copies the tree into `out` with every leaf incremented.
    fn increment<'a>(
        c: One<'a, Self>,
        out: Needs<Self, (Tree, ()), Scope>,
    ) -> Result<(Needs<Self, (), Scope>, Done<'a, Self>), DecodeError>;

    /// Builds the incremented native tree during a single pass.
    fn increment_to_native(c: One<'_, Self>) -> Result<(Tree, Done<'_, Self>), DecodeError>;
}

/// Layouts with a size before a node's left child, which lets the
/// right-most search jump over it.
pub trait JumpLayout: TreeLayout {
    fn rightmost_jump(c: One<'_, Self>) -> Result<(i64, Done<'_, Self>), DecodeError>;
}

impl TreeLayout for Plain {
    fn sum(c: One<'_, Self>) -> Result<(i64, Done<'_, Self>), DecodeError> {
        c.case_tree(
            |c| c.read_int(),
            |c| {
                let (l, c) = c.focus(Self::sum)?;
                let (r, c) = Self::sum(c)?;
                Ok((l.wrapping_add(r), c))
            },
        )
    }

    fn skip(c: One<'_, Self>) -> Result<((), Done<'_, Self>), DecodeError> {
        c.case_tree(
            |c| Ok(((), c.read_int()?.1)),
            |c| {
                let (_, c) = c.focus(Self::skip)?;
                Self::skip(c)
            },
        )
    }

    fn rightmost(c: One<'_, Self>) -> Result<(i64, Done<'_, Self>), DecodeError> {
        c.case_tree(
            |c| c.read_int(),
            |c| {
                let (_, c) = c.focus(Self::skip)?;
                Self::rightmost(c)
            },
        )
    }

    fn increment<'a>(
        c: One<'a, Self>,
        out: Needs<Self, (Tree, ()), Scope>,
    ) -> Result<(Needs<Self, (), Scope>, Done<'a, Self>), DecodeError> {
        c.transform_tree(
            out,
            |c, out| {
                let (v, c) = c.read_int()?;
                Ok((out.write_int(v.wrapping_add(1)), c))
            },
            |c, out| {
                let (out, c) = c.focus(|c| out.apply_with(|o| Self::increment(c, o)))?;
                Self::increment(c, out)
            },
        )
    }

    fn increment_to_native(c: One<'_, Self>) -> Result<(Tree, Done<'_, Self>), DecodeError> {
        c.case_tree(
            |c| {
                let (v, c) = c.read_int()?;
                Ok((Tree::Leaf(v.wrapping_add(1)), c))
            },
            |c| {
                let (l, c) = c.focus(Self::increment_to_native)?;
                let (r, c) = Self::increment_to_native(c)?;
                Ok((Tree::node(l, r), c))
            },
        )
    }
}

impl TreeLayout for Indirect {
    fn sum(c: One<'_, Self>) -> Result<(i64, Done<'_, Self>), DecodeError> {
        c.case_tree(
            |c| c.skip_field_size()?.read_int(),
            |c| {
                let (l, c) = c.skip_field_size()?.focus(Self::sum)?;
                let (r, c) = Self::sum(c.skip_field_size()?)?;
                Ok((l.wrapping_add(r), c))
            },
        )
    }

    fn skip(c: One<'_, Self>) -> Result<((), Done<'_, Self>), DecodeError> {
        c.case_tree(
            |c| Ok(((), c.skip_field_size()?.read_int()?.1)),
            |c| {
                let (_, c) = c.skip_field_size()?.focus(Self::skip)?;
                Self::skip(c.skip_field_size()?)
            },
        )
    }

    fn rightmost(c: One<'_, Self>) -> Result<(i64, Done<'_, Self>), DecodeError> {
        c.case_tree(
            |c| c.skip_field_size()?.read_int(),
            |c| {
                let (_, c) = c.skip_field_size()?.focus(Self::skip)?;
                Self::rightmost(c.skip_field_size()?)
            },
        )
    }

    fn increment<'a>(
        c: One<'a, Self>,
        out: Needs<Self, (Tree, ()), Scope>,
    ) -> Result<(Needs<Self, (), Scope>, Done<'a, Self>), DecodeError> {
        c.transform_tree(
            out,
            |c, out| {
                let (v, c) = c.skip_field_size()?.read_int()?;
                Ok((out.write_int(v.wrapping_add(1)), c))
            },
            |c, out| {
                let c = c.skip_field_size()?;
                let (out, c) = c.focus(|c| out.apply_with(|o| Self::increment(c, o)))?;
                Self::increment(c.skip_field_size()?, out)
            },
        )
    }

    fn increment_to_native(c: One<'_, Self>) -> Result<(Tree, Done<'_, Self>), DecodeError> {
        c.case_tree(
            |c| {
                let (v, c) = c.skip_field_size()?.read_int()?;
                Ok((Tree::Leaf(v.wrapping_add(1)), c))
            },
            |c| {
                let (l, c) = c.skip_field_size()?.focus(Self::increment_to_native)?;
                let (r, c) = Self::increment_to_native(c.skip_field_size()?)?;
                Ok((Tree::node(l, r), c))
            },
        )
    }
}

impl JumpLayout for Indirect {
    fn rightmost_jump(c: One<'_, Self>) -> Result<(i64, Done<'_, Self>), DecodeError> {
        c.case_tree(
            |c| c.skip_field_size()?.read_int(),
            |c| {
                let (left, c) = c.read_field_size()?;
                let c = c.jump(left)?.skip_field_size()?;
                Self::rightmost_jump(c)
            },
        )
    }
}

impl TreeLayout for IndirectSkipLast {
    fn sum(c: One<'_, Self>) -> Result<(i64, Done<'_, Self>), DecodeError> {
        c.case_tree(
            |c| c.read_int(),
            |c| {
                let (l, c) = c.skip_field_size()?.focus(Self::sum)?;
                let (r, c) = Self::sum(c)?;
                Ok((l.wrapping_add(r), c))
            },
        )
    }

    fn skip(c: One<'_, Self>) -> Result<((), Done<'_, Self>), DecodeError> {
        c.case_tree(
            |c| Ok(((), c.read_int()?.1)),
            |c| {
                let (_, c) = c.skip_field_size()?.focus(Self::skip)?;
                Self::skip(c)
            },
        )
    }

    fn rightmost(c: One<'_, Self>) -> Result<(i64, Done<'_, Self>), DecodeError> {
        c.case_tree(
            |c| c.read_int(),
            |c| {
                let (_, c) = c.skip_field_size()?.focus(Self::skip)?;
                Self::rightmost(c)
            },
        )
    }

    fn increment<'a>(
        c: One<'a, Self>,
        out: Needs<Self, (Tree, ()), Scope>,
    ) -> Result<(Needs<Self, (), Scope>, Done<'a, Self>), DecodeError> {
        c.transform_tree(
            out,
            |c, out| {
                let (v, c) = c.read_int()?;
                Ok((out.write_int(v.wrapping_add(1)), c))
            },
            |c, out| {
                let c = c.skip_field_size()?;
                let (out, c) = c.focus(|c| out.apply_with(|o| Self::increment(c, o)))?;
                Self::increment(c, out)
            },
        )
    }

    fn increment_to_native(c: One<'_, Self>) -> Result<(Tree, Done<'_, Self>), DecodeError> {
        c.case_tree(
            |c| {
                let (v, c) = c.read_int()?;
                Ok((Tree::Leaf(v.wrapping_add(1)), c))
            },
            |c| {
                let (l, c) = c.skip_field_size()?.focus(Self::increment_to_native)?;
                let (r, c) = Self::increment_to_native(c)?;
                Ok((Tree::node(l, r), c))
            },
        )
    }
}

impl JumpLayout for IndirectSkipLast {
    fn rightmost_jump(c: One<'_, Self>) -> Result<(i64, Done<'_, Self>), DecodeError> {
        c.case_tree(
            |c| c.read_int(),
            |c| {
                let (left, c) = c.read_field_size()?;
                Self::rightmost_jump(c.jump(left)?)
            },
        )
    }
}

pub type PackedTree<L> = Packed<L, (Tree, ())>;

pub fn sum_packed<L: TreeLayout>(p: &PackedTree<L>) -> Result<i64, DecodeError> {
    L::sum(p.cursor()).map(|(v, _)| v)
}

/// Right-most leaf by full traversal. Also works on indirect layouts,
/// skipping every size without using it.
pub fn rightmost_packed_plain<L: TreeLayout>(p: &PackedTree<L>) -> Result<i64, DecodeError> {
    L::rightmost(p.cursor()).map(|(v, _)| v)
}

/// Right-most leaf and the number of bytes the traversal read.
pub fn rightmost_packed_plain_counted<L: TreeLayout>(
    p: &PackedTree<L>,
) -> Result<(i64, usize), DecodeError> {
    L::rightmost(p.cursor()).map(|(v, c)| (v, c.bytes_consumed()))
}

/// Right-most leaf, jumping over every left subtree.
pub fn rightmost_packed_indirect<L: JumpLayout>(p: &PackedTree<L>) -> Result<i64, DecodeError> {
    L::rightmost_jump(p.cursor()).map(|(v, _)| v)
}

pub fn rightmost_packed_indirect_counted<L: JumpLayout>(
    p: &PackedTree<L>,
) -> Result<(i64, usize), DecodeError> {
    L::rightmost_jump(p.cursor()).map(|(v, c)| (v, c.bytes_consumed()))
}

/// New buffer, same shape and length, every leaf plus one.
pub fn increment_packed<L: TreeLayout>(p: &PackedTree<L>) -> Result<PackedTree<L>, DecodeError> {
    let (out, _) = Needs::with_capacity(p.len()).apply_with(|o| L::increment(p.cursor(), o))?;
    Ok(out
        .finish()
        .expect("field extents are unchanged by an increment"))
}

pub fn unpack_then_sum<L: TreeLayout>(p: &PackedTree<L>) -> Result<i64, DecodeError>
where
    Tree: crate::Unpack<L>,
{
    Ok(sum_native(&p.unpack()?))
}

pub fn unpack_then_rightmost<L: TreeLayout>(p: &PackedTree<L>) -> Result<i64, DecodeError>
where
    Tree: crate::Unpack<L>,
{
    Ok(rightmost_native(&p.unpack()?))
}

pub fn unpack_increment_repack<L: TreeLayout>(p: &PackedTree<L>) -> Result<PackedTree<L>, DecodeError>
where
    Tree: crate::Unpack<L>,
{
    let tree = increment_native(&p.unpack()?);
    Ok(tree.pack().expect("field extents are unchanged by an increment"))
}

/// Increments while pattern matching into a native tree, then packs it.
pub fn case_increment_then_pack<L: TreeLayout>(p: &PackedTree<L>) -> Result<PackedTree<L>, DecodeError> {
    let (tree, _) = L::increment_to_native(p.cursor())?;
    Ok(tree.pack().expect("field extents are unchanged by an increment"))
}

fn raw_skip_size<L: Layout>(c: &mut RawCursor<'_>, index: usize, fields: usize) -> Result<(), DecodeError> {
    if L::MODE.has_field_size(index, fields) {
        c.read_size()?;
    }
    Ok(())
}

fn invalid_tag(c: &RawCursor<'_>, tag: u8) -> DecodeError {
    DecodeError::InvalidTag {
        offset: c.offset() - 1,
        tag,
        constructors: 2,
    }
}

fn raw_sum_at<L: Layout>(c: &mut RawCursor<'_>) -> Result<i64, DecodeError> {
    match c.read_tag()? {
        0 => {
            raw_skip_size::<L>(c, 0, 1)?;
            c.read_int()
        }
        1 => {
            raw_skip_size::<L>(c, 0, 2)?;
            let l = raw_sum_at::<L>(c)?;
            raw_skip_size::<L>(c, 1, 2)?;
            let r = raw_sum_at::<L>(c)?;
            Ok(l.wrapping_add(r))
        }
        tag => Err(invalid_tag(c, tag)),
    }
}

/// Sum over the raw cursor: no obligation tracking.
pub fn raw_sum<L: Layout>(bytes: &[u8]) -> Result<i64, DecodeError> {
    raw_sum_at::<L>(&mut RawCursor::new(bytes))
}

fn raw_rightmost_at<L: Layout>(c: &mut RawCursor<'_>) -> Result<i64, DecodeError> {
    match c.read_tag()? {
        0 => {
            raw_skip_size::<L>(c, 0, 1)?;
            c.read_int()
        }
        1 => {
            if L::MODE.has_field_size(0, 2) {
                let left = c.read_size()?;
                c.skip(left)?;
            } else {
                raw_sum_at::<L>(c)?;
            }
            raw_skip_size::<L>(c, 1, 2)?;
            raw_rightmost_at::<L>(c)
        }
        tag => Err(invalid_tag(c, tag)),
    }
}

/// Right-most leaf over the raw cursor, jumping whenever the layout allows.
/// Returns the value and the bytes read.
pub fn raw_rightmost<L: Layout>(bytes: &[u8]) -> Result<(i64, usize), DecodeError> {
    let mut c = RawCursor::new(bytes);
    let v = raw_rightmost_at::<L>(&mut c)?;
    Ok((v, c.bytes_consumed()))
}
