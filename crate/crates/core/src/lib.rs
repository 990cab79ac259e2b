//! Packed algebraic data: serialized values you traverse in place.
//!
//! A packed value is laid out contiguously: a one-byte constructor tag
//! followed by its fields, inlined depth-first, optionally with a 32-bit size
//! before fields so traversals can jump over them. There is no
//! deserialization step; programs walk the bytes with a typed cursor.
//!
//! The pieces:
//!
//! - [`format`]: the wire encoding and the three layouts ([`Plain`],
//!   [`Indirect`], [`IndirectSkipLast`]).
//! - [`Needs`]: a builder typed by the values it still owes.
//! - [`Packed`] and [`Cursor`]: an immutable buffer and a read position
//!   typed by what lies ahead of it. [`RawCursor`] is the untyped variant.
//! - [`packed_types!`]: generates native types plus `start_*`/`write_*`,
//!   `case_*`, `transform_*`, [`Pack`] and [`Unpack`] for a schema.
//! - [`schema`]: the schema language and a schema-driven packer and
//!   validator that do not rely on generated code.
//! - [`workloads`]: binary trees and arithmetic ASTs with packed, raw and
//!   native traversals. [`bench`] times them.
//!
//! ```
//! use packed::{Pack, Plain, TreeCase};
//! use packed::workloads::Tree;
//!
//! let tree = Tree::Node(Box::new(Tree::Leaf(1)), Box::new(Tree::Leaf(2)));
//! let buf = tree.pack::<Plain>().unwrap();
//! assert_eq!(buf.len(), 19);
//!
//! // Sum of the two leaves, read straight from the bytes.
//! let (sum, _) = buf.run_reader(|c| {
//!     c.case_tree(
//!         |c| c.read_int(),
//!         |c| {
//!             let (l, c) = c.case_tree(|c| c.read_int(), |_| unreachable!())?;
//!             let (r, c) = c.case_tree(|c| c.read_int(), |_| unreachable!())?;
//!             Ok::<_, packed::DecodeError>((l + r, c))
//!         },
//!     )
//! }).unwrap();
//! assert_eq!(sum, 3);
//! ```
//!
//! Runnable programs for each capability live in `crates/core/examples/`.

extern crate self as packed;

pub mod bench;
pub mod builder;
pub mod cli;
pub mod format;
pub mod reader;
pub mod schema;
pub mod typelist;
pub mod workloads;

pub use builder::{Needs, Pack, Scope};
pub use format::{
    DecodeError, FieldSize, FieldTooLarge, Indirect, IndirectSkipLast, Layout, LayoutMode, Plain,
};
pub use reader::{Cursor, Packed, RawCursor, Unpack};
pub use typelist::TypeList;
pub use workloads::{AstBuild, AstCase, TreeBuild, TreeCase};

/// Declares packed types from schema syntax.
///
/// ```
/// packed::packed_types! {
///     data Shape = Circle Int | Rect Int Int | Group Shapes
///     data Shapes = Nil | Cons Shape Shapes
/// }
/// # fn main() {}
/// ```
///
/// For each `data T` this generates:
///
/// - `enum T` with one variant per constructor (`Int` fields are `i64`,
///   references are boxed), deriving `Debug`, `Clone`, `PartialEq`, `Eq`,
///   `Hash`;
/// - [`Pack`] (any layout), [`Unpack`] for each layout, and
///   [`schema::Adt`];
/// - `trait TBuild` on `Needs<L, [T, ..], R>` with `start_c` and `write_c`
///   for each constructor `C`;
/// - `trait TCase` on `Cursor<L, [T, ..]>`, one impl per layout, with
///   `case_t` and `transform_t`. Continuations are taken positionally in
///   declaration order.
///
/// Referring to a type not declared in the same invocation is a compile
/// error:
///
/// ```compile_fail
/// packed::packed_types! {
///     data List = Nil | Cons Item List
/// }
/// # fn main() {}
/// ```
pub use packed_macros::packed_types;
