//! The write side: a buffer typed by what it still needs.
//!
//! `Needs<L, P, R>` is an output buffer in layout `L` that still owes the
//! values listed in `P` and will contain the values listed in `R` once
//! finished. Each write consumes the head of `P`; starting a constructor
//! replaces the head with the constructor's fields. [`Needs::finish`] only
//! exists once `P` is empty.
//!
//! Field sizes never show up in `P`. When the layout puts a size before a
//! field, the builder reserves a 4-byte slot the moment the field starts and
//! patches it once the field's last obligation is discharged, so the same
//! writing code works for every layout.
//!
//! ```
//! use packed::{types, Needs, Plain};
//!
//! let buf = Needs::<Plain, types![i64, i64], types![i64, i64]>::new()
//!     .write_int(3)
//!     .write_int(4)
//!     .finish()
//!     .unwrap();
//! assert_eq!(buf.len(), 16);
//! ```
//!
//! Writing something other than the head obligation does not compile:
//!
//! ```compile_fail
//! use packed::{types, Needs, Plain};
//! use packed::workloads::Tree;
//!
//! let _ = Needs::<Plain, types![Tree], types![Tree]>::new().write_int(5);
//! ```
//!
//! Neither does finishing early:
//!
//! ```compile_fail
//! use packed::{types, Needs, Plain};
//!
//! let _ = Needs::<Plain, types![i64], types![i64]>::new().finish();
//! ```
//!
//! Nor building nothing:
//!
//! ```compile_fail
//! use packed::{Needs, Plain};
//!
//! let _ = Needs::<Plain, (), ()>::new();
//! ```

use std::fmt;
use std::marker::PhantomData;

use crate::format::{encode_field_size, encode_int64, FieldTooLarge, Layout, FIELD_SIZE_WIDTH};
use crate::reader::Packed;
use crate::typelist::TypeList;

/// Result marker for a builder narrowed to a single obligation by
/// [`Needs::apply`]. Such a builder cannot be finished on its own.
pub struct Scope(());

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct OpenFrame {
    slot_offset: usize,
    field_start: usize,
    /// Pending-list length at which the field is complete.
    close_at: usize,
}

pub struct Needs<L, P, R> {
    bytes: Vec<u8>,
    // Pending obligations, head last. `true` marks a field preceded by a size slot.
    pending: Vec<bool>,
    frames: Vec<OpenFrame>,
    overflow: Option<FieldTooLarge>,
    _types: PhantomData<fn() -> (L, P, R)>,
}

impl<L: Layout, H, T: TypeList> Needs<L, (H, T), (H, T)> {
    pub fn new() -> Self {
        Self::with_capacity(0)
    }

    pub fn with_capacity(capacity: usize) -> Self {
        Needs {
            bytes: Vec::with_capacity(capacity),
            pending: vec![false; 1 + T::LEN],
            frames: Vec::new(),
            overflow: None,
            _types: PhantomData,
        }
    }
}

impl<L: Layout, H, T: TypeList> Default for Needs<L, (H, T), (H, T)> {
    fn default() -> Self {
        Self::new()
    }
}

impl<L, P, R> fmt::Debug for Needs<L, P, R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Needs")
            .field("len", &self.bytes.len())
            .field("pending", &self.pending.len())
            .field("open_frames", &self.frames.len())
            .finish()
    }
}

impl<L: Layout, P, R> Needs<L, P, R> {
    /// Bytes written so far, including unpatched size slots.
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }

    /// Number of obligations still owed.
    pub fn pending_len(&self) -> usize {
        self.pending.len()
    }

    /// Number of reserved size slots not yet patched.
    pub fn open_frames(&self) -> usize {
        self.frames.len()
    }

    #[inline]
    fn retype<P2, R2>(self) -> Needs<L, P2, R2> {
        Needs {
            bytes: self.bytes,
            pending: self.pending,
            frames: self.frames,
            overflow: self.overflow,
            _types: PhantomData,
        }
    }

    /// Pops the head obligation, reserving its size slot if it has one.
    #[inline]
    fn begin_obligation(&mut self) {
        let sized = self
            .pending
            .pop()
            .expect("type-level pending list is non-empty");
        if sized {
            let slot_offset = self.bytes.len();
            self.bytes.extend_from_slice(&[0; FIELD_SIZE_WIDTH]);
            self.frames.push(OpenFrame {
                slot_offset,
                field_start: slot_offset + FIELD_SIZE_WIDTH,
                close_at: self.pending.len(),
            });
        }
    }

    /// Patches every frame whose field has just been completed. Finishing an
    /// inner field can complete enclosing ones, hence the loop.
    #[inline]
    fn close_frames(&mut self) {
        while let Some(frame) = self.frames.last().copied() {
            if frame.close_at != self.pending.len() {
                break;
            }
            self.frames.pop();
            let extent = (self.bytes.len() - frame.field_start) as u64;
            let encoded = match encode_field_size(extent) {
                Ok(encoded) => encoded,
                Err(e) => {
                    self.overflow.get_or_insert(e);
                    [0xFF; FIELD_SIZE_WIDTH]
                }
            };
            self.bytes[frame.slot_offset..frame.field_start].copy_from_slice(&encoded);
        }
    }
}

impl<L: Layout, P, R> Needs<L, (i64, P), R> {
    #[inline]
    pub fn write_int(mut self, value: i64) -> Needs<L, P, R> {
        self.begin_obligation();
        self.bytes.extend_from_slice(&encode_int64(value));
        self.close_frames();
        self.retype()
    }
}

impl<L: Layout, T, P, R> Needs<L, (T, P), R> {
    /// Writes a whole value, equivalent to the start/write sequence for it.
    #[inline]
    pub fn write(self, value: &T) -> Needs<L, P, R>
    where
        T: Pack,
    {
        value.pack_into(self.retype::<(T, ()), Scope>()).retype()
    }

    /// Runs `step` against a builder narrowed to the head obligation and
    /// hands back the rest. This is how recursive packed-to-packed functions
    /// compose: each call only ever sees `Needs<L, [T], Scope>`.
    #[inline]
    pub fn apply<E>(
        self,
        step: impl FnOnce(Needs<L, (T, ()), Scope>) -> Result<Needs<L, (), Scope>, E>,
    ) -> Result<Needs<L, P, R>, E> {
        step(self.retype()).map(Needs::retype)
    }

    /// Like [`apply`](Self::apply), for steps that also return a value (for
    /// example, the cursor a transform stopped at).
    #[inline]
    pub fn apply_with<A, E>(
        self,
        step: impl FnOnce(Needs<L, (T, ()), Scope>) -> Result<(Needs<L, (), Scope>, A), E>,
    ) -> Result<(Needs<L, P, R>, A), E> {
        step(self.retype()).map(|(n, a)| (n.retype(), a))
    }

    /// Writes the tag of a constructor with `field_count` fields and replaces
    /// the head obligation with `P2`. Only generated code should call this:
    /// `P2` is trusted to be the constructor's field list followed by `P`.
    #[doc(hidden)]
    #[inline]
    pub fn __start_constructor<P2>(mut self, tag: u8, field_count: usize) -> Needs<L, P2, R> {
        self.begin_obligation();
        self.bytes.push(tag);
        for i in (0..field_count).rev() {
            self.pending.push(L::MODE.has_field_size(i, field_count));
        }
        self.close_frames();
        self.retype()
    }
}

impl<L: Layout, R: TypeList> Needs<L, (), R> {
    pub fn finish(self) -> Result<Packed<L, R>, FieldTooLarge> {
        debug_assert!(self.frames.is_empty());
        match self.overflow {
            Some(e) => Err(e),
            None => Ok(Packed::from_bytes(self.bytes)),
        }
    }
}

/// Values that can be written into a [`Needs`] buffer.
pub trait Pack: Sized {
    fn pack_into<L: Layout>(&self, out: Needs<L, (Self, ()), Scope>) -> Needs<L, (), Scope>;

    /// Packs a single value into its own buffer.
    fn pack<L: Layout>(&self) -> Result<Packed<L, (Self, ())>, FieldTooLarge> {
        Needs::<L, (Self, ()), (Self, ())>::new().write(self).finish()
    }
}

impl Pack for i64 {
    #[inline]
    fn pack_into<L: Layout>(&self, out: Needs<L, (i64, ()), Scope>) -> Needs<L, (), Scope> {
        out.write_int(*self)
    }
}
