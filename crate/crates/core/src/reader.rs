//! The read side: packed buffers and a typed cursor over them.
//!
//! A [`Cursor<'a, L, T>`] is a read position plus the type-level list `T` of
//! what lies ahead of it. Every read consumes the head of `T` and returns the
//! advanced cursor, so a traversal is a chain of by-value calls, left to
//! right, and reading anything but the head does not compile:
//!
//! ```compile_fail
//! use packed::{types, Packed, Plain};
//! use packed::workloads::Tree;
//!
//! let p: Packed<Plain, types![Tree]> = Packed::from_bytes(vec![0; 9]);
//! let _ = p.cursor().read_int();
//! ```
//!
//! Field sizes are only part of `T` in layouts that have them:
//!
//! ```compile_fail
//! use packed::{types, Packed, Plain};
//!
//! let p: Packed<Plain, types![i64]> = Packed::from_bytes(vec![0; 8]);
//! let _ = p.cursor().read_field_size();
//! ```
//!
//! Generated `case_*` functions dispatch on the tag and hand each
//! continuation a cursor whose list starts with that constructor's fields.

use std::fmt;
use std::marker::PhantomData;

use crate::format::{
    decode_field_size, decode_int64, decode_tag, DecodeError, FieldSize, Layout,
    FIELD_SIZE_WIDTH, INT_WIDTH, TAG_WIDTH,
};

mod raw;

pub use raw::RawCursor;

/// An immutable packed buffer holding the values listed in `T`.
///
/// Construction from bytes is an O(1) move with no validation; a buffer
/// declared with the wrong contents surfaces as read errors later.
pub struct Packed<L, T> {
    bytes: Vec<u8>,
    _types: PhantomData<fn() -> (L, T)>,
}

impl<L, T> Packed<L, T> {
    #[inline]
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        Packed {
            bytes,
            _types: PhantomData,
        }
    }

    #[inline]
    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    #[inline]
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }

    #[inline]
    pub fn cursor(&self) -> Cursor<'_, L, T> {
        Cursor::new(&self.bytes)
    }

    /// Runs a cursor computation from the start of the buffer. The returned
    /// cursor holds whatever the computation left unread, so multi-value
    /// buffers can be consumed in stages.
    #[inline]
    pub fn run_reader<'a, A, Rest, E>(
        &'a self,
        reader: impl FnOnce(Cursor<'a, L, T>) -> Result<(A, Cursor<'a, L, Rest>), E>,
    ) -> Result<(A, Cursor<'a, L, Rest>), E> {
        reader(self.cursor())
    }
}

impl<L: Layout, T: Unpack<L>> Packed<L, (T, ())> {
    /// Reconstructs the native value, rejecting trailing bytes.
    pub fn unpack(&self) -> Result<T, DecodeError> {
        let (value, rest) = self.cursor().unpack()?;
        rest.expect_end()?;
        Ok(value)
    }
}

impl<L, T> Clone for Packed<L, T> {
    fn clone(&self) -> Self {
        Packed::from_bytes(self.bytes.clone())
    }
}

impl<L, T> PartialEq for Packed<L, T> {
    fn eq(&self, other: &Self) -> bool {
        self.bytes == other.bytes
    }
}

impl<L, T> Eq for Packed<L, T> {}

impl<L, T> fmt::Debug for Packed<L, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Packed")
            .field("layout", &std::any::type_name::<L>())
            .field("len", &self.bytes.len())
            .finish()
    }
}

impl<L, T> AsRef<[u8]> for Packed<L, T> {
    fn as_ref(&self) -> &[u8] {
        &self.bytes
    }
}

/// A read position with the list `T` of obligations still ahead of it.
///
/// Cursors are `Copy`; copying one forks the read position.
pub struct Cursor<'a, L, T> {
    bytes: &'a [u8],
    offset: usize,
    // Bytes passed over by `jump`, excluded from `bytes_consumed`.
    jumped: usize,
    _types: PhantomData<fn() -> (L, T)>,
}

impl<L, T> Clone for Cursor<'_, L, T> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<L, T> Copy for Cursor<'_, L, T> {}

impl<L, T> fmt::Debug for Cursor<'_, L, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Cursor")
            .field("offset", &self.offset)
            .field("len", &self.bytes.len())
            .field("jumped", &self.jumped)
            .finish()
    }
}

impl<'a, L, T> Cursor<'a, L, T> {
    /// Cursor at the start of `bytes`, with contents declared by the caller.
    #[inline]
    pub fn new(bytes: &'a [u8]) -> Self {
        Cursor {
            bytes,
            offset: 0,
            jumped: 0,
            _types: PhantomData,
        }
    }

    #[inline]
    pub fn offset(&self) -> usize {
        self.offset
    }

    /// Bytes actually read so far. Bytes passed over with
    /// [`jump`](Cursor::jump) are not counted.
    #[inline]
    pub fn bytes_consumed(&self) -> usize {
        self.offset - self.jumped
    }

    #[inline]
    pub fn remaining_bytes(&self) -> usize {
        self.bytes.len() - self.offset
    }

    #[inline]
    fn retype<T2>(self) -> Cursor<'a, L, T2> {
        Cursor {
            bytes: self.bytes,
            offset: self.offset,
            jumped: self.jumped,
            _types: PhantomData,
        }
    }

    #[inline]
    fn check(&self, needed: usize) -> Result<(), DecodeError> {
        if needed <= self.bytes.len() - self.offset {
            Ok(())
        } else {
            Err(DecodeError::OutOfBounds {
                offset: self.offset,
                needed,
                len: self.bytes.len(),
            })
        }
    }

    /// Reads a tag for a type with `constructors` constructors. The type list
    /// is left untouched; generated code retypes the cursor afterwards.
    #[doc(hidden)]
    #[inline]
    pub fn __read_tag(mut self, constructors: usize) -> Result<(u8, Self), DecodeError> {
        let tag = decode_tag(self.bytes, self.offset, constructors)?;
        self.offset += TAG_WIDTH;
        Ok((tag.0, self))
    }

    #[doc(hidden)]
    #[inline]
    pub fn __retype<T2>(self) -> Cursor<'a, L, T2> {
        self.retype()
    }

    /// Checks that the field read since `start` spans exactly `size` bytes.
    #[doc(hidden)]
    #[inline]
    pub fn __check_extent(self, start: usize, size: FieldSize) -> Result<Self, DecodeError> {
        let extent = self.offset - start;
        if extent == size.get() {
            Ok(self)
        } else {
            Err(DecodeError::FieldSizeMismatch {
                offset: start - FIELD_SIZE_WIDTH,
                expected: extent,
                found: size.0,
            })
        }
    }
}

impl<'a, L> Cursor<'a, L, ()> {
    /// Succeeds when the cursor sits at the end of the buffer.
    pub fn expect_end(self) -> Result<(), DecodeError> {
        match self.remaining_bytes() {
            0 => Ok(()),
            count => Err(DecodeError::TrailingBytes {
                offset: self.offset,
                count,
            }),
        }
    }
}

impl<'a, L, Rest> Cursor<'a, L, (i64, Rest)> {
    #[inline]
    pub fn read_int(mut self) -> Result<(i64, Cursor<'a, L, Rest>), DecodeError> {
        let value = decode_int64(self.bytes, self.offset)?;
        self.offset += INT_WIDTH;
        Ok((value, self.retype()))
    }
}

impl<'a, L, Rest> Cursor<'a, L, (FieldSize, Rest)> {
    #[inline]
    pub fn read_field_size(mut self) -> Result<(FieldSize, Cursor<'a, L, Rest>), DecodeError> {
        let size = decode_field_size(self.bytes, self.offset)?;
        self.offset += FIELD_SIZE_WIDTH;
        Ok((FieldSize(size), self.retype()))
    }

    #[inline]
    pub fn skip_field_size(mut self) -> Result<Cursor<'a, L, Rest>, DecodeError> {
        self.check(FIELD_SIZE_WIDTH)?;
        self.offset += FIELD_SIZE_WIDTH;
        Ok(self.retype())
    }
}

impl<'a, L, H, Rest> Cursor<'a, L, (H, Rest)> {
    /// Passes over the head field without reading it, using the size that
    /// preceded it.
    #[inline]
    pub fn jump(mut self, size: FieldSize) -> Result<Cursor<'a, L, Rest>, DecodeError> {
        self.check(size.get())?;
        self.offset += size.get();
        self.jumped += size.get();
        Ok(self.retype())
    }

    /// Runs `reader` on a cursor narrowed to the head obligation, then
    /// reattaches the rest of the list. Recursive traversals use this so each
    /// call works on `Cursor<L, [T]>` regardless of what follows.
    #[inline]
    pub fn focus<A, E>(
        self,
        reader: impl FnOnce(Cursor<'a, L, (H, ())>) -> Result<(A, Cursor<'a, L, ()>), E>,
    ) -> Result<(A, Cursor<'a, L, Rest>), E> {
        let (value, done) = reader(self.retype())?;
        debug_assert!(std::ptr::eq(done.bytes, self.bytes) && done.offset >= self.offset);
        Ok((value, done.retype()))
    }

    /// Reads the head value in full.
    #[inline]
    pub fn unpack(self) -> Result<(H, Cursor<'a, L, Rest>), DecodeError>
    where
        L: Layout,
        H: Unpack<L>,
    {
        self.focus(H::unpack_from)
    }
}

/// Values that can be reconstructed from a cursor in layout `L`.
pub trait Unpack<L: Layout>: Sized {
    fn unpack_from<'a>(
        cursor: Cursor<'a, L, (Self, ())>,
    ) -> Result<(Self, Cursor<'a, L, ()>), DecodeError>;
}

impl<L: Layout> Unpack<L> for i64 {
    #[inline]
    fn unpack_from<'a>(
        cursor: Cursor<'a, L, (i64, ())>,
    ) -> Result<(i64, Cursor<'a, L, ()>), DecodeError> {
        cursor.read_int()
    }
}
