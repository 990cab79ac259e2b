//! Wire encoding shared by every other module.
//!
//! A packed value is a constructor tag (one byte, the 0-based declaration
//! index) followed by its fields, back to back, with no padding. `Int` fields
//! are 8 bytes of little-endian two's complement. Depending on the
//! [`LayoutMode`], a field may be preceded by a 4-byte little-endian
//! [`FieldSize`] holding the full byte extent of that field.

use std::fmt;

pub use packed_schema::LayoutMode;

pub const TAG_WIDTH: usize = 1;
pub const INT_WIDTH: usize = 8;
pub const FIELD_SIZE_WIDTH: usize = 4;

/// Errors raised while decoding packed bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    #[error("out of bounds at offset {offset}: need {needed} bytes, buffer has {len}")]
    OutOfBounds {
        offset: usize,
        needed: usize,
        len: usize,
    },
    #[error("invalid tag {tag} at offset {offset} (type has {constructors} constructors)")]
    InvalidTag {
        offset: usize,
        tag: u8,
        constructors: usize,
    },
    #[error("field size at offset {offset} says {found} bytes, field spans {expected}")]
    FieldSizeMismatch {
        offset: usize,
        expected: usize,
        found: u32,
    },
    #[error("{count} trailing bytes at offset {offset}")]
    TrailingBytes { offset: usize, count: usize },
}

impl DecodeError {
    /// Byte offset the error refers to.
    pub fn offset(&self) -> usize {
        match *self {
            DecodeError::OutOfBounds { offset, .. }
            | DecodeError::InvalidTag { offset, .. }
            | DecodeError::FieldSizeMismatch { offset, .. }
            | DecodeError::TrailingBytes { offset, .. } => offset,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("field of {size} bytes does not fit in a 32-bit field size")]
pub struct FieldTooLarge {
    pub size: u64,
}

/// A constructor tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tag(pub u8);

/// The byte extent of the field that follows it.
///
/// Also used as the element type of cursor obligation lists, where it marks a
/// size entry that has to be read, skipped, or used to jump over a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSize(pub u32);

impl FieldSize {
    #[inline]
    pub fn get(self) -> usize {
        self.0 as usize
    }
}

impl From<u32> for FieldSize {
    fn from(n: u32) -> Self {
        FieldSize(n)
    }
}

impl fmt::Display for FieldSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[inline]
fn take<const N: usize>(bytes: &[u8], offset: usize) -> Result<[u8; N], DecodeError> {
    offset
        .checked_add(N)
        .and_then(|end| bytes.get(offset..end))
        .map(|s| s.try_into().expect("slice of length N"))
        .ok_or(DecodeError::OutOfBounds {
            offset,
            needed: N,
            len: bytes.len(),
        })
}

#[inline]
pub fn encode_int64(value: i64) -> [u8; INT_WIDTH] {
    value.to_le_bytes()
}

#[inline]
pub fn decode_int64(bytes: &[u8], offset: usize) -> Result<i64, DecodeError> {
    take(bytes, offset).map(i64::from_le_bytes)
}

pub fn encode_field_size(n: u64) -> Result<[u8; FIELD_SIZE_WIDTH], FieldTooLarge> {
    u32::try_from(n)
        .map(u32::to_le_bytes)
        .map_err(|_| FieldTooLarge { size: n })
}

#[inline]
pub fn decode_field_size(bytes: &[u8], offset: usize) -> Result<u32, DecodeError> {
    take(bytes, offset).map(u32::from_le_bytes)
}

#[inline]
pub fn encode_tag(ordinal: u8) -> [u8; TAG_WIDTH] {
    [ordinal]
}

/// Reads a tag and checks it against the number of constructors of the type
/// being decoded.
#[inline]
pub fn decode_tag(bytes: &[u8], offset: usize, constructors: usize) -> Result<Tag, DecodeError> {
    let [tag] = take::<1>(bytes, offset)?;
    if (tag as usize) < constructors {
        Ok(Tag(tag))
    } else {
        Err(DecodeError::InvalidTag {
            offset,
            tag,
            constructors,
        })
    }
}

/// Type-level layout marker. Generated traversal surfaces are specialised
/// per marker, so a cursor over an `Indirect` buffer cannot be driven with
/// the `Plain` API.
pub trait Layout: Copy + Default + fmt::Debug + Send + Sync + 'static {
    const MODE: LayoutMode;
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Plain;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Indirect;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct IndirectSkipLast;

impl Layout for Plain {
    const MODE: LayoutMode = LayoutMode::Plain;
}

impl Layout for Indirect {
    const MODE: LayoutMode = LayoutMode::Indirect;
}

impl Layout for IndirectSkipLast {
    const MODE: LayoutMode = LayoutMode::IndirectSkipLast;
}
