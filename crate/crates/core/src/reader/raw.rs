use crate::format::{
    decode_field_size, decode_int64, DecodeError, FIELD_SIZE_WIDTH, INT_WIDTH, TAG_WIDTH,
};

/// Untyped cursor: offset arithmetic with bounds checks and nothing else.
///
/// The caller is responsible for knowing the layout and what comes next.
/// It performs the same byte motions as [`Cursor`](super::Cursor) and exists
/// to measure what the obligation tracking costs.
#[derive(Debug, Clone, Copy)]
pub struct RawCursor<'a> {
    bytes: &'a [u8],
    offset: usize,
    jumped: usize,
}

impl<'a> RawCursor<'a> {
    #[inline]
    pub fn new(bytes: &'a [u8]) -> Self {
        RawCursor {
            bytes,
            offset: 0,
            jumped: 0,
        }
    }

    #[inline]
    pub fn offset(&self) -> usize {
        self.offset
    }

    #[inline]
    pub fn bytes_consumed(&self) -> usize {
        self.offset - self.jumped
    }

    #[inline]
    pub fn remaining_bytes(&self) -> usize {
        self.bytes.len() - self.offset
    }

    /// Reads a tag byte without checking it against any constructor count.
    #[inline]
    pub fn read_tag(&mut self) -> Result<u8, DecodeError> {
        match self.bytes.get(self.offset) {
            Some(&tag) => {
                self.offset += TAG_WIDTH;
                Ok(tag)
            }
            None => Err(self.out_of_bounds(TAG_WIDTH)),
        }
    }

    #[inline]
    pub fn read_int(&mut self) -> Result<i64, DecodeError> {
        let v = decode_int64(self.bytes, self.offset)?;
        self.offset += INT_WIDTH;
        Ok(v)
    }

    #[inline]
    pub fn read_size(&mut self) -> Result<usize, DecodeError> {
        let n = decode_field_size(self.bytes, self.offset)?;
        self.offset += FIELD_SIZE_WIDTH;
        Ok(n as usize)
    }

    /// Advances by `n` bytes without reading them.
    #[inline]
    pub fn skip(&mut self, n: usize) -> Result<(), DecodeError> {
        if n > self.remaining_bytes() {
            return Err(self.out_of_bounds(n));
        }
        self.offset += n;
        self.jumped += n;
        Ok(())
    }

    fn out_of_bounds(&self, needed: usize) -> DecodeError {
        DecodeError::OutOfBounds {
            offset: self.offset,
            needed,
            len: self.bytes.len(),
        }
    }
}
