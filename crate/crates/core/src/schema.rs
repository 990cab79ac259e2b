//! Schema-driven (interpretive) packing and validation.
//!
//! Everything here works from a [`Schema`] and a dynamic [`ValueTree`] and
//! shares nothing with the generated, statically typed surface beyond the
//! primitive encoders in [`format`](crate::format). It backs the CLI's
//! `validate` and `dump` commands and serves as the reference the generated
//! code is tested against.

use std::fmt::{self, Write as _};
use std::sync::Arc;

pub use packed_schema::{
    parse, AdtDecl, ConstructorDecl, FieldType, ParseError, Schema, SchemaError,
    MAX_CONSTRUCTORS,
};

use crate::format::{
    decode_field_size, decode_int64, decode_tag, encode_field_size, encode_int64, encode_tag,
    DecodeError, FieldTooLarge, LayoutMode, FIELD_SIZE_WIDTH, INT_WIDTH, TAG_WIDTH,
};

/// A dynamically typed packed value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ValueTree {
    Int(i64),
    Ctor {
        adt: Arc<str>,
        ordinal: u8,
        fields: Vec<ValueTree>,
    },
}

impl ValueTree {
    pub fn ctor(adt: impl Into<Arc<str>>, ordinal: u8, fields: Vec<ValueTree>) -> Self {
        ValueTree::Ctor {
            adt: adt.into(),
            ordinal,
            fields,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match *self {
            ValueTree::Int(v) => Some(v),
            ValueTree::Ctor { .. } => None,
        }
    }

    /// Renders the value as an s-expression, e.g. `(Node (Leaf 1) (Leaf 2))`.
    pub fn display<'a>(&'a self, schema: &'a Schema) -> impl fmt::Display + 'a {
        SExpr {
            value: self,
            schema,
        }
    }
}

struct SExpr<'a> {
    value: &'a ValueTree,
    schema: &'a Schema,
}

impl fmt::Display for SExpr<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            ValueTree::Int(v) => write!(f, "{v}"),
            ValueTree::Ctor {
                adt,
                ordinal,
                fields,
            } => {
                let name = self
                    .schema
                    .get(adt)
                    .and_then(|a| a.constructors.get(*ordinal as usize))
                    .map(|c| c.name.as_str())
                    .unwrap_or("?");
                if fields.is_empty() {
                    return f.write_str(name);
                }
                write!(f, "({name}")?;
                for field in fields {
                    write!(
                        f,
                        " {}",
                        SExpr {
                            value: field,
                            schema: self.schema
                        }
                    )?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Native types with a packed representation described by a schema.
///
/// Implemented by [`packed_types!`](crate::packed_types) for every type it
/// declares.
pub trait Adt: Sized {
    const NAME: &'static str;
    /// Source of the schema the type was declared in.
    const SCHEMA: &'static str;

    fn schema() -> Schema {
        parse(Self::SCHEMA).expect("generated schema text is valid")
    }

    fn to_value(&self) -> ValueTree;

    fn from_value(value: &ValueTree) -> Option<Self>;
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ShapeError {
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("expected a value of type `{expected}`, found {found}")]
    TypeMismatch { expected: String, found: String },
    #[error("type `{adt}` has no constructor #{ordinal}")]
    NoSuchConstructor { adt: String, ordinal: u8 },
    #[error("constructor `{constructor}` takes {expected} fields, got {found}")]
    Arity {
        constructor: String,
        expected: usize,
        found: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PackError {
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    FieldTooLarge(#[from] FieldTooLarge),
}

/// Checks that `value` is a well-shaped value of type `expected`.
pub fn check_shape(schema: &Schema, expected: &FieldType, value: &ValueTree) -> Result<(), ShapeError> {
    let describe = |v: &ValueTree| match v {
        ValueTree::Int(_) => "Int".to_string(),
        ValueTree::Ctor { adt, .. } => adt.to_string(),
    };
    match (expected, value) {
        (FieldType::Int, ValueTree::Int(_)) => Ok(()),
        (
            FieldType::Ref(name),
            ValueTree::Ctor {
                adt,
                ordinal,
                fields,
            },
        ) if **adt == **name => {
            let decl = schema
                .get(name)
                .ok_or_else(|| ShapeError::UnknownType(name.clone()))?;
            let ctor = decl
                .constructors
                .get(*ordinal as usize)
                .ok_or_else(|| ShapeError::NoSuchConstructor {
                    adt: name.clone(),
                    ordinal: *ordinal,
                })?;
            if ctor.fields.len() != fields.len() {
                return Err(ShapeError::Arity {
                    constructor: ctor.name.clone(),
                    expected: ctor.fields.len(),
                    found: fields.len(),
                });
            }
            ctor.fields
                .iter()
                .zip(fields)
                .try_for_each(|(ty, v)| check_shape(schema, ty, v))
        }
        (expected, value) => Err(ShapeError::TypeMismatch {
            expected: expected.to_string(),
            found: describe(value),
        }),
    }
}

/// Serialized length of `value` under `layout`, computed without
/// materializing any bytes. Assumes the value is well shaped.
pub fn size_of(value: &ValueTree, layout: LayoutMode) -> usize {
    match value {
        ValueTree::Int(_) => INT_WIDTH,
        ValueTree::Ctor { fields, .. } => {
            let n = fields.len();
            TAG_WIDTH
                + fields
                    .iter()
                    .enumerate()
                    .map(|(i, f)| {
                        let slot = if layout.has_field_size(i, n) {
                            FIELD_SIZE_WIDTH
                        } else {
                            0
                        };
                        slot + size_of(f, layout)
                    })
                    .sum::<usize>()
        }
    }
}

/// Packs `value` by walking it against the schema.
///
/// Each field size is computed up front with [`size_of`], so the output is
/// written strictly left to right with no backpatching.
pub fn dynamic_pack(schema: &Schema, value: &ValueTree, layout: LayoutMode) -> Result<Vec<u8>, PackError> {
    let root = match value {
        ValueTree::Int(_) => FieldType::Int,
        ValueTree::Ctor { adt, .. } => FieldType::Ref(adt.to_string()),
    };
    check_shape(schema, &root, value)?;
    let mut out = Vec::with_capacity(size_of(value, layout));
    write_value(value, layout, &mut out)?;
    Ok(out)
}

fn write_value(value: &ValueTree, layout: LayoutMode, out: &mut Vec<u8>) -> Result<(), FieldTooLarge> {
    match value {
        ValueTree::Int(v) => out.extend_from_slice(&encode_int64(*v)),
        ValueTree::Ctor {
            ordinal, fields, ..
        } => {
            out.extend_from_slice(&encode_tag(*ordinal));
            let n = fields.len();
            for (i, field) in fields.iter().enumerate() {
                if layout.has_field_size(i, n) {
                    out.extend_from_slice(&encode_field_size(size_of(field, layout) as u64)?);
                }
                write_value(field, layout, out)?;
            }
        }
    }
    Ok(())
}

/// What a byte range of a packed buffer encodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WireKind {
    Tag { adt: String, constructor: String },
    Size(u32),
    Int(i64),
}

/// One element of a packed buffer, as reported by [`wire_elements`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WireElement {
    pub offset: usize,
    pub len: usize,
    pub kind: WireKind,
}

impl WireElement {
    /// One annotated line: offset, bytes, kind and meaning.
    pub fn render(&self, bytes: &[u8]) -> String {
        let mut hex = String::new();
        for (i, b) in bytes[self.offset..self.offset + self.len].iter().enumerate() {
            if i > 0 {
                hex.push(' ');
            }
            let _ = write!(hex, "{b:02x}");
        }
        let (kind, meaning) = match &self.kind {
            WireKind::Tag { adt, constructor } => ("tag", format!("{adt}.{constructor}")),
            WireKind::Size(n) => ("size", n.to_string()),
            WireKind::Int(v) => ("int", v.to_string()),
        };
        format!("{:08x}  {hex:<23}  {kind:<4}  {meaning}", self.offset)
    }
}

/// Decodes `bytes` as exactly one value of `root` under `layout`.
///
/// Checks every tag against its type, every field size against the extent of
/// the field it precedes, and rejects trailing bytes.
pub fn validate_buffer(
    schema: &Schema,
    root: &str,
    layout: LayoutMode,
    bytes: &[u8],
) -> Result<ValueTree, ValidateError> {
    decode(schema, root, layout, bytes, None)
}

/// Like [`validate_buffer`], also listing every wire element in order.
pub fn wire_elements(
    schema: &Schema,
    root: &str,
    layout: LayoutMode,
    bytes: &[u8],
) -> Result<(ValueTree, Vec<WireElement>), ValidateError> {
    let mut elements = Vec::new();
    let value = decode(schema, root, layout, bytes, Some(&mut elements))?;
    Ok((value, elements))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValidateError {
    #[error("unknown root type `{0}`")]
    UnknownType(String),
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

struct Frame<'s> {
    adt: &'s AdtDecl,
    ordinal: u8,
    next: usize,
    fields: Vec<ValueTree>,
    // (slot offset, recorded size, field start) for the field being decoded
    sized: Option<(usize, u32, usize)>,
}

impl Frame<'_> {
    fn field_types(&self) -> &[FieldType] {
        &self.adt.constructors[self.ordinal as usize].fields
    }

    fn complete_field(&mut self, value: ValueTree, pos: usize) -> Result<(), DecodeError> {
        if let Some((slot, found, start)) = self.sized.take() {
            let expected = pos - start;
            if expected != found as usize {
                return Err(DecodeError::FieldSizeMismatch {
                    offset: slot,
                    expected,
                    found,
                });
            }
        }
        self.fields.push(value);
        self.next += 1;
        Ok(())
    }
}

// Iterative so that adversarial inputs cannot exhaust the stack.
fn decode(
    schema: &Schema,
    root: &str,
    layout: LayoutMode,
    bytes: &[u8],
    mut trace: Option<&mut Vec<WireElement>>,
) -> Result<ValueTree, ValidateError> {
    let lookup = |name: &str| {
        schema
            .get(name)
            .ok_or_else(|| ValidateError::UnknownType(name.to_string()))
    };
    let mut pos = 0usize;
    let mut stack: Vec<Frame<'_>> = Vec::new();

    let root_adt = lookup(root)?;
    let tag = decode_tag(bytes, pos, root_adt.constructors.len())?;
    record_tag(&mut trace, pos, root_adt, tag.0);
    pos += TAG_WIDTH;
    stack.push(Frame {
        adt: root_adt,
        ordinal: tag.0,
        next: 0,
        fields: Vec::new(),
        sized: None,
    });

    let value = loop {
        let top = stack.last_mut().expect("stack is non-empty inside the loop");
        let n = top.field_types().len();
        if top.next == n {
            let done = stack.pop().expect("non-empty");
            let value = ValueTree::Ctor {
                adt: Arc::from(done.adt.name.as_str()),
                ordinal: done.ordinal,
                fields: done.fields,
            };
            match stack.last_mut() {
                None => break value,
                Some(parent) => {
                    parent.complete_field(value, pos)?;
                    continue;
                }
            }
        }

        let i = top.next;
        if layout.has_field_size(i, n) {
            let size = decode_field_size(bytes, pos)?;
            if let Some(t) = trace.as_deref_mut() {
                t.push(WireElement {
                    offset: pos,
                    len: FIELD_SIZE_WIDTH,
                    kind: WireKind::Size(size),
                });
            }
            top.sized = Some((pos, size, pos + FIELD_SIZE_WIDTH));
            pos += FIELD_SIZE_WIDTH;
        }
        match &top.field_types()[i] {
            FieldType::Int => {
                let v = decode_int64(bytes, pos)?;
                if let Some(t) = trace.as_deref_mut() {
                    t.push(WireElement {
                        offset: pos,
                        len: INT_WIDTH,
                        kind: WireKind::Int(v),
                    });
                }
                pos += INT_WIDTH;
                top.complete_field(ValueTree::Int(v), pos)?;
            }
            FieldType::Ref(name) => {
                let adt = lookup(name)?;
                let tag = decode_tag(bytes, pos, adt.constructors.len())?;
                record_tag(&mut trace, pos, adt, tag.0);
                pos += TAG_WIDTH;
                stack.push(Frame {
                    adt,
                    ordinal: tag.0,
                    next: 0,
                    fields: Vec::new(),
                    sized: None,
                });
            }
        }
    };

    if pos != bytes.len() {
        return Err(DecodeError::TrailingBytes {
            offset: pos,
            count: bytes.len() - pos,
        }
        .into());
    }
    Ok(value)
}

fn record_tag(trace: &mut Option<&mut Vec<WireElement>>, offset: usize, adt: &AdtDecl, tag: u8) {
    if let Some(t) = trace.as_deref_mut() {
        t.push(WireElement {
            offset,
            len: TAG_WIDTH,
            kind: WireKind::Tag {
                adt: adt.name.clone(),
                constructor: adt.constructors[tag as usize].name.clone(),
            },
        });
    }
}
