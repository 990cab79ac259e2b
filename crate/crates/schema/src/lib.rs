//! Declarations for packed algebraic data types.
//!
//! A schema is a list of ADTs written in a small Haskell-like surface syntax:
//!
//! ```text
//! data Tree = Leaf Int | Node Tree Tree
//! data Ast  = Value Int | Add Ast Ast | Sub Ast Ast | Mul Ast Ast | Div Ast Ast
//! ```
//!
//! The only primitive field type is `Int` (a signed 64-bit integer); every
//! other field token must name an ADT declared in the same schema. Lines
//! starting with `--` are comments.
//!
//! This crate is shared by the runtime library and the code generator so that
//! both agree on parsing, validation and where field sizes are placed.

use std::fmt;
use std::str::FromStr;

mod parse;

pub use parse::{parse, ParseError};

/// Maximum number of constructors an ADT may have; tags are one byte.
pub const MAX_CONSTRUCTORS: usize = 256;

/// Name of the built-in primitive field type.
pub const INT: &str = "Int";

/// Controls where 32-bit field sizes are inserted in a packed buffer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LayoutMode {
    /// No field sizes.
    Plain,
    /// A field size before every field of every constructor.
    Indirect,
    /// A field size before every field except the last one of each constructor.
    IndirectSkipLast,
}

impl LayoutMode {
    pub const ALL: [LayoutMode; 3] = [
        LayoutMode::Plain,
        LayoutMode::Indirect,
        LayoutMode::IndirectSkipLast,
    ];

    /// Whether field `index` of a constructor with `field_count` fields is
    /// preceded by a field size.
    #[inline]
    pub const fn has_field_size(self, index: usize, field_count: usize) -> bool {
        match self {
            LayoutMode::Plain => false,
            LayoutMode::Indirect => true,
            LayoutMode::IndirectSkipLast => index + 1 < field_count,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            LayoutMode::Plain => "plain",
            LayoutMode::Indirect => "indirect",
            LayoutMode::IndirectSkipLast => "indirect-skip-last",
        }
    }
}

impl fmt::Display for LayoutMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown layout `{0}` (expected plain, indirect or indirect-skip-last)")]
pub struct UnknownLayout(pub String);

impl FromStr for LayoutMode {
    type Err = UnknownLayout;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "plain" => Ok(LayoutMode::Plain),
            "indirect" => Ok(LayoutMode::Indirect),
            "indirect-skip-last" | "indirectskiplast" | "skip-last" => {
                Ok(LayoutMode::IndirectSkipLast)
            }
            _ => Err(UnknownLayout(s.to_string())),
        }
    }
}

/// The type of a single constructor field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldType {
    /// Signed 64-bit integer.
    Int,
    /// Reference to an ADT declared in the schema.
    Ref(String),
}

impl fmt::Display for FieldType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldType::Int => f.write_str(INT),
            FieldType::Ref(name) => f.write_str(name),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructorDecl {
    pub name: String,
    pub fields: Vec<FieldType>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdtDecl {
    pub name: String,
    /// Declaration order defines tag ordinals.
    pub constructors: Vec<ConstructorDecl>,
}

impl AdtDecl {
    pub fn constructor(&self, name: &str) -> Option<(u8, &ConstructorDecl)> {
        self.constructors
            .iter()
            .position(|c| c.name == name)
            .map(|i| (i as u8, &self.constructors[i]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemaError {
    #[error("duplicate type `{0}`")]
    DuplicateType(String),
    #[error("duplicate constructor `{constructor}` in type `{adt}`")]
    DuplicateConstructor { adt: String, constructor: String },
    #[error("type `{adt}` has {count} constructors, at most 256 are allowed")]
    TooManyConstructors { adt: String, count: usize },
    #[error("type `{0}` has no constructors")]
    NoConstructors(String),
    #[error("`{0}` is a reserved name")]
    ReservedName(String),
    #[error("constructor `{adt}.{constructor}` refers to undeclared type `{target}`")]
    Dangling {
        adt: String,
        constructor: String,
        target: String,
    },
}

/// An ordered collection of ADT declarations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Schema {
    adts: Vec<AdtDecl>,
}

impl Schema {
    /// Builds a schema without validating it.
    pub fn new(adts: Vec<AdtDecl>) -> Self {
        Schema { adts }
    }

    /// Builds and validates a schema.
    pub fn checked(adts: Vec<AdtDecl>) -> Result<Self, SchemaError> {
        let schema = Schema { adts };
        schema.validate()?;
        Ok(schema)
    }

    pub fn adts(&self) -> &[AdtDecl] {
        &self.adts
    }

    pub fn get(&self, name: &str) -> Option<&AdtDecl> {
        self.adts.iter().find(|a| a.name == name)
    }

    /// Reports the first violated invariant, in declaration order.
    pub fn validate(&self) -> Result<(), SchemaError> {
        for (i, adt) in self.adts.iter().enumerate() {
            if adt.name == INT {
                return Err(SchemaError::ReservedName(adt.name.clone()));
            }
            if self.adts[..i].iter().any(|a| a.name == adt.name) {
                return Err(SchemaError::DuplicateType(adt.name.clone()));
            }
            if adt.constructors.is_empty() {
                return Err(SchemaError::NoConstructors(adt.name.clone()));
            }
            if adt.constructors.len() > MAX_CONSTRUCTORS {
                return Err(SchemaError::TooManyConstructors {
                    adt: adt.name.clone(),
                    count: adt.constructors.len(),
                });
            }
            for (j, ctor) in adt.constructors.iter().enumerate() {
                if adt.constructors[..j].iter().any(|c| c.name == ctor.name) {
                    return Err(SchemaError::DuplicateConstructor {
                        adt: adt.name.clone(),
                        constructor: ctor.name.clone(),
                    });
                }
                for field in &ctor.fields {
                    if let FieldType::Ref(target) = field {
                        if self.get(target).is_none() {
                            return Err(SchemaError::Dangling {
                                adt: adt.name.clone(),
                                constructor: ctor.name.clone(),
                                target: target.clone(),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for adt in &self.adts {
            write!(f, "data {} =", adt.name)?;
            for (i, ctor) in adt.constructors.iter().enumerate() {
                if i > 0 {
                    f.write_str(" |")?;
                }
                write!(f, " {}", ctor.name)?;
                for field in &ctor.fields {
                    write!(f, " {field}")?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for Schema {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctor(name: &str, fields: Vec<FieldType>) -> ConstructorDecl {
        ConstructorDecl {
            name: name.into(),
            fields,
        }
    }

    fn tree() -> AdtDecl {
        AdtDecl {
            name: "Tree".into(),
            constructors: vec![
                ctor("Leaf", vec![FieldType::Int]),
                ctor(
                    "Node",
                    vec![FieldType::Ref("Tree".into()), FieldType::Ref("Tree".into())],
                ),
            ],
        }
    }

    #[test]
    fn tree_schema_is_valid() {
        assert!(Schema::checked(vec![tree()]).is_ok());
    }

    #[test]
    fn dangling_reference() {
        let adt = AdtDecl {
            name: "Tree".into(),
            constructors: vec![ctor("Branch", vec![FieldType::Ref("Forest".into())])],
        };
        assert_eq!(
            Schema::checked(vec![adt]).unwrap_err(),
            SchemaError::Dangling {
                adt: "Tree".into(),
                constructor: "Branch".into(),
                target: "Forest".into()
            }
        );
    }

    #[test]
    fn too_many_constructors() {
        let adt = AdtDecl {
            name: "Big".into(),
            constructors: (0..257).map(|i| ctor(&format!("C{i}"), vec![])).collect(),
        };
        assert!(matches!(
            Schema::checked(vec![adt]),
            Err(SchemaError::TooManyConstructors { count: 257, .. })
        ));
        let adt = AdtDecl {
            name: "Big".into(),
            constructors: (0..256).map(|i| ctor(&format!("C{i}"), vec![])).collect(),
        };
        assert!(Schema::checked(vec![adt]).is_ok());
    }

    #[test]
    fn duplicates() {
        assert_eq!(
            Schema::checked(vec![tree(), tree()]).unwrap_err(),
            SchemaError::DuplicateType("Tree".into())
        );
        let adt = AdtDecl {
            name: "T".into(),
            constructors: vec![ctor("A", vec![]), ctor("A", vec![FieldType::Int])],
        };
        assert!(matches!(
            Schema::checked(vec![adt]),
            Err(SchemaError::DuplicateConstructor { .. })
        ));
    }

    #[test]
    fn layout_rule() {
        use LayoutMode::*;
        assert!(!Plain.has_field_size(0, 2));
        assert!(Indirect.has_field_size(0, 2) && Indirect.has_field_size(1, 2));
        assert!(IndirectSkipLast.has_field_size(0, 2));
        assert!(!IndirectSkipLast.has_field_size(1, 2));
        assert!(!IndirectSkipLast.has_field_size(0, 1));
    }

    #[test]
    fn layout_names_round_trip() {
        for mode in LayoutMode::ALL {
            assert_eq!(mode.name().parse::<LayoutMode>().unwrap(), mode);
        }
        assert!("zigzag".parse::<LayoutMode>().is_err());
    }
}
