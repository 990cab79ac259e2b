use packed_schema::{parse, FieldType, LayoutMode, ParseError, Schema, SchemaError};

const SHAPES: &str = "
-- a comment
data Shape = Circle Int | Rect Int Int | Group Shapes
data Shapes = Nil | Cons Shape Shapes
";

#[test]
fn display_then_parse_is_identity() {
    let schema: Schema = SHAPES.parse().unwrap();
    let text = schema.to_string();
    assert_eq!(text.lines().next(), Some("data Shape = Circle Int | Rect Int Int | Group Shapes"));
    assert_eq!(parse(&text).unwrap(), schema);
}

#[test]
fn constructor_lookup_uses_declaration_order() {
    let schema: Schema = SHAPES.parse().unwrap();
    let shapes = schema.get("Shapes").unwrap();
    let (tag, cons) = shapes.constructor("Cons").unwrap();
    assert_eq!(tag, 1);
    assert_eq!(
        cons.fields,
        vec![FieldType::Ref("Shape".into()), FieldType::Ref("Shapes".into())]
    );
    assert!(shapes.constructor("Circle").is_none());
}

#[test]
fn rejects_bad_schemas() {
    assert!(matches!(
        parse("data T = A U"),
        Err(ParseError::Schema(SchemaError::Dangling { .. }))
    ));
    assert!(matches!(
        parse("data T = A | A"),
        Err(ParseError::Schema(SchemaError::DuplicateConstructor { .. }))
    ));
    assert!(matches!(
        parse("data T = A\ndata T = B"),
        Err(ParseError::Schema(SchemaError::DuplicateType(_)))
    ));
    assert!(matches!(parse("data T A"), Err(ParseError::Syntax { line: 1, .. })));

    let many: Vec<String> = (0..257).map(|i| format!("C{i}")).collect();
    let src = format!("data Big = {}", many.join(" | "));
    assert!(matches!(
        parse(&src),
        Err(ParseError::Schema(SchemaError::TooManyConstructors { count: 257, .. }))
    ));
    let src = format!("data Big = {}", many[..256].join(" | "));
    assert_eq!(parse(&src).unwrap().get("Big").unwrap().constructors.len(), 256);
}

#[test]
fn field_sizes_per_layout() {
    use LayoutMode::*;
    let table = [
        (Plain, [false, false, false]),
        (Indirect, [true, true, true]),
        (IndirectSkipLast, [true, true, false]),
    ];
    for (mode, expected) in table {
        let got: Vec<bool> = (0..3).map(|i| mode.has_field_size(i, 3)).collect();
        assert_eq!(got, expected, "{mode}");
        assert_eq!(mode.to_string().parse::<LayoutMode>().unwrap(), mode);
    }
    assert!(!IndirectSkipLast.has_field_size(0, 1));
    assert!(Indirect.has_field_size(0, 1));
}
