use packed::schema::{dynamic_pack, validate_buffer, Adt};
use packed::{
    DecodeError, Indirect, IndirectSkipLast, Layout, LayoutMode, Pack, Packed, Plain, Unpack,
};
use proptest::prelude::*;

packed::packed_types! {
    // shapes nest through a list type
    data Shape = Circle Int | Rect Int Int | Group Shapes
    data Shapes = Nil | Cons Shape Shapes
}

fn shapes(items: Vec<Shape>) -> Shapes {
    items
        .into_iter()
        .rev()
        .fold(Shapes::Nil, |acc, s| Shapes::Cons(Box::new(s), Box::new(acc)))
}

/// Total area of a packed shape under `Plain`, via the generated case functions.
fn total_area(c: packed::Cursor<'_, Plain, (Shape, ())>) -> Result<(i64, packed::Cursor<'_, Plain, ()>), DecodeError> {
    c.case_shape(
        |c| {
            let (r, c) = c.read_int()?;
            Ok((3 * r * r, c))
        },
        |c| {
            let (w, c) = c.read_int()?;
            let (h, c) = c.read_int()?;
            Ok((w * h, c))
        },
        |c| c.focus(list_area),
    )
}

fn list_area(c: packed::Cursor<'_, Plain, (Shapes, ())>) -> Result<(i64, packed::Cursor<'_, Plain, ()>), DecodeError> {
    c.case_shapes(
        |c| Ok((0, c)),
        |c| {
            let (a, c) = c.focus(total_area)?;
            let (b, c) = list_area(c)?;
            Ok((a + b, c))
        },
    )
}

fn area_native(s: &Shape) -> i64 {
    match s {
        Shape::Circle(r) => 3 * r * r,
        Shape::Rect(w, h) => w * h,
        Shape::Group(items) => {
            let mut sum = 0;
            let mut cur = &**items;
            while let Shapes::Cons(head, tail) = cur {
                sum += area_native(head);
                cur = tail;
            }
            sum
        }
    }
}

fn sample() -> Shape {
    Shape::Group(Box::new(shapes(vec![
        Shape::Circle(2),
        Shape::Rect(3, 4),
        Shape::Group(Box::new(Shapes::Nil)),
    ])))
}

#[test]
fn metadata() {
    assert_eq!(Shape::NAME, "Shape");
    assert_eq!(Shapes::NAME, "Shapes");
    let schema = Shape::schema();
    assert_eq!(schema, Shapes::schema());
    assert_eq!(schema.get("Shapes").unwrap().constructors[0].name, "Nil");
}

#[test]
fn case_functions_walk_nested_types() {
    let s = sample();
    let p = s.pack::<Plain>().unwrap();
    let (a, rest) = p.run_reader(total_area).unwrap();
    rest.expect_end().unwrap();
    assert_eq!(a, area_native(&s));
    assert_eq!(a, 24);
}

#[test]
fn build_with_start_and_write() {
    let p = packed::Needs::<Indirect, packed::types![Shape], packed::types![Shape]>::new()
        .start_group()
        .start_cons()
        .write_rect(1, 2)
        .write_nil()
        .finish()
        .unwrap();
    let expected = Shape::Group(Box::new(shapes(vec![Shape::Rect(1, 2)])));
    assert_eq!(p.unpack(), Ok(expected.clone()));
    let dynamic = dynamic_pack(&Shape::schema(), &expected.to_value(), LayoutMode::Indirect).unwrap();
    assert_eq!(p.as_bytes(), dynamic);
}

fn arb_shape() -> impl Strategy<Value = Shape> {
    let leaf = prop_oneof![
        any::<i64>().prop_map(Shape::Circle),
        (any::<i64>(), any::<i64>()).prop_map(|(w, h)| Shape::Rect(w, h)),
    ];
    leaf.prop_recursive(4, 64, 4, |inner| {
        prop::collection::vec(inner, 0..4).prop_map(|items| Shape::Group(Box::new(shapes(items))))
    })
}

fn round_trip<L: Layout>(s: &Shape) -> Result<(), TestCaseError>
where
    Shape: Unpack<L>,
{
    let p: Packed<L, (Shape, ())> = s.pack().unwrap();
    prop_assert_eq!(p.unpack(), Ok(s.clone()));
    let dynamic = dynamic_pack(&Shape::schema(), &s.to_value(), L::MODE).unwrap();
    prop_assert_eq!(p.as_bytes(), &dynamic[..]);
    prop_assert_eq!(
        validate_buffer(&Shape::schema(), "Shape", L::MODE, &dynamic),
        Ok(s.to_value())
    );
    prop_assert_eq!(Shape::from_value(&s.to_value()), Some(s.clone()));
    Ok(())
}

proptest! {
    #[test]
    fn shapes_round_trip(s in arb_shape()) {
        round_trip::<Plain>(&s)?;
        round_trip::<Indirect>(&s)?;
        round_trip::<IndirectSkipLast>(&s)?;
    }

    #[test]
    fn packed_case_matches_native(s in arb_shape()) {
        // keep products small enough not to overflow
        fn clamp(s: &Shape) -> Shape {
            match s {
                Shape::Circle(r) => Shape::Circle(r % 1000),
                Shape::Rect(w, h) => Shape::Rect(w % 1000, h % 1000),
                Shape::Group(items) => {
                    let mut out = Vec::new();
                    let mut cur = &**items;
                    while let Shapes::Cons(head, tail) = cur {
                        out.push(clamp(head));
                        cur = tail;
                    }
                    Shape::Group(Box::new(shapes(out)))
                }
            }
        }
        let s = clamp(&s);
        let p = s.pack::<Plain>().unwrap();
        prop_assert_eq!(p.run_reader(total_area).unwrap().0, area_native(&s));
    }
}
