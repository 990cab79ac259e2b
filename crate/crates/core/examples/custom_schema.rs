//! Declare your own packed types, build them step by step with the
//! generated `start_*`/`write_*` functions and read them with `case_*`.
//!
//!     cargo run --example custom_schema

use packed::{types, Cursor, DecodeError, Needs, Pack, Plain};

packed::packed_types! {
    data Expr = Lit Int | Neg Expr | Sum Exprs
    data Exprs = End | More Expr Exprs
}

fn eval(c: Cursor<'_, Plain, (Expr, ())>) -> Result<(i64, Cursor<'_, Plain, ()>), DecodeError> {
    c.case_expr(
        |c| c.read_int(),
        |c| {
            let (v, c) = eval(c)?;
            Ok((-v, c))
        },
        |c| eval_all(c),
    )
}

fn eval_all(c: Cursor<'_, Plain, (Exprs, ())>) -> Result<(i64, Cursor<'_, Plain, ()>), DecodeError> {
    c.case_exprs(
        |c| Ok((0, c)),
        |c| {
            let (head, c) = c.focus(eval)?;
            let (tail, c) = eval_all(c)?;
            Ok((head + tail, c))
        },
    )
}

fn main() {
    // Sum [1, Neg 5, 10]
    let buf = Needs::<Plain, types![Expr], types![Expr]>::new()
        .start_sum()
        .start_more()
        .write_lit(1)
        .start_more()
        .start_neg()
        .write_lit(5)
        .start_more()
        .write_lit(10)
        .write_end()
        .finish()
        .unwrap();

    let (v, _) = buf.run_reader(eval).unwrap();
    let native = buf.unpack().unwrap();
    println!("{native:?}");
    println!("{} bytes, value {v}", buf.len());
    assert_eq!(native.pack::<Plain>().unwrap(), buf);
}
