//! Sum a packed tree by pattern matching on the bytes with `case_tree`.
//! No `Tree` value is ever built.
//!
//!     cargo run --example case_sum -- 16

use packed::workloads::{gen_symmetric_tree, tree::sum_native, Tree, TreeCase};
use packed::{Cursor, DecodeError, Pack, Plain};

fn sum(c: Cursor<'_, Plain, (Tree, ())>) -> Result<(i64, Cursor<'_, Plain, ()>), DecodeError> {
    c.case_tree(
        |c| c.read_int(),
        |c| {
            // focus narrows the cursor to the left subtree so `sum` can recurse
            let (l, c) = c.focus(sum)?;
            let (r, c) = sum(c)?;
            Ok((l + r, c))
        },
    )
}

fn main() {
    let depth = std::env::args().nth(1).and_then(|d| d.parse().ok()).unwrap_or(10);
    let tree = gen_symmetric_tree(depth).expect("depth <= 30");
    let buf = tree.pack::<Plain>().unwrap();
    let (total, rest) = buf.run_reader(sum).unwrap();
    rest.expect_end().unwrap();
    println!("depth {depth}: {} bytes, sum {total}", buf.len());
    assert_eq!(total, sum_native(&tree));
}
