//! Packed-to-packed: copy a tree into a new buffer with every leaf plus one,
//! using `transform_tree`, which matches a constructor and starts the same
//! one on the output in a single step.
//!
//!     cargo run --example transform_increment

use packed::workloads::{Tree, TreeCase};
use packed::{Cursor, DecodeError, Indirect, Needs, Pack, Scope};

type In<'a> = Cursor<'a, Indirect, (Tree, ())>;
type Out = Needs<Indirect, (Tree, ()), Scope>;

fn increment<'a>(c: In<'a>, out: Out) -> Result<(Needs<Indirect, (), Scope>, Cursor<'a, Indirect, ()>), DecodeError> {
    c.transform_tree(
        out,
        |c, out| {
            let (v, c) = c.skip_field_size()?.read_int()?;
            Ok((out.write_int(v + 1), c))
        },
        |c, out| {
            let c = c.skip_field_size()?;
            let (out, c) = c.focus(|c| out.apply_with(|o| increment(c, o)))?;
            increment(c.skip_field_size()?, out)
        },
    )
}

fn main() {
    let tree = Tree::node(Tree::node(Tree::Leaf(1), Tree::Leaf(2)), Tree::Leaf(3));
    let input = tree.pack::<Indirect>().unwrap();
    let (out, _) = Needs::new().apply_with(|o| increment(input.cursor(), o)).unwrap();
    // size slots were patched as each field completed
    let output = out.finish().unwrap();
    println!("in:  {:?}", input.unpack().unwrap());
    println!("out: {:?}", output.unpack().unwrap());
    assert_eq!(input.len(), output.len());
}
