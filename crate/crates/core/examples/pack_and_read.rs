//! Pack a tree under each layout, look at the bytes, read it back.
//!
//!     cargo run --example pack_and_read

use packed::workloads::Tree;
use packed::{Indirect, IndirectSkipLast, Layout, Pack, Plain, Unpack};

fn show<L: Layout>(tree: &Tree)
where
    Tree: Unpack<L>,
{
    let buf = tree.pack::<L>().expect("small tree");
    let hex: Vec<String> = buf.as_bytes().iter().map(|b| format!("{b:02x}")).collect();
    println!("{:<20} {:>3} bytes  {}", L::MODE.name(), buf.len(), hex.join(" "));
    assert_eq!(&buf.unpack().unwrap(), tree);
}

fn main() {
    let tree = Tree::node(Tree::Leaf(1), Tree::Leaf(2));
    println!("{tree:?}");
    show::<Plain>(&tree);
    show::<Indirect>(&tree);
    show::<IndirectSkipLast>(&tree);
}
