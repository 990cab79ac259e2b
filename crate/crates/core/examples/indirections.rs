//! Find the right-most leaf with and without field sizes and compare how
//! many bytes each traversal reads.
//!
//!     cargo run --release --example indirections -- 20

use packed::workloads::gen_symmetric_tree;
use packed::workloads::tree::{rightmost_packed_indirect_counted, rightmost_packed_plain_counted};
use packed::{Indirect, IndirectSkipLast, Pack, Plain};

fn main() {
    let depth = std::env::args().nth(1).and_then(|d| d.parse().ok()).unwrap_or(16);
    let tree = gen_symmetric_tree(depth).expect("depth <= 30");

    let plain = tree.pack::<Plain>().unwrap();
    let (v, read) = rightmost_packed_plain_counted(&plain).unwrap();
    println!("plain               value {v}, read {read:>10} of {:>10} bytes", plain.len());

    let ind = tree.pack::<Indirect>().unwrap();
    let (v, read) = rightmost_packed_indirect_counted(&ind).unwrap();
    println!("indirect            value {v}, read {read:>10} of {:>10} bytes", ind.len());

    let skip = tree.pack::<IndirectSkipLast>().unwrap();
    let (v, read) = rightmost_packed_indirect_counted(&skip).unwrap();
    println!("indirect-skip-last  value {v}, read {read:>10} of {:>10} bytes", skip.len());
}
