//! The untyped cursor: the same sum written directly against offsets, next
//! to the typed version.
//!
//!     cargo run --release --example raw_cursor -- 18

use std::time::Instant;

use packed::workloads::gen_symmetric_tree;
use packed::workloads::tree::{raw_sum, sum_packed};
use packed::{DecodeError, IndirectSkipLast, Pack, RawCursor};

// Hand-written for IndirectSkipLast: a node's left child has a size slot.
fn sum(c: &mut RawCursor<'_>) -> Result<i64, DecodeError> {
    match c.read_tag()? {
        0 => c.read_int(),
        _ => {
            c.read_size()?;
            Ok(sum(c)? + sum(c)?)
        }
    }
}

fn main() {
    let depth = std::env::args().nth(1).and_then(|d| d.parse().ok()).unwrap_or(16);
    let buf = gen_symmetric_tree(depth).unwrap().pack::<IndirectSkipLast>().unwrap();

    let t = Instant::now();
    let typed = sum_packed(&buf).unwrap();
    let typed_time = t.elapsed();

    let t = Instant::now();
    let raw = raw_sum::<IndirectSkipLast>(buf.as_bytes()).unwrap();
    let raw_time = t.elapsed();

    let hand = sum(&mut RawCursor::new(buf.as_bytes())).unwrap();
    println!("typed {typed} in {typed_time:?}, raw {raw} in {raw_time:?}, hand-written {hand}");
    assert!(typed == raw && raw == hand);
}
