//! Run the sum benchmark suite and print a table, the same as
//! `packed bench --suite sum`.
//!
//!     cargo run --release --example bench_sum

use packed::bench::{run_with, table_header, table_row, BenchConfig, Suite};

fn main() {
    let config = BenchConfig {
        suite: Suite::Sum,
        depths: vec![10, 15, 20],
        measured_iters: 10,
        ..BenchConfig::default()
    };
    println!("{}", table_header());
    run_with(&config, |r| println!("{}", table_row(r))).unwrap();
}
