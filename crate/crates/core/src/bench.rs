//! Benchmark harness for the tree and AST workloads.
//!
//! Every cell pre-builds its input, runs `warmup_iters` untimed iterations,
//! then times `measured_iters` iterations with [`Instant`]. Results go
//! through [`black_box`] so traversals are not optimised away.

use std::fmt;
use std::hint::black_box;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::format::{Indirect, IndirectSkipLast, LayoutMode, Plain};
use crate::reader::Packed;
use crate::workloads::ast::{self, AstLayout};
use crate::workloads::tree::{self, TreeLayout};
use crate::workloads::{gen_symmetric_ast, gen_symmetric_tree, Ast, Tree, MAX_DEPTH};
use crate::{Pack, Unpack};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Sum,
    Ast,
    Rightmost,
    Increment,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Sum, Suite::Ast, Suite::Rightmost, Suite::Increment];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Sum => "sum",
            Suite::Ast => "ast",
            Suite::Rightmost => "rightmost",
            Suite::Increment => "increment",
        }
    }

    /// Variants measured by this suite, in output order.
    pub fn variants(self) -> &'static [Variant] {
        use Variant::*;
        match self {
            Suite::Sum | Suite::Ast | Suite::Rightmost => {
                &[Native, PackedChecked, PackedRaw, UnpackThenProcess]
            }
            Suite::Increment => &[Native, PackedChecked, UnpackThenProcess, DeserialiseAndIncrement],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}` (expected sum, ast, rightmost or increment)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Native,
    PackedChecked,
    PackedRaw,
    UnpackThenProcess,
    DeserialiseAndIncrement,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Native => "native",
            Variant::PackedChecked => "packed-checked",
            Variant::PackedRaw => "packed-raw",
            Variant::UnpackThenProcess => "unpack-then-process",
            Variant::DeserialiseAndIncrement => "deserialise-and-increment",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Table,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub suite: Suite,
    pub depths: Vec<u32>,
    pub layouts: Vec<LayoutMode>,
    pub warmup_iters: usize,
    pub measured_iters: usize,
    pub output: OutputFormat,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            suite: Suite::Sum,
            depths: vec![10, 15, 20],
            layouts: LayoutMode::ALL.to_vec(),
            warmup_iters: 3,
            measured_iters: 20,
            output: OutputFormat::Table,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("measured iterations must be at least 3, got {0}")]
    TooFewIterations(usize),
    #[error("depth {0} exceeds the maximum of {MAX_DEPTH}")]
    DepthTooLarge(u32),
    #[error("no depths given")]
    NoDepths,
    #[error("no layouts given")]
    NoLayouts,
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.measured_iters < 3 {
            return Err(ConfigError::TooFewIterations(self.measured_iters));
        }
        if self.depths.is_empty() {
            return Err(ConfigError::NoDepths);
        }
        if self.layouts.is_empty() {
            return Err(ConfigError::NoLayouts);
        }
        match self.depths.iter().find(|&&d| d > MAX_DEPTH) {
            Some(&d) => Err(ConfigError::DepthTooLarge(d)),
            None => Ok(()),
        }
    }
}

/// One benchmark cell. Times are nanoseconds per iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub suite: Suite,
    pub variant: Variant,
    #[serde(with = "layout_name")]
    pub layout: LayoutMode,
    pub depth: u32,
    pub median_ns: f64,
    pub mean_ns: f64,
    pub stddev_ns: f64,
    pub bytes_consumed: Option<usize>,
}

impl BenchRecord {
    /// Whether `median ≤ mean + 3·stddev`, a loose sanity bound on the sample.
    pub fn plausible(&self) -> bool {
        self.median_ns <= self.mean_ns + 3.0 * self.stddev_ns
    }
}

/// Summary statistics of a set of samples in nanoseconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub median: f64,
    pub mean: f64,
    pub stddev: f64,
}

impl Stats {
    /// Panics on an empty sample.
    pub fn of(samples: &[f64]) -> Stats {
        assert!(!samples.is_empty(), "no samples");
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
        };
        let mean = sorted.iter().sum::<f64>() / n as f64;
        let var = sorted.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        Stats {
            median,
            mean,
            stddev: var.sqrt(),
        }
    }
}

/// Runs `f` `warmup` times untimed, then `iters` times timed.
pub fn measure<T>(warmup: usize, iters: usize, mut f: impl FnMut() -> T) -> Stats {
    for _ in 0..warmup {
        black_box(f());
    }
    let samples: Vec<f64> = (0..iters)
        .map(|_| {
            let start = Instant::now();
            black_box(f());
            start.elapsed().as_nanos() as f64
        })
        .collect();
    Stats::of(&samples)
}

trait BenchLayout: TreeLayout + AstLayout
where
    Tree: Unpack<Self>,
    Ast: Unpack<Self>,
{
    fn rightmost_checked(p: &Packed<Self, (Tree, ())>) -> (i64, usize);
}

impl BenchLayout for Plain {
    fn rightmost_checked(p: &Packed<Self, (Tree, ())>) -> (i64, usize) {
        tree::rightmost_packed_plain_counted(p).expect("generated input")
    }
}

impl BenchLayout for Indirect {
    fn rightmost_checked(p: &Packed<Self, (Tree, ())>) -> (i64, usize) {
        tree::rightmost_packed_indirect_counted(p).expect("generated input")
    }
}

impl BenchLayout for IndirectSkipLast {
    fn rightmost_checked(p: &Packed<Self, (Tree, ())>) -> (i64, usize) {
        tree::rightmost_packed_indirect_counted(p).expect("generated input")
    }
}

/// Measures every variant of `suite` at one depth under layout `L`.
fn run_cell<L: BenchLayout>(suite: Suite, depth: u32, warmup: usize, iters: usize) -> Vec<BenchRecord>
where
    Tree: Unpack<L>,
    Ast: Unpack<L>,
{
    let record = |variant, stats: Stats, bytes_consumed| BenchRecord {
        suite,
        variant,
        layout: L::MODE,
        depth,
        median_ns: stats.median,
        mean_ns: stats.mean,
        stddev_ns: stats.stddev,
        bytes_consumed,
    };
    let m = |f: &mut dyn FnMut() -> i64| measure(warmup, iters, f);
    let expect = "generated input";

    match suite {
        Suite::Ast => {
            let native = gen_symmetric_ast(depth).expect("validated depth");
            let p: Packed<L, (Ast, ())> = native.pack().expect(expect);
            vec![
                record(Variant::Native, m(&mut || ast::eval_native(&native).expect(expect)), None),
                record(Variant::PackedChecked, m(&mut || ast::eval_packed(&p).expect(expect)), None),
                record(Variant::PackedRaw, m(&mut || ast::raw_eval::<L>(p.as_bytes()).expect(expect)), None),
                record(
                    Variant::UnpackThenProcess,
                    m(&mut || ast::unpack_then_eval(&p).expect(expect)),
                    None,
                ),
            ]
        }
        _ => {
            let native = gen_symmetric_tree(depth).expect("validated depth");
            let p: Packed<L, (Tree, ())> = native.pack().expect(expect);
            match suite {
                Suite::Sum => vec![
                    record(Variant::Native, m(&mut || tree::sum_native(&native)), None),
                    record(Variant::PackedChecked, m(&mut || tree::sum_packed(&p).expect(expect)), None),
                    record(Variant::PackedRaw, m(&mut || tree::raw_sum::<L>(p.as_bytes()).expect(expect)), None),
                    record(
                        Variant::UnpackThenProcess,
                        m(&mut || tree::unpack_then_sum(&p).expect(expect)),
                        None,
                    ),
                ],
                Suite::Rightmost => {
                    // Counted separately from the timed runs.
                    let checked_bytes = L::rightmost_checked(&p).1;
                    let raw_bytes = tree::raw_rightmost::<L>(p.as_bytes()).expect(expect).1;
                    vec![
                        record(Variant::Native, m(&mut || tree::rightmost_native(&native)), None),
                        record(
                            Variant::PackedChecked,
                            m(&mut || L::rightmost_checked(&p).0),
                            Some(checked_bytes),
                        ),
                        record(
                            Variant::PackedRaw,
                            m(&mut || tree::raw_rightmost::<L>(p.as_bytes()).expect(expect).0),
                            Some(raw_bytes),
                        ),
                        record(
                            Variant::UnpackThenProcess,
                            m(&mut || tree::unpack_then_rightmost(&p).expect(expect)),
                            None,
                        ),
                    ]
                }
                _ => vec![
                    record(
                        Variant::Native,
                        measure(warmup, iters, || tree::increment_native(&native)),
                        None,
                    ),
                    record(
                        Variant::PackedChecked,
                        measure(warmup, iters, || tree::increment_packed(&p).expect(expect)),
                        None,
                    ),
                    record(
                        Variant::UnpackThenProcess,
                        measure(warmup, iters, || tree::unpack_increment_repack(&p).expect(expect)),
                        None,
                    ),
                    record(
                        Variant::DeserialiseAndIncrement,
                        measure(warmup, iters, || tree::case_increment_then_pack(&p).expect(expect)),
                        None,
                    ),
                ],
            }
        }
    }
}

/// Runs every cell of `config`, calling `sink` as each record completes.
pub fn run_with(config: &BenchConfig, mut sink: impl FnMut(&BenchRecord)) -> Result<Vec<BenchRecord>, ConfigError> {
    config.validate()?;
    let mut all = Vec::new();
    for &depth in &config.depths {
        for &layout in &config.layouts {
            let (w, n) = (config.warmup_iters, config.measured_iters);
            let records = match layout {
                LayoutMode::Plain => run_cell::<Plain>(config.suite, depth, w, n),
                LayoutMode::Indirect => run_cell::<Indirect>(config.suite, depth, w, n),
                LayoutMode::IndirectSkipLast => run_cell::<IndirectSkipLast>(config.suite, depth, w, n),
            };
            for r in records {
                sink(&r);
                all.push(r);
            }
        }
    }
    Ok(all)
}

pub fn run(config: &BenchConfig) -> Result<Vec<BenchRecord>, ConfigError> {
    run_with(config, |_| {})
}

mod layout_name {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use crate::format::LayoutMode;

    pub fn serialize<S: Serializer>(layout: &LayoutMode, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(layout.name())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<LayoutMode, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

pub const CSV_HEADER: [&str; 8] = [
    "suite",
    "variant",
    "layout",
    "depth",
    "median_ns",
    "mean_ns",
    "stddev_ns",
    "bytes_consumed",
];

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(input: R) -> csv::Result<Vec<BenchRecord>> {
    csv::Reader::from_reader(input).deserialize().collect()
}

pub fn table_header() -> String {
    format!(
        "{:<10} {:<26} {:<18} {:>5} {:>14} {:>14} {:>12} {:>14}",
        "suite", "variant", "layout", "depth", "median_ns", "mean_ns", "stddev_ns", "bytes"
    )
}

pub fn table_row(r: &BenchRecord) -> String {
    let bytes = r.bytes_consumed.map_or_else(|| "-".to_string(), |b| b.to_string());
    format!(
        "{:<10} {:<26} {:<18} {:>5} {:>14.0} {:>14.0} {:>12.0} {:>14}",
        r.suite.name(),
        r.variant.name(),
        r.layout.name(),
        r.depth,
        r.median_ns,
        r.mean_ns,
        r.stddev_ns,
        bytes
    )
}
