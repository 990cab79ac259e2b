//! The `packed` command line tool.
//!
//! Packed files are bare buffers with no header: the schema, root type and
//! layout are given as arguments. Exit codes: 0 success, 2 bad arguments,
//! 3 I/O failure, 4 invalid buffer, 5 division by zero.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bench::{self, BenchConfig, OutputFormat, Suite};
use crate::format::{Indirect, IndirectSkipLast, LayoutMode, Plain};
use crate::reader::Packed;
use crate::schema::{dynamic_pack, validate_buffer, wire_elements, Adt, Schema, ValueTree};
use crate::workloads::ast::{self, EvalError};
use crate::workloads::tree;
use crate::workloads::{gen_symmetric_ast, gen_symmetric_tree, Ast, Tree, MAX_DEPTH};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_INVALID: i32 = 4;
pub const EXIT_DIV_ZERO: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "packed", version, about = "Generate, inspect and traverse packed buffers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a full binary tree whose leaves hold 0, 1, 2, ...
    GenTree(GenArgs),
    /// Write a full arithmetic expression tree.
    GenAst(GenArgs),
    /// Check that a file holds exactly one value of a type.
    Validate(InspectArgs),
    /// Print a file's value and an annotated listing of its bytes.
    Dump(InspectArgs),
    /// Run a traversal over a packed Tree (or Ast, for `eval`).
    #[command(subcommand)]
    Traverse(Traversal),
    /// Time the workloads.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(0..=MAX_DEPTH as i64))]
    depth: u32,
    #[arg(long, value_parser = parse_layout)]
    layout: LayoutMode,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct InspectArgs {
    /// Schema file, e.g. `data Tree = Leaf Int | Node Tree Tree`.
    #[arg(long)]
    schema: PathBuf,
    /// Root type of the buffer.
    #[arg(long = "type")]
    ty: String,
    #[arg(long, value_parser = parse_layout)]
    layout: LayoutMode,
    file: PathBuf,
}

#[derive(Debug, Args)]
struct Input {
    #[arg(long, value_parser = parse_layout)]
    layout: LayoutMode,
    file: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Traversal {
    /// Sum of all leaves.
    Sum(Input),
    /// Value of an arithmetic expression.
    Eval(Input),
    /// Value of the right-most leaf.
    Rightmost {
        #[command(flatten)]
        input: Input,
        /// Jump over left subtrees using field sizes. Needs an indirect layout.
        #[arg(long)]
        use_indirections: bool,
        /// Also print the number of bytes read.
        #[arg(long)]
        count_bytes: bool,
    },
    /// Write a copy with every leaf incremented.
    Increment {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, default_value = "sum")]
    suite: Suite,
    #[arg(long, value_delimiter = ',', default_value = "10,15,20")]
    depths: Vec<u32>,
    #[arg(long, value_delimiter = ',', value_parser = parse_layout, default_value = "plain,indirect,indirect-skip-last")]
    layouts: Vec<LayoutMode>,
    #[arg(long, default_value_t = 3)]
    warmup: usize,
    #[arg(long, default_value_t = 20)]
    iters: usize,
    #[arg(long, value_parser = ["table", "csv"], default_value = "table")]
    output: String,
}

fn parse_layout(s: &str) -> Result<LayoutMode, String> {
    s.parse().map_err(|e| format!("{e}"))
}

/// A failed command: exit code and message for stderr.
#[derive(Debug)]
struct Failure(i32, String);

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure(EXIT_USAGE, msg.into())
    }

    fn io(path: &Path, e: io::Error) -> Self {
        Failure(EXIT_IO, format!("{}: {e}", path.display()))
    }

    fn invalid(path: &Path, e: impl std::fmt::Display) -> Self {
        Failure(EXIT_INVALID, format!("{}: invalid buffer: {e}", path.display()))
    }
}

type Outcome = Result<(), Failure>;

/// Runs the tool with `args` (including the program name), writing to the
/// given streams. Returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::GenTree(a) => gen(&a, || gen_symmetric_tree(a.depth).map(|t| t.to_value()), &Tree::schema(), out),
        Command::GenAst(a) => gen(&a, || gen_symmetric_ast(a.depth).map(|t| t.to_value()), &Ast::schema(), out),
        Command::Validate(a) => validate(&a, out),
        Command::Dump(a) => dump(&a, out),
        Command::Traverse(t) => traverse(t, out),
        Command::Bench(a) => run_bench(&a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn write_file(path: &Path, bytes: &[u8]) -> Outcome {
    fs::write(path, bytes).map_err(|e| Failure::io(path, e))
}

fn read_file(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::io(path, e))
}

fn gen<E: std::fmt::Display>(
    a: &GenArgs,
    value: impl FnOnce() -> Result<ValueTree, E>,
    schema: &Schema,
    out: &mut dyn Write,
) -> Outcome {
    let value = value().map_err(|e| Failure::usage(e.to_string()))?;
    let bytes = dynamic_pack(schema, &value, a.layout).map_err(|e| Failure::usage(e.to_string()))?;
    write_file(&a.out, &bytes)?;
    let _ = writeln!(out, "wrote {} bytes to {}", bytes.len(), a.out.display());
    Ok(())
}

fn load_schema(a: &InspectArgs) -> Result<Schema, Failure> {
    let text = fs::read_to_string(&a.schema).map_err(|e| Failure::io(&a.schema, e))?;
    let schema: Schema = text
        .parse()
        .map_err(|e| Failure::usage(format!("{}: {e}", a.schema.display())))?;
    if schema.get(&a.ty).is_none() {
        return Err(Failure::usage(format!("type `{}` is not declared in {}", a.ty, a.schema.display())));
    }
    Ok(schema)
}

#[derive(Debug, Default, PartialEq, Eq)]
struct Summary {
    constructors: usize,
    ints: usize,
    depth: usize,
}

fn summarize(value: &ValueTree) -> Summary {
    let mut s = Summary::default();
    let mut stack = vec![(value, 0)];
    while let Some((v, depth)) = stack.pop() {
        s.depth = s.depth.max(depth);
        match v {
            ValueTree::Int(_) => s.ints += 1,
            ValueTree::Ctor { fields, .. } => {
                s.constructors += 1;
                stack.extend(fields.iter().map(|f| (f, depth + 1)));
            }
        }
    }
    s
}

fn validate(a: &InspectArgs, out: &mut dyn Write) -> Outcome {
    let schema = load_schema(a)?;
    let bytes = read_file(&a.file)?;
    let value = validate_buffer(&schema, &a.ty, a.layout, &bytes).map_err(|e| Failure::invalid(&a.file, e))?;
    let s = summarize(&value);
    let _ = writeln!(
        out,
        "ok: {} ({}), {} bytes, {} constructors, {} ints, depth {}",
        a.ty,
        a.layout,
        bytes.len(),
        s.constructors,
        s.ints,
        s.depth
    );
    Ok(())
}

fn dump(a: &InspectArgs, out: &mut dyn Write) -> Outcome {
    let schema = load_schema(a)?;
    let bytes = read_file(&a.file)?;
    let (value, elements) = wire_elements(&schema, &a.ty, a.layout, &bytes).map_err(|e| Failure::invalid(&a.file, e))?;
    let _ = writeln!(out, "{}", value.display(&schema));
    let _ = writeln!(out);
    for e in &elements {
        let _ = writeln!(out, "{}", e.render(&bytes));
    }
    Ok(())
}

/// Reads `input` and checks it holds exactly one `T`.
fn load_packed<T: Adt>(input: &Input) -> Result<Vec<u8>, Failure> {
    let bytes = read_file(&input.file)?;
    validate_buffer(&T::schema(), T::NAME, input.layout, &bytes).map_err(|e| Failure::invalid(&input.file, e))?;
    Ok(bytes)
}

/// Calls `$body` with `$p` bound to `Packed::<L, $t>::from_bytes($bytes)`
/// for the marker `L` of `$layout`.
macro_rules! with_layout {
    ($layout:expr, $bytes:expr, $t:ty, |$p:ident| $body:expr) => {
        match $layout {
            LayoutMode::Plain => {
                let $p = Packed::<Plain, ($t, ())>::from_bytes($bytes);
                $body
            }
            LayoutMode::Indirect => {
                let $p = Packed::<Indirect, ($t, ())>::from_bytes($bytes);
                $body
            }
            LayoutMode::IndirectSkipLast => {
                let $p = Packed::<IndirectSkipLast, ($t, ())>::from_bytes($bytes);
                $body
            }
        }
    };
}

fn traverse(t: Traversal, out: &mut dyn Write) -> Outcome {
    match t {
        Traversal::Sum(input) => {
            let bytes = load_packed::<Tree>(&input)?;
            let sum = with_layout!(input.layout, bytes, Tree, |p| tree::sum_packed(&p))
                .map_err(|e| Failure::invalid(&input.file, e))?;
            let _ = writeln!(out, "{sum}");
        }
        Traversal::Eval(input) => {
            let bytes = load_packed::<Ast>(&input)?;
            match with_layout!(input.layout, bytes, Ast, |p| ast::eval_packed(&p)) {
                Ok(v) => {
                    let _ = writeln!(out, "{v}");
                }
                Err(EvalError::DivisionByZero) => {
                    return Err(Failure(EXIT_DIV_ZERO, "division by zero".into()))
                }
                Err(EvalError::Decode(e)) => return Err(Failure::invalid(&input.file, e)),
            }
        }
        Traversal::Rightmost {
            input,
            use_indirections,
            count_bytes,
        } => {
            if use_indirections && input.layout == LayoutMode::Plain {
                return Err(Failure::usage("--use-indirections needs an indirect layout"));
            }
            let bytes = load_packed::<Tree>(&input)?;
            let result = match (input.layout, use_indirections) {
                (LayoutMode::Indirect, true) => {
                    tree::rightmost_packed_indirect_counted(&Packed::<Indirect, _>::from_bytes(bytes))
                }
                (LayoutMode::IndirectSkipLast, true) => {
                    tree::rightmost_packed_indirect_counted(&Packed::<IndirectSkipLast, _>::from_bytes(bytes))
                }
                (layout, _) => with_layout!(layout, bytes, Tree, |p| tree::rightmost_packed_plain_counted(&p)),
            };
            let (v, consumed) = result.map_err(|e| Failure::invalid(&input.file, e))?;
            let _ = writeln!(out, "{v}");
            if count_bytes {
                let _ = writeln!(out, "bytes read: {consumed}");
            }
        }
        Traversal::Increment { input, out: path } => {
            let bytes = load_packed::<Tree>(&input)?;
            let result = with_layout!(input.layout, bytes, Tree, |p| {
                tree::increment_packed(&p).map(Packed::into_bytes)
            });
            let result = result.map_err(|e| Failure::invalid(&input.file, e))?;
            write_file(&path, &result)?;
            let _ = writeln!(out, "wrote {} bytes to {}", result.len(), path.display());
        }
    }
    Ok(())
}

fn run_bench(a: &BenchArgs, out: &mut dyn Write) -> Outcome {
    let config = BenchConfig {
        suite: a.suite,
        depths: a.depths.clone(),
        layouts: a.layouts.clone(),
        warmup_iters: a.warmup,
        measured_iters: a.iters,
        output: if a.output == "csv" { OutputFormat::Csv } else { OutputFormat::Table },
    };
    config.validate().map_err(|e| Failure::usage(e.to_string()))?;
    match config.output {
        OutputFormat::Table => {
            let _ = writeln!(out, "{}", bench::table_header());
            bench::run_with(&config, |r| {
                let _ = writeln!(out, "{}", bench::table_row(r));
            })
            .map_err(|e| Failure::usage(e.to_string()))?;
        }
        OutputFormat::Csv => {
            let records = bench::run(&config).map_err(|e| Failure::usage(e.to_string()))?;
            bench::write_csv(&records, out).map_err(|e| Failure(EXIT_IO, e.to_string()))?;
        }
    }
    Ok(())
}
