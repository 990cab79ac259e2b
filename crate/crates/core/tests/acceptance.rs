//! Acceptance checks. Runs as a plain binary (`harness = false`) so each
//! check prints one PASS/FAIL line; exits non-zero if any check fails.

use std::convert::Infallible;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use packed::bench::measure;
use packed::schema::{validate_buffer, wire_elements, Adt, ValidateError, WireKind};
use packed::workloads::ast::{eval_native, eval_packed, raw_eval, unpack_then_eval};
use packed::workloads::tree::{
    increment_native, increment_packed, raw_rightmost, raw_sum, rightmost_native,
    rightmost_packed_indirect, rightmost_packed_indirect_counted, rightmost_packed_plain,
    rightmost_packed_plain_counted, sum_native, sum_packed,
};
use packed::workloads::{gen_random_ast, gen_random_tree, gen_symmetric_ast, gen_symmetric_tree, Ast, Tree};
use packed::{
    AstBuild, DecodeError, Indirect, IndirectSkipLast, Layout, LayoutMode, Needs, Pack, Packed,
    Plain, Scope, TreeBuild, Unpack,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CORPUS: u64 = 1000;
const CORPUS_DEPTH: u32 = 12;
const TIMING_DEPTH: u32 = 20;
const TIMING_ITERS: usize = 20;
const MIN_UNPACK_RATIO: f64 = 1.5;
const MAX_JUMP_BYTES: usize = 200;
const MIN_BYTE_RATIO: f64 = 1e4;
const FUZZ_CASES: usize = 10_000;
const FUZZ_MAX_LEN: usize = 64;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// Byte-layout oracle: children are encoded first, so every size is simply
// the length of an already-built byte vector.
fn oracle_ctor(tag: u8, fields: Vec<Vec<u8>>, layout: LayoutMode) -> Vec<u8> {
    let n = fields.len();
    let mut out = vec![tag];
    for (i, f) in fields.into_iter().enumerate() {
        let sized = match layout {
            LayoutMode::Plain => false,
            LayoutMode::Indirect => true,
            LayoutMode::IndirectSkipLast => i + 1 < n,
        };
        if sized {
            out.extend_from_slice(&(f.len() as u32).to_le_bytes());
        }
        out.extend(f);
    }
    out
}

fn oracle_tree(t: &Tree, layout: LayoutMode) -> Vec<u8> {
    match t {
        Tree::Leaf(v) => oracle_ctor(0, vec![v.to_le_bytes().to_vec()], layout),
        Tree::Node(l, r) => oracle_ctor(1, vec![oracle_tree(l, layout), oracle_tree(r, layout)], layout),
    }
}

fn oracle_ast(a: &Ast, layout: LayoutMode) -> Vec<u8> {
    let (tag, l, r) = match a {
        Ast::Value(v) => return oracle_ctor(0, vec![v.to_le_bytes().to_vec()], layout),
        Ast::Add(l, r) => (1, l, r),
        Ast::Sub(l, r) => (2, l, r),
        Ast::Mul(l, r) => (3, l, r),
        Ast::Div(l, r) => (4, l, r),
    };
    oracle_ctor(tag, vec![oracle_ast(l, layout), oracle_ast(r, layout)], layout)
}

fn trees() -> Vec<Tree> {
    (0..CORPUS).map(|s| gen_random_tree(s, CORPUS_DEPTH)).collect()
}

fn asts() -> Vec<Ast> {
    (0..CORPUS).map(|s| gen_random_ast(s, CORPUS_DEPTH)).collect()
}

fn round_trip_one<L: Layout, T>(x: &T, oracle: fn(&T, LayoutMode) -> Vec<u8>) -> Result<(), String>
where
    T: Pack + Unpack<L> + Adt + PartialEq + std::fmt::Debug,
{
    let p = x.pack::<L>().map_err(|e| e.to_string())?;
    ensure(p.as_bytes() == oracle(x, L::MODE), || format!("{}: bytes differ from oracle", L::MODE))?;
    ensure(p.unpack().as_ref() == Ok(x), || format!("{}: unpack(pack(x)) != x", L::MODE))?;
    let v = validate_buffer(&T::schema(), T::NAME, L::MODE, p.as_bytes()).map_err(|e| e.to_string())?;
    ensure(v == x.to_value(), || format!("{}: validator decoded a different value", L::MODE))
}

fn round_trip_all<T>(x: &T, oracle: fn(&T, LayoutMode) -> Vec<u8>) -> Result<(), String>
where
    T: Pack + Unpack<Plain> + Unpack<Indirect> + Unpack<IndirectSkipLast> + Adt + PartialEq + std::fmt::Debug,
{
    round_trip_one::<Plain, T>(x, oracle)?;
    round_trip_one::<Indirect, T>(x, oracle)?;
    round_trip_one::<IndirectSkipLast, T>(x, oracle)
}

fn check_1() -> Check {
    let start = Instant::now();
    for (i, t) in trees().iter().enumerate() {
        round_trip_all(t, oracle_tree).map_err(|e| format!("tree seed {i}: {e}"))?;
    }
    for (i, a) in asts().iter().enumerate() {
        round_trip_all(a, oracle_ast).map_err(|e| format!("ast seed {i}: {e}"))?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!("{CORPUS} trees + {CORPUS} ASTs x 3 layouts, {secs:.2}s"))
}

fn manual_tree<L: Layout>(t: &Tree, out: Needs<L, (Tree, ()), Scope>) -> Needs<L, (), Scope> {
    match t {
        Tree::Leaf(v) => out.start_leaf().write_int(*v),
        Tree::Node(l, r) => {
            let out = out
                .start_node()
                .apply(|o| Ok::<_, Infallible>(manual_tree(l, o)))
                .unwrap();
            manual_tree(r, out)
        }
    }
}

fn manual_ast<L: Layout>(a: &Ast, out: Needs<L, (Ast, ()), Scope>) -> Needs<L, (), Scope> {
    let (out, l, r) = match a {
        Ast::Value(v) => return out.start_value().write_int(*v),
        Ast::Add(l, r) => (out.start_add(), l, r),
        Ast::Sub(l, r) => (out.start_sub(), l, r),
        Ast::Mul(l, r) => (out.start_mul(), l, r),
        Ast::Div(l, r) => (out.start_div(), l, r),
    };
    let out = out.apply(|o| Ok::<_, Infallible>(manual_ast(l, o))).unwrap();
    manual_ast(r, out)
}

fn identical<L: Layout>(t: &Tree) -> bool {
    let manual = Needs::<L, (Tree, ()), (Tree, ())>::new()
        .apply(|o| Ok::<_, Infallible>(manual_tree(t, o)))
        .unwrap()
        .finish()
        .unwrap();
    let auto = Needs::<L, (Tree, ()), (Tree, ())>::new().write(t).finish().unwrap();
    manual == auto
}

fn identical_ast<L: Layout>(a: &Ast) -> bool {
    let manual = Needs::<L, (Ast, ()), (Ast, ())>::new()
        .apply(|o| Ok::<_, Infallible>(manual_ast(a, o)))
        .unwrap()
        .finish()
        .unwrap();
    manual == a.pack::<L>().unwrap()
}

fn check_2() -> Check {
    let mut mismatches = 0;
    for t in &trees() {
        mismatches += [identical::<Plain>(t), identical::<Indirect>(t), identical::<IndirectSkipLast>(t)]
            .iter()
            .filter(|ok| !**ok)
            .count();
    }
    for a in &asts() {
        mismatches += [identical_ast::<Plain>(a), identical_ast::<Indirect>(a), identical_ast::<IndirectSkipLast>(a)]
            .iter()
            .filter(|ok| !**ok)
            .count();
    }
    ensure(mismatches == 0, || format!("{mismatches} mismatches"))?;
    Ok(format!("{CORPUS} trees + {CORPUS} ASTs x 3 layouts, 0 mismatches"))
}

fn traversals<L: packed::workloads::tree::TreeLayout>(t: &Tree) -> Result<(), String>
where
    Tree: Unpack<L>,
{
    let p = t.pack::<L>().unwrap();
    ensure(sum_packed(&p) == Ok(sum_native(t)), || format!("{}: sum", L::MODE))?;
    ensure(rightmost_packed_plain(&p) == Ok(rightmost_native(t)), || format!("{}: rightmost", L::MODE))?;
    let inc = increment_packed(&p).map_err(|e| e.to_string())?;
    ensure(inc.unpack() == Ok(increment_native(t)), || format!("{}: increment", L::MODE))
}

fn check_3() -> Check {
    for (i, t) in trees().iter().enumerate() {
        let fail = |e: String| format!("tree seed {i}: {e}");
        traversals::<Plain>(t).map_err(fail)?;
        traversals::<Indirect>(t).map_err(fail)?;
        traversals::<IndirectSkipLast>(t).map_err(fail)?;
        let expected = Ok(rightmost_native(t));
        ensure(rightmost_packed_indirect(&t.pack::<Indirect>().unwrap()) == expected, || {
            fail("indirect jump rightmost".into())
        })?;
        ensure(rightmost_packed_indirect(&t.pack::<IndirectSkipLast>().unwrap()) == expected, || {
            fail("skip-last jump rightmost".into())
        })?;
    }
    for (i, a) in asts().iter().enumerate() {
        let expected = eval_native(a);
        let ok = eval_packed(&a.pack::<Plain>().unwrap()) == expected
            && eval_packed(&a.pack::<Indirect>().unwrap()) == expected
            && eval_packed(&a.pack::<IndirectSkipLast>().unwrap()) == expected;
        ensure(ok, || format!("ast seed {i}: eval"))?;
    }
    let t5 = gen_symmetric_tree(5).unwrap().pack::<Plain>().unwrap();
    ensure(sum_packed(&t5) == Ok(496), || "depth-5 sum != 496".into())?;
    for d in 0..=16 {
        let t = gen_symmetric_tree(d).unwrap();
        let want = Ok((1i64 << d) - 1);
        let pi = t.pack::<Indirect>().unwrap();
        let ok = rightmost_packed_plain(&t.pack::<Plain>().unwrap()) == want
            && rightmost_packed_indirect(&pi) == want
            && rightmost_packed_plain(&pi) == want;
        ensure(ok, || format!("depth-{d} rightmost != 2^d - 1"))?;
    }
    Ok(format!("sum/eval/rightmost x2/increment agree on {CORPUS} + {CORPUS} values; depth-5 sum 496; rightmost 2^d-1 for d<=16"))
}

fn raw_agrees<L: packed::workloads::tree::TreeLayout + packed::workloads::ast::AstLayout>(
    t: &Tree,
    a: &Ast,
) -> bool {
    let pt = t.pack::<L>().unwrap();
    let pa = a.pack::<L>().unwrap();
    raw_sum::<L>(pt.as_bytes()) == sum_packed(&pt)
        && raw_eval::<L>(pa.as_bytes()) == eval_packed(&pa)
        && raw_rightmost::<L>(pt.as_bytes()).map(|r| r.0) == rightmost_packed_plain(&pt)
}

fn check_4() -> Check {
    for (i, (t, a)) in trees().iter().zip(&asts()).enumerate() {
        let ok = raw_agrees::<Plain>(t, a) && raw_agrees::<Indirect>(t, a) && raw_agrees::<IndirectSkipLast>(t, a);
        ensure(ok, || format!("seed {i}: raw and checked results differ"))?;
    }
    Ok(format!("raw sum/eval equal checked on {CORPUS} trees + {CORPUS} ASTs x 3 layouts"))
}

fn check_5() -> Check {
    let t = gen_symmetric_tree(TIMING_DEPTH).unwrap();
    let p = t.pack::<Indirect>().unwrap();
    let (v_jump, jump) = rightmost_packed_indirect_counted(&p).map_err(|e| e.to_string())?;
    let (v_full, full) = rightmost_packed_plain_counted(&p).map_err(|e| e.to_string())?;
    let plain = t.pack::<Plain>().unwrap();
    let (v_plain, plain_read) = rightmost_packed_plain_counted(&plain).map_err(|e| e.to_string())?;
    let want = (1i64 << TIMING_DEPTH) - 1;
    ensure(v_jump == want && v_full == want && v_plain == want, || "wrong right-most value".into())?;
    ensure(jump <= MAX_JUMP_BYTES, || format!("jumping read {jump} bytes"))?;
    let floor = 9usize << TIMING_DEPTH;
    ensure(plain_read == plain.len() && plain_read >= floor, || {
        format!("plain read {plain_read} of {} bytes", plain.len())
    })?;
    ensure(full == p.len(), || format!("full traversal read {full} of {}", p.len()))?;
    let ratio = plain_read as f64 / jump as f64;
    ensure(ratio >= MIN_BYTE_RATIO, || format!("ratio {ratio:.0}"))?;
    Ok(format!("depth {TIMING_DEPTH}: jump {jump} B, plain {plain_read} B, ratio {ratio:.0}"))
}

fn check_6() -> Check {
    let a = gen_symmetric_ast(TIMING_DEPTH).unwrap();
    let p = a.pack::<Plain>().unwrap();
    let expected = eval_native(&a);
    ensure(eval_packed(&p) == expected && unpack_then_eval(&p) == expected, || "results differ".into())?;
    let packed = measure(2, TIMING_ITERS, || eval_packed(&p));
    let unpacked = measure(2, TIMING_ITERS, || unpack_then_eval(&p));
    let ratio = unpacked.median / packed.median;
    let detail = format!(
        "depth {TIMING_DEPTH}, {TIMING_ITERS} iters: eval_packed {:.2} ms, unpack_then_eval {:.2} ms, ratio {ratio:.2}",
        packed.median / 1e6,
        unpacked.median / 1e6
    );
    ensure(ratio >= MIN_UNPACK_RATIO, || detail.clone())?;
    Ok(detail)
}

fn allowed(e: &DecodeError) -> bool {
    matches!(
        e,
        DecodeError::InvalidTag { .. }
            | DecodeError::OutOfBounds { .. }
            | DecodeError::FieldSizeMismatch { .. }
            | DecodeError::TrailingBytes { .. }
    )
}

fn fuzz_one<L: Layout, T>(bytes: &[u8], accepted: &mut usize) -> Result<(), String>
where
    T: Pack + Unpack<L> + Adt + PartialEq + std::fmt::Debug,
{
    let p = Packed::<L, (T, ())>::from_bytes(bytes.to_vec());
    let unpacked = p.unpack();
    let validated = validate_buffer(&T::schema(), T::NAME, L::MODE, bytes);
    match (&unpacked, &validated) {
        (Ok(x), Ok(v)) => {
            *accepted += 1;
            ensure(x.pack::<L>().unwrap().as_bytes() == bytes, || format!("{bytes:02x?} re-packs differently"))?;
            ensure(&x.to_value() == v, || format!("{bytes:02x?} decodes differently"))
        }
        (Err(e), Err(ValidateError::Decode(f))) => {
            ensure(allowed(e) && allowed(f), || format!("{bytes:02x?}: unexpected {e:?} / {f:?}"))
        }
        _ => Err(format!("{bytes:02x?}: unpack {unpacked:?} but validate {validated:?}")),
    }
}

fn check_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut accepted = 0;
    for _ in 0..FUZZ_CASES {
        let len = rng.gen_range(0..=FUZZ_MAX_LEN);
        let mut bytes: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
        // Keep small tags common so the decoder gets past the first byte.
        if let Some(first) = bytes.first_mut() {
            if rng.gen_bool(0.5) {
                *first %= 5;
            }
        }
        fuzz_one::<Plain, Tree>(&bytes, &mut accepted)?;
        fuzz_one::<Indirect, Tree>(&bytes, &mut accepted)?;
        fuzz_one::<IndirectSkipLast, Tree>(&bytes, &mut accepted)?;
        fuzz_one::<Plain, Ast>(&bytes, &mut accepted)?;
        fuzz_one::<Indirect, Ast>(&bytes, &mut accepted)?;
        fuzz_one::<IndirectSkipLast, Ast>(&bytes, &mut accepted)?;
    }
    Ok(format!("{FUZZ_CASES} strings x 2 types x 3 layouts, {accepted} accepted, all re-pack identically"))
}

fn check_8() -> Check {
    let t = Tree::node(Tree::Leaf(1), Tree::Leaf(2));
    let schema = Tree::schema();
    let mut lens = Vec::new();
    for layout in LayoutMode::ALL {
        let bytes = packed::schema::dynamic_pack(&schema, &t.to_value(), layout).map_err(|e| e.to_string())?;
        ensure(bytes == oracle_tree(&t, layout), || format!("{layout}: differs from oracle"))?;
        lens.push(bytes.len());
    }
    ensure(lens == [19, 35, 23], || format!("lengths {lens:?}"))?;
    let ind = packed::schema::dynamic_pack(&schema, &t.to_value(), LayoutMode::Indirect).unwrap();
    let left = u32::from_le_bytes(ind[1..5].try_into().unwrap());
    ensure(left == 13, || format!("left size slot {left}"))?;
    let expected_plain: Vec<u8> = [&[1u8, 0][..], &1i64.to_le_bytes(), &[0], &2i64.to_le_bytes()].concat();
    ensure(t.pack::<Plain>().unwrap().as_bytes() == expected_plain, || "plain bytes".into())?;
    Ok("Node(Leaf 1, Leaf 2): 19 / 35 / 23 bytes, indirect left size 13".into())
}

fn cli(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_packed"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    let stdout = String::from_utf8_lossy(&out.stdout).into_owned();
    Ok((out.status.code().unwrap_or(-1), stdout))
}

fn check_9() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let (tree, inc, schema, small) = (path("tree.bin"), path("inc.bin"), path("tree.schema"), path("one.bin"));
    std::fs::write(Path::new(&schema), Tree::SCHEMA).map_err(|e| e.to_string())?;

    let step = |args: &[&str]| -> Result<String, String> {
        let (code, out) = cli(args)?;
        ensure(code == 0, || format!("`packed {}` exited {code}", args.join(" ")))?;
        Ok(out)
    };
    step(&["gen-tree", "--depth", "10", "--layout", "indirect", "--out", &tree])?;
    step(&["traverse", "increment", "--layout", "indirect", &tree, "--out", &inc])?;
    let validated = step(&["validate", "--schema", &schema, "--type", "Tree", "--layout", "indirect", &inc])?;
    ensure(validated.starts_with("ok"), || format!("validate printed {validated:?}"))?;
    let sum = step(&["traverse", "sum", "--layout", "indirect", &inc])?;
    let native = sum_native(&gen_symmetric_tree(10).unwrap()) + (1 << 10);
    ensure(sum.trim() == native.to_string(), || format!("sum printed {sum:?}, want {native}"))?;

    step(&["gen-tree", "--depth", "1", "--layout", "plain", "--out", &small])?;
    let dump = step(&["dump", "--schema", &schema, "--type", "Tree", "--layout", "plain", &small])?;
    let mut sections = dump.split("\n\n");
    let sexpr = sections.next().unwrap_or_default().trim();
    let lines = sections.next().unwrap_or_default().lines().filter(|l| !l.is_empty()).count();
    ensure(sexpr == "(Node (Leaf 0) (Leaf 1))", || format!("s-expression {sexpr:?}"))?;
    ensure(lines == 5, || format!("{lines} wire elements"))?;

    let bytes = std::fs::read(&small).map_err(|e| e.to_string())?;
    let (_, elems) = wire_elements(&Tree::schema(), "Tree", LayoutMode::Plain, &bytes).map_err(|e| e.to_string())?;
    let kinds: Vec<_> = elems
        .iter()
        .map(|e| match e.kind {
            WireKind::Tag { .. } => "tag",
            WireKind::Size(_) => "size",
            WireKind::Int(_) => "int",
        })
        .collect();
    ensure(kinds == ["tag", "tag", "int", "tag", "int"], || format!("kinds {kinds:?}"))?;
    Ok(format!("gen-tree 10 -> increment -> validate -> sum = {native}; dump shows 5 elements"))
}

fn main() {
    let checks: [(&str, fn() -> Check); 9] = [
        ("oracle round-trip", check_1),
        ("manual/auto buffer identity", check_2),
        ("traversal correctness", check_3),
        ("checked/raw equivalence", check_4),
        ("complexity separation", check_5),
        ("unpack cost", check_6),
        ("adversarial robustness", check_7),
        ("byte-exact goldens", check_8),
        ("cli end-to-end", check_9),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[{}] PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[{}] FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
