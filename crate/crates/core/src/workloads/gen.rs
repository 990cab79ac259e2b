use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ast::eval_native;
use super::{Ast, Tree};

/// Largest depth accepted by the symmetric generators.
pub const MAX_DEPTH: u32 = 30;

/// Payload range of randomly generated leaves and values.
pub const VALUE_RANGE: RangeInclusive<i64> = -1000..=1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("depth {0} exceeds the maximum of 30")]
pub struct DepthTooLarge(pub u32);

/// Full binary tree of the given depth (`2^depth` leaves). Leaves carry
/// their left-to-right index.
pub fn gen_symmetric_tree(depth: u32) -> Result<Tree, DepthTooLarge> {
    fn go(depth: u32, next: &mut i64) -> Tree {
        if depth == 0 {
            let leaf = Tree::Leaf(*next);
            *next += 1;
            leaf
        } else {
            let left = go(depth - 1, next);
            let right = go(depth - 1, next);
            Tree::node(left, right)
        }
    }
    if depth > MAX_DEPTH {
        return Err(DepthTooLarge(depth));
    }
    Ok(go(depth, &mut 0))
}

/// Full expression tree of the given depth. Operators cycle through
/// `+ - * /` by level; values are `1..=9`. A division whose right operand
/// evaluates to zero is replaced by an addition so the result is total.
pub fn gen_symmetric_ast(depth: u32) -> Result<Ast, DepthTooLarge> {
    fn go(depth: u32, next: &mut i64) -> (Ast, i64) {
        if depth == 0 {
            let v = *next % 9 + 1;
            *next += 1;
            return (Ast::Value(v), v);
        }
        let (l, lv) = go(depth - 1, next);
        let (r, rv) = go(depth - 1, next);
        match depth % 4 {
            1 => (Ast::add(l, r), lv.wrapping_add(rv)),
            2 => (Ast::sub(l, r), lv.wrapping_sub(rv)),
            3 => (Ast::mul(l, r), lv.wrapping_mul(rv)),
            _ if rv != 0 => (Ast::div(l, r), lv.wrapping_div(rv)),
            _ => (Ast::add(l, r), lv.wrapping_add(rv)),
        }
    }
    if depth > MAX_DEPTH {
        return Err(DepthTooLarge(depth));
    }
    Ok(go(depth, &mut 0).0)
}

/// Random tree, deterministic in `seed`. Each node is a leaf or an inner
/// node with equal probability; nodes at `max_depth` are always leaves.
pub fn gen_random_tree(seed: u64, max_depth: u32) -> Tree {
    fn go(rng: &mut ChaCha8Rng, depth: u32) -> Tree {
        if depth == 0 || rng.gen_bool(0.5) {
            Tree::Leaf(rng.gen_range(VALUE_RANGE))
        } else {
            let left = go(rng, depth - 1);
            let right = go(rng, depth - 1);
            Tree::node(left, right)
        }
    }
    go(&mut ChaCha8Rng::seed_from_u64(seed), max_depth)
}

/// Random expression, deterministic in `seed`. Constructors are drawn
/// uniformly (forced to `Value` at `max_depth`); right operands of `Div`
/// are redrawn until they evaluate to something non-zero.
pub fn gen_random_ast(seed: u64, max_depth: u32) -> Ast {
    fn go(rng: &mut ChaCha8Rng, depth: u32) -> Ast {
        let ctor = if depth == 0 { 0 } else { rng.gen_range(0..5) };
        if ctor == 0 {
            return Ast::Value(rng.gen_range(VALUE_RANGE));
        }
        let l = go(rng, depth - 1);
        match ctor {
            1 => Ast::add(l, go(rng, depth - 1)),
            2 => Ast::sub(l, go(rng, depth - 1)),
            3 => Ast::mul(l, go(rng, depth - 1)),
            _ => loop {
                let r = go(rng, depth - 1);
                if matches!(eval_native(&r), Ok(v) if v != 0) {
                    break Ast::div(l, r);
                }
            },
        }
    }
    go(&mut ChaCha8Rng::seed_from_u64(seed), max_depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::workloads::tree::{rightmost_native, sum_native};

    fn leaves(t: &Tree) -> usize {
        match t {
            Tree::Leaf(_) => 1,
            Tree::Node(l, r) => leaves(l) + leaves(r),
        }
    }

    #[test]
    fn symmetric_tree_examples() {
        assert_eq!(gen_symmetric_tree(0), Ok(Tree::Leaf(0)));
        assert_eq!(
            gen_symmetric_tree(1),
            Ok(Tree::node(Tree::Leaf(0), Tree::Leaf(1)))
        );
        let t5 = gen_symmetric_tree(5).unwrap();
        assert_eq!(leaves(&t5), 32);
        assert_eq!(sum_native(&t5), 496);
        assert_eq!(rightmost_native(&t5), 31);
        assert_eq!(gen_symmetric_tree(31), Err(DepthTooLarge(31)));
    }

    #[test]
    fn random_generators_are_deterministic() {
        for seed in 0..20 {
            assert_eq!(gen_random_tree(seed, 8), gen_random_tree(seed, 8));
            assert_eq!(gen_random_ast(seed, 8), gen_random_ast(seed, 8));
        }
        assert!(matches!(gen_random_tree(7, 0), Tree::Leaf(_)));
        assert!(matches!(gen_random_ast(7, 0), Ast::Value(_)));
    }

    #[test]
    fn random_samples_cover_every_constructor() {
        fn tree_ctors(t: &Tree, seen: &mut [bool; 2]) {
            match t {
                Tree::Leaf(_) => seen[0] = true,
                Tree::Node(l, r) => {
                    seen[1] = true;
                    tree_ctors(l, seen);
                    tree_ctors(r, seen);
                }
            }
        }
        fn ast_ctors(a: &Ast, seen: &mut [bool; 5]) {
            let (i, kids) = match a {
                Ast::Value(_) => (0, None),
                Ast::Add(l, r) => (1, Some((l, r))),
                Ast::Sub(l, r) => (2, Some((l, r))),
                Ast::Mul(l, r) => (3, Some((l, r))),
                Ast::Div(l, r) => (4, Some((l, r))),
            };
            seen[i] = true;
            if let Some((l, r)) = kids {
                ast_ctors(l, seen);
                ast_ctors(r, seen);
            }
        }
        let mut trees = [false; 2];
        let mut asts = [false; 5];
        for seed in 0..1000 {
            tree_ctors(&gen_random_tree(seed, 8), &mut trees);
            ast_ctors(&gen_random_ast(seed, 8), &mut asts);
        }
        assert_eq!(trees, [true; 2]);
        assert_eq!(asts, [true; 5]);
    }

    #[test]
    fn random_asts_evaluate() {
        for seed in 0..200 {
            assert!(eval_native(&gen_random_ast(seed, 6)).is_ok());
        }
    }

    #[test]
    fn symmetric_ast_evaluates() {
        for depth in 0..12 {
            assert!(eval_native(&gen_symmetric_ast(depth).unwrap()).is_ok());
        }
    }
}
