//! Binary trees and arithmetic expressions, the two packed types used for
//! correctness tests and benchmarks.
//!
//! Every operation comes in several flavours: native (on boxed Rust values),
//! packed through the typed cursor, packed through [`RawCursor`](crate::RawCursor),
//! and "unpack, then process" baselines.

pub mod ast;
mod gen;
pub mod tree;

pub use gen::{
    gen_random_ast, gen_random_tree, gen_symmetric_ast, gen_symmetric_tree, DepthTooLarge,
    MAX_DEPTH, VALUE_RANGE,
};

crate::packed_types! {
    data Tree = Leaf Int | Node Tree Tree
}

crate::packed_types! {
    data Ast = Value Int | Add Ast Ast | Sub Ast Ast | Mul Ast Ast | Div Ast Ast
}

impl Tree {
    pub fn node(left: Tree, right: Tree) -> Tree {
        Tree::Node(Box::new(left), Box::new(right))
    }
}

#[allow(clippy::should_implement_trait)]
impl Ast {
    pub fn add(l: Ast, r: Ast) -> Ast {
        Ast::Add(Box::new(l), Box::new(r))
    }

    pub fn sub(l: Ast, r: Ast) -> Ast {
        Ast::Sub(Box::new(l), Box::new(r))
    }

    pub fn mul(l: Ast, r: Ast) -> Ast {
        Ast::Mul(Box::new(l), Box::new(r))
    }

    pub fn div(l: Ast, r: Ast) -> Ast {
        Ast::Div(Box::new(l), Box::new(r))
    }
}
