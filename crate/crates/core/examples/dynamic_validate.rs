//! Work from a schema given as text: pack a dynamic value, validate
//! untrusted bytes and print an annotated listing.
//!
//!     cargo run --example dynamic_validate

use packed::schema::{dynamic_pack, validate_buffer, wire_elements, Schema, ValueTree};
use packed::LayoutMode;

fn main() {
    let schema: Schema = "data Tree = Leaf Int | Node Tree Tree".parse().unwrap();
    let leaf = |v| ValueTree::ctor("Tree", 0, vec![ValueTree::Int(v)]);
    let value = ValueTree::ctor("Tree", 1, vec![leaf(1), leaf(2)]);

    let bytes = dynamic_pack(&schema, &value, LayoutMode::Indirect).unwrap();
    let (decoded, elements) = wire_elements(&schema, "Tree", LayoutMode::Indirect, &bytes).unwrap();
    println!("{}", decoded.display(&schema));
    for e in &elements {
        println!("{}", e.render(&bytes));
    }

    let mut corrupt = bytes.clone();
    corrupt[1] = 12;
    match validate_buffer(&schema, "Tree", LayoutMode::Indirect, &corrupt) {
        Ok(_) => unreachable!("size slot was changed"),
        Err(e) => println!("corrupted copy: {e}"),
    }
    let err = validate_buffer(&schema, "Tree", LayoutMode::Plain, &bytes).unwrap_err();
    println!("under the wrong layout: {err}");
}
