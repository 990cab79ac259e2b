//! Type-level lists of obligations.
//!
//! A list is a right-nested tuple terminated by `()`: `(Tree, (i64, ()))` is
//! the list `[Tree, Int]`. Builders and cursors carry one of these as a type
//! parameter, so writing or reading the wrong thing is a compile error.
//! [`types!`](crate::types) spells them without the nesting.

pub trait TypeList {
    const LEN: usize;
}

impl TypeList for () {
    const LEN: usize = 0;
}

impl<H, T: TypeList> TypeList for (H, T) {
    const LEN: usize = 1 + T::LEN;
}

/// `types![A, B, C]` expands to `(A, (B, (C, ())))`.
#[macro_export]
macro_rules! types {
    () => { () };
    ($head:ty $(, $tail:ty)* $(,)?) => { ($head, $crate::types![$($tail),*]) };
}
