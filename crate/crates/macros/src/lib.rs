//! Code generation for packed ADTs.
//!
//! See `packed::packed_types!` for the generated surface; this crate only
//! emits it.

use packed_schema::{parse, AdtDecl, ConstructorDecl, FieldType, LayoutMode, Schema};
use proc_macro::TokenStream;
use proc_macro2::{Ident, Literal, Span, TokenStream as TokenStream2};
use quote::{format_ident, quote};

/// Declares native Rust types for a schema and generates their packed API
/// for all three layouts.
#[proc_macro]
pub fn packed_types(input: TokenStream) -> TokenStream {
    let src = input.to_string();
    match parse(&src) {
        Ok(schema) => generate(&schema).into(),
        Err(e) => {
            let msg = format!("invalid packed schema: {e}");
            quote!(::core::compile_error!(#msg);).into()
        }
    }
}

const LAYOUTS: [(LayoutMode, &str); 3] = [
    (LayoutMode::Plain, "Plain"),
    (LayoutMode::Indirect, "Indirect"),
    (LayoutMode::IndirectSkipLast, "IndirectSkipLast"),
];

fn snake(name: &str) -> String {
    let mut out = String::new();
    let mut prev_lower = false;
    for c in name.chars() {
        if c.is_ascii_uppercase() {
            if prev_lower {
                out.push('_');
            }
            out.push(c.to_ascii_lowercase());
            prev_lower = false;
        } else {
            out.push(c);
            prev_lower = c.is_ascii_lowercase() || c.is_ascii_digit();
        }
    }
    out
}

fn ident(name: &str) -> Ident {
    Ident::new(name, Span::call_site())
}

/// Type of a field as an obligation list element.
fn element(field: &FieldType) -> TokenStream2 {
    match field {
        FieldType::Int => quote!(i64),
        FieldType::Ref(name) => {
            let name = ident(name);
            quote!(#name)
        }
    }
}

/// Right-nested tuple of `items` terminated by `tail`.
fn nest(items: &[TokenStream2], tail: TokenStream2) -> TokenStream2 {
    items
        .iter()
        .rev()
        .fold(tail, |acc, item| quote!((#item, #acc)))
}

/// Builder obligations introduced by a constructor: its fields, no sizes.
fn build_fields(ctor: &ConstructorDecl, tail: TokenStream2) -> TokenStream2 {
    let items: Vec<_> = ctor.fields.iter().map(element).collect();
    nest(&items, tail)
}

/// Cursor obligations introduced by a constructor under `layout`.
fn read_fields(ctor: &ConstructorDecl, layout: LayoutMode, tail: TokenStream2) -> TokenStream2 {
    let n = ctor.fields.len();
    let mut items = Vec::new();
    for (i, field) in ctor.fields.iter().enumerate() {
        if layout.has_field_size(i, n) {
            items.push(quote!(::packed::FieldSize));
        }
        items.push(element(field));
    }
    nest(&items, tail)
}

fn field_vars(ctor: &ConstructorDecl) -> Vec<Ident> {
    (0..ctor.fields.len()).map(|i| format_ident!("f{}", i)).collect()
}

fn generate(schema: &Schema) -> TokenStream2 {
    let text = schema.to_string();
    let adts = schema.adts().iter().map(|adt| generate_adt(adt, &text));
    quote!(#(#adts)*)
}

fn generate_adt(adt: &AdtDecl, schema_text: &str) -> TokenStream2 {
    let name = ident(&adt.name);
    let name_str = &adt.name;
    let build_trait = format_ident!("{}Build", adt.name);
    let case_trait = format_ident!("{}Case", adt.name);
    let case_fn = format_ident!("case_{}", snake(&adt.name));
    let transform_fn = format_ident!("transform_{}", snake(&adt.name));
    let ctor_count = Literal::usize_suffixed(adt.constructors.len());

    let variants: Vec<Ident> = adt.constructors.iter().map(|c| ident(&c.name)).collect();
    let start_fns: Vec<Ident> = adt
        .constructors
        .iter()
        .map(|c| format_ident!("start_{}", snake(&c.name)))
        .collect();
    let write_fns: Vec<Ident> = adt
        .constructors
        .iter()
        .map(|c| format_ident!("write_{}", snake(&c.name)))
        .collect();
    let conts: Vec<Ident> = adt
        .constructors
        .iter()
        .map(|c| format_ident!("on_{}", snake(&c.name)))
        .collect();
    let assoc: Vec<Ident> = adt
        .constructors
        .iter()
        .map(|c| format_ident!("{}Fields", c.name))
        .collect();
    let tags: Vec<Literal> = (0..adt.constructors.len())
        .map(|i| Literal::u8_suffixed(i as u8))
        .collect();

    // Native enum.
    let variant_defs = adt.constructors.iter().zip(&variants).map(|(c, v)| {
        if c.fields.is_empty() {
            return quote!(#v);
        }
        let tys = c.fields.iter().map(|f| match f {
            FieldType::Int => quote!(i64),
            FieldType::Ref(n) => {
                let n = ident(n);
                quote!(::std::boxed::Box<#n>)
            }
        });
        quote!(#v(#(#tys),*))
    });

    let patterns: Vec<TokenStream2> = adt
        .constructors
        .iter()
        .zip(&variants)
        .map(|(c, v)| {
            let vars = field_vars(c);
            if vars.is_empty() {
                quote!(Self::#v)
            } else {
                quote!(Self::#v(#(#vars),*))
            }
        })
        .collect();

    // Adt: conversions to and from the dynamic representation.
    let to_value_arms = adt.constructors.iter().zip(&patterns).zip(&tags).map(|((c, pat), tag)| {
        let fields = c.fields.iter().zip(field_vars(c)).map(|(f, var)| match f {
            FieldType::Int => quote!(::packed::schema::ValueTree::Int(*#var)),
            FieldType::Ref(n) => {
                let n = ident(n);
                quote!(<#n as ::packed::schema::Adt>::to_value(&**#var))
            }
        });
        quote!(#pat => ::packed::schema::ValueTree::ctor(#name_str, #tag, ::std::vec![#(#fields),*]))
    });
    let from_value_arms = adt.constructors.iter().zip(&variants).zip(&tags).map(|((c, v), tag)| {
        let vars = field_vars(c);
        let conv = c.fields.iter().zip(&vars).map(|(f, var)| match f {
            FieldType::Int => quote!(#var.as_int()?),
            FieldType::Ref(n) => {
                let n = ident(n);
                quote!(::std::boxed::Box::new(<#n as ::packed::schema::Adt>::from_value(#var)?))
            }
        });
        let value = if vars.is_empty() {
            quote!(Self::#v)
        } else {
            quote!(Self::#v(#(#conv),*))
        };
        quote!((#tag, [#(#vars),*]) => ::std::option::Option::Some(#value))
    });

    // Pack: dispatch to the write_* convenience functions.
    let pack_arms = adt.constructors.iter().zip(&patterns).zip(&write_fns).map(|((c, pat), wf)| {
        let args = c.fields.iter().zip(field_vars(c)).map(|(f, var)| match f {
            FieldType::Int => quote!(*#var),
            FieldType::Ref(_) => quote!(#var),
        });
        quote!(#pat => #build_trait::#wf(out #(, #args)*))
    });

    // Builder trait.
    let build_sigs = adt.constructors.iter().zip(&start_fns).zip(&write_fns).map(|((c, sf), wf)| {
        let fields = build_fields(c, quote!(P));
        let params = c.fields.iter().zip(field_vars(c)).map(|(f, var)| match f {
            FieldType::Int => quote!(#var: i64),
            FieldType::Ref(n) => {
                let n = ident(n);
                quote!(#var: &#n)
            }
        });
        let start_doc = format!("Writes the `{}` tag; the fields become the next obligations.", c.name);
        let write_doc = format!("Writes a complete `{}` value.", c.name);
        quote! {
            #[doc = #start_doc]
            fn #sf(self) -> ::packed::Needs<L, #fields, R>;
            #[doc = #write_doc]
            fn #wf(self #(, #params)*) -> ::packed::Needs<L, P, R>;
        }
    });
    let build_impls = adt
        .constructors
        .iter()
        .zip(&start_fns)
        .zip(&write_fns)
        .zip(&tags)
        .map(|(((c, sf), wf), tag)| {
            let fields = build_fields(c, quote!(P));
            let n = Literal::usize_suffixed(c.fields.len());
            let vars = field_vars(c);
            let params = c.fields.iter().zip(&vars).map(|(f, var)| match f {
                FieldType::Int => quote!(#var: i64),
                FieldType::Ref(n) => {
                    let n = ident(n);
                    quote!(#var: &#n)
                }
            });
            let writes = c.fields.iter().zip(&vars).map(|(f, var)| match f {
                FieldType::Int => quote!(.write_int(#var)),
                FieldType::Ref(_) => quote!(.write(#var)),
            });
            quote! {
                #[inline]
                fn #sf(self) -> ::packed::Needs<L, #fields, R> {
                    self.__start_constructor::<#fields>(#tag, #n)
                }
                #[inline]
                fn #wf(self #(, #params)*) -> ::packed::Needs<L, P, R> {
                    #build_trait::#sf(self) #(#writes)*
                }
            }
        });

    // Case trait. `layout` is `L` in the trait and the marker in its impls.
    let case_params = |layout: &TokenStream2| -> Vec<TokenStream2> {
        conts
            .iter()
            .zip(&assoc)
            .map(|(k, a)| {
                quote! {
                    #k: impl ::core::ops::FnOnce(::packed::Cursor<'a, #layout, Self::#a>)
                        -> ::core::result::Result<(A, ::packed::Cursor<'a, #layout, Rest>), E>
                }
            })
            .collect()
    };
    let transform_params = |layout: &TokenStream2| -> Vec<TokenStream2> {
        adt.constructors
            .iter()
            .zip(&conts)
            .zip(&assoc)
            .map(|((c, k), a)| {
                let out_fields = build_fields(c, quote!(P));
                quote! {
                    #k: impl ::core::ops::FnOnce(
                        ::packed::Cursor<'a, #layout, Self::#a>,
                        ::packed::Needs<LO, #out_fields, R>,
                    ) -> ::core::result::Result<(::packed::Needs<LO, P, R>, ::packed::Cursor<'a, #layout, Rest>), E>
                }
            })
            .collect()
    };

    let case_doc = format!(
        "Reads a `{}` tag and continues with the matching constructor's continuation, \
         whose cursor starts at that constructor's fields.",
        adt.name
    );
    let transform_doc = format!(
        "Like `{case_fn}`, and also starts the same constructor on `out`."
    );

    let layout_impls = LAYOUTS.iter().map(|&(mode, marker)| {
        let marker = ident(marker);
        let marker_path = quote!(::packed::#marker);
        let case_params = case_params(&marker_path);
        let transform_params = transform_params(&marker_path);
        let assoc_defs = adt.constructors.iter().zip(&assoc).map(|(c, a)| {
            let fields = read_fields(c, mode, quote!(Rest));
            quote!(type #a = #fields;)
        });
        let unpack_conts = adt.constructors.iter().zip(&variants).map(|(c, v)| {
            let n = c.fields.len();
            let vars = field_vars(c);
            let reads = c.fields.iter().zip(&vars).enumerate().map(|(i, (_, var))| {
                if mode.has_field_size(i, n) {
                    quote! {
                        let (size, c) = c.read_field_size()?;
                        let start = c.offset();
                        let (#var, c) = c.unpack()?;
                        let c = c.__check_extent(start, size)?;
                    }
                } else {
                    quote!(let (#var, c) = c.unpack()?;)
                }
            });
            let built = c.fields.iter().zip(&vars).map(|(f, var)| match f {
                FieldType::Int => quote!(#var),
                FieldType::Ref(_) => quote!(::std::boxed::Box::new(#var)),
            });
            let value = if vars.is_empty() {
                quote!(Self::#v)
            } else {
                quote!(Self::#v(#(#built),*))
            };
            quote! {
                |c| {
                    #(#reads)*
                    ::core::result::Result::Ok((#value, c))
                }
            }
        });
        quote! {
            impl<'a, Rest> #case_trait<'a, ::packed::#marker, Rest>
                for ::packed::Cursor<'a, ::packed::#marker, (#name, Rest)>
            {
                #(#assoc_defs)*

                #[inline]
                fn #case_fn<A, E>(self, #(#case_params),*)
                    -> ::core::result::Result<(A, ::packed::Cursor<'a, ::packed::#marker, Rest>), E>
                where
                    E: ::core::convert::From<::packed::DecodeError>,
                {
                    let (tag, c) = self.__read_tag(#ctor_count)?;
                    match tag {
                        #(#tags => #conts(c.__retype()),)*
                        _ => ::core::unreachable!("tag range checked on read"),
                    }
                }

                #[inline]
                fn #transform_fn<LO, P, R, E>(self, out: ::packed::Needs<LO, (#name, P), R>, #(#transform_params),*)
                    -> ::core::result::Result<(::packed::Needs<LO, P, R>, ::packed::Cursor<'a, ::packed::#marker, Rest>), E>
                where
                    LO: ::packed::Layout,
                    E: ::core::convert::From<::packed::DecodeError>,
                {
                    let (tag, c) = self.__read_tag(#ctor_count)?;
                    match tag {
                        #(#tags => #conts(c.__retype(), #build_trait::#start_fns(out)),)*
                        _ => ::core::unreachable!("tag range checked on read"),
                    }
                }
            }

            impl ::packed::Unpack<::packed::#marker> for #name {
                fn unpack_from<'a>(
                    c: ::packed::Cursor<'a, ::packed::#marker, (Self, ())>,
                ) -> ::core::result::Result<(Self, ::packed::Cursor<'a, ::packed::#marker, ()>), ::packed::DecodeError> {
                    #case_trait::#case_fn(c #(, #unpack_conts)*)
                }
            }
        }
    });

    let trait_case_params = case_params(&quote!(L));
    let trait_transform_params = transform_params(&quote!(L));

    let enum_doc = format!("Native form of the packed type `{}`.", adt.name);

    quote! {
        #[doc = #enum_doc]
        #[derive(Debug, Clone, PartialEq, Eq, Hash)]
        pub enum #name {
            #(#variant_defs),*
        }

        impl ::packed::schema::Adt for #name {
            const NAME: &'static str = #name_str;
            const SCHEMA: &'static str = #schema_text;

            fn to_value(&self) -> ::packed::schema::ValueTree {
                match self {
                    #(#to_value_arms,)*
                }
            }

            fn from_value(value: &::packed::schema::ValueTree) -> ::std::option::Option<Self> {
                match value {
                    ::packed::schema::ValueTree::Ctor { adt, ordinal, fields } if &**adt == #name_str => {
                        match (*ordinal, fields.as_slice()) {
                            #(#from_value_arms,)*
                            _ => ::std::option::Option::None,
                        }
                    }
                    _ => ::std::option::Option::None,
                }
            }
        }

        impl ::packed::Pack for #name {
            fn pack_into<L: ::packed::Layout>(
                &self,
                out: ::packed::Needs<L, (Self, ()), ::packed::Scope>,
            ) -> ::packed::Needs<L, (), ::packed::Scope> {
                match self {
                    #(#pack_arms,)*
                }
            }
        }

        /// Start and write functions for building this type in a `Needs` buffer.
        pub trait #build_trait<L, P, R>: Sized {
            #(#build_sigs)*
        }

        impl<L: ::packed::Layout, P, R> #build_trait<L, P, R> for ::packed::Needs<L, (#name, P), R> {
            #(#build_impls)*
        }

        /// Pattern matching on a packed value. Implemented once per layout; the
        /// associated types are each constructor's fields, including field
        /// sizes where the layout has them, followed by `Rest`.
        pub trait #case_trait<'a, L: ::packed::Layout, Rest>: Sized {
            #(type #assoc;)*

            #[doc = #case_doc]
            fn #case_fn<A, E>(self, #(#trait_case_params),*)
                -> ::core::result::Result<(A, ::packed::Cursor<'a, L, Rest>), E>
            where
                E: ::core::convert::From<::packed::DecodeError>;

            #[doc = #transform_doc]
            fn #transform_fn<LO, P, R, E>(self, out: ::packed::Needs<LO, (#name, P), R>, #(#trait_transform_params),*)
                -> ::core::result::Result<(::packed::Needs<LO, P, R>, ::packed::Cursor<'a, L, Rest>), E>
            where
                LO: ::packed::Layout,
                E: ::core::convert::From<::packed::DecodeError>;
        }

        #(#layout_impls)*
    }
}
