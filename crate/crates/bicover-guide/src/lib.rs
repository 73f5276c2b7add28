//! mdbook cannot run book snippets against crate dependencies, so each
//! chapter is mounted here as module documentation and `cargo test --doc`
//! does the work. One module per chapter keeps failures attributable.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/admissible-pairs.md")]
pub mod admissible_pairs {}

#[doc = include_str!("../../../book/src/lattices-and-groups.md")]
pub mod lattices_and_groups {}

#[doc = include_str!("../../../book/src/two-subgroups.md")]
pub mod two_subgroups {}

#[doc = include_str!("../../../book/src/covers.md")]
pub mod covers {}

#[doc = include_str!("../../../book/src/torus-maps.md")]
pub mod torus_maps {}

#[doc = include_str!("../../../book/src/lifting.md")]
pub mod lifting {}

#[doc = include_str!("../../../book/src/mapping-tori.md")]
pub mod mapping_tori {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../book/src/schema.md")]
pub mod schema {}
