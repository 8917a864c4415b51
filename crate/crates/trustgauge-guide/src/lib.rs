//! Compiles and runs every Rust snippet in the book as a doc-test, one
//! module per chapter so a failure points at the chapter it came from.
//! mdbook renders the same files; this crate keeps them honest under
//! `cargo test --workspace`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/trust-games.md")]
pub mod trust_games {}

#[doc = include_str!("../../../book/src/many-cycles.md")]
pub mod many_cycles {}

#[doc = include_str!("../../../book/src/trust-score.md")]
pub mod trust_score {}

#[doc = include_str!("../../../book/src/temporality.md")]
pub mod temporality {}

#[doc = include_str!("../../../book/src/fair-trade.md")]
pub mod fair_trade {}

#[doc = include_str!("../../../book/src/scenarios-cli.md")]
pub mod scenarios_cli {}
