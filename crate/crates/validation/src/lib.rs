//! Acceptance checks for the workspace live in `tests/acceptance.rs`; this
//! crate has no library code. It sorts after the other packages so that
//! `cargo test --workspace` reaches it last.
