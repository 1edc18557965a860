//! Compiles and runs the code blocks of the guide in `book/` as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/labels.md")]
pub mod labels {}

#[doc = include_str!("../../../book/src/kernel.md")]
pub mod kernel {}

#[doc = include_str!("../../../book/src/scripts.md")]
pub mod scripts {}

#[doc = include_str!("../../../book/src/tactics.md")]
pub mod tactics {}

#[doc = include_str!("../../../book/src/proofs.md")]
pub mod proofs {}

#[doc = include_str!("../../../book/src/protocol.md")]
pub mod protocol {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
