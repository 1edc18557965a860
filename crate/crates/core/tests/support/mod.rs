//! Test-only oracles and generators shared by the integration tests.
#![allow(dead_code)]

pub mod criteria;
pub mod debruijn;
pub mod gen;
pub mod kinding;
pub mod labels;
pub mod lemmas;
pub mod proofs;
