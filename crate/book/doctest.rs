// mdbook cannot run listings that depend on workspace crates, so every
// chapter is pulled in as the docs of an empty module and `cargo test --doc`
// runs the code blocks. One module per chapter keeps failures traceable.

#[doc = include_str!("src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("src/exact.md")]
pub mod exact {}
#[doc = include_str!("src/weight.md")]
pub mod weight {}
#[doc = include_str!("src/polynomials.md")]
pub mod polynomials {}
#[doc = include_str!("src/hypergeometric.md")]
pub mod hypergeometric {}
#[doc = include_str!("src/operators.md")]
pub mod operators {}
#[doc = include_str!("src/verification.md")]
pub mod verification {}
