//! Learning broadcast protocols from labeled feasibility samples.

pub mod bp;
pub mod sample;
pub mod charset;
pub mod inference;
pub mod reductions;
pub mod io;
