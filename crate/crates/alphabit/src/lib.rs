//! Desk-scale numerics workbench for universal subspace error correction.
//!
//! The crate is organised around a single idea: a channel can transmit a
//! large Hilbert space "as an α-bit" when every subspace of dimension at most
//! `d^α + 1` can be decoded, which happens exactly when the complementary
//! channel is forgetful at the matching reference dimension. The modules map
//! onto the layers of that story:
//!
//! * [`qcore`]: dense complex linear algebra, labelled multipartite states,
//!   entropies, and seeded Haar/Clifford sampling.
//! * [`channels`]: Kraus channels, Stinespring dilations, complementary
//!   channels, and the erasure/amplitude-damping families.
//! * [`entropix`]: entropy reports, α-bit capacity formulas, phase
//!   classification, and capacity curves.
//! * [`decouple`]: k-diamond-norm lower bounds, random codes, decoupling
//!   Monte Carlo with exact Haar oracles, Petz decoders, and the
//!   duality checks between decodability and forgetfulness.
//! * [`protosim`]: the (1+α)·log d classical-transmission protocol and the
//!   random-subspace keep/discard demonstration.
//! * [`resource`]: exact rational resource calculus over the
//!   {zero-bit, X-bit, Y-bit} basis.

#![forbid(unsafe_code)]

pub mod channels;
pub mod decouple;
pub mod entropix;
mod error;
pub mod protosim;
pub mod qcore;
pub mod resource;

pub use error::{Error, Result};
