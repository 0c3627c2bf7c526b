//! Exact decision and verification engine for the quadratic equations
//! `Q_δ(z₁,z₂) = v·R_ε^ϑ·v⁻¹·R_ε` in the free group of rank two.
//!
//! The layers build on each other: [`fgword`] words, [`surface`] quotient
//! groups, [`grind`] group rings, [`quot_q`] the quotient `Q`, [`orbits`]
//! group actions on π, [`derived`] the derived equations and their
//! deciders, [`wicks`] a brute-force Wicks-form oracle, and [`classify`]
//! the top-level classifier used by the command-line tool in [`cli`].

pub mod classify;
pub mod cli;
pub mod derived;
pub mod error;
pub mod fgword;
pub mod grind;
pub mod orbits;
pub mod quot_q;
pub mod surface;
pub mod wicks;

pub use error::{Error, Result};
pub use fgword::{parse_word, BasisKind, BasisTag, EquationSpec, Frame, Gen, Sign, SolutionClass, Word};
pub use grind::{Domain, RingElement};
pub use quot_q::QElement;
pub use surface::{project, PiElement};
