//! Farey sequences and special polygons for the congruence subgroups Γ0(N).
//!
//! The crate builds Farey sequences whose side pairings generate Γ0(N):
//! a general insertion algorithm for any level ([`cllt`]), an optimized
//! construction for prime-power levels ([`dklt`]), the corresponding
//! generator matrices ([`generators`]), and independent checks of every
//! structural claim ([`verifier`], [`collar`]).

pub mod arith;
pub mod cllt;
pub mod collar;
pub mod dklt;
pub mod error;
pub mod farey;
pub mod gamma0;
pub mod generators;
pub mod verifier;

pub use error::{Error, Result};
pub use farey::{farey_order_sequence, mediant, numerators_from_denominators, FareyFraction, FareySequence};
pub use gamma0::{
    classify_side, cusp_class, cusp_count, cusp_equivalent, cusp_width, index_gamma0,
    label_all_sides, sides_paired, CuspClass, CuspKind, Level, SideClass, SideLabel,
};
pub use generators::{generator_set, pairing_matrix, Generator, GeneratorKind, UnimodularMatrix};
pub use cllt::{run_cllt, Seed};
pub use collar::{DeltaTriangle, Gap};
pub use dklt::{run_dklt, DkltRun};
pub use verifier::{verify_appendix, verify_bounds, verify_sequence, width_oracle, Check, VerificationReport};
