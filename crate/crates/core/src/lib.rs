//! Exact algebra of periodic infinite matrices over finite fields and ℚ.
//!
//! The crate is `no_std` and needs only `alloc`. IO, file formats and the
//! command-line front end live in the companion `locmat` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod arith;
pub mod autos;
pub mod fields;
pub mod groups;
pub mod homothety;
pub mod permatrix;
pub mod steinitz;

pub use arith::{factorize, is_prime};
pub use autos::{
    anti_to_iso, apply_psi, generator_set, inner, lift_field_auto, AntiIsomorphism, AutoError,
    AutomorphismDescriptor,
};
pub use fields::{tower_exists, Field, FieldElement, FieldError, RootTower, Value};
pub use groups::{
    commutator, commutator_pivot, decompose_gl, decompose_transvections, gl_membership,
    is_block_transvection, is_invertible, lemma1_rewrite, sl_membership, GroupError, GroupWord,
    SlMembership, Token,
};
pub use homothety::{
    CentralHomothety, Counterexample, HomothetyError, HomothetyReport, RelativeDeterminant, Violation,
};
pub use permatrix::{join_index, split_index, Block, BlockView, MatrixError, PeriodicMatrix};
pub use steinitz::{Exponent, SteinitzError, SteinitzNumber};
