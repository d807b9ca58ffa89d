//! Motzkin numbers modulo 2, 4, 8, 3 and 5.
//!
//! [`engine`] produces `M_n` exactly and as residue streams, [`classifier`]
//! decides the residue classes from the digits of `n` alone, and [`density`]
//! computes the limiting densities of those classes and checks them against
//! finite counts. [`cli`] wires the three together for the `motzkin` binary.

pub mod classifier;
pub mod cli;
pub mod density;
pub mod engine;
pub mod error;
pub mod natural;
pub mod verify;

pub use classifier::{
    classifier_specs, classify_div5, classify_mod3, classify_mod8, factor_out_base, is_in_set,
    is_t01, Div5Form, EvenWitness, Mod3Value, Mod8Classification, Mod8Kind, SetSpec,
    ValuationDecomposition, Witness,
};
pub use density::{
    closed_density_s, closed_density_sprime, count_set_exact, count_t01_upto, density_table,
    empirical_density, empirical_residue_distribution, ClassSelector, DensityReport,
    ExactRational,
};
pub use engine::{Ceilings, CrossValidation, Holonomic, MotzkinEngine, ResidueStream};
pub use error::{MotzkinError, Result};
pub use natural::Natural;
