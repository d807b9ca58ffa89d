//! Digit classifiers checked against residues computed by the convolution
//! engine.

use crate::classifier::{classify_div5, classify_mod3, classify_mod8};
use crate::engine::MotzkinEngine;
use crate::error::{MotzkinError, Result};

/// Moduli with a digit characterization.
pub const SUPPORTED_MODULI: [u64; 5] = [2, 4, 8, 3, 5];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verification {
    pub modulus: u64,
    pub horizon: u64,
    pub checked: u64,
    pub mismatches: u64,
    pub first_mismatch: Option<u64>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

fn check_modulus(modulus: u64) -> Result<()> {
    if SUPPORTED_MODULI.contains(&modulus) {
        Ok(())
    } else {
        Err(MotzkinError::Domain(format!(
            "no digit characterization for modulus {modulus}; expected one of 2, 4, 8, 3, 5"
        )))
    }
}

/// Whether the classifier's claim about `M_n mod modulus` is consistent
/// with the true residue.
pub fn classifier_agrees(modulus: u64, n: u64, residue: u64) -> Result<bool> {
    check_modulus(modulus)?;
    let ok = match modulus {
        2 | 4 | 8 => {
            let c = classify_mod8(&n);
            match c.kind.residue() {
                None => residue % 2 == 1,
                Some(r) => u64::from(r) % modulus == residue,
            }
        }
        3 => u64::from(classify_mod3(&n).value()) == residue,
        5 => classify_div5(&n).is_divisible() == (residue == 0),
        _ => unreachable!(),
    };
    Ok(ok)
}

pub fn verify_classifier(
    engine: &MotzkinEngine,
    modulus: u64,
    horizon: u64,
) -> Result<Verification> {
    check_modulus(modulus)?;
    let stream = engine.mod_stream(modulus, horizon)?;
    let mut mismatches = 0u64;
    let mut first_mismatch = None;
    for (n, &res) in stream.values().iter().enumerate() {
        let n = n as u64;
        if !classifier_agrees(modulus, n, res)? {
            mismatches += 1;
            first_mismatch.get_or_insert(n);
        }
    }
    Ok(Verification {
        modulus,
        horizon,
        checked: stream.limit(),
        mismatches,
        first_mismatch,
    })
}
