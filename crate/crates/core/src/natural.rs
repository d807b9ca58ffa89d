use std::fmt::{Debug, Display};

use num_bigint::BigUint;
use num_integer::Integer;

/// Non-negative integer types the digit classifiers run on.
///
/// Machine words keep the large-N sweeps fast; [`BigUint`] covers
/// arbitrary-precision inputs.
pub trait Natural: Integer + Clone + From<u64> + Debug + Display + Send + Sync {
    /// Number of one bits in the binary expansion.
    fn popcount(&self) -> u64;
}

impl Natural for u64 {
    fn popcount(&self) -> u64 {
        u64::from(self.count_ones())
    }
}

impl Natural for u128 {
    fn popcount(&self) -> u64 {
        u64::from(self.count_ones())
    }
}

impl Natural for BigUint {
    fn popcount(&self) -> u64 {
        self.count_ones()
    }
}
