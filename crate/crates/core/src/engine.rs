//! Motzkin number engines.
//!
//! Three independent routes produce the sequence:
//!
//! - [`MotzkinEngine::exact`] evaluates the defining sum
//!   `M_n = sum_k binom(n, 2k) C_k` directly and acts as the oracle;
//! - [`MotzkinEngine::exact_stream`] runs the three-term holonomic recurrence
//!   `(n + 2) M_n = (2n + 1) M_{n-1} + (3n - 3) M_{n-2}` with exact division;
//! - [`MotzkinEngine::mod_stream`] runs the division-free convolution
//!   `M_{n+1} = M_n + sum_{k<n} M_k M_{n-1-k}` with every step reduced mod m.
//!
//! Because `n + 2` is not always a unit mod m, the holonomic recurrence is
//! only ever evaluated over the integers.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{MotzkinError, Result};

pub const DEFAULT_CEILING: u64 = 100_000;

/// Environment variable overriding the ceiling for the exact engines.
pub const EXACT_CEILING_ENV: &str = "MOTZKIN_EXACT_CEILING";
/// Environment variable overriding the ceiling for the modular engine.
pub const MODULAR_CEILING_ENV: &str = "MOTZKIN_MOD_CEILING";

/// Upper bounds on the number of terms each engine will produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ceilings {
    /// Largest index accepted by the big-integer engines.
    pub exact: u64,
    /// Largest stream length accepted by the modular engine.
    pub modular: u64,
}

impl Default for Ceilings {
    fn default() -> Self {
        Self {
            exact: DEFAULT_CEILING,
            modular: DEFAULT_CEILING,
        }
    }
}

impl Ceilings {
    /// Defaults, overridden by [`EXACT_CEILING_ENV`] and
    /// [`MODULAR_CEILING_ENV`] when they hold a valid integer.
    pub fn from_env() -> Self {
        let read = |key: &str, fallback: u64| {
            std::env::var(key)
                .ok()
                .and_then(|v| v.trim().parse::<u64>().ok())
                .unwrap_or(fallback)
        };
        let d = Self::default();
        Self {
            exact: read(EXACT_CEILING_ENV, d.exact),
            modular: read(MODULAR_CEILING_ENV, d.modular),
        }
    }
}

/// Residues `M_0 mod m, ..., M_{N-1} mod m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueStream {
    modulus: u64,
    values: Vec<u64>,
}

impl ResidueStream {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of terms, i.e. the exclusive upper index.
    pub fn limit(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn get(&self, n: u64) -> Option<u64> {
        self.values.get(usize::try_from(n).ok()?).copied()
    }

    pub fn into_values(self) -> Vec<u64> {
        self.values
    }
}

/// Outcome of comparing the modular engine against the reduced exact
/// stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossValidation {
    pub modulus: u64,
    pub limit: u64,
    pub first_mismatch: Option<u64>,
}

impl CrossValidation {
    pub fn is_consistent(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

impl fmt::Display for CrossValidation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.first_mismatch {
            None => write!(f, "consistent (m = {}, N = {})", self.modulus, self.limit),
            Some(n) => write!(
                f,
                "mismatch at n = {} (m = {}, N = {})",
                n, self.modulus, self.limit
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MotzkinEngine {
    ceilings: Ceilings,
}

impl MotzkinEngine {
    pub fn new(ceilings: Ceilings) -> Self {
        Self { ceilings }
    }

    pub fn from_env() -> Self {
        Self::new(Ceilings::from_env())
    }

    pub fn ceilings(&self) -> Ceilings {
        self.ceilings
    }

    /// `M_n` from the defining sum. The Catalan factor is advanced with
    /// `C_{k+1} = C_k * 2(2k + 1) / (k + 2)`, and the binomial with
    /// `binom(n, 2k + 2) = binom(n, 2k) (n - 2k)(n - 2k - 1) / ((2k + 1)(2k + 2))`;
    /// both divisions are exact.
    pub fn exact(&self, n: u64) -> Result<BigUint> {
        if n > self.ceilings.exact {
            return Err(MotzkinError::ResourceLimit {
                engine: "defining sum",
                requested: n,
                ceiling: self.ceilings.exact,
            });
        }
        let mut total = BigUint::zero();
        let mut binom = BigUint::one();
        let mut catalan = BigUint::one();
        let mut k = 0u64;
        loop {
            total += &binom * &catalan;
            if 2 * k + 2 > n {
                break;
            }
            binom *= (n - 2 * k) * (n - 2 * k - 1);
            binom /= (2 * k + 1) * (2 * k + 2);
            catalan *= 2 * (2 * k + 1);
            catalan /= k + 2;
            k += 1;
        }
        Ok(total)
    }

    /// `M_0, ..., M_{len-1}` from the holonomic recurrence.
    pub fn exact_stream(&self, len: u64) -> Result<Vec<BigUint>> {
        if len == 0 {
            return Err(MotzkinError::Domain("stream length must be at least 1".into()));
        }
        if len > self.ceilings.exact {
            return Err(MotzkinError::ResourceLimit {
                engine: "holonomic recurrence",
                requested: len,
                ceiling: self.ceilings.exact,
            });
        }
        Holonomic::new().take(len as usize).collect()
    }

    /// `M_n mod m` for `n < len` from the holonomic recurrence, keeping only
    /// the two previous exact terms in memory.
    pub fn exact_residues(&self, modulus: u64, len: u64) -> Result<ResidueStream> {
        if modulus < 2 {
            return Err(MotzkinError::Domain(format!(
                "modulus must be at least 2, got {modulus}"
            )));
        }
        if len == 0 {
            return Err(MotzkinError::Domain("stream length must be at least 1".into()));
        }
        if len > self.ceilings.exact {
            return Err(MotzkinError::ResourceLimit {
                engine: "holonomic recurrence",
                requested: len,
                ceiling: self.ceilings.exact,
            });
        }
        let m = BigUint::from(modulus);
        let values = Holonomic::new()
            .take(len as usize)
            .map(|v| v.map(|v| (v % &m).to_u64().expect("residue below a u64 modulus")))
            .collect::<Result<Vec<u64>>>()?;
        Ok(ResidueStream { modulus, values })
    }

    /// `M_n mod m` for `n < len` from the convolution recurrence.
    pub fn mod_stream(&self, modulus: u64, len: u64) -> Result<ResidueStream> {
        if modulus < 2 {
            return Err(MotzkinError::Domain(format!(
                "modulus must be at least 2, got {modulus}"
            )));
        }
        if len == 0 {
            return Err(MotzkinError::Domain("stream length must be at least 1".into()));
        }
        if len > self.ceilings.modular {
            return Err(MotzkinError::ResourceLimit {
                engine: "convolution",
                requested: len,
                ceiling: self.ceilings.modular,
            });
        }
        let values = convolution_residues(modulus, len as usize);
        Ok(ResidueStream { modulus, values })
    }

    /// Compares [`Self::mod_stream`] with the holonomic recurrence reduced
    /// mod m.
    pub fn cross_validate(&self, modulus: u64, len: u64) -> Result<CrossValidation> {
        let modular = self.mod_stream(modulus, len)?;
        let exact = self.exact_residues(modulus, len)?;
        let first_mismatch = exact
            .values()
            .iter()
            .zip(modular.values())
            .position(|(a, b)| a != b)
            .map(|p| p as u64);
        Ok(CrossValidation {
            modulus,
            limit: len,
            first_mismatch,
        })
    }
}

/// Unbounded iterator over `M_0, M_1, ...` via
/// `(n + 2) M_n = (2n + 1) M_{n-1} + (3n - 3) M_{n-2}`.
///
/// Yields `Err(InexactDivision)` (and then stops) if a division leaves a
/// remainder.
#[derive(Debug, Clone)]
pub struct Holonomic {
    n: u64,
    prev: BigUint,
    prev2: BigUint,
    failed: bool,
}

impl Holonomic {
    pub fn new() -> Self {
        Self {
            n: 0,
            prev: BigUint::one(),
            prev2: BigUint::one(),
            failed: false,
        }
    }
}

impl Default for Holonomic {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for Holonomic {
    type Item = Result<BigUint>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let n = self.n;
        self.n += 1;
        if n < 2 {
            return Some(Ok(BigUint::one()));
        }
        let numer = &self.prev * (2 * n + 1) + &self.prev2 * (3 * n - 3);
        let (q, r) = numer.div_rem(&BigUint::from(n + 2));
        if !r.is_zero() {
            self.failed = true;
            return Some(Err(MotzkinError::InexactDivision { n }));
        }
        self.prev2 = std::mem::replace(&mut self.prev, q.clone());
        Some(Ok(q))
    }
}

/// Reduces an exact stream mod m.
pub fn reduce_stream(exact: &[BigUint], modulus: u64) -> Vec<u64> {
    let m = BigUint::from(modulus);
    exact
        .iter()
        .map(|v| (v % &m).to_u64().expect("residue below a u64 modulus"))
        .collect()
}

fn convolution_residues(m: u64, len: usize) -> Vec<u64> {
    let mut a: Vec<u64> = Vec::with_capacity(len);
    a.push(1 % m);
    // sum_{k<n} a_k a_{n-1-k} folded by symmetry, reduced once per term
    // when the unreduced sum provably fits in a u64.
    let lazy = (m as u128)
        .checked_mul(m as u128)
        .and_then(|sq| sq.checked_mul(len as u128))
        .is_some_and(|bound| bound < u64::MAX as u128);
    for n in 1..len {
        let l = n - 1; // a_n = a_{n-1} + sum_{k<l} a_k a_{l-1-k}
        let half = l / 2;
        let conv = if lazy {
            let mut acc = 0u64;
            for k in 0..half {
                acc += a[k] * a[l - 1 - k];
            }
            acc = 2 * (acc % m);
            if l % 2 == 1 {
                acc += a[half] * a[half];
            }
            acc % m
        } else {
            let mm = m as u128;
            let mut acc = 0u128;
            for k in 0..half {
                acc = (acc + (a[k] as u128) * (a[l - 1 - k] as u128)) % mm;
            }
            acc = (2 * acc) % mm;
            if l % 2 == 1 {
                acc = (acc + (a[half] as u128) * (a[half] as u128)) % mm;
            }
            acc as u64
        };
        let next = ((a[n - 1] as u128 + conv as u128) % m as u128) as u64;
        a.push(next);
    }
    a
}
