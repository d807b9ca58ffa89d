//! Asymptotic densities: closed forms, exact finite counts and empirical
//! estimates.
//!
//! For `S(q, r, s, t) = { (q i + r) q^(s j + t) : i, j >= 0 }` the limit is
//! `q^s / (q^(t+1) (q^s - 1))`; dropping the `j = 0` layer gives
//! `1 / (q^(t+1) (q^s - 1))`. Finite-N counts differ from `N * density` by
//! at most a constant per `j` layer, i.e. `O(log N)`.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::classifier::{
    classify_div5, classify_mod3, classify_mod8, div5_form_label, even_class_label, is_in_set,
    is_t01, Mod8Kind, SetSpec, DIV5_FORM_SPECS, EVEN_CLASS_SPECS,
};
use crate::engine::MotzkinEngine;
use crate::error::{MotzkinError, Result};

/// Exact rational in lowest terms with a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        Self(BigRational::new(numer.into(), denom.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }
}

impl std::ops::Add for ExactRational {
    type Output = ExactRational;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl std::ops::Mul<i64> for ExactRational {
    type Output = ExactRational;
    fn mul(self, rhs: i64) -> Self {
        Self(self.0 * BigInt::from(rhs))
    }
}

impl std::ops::Div<i64> for ExactRational {
    type Output = ExactRational;
    fn div(self, rhs: i64) -> Self {
        Self(self.0 / BigInt::from(rhs))
    }
}

impl std::iter::Sum for ExactRational {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

/// Always `p/q`, including integers (`1/1`).
impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

fn big_pow(q: u64, e: u32) -> BigInt {
    Pow::pow(BigInt::from(q), e)
}

/// Density of `S(q, r, s, t)`, independent of `r`.
pub fn closed_density_s(q: u64, s: u32, t: u32) -> ExactRational {
    assert!(q >= 2 && s >= 1, "closed_density_s needs q >= 2, s >= 1");
    let qs = big_pow(q, s);
    let denom = big_pow(q, t + 1) * (&qs - BigInt::one());
    ExactRational::new(qs, denom)
}

/// Density of `S'(q, r, s, t)`, the `j >= 1` part of `S`.
pub fn closed_density_sprime(q: u64, s: u32, t: u32) -> ExactRational {
    assert!(q >= 2 && s >= 1, "closed_density_sprime needs q >= 2, s >= 1");
    let denom = big_pow(q, t + 1) * (big_pow(q, s) - BigInt::one());
    ExactRational::new(1, denom)
}

/// Limit density of the set a spec describes; the offset `c` does not move it.
pub fn spec_density(spec: &SetSpec) -> ExactRational {
    if spec.j_min() == 0 {
        closed_density_s(spec.q(), spec.s(), spec.t())
    } else {
        closed_density_sprime(spec.q(), spec.s(), spec.t())
    }
}

/// Members of the unshifted set `(q i + r) q^(s j + t)`, `j >= j_min`, in `[1, x]`.
fn count_unshifted_upto(x: i128, spec: &SetSpec) -> u128 {
    if x < 1 {
        return 0;
    }
    let x = x as u128;
    let q = u128::from(spec.q());
    let r = u128::from(spec.r());
    let mut total = 0u128;
    let mut j = spec.j_min();
    while let Some(p) = q.checked_pow(spec.s() * j + spec.t()) {
        if p > x {
            break;
        }
        let m = x / p;
        if m >= r {
            total += (m - r) / q + 1;
        }
        j += 1;
    }
    total
}

/// Exact `#{ 0 <= n <= horizon : n in spec }` by summing floor counts per `j`.
pub fn count_set_exact(horizon: u64, spec: &SetSpec) -> u128 {
    let c = i128::from(spec.c());
    let upper = count_unshifted_upto(i128::from(horizon) - c, spec);
    // members with n < 0 correspond to shifted values in [1, -c - 1]
    let below_zero = if c < 0 {
        count_unshifted_upto(-c - 1, spec)
    } else {
        0
    };
    upper - below_zero
}

/// Largest `k` with `q^k <= n`, for `n >= 1`.
fn ilog(n: u64, q: u64) -> u32 {
    debug_assert!(n >= 1 && q >= 2);
    n.ilog(q)
}

/// Truncation index `floor((log_q N - t - 1) / s)`, exact in integers since
/// `floor(x / s) = floor(floor(x) / s)`.
pub fn truncation_index(horizon: u64, spec: &SetSpec) -> i64 {
    let l = i64::from(ilog(horizon.max(1), spec.q()));
    (l - i64::from(spec.t()) - 1).div_euclid(i64::from(spec.s()))
}

/// Bound on `|count_set_exact(N) - N * density|`:
/// `2 (U + 2) + r (U + 1) / q + q^(s j_min + t)` with `U` the truncation
/// index, `U + 1` and `U + 2` clamped at zero for horizons below the first
/// layer.
pub fn count_error_bound(horizon: u64, spec: &SetSpec) -> f64 {
    let u = truncation_index(horizon, spec);
    let u1 = (u + 1).max(0) as f64;
    let u2 = (u + 2).max(0) as f64;
    let q = spec.q() as f64;
    2.0 * u2 + spec.r() as f64 * u1 / q + q.powi(spec.min_exponent() as i32)
}

/// `#{ 0 <= n <= horizon : n in T(01) }` via a digit walk over the base-3
/// expansion of `horizon`.
pub fn count_t01_upto(horizon: u64) -> u128 {
    let mut digits = Vec::new();
    let mut rest = horizon;
    while rest > 0 {
        digits.push((rest % 3) as u8);
        rest /= 3;
    }
    let mut count = 0u128;
    for (pos, &d) in digits.iter().enumerate().rev() {
        // free choices for the `pos` lower digits
        let free = 1u128 << pos;
        match d {
            0 => {}
            1 => count += free,
            _ => return count + 2 * free,
        }
    }
    count + 1
}

/// Which residue class an empirical sweep counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassSelector {
    Even,
    Mod8Eq4,
    Mod8Eq2,
    Mod8Eq6,
    Mod4Eq2,
    Mod3Eq0,
    Mod3Eq1,
    Mod3Eq2,
    Div5,
    T01,
    /// One `(epsilon, delta)` family of even Motzkin numbers.
    EvenClass { epsilon: u8, delta: u8 },
    /// One of the four families with `5 | M_n`, numbered 1 to 4.
    Div5Form(u8),
    Set(SetSpec),
}

impl ClassSelector {
    /// Selectors with a row in [`density_table`].
    pub fn named() -> Vec<ClassSelector> {
        use ClassSelector::*;
        let mut out = vec![
            Even, Mod8Eq4, Mod8Eq2, Mod8Eq6, Mod4Eq2, Div5, Mod3Eq0, Mod3Eq1, Mod3Eq2, T01,
        ];
        out.extend(
            EVEN_CLASS_SPECS
                .iter()
                .map(|&(epsilon, delta, _)| EvenClass { epsilon, delta }),
        );
        out.extend((1..=4).map(Div5Form));
        out
    }

    pub fn label(&self) -> String {
        match self {
            ClassSelector::Even => "even".into(),
            ClassSelector::Mod8Eq4 => "mod8≡4".into(),
            ClassSelector::Mod8Eq2 => "mod8≡2".into(),
            ClassSelector::Mod8Eq6 => "mod8≡6".into(),
            ClassSelector::Mod4Eq2 => "mod4≡2".into(),
            ClassSelector::Mod3Eq0 => "mod3≡0".into(),
            ClassSelector::Mod3Eq1 => "mod3≡1".into(),
            ClassSelector::Mod3Eq2 => "mod3≡2".into(),
            ClassSelector::Div5 => "div5".into(),
            ClassSelector::T01 => "T01".into(),
            ClassSelector::EvenClass { epsilon, delta } => even_class_label(*epsilon, *delta),
            ClassSelector::Div5Form(k) => div5_form_label(*k),
            ClassSelector::Set(spec) => format!(
                "set q={} r={} s={} t={} c={} j_min={}",
                spec.q(),
                spec.r(),
                spec.s(),
                spec.t(),
                spec.c(),
                spec.j_min()
            ),
        }
    }

    fn even_spec(epsilon: u8, delta: u8) -> &'static SetSpec {
        &EVEN_CLASS_SPECS
            .iter()
            .find(|(e, d, _)| *e == epsilon && *d == delta)
            .expect("validated (epsilon, delta)")
            .2
    }

    /// Whether `n` belongs to the class, decided by the digit classifiers.
    pub fn matches(&self, n: u64) -> bool {
        match self {
            ClassSelector::Even => classify_mod8(&n).is_even(),
            ClassSelector::Mod8Eq4 => classify_mod8(&n).kind == Mod8Kind::Residue4,
            ClassSelector::Mod8Eq2 => classify_mod8(&n).kind == Mod8Kind::Residue2,
            ClassSelector::Mod8Eq6 => classify_mod8(&n).kind == Mod8Kind::Residue6,
            ClassSelector::Mod4Eq2 => classify_mod8(&n).residue_mod4() == Some(2),
            ClassSelector::Mod3Eq0 => classify_mod3(&n).value() == 0,
            ClassSelector::Mod3Eq1 => classify_mod3(&n).value() == 1,
            ClassSelector::Mod3Eq2 => classify_mod3(&n).value() == 2,
            ClassSelector::Div5 => classify_div5(&n).is_divisible(),
            ClassSelector::T01 => is_t01(&n),
            ClassSelector::EvenClass { epsilon, delta } => {
                is_in_set(&n, Self::even_spec(*epsilon, *delta)).is_some()
            }
            ClassSelector::Div5Form(k) => {
                is_in_set(&n, &DIV5_FORM_SPECS[usize::from(*k) - 1]).is_some()
            }
            ClassSelector::Set(spec) => is_in_set(&n, spec).is_some(),
        }
    }

    /// Limiting density of the class.
    pub fn limit(&self) -> ExactRational {
        let even = |e, d| spec_density(Self::even_spec(e, d));
        match self {
            ClassSelector::Even => EVEN_CLASS_SPECS
                .iter()
                .map(|(_, _, s)| spec_density(s))
                .sum(),
            ClassSelector::Mod8Eq4 => even(1, 1) + even(3, 2),
            ClassSelector::Mod4Eq2 => even(1, 2) + even(3, 1),
            // popcount parity splits residue 2 and 6 evenly
            ClassSelector::Mod8Eq2 | ClassSelector::Mod8Eq6 => (even(1, 2) + even(3, 1)) / 2,
            ClassSelector::Div5 => DIV5_FORM_SPECS.iter().map(spec_density).sum(),
            ClassSelector::Mod3Eq0 => ExactRational::one(),
            ClassSelector::Mod3Eq1 | ClassSelector::Mod3Eq2 | ClassSelector::T01 => {
                ExactRational::zero()
            }
            ClassSelector::EvenClass { epsilon, delta } => even(*epsilon, *delta),
            ClassSelector::Div5Form(k) => spec_density(&DIV5_FORM_SPECS[usize::from(*k) - 1]),
            ClassSelector::Set(spec) => spec_density(spec),
        }
    }

    /// Bound on `|ratio - limit|` at horizon `N`, where one is known.
    ///
    /// Set-based classes sum the per-spec count bound; the T(01)-based
    /// classes use `#T(01) cap [0, N] <= 2^(k+1)`, `k = floor(log_3 N)`.
    /// Residues 2 and 6 mod 8 separately have no such bound.
    pub fn error_bound(&self, horizon: u64) -> Option<f64> {
        let n = horizon.max(1);
        let ratio = |count: f64| count / n as f64;
        let specs_bound = |specs: &[&SetSpec]| {
            ratio(specs.iter().map(|s| count_error_bound(horizon, s)).sum())
        };
        let t01 = || 2f64.powi(ilog(n, 3) as i32 + 1);
        let e = |eps, del| Self::even_spec(eps, del);
        match self {
            ClassSelector::Even => {
                Some(specs_bound(&EVEN_CLASS_SPECS.iter().map(|(_, _, s)| s).collect::<Vec<_>>()))
            }
            ClassSelector::Mod8Eq4 => Some(specs_bound(&[e(1, 1), e(3, 2)])),
            ClassSelector::Mod4Eq2 => Some(specs_bound(&[e(1, 2), e(3, 1)])),
            ClassSelector::Mod8Eq2 | ClassSelector::Mod8Eq6 => None,
            ClassSelector::Div5 => Some(specs_bound(&DIV5_FORM_SPECS.iter().collect::<Vec<_>>())),
            ClassSelector::Mod3Eq0 => Some(ratio(3.0 * t01())),
            ClassSelector::Mod3Eq1 | ClassSelector::Mod3Eq2 => Some(ratio(2.0 * t01())),
            ClassSelector::T01 => Some(ratio(t01())),
            ClassSelector::EvenClass { epsilon, delta } => Some(specs_bound(&[e(*epsilon, *delta)])),
            ClassSelector::Div5Form(k) => {
                Some(specs_bound(&[&DIV5_FORM_SPECS[usize::from(*k) - 1]]))
            }
            ClassSelector::Set(spec) => Some(specs_bound(&[spec])),
        }
    }
}

impl fmt::Display for ClassSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Accepts the labels from [`ClassSelector::label`] as well as ASCII
/// spellings (`mod8=4`, `mod8-4`, `eps1-delta2`, `div5-form3`) and
/// `set:q,r,s,t,c,j_min`.
impl FromStr for ClassSelector {
    type Err = MotzkinError;

    fn from_str(raw: &str) -> Result<Self> {
        let unknown = || MotzkinError::UnknownSelector(raw.to_string());
        let key: String = raw
            .trim()
            .to_lowercase()
            .replace(['≡', '=', '_', ' '], "-");
        if let Some(body) = key.strip_prefix("set:") {
            let parts: Vec<&str> = body.split(',').map(str::trim).collect();
            if parts.len() != 6 {
                return Err(unknown());
            }
            let int = |i: usize| parts[i].parse::<i64>().map_err(|_| unknown());
            let nat = |i: usize| parts[i].parse::<u64>().map_err(|_| unknown());
            let spec = SetSpec::new(
                nat(0)?,
                nat(1)?,
                u32::try_from(nat(2)?).map_err(|_| unknown())?,
                u32::try_from(nat(3)?).map_err(|_| unknown())?,
                int(4)?,
                u32::try_from(nat(5)?).map_err(|_| unknown())?,
            )?;
            return Ok(ClassSelector::Set(spec));
        }
        let sel = match key.as_str() {
            "even" | "mod2-0" => ClassSelector::Even,
            "mod8-4" => ClassSelector::Mod8Eq4,
            "mod8-2" => ClassSelector::Mod8Eq2,
            "mod8-6" => ClassSelector::Mod8Eq6,
            "mod4-2" => ClassSelector::Mod4Eq2,
            "mod3-0" => ClassSelector::Mod3Eq0,
            "mod3-1" => ClassSelector::Mod3Eq1,
            "mod3-2" => ClassSelector::Mod3Eq2,
            "div5" | "mod5-0" => ClassSelector::Div5,
            "t01" => ClassSelector::T01,
            "eps1-delta1" => ClassSelector::EvenClass { epsilon: 1, delta: 1 },
            "eps1-delta2" => ClassSelector::EvenClass { epsilon: 1, delta: 2 },
            "eps3-delta1" => ClassSelector::EvenClass { epsilon: 3, delta: 1 },
            "eps3-delta2" => ClassSelector::EvenClass { epsilon: 3, delta: 2 },
            other => match other.strip_prefix("div5-form").map(|k| k.trim_start_matches('-')) {
                Some(k @ ("1" | "2" | "3" | "4")) => {
                    ClassSelector::Div5Form(k.parse().expect("single digit"))
                }
                _ => return Err(unknown()),
            },
        };
        Ok(sel)
    }
}

/// The fixed table of limiting densities, one row per named selector.
pub fn density_table() -> Vec<(String, ExactRational)> {
    ClassSelector::named()
        .into_iter()
        .map(|sel| (sel.label(), sel.limit()))
        .collect()
}

/// Looks up a row of [`density_table`] by any accepted selector spelling.
pub fn lookup_density(label: &str) -> Result<ExactRational> {
    label.parse::<ClassSelector>().map(|s| s.limit())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub label: String,
    pub limit: ExactRational,
    pub horizon: u64,
    pub observed_count: u64,
    pub observed_ratio: f64,
    pub abs_discrepancy: f64,
    pub error_bound: Option<f64>,
}

impl DensityReport {
    pub fn new(selector: &ClassSelector, horizon: u64, observed_count: u64) -> Self {
        let limit = selector.limit();
        let observed_ratio = observed_count as f64 / horizon as f64;
        // exact |count/N - limit|, rounded once
        let diff = BigRational::new(BigInt::from(observed_count), BigInt::from(horizon))
            - limit.as_ratio();
        let abs_discrepancy = num_traits::Signed::abs(&diff).to_f64().unwrap_or(f64::NAN);
        Self {
            label: selector.label(),
            limit,
            horizon,
            observed_count,
            observed_ratio,
            abs_discrepancy,
            error_bound: selector.error_bound(horizon),
        }
    }

    /// Whether the discrepancy respects the proved bound (vacuously true
    /// without one).
    pub fn within_bound(&self) -> bool {
        self.error_bound.is_none_or(|b| self.abs_discrepancy <= b)
    }
}

/// Chunk width for parallel sweeps.
pub const PARTITION_WIDTH: u64 = 1 << 16;

/// `#{ n in range : selector matches n }`, sequentially.
pub fn count_matches(selector: &ClassSelector, range: Range<u64>) -> u64 {
    range.filter(|&n| selector.matches(n)).count() as u64
}

/// Same count as [`count_matches`] over `[0, horizon)`, split into disjoint
/// chunks counted in parallel. Integer addition makes the merge exact, so the
/// result is identical to the sequential sweep.
pub fn count_matches_parallel(selector: &ClassSelector, horizon: u64) -> u64 {
    let chunks = horizon.div_ceil(PARTITION_WIDTH);
    (0..chunks)
        .into_par_iter()
        .map(|k| {
            let lo = k * PARTITION_WIDTH;
            let hi = (lo + PARTITION_WIDTH).min(horizon);
            count_matches(selector, lo..hi)
        })
        .sum()
}

/// Streams `n = 0..horizon` through the digit classifiers.
pub fn empirical_density(selector: &ClassSelector, horizon: u64) -> Result<DensityReport> {
    if horizon == 0 {
        return Err(MotzkinError::Domain("horizon must be at least 1".into()));
    }
    let count = count_matches_parallel(selector, horizon);
    Ok(DensityReport::new(selector, horizon, count))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidueCount {
    pub residue: u64,
    pub count: u64,
    pub ratio: f64,
}

/// Distribution of actual residues `M_n mod m` for `n < horizon`.
pub fn empirical_residue_distribution(
    engine: &MotzkinEngine,
    modulus: u64,
    horizon: u64,
) -> Result<Vec<ResidueCount>> {
    let stream = engine.mod_stream(modulus, horizon)?;
    let width = usize::try_from(modulus)
        .ok()
        .filter(|&w| w <= 1 << 24)
        .ok_or_else(|| MotzkinError::Domain(format!("modulus {modulus} too large to tabulate")))?;
    let mut counts = vec![0u64; width];
    for &v in stream.values() {
        counts[v as usize] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(residue, count)| ResidueCount {
            residue: residue as u64,
            count,
            ratio: count as f64 / horizon as f64,
        })
        .collect())
}
