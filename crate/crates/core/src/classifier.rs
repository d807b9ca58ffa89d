//! Residue classes of `M_n` decided from the base-q digits of `n` alone.
//!
//! Everything here reduces to one primitive: writing `n - c = u * q^e` with
//! `q` not dividing `u`, then reading the class off `u mod q` and `e`.

use std::fmt;

use num_traits::pow;

use crate::error::{MotzkinError, Result};
use crate::natural::Natural;

/// `n = unit * base^exponent` with `base` not dividing `unit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationDecomposition<T> {
    pub unit: T,
    pub exponent: u32,
}

pub fn factor_out_base<T: Natural>(n: &T, q: u64) -> Result<ValuationDecomposition<T>> {
    if q < 2 {
        return Err(MotzkinError::Domain(format!("base must be at least 2, got {q}")));
    }
    if n.is_zero() {
        return Err(MotzkinError::Domain("valuation of 0 is undefined".into()));
    }
    let base = T::from(q);
    let mut unit = n.clone();
    let mut exponent = 0u32;
    loop {
        let (quot, rem) = unit.div_rem(&base);
        if !rem.is_zero() {
            break;
        }
        unit = quot;
        exponent += 1;
    }
    Ok(ValuationDecomposition { unit, exponent })
}

/// Membership description for `{ (q i + r) q^(s j + t) + c : i >= 0, j >= j_min }`.
///
/// `j_min = 0` is the full family, `j_min = 1` drops the `j = 0` layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SetSpec {
    q: u64,
    r: u64,
    s: u32,
    t: u32,
    c: i64,
    j_min: u32,
}

impl SetSpec {
    pub fn new(q: u64, r: u64, s: u32, t: u32, c: i64, j_min: u32) -> Result<Self> {
        if q < 2 {
            return Err(MotzkinError::InvalidSpec(format!("q = {q} must be at least 2")));
        }
        if r == 0 {
            // q i + 0 is itself divisible by q, so (i, j) is not unique.
            return Err(MotzkinError::InvalidSpec(
                "r = 0 makes the (i, j) representation non-unique".into(),
            ));
        }
        if r >= q {
            return Err(MotzkinError::InvalidSpec(format!("r = {r} must be below q = {q}")));
        }
        if s == 0 {
            return Err(MotzkinError::InvalidSpec("s must be at least 1".into()));
        }
        if j_min > 1 {
            return Err(MotzkinError::InvalidSpec(format!("j_min = {j_min} must be 0 or 1")));
        }
        Ok(Self::new_unchecked(q, r, s, t, c, j_min))
    }

    const fn new_unchecked(q: u64, r: u64, s: u32, t: u32, c: i64, j_min: u32) -> Self {
        Self { q, r, s, t, c, j_min }
    }

    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn r(&self) -> u64 {
        self.r
    }
    pub fn s(&self) -> u32 {
        self.s
    }
    pub fn t(&self) -> u32 {
        self.t
    }
    pub fn c(&self) -> i64 {
        self.c
    }
    pub fn j_min(&self) -> u32 {
        self.j_min
    }

    /// Smallest exponent `s * j_min + t` a member can carry.
    pub fn min_exponent(&self) -> u32 {
        self.s * self.j_min + self.t
    }

    /// `(q i + r) q^(s j + t) + c` for the given witness.
    pub fn recompose<T: Natural>(&self, w: &Witness<T>) -> T {
        let q = T::from(self.q);
        let base = q.clone() * w.i.clone() + T::from(self.r);
        let exp = (self.s * w.j + self.t) as usize;
        let value = base * pow(q, exp);
        if self.c >= 0 {
            value + T::from(self.c as u64)
        } else {
            value - T::from(self.c.unsigned_abs())
        }
    }
}

impl fmt::Display for SetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(q={}, r={}, s={}, t={}, c={}, j_min={})",
            self.q, self.r, self.s, self.t, self.c, self.j_min
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness<T> {
    pub i: T,
    pub j: u32,
}

pub fn is_in_set<T: Natural>(n: &T, spec: &SetSpec) -> Option<Witness<T>> {
    let shifted = if spec.c >= 0 {
        let c = T::from(spec.c as u64);
        if *n <= c {
            return None;
        }
        n.clone() - c
    } else {
        n.clone() + T::from(spec.c.unsigned_abs())
    };
    let ValuationDecomposition { unit, exponent } =
        factor_out_base(&shifted, spec.q).expect("shifted value is positive and q >= 2");
    let q = T::from(spec.q);
    let (i, rem) = unit.div_rem(&q);
    if rem != T::from(spec.r) {
        return None;
    }
    if exponent < spec.min_exponent() || !(exponent - spec.t).is_multiple_of(spec.s) {
        return None;
    }
    Some(Witness {
        i,
        j: (exponent - spec.t) / spec.s,
    })
}

/// `(epsilon, delta, spec)` for the four families `(4i + eps) 4^(j+1) - delta`.
pub const EVEN_CLASS_SPECS: [(u8, u8, SetSpec); 4] = [
    (1, 1, SetSpec::new_unchecked(4, 1, 1, 1, -1, 0)),
    (1, 2, SetSpec::new_unchecked(4, 1, 1, 1, -2, 0)),
    (3, 1, SetSpec::new_unchecked(4, 3, 1, 1, -1, 0)),
    (3, 2, SetSpec::new_unchecked(4, 3, 1, 1, -2, 0)),
];

/// The four families of `n` with `5 | M_n`, in order. Forms 2 and 3 carry
/// exponent `2j - 1` with `j >= 1`, stored re-indexed as `2j' + 1`, `j' >= 0`.
pub const DIV5_FORM_SPECS: [SetSpec; 4] = [
    SetSpec::new_unchecked(5, 1, 2, 0, -2, 1),
    SetSpec::new_unchecked(5, 2, 2, 1, -1, 0),
    SetSpec::new_unchecked(5, 3, 2, 1, -2, 0),
    SetSpec::new_unchecked(5, 4, 2, 0, -1, 1),
];

/// Every set spec the classifiers consult, labelled.
pub fn classifier_specs() -> Vec<(String, SetSpec)> {
    let even = EVEN_CLASS_SPECS
        .iter()
        .map(|&(e, d, spec)| (even_class_label(e, d), spec));
    let div5 = DIV5_FORM_SPECS
        .iter()
        .enumerate()
        .map(|(k, &spec)| (div5_form_label(k as u8 + 1), spec));
    even.chain(div5).collect()
}

pub(crate) fn even_class_label(epsilon: u8, delta: u8) -> String {
    format!("eps{epsilon}_delta{delta}")
}

pub(crate) fn div5_form_label(form: u8) -> String {
    format!("div5 form {form}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mod8Kind {
    Odd,
    Residue4,
    Residue2,
    Residue6,
}

impl Mod8Kind {
    pub fn name(self) -> &'static str {
        match self {
            Mod8Kind::Odd => "Odd",
            Mod8Kind::Residue4 => "Residue4",
            Mod8Kind::Residue2 => "Residue2",
            Mod8Kind::Residue6 => "Residue6",
        }
    }

    /// `M_n mod 8` when it is determined.
    pub fn residue(self) -> Option<u8> {
        match self {
            Mod8Kind::Odd => None,
            Mod8Kind::Residue4 => Some(4),
            Mod8Kind::Residue2 => Some(2),
            Mod8Kind::Residue6 => Some(6),
        }
    }
}

/// `n = (4i + epsilon) 4^(j+1) - delta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvenWitness<T> {
    pub epsilon: u8,
    pub delta: u8,
    pub i: T,
    pub j: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mod8Classification<T> {
    pub kind: Mod8Kind,
    pub witness: Option<EvenWitness<T>>,
    /// Ones in the binary expansion of `4i + epsilon - 1`; set for
    /// residues 2 and 6 only.
    pub y: Option<u64>,
}

impl<T> Mod8Classification<T> {
    pub fn is_even(&self) -> bool {
        self.kind != Mod8Kind::Odd
    }

    /// `M_n mod 4` when it is determined (even case only).
    pub fn residue_mod4(&self) -> Option<u8> {
        self.kind.residue().map(|r| r % 4)
    }
}

pub fn classify_mod8<T: Natural>(n: &T) -> Mod8Classification<T> {
    let mut found: Option<EvenWitness<T>> = None;
    for (epsilon, delta, spec) in EVEN_CLASS_SPECS.iter() {
        if let Some(Witness { i, j }) = is_in_set(n, spec) {
            assert!(found.is_none(), "even classes overlap at n = {n}");
            found = Some(EvenWitness {
                epsilon: *epsilon,
                delta: *delta,
                i,
                j,
            });
        }
    }
    let Some(w) = found else {
        return Mod8Classification {
            kind: Mod8Kind::Odd,
            witness: None,
            y: None,
        };
    };
    let (kind, y) = match (w.epsilon, w.delta) {
        (1, 1) | (3, 2) => (Mod8Kind::Residue4, None),
        _ => {
            let base = T::from(4) * w.i.clone() + T::from(u64::from(w.epsilon) - 1);
            let y = base.popcount();
            let kind = if y % 2 == 0 {
                Mod8Kind::Residue2
            } else {
                Mod8Kind::Residue6
            };
            (kind, Some(y))
        }
    };
    Mod8Classification {
        kind,
        witness: Some(w),
        y,
    }
}

/// Whether every base-3 digit of `n` is 0 or 1. Zero qualifies.
pub fn is_t01<T: Natural>(n: &T) -> bool {
    let three = T::from(3);
    let two = T::from(2);
    let mut rest = n.clone();
    while !rest.is_zero() {
        let (q, d) = rest.div_rem(&three);
        if d == two {
            return false;
        }
        rest = q;
    }
    true
}

/// `M_n mod 3` as a canonical residue in `{0, 1, 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mod3Value(u8);

impl Mod3Value {
    pub fn value(self) -> u8 {
        self.0
    }
}

/// Whether `n = 3m - k` for some `m` in T(01).
fn t01_preimage<T: Natural>(n: &T, k: u64) -> bool {
    let (m, rem) = (n.clone() + T::from(k)).div_rem(&T::from(3));
    rem.is_zero() && is_t01(&m)
}

pub fn classify_mod3<T: Natural>(n: &T) -> Mod3Value {
    let in_zero = t01_preimage(n, 0);
    let in_one = t01_preimage(n, 1);
    let in_two = t01_preimage(n, 2);
    assert!(
        u8::from(in_zero) + u8::from(in_one) + u8::from(in_two) <= 1,
        "mod-3 classes overlap at n = {n}"
    );
    if in_one {
        Mod3Value(2)
    } else if in_zero || in_two {
        Mod3Value(1)
    } else {
        Mod3Value(0)
    }
}

/// Result of the divisibility-by-5 test.
///
/// The witness `j` follows the original indexing: `j >= 1` for every form,
/// with forms 2 and 3 using exponent `2j - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Div5Form<T> {
    NotDivisible,
    Form { form: u8, i: T, j: u32 },
}

impl<T> Div5Form<T> {
    pub fn is_divisible(&self) -> bool {
        matches!(self, Div5Form::Form { .. })
    }

    pub fn form(&self) -> Option<u8> {
        match self {
            Div5Form::NotDivisible => None,
            Div5Form::Form { form, .. } => Some(*form),
        }
    }
}

pub fn classify_div5<T: Natural>(n: &T) -> Div5Form<T> {
    let mut found = Div5Form::NotDivisible;
    for (k, spec) in DIV5_FORM_SPECS.iter().enumerate() {
        if let Some(Witness { i, j }) = is_in_set(n, spec) {
            assert!(!found.is_divisible(), "mod-5 forms overlap at n = {n}");
            let form = k as u8 + 1;
            let j = if spec.j_min == 0 { j + 1 } else { j };
            found = Div5Form::Form { form, i, j };
        }
    }
    found
}
