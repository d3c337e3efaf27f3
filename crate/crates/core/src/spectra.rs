//! Zero-count multisets `{ N(Q + L + c) }` as `L` runs over all linear
//! functionals and `c` over a class of constants, together with the coset
//! weight multisets of `RM_q(1, m)` translated by a quadratic form.
//!
//! Constant classes aggregate every `c` they contain: `Zero` is `{0}`,
//! `AnyNonzero` all `q - 1` nonzero constants, `Square`/`NonSquare` the
//! `(q - 1)/2` nonzero squares or nonsquares (odd `q`, odd rank only).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{prime_power, Elem};
use crate::forms::{vector_from_index, QuadraticForm, RankType, TypeTag};

/// Default cap on `q^(2m) * #constants` for the brute-force spectra.
pub const DEFAULT_SPECTRUM_BUDGET: u128 = 1 << 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CClass {
    Zero,
    Square,
    NonSquare,
    AnyNonzero,
}

impl CClass {
    pub fn as_str(self) -> &'static str {
        match self {
            CClass::Zero => "zero",
            CClass::Square => "square",
            CClass::NonSquare => "nonsquare",
            CClass::AnyNonzero => "nonzero",
        }
    }

    /// Number of constants in the class.
    pub fn size(self, q: u64) -> u64 {
        match self {
            CClass::Zero => 1,
            CClass::AnyNonzero => q - 1,
            CClass::Square | CClass::NonSquare => (q - 1) / 2,
        }
    }

    /// The classes that partition GF(q) for a form of the given rank.
    pub fn partition(even_q: bool, rank: usize) -> Vec<CClass> {
        if !even_q && rank % 2 == 1 {
            vec![CClass::Zero, CClass::Square, CClass::NonSquare]
        } else {
            vec![CClass::Zero, CClass::AnyNonzero]
        }
    }
}

impl fmt::Display for CClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "zero" | "0" => Ok(CClass::Zero),
            "square" | "s" => Ok(CClass::Square),
            "nonsquare" | "ns" => Ok(CClass::NonSquare),
            "nonzero" | "any_nonzero" | "anynonzero" => Ok(CClass::AnyNonzero),
            other => Err(Error::Parse(format!("unknown constant class '{other}'"))),
        }
    }
}

/// Exact multiset of nonnegative integers, stored as value -> multiplicity.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpectrumMultiset {
    entries: BTreeMap<BigUint, BigUint>,
}

impl SpectrumMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `mult` copies of `value`; zero multiplicities are dropped.
    pub fn add(&mut self, value: BigUint, mult: BigUint) {
        if mult.is_zero() {
            return;
        }
        *self.entries.entry(value).or_default() += mult;
    }

    pub fn entries(&self) -> &BTreeMap<BigUint, BigUint> {
        &self.entries
    }

    pub fn multiplicity(&self, value: u64) -> BigUint {
        self.entries
            .get(&BigUint::from(value))
            .cloned()
            .unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.entries.values().sum()
    }

    pub fn merge(&mut self, other: &SpectrumMultiset) {
        for (v, k) in &other.entries {
            self.add(v.clone(), k.clone());
        }
    }

    pub fn scaled(&self, factor: &BigUint) -> SpectrumMultiset {
        let mut out = SpectrumMultiset::new();
        for (v, k) in &self.entries {
            out.add(v.clone(), k * factor);
        }
        out
    }

    /// Replaces each value `v` by `total - v`.
    pub fn complemented(&self, total: &BigUint) -> Result<SpectrumMultiset> {
        let mut out = SpectrumMultiset::new();
        for (v, k) in &self.entries {
            if v > total {
                return Err(Error::Inconsistent(format!("value {v} exceeds {total}")));
            }
            out.add(total - v, k.clone());
        }
        Ok(out)
    }

    pub fn to_json(&self, q: u64, m: usize, rt: RankType, c_class: &str) -> serde_json::Value {
        #[derive(Serialize)]
        struct Entry {
            value: String,
            multiplicity: String,
        }
        #[derive(Serialize)]
        struct Doc<'a> {
            q: u64,
            m: usize,
            rank: usize,
            #[serde(rename = "type")]
            type_tag: TypeTag,
            c_class: &'a str,
            population: String,
            entries: Vec<Entry>,
        }
        let doc = Doc {
            q,
            m,
            rank: rt.rank,
            type_tag: rt.type_tag,
            c_class,
            population: self.total().to_string(),
            entries: self
                .entries
                .iter()
                .map(|(v, k)| Entry {
                    value: v.to_string(),
                    multiplicity: k.to_string(),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("spectrum serializes")
    }
}

impl fmt::Display for SpectrumMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, k)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}: {k}")?;
        }
        f.write_str("}")
    }
}

/// A request for the multiset over one class of constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CosetQuery {
    pub q: u64,
    pub m: usize,
    pub class: RankType,
    pub c_class: CClass,
}

impl CosetQuery {
    pub fn new(q: u64, m: usize, class: RankType, c_class: CClass) -> Self {
        CosetQuery { q, m, class, c_class }
    }

    /// Returns whether `q` is even after checking the query's consistency.
    pub fn validate(&self) -> Result<bool> {
        let even_q = check_params(self.q, self.m, self.class)?;
        let odd_rank = self.class.rank % 2 == 1;
        match self.c_class {
            CClass::Square | CClass::NonSquare if even_q || !odd_rank => Err(Error::InconsistentQuery(
                "square/nonsquare classes apply to odd q and odd rank only".into(),
            )),
            CClass::AnyNonzero if !even_q && odd_rank => Err(Error::InconsistentQuery(
                "odd q with odd rank splits nonzero constants into squares and nonsquares".into(),
            )),
            _ => Ok(even_q),
        }
    }
}

fn check_params(q: u64, m: usize, rt: RankType) -> Result<bool> {
    let (p, _) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if m == 0 {
        return Err(Error::OutOfRange("spectra need m >= 1".into()));
    }
    rt.validate(p == 2, m)?;
    Ok(p == 2)
}

fn pw(q: u64, e: usize) -> BigInt {
    num_traits::pow(BigInt::from(q), e)
}

fn halve(x: BigInt) -> Result<BigInt> {
    let (h, r) = x.div_rem(&BigInt::from(2));
    if r.is_zero() {
        Ok(h)
    } else {
        Err(Error::InexactDivision(format!("{x} / 2")))
    }
}

/// Rows `(value, multiplicity)` with signed arithmetic, checked and collected.
fn collect_rows(rows: Vec<(BigInt, BigInt)>, scale: u64) -> Result<SpectrumMultiset> {
    let mut out = SpectrumMultiset::new();
    for (v, k) in rows {
        if v.is_negative() || k.is_negative() {
            return Err(Error::Inconsistent(format!(
                "negative entry {v} x {k} in closed-form spectrum"
            )));
        }
        let k = k * BigInt::from(scale);
        out.add(v.to_biguint().unwrap(), k.to_biguint().unwrap());
    }
    Ok(out)
}

fn check_population(ms: &SpectrumMultiset, expected: BigInt) -> Result<()> {
    if BigInt::from(ms.total()) != expected {
        return Err(Error::Inconsistent(format!(
            "spectrum population {} differs from {expected}",
            ms.total()
        )));
    }
    Ok(())
}

/// Rows for a single constant `c` of the class (the class size is applied
/// by the caller).
fn per_constant_rows(q: u64, m: usize, rt: RankType, c_class: CClass) -> Result<Vec<(BigInt, BigInt)>> {
    let even_q = q % 2 == 0;
    let r = rt.rank;
    let qb = BigInt::from(q);
    let qm = pw(q, m);
    let base = pw(q, m - 1);

    if r == 0 {
        // Affine functions: only L = 0 fails to be balanced.
        return Ok(match c_class {
            CClass::Zero => vec![(qm.clone(), 1.into()), (base, qm - 1)],
            _ => vec![(BigInt::zero(), 1.into()), (base, qm - 1)],
        });
    }

    if r % 2 == 0 {
        let tau = BigInt::from(rt.type_tag.sign().expect("typed"));
        let g = pw(q, m - (r + 2) / 2);
        let s = pw(q, (r - 2) / 2);
        let hi = &base + &tau * &g * (&qb - 1);
        let lo = &base - &tau * &g;
        let flat = (base.clone(), &qm - pw(q, r));
        return Ok(match c_class {
            CClass::Zero => vec![
                flat,
                (hi, pw(q, r - 1) + &tau * &s * (&qb - 1)),
                (lo, (&qb - 1) * (pw(q, r - 1) - &tau * &s)),
            ],
            _ => vec![
                flat,
                (hi, pw(q, r - 1) - &tau * &s),
                (lo, (&qb - 1) * pw(q, r - 1) + &tau * &s),
            ],
        });
    }

    let h = pw(q, m - (r + 1) / 2);
    let s = pw(q, (r - 1) / 2);
    let flat_mult = &qm - pw(q, r) + pw(q, r - 1);
    if even_q {
        return Ok(match c_class {
            CClass::Zero => vec![
                (base.clone(), flat_mult),
                (&base + &h, halve((&qb - 1) * (pw(q, r - 1) + &s))?),
                (&base - &h, halve((&qb - 1) * (pw(q, r - 1) - &s))?),
            ],
            _ => vec![
                (base.clone(), flat_mult),
                (&base + &h, halve(pw(q, r) - pw(q, r - 1) - &s)?),
                (&base - &h, halve(pw(q, r) - pw(q, r - 1) + &s)?),
            ],
        });
    }

    let tau = BigInt::from(rt.type_tag.sign().expect("typed"));
    let plus = &base + &tau * &h;
    let minus = &base - &tau * &h;
    let half_q1 = halve(&qb - 1)?;
    let spread = half_q1.clone() * pw(q, r - 1);
    Ok(match c_class {
        CClass::Zero => vec![
            (base.clone(), flat_mult),
            (plus, &half_q1 * (pw(q, r - 1) + &tau * &s)),
            (minus, &half_q1 * (pw(q, r - 1) - &tau * &s)),
        ],
        // The tau term sits outside the (q-1)/2 factor; the other grouping
        // breaks the population total for q > 3.
        CClass::Square => vec![
            (base.clone(), flat_mult + &tau * &s),
            (plus, &spread - &tau * &s),
            (minus, spread),
        ],
        CClass::NonSquare => vec![
            (base.clone(), flat_mult - &tau * &s),
            (plus, spread.clone()),
            (minus, spread + &tau * &s),
        ],
        CClass::AnyNonzero => unreachable!("rejected by validation"),
    })
}

fn spectrum_formula(query: &CosetQuery) -> Result<SpectrumMultiset> {
    let rows = per_constant_rows(query.q, query.m, query.class, query.c_class)?;
    let size = query.c_class.size(query.q);
    let ms = collect_rows(rows, size)?;
    check_population(&ms, BigInt::from(size) * pw(query.q, query.m))?;
    Ok(ms)
}

/// Closed-form multiset for a single constant `c` of the query's class.
pub fn spectrum_per_constant(query: &CosetQuery) -> Result<SpectrumMultiset> {
    query.validate()?;
    let ms = collect_rows(per_constant_rows(query.q, query.m, query.class, query.c_class)?, 1)?;
    check_population(&ms, pw(query.q, query.m))?;
    Ok(ms)
}

/// Closed-form multiset for even `q`.
pub fn spectrum_even_q(query: &CosetQuery) -> Result<SpectrumMultiset> {
    if !query.validate()? {
        return Err(Error::OddCharacteristic);
    }
    spectrum_formula(query)
}

/// Closed-form multiset for odd `q`.
pub fn spectrum_odd_q(query: &CosetQuery) -> Result<SpectrumMultiset> {
    if query.validate()? {
        return Err(Error::EvenCharacteristic);
    }
    spectrum_formula(query)
}

/// Closed-form multiset for either parity.
pub fn spectrum_closed_form(query: &CosetQuery) -> Result<SpectrumMultiset> {
    query.validate()?;
    spectrum_formula(query)
}

/// Zero counts over every `Q + L + c`, `L` linear and `c` any constant.
pub fn spectrum_merged(q: u64, m: usize, rt: RankType) -> Result<SpectrumMultiset> {
    check_params(q, m, rt)?;
    let r = rt.rank;
    let qb = BigInt::from(q);
    let base = pw(q, m - 1);
    let rows = if r % 2 == 1 {
        let h = pw(q, m - (r + 1) / 2);
        let each = halve((&qb - 1) * pw(q, r))?;
        vec![
            (base.clone(), pw(q, m + 1) - pw(q, r + 1) + pw(q, r)),
            (&base + &h, each.clone()),
            (&base - &h, each),
        ]
    } else {
        // Rank 0 fits the even-rank rows with tau = +1.
        let tau = BigInt::from(rt.type_tag.sign().expect("typed"));
        let g = pw(q, m - (r + 2) / 2);
        vec![
            (base.clone(), pw(q, m + 1) - pw(q, r + 1)),
            (&base + &tau * &g * (&qb - 1), pw(q, r)),
            (&base - &tau * &g, (&qb - 1) * pw(q, r)),
        ]
    };
    let ms = collect_rows(rows, 1)?;
    check_population(&ms, pw(q, m + 1))?;
    Ok(ms)
}

/// Hamming weights of the coset `Q + RM_q(1, m)`, `q > 2`.
pub fn coset_weight_multiset(q: u64, m: usize, rt: RankType) -> Result<SpectrumMultiset> {
    if q == 2 {
        return Err(Error::UnsupportedForBinary);
    }
    let zeros = spectrum_merged(q, m, rt)?;
    zeros.complemented(&num_traits::pow(BigUint::from(q), m))
}

fn oracle_constants(form: &QuadraticForm, c_class: CClass) -> Result<Vec<Elem>> {
    let f = &**form.field();
    let elems = f.elements().skip(1);
    Ok(match c_class {
        CClass::Zero => vec![Elem::ZERO],
        CClass::AnyNonzero => elems.collect(),
        CClass::Square | CClass::NonSquare => {
            if f.is_even() {
                return Err(Error::InconsistentQuery(
                    "square/nonsquare classes need odd q".into(),
                ));
            }
            let want = if c_class == CClass::Square { 1 } else { -1 };
            elems
                .filter(|&c| f.quadratic_character(c).unwrap() == want)
                .collect()
        }
    })
}

fn oracle_over(form: &QuadraticForm, constants: &[Elem], budget: u128) -> Result<SpectrumMultiset> {
    let f = &**form.field();
    let q = f.order() as u64;
    let m = form.m();
    let points = (q as u128).pow(m as u32);
    let needed = points * points * constants.len() as u128;
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let points = points as u64;
    let vectors: Vec<Vec<Elem>> = (0..points).map(|i| vector_from_index(i, q, m)).collect();
    let q_values: Vec<Elem> = vectors.iter().map(|x| form.eval_unchecked(x)).collect();
    let targets: Vec<usize> = constants.iter().map(|&c| f.neg(c).0 as usize).collect();

    let tally = (0..points)
        .into_par_iter()
        .fold(BTreeMap::<u64, u64>::new, |mut acc, l_idx| {
            let l = &vectors[l_idx as usize];
            let mut hist = vec![0u64; q as usize];
            for (x, &qx) in vectors.iter().zip(&q_values) {
                let lx = l
                    .iter()
                    .zip(x)
                    .fold(Elem::ZERO, |s, (&a, &b)| f.add(s, f.mul(a, b)));
                hist[f.add(qx, lx).0 as usize] += 1;
            }
            // Q + L + c vanishes exactly where Q + L = -c
            for &t in &targets {
                *acc.entry(hist[t]).or_default() += 1;
            }
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        });

    let mut out = SpectrumMultiset::new();
    for (v, k) in tally {
        out.add(BigUint::from(v), BigUint::from(k));
    }
    Ok(out)
}

/// Brute force: counts the zeros of `Q + L + c` for every linear `L` and
/// every `c` in the class, by evaluation at every point.
pub fn spectrum_oracle(form: &QuadraticForm, c_class: CClass, budget: u128) -> Result<SpectrumMultiset> {
    let constants = oracle_constants(form, c_class)?;
    oracle_over(form, &constants, budget)
}

/// Brute force for one fixed constant `c`.
pub fn spectrum_oracle_single(form: &QuadraticForm, c: Elem, budget: u128) -> Result<SpectrumMultiset> {
    oracle_over(form, &[c], budget)
}

/// Brute force over every constant of the field.
pub fn spectrum_oracle_merged(form: &QuadraticForm, budget: u128) -> Result<SpectrumMultiset> {
    let constants: Vec<Elem> = form.field().elements().collect();
    oracle_over(form, &constants, budget)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::field::FiniteField;
    use crate::forms::canonical_form;

    fn ms(pairs: &[(u64, u64)]) -> SpectrumMultiset {
        let mut out = SpectrumMultiset::new();
        for &(v, k) in pairs {
            out.add(BigUint::from(v), BigUint::from(k));
        }
        out
    }

    fn rt(r: usize, t: TypeTag) -> RankType {
        RankType::new(r, t)
    }

    #[test]
    fn even_q_examples() {
        let q = CosetQuery::new(2, 3, rt(3, TypeTag::Untyped), CClass::Zero);
        assert_eq!(spectrum_even_q(&q).unwrap(), ms(&[(2, 1), (4, 4), (6, 3)]));
        let q = CosetQuery::new(2, 2, rt(2, TypeTag::Plus), CClass::Zero);
        assert_eq!(spectrum_even_q(&q).unwrap(), ms(&[(1, 1), (3, 3)]));
        let q = CosetQuery::new(4, 2, rt(0, TypeTag::Plus), CClass::Zero);
        assert_eq!(spectrum_even_q(&q).unwrap(), ms(&[(4, 15), (16, 1)]));
        let q = CosetQuery::new(3, 2, rt(0, TypeTag::Plus), CClass::Zero);
        assert_eq!(spectrum_even_q(&q).unwrap_err(), Error::OddCharacteristic);
    }

    #[test]
    fn odd_q_examples() {
        let q = CosetQuery::new(3, 2, rt(1, TypeTag::Plus), CClass::Zero);
        assert_eq!(spectrum_odd_q(&q).unwrap(), ms(&[(3, 7), (6, 2)]));
        let q = CosetQuery::new(3, 2, rt(1, TypeTag::Plus), CClass::Square);
        assert_eq!(spectrum_odd_q(&q).unwrap(), ms(&[(0, 1), (3, 8)]));
        let q = CosetQuery::new(3, 2, rt(2, TypeTag::Minus), CClass::Zero);
        let formula = spectrum_odd_q(&q).unwrap();
        let f3 = Arc::new(FiniteField::with_order(3).unwrap());
        let form = canonical_form(f3, 2, rt(2, TypeTag::Minus)).unwrap();
        assert_eq!(formula, spectrum_oracle(&form, CClass::Zero, DEFAULT_SPECTRUM_BUDGET).unwrap());
        assert_eq!(formula, ms(&[(1, 1), (4, 8)]));
    }

    #[test]
    fn query_validation() {
        let bad = CosetQuery::new(4, 2, rt(1, TypeTag::Untyped), CClass::Square);
        assert!(matches!(bad.validate(), Err(Error::InconsistentQuery(_))));
        let bad = CosetQuery::new(3, 2, rt(2, TypeTag::Plus), CClass::NonSquare);
        assert!(matches!(bad.validate(), Err(Error::InconsistentQuery(_))));
        let bad = CosetQuery::new(3, 2, rt(1, TypeTag::Plus), CClass::AnyNonzero);
        assert!(matches!(bad.validate(), Err(Error::InconsistentQuery(_))));
        let bad = CosetQuery::new(3, 2, rt(1, TypeTag::Untyped), CClass::Zero);
        assert!(matches!(bad.validate(), Err(Error::InconsistentRankType(_))));
    }

    #[test]
    fn merged_examples() {
        assert_eq!(
            spectrum_merged(3, 2, rt(1, TypeTag::Plus)).unwrap(),
            ms(&[(0, 3), (3, 21), (6, 3)])
        );
        assert_eq!(
            spectrum_merged(2, 2, rt(2, TypeTag::Plus)).unwrap(),
            ms(&[(1, 4), (3, 4)])
        );
        assert_eq!(
            spectrum_merged(5, 3, rt(3, TypeTag::Plus)).unwrap(),
            spectrum_merged(5, 3, rt(3, TypeTag::Minus)).unwrap()
        );
    }

    #[test]
    fn coset_weights() {
        assert_eq!(
            coset_weight_multiset(3, 2, rt(1, TypeTag::Plus)).unwrap(),
            ms(&[(3, 3), (6, 21), (9, 3)])
        );
        // rank 0: the coset is RM_3(1,2) itself
        assert_eq!(
            coset_weight_multiset(3, 2, rt(0, TypeTag::Plus)).unwrap(),
            ms(&[(0, 1), (6, 24), (9, 2)])
        );
        assert_eq!(
            coset_weight_multiset(2, 3, rt(2, TypeTag::Plus)).unwrap_err(),
            Error::UnsupportedForBinary
        );
    }

    #[test]
    fn oracle_zero_form() {
        let f = Arc::new(FiniteField::with_order(3).unwrap());
        let z = QuadraticForm::zero(f, 2);
        assert_eq!(
            spectrum_oracle(&z, CClass::Zero, DEFAULT_SPECTRUM_BUDGET).unwrap(),
            ms(&[(3, 8), (9, 1)])
        );
        assert!(matches!(
            spectrum_oracle(&z, CClass::AnyNonzero, 100),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn json_layout() {
        let m = spectrum_merged(3, 2, rt(1, TypeTag::Plus)).unwrap();
        let v = m.to_json(3, 2, rt(1, TypeTag::Plus), "all");
        assert_eq!(v["population"], "27");
        assert_eq!(v["type"], "plus");
        assert_eq!(v["entries"][0]["value"], "0");
        assert_eq!(v["entries"][0]["multiplicity"], "3");
    }
}
