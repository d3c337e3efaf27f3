//! Counts of quadratic forms on GF(q)^m by rank and type: the closed
//! product formulas and an exhaustive classifier used as their oracle.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{prime_power, Elem, FiniteField};
use crate::forms::{QuadraticForm, RankType, TypeTag, DEFAULT_POINT_BUDGET};

/// Default cap on the number of forms the exhaustive census visits.
pub const DEFAULT_FORM_BUDGET: u128 = 1 << 26;

/// Census key class. Odd-rank counts over odd fields are kept as a single
/// total for both types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CensusClass {
    Plus,
    Minus,
    Untyped,
    OddTotal,
}

impl CensusClass {
    pub fn as_str(self) -> &'static str {
        match self {
            CensusClass::Plus => "plus",
            CensusClass::Minus => "minus",
            CensusClass::Untyped => "untyped",
            CensusClass::OddTotal => "odd_total",
        }
    }

    /// Key under which forms of class `rt` are counted.
    pub fn for_class(rt: RankType, even_q: bool) -> CensusClass {
        match rt.type_tag {
            _ if rt.rank % 2 == 1 && !even_q => CensusClass::OddTotal,
            TypeTag::Plus => CensusClass::Plus,
            TypeTag::Minus => CensusClass::Minus,
            TypeTag::Untyped => CensusClass::Untyped,
        }
    }

    /// A representative type tag for this key (odd totals map to `Plus`).
    pub fn type_tag(self) -> TypeTag {
        match self {
            CensusClass::Plus | CensusClass::OddTotal => TypeTag::Plus,
            CensusClass::Minus => TypeTag::Minus,
            CensusClass::Untyped => TypeTag::Untyped,
        }
    }
}

impl fmt::Display for CensusClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct CensusTable {
    pub q: u64,
    pub m: usize,
    pub entries: BTreeMap<(usize, CensusClass), BigUint>,
    /// Per-type split of the odd-rank totals (odd `q`); only the exhaustive
    /// census fills this in, and no formula is compared against it.
    pub odd_type_split: Option<BTreeMap<RankType, BigUint>>,
}

#[derive(Serialize)]
struct CensusEntryJson {
    rank: usize,
    #[serde(rename = "type")]
    class: CensusClass,
    count: String,
}

#[derive(Serialize)]
struct CensusJson {
    q: u64,
    m: usize,
    entries: Vec<CensusEntryJson>,
}

impl CensusTable {
    pub fn total(&self) -> BigUint {
        self.entries.values().sum()
    }

    pub fn get(&self, rank: usize, class: CensusClass) -> Option<&BigUint> {
        self.entries.get(&(rank, class))
    }

    /// Entrywise equality of the counts (the odd-rank split is ignored).
    pub fn same_counts(&self, other: &CensusTable) -> bool {
        self.q == other.q && self.m == other.m && self.entries == other.entries
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = CensusJson {
            q: self.q,
            m: self.m,
            entries: self
                .entries
                .iter()
                .map(|(&(rank, class), count)| CensusEntryJson {
                    rank,
                    class,
                    count: count.to_string(),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("census serializes")
    }
}

impl fmt::Display for CensusTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "q={} m={}", self.q, self.m)?;
        for ((rank, class), count) in &self.entries {
            writeln!(f, "rank {rank} {class}: {count}")?;
        }
        write!(f, "total: {}", self.total())
    }
}

fn check_q(q: u64) -> Result<bool> {
    let (p, _) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    Ok(p == 2)
}

fn pow(q: u64, e: usize) -> BigUint {
    num_traits::pow(BigUint::from(q), e)
}

/// `prod_{i=lo}^{hi} (q^i - 1)`, empty product 1.
fn falling_product(q: u64, lo: usize, hi: usize) -> BigUint {
    (lo..=hi).map(|i| pow(q, i) - 1u32).product()
}

/// `prod_{i=1}^{j} (q^(2i) - 1)`.
fn even_power_product(q: u64, j: usize) -> BigUint {
    (1..=j).map(|i| pow(q, 2 * i) - 1u32).product()
}

fn exact_div(num: BigUint, den: &BigUint, what: &str) -> Result<BigUint> {
    let (quot, rem) = num.div_rem(den);
    if rem.is_zero() {
        Ok(quot)
    } else {
        Err(Error::InexactDivision(what.to_string()))
    }
}

/// Number of forms of odd rank `r` on GF(q)^m (both types together).
pub fn count_odd_rank(q: u64, m: usize, r: usize) -> Result<BigUint> {
    check_q(q)?;
    if r % 2 == 0 || r == 0 || r > m {
        return Err(Error::OutOfRange(format!("odd rank {r} with m = {m}")));
    }
    if r == 1 {
        return Ok(pow(q, m) - 1u32);
    }
    let j = (r - 1) / 2;
    let num = pow(q, j * j + j) * falling_product(q, m - 2 * j, m);
    exact_div(num, &even_power_product(q, j), &format!("v_{r}(q={q}, m={m})"))
}

/// Number of forms of even rank `r >= 2` and type `tau` on GF(q)^m.
pub fn count_even_rank(q: u64, m: usize, r: usize, tau: TypeTag) -> Result<BigUint> {
    check_q(q)?;
    if r % 2 == 1 || r < 2 || r > m {
        return Err(Error::OutOfRange(format!("even rank {r} with m = {m}")));
    }
    let j = r / 2;
    let qj = pow(q, j);
    let factor = match tau {
        TypeTag::Plus => qj + 1u32,
        TypeTag::Minus => qj - 1u32,
        TypeTag::Untyped => {
            return Err(Error::InconsistentRankType(format!(
                "even rank {r} needs a type"
            )))
        }
    };
    let num = pow(q, j * j) * factor * falling_product(q, m - 2 * j + 1, m);
    let den = BigUint::from(2u32) * even_power_product(q, j);
    exact_div(num, &den, &format!("v_({r},{tau})(q={q}, m={m})"))
}

/// Closed-form census of every admissible class.
pub fn census_formula(q: u64, m: usize) -> Result<CensusTable> {
    let even_q = check_q(q)?;
    let mut entries = BTreeMap::new();
    entries.insert((0, CensusClass::Plus), BigUint::one());
    for r in 1..=m {
        if r % 2 == 1 {
            let class = if even_q {
                CensusClass::Untyped
            } else {
                CensusClass::OddTotal
            };
            entries.insert((r, class), count_odd_rank(q, m, r)?);
        } else {
            for tau in [TypeTag::Plus, TypeTag::Minus] {
                let class = CensusClass::for_class(RankType::new(r, tau), even_q);
                entries.insert((r, class), count_even_rank(q, m, r, tau)?);
            }
        }
    }
    Ok(CensusTable {
        q,
        m,
        entries,
        odd_type_split: None,
    })
}

/// Positions `(i, j)`, `i <= j`, of the coefficient table in enumeration order.
pub(crate) fn upper_positions(m: usize) -> Vec<(usize, usize)> {
    (0..m).flat_map(|i| (i..m).map(move |j| (i, j))).collect()
}

/// The form whose upper-triangle entries are the base-q digits of `idx`
/// (first position most significant).
pub fn form_from_index(field: &Arc<FiniteField>, m: usize, idx: u64) -> QuadraticForm {
    let q = field.order() as u64;
    let positions = upper_positions(m);
    let mut rest = idx;
    let mut entries = Vec::with_capacity(positions.len());
    for &(i, j) in positions.iter().rev() {
        entries.push((i, j, Elem((rest % q) as u32)));
        rest /= q;
    }
    QuadraticForm::from_upper(field.clone(), m, &entries).expect("positions are in range")
}

/// Number of forms on GF(q)^m, or `None` past `u128`.
pub fn form_count(q: u64, m: usize) -> Option<u128> {
    (q as u128).checked_pow((m * (m + 1) / 2) as u32)
}

/// Classifies every form on GF(q)^m and tallies the classes.
pub fn census_exhaustive(q: u64, m: usize, budget: u128) -> Result<CensusTable> {
    let field = Arc::new(FiniteField::with_order(q)?);
    let even_q = field.is_even();
    let total = form_count(q, m).unwrap_or(u128::MAX);
    if total > budget {
        return Err(Error::BudgetExceeded {
            needed: total,
            budget,
        });
    }
    let tally = (0..total as u64)
        .into_par_iter()
        .try_fold(BTreeMap::<RankType, u64>::new, |mut acc, idx| {
            let form = form_from_index(&field, m, idx);
            let rt = form.classify_with_budget(DEFAULT_POINT_BUDGET)?;
            *acc.entry(rt).or_default() += 1;
            Ok::<_, Error>(acc)
        })
        .try_reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            Ok(a)
        })?;

    let mut entries: BTreeMap<(usize, CensusClass), BigUint> = BTreeMap::new();
    let mut split = BTreeMap::new();
    for (rt, count) in tally {
        let class = CensusClass::for_class(rt, even_q);
        *entries.entry((rt.rank, class)).or_default() += count;
        if class == CensusClass::OddTotal {
            split.insert(rt, BigUint::from(count));
        }
    }
    Ok(CensusTable {
        q,
        m,
        entries,
        odd_type_split: (!even_q).then_some(split),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn odd_rank_counts() {
        assert_eq!(count_odd_rank(5, 3, 1).unwrap(), big(124));
        assert_eq!(count_odd_rank(2, 3, 3).unwrap(), big(28));
        assert_eq!(count_odd_rank(3, 3, 3).unwrap(), big(468));
        assert!(matches!(count_odd_rank(3, 3, 2), Err(Error::OutOfRange(_))));
        assert!(matches!(count_odd_rank(3, 2, 3), Err(Error::OutOfRange(_))));
        assert!(matches!(count_odd_rank(6, 2, 1), Err(Error::NotPrimePower(6))));
    }

    #[test]
    fn even_rank_counts() {
        assert_eq!(count_even_rank(2, 2, 2, TypeTag::Plus).unwrap(), big(3));
        assert_eq!(count_even_rank(2, 2, 2, TypeTag::Minus).unwrap(), big(1));
        assert_eq!(count_even_rank(3, 2, 2, TypeTag::Plus).unwrap(), big(12));
        assert!(matches!(
            count_even_rank(3, 2, 1, TypeTag::Plus),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn formula_tables() {
        let t = census_formula(7, 0).unwrap();
        assert_eq!(t.entries.len(), 1);
        assert_eq!(t.get(0, CensusClass::Plus), Some(&big(1)));

        let t = census_formula(2, 2).unwrap();
        assert_eq!(t.get(1, CensusClass::Untyped), Some(&big(3)));
        assert_eq!(t.get(2, CensusClass::Plus), Some(&big(3)));
        assert_eq!(t.get(2, CensusClass::Minus), Some(&big(1)));
        assert_eq!(t.total(), big(8));

        let t = census_formula(3, 2).unwrap();
        assert_eq!(t.get(1, CensusClass::OddTotal), Some(&big(8)));
        assert_eq!(t.get(2, CensusClass::Plus), Some(&big(12)));
        assert_eq!(t.get(2, CensusClass::Minus), Some(&big(6)));
        assert_eq!(t.total(), big(27));
    }

    #[test]
    fn exhaustive_small() {
        for (q, m) in [(2, 2), (3, 2), (2, 3), (3, 1), (2, 0)] {
            let ex = census_exhaustive(q, m, DEFAULT_FORM_BUDGET).unwrap();
            let fo = census_formula(q, m).unwrap();
            assert!(ex.same_counts(&fo), "q={q} m={m}: {ex} vs {fo}");
        }
        let ex = census_exhaustive(2, 3, DEFAULT_FORM_BUDGET).unwrap();
        assert_eq!(ex.get(3, CensusClass::Untyped), Some(&big(28)));
    }

    #[test]
    fn exhaustive_budget() {
        assert!(matches!(
            census_exhaustive(3, 3, 100),
            Err(Error::BudgetExceeded { needed: 729, budget: 100 })
        ));
    }

    #[test]
    fn odd_split_sums_to_total() {
        let ex = census_exhaustive(3, 3, DEFAULT_FORM_BUDGET).unwrap();
        let split = ex.odd_type_split.as_ref().unwrap();
        for r in [1usize, 3] {
            let s: BigUint = split
                .iter()
                .filter(|(rt, _)| rt.rank == r)
                .map(|(_, c)| c.clone())
                .sum();
            assert_eq!(Some(&s), ex.get(r, CensusClass::OddTotal));
        }
    }

    #[test]
    fn json_schema() {
        let v = census_formula(3, 2).unwrap().to_json();
        assert_eq!(v["q"], 3);
        assert_eq!(v["m"], 2);
        let entries = v["entries"].as_array().unwrap();
        assert_eq!(entries.len(), 4);
        assert_eq!(entries[1]["type"], "odd_total");
        assert_eq!(entries[1]["count"], "8");
    }
}
