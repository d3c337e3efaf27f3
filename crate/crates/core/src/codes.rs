//! Weight distributions of the second-order Reed-Muller code `RM_q(2, m)`,
//! its homogeneous variant `HRM_q(2, m)` and the projective code
//! `PRM_q(2, m)`.
//!
//! Three independent paths are provided: closed-form tables driven by the
//! form census, assembly from coset weight multisets (`q > 2`), and brute
//! force enumeration of every codeword.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::census::{census_formula, count_even_rank, count_odd_rank};
use crate::error::{Error, Result};
use crate::field::{prime_power, Elem, FiniteField};
use crate::forms::{vector_from_index, RankType, TypeTag};
use crate::spectra::coset_weight_multiset;

/// Default cap on `q^k * n` symbol evaluations for [`brute_force_distribution`].
pub const DEFAULT_CODEWORD_BUDGET: u128 = 1 << 34;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeFamily {
    Rm2,
    Hrm2,
    Prm2,
}

impl CodeFamily {
    pub const ALL: [CodeFamily; 3] = [CodeFamily::Rm2, CodeFamily::Hrm2, CodeFamily::Prm2];

    pub fn as_str(self) -> &'static str {
        match self {
            CodeFamily::Rm2 => "rm2",
            CodeFamily::Hrm2 => "hrm2",
            CodeFamily::Prm2 => "prm2",
        }
    }
}

impl fmt::Display for CodeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CodeFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rm2" | "rm" => Ok(CodeFamily::Rm2),
            "hrm2" | "hrm" => Ok(CodeFamily::Hrm2),
            "prm2" | "prm" => Ok(CodeFamily::Prm2),
            other => Err(Error::Parse(format!("unknown code family '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParameters {
    pub n: u64,
    pub k: u64,
    pub d: u64,
}

impl fmt::Display for CodeParameters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.n, self.k, self.d)
    }
}

fn unsupported(family: CodeFamily, q: u64, m: usize, why: &str) -> Error {
    Error::UnsupportedParameters(format!("{family} with q = {q}, m = {m}: {why}"))
}

fn checked_pow(q: u64, e: usize) -> Option<u64> {
    q.checked_pow(u32::try_from(e).ok()?)
}

/// `[n, k, d]` of the code.
pub fn code_parameters(family: CodeFamily, q: u64, m: usize) -> Result<CodeParameters> {
    prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if m == 0 {
        return Err(unsupported(family, q, m, "m must be at least 1"));
    }
    let overflow = || unsupported(family, q, m, "length does not fit in 64 bits");
    let mm = m as u64;
    let qm = checked_pow(q, m).ok_or_else(overflow)?;
    let params = match family {
        CodeFamily::Rm2 if q == 2 => {
            if m < 2 {
                return Err(unsupported(family, q, m, "binary codes need m >= 2"));
            }
            CodeParameters {
                n: qm,
                k: (mm * mm + mm + 2) / 2,
                d: qm / 4,
            }
        }
        CodeFamily::Rm2 => CodeParameters {
            n: qm,
            k: (mm * mm + 3 * mm + 2) / 2,
            d: (q - 2) * (qm / q),
        },
        CodeFamily::Hrm2 if m == 1 => CodeParameters {
            n: q,
            k: 1,
            // q = 2 gives the single word x, of weight 1
            d: q - 1,
        },
        CodeFamily::Hrm2 => CodeParameters {
            n: qm,
            k: mm * (mm + 1) / 2,
            d: (q - 1) * (q - 1) * (qm / (q * q)),
        },
        CodeFamily::Prm2 => {
            let qm1 = qm.checked_mul(q).ok_or_else(overflow)?;
            CodeParameters {
                n: (qm1 - 1) / (q - 1),
                k: (mm + 1) * (mm + 2) / 2,
                d: (q - 1) * (qm / q),
            }
        }
    };
    Ok(params)
}

/// Exact weight distribution of one code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDistribution {
    pub family: CodeFamily,
    pub q: u64,
    pub m: usize,
    pub params: CodeParameters,
    entries: BTreeMap<u64, BigUint>,
}

impl WeightDistribution {
    pub fn new(family: CodeFamily, q: u64, m: usize, params: CodeParameters) -> Self {
        WeightDistribution {
            family,
            q,
            m,
            params,
            entries: BTreeMap::new(),
        }
    }

    /// Adds `freq` codewords of weight `w`; zero frequencies are dropped.
    pub fn add(&mut self, w: u64, freq: BigUint) {
        if freq.is_zero() {
            return;
        }
        *self.entries.entry(w).or_default() += freq;
    }

    pub fn entries(&self) -> &BTreeMap<u64, BigUint> {
        &self.entries
    }

    pub fn frequency(&self, w: u64) -> BigUint {
        self.entries.get(&w).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.entries.values().sum()
    }

    pub fn min_positive_weight(&self) -> Option<u64> {
        self.entries.keys().copied().find(|&w| w > 0)
    }

    /// Checks `A_0 = 1`, `sum A_w = q^k`, weights within `n` and the
    /// minimum distance.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |what: String| Err(Error::Inconsistent(format!("{} q={} m={}: {what}", self.family, self.q, self.m)));
        if self.frequency(0) != BigUint::one() {
            return fail(format!("A_0 = {}", self.frequency(0)));
        }
        let expected = num_traits::pow(BigUint::from(self.q), self.params.k as usize);
        if self.total() != expected {
            return fail(format!("total {} differs from q^k = {expected}", self.total()));
        }
        if let Some((&w, _)) = self.entries.last_key_value() {
            if w > self.params.n {
                return fail(format!("weight {w} exceeds n = {}", self.params.n));
            }
        }
        if self.min_positive_weight() != Some(self.params.d) {
            return fail(format!(
                "minimum weight {:?} differs from d = {}",
                self.min_positive_weight(),
                self.params.d
            ));
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Row {
            weight: u64,
            frequency: String,
        }
        #[derive(Serialize)]
        struct Doc {
            family: CodeFamily,
            q: u64,
            m: usize,
            n: u64,
            k: u64,
            d: u64,
            distribution: Vec<Row>,
        }
        let doc = Doc {
            family: self.family,
            q: self.q,
            m: self.m,
            n: self.params.n,
            k: self.params.k,
            d: self.params.d,
            distribution: self
                .entries
                .iter()
                .map(|(&weight, f)| Row {
                    weight,
                    frequency: f.to_string(),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("distribution serializes")
    }
}

impl fmt::Display for WeightDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&weight_enumerator_text(self))
    }
}

/// `1 + A*Z^w + ... + Z^n`, ascending weights.
pub fn weight_enumerator_text(wd: &WeightDistribution) -> String {
    enumerator_text(wd.entries())
}

/// Enumerator text for a bare weight map.
pub fn enumerator_text(entries: &BTreeMap<u64, BigUint>) -> String {
    let terms: Vec<String> = entries
        .iter()
        .filter(|(_, a)| !a.is_zero())
        .map(|(&w, a)| match (w, a.is_one()) {
            (0, _) => a.to_string(),
            (_, true) => format!("Z^{w}"),
            (_, false) => format!("{a}*Z^{w}"),
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

fn pw(q: u64, e: usize) -> BigUint {
    num_traits::pow(BigUint::from(q), e)
}

fn weight_u64(x: &BigInt) -> Result<u64> {
    x.to_u64()
        .ok_or_else(|| Error::Inconsistent(format!("weight {x} is negative or too large")))
}

/// `prod_{i=lo}^{hi} (q^i - 1) / prod_{i=1}^{j} (q^{2i} - 1)`, exactly.
fn product_ratio(q: u64, lo: usize, hi: usize, j: usize) -> Result<BigUint> {
    let num: BigUint = (lo..=hi).map(|i| pw(q, i) - 1u32).product();
    let den: BigUint = (1..=j).map(|i| pw(q, 2 * i) - 1u32).product();
    let (quo, rem) = num.div_rem(&den);
    if !rem.is_zero() {
        return Err(Error::InexactDivision(format!(
            "product ratio q={q} i={lo}..{hi} j={j}"
        )));
    }
    Ok(quo)
}

/// Odd-rank count with the convention `v_r = 0` for `r > m`.
fn v_odd(q: u64, m: usize, r: usize) -> Result<BigUint> {
    if r > m {
        Ok(BigUint::zero())
    } else {
        count_odd_rank(q, m, r)
    }
}

fn v_even(q: u64, m: usize, r: usize, tau: TypeTag) -> Result<BigUint> {
    if r > m {
        Ok(BigUint::zero())
    } else {
        count_even_rank(q, m, r, tau)
    }
}

const TAUS: [(i64, TypeTag); 2] = [(1, TypeTag::Plus), (-1, TypeTag::Minus)];

/// Closed-form distribution of `RM_q(2, m)`.
pub fn rm2_distribution(q: u64, m: usize) -> Result<WeightDistribution> {
    let params = code_parameters(CodeFamily::Rm2, q, m)?;
    let mut wd = WeightDistribution::new(CodeFamily::Rm2, q, m, params);
    if q == 2 {
        binary_rows(&mut wd)?;
    } else {
        let (rows, residual) = rm2_rows(q, m)?;
        for (w, a) in rows {
            wd.add(w, a);
        }
        wd.add(pw(q, m - 1).to_u64().unwrap() * (q - 1), residual);
    }
    wd.check_invariants()?;
    Ok(wd)
}

fn binary_rows(wd: &mut WeightDistribution) -> Result<()> {
    let m = wd.m;
    let half = 1u64 << (m - 1);
    wd.add(0, BigUint::one());
    wd.add(1u64 << m, BigUint::one());
    let mut mid = pw(2, m) - 1u32;
    for j in 1..=(m - 1) / 2 {
        mid += pw(2, j * j + j) * product_ratio(2, m - 2 * j, m, j)?;
    }
    wd.add(half, mid * 2u32);
    for j in 1..=m / 2 {
        let a = pw(2, j * j + j) * product_ratio(2, m - 2 * j + 1, m, j)?;
        let shift = 1u64 << (m - j - 1);
        wd.add(half + shift, a.clone());
        wd.add(half - shift, a);
    }
    Ok(())
}

/// Explicit residual frequency at weight `q^m - q^(m-1)` for `q > 2` and
/// the same quantity recomputed as `q^k` minus every other row.
pub fn rm2_residual(q: u64, m: usize) -> Result<(BigUint, BigUint)> {
    code_parameters(CodeFamily::Rm2, q, m)?;
    if q == 2 {
        return Err(Error::UnsupportedForBinary);
    }
    let k = (m * m + 3 * m + 2) / 2;
    let mut explicit = BigInt::from(pw(q, k));
    for j in 1..=m / 2 {
        let pair = v_even(q, m, 2 * j, TypeTag::Plus)? + v_even(q, m, 2 * j, TypeTag::Minus)?;
        explicit -= BigInt::from(pw(q, 2 * j + 1) * pair);
    }
    for j in 0..=m / 2 {
        explicit -= BigInt::from(pw(q, 2 * j + 1) * (q - 1) * v_odd(q, m, 2 * j + 1)?);
    }
    explicit -= BigInt::from(q);
    if explicit.is_negative() {
        return Err(Error::Inconsistent(format!(
            "negative residual frequency {explicit} for q={q} m={m}"
        )));
    }
    let others: BigUint = rm2_other_rows(q, m)?.into_iter().map(|(_, a)| a).sum();
    let total = pw(q, k);
    if others > total {
        return Err(Error::Inconsistent(format!(
            "rows exceed q^k for q={q} m={m}"
        )));
    }
    Ok((explicit.to_biguint().unwrap(), total - others))
}

fn rm2_rows(q: u64, m: usize) -> Result<(Vec<(u64, BigUint)>, BigUint)> {
    let (explicit, complement) = rm2_residual(q, m)?;
    if explicit != complement {
        return Err(Error::Inconsistent(format!(
            "residual row for q={q} m={m}: table gives {explicit}, complement gives {complement}"
        )));
    }
    Ok((rm2_other_rows(q, m)?, explicit))
}

fn rm2_other_rows(q: u64, m: usize) -> Result<Vec<(u64, BigUint)>> {
    let qm = BigInt::from(pw(q, m));
    let qm1 = BigInt::from(pw(q, m - 1));
    let qb = BigInt::from(q);
    let mut rows = vec![(0u64, BigUint::one())];
    for j in 1..=m / 2 {
        let ratio = product_ratio(q, m - 2 * j + 1, m, j)?;
        let step = BigInt::from(pw(q, m - j - 1));
        let v_odd_j = v_odd(q, m, 2 * j + 1)?;
        for (tau, tag) in TAUS {
            let t = BigInt::from(tau);
            let w1 = weight_u64(&(&qm - &qm1 - &t * &step * (&qb - 1)))?;
            let num = pw(q, j * j + 2 * j) * (BigInt::from(pw(q, j)) + tau).to_biguint().unwrap() * &ratio;
            rows.push((w1, halve(num)?));

            let w2 = weight_u64(&(&qm - &qm1 + &t * &step))?;
            let even_part = pw(q, 2 * j) * (q - 1) * v_even(q, m, 2 * j, tag)?;
            let odd_part = halve(pw(q, 2 * j + 1) * (q - 1) * &v_odd_j)?;
            rows.push((w2, even_part + odd_part));
        }
    }
    let spread = halve(BigUint::from(q) * (q - 1) * (pw(q, m) - 1u32))?;
    rows.push((weight_u64(&(&qm - &qm1 * 2))?, spread.clone()));
    rows.push((weight_u64(&qm)?, spread + (q - 1)));
    Ok(rows)
}

fn halve(x: BigUint) -> Result<BigUint> {
    let (h, r) = x.div_rem(&BigUint::from(2u32));
    if r.is_zero() {
        Ok(h)
    } else {
        Err(Error::InexactDivision(format!("{x} / 2")))
    }
}

/// Closed-form distribution of `HRM_q(2, m)`.
pub fn hrm2_distribution(q: u64, m: usize) -> Result<WeightDistribution> {
    let params = code_parameters(CodeFamily::Hrm2, q, m)?;
    let mut wd = WeightDistribution::new(CodeFamily::Hrm2, q, m, params);
    let qm = pw(q, m);
    let qm1 = pw(q, m - 1);
    wd.add(0, BigUint::one());
    let mut flat = &qm - 1u32;
    for j in 1..=(m - 1) / 2 {
        flat += v_odd(q, m, 2 * j + 1)?;
    }
    let base = (&qm - &qm1).to_u64().unwrap();
    wd.add(base, flat);
    for j in 1..=m / 2 {
        let shift = pw(q, m - j - 1).to_u64().unwrap();
        wd.add(base - shift * (q - 1), v_even(q, m, 2 * j, TypeTag::Plus)?);
        wd.add(base + shift * (q - 1), v_even(q, m, 2 * j, TypeTag::Minus)?);
    }
    wd.check_invariants()?;
    Ok(wd)
}

/// Closed-form distribution of `PRM_q(2, m)`, cross-checked against
/// `HRM_q(2, m + 1)` with every weight divided by `q - 1`.
pub fn prm2_distribution(q: u64, m: usize) -> Result<WeightDistribution> {
    let params = code_parameters(CodeFamily::Prm2, q, m)?;
    let mut wd = WeightDistribution::new(CodeFamily::Prm2, q, m, params);
    let qm = pw(q, m).to_u64().unwrap();
    wd.add(0, BigUint::one());
    let mut flat = pw(q, m + 1) - 1u32;
    for j in 1..=m / 2 {
        flat += pw(q, j * j + j) * product_ratio(q, m - 2 * j + 1, m + 1, j)?;
    }
    wd.add(qm, flat);
    for j in 1..=(m + 1) / 2 {
        let ratio = product_ratio(q, m + 2 - 2 * j, m + 1, j)?;
        let shift = pw(q, m - j).to_u64().unwrap();
        let qj = pw(q, j);
        let scale = pw(q, j * j);
        wd.add(qm - shift, halve(&scale * (&qj + 1u32) * &ratio)?);
        wd.add(qm + shift, halve(&scale * (&qj - 1u32) * &ratio)?);
    }
    wd.check_invariants()?;

    let scaled = prm_from_hrm(&hrm2_distribution(q, m + 1)?, params, m)?;
    if scaled.entries != wd.entries {
        return Err(Error::Inconsistent(format!(
            "PRM table for q={q} m={m} disagrees with scaled HRM distribution"
        )));
    }
    Ok(wd)
}

/// Divides every weight of an `HRM_q(2, m + 1)` distribution by `q - 1`.
pub fn prm_from_hrm(hrm: &WeightDistribution, params: CodeParameters, m: usize) -> Result<WeightDistribution> {
    let divisor = hrm.q - 1;
    let mut out = WeightDistribution::new(CodeFamily::Prm2, hrm.q, m, params);
    for (&w, a) in hrm.entries() {
        if w % divisor != 0 {
            return Err(Error::NonDivisibleWeight { weight: w, divisor });
        }
        out.add(w / divisor, a.clone());
    }
    Ok(out)
}

/// `RM_q(2, m)` for `q > 2` as the sum over form classes of the class count
/// times the coset weight multiset.
pub fn coset_assembled_distribution(q: u64, m: usize) -> Result<WeightDistribution> {
    if q == 2 {
        return Err(Error::UnsupportedParameters(
            "coset assembly needs q > 2; binary codes use the table path".into(),
        ));
    }
    let params = code_parameters(CodeFamily::Rm2, q, m)?;
    let mut wd = WeightDistribution::new(CodeFamily::Rm2, q, m, params);
    let census = census_formula(q, m)?;
    for (&(rank, class), count) in &census.entries {
        let multiset = coset_weight_multiset(q, m, RankType::new(rank, class.type_tag()))?;
        for (w, mult) in multiset.entries() {
            let w = w
                .to_u64()
                .ok_or_else(|| Error::Inconsistent(format!("weight {w} too large")))?;
            wd.add(w, mult * count);
        }
    }
    wd.check_invariants()?;
    Ok(wd)
}

/// Ordered evaluation points of a code.
#[derive(Debug, Clone)]
pub struct EvaluationDomain {
    pub field: Arc<FiniteField>,
    /// Number of variables of the evaluated polynomials.
    pub vars: usize,
    pub points: Vec<Vec<Elem>>,
}

impl EvaluationDomain {
    /// All of GF(q)^m in index order; the zero vector comes first.
    pub fn affine(field: Arc<FiniteField>, m: usize) -> Self {
        let q = field.order() as u64;
        let points = (0..q.pow(m as u32)).map(|i| vector_from_index(i, q, m)).collect();
        EvaluationDomain {
            field,
            vars: m,
            points,
        }
    }

    /// Representatives of the points of PG(m, q): nonzero vectors of
    /// GF(q)^(m+1) whose first nonzero coordinate is 1, in index order.
    pub fn projective(field: Arc<FiniteField>, m: usize) -> Self {
        let q = field.order() as u64;
        let points = (1..q.pow(m as u32 + 1))
            .map(|i| vector_from_index(i, q, m + 1))
            .filter(|v| v.iter().find(|e| !e.is_zero()) == Some(&Elem::ONE))
            .collect();
        EvaluationDomain {
            field,
            vars: m + 1,
            points,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Basis monomials as `(i, j)` products, `None` standing for a missing factor.
type Monomial = (Option<usize>, Option<usize>);

fn basis_monomials(family: CodeFamily, q: u64, vars: usize) -> Vec<Monomial> {
    let quadratic = (0..vars).flat_map(|i| (i..vars).map(move |j| (Some(i), Some(j))));
    let mut out: Vec<Monomial> = quadratic.collect();
    if family == CodeFamily::Rm2 {
        if q > 2 {
            // over GF(2) the squares already supply the linear terms
            out.extend((0..vars).map(|i| (Some(i), None)));
        }
        out.push((None, None));
    }
    out
}

/// Enumerates every codeword and tallies Hamming weights.
pub fn brute_force_distribution(family: CodeFamily, q: u64, m: usize, budget: u128) -> Result<WeightDistribution> {
    let params = code_parameters(family, q, m)?;
    let needed = (q as u128)
        .checked_pow(params.k as u32)
        .and_then(|c| c.checked_mul(params.n as u128))
        .unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let field = Arc::new(FiniteField::with_order(q)?);
    let domain = match family {
        CodeFamily::Prm2 => EvaluationDomain::projective(field.clone(), m),
        _ => EvaluationDomain::affine(field.clone(), m),
    };
    let f = &*field;
    let n = domain.len();
    let monomials = basis_monomials(family, q, domain.vars);
    debug_assert_eq!(monomials.len() as u64, params.k);

    // multiples[g][a] = a * (generator g evaluated on the domain)
    let multiples: Vec<Vec<Vec<Elem>>> = monomials
        .iter()
        .map(|&(i, j)| {
            let column: Vec<Elem> = domain
                .points
                .iter()
                .map(|x| {
                    let a = i.map_or(Elem::ONE, |i| x[i]);
                    let b = j.map_or(Elem::ONE, |j| x[j]);
                    f.mul(a, b)
                })
                .collect();
            f.elements()
                .map(|a| column.iter().map(|&v| f.mul(a, v)).collect())
                .collect()
        })
        .collect();

    let k = multiples.len();
    let prefix_len = (0..=k).find(|&t| (q as u128).pow(t as u32) >= 256).unwrap_or(k);
    let prefixes = q.pow(prefix_len as u32);

    let tally = (0..prefixes)
        .into_par_iter()
        .fold(
            || vec![0u64; n + 1],
            |mut acc, p| {
                let mut word = vec![Elem::ZERO; n];
                let mut rest = p;
                for g in &multiples[..prefix_len] {
                    let a = (rest % q) as usize;
                    rest /= q;
                    for (w, &v) in word.iter_mut().zip(&g[a]) {
                        *w = f.add(*w, v);
                    }
                }
                enumerate_suffix(f, &multiples[prefix_len..], &word, &mut acc);
                acc
            },
        )
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    let mut wd = WeightDistribution::new(family, q, m, params);
    for (w, &c) in tally.iter().enumerate() {
        wd.add(w as u64, BigUint::from(c));
    }
    Ok(wd)
}

fn enumerate_suffix(f: &FiniteField, gens: &[Vec<Vec<Elem>>], word: &[Elem], acc: &mut [u64]) {
    match gens {
        [] => {
            acc[word.iter().filter(|e| !e.is_zero()).count()] += 1;
        }
        [last] => {
            for mult in last {
                let w = word
                    .iter()
                    .zip(mult)
                    .filter(|(&a, &b)| f.add(a, b) != Elem::ZERO)
                    .count();
                acc[w] += 1;
            }
        }
        [first, rest @ ..] => {
            let mut next = vec![Elem::ZERO; word.len()];
            for mult in first {
                for ((o, &a), &b) in next.iter_mut().zip(word).zip(mult) {
                    *o = f.add(a, b);
                }
                enumerate_suffix(f, rest, &next, acc);
            }
        }
    }
}

/// Closed-form distribution of any family.
pub fn distribution(family: CodeFamily, q: u64, m: usize) -> Result<WeightDistribution> {
    match family {
        CodeFamily::Rm2 => rm2_distribution(q, m),
        CodeFamily::Hrm2 => hrm2_distribution(q, m),
        CodeFamily::Prm2 => prm2_distribution(q, m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(pairs: &[(u64, u64)]) -> BTreeMap<u64, BigUint> {
        pairs.iter().map(|&(w, a)| (w, BigUint::from(a))).collect()
    }

    #[test]
    fn parameter_examples() {
        let p = |n, k, d| CodeParameters { n, k, d };
        assert_eq!(code_parameters(CodeFamily::Rm2, 2, 7).unwrap(), p(128, 29, 32));
        assert_eq!(code_parameters(CodeFamily::Hrm2, 3, 4).unwrap(), p(81, 10, 36));
        assert_eq!(code_parameters(CodeFamily::Prm2, 3, 4).unwrap(), p(121, 15, 54));
        assert_eq!(code_parameters(CodeFamily::Hrm2, 5, 1).unwrap(), p(5, 1, 4));
        assert_eq!(code_parameters(CodeFamily::Hrm2, 2, 1).unwrap(), p(2, 1, 1));
        assert_eq!(code_parameters(CodeFamily::Prm2, 3, 1).unwrap(), p(4, 3, 2));
        assert!(matches!(
            code_parameters(CodeFamily::Rm2, 2, 1),
            Err(Error::UnsupportedParameters(_))
        ));
        assert_eq!(code_parameters(CodeFamily::Rm2, 6, 2), Err(Error::NotPrimePower(6)));
    }

    #[test]
    fn enumerator_formatting() {
        assert_eq!(enumerator_text(&dist(&[(0, 1)])), "1");
        assert_eq!(enumerator_text(&dist(&[(0, 1), (2, 3), (4, 1)])), "1 + 3*Z^2 + Z^4");
    }

    #[test]
    fn hrm_small_cases() {
        assert_eq!(hrm2_distribution(5, 1).unwrap().entries(), &dist(&[(0, 1), (4, 4)]));
        // forms on GF(2)^2: 0; x, y, x+y (weight 2); xy (1); xy+x, xy+y (1)...
        let wd = hrm2_distribution(2, 2).unwrap();
        assert_eq!(wd.entries(), &dist(&[(0, 1), (1, 3), (2, 3), (3, 1)]));
    }

    #[test]
    fn small_brute_force_agrees() {
        for (family, q, m) in [
            (CodeFamily::Rm2, 3, 1),
            (CodeFamily::Rm2, 2, 3),
            (CodeFamily::Hrm2, 2, 2),
            (CodeFamily::Hrm2, 3, 2),
            (CodeFamily::Prm2, 3, 1),
            (CodeFamily::Prm2, 2, 2),
        ] {
            let bf = brute_force_distribution(family, q, m, DEFAULT_CODEWORD_BUDGET).unwrap();
            assert_eq!(bf, distribution(family, q, m).unwrap(), "{family} q={q} m={m}");
        }
    }

    #[test]
    fn projective_domain_shape() {
        let f = Arc::new(FiniteField::with_order(3).unwrap());
        let d = EvaluationDomain::projective(f, 2);
        assert_eq!(d.len(), 13);
        assert_eq!(d.points[0], vec![Elem(0), Elem(0), Elem(1)]);
    }

    #[test]
    fn residual_is_double_entry() {
        for (q, m) in [(3, 1), (3, 4), (4, 3), (5, 2)] {
            let (a, b) = rm2_residual(q, m).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn budget_guard() {
        assert!(matches!(
            brute_force_distribution(CodeFamily::Rm2, 3, 3, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn json_layout() {
        let v = hrm2_distribution(3, 4).unwrap().to_json();
        assert_eq!(v["family"], "hrm2");
        assert_eq!(v["d"], 36);
        assert_eq!(v["distribution"][1]["weight"], 36);
        assert_eq!(v["distribution"][1]["frequency"], "1560");
    }
}
