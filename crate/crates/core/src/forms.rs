//! Quadratic forms on GF(q)^m: representation, radicals, rank and type,
//! canonical representatives, diagonalisation and zero counts.
//!
//! A form is stored as an `m x m` coefficient table `c`:
//!
//! * even `q`: only the upper triangle (including the diagonal) is used and
//!   `Q(x) = sum_{i <= j} c[i][j] x_i x_j`; the strict lower triangle is zero;
//! * odd `q`: the table is symmetric and `Q(x) = sum_{i,j} c[i][j] x_i x_j`,
//!   so the polynomial coefficient of `x_i x_j` (`i != j`) is `2 c[i][j]`.
//!
//! Both conventions give every form exactly one table.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::linalg::Matrix;

/// Default cap on the number of points visited by exhaustive zero counting.
pub const DEFAULT_POINT_BUDGET: u128 = 1 << 24;

/// Below this many points enumeration stays on the calling thread.
const PARALLEL_THRESHOLD: u64 = 1 << 14;

/// Type label of a quadratic form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TypeTag {
    Plus,
    Minus,
    Untyped,
}

impl TypeTag {
    /// `+1` / `-1` for typed classes.
    pub fn sign(self) -> Option<i64> {
        match self {
            TypeTag::Plus => Some(1),
            TypeTag::Minus => Some(-1),
            TypeTag::Untyped => None,
        }
    }

    pub fn from_sign(s: i64) -> TypeTag {
        if s >= 0 {
            TypeTag::Plus
        } else {
            TypeTag::Minus
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TypeTag::Plus => "plus",
            TypeTag::Minus => "minus",
            TypeTag::Untyped => "untyped",
        }
    }
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeTag::Plus => f.write_str("+1"),
            TypeTag::Minus => f.write_str("-1"),
            TypeTag::Untyped => f.write_str("untyped"),
        }
    }
}

impl FromStr for TypeTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "plus" | "+" | "+1" | "1" => Ok(TypeTag::Plus),
            "minus" | "-" | "-1" => Ok(TypeTag::Minus),
            "untyped" | "none" => Ok(TypeTag::Untyped),
            other => Err(Error::Parse(format!("unknown type tag '{other}'"))),
        }
    }
}

/// Classification result: rank plus type label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RankType {
    pub rank: usize,
    pub type_tag: TypeTag,
}

impl RankType {
    pub fn new(rank: usize, type_tag: TypeTag) -> Self {
        RankType { rank, type_tag }
    }

    /// Checks the labelling rules: rank 0 is `Plus`, odd rank over an even
    /// field is `Untyped`, everything else is `Plus` or `Minus`.
    pub fn validate(&self, even_q: bool, m: usize) -> Result<()> {
        let bad = |why: &str| Err(Error::InconsistentRankType(format!("{self:?}: {why}")));
        if self.rank > m {
            return bad("rank exceeds number of variables");
        }
        match (self.rank, self.type_tag) {
            (0, TypeTag::Plus) => Ok(()),
            (0, _) => bad("the zero form has type +1"),
            (r, TypeTag::Untyped) if even_q && r % 2 == 1 => Ok(()),
            (r, _) if even_q && r % 2 == 1 => bad("odd rank over an even field is untyped"),
            (_, TypeTag::Untyped) => bad("this class carries a type"),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for RankType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rank {} type {}", self.rank, self.type_tag)
    }
}

/// Symmetric bilinear form `B(x, y) = x^T gram y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearForm {
    field: Arc<FiniteField>,
    gram: Matrix,
}

impl BilinearForm {
    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn m(&self) -> usize {
        self.gram.rows()
    }

    pub fn evaluate(&self, x: &[Elem], y: &[Elem]) -> Result<Elem> {
        let m = self.m();
        check_len(x, m)?;
        check_len(y, m)?;
        let f = &*self.field;
        let gy = self.gram.mul_vec(y, f);
        Ok(x.iter()
            .zip(&gy)
            .fold(Elem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
    }

    /// Basis of the radical `{ y : B(x, y) = 0 for all x }`.
    pub fn radical(&self) -> Vec<Vec<Elem>> {
        self.gram.null_space(&self.field)
    }
}

/// An invertible linear change of variables `x -> A x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    matrix: Matrix,
}

impl Substitution {
    pub fn new(field: &FiniteField, matrix: Matrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                got: matrix.cols(),
            });
        }
        if !matrix.is_invertible(field) {
            return Err(Error::SingularSubstitution);
        }
        Ok(Substitution { matrix })
    }

    pub fn identity(m: usize) -> Self {
        Substitution {
            matrix: Matrix::identity(m),
        }
    }

    /// Uniformly random invertible matrix (rejection sampling).
    pub fn random<R: Rng + ?Sized>(field: &FiniteField, m: usize, rng: &mut R) -> Self {
        loop {
            let data = (0..m * m)
                .map(|_| Elem(rng.gen_range(0..field.order())))
                .collect();
            let matrix = Matrix::from_rows(m, m, data);
            if matrix.is_invertible(field) {
                return Substitution { matrix };
            }
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn m(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, field: &FiniteField, x: &[Elem]) -> Vec<Elem> {
        self.matrix.mul_vec(x, field)
    }
}

/// The rotation `x1 = l1 y1 + l2 y2, x2 = -l2 y1 + l1 y2` with
/// `l1^2 + l2^2 = lambda`, `l1 != l2`, which carries `x1^2 + x2^2` to
/// `lambda (y1^2 + y2^2)`. The pair is the first one found in index order.
pub fn two_square_rotation(field: &FiniteField, lambda: Elem) -> Result<Substitution> {
    if field.is_even() {
        return Err(Error::EvenCharacteristic);
    }
    if lambda.is_zero() {
        return Err(Error::ZeroCoefficient);
    }
    for l1 in field.elements() {
        for l2 in field.elements() {
            if l1 != l2 && field.add(field.square(l1), field.square(l2)) == lambda {
                let m = Matrix::from_rows(2, 2, vec![l1, l2, field.neg(l2), l1]);
                return Substitution::new(field, m);
            }
        }
    }
    Err(Error::Inconsistent(format!(
        "{lambda} is not a sum of two distinct-root squares"
    )))
}

/// A quadratic form on GF(q)^m in unique representation.
#[derive(Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    field: Arc<FiniteField>,
    m: usize,
    coeffs: Vec<Elem>,
}

impl fmt::Debug for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadraticForm({self})")
    }
}

impl QuadraticForm {
    pub fn zero(field: Arc<FiniteField>, m: usize) -> Self {
        QuadraticForm {
            field,
            m,
            coeffs: vec![Elem::ZERO; m * m],
        }
    }

    /// Builds a form from its row-major coefficient table, checking the
    /// representation rules of the field parity.
    pub fn from_table(field: Arc<FiniteField>, m: usize, coeffs: Vec<Elem>) -> Result<Self> {
        if coeffs.len() != m * m {
            return Err(Error::DimensionMismatch {
                expected: m * m,
                got: coeffs.len(),
            });
        }
        if let Some(&bad) = coeffs.iter().find(|c| c.0 >= field.order()) {
            return Err(Error::InvalidElement {
                index: bad.0 as u64,
                q: field.order() as u64,
            });
        }
        for i in 0..m {
            for j in 0..i {
                let lower = coeffs[i * m + j];
                let upper = coeffs[j * m + i];
                if field.is_even() && !lower.is_zero() {
                    return Err(Error::InvalidCoefficients(format!(
                        "even q stores only i <= j, found c[{}][{}]",
                        i + 1,
                        j + 1
                    )));
                }
                if !field.is_even() && lower != upper {
                    return Err(Error::InvalidCoefficients(format!(
                        "odd q requires a symmetric table, c[{}][{}] != c[{}][{}]",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(QuadraticForm { field, m, coeffs })
    }

    /// Builds a form from table entries `c[i][j]` with `i <= j` (0-based).
    /// For odd `q` the mirrored entry is filled in.
    pub fn from_upper(field: Arc<FiniteField>, m: usize, entries: &[(usize, usize, Elem)]) -> Result<Self> {
        let mut form = Self::zero(field, m);
        for &(i, j, c) in entries {
            if i > j || j >= m {
                return Err(Error::OutOfRange(format!("entry ({i}, {j}) for m = {m}")));
            }
            form.set_upper(i, j, c);
        }
        Ok(form)
    }

    /// Builds a form from polynomial coefficients: `(i, j, a)` adds `a x_i x_j`.
    pub fn from_polynomial(field: Arc<FiniteField>, m: usize, terms: &[(usize, usize, Elem)]) -> Result<Self> {
        let mut form = Self::zero(field, m);
        let f = form.field.clone();
        let half = if f.is_even() {
            None
        } else {
            Some(f.inv(f.from_int(2))?)
        };
        for &(a, b, c) in terms {
            let (i, j) = if a <= b { (a, b) } else { (b, a) };
            if j >= m {
                return Err(Error::OutOfRange(format!("variable {j} for m = {m}")));
            }
            let entry = match half {
                Some(h) if i != j => f.mul(c, h),
                _ => c,
            };
            let cur = form.coeff(i, j);
            form.set_upper(i, j, f.add(cur, entry));
        }
        Ok(form)
    }

    fn set_upper(&mut self, i: usize, j: usize, c: Elem) {
        self.coeffs[i * self.m + j] = c;
        if !self.field.is_even() {
            self.coeffs[j * self.m + i] = c;
        }
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Table entry `c[i][j]` (0-based).
    pub fn coeff(&self, i: usize, j: usize) -> Elem {
        self.coeffs[i * self.m + j]
    }

    pub fn table(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Coefficient of the monomial `x_i x_j`, `i <= j`.
    pub fn polynomial_coeff(&self, i: usize, j: usize) -> Elem {
        let c = self.coeff(i, j);
        if i == j || self.field.is_even() {
            c
        } else {
            self.field.add(c, c)
        }
    }

    pub fn evaluate(&self, x: &[Elem]) -> Result<Elem> {
        check_len(x, self.m)?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[Elem]) -> Elem {
        let f = &*self.field;
        let mut acc = Elem::ZERO;
        for i in 0..self.m {
            if x[i].is_zero() {
                continue;
            }
            let mut row = Elem::ZERO;
            for j in i..self.m {
                let c = self.polynomial_coeff(i, j);
                if !c.is_zero() {
                    row = f.add(row, f.mul(c, x[j]));
                }
            }
            acc = f.add(acc, f.mul(x[i], row));
        }
        acc
    }

    /// The associated bilinear form, from `B(x, y) = Q(x + y) - Q(x) - Q(y)`
    /// on basis vectors.
    pub fn bilinear(&self) -> BilinearForm {
        let f = &*self.field;
        let m = self.m;
        let mut gram = Matrix::zeros(m, m);
        let unit = |i: usize, scale: Elem| {
            let mut v = vec![Elem::ZERO; m];
            v[i] = scale;
            v
        };
        let two = f.from_int(2);
        for i in 0..m {
            let qi = self.eval_unchecked(&unit(i, Elem::ONE));
            // Q(2 e_i) - 2 Q(e_i)
            let q2 = self.eval_unchecked(&unit(i, two));
            gram[(i, i)] = f.sub(q2, f.add(qi, qi));
            for j in i + 1..m {
                let mut v = unit(i, Elem::ONE);
                v[j] = Elem::ONE;
                let qj = self.eval_unchecked(&unit(j, Elem::ONE));
                let b = f.sub(f.sub(self.eval_unchecked(&v), qi), qj);
                gram[(i, j)] = b;
                gram[(j, i)] = b;
            }
        }
        BilinearForm {
            field: self.field.clone(),
            gram,
        }
    }

    /// Basis of `Rad Q = Q^{-1}(0) ∩ Rad B_Q`.
    pub fn radical(&self) -> Vec<Vec<Elem>> {
        let f = &*self.field;
        let rad_b = self.bilinear().radical();
        if !f.is_even() {
            return rad_b;
        }
        // On Rad B_Q, Q(sum l_i b_i) = (sum l_i s_i)^2 with s_i = sqrt(Q(b_i)),
        // so Rad Q is the kernel of the linear functional l -> sum l_i s_i.
        let s: Vec<Elem> = rad_b
            .iter()
            .map(|b| f.sqrt_even(self.eval_unchecked(b)).expect("even field"))
            .collect();
        let Some(pivot) = s.iter().position(|v| !v.is_zero()) else {
            return rad_b;
        };
        let sp_inv = f.inv(s[pivot]).expect("nonzero pivot");
        rad_b
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != pivot)
            .map(|(k, b)| {
                let t = f.mul(s[k], sp_inv);
                b.iter()
                    .zip(&rad_b[pivot])
                    .map(|(&x, &y)| f.sub(x, f.mul(t, y)))
                    .collect()
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.m - self.radical().len()
    }

    /// Number of zeros, by visiting every point of GF(q)^m.
    pub fn zero_count_exhaustive(&self, budget: u128) -> Result<BigUint> {
        let q = self.field.order() as u64;
        let total = (q as u128).checked_pow(self.m as u32).unwrap_or(u128::MAX);
        if total > budget {
            return Err(Error::BudgetExceeded {
                needed: total,
                budget,
            });
        }
        let total = total as u64;
        let is_zero = |idx: u64| {
            let x = vector_from_index(idx, q, self.m);
            self.eval_unchecked(&x).is_zero()
        };
        let count = if total < PARALLEL_THRESHOLD {
            (0..total).filter(|&i| is_zero(i)).count()
        } else {
            (0..total).into_par_iter().filter(|&i| is_zero(i)).count()
        };
        Ok(BigUint::from(count))
    }

    /// Congruence diagonalisation (odd `q`): returns nonzero `a_1..a_r` and an
    /// invertible `A` with `Q(A x) = sum a_i x_i^2`.
    ///
    /// Pivoting is deterministic: the smallest-index nonzero diagonal entry of
    /// the active block; failing that, the smallest `(i, j)` with a nonzero
    /// entry, after the change `x_i -> x_i + x_j`.
    pub fn diagonalize(&self) -> Result<(Vec<Elem>, Substitution)> {
        let f = &*self.field;
        if f.is_even() {
            return Err(Error::EvenCharacteristic);
        }
        let m = self.m;
        let mut g = Matrix::from_rows(m, m, self.coeffs.clone());
        let mut a = Matrix::identity(m);
        let congruence = |g: &Matrix, a: &Matrix, e: &Matrix| {
            (e.transpose().mul(&g.mul(e, f), f), a.mul(e, f))
        };

        let mut k = 0;
        while k < m {
            let mut pivot = (k..m).find(|&i| !g[(i, i)].is_zero());
            if pivot.is_none() {
                let off = (k..m)
                    .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
                    .find(|&(i, j)| !g[(i, j)].is_zero());
                let Some((i, j)) = off else { break };
                let mut e = Matrix::identity(m);
                e[(i, j)] = Elem::ONE;
                (g, a) = congruence(&g, &a, &e);
                pivot = (k..m).find(|&i| !g[(i, i)].is_zero());
            }
            let p = pivot.expect("x_i -> x_i + x_j creates a diagonal entry");
            g.swap_rows(k, p);
            g.swap_cols(k, p);
            a.swap_cols(k, p);

            let d_inv = f.inv(g[(k, k)])?;
            let mut e = Matrix::identity(m);
            let mut any = false;
            for l in k + 1..m {
                if !g[(k, l)].is_zero() {
                    e[(k, l)] = f.neg(f.mul(g[(k, l)], d_inv));
                    any = true;
                }
            }
            if any {
                (g, a) = congruence(&g, &a, &e);
            }
            k += 1;
        }
        let diag = (0..k).map(|i| g[(i, i)]).collect();
        Ok((diag, Substitution { matrix: a }))
    }

    /// Rank and type.
    pub fn classify(&self) -> Result<RankType> {
        self.classify_with_budget(DEFAULT_POINT_BUDGET)
    }

    /// Rank and type. Even-characteristic forms of even rank are typed by
    /// an exhaustive zero count, limited by `budget` points.
    pub fn classify_with_budget(&self, budget: u128) -> Result<RankType> {
        let f = &*self.field;
        let rank = self.rank();
        if rank == 0 {
            return Ok(RankType::new(0, TypeTag::Plus));
        }
        if !f.is_even() {
            let (diag, _) = self.diagonalize()?;
            if diag.len() != rank {
                return Err(Error::Inconsistent(format!(
                    "diagonal length {} differs from radical rank {rank}",
                    diag.len()
                )));
            }
            return Ok(RankType::new(rank, type_from_diagonal(f, &diag)?));
        }
        if rank % 2 == 1 {
            return Ok(RankType::new(rank, TypeTag::Untyped));
        }
        let zeros = self.zero_count_exhaustive(budget)?;
        let q = f.order() as u64;
        for tag in [TypeTag::Plus, TypeTag::Minus] {
            let rt = RankType::new(rank, tag);
            if zero_count_formula(rt, q, self.m)? == zeros {
                return Ok(rt);
            }
        }
        Err(Error::Inconsistent(format!(
            "{zeros} zeros match neither type at rank {rank}"
        )))
    }

    /// The form `x -> Q(A x)`.
    pub fn substitute(&self, sub: &Substitution) -> Result<QuadraticForm> {
        let f = &*self.field;
        let m = self.m;
        if sub.m() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: sub.m(),
            });
        }
        let a = &sub.matrix;
        if !a.is_invertible(f) {
            return Err(Error::SingularSubstitution);
        }
        if !f.is_even() {
            let c = Matrix::from_rows(m, m, self.coeffs.clone());
            let out = a.transpose().mul(&c.mul(a, f), f);
            let data = (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).map(|ij| out[ij]).collect();
            return QuadraticForm::from_table(self.field.clone(), m, data);
        }
        // x_i x_j with x = A y expands to sum_{k,l} A[i][k] A[j][l] y_k y_l;
        // collect y_k y_l and y_l y_k onto the upper triangle.
        let mut out = QuadraticForm::zero(self.field.clone(), m);
        for i in 0..m {
            for j in i..m {
                let c = self.coeff(i, j);
                if c.is_zero() {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        let t = f.mul(c, f.mul(a[(i, k)], a[(j, l)]));
                        if t.is_zero() {
                            continue;
                        }
                        let (u, v) = if k <= l { (k, l) } else { (l, k) };
                        let cur = out.coeff(u, v);
                        out.set_upper(u, v, f.add(cur, t));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Parses the text form `q=<q> m=<m>; c[i][j]=<index>; ...` with 1-based
    /// indices `i <= j`. Omitted entries are zero.
    pub fn parse(text: &str) -> Result<QuadraticForm> {
        let mut parts = text.split(';').map(str::trim);
        let header = parts.next().unwrap_or_default();
        let (mut q, mut m) = (None, None);
        for tok in header.split_whitespace() {
            match tok.split_once('=') {
                Some(("q", v)) => q = Some(parse_num(v)?),
                Some(("m", v)) => m = Some(parse_num(v)? as usize),
                _ => return Err(Error::Parse(format!("unexpected header token '{tok}'"))),
            }
        }
        let q = q.ok_or_else(|| Error::Parse("missing q=<q> in header".into()))?;
        let m = m.ok_or_else(|| Error::Parse("missing m=<m> in header".into()))?;
        let field = Arc::new(FiniteField::with_order(q)?);
        let mut form = QuadraticForm::zero(field.clone(), m);
        let mut seen = std::collections::BTreeSet::new();
        for part in parts.filter(|p| !p.is_empty()) {
            let (lhs, rhs) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected c[i][j]=<index>, got '{part}'")))?;
            let idx = lhs
                .trim()
                .strip_prefix("c[")
                .and_then(|s| s.strip_suffix(']'))
                .and_then(|s| s.split_once("]["))
                .ok_or_else(|| Error::Parse(format!("malformed coefficient name '{}'", lhs.trim())))?;
            let i = parse_num(idx.0)? as usize;
            let j = parse_num(idx.1)? as usize;
            if i == 0 || j == 0 || i > m || j > m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    got: i.max(j),
                });
            }
            if i > j {
                return Err(Error::Parse(format!("c[{i}][{j}]: only i <= j may be given")));
            }
            if !seen.insert((i, j)) {
                return Err(Error::Parse(format!("c[{i}][{j}] given twice")));
            }
            let value = field.elem(parse_num(rhs)?)?;
            form.set_upper(i - 1, j - 1, value);
        }
        Ok(form)
    }
}

impl fmt::Display for QuadraticForm {
    /// The text form accepted by [`QuadraticForm::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={} m={}", self.field.order(), self.m)?;
        for i in 0..self.m {
            for j in i..self.m {
                let c = self.coeff(i, j);
                if !c.is_zero() {
                    write!(f, "; c[{}][{}]={}", i + 1, j + 1, c)?;
                }
            }
        }
        Ok(())
    }
}

impl FromStr for QuadraticForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        QuadraticForm::parse(s)
    }
}

fn parse_num(s: &str) -> Result<u64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("expected a nonnegative integer, got '{}'", s.trim())))
}

fn check_len(x: &[Elem], m: usize) -> Result<()> {
    if x.len() == m {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: m,
            got: x.len(),
        })
    }
}

/// The vector of GF(q)^m with index `idx`, leftmost coordinate most significant.
pub fn vector_from_index(mut idx: u64, q: u64, m: usize) -> Vec<Elem> {
    let mut v = vec![Elem::ZERO; m];
    for slot in v.iter_mut().rev() {
        *slot = Elem((idx % q) as u32);
        idx /= q;
    }
    v
}

/// Type of `sum a_i x_i^2` over an odd field: with `delta = eta(prod a_i)`,
/// the type is `-delta` when `q = 3 mod 4` and `r = 2, 3 mod 4`, else `delta`.
pub fn type_from_diagonal(field: &FiniteField, diag: &[Elem]) -> Result<TypeTag> {
    if field.is_even() {
        return Err(Error::EvenCharacteristic);
    }
    if diag.iter().any(|a| a.is_zero()) {
        return Err(Error::ZeroCoefficient);
    }
    let r = diag.len();
    if r == 0 {
        return Ok(TypeTag::Plus);
    }
    let prod = diag.iter().fold(Elem::ONE, |acc, &a| field.mul(acc, a));
    let delta = field.quadratic_character(prod)? as i64;
    let flip = field.order() % 4 == 3 && matches!(r % 4, 2 | 3);
    Ok(TypeTag::from_sign(if flip { -delta } else { delta }))
}

fn big_pow(q: u64, e: usize) -> BigInt {
    num_traits::pow(BigInt::from(q), e)
}

/// Number of zeros of a form of the given rank and type on GF(q)^m.
pub fn zero_count_formula(rt: RankType, q: u64, m: usize) -> Result<BigUint> {
    let (p, _) = crate::field::prime_power(q).ok_or(Error::NotPrimePower(q))?;
    rt.validate(p == 2, m)?;
    let r = rt.rank;
    let count = if r == 0 {
        big_pow(q, m)
    } else if r % 2 == 1 {
        big_pow(q, m - 1)
    } else {
        let tau = rt.type_tag.sign().expect("validated");
        big_pow(q, m - 1) + tau * big_pow(q, m - (r + 2) / 2) * BigInt::from(q - 1)
    };
    count
        .to_biguint()
        .ok_or_else(|| Error::Inconsistent("negative zero count".into()))
}

/// The canonical representative of the class `rt` on GF(q)^m.
pub fn canonical_form(field: Arc<FiniteField>, m: usize, rt: RankType) -> Result<QuadraticForm> {
    rt.validate(field.is_even(), m)?;
    let r = rt.rank;
    let mut terms = Vec::new();
    let hyperbolic_pairs = |count: usize, terms: &mut Vec<(usize, usize, Elem)>| {
        for i in 0..count {
            terms.push((2 * i, 2 * i + 1, Elem::ONE));
        }
    };
    let f = &*field;
    if r == 0 {
        return Ok(QuadraticForm::zero(field, m));
    }
    if r % 2 == 1 {
        hyperbolic_pairs((r - 1) / 2, &mut terms);
        let tail = match rt.type_tag {
            TypeTag::Minus => f.smallest_nonsquare()?,
            _ => Elem::ONE,
        };
        terms.push((r - 1, r - 1, tail));
    } else if f.is_even() {
        match rt.type_tag {
            TypeTag::Plus => hyperbolic_pairs(r / 2, &mut terms),
            _ => {
                hyperbolic_pairs(r / 2 - 1, &mut terms);
                let lambda = f.smallest_trace_one()?;
                terms.push((r - 2, r - 2, Elem::ONE));
                terms.push((r - 2, r - 1, Elem::ONE));
                terms.push((r - 1, r - 1, lambda));
            }
        }
    } else {
        hyperbolic_pairs(r / 2 - 1, &mut terms);
        let lambda = match rt.type_tag {
            TypeTag::Minus => f.smallest_nonsquare()?,
            _ => Elem::ONE,
        };
        terms.push((r - 2, r - 2, Elem::ONE));
        terms.push((r - 1, r - 1, f.neg(lambda)));
    }
    QuadraticForm::from_polynomial(field.clone(), m, &terms)
}

/// Every admissible `(rank, type)` class on GF(q)^m, rank ascending.
pub fn admissible_classes(even_q: bool, m: usize) -> Vec<RankType> {
    let mut out = vec![RankType::new(0, TypeTag::Plus)];
    for r in 1..=m {
        if r % 2 == 1 && even_q {
            out.push(RankType::new(r, TypeTag::Untyped));
        } else {
            out.push(RankType::new(r, TypeTag::Plus));
            out.push(RankType::new(r, TypeTag::Minus));
        }
    }
    out
}
