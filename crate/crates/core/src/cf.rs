//! Finite simple continued fractions and their convergents.
//!
//! Convergents are computed from the running product of the matrices
//! `[[a_i, 1], [1, 0]]`, whose product up to index `n` is
//! `[[p_n, p_{n-1}], [q_n, q_{n-1}]]`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// `[a_0; a_1, ..., a_m]` with `a_i >= 1` for every `i >= 1`. `a_0` is unrestricted.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cf {
    coeffs: Vec<BigInt>,
}

impl Cf {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidCf("no coefficients".into()));
        }
        if let Some(i) = coeffs.iter().skip(1).position(|a| !a.is_positive()) {
            return Err(Error::InvalidCf(format!(
                "a_{} = {} must be at least 1",
                i + 1,
                coeffs[i + 1]
            )));
        }
        Ok(Cf { coeffs })
    }

    pub fn from_i64s(coeffs: &[i64]) -> Result<Self> {
        Cf::new(coeffs.iter().copied().map(BigInt::from).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Number of coefficients, `m + 1`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index `m` of the last coefficient.
    pub fn final_index(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn last(&self) -> &BigInt {
        self.coeffs.last().expect("a Cf is never empty")
    }

    /// Compares by value rather than by coefficient list.
    pub fn value_eq(&self, other: &Cf) -> bool {
        cf_eval(self) == cf_eval(other)
    }

    pub(crate) fn extend_unchecked(&mut self, tail: impl IntoIterator<Item = BigInt>) {
        self.coeffs.extend(tail);
    }
}

/// Formats as `[a_0;a_1,...,a_m]`, or `[a_0]` for a single coefficient.
impl fmt::Display for Cf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.coeffs[0])?;
        for (i, a) in self.coeffs.iter().enumerate().skip(1) {
            f.write_str(if i == 1 { ";" } else { "," })?;
            write!(f, "{a}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Cf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cf{self}")
    }
}

/// Canonical expansion by floor division. The last coefficient is at least 2
/// unless the result is a single integer.
pub fn cf_expand(r: &Rational) -> Cf {
    let mut num = r.numer().clone();
    let mut den = r.denom().clone();
    let mut coeffs = Vec::new();
    while !den.is_zero() {
        let (q, rem) = num.div_mod_floor(&den);
        coeffs.push(q);
        num = std::mem::replace(&mut den, rem);
    }
    Cf { coeffs }
}

/// Rewrites `c` so that its final index is even, without changing its value.
///
/// An odd final index is fixed by splitting `a_m >= 2` into `(a_m - 1, 1)`,
/// or by folding a trailing `1` into its predecessor.
pub fn cf_even_normalize(c: &Cf) -> Cf {
    if c.final_index().is_multiple_of(2) {
        return c.clone();
    }
    let mut coeffs = c.coeffs.clone();
    let last = coeffs.pop().expect("odd final index implies m >= 1");
    if last.is_one() {
        *coeffs.last_mut().expect("m >= 1") += 1;
    } else {
        coeffs.push(last - 1);
        coeffs.push(BigInt::one());
    }
    Cf { coeffs }
}

/// Exact value `p_m / q_m`.
pub fn cf_eval(c: &Cf) -> Rational {
    let (p, q) = c
        .coeffs
        .iter()
        .fold(
            (
                (BigInt::one(), BigInt::zero()),
                (BigInt::zero(), BigInt::one()),
            ),
            |((p, q), (pp, qq)), a| ((a * &p + pp, a * &q + qq), (p, q)),
        )
        .0;
    Rational::new(p, q).expect("q_m >= 1 for a valid continued fraction")
}

/// Convergent numerators and denominators, including the virtual row
/// `(p_{-1}, q_{-1}) = (1, 0)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConvergentTable {
    // rows[i] holds (p_{i-1}, q_{i-1})
    rows: Vec<(BigInt, BigInt)>,
}

impl ConvergentTable {
    /// Wraps arbitrary rows, first row being index -1. No invariant is checked,
    /// so this is how corrupted tables are built for [`det_check`].
    pub fn from_rows(rows: Vec<(BigInt, BigInt)>) -> Self {
        ConvergentTable { rows }
    }

    pub fn rows(&self) -> &[(BigInt, BigInt)] {
        &self.rows
    }

    /// Row count including the virtual row.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `(p_n, q_n)` for `n >= -1`.
    pub fn get(&self, n: isize) -> Option<&(BigInt, BigInt)> {
        usize::try_from(n + 1).ok().and_then(|i| self.rows.get(i))
    }

    pub fn p(&self, n: isize) -> Option<&BigInt> {
        self.get(n).map(|(p, _)| p)
    }

    pub fn q(&self, n: isize) -> Option<&BigInt> {
        self.get(n).map(|(_, q)| q)
    }

    /// The last convergent `(p_m, q_m)`.
    pub fn last(&self) -> Option<&(BigInt, BigInt)> {
        self.rows.last()
    }

    /// First `n >= 0` where `p_n q_{n-1} - p_{n-1} q_n != (-1)^{n+1}`.
    pub fn det_violation(&self) -> Option<usize> {
        self.rows.windows(2).enumerate().find_map(|(n, w)| {
            let (pp, qp) = &w[0];
            let (p, q) = &w[1];
            let det = p * qp - pp * q;
            let expected = if n % 2 == 0 {
                -BigInt::one()
            } else {
                BigInt::one()
            };
            (det != expected).then_some(n)
        })
    }
}

pub fn convergents(c: &Cf) -> ConvergentTable {
    let mut rows = Vec::with_capacity(c.len() + 1);
    rows.push((BigInt::one(), BigInt::zero()));
    let (mut pp, mut qp) = (BigInt::zero(), BigInt::one());
    for a in &c.coeffs {
        let (p_last, q_last) = rows.last().expect("seeded with the virtual row");
        let p = a * p_last + &pp;
        let q = a * q_last + &qp;
        pp = p_last.clone();
        qp = q_last.clone();
        rows.push((p, q));
    }
    ConvergentTable { rows }
}

/// True iff the determinant identity holds at every index of the table.
pub fn det_check(t: &ConvergentTable) -> bool {
    t.det_violation().is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn cf(c: &[i64]) -> Cf {
        Cf::from_i64s(c).unwrap()
    }

    fn rows(t: &ConvergentTable) -> Vec<(i64, i64)> {
        t.rows()
            .iter()
            .map(|(p, q)| (p.try_into().unwrap(), q.try_into().unwrap()))
            .collect()
    }

    #[test]
    fn expand_examples() {
        assert_eq!(cf_expand(&r(6, 7)), cf(&[0, 1, 6]));
        assert_eq!(cf_expand(&r(1, 1)), cf(&[1]));
        assert_eq!(cf_expand(&r(355, 113)), cf(&[3, 7, 16]));
        assert_eq!(cf_expand(&r(7, 3)), cf(&[2, 3]));
    }

    #[test]
    fn expand_negative_uses_floor() {
        // -7/3 = -3 + 2/3 = [-3; 1, 2]
        assert_eq!(cf_expand(&r(-7, 3)), cf(&[-3, 1, 2]));
        assert_eq!(cf_expand(&r(-4, 1)), cf(&[-4]));
        assert_eq!(cf_eval(&cf_expand(&r(-7, 3))), r(-7, 3));
    }

    #[test]
    fn even_normalize_examples() {
        assert_eq!(cf_even_normalize(&cf(&[0, 1, 6])), cf(&[0, 1, 6]));
        assert_eq!(cf_even_normalize(&cf(&[2, 3])), cf(&[2, 2, 1]));
        assert_eq!(cf_even_normalize(&cf(&[0, 1, 5, 1])), cf(&[0, 1, 6]));
        assert_eq!(cf_even_normalize(&cf(&[4, 1])), cf(&[5]));
        assert_eq!(cf_eval(&cf(&[2, 2, 1])), r(7, 3));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(cf_eval(&cf(&[0, 1, 6])), r(6, 7));
        assert_eq!(cf_eval(&cf(&[5])), r(5, 1));
        assert_eq!(cf_eval(&cf(&[0, 1, 6, 2, 7])), r(97, 112));
    }

    #[test]
    fn convergent_rows() {
        assert_eq!(
            rows(&convergents(&cf(&[0, 1, 6]))),
            [(1, 0), (0, 1), (1, 1), (6, 7)]
        );
        assert_eq!(rows(&convergents(&cf(&[9]))), [(1, 0), (9, 1)]);
        let t = convergents(&cf(&[0, 1, 6, 2, 7]));
        assert_eq!(t.last().unwrap(), &(BigInt::from(97), BigInt::from(112)));
        assert_eq!(t.q(-1), Some(&BigInt::zero()));
        assert_eq!(t.q(1), Some(&BigInt::one()));
        assert_eq!(t.q(5), None);
        assert_eq!(t.q(-2), None);
    }

    #[test]
    fn det_check_examples() {
        assert!(det_check(&convergents(&cf(&[0, 1, 6]))));

        let mut corrupted = convergents(&cf(&[0, 1, 6])).rows().to_vec();
        corrupted[3] = (BigInt::from(6), BigInt::from(8));
        let t = ConvergentTable::from_rows(corrupted);
        assert!(!det_check(&t));
        assert_eq!(t.det_violation(), Some(2));

        let long: Vec<BigInt> = [
            "0",
            "1",
            "6",
            "2",
            "7",
            "32",
            "112",
            "10800",
            "403200",
            "17418254400",
            "1755760043520000",
        ]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
        assert!(det_check(&convergents(&Cf::new(long).unwrap())));
    }

    #[test]
    fn rejects_invalid_coefficients() {
        assert!(matches!(Cf::new(vec![]), Err(Error::InvalidCf(_))));
        assert!(matches!(Cf::from_i64s(&[1, 0]), Err(Error::InvalidCf(_))));
        assert!(matches!(
            Cf::from_i64s(&[1, 2, -3]),
            Err(Error::InvalidCf(_))
        ));
        assert!(Cf::from_i64s(&[-5, 1]).is_ok());
    }

    #[test]
    fn display() {
        assert_eq!(cf(&[0, 1, 6]).to_string(), "[0;1,6]");
        assert_eq!(cf(&[1]).to_string(), "[1]");
    }
}
