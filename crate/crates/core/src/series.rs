//! Partial sums `S_n = p/q + sum_{j=2..n} 1/x_j`, the interlaced expansion
//! predicted for them, and the checks tying the two together.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::cf::{cf_eval, convergents, Cf, ConvergentTable};
use crate::engel::EngelState;
use crate::error::{Error, Result};
use crate::rational::{Fraction, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialSum {
    pub n: usize,
    pub value: Rational,
}

impl PartialSum {
    /// Numerator `P_n` of `S_n` in lowest terms.
    pub fn numer(&self) -> &BigInt {
        self.value.numer()
    }

    /// Denominator `Q_n` of `S_n` in lowest terms.
    pub fn denom(&self) -> &BigInt {
        self.value.denom()
    }
}

/// `S_n` in lowest terms.
pub fn partial_sum(state: &EngelState, n: usize) -> Result<PartialSum> {
    Ok(PartialSum {
        n,
        value: partial_sum_fraction(state, n)?.reduce(),
    })
}

/// `S_n` over the denominator `x_n`, unreduced. Since `x_j / x_{j-1} = y_{j-1}`,
/// the numerator follows `P_1 = p`, `P_j = P_{j-1} y_{j-1} + 1`.
pub fn partial_sum_fraction(state: &EngelState, n: usize) -> Result<Fraction> {
    state.require(n)?;
    let mut num = state.config().seed.numer().clone();
    for j in 2..=n {
        num = num * BigInt::from(state.y(j - 1).expect("j - 1 < n <= len").clone()) + 1;
    }
    let xn = BigInt::from(state.x(n).expect("checked").clone());
    Ok(Fraction::new(num, xn).expect("x_n >= 1"))
}

/// `S_N - S_n = sum_{j=n+1..N} 1/x_j` over the denominator `x_N`, unreduced,
/// for `n <= N <= len()`.
pub fn sum_between(state: &EngelState, n: usize, big_n: usize) -> Result<Fraction> {
    state.require(big_n)?;
    state.require(n)?;
    // x_N / x_j = y_j ... y_{N-1}, so the numerator is a Horner sum in the y's.
    let mut num = BigUint::zero();
    for j in n + 1..=big_n {
        num = num * state.y(j - 1).expect("j - 1 < N <= len") + 1u32;
    }
    let den = BigInt::from(state.x(big_n).expect("checked").clone());
    Ok(Fraction::new(BigInt::from(num), den).expect("x_N >= 1"))
}

/// The expansion of `S_n` predicted by the interlacing pattern: the
/// even-normalized expansion of `p/q` followed by `y_{j-1} z_j, x_j` for
/// `j = 1..n-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredictedCf {
    pub cf: Cf,
    pub k: usize,
    pub n: usize,
}

pub fn predicted_cf(state: &EngelState, n: usize) -> Result<PredictedCf> {
    state.require(n)?;
    let mut cf = state.base_cf().clone();
    cf.extend_unchecked((1..n).flat_map(|j| {
        let y = state.y(j - 1).expect("j - 1 < n <= len");
        let z = state.z(j).expect("j < n <= len");
        let x = state.x(j).expect("j <= len");
        [BigInt::from(y * z), BigInt::from(x.clone())]
    }));
    Ok(PredictedCf {
        cf,
        k: state.k(),
        n,
    })
}

/// The identity families checked by [`verify_theorem`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `cf_eval(predicted) = S_n`.
    Value,
    /// `q_{2k+2j-2} = x_j`.
    EvenDenominator,
    /// `q_{2k+2j-1} = y_j - 1`.
    OddDenominator,
    /// `p_i q_{i-1} - p_{i-1} q_i = (-1)^{i+1}`.
    Determinant,
}

impl Identity {
    pub fn name(self) -> &'static str {
        match self {
            Identity::Value => "value",
            Identity::EvenDenominator => "even-denominator",
            Identity::OddDenominator => "odd-denominator",
            Identity::Determinant => "determinant",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A violated identity. `index` is the convergent index for denominator and
/// determinant failures, and `n` for the value check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub identity: Identity,
    pub index: isize,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} identity fails at index {}",
            self.identity, self.index
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremReport {
    pub n: usize,
    pub k: usize,
    pub value_ok: bool,
    /// First failure of each denominator family, if any.
    pub even_denominator: Option<isize>,
    pub odd_denominator: Option<isize>,
    pub determinant: Option<usize>,
    /// Number of denominator identities that were checked.
    pub denominators_checked: usize,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.violations().is_empty()
    }

    /// Every failing family, in the order value, even, odd, determinant.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if !self.value_ok {
            out.push(Violation {
                identity: Identity::Value,
                index: self.n as isize,
            });
        }
        if let Some(index) = self.even_denominator {
            out.push(Violation {
                identity: Identity::EvenDenominator,
                index,
            });
        }
        if let Some(index) = self.odd_denominator {
            out.push(Violation {
                identity: Identity::OddDenominator,
                index,
            });
        }
        if let Some(index) = self.determinant {
            out.push(Violation {
                identity: Identity::Determinant,
                index: index as isize,
            });
        }
        out
    }

    pub fn first_failure(&self) -> Option<Violation> {
        self.violations().into_iter().next()
    }
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.first_failure() {
            None => write!(f, "n={}: pass", self.n),
            Some(v) => write!(f, "n={}: FAIL ({v})", self.n),
        }
    }
}

/// Checks the interlaced expansion of `S_n` against the exact partial sum.
pub fn verify_theorem(state: &EngelState, n: usize) -> Result<TheoremReport> {
    let predicted = predicted_cf(state, n)?;
    verify_prediction(state, n, &predicted.cf)
}

/// Same checks as [`verify_theorem`] but against an arbitrary candidate
/// expansion of `S_n`.
pub fn verify_prediction(state: &EngelState, n: usize, candidate: &Cf) -> Result<TheoremReport> {
    let sum = partial_sum(state, n)?;
    let table = convergents(candidate);
    let k = state.k();

    let value_ok = cf_eval(candidate) == sum.value;

    let mut denominators_checked = 0;
    let mut check = |index: isize, expected: BigInt| {
        denominators_checked += 1;
        table.q(index) == Some(&expected)
    };

    // q_{2k+2j-2} = x_j for j = 1..n
    let mut even_denominator = None;
    for j in 1..=n {
        let index = (2 * k + 2 * j) as isize - 2;
        let x = BigInt::from(state.x(j).expect("j <= n").clone());
        if !check(index, x) {
            even_denominator = Some(index);
            break;
        }
    }

    // q_{2k+2j-1} = y_j - 1 for j = 0..n-1
    let mut odd_denominator = None;
    for j in 0..n {
        let index = (2 * k + 2 * j) as isize - 1;
        let y = BigInt::from(state.y(j).expect("j < n").clone());
        if !check(index, y - 1) {
            odd_denominator = Some(index);
            break;
        }
    }

    Ok(TheoremReport {
        n,
        k,
        value_ok,
        even_denominator,
        odd_denominator,
        determinant: table.det_violation(),
        denominators_checked,
    })
}

/// The convergent table of the predicted expansion of `S_n`.
pub fn predicted_convergents(state: &EngelState, n: usize) -> Result<ConvergentTable> {
    Ok(convergents(&predicted_cf(state, n)?.cf))
}

/// `2 / x_{n+1}`, an upper bound on `S - S_n` because consecutive terms at
/// least double.
pub fn tail_bound(state: &EngelState, n: usize) -> Result<Rational> {
    state.require(n)?;
    let next = state.x(n + 1).ok_or(Error::IndexOutOfRange {
        index: n + 1,
        available: state.len(),
    })?;
    // Built directly: reducing through a gcd costs quadratic time at this size.
    let next = BigInt::from(next.clone());
    Ok(if next.is_even() {
        Rational::from_reduced(BigInt::one(), next >> 1)
    } else {
        Rational::from_reduced(BigInt::from(2), next)
    })
}

/// Exact check of `|S_N - S_n|^d * x_n^m < 1`, i.e. `|S_N - S_n| < x_n^(-m/d)`.
pub fn approximation_exponent_exceeds(
    state: &EngelState,
    n: usize,
    big_n: usize,
    m: u32,
    d: u32,
) -> Result<bool> {
    let gap = sum_between(state, n, big_n)?;
    let xn = BigInt::from(state.x(n).expect("checked by sum_between").clone());
    let lhs = num_traits::pow(gap.numer().clone(), d as usize) * num_traits::pow(xn, m as usize);
    let rhs = num_traits::pow(gap.denom().clone(), d as usize);
    Ok(lhs < rhs)
}

/// One row of [`irr_exponents`].
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentRow {
    pub n: usize,
    /// Decimal digit count of `Q_n = x_n`.
    pub q_digits: usize,
    /// `log(1 / |S_N - S_n|) / log(Q_n)`.
    pub kappa: f64,
}

impl ExponentRow {
    /// `kappa` to 12 significant digits.
    pub fn kappa_display(&self) -> String {
        format_significant(self.kappa, 12)
    }
}

/// Empirical approximation exponents `kappa_n` for `2 <= n <= N-2`.
pub fn irr_exponents(state: &EngelState, big_n: usize) -> Result<Vec<ExponentRow>> {
    if big_n < 4 {
        return Err(Error::InsufficientTerms {
            required: 4,
            available: big_n,
        });
    }
    state.require(big_n)?;
    (2..=big_n - 2)
        .map(|n| {
            let gap = sum_between(state, n, big_n)?;
            let xn = state.x(n).expect("n <= N");
            let kappa = ln_ratio(gap.denom(), gap.numer())
                / ln_ratio(&BigInt::from(xn.clone()), &BigInt::one());
            Ok(ExponentRow {
                n,
                q_digits: xn.to_string().len(),
                kappa,
            })
        })
        .collect()
}

/// Natural log of `a / b` for positive `a`, `b`, accurate to double precision
/// regardless of the operands' size. The quotient is formed exactly to about
/// 64 significant bits before the logarithm is taken, so no cancellation
/// occurs when `a` and `b` are huge and close.
pub fn ln_ratio(a: &BigInt, b: &BigInt) -> f64 {
    assert!(
        a > &BigInt::zero() && b > &BigInt::zero(),
        "ln_ratio needs positive operands"
    );
    let shift = b.bits() as i64 - a.bits() as i64 + 64;
    let m = if shift >= 0 {
        (a << shift as usize) / b
    } else {
        a / (b << (-shift) as usize)
    };
    m.to_f64().expect("finite").ln() - shift as f64 * std::f64::consts::LN_2
}

fn format_significant(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return v.to_string();
    }
    let magnitude = v.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}
