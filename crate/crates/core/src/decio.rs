//! Truncated decimal expansions, and certified digits of the infinite sum.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::engel::{EngelState, SeedConfig};
use crate::error::Result;
use crate::rational::Rational;
use crate::series::partial_sum_fraction;

/// `sign * floor(|r| * 10^d) / 10^d`, printed with exactly `d` fractional digits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecimalString {
    pub negative: bool,
    pub int_part: BigUint,
    pub frac_digits: String,
    /// True when the expansion was cut short, i.e. `r` has more nonzero digits.
    pub truncated: bool,
}

impl DecimalString {
    pub fn digits(&self) -> usize {
        self.frac_digits.len()
    }
}

impl fmt::Display for DecimalString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        write!(f, "{}", self.int_part)?;
        if !self.frac_digits.is_empty() {
            write!(f, ".{}", self.frac_digits)?;
        }
        Ok(())
    }
}

pub fn to_decimal(r: &Rational, d: usize) -> DecimalString {
    truncate(r.numer(), r.denom(), d)
}

/// `to_decimal` for `num/den` with `den > 0`, not necessarily reduced.
fn truncate(num: &BigInt, den: &BigInt, d: usize) -> DecimalString {
    let scaled = num.abs() * num_traits::pow(BigInt::from(10), d);
    let (q, rem) = scaled.div_rem(den);
    let unit = num_traits::pow(BigInt::from(10), d);
    let (int_part, frac) = q.div_rem(&unit);
    let frac_digits = if d == 0 {
        String::new()
    } else {
        format!("{:0>d$}", frac.to_string())
    };
    DecimalString {
        negative: num.is_negative(),
        int_part: int_part.to_biguint().expect("nonnegative"),
        frac_digits,
        truncated: !rem.is_zero(),
    }
}

/// Digits of the limit `S` together with the partial sum that certifies them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedDigits {
    pub decimal: DecimalString,
    /// Index `n` of the partial sum `S_n` that was expanded.
    pub n: usize,
    /// Largest `e` with `2 / x_{n+1} < 10^-e`.
    pub tail_exponent: usize,
}

/// The first `d` truncated digits of `S`.
///
/// Terms are generated until `2 / x_{n+1} < 10^-(d+2)`. `S` lies in
/// `(S_n, S_n + 2/x_{n+1})`, so the digits are certified once both ends of that
/// interval truncate to the same `d` digits; this fails only when digits
/// `d+1, d+2` of `S_n` are both 9, and then one more term is taken.
pub fn digits_of_sum(cfg: SeedConfig, d: usize, digit_budget: u64) -> Result<CertifiedDigits> {
    let mut state = EngelState::new(cfg).with_digit_budget(digit_budget);
    let threshold = num_traits::pow(BigUint::from(10u32), d + 2) * 2u32;
    state.extend_to(2)?;
    while state.x(state.len()).expect("len >= 1") <= &threshold {
        state.extend(1)?;
    }
    loop {
        let n = state.len() - 1;
        // S_n = P/x_n and S_n + 2/x_{n+1} = (P y_n + 2)/x_{n+1}; neither is reduced.
        let sum = partial_sum_fraction(&state, n)?;
        let next = state.x(n + 1).expect("n + 1 = len");
        let y = BigInt::from(state.y(n).expect("n < len").clone());
        let upper = sum.numer() * y + 2;
        let decimal = truncate(sum.numer(), sum.denom(), d);
        if same_digits(&decimal, &truncate(&upper, &BigInt::from(next.clone()), d)) {
            return Ok(CertifiedDigits {
                decimal,
                n,
                tail_exponent: tail_exponent(next),
            });
        }
        state.extend(1)?;
    }
}

fn same_digits(a: &DecimalString, b: &DecimalString) -> bool {
    a.negative == b.negative && a.int_part == b.int_part && a.frac_digits == b.frac_digits
}

/// Largest `e` with `2 * 10^e < x`. Requires `x > 2`.
fn tail_exponent(x: &BigUint) -> usize {
    let mut e = x.to_string().len().saturating_sub(1);
    let ten = BigUint::from(10u32);
    while e > 0 && num_traits::pow(ten.clone(), e) * 2u32 >= *x {
        e -= 1;
    }
    e
}
