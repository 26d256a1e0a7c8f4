//! Generation of `(x_n)`, `(y_n)`, `(z_n)` from a rational seed `p/q` and a
//! coefficient rule.
//!
//! ```text
//! x_1 = q,  x_{n+1} = x_n * y_{n-1} * (x_n * z_n + 1)
//! y_0 = q_{2k-1} + 1,  y_n = x_{n+1} / x_n
//! ```
//!
//! where `[a_0; ..., a_{2k}]` is the even-normalized expansion of `p/q` and
//! `q_{2k-1}` its penultimate convergent denominator.
//!
//! All public accessors take the mathematical (1-based) index. The mapping to
//! vector positions lives in [`EngelState::slot`] and nowhere else.

use num_bigint::{BigInt, BigUint};

use crate::cf::{cf_even_normalize, cf_expand, convergents, Cf, ConvergentTable};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::zspec::{eval_z, ZExpr};

pub const DEFAULT_DIGIT_BUDGET: u64 = 100_000;

const LOG10_2: f64 = std::f64::consts::LOG10_2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedConfig {
    pub seed: Rational,
    pub zrule: ZExpr,
}

impl SeedConfig {
    pub fn new(seed: Rational, zrule: ZExpr) -> Self {
        SeedConfig { seed, zrule }
    }

    /// Parses a `P/Q` seed and a z-rule.
    pub fn parse(seed: &str, rule: &str) -> Result<Self> {
        Ok(SeedConfig::new(seed.parse()?, rule.parse()?))
    }
}

#[derive(Clone, Debug)]
pub struct EngelState {
    config: SeedConfig,
    k: usize,
    y0: BigUint,
    xs: Vec<BigUint>,
    // ys[i] = y_{i+1}, zs[i] = z_{i+1}
    ys: Vec<BigUint>,
    zs: Vec<BigUint>,
    base_cf: Cf,
    base_convergents: ConvergentTable,
    digit_budget: u64,
}

/// Seeds the construction: expands `p/q`, reads off `k` and `y_0`, and sets `x_1 = q`.
pub fn init_seed(cfg: SeedConfig) -> EngelState {
    let base_cf = cf_even_normalize(&cf_expand(&cfg.seed));
    let k = base_cf.final_index() / 2;
    let base_convergents = convergents(&base_cf);
    let q_prev = base_convergents
        .q(2 * k as isize - 1)
        .expect("row 2k-1 exists, the virtual row covers k = 0");
    let y0 = to_biguint(q_prev + 1);
    let x1 = to_biguint(cfg.seed.denom().clone());
    EngelState {
        config: cfg,
        k,
        y0,
        xs: vec![x1],
        ys: Vec::new(),
        zs: Vec::new(),
        base_cf,
        base_convergents,
        digit_budget: DEFAULT_DIGIT_BUDGET,
    }
}

fn to_biguint(v: BigInt) -> BigUint {
    v.to_biguint().expect("value is nonnegative")
}

impl EngelState {
    pub fn new(cfg: SeedConfig) -> Self {
        init_seed(cfg)
    }

    /// Seeds and generates terms until `x_terms` is stored.
    pub fn generate(cfg: SeedConfig, terms: usize, digit_budget: u64) -> Result<Self> {
        let mut state = init_seed(cfg).with_digit_budget(digit_budget);
        state.extend_to(terms)?;
        Ok(state)
    }

    /// Largest number of decimal digits any generated term may have.
    pub fn with_digit_budget(mut self, digits: u64) -> Self {
        self.digit_budget = digits;
        self
    }

    pub fn digit_budget(&self) -> u64 {
        self.digit_budget
    }

    pub fn config(&self) -> &SeedConfig {
        &self.config
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn y0(&self) -> &BigUint {
        &self.y0
    }

    pub fn base_cf(&self) -> &Cf {
        &self.base_cf
    }

    pub fn base_convergents(&self) -> &ConvergentTable {
        &self.base_convergents
    }

    /// Number of stored terms `N` (`x_1..x_N`).
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Vector position of the 1-based index `n`.
    fn slot(n: usize) -> Option<usize> {
        n.checked_sub(1)
    }

    /// `x_n` for `1 <= n <= len()`.
    pub fn x(&self, n: usize) -> Option<&BigUint> {
        Self::slot(n).and_then(|i| self.xs.get(i))
    }

    /// `y_n` for `0 <= n < len()`.
    pub fn y(&self, n: usize) -> Option<&BigUint> {
        match Self::slot(n) {
            None => Some(&self.y0),
            Some(i) => self.ys.get(i),
        }
    }

    /// `z_n` for `1 <= n < len()`.
    pub fn z(&self, n: usize) -> Option<&BigUint> {
        Self::slot(n).and_then(|i| self.zs.get(i))
    }

    /// `x_1..x_N`.
    pub fn xs(&self) -> &[BigUint] {
        &self.xs
    }

    /// `y_1..y_{N-1}`; `y_0` is [`EngelState::y0`].
    pub fn ys(&self) -> &[BigUint] {
        &self.ys
    }

    /// `z_1..z_{N-1}`.
    pub fn zs(&self) -> &[BigUint] {
        &self.zs
    }

    pub(crate) fn require(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.len() {
            Err(Error::IndexOutOfRange {
                index: n,
                available: self.len(),
            })
        } else {
            Ok(())
        }
    }

    /// Appends `steps` terms in place. On error the state keeps every term
    /// produced before the failing step.
    pub fn extend(&mut self, steps: usize) -> Result<()> {
        for _ in 0..steps {
            self.step()?;
        }
        Ok(())
    }

    /// Extends until `x_terms` is stored. Never shrinks.
    pub fn extend_to(&mut self, terms: usize) -> Result<()> {
        self.extend(terms.saturating_sub(self.len()))
    }

    /// Snapshot variant of [`EngelState::extend`].
    pub fn extended(&self, steps: usize) -> Result<Self> {
        let mut next = self.clone();
        next.extend(steps)?;
        Ok(next)
    }

    fn step(&mut self) -> Result<()> {
        let n = self.len();
        let x = &self.xs[n - 1];
        let y_prev = self.y(n - 1).expect("y_{n-1} is stored for n <= len");

        let budget_bits = (self.digit_budget as f64 / LOG10_2).ceil() as u64;
        let z_bits = self
            .config
            .zrule
            .bit_bound(usize::BITS as u64 - n.leading_zeros() as u64, x.bits());
        // x_{n+1} = x * y_prev * (x * z + 1) has at most this many bits
        let projected_bits = x
            .bits()
            .saturating_mul(2)
            .saturating_add(y_prev.bits())
            .saturating_add(z_bits)
            .saturating_add(1);
        if projected_bits > budget_bits {
            return Err(Error::DigitBudgetExceeded {
                step: n + 1,
                projected_digits: (projected_bits as f64 * LOG10_2).ceil() as u64,
                budget: self.digit_budget,
            });
        }

        let z = eval_z(&self.config.zrule, n, x)?;
        let y = y_prev * (x * &z + 1u32);
        let next = x * &y;
        self.zs.push(z);
        self.ys.push(y);
        self.xs.push(next);
        Ok(())
    }

    /// First `n >= 2` where `x_{n+1} x_{n-1} != x_n^2 (z_n x_n + 1)`.
    pub fn recurrence_violation(&self) -> Option<usize> {
        (2..self.len()).find(|&n| {
            let (prev, cur, next) = (&self.xs[n - 2], &self.xs[n - 1], &self.xs[n]);
            let z = &self.zs[n - 1];
            next * prev != cur * cur * (z * cur + 1u32)
        })
    }

    /// Overwrites `x_n`. Only for building deliberately inconsistent states.
    #[doc(hidden)]
    pub fn corrupt_x(&mut self, n: usize, value: BigUint) {
        let i = Self::slot(n).expect("n >= 1");
        self.xs[i] = value;
    }
}

/// True iff the second-order recurrence holds at every `n >= 2` with
/// `x_{n-1}, x_n, x_{n+1}` stored. Vacuously true for fewer than three terms.
pub fn check_recurrence(state: &EngelState) -> bool {
    state.recurrence_violation().is_none()
}

/// For each `n >= 3` with `x_{n+1}` stored, whether `x_{n+1}^2 > x_n^5`.
pub fn check_growth(state: &EngelState) -> Vec<(usize, bool)> {
    (3..state.len())
        .map(|n| {
            let cur = state.x(n).expect("n < len");
            let next = state.x(n + 1).expect("n + 1 <= len");
            (n, square_exceeds_fifth_power(next, cur))
        })
        .collect()
}

/// `a^2 > b^5`, decided from bit lengths when they are far enough apart.
fn square_exceeds_fifth_power(a: &BigUint, b: &BigUint) -> bool {
    let (a_bits, b_bits) = (a.bits(), b.bits());
    // 2^(2(a_bits-1)) <= a^2 and b^5 < 2^(5 b_bits)
    if a_bits > 0 && 2 * (a_bits - 1) >= 5 * b_bits {
        return true;
    }
    // a^2 < 2^(2 a_bits) and 2^(5(b_bits-1)) <= b^5
    if b_bits > 0 && 2 * a_bits <= 5 * (b_bits - 1) {
        return false;
    }
    a * a > num_traits::pow(b.clone(), 5)
}
