//! Length tables, glue-length records, ruler smoothing and closed forms.
//!
//! Notation, for level `m`:
//!
//! * `sigma(n)` is the length of glue `S_n`,
//! * `beta(n)` the length of block `B_n`, with `beta(1) = 1` and
//!   `beta(n+1) = (m+1) beta(n) + sigma(n)`,
//! * `tau(n)` the length of tail `T_n`, i.e. `sigma(1) + .. + sigma(n-1)`,
//! * `pi(j)` the `j`-th record (running maximum) of `sigma`, from `j = 0`,
//! * `rho(j)` the `j`-th record after smoothing `sigma` into a ruler
//!   sequence `r(n) = rho(|n|_{m+1})`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Float, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hierarchy::glue_lengths_via_promotion;
use crate::kernel::madic_valuation;

/// Glue, block and tail lengths of one level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthTable {
    pub m: usize,
    /// `sigma(1..=n_max-1)`.
    pub sigma: Vec<u64>,
    /// `beta(1..=n_max)`.
    pub beta: Vec<BigUint>,
    /// `tau(1..=n_max)`; `tau(1) = 0` is the empty tail.
    pub tau: Vec<BigUint>,
}

impl LengthTable {
    pub fn from_sigma(m: usize, sigma: Vec<u64>) -> Self {
        let factor = BigUint::from(m + 1);
        let mut beta = vec![BigUint::one()];
        let mut tau = vec![BigUint::zero()];
        for &s in &sigma {
            beta.push(beta.last().unwrap() * &factor + s);
            tau.push(tau.last().unwrap() + s);
        }
        Self { m, sigma, beta, tau }
    }

    pub fn n_max(&self) -> usize {
        self.beta.len()
    }

    pub fn sigma(&self, n: usize) -> Option<u64> {
        n.checked_sub(1).and_then(|i| self.sigma.get(i).copied())
    }

    pub fn beta(&self, n: usize) -> Option<&BigUint> {
        n.checked_sub(1).and_then(|i| self.beta.get(i))
    }

    pub fn tau(&self, n: usize) -> Option<&BigUint> {
        n.checked_sub(1).and_then(|i| self.tau.get(i))
    }
}

/// `beta(1..=n_max)`, `tau(1..=n_max)` and `sigma(1..n_max)` of level `m`.
pub fn build_length_table(m: usize, n_max: usize) -> Result<LengthTable> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    Ok(LengthTable::from_sigma(m, glue_lengths_via_promotion(m, n_max - 1)?))
}

/// A strict running maximum and the 1-based index where it first occurs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub index: usize,
    pub value: u64,
}

pub fn records(sigma: &[u64]) -> Vec<Record> {
    let mut out: Vec<Record> = Vec::new();
    for (i, &v) in sigma.iter().enumerate() {
        if out.last().is_none_or(|r| v > r.value) {
            out.push(Record { index: i + 1, value: v });
        }
    }
    out
}

/// A glue length `value` at 1-based index `index` that was split into
/// `(value - 1, 1)` to fit the ruler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub index: usize,
    pub value: u64,
}

/// Result of aligning a glue-length sequence with a ruler sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RulerFit {
    pub m: usize,
    /// `rho(0), rho(1), ..` for every class reached.
    pub rho: Vec<u64>,
    /// Raw records `pi(0), pi(1), ..` of the input.
    pub pi: Vec<u64>,
    pub splits: Vec<Split>,
    /// 1-based glue indices where no alignment was possible.
    pub mismatches: Vec<usize>,
    /// The smoothed sequence `r(1), r(2), ..`; positions skipped while
    /// resynchronizing after a mismatch hold 0.
    pub smoothed: Vec<u64>,
}

impl RulerFit {
    pub fn split_values(&self) -> Vec<u64> {
        self.splits.iter().map(|s| s.value).collect()
    }
}

/// What happens to a glue length at a ruler position whose class value is known.
enum Step {
    Take,
    Split,
    Miss,
}

fn step(v: u64, rho: u64, next_class: usize) -> Step {
    if v == rho {
        Step::Take
    } else if v == rho + 1 && next_class == 0 {
        Step::Split
    } else {
        Step::Miss
    }
}

struct Ruler {
    base: u64,
}

impl Ruler {
    fn class(&self, n: u64) -> usize {
        madic_valuation(n, self.base).expect("positions start at 1") as usize
    }

    /// Number of glue lengths consumed from `i` before the first
    /// misalignment, treating classes without a value as matching anything.
    fn survive(&self, sigma: &[u64], rho: &[Option<u64>], mut i: usize, mut n: u64) -> usize {
        let start = i;
        while i < sigma.len() {
            let c = self.class(n);
            match rho.get(c).copied().flatten() {
                None => n += 1,
                Some(r) => match step(sigma[i], r, self.class(n + 1)) {
                    Step::Take => n += 1,
                    Step::Split => n += 2,
                    Step::Miss => break,
                },
            }
            i += 1;
        }
        i - start
    }
}

/// Greedy left-to-right alignment of `sigma` with a base-`(m+1)` ruler.
///
/// At position `n` of class `c = |n|_{m+1}` the next glue length `v` is
/// taken as `r(n)` when `v = rho(c)`, or split into `(v-1, 1)` over
/// positions `n, n+1` when `v = rho(c) + 1` and `n + 1` has class 0.
/// The first time a class is met, both readings of `v` are tried against
/// the rest of the input and the one that stays aligned longer wins (ties
/// keep `v` whole). Anything else is a mismatch, after which alignment
/// restarts at the next class-0 position.
pub fn smooth_to_ruler(m: usize, sigma: &[u64]) -> RulerFit {
    let ruler = Ruler { base: m as u64 + 1 };
    let mut rho: Vec<Option<u64>> = Vec::new();
    let mut splits = Vec::new();
    let mut mismatches = Vec::new();
    let mut smoothed = Vec::new();
    let mut n = 1u64;
    let mut i = 0;

    while i < sigma.len() {
        let v = sigma[i];
        let c = ruler.class(n);
        let next_class = ruler.class(n + 1);
        if rho.len() <= c {
            rho.resize(c + 1, None);
        }
        if rho[c].is_none() {
            let mut whole = rho.clone();
            whole[c] = Some(v);
            let mut chosen = v;
            if v >= 2 && next_class == 0 {
                let mut split = rho.clone();
                split[c] = Some(v - 1);
                let keep = ruler.survive(sigma, &whole, i, n);
                if ruler.survive(sigma, &split, i, n) > keep {
                    chosen = v - 1;
                }
            }
            rho[c] = Some(chosen);
        }
        let r = rho[c].expect("class value set above");
        match step(v, r, next_class) {
            Step::Take => {
                smoothed.push(v);
                n += 1;
            }
            Step::Split => {
                splits.push(Split { index: i + 1, value: v });
                smoothed.extend([v - 1, 1]);
                n += 2;
            }
            Step::Miss => {
                mismatches.push(i + 1);
                smoothed.push(v);
                n += 1;
                while ruler.class(n) != 0 {
                    smoothed.push(0);
                    n += 1;
                }
            }
        }
        i += 1;
    }

    RulerFit {
        m,
        rho: rho.into_iter().map_while(|r| r).collect(),
        pi: records(sigma).into_iter().map(|r| r.value).collect(),
        splits,
        mismatches,
        smoothed,
    }
}

/// `sigma^(m)` long enough to reach ruler classes `0..=j`, with some
/// lookahead past the first class-`j` position for the smoothing decision.
pub fn sigma_through_class(m: usize, j: u32) -> Result<Vec<u64>> {
    let q = m + 1;
    let first = q.pow(j);
    glue_lengths_via_promotion(m, first + (first / q).max(4))
}

/// One instance of `rho(n+1) = rho(n) + beta^(m+1)(n+1) + sigma^(m+1)(n+1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rec1Row {
    pub n: usize,
    pub lhs: u64,
    pub rhs: BigUint,
    pub residual: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rec1Report {
    pub m: usize,
    /// `rho(0) = 1`.
    pub base_holds: bool,
    pub rows: Vec<Rec1Row>,
}

impl Rec1Report {
    pub fn all_zero(&self) -> bool {
        self.base_holds && self.rows.iter().all(|r| r.residual.is_zero())
    }
}

/// Checks the record recurrence for `0 <= n < j_max` from freshly measured
/// tables.
pub fn check_rec1(m: usize, j_max: usize) -> Result<Rec1Report> {
    let sigma = sigma_through_class(m, j_max as u32)?;
    let fit = smooth_to_ruler(m, &sigma);
    let upper = build_length_table(m + 1, j_max + 1)?;
    check_rec1_with(m, j_max, &fit.rho, &upper)
}

/// As [`check_rec1`] with precomputed `rho^(m)` and the level-`m+1` table.
pub fn check_rec1_with(m: usize, j_max: usize, rho: &[u64], upper: &LengthTable) -> Result<Rec1Report> {
    if rho.len() <= j_max || upper.n_max() <= j_max {
        return Err(Error::InvalidArgument(format!(
            "need rho(0..={j_max}) and level-{} lengths through {}",
            m + 1,
            j_max + 1
        )));
    }
    let rows = (0..j_max)
        .map(|n| {
            let rhs = upper.beta(n + 1).unwrap() + upper.sigma(n + 1).unwrap() + rho[n];
            let lhs = rho[n + 1];
            let residual = BigInt::from(lhs) - BigInt::from(rhs.clone());
            Rec1Row { n, lhs, rhs, residual }
        })
        .collect();
    Ok(Rec1Report {
        m,
        base_holds: rho.first() == Some(&1),
        rows,
    })
}

/// Whether a closed form is claimed exactly at the requested index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Validity {
    Exact,
    Approximation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedForm<V> {
    pub value: V,
    pub validity: Validity,
}

fn pow(base: usize, exp: usize) -> BigInt {
    num_traits::pow(BigInt::from(base), exp)
}

/// Block length from its closed form, exact for `1 <= n <= (m+1)^2 - 1`:
/// `((m+1)^n - 1)/m + 2((m+1)^(n-1) - (m+1)^v)/((m+1)^(m+1) - 1)` with
/// `v = (n-1) mod (m+1)`.
pub fn beta_closed_form(m: usize, n: usize) -> ClosedForm<BigUint> {
    assert!(m >= 1 && n >= 1, "level and index start at 1");
    let q = m + 1;
    let v = (n - 1) % q;
    let first = (pow(q, n) - 1u32) / BigInt::from(m);
    let second = (pow(q, n - 1) - pow(q, v)) * 2u32 / (pow(q, q) - 1u32);
    let validity = if n < q * q {
        Validity::Exact
    } else {
        Validity::Approximation
    };
    ClosedForm {
        value: (first + second).to_biguint().expect("positive"),
        validity,
    }
}

/// `beta^(m)(n)` for `n` up to `(m+1)^2`: the closed form, plus one step of
/// the block recurrence at the boundary (where `sigma(n-1) = 1`).
fn beta_exact_through_boundary(m: usize, n: usize) -> ClosedForm<BigUint> {
    let q = m + 1;
    if n == q * q {
        let prev = beta_closed_form(m, n - 1).value;
        let sigma = if (n - 1).is_multiple_of(q) { 3u32 } else { 1 };
        ClosedForm {
            value: prev * q + sigma,
            validity: Validity::Exact,
        }
    } else {
        beta_closed_form(m, n)
    }
}

/// Smoothed record from `(m(n+1+2u) + beta^(m+1)(n+1))/(m+1)` with
/// `u = floor(n/(m+2))`, exact for `0 <= n <= (m+2)^2 - 1`.
pub fn rho_closed_form(m: usize, n: usize) -> Result<ClosedForm<BigRational>> {
    if m == 0 {
        return Err(Error::InvalidLevel);
    }
    let u = n / (m + 2);
    let beta = beta_exact_through_boundary(m + 1, n + 1);
    let validity = if n < (m + 2) * (m + 2) {
        Validity::Exact
    } else {
        Validity::Approximation
    };
    let numer = BigInt::from(m * (n + 1 + 2 * u)) + BigInt::from(beta.value);
    let value = BigRational::new(numer, BigInt::from(m + 1));
    if validity == Validity::Exact && !value.is_integer() {
        return Err(Error::IntegralityViolated { m, n });
    }
    Ok(ClosedForm { value, validity })
}

/// `(m+2)/(m+1) ((m+2)^mu - m (m+1)^(mu-1))`, the estimated tail length
/// after `(m+1)^mu` glues.
pub fn tau_estimate(m: usize, mu: u32) -> BigRational {
    assert!(m >= 1 && mu >= 1, "level and exponent start at 1");
    let mu = mu as usize;
    let inner = pow(m + 2, mu) - BigInt::from(m) * pow(m + 1, mu - 1);
    BigRational::new(BigInt::from(m + 2) * inner, BigInt::from(m + 1))
}

/// Growth ratios `beta(n)/(m+1)^(n-1)` and `pi(j)/(m+2)^j`, with the full
/// history so convergence can be inspected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthConstants<F> {
    pub m: usize,
    pub epsilon: F,
    pub lambda: F,
    pub epsilon_history: Vec<F>,
    pub lambda_history: Vec<F>,
}

fn ratio<F: Float>(num: BigInt, den: BigInt) -> F {
    let r = BigRational::new(num, den).to_f64().expect("finite ratio");
    F::from(r).expect("representable ratio")
}

pub fn growth_constants<F: Float>(table: &LengthTable, pi: &[u64]) -> GrowthConstants<F> {
    let m = table.m;
    let epsilon_history: Vec<F> = table
        .beta
        .iter()
        .enumerate()
        .map(|(i, b)| ratio(BigInt::from(b.clone()), pow(m + 1, i)))
        .collect();
    let lambda_history: Vec<F> = pi
        .iter()
        .enumerate()
        .map(|(j, &p)| ratio(BigInt::from(p), pow(m + 2, j)))
        .collect();
    GrowthConstants {
        m,
        epsilon: epsilon_history.last().copied().unwrap_or_else(F::nan),
        lambda: lambda_history.last().copied().unwrap_or_else(F::nan),
        epsilon_history,
        lambda_history,
    }
}

/// Measures both constants: blocks through `n_max`, records through class `j_max`.
pub fn measure_growth_constants<F: Float>(m: usize, n_max: usize, j_max: u32) -> Result<GrowthConstants<F>> {
    let sigma = sigma_through_class(m, j_max)?;
    let mut pi: Vec<u64> = records(&sigma).into_iter().map(|r| r.value).collect();
    pi.truncate(j_max as usize + 1);
    let table = if n_max <= sigma.len() + 1 {
        LengthTable::from_sigma(m, sigma[..n_max - 1].to_vec())
    } else {
        build_length_table(m, n_max)?
    };
    Ok(growth_constants(&table, &pi))
}

/// `true` when `x` is an integer-valued rational.
pub fn is_integral(x: &BigRational) -> bool {
    x.denom().is_one() || x.numer().is_multiple_of(x.denom())
}
