//! Where each value first appears.
//!
//! Small cases are found by scanning generated terms. The first 5 in `A`
//! is far out of reach, so it is chased down the hierarchy instead: it
//! sits at position 1 of `A^(5)`, 6 of `A^(4)` and 343 of `A^(3)`. In
//! `A^(m)` the first `t` ends the block whose tail is the prefix of
//! `A^(m+1)` ending at the first `t` there, so `x(m) = beta^(m)(i)` where
//! `tau^(m)(i) = x(m+1)`. That pins `x(2)` exactly; `x(1)` is estimated
//! from the asymptotic tail and block lengths.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::analysis::LengthTable;
use crate::error::{Error, Result};
use crate::hierarchy::{glue_lengths_via_promotion, Terms};
use crate::Real;

/// Outcome of a bounded scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FirstOccurrence {
    /// 1-based position.
    Found(u64),
    NotFound {
        budget: u64,
    },
}

impl FirstOccurrence {
    pub fn position(self) -> Option<u64> {
        match self {
            FirstOccurrence::Found(p) => Some(p),
            FirstOccurrence::NotFound { .. } => None,
        }
    }
}

/// Scans the first `budget` terms of `A^(m)` for the value `t`.
pub fn first_occurrence_direct(t: u64, m: usize, budget: u64) -> Result<FirstOccurrence> {
    if m == 0 {
        return Err(Error::InvalidLevel);
    }
    if t < m as u64 {
        return Err(Error::InvalidArgument(format!("A({m}) has no terms below {m}")));
    }
    Ok(Terms::<u32>::new(m, m + 1)
        .take(budget as usize)
        .position(|x| x as u64 == t)
        .map_or(FirstOccurrence::NotFound { budget }, |i| {
            FirstOccurrence::Found(i as u64 + 1)
        }))
}

/// `((t+1)^(t+2) + 2t - 1)/t`, the position of the first `t+2` in `A^(t)`.
pub fn eq_s1_position(t: u32) -> Result<BigUint> {
    if t == 0 {
        return Err(Error::InvalidLevel);
    }
    let num = num_traits::pow(BigUint::from(t + 1), t as usize + 2) + 2 * t - 1u32;
    let (q, r) = num.div_rem(&BigUint::from(t));
    if !r.is_zero() {
        return Err(Error::IntegralityViolated {
            m: t as usize,
            n: t as usize + 2,
        });
    }
    Ok(q)
}

/// `log10` of an arbitrarily large positive integer.
pub fn log10_big(x: &BigUint) -> Real {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").log10();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit head");
    top.log10() + shift as Real * std::f64::consts::LOG10_2
}

/// Iterated exponential `levels[0]^(levels[1]^(...))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TowerExpr {
    pub levels: Vec<u64>,
    /// `log10(log10(value))`, when representable as a float.
    pub loglog10: Option<Real>,
}

impl TowerExpr {
    pub fn new(levels: Vec<u64>) -> Self {
        assert!(
            !levels.is_empty() && levels.iter().all(|&l| l >= 2),
            "tower levels must be >= 2"
        );
        let loglog10 = tower_loglog10(&levels);
        Self { levels, loglog10 }
    }

    pub fn height(&self) -> usize {
        self.levels.len()
    }
}

impl std::fmt::Display for TowerExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.levels.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join("^("))?;
        write!(f, "{}", ")".repeat(self.levels.len() - 1))
    }
}

/// `log10` of a tower, or `None` once it exceeds float range.
fn tower_log10(levels: &[u64]) -> Option<Real> {
    let (&base, rest) = levels.split_first()?;
    let b = (base as Real).log10();
    if rest.is_empty() {
        return Some(b);
    }
    let v = Real::powf(10.0, tower_log10(rest)?) * b;
    v.is_finite().then_some(v)
}

fn tower_loglog10(levels: &[u64]) -> Option<Real> {
    let (&base, rest) = levels.split_first()?;
    let lb = (base as Real).log10().log10();
    if rest.is_empty() {
        return Some(lb);
    }
    Some(tower_log10(rest)? + lb)
}

/// Estimated first position of `t` in `A`: a tower `2^(2^(3^(4^(..(t-1)))))`.
pub fn tower_estimate(t: u64) -> Result<TowerExpr> {
    if t < 5 {
        return Err(Error::TowerTooSmall(t as usize));
    }
    let mut levels = vec![2, 2];
    levels.extend(3..t);
    Ok(TowerExpr::new(levels))
}

/// Exponent `e` in the refined estimate `2^e` for the first 5 in `A`.
/// Carried as a reference value only.
pub const REFINED_FIRST_FIVE_EXPONENT: &str = "418090195952691922788353";

/// `log10(log10(2^e))` for [`REFINED_FIRST_FIVE_EXPONENT`].
pub fn refined_first_five_loglog10() -> Real {
    let e: BigUint = REFINED_FIRST_FIVE_EXPONENT.parse().expect("decimal constant");
    log10_big(&e) + std::f64::consts::LOG10_2.log10()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Position {
    Exact(BigUint),
    /// Only `log10(log10(position))` is known.
    LogLog10(Real),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelPosition {
    pub m: usize,
    pub position: Position,
}

/// The chain of first positions of a value down the hierarchy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccurrenceReport {
    pub t: u64,
    /// Ordered from the top level down to level 1.
    pub positions: Vec<LevelPosition>,
    /// Index `i` with `tau^(2)(i) = x(3)`.
    pub anchor_index: usize,
    /// Solution of `tau^(1)(2^mu + 1) = x(2)` under the tail estimate.
    pub mu: Real,
    /// Block-growth constant used for the last step.
    pub epsilon: Real,
}

impl OccurrenceReport {
    pub fn position(&self, m: usize) -> Option<&Position> {
        self.positions.iter().find(|p| p.m == m).map(|p| &p.position)
    }

    pub fn exact(&self, m: usize) -> Option<&BigUint> {
        match self.position(m)? {
            Position::Exact(x) => Some(x),
            Position::LogLog10(_) => None,
        }
    }

    pub fn loglog10_level_one(&self) -> Option<Real> {
        match self.position(1)? {
            Position::LogLog10(v) => Some(*v),
            Position::Exact(x) => Some(log10_big(x).log10()),
        }
    }
}

/// Solves `log10(1.5) + mu log10(3) + log10(1 - (2/3)^mu / 2) = target` by
/// bisection; the left side is the log of the estimated level-1 tail
/// length after `2^mu` glues.
pub fn solve_mu(target_log10: Real) -> Real {
    let f =
        |mu: Real| 1.5f64.log10() + mu * 3f64.log10() + (1.0 - 0.5 * (2.0f64 / 3.0).powf(mu)).log10() - target_log10;
    let (mut lo, mut hi) = (1.0, 1.0);
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Follows the first 5 from `A^(5)` down to `A`.
pub fn first_five_chain() -> Result<OccurrenceReport> {
    let x3 = match first_occurrence_direct(5, 3, 10_000)? {
        FirstOccurrence::Found(p) => p,
        FirstOccurrence::NotFound { .. } => return Err(Error::FirstFiveAnchorMismatch { target: 0 }),
    };
    if eq_s1_position(3)? != BigUint::from(x3) {
        return Err(Error::FirstFiveAnchorMismatch { target: x3 });
    }

    // tau grows by at least one per glue, so x3 glues always suffice.
    let table = LengthTable::from_sigma(2, glue_lengths_via_promotion(2, x3 as usize)?);
    let target = BigUint::from(x3);
    let anchor_index = (1..=table.n_max())
        .find(|&i| table.tau(i).is_some_and(|t| *t >= target))
        .filter(|&i| table.tau(i) == Some(&target))
        .ok_or(Error::FirstFiveAnchorMismatch { target: x3 })?;
    let x2 = table.beta(anchor_index).expect("index within table").clone();

    let mu = solve_mu(log10_big(&x2));
    let level1 = LengthTable::from_sigma(1, glue_lengths_via_promotion(1, 29)?);
    let epsilon = log10_big(level1.beta(30).unwrap()) - 29.0 * std::f64::consts::LOG10_2;
    let epsilon = Real::powf(10.0, epsilon);
    // x(1) = beta^(1)(2^mu + 1) ~ epsilon 2^(2^mu)
    let log10_x1 = Real::powf(2.0, mu) * std::f64::consts::LOG10_2 + epsilon.log10();

    let exact = |m, x: BigUint| LevelPosition {
        m,
        position: Position::Exact(x),
    };
    Ok(OccurrenceReport {
        t: 5,
        positions: vec![
            exact(5, BigUint::from(1u32)),
            exact(4, BigUint::from(6u32)),
            exact(3, BigUint::from(x3)),
            exact(2, x2),
            LevelPosition {
                m: 1,
                position: Position::LogLog10(log10_x1.log10()),
            },
        ],
        anchor_index,
        mu,
        epsilon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direct_scans() {
        assert_eq!(
            first_occurrence_direct(4, 1, 1000).unwrap(),
            FirstOccurrence::Found(220)
        );
        assert_eq!(first_occurrence_direct(3, 1, 100).unwrap(), FirstOccurrence::Found(9));
        assert_eq!(
            first_occurrence_direct(5, 3, 1000).unwrap(),
            FirstOccurrence::Found(343)
        );
        assert_eq!(
            first_occurrence_direct(5, 1, 500).unwrap(),
            FirstOccurrence::NotFound { budget: 500 }
        );
        assert!(first_occurrence_direct(1, 2, 10).is_err());
    }

    #[test]
    fn eq_s1_values() {
        let v: Vec<u64> = (1..=3).map(|t| eq_s1_position(t).unwrap().to_u64().unwrap()).collect();
        assert_eq!(v, [9, 42, 343]);
        for t in 1..=12 {
            assert!(eq_s1_position(t).is_ok());
        }
    }

    #[test]
    fn towers() {
        let t = tower_estimate(5).unwrap();
        assert_eq!(t.levels, [2, 2, 3, 4]);
        assert_eq!(t.height(), 4);
        let ll = t.loglog10.unwrap();
        assert!((ll - (81.0 * 2f64.log10() + 2f64.log10().log10())).abs() < 1e-9);
        let t6 = tower_estimate(6).unwrap();
        assert_eq!(t6.levels, [2, 2, 3, 4, 5]);
        assert_eq!(t6.loglog10, None);
        assert!(matches!(tower_estimate(4), Err(Error::TowerTooSmall(4))));
        assert_eq!(tower_estimate(5).unwrap().to_string(), "2^(2^(3^(4)))");
    }

    #[test]
    fn small_towers_match_big_integers() {
        for levels in [
            vec![2, 2, 3],
            vec![3, 2, 2],
            vec![2, 3, 2],
            vec![2, 2, 2, 2],
            vec![5, 3],
        ] {
            let mut v = BigUint::from(*levels.last().unwrap());
            for &b in levels.iter().rev().skip(1) {
                v = num_traits::pow(BigUint::from(b), v.to_usize().unwrap());
            }
            let want = log10_big(&v).log10();
            let got = TowerExpr::new(levels.clone()).loglog10.unwrap();
            assert!((got - want).abs() < 1e-9, "{levels:?}: {got} vs {want}");
        }
    }

    #[test]
    fn refined_constant() {
        assert!((refined_first_five_loglog10() - 23.09987).abs() < 1e-5);
    }

    #[test]
    fn big_log() {
        let x = num_traits::pow(BigUint::from(10u32), 2000) * 3u32;
        assert!((log10_big(&x) - (2000.0 + 3f64.log10())).abs() < 1e-9);
    }
}
