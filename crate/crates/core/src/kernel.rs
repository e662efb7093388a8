//! Curling numbers and the primitives built on them.
//!
//! The curling number of a word `U` is the largest `k` such that
//! `U = X Y^k` with `Y` nonempty. Two engines compute it:
//!
//! * [`curling_number`] scans candidate periods directly. It is quadratic
//!   over a whole generation run but has no state, so it doubles as the
//!   oracle for everything else.
//! * [`IncrementalCurling`] follows a word as it grows and only revisits a
//!   period when it could newly produce a large enough repetition.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::Symbol;

/// The curling number `k` together with the shortest `Y` attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurlingResult {
    pub k: usize,
    pub min_period: usize,
}

impl CurlingResult {
    const TRIVIAL: Self = Self { k: 1, min_period: 1 };
}

/// Reference curling number: scans periods `1..=len/2` in increasing order,
/// counting repetitions backward from the end of the word.
pub fn curling_number<T: PartialEq>(u: &[T]) -> Result<CurlingResult> {
    let n = u.len();
    if n == 0 {
        return Err(Error::EmptyWord);
    }
    let mut best = CurlingResult::TRIVIAL;
    for p in 1..=n / 2 {
        // A longer period can only win with strictly more copies.
        if (best.k + 1) * p > n {
            break;
        }
        let limit = n - p;
        let mut matched = 0;
        while matched < limit && u[n - 1 - matched] == u[n - 1 - matched - p] {
            matched += 1;
        }
        let k = 1 + matched / p;
        if k > best.k {
            best = CurlingResult { k, min_period: p };
        }
    }
    Ok(best)
}

/// `C^(m)(U) = max(m, C(U))`.
pub fn bounded_curling_number<T: PartialEq>(u: &[T], floor_m: usize) -> Result<usize> {
    Ok(curling_number(u)?.k.max(floor_m))
}

/// Curling number transform: `out[0] = 1`, `out[i] = C(u[..i])`.
pub fn curling_transform<T: PartialEq, S: Symbol>(u: &[T]) -> Vec<S> {
    (0..u.len())
        .map(|i| match i {
            0 => S::one(),
            _ => S::from_count(curling_number(&u[..i]).expect("nonempty prefix").k),
        })
        .collect()
}

/// Same as [`curling_transform`], computed with the incremental engine.
pub fn curling_transform_incremental<T: Symbol>(u: &[T]) -> Vec<T> {
    let mut state = IncrementalCurling::new(1);
    let mut out = Vec::with_capacity(u.len());
    for &x in u {
        out.push(match state.observation() {
            None => T::one(),
            Some(obs) => T::from_count(obs.exact().expect("floor 1 is always exact").k),
        });
        state.push(x);
    }
    out
}

/// `|n|_m`: exponent of the highest power of `m` dividing `n`.
pub fn madic_valuation(n: u64, m: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::ValuationUndefined);
    }
    if m < 2 {
        return Err(Error::ValuationBase(m));
    }
    let mut n = n;
    let mut e = 0;
    while n.is_multiple_of(m) {
        n /= m;
        e += 1;
    }
    Ok(e)
}

/// What the incremental engine knows about the current word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observation {
    Exact(CurlingResult),
    /// The curling number is below `bound`; its exact value was not needed.
    Below {
        bound: usize,
    },
}

impl Observation {
    pub fn exact(self) -> Option<CurlingResult> {
        match self {
            Observation::Exact(r) => Some(r),
            Observation::Below { .. } => None,
        }
    }

    /// `C^(m)` of the observed word. `m` must not exceed the engine's
    /// resolution floor, otherwise a `Below` observation is ambiguous.
    pub fn bounded(self, m: usize) -> usize {
        match self {
            Observation::Exact(r) => r.k.max(m),
            Observation::Below { bound } => {
                debug_assert!(bound <= m);
                m
            }
        }
    }
}

/// Incrementally maintained curling state for a growing word.
///
/// `resolution` is the smallest curling number the caller needs exactly;
/// smaller values are reported as [`Observation::Below`]. A resolution of
/// 1 or 2 always yields exact results.
///
/// With `span = max(resolution, 2)`, period `p` matters only once its
/// trailing run (the number of trailing `i` with `u[i] == u[i - p]`)
/// reaches `(span - 1) * p`. A run grows by at most one per appended term,
/// so each period is re-examined only at the earliest length at which it
/// could reach that threshold. Re-examination starts from the run cached
/// at the previous visit and compares only the terms appended since.
#[derive(Debug)]
pub struct IncrementalCurling<T> {
    word: Vec<T>,
    span: usize,
    // Per period p (index p - 1): word length at the last visit and the
    // exact trailing run at that length.
    seen_at: Vec<u32>,
    seen_run: Vec<u32>,
    queue: BinaryHeap<Reverse<(u32, u32)>>,
    hits: Vec<(u32, u32)>,
    current: Option<Observation>,
}

impl<T: Clone> Clone for IncrementalCurling<T> {
    fn clone(&self) -> Self {
        Self {
            word: self.word.clone(),
            span: self.span,
            seen_at: self.seen_at.clone(),
            seen_run: self.seen_run.clone(),
            queue: self.queue.clone(),
            hits: self.hits.clone(),
            current: self.current,
        }
    }

    // Reuses allocations; the exhaustive search copies states constantly.
    fn clone_from(&mut self, source: &Self) {
        self.word.clone_from(&source.word);
        self.span = source.span;
        self.seen_at.clone_from(&source.seen_at);
        self.seen_run.clone_from(&source.seen_run);
        self.queue.clone_from(&source.queue);
        self.hits.clone_from(&source.hits);
        self.current = source.current;
    }
}

impl<T: Symbol> IncrementalCurling<T> {
    pub fn new(resolution: usize) -> Self {
        Self {
            word: Vec::new(),
            span: resolution.max(2),
            seen_at: Vec::new(),
            seen_run: Vec::new(),
            queue: BinaryHeap::new(),
            hits: Vec::new(),
            current: None,
        }
    }

    pub fn from_word(resolution: usize, word: &[T]) -> Self {
        let mut s = Self::new(resolution);
        s.extend(word.iter().copied());
        s
    }

    pub fn resolution(&self) -> usize {
        self.span
    }

    pub fn word(&self) -> &[T] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn into_word(self) -> Vec<T> {
        self.word
    }

    /// Curling observation for the current word (`None` while empty).
    pub fn observation(&self) -> Option<Observation> {
        self.current
    }

    pub fn extend(&mut self, terms: impl IntoIterator<Item = T>) {
        for x in terms {
            self.push(x);
        }
    }

    pub fn push(&mut self, x: T) {
        self.word.push(x);
        let n = self.word.len();
        let now = n as u32;

        for p in self.seen_at.len() + 1..=n / self.span {
            // Before length p + 1 there is nothing to compare.
            self.seen_at.push(p as u32);
            self.seen_run.push(0);
            self.queue.push(Reverse((now, p as u32)));
        }

        self.hits.clear();
        let lim = (self.span - 1) as u32;
        while let Some(&Reverse((due, p))) = self.queue.peek() {
            if due > now {
                break;
            }
            self.queue.pop();
            let run = self.run_at(p as usize);
            let i = p as usize - 1;
            self.seen_at[i] = now;
            self.seen_run[i] = run;
            let threshold = lim * p;
            if run >= threshold {
                self.hits.push((p, run));
                self.queue.push(Reverse((now + 1, p)));
            } else {
                self.queue.push(Reverse((now + threshold - run, p)));
            }
        }

        self.current = Some(if let Some(best) = self.best() {
            Observation::Exact(best)
        } else if self.span == 2 {
            Observation::Exact(CurlingResult::TRIVIAL)
        } else {
            Observation::Below { bound: self.span }
        });
    }

    /// Exact trailing run of period `p` for the current word.
    fn run_at(&self, p: usize) -> u32 {
        let w = &self.word;
        let n = w.len();
        let since = self.seen_at[p - 1] as usize;
        for j in 0..n - since {
            if w[n - 1 - j] != w[n - 1 - j - p] {
                return j as u32;
            }
        }
        self.seen_run[p - 1] + (n - since) as u32
    }

    fn best(&self) -> Option<CurlingResult> {
        self.hits
            .iter()
            .map(|&(p, run)| CurlingResult {
                k: 1 + (run / p) as usize,
                min_period: p as usize,
            })
            .max_by(|a, b| a.k.cmp(&b.k).then(b.min_period.cmp(&a.min_period)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(u: &[u32]) -> CurlingResult {
        curling_number(u).unwrap()
    }

    /// Tries every (period, count) pair directly.
    fn brute_force(u: &[u32]) -> CurlingResult {
        let n = u.len();
        let mut best = CurlingResult { k: 1, min_period: 1 };
        for p in 1..=n {
            for k in 1..=n / p {
                let tail = &u[n - k * p..];
                let block = &tail[..p];
                if tail.chunks(p).all(|c| c == block) && (k > best.k || (k == best.k && p < best.min_period)) {
                    best = CurlingResult { k, min_period: p };
                }
            }
        }
        best
    }

    #[test]
    fn worked_examples() {
        assert_eq!(c(&[1]), CurlingResult { k: 1, min_period: 1 });
        assert_eq!(c(&[1, 1]), CurlingResult { k: 2, min_period: 1 });
        assert_eq!(c(&[8, 9, 10, 11, 11, 11]), CurlingResult { k: 3, min_period: 1 });
        assert_eq!(c(&[2, 2, 2, 3]), CurlingResult { k: 1, min_period: 1 });
        let r = c(&[2, 3, 2, 2, 2, 3, 2, 3]);
        assert_eq!(r.k, 2);
        assert!(r.min_period <= 4);
        assert_eq!(r, brute_force(&[2, 3, 2, 2, 2, 3, 2, 3]));
    }

    #[test]
    fn empty_word_is_an_error() {
        assert!(matches!(curling_number::<u32>(&[]), Err(Error::EmptyWord)));
        assert!(bounded_curling_number::<u32>(&[], 2).is_err());
    }

    #[test]
    fn bounded_promotes() {
        assert_eq!(bounded_curling_number(&[2u32], 2).unwrap(), 2);
        assert_eq!(bounded_curling_number(&[2u32, 2, 2], 2).unwrap(), 3);
        assert_eq!(bounded_curling_number(&[1u32, 1], 1).unwrap(), 2);
    }

    #[test]
    fn tie_break_prefers_shortest_period() {
        // Both Y = (1) and Y = (1,1) give k >= 2; the maximum k = 4 is at p = 1.
        assert_eq!(c(&[1, 1, 1, 1]), CurlingResult { k: 4, min_period: 1 });
        // (1 2)(1 2) and (1 2 1 2)... only p = 2 gives k = 2.
        assert_eq!(c(&[3, 1, 2, 1, 2]), CurlingResult { k: 2, min_period: 2 });
    }

    #[test]
    fn transform_examples() {
        let tm = [0u8, 1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 1, 1, 0];
        let t: Vec<u8> = curling_transform(&tm);
        assert_eq!(t, [1, 1, 1, 2, 1, 1, 2, 2, 1, 2, 1, 2, 2, 1, 2, 2]);
        let kol = [1u8, 2, 2, 1, 1, 2, 1, 2, 2, 1, 2, 2, 1, 1, 2, 1];
        let t: Vec<u8> = curling_transform(&kol);
        assert_eq!(t, [1, 1, 1, 2, 1, 2, 1, 1, 2, 2, 1, 2, 2, 2, 2, 1]);
        assert!(curling_transform::<u32, u32>(&[]).is_empty());
        assert_eq!(curling_transform_incremental(&kol), t);
    }

    #[test]
    fn ruler_prefix_transforms_to_ones() {
        let ruler: Vec<u32> = (1..=64u64).map(|n| madic_valuation(n, 2).unwrap() + 1).collect();
        let t: Vec<u32> = curling_transform(&ruler);
        assert!(t.iter().all(|&x| x == 1));
        for i in 1..ruler.len() {
            assert_eq!(brute_force(&ruler[..i]).k, 1);
        }
    }

    #[test]
    fn valuations() {
        assert_eq!(madic_valuation(8, 2).unwrap(), 3);
        assert_eq!(madic_valuation(12, 2).unwrap(), 2);
        assert_eq!(madic_valuation(9, 3).unwrap(), 2);
        assert_eq!(madic_valuation(7, 3).unwrap(), 0);
        assert!(matches!(madic_valuation(0, 2), Err(Error::ValuationUndefined)));
        assert!(matches!(madic_valuation(4, 1), Err(Error::ValuationBase(1))));
    }

    #[test]
    fn incremental_below_resolution() {
        let mut s = IncrementalCurling::<u32>::new(3);
        s.extend([3, 3]);
        assert_eq!(s.observation(), Some(Observation::Below { bound: 3 }));
        s.push(3);
        assert_eq!(
            s.observation(),
            Some(Observation::Exact(CurlingResult { k: 3, min_period: 1 }))
        );
        assert_eq!(s.observation().unwrap().bounded(3), 3);
        s.push(4);
        assert_eq!(s.observation().unwrap().bounded(3), 3);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn reference_matches_brute_force(u in prop::collection::vec(1u32..=3, 1..=64)) {
                let r = curling_number(&u).unwrap();
                prop_assert_eq!(r, brute_force(&u));
                // decomposition witness
                let n = u.len();
                prop_assert!(r.k * r.min_period <= n);
                let tail = &u[n - r.k * r.min_period..];
                prop_assert!(tail.chunks(r.min_period).all(|c| c == &tail[..r.min_period]));
                prop_assert_eq!(bounded_curling_number(&u, 1).unwrap(), r.k);
            }

            #[test]
            fn incremental_matches_reference(
                u in prop::collection::vec(1u32..=3, 1..=80),
                resolution in 1usize..=4,
            ) {
                let mut s = IncrementalCurling::new(resolution);
                for i in 0..u.len() {
                    s.push(u[i]);
                    let r = curling_number(&u[..=i]).unwrap();
                    match s.observation().unwrap() {
                        Observation::Exact(got) => prop_assert_eq!(got, r),
                        Observation::Below { bound } => prop_assert!(r.k < bound && bound == resolution),
                    }
                    if r.k >= resolution {
                        prop_assert_eq!(s.observation().unwrap(), Observation::Exact(r));
                    }
                }
            }
        }
    }
}
