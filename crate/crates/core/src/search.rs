//! Exhaustive curling experiments over starting words in `{2, 3}`.
//!
//! Each starting word is extended by its own curling number for as long as
//! that number is at least 2. The search enumerates all `2^n` starts
//! depth-first, so words sharing a prefix share its curling state, and
//! splits the tree by a fixed-length prefix across a worker pool.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{IncrementalCurling, Observation};
use crate::word::{write_terms, FiniteWord};

/// Default number of appended terms allowed per starting word.
pub const DEFAULT_BUDGET: usize = 100_000;

/// Alphabet of the experiment.
pub const ALPHABET: [u8; 2] = [2, 3];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionResult {
    pub start: FiniteWord<u8>,
    /// Length just before the first curling number below the floor.
    pub final_length: usize,
    pub final_word: FiniteWord<u8>,
    /// The budget ran out before a small curling number appeared.
    pub hit_budget: bool,
}

/// Extends `state` while its curling number is at least its resolution.
/// Returns `false` if `budget` terms were appended without stopping.
fn run_out(state: &mut IncrementalCurling<u8>, budget: usize) -> bool {
    let mut appended = 0;
    while let Some(Observation::Exact(r)) = state.observation() {
        if r.k < state.resolution() {
            break;
        }
        if appended == budget {
            return false;
        }
        state.push(u8::try_from(r.k).expect("curling numbers stay small in this experiment"));
        appended += 1;
    }
    true
}

/// Extends `start` by curling numbers while they are at least `floor`
/// (`floor >= 2`; terms of `start` must lie in `alphabet`).
pub fn extend_until_below(start: &[u8], floor: usize, alphabet: &[u8], budget: usize) -> Result<ExtensionResult> {
    if floor < 2 {
        return Err(Error::InvalidArgument("floor must be at least 2".into()));
    }
    if start.is_empty() || start.iter().any(|t| !alphabet.contains(t)) {
        return Err(Error::InvalidAlphabet {
            alphabet: alphabet.to_vec(),
        });
    }
    let mut state = IncrementalCurling::from_word(floor, start);
    let finished = run_out(&mut state, budget);
    let final_word = state.into_word();
    Ok(ExtensionResult {
        start: FiniteWord::new(start.to_vec())?,
        final_length: final_word.len(),
        final_word: FiniteWord::new(final_word)?,
        hit_budget: !finished,
    })
}

/// Extends a word over `{2, 3}` until the next curling number would be 1.
pub fn extend_until_drop(start: &[u8], budget: usize) -> Result<ExtensionResult> {
    extend_until_below(start, 2, &ALPHABET, budget)
}

/// Aggregate over all `2^n` starting words of length `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRow {
    pub n: usize,
    pub max_len: usize,
    /// Starting words attaining `max_len`, in lexicographic order.
    pub argmax_starts: Vec<FiniteWord<u8>>,
    /// Sum of all final lengths.
    pub avg_num: BigUint,
    /// `2^n`.
    pub avg_den: BigUint,
    /// Starting words that exhausted the budget.
    pub budget_hits: Vec<FiniteWord<u8>>,
}

/// Rounding rule for decimal renderings of the average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rounding {
    Truncate,
    HalfEven,
    /// Nearest, with exact ties rounded toward zero.
    HalfDown,
}

impl SearchRow {
    /// `avg_num / avg_den` with `places` decimals.
    pub fn average_decimal(&self, places: usize, rounding: Rounding) -> String {
        let scale = num_traits::pow(BigUint::from(10u32), places);
        let (mut q, r) = (&self.avg_num * &scale).div_rem(&self.avg_den);
        let twice = r * 2u32;
        let up = match rounding {
            Rounding::Truncate => false,
            Rounding::HalfEven => twice > self.avg_den || (twice == self.avg_den && q.is_odd()),
            Rounding::HalfDown => twice > self.avg_den,
        };
        if up {
            q += 1u32;
        }
        let (int, frac) = q.div_rem(&scale);
        if places == 0 {
            return int.to_string();
        }
        format!("{int}.{frac:0>places$}")
    }

    /// `n,max,avg,avg_num,avg_den,argmax_count,first_argmax`.
    pub fn csv_row(&self, rounding: Rounding) -> String {
        let mut first = String::new();
        if let Some(w) = self.argmax_starts.first() {
            write_terms(&mut first, w).expect("string write");
        }
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            self.max_len,
            self.average_decimal(4, rounding),
            self.avg_num,
            self.avg_den,
            self.argmax_starts.len(),
            first
        )
    }
}

pub const CSV_HEADER: &str = "n,max,avg,avg_num,avg_den,argmax_count,first_argmax";

#[derive(Debug, Default)]
struct Partial {
    max_len: usize,
    argmax: Vec<Vec<u8>>,
    sum: u128,
    budget_hits: Vec<Vec<u8>>,
}

impl Partial {
    fn record(&mut self, start: &[u8], len: usize, hit_budget: bool) {
        self.sum += len as u128;
        if hit_budget {
            self.budget_hits.push(start.to_vec());
        }
        if len > self.max_len {
            self.max_len = len;
            self.argmax.clear();
        }
        if len == self.max_len {
            self.argmax.push(start.to_vec());
        }
    }

    fn merge(mut self, other: Partial) -> Partial {
        self.sum += other.sum;
        self.budget_hits.extend(other.budget_hits);
        if other.max_len > self.max_len {
            self.max_len = other.max_len;
            self.argmax = other.argmax;
        } else if other.max_len == self.max_len {
            self.argmax.extend(other.argmax);
        }
        self
    }
}

/// Depth-first walk below a fixed prefix, one curling state per depth.
struct Walker {
    n: usize,
    budget: usize,
    states: Vec<IncrementalCurling<u8>>,
    scratch: IncrementalCurling<u8>,
    out: Partial,
}

impl Walker {
    fn new(n: usize, budget: usize) -> Self {
        Self {
            n,
            budget,
            states: Vec::new(),
            scratch: IncrementalCurling::new(2),
            out: Partial::default(),
        }
    }

    fn run(mut self, prefix: &[u8]) -> Partial {
        let root = IncrementalCurling::from_word(2, prefix);
        self.states = vec![root; self.n - prefix.len() + 1];
        self.descend(0);
        self.out
    }

    fn descend(&mut self, depth: usize) {
        if self.states[depth].len() == self.n {
            self.scratch.clone_from(&self.states[depth]);
            let done = run_out(&mut self.scratch, self.budget);
            let len = self.scratch.len();
            self.out.record(&self.scratch.word()[..self.n], len, !done);
            return;
        }
        for x in ALPHABET {
            let (head, tail) = self.states.split_at_mut(depth + 1);
            tail[0].clone_from(&head[depth]);
            tail[0].push(x);
            self.descend(depth + 1);
        }
    }
}

fn prefix_word(index: usize, len: usize) -> Vec<u8> {
    (0..len).rev().map(|b| ALPHABET[(index >> b) & 1]).collect()
}

/// Evaluates all `2^n` starting words of length `n` on `workers` threads.
/// The result does not depend on `workers`.
pub fn exhaustive_search(n: usize, workers: usize, budget: usize) -> Result<SearchRow> {
    if n == 0 || n > 40 {
        return Err(Error::InvalidArgument(format!("starting length {n} outside 1..=40")));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let split = n.min(10);
    let parts: Vec<Partial> = pool.install(|| {
        (0..1usize << split)
            .into_par_iter()
            .map(|i| Walker::new(n, budget).run(&prefix_word(i, split)))
            .collect()
    });
    let total = parts.into_iter().fold(Partial::default(), Partial::merge);
    let words = |v: Vec<Vec<u8>>| {
        v.into_iter()
            .map(|w| FiniteWord::new(w).expect("terms are 2 or 3"))
            .collect()
    };
    Ok(SearchRow {
        n,
        max_len: total.max_len,
        argmax_starts: words(total.argmax),
        avg_num: BigUint::from(total.sum),
        avg_den: BigUint::one() << n,
        budget_hits: words(total.budget_hits),
    })
}

/// Rows for `n = 1..=n_max`.
pub fn records_scan(n_max: usize, workers: usize, budget: usize) -> Result<Vec<SearchRow>> {
    (1..=n_max).map(|n| exhaustive_search(n, workers, budget)).collect()
}

/// The `n` at which the maximum grows by more than 1 over the previous row.
pub fn record_jumps(rows: &[SearchRow]) -> Vec<usize> {
    rows.windows(2)
        .filter(|w| w[1].max_len > w[0].max_len + 1)
        .map(|w| w[1].n)
        .collect()
}

/// Reference evaluation of one row: every start extended independently
/// with the stateless kernel.
pub fn naive_row(n: usize, budget: usize) -> Result<SearchRow> {
    let mut p = Partial::default();
    for i in 0..1usize << n {
        let start = prefix_word(i, n);
        let mut w = start.clone();
        let mut hit = true;
        for _ in 0..budget {
            let k = crate::kernel::curling_number(&w)?.k;
            if k < 2 {
                hit = false;
                break;
            }
            w.push(k as u8);
        }
        if hit {
            hit = crate::kernel::curling_number(&w)?.k >= 2;
        }
        p.record(&start, w.len(), hit);
    }
    let words = |v: Vec<Vec<u8>>| v.into_iter().map(|w| FiniteWord::new(w).expect("positive")).collect();
    Ok(SearchRow {
        n,
        max_len: p.max_len,
        argmax_starts: words(p.argmax),
        avg_num: BigUint::from(p.sum),
        avg_den: BigUint::one() << n,
        budget_hits: words(p.budget_hits),
    })
}

/// Shorthand used in reports: the word as a space-separated string.
pub fn render(word: &[u8]) -> String {
    let mut s = String::new();
    write_terms(&mut s, word).expect("string write");
    s
}
