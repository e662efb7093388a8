//! The sequences `A^(m)`, their promotion structure and their block
//! decomposition.
//!
//! `A^(m)` starts with `m` and is extended by `max(m, C(prefix))`. A term is
//! *promoted* when it is the first term or when the raw curling number of
//! the preceding prefix is below `m`. Blocks are `B_1 = (m)` and
//! `B_{n+1} = B_n^{m+1} S_n`, where the glue `S_n` is the run of terms
//! `> m` produced after `B_n^{m+1}`. The glues concatenate to `A^(m+1)`,
//! and expanding `A^(m+1)` by its promotion flags rebuilds `A^(m)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{bounded_curling_number, IncrementalCurling, Observation};
use crate::word::{FiniteWord, Symbol};

/// A term together with how it was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AnnotatedTerm<T> {
    pub value: T,
    pub promoted: bool,
    /// Shortest period attaining the curling number; 0 for promoted terms.
    pub min_y_len: usize,
}

impl<T: fmt::Display> fmt::Display for AnnotatedTerm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.promoted {
            write!(f, "({})_{}", self.value, self.min_y_len)
        } else {
            write!(f, "{}_{}", self.value, self.min_y_len)
        }
    }
}

fn check_level(m: usize) -> Result<()> {
    if m == 0 {
        Err(Error::InvalidLevel)
    } else {
        Ok(())
    }
}

/// First `count` terms of `A^(m)` using the stateless reference kernel.
pub fn generate_reference<T: Symbol>(m: usize, count: usize) -> Result<FiniteWord<T>> {
    check_level(m)?;
    let mut terms: Vec<T> = Vec::with_capacity(count);
    if count > 0 {
        terms.push(T::from_count(m));
    }
    while terms.len() < count {
        let next = bounded_curling_number(&terms, m)?;
        terms.push(T::from_count(next));
    }
    FiniteWord::new(terms)
}

/// Annotates a word term by term as a level-`m` sequence: each term is
/// classified by the curling number of the terms before it.
#[derive(Debug, Clone)]
pub struct Annotator<T> {
    m: usize,
    kernel: IncrementalCurling<T>,
}

impl<T: Symbol> Annotator<T> {
    pub fn new(m: usize) -> Self {
        Self {
            m,
            kernel: IncrementalCurling::new(m),
        }
    }

    pub fn level(&self) -> usize {
        self.m
    }

    pub fn word(&self) -> &[T] {
        self.kernel.word()
    }

    /// The value the level-`m` recurrence would append next, annotated.
    pub fn predict(&self) -> AnnotatedTerm<T> {
        match self.kernel.observation() {
            None | Some(Observation::Below { .. }) => self.promoted(),
            Some(Observation::Exact(r)) if r.k < self.m => self.promoted(),
            Some(Observation::Exact(r)) => AnnotatedTerm {
                value: T::from_count(r.k),
                promoted: false,
                min_y_len: r.min_period,
            },
        }
    }

    /// Annotates `value` as the next term and appends it. The annotation
    /// describes the prefix, so it is meaningful only when `value` is what
    /// the recurrence produces.
    pub fn accept(&mut self, value: T) -> AnnotatedTerm<T> {
        let mut a = self.predict();
        a.value = value;
        self.kernel.push(value);
        a
    }

    /// Appends the recurrence's own next term.
    pub fn step(&mut self) -> AnnotatedTerm<T> {
        let a = self.predict();
        self.kernel.push(a.value);
        a
    }

    fn promoted(&self) -> AnnotatedTerm<T> {
        AnnotatedTerm {
            value: T::from_count(self.m),
            promoted: true,
            min_y_len: 0,
        }
    }
}

/// First `count` terms of `A^(m)` with promotion flags and periods.
pub fn annotate<T: Symbol>(m: usize, count: usize) -> Result<Vec<AnnotatedTerm<T>>> {
    check_level(m)?;
    let mut a = Annotator::new(m);
    Ok((0..count).map(|_| a.step()).collect())
}

/// Rebuilds level `m` from the annotated level `m + 1`: start from `(m)`;
/// a promoted upper term first replaces the word by its `(m+1)`-th power;
/// every upper term is then appended.
#[derive(Debug, Clone)]
pub struct Expander<T> {
    m: usize,
    word: Vec<T>,
    cap: usize,
}

impl<T: Symbol> Expander<T> {
    /// `cap` bounds the length kept; powers are truncated once it is reached.
    pub fn new(m: usize, cap: usize) -> Self {
        Self {
            m,
            word: vec![T::from_count(m)],
            cap,
        }
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

    pub fn feed(&mut self, upper: AnnotatedTerm<T>) {
        if upper.promoted {
            let base = self.word.len();
            for _ in 0..self.m {
                if self.word.len() >= self.cap {
                    break;
                }
                let room = (self.cap - self.word.len()).min(base);
                self.word.extend_from_within(..room);
            }
        }
        if self.word.len() < self.cap {
            self.word.push(upper.value);
        }
    }

    pub fn into_word(self) -> Vec<T> {
        self.word
    }
}

/// Expands an annotated prefix of `A^(m+1)` into a prefix of `A^(m)`,
/// truncated to `max_len`. Stops early if `upper` runs out.
pub fn expand_via_promotion<T: Symbol>(m: usize, upper: &[AnnotatedTerm<T>], max_len: usize) -> Result<FiniteWord<T>> {
    check_level(m)?;
    match upper.first() {
        Some(t) if t.value.as_count() == m + 1 => {}
        other => {
            return Err(Error::NotLevelPrefix {
                expected: m + 1,
                found: other.and_then(|t| t.value.to_u64()),
            })
        }
    }
    let mut e = Expander::new(m, max_len);
    for &t in upper {
        if e.len() >= max_len {
            break;
        }
        e.feed(t);
    }
    let mut w = e.into_word();
    w.truncate(max_len);
    FiniteWord::new(w)
}

/// A lazily produced annotated level of the hierarchy. The top level runs
/// the recurrence directly; each level below expands the one above and
/// annotates its own output again for the next level down.
#[derive(Debug)]
pub struct LevelStream<T> {
    annotator: Annotator<T>,
    source: Option<(Box<LevelStream<T>>, Expander<T>)>,
    emitted: usize,
}

impl<T: Symbol> LevelStream<T> {
    /// Stream of annotated `A^(m)` built from a directly generated `A^(top)`.
    pub fn new(m: usize, top: usize) -> Self {
        assert!(m >= 1 && top >= m, "top level must be at or above the target");
        let source = (top > m).then(|| (Box::new(LevelStream::new(m + 1, top)), Expander::new(m, usize::MAX)));
        Self {
            annotator: Annotator::new(m),
            source,
            emitted: 0,
        }
    }

    pub fn level(&self) -> usize {
        self.annotator.level()
    }
}

impl<T: Symbol> Iterator for LevelStream<T> {
    type Item = AnnotatedTerm<T>;

    fn next(&mut self) -> Option<AnnotatedTerm<T>> {
        let value = match &mut self.source {
            None => return Some(self.annotator.step()),
            Some((upper, expander)) => {
                while self.emitted >= expander.len() {
                    expander.feed(upper.next()?);
                }
                expander.word()[self.emitted]
            }
        };
        self.emitted += 1;
        Some(self.annotator.accept(value))
    }
}

/// Unbounded iterator over the terms of `A^(m)`, expanded from the
/// annotated stream of `A^(top)`.
#[derive(Debug)]
pub struct Terms<T> {
    upper: LevelStream<T>,
    expander: Expander<T>,
    emitted: usize,
}

impl<T: Symbol> Terms<T> {
    pub fn new(m: usize, top: usize) -> Self {
        assert!(m >= 1 && top > m, "top level must exceed the target");
        Self {
            upper: LevelStream::new(m + 1, top),
            expander: Expander::new(m, usize::MAX),
            emitted: 0,
        }
    }

    /// Everything produced so far, including terms not yet yielded.
    pub fn buffered(&self) -> &[T] {
        self.expander.word()
    }
}

impl<T: Symbol> Iterator for Terms<T> {
    type Item = T;

    fn next(&mut self) -> Option<T> {
        while self.emitted >= self.expander.len() {
            self.expander.feed(self.upper.next()?);
        }
        self.emitted += 1;
        Some(self.expander.word()[self.emitted - 1])
    }
}

/// First `count` terms of `A^(m)` by expanding a directly generated `A^(m+1)`.
pub fn generate_fast<T: Symbol>(m: usize, count: usize) -> Result<FiniteWord<T>> {
    generate_fast_with_top(m, count, m + 1)
}

/// As [`generate_fast`], starting the expansion chain at level `top > m`.
pub fn generate_fast_with_top<T: Symbol>(m: usize, count: usize, top: usize) -> Result<FiniteWord<T>> {
    check_level(m)?;
    if top <= m {
        return Err(Error::InvalidArgument(format!("top level {top} must exceed {m}")));
    }
    if count == 0 {
        return Ok(FiniteWord::empty());
    }
    let mut upper = LevelStream::new(m + 1, top);
    let mut e = Expander::new(m, count);
    while e.len() < count {
        e.feed(upper.next().expect("level streams are infinite"));
    }
    FiniteWord::new(e.into_word())
}

/// Blocks, glues and tails of level `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDecomposition<T> {
    pub m: usize,
    /// `B_1 .. B_N`.
    pub blocks: Vec<FiniteWord<T>>,
    /// `S_1 .. S_{N-1}`.
    pub glues: Vec<FiniteWord<T>>,
    /// `T_2 .. T_N`, where `T_{n+1} = S_1 .. S_n`.
    pub tails: Vec<FiniteWord<T>>,
}

impl<T: Symbol> BlockDecomposition<T> {
    /// `B_n`, 1-based.
    pub fn block(&self, n: usize) -> Option<&FiniteWord<T>> {
        n.checked_sub(1).and_then(|i| self.blocks.get(i))
    }

    /// `S_n`, 1-based.
    pub fn glue(&self, n: usize) -> Option<&FiniteWord<T>> {
        n.checked_sub(1).and_then(|i| self.glues.get(i))
    }

    /// `T_n` for `n >= 2`.
    pub fn tail(&self, n: usize) -> Option<&FiniteWord<T>> {
        n.checked_sub(2).and_then(|i| self.tails.get(i))
    }
}

/// Decomposition that ran out of budget, with everything built before that.
#[derive(Debug, Clone)]
pub struct BudgetExhausted<T> {
    pub budget: usize,
    /// Index of the block that could not be completed.
    pub block: usize,
    pub partial: BlockDecomposition<T>,
}

impl<T> fmt::Display for BudgetExhausted<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "budget of {} terms exhausted while building block {}",
            self.budget, self.block
        )
    }
}

impl<T: fmt::Debug> std::error::Error for BudgetExhausted<T> {}

impl<T> From<BudgetExhausted<T>> for Error {
    fn from(e: BudgetExhausted<T>) -> Self {
        Error::BudgetExhausted {
            budget: e.budget,
            block: e.block,
        }
    }
}

/// Default term budget for block constructions.
pub const DEFAULT_BUDGET: usize = 10_000_000;

/// Builds `B_1 .. B_{n_blocks}` from the definition. Each glue is found by
/// extending `B_n^{m+1}` with `C^(m)` values while they stay above `m`.
/// Fails once a block under construction would exceed `budget` terms.
pub fn decompose<T: Symbol>(
    m: usize,
    n_blocks: usize,
    budget: usize,
) -> Result<BlockDecomposition<T>, BudgetExhausted<T>> {
    assert!(m >= 1, "level must be at least 1");
    let mut d = BlockDecomposition {
        m,
        blocks: Vec::new(),
        glues: Vec::new(),
        tails: Vec::new(),
    };
    if n_blocks == 0 {
        return Ok(d);
    }
    d.blocks
        .push(FiniteWord::new(vec![T::from_count(m)]).expect("positive"));
    let mut tail: Vec<T> = Vec::new();

    for n in 1..n_blocks {
        let fail = |d: BlockDecomposition<T>| BudgetExhausted {
            budget,
            block: n + 1,
            partial: d,
        };
        let base = d.blocks[n - 1].as_slice();
        if base.len() * (m + 1) > budget {
            return Err(fail(d));
        }
        let mut kernel = IncrementalCurling::new(m + 1);
        for _ in 0..=m {
            kernel.extend(base.iter().copied());
        }
        let start = kernel.len();
        loop {
            match kernel.observation().and_then(Observation::exact) {
                Some(r) if r.k > m => {
                    if kernel.len() >= budget {
                        return Err(fail(d));
                    }
                    kernel.push(T::from_count(r.k));
                }
                _ => break,
            }
        }
        let block = kernel.into_word();
        let glue = block[start..].to_vec();
        tail.extend_from_slice(&glue);
        d.glues.push(FiniteWord::new(glue).expect("positive"));
        d.tails.push(FiniteWord::new(tail.clone()).expect("positive"));
        d.blocks.push(FiniteWord::new(block).expect("positive"));
    }
    Ok(d)
}

/// `sigma^(m)(1..=glue_count)`: the gaps between consecutive promoted
/// positions of `A^(m+1)`.
pub fn glue_lengths_via_promotion(m: usize, glue_count: usize) -> Result<Vec<u64>> {
    check_level(m)?;
    let mut a = Annotator::<u32>::new(m + 1);
    let mut out = Vec::with_capacity(glue_count);
    a.step();
    let mut last = 0u64;
    let mut pos = 0u64;
    while out.len() < glue_count {
        pos += 1;
        if a.step().promoted {
            out.push(pos - last);
            last = pos;
        }
    }
    Ok(out)
}

/// A structural claim checked by [`verify_structure`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Clause {
    /// `B_n` is a prefix of `A^(m)`.
    BlockPrefix,
    /// `T_n` is a prefix of `A^(m+1)`.
    TailPrefix,
    /// `T_n` is a suffix of `B_n`.
    TailSuffix,
    /// `T_n` occurs in `B_n` only as its suffix.
    TailUnique,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseCheck {
    pub m: usize,
    pub n: usize,
    pub clause: Clause,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub m: usize,
    pub n_max: usize,
    pub checks: Vec<ClauseCheck>,
}

impl StructureReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClauseCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

/// Checks blocks and tails for `2 <= n <= n_max` against sequences
/// generated by the reference kernel.
pub fn verify_structure(m: usize, n_max: usize, budget: usize) -> Result<StructureReport> {
    check_level(m)?;
    let d = decompose::<u32>(m, n_max, budget)?;
    let longest_block = d.blocks.last().map_or(0, |b| b.len());
    let longest_tail = d.tails.last().map_or(0, |t| t.len());
    let level = generate_reference::<u32>(m, longest_block)?;
    let upper = generate_reference::<u32>(m + 1, longest_tail)?;

    let mut checks = Vec::new();
    for n in 2..=n_max.min(d.blocks.len()) {
        let b = d.block(n).expect("block exists");
        let t = d.tail(n).expect("tail exists");
        let occurrences = b.windows(t.len()).filter(|w| *w == t.as_slice()).count();
        for (clause, holds) in [
            (Clause::BlockPrefix, b.is_prefix_of(&level)),
            (Clause::TailPrefix, t.is_prefix_of(&upper)),
            (Clause::TailSuffix, t.is_suffix_of(b)),
            (Clause::TailUnique, occurrences == 1 && t.is_suffix_of(b)),
        ] {
            checks.push(ClauseCheck { m, n, clause, holds });
        }
    }
    Ok(StructureReport { m, n_max, checks })
}
