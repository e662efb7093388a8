//! Classic sequences, their curling transforms, and variations on the
//! curling recurrence.
//!
//! Terms here are plain `u32` vectors rather than [`FiniteWord`]s because
//! Thue-Morse and the floor-half variant contain zeros.
//!
//! [`FiniteWord`]: crate::word::FiniteWord

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hierarchy::generate_fast;
use crate::kernel::{curling_number, madic_valuation, IncrementalCurling, Observation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedSequence {
    pub name: String,
    pub terms: Vec<u32>,
}

pub fn thue_morse(count: usize) -> Vec<u32> {
    (0..count as u64).map(|i| i.count_ones() % 2).collect()
}

/// Kolakoski sequence starting 1, 2, 2: its run lengths spell itself.
pub fn kolakoski(count: usize) -> Vec<u32> {
    let mut k: Vec<u32> = vec![1, 2, 2];
    let mut read = 2;
    while k.len() < count {
        let next = if *k.last().unwrap() == 1 { 2 } else { 1 };
        for _ in 0..k[read] {
            k.push(next);
        }
        read += 1;
    }
    k.truncate(count);
    k
}

/// `r(n) = |n|_2 + 1`.
pub fn ruler(count: usize) -> Vec<u32> {
    (1..=count as u64)
        .map(|n| madic_valuation(n, 2).expect("n >= 1") + 1)
        .collect()
}

/// Names accepted by [`generate_named`]: `thue_morse`, `kolakoski`,
/// `ruler`, `A` (level 1) and `A<m>` for level `m`.
pub fn generate_named(name: &str, count: usize) -> Result<NamedSequence> {
    let terms = match name {
        "thue_morse" => thue_morse(count),
        "kolakoski" => kolakoski(count),
        "ruler" => ruler(count),
        "A" => generate_fast::<u32>(1, count)?.into_vec(),
        _ => match name.strip_prefix('A').and_then(|m| m.parse::<usize>().ok()) {
            Some(m) if m >= 1 => generate_fast::<u32>(m, count)?.into_vec(),
            _ => return Err(Error::UnknownSequence(name.to_string())),
        },
    };
    Ok(NamedSequence {
        name: name.to_string(),
        terms,
    })
}

/// Lexicographically earliest positive word of length `count` in which
/// every prefix has curling number 1, built greedily.
pub fn earliest_all_ones_preimage(count: usize) -> Vec<u32> {
    let mut state = IncrementalCurling::<u32>::new(2);
    for _ in 0..count {
        let x = (1..)
            .find(|&x| {
                let mut trial = state.clone();
                trial.push(x);
                matches!(trial.observation(), Some(Observation::Exact(r)) if r.k == 1)
            })
            .expect("a value not yet used always works");
        state.push(x);
    }
    state.into_word()
}

/// `a(1) = 0`, `a(n+1) = floor(C(a(1..n)) / 2)`.
pub fn variant_floor_half(count: usize) -> Vec<u32> {
    let mut a: Vec<u32> = Vec::with_capacity(count);
    if count > 0 {
        a.push(0);
    }
    while a.len() < count {
        a.push(curling_number(&a).expect("nonempty").k as u32 / 2);
    }
    a
}

/// `a(1) = a(2) = 1`, `a(n+2) = C(a(1..n))`.
pub fn variant_shift(count: usize) -> Vec<u32> {
    let mut a: Vec<u32> = vec![1; count.min(2)];
    while a.len() < count {
        let n = a.len() - 1;
        a.push(curling_number(&a[..n]).expect("nonempty").k as u32);
    }
    a
}

/// `g(1) = 2`; append `C` when it exceeds 1, otherwise append the smallest
/// value that makes the curling number of the extended word as large as
/// possible.
pub fn variant_greedy(count: usize) -> Vec<u32> {
    let mut g: Vec<u32> = Vec::with_capacity(count);
    if count > 0 {
        g.push(2);
    }
    while g.len() < count {
        let k = curling_number(&g).expect("nonempty").k as u32;
        if k > 1 {
            g.push(k);
            continue;
        }
        // A value absent from g gives curling number 1, so 1..=max+1 covers
        // every distinct outcome.
        let top = *g.iter().max().unwrap() + 1;
        let mut best = (0, 0);
        for x in 1..=top {
            g.push(x);
            let c = curling_number(&g).expect("nonempty").k;
            g.pop();
            if c > best.0 {
                best = (c, x);
            }
        }
        g.push(best.1);
    }
    g
}

/// Two-dimensional curling table: the first row and column are `A`;
/// every other cell is the larger curling number of the row prefix to its
/// left and the column prefix above it.
pub fn variant_2d(rows: usize, cols: usize) -> Result<Vec<Vec<u32>>> {
    let edge = generate_fast::<u32>(1, rows.max(cols))?.into_vec();
    let mut t = vec![vec![0u32; cols]; rows];
    for (i, row) in t.iter_mut().enumerate() {
        row[0] = edge[i];
    }
    t[0].copy_from_slice(&edge[..cols]);
    let mut column = Vec::with_capacity(rows);
    for i in 1..rows {
        for j in 1..cols {
            column.clear();
            column.extend((0..i).map(|r| t[r][j]));
            let k1 = curling_number(&t[i][..j]).expect("nonempty").k;
            let k2 = curling_number(&column).expect("nonempty").k;
            t[i][j] = k1.max(k2) as u32;
        }
    }
    Ok(t)
}
