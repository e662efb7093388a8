#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

pub fn read(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Values of a b-file, checking that indices run 1, 2, ...
pub fn bfile(name: &str) -> Vec<u32> {
    read(name)
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .enumerate()
        .map(|(i, l)| {
            let (n, v) = l.split_once(' ').expect("two columns");
            assert_eq!(n.parse::<usize>().unwrap(), i + 1, "{name} index");
            v.trim().parse().unwrap()
        })
        .collect()
}

fn csv_rows(name: &str) -> Vec<Vec<String>> {
    read(name)
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(|f| f.trim().to_string()).collect())
        .collect()
}

/// `sigma^(m)(1..)` per level.
pub fn sigma_table() -> BTreeMap<usize, Vec<u64>> {
    let mut out: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for r in csv_rows("sigma.csv") {
        let v = out.entry(r[0].parse().unwrap()).or_default();
        assert_eq!(r[1].parse::<usize>().unwrap(), v.len() + 1);
        v.push(r[2].parse().unwrap());
    }
    out
}

pub struct RecordCell {
    pub m: usize,
    pub j: usize,
    pub pi: u64,
    pub italic: bool,
}

pub fn record_cells() -> Vec<RecordCell> {
    csv_rows("records.csv")
        .into_iter()
        .map(|r| RecordCell {
            m: r[0].parse().unwrap(),
            j: r[1].parse().unwrap(),
            pi: r[2].parse().unwrap(),
            italic: r[3] == "1",
        })
        .collect()
}

/// `(m, n, beta)`.
pub fn beta_cells() -> Vec<(usize, usize, u64)> {
    csv_rows("beta.csv")
        .into_iter()
        .map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap(), r[2].parse().unwrap()))
        .collect()
}

/// `(n, max, avg as printed)`.
pub fn search_table() -> Vec<(usize, usize, String)> {
    csv_rows("search_max_avg.csv")
        .into_iter()
        .map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap(), r[2].clone()))
        .collect()
}

pub struct SearchRecord {
    pub n: usize,
    pub start: Vec<u8>,
    pub length: usize,
    pub final_word: Vec<u8>,
}

fn terms<T: std::str::FromStr>(s: &str) -> Vec<T>
where
    T::Err: std::fmt::Debug,
{
    s.split_whitespace().map(|t| t.parse().unwrap()).collect()
}

pub fn search_records() -> Vec<SearchRecord> {
    read("search_records.txt")
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split('|').collect();
            SearchRecord {
                n: f[0].parse().unwrap(),
                start: terms(f[1]),
                length: f[2].parse().unwrap(),
                final_word: terms(f[3]),
            }
        })
        .collect()
}

pub fn display(key: &str) -> Vec<u32> {
    let text = read("displays.txt");
    let line = text
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
        .unwrap_or_else(|| panic!("no display {key}"));
    terms(line)
}

pub fn table_2d() -> Vec<Vec<u32>> {
    read("table_2d.txt")
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(terms)
        .collect()
}

/// Glue strings `S_1, S_2, ..` of level 2, one per line as `n|terms`.
pub fn glue_strings_level2() -> Vec<Vec<u32>> {
    read("glue_s2.txt")
        .lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| {
            let (n, t) = l.split_once('|').unwrap();
            assert_eq!(n.parse::<usize>().unwrap(), i + 1);
            terms(t)
        })
        .collect()
}
