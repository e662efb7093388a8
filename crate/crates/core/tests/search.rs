mod common;

use proptest::prelude::*;

use curling::search::{exhaustive_search, extend_until_drop, record_jumps, records_scan, Rounding};

#[test]
fn table_through_sixteen() {
    let rows = records_scan(16, 4, 10_000).unwrap();
    for (row, (n, max, avg)) in rows.iter().zip(common::search_table()) {
        assert_eq!(row.n, n);
        assert!(row.budget_hits.is_empty(), "budget hit at n={n}");
        assert_eq!(row.max_len, max, "n={n}");
        let places = avg.split('.').nth(1).map_or(0, str::len);
        assert_eq!(row.average_decimal(places, Rounding::HalfDown), avg, "n={n}");
    }
}

#[test]
fn half_even_differs_only_on_the_tie() {
    let rows = records_scan(16, 2, 10_000).unwrap();
    let table = common::search_table();
    let differ: Vec<usize> = rows
        .iter()
        .zip(&table)
        .filter(|(row, (_, _, avg))| {
            let places = avg.split('.').nth(1).map_or(0, str::len);
            row.average_decimal(places, Rounding::HalfEven) != *avg
        })
        .map(|(row, _)| row.n)
        .collect();
    assert_eq!(differ, [5]);
}

#[test]
fn record_starts() {
    for rec in common::search_records() {
        let row = exhaustive_search(rec.n, 3, 10_000).unwrap();
        assert_eq!(row.argmax_starts.len(), 1, "n={}", rec.n);
        assert_eq!(row.argmax_starts[0].as_slice(), rec.start.as_slice());
        let ext = extend_until_drop(&rec.start, 10_000).unwrap();
        assert_eq!(
            (ext.final_length, ext.final_word.as_slice()),
            (rec.length, rec.final_word.as_slice())
        );
    }
}

#[test]
fn jumps_in_the_maximum() {
    let rows = records_scan(12, 2, 10_000).unwrap();
    let maxima: Vec<usize> = rows.iter().map(|r| r.max_len).collect();
    let jumps = record_jumps(&rows);
    for n in 2..=12 {
        assert_eq!(jumps.contains(&n), maxima[n - 1] > maxima[n - 2] + 1, "n={n}");
    }
}

#[test]
fn workers_do_not_change_rows() {
    let one = records_scan(13, 1, 10_000).unwrap();
    let many = records_scan(13, 5, 10_000).unwrap();
    assert_eq!(one, many);
}

proptest! {
    #[test]
    fn start_survives(start in prop::collection::vec(prop::sample::select(vec![2u8, 3]), 1..40)) {
        let ext = extend_until_drop(&start, 10_000).unwrap();
        prop_assert!(!ext.hit_budget);
        prop_assert!(ext.final_length >= start.len());
        prop_assert_eq!(&ext.final_word[..start.len()], &start[..]);
        prop_assert_eq!(curling::curling_number(&ext.final_word).unwrap().k, 1);
    }
}
