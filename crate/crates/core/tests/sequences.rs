mod common;

use proptest::prelude::*;

use curling::kernel::{curling_number, curling_transform};
use curling::sequences::{
    earliest_all_ones_preimage, generate_named, kolakoski, ruler, thue_morse, variant_2d, variant_floor_half,
    variant_greedy, variant_shift,
};

#[test]
fn displays() {
    for name in ["thue_morse", "kolakoski", "ruler"] {
        assert_eq!(generate_named(name, 32).unwrap().terms, common::display(name), "{name}");
    }
    let t: Vec<u32> = curling_transform(&thue_morse(32));
    assert_eq!(t, common::display("thue_morse_transform"));
    let k: Vec<u32> = curling_transform(&kolakoski(32));
    assert_eq!(k, common::display("kolakoski_transform"));
    assert_eq!(variant_floor_half(32), common::display("floor_half"));
    assert_eq!(variant_shift(32), common::display("shift"));
    assert_eq!(variant_greedy(32), common::display("greedy"));
    assert_eq!(variant_2d(6, 14).unwrap(), common::table_2d());
}

#[test]
fn thue_morse_is_cube_free() {
    let t: Vec<u32> = curling_transform(&thue_morse(1 << 12));
    assert!(t.iter().all(|&x| x == 1 || x == 2));
}

/// Largest `k` such that the word ends in `Y^k`, trying every period.
fn brute_curling(u: &[u32]) -> usize {
    (1..=u.len())
        .map(|p| {
            let mut k = 1;
            while (k + 1) * p <= u.len() && u[u.len() - (k + 1) * p..u.len() - k * p] == u[u.len() - p..] {
                k += 1;
            }
            k
        })
        .max()
        .unwrap_or(1)
}

#[test]
fn ruler_transform_is_all_ones() {
    let r = ruler(64);
    for n in 1..=64 {
        assert_eq!(brute_curling(&r[..n]), 1, "prefix {n}");
    }
    let t: Vec<u32> = curling_transform(&r);
    assert!(t.iter().all(|&x| x == 1));
}

#[test]
fn long_preimage() {
    let p = earliest_all_ones_preimage(512);
    assert_eq!(p, ruler(512));
    let t: Vec<u32> = curling_transform(&p);
    assert!(t.iter().all(|&x| x == 1));
}

#[test]
fn shift_variant_reads_itself() {
    let a = variant_shift(600);
    let t: Vec<u32> = curling_transform(&a);
    assert_eq!(t[..599], a[1..]);
}

#[test]
fn floor_half_recurrence() {
    let a = variant_floor_half(300);
    for n in 1..300 {
        assert_eq!(a[n] as usize, curling_number(&a[..n]).unwrap().k / 2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn two_dimensional_symmetry(rows in 1usize..30, cols in 1usize..30) {
        let n = rows.max(cols);
        let t = variant_2d(n, n).unwrap();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(t[i][j], t[j][i]);
            }
        }
        let part = variant_2d(rows, cols).unwrap();
        for i in 0..rows {
            prop_assert_eq!(&part[i][..], &t[i][..cols]);
        }
    }

    #[test]
    fn greedy_prefixes_are_stable(n in 1usize..120) {
        let long = variant_greedy(120);
        prop_assert_eq!(&variant_greedy(n)[..], &long[..n]);
    }
}
