//! Golden multiplicity tables, confirmed against the brute-force oracle.

mod common;

use std::sync::Arc;

use blockfunctor::multiplicity::mult_table_pairs;
use blockfunctor::{ddelta::Registry, PermGroup};
use common::{engine_keys, golden, oracle_table, perms, Key};

const S3_KEYS: [Key; 4] = [(1, 1, "triv"), (3, 1, "triv"), (3, 1, "sgn"), (3, 2, "triv")];
const S3_VALUES: [u64; 4] = [2, 1, 0, 1];

const A4_KEYS: [Key; 6] = [
    (1, 1, "triv"),
    (2, 1, "triv"),
    (4, 1, "triv"),
    (4, 1, "sgn"),
    (4, 1, "deg2"),
    (4, 3, "triv"),
];
const A4_VALUES: [u64; 6] = [3, 1, 1, 1, 0, 2];

const C3_KEYS: [Key; 3] = [(1, 1, "triv"), (3, 1, "triv"), (3, 1, "sgn")];
const C3_VALUES: [u64; 3] = [1, 1, 1];

fn check(deg: usize, gens: &[&str], p: u64, keys: &[Key], values: &[u64]) {
    let gens = perms(deg, gens);
    let (oracle, l) = oracle_table(&gens, deg, p);
    let frozen = golden(keys, values);
    assert_eq!(oracle, frozen, "oracle disagrees with the frozen table");
    let g = Arc::new(PermGroup::new(deg, gens).unwrap());
    let t = mult_table_pairs("G", &g, p, &mut Registry::new()).unwrap();
    assert_eq!(engine_keys(&t), frozen);
    assert_eq!(t.l, l);
}

#[test]
fn s3_at_3() {
    check(3, &["(1,2,3)", "(1,2)"], 3, &S3_KEYS, &S3_VALUES);
}

#[test]
fn a4_at_2() {
    check(4, &["(1,2)(3,4)", "(1,2,3)"], 2, &A4_KEYS, &A4_VALUES);
}

#[test]
fn c3_at_3() {
    check(3, &["(1,2,3)"], 3, &C3_KEYS, &C3_VALUES);
}

#[test]
fn relabeled_s3_matches_oracle() {
    check(5, &["(2,5,4)", "(2,4)"], 3, &S3_KEYS, &S3_VALUES);
}

#[test]
fn golden_files_match_cli_output() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    for (fixture, golden_file) in [("s3.grp", "s3_p3.tsv"), ("a4.grp", "a4_p2.tsv")] {
        let mut out = Vec::new();
        let code = blockfunctor::cli::run(
            ["blockfunctor", "mult", &format!("{}/{}", dir, fixture), "--formula", "both"],
            &mut out,
            &mut Vec::new(),
        );
        assert_eq!(code, 0);
        let expected = std::fs::read_to_string(format!(
            "{}/tests/golden/{}",
            env!("CARGO_MANIFEST_DIR"),
            golden_file
        ))
        .unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), expected, "{}", golden_file);
    }
}
