//! Fixed cases: hand-checked repair costs, the LOW-case size discrepancy,
//! and the index-vector grouping of the (3,4,5) lift.

mod common;

use cfr_core::constructions::{construct_recursive, predict_recursive_size, recursive_families, ConstructionError};
use cfr_core::designs::{CoveringDesign, DesignParams};
use cfr_core::skipcost::{column_repair_cost, transmission_cost, CfrArray};
use common::{array, design};

fn costs(columns: &[Vec<u32>], v: u32, locality: usize) -> Vec<Option<u32>> {
    let a = CfrArray::from_columns(columns[0].len(), v, columns).unwrap();
    (0..a.len()).map(|j| column_repair_cost(&a, j, locality).unwrap().map(|p| p.total_cost)).collect()
}

#[test]
fn brute_force_reference_costs() {
    let example: Vec<Vec<u32>> = array("example_4x6").columns().map(<[u32]>::to_vec).collect();
    assert_eq!(costs(&example, 6, 2), vec![Some(0); 6]);
    let mut moved = example.clone();
    moved[4] = vec![3, 1, 5, 6];
    assert_eq!(costs(&moved, 6, 2), vec![Some(0); 6]);

    assert_eq!(costs(&[vec![1, 2, 3, 4], vec![1, 3, 2, 5], vec![4, 5, 1, 2]], 5, 2), vec![Some(0), Some(0), Some(1)]);
    assert_eq!(
        costs(&[vec![1, 2, 3], vec![4, 1, 2], vec![3, 5, 6], vec![2, 6, 4]], 6, 2),
        vec![Some(0), Some(0), None, Some(1)]
    );
    assert_eq!(
        costs(&[vec![1, 3, 5], vec![5, 3, 1], vec![2, 4, 6], vec![6, 1, 2]], 6, 2),
        vec![Some(0), Some(0), None, Some(1)]
    );
    assert_eq!(
        costs(&[vec![2, 4, 1], vec![1, 6, 3], vec![3, 4, 2], vec![5, 6, 1]], 6, 2),
        vec![Some(0), Some(0), Some(0), None]
    );
}

#[test]
fn transmission_costs_count_skipped_rows() {
    assert_eq!(transmission_cost(&[1, 3, 4, 5], &[3, 5]).unwrap(), 1);
    assert_eq!(transmission_cost(&[1, 3, 5, 6], &[3, 5]).unwrap(), 0);
    assert_eq!(transmission_cost(&[1, 2, 3, 4, 5, 6], &[1, 6]).unwrap(), 4);
    assert_eq!(transmission_cost(&[1, 2, 3, 4, 5, 6], &[4]).unwrap(), 0);
    assert!(transmission_cost(&[1, 2, 3], &[7]).is_err());
    assert!(transmission_cost(&[1, 2, 3], &[]).is_err());
}

#[test]
fn lift_groups_by_index_vector() {
    // Point (x, i) of the lift is x + (i - 1) v, so a block's index vector is
    // read off its sorted elements.
    let f = recursive_families(&design(3, 4, 5)).unwrap();
    let index = |b: &[u32]| b.iter().map(|&x| x.div_ceil(5)).collect::<Vec<_>>();
    let mut by_index = std::collections::BTreeMap::<Vec<u32>, usize>::new();
    for b in f.b3_i1.iter().chain(&f.b3_i2) {
        *by_index.entry(index(b)).or_default() += 1;
    }
    let expected: Vec<(Vec<u32>, usize)> = vec![
        (vec![1, 1, 1, 1], 4),
        (vec![1, 1, 2, 2], 24),
        (vec![2, 2, 2, 2], 4),
    ];
    assert_eq!(by_index.into_iter().collect::<Vec<_>>(), expected);
    assert!(f.b1.iter().all(|b| index(b) == vec![1, 1, 2, 2] && b[2] == b[0] + 5 && b[3] == b[1] + 5));
}

#[test]
fn printed_lift_matrix_round_trips() {
    let a = array("lift_3_4_10");
    assert_eq!((a.k(), a.len(), a.v()), (4, 42, 10));
    assert_eq!(CfrArray::parse(&a.to_text()).unwrap(), a);
    assert_eq!(a.column(9), &[4, 5, 9, 10]);
}

#[test]
fn low_case_with_two_parts_breaks_the_size_formula() {
    // (6,7,8): q = 2, r = 1, so m = 2 and m = 3 both fall in the B4 range.
    // For q = 2 the B2 blocks hold no full copy of the (t-1)-set, and for
    // m = 3 the two I3 profiles coincide, so the formula counts some blocks
    // twice. The lift is still a covering design.
    let text = std::fs::read_to_string(common::data("../tests/fixtures/low_6_7_8.txt")).unwrap();
    let d = CoveringDesign::parse(&text, DesignParams::new(6, 7, 8).unwrap()).unwrap();
    let predicted = predict_recursive_size(d.params(), d.len()).unwrap().predicted_blocks;
    assert_eq!(predicted, 7518);
    match construct_recursive(&d) {
        Err(ConstructionError::SizeMismatch { predicted, generated }) => {
            assert_eq!((predicted, generated), (7518, 5838));
        }
        other => panic!("expected a size mismatch, got {:?}", other.map(|b| b.array.len())),
    }
    let f = recursive_families(&d).unwrap();
    assert_eq!(f.len(), 5838);
    let lifted = CoveringDesign::parse(
        &f.columns().iter().map(|b| b.iter().map(u32::to_string).collect::<Vec<_>>().join(" ") + "\n").collect::<String>(),
        DesignParams::new(6, 7, 16).unwrap(),
    )
    .unwrap();
    assert!(lifted.is_covering());
}
