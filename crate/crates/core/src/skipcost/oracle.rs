//! Brute-force repair cost, used to cross-check the partition and matching
//! search. It shares no code with that search: it walks helper subsets of
//! size at most `ℓ` and every way of handing each erased value to one of them.
//! Exponential; meant for arrays with a handful of columns.

use itertools::Itertools;

use super::array::CfrArray;

/// Minimum skip cost to repair column `erased`, `None` when impossible.
pub fn brute_force_cost(array: &CfrArray, erased: usize, locality: usize) -> Option<u32> {
    let values = array.column(erased).to_vec();
    let others: Vec<usize> = (0..array.len()).filter(|&h| h != erased).collect();
    let mut best: Option<u32> = None;
    for size in 1..=locality.min(values.len()) {
        for helpers in others.iter().copied().combinations(size) {
            if let Some(cost) = best_split(array, &values, &helpers) {
                best = Some(best.map_or(cost, |b| b.min(cost)));
            }
        }
    }
    best
}

/// Cheapest way to give every value to one helper of `helpers` that holds it,
/// each helper receiving at least one value.
fn best_split(array: &CfrArray, values: &[u32], helpers: &[usize]) -> Option<u32> {
    let choices: Vec<Vec<usize>> = values
        .iter()
        .map(|&x| (0..helpers.len()).filter(|&i| array.column(helpers[i]).contains(&x)).collect())
        .collect();
    if choices.iter().any(Vec::is_empty) {
        return None;
    }
    choices
        .iter()
        .multi_cartesian_product()
        .filter_map(|pick| {
            let mut total = 0;
            for (i, &h) in helpers.iter().enumerate() {
                let sent: Vec<u32> = values
                    .iter()
                    .zip(&pick)
                    .filter(|(_, &&p)| p == i)
                    .map(|(&x, _)| x)
                    .collect();
                if sent.is_empty() {
                    return None;
                }
                total += gaps(array.column(h), &sent);
            }
            Some(total)
        })
        .min()
}

/// Sum of the gaps between consecutive requested rows.
fn gaps(column: &[u32], sent: &[u32]) -> u32 {
    let rows: Vec<usize> = (0..column.len()).filter(|&r| sent.contains(&column[r])).collect();
    rows.windows(2).map(|w| (w[1] - w[0] - 1) as u32).sum()
}

/// `max` over columns of [`brute_force_cost`], `None` if any is infeasible.
pub fn brute_force_array_cost(array: &CfrArray, locality: usize) -> Option<u32> {
    (0..array.len())
        .map(|j| brute_force_cost(array, j, locality))
        .collect::<Option<Vec<u32>>>()
        .map(|c| c.into_iter().max().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_checked_cases() {
        let a = CfrArray::from_columns(3, 5, &[[1, 2, 3], [1, 4, 2], [3, 5, 4]]).unwrap();
        assert_eq!(brute_force_cost(&a, 0, 2), Some(1));
        assert_eq!(brute_force_cost(&a, 0, 1), None);
        let twins = CfrArray::from_columns(2, 3, &[[1, 2], [2, 1]]).unwrap();
        assert_eq!(brute_force_array_cost(&twins, 1), Some(0));
    }
}
