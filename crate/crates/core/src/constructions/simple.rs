use itertools::Itertools;

use super::{mod_bar, ConstructionError};
use crate::designs::CoveringDesign;
use crate::rational::binomial;
use crate::skipcost::CfrArray;

/// Every block twice: the block list in order, then again. Columns are
/// ascending. Each column is repaired by reading its twin, so locality 1
/// and skip cost 0.
pub fn construct_duplicate(design: &CoveringDesign) -> Result<CfrArray, ConstructionError> {
    let p = design.params();
    let columns: Vec<&[u32]> = design.blocks().iter().chain(design.blocks()).map(|b| b.elements()).collect();
    Ok(CfrArray::from_columns(p.k() as usize, p.v(), &columns)?)
}

/// Column count of [`construct_combination`]:
/// `|B| + C(k,t-1)|B'|`, plus `C(k,r)|B'|` when `2 <= r <= t-2`.
pub fn combination_size(t: u32, k: u32, blocks: usize, blocks_tm1: usize) -> i128 {
    let r = mod_bar(k as u64, (t - 1) as u64) as u32;
    let mut per_block = binomial(k as u64, (t - 1) as u64);
    if r >= 2 && r + 2 <= t {
        per_block += binomial(k as u64, r as u64);
    }
    blocks as i128 + per_block * blocks_tm1 as i128
}

/// The blocks of `design_t` in input order (ascending within each column),
/// followed by copies of every block of `design_tm1`: one per `(t-1)`-subset
/// with that subset in the first rows, and when `2 <= r <= t-2` one per
/// `r`-subset likewise. Subsets go in lexicographic order, and prefix and
/// remainder are each ascending.
pub fn construct_combination(
    design_t: &CoveringDesign,
    design_tm1: &CoveringDesign,
) -> Result<CfrArray, ConstructionError> {
    let p = design_t.params();
    let (t, k, v) = (p.t(), p.k(), p.v());
    if t < 2 {
        return Err(ConstructionError::StrengthTooSmall { t });
    }
    let p2 = design_tm1.params();
    if (p2.t(), p2.k(), p2.v()) != (t - 1, k, v) {
        return Err(ConstructionError::ParamMismatch {
            expected: format!("({},{k},{v})", t - 1),
            found: p2.to_string(),
        });
    }
    let r = mod_bar(k as u64, (t - 1) as u64) as u32;
    let mut prefixes = vec![(t - 1) as usize];
    if r >= 2 && r + 2 <= t {
        prefixes.push(r as usize);
    }
    let mut columns: Vec<Vec<u32>> = design_t.blocks().iter().map(|b| b.elements().to_vec()).collect();
    for block in design_tm1.blocks() {
        let elems = block.elements();
        for &size in &prefixes {
            for lead in elems.iter().copied().combinations(size) {
                let mut column = lead.clone();
                column.extend(elems.iter().copied().filter(|x| !lead.contains(x)));
                columns.push(column);
            }
        }
    }
    debug_assert_eq!(columns.len() as i128, combination_size(t, k, design_t.len(), design_tm1.len()));
    Ok(CfrArray::from_columns(k as usize, v, &columns)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::DesignParams;

    fn design(t: u32, k: u32, v: u32, text: &str) -> CoveringDesign {
        CoveringDesign::parse(text, DesignParams::new(t, k, v).unwrap()).unwrap()
    }

    #[test]
    fn duplicate_repeats_the_block_list() {
        let d = design(3, 4, 5, "1 2 3 4\n1 2 3 5\n1 2 4 5\n1 3 4 5\n");
        let a = construct_duplicate(&d).unwrap();
        assert_eq!(a.len(), 8);
        assert_eq!(a.column(0), a.column(4));
        assert_eq!(a.column(3), &[1, 3, 4, 5]);
    }

    #[test]
    fn combination_prefixes() {
        // (t,k) = (3,4): r = 2 = t-1, so only the 6 pair-prefixed copies
        let d = design(3, 4, 5, "1 2 3 4\n1 2 3 5\n1 2 4 5\n1 3 4 5\n");
        let d2 = design(2, 4, 5, "1 2 3 4\n1 2 3 5\n1 2 4 5\n1 3 4 5\n");
        let a = construct_combination(&d, &d2).unwrap();
        assert_eq!(a.len(), 4 + 6 * 4);
        assert_eq!(a.column(4), &[1, 2, 3, 4]);
        assert_eq!(a.column(5), &[1, 3, 2, 4]);
        assert_eq!(a.column(9), &[3, 4, 1, 2]);
        assert_eq!(combination_size(5, 6, 132, 41), 1362);
        assert_eq!(combination_size(3, 4, 4, 4), 28);
    }

    #[test]
    fn empty_second_design_gives_the_plain_array() {
        let d = design(3, 4, 5, "1 2 3 4\n1 2 3 5\n1 2 4 5\n1 3 4 5\n");
        let empty = design(2, 4, 5, "");
        let a = construct_combination(&d, &empty).unwrap();
        assert_eq!(a.len(), 4);
        assert!(matches!(construct_combination(&d, &d), Err(ConstructionError::ParamMismatch { .. })));
    }
}
