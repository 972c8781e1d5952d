//! Bipartite assignment: a rectangular Hungarian method and a lexicographically
//! smallest perfect matching for unweighted feasibility.

/// Minimum-cost assignment of every row to a distinct column.
///
/// `weights[i][j]` is the cost of giving column `j` to row `i`, `None` when
/// the pair is not allowed. Needs `rows <= cols`. Returns the total cost and
/// the column chosen for each row, or `None` when no assignment exists.
pub fn min_cost_assignment(weights: &[Vec<Option<i128>>]) -> Option<(i128, Vec<usize>)> {
    let n = weights.len();
    if n == 0 {
        return Some((0, Vec::new()));
    }
    let m = weights[0].len();
    if m < n {
        return None;
    }
    let finite_max = weights
        .iter()
        .flatten()
        .flatten()
        .copied()
        .max()
        .unwrap_or(0)
        .max(0);
    // Any assignment touching a forbidden pair costs more than every allowed one.
    let forbidden = (finite_max + 1) * (n as i128 + 1);
    let cost = |i: usize, j: usize| weights[i][j].unwrap_or(forbidden);
    let inf = i128::MAX / 4;

    // 1-based potentials; p[j] = row matched to column j (0 = none)
    let mut u = vec![0i128; n + 1];
    let mut v = vec![0i128; m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=m {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for j in 1..=m {
        if p[j] != 0 {
            assignment[p[j] - 1] = j - 1;
        }
    }
    let mut total = 0i128;
    for (i, &j) in assignment.iter().enumerate() {
        total += weights[i][j]?;
    }
    Some((total, assignment))
}

/// The lexicographically smallest system of distinct representatives:
/// row `i` takes an entry of `candidates[i]` (each list ascending), all
/// chosen entries distinct, earlier rows preferring smaller entries.
pub fn lexmin_matching(candidates: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = candidates.len();
    let mut fixed: Vec<usize> = Vec::with_capacity(n);
    for i in 0..n {
        let mut chosen = None;
        for &c in &candidates[i] {
            if fixed.contains(&c) {
                continue;
            }
            fixed.push(c);
            if completes(&candidates[i + 1..], &fixed) {
                chosen = Some(c);
                break;
            }
            fixed.pop();
        }
        chosen?;
    }
    Some(fixed)
}

/// Kuhn's augmenting paths: can every row get a distinct entry avoiding `taken`?
fn completes(rows: &[Vec<usize>], taken: &[usize]) -> bool {
    let mut owner: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    for r in 0..rows.len() {
        let mut visited = std::collections::HashSet::new();
        if !augment(r, rows, taken, &mut owner, &mut visited) {
            return false;
        }
    }
    true
}

fn augment(
    row: usize,
    rows: &[Vec<usize>],
    taken: &[usize],
    owner: &mut std::collections::HashMap<usize, usize>,
    visited: &mut std::collections::HashSet<usize>,
) -> bool {
    for &c in &rows[row] {
        if taken.contains(&c) || !visited.insert(c) {
            continue;
        }
        let free = match owner.get(&c) {
            None => true,
            Some(&other) => augment(other, rows, taken, owner, visited),
        };
        if free {
            owner.insert(c, row);
            return true;
        }
    }
    false
}
