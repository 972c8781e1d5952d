//! Set partitions as restricted growth strings.
//!
//! A partition of `{0, ..., n-1}` is encoded by labels `a[0..n]` with
//! `a[0] = 0` and `a[i] <= 1 + max(a[0..i])`. Elements sharing a label share
//! a part, and parts are numbered in order of their smallest element.
//! Enumeration is lexicographic in the labels.

/// Walks the partitions of `n` elements into at most `max_parts` parts.
///
/// ```
/// use cfr_core::skipcost::partitions::RestrictedGrowth;
/// let mut it = RestrictedGrowth::new(3, 2);
/// let mut seen = vec![it.labels().to_vec()];
/// while it.advance() {
///     seen.push(it.labels().to_vec());
/// }
/// assert_eq!(seen, [[0, 0, 0], [0, 0, 1], [0, 1, 0], [0, 1, 1]]);
/// ```
#[derive(Clone, Debug)]
pub struct RestrictedGrowth {
    labels: Vec<u8>,
    // prefix_max[i] = max(labels[0..i]), prefix_max[0] unused
    prefix_max: Vec<u8>,
    max_label: u8,
}

impl RestrictedGrowth {
    /// Starts at the one-part partition. `max_parts` must be at least 1.
    pub fn new(n: usize, max_parts: usize) -> Self {
        assert!(max_parts >= 1, "at least one part is needed");
        assert!(n <= u8::MAX as usize);
        RestrictedGrowth {
            labels: vec![0; n],
            prefix_max: vec![0; n],
            max_label: (max_parts.min(n.max(1)) - 1) as u8,
        }
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// Number of parts in the current partition.
    pub fn parts(&self) -> usize {
        match self.labels.last() {
            Some(&last) => (self.prefix_max[self.labels.len() - 1].max(last) + 1) as usize,
            None => 0,
        }
    }

    /// Moves to the next partition; false once the enumeration is exhausted.
    pub fn advance(&mut self) -> bool {
        let n = self.labels.len();
        for i in (1..n).rev() {
            let limit = self.max_label.min(self.prefix_max[i] + 1);
            if self.labels[i] < limit {
                self.labels[i] += 1;
                for j in i + 1..n {
                    self.labels[j] = 0;
                    self.prefix_max[j] = self.prefix_max[j - 1].max(self.labels[j - 1]);
                }
                return true;
            }
        }
        false
    }
}
