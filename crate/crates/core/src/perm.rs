//! Permutations of `[n]`, canonical cycle decompositions, cycle counts,
//! rank relabeling and exhaustive enumeration for small orders.
//!
//! Internally everything is 0-based; external formats (JSON/CSV) are 1-based.

use crate::error::{Error, Result};

/// Largest order accepted by [`enumerate_permutations`]; 10! is just over
/// 3.6 million permutations.
pub const ENUMERATION_LIMIT: usize = 10;

/// A permutation of `{0, 1, …, n-1}` stored in one-line form:
/// `image[i]` is the image of `i`. The empty permutation (`n = 0`) is valid
/// and is used for random-size models.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    image: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            image: (0..n as u32).collect(),
        }
    }

    /// Builds from a 0-based image; rejects anything that is not a bijection.
    pub fn from_image(image: Vec<u32>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if (v as usize) >= n || seen[v as usize] {
                return Err(Error::NotABijection);
            }
            seen[v as usize] = true;
        }
        Ok(Self { image })
    }

    /// Builds from a 1-based image, the convention of all external formats.
    pub fn from_one_based_image(image: &[u32]) -> Result<Self> {
        if image.contains(&0) {
            return Err(Error::NotABijection);
        }
        Self::from_image(image.iter().map(|&v| v - 1).collect())
    }

    /// Builds from 1-based cycles over `[n]`; elements absent from every
    /// cycle are fixed points.
    pub fn from_cycles(n: usize, cycles: &[Vec<u32>]) -> Result<Self> {
        let mut image: Vec<u32> = (0..n as u32).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &v) in cycle.iter().enumerate() {
                if v == 0 || v as usize > n {
                    return Err(Error::NotABijection);
                }
                let i = (v - 1) as usize;
                if touched[i] {
                    return Err(Error::NotABijection);
                }
                touched[i] = true;
                let next = cycle[(k + 1) % cycle.len()];
                image[i] = next - 1;
            }
        }
        Self::from_image(image)
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    /// 0-based image of a 0-based point.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i] as usize
    }

    pub fn image(&self) -> &[u32] {
        &self.image
    }

    pub fn one_based_image(&self) -> Vec<u32> {
        self.image.iter().map(|&v| v + 1).collect()
    }

    /// Packs the one-line form into a `u64` key (4 bits per point, so
    /// `n <= 16`). Used for fast empirical-distribution keys.
    pub fn pack_key(&self) -> u64 {
        assert!(self.n() <= 16, "pack_key supports n <= 16");
        let mut key = 0u64;
        for (i, &v) in self.image.iter().enumerate() {
            key |= (v as u64) << (4 * i);
        }
        key
    }

    /// Canonical cycle decomposition: each cycle starts with its minimal
    /// element and cycles are listed in increasing order of those minima.
    pub fn cycles(&self) -> CycleDecomposition {
        let n = self.n();
        let mut visited = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if visited[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = start;
            loop {
                visited[cur] = true;
                cycle.push(cur as u32);
                cur = self.apply(cur);
                if cur == start {
                    break;
                }
            }
            cycles.push(cycle);
        }
        CycleDecomposition { cycles }
    }

    /// The vector `(K_1, …)` where `K_l` is the number of cycles of length `l`.
    pub fn cycle_counts(&self) -> CycleCounts {
        let mut counts = CycleCounts::new();
        for cycle in &self.cycles().cycles {
            counts.increment(cycle.len());
        }
        counts
    }

    /// Total number of cycles, `K`.
    pub fn cycle_count(&self) -> usize {
        self.cycles().cycles.len()
    }
}

/// A list of cycles partitioning `{0, …, n-1}`, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDecomposition {
    cycles: Vec<Vec<u32>>,
}

impl CycleDecomposition {
    pub fn cycles(&self) -> &[Vec<u32>] {
        &self.cycles
    }

    pub fn one_based(&self) -> Vec<Vec<u32>> {
        self.cycles
            .iter()
            .map(|c| c.iter().map(|&v| v + 1).collect())
            .collect()
    }

    /// Recomposes the permutation the decomposition came from.
    pub fn to_permutation(&self) -> Result<Permutation> {
        let n: usize = self.cycles.iter().map(Vec::len).sum();
        let one_based: Vec<Vec<u32>> = self.one_based();
        Permutation::from_cycles(n, &one_based)
    }
}

/// Cycle-length histogram `counts[l-1] = K_l`, kept free of trailing zeros so
/// equality is independent of padding.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CycleCounts {
    counts: Vec<u64>,
}

impl CycleCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn increment(&mut self, len: usize) {
        assert!(len >= 1);
        if self.counts.len() < len {
            self.counts.resize(len, 0);
        }
        self.counts[len - 1] += 1;
    }

    /// `K_l`; zero for lengths beyond the largest observed.
    pub fn k(&self, len: usize) -> u64 {
        assert!(len >= 1);
        self.counts.get(len - 1).copied().unwrap_or(0)
    }

    /// Largest length with a nonzero count (0 if empty).
    pub fn max_len(&self) -> usize {
        self.counts.len()
    }

    pub fn total_cycles(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// The conserved quantity `sum_l l * K_l`.
    pub fn weighted_size(&self) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as u64 + 1) * c)
            .sum()
    }

    /// Counts padded (or truncated) to exactly `n` entries, for export.
    pub fn padded(&self, n: usize) -> Vec<u64> {
        let mut v = self.counts.clone();
        v.resize(n, 0);
        v
    }

    fn normalize(&mut self) {
        while self.counts.last() == Some(&0) {
            self.counts.pop();
        }
    }
}

impl FromIterator<usize> for CycleCounts {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut counts = CycleCounts::new();
        for len in iter {
            counts.increment(len);
        }
        counts.normalize();
        counts
    }
}

/// Replaces each value by its rank (0 = smallest) and transports the given
/// bijection along: input maps `values[i] -> values[image[i]]`, output maps
/// `rank(values[i]) -> rank(values[image[i]])`. This is the rank relabeling
/// that turns a permutation of an arbitrary distinct-value set into a
/// permutation of `[n]` depending only on relative order.
pub fn relabel_by_rank(values: &[f64], image: &[usize]) -> Result<Permutation> {
    let n = values.len();
    if n == 0 {
        return Err(Error::EmptyInput(
            "relabel_by_rank needs at least one value",
        ));
    }
    if image.len() != n {
        return Err(Error::LengthMismatch(n, image.len()));
    }
    // image must be a bijection of positions
    let mut seen = vec![false; n];
    for &j in image {
        if j >= n || seen[j] {
            return Err(Error::NotABijection);
        }
        seen[j] = true;
    }
    let rank = ranks(values)?;
    let mut out = vec![0u32; n];
    for i in 0..n {
        out[rank[i]] = rank[image[i]] as u32;
    }
    Permutation::from_image(out)
}

/// 0-based rank of each value; rejects NaN and duplicates.
pub(crate) fn ranks(values: &[f64]) -> Result<Vec<usize>> {
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::DuplicateValue);
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    for w in order.windows(2) {
        if values[w[0]] == values[w[1]] {
            return Err(Error::DuplicateValue);
        }
    }
    let mut rank = vec![0usize; values.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    Ok(rank)
}

/// All `n!` permutations of `[n]` in lexicographic order of the one-line
/// form. Guarded: `1 <= n <= 10`.
pub fn enumerate_permutations(n: usize) -> Result<PermutationIter> {
    if n == 0 {
        return Err(Error::EmptyOrder);
    }
    if n > ENUMERATION_LIMIT {
        return Err(Error::OrderTooLarge {
            n,
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(PermutationIter {
        next: Some((0..n as u32).collect()),
    })
}

pub struct PermutationIter {
    next: Option<Vec<u32>>,
}

impl Iterator for PermutationIter {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        self.next = next_lex(&mut succ).then_some(succ);
        Some(Permutation { image: current })
    }
}

/// Advances to the lexicographic successor in place; false at the last one.
fn next_lex(a: &mut [u32]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}
