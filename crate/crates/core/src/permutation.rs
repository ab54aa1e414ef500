//! Permutations of `1..=n` with 1-indexed positions: parity, disjoint-cycle
//! decomposition, cycle traversal, transpositions and class-leader
//! normalization (ascending tail beyond position `k`).

use std::fmt;

use crate::error::{Error, Result};

/// Sign of a permutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flipped(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn is_even(self) -> bool {
        self == Parity::Even
    }
}

/// Traversal direction inside a cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// A permutation `p` of `1..=n`; `p.image(i)` is the value at position `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.images {
            if !first {
                write!(f, "-")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

impl Permutation {
    /// Builds a permutation from `images[i-1] = p(i)`, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("empty image list".into()));
        }
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v > n {
                return Err(Error::InvalidPermutation(format!(
                    "value {v} out of range 1..={n}"
                )));
            }
            if seen[v] {
                return Err(Error::InvalidPermutation(format!("duplicate value {v}")));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    /// Number of symbols `n`.
    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Value at position `pos` (1-indexed).
    pub fn image(&self, pos: usize) -> usize {
        assert!(
            pos >= 1 && pos <= self.images.len(),
            "position {pos} out of range 1..={}",
            self.images.len()
        );
        self.images[pos - 1]
    }

    /// Position holding `value`, i.e. the inverse permutation applied to it.
    pub fn position_of(&self, value: usize) -> usize {
        assert!(
            value >= 1 && value <= self.images.len(),
            "value {value} out of range 1..={}",
            self.images.len()
        );
        1 + self
            .images
            .iter()
            .position(|&v| v == value)
            .expect("bijection invariant")
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Parity of the inversion count, computed from the cycle structure:
    /// the sign is even iff `n - #cycles` is even.
    pub fn sign(&self) -> Parity {
        let n = self.images.len();
        let mut seen = vec![false; n + 1];
        let mut cycles = 0;
        for start in 1..=n {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut v = start;
            while !seen[v] {
                seen[v] = true;
                v = self.images[v - 1];
            }
        }
        if (n - cycles) % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Returns a copy with the values at positions `a` and `b` exchanged.
    pub fn apply_transposition(&self, a: usize, b: usize) -> Result<Self> {
        let n = self.images.len();
        for pos in [a, b] {
            if pos < 1 || pos > n {
                return Err(Error::PositionOutOfRange { position: pos, n });
            }
        }
        if a == b {
            return Err(Error::InvalidPermutation(
                "transposition positions must differ".into(),
            ));
        }
        let mut images = self.images.clone();
        images.swap(a - 1, b - 1);
        Ok(Permutation { images })
    }

    /// Disjoint-cycle decomposition; fixed points appear as singletons.
    /// Each cycle starts at its minimum value and cycles are sorted by it.
    pub fn cycle_decompose(&self) -> CycleDecomposition {
        let n = self.images.len();
        let mut cycle_index = vec![usize::MAX; n + 1];
        let mut cycles = Vec::new();
        for start in 1..=n {
            if cycle_index[start] != usize::MAX {
                continue;
            }
            let idx = cycles.len();
            let mut cycle = Vec::new();
            let mut v = start;
            while cycle_index[v] == usize::MAX {
                cycle_index[v] = idx;
                cycle.push(v);
                v = self.images[v - 1];
            }
            cycles.push(cycle);
        }
        CycleDecomposition {
            cycles,
            cycle_index,
        }
    }

    /// Enumerates one full period of the cycle containing `start`:
    /// `start, p(start), p²(start), …` forward, or via the inverse backward.
    pub fn traverse_cycle(&self, start: usize, direction: Direction) -> Vec<usize> {
        assert!(
            start >= 1 && start <= self.images.len(),
            "value {start} out of range"
        );
        let mut out = vec![start];
        let mut v = start;
        loop {
            v = match direction {
                Direction::Forward => self.images[v - 1],
                Direction::Backward => self.position_of(v),
            };
            if v == start {
                break;
            }
            out.push(v);
        }
        out
    }

    /// Class leader under the tail-equivalence at `k`: positions `k+1..=n`
    /// are sorted ascending, positions `1..=k` are untouched.
    pub fn lead(&self, k: usize) -> Self {
        assert!(k >= 1 && k < self.images.len(), "need 1 <= k < n");
        let mut images = self.images.clone();
        images[k..].sort_unstable();
        Permutation { images }
    }

    /// True when the tail beyond position `k` is ascending.
    pub fn is_class_leader(&self, k: usize) -> bool {
        self.images[k..].windows(2).all(|w| w[0] < w[1])
    }
}

/// Disjoint cycles of a permutation plus a value-to-cycle lookup.
#[derive(Clone, Debug)]
pub struct CycleDecomposition {
    cycles: Vec<Vec<usize>>,
    cycle_index: Vec<usize>,
}

impl CycleDecomposition {
    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles.len()
    }

    /// The cycle containing `value`.
    pub fn cycle_of(&self, value: usize) -> &[usize] {
        &self.cycles[self.cycle_index[value]]
    }
}

/// First position after the left half of the arm: positions `2..=mid` form
/// the left half and `mid+1..=k` the right half, `mid = floor(k/2) + 1`.
/// Both halves are non-empty exactly when `k >= 3`.
pub fn arm_split(k: usize) -> usize {
    k / 2 + 1
}

/// Left-half positions of the arm for a given `k`.
pub fn left_positions(k: usize) -> std::ops::RangeInclusive<usize> {
    2..=arm_split(k)
}

/// Right-half positions of the arm for a given `k`.
pub fn right_positions(k: usize) -> std::ops::RangeInclusive<usize> {
    arm_split(k) + 1..=k
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum HalfClass {
    LeftToRight,
    RightToLeft,
    Other,
}

fn classify(c: &Permutation, t: &Permutation, k: usize, value: usize) -> HalfClass {
    let mid = arm_split(k);
    let pc = c.position_of(value);
    let pt = t.position_of(value);
    let in_left_c = pc >= 2 && pc <= mid;
    let in_right_c = pc > mid && pc <= k;
    let in_left_t = pt >= 2 && pt <= mid;
    let in_right_t = pt > mid && pt <= k;
    if in_left_c && in_right_t {
        HalfClass::LeftToRight
    } else if in_right_c && in_left_t {
        HalfClass::RightToLeft
    } else {
        HalfClass::Other
    }
}

/// Cycles of `c` (size >= 2) whose forward traversal strictly alternates
/// between values displaced left-to-right and right-to-left relative to `t`.
pub fn alternating_cycles(c: &Permutation, t: &Permutation, k: usize) -> Result<Vec<Vec<usize>>> {
    if c.len() != t.len() {
        return Err(Error::MismatchedParams(format!(
            "permutations on {} and {} symbols",
            c.len(),
            t.len()
        )));
    }
    if k < 1 || k >= c.len() {
        return Err(Error::MismatchedParams(format!(
            "k = {k} incompatible with n = {}",
            c.len()
        )));
    }
    let mut found = Vec::new();
    'outer: for cycle in c.cycle_decompose().cycles() {
        if cycle.len() < 2 {
            continue;
        }
        let mut classes = Vec::with_capacity(cycle.len());
        for &v in cycle {
            let class = classify(c, t, k, v);
            if class == HalfClass::Other {
                continue 'outer;
            }
            classes.push(class);
        }
        let m = classes.len();
        if (0..m).all(|i| classes[i] != classes[(i + 1) % m]) {
            found.push(cycle.clone());
        }
    }
    Ok(found)
}

/// Number of alternating cycles of `c` relative to `t`.
pub fn alternating_cycle_count(c: &Permutation, t: &Permutation, k: usize) -> Result<usize> {
    Ok(alternating_cycles(c, t, k)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(images: &[usize]) -> Permutation {
        Permutation::from_images(images.to_vec()).unwrap()
    }

    /// Independent O(n²) sign oracle by direct inversion counting.
    fn sign_by_inversions(p: &Permutation) -> Parity {
        let n = p.len();
        let mut inversions = 0usize;
        for i in 1..=n {
            for j in i + 1..=n {
                if p.image(i) > p.image(j) {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    fn all_permutations(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut images: Vec<usize> = (1..=n).collect();
        loop {
            out.push(Permutation::from_images(images.clone()).unwrap());
            // next lexicographic permutation
            let Some(i) = (0..n - 1).rev().find(|&i| images[i] < images[i + 1]) else {
                break;
            };
            let j = (0..n).rev().find(|&j| images[j] > images[i]).unwrap();
            images.swap(i, j);
            images[i + 1..].reverse();
        }
        out
    }

    #[test]
    fn sign_basics() {
        assert_eq!(Permutation::identity(6).sign(), Parity::Even);
        assert_eq!(perm(&[2, 1, 3, 4, 5]).sign(), Parity::Odd);
        // the running example node used throughout: even
        assert_eq!(
            perm(&[7, 2, 3, 4, 5, 1, 6, 8, 9, 10]).sign(),
            Parity::Even
        );
    }

    #[test]
    fn sign_matches_inversion_count_exhaustively() {
        // n = 8 covers all 40320 permutations
        for n in 1..=8 {
            for p in all_permutations(n) {
                assert_eq!(p.sign(), sign_by_inversions(&p));
            }
        }
    }

    #[test]
    fn transposition_swaps_and_flips_sign() {
        let p = perm(&[1, 2, 3]);
        let q = p.apply_transposition(1, 2).unwrap();
        assert_eq!(q.images(), &[2, 1, 3]);
        assert_eq!(q.apply_transposition(1, 2).unwrap(), p);

        let long = perm(&[7, 2, 3, 4, 5, 1, 6, 8, 9, 10]);
        let swapped = long.apply_transposition(1, 6).unwrap();
        assert_eq!(swapped.images(), &[1, 2, 3, 4, 5, 7, 6, 8, 9, 10]);
        assert_ne!(swapped.sign(), long.sign());

        assert!(p.apply_transposition(0, 2).is_err());
        assert!(p.apply_transposition(1, 4).is_err());
        assert!(p.apply_transposition(2, 2).is_err());
    }

    #[test]
    fn transposition_always_flips_sign() {
        for p in all_permutations(5) {
            for a in 1..=5 {
                for b in a + 1..=5 {
                    assert_ne!(p.apply_transposition(a, b).unwrap().sign(), p.sign());
                }
            }
        }
    }

    #[test]
    fn cycle_decomposition_canonical() {
        let id = Permutation::identity(4);
        assert_eq!(id.cycle_decompose().cycle_count(), 4);

        let p = perm(&[1, 4, 5, 2, 3, 6]);
        let d = p.cycle_decompose();
        assert_eq!(
            d.cycles(),
            &[vec![1], vec![2, 4], vec![3, 5], vec![6]]
        );
        assert_eq!(d.cycle_of(4), &[2, 4]);
    }

    #[test]
    fn transposition_merges_or_splits_cycles() {
        // values at the swapped positions in the same cycle -> split; in
        // different cycles -> merge
        for p in all_permutations(6) {
            let d = p.cycle_decompose();
            for a in 1..=6usize {
                for b in a + 1..=6 {
                    let same = std::ptr::eq(d.cycle_of(a), d.cycle_of(b));
                    let q = p.apply_transposition(a, b).unwrap();
                    let expected = if same {
                        d.cycle_count() + 1
                    } else {
                        d.cycle_count() - 1
                    };
                    assert_eq!(q.cycle_decompose().cycle_count(), expected);
                }
            }
        }
    }

    #[test]
    fn traversal_directions() {
        let id = Permutation::identity(5);
        assert_eq!(id.traverse_cycle(3, Direction::Forward), vec![3]);

        let p = perm(&[1, 4, 5, 2, 3, 6]);
        assert_eq!(p.traverse_cycle(4, Direction::Backward), vec![4, 2]);

        // forward order equals reversed backward order, rotated to the start
        let forward = p.traverse_cycle(2, Direction::Forward);
        let mut backward = p.traverse_cycle(2, Direction::Backward);
        backward[1..].reverse();
        assert_eq!(forward, backward);
    }

    #[test]
    fn lead_sorts_tail_only() {
        let p = perm(&[7, 2, 3, 4, 5, 6, 1, 10, 9, 8]);
        let led = p.lead(5);
        assert_eq!(led.images(), &[7, 2, 3, 4, 5, 1, 6, 8, 9, 10]);
        assert_eq!(led.lead(5), led);
        assert!(led.is_class_leader(5));
        assert!(!p.is_class_leader(5));
    }

    #[test]
    fn lead_preserves_class() {
        for p in all_permutations(6) {
            let k = 3;
            let led = p.lead(k);
            assert_eq!(&led.images()[1..k], &p.images()[1..k]);
            let mut a: Vec<usize> = std::iter::once(p.image(1))
                .chain(p.images()[k..].iter().copied())
                .collect();
            let mut b: Vec<usize> = std::iter::once(led.image(1))
                .chain(led.images()[k..].iter().copied())
                .collect();
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn alternating_cycle_examples() {
        let t = Permutation::identity(6);
        assert_eq!(alternating_cycle_count(&t, &t, 5).unwrap(), 0);

        let c = perm(&[1, 4, 5, 2, 3, 6]);
        let found = alternating_cycles(&c, &t, 5).unwrap();
        assert_eq!(found, vec![vec![2, 4], vec![3, 5]]);

        // a non-singleton cycle touching a tail value contributes nothing
        let c2 = perm(&[6, 2, 3, 4, 5, 1]);
        assert_eq!(alternating_cycle_count(&c2, &t, 5).unwrap(), 0);

        let short = Permutation::identity(4);
        assert!(alternating_cycle_count(&c, &short, 3).is_err());
    }

    #[test]
    fn alternating_cycles_bounded_by_half_arm() {
        let k = 3;
        for t in all_permutations(5) {
            if !t.is_class_leader(k) {
                continue;
            }
            for c in all_permutations(5) {
                if !c.is_class_leader(k) {
                    continue;
                }
                let chi = alternating_cycle_count(&c, &t, k).unwrap();
                assert!(chi <= (k - 1) / 2);
            }
        }
    }

    #[test]
    fn half_positions() {
        assert_eq!(left_positions(3).collect::<Vec<_>>(), vec![2]);
        assert_eq!(right_positions(3).collect::<Vec<_>>(), vec![3]);
        assert_eq!(left_positions(5).collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(right_positions(5).collect::<Vec<_>>(), vec![4, 5]);
        assert_eq!(left_positions(4).collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(right_positions(4).collect::<Vec<_>>(), vec![4]);
    }

    #[test]
    fn display_round_trip() {
        let p = perm(&[7, 2, 3, 4, 5, 1, 6, 8, 9, 10]);
        assert_eq!(p.to_string(), "7-2-3-4-5-1-6-8-9-10");
    }
}
