//! Small bitset utilities shared across the crate.
//!
//! Root sets fit in a `u64` (the catalog caps |Φ⁺| at 64) and subsystem or
//! triple keys fit in a `u128`. Element-indexed relations use [`BitMatrix`].

/// Set of positive-root indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RootSet(pub u64);

impl RootSet {
    pub const EMPTY: RootSet = RootSet(0);

    pub fn singleton(i: u32) -> Self {
        RootSet(1 << i)
    }

    pub fn contains(self, i: u32) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: u32) {
        self.0 |= 1 << i;
    }

    pub fn remove(&mut self, i: u32) {
        self.0 &= !(1 << i);
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        RootSet(self.0 | other.0)
    }

    pub fn intersect(self, other: Self) -> Self {
        RootSet(self.0 & other.0)
    }

    pub fn minus(self, other: Self) -> Self {
        RootSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = u32> {
        BitIter(self.0)
    }

    /// All roots below `n`, i.e. the full positive system.
    pub fn full(n: u32) -> Self {
        if n == 64 {
            RootSet(!0)
        } else {
            RootSet((1u64 << n) - 1)
        }
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;
    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(i)
    }
}

/// Set of rank-two-subsystem ids (or, on the permutation side, triples).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SubsetKey(pub u128);

impl SubsetKey {
    pub const EMPTY: SubsetKey = SubsetKey(0);

    pub fn contains(self, i: u32) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: u32) {
        self.0 |= 1 << i;
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = u32> {
        Bit128Iter(self.0)
    }

    /// Render as a fixed-width bitstring, lowest id first.
    pub fn to_bitstring(self, width: u32) -> String {
        (0..width)
            .map(|i| if self.contains(i) { '1' } else { '0' })
            .collect()
    }
}

struct Bit128Iter(u128);

impl Iterator for Bit128Iter {
    type Item = u32;
    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(i)
    }
}

/// Dense square bit matrix; `get(i, j)` reads bit `j` of row `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitMatrix {
            n,
            words,
            data: vec![0; words * n],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize) {
        self.data[i * self.words + j / 64] |= 1 << (j % 64);
    }

    /// row_i |= row_j
    pub fn or_row_into(&mut self, j: usize, i: usize) {
        let (a, b) = (i * self.words, j * self.words);
        for w in 0..self.words {
            let v = self.data[b + w];
            self.data[a + w] |= v;
        }
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    pub fn row_is_subset(&self, i: usize, j: usize) -> bool {
        let (a, b) = (i * self.words, j * self.words);
        (0..self.words).all(|w| self.data[a + w] & !self.data[b + w] == 0)
    }

    pub fn iter_row(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let row = self.row(i);
        row.iter()
            .enumerate()
            .flat_map(|(w, &bits)| BitIter(bits).map(move |b| w * 64 + b as usize))
    }
}

/// Union-find with deterministic smallest-representative semantics.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = self.parent[x as usize];
        }
        x
    }

    /// Unites the classes of `a` and `b`; the smaller root wins so that
    /// representatives do not depend on merge order.
    pub fn unite(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
    }

    /// Class index per element, classes numbered by first occurrence.
    pub fn canonical_classes(&mut self) -> (Vec<u32>, usize) {
        let n = self.parent.len();
        let mut class_of = vec![u32::MAX; n];
        let mut next = 0u32;
        for x in 0..n as u32 {
            let r = self.find(x) as usize;
            if class_of[r] == u32::MAX {
                class_of[r] = next;
                next += 1;
            }
            class_of[x as usize] = class_of[r];
        }
        (class_of, next as usize)
    }
}
