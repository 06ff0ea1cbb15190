//! Permutation-side constructions: reduced words of the longest element of
//! the symmetric group, commutation classes keyed by inverted triples, and
//! the two-dimensional order on those classes by single-step inclusion.
//!
//! `reduced_words_w0`, `triple_key`, and `build_b_n_2` deliberately avoid
//! the root-system code so they can serve as an independent oracle; the
//! dictionary functions further down bridge the two sides.

use std::collections::HashMap;

use crate::bits::{BitMatrix, SubsetKey, UnionFind};
use crate::chain_orders::heap_poset;
use crate::chain_poset::{mg_preorder, ChainSet, PolygonIndex};
use crate::error::Error;
use crate::lattice::LabelledLattice;
use crate::roots::RootSystem;
use crate::weak_order::WeakOrder;
use crate::{PosIdx, Result};

/// All reduced words for the longest element of S_{n+1}, in lexicographic
/// order. Letters are 0-based generator indices.
pub fn reduced_words_w0(n: usize) -> Vec<Vec<u8>> {
    // Peel right descents from the reverse permutation.
    fn words_of(perm: &mut Vec<u8>, acc: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        let mut any = false;
        for i in 0..perm.len() - 1 {
            if perm[i] > perm[i + 1] {
                any = true;
                perm.swap(i, i + 1);
                acc.push(i as u8);
                words_of(perm, acc, out);
                acc.pop();
                perm.swap(i, i + 1);
            }
        }
        if !any {
            // Identity reached: acc spells w0 read right to left.
            out.push(acc.iter().rev().copied().collect());
        }
    }
    let mut w0: Vec<u8> = (0..=n as u8).rev().collect();
    let mut out = Vec::new();
    words_of(&mut w0, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Sequence of inverted value pairs (a < b, 1-based) along a word.
pub fn pair_sequence(n: usize, word: &[u8]) -> Result<Vec<(u8, u8)>> {
    let mut perm: Vec<u8> = (1..=n as u8 + 1).collect();
    let mut out = Vec::with_capacity(word.len());
    for &i in word {
        let i = i as usize;
        if i + 1 > n {
            return Err(Error::NotCoxeterWord(format!("letter {i} out of range")));
        }
        let (a, b) = (perm[i], perm[i + 1]);
        if a > b {
            return Err(Error::NotAMaximalChain(format!(
                "word {word:?} is not reduced"
            )));
        }
        out.push((a, b));
        perm.swap(i, i + 1);
    }
    Ok(out)
}

/// Triples {i < j < k} of {1, ..., n+1} in lexicographic order.
pub fn triples(n: usize) -> Vec<(u8, u8, u8)> {
    let mut out = Vec::new();
    for i in 1..=n as u8 + 1 {
        for j in i + 1..=n as u8 + 1 {
            for k in j + 1..=n as u8 + 1 {
                out.push((i, j, k));
            }
        }
    }
    out
}

/// Key of the commutation class of a reduced word for w0: bit t is set iff
/// triple t has its packet {ij, ik, jk} reversed relative to lexicographic
/// order. The middle pair {i,k} always sits between the other two.
pub fn triple_key(n: usize, word: &[u8]) -> Result<SubsetKey> {
    let seq = pair_sequence(n, word)?;
    if seq.len() != n * (n + 1) / 2 {
        return Err(Error::NotAMaximalChain(format!(
            "word of length {} does not reach w0",
            word.len()
        )));
    }
    let mut pos: HashMap<(u8, u8), usize> = HashMap::new();
    for (p, &pair) in seq.iter().enumerate() {
        pos.insert(pair, p);
    }
    let mut key = SubsetKey::EMPTY;
    for (t, &(i, j, k)) in triples(n).iter().enumerate() {
        let (pij, pik, pjk) = (pos[&(i, j)], pos[&(i, k)], pos[&(j, k)]);
        if pij < pik && pik < pjk {
            // lexicographic
        } else if pjk < pik && pik < pij {
            key.insert(t as u32);
        } else {
            return Err(Error::Internal(format!(
                "packet of ({i},{j},{k}) not admissibly ordered"
            )));
        }
    }
    Ok(key)
}

/// The two-dimensional order on commutation classes of reduced words of w0:
/// classes are triple-inversion keys, covers are single-step inclusions.
#[derive(Debug)]
pub struct Bn2 {
    pub n: usize,
    pub words: Vec<Vec<u8>>,
    /// Realized keys, ascending.
    pub keys: Vec<SubsetKey>,
    pub class_of_word: Vec<u32>,
    pub rep_word: Vec<u32>,
    pub covers: Vec<(u32, u32)>,
    le: BitMatrix,
}

impl Bn2 {
    pub fn n_classes(&self) -> usize {
        self.keys.len()
    }

    pub fn le(&self, a: u32, b: u32) -> bool {
        a == b || self.le.get(a as usize, b as usize)
    }
}

pub fn build_b_n_2(n: usize) -> Result<Bn2> {
    if !(2..=5).contains(&n) {
        return Err(Error::UnsupportedType(format!("B({n},2) out of range")));
    }
    let words = reduced_words_w0(n);
    let key_of_word: Vec<SubsetKey> = words
        .iter()
        .map(|w| triple_key(n, w))
        .collect::<Result<_>>()?;

    // Cross-check: keys classify exactly the commutation classes.
    let index: HashMap<&[u8], u32> = words
        .iter()
        .enumerate()
        .map(|(k, w)| (w.as_slice(), k as u32))
        .collect();
    let mut uf = UnionFind::new(words.len());
    for (k, w) in words.iter().enumerate() {
        for i in 0..w.len().saturating_sub(1) {
            if w[i].abs_diff(w[i + 1]) >= 2 {
                let mut other = w.clone();
                other.swap(i, i + 1);
                let o = index[other.as_slice()];
                uf.unite(k as u32, o);
            }
        }
    }
    let (comm_class, n_comm) = uf.canonical_classes();
    let mut class_key: Vec<Option<SubsetKey>> = vec![None; n_comm];
    for (w, &cls) in comm_class.iter().enumerate() {
        match class_key[cls as usize] {
            None => class_key[cls as usize] = Some(key_of_word[w]),
            Some(k) if k == key_of_word[w] => {}
            _ => {
                return Err(Error::Internal(
                    "triple key varies inside a commutation class".into(),
                ))
            }
        }
    }
    let mut keys: Vec<SubsetKey> = key_of_word.to_vec();
    keys.sort_unstable();
    keys.dedup();
    if keys.len() != n_comm {
        return Err(Error::Internal(
            "triple keys identify distinct commutation classes".into(),
        ));
    }

    let class_of_word: Vec<u32> = key_of_word
        .iter()
        .map(|k| keys.binary_search(k).unwrap() as u32)
        .collect();
    let mut rep_word = vec![u32::MAX; keys.len()];
    for (w, &cls) in class_of_word.iter().enumerate() {
        if rep_word[cls as usize] == u32::MAX {
            rep_word[cls as usize] = w as u32;
        }
    }

    let n_triples = triples(n).len() as u32;
    let mut covers = Vec::new();
    for (i, &k) in keys.iter().enumerate() {
        for bit in 0..n_triples {
            if k.contains(bit) {
                continue;
            }
            let mut bigger = k;
            bigger.insert(bit);
            if let Ok(j) = keys.binary_search(&bigger) {
                covers.push((i as u32, j as u32));
            }
        }
    }
    covers.sort_unstable();

    let m = keys.len();
    let mut le = BitMatrix::new(m);
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); m];
    for &(a, b) in &covers {
        adj[a as usize].push(b);
    }
    for start in 0..m as u32 {
        let mut stack = vec![start];
        let mut seen = vec![false; m];
        seen[start as usize] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v as usize] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    le.set(start as usize, w as usize);
                    stack.push(w);
                }
            }
        }
    }

    Ok(Bn2 {
        n,
        words,
        keys,
        class_of_word,
        rep_word,
        covers,
        le,
    })
}

/// Dictionary between triples of {1, ..., n+1} and the non-commutative
/// rank-two subsystems of the A_n root system: triple {i,j,k} ↔ the
/// subsystem spanned by e_i − e_j and e_j − e_k. Returns, per triple index,
/// the subsystem's non-commutative position.
pub fn triple_subsystem_dictionary(n: usize, rs: &RootSystem) -> Result<Vec<u32>> {
    if rs.rank() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: rs.rank(),
        });
    }
    let root_of_pair = |a: u8, b: u8| -> Result<PosIdx> {
        // e_a − e_b = α_{a-1} + ... + α_{b-2} in 0-based simple roots
        let mut coeffs = vec![0i64; n];
        for t in (a - 1)..(b - 1) {
            coeffs[t as usize] = 1;
        }
        rs.root_index(&coeffs)
            .ok_or_else(|| Error::Internal(format!("missing root for pair ({a},{b})")))
    };
    let mut out = Vec::new();
    for (i, j, k) in triples(n) {
        let sub = rs.subsystem_of_pair(root_of_pair(i, j)?, root_of_pair(j, k)?);
        let pos = rs.subsystems()[sub as usize]
            .noncomm_idx
            .ok_or_else(|| Error::Internal("triple landed in a commutative subsystem".into()))?;
        // The third pair must land in the same subsystem.
        if rs.subsystem_of_pair(root_of_pair(i, k)?, root_of_pair(i, j)?) != sub {
            return Err(Error::Internal(
                "triple pairs span different subsystems".into(),
            ));
        }
        out.push(pos);
    }
    // The dictionary must be a bijection onto non-commutative positions.
    let mut seen = vec![false; rs.noncommutative().len()];
    for &p in &out {
        if seen[p as usize] {
            return Err(Error::Internal("dictionary is not injective".into()));
        }
        seen[p as usize] = true;
    }
    if !seen.iter().all(|&x| x) {
        return Err(Error::Internal("dictionary is not surjective".into()));
    }
    Ok(out)
}

/// Maps a permutation-side key through the dictionary to a root-side key.
pub fn map_key_through(dict: &[u32], key: SubsetKey) -> SubsetKey {
    let mut out = SubsetKey::EMPTY;
    for t in key.iter() {
        out.insert(dict[t as usize]);
    }
    out
}

/// B(n,1) against the root-side weak order of A_n: the map sending a
/// permutation to the root set of its inverted value pairs must be a
/// cover-preserving order isomorphism.
pub fn check_b_n_1_isomorphism(n: usize, rs: &RootSystem, wo: &WeakOrder) -> Result<()> {
    let mut root_of_pair = HashMap::new();
    for a in 1..=n as u8 + 1 {
        for b in a + 1..=n as u8 + 1 {
            let mut coeffs = vec![0i64; n];
            for t in (a - 1)..(b - 1) {
                coeffs[t as usize] = 1;
            }
            let idx = rs
                .root_index(&coeffs)
                .ok_or_else(|| Error::Internal("missing pair root".into()))?;
            root_of_pair.insert((a, b), idx);
        }
    }
    let inv_key = |perm: &[u8]| -> crate::bits::RootSet {
        let mut set = crate::bits::RootSet::EMPTY;
        for i in 0..perm.len() {
            for j in i + 1..perm.len() {
                if perm[i] > perm[j] {
                    set.insert(root_of_pair[&(perm[j], perm[i])]);
                }
            }
        }
        set
    };

    // BFS over permutations by adjacent transpositions of increasing length.
    let id: Vec<u8> = (1..=n as u8 + 1).collect();
    let mut index: HashMap<Vec<u8>, u32> = HashMap::new();
    index.insert(id.clone(), 0);
    let mut elems = vec![id];
    let mut cursor = 0;
    let mut pair_covers: Vec<(u32, u32)> = Vec::new();
    while cursor < elems.len() {
        let perm = elems[cursor].clone();
        for i in 0..n {
            if perm[i] < perm[i + 1] {
                let mut next = perm.clone();
                next.swap(i, i + 1);
                let to = match index.get(&next) {
                    Some(&t) => t,
                    None => {
                        let t = elems.len() as u32;
                        index.insert(next.clone(), t);
                        elems.push(next);
                        t
                    }
                };
                pair_covers.push((cursor as u32, to));
            }
        }
        cursor += 1;
    }
    if elems.len() != wo.len() {
        return Err(Error::Internal(format!(
            "S_{} has {} elements, weak order has {}",
            n + 1,
            elems.len(),
            wo.len()
        )));
    }
    let mapped: Vec<crate::ElemId> = elems
        .iter()
        .map(|p| {
            wo.element_by_inv(inv_key(p))
                .ok_or_else(|| Error::Internal(format!("no element with inversions of {p:?}")))
        })
        .collect::<Result<_>>()?;
    let mut seen = vec![false; wo.len()];
    for &m in &mapped {
        if seen[m as usize] {
            return Err(Error::Internal("permutation map not injective".into()));
        }
        seen[m as usize] = true;
    }
    // Covers map to covers, and both sides have equally many.
    let total_covers: usize = (0..wo.len() as u32).map(|w| wo.up_edges(w).len()).sum();
    if pair_covers.len() != total_covers {
        return Err(Error::Internal("cover counts differ".into()));
    }
    for &(a, b) in &pair_covers {
        wo.edge_label(mapped[a as usize], mapped[b as usize])?;
    }
    // Order agrees with inversion-pair containment on all pairs.
    for (a, pa) in elems.iter().enumerate() {
        for (b, pb) in elems.iter().enumerate() {
            let lhs = inv_key(pa).is_subset(inv_key(pb));
            if lhs != wo.le(mapped[a], mapped[b]) {
                return Err(Error::Internal(format!(
                    "order mismatch between {pa:?} and {pb:?}"
                )));
            }
        }
    }
    Ok(())
}

/// Report of an experiment running the chain-class order against an
/// arbitrary reduced word of w0 as reference.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RhboReport {
    pub reference_word: Vec<u8>,
    pub n_classes: usize,
    pub n_minima: usize,
    pub n_maxima: usize,
    pub is_poset: bool,
    pub polygon_complete: bool,
    /// Whether the transitive-closure order equals inclusion of keys.
    pub closure_equals_inclusion: bool,
    pub inclusion_witness: Option<String>,
}

/// Builds the chain-class order for the labelling referenced by an
/// arbitrary reduced word of w0 and reports its extremal structure plus the
/// comparison with the inclusion order on inversion keys.
pub fn rhbo_experiment(
    rs: &RootSystem,
    wo: &WeakOrder,
    lab: &LabelledLattice,
    reference_word: &[u8],
    guard: usize,
) -> Result<RhboReport> {
    let w = wo.element_of_reduced_word(reference_word)?;
    if w != wo.top() {
        return Err(Error::NotAMaximalChain(format!(
            "{reference_word:?} is not a word for the longest element"
        )));
    }
    let mut chain = vec![wo.bottom()];
    let mut cur = wo.bottom();
    for &s in reference_word {
        cur = wo.right_mul(cur, s as usize);
        chain.push(cur);
    }
    let seq = wo.root_sequence(&chain)?;
    let heap = heap_poset(rs, &seq)?;
    // Reference orders per subsystem: the heap restricted to each.
    let ref_orders: Vec<Vec<PosIdx>> = rs
        .noncommutative()
        .iter()
        .map(|&id| {
            let mut roots = rs.subsystems()[id as usize].roots.clone();
            roots.sort_by(|&a, &b| {
                if heap.lt(a, b) {
                    std::cmp::Ordering::Less
                } else if heap.lt(b, a) {
                    std::cmp::Ordering::Greater
                } else {
                    std::cmp::Ordering::Equal
                }
            });
            roots
        })
        .collect();

    let polys = PolygonIndex::new(lab.lattice())?;
    let chains = ChainSet::collect(lab, guard)?;
    let mg = mg_preorder(lab, &heap, &chains, &polys)?;
    let fast = crate::chain_orders::mg_poset_fast(rs, &ref_orders, wo, &chains)?;
    crate::chain_orders::verify_fast_matches_moves(&fast, &mg)?;

    // Compare the closure order with inclusion of keys under the class
    // bijection given by matching chain partitions.
    let mut key_of_class = vec![SubsetKey::EMPTY; mg.n_classes];
    for (chain_idx, &cls) in mg.class_of_chain.iter().enumerate() {
        key_of_class[cls as usize] = fast.key_of_chain[chain_idx];
    }
    let mut closure_equals_inclusion = true;
    let mut witness = None;
    'cmp: for a in 0..mg.n_classes as u32 {
        for b in 0..mg.n_classes as u32 {
            let incl = key_of_class[a as usize].is_subset(key_of_class[b as usize]);
            if incl != mg.le(a, b) {
                closure_equals_inclusion = false;
                witness = Some(format!(
                    "classes {a}, {b}: inclusion={incl}, closure={}",
                    mg.le(a, b)
                ));
                break 'cmp;
            }
        }
    }

    Ok(RhboReport {
        reference_word: reference_word.to_vec(),
        n_classes: mg.n_classes,
        n_minima: mg.minima.len(),
        n_maxima: mg.maxima.len(),
        is_poset: mg.is_poset,
        polygon_complete: mg.polygon_complete,
        closure_equals_inclusion,
        inclusion_witness: witness,
    })
}

/// Cross-check of the permutation-side order against the chain-class order
/// of A_n with linear Coxeter element: keys must correspond chain by chain
/// under the triple dictionary, and the arc sets must agree.
pub fn check_b_n_2_isomorphism(
    bn2: &Bn2,
    rs: &RootSystem,
    wo: &WeakOrder,
    ref_orders: &[Vec<PosIdx>],
    fast: &crate::chain_orders::FastMg,
) -> Result<()> {
    let dict = triple_subsystem_dictionary(bn2.n, rs)?;
    // Word by word: the dictionary must transport the triple key to the
    // root-side key of the corresponding maximal chain.
    for (word, &key) in bn2.words.iter().zip(bn2.class_of_word.iter()) {
        let mut chain = vec![wo.bottom()];
        let mut cur = wo.bottom();
        for &s in word {
            cur = wo.right_mul(cur, s as usize);
            chain.push(cur);
        }
        let root_key = {
            let seq = wo.root_sequence(&chain)?;
            crate::chain_orders::class_key(rs, ref_orders, &seq)?
        };
        let transported = map_key_through(&dict, bn2.keys[key as usize]);
        if transported != root_key {
            return Err(Error::Internal(format!("key mismatch for word {word:?}")));
        }
    }
    // Class sets and covers must biject through the dictionary.
    let mut transported: Vec<SubsetKey> = bn2
        .keys
        .iter()
        .map(|&k| map_key_through(&dict, k))
        .collect();
    let perm: Vec<u32> = transported
        .iter()
        .map(|k| {
            fast.keys
                .binary_search(k)
                .map(|i| i as u32)
                .map_err(|_| Error::Internal("transported key not realized".into()))
        })
        .collect::<Result<_>>()?;
    transported.sort_unstable();
    if transported != fast.keys {
        return Err(Error::Internal("realized key sets differ".into()));
    }
    let mut mapped_covers: Vec<(u32, u32)> = bn2
        .covers
        .iter()
        .map(|&(a, b)| (perm[a as usize], perm[b as usize]))
        .collect();
    mapped_covers.sort_unstable();
    if mapped_covers != fast.covers {
        return Err(Error::Internal("cover sets differ".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_counts() {
        assert_eq!(reduced_words_w0(2).len(), 2);
        assert_eq!(reduced_words_w0(3).len(), 16);
        assert_eq!(reduced_words_w0(4).len(), 768);
    }

    #[test]
    fn pair_sequences_and_keys() {
        // s0 s1 s0 in S3 inverts {1,2}, {1,3}, {2,3} in lexicographic order.
        let seq = pair_sequence(2, &[0, 1, 0]).unwrap();
        assert_eq!(seq, vec![(1, 2), (1, 3), (2, 3)]);
        assert_eq!(triple_key(2, &[0, 1, 0]).unwrap(), SubsetKey::EMPTY);
        let full = triple_key(2, &[1, 0, 1]).unwrap();
        assert_eq!(full.len(), 1);
        assert!(pair_sequence(2, &[0, 0]).is_err());
    }

    #[test]
    fn bn2_counts() {
        assert_eq!(build_b_n_2(2).unwrap().n_classes(), 2);
        assert_eq!(build_b_n_2(3).unwrap().n_classes(), 8);
        assert_eq!(build_b_n_2(4).unwrap().n_classes(), 62);
        assert!(build_b_n_2(1).is_err());
        assert!(build_b_n_2(6).is_err());
    }

    #[test]
    fn bn2_is_graded_poset() {
        let b = build_b_n_2(3).unwrap();
        // two-chain from empty to full along covers, antisymmetric closure
        for &(x, y) in &b.covers {
            assert_eq!(b.keys[y as usize].len(), b.keys[x as usize].len() + 1);
            assert!(b.keys[x as usize].is_subset(b.keys[y as usize]));
            assert!(b.le(x, y) && !b.le(y, x));
        }
        // unique minimum (empty key) and maximum (full key)
        assert_eq!(b.keys[0], SubsetKey::EMPTY);
        let top = (b.n_classes() - 1) as u32;
        for c in 0..b.n_classes() as u32 {
            assert!(b.le(0, c), "bottom below {c}");
            assert!(b.le(c, top), "{c} below top");
        }
    }
}
