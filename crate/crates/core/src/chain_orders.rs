//! Chain machinery specific to Coxeter input: heap posets of root sequences,
//! square-class keys by inverted rank-two subsystems, and the fast
//! construction of the chain-class order from those keys.
//!
//! The fast order is never trusted on its own; `verify_fast_matches_moves`
//! checks it against the polygon-move construction class by class and arc
//! by arc.

use rayon::prelude::*;

use crate::bits::{BitMatrix, SubsetKey, UnionFind};
use crate::chain_poset::{ChainSet, MgPreorder};
use crate::error::Error;
use crate::lattice::LabelPoset;
use crate::roots::RootSystem;
use crate::weak_order::{validate_admissible, WeakOrder};
use crate::{PosIdx, Result};

/// Heap poset of an admissible root sequence: the transitive closure of
/// "earlier before later inside a common non-commutative subsystem".
/// Antisymmetry is verified by the closure constructor.
pub fn heap_poset(rs: &RootSystem, seq: &[PosIdx]) -> Result<LabelPoset> {
    if !validate_admissible(rs, seq) {
        return Err(Error::InadmissibleSequence(format!("{seq:?}")));
    }
    let mut pos = vec![0usize; rs.count()];
    for (i, &b) in seq.iter().enumerate() {
        pos[b as usize] = i;
    }
    let mut relations = Vec::new();
    for &id in rs.noncommutative() {
        let roots = &rs.subsystems()[id as usize].roots;
        for (a, &i) in roots.iter().enumerate() {
            for &j in roots.iter().skip(a + 1) {
                if pos[i as usize] < pos[j as usize] {
                    relations.push((i, j));
                } else {
                    relations.push((j, i));
                }
            }
        }
    }
    LabelPoset::from_relations(rs.count(), &relations)
}

/// Key of the square class of an admissible sequence: bit k is set iff the
/// k-th non-commutative subsystem is ordered opposite to the reference.
pub fn class_key(rs: &RootSystem, ref_orders: &[Vec<PosIdx>], seq: &[PosIdx]) -> Result<SubsetKey> {
    let mut pos = vec![usize::MAX; rs.count()];
    for (i, &b) in seq.iter().enumerate() {
        pos[b as usize] = i;
    }
    let mut key = SubsetKey::EMPTY;
    for (k, order) in ref_orders.iter().enumerate() {
        let ps: Vec<usize> = order.iter().map(|&b| pos[b as usize]).collect();
        let increasing = ps.windows(2).all(|w| w[0] < w[1]);
        let decreasing = ps.windows(2).all(|w| w[0] > w[1]);
        match (increasing, decreasing) {
            (true, false) => {}
            (false, true) => key.insert(k as u32),
            _ => {
                return Err(Error::InadmissibleSequence(format!(
                    "subsystem {k} is not totally ordered by the sequence"
                )))
            }
        }
    }
    Ok(key)
}

/// The chain-class order built from inversion keys: classes are realizable
/// keys, covers are single-bit containments between realizable keys.
#[derive(Debug)]
pub struct FastMg {
    /// Realizable keys, ascending.
    pub keys: Vec<SubsetKey>,
    pub key_of_chain: Vec<SubsetKey>,
    /// Chain → class position in `keys`.
    pub class_of_chain: Vec<u32>,
    /// Least chain index realizing each key.
    pub rep_chain: Vec<u32>,
    pub covers: Vec<(u32, u32)>,
    pub n_noncomm: u32,
}

impl FastMg {
    pub fn n_classes(&self) -> usize {
        self.keys.len()
    }
}

/// Builds the fast order; key computation is data-parallel over chains.
pub fn mg_poset_fast(
    rs: &RootSystem,
    ref_orders: &[Vec<PosIdx>],
    wo: &WeakOrder,
    chains: &ChainSet,
) -> Result<FastMg> {
    let key_of_chain: Vec<SubsetKey> = chains
        .chains()
        .par_iter()
        .map(|chain| {
            let seq = wo.root_sequence(chain)?;
            class_key(rs, ref_orders, &seq)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut keys: Vec<SubsetKey> = key_of_chain.to_vec();
    keys.sort_unstable();
    keys.dedup();
    let class_of_chain: Vec<u32> = key_of_chain
        .iter()
        .map(|k| keys.binary_search(k).unwrap() as u32)
        .collect();
    let mut rep_chain = vec![u32::MAX; keys.len()];
    for (c, &cls) in class_of_chain.iter().enumerate() {
        if rep_chain[cls as usize] == u32::MAX {
            rep_chain[cls as usize] = c as u32;
        }
    }

    // Covers: realizable keys differing in exactly one bit, larger ⊃ smaller.
    let n_noncomm = ref_orders.len() as u32;
    let mut covers = Vec::new();
    for (i, &k) in keys.iter().enumerate() {
        for bit in 0..n_noncomm {
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

    Ok(FastMg {
        keys,
        key_of_chain,
        class_of_chain,
        rep_chain,
        covers,
        n_noncomm,
    })
}

/// Cross-checks the two constructions of the chain-class order: identical
/// chain partitions (key equality iff square equivalence) and identical
/// arc sets under the class bijection (covers iff single-subsystem steps).
pub fn verify_fast_matches_moves(fast: &FastMg, mg: &MgPreorder) -> Result<()> {
    if fast.class_of_chain.len() != mg.class_of_chain.len() || fast.n_classes() != mg.n_classes {
        return Err(Error::Internal(format!(
            "class counts differ: {} keys vs {} square classes",
            fast.n_classes(),
            mg.n_classes
        )));
    }
    // The partitions must coincide chain by chain, giving the bijection.
    let mut to_fast = vec![u32::MAX; mg.n_classes];
    for (chain, (&mc, &fc)) in mg
        .class_of_chain
        .iter()
        .zip(fast.class_of_chain.iter())
        .enumerate()
    {
        if to_fast[mc as usize] == u32::MAX {
            to_fast[mc as usize] = fc;
        } else if to_fast[mc as usize] != fc {
            return Err(Error::Internal(format!(
                "chain {chain}: square class splits across two keys"
            )));
        }
    }
    let mut seen = vec![false; fast.n_classes()];
    for &fc in &to_fast {
        if fc == u32::MAX || seen[fc as usize] {
            return Err(Error::Internal("class bijection is not injective".into()));
        }
        seen[fc as usize] = true;
    }
    // Arc sets must match under the bijection.
    let mut mg_arcs: Vec<(u32, u32)> = mg
        .arcs
        .iter()
        .map(|&(a, b)| (to_fast[a as usize], to_fast[b as usize]))
        .collect();
    mg_arcs.sort_unstable();
    mg_arcs.dedup();
    if mg_arcs != fast.covers {
        return Err(Error::Internal(
            "increasing-move arcs and single-bit key covers disagree".into(),
        ));
    }
    Ok(())
}

/// A collapsed preordered set: the poset of mutual-comparability classes.
#[derive(Debug)]
pub struct Collapse {
    pub class_of: Vec<u32>,
    pub n_classes: usize,
    le: BitMatrix,
}

impl Collapse {
    pub fn le(&self, a: u32, b: u32) -> bool {
        a == b || self.le.get(a as usize, b as usize)
    }
}

/// Collapses a finite preorder to its universal poset image and verifies the
/// result is antisymmetric.
pub fn collapse(n: usize, le: impl Fn(u32, u32) -> bool) -> Result<Collapse> {
    let mut uf = UnionFind::new(n);
    for a in 0..n as u32 {
        for b in a + 1..n as u32 {
            if le(a, b) && le(b, a) {
                uf.unite(a, b);
            }
        }
    }
    let (class_of, n_classes) = uf.canonical_classes();
    let mut mat = BitMatrix::new(n_classes);
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            let (ca, cb) = (class_of[a as usize], class_of[b as usize]);
            if ca != cb && le(a, b) {
                mat.set(ca as usize, cb as usize);
            }
        }
    }
    for a in 0..n_classes {
        for b in 0..n_classes {
            if a != b && mat.get(a, b) && mat.get(b, a) {
                return Err(Error::NotAPartialOrder(
                    "collapse failed to remove a 2-cycle".into(),
                ));
            }
        }
    }
    Ok(Collapse {
        class_of,
        n_classes,
        le: mat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{build_system, CoxeterType, CoxeterWord};
    use crate::chain_poset::{mg_preorder, square_classes, PolygonIndex};

    fn setup(
        t: CoxeterType,
        c_letters: Vec<u8>,
    ) -> (
        RootSystem,
        WeakOrder,
        crate::lattice::LabelledLattice,
        Vec<Vec<PosIdx>>,
    ) {
        let sys = build_system(t).unwrap();
        let rs = RootSystem::generate(&sys).unwrap();
        let wo = WeakOrder::build(&rs).unwrap();
        let lab = wo.to_labelled_lattice().unwrap();
        let c = CoxeterWord::new(c_letters, sys.rank()).unwrap();
        let ref_orders = rs.reference_orders(&sys, &c).unwrap();
        (rs, wo, lab, ref_orders)
    }

    #[test]
    fn heap_of_a2_is_total() {
        let (rs, _, _, ref_orders) = setup(CoxeterType::A(2), vec![0, 1]);
        let seq = ref_orders[0].clone();
        let heap = heap_poset(&rs, &seq).unwrap();
        assert!(heap.lt(seq[0], seq[1]) && heap.lt(seq[1], seq[2]) && heap.lt(seq[0], seq[2]));
        assert!(!heap.lt(seq[1], seq[0]));
    }

    #[test]
    fn class_key_reference_and_reversal() {
        let (rs, wo, lab, ref_orders) = setup(CoxeterType::A(3), vec![0, 1, 2]);
        let chains = ChainSet::collect(&lab, 100).unwrap();
        // Some chain realizes the empty key, some the full key.
        let fast = mg_poset_fast(&rs, &ref_orders, &wo, &chains).unwrap();
        assert_eq!(fast.keys[0], SubsetKey::EMPTY);
        let full = fast.keys[fast.keys.len() - 1];
        assert_eq!(full.len(), rs.noncommutative().len() as u32);
        // Reversal of an admissible sequence flips every bit.
        let rep = chains.chain(fast.rep_chain[0]);
        let seq = wo.root_sequence(rep).unwrap();
        let rev: Vec<PosIdx> = seq.iter().rev().copied().collect();
        assert_eq!(class_key(&rs, &ref_orders, &rev).unwrap(), full);
    }

    #[test]
    fn a3_sixteen_chains_eight_keys() {
        let (rs, wo, lab, ref_orders) = setup(CoxeterType::A(3), vec![0, 1, 2]);
        let chains = ChainSet::collect(&lab, 100).unwrap();
        let fast = mg_poset_fast(&rs, &ref_orders, &wo, &chains).unwrap();
        assert_eq!(chains.len(), 16);
        assert_eq!(fast.n_classes(), 8);
    }

    #[test]
    fn heap_equality_iff_square_equivalence_a3_b3() {
        for (t, word) in [
            (CoxeterType::A(3), vec![0u8, 1, 2]),
            (CoxeterType::B(3), vec![0u8, 1, 2]),
        ] {
            let (rs, wo, lab, _) = setup(t, word);
            let polys = PolygonIndex::new(lab.lattice()).unwrap();
            let chains = ChainSet::collect(&lab, 1000).unwrap();
            let sq = square_classes(&chains, &polys).unwrap();
            let heaps: Vec<LabelPoset> = chains
                .chains()
                .iter()
                .map(|c| heap_poset(&rs, &wo.root_sequence(c).unwrap()).unwrap())
                .collect();
            for i in 0..chains.len() {
                for j in 0..chains.len() {
                    let same_heap = (0..rs.count() as u32).all(|a| {
                        (0..rs.count() as u32).all(|b| heaps[i].lt(a, b) == heaps[j].lt(a, b))
                    });
                    let same_class = sq.class_of_chain[i] == sq.class_of_chain[j];
                    assert_eq!(same_heap, same_class, "{t}: chains {i}, {j}");
                }
            }
        }
    }

    #[test]
    fn fast_matches_moves_a3() {
        let (rs, wo, lab, ref_orders) = setup(CoxeterType::A(3), vec![0, 1, 2]);
        let polys = PolygonIndex::new(lab.lattice()).unwrap();
        let chains = ChainSet::collect(&lab, 100).unwrap();
        let heap = {
            // reference heap from any chain with the empty key
            let fast = mg_poset_fast(&rs, &ref_orders, &wo, &chains).unwrap();
            let rep = chains.chain(fast.rep_chain[0]);
            heap_poset(&rs, &wo.root_sequence(rep).unwrap()).unwrap()
        };
        let mg = mg_preorder(&lab, &heap, &chains, &polys).unwrap();
        let fast = mg_poset_fast(&rs, &ref_orders, &wo, &chains).unwrap();
        verify_fast_matches_moves(&fast, &mg).unwrap();
        assert!(mg.is_poset && mg.polygon_complete);
    }

    #[test]
    fn collapse_poset_identity_and_two_cycle() {
        // A 3-chain collapses to itself.
        let le = |a: u32, b: u32| a <= b;
        let c = collapse(3, le).unwrap();
        assert_eq!(c.n_classes, 3);
        assert!(c.le(0, 2) && !c.le(2, 0));
        // A 2-cycle collapses to a point.
        let le = |_a: u32, _b: u32| true;
        let c = collapse(2, le).unwrap();
        assert_eq!(c.n_classes, 1);
    }
}
