//! The weak Bruhat order of a finite Coxeter group, built by breadth-first
//! closure from the identity. Elements are canonically identified by their
//! inversion bitsets, covers carry the unique root added to the inversion
//! set, and root sequences of maximal chains are validated against the
//! rank-two betweenness condition.

use std::collections::HashMap;

use crate::bits::RootSet;
use crate::error::Error;
use crate::lattice::{LabelledLattice, Lattice, Poset};
use crate::roots::RootSystem;
use crate::{ElemId, PosIdx, Result};

#[derive(Debug, Clone)]
struct Element {
    inv: RootSet,
    length: u32,
    /// w(β_b) as a signed index: ±(idx + 1).
    action: Vec<i16>,
}

/// The weak Bruhat lattice; immutable after construction.
#[derive(Debug)]
pub struct WeakOrder {
    n_roots: usize,
    rank: usize,
    elements: Vec<Element>,
    index: HashMap<u64, ElemId>,
    /// Upward covers (label, target), sorted by label.
    up: Vec<Vec<(PosIdx, ElemId)>>,
    /// Right multiplication table: right[w][s] = ws.
    right: Vec<Vec<ElemId>>,
    top: ElemId,
}

impl WeakOrder {
    /// BFS from the identity, multiplying by generators on the right;
    /// inv(ws) = inv(w) ∪ {w(α_s)} when the length increases. The element
    /// count is checked against the group order of the type.
    pub fn build(rs: &RootSystem) -> Result<WeakOrder> {
        let n_roots = rs.count();
        let rank = rs.rank();
        let expected = rs.type_tag().weyl_order();

        let identity = Element {
            inv: RootSet::EMPTY,
            length: 0,
            action: (0..n_roots as i16).map(|b| b + 1).collect(),
        };
        let mut elements = vec![identity];
        let mut index: HashMap<u64, ElemId> = HashMap::new();
        index.insert(0, 0);
        let mut up: Vec<Vec<(PosIdx, ElemId)>> = vec![Vec::new()];
        let mut right: Vec<Vec<ElemId>> = vec![vec![0; rank]];

        let mut cursor = 0usize;
        while cursor < elements.len() {
            for s in 0..rank {
                let img_signed = elements[cursor].action[rs.simple(s) as usize];
                if img_signed < 0 {
                    // length decreases; the partner edge is recorded from the
                    // shorter side.
                    let label = (-img_signed - 1) as PosIdx;
                    let mut inv = elements[cursor].inv;
                    inv.remove(label);
                    right[cursor][s] = index[&inv.0];
                    continue;
                }
                let label = (img_signed - 1) as PosIdx;
                let mut inv = elements[cursor].inv;
                inv.insert(label);
                let target = match index.get(&inv.0) {
                    Some(&t) => t,
                    None => {
                        if elements.len() as u64 >= 4 * expected {
                            return Err(Error::GuardExceeded(
                                "weak order exceeded the group-order bound".into(),
                            ));
                        }
                        let mut action = Vec::with_capacity(n_roots);
                        for b in 0..n_roots as PosIdx {
                            let (img, neg) = rs.reflect(s, b);
                            let v = elements[cursor].action[img as usize];
                            action.push(if neg { -v } else { v });
                        }
                        let t = elements.len() as ElemId;
                        elements.push(Element {
                            inv,
                            length: elements[cursor].length + 1,
                            action,
                        });
                        index.insert(inv.0, t);
                        up.push(Vec::new());
                        right.push(vec![0; rank]);
                        t
                    }
                };
                right[cursor][s] = target;
                let edge = (label, target);
                if !up[cursor].contains(&edge) {
                    up[cursor].push(edge);
                }
            }
            cursor += 1;
        }

        if elements.len() as u64 != expected {
            return Err(Error::Internal(format!(
                "weak order has {} elements, expected {}",
                elements.len(),
                expected
            )));
        }
        let top = elements.len() as ElemId - 1;
        if elements[top as usize].inv != RootSet::full(n_roots as u32) {
            return Err(Error::Internal("top element is not w0".into()));
        }
        for edges in up.iter_mut() {
            edges.sort_unstable();
        }
        Ok(WeakOrder {
            n_roots,
            rank,
            elements,
            index,
            up,
            right,
            top,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bottom(&self) -> ElemId {
        0
    }

    pub fn top(&self) -> ElemId {
        self.top
    }

    pub fn inv(&self, w: ElemId) -> RootSet {
        self.elements[w as usize].inv
    }

    pub fn length(&self, w: ElemId) -> u32 {
        self.elements[w as usize].length
    }

    pub fn element_by_inv(&self, inv: RootSet) -> Option<ElemId> {
        self.index.get(&inv.0).copied()
    }

    /// v ≤ w iff inv(v) ⊆ inv(w).
    pub fn le(&self, v: ElemId, w: ElemId) -> bool {
        self.inv(v).is_subset(self.inv(w))
    }

    /// Upward covers (label, target) of w, sorted by label.
    pub fn up_edges(&self, w: ElemId) -> &[(PosIdx, ElemId)] {
        &self.up[w as usize]
    }

    /// Right multiplication ws (length may go either way).
    pub fn right_mul(&self, w: ElemId, s: usize) -> ElemId {
        self.right[w as usize][s]
    }

    /// Left multiplication sw via the inversion-set transformation
    /// inv(sw) = s(inv(w) ∖ {α_s}) ∪ {α_s if α_s ∉ inv(w)}.
    pub fn left_mul(&self, rs: &RootSystem, s: usize, w: ElemId) -> ElemId {
        let alpha = rs.simple(s);
        let inv = self.inv(w);
        let mut out = RootSet::EMPTY;
        for b in inv.iter() {
            if b == alpha {
                continue;
            }
            out.insert(rs.reflect(s, b).0);
        }
        if !inv.contains(alpha) {
            out.insert(alpha);
        }
        self.index[&out.0]
    }

    /// True when α_s ∈ inv(w), i.e. ℓ(sw) < ℓ(w).
    pub fn has_left_descent(&self, rs: &RootSystem, s: usize, w: ElemId) -> bool {
        self.inv(w).contains(rs.simple(s))
    }

    /// w(β) as (index, negative?).
    pub fn act(&self, w: ElemId, b: PosIdx) -> (PosIdx, bool) {
        let v = self.elements[w as usize].action[b as usize];
        if v < 0 {
            ((-v - 1) as PosIdx, true)
        } else {
            ((v - 1) as PosIdx, false)
        }
    }

    /// Element reached from the identity by a word; errors when the word is
    /// not reduced.
    pub fn element_of_reduced_word(&self, word: &[u8]) -> Result<ElemId> {
        let mut w = 0 as ElemId;
        for &s in word {
            let t = self.right_mul(w, s as usize);
            if self.length(t) != self.length(w) + 1 {
                return Err(Error::NotAMaximalChain(format!(
                    "word {word:?} is not reduced"
                )));
            }
            w = t;
        }
        Ok(w)
    }

    /// The unique root in inv(w) ∖ inv(v) for a cover v ⋖ w.
    pub fn edge_label(&self, v: ElemId, w: ElemId) -> Result<PosIdx> {
        let diff = self.inv(w).minus(self.inv(v));
        if self.inv(v).is_subset(self.inv(w))
            && diff.len() == 1
            && self.length(w) == self.length(v) + 1
        {
            Ok(diff.iter().next().unwrap())
        } else {
            Err(Error::NotACover(v, w))
        }
    }

    /// The weak order as a root-labelled lattice (joins and meets verified).
    pub fn to_labelled_lattice(&self) -> Result<LabelledLattice> {
        let mut covers = Vec::new();
        let mut labels = HashMap::new();
        for (v, edges) in self.up.iter().enumerate() {
            for &(label, w) in edges {
                covers.push((v as ElemId, w));
                labels.insert((v as ElemId, w), label);
            }
        }
        let poset = Poset::from_covers(self.elements.len(), &covers)?;
        // Sanity: the poset closure agrees with inversion containment.
        for v in 0..self.elements.len() as ElemId {
            for w in 0..self.elements.len() as ElemId {
                if poset.le(v, w) != self.le(v, w) {
                    return Err(Error::Internal(
                        "cover closure disagrees with inversion containment".into(),
                    ));
                }
            }
        }
        let lat = Lattice::from_poset(poset)?;
        LabelledLattice::new(lat, &labels, self.n_roots)
    }

    /// Root sequence of a maximal chain: the labels read bottom to top.
    pub fn root_sequence(&self, chain: &[ElemId]) -> Result<Vec<PosIdx>> {
        if chain.first() != Some(&0) || chain.last() != Some(&self.top) {
            return Err(Error::NotAMaximalChain(format!("{chain:?}")));
        }
        chain
            .windows(2)
            .map(|w| self.edge_label(w[0], w[1]))
            .collect()
    }
}

/// A total order on all positive roots is admissible exactly when, inside
/// every rank-two subsystem, each interior root sits between the two cone
/// ends that generate it.
pub fn validate_admissible(rs: &RootSystem, seq: &[PosIdx]) -> bool {
    if seq.len() != rs.count() {
        return false;
    }
    let mut pos = vec![usize::MAX; rs.count()];
    for (i, &b) in seq.iter().enumerate() {
        if (b as usize) >= rs.count() || pos[b as usize] != usize::MAX {
            return false;
        }
        pos[b as usize] = i;
    }
    rs.cone_triples().iter().all(|&(i, j, k)| {
        let (pi, pj, pk) = (pos[i as usize], pos[j as usize], pos[k as usize]);
        pi.min(pj) < pk && pk < pi.max(pj)
    })
}

/// Biclosedness of a set of positive roots: closed under positive
/// combinations, with co-closure for decompositions.
pub fn is_biclosed(rs: &RootSystem, set: RootSet) -> bool {
    rs.cone_triples().iter().all(|&(i, j, k)| {
        let closed = !(set.contains(i) && set.contains(j)) || set.contains(k);
        let coclosed = !set.contains(k) || set.contains(i) || set.contains(j);
        closed && coclosed
    })
}

/// Brute-force enumeration of all biclosed subsets; only sensible for small
/// positive systems (the verification suite caps it at 2^|Φ⁺| ≤ 2^9).
pub fn enumerate_biclosed(rs: &RootSystem) -> Vec<RootSet> {
    let n = rs.count() as u32;
    (0..(1u64 << n))
        .map(RootSet)
        .filter(|&s| is_biclosed(rs, s))
        .collect()
}
