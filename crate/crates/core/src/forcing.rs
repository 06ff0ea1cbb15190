//! Forcing between covering relations of a polygonal lattice, congruences
//! generated by edge contraction, and verified lattice quotients with
//! inherited edge labels.
//!
//! A congruence here is always an explicit partition that has passed the
//! interval-class and congruence-law checks; nothing downstream trusts the
//! forcing closure alone.

use std::collections::HashMap;

use crate::bits::UnionFind;
use crate::error::Error;
use crate::lattice::{LabelledLattice, Lattice, Polygon, Poset};
use crate::{ElemId, Result};

pub fn edge_index_in(covers: &[(ElemId, ElemId)], a: ElemId, b: ElemId) -> Option<u32> {
    covers.binary_search(&(a, b)).ok().map(|k| k as u32)
}

/// The forcing preorder on cover edges, generated polygon by polygon:
/// the two bottom/top edge pairs of a polygon are forcing-equivalent
/// crosswise, and all four force every interior side edge.
#[derive(Debug, Clone)]
pub struct Forcing {
    arcs: Vec<Vec<u32>>,
}

impl Forcing {
    pub fn new(lat: &Lattice, polygons: &[Polygon]) -> Result<Forcing> {
        let covers = lat.covers();
        let mut arcs: Vec<Vec<u32>> = vec![Vec::new(); covers.len()];
        let idx = |a: ElemId, b: ElemId| -> Result<u32> {
            edge_index_in(covers, a, b).ok_or(Error::NotACover(a, b))
        };
        for p in polygons {
            let bl = idx(p.min, p.left[1])?;
            let br = idx(p.min, p.right[1])?;
            let tl = idx(p.left[p.left.len() - 2], p.max)?;
            let tr = idx(p.right[p.right.len() - 2], p.max)?;
            arcs[bl as usize].push(tr);
            arcs[tr as usize].push(bl);
            arcs[br as usize].push(tl);
            arcs[tl as usize].push(br);
            let mut interior = Vec::new();
            for side in [&p.left, &p.right] {
                for w in side[1..side.len() - 1].windows(2) {
                    interior.push(idx(w[0], w[1])?);
                }
            }
            for e in [bl, br, tl, tr] {
                arcs[e as usize].extend_from_slice(&interior);
            }
        }
        for a in arcs.iter_mut() {
            a.sort_unstable();
            a.dedup();
        }
        Ok(Forcing { arcs })
    }

    pub fn edge_count(&self) -> usize {
        self.arcs.len()
    }

    /// Edges reachable from the seeds (reflexively).
    pub fn closure_from(&self, seeds: &[u32]) -> Vec<bool> {
        let mut seen = vec![false; self.arcs.len()];
        let mut stack: Vec<u32> = seeds.to_vec();
        for &s in seeds {
            seen[s as usize] = true;
        }
        while let Some(e) = stack.pop() {
            for &f in &self.arcs[e as usize] {
                if !seen[f as usize] {
                    seen[f as usize] = true;
                    stack.push(f);
                }
            }
        }
        seen
    }

    /// Forcing-equivalence classes (strongly connected components), numbered
    /// by their least edge.
    pub fn equivalence_classes(&self) -> Vec<u32> {
        let n = self.arcs.len();
        // Kosaraju: finish order on forward arcs, then sweep reverse arcs.
        let mut order = Vec::with_capacity(n);
        let mut state = vec![0u8; n]; // 0 unseen, 1 active, 2 done
        for start in 0..n as u32 {
            if state[start as usize] != 0 {
                continue;
            }
            let mut stack = vec![(start, 0usize)];
            state[start as usize] = 1;
            while let Some(&mut (v, ref mut i)) = stack.last_mut() {
                if *i < self.arcs[v as usize].len() {
                    let w = self.arcs[v as usize][*i];
                    *i += 1;
                    if state[w as usize] == 0 {
                        state[w as usize] = 1;
                        stack.push((w, 0));
                    }
                } else {
                    state[v as usize] = 2;
                    order.push(v);
                    stack.pop();
                }
            }
        }
        let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (v, out) in self.arcs.iter().enumerate() {
            for &w in out {
                rev[w as usize].push(v as u32);
            }
        }
        let mut comp = vec![u32::MAX; n];
        let mut uf = UnionFind::new(n);
        for &start in order.iter().rev() {
            if comp[start as usize] != u32::MAX {
                continue;
            }
            comp[start as usize] = start;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in &rev[v as usize] {
                    if comp[w as usize] == u32::MAX {
                        comp[w as usize] = start;
                        uf.unite(start, w);
                        stack.push(w);
                    }
                }
            }
        }
        uf.canonical_classes().0
    }

    /// Full reachability: does edge `e` force edge `f`?
    pub fn forces(&self, e: u32, f: u32) -> bool {
        self.closure_from(&[e])[f as usize]
    }
}

/// Checks that an edge labelling is constant on forcing-equivalence classes.
pub fn check_forcing_consistent(lab: &LabelledLattice, forcing: &Forcing) -> Result<()> {
    let classes = forcing.equivalence_classes();
    let mut rep_label: HashMap<u32, u32> = HashMap::new();
    for (e, &cls) in classes.iter().enumerate() {
        let l = lab.label_of_edge(e as u32);
        match rep_label.entry(cls) {
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(l);
            }
            std::collections::hash_map::Entry::Occupied(o) => {
                if *o.get() != l {
                    let (a, b) = lab.covers()[e];
                    return Err(Error::LabelConstancyViolation { x: a, y: b });
                }
            }
        }
    }
    Ok(())
}

/// A verified lattice congruence, stored as an explicit partition.
#[derive(Debug, Clone)]
pub struct Congruence {
    /// Element → class id; classes are numbered by their least element.
    pub class_of: Vec<u32>,
    pub n_classes: usize,
    /// Cover-edge indices contracted by the congruence, ascending.
    pub contracted: Vec<u32>,
}

impl Congruence {
    pub fn identity(n: usize) -> Congruence {
        Congruence {
            class_of: (0..n as u32).collect(),
            n_classes: n,
            contracted: Vec::new(),
        }
    }

    /// Builds the congruence from an explicit partition, running the full
    /// verification (interval classes and the congruence law).
    pub fn from_partition(lat: &Lattice, class_of: Vec<u32>) -> Result<Congruence> {
        let canonical = canonicalize(&class_of);
        let n_classes = canonical.iter().max().map_or(0, |&m| m as usize + 1);
        let contracted: Vec<u32> = lat
            .covers()
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| canonical[a as usize] == canonical[b as usize])
            .map(|(k, _)| k as u32)
            .collect();
        let cong = Congruence {
            class_of: canonical,
            n_classes,
            contracted,
        };
        cong.verify(lat)?;
        Ok(cong)
    }

    /// The smallest congruence contracting the seed edges: forcing closure,
    /// then union-find, then the same verification as any other congruence.
    pub fn from_edges(lat: &Lattice, forcing: &Forcing, seeds: &[u32]) -> Result<Congruence> {
        let closure = forcing.closure_from(seeds);
        let mut uf = UnionFind::new(lat.len());
        for (e, &inside) in closure.iter().enumerate() {
            if inside {
                let (a, b) = lat.covers()[e];
                uf.unite(a, b);
            }
        }
        let (class_of, _) = uf.canonical_classes();
        let cong = Congruence::from_partition(lat, class_of)?;
        // The contracted set must reproduce the forcing closure exactly.
        let closed: Vec<u32> = closure
            .iter()
            .enumerate()
            .filter(|&(_, &x)| x)
            .map(|(k, _)| k as u32)
            .collect();
        if cong.contracted != closed {
            return Err(Error::Internal(
                "forcing closure and contracted edge set disagree".into(),
            ));
        }
        Ok(cong)
    }

    /// Interval classes plus the congruence law
    /// x θ y ⇒ (x∨z) θ (y∨z) and (x∧z) θ (y∧z).
    ///
    /// Since verified classes are intervals, any two members of a class are
    /// linked by contracted covers, so checking the law on contracted covers
    /// generates it for all related pairs.
    fn verify(&self, lat: &Lattice) -> Result<()> {
        let n = lat.len();
        let mut min_of = vec![u32::MAX; self.n_classes];
        let mut max_of = vec![0u32; self.n_classes];
        let mut size = vec![0usize; self.n_classes];
        for x in 0..n as u32 {
            let c = self.class_of[x as usize] as usize;
            size[c] += 1;
            if min_of[c] == u32::MAX {
                min_of[c] = x;
            }
            max_of[c] = x;
        }
        for c in 0..self.n_classes {
            let (lo, hi) = (min_of[c], max_of[c]);
            if !lat.le(lo, hi) {
                return Err(Error::NotACongruence(format!(
                    "class {c} has incomparable extremes {lo}, {hi}"
                )));
            }
            let interval = lat.interval(lo, hi);
            if interval.len() != size[c]
                || !interval
                    .iter()
                    .all(|&z| self.class_of[z as usize] == c as u32)
            {
                return Err(Error::NotACongruence(format!(
                    "class {c} is not the interval [{lo}, {hi}]"
                )));
            }
        }
        for &e in &self.contracted {
            let (x, y) = lat.covers()[e as usize];
            for z in 0..n as u32 {
                let (a, b) = (lat.join(x, z), lat.join(y, z));
                if self.class_of[a as usize] != self.class_of[b as usize] {
                    return Err(Error::NotACongruence(format!(
                        "join law fails for ({x} θ {y}) with z = {z}"
                    )));
                }
                let (a, b) = (lat.meet(x, z), lat.meet(y, z));
                if self.class_of[a as usize] != self.class_of[b as usize] {
                    return Err(Error::NotACongruence(format!(
                        "meet law fails for ({x} θ {y}) with z = {z}"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn canonicalize(class_of: &[u32]) -> Vec<u32> {
    let mut remap: HashMap<u32, u32> = HashMap::new();
    let mut out = Vec::with_capacity(class_of.len());
    for &c in class_of {
        let next = remap.len() as u32;
        out.push(*remap.entry(c).or_insert(next));
    }
    out
}

/// Law-closure oracle: the smallest lattice congruence relating the given
/// pairs, computed directly from the congruence law with no forcing theory.
pub fn smallest_congruence_from_pairs(lat: &Lattice, pairs: &[(ElemId, ElemId)]) -> Vec<u32> {
    let n = lat.len();
    let mut uf = UnionFind::new(n);
    for &(a, b) in pairs {
        uf.unite(a, b);
    }
    loop {
        let mut changed = false;
        for x in 0..n as u32 {
            for y in x + 1..n as u32 {
                if uf.find(x) != uf.find(y) {
                    continue;
                }
                for z in 0..n as u32 {
                    for (a, b) in [
                        (lat.join(x, z), lat.join(y, z)),
                        (lat.meet(x, z), lat.meet(y, z)),
                    ] {
                        if uf.find(a) != uf.find(b) {
                            uf.unite(a, b);
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    uf.canonical_classes().0
}

/// A verified quotient lattice together with the projection data.
#[derive(Debug)]
pub struct QuotientData {
    pub lab: LabelledLattice,
    /// Element of the original lattice → class id in the quotient.
    pub class_of: Vec<u32>,
}

/// Builds L/θ with the inherited edge labelling λ_θ and verifies, in order:
/// projected covers stay covers (or collapse), the quotient relation is the
/// closure of projected covers, the quotient is a lattice, the projection is
/// a lattice homomorphism, the quotient is polygonal, and the label is
/// constant across all representative covers of each quotient edge.
pub fn quotient(lab: &LabelledLattice, cong: &Congruence) -> Result<QuotientData> {
    let lat = lab.lattice();
    let n = lat.len();
    let m = cong.n_classes;
    let class_of = &cong.class_of;

    let mut q_edges: Vec<(ElemId, ElemId)> = Vec::new();
    for &(a, b) in lat.covers() {
        let (ca, cb) = (class_of[a as usize], class_of[b as usize]);
        if ca != cb {
            q_edges.push((ca, cb));
        }
    }
    q_edges.sort_unstable();
    q_edges.dedup();
    // Poset::from_covers rejects any projected edge that fails to be a cover.
    let poset = Poset::from_covers(m, &q_edges)?;

    // The closure of projected covers must equal the quotient relation
    // [x] ≤ [y] iff some x' ≤ y' with x' ∈ [x], y' ∈ [y].
    let mut rel = vec![false; m * m];
    for x in 0..n as u32 {
        for y in 0..n as u32 {
            if lat.le(x, y) {
                rel[class_of[x as usize] as usize * m + class_of[y as usize] as usize] = true;
            }
        }
    }
    for cx in 0..m {
        for cy in 0..m {
            if rel[cx * m + cy] != poset.le(cx as u32, cy as u32) {
                return Err(Error::NotACongruence(format!(
                    "quotient relation and cover closure disagree on ({cx}, {cy})"
                )));
            }
        }
    }

    let qlat = Lattice::from_poset(poset)?;
    for x in 0..n as u32 {
        for y in 0..n as u32 {
            let hom_join = qlat.join(class_of[x as usize], class_of[y as usize]);
            if hom_join != class_of[lat.join(x, y) as usize] {
                return Err(Error::NotACongruence(format!(
                    "projection is not a join homomorphism at ({x}, {y})"
                )));
            }
            let hom_meet = qlat.meet(class_of[x as usize], class_of[y as usize]);
            if hom_meet != class_of[lat.meet(x, y) as usize] {
                return Err(Error::NotACongruence(format!(
                    "projection is not a meet homomorphism at ({x}, {y})"
                )));
            }
        }
    }
    qlat.check_polygonal()?;

    // λ_θ([x], [y]) = λ(x', y'), verified constant over all representatives.
    let mut labels: HashMap<(ElemId, ElemId), u32> = HashMap::new();
    for (k, &(a, b)) in lat.covers().iter().enumerate() {
        let (ca, cb) = (class_of[a as usize], class_of[b as usize]);
        if ca == cb {
            continue;
        }
        let l = lab.label_of_edge(k as u32);
        match labels.entry((ca, cb)) {
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(l);
            }
            std::collections::hash_map::Entry::Occupied(o) => {
                if *o.get() != l {
                    return Err(Error::LabelConstancyViolation { x: ca, y: cb });
                }
            }
        }
    }
    let qlab = LabelledLattice::new(qlat, &labels, lab.label_count())?;
    Ok(QuotientData {
        lab: qlab,
        class_of: class_of.clone(),
    })
}

/// Image of a chain under a projection, with consecutive repeats collapsed.
pub fn chain_image(class_of: &[u32], chain: &[ElemId]) -> Vec<ElemId> {
    let mut out: Vec<ElemId> = Vec::with_capacity(chain.len());
    for &x in chain {
        let c = class_of[x as usize];
        if out.last() != Some(&c) {
            out.push(c);
        }
    }
    out
}

/// Order-congruence test for plain posets: every class an interval and both
/// projections order-preserving. Used for the regression fixture showing
/// that order quotients of non-lattices can break maximal chains.
pub fn is_order_congruence(poset: &Poset, class_of: &[u32]) -> bool {
    let n = poset.len();
    let n_classes = class_of.iter().max().map_or(0, |&m| m as usize + 1);
    let mut members: Vec<Vec<u32>> = vec![Vec::new(); n_classes];
    for x in 0..n as u32 {
        members[class_of[x as usize] as usize].push(x);
    }
    let mut down_proj = vec![0u32; n];
    let mut up_proj = vec![0u32; n];
    for cls in &members {
        let mins: Vec<u32> = cls
            .iter()
            .copied()
            .filter(|&x| !cls.iter().any(|&y| y != x && poset.le(y, x)))
            .collect();
        let maxs: Vec<u32> = cls
            .iter()
            .copied()
            .filter(|&x| !cls.iter().any(|&y| y != x && poset.le(x, y)))
            .collect();
        if mins.len() != 1 || maxs.len() != 1 {
            return false;
        }
        let interval: Vec<u32> = (0..n as u32)
            .filter(|&z| poset.le(mins[0], z) && poset.le(z, maxs[0]))
            .collect();
        if &interval != cls {
            return false;
        }
        for &x in cls {
            down_proj[x as usize] = mins[0];
            up_proj[x as usize] = maxs[0];
        }
    }
    for x in 0..n as u32 {
        for y in 0..n as u32 {
            if poset.le(x, y)
                && (!poset.le(down_proj[x as usize], down_proj[y as usize])
                    || !poset.le(up_proj[x as usize], up_proj[y as usize]))
            {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CoxeterType;
    use crate::roots::RootSystem;
    use crate::weak_order::WeakOrder;

    fn weak_lattice(t: CoxeterType) -> LabelledLattice {
        let sys = crate::cartan::build_system(t).unwrap();
        let rs = RootSystem::generate(&sys).unwrap();
        WeakOrder::build(&rs)
            .unwrap()
            .to_labelled_lattice()
            .unwrap()
    }

    #[test]
    fn square_forcing_is_crosswise_equivalence() {
        let lat =
            Lattice::from_poset(Poset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap())
                .unwrap();
        let polys = lat.polygons().unwrap();
        let f = Forcing::new(&lat, &polys).unwrap();
        let e = |a, b| edge_index_in(lat.covers(), a, b).unwrap();
        assert!(f.forces(e(0, 1), e(2, 3)) && f.forces(e(2, 3), e(0, 1)));
        assert!(f.forces(e(0, 2), e(1, 3)) && f.forces(e(1, 3), e(0, 2)));
        assert!(!f.forces(e(0, 1), e(1, 3)));
        assert!(!f.forces(e(0, 1), e(0, 2)));
        let classes = f.equivalence_classes();
        assert_eq!(classes[e(0, 1) as usize], classes[e(2, 3) as usize]);
        assert_ne!(classes[e(0, 1) as usize], classes[e(0, 2) as usize]);
    }

    #[test]
    fn hexagon_bottom_edges_force_middles() {
        let lab = weak_lattice(CoxeterType::A(2));
        let lat = lab.lattice();
        let polys = lat.polygons().unwrap();
        assert_eq!(polys.len(), 1);
        let f = Forcing::new(lat, &polys).unwrap();
        let p = &polys[0];
        let e = |a, b| edge_index_in(lat.covers(), a, b).unwrap();
        let bl = e(p.min, p.left[1]);
        let ml = e(p.left[1], p.left[2]);
        let mr = e(p.right[1], p.right[2]);
        assert!(f.forces(bl, ml) && f.forces(bl, mr));
        assert!(!f.forces(ml, bl));
        assert!(!f.forces(ml, mr));
    }

    #[test]
    fn congruence_extremes() {
        let lab = weak_lattice(CoxeterType::A(2));
        let lat = lab.lattice();
        let polys = lat.polygons().unwrap();
        let f = Forcing::new(lat, &polys).unwrap();
        let id = Congruence::from_edges(lat, &f, &[]).unwrap();
        assert_eq!(id.n_classes, 6);
        let all: Vec<u32> = (0..lat.covers().len() as u32).collect();
        let full = Congruence::from_edges(lat, &f, &all).unwrap();
        assert_eq!(full.n_classes, 1);
    }

    #[test]
    fn hexagon_middle_edge_gives_pentagon() {
        let lab = weak_lattice(CoxeterType::A(2));
        let lat = lab.lattice();
        let polys = lat.polygons().unwrap();
        let f = Forcing::new(lat, &polys).unwrap();
        let p = &polys[0];
        let ml = edge_index_in(lat.covers(), p.left[1], p.left[2]).unwrap();
        let cong = Congruence::from_edges(lat, &f, &[ml]).unwrap();
        assert_eq!(cong.n_classes, 5);
        assert_eq!(cong.contracted, vec![ml]);
        let q = quotient(&lab, &cong).unwrap();
        assert_eq!(q.lab.len(), 5);
        assert!(q.lab.lattice().is_polygonal());
        // Quotient keeps the uncontracted representatives' labels.
        for (k, &(a, b)) in lab.covers().iter().enumerate() {
            let (ca, cb) = (cong.class_of[a as usize], cong.class_of[b as usize]);
            if ca != cb {
                assert_eq!(
                    q.lab.edge_label(ca, cb).unwrap(),
                    lab.label_of_edge(k as u32)
                );
            }
        }
    }

    #[test]
    fn identity_and_full_quotients() {
        let lab = weak_lattice(CoxeterType::A(2));
        let lat = lab.lattice();
        let id = Congruence::from_partition(lat, (0..6).collect()).unwrap();
        let q = quotient(&lab, &id).unwrap();
        assert_eq!(q.lab.len(), 6);
        assert_eq!(q.lab.covers(), lab.covers());
        assert_eq!(q.lab.labels(), lab.labels());

        let full = Congruence::from_partition(lat, vec![0; 6]).unwrap();
        let q = quotient(&lab, &full).unwrap();
        assert_eq!(q.lab.len(), 1);
    }

    #[test]
    fn invalid_partition_rejected() {
        let lab = weak_lattice(CoxeterType::A(2));
        let lat = lab.lattice();
        // Relating bottom and top without everything in between: the class
        // is not an interval.
        let mut class_of: Vec<u32> = (0..6).collect();
        class_of[5] = 0;
        assert!(Congruence::from_partition(lat, class_of).is_err());
    }

    #[test]
    fn forcing_closure_matches_law_closure_oracle_a3() {
        let lab = weak_lattice(CoxeterType::A(3));
        let lat = lab.lattice();
        let polys = lat.polygons().unwrap();
        let f = Forcing::new(lat, &polys).unwrap();
        for e in 0..lat.covers().len() as u32 {
            let cong = Congruence::from_edges(lat, &f, &[e]).unwrap();
            let (a, b) = lat.covers()[e as usize];
            let oracle = smallest_congruence_from_pairs(lat, &[(a, b)]);
            let oracle_contracted: Vec<u32> = lat
                .covers()
                .iter()
                .enumerate()
                .filter(|(_, &(x, y))| oracle[x as usize] == oracle[y as usize])
                .map(|(k, _)| k as u32)
                .collect();
            assert_eq!(cong.contracted, oracle_contracted, "edge {e}");
            assert_eq!(cong.class_of, canonicalize(&oracle), "edge {e}");
        }
    }

    #[test]
    fn labels_forcing_consistent_on_weak_orders() {
        for t in [CoxeterType::A(2), CoxeterType::A(3), CoxeterType::B(2)] {
            let lab = weak_lattice(t);
            let polys = lab.lattice().polygons().unwrap();
            let f = Forcing::new(lab.lattice(), &polys).unwrap();
            check_forcing_consistent(&lab, &f).unwrap();
        }
    }

    #[test]
    fn order_congruence_on_non_lattice_breaks_chains() {
        // Ten covers on eight elements; the mid element of the third class
        // and the top of the second class have no meet, so this is a poset
        // but not a lattice.
        let (m1, x2, x1, bm1, m3, x3, bm3, bm2) = (0u32, 1, 2, 3, 4, 5, 7, 6);
        let covers = vec![
            (m1, x2),
            (m1, x1),
            (x1, bm1),
            (x2, bm2),
            (x1, x3),
            (m3, x3),
            (bm2, bm3),
            (x3, bm3),
            (bm1, bm2),
            (x2, m3),
        ];
        let poset = Poset::from_covers(8, &covers).unwrap();
        assert!(Lattice::from_poset(poset.clone()).is_err());
        let mut class_of = vec![0u32; 8];
        for &x in &[m1, x1, bm1] {
            class_of[x as usize] = 0;
        }
        for &x in &[x2, bm2] {
            class_of[x as usize] = 1;
        }
        for &x in &[m3, x3, bm3] {
            class_of[x as usize] = 2;
        }
        assert!(is_order_congruence(&poset, &class_of));
        // The chain m1 < x1 < x3 < bm3 maps to [0] < [2], skipping class [1]:
        // not a maximal chain of the three-class quotient.
        let img = chain_image(&class_of, &[m1, x1, x3, bm3]);
        assert_eq!(img, vec![0, 2]);
        assert!(poset.le(m1, x2) && poset.le(x2, m3));
    }
}
