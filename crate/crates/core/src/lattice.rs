//! Generic finite posets and lattices presented by covering relations, with
//! verified join/meet tables, polygon machinery, and maximal-chain
//! enumeration.
//!
//! Constructors verify their postconditions instead of trusting the caller:
//! `Lattice::from_poset` fails on a missing join, and `polygons` fails when
//! an interval spanned by a cover pair is not a polygon.

use std::collections::HashMap;

use crate::bits::BitMatrix;
use crate::error::Error;
use crate::{ElemId, Result};

/// A finite poset given by its Hasse diagram.
#[derive(Debug, Clone)]
pub struct Poset {
    n: usize,
    covers: Vec<(ElemId, ElemId)>,
    up: Vec<Vec<ElemId>>,
    down: Vec<Vec<ElemId>>,
    /// le.get(i, j) iff i ≤ j.
    le: BitMatrix,
    /// topo[k] = k-th element in a linear extension.
    topo: Vec<ElemId>,
    ids_are_topo: bool,
}

impl Poset {
    /// Builds from covering relations, verifying the edge set is acyclic and
    /// irredundant (every given edge really is a cover).
    pub fn from_covers(n: usize, covers_in: &[(ElemId, ElemId)]) -> Result<Poset> {
        let mut covers: Vec<(ElemId, ElemId)> = covers_in.to_vec();
        covers.sort_unstable();
        covers.dedup();
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(a, b) in &covers {
            if a as usize >= n || b as usize >= n || a == b {
                return Err(Error::Internal(format!("bad cover ({a},{b})")));
            }
            up[a as usize].push(b);
            down[b as usize].push(a);
            indeg[b as usize] += 1;
        }
        // Kahn topological sort; ties resolved by id for determinism.
        let mut topo = Vec::with_capacity(n);
        let mut avail: Vec<ElemId> = (0..n as ElemId)
            .filter(|&v| indeg[v as usize] == 0)
            .collect();
        while let Some(&v) = avail.first() {
            avail.remove(0);
            topo.push(v);
            for &w in &up[v as usize] {
                indeg[w as usize] -= 1;
                if indeg[w as usize] == 0 {
                    let pos = avail.partition_point(|&x| x < w);
                    avail.insert(pos, w);
                }
            }
        }
        if topo.len() != n {
            return Err(Error::NotAPartialOrder("cover graph has a cycle".into()));
        }
        let ids_are_topo = covers.iter().all(|&(a, b)| a < b);

        // Upsets by dynamic programming in reverse topological order.
        let mut le = BitMatrix::new(n);
        for &v in topo.iter().rev() {
            le.set(v as usize, v as usize);
            let succ = up[v as usize].clone();
            for w in succ {
                le.or_row_into(w as usize, v as usize);
            }
        }

        // Given edges must be genuine covers.
        for &(a, b) in &covers {
            for z in 0..n {
                if z != a as usize
                    && z != b as usize
                    && le.get(a as usize, z)
                    && le.get(z, b as usize)
                {
                    return Err(Error::Internal(format!(
                        "edge ({a},{b}) is not a cover: {z} lies between"
                    )));
                }
            }
        }

        for adj in up.iter_mut().chain(down.iter_mut()) {
            adj.sort_unstable();
        }
        Ok(Poset {
            n,
            covers,
            up,
            down,
            le,
            topo,
            ids_are_topo,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn le(&self, a: ElemId, b: ElemId) -> bool {
        self.le.get(a as usize, b as usize)
    }

    pub fn covers(&self) -> &[(ElemId, ElemId)] {
        &self.covers
    }

    pub fn up(&self, a: ElemId) -> &[ElemId] {
        &self.up[a as usize]
    }

    pub fn down(&self, a: ElemId) -> &[ElemId] {
        &self.down[a as usize]
    }

    pub fn is_cover(&self, a: ElemId, b: ElemId) -> bool {
        self.up[a as usize].contains(&b)
    }

    pub fn minimal_elements(&self) -> Vec<ElemId> {
        (0..self.n as ElemId)
            .filter(|&v| self.down[v as usize].is_empty())
            .collect()
    }

    pub fn maximal_elements(&self) -> Vec<ElemId> {
        (0..self.n as ElemId)
            .filter(|&v| self.up[v as usize].is_empty())
            .collect()
    }
}

/// A finite lattice: a poset with verified binary joins and meets.
#[derive(Debug, Clone)]
pub struct Lattice {
    poset: Poset,
    bottom: ElemId,
    top: ElemId,
    join: Vec<ElemId>,
    meet: Vec<ElemId>,
}

impl Lattice {
    /// Verifies that every pair has a unique supremum and infimum; reports
    /// the first offending pair otherwise.
    pub fn from_poset(poset: Poset) -> Result<Lattice> {
        let n = poset.n;
        let mins = poset.minimal_elements();
        let maxs = poset.maximal_elements();
        if mins.len() != 1 || maxs.len() != 1 {
            return Err(Error::NotALattice {
                x: *mins.first().unwrap_or(&0),
                y: *mins.last().unwrap_or(&0),
                kind: "bound",
            });
        }
        let topo_pos = {
            let mut p = vec![0u32; n];
            for (k, &v) in poset.topo.iter().enumerate() {
                p[v as usize] = k as u32;
            }
            p
        };
        let words = n.div_ceil(64);
        let mut join = vec![0 as ElemId; n * n];
        let mut meet = vec![0 as ElemId; n * n];
        let mut buf = vec![0u64; words];
        for x in 0..n {
            for y in x..n {
                // join = unique minimal common upper bound
                for (w, slot) in buf.iter_mut().enumerate() {
                    *slot = poset.le.row(x)[w] & poset.le.row(y)[w];
                }
                let j = extremal(&buf, &poset, &topo_pos, true).ok_or(Error::NotALattice {
                    x: x as ElemId,
                    y: y as ElemId,
                    kind: "join",
                })?;
                join[x * n + y] = j;
                join[y * n + x] = j;
                // meet = unique maximal common lower bound; lower sets are
                // column reads, so collect explicitly.
                buf.fill(0);
                for z in 0..n {
                    if poset.le.get(z, x) && poset.le.get(z, y) {
                        buf[z / 64] |= 1 << (z % 64);
                    }
                }
                let m = extremal(&buf, &poset, &topo_pos, false).ok_or(Error::NotALattice {
                    x: x as ElemId,
                    y: y as ElemId,
                    kind: "meet",
                })?;
                meet[x * n + y] = m;
                meet[y * n + x] = m;
            }
        }
        Ok(Lattice {
            bottom: mins[0],
            top: maxs[0],
            poset,
            join,
            meet,
        })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.n
    }

    pub fn is_empty(&self) -> bool {
        self.poset.n == 0
    }

    pub fn bottom(&self) -> ElemId {
        self.bottom
    }

    pub fn top(&self) -> ElemId {
        self.top
    }

    pub fn le(&self, a: ElemId, b: ElemId) -> bool {
        self.poset.le(a, b)
    }

    pub fn join(&self, a: ElemId, b: ElemId) -> ElemId {
        self.join[a as usize * self.poset.n + b as usize]
    }

    pub fn meet(&self, a: ElemId, b: ElemId) -> ElemId {
        self.meet[a as usize * self.poset.n + b as usize]
    }

    pub fn covers(&self) -> &[(ElemId, ElemId)] {
        self.poset.covers()
    }

    /// Elements of the closed interval [lo, hi], ascending by id.
    pub fn interval(&self, lo: ElemId, hi: ElemId) -> Vec<ElemId> {
        (0..self.poset.n as ElemId)
            .filter(|&z| self.le(lo, z) && self.le(z, hi))
            .collect()
    }

    /// Checks that the interval [lo, hi] is a polygon: exactly two maximal
    /// chains whose union is the interval and which meet only at the ends.
    pub fn polygon_of_interval(&self, lo: ElemId, hi: ElemId) -> Option<Polygon> {
        let interval = self.interval(lo, hi);
        if interval.len() < 4 {
            return None;
        }
        let atoms: Vec<ElemId> = self
            .poset
            .up(lo)
            .iter()
            .copied()
            .filter(|&z| self.le(z, hi))
            .collect();
        if atoms.len() != 2 {
            return None;
        }
        let mut sides: Vec<Vec<ElemId>> = Vec::with_capacity(2);
        for &a in &atoms {
            let mut chain = vec![lo, a];
            let mut cur = a;
            while cur != hi {
                let next: Vec<ElemId> = self
                    .poset
                    .up(cur)
                    .iter()
                    .copied()
                    .filter(|&z| self.le(z, hi))
                    .collect();
                if next.len() != 1 {
                    return None;
                }
                cur = next[0];
                chain.push(cur);
            }
            sides.push(chain);
        }
        let left = sides[0].clone();
        let right = sides[1].clone();
        // Sides share only the endpoints and together exhaust the interval.
        for &z in &left[1..left.len() - 1] {
            if right.contains(&z) {
                return None;
            }
        }
        if left.len() + right.len() - 2 != interval.len() {
            return None;
        }
        Some(Polygon {
            min: lo,
            max: hi,
            left,
            right,
        })
    }

    /// Verifies both polygonality conditions on all cover pairs, returning
    /// the first violation.
    pub fn check_polygonal(&self) -> Result<()> {
        for x in 0..self.poset.n as ElemId {
            let ups = self.poset.up(x);
            for i in 0..ups.len() {
                for j in i + 1..ups.len() {
                    let hi = self.join(ups[i], ups[j]);
                    if self.polygon_of_interval(x, hi).is_none() {
                        return Err(Error::NotPolygonal(format!(
                            "[{}, {} v {} = {}] is not a polygon",
                            x, ups[i], ups[j], hi
                        )));
                    }
                }
            }
            let downs = self.poset.down(x);
            for i in 0..downs.len() {
                for j in i + 1..downs.len() {
                    let lo = self.meet(downs[i], downs[j]);
                    if self.polygon_of_interval(lo, x).is_none() {
                        return Err(Error::NotPolygonal(format!(
                            "[{} ^ {} = {}, {}] is not a polygon",
                            downs[i], downs[j], lo, x
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_polygonal(&self) -> bool {
        self.check_polygonal().is_ok()
    }

    /// All polygons of a polygonal lattice, deduplicated by interval and
    /// sorted by (min, max).
    pub fn polygons(&self) -> Result<Vec<Polygon>> {
        let mut seen: HashMap<(ElemId, ElemId), ()> = HashMap::new();
        let mut out = Vec::new();
        for x in 0..self.poset.n as ElemId {
            let ups = self.poset.up(x);
            for i in 0..ups.len() {
                for j in i + 1..ups.len() {
                    let hi = self.join(ups[i], ups[j]);
                    if seen.contains_key(&(x, hi)) {
                        continue;
                    }
                    let p = self.polygon_of_interval(x, hi).ok_or_else(|| {
                        Error::NotPolygonal(format!("[{x}, {hi}] is not a polygon"))
                    })?;
                    seen.insert((x, hi), ());
                    out.push(p);
                }
            }
        }
        out.sort_by_key(|p| (p.min, p.max));
        Ok(out)
    }

    /// Number of maximal chains of the interval [lo, hi], by path counting.
    pub fn count_chains_interval(&self, lo: ElemId, hi: ElemId) -> u64 {
        let n = self.poset.n;
        let mut paths = vec![0u64; n];
        paths[hi as usize] = 1;
        for &v in self.poset.topo.iter().rev() {
            if v == hi || !self.le(lo, v) || !self.le(v, hi) {
                continue;
            }
            let mut acc = 0;
            for &w in self.poset.up(v) {
                if self.le(w, hi) {
                    acc += paths[w as usize];
                }
            }
            paths[v as usize] = acc;
        }
        paths[lo as usize]
    }
}

fn extremal(bits: &[u64], poset: &Poset, topo_pos: &[u32], minimum: bool) -> Option<ElemId> {
    let mut best: Option<ElemId> = None;
    if minimum && poset.ids_are_topo {
        // First set bit is the candidate of least id = least topo position.
        for (w, &word) in bits.iter().enumerate() {
            if word != 0 {
                best = Some((w * 64 + word.trailing_zeros() as usize) as ElemId);
                break;
            }
        }
    } else {
        let mut best_pos = if minimum { u32::MAX } else { 0 };
        for (w, &word) in bits.iter().enumerate() {
            let mut bitsw = word;
            while bitsw != 0 {
                let z = (w * 64 + bitsw.trailing_zeros() as usize) as ElemId;
                bitsw &= bitsw - 1;
                let p = topo_pos[z as usize];
                if best.is_none() || (minimum && p < best_pos) || (!minimum && p > best_pos) {
                    best = Some(z);
                    best_pos = p;
                }
            }
        }
    }
    let z = best?;
    // z must relate to every candidate; otherwise the bound is not unique.
    for (w, &word) in bits.iter().enumerate() {
        let mut bitsw = word;
        while bitsw != 0 {
            let y = (w * 64 + bitsw.trailing_zeros() as usize) as ElemId;
            bitsw &= bitsw - 1;
            let ok = if minimum {
                poset.le(z, y)
            } else {
                poset.le(y, z)
            };
            if !ok {
                return None;
            }
        }
    }
    Some(z)
}

/// An interval with exactly two maximal chains meeting only at the ends.
/// Both chains are stored inclusively from `min` to `max`; `left` holds the
/// smaller atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polygon {
    pub min: ElemId,
    pub max: ElemId,
    pub left: Vec<ElemId>,
    pub right: Vec<ElemId>,
}

impl Polygon {
    pub fn is_square(&self) -> bool {
        self.left.len() == 3 && self.right.len() == 3
    }
}

/// A lattice whose covering relations carry labels from a finite universe.
#[derive(Debug, Clone)]
pub struct LabelledLattice {
    lat: Lattice,
    labels: Vec<u32>,
    edge_idx: HashMap<(ElemId, ElemId), u32>,
    label_count: usize,
    /// up-neighbours of each element sorted by (label, target)
    up_by_label: Vec<Vec<(u32, ElemId)>>,
}

impl LabelledLattice {
    pub fn new(
        lat: Lattice,
        labels_by_edge: &HashMap<(ElemId, ElemId), u32>,
        label_count: usize,
    ) -> Result<LabelledLattice> {
        let covers = lat.covers().to_vec();
        let mut labels = Vec::with_capacity(covers.len());
        let mut edge_idx = HashMap::new();
        for (k, &(a, b)) in covers.iter().enumerate() {
            let l = *labels_by_edge
                .get(&(a, b))
                .ok_or_else(|| Error::Internal(format!("missing label on cover ({a},{b})")))?;
            labels.push(l);
            edge_idx.insert((a, b), k as u32);
        }
        let mut up_by_label = vec![Vec::new(); lat.len()];
        for (k, &(a, b)) in covers.iter().enumerate() {
            up_by_label[a as usize].push((labels[k], b));
        }
        for v in up_by_label.iter_mut() {
            v.sort_unstable();
        }
        Ok(LabelledLattice {
            lat,
            labels,
            edge_idx,
            label_count,
            up_by_label,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lat
    }

    pub fn len(&self) -> usize {
        self.lat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lat.is_empty()
    }

    pub fn label_count(&self) -> usize {
        self.label_count
    }

    pub fn covers(&self) -> &[(ElemId, ElemId)] {
        self.lat.covers()
    }

    pub fn edge_index(&self, a: ElemId, b: ElemId) -> Result<u32> {
        self.edge_idx
            .get(&(a, b))
            .copied()
            .ok_or(Error::NotACover(a, b))
    }

    pub fn label_of_edge(&self, k: u32) -> u32 {
        self.labels[k as usize]
    }

    /// Label of the covering relation a ⋖ b.
    pub fn edge_label(&self, a: ElemId, b: ElemId) -> Result<u32> {
        Ok(self.labels[self.edge_index(a, b)? as usize])
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Upward edges of `a`, sorted by (label, target).
    pub fn up_labelled(&self, a: ElemId) -> &[(u32, ElemId)] {
        &self.up_by_label[a as usize]
    }

    /// Label sequence along a chain.
    pub fn chain_labels(&self, chain: &[ElemId]) -> Result<Vec<u32>> {
        chain
            .windows(2)
            .map(|w| self.edge_label(w[0], w[1]))
            .collect()
    }

    pub fn is_maximal_chain(&self, chain: &[ElemId]) -> bool {
        if chain.first() != Some(&self.lat.bottom()) || chain.last() != Some(&self.lat.top()) {
            return false;
        }
        chain
            .windows(2)
            .all(|w| self.lat.poset().is_cover(w[0], w[1]))
    }

    /// Lazily enumerates maximal chains bottom→top in label-lex order.
    pub fn maximal_chains(&self) -> MaxChainIter<'_> {
        MaxChainIter {
            lab: self,
            stack: vec![(self.lat.bottom(), 0)],
            done: false,
        }
    }

    /// Eagerly collects all maximal chains, guarded against blow-up.
    pub fn maximal_chains_collect(&self, guard: usize) -> Result<Vec<Vec<ElemId>>> {
        let mut out = Vec::new();
        for chain in self.maximal_chains() {
            if out.len() >= guard {
                return Err(Error::GuardExceeded(format!(
                    "more than {guard} maximal chains"
                )));
            }
            out.push(chain);
        }
        Ok(out)
    }
}

/// Depth-first maximal-chain iterator with an explicit stack.
pub struct MaxChainIter<'a> {
    lab: &'a LabelledLattice,
    /// (element, next successor index to try)
    stack: Vec<(ElemId, usize)>,
    done: bool,
}

impl Iterator for MaxChainIter<'_> {
    type Item = Vec<ElemId>;

    fn next(&mut self) -> Option<Vec<ElemId>> {
        if self.done {
            return None;
        }
        loop {
            let &(cur, child) = self.stack.last()?;
            if cur == self.lab.lat.top() {
                let chain: Vec<ElemId> = self.stack.iter().map(|&(e, _)| e).collect();
                // Backtrack to the deepest node with an untried successor.
                self.stack.pop();
                while let Some(&(e, c)) = self.stack.last() {
                    if c < self.lab.up_by_label[e as usize].len() {
                        break;
                    }
                    self.stack.pop();
                }
                if self.stack.is_empty() {
                    self.done = true;
                }
                return Some(chain);
            }
            let succs = &self.lab.up_by_label[cur as usize];
            if child < succs.len() {
                self.stack.last_mut().unwrap().1 += 1;
                self.stack.push((succs[child].1, 0));
            } else {
                self.stack.pop();
                if self.stack.is_empty() {
                    self.done = true;
                    return None;
                }
            }
        }
    }
}

/// A strict partial order on a label universe, used as the codomain of
/// poset-valued edge labellings.
#[derive(Debug, Clone)]
pub struct LabelPoset {
    lt: BitMatrix,
}

impl LabelPoset {
    /// Transitive closure of the given strict relations; fails when the
    /// result is not antisymmetric.
    pub fn from_relations(n: usize, relations: &[(u32, u32)]) -> Result<LabelPoset> {
        let mut lt = BitMatrix::new(n);
        for &(a, b) in relations {
            lt.set(a as usize, b as usize);
        }
        // Warshall closure.
        for k in 0..n {
            for i in 0..n {
                if lt.get(i, k) {
                    lt.or_row_into(k, i);
                }
            }
        }
        for i in 0..n {
            if lt.get(i, i) {
                return Err(Error::NotAPartialOrder(format!("label {i} below itself")));
            }
            for j in 0..n {
                if i != j && lt.get(i, j) && lt.get(j, i) {
                    return Err(Error::NotAPartialOrder(format!(
                        "labels {i} and {j} mutually comparable"
                    )));
                }
            }
        }
        Ok(LabelPoset { lt })
    }

    pub fn len(&self) -> usize {
        self.lt.size()
    }

    pub fn is_empty(&self) -> bool {
        self.lt.size() == 0
    }

    pub fn lt(&self, a: u32, b: u32) -> bool {
        self.lt.get(a as usize, b as usize)
    }

    pub fn comparable(&self, a: u32, b: u32) -> bool {
        self.lt(a, b) || self.lt(b, a)
    }

    /// True when the label sequence is strictly increasing.
    pub fn is_ascending(&self, labels: &[u32]) -> bool {
        labels.windows(2).all(|w| self.lt(w[0], w[1]))
    }

    pub fn is_descending(&self, labels: &[u32]) -> bool {
        labels.windows(2).all(|w| self.lt(w[1], w[0]))
    }
}
