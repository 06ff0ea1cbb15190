//! Coxeter elements, c-sorting words, the projection to maximal c-sortable
//! elements, Cambrian congruences, c-alignment and c-stability, and the
//! chain-class map induced by the Cambrian quotient.
//!
//! The projection π↓ is computed twice: by brute-force maximum over the
//! sortable elements below, and by the initial-letter recursion. The two
//! must agree on every element or the build fails.

use std::collections::HashMap;

use crate::bits::RootSet;
use crate::cartan::{CoxeterSystem, CoxeterWord, Scalar};
use crate::chain_orders::{heap_poset, mg_poset_fast, verify_fast_matches_moves, FastMg};
use crate::chain_poset::{
    check_contraction, induced_class_map, mg_preorder, polygon_moves, ChainSet, ContractionReport,
    MgPreorder, PolygonIndex,
};
use crate::error::Error;
use crate::forcing::{quotient, Congruence, QuotientData};
use crate::lattice::{LabelPoset, LabelledLattice};
use crate::roots::RootSystem;
use crate::weak_order::WeakOrder;
use crate::{ElemId, PosIdx, Result};

/// Diagram edges (s < t with m(s,t) ≥ 3), sorted.
pub fn diagram_edges<S: Scalar>(sys: &CoxeterSystem<S>) -> Vec<(u8, u8)> {
    let mut edges = Vec::new();
    for s in 0..sys.rank() {
        for t in s + 1..sys.rank() {
            if sys.adjacent(s, t) {
                edges.push((s as u8, t as u8));
            }
        }
    }
    edges
}

fn orientation_of<S: Scalar>(sys: &CoxeterSystem<S>, word: &CoxeterWord) -> Vec<bool> {
    let mut pos = vec![0usize; sys.rank()];
    for (i, &l) in word.letters().iter().enumerate() {
        pos[l as usize] = i;
    }
    diagram_edges(sys)
        .iter()
        .map(|&(s, t)| pos[s as usize] < pos[t as usize])
        .collect()
}

/// All Coxeter elements of the system, one canonical (lexicographically
/// least) word per orientation of the Coxeter diagram, sorted by word.
pub fn all_coxeter_elements<S: Scalar>(sys: &CoxeterSystem<S>) -> Vec<CoxeterWord> {
    let rank = sys.rank();
    let mut by_orientation: HashMap<Vec<bool>, Vec<u8>> = HashMap::new();
    let mut perm: Vec<u8> = (0..rank as u8).collect();
    permute(&mut perm, 0, &mut |p| {
        let word = CoxeterWord::new(p.to_vec(), rank).unwrap();
        let key = orientation_of(sys, &word);
        match by_orientation.entry(key) {
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(p.to_vec());
            }
            std::collections::hash_map::Entry::Occupied(mut o) => {
                if p < o.get().as_slice() {
                    o.insert(p.to_vec());
                }
            }
        }
    });
    let mut words: Vec<Vec<u8>> = by_orientation.into_values().collect();
    words.sort();
    words
        .into_iter()
        .map(|w| CoxeterWord::new(w, rank).unwrap())
        .collect()
}

fn permute(v: &mut Vec<u8>, k: usize, f: &mut impl FnMut(&[u8])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

/// Parses a Coxeter-element spec: "linear", "bipartite", or a comma list of
/// 1-based generator indices such as "2,1,3".
pub fn parse_coxeter_word<S: Scalar>(sys: &CoxeterSystem<S>, spec: &str) -> Result<CoxeterWord> {
    let rank = sys.rank();
    let word = match spec {
        "linear" => CoxeterWord::new((0..rank as u8).collect(), rank)?,
        "bipartite" => {
            // Two-colour the diagram; catalog diagrams are trees.
            let mut colour = vec![u8::MAX; rank];
            for start in 0..rank {
                if colour[start] != u8::MAX {
                    continue;
                }
                colour[start] = 0;
                let mut stack = vec![start];
                while let Some(s) = stack.pop() {
                    for t in 0..rank {
                        if sys.adjacent(s, t) && colour[t] == u8::MAX {
                            colour[t] = 1 - colour[s];
                            stack.push(t);
                        }
                    }
                }
            }
            let mut letters: Vec<u8> = (0..rank as u8)
                .filter(|&s| colour[s as usize] == 0)
                .collect();
            letters.extend((0..rank as u8).filter(|&s| colour[s as usize] == 1));
            CoxeterWord::new(letters, rank)?
        }
        list => {
            let letters: Vec<u8> = list
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<u8>()
                        .ok()
                        .and_then(|i| i.checked_sub(1))
                        .ok_or_else(|| Error::NotCoxeterWord(format!("bad index {x:?}")))
                })
                .collect::<Result<_>>()?;
            CoxeterWord::new(letters, rank)?
        }
    };
    if !word.is_coxeter_element_word(rank) {
        return Err(Error::NotCoxeterWord(format!(
            "{:?} does not name each generator exactly once",
            word.letters()
        )));
    }
    Ok(word)
}

/// Everything the Cambrian machinery derives from one Coxeter element.
#[derive(Debug)]
pub struct Cambrian {
    pub c: CoxeterWord,
    /// Skew-form order of each non-commutative subsystem under c.
    pub ref_orders: Vec<Vec<PosIdx>>,
    /// Heap poset of the c-sorting word of w0; the reference label poset.
    pub heap_ref: LabelPoset,
    /// c-sorting word of w0 and its maximal chain.
    pub w0_sorting_word: Vec<u8>,
    pub w0_sorting_chain: Vec<ElemId>,
    pub sortable: Vec<bool>,
    pub sorting_word: Vec<Vec<u8>>,
    pub pi_down: Vec<ElemId>,
    pub congruence: Congruence,
    /// For each root, the non-commutative subsystem positions containing it.
    noncomm_with_root: Vec<Vec<u32>>,
}

/// c-sorting word of an element: greedy scan of c^∞ taking every left
/// descent. Returns the word and its block sets, one per pass of c.
fn sorting_word_blocks(
    rs: &RootSystem,
    wo: &WeakOrder,
    c: &CoxeterWord,
    w: ElemId,
) -> (Vec<u8>, Vec<Vec<u8>>) {
    let mut v = w;
    let mut word = Vec::new();
    let mut blocks = Vec::new();
    let max_passes = wo.length(w) as usize + 1;
    for _ in 0..max_passes {
        if v == wo.bottom() {
            break;
        }
        let mut block = Vec::new();
        for &s in c.letters() {
            if wo.has_left_descent(rs, s as usize, v) {
                block.push(s);
                word.push(s);
                v = wo.left_mul(rs, s as usize, v);
            }
        }
        blocks.push(block);
    }
    (word, blocks)
}

fn blocks_nested(blocks: &[Vec<u8>]) -> bool {
    blocks
        .windows(2)
        .all(|w| w[1].iter().all(|s| w[0].contains(s)))
}

/// π↓ by the initial-letter recursion. `letters` is the current Coxeter
/// word; the parabolic branch drops the initial letter.
fn pi_down_recursive(rs: &RootSystem, wo: &WeakOrder, letters: &[u8], w: ElemId) -> Result<ElemId> {
    if w == wo.bottom() || letters.is_empty() {
        return Ok(wo.bottom());
    }
    let s = letters[0] as usize;
    if wo.has_left_descent(rs, s, w) {
        // π↓^c(w) = s · π↓^{scs}(sw)
        let mut rotated: Vec<u8> = letters[1..].to_vec();
        rotated.push(letters[0]);
        let sub = pi_down_recursive(rs, wo, &rotated, wo.left_mul(rs, s, w))?;
        Ok(wo.left_mul(rs, s, sub))
    } else {
        // π↓^c(w) = π↓^{sc}(w_{S∖s}) with inv(w_{S∖s}) = inv(w) ∩ Φ⁺_{S∖s}
        let rest = &letters[1..];
        let mut mask = RootSet::EMPTY;
        for b in 0..rs.count() as PosIdx {
            if rs.coeffs(b)[s] == 0 {
                mask.insert(b);
            }
        }
        let par_inv = wo.inv(w).intersect(mask);
        let par = wo
            .element_by_inv(par_inv)
            .ok_or_else(|| Error::Internal("parabolic factor not found".into()))?;
        pi_down_recursive(rs, wo, rest, par)
    }
}

pub fn cambrian<S: Scalar>(
    sys: &CoxeterSystem<S>,
    rs: &RootSystem,
    wo: &WeakOrder,
    lab: &LabelledLattice,
    c: &CoxeterWord,
) -> Result<Cambrian> {
    if !c.is_coxeter_element_word(sys.rank()) {
        return Err(Error::NotCoxeterWord(format!("{:?}", c.letters())));
    }
    let ref_orders = rs.reference_orders(sys, c)?;
    let n = wo.len();

    let mut sortable = vec![false; n];
    let mut sorting_word = Vec::with_capacity(n);
    for w in 0..n as ElemId {
        let (word, blocks) = sorting_word_blocks(rs, wo, c, w);
        if word.len() != wo.length(w) as usize {
            return Err(Error::Internal("sorting word is not reduced".into()));
        }
        sortable[w as usize] = blocks_nested(&blocks);
        sorting_word.push(word);
    }

    // π↓ by brute force: the unique maximum of the sortables below w.
    let mut pi_down = vec![0 as ElemId; n];
    for w in 0..n as ElemId {
        let below: Vec<ElemId> = (0..n as ElemId)
            .filter(|&x| sortable[x as usize] && wo.le(x, w))
            .collect();
        let best = below
            .iter()
            .copied()
            .find(|&x| below.iter().all(|&y| wo.le(y, x)))
            .ok_or_else(|| {
                Error::Internal(format!("sortables below {w} have no unique maximum"))
            })?;
        pi_down[w as usize] = best;
    }
    // Independent recomputation by the recursion; disagreement is fatal.
    for w in 0..n as ElemId {
        let rec = pi_down_recursive(rs, wo, c.letters(), w)?;
        if rec != pi_down[w as usize] {
            return Err(Error::Internal(format!(
                "π↓ recursion disagrees with brute force at element {w}"
            )));
        }
    }
    // Projection sanity: sortable fixed points, order preservation.
    for w in 0..n as ElemId {
        if sortable[w as usize] && pi_down[w as usize] != w {
            return Err(Error::Internal("π↓ moves a sortable element".into()));
        }
        if !sortable[pi_down[w as usize] as usize] || !wo.le(pi_down[w as usize], w) {
            return Err(Error::Internal("π↓ image invalid".into()));
        }
    }
    for x in 0..n as ElemId {
        for y in 0..n as ElemId {
            if wo.le(x, y) && !wo.le(pi_down[x as usize], pi_down[y as usize]) {
                return Err(Error::Internal("π↓ is not order-preserving".into()));
            }
        }
    }

    let congruence = Congruence::from_partition(lab.lattice(), pi_down.clone())?;

    // Heap of the c-sorting word of w0, which is the reference poset.
    let (w0_word, _) = sorting_word_blocks(rs, wo, c, wo.top());
    let mut w0_sorting_chain = vec![wo.bottom()];
    {
        // the sorting word reads left to right; its prefixes walk up the
        // weak order by left multiplication read backwards, so rebuild the
        // chain by right multiplication instead.
        let mut cur = wo.bottom();
        for &s in &w0_word {
            cur = wo.right_mul(cur, s as usize);
            w0_sorting_chain.push(cur);
        }
    }
    if w0_sorting_chain.last() != Some(&wo.top()) {
        return Err(Error::Internal("sorting chain does not reach w0".into()));
    }
    let seq = wo.root_sequence(&w0_sorting_chain)?;
    let heap_ref = heap_poset(rs, &seq)?;
    // The skew-form order of every subsystem matches the heap restriction.
    for order in &ref_orders {
        for i in 0..order.len() {
            for j in i + 1..order.len() {
                if !heap_ref.lt(order[i], order[j]) {
                    return Err(Error::Internal(
                        "skew-form order disagrees with the sorting-word heap".into(),
                    ));
                }
            }
        }
    }

    let mut noncomm_with_root = vec![Vec::new(); rs.count()];
    for (k, &id) in rs.noncommutative().iter().enumerate() {
        for &b in &rs.subsystems()[id as usize].roots {
            noncomm_with_root[b as usize].push(k as u32);
        }
    }

    let cd = Cambrian {
        c: c.clone(),
        ref_orders,
        heap_ref,
        w0_sorting_word: w0_word,
        w0_sorting_chain,
        sortable,
        sorting_word,
        pi_down,
        congruence,
        noncomm_with_root,
    };

    // c-sortable ⟺ c-aligned, on every element.
    for w in 0..n as ElemId {
        if cd.is_c_aligned(wo, w) != cd.sortable[w as usize] {
            return Err(Error::Internal(format!(
                "alignment and sortability disagree at element {w}"
            )));
        }
    }
    Ok(cd)
}

impl Cambrian {
    pub fn is_sortable(&self, w: ElemId) -> bool {
        self.sortable[w as usize]
    }

    pub fn sorting_word(&self, w: ElemId) -> &[u8] {
        &self.sorting_word[w as usize]
    }

    pub fn pi_down_of(&self, w: ElemId) -> ElemId {
        self.pi_down[w as usize]
    }

    /// inv(w) ∩ Ψ⁺ must be empty, the last root alone, or an initial
    /// segment of the c-order of Ψ⁺.
    pub fn is_c_aligned_wrt(&self, wo: &WeakOrder, w: ElemId, noncomm_pos: u32) -> bool {
        let order = &self.ref_orders[noncomm_pos as usize];
        let inv = wo.inv(w);
        let hits: Vec<bool> = order.iter().map(|&b| inv.contains(b)).collect();
        let count = hits.iter().filter(|&&h| h).count();
        if count == 0 {
            return true;
        }
        if count == 1 && hits[hits.len() - 1] {
            return true;
        }
        hits[..count].iter().all(|&h| h)
    }

    /// Alignment with respect to every non-commutative subsystem.
    pub fn is_c_aligned(&self, wo: &WeakOrder, w: ElemId) -> bool {
        (0..self.ref_orders.len() as u32).all(|k| self.is_c_aligned_wrt(wo, w, k))
    }

    /// A cover v ⋖ w with label β is c-stable when w is c-aligned with
    /// respect to every non-commutative subsystem containing β.
    pub fn is_c_stable_edge(&self, wo: &WeakOrder, v: ElemId, w: ElemId) -> Result<bool> {
        let beta = wo.edge_label(v, w)?;
        Ok(self.noncomm_with_root[beta as usize]
            .iter()
            .all(|&k| self.is_c_aligned_wrt(wo, w, k)))
    }

    /// The subsequence of a chain's root sequence sitting on c-stable edges.
    pub fn stable_sequence(&self, wo: &WeakOrder, chain: &[ElemId]) -> Result<Vec<PosIdx>> {
        wo.root_sequence(chain)?; // validates maximality
        let mut out = Vec::new();
        for pair in chain.windows(2) {
            if self.is_c_stable_edge(wo, pair[0], pair[1])? {
                out.push(wo.edge_label(pair[0], pair[1])?);
            }
        }
        Ok(out)
    }
}

/// Per-edge comparison of the three contraction predicates.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CstableReport {
    pub edges_checked: u64,
    /// Violations of: contracted ⟺ β ∉ inv(π↓(w)). Must be empty always.
    pub criterion_failures: Vec<String>,
    /// Violations of: β ∈ inv(π↓(w)) ⇒ stable. Must be empty always.
    pub stable_if_inv_failures: Vec<String>,
    /// Violations of: stable ⟺ not contracted. Must be empty in
    /// simply-laced type; reported as discrepancies otherwise.
    pub equivalence_mismatches: Vec<String>,
}

/// Compares {contracted by θ_c}, {not c-stable}, {β ∉ inv(π↓ w)} on every
/// cover edge.
pub fn verify_cstable(
    cd: &Cambrian,
    wo: &WeakOrder,
    lab: &LabelledLattice,
) -> Result<CstableReport> {
    let mut report = CstableReport {
        edges_checked: 0,
        criterion_failures: Vec::new(),
        stable_if_inv_failures: Vec::new(),
        equivalence_mismatches: Vec::new(),
    };
    for &(v, w) in lab.covers() {
        report.edges_checked += 1;
        let beta = wo.edge_label(v, w)?;
        let contracted = cd.pi_down[v as usize] == cd.pi_down[w as usize];
        let stable = cd.is_c_stable_edge(wo, v, w)?;
        let inv_crit = wo.inv(cd.pi_down[w as usize]).contains(beta);
        if contracted == inv_crit {
            report.criterion_failures.push(format!(
                "edge ({v},{w}) label {beta}: contracted={contracted} but β∈inv(π↓w)={inv_crit}"
            ));
        }
        if inv_crit && !stable {
            report.stable_if_inv_failures.push(format!(
                "edge ({v},{w}) label {beta}: β∈inv(π↓w) but not c-stable"
            ));
        }
        if stable == contracted {
            report.equivalence_mismatches.push(format!(
                "edge ({v},{w}) label {beta}: stable={stable}, contracted={contracted}"
            ));
        }
    }
    Ok(report)
}

/// Non-square polygons of the weak order whose two bottom edges survive θ_c
/// must keep their entire ascending chain uncontracted.
pub fn check_ascending_uncontracted(
    cd: &Cambrian,
    lab: &LabelledLattice,
    polys: &PolygonIndex,
) -> Result<(u64, Vec<String>)> {
    let contracted = |a: ElemId, b: ElemId| cd.pi_down[a as usize] == cd.pi_down[b as usize];
    let mut checked = 0u64;
    let mut failures = Vec::new();
    for p in polys.all() {
        if p.is_square() {
            continue;
        }
        if contracted(p.min, p.left[1]) || contracted(p.min, p.right[1]) {
            continue;
        }
        checked += 1;
        let ll = lab.chain_labels(&p.left)?;
        let ascending = if cd.heap_ref.is_ascending(&ll) {
            &p.left
        } else {
            &p.right
        };
        for pair in ascending.windows(2) {
            if contracted(pair[0], pair[1]) {
                failures.push(format!(
                    "polygon [{},{}]: ascending edge ({},{}) contracted",
                    p.min, p.max, pair[0], pair[1]
                ));
            }
        }
    }
    Ok((checked, failures))
}

/// The full chain-class picture for one Coxeter element: both MG orders,
/// the induced class map, and the contraction report.
#[derive(Debug)]
pub struct ChainMapData {
    pub dom_chains: ChainSet,
    pub dom_mg: MgPreorder,
    pub dom_fast: FastMg,
    pub quotient: QuotientData,
    pub cod_chains: ChainSet,
    pub cod_mg: MgPreorder,
    pub class_map: Vec<u32>,
    pub contraction: ContractionReport,
    /// Codomain class of the image of the c-sorting chain.
    pub cod_class_of_sorting_chain: u32,
    /// Codomain class of the image of the c⁻¹-sorting chain.
    pub cod_class_of_inverse_sorting_chain: u32,
}

pub fn cambrian_chain_map<S: Scalar>(
    sys: &CoxeterSystem<S>,
    rs: &RootSystem,
    wo: &WeakOrder,
    lab: &LabelledLattice,
    cd: &Cambrian,
    chain_guard: usize,
) -> Result<ChainMapData> {
    let dom_polys = PolygonIndex::new(lab.lattice())?;
    let dom_chains = ChainSet::collect(lab, chain_guard)?;
    let dom_mg = mg_preorder(lab, &cd.heap_ref, &dom_chains, &dom_polys)?;
    let dom_fast = mg_poset_fast(rs, &cd.ref_orders, wo, &dom_chains)?;
    verify_fast_matches_moves(&dom_fast, &dom_mg)?;

    let q = quotient(lab, &cd.congruence)?;
    let cod_polys = PolygonIndex::new(q.lab.lattice())?;
    let cod_chains = ChainSet::collect(&q.lab, chain_guard)?;
    let cod_mg = mg_preorder(&q.lab, &cd.heap_ref, &cod_chains, &cod_polys)?;

    let class_map = induced_class_map(&dom_chains, &dom_mg, &q.class_of, &cod_chains, &cod_mg)?;
    let contraction = check_contraction(&dom_mg, &cod_mg, &class_map);

    let image_of = |chain: &[ElemId]| -> Result<u32> {
        let img = crate::forcing::chain_image(&q.class_of, chain);
        let idx = cod_chains
            .find(&img)
            .ok_or_else(|| Error::NotAMaximalChain(format!("{img:?}")))?;
        Ok(cod_mg.class_of_chain[idx as usize])
    };
    let cod_class_of_sorting_chain = image_of(&cd.w0_sorting_chain)?;

    // c⁻¹-sorting chain of w0.
    let c_inv = CoxeterWord::new(cd.c.letters().iter().rev().copied().collect(), sys.rank())?;
    let cd_inv_chain = {
        let (word, _) = sorting_word_blocks(rs, wo, &c_inv, wo.top());
        let mut chain = vec![wo.bottom()];
        let mut cur = wo.bottom();
        for &s in &word {
            cur = wo.right_mul(cur, s as usize);
            chain.push(cur);
        }
        chain
    };
    let cod_class_of_inverse_sorting_chain = image_of(&cd_inv_chain)?;

    Ok(ChainMapData {
        dom_chains,
        dom_mg,
        dom_fast,
        quotient: q,
        cod_chains,
        cod_mg,
        class_map,
        contraction,
        cod_class_of_sorting_chain,
        cod_class_of_inverse_sorting_chain,
    })
}

/// Every polygon of the Cambrian lattice has a maximal chain of length two;
/// in a non-square polygon that short chain is the descending one.
pub fn check_length_two_chains(
    cd: &Cambrian,
    qlab: &LabelledLattice,
    qpolys: &PolygonIndex,
) -> Result<()> {
    for p in qpolys.all() {
        let short = if p.left.len() <= p.right.len() {
            &p.left
        } else {
            &p.right
        };
        if short.len() != 3 {
            return Err(Error::Internal(format!(
                "quotient polygon [{},{}] has no length-two chain",
                p.min, p.max
            )));
        }
        if !p.is_square() {
            let labels = qlab.chain_labels(short)?;
            if !cd.heap_ref.is_descending(&labels) {
                return Err(Error::Internal(format!(
                    "length-two chain of quotient polygon [{},{}] is not descending",
                    p.min, p.max
                )));
            }
        }
    }
    Ok(())
}

/// Fibres of the class map, reported as interval / non-interval shapes.
pub fn fibre_shapes(data: &ChainMapData) -> Vec<(u32, usize, bool)> {
    let dom = &data.dom_mg;
    let mut out = Vec::new();
    for y in 0..data.cod_mg.n_classes as u32 {
        let members: Vec<u32> = (0..dom.n_classes as u32)
            .filter(|&d| data.class_map[d as usize] == y)
            .collect();
        let mins: Vec<u32> = members
            .iter()
            .copied()
            .filter(|&m| !members.iter().any(|&o| o != m && dom.strict(o, m)))
            .collect();
        let maxs: Vec<u32> = members
            .iter()
            .copied()
            .filter(|&m| !members.iter().any(|&o| o != m && dom.strict(m, o)))
            .collect();
        let interval = mins.len() == 1 && maxs.len() == 1 && {
            let (lo, hi) = (mins[0], maxs[0]);
            (0..dom.n_classes as u32)
                .filter(|&z| dom.le(lo, z) && dom.le(z, hi))
                .count()
                == members.len()
        };
        out.push((y, members.len(), interval));
    }
    out
}

/// Polygon moves of the quotient must be liftable: whenever two quotient
/// chains are related by a polygon move, some pair of move-related domain
/// chains maps onto them.
pub fn check_polygon_moves_lift(lab: &LabelledLattice, data: &ChainMapData) -> Result<()> {
    let dom_polys = PolygonIndex::new(lab.lattice())?;
    let cod_polys = PolygonIndex::new(data.quotient.lab.lattice())?;
    let mut fibre_of = vec![0u32; data.dom_chains.len()];
    for (k, chain) in data.dom_chains.chains().iter().enumerate() {
        let img = crate::forcing::chain_image(&data.quotient.class_of, chain);
        fibre_of[k] = data
            .cod_chains
            .find(&img)
            .ok_or_else(|| Error::NotAMaximalChain(format!("{img:?}")))?;
    }
    let mut lifted: Vec<(u32, u32)> = Vec::new();
    for from in 0..data.dom_chains.len() as u32 {
        for (mv, _) in polygon_moves(&data.dom_chains, &dom_polys, from)? {
            lifted.push((fibre_of[from as usize], fibre_of[mv.to as usize]));
        }
    }
    lifted.sort_unstable();
    lifted.dedup();
    for from in 0..data.cod_chains.len() as u32 {
        for (mv, _) in polygon_moves(&data.cod_chains, &cod_polys, from)? {
            if lifted.binary_search(&(from, mv.to)).is_err() {
                return Err(Error::Internal(format!(
                    "quotient polygon move ({from}, {}) has no move-related preimages",
                    mv.to
                )));
            }
        }
    }
    Ok(())
}

/// Connectivity of chain-map fibres under polygon moves: every fibre of the
/// chain-level map is one component (chains mapping to the same quotient
/// chain are linked by polygon moves).
pub fn check_fibre_polygon_connectivity(lab: &LabelledLattice, data: &ChainMapData) -> Result<()> {
    let polys = PolygonIndex::new(lab.lattice())?;
    let n = data.dom_chains.len();
    // fibre key: index of the image chain in the codomain
    let mut fibre_of = vec![0u32; n];
    for (k, chain) in data.dom_chains.chains().iter().enumerate() {
        let img = crate::forcing::chain_image(&data.quotient.class_of, chain);
        fibre_of[k] = data
            .cod_chains
            .find(&img)
            .ok_or_else(|| Error::NotAMaximalChain(format!("{img:?}")))?;
    }
    let mut uf = crate::bits::UnionFind::new(n);
    for from in 0..n as u32 {
        for (mv, _) in polygon_moves(&data.dom_chains, &polys, from)? {
            if fibre_of[from as usize] == fibre_of[mv.to as usize] {
                uf.unite(from, mv.to);
            }
        }
    }
    for i in 0..n as u32 {
        for j in 0..n as u32 {
            if fibre_of[i as usize] == fibre_of[j as usize] && uf.find(i) != uf.find(j) {
                return Err(Error::Internal(format!(
                    "chains {i} and {j} share a fibre but are not move-connected inside it"
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{build_system, CoxeterType};

    struct Ctx {
        sys: CoxeterSystem,
        rs: RootSystem,
        wo: WeakOrder,
        lab: LabelledLattice,
    }

    fn ctx(t: CoxeterType) -> Ctx {
        let sys = build_system(t).unwrap();
        let rs = RootSystem::generate(&sys).unwrap();
        let wo = WeakOrder::build(&rs).unwrap();
        let lab = wo.to_labelled_lattice().unwrap();
        Ctx { sys, rs, wo, lab }
    }

    fn cword(ctx: &Ctx, letters: Vec<u8>) -> CoxeterWord {
        CoxeterWord::new(letters, ctx.sys.rank()).unwrap()
    }

    #[test]
    fn coxeter_element_counts() {
        // 2^(edges) acyclic orientations for tree diagrams.
        for (t, expected) in [
            (CoxeterType::A(2), 2),
            (CoxeterType::A(3), 4),
            (CoxeterType::A(4), 8),
            (CoxeterType::B(3), 4),
            (CoxeterType::D(4), 8),
            (CoxeterType::G2, 2),
        ] {
            let sys = build_system(t).unwrap();
            assert_eq!(all_coxeter_elements(&sys).len(), expected, "{t}");
        }
    }

    #[test]
    fn parse_coxeter_specs() {
        let c = ctx(CoxeterType::A(3));
        assert_eq!(
            parse_coxeter_word(&c.sys, "linear").unwrap().letters(),
            &[0, 1, 2]
        );
        assert_eq!(
            parse_coxeter_word(&c.sys, "2,1,3").unwrap().letters(),
            &[1, 0, 2]
        );
        let bip = parse_coxeter_word(&c.sys, "bipartite").unwrap();
        assert_eq!(bip.letters(), &[0, 2, 1]);
        assert!(parse_coxeter_word(&c.sys, "1,1,2").is_err());
        assert!(parse_coxeter_word(&c.sys, "1,2").is_err());
    }

    #[test]
    fn a2_sorting_words() {
        let c = ctx(CoxeterType::A(2));
        let word = cword(&c, vec![0, 1]);
        let cd = cambrian(&c.sys, &c.rs, &c.wo, &c.lab, &word).unwrap();
        // w0 sorts to s0 s1 s0 with nested blocks {0,1} ⊇ {0}.
        assert_eq!(cd.w0_sorting_word, vec![0, 1, 0]);
        assert!(cd.is_sortable(c.wo.top()));
        // e sorts to the empty word.
        assert_eq!(cd.sorting_word(0), &[] as &[u8]);
        // s1 s0 is not sortable; its projection is s1.
        let s1s0 = c.wo.element_of_reduced_word(&[1, 0]).unwrap();
        assert!(!cd.is_sortable(s1s0));
        let s1 = c.wo.element_of_reduced_word(&[1]).unwrap();
        assert_eq!(cd.pi_down_of(s1s0), s1);
        // Five sortables in the pentagon quotient.
        assert_eq!(cd.sortable.iter().filter(|&&x| x).count(), 5);
        assert_eq!(cd.congruence.n_classes, 5);
    }

    #[test]
    fn a2_alignment() {
        let c = ctx(CoxeterType::A(2));
        let word = cword(&c, vec![0, 1]);
        let cd = cambrian(&c.sys, &c.rs, &c.wo, &c.lab, &word).unwrap();
        let s1s0 = c.wo.element_of_reduced_word(&[1, 0]).unwrap();
        // inv(s1 s0) = {α_1, α_0+α_1} is a final segment of (α_0, α_0+α_1, α_1):
        // not aligned.
        assert!(!cd.is_c_aligned_wrt(&c.wo, s1s0, 0));
        for w in 0..c.wo.len() as ElemId {
            if cd.is_sortable(w) {
                assert!(cd.is_c_aligned(&c.wo, w));
            }
        }
    }

    #[test]
    fn catalan_counts_small() {
        for (t, catalan) in [
            (CoxeterType::A(2), 5),
            (CoxeterType::A(3), 14),
            (CoxeterType::B(2), 6),
            (CoxeterType::G2, 8),
        ] {
            let c = ctx(t);
            for word in all_coxeter_elements(&c.sys) {
                let cd = cambrian(&c.sys, &c.rs, &c.wo, &c.lab, &word).unwrap();
                assert_eq!(
                    cd.sortable.iter().filter(|&&x| x).count(),
                    catalan,
                    "{t} c={:?}",
                    word.letters()
                );
            }
        }
    }

    #[test]
    fn cstable_simply_laced_a2_a3() {
        for t in [CoxeterType::A(2), CoxeterType::A(3)] {
            let c = ctx(t);
            for word in all_coxeter_elements(&c.sys) {
                let cd = cambrian(&c.sys, &c.rs, &c.wo, &c.lab, &word).unwrap();
                let rep = verify_cstable(&cd, &c.wo, &c.lab).unwrap();
                assert!(rep.criterion_failures.is_empty());
                assert!(rep.stable_if_inv_failures.is_empty());
                assert!(rep.equivalence_mismatches.is_empty(), "{t}");
            }
        }
    }

    #[test]
    fn stable_sequence_a2() {
        let c = ctx(CoxeterType::A(2));
        let word = cword(&c, vec![0, 1]);
        let cd = cambrian(&c.sys, &c.rs, &c.wo, &c.lab, &word).unwrap();
        // Chain through s1: labels (α_1, α_0+α_1, α_0); the middle one is
        // unstable and drops out.
        let chain = vec![
            0,
            c.wo.element_of_reduced_word(&[1]).unwrap(),
            c.wo.element_of_reduced_word(&[1, 0]).unwrap(),
            c.wo.top(),
        ];
        let stable = cd.stable_sequence(&c.wo, &chain).unwrap();
        let a1 = c.rs.root_index(&[0, 1]).unwrap();
        let a0 = c.rs.root_index(&[1, 0]).unwrap();
        assert_eq!(stable, vec![a1, a0]);
        // The sorting chain keeps all labels.
        let all = cd.stable_sequence(&c.wo, &cd.w0_sorting_chain).unwrap();
        assert_eq!(all.len(), 3);
    }

    #[test]
    fn chain_map_a2() {
        let c = ctx(CoxeterType::A(2));
        let word = cword(&c, vec![0, 1]);
        let cd = cambrian(&c.sys, &c.rs, &c.wo, &c.lab, &word).unwrap();
        let data = cambrian_chain_map(&c.sys, &c.rs, &c.wo, &c.lab, &cd, 1000).unwrap();
        assert_eq!(data.dom_mg.n_classes, 2);
        assert_eq!(data.cod_mg.n_classes, 2);
        assert!(data.cod_mg.is_poset);
        assert!(data.contraction.ok(), "{:?}", data.contraction.failures);
        assert_eq!(data.cod_mg.minima, vec![data.cod_class_of_sorting_chain]);
        assert!(data
            .cod_mg
            .maxima
            .contains(&data.cod_class_of_inverse_sorting_chain));
        check_fibre_polygon_connectivity(&c.lab, &data).unwrap();
        let qpolys = PolygonIndex::new(data.quotient.lab.lattice()).unwrap();
        check_length_two_chains(&cd, &data.quotient.lab, &qpolys).unwrap();
    }

    #[test]
    fn ascending_uncontracted_a2_a3() {
        for t in [CoxeterType::A(2), CoxeterType::A(3)] {
            let c = ctx(t);
            let polys = PolygonIndex::new(c.lab.lattice()).unwrap();
            for word in all_coxeter_elements(&c.sys) {
                let cd = cambrian(&c.sys, &c.rs, &c.wo, &c.lab, &word).unwrap();
                let (checked, failures) =
                    check_ascending_uncontracted(&cd, &c.lab, &polys).unwrap();
                assert!(failures.is_empty(), "{t}: {failures:?}");
                if t == CoxeterType::A(2) {
                    assert_eq!(checked, 1);
                }
            }
        }
    }
}
