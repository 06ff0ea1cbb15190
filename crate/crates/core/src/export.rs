//! Deterministic JSON and DOT artifacts. All writers walk their inputs in
//! index order, so byte-identical inputs give byte-identical files.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::chain_orders::FastMg;
use crate::chain_poset::{ChainSet, MgPreorder};
use crate::lattice::LabelledLattice;
use crate::roots::RootSystem;

#[derive(Serialize)]
pub struct SubsystemJson {
    pub roots: Vec<u32>,
    pub commutative: bool,
}

#[derive(Serialize)]
pub struct RootsJson {
    pub positives: Vec<Vec<i64>>,
    pub subsystems: Vec<SubsystemJson>,
}

pub fn roots_json(rs: &RootSystem) -> RootsJson {
    RootsJson {
        positives: (0..rs.count())
            .map(|b| rs.coeffs(b as u32).to_vec())
            .collect(),
        subsystems: rs
            .subsystems()
            .iter()
            .map(|s| SubsystemJson {
                roots: s.roots.clone(),
                commutative: s.commutative,
            })
            .collect(),
    }
}

#[derive(Serialize)]
pub struct LatticeJson {
    pub n: usize,
    pub covers: Vec<(u32, u32)>,
    /// "lo,hi" → label id
    pub labels: BTreeMap<String, u32>,
    pub bottom: u32,
    pub top: u32,
}

pub fn lattice_json(lab: &LabelledLattice) -> LatticeJson {
    let labels = lab
        .covers()
        .iter()
        .enumerate()
        .map(|(k, &(a, b))| (format!("{a},{b}"), lab.label_of_edge(k as u32)))
        .collect();
    LatticeJson {
        n: lab.len(),
        covers: lab.covers().to_vec(),
        labels,
        bottom: lab.lattice().bottom(),
        top: lab.lattice().top(),
    }
}

#[derive(Serialize)]
pub struct MgClassJson {
    pub key: String,
    pub rep: Vec<u32>,
}

#[derive(Serialize)]
pub struct MgJson {
    pub classes: Vec<MgClassJson>,
    pub covers: Vec<(u32, u32)>,
    pub is_poset: bool,
    pub polygon_complete: bool,
}

/// Chain-class order in key order, with representative chains.
pub fn mg_json(fast: &FastMg, chains: &ChainSet, mg: &MgPreorder) -> MgJson {
    let classes = fast
        .keys
        .iter()
        .enumerate()
        .map(|(c, key)| MgClassJson {
            key: key.to_bitstring(fast.n_noncomm),
            rep: chains.chain(fast.rep_chain[c]).to_vec(),
        })
        .collect();
    MgJson {
        classes,
        covers: fast.covers.clone(),
        is_poset: mg.is_poset,
        polygon_complete: mg.polygon_complete,
    }
}

#[derive(Serialize)]
pub struct ReportJson {
    pub name: String,
    pub checked: u64,
    pub failures: Vec<String>,
}

/// Hasse diagram with edges labelled by root coefficient vectors; an
/// optional partition renders classes as clusters.
pub fn lattice_dot(lab: &LabelledLattice, rs: &RootSystem, class_of: Option<&[u32]>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph lattice {{");
    let _ = writeln!(out, "  rankdir=BT;");
    let _ = writeln!(out, "  node [shape=circle, fontsize=10];");
    match class_of {
        Some(classes) => {
            let n_classes = classes.iter().max().map_or(0, |&m| m as usize + 1);
            for c in 0..n_classes {
                let _ = writeln!(out, "  subgraph cluster_{c} {{");
                let _ = writeln!(out, "    label=\"[{c}]\";");
                for (x, &cls) in classes.iter().enumerate() {
                    if cls as usize == c {
                        let _ = writeln!(out, "    {x};");
                    }
                }
                let _ = writeln!(out, "  }}");
            }
        }
        None => {
            for x in 0..lab.len() {
                let _ = writeln!(out, "  {x};");
            }
        }
    }
    for (k, &(a, b)) in lab.covers().iter().enumerate() {
        let label = lab.label_of_edge(k as u32);
        let coeffs = rs.coeffs(label);
        let text: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(
            out,
            "  {a} -> {b} [dir=forward, label=\"({})\"];",
            text.join(",")
        );
    }
    let _ = writeln!(out, "}}");
    out
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    s.push('\n');
    s
}
