//! Order-theoretic analysis of a [`ThickLattice`].

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::closure::{ThickLattice, ThickSet};
use crate::error::{Error, Result};
use crate::presentation::Presentation;

pub const DEFAULT_MAX_SIZE: usize = 10_000;

fn locate(l: &ThickLattice, j: &ThickSet) -> Result<usize> {
    l.position(j)
        .ok_or_else(|| Error::NotAnElement(format!("{:?}", j.members())))
}

pub fn meet(l: &ThickLattice, j: &ThickSet, k: &ThickSet) -> Result<ThickSet> {
    locate(l, j)?;
    locate(l, k)?;
    let m = ThickSet::new_unchecked(j.members().intersection(k.members()));
    debug_assert!(l.contains(&m));
    Ok(m)
}

/// The least element containing `j ∪ k`, which is the thick closure of the
/// union because the lattice holds every closed set.
pub fn join(l: &ThickLattice, j: &ThickSet, k: &ThickSet) -> Result<ThickSet> {
    locate(l, j)?;
    locate(l, k)?;
    let u = j.members().union(k.members());
    // Canonical order is by cardinality first, so the first upper bound is
    // the least one.
    let least = l
        .elements()
        .iter()
        .find(|e| u.is_subset(e.members()))
        .expect("the top element bounds everything");
    Ok(least.clone())
}

/// Index-level view of a lattice: order relation as bitsets plus full
/// meet and join tables.
#[derive(Clone, Debug)]
pub struct LatticeTables {
    n: usize,
    up: Vec<BitSet>,
    down: Vec<BitSet>,
    meet: Vec<u32>,
    join: Vec<u32>,
}

impl LatticeTables {
    pub fn new(l: &ThickLattice) -> Self {
        let n = l.len();
        // Canonical order refines inclusion: i <= j forces i to come first.
        let up: Vec<BitSet> = (0..n)
            .map(|i| (i..n).filter(|&j| l.leq(i, j)).collect())
            .collect();
        let down: Vec<BitSet> = (0..n)
            .map(|j| (0..=j).filter(|&i| l.leq(i, j)).collect())
            .collect();
        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let lower = down[i].intersection(&down[j]);
                let upper = up[i].intersection(&up[j]);
                // Meet is the largest common lower bound: the last in
                // canonical order. Join is the first common upper bound.
                meet[i * n + j] = lower.iter().last().expect("bottom is below everything") as u32;
                join[i * n + j] = upper.iter().next().expect("top is above everything") as u32;
            }
        }
        Self {
            n,
            up,
            down,
            meet,
            join,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meet[i * self.n + j] as usize
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.join[i * self.n + j] as usize
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    /// Whether `j` covers `i`: `i < j` with nothing strictly between.
    pub fn covers(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j) && self.up[i].intersection(&self.down[j]).len() == 2
    }

    /// Covering pairs `(lower, upper)` in canonical order.
    pub fn covering_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| {
                self.up[i]
                    .iter()
                    .filter(move |&j| self.covers(i, j))
                    .map(move |j| (i, j))
            })
            .collect()
    }

    /// First `(x, y, z)` in lexicographic index order with
    /// `x ∧ (y ∨ z) != (x ∧ y) ∨ (x ∧ z)`.
    pub fn distributivity_witness(&self) -> Option<[usize; 3]> {
        let n = self.n;
        (0..n).into_par_iter().find_map_first(|x| {
            for y in 0..n {
                let xy = self.meet(x, y);
                for z in 0..n {
                    if self.meet(x, self.join(y, z)) != self.join(xy, self.meet(x, z)) {
                        return Some([x, y, z]);
                    }
                }
            }
            None
        })
    }

    /// First `(x, y, z)` with `x <= z` and `x ∨ (y ∧ z) != (x ∨ y) ∧ z`.
    pub fn modularity_witness(&self) -> Option<[usize; 3]> {
        let n = self.n;
        (0..n).into_par_iter().find_map_first(|x| {
            for y in 0..n {
                let xy = self.join(x, y);
                for z in self.up[x].iter() {
                    if self.join(x, self.meet(y, z)) != self.meet(xy, z) {
                        return Some([x, y, z]);
                    }
                }
            }
            None
        })
    }

    /// Edges in a longest chain from the bottom to the top.
    pub fn height(&self) -> usize {
        // Canonical order refines inclusion, so predecessors come first.
        let mut h = vec![0usize; self.n];
        for j in 0..self.n {
            h[j] = self.down[j]
                .iter()
                .filter(|&i| i != j)
                .map(|i| h[i] + 1)
                .max()
                .unwrap_or(0);
        }
        h.last().copied().unwrap_or(0)
    }
}

/// A triple of lattice elements violating a law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub x: ThickSet,
    pub y: ThickSet,
    pub z: ThickSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeReport {
    pub size: usize,
    pub is_distributive: bool,
    pub distributive_witness: Option<Witness>,
    pub is_modular: bool,
    pub modular_witness: Option<Witness>,
    pub atoms: Vec<ThickSet>,
    /// Number of covering steps in a longest chain.
    pub height: usize,
}

/// Exhaustive distributivity and modularity sweep, plus atoms and height.
pub fn analyze(l: &ThickLattice, max_size: usize) -> Result<LatticeReport> {
    if l.len() > max_size {
        return Err(Error::TooLarge {
            what: "lattice size",
            actual: l.len(),
            limit: max_size,
        });
    }
    let t = LatticeTables::new(l);
    let witness = |w: [usize; 3]| Witness {
        x: l.get(w[0]).clone(),
        y: l.get(w[1]).clone(),
        z: l.get(w[2]).clone(),
    };
    let dist = t.distributivity_witness();
    let modular = t.modularity_witness();
    let bottom = l.bottom();
    let atoms = (0..l.len())
        .filter(|&j| t.covers(bottom, j))
        .map(|j| l.get(j).clone())
        .collect();
    Ok(LatticeReport {
        size: l.len(),
        is_distributive: dist.is_none(),
        distributive_witness: dist.map(witness),
        is_modular: modular.is_none(),
        modular_witness: modular.map(witness),
        atoms,
        height: t.height(),
    })
}

/// Hasse diagram in DOT syntax, bottom at the bottom.
pub fn export_dot(l: &ThickLattice, p: &Presentation) -> String {
    let t = LatticeTables::new(l);
    let mut out = String::from("digraph thick {\n  rankdir=BT;\n");
    for (i, j) in l.elements().iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label=\"{}\"];", p.format_set(j.members()));
    }
    for (i, j) in t.covering_pairs() {
        let _ = writeln!(out, "  n{i} -> n{j};");
    }
    out.push_str("}\n");
    out
}
