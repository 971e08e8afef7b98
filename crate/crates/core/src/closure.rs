//! Thick closure and enumeration of thick subcategories.
//!
//! A set of indecomposables is thick when, for every triangle, whenever two
//! of its vertices lie in the set so do all components of the third.
//! Rotating a triangle makes each of the three two-out-of-three
//! implications valid, so the rule is symmetric in the vertices.

use std::collections::HashMap;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::presentation::{ObjectExpr, Presentation};

/// An arbitrary set of indecomposable indices.
pub type IndecSet = BitSet;

/// A thick subcategory, stored as the set of its indecomposables.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ThickSet(BitSet);

impl ThickSet {
    /// Wraps a set without checking that it is closed.
    pub fn new_unchecked(members: BitSet) -> Self {
        Self(members)
    }

    pub fn members(&self) -> &BitSet {
        &self.0
    }

    pub fn into_members(self) -> BitSet {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &ThickSet) -> bool {
        self.0.is_subset(&other.0)
    }
}

/// Whether every component of `x` lies in `j`. The zero object lies in
/// every thick subcategory.
pub fn object_in(j: &ThickSet, x: &ObjectExpr) -> bool {
    x.components().iter().all(|c| j.0.contains(c.index()))
}

/// A closure operator on subsets of `{0, ..., ground() - 1}`.
pub trait ClosureOperator {
    fn ground(&self) -> usize;
    fn close(&self, set: &BitSet) -> BitSet;
}

/// Vertex supports of every triangle, precomputed.
#[derive(Clone, Debug)]
pub struct ThickRules {
    ground: usize,
    triangles: Vec<[BitSet; 3]>,
}

impl ThickRules {
    pub fn new(p: &Presentation) -> Self {
        Self {
            ground: p.len(),
            triangles: p
                .triangles()
                .iter()
                .map(|t| t.vertices().map(ObjectExpr::support))
                .collect(),
        }
    }

    /// One pass of the two-out-of-three rule. Returns whether `set` grew.
    pub(crate) fn step(&self, set: &mut BitSet) -> bool {
        let mut grew = false;
        for tri in &self.triangles {
            let inside = tri.iter().filter(|v| v.is_subset(set)).count();
            if inside == 2 {
                for v in tri {
                    set.union_with(v);
                }
                grew = true;
            }
        }
        grew
    }

    /// Direct check of the rule, without iterating to a fixed point.
    pub fn is_thick(&self, set: &BitSet) -> bool {
        self.triangles
            .iter()
            .all(|tri| tri.iter().filter(|v| v.is_subset(set)).count() != 2)
    }
}

impl ClosureOperator for ThickRules {
    fn ground(&self) -> usize {
        self.ground
    }

    fn close(&self, set: &BitSet) -> BitSet {
        let mut cur = set.clone();
        while self.step(&mut cur) {}
        cur
    }
}

/// The smallest thick set containing `s`.
pub fn thick_closure(p: &Presentation, s: &IndecSet) -> ThickSet {
    ThickSet(ThickRules::new(p).close(s))
}

/// All closed sets of `op`, in canonical order.
///
/// Ganter's Next-Closure: closed sets are visited in lectic order, each
/// exactly once, keeping only the current set in working memory.
pub fn next_closure_all<C: ClosureOperator>(op: &C) -> Vec<BitSet> {
    let n = op.ground();
    let mut out = Vec::new();
    let mut current = op.close(&BitSet::new());
    loop {
        out.push(current.clone());
        match next_closed(op, &current, n) {
            Some(next) => current = next,
            None => break,
        }
    }
    out.sort();
    out
}

fn next_closed<C: ClosureOperator>(op: &C, a: &BitSet, n: usize) -> Option<BitSet> {
    let mut base = a.clone();
    for i in (0..n).rev() {
        if base.remove(i) {
            continue;
        }
        let mut candidate = base.clone();
        candidate.insert(i);
        let closed = op.close(&candidate);
        if closed.difference(&base).prefix(i).is_empty() {
            return Some(closed);
        }
    }
    None
}

/// The thick subcategories of a presentation, ordered by inclusion.
#[derive(Clone, Debug)]
pub struct ThickLattice {
    ground: usize,
    elements: Vec<ThickSet>,
    index: HashMap<BitSet, usize>,
}

impl PartialEq for ThickLattice {
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground && self.elements == other.elements
    }
}

impl Eq for ThickLattice {}

impl ThickLattice {
    /// Builds a lattice from a closure system. The elements are sorted into
    /// canonical order; they must be intersection-closed and contain the
    /// full ground set.
    pub fn from_closed_sets(ground: usize, mut sets: Vec<BitSet>) -> Self {
        sets.sort();
        sets.dedup();
        let index = sets
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        Self {
            ground,
            elements: sets.into_iter().map(ThickSet).collect(),
            index,
        }
    }

    /// Number of indecomposables of the underlying presentation.
    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn elements(&self) -> &[ThickSet] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, i: usize) -> &ThickSet {
        &self.elements[i]
    }

    pub fn position(&self, j: &ThickSet) -> Option<usize> {
        self.index.get(&j.0).copied()
    }

    pub fn position_of_set(&self, s: &BitSet) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, j: &ThickSet) -> bool {
        self.index.contains_key(&j.0)
    }

    /// The smallest element; canonical order puts it first.
    pub fn bottom(&self) -> usize {
        0
    }

    /// The largest element; canonical order puts it last.
    pub fn top(&self) -> usize {
        self.elements.len() - 1
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.elements[i].is_subset(&self.elements[j])
    }
}

/// All thick subcategories, by Next-Closure enumeration.
pub fn enumerate_thick(p: &Presentation) -> ThickLattice {
    let rules = ThickRules::new(p);
    ThickLattice::from_closed_sets(p.len(), next_closure_all(&rules))
}

/// Largest presentation `brute_force_thick` accepts.
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// All thick subcategories, by checking every subset.
pub fn brute_force_thick(p: &Presentation) -> Result<ThickLattice> {
    let n = p.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            what: "indecomposable count",
            actual: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let rules = ThickRules::new(p);
    let sets = (0u32..1 << n)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect::<BitSet>())
        .filter(|s| rules.is_thick(s))
        .collect();
    Ok(ThickLattice::from_closed_sets(n, sets))
}
