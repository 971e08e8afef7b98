//! Finite spaces, support data, and the universal support space.
//!
//! The universal space has one point for each thick subcategory `J`. Each
//! indecomposable `a` gets the closed set `sup(a) = {J : a ∉ J}`, and the
//! topology is the one generated by these sets. Any support datum
//! `(X, σ)` maps into it by `f(x) = {a : x ∉ σ(a)}`, and this is the only
//! morphism of support data between them.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::closure::{object_in, ThickLattice, ThickRules};
use crate::error::{Error, Result};
use crate::presentation::{IndecId, ObjectExpr, Presentation};

/// A set of points of a [`FinSpace`], by index.
pub type PointSet = BitSet;

/// A finite topological space given by a family of closed sets that
/// generates its topology under finite unions and intersections. The empty
/// set and the whole space are always closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinSpace {
    points: Vec<String>,
    generators: Vec<PointSet>,
    /// Closure of each single point: the intersection of the generators
    /// containing it.
    point_closure: Vec<PointSet>,
}

impl FinSpace {
    pub fn new(points: Vec<String>, generators: Vec<PointSet>) -> Result<Self> {
        let n = points.len();
        let mut seen = HashSet::new();
        for p in &points {
            if !seen.insert(p.as_str()) {
                return Err(Error::Validation(format!("duplicate point label `{p}`")));
            }
        }
        let all = BitSet::full(n);
        if let Some(g) = generators.iter().find(|g| !g.is_subset(&all)) {
            return Err(Error::Validation(format!(
                "closed set {g:?} mentions points outside the space"
            )));
        }
        let point_closure = (0..n)
            .map(|x| {
                generators
                    .iter()
                    .filter(|g| g.contains(x))
                    .fold(all.clone(), |acc, g| acc.intersection(g))
            })
            .collect();
        Ok(Self {
            points,
            generators,
            point_closure,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn point(&self, x: usize) -> &str {
        &self.points[x]
    }

    pub fn all(&self) -> PointSet {
        BitSet::full(self.len())
    }

    pub fn generators(&self) -> &[PointSet] {
        &self.generators
    }

    /// The closure of `{x}`; `y` lies in it iff `y` is a specialization of `x`.
    pub fn point_closure(&self, x: usize) -> &PointSet {
        &self.point_closure[x]
    }

    /// In a finite space a set is closed iff it contains the closure of each
    /// of its points.
    pub fn is_closed(&self, set: &PointSet) -> bool {
        set.is_subset(&self.all()) && set.iter().all(|x| self.point_closure[x].is_subset(set))
    }

    /// Every closed set, by saturating the generators, `∅` and the whole
    /// space under pairwise union and intersection. Fails once more than
    /// `limit` sets have been found.
    pub fn closed_family(&self, limit: usize) -> Result<Vec<PointSet>> {
        let mut family: Vec<PointSet> = Vec::new();
        let mut seen = HashSet::new();
        let seeds = [BitSet::new(), self.all()]
            .into_iter()
            .chain(self.generators.iter().cloned());
        for s in seeds {
            if seen.insert(s.clone()) {
                family.push(s);
            }
        }
        let mut next = 0;
        while next < family.len() {
            let s = family[next].clone();
            for i in 0..=next {
                for t in [s.union(&family[i]), s.intersection(&family[i])] {
                    if seen.insert(t.clone()) {
                        family.push(t);
                        if family.len() > limit {
                            return Err(Error::TooLarge {
                                what: "closed family",
                                actual: family.len(),
                                limit,
                            });
                        }
                    }
                }
            }
            next += 1;
        }
        family.sort();
        Ok(family)
    }

    pub fn format_points(&self, set: &PointSet) -> String {
        let labels: Vec<&str> = set.iter().map(|x| self.points[x].as_str()).collect();
        format!("[{}]", labels.join(", "))
    }
}

/// The universal support space: the thick subcategories with their
/// `sup` sets.
#[derive(Clone, Debug)]
pub struct SupportSpace {
    pub lattice: ThickLattice,
    pub space: FinSpace,
    /// `sup[a]` for each indecomposable `a`.
    pub sup: Vec<PointSet>,
}

impl SupportSpace {
    pub fn sup(&self, a: IndecId) -> &PointSet {
        &self.sup[a.index()]
    }

    /// `sup` of a direct sum is the union over its components.
    pub fn sup_object(&self, x: &ObjectExpr) -> PointSet {
        union_over(&self.sup, x)
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    /// The space with `sup` as its support function.
    pub fn as_datum(&self) -> SupportDatum {
        SupportDatum {
            space: self.space.clone(),
            sigma: self.sup.clone(),
            generator: None,
        }
    }

    pub fn point_label(&self, i: usize) -> &str {
        self.space.point(i)
    }

    pub fn point_by_label(&self, label: &str) -> Option<usize> {
        self.space.points().iter().position(|p| p == label)
    }
}

fn union_over(sets: &[PointSet], x: &ObjectExpr) -> PointSet {
    x.components()
        .iter()
        .fold(BitSet::new(), |acc, c| acc.union(&sets[c.index()]))
}

pub fn build_sp(lattice: &ThickLattice, p: &Presentation) -> SupportSpace {
    let sup: Vec<PointSet> = p
        .ids()
        .map(|a| {
            let obj = ObjectExpr::indec(a);
            lattice
                .elements()
                .iter()
                .enumerate()
                .filter(|(_, j)| !object_in(j, &obj))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let labels = lattice
        .elements()
        .iter()
        .map(|j| p.format_set(j.members()))
        .collect();
    let space = FinSpace::new(labels, sup.clone()).expect("lattice elements are distinct");
    SupportSpace {
        lattice: lattice.clone(),
        space,
        sup,
    }
}

/// A space together with a closed set for each indecomposable. Supports of
/// direct sums are unions, so the zero object has empty support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportDatum {
    pub space: FinSpace,
    pub sigma: Vec<PointSet>,
    /// The map `h` a pulled-back datum was generated from, if any.
    pub generator: Option<Vec<usize>>,
}

impl SupportDatum {
    pub fn sigma(&self, a: IndecId) -> &PointSet {
        &self.sigma[a.index()]
    }

    pub fn sigma_object(&self, x: &ObjectExpr) -> PointSet {
        union_over(&self.sigma, x)
    }

    /// The datum with `σ ≡ ∅` on a space with the given labels.
    pub fn empty(p: &Presentation, points: Vec<String>) -> Result<Self> {
        Ok(Self {
            space: FinSpace::new(points, Vec::new())?,
            sigma: vec![BitSet::new(); p.len()],
            generator: None,
        })
    }

    /// Closed sets generated by the supports themselves.
    pub fn with_generated_topology(points: Vec<String>, sigma: Vec<PointSet>) -> Result<Self> {
        Ok(Self {
            space: FinSpace::new(points, sigma.clone())?,
            sigma,
            generator: None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rotation {
    /// `σ(a) ⊆ σ(b) ∪ σ(c)`
    A,
    /// `σ(b) ⊆ σ(c) ∪ σ(a)`
    B,
    /// `σ(c) ⊆ σ(a) ∪ σ(b)`
    C,
}

impl fmt::Display for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rotation::A => "σ(a) ⊆ σ(b) ∪ σ(c)",
            Rotation::B => "σ(b) ⊆ σ(c) ∪ σ(a)",
            Rotation::C => "σ(c) ⊆ σ(a) ∪ σ(b)",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// σ is not defined on every indecomposable.
    Arity {
        expected: usize,
        actual: usize,
    },
    NotClosed {
        indec: IndecId,
    },
    Triangle {
        triangle: usize,
        rotation: Rotation,
        /// Points in the left side but not the right.
        excess: PointSet,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportReport {
    /// Axioms that hold by construction, with the reason.
    pub structural: Vec<(&'static str, &'static str)>,
    pub triangles_checked: usize,
    pub violations: Vec<Violation>,
}

impl SupportReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

const STRUCTURAL: [(&str, &str); 3] = [
    (
        "SD1",
        "σ(0) = ∅ holds structurally: the zero object is the empty sum",
    ),
    (
        "SD2",
        "σ(a⊕b) = σ(a) ∪ σ(b) holds structurally: supports extend by union",
    ),
    (
        "SD3",
        "σ(Σa) = σ(a) holds structurally: indecomposables are shift orbits",
    ),
];

pub fn check_support_datum(d: &SupportDatum, p: &Presentation) -> SupportReport {
    let mut violations = Vec::new();
    if d.sigma.len() != p.len() {
        violations.push(Violation::Arity {
            expected: p.len(),
            actual: d.sigma.len(),
        });
        return SupportReport {
            structural: STRUCTURAL.to_vec(),
            triangles_checked: 0,
            violations,
        };
    }
    for a in p.ids() {
        if !d.space.is_closed(d.sigma(a)) {
            violations.push(Violation::NotClosed { indec: a });
        }
    }
    for (t, tri) in p.triangles().iter().enumerate() {
        let [sa, sb, sc] = tri.vertices().map(|v| d.sigma_object(v));
        for (rotation, lhs, r1, r2) in [
            (Rotation::A, &sa, &sb, &sc),
            (Rotation::B, &sb, &sc, &sa),
            (Rotation::C, &sc, &sa, &sb),
        ] {
            let excess = lhs.difference(&r1.union(r2));
            if !excess.is_empty() {
                violations.push(Violation::Triangle {
                    triangle: t,
                    rotation,
                    excess,
                });
            }
        }
    }
    SupportReport {
        structural: STRUCTURAL.to_vec(),
        triangles_checked: p.triangles().len(),
        violations,
    }
}

/// A map of points, source index to target index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SupportMorphism {
    pub map: Vec<usize>,
}

impl SupportMorphism {
    pub fn preimage(&self, target: &PointSet) -> PointSet {
        self.map
            .iter()
            .enumerate()
            .filter(|(_, &y)| target.contains(y))
            .map(|(x, _)| x)
            .collect()
    }
}

/// The unique morphism `(X, σ) -> (Sp, sup)`, `f(x) = {a : x ∉ σ(a)}`.
pub fn universal_morphism(
    d: &SupportDatum,
    s: &SupportSpace,
    p: &Presentation,
) -> Result<SupportMorphism> {
    let rules = ThickRules::new(p);
    let map = (0..d.space.len())
        .map(|x| {
            let fx: BitSet = p
                .ids()
                .filter(|&a| !d.sigma(a).contains(x))
                .map(IndecId::index)
                .collect();
            let not_thick = || Error::NotThick {
                point: d.space.point(x).to_owned(),
            };
            if !rules.is_thick(&fx) {
                return Err(not_thick());
            }
            s.lattice.position_of_set(&fx).ok_or_else(not_thick)
        })
        .collect::<Result<Vec<_>>>()?;
    let f = SupportMorphism { map };
    for a in p.ids() {
        let pulled = f.preimage(s.sup(a));
        assert_eq!(&pulled, d.sigma(a), "f⁻¹(sup(a)) = σ(a) by construction");
        if !d.space.is_closed(&pulled) {
            return Err(Error::NotContinuous {
                indec: p.name(a).to_owned(),
            });
        }
    }
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismFailure {
    /// The map has the wrong domain, or sends a point outside the target.
    Shape(String),
    /// The preimage of a closed generator `sup(a)` of the target is not
    /// closed.
    NotContinuous { indec: IndecId, preimage: PointSet },
    /// `g⁻¹(sup(a)) != σ(a)`.
    Pullback {
        indec: IndecId,
        preimage: PointSet,
        sigma: PointSet,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismCheck {
    pub failure: Option<MorphismFailure>,
}

impl MorphismCheck {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

/// Whether `g` is continuous and satisfies `g⁻¹(sup(a)) = σ(a)` for every
/// indecomposable. Reports the first failure.
pub fn check_morphism(
    d: &SupportDatum,
    s: &SupportSpace,
    g: &SupportMorphism,
    p: &Presentation,
) -> MorphismCheck {
    let fail = |f| MorphismCheck { failure: Some(f) };
    if g.map.len() != d.space.len() {
        return fail(MorphismFailure::Shape(format!(
            "map has {} entries for {} source points",
            g.map.len(),
            d.space.len()
        )));
    }
    if let Some(x) = g.map.iter().position(|&y| y >= s.len()) {
        return fail(MorphismFailure::Shape(format!(
            "point `{}` maps outside the target",
            d.space.point(x)
        )));
    }
    if d.sigma.len() != p.len() {
        return fail(MorphismFailure::Shape(
            "σ is not defined on every indecomposable".into(),
        ));
    }
    // Preimages commute with unions and intersections, so continuity only
    // needs checking on the generators.
    for a in p.ids() {
        let preimage = g.preimage(s.sup(a));
        if !d.space.is_closed(&preimage) {
            return fail(MorphismFailure::NotContinuous { indec: a, preimage });
        }
    }
    for a in p.ids() {
        let preimage = g.preimage(s.sup(a));
        if &preimage != d.sigma(a) {
            return fail(MorphismFailure::Pullback {
                indec: a,
                preimage,
                sigma: d.sigma(a).clone(),
            });
        }
    }
    MorphismCheck { failure: None }
}

/// The datum `σ(a) = h⁻¹(sup(a))` on points `x0, x1, ...`, with the
/// topology generated by the `σ(a)`.
pub fn pullback_datum(s: &SupportSpace, h: Vec<usize>) -> SupportDatum {
    let g = SupportMorphism { map: h };
    let sigma: Vec<PointSet> = s.sup.iter().map(|sup| g.preimage(sup)).collect();
    let points = (0..g.map.len()).map(|x| format!("x{x}")).collect();
    let mut d = SupportDatum::with_generated_topology(points, sigma)
        .expect("generated labels are distinct");
    d.generator = Some(g.map);
    d
}

/// A pullback of `(Sp, sup)` along a uniformly random map from
/// `num_points` points, reproducible from `seed`.
pub fn random_support_datum(s: &SupportSpace, num_points: usize, seed: u64) -> SupportDatum {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = (0..num_points)
        .map(|_| rng.random_range(0..s.len()))
        .collect();
    pullback_datum(s, h)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatumDoc {
    points: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    closed: Option<Vec<Vec<String>>>,
    sigma: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generator: Option<BTreeMap<String, String>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MorphismDoc {
    map: BTreeMap<String, String>,
}

fn point_set(labels: &HashMap<&str, usize>, names: &[String], context: &str) -> Result<PointSet> {
    names
        .iter()
        .map(|n| {
            labels
                .get(n.as_str())
                .copied()
                .ok_or_else(|| Error::Validation(format!("unknown point `{n}` in {context}")))
        })
        .collect()
}

/// Parses a support-datum document. Indecomposables absent from `sigma`
/// get empty support. Without `closed`, the topology is generated by the
/// supports; with it, the listed sets generate the topology and the
/// supports are not added.
pub fn parse_datum(text: &str, p: &Presentation) -> Result<SupportDatum> {
    let doc: DatumDoc = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let labels: HashMap<&str, usize> = doc
        .points
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let mut sigma = vec![BitSet::new(); p.len()];
    for (name, pts) in &doc.sigma {
        let a = p.id(name).ok_or_else(|| {
            Error::Validation(format!("unknown indecomposable `{name}` in sigma"))
        })?;
        sigma[a.index()] = point_set(&labels, pts, &format!("sigma of `{name}`"))?;
    }
    let generators = match &doc.closed {
        None => sigma.clone(),
        Some(closed) => closed
            .iter()
            .map(|c| point_set(&labels, c, "closed"))
            .collect::<Result<_>>()?,
    };
    // `generator` is informational; it is not read back.
    Ok(SupportDatum {
        space: FinSpace::new(doc.points, generators)?,
        sigma,
        generator: None,
    })
}

/// Serializes a datum. When the datum carries its generator map, it is
/// written as `generator`, naming target points of `s`.
pub fn datum_to_json(d: &SupportDatum, p: &Presentation, s: Option<&SupportSpace>) -> String {
    let names = |set: &PointSet| set.iter().map(|x| d.space.point(x).to_owned()).collect();
    let doc = DatumDoc {
        points: d.space.points().to_vec(),
        closed: None,
        sigma: p
            .ids()
            .map(|a| (p.name(a).to_owned(), names(d.sigma(a))))
            .collect(),
        generator: match (&d.generator, s) {
            (Some(h), Some(s)) => Some(
                h.iter()
                    .enumerate()
                    .map(|(x, &y)| (d.space.point(x).to_owned(), s.point_label(y).to_owned()))
                    .collect(),
            ),
            _ => None,
        },
    };
    serde_json::to_string_pretty(&doc).expect("datum serializes")
}

/// Parses a morphism document into a map from `d`'s points to `s`'s points.
pub fn parse_morphism(text: &str, d: &SupportDatum, s: &SupportSpace) -> Result<SupportMorphism> {
    let doc: MorphismDoc = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let mut map = vec![None; d.space.len()];
    for (src, dst) in &doc.map {
        let x = d
            .space
            .points()
            .iter()
            .position(|p| p == src)
            .ok_or_else(|| Error::Validation(format!("unknown source point `{src}`")))?;
        let y = s
            .point_by_label(dst)
            .ok_or_else(|| Error::Validation(format!("unknown target point `{dst}`")))?;
        map[x] = Some(y);
    }
    let map = map
        .into_iter()
        .enumerate()
        .map(|(x, y)| {
            y.ok_or_else(|| {
                Error::Validation(format!(
                    "morphism does not map point `{}`",
                    d.space.point(x)
                ))
            })
        })
        .collect::<Result<_>>()?;
    Ok(SupportMorphism { map })
}

pub fn morphism_to_json(g: &SupportMorphism, d: &SupportDatum, s: &SupportSpace) -> String {
    let doc = MorphismDoc {
        map: g
            .map
            .iter()
            .enumerate()
            .map(|(x, &y)| (d.space.point(x).to_owned(), s.point_label(y).to_owned()))
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("morphism serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::enumerate_thick;
    use crate::presentation::builtin_from_spec;

    fn sp(spec: &str) -> (Presentation, SupportSpace) {
        let p = builtin_from_spec(spec).unwrap();
        let s = build_sp(&enumerate_thick(&p), &p);
        (p, s)
    }

    fn set(xs: &[usize]) -> BitSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn a2_sup() {
        let (p, s) = sp("a2");
        assert_eq!(s.len(), 5);
        let p1 = p.id("P1").unwrap();
        // points: {}, {P1}, {P2}, {S2}, top
        assert_eq!(s.sup(p1), &set(&[0, 2, 3]));
        assert_eq!(s.space.format_points(s.sup(p1)), "[{}, {P2}, {S2}]");
        assert!(s.sup_object(&ObjectExpr::zero()).is_empty());
        assert!(check_support_datum(&s.as_datum(), &p).is_valid());
    }

    #[test]
    fn point_sup() {
        let (p, s) = sp("point");
        assert_eq!(s.space.points(), ["{}", "{k}"]);
        assert_eq!(s.sup(p.id("k").unwrap()), &set(&[0]));
    }

    #[test]
    fn empty_sigma_is_valid() {
        for spec in ["a2", "an:3", "product:2"] {
            let p = builtin_from_spec(spec).unwrap();
            let d = SupportDatum::empty(&p, vec!["u".into(), "v".into()]).unwrap();
            assert!(check_support_datum(&d, &p).is_valid());
        }
    }

    #[test]
    fn sd4_violation_is_reported() {
        let p = builtin_from_spec("a2").unwrap();
        let d = SupportDatum::with_generated_topology(
            vec!["pt".into()],
            vec![set(&[0]), set(&[]), set(&[])],
        )
        .unwrap();
        let r = check_support_datum(&d, &p);
        assert_eq!(
            r.violations,
            vec![Violation::Triangle {
                triangle: 0,
                rotation: Rotation::A,
                excess: set(&[0]),
            }]
        );
        assert_eq!(r.structural.len(), 3);
    }

    #[test]
    fn non_closed_sigma_is_reported() {
        let p = builtin_from_spec("point").unwrap();
        let d = SupportDatum {
            space: FinSpace::new(vec!["a".into(), "b".into()], vec![set(&[0, 1])]).unwrap(),
            sigma: vec![set(&[0])],
            generator: None,
        };
        let r = check_support_datum(&d, &p);
        assert_eq!(
            r.violations,
            vec![Violation::NotClosed { indec: IndecId(0) }]
        );
        let (_, s) = sp("point");
        assert!(matches!(
            universal_morphism(&d, &s, &p),
            Err(Error::NotContinuous { .. })
        ));
    }

    #[test]
    fn identity_law() {
        for spec in ["a2", "an:3", "product:3", "point"] {
            let (p, s) = sp(spec);
            let f = universal_morphism(&s.as_datum(), &s, &p).unwrap();
            assert_eq!(f.map, (0..s.len()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn one_point_empty_sigma_maps_to_top() {
        let (p, s) = sp("a2");
        let d = SupportDatum::empty(&p, vec!["pt".into()]).unwrap();
        let f = universal_morphism(&d, &s, &p).unwrap();
        assert_eq!(f.map, vec![s.lattice.top()]);
        assert!(check_morphism(&d, &s, &f, &p).ok());

        // Sending pt to {P2} breaks the pullback identity at P1, the first
        // indecomposable whose sup contains {P2}.
        let g = SupportMorphism { map: vec![2] };
        assert_eq!(
            check_morphism(&d, &s, &g, &p).failure,
            Some(MorphismFailure::Pullback {
                indec: p.id("P1").unwrap(),
                preimage: set(&[0]),
                sigma: set(&[]),
            })
        );
        assert_eq!(g.preimage(s.sup(p.id("P2").unwrap())), set(&[]));
    }

    #[test]
    fn not_thick_is_detected() {
        // σ(P1) = σ(P2) = ∅, σ(S2) = {pt} makes f(pt) = {P1, P2}, not thick.
        let (p, s) = sp("a2");
        let d = SupportDatum::with_generated_topology(
            vec!["pt".into()],
            vec![set(&[]), set(&[]), set(&[0])],
        )
        .unwrap();
        assert!(!check_support_datum(&d, &p).is_valid());
        assert_eq!(
            universal_morphism(&d, &s, &p),
            Err(Error::NotThick { point: "pt".into() })
        );
    }

    #[test]
    fn random_datum_point_family() {
        let (p, s) = sp("point");
        let k = p.id("k").unwrap();
        for seed in 0..20 {
            let d = random_support_datum(&s, 4, seed);
            let h = d.generator.clone().unwrap();
            let fiber: BitSet = (0..4).filter(|&x| h[x] == 0).collect();
            assert_eq!(d.sigma(k), &fiber);
        }
        let d = random_support_datum(&s, 0, 3);
        assert!(d.space.is_empty());
        assert!(d.sigma.iter().all(BitSet::is_empty));
        assert!(check_support_datum(&d, &p).is_valid());
    }

    #[test]
    fn random_datum_is_deterministic() {
        let (p, s) = sp("an:3");
        let a = random_support_datum(&s, 7, 42);
        let b = random_support_datum(&s, 7, 42);
        assert_eq!(a, b);
        assert_eq!(
            datum_to_json(&a, &p, Some(&s)),
            datum_to_json(&b, &p, Some(&s))
        );
    }

    #[test]
    fn round_trip_and_uniqueness_grid() {
        for spec in ["a2", "an:3", "product:2"] {
            let (p, s) = sp(spec);
            for seed in 0..40 {
                for n in 0..=6 {
                    let d = random_support_datum(&s, n, seed);
                    assert!(check_support_datum(&d, &p).is_valid());
                    let f = universal_morphism(&d, &s, &p).unwrap();
                    assert_eq!(Some(&f.map), d.generator.as_ref());
                    assert!(check_morphism(&d, &s, &f, &p).ok());
                    for x in 0..n {
                        for y in (0..s.len()).filter(|&y| y != f.map[x]) {
                            let mut g = f.clone();
                            g.map[x] = y;
                            assert!(!check_morphism(&d, &s, &g, &p).ok());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn sup_is_union_compatible() {
        let (p, s) = sp("an:3");
        let objs: Vec<ObjectExpr> = p
            .ids()
            .flat_map(|a| p.ids().map(move |b| ObjectExpr::new([a, b])))
            .collect();
        for x in &objs {
            for y in &objs {
                let direct: BitSet = s
                    .lattice
                    .elements()
                    .iter()
                    .enumerate()
                    .filter(|(_, j)| !object_in(j, &x.direct_sum(y)))
                    .map(|(i, _)| i)
                    .collect();
                assert_eq!(direct, s.sup_object(x).union(&s.sup_object(y)));
            }
        }
    }

    #[test]
    fn closed_family_is_a_topology() {
        // Small spaces: saturation agrees with the down-set test and
        // satisfies the closed-set axioms.
        let mut spaces = vec![
            sp("a2").1.space,
            sp("point").1.space,
            sp("product:3").1.space,
        ];
        for seed in 0..30 {
            spaces.push(random_support_datum(&sp("an:3").1, (seed % 12) as usize + 1, seed).space);
        }
        for space in spaces {
            let n = space.len();
            assert!(n <= 12);
            let family = space.closed_family(1 << 12).unwrap();
            let set: HashSet<_> = family.iter().cloned().collect();
            assert!(set.contains(&BitSet::new()) && set.contains(&space.all()));
            for a in &family {
                assert!(space.is_closed(a));
                for b in &family {
                    assert!(set.contains(&a.union(b)) && set.contains(&a.intersection(b)));
                }
            }
            let by_test = (0u32..1 << n)
                .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect::<BitSet>())
                .filter(|c| space.is_closed(c))
                .count();
            assert_eq!(by_test, family.len());
        }
    }

    #[test]
    fn a2_closed_family_is_the_down_sets() {
        // Down-sets of the diamond: ∅, {0}, three {0,atom}, three
        // {0,atom,atom}, {0,all atoms}, everything.
        let (_, s) = sp("a2");
        assert_eq!(s.space.closed_family(100).unwrap().len(), 10);
        assert!(matches!(
            s.space.closed_family(5),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn datum_documents() {
        let (p, s) = sp("a2");
        let d = random_support_datum(&s, 5, 9);
        let text = datum_to_json(&d, &p, Some(&s));
        let back = parse_datum(&text, &p).unwrap();
        assert_eq!(back.sigma, d.sigma);
        assert_eq!(back.space.points(), d.space.points());
        assert_eq!(
            back.space.closed_family(1000).unwrap(),
            d.space.closed_family(1000).unwrap()
        );

        let bad = r#"{"points":["pt"],"sigma":{"P1":["pt"]}}"#;
        let bad = parse_datum(bad, &p).unwrap();
        assert!(!check_support_datum(&bad, &p).is_valid());

        assert!(matches!(
            parse_datum(r#"{"points":["pt"],"sigma":{"Q":[]}}"#, &p),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            parse_datum(r#"{"points":["pt"],"sigma":{"P1":["zz"]}}"#, &p),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            parse_datum(r#"{"sigma":{}}"#, &p),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn morphism_documents() {
        let (p, s) = sp("a2");
        let d = random_support_datum(&s, 4, 1);
        let f = universal_morphism(&d, &s, &p).unwrap();
        let text = morphism_to_json(&f, &d, &s);
        assert_eq!(parse_morphism(&text, &d, &s).unwrap(), f);
        assert!(matches!(
            parse_morphism(r#"{"map":{"x0":"{}"}}"#, &d, &s),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            parse_morphism(r#"{"map":{"x0":"{P1,P2}"}}"#, &d, &s),
            Err(Error::Validation(_))
        ));
    }
}
