//! Tensor structure: thick ⊗-ideals, prime ideals and the spectrum of
//! primes with its supports, and the comparison map from the spectrum into
//! the universal support space.

use serde::Serialize;

use crate::bitset::BitSet;
use crate::closure::{next_closure_all, ClosureOperator, IndecSet, ThickRules, ThickSet};
use crate::error::{Error, Result};
use crate::presentation::{IndecId, ObjectExpr, Presentation};
use crate::space::{
    check_support_datum, universal_morphism, FinSpace, PointSet, SupportDatum, SupportMorphism,
    SupportReport, SupportSpace,
};

/// Unit object and a total product table on indecomposables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorTable {
    n: usize,
    unit: ObjectExpr,
    /// Row-major, `table[x * n + y] = x ⊗ y`.
    table: Vec<ObjectExpr>,
}

impl TensorTable {
    /// `table` is row-major over all ordered pairs, so its length must be a
    /// square; this and symmetry are checked when the owning presentation
    /// is built.
    pub fn new(unit: ObjectExpr, table: Vec<ObjectExpr>) -> Self {
        let n = (0..=table.len())
            .find(|k| k * k >= table.len())
            .unwrap_or(0);
        Self { n, unit, table }
    }

    pub(crate) fn validate(&self, n: usize) -> Result<()> {
        if self.n != n || self.table.len() != n * n {
            return Err(Error::Validation(format!(
                "tensor table has {} entries, expected {}",
                self.table.len(),
                n * n
            )));
        }
        let in_range = |x: &ObjectExpr| x.components().iter().all(|c| c.index() < n);
        if !in_range(&self.unit) || !self.table.iter().all(in_range) {
            return Err(Error::Validation(
                "tensor data references an indecomposable out of range".into(),
            ));
        }
        for x in 0..n {
            for y in x + 1..n {
                if self.table[x * n + y].support() != self.table[y * n + x].support() {
                    return Err(Error::Validation(format!(
                        "tensor table is not symmetric at indecomposables {x} and {y}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn unit(&self) -> &ObjectExpr {
        &self.unit
    }

    pub fn product(&self, x: IndecId, y: IndecId) -> &ObjectExpr {
        &self.table[x.index() * self.n + y.index()]
    }

    /// Tensor product of direct sums, distributing over components.
    pub fn product_objects(&self, a: &ObjectExpr, b: &ObjectExpr) -> ObjectExpr {
        ObjectExpr::new(a.components().iter().flat_map(|&x| {
            b.components()
                .iter()
                .flat_map(move |&y| self.product(x, y).components().iter().copied())
        }))
    }
}

fn tensor_of(p: &Presentation) -> Result<&TensorTable> {
    p.tensor().ok_or(Error::NoTensor)
}

/// Thick closure combined with absorption: `x` in the set puts every
/// component of every `g ⊗ x` in the set.
struct IdealRules {
    thick: ThickRules,
    absorb: Vec<BitSet>,
}

impl IdealRules {
    fn new(p: &Presentation, t: &TensorTable) -> Self {
        let absorb = p
            .ids()
            .map(|x| {
                p.ids().fold(BitSet::new(), |acc, g| {
                    acc.union(&t.product(g, x).support())
                })
            })
            .collect();
        Self {
            thick: ThickRules::new(p),
            absorb,
        }
    }
}

impl ClosureOperator for IdealRules {
    fn ground(&self) -> usize {
        self.thick.ground()
    }

    fn close(&self, set: &BitSet) -> BitSet {
        let mut cur = set.clone();
        loop {
            let before = cur.len();
            self.thick.step(&mut cur);
            for x in cur.clone().iter() {
                cur.union_with(&self.absorb[x]);
            }
            if cur.len() == before {
                return cur;
            }
        }
    }
}

/// The smallest thick ⊗-ideal containing `s`.
pub fn ideal_closure(p: &Presentation, s: &IndecSet) -> Result<ThickSet> {
    let t = tensor_of(p)?;
    Ok(ThickSet::new_unchecked(IdealRules::new(p, t).close(s)))
}

/// All thick ⊗-ideals, in canonical order.
pub fn enumerate_ideals(p: &Presentation) -> Result<Vec<ThickSet>> {
    let t = tensor_of(p)?;
    Ok(next_closure_all(&IdealRules::new(p, t))
        .into_iter()
        .map(ThickSet::new_unchecked)
        .collect())
}

/// Whether a proper ideal is prime, tested on pairs of indecomposables.
fn is_prime(p: &Presentation, t: &TensorTable, q: &ThickSet) -> bool {
    let members = q.members();
    if members == &p.all() {
        return false;
    }
    p.ids().all(|x| {
        p.ids().all(|y| {
            !t.product(x, y).support().is_subset(members)
                || members.contains(x.index())
                || members.contains(y.index())
        })
    })
}

/// Prime ideals with their supports `supp(a) = {Q : a ∉ Q}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    pub primes: Vec<ThickSet>,
    /// Per indecomposable, a set of indices into `primes`.
    pub supp: Vec<PointSet>,
}

impl Spectrum {
    /// Computes supports for the given primes. Does not check primality.
    pub fn from_primes(p: &Presentation, mut primes: Vec<ThickSet>) -> Self {
        primes.sort();
        let supp = p
            .ids()
            .map(|a| {
                primes
                    .iter()
                    .enumerate()
                    .filter(|(_, q)| !q.members().contains(a.index()))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        Self { primes, supp }
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn supp(&self, a: IndecId) -> &PointSet {
        &self.supp[a.index()]
    }

    pub fn supp_object(&self, x: &ObjectExpr) -> PointSet {
        x.components()
            .iter()
            .fold(BitSet::new(), |acc, c| acc.union(self.supp(*c)))
    }

    /// The primes as a space with `supp` as support function and the
    /// topology generated by the supports.
    pub fn as_datum(&self, p: &Presentation) -> SupportDatum {
        let labels = self
            .primes
            .iter()
            .map(|q| p.format_set(q.members()))
            .collect();
        SupportDatum {
            space: FinSpace::new(labels, self.supp.clone()).expect("primes are distinct"),
            sigma: self.supp.clone(),
            generator: None,
        }
    }
}

pub fn primes(p: &Presentation) -> Result<Spectrum> {
    let t = tensor_of(p)?;
    let primes = enumerate_ideals(p)?
        .into_iter()
        .filter(|q| is_prime(p, t, q))
        .collect();
    Ok(Spectrum::from_primes(p, primes))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductViolation {
    pub x: IndecId,
    pub y: IndecId,
    /// `supp(x ⊗ y)`
    pub product: PointSet,
    /// `supp(x) ∩ supp(y)`
    pub intersection: PointSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TtReport {
    pub base: SupportReport,
    /// Primes missing from `supp(1)`, when that is not everything.
    pub unit_missing: Option<PointSet>,
    pub product_violations: Vec<ProductViolation>,
}

impl TtReport {
    pub fn is_valid(&self) -> bool {
        self.base.is_valid() && self.unit_missing.is_none() && self.product_violations.is_empty()
    }
}

/// Checks the four support axioms plus `supp(1) = Spc` and
/// `supp(x ⊗ y) = supp(x) ∩ supp(y)` on all pairs of indecomposables.
pub fn verify_tt_support(s: &Spectrum, p: &Presentation) -> Result<TtReport> {
    let t = tensor_of(p)?;
    let base = check_support_datum(&s.as_datum(p), p);
    let all = BitSet::full(s.len());
    let unit = s.supp_object(t.unit());
    let unit_missing = (unit != all).then(|| all.difference(&unit));
    let mut product_violations = Vec::new();
    for x in p.ids() {
        for y in p.ids() {
            let product = s.supp_object(t.product(x, y));
            let intersection = s.supp(x).intersection(s.supp(y));
            if product != intersection {
                product_violations.push(ProductViolation {
                    x,
                    y,
                    product,
                    intersection,
                });
            }
        }
    }
    Ok(TtReport {
        base,
        unit_missing,
        product_violations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompressionReport {
    pub spc_size: usize,
    pub sp_size: usize,
    pub injective: bool,
    /// Each prime is sent to itself.
    pub fixes_primes: bool,
    /// `ι⁻¹(sup(a)) = supp(a)` for every indecomposable.
    pub pullback_matches: bool,
}

/// The morphism from the spectrum of primes into the universal support
/// space, with a size comparison.
pub fn comparison_map(
    s: &Spectrum,
    u: &SupportSpace,
    p: &Presentation,
) -> Result<(SupportMorphism, CompressionReport)> {
    let iota = universal_morphism(&s.as_datum(p), u, p)?;
    let mut targets = iota.map.clone();
    targets.sort_unstable();
    targets.dedup();
    let report = CompressionReport {
        spc_size: s.len(),
        sp_size: u.len(),
        injective: targets.len() == iota.map.len(),
        fixes_primes: iota
            .map
            .iter()
            .zip(&s.primes)
            .all(|(&j, q)| u.lattice.get(j) == q),
        pullback_matches: p.ids().all(|a| &iota.preimage(u.sup(a)) == s.supp(a)),
    };
    Ok((iota, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::{brute_force_thick, enumerate_thick};
    use crate::presentation::{builtin_from_spec, parse_presentation};
    use crate::space::build_sp;
    use rand::{Rng, SeedableRng};

    fn set(xs: &[usize]) -> BitSet {
        xs.iter().copied().collect()
    }

    fn ts(xs: &[usize]) -> ThickSet {
        ThickSet::new_unchecked(set(xs))
    }

    fn pres(spec: &str) -> Presentation {
        builtin_from_spec(spec).unwrap()
    }

    /// Ideals by checking every subset against the closure conditions
    /// directly.
    fn brute_force_ideals(p: &Presentation) -> Vec<ThickSet> {
        let t = p.tensor().unwrap();
        let rules = ThickRules::new(p);
        let n = p.len();
        let mut out: Vec<ThickSet> = (0u32..1 << n)
            .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect::<BitSet>())
            .filter(|s| rules.is_thick(s))
            .filter(|s| {
                s.iter().all(|x| {
                    p.ids()
                        .all(|g| t.product(g, IndecId(x)).support().is_subset(s))
                })
            })
            .map(ThickSet::new_unchecked)
            .collect();
        out.sort();
        out
    }

    #[test]
    fn ideal_closures() {
        let p = pres("product:2");
        assert_eq!(ideal_closure(&p, &set(&[0])).unwrap(), ts(&[0]));
        let unit = p.tensor().unwrap().unit().support();
        assert_eq!(ideal_closure(&p, &unit).unwrap(), ts(&[0, 1]));
        assert_eq!(ideal_closure(&pres("point"), &set(&[0])).unwrap(), ts(&[0]));
        assert_eq!(ideal_closure(&pres("a2"), &set(&[0])), Err(Error::NoTensor));
    }

    #[test]
    fn ideal_enumeration() {
        assert_eq!(
            enumerate_ideals(&pres("product:2")).unwrap(),
            vec![ts(&[]), ts(&[0]), ts(&[1]), ts(&[0, 1])]
        );
        assert_eq!(
            enumerate_ideals(&pres("point")).unwrap(),
            vec![ts(&[]), ts(&[0])]
        );
        assert_eq!(enumerate_ideals(&pres("product:3")).unwrap().len(), 8);
        for spec in ["point", "product:2", "product:3", "product:4"] {
            let p = pres(spec);
            assert_eq!(enumerate_ideals(&p).unwrap(), brute_force_ideals(&p));
        }
        assert_eq!(enumerate_ideals(&pres("an:2")), Err(Error::NoTensor));
    }

    #[test]
    fn absorption_shrinks_the_lattice() {
        // a ⊗ b = b: any ideal containing a contains b.
        let p = parse_presentation(
            r#"{"indecomposables":["a","b"],"triangles":[],
                "tensor":{"unit":["a"],"table":{"a|a":["a"],"a|b":["b"],"b|a":["b"],"b|b":["b"]}}}"#,
        )
        .unwrap();
        assert_eq!(enumerate_thick(&p).len(), 4);
        let ideals = enumerate_ideals(&p).unwrap();
        assert_eq!(ideals, vec![ts(&[]), ts(&[1]), ts(&[0, 1])]);
        assert_eq!(ideals, brute_force_ideals(&p));
        // No product vanishes, and every product landing in {b} has b as a
        // factor, so both proper ideals are prime.
        let spc = primes(&p).unwrap();
        assert_eq!(spc.primes, vec![ts(&[]), ts(&[1])]);
        assert!(verify_tt_support(&spc, &p).unwrap().is_valid());
    }

    #[test]
    fn product_primes() {
        let p = pres("product:2");
        let spc = primes(&p).unwrap();
        assert_eq!(spc.primes, vec![ts(&[0]), ts(&[1])]);
        assert_eq!(spc.supp(IndecId(0)), &set(&[1]));

        let p3 = primes(&pres("product:3")).unwrap();
        assert_eq!(p3.primes, vec![ts(&[0, 1]), ts(&[0, 2]), ts(&[1, 2])]);
    }

    #[test]
    fn point_primes() {
        let p = pres("point");
        let spc = primes(&p).unwrap();
        assert_eq!(spc.primes, vec![ts(&[])]);
        assert_eq!(spc.supp(IndecId(0)), &set(&[0]));
        let r = verify_tt_support(&spc, &p).unwrap();
        assert!(r.is_valid());
        assert_eq!(r.unit_missing, None);
    }

    #[test]
    fn product_passes_all_axioms() {
        for k in 1..=5 {
            let p = pres(&format!("product:{k}"));
            let spc = primes(&p).unwrap();
            assert_eq!(spc.len(), k);
            let r = verify_tt_support(&spc, &p).unwrap();
            assert!(r.is_valid(), "{r:?}");
        }
    }

    #[test]
    fn tampered_spectrum_breaks_the_product_formula() {
        let p = pres("product:2");
        let mut ps = primes(&p).unwrap().primes;
        ps.push(ts(&[]));
        let bad = Spectrum::from_primes(&p, ps);
        let r = verify_tt_support(&bad, &p).unwrap();
        assert!(!r.is_valid());
        assert!(r.base.is_valid());
        let first = &r.product_violations[0];
        assert_eq!((first.x, first.y), (IndecId(0), IndecId(1)));
        assert_eq!(first.product, set(&[]));
        assert_eq!(first.intersection, set(&[0]));
    }

    #[test]
    fn comparison_is_the_inclusion_of_primes() {
        for (spec, spc, sp) in [("product:2", 2, 4), ("point", 1, 2), ("product:3", 3, 8)] {
            let p = pres(spec);
            let u = build_sp(&enumerate_thick(&p), &p);
            let s = primes(&p).unwrap();
            let (iota, r) = comparison_map(&s, &u, &p).unwrap();
            assert_eq!((r.spc_size, r.sp_size), (spc, sp));
            assert!(r.injective && r.fixes_primes && r.pullback_matches);
            for (i, q) in s.primes.iter().enumerate() {
                assert_eq!(u.lattice.get(iota.map[i]), q);
            }
        }
    }

    #[test]
    fn primes_are_proper_ideals() {
        for spec in ["point", "product:2", "product:3", "product:4"] {
            let p = pres(spec);
            let s = primes(&p).unwrap();
            for q in &s.primes {
                assert_eq!(&ideal_closure(&p, q.members()).unwrap(), q);
                assert_ne!(q.members(), &p.all());
            }
            // Ideals are among the thick subcategories.
            let thick = brute_force_thick(&p).unwrap();
            assert!(enumerate_ideals(&p)
                .unwrap()
                .iter()
                .all(|i| thick.contains(i)));
        }
    }

    #[test]
    fn object_level_primality() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for spec in ["point", "product:2", "product:3", "product:4"] {
            let p = pres(spec);
            let t = p.tensor().unwrap();
            let s = primes(&p).unwrap();
            let n = p.len();
            for _ in 0..300 {
                let mut obj = || {
                    ObjectExpr::new(
                        (0..rng.random_range(0..4)).map(|_| IndecId(rng.random_range(0..n))),
                    )
                };
                let (a, b) = (obj(), obj());
                let ab = t.product_objects(&a, &b);
                for q in &s.primes {
                    let inside = |x: &ObjectExpr| crate::closure::object_in(q, x);
                    if inside(&ab) {
                        assert!(inside(&a) || inside(&b));
                    }
                }
            }
        }
    }

    #[test]
    fn tensor_supports_multiply() {
        for spec in ["point", "product:2", "product:3"] {
            let p = pres(spec);
            let t = p.tensor().unwrap();
            let s = primes(&p).unwrap();
            for x in p.ids() {
                for y in p.ids() {
                    assert_eq!(
                        s.supp_object(t.product(x, y)),
                        s.supp(x).intersection(s.supp(y))
                    );
                }
            }
            assert!(check_support_datum(&s.as_datum(&p), &p).is_valid());
        }
    }
}
