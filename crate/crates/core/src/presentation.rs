//! Finite presentations of triangulated categories.
//!
//! A presentation lists indecomposable objects up to shift, distinguished
//! triangles between direct sums of them, and optionally a tensor table.
//! Every object is a finite direct sum of indecomposables, so membership in
//! a thick subcategory and supports are determined by the indecomposable
//! components.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::tensor::TensorTable;

/// Index of an indecomposable (a shift orbit) in its presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndecId(pub usize);

impl IndecId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A finite direct sum of indecomposables. The empty sum is the zero object.
///
/// Components are kept sorted so equality is multiset equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ObjectExpr {
    components: Vec<IndecId>,
}

impl ObjectExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(components: impl IntoIterator<Item = IndecId>) -> Self {
        let mut components: Vec<_> = components.into_iter().collect();
        components.sort_unstable();
        Self { components }
    }

    pub fn indec(id: IndecId) -> Self {
        Self {
            components: vec![id],
        }
    }

    pub fn components(&self) -> &[IndecId] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// The set of distinct components; multiplicities are irrelevant for
    /// membership in thick subcategories.
    pub fn support(&self) -> BitSet {
        self.components.iter().map(|c| c.0).collect()
    }

    pub fn direct_sum(&self, other: &ObjectExpr) -> ObjectExpr {
        ObjectExpr::new(self.components.iter().chain(&other.components).copied())
    }
}

/// A distinguished triangle `a -> b -> c -> Σa`. Rotations are implied.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triangle {
    pub a: ObjectExpr,
    pub b: ObjectExpr,
    pub c: ObjectExpr,
}

impl Triangle {
    pub fn new(a: ObjectExpr, b: ObjectExpr, c: ObjectExpr) -> Self {
        Self { a, b, c }
    }

    pub fn vertices(&self) -> [&ObjectExpr; 3] {
        [&self.a, &self.b, &self.c]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    names: Vec<String>,
    index: HashMap<String, IndecId>,
    triangles: Vec<Triangle>,
    tensor: Option<TensorTable>,
}

impl Presentation {
    pub fn new(
        names: Vec<String>,
        triangles: Vec<Triangle>,
        tensor: Option<TensorTable>,
    ) -> Result<Self> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::Validation("empty indecomposable name".into()));
            }
            if name.contains('|') {
                return Err(Error::Validation(format!(
                    "indecomposable name `{name}` contains the reserved character `|`"
                )));
            }
            if index.insert(name.clone(), IndecId(i)).is_some() {
                return Err(Error::Validation(format!(
                    "duplicate indecomposable name `{name}`"
                )));
            }
        }
        let n = names.len();
        for (t, tri) in triangles.iter().enumerate() {
            for v in tri.vertices() {
                if let Some(bad) = v.components().iter().find(|c| c.0 >= n) {
                    return Err(Error::Validation(format!(
                        "triangle {t} references indecomposable index {} out of range",
                        bad.0
                    )));
                }
            }
        }
        if let Some(tensor) = &tensor {
            tensor.validate(n)?;
        }
        Ok(Self {
            names,
            index,
            triangles,
            tensor,
        })
    }

    /// Number of indecomposables.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, id: IndecId) -> &str {
        &self.names[id.0]
    }

    pub fn id(&self, name: &str) -> Option<IndecId> {
        self.index.get(name).copied()
    }

    pub fn ids(&self) -> impl Iterator<Item = IndecId> {
        (0..self.names.len()).map(IndecId)
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn tensor(&self) -> Option<&TensorTable> {
        self.tensor.as_ref()
    }

    /// Every indecomposable.
    pub fn all(&self) -> BitSet {
        BitSet::full(self.len())
    }

    /// Formats a set of indecomposables as `{A,B}` with names sorted.
    pub fn format_set(&self, set: &BitSet) -> String {
        let mut names: Vec<&str> = set.iter().map(|i| self.names[i].as_str()).collect();
        names.sort_unstable();
        format!("{{{}}}", names.join(","))
    }

    pub fn format_object(&self, x: &ObjectExpr) -> String {
        if x.is_zero() {
            return "0".into();
        }
        x.components()
            .iter()
            .map(|c| self.name(*c))
            .collect::<Vec<_>>()
            .join("+")
    }

    fn object_from_names(&self, names: &[String], context: &str) -> Result<ObjectExpr> {
        names
            .iter()
            .map(|n| {
                self.id(n).ok_or_else(|| {
                    Error::Validation(format!("unknown indecomposable `{n}` in {context}"))
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(ObjectExpr::new)
    }

    fn object_names(&self, x: &ObjectExpr) -> Vec<String> {
        x.components()
            .iter()
            .map(|c| self.name(*c).to_owned())
            .collect()
    }

    fn to_document(&self) -> PresentationDoc {
        PresentationDoc {
            indecomposables: self.names.clone(),
            triangles: self
                .triangles
                .iter()
                .map(|t| t.vertices().map(|v| self.object_names(v)))
                .collect(),
            tensor: self.tensor.as_ref().map(|t| {
                let mut table = BTreeMap::new();
                for x in self.ids() {
                    for y in self.ids() {
                        table.insert(
                            format!("{}|{}", self.name(x), self.name(y)),
                            self.object_names(t.product(x, y)),
                        );
                    }
                }
                TensorDoc {
                    unit: self.object_names(t.unit()),
                    table,
                }
            }),
        }
    }

    /// Serializes to the canonical JSON document.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("presentation serializes")
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} indecomposables, {} triangles{}",
            self.len(),
            self.triangles.len(),
            if self.tensor.is_some() {
                ", tensor"
            } else {
                ""
            }
        )
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationDoc {
    indecomposables: Vec<String>,
    triangles: Vec<[Vec<String>; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tensor: Option<TensorDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorDoc {
    unit: Vec<String>,
    table: BTreeMap<String, Vec<String>>,
}

/// Parses and validates a presentation document.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let doc: PresentationDoc =
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    // Names first, so triangles and the tensor table can be resolved.
    let names_only = Presentation::new(doc.indecomposables, Vec::new(), None)?;
    let triangles = doc
        .triangles
        .iter()
        .enumerate()
        .map(|(t, [a, b, c])| {
            let ctx = format!("triangle {t}");
            Ok(Triangle::new(
                names_only.object_from_names(a, &ctx)?,
                names_only.object_from_names(b, &ctx)?,
                names_only.object_from_names(c, &ctx)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let tensor = doc
        .tensor
        .map(|t| tensor_from_doc(&names_only, t))
        .transpose()?;
    Presentation::new(names_only.names, triangles, tensor)
}

fn tensor_from_doc(p: &Presentation, doc: TensorDoc) -> Result<TensorTable> {
    let n = p.len();
    let unit = p.object_from_names(&doc.unit, "tensor unit")?;
    let mut table: Vec<Option<ObjectExpr>> = vec![None; n * n];
    for (key, value) in &doc.table {
        let (l, r) = key.split_once('|').ok_or_else(|| {
            Error::Schema(format!("tensor table key `{key}` is not of the form `A|B`"))
        })?;
        let lookup = |name: &str| {
            p.id(name).ok_or_else(|| {
                Error::Validation(format!(
                    "unknown indecomposable `{name}` in tensor table key `{key}`"
                ))
            })
        };
        let (x, y) = (lookup(l)?, lookup(r)?);
        table[x.0 * n + y.0] = Some(p.object_from_names(value, &format!("tensor entry `{key}`"))?);
    }
    let table = table
        .into_iter()
        .enumerate()
        .map(|(k, v)| {
            v.ok_or_else(|| {
                Error::Validation(format!(
                    "tensor table is missing the pair `{}|{}`",
                    p.names[k / n],
                    p.names[k % n]
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TensorTable::new(unit, table))
}

/// Builtin example families: `a2`, `an`, `point`, `product`.
pub fn builtin(family: &str, n: Option<usize>) -> Result<Presentation> {
    let need_n = || match n {
        None => Err(Error::InvalidParameter(format!(
            "family `{family}` requires a parameter n >= 1"
        ))),
        Some(0) => Err(Error::InvalidParameter(format!(
            "family `{family}` requires n >= 1, got 0"
        ))),
        Some(n) => Ok(n),
    };
    match family {
        "a2" => {
            let id = IndecId;
            Presentation::new(
                vec!["P1".into(), "P2".into(), "S2".into()],
                vec![Triangle::new(
                    ObjectExpr::indec(id(0)),
                    ObjectExpr::indec(id(1)),
                    ObjectExpr::indec(id(2)),
                )],
                None,
            )
        }
        "an" => {
            let n = need_n()?;
            let mut names = Vec::new();
            let mut ids = HashMap::new();
            for i in 0..=n {
                for j in i + 1..=n {
                    ids.insert((i, j), IndecId(names.len()));
                    names.push(format!("{i}-{j}"));
                }
            }
            let arc = |i, j| ObjectExpr::indec(ids[&(i, j)]);
            let mut triangles = Vec::new();
            for i in 0..=n {
                for j in i + 1..=n {
                    for k in j + 1..=n {
                        triangles.push(Triangle::new(arc(i, j), arc(i, k), arc(j, k)));
                    }
                }
            }
            Presentation::new(names, triangles, None)
        }
        "point" => {
            let k = ObjectExpr::indec(IndecId(0));
            Presentation::new(
                vec!["k".into()],
                Vec::new(),
                Some(TensorTable::new(k.clone(), vec![k])),
            )
        }
        "product" => {
            let n = need_n()?;
            let names = (1..=n).map(|i| format!("e{i}")).collect();
            let unit = ObjectExpr::new((0..n).map(IndecId));
            let table = (0..n * n)
                .map(|k| {
                    if k / n == k % n {
                        ObjectExpr::indec(IndecId(k / n))
                    } else {
                        ObjectExpr::zero()
                    }
                })
                .collect();
            Presentation::new(names, Vec::new(), Some(TensorTable::new(unit, table)))
        }
        other => Err(Error::UnknownFamily(other.to_owned())),
    }
}

/// Parses `family` or `family:n`.
pub fn builtin_from_spec(spec: &str) -> Result<Presentation> {
    match spec.split_once(':') {
        None => builtin(spec, None),
        Some((family, n)) => {
            let n = n
                .parse::<usize>()
                .map_err(|_| Error::InvalidParameter(format!("`{n}` is not a natural number")))?;
            builtin(family, Some(n))
        }
    }
}

/// A seeded random presentation with `1..=max_indec` indecomposables and
/// `0..=max_triangles` triangles whose vertices have at most two
/// components. No tensor structure.
pub fn random_presentation(seed: u64, max_indec: usize, max_triangles: usize) -> Presentation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=max_indec.max(1));
    let t = rng.random_range(0..=max_triangles);
    let names = (0..n).map(|i| format!("x{i}")).collect();
    let vertex = |rng: &mut ChaCha8Rng| {
        let k = match rng.random_range(0..10) {
            0 => 0,
            1..=7 => 1,
            _ => 2,
        };
        ObjectExpr::new((0..k).map(|_| IndecId(rng.random_range(0..n))))
    };
    let triangles = (0..t)
        .map(|_| {
            let a = vertex(&mut rng);
            let b = vertex(&mut rng);
            let c = vertex(&mut rng);
            Triangle::new(a, b, c)
        })
        .collect();
    Presentation::new(names, triangles, None).expect("random presentation is valid")
}
