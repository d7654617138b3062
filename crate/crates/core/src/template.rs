//! Parametric ICC digraphs.
//!
//! A k-ICC template has Type-I paths `P_1..P_k` and, for every ordered pair
//! `(i, j)` with `i != j`, a possibly empty Type-II path `P_{i,j}`. The
//! terminal of `P_i` links to `P_{i,j}` (or straight into `P_j` when that path
//! is empty), and the terminal of `P_{i,j}` links to position `q_{i,j}` of
//! `P_j`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Cycle, Digraph, VertexId};

/// A path of the template. Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PathId {
    TypeI(usize),
    TypeII(usize, usize),
}

/// Position `pos` (1-based) on a template path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coord {
    pub path: PathId,
    pub pos: usize,
}

impl Coord {
    pub fn type_i(i: usize, pos: usize) -> Self {
        Coord {
            path: PathId::TypeI(i),
            pos,
        }
    }

    pub fn type_ii(i: usize, j: usize, pos: usize) -> Self {
        Coord {
            path: PathId::TypeII(i, j),
            pos,
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.path {
            PathId::TypeI(i) => write!(f, "v{}^{}", self.pos, i),
            PathId::TypeII(i, j) => write!(f, "v{}^{}{}", self.pos, i, j),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoTypeIPaths,
    /// `typeI` has the wrong number of entries.
    TypeICount {
        expected: usize,
        found: usize,
    },
    EmptyTypeIPath {
        path: usize,
    },
    /// A Type-II or attachment key that is not an ordered pair of distinct paths.
    BadPair {
        i: usize,
        j: usize,
    },
    MissingAttachment {
        i: usize,
        j: usize,
    },
    AttachmentOutOfRange {
        i: usize,
        j: usize,
        q: usize,
        len: usize,
    },
    /// Initial vertex of `P_j` receives no interconnecting arc.
    InitialVertexUnreached {
        path: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::NoTypeIPaths => write!(f, "k must be at least 1"),
            Violation::TypeICount { expected, found } => {
                write!(f, "expected {expected} Type-I lengths, found {found}")
            }
            Violation::EmptyTypeIPath { path } => write!(f, "Type-I path {path} is empty"),
            Violation::BadPair { i, j } => write!(f, "({i},{j}) is not a valid ordered pair"),
            Violation::MissingAttachment { i, j } => write!(f, "no attachment for ({i},{j})"),
            Violation::AttachmentOutOfRange { i, j, q, len } => {
                write!(f, "attachment ({i},{j}) = {q} outside 1..={len}")
            }
            Violation::InitialVertexUnreached { path } => {
                write!(
                    f,
                    "initial vertex of Type-I path {path} has no incoming arc"
                )
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TemplateError {
    #[error("invalid template: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("split {split} outside 1..{len}")]
    BadSplit { split: usize, len: usize },
    #[error("vertices {0:?} do not form a clique")]
    NotAClique(Vec<VertexId>),
    #[error("labeling does not match the template")]
    LabelingMismatch,
    #[error("malformed template file: {0}")]
    Parse(String),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Parameters of a k-ICC digraph.
///
/// `type_ii` omits empty Type-II paths. `attach[(i, j)]` is the position on
/// `P_j` where the `(i, j)` connection lands.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IccTemplate {
    pub k: usize,
    pub type_i: Vec<usize>,
    pub type_ii: BTreeMap<(usize, usize), usize>,
    pub attach: BTreeMap<(usize, usize), usize>,
}

impl IccTemplate {
    /// All Type-II paths empty, every attachment at position 1.
    pub fn with_direct_links(type_i: Vec<usize>) -> Self {
        let k = type_i.len();
        IccTemplate {
            k,
            type_i,
            type_ii: BTreeMap::new(),
            attach: ordered_pairs(k).map(|p| (p, 1)).collect(),
        }
    }

    /// A single Type-I path of `len` vertices.
    pub fn single_path(len: usize) -> Self {
        IccTemplate::with_direct_links(vec![len])
    }

    /// Cycle on `split + rest` vertices viewed as a 2-ICC template.
    pub fn cycle(split: usize, rest: usize) -> Self {
        IccTemplate::with_direct_links(vec![split, rest])
    }

    /// Complete digraph on `l` vertices viewed as an l-ICC template.
    pub fn clique(l: usize) -> Self {
        IccTemplate::with_direct_links(vec![1; l])
    }

    pub fn path_len(&self, path: PathId) -> usize {
        match path {
            PathId::TypeI(i) => self.type_i.get(i - 1).copied().unwrap_or(0),
            PathId::TypeII(i, j) => self.type_ii_len(i, j),
        }
    }

    pub fn type_ii_len(&self, i: usize, j: usize) -> usize {
        self.type_ii.get(&(i, j)).copied().unwrap_or(0)
    }

    /// `q_{i,j}`; only meaningful on a validated template.
    pub fn attachment(&self, i: usize, j: usize) -> usize {
        self.attach[&(i, j)]
    }

    /// Total vertex count: Type-I lengths plus Type-II lengths.
    pub fn vertex_count(&self) -> usize {
        self.type_i.iter().sum::<usize>() + self.type_ii.values().sum::<usize>()
    }

    /// Every ordered pair `(i, j)`, `i != j`, lexicographically.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        ordered_pairs(self.k)
    }

    /// Collects every invariant violation; empty means valid.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let k = self.k;
        if k == 0 {
            out.push(Violation::NoTypeIPaths);
        }
        if self.type_i.len() != k {
            out.push(Violation::TypeICount {
                expected: k,
                found: self.type_i.len(),
            });
            return out;
        }
        for (i, &len) in self.type_i.iter().enumerate() {
            if len == 0 {
                out.push(Violation::EmptyTypeIPath { path: i + 1 });
            }
        }
        let is_pair =
            |&(i, j): &(usize, usize)| i != j && (1..=k).contains(&i) && (1..=k).contains(&j);
        for key in self.type_ii.keys().chain(self.attach.keys()) {
            if !is_pair(key) {
                out.push(Violation::BadPair { i: key.0, j: key.1 });
            }
        }
        for (i, j) in ordered_pairs(k) {
            let len = self.type_i[j - 1];
            match self.attach.get(&(i, j)) {
                None => out.push(Violation::MissingAttachment { i, j }),
                Some(&q) if q == 0 || q > len => {
                    out.push(Violation::AttachmentOutOfRange { i, j, q, len })
                }
                Some(_) => {}
            }
        }
        // A single path has no interconnecting arcs, so its initial vertex is exempt.
        if k >= 2 {
            for j in 1..=k {
                let attachments_ok = (1..=k).filter(|&h| h != j).all(|h| {
                    self.attach
                        .get(&(h, j))
                        .is_some_and(|&q| q >= 1 && q <= self.type_i[j - 1])
                });
                if !attachments_ok {
                    continue;
                }
                let reached = (1..=k)
                    .filter(|&h| h != j)
                    .any(|h| self.attach.get(&(h, j)) == Some(&1));
                if !reached {
                    out.push(Violation::InitialVertexUnreached { path: j });
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), TemplateError> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(TemplateError::Invalid(v))
        }
    }

    /// All template coordinates in canonical id order: Type-I terminals
    /// first, then the remaining Type-I vertices path by path, then Type-II
    /// vertices by ordered pair.
    pub fn coords(&self) -> Vec<Coord> {
        let mut out: Vec<Coord> = (1..=self.k)
            .map(|i| Coord::type_i(i, self.type_i[i - 1]))
            .collect();
        for i in 1..=self.k {
            out.extend((1..self.type_i[i - 1]).map(|a| Coord::type_i(i, a)));
        }
        for (i, j) in self.pairs() {
            out.extend((1..=self.type_ii_len(i, j)).map(|a| Coord::type_ii(i, j, a)));
        }
        out
    }

    pub fn terminal(&self, i: usize) -> Coord {
        Coord::type_i(i, self.type_i[i - 1])
    }

    /// The arcs of the ICC digraph in template coordinates: path arcs first,
    /// then the interconnecting arcs of each ordered pair.
    pub fn arcs(&self) -> Vec<(Coord, Coord)> {
        let mut out = Vec::new();
        for i in 1..=self.k {
            out.extend(
                (1..self.type_i[i - 1]).map(|a| (Coord::type_i(i, a), Coord::type_i(i, a + 1))),
            );
        }
        for (i, j) in self.pairs() {
            let len = self.type_ii_len(i, j);
            out.extend((1..len).map(|a| (Coord::type_ii(i, j, a), Coord::type_ii(i, j, a + 1))));
        }
        for (i, j) in self.pairs() {
            let len = self.type_ii_len(i, j);
            let landing = Coord::type_i(j, self.attachment(i, j));
            if len >= 1 {
                out.push((self.terminal(i), Coord::type_ii(i, j, 1)));
                out.push((Coord::type_ii(i, j, len), landing));
            } else {
                out.push((self.terminal(i), landing));
            }
        }
        out
    }

    /// Canonical ICC digraph of this template together with its labeling.
    pub fn build_digraph(&self) -> Result<(Digraph, Labeling), TemplateError> {
        self.validate()?;
        let labeling = Labeling::canonical(self);
        let arcs = self
            .arcs()
            .into_iter()
            .map(|(a, b)| (labeling.vertex(a), labeling.vertex(b)));
        let g = Digraph::new(labeling.len(), arcs).expect("template arcs are in range");
        Ok((g, labeling))
    }

    /// Whether `labeling` maps this template's arcs onto arcs of `g`.
    /// Extra arcs in `g` are allowed.
    pub fn check_embedding(&self, g: &Digraph, labeling: &Labeling) -> bool {
        if !self.violations().is_empty() || !labeling.fits(self) {
            return false;
        }
        if labeling.map.values().any(|&v| v == 0 || v > g.n()) {
            return false;
        }
        self.arcs()
            .into_iter()
            .all(|(a, b)| g.has_arc(labeling.vertex(a), labeling.vertex(b)))
    }

    pub fn to_json(&self) -> String {
        let key = |(i, j): &(usize, usize)| format!("{i},{j}");
        let file = TemplateFile {
            k: self.k,
            type_i: self.type_i.clone(),
            type_ii: self
                .type_ii
                .iter()
                .filter(|(_, &n)| n > 0)
                .map(|(p, &n)| (key(p), n))
                .collect(),
            attach: self.attach.iter().map(|(p, &q)| (key(p), q)).collect(),
        };
        serde_json::to_string(&file).expect("template serialization is infallible")
    }

    /// Parses the template file format. Does not validate.
    pub fn from_json(text: &str) -> Result<Self, TemplateError> {
        let file: TemplateFile =
            serde_json::from_str(text).map_err(|e| TemplateError::Parse(e.to_string()))?;
        let parse_key = |s: &str| -> Result<(usize, usize), TemplateError> {
            let bad = || TemplateError::Parse(format!("bad pair key {s:?}, expected \"i,j\""));
            let (a, b) = s.split_once(',').ok_or_else(bad)?;
            Ok((
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            ))
        };
        let mut type_ii = BTreeMap::new();
        for (key, n) in file.type_ii {
            if n > 0 {
                type_ii.insert(parse_key(&key)?, n);
            }
        }
        let mut attach = BTreeMap::new();
        for (key, q) in file.attach {
            attach.insert(parse_key(&key)?, q);
        }
        Ok(IccTemplate {
            k: file.k,
            type_i: file.type_i,
            type_ii,
            attach,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TemplateFile {
    k: usize,
    #[serde(rename = "typeI")]
    type_i: Vec<usize>,
    #[serde(rename = "typeII", default)]
    type_ii: BTreeMap<String, usize>,
    #[serde(default)]
    attach: BTreeMap<String, usize>,
}

fn ordered_pairs(k: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=k).flat_map(move |i| (1..=k).filter(move |&j| j != i).map(move |j| (i, j)))
}

/// Binds template coordinates to host vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Labeling {
    map: BTreeMap<Coord, VertexId>,
}

impl Labeling {
    /// Injective maps only; `None` on a repeated vertex id.
    pub fn new(map: BTreeMap<Coord, VertexId>) -> Option<Self> {
        let ids: BTreeSet<_> = map.values().collect();
        (ids.len() == map.len()).then_some(Labeling { map })
    }

    /// Ids `1..=n` in [`IccTemplate::coords`] order.
    pub fn canonical(t: &IccTemplate) -> Self {
        Labeling {
            map: t.coords().into_iter().zip(1..).collect(),
        }
    }

    /// Labels `t.coords()` with `ids` in the same order.
    pub fn from_ordered(t: &IccTemplate, ids: &[VertexId]) -> Option<Self> {
        let coords = t.coords();
        if coords.len() != ids.len() {
            return None;
        }
        Labeling::new(coords.into_iter().zip(ids.iter().copied()).collect())
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Panics if `c` is unlabeled.
    pub fn vertex(&self, c: Coord) -> VertexId {
        self.map[&c]
    }

    pub fn get(&self, c: Coord) -> Option<VertexId> {
        self.map.get(&c).copied()
    }

    /// Reverse lookup.
    pub fn coord_of(&self, v: VertexId) -> Option<Coord> {
        self.map.iter().find(|(_, &id)| id == v).map(|(&c, _)| c)
    }

    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.map.values().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Coord, VertexId)> + '_ {
        self.map.iter().map(|(&c, &v)| (c, v))
    }

    /// Covers exactly the coordinates of `t`.
    pub fn fits(&self, t: &IccTemplate) -> bool {
        let coords = t.coords();
        coords.len() == self.map.len() && coords.iter().all(|c| self.map.contains_key(c))
    }
}

/// Views cycle `c` as a 2-ICC: `P_1` is its first `split` vertices and `P_2`
/// the rest, both attachments at position 1.
pub fn cycle_to_template(
    c: &Cycle,
    split: usize,
) -> Result<(IccTemplate, Labeling), TemplateError> {
    let len = c.len();
    if split == 0 || split >= len {
        return Err(TemplateError::BadSplit { split, len });
    }
    let t = IccTemplate::cycle(split, len - split);
    let vs = c.vertices();
    let mut map = BTreeMap::new();
    for a in 1..=split {
        map.insert(Coord::type_i(1, a), vs[a - 1]);
    }
    for a in 1..=len - split {
        map.insert(Coord::type_i(2, a), vs[split + a - 1]);
    }
    let labeling = Labeling::new(map).expect("cycle vertices are distinct");
    Ok((t, labeling))
}

/// Views a clique of `g` as an |K|-ICC with single-vertex Type-I paths,
/// ordered by vertex id.
pub fn clique_to_template(
    g: &Digraph,
    clique: &BTreeSet<VertexId>,
) -> Result<(IccTemplate, Labeling), TemplateError> {
    let vs: Vec<VertexId> = clique.iter().copied().collect();
    let complete = !vs.is_empty()
        && vs.iter().all(|&u| u >= 1 && u <= g.n())
        && vs
            .iter()
            .all(|&u| vs.iter().all(|&v| u == v || g.has_arc(u, v)));
    if !complete {
        return Err(TemplateError::NotAClique(vs));
    }
    let t = IccTemplate::clique(vs.len());
    let map = vs
        .iter()
        .enumerate()
        .map(|(i, &v)| (Coord::type_i(i + 1, 1), v))
        .collect();
    Ok((t, Labeling::new(map).expect("set elements are distinct")))
}

/// Seeded random valid template.
///
/// Type-I lengths are uniform in `1..=max_path_len`; each ordered pair gets a
/// non-empty Type-II path (length in `1..=max_path_len`) with probability
/// `density`. Attachments are uniform, then repaired so every initial vertex
/// is reached.
pub fn random_template(k: usize, max_path_len: usize, density: f64, seed: u64) -> IccTemplate {
    assert!(k >= 1, "k must be at least 1");
    let max_len = max_path_len.max(1);
    let density = density.clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let type_i: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=max_len)).collect();
    let mut type_ii = BTreeMap::new();
    let mut attach = BTreeMap::new();
    for (i, j) in ordered_pairs(k) {
        if rng.gen_bool(density) {
            type_ii.insert((i, j), rng.gen_range(1..=max_len));
        }
        attach.insert((i, j), rng.gen_range(1..=type_i[j - 1]));
    }
    for j in 1..=k {
        let sources: Vec<usize> = (1..=k).filter(|&h| h != j).collect();
        if !sources.is_empty() && !sources.iter().any(|&h| attach[&(h, j)] == 1) {
            let h = sources[rng.gen_range(0..sources.len())];
            attach.insert((h, j), 1);
        }
    }
    IccTemplate {
        k,
        type_i,
        type_ii,
        attach,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn d1_template() -> IccTemplate {
        IccTemplate::with_direct_links(vec![2, 2, 2])
    }

    fn d1() -> Digraph {
        Digraph::new(
            6,
            [
                (4, 1),
                (5, 2),
                (6, 3),
                (1, 5),
                (1, 6),
                (2, 4),
                (2, 6),
                (3, 4),
                (3, 5),
            ],
        )
        .unwrap()
    }

    #[test]
    fn validation() {
        assert!(IccTemplate::single_path(3).validate().is_ok());
        assert!(d1_template().validate().is_ok());

        let mut t = IccTemplate::with_direct_links(vec![2, 2]);
        t.type_ii.insert((1, 2), 1);
        t.attach.insert((1, 2), 5);
        let v = t.violations();
        assert!(v.contains(&Violation::AttachmentOutOfRange {
            i: 1,
            j: 2,
            q: 5,
            len: 2
        }));

        let mut t = d1_template();
        t.attach.remove(&(2, 3));
        assert_eq!(
            t.violations(),
            vec![Violation::MissingAttachment { i: 2, j: 3 }]
        );

        // Nothing lands on v_1^1.
        let mut t = d1_template();
        t.attach.insert((2, 1), 2);
        t.attach.insert((3, 1), 2);
        assert_eq!(
            t.violations(),
            vec![Violation::InitialVertexUnreached { path: 1 }]
        );

        let t = IccTemplate {
            k: 0,
            type_i: vec![],
            type_ii: BTreeMap::new(),
            attach: BTreeMap::new(),
        };
        assert_eq!(t.violations(), vec![Violation::NoTypeIPaths]);

        let mut t = IccTemplate::with_direct_links(vec![0, 1]);
        t.type_ii.insert((1, 1), 2);
        let v = t.violations();
        assert!(v.contains(&Violation::EmptyTypeIPath { path: 1 }));
        assert!(v.contains(&Violation::BadPair { i: 1, j: 1 }));
        assert!(matches!(t.build_digraph(), Err(TemplateError::Invalid(_))));
    }

    #[test]
    fn d1_builds_exactly() {
        let (g, l) = d1_template().build_digraph().unwrap();
        assert_eq!(g, d1());
        assert_eq!(g.arc_count(), 9);
        assert_eq!(l.vertex(Coord::type_i(1, 1)), 4);
        assert_eq!(l.vertex(Coord::type_i(1, 2)), 1);
        assert!(d1_template().check_embedding(&d1(), &l));
        assert!(!d1_template().check_embedding(&d1().without_arc(1, 5), &l));
    }

    #[test]
    fn degrees_and_counts() {
        let mut t = IccTemplate::with_direct_links(vec![2, 1, 3]);
        t.type_ii.insert((1, 3), 2);
        t.type_ii.insert((3, 2), 1);
        t.attach.insert((1, 3), 2);
        t.validate().unwrap();
        let (g, l) = t.build_digraph().unwrap();
        assert_eq!(g.n(), 9);
        for i in 1..=3 {
            assert_eq!(g.out_neighbors(l.vertex(t.terminal(i))).len(), 2);
        }
        assert_eq!(g.out_neighbors(l.vertex(Coord::type_ii(1, 3, 2))).len(), 1);
        assert_eq!(g.out_neighbors(l.vertex(Coord::type_ii(3, 2, 1))).len(), 1);
    }

    #[test]
    fn special_shapes() {
        let (g, _) = IccTemplate::cycle(2, 3).build_digraph().unwrap();
        let cycles = g.enumerate_cycles(100).cycles;
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].len(), 5);
        assert_eq!(g.arc_count(), 5);

        let (g, _) = IccTemplate::clique(4).build_digraph().unwrap();
        assert_eq!(g.arc_count(), 12);
    }

    #[test]
    fn cycle_conversion() {
        let g = Digraph::new(4, [(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        let c = Cycle::new(&g, vec![1, 2, 3, 4]).unwrap();
        let (t, l) = cycle_to_template(&c, 2).unwrap();
        assert_eq!((t.k, t.type_i.clone()), (2, vec![2, 2]));
        assert!(t.check_embedding(&g, &l));

        let g2 = Digraph::new(2, [(1, 2), (2, 1)]).unwrap();
        let c2 = Cycle::new(&g2, vec![1, 2]).unwrap();
        let (t, _) = cycle_to_template(&c2, 1).unwrap();
        assert_eq!(t.type_i, vec![1, 1]);

        let g5 = Digraph::new(5, (1..=5).map(|a| (a, a % 5 + 1))).unwrap();
        let c5 = Cycle::new(&g5, vec![1, 2, 3, 4, 5]).unwrap();
        assert_eq!(
            cycle_to_template(&c5, 5),
            Err(TemplateError::BadSplit { split: 5, len: 5 })
        );
        for split in 1..5 {
            let (t, l) = cycle_to_template(&c5, split).unwrap();
            assert!(t.check_embedding(&g5, &l));
        }
    }

    #[test]
    fn clique_conversion() {
        let tri = Digraph::new(3, [(1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2)]).unwrap();
        let (t, l) = clique_to_template(&tri, &BTreeSet::from([1, 2, 3])).unwrap();
        assert_eq!(t.k, 3);
        assert!(t.check_embedding(&tri, &l));
        let (t, _) = clique_to_template(&tri, &BTreeSet::from([2])).unwrap();
        assert_eq!(t.k, 1);
        let half = Digraph::new(2, [(1, 2)]).unwrap();
        assert!(clique_to_template(&half, &BTreeSet::from([1, 2])).is_err());
    }

    #[test]
    fn random_templates_are_valid() {
        let t = random_template(1, 5, 0.5, 7);
        assert_eq!(t.k, 1);
        assert!(t.validate().is_ok());
        let t = random_template(3, 1, 0.0, 7);
        assert_eq!(t, IccTemplate::clique(3));
        for seed in 0..200 {
            let t = random_template(1 + (seed % 5) as usize, 3, 0.3, seed);
            assert!(t.validate().is_ok(), "{t:?}");
            assert_eq!(random_template(1 + (seed % 5) as usize, 3, 0.3, seed), t);
        }
    }

    #[test]
    fn json_format() {
        let mut t = IccTemplate::with_direct_links(vec![1, 2]);
        t.type_ii.insert((1, 2), 2);
        let text = t.to_json();
        assert_eq!(
            text,
            r#"{"k":2,"typeI":[1,2],"typeII":{"1,2":2},"attach":{"1,2":1,"2,1":1}}"#
        );
        assert_eq!(IccTemplate::from_json(&text).unwrap(), t);
        let sparse = r#"{"k":2,"typeI":[1,1],"attach":{"1,2":1,"2,1":1}}"#;
        assert_eq!(
            IccTemplate::from_json(sparse).unwrap(),
            IccTemplate::cycle(1, 1)
        );
        let missing =
            IccTemplate::from_json(r#"{"k":2,"typeI":[1,1],"attach":{"1,2":1}}"#).unwrap();
        assert_eq!(
            missing.violations(),
            vec![Violation::MissingAttachment { i: 2, j: 1 }]
        );
        assert!(IccTemplate::from_json(r#"{"k":2,"typeI":[1,1],"attach":{"12":1}}"#).is_err());
    }
}
