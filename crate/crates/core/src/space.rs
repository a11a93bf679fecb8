//! Locally finite graph oracles with exact integer path metrics.
//!
//! A [`Space`] is a vertex-scale model of a proper geodesic space: adjacency
//! is generated lazily, every metric query is an exact BFS count, and every
//! oracle declares a `horizon`, the radius within which it promises to
//! enumerate. Operations refuse queries beyond the horizon rather than
//! silently truncating.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Opaque vertex identifier. Equal serializations denote equal vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexId {
    /// Position on the line or half-line.
    Int(i64),
    /// Lattice point of `grid-n`.
    Grid(Vec<i32>),
    /// Reduced word in generators: `0..d` involutive letters for regular
    /// trees, `±1..=±k` signed letters for free groups.
    Word(Vec<i8>),
    /// Staircase address: `offset` runs along `step(height)`, `0` on the left
    /// ray, `step_len(height)` on the right ray.
    Stair { height: u32, offset: u32 },
    /// Named vertex of a finite graph.
    Name(String),
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Int(n) => write!(f, "{n}"),
            VertexId::Grid(cs) => {
                write!(f, "(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            VertexId::Word(w) => {
                if w.is_empty() {
                    return write!(f, "e");
                }
                for &l in w {
                    let c = if l >= 0 {
                        (b'a' + l as u8) as char
                    } else {
                        (b'A' + (-l - 1) as u8) as char
                    };
                    write!(f, "{c}")?;
                }
                Ok(())
            }
            VertexId::Stair { height, offset } => write!(f, "s{height}:{offset}"),
            VertexId::Name(s) => write!(f, "{s}"),
        }
    }
}

/// Step-length profile for the staircase kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepProfile {
    /// `step(n)` carries `n²` unit edges.
    Quadratic,
    /// Every step carries a single edge (ladder control space).
    Constant,
}

/// Finite graph stored as a symmetric adjacency map.
#[derive(Debug, Clone)]
pub struct FiniteGraph {
    adj: HashMap<VertexId, Vec<VertexId>>,
}

#[derive(Debug, Clone)]
pub enum SpaceKind {
    Line,
    HalfLine,
    Grid { dim: u8 },
    RegularTree { degree: u8 },
    FreeGroup { rank: u8 },
    Staircase { n_max: u32, profile: StepProfile },
    Finite(FiniteGraph),
}

/// Lazy locally finite graph with a basepoint and an enumeration horizon.
///
/// Oracles are immutable after construction; all queries are pure.
#[derive(Debug, Clone)]
pub struct Space {
    kind: SpaceKind,
    basepoint: VertexId,
    horizon: u32,
    degree_bound: u32,
}

const LINE_HORIZON: u32 = 1_000_000;
const GRID_HORIZON: u32 = 10_000;
const TREE_HORIZON: u32 = 12;
const STAIRCASE_N_CAP: u32 = 20_000;

impl Space {
    pub fn line() -> Space {
        Space {
            kind: SpaceKind::Line,
            basepoint: VertexId::Int(0),
            horizon: LINE_HORIZON,
            degree_bound: 2,
        }
    }

    pub fn half_line() -> Space {
        Space {
            kind: SpaceKind::HalfLine,
            basepoint: VertexId::Int(0),
            horizon: LINE_HORIZON,
            degree_bound: 2,
        }
    }

    pub fn grid(dim: u8) -> Result<Space> {
        if dim == 0 || dim > 8 {
            return Err(Error::InvalidSpec(format!("grid dimension {dim} out of range 1..=8")));
        }
        Ok(Space {
            kind: SpaceKind::Grid { dim },
            basepoint: VertexId::Grid(vec![0; dim as usize]),
            horizon: GRID_HORIZON,
            degree_bound: 2 * dim as u32,
        })
    }

    pub fn regular_tree(degree: u8) -> Result<Space> {
        if degree < 2 || degree > 16 {
            return Err(Error::InvalidSpec(format!("tree degree {degree} out of range 2..=16")));
        }
        Ok(Space {
            kind: SpaceKind::RegularTree { degree },
            basepoint: VertexId::Word(vec![]),
            horizon: TREE_HORIZON,
            degree_bound: degree as u32,
        })
    }

    pub fn free_group(rank: u8) -> Result<Space> {
        if rank == 0 || rank > 8 {
            return Err(Error::InvalidSpec(format!("free group rank {rank} out of range 1..=8")));
        }
        Ok(Space {
            kind: SpaceKind::FreeGroup { rank },
            basepoint: VertexId::Word(vec![]),
            horizon: if rank == 1 { LINE_HORIZON } else { TREE_HORIZON },
            degree_bound: 2 * rank as u32,
        })
    }

    pub fn staircase(n_max: u32, profile: StepProfile) -> Result<Space> {
        if n_max == 0 || n_max > STAIRCASE_N_CAP {
            return Err(Error::InvalidSpec(format!(
                "staircase n_max {n_max} out of range 1..={STAIRCASE_N_CAP}"
            )));
        }
        let horizon = n_max + step_len(n_max, profile);
        Ok(Space {
            kind: SpaceKind::Staircase { n_max, profile },
            basepoint: VertexId::Stair { height: 0, offset: 0 },
            horizon,
            degree_bound: 3,
        })
    }

    /// Builds a finite space from an explicit adjacency map, checking
    /// symmetry and collapsing duplicates.
    pub fn finite(adj: HashMap<VertexId, Vec<VertexId>>, basepoint: VertexId) -> Result<Space> {
        let mut clean: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
        for (v, ns) in &adj {
            let mut ns: Vec<VertexId> = ns.iter().filter(|n| *n != v).cloned().collect();
            ns.sort();
            ns.dedup();
            for n in &ns {
                match adj.get(n) {
                    Some(back) if back.contains(v) => {}
                    _ => {
                        return Err(Error::AsymmetricEdge(v.to_string(), n.to_string()));
                    }
                }
            }
            clean.insert(v.clone(), ns);
        }
        if !clean.contains_key(&basepoint) {
            return Err(Error::NoSuchVertex(basepoint.to_string()));
        }
        let degree_bound = clean.values().map(|ns| ns.len() as u32).max().unwrap_or(0);
        let horizon = clean.len() as u32;
        Ok(Space {
            kind: SpaceKind::Finite(FiniteGraph { adj: clean }),
            basepoint,
            horizon,
            degree_bound,
        })
    }

    /// Builds a finite space from an undirected edge list (one `u v` pair per
    /// line, `#` comments allowed); duplicate edges collapse.
    pub fn finite_from_edge_list(text: &str) -> Result<Space> {
        let mut adj: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let (a, b) = match (it.next(), it.next()) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(Error::InvalidSpec(format!("bad edge line: `{line}`"))),
            };
            if it.next().is_some() {
                return Err(Error::InvalidSpec(format!("bad edge line: `{line}`")));
            }
            let (a, b) = (VertexId::Name(a.to_string()), VertexId::Name(b.to_string()));
            adj.entry(a.clone()).or_default().push(b.clone());
            adj.entry(b).or_default().push(a);
        }
        if adj.is_empty() {
            return Err(Error::InvalidSpec("edge list is empty".into()));
        }
        let basepoint = adj.keys().min().unwrap().clone();
        Space::finite(adj, basepoint)
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn basepoint(&self) -> &VertexId {
        &self.basepoint
    }

    /// Radius within which enumeration from the basepoint is guaranteed.
    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn with_basepoint(mut self, basepoint: VertexId) -> Result<Space> {
        if !self.contains(&basepoint) {
            return Err(Error::NoSuchVertex(basepoint.to_string()));
        }
        self.basepoint = basepoint;
        Ok(self)
    }

    pub fn with_horizon(mut self, horizon: u32) -> Space {
        self.horizon = horizon;
        self
    }

    pub fn is_staircase(&self) -> bool {
        matches!(self.kind, SpaceKind::Staircase { .. })
    }

    /// Staircase parameters, if this is a staircase.
    pub fn staircase_params(&self) -> Option<(u32, StepProfile)> {
        match self.kind {
            SpaceKind::Staircase { n_max, profile } => Some((n_max, profile)),
            _ => None,
        }
    }

    /// Whether `v` is a vertex of this space.
    pub fn contains(&self, v: &VertexId) -> bool {
        match (&self.kind, v) {
            (SpaceKind::Line, VertexId::Int(_)) => true,
            (SpaceKind::HalfLine, VertexId::Int(n)) => *n >= 0,
            (SpaceKind::Grid { dim }, VertexId::Grid(cs)) => cs.len() == *dim as usize,
            (SpaceKind::RegularTree { degree }, VertexId::Word(w)) => {
                w.iter().all(|&l| l >= 0 && (l as u8) < *degree)
                    && w.windows(2).all(|p| p[0] != p[1])
            }
            (SpaceKind::FreeGroup { rank }, VertexId::Word(w)) => {
                w.iter().all(|&l| l != 0 && l.unsigned_abs() <= *rank)
                    && w.windows(2).all(|p| p[0] != -p[1])
            }
            (SpaceKind::Staircase { n_max, profile }, VertexId::Stair { height, offset }) => {
                if *height == 0 {
                    *offset == 0
                } else {
                    *height <= *n_max && *offset <= step_len(*height, *profile)
                }
            }
            (SpaceKind::Finite(g), v) => g.adj.contains_key(v),
            _ => false,
        }
    }

    /// Sorted adjacency list. Symmetric and finite at every vertex.
    pub fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>> {
        if !self.contains(v) {
            return Err(Error::NoSuchVertex(v.to_string()));
        }
        let mut out = match (&self.kind, v) {
            (SpaceKind::Line, VertexId::Int(n)) => {
                vec![VertexId::Int(n - 1), VertexId::Int(n + 1)]
            }
            (SpaceKind::HalfLine, VertexId::Int(n)) => {
                if *n == 0 {
                    vec![VertexId::Int(1)]
                } else {
                    vec![VertexId::Int(n - 1), VertexId::Int(n + 1)]
                }
            }
            (SpaceKind::Grid { .. }, VertexId::Grid(cs)) => {
                let mut out = Vec::with_capacity(2 * cs.len());
                for i in 0..cs.len() {
                    for d in [-1i32, 1] {
                        let mut c = cs.clone();
                        c[i] += d;
                        out.push(VertexId::Grid(c));
                    }
                }
                out
            }
            (SpaceKind::RegularTree { degree }, VertexId::Word(w)) => {
                let mut out = Vec::with_capacity(*degree as usize);
                for l in 0..*degree as i8 {
                    let mut w2 = w.clone();
                    if w2.last() == Some(&l) {
                        w2.pop();
                    } else {
                        w2.push(l);
                    }
                    out.push(VertexId::Word(w2));
                }
                out
            }
            (SpaceKind::FreeGroup { rank }, VertexId::Word(w)) => {
                let mut out = Vec::with_capacity(2 * *rank as usize);
                for a in 1..=*rank as i8 {
                    for l in [a, -a] {
                        let mut w2 = w.clone();
                        if w2.last() == Some(&-l) {
                            w2.pop();
                        } else {
                            w2.push(l);
                        }
                        out.push(VertexId::Word(w2));
                    }
                }
                out
            }
            (SpaceKind::Staircase { n_max, profile }, VertexId::Stair { height, offset }) => {
                let mut out = Vec::with_capacity(3);
                let h = *height;
                let k = *offset;
                if h == 0 {
                    if *n_max >= 1 {
                        out.push(VertexId::Stair { height: 1, offset: 0 });
                        out.push(VertexId::Stair { height: 1, offset: step_len(1, *profile) });
                    }
                } else {
                    let len = step_len(h, *profile);
                    if k == 0 {
                        // Left ray vertex.
                        out.push(VertexId::Stair { height: h - 1, offset: 0 });
                        if h < *n_max {
                            out.push(VertexId::Stair { height: h + 1, offset: 0 });
                        }
                        out.push(VertexId::Stair { height: h, offset: 1 });
                    } else if k == len {
                        // Right ray vertex.
                        let below = if h == 1 { 0 } else { step_len(h - 1, *profile) };
                        out.push(VertexId::Stair { height: h - 1, offset: below });
                        if h < *n_max {
                            out.push(VertexId::Stair {
                                height: h + 1,
                                offset: step_len(h + 1, *profile),
                            });
                        }
                        out.push(VertexId::Stair { height: h, offset: k - 1 });
                    } else {
                        out.push(VertexId::Stair { height: h, offset: k - 1 });
                        out.push(VertexId::Stair { height: h, offset: k + 1 });
                    }
                }
                out
            }
            (SpaceKind::Finite(g), v) => g.adj[v].clone(),
            _ => unreachable!("contains() checked the shape"),
        };
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Exact path distance. Errors if the search leaves the horizon window.
    pub fn distance(&self, u: &VertexId, v: &VertexId) -> Result<u32> {
        if u == v {
            if !self.contains(u) {
                return Err(Error::NoSuchVertex(u.to_string()));
            }
            return Ok(0);
        }
        let cap = self.horizon.saturating_mul(2).saturating_add(1);
        let mut dist: HashMap<VertexId, u32> = HashMap::new();
        let mut queue = VecDeque::new();
        dist.insert(u.clone(), 0);
        queue.push_back(u.clone());
        while let Some(x) = queue.pop_front() {
            let d = dist[&x];
            if d >= cap {
                break;
            }
            for n in self.neighbors(&x)? {
                if n == *v {
                    return Ok(d + 1);
                }
                if !dist.contains_key(&n) {
                    dist.insert(n.clone(), d + 1);
                    queue.push_back(n);
                }
            }
        }
        Err(Error::Disconnected)
    }

    /// A shortest path from `u` to `v`, deterministic under the sorted
    /// adjacency order (lexicographically least BFS parents).
    pub fn shortest_path(&self, u: &VertexId, v: &VertexId) -> Result<Vec<VertexId>> {
        if u == v {
            if !self.contains(u) {
                return Err(Error::NoSuchVertex(u.to_string()));
            }
            return Ok(vec![u.clone()]);
        }
        let cap = self.horizon.saturating_mul(2).saturating_add(1);
        let mut parent: HashMap<VertexId, VertexId> = HashMap::new();
        let mut dist: HashMap<VertexId, u32> = HashMap::new();
        let mut queue = VecDeque::new();
        dist.insert(u.clone(), 0);
        queue.push_back(u.clone());
        'outer: while let Some(x) = queue.pop_front() {
            let d = dist[&x];
            if d >= cap {
                break;
            }
            for n in self.neighbors(&x)? {
                if !dist.contains_key(&n) {
                    dist.insert(n.clone(), d + 1);
                    parent.insert(n.clone(), x.clone());
                    if n == *v {
                        break 'outer;
                    }
                    queue.push_back(n);
                }
            }
        }
        if !parent.contains_key(v) {
            return Err(Error::Disconnected);
        }
        let mut path = vec![v.clone()];
        let mut cur = v;
        while let Some(p) = parent.get(cur) {
            path.push(p.clone());
            cur = p;
        }
        path.reverse();
        Ok(path)
    }

    /// Closed ball: exactly the vertices at distance `<= r` from `center`.
    pub fn ball(&self, center: &VertexId, r: u32) -> Result<Vec<VertexId>> {
        let w = self.window(center, r)?;
        let mut out = w.verts;
        out.sort();
        Ok(out)
    }

    /// Vertices at distance exactly `r`.
    pub fn sphere(&self, center: &VertexId, r: u32) -> Result<Vec<VertexId>> {
        let w = self.window(center, r)?;
        let mut out: Vec<VertexId> = w
            .verts
            .into_iter()
            .zip(w.dist)
            .filter(|(_, d)| *d == r)
            .map(|(v, _)| v)
            .collect();
        out.sort();
        Ok(out)
    }

    /// Materializes the ball of radius `r` about `center` with its interior
    /// adjacency, indexed for repeated component analyses.
    pub fn window(&self, center: &VertexId, r: u32) -> Result<Window> {
        if r > self.horizon {
            return Err(Error::HorizonExceeded { requested: r, horizon: self.horizon });
        }
        if !self.contains(center) {
            return Err(Error::NoSuchVertex(center.to_string()));
        }
        let mut index: HashMap<VertexId, usize> = HashMap::new();
        let mut verts = vec![center.clone()];
        let mut dist = vec![0u32];
        index.insert(center.clone(), 0);
        let mut queue = VecDeque::new();
        queue.push_back(0usize);
        while let Some(i) = queue.pop_front() {
            let d = dist[i];
            if d == r {
                continue;
            }
            for n in self.neighbors(&verts[i].clone())? {
                if !index.contains_key(&n) {
                    let j = verts.len();
                    index.insert(n.clone(), j);
                    verts.push(n);
                    dist.push(d + 1);
                    queue.push_back(j);
                }
            }
        }
        let mut adj = vec![Vec::new(); verts.len()];
        for i in 0..verts.len() {
            for n in self.neighbors(&verts[i].clone())? {
                if let Some(&j) = index.get(&n) {
                    adj[i].push(j);
                }
            }
        }
        Ok(Window { center: center.clone(), radius: r, verts, index, dist, adj })
    }

    /// Partition of `{v : R <= d(center,v) <= horizon}` into connected
    /// components, each flagged unbounded iff it meets the sphere of radius
    /// `horizon`. The removed ball is the open one, matching the ends
    /// construction.
    pub fn components_outside(
        &self,
        center: &VertexId,
        r: u32,
        horizon: u32,
    ) -> Result<Vec<OutsideComponent>> {
        if r >= horizon {
            return Err(Error::RadiusOrder { r, horizon });
        }
        let w = self.window(center, horizon)?;
        Ok(w.components_outside(r))
    }

    /// DOT rendering of the ball of radius `r` about `center`.
    pub fn to_dot(&self, center: &VertexId, r: u32) -> Result<String> {
        let w = self.window(center, r)?;
        let mut s = String::from("graph ball {\n");
        for (i, v) in w.verts.iter().enumerate() {
            s.push_str(&format!("  n{} [label=\"{}\"];\n", i, v));
        }
        for (i, ns) in w.adj.iter().enumerate() {
            for &j in ns {
                if i < j {
                    s.push_str(&format!("  n{} -- n{};\n", i, j));
                }
            }
        }
        s.push_str("}\n");
        Ok(s)
    }
}

/// Number of unit edges on `step(n)` of a staircase.
pub fn step_len(n: u32, profile: StepProfile) -> u32 {
    match profile {
        StepProfile::Quadratic => n * n,
        StepProfile::Constant => 1,
    }
}

/// A materialized ball with index maps, the workhorse behind component
/// analyses.
#[derive(Debug, Clone)]
pub struct Window {
    pub center: VertexId,
    pub radius: u32,
    /// BFS discovery order; `verts[0] == center`.
    pub verts: Vec<VertexId>,
    pub index: HashMap<VertexId, usize>,
    pub dist: Vec<u32>,
    /// Adjacency restricted to the window.
    pub adj: Vec<Vec<usize>>,
}

impl Window {
    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    /// Flood-fill partition of `{v : dist >= r}` within the window.
    pub fn components_outside(&self, r: u32) -> Vec<OutsideComponent> {
        let n = self.len();
        let active: Vec<bool> = self.dist.iter().map(|&d| d >= r).collect();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if !active[s] || comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &y in &self.adj[x] {
                    if active[y] && comp[y] == usize::MAX {
                        comp[y] = id;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
            let witness = members.iter().copied().find(|&m| self.dist[m] == self.radius);
            members.sort();
            out.push(OutsideComponent {
                representative: self.verts[members[0]].clone(),
                size: members.len(),
                unbounded: witness.is_some(),
                sphere_witness: witness.map(|m| self.verts[m].clone()),
                vertices: members.iter().map(|&m| self.verts[m].clone()).collect(),
            });
        }
        out
    }
}

/// One connected component of a ball-complement region.
#[derive(Debug, Clone, Serialize)]
pub struct OutsideComponent {
    pub representative: VertexId,
    pub size: usize,
    /// Meets the sphere at the window radius.
    pub unbounded: bool,
    pub sphere_witness: Option<VertexId>,
    pub vertices: Vec<VertexId>,
}

/// JSON space description: `{"kind": ..., "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "SpaceParams::is_empty")]
    pub params: SpaceParams,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SpaceParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u32>,
}

impl SpaceParams {
    pub fn is_empty(&self) -> bool {
        self == &SpaceParams::default()
    }
}

impl SpaceSpec {
    pub fn named(kind: &str) -> SpaceSpec {
        SpaceSpec { kind: kind.to_string(), params: SpaceParams::default() }
    }
}

/// Builds an oracle from a spec. Kinds: `line`, `halfline`, `grid-N`,
/// `regular-tree-D`, `free-group-rank-K`, `staircase` (params `n_max`,
/// optional `step: constant`), `finite-file` (params `path`).
pub fn build_space(spec: &SpaceSpec) -> Result<Space> {
    let kind = spec.kind.as_str();
    let mut space = if kind == "line" {
        Space::line()
    } else if kind == "halfline" {
        Space::half_line()
    } else if let Some(n) = kind.strip_prefix("grid-") {
        let dim: u8 =
            n.parse().map_err(|_| Error::UnknownKind(kind.to_string()))?;
        Space::grid(dim)?
    } else if let Some(d) = kind.strip_prefix("regular-tree-") {
        let degree: u8 =
            d.parse().map_err(|_| Error::UnknownKind(kind.to_string()))?;
        Space::regular_tree(degree)?
    } else if let Some(k) = kind.strip_prefix("free-group-rank-") {
        let rank: u8 =
            k.parse().map_err(|_| Error::UnknownKind(kind.to_string()))?;
        Space::free_group(rank)?
    } else if kind == "staircase" {
        let n_max = spec
            .params
            .n_max
            .ok_or_else(|| Error::InvalidSpec("staircase requires params.n_max".into()))?;
        let profile = match spec.params.step.as_deref() {
            None | Some("quadratic") => StepProfile::Quadratic,
            Some("constant") => StepProfile::Constant,
            Some(other) => {
                return Err(Error::InvalidSpec(format!("unknown step profile `{other}`")))
            }
        };
        Space::staircase(n_max, profile)?
    } else if kind == "finite-file" {
        let path = spec
            .params
            .path
            .as_ref()
            .ok_or_else(|| Error::InvalidSpec("finite-file requires params.path".into()))?;
        let text = std::fs::read_to_string(path)?;
        Space::finite_from_edge_list(&text)?
    } else {
        return Err(Error::UnknownKind(kind.to_string()));
    };
    if let Some(h) = spec.params.horizon {
        space = space.with_horizon(h);
    }
    Ok(space)
}
