//! Ends profiles and end-equivalence of rays.
//!
//! The census at radius `R` counts connected components of
//! `{v : R <= d(x0, v) <= horizon}`; a component is unbounded when it meets
//! the sphere at the horizon. Counts for all radii come from a single BFS
//! window and one decreasing-radius union-find sweep: shrinking the removed
//! ball only ever merges components, never splits them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ray::VertexRay;
use crate::space::{Space, VertexId, Window};

#[derive(Debug, Clone, Serialize)]
pub struct UnboundedComponent {
    pub representative: VertexId,
    pub sphere_witness: VertexId,
    pub size: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RadiusCensus {
    pub radius: u32,
    pub unbounded: Vec<UnboundedComponent>,
    pub bounded: usize,
}

impl RadiusCensus {
    pub fn count(&self) -> usize {
        self.unbounded.len()
    }
}

/// Per-radius census of unbounded complement components.
#[derive(Debug, Clone, Serialize)]
pub struct EndsProfile {
    pub basepoint: VertexId,
    pub horizon: u32,
    pub radii: Vec<RadiusCensus>,
}

impl EndsProfile {
    pub fn counts(&self) -> Vec<usize> {
        self.radii.iter().map(|r| r.count()).collect()
    }
}

struct Dsu {
    parent: Vec<usize>,
    rank: Vec<u8>,
    witness: Vec<Option<usize>>,
}

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu { parent: (0..n).collect(), rank: vec![0; n], witness: vec![None; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Returns the merged root, or `None` if already joined.
    fn union(&mut self, a: usize, b: usize) -> Option<usize> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        let (big, small) = if self.rank[ra] >= self.rank[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[small] = big;
        if self.rank[big] == self.rank[small] {
            self.rank[big] += 1;
        }
        if self.witness[big].is_none() {
            self.witness[big] = self.witness[small];
        }
        Some(big)
    }
}

/// Census of unbounded complement components for every radius `1..=r_max`.
pub fn ends_profile(space: &Space, x0: &VertexId, r_max: u32, horizon: u32) -> Result<EndsProfile> {
    if r_max >= horizon {
        return Err(Error::RadiusOrder { r: r_max, horizon });
    }
    let w = space.window(x0, horizon)?;
    let n = w.len();
    let mut by_dist: Vec<Vec<usize>> = vec![Vec::new(); horizon as usize + 1];
    for i in 0..n {
        by_dist[w.dist[i] as usize].push(i);
    }
    let mut dsu = Dsu::new(n);
    let mut active = vec![false; n];
    let activate = |dsu: &mut Dsu, active: &mut Vec<bool>, i: usize| {
        active[i] = true;
        if w.dist[i] == horizon {
            dsu.witness[i] = Some(i);
        }
        for &j in &w.adj[i] {
            if active[j] {
                dsu.union(i, j);
            }
        }
    };

    for d in (r_max as usize)..=(horizon as usize) {
        for i in by_dist[d].clone() {
            activate(&mut dsu, &mut active, i);
        }
    }

    let mut radii = Vec::with_capacity(r_max as usize);
    for r in (1..=r_max).rev() {
        if r < r_max {
            for i in by_dist[r as usize].clone() {
                activate(&mut dsu, &mut active, i);
            }
        }
        radii.push(census(&w, &mut dsu, &active, r));
    }
    radii.reverse();
    Ok(EndsProfile { basepoint: x0.clone(), horizon, radii })
}

fn census(w: &Window, dsu: &mut Dsu, active: &[bool], radius: u32) -> RadiusCensus {
    use std::collections::HashMap;
    let mut sizes: HashMap<usize, usize> = HashMap::new();
    for i in 0..w.len() {
        if active[i] {
            *sizes.entry(dsu.find(i)).or_insert(0) += 1;
        }
    }
    let mut unbounded = Vec::new();
    let mut bounded = 0usize;
    let mut roots: Vec<usize> = sizes.keys().copied().collect();
    roots.sort();
    for root in roots {
        match dsu.witness[root] {
            Some(wi) => unbounded.push(UnboundedComponent {
                representative: w.verts[root].clone(),
                sphere_witness: w.verts[wi].clone(),
                size: sizes[&root],
            }),
            None => bounded += 1,
        }
    }
    RadiusCensus { radius, unbounded, bounded }
}

/// Stabilization verdict for a profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StabilizedCount {
    /// The count equals `n` on the trailing half of the tested radii.
    Stable { count: usize },
    /// No stabilization: the observed growth sequence.
    Growth { counts: Vec<usize> },
}

const MIN_PROFILE_RADII: usize = 10;

/// Finite detection of the end count: stable value on the trailing half of
/// the profile, else a growth flag.
pub fn stabilized_end_count(profile: &EndsProfile) -> Result<StabilizedCount> {
    let counts = profile.counts();
    if counts.len() < MIN_PROFILE_RADII {
        return Err(Error::ProfileTooShort(counts.len(), MIN_PROFILE_RADII));
    }
    let tail = &counts[counts.len() / 2..];
    let last = *tail.last().unwrap();
    if tail.iter().all(|&c| c == last) {
        Ok(StabilizedCount::Stable { count: last })
    } else {
        Ok(StabilizedCount::Growth { counts })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EndRelation {
    Same,
    Different,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct RadiusEvidence {
    pub radius: u32,
    /// k-path from a tail sample of the first ray to one of the second,
    /// avoiding the open ball, when the tails connect.
    pub witness: Option<Vec<VertexId>>,
    pub separating: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Verdict of the k-path end-equivalence criterion.
#[derive(Debug, Clone, Serialize)]
pub struct EndVerdict {
    pub relation: EndRelation,
    pub k: u32,
    pub evidence: Vec<RadiusEvidence>,
}

#[derive(Debug, Clone, Copy)]
pub struct SameEndParams {
    pub r_max: u32,
    pub horizon: u32,
    pub k: u32,
}

/// Decides end-equivalence of two rays on a window: for each radius
/// `R <= r_max`, the tails must be joined by a k-path avoiding the open
/// R-ball. Properness of each ray is certified on the window first; failure
/// yields an inconclusive verdict, not a guess.
pub fn same_end(
    space: &Space,
    x0: &VertexId,
    r: &VertexRay,
    r2: &VertexRay,
    params: SameEndParams,
) -> Result<EndVerdict> {
    let SameEndParams { r_max, horizon, k } = params;
    if r_max >= horizon {
        return Err(Error::RadiusOrder { r: r_max, horizon });
    }
    if k == 0 {
        return Err(Error::InvalidSpec("k must be positive".into()));
    }
    let w = space.window(x0, horizon)?;

    // Usable sample prefix: samples inside the window.
    let usable = |ray: &VertexRay| -> Vec<usize> {
        ray.samples()
            .iter()
            .map(|(_, v)| w.index.get(v).copied())
            .take_while(|i| i.is_some())
            .map(|i| i.unwrap())
            .collect()
    };
    let a = usable(r);
    let b = usable(r2);

    let mut evidence = Vec::new();
    let mut any_inconclusive = false;
    let mut any_separating = false;
    for radius in 1..=r_max {
        match radius_evidence(space, &w, &a, &b, radius, k)? {
            Ok(ev) => {
                any_separating |= ev.separating;
                evidence.push(ev);
            }
            Err(note) => {
                any_inconclusive = true;
                evidence.push(RadiusEvidence {
                    radius,
                    witness: None,
                    separating: false,
                    note: Some(note),
                });
            }
        }
    }
    let relation = if any_separating {
        EndRelation::Different
    } else if any_inconclusive {
        EndRelation::Inconclusive
    } else {
        EndRelation::Same
    };
    Ok(EndVerdict { relation, k, evidence })
}

/// Per-radius analysis; `Err(note)` marks an inconclusive radius.
fn radius_evidence(
    space: &Space,
    w: &Window,
    a: &[usize],
    b: &[usize],
    radius: u32,
    k: u32,
) -> Result<std::result::Result<RadiusEvidence, String>> {
    // Tail threshold: last sample inside the open ball.
    let tail_start = |samples: &[usize]| -> Option<usize> {
        let t = samples.iter().rposition(|&i| w.dist[i] < radius).map_or(0, |p| p + 1);
        if t >= samples.len() {
            None
        } else {
            Some(t)
        }
    };
    let (ta, tb) = match (tail_start(a), tail_start(b)) {
        (Some(x), Some(y)) => (x, y),
        _ => {
            return Ok(Err(format!(
                "a ray does not escape the ball of radius {radius} on the window"
            )))
        }
    };

    // Consecutive tail samples must hop at most k, else the tail component
    // is not well-defined for this k.
    for samples in [&a[ta..], &b[tb..]] {
        for pair in samples.windows(2) {
            let d = space.distance(&w.verts[pair[0]], &w.verts[pair[1]])?;
            if d > k {
                return Ok(Err(format!("tail sample hop {d} exceeds k={k}")));
            }
        }
    }

    let (comp, _) = k_components(space, w, radius, k)?;
    let ca = comp[a[ta]];
    let cb = comp[b[tb]];
    debug_assert!(ca != usize::MAX && cb != usize::MAX);
    if ca != cb {
        return Ok(Ok(RadiusEvidence {
            radius,
            witness: None,
            separating: true,
            note: None,
        }));
    }
    // Extract a witness k-path between the latest common tail samples.
    let start = a[ta.max(tb).min(a.len() - 1)];
    let goal = b[ta.max(tb).min(b.len() - 1)];
    let path = k_path(space, w, radius, k, start, goal)?;
    Ok(Ok(RadiusEvidence { radius, witness: Some(path), separating: false, note: None }))
}

/// Component labels of the k-hop graph on `{dist >= radius}`.
fn k_components(space: &Space, w: &Window, radius: u32, k: u32) -> Result<(Vec<usize>, usize)> {
    let n = w.len();
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for s in 0..n {
        if w.dist[s] < radius || comp[s] != usize::MAX {
            continue;
        }
        comp[s] = count;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for y in k_neighbors(space, w, radius, k, x)? {
                if comp[y] == usize::MAX {
                    comp[y] = count;
                    stack.push(y);
                }
            }
        }
        count += 1;
    }
    Ok((comp, count))
}

/// Region vertices within ambient distance k of `x` (the ambient path may
/// cut through the removed ball; only the endpoints must avoid it).
fn k_neighbors(space: &Space, w: &Window, radius: u32, k: u32, x: usize) -> Result<Vec<usize>> {
    if k == 1 {
        return Ok(w.adj[x].iter().copied().filter(|&y| w.dist[y] >= radius).collect());
    }
    use std::collections::{HashMap, VecDeque};
    let mut out = Vec::new();
    let mut dist: HashMap<VertexId, u32> = HashMap::new();
    let start = w.verts[x].clone();
    dist.insert(start.clone(), 0);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        if d == k {
            continue;
        }
        for nb in space.neighbors(&v)? {
            if !dist.contains_key(&nb) {
                dist.insert(nb.clone(), d + 1);
                if let Some(&j) = w.index.get(&nb) {
                    if w.dist[j] >= radius && j != x {
                        out.push(j);
                    }
                }
                queue.push_back(nb);
            }
        }
    }
    Ok(out)
}

/// BFS k-path between two region vertices.
fn k_path(
    space: &Space,
    w: &Window,
    radius: u32,
    k: u32,
    start: usize,
    goal: usize,
) -> Result<Vec<VertexId>> {
    use std::collections::{HashMap, VecDeque};
    let mut parent: HashMap<usize, usize> = HashMap::new();
    parent.insert(start, start);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        if x == goal {
            let mut path = vec![goal];
            let mut cur = goal;
            while parent[&cur] != cur {
                cur = parent[&cur];
                path.push(cur);
            }
            path.reverse();
            return Ok(path.into_iter().map(|i| w.verts[i].clone()).collect());
        }
        for y in k_neighbors(space, w, radius, k, x)? {
            parent.entry(y).or_insert_with(|| {
                queue.push_back(y);
                x
            });
        }
    }
    Err(Error::Disconnected)
}
