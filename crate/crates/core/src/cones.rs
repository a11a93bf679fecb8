//! Metric cones over finite complexes, and the comparison between the
//! components of the base and the ends of the cone.
//!
//! Arithmetic on the cone is exact: base coordinates are rationals and every
//! adjacency decision compares exact squared distances; square roots appear
//! only in reports.

use std::collections::HashMap;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::ends::{ends_profile, stabilized_end_count, StabilizedCount};
use crate::error::{Error, Result};
use crate::space::{Space, VertexId};

pub type Coord = Ratio<i128>;

/// A finite simplicial complex in `R^n` with rational vertex coordinates.
/// Only the 1-skeleton matters for components and ends; higher simplices
/// contribute their edges.
#[derive(Debug, Clone)]
pub struct FiniteComplex {
    pub dim: usize,
    pub vertices: Vec<Vec<Coord>>,
    pub edges: Vec<(usize, usize)>,
}

/// JSON shape: coordinates are integers or `"p/q"` strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexSpec {
    pub vertices: Vec<Vec<serde_json::Value>>,
    #[serde(default)]
    pub simplices: Vec<Vec<usize>>,
}

fn parse_coord(v: &serde_json::Value) -> Result<Coord> {
    if let Some(n) = v.as_i64() {
        return Ok(Ratio::from_integer(n as i128));
    }
    if let Some(s) = v.as_str() {
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let p: i128 =
            p.parse().map_err(|_| Error::InvalidComplex(format!("bad coordinate `{s}`")))?;
        let q: i128 =
            q.parse().map_err(|_| Error::InvalidComplex(format!("bad coordinate `{s}`")))?;
        if q == 0 {
            return Err(Error::InvalidComplex("zero denominator".into()));
        }
        return Ok(Ratio::new(p, q));
    }
    Err(Error::InvalidComplex(format!("bad coordinate `{v}`")))
}

impl FiniteComplex {
    pub fn from_spec(spec: &ComplexSpec) -> Result<FiniteComplex> {
        if spec.vertices.is_empty() {
            return Err(Error::InvalidComplex("no vertices".into()));
        }
        let dim = spec.vertices[0].len();
        if dim == 0 {
            return Err(Error::InvalidComplex("zero ambient dimension".into()));
        }
        let mut vertices = Vec::with_capacity(spec.vertices.len());
        for row in &spec.vertices {
            if row.len() != dim {
                return Err(Error::InvalidComplex("ragged coordinate rows".into()));
            }
            vertices.push(row.iter().map(parse_coord).collect::<Result<Vec<_>>>()?);
        }
        let mut edges = Vec::new();
        for simplex in &spec.simplices {
            for (a, &i) in simplex.iter().enumerate() {
                if i >= vertices.len() {
                    return Err(Error::InvalidComplex(format!("vertex index {i} out of range")));
                }
                for &j in &simplex[a + 1..] {
                    edges.push((i.min(j), i.max(j)));
                }
            }
        }
        edges.sort();
        edges.dedup();
        Ok(FiniteComplex { dim, vertices, edges })
    }

    /// Convenience: points and segments with integer coordinates.
    pub fn from_points_and_segments(
        dim: usize,
        points: &[&[i128]],
        segments: &[(usize, usize)],
    ) -> FiniteComplex {
        let vertices = points
            .iter()
            .map(|p| p.iter().map(|&c| Ratio::from_integer(c)).collect())
            .collect();
        FiniteComplex { dim, vertices, edges: segments.to_vec() }
    }

    /// Union-find partition of the vertices by edges; returns per-vertex
    /// component labels (0-based, in first-appearance order) and the count.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut labels = vec![usize::MAX; n];
        let mut count = 0;
        for v in 0..n {
            let r = find(&mut parent, v);
            if labels[r] == usize::MAX {
                labels[r] = count;
                count += 1;
            }
            labels[v] = labels[r];
        }
        (labels, count)
    }
}

/// A point `(h·x, h)` of the metric cone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConePoint {
    pub base: Vec<Coord>,
    pub height: Coord,
}

/// Exact squared Euclidean distance in `R^{n+1}` between `(h·x, h)` and
/// `(h'·x', h')`.
pub fn cone_distance_sq(p: &ConePoint, q: &ConePoint) -> Result<Coord> {
    if p.base.len() != q.base.len() {
        return Err(Error::InvalidComplex("ambient dimension mismatch".into()));
    }
    let mut acc: Coord = (p.height - q.height) * (p.height - q.height);
    for (a, b) in p.base.iter().zip(&q.base) {
        let d = p.height * a - q.height * b;
        acc += d * d;
    }
    Ok(acc)
}

pub fn cone_distance(p: &ConePoint, q: &ConePoint) -> Result<f64> {
    Ok(cone_distance_sq(p, q)?.to_f64().unwrap_or(f64::NAN).sqrt())
}

/// The canonical ray over a base point: `h -> (h·x, h)` above the
/// truncation, clamped to `(R·x, R)` below it. Sampled at integer heights
/// `0..=h_max`.
pub fn point_ray(x: &[Coord], truncation: u32, h_max: u32) -> Vec<ConePoint> {
    (0..=h_max)
        .map(|h| {
            let h = Ratio::from_integer(h as i128).max(Ratio::from_integer(truncation as i128));
            ConePoint { base: x.to_vec(), height: h }
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct MeshStats {
    pub points: usize,
    pub edges: usize,
    pub truncation: u32,
    pub horizon: u32,
    /// Numerator/denominator of the base rescale factor.
    pub scale: (i128, i128),
    /// Squared connection radius (exact comparison constant).
    pub connect_sq: (i128, i128),
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentEnds {
    pub base_component: usize,
    pub stabilized: StabilizedCount,
    pub r_max: u32,
    pub graph_horizon: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConeReport {
    /// |pi_0(X)| by union-find on the base.
    pub pi0: usize,
    /// Connected components of the mesh graph.
    pub mesh_components: usize,
    pub per_component: Vec<ComponentEnds>,
    /// Sum of stabilized counts, when all components stabilize.
    pub ends_total: Option<usize>,
    pub pass: bool,
    pub mesh: MeshStats,
}

/// The discretized cone: a finite unit-scale graph on layer samples.
pub struct ConeMesh {
    pub space: Space,
    pub points: Vec<(u32, Vec<Coord>, usize)>, // (layer, base, base component)
    pub stats: MeshStats,
}

const CONNECT_SQ_NUM: i128 = 9;
const CONNECT_SQ_DEN: i128 = 4;

/// Builds the mesh: per-layer samples on every edge (about `h·L·mesh` per
/// unit base length at layer `h`, endpoints always included), joined when
/// the exact cone distance is at most 3/2. The base is rescaled so all
/// coordinates have norm at most 1/2, which makes consecutive-layer hops
/// reachable; layers below `connect/separation` are cut to exclude bridges
/// between distinct base components.
pub fn build_cone_mesh(x: &FiniteComplex, horizon: u32, mesh: f64) -> Result<ConeMesh> {
    if mesh <= 0.0 {
        return Err(Error::InvalidComplex("mesh factor must be positive".into()));
    }
    let (labels, _) = x.components();

    // Rescale so every vertex norm is at most 1/2.
    let max_norm_sq = x
        .vertices
        .iter()
        .map(|v| v.iter().map(|c| c * c).sum::<Coord>())
        .max()
        .unwrap_or_else(Coord::zero);
    let bound = max_norm_sq.to_f64().unwrap_or(0.0).sqrt();
    let scale_den = 2 * (bound.ceil() as i128).max(1);
    let scale = Ratio::new(1, scale_den);
    let verts: Vec<Vec<Coord>> =
        x.vertices.iter().map(|v| v.iter().map(|c| c * scale).collect()).collect();

    // Separation between distinct components, measured between segment
    // features (f64 is fine here: rounding down only raises the truncation).
    let mut separation = f64::INFINITY;
    let feat: Vec<(usize, Vec<f64>, Vec<f64>)> = {
        let as_f64 =
            |v: &Vec<Coord>| v.iter().map(|c| c.to_f64().unwrap()).collect::<Vec<f64>>();
        let mut f: Vec<(usize, Vec<f64>, Vec<f64>)> = Vec::new();
        for &(a, b) in &x.edges {
            f.push((labels[a], as_f64(&verts[a]), as_f64(&verts[b])));
        }
        let isolated: Vec<usize> = (0..verts.len())
            .filter(|&v| !x.edges.iter().any(|&(a, b)| a == v || b == v))
            .collect();
        for v in isolated {
            f.push((labels[v], as_f64(&verts[v]), as_f64(&verts[v])));
        }
        f
    };
    for i in 0..feat.len() {
        for j in (i + 1)..feat.len() {
            if feat[i].0 != feat[j].0 {
                separation = separation.min(segment_distance(
                    &feat[i].1, &feat[i].2, &feat[j].1, &feat[j].2,
                ));
            }
        }
    }
    let connect = (CONNECT_SQ_NUM as f64 / CONNECT_SQ_DEN as f64).sqrt();
    let truncation = if separation.is_finite() {
        if separation <= 0.0 {
            return Err(Error::MeshTooCoarse(
                "distinct components touch; cone layers cannot separate them".into(),
            ));
        }
        ((connect / separation).floor() as u32 + 1).max(1)
    } else {
        1
    };
    if truncation + 10 >= horizon {
        return Err(Error::MeshTooCoarse(format!(
            "truncation {truncation} leaves fewer than 10 layers below horizon {horizon}"
        )));
    }

    // Sample every layer.
    let mut key_index: HashMap<(u32, Vec<Coord>), usize> = HashMap::new();
    let mut points: Vec<(u32, Vec<Coord>, usize)> = Vec::new();
    let push = |key_index: &mut HashMap<(u32, Vec<Coord>), usize>,
                    points: &mut Vec<(u32, Vec<Coord>, usize)>,
                    h: u32,
                    base: Vec<Coord>,
                    comp: usize| {
        key_index.entry((h, base.clone())).or_insert_with(|| {
            points.push((h, base, comp));
            points.len() - 1
        });
    };
    for h in truncation..=horizon {
        for (v, coords) in verts.iter().enumerate() {
            push(&mut key_index, &mut points, h, coords.clone(), labels[v]);
        }
        for &(a, b) in &x.edges {
            let len = {
                let d2: f64 = verts[a]
                    .iter()
                    .zip(&verts[b])
                    .map(|(p, q)| {
                        let d = (p - q).to_f64().unwrap();
                        d * d
                    })
                    .sum();
                d2.sqrt()
            };
            let segs = ((h as f64 * len * mesh).ceil() as i128).max(1);
            // Spacing contract: adjacent samples within 1 on this layer.
            if h as f64 * len / segs as f64 > 1.0 {
                return Err(Error::MeshTooCoarse(format!(
                    "layer {h}: spacing {} exceeds 1 on an edge of length {len}",
                    h as f64 * len / segs as f64
                )));
            }
            for i in 1..segs {
                let t = Ratio::new(i, segs);
                let base: Vec<Coord> = verts[a]
                    .iter()
                    .zip(&verts[b])
                    .map(|(p, q)| p + (q - p) * t)
                    .collect();
                push(&mut key_index, &mut points, h, base, labels[a]);
            }
        }
    }

    // Adjacency: same-layer and consecutive-layer pairs within the exact
    // connection radius.
    let connect_sq = Ratio::new(CONNECT_SQ_NUM, CONNECT_SQ_DEN);
    let mut by_layer: HashMap<u32, Vec<usize>> = HashMap::new();
    for (i, (h, _, _)) in points.iter().enumerate() {
        by_layer.entry(*h).or_default().push(i);
    }
    let name = |i: usize| VertexId::Name(format!("p{i}"));
    let mut adj: HashMap<VertexId, Vec<VertexId>> =
        (0..points.len()).map(|i| (name(i), Vec::new())).collect();
    let mut edge_count = 0usize;
    let cone_pt = |i: usize| ConePoint {
        base: points[i].1.clone(),
        height: Ratio::from_integer(points[i].0 as i128),
    };
    for h in truncation..=horizon {
        let this = by_layer.get(&h).cloned().unwrap_or_default();
        let next = by_layer.get(&(h + 1)).cloned().unwrap_or_default();
        for (a_pos, &i) in this.iter().enumerate() {
            for &j in &this[a_pos + 1..] {
                if cone_distance_sq(&cone_pt(i), &cone_pt(j))? <= connect_sq {
                    adj.get_mut(&name(i)).unwrap().push(name(j));
                    adj.get_mut(&name(j)).unwrap().push(name(i));
                    edge_count += 1;
                }
            }
            for &j in &next {
                if cone_distance_sq(&cone_pt(i), &cone_pt(j))? <= connect_sq {
                    adj.get_mut(&name(i)).unwrap().push(name(j));
                    adj.get_mut(&name(j)).unwrap().push(name(i));
                    edge_count += 1;
                }
            }
        }
    }
    let base_vertex = name(0);
    let space = Space::finite(adj, base_vertex)?;
    let stats = MeshStats {
        points: points.len(),
        edges: edge_count,
        truncation,
        horizon,
        scale: (1, scale_den),
        connect_sq: (CONNECT_SQ_NUM, CONNECT_SQ_DEN),
    };
    Ok(ConeMesh { space, points, stats })
}

/// Minimum distance between two segments (possibly degenerate) in `R^n`,
/// by dense parameter sampling plus endpoint projections. Used only to pick
/// the truncation layer; any underestimate only raises it.
fn segment_distance(a0: &[f64], a1: &[f64], b0: &[f64], b1: &[f64]) -> f64 {
    let lerp = |p: &[f64], q: &[f64], t: f64| -> Vec<f64> {
        p.iter().zip(q).map(|(x, y)| x + (y - x) * t).collect()
    };
    let dist = |p: &[f64], q: &[f64]| -> f64 {
        p.iter().zip(q).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
    };
    let steps = 64;
    let mut best = f64::INFINITY;
    for i in 0..=steps {
        let p = lerp(a0, a1, i as f64 / steps as f64);
        for j in 0..=steps {
            let q = lerp(b0, b1, j as f64 / steps as f64);
            best = best.min(dist(&p, &q));
        }
    }
    best
}

/// Compares `|pi_0(X)|` with the stabilized ends counts of the mesh
/// discretization of the cone: one profile per mesh component, each
/// expected to stabilize at one end.
pub fn verify_cone_bijection(
    x: &FiniteComplex,
    r_max: u32,
    horizon: u32,
    mesh: f64,
) -> Result<ConeReport> {
    let (_, pi0) = x.components();
    let cone = build_cone_mesh(x, horizon, mesh)?;
    let space = &cone.space;

    // Mesh components, each with its lowest-layer basepoint.
    let all: Vec<VertexId> =
        (0..cone.points.len()).map(|i| VertexId::Name(format!("p{i}"))).collect();
    let mut seen: HashMap<VertexId, usize> = HashMap::new();
    let mut basepoints: Vec<VertexId> = Vec::new();
    for (i, v) in all.iter().enumerate() {
        if seen.contains_key(v) {
            continue;
        }
        let comp_id = basepoints.len();
        // Flood fill from v.
        let mut stack = vec![v.clone()];
        seen.insert(v.clone(), comp_id);
        let mut lowest = (cone.points[i].0, v.clone());
        while let Some(u) = stack.pop() {
            for n in space.neighbors(&u)? {
                if !seen.contains_key(&n) {
                    seen.insert(n.clone(), comp_id);
                    let idx: usize = n.to_string()[1..].parse().unwrap();
                    let h = cone.points[idx].0;
                    if h < lowest.0 {
                        lowest = (h, n.clone());
                    }
                    stack.push(n);
                }
            }
        }
        basepoints.push(lowest.1);
    }
    let mesh_components = basepoints.len();

    let mut per_component = Vec::new();
    let mut ends_total = Some(0usize);
    for (comp_id, bp) in basepoints.iter().enumerate() {
        let w = space.window(bp, space.horizon())?;
        let ecc = w.dist.iter().copied().max().unwrap_or(0);
        let graph_horizon = ecc;
        let r = r_max.min(graph_horizon.saturating_sub(1)).max(1);
        if r + 1 > graph_horizon {
            return Err(Error::MeshTooCoarse(format!(
                "mesh component {comp_id} too shallow for an ends profile"
            )));
        }
        let profile = ends_profile(space, bp, r, graph_horizon)?;
        let stabilized = stabilized_end_count(&profile)?;
        match &stabilized {
            StabilizedCount::Stable { count } => {
                ends_total = ends_total.map(|t| t + count);
            }
            StabilizedCount::Growth { .. } => ends_total = None,
        }
        per_component.push(ComponentEnds {
            base_component: comp_id,
            stabilized,
            r_max: r,
            graph_horizon,
        });
    }

    let pass = mesh_components == pi0 && ends_total == Some(pi0);
    Ok(ConeReport {
        pi0,
        mesh_components,
        per_component,
        ends_total,
        pass,
        mesh: cone.stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i128) -> Coord {
        Ratio::from_integer(n)
    }

    #[test]
    fn component_counts() {
        let single = FiniteComplex::from_points_and_segments(1, &[&[0], &[1]], &[(0, 1)]);
        assert_eq!(single.components().1, 1);
        let two_edges = FiniteComplex::from_points_and_segments(
            1,
            &[&[0], &[1], &[4], &[5]],
            &[(0, 1), (2, 3)],
        );
        assert_eq!(two_edges.components().1, 2);
    }

    #[test]
    fn planted_components_recovered() {
        // A chain of segments per component, flood-fill oracle style.
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for k in 1..=6usize {
            let mut points: Vec<Vec<i128>> = Vec::new();
            let mut segments = Vec::new();
            for c in 0..k {
                let n = rng.gen_range(1..5usize);
                let start = points.len();
                for i in 0..n {
                    points.push(vec![100 * c as i128 + i as i128, 0]);
                }
                for i in 0..n.saturating_sub(1) {
                    segments.push((start + i, start + i + 1));
                }
            }
            let refs: Vec<&[i128]> = points.iter().map(|p| p.as_slice()).collect();
            let x = FiniteComplex::from_points_and_segments(2, &refs, &segments);
            assert_eq!(x.components().1, k);
        }
    }

    #[test]
    fn cone_distance_examples() {
        // Same layer: h * |x - x'|.
        let p = ConePoint { base: vec![rat(0)], height: rat(4) };
        let q = ConePoint { base: vec![rat(1)], height: rat(4) };
        assert_eq!(cone_distance_sq(&p, &q).unwrap(), rat(16));
        // Along a point ray: |h - h'| * sqrt(|x|^2 + 1).
        let a = ConePoint { base: vec![rat(2)], height: rat(3) };
        let b = ConePoint { base: vec![rat(2)], height: rat(7) };
        assert_eq!(cone_distance_sq(&a, &b).unwrap(), rat(16 * 5));
        // (0,0) to (3,3): sqrt(18).
        let o = ConePoint { base: vec![rat(0)], height: rat(0) };
        let t = ConePoint { base: vec![rat(1)], height: rat(3) };
        assert_eq!(cone_distance_sq(&o, &t).unwrap(), rat(18));
        assert!((cone_distance(&o, &t).unwrap() - 18f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn point_ray_clamps_and_steps() {
        let x = vec![Ratio::new(1, 2)];
        let ray = point_ray(&x, 3, 20);
        for (h, p) in ray.iter().enumerate().take(4) {
            let _ = h;
            assert_eq!(p.height, rat(3));
        }
        // Above the truncation consecutive samples are sqrt(|x|^2+1) apart.
        let expect = Ratio::new(1, 4) + rat(1);
        for h in 3..20 {
            let d = cone_distance_sq(&ray[h], &ray[h + 1]).unwrap();
            assert_eq!(d, expect, "at h={h}");
        }
    }

    #[test]
    fn interval_cone_has_one_end() {
        let x = FiniteComplex::from_points_and_segments(1, &[&[0], &[1]], &[(0, 1)]);
        let rep = verify_cone_bijection(&x, 10, 30, 1.0).unwrap();
        assert_eq!(rep.pi0, 1);
        assert!(rep.pass, "report: {rep:?}");
        assert_eq!(rep.ends_total, Some(1));
    }

    #[test]
    fn two_points_give_two_ends() {
        let x = FiniteComplex::from_points_and_segments(1, &[&[0], &[1]], &[]);
        let rep = verify_cone_bijection(&x, 10, 40, 1.0).unwrap();
        assert_eq!(rep.pi0, 2);
        assert_eq!(rep.mesh_components, 2);
        assert!(rep.pass, "report: {rep:?}");
    }

    #[test]
    fn mesh_connected_iff_base_connected() {
        let conn = FiniteComplex::from_points_and_segments(
            2,
            &[&[0, 0], &[1, 0], &[1, 1]],
            &[(0, 1), (1, 2)],
        );
        let m = build_cone_mesh(&conn, 25, 1.0).unwrap();
        let w = m.space.window(m.space.basepoint(), m.space.horizon()).unwrap();
        assert_eq!(w.len(), m.points.len(), "connected base gives connected mesh");

        let split = FiniteComplex::from_points_and_segments(1, &[&[0], &[3]], &[]);
        let m = build_cone_mesh(&split, 30, 1.0).unwrap();
        let w = m.space.window(m.space.basepoint(), m.space.horizon()).unwrap();
        assert!(w.len() < m.points.len(), "split base keeps the mesh split");
    }

    #[test]
    fn too_close_components_need_deeper_horizon() {
        // Separation shrinks after rescaling; a shallow horizon must be
        // rejected rather than silently bridged.
        let x = FiniteComplex::from_points_and_segments(1, &[&[0], &[40]], &[]);
        assert!(matches!(
            verify_cone_bijection(&x, 5, 12, 1.0),
            Err(Error::MeshTooCoarse(_))
        ));
    }

    #[test]
    fn complex_spec_parsing() {
        let js = r#"{"vertices": [[0], ["1/2"]], "simplices": [[0, 1]]}"#;
        let spec: ComplexSpec = serde_json::from_str(js).unwrap();
        let x = FiniteComplex::from_spec(&spec).unwrap();
        assert_eq!(x.vertices[1][0], Ratio::new(1, 2));
        assert_eq!(x.edges, vec![(0, 1)]);
        let bad = r#"{"vertices": [[0]], "simplices": [[0, 5]]}"#;
        let spec: ComplexSpec = serde_json::from_str(bad).unwrap();
        assert!(FiniteComplex::from_spec(&spec).is_err());
    }
}
