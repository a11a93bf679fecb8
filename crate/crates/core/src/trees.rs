//! Locally finite geometric trees: unique geodesics, the rooted vertex
//! order, chain extraction, the coarse-path-component decision procedure,
//! and explicit lattice homotopy witnesses.

use serde::Serialize;

use crate::coarsemaps::geodesic_interpolate;
use crate::error::{Error, Result};
use crate::homotopy::LatticeHomotopy;
use crate::ray::VertexRay;
use crate::space::{Space, VertexId};

/// A space certified acyclic on a validation window, with a root.
#[derive(Debug, Clone)]
pub struct TreeOracle {
    space: Space,
    root: VertexId,
}

impl TreeOracle {
    /// Wraps a space after a BFS cycle check out to `check_radius`: every
    /// discovered vertex must have a unique parent.
    pub fn new(space: Space, root: VertexId, check_radius: u32) -> Result<TreeOracle> {
        let w = space.window(&root, check_radius)?;
        for i in 0..w.len() {
            for &j in &w.adj[i] {
                // A non-tree edge joins vertices whose depths differ by != 1,
                // or gives a second parent.
                if w.dist[i] == w.dist[j] {
                    return Err(Error::CycleDetected(w.verts[i].to_string()));
                }
            }
            let parents =
                w.adj[i].iter().filter(|&&j| w.dist[j] + 1 == w.dist[i]).count();
            if w.dist[i] > 0 && parents != 1 {
                return Err(Error::CycleDetected(w.verts[i].to_string()));
            }
        }
        Ok(TreeOracle { space, root })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn root(&self) -> &VertexId {
        &self.root
    }

    /// The unique simple path from `u` to `v`.
    pub fn geodesic(&self, u: &VertexId, v: &VertexId) -> Result<Vec<VertexId>> {
        self.space.shortest_path(u, v)
    }

    pub fn distance(&self, u: &VertexId, v: &VertexId) -> Result<u32> {
        self.space.distance(u, v)
    }

    pub fn depth(&self, v: &VertexId) -> Result<u32> {
        self.space.distance(&self.root, v)
    }

    /// Deepest common vertex of the root geodesics to `u` and `v`.
    pub fn meet(&self, u: &VertexId, v: &VertexId) -> Result<VertexId> {
        let pu = self.geodesic(&self.root, u)?;
        let pv = self.geodesic(&self.root, v)?;
        let common = pu.iter().zip(&pv).take_while(|(a, b)| a == b).count();
        Ok(pu[common - 1].clone())
    }

    /// Whether `anc` lies on the root geodesic to `v`.
    pub fn is_ancestor(&self, anc: &VertexId, v: &VertexId) -> Result<bool> {
        Ok(self.depth(anc)? + self.distance(anc, v)? == self.depth(v)?)
    }
}

/// A rooted geodesic chain: `vertices[d]` sits at depth `d`, consecutive
/// vertices adjacent, starting at the root. Rooted infinite order-convex
/// chains correspond to rooted geodesic rays; at desk scale the chain is
/// maximal within the window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeodesicRayChain {
    pub vertices: Vec<VertexId>,
}

impl GeodesicRayChain {
    pub fn tip_depth(&self) -> u32 {
        (self.vertices.len() - 1) as u32
    }

    pub fn as_ray(&self) -> VertexRay {
        VertexRay::dense(self.vertices.clone()).expect("chain is nonempty")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainExtraction {
    pub chain: GeodesicRayChain,
    /// Depth of the ray's final sample: the certified escape radius.
    pub tail_depth: u32,
}

/// Extracts the unique root-rooted geodesic chain inside the sampled image
/// of a unit-step rooted ray.
///
/// When several maximal chains reach the window boundary, the tail evidence
/// of the input decides: at each vertex the child whose subtree holds the
/// latest sample wins; a tie is reported as ambiguity rather than resolved
/// by fiat. `boundary` is the depth the extraction must certify; a ray whose
/// final sample is shallower fails with properness evidence.
pub fn underlying_geodesic_ray(
    tree: &TreeOracle,
    ray: &VertexRay,
    boundary: u32,
) -> Result<ChainExtraction> {
    if ray.root() != tree.root() {
        return Err(Error::InvalidRay("ray is not rooted at the tree root".into()));
    }
    if !ray.is_dense() {
        return Err(Error::InvalidRay("interpolate first: ray must be dense".into()));
    }
    for w in ray.samples().windows(2) {
        if tree.distance(&w[0].1, &w[1].1)? != 1 {
            return Err(Error::InvalidRay("interpolate first: ray must be unit-step".into()));
        }
    }
    // Walk the ray maintaining the root path as a stack: each unit step on a
    // tree either retreats to the parent or advances to a child. Records the
    // depth and last-visit position of every visited vertex.
    use std::collections::HashMap;
    let mut stack: Vec<VertexId> = vec![tree.root().clone()];
    let mut depth_of: HashMap<VertexId, u32> = HashMap::new();
    let mut last_visit: HashMap<VertexId, usize> = HashMap::new();
    depth_of.insert(tree.root().clone(), 0);
    last_visit.insert(tree.root().clone(), 0);
    for (pos, (_, v)) in ray.samples().iter().enumerate().skip(1) {
        if stack.len() >= 2 && stack[stack.len() - 2] == *v {
            stack.pop();
        } else {
            stack.push(v.clone());
        }
        depth_of.insert(v.clone(), (stack.len() - 1) as u32);
        last_visit.insert(v.clone(), pos);
    }
    let tail_depth = (stack.len() - 1) as u32;
    if tail_depth < boundary {
        return Err(Error::PropernessEvidence(format!(
            "final sample at depth {tail_depth}, below the required boundary {boundary}"
        )));
    }

    // Greedy descent by tail evidence: the child whose subtree the ray
    // visits latest wins. Last-visit positions are distinct, so a tie can
    // only arise from a degenerate table and is reported, not resolved.
    let mut chain = vec![tree.root().clone()];
    loop {
        let cur = chain.last().unwrap().clone();
        let cur_depth = (chain.len() - 1) as u32;
        let mut best: Option<(usize, VertexId)> = None;
        let mut tie = false;
        for n in tree.space().neighbors(&cur)? {
            if depth_of.get(&n) == Some(&(cur_depth + 1)) {
                let lv = last_visit[&n];
                match &best {
                    Some((b, _)) if *b == lv => tie = true,
                    Some((b, _)) if *b > lv => {}
                    _ => {
                        best = Some((lv, n));
                        tie = false;
                    }
                }
            }
        }
        match best {
            None => break,
            Some((_, next)) => {
                if tie {
                    return Err(Error::AmbiguousChain(cur_depth + 1));
                }
                chain.push(next);
            }
        }
    }
    Ok(ChainExtraction { chain: GeodesicRayChain { vertices: chain }, tail_depth })
}

#[derive(Debug, Clone, Serialize)]
pub struct Pi0Verdict {
    pub equivalent: bool,
    /// Greatest height where the underlying geodesic rays still agree, with
    /// the vertex there; present when not equivalent.
    pub divergence: Option<(u32, VertexId)>,
    /// Depth window the verdict holds on.
    pub window: u32,
    pub chain_a: GeodesicRayChain,
    pub chain_b: GeodesicRayChain,
}

/// Decides whether two proper rays lie in the same coarse path component of
/// the tree: interpolate and reroot both, extract the underlying rooted
/// geodesic rays, and compare. Equality of rooted geodesic rays is exactly
/// coarse-path equivalence on trees, so the verdict carries the divergence
/// vertex when they differ.
pub fn pi0_equivalent(tree: &TreeOracle, a: &VertexRay, b: &VertexRay) -> Result<Pi0Verdict> {
    let ia = geodesic_interpolate(tree.space(), a, Some(tree.root()))?;
    let ib = geodesic_interpolate(tree.space(), b, Some(tree.root()))?;
    let ca = underlying_geodesic_ray(tree, &ia.ray, 1)?;
    let cb = underlying_geodesic_ray(tree, &ib.ray, 1)?;
    let window = ca.tail_depth.min(cb.tail_depth);
    if window < 2 {
        return Err(Error::PropernessEvidence(
            "rays escape less than depth 2 on the window".into(),
        ));
    }
    let va = &ca.chain.vertices;
    let vb = &cb.chain.vertices;
    let agree = va
        .iter()
        .zip(vb.iter())
        .take_while(|(x, y)| x == y)
        .count();
    let equivalent = agree as u32 > window;
    let divergence = if equivalent {
        None
    } else {
        Some(((agree - 1) as u32, va[agree - 1].clone()))
    };
    Ok(Pi0Verdict {
        equivalent,
        divergence,
        window,
        chain_a: ca.chain,
        chain_b: cb.chain,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HomotopyWitness {
    pub homotopy: LatticeHomotopy,
    /// Measured Lipschitz constant of the interpolated ray (1 after
    /// interpolation; kept explicit for the certificate bound).
    pub lipschitz: u32,
    pub chain: GeodesicRayChain,
}

/// Builds the explicit coarse 1-path from the interpolated ray to its
/// underlying geodesic ray: at time `h` the lattice walks the tree geodesic
/// from `ray(h)` toward `chain(h)` at speed `A + 1`, then waits.
pub fn homotopy_witness(tree: &TreeOracle, ray: &VertexRay) -> Result<HomotopyWitness> {
    let interp = geodesic_interpolate(tree.space(), ray, Some(tree.root()))?;
    let star = &interp.ray;
    let extraction = underlying_geodesic_ray(tree, star, 1)?;
    let chain = &extraction.chain;
    let a_lip = 1u32; // unit steps after interpolation
    let height = chain.tip_depth().min(star.last_index() as u32);
    let mut rows = Vec::with_capacity(height as usize + 1);
    for h in 0..=height {
        // Geodesic from r(h) to alpha*(h); phi(i,h) sits at arc position
        // a_h - (A+1)·i from r(h), clamped at r(h).
        let path = tree.geodesic(&chain.vertices[h as usize], star.dense_vertex(h as usize))?;
        let a_h = (path.len() - 1) as u32;
        let mut row = Vec::with_capacity(h as usize + 1);
        for i in 0..=h {
            let pos = a_h.saturating_sub((a_lip + 1) * i);
            row.push(path[pos as usize].clone());
        }
        rows.push(row);
    }
    Ok(HomotopyWitness {
        homotopy: LatticeHomotopy::from_rows(rows)?,
        lipschitz: a_lip,
        chain: extraction.chain,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SixPointOutcome {
    pub hypotheses_hold: bool,
    pub gap: u32,
}

/// Literal evaluation of the six-point configuration: when the five
/// hypotheses hold, the middle points are within `2R` of each other.
pub fn six_point_gap(
    tree: &TreeOracle,
    pts: &[VertexId; 6],
    r: u32,
) -> Result<SixPointOutcome> {
    let [x1, x2, x3, y1, y2, y3] = pts;
    let on_geodesic = |a: &VertexId, mid: &VertexId, b: &VertexId| -> Result<bool> {
        Ok(tree.distance(a, mid)? + tree.distance(mid, b)? == tree.distance(a, b)?)
    };
    let h1 = tree.distance(x1, y1)? < r && tree.distance(x3, y3)? < r;
    let h2 = on_geodesic(x1, x2, x3)?;
    let h3 = on_geodesic(y1, y2, y3)?;
    let d_x23 = tree.distance(x2, x3)?;
    let d_y23 = tree.distance(y2, y3)?;
    let h4 = y2 == y1 || d_x23 <= d_y23;
    let h5 = x2 == x1 || d_x23 >= d_y23;
    Ok(SixPointOutcome {
        hypotheses_hold: h1 && h2 && h3 && h4 && h5,
        gap: tree.distance(x2, y2)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{deepest_ray, perturb_ray, random_tree};
    use crate::homotopy::check_lattice_map;
    use crate::ray::RaySpec;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn line_tree() -> TreeOracle {
        let s = Space::line();
        TreeOracle::new(s.clone(), VertexId::Int(0), 50).unwrap()
    }

    #[test]
    fn cycle_detection() {
        let s = Space::grid(2).unwrap();
        assert!(matches!(
            TreeOracle::new(s, VertexId::Grid(vec![0, 0]), 3),
            Err(Error::CycleDetected(_))
        ));
        let t = Space::regular_tree(3).unwrap();
        assert!(TreeOracle::new(t.clone(), VertexId::Word(vec![]), 6).is_ok());
    }

    #[test]
    fn geodesic_examples() {
        let t = line_tree();
        let p = t.geodesic(&VertexId::Int(0), &VertexId::Int(7)).unwrap();
        assert_eq!(p.len(), 8);
        let single = t.geodesic(&VertexId::Int(3), &VertexId::Int(3)).unwrap();
        assert_eq!(single, vec![VertexId::Int(3)]);
    }

    #[test]
    fn geodesics_match_bfs_on_random_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for seed in 0..10 {
            let s = random_tree(seed, 300, 4).unwrap();
            let root = s.basepoint().clone();
            let t = TreeOracle::new(s.clone(), root, s.horizon()).unwrap();
            let w = s.window(s.basepoint(), s.horizon()).unwrap();
            for _ in 0..20 {
                let u = &w.verts[rng.gen_range(0..w.len())];
                let v = &w.verts[rng.gen_range(0..w.len())];
                let p = t.geodesic(u, v).unwrap();
                assert_eq!(p.len() as u32 - 1, s.distance(u, v).unwrap());
                assert_eq!(p.first().unwrap(), u);
                assert_eq!(p.last().unwrap(), v);
                // Simple path: no repeated vertices.
                let mut q = p.clone();
                q.sort();
                q.dedup();
                assert_eq!(q.len(), p.len());
            }
        }
    }

    #[test]
    fn meet_examples_and_brute_force() {
        let s = Space::regular_tree(3).unwrap();
        let t = TreeOracle::new(s, VertexId::Word(vec![]), 8).unwrap();
        let root = VertexId::Word(vec![]);
        let v = VertexId::Word(vec![0, 1, 0]);
        assert_eq!(t.meet(&v, &root).unwrap(), root);
        let a = VertexId::Word(vec![0]);
        let b = VertexId::Word(vec![1]);
        assert_eq!(t.meet(&a, &b).unwrap(), root);
        // Brute force on random trees: deepest common prefix of root paths.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for seed in 20..25 {
            let s = random_tree(seed, 200, 3).unwrap();
            let root = s.basepoint().clone();
            let t = TreeOracle::new(s.clone(), root.clone(), s.horizon()).unwrap();
            let w = s.window(&root, s.horizon()).unwrap();
            for _ in 0..20 {
                let u = &w.verts[rng.gen_range(0..w.len())];
                let v = &w.verts[rng.gen_range(0..w.len())];
                let m = t.meet(u, v).unwrap();
                // The meet is the deepest vertex lying on both root paths.
                let pu = t.geodesic(&root, u).unwrap();
                let pv = t.geodesic(&root, v).unwrap();
                let brute = pu
                    .iter()
                    .filter(|x| pv.contains(x))
                    .max_by_key(|x| t.depth(x).unwrap())
                    .unwrap();
                assert_eq!(&m, brute);
            }
        }
    }

    #[test]
    fn chain_of_geodesic_ray_is_itself() {
        let s = Space::half_line();
        let t = TreeOracle::new(s.clone(), VertexId::Int(0), 40).unwrap();
        let r = RaySpec::LinePos.build(&s, 20).unwrap();
        let c = underlying_geodesic_ray(&t, &r, 10).unwrap();
        assert_eq!(c.chain.vertices, r.samples().iter().map(|(_, v)| v.clone()).collect::<Vec<_>>());
        assert_eq!(c.tail_depth, 20);
    }

    #[test]
    fn chain_on_half_line_is_the_identity_chain() {
        // Any proper unit-step ray on the half-line extracts the only chain.
        let s = Space::half_line();
        let t = TreeOracle::new(s.clone(), VertexId::Int(0), 40).unwrap();
        let verts: Vec<VertexId> =
            [0, 1, 2, 3, 2, 3, 4, 5, 6, 7, 8].iter().map(|&n| VertexId::Int(n)).collect();
        let r = VertexRay::dense(verts).unwrap();
        let c = underlying_geodesic_ray(&t, &r, 5).unwrap();
        assert_eq!(
            c.chain.vertices,
            (0..=8).map(VertexId::Int).collect::<Vec<_>>()
        );
    }

    #[test]
    fn zigzag_ray_extracts_drift_branch() {
        // On the 3-regular tree, a ray that backtracks but drifts along the
        // 0101... branch extracts exactly that branch.
        let s = Space::regular_tree(3).unwrap();
        let t = TreeOracle::new(s.clone(), VertexId::Word(vec![]), 12).unwrap();
        let branch = RaySpec::Branch { pattern: "ab".into() }.build(&s, 9).unwrap();
        let zig = perturb_ray(&s, &branch, 3, 3, 2).unwrap();
        let c = underlying_geodesic_ray(&t, &zig, 5).unwrap();
        // The chain follows the drift branch; a detour at the very tip may
        // extend it below the branch's sampled end.
        let want: Vec<VertexId> = branch.samples().iter().map(|(_, v)| v.clone()).collect();
        assert!(c.chain.vertices.len() >= want.len());
        assert_eq!(&c.chain.vertices[..want.len()], &want[..]);
    }

    #[test]
    fn bounded_ray_fails_properness_boundary() {
        let s = Space::half_line();
        let t = TreeOracle::new(s.clone(), VertexId::Int(0), 40).unwrap();
        let verts: Vec<VertexId> =
            (0..12).map(|n| VertexId::Int(if n % 2 == 0 { 0 } else { 1 })).collect();
        let r = VertexRay::dense(verts).unwrap();
        assert!(matches!(
            underlying_geodesic_ray(&t, &r, 5),
            Err(Error::PropernessEvidence(_))
        ));
    }

    #[test]
    fn pi0_self_equivalence_and_branch_divergence() {
        let s = Space::regular_tree(3).unwrap();
        let t = TreeOracle::new(s.clone(), VertexId::Word(vec![]), 12).unwrap();
        let a = RaySpec::Branch { pattern: "ab".into() }.build(&s, 10).unwrap();
        let v = pi0_equivalent(&t, &a, &a).unwrap();
        assert!(v.equivalent);

        let b = RaySpec::Branch { pattern: "ba".into() }.build(&s, 10).unwrap();
        let v = pi0_equivalent(&t, &a, &b).unwrap();
        assert!(!v.equivalent);
        let (h, at) = v.divergence.unwrap();
        assert_eq!(h, 0, "distinct root branches diverge at the root");
        assert_eq!(at, VertexId::Word(vec![]));
    }

    #[test]
    fn pi0_perturbation_is_equivalent() {
        let s = Space::regular_tree(3).unwrap();
        let t = TreeOracle::new(s.clone(), VertexId::Word(vec![]), 12).unwrap();
        let a = RaySpec::Branch { pattern: "ab".into() }.build(&s, 10).unwrap();
        let p = perturb_ray(&s, &a, 17, 3, 3).unwrap();
        let v = pi0_equivalent(&t, &a, &p).unwrap();
        assert!(v.equivalent);
        assert!(v.divergence.is_none());
    }

    #[test]
    fn witness_of_geodesic_ray_is_constant() {
        let s = Space::half_line();
        let t = TreeOracle::new(s.clone(), VertexId::Int(0), 40).unwrap();
        let r = RaySpec::LinePos.build(&s, 12).unwrap();
        let wtn = homotopy_witness(&t, &r).unwrap();
        let k = LatticeHomotopy::constant(&r, wtn.homotopy.height()).unwrap();
        assert_eq!(wtn.homotopy, k);
    }

    #[test]
    fn witness_certificate_bounds_on_backtracking_ray() {
        let s = Space::half_line();
        let t = TreeOracle::new(s.clone(), VertexId::Int(0), 60).unwrap();
        let mut verts: Vec<VertexId> = (0..=6).map(VertexId::Int).collect();
        verts.extend([5, 4, 5, 6, 7, 8, 9, 10, 11, 12].map(VertexId::Int));
        let r = VertexRay::dense(verts).unwrap();
        let wtn = homotopy_witness(&t, &r).unwrap();
        // First endray is the interpolated ray, second the geodesic chain.
        assert_eq!(wtn.homotopy.second_endray().samples()[3].1, VertexId::Int(3));
        let radii = [1, 2, 3, 5];
        let cert = check_lattice_map(&s, &wtn.homotopy, &radii, &[(VertexId::Int(0), 2)])
            .unwrap();
        for b in &cert.bounds {
            assert!(
                b.row_bound <= (wtn.lipschitz + 1) * b.radius,
                "U_{} = {} exceeds (A+1)R",
                b.radius,
                b.row_bound
            );
        }
        assert!(cert.properness_evidence_passes());
    }

    #[test]
    fn six_point_trivial_cases() {
        let t = line_tree();
        let z = VertexId::Int(0);
        let out = six_point_gap(&t, &[z.clone(), z.clone(), z.clone(), z.clone(), z.clone(), z], 1)
            .unwrap();
        assert!(out.hypotheses_hold);
        assert_eq!(out.gap, 0);

        let pts = [
            VertexId::Int(0),
            VertexId::Int(2),
            VertexId::Int(5),
            VertexId::Int(0),
            VertexId::Int(2),
            VertexId::Int(5),
        ];
        let out = six_point_gap(&t, &pts, 1).unwrap();
        assert!(out.hypotheses_hold);
        assert_eq!(out.gap, 0);
        assert!(out.gap < 2);
    }

    #[test]
    fn concatenation_additivity_spot_check() {
        // im(u12) ∩ im(u23) = {x2} forces d13 = d12 + d23.
        let s = Space::regular_tree(3).unwrap();
        let t = TreeOracle::new(s.clone(), VertexId::Word(vec![]), 12).unwrap();
        let x1 = VertexId::Word(vec![0, 1]);
        let x2 = VertexId::Word(vec![0]);
        let x3 = VertexId::Word(vec![0, 2, 0]);
        let p12 = t.geodesic(&x1, &x2).unwrap();
        let p23 = t.geodesic(&x2, &x3).unwrap();
        let shared: Vec<&VertexId> = p12.iter().filter(|v| p23.contains(v)).collect();
        assert_eq!(shared, vec![&x2]);
        assert_eq!(
            t.distance(&x1, &x3).unwrap(),
            t.distance(&x1, &x2).unwrap() + t.distance(&x2, &x3).unwrap()
        );
    }
}
