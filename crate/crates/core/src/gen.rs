//! Seeded generators for finite test spaces and rays.

use std::collections::HashMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::ray::VertexRay;
use crate::space::{Space, VertexId};

fn name(i: usize) -> VertexId {
    VertexId::Name(format!("v{i}"))
}

/// Random tree on `n` vertices with degree bound `max_degree`, rooted at
/// `v0`. Vertex `i` attaches to a uniformly random earlier vertex that still
/// has spare degree.
pub fn random_tree(seed: u64, n: usize, max_degree: usize) -> Result<Space> {
    assert!(n >= 1 && max_degree >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
    adj.insert(name(0), vec![]);
    let mut degree = vec![0usize; n];
    for i in 1..n {
        let j = loop {
            let j = rng.gen_range(0..i);
            if degree[j] < max_degree {
                break j;
            }
        };
        degree[j] += 1;
        degree[i] += 1;
        adj.entry(name(i)).or_default().push(name(j));
        adj.entry(name(j)).or_default().push(name(i));
    }
    Space::finite(adj, name(0))
}

/// Random connected graph: a random tree plus `extra_edges` random chords.
pub fn random_connected_graph(seed: u64, n: usize, extra_edges: usize) -> Result<Space> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let tree = random_tree(seed, n, n)?;
    let mut adj: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
    for i in 0..n {
        adj.insert(name(i), tree.neighbors(&name(i))?);
    }
    for _ in 0..extra_edges {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        adj.get_mut(&name(a)).unwrap().push(name(b));
        adj.get_mut(&name(b)).unwrap().push(name(a));
    }
    Space::finite(adj, name(0))
}

/// Depth of the deepest vertex below the basepoint.
pub fn eccentricity(space: &Space) -> Result<u32> {
    let w = space.window(space.basepoint(), space.horizon())?;
    Ok(w.dist.iter().copied().max().unwrap_or(0))
}

/// A unit-step path from the basepoint to the deepest vertex of a finite
/// tree, as a dense ray.
pub fn deepest_ray(space: &Space) -> Result<VertexRay> {
    let w = space.window(space.basepoint(), space.horizon())?;
    let deepest = (0..w.len()).max_by_key(|&i| w.dist[i]).unwrap();
    let path = space.shortest_path(space.basepoint(), &w.verts[deepest])?;
    VertexRay::dense(path)
}

/// Inserts `count` out-and-back detours of depth `<= depth` into a dense
/// unit-step ray on a tree, keeping endpoints fixed. The result is still a
/// proper unit-step ray with the same tail.
pub fn perturb_ray(space: &Space, ray: &VertexRay, seed: u64, count: usize, depth: usize) -> Result<VertexRay> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let verts: Vec<VertexId> = ray.samples().iter().map(|(_, v)| v.clone()).collect();
    let mut out: Vec<VertexId> = Vec::new();
    let positions: Vec<usize> = (0..count).map(|_| rng.gen_range(0..verts.len())).collect();
    for (i, v) in verts.iter().enumerate() {
        out.push(v.clone());
        if !positions.contains(&i) {
            continue;
        }
        // Walk away from the ray and straight back.
        let mut detour = vec![v.clone()];
        for _ in 0..depth {
            let cur = detour.last().unwrap();
            let ns = space.neighbors(cur)?;
            let avoid: Vec<&VertexId> = detour.iter().rev().take(2).collect();
            let choices: Vec<VertexId> =
                ns.into_iter().filter(|n| !avoid.contains(&n)).collect();
            match choices.choose(&mut rng) {
                Some(n) => detour.push(n.clone()),
                None => break,
            }
        }
        for step in detour[1..].iter() {
            out.push(step.clone());
        }
        for step in detour[..detour.len() - 1].iter().rev() {
            out.push(step.clone());
        }
    }
    VertexRay::dense(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_tree_is_acyclic_and_connected() {
        for seed in 0..5 {
            let t = random_tree(seed, 100, 4).unwrap();
            let w = t.window(t.basepoint(), t.horizon()).unwrap();
            assert_eq!(w.len(), 100);
            let edges: usize = w.adj.iter().map(|a| a.len()).sum();
            assert_eq!(edges / 2, 99);
            assert!(t.degree_bound() <= 4);
        }
    }

    #[test]
    fn perturbed_ray_keeps_endpoints_and_unit_steps() {
        let t = random_tree(7, 200, 3).unwrap();
        let r = deepest_ray(&t).unwrap();
        let p = perturb_ray(&t, &r, 11, 4, 3).unwrap();
        assert_eq!(p.root(), r.root());
        assert_eq!(p.last_vertex(), r.last_vertex());
        for w in p.samples().windows(2) {
            assert_eq!(t.distance(&w[0].1, &w[1].1).unwrap(), 1);
        }
    }
}
