//! Desk-scale verification of the coarse map taxonomy on finite traces, and
//! geodesic interpolation of sampled rays.
//!
//! All verdicts here are trace-relative: a "not controlled" or "not proper"
//! verdict is divergence evidence on the sampled window, never a proof about
//! the infinite map. Reports carry the window so claims are reproducible.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ray::VertexRay;
use crate::space::{build_space, Space, SpaceSpec, VertexId};

/// A finite sample of a map: input/output pairs covering a ball of the
/// declared radius in the domain.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapTrace {
    pub domain: SpaceSpec,
    pub codomain: SpaceSpec,
    pub radius: u32,
    pub pairs: Vec<(VertexId, VertexId)>,
}

impl MapTrace {
    pub fn from_fn(
        domain: SpaceSpec,
        codomain: SpaceSpec,
        radius: u32,
        f: impl Fn(&VertexId) -> VertexId,
    ) -> Result<MapTrace> {
        let dom = build_space(&domain)?;
        let pairs = trace_map(&dom, radius, f)?;
        Ok(MapTrace { domain, codomain, radius, pairs })
    }

    pub fn spaces(&self) -> Result<(Space, Space)> {
        Ok((build_space(&self.domain)?, build_space(&self.codomain)?))
    }

    /// Checks the trace is functional and covers the declared ball exactly.
    pub fn validate(&self, dom: &Space) -> Result<()> {
        let mut seen = HashSet::new();
        for (u, _) in &self.pairs {
            if !seen.insert(u.clone()) {
                return Err(Error::InvalidSpec(format!("input {u} appears twice in trace")));
            }
        }
        let ball: HashSet<VertexId> = dom.ball(dom.basepoint(), self.radius)?.into_iter().collect();
        if seen != ball {
            return Err(Error::InvalidSpec(format!(
                "trace covers {} inputs but the declared ball has {}",
                seen.len(),
                ball.len()
            )));
        }
        Ok(())
    }
}

/// Samples `f` on the ball of the given radius about the basepoint.
pub fn trace_map(
    dom: &Space,
    radius: u32,
    f: impl Fn(&VertexId) -> VertexId,
) -> Result<Vec<(VertexId, VertexId)>> {
    Ok(dom.ball(dom.basepoint(), radius)?.into_iter().map(|u| {
        let v = f(&u);
        (u, v)
    }).collect())
}

/// BFS distances from `src` until every target is found.
fn distances_to_targets(
    space: &Space,
    src: &VertexId,
    targets: &HashSet<VertexId>,
) -> Result<HashMap<VertexId, u32>> {
    let mut found = HashMap::new();
    let mut remaining = targets.len();
    let mut dist: HashMap<VertexId, u32> = HashMap::new();
    let cap = space.horizon().saturating_mul(4).saturating_add(4);
    dist.insert(src.clone(), 0);
    if targets.contains(src) {
        found.insert(src.clone(), 0);
        remaining -= 1;
    }
    let mut queue = VecDeque::from([src.clone()]);
    while remaining > 0 {
        let x = match queue.pop_front() {
            Some(x) => x,
            None => return Err(Error::Disconnected),
        };
        let d = dist[&x];
        if d >= cap {
            return Err(Error::Disconnected);
        }
        for n in space.neighbors(&x)? {
            if !dist.contains_key(&n) {
                dist.insert(n.clone(), d + 1);
                if targets.contains(&n) {
                    found.insert(n.clone(), d + 1);
                    remaining -= 1;
                }
                queue.push_back(n);
            }
        }
    }
    Ok(found)
}

/// Full pairwise distance matrix over a point list.
pub fn pairwise_distances(space: &Space, pts: &[VertexId]) -> Result<Vec<Vec<u32>>> {
    let distinct: HashSet<VertexId> = pts.iter().cloned().collect();
    let mut per_source: HashMap<VertexId, HashMap<VertexId, u32>> = HashMap::new();
    for p in &distinct {
        per_source.insert(p.clone(), distances_to_targets(space, p, &distinct)?);
    }
    let n = pts.len();
    let mut m = vec![vec![0u32; n]; n];
    for i in 0..n {
        let row = &per_source[&pts[i]];
        for j in 0..n {
            m[i][j] = row[&pts[j]];
        }
    }
    Ok(m)
}

/// `S(R)` table of an observed control modulus.
#[derive(Debug, Clone, Serialize)]
pub struct ModulusRow {
    pub radius: u32,
    /// Max codomain distance over traced pairs at domain distance `< R`.
    pub modulus: u32,
    /// Same, restricted to the inner half of the trace window.
    pub inner_modulus: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ControlVerdict {
    /// The modulus does not grow with the window.
    BoundedOnTrace { bound: u32 },
    /// The full-window modulus substantially exceeds the inner-window one:
    /// evidence the map is not controlled.
    DivergenceEvidence { radius: u32, inner: u32, full: u32 },
}

#[derive(Debug, Clone, Serialize)]
pub struct ControlReport {
    pub rows: Vec<ModulusRow>,
    pub verdict: ControlVerdict,
}

/// Observed control modulus `R -> S(R)` with a window-growth diagnosis.
///
/// Divergence evidence fires when some tested `R` has the full-window
/// modulus above twice the inner-half modulus (plus slack 2): a controlled
/// map has a position-uniform modulus, so the window split must not matter.
pub fn check_controlled(
    dom: &Space,
    cod: &Space,
    pairs: &[(VertexId, VertexId)],
    radii: &[u32],
) -> Result<ControlReport> {
    if pairs.is_empty() {
        return Err(Error::EmptyTrace(radii.first().copied().unwrap_or(0)));
    }
    let inputs: Vec<VertexId> = pairs.iter().map(|(u, _)| u.clone()).collect();
    let outputs: Vec<VertexId> = pairs.iter().map(|(_, v)| v.clone()).collect();
    let d_dom = pairwise_distances(dom, &inputs)?;
    let d_cod = pairwise_distances(cod, &outputs)?;
    let base: HashSet<VertexId> = [dom.basepoint().clone()].into();
    let to_base = distances_to_targets_transposed(dom, &inputs, &base)?;
    let window = to_base.iter().copied().max().unwrap_or(0);
    let inner: Vec<bool> = to_base.iter().map(|&d| d <= window / 2).collect();

    let mut rows = Vec::new();
    let mut verdict = ControlVerdict::BoundedOnTrace { bound: 0 };
    for &r in radii {
        let mut full = 0u32;
        let mut inner_max: Option<u32> = None;
        for i in 0..inputs.len() {
            for j in (i + 1)..inputs.len() {
                if d_dom[i][j] < r {
                    full = full.max(d_cod[i][j]);
                    if inner[i] && inner[j] {
                        inner_max = Some(inner_max.unwrap_or(0).max(d_cod[i][j]));
                    }
                }
            }
        }
        if let Some(im) = inner_max {
            if full > 2 * im + 2 {
                if let ControlVerdict::BoundedOnTrace { .. } = verdict {
                    verdict = ControlVerdict::DivergenceEvidence { radius: r, inner: im, full };
                }
            }
        }
        rows.push(ModulusRow { radius: r, modulus: full, inner_modulus: inner_max });
    }
    if let ControlVerdict::BoundedOnTrace { ref mut bound } = verdict {
        *bound = rows.iter().map(|r| r.modulus).max().unwrap_or(0);
    }
    Ok(ControlReport { rows, verdict })
}

/// Distances from each point to a single-target set, flattened.
fn distances_to_targets_transposed(
    space: &Space,
    pts: &[VertexId],
    targets: &HashSet<VertexId>,
) -> Result<Vec<u32>> {
    let target = targets.iter().next().expect("one target");
    let all: HashSet<VertexId> = pts.iter().cloned().collect();
    let from_target = distances_to_targets(space, target, &all)?;
    Ok(pts.iter().map(|p| from_target[p]).collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct PreimageRow {
    pub center: VertexId,
    pub radius: u32,
    pub preimage_size: usize,
    pub diameter: Option<u32>,
    pub inner_diameter: Option<u32>,
    pub diverging: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProperReport {
    pub rows: Vec<PreimageRow>,
    /// False when some target ball's preimage diameter grows with the
    /// window.
    pub proper_on_trace: bool,
}

/// Preimage diameters of target balls, with window-growth diagnosis.
pub fn check_proper(
    dom: &Space,
    cod: &Space,
    pairs: &[(VertexId, VertexId)],
    balls: &[(VertexId, u32)],
) -> Result<ProperReport> {
    if pairs.is_empty() {
        return Err(Error::EmptyTrace(0));
    }
    for (_, r) in balls {
        if *r > cod.horizon() {
            return Err(Error::HorizonExceeded { requested: *r, horizon: cod.horizon() });
        }
    }
    let inputs: Vec<VertexId> = pairs.iter().map(|(u, _)| u.clone()).collect();
    let outputs: Vec<VertexId> = pairs.iter().map(|(_, v)| v.clone()).collect();
    let d_dom = pairwise_distances(dom, &inputs)?;
    let base: HashSet<VertexId> = [dom.basepoint().clone()].into();
    let to_base = distances_to_targets_transposed(dom, &inputs, &base)?;
    let window = to_base.iter().copied().max().unwrap_or(0);
    let inner: Vec<bool> = to_base.iter().map(|&d| d <= window / 2).collect();

    let out_set: HashSet<VertexId> = outputs.iter().cloned().collect();
    let mut rows = Vec::new();
    for (center, radius) in balls {
        let from_center = distances_to_targets(cod, center, &out_set)?;
        let members: Vec<usize> =
            (0..inputs.len()).filter(|&i| from_center[&outputs[i]] <= *radius).collect();
        let diam = max_pairwise(&d_dom, &members);
        let inner_members: Vec<usize> =
            members.iter().copied().filter(|&i| inner[i]).collect();
        let inner_diam = max_pairwise(&d_dom, &inner_members);
        let diverging = match (diam, inner_diam) {
            (Some(full), Some(inn)) => 2 * full > 3 * inn + 4,
            _ => false,
        };
        rows.push(PreimageRow {
            center: center.clone(),
            radius: *radius,
            preimage_size: members.len(),
            diameter: diam,
            inner_diameter: inner_diam,
            diverging,
        });
    }
    let proper_on_trace = rows.iter().all(|r| !r.diverging);
    Ok(ProperReport { rows, proper_on_trace })
}

fn max_pairwise(d: &[Vec<u32>], members: &[usize]) -> Option<u32> {
    if members.is_empty() {
        return None;
    }
    let mut m = 0;
    for (a, &i) in members.iter().enumerate() {
        for &j in &members[a + 1..] {
            m = m.max(d[i][j]);
        }
    }
    Some(m)
}

#[derive(Debug, Clone, Serialize)]
pub struct CloseReport {
    /// Sup over common inputs of the codomain distance.
    pub sup: u32,
    pub witness: Option<(VertexId, VertexId, VertexId)>,
    pub common_inputs: usize,
}

/// Exact closeness certificate `C = sup d(f(x), g(x))` over shared inputs.
pub fn check_close(
    cod: &Space,
    f: &[(VertexId, VertexId)],
    g: &[(VertexId, VertexId)],
) -> Result<CloseReport> {
    let gm: HashMap<&VertexId, &VertexId> = g.iter().map(|(u, v)| (u, v)).collect();
    let mut sup = 0u32;
    let mut witness = None;
    let mut common = 0usize;
    for (u, fv) in f {
        let Some(gv) = gm.get(u) else { continue };
        common += 1;
        let d = cod.distance(fv, gv)?;
        if d >= sup {
            sup = d;
            witness = Some((u.clone(), fv.clone(), (*gv).clone()));
        }
    }
    if common == 0 {
        return Err(Error::DisjointTraces);
    }
    Ok(CloseReport { sup, witness, common_inputs: common })
}

/// An `(A, B)` affine bound: `d(f(x), f(x')) <= A·d(x, x') + B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineBound {
    pub a: f64,
    pub b: f64,
}

impl AffineBound {
    /// Lipschitz constant implied on an r-discrete subset.
    pub fn lipschitz_on_discrete(&self, r: f64) -> f64 {
        self.a + self.b / r
    }
}

/// Least max-ratio affine fit, certified on the trace.
///
/// `B` is first pinned to the small-scale spread (pairs at domain distance
/// <= 1); the least slope covering the rest under that pin is `A`; the final
/// `B` is the exact residual max, so re-checking the bound on the same trace
/// can never find a violation.
pub fn estimate_affine_bound(
    dom: &Space,
    cod: &Space,
    pairs: &[(VertexId, VertexId)],
) -> Result<AffineBound> {
    if pairs.is_empty() {
        return Err(Error::EmptyTrace(0));
    }
    let inputs: Vec<VertexId> = pairs.iter().map(|(u, _)| u.clone()).collect();
    let outputs: Vec<VertexId> = pairs.iter().map(|(_, v)| v.clone()).collect();
    let d_dom = pairwise_distances(dom, &inputs)?;
    let d_cod = pairwise_distances(cod, &outputs)?;
    let mut b_cap = 0f64;
    for i in 0..inputs.len() {
        for j in (i + 1)..inputs.len() {
            if d_dom[i][j] <= 1 {
                b_cap = b_cap.max(d_cod[i][j] as f64);
            }
        }
    }
    let mut a = 0f64;
    for i in 0..inputs.len() {
        for j in (i + 1)..inputs.len() {
            if d_dom[i][j] >= 1 {
                a = a.max((d_cod[i][j] as f64 - b_cap) / d_dom[i][j] as f64);
            }
        }
    }
    let mut b = 0f64;
    for i in 0..inputs.len() {
        for j in (i + 1)..inputs.len() {
            b = b.max(d_cod[i][j] as f64 - a * d_dom[i][j] as f64);
        }
    }
    Ok(AffineBound { a, b })
}

/// Traced pairs violating the bound, if any.
pub fn verify_affine_bound(
    dom: &Space,
    cod: &Space,
    pairs: &[(VertexId, VertexId)],
    bound: AffineBound,
) -> Result<Vec<(VertexId, VertexId, u32, u32)>> {
    let inputs: Vec<VertexId> = pairs.iter().map(|(u, _)| u.clone()).collect();
    let outputs: Vec<VertexId> = pairs.iter().map(|(_, v)| v.clone()).collect();
    let d_dom = pairwise_distances(dom, &inputs)?;
    let d_cod = pairwise_distances(cod, &outputs)?;
    let mut out = Vec::new();
    for i in 0..inputs.len() {
        for j in (i + 1)..inputs.len() {
            if d_cod[i][j] as f64 > bound.a * d_dom[i][j] as f64 + bound.b + 1e-9 {
                out.push((inputs[i].clone(), inputs[j].clone(), d_dom[i][j], d_cod[i][j]));
            }
        }
    }
    Ok(out)
}

/// Quasi-surjectivity radius on a window: the max distance from a codomain
/// ball vertex to the traced image.
pub fn quasi_surjectivity_radius(
    cod: &Space,
    pairs: &[(VertexId, VertexId)],
    window_radius: u32,
) -> Result<u32> {
    let image: HashSet<VertexId> = pairs.iter().map(|(_, v)| v.clone()).collect();
    if image.is_empty() {
        return Err(Error::EmptyTrace(0));
    }
    let ball = cod.ball(cod.basepoint(), window_radius)?;
    let mut worst = 0;
    for v in &ball {
        let d = distances_to_targets(cod, v, &image)?
            .values()
            .copied()
            .min()
            .unwrap_or(u32::MAX);
        worst = worst.max(d);
    }
    Ok(worst)
}

/// Result of geodesic interpolation: a unit-step edge path visiting the
/// input samples in order.
#[derive(Debug, Clone, Serialize)]
pub struct Interpolation {
    pub ray: VertexRay,
    /// `(input sample index, output position)` for every input sample.
    pub matched: Vec<(u64, usize)>,
    /// Sampled Lipschitz constant of the input (max distance per index gap).
    pub max_input_step: u32,
    /// Sup over output positions of the distance to the owning input sample.
    pub closeness: u32,
}

/// Replaces a sampled ray by a unit-step edge path through its samples,
/// choosing the lexicographically least BFS geodesic on each gap. With
/// `reroot`, the path from the new root to the first sample is prefixed.
pub fn geodesic_interpolate(
    space: &Space,
    ray: &VertexRay,
    reroot: Option<&VertexId>,
) -> Result<Interpolation> {
    let samples = ray.samples();
    let mut out: Vec<VertexId> = Vec::new();
    let mut matched = Vec::with_capacity(samples.len());
    let mut closeness = 0u32;
    let mut max_input_step = 0u32;

    if let Some(x0) = reroot {
        if x0 != ray.root() {
            let prefix = space.shortest_path(x0, ray.root())?;
            closeness = closeness.max(prefix.len() as u32 - 1);
            out.extend(prefix[..prefix.len() - 1].iter().cloned());
        }
    }
    out.push(ray.root().clone());
    matched.push((0, out.len() - 1));

    for w in samples.windows(2) {
        let (i0, ref u) = w[0];
        let (i1, ref v) = w[1];
        let seg = space.shortest_path(u, v)?;
        let seg_len = (seg.len() - 1) as u32;
        let gap = (i1 - i0) as u32;
        max_input_step = max_input_step.max(seg_len.div_ceil(gap));
        closeness = closeness.max(seg_len);
        out.extend(seg[1..].iter().cloned());
        matched.push((i1, out.len() - 1));
    }
    Ok(Interpolation { ray: VertexRay::dense(out)?, matched, max_input_step, closeness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SpaceSpec;

    fn line() -> Space {
        Space::line()
    }

    fn half() -> Space {
        Space::half_line()
    }

    #[test]
    fn identity_is_controlled_and_proper() {
        let s = line();
        let pairs = trace_map(&s, 20, |v| v.clone()).unwrap();
        let rep = check_controlled(&s, &s, &pairs, &[2, 4, 8]).unwrap();
        assert!(matches!(rep.verdict, ControlVerdict::BoundedOnTrace { .. }));
        for row in &rep.rows {
            assert_eq!(row.modulus, row.radius - 1);
        }
        let prop =
            check_proper(&s, &s, &pairs, &[(VertexId::Int(0), 3)]).unwrap();
        assert!(prop.proper_on_trace);
        assert!(prop.rows[0].diameter.unwrap() <= 6);
    }

    #[test]
    fn doubling_is_controlled() {
        let s = line();
        let pairs = trace_map(&s, 20, |v| match v {
            VertexId::Int(n) => VertexId::Int(2 * n),
            _ => unreachable!(),
        })
        .unwrap();
        let rep = check_controlled(&s, &s, &pairs, &[2, 4, 8]).unwrap();
        assert!(matches!(rep.verdict, ControlVerdict::BoundedOnTrace { .. }));
        for row in &rep.rows {
            assert!(row.modulus <= 2 * row.radius);
        }
    }

    #[test]
    fn squaring_fails_control_on_trace() {
        let s = half();
        let pairs = trace_map(&s, 30, |v| match v {
            VertexId::Int(n) => VertexId::Int(n * n),
            _ => unreachable!(),
        })
        .unwrap();
        let rep = check_controlled(&s, &s, &pairs, &[3, 4, 8]).unwrap();
        assert!(matches!(rep.verdict, ControlVerdict::DivergenceEvidence { .. }));
    }

    #[test]
    fn constant_map_fails_properness_on_trace() {
        let s = half();
        let pairs = trace_map(&s, 30, |_| VertexId::Int(0)).unwrap();
        let rep = check_proper(&s, &s, &pairs, &[(VertexId::Int(0), 1)]).unwrap();
        assert!(!rep.proper_on_trace);
        assert_eq!(rep.rows[0].preimage_size, 31);
    }

    #[test]
    fn quadrant_sum_is_proper_on_trace() {
        let dom = Space::grid(2).unwrap();
        // Restrict to the quadrant by tracing over it: shift outputs through
        // the sum map.
        let quadrant: Vec<(VertexId, VertexId)> = dom
            .ball(dom.basepoint(), 16)
            .unwrap()
            .into_iter()
            .filter(|v| match v {
                VertexId::Grid(c) => c[0] >= 0 && c[1] >= 0,
                _ => false,
            })
            .map(|v| {
                let VertexId::Grid(c) = &v else { unreachable!() };
                let out = VertexId::Int((c[0] + c[1]) as i64);
                (v, out)
            })
            .collect();
        let cod = half();
        let rep = check_proper(&dom, &cod, &quadrant, &[(VertexId::Int(0), 2)]).unwrap();
        assert!(rep.proper_on_trace);
        let ctl = check_controlled(&dom, &cod, &quadrant, &[2, 4]).unwrap();
        assert!(matches!(ctl.verdict, ControlVerdict::BoundedOnTrace { .. }));
    }

    #[test]
    fn close_checks() {
        let s = half();
        let f = trace_map(&s, 15, |v| v.clone()).unwrap();
        let g = trace_map(&s, 15, |v| match v {
            VertexId::Int(n) => VertexId::Int((n - 1).max(0)),
            _ => unreachable!(),
        })
        .unwrap();
        assert_eq!(check_close(&s, &f, &f).unwrap().sup, 0);
        assert_eq!(check_close(&s, &f, &g).unwrap().sup, 1);
        let far = vec![(VertexId::Int(99), VertexId::Int(99))];
        assert!(matches!(check_close(&s, &f, &far), Err(Error::DisjointTraces)));
    }

    #[test]
    fn affine_bound_examples() {
        let s = half();
        // q(h) = 3h + 2: distances triple exactly.
        let q = trace_map(&s, 20, |v| match v {
            VertexId::Int(n) => VertexId::Int(3 * n + 2),
            _ => unreachable!(),
        })
        .unwrap();
        let fit = estimate_affine_bound(&s, &s, &q).unwrap();
        assert!(fit.a <= 3.0 + 1e-9);
        assert!(verify_affine_bound(&s, &s, &q, AffineBound { a: 3.0, b: 2.0 })
            .unwrap()
            .is_empty());
        assert!(verify_affine_bound(&s, &s, &q, fit).unwrap().is_empty());

        let id = trace_map(&s, 20, |v| v.clone()).unwrap();
        let fit = estimate_affine_bound(&s, &s, &id).unwrap();
        assert!(verify_affine_bound(&s, &s, &id, AffineBound { a: 1.0, b: 0.0 })
            .unwrap()
            .is_empty());
        assert!(fit.a <= 1.0 + 1e-9);

        // q(h) = floor(h/2): tight slope about one half.
        let hv = trace_map(&s, 40, |v| match v {
            VertexId::Int(n) => VertexId::Int(n / 2),
            _ => unreachable!(),
        })
        .unwrap();
        let fit = estimate_affine_bound(&s, &s, &hv).unwrap();
        assert!(fit.a <= 0.51, "tight slope, got {}", fit.a);
        assert!(verify_affine_bound(&s, &s, &hv, AffineBound { a: 1.0, b: 0.0 })
            .unwrap()
            .is_empty());
        assert!(verify_affine_bound(&s, &s, &hv, fit).unwrap().is_empty());
    }

    #[test]
    fn discrete_affine_implies_lipschitz_pairwise() {
        // On a 1-discrete trace an (A,B) bound gives an (A+B)-Lipschitz bound.
        let s = half();
        let q = trace_map(&s, 25, |v| match v {
            VertexId::Int(n) => VertexId::Int(2 * n + 3),
            _ => unreachable!(),
        })
        .unwrap();
        let fit = estimate_affine_bound(&s, &s, &q).unwrap();
        let lip = fit.lipschitz_on_discrete(1.0);
        assert!(verify_affine_bound(&s, &s, &q, AffineBound { a: lip, b: 0.0 })
            .unwrap()
            .is_empty());
    }

    #[test]
    fn quasi_surjectivity_radius_of_doubling() {
        let s = half();
        let pairs = trace_map(&s, 20, |v| match v {
            VertexId::Int(n) => VertexId::Int(2 * n),
            _ => unreachable!(),
        })
        .unwrap();
        assert_eq!(quasi_surjectivity_radius(&s, &pairs, 20).unwrap(), 1);
    }

    #[test]
    fn interpolate_identity_is_unchanged() {
        let s = line();
        let r = VertexRay::dense((0..=6).map(VertexId::Int).collect()).unwrap();
        let out = geodesic_interpolate(&s, &r, None).unwrap();
        assert_eq!(out.ray, r);
        assert_eq!(out.closeness, 1);
    }

    #[test]
    fn interpolate_fills_gaps() {
        let s = line();
        let r = VertexRay::new(vec![
            (0, VertexId::Int(0)),
            (1, VertexId::Int(2)),
            (2, VertexId::Int(4)),
        ])
        .unwrap();
        let out = geodesic_interpolate(&s, &r, None).unwrap();
        let verts: Vec<i64> = out
            .ray
            .samples()
            .iter()
            .map(|(_, v)| match v {
                VertexId::Int(n) => *n,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(verts, vec![0, 1, 2, 3, 4]);
        assert_eq!(out.matched, vec![(0, 0), (1, 2), (2, 4)]);
        assert_eq!(out.max_input_step, 2);
    }

    #[test]
    fn interpolate_backtracking_samples() {
        let s = half();
        let r = VertexRay::dense(vec![VertexId::Int(0), VertexId::Int(3), VertexId::Int(1)])
            .unwrap();
        let out = geodesic_interpolate(&s, &r, None).unwrap();
        let verts: Vec<i64> = out
            .ray
            .samples()
            .iter()
            .map(|(_, v)| match v {
                VertexId::Int(n) => *n,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(verts, vec![0, 1, 2, 3, 2, 1]);
        assert!(out.closeness <= 3);
        // Matched indices land exactly on the inputs.
        for (orig, pos) in &out.matched {
            assert_eq!(out.ray.dense_vertex(*pos), r.vertex_at(*orig).unwrap());
        }
    }

    #[test]
    fn interpolate_reroot_prefixes_geodesic() {
        let s = line();
        let r = VertexRay::dense(vec![VertexId::Int(3), VertexId::Int(4)]).unwrap();
        let out = geodesic_interpolate(&s, &r, Some(&VertexId::Int(0))).unwrap();
        assert_eq!(out.ray.root(), &VertexId::Int(0));
        assert_eq!(out.ray.len(), 5);
        // Unit steps throughout.
        for w in out.ray.samples().windows(2) {
            assert_eq!(s.distance(&w[0].1, &w[1].1).unwrap(), 1);
        }
    }

    #[test]
    fn trace_validation() {
        let t = MapTrace::from_fn(
            SpaceSpec::named("line"),
            SpaceSpec::named("line"),
            4,
            |v| v.clone(),
        )
        .unwrap();
        let (dom, _) = t.spaces().unwrap();
        t.validate(&dom).unwrap();
        let mut bad = t.clone();
        bad.pairs.pop();
        assert!(bad.validate(&dom).is_err());
    }
}
