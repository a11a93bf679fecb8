//! Discrete rays: sampled maps `Z >= 0 -> vertices` with a finite horizon.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{step_len, Space, SpaceKind, VertexId};

/// A proper discrete ray, stored as a finite sampled window.
///
/// Sample indices strictly increase and start at 0; the sample at index 0 is
/// the root. Properness is desk-scale evidence: it is certified on the
/// sampled window, never proved beyond it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRay {
    samples: Vec<(u64, VertexId)>,
}

impl VertexRay {
    pub fn new(samples: Vec<(u64, VertexId)>) -> Result<VertexRay> {
        if samples.is_empty() {
            return Err(Error::InvalidRay("no samples".into()));
        }
        if samples[0].0 != 0 {
            return Err(Error::InvalidRay("first sample index must be 0".into()));
        }
        if samples.windows(2).any(|p| p[0].0 >= p[1].0) {
            return Err(Error::InvalidRay("sample indices must strictly increase".into()));
        }
        Ok(VertexRay { samples })
    }

    /// Ray with consecutive indices `0..verts.len()`.
    pub fn dense(verts: Vec<VertexId>) -> Result<VertexRay> {
        VertexRay::new(verts.into_iter().enumerate().map(|(i, v)| (i as u64, v)).collect())
    }

    pub fn root(&self) -> &VertexId {
        &self.samples[0].1
    }

    pub fn samples(&self) -> &[(u64, VertexId)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last_index(&self) -> u64 {
        self.samples.last().unwrap().0
    }

    pub fn last_vertex(&self) -> &VertexId {
        &self.samples.last().unwrap().1
    }

    /// True when indices are consecutive `0..len`.
    pub fn is_dense(&self) -> bool {
        self.samples.iter().enumerate().all(|(i, (idx, _))| i as u64 == *idx)
    }

    /// Sample at an exact index, if stored.
    pub fn vertex_at(&self, index: u64) -> Option<&VertexId> {
        self.samples
            .binary_search_by_key(&index, |(i, _)| *i)
            .ok()
            .map(|p| &self.samples[p].1)
    }

    /// Vertex at position `i` of a dense ray.
    pub fn dense_vertex(&self, i: usize) -> &VertexId {
        &self.samples[i].1
    }

    /// Distances from `center` to each sample, in sample order.
    pub fn distances_from(&self, space: &Space, center: &VertexId) -> Result<Vec<(u64, u32)>> {
        self.samples
            .iter()
            .map(|(i, v)| Ok((*i, space.distance(center, v)?)))
            .collect()
    }

    /// Largest radius `R` with certified escape on the window: the ray's
    /// final sample is at distance `R` and, for every `r <= R`, all samples
    /// after the last one inside the open ball of radius `r` stay outside.
    pub fn escape_radius(&self, space: &Space, center: &VertexId) -> Result<u32> {
        let d = self.distances_from(space, center)?;
        Ok(d.last().unwrap().1)
    }

    /// Max distance between consecutive samples per unit index gap, the
    /// sampled Lipschitz constant.
    pub fn max_step(&self, space: &Space) -> Result<u32> {
        let mut m = 0;
        for p in self.samples.windows(2) {
            let gap = (p[1].0 - p[0].0) as u32;
            let d = space.distance(&p[0].1, &p[1].1)?;
            m = m.max(d.div_ceil(gap));
        }
        Ok(m)
    }
}

/// Built-in ray descriptions, buildable on a matching space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RaySpec {
    /// `t -> t` on the line or half-line.
    LinePos,
    /// `t -> -t` on the line.
    LineNeg,
    /// Axis ray on `grid-n`.
    GridAxis { axis: u8, sign: i8 },
    /// Left staircase ray `alpha`.
    StairLeft,
    /// Right staircase ray `alpha'`.
    StairRight,
    /// Non-backtracking branch of a tree or free group, the letter pattern
    /// repeated forever. Letters `a..` index tree edges or free-group
    /// generators; uppercase letters are free-group inverses.
    Branch { pattern: String },
    /// Explicit sample table.
    Table { samples: Vec<(u64, VertexId)> },
}

impl RaySpec {
    /// Samples the ray densely at indices `0..=to_index`.
    pub fn build(&self, space: &Space, to_index: u64) -> Result<VertexRay> {
        match self {
            RaySpec::LinePos => {
                require_kind(space, |k| matches!(k, SpaceKind::Line | SpaceKind::HalfLine))?;
                VertexRay::dense((0..=to_index as i64).map(VertexId::Int).collect())
            }
            RaySpec::LineNeg => {
                require_kind(space, |k| matches!(k, SpaceKind::Line))?;
                VertexRay::dense((0..=to_index as i64).map(|t| VertexId::Int(-t)).collect())
            }
            RaySpec::GridAxis { axis, sign } => {
                let dim = match space.kind() {
                    SpaceKind::Grid { dim } => *dim,
                    _ => return Err(Error::InvalidRay("grid ray on a non-grid space".into())),
                };
                if *axis >= dim || (*sign != 1 && *sign != -1) {
                    return Err(Error::InvalidRay("bad grid axis or sign".into()));
                }
                VertexRay::dense(
                    (0..=to_index as i32)
                        .map(|t| {
                            let mut c = vec![0; dim as usize];
                            c[*axis as usize] = t * *sign as i32;
                            VertexId::Grid(c)
                        })
                        .collect(),
                )
            }
            RaySpec::StairLeft | RaySpec::StairRight => {
                let (n_max, profile) = space
                    .staircase_params()
                    .ok_or(Error::NotStaircase)?;
                if to_index > n_max as u64 {
                    return Err(Error::HorizonExceeded {
                        requested: to_index as u32,
                        horizon: n_max,
                    });
                }
                VertexRay::dense(
                    (0..=to_index as u32)
                        .map(|h| {
                            let offset = match self {
                                RaySpec::StairLeft => 0,
                                _ => {
                                    if h == 0 {
                                        0
                                    } else {
                                        step_len(h, profile)
                                    }
                                }
                            };
                            VertexId::Stair { height: h, offset }
                        })
                        .collect(),
                )
            }
            RaySpec::Branch { pattern } => {
                let letters = branch_letters(space, pattern)?;
                let mut verts = vec![VertexId::Word(vec![])];
                let mut word: Vec<i8> = Vec::new();
                for t in 0..to_index {
                    let l = letters[(t % letters.len() as u64) as usize];
                    let cancels = match space.kind() {
                        SpaceKind::RegularTree { .. } => word.last() == Some(&l),
                        _ => word.last() == Some(&-l),
                    };
                    if cancels {
                        return Err(Error::InvalidRay(format!(
                            "branch pattern backtracks at position {t}"
                        )));
                    }
                    word.push(l);
                    verts.push(VertexId::Word(word.clone()));
                }
                VertexRay::dense(verts)
            }
            RaySpec::Table { samples } => {
                let ray = VertexRay::new(samples.clone())?;
                for (_, v) in ray.samples() {
                    if !space.contains(v) {
                        return Err(Error::NoSuchVertex(v.to_string()));
                    }
                }
                Ok(ray)
            }
        }
    }
}

fn require_kind(space: &Space, ok: impl Fn(&SpaceKind) -> bool) -> Result<()> {
    if ok(space.kind()) {
        Ok(())
    } else {
        Err(Error::InvalidRay("ray spec does not match the space kind".into()))
    }
}

/// Interprets a branch pattern for the given word space.
fn branch_letters(space: &Space, pattern: &str) -> Result<Vec<i8>> {
    if pattern.is_empty() {
        return Err(Error::InvalidRay("empty branch pattern".into()));
    }
    let mut out = Vec::with_capacity(pattern.len());
    for c in pattern.chars() {
        let l = match (space.kind(), c) {
            (SpaceKind::RegularTree { degree }, 'a'..='z') => {
                let l = (c as u8 - b'a') as i8;
                if l as u8 >= *degree {
                    return Err(Error::InvalidRay(format!("letter `{c}` exceeds degree")));
                }
                l
            }
            (SpaceKind::FreeGroup { rank }, 'a'..='z') => {
                let l = (c as u8 - b'a' + 1) as i8;
                if l as u8 > *rank {
                    return Err(Error::InvalidRay(format!("letter `{c}` exceeds rank")));
                }
                l
            }
            (SpaceKind::FreeGroup { rank }, 'A'..='Z') => {
                let l = (c as u8 - b'A' + 1) as i8;
                if l as u8 > *rank {
                    return Err(Error::InvalidRay(format!("letter `{c}` exceeds rank")));
                }
                -l
            }
            _ => return Err(Error::InvalidRay(format!("bad branch letter `{c}`"))),
        };
        out.push(l);
    }
    Ok(out)
}

/// Parses CLI-style ray names: `line+`, `line-`, `grid+0`, `grid-1`,
/// `stair-left`, `stair-right`, `branch:abA` (letters `a..` are generators,
/// `A..` their inverses on free groups).
pub fn parse_ray_spec(s: &str) -> Result<RaySpec> {
    match s {
        "line+" | "half" => return Ok(RaySpec::LinePos),
        "line-" => return Ok(RaySpec::LineNeg),
        "stair-left" => return Ok(RaySpec::StairLeft),
        "stair-right" => return Ok(RaySpec::StairRight),
        _ => {}
    }
    if let Some(rest) = s.strip_prefix("grid+") {
        let axis = rest.parse().map_err(|_| Error::InvalidRay(format!("bad ray spec `{s}`")))?;
        return Ok(RaySpec::GridAxis { axis, sign: 1 });
    }
    if let Some(rest) = s.strip_prefix("grid-") {
        let axis = rest.parse().map_err(|_| Error::InvalidRay(format!("bad ray spec `{s}`")))?;
        return Ok(RaySpec::GridAxis { axis, sign: -1 });
    }
    if let Some(rest) = s.strip_prefix("branch:") {
        if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_alphabetic()) {
            return Err(Error::InvalidRay(format!("bad branch pattern `{rest}`")));
        }
        return Ok(RaySpec::Branch { pattern: rest.to_string() });
    }
    Err(Error::InvalidRay(format!("unknown ray spec `{s}`")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::StepProfile;

    #[test]
    fn dense_ray_roundtrip() {
        let r = VertexRay::dense(vec![VertexId::Int(0), VertexId::Int(1)]).unwrap();
        assert!(r.is_dense());
        assert_eq!(r.root(), &VertexId::Int(0));
        assert_eq!(r.vertex_at(1), Some(&VertexId::Int(1)));
        assert_eq!(r.vertex_at(7), None);
    }

    #[test]
    fn ray_must_start_at_zero() {
        assert!(VertexRay::new(vec![(1, VertexId::Int(0))]).is_err());
        assert!(VertexRay::new(vec![(0, VertexId::Int(0)), (0, VertexId::Int(1))]).is_err());
    }

    #[test]
    fn line_rays_escape() {
        let s = Space::line();
        let r = RaySpec::LinePos.build(&s, 30).unwrap();
        assert_eq!(r.escape_radius(&s, &VertexId::Int(0)).unwrap(), 30);
        assert_eq!(r.max_step(&s).unwrap(), 1);
    }

    #[test]
    fn stair_rays() {
        let s = Space::staircase(10, StepProfile::Quadratic).unwrap();
        let a = RaySpec::StairLeft.build(&s, 5).unwrap();
        let b = RaySpec::StairRight.build(&s, 5).unwrap();
        assert_eq!(a.root(), b.root());
        assert_eq!(a.dense_vertex(3), &VertexId::Stair { height: 3, offset: 0 });
        assert_eq!(b.dense_vertex(3), &VertexId::Stair { height: 3, offset: 9 });
    }

    #[test]
    fn branch_rays_are_geodesic() {
        let s = Space::regular_tree(3).unwrap();
        let r = RaySpec::Branch { pattern: "ab".into() }.build(&s, 8).unwrap();
        assert_eq!(r.escape_radius(&s, s.basepoint()).unwrap(), 8);
        // Pattern "aa" backtracks on a regular tree.
        assert!(RaySpec::Branch { pattern: "aa".into() }.build(&s, 4).is_err());
        // But it is fine in a free group, where only aA cancels.
        let f = Space::free_group(2).unwrap();
        assert!(RaySpec::Branch { pattern: "aa".into() }.build(&f, 4).is_ok());
        assert!(RaySpec::Branch { pattern: "aA".into() }.build(&f, 4).is_err());
    }

    #[test]
    fn parse_specs() {
        assert_eq!(parse_ray_spec("line+").unwrap(), RaySpec::LinePos);
        assert_eq!(parse_ray_spec("grid-1").unwrap(), RaySpec::GridAxis { axis: 1, sign: -1 });
        assert_eq!(
            parse_ray_spec("branch:ab").unwrap(),
            RaySpec::Branch { pattern: "ab".into() }
        );
        assert!(parse_ray_spec("spiral").is_err());
    }
}
