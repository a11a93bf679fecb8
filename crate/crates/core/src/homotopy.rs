//! Coarse 1-paths on the triangular lattice `{(i,h) : 0 <= i <= h}`.
//!
//! The lattice is a 1-discrete net of the truncated cone over the unit
//! interval, so a coarse 1-path between rays restricts to a proper Lipschitz
//! map here and nothing coarse is lost. Row `h` is the path's time-`h`
//! layer; column `i = 0` is the first endray, the diagonal `i = h` the
//! second.

use serde::{Deserialize, Serialize};

use crate::coarsemaps::pairwise_distances;
use crate::error::{Error, Result};
use crate::ray::VertexRay;
use crate::space::{Space, VertexId};

/// A map on the triangular lattice, standing for a coarse 1-path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LatticeRows", into = "LatticeRows")]
pub struct LatticeHomotopy {
    rows: Vec<Vec<VertexId>>,
}

/// Raw serialization shape: a row-major vertex table.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct LatticeRows {
    rows: Vec<Vec<VertexId>>,
}

impl From<LatticeHomotopy> for LatticeRows {
    fn from(l: LatticeHomotopy) -> LatticeRows {
        LatticeRows { rows: l.rows }
    }
}

impl TryFrom<LatticeRows> for LatticeHomotopy {
    type Error = Error;
    fn try_from(r: LatticeRows) -> Result<LatticeHomotopy> {
        LatticeHomotopy::from_rows(r.rows)
    }
}

impl LatticeHomotopy {
    /// Validates the triangular shape: row `h` has `h + 1` entries.
    pub fn from_rows(rows: Vec<Vec<VertexId>>) -> Result<LatticeHomotopy> {
        if rows.is_empty() {
            return Err(Error::MalformedLattice("no rows".into()));
        }
        for (h, row) in rows.iter().enumerate() {
            if row.len() != h + 1 {
                return Err(Error::MalformedLattice(format!(
                    "row {h} has {} entries, expected {}",
                    row.len(),
                    h + 1
                )));
            }
        }
        Ok(LatticeHomotopy { rows })
    }

    /// Height bound `H`: rows run `0..=H`.
    pub fn height(&self) -> u32 {
        (self.rows.len() - 1) as u32
    }

    pub fn rows(&self) -> &[Vec<VertexId>] {
        &self.rows
    }

    pub fn row(&self, h: u32) -> &[VertexId] {
        &self.rows[h as usize]
    }

    /// Value at lattice point `(i, h)`, `0 <= i <= h`.
    pub fn value(&self, i: u32, h: u32) -> &VertexId {
        &self.rows[h as usize][i as usize]
    }

    /// The restriction `i = 0`.
    pub fn first_endray(&self) -> VertexRay {
        VertexRay::dense(self.rows.iter().map(|r| r[0].clone()).collect())
            .expect("triangular table is nonempty")
    }

    /// The restriction `i = h`.
    pub fn second_endray(&self) -> VertexRay {
        VertexRay::dense(self.rows.iter().map(|r| r[r.len() - 1].clone()).collect())
            .expect("triangular table is nonempty")
    }

    /// The constant coarse 1-path at a ray: every row is constant.
    pub fn constant(ray: &VertexRay, height: u32) -> Result<LatticeHomotopy> {
        if !ray.is_dense() || ray.last_index() < height as u64 {
            return Err(Error::InvalidRay(format!(
                "constant path needs a dense ray sampled to {height}"
            )));
        }
        let rows = (0..=height)
            .map(|h| vec![ray.dense_vertex(h as usize).clone(); h as usize + 1])
            .collect();
        Ok(LatticeHomotopy { rows })
    }

    /// The inverse coarse 1-path: `(i, h) -> value(h - i, h)`. Swaps the
    /// endrays; an involution.
    pub fn inverse(&self) -> LatticeHomotopy {
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().rev().cloned().collect())
            .collect();
        LatticeHomotopy { rows }
    }

    /// Coarse 1-path composition: the first half of each row traverses
    /// `self` at double speed, the second half `other`. Integer halving uses
    /// floor, the overlap point going to the first piece.
    pub fn concat(&self, other: &LatticeHomotopy) -> Result<LatticeHomotopy> {
        let height = self.height().min(other.height());
        for h in 0..=height {
            if self.value(h, h) != other.value(0, h) {
                return Err(Error::EndrayMismatch(h));
            }
        }
        let mut rows = Vec::with_capacity(height as usize + 1);
        for h in 0..=height {
            let mut row = Vec::with_capacity(h as usize + 1);
            for i in 0..=h {
                let v = if i <= h / 2 {
                    self.value((2 * i).min(h), h)
                } else {
                    other.value(2 * i - h, h)
                };
                row.push(v.clone());
            }
            rows.push(row);
        }
        Ok(LatticeHomotopy { rows })
    }

    /// Every distinct vertex in the table.
    pub fn support(&self) -> Vec<VertexId> {
        let mut all: Vec<VertexId> = self.rows.iter().flatten().cloned().collect();
        all.sort();
        all.dedup();
        all
    }
}

/// Observed bounds for the two generating families of controlled sets: same-
/// row pairs within lattice distance `R` and same-column pairs across rows
/// within `R`.
#[derive(Debug, Clone, Serialize)]
pub struct LatticeBounds {
    pub radius: u32,
    /// Max image distance over pairs `((i,h),(i',h))` with `|i - i'| < R`.
    pub row_bound: u32,
    /// Max image distance over pairs `((i,h),(i,h'))` with `|h - h'| < R`.
    pub column_bound: u32,
}

/// Properness evidence: how a target ball pulls back into the lattice.
#[derive(Debug, Clone, Serialize)]
pub struct BallPreimage {
    pub center: VertexId,
    pub radius: u32,
    pub points: usize,
    /// Inclusive row span of the preimage, when nonempty.
    pub row_span: Option<(u32, u32)>,
    pub rows_hit: u32,
    /// The preimage meets every lattice row: the properness failure shape.
    pub meets_every_row: bool,
}

/// Certificate from scanning a lattice map: exact maxima over the window.
#[derive(Debug, Clone, Serialize)]
pub struct ControlCertificate {
    pub radii: Vec<u32>,
    pub bounds: Vec<LatticeBounds>,
    pub preimages: Vec<BallPreimage>,
}

impl ControlCertificate {
    /// All ball preimages sit in proper height bands.
    pub fn properness_evidence_passes(&self) -> bool {
        !self.preimages.iter().any(|p| p.meets_every_row)
    }
}

/// Exhaustive scan of the `U_R` / `V_R` image bounds plus ball-preimage
/// properness evidence.
pub fn check_lattice_map(
    space: &Space,
    phi: &LatticeHomotopy,
    radii: &[u32],
    balls: &[(VertexId, u32)],
) -> Result<ControlCertificate> {
    let verts = phi.support();
    let index: std::collections::HashMap<&VertexId, usize> =
        verts.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let dist = pairwise_distances(space, &verts)?;
    let d = |a: &VertexId, b: &VertexId| dist[index[a]][index[b]];

    let h_max = phi.height();
    let r_cap = radii.iter().copied().max().unwrap_or(0);
    let mut bounds: Vec<LatticeBounds> =
        radii.iter().map(|&r| LatticeBounds { radius: r, row_bound: 0, column_bound: 0 }).collect();

    // Same-row pairs, gap < R.
    for h in 0..=h_max {
        for i in 0..=h {
            for gap in 1..r_cap.min(h - i + 1) {
                let dd = d(phi.value(i, h), phi.value(i + gap, h));
                for b in bounds.iter_mut() {
                    if gap < b.radius {
                        b.row_bound = b.row_bound.max(dd);
                    }
                }
            }
        }
    }
    // Same-column pairs, gap < R (both rows must contain column i).
    for i in 0..=h_max {
        for h in i..=h_max {
            for gap in 1..r_cap.min(h_max - h + 1) {
                let dd = d(phi.value(i, h), phi.value(i, h + gap));
                for b in bounds.iter_mut() {
                    if gap < b.radius {
                        b.column_bound = b.column_bound.max(dd);
                    }
                }
            }
        }
    }

    let mut preimages = Vec::new();
    for (center, radius) in balls {
        let targets: std::collections::HashSet<VertexId> = verts.iter().cloned().collect();
        let from_center =
            crate::coarsemaps::pairwise_distances(space, &{
                let mut v = vec![center.clone()];
                v.extend(targets.iter().cloned());
                v
            })?;
        let center_row = &from_center[0];
        let in_ball: std::collections::HashSet<usize> = (1..=targets.len())
            .filter(|&j| center_row[j] <= *radius)
            .collect();
        let mut points = 0usize;
        let mut row_span: Option<(u32, u32)> = None;
        let mut rows_hit = 0u32;
        let vert_list: Vec<VertexId> = {
            let mut v = vec![center.clone()];
            v.extend(targets.iter().cloned());
            v
        };
        let ball_verts: std::collections::HashSet<&VertexId> =
            in_ball.iter().map(|&j| &vert_list[j]).collect();
        for h in 0..=h_max {
            let mut hit = false;
            for i in 0..=h {
                if ball_verts.contains(phi.value(i, h)) {
                    points += 1;
                    hit = true;
                }
            }
            if hit {
                rows_hit += 1;
                row_span = Some(match row_span {
                    None => (h, h),
                    Some((lo, _)) => (lo, h),
                });
            }
        }
        preimages.push(BallPreimage {
            center: center.clone(),
            radius: *radius,
            points,
            row_span,
            rows_hit,
            meets_every_row: rows_hit == h_max + 1,
        });
    }

    Ok(ControlCertificate { radii: radii.to_vec(), bounds, preimages })
}
