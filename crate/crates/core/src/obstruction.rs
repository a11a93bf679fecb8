//! The staircase counterexample engine: crossing words of row paths, free
//! reduction, behavior-word stability, and the properness refutation.
//!
//! A candidate coarse 1-path between the two staircase rays is supplied as a
//! family of rows, one `A`-path per height from `alpha(h)` to `alpha'(h)`,
//! subdividing some Lipschitz lattice map (the declared stride records the
//! pre-subdivision bound). Rows above the forbidden region must keep
//! crossing some step; once the reduced crossing word stabilizes, every row
//! funnels through the access ball of a fixed step, and that pins an
//! unbounded lattice set with bounded image.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{step_len, Space, StepProfile, VertexId};

/// Which region of the staircase a vertex lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StairRegion {
    LeftRay,
    RightRay,
    StepInterior,
}

/// Structured view of a staircase vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StaircaseAddress {
    pub region: StairRegion,
    pub height: u32,
    /// Position along `step(height)`, 0 at the left ray.
    pub offset: u32,
}

/// Classifies a vertex of a staircase space.
pub fn classify(space: &Space, v: &VertexId) -> Result<StaircaseAddress> {
    let (_, profile) = space.staircase_params().ok_or(Error::NotStaircase)?;
    match v {
        VertexId::Stair { height, offset } => {
            let region = if *offset == 0 {
                StairRegion::LeftRay
            } else if *height >= 1 && *offset == step_len(*height, profile) {
                StairRegion::RightRay
            } else {
                StairRegion::StepInterior
            };
            Ok(StaircaseAddress { region, height: *height, offset: *offset })
        }
        other => Err(Error::NoSuchVertex(other.to_string())),
    }
}

/// Crossing direction over a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dir {
    Forward,
    Backward,
}

/// One generator letter: a crossing of `step(step)` in the given direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub dir: Dir,
    pub step: u32,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        Letter {
            dir: match self.dir {
                Dir::Forward => Dir::Backward,
                Dir::Backward => Dir::Forward,
            },
            step: self.step,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.dir {
            Dir::Forward => 'f',
            Dir::Backward => 'b',
        };
        write!(f, "{c}{}", self.step)
    }
}

/// A crossing letter with its witness window in the source path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CrossingLetter {
    pub letter: Letter,
    /// Path indices of the start and end of the crossing.
    pub window: (usize, usize),
}

/// All crossings of a path, in path order, unreduced.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct CrossingWord {
    pub letters: Vec<CrossingLetter>,
}

impl CrossingWord {
    pub fn raw(&self) -> Vec<Letter> {
        self.letters.iter().map(|l| l.letter).collect()
    }
}

/// A freely reduced word over the crossing generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct BehaviorWord {
    pub letters: Vec<Letter>,
}

impl BehaviorWord {
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl fmt::Display for BehaviorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "ε");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Free reduction under `f_j^{-1} = b_j`: cancels adjacent inverse pairs
/// until none remain. Idempotent and order-confluent.
pub fn reduce_word(letters: &[Letter]) -> BehaviorWord {
    let mut stack: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        if stack.last() == Some(&l.inverse()) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    BehaviorWord { letters: stack }
}

/// Graph distance bounded by `cap`; `None` when the points are farther.
fn bounded_distance(space: &Space, u: &VertexId, v: &VertexId, cap: u32) -> Result<Option<u32>> {
    if u == v {
        return Ok(Some(0));
    }
    use std::collections::{HashMap, VecDeque};
    let mut dist: HashMap<VertexId, u32> = HashMap::new();
    dist.insert(u.clone(), 0);
    let mut queue = VecDeque::from([u.clone()]);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if d >= cap {
            continue;
        }
        for n in space.neighbors(&x)? {
            if n == *v {
                return Ok(Some(d + 1));
            }
            if !dist.contains_key(&n) {
                dist.insert(n.clone(), d + 1);
                queue.push_back(n);
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum BallClass {
    Left,
    Right,
    Middle,
}

/// Extracts all forward and backward crossings of a staircase path, in path
/// order, each with its witness window.
///
/// A forward crossing of `step(j)` starts in the left access ball
/// `OB(alpha(j), A) ∩ step(j)`, ends in the right one, and keeps every
/// interior point on the step outside both balls; backward swaps the balls.
/// Steps shorter than `2A` have overlapping access balls, so they emit no
/// letters. Requires the path to be an `A`-path and `A` below the height of
/// every step the path enters the interior of.
pub fn crossing_word(space: &Space, path: &[VertexId], a: u32) -> Result<CrossingWord> {
    let (_, profile) = space.staircase_params().ok_or(Error::NotStaircase)?;
    if a == 0 {
        return Err(Error::InvalidSpec("ball radius A must be positive".into()));
    }
    // A-path check.
    for (i, pair) in path.windows(2).enumerate() {
        match bounded_distance(space, &pair[0], &pair[1], a)? {
            Some(_) => {}
            None => {
                return Err(Error::NotAPath { stride: a, index: i, len: a + 1 });
            }
        }
    }
    // Interior presence must stay above step(A).
    for v in path {
        let addr = classify(space, v)?;
        if addr.region == StairRegion::StepInterior && addr.height <= a {
            return Err(Error::BallRadiusTooLarge(a, addr.height));
        }
    }

    let mut letters = Vec::new();
    // State per run over a single step: the step height and the last ball
    // visit (class and its path index).
    let mut run: Option<(u32, Option<(BallClass, usize)>)> = None;
    for (t, v) in path.iter().enumerate() {
        let addr = classify(space, v)?;
        let on_step = addr.height >= 1;
        if !on_step {
            run = None;
            continue;
        }
        let j = addr.height;
        let len = step_len(j, profile);
        if run.as_ref().map(|(rj, _)| *rj) != Some(j) {
            run = Some((j, None));
        }
        let class = if len < 2 * a {
            BallClass::Middle
        } else if addr.offset < a {
            BallClass::Left
        } else if len - addr.offset < a {
            BallClass::Right
        } else {
            BallClass::Middle
        };
        if class == BallClass::Middle {
            continue;
        }
        let state = run.as_mut().expect("run set above");
        match state.1 {
            Some((prev, prev_t)) if prev != class => {
                let dir = if class == BallClass::Right { Dir::Forward } else { Dir::Backward };
                letters.push(CrossingLetter { letter: Letter { dir, step: j }, window: (prev_t, t) });
            }
            _ => {}
        }
        state.1 = Some((class, t));
    }
    Ok(CrossingWord { letters })
}

/// Per-fact verdicts for a row's behavior word.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FactVerdicts {
    /// (1) the word is nonempty.
    pub nonempty: bool,
    /// (2) directions alternate.
    pub alternating: bool,
    /// (3) the word begins and ends with a forward crossing.
    pub forward_bracketed: bool,
    /// (4) no letter at the row's own height.
    pub avoids_row_step: bool,
}

impl FactVerdicts {
    pub fn all(&self) -> bool {
        self.nonempty && self.alternating && self.forward_bracketed && self.avoids_row_step
    }
}

/// Checks the four row-word facts against row height `h`.
pub fn behavior_invariants(word: &BehaviorWord, h: u32) -> FactVerdicts {
    let ls = &word.letters;
    FactVerdicts {
        nonempty: !ls.is_empty(),
        alternating: ls.windows(2).all(|p| p[0].dir != p[1].dir),
        forward_bracketed: ls
            .first()
            .map(|l| l.dir == Dir::Forward)
            .unwrap_or(false)
            && ls.last().map(|l| l.dir == Dir::Forward).unwrap_or(false),
        avoids_row_step: ls.iter().all(|l| l.step != h),
    }
}

/// Which staircase ray a row endpoint must land on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StairRay {
    Left,
    Right,
}

fn ray_vertex(profile: StepProfile, side: StairRay, h: u32) -> VertexId {
    let offset = match side {
        StairRay::Left => 0,
        StairRay::Right => {
            if h == 0 {
                0
            } else {
                step_len(h, profile)
            }
        }
    };
    VertexId::Stair { height: h, offset }
}

/// A candidate row family: `rows[i]` is the row at height `first_row + i`,
/// an edge path between the declared endrays. `declared_stride` is the
/// Lipschitz bound of the lattice map the rows subdivide, so row `h` may
/// carry at most `stride·h + 1` points.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RowFamily {
    pub name: String,
    pub first_row: u32,
    pub declared_stride: u32,
    pub endrays: (StairRay, StairRay),
    pub rows: Vec<Vec<VertexId>>,
}

impl RowFamily {
    pub fn last_row(&self) -> u32 {
        self.first_row + self.rows.len() as u32 - 1
    }

    pub fn row(&self, h: u32) -> &[VertexId] {
        &self.rows[(h - self.first_row) as usize]
    }

    /// Endpoint, A-path, and row-budget validation.
    pub fn validate(&self, space: &Space, a: u32) -> Result<()> {
        let (_, profile) = space.staircase_params().ok_or(Error::NotStaircase)?;
        for (idx, row) in self.rows.iter().enumerate() {
            let h = self.first_row + idx as u32;
            if row.is_empty() {
                return Err(Error::InvalidSpec(format!("row {h} is empty")));
            }
            let want_first = ray_vertex(profile, self.endrays.0, h);
            let want_last = ray_vertex(profile, self.endrays.1, h);
            if row[0] != want_first || row[row.len() - 1] != want_last {
                return Err(Error::EndrayMismatch(h));
            }
            let allowed = (self.declared_stride as usize) * h as usize + 1;
            if row.len() > allowed {
                return Err(Error::RowBudget {
                    row: h,
                    len: row.len(),
                    stride: self.declared_stride,
                    allowed,
                });
            }
            for (i, pair) in row.windows(2).enumerate() {
                if bounded_distance(space, &pair[0], &pair[1], a)?.is_none() {
                    return Err(Error::NotAPath { stride: a, index: i, len: a + 1 });
                }
            }
        }
        Ok(())
    }
}

/// Path along a ray between two heights (inclusive), one vertex per step.
fn ray_path(profile: StepProfile, side: StairRay, from: u32, to: u32) -> Vec<VertexId> {
    let mut out = Vec::new();
    let mut h = from;
    loop {
        out.push(ray_vertex(profile, side, h));
        if h == to {
            break;
        }
        h = if to > h { h + 1 } else { h - 1 };
    }
    out
}

/// Path across `step(j)` between two offsets (inclusive).
fn step_path(j: u32, from: u32, to: u32) -> Vec<VertexId> {
    let mut out = Vec::new();
    let mut k = from;
    loop {
        out.push(VertexId::Stair { height: j, offset: k });
        if k == to {
            break;
        }
        k = if to > k { k + 1 } else { k - 1 };
    }
    out
}

fn glue(parts: Vec<Vec<VertexId>>) -> Vec<VertexId> {
    let mut out: Vec<VertexId> = Vec::new();
    for part in parts {
        if let Some(first) = part.first() {
            if out.last() == Some(first) {
                out.extend(part.into_iter().skip(1));
                continue;
            }
        }
        out.extend(part);
    }
    out
}

/// Row descending the left ray, crossing the listed steps in alternating
/// directions, and ascending the right ray.
fn crossing_row(profile: StepProfile, h: u32, crossings: &[(u32, Dir)]) -> Vec<VertexId> {
    let mut parts: Vec<Vec<VertexId>> = Vec::new();
    let mut side = StairRay::Left;
    let mut at = h;
    for &(j, dir) in crossings {
        // Walk along the current ray to height j.
        parts.push(match side {
            StairRay::Left => ray_path(profile, StairRay::Left, at, j),
            StairRay::Right => ray_path(profile, StairRay::Right, at, j),
        });
        let len = step_len(j, profile);
        parts.push(match dir {
            Dir::Forward => step_path(j, 0, len),
            Dir::Backward => step_path(j, len, 0),
        });
        side = match dir {
            Dir::Forward => StairRay::Right,
            Dir::Backward => StairRay::Left,
        };
        at = j;
    }
    parts.push(ray_path(profile, side, at, h));
    glue(parts)
}

/// Names of the shipped adversarial generators (each must be refuted on the
/// quadratic staircase).
pub fn shipped_generators() -> &'static [&'static str] {
    &["direct-crosser", "hugger", "zigzag", "bouncer", "weaver", "high-crosser"]
}

/// Builds a named candidate family on a staircase space.
///
/// Besides the adversarial six, `sweep` is the natural candidate (crosses
/// the step at its own height; only the constant-step space affords it the
/// row budget), `constant` dwells on the left ray, and `h-crosser` is the
/// fact-(4) violator.
pub fn generator(
    space: &Space,
    name: &str,
    first_row: u32,
    last_row: u32,
) -> Result<RowFamily> {
    let (n_max, profile) = space.staircase_params().ok_or(Error::NotStaircase)?;
    if last_row < first_row || last_row > n_max {
        return Err(Error::InvalidSpec(format!(
            "row range {first_row}..={last_row} outside the staircase (n_max {n_max})"
        )));
    }
    let rows_for = |crossings: &[(u32, Dir)]| -> Vec<Vec<VertexId>> {
        (first_row..=last_row).map(|h| crossing_row(profile, h, crossings)).collect()
    };
    let fam = |name: &str, stride: u32, endrays: (StairRay, StairRay), rows| RowFamily {
        name: name.to_string(),
        first_row,
        declared_stride: stride,
        endrays,
        rows,
    };
    let lr = (StairRay::Left, StairRay::Right);
    let family = match name {
        "direct-crosser" => fam(name, 3, lr, rows_for(&[(5, Dir::Forward)])),
        "hugger" => fam(name, 3, lr, rows_for(&[(4, Dir::Forward)])),
        "zigzag" => fam(
            name,
            12,
            lr,
            rows_for(&[(5, Dir::Forward), (7, Dir::Backward), (9, Dir::Forward)]),
        ),
        "bouncer" => fam(
            name,
            9,
            lr,
            rows_for(&[(6, Dir::Forward), (6, Dir::Backward), (6, Dir::Forward)]),
        ),
        "weaver" => fam(
            name,
            9,
            lr,
            rows_for(&[(4, Dir::Forward), (5, Dir::Backward), (6, Dir::Forward)]),
        ),
        "high-crosser" => fam(name, 9, lr, rows_for(&[(12, Dir::Forward)])),
        "sweep" => {
            let rows = (first_row..=last_row)
                .map(|h| {
                    let cross = step_path(h, 0, step_len(h, profile));
                    let budget = h as usize + 1;
                    let mut row = Vec::new();
                    while row.len() + cross.len() < budget {
                        row.push(ray_vertex(profile, StairRay::Left, h));
                    }
                    row.extend(cross);
                    row
                })
                .collect();
            fam(name, 1, lr, rows)
        }
        "constant" => {
            let rows = (first_row..=last_row)
                .map(|h| vec![ray_vertex(profile, StairRay::Left, h); h as usize + 1])
                .collect();
            fam(name, 1, (StairRay::Left, StairRay::Left), rows)
        }
        "h-crosser" => {
            let rows =
                (first_row..=last_row).map(|h| crossing_row(profile, h, &[(h, Dir::Forward)])).collect();
            fam(name, 200, lr, rows)
        }
        other => return Err(Error::UnknownKind(format!("generator `{other}`"))),
    };
    Ok(family)
}

/// Scan of one row: its reduced word and fact verdicts.
#[derive(Debug, Clone, Serialize)]
pub struct RowScan {
    pub row: u32,
    pub cleared: bool,
    pub word: BehaviorWord,
    pub facts: FactVerdicts,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum ScanOutcome {
    /// All cleared rows share one reduced word.
    Stable { word: BehaviorWord },
    /// Two consecutive cleared rows disagree.
    Unstable { rows: (u32, u32), words: (BehaviorWord, BehaviorWord) },
    /// No row clears the forbidden region.
    NeverCleared,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    /// First row from which every row avoids heights `<= A`.
    pub threshold: Option<u32>,
    pub rows: Vec<RowScan>,
    pub outcome: ScanOutcome,
}

/// Computes `behav(u_h)` for every row, locating the threshold where images
/// clear the forbidden region (all heights `<= A`), and reports the stable
/// word or the first disagreeing pair.
pub fn stability_scan(space: &Space, family: &RowFamily, a: u32) -> Result<StabilityReport> {
    family.validate(space, a)?;
    let cleared_row = |row: &[VertexId]| -> Result<bool> {
        for v in row {
            if classify(space, v)?.height <= a {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut rows = Vec::new();
    for (idx, row) in family.rows.iter().enumerate() {
        let h = family.first_row + idx as u32;
        let cleared = cleared_row(row)?;
        let word = if cleared {
            reduce_word(&crossing_word(space, row, a)?.raw())
        } else {
            BehaviorWord::default()
        };
        let facts = behavior_invariants(&word, h);
        rows.push(RowScan { row: h, cleared, word, facts });
    }
    // Threshold: first row from which all later rows stay cleared.
    let threshold = rows
        .iter()
        .rposition(|r| !r.cleared)
        .map(|p| p + 1)
        .unwrap_or(0);
    let threshold = if threshold < rows.len() {
        Some(rows[threshold].row)
    } else {
        None
    };
    let outcome = match threshold {
        None => ScanOutcome::NeverCleared,
        Some(t) => {
            let cleared: Vec<&RowScan> = rows.iter().filter(|r| r.row >= t).collect();
            let mut outcome = ScanOutcome::Stable { word: cleared[0].word.clone() };
            for pair in cleared.windows(2) {
                if pair[0].word != pair[1].word {
                    outcome = ScanOutcome::Unstable {
                        rows: (pair[0].row, pair[1].row),
                        words: (pair[0].word.clone(), pair[1].word.clone()),
                    };
                    break;
                }
            }
            outcome
        }
    };
    Ok(StabilityReport { threshold, rows, outcome })
}

#[derive(Debug, Clone, Serialize)]
pub struct RowWitness {
    pub row: u32,
    /// Index in the row path (the lattice time coordinate after
    /// subdivision).
    pub index: usize,
    pub vertex: VertexId,
}

/// The properness contradiction made explicit: one lattice point per row
/// mapping into a fixed access ball.
#[derive(Debug, Clone, Serialize)]
pub struct RefutationWitness {
    pub step: u32,
    pub ball_radius: u32,
    pub points: Vec<RowWitness>,
    /// Exact diameter of the witness image (bounded by construction).
    pub image_diameter: u32,
}

/// Extracts the unbounded-set/bounded-image witness from a stabilized
/// candidate: for the least forward letter `f_j` of the stable word, every
/// cleared row's crossing of `step(j)` starts inside `OB(alpha(j), A)`.
pub fn refute_properness(
    space: &Space,
    family: &RowFamily,
    stable: &BehaviorWord,
    a: u32,
) -> Result<RefutationWitness> {
    let step = stable
        .letters
        .iter()
        .filter(|l| l.dir == Dir::Forward)
        .map(|l| l.step)
        .min()
        .ok_or(Error::StableWordEmpty)?;
    let mut points = Vec::new();
    for (idx, row) in family.rows.iter().enumerate() {
        let h = family.first_row + idx as u32;
        let cleared = row
            .iter()
            .map(|v| classify(space, v).map(|addr| addr.height > a))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .all(|ok| ok);
        if !cleared {
            continue;
        }
        let word = crossing_word(space, row, a)?;
        let Some(hit) = word
            .letters
            .iter()
            .find(|l| l.letter.dir == Dir::Forward && l.letter.step == step)
        else {
            // Below the stability threshold a row may avoid the step.
            continue;
        };
        let index = hit.window.0;
        points.push(RowWitness { row: h, index, vertex: row[index].clone() });
    }
    if points.len() < 2 {
        return Err(Error::NoStableWord(format!(
            "fewer than two rows cross step {step}; no unbounded witness"
        )));
    }
    let mut diameter = 0;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let d = space.distance(&points[i].vertex, &points[j].vertex)?;
            diameter = diameter.max(d);
        }
    }
    Ok(RefutationWitness { step, ball_radius: a, points, image_diameter: diameter })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn stair(n: u32) -> Space {
        Space::staircase(n, StepProfile::Quadratic).unwrap()
    }

    fn ladder(n: u32) -> Space {
        Space::staircase(n, StepProfile::Constant).unwrap()
    }

    fn f(step: u32) -> Letter {
        Letter { dir: Dir::Forward, step }
    }

    fn b(step: u32) -> Letter {
        Letter { dir: Dir::Backward, step }
    }

    #[test]
    fn classify_regions() {
        let s = stair(5);
        let addr = classify(&s, &VertexId::Stair { height: 3, offset: 0 }).unwrap();
        assert_eq!(addr.region, StairRegion::LeftRay);
        let addr = classify(&s, &VertexId::Stair { height: 3, offset: 9 }).unwrap();
        assert_eq!(addr.region, StairRegion::RightRay);
        let addr = classify(&s, &VertexId::Stair { height: 3, offset: 4 }).unwrap();
        assert_eq!(addr.region, StairRegion::StepInterior);
    }

    #[test]
    fn ray_only_path_has_empty_word() {
        let s = stair(20);
        let path = ray_path(StepProfile::Quadratic, StairRay::Left, 15, 5);
        let w = crossing_word(&s, &path, 2).unwrap();
        assert!(w.letters.is_empty());
    }

    #[test]
    fn monotone_traversal_is_single_forward_letter() {
        let s = stair(20);
        let path = step_path(7, 0, 49);
        let w = crossing_word(&s, &path, 2).unwrap();
        assert_eq!(w.raw(), vec![f(7)]);
        // There and back: f then b.
        let mut back = path.clone();
        back.extend(step_path(7, 49, 0).into_iter().skip(1));
        let w = crossing_word(&s, &back, 2).unwrap();
        assert_eq!(w.raw(), vec![f(7), b(7)]);
        assert!(reduce_word(&w.raw()).is_empty());
    }

    #[test]
    fn aborted_crossing_emits_nothing() {
        let s = stair(20);
        // Into the middle of step 6 and back out to the left.
        let mut path = step_path(6, 0, 20);
        path.extend(step_path(6, 20, 0).into_iter().skip(1));
        let w = crossing_word(&s, &path, 3).unwrap();
        assert!(w.letters.is_empty());
    }

    #[test]
    fn reduction_examples() {
        assert!(reduce_word(&[f(3), b(3)]).is_empty());
        assert_eq!(reduce_word(&[f(3), b(3), f(3)]).letters, vec![f(3)]);
        assert_eq!(
            reduce_word(&[f(2), f(3), b(3), b(2), f(2)]).letters,
            vec![f(2)]
        );
    }

    #[test]
    fn reduction_idempotent_and_confluent() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..1000 {
            let n = rng.gen_range(0..14usize);
            let word: Vec<Letter> = (0..n)
                .map(|_| Letter {
                    dir: if rng.gen() { Dir::Forward } else { Dir::Backward },
                    step: rng.gen_range(1..4u32),
                })
                .collect();
            let once = reduce_word(&word);
            let twice = reduce_word(&once.letters);
            assert_eq!(once, twice, "idempotence");
            // Random-order pair cancellation converges to the same word.
            let mut w = word.clone();
            loop {
                let cancellable: Vec<usize> = (0..w.len().saturating_sub(1))
                    .filter(|&i| w[i + 1] == w[i].inverse())
                    .collect();
                match cancellable.choose(&mut rng) {
                    None => break,
                    Some(&i) => {
                        w.drain(i..=i + 1);
                    }
                }
            }
            assert_eq!(w, once.letters, "confluence");
        }
    }

    #[test]
    fn behavior_facts() {
        let w = BehaviorWord { letters: vec![f(3)] };
        assert!(behavior_invariants(&w, 5).all());
        let empty = BehaviorWord::default();
        assert!(!behavior_invariants(&empty, 5).nonempty);
        let w = BehaviorWord { letters: vec![f(3), b(4), f(5)] };
        let v = behavior_invariants(&w, 6);
        assert!(v.alternating && v.forward_bracketed && v.avoids_row_step);
        let v5 = behavior_invariants(&w, 5);
        assert!(!v5.avoids_row_step);
    }

    #[test]
    fn shipped_generators_stabilize_and_refute() {
        let s = stair(60);
        for name in shipped_generators() {
            for a in [1, 2, 3] {
                let fam = generator(&s, name, 20, 45).unwrap();
                let rep = stability_scan(&s, &fam, a).unwrap();
                let ScanOutcome::Stable { word } = &rep.outcome else {
                    panic!("{name} at A={a}: {:?}", rep.outcome);
                };
                assert!(!word.is_empty(), "{name} at A={a}");
                for row in rep.rows.iter().filter(|r| r.cleared) {
                    assert!(row.facts.all(), "{name} at A={a}, row {}", row.row);
                }
                let wtn = refute_properness(&s, &fam, word, a).unwrap();
                assert!(wtn.points.len() >= 20);
                assert!(wtn.image_diameter < 2 * a, "image stays in one access ball");
            }
        }
    }

    #[test]
    fn expected_stable_words() {
        let s = stair(60);
        let cases = [
            ("direct-crosser", vec![f(5)]),
            ("zigzag", vec![f(5), b(7), f(9)]),
            ("bouncer", vec![f(6)]),
            ("weaver", vec![f(4), b(5), f(6)]),
        ];
        for (name, want) in cases {
            let fam = generator(&s, name, 20, 30).unwrap();
            let rep = stability_scan(&s, &fam, 2).unwrap();
            let ScanOutcome::Stable { word } = rep.outcome else {
                panic!("{name} unstable");
            };
            assert_eq!(word.letters, want, "{name}");
        }
    }

    #[test]
    fn constant_family_has_empty_stable_word() {
        let s = stair(50);
        let fam = generator(&s, "constant", 10, 30).unwrap();
        let rep = stability_scan(&s, &fam, 2).unwrap();
        assert_eq!(rep.outcome, ScanOutcome::Stable { word: BehaviorWord::default() });
        let ScanOutcome::Stable { word } = rep.outcome else { unreachable!() };
        assert!(matches!(
            refute_properness(&s, &fam, &word, 2),
            Err(Error::StableWordEmpty)
        ));
    }

    #[test]
    fn ladder_sweep_has_no_refutation() {
        let s = ladder(60);
        for a in [1, 2, 3] {
            let fam = generator(&s, "sweep", 20, 45).unwrap();
            let rep = stability_scan(&s, &fam, a).unwrap();
            // Unit steps cannot host a crossing once the access balls
            // overlap: words are empty, nothing to refute.
            let ScanOutcome::Stable { word } = rep.outcome else {
                panic!("sweep on the ladder should scan cleanly");
            };
            assert!(word.is_empty());
            assert!(matches!(
                refute_properness(&s, &fam, &word, a),
                Err(Error::StableWordEmpty)
            ));
        }
    }

    #[test]
    fn sweep_on_quadratic_staircase_busts_the_budget() {
        let s = stair(40);
        let fam = generator(&s, "sweep", 10, 20).unwrap();
        assert!(matches!(
            stability_scan(&s, &fam, 2),
            Err(Error::RowBudget { .. })
        ));
    }

    #[test]
    fn h_crosser_violates_fact_four_every_row() {
        let s = stair(60);
        let fam = generator(&s, "h-crosser", 20, 32).unwrap();
        let rep = stability_scan(&s, &fam, 3).unwrap();
        for row in rep.rows.iter().filter(|r| r.cleared) {
            assert!(!row.facts.avoids_row_step, "row {}", row.row);
        }
        assert!(matches!(rep.outcome, ScanOutcome::Unstable { .. }));
    }

    #[test]
    fn subdivision_multiplicativity() {
        let s = stair(60);
        let fam = generator(&s, "zigzag", 24, 30).unwrap();
        let a = 2;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for row in &fam.rows {
            let whole = crossing_word(&s, row, a).unwrap();
            // Split points near the rays: offset within a of either end.
            let near_rays: Vec<usize> = (0..row.len())
                .filter(|&i| {
                    let addr = classify(&s, &row[i]).unwrap();
                    let len = step_len(addr.height.max(1), StepProfile::Quadratic);
                    addr.offset < a || len - addr.offset < a
                })
                .collect();
            let mut cuts: Vec<usize> = near_rays
                .choose_multiple(&mut rng, 3)
                .copied()
                .collect();
            cuts.push(0);
            cuts.push(row.len() - 1);
            cuts.sort();
            cuts.dedup();
            let mut glued_raw: Vec<Letter> = Vec::new();
            let mut glued_reduced: Vec<Letter> = Vec::new();
            for pair in cuts.windows(2) {
                let seg = crossing_word(&s, &row[pair[0]..=pair[1]], a).unwrap();
                glued_raw.extend(seg.raw());
                glued_reduced.extend(reduce_word(&seg.raw()).letters);
            }
            assert_eq!(glued_raw, whole.raw(), "unreduced concatenation");
            assert_eq!(
                reduce_word(&glued_reduced),
                reduce_word(&whole.raw()),
                "reduce-then-concat matches concat-then-reduce"
            );
        }
    }

    #[test]
    fn crossing_windows_satisfy_membership() {
        let s = stair(60);
        let fam = generator(&s, "weaver", 22, 28).unwrap();
        let a = 3;
        for row in &fam.rows {
            let word = crossing_word(&s, row, a).unwrap();
            for l in &word.letters {
                let (x, y) = l.window;
                let start = classify(&s, &row[x]).unwrap();
                let end = classify(&s, &row[y]).unwrap();
                assert_eq!(start.height, l.letter.step);
                assert_eq!(end.height, l.letter.step);
                let len = step_len(l.letter.step, StepProfile::Quadratic);
                let (near_start, near_end) = match l.letter.dir {
                    Dir::Forward => (start.offset, len - end.offset),
                    Dir::Backward => (len - start.offset, end.offset),
                };
                assert!(near_start < a && near_end < a);
                for t in (x + 1)..y {
                    let mid = classify(&s, &row[t]).unwrap();
                    assert_eq!(mid.height, l.letter.step, "interior stays on the step");
                    assert!(
                        mid.offset >= a && len - mid.offset >= a,
                        "interior outside both balls"
                    );
                }
            }
        }
    }

    #[test]
    fn non_a_path_is_rejected() {
        let s = stair(30);
        let path = vec![
            VertexId::Stair { height: 10, offset: 0 },
            VertexId::Stair { height: 14, offset: 0 },
        ];
        assert!(matches!(
            crossing_word(&s, &path, 2),
            Err(Error::NotAPath { .. })
        ));
    }

    #[test]
    fn interior_presence_below_a_is_rejected() {
        let s = stair(30);
        let path = step_path(2, 0, 4);
        assert!(matches!(
            crossing_word(&s, &path, 3),
            Err(Error::BallRadiusTooLarge(3, 2))
        ));
    }
}
