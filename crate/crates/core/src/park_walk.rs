//! Walks on a park of junctions and trails where every junction has three
//! trails, turning alternately left and right until the walker is back at
//! the starting junction.
//!
//! Left and right come from a rotation system: each junction lists its three
//! trails counterclockwise. Entering via trail `e`, a left turn leaves along
//! the trail after `e` and a right turn along the trail before it.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seed;

/// Layout as read from JSON, before validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawLayout {
    pub junctions: usize,
    pub trails: Vec<[usize; 2]>,
    /// Junction id (as a string) to its trails in counterclockwise order.
    pub rotation: BTreeMap<String, Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LayoutViolation {
    #[error("layout has no junctions")]
    NoJunctions,
    #[error("trail {trail} has endpoint {junction} out of range")]
    EndpointOutOfRange { trail: usize, junction: usize },
    #[error("trail {0} is a self-loop")]
    SelfLoop(usize),
    #[error("parallel trails {0} and {1}")]
    ParallelTrails(usize, usize),
    #[error("junction {junction} has degree {degree}, not 3")]
    DegreeNotThree { junction: usize, degree: usize },
    #[error("junction {0} has no rotation")]
    MissingRotation(usize),
    #[error("rotation key {0:?} is not a junction")]
    UnknownRotationKey(String),
    #[error("malformed rotation at junction {junction}: {reason}")]
    MalformedRotation { junction: usize, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct LayoutError(pub Vec<LayoutViolation>);

impl fmt::Display for LayoutError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "invalid layout: {}", parts.join("; "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WalkError {
    #[error("junction {0} out of range")]
    JunctionOutOfRange(usize),
    #[error("trail {0} out of range")]
    TrailOutOfRange(usize),
    #[error("trail {trail} does not end at junction {junction}")]
    NotIncident { trail: usize, junction: usize },
    #[error("walk did not return within {0} steps")]
    GuardExceeded(usize),
    #[error("search needs at least 4 junctions, got {0}")]
    TooFewJunctions(usize),
}

/// A validated cubic layout with a rotation system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawLayout", into = "RawLayout")]
pub struct ParkLayout {
    trails: Vec<[usize; 2]>,
    rotation: Vec<[usize; 3]>,
}

impl TryFrom<RawLayout> for ParkLayout {
    type Error = LayoutError;
    fn try_from(raw: RawLayout) -> Result<Self, Self::Error> {
        validate_layout(&raw)
    }
}

impl From<ParkLayout> for RawLayout {
    fn from(layout: ParkLayout) -> Self {
        RawLayout {
            junctions: layout.rotation.len(),
            trails: layout.trails,
            rotation: layout.rotation.iter().enumerate().map(|(v, r)| (v.to_string(), r.to_vec())).collect(),
        }
    }
}

pub fn validate_layout(raw: &RawLayout) -> Result<ParkLayout, LayoutError> {
    let n = raw.junctions;
    let mut bad = Vec::new();
    if n == 0 {
        bad.push(LayoutViolation::NoJunctions);
    }
    let mut incident = vec![Vec::new(); n];
    let mut seen = BTreeMap::new();
    for (t, &[u, v]) in raw.trails.iter().enumerate() {
        let mut in_range = true;
        for w in [u, v] {
            if w >= n {
                bad.push(LayoutViolation::EndpointOutOfRange { trail: t, junction: w });
                in_range = false;
            }
        }
        if u == v {
            bad.push(LayoutViolation::SelfLoop(t));
            continue;
        }
        if !in_range {
            continue;
        }
        if let Some(&first) = seen.get(&(u.min(v), u.max(v))) {
            bad.push(LayoutViolation::ParallelTrails(first, t));
        } else {
            seen.insert((u.min(v), u.max(v)), t);
        }
        incident[u].push(t);
        incident[v].push(t);
    }
    for (v, ts) in incident.iter().enumerate() {
        if ts.len() != 3 {
            bad.push(LayoutViolation::DegreeNotThree { junction: v, degree: ts.len() });
        }
    }
    for key in raw.rotation.keys() {
        if !key.parse::<usize>().is_ok_and(|v| v < n) {
            bad.push(LayoutViolation::UnknownRotationKey(key.clone()));
        }
    }
    let mut rotation = Vec::with_capacity(n);
    for (v, ts) in incident.iter().enumerate() {
        let Some(rot) = raw.rotation.get(&v.to_string()) else {
            bad.push(LayoutViolation::MissingRotation(v));
            continue;
        };
        let mut sorted = rot.clone();
        sorted.sort_unstable();
        if rot.len() != 3 || sorted != *ts {
            bad.push(LayoutViolation::MalformedRotation {
                junction: v,
                reason: format!("lists {rot:?}, incident trails are {ts:?}"),
            });
            continue;
        }
        rotation.push([rot[0], rot[1], rot[2]]);
    }
    if bad.is_empty() {
        Ok(ParkLayout { trails: raw.trails.clone(), rotation })
    } else {
        Err(LayoutError(bad))
    }
}

impl ParkLayout {
    pub fn junction_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn trail_count(&self) -> usize {
        self.trails.len()
    }

    pub fn trails(&self) -> &[[usize; 2]] {
        &self.trails
    }

    pub fn rotation(&self, junction: usize) -> [usize; 3] {
        self.rotation[junction]
    }

    /// The endpoint of `trail` that is not `junction`.
    pub fn other_end(&self, trail: usize, junction: usize) -> usize {
        let [u, v] = self.trails[trail];
        if u == junction {
            v
        } else {
            u
        }
    }

    /// Trail after `trail` in the counterclockwise order at `junction`.
    pub fn successor(&self, junction: usize, trail: usize) -> usize {
        let rot = self.rotation[junction];
        let p = rot.iter().position(|&t| t == trail).expect("trail incident to junction");
        rot[(p + 1) % 3]
    }

    pub fn predecessor(&self, junction: usize, trail: usize) -> usize {
        let rot = self.rotation[junction];
        let p = rot.iter().position(|&t| t == trail).expect("trail incident to junction");
        rot[(p + 2) % 3]
    }

    /// Connected components, by union-find over trails.
    pub fn component_count(&self) -> usize {
        let n = self.junction_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut count = n;
        for &[u, v] in &self.trails {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a] = b;
                count -= 1;
            }
        }
        count
    }

    /// Faces of the embedding given by the rotation system.
    pub fn face_count(&self) -> usize {
        // dart 2t runs trails[t][0] -> trails[t][1], dart 2t+1 the other way
        let darts = 2 * self.trails.len();
        let mut seen = vec![false; darts];
        let mut faces = 0;
        for d0 in 0..darts {
            if seen[d0] {
                continue;
            }
            faces += 1;
            let mut d = d0;
            while !seen[d] {
                seen[d] = true;
                let t = d / 2;
                let head = self.trails[t][1 - d % 2];
                let next = self.successor(head, t);
                d = 2 * next + usize::from(self.trails[next][0] != head);
            }
        }
        faces
    }

    /// `2c − V + E − F`, zero exactly when every component is drawn in the plane.
    pub fn euler_genus(&self) -> usize {
        2 * self.component_count() + self.trail_count() - self.junction_count() - self.face_count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Turn {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

impl Turn {
    pub fn flip(self) -> Turn {
        match self {
            Turn::Left => Turn::Right,
            Turn::Right => Turn::Left,
        }
    }
}

impl fmt::Display for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Turn::Left => "L",
            Turn::Right => "R",
        })
    }
}

/// Walking along `trail` towards `head`, about to turn `next_turn` there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WalkState {
    pub trail: usize,
    pub head: usize,
    pub next_turn: Turn,
}

pub fn step(layout: &ParkLayout, s: WalkState) -> WalkState {
    let trail = match s.next_turn {
        Turn::Left => layout.successor(s.head, s.trail),
        Turn::Right => layout.predecessor(s.head, s.trail),
    };
    WalkState { trail, head: layout.other_end(trail, s.head), next_turn: s.next_turn.flip() }
}

/// The same trail walked the other way. Walking back, the turn at the far end
/// mirrors the one taken there going forward, so the pending turn is kept.
pub fn reverse(layout: &ParkLayout, s: WalkState) -> WalkState {
    WalkState { trail: s.trail, head: layout.other_end(s.trail, s.head), next_turn: s.next_turn }
}

/// Inverse of [`step`].
pub fn step_back(layout: &ParkLayout, s: WalkState) -> WalkState {
    reverse(layout, step(layout, reverse(layout, s)))
}

/// `(trail, from, to, turn taken on arrival)`; the final arrival takes no turn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "(usize, usize, usize, Option<Turn>)", into = "(usize, usize, usize, Option<Turn>)")]
pub struct WalkStep {
    pub trail: usize,
    pub from: usize,
    pub to: usize,
    pub turn: Option<Turn>,
}

impl From<(usize, usize, usize, Option<Turn>)> for WalkStep {
    fn from((trail, from, to, turn): (usize, usize, usize, Option<Turn>)) -> Self {
        Self { trail, from, to, turn }
    }
}

impl From<WalkStep> for (usize, usize, usize, Option<Turn>) {
    fn from(s: WalkStep) -> Self {
        (s.trail, s.from, s.to, s.turn)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Walk {
    pub start: usize,
    pub steps: Vec<WalkStep>,
    /// Arrivals per junction, including the final arrival at `start`.
    pub visit_counts: Vec<usize>,
}

impl Walk {
    /// Junctions in order, starting and ending at `start`.
    pub fn path(&self) -> Vec<usize> {
        std::iter::once(self.start).chain(self.steps.iter().map(|s| s.to)).collect()
    }
}

pub fn step_guard(layout: &ParkLayout) -> usize {
    4 * layout.trail_count() + 2
}

pub fn simulate(layout: &ParkLayout, start: usize, first_trail: usize, first_turn: Turn) -> Result<Walk, WalkError> {
    if start >= layout.junction_count() {
        return Err(WalkError::JunctionOutOfRange(start));
    }
    if first_trail >= layout.trail_count() {
        return Err(WalkError::TrailOutOfRange(first_trail));
    }
    if !layout.trails[first_trail].contains(&start) {
        return Err(WalkError::NotIncident { trail: first_trail, junction: start });
    }
    let guard = step_guard(layout);
    let mut visit_counts = vec![0; layout.junction_count()];
    let mut steps = Vec::new();
    let mut from = start;
    let mut state = WalkState { trail: first_trail, head: layout.other_end(first_trail, start), next_turn: first_turn };
    while steps.len() < guard {
        let to = state.head;
        visit_counts[to] += 1;
        let done = to == start;
        steps.push(WalkStep { trail: state.trail, from, to, turn: (!done).then_some(state.next_turn) });
        if done {
            return Ok(Walk { start, steps, visit_counts });
        }
        from = to;
        state = step(layout, state);
    }
    Err(WalkError::GuardExceeded(guard))
}

/// Most-visited junction (smallest id on ties) and its arrival count.
pub fn max_visits(w: &Walk) -> (usize, usize) {
    let mut best = (0, 0);
    for (v, &c) in w.visit_counts.iter().enumerate() {
        if c > best.1 {
            best = (v, c);
        }
    }
    best
}

pub fn trail_traversal_counts(w: &Walk) -> BTreeMap<usize, usize> {
    let mut counts = BTreeMap::new();
    for s in &w.steps {
        *counts.entry(s.trail).or_insert(0) += 1;
    }
    counts
}

/// Uniform cubic multigraph via the pairing model, redrawn until simple, with
/// a uniformly random rotation at each junction.
pub fn random_layout(junctions: usize, rng: &mut impl Rng) -> ParkLayout {
    assert!(junctions >= 4 && junctions.is_multiple_of(2), "cubic layouts need an even count ≥ 4");
    let mut points: Vec<usize> = (0..3 * junctions).collect();
    let trails = loop {
        points.shuffle(rng);
        let trails: Vec<[usize; 2]> = points.chunks(2).map(|p| [p[0] / 3, p[1] / 3]).collect();
        let mut pairs = HashSet::new();
        if trails.iter().all(|&[u, v]| u != v && pairs.insert((u.min(v), u.max(v)))) {
            break trails;
        }
    };
    let mut rotation = vec![Vec::with_capacity(3); junctions];
    for (t, &[u, v]) in trails.iter().enumerate() {
        rotation[u].push(t);
        rotation[v].push(t);
    }
    let rotation = rotation
        .into_iter()
        .map(|r| if rng.gen_bool(0.5) { [r[0], r[1], r[2]] } else { [r[0], r[2], r[1]] })
        .collect();
    ParkLayout { trails, rotation }
}

/// Every starting junction, first trail and first turn.
pub fn all_starts(layout: &ParkLayout) -> impl Iterator<Item = (usize, usize, Turn)> + '_ {
    (0..layout.junction_count()).flat_map(move |v| {
        layout.rotation[v].into_iter().flat_map(move |t| [Turn::Left, Turn::Right].map(|turn| (v, t, turn)))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub layout: ParkLayout,
    pub start: usize,
    pub first_trail: usize,
    pub first_turn: Turn,
}

impl Witness {
    pub fn simulate(&self) -> Result<Walk, WalkError> {
        simulate(&self.layout, self.start, self.first_trail, self.first_turn)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extremal {
    pub witness: Witness,
    pub walk: Walk,
    /// `(junction, arrivals)` from [`max_visits`].
    pub max_visits: (usize, usize),
    pub layouts_checked: usize,
}

/// Walk with the most arrivals at one junction over all starts of `layout`,
/// the first in [`all_starts`] order on ties.
pub fn best_walk(layout: &ParkLayout) -> Result<(Witness, Walk, (usize, usize)), WalkError> {
    let mut best: Option<(Witness, Walk, (usize, usize))> = None;
    for (start, first_trail, first_turn) in all_starts(layout) {
        let walk = simulate(layout, start, first_trail, first_turn)?;
        let mv = max_visits(&walk);
        if best.as_ref().is_none_or(|b| mv.1 > b.2 .1) {
            let witness = Witness { layout: layout.clone(), start, first_trail, first_turn };
            best = Some((witness, walk, mv));
        }
    }
    Ok(best.expect("a layout has at least one junction"))
}

/// Samples random layouts with an even number of junctions from 4 up to
/// `max_junctions` (cycling through the sizes) and keeps the walk with the
/// most visits. Ties go to fewer junctions, then the smaller JSON encoding,
/// so the answer does not depend on thread scheduling.
pub fn search_extremal(max_junctions: usize, samples: usize, seed: u64) -> Result<Extremal, WalkError> {
    if max_junctions < 4 {
        return Err(WalkError::TooFewJunctions(max_junctions));
    }
    let sizes: Vec<usize> = (4..=max_junctions).step_by(2).collect();
    let samples = samples.max(1);
    let best = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed::rng(seed, "park-layout", i as u64);
            let layout = random_layout(sizes[i % sizes.len()], &mut rng);
            let (witness, walk, mv) = best_walk(&layout)?;
            let key = serde_json::to_string(&witness.layout).expect("layout serializes");
            Ok((mv.1, layout.junction_count(), key, witness, walk, mv))
        })
        .try_reduce_with(|a, b| {
            let better = b.0 > a.0 || (b.0 == a.0 && (b.1, &b.2) < (a.1, &a.2));
            Ok(if better { b } else { a })
        })
        .expect("at least one sample")?;
    let (_, _, _, witness, walk, max_visits) = best;
    Ok(Extremal { witness, walk, max_visits, layouts_checked: samples })
}

/// Ten-junction layout (junctions `A`–`J` as 0–9) whose walk from `C` along
/// `CA`, turning left first, is `C A H I F G D B A H E F G J B A C`.
pub const EXTREMAL_WITNESS_JSON: &str = include_str!("../data/park_extremal.json");

pub fn extremal_witness() -> Witness {
    serde_json::from_str(EXTREMAL_WITNESS_JSON).expect("bundled witness is valid")
}
