//! Closed stitch paths and motif classes.
//!
//! Every vertex of a design side has degree at most two, so each side splits
//! into simple cycles and (at the window edge) open paths. Cycles are compared
//! up to lattice isometry through a canonical edge-direction word.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::grid::{SegmentId, Vertex, DIRECTIONS};
use crate::stitcher::{Design, Side};

/// A closed stitch path, as its cyclic vertex sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cycle {
    vertices: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a simple lattice cycle: {0}")]
pub struct InvalidCycle(String);

impl Cycle {
    /// Checks adjacency of consecutive vertices (cyclically), no repeats and
    /// length ≥ 3.
    pub fn new(vertices: Vec<Vertex>) -> Result<Self, InvalidCycle> {
        let n = vertices.len();
        if n < 3 {
            return Err(InvalidCycle(format!("length {n} < 3")));
        }
        let mut seen = HashSet::with_capacity(n);
        for (idx, v) in vertices.iter().enumerate() {
            if !seen.insert(*v) {
                return Err(InvalidCycle(format!("vertex {v} repeated")));
            }
            let next = vertices[(idx + 1) % n];
            if v.direction_to(next).is_none() {
                return Err(InvalidCycle(format!("{v} and {next} are not adjacent")));
            }
        }
        Ok(Self { vertices })
    }

    /// Walks unit steps from `start`; the walk must return to `start`.
    pub fn from_directions(start: Vertex, directions: &[u8]) -> Result<Self, InvalidCycle> {
        let mut vertices = Vec::with_capacity(directions.len());
        let mut cur = start;
        for &d in directions {
            vertices.push(cur);
            cur = cur + DIRECTIONS[(d % 6) as usize];
        }
        if cur != start {
            return Err(InvalidCycle(format!("walk ends at {cur}, not {start}")));
        }
        Self::new(vertices)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Number of unit segments.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edge directions 0..5 around the cycle.
    pub fn directions(&self) -> Vec<u8> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                self.vertices[i]
                    .direction_to(self.vertices[(i + 1) % n])
                    .expect("validated adjacency")
            })
            .collect()
    }

    pub fn segments(&self) -> impl Iterator<Item = SegmentId> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| {
            SegmentId::between(self.vertices[i], self.vertices[(i + 1) % n]).expect("adjacent")
        })
    }

    pub fn signature(&self) -> MotifSignature {
        MotifSignature::of_directions(&self.directions())
    }
}

/// An open stitch path cut by the window boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenPath {
    pub vertices: Vec<Vertex>,
    pub segments: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    Cycle(Cycle),
    Open(OpenPath),
}

impl Component {
    pub fn segment_count(&self) -> usize {
        match self {
            Component::Cycle(c) => c.len(),
            Component::Open(p) => p.segments,
        }
    }

    pub fn as_cycle(&self) -> Option<&Cycle> {
        match self {
            Component::Cycle(c) => Some(c),
            Component::Open(_) => None,
        }
    }
}

/// Split one side of a design into connected components.
///
/// Components are ordered by their least vertex. A component is a [`Cycle`]
/// iff all its vertices have degree two; otherwise it is an [`OpenPath`].
pub fn build_components(design: &Design, side: Side) -> Vec<Component> {
    components_of(design.side(side))
}

pub fn components_of(segments: &BTreeSet<SegmentId>) -> Vec<Component> {
    let mut adj: HashMap<Vertex, Vec<Vertex>> = HashMap::with_capacity(segments.len());
    for seg in segments {
        let (p, q) = seg.endpoints();
        adj.entry(p).or_default().push(q);
        adj.entry(q).or_default().push(p);
    }
    let mut order: Vec<Vertex> = adj.keys().copied().collect();
    order.sort_unstable();

    let mut visited: HashSet<Vertex> = HashSet::with_capacity(adj.len());
    let mut out = Vec::new();
    for &root in &order {
        if visited.contains(&root) {
            continue;
        }
        // collect the component
        let mut members = vec![root];
        let mut stack = vec![root];
        visited.insert(root);
        while let Some(v) = stack.pop() {
            for &n in &adj[&v] {
                if visited.insert(n) {
                    members.push(n);
                    stack.push(n);
                }
            }
        }
        let closed = members.iter().all(|v| adj[v].len() == 2);
        let seg_count: usize = members.iter().map(|v| adj[v].len()).sum::<usize>() / 2;
        if closed {
            out.push(Component::Cycle(trace_cycle(root, &adj)));
        } else {
            out.push(Component::Open(trace_open(&members, &adj, seg_count)));
        }
    }
    out
}

/// Walk a degree-2 component from its least vertex towards its lesser neighbor.
fn trace_cycle(start: Vertex, adj: &HashMap<Vertex, Vec<Vertex>>) -> Cycle {
    let first = *adj[&start].iter().min().expect("degree two");
    let mut vertices = vec![start];
    let (mut prev, mut cur) = (start, first);
    while cur != start {
        vertices.push(cur);
        let nbrs = &adj[&cur];
        let next = if nbrs[0] != prev { nbrs[0] } else { nbrs[1] };
        prev = cur;
        cur = next;
    }
    Cycle::new(vertices).expect("degree-two components are simple cycles")
}

fn trace_open(members: &[Vertex], adj: &HashMap<Vertex, Vec<Vertex>>, segments: usize) -> OpenPath {
    let start = members.iter().filter(|v| adj[*v].len() == 1).min().copied();
    let Some(start) = start else {
        // branching component; report members without an order
        let mut vertices = members.to_vec();
        vertices.sort_unstable();
        return OpenPath { vertices, segments };
    };
    let mut vertices = vec![start];
    let mut prev = start;
    let mut cur = adj[&start][0];
    loop {
        vertices.push(cur);
        let nbrs = &adj[&cur];
        if nbrs.len() != 2 {
            break;
        }
        let next = if nbrs[0] != prev { nbrs[0] } else { nbrs[1] };
        prev = cur;
        cur = next;
    }
    if vertices.len() != members.len() {
        vertices = members.to_vec();
        vertices.sort_unstable();
    }
    OpenPath { vertices, segments }
}

/// Canonical isometry-invariant form of a cycle: the least edge-direction
/// word over all starting points, both traversal directions and the twelve
/// point symmetries of the lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MotifSignature(Vec<u8>);

impl MotifSignature {
    pub fn of_directions(dirs: &[u8]) -> Self {
        let mut best: Option<Vec<u8>> = None;
        for reflect in [false, true] {
            for reversed in [false, true] {
                let base: Vec<u8> = if reversed {
                    dirs.iter().rev().map(|d| (d + 3) % 6).collect()
                } else {
                    dirs.to_vec()
                };
                let base: Vec<u8> = if reflect {
                    base.iter().map(|d| (6 - d) % 6).collect()
                } else {
                    base
                };
                for r in 0..6u8 {
                    let rotated: Vec<u8> = base.iter().map(|d| (d + r) % 6).collect();
                    let start = least_rotation(&rotated);
                    let candidate: Vec<u8> = rotated[start..]
                        .iter()
                        .chain(&rotated[..start])
                        .copied()
                        .collect();
                    if best.as_ref().is_none_or(|b| candidate < *b) {
                        best = Some(candidate);
                    }
                }
            }
        }
        Self(best.unwrap_or_default())
    }

    /// Number of unit segments in cycles with this signature.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn directions(&self) -> &[u8] {
        &self.0
    }
}

/// Start index of the lexicographically least rotation (Booth's algorithm).
fn least_rotation(s: &[u8]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let doubled: Vec<u8> = s.iter().chain(s).copied().collect();
    let mut fail: Vec<isize> = vec![-1; 2 * n];
    let mut k: isize = 0;
    for j in 1..2 * n as isize {
        let sj = doubled[j as usize];
        let mut i = fail[(j - k - 1) as usize];
        while i != -1 && sj != doubled[(k + i + 1) as usize] {
            if sj < doubled[(k + i + 1) as usize] {
                k = j - i - 1;
            }
            i = fail[i as usize];
        }
        if sj != doubled[(k + i + 1) as usize] {
            if sj < doubled[k as usize] {
                k = j;
            }
            fail[(j - k) as usize] = -1;
        } else {
            fail[(j - k) as usize] = i + 1;
        }
    }
    k as usize % n
}

impl fmt::Display for MotifSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl Serialize for MotifSignature {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MotifSignature {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.chars()
            .map(|c| match c.to_digit(10) {
                Some(d) if d < 6 => Ok(d as u8),
                _ => Err(serde::de::Error::custom(format!("bad direction {c:?}"))),
            })
            .collect::<Result<Vec<u8>, _>>()
            .map(MotifSignature)
    }
}

/// Closed motifs of one side, grouped by signature.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MotifCensus {
    pub counts: BTreeMap<MotifSignature, usize>,
    pub open_paths: usize,
}

impl MotifCensus {
    pub fn count(&self, signature: &MotifSignature) -> usize {
        self.counts.get(signature).copied().unwrap_or(0)
    }

    pub fn closed_components(&self) -> usize {
        self.counts.values().sum()
    }

    /// Cycle lengths present, with multiplicity per length.
    pub fn lengths(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for (sig, n) in &self.counts {
            *out.entry(sig.len()).or_insert(0) += n;
        }
        out
    }
}

pub fn census_of(components: &[Component]) -> MotifCensus {
    let mut census = MotifCensus::default();
    for c in components {
        match c {
            Component::Cycle(cycle) => *census.counts.entry(cycle.signature()).or_insert(0) += 1,
            Component::Open(_) => census.open_paths += 1,
        }
    }
    census
}

pub fn motif_census(design: &Design, side: Side) -> MotifCensus {
    census_of(&build_components(design, side))
}

/// Whether two cycles are congruent under a lattice isometry.
pub fn cycle_matches(cycle: &Cycle, reference: &Cycle) -> bool {
    cycle.len() == reference.len() && cycle.signature() == reference.signature()
}
