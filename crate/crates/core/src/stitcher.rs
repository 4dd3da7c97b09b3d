//! Turning words into stitches.
//!
//! A [`StitchPattern`] gives each family an offset word; [`generate_design`]
//! materializes it over a [`Window`] as two disjoint segment sets, the face
//! of the fabric (front) and the reverse (back).

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{
    is_line_present, line_from_ordinal, present_line_ordinal, vertex_degree_class, Family,
    GridConvention, LineId, PerFamily, SegmentId, Vertex, VertexClass, Window,
};
use crate::words::{koch_word, palindromic_period, BinaryWord, KochOrder};

/// Which side of the fabric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Front,
    Back,
}

/// How offset bits are assigned to the stitched lines of one family.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionMode {
    Constant(u8),
    Periodic(BinaryWord),
    /// The Koch word of this order, repeated forwards and backwards.
    Koch(KochOrder),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DirectionSpec {
    pub mode: DirectionMode,
    /// Shift applied to line ordinals before the word lookup.
    pub phase: i64,
}

impl DirectionSpec {
    pub fn constant(bit: u8) -> Self {
        Self {
            mode: DirectionMode::Constant(bit & 1),
            phase: 0,
        }
    }

    pub fn periodic(word: BinaryWord) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(Self {
            mode: DirectionMode::Periodic(word),
            phase: 0,
        })
    }

    pub fn koch(order: KochOrder) -> Self {
        Self {
            mode: DirectionMode::Koch(order),
            phase: 0,
        }
    }

    pub fn with_phase(mut self, phase: i64) -> Self {
        self.phase = phase;
        self
    }

    /// One period of the bit sequence over line ordinals.
    pub fn word(&self) -> BinaryWord {
        match &self.mode {
            DirectionMode::Constant(bit) => BinaryWord::from_bits([*bit != 0]),
            DirectionMode::Periodic(w) => w.clone(),
            DirectionMode::Koch(order) => {
                palindromic_period(&koch_word(*order)).expect("Koch words are non-empty")
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match &self.mode {
            DirectionMode::Constant(b) if *b > 1 => Err(Error::InvalidLetter {
                position: 0,
                letter: char::from(b'0' + (*b).min(9)),
            }),
            DirectionMode::Periodic(w) if w.is_empty() => Err(Error::EmptyWord),
            _ => Ok(()),
        }
    }
}

/// Stitching instructions for all three directions plus the grid convention.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StitchPattern {
    pub spec: PerFamily<DirectionSpec>,
    pub convention: GridConvention,
}

impl StitchPattern {
    pub fn new(spec: PerFamily<DirectionSpec>, convention: GridConvention) -> Result<Self> {
        for (_, d) in spec.iter() {
            d.validate()?;
        }
        convention.validate()?;
        Ok(Self { spec, convention })
    }

    /// The same instructions in every direction, default convention.
    pub fn uniform(spec: DirectionSpec) -> Result<Self> {
        Self::new(PerFamily::splat(spec), GridConvention::default())
    }

    pub fn uniform_word(word: &str) -> Result<Self> {
        Self::uniform(DirectionSpec::periodic(word.parse()?)?)
    }

    pub fn koch(order: KochOrder, phases: PerFamily<i64>) -> Self {
        Self {
            spec: PerFamily::from_fn(|f| DirectionSpec::koch(order).with_phase(phases[f])),
            convention: GridConvention::default(),
        }
    }

    pub fn with_convention(mut self, convention: GridConvention) -> Self {
        self.convention = convention;
        self
    }
}

/// Word and phase of one family, resolved once for repeated lookups.
#[derive(Debug, Clone)]
struct ResolvedDirection {
    word: BinaryWord,
    phase: i64,
    base: i64,
    slope: i64,
}

impl ResolvedDirection {
    fn new(pattern: &StitchPattern, family: Family) -> Self {
        let spec = &pattern.spec[family];
        Self {
            word: spec.word(),
            phase: spec.phase,
            base: pattern.convention.phase_base[family] as i64,
            slope: pattern.convention.phase_slope[family] as i64,
        }
    }

    fn bit(&self, ordinal: i64) -> u8 {
        self.word.letter_periodic(ordinal + self.phase)
    }

    /// Parity offset added to `s` along the line with this ordinal.
    fn line_offset(&self, ordinal: i64) -> i64 {
        self.base + self.slope * ordinal + self.bit(ordinal) as i64
    }
}

/// The offset bit of a stitched line: 1 when its first stitch is on the front.
pub fn line_bit(line: LineId, pattern: &StitchPattern) -> Result<u8> {
    let ordinal = present_line_ordinal(line, &pattern.convention)?;
    Ok(ResolvedDirection::new(pattern, line.family).bit(ordinal))
}

/// Front iff `s + phase_base + phase_slope·ordinal + bit` is odd.
pub fn is_front(seg: SegmentId, pattern: &StitchPattern) -> Result<bool> {
    let ordinal = present_line_ordinal(seg.line, &pattern.convention)?;
    let dir = ResolvedDirection::new(pattern, seg.family());
    Ok((seg.s + dir.line_offset(ordinal)).rem_euclid(2) == 1)
}

/// Range of `s` for which the segment of `line` has both endpoints in `w`.
fn segment_range(line: LineId, w: &Window) -> Option<(i64, i64)> {
    let k = line.k;
    let (lo, hi) = match line.family {
        Family::A => {
            if k < w.j_min || k > w.j_max {
                return None;
            }
            (w.i_min, w.i_max - 1)
        }
        Family::B => {
            if k < w.i_min || k > w.i_max {
                return None;
            }
            (w.j_min, w.j_max - 1)
        }
        Family::C => (w.j_min.max(k - w.i_max), (w.j_max - 1).min(k - 1 - w.i_min)),
    };
    (lo <= hi).then_some((lo, hi))
}

/// Range of line coordinates of `family` meeting the window.
fn line_range(family: Family, w: &Window) -> (i64, i64) {
    match family {
        Family::A => (w.j_min, w.j_max),
        Family::B => (w.i_min, w.i_max),
        Family::C => (w.i_min + w.j_min, w.i_max + w.j_max),
    }
}

/// A materialized design over a finite window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Design {
    pub window: Window,
    pub front: BTreeSet<SegmentId>,
    pub back: BTreeSet<SegmentId>,
    pub pattern: StitchPattern,
}

impl Design {
    pub fn side(&self, side: Side) -> &BTreeSet<SegmentId> {
        match side {
            Side::Front => &self.front,
            Side::Back => &self.back,
        }
    }

    pub fn segment_count(&self) -> usize {
        self.front.len() + self.back.len()
    }

    /// Number of `side` segments at each touched vertex.
    pub fn degrees(&self, side: Side) -> HashMap<Vertex, u8> {
        let mut deg = HashMap::new();
        for seg in self.side(side) {
            let (p, q) = seg.endpoints();
            *deg.entry(p).or_insert(0) += 1;
            *deg.entry(q).or_insert(0) += 1;
        }
        deg
    }
}

/// Materialize `pattern` over `window`: every stitched-line segment with both
/// endpoints in the window, split into front and back.
pub fn generate_design(window: Window, pattern: &StitchPattern) -> Result<Design> {
    let limit = Window::MAX_VERTICES;
    if window.vertex_count() > limit {
        return Err(Error::WindowTooLarge {
            vertices: window.vertex_count(),
            limit,
        });
    }
    pattern.convention.validate()?;
    let conv = &pattern.convention;

    let mut lines = Vec::new();
    for family in Family::ALL {
        let (lo, hi) = line_range(family, &window);
        lines.extend(
            (lo..=hi)
                .map(|k| LineId::new(family, k))
                .filter(|l| is_line_present(*l, conv)),
        );
    }
    let resolved = PerFamily::from_fn(|f| ResolvedDirection::new(pattern, f));

    // (segment, is_front) in canonical order: lines are sorted and s ascends
    let per_line: Vec<Vec<(SegmentId, bool)>> = lines
        .par_iter()
        .map(|&line| {
            let Some((lo, hi)) = segment_range(line, &window) else {
                return Vec::new();
            };
            let ordinal = present_line_ordinal(line, conv).expect("line filtered as present");
            let offset = resolved[line.family].line_offset(ordinal);
            (lo..=hi)
                .map(|s| (SegmentId::new(line, s), (s + offset).rem_euclid(2) == 1))
                .collect()
        })
        .collect();

    let mut front = Vec::new();
    let mut back = Vec::new();
    for (seg, f) in per_line.into_iter().flatten() {
        if f {
            front.push(seg);
        } else {
            back.push(seg);
        }
    }
    Ok(Design {
        window,
        front: front.into_iter().collect(),
        back: back.into_iter().collect(),
        pattern: pattern.clone(),
    })
}

/// The design seen from the reverse of the fabric.
pub fn dual(design: &Design) -> Design {
    Design {
        window: design.window,
        front: design.back.clone(),
        back: design.front.clone(),
        pattern: design.pattern.clone(),
    }
}

/// Outcome of one structural check on a design.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantResult {
    pub pass: bool,
    pub checked: u64,
    pub violations: u64,
}

impl InvariantResult {
    fn from_counts(checked: u64, violations: u64) -> Self {
        Self {
            pass: violations == 0,
            checked,
            violations,
        }
    }
}

/// Checks the structural invariants every generated design must satisfy.
///
/// Keys: `partition`, `alternation`, `degree_two`, `empty_untouched`, and
/// `quarter_empty` (only meaningful on even-sided windows; skipped otherwise).
pub fn check_invariants(design: &Design) -> BTreeMap<String, InvariantResult> {
    let mut out = BTreeMap::new();
    let conv = &design.pattern.convention;
    let w = design.window;

    // partition: front and back disjoint and together exactly the stitched segments
    let mut expected = 0u64;
    let mut missing = 0u64;
    for family in Family::ALL {
        let (lo, hi) = line_range(family, &w);
        for k in lo..=hi {
            let line = LineId::new(family, k);
            if !is_line_present(line, conv) {
                continue;
            }
            if let Some((a, b)) = segment_range(line, &w) {
                for s in a..=b {
                    expected += 1;
                    let seg = SegmentId::new(line, s);
                    if design.front.contains(&seg) == design.back.contains(&seg) {
                        missing += 1;
                    }
                }
            }
        }
    }
    let overlap = design.front.intersection(&design.back).count() as u64;
    let extra = design
        .front
        .iter()
        .chain(design.back.iter())
        .filter(|seg| {
            !is_line_present(seg.line, conv)
                || segment_range(seg.line, &w).is_none_or(|(a, b)| seg.s < a || seg.s > b)
        })
        .count() as u64;
    out.insert(
        "partition".to_string(),
        InvariantResult::from_counts(expected, missing + overlap + extra),
    );

    // alternation along every stitched line
    let mut checked = 0u64;
    let mut bad = 0u64;
    let all: BTreeMap<SegmentId, bool> = design
        .front
        .iter()
        .map(|s| (*s, true))
        .chain(design.back.iter().map(|s| (*s, false)))
        .collect();
    let mut prev: Option<(SegmentId, bool)> = None;
    for (&seg, &f) in &all {
        if let Some((p, pf)) = prev {
            if p.line == seg.line && p.s + 1 == seg.s {
                checked += 1;
                if pf == f {
                    bad += 1;
                }
            }
        }
        prev = Some((seg, f));
    }
    out.insert(
        "alternation".to_string(),
        InvariantResult::from_counts(checked, bad),
    );

    // degree two on interior visited vertices, zero on empty vertices
    let front_deg = design.degrees(Side::Front);
    let back_deg = design.degrees(Side::Back);
    let (mut interior, mut bad_deg, mut empties, mut bad_empty) = (0u64, 0u64, 0u64, 0u64);
    let mut empty_total = 0u64;
    for v in w.vertices() {
        let fd = front_deg.get(&v).copied().unwrap_or(0);
        let bd = back_deg.get(&v).copied().unwrap_or(0);
        match vertex_degree_class(v, conv) {
            VertexClass::Empty => {
                empty_total += 1;
                empties += 1;
                if fd + bd != 0 {
                    bad_empty += 1;
                }
            }
            VertexClass::Visited if w.is_interior(v) => {
                interior += 1;
                if fd != 2 || bd != 2 {
                    bad_deg += 1;
                }
            }
            VertexClass::Visited => {}
        }
    }
    out.insert(
        "degree_two".to_string(),
        InvariantResult::from_counts(interior, bad_deg),
    );
    out.insert(
        "empty_untouched".to_string(),
        InvariantResult::from_counts(empties, bad_empty),
    );

    if w.width() % 2 == 0 && w.height() % 2 == 0 {
        let total = w.vertex_count() as u64;
        let off = (4 * empty_total).abs_diff(total);
        out.insert(
            "quarter_empty".to_string(),
            InvariantResult {
                pass: off == 0,
                checked: total,
                violations: empty_total,
            },
        );
    }
    out
}

/// The first stitched line of each family with the given ordinal, handy in tests.
pub fn ordinal_line(family: Family, ordinal: i64, pattern: &StitchPattern) -> LineId {
    line_from_ordinal(family, ordinal, &pattern.convention)
}
