//! Triangular-lattice geometry.
//!
//! Vertices use lattice coordinates `(i, j)` with Cartesian position
//! `(i + j/2, j·√3/2)`. Each vertex lies on one line of each family, with
//! tri-axial line coordinates `a = j` (family A), `b = i` (family B) and
//! `c = i + j` (family C). Everything here is exact integer arithmetic.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the three line directions of the isometric grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// Direction (1, 0).
    A,
    /// Direction (1/2, √3/2).
    B,
    /// Direction (−1/2, √3/2).
    C,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::A, Family::B, Family::C];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
        };
        f.write_str(s)
    }
}

/// A value for each of the three families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PerFamily<T> {
    #[serde(rename = "A")]
    pub a: T,
    #[serde(rename = "B")]
    pub b: T,
    #[serde(rename = "C")]
    pub c: T,
}

impl<T> PerFamily<T> {
    pub fn new(a: T, b: T, c: T) -> Self {
        Self { a, b, c }
    }

    pub fn from_fn(mut f: impl FnMut(Family) -> T) -> Self {
        Self {
            a: f(Family::A),
            b: f(Family::B),
            c: f(Family::C),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Family, &T)> {
        [
            (Family::A, &self.a),
            (Family::B, &self.b),
            (Family::C, &self.c),
        ]
        .into_iter()
    }
}

impl<T: Clone> PerFamily<T> {
    pub fn splat(value: T) -> Self {
        Self::new(value.clone(), value.clone(), value)
    }
}

impl<T> Index<Family> for PerFamily<T> {
    type Output = T;
    fn index(&self, f: Family) -> &T {
        match f {
            Family::A => &self.a,
            Family::B => &self.b,
            Family::C => &self.c,
        }
    }
}

impl<T> IndexMut<Family> for PerFamily<T> {
    fn index_mut(&mut self, f: Family) -> &mut T {
        match f {
            Family::A => &mut self.a,
            Family::B => &mut self.b,
            Family::C => &mut self.c,
        }
    }
}

/// A lattice vertex, or equally a lattice displacement.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
pub struct Vertex {
    pub i: i64,
    pub j: i64,
}

/// Unit steps in directions 0..5, counterclockwise from +x.
pub const DIRECTIONS: [Vertex; 6] = [
    Vertex { i: 1, j: 0 },
    Vertex { i: 0, j: 1 },
    Vertex { i: -1, j: 1 },
    Vertex { i: -1, j: 0 },
    Vertex { i: 0, j: -1 },
    Vertex { i: 1, j: -1 },
];

impl Vertex {
    pub const fn new(i: i64, j: i64) -> Self {
        Self { i, j }
    }

    pub fn neighbors(self) -> impl Iterator<Item = Vertex> {
        DIRECTIONS.into_iter().map(move |d| self + d)
    }

    /// Direction index 0..5 of the unit step `self → other`, if adjacent.
    pub fn direction_to(self, other: Vertex) -> Option<u8> {
        let d = other - self;
        DIRECTIONS.iter().position(|&x| x == d).map(|p| p as u8)
    }

    /// Squared Euclidean length when read as a displacement.
    pub fn norm2(self) -> i64 {
        self.i * self.i + self.i * self.j + self.j * self.j
    }
}

impl Add for Vertex {
    type Output = Vertex;
    fn add(self, o: Vertex) -> Vertex {
        Vertex::new(self.i + o.i, self.j + o.j)
    }
}

impl Sub for Vertex {
    type Output = Vertex;
    fn sub(self, o: Vertex) -> Vertex {
        Vertex::new(self.i - o.i, self.j - o.j)
    }
}

impl Neg for Vertex {
    type Output = Vertex;
    fn neg(self) -> Vertex {
        Vertex::new(-self.i, -self.j)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i, self.j)
    }
}

pub fn vertex_to_cartesian(v: Vertex) -> (f64, f64) {
    (
        v.i as f64 + v.j as f64 / 2.0,
        v.j as f64 * 3f64.sqrt() / 2.0,
    )
}

/// A full line of the grid: family plus its coordinate value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LineId {
    pub family: Family,
    pub k: i64,
}

impl LineId {
    pub const fn new(family: Family, k: i64) -> Self {
        Self { family, k }
    }
}

impl fmt::Display for LineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family, self.k)
    }
}

/// The three lines through `v`, in family order A, B, C.
pub fn lines_through(v: Vertex) -> (LineId, LineId, LineId) {
    (
        LineId::new(Family::A, v.j),
        LineId::new(Family::B, v.i),
        LineId::new(Family::C, v.i + v.j),
    )
}

/// A unit stitch position: segment `s` along `line`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SegmentId {
    pub line: LineId,
    pub s: i64,
}

impl SegmentId {
    pub const fn new(line: LineId, s: i64) -> Self {
        Self { line, s }
    }

    pub fn family(&self) -> Family {
        self.line.family
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        let (k, s) = (self.line.k, self.s);
        match self.line.family {
            Family::A => (Vertex::new(s, k), Vertex::new(s + 1, k)),
            Family::B => (Vertex::new(k, s), Vertex::new(k, s + 1)),
            Family::C => (Vertex::new(k - s, s), Vertex::new(k - s - 1, s + 1)),
        }
    }

    /// The segment joining two adjacent vertices, in either order.
    pub fn between(u: Vertex, v: Vertex) -> Option<SegmentId> {
        let seg = match (v.i - u.i, v.j - u.j) {
            (1, 0) => SegmentId::new(LineId::new(Family::A, u.j), u.i),
            (-1, 0) => SegmentId::new(LineId::new(Family::A, v.j), v.i),
            (0, 1) => SegmentId::new(LineId::new(Family::B, u.i), u.j),
            (0, -1) => SegmentId::new(LineId::new(Family::B, v.i), v.j),
            (-1, 1) => SegmentId::new(LineId::new(Family::C, u.i + u.j), u.j),
            (1, -1) => SegmentId::new(LineId::new(Family::C, v.i + v.j), v.j),
            _ => return None,
        };
        Some(seg)
    }
}

/// How lines are selected and how stitch alternation is anchored.
///
/// Line `k` of family `F` is stitched iff `k ≡ presence_parity[F] (mod 2)`.
/// The phase fields feed the front/back rule in the stitcher.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridConvention {
    pub presence_parity: PerFamily<u8>,
    pub phase_base: PerFamily<u8>,
    pub phase_slope: PerFamily<u8>,
}

impl GridConvention {
    /// Presence parity with family C offset.
    pub const DEFAULT_PRESENCE: PerFamily<u8> = PerFamily { a: 0, b: 0, c: 1 };

    /// Construct and validate a convention.
    pub fn new(
        presence_parity: PerFamily<u8>,
        phase_base: PerFamily<u8>,
        phase_slope: PerFamily<u8>,
    ) -> Result<Self> {
        let conv = Self {
            presence_parity,
            phase_base,
            phase_slope,
        };
        conv.validate()?;
        Ok(conv)
    }

    /// Every vertex must lie on exactly 0 or 2 stitched lines.
    pub fn validate(&self) -> Result<()> {
        for (_, p) in self
            .presence_parity
            .iter()
            .chain(self.phase_base.iter())
            .chain(self.phase_slope.iter())
        {
            if *p > 1 {
                return Err(Error::InvalidConvention(format!(
                    "parity value {p} is not 0 or 1"
                )));
            }
        }
        // the parities of (i, j) determine all three line parities
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let count = present_line_count(Vertex::new(i, j), self);
            if count != 0 && count != 2 {
                return Err(Error::InvalidConvention(format!(
                    "vertex class ({i}, {j}) mod 2 lies on {count} stitched lines"
                )));
            }
        }
        Ok(())
    }
}

impl Default for GridConvention {
    /// The calibrated convention (see `calibrate`): presence `{A:0, B:0, C:1}`,
    /// zero phase bases, unit phase slopes.
    fn default() -> Self {
        Self {
            presence_parity: Self::DEFAULT_PRESENCE,
            phase_base: PerFamily::splat(0),
            phase_slope: PerFamily::splat(1),
        }
    }
}

pub fn is_line_present(line: LineId, conv: &GridConvention) -> bool {
    line.k.rem_euclid(2) == conv.presence_parity[line.family] as i64
}

/// Index of a stitched line among the stitched lines of its family;
/// consecutive stitched lines get consecutive ordinals.
pub fn present_line_ordinal(line: LineId, conv: &GridConvention) -> Result<i64> {
    if !is_line_present(line, conv) {
        return Err(Error::NotAStitchLine(line));
    }
    Ok((line.k - conv.presence_parity[line.family] as i64).div_euclid(2))
}

/// The stitched line with a given ordinal.
pub fn line_from_ordinal(family: Family, ordinal: i64, conv: &GridConvention) -> LineId {
    LineId::new(family, 2 * ordinal + conv.presence_parity[family] as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexClass {
    Empty,
    Visited,
}

fn present_line_count(v: Vertex, conv: &GridConvention) -> usize {
    let (a, b, c) = lines_through(v);
    [a, b, c]
        .into_iter()
        .filter(|l| is_line_present(*l, conv))
        .count()
}

/// Empty iff no stitched line passes through `v`. Under a valid convention
/// the only other possibility is exactly two lines.
pub fn vertex_degree_class(v: Vertex, conv: &GridConvention) -> VertexClass {
    match present_line_count(v, conv) {
        0 => VertexClass::Empty,
        _ => VertexClass::Visited,
    }
}

/// Inclusive parallelogram of lattice vertices `[i_min, i_max] × [j_min, j_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub i_min: i64,
    pub i_max: i64,
    pub j_min: i64,
    pub j_max: i64,
}

impl Window {
    /// Upper bound on vertices in a window that may be materialized.
    pub const MAX_VERTICES: u128 = 1 << 24;

    pub fn new(i_min: i64, i_max: i64, j_min: i64, j_max: i64) -> Result<Self> {
        if i_min > i_max || j_min > j_max {
            return Err(Error::InvalidWindow(format!(
                "{i_min}:{i_max}:{j_min}:{j_max} has an empty range"
            )));
        }
        Ok(Self {
            i_min,
            i_max,
            j_min,
            j_max,
        })
    }

    /// `[lo, hi]` in both coordinates.
    pub fn square(lo: i64, hi: i64) -> Result<Self> {
        Self::new(lo, hi, lo, hi)
    }

    pub fn width(&self) -> i64 {
        self.i_max - self.i_min + 1
    }

    pub fn height(&self) -> i64 {
        self.j_max - self.j_min + 1
    }

    pub fn vertex_count(&self) -> u128 {
        self.width() as u128 * self.height() as u128
    }

    pub fn contains(&self, v: Vertex) -> bool {
        (self.i_min..=self.i_max).contains(&v.i) && (self.j_min..=self.j_max).contains(&v.j)
    }

    /// All six neighbors of `v` lie in the window.
    pub fn is_interior(&self, v: Vertex) -> bool {
        v.i > self.i_min && v.i < self.i_max && v.j > self.j_min && v.j < self.j_max
    }

    /// Vertices in row-major order (`j` outer, `i` inner).
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (self.j_min..=self.j_max)
            .flat_map(move |j| (self.i_min..=self.i_max).map(move |i| Vertex::new(i, j)))
    }

    /// Vertex nearest the middle of the window.
    pub fn center(&self) -> Vertex {
        Vertex::new(
            (self.i_min + self.i_max).div_euclid(2),
            (self.j_min + self.j_max).div_euclid(2),
        )
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}:{}",
            self.i_min, self.i_max, self.j_min, self.j_max
        )
    }
}

impl std::str::FromStr for Window {
    type Err = Error;

    /// Parses `imin:imax:jmin:jmax`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(Error::InvalidWindow(format!(
                "{s:?}: expected imin:imax:jmin:jmax"
            )));
        }
        let mut v = [0i64; 4];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = p
                .trim()
                .parse()
                .map_err(|_| Error::InvalidWindow(format!("{s:?}: {p:?} is not an integer")))?;
        }
        Window::new(v[0], v[1], v[2], v[3])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cartesian_examples() {
        assert_eq!(vertex_to_cartesian(Vertex::new(0, 0)), (0.0, 0.0));
        assert_eq!(vertex_to_cartesian(Vertex::new(1, 0)), (1.0, 0.0));
        let (x, y) = vertex_to_cartesian(Vertex::new(0, 2));
        assert_eq!(x, 1.0);
        assert!((y - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn neighbors_at_unit_distance() {
        let v = Vertex::new(3, -2);
        let (x0, y0) = vertex_to_cartesian(v);
        for n in v.neighbors() {
            let (x, y) = vertex_to_cartesian(n);
            assert!(((x - x0).hypot(y - y0) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn lines_through_examples() {
        let l = |f, k| LineId::new(f, k);
        assert_eq!(
            lines_through(Vertex::new(2, 3)),
            (l(Family::A, 3), l(Family::B, 2), l(Family::C, 5))
        );
        assert_eq!(
            lines_through(Vertex::new(0, 0)),
            (l(Family::A, 0), l(Family::B, 0), l(Family::C, 0))
        );
        assert_eq!(
            lines_through(Vertex::new(-1, 4)),
            (l(Family::A, 4), l(Family::B, -1), l(Family::C, 3))
        );
    }

    #[test]
    fn line_presence_examples() {
        let conv = GridConvention::default();
        assert!(is_line_present(LineId::new(Family::A, 4), &conv));
        assert!(!is_line_present(LineId::new(Family::B, -3), &conv));
        assert!(!is_line_present(LineId::new(Family::C, 4), &conv));
    }

    #[test]
    fn only_odd_offset_parities_are_dilute() {
        // exhaustive over the 8 presence assignments
        for bits in 0u8..8 {
            let p = PerFamily::new(bits & 1, (bits >> 1) & 1, (bits >> 2) & 1);
            let ok = GridConvention::new(p, PerFamily::splat(0), PerFamily::splat(0)).is_ok();
            assert_eq!(ok, bits.count_ones() % 2 == 1, "parities {p:?}");
        }
    }

    #[test]
    fn ordinals() {
        let conv = GridConvention::default();
        assert_eq!(
            present_line_ordinal(LineId::new(Family::A, 4), &conv).unwrap(),
            2
        );
        assert_eq!(
            present_line_ordinal(LineId::new(Family::C, 1), &conv).unwrap(),
            0
        );
        assert_eq!(
            present_line_ordinal(LineId::new(Family::B, -2), &conv).unwrap(),
            -1
        );
        assert!(matches!(
            present_line_ordinal(LineId::new(Family::A, 3), &conv),
            Err(Error::NotAStitchLine(_))
        ));
        for f in Family::ALL {
            for m in -5..5 {
                let line = line_from_ordinal(f, m, &conv);
                assert_eq!(present_line_ordinal(line, &conv).unwrap(), m);
            }
        }
    }

    #[test]
    fn degree_classes() {
        let conv = GridConvention::default();
        assert_eq!(
            vertex_degree_class(Vertex::new(1, 1), &conv),
            VertexClass::Empty
        );
        assert_eq!(
            vertex_degree_class(Vertex::new(0, 0), &conv),
            VertexClass::Visited
        );
        let w = Window::square(0, 99).unwrap();
        let empty = w
            .vertices()
            .filter(|&v| vertex_degree_class(v, &conv) == VertexClass::Empty)
            .count();
        assert_eq!(empty, 2500);
    }

    #[test]
    fn window_parsing() {
        let w: Window = "0:40:-3:7".parse().unwrap();
        assert_eq!(w, Window::new(0, 40, -3, 7).unwrap());
        assert!("0:40:3".parse::<Window>().is_err());
        assert!("5:4:0:0".parse::<Window>().is_err());
        assert!("a:4:0:0".parse::<Window>().is_err());
    }

    #[test]
    fn segment_bijection_in_window() {
        let w = Window::new(-4, 5, -3, 6).unwrap();
        let mut seen = std::collections::HashSet::new();
        for v in w.vertices() {
            for n in v.neighbors().filter(|n| w.contains(*n)) {
                let seg = SegmentId::between(v, n).unwrap();
                let (p, q) = seg.endpoints();
                assert!((p, q) == (v, n) || (p, q) == (n, v));
                assert_eq!(SegmentId::between(n, v), Some(seg));
                seen.insert(seg);
            }
        }
        // each undirected edge once
        let edges: usize = w
            .vertices()
            .map(|v| v.neighbors().filter(|n| w.contains(*n)).count())
            .sum();
        assert_eq!(seen.len(), edges / 2);
        assert_eq!(
            SegmentId::between(Vertex::new(0, 0), Vertex::new(1, 1)),
            None
        );
    }

    proptest! {
        #[test]
        fn dilute_invariant(i in -10_000i64..10_000, j in -10_000i64..10_000) {
            let conv = GridConvention::default();
            let v = Vertex::new(i, j);
            let (a, b, c) = lines_through(v);
            prop_assert_eq!(c.k, a.k + b.k);
            let count = [a, b, c].iter().filter(|l| is_line_present(**l, &conv)).count();
            prop_assert!(count == 0 || count == 2);
            let empty = vertex_degree_class(v, &conv) == VertexClass::Empty;
            prop_assert_eq!(empty, i.rem_euclid(2) == 1 && j.rem_euclid(2) == 1);
        }

        #[test]
        fn quarter_empty(i0 in -50i64..50, j0 in -50i64..50, hw in 1i64..20, hh in 1i64..20) {
            let conv = GridConvention::default();
            let w = Window::new(i0, i0 + 2 * hw - 1, j0, j0 + 2 * hh - 1).unwrap();
            let empty = w.vertices().filter(|&v| vertex_degree_class(v, &conv) == VertexClass::Empty).count();
            prop_assert_eq!(4 * empty as u128, w.vertex_count());
        }

        #[test]
        fn segment_roundtrip(k in -1000i64..1000, s in -1000i64..1000, f in 0usize..3) {
            let seg = SegmentId::new(LineId::new(Family::ALL[f], k), s);
            let (p, q) = seg.endpoints();
            prop_assert_eq!(SegmentId::between(p, q), Some(seg));
            prop_assert_eq!(SegmentId::between(q, p), Some(seg));
        }
    }
}
