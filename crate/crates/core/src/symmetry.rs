//! Lattice isometries, wallpaper classification and self-duality.
//!
//! Symmetries are certified on the finite window: a candidate isometry is
//! accepted only if it maps the front segments of the overlap region exactly
//! onto themselves. Every reported witness is re-checked before it is
//! returned.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::design_graph::Cycle;
use crate::error::{Error, Result};
use crate::grid::{PerFamily, SegmentId, Vertex, Window};
use crate::stitcher::{Design, StitchPattern};

/// `v ↦ R^rotation · M^reflect · v + translation`, where `R` is the 60°
/// counterclockwise rotation about the origin and `M` the reflection across
/// the x axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeIsometry {
    pub rotation: u8,
    pub reflect: bool,
    pub translation: Vertex,
    /// Reporting aid: the rotation center, or a point on the mirror/glide
    /// axis. In sixths of lattice units.
    pub center: Option<SixthsPoint>,
}

/// A rational lattice point `(i/6, j/6)`; vertices, edge midpoints and
/// triangle centers all have this form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SixthsPoint {
    pub i6: i64,
    pub j6: i64,
}

impl SixthsPoint {
    pub fn from_vertex(v: Vertex) -> Self {
        Self {
            i6: 6 * v.i,
            j6: 6 * v.j,
        }
    }

    fn as_vector(self) -> Vertex {
        Vertex::new(self.i6, self.j6)
    }
}

impl fmt::Display for SixthsPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |n: i64, f: &mut fmt::Formatter<'_>| {
            let g = gcd(n.unsigned_abs(), 6) as i64;
            if n % 6 == 0 {
                write!(f, "{}", n / 6)
            } else {
                write!(f, "{}/{}", n / g, 6 / g)
            }
        };
        f.write_str("(")?;
        show(self.i6, f)?;
        f.write_str(", ")?;
        show(self.j6, f)?;
        f.write_str(")")
    }
}

fn rot60(v: Vertex) -> Vertex {
    Vertex::new(-v.j, v.i + v.j)
}

fn reflect_x(v: Vertex) -> Vertex {
    Vertex::new(v.i + v.j, -v.j)
}

/// Apply the linear part `(rotation, reflect)` to a vector.
pub fn apply_linear(rotation: u8, reflect: bool, v: Vertex) -> Vertex {
    let mut out = if reflect { reflect_x(v) } else { v };
    for _ in 0..rotation % 6 {
        out = rot60(out);
    }
    out
}

fn det(a: Vertex, b: Vertex) -> i64 {
    a.i * b.j - a.j * b.i
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl LatticeIsometry {
    pub const IDENTITY: LatticeIsometry = LatticeIsometry {
        rotation: 0,
        reflect: false,
        translation: Vertex::new(0, 0),
        center: None,
    };

    pub fn new(rotation: u8, reflect: bool, translation: Vertex) -> Self {
        let mut g = Self {
            rotation: rotation % 6,
            reflect,
            translation,
            center: None,
        };
        g.center = g.compute_center();
        g
    }

    pub fn translation(t: Vertex) -> Self {
        Self::new(0, false, t)
    }

    /// A point operation fixing the origin.
    pub fn point(rotation: u8, reflect: bool) -> Self {
        Self::new(rotation, reflect, Vertex::new(0, 0))
    }

    /// The point operation `(rotation, reflect)` applied about vertex `c`.
    pub fn about(rotation: u8, reflect: bool, c: Vertex) -> Self {
        Self::new(rotation, reflect, c - apply_linear(rotation, reflect, c))
    }

    pub fn apply(&self, v: Vertex) -> Vertex {
        apply_linear(self.rotation, self.reflect, v) + self.translation
    }

    pub fn linear(&self, v: Vertex) -> Vertex {
        apply_linear(self.rotation, self.reflect, v)
    }

    pub fn apply_segment(&self, seg: SegmentId) -> SegmentId {
        let (p, q) = seg.endpoints();
        SegmentId::between(self.apply(p), self.apply(q)).expect("isometries preserve adjacency")
    }

    pub fn apply_cycle(&self, cycle: &Cycle) -> Cycle {
        Cycle::new(cycle.vertices().iter().map(|v| self.apply(*v)).collect())
            .expect("isometries preserve cycles")
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LatticeIsometry) -> LatticeIsometry {
        let r2 = other.rotation as i64;
        let r = if self.reflect {
            self.rotation as i64 - r2
        } else {
            self.rotation as i64 + r2
        };
        LatticeIsometry::new(
            r.rem_euclid(6) as u8,
            self.reflect ^ other.reflect,
            self.linear(other.translation) + self.translation,
        )
    }

    pub fn inverse(&self) -> LatticeIsometry {
        let (r, m) = if self.reflect {
            (self.rotation, true)
        } else {
            ((6 - self.rotation) % 6, false)
        };
        let t = apply_linear(r, m, self.translation);
        LatticeIsometry::new(r, m, -t)
    }

    pub fn is_identity(&self) -> bool {
        self.rotation == 0 && !self.reflect && self.translation == Vertex::new(0, 0)
    }

    /// A reflection whose square is the identity (a true mirror, not a glide).
    pub fn is_mirror(&self) -> bool {
        self.reflect && self.compose(self).is_identity()
    }

    fn compute_center(&self) -> Option<SixthsPoint> {
        if self.reflect {
            // (v + g(v)) / 2 lies on the axis; take v = 0
            return Some(SixthsPoint {
                i6: 3 * self.translation.i,
                j6: 3 * self.translation.j,
            });
        }
        if self.rotation == 0 {
            return None;
        }
        // solve (I - L) c = t
        let e1 = Vertex::new(1, 0) - self.linear(Vertex::new(1, 0));
        let e2 = Vertex::new(0, 1) - self.linear(Vertex::new(0, 1));
        let d = det(e1, e2);
        let t = self.translation;
        let ci = 6 * det(t, e2);
        let cj = 6 * det(e1, t);
        debug_assert!(ci % d == 0 && cj % d == 0);
        Some(SixthsPoint {
            i6: ci / d,
            j6: cj / d,
        })
    }
}

impl fmt::Display for LatticeIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rot {}°{} + {}",
            60 * self.rotation as u32,
            if self.reflect { " ∘ mirror" } else { "" },
            self.translation
        )?;
        if let Some(c) = self.center {
            write!(f, " @ {c}")?;
        }
        Ok(())
    }
}

/// The plane crystallographic groups. The square-lattice groups are listed
/// for completeness; they can never be returned on this lattice.
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WallpaperGroup {
    p1,
    p2,
    p3,
    p3m1,
    p31m,
    p6,
    p6mm,
    cm,
    cmm,
    pm,
    pg,
    pmm,
    pmg,
    pgg,
    p4,
    p4m,
    p4g,
    Unknown,
}

impl fmt::Display for WallpaperGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Minimal period of each family's bit sequence over line ordinals.
pub fn pattern_period(pattern: &StitchPattern) -> PerFamily<usize> {
    PerFamily::from_fn(|f| pattern.spec[f].word().minimal_period())
}

/// Side length (in lattice steps along `i` and `j`) of a parallelogram that
/// is always a translation cell of the design: `(4L, 0)` and `(0, 4L)` are
/// symmetries for `L` the lcm of the family periods.
pub fn period_cell(pattern: &StitchPattern) -> i64 {
    let p = pattern_period(pattern);
    let l = lcm(lcm(p.a as u64, p.b as u64), p.c as u64);
    4 * l as i64
}

/// Front and back segments with lookup sets and a center-out probe order.
struct DesignIndex<'a> {
    design: &'a Design,
    front: HashSet<SegmentId>,
    back: HashSet<SegmentId>,
    front_order: Vec<SegmentId>,
    back_order: Vec<SegmentId>,
    cell: i64,
}

impl<'a> DesignIndex<'a> {
    fn new(design: &'a Design) -> Self {
        let center = design.window.center();
        let key = |s: &SegmentId| {
            let (p, q) = s.endpoints();
            let m = p + q - center - center;
            (m.norm2(), *s)
        };
        let mut front_order: Vec<SegmentId> = design.front.iter().copied().collect();
        front_order.sort_by_cached_key(key);
        let mut back_order: Vec<SegmentId> = design.back.iter().copied().collect();
        back_order.sort_by_cached_key(key);
        Self {
            design,
            front: design.front.iter().copied().collect(),
            back: design.back.iter().copied().collect(),
            front_order,
            back_order,
            cell: period_cell(&design.pattern),
        }
    }

    fn window(&self) -> &Window {
        &self.design.window
    }

    /// Some `cell × cell` block of the window maps into the window under `g`.
    fn check_overlap(&self, g: &LatticeIsometry) -> Result<()> {
        let w = self.window();
        let c = self.cell;
        if w.width() <= c || w.height() <= c {
            return Err(Error::OverlapTooSmall(format!(
                "window {w} is smaller than the period cell {c}"
            )));
        }
        let step = (c / 4).max(1);
        let positions = |lo: i64, hi: i64| {
            let mut v: Vec<i64> = (lo..=hi - c).step_by(step as usize).collect();
            if v.last() != Some(&(hi - c)) {
                v.push(hi - c);
            }
            v
        };
        for bj in positions(w.j_min, w.j_max) {
            for bi in positions(w.i_min, w.i_max) {
                let corners = [
                    Vertex::new(bi, bj),
                    Vertex::new(bi + c, bj),
                    Vertex::new(bi, bj + c),
                    Vertex::new(bi + c, bj + c),
                ];
                if corners.iter().all(|v| w.contains(g.apply(*v))) {
                    return Ok(());
                }
            }
        }
        Err(Error::OverlapTooSmall(format!(
            "window {w} and its image under {g} share no full period cell"
        )))
    }

    /// Every segment of `src` whose image lies in the window maps into `dst`.
    fn maps_into(&self, src: &[SegmentId], dst: &HashSet<SegmentId>, g: &LatticeIsometry) -> bool {
        let w = self.window();
        src.iter().all(|seg| {
            let (p, q) = seg.endpoints();
            let (gp, gq) = (g.apply(p), g.apply(q));
            if !(w.contains(gp) && w.contains(gq)) {
                return true;
            }
            SegmentId::between(gp, gq).is_some_and(|s| dst.contains(&s))
        })
    }

    fn is_symmetry(&self, g: &LatticeIsometry) -> Result<bool> {
        self.check_overlap(g)?;
        let inv = g.inverse();
        Ok(self.maps_into(&self.front_order, &self.front, g)
            && self.maps_into(&self.front_order, &self.front, &inv))
    }

    fn swaps_sides(&self, g: &LatticeIsometry) -> Result<bool> {
        self.check_overlap(g)?;
        let inv = g.inverse();
        Ok(self.maps_into(&self.front_order, &self.back, g)
            && self.maps_into(&self.back_order, &self.front, &inv))
    }

    /// Two shortest independent translation symmetries (a reduced basis).
    fn translation_basis(&self) -> Result<Option<[Vertex; 2]>> {
        let b = 2 * self.cell;
        let mut candidates: Vec<Vertex> = (-b..=b)
            .flat_map(|i| (-b..=b).map(move |j| Vertex::new(i, j)))
            .filter(|t| t.i > 0 || (t.i == 0 && t.j > 0))
            .collect();
        candidates.sort_by_key(|t| (t.norm2(), *t));
        let mut first: Option<Vertex> = None;
        for t in candidates {
            if let Some(t1) = first {
                if det(t1, t) == 0 {
                    continue;
                }
            }
            if self.is_symmetry(&LatticeIsometry::translation(t))? {
                match first {
                    None => first = Some(t),
                    Some(t1) => return Ok(Some([t1, t])),
                }
            }
        }
        Ok(None)
    }
}

/// Integer points of the half-open parallelogram spanned by a lattice basis,
/// in row-major order.
fn fundamental_domain(basis: [Vertex; 2]) -> Vec<Vertex> {
    let [t1, t2] = basis;
    let d = det(t1, t2);
    let corners = [Vertex::new(0, 0), t1, t2, t1 + t2];
    let (imin, imax) = (
        corners.iter().map(|v| v.i).min().unwrap(),
        corners.iter().map(|v| v.i).max().unwrap(),
    );
    let (jmin, jmax) = (
        corners.iter().map(|v| v.j).min().unwrap(),
        corners.iter().map(|v| v.j).max().unwrap(),
    );
    let mut out = Vec::with_capacity(d.unsigned_abs() as usize);
    for j in jmin..=jmax {
        for i in imin..=imax {
            let v = Vertex::new(i, j);
            // v = α t1 + β t2 with α = det(v, t2)/d, β = det(t1, v)/d
            let (a, b) = (det(v, t2) * d.signum(), det(t1, v) * d.signum());
            if (0..d.abs()).contains(&a) && (0..d.abs()).contains(&b) {
                out.push(v);
            }
        }
    }
    out
}

/// Whether the rational vector `x` (in sixths) lies in the lattice.
fn in_lattice_sixths(x: Vertex, basis: [Vertex; 2]) -> bool {
    let [t1, t2] = basis;
    let d = 6 * det(t1, t2);
    det(x, t2) % d == 0 && det(t1, x) % d == 0
}

/// `g` is a symmetry of the design's front side on the overlap of the window
/// and its image.
pub fn is_symmetry(design: &Design, g: &LatticeIsometry) -> Result<bool> {
    DesignIndex::new(design).is_symmetry(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    Translation,
    Rotation,
    Mirror,
    Glide,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub isometry: LatticeIsometry,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub group: WallpaperGroup,
    pub rotation_order: u8,
    pub translation_basis: Option<[Vertex; 2]>,
    pub witnesses: Vec<Witness>,
}

impl Classification {
    fn unknown(basis: Option<[Vertex; 2]>, witnesses: Vec<Witness>) -> Self {
        Self {
            group: WallpaperGroup::Unknown,
            rotation_order: 1,
            translation_basis: basis,
            witnesses,
        }
    }
}

/// The twelve point operations in canonical search order.
fn point_operations() -> impl Iterator<Item = (u8, bool)> {
    [false, true]
        .into_iter()
        .flat_map(|m| (0..6u8).map(move |r| (r, m)))
}

/// Symmetry with linear part `(r, m)`, if any: searched as the point
/// operation about the window center followed by a translation from one
/// fundamental cell.
fn find_with_linear_part(
    index: &DesignIndex<'_>,
    r: u8,
    m: bool,
    domain: &[Vertex],
) -> Result<Option<LatticeIsometry>> {
    let about = LatticeIsometry::about(r, m, index.window().center());
    for &t in domain {
        let g = LatticeIsometry::new(r, m, about.translation + t);
        if index.is_symmetry(&g)? {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// A true mirror in the coset `g · Λ`, if one exists.
fn mirror_in_coset(g: &LatticeIsometry, basis: [Vertex; 2]) -> Option<LatticeIsometry> {
    let [t1, t2] = basis;
    let mut best: Option<LatticeIsometry> = None;
    for a in -4i64..=4 {
        for b in -4i64..=4 {
            let tau = Vertex::new(a * t1.i + b * t2.i, a * t1.j + b * t2.j);
            let cand = LatticeIsometry::new(g.rotation, g.reflect, g.translation + tau);
            if cand.is_mirror() {
                let key =
                    |x: &LatticeIsometry| ((x.translation - g.translation).norm2(), x.translation);
                if best.as_ref().is_none_or(|b| key(&cand) < key(b)) {
                    best = Some(cand);
                }
            }
        }
    }
    best
}

/// Shortest nonzero lattice vector `v` with `L v = sign · v` for the
/// reflection `(r, true)`.
fn axis_vector(r: u8, basis: [Vertex; 2], sign: i64) -> Option<Vertex> {
    let [t1, t2] = basis;
    let mut best: Option<Vertex> = None;
    for a in -8i64..=8 {
        for b in -8i64..=8 {
            let v = Vertex::new(a * t1.i + b * t2.i, a * t1.j + b * t2.j);
            if v == Vertex::new(0, 0) {
                continue;
            }
            let lv = apply_linear(r, true, v);
            if lv == Vertex::new(sign * v.i, sign * v.j)
                && best.is_none_or(|x| (v.norm2(), v) < (x.norm2(), x))
            {
                best = Some(v);
            }
        }
    }
    best
}

/// 1 for a primitive rectangular cell aligned with the mirror, 2 for a
/// centered one.
fn mirror_cell_index(r: u8, basis: [Vertex; 2]) -> Option<i64> {
    let along = axis_vector(r, basis, 1)?;
    let across = axis_vector(r, basis, -1)?;
    let d = det(basis[0], basis[1]).abs();
    let sub = det(along, across).abs();
    (sub % d == 0).then_some(sub / d)
}

/// Classify the wallpaper group of the front side of a periodic design.
pub fn classify_wallpaper(design: &Design) -> Result<Classification> {
    let index = DesignIndex::new(design);
    let w = design.window;
    if w.width() < 3 * index.cell || w.height() < 3 * index.cell {
        return Err(Error::OverlapTooSmall(format!(
            "classification needs at least 3 period cells ({}) per direction, window is {}x{}",
            3 * index.cell,
            w.width(),
            w.height()
        )));
    }

    let Some(basis) = index.translation_basis()? else {
        return Ok(Classification::unknown(None, Vec::new()));
    };
    let mut witnesses: Vec<Witness> = basis
        .iter()
        .map(|t| Witness {
            kind: WitnessKind::Translation,
            isometry: LatticeIsometry::translation(*t),
        })
        .collect();

    let domain = fundamental_domain(basis);
    let mut point_group: Vec<((u8, bool), LatticeIsometry)> = Vec::new();
    for (r, m) in point_operations().filter(|&op| op != (0, false)) {
        if let Some(g) = find_with_linear_part(&index, r, m, &domain)? {
            point_group.push(((r, m), g));
        }
    }
    let has = |op: (u8, bool)| point_group.iter().find(|(o, _)| *o == op).map(|(_, g)| *g);

    let rotation_order: u8 = if has((1, false)).is_some() {
        6
    } else if has((2, false)).is_some() {
        3
    } else if has((3, false)).is_some() {
        2
    } else {
        1
    };
    let rotation_witness = match rotation_order {
        6 => has((1, false)),
        3 => has((2, false)),
        2 => has((3, false)),
        _ => None,
    };
    if let Some(g) = rotation_witness {
        witnesses.push(Witness {
            kind: WitnessKind::Rotation,
            isometry: g,
        });
    }

    // reflections: linear part, coset representative, mirror if any
    let reflections: Vec<(u8, LatticeIsometry, Option<LatticeIsometry>)> = point_group
        .iter()
        .filter(|((_, m), _)| *m)
        .map(|((r, _), g)| (*r, *g, mirror_in_coset(g, basis)))
        .collect();

    let mirror_witness = |witnesses: &mut Vec<Witness>, g: LatticeIsometry| -> Result<bool> {
        let ok = index.is_symmetry(&g)?;
        if ok {
            witnesses.push(Witness {
                kind: if g.is_mirror() {
                    WitnessKind::Mirror
                } else {
                    WitnessKind::Glide
                },
                isometry: g,
            });
        }
        Ok(ok)
    };

    let group = if reflections.is_empty() {
        match rotation_order {
            6 => WallpaperGroup::p6,
            3 => WallpaperGroup::p3,
            2 => WallpaperGroup::p2,
            _ => WallpaperGroup::p1,
        }
    } else {
        match rotation_order {
            6 => {
                // one mirror from each of the two direction classes
                let even = reflections
                    .iter()
                    .find(|(r, _, mm)| r % 2 == 0 && mm.is_some());
                let odd = reflections
                    .iter()
                    .find(|(r, _, mm)| r % 2 == 1 && mm.is_some());
                match (even, odd) {
                    (Some(e), Some(o)) => {
                        let ok = mirror_witness(&mut witnesses, e.2.unwrap())?
                            && mirror_witness(&mut witnesses, o.2.unwrap())?;
                        if ok {
                            WallpaperGroup::p6mm
                        } else {
                            WallpaperGroup::Unknown
                        }
                    }
                    _ => WallpaperGroup::Unknown,
                }
            }
            3 => classify_trigonal(&index, basis, &point_group, &reflections, &mut witnesses)?,
            2 => {
                let mirrors: Vec<_> = reflections.iter().filter(|x| x.2.is_some()).collect();
                match (reflections.len(), mirrors.len()) {
                    (2, 2) => {
                        for m in &mirrors {
                            mirror_witness(&mut witnesses, m.2.unwrap())?;
                        }
                        match mirror_cell_index(mirrors[0].0, basis) {
                            Some(1) => WallpaperGroup::pmm,
                            Some(2) => WallpaperGroup::cmm,
                            _ => WallpaperGroup::Unknown,
                        }
                    }
                    (2, 1) => {
                        mirror_witness(&mut witnesses, mirrors[0].2.unwrap())?;
                        let glide = reflections.iter().find(|x| x.2.is_none()).unwrap();
                        mirror_witness(&mut witnesses, glide.1)?;
                        WallpaperGroup::pmg
                    }
                    (2, 0) => {
                        for g in &reflections {
                            mirror_witness(&mut witnesses, g.1)?;
                        }
                        WallpaperGroup::pgg
                    }
                    _ => WallpaperGroup::Unknown,
                }
            }
            _ => {
                if reflections.len() != 1 {
                    WallpaperGroup::Unknown
                } else {
                    let (r, g, mirror) = reflections[0];
                    match mirror {
                        Some(mg) => {
                            mirror_witness(&mut witnesses, mg)?;
                            match mirror_cell_index(r, basis) {
                                Some(1) => WallpaperGroup::pm,
                                Some(2) => WallpaperGroup::cm,
                                _ => WallpaperGroup::Unknown,
                            }
                        }
                        None => {
                            mirror_witness(&mut witnesses, g)?;
                            WallpaperGroup::pg
                        }
                    }
                }
            }
        }
    };

    // never trust a witness that does not re-verify
    for w in &witnesses {
        if !index.is_symmetry(&w.isometry)? {
            return Ok(Classification::unknown(Some(basis), witnesses));
        }
    }
    Ok(Classification {
        group,
        rotation_order,
        translation_basis: Some(basis),
        witnesses,
    })
}

/// p3m1 when every 3-fold center lies on a mirror, p31m otherwise.
fn classify_trigonal(
    index: &DesignIndex<'_>,
    basis: [Vertex; 2],
    point_group: &[((u8, bool), LatticeIsometry)],
    reflections: &[(u8, LatticeIsometry, Option<LatticeIsometry>)],
    witnesses: &mut Vec<Witness>,
) -> Result<WallpaperGroup> {
    let Some(rot) = point_group
        .iter()
        .find(|(op, _)| *op == (2, false))
        .map(|(_, g)| *g)
    else {
        return Ok(WallpaperGroup::Unknown);
    };
    let mirrors: Vec<LatticeIsometry> = reflections.iter().filter_map(|x| x.2).collect();
    if mirrors.len() != reflections.len() || mirrors.is_empty() {
        // every reflection class of p3m1/p31m contains true mirrors
        return Ok(WallpaperGroup::Unknown);
    }
    let [t1, t2] = basis;
    let mut all_on_mirror = true;
    for a in 0..3i64 {
        for b in 0..3i64 {
            let tau = Vertex::new(a * t1.i + b * t2.i, a * t1.j + b * t2.j);
            let g = LatticeIsometry::new(rot.rotation, false, rot.translation + tau);
            let c = g.center.expect("rotation has a center").as_vector();
            let on_mirror = mirrors.iter().any(|mg| {
                // c lies on a mirror of this class iff c − M c − t ∈ Λ
                let x = c - mg.linear(c) - Vertex::new(6 * mg.translation.i, 6 * mg.translation.j);
                in_lattice_sixths(x, basis)
            });
            all_on_mirror &= on_mirror;
        }
    }
    for mg in &mirrors[..1] {
        if index.is_symmetry(mg)? {
            witnesses.push(Witness {
                kind: WitnessKind::Mirror,
                isometry: *mg,
            });
        }
    }
    Ok(if all_on_mirror {
        WallpaperGroup::p3m1
    } else {
        WallpaperGroup::p31m
    })
}

/// Whether some lattice isometry carries the front side onto the back side.
pub fn is_self_dual(design: &Design) -> Result<(bool, Option<LatticeIsometry>)> {
    let index = DesignIndex::new(design);
    let w = design.window;
    if w.width() < 3 * index.cell || w.height() < 3 * index.cell {
        return Err(Error::OverlapTooSmall(format!(
            "self-duality needs at least 3 period cells ({}) per direction, window is {}x{}",
            3 * index.cell,
            w.width(),
            w.height()
        )));
    }
    let Some(basis) = index.translation_basis()? else {
        return Ok((false, None));
    };
    let domain = fundamental_domain(basis);
    for (r, m) in point_operations() {
        let about = LatticeIsometry::about(r, m, w.center());
        for &t in &domain {
            let g = LatticeIsometry::new(r, m, about.translation + t);
            if index.swaps_sides(&g)? {
                // re-check before reporting
                debug_assert!(index.swaps_sides(&g)?);
                return Ok((true, Some(g)));
            }
        }
    }
    Ok((false, None))
}

/// `g` carries front onto back (and back onto front) within the window.
pub fn maps_front_to_back(design: &Design, g: &LatticeIsometry) -> Result<bool> {
    DesignIndex::new(design).swaps_sides(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stitcher::{dual, generate_design, DirectionSpec};
    use proptest::prelude::*;

    fn iso_strategy() -> impl Strategy<Value = LatticeIsometry> {
        (0u8..6, any::<bool>(), -20i64..20, -20i64..20)
            .prop_map(|(r, m, i, j)| LatticeIsometry::new(r, m, Vertex::new(i, j)))
    }

    #[test]
    fn point_operations_preserve_norm() {
        for (r, m) in point_operations() {
            for v in [Vertex::new(1, 0), Vertex::new(2, -5), Vertex::new(-3, 7)] {
                assert_eq!(apply_linear(r, m, v).norm2(), v.norm2());
            }
        }
        // 60° takes direction 0 to direction 1
        assert_eq!(rot60(Vertex::new(1, 0)), Vertex::new(0, 1));
        assert_eq!(reflect_x(Vertex::new(0, 1)), Vertex::new(1, -1));
    }

    #[test]
    fn centers() {
        // 120° about the triangle (0,0),(1,0),(0,1) has center (1/3, 1/3)
        let g = LatticeIsometry::new(2, false, Vertex::new(1, 0));
        let c = g.center.unwrap();
        assert_eq!(g.apply(Vertex::new(0, 0)), Vertex::new(1, 0));
        assert_eq!((c.i6, c.j6), (2, 2));
        assert_eq!(c.to_string(), "(1/3, 1/3)");
        let h = LatticeIsometry::new(3, false, Vertex::new(1, 0));
        assert_eq!(h.center.unwrap().to_string(), "(1/2, 0)");
        let s = LatticeIsometry::about(1, false, Vertex::new(4, -2));
        assert_eq!(
            s.center.unwrap(),
            SixthsPoint::from_vertex(Vertex::new(4, -2))
        );
    }

    #[test]
    fn fundamental_domain_size() {
        let basis = [Vertex::new(4, 0), Vertex::new(0, 4)];
        assert_eq!(fundamental_domain(basis).len(), 16);
        let basis = [Vertex::new(3, 2), Vertex::new(-1, 5)];
        assert_eq!(
            fundamental_domain(basis).len(),
            det(basis[0], basis[1]).unsigned_abs() as usize
        );
    }

    #[test]
    fn periods() {
        let p = StitchPattern::uniform(DirectionSpec::constant(0)).unwrap();
        assert_eq!(pattern_period(&p), PerFamily::splat(1));
        let p = StitchPattern::uniform_word("0001").unwrap();
        assert_eq!(pattern_period(&p), PerFamily::splat(4));
        let p = StitchPattern::koch(
            crate::words::KochOrder::new(2).unwrap(),
            PerFamily::splat(0),
        );
        assert_eq!(pattern_period(&p), PerFamily::splat(6));
    }

    #[test]
    fn symmetry_examples_on_hexagram_design() {
        let p = StitchPattern::uniform(DirectionSpec::constant(0)).unwrap();
        let d = generate_design(Window::square(0, 39).unwrap(), &p).unwrap();
        assert!(is_symmetry(&d, &LatticeIsometry::IDENTITY).unwrap());
        assert!(!is_symmetry(&d, &LatticeIsometry::translation(Vertex::new(1, 0))).unwrap());
        // a hexagram center: some vertex admits a 60° rotation
        let center = Window::square(14, 26)
            .unwrap()
            .vertices()
            .find(|v| is_symmetry(&d, &LatticeIsometry::about(1, false, *v)).unwrap());
        assert!(center.is_some());
    }

    #[test]
    fn overlap_too_small_is_an_error() {
        let p = StitchPattern::uniform_word("0001").unwrap();
        let d = generate_design(Window::square(0, 10).unwrap(), &p).unwrap();
        assert!(matches!(
            is_symmetry(&d, &LatticeIsometry::IDENTITY),
            Err(Error::OverlapTooSmall(_))
        ));
        assert!(matches!(
            classify_wallpaper(&d),
            Err(Error::OverlapTooSmall(_))
        ));
        let p = StitchPattern::uniform_word("0").unwrap();
        let d = generate_design(Window::square(0, 39).unwrap(), &p).unwrap();
        let far = LatticeIsometry::translation(Vertex::new(36, 0));
        assert!(matches!(
            is_symmetry(&d, &far),
            Err(Error::OverlapTooSmall(_))
        ));
    }

    #[test]
    fn dual_symmetry_holds_for_swapped_sides() {
        let p = StitchPattern::uniform_word("01").unwrap();
        let d = generate_design(Window::square(0, 47).unwrap(), &p).unwrap();
        let (yes, g) = is_self_dual(&d).unwrap();
        assert!(yes);
        let g = g.unwrap();
        assert!(maps_front_to_back(&d, &g).unwrap());
        assert!(maps_front_to_back(&dual(&d), &g.inverse()).unwrap());
    }

    proptest! {
        #[test]
        fn inverse_and_compose(g in iso_strategy(), h in iso_strategy(), i in -30i64..30, j in -30i64..30) {
            let v = Vertex::new(i, j);
            prop_assert_eq!(g.inverse().apply(g.apply(v)), v);
            prop_assert!(g.compose(&g.inverse()).is_identity());
            prop_assert_eq!(g.compose(&h).apply(v), g.apply(h.apply(v)));
        }

        #[test]
        fn rotation_centers_are_fixed(g in iso_strategy()) {
            prop_assume!(!g.reflect && g.rotation != 0);
            let c = g.center.unwrap().as_vector();
            // fixed point in sixths: L c + 6 t = c
            let image = g.linear(c) + Vertex::new(6 * g.translation.i, 6 * g.translation.j);
            prop_assert_eq!(image, c);
        }
    }
}
