//! Koch snowflake iterates built directly on the lattice, and the search for
//! them among the cycles of Koch-word designs.
//!
//! [`koch_polygon`] is a purely geometric construction (triangle plus edge
//! replacement). It never looks at words or stitches, so a successful
//! [`verify_koch`] is an independent cross-check of the word recursion.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::design_graph::{build_components, Component, Cycle, MotifSignature};
use crate::error::{Error, Result};
use crate::grid::{PerFamily, Vertex, Window};
use crate::stitcher::{generate_design, Design, Side, StitchPattern};
use crate::symmetry::period_cell;
use crate::words::KochOrder;

/// Snowflake iterate of a given order as a lattice cycle. Order 0 is the
/// triangle, order 1 the hexagram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KochPolygon {
    pub order: u32,
    pub cycle: Cycle,
}

/// Largest polygon order we construct (3·4^10 ≈ 3M segments).
pub const MAX_POLYGON_ORDER: i64 = 10;

/// Replace each unit edge `d` by `d, d−1, d+1, d`: one edge-replacement step
/// applied to the polygon scaled by 3. The bump turns clockwise first, which
/// is outward for a counterclockwise boundary.
pub fn refine(directions: &[u8]) -> Vec<u8> {
    directions
        .iter()
        .flat_map(|&d| [d, (d + 5) % 6, (d + 1) % 6, d])
        .collect()
}

/// The order-`order` snowflake iterate, starting from the counterclockwise
/// triangle `(0,0), (L,0), (0,L)` with `L = 3^order`.
pub fn koch_polygon(order: i64) -> Result<KochPolygon> {
    if !(0..=MAX_POLYGON_ORDER).contains(&order) {
        return Err(Error::InvalidOrder(order));
    }
    let side = 3i64.pow(order as u32);
    // straight runs (direction, length)
    let mut runs: Vec<(u8, i64)> = vec![(0, side), (2, side), (4, side)];
    for _ in 0..order {
        runs = runs
            .into_iter()
            .flat_map(|(d, len)| {
                let l = len / 3;
                [(d, l), ((d + 5) % 6, l), ((d + 1) % 6, l), (d, l)]
            })
            .collect();
    }
    let directions: Vec<u8> = runs
        .iter()
        .flat_map(|&(d, len)| std::iter::repeat_n(d, len as usize))
        .collect();
    debug_assert_eq!(directions.len() as i64, 3 * 4i64.pow(order as u32));
    let cycle = Cycle::from_directions(Vertex::new(0, 0), &directions)
        .expect("Koch iterates are simple closed lattice cycles");
    debug_assert!([Vertex::new(side, 0), Vertex::new(0, side)]
        .iter()
        .all(|c| cycle.vertices().contains(c)));
    Ok(KochPolygon {
        order: order as u32,
        cycle,
    })
}

/// Lattice bounding box `(i_min, i_max, j_min, j_max)` of a cycle.
pub fn bounding_box(cycle: &Cycle) -> (i64, i64, i64, i64) {
    let vs = cycle.vertices();
    (
        vs.iter().map(|v| v.i).min().unwrap_or(0),
        vs.iter().map(|v| v.i).max().unwrap_or(0),
        vs.iter().map(|v| v.j).min().unwrap_or(0),
        vs.iter().map(|v| v.j).max().unwrap_or(0),
    )
}

/// Phases `(A, B, C)` at which the Koch-word design of each order is known to
/// contain the matching snowflake (found by `verify_koch` with phase search).
pub fn known_phases(order: KochOrder) -> PerFamily<i64> {
    match order.get() {
        1 => PerFamily::new(0, 0, 0),
        _ => PerFamily::new(0, 0, 1),
    }
}

/// Smallest window side that fits a snowflake of this order plus one period
/// cell of the design.
pub fn required_window_side(order: KochOrder) -> Result<i64> {
    let poly = koch_polygon(order.get() as i64)?;
    let (i0, i1, j0, j1) = bounding_box(&poly.cycle);
    let span = (i1 - i0 + 1).max(j1 - j0 + 1);
    let pattern = StitchPattern::koch(order, PerFamily::splat(0));
    Ok(span + period_cell(&pattern))
}

/// Square window `[0, side-1]²` with `side = max(4·3^n, required) + 3^(n-1)`.
pub fn auto_window(order: KochOrder) -> Result<Window> {
    let n = order.get();
    let side = (4 * 3i64.pow(n)).max(required_window_side(order)?) + 3i64.pow(n - 1);
    Window::square(0, side - 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationResult {
    pub order: KochOrder,
    pub window: Window,
    pub found: bool,
    pub phases: PerFamily<i64>,
    pub matched_cycle: Option<Cycle>,
    pub candidates_tested: usize,
    /// Front-side count of each lower-or-equal order iterate in the design at
    /// the reported phases.
    pub iterate_counts: BTreeMap<u32, usize>,
}

/// Candidate phases in canonical order: `(0, 0)` then `(ρ_B, ρ_C)`
/// lexicographically over one palindromic period.
pub fn phase_candidates(order: KochOrder, phase_search: bool) -> Vec<PerFamily<i64>> {
    if !phase_search {
        return vec![PerFamily::splat(0)];
    }
    let period = 2 * 3i64.pow(order.get() - 1);
    (0..period)
        .flat_map(|b| (0..period).map(move |c| PerFamily::new(0, b, c)))
        .collect()
}

/// First front cycle of the design congruent to `reference`.
pub fn find_matching_cycle(design: &Design, reference: &MotifSignature) -> Option<Cycle> {
    build_components(design, Side::Front)
        .into_iter()
        .filter_map(|c| match c {
            Component::Cycle(cycle) => Some(cycle),
            Component::Open(_) => None,
        })
        .find(|c| c.len() == reference.len() && c.signature() == *reference)
}

/// Front-side counts of snowflake iterates of orders `1..=max_order`.
pub fn iterate_counts(design: &Design, max_order: u32) -> Result<BTreeMap<u32, usize>> {
    let refs: Vec<(u32, MotifSignature)> = (1..=max_order)
        .map(|k| koch_polygon(k as i64).map(|p| (k, p.cycle.signature())))
        .collect::<Result<_>>()?;
    let mut counts: BTreeMap<u32, usize> = refs.iter().map(|(k, _)| (*k, 0)).collect();
    for comp in build_components(design, Side::Front) {
        if let Component::Cycle(c) = comp {
            if let Some((k, _)) = refs
                .iter()
                .find(|(_, sig)| sig.len() == c.len() && *sig == c.signature())
            {
                *counts.get_mut(k).unwrap() += 1;
            }
        }
    }
    Ok(counts)
}

/// Search the Koch-word design of `order` for a front cycle congruent to
/// `koch_polygon(order)`.
///
/// Without phase search only phases `(0, 0, 0)` are tried. With it, family A
/// stays at 0 and `(ρ_B, ρ_C)` range over one period; the canonically least
/// successful pair is returned. Not finding the snowflake is a result, not an
/// error.
pub fn verify_koch(
    order: KochOrder,
    window: Window,
    phase_search: bool,
) -> Result<VerificationResult> {
    let needed = required_window_side(order)?;
    if window.width() < needed || window.height() < needed {
        return Err(Error::OverlapTooSmall(format!(
            "order {order} needs a window of side at least {needed}, got {}x{}",
            window.width(),
            window.height()
        )));
    }
    let reference = koch_polygon(order.get() as i64)?.cycle.signature();
    let candidates = phase_candidates(order, phase_search);

    type Hit = (usize, PerFamily<i64>, Cycle, Design);
    let hit = candidates
        .par_iter()
        .enumerate()
        .map(|(idx, phases)| -> Result<Option<Hit>> {
            let design = generate_design(window, &StitchPattern::koch(order, *phases))?;
            Ok(find_matching_cycle(&design, &reference).map(|c| (idx, *phases, c, design)))
        })
        .find_map_first(|r| match r {
            Ok(Some(hit)) => Some(Ok(hit)),
            Ok(None) => None,
            Err(e) => Some(Err(e)),
        })
        .transpose()?;

    match hit {
        Some((idx, phases, cycle, design)) => Ok(VerificationResult {
            order,
            window,
            found: true,
            phases,
            matched_cycle: Some(cycle),
            candidates_tested: idx + 1,
            iterate_counts: iterate_counts(&design, order.get())?,
        }),
        None => {
            let phases = PerFamily::splat(0);
            let design = generate_design(window, &StitchPattern::koch(order, phases))?;
            Ok(VerificationResult {
                order,
                window,
                found: false,
                phases,
                matched_cycle: None,
                candidates_tested: candidates.len(),
                iterate_counts: iterate_counts(&design, order.get())?,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_orders() {
        let t = koch_polygon(0).unwrap();
        assert_eq!(t.cycle.len(), 3);
        let h = koch_polygon(1).unwrap();
        assert_eq!(h.cycle.len(), 12);
        assert_eq!(
            h.cycle.directions(),
            vec![0, 5, 1, 0, 2, 1, 3, 2, 4, 3, 5, 4]
        );
        assert!(matches!(koch_polygon(-1), Err(Error::InvalidOrder(-1))));
    }

    #[test]
    fn refine_matches_construction() {
        for k in 0..5 {
            let coarse = koch_polygon(k).unwrap().cycle.directions();
            let fine = koch_polygon(k + 1).unwrap().cycle.directions();
            assert_eq!(refine(&coarse), fine);
        }
    }

    #[test]
    fn window_requirements() {
        let o = KochOrder::new(2).unwrap();
        let w = auto_window(o).unwrap();
        assert!(w.width() >= required_window_side(o).unwrap());
        assert!(matches!(
            verify_koch(o, Window::square(0, 10).unwrap(), false),
            Err(Error::OverlapTooSmall(_))
        ));
    }

    #[test]
    fn candidate_order() {
        let c = phase_candidates(KochOrder::new(2).unwrap(), true);
        assert_eq!(c.len(), 36);
        assert_eq!(c[0], PerFamily::splat(0));
        assert_eq!(c[1], PerFamily::new(0, 0, 1));
        assert_eq!(c[6], PerFamily::new(0, 1, 0));
        assert_eq!(phase_candidates(KochOrder::new(3).unwrap(), false).len(), 1);
    }
}
