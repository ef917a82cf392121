//! Gap statistics of partitions of double-cycle graphs.
//!
//! A gap is a cycle edge whose endpoints lie in different parts. Labels are
//! the generator's position labels, used as plain integers.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::graph::{EdgeClass, Graph, VertexId};
use crate::partition::PartitionView;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Gap {
    pub class: EdgeClass,
    pub position: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapProfile {
    /// Sorted by class, then position.
    pub gaps: Vec<Gap>,
    /// Rungs with both endpoints in one part.
    pub phi: usize,
    /// Mean gap label; `None` without gaps.
    pub avg_gap_position: Option<Ratio<i64>>,
    /// Some part contains no rung.
    pub in_c: bool,
}

impl GapProfile {
    pub fn positions(&self, class: EdgeClass) -> Vec<u32> {
        self.gaps
            .iter()
            .filter(|g| g.class == class)
            .map(|g| g.position)
            .collect()
    }

    pub fn label_sum(&self) -> i64 {
        self.gaps.iter().map(|g| g.position as i64).sum()
    }
}

fn require_tags(g: &Graph) -> Result<&[crate::graph::EdgeTag]> {
    g.edge_tags()
        .ok_or_else(|| Error::UnsupportedGraph("graph has no edge class tags".into()))
}

pub fn gap_profile(g: &Graph, p: &PartitionView) -> Result<GapProfile> {
    let tags = require_tags(g)?;
    if p.n() != g.n() {
        return Err(Error::InvalidArgument(
            "partition and graph sizes differ".into(),
        ));
    }
    Ok(profile_of(g, tags, &p.assignment(), p.k()))
}

pub(crate) fn profile_of(
    g: &Graph,
    tags: &[crate::graph::EdgeTag],
    part_of: &[usize],
    k: usize,
) -> GapProfile {
    let mut gaps = Vec::new();
    let mut phi = 0;
    let mut has_rung = vec![false; k];
    for (e, tag) in tags.iter().enumerate() {
        let (u, v): (VertexId, VertexId) = g.edge(e);
        let same = part_of[u] == part_of[v];
        match tag.class() {
            EdgeClass::Rung if same => {
                phi += 1;
                has_rung[part_of[u]] = true;
            }
            c if c.is_cycle() && !same => gaps.push(Gap {
                class: c,
                position: tag.position().expect("cycle edges carry positions"),
            }),
            _ => {}
        }
    }
    gaps.sort_unstable();
    let avg_gap_position = (!gaps.is_empty()).then(|| {
        let sum: i64 = gaps.iter().map(|g| g.position as i64).sum();
        Ratio::new(sum, gaps.len() as i64)
    });
    GapProfile {
        gaps,
        phi,
        avg_gap_position,
        in_c: has_rung.iter().any(|&h| !h),
    }
}

/// The band partition `A_j` of `double_cycle(3n)`: part `i` holds columns
/// `j + i*n .. j + (i+1)*n` (mod `3n`) on both cycles, so its gaps sit at
/// labels `j`, `n + j` and `2n + j` on each cycle.
pub fn band_state(n: usize, j: usize) -> PartitionView {
    let len = 3 * n;
    let mut assign = vec![0; 2 * len];
    for col in 0..len {
        let part = ((col + len - j) % len) / n;
        assign[col] = part;
        assign[len + col] = part;
    }
    PartitionView::from_assignment(&assign)
}

/// Rotation class of a partition of a double cycle of length `len`: the gap
/// count and the gap label sum mod `len`. Rotating the graph by one column
/// keeps the count and adds it to the sum.
pub fn rotation_class(p: &GapProfile, len: usize) -> (usize, i64) {
    (p.gaps.len(), p.label_sum().rem_euclid(len as i64))
}

/// Size of the rotation orbit of a class. Any rotation-invariant
/// distribution gives each class at most `1 / orbit` of its mass.
pub fn rotation_orbit(class: (usize, i64), len: usize) -> usize {
    len / num_integer::gcd(class.0, len).max(1)
}

/// Change between two consecutive states outside C, as seen by a
/// [`GapTracker`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GapShift {
    /// Change of the plain label sum.
    pub raw: i64,
    /// Change of the label sum with each moved gap's displacement measured
    /// along the arc it moved in, so crossing label 0 costs nothing extra.
    pub lifted: i64,
}

impl GapShift {
    /// A gap crossed label 0: plain labels jumped by a multiple of the
    /// cycle length.
    pub fn crossed_zero(&self) -> bool {
        self.raw != self.lifted
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapEvent {
    /// First observation, or first state after leaving C.
    Start,
    InC,
    Shift(GapShift),
    /// More than one gap per cycle moved; no arc displacement is defined.
    Irregular,
}

/// Follows the gap labels of a 3-partition trajectory on a double cycle.
#[derive(Clone, Debug)]
pub struct GapTracker {
    len: i64,
    prev: Option<GapProfile>,
    pub shifts: usize,
    pub crossings: usize,
    pub c_visits: usize,
    pub irregular: usize,
    /// Transitions whose lifted shift was nonzero.
    pub lifted_changes: usize,
}

impl GapTracker {
    pub fn new(g: &Graph) -> Result<Self> {
        let tags = require_tags(g)?;
        let len = tags
            .iter()
            .filter(|t| t.class() == EdgeClass::LeftCycle)
            .count() as i64;
        Ok(GapTracker {
            len,
            prev: None,
            shifts: 0,
            crossings: 0,
            c_visits: 0,
            irregular: 0,
            lifted_changes: 0,
        })
    }

    pub fn observe(&mut self, profile: &GapProfile) -> GapEvent {
        if profile.in_c {
            self.c_visits += 1;
            self.prev = None;
            return GapEvent::InC;
        }
        let Some(prev) = self.prev.replace(profile.clone()) else {
            return GapEvent::Start;
        };
        let mut lifted = 0;
        for class in [EdgeClass::LeftCycle, EdgeClass::RightCycle] {
            match self.side_shift(&prev.positions(class), &profile.positions(class)) {
                Some(d) => lifted += d,
                None => {
                    self.irregular += 1;
                    return GapEvent::Irregular;
                }
            }
        }
        let shift = GapShift {
            raw: profile.label_sum() - prev.label_sum(),
            lifted,
        };
        self.shifts += 1;
        self.crossings += shift.crossed_zero() as usize;
        self.lifted_changes += (shift.lifted != 0) as usize;
        GapEvent::Shift(shift)
    }

    fn side_shift(&self, old: &[u32], new: &[u32]) -> Option<i64> {
        let gone: Vec<i64> = old
            .iter()
            .filter(|p| !new.contains(p))
            .map(|&p| p as i64)
            .collect();
        let came: Vec<i64> = new
            .iter()
            .filter(|p| !old.contains(p))
            .map(|&p| p as i64)
            .collect();
        let kept: Vec<i64> = old
            .iter()
            .filter(|p| new.contains(p))
            .map(|&p| p as i64)
            .collect();
        match (gone.as_slice(), came.as_slice()) {
            ([], []) => Some(0),
            (&[a], &[b]) if kept.len() == 2 => {
                // The moved gap stays inside the arc between the two fixed
                // gaps that contains it; measure from that arc's start.
                let fwd = |o: i64, p: i64| (p - o).rem_euclid(self.len);
                for (o, end) in [(kept[0], kept[1]), (kept[1], kept[0])] {
                    let span = fwd(o, end);
                    let inside = |p: i64| fwd(o, p) > 0 && fwd(o, p) < span;
                    if inside(a) && inside(b) {
                        return Some(fwd(o, b) - fwd(o, a));
                    }
                }
                None
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;

    #[test]
    fn band_states() {
        for n in 2..=5 {
            let g = graph::double_cycle(3 * n).unwrap();
            for j in 0..n {
                let p = gap_profile(&g, &band_state(n, j)).unwrap();
                let want = [j, n + j, 2 * n + j].map(|x| x as u32).to_vec();
                assert_eq!(p.positions(EdgeClass::LeftCycle), want);
                assert_eq!(p.positions(EdgeClass::RightCycle), want);
                assert_eq!(
                    p.avg_gap_position,
                    Some(Ratio::from_integer((n + j) as i64))
                );
                assert_eq!(p.phi, 3 * n);
                assert!(!p.in_c);
            }
        }
    }

    #[test]
    fn line_component_is_in_c() {
        // double_cycle(6) with the whole left cycle as one part of size 6
        // is not a 3-partition into equal parts, but the rung criterion
        // applies to any partition: the left part has no rung.
        let g = graph::double_cycle(6).unwrap();
        let mut assign = vec![0; 12];
        for (v, a) in assign.iter_mut().enumerate().skip(6) {
            *a = if v < 9 { 1 } else { 2 };
        }
        let p = gap_profile(&g, &PartitionView::from_assignment(&assign)).unwrap();
        assert!(p.in_c);
        assert_eq!(p.phi, 0);
        assert_eq!(p.positions(EdgeClass::LeftCycle), Vec::<u32>::new());
        assert_eq!(p.positions(EdgeClass::RightCycle), vec![0, 3]);
    }

    #[test]
    fn untagged_graph_is_rejected() {
        let g = graph::grid(2, 2).unwrap();
        let p = PartitionView::parse(4, "0,1|2,3").unwrap();
        assert!(matches!(
            gap_profile(&g, &p),
            Err(Error::UnsupportedGraph(_))
        ));
    }

    #[test]
    fn tracker_lifts_moves_across_zero() {
        let n = 3;
        let g = graph::double_cycle(9).unwrap();
        let mut t = GapTracker::new(&g).unwrap();
        let a0 = band_state(n, 0);
        assert_eq!(t.observe(&gap_profile(&g, &a0).unwrap()), GapEvent::Start);
        // Shift the boundary at label 0 one column: l_8 moves from part 2
        // to part 0 and r_0 moves from part 0 to part 2.
        let mut assign = a0.assignment();
        assign[8] = assign[0];
        assign[9] = assign[17];
        let moved = PartitionView::from_assignment(&assign);
        let ev = t.observe(&gap_profile(&g, &moved).unwrap());
        let GapEvent::Shift(s) = ev else {
            panic!("{ev:?}")
        };
        assert_eq!(s.lifted, 0);
        // Left gaps {0,3,6} -> {3,6,8}, right gaps {0,3,6} -> {1,3,6}.
        assert_eq!(s.raw, 9);
        assert!(s.crossed_zero());
        assert_eq!(t.crossings, 1);
        assert_eq!(t.lifted_changes, 0);
    }
}
