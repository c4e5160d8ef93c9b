//! Tours through the reception disks of a frozen set of messages.
//!
//! Two constructions are available: the grid-cover tour, which serves each
//! non-empty cell from its center and is bounded by a constant that does not
//! depend on the number of messages, and a greedy nearest-neighborhood tour
//! improved by 2-opt. [`plan_tour`] returns the shorter of the two, so its
//! length never exceeds [`grid_cover_cap`].

use std::collections::HashMap;

use crate::comm::reception_point;
use crate::grid::RegionGrid;
use crate::model::{distance, MsgId, Point};

/// A message to be covered by a tour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Target {
    pub id: MsgId,
    pub location: Point,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TourStop {
    pub point: Point,
    /// Messages received at this stop, in ascending id order.
    pub messages: Vec<MsgId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TourKind {
    Empty,
    GridCover,
    NearestNeighbor,
}

/// Closed tour starting and ending at `start`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tour {
    pub start: Point,
    pub stops: Vec<TourStop>,
    pub total_length: f64,
    pub kind: TourKind,
}

impl Tour {
    fn empty(start: Point) -> Self {
        Self {
            start,
            stops: Vec::new(),
            total_length: 0.0,
            kind: TourKind::Empty,
        }
    }

    fn from_stops(start: Point, stops: Vec<TourStop>, kind: TourKind) -> Self {
        let total_length = closed_length(start, stops.iter().map(|s| s.point));
        Self {
            start,
            stops,
            total_length,
            kind,
        }
    }

    /// Every target is assigned to exactly one stop that lies within
    /// `radius` of it.
    pub fn covers(&self, targets: &[Target], radius: f64) -> bool {
        let by_id: HashMap<MsgId, Point> = targets.iter().map(|t| (t.id, t.location)).collect();
        let mut hits = HashMap::new();
        for stop in &self.stops {
            for id in &stop.messages {
                *hits.entry(*id).or_insert(0usize) += 1;
                let Some(&location) = by_id.get(id) else {
                    return false;
                };
                if distance(location, stop.point) > radius * (1.0 + 1e-12) {
                    return false;
                }
            }
        }
        targets.iter().all(|t| hits.get(&t.id) == Some(&1)) && hits.len() == targets.len()
    }
}

fn closed_length(start: Point, points: impl Iterator<Item = Point>) -> f64 {
    let mut len = 0.0;
    let mut cur = start;
    for p in points {
        len += distance(cur, p);
        cur = p;
    }
    len + distance(cur, start)
}

/// `sqrt(2 A n) + 1.75 sqrt(A)`, an upper bound on the shortest tour through
/// any `n` points of a square of area `A`.
pub fn tsp_upper_bound(n: usize, area: f64) -> f64 {
    (2.0 * area * n as f64).sqrt() + 1.75 * area.sqrt()
}

/// Constant cap `L` on the grid-cover tour: one full cycle over the cell
/// centers plus the out-and-back leg between the region center and the
/// first cell of the cycle.
pub fn grid_cover_cap(grid: &RegionGrid) -> f64 {
    grid.cycle_length() + 2.0 * distance(grid.region.center(), grid.cell_centers[0])
}

/// Serve every non-empty cell from its center, visiting cells in cycle
/// order, starting and ending at the region center.
pub fn grid_cover_tour(targets: &[Target], grid: &RegionGrid) -> Tour {
    let start = grid.region.center();
    if targets.is_empty() {
        return Tour::empty(start);
    }
    let mut per_cell: Vec<Vec<MsgId>> = vec![Vec::new(); grid.num_cells()];
    for t in targets {
        per_cell[grid.cell_of(t.location)].push(t.id);
    }
    let stops = per_cell
        .into_iter()
        .enumerate()
        .filter(|(_, ids)| !ids.is_empty())
        .map(|(cell, mut ids)| {
            ids.sort_unstable();
            TourStop {
                point: grid.cell_centers[cell],
                messages: ids,
            }
        })
        .collect();
    Tour::from_stops(start, stops, TourKind::GridCover)
}

const MAX_TWO_OPT_PASSES: usize = 64;

/// A stop in the working tour: the message whose disk placed it, plus the
/// additional messages batch-served there.
#[derive(Debug, Clone)]
struct Work {
    anchor: Target,
    point: Point,
    extra: Vec<Target>,
}

/// Greedy nearest-neighborhood tour with 2-opt improvement.
///
/// The greedy phase repeatedly moves to the reception point of the message
/// with the smallest excess distance `max(0, d - r*)` and serves every
/// outstanding message whose disk contains that point. The 2-opt phase
/// reverses stop segments; after each reversal every stop is re-projected
/// onto its anchor disk from the preceding stop, and the move is kept only
/// if all messages stay covered and the tour got shorter.
pub fn nn_tspn_tour(targets: &[Target], r_star: f64, start: Point) -> Tour {
    if targets.is_empty() {
        return Tour::empty(start);
    }
    let mut work = greedy(targets, r_star, start);
    two_opt(&mut work, r_star, start);
    let stops = work
        .into_iter()
        .map(|w| {
            let mut messages: Vec<MsgId> = std::iter::once(w.anchor.id)
                .chain(w.extra.iter().map(|t| t.id))
                .collect();
            messages.sort_unstable();
            TourStop {
                point: w.point,
                messages,
            }
        })
        .collect();
    Tour::from_stops(start, stops, TourKind::NearestNeighbor)
}

fn greedy(targets: &[Target], r_star: f64, start: Point) -> Vec<Work> {
    let mut open: Vec<Target> = targets.to_vec();
    let mut out: Vec<Work> = Vec::new();
    let mut cur = start;
    while !open.is_empty() {
        let (best, _) = open
            .iter()
            .enumerate()
            .map(|(i, t)| (i, (distance(cur, t.location) - r_star).max(0.0)))
            .min_by(|a, b| a.1.total_cmp(&b.1).then_with(|| open[a.0].id.cmp(&open[b.0].id)))
            .unwrap();
        let anchor = open.swap_remove(best);
        let point = reception_point(cur, anchor.location, r_star);
        let mut extra = Vec::new();
        let mut i = 0;
        while i < open.len() {
            if distance(open[i].location, point) <= r_star {
                extra.push(open.swap_remove(i));
            } else {
                i += 1;
            }
        }
        match out.last_mut() {
            Some(last) if last.point == point => {
                last.extra.push(anchor);
                last.extra.extend(extra);
            }
            _ => out.push(Work {
                anchor,
                point,
                extra,
            }),
        }
        cur = point;
    }
    out
}

fn work_length(start: Point, work: &[Work]) -> f64 {
    closed_length(start, work.iter().map(|w| w.point))
}

/// Re-project every stop from its predecessor; false if some batch-served
/// message left its stop's disk.
fn reproject(work: &mut [Work], r_star: f64, start: Point) -> bool {
    let mut cur = start;
    for w in work.iter_mut() {
        w.point = reception_point(cur, w.anchor.location, r_star);
        cur = w.point;
    }
    work.iter()
        .all(|w| w.extra.iter().all(|t| distance(t.location, w.point) <= r_star))
}

fn two_opt(work: &mut [Work], r_star: f64, start: Point) {
    let n = work.len();
    if n < 2 {
        return;
    }
    let mut best = work_length(start, work);
    let at = |w: &[Work], i: isize| -> Point {
        if i < 0 || i as usize >= w.len() {
            start
        } else {
            w[i as usize].point
        }
    };
    for _ in 0..MAX_TWO_OPT_PASSES {
        let mut improved = false;
        for i in 0..n - 1 {
            for j in i + 1..n {
                let (a, b) = (at(work, i as isize - 1), at(work, i as isize));
                let (c, d) = (at(work, j as isize), at(work, j as isize + 1));
                let delta = distance(a, c) + distance(b, d) - distance(a, b) - distance(c, d);
                if delta >= -1e-12 {
                    continue;
                }
                let saved: Vec<Point> = work.iter().map(|w| w.point).collect();
                work[i..=j].reverse();
                let ok = reproject(work, r_star, start);
                let len = work_length(start, work);
                if ok && len < best - 1e-12 {
                    best = len;
                    improved = true;
                } else {
                    work[i..=j].reverse();
                    for (w, p) in work.iter_mut().zip(saved) {
                        w.point = p;
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
}

/// The shorter of [`grid_cover_tour`] and [`nn_tspn_tour`] (ties go to the
/// nearest-neighborhood tour).
pub fn plan_tour(targets: &[Target], grid: &RegionGrid, r_star: f64, start: Point) -> Tour {
    if targets.is_empty() {
        return Tour::empty(start);
    }
    let nn = nn_tspn_tour(targets, r_star, start);
    let mut cover = grid_cover_tour(targets, grid);
    if cover.start != start {
        cover = Tour::from_stops(start, cover.stops, TourKind::GridCover);
    }
    if nn.total_length <= cover.total_length {
        nn
    } else {
        cover
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;
    use crate::model::{rng_from_seed, uniform_point};

    fn targets(points: &[(f64, f64)]) -> Vec<Target> {
        points
            .iter()
            .enumerate()
            .map(|(id, &(x, y))| Target {
                id,
                location: Point::new(x, y),
            })
            .collect()
    }

    fn random_targets(n: usize, area: f64, seed: u64) -> Vec<Target> {
        let mut rng = rng_from_seed(seed);
        (0..n)
            .map(|id| Target {
                id,
                location: uniform_point(area, &mut rng),
            })
            .collect()
    }

    #[test]
    fn upper_bound_formula() {
        assert!((tsp_upper_bound(0, 1.0) - 1.75).abs() < 1e-15);
        assert!((tsp_upper_bound(2, 1.0) - 3.75).abs() < 1e-15);
    }

    #[test]
    fn all_in_range_of_start_is_one_stop() {
        let start = Point::new(5.0, 5.0);
        let t = targets(&[(5.5, 5.0), (4.0, 5.5), (5.0, 6.9)]);
        let tour = nn_tspn_tour(&t, 2.0, start);
        assert_eq!(tour.stops.len(), 1);
        assert_eq!(tour.stops[0].point, start);
        assert_eq!(tour.stops[0].messages, vec![0, 1, 2]);
        assert_eq!(tour.total_length, 0.0);
        assert!(tour.covers(&t, 2.0));
    }

    #[test]
    fn collinear_pair_visits_nearer_first() {
        let start = Point::new(0.0, 0.0);
        let t = targets(&[(0.0, 20.0), (0.0, 10.0)]);
        let tour = nn_tspn_tour(&t, 2.0, start);
        assert_eq!(tour.stops.len(), 2);
        assert_eq!(tour.stops[0].messages, vec![1]);
        assert!((tour.total_length - 2.0 * (20.0 - 2.0)).abs() < 1e-9);
    }

    #[test]
    fn grid_cover_single_cell() {
        let grid = build_grid(200.0, 2.2);
        let center = grid.region.center();
        let corner = Point::new(0.3, 0.4);
        let t = targets(&[(0.3, 0.4), (0.5, 0.2)]);
        let tour = grid_cover_tour(&t, &grid);
        assert_eq!(tour.stops.len(), 1);
        let cc = grid.cell_centers[grid.cell_of(corner)];
        assert!((tour.total_length - 2.0 * distance(center, cc)).abs() < 1e-12);
        assert!(tour.covers(&t, grid.effective_radius));
    }

    #[test]
    fn grid_cover_full_is_constant() {
        let grid = build_grid(200.0, 2.2);
        let cap = grid_cover_cap(&grid);
        let small = grid_cover_tour(&random_targets(2_000, 200.0, 3), &grid);
        let large = grid_cover_tour(&random_targets(10_000, 200.0, 4), &grid);
        assert_eq!(small.stops.len(), grid.num_cells());
        assert!((small.total_length - large.total_length).abs() < 1e-9);
        assert!(large.total_length <= cap + 1e-9);
    }

    #[test]
    fn grid_cover_within_cap_many_seeds() {
        let grid = build_grid(200.0, 2.2);
        let cap = grid_cover_cap(&grid);
        for seed in 0..20 {
            let t = random_targets(10_000, 200.0, seed);
            let tour = grid_cover_tour(&t, &grid);
            assert!(tour.total_length <= cap + 1e-9);
            assert!(tour.covers(&t, grid.effective_radius));
        }
    }

    #[test]
    fn plan_tour_edge_cases() {
        let grid = build_grid(200.0, 2.2);
        let center = grid.region.center();
        let tour = plan_tour(&[], &grid, 2.2, center);
        assert_eq!(tour.kind, TourKind::Empty);
        assert_eq!(tour.total_length, 0.0);

        let far = targets(&[(0.5, 0.5)]);
        let tour = plan_tour(&far, &grid, 2.2, center);
        assert_eq!(tour.kind, TourKind::NearestNeighbor);
        let d = distance(center, Point::new(0.5, 0.5));
        assert!((tour.total_length - 2.0 * (d - 2.2)).abs() < 1e-9);
    }

    #[test]
    fn two_opt_not_worse_than_greedy() {
        for seed in 0..30 {
            let t = random_targets(60, 400.0, 100 + seed);
            let start = Point::new(10.0, 10.0);
            let g = greedy(&t, 1.5, start);
            let greedy_len = work_length(start, &g);
            let tour = nn_tspn_tour(&t, 1.5, start);
            assert!(tour.total_length <= greedy_len + 1e-9);
            assert!(tour.covers(&t, 1.5));
        }
    }

    #[test]
    fn zero_radius_tour_respects_tsp_bound() {
        let area = 100.0;
        for n in [10, 100, 1000] {
            for seed in 0..5 {
                let t = random_targets(n, area, seed);
                let tour = nn_tspn_tour(&t, 0.0, Point::new(5.0, 5.0));
                // the bound is for a tour through the points; adding the
                // start point counts as one more point
                assert!(tour.total_length <= tsp_upper_bound(n + 1, area));
                assert!(tour.covers(&t, 0.0));
            }
        }
    }
}
