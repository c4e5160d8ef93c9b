//! Square cell partition of a region and the closed visit cycle over the
//! cell centers.
//!
//! Cells have side at most `sqrt(2) * r*`, so every point of a cell is
//! within `cell_side / sqrt(2) <= r*` of its center. For an even number of
//! cells per side the cycle moves exactly one cell per hop, including the
//! closing hop. For an odd count (at least 3) a unit-hop closed cycle does
//! not exist; the cycle then uses unit hops everywhere except one diagonal
//! hop of length `sqrt(2) * cell_side`.

use crate::model::{distance, Point, Square};

#[derive(Debug, Clone, PartialEq)]
pub struct RegionGrid {
    pub region: Square,
    pub cells_per_side: usize,
    pub cell_side: f64,
    /// Every point of a cell is within this distance of the cell center.
    pub effective_radius: f64,
    /// Cell centers in cyclic visit order; index 0 is the cell nearest to the
    /// region center.
    pub cell_centers: Vec<Point>,
    /// Row-major cell index -> position in `cell_centers`.
    order_of: Vec<usize>,
}

/// Grid on `[0, sqrt(area)]^2`.
pub fn build_grid(area: f64, r_star: f64) -> RegionGrid {
    RegionGrid::new(Square::with_area(area), r_star)
}

impl RegionGrid {
    /// `k = ceil(side / (sqrt(2) r*))` cells per side, tiling the square
    /// exactly.
    pub fn new(region: Square, r_star: f64) -> Self {
        assert!(r_star > 0.0 && region.side > 0.0);
        let raw = region.side / (std::f64::consts::SQRT_2 * r_star);
        // Exact fits must not round up to an extra row of cells.
        let k = ((raw * (1.0 - 1e-12)).ceil() as usize).max(1);
        let cell_side = region.side / k as f64;

        let cycle = cycle_row_col(k);
        let centers: Vec<Point> = cycle
            .iter()
            .map(|&(row, col)| {
                Point::new(
                    region.origin.x + (col as f64 + 0.5) * cell_side,
                    region.origin.y + (row as f64 + 0.5) * cell_side,
                )
            })
            .collect();
        let middle = region.center();
        let entry = centers
            .iter()
            .enumerate()
            .min_by(|a, b| {
                distance(*a.1, middle)
                    .partial_cmp(&distance(*b.1, middle))
                    .unwrap()
            })
            .map(|(i, _)| i)
            .unwrap_or(0);
        let mut rotated = cycle;
        rotated.rotate_left(entry);
        let mut cell_centers = centers;
        cell_centers.rotate_left(entry);

        let mut order_of = vec![0; k * k];
        for (pos, &(row, col)) in rotated.iter().enumerate() {
            order_of[row * k + col] = pos;
        }

        Self {
            region,
            cells_per_side: k,
            cell_side,
            effective_radius: cell_side / std::f64::consts::SQRT_2,
            cell_centers,
            order_of,
        }
    }

    /// `n_s`.
    pub fn num_cells(&self) -> usize {
        self.cells_per_side * self.cells_per_side
    }

    /// Position in the visit cycle of the cell containing `p`. Points on a
    /// shared boundary go to the cell with the larger coordinates; points
    /// outside the region are clamped.
    pub fn cell_of(&self, p: Point) -> usize {
        let k = self.cells_per_side;
        let idx = |v: f64, o: f64| -> usize {
            let i = ((v - o) / self.cell_side).floor();
            if i < 0.0 {
                0
            } else {
                (i as usize).min(k - 1)
            }
        };
        let col = idx(p.x, self.region.origin.x);
        let row = idx(p.y, self.region.origin.y);
        self.order_of[row * k + col]
    }

    /// Length of hop `i -> i+1` (cyclically).
    pub fn hop_length(&self, i: usize) -> f64 {
        let n = self.cell_centers.len();
        distance(self.cell_centers[i % n], self.cell_centers[(i + 1) % n])
    }

    /// Length of one full closed cycle (zero for a single cell).
    pub fn cycle_length(&self) -> f64 {
        if self.num_cells() == 1 {
            return 0.0;
        }
        (0..self.num_cells()).map(|i| self.hop_length(i)).sum()
    }

    /// Distance between consecutive cell services assumed by the reservation
    /// model: one cell side, or zero when a single cell covers the region.
    pub fn reservation_hop(&self) -> f64 {
        if self.num_cells() == 1 {
            0.0
        } else {
            self.cell_side
        }
    }
}

fn cycle_row_col(k: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(k * k);
    if k == 1 {
        out.push((0, 0));
    } else if k.is_multiple_of(2) {
        out.push((0, 0));
        for row in 0..k {
            if row % 2 == 0 {
                out.extend((1..k).map(|col| (row, col)));
            } else {
                out.extend((1..k).rev().map(|col| (row, col)));
            }
        }
        out.extend((1..k).rev().map(|row| (row, 0)));
    } else {
        out.extend((0..k).map(|row| (row, 0)));
        for (i, row) in (2..k).rev().enumerate() {
            if i % 2 == 0 {
                out.extend((1..k).map(|col| (row, col)));
            } else {
                out.extend((1..k).rev().map(|col| (row, col)));
            }
        }
        for (i, col) in (1..k).rev().enumerate() {
            if i % 2 == 0 {
                out.extend([(1, col), (0, col)]);
            } else {
                out.extend([(0, col), (1, col)]);
            }
        }
    }
    out
}
