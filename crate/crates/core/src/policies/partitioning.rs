use std::collections::VecDeque;

use crate::engine::{Action, DecisionContext, Policy};
use crate::grid::RegionGrid;
use crate::model::{Message, MsgId, Point, Square};

/// Cyclic exhaustive service of the grid cells: at each cell center receive
/// that cell's messages in arrival order, including ones that arrive while
/// the cell is being served, then move to the next cell of the cycle.
/// The collector keeps cycling when the region is empty.
#[derive(Debug, Clone)]
pub struct GridPartitioning {
    grid: RegionGrid,
    queues: Vec<VecDeque<MsgId>>,
    current: usize,
    hops: u64,
    visits: Vec<u64>,
}

impl GridPartitioning {
    pub fn new(region: Square, r_star: f64) -> Self {
        Self::from_grid(RegionGrid::new(region, r_star))
    }

    pub fn from_grid(grid: RegionGrid) -> Self {
        let n = grid.num_cells();
        Self {
            grid,
            queues: vec![VecDeque::new(); n],
            current: 0,
            hops: 0,
            visits: vec![0; n],
        }
    }

    pub fn grid(&self) -> &RegionGrid {
        &self.grid
    }

    /// Number of cell-to-cell moves started so far.
    pub fn hops(&self) -> u64 {
        self.hops
    }

    /// Times each cell (in cycle order) has been entered.
    pub fn visits(&self) -> &[u64] {
        &self.visits
    }
}

impl Policy for GridPartitioning {
    fn name(&self) -> String {
        "grid_partitioning".into()
    }

    fn initial_position(&self, _collector: usize) -> Point {
        self.grid.cell_centers[0]
    }

    fn on_arrival(&mut self, msg: &Message, _owner: usize) {
        let cell = self.grid.cell_of(msg.location);
        self.queues[cell].push_back(msg.id);
    }

    fn decide(&mut self, _ctx: &DecisionContext) -> Action {
        if let Some(id) = self.queues[self.current].pop_front() {
            return Action::Receive(id);
        }
        if self.grid.num_cells() == 1 {
            return Action::Wait;
        }
        self.current = (self.current + 1) % self.grid.num_cells();
        self.hops += 1;
        self.visits[self.current] += 1;
        Action::TravelTo(self.grid.cell_centers[self.current])
    }
}
