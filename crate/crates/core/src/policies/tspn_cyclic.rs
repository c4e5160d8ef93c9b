use std::collections::VecDeque;

use crate::engine::{Action, DecisionContext, Policy};
use crate::grid::RegionGrid;
use crate::model::{Message, MsgId, Point, Square};
use crate::tspn::{plan_tour, Target, TourKind};

/// One tour of the cyclic policy.
#[derive(Debug, Clone, PartialEq)]
pub struct Epoch {
    pub start_time: f64,
    /// Messages pending at the epoch start, in ascending id order.
    pub frozen: Vec<MsgId>,
    /// Messages actually received during the epoch, in reception order.
    pub served: Vec<MsgId>,
    pub tour_length: f64,
    pub kind: TourKind,
}

/// Epoch-based tour policy. The collector idles at the region center; when
/// it is at the center with pending messages it freezes that set, plans a
/// tour through their reception disks, serves exactly that set and returns
/// to the center. Arrivals during an epoch wait for the next one.
#[derive(Debug, Clone)]
pub struct TspnCyclic {
    region: Square,
    grid: RegionGrid,
    r_star: f64,
    pending: Vec<Target>,
    plan: VecDeque<Action>,
    epochs: Vec<Epoch>,
}

impl TspnCyclic {
    pub fn new(region: Square, r_star: f64) -> Self {
        Self {
            region,
            grid: RegionGrid::new(region, r_star),
            r_star,
            pending: Vec::new(),
            plan: VecDeque::new(),
            epochs: Vec::new(),
        }
    }

    pub fn epochs(&self) -> &[Epoch] {
        &self.epochs
    }

    pub fn grid(&self) -> &RegionGrid {
        &self.grid
    }
}

impl Policy for TspnCyclic {
    fn name(&self) -> String {
        "tspn".into()
    }

    fn initial_position(&self, _collector: usize) -> Point {
        self.region.center()
    }

    fn on_arrival(&mut self, msg: &Message, _owner: usize) {
        self.pending.push(Target {
            id: msg.id,
            location: msg.location,
        });
    }

    fn decide(&mut self, ctx: &DecisionContext) -> Action {
        if let Some(action) = self.plan.pop_front() {
            if let (Action::Receive(id), Some(epoch)) = (action, self.epochs.last_mut()) {
                epoch.served.push(id);
            }
            return action;
        }
        let center = self.region.center();
        if ctx.position != center {
            return Action::TravelTo(center);
        }
        if self.pending.is_empty() {
            return Action::Wait;
        }
        let frozen = std::mem::take(&mut self.pending);
        let tour = plan_tour(&frozen, &self.grid, self.r_star, center);
        let mut at = center;
        for stop in &tour.stops {
            if stop.point != at {
                self.plan.push_back(Action::TravelTo(stop.point));
                at = stop.point;
            }
            self.plan
                .extend(stop.messages.iter().map(|&id| Action::Receive(id)));
        }
        let mut ids: Vec<MsgId> = frozen.iter().map(|t| t.id).collect();
        ids.sort_unstable();
        self.epochs.push(Epoch {
            start_time: ctx.now,
            frozen: ids,
            served: Vec::new(),
            tour_length: tour.total_length,
            kind: tour.kind,
        });
        self.decide(ctx)
    }
}
