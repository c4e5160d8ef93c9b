use std::collections::VecDeque;

use crate::comm::{in_range, reception_point};
use crate::engine::{Action, DecisionContext, Policy};
use crate::error::{Error, Result};
use crate::model::{distance, Message, MsgId, Point, Square};

/// Serve messages strictly in arrival order, traveling to each reception
/// point. With `return_to_center` the collector goes back to the region
/// center after every reception before looking at the queue again.
#[derive(Debug, Clone)]
pub struct Fcfs {
    region: Square,
    r_star: f64,
    return_to_center: bool,
    queue: VecDeque<(MsgId, Point)>,
    owes_return: bool,
}

impl Fcfs {
    pub fn new(region: Square, r_star: f64) -> Self {
        Self {
            region,
            r_star,
            return_to_center: false,
            queue: VecDeque::new(),
            owes_return: false,
        }
    }

    pub fn returning(region: Square, r_star: f64) -> Self {
        Self {
            return_to_center: true,
            ..Self::new(region, r_star)
        }
    }
}

impl Policy for Fcfs {
    fn name(&self) -> String {
        if self.return_to_center {
            "fcfs_return".into()
        } else {
            "fcfs".into()
        }
    }

    fn initial_position(&self, _collector: usize) -> Point {
        self.region.center()
    }

    fn on_arrival(&mut self, msg: &Message, _owner: usize) {
        self.queue.push_back((msg.id, msg.location));
    }

    fn decide(&mut self, ctx: &DecisionContext) -> Action {
        if self.owes_return {
            self.owes_return = false;
            let center = self.region.center();
            if ctx.position != center {
                return Action::TravelTo(center);
            }
        }
        let Some(&(id, location)) = self.queue.front() else {
            return Action::Wait;
        };
        if in_range(ctx.position, location, self.r_star) {
            self.queue.pop_front();
            self.owes_return = self.return_to_center;
            Action::Receive(id)
        } else {
            Action::TravelTo(reception_point(ctx.position, location, self.r_star))
        }
    }
}

/// Stays at the region center and receives in arrival order. Only valid when
/// the reception disk around the center covers the whole region.
#[derive(Debug, Clone)]
pub struct CenterParked {
    region: Square,
    queue: VecDeque<MsgId>,
}

impl CenterParked {
    pub fn new(region: Square, r_star: f64) -> Result<Self> {
        let reach = distance(region.center(), region.origin);
        if r_star < reach {
            return Err(Error::Configuration(format!(
                "center_parked needs r* >= {reach} to cover the region, got {r_star}"
            )));
        }
        Ok(Self {
            region,
            queue: VecDeque::new(),
        })
    }
}

impl Policy for CenterParked {
    fn name(&self) -> String {
        "center_parked".into()
    }

    fn initial_position(&self, _collector: usize) -> Point {
        self.region.center()
    }

    fn on_arrival(&mut self, msg: &Message, _owner: usize) {
        self.queue.push_back(msg.id);
    }

    fn decide(&mut self, _ctx: &DecisionContext) -> Action {
        match self.queue.pop_front() {
            Some(id) => Action::Receive(id),
            None => Action::Wait,
        }
    }
}
