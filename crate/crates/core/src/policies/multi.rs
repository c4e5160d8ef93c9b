use crate::engine::{Action, DecisionContext, Policy};
use crate::model::{Message, MsgId, Point, Square};

/// Equal-area split of the region into `j * j` squares, one collector per
/// square, each running its own single-collector policy on the messages that
/// land in its square.
pub struct MultiPartitioning {
    region: Square,
    per_side: usize,
    inner: Vec<Box<dyn Policy + Send>>,
    inner_name: String,
}

impl MultiPartitioning {
    /// `make` builds the policy for one subregion.
    pub fn new<F>(region: Square, per_side: usize, mut make: F) -> Self
    where
        F: FnMut(Square) -> Box<dyn Policy + Send>,
    {
        let inner: Vec<_> = region.split(per_side).into_iter().map(&mut make).collect();
        let inner_name = inner[0].name();
        Self {
            region,
            per_side,
            inner,
            inner_name,
        }
    }

    pub fn subregions(&self) -> Vec<Square> {
        self.region.split(self.per_side)
    }

    pub fn inner(&self, collector: usize) -> &dyn Policy {
        self.inner[collector].as_ref()
    }
}

impl Policy for MultiPartitioning {
    fn name(&self) -> String {
        format!("multi_partitioning({})", self.inner_name)
    }

    fn num_collectors(&self) -> usize {
        self.per_side * self.per_side
    }

    fn initial_position(&self, collector: usize) -> Point {
        self.inner[collector].initial_position(0)
    }

    fn owner(&self, location: Point) -> usize {
        let j = self.per_side;
        let side = self.region.side / j as f64;
        let idx = |v: f64, o: f64| (((v - o) / side).floor().max(0.0) as usize).min(j - 1);
        idx(location.y, self.region.origin.y) * j + idx(location.x, self.region.origin.x)
    }

    fn on_arrival(&mut self, msg: &Message, owner: usize) {
        self.inner[owner].on_arrival(msg, 0);
    }

    fn on_reception_complete(&mut self, collector: usize, msg: MsgId) {
        self.inner[collector].on_reception_complete(0, msg);
    }

    fn decide(&mut self, ctx: &DecisionContext) -> Action {
        let local = DecisionContext {
            collector: 0,
            ..*ctx
        };
        self.inner[ctx.collector].decide(&local)
    }
}
