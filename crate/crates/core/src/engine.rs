//! Continuous-time discrete-event loop.
//!
//! Arrivals are drawn lazily from a seeded stream. Collectors alternate
//! between idling, straight-line travel at the scenario speed, and
//! receptions of fixed duration; a [`Policy`] picks the next action whenever
//! a collector becomes free. At equal timestamps collector completions are
//! processed before arrivals.
//!
//! Wait attribution: for every message the interval between arrival and
//! reception start is split by what its serving collector did meanwhile.
//! Time spent receiving other messages counts as `W_s`; travel and idle time
//! count as `W_d`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};
use crate::model::{distance, rng_from_seed, Message, MsgId, Point, ScenarioConfig, SimRng, Square};

/// What a free collector does next.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Action {
    /// Stay idle until the next arrival.
    Wait,
    /// Move in a straight line to the point.
    TravelTo(Point),
    /// Start receiving a pending message; it must be in range.
    Receive(MsgId),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionContext {
    pub collector: usize,
    pub now: f64,
    pub position: Point,
    pub r_star: f64,
}

/// Routing policy interface. Policies keep their own view of pending work,
/// fed by `on_arrival` / `on_reception_complete`.
pub trait Policy {
    fn name(&self) -> String;

    fn num_collectors(&self) -> usize {
        1
    }

    fn initial_position(&self, collector: usize) -> Point;

    /// Collector that will eventually serve a message at `location`.
    fn owner(&self, _location: Point) -> usize {
        0
    }

    fn on_arrival(&mut self, msg: &Message, owner: usize);

    fn on_reception_complete(&mut self, _collector: usize, _msg: MsgId) {}

    fn decide(&mut self, ctx: &DecisionContext) -> Action;
}

/// Consult the policy for one free collector.
pub fn step_policy(policy: &mut dyn Policy, ctx: &DecisionContext) -> Action {
    policy.decide(ctx)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Phase {
    Idle,
    Traveling { target: Point, finish: f64 },
    Receiving { msg: MsgId, finish: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollectorState {
    pub id: usize,
    pub position: Point,
    pub phase: Phase,
    pub subregion: Option<usize>,
}

/// When to end a run. Any rule that fires stops the loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopRule {
    pub max_completed: Option<usize>,
    pub horizon: Option<f64>,
    pub divergence_threshold: Option<f64>,
}

impl StopRule {
    /// Stop after `n` completed messages, with the default divergence trigger.
    pub fn messages(n: usize, cfg: &ScenarioConfig) -> Self {
        Self {
            max_completed: Some(n),
            horizon: None,
            divergence_threshold: Some(default_divergence_threshold(cfg)),
        }
    }

    pub fn horizon(t: f64) -> Self {
        Self {
            max_completed: None,
            horizon: Some(t),
            divergence_threshold: None,
        }
    }

    pub fn with_divergence(self, threshold: Option<f64>) -> Self {
        Self {
            divergence_threshold: threshold,
            ..self
        }
    }
}

/// `50 * max(10, lambda (s + cycle / v) / (1 - min(rho, 0.99)))`, where
/// `cycle = k * side` is one pass over a grid of `k x k` cells of diagonal
/// `2 r*` (at most 1000 per side) covering the whole region.
pub fn default_divergence_threshold(cfg: &ScenarioConfig) -> f64 {
    let rho = cfg.rho().min(0.99);
    let side = cfg.side();
    let k = (side / (std::f64::consts::SQRT_2 * cfg.r_star())).ceil().clamp(1.0, 1000.0);
    let cycle = if k > 1.0 { k * side } else { 0.0 };
    let per_message = cfg.reception_time + cycle / cfg.speed;
    50.0 * (cfg.arrival_rate * per_message / (1.0 - rho)).max(10.0)
}

/// Everything recorded by one run.
#[derive(Debug, Clone, PartialEq)]
pub struct EventTrace {
    /// Received messages in departure order.
    pub completed: Vec<Message>,
    /// Messages still waiting or in reception when the run stopped.
    pub in_system: Vec<Message>,
    /// `(t, N(t))` right after every arrival and departure, starting at `(0, 0)`.
    pub occupancy: Vec<(f64, usize)>,
    pub total_travel_distance: f64,
    /// Summed reception time over all collectors (completed receptions only).
    pub total_receive_time: f64,
    pub end_time: f64,
    pub generated: usize,
    pub diverged: bool,
    pub collectors: usize,
    pub reception_time: f64,
    pub arrival_rate: f64,
    pub divergence_threshold: Option<f64>,
}

impl EventTrace {
    /// Fraction of aggregate collector time spent receiving.
    pub fn receiving_fraction(&self) -> f64 {
        if self.end_time <= 0.0 {
            0.0
        } else {
            self.total_receive_time / (self.collectors as f64 * self.end_time)
        }
    }
}

/// Poisson arrival stream with uniform locations.
#[derive(Debug, Clone)]
pub struct ArrivalStream {
    region: Square,
    gap: Exp<f64>,
    clock: f64,
    rng: SimRng,
}

impl ArrivalStream {
    pub fn new(rate: f64, region: Square, rng: SimRng) -> Self {
        Self {
            region,
            gap: Exp::new(rate).expect("arrival rate must be positive"),
            clock: 0.0,
            rng,
        }
    }

    pub fn next_arrival(&mut self) -> (f64, Point) {
        self.clock += self.gap.sample(&mut self.rng);
        let p = self.region.uniform_point(&mut self.rng);
        (self.clock, p)
    }
}

/// All arrivals on `[0, horizon]` over the square of area `area`.
pub fn generate_arrivals(rate: f64, horizon: f64, area: f64, rng: SimRng) -> Vec<(f64, Point)> {
    let mut stream = ArrivalStream::new(rate, Square::with_area(area), rng);
    let mut out = Vec::new();
    loop {
        let a = stream.next_arrival();
        if a.0 > horizon {
            return out;
        }
        out.push(a);
    }
}

const MAX_ZERO_DURATION_DECISIONS: usize = 1_000_000;
const RANGE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy)]
struct Completion {
    time: f64,
    seq: u64,
    collector: usize,
}

impl PartialEq for Completion {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Completion {}
impl PartialOrd for Completion {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Completion {
    // min-heap on (time, seq)
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

struct Sim<'p> {
    policy: &'p mut dyn Policy,
    r_star: f64,
    speed: f64,
    s: f64,
    collectors: Vec<CollectorState>,
    waiting: Vec<bool>,
    recv_done: Vec<f64>,
    messages: Vec<Message>,
    owner: Vec<usize>,
    recv_mark: Vec<f64>,
    completed: Vec<MsgId>,
    occupancy: Vec<(f64, usize)>,
    in_system: usize,
    heap: BinaryHeap<Completion>,
    seq: u64,
    travel: f64,
    zero_streak: usize,
}

impl Sim<'_> {
    /// Cumulative receive time of collector `c` at time `now`.
    fn cum_receive(&self, c: usize, now: f64) -> f64 {
        match self.collectors[c].phase {
            Phase::Receiving { finish, .. } => self.recv_done[c] + (now - (finish - self.s)),
            _ => self.recv_done[c],
        }
    }

    fn schedule(&mut self, c: usize, time: f64) {
        self.seq += 1;
        self.heap.push(Completion {
            time,
            seq: self.seq,
            collector: c,
        });
    }

    fn decide(&mut self, c: usize, now: f64) -> Result<()> {
        loop {
            let ctx = DecisionContext {
                collector: c,
                now,
                position: self.collectors[c].position,
                r_star: self.r_star,
            };
            match step_policy(self.policy, &ctx) {
                Action::Wait => {
                    self.collectors[c].phase = Phase::Idle;
                    self.waiting[c] = true;
                    return Ok(());
                }
                Action::TravelTo(target) => {
                    let d = distance(self.collectors[c].position, target);
                    let dt = if d == 0.0 { 0.0 } else { d / self.speed };
                    if dt > 0.0 {
                        self.zero_streak = 0;
                        self.collectors[c].phase = Phase::Traveling {
                            target,
                            finish: now + dt,
                        };
                        self.schedule(c, now + dt);
                        return Ok(());
                    }
                    self.travel += d;
                    self.collectors[c].position = target;
                    self.zero_streak += 1;
                    if self.zero_streak > MAX_ZERO_DURATION_DECISIONS {
                        return Err(Error::Livelock(self.zero_streak));
                    }
                }
                Action::Receive(id) => {
                    self.start_reception(c, id, now)?;
                    self.zero_streak = 0;
                    return Ok(());
                }
            }
        }
    }

    fn start_reception(&mut self, c: usize, id: MsgId, now: f64) -> Result<()> {
        let violation = |message: String| Error::ContractViolation { time: now, message };
        let msg = self
            .messages
            .get(id)
            .ok_or_else(|| violation(format!("collector {c} asked to receive unknown message {id}")))?;
        if msg.reception_start.is_some() {
            return Err(violation(format!("message {id} was already received")));
        }
        if self.owner[id] != c {
            return Err(violation(format!(
                "message {id} belongs to collector {}, not {c}",
                self.owner[id]
            )));
        }
        let d = distance(self.collectors[c].position, msg.location);
        if d > self.r_star * (1.0 + RANGE_TOLERANCE) {
            return Err(violation(format!(
                "message {id} is {d} away from collector {c}, beyond r* = {}",
                self.r_star
            )));
        }
        let ws = (self.cum_receive(c, now) - self.recv_mark[id]).max(0.0);
        let wait = now - msg.arrival_time;
        let ws = ws.min(wait);
        let msg = &mut self.messages[id];
        msg.reception_start = Some(now);
        msg.wait_service = Some(ws);
        msg.wait_travel = Some(wait - ws);
        msg.served_by = Some(c);
        self.collectors[c].phase = Phase::Receiving {
            msg: id,
            finish: now + self.s,
        };
        self.schedule(c, now + self.s);
        Ok(())
    }

    fn complete(&mut self, ev: Completion) {
        let c = ev.collector;
        match self.collectors[c].phase {
            Phase::Traveling { target, .. } => {
                self.travel += distance(self.collectors[c].position, target);
                self.collectors[c].position = target;
            }
            Phase::Receiving { msg, .. } => {
                self.messages[msg].departure_time = Some(ev.time);
                self.recv_done[c] += self.s;
                self.in_system -= 1;
                self.occupancy.push((ev.time, self.in_system));
                self.completed.push(msg);
                self.policy.on_reception_complete(c, msg);
            }
            Phase::Idle => unreachable!("completion event for an idle collector"),
        }
        self.collectors[c].phase = Phase::Idle;
    }
}

/// Run one replication of `cfg` under `policy` until `stop` fires.
pub fn run(cfg: &ScenarioConfig, policy: &mut dyn Policy, stop: StopRule) -> Result<EventTrace> {
    let mut arrivals = ArrivalStream::new(cfg.arrival_rate, cfg.region(), rng_from_seed(cfg.seed));
    run_inner(cfg, policy, stop, move || arrivals.next_arrival())
}

/// Run with a fixed, time-sorted list of arrivals instead of the random
/// stream. The run also ends once the list is exhausted and every collector
/// is idle.
pub fn run_scripted(
    cfg: &ScenarioConfig,
    policy: &mut dyn Policy,
    arrivals: &[(f64, Point)],
    stop: StopRule,
) -> Result<EventTrace> {
    if arrivals.windows(2).any(|w| w[1].0 < w[0].0) || arrivals.iter().any(|a| a.0.is_nan() || a.0 < 0.0) {
        return Err(Error::Configuration("scripted arrivals must be sorted and non-negative".into()));
    }
    let mut it = arrivals.iter().copied();
    run_inner(cfg, policy, stop, move || it.next().unwrap_or((f64::INFINITY, Point::new(0.0, 0.0))))
}

fn run_inner(
    cfg: &ScenarioConfig,
    policy: &mut dyn Policy,
    stop: StopRule,
    mut next: impl FnMut() -> (f64, Point),
) -> Result<EventTrace> {
    cfg.validate()?;
    let m = cfg.collectors;
    if policy.num_collectors() != m {
        return Err(Error::Configuration(format!(
            "policy {} drives {} collectors but the scenario has {m}",
            policy.name(),
            policy.num_collectors()
        )));
    }
    if stop.max_completed.is_none() && stop.horizon.is_none() && stop.divergence_threshold.is_none() {
        return Err(Error::Configuration("stop rule never fires".into()));
    }
    let collectors = (0..m)
        .map(|id| CollectorState {
            id,
            position: policy.initial_position(id),
            phase: Phase::Idle,
            subregion: (m > 1).then_some(id),
        })
        .collect();
    let mut sim = Sim {
        r_star: cfg.r_star(),
        speed: cfg.speed,
        s: cfg.reception_time,
        policy,
        collectors,
        waiting: vec![false; m],
        recv_done: vec![0.0; m],
        messages: Vec::new(),
        owner: Vec::new(),
        recv_mark: Vec::new(),
        completed: Vec::new(),
        occupancy: vec![(0.0, 0)],
        in_system: 0,
        heap: BinaryHeap::new(),
        seq: 0,
        travel: 0.0,
        zero_streak: 0,
    };

    let mut next_arrival = next();
    let mut now = 0.0;
    let mut diverged = false;
    for c in 0..m {
        sim.decide(c, now)?;
    }

    loop {
        if let Some(n) = stop.max_completed {
            if sim.completed.len() >= n {
                break;
            }
        }
        if let Some(th) = stop.divergence_threshold {
            if sim.in_system as f64 > th {
                diverged = true;
                break;
            }
        }
        let next_completion = sim.heap.peek().map(|e| e.time);
        let event_time = match next_completion {
            Some(t) if t <= next_arrival.0 => t,
            _ => next_arrival.0,
        };
        if event_time.is_infinite() {
            break;
        }
        if let Some(h) = stop.horizon {
            if event_time > h {
                now = h;
                break;
            }
        }
        now = event_time;
        if next_completion.is_some_and(|t| t <= next_arrival.0) {
            let ev = sim.heap.pop().unwrap();
            sim.complete(ev);
            sim.decide(ev.collector, now)?;
        } else {
            let (t, location) = next_arrival;
            let id = sim.messages.len();
            let msg = Message::new(id, t, location);
            let owner = sim.policy.owner(location);
            if owner >= m {
                return Err(Error::ContractViolation {
                    time: t,
                    message: format!("owner {owner} out of range for {m} collectors"),
                });
            }
            sim.recv_mark.push(sim.cum_receive(owner, t));
            sim.owner.push(owner);
            sim.policy.on_arrival(&msg, owner);
            sim.messages.push(msg);
            sim.in_system += 1;
            sim.occupancy.push((t, sim.in_system));
            next_arrival = next();
            let idle: Vec<usize> = (0..m).filter(|&c| sim.waiting[c]).collect();
            for c in idle {
                sim.waiting[c] = false;
                sim.decide(c, now)?;
            }
        }
    }

    let generated = sim.messages.len();
    let mut done = vec![false; generated];
    let mut completed = Vec::with_capacity(sim.completed.len());
    for &id in &sim.completed {
        done[id] = true;
        completed.push(sim.messages[id].clone());
    }
    let in_system = sim
        .messages
        .iter()
        .filter(|msg| !done[msg.id])
        .cloned()
        .collect();
    Ok(EventTrace {
        completed,
        in_system,
        occupancy: sim.occupancy,
        total_travel_distance: sim.travel,
        total_receive_time: sim.recv_done.iter().sum(),
        end_time: now,
        generated,
        diverged,
        collectors: m,
        reception_time: cfg.reception_time,
        arrival_rate: cfg.arrival_rate,
        divergence_threshold: stop.divergence_threshold,
    })
}
