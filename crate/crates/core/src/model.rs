//! Shared domain types: points and squares in the plane, the scenario
//! parameterization, messages, and the seeded random stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::comm;
use crate::error::{positive, Error, Result};

/// Random stream used by every replication. One stream per seed.
pub type SimRng = ChaCha12Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Euclidean distance.
pub fn distance(p: Point, q: Point) -> f64 {
    (p.x - q.x).hypot(p.y - q.y)
}

/// Axis-aligned square, `origin` is the lower-left corner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Square {
    pub origin: Point,
    pub side: f64,
}

impl Square {
    /// The region `[0, sqrt(area)]^2`.
    pub fn with_area(area: f64) -> Self {
        Self {
            origin: Point::new(0.0, 0.0),
            side: area.sqrt(),
        }
    }

    pub fn area(&self) -> f64 {
        self.side * self.side
    }

    /// Center of the square, which is also its median.
    pub fn center(&self) -> Point {
        Point::new(
            self.origin.x + 0.5 * self.side,
            self.origin.y + 0.5 * self.side,
        )
    }

    /// Closed containment test.
    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.origin.x
            && p.x <= self.origin.x + self.side
            && p.y >= self.origin.y
            && p.y <= self.origin.y + self.side
    }

    /// Split into `j * j` equal squares, row-major from the origin corner.
    pub fn split(&self, j: usize) -> Vec<Square> {
        let side = self.side / j as f64;
        let mut out = Vec::with_capacity(j * j);
        for row in 0..j {
            for col in 0..j {
                out.push(Square {
                    origin: Point::new(
                        self.origin.x + col as f64 * side,
                        self.origin.y + row as f64 * side,
                    ),
                    side,
                });
            }
        }
        out
    }

    /// I.i.d. uniform location inside the square.
    pub fn uniform_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        Point::new(
            self.origin.x + rng.random::<f64>() * self.side,
            self.origin.y + rng.random::<f64>() * self.side,
        )
    }
}

/// Uniform point on `[0, sqrt(area)]^2`.
pub fn uniform_point<R: Rng + ?Sized>(area: f64, rng: &mut R) -> Point {
    Square::with_area(area).uniform_point(rng)
}

/// Full physical and load parameterization of one scenario.
///
/// `snr_c` is a linear ratio (SNR of a transmission from unit distance).
/// `speed` may be `f64::INFINITY` to model zero travel times.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub area: f64,
    pub arrival_rate: f64,
    pub reception_time: f64,
    pub speed: f64,
    pub snr_c: f64,
    pub beta: f64,
    pub alpha: f64,
    pub collectors: usize,
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        positive("area", self.area)?;
        positive("arrival_rate", self.arrival_rate)?;
        positive("reception_time", self.reception_time)?;
        positive("speed", self.speed)?;
        positive("snr_c", self.snr_c)?;
        positive("beta", self.beta)?;
        if !(2.0..=6.0).contains(&self.alpha) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: self.alpha,
                reason: "path-loss exponent must lie in [2, 6]",
            });
        }
        if self.collectors == 0 {
            return Err(Error::InvalidParameter {
                name: "collectors",
                value: 0.0,
                reason: "at least one collector is required",
            });
        }
        Ok(())
    }

    /// Same scenario with the arrival rate chosen so that `rho = lambda * s / m`.
    pub fn with_load(&self, rho: f64) -> Self {
        Self {
            arrival_rate: rho * self.collectors as f64 / self.reception_time,
            ..self.clone()
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    /// Load per collector, `lambda * s / m`. Not required to be below one.
    pub fn rho(&self) -> f64 {
        self.arrival_rate * self.reception_time / self.collectors as f64
    }

    pub fn r_star(&self) -> f64 {
        comm::radius_unchecked(self.snr_c, self.beta, self.alpha)
    }

    pub fn side(&self) -> f64 {
        self.area.sqrt()
    }

    pub fn region(&self) -> Square {
        Square::with_area(self.area)
    }
}

pub type MsgId = usize;

/// One demand with its delay decomposition. Timing fields are set once the
/// message has been received.
#[derive(Debug, Clone, PartialEq)]
pub struct Message {
    pub id: MsgId,
    pub arrival_time: f64,
    pub location: Point,
    pub reception_start: Option<f64>,
    pub departure_time: Option<f64>,
    pub wait_travel: Option<f64>,
    pub wait_service: Option<f64>,
    /// Collector that received the message.
    pub served_by: Option<usize>,
}

impl Message {
    pub fn new(id: MsgId, arrival_time: f64, location: Point) -> Self {
        Self {
            id,
            arrival_time,
            location,
            reception_start: None,
            departure_time: None,
            wait_travel: None,
            wait_service: None,
            served_by: None,
        }
    }

    /// Time in system, `T_i`.
    pub fn system_time(&self) -> Option<f64> {
        self.departure_time.map(|d| d - self.arrival_time)
    }

    /// Total wait `W_i = T_i - s`.
    pub fn wait(&self) -> Option<f64> {
        self.reception_start.map(|r| r - self.arrival_time)
    }
}
