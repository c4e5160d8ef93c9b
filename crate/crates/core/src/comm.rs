//! Disk reception model derived from the SNR threshold rule.
//!
//! A transmission from distance `r` is decoded if `snr_c * r^-alpha >= beta`,
//! so the collector receives everything within `r* = (snr_c / beta)^(1/alpha)`.

use crate::error::{positive, Result};
use crate::model::{distance, Point};

/// `10^(db / 10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Maximum reliable reception distance for linear `snr_c`.
pub fn reception_radius(snr_c: f64, beta: f64, alpha: f64) -> Result<f64> {
    positive("snr_c", snr_c)?;
    positive("beta", beta)?;
    positive("alpha", alpha)?;
    Ok(radius_unchecked(snr_c, beta, alpha))
}

pub(crate) fn radius_unchecked(snr_c: f64, beta: f64, alpha: f64) -> f64 {
    (snr_c / beta).powf(1.0 / alpha)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceptionModel {
    pub r_star: f64,
    pub reception_time: f64,
}

impl ReceptionModel {
    pub fn from_snr(snr_c: f64, beta: f64, alpha: f64, reception_time: f64) -> Result<Self> {
        Ok(Self {
            r_star: reception_radius(snr_c, beta, alpha)?,
            reception_time: positive("reception_time", reception_time)?,
        })
    }
}

/// Boundary inclusive.
pub fn in_range(collector: Point, msg: Point, r_star: f64) -> bool {
    distance(collector, msg) <= r_star
}

/// Where the collector stops to receive `msg`: its own position when already
/// in range, otherwise the point on the segment towards `msg` at distance
/// `r_star` from it.
pub fn reception_point(collector: Point, msg: Point, r_star: f64) -> Point {
    let d = distance(collector, msg);
    if d <= r_star {
        return collector;
    }
    // measured from the message side, so r* = 0 lands exactly on it
    let toward = |f: f64| Point::new(msg.x + f * (collector.x - msg.x), msg.y + f * (collector.y - msg.y));
    // Rounding can leave the point a hair outside the disk (or snap it back
    // onto the collector); pull it in until it is strictly usable.
    let mut pull = 0.0;
    loop {
        let p = toward(r_star * (1.0 - pull) / d);
        if distance(p, msg) <= r_star {
            return p;
        }
        pull = if pull == 0.0 { 4.0 * f64::EPSILON } else { 2.0 * pull };
    }
}
