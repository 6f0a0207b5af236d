//! Compute budgets for the exhaustive scans.
//!
//! Every counting routine in this crate is exact and therefore brute-force
//! somewhere. Budgets put an explicit ceiling on each kind of work so that
//! an over-ambitious request fails loudly instead of running for hours.

use crate::error::{Error, Result};
use serde::Serialize;

/// Ceilings for the various exhaustive enumerations.
#[derive(Debug, Clone, Serialize)]
pub struct Budget {
    /// Preset name, for reports and manifests.
    pub name: &'static str,
    /// Largest x admitted by full-range scans (mean-value sums, V-counts).
    pub max_x: u64,
    /// Integers per smallest-prime-factor sieve segment.
    pub segment_size: u64,
    /// Width of one dense value-range shard in the V-count aggregation.
    pub shard_width: u64,
    /// Points per brute-force congruence scan (period^t for one call).
    pub max_points: u64,
    /// Volume of one box scan (sifted counts, mean-value left-hand sides).
    pub max_box: u64,
    /// Tuples per lattice/divisor-style enumeration.
    pub max_tuples: u64,
}

impl Budget {
    pub fn small() -> Self {
        Budget {
            name: "small",
            max_x: 2_000_000,
            segment_size: 1 << 22,
            shard_width: 1 << 22,
            max_points: 1_000_000,
            max_box: 1_000_000,
            max_tuples: 1_000_000,
        }
    }

    pub fn medium() -> Self {
        Budget {
            name: "medium",
            max_x: 200_000_000,
            segment_size: 1 << 22,
            shard_width: 1 << 22,
            max_points: 20_000_000,
            max_box: 10_000_000,
            max_tuples: 10_000_000,
        }
    }

    pub fn large() -> Self {
        Budget {
            name: "large",
            max_x: 1_000_000_000_000,
            segment_size: 1 << 22,
            shard_width: 1 << 22,
            max_points: 200_000_000,
            max_box: 100_000_000,
            max_tuples: 100_000_000,
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "small" => Some(Self::small()),
            "medium" => Some(Self::medium()),
            "large" => Some(Self::large()),
            _ => None,
        }
    }

    /// Check a point count against `max_points`.
    pub fn check_points(&self, op: &str, needed: u128) -> Result<()> {
        if needed > self.max_points as u128 {
            return Err(Error::budget(op, needed, self.max_points));
        }
        Ok(())
    }

    /// Check a box volume against `max_box`.
    pub fn check_box(&self, op: &str, needed: u128) -> Result<()> {
        if needed > self.max_box as u128 {
            return Err(Error::budget(op, needed, self.max_box));
        }
        Ok(())
    }

    /// Check an enumeration size against `max_tuples`.
    pub fn check_tuples(&self, op: &str, needed: u128) -> Result<()> {
        if needed > self.max_tuples as u128 {
            return Err(Error::budget(op, needed, self.max_tuples));
        }
        Ok(())
    }

    /// Check a scan limit against `max_x`.
    pub fn check_x(&self, op: &str, x: u64) -> Result<()> {
        if x > self.max_x {
            return Err(Error::Budget {
                op: op.to_string(),
                needed: x as u128,
                limit: self.max_x,
                last_complete: Some(self.max_x),
            });
        }
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::medium()
    }
}
