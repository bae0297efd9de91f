//! Process-wide counters for the invariants checked on every call.
//!
//! Each check records one evaluation and, if it failed, one violation.
//! The acceptance suite reads the totals after a full run.

use std::sync::atomic::{AtomicU64, Ordering};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    RankNullity,
    Euler,
    TwoRoute,
    SurjectiveAfterTwist,
}

const KINDS: usize = 4;

static CHECKS: [AtomicU64; KINDS] = [const { AtomicU64::new(0) }; KINDS];
static VIOLATIONS: [AtomicU64; KINDS] = [const { AtomicU64::new(0) }; KINDS];

fn slot(c: Check) -> usize {
    match c {
        Check::RankNullity => 0,
        Check::Euler => 1,
        Check::TwoRoute => 2,
        Check::SurjectiveAfterTwist => 3,
    }
}

pub fn record(c: Check, ok: bool) {
    CHECKS[slot(c)].fetch_add(1, Ordering::Relaxed);
    if !ok {
        VIOLATIONS[slot(c)].fetch_add(1, Ordering::Relaxed);
    }
}

/// `(checks, violations)` recorded so far for `c`.
pub fn totals(c: Check) -> (u64, u64) {
    (CHECKS[slot(c)].load(Ordering::Relaxed), VIOLATIONS[slot(c)].load(Ordering::Relaxed))
}
