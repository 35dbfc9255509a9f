//! Deliberate corruptions used to check that verification detects them.
//!
//! A fault is active when its cargo feature is compiled in or when it has
//! been switched on at runtime with [`enable`].

use std::sync::atomic::{AtomicU8, Ordering};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fault {
    /// The gap-principle comparison is reversed.
    GapFlip,
    /// Every count bound is lowered by one.
    BoundOffByOne,
}

impl Fault {
    fn bit(self) -> u8 {
        match self {
            Fault::GapFlip => 1,
            Fault::BoundOffByOne => 2,
        }
    }

    fn compiled(self) -> bool {
        match self {
            Fault::GapFlip => cfg!(feature = "fault-gap-flip"),
            Fault::BoundOffByOne => cfg!(feature = "fault-bound-off-by-one"),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Fault::GapFlip => "gap-flip",
            Fault::BoundOffByOne => "bound-off-by-one",
        }
    }

    pub fn parse(s: &str) -> Option<Fault> {
        match s {
            "gap-flip" => Some(Fault::GapFlip),
            "bound-off-by-one" => Some(Fault::BoundOffByOne),
            _ => None,
        }
    }
}

static RUNTIME: AtomicU8 = AtomicU8::new(0);

pub fn enable(f: Fault) {
    RUNTIME.fetch_or(f.bit(), Ordering::SeqCst);
}

pub fn disable(f: Fault) {
    RUNTIME.fetch_and(!f.bit(), Ordering::SeqCst);
}

pub fn is_active(f: Fault) -> bool {
    f.compiled() || RUNTIME.load(Ordering::SeqCst) & f.bit() != 0
}

/// Names of all active faults, for reports.
pub fn active_names() -> Vec<&'static str> {
    [Fault::GapFlip, Fault::BoundOffByOne]
        .into_iter()
        .filter(|f| is_active(*f))
        .map(Fault::name)
        .collect()
}
