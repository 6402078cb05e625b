use std::fmt;

use crate::expand::SubId;

/// What the main loop did with the minimum it accepted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    Grow,
    Blossom,
    /// The destination was reached; the search stops.
    Reach,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Grow => "grow",
            Phase::Blossom => "blossom",
            Phase::Reach => "reach",
        }
    }
}

/// A minimum value kept doubled so that halves stay integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfUnits(pub u64);

impl HalfUnits {
    pub fn from_whole(w: u64) -> Self {
        HalfUnits(2 * w)
    }

    /// Exact value if integral.
    pub fn whole(self) -> Option<u64> {
        self.0.is_multiple_of(2).then_some(self.0 / 2)
    }
}

impl fmt::Display for HalfUnits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}.5", self.0 / 2)
        }
    }
}

/// One accepted decision: the edge `(u, v)` with `u` on the search-tree side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TraceEntry {
    pub phase: Phase,
    pub u: SubId,
    pub v: SubId,
    pub minval: HalfUnits,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchTrace {
    pub entries: Vec<TraceEntry>,
}

impl SearchTrace {
    pub fn push(&mut self, entry: TraceEntry) {
        self.entries.push(entry);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn blossom_count(&self) -> usize {
        self.entries.iter().filter(|e| e.phase == Phase::Blossom).count()
    }

    /// One line per decision: `<phase> <u> <v> <minval>`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for SearchTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{} {} {} {}", e.phase.as_str(), e.u, e.v, e.minval)?;
        }
        Ok(())
    }
}
