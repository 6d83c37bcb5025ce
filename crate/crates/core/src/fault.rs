//! Deliberate defects for the implicit tower. Each verifier has at least one
//! fault it must catch, which guards against checks that pass vacuously.

use num_bigint::BigUint;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fault {
    /// Decoding from `level + 1` to `level` reads first-path positions one
    /// slot too far.
    SegmentOffByOne { level: usize },
    /// Image words omit the hub loop. `None` applies to every level.
    NoLoopPadding { level: Option<usize> },
    /// Image words repeat the middle block once instead of twice.
    SingleRepeat { level: Option<usize> },
    /// Image words omit every copy of the second path.
    SkipConnector { level: usize },
    /// The covering walk is cut to at most `len` edges.
    TruncatedWalk { level: usize, len: BigUint },
    /// Every address at `level + 1` decodes to the hub.
    CollapseToHub { level: usize },
    /// Invariance checking also shifts the edge vertices of `q`.
    IgnoreInteriority,
}

impl Fault {
    pub(crate) fn hits(scope: Option<usize>, level: usize) -> bool {
        scope.map_or(true, |l| l == level)
    }
}
