//! Shared inputs for the benchmarks.

use cantorloop::analysis::{CurveSpec, Path};
use cantorloop::pattern::{pattern_closure, PatternTable, SearchOptions};

/// The default pattern table; the search is deterministic.
pub fn default_table() -> PatternTable {
    pattern_closure(SearchOptions::default()).expect("default search succeeds")
}

/// Closed unit circle sampled at `n` equally spaced points.
pub fn circle_path(n: usize) -> Path {
    let c = CurveSpec::Circle.sample(n).expect("circle samples");
    Path::closed(c.points).expect("circle is not degenerate")
}
