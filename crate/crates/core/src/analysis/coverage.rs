//! Witness net over voxel centers: every center of an `m³` grid gets a
//! pair of depth-`N` curve points whose midpoint is close to it.

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{witness_bound_sq, witness_pair, CurveError};
use crate::exact::{rat, rat_to_f64, Rat};
use crate::param::Address;
use crate::pattern::PatternTable;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageReport {
    pub depth: usize,
    pub grid: usize,
    pub centers: usize,
    /// Exact worst squared deviation, as a reduced fraction.
    pub max_deviation_sq: String,
    pub max_deviation: f64,
    /// `2√3·3^-N`.
    pub bound: f64,
    /// Centers whose witness misses the bound, compared exactly.
    pub failures: usize,
    pub worst_center: [usize; 3],
    pub worst_addresses: (Address, Address),
}

impl CoverageReport {
    pub fn certified(&self) -> bool {
        self.failures == 0
    }
}

/// Center `((2i+1)/2m, …)` of cell `(i, j, k)`.
pub fn voxel_center(c: [usize; 3], m: usize) -> [Rat; 3] {
    c.map(|i| rat(2 * i as i64 + 1, 2 * m as i64))
}

struct Worst {
    dev: Rat,
    center: [usize; 3],
    addresses: (Address, Address),
    failures: usize,
}

impl Worst {
    fn merge(self, other: Worst) -> Worst {
        let failures = self.failures + other.failures;
        // ties resolve to the smaller center so the result is order-free
        let keep =
            if other.dev > self.dev || (other.dev == self.dev && other.center < self.center) { other } else { self };
        Worst { failures, ..keep }
    }
}

pub fn coverage_certificate(table: &PatternTable, depth: usize, m: usize) -> Result<CoverageReport, CurveError> {
    if m == 0 {
        return Err(CurveError::BadSampling);
    }
    let bound_sq = witness_bound_sq(depth);
    let cells: Vec<[usize; 3]> = (0..m * m * m).map(|i| [i / (m * m), (i / m) % m, i % m]).collect();
    let worst = cells
        .par_iter()
        .map(|&c| {
            let w = witness_pair(table, &voxel_center(c, m), depth)?;
            let failures = usize::from(w.deviation_sq > bound_sq);
            Ok::<_, CurveError>(Worst { dev: w.deviation_sq, center: c, addresses: w.addresses, failures })
        })
        .try_reduce(
            || Worst {
                dev: -Rat::from_integer(1.into()),
                center: [usize::MAX; 3],
                addresses: Default::default(),
                failures: 0,
            },
            |a, b| Ok(a.merge(b)),
        )?;
    // cells is non-empty, so the identity's negative deviation never survives
    let dev = worst.dev;
    Ok(CoverageReport {
        depth,
        grid: m,
        centers: cells.len(),
        max_deviation: rat_to_f64(&dev).sqrt(),
        max_deviation_sq: dev.to_string(),
        bound: rat_to_f64(&bound_sq).sqrt(),
        failures: worst.failures,
        worst_center: worst.center,
        worst_addresses: worst.addresses,
    })
}
