//! Shared fixtures for unit tests: the worked tables and a few
//! constructed instances with known structure.

use crate::model::{Instance, OutcomePoint};
use crate::rational::{rat, rat_int};

/// Every item valued strictly higher by its owner; no trade is possible.
pub fn dominance_table() -> Instance {
    Instance::from_json(include_str!("../tests/data/dominance_table.json")).unwrap()
}

/// X values all of Y's goods at 11 in total, below the 12 X puts on the
/// least of X's own goods; no trade is possible.
pub fn compensation_table() -> Instance {
    Instance::from_json(include_str!("../tests/data/compensation_table.json")).unwrap()
}

/// Identical valuations; every outcome sits on u_x + u_y = 0.
pub fn identical_30_34() -> Instance {
    Instance::from_json(include_str!("../tests/data/identical_30_34.json")).unwrap()
}

/// Four-point periphery (1,16),(2,15),(4,11),(39,2); the product maximum
/// (39,2) sits far from the median, like the worked 13-row table.
pub fn skewed_periphery() -> Instance {
    Instance::from_json(include_str!("../tests/data/skewed_periphery.json")).unwrap()
}

/// The optimum is a two-for-one trade; no single one-for-one swap is
/// profitable, so the greedy baseline stalls at the origin.
pub fn greedy_trap() -> Instance {
    Instance::from_json(include_str!("../tests/data/greedy_trap.json")).unwrap()
}

/// Empty periphery but none of the three no-trade detectors fires: the
/// sufficient conditions are not necessary.
pub fn no_certificate() -> Instance {
    Instance::from_json(include_str!("../tests/data/no_certificate.json")).unwrap()
}

/// The 13-row worked table of outcome points, axis endpoints included.
pub fn table_points() -> Vec<OutcomePoint> {
    [
        (rat_int(0), rat_int(32)),
        (rat_int(1), rat(63, 2)),
        (rat_int(3), rat_int(31)),
        (rat_int(5), rat(61, 2)),
        (rat_int(6), rat_int(30)),
        (rat_int(7), rat(59, 2)),
        (rat_int(9), rat_int(28)),
        (rat_int(11), rat_int(27)),
        (rat_int(16), rat_int(24)),
        (rat_int(21), rat_int(21)),
        (rat_int(27), rat_int(17)),
        (rat_int(34), rat_int(9)),
        (rat_int(39), rat_int(0)),
    ]
    .into_iter()
    .map(|(x, y)| OutcomePoint::new(x, y))
    .collect()
}
