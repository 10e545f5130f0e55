//! Naive reference implementations used as oracles.
//!
//! Everything here is written from the definitions with no shared code
//! paths into the main crate's enumeration/periphery/solver machinery:
//! direct subset recursion, quadratic-time dominance filtering, and
//! linear scans. Slow on purpose, trusted because it is simple.

// each test target compiles its own copy and uses a different subset
#![allow(dead_code)]

use barter_core::model::{Exchange, Instance, OutcomePoint, PlayerId};
use barter_core::rational::{rat_to_f64, Rat};
use num::{One, Signed, Zero};

/// Every (point, exchange) pair by direct evaluation: walk the items,
/// branching on "stays" / "moves", summing as we go.
pub fn naive_outcomes(inst: &Instance) -> Vec<(OutcomePoint, Exchange)> {
    let mut out = Vec::new();
    fn recurse(
        inst: &Instance,
        index: usize,
        ex: Exchange,
        u_x: Rat,
        u_y: Rat,
        out: &mut Vec<(OutcomePoint, Exchange)>,
    ) {
        if index == inst.items().len() {
            out.push((OutcomePoint::new(u_x, u_y), ex));
            return;
        }
        recurse(inst, index + 1, ex, u_x.clone(), u_y.clone(), out);
        let item = &inst.items()[index];
        let bit = 1u64 << index;
        match item.owner {
            PlayerId::X => recurse(
                inst,
                index + 1,
                Exchange { give_x: ex.give_x | bit, give_y: ex.give_y },
                u_x - &item.value_to_x,
                u_y + &item.value_to_y,
                out,
            ),
            PlayerId::Y => recurse(
                inst,
                index + 1,
                Exchange { give_x: ex.give_x, give_y: ex.give_y | bit },
                u_x + &item.value_to_x,
                u_y - &item.value_to_y,
                out,
            ),
        }
    }
    recurse(inst, 0, Exchange::NULL, Rat::zero(), Rat::zero(), &mut out);
    out
}

/// Distinct points, sorted.
pub fn naive_distinct_points(inst: &Instance) -> Vec<OutcomePoint> {
    let mut points: Vec<OutcomePoint> = naive_outcomes(inst).into_iter().map(|(p, _)| p).collect();
    points.sort();
    points.dedup();
    points
}

fn dominates(a: &OutcomePoint, b: &OutcomePoint) -> bool {
    a.u_x >= b.u_x && a.u_y >= b.u_y && (a.u_x > b.u_x || a.u_y > b.u_y)
}

/// Quadratic-time periphery: acceptable points no other point dominates.
pub fn naive_periphery(points: &[OutcomePoint]) -> Vec<OutcomePoint> {
    let mut unique: Vec<OutcomePoint> = points.to_vec();
    unique.sort();
    unique.dedup();
    let mut result: Vec<OutcomePoint> = unique
        .iter()
        .filter(|p| p.is_acceptable())
        .filter(|p| !unique.iter().any(|q| dominates(q, p)))
        .cloned()
        .collect();
    result.sort();
    result
}

pub fn naive_axis_anchors(points: &[OutcomePoint]) -> (Option<OutcomePoint>, Option<OutcomePoint>) {
    let x_max = points
        .iter()
        .filter(|p| p.u_y.is_zero() && p.u_x.is_positive())
        .max_by(|a, b| a.u_x.cmp(&b.u_x))
        .cloned();
    let y_max = points
        .iter()
        .filter(|p| p.u_x.is_zero() && p.u_y.is_positive())
        .max_by(|a, b| a.u_y.cmp(&b.u_y))
        .cloned();
    (x_max, y_max)
}

/// Argmax tie set by plain linear scan.
pub fn naive_argmax<F: Fn(&OutcomePoint) -> Rat>(per: &[OutcomePoint], key: F) -> Vec<OutcomePoint> {
    let best = per.iter().map(&key).max();
    match best {
        None => Vec::new(),
        Some(best) => per.iter().filter(|p| key(p) == best).cloned().collect(),
    }
}

pub fn naive_rescale_factors(per: &[OutcomePoint], anchors: &(Option<OutcomePoint>, Option<OutcomePoint>)) -> (Rat, Rat) {
    let mut r = per.iter().map(|p| p.u_x.clone()).max().unwrap();
    let mut s = per.iter().map(|p| p.u_y.clone()).max().unwrap();
    if let Some(a) = &anchors.0 {
        if a.u_x > r {
            r = a.u_x.clone();
        }
    }
    if let Some(a) = &anchors.1 {
        if a.u_y > s {
            s = a.u_y.clone();
        }
    }
    (Rat::one() / r, Rat::one() / s)
}

/// Median by the definition: sort by u_x, take the middle (odd) or the
/// midpoint of the two central points (even).
pub enum NaiveMedian {
    Point(OutcomePoint),
    Midpoint(OutcomePoint, OutcomePoint, OutcomePoint),
}

pub fn naive_median(per: &[OutcomePoint]) -> Option<NaiveMedian> {
    let mut sorted = per.to_vec();
    sorted.sort_by(|a, b| a.u_x.cmp(&b.u_x));
    let n = sorted.len();
    if n == 0 {
        return None;
    }
    if n % 2 == 1 {
        Some(NaiveMedian::Point(sorted[(n - 1) / 2].clone()))
    } else {
        let a = sorted[n / 2 - 1].clone();
        let b = sorted[n / 2].clone();
        let two = Rat::from_integer(2.into());
        let mid = OutcomePoint::new((&a.u_x + &b.u_x) / &two, (&a.u_y + &b.u_y) / &two);
        Some(NaiveMedian::Midpoint(a, b, mid))
    }
}

/// Cubic-time upper hull: a pair of points is a hull edge iff every
/// other point lies on or below its line and the edge is x-monotone
/// with nothing above it.
pub fn naive_upper_hull(points: &[OutcomePoint]) -> Vec<OutcomePoint> {
    let mut pts: Vec<OutcomePoint> = points.to_vec();
    pts.sort();
    pts.dedup();
    // keep only the top point per u_x
    let mut tops: Vec<OutcomePoint> = Vec::new();
    for p in pts {
        match tops.last() {
            Some(last) if last.u_x == p.u_x => *tops.last_mut().unwrap() = p,
            _ => tops.push(p),
        }
    }
    if tops.len() <= 1 {
        return tops;
    }
    // a point is a hull vertex iff it is not strictly below any segment
    // between two other points
    let mut vertices: Vec<OutcomePoint> = Vec::new();
    'outer: for (i, p) in tops.iter().enumerate() {
        for a in &tops {
            for b in &tops {
                if a.u_x < p.u_x && p.u_x < b.u_x {
                    // height of the chord (a, b) at p.u_x; at or above p
                    // means p is interior (collinear points included)
                    let t = (&p.u_x - &a.u_x) / (&b.u_x - &a.u_x);
                    let h = &a.u_y + &t * (&b.u_y - &a.u_y);
                    if h >= p.u_y {
                        continue 'outer;
                    }
                }
            }
        }
        vertices.push(tops[i].clone());
    }
    vertices
}

/// Product maximization over a hull polyline, by definition: every
/// vertex, plus the interior critical point of each downhill segment.
pub fn naive_hull_max_product(vertices: &[OutcomePoint]) -> Option<(OutcomePoint, Rat)> {
    let mut best: Option<(OutcomePoint, Rat)> = None;
    let mut consider = |p: OutcomePoint| {
        let v = p.product();
        if best.as_ref().map_or(true, |(_, b)| v > *b) {
            best = Some((p, v));
        }
    };
    for v in vertices {
        consider(v.clone());
    }
    for w in vertices.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let m = (&b.u_y - &a.u_y) / (&b.u_x - &a.u_x);
        if m.is_negative() {
            let c = &a.u_y - &m * &a.u_x;
            let x = -&c / (&m * Rat::from_integer(2.into()));
            if x > a.u_x && x < b.u_x {
                let y = &m * &x + &c;
                consider(OutcomePoint::new(x, y));
            }
        }
    }
    best
}

/// Arc position of a point lying on a polyline, measured by dense
/// sampling: each segment is subdivided into `samples` pieces and the
/// length accumulated piecewise.
pub fn sampled_arc_position(
    chain: &[(f64, f64)],
    target: (f64, f64),
    samples: usize,
) -> (f64, f64) {
    let sampled_len = |a: (f64, f64), b: (f64, f64)| -> f64 {
        let mut total = 0.0;
        let mut prev = a;
        for k in 1..=samples {
            let t = k as f64 / samples as f64;
            let next = (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1));
            total += (next.0 - prev.0).hypot(next.1 - prev.1);
            prev = next;
        }
        total
    };
    let mut total = 0.0;
    for w in chain.windows(2) {
        total += sampled_len(w[0], w[1]);
    }
    // locate the segment containing the target
    let mut before = 0.0;
    for w in chain.windows(2) {
        let (a, b) = (w[0], w[1]);
        let seg = sampled_len(a, b);
        let (minx, maxx) = if a.0 <= b.0 { (a.0, b.0) } else { (b.0, a.0) };
        let on_this = target.0 >= minx - 1e-9 && target.0 <= maxx + 1e-9 && {
            // distance from the target to the segment's line
            let (dx, dy) = (b.0 - a.0, b.1 - a.1);
            let len = dx.hypot(dy);
            let dist = ((target.0 - a.0) * dy - (target.1 - a.1) * dx).abs() / len;
            dist < 1e-6
        };
        if on_this {
            return (before + sampled_len(a, target), total);
        }
        before += seg;
    }
    (f64::NAN, total)
}

/// Deterministic pseudo-random suite of small instances mixing item
/// counts, grids, and zero values.
pub fn seeded_suite(base_seed: u64, count: usize, max_side: usize) -> Vec<Instance> {
    use barter_core::lab::{generate, Condition, GeneratorConfig};
    use barter_core::rational::rat_int;
    (0..count)
        .map(|i| {
            let seed = base_seed.wrapping_add(i as u64);
            let p = (seed % (max_side as u64 + 1)) as usize;
            let q = ((seed / 7) % (max_side as u64 + 1)) as usize;
            let cfg = GeneratorConfig {
                seed,
                p,
                q,
                value_min: rat_int(0),
                value_max: rat_int(if i % 3 == 0 { 6 } else { 12 }),
                value_grid: if i % 4 == 0 { 2 } else { 1 },
                condition: Condition::Unconstrained,
            };
            generate(&cfg).unwrap()
        })
        .collect()
}

pub fn to_f64_pair(p: &OutcomePoint) -> (f64, f64) {
    (rat_to_f64(&p.u_x), rat_to_f64(&p.u_y))
}
