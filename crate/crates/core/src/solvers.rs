//! Solution rules over the efficient periphery.
//!
//! The Nash rule maximizes u_x * u_y. The rivals: plain sum maximization,
//! the periphery median, and three equitably-rescaled procedures (sum,
//! closest-to-diagonal, arc-length midpoint), plus product maximization
//! over the continuous lottery hull. Every solver returns its full tie
//! set; ties are real in the discrete setting and are never hidden.
//!
//! All comparisons are exact except the arc-length rule, whose segment
//! lengths are irrational; that one solver works in floating point.

use crate::enumeration::{lottery_hull, Candidates, LotteryHull, Periphery};
use crate::model::OutcomePoint;
use crate::rational::{rat_to_f64, Rat};
use num::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Nash,
    Sum,
    Median,
    EqSum,
    EqDiagonal,
    EqArc,
    HullNash,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Nash,
        Algorithm::Sum,
        Algorithm::Median,
        Algorithm::EqSum,
        Algorithm::EqDiagonal,
        Algorithm::EqArc,
        Algorithm::HullNash,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Nash => "nash",
            Algorithm::Sum => "sum",
            Algorithm::Median => "median",
            Algorithm::EqSum => "eq-sum",
            Algorithm::EqDiagonal => "eq-diagonal",
            Algorithm::EqArc => "eq-arc",
            Algorithm::HullNash => "hull-nash",
        }
    }

    pub fn parse(s: &str) -> Option<Algorithm> {
        Algorithm::ALL.into_iter().find(|a| a.name() == s)
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A solver's chosen point. Exact except for arc-length interpolation,
/// whose coordinates are irrational in general.
#[derive(Debug, Clone, PartialEq)]
pub enum ChosenPoint {
    Exact(OutcomePoint),
    Approx { u_x: f64, u_y: f64 },
}

impl ChosenPoint {
    pub fn to_f64(&self) -> (f64, f64) {
        match self {
            ChosenPoint::Exact(p) => (rat_to_f64(&p.u_x), rat_to_f64(&p.u_y)),
            ChosenPoint::Approx { u_x, u_y } => (*u_x, *u_y),
        }
    }

    pub fn as_exact(&self) -> Option<&OutcomePoint> {
        match self {
            ChosenPoint::Exact(p) => Some(p),
            ChosenPoint::Approx { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ObjectiveValue {
    Exact(Rat),
    Approx(f64),
}

/// Outcome of one solver run. `chosen` is the exhaustive tie set in
/// lexicographic (u_x, u_y) order; the first entry is the headline
/// answer. `support` lists the exact periphery/anchor vertices behind the
/// choice: the tie points themselves, or the segment endpoints when the
/// choice is a lottery between two of them.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionReport {
    pub algorithm: Algorithm,
    pub chosen: Vec<ChosenPoint>,
    pub support: Vec<OutcomePoint>,
    pub objective: Option<ObjectiveValue>,
    pub is_lottery: bool,
}

impl SolutionReport {
    pub fn tie_count(&self) -> usize {
        self.chosen.len()
    }

    pub fn headline(&self) -> &ChosenPoint {
        &self.chosen[0]
    }

    fn from_ties(algorithm: Algorithm, ties: Vec<OutcomePoint>, objective: ObjectiveValue) -> Self {
        SolutionReport {
            algorithm,
            chosen: ties.iter().cloned().map(ChosenPoint::Exact).collect(),
            support: ties,
            objective: Some(objective),
            is_lottery: false,
        }
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Exhaustive argmax of `key` over the periphery, in periphery order.
fn argmax_by<F: Fn(&OutcomePoint) -> Rat>(per: &Periphery, key: F) -> (Vec<OutcomePoint>, Rat) {
    let mut best: Option<Rat> = None;
    let mut ties: Vec<OutcomePoint> = Vec::new();
    for p in &per.points {
        let v = key(p);
        match &best {
            Some(b) if v < *b => {}
            Some(b) if v == *b => ties.push(p.clone()),
            _ => {
                best = Some(v);
                ties = vec![p.clone()];
            }
        }
    }
    (ties, best.expect("non-empty periphery"))
}

fn argmin_by<F: Fn(&OutcomePoint) -> Rat>(per: &Periphery, key: F) -> (Vec<OutcomePoint>, Rat) {
    let (ties, best) = argmax_by(per, |p| -key(p));
    (ties, -best)
}

/// All periphery points maximizing u_x * u_y.
pub fn nash_solution(c: &Candidates) -> Option<SolutionReport> {
    if c.periphery.is_empty() {
        return None;
    }
    let (ties, best) = argmax_by(&c.periphery, |p| p.product());
    Some(SolutionReport::from_ties(Algorithm::Nash, ties, ObjectiveValue::Exact(best)))
}

/// All periphery points maximizing u_x + u_y.
pub fn sum_solution(c: &Candidates) -> Option<SolutionReport> {
    if c.periphery.is_empty() {
        return None;
    }
    let (ties, best) = argmax_by(&c.periphery, |p| p.sum());
    Some(SolutionReport::from_ties(Algorithm::Sum, ties, ObjectiveValue::Exact(best)))
}

/// The middle periphery point in u_x order; for an even count, the
/// coordinate midpoint of the two central points as a fair-coin lottery.
pub fn median_solution(c: &Candidates) -> Option<SolutionReport> {
    let pts = &c.periphery.points;
    if pts.is_empty() {
        return None;
    }
    let n = pts.len();
    if n % 2 == 1 {
        let mid = pts[(n - 1) / 2].clone();
        Some(SolutionReport {
            algorithm: Algorithm::Median,
            chosen: vec![ChosenPoint::Exact(mid.clone())],
            support: vec![mid],
            objective: None,
            is_lottery: false,
        })
    } else {
        let a = &pts[n / 2 - 1];
        let b = &pts[n / 2];
        let half: Rat = Rat::new(num::BigInt::one(), num::BigInt::from(2));
        let mid = OutcomePoint::new(
            (&a.u_x + &b.u_x) * &half,
            (&a.u_y + &b.u_y) * &half,
        );
        Some(SolutionReport {
            algorithm: Algorithm::Median,
            chosen: vec![ChosenPoint::Exact(mid)],
            support: vec![a.clone(), b.clone()],
            objective: None,
            is_lottery: true,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RescaleVariant {
    /// Anchors are the extreme u_x and u_y over the periphery plus its
    /// axis anchors: the curve's own endpoints.
    FirstQuadrant,
    /// Anchors are the axis-distance extremes of the whole point cloud.
    FourQuadrant,
}

/// Multiplicative factors that place both anchor extremes at distance 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquitableScale {
    pub factor_x: Rat,
    pub factor_y: Rat,
    pub variant: RescaleVariant,
}

impl EquitableScale {
    pub fn apply(&self, p: &OutcomePoint) -> OutcomePoint {
        OutcomePoint::new(&p.u_x * &self.factor_x, &p.u_y * &self.factor_y)
    }
}

/// Compute the equitable rescaling for a candidate set, plus the rescaled
/// periphery. `None` on an empty periphery.
pub fn equitable_rescale(
    c: &Candidates,
    variant: RescaleVariant,
) -> Option<(EquitableScale, Vec<OutcomePoint>)> {
    if c.periphery.is_empty() {
        return None;
    }
    let (r, s) = match variant {
        RescaleVariant::FirstQuadrant => {
            let mut r = c.periphery.max_u_x().unwrap().clone();
            let mut s = c.periphery.max_u_y().unwrap().clone();
            if let Some(a) = &c.anchors.x_max {
                if a.u_x > r {
                    r = a.u_x.clone();
                }
            }
            if let Some(a) = &c.anchors.y_max {
                if a.u_y > s {
                    s = a.u_y.clone();
                }
            }
            (r, s)
        }
        RescaleVariant::FourQuadrant => {
            (c.extent.max_abs_x.clone(), c.extent.max_abs_y.clone())
        }
    };
    // r, s > 0 is guaranteed by the non-empty periphery
    let scale = EquitableScale {
        factor_x: Rat::one() / r,
        factor_y: Rat::one() / s,
        variant,
    };
    let rescaled = c.periphery.points.iter().map(|p| scale.apply(p)).collect();
    Some((scale, rescaled))
}

/// Equitable rescaling, then sum maximization, reported in original
/// coordinates with all ties.
pub fn eq_sum_solution(c: &Candidates) -> Option<SolutionReport> {
    let (scale, _) = equitable_rescale(c, RescaleVariant::FirstQuadrant)?;
    let (ties, best) = argmax_by(&c.periphery, |p| scale.apply(p).sum());
    Some(SolutionReport::from_ties(Algorithm::EqSum, ties, ObjectiveValue::Exact(best)))
}

/// Equitable rescaling, then the point closest to the diagonal x = y,
/// measured by the exact |x' - y'| (the Euclidean distance to the
/// diagonal is this up to the constant sqrt(2)).
pub fn eq_diagonal_solution(c: &Candidates) -> Option<SolutionReport> {
    let (scale, _) = equitable_rescale(c, RescaleVariant::FirstQuadrant)?;
    let (ties, best) = argmin_by(&c.periphery, |p| {
        let r = scale.apply(p);
        (&r.u_x - &r.u_y).abs()
    });
    Some(SolutionReport::from_ties(Algorithm::EqDiagonal, ties, ObjectiveValue::Exact(best)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathVariant {
    /// Zigzag through adjacent periphery points (plus axis anchors).
    AdjacentChain,
    /// Walk the lottery hull instead.
    Hull,
}

/// Parameter tolerance for snapping the halfway point onto a vertex.
const ARC_SNAP_TOL: f64 = 1e-12;

/// Equitable rescaling, then the point halfway along the rescaled
/// polyline by Euclidean arc length. Falls inside a segment in general;
/// that interpolated point is a lottery between the segment's endpoints.
pub fn eq_arclength_solution(c: &Candidates, variant: PathVariant) -> Option<SolutionReport> {
    let (scale, _) = equitable_rescale(c, RescaleVariant::FirstQuadrant)?;
    let chain: Vec<OutcomePoint> = match variant {
        PathVariant::AdjacentChain => {
            // anchors join the zigzag only when they extend the curve
            // beyond the periphery's own extremes, as on the hull
            let mut chain = Vec::with_capacity(c.periphery.len() + 2);
            if let Some(a) = &c.anchors.y_max {
                if &a.u_y >= c.periphery.max_u_y().unwrap() {
                    chain.push(a.clone());
                }
            }
            chain.extend(c.periphery.points.iter().cloned());
            if let Some(a) = &c.anchors.x_max {
                if &a.u_x >= c.periphery.max_u_x().unwrap() {
                    chain.push(a.clone());
                }
            }
            chain
        }
        PathVariant::Hull => lottery_hull(&c.periphery, &c.anchors)?.vertices,
    };

    if chain.len() == 1 {
        let p = chain.into_iter().next().unwrap();
        return Some(SolutionReport {
            algorithm: Algorithm::EqArc,
            chosen: vec![ChosenPoint::Exact(p.clone())],
            support: vec![p],
            objective: Some(ObjectiveValue::Approx(0.0)),
            is_lottery: false,
        });
    }

    let rescaled: Vec<(f64, f64)> = chain
        .iter()
        .map(|p| {
            let r = scale.apply(p);
            (rat_to_f64(&r.u_x), rat_to_f64(&r.u_y))
        })
        .collect();
    let lengths: Vec<f64> = rescaled
        .windows(2)
        .map(|w| {
            let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            dx.hypot(dy)
        })
        .collect();
    let total: f64 = lengths.iter().sum();
    let half = total / 2.0;

    let mut cum = 0.0;
    let mut seg = lengths.len() - 1;
    let mut t = 1.0;
    for (i, len) in lengths.iter().enumerate() {
        if cum + len >= half || i == lengths.len() - 1 {
            seg = i;
            t = if *len > 0.0 { (half - cum) / len } else { 0.0 };
            break;
        }
        cum += len;
    }

    if t <= ARC_SNAP_TOL || t >= 1.0 - ARC_SNAP_TOL {
        let vertex = if t <= ARC_SNAP_TOL { chain[seg].clone() } else { chain[seg + 1].clone() };
        return Some(SolutionReport {
            algorithm: Algorithm::EqArc,
            chosen: vec![ChosenPoint::Exact(vertex.clone())],
            support: vec![vertex],
            objective: Some(ObjectiveValue::Approx(half)),
            is_lottery: false,
        });
    }

    // interpolate in original coordinates; rescaling is linear per axis,
    // so the same parameter applies
    let a = &chain[seg];
    let b = &chain[seg + 1];
    let (ax, ay) = (rat_to_f64(&a.u_x), rat_to_f64(&a.u_y));
    let (bx, by) = (rat_to_f64(&b.u_x), rat_to_f64(&b.u_y));
    Some(SolutionReport {
        algorithm: Algorithm::EqArc,
        chosen: vec![ChosenPoint::Approx {
            u_x: ax + t * (bx - ax),
            u_y: ay + t * (by - ay),
        }],
        support: vec![a.clone(), b.clone()],
        objective: Some(ObjectiveValue::Approx(half)),
        is_lottery: true,
    })
}

/// Maximize x*y over the whole hull: vertices plus segment interiors.
/// The hull is concave with strictly decreasing slopes and the product's
/// superlevel sets are strictly convex, so the maximizer is unique.
pub fn hull_nash_solution(c: &Candidates) -> Option<SolutionReport> {
    let hull = lottery_hull(&c.periphery, &c.anchors)?;
    hull_nash_on(&hull, &c.periphery)
}

pub fn hull_nash_on(hull: &LotteryHull, per: &Periphery) -> Option<SolutionReport> {
    let mut candidates: Vec<OutcomePoint> = hull.vertices.clone();
    for (a, b) in hull.segments() {
        let m = (&b.u_y - &a.u_y) / (&b.u_x - &a.u_x);
        if m.is_negative() {
            // y = m x + c maximizes x*y at x* = -c / 2m
            let intercept = &a.u_y - &m * &a.u_x;
            let x_star = -&intercept / (Rat::from_integer(2.into()) * &m);
            if x_star > a.u_x && x_star < b.u_x {
                let y_star = &m * &x_star + &intercept;
                candidates.push(OutcomePoint::new(x_star, y_star));
            }
        }
    }
    let best = candidates.iter().map(|p| p.product()).max()?;
    let mut winners: Vec<OutcomePoint> = candidates
        .into_iter()
        .filter(|p| p.product() == best)
        .collect();
    winners.sort_unstable();
    winners.dedup();
    debug_assert_eq!(winners.len(), 1, "hull product maximizer must be unique");
    let point = winners.into_iter().next().unwrap();

    let on_periphery = per.contains(&point);
    let support = if on_periphery || hull.vertices.contains(&point) {
        vec![point.clone()]
    } else {
        // interior of a segment: report the bracketing vertices
        let pos = hull.vertices.partition_point(|v| v.u_x < point.u_x);
        vec![hull.vertices[pos - 1].clone(), hull.vertices[pos].clone()]
    };
    Some(SolutionReport {
        algorithm: Algorithm::HullNash,
        chosen: vec![ChosenPoint::Exact(point.clone())],
        support,
        objective: Some(ObjectiveValue::Exact(best)),
        is_lottery: !on_periphery,
    })
}

/// Run one solver against a candidate set. `None` means no trade.
pub fn solve(c: &Candidates, algorithm: Algorithm, path: PathVariant) -> Option<SolutionReport> {
    match algorithm {
        Algorithm::Nash => nash_solution(c),
        Algorithm::Sum => sum_solution(c),
        Algorithm::Median => median_solution(c),
        Algorithm::EqSum => eq_sum_solution(c),
        Algorithm::EqDiagonal => eq_diagonal_solution(c),
        Algorithm::EqArc => eq_arclength_solution(c, path),
        Algorithm::HullNash => hull_nash_solution(c),
    }
}

/// Every solver in the fixed reporting order.
pub fn solve_all(c: &Candidates, path: PathVariant) -> Vec<(Algorithm, Option<SolutionReport>)> {
    Algorithm::ALL
        .into_iter()
        .map(|alg| (alg, solve(c, alg, path)))
        .collect()
}

/// One row of the constant-sum product table.
#[derive(Debug, Clone, PartialEq)]
pub struct GravityRow {
    pub m1: Rat,
    pub m2: Rat,
    pub product: Rat,
    pub force: Rat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GravityTable {
    pub rows: Vec<GravityRow>,
    /// Indices of the rows attaining the maximum product.
    pub argmax: Vec<usize>,
}

/// Split a fixed total `m1 + m2 = total` on a grid and tabulate the
/// product and the implied two-body attraction g*m1*m2/distance^2: the
/// most even split maximizes both.
pub fn constant_sum_product_table(
    total: &Rat,
    step: &Rat,
    g_constant: &Rat,
    distance: &Rat,
) -> Result<GravityTable, SolveError> {
    if !total.is_positive() {
        return Err(SolveError::InvalidParameter("total must be positive".into()));
    }
    if !step.is_positive() {
        return Err(SolveError::InvalidParameter("step must be positive".into()));
    }
    if !g_constant.is_positive() || !distance.is_positive() {
        return Err(SolveError::InvalidParameter(
            "g constant and distance must be positive".into(),
        ));
    }
    let steps = total / step;
    if !steps.is_integer() {
        return Err(SolveError::InvalidParameter(format!(
            "step {} does not divide total {}",
            step, total
        )));
    }
    let count = steps
        .to_integer()
        .try_into()
        .map_err(|_| SolveError::InvalidParameter("too many rows".into()))?;
    let force_scale = g_constant / (distance * distance);
    let mut rows = Vec::with_capacity(count);
    let mut best = Rat::zero();
    for i in 0..=count {
        let m1 = step * Rat::from_integer(num::BigInt::from(i));
        let m2 = total - &m1;
        let product = &m1 * &m2;
        if product > best {
            best = product.clone();
        }
        let force = &product * &force_scale;
        rows.push(GravityRow { m1, m2, product, force });
    }
    let argmax = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.product == best)
        .map(|(i, _)| i)
        .collect();
    Ok(GravityTable { rows, argmax })
}
