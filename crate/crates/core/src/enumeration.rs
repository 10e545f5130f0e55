//! Exhaustive enumeration of the 2^(p+q) exchange space.
//!
//! Every subset pair is evaluated to an exact outcome point; exchanges
//! with identical coordinates collapse onto one point. The efficient
//! periphery (acceptable, Pareto-nondominated points) and the convex
//! lottery hull are extracted from the collapsed cloud.
//!
//! Enumeration is a pure map-reduce over subset indices: the outer-side
//! mask range is partitioned across workers and partial clouds are merged
//! by exact-coordinate union, so the result is identical for any worker
//! count.

use crate::model::{Exchange, Instance, OutcomePoint};
use crate::rational::{format_rat, Rat};
use num::bigint::BigInt;
use num::{Signed, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;
use thiserror::Error;

/// Default cap on p+q: 2^20 exchanges is around a million evaluations.
pub const DEFAULT_LIMIT: usize = 20;

#[derive(Debug, Clone)]
pub struct EnumOptions {
    pub limit: usize,
    pub force: bool,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { limit: DEFAULT_LIMIT, force: false }
    }
}

#[derive(Debug, Error)]
pub enum EnumError {
    #[error("{items} items give {exchanges} possible exchanges, over the limit of {limit} items; use force to enumerate anyway")]
    LimitExceeded { items: usize, exchanges: u128, limit: usize },
}

/// All distinct outcome points of an instance, each with the exchanges
/// that land on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCloud {
    points: BTreeMap<OutcomePoint, Vec<Exchange>>,
    total_exchanges: u128,
}

impl PointCloud {
    pub fn iter(&self) -> impl Iterator<Item = (&OutcomePoint, &[Exchange])> {
        self.points.iter().map(|(p, v)| (p, v.as_slice()))
    }

    pub fn distinct_count(&self) -> usize {
        self.points.len()
    }

    pub fn total_exchanges(&self) -> u128 {
        self.total_exchanges
    }

    pub fn exchanges_at(&self, point: &OutcomePoint) -> &[Exchange] {
        self.points.get(point).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn contains(&self, point: &OutcomePoint) -> bool {
        self.points.contains_key(point)
    }

    pub fn acceptable_point_count(&self) -> usize {
        self.points.keys().filter(|p| p.is_acceptable()).count()
    }

    pub fn acceptable_exchange_count(&self) -> u128 {
        self.points
            .iter()
            .filter(|(p, _)| p.is_acceptable())
            .map(|(_, v)| v.len() as u128)
            .sum()
    }
}

/// Per-subset sums of (value_to_x, value_to_y), indexed by ordinal mask.
fn subset_sums(inst: &Instance, indices: &[usize]) -> Vec<(Rat, Rat)> {
    let mut table = Vec::with_capacity(1usize << indices.len());
    table.push((Rat::zero(), Rat::zero()));
    for mask in 1..(1u64 << indices.len()) {
        let low = mask.trailing_zeros() as usize;
        let (px, py) = &table[(mask & (mask - 1)) as usize];
        let item = &inst.items()[indices[low]];
        table.push((px + &item.value_to_x, py + &item.value_to_y));
    }
    table
}

fn sums_for_mask(inst: &Instance, indices: &[usize], mask: u64) -> (Rat, Rat) {
    let mut x = Rat::zero();
    let mut y = Rat::zero();
    let mut bits = mask;
    while bits != 0 {
        let ord = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let item = &inst.items()[indices[ord]];
        x += &item.value_to_x;
        y += &item.value_to_y;
    }
    (x, y)
}

/// Scatter an ordinal-position mask to a canonical-order item mask.
fn scatter(indices: &[usize], ordinal_mask: u64) -> u64 {
    let mut global = 0u64;
    let mut bits = ordinal_mask;
    while bits != 0 {
        let ord = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        global |= 1u64 << indices[ord];
    }
    global
}

/// Enumerate every exchange (including the null exchange) and collapse
/// identical outcome points.
pub fn enumerate_cloud(inst: &Instance, opts: &EnumOptions) -> Result<PointCloud, EnumError> {
    let n = inst.items().len();
    if !opts.force && n > opts.limit {
        return Err(EnumError::LimitExceeded {
            items: n,
            exchanges: 1u128 << n,
            limit: opts.limit,
        });
    }

    // The smaller side gets a full subset-sum table; the larger side is
    // partitioned across workers and summed per mask.
    let (outer_idx, inner_idx, outer_is_x) = if inst.p() >= inst.q() {
        (inst.x_indices(), inst.y_indices(), true)
    } else {
        (inst.y_indices(), inst.x_indices(), false)
    };
    let inner_table = subset_sums(inst, inner_idx);
    let outer_count: u64 = 1 << outer_idx.len();
    let chunk_size: u64 = 4096;
    let chunks: Vec<u64> = (0..outer_count).step_by(chunk_size as usize).collect();

    let partials: Vec<BTreeMap<OutcomePoint, Vec<Exchange>>> = chunks
        .into_par_iter()
        .map(|start| {
            let end = (start + chunk_size).min(outer_count);
            let mut local: BTreeMap<OutcomePoint, Vec<Exchange>> = BTreeMap::new();
            for outer_mask in start..end {
                let (ox, oy) = sums_for_mask(inst, outer_idx, outer_mask);
                let outer_global = scatter(outer_idx, outer_mask);
                for (inner_mask, (ix, iy)) in inner_table.iter().enumerate() {
                    let (u_x, u_y, ex) = if outer_is_x {
                        // outer gives X's items, inner gives Y's items
                        (
                            ix - &ox,
                            &oy - iy,
                            Exchange {
                                give_x: outer_global,
                                give_y: scatter(inner_idx, inner_mask as u64),
                            },
                        )
                    } else {
                        (
                            &ox - ix,
                            iy - &oy,
                            Exchange {
                                give_x: scatter(inner_idx, inner_mask as u64),
                                give_y: outer_global,
                            },
                        )
                    };
                    local.entry(OutcomePoint::new(u_x, u_y)).or_default().push(ex);
                }
            }
            local
        })
        .collect();

    let mut points: BTreeMap<OutcomePoint, Vec<Exchange>> = BTreeMap::new();
    for partial in partials {
        for (point, mut exchanges) in partial {
            points.entry(point).or_default().append(&mut exchanges);
        }
    }
    // Exchange lists are sorted so the merged cloud does not depend on
    // chunking or worker scheduling.
    for exchanges in points.values_mut() {
        exchanges.sort_unstable();
    }

    let total = 1u128 << n;
    debug_assert_eq!(points.values().map(|v| v.len() as u128).sum::<u128>(), total);
    Ok(PointCloud { points, total_exchanges: total })
}

/// Distinct points divided by 2^(p+q).
pub fn collapse_ratio(cloud: &PointCloud) -> Rat {
    Rat::new(
        BigInt::from(cloud.distinct_count()),
        BigInt::from(cloud.total_exchanges()),
    )
}

/// Acceptable, Pareto-nondominated points sorted by strictly increasing
/// u_x (hence strictly decreasing u_y). May be empty.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Periphery {
    pub points: Vec<OutcomePoint>,
}

impl Periphery {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn contains(&self, point: &OutcomePoint) -> bool {
        self.points.iter().any(|p| p == point)
    }

    pub fn max_u_x(&self) -> Option<&Rat> {
        self.points.last().map(|p| &p.u_x)
    }

    pub fn max_u_y(&self) -> Option<&Rat> {
        self.points.first().map(|p| &p.u_y)
    }
}

/// Nondominated filter over sorted, deduplicated points. Dominance is
/// weak with at least one strict coordinate.
fn pareto_nondominated(sorted: &[OutcomePoint]) -> Vec<OutcomePoint> {
    let mut kept: Vec<OutcomePoint> = Vec::new();
    let mut best_y: Option<Rat> = None;
    let mut current_x: Option<&Rat> = None;
    for pt in sorted.iter().rev() {
        if current_x == Some(&pt.u_x) {
            continue; // a higher-u_y point with the same u_x dominates it
        }
        current_x = Some(&pt.u_x);
        if best_y.as_ref().map_or(true, |by| pt.u_y > *by) {
            kept.push(pt.clone());
            best_y = Some(pt.u_y.clone());
        }
    }
    kept.reverse();
    kept
}

/// Extract the efficient periphery from a cloud.
pub fn periphery(cloud: &PointCloud) -> Periphery {
    let acceptable: Vec<OutcomePoint> = cloud
        .points
        .keys()
        .filter(|p| p.is_acceptable())
        .cloned()
        .collect(); // BTreeMap keys are already sorted and distinct
    Periphery { points: pareto_nondominated(&acceptable) }
}

/// The maximal points with exactly one zero coordinate, used as hull and
/// rescaling anchors: (r, 0) with the largest r and (0, s) with the
/// largest s, when such points exist.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AxisAnchors {
    pub x_max: Option<OutcomePoint>,
    pub y_max: Option<OutcomePoint>,
}

fn axis_anchors_of<'a>(points: impl Iterator<Item = &'a OutcomePoint>) -> AxisAnchors {
    let mut anchors = AxisAnchors::default();
    for p in points {
        if p.u_y.is_zero() && p.u_x.is_positive() {
            if anchors.x_max.as_ref().map_or(true, |a| p.u_x > a.u_x) {
                anchors.x_max = Some(p.clone());
            }
        } else if p.u_x.is_zero() && p.u_y.is_positive() {
            if anchors.y_max.as_ref().map_or(true, |a| p.u_y > a.u_y) {
                anchors.y_max = Some(p.clone());
            }
        }
    }
    anchors
}

pub fn axis_anchors(cloud: &PointCloud) -> AxisAnchors {
    axis_anchors_of(cloud.points.keys())
}

/// Axis-distance extremes of the full point set, for the four-quadrant
/// equitable-rescaling variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CloudExtent {
    pub max_abs_x: Rat,
    pub max_abs_y: Rat,
}

fn extent_of<'a>(points: impl Iterator<Item = &'a OutcomePoint>) -> CloudExtent {
    let mut max_abs_x = Rat::zero();
    let mut max_abs_y = Rat::zero();
    for p in points {
        let ax = p.u_x.abs();
        let ay = p.u_y.abs();
        if ax > max_abs_x {
            max_abs_x = ax;
        }
        if ay > max_abs_y {
            max_abs_y = ay;
        }
    }
    CloudExtent { max_abs_x, max_abs_y }
}

/// Everything the solvers consume: the periphery, the axis anchors, and
/// the cloud extent. Built either from a full enumeration or from a raw
/// point list (for table-level inputs with no underlying instance).
#[derive(Debug, Clone)]
pub struct Candidates {
    pub periphery: Periphery,
    pub anchors: AxisAnchors,
    pub extent: CloudExtent,
}

impl Candidates {
    pub fn from_cloud(cloud: &PointCloud) -> Candidates {
        Candidates {
            periphery: periphery(cloud),
            anchors: axis_anchors(cloud),
            extent: extent_of(cloud.points.keys()),
        }
    }

    pub fn from_points(points: &[OutcomePoint]) -> Candidates {
        let mut sorted: Vec<OutcomePoint> = points.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let acceptable: Vec<OutcomePoint> =
            sorted.iter().filter(|p| p.is_acceptable()).cloned().collect();
        Candidates {
            periphery: Periphery { points: pareto_nondominated(&acceptable) },
            anchors: axis_anchors_of(sorted.iter()),
            extent: extent_of(sorted.iter()),
        }
    }
}

/// Upper-right convex hull of the periphery plus its axis anchors.
/// Segments between consecutive vertices are the biased-coin lotteries;
/// collinear interior points lie on segments but are not vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LotteryHull {
    pub vertices: Vec<OutcomePoint>,
}

fn cross(o: &OutcomePoint, a: &OutcomePoint, b: &OutcomePoint) -> Rat {
    (&a.u_x - &o.u_x) * (&b.u_y - &o.u_y) - (&a.u_y - &o.u_y) * (&b.u_x - &o.u_x)
}

/// Monotone-chain upper hull. Returns `None` on an empty periphery.
///
/// An axis anchor joins the hull only when it extends the curve beyond
/// the periphery's own extremes ((r, 0) with r at least the largest
/// periphery u_x, and symmetrically for (0, s)); an anchor tucked inside
/// the periphery's span would hang below points the hull must cover.
pub fn lottery_hull(per: &Periphery, anchors: &AxisAnchors) -> Option<LotteryHull> {
    if per.is_empty() {
        return None;
    }
    let mut pts: Vec<OutcomePoint> = per.points.clone();
    if let Some(a) = &anchors.y_max {
        if &a.u_y >= per.max_u_y().unwrap() {
            pts.push(a.clone());
        }
    }
    if let Some(a) = &anchors.x_max {
        if &a.u_x >= per.max_u_x().unwrap() {
            pts.push(a.clone());
        }
    }
    pts.sort_unstable();
    pts.dedup();
    // Only the highest point at each u_x can be on the upper hull.
    let mut filtered: Vec<OutcomePoint> = Vec::with_capacity(pts.len());
    for pt in pts {
        match filtered.last() {
            Some(last) if last.u_x == pt.u_x => {
                *filtered.last_mut().unwrap() = pt; // ascending sort: later means larger u_y
            }
            _ => filtered.push(pt),
        }
    }
    let mut hull: Vec<OutcomePoint> = Vec::with_capacity(filtered.len());
    for pt in filtered {
        while hull.len() >= 2
            && !cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &pt).is_negative()
        {
            hull.pop();
        }
        hull.push(pt);
    }
    Some(LotteryHull { vertices: hull })
}

impl LotteryHull {
    /// Height of the hull polyline at `x`, exact; `None` outside its span.
    pub fn height_at(&self, x: &Rat) -> Option<Rat> {
        let first = self.vertices.first()?;
        let last = self.vertices.last()?;
        if x < &first.u_x || x > &last.u_x {
            return None;
        }
        let pos = self.vertices.partition_point(|v| &v.u_x <= x);
        if pos > 0 && &self.vertices[pos - 1].u_x == x {
            return Some(self.vertices[pos - 1].u_y.clone());
        }
        let a = &self.vertices[pos - 1];
        let b = &self.vertices[pos];
        let t = (x - &a.u_x) / (&b.u_x - &a.u_x);
        Some(&a.u_y + t * (&b.u_y - &a.u_y))
    }

    pub fn segments(&self) -> impl Iterator<Item = (&OutcomePoint, &OutcomePoint)> {
        self.vertices.windows(2).map(|w| (&w[0], &w[1]))
    }
}

/// CSV dump of the cloud: one row per distinct point.
pub fn cloud_csv(cloud: &PointCloud, per: &Periphery) -> String {
    let on_per: std::collections::BTreeSet<&OutcomePoint> = per.points.iter().collect();
    let mut out = String::from("u_x,u_y,count,acceptable,on_periphery\n");
    for (point, exchanges) in cloud.iter() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            format_rat(&point.u_x),
            format_rat(&point.u_y),
            exchanges.len(),
            point.is_acceptable(),
            on_per.contains(point),
        ));
    }
    out
}
