//! Seeded instance generation and experiments.
//!
//! The generator contract is fixed so other implementations can
//! reproduce instances byte for byte: a ChaCha8 stream seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`, drawing values on the grid
//! `value_min + k / value_grid` with `k` uniform in
//! `0..=floor((value_max - value_min) * value_grid)`. Draw order is item
//! by item in canonical order (X items first), `value_to_x` before
//! `value_to_y`. Conditioned generation draws differently per condition,
//! as documented on [`generate`], and restarts the whole instance from
//! the same stream when a constraint round fails; after 10,000 failed
//! rounds it gives up.

use crate::enumeration::{collapse_ratio, enumerate_cloud, Candidates, EnumOptions};
use crate::invariance::{apply_scale, ScaleTransform};
use crate::model::{Exchange, Instance, Item, OutcomePoint, PlayerId};
use crate::notrade::{detect_identical_valuation, detect_mutual_dominance};
use crate::rational::{rat_to_f64, Rat};
use crate::solvers::{
    median_solution, nash_solution, solve_all, Algorithm, ChosenPoint, PathVariant, SolutionReport,
};
use num::{BigInt, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use thiserror::Error;

const MAX_ATTEMPTS: u32 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    Unconstrained,
    IdenticalValuation,
    MutualDominance,
    /// Applied to player X: the sum of X's valuations of Y's items is
    /// forced below the least value X puts on an own item.
    InsufficientCompensation,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::Unconstrained => "unconstrained",
            Condition::IdenticalValuation => "identical-valuation",
            Condition::MutualDominance => "mutual-dominance",
            Condition::InsufficientCompensation => "insufficient-compensation",
        }
    }

    pub fn parse(s: &str) -> Option<Condition> {
        [
            Condition::Unconstrained,
            Condition::IdenticalValuation,
            Condition::MutualDominance,
            Condition::InsufficientCompensation,
        ]
        .into_iter()
        .find(|c| c.name() == s)
    }
}

#[derive(Debug, Clone)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub p: usize,
    pub q: usize,
    pub value_min: Rat,
    pub value_max: Rat,
    /// Denominator of the value grid; 1 generates integers.
    pub value_grid: u32,
    pub condition: Condition,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            seed: 0,
            p: 3,
            q: 3,
            value_min: Rat::zero(),
            value_max: Rat::from_integer(10.into()),
            value_grid: 1,
            condition: Condition::Unconstrained,
        }
    }
}

#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
    #[error("could not satisfy condition {condition} within {attempts} attempts")]
    Unsatisfiable { condition: &'static str, attempts: u32 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Enumeration(#[from] crate::enumeration::EnumError),
}

fn grid_value(min: &Rat, grid: u32, k: u64) -> Rat {
    min + Rat::new(BigInt::from(k), BigInt::from(grid))
}

/// Deterministically generate an instance from a config.
///
/// Per-condition draw procedure:
/// - unconstrained: two draws per item (`value_to_x`, then `value_to_y`);
/// - identical-valuation: one draw per item, used for both values;
/// - mutual-dominance: two draws per item, redrawn while equal; the
///   larger goes to the owner;
/// - insufficient-compensation: X's items draw unconstrained; each of
///   X's valuations of Y's items is drawn on the grid below
///   `(min_own * grid - 1) / q` so their sum stays under X's least own
///   value (which may dip below `value_min`); rounds with a zero least
///   own value restart the instance.
pub fn generate(cfg: &GeneratorConfig) -> Result<Instance, LabError> {
    if cfg.value_grid == 0 {
        return Err(LabError::InvalidConfig("value_grid must be at least 1".into()));
    }
    if cfg.value_max < cfg.value_min {
        return Err(LabError::InvalidConfig("value_max below value_min".into()));
    }
    if cfg.value_min.is_negative() {
        return Err(LabError::InvalidConfig("value_min must be nonnegative".into()));
    }
    if cfg.p + cfg.q > crate::model::MAX_ITEMS {
        return Err(LabError::InvalidConfig(format!(
            "p + q = {} exceeds {} items",
            cfg.p + cfg.q,
            crate::model::MAX_ITEMS
        )));
    }
    let span = ((&cfg.value_max - &cfg.value_min)
        * Rat::from_integer(BigInt::from(cfg.value_grid)))
    .floor()
    .to_integer()
    .to_u64()
    .ok_or_else(|| LabError::InvalidConfig("value range too wide".into()))?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let draw = |rng: &mut ChaCha8Rng| grid_value(&cfg.value_min, cfg.value_grid, rng.gen_range(0..=span));

    for _ in 0..MAX_ATTEMPTS {
        let mut items = Vec::with_capacity(cfg.p + cfg.q);
        let mut failed = false;
        match cfg.condition {
            Condition::Unconstrained => {
                for (player, count, prefix) in
                    [(PlayerId::X, cfg.p, "x"), (PlayerId::Y, cfg.q, "y")]
                {
                    for i in 0..count {
                        let value_to_x = draw(&mut rng);
                        let value_to_y = draw(&mut rng);
                        items.push(Item {
                            name: format!("{prefix}{i}"),
                            owner: player,
                            value_to_x,
                            value_to_y,
                        });
                    }
                }
            }
            Condition::IdenticalValuation => {
                for (player, count, prefix) in
                    [(PlayerId::X, cfg.p, "x"), (PlayerId::Y, cfg.q, "y")]
                {
                    for i in 0..count {
                        let value = draw(&mut rng);
                        items.push(Item {
                            name: format!("{prefix}{i}"),
                            owner: player,
                            value_to_x: value.clone(),
                            value_to_y: value,
                        });
                    }
                }
            }
            Condition::MutualDominance => {
                'items: for (player, count, prefix) in
                    [(PlayerId::X, cfg.p, "x"), (PlayerId::Y, cfg.q, "y")]
                {
                    for i in 0..count {
                        let mut redraws = 0u32;
                        let (hi, lo) = loop {
                            let a = draw(&mut rng);
                            let b = draw(&mut rng);
                            if a != b {
                                break if a > b { (a, b) } else { (b, a) };
                            }
                            redraws += 1;
                            if redraws >= MAX_ATTEMPTS {
                                failed = true;
                                break 'items;
                            }
                        };
                        let (value_to_x, value_to_y) = match player {
                            PlayerId::X => (hi, lo),
                            PlayerId::Y => (lo, hi),
                        };
                        items.push(Item {
                            name: format!("{prefix}{i}"),
                            owner: player,
                            value_to_x,
                            value_to_y,
                        });
                    }
                }
            }
            Condition::InsufficientCompensation => {
                for i in 0..cfg.p {
                    let value_to_x = draw(&mut rng);
                    let value_to_y = draw(&mut rng);
                    items.push(Item {
                        name: format!("x{i}"),
                        owner: PlayerId::X,
                        value_to_x,
                        value_to_y,
                    });
                }
                let min_own = items
                    .iter()
                    .map(|it| it.value_to_x.clone())
                    .min()
                    .unwrap_or_else(Rat::zero);
                // ceiling on each of X's values for Y's goods so that q of
                // them cannot reach min_own
                let cap = (&min_own * Rat::from_integer(BigInt::from(cfg.value_grid))
                    - Rat::from_integer(1.into()))
                .floor()
                .to_integer();
                if cfg.p == 0 || cap.is_negative() {
                    failed = true; // min_own is zero: nothing can sit below it
                } else {
                    let per_item = if cfg.q > 0 {
                        (&cap / BigInt::from(cfg.q)).to_u64().unwrap_or(0)
                    } else {
                        0
                    };
                    for i in 0..cfg.q {
                        let k = rng.gen_range(0..=per_item);
                        let value_to_x = Rat::new(BigInt::from(k), BigInt::from(cfg.value_grid));
                        let value_to_y = draw(&mut rng);
                        items.push(Item {
                            name: format!("y{i}"),
                            owner: PlayerId::Y,
                            value_to_x,
                            value_to_y,
                        });
                    }
                }
            }
        }
        if failed {
            continue;
        }
        let inst = Instance::new(items).expect("generated items are valid");
        let holds = match cfg.condition {
            Condition::Unconstrained => true,
            Condition::IdenticalValuation => detect_identical_valuation(&inst).is_some(),
            Condition::MutualDominance => detect_mutual_dominance(&inst).is_some(),
            Condition::InsufficientCompensation => {
                crate::notrade::detect_insufficient_compensation(&inst, PlayerId::X)
                    .map(|w| w.is_some())
                    .unwrap_or(false)
            }
        };
        if holds {
            return Ok(inst);
        }
    }
    Err(LabError::Unsatisfiable { condition: cfg.condition.name(), attempts: MAX_ATTEMPTS })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyStep {
    pub x_gives: String,
    pub y_gives: String,
    pub delta_x: Rat,
    pub delta_y: Rat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyOutcome {
    pub final_point: OutcomePoint,
    pub steps: Vec<GreedyStep>,
}

/// Repeatedly apply the best mutually profitable one-for-one swap (the
/// one maximizing the product of the two per-step gains, ties broken by
/// canonical item order) until none exists. A demonstrably suboptimal
/// baseline: it cannot capture multi-item trades.
pub fn greedy_one_for_one(inst: &Instance) -> GreedyOutcome {
    let items = inst.items();
    let mut owner: Vec<PlayerId> = items.iter().map(|it| it.owner).collect();
    let mut total = OutcomePoint::origin();
    let mut steps = Vec::new();
    loop {
        let mut best: Option<(Rat, usize, usize, Rat, Rat)> = None;
        for i in 0..items.len() {
            if owner[i] != PlayerId::X {
                continue;
            }
            for j in 0..items.len() {
                if owner[j] != PlayerId::Y {
                    continue;
                }
                let dx = &items[j].value_to_x - &items[i].value_to_x;
                let dy = &items[i].value_to_y - &items[j].value_to_y;
                if dx.is_positive() && dy.is_positive() {
                    let score = &dx * &dy;
                    if best.as_ref().map_or(true, |(s, ..)| score > *s) {
                        best = Some((score, i, j, dx, dy));
                    }
                }
            }
        }
        match best {
            Some((_, i, j, dx, dy)) => {
                owner[i] = PlayerId::Y;
                owner[j] = PlayerId::X;
                total = OutcomePoint::new(&total.u_x + &dx, &total.u_y + &dy);
                steps.push(GreedyStep {
                    x_gives: items[i].name.clone(),
                    y_gives: items[j].name.clone(),
                    delta_x: dx,
                    delta_y: dy,
                });
            }
            None => break,
        }
    }
    GreedyOutcome { final_point: total, steps }
}

/// Aggregate results of running all solvers over generated instances.
#[derive(Debug, Clone)]
pub struct ComparisonStats {
    pub instances_run: usize,
    pub no_trade_instances: usize,
    /// Headline-agreement counts, row/column order = [`Algorithm::ALL`].
    pub agreement: Vec<Vec<usize>>,
    /// Per algorithm, instances where the tie set had more than one point.
    pub tie_counts: Vec<usize>,
    /// Instances where the median choice differs from the Nash choice.
    pub median_nash_disagreements: usize,
    pub collapse_mean: f64,
    /// Ten bins over (0, 1].
    pub collapse_histogram: Vec<usize>,
    /// Relative product gap (nash - greedy) / nash over trade instances.
    pub greedy_gap_mean: f64,
    pub greedy_gap_max: f64,
    pub greedy_strict_gaps: usize,
    pub greedy_gap_histogram: Vec<usize>,
}

fn headline_of(report: &Option<SolutionReport>) -> Option<ChosenPoint> {
    report.as_ref().map(|r| r.headline().clone())
}

fn headlines_agree(a: &Option<ChosenPoint>, b: &Option<ChosenPoint>) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(ChosenPoint::Exact(p)), Some(ChosenPoint::Exact(q))) => p == q,
        (Some(p), Some(q)) => {
            let (px, py) = p.to_f64();
            let (qx, qy) = q.to_f64();
            let close = |u: f64, v: f64| (u - v).abs() <= 1e-9 * (1.0 + u.abs().max(v.abs()));
            close(px, qx) && close(py, qy)
        }
        _ => false,
    }
}

/// Run every solver on `runs` generated instances and tabulate agreement
/// with the Nash rule (and each other), tie frequencies, point-collapse
/// statistics, and the greedy baseline's shortfall.
pub fn compare_algorithms(
    cfg: &GeneratorConfig,
    runs: usize,
    opts: &EnumOptions,
) -> Result<ComparisonStats, LabError> {
    let n_alg = Algorithm::ALL.len();
    let mut stats = ComparisonStats {
        instances_run: 0,
        no_trade_instances: 0,
        agreement: vec![vec![0; n_alg]; n_alg],
        tie_counts: vec![0; n_alg],
        median_nash_disagreements: 0,
        collapse_mean: 0.0,
        collapse_histogram: vec![0; 10],
        greedy_gap_mean: 0.0,
        greedy_gap_max: 0.0,
        greedy_strict_gaps: 0,
        greedy_gap_histogram: vec![0; 10],
    };
    let mut collapse_sum = 0.0;
    let mut gap_sum = 0.0;
    let mut gap_count = 0usize;

    for run in 0..runs {
        let mut run_cfg = cfg.clone();
        run_cfg.seed = cfg.seed.wrapping_add(run as u64);
        let inst = generate(&run_cfg)?;
        let cloud = enumerate_cloud(&inst, opts)?;
        let candidates = Candidates::from_cloud(&cloud);
        let reports = solve_all(&candidates, PathVariant::AdjacentChain);

        stats.instances_run += 1;
        let ratio = rat_to_f64(&collapse_ratio(&cloud));
        collapse_sum += ratio;
        let bin = ((ratio * 10.0).floor() as usize).min(9);
        stats.collapse_histogram[bin] += 1;

        let headlines: Vec<Option<ChosenPoint>> =
            reports.iter().map(|(_, r)| headline_of(r)).collect();
        if headlines[0].is_none() {
            stats.no_trade_instances += 1;
        }
        for i in 0..n_alg {
            if reports[i].1.as_ref().map_or(false, |r| r.tie_count() > 1) {
                stats.tie_counts[i] += 1;
            }
            for j in 0..n_alg {
                if headlines_agree(&headlines[i], &headlines[j]) {
                    stats.agreement[i][j] += 1;
                }
            }
        }
        if !headlines_agree(&headlines[0], &headlines[2]) {
            stats.median_nash_disagreements += 1;
        }

        if let Some(nash) = &reports[0].1 {
            let best = match nash.objective.as_ref() {
                Some(crate::solvers::ObjectiveValue::Exact(r)) => r.clone(),
                _ => unreachable!("nash objective is exact"),
            };
            let greedy = greedy_one_for_one(&inst);
            let gap = &best - greedy.final_point.product();
            let rel = rat_to_f64(&(&gap / &best));
            if gap.is_positive() {
                stats.greedy_strict_gaps += 1;
            }
            gap_sum += rel;
            gap_count += 1;
            if rel > stats.greedy_gap_max {
                stats.greedy_gap_max = rel;
            }
            let gbin = ((rel * 10.0).floor() as usize).min(9);
            stats.greedy_gap_histogram[gbin] += 1;
        }
    }

    if stats.instances_run > 0 {
        stats.collapse_mean = collapse_sum / stats.instances_run as f64;
    }
    if gap_count > 0 {
        stats.greedy_gap_mean = gap_sum / gap_count as f64;
    }
    Ok(stats)
}

/// CSV rendering of the agreement matrix.
pub fn agreement_csv(stats: &ComparisonStats) -> String {
    let mut out = String::from("algorithm");
    for alg in Algorithm::ALL {
        out.push(',');
        out.push_str(alg.name());
    }
    out.push('\n');
    for (i, alg) in Algorithm::ALL.iter().enumerate() {
        out.push_str(alg.name());
        for j in 0..Algorithm::ALL.len() {
            out.push_str(&format!(",{}", stats.agreement[i][j]));
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone)]
pub struct ProbeEntry {
    pub player: PlayerId,
    pub factor: Rat,
    pub median_same_exchanges: bool,
    pub nash_same_exchanges: bool,
    pub still_distinct: bool,
}

#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub entries: Vec<ProbeEntry>,
    pub all_pass: bool,
}

fn exchanges_for_support(
    cloud: &crate::enumeration::PointCloud,
    report: &SolutionReport,
) -> BTreeSet<Exchange> {
    report
        .support
        .iter()
        .flat_map(|p| cloud.exchanges_at(p).iter().copied())
        .collect()
}

/// Verify that the median's dislike of the Nash point is not a scale
/// artifact: under every factor on either player, both solvers keep
/// choosing the same exchanges, and those exchange sets stay distinct.
pub fn median_dislike_scale_probe(
    inst: &Instance,
    factors: &[Rat],
    opts: &EnumOptions,
) -> Result<ProbeReport, LabError> {
    let cloud = enumerate_cloud(inst, opts)?;
    let candidates = Candidates::from_cloud(&cloud);
    let nash = nash_solution(&candidates)
        .ok_or_else(|| LabError::Precondition("empty periphery".into()))?;
    let median = median_solution(&candidates).expect("periphery known non-empty");
    if headlines_agree(&Some(nash.headline().clone()), &Some(median.headline().clone())) {
        return Err(LabError::Precondition(
            "nash and median coincide on the original instance".into(),
        ));
    }
    let nash_base = exchanges_for_support(&cloud, &nash);
    let median_base = exchanges_for_support(&cloud, &median);

    let mut entries = Vec::new();
    for factor in factors {
        for player in [PlayerId::X, PlayerId::Y] {
            let t = ScaleTransform::new(player, factor.clone())
                .map_err(|e| LabError::Precondition(e.to_string()))?;
            let scaled = apply_scale(inst, &t);
            let cloud2 = enumerate_cloud(&scaled, opts)?;
            let cand2 = Candidates::from_cloud(&cloud2);
            let nash2 = nash_solution(&cand2).expect("acceptability is scale invariant");
            let median2 = median_solution(&cand2).unwrap();
            entries.push(ProbeEntry {
                player,
                factor: factor.clone(),
                median_same_exchanges: exchanges_for_support(&cloud2, &median2) == median_base,
                nash_same_exchanges: exchanges_for_support(&cloud2, &nash2) == nash_base,
                still_distinct: !headlines_agree(
                    &Some(nash2.headline().clone()),
                    &Some(median2.headline().clone()),
                ),
            });
        }
    }
    let all_pass = entries
        .iter()
        .all(|e| e.median_same_exchanges && e.nash_same_exchanges && e.still_distinct);
    Ok(ProbeReport { entries, all_pass })
}
