//! JSON rendering of reports.
//!
//! Exact rationals serialize as plain numbers when integral and as
//! `"num/den"` strings otherwise; the `decimal` flag switches to fixed
//! six-digit decimal strings for human reading.

use crate::enumeration::PointCloud;
use crate::invariance::{
    FlipReport, ScaleCheckReport, TranslationCounterexample, ZeroItemReport,
};
use crate::lab::{ComparisonStats, GreedyOutcome, ProbeReport};
use crate::model::{Exchange, Instance, OutcomePoint};
use crate::notrade::{NoTradeCertificate, NoTradeWitness};
use crate::rational::{format_rat, format_rat_decimal, Rat};
use crate::solvers::{Algorithm, ChosenPoint, GravityTable, ObjectiveValue, SolutionReport};
use serde_json::{json, Value};

pub fn rat_json(r: &Rat, decimal: bool) -> Value {
    if decimal {
        return Value::String(format_rat_decimal(r));
    }
    if r.is_integer() {
        if let Ok(n) = i64::try_from(r.numer().clone()) {
            return json!(n);
        }
    }
    Value::String(format_rat(r))
}

fn count_json(n: u128) -> Value {
    match u64::try_from(n) {
        Ok(n) => json!(n),
        Err(_) => Value::String(n.to_string()),
    }
}

pub fn point_json(p: &OutcomePoint, decimal: bool) -> Value {
    json!({ "u_x": rat_json(&p.u_x, decimal), "u_y": rat_json(&p.u_y, decimal) })
}

pub fn chosen_json(c: &ChosenPoint, decimal: bool) -> Value {
    match c {
        ChosenPoint::Exact(p) => point_json(p, decimal),
        ChosenPoint::Approx { u_x, u_y } => json!({ "u_x": u_x, "u_y": u_y }),
    }
}

pub fn exchange_json(inst: &Instance, ex: &Exchange) -> Value {
    json!({
        "give_x": inst.mask_names(ex.give_x),
        "give_y": inst.mask_names(ex.give_y),
    })
}

/// One solver's record. When a cloud and instance are at hand, each
/// support point is annotated with the exchanges achieving it, as named
/// item lists.
pub fn solution_json(
    algorithm: Algorithm,
    report: Option<&SolutionReport>,
    resolver: Option<(&Instance, &PointCloud)>,
    decimal: bool,
) -> Value {
    let Some(report) = report else {
        return json!({
            "algorithm": algorithm.name(),
            "no_trade": true,
        });
    };
    let objective = match &report.objective {
        Some(ObjectiveValue::Exact(r)) => rat_json(r, decimal),
        Some(ObjectiveValue::Approx(f)) => json!(f),
        None => Value::Null,
    };
    let exchanges: Vec<Value> = match resolver {
        Some((inst, cloud)) => report
            .support
            .iter()
            .flat_map(|point| {
                cloud
                    .exchanges_at(point)
                    .iter()
                    .map(|ex| {
                        let mut v = exchange_json(inst, ex);
                        v["point"] = point_json(point, decimal);
                        v
                    })
                    .collect::<Vec<Value>>()
            })
            .collect(),
        None => Vec::new(),
    };
    json!({
        "algorithm": report.algorithm.name(),
        "no_trade": false,
        "chosen": report.chosen.iter().map(|c| chosen_json(c, decimal)).collect::<Vec<Value>>(),
        "support": report.support.iter().map(|p| point_json(p, decimal)).collect::<Vec<Value>>(),
        "exchanges": exchanges,
        "objective": objective,
        "is_lottery": report.is_lottery,
        "tie_count": report.tie_count(),
    })
}

fn witness_json(w: &NoTradeWitness, decimal: bool) -> Value {
    match w {
        NoTradeWitness::IdenticalValuation { items } => json!({
            "kind": w.kind().name(),
            "items": items
                .iter()
                .map(|(name, v)| json!({ "name": name, "value": rat_json(v, decimal) }))
                .collect::<Vec<Value>>(),
        }),
        NoTradeWitness::MutualDominance { items } => json!({
            "kind": w.kind().name(),
            "items": items
                .iter()
                .map(|(name, own, cross)| json!({
                    "name": name,
                    "owner_value": rat_json(own, decimal),
                    "other_value": rat_json(cross, decimal),
                }))
                .collect::<Vec<Value>>(),
        }),
        NoTradeWitness::InsufficientCompensation { player, sum_of_others, min_own, min_item } => {
            json!({
                "kind": w.kind().name(),
                "player": player.tag(),
                "sum_of_others": rat_json(sum_of_others, decimal),
                "min_own": rat_json(min_own, decimal),
                "min_item": min_item,
            })
        }
    }
}

pub fn certificate_json(cert: &NoTradeCertificate, decimal: bool) -> Value {
    json!({
        "kind": cert.kind_name(),
        "witness": cert.witnesses.iter().map(|w| witness_json(w, decimal)).collect::<Vec<Value>>(),
        "brute_force_verified": cert.brute_force_verified,
        "exchanges_checked": count_json(cert.exchanges_checked),
    })
}

pub fn scale_report_json(report: &ScaleCheckReport, inst: &Instance, decimal: bool) -> Value {
    json!({
        "passed": report.passed(),
        "exchanges_checked": count_json(report.exchanges_checked),
        "acceptability_preserved": report.acceptability_preserved,
        "utilities_scaled_exactly": report.utilities_scaled_exactly,
        "argmax_exchanges_identical": report.argmax_exchanges_identical,
        "counterexample": report.counterexample.as_ref().map(|c| json!({
            "exchange": exchange_json(inst, &c.exchange),
            "original": point_json(&c.original, decimal),
            "transformed": point_json(&c.transformed, decimal),
            "reason": c.reason,
        })),
    })
}

pub fn flip_json(report: &FlipReport, decimal: bool) -> Value {
    json!({
        "player": report.player.tag(),
        "received": report.received,
        "given": report.given,
        "margin": rat_json(&report.margin, decimal),
        "threshold": report.threshold.as_ref().map(|t| rat_json(t, decimal)),
        "flips": report.threshold.is_some(),
    })
}

pub fn translation_counterexample_json(
    found: Option<&TranslationCounterexample>,
    inst: &Instance,
    decimal: bool,
) -> Value {
    match found {
        Some(c) => json!({
            "translation_robust": false,
            "player": c.player.tag(),
            "exchange": exchange_json(inst, &c.exchange),
            "received": c.received,
            "given": c.given,
            "threshold": rat_json(&c.threshold, decimal),
        }),
        None => json!({ "translation_robust": true }),
    }
}

pub fn zero_report_json(report: &ZeroItemReport, decimal: bool) -> Value {
    json!({
        "player": report.player.tag(),
        "witnesses": report.witnesses.iter().map(|w| json!({
            "name": w.name,
            "scaled": rat_json(&w.scaled, decimal),
            "translated": rat_json(&w.translated, decimal),
        })).collect::<Vec<Value>>(),
    })
}

pub fn gravity_json(table: &GravityTable, decimal: bool) -> Value {
    json!({
        "rows": table.rows.iter().map(|r| json!({
            "m1": rat_json(&r.m1, decimal),
            "m2": rat_json(&r.m2, decimal),
            "product": rat_json(&r.product, decimal),
            "force": crate::rational::rat_to_f64(&r.force),
        })).collect::<Vec<Value>>(),
        "argmax": table.argmax,
    })
}

pub fn greedy_json(outcome: &GreedyOutcome, decimal: bool) -> Value {
    json!({
        "final_point": point_json(&outcome.final_point, decimal),
        "steps": outcome.steps.iter().map(|s| json!({
            "x_gives": s.x_gives,
            "y_gives": s.y_gives,
            "delta_x": rat_json(&s.delta_x, decimal),
            "delta_y": rat_json(&s.delta_y, decimal),
        })).collect::<Vec<Value>>(),
    })
}

pub fn stats_json(stats: &ComparisonStats) -> Value {
    json!({
        "instances_run": stats.instances_run,
        "no_trade_instances": stats.no_trade_instances,
        "algorithms": Algorithm::ALL.iter().map(|a| a.name()).collect::<Vec<&str>>(),
        "agreement": stats.agreement,
        "tie_counts": stats.tie_counts,
        "median_nash_disagreements": stats.median_nash_disagreements,
        "collapse_mean": stats.collapse_mean,
        "collapse_histogram": stats.collapse_histogram,
        "greedy_gap_mean": stats.greedy_gap_mean,
        "greedy_gap_max": stats.greedy_gap_max,
        "greedy_strict_gaps": stats.greedy_strict_gaps,
        "greedy_gap_histogram": stats.greedy_gap_histogram,
    })
}

pub fn probe_json(report: &ProbeReport, decimal: bool) -> Value {
    json!({
        "all_pass": report.all_pass,
        "entries": report.entries.iter().map(|e| json!({
            "player": e.player.tag(),
            "factor": rat_json(&e.factor, decimal),
            "median_same_exchanges": e.median_same_exchanges,
            "nash_same_exchanges": e.nash_same_exchanges,
            "still_distinct": e.still_distinct,
        })).collect::<Vec<Value>>(),
    })
}
