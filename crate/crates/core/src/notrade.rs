//! Sufficient conditions under which no mutually profitable trade exists.
//!
//! Three detectors: identical valuations (every outcome sits on
//! u_x + u_y = 0), mutual dominance (every item worth strictly more to
//! its owner), and insufficient compensation (everything the other side
//! owns is worth less to a player than the least of their own items).
//! Each is sufficient, none is necessary; `certify_no_trade` cross-checks
//! any firing detector against brute-force enumeration and refuses to
//! return a certificate the enumeration contradicts.

use crate::enumeration::{enumerate_cloud, EnumOptions, PointCloud};
use crate::model::{Instance, OutcomePoint, PlayerId};
use crate::rational::Rat;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoTradeKind {
    IdenticalValuation,
    MutualDominance,
    InsufficientCompensationX,
    InsufficientCompensationY,
}

impl NoTradeKind {
    pub fn name(self) -> &'static str {
        match self {
            NoTradeKind::IdenticalValuation => "identical-valuation",
            NoTradeKind::MutualDominance => "mutual-dominance",
            NoTradeKind::InsufficientCompensationX => "insufficient-compensation-X",
            NoTradeKind::InsufficientCompensationY => "insufficient-compensation-Y",
        }
    }
}

/// Supporting data for a fired detector.
#[derive(Debug, Clone, PartialEq)]
pub enum NoTradeWitness {
    /// Per-item shared value.
    IdenticalValuation { items: Vec<(String, Rat)> },
    /// Per-item (owner value, other value) with owner strictly higher.
    MutualDominance { items: Vec<(String, Rat, Rat)> },
    /// The player's total for everything the other owns vs the minimum
    /// over their own items.
    InsufficientCompensation {
        player: PlayerId,
        sum_of_others: Rat,
        min_own: Rat,
        min_item: String,
    },
}

impl NoTradeWitness {
    pub fn kind(&self) -> NoTradeKind {
        match self {
            NoTradeWitness::IdenticalValuation { .. } => NoTradeKind::IdenticalValuation,
            NoTradeWitness::MutualDominance { .. } => NoTradeKind::MutualDominance,
            NoTradeWitness::InsufficientCompensation { player: PlayerId::X, .. } => {
                NoTradeKind::InsufficientCompensationX
            }
            NoTradeWitness::InsufficientCompensation { player: PlayerId::Y, .. } => {
                NoTradeKind::InsufficientCompensationY
            }
        }
    }
}

/// Certificate for an instance. `kind` is `None` when no detector fires,
/// which proves nothing: the conditions are sufficient, not necessary.
#[derive(Debug, Clone)]
pub struct NoTradeCertificate {
    pub kind: Option<NoTradeKind>,
    /// Every detector that fired, in detector order.
    pub witnesses: Vec<NoTradeWitness>,
    pub brute_force_verified: bool,
    pub exchanges_checked: u128,
}

impl NoTradeCertificate {
    pub fn kind_name(&self) -> &'static str {
        self.kind.map_or("none", NoTradeKind::name)
    }
}

#[derive(Debug, Error)]
pub enum NoTradeError {
    #[error("{kind} certificate contradicted by enumeration: exchange landing on {point} is acceptable")]
    Contradicted { kind: &'static str, point: OutcomePoint },
    #[error("player {0} owns no items; insufficient-compensation does not apply")]
    PlayerOwnsNothing(PlayerId),
}

/// Fires iff both players value every single item equally. All outcome
/// points then sit on u_x + u_y = 0, so none is strictly positive for
/// both sides.
pub fn detect_identical_valuation(inst: &Instance) -> Option<NoTradeWitness> {
    if inst.items().iter().all(|it| it.value_to_x == it.value_to_y) {
        Some(NoTradeWitness::IdenticalValuation {
            items: inst
                .items()
                .iter()
                .map(|it| (it.name.clone(), it.value_to_x.clone()))
                .collect(),
        })
    } else {
        None
    }
}

/// Fires iff every item is valued strictly higher by its owner than by
/// the other player; the inequality chain then rules out any M-for-N
/// exchange.
pub fn detect_mutual_dominance(inst: &Instance) -> Option<NoTradeWitness> {
    if inst.items().iter().all(|it| it.own_value() > it.cross_value()) {
        Some(NoTradeWitness::MutualDominance {
            items: inst
                .items()
                .iter()
                .map(|it| (it.name.clone(), it.own_value().clone(), it.cross_value().clone()))
                .collect(),
        })
    } else {
        None
    }
}

/// Fires iff the player's total valuation of everything the other side
/// owns is strictly below the value they place on any (hence the least)
/// of their own items; that player then never gives anything up.
pub fn detect_insufficient_compensation(
    inst: &Instance,
    player: PlayerId,
) -> Result<Option<NoTradeWitness>, NoTradeError> {
    let own_indices = inst.indices_of(player);
    if own_indices.is_empty() {
        return Err(NoTradeError::PlayerOwnsNothing(player));
    }
    let sum_of_others: Rat = inst
        .indices_of(player.other())
        .iter()
        .map(|&i| inst.items()[i].value_to(player).clone())
        .sum();
    let (min_idx, min_own) = own_indices
        .iter()
        .map(|&i| (i, inst.items()[i].value_to(player)))
        .min_by(|a, b| a.1.cmp(b.1))
        .map(|(i, v)| (i, v.clone()))
        .unwrap();
    if sum_of_others < min_own {
        Ok(Some(NoTradeWitness::InsufficientCompensation {
            player,
            sum_of_others,
            min_own,
            min_item: inst.items()[min_idx].name.clone(),
        }))
    } else {
        Ok(None)
    }
}

/// Run all detectors in order; the first to fire names the kind, all
/// firing detectors appear in the witness list. Within the enumeration
/// limit, a firing certificate is always cross-checked against brute
/// force, and a contradiction is a hard error.
pub fn certify_no_trade(
    inst: &Instance,
    opts: &EnumOptions,
) -> Result<NoTradeCertificate, NoTradeError> {
    let mut witnesses = Vec::new();
    if let Some(w) = detect_identical_valuation(inst) {
        witnesses.push(w);
    }
    if let Some(w) = detect_mutual_dominance(inst) {
        witnesses.push(w);
    }
    for player in [PlayerId::X, PlayerId::Y] {
        if let Ok(Some(w)) = detect_insufficient_compensation(inst, player) {
            witnesses.push(w);
        }
    }
    let kind = witnesses.first().map(NoTradeWitness::kind);

    let mut brute_force_verified = false;
    let mut exchanges_checked = 0u128;
    if kind.is_some() && inst.items().len() <= opts.limit {
        let cloud = enumerate_cloud(inst, &EnumOptions { limit: opts.limit, force: false })
            .expect("within limit");
        exchanges_checked = cloud.total_exchanges();
        if let Some(point) = first_acceptable(&cloud) {
            return Err(NoTradeError::Contradicted {
                kind: kind.unwrap().name(),
                point,
            });
        }
        brute_force_verified = true;
    }
    Ok(NoTradeCertificate { kind, witnesses, brute_force_verified, exchanges_checked })
}

fn first_acceptable(cloud: &PointCloud) -> Option<OutcomePoint> {
    cloud
        .iter()
        .map(|(p, _)| p)
        .find(|p| p.is_acceptable())
        .cloned()
}
