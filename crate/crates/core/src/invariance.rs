//! Utility-function transforms and what they do to trade decisions.
//!
//! Positive rescaling of either player's utilities changes nothing: every
//! exchange keeps its accept/reject status and the product-maximizing
//! exchange set maps to itself. Translation is different: adding b to a
//! player's utilities shifts that player's marginal utility of an
//! exchange by (m - n) * b, where m items come in and n go out, so an
//! accepted trade with m < n flips to rejected once b passes an exact
//! threshold. This module applies the transforms and verifies both
//! behaviors exhaustively over the exchange space.

use crate::enumeration::{EnumError, EnumOptions};
use crate::model::{marginal_utilities_unchecked, Exchange, Instance, ModelError, OutcomePoint, PlayerId};
use crate::rational::{format_rat, Rat};
use num::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InvarianceError {
    #[error("scale factor must be strictly positive, got {0}")]
    NonPositiveFactor(String),
    #[error("translation by {offset} makes item `{name}` negative for {player}; pass allow_negative to permit it")]
    NegativeAfterTranslation { name: String, player: PlayerId, offset: String },
    #[error("exchange is not acceptable to {player} on the original instance (margin {margin})")]
    NotOriginallyAccepted { player: PlayerId, margin: String },
    #[error("no item has utility zero for {player}")]
    NoZeroItem { player: PlayerId },
    #[error("scale targets {scale_player} but translation targets {translation_player}")]
    PlayerMismatch { scale_player: PlayerId, translation_player: PlayerId },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Enumeration(#[from] EnumError),
}

/// Multiply one player's valuation of every item by a positive factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaleTransform {
    player: PlayerId,
    factor: Rat,
}

impl ScaleTransform {
    pub fn new(player: PlayerId, factor: Rat) -> Result<ScaleTransform, InvarianceError> {
        if !factor.is_positive() {
            return Err(InvarianceError::NonPositiveFactor(format_rat(&factor)));
        }
        Ok(ScaleTransform { player, factor })
    }

    pub fn player(&self) -> PlayerId {
        self.player
    }

    pub fn factor(&self) -> &Rat {
        &self.factor
    }
}

/// Add a constant (any sign) to one player's valuation of every item.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationTransform {
    pub player: PlayerId,
    pub offset: Rat,
}

/// Rescale the designated player's valuations of every item, own and
/// other's alike.
pub fn apply_scale(inst: &Instance, t: &ScaleTransform) -> Instance {
    let items = inst
        .items()
        .iter()
        .map(|item| {
            let mut item = item.clone();
            *item.value_to_mut(t.player) = &*item.value_to(t.player) * &t.factor;
            item
        })
        .collect();
    Instance::from_items_unchecked(items)
}

/// Translate the designated player's valuations. Negative results are
/// allowed by default: the whole point of the exercise is to push b far
/// enough to expose the pathology.
pub fn apply_translation(
    inst: &Instance,
    t: &TranslationTransform,
    allow_negative: bool,
) -> Result<Instance, InvarianceError> {
    let mut items = Vec::with_capacity(inst.items().len());
    for item in inst.items() {
        let mut item = item.clone();
        let v = item.value_to_mut(t.player);
        *v = &*v + &t.offset;
        if !allow_negative && v.is_negative() {
            return Err(InvarianceError::NegativeAfterTranslation {
                name: item.name.clone(),
                player: t.player,
                offset: format_rat(&t.offset),
            });
        }
        items.push(item);
    }
    Ok(Instance::from_items_unchecked(items))
}

#[derive(Debug, Clone)]
pub struct ScaleCounterexample {
    pub exchange: Exchange,
    pub original: OutcomePoint,
    pub transformed: OutcomePoint,
    pub reason: String,
}

/// Result of the exhaustive scale-invariance check.
#[derive(Debug, Clone)]
pub struct ScaleCheckReport {
    pub exchanges_checked: u128,
    pub acceptability_preserved: bool,
    pub utilities_scaled_exactly: bool,
    pub argmax_exchanges_identical: bool,
    pub counterexample: Option<ScaleCounterexample>,
}

impl ScaleCheckReport {
    pub fn passed(&self) -> bool {
        self.acceptability_preserved && self.utilities_scaled_exactly && self.argmax_exchanges_identical
    }
}

/// Enumerate every exchange on the original and the scaled instance and
/// verify: (a) acceptability is identical, (b) the scaled player's
/// marginal utility equals factor times the original, exactly, and
/// (c) the set of exchanges attaining the maximum product over acceptable
/// points is identical. None of these should ever fail.
pub fn check_scale_invariance(
    inst: &Instance,
    t: &ScaleTransform,
    opts: &EnumOptions,
) -> Result<ScaleCheckReport, EnumError> {
    let n = inst.items().len();
    if !opts.force && n > opts.limit {
        return Err(EnumError::LimitExceeded {
            items: n,
            exchanges: 1u128 << n,
            limit: opts.limit,
        });
    }
    let scaled = apply_scale(inst, t);

    let mut report = ScaleCheckReport {
        exchanges_checked: 0,
        acceptability_preserved: true,
        utilities_scaled_exactly: true,
        argmax_exchanges_identical: true,
        counterexample: None,
    };
    let mut best_orig: Option<Rat> = None;
    let mut argmax_orig: Vec<Exchange> = Vec::new();
    let mut best_scaled: Option<Rat> = None;
    let mut argmax_scaled: Vec<Exchange> = Vec::new();

    for ex in all_exchanges(inst) {
        report.exchanges_checked += 1;
        let orig = marginal_utilities_unchecked(inst, &ex);
        let new = marginal_utilities_unchecked(&scaled, &ex);

        let expected = match t.player {
            PlayerId::X => OutcomePoint::new(&orig.u_x * &t.factor, orig.u_y.clone()),
            PlayerId::Y => OutcomePoint::new(orig.u_x.clone(), &orig.u_y * &t.factor),
        };
        if new != expected {
            report.utilities_scaled_exactly = false;
            report.counterexample.get_or_insert_with(|| ScaleCounterexample {
                exchange: ex,
                original: orig.clone(),
                transformed: new.clone(),
                reason: "marginal utility is not factor * original".into(),
            });
        }
        if orig.is_acceptable() != new.is_acceptable() {
            report.acceptability_preserved = false;
            report.counterexample.get_or_insert_with(|| ScaleCounterexample {
                exchange: ex,
                original: orig.clone(),
                transformed: new.clone(),
                reason: "acceptability changed under rescaling".into(),
            });
        }
        if orig.is_acceptable() {
            track_argmax(&mut best_orig, &mut argmax_orig, orig.product(), ex);
        }
        if new.is_acceptable() {
            track_argmax(&mut best_scaled, &mut argmax_scaled, new.product(), ex);
        }
    }

    if argmax_orig != argmax_scaled {
        report.argmax_exchanges_identical = false;
        if report.counterexample.is_none() {
            let ex = argmax_orig
                .iter()
                .chain(argmax_scaled.iter())
                .next()
                .copied()
                .unwrap_or(Exchange::NULL);
            report.counterexample = Some(ScaleCounterexample {
                exchange: ex,
                original: marginal_utilities_unchecked(inst, &ex),
                transformed: marginal_utilities_unchecked(&scaled, &ex),
                reason: "product-maximizing exchange set changed".into(),
            });
        }
    }
    Ok(report)
}

fn track_argmax(best: &mut Option<Rat>, ties: &mut Vec<Exchange>, value: Rat, ex: Exchange) {
    match best {
        Some(b) if value < *b => {}
        Some(b) if value == *b => ties.push(ex),
        _ => {
            *best = Some(value);
            ties.clear();
            ties.push(ex);
        }
    }
}

/// Iterate the full exchange space in canonical order (give_y outer,
/// give_x inner would differ; this is give_x-major).
pub fn all_exchanges(inst: &Instance) -> impl Iterator<Item = Exchange> + '_ {
    let x_idx = inst.x_indices().to_vec();
    let y_idx = inst.y_indices().to_vec();
    let scatter = |indices: &[usize], ordinal: u64| -> u64 {
        let mut global = 0u64;
        let mut bits = ordinal;
        while bits != 0 {
            let ord = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            global |= 1u64 << indices[ord];
        }
        global
    };
    (0..(1u64 << x_idx.len())).flat_map(move |xm| {
        let give_x = scatter(&x_idx, xm);
        let y_idx = y_idx.clone();
        (0..(1u64 << y_idx.len()))
            .map(move |ym| Exchange { give_x, give_y: scatter(&y_idx, ym) })
    })
}

/// How a specific player fares on a specific exchange.
#[derive(Debug, Clone)]
pub struct FlipReport {
    pub player: PlayerId,
    /// Items this player receives.
    pub received: u32,
    /// Items this player gives away.
    pub given: u32,
    /// Original marginal utility (gains minus losses), strictly positive.
    pub margin: Rat,
    /// Smallest translation offset that flips acceptance to rejection, or
    /// `None` when no positive offset ever can (received >= given).
    pub threshold: Option<Rat>,
}

fn player_margin(inst: &Instance, ex: &Exchange, player: PlayerId) -> (u32, u32, Rat) {
    let point = marginal_utilities_unchecked(inst, ex);
    let (received, given, margin) = match player {
        PlayerId::X => (ex.given_by_y(), ex.given_by_x(), point.u_x),
        PlayerId::Y => (ex.given_by_x(), ex.given_by_y(), point.u_y),
    };
    (received, given, margin)
}

/// For an exchange the player originally accepts: report whether a
/// translation of that player's utilities can flip the decision, and the
/// exact threshold b* when it can. The translated margin is
/// margin + (m - n) * b, so with m >= n no positive b flips it, and with
/// m < n it flips for every b >= b* = margin / (n - m) (the boundary
/// itself rejects, because acceptance is strict).
pub fn check_translation_flip(
    inst: &Instance,
    ex: &Exchange,
    player: PlayerId,
) -> Result<FlipReport, InvarianceError> {
    ex.validate(inst)?;
    let (received, given, margin) = player_margin(inst, ex, player);
    if !margin.is_positive() {
        return Err(InvarianceError::NotOriginallyAccepted {
            player,
            margin: format_rat(&margin),
        });
    }
    let threshold = if received < given {
        Some(&margin / Rat::from_integer((given - received).into()))
    } else {
        None
    };
    Ok(FlipReport { player, received, given, margin, threshold })
}

#[derive(Debug, Clone)]
pub struct TranslationCounterexample {
    pub exchange: Exchange,
    pub player: PlayerId,
    pub received: u32,
    pub given: u32,
    pub threshold: Rat,
}

/// Scan every mutually acceptable exchange for a player who receives
/// fewer items than they give; the smallest threshold found is the
/// cheapest translation that kills an otherwise-good trade. `None`
/// certifies the instance is translation-robust.
pub fn find_translation_counterexample(
    inst: &Instance,
    opts: &EnumOptions,
) -> Result<Option<TranslationCounterexample>, EnumError> {
    let n = inst.items().len();
    if !opts.force && n > opts.limit {
        return Err(EnumError::LimitExceeded {
            items: n,
            exchanges: 1u128 << n,
            limit: opts.limit,
        });
    }
    let mut best: Option<TranslationCounterexample> = None;
    for ex in all_exchanges(inst) {
        let point = marginal_utilities_unchecked(inst, &ex);
        if !point.is_acceptable() {
            continue;
        }
        for player in [PlayerId::X, PlayerId::Y] {
            let (received, given, margin) = player_margin(inst, &ex, player);
            if received >= given {
                continue;
            }
            let threshold = &margin / Rat::from_integer((given - received).into());
            if best.as_ref().map_or(true, |b| threshold < b.threshold) {
                best = Some(TranslationCounterexample {
                    exchange: ex,
                    player,
                    received,
                    given,
                    threshold,
                });
            }
        }
    }
    Ok(best)
}

/// A zero-valued ("totally useless") item stays at zero under any
/// rescaling but takes the value b under translation by b.
#[derive(Debug, Clone)]
pub struct ZeroItemWitness {
    pub name: String,
    pub scaled: Rat,
    pub translated: Rat,
}

#[derive(Debug, Clone)]
pub struct ZeroItemReport {
    pub player: PlayerId,
    pub witnesses: Vec<ZeroItemWitness>,
}

pub fn zero_item_consistency(
    inst: &Instance,
    scale: &ScaleTransform,
    translation: &TranslationTransform,
) -> Result<ZeroItemReport, InvarianceError> {
    if scale.player != translation.player {
        return Err(InvarianceError::PlayerMismatch {
            scale_player: scale.player,
            translation_player: translation.player,
        });
    }
    let player = scale.player;
    let scaled = apply_scale(inst, scale);
    let translated = apply_translation(inst, translation, true)?;
    let witnesses: Vec<ZeroItemWitness> = inst
        .items()
        .iter()
        .enumerate()
        .filter(|(_, item)| item.value_to(player).is_zero())
        .map(|(i, item)| ZeroItemWitness {
            name: item.name.clone(),
            scaled: scaled.items()[i].value_to(player).clone(),
            translated: translated.items()[i].value_to(player).clone(),
        })
        .collect();
    if witnesses.is_empty() {
        return Err(InvarianceError::NoZeroItem { player });
    }
    Ok(ZeroItemReport { player, witnesses })
}
