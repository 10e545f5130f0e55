//! The bargaining instance: items, ownership, exchanges, and marginal
//! utilities.
//!
//! An instance file is a single JSON document:
//!
//! ```json
//! {"items": [{"name": "radio", "owner": "X", "value_to_x": 11, "value_to_y": 4}, ...]}
//! ```
//!
//! Utility values may be JSON numbers or strings; either way they are
//! parsed as exact rationals (`31.5` becomes `63/2`). Item order in the
//! file is the canonical order: subset bitmask bit `i` refers to item `i`.

use crate::rational::{format_rat, parse_rat, Rat};
use num::{Signed, Zero};
use std::fmt;
use thiserror::Error;

/// Bitmask representation caps the item count.
pub const MAX_ITEMS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlayerId {
    X,
    Y,
}

impl PlayerId {
    pub fn other(self) -> PlayerId {
        match self {
            PlayerId::X => PlayerId::Y,
            PlayerId::Y => PlayerId::X,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            PlayerId::X => "X",
            PlayerId::Y => "Y",
        }
    }

    pub fn parse(s: &str) -> Option<PlayerId> {
        match s {
            "X" | "x" => Some(PlayerId::X),
            "Y" | "y" => Some(PlayerId::Y),
            _ => None,
        }
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A tradable good with an owner and a (nonnegative) utility to each player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Item {
    pub name: String,
    pub owner: PlayerId,
    pub value_to_x: Rat,
    pub value_to_y: Rat,
}

impl Item {
    pub fn value_to(&self, player: PlayerId) -> &Rat {
        match player {
            PlayerId::X => &self.value_to_x,
            PlayerId::Y => &self.value_to_y,
        }
    }

    pub fn value_to_mut(&mut self, player: PlayerId) -> &mut Rat {
        match player {
            PlayerId::X => &mut self.value_to_x,
            PlayerId::Y => &mut self.value_to_y,
        }
    }

    /// The owner's own valuation (`iZi` in the dominance condition).
    pub fn own_value(&self) -> &Rat {
        self.value_to(self.owner)
    }

    /// The other player's valuation of this item (`iZj`).
    pub fn cross_value(&self) -> &Rat {
        self.value_to(self.owner.other())
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("instance JSON is not valid: {0}")]
    Json(#[from] serde_json::Error),
    #[error("instance JSON must be an object with an \"items\" array of objects")]
    BadShape,
    #[error("items[{index}]: missing field `{field}`")]
    MissingField { index: usize, field: &'static str },
    #[error("items[{index}] ({name}): unknown owner tag `{got}` (expected \"X\" or \"Y\")")]
    UnknownOwner { index: usize, name: String, got: String },
    #[error("items[{index}] ({name}): malformed {field} `{got}`")]
    MalformedNumber { index: usize, name: String, field: &'static str, got: String },
    #[error("items[{index}] ({name}): negative {field} `{got}`")]
    NegativeUtility { index: usize, name: String, field: &'static str, got: String },
    #[error("items[{index}]: duplicate item name `{name}`")]
    DuplicateName { index: usize, name: String },
    #[error("instance has {got} items; at most {MAX_ITEMS} are supported")]
    TooManyItems { got: usize },
    #[error("exchange references item index {index}, but the instance has {count} items")]
    ItemOutOfRange { index: usize, count: usize },
    #[error("exchange subset for {player} contains item `{name}`, which is owned by {owner}")]
    ForeignItem { player: PlayerId, name: String, owner: PlayerId },
}

/// The complete bargaining situation: every item of both players, in
/// canonical (file) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    items: Vec<Item>,
    x_indices: Vec<usize>,
    y_indices: Vec<usize>,
}

impl Instance {
    pub fn new(items: Vec<Item>) -> Result<Instance, ModelError> {
        if items.len() > MAX_ITEMS {
            return Err(ModelError::TooManyItems { got: items.len() });
        }
        let mut seen = std::collections::HashSet::new();
        for (index, item) in items.iter().enumerate() {
            if !seen.insert(item.name.clone()) {
                return Err(ModelError::DuplicateName { index, name: item.name.clone() });
            }
            for (field, value) in [("value_to_x", &item.value_to_x), ("value_to_y", &item.value_to_y)] {
                if value.is_negative() {
                    return Err(ModelError::NegativeUtility {
                        index,
                        name: item.name.clone(),
                        field,
                        got: format_rat(value),
                    });
                }
            }
        }
        Ok(Instance::from_items_unchecked(items))
    }

    /// Skips the nonnegativity check; translations may produce negative
    /// utilities on purpose.
    pub(crate) fn from_items_unchecked(items: Vec<Item>) -> Instance {
        let x_indices = items
            .iter()
            .enumerate()
            .filter(|(_, it)| it.owner == PlayerId::X)
            .map(|(i, _)| i)
            .collect();
        let y_indices = items
            .iter()
            .enumerate()
            .filter(|(_, it)| it.owner == PlayerId::Y)
            .map(|(i, _)| i)
            .collect();
        Instance { items, x_indices, y_indices }
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    /// Count of items owned by X.
    pub fn p(&self) -> usize {
        self.x_indices.len()
    }

    /// Count of items owned by Y.
    pub fn q(&self) -> usize {
        self.y_indices.len()
    }

    /// Canonical indices of X-owned items.
    pub fn x_indices(&self) -> &[usize] {
        &self.x_indices
    }

    /// Canonical indices of Y-owned items.
    pub fn y_indices(&self) -> &[usize] {
        &self.y_indices
    }

    pub fn indices_of(&self, player: PlayerId) -> &[usize] {
        match player {
            PlayerId::X => &self.x_indices,
            PlayerId::Y => &self.y_indices,
        }
    }

    /// 2^(p+q), the size of the exchange space.
    pub fn total_exchanges(&self) -> u128 {
        1u128 << self.items.len()
    }

    /// Parse and validate an instance file.
    pub fn from_json(text: &str) -> Result<Instance, ModelError> {
        let doc: serde_json::Value = serde_json::from_str(text)?;
        let items_value = doc
            .as_object()
            .and_then(|o| o.get("items"))
            .and_then(|v| v.as_array())
            .ok_or(ModelError::BadShape)?;
        let mut items = Vec::with_capacity(items_value.len());
        for (index, entry) in items_value.iter().enumerate() {
            let obj = entry.as_object().ok_or(ModelError::BadShape)?;
            let name = obj
                .get("name")
                .and_then(|v| v.as_str())
                .ok_or(ModelError::MissingField { index, field: "name" })?
                .to_string();
            let owner_raw = obj
                .get("owner")
                .and_then(|v| v.as_str())
                .ok_or(ModelError::MissingField { index, field: "owner" })?;
            let owner = PlayerId::parse(owner_raw).ok_or_else(|| ModelError::UnknownOwner {
                index,
                name: name.clone(),
                got: owner_raw.to_string(),
            })?;
            let value_to_x = parse_value(obj, index, &name, "value_to_x")?;
            let value_to_y = parse_value(obj, index, &name, "value_to_y")?;
            items.push(Item { name, owner, value_to_x, value_to_y });
        }
        Instance::new(items)
    }

    /// Serialize in the instance-file format; parses back to an equal instance.
    pub fn to_json(&self) -> String {
        let items: Vec<serde_json::Value> = self
            .items
            .iter()
            .map(|it| {
                serde_json::json!({
                    "name": it.name,
                    "owner": it.owner.tag(),
                    "value_to_x": format_rat(&it.value_to_x),
                    "value_to_y": format_rat(&it.value_to_y),
                })
            })
            .collect();
        serde_json::json!({ "items": items }).to_string()
    }

    /// Item names selected by a canonical-order bitmask.
    pub fn mask_names(&self, mask: u64) -> Vec<String> {
        self.items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1u64 << i) != 0)
            .map(|(_, it)| it.name.clone())
            .collect()
    }
}

fn parse_value(
    obj: &serde_json::Map<String, serde_json::Value>,
    index: usize,
    name: &str,
    field: &'static str,
) -> Result<Rat, ModelError> {
    let raw = obj.get(field).ok_or(ModelError::MissingField { index, field })?;
    let text = match raw {
        serde_json::Value::Number(n) => n.to_string(),
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    let value = parse_rat(&text).map_err(|_| ModelError::MalformedNumber {
        index,
        name: name.to_string(),
        field,
        got: text.clone(),
    })?;
    if value.is_negative() {
        return Err(ModelError::NegativeUtility {
            index,
            name: name.to_string(),
            field,
            got: text,
        });
    }
    Ok(value)
}

/// A pair of item subsets crossing between the players, as bitmasks over
/// the canonical item order. Both masks empty is the null exchange.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exchange {
    /// X-owned items passed to Y.
    pub give_x: u64,
    /// Y-owned items passed to X.
    pub give_y: u64,
}

impl Exchange {
    pub const NULL: Exchange = Exchange { give_x: 0, give_y: 0 };

    pub fn is_null(&self) -> bool {
        self.give_x == 0 && self.give_y == 0
    }

    /// Number of items X hands over.
    pub fn given_by_x(&self) -> u32 {
        self.give_x.count_ones()
    }

    pub fn given_by_y(&self) -> u32 {
        self.give_y.count_ones()
    }

    pub fn validate(&self, inst: &Instance) -> Result<(), ModelError> {
        let count = inst.items().len();
        let used = self.give_x | self.give_y;
        if count < 64 && used >> count != 0 {
            let index = (63 - used.leading_zeros()) as usize;
            return Err(ModelError::ItemOutOfRange { index, count });
        }
        for (mask, player) in [(self.give_x, PlayerId::X), (self.give_y, PlayerId::Y)] {
            let mut bits = mask;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let item = &inst.items()[i];
                if item.owner != player {
                    return Err(ModelError::ForeignItem {
                        player,
                        name: item.name.clone(),
                        owner: item.owner,
                    });
                }
            }
        }
        Ok(())
    }
}

/// The (U_x, U_y) marginal-utility pair of an exchange. Ordering is
/// lexicographic on (u_x, u_y), which is the tie-breaking order used for
/// headline answers and for deterministic iteration.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OutcomePoint {
    pub u_x: Rat,
    pub u_y: Rat,
}

impl OutcomePoint {
    pub fn new(u_x: Rat, u_y: Rat) -> OutcomePoint {
        OutcomePoint { u_x, u_y }
    }

    pub fn origin() -> OutcomePoint {
        OutcomePoint { u_x: Rat::zero(), u_y: Rat::zero() }
    }

    /// True iff the exchange strictly improves both players. Axis points
    /// do not count: a player gaining nothing has no reason to trade.
    pub fn is_acceptable(&self) -> bool {
        self.u_x.is_positive() && self.u_y.is_positive()
    }

    pub fn product(&self) -> Rat {
        &self.u_x * &self.u_y
    }

    pub fn sum(&self) -> Rat {
        &self.u_x + &self.u_y
    }
}

impl fmt::Display for OutcomePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rat(&self.u_x), format_rat(&self.u_y))
    }
}

/// Marginal utilities of an exchange: what each side gains minus what it
/// gives up, in that player's own utility function. Exact arithmetic.
pub fn marginal_utilities(inst: &Instance, ex: &Exchange) -> Result<OutcomePoint, ModelError> {
    ex.validate(inst)?;
    Ok(marginal_utilities_unchecked(inst, ex))
}

pub(crate) fn marginal_utilities_unchecked(inst: &Instance, ex: &Exchange) -> OutcomePoint {
    let mut u_x = Rat::zero();
    let mut u_y = Rat::zero();
    let mut bits = ex.give_y;
    while bits != 0 {
        let i = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let item = &inst.items()[i];
        u_x += &item.value_to_x;
        u_y -= &item.value_to_y;
    }
    bits = ex.give_x;
    while bits != 0 {
        let i = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let item = &inst.items()[i];
        u_x -= &item.value_to_x;
        u_y += &item.value_to_y;
    }
    OutcomePoint::new(u_x, u_y)
}

/// Voluntary-trade predicate: strictly positive marginal utility for both.
pub fn acceptable(point: &OutcomePoint) -> bool {
    point.is_acceptable()
}
