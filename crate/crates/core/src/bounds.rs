//! Inequalities checked by a construction, with both sides as computed.

use std::fmt::Display;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

impl BoundCheck {
    /// `lhs <= rhs`.
    pub fn at_most<T: PartialOrd + Display>(name: &str, lhs: T, rhs: T) -> Self {
        BoundCheck {
            name: name.to_string(),
            holds: lhs <= rhs,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        }
    }

    /// `lhs < rhs`.
    pub fn below<T: PartialOrd + Display>(name: &str, lhs: T, rhs: T) -> Self {
        BoundCheck {
            name: name.to_string(),
            holds: lhs < rhs,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        }
    }
}

pub fn all_hold(bounds: &[BoundCheck]) -> bool {
    bounds.iter().all(|b| b.holds)
}
