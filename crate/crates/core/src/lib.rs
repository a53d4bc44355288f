//! Exact computations with the finite matrix groups `GL2` and `GU2` over
//! truncated discrete valuation rings: enumeration, conjugacy classes,
//! canonical class representatives, real and strongly real classes,
//! involution counts, modular (Dixon-style) character tables,
//! Frobenius-Schur indicators and tangibility of regular characters.
//!
//! Everything is exact: ring arithmetic is carried out on canonical digit
//! data, character values live in a prime field `F_m` with `m = 1 (mod
//! exponent(G))`, and every counting formula is checked against brute
//! force at desk scale.

pub mod cache;
pub mod census;
pub mod chartab;
pub mod classify;
pub mod cli;
pub mod matgroups;
pub mod modlin;
pub mod reality;
pub mod rings;
pub mod verify;

use serde::{Deserialize, Serialize};

/// Errors produced by the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid ring parameters: {0}")]
    InvalidRing(String),
    #[error("element does not belong to this ring")]
    RingMismatch,
    #[error("inverse of a non-unit")]
    NonUnit,
    #[error("projection level {target} exceeds ring level {level}")]
    BadProjection { target: u32, level: u32 },
    #[error("operation requires the quadratic extension ring")]
    NotExtended,
    #[error("operation requires the base ring")]
    NotBase,
    #[error("matrix is not invertible over the ring")]
    SingularMatrix,
    #[error("enumeration of order {required} exceeds budget {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("group order mismatch: enumerated {found}, formula gives {expected}")]
    OrderMismatch { found: u64, expected: u128 },
    #[error("classification failure: {0}")]
    Classification(String),
    #[error("character table: {0}")]
    CharTable(String),
    #[error("falsified: {0}")]
    Falsified(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// One checked integer identity: a counting statement evaluated on both
/// the closed-form side and the computed side.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Claim {
    pub id: String,
    /// Human-readable statement of the identity being checked.
    #[serde(rename = "paperRef")]
    pub statement: String,
    pub expected: i128,
    pub computed: i128,
    pub pass: bool,
}

impl Claim {
    pub fn new(id: &str, statement: &str, expected: i128, computed: i128) -> Self {
        Claim {
            id: id.to_string(),
            statement: statement.to_string(),
            expected,
            computed,
            pass: expected == computed,
        }
    }

    pub fn pass(&self) -> bool {
        self.pass
    }
}

/// Render claims as aligned `PASS`/`FAIL` lines.
pub fn format_claims(claims: &[Claim]) -> String {
    let mut out = String::new();
    for c in claims {
        out.push_str(&format!(
            "{} {:·<52} expected {:>8}  computed {:>8}\n",
            if c.pass() { "PASS" } else { "FAIL" },
            format!("{} ", c.id),
            c.expected,
            c.computed
        ));
    }
    out
}

pub(crate) fn pow_u128(base: u128, exp: u32) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc *= base;
    }
    acc
}
