//! Structured output documents for the command-line interface.
//!
//! Every subcommand wraps its payload in an [`OutputDocument`]: the echoed
//! command, the payload, an optional trace, and the tool version. Field
//! order is fixed by the struct declarations and maps are ordered, so
//! serialization is deterministic; the JSON shapes are documented in
//! `schemas/`.

use serde::{Deserialize, Serialize};

use crate::cdim::CdimResult;
use crate::flags::VarietyExpr;
use crate::motive::MotiveDecomposition;
use crate::parity::IncompressibilityVerdict;
use crate::weyl::CosetSummand;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputDocument<T> {
    pub command: String,
    pub result: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<String>>,
    pub version: String,
}

impl<T: Serialize> OutputDocument<T> {
    pub fn new(command: String, result: T, trace: Option<Vec<String>>) -> Self {
        OutputDocument {
            command,
            result,
            trace,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable payload")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducePayload {
    pub index: u64,
    pub flags: Vec<u64>,
    pub reduced: VarietyExpr,
    pub display: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdimPayload {
    pub index: u64,
    pub flags: Vec<u64>,
    pub p: u64,
    pub char_zero: bool,
    pub cdim: CdimResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylVerification {
    pub n: u64,
    pub brute_force_cosets: u64,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylPayload {
    pub e: u64,
    pub summands: Vec<CosetSummand>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<WeylVerification>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankIdentityPayload {
    pub holds: bool,
    pub total: String,
    /// (degree, lhs coefficient, rhs coefficient), coefficients in decimal.
    pub per_degree: Vec<(u64, String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotivePayload {
    pub e: u64,
    pub decomposition: MotiveDecomposition,
    pub middle_chow: Vec<crate::motive::ChowSummand>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_identity: Option<RankIdentityPayload>,
}

pub type CertifyPayload = IncompressibilityVerdict;
