use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{HermitianForm, PathParams, RelativeSpectrum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaId {
    CtBounds,
    RestrictedConvexity,
    Discriminant,
    EulerBound,
    BoundaryExclusion,
}

impl LemmaId {
    pub const ALL: [LemmaId; 5] = [
        LemmaId::CtBounds,
        LemmaId::RestrictedConvexity,
        LemmaId::Discriminant,
        LemmaId::EulerBound,
        LemmaId::BoundaryExclusion,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LemmaId::CtBounds => "ct-bounds",
            LemmaId::RestrictedConvexity => "restricted-convexity",
            LemmaId::Discriminant => "discriminant",
            LemmaId::EulerBound => "euler-bound",
            LemmaId::BoundaryExclusion => "boundary-exclusion",
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The exact inputs of a sample, enough to replay it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorstSample {
    /// Sample index within the seeded stream; `None` for deterministic stages.
    pub index: Option<usize>,
    pub lambda: [f64; 3],
    pub c: f64,
    pub t: f64,
    pub theta_hat: f64,
    /// Direction as rows of `[re, im]` pairs.
    #[serde(rename = "B", skip_serializing_if = "Option::is_none", default)]
    pub b: Option<[[[f64; 2]; 3]; 3]>,
}

impl WorstSample {
    pub fn new(
        index: Option<usize>,
        lambda: &RelativeSpectrum,
        p: &PathParams,
        b: Option<&HermitianForm>,
    ) -> Self {
        Self {
            index,
            lambda: lambda.values(),
            c: p.c,
            t: p.t,
            theta_hat: p.phase.theta_hat(),
            b: b.map(|b| {
                std::array::from_fn(|i| {
                    std::array::from_fn(|j| {
                        let z = b.entry(i, j);
                        [z.re, z.im]
                    })
                })
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma: LemmaId,
    /// Valid samples actually tested.
    pub count: usize,
    pub requested: usize,
    pub seed: u64,
    /// Smallest normalised slack; the check passes when it is `≥ −tolerance`.
    pub worst_slack: f64,
    pub tolerance: f64,
    pub worst_sample: Option<WorstSample>,
    pub pass: bool,
    pub diagnostics: BTreeMap<String, f64>,
}

impl LemmaReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}
