use std::fmt;

use serde::Serialize;

use crate::tree::GeometricNode;

/// A concrete counterexample to a regularity clause.
#[derive(Clone, Debug)]
pub struct Witness {
    pub clause: &'static str,
    pub detail: String,
    pub nodes: Vec<GeometricNode>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClauseResult {
    pub clause: String,
    pub ok: bool,
    pub witnesses: Vec<String>,
}

/// Verdicts for the clauses P1', P2', R1', R2', R3' (whichever were checked).
#[derive(Clone, Debug, Default, Serialize)]
pub struct RegularityReport {
    pub clauses: Vec<ClauseResult>,
}

/// Cap on witnesses kept per clause.
const MAX_WITNESSES: usize = 16;

impl RegularityReport {
    pub fn push(&mut self, clause: &str, witnesses: Vec<Witness>) {
        self.clauses.push(ClauseResult {
            clause: clause.to_string(),
            ok: witnesses.is_empty(),
            witnesses: witnesses.into_iter().take(MAX_WITNESSES).map(|w| w.detail).collect(),
        });
    }

    pub fn extend(&mut self, other: RegularityReport) {
        self.clauses.extend(other.clauses);
    }

    pub fn ok(&self) -> bool {
        self.clauses.iter().all(|c| c.ok)
    }

    pub fn clause(&self, name: &str) -> Option<&ClauseResult> {
        self.clauses.iter().find(|c| c.clause == name)
    }

    pub fn failing(&self) -> Vec<&str> {
        self.clauses.iter().filter(|c| !c.ok).map(|c| c.clause.as_str()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

impl fmt::Display for RegularityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            writeln!(f, "{:<4} {}", c.clause, if c.ok { "ok" } else { "VIOLATED" })?;
            for w in &c.witnesses {
                writeln!(f, "     {w}")?;
            }
        }
        Ok(())
    }
}
