//! Superset-closed adversaries, stored by their minimal survivor sets.

use serde::{Deserialize, Serialize};

use crate::agents::AgentSet;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Adversary {
    n: usize,
    survivors: Vec<AgentSet>,
}

/// Adversary file: `{"n": 2, "survivor_sets": [[0,1],[1,2]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversaryJson {
    pub n: usize,
    pub survivor_sets: Vec<Vec<usize>>,
}

impl Adversary {
    /// Normalizes `sets` to the antichain of its minimal members.
    pub fn from_survivor_sets(n: usize, sets: &[AgentSet]) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::NoSurvivorSets);
        }
        let full = AgentSet::full(n);
        for &s in sets {
            if s.is_empty() {
                return Err(Error::EmptySurvivorSet);
            }
            if !s.is_subset(full) {
                let agent = s.difference(full).iter().next().unwrap_or_default();
                return Err(Error::AgentOutOfRange { agent, n });
            }
        }
        let mut survivors: Vec<AgentSet> =
            sets.iter().copied().filter(|&s| !sets.iter().any(|&t| t.is_proper_subset(s))).collect();
        survivors.sort_by_key(|s| (s.len(), s.iter().collect::<Vec<_>>()));
        survivors.dedup();
        Ok(Adversary { n, survivors })
    }

    /// Survivor sets `{{a} | a ∈ Π}`.
    pub fn wait_free(n: usize) -> Self {
        let sets: Vec<AgentSet> = (0..=n).map(AgentSet::singleton).collect();
        Self::from_survivor_sets(n, &sets).expect("singletons are a valid antichain")
    }

    /// Survivor sets are all `t`-subsets of `Π`.
    pub fn threshold(n: usize, t: usize) -> Result<Self> {
        let sets: Vec<AgentSet> = AgentSet::full(n).subsets().filter(|s| s.len() == t).collect();
        Self::from_survivor_sets(n, &sets)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn survivor_sets(&self) -> &[AgentSet] {
        &self.survivors
    }

    /// `P ∈ 𝒜` iff some survivor set is contained in `P`.
    pub fn contains(&self, p: AgentSet) -> bool {
        self.survivors.iter().any(|s| s.is_subset(p))
    }

    /// Every member of the adversary, in mask order.
    pub fn members(&self) -> Vec<AgentSet> {
        AgentSet::full(self.n).subsets().filter(|&p| self.contains(p)).collect()
    }

    /// Minimal sets hitting every survivor set, by ascending cardinality.
    pub fn cores(&self) -> Vec<AgentSet> {
        let mut by_size: Vec<AgentSet> = AgentSet::full(self.n).subsets().collect();
        by_size.sort_by_key(|s| (s.len(), s.iter().collect::<Vec<_>>()));
        let mut cores: Vec<AgentSet> = Vec::new();
        for c in by_size {
            if cores.iter().any(|k| k.is_subset(c)) {
                continue;
            }
            if self.survivors.iter().all(|s| s.intersects(c)) {
                cores.push(c);
            }
        }
        cores
    }

    /// Minimum core size.
    pub fn csize(&self) -> usize {
        self.cores().iter().map(|c| c.len()).min().expect("Π is always a hitting set")
    }

    pub fn to_json(&self) -> AdversaryJson {
        AdversaryJson { n: self.n, survivor_sets: self.survivors.iter().map(|s| s.iter().collect()).collect() }
    }

    pub fn from_json(json: &AdversaryJson) -> Result<Self> {
        let sets: Vec<AgentSet> = json
            .survivor_sets
            .iter()
            .map(|s| {
                s.iter()
                    .map(|&a| if a > json.n { Err(Error::AgentOutOfRange { agent: a, n: json.n }) } else { Ok(a) })
                    .collect::<Result<AgentSet>>()
            })
            .collect::<Result<_>>()?;
        Self::from_survivor_sets(json.n, &sets)
    }
}
