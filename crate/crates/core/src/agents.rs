//! Process identifiers and sets of them.

use std::fmt;

/// A process id, also the color of a vertex.
pub type Agent = usize;

/// Largest supported number of processes.
pub const MAX_AGENTS: usize = 32;

/// A subset of `Π = {0..n}` stored as a bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AgentSet(u32);

impl AgentSet {
    pub const EMPTY: AgentSet = AgentSet(0);

    pub fn from_bits(bits: u32) -> Self {
        AgentSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// `Π` for a complex of dimension `n`.
    pub fn full(n: usize) -> Self {
        assert!(n < MAX_AGENTS, "at most {MAX_AGENTS} agents are supported");
        AgentSet(((1u64 << (n + 1)) - 1) as u32)
    }

    pub fn singleton(a: Agent) -> Self {
        assert!(a < MAX_AGENTS);
        AgentSet(1 << a)
    }

    pub fn contains(self, a: Agent) -> bool {
        a < MAX_AGENTS && self.0 & (1 << a) != 0
    }

    pub fn insert(&mut self, a: Agent) {
        assert!(a < MAX_AGENTS);
        self.0 |= 1 << a;
    }

    pub fn with(self, a: Agent) -> Self {
        let mut s = self;
        s.insert(a);
        s
    }

    pub fn union(self, other: Self) -> Self {
        AgentSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        AgentSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        AgentSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset(self, other: Self) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn intersects(self, other: Self) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn max_agent(self) -> Option<Agent> {
        (self.0 != 0).then(|| 31 - self.0.leading_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = Agent> {
        let bits = self.0;
        (0..MAX_AGENTS).filter(move |a| bits & (1 << a) != 0)
    }

    /// All subsets of `self`, in increasing bit-mask order.
    pub fn subsets(self) -> impl Iterator<Item = AgentSet> {
        let mask = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask { None } else { Some((cur.wrapping_sub(mask)) & mask) };
            Some(AgentSet(cur))
        })
    }
}

impl FromIterator<Agent> for AgentSet {
    fn from_iter<I: IntoIterator<Item = Agent>>(iter: I) -> Self {
        let mut s = AgentSet::EMPTY;
        for a in iter {
            s.insert(a);
        }
        s
    }
}

impl fmt::Display for AgentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for AgentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_enumerates_powerset() {
        let s: AgentSet = [0, 2, 3].into_iter().collect();
        let subs: Vec<_> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|t| t.is_subset(s)));
        assert_eq!(AgentSet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn full_and_display() {
        assert_eq!(AgentSet::full(2).to_string(), "{0,1,2}");
        assert_eq!(AgentSet::full(2).len(), 3);
        assert_eq!(AgentSet::full(31).len(), 32);
        assert_eq!(AgentSet::full(2).max_agent(), Some(2));
    }
}
