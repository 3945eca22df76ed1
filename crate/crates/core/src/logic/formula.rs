//! Hash-consed epistemic formulas.
//!
//! A [`Formula`] is a shared pointer into a DAG. Formulas built through
//! one [`FormulaFactory`] are maximally shared: structurally equal
//! subformulas are the same node, so pointer comparison decides
//! equality and memo tables can key on nodes.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::agents::{Agent, AgentSet};

/// `input_a^v`: agent `a` holds input value `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub agent: Agent,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FormulaKind {
    False,
    Atom(Atom),
    Or(Vec<Formula>),
    And(Vec<Formula>),
    Not(Formula),
    Know(Agent, Formula),
    Common(AgentSet, Formula),
    Distributed(AgentSet, Formula),
}

struct Node {
    kind: FormulaKind,
    hash: u64,
}

#[derive(Clone)]
pub struct Formula(Arc<Node>);

impl Formula {
    pub fn kind(&self) -> &FormulaKind {
        &self.0.kind
    }

    pub fn ptr_eq(&self, other: &Formula) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn children(&self) -> &[Formula] {
        match self.kind() {
            FormulaKind::False | FormulaKind::Atom(_) => &[],
            FormulaKind::Or(c) | FormulaKind::And(c) => c,
            FormulaKind::Not(c)
            | FormulaKind::Know(_, c)
            | FormulaKind::Common(_, c)
            | FormulaKind::Distributed(_, c) => std::slice::from_ref(c),
        }
    }

    pub fn is_false(&self) -> bool {
        matches!(self.kind(), FormulaKind::False)
    }

    pub fn is_modal(&self) -> bool {
        matches!(self.kind(), FormulaKind::Know(..) | FormulaKind::Common(..) | FormulaKind::Distributed(..))
    }

    /// Nesting depth; atoms and `false` have depth 0.
    pub fn depth(&self) -> usize {
        let mut memo = HashMap::new();
        depth_memo(self, &mut memo)
    }

    /// Number of distinct DAG nodes reachable from this one.
    pub fn dag_size(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(f) = stack.pop() {
            if seen.insert(f.clone()) {
                stack.extend(f.children().iter().cloned());
            }
        }
        seen.len()
    }

    /// True iff no modal operator occurs under a negation.
    pub fn is_positive(&self) -> bool {
        let mut memo = HashMap::new();
        positive_memo(self, &mut memo)
    }

    /// The largest agent id mentioned anywhere in the formula.
    pub fn max_agent(&self) -> Option<Agent> {
        let mut best: Option<Agent> = None;
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(f) = stack.pop() {
            if !seen.insert(f.clone()) {
                continue;
            }
            let here = match f.kind() {
                FormulaKind::Atom(a) => Some(a.agent),
                FormulaKind::Know(a, _) => Some(*a),
                FormulaKind::Common(s, _) | FormulaKind::Distributed(s, _) => s.max_agent(),
                _ => None,
            };
            best = best.max(here);
            stack.extend(f.children().iter().cloned());
        }
        best
    }
}

fn depth_memo(f: &Formula, memo: &mut HashMap<Formula, usize>) -> usize {
    if let Some(&d) = memo.get(f) {
        return d;
    }
    let d = f.children().iter().map(|c| depth_memo(c, memo) + 1).max().unwrap_or(0);
    memo.insert(f.clone(), d);
    d
}

fn has_modal(f: &Formula, memo: &mut HashMap<Formula, (bool, bool)>) -> bool {
    positive_memo(f, memo);
    memo[f].1
}

// (positive, contains a modal operator)
fn positive_memo(f: &Formula, memo: &mut HashMap<Formula, (bool, bool)>) -> bool {
    if let Some(&(p, _)) = memo.get(f) {
        return p;
    }
    let mut positive = true;
    let mut modal = f.is_modal();
    for c in f.children() {
        positive &= positive_memo(c, memo);
        modal |= memo[c].1;
    }
    if let FormulaKind::Not(c) = f.kind() {
        if has_modal(c, memo) {
            positive = false;
        }
    }
    memo.insert(f.clone(), (positive, modal));
    positive
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        self.ptr_eq(other) || (self.0.hash == other.0.hash && self.0.kind == other.0.kind)
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

/// Interning table for formula nodes.
#[derive(Default)]
pub struct FormulaFactory {
    table: HashMap<FormulaKind, Formula>,
}

impl FormulaFactory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn intern(&mut self, kind: FormulaKind) -> Formula {
        if let Some(f) = self.table.get(&kind) {
            return f.clone();
        }
        let mut h = DefaultHasher::new();
        kind.hash(&mut h);
        let f = Formula(Arc::new(Node { kind: kind.clone(), hash: h.finish() }));
        self.table.insert(kind, f.clone());
        f
    }

    pub fn falsum(&mut self) -> Formula {
        self.intern(FormulaKind::False)
    }

    /// `¬false`.
    pub fn truth(&mut self) -> Formula {
        let f = self.falsum();
        self.not(f)
    }

    pub fn atom(&mut self, agent: Agent, value: i64) -> Formula {
        self.intern(FormulaKind::Atom(Atom { agent, value }))
    }

    /// Disjunction; the empty disjunction is `false` and a singleton is
    /// its only member.
    pub fn or(&mut self, mut children: Vec<Formula>) -> Formula {
        match children.len() {
            0 => self.falsum(),
            1 => children.pop().unwrap(),
            _ => self.intern(FormulaKind::Or(children)),
        }
    }

    /// Conjunction; the empty conjunction is `¬false`.
    pub fn and(&mut self, mut children: Vec<Formula>) -> Formula {
        match children.len() {
            0 => self.truth(),
            1 => children.pop().unwrap(),
            _ => self.intern(FormulaKind::And(children)),
        }
    }

    pub fn not(&mut self, f: Formula) -> Formula {
        self.intern(FormulaKind::Not(f))
    }

    pub fn know(&mut self, a: Agent, f: Formula) -> Formula {
        self.intern(FormulaKind::Know(a, f))
    }

    pub fn common(&mut self, group: AgentSet, f: Formula) -> Formula {
        self.intern(FormulaKind::Common(group, f))
    }

    pub fn distributed(&mut self, group: AgentSet, f: Formula) -> Formula {
        self.intern(FormulaKind::Distributed(group, f))
    }

    /// `∨_{a ∈ agents} input_a^v`: some agent holds `v`.
    pub fn someone_holds(&mut self, agents: AgentSet, v: i64) -> Formula {
        let atoms = agents.iter().map(|a| self.atom(a, v)).collect();
        self.or(atoms)
    }

    /// `∧_a input_a^{v_a}`, pinning an input assignment.
    pub fn pin_inputs(&mut self, values: &[i64]) -> Formula {
        let atoms = values.iter().enumerate().map(|(a, &v)| self.atom(a, v)).collect();
        self.and(atoms)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        render(self, f)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        render(self, f)
    }
}

fn is_binary(f: &Formula) -> bool {
    matches!(f.kind(), FormulaKind::Or(_) | FormulaKind::And(_))
}

fn render_operand(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if is_binary(f) {
        write!(out, "(")?;
        render(f, out)?;
        write!(out, ")")
    } else {
        render(f, out)
    }
}

fn render(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match f.kind() {
        FormulaKind::False => write!(out, "false"),
        FormulaKind::Atom(a) => write!(out, "input({},{})", a.agent, a.value),
        FormulaKind::Not(c) => {
            write!(out, "!")?;
            render_operand(c, out)
        }
        FormulaKind::Know(a, c) => {
            write!(out, "K[{a}] ")?;
            render_operand(c, out)
        }
        FormulaKind::Common(s, c) => {
            write!(out, "C[{s}] ")?;
            render_operand(c, out)
        }
        FormulaKind::Distributed(s, c) => {
            write!(out, "D[{s}] ")?;
            render_operand(c, out)
        }
        FormulaKind::Or(cs) | FormulaKind::And(cs) => {
            let sep = if matches!(f.kind(), FormulaKind::Or(_)) { " | " } else { " & " };
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    write!(out, "{sep}")?;
                }
                render_operand(c, out)?;
            }
            Ok(())
        }
    }
}
