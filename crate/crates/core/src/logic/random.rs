//! Seeded random formulas for property checks.

use rand::Rng;

use super::formula::{Formula, FormulaFactory};
use crate::agents::AgentSet;

/// Draws a positive formula of depth at most `depth` over agents `0..=n`
/// and the given input values. Negation is applied only to modal-free
/// subformulas.
pub fn random_positive<R: Rng>(
    rng: &mut R,
    factory: &mut FormulaFactory,
    depth: usize,
    n: usize,
    values: &[i64],
) -> Formula {
    assert!(!values.is_empty());
    if depth == 0 {
        return leaf(rng, factory, n, values);
    }
    match rng.gen_range(0..8) {
        0 => leaf(rng, factory, n, values),
        1 => {
            let body = random_propositional(rng, factory, depth - 1, n, values);
            factory.not(body)
        }
        2 | 3 => {
            let k = rng.gen_range(2..=3);
            let cs = (0..k).map(|_| random_positive(rng, factory, depth - 1, n, values)).collect();
            if rng.gen_bool(0.5) {
                factory.or(cs)
            } else {
                factory.and(cs)
            }
        }
        4 | 5 => {
            let a = rng.gen_range(0..=n);
            let body = random_positive(rng, factory, depth - 1, n, values);
            factory.know(a, body)
        }
        6 => {
            let g = nonempty_group(rng, n);
            let body = random_positive(rng, factory, depth - 1, n, values);
            factory.common(g, body)
        }
        _ => {
            let g = nonempty_group(rng, n);
            let body = random_positive(rng, factory, depth - 1, n, values);
            factory.distributed(g, body)
        }
    }
}

/// Modal-free formula of depth at most `depth`.
pub fn random_propositional<R: Rng>(
    rng: &mut R,
    factory: &mut FormulaFactory,
    depth: usize,
    n: usize,
    values: &[i64],
) -> Formula {
    if depth == 0 {
        return leaf(rng, factory, n, values);
    }
    match rng.gen_range(0..4) {
        0 => leaf(rng, factory, n, values),
        1 => {
            let body = random_propositional(rng, factory, depth - 1, n, values);
            factory.not(body)
        }
        _ => {
            let cs = (0..2).map(|_| random_propositional(rng, factory, depth - 1, n, values)).collect();
            if rng.gen_bool(0.5) {
                factory.or(cs)
            } else {
                factory.and(cs)
            }
        }
    }
}

fn leaf<R: Rng>(rng: &mut R, factory: &mut FormulaFactory, n: usize, values: &[i64]) -> Formula {
    if rng.gen_ratio(1, 20) {
        return factory.falsum();
    }
    let a = rng.gen_range(0..=n);
    let v = values[rng.gen_range(0..values.len())];
    factory.atom(a, v)
}

fn nonempty_group<R: Rng>(rng: &mut R, n: usize) -> AgentSet {
    let full = AgentSet::full(n).bits();
    AgentSet::from_bits(rng.gen_range(1..=full))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_formulas_are_positive_and_shallow() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut f = FormulaFactory::new();
        for _ in 0..500 {
            let phi = random_positive(&mut rng, &mut f, 3, 2, &[0, 1]);
            assert!(phi.is_positive(), "{phi}");
            assert!(phi.depth() <= 3, "{phi}");
        }
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let gen = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut f = FormulaFactory::new();
            (0..20).map(|_| random_positive(&mut rng, &mut f, 3, 2, &[0, 1]).to_string()).collect::<Vec<_>>()
        };
        assert_eq!(gen(0), gen(0));
        assert_ne!(gen(0), gen(1));
    }
}
