//! Seeded random generation of formulas, finite models and omega models.
//!
//! Formulas: a node is a leaf with probability growing with depth, and is
//! certainly a leaf at `max_depth`. Inner nodes draw connectives with the
//! weights `&` 3, `/\` 3, `->` 4, `~` 1, `\/` 1, `forall` 2, `exists` 2
//! (quantifiers and `exists` only when enabled). Leaves are atoms with
//! weight 6 and `bot` with weight 1.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::chain::ChainSpec;
use crate::finite_model::{default_domain, FiniteModel, ModelError};
use crate::formula::Formula;
use crate::omega::{EventualSeq, OmegaModel, TailExpr};
use crate::rational::Rational;

/// Shape of generated formulas.
#[derive(Debug, Clone)]
pub struct FormulaShape {
    pub max_depth: usize,
    /// 0-ary atoms.
    pub props: Vec<String>,
    /// Monadic predicates.
    pub monadic: Vec<String>,
    /// Binary predicates (ignored in single-variable mode).
    pub binary: Vec<String>,
    /// Variables; quantifiers bind these.
    pub vars: Vec<String>,
    pub quantifiers: bool,
    pub exists: bool,
    /// Produce only closed formulas.
    pub closed: bool,
    /// Atoms only mention the innermost bound variable, so every quantified
    /// body has at most that variable free (the shape omega evaluation handles).
    pub single_variable: bool,
}

impl FormulaShape {
    /// Closed monadic formulas over `P`, `Q` and `q`.
    pub fn monadic(max_depth: usize) -> FormulaShape {
        FormulaShape {
            max_depth,
            props: vec!["q".into()],
            monadic: vec!["P".into(), "Q".into()],
            binary: Vec::new(),
            vars: vec!["x".into(), "y".into()],
            quantifiers: true,
            exists: true,
            closed: true,
            single_variable: true,
        }
    }

    /// Quantifier-free formulas over `p0..p{atoms-1}`.
    pub fn propositional(max_depth: usize, atoms: usize) -> FormulaShape {
        FormulaShape {
            max_depth,
            props: (0..atoms).map(|i| format!("p{i}")).collect(),
            monadic: Vec::new(),
            binary: Vec::new(),
            vars: Vec::new(),
            quantifiers: false,
            exists: false,
            closed: true,
            single_variable: false,
        }
    }

    /// Anything the grammar allows: free variables, binary predicates.
    pub fn open(max_depth: usize) -> FormulaShape {
        FormulaShape {
            max_depth,
            props: vec!["p".into(), "q".into()],
            monadic: vec!["P".into(), "Q".into()],
            binary: vec!["R".into()],
            vars: vec!["x".into(), "y".into(), "z".into()],
            quantifiers: true,
            exists: true,
            closed: false,
            single_variable: false,
        }
    }

    pub fn without_exists(mut self) -> FormulaShape {
        self.exists = false;
        self
    }

    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R) -> Formula {
        let mut scope = Vec::new();
        self.node(rng, 0, &mut scope)
    }

    fn node<R: Rng + ?Sized>(&self, rng: &mut R, depth: usize, scope: &mut Vec<String>) -> Formula {
        let leaf_chance = (depth as f64 + 1.0) / (self.max_depth as f64 + 1.0);
        if depth >= self.max_depth || rng.gen_bool(leaf_chance.min(1.0) * 0.6) {
            return self.leaf(rng, scope);
        }
        let quant = self.quantifiers && !self.vars.is_empty();
        let mut choices: Vec<(u8, u32)> = vec![(0, 3), (1, 3), (2, 4), (3, 1), (4, 1)];
        if quant {
            choices.push((5, 2));
            if self.exists {
                choices.push((6, 2));
            }
        }
        let total: u32 = choices.iter().map(|c| c.1).sum();
        let mut pick = rng.gen_range(0..total);
        let kind = choices
            .iter()
            .find(|(_, w)| {
                if pick < *w {
                    true
                } else {
                    pick -= w;
                    false
                }
            })
            .map(|c| c.0)
            .expect("weights cover the range");
        let d = depth + 1;
        match kind {
            0 => Formula::strong(self.node(rng, d, scope), self.node(rng, d, scope)),
            1 => Formula::and(self.node(rng, d, scope), self.node(rng, d, scope)),
            2 => Formula::implies(self.node(rng, d, scope), self.node(rng, d, scope)),
            3 => Formula::not(self.node(rng, d, scope)),
            4 => Formula::or(self.node(rng, d, scope), self.node(rng, d, scope)),
            _ => {
                let x = self.vars.choose(rng).expect("non-empty").clone();
                scope.push(x.clone());
                let body = self.node(rng, d, scope);
                scope.pop();
                if kind == 5 {
                    Formula::forall(x, body)
                } else {
                    Formula::exists(x, body)
                }
            }
        }
    }

    fn leaf<R: Rng + ?Sized>(&self, rng: &mut R, scope: &[String]) -> Formula {
        if rng.gen_ratio(1, 7) {
            return Formula::Bottom;
        }
        let visible: Vec<&String> = if self.single_variable {
            scope.last().into_iter().collect()
        } else if self.closed {
            scope.iter().collect::<BTreeSet<_>>().into_iter().collect()
        } else {
            self.vars.iter().collect()
        };
        let mut kinds = Vec::new();
        if !self.props.is_empty() {
            kinds.push(0);
        }
        if !visible.is_empty() && !self.monadic.is_empty() {
            kinds.push(1);
            kinds.push(1);
        }
        if !visible.is_empty() && !self.binary.is_empty() && !self.single_variable {
            kinds.push(2);
        }
        match kinds.choose(rng) {
            None => Formula::Bottom,
            Some(0) => Formula::prop(self.props.choose(rng).expect("non-empty").clone()),
            Some(1) => {
                let p = self.monadic.choose(rng).expect("non-empty");
                let x = visible.choose(rng).expect("non-empty");
                Formula::atom(p.clone(), &[x.as_str()])
            }
            Some(_) => {
                let p = self.binary.choose(rng).expect("non-empty");
                let x = visible.choose(rng).expect("non-empty");
                let y = visible.choose(rng).expect("non-empty");
                Formula::atom(p.clone(), &[x.as_str(), y.as_str()])
            }
        }
    }
}

/// A finite model interpreting `signature`, values drawn with `chain.sample`.
pub fn random_model<R: Rng + ?Sized>(
    rng: &mut R,
    chain: &ChainSpec,
    domain_size: usize,
    signature: &BTreeMap<String, usize>,
    spread: u32,
) -> Result<FiniteModel, ModelError> {
    let sig: Vec<(String, usize)> = signature.iter().map(|(p, k)| (p.clone(), *k)).collect();
    FiniteModel::from_fn(chain.clone(), default_domain(domain_size), &sig, |_, _| {
        chain.sample(rng, spread)
    })
}

/// A random sequence whose tail provably stays inside `chain`.
pub fn random_sequence<R: Rng + ?Sized>(rng: &mut R, chain: &ChainSpec) -> EventualSeq {
    loop {
        let tail = random_tail(rng, chain);
        let exceptions: BTreeMap<u64, Rational> = (0..rng.gen_range(0..4))
            .map(|_| (rng.gen_range(0..8u64), chain.sample(rng, 10)))
            .collect();
        let s = EventualSeq::new(tail, exceptions);
        if s.membership_error(chain).is_none() {
            return s;
        }
    }
}

fn random_tail<R: Rng + ?Sized>(rng: &mut R, chain: &ChainSpec) -> TailExpr {
    use ChainSpec::*;
    if chain.is_finite() || rng.gen_ratio(1, 5) {
        return TailExpr::constant(chain.sample(rng, 10));
    }
    let m = rng.gen_range(1..=4i64);
    let shift = rng.gen_range(0..4u64);
    let down = rng.gen_bool(0.5);
    let half = Rational::half();
    match chain {
        NmInf | NmInfMinus => {
            if down {
                TailExpr::new(Rational::zero(), Rational::new(1, m), shift)
            } else {
                TailExpr::new(Rational::one(), Rational::new(-1, m), shift)
            }
        }
        NmPrimeInf | NmPrimeInfMinus => {
            let c = Rational::new(if down { 1 } else { -1 }, 2 * m);
            TailExpr::new(half, c, shift)
        }
        GUp => TailExpr::new(Rational::one(), Rational::new(-1, m), shift),
        GDown => TailExpr::new(Rational::zero(), Rational::new(1, m), shift),
        StdNm | StdG | Aalpha(_) => {
            let base = chain.sample(rng, 8);
            let c = Rational::new(if down { 1 } else { -1 }, 2 * m);
            TailExpr::new(base, c, shift)
        }
        NmFin(_) | GFin(_) => unreachable!("finite chains get constant tails"),
    }
}

/// An omega model interpreting the given monadic and 0-ary predicates.
pub fn random_omega_model<R: Rng + ?Sized>(
    rng: &mut R,
    chain: &ChainSpec,
    monadic: &[&str],
    zeroary: &[&str],
) -> OmegaModel {
    let mut m = OmegaModel::new(chain.clone());
    for p in monadic {
        m.set_monadic(p, random_sequence(rng, chain))
            .expect("generated sequences are members");
    }
    for p in zeroary {
        m.set_zeroary(p, chain.sample(rng, 10))
            .expect("sampled values are members");
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generation_is_reproducible() {
        let shape = FormulaShape::open(6);
        let a: Vec<Formula> = {
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            (0..50).map(|_| shape.generate(&mut rng)).collect()
        };
        let b: Vec<Formula> = {
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            (0..50).map(|_| shape.generate(&mut rng)).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn shapes_are_respected() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mono = FormulaShape::monadic(5).without_exists();
        for _ in 0..300 {
            let f = mono.generate(&mut rng);
            assert!(f.is_closed(), "{f}");
            assert!(!f.has_exists(), "{f}");
            assert!(f.signature().unwrap().values().all(|k| *k <= 1));
        }
        let prop = FormulaShape::propositional(6, 3);
        for _ in 0..300 {
            let f = prop.generate(&mut rng);
            assert!(f.is_propositional());
            assert!(f.depth() <= 6 * 4, "{f}");
        }
        let open = FormulaShape::open(8);
        let mut saw_free = false;
        for _ in 0..300 {
            let f = open.generate(&mut rng);
            saw_free |= !f.is_closed();
            assert!(f.signature().is_ok());
        }
        assert!(saw_free);
    }

    #[test]
    fn random_models_are_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let sig: BTreeMap<String, usize> = [("P".into(), 1), ("R".into(), 2), ("q".into(), 0)].into();
        for chain in [ChainSpec::NmFin(4), ChainSpec::NmInf, ChainSpec::StdNm, ChainSpec::GUp] {
            let m = random_model(&mut rng, &chain, 3, &sig, 9).unwrap();
            assert!(m.atomic_values().all(|v| chain.mem(v)));
            assert_eq!(m.atomic_values().count(), 3 + 9 + 1);
        }
        for chain in [
            ChainSpec::NmInf,
            ChainSpec::NmInfMinus,
            ChainSpec::NmPrimeInf,
            ChainSpec::NmPrimeInfMinus,
            ChainSpec::StdNm,
            ChainSpec::a_alpha(Rational::new(3, 4)).unwrap(),
            ChainSpec::GDown,
            ChainSpec::NmFin(5),
        ] {
            for _ in 0..20 {
                let m = random_omega_model(&mut rng, &chain, &["P", "Q"], &["q"]);
                assert!(m.validate().is_ok());
            }
        }
    }
}
