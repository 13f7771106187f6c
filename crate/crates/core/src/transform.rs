//! Constructions between chains and models: rotation of Gödel chains, the
//! squaring translation, cut models, positive collapse, finite rehousing and
//! explicit embeddings of finite NM chains.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::chain::{ChainError, ChainSpec};
use crate::finite_model::{FiniteModel, ModelError};
use crate::formula::Formula;
use crate::omega::{OmegaError, OmegaModel, PointOp};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("`{0}` cannot be rotated: only finite Gödel chains, g-up and g-down can")]
    NotRotatable(ChainSpec),
    #[error("`{0}` is not an NM chain")]
    NotNm(ChainSpec),
    #[error("cut parameter {alpha} must lie strictly between 0 and 1 in {chain}")]
    AlphaRange { chain: ChainSpec, alpha: Rational },
    #[error("{source_chain} does not embed into {target}: {reason}")]
    NoEmbedding {
        source_chain: ChainSpec,
        target: ChainSpec,
        reason: &'static str,
    },
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Omega(#[from] OmegaError),
}

/// Result of rotating a Gödel chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rotation {
    pub chain: ChainSpec,
    /// Nonzero Gödel elements to the positive elements they become; finite sources only.
    pub correspondence: Option<Vec<(Rational, Rational)>>,
}

pub fn rotate(g: &ChainSpec, with_fixpoint: bool) -> Result<Rotation, TransformError> {
    let chain = match (g, with_fixpoint) {
        (ChainSpec::GFin(n), true) => ChainSpec::nm_fin(2 * n - 1)?,
        (ChainSpec::GFin(n), false) => ChainSpec::nm_fin(2 * n - 2)?,
        (ChainSpec::GUp, true) => ChainSpec::NmInf,
        (ChainSpec::GUp, false) => ChainSpec::NmInfMinus,
        (ChainSpec::GDown, true) => ChainSpec::NmPrimeInf,
        (ChainSpec::GDown, false) => ChainSpec::NmPrimeInfMinus,
        _ => return Err(TransformError::NotRotatable(g.clone())),
    };
    let correspondence = match g.enumerate() {
        Ok(elems) => Some(
            elems
                .into_iter()
                .filter(|a| !a.is_zero())
                .map(|a| {
                    let b = rotate_value(g, with_fixpoint, &a)?;
                    Ok((a, b))
                })
                .collect::<Result<_, TransformError>>()?,
        ),
        Err(_) => None,
    };
    Ok(Rotation {
        chain,
        correspondence,
    })
}

/// Image of a Gödel element in the rotated chain: `0` stays `0`, everything
/// else lands on the corresponding positive element.
pub fn rotate_value(
    g: &ChainSpec,
    with_fixpoint: bool,
    a: &Rational,
) -> Result<Rational, TransformError> {
    g.check(a)?;
    if a.is_zero() {
        return Ok(Rational::zero());
    }
    let one = Rational::one();
    Ok(match (g, with_fixpoint) {
        (ChainSpec::GFin(n), false) => {
            // i/(n-1) -> (n-2+i)/(2n-3)
            let n = i64::from(*n);
            let i = a * Rational::from_integer(n - 1);
            (Rational::from_integer(n - 2) + i) / Rational::from_integer(2 * n - 3)
        }
        (ChainSpec::GFin(_) | ChainSpec::GDown, _) => (&one + a) / Rational::from_integer(2),
        (ChainSpec::GUp, _) => (Rational::from_integer(2) - a).recip(),
        _ => return Err(TransformError::NotRotatable(g.clone())),
    })
}

/// The squaring translation; `exists` is first rewritten as `~forall~`.
pub fn star(f: &Formula) -> Formula {
    star_rec(&f.eliminate_exists())
}

fn star_rec(f: &Formula) -> Formula {
    match f {
        Formula::Atom { .. } => Formula::square(f.clone()),
        Formula::Bottom => Formula::Bottom,
        Formula::And(a, b) => Formula::and(star_rec(a), star_rec(b)),
        Formula::Strong(a, b) => Formula::strong(star_rec(a), star_rec(b)),
        Formula::Implies(a, b) => Formula::square(Formula::implies(star_rec(a), star_rec(b))),
        Formula::Forall(x, body) => Formula::square(Formula::forall(x.clone(), star_rec(body))),
        Formula::Exists(..) => unreachable!("exists is eliminated first"),
    }
}

/// `|alpha| = max(alpha, 1 - alpha)`.
pub fn cut_height(alpha: &Rational) -> Rational {
    alpha.max_ref(&alpha.complement()).clone()
}

/// The cut map on a single value.
pub fn cut_value(alpha: &Rational, v: &Rational) -> Rational {
    let h = cut_height(alpha);
    if *v > h {
        Rational::one()
    } else if *v < h.complement() {
        Rational::zero()
    } else {
        v.clone()
    }
}

/// Keeps positive values and sends the rest to 0.
pub fn collapse_value(v: &Rational) -> Rational {
    if *v > v.complement() {
        v.clone()
    } else {
        Rational::zero()
    }
}

/// Models whose atomic values can be rewritten pointwise.
pub trait AtomicMap: Sized {
    fn chain(&self) -> &ChainSpec;
    fn map_atoms(&self, op: &PointOp) -> Result<Self, TransformError>;
}

impl AtomicMap for FiniteModel {
    fn chain(&self) -> &ChainSpec {
        FiniteModel::chain(self)
    }

    fn map_atoms(&self, op: &PointOp) -> Result<FiniteModel, TransformError> {
        let chain = self.chain().clone();
        let f = |v: &Rational| match op {
            PointOp::Cut(h) => cut_value(h, v),
            PointOp::Collapse => collapse_value(v),
            _ => crate::omega::scalar_apply(&chain, op, v, v),
        };
        Ok(self.map_values(chain.clone(), f)?)
    }
}

impl AtomicMap for OmegaModel {
    fn chain(&self) -> &ChainSpec {
        OmegaModel::chain(self)
    }

    fn map_atoms(&self, op: &PointOp) -> Result<OmegaModel, TransformError> {
        Ok(self.map_values(self.chain().clone(), op)?)
    }
}

/// The cut model: atomic values above `|alpha|` become 1, below `1 - |alpha|` become 0.
pub fn cut_model<M: AtomicMap>(m: &M, alpha: &Rational) -> Result<M, TransformError> {
    let chain = m.chain();
    if !chain.is_nm() {
        return Err(TransformError::NotNm(chain.clone()));
    }
    if !alpha.is_positive() || *alpha >= Rational::one() || !chain.mem(alpha) {
        return Err(TransformError::AlphaRange {
            chain: chain.clone(),
            alpha: alpha.clone(),
        });
    }
    m.map_atoms(&PointOp::Cut(cut_height(alpha)))
}

/// The positive collapse: non-positive atomic values (the fixpoint included) become 0.
pub fn positive_collapse<M: AtomicMap>(m: &M) -> Result<M, TransformError> {
    if !m.chain().is_nm() {
        return Err(TransformError::NotNm(m.chain().clone()));
    }
    m.map_atoms(&PointOp::Collapse)
}

/// Moves a finite NM model onto a finite chain.
///
/// The atomic values, their complements, 0 and 1 form a finite set closed
/// under every NM operation, so ranking it is an isomorphism onto an
/// `NmFin` chain. Returns the model and the value map.
pub fn rehouse(m: &FiniteModel) -> Result<(FiniteModel, BTreeMap<Rational, Rational>), TransformError> {
    let chain = m.chain();
    if !chain.is_nm() {
        return Err(TransformError::NotNm(chain.clone()));
    }
    let mut set: BTreeSet<Rational> = [Rational::zero(), Rational::one()].into();
    for v in m.atomic_values() {
        set.insert(v.clone());
        set.insert(v.complement());
    }
    let size = u32::try_from(set.len()).expect("finite model");
    let target = ChainSpec::nm_fin(size)?;
    let d = i64::from(size - 1);
    let map: BTreeMap<Rational, Rational> = set
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v, Rational::new(i as i64, d)))
        .collect();
    let out = m.map_values(target, |v| map[v].clone())?;
    Ok((out, map))
}

/// An explicit map from a finite NM chain into another NM chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainEmbedding {
    pub source: ChainSpec,
    pub target: ChainSpec,
    pub map: Vec<(Rational, Rational)>,
}

/// Why a map is not a complete embedding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingDefect {
    pub property: String,
    pub x: Rational,
    pub y: Option<Rational>,
}

impl std::fmt::Display for EmbeddingDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.y {
            Some(y) => write!(f, "{} fails at ({}, {})", self.property, self.x, y),
            None => write!(f, "{} fails at {}", self.property, self.x),
        }
    }
}

impl ChainEmbedding {
    pub fn apply(&self, x: &Rational) -> Option<&Rational> {
        self.map.iter().find(|(a, _)| a == x).map(|(_, b)| b)
    }
}

/// The embedding of `NmFin(k)` given by the explicit formulas for each target.
pub fn embed_finite(source: &ChainSpec, target: &ChainSpec) -> Result<ChainEmbedding, TransformError> {
    let ChainSpec::NmFin(k) = *source else {
        return Err(TransformError::NoEmbedding {
            source_chain: source.clone(),
            target: target.clone(),
            reason: "the source must be a finite NM chain",
        });
    };
    let fail = |reason| TransformError::NoEmbedding {
        source_chain: source.clone(),
        target: target.clone(),
        reason,
    };
    let odd = k % 2 == 1;
    let top = i64::from(k - 1);
    // index of the least positive element
    let least_pos = i64::from(k / 2 + k % 2);
    // index of the greatest positive element below 1
    let greatest_pos = top - 1;
    let half = Rational::half();
    let positive_image = |j: i64| -> Rational {
        match target {
            ChainSpec::NmInf | ChainSpec::NmInfMinus => {
                Rational::one() - Rational::new(1, 3 + (j - least_pos))
            }
            ChainSpec::NmPrimeInf | ChainSpec::NmPrimeInfMinus => {
                &half + Rational::new(1, 2 * (2 + greatest_pos - j))
            }
            ChainSpec::NmFin(n) => Rational::new(i64::from(*n - 1) - (top - j), i64::from(*n - 1)),
            _ => unreachable!("checked below"),
        }
    };
    match target {
        ChainSpec::NmInf | ChainSpec::NmPrimeInf => {}
        ChainSpec::NmInfMinus | ChainSpec::NmPrimeInfMinus => {
            if odd {
                return Err(fail("a fixpoint-free target needs an even source"));
            }
        }
        ChainSpec::NmFin(n) => {
            if *n < k {
                return Err(fail("the target is smaller than the source"));
            }
            if n % 2 != k % 2 {
                return Err(fail("finite chains of different parity"));
            }
        }
        _ => return Err(fail("unsupported target chain")),
    }
    let mut map = Vec::with_capacity(k as usize);
    for j in 0..=top {
        let x = Rational::new(j, top);
        let y = if j == 0 {
            Rational::zero()
        } else if j == top {
            Rational::one()
        } else if odd && 2 * j == top {
            half.clone()
        } else if j >= least_pos {
            positive_image(j)
        } else {
            positive_image(top - j).complement()
        };
        map.push((x, y));
    }
    Ok(ChainEmbedding {
        source: source.clone(),
        target: target.clone(),
        map,
    })
}

/// Exhaustive check that `e` is an injective, order-preserving homomorphism
/// of every operation. For a finite source an order embedding preserves all
/// existing infima and suprema, so this also certifies completeness.
pub fn check_embedding(e: &ChainEmbedding) -> Result<(), EmbeddingDefect> {
    let defect = |p: &str, x: &Rational, y: Option<&Rational>| EmbeddingDefect {
        property: p.to_string(),
        x: x.clone(),
        y: y.cloned(),
    };
    let elems = e
        .source
        .enumerate()
        .map_err(|_| defect("finite source", &Rational::zero(), None))?;
    for x in &elems {
        let Some(fx) = e.apply(x) else {
            return Err(defect("totality", x, None));
        };
        if !e.target.mem(fx) {
            return Err(defect("membership in the target", x, None));
        }
    }
    let f = |x: &Rational| e.apply(x).expect("total").clone();
    for x in [Rational::zero(), Rational::one()] {
        if f(&x) != x {
            return Err(defect("endpoint preservation", &x, None));
        }
    }
    if let (Some(a), Some(b)) = (e.source.fixpoint(), e.target.fixpoint()) {
        if f(&a) != b {
            return Err(defect("fixpoint preservation", &a, None));
        }
    }
    for x in &elems {
        if f(&e.source.negation(x)) != e.target.negation(&f(x)) {
            return Err(defect("negation", x, None));
        }
    }
    for x in &elems {
        for y in &elems {
            let (fx, fy) = (f(x), f(y));
            if x != y && fx == fy {
                return Err(defect("injectivity", x, Some(y)));
            }
            if (x < y) != (fx < fy) {
                return Err(defect("order", x, Some(y)));
            }
            let ops: [(&str, Rational, Rational); 4] = [
                ("t-norm", f(&e.source.tnorm(x, y)), e.target.tnorm(&fx, &fy)),
                ("residuum", f(&e.source.residuum(x, y)), e.target.residuum(&fx, &fy)),
                ("min", f(x.min_ref(y)), fx.min_ref(&fy).clone()),
                ("max", f(x.max_ref(y)), fx.max_ref(&fy).clone()),
            ];
            for (name, lhs, rhs) in ops {
                if lhs != rhs {
                    return Err(defect(name, x, Some(y)));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, print_compact};
    use crate::omega::{EventualSeq, TailExpr};

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn rotation_targets() {
        let g3 = ChainSpec::g_fin(3).unwrap();
        assert_eq!(rotate(&g3, true).unwrap().chain, ChainSpec::NmFin(5));
        assert_eq!(rotate(&g3, false).unwrap().chain, ChainSpec::NmFin(4));
        assert_eq!(rotate(&ChainSpec::GUp, true).unwrap().chain, ChainSpec::NmInf);
        assert_eq!(rotate(&ChainSpec::GUp, false).unwrap().chain, ChainSpec::NmInfMinus);
        assert_eq!(rotate(&ChainSpec::GDown, true).unwrap().chain, ChainSpec::NmPrimeInf);
        assert_eq!(
            rotate(&ChainSpec::GDown, false).unwrap().chain,
            ChainSpec::NmPrimeInfMinus
        );
        assert!(rotate(&ChainSpec::StdG, true).is_err());
        assert!(rotate(&ChainSpec::NmInf, true).is_err());
        assert!(rotate(&ChainSpec::GUp, true).unwrap().correspondence.is_none());
    }

    #[test]
    fn rotation_correspondence_hits_exactly_the_positives() {
        for n in 2..=6 {
            let g = ChainSpec::g_fin(n).unwrap();
            for fix in [true, false] {
                let rot = rotate(&g, fix).unwrap();
                let images: Vec<Rational> = rot
                    .correspondence
                    .unwrap()
                    .into_iter()
                    .map(|(_, b)| b)
                    .collect();
                let positives: Vec<Rational> = rot
                    .chain
                    .enumerate()
                    .unwrap()
                    .into_iter()
                    .filter(|v| *v > v.complement())
                    .collect();
                assert_eq!(images, positives, "g{n} fixpoint={fix}");
            }
        }
        for (g, fix) in [
            (ChainSpec::GUp, true),
            (ChainSpec::GUp, false),
            (ChainSpec::GDown, true),
            (ChainSpec::GDown, false),
        ] {
            let target = rotate(&g, fix).unwrap().chain;
            for m in 1..40 {
                let a = if matches!(g, ChainSpec::GUp) {
                    Rational::new(1, m).complement()
                } else {
                    Rational::new(1, m)
                };
                if !g.mem(&a) || a.is_zero() {
                    continue;
                }
                let b = rotate_value(&g, fix, &a).unwrap();
                assert!(target.mem(&b) && b > b.complement(), "{a} -> {b} in {target}");
            }
        }
    }

    #[test]
    fn star_examples() {
        let f = parse("P(x)").unwrap();
        assert_eq!(star(&f), parse("P(x) & P(x)").unwrap());
        assert_eq!(star(&Formula::Bottom), Formula::Bottom);
        let f = parse("P -> Q").unwrap();
        assert_eq!(
            star(&f),
            parse("((P & P) -> (Q & Q)) & ((P & P) -> (Q & Q))").unwrap()
        );
        assert_eq!(
            print_compact(&star(&parse("P(x) -> q").unwrap())),
            "((P(x)&P(x))->(q&q))&((P(x)&P(x))->(q&q))"
        );
        let f = parse("forall x. P(x)").unwrap();
        assert_eq!(
            star(&f),
            parse("(forall x. P(x) & P(x)) & (forall x. P(x) & P(x))").unwrap()
        );
        // exists goes through ~forall~ first
        let f = parse("exists x. P(x)").unwrap();
        assert_eq!(star(&f), star(&parse("~forall x. ~P(x)").unwrap()));
    }

    #[test]
    fn cut_and_collapse_values() {
        assert_eq!(cut_value(&r("3/4"), &r("9/10")), r("1"));
        assert_eq!(cut_value(&r("3/4"), &r("1/3")), r("1/3"));
        assert_eq!(cut_value(&r("1/4"), &r("1/5")), r("0"));
        let vals: Vec<Rational> = ["3/4", "1/2", "1/4", "1", "0"].iter().map(|s| r(s)).collect();
        let got: Vec<Rational> = vals.iter().map(collapse_value).collect();
        assert_eq!(got, ["3/4", "0", "0", "1", "0"].map(r).to_vec());
    }

    #[test]
    fn cut_models_of_both_kinds() {
        let mut m = FiniteModel::new(ChainSpec::NmInf, vec!["a".into(), "b".into()]).unwrap();
        m.set_table("P", 1, vec![r("9/10"), r("1/5")]).unwrap();
        let c = cut_model(&m, &r("3/4")).unwrap();
        assert_eq!(c.value("P", &[0]), Some(&r("1")));
        assert_eq!(c.value("P", &[1]), Some(&r("0")));
        assert!(cut_model(&m, &r("1")).is_err());
        assert!(cut_model(&m, &r("2/5")).is_err());

        let om = OmegaModel::new(ChainSpec::NmInf)
            .with_monadic("P", EventualSeq::from_tail(TailExpr::new(r("1"), r("-1"), 0)))
            .unwrap();
        let c = cut_model(&om, &r("3/4")).unwrap();
        // 1 - 1/(j+1) exceeds 3/4 from j = 4 on
        let p = &c.monadic()["P"];
        assert_eq!(p.as_constant(), None);
        for j in 0..30 {
            assert_eq!(p.at(j), cut_value(&r("3/4"), &(Rational::one() - Rational::new(1, j as i64 + 1))));
        }
        assert_eq!(p.tail, TailExpr::constant(r("1")));
    }

    #[test]
    fn collapse_of_models() {
        let mut m = FiniteModel::new(ChainSpec::NmFin(5), vec!["a".into(), "b".into(), "c".into()]).unwrap();
        m.set_table("P", 1, vec![r("3/4"), r("1/2"), r("1/4")]).unwrap();
        let c = positive_collapse(&m).unwrap();
        let vals: Vec<Rational> = c.atomic_values().cloned().collect();
        assert_eq!(vals, vec![r("3/4"), r("0"), r("0")]);
        let g = FiniteModel::new(ChainSpec::GFin(3), vec!["a".into()]).unwrap();
        assert!(positive_collapse(&g).is_err());
    }

    #[test]
    fn rehousing_preserves_values() {
        let mut m = FiniteModel::new(ChainSpec::NmInf, vec!["a".into(), "b".into()]).unwrap();
        m.set_table("P", 1, vec![r("2/3"), r("1/5")]).unwrap();
        m.set_table("q", 0, vec![r("1/2")]).unwrap();
        let (h, map) = rehouse(&m).unwrap();
        assert_eq!(h.chain(), &ChainSpec::NmFin(7));
        let f = parse("forall x. (P(x) -> q) \\/ (q & P(x))").unwrap();
        let a = m.model_value(&f).unwrap().into_value();
        let b = h.model_value(&f).unwrap().into_value();
        assert_eq!(map[&a], b);
    }

    #[test]
    fn explicit_embedding_examples() {
        let e = embed_finite(&ChainSpec::NmFin(5), &ChainSpec::NmInf).unwrap();
        let expected: Vec<(Rational, Rational)> = [
            ("0", "0"),
            ("1/4", "1/3"),
            ("1/2", "1/2"),
            ("3/4", "2/3"),
            ("1", "1"),
        ]
        .iter()
        .map(|(a, b)| (r(a), r(b)))
        .collect();
        assert_eq!(e.map, expected);
        assert_eq!(check_embedding(&e), Ok(()));

        let e = embed_finite(&ChainSpec::NmFin(3), &ChainSpec::NmInf).unwrap();
        assert_eq!(e.map, vec![(r("0"), r("0")), (r("1/2"), r("1/2")), (r("1"), r("1"))]);

        assert!(embed_finite(&ChainSpec::NmFin(4), &ChainSpec::NmInfMinus).is_ok());
        assert!(embed_finite(&ChainSpec::NmFin(5), &ChainSpec::NmInfMinus).is_err());
        assert!(embed_finite(&ChainSpec::NmFin(5), &ChainSpec::NmFin(6)).is_err());
        assert!(embed_finite(&ChainSpec::NmFin(5), &ChainSpec::NmFin(3)).is_err());

        let e = embed_finite(&ChainSpec::NmFin(5), &ChainSpec::NmPrimeInf).unwrap();
        assert_eq!(e.apply(&r("3/4")), Some(&r("3/4")));
        assert_eq!(e.apply(&r("1/4")), Some(&r("1/4")));
        let e = embed_finite(&ChainSpec::NmFin(7), &ChainSpec::NmPrimeInf).unwrap();
        assert_eq!(e.apply(&r("4/6")), Some(&r("2/3")));
        assert_eq!(e.apply(&r("5/6")), Some(&r("3/4")));
        assert_eq!(check_embedding(&e), Ok(()));
    }

    #[test]
    fn broken_maps_are_caught() {
        let bad = ChainEmbedding {
            source: ChainSpec::NmFin(5),
            target: ChainSpec::NmInf,
            map: [("0", "0"), ("1/4", "1/3"), ("1/2", "1/2"), ("3/4", "3/4"), ("1", "1")]
                .iter()
                .map(|(a, b)| (r(a), r(b)))
                .collect(),
        };
        let d = check_embedding(&bad).unwrap_err();
        assert_eq!(d.property, "negation");
        assert_eq!(d.x, r("1/4"));

        let id = ChainEmbedding {
            source: ChainSpec::NmFin(4),
            target: ChainSpec::NmFin(4),
            map: ChainSpec::NmFin(4)
                .enumerate()
                .unwrap()
                .into_iter()
                .map(|v| (v.clone(), v))
                .collect(),
        };
        assert_eq!(check_embedding(&id), Ok(()));
    }

    #[test]
    fn every_constructed_embedding_checks() {
        for k in 2..=9u32 {
            let src = ChainSpec::NmFin(k);
            let mut targets = vec![ChainSpec::NmInf, ChainSpec::NmPrimeInf];
            if k % 2 == 0 {
                targets.extend([ChainSpec::NmInfMinus, ChainSpec::NmPrimeInfMinus]);
            }
            targets.extend((k..=11).step_by(2).map(ChainSpec::NmFin));
            for t in targets {
                let e = embed_finite(&src, &t).unwrap();
                assert_eq!(check_embedding(&e), Ok(()), "{src} -> {t}");
            }
        }
    }
}
