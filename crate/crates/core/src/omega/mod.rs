//! Countable models with eventually-symbolic monadic predicates.
//!
//! Needed for countermodels that disappear on every finite truncation: the
//! interesting infima there are limits that are not attained.

mod eval;
mod model;
mod ops;
mod tail;

use thiserror::Error;

use crate::chain::ChainError;

pub use eval::{eval_omega, OmegaValue};
pub use model::OmegaModel;
pub use ops::{scalar_apply, seq_apply, seq_inf, seq_map, seq_sup, PointOp, Unsafe};
pub use tail::{eventual_cmp, EventualSeq, TailExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OmegaError {
    #[error("sequence for `{pred}` rejected: {reason}")]
    InvalidSequence { pred: String, reason: String },
    #[error("the model does not interpret `{0}`")]
    MissingPredicate(String),
    #[error("predicate `{0}` has the wrong arity for an omega model")]
    Arity(String),
    #[error("unsupported formula shape: {0}")]
    UnsupportedShape(String),
    #[error("formula is not closed (free: {0})")]
    NotClosed(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("invalid omega model: {0}")]
    Json(String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::ChainSpec;
    use crate::formula::{parse, Schema};
    use crate::rational::Rational;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn tail(b: &str, c: &str, s: u64) -> EventualSeq {
        EventualSeq::from_tail(TailExpr::new(r(b), r(c), s))
    }

    fn star_countermodel() -> OmegaModel {
        OmegaModel::new(ChainSpec::NmPrimeInf)
            .with_monadic("P", tail("1/2", "1/2", 0))
            .unwrap()
            .with_zeroary("q", r("1/2"))
            .unwrap()
    }

    #[test]
    fn star_on_the_primed_chain() {
        let v = eval_omega(&star_countermodel(), &Schema::Star.formula()).unwrap();
        assert_eq!(v, OmegaValue::Value(r("1/2")));
    }

    #[test]
    fn star_on_nm_inf() {
        let m = OmegaModel::new(ChainSpec::NmInf)
            .with_monadic("P", tail("0", "1", 0))
            .unwrap()
            .with_zeroary("q", r("1/3"))
            .unwrap();
        assert_eq!(
            eval_omega(&m, &Schema::Star.formula()).unwrap(),
            OmegaValue::Value(r("1"))
        );
    }

    #[test]
    fn cdown_on_the_primed_chain() {
        let m = OmegaModel::new(ChainSpec::NmPrimeInf)
            .with_monadic("P", tail("1/2", "-1/2", 0))
            .unwrap();
        assert_eq!(
            eval_omega(&m, &Schema::Cdown.formula()).unwrap(),
            OmegaValue::Value(r("1/2"))
        );
    }

    #[test]
    fn finite_prefixes_do_not_see_the_failure() {
        let m = star_countermodel();
        let f = Schema::Star.formula();
        for len in 1..=50 {
            let fm = m.prefix(len).unwrap();
            assert_eq!(fm.model_value(&f).unwrap().into_value(), r("1"), "prefix {len}");
        }
    }

    #[test]
    fn unsafe_models_are_reported() {
        let m = OmegaModel::new(ChainSpec::NmPrimeInfMinus)
            .with_monadic("P", tail("1/2", "1/2", 0))
            .unwrap();
        assert_eq!(
            eval_omega(&m, &parse("forall x. P(x)").unwrap()).unwrap(),
            OmegaValue::Unsafe(Unsafe::Inf { limit: r("1/2") })
        );
        // unsafety inside a subformula makes the whole value undefined
        let v = eval_omega(&m, &parse("(forall x. P(x)) -> bot").unwrap()).unwrap();
        assert!(matches!(v, OmegaValue::Unsafe(_)));
    }

    #[test]
    fn shape_and_interpretation_errors() {
        let m = star_countermodel();
        assert!(matches!(
            eval_omega(&m, &parse("forall x. forall y. P(x) -> P(y)").unwrap()),
            Err(OmegaError::UnsupportedShape(_))
        ));
        assert!(matches!(
            eval_omega(&m, &parse("P(x)").unwrap()),
            Err(OmegaError::NotClosed(_))
        ));
        assert!(matches!(
            eval_omega(&m, &parse("forall x. Q(x)").unwrap()),
            Err(OmegaError::MissingPredicate(_))
        ));
        assert!(matches!(
            eval_omega(&m, &parse("forall x. forall y. R(x, y)").unwrap()),
            Err(OmegaError::UnsupportedShape(_)) | Err(OmegaError::Arity(_))
        ));
        assert!(matches!(
            eval_omega(&m, &parse("P").unwrap()),
            Err(OmegaError::Arity(_))
        ));
        // vacuous and nested closed quantifiers are fine
        assert_eq!(
            eval_omega(&m, &parse("forall x. q").unwrap()).unwrap(),
            OmegaValue::Value(r("1/2"))
        );
        assert_eq!(
            eval_omega(&m, &parse("forall x. (P(x) -> exists y. P(y))").unwrap()).unwrap(),
            OmegaValue::Value(r("1"))
        );
    }

    #[test]
    fn invalid_sequences_are_rejected() {
        assert!(OmegaModel::new(ChainSpec::NmInf)
            .with_monadic("P", tail("1/2", "1/2", 0))
            .is_err());
        assert!(OmegaModel::new(ChainSpec::NmPrimeInfMinus)
            .with_zeroary("q", r("1/2"))
            .is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"chain": "nm-prime-inf", "monadic": {"P": {"tail": {"base": "1/2", "coeff": "1/2", "shift": 0}, "exceptions": {}}}, "zeroary": {"q": "1/2"}}"#;
        let m = OmegaModel::from_json(text).unwrap();
        assert_eq!(m, star_countermodel());
        assert_eq!(OmegaModel::from_json(&m.to_json()).unwrap(), m);
        let bad = r#"{"chain": "nm-inf", "monadic": {"P": {"tail": {"base": "1/2", "coeff": "1/2", "shift": 0}}}}"#;
        assert!(matches!(
            OmegaModel::from_json(bad),
            Err(OmegaError::InvalidSequence { .. })
        ));
        let with_exc = r#"{"chain": "nm-inf", "monadic": {"P": {"tail": {"base": "0", "coeff": "1"}, "exceptions": {"3": "1/2"}}}}"#;
        let m = OmegaModel::from_json(with_exc).unwrap();
        assert_eq!(m.monadic()["P"].at(3), r("1/2"));
    }

    // Witness values for laws (15)-(18) and the order-type formulas, each
    // checked by hand: every value is 1/2.
    #[test]
    fn shifting_witnesses() {
        let a34 = ChainSpec::a_alpha(r("3/4")).unwrap();
        let cases: Vec<(ChainSpec, &str, &str)> = vec![
            (ChainSpec::NmPrimeInf, "1/2", "1/2"),
            (ChainSpec::StdNm, "1/2", "1/4"),
            (a34, "1/2", "1/4"),
        ];
        for (chain, base, c) in cases {
            let down = tail(base, c, 0);
            let up = tail(base, &format!("-{c}"), 0);
            let q = r("1/2");
            let model = |p: &EventualSeq, qq: &EventualSeq| {
                OmegaModel::new(chain.clone())
                    .with_monadic("P", p.clone())
                    .unwrap()
                    .with_monadic("Q", qq.clone())
                    .unwrap()
                    .with_zeroary("q", q.clone())
                    .unwrap()
            };
            for (law, p) in [(15u8, &down), (16, &down), (17, &down), (18, &up)] {
                let v = eval_omega(&model(p, p), &Schema::Shift(law).formula()).unwrap();
                assert_eq!(v, OmegaValue::Value(r("1/2")), "law {law} on {chain}");
            }
            let cup = eval_omega(&model(&down, &down), &Schema::Cup.formula()).unwrap();
            assert_eq!(cup, OmegaValue::Value(r("1/2")), "cup on {chain}");
            let cdown = eval_omega(&model(&up, &up), &Schema::Cdown.formula()).unwrap();
            assert_eq!(cdown, OmegaValue::Value(r("1/2")), "cdown on {chain}");
        }
    }
}
