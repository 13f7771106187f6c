//! Named verification suites.
//!
//! A suite is a list of independent claims. Each claim carries its own
//! random stream (seeded from the suite seed and the claim id), so the
//! claims can run in parallel and the report is identical on every run.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::ChainSpec;
use crate::finite_model::{eval_prop, FiniteModel, ModelFile};
use crate::formula::{parse, Formula, Schema};
use crate::gen::{random_model, random_omega_model, FormulaShape};
use crate::omega::{eval_omega, EventualSeq, OmegaModel, OmegaValue, TailExpr};
use crate::rational::Rational;
use crate::transform::{
    check_embedding, cut_model, cut_value, embed_finite, positive_collapse, rehouse, rotate,
    rotate_value, star, ChainEmbedding, EmbeddingDefect,
};

use super::{prop_valid, search_countermodel, SearchOutcome, DEFAULT_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteId {
    SnBp,
    Shifting,
    OrderType,
    RotationStar,
    Cut,
    Collapse,
    Embeddings,
    Separations,
    Tautinc,
}

impl SuiteId {
    pub const ALL: [SuiteId; 9] = [
        SuiteId::SnBp,
        SuiteId::Shifting,
        SuiteId::OrderType,
        SuiteId::RotationStar,
        SuiteId::Cut,
        SuiteId::Collapse,
        SuiteId::Embeddings,
        SuiteId::Separations,
        SuiteId::Tautinc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::SnBp => "sn-bp",
            SuiteId::Shifting => "shifting",
            SuiteId::OrderType => "order-type",
            SuiteId::RotationStar => "rotation-star",
            SuiteId::Cut => "cut",
            SuiteId::Collapse => "collapse",
            SuiteId::Embeddings => "embeddings",
            SuiteId::Separations => "separations",
            SuiteId::Tautinc => "tautinc",
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteId {
    type Err = String;
    fn from_str(s: &str) -> Result<SuiteId, String> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = SuiteId::ALL.iter().map(|i| i.name()).collect();
                format!("unknown suite `{s}` (expected one of: {}, all)", names.join(", "))
            })
    }
}

/// Knobs shared by all suites.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random instances per sampled claim.
    pub samples: usize,
    /// Refuted instances collected by the tautinc suite.
    pub refutations: usize,
    /// Largest domain for exhaustive first-order search.
    pub max_domain: usize,
    /// Cap on models examined by one exhaustive query.
    pub budget: u64,
}

impl Default for SuiteConfig {
    fn default() -> SuiteConfig {
        SuiteConfig {
            seed: 1,
            samples: 200,
            refutations: 100,
            max_domain: 2,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Concrete evidence attached to a claim. `value` is always the value of
/// `formula` in the attached model or assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    Assignment {
        chain: ChainSpec,
        formula: String,
        values: BTreeMap<String, Rational>,
        value: Rational,
    },
    Model {
        formula: String,
        model: ModelFile,
        value: Rational,
    },
    Omega {
        formula: String,
        model: OmegaModel,
        value: String,
    },
    Embedding {
        map: Vec<(Rational, Rational)>,
        defect: Option<EmbeddingDefect>,
    },
}

impl Witness {
    fn model(f: &Formula, m: &FiniteModel, value: &Rational) -> Witness {
        Witness::Model {
            formula: f.to_string(),
            model: ModelFile::from_model(m),
            value: value.clone(),
        }
    }

    fn omega(f: &Formula, m: &OmegaModel, v: &OmegaValue) -> Witness {
        Witness::Omega {
            formula: f.to_string(),
            model: m.clone(),
            value: omega_text(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub id: String,
    pub params: BTreeMap<String, String>,
    pub expected: String,
    pub observed: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Claim {
    fn new(id: impl Into<String>) -> Claim {
        Claim {
            id: id.into(),
            params: BTreeMap::new(),
            expected: String::new(),
            observed: String::new(),
            witness: None,
            pass: false,
            note: None,
        }
    }

    fn param(mut self, k: &str, v: impl ToString) -> Claim {
        self.params.insert(k.to_string(), v.to_string());
        self
    }

    fn verdict(mut self, expected: impl Into<String>, observed: impl Into<String>, pass: bool) -> Claim {
        self.expected = expected.into();
        self.observed = observed.into();
        self.pass = pass;
        self
    }

    fn witness(mut self, w: Option<Witness>) -> Claim {
        self.witness = w;
        self
    }

    fn note(mut self, n: impl Into<String>) -> Claim {
        self.note = Some(n.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerdictReport {
    pub suite: SuiteId,
    pub seed: u64,
    pub claims: Vec<Claim>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerdictReport {
    pub fn failed(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| !c.pass)
    }
}

impl fmt::Display for VerdictReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let passed = self.claims.iter().filter(|c| c.pass).count();
        writeln!(
            f,
            "suite {} (seed {}): {}/{} claims pass",
            self.suite,
            self.seed,
            passed,
            self.claims.len()
        )?;
        for c in &self.claims {
            let mark = if c.pass { "ok  " } else { "FAIL" };
            writeln!(f, "  {mark} {}: expected {}; observed {}", c.id, c.expected, c.observed)?;
            if let Some(n) = &c.note {
                writeln!(f, "       note: {n}")?;
            }
            if !c.pass {
                if let Some(w) = &c.witness {
                    let json = serde_json::to_string(w).expect("witnesses serialize");
                    writeln!(f, "       witness: {json}")?;
                }
            }
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

type Task = Box<dyn FnOnce() -> Claim + Send>;

struct Ctx {
    seed: u64,
    cfg: SuiteConfig,
}

impl Ctx {
    /// Independent stream per claim id.
    fn rng(&self, id: &str) -> ChaCha8Rng {
        // FNV-1a keeps the stream stable across builds
        let h = id
            .bytes()
            .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3));
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(h);
        rng
    }
}

pub fn run_suite(id: SuiteId, cfg: &SuiteConfig) -> VerdictReport {
    let ctx = std::sync::Arc::new(Ctx {
        seed: cfg.seed,
        cfg: cfg.clone(),
    });
    let (tasks, notes) = match id {
        SuiteId::SnBp => sn_bp(),
        SuiteId::Shifting => shifting(&ctx),
        SuiteId::OrderType => order_type(&ctx),
        SuiteId::RotationStar => rotation_star(&ctx),
        SuiteId::Cut => cut(&ctx),
        SuiteId::Collapse => collapse(&ctx),
        SuiteId::Embeddings => embeddings(&ctx),
        SuiteId::Separations => separations(),
        SuiteId::Tautinc => tautinc(&ctx),
    };
    let claims: Vec<Claim> = tasks.into_par_iter().map(|t| t()).collect();
    let pass = claims.iter().all(|c| c.pass);
    VerdictReport {
        suite: id,
        seed: cfg.seed,
        claims,
        pass,
        notes,
    }
}

fn r(s: &str) -> Rational {
    s.parse().expect("literal rational")
}

fn omega_text(v: &OmegaValue) -> String {
    match v {
        OmegaValue::Value(x) => x.to_string(),
        OmegaValue::Unsafe(u) => format!("unsafe ({u})"),
    }
}

fn verdict_text(valid: bool) -> &'static str {
    if valid {
        "valid"
    } else {
        "invalid"
    }
}

/// Exhaustive validity with the countermodel as witness.
fn exhaustive(chain: &ChainSpec, f: &Formula, max_domain: usize, budget: u64) -> (String, Option<bool>, Option<Witness>) {
    if f.is_propositional() {
        return match prop_valid(chain, f) {
            Ok(v) if v.valid => ("valid".into(), Some(true), None),
            Ok(v) => {
                let value = v.value.expect("refuted");
                let w = Witness::Assignment {
                    chain: chain.clone(),
                    formula: f.to_string(),
                    values: v.counter.expect("refuted"),
                    value: value.clone(),
                };
                (format!("invalid (value {value})"), Some(false), Some(w))
            }
            Err(e) => (format!("not decided: {e}"), None, None),
        };
    }
    match search_countermodel(chain, f, max_domain, budget) {
        Ok(SearchOutcome::Exhausted { .. }) => (
            format!("valid on domains up to {max_domain}"),
            Some(true),
            None,
        ),
        Ok(SearchOutcome::Found { model, value }) => {
            let w = Witness::model(f, &model, &value);
            (
                format!(
                    "countermodel of size {} with value {value}",
                    model.domain().len()
                ),
                Some(false),
                Some(w),
            )
        }
        Err(e) => (format!("not decided: {e}"), None, None),
    }
}

fn sn_bp() -> (Vec<Task>, Vec<String>) {
    let mut tasks: Vec<Task> = Vec::new();
    for size in 2..=9u32 {
        for n in 1..=3u32 {
            tasks.push(Box::new(move || {
                let chain = ChainSpec::NmFin(size);
                let f = Schema::Sn(n).formula();
                let expect = size < 2 * n + 2;
                let (obs, valid, w) = exhaustive(&chain, &f, 1, DEFAULT_BUDGET);
                Claim::new(format!("sn/nm{size}/n{n}"))
                    .param("chain", &chain)
                    .param("n", n)
                    .verdict(verdict_text(expect), obs, valid == Some(expect))
                    .witness(w)
            }));
        }
    }
    for size in 2..=9u32 {
        tasks.push(Box::new(move || {
            let chain = ChainSpec::NmFin(size);
            let expect = !chain.has_fixpoint();
            let (obs, valid, w) = exhaustive(&chain, &Schema::Bp.formula(), 1, DEFAULT_BUDGET);
            Claim::new(format!("bp/nm{size}"))
                .param("chain", &chain)
                .verdict(verdict_text(expect), obs, valid == Some(expect))
                .witness(w)
        }));
    }
    (tasks, Vec::new())
}

fn tail(base: &str, coeff: &str) -> EventualSeq {
    EventualSeq::from_tail(TailExpr::new(r(base), r(coeff), 0))
}

/// The chains on which laws (15)-(18) and the order-type formulas fail,
/// with the half-width of a tail converging to 1/2 inside each.
fn failing_chains() -> Vec<(ChainSpec, &'static str)> {
    vec![
        (ChainSpec::NmPrimeInf, "1/2"),
        (ChainSpec::StdNm, "1/4"),
        (
            ChainSpec::a_alpha(r("3/4")).expect("valid parameter"),
            "1/4",
        ),
    ]
}

/// Values descend to 1/2 (`down`) or rise to it; Q copies P and q is 1/2.
fn witness_model(chain: &ChainSpec, width: &str, down: bool) -> OmegaModel {
    let seq = if down {
        tail("1/2", width)
    } else {
        tail("1/2", &format!("-{width}"))
    };
    OmegaModel::new(chain.clone())
        .with_monadic("P", seq.clone())
        .and_then(|m| m.with_monadic("Q", seq))
        .and_then(|m| m.with_zeroary("q", Rational::half()))
        .expect("witness sequences are members")
}

fn witness_claim(id: String, chain: &ChainSpec, f: &Formula, m: &OmegaModel, exact: Option<&Rational>) -> Claim {
    let v = eval_omega(m, f);
    let (obs, pass) = match &v {
        Ok(OmegaValue::Value(x)) => (
            x.to_string(),
            match exact {
                Some(e) => x == e,
                None => *x < Rational::one(),
            },
        ),
        Ok(u) => (omega_text(u), false),
        Err(e) => (format!("error: {e}"), false),
    };
    let expected = exact.map_or("value < 1".to_string(), |e| format!("value {e}"));
    let w = v.ok().map(|val| Witness::omega(f, m, &val));
    Claim::new(id)
        .param("chain", chain)
        .verdict(expected, obs, pass)
        .witness(w)
}

/// Value 1 on `samples` random safe omega models; unsafe draws are redrawn.
fn random_omega_claim(ctx: &Ctx, id: String, chain: ChainSpec, f: Formula) -> Claim {
    let mut rng = ctx.rng(&id);
    let want = ctx.cfg.samples;
    let preds = f.signature().expect("schema signatures are consistent");
    let monadic: Vec<&str> = preds.iter().filter(|(_, k)| **k == 1).map(|(p, _)| p.as_str()).collect();
    let zeroary: Vec<&str> = preds.iter().filter(|(_, k)| **k == 0).map(|(p, _)| p.as_str()).collect();
    let (mut safe, mut below, mut drawn) = (0, 0, 0);
    let mut first: Option<Witness> = None;
    while safe < want && drawn < want * 50 {
        drawn += 1;
        let m = random_omega_model(&mut rng, &chain, &monadic, &zeroary);
        match eval_omega(&m, &f) {
            Ok(OmegaValue::Value(v)) => {
                safe += 1;
                if !v.is_one() {
                    below += 1;
                    if first.is_none() {
                        first = Some(Witness::omega(&f, &m, &OmegaValue::Value(v)));
                    }
                }
            }
            Ok(OmegaValue::Unsafe(_)) => {}
            Err(e) => {
                return Claim::new(id)
                    .param("chain", &chain)
                    .verdict("value 1", format!("error: {e}"), false);
            }
        }
    }
    let mut c = Claim::new(id)
        .param("chain", &chain)
        .param("samples", want)
        .verdict(
            format!("value 1 on {want} safe models"),
            format!("{below} of {safe} safe models below 1 ({drawn} drawn)"),
            below == 0 && safe == want,
        )
        .witness(first);
    if safe < want {
        c = c.note("not enough safe models were drawn");
    }
    c
}

fn shifting(ctx: &std::sync::Arc<Ctx>) -> (Vec<Task>, Vec<String>) {
    let mut tasks: Vec<Task> = Vec::new();
    let dom = ctx.cfg.max_domain;
    let budget = ctx.cfg.budget;
    for law in 1..=18u8 {
        for size in 2..=4u32 {
            tasks.push(Box::new(move || {
                let chain = ChainSpec::NmFin(size);
                let f = Schema::Shift(law).formula();
                let (obs, valid, w) = exhaustive(&chain, &f, dom, budget);
                Claim::new(format!("law{law:02}/nm{size}/exhaustive"))
                    .param("chain", &chain)
                    .param("law", law)
                    .param("max_domain", dom)
                    .verdict("valid", obs, valid == Some(true))
                    .witness(w)
            }));
        }
    }
    for law in 15..=18u8 {
        for (chain, width) in failing_chains() {
            tasks.push(Box::new(move || {
                let f = Schema::Shift(law).formula();
                let m = witness_model(&chain, width, law != 18);
                let exact = (law == 15 && chain == ChainSpec::NmPrimeInf).then(Rational::half);
                witness_claim(format!("law{law:02}/{chain}/witness"), &chain, &f, &m, exact.as_ref())
            }));
        }
    }
    let complete_pred = [ChainSpec::NmInf, ChainSpec::NmInfMinus, ChainSpec::NmPrimeInfMinus];
    for law in 15..=18u8 {
        for chain in complete_pred.iter().cloned() {
            let ctx = ctx.clone();
            tasks.push(Box::new(move || {
                let id = format!("law{law:02}/{chain}/random");
                random_omega_claim(&ctx, id, chain, Schema::Shift(law).formula())
            }));
        }
    }
    for law in 1..=14u8 {
        for chain in [ChainSpec::NmPrimeInf, ChainSpec::StdNm] {
            let ctx = ctx.clone();
            tasks.push(Box::new(move || {
                let id = format!("law{law:02}/{chain}/random");
                random_omega_claim(&ctx, id, chain, Schema::Shift(law).formula())
            }));
        }
    }
    let notes = vec![
        "laws 6, 7 and 10 fail already in two-valued logic when psi(x) is a second predicate Q(x): \
         two individuals with P = (1,0), Q = (0,1) refute them"
            .to_string(),
        "law 16 fails on every chain with an element strictly between 0 and 1, e.g. nm3 with \
         P = (1,1/2), Q = (1/2,1): forall x (P & Q) = 1/2 while (forall P) & (forall Q) = 0"
            .to_string(),
    ];
    (tasks, notes)
}

fn order_type(ctx: &std::sync::Arc<Ctx>) -> (Vec<Task>, Vec<String>) {
    let mut tasks: Vec<Task> = Vec::new();
    let budget = ctx.cfg.budget;
    // one monadic predicate, so domain 3 stays small
    let dom = ctx.cfg.max_domain.max(3);
    for (name, schema) in [("cup", Schema::Cup), ("cdown", Schema::Cdown)] {
        for size in 2..=4u32 {
            tasks.push(Box::new(move || {
                let chain = ChainSpec::NmFin(size);
                let (obs, valid, w) = exhaustive(&chain, &schema.formula(), dom, budget);
                Claim::new(format!("{name}/nm{size}/exhaustive"))
                    .param("chain", &chain)
                    .param("max_domain", dom)
                    .verdict("valid", obs, valid == Some(true))
                    .witness(w)
            }));
        }
        for (chain, width) in failing_chains() {
            tasks.push(Box::new(move || {
                let m = witness_model(&chain, width, schema == Schema::Cup);
                let exact = (chain == ChainSpec::NmPrimeInf).then(Rational::half);
                witness_claim(format!("{name}/{chain}/witness"), &chain, &schema.formula(), &m, exact.as_ref())
            }));
        }
        for chain in [ChainSpec::NmInf, ChainSpec::NmInfMinus, ChainSpec::NmPrimeInfMinus] {
            let ctx = ctx.clone();
            tasks.push(Box::new(move || {
                let id = format!("{name}/{chain}/random");
                random_omega_claim(&ctx, id, chain, schema.formula())
            }));
        }
    }
    (tasks, Vec::new())
}

/// Closed formulas without `exists`, with a binary predicate.
fn star_shape(depth: usize) -> FormulaShape {
    FormulaShape {
        closed: true,
        single_variable: false,
        ..FormulaShape::open(depth)
    }
    .without_exists()
}

/// Hand-picked formulas mixing valid and invalid ones, all without `exists`.
fn corpus() -> Vec<Formula> {
    [
        "forall x. P(x) -> P(x)",
        "(p -> q) \\/ (q -> p)",
        "p \\/ ~p",
        "~~p -> p",
        "(forall x. P(x)) -> forall y. P(y)",
        "(forall x. q \\/ P(x)) -> q \\/ forall x. P(x)",
        "(p & p) <-> p",
        "~(p & ~p)",
        "((p -> q) -> p) -> p",
        "(forall x. P(x) & Q(x)) <-> (forall x. P(x)) & (forall x. Q(x))",
        "(forall x. P(x) -> q) -> (forall x. P(x)) -> q",
        "~(forall x. P(x)) -> forall x. ~~P(x) -> q",
        "(forall x. ~~P(x)) <-> ~~forall x. P(x)",
        "((x0 -> x1) -> x1) -> x0 \\/ x1",
    ]
    .iter()
    .map(|s| parse(s).expect("corpus formulas parse"))
    .collect()
}

/// The fixed corpus plus a few seeded random monadic formulas.
fn full_corpus(ctx: &Ctx, tag: &str) -> Vec<Formula> {
    let mut rng = ctx.rng(tag);
    let shape = FormulaShape::monadic(3).without_exists();
    let mut out = corpus();
    out.extend((0..10).map(|_| shape.generate(&mut rng)));
    out
}

fn rotation_star(ctx: &std::sync::Arc<Ctx>) -> (Vec<Task>, Vec<String>) {
    let mut tasks: Vec<Task> = Vec::new();
    for n in 2..=4u32 {
        let ctx2 = ctx.clone();
        tasks.push(Box::new(move || {
            let ctx = ctx2;
            let id = format!("star-values/g{n}");
            let mut rng = ctx.rng(&id);
            let g = ChainSpec::GFin(n);
            let rot = rotate(&g, true).expect("finite Gödel chains rotate");
            let shape = star_shape(4);
            let mut bad = 0;
            let mut first = None;
            for _ in 0..ctx.cfg.samples {
                let f = shape.generate(&mut rng);
                let sig = f.signature().expect("generated");
                let dom = rng.gen_range(1..=3);
                let m = random_model(&mut rng, &g, dom, &sig, 8).expect("generated");
                let a = m.model_value(&f).expect("closed").into_value();
                let nm = m
                    .map_values(rot.chain.clone(), |v| rotate_value(&g, true, v).expect("member"))
                    .expect("rotated values are members");
                let b = nm.model_value(&star(&f)).expect("closed").into_value();
                if b != rotate_value(&g, true, &a).expect("member") {
                    bad += 1;
                    first.get_or_insert_with(|| Witness::model(&f, &m, &a));
                }
            }
            Claim::new(id)
                .param("chain", &g)
                .param("rotated", &rot.chain)
                .param("samples", ctx.cfg.samples)
                .verdict(
                    "star value equals the rotated Gödel value on every sample",
                    format!("{bad} mismatches"),
                    bad == 0,
                )
                .witness(first)
        }));
        let ctx2 = ctx.clone();
        tasks.push(Box::new(move || {
            let ctx = ctx2;
            let id = format!("star-validity/g{n}");
            let g = ChainSpec::GFin(n);
            let nm = rotate(&g, true).expect("finite Gödel chains rotate").chain;
            let dom = ctx.cfg.max_domain;
            let mut disagree = Vec::new();
            let mut valid_count = 0;
            let formulas = full_corpus(&ctx, "star-corpus");
            for f in &formulas {
                let (_, vg, wg) = exhaustive(&g, f, dom, ctx.cfg.budget);
                let (_, vn, _) = exhaustive(&nm, &star(f), dom, ctx.cfg.budget);
                if vg.is_none() || vg != vn {
                    disagree.push((f.clone(), wg));
                }
                if vg == Some(true) {
                    valid_count += 1;
                }
            }
            let first = disagree.first().and_then(|(_, w)| w.clone());
            Claim::new(id)
                .param("chain", &g)
                .param("rotated", &nm)
                .param("formulas", formulas.len())
                .param("max_domain", dom)
                .verdict(
                    "same verdict for every formula and its translation",
                    format!(
                        "{} disagreements; {valid_count} of {} valid on the Gödel side",
                        disagree.len(),
                        formulas.len()
                    ),
                    disagree.is_empty(),
                )
                .witness(first)
        }));
    }
    let notes = vec![
        "formulas are generated without exists: the translation rewrites exists as ~forall~, \
         which is not equivalent to exists over Gödel chains"
            .to_string(),
    ];
    (tasks, notes)
}

fn random_alpha<R: Rng + ?Sized>(rng: &mut R, chain: &ChainSpec) -> Rational {
    loop {
        let a = chain.sample(rng, 12);
        if a.is_positive() && a < Rational::one() {
            return a;
        }
    }
}

fn cut(ctx: &std::sync::Arc<Ctx>) -> (Vec<Task>, Vec<String>) {
    let mut tasks: Vec<Task> = Vec::new();
    for chain in [ChainSpec::NmInf, ChainSpec::StdNm] {
        let ctx = ctx.clone();
        tasks.push(Box::new(move || {
            let id = format!("cut/{chain}");
            let mut rng = ctx.rng(&id);
            let shape = FormulaShape {
                closed: true,
                single_variable: false,
                ..FormulaShape::open(4)
            };
            let (mut bad, mut first) = (0, None);
            for _ in 0..ctx.cfg.samples {
                let f = shape.generate(&mut rng);
                let sig = f.signature().expect("generated");
                let dom = rng.gen_range(1..=3);
                let m = random_model(&mut rng, &chain, dom, &sig, 12).expect("generated");
                let alpha = random_alpha(&mut rng, &chain);
                let a = m.model_value(&f).expect("closed").into_value();
                let cm = cut_model(&m, &alpha).expect("alpha in range");
                let b = cm.model_value(&f).expect("closed").into_value();
                if b != cut_value(&alpha, &a) {
                    bad += 1;
                    first.get_or_insert_with(|| Witness::model(&f, &m, &a));
                }
            }
            Claim::new(id)
                .param("chain", &chain)
                .param("samples", ctx.cfg.samples)
                .verdict(
                    "formula value in the cut model equals the cut of the value",
                    format!("{bad} mismatches"),
                    bad == 0,
                )
                .witness(first)
        }));
    }
    let ctx = ctx.clone();
    tasks.push(Box::new(move || {
        let chain = ChainSpec::NmInf;
        let id = "cut/nm-inf/omega".to_string();
        let mut rng = ctx.rng(&id);
        let shape = FormulaShape::monadic(4);
        let (mut bad, mut checked, mut first) = (0, 0, None);
        for _ in 0..ctx.cfg.samples {
            let f = shape.generate(&mut rng);
            let m = random_omega_model(&mut rng, &chain, &["P", "Q"], &["q"]);
            let alpha = random_alpha(&mut rng, &chain);
            let cm = cut_model(&m, &alpha).expect("alpha in range");
            if let (Ok(OmegaValue::Value(a)), Ok(OmegaValue::Value(b))) =
                (eval_omega(&m, &f), eval_omega(&cm, &f))
            {
                checked += 1;
                if b != cut_value(&alpha, &a) {
                    bad += 1;
                    first.get_or_insert_with(|| Witness::omega(&f, &m, &OmegaValue::Value(a)));
                }
            }
        }
        Claim::new(id)
            .param("chain", &chain)
            .param("samples", ctx.cfg.samples)
            .verdict(
                "the cut commutes with evaluation on omega models",
                format!("{bad} mismatches in {checked} evaluations"),
                bad == 0 && checked == ctx.cfg.samples,
            )
            .witness(first)
    }));
    (tasks, Vec::new())
}

fn collapse(ctx: &std::sync::Arc<Ctx>) -> (Vec<Task>, Vec<String>) {
    let mut tasks: Vec<Task> = Vec::new();
    let chains = [
        ChainSpec::NmFin(3),
        ChainSpec::NmFin(4),
        ChainSpec::NmFin(5),
        ChainSpec::NmFin(7),
        ChainSpec::NmInf,
        ChainSpec::NmInfMinus,
        ChainSpec::NmPrimeInf,
        ChainSpec::StdNm,
    ];
    for chain in chains {
        let ctx = ctx.clone();
        tasks.push(Box::new(move || {
            let id = format!("collapse/{chain}");
            let mut rng = ctx.rng(&id);
            let shape = star_shape(4);
            let fix = chain.fixpoint();
            let (mut bad, mut hits, mut first) = (0, 0, None);
            for _ in 0..ctx.cfg.samples {
                let f = star(&shape.generate(&mut rng));
                let sig = f.signature().expect("generated");
                let dom = rng.gen_range(1..=3);
                let m = random_model(&mut rng, &chain, dom, &sig, 10).expect("generated");
                let plus = positive_collapse(&m).expect("NM chain");
                let a = m.model_value(&f).expect("closed").into_value();
                let b = plus.model_value(&f).expect("closed").into_value();
                let mut hit = false;
                if let Some(fx) = &fix {
                    plus.eval_observed(&Default::default(), &f, &mut |v| hit |= v == fx)
                        .expect("closed");
                }
                if a != b || hit {
                    bad += usize::from(a != b);
                    hits += usize::from(hit);
                    first.get_or_insert_with(|| Witness::model(&f, &m, &a));
                }
            }
            let expected = if fix.is_some() {
                "equal values, and no subformula of the translation at the fixpoint in the collapsed model"
            } else {
                "equal values"
            };
            Claim::new(id)
                .param("chain", &chain)
                .param("samples", ctx.cfg.samples)
                .verdict(
                    expected,
                    format!("{bad} value mismatches, {hits} fixpoint hits"),
                    bad == 0 && hits == 0,
                )
                .witness(first)
        }));
    }
    for (without, with) in [(2u32, 3u32), (4, 5), (6, 7)] {
        let ctx = ctx.clone();
        tasks.push(Box::new(move || {
            let id = format!("fixpoint-transfer/nm{without}-nm{with}");
            let (b, bf) = (ChainSpec::NmFin(without), ChainSpec::NmFin(with));
            let formulas = full_corpus(&ctx, "fixpoint-corpus");
            let dom = ctx.cfg.max_domain;
            let mut disagree = Vec::new();
            for f in &formulas {
                let fs = star(f);
                let (_, v1, w1) = exhaustive(&b, &fs, dom, ctx.cfg.budget);
                let (_, v2, w2) = exhaustive(&bf, &fs, dom, ctx.cfg.budget);
                if v1.is_none() || v1 != v2 {
                    disagree.push(w1.or(w2));
                }
            }
            Claim::new(id)
                .param("chain", &b)
                .param("with_fixpoint", &bf)
                .param("formulas", formulas.len())
                .param("max_domain", dom)
                .verdict(
                    "translated formulas valid on both chains or on neither",
                    format!("{} disagreements", disagree.len()),
                    disagree.is_empty(),
                )
                .witness(disagree.into_iter().next().flatten())
        }));
    }
    let notes = vec![
        "the fixpoint transfer is checked on finite chains only: among the infinite chains \
         without fixpoint, nm-prime-inf-minus is not complete"
            .to_string(),
    ];
    (tasks, notes)
}

fn targets_for(k: u32) -> Vec<ChainSpec> {
    let mut t = vec![ChainSpec::NmInf, ChainSpec::NmPrimeInf];
    if k.is_multiple_of(2) {
        t.extend([ChainSpec::NmInfMinus, ChainSpec::NmPrimeInfMinus]);
    }
    t.extend((k..=9).step_by(2).map(ChainSpec::NmFin));
    t
}

fn embeddings(ctx: &std::sync::Arc<Ctx>) -> (Vec<Task>, Vec<String>) {
    let mut tasks: Vec<Task> = Vec::new();
    for k in 2..=9u32 {
        for target in targets_for(k) {
            tasks.push(Box::new(move || {
                let src = ChainSpec::NmFin(k);
                let id = format!("embed/nm{k}/{target}");
                match embed_finite(&src, &target) {
                    Ok(e) => {
                        let res = check_embedding(&e);
                        let obs = match &res {
                            Ok(()) => "complete embedding".to_string(),
                            Err(d) => d.to_string(),
                        };
                        Claim::new(id)
                            .param("source", &src)
                            .param("target", &target)
                            .verdict("complete embedding", obs, res.is_ok())
                            .witness(Some(Witness::Embedding {
                                map: e.map.clone(),
                                defect: res.err(),
                            }))
                    }
                    Err(err) => Claim::new(id)
                        .param("source", &src)
                        .param("target", &target)
                        .verdict("complete embedding", err.to_string(), false),
                }
            }));
        }
        // a refutation on the source moves along every embedding
        for target in targets_for(k) {
            tasks.push(Box::new(move || {
                let src = ChainSpec::NmFin(k);
                let id = format!("transfer/nm{k}/{target}");
                let f = Schema::Sep(k - 1).formula();
                // p1 > p2 > ... > pk runs through the whole chain, top first
                let counter: BTreeMap<String, Rational> = (1..=k)
                    .map(|i| (format!("p{i}"), Rational::new(i64::from(k - i), i64::from(k - 1))))
                    .collect();
                let src_value = eval_prop(&src, &counter, &f).expect("members").into_value();
                if src_value.is_one() {
                    return Claim::new(id).verdict("a refutation to transfer", "value 1 on the source", false);
                }
                let e = embed_finite(&src, &target).expect("constructed above");
                let moved: BTreeMap<String, Rational> = counter
                    .iter()
                    .map(|(p, x)| (p.clone(), e.apply(x).expect("total").clone()))
                    .collect();
                let got = eval_prop(&target, &moved, &f).expect("members").into_value();
                let want = e.apply(&src_value).expect("total").clone();
                Claim::new(id)
                    .param("source", &src)
                    .param("target", &target)
                    .param("formula", &f)
                    .verdict(
                        format!("value {want} (image of {src_value})"),
                        format!("value {got}"),
                        got == want && got < Rational::one(),
                    )
                    .witness(Some(Witness::Assignment {
                        chain: target.clone(),
                        formula: f.to_string(),
                        values: moved,
                        value: got,
                    }))
            }));
        }
    }
    tasks.push(Box::new(|| {
        let bad = ChainEmbedding {
            source: ChainSpec::NmFin(5),
            target: ChainSpec::NmInf,
            map: [("0", "0"), ("1/4", "1/3"), ("1/2", "1/2"), ("3/4", "3/4"), ("1", "1")]
                .iter()
                .map(|(a, b)| (r(a), r(b)))
                .collect(),
        };
        let res = check_embedding(&bad);
        let obs = match &res {
            Ok(()) => "accepted".to_string(),
            Err(d) => format!("rejected: {d}"),
        };
        Claim::new("embed/control/broken-negation")
            .param("source", &bad.source)
            .param("target", &bad.target)
            .verdict("rejected", obs, res.is_err())
            .witness(Some(Witness::Embedding {
                map: bad.map.clone(),
                defect: res.err(),
            }))
    }));
    // same-parity inclusion over a corpus, and refutations read over [0,1]
    let ctx2 = ctx.clone();
    tasks.push(Box::new(move || {
        let ctx = ctx2;
        let formulas = full_corpus(&ctx, "inclusion-corpus");
        let dom = ctx.cfg.max_domain;
        let mut table: BTreeMap<u32, Vec<Option<bool>>> = BTreeMap::new();
        for size in 2..=7u32 {
            let chain = ChainSpec::NmFin(size);
            table.insert(
                size,
                formulas.iter().map(|f| exhaustive(&chain, f, dom, ctx.cfg.budget).1).collect(),
            );
        }
        let mut violations = Vec::new();
        for m in 2..=7u32 {
            for n in (m + 2..=7).step_by(2) {
                for (i, f) in formulas.iter().enumerate() {
                    if table[&n][i] == Some(true) && table[&m][i] != Some(true) {
                        violations.push(format!("{f} valid on nm{n} but not on nm{m}"));
                    }
                }
            }
        }
        let mut c = Claim::new("inclusion/same-parity")
            .param("formulas", formulas.len())
            .param("max_domain", dom)
            .verdict(
                "valid on nm(n) implies valid on nm(m) for m < n of equal parity",
                format!("{} violations", violations.len()),
                violations.is_empty(),
            );
        if let Some(v) = violations.first() {
            c = c.note(v.clone());
        }
        c
    }));
    let ctx2 = ctx.clone();
    tasks.push(Box::new(move || {
        let ctx = ctx2;
        let formulas = full_corpus(&ctx, "inclusion-corpus");
        let dom = ctx.cfg.max_domain;
        let (mut moved, mut bad, mut first) = (0, 0, None);
        for size in 2..=7u32 {
            let chain = ChainSpec::NmFin(size);
            for f in &formulas {
                let (_, valid, w) = exhaustive(&chain, f, dom, ctx.cfg.budget);
                if valid != Some(false) {
                    continue;
                }
                moved += 1;
                let (got, want) = match w {
                    Some(Witness::Model { model, value, .. }) => {
                        let mut file = model;
                        file.chain = ChainSpec::StdNm;
                        let m = file.into_model().expect("finite values are rationals of [0,1]");
                        (m.model_value(f).expect("closed").into_value(), value)
                    }
                    Some(Witness::Assignment { values, value, .. }) => (
                        eval_prop(&ChainSpec::StdNm, &values, f).expect("members").into_value(),
                        value,
                    ),
                    _ => unreachable!("refutations carry models or assignments"),
                };
                if got != want {
                    bad += 1;
                    first.get_or_insert_with(|| format!("{f} on nm{size}: {want} became {got}"));
                }
            }
        }
        let mut c = Claim::new("inclusion/std-nm")
            .param("formulas", formulas.len())
            .verdict(
                "every finite-chain refutation keeps its value over [0,1]",
                format!("{bad} of {moved} refutations changed value"),
                bad == 0 && moved > 0,
            );
        if let Some(n) = first {
            c = c.note(n);
        }
        c
    }));
    (tasks, Vec::new())
}

/// `count` strictly decreasing elements of `chain`, all below 1 and above 0.
fn descending(chain: &ChainSpec, count: i64) -> Vec<Rational> {
    (1..=count)
        .map(|i| match chain {
            ChainSpec::NmInf | ChainSpec::NmInfMinus => Rational::one() - Rational::new(1, count + 3 - i),
            ChainSpec::NmPrimeInf | ChainSpec::NmPrimeInfMinus => {
                Rational::half() + Rational::new(1, 2 * (i + 1))
            }
            ChainSpec::Aalpha(a) => {
                let lo = a.complement();
                &lo + (a - &lo) * Rational::new(count - i, count)
            }
            _ => Rational::new(count + 1 - i, count + 1),
        })
        .collect()
}

fn separations() -> (Vec<Task>, Vec<String>) {
    let mut tasks: Vec<Task> = Vec::new();
    for j in 2..=7u32 {
        for k in 1..=5u32 {
            tasks.push(Box::new(move || {
                let chain = ChainSpec::NmFin(j);
                let expect = j <= k;
                let (obs, valid, w) = exhaustive(&chain, &Schema::Sep(k).formula(), 1, DEFAULT_BUDGET);
                let mut c = Claim::new(format!("sep/nm{j}/k{k}"))
                    .param("chain", &chain)
                    .param("k", k)
                    .verdict(verdict_text(expect), obs, valid == Some(expect))
                    .witness(w);
                if k + 1 == j {
                    c = c.note(
                        "this is the separator with j-1 disjuncts, stated as a tautology of the \
                         j-element chain in the source; brute force refutes it",
                    );
                }
                c
            }));
        }
    }
    let infinite = [
        ChainSpec::NmInf,
        ChainSpec::NmInfMinus,
        ChainSpec::NmPrimeInf,
        ChainSpec::NmPrimeInfMinus,
        ChainSpec::StdNm,
        ChainSpec::a_alpha(r("3/4")).expect("valid parameter"),
    ];
    for chain in infinite {
        for k in 1..=5u32 {
            let chain = chain.clone();
            tasks.push(Box::new(move || {
                let f = Schema::Sep(k).formula();
                let vals = descending(&chain, i64::from(k) + 1);
                let assign: BTreeMap<String, Rational> = vals
                    .into_iter()
                    .enumerate()
                    .map(|(i, v)| (format!("p{}", i + 1), v))
                    .collect();
                let res = eval_prop(&chain, &assign, &f);
                let (obs, pass, w) = match res {
                    Ok(v) => {
                        let v = v.into_value();
                        let w = Witness::Assignment {
                            chain: chain.clone(),
                            formula: f.to_string(),
                            values: assign,
                            value: v.clone(),
                        };
                        (format!("value {v}"), v < Rational::one(), Some(w))
                    }
                    Err(e) => (format!("error: {e}"), false, None),
                };
                Claim::new(format!("sep/{chain}/k{k}"))
                    .param("chain", &chain)
                    .param("k", k)
                    .verdict("refuted by a descending assignment", obs, pass)
                    .witness(w)
            }));
        }
    }
    for m in 2..=7u32 {
        for n in (m + 2..=7).step_by(2) {
            tasks.push(Box::new(move || {
                let f = Schema::Sep(m).formula();
                let (_, on_m, _) = exhaustive(&ChainSpec::NmFin(m), &f, 1, DEFAULT_BUDGET);
                let (obs_n, on_n, w) = exhaustive(&ChainSpec::NmFin(n), &f, 1, DEFAULT_BUDGET);
                Claim::new(format!("strict/nm{m}/nm{n}"))
                    .param("separator", &f)
                    .verdict(
                        format!("valid on nm{m}, invalid on nm{n}"),
                        format!("{} on nm{m}, {obs_n} on nm{n}", on_m.map_or("undecided", verdict_text)),
                        on_m == Some(true) && on_n == Some(false),
                    )
                    .witness(w)
            }));
        }
    }
    let notes = vec![
        "the separator with k disjuncts is valid on nm(j) exactly when j <= k; the source's \
         corollary uses n-1 disjuncts for nm(n), which the j = k+1 claims refute, so strictness \
         is witnessed with the shifted separator (m disjuncts for nm(m))"
            .to_string(),
    ];
    (tasks, notes)
}

fn tautinc(ctx: &std::sync::Arc<Ctx>) -> (Vec<Task>, Vec<String>) {
    let mut tasks: Vec<Task> = Vec::new();
    let ctx2 = ctx.clone();
    tasks.push(Box::new(move || {
        let ctx = ctx2;
        let id = "tautinc/nm-inf".to_string();
        let mut rng = ctx.rng(&id);
        let chain = ChainSpec::NmInf;
        let shape = FormulaShape {
            closed: true,
            single_variable: false,
            ..FormulaShape::open(4)
        };
        let want = ctx.cfg.refutations;
        let (mut found, mut ok, mut tries, mut first) = (0, 0, 0, None);
        while found < want && tries < want * 200 {
            tries += 1;
            let f = shape.generate(&mut rng);
            let sig = f.signature().expect("generated");
            let dom = rng.gen_range(1..=3);
            let m = random_model(&mut rng, &chain, dom, &sig, 12).expect("generated");
            let a = m.model_value(&f).expect("closed").into_value();
            if a.is_one() {
                continue;
            }
            found += 1;
            // beta = 1 - 1/k, the first such element above both a and 1/2
            let mut k = 3;
            while Rational::one() - Rational::new(1, k) <= a {
                k += 1;
            }
            let beta = Rational::one() - Rational::new(1, k);
            let cut = cut_model(&m, &beta).expect("beta in range");
            let c = cut.model_value(&f).expect("closed").into_value();
            let (fin, map) = rehouse(&cut).expect("NM model");
            let d = fin.model_value(&f).expect("closed").into_value();
            if c <= a && d == map[&c] && d < Rational::one() {
                ok += 1;
            } else {
                first.get_or_insert_with(|| Witness::model(&f, &m, &a));
            }
        }
        Claim::new(id)
            .param("chain", &chain)
            .param("refutations", want)
            .verdict(
                format!("{want}/{want} rehoused refutations stay below 1"),
                format!("{ok}/{found} (from {tries} random instances)"),
                ok == want && found == want,
            )
            .witness(first)
    }));
    let ctx2 = ctx.clone();
    tasks.push(Box::new(move || {
        let ctx = ctx2;
        let id = "a-beta/std-nm".to_string();
        let mut rng = ctx.rng(&id);
        let chain = ChainSpec::StdNm;
        let shape = FormulaShape {
            closed: true,
            single_variable: false,
            ..FormulaShape::open(4)
        };
        let want = ctx.cfg.refutations;
        let (mut found, mut ok, mut tries, mut first) = (0, 0, 0, None);
        while found < want && tries < want * 200 {
            tries += 1;
            let f = shape.generate(&mut rng);
            let sig = f.signature().expect("generated");
            let dom = rng.gen_range(1..=3);
            let m = random_model(&mut rng, &chain, dom, &sig, 12).expect("generated");
            let a = m.model_value(&f).expect("closed").into_value();
            if a.is_one() {
                continue;
            }
            found += 1;
            // halfway between max(a, 1/2) and 1
            let beta = (a.max_ref(&Rational::half()) + Rational::one()) / Rational::from_integer(2);
            let cut = cut_model(&m, &beta).expect("beta in range");
            let c = cut.model_value(&f).expect("closed").into_value();
            let a_beta = ChainSpec::a_alpha(beta.clone()).expect("beta in (0,1)");
            let rehomed = cut.map_values(a_beta, Rational::clone);
            let same = rehomed
                .map(|h| h.model_value(&f).map(|v| v.into_value() == c).unwrap_or(false))
                .unwrap_or(false);
            if c <= a && same {
                ok += 1;
            } else {
                first.get_or_insert_with(|| Witness::model(&f, &m, &a));
            }
        }
        Claim::new(id)
            .param("chain", &chain)
            .param("refutations", want)
            .verdict(
                format!("{want}/{want} cut refutations live on an A(beta) chain below 1"),
                format!("{ok}/{found} (from {tries} random instances)"),
                ok == want && found == want,
            )
            .witness(first)
    }));
    (tasks, Vec::new())
}
