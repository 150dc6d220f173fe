//! Named verification suites. Each returns a serializable report of
//! pass/fail checks with counterexample words.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::admissible::{is_permissible, length_ball, mu_orbit, AdmSet, ParahoricType};
use crate::affine::{BruhatSession, CoweightSim, ExtElement};
use crate::error::{Error, Result};
use crate::strata::{
    canonical_filtration_type, classify_id, eo_kr_match, es_from_final, final_from_es, nonssp_witness,
    structural_lemmas, verify_existence_lemma, verify_ss_iff_ssp, ElementarySequence, SuperspecialLabels,
};
use crate::weyl::{enumerate_group, final_elements, format_word, GroupContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Coxeter,
    PermAdm,
    Lemma3,
    Lemma4,
    Thm45,
    Eo,
}

impl Suite {
    pub const PARTS: [Suite; 6] = [Suite::Coxeter, Suite::PermAdm, Suite::Lemma3, Suite::Lemma4, Suite::Thm45, Suite::Eo];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Coxeter => "coxeter",
            Suite::PermAdm => "perm-adm",
            Suite::Lemma3 => "lemma3",
            Suite::Lemma4 => "lemma4",
            Suite::Thm45 => "thm45",
            Suite::Eo => "eo",
        }
    }

    /// Whether the suite queries the Bruhat order on `Adm(μ)`.
    pub fn needs_adm(self) -> bool {
        !matches!(self, Suite::Coxeter | Suite::Lemma3)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        std::iter::once(Suite::All)
            .chain(Suite::PARTS)
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// informational listing (e.g. supersingular strata)
    pub items: Vec<String>,
    pub counterexamples: Vec<String>,
}

impl Check {
    fn new(suite: Suite, name: &str, detail: impl Into<String>, counterexamples: Vec<String>) -> Self {
        Check {
            suite: suite.name(),
            name: name.to_string(),
            passed: counterexamples.is_empty(),
            detail: detail.into(),
            items: Vec::new(),
            counterexamples,
        }
    }

    fn with_items(mut self, items: Vec<String>) -> Self {
        self.items = items;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub g: usize,
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// Runs `suite`. Suites that need the Bruhat order fail with a
/// precondition error when `adm` is `None`.
pub fn run_suite(suite: Suite, ctx: &GroupContext, adm: Option<&AdmSet>) -> Result<SuiteReport> {
    let parts: Vec<Suite> = if suite == Suite::All { Suite::PARTS.to_vec() } else { vec![suite] };
    let mut checks = Vec::new();
    for part in parts {
        let need = || adm.ok_or_else(|| Error::Precondition(format!("suite {part} needs the admissible set")));
        checks.extend(match part {
            Suite::Coxeter => coxeter(ctx),
            Suite::PermAdm => perm_adm(need()?),
            Suite::Lemma3 => lemma3(ctx),
            Suite::Lemma4 => lemma4(need()?),
            Suite::Thm45 => thm45(need()?),
            Suite::Eo => eo(need()?),
            Suite::All => unreachable!(),
        });
    }
    Ok(SuiteReport { suite: suite.name().to_string(), g: ctx.rank(), passed: checks.iter().all(|c| c.passed), checks })
}

fn word(ctx: &GroupContext, x: &ExtElement) -> String {
    ctx.reduced_word(x).to_string()
}

/// Deterministic spread of `count` index pairs over `0..n`.
fn sample_pairs(n: usize, count: usize) -> Vec<(usize, usize)> {
    if n * n <= count {
        return (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
    }
    (0..count).map(|k| ((k * 7919 + 3) % n, (k * 104_729 + 13) % n)).collect()
}

const WORD_LENGTH_RADIUS: u32 = 4;
const GROUP_ORDER_RANK_CAP: usize = 6;
const PERM_BALL_RANK_CAP: usize = 4;
const SCAN_RANK_CAP: usize = 3;

fn affine_coxeter_entry(g: usize, i: usize, j: usize) -> Option<usize> {
    let (i, j) = (i.min(j), i.max(j));
    match () {
        _ if i == j => Some(1),
        _ if g == 1 => None,
        _ if j != i + 1 => Some(2),
        _ if i == 0 || j == g => Some(4),
        _ => Some(3),
    }
}

fn coxeter(ctx: &GroupContext) -> Vec<Check> {
    let s = Suite::Coxeter;
    let g = ctx.rank();
    let mut out = Vec::new();

    let mut bad = Vec::new();
    for i in 0..=g {
        for j in i..=g {
            let p = *ctx.generator(i).unwrap() * *ctx.generator(j).unwrap();
            let mut q = p;
            let mut order = None;
            for k in 1..=12 {
                if q.is_identity() {
                    order = Some(k);
                    break;
                }
                q = q * p;
            }
            if order != affine_coxeter_entry(g, i, j) {
                bad.push(format!("(s{i} s{j}) has order {order:?}"));
            }
        }
    }
    out.push(Check::new(s, "coxeter-relations", "orders of s_i s_j match the affine C diagram", bad));

    if g <= GROUP_ORDER_RANK_CAP {
        let n = enumerate_group(g).map(|v| v.len()).unwrap_or(0);
        let expected = (1usize << g) * (1..=g).product::<usize>();
        let bad = if n == expected { vec![] } else { vec![format!("|W| = {n}, expected {expected}")] };
        out.push(Check::new(s, "finite-group-order", format!("|W_g| = {n}"), bad));
    }

    // breadth-first word length against the length function
    let mut bad = Vec::new();
    for start in [ctx.identity(), *ctx.tau()] {
        let mut dist = HashMap::from([(start, 0u32)]);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let d = dist[&x];
            if x.length() != d {
                bad.push(format!("{} has length {} but word length {d}", word(ctx, &x), x.length()));
            }
            if d == WORD_LENGTH_RADIUS {
                continue;
            }
            for gen in ctx.generators() {
                let y = x * *gen;
                dist.entry(y).or_insert_with(|| {
                    queue.push_back(y);
                    d + 1
                });
            }
        }
    }
    out.push(Check::new(s, "length-vs-word-length", format!("balls of radius {WORD_LENGTH_RADIUS} around id and t"), bad));

    let mut bad = Vec::new();
    let tau = *ctx.tau();
    if tau.length() != 0 {
        bad.push(format!("l(t) = {}", tau.length()));
    }
    for c in 0..=g {
        if ctx.conj_by_tau(ctx.generator(c).unwrap()) != *ctx.generator(g - c).unwrap() {
            bad.push(format!("t s{c} t^-1 != s{}", g - c));
        }
    }
    let moved = ExtElement::translation(CoweightSim::mu(g).act_by(&ctx.w_empty()));
    if ctx.conj_by_tau(&ctx.t_mu()) != moved {
        bad.push("t t^mu t^-1 != t^(w0 mu)".to_string());
    }
    out.push(Check::new(s, "tau-conjugation", "l(t) = 0, t s_c t^-1 = s_{g-c}, t t^mu t^-1 = t^(w mu)", bad));

    let l = ctx.t_mu().length() as usize;
    let bad = if l == g * (g + 1) / 2 { vec![] } else { vec![format!("l(t^mu) = {l}")] };
    out.push(Check::new(s, "translation-length", format!("l(t^mu) = {l}"), bad));

    let n = final_elements(g).len();
    let bad = if n == 1 << g { vec![] } else { vec![format!("|F_g| = {n}")] };
    out.push(Check::new(s, "final-count", format!("|F_g| = {n}"), bad));
    out
}

fn perm_adm(adm: &AdmSet) -> Vec<Check> {
    let s = Suite::PermAdm;
    let ctx = adm.context();
    let g = ctx.rank();
    let top = (g * (g + 1) / 2) as u32;
    let mut out = Vec::new();

    let mut bad: Vec<String> =
        adm.elements().iter().filter(|x| !is_permissible(ctx, x)).map(|x| word(ctx, x)).collect();
    let detail = if g <= PERM_BALL_RANK_CAP {
        let ball = length_ball(ctx, 1, top);
        bad.extend(ball.iter().filter(|x| !adm.contains(x) && is_permissible(ctx, x)).map(|x| word(ctx, x)));
        format!("Adm = Perm over the length ball of radius {top}")
    } else {
        "every admissible element is permissible".to_string()
    };
    out.push(Check::new(s, "adm-equals-perm", detail, bad));

    if g <= SCAN_RANK_CAP {
        let maxima: Vec<ExtElement> = mu_orbit(ctx).into_iter().map(ExtElement::translation).collect();
        let mut session = BruhatSession::default();
        let n = length_ball(ctx, 1, top).into_iter().filter(|x| maxima.iter().any(|t| session.leq(x, t))).count();
        let bad = if n == adm.len() { vec![] } else { vec![format!("scan found {n}, subwords found {}", adm.len())] };
        out.push(Check::new(s, "cardinality-by-bruhat-scan", format!("|Adm| = {}", adm.len()), bad));
    }

    let mut bad = Vec::new();
    if adm.maximal_ids().len() != 1 << g {
        bad.push(format!("{} maxima", adm.maximal_ids().len()));
    }
    for &m in adm.maximal_ids() {
        let x = adm.element(m);
        if x.length() != top || !x.finite_part().is_identity() {
            bad.push(word(ctx, x));
        }
    }
    out.push(Check::new(s, "maxima", format!("2^g translations of length {top}"), bad));

    let bad = match adm.tau_id() {
        Some(t) => (0..adm.len()).filter(|&x| !adm.leq(t, x)).map(|x| adm.word(x).to_string()).collect(),
        None => vec!["t not admissible".to_string()],
    };
    out.push(Check::new(s, "tau-is-bottom", "t <= x for all x", bad));

    let mut bad = Vec::new();
    let t_mu = adm.id_of(&ctx.t_mu());
    for c in 0..=g {
        let a = adm.id_of(&(*ctx.generator(c).unwrap() * *ctx.tau()));
        let b = adm.id_of(&(*ctx.generator(g - c).unwrap() * *ctx.tau()));
        match (a, b, t_mu) {
            (Some(a), Some(b), Some(t)) if adm.leq(a, t) || adm.leq(b, t) => {}
            (Some(_), Some(_), Some(_)) => bad.push(format!("neither s{c} t nor s{} t lies below t^mu", g - c)),
            _ => bad.push(format!("s{c} t or s{} t not admissible", g - c)),
        }
    }
    out.push(Check::new(s, "simple-tau-below-t-mu", "s_c t <= t^mu or s_{g-c} t <= t^mu", bad));

    let pairs = sample_pairs(adm.len(), 4000);
    let bad: Vec<String> = pairs
        .par_chunks(256)
        .flat_map_iter(|chunk| {
            let mut session = BruhatSession::default();
            chunk
                .iter()
                .filter(|&&(x, y)| adm.leq(x, y) != session.leq(adm.element(x), adm.element(y)))
                .map(|&(x, y)| format!("{} vs {}", adm.word(x), adm.word(y)))
                .collect::<Vec<_>>()
        })
        .collect();
    out.push(Check::new(s, "order-matrix-vs-recursion", format!("{} pairs", pairs.len()), bad));

    let bad: Vec<String> = adm
        .hasse_edges()
        .iter()
        .filter(|&&(x, y)| adm.length(x) + 1 != adm.length(y) || !adm.leq(x, y))
        .map(|&(x, y)| format!("{} -> {}", adm.word(x), adm.word(y)))
        .collect();
    out.push(Check::new(s, "hasse-covers", format!("{} cover relations", adm.hasse_edges().len()), bad));
    out
}

fn lemma3(ctx: &GroupContext) -> Vec<Check> {
    let s = Suite::Lemma3;
    let r = structural_lemmas(ctx);
    let bad_a = r
        .checks
        .iter()
        .filter(|c| !c.intersection_matches)
        .map(|c| {
            let words: Vec<String> = c.finals_in_parabolic.iter().map(|w| format_word(w)).collect();
            format!("c={}: {}", c.c, words.join(", "))
        })
        .collect();
    let bad_b = r
        .checks
        .iter()
        .filter(|c| !(c.blocks_commute && c.block_types_match && c.order_matches && c.frobenius_swaps_outer))
        .map(|c| format!("c={}: blocks {:?}", c.c, c.blocks))
        .collect();
    vec![
        Check::new(s, "final-intersection", "F_g meets W_{c,g-c} in the embedded F_c", bad_a),
        Check::new(s, "three-block-decomposition", "W_{c,g-c} = W_c x S_{g-2c} x W_c, outer factors swapped by i -> g-i", bad_b),
    ]
}

fn lemma4(adm: &AdmSet) -> Vec<Check> {
    let s = Suite::Lemma4;
    let g = adm.rank();
    let labels = SuperspecialLabels::compute(adm);
    let e = verify_existence_lemma(adm, &labels);
    let bad = e
        .counterexamples
        .iter()
        .map(|c| format!("J={}: expected {}, found {}", c.j, c.expected, c.found))
        .collect();
    let existence = Check::new(s, "existence", format!("{} parahoric types", e.subsets_checked), bad);

    let subsets: Vec<ParahoricType> = ParahoricType::all(g).collect();
    let per: Vec<(usize, Vec<String>)> = subsets
        .par_iter()
        .map(|&j| {
            let mut n = 0;
            let mut bad = Vec::new();
            for b in adm.adm_j(j) {
                if !classify_id(adm, &labels, j, b.min_rep).c_superspecial.is_empty() {
                    continue;
                }
                n += 1;
                if let Err(e) = nonssp_witness(adm, &labels, j, b.min_rep) {
                    bad.push(format!("J={j} x={}: {e}", adm.word(b.min_rep)));
                }
            }
            (n, bad)
        })
        .collect();
    let n: usize = per.iter().map(|p| p.0).sum();
    let bad = per.into_iter().flat_map(|p| p.1).collect();
    let witnesses = Check::new(s, "non-superspecial-witness", format!("{n} non-superspecial blocks"), bad);
    vec![existence, witnesses]
}

fn thm45(adm: &AdmSet) -> Vec<Check> {
    let s = Suite::Thm45;
    let g = adm.rank();
    let labels = SuperspecialLabels::compute(adm);
    let r = verify_ss_iff_ssp(adm, &labels);
    let bad = r.counterexamples.iter().map(|(j, x)| format!("J={j} x={}", adm.word(*x))).collect();
    let iwahori = r
        .per_j
        .iter()
        .find(|b| b.j == ParahoricType::iwahori(g))
        .map(|b| b.blocks.iter().map(|&x| adm.context().w_tau_string(adm.element(x))).collect())
        .unwrap_or_default();
    let total: usize = r.per_j.iter().map(|b| b.blocks.len()).sum();
    vec![Check::new(
        s,
        "supersingular-implies-superspecial",
        format!("{} blocks, {total} supersingular; items list the supersingular Iwahori strata", r.blocks_checked),
        bad,
    )
    .with_items(iwahori)]
}

fn eo(adm: &AdmSet) -> Vec<Check> {
    let s = Suite::Eo;
    let ctx = adm.context();
    let g = ctx.rank();
    let mut out = Vec::new();

    let mut bad = Vec::new();
    for psi in ElementarySequence::all(g) {
        match final_from_es(ctx, &psi) {
            Ok(w) if w.length() == psi.sum() && es_from_final(ctx, &w).as_ref() == Ok(&psi) => {}
            _ => bad.push(format!("{:?}", psi.values())),
        }
    }
    out.push(Check::new(s, "final-sequence-bijection", "mutually inverse, l(w) = sum of psi", bad));

    let mut bad = Vec::new();
    for psi in ElementarySequence::all(g) {
        let t = canonical_filtration_type(&psi);
        let symmetric = t.full.iter().all(|d| t.full.contains(&(2 * g - d)));
        if !(symmetric && t.j.nodes().contains(0) && t.j.nodes().contains(g)) {
            bad.push(format!("{:?}", psi.values()));
        }
    }
    out.push(Check::new(s, "canonical-type-shape", "contains 0 and g, symmetric closure", bad));

    let mut bad = Vec::new();
    for f in 0..g {
        let psi = ElementarySequence::new((0..=g).map(|i| if i <= f { i } else { i - 1 } as u32).collect()).unwrap();
        let mut expected: Vec<usize> = (f..=2 * g - f).collect();
        expected.extend([0, 2 * g]);
        expected.sort_unstable();
        expected.dedup();
        if canonical_filtration_type(&psi).full != expected {
            bad.push(format!("a=1 f={f}"));
        }
    }
    for a in 0..=g {
        let psi = ElementarySequence::new((0..=g).map(|i| i.min(g - a) as u32).collect()).unwrap();
        let mut expected = vec![0, g - a, g, g + a, 2 * g];
        expected.sort_unstable();
        expected.dedup();
        if canonical_filtration_type(&psi).full != expected {
            bad.push(format!("a={a} f={}", g - a));
        }
    }
    out.push(Check::new(s, "canonical-type-formulas", "a-number 1 and p-rank g-a families", bad));

    let mut bad = Vec::new();
    let mut items = Vec::new();
    for w in final_elements(g) {
        match eo_kr_match(adm, &w) {
            Ok(m) if m.unique_min && m.all_above => {
                items.push(format!("{} J={} block={}", format_word(&m.word), m.j, m.block.len()))
            }
            Ok(m) => bad.push(format!("{} J={}", format_word(&m.word), m.j)),
            Err(e) => bad.push(format!("{}: {e}", format_word(&w.reduced_word()))),
        }
    }
    out.push(
        Check::new(s, "unique-minimum", "w t is the unique shortest member of its block and below every member", bad)
            .with_items(items),
    );
    out
}
