//! Superspecial / supersingular classification of parahoric KR strata,
//! final elements versus elementary sequences, canonical filtration types,
//! and the EO-as-KR matching.

use std::collections::{BTreeSet, HashSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::admissible::{in_wj_tau_coset, AdmSet, ParahoricType};
use crate::affine::ExtElement;
use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::weyl::{coset_min_rep, final_elements, GroupContext, Side, SignedPermutation};

/// `ψ : {0, ..., g} → Z≥0` with `ψ(0) = 0` and steps in `{0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ElementarySequence(Vec<u32>);

impl ElementarySequence {
    /// Takes `(ψ(0), ..., ψ(g))`.
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let ok = values.len() >= 2
            && values[0] == 0
            && values.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1);
        if ok {
            Ok(ElementarySequence(values))
        } else {
            Err(Error::InvalidSequence(values))
        }
    }

    /// The sequence whose jumps `ψ(i) = ψ(i-1) + 1` happen exactly at `steps ⊆ {1, ..., g}`.
    pub fn from_steps(g: usize, steps: IndexSet) -> Self {
        let mut v = vec![0u32; g + 1];
        for i in 1..=g {
            v[i] = v[i - 1] + u32::from(steps.contains(i));
        }
        ElementarySequence(v)
    }

    /// All `2^g` sequences, in the order of their step-set bitmasks.
    pub fn all(g: usize) -> Vec<Self> {
        (0u32..(1 << g))
            .map(|m| Self::from_steps(g, IndexSet::from_bits((m << 1) as u16)))
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.0.len() - 1
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn steps(&self) -> IndexSet {
        (1..=self.rank()).filter(|&i| self.0[i] > self.0[i - 1]).collect()
    }

    pub fn sum(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Largest `f` with `ψ(f) = f`.
    pub fn p_rank(&self) -> usize {
        (0..=self.rank()).rev().find(|&i| self.0[i] as usize == i).unwrap_or(0)
    }

    /// `g - ψ(g)`.
    pub fn a_number(&self) -> usize {
        self.rank() - self.0[self.rank()] as usize
    }

    /// Extension to `{0, ..., 2g}`: `ν(i) = ψ(i)`, `ν(2g - i) = ψ(i) + g - i`.
    pub fn final_type(&self) -> FinalType {
        let g = self.rank();
        let mut nu = vec![0u32; 2 * g + 1];
        for i in 0..=g {
            nu[i] = self.0[i];
            nu[2 * g - i] = self.0[i] + (g - i) as u32;
        }
        FinalType(nu)
    }
}

/// `ν : {0, ..., 2g} → {0, ..., g}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct FinalType(Vec<u32>);

impl FinalType {
    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, d: usize) -> usize {
        self.0[d] as usize
    }

    pub fn rank(&self) -> usize {
        (self.0.len() - 1) / 2
    }
}

/// The final element with negated value set equal to the step set of `ψ`.
/// Its length is `Σ ψ(i)`.
pub fn final_from_es(ctx: &GroupContext, psi: &ElementarySequence) -> Result<SignedPermutation> {
    let g = ctx.rank();
    if psi.rank() != g {
        return Err(Error::RankMismatch { left: g, right: psi.rank() });
    }
    let steps = psi.steps();
    let window: Vec<i32> = (1..=g as i32).map(|k| if steps.contains(k as usize) { -k } else { k }).collect();
    let u = SignedPermutation::from_window(&window)?;
    Ok(coset_min_rep(&u, IndexSet::finite(g).without(g), Side::Right))
}

pub fn es_from_final(ctx: &GroupContext, w: &SignedPermutation) -> Result<ElementarySequence> {
    let g = ctx.rank();
    if w.rank() != g {
        return Err(Error::RankMismatch { left: g, right: w.rank() });
    }
    if !w.is_final() {
        return Err(Error::NotFinal(w.to_string()));
    }
    let negated: IndexSet = w.window().iter().filter(|&&v| v < 0).map(|&v| v.unsigned_abs() as usize).collect();
    Ok(ElementarySequence::from_steps(g, negated))
}

/// Canonical filtration type of an EO stratum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalType {
    /// Smallest `T ⊆ {0, ..., 2g}` containing `0, 2g` and closed under `ν` and `d ↦ 2g - d`.
    pub full: Vec<usize>,
    /// `T ∩ {0, ..., g}`.
    pub j: ParahoricType,
}

pub fn canonical_filtration_type(psi: &ElementarySequence) -> CanonicalType {
    let g = psi.rank();
    let nu = psi.final_type();
    let mut t: BTreeSet<usize> = BTreeSet::new();
    let mut queue = VecDeque::from([0, 2 * g]);
    while let Some(d) = queue.pop_front() {
        if t.insert(d) {
            queue.push_back(nu.get(d));
            queue.push_back(2 * g - d);
        }
    }
    let j = ParahoricType::new(t.iter().copied().filter(|&d| d <= g).collect());
    CanonicalType { full: t.into_iter().collect(), j }
}

pub fn canonical_type(psi: &ElementarySequence) -> ParahoricType {
    canonical_filtration_type(psi).j
}

/// Classification of one parahoric KR stratum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumReport {
    pub j: ParahoricType,
    /// id of the two-sided minimal representative `x̄`
    pub xbar: usize,
    pub members: Vec<usize>,
    /// every `c ∈ {0, ..., ⌊g/2⌋}` with `members ⊆ W_{c,g-c} τ`
    pub c_superspecial: IndexSet,
    /// `members ⊆ ∪_c W_{c,g-c} τ`
    pub supersingular: bool,
    pub length_range: (u32, u32),
}

/// For each element of `Adm(μ)`, the set of `c ≤ g/2` with `v ∈ W_{c,g-c} τ`.
#[derive(Clone, Debug)]
pub struct SuperspecialLabels(Vec<IndexSet>);

impl SuperspecialLabels {
    pub fn compute(adm: &AdmSet) -> Self {
        let ctx = adm.context();
        let g = ctx.rank();
        let labels = adm
            .elements()
            .par_iter()
            .map(|v| {
                (0..=g / 2)
                    .filter(|&c| in_wj_tau_coset(ctx, ParahoricType::superspecial(g, c), v))
                    .collect()
            })
            .collect();
        SuperspecialLabels(labels)
    }

    pub fn get(&self, id: usize) -> IndexSet {
        self.0[id]
    }

    fn report(&self, adm: &AdmSet, j: ParahoricType, xbar: usize, members: Vec<usize>) -> StratumReport {
        let g = adm.rank();
        let all_c: IndexSet = (0..=g / 2).collect();
        let c_superspecial = members.iter().fold(all_c, |acc, &v| acc.intersection(self.0[v]));
        let supersingular = members.iter().all(|&v| !self.0[v].is_empty());
        let lens = members.iter().map(|&v| adm.length(v));
        let length_range = (lens.clone().min().unwrap_or(0), lens.max().unwrap_or(0));
        StratumReport { j, xbar, members, c_superspecial, supersingular, length_range }
    }
}

/// Classifies the stratum of `x` in `A_J`.
pub fn classify_stratum(adm: &AdmSet, j: ParahoricType, x: &ExtElement) -> Result<StratumReport> {
    let id = adm.id_of(x).ok_or_else(|| Error::NotAdmissible(adm.context().reduced_word(x).to_string()))?;
    let labels = SuperspecialLabels::compute(adm);
    Ok(classify_id(adm, &labels, j, id))
}

pub fn classify_id(adm: &AdmSet, labels: &SuperspecialLabels, j: ParahoricType, id: usize) -> StratumReport {
    let members = adm.double_coset_members(j, id);
    let xbar = adm.double_coset_min_id(j, id);
    labels.report(adm, j, xbar, members)
}

/// Reports for every block of `Adm_J(μ)`, in block order.
pub fn classify_all(adm: &AdmSet, labels: &SuperspecialLabels, j: ParahoricType) -> Vec<StratumReport> {
    adm.adm_j(j)
        .into_iter()
        .map(|b| labels.report(adm, j, b.min_rep, b.members))
        .collect()
}

/// `{c : some stratum of A_J is c-superspecial}`.
pub fn c_superspecial_exists(adm: &AdmSet, labels: &SuperspecialLabels, j: ParahoricType) -> IndexSet {
    classify_all(adm, labels, j)
        .iter()
        .fold(IndexSet::EMPTY, |acc, r| acc.union(r.c_superspecial))
}

#[derive(Clone, Debug, Serialize)]
pub struct ExistenceCounterexample {
    pub j: ParahoricType,
    pub expected: IndexSet,
    pub found: IndexSet,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExistenceLemmaReport {
    pub passed: bool,
    pub subsets_checked: usize,
    pub counterexamples: Vec<ExistenceCounterexample>,
}

/// Sweeps every `J ⊆ {0, ..., g}`: a `c`-superspecial stratum exists in
/// `A_J` iff `c, g - c ∈ J`.
pub fn verify_existence_lemma(adm: &AdmSet, labels: &SuperspecialLabels) -> ExistenceLemmaReport {
    let g = adm.rank();
    let subsets: Vec<ParahoricType> = ParahoricType::all(g).collect();
    let counterexamples: Vec<ExistenceCounterexample> = subsets
        .par_iter()
        .filter_map(|&j| {
            let expected: IndexSet =
                (0..=g / 2).filter(|&c| j.nodes().contains(c) && j.nodes().contains(g - c)).collect();
            let found = c_superspecial_exists(adm, labels, j);
            (expected != found).then_some(ExistenceCounterexample { j, expected, found })
        })
        .collect();
    ExistenceLemmaReport { passed: counterexamples.is_empty(), subsets_checked: subsets.len(), counterexamples }
}

#[derive(Clone, Debug, Serialize)]
pub struct SupersingularBlocks {
    pub j: ParahoricType,
    /// ids of `x̄` for the supersingular blocks
    pub blocks: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SsIffSspReport {
    pub passed: bool,
    pub blocks_checked: usize,
    pub per_j: Vec<SupersingularBlocks>,
    /// `(J, x̄)` of supersingular blocks that are not superspecial
    pub counterexamples: Vec<(ParahoricType, usize)>,
}

/// Every supersingular block is `c`-superspecial for some `c`.
pub fn verify_ss_iff_ssp(adm: &AdmSet, labels: &SuperspecialLabels) -> SsIffSspReport {
    let g = adm.rank();
    let subsets: Vec<ParahoricType> = ParahoricType::all(g).collect();
    type PerJ = (usize, SupersingularBlocks, Vec<(ParahoricType, usize)>);
    let per: Vec<PerJ> = subsets
        .par_iter()
        .map(|&j| {
            let reports = classify_all(adm, labels, j);
            let blocks = reports.iter().filter(|r| r.supersingular).map(|r| r.xbar).collect();
            let bad = reports
                .iter()
                .filter(|r| r.supersingular && r.c_superspecial.is_empty())
                .map(|r| (j, r.xbar))
                .collect();
            (reports.len(), SupersingularBlocks { j, blocks }, bad)
        })
        .collect();
    let mut blocks_checked = 0;
    let mut per_j = Vec::new();
    let mut counterexamples = Vec::new();
    for (n, s, bad) in per {
        blocks_checked += n;
        per_j.push(s);
        counterexamples.extend(bad);
    }
    SsIffSspReport { passed: counterexamples.is_empty(), blocks_checked, per_j, counterexamples }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub c: usize,
    /// id of a member `v` above `s_c τ` or `s_{g-c} τ`
    pub member: usize,
    /// which of `c`, `g - c` was used
    pub reflection: usize,
}

/// For a stratum that is not superspecial, finds for each `c ≤ g/2` a
/// member above `s_c τ` or `s_{g-c} τ`.
pub fn nonssp_witness(adm: &AdmSet, labels: &SuperspecialLabels, j: ParahoricType, id: usize) -> Result<Vec<Witness>> {
    let ctx = adm.context();
    let g = ctx.rank();
    let report = classify_id(adm, labels, j, id);
    if !report.c_superspecial.is_empty() {
        return Err(Error::Precondition(format!(
            "stratum of {} for J = {} is {}-superspecial",
            adm.word(id),
            j,
            report.c_superspecial
        )));
    }
    let mut out = Vec::new();
    for c in 0..=g / 2 {
        let found = [c, g - c].into_iter().find_map(|r| {
            let below = *ctx.generator(r).ok()? * *ctx.tau();
            let below = adm.id_of(&below)?;
            report.members.iter().find(|&&v| adm.leq(below, v)).map(|&v| Witness { c, member: v, reflection: r })
        });
        match found {
            Some(w) => out.push(w),
            None => {
                return Err(Error::Falsified(format!(
                    "no member of the J = {} block of {} lies above s_{c} t or s_{} t",
                    j,
                    adm.word(id),
                    g - c
                )))
            }
        }
    }
    Ok(out)
}

/// Outcome of matching the EO stratum of a final `w` with the KR stratum of
/// `wτ` at the canonical parahoric level.
#[derive(Clone, Debug, Serialize)]
pub struct EoMatch {
    pub w: SignedPermutation,
    pub word: Vec<usize>,
    pub psi: ElementarySequence,
    pub j: ParahoricType,
    pub w_tau: usize,
    /// `W_J wτ W_J ∩ Adm(μ)`
    pub block: Vec<usize>,
    /// `wτ` is the only member of minimal length
    pub unique_min: bool,
    /// every member lies above `wτ`
    pub all_above: bool,
}

pub fn eo_kr_match(adm: &AdmSet, w: &SignedPermutation) -> Result<EoMatch> {
    let ctx = adm.context();
    let psi = es_from_final(ctx, w)?;
    let j = canonical_type(&psi);
    let wt = ExtElement::finite(*w) * *ctx.tau();
    let w_tau = adm.id_of(&wt).ok_or_else(|| Error::NotAdmissible(format!("{} t", crate::weyl::format_word(&w.reduced_word()))))?;
    let block = adm.double_coset_members(j, w_tau);
    let min_len = block.iter().map(|&v| adm.length(v)).min().unwrap_or(0);
    let shortest: Vec<usize> = block.iter().copied().filter(|&v| adm.length(v) == min_len).collect();
    let unique_min = shortest == [w_tau];
    let all_above = block.iter().all(|&v| adm.leq(w_tau, v));
    Ok(EoMatch { w: *w, word: w.reduced_word(), psi, j, w_tau, block, unique_min, all_above })
}

/// `F_g ∩ W_{c,g-c}` against the embedded `F_c`, plus the three-block
/// decomposition of the generators of `W_{c,g-c}`.
#[derive(Clone, Debug, Serialize)]
pub struct StructuralCheck {
    pub c: usize,
    pub finals_in_parabolic: Vec<Vec<usize>>,
    pub embedded_finals: Vec<Vec<usize>>,
    pub intersection_matches: bool,
    /// `{s_0..s_{c-1}}`, `{s_{c+1}..s_{g-c-1}}`, `{s_{g-c+1}..s_g}`
    pub blocks: [Vec<usize>; 3],
    pub blocks_commute: bool,
    /// Coxeter matrices of the outer blocks are type `C_c`, the middle block type `A_{g-2c-1}`
    pub block_types_match: bool,
    /// `|W_{c,g-c}| = |W_c|^2 (g-2c)!` by closure
    pub order_matches: bool,
    /// `i ↦ g - i` swaps the outer blocks and preserves the middle one
    pub frobenius_swaps_outer: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructuralReport {
    pub passed: bool,
    pub checks: Vec<StructuralCheck>,
}

/// Largest rank for which the closure-based group orders are computed.
const CLOSURE_RANK_CAP: usize = 6;

fn group_closure_size(ctx: &GroupContext, gens: &[usize]) -> usize {
    let id = ctx.identity();
    let mut seen = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for &i in gens {
            let y = x.mul_simple_right(i);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    seen.len()
}

fn coxeter_entry(ctx: &GroupContext, i: usize, j: usize) -> usize {
    let p = *ctx.generator(i).expect("index") * *ctx.generator(j).expect("index");
    let mut q = p;
    for k in 1..=12 {
        if q.is_identity() {
            return k;
        }
        q = q * p;
    }
    0
}

/// Whether the chain `gens[0] - gens[1] - ...` has Coxeter matrix with the
/// given bond orders between consecutive nodes and 2 elsewhere.
fn chain_matches(ctx: &GroupContext, gens: &[usize], bonds: &[usize]) -> bool {
    for (a, &i) in gens.iter().enumerate() {
        for (b, &j) in gens.iter().enumerate().skip(a + 1) {
            let expected = if b == a + 1 { bonds[a] } else { 2 };
            if coxeter_entry(ctx, i, j) != expected {
                return false;
            }
        }
    }
    true
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

pub fn structural_lemmas(ctx: &GroupContext) -> StructuralReport {
    let g = ctx.rank();
    let finals = final_elements(g);
    let checks: Vec<StructuralCheck> = (0..=g / 2)
        .map(|c| {
            let avoid: IndexSet = [c, g - c].into_iter().collect();
            let mut inside: Vec<Vec<usize>> = finals
                .iter()
                .filter(|w| w.support().is_disjoint(avoid))
                .map(|w| w.reduced_word())
                .collect();
            let mut embedded: Vec<Vec<usize>> = if c == 0 {
                vec![vec![]]
            } else {
                final_elements(c)
                    .iter()
                    .map(|w| ctx.embed_subgroup(c, &w.reduced_word()).expect("valid letters").reduced_word())
                    .collect()
            };
            inside.sort();
            embedded.sort();
            let intersection_matches = inside == embedded;

            let first: Vec<usize> = (0..c).collect();
            let middle: Vec<usize> = (c + 1..g.saturating_sub(c)).collect();
            let last: Vec<usize> = (g - c + 1..=g).collect();
            let blocks = [first.clone(), middle.clone(), last.clone()];
            let commute = |xs: &[usize], ys: &[usize]| {
                xs.iter().all(|&i| ys.iter().all(|&j| coxeter_entry(ctx, i, j) == 2))
            };
            let blocks_commute = commute(&first, &middle) && commute(&first, &last) && commute(&middle, &last);

            // first block reads 0 =4= 1 - ... - (c-1); last block (g-c+1) - ... - (g-1) =4= g
            let mut c_bonds = vec![3; c.saturating_sub(1)];
            if c >= 2 {
                c_bonds[0] = 4;
            }
            let mut c_bonds_rev = c_bonds.clone();
            c_bonds_rev.reverse();
            let block_types_match = chain_matches(ctx, &first, &c_bonds)
                && chain_matches(ctx, &last, &c_bonds_rev)
                && chain_matches(ctx, &middle, &vec![3; middle.len().saturating_sub(1)]);

            let order_matches = if g <= CLOSURE_RANK_CAP {
                let gens: Vec<usize> = (0..=g).filter(|i| !avoid.contains(*i)).collect();
                let w_c = (1usize << c) * factorial(c);
                group_closure_size(ctx, &gens) == w_c * w_c * factorial(g - 2 * c)
                    && group_closure_size(ctx, &first) == w_c
                    && group_closure_size(ctx, &last) == w_c
                    && group_closure_size(ctx, &middle) == factorial(g - 2 * c)
            } else {
                true
            };

            let sigma = |xs: &[usize]| -> BTreeSet<usize> { xs.iter().map(|&i| ctx.frobenius(i)).collect() };
            let as_set = |xs: &[usize]| -> BTreeSet<usize> { xs.iter().copied().collect() };
            let frobenius_swaps_outer =
                sigma(&first) == as_set(&last) && sigma(&last) == as_set(&first) && sigma(&middle) == as_set(&middle);

            let passed = intersection_matches && blocks_commute && block_types_match && order_matches && frobenius_swaps_outer;
            StructuralCheck {
                c,
                finals_in_parabolic: inside,
                embedded_finals: embedded,
                intersection_matches,
                blocks,
                blocks_commute,
                block_types_match,
                order_matches,
                frobenius_swaps_outer,
                passed,
            }
        })
        .collect();
    StructuralReport { passed: checks.iter().all(|c| c.passed), checks }
}
