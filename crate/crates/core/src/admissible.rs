//! The admissible set `Adm(μ)` for `μ = (1^g, 0^g)`, its permissibility
//! test, and parabolic double-coset machinery for parahoric types.

use std::collections::{HashMap, HashSet};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::affine::{CoweightSim, ExtElement, ReducedWord};
use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::weyl::{GroupContext, Side};

/// Largest rank for which `Adm(μ)` is enumerated.
pub const ADM_RANK_CAP: usize = 6;

/// Largest admissible set for which the dense Bruhat matrix is built.
pub const LEQ_ELEMENT_CAP: usize = 60_000;

/// A parahoric type `J ⊆ {0, ..., g}`. `W_J` is generated by the `s_i` with
/// `i ∉ J`, so `J = I` gives the trivial group (Iwahori level) and `J = ∅`
/// all of `W_a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ParahoricType(pub IndexSet);

impl ParahoricType {
    pub fn new(j: IndexSet) -> Self {
        ParahoricType(j)
    }

    pub fn iwahori(g: usize) -> Self {
        ParahoricType(IndexSet::full(g))
    }

    /// `{c, g - c}`.
    pub fn superspecial(g: usize, c: usize) -> Self {
        ParahoricType([c, g - c].into_iter().collect())
    }

    pub fn nodes(&self) -> IndexSet {
        self.0
    }

    /// Generators of `W_J`.
    pub fn generators(&self, g: usize) -> IndexSet {
        self.0.complement(g)
    }

    /// Every `J ⊆ {0, ..., g}`.
    pub fn all(g: usize) -> impl Iterator<Item = ParahoricType> {
        IndexSet::all_subsets(g).map(ParahoricType)
    }
}

impl std::fmt::Display for ParahoricType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// The `W_g`-orbit of `μ`: all `(ε_1, ..., ε_g; 1)` with `ε ∈ {0, 1}^g`,
/// sorted in decreasing lexicographic order.
pub fn mu_orbit(ctx: &GroupContext) -> Vec<CoweightSim> {
    let g = ctx.rank();
    let mu = CoweightSim::mu(g);
    let mut seen = HashSet::from([mu]);
    let mut stack = vec![mu];
    while let Some(l) = stack.pop() {
        for i in 1..=g {
            let s = ctx.finite_generator(i).expect("finite generator");
            let next = l.act_by(&s);
            if seen.insert(next) {
                stack.push(next);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort_by(|a, b| b.coords().cmp(a.coords()));
    out
}

/// Kottwitz-Rapoport permissibility: same `Ω`-component as `t^μ`, and every
/// vertex `a_j = ((1/2)^j, 0^{g-j})` of the base alcove moves by a vector in
/// `[-1/2, 1/2]^g`. Computed in doubled coordinates.
pub fn is_permissible(ctx: &GroupContext, x: &ExtElement) -> bool {
    let g = ctx.rank();
    if x.omega() != 1 || x.rank() != g {
        return false;
    }
    (0..=g).all(|j| {
        let vertex: Vec<i32> = (0..g).map(|i| i32::from(i < j)).collect();
        let image = x.act_on_doubled_point(&vertex);
        image.iter().zip(&vertex).all(|(y, v)| (y - v).abs() <= 1)
    })
}

/// Doubled coordinates of the base alcove vertices `a_0, ..., a_g`.
pub fn base_alcove_vertices(g: usize) -> Vec<Vec<i32>> {
    (0..=g).map(|j| (0..g).map(|i| i32::from(i < j)).collect()).collect()
}

/// All elements of `τ^k W_a` of length at most `radius`, layer by layer.
pub fn length_ball(ctx: &GroupContext, omega: i32, radius: u32) -> Vec<ExtElement> {
    let g = ctx.rank();
    let mut layer = vec![ctx.tau().pow(omega)];
    let mut out = layer.clone();
    for len in 0..radius {
        let mut next = HashSet::new();
        for x in &layer {
            for i in 0..=g {
                let y = x.mul_simple_right(i);
                if y.length() == len + 1 {
                    next.insert(y);
                }
            }
        }
        let mut next: Vec<_> = next.into_iter().collect();
        next.sort();
        out.extend_from_slice(&next);
        layer = next;
    }
    out
}

/// Whether `x ∈ W_J`: trivial `Ω`-component and reduced-word support
/// avoiding `J`.
pub fn in_wj(ctx: &GroupContext, j: ParahoricType, x: &ExtElement) -> bool {
    x.omega() == 0 && ctx.support(x).is_disjoint(j.nodes())
}

/// Whether `x ∈ W_J τ`.
pub fn in_wj_tau_coset(ctx: &GroupContext, j: ParahoricType, x: &ExtElement) -> bool {
    in_wj(ctx, j, &(*x * ctx.tau().inverse()))
}

/// Minimal element of `W_J x W_K`, by stripping left descents in `W_J` and
/// right descents in `W_K` until none remain.
pub fn double_coset_min(ctx: &GroupContext, j: ParahoricType, k: ParahoricType, x: &ExtElement) -> ExtElement {
    let g = ctx.rank();
    let left = j.generators(g);
    let right = k.generators(g);
    let mut y = *x;
    loop {
        let mut changed = false;
        for i in left.iter() {
            if y.is_left_descent(i) {
                y = y.mul_simple_left(i);
                changed = true;
            }
        }
        for i in right.iter() {
            if y.is_right_descent(i) {
                y = y.mul_simple_right(i);
                changed = true;
            }
        }
        if !changed {
            return y;
        }
    }
}

/// One-sided or two-sided reduction of an extended element by generators in `gens`.
pub fn affine_coset_min(x: &ExtElement, gens: IndexSet, side: Side) -> ExtElement {
    let mut y = *x;
    loop {
        let mut changed = false;
        for i in gens.iter() {
            if matches!(side, Side::Left | Side::TwoSided) && y.is_left_descent(i) {
                y = y.mul_simple_left(i);
                changed = true;
            }
            if matches!(side, Side::Right | Side::TwoSided) && y.is_right_descent(i) {
                y = y.mul_simple_right(i);
                changed = true;
            }
        }
        if !changed {
            return y;
        }
    }
}

/// One block of `Adm_J(μ)`: the double coset `W_J x W_J ∩ Adm(μ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmBlock {
    /// id of the minimal representative (it always lies in `Adm(μ)`)
    pub min_rep: usize,
    pub members: Vec<usize>,
}

/// Enumerated `Adm(μ)` with dense ids sorted by (length, canonical word),
/// the Bruhat relation as one bitset per element, and Hasse covers.
#[derive(Clone, Debug)]
pub struct AdmSet {
    ctx: GroupContext,
    elements: Vec<ExtElement>,
    words: Vec<ReducedWord>,
    lengths: Vec<u32>,
    index: HashMap<ExtElement, usize>,
    maximal_ids: Vec<usize>,
    /// `down[y]` holds every `x ≤ y`
    down: Vec<FixedBitSet>,
    hasse: Vec<(usize, usize)>,
}

/// Products of all subwords of `τ s_{i_1} ... s_{i_L}`, deduplicated on
/// (position, partial product).
fn subword_products(tau: ExtElement, letters: &[usize]) -> HashSet<ExtElement> {
    let mut out = HashSet::new();
    let mut visited: HashSet<(usize, ExtElement)> = HashSet::new();
    let mut stack = vec![(0usize, tau)];
    while let Some((pos, x)) = stack.pop() {
        if !visited.insert((pos, x)) {
            continue;
        }
        if pos == letters.len() {
            out.insert(x);
            continue;
        }
        stack.push((pos + 1, x));
        stack.push((pos + 1, x.mul_simple_right(letters[pos])));
    }
    out
}

/// The elements of `Adm(μ)` without any order data, unsorted.
pub fn adm_elements(ctx: &GroupContext) -> Result<Vec<ExtElement>> {
    let g = ctx.rank();
    if g > ADM_RANK_CAP {
        return Err(Error::ResourceCap { what: "admissible set enumeration", rank: g, cap: ADM_RANK_CAP });
    }
    let tau = *ctx.tau();
    let maxima: Vec<ExtElement> = mu_orbit(ctx).into_iter().map(ExtElement::translation).collect();
    let parts: Vec<HashSet<ExtElement>> = maxima
        .par_iter()
        .map(|t| {
            let word = ctx.reduced_word(t);
            debug_assert_eq!(word.tau_power, 1);
            subword_products(tau, &word.letters)
        })
        .collect();
    let mut all: HashSet<ExtElement> = HashSet::new();
    for p in parts {
        all.extend(p);
    }
    Ok(all.into_iter().collect())
}

impl AdmSet {
    /// Enumerates `Adm(μ)` as the union of subword products of the canonical
    /// reduced words of the `2^g` translations `t^λ`, `λ ∈ W μ`.
    pub fn enumerate(ctx: &GroupContext) -> Result<Self> {
        Self::from_elements(ctx, adm_elements(ctx)?)
    }

    /// Interns the elements, sorts ids and builds the order from scratch.
    fn from_elements(ctx: &GroupContext, elements: Vec<ExtElement>) -> Result<Self> {
        let g = ctx.rank();
        if elements.len() > LEQ_ELEMENT_CAP {
            return Err(Error::ResourceCap { what: "dense Bruhat matrix", rank: g, cap: LEQ_ELEMENT_CAP });
        }
        let mut keyed: Vec<(u32, ReducedWord, ExtElement)> =
            elements.into_iter().map(|x| (x.length(), ctx.reduced_word(&x), x)).collect();
        keyed.sort_by(|a, b| (a.0, &a.1.letters).cmp(&(b.0, &b.1.letters)));
        let mut set = Self::bare(ctx, keyed);
        set.build_order_from_descents()?;
        Ok(set)
    }

    fn bare(ctx: &GroupContext, keyed: Vec<(u32, ReducedWord, ExtElement)>) -> Self {
        let n = keyed.len();
        let mut elements = Vec::with_capacity(n);
        let mut words = Vec::with_capacity(n);
        let mut lengths = Vec::with_capacity(n);
        for (l, w, x) in keyed {
            lengths.push(l);
            words.push(w);
            elements.push(x);
        }
        let index: HashMap<ExtElement, usize> = elements.iter().enumerate().map(|(i, x)| (*x, i)).collect();
        let maximal_ids = mu_orbit(ctx)
            .into_iter()
            .filter_map(|l| index.get(&ExtElement::translation(l)).copied())
            .collect::<Vec<_>>();
        let mut maximal_ids = maximal_ids;
        maximal_ids.sort_unstable();
        AdmSet {
            ctx: ctx.clone(),
            elements,
            words,
            lengths,
            index,
            maximal_ids,
            down: Vec::new(),
            hasse: Vec::new(),
        }
    }

    /// `[e, y] = [e, s y] ∪ s [e, s y]` for a left descent `s` of `y`.
    fn build_order_from_descents(&mut self) -> Result<()> {
        let n = self.elements.len();
        let g = self.ctx.rank();
        let mut down: Vec<FixedBitSet> = Vec::with_capacity(n);
        for y in 0..n {
            let mut set = FixedBitSet::with_capacity(n);
            if self.lengths[y] == 0 {
                set.insert(y);
            } else {
                let x = self.elements[y];
                let i = (0..=g).find(|&i| x.is_left_descent(i)).expect("positive length has a descent");
                let sy = self.id_of(&x.mul_simple_left(i)).ok_or_else(|| {
                    Error::Falsified(format!("admissible set not downward closed below {}", self.words[y]))
                })?;
                let below = &down[sy];
                set.union_with(below);
                for z in below.ones() {
                    let sz = self.elements[z].mul_simple_left(i);
                    let id = self.id_of(&sz).ok_or_else(|| {
                        Error::Falsified(format!("admissible set not downward closed below {}", self.words[y]))
                    })?;
                    set.insert(id);
                }
            }
            down.push(set);
        }
        self.down = down;
        self.hasse = self.covers_from_down();
        Ok(())
    }

    fn covers_from_down(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for (y, set) in self.down.iter().enumerate() {
            for x in set.ones() {
                if self.lengths[x] + 1 == self.lengths[y] {
                    edges.push((x, y));
                }
            }
        }
        edges.sort_unstable();
        edges
    }

    /// Rebuilds an admissible set from stored words and cover edges (the
    /// cache path). The order is the reflexive-transitive closure of the covers.
    pub fn from_cached(ctx: &GroupContext, words: Vec<ReducedWord>, hasse: Vec<(usize, usize)>) -> Result<Self> {
        let g = ctx.rank();
        if words.len() > LEQ_ELEMENT_CAP {
            return Err(Error::ResourceCap { what: "dense Bruhat matrix", rank: g, cap: LEQ_ELEMENT_CAP });
        }
        let keyed = words
            .into_iter()
            .map(|w| {
                let x = ctx.from_reduced_word(&w)?;
                Ok((x.length(), w, x))
            })
            .collect::<Result<Vec<_>>>()?;
        let n = keyed.len();
        let mut set = Self::bare(ctx, keyed);
        let mut below: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(x, y) in &hasse {
            if x >= n || y >= n || set.lengths[x] + 1 != set.lengths[y] {
                return Err(Error::Precondition(format!("invalid cover edge ({x}, {y})")));
            }
            below[y].push(x);
        }
        let mut down: Vec<FixedBitSet> = Vec::with_capacity(n);
        for y in 0..n {
            // ids are sorted by length, so every cover below y is already closed
            let mut s = FixedBitSet::with_capacity(n);
            s.insert(y);
            for &x in &below[y] {
                s.union_with(&down[x]);
            }
            down.push(s);
        }
        set.down = down;
        set.hasse = hasse;
        set.hasse.sort_unstable();
        Ok(set)
    }

    pub fn context(&self) -> &GroupContext {
        &self.ctx
    }

    pub fn rank(&self) -> usize {
        self.ctx.rank()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ExtElement] {
        &self.elements
    }

    pub fn element(&self, id: usize) -> &ExtElement {
        &self.elements[id]
    }

    pub fn word(&self, id: usize) -> &ReducedWord {
        &self.words[id]
    }

    pub fn words(&self) -> &[ReducedWord] {
        &self.words
    }

    pub fn length(&self, id: usize) -> u32 {
        self.lengths[id]
    }

    pub fn id_of(&self, x: &ExtElement) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn contains(&self, x: &ExtElement) -> bool {
        self.index.contains_key(x)
    }

    pub fn maximal_ids(&self) -> &[usize] {
        &self.maximal_ids
    }

    /// Bruhat relation on ids.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.down[y].contains(x)
    }

    /// Every id below `y`, including `y`.
    pub fn lower_set(&self, y: usize) -> &FixedBitSet {
        &self.down[y]
    }

    pub fn hasse_edges(&self) -> &[(usize, usize)] {
        &self.hasse
    }

    /// The unique element of length zero.
    pub fn tau_id(&self) -> Option<usize> {
        self.id_of(self.ctx.tau())
    }

    /// Two-sided `W_J` minimal representative of an element, as an id.
    pub fn double_coset_min_id(&self, j: ParahoricType, id: usize) -> usize {
        let m = double_coset_min(&self.ctx, j, j, &self.elements[id]);
        self.id_of(&m).expect("double coset minimum lies below an admissible element")
    }

    /// `W_J x W_J ∩ Adm(μ)` as sorted ids.
    pub fn double_coset_members(&self, j: ParahoricType, id: usize) -> Vec<usize> {
        let target = self.double_coset_min_id(j, id);
        (0..self.len()).filter(|&v| self.double_coset_min_id(j, v) == target).collect()
    }

    /// Partition of `Adm(μ)` into the fibers over `Adm_J(μ)`, ordered by the
    /// minimal representative's (length, word), i.e. by its id.
    pub fn adm_j(&self, j: ParahoricType) -> Vec<AdmBlock> {
        let mins: Vec<usize> = (0..self.len()).map(|v| self.double_coset_min_id(j, v)).collect();
        let mut blocks: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for (v, m) in mins.into_iter().enumerate() {
            blocks.entry(m).or_default().push(v);
        }
        blocks.into_iter().map(|(min_rep, members)| AdmBlock { min_rep, members }).collect()
    }
}

/// Constructor matching the operation name used throughout the CLI.
pub fn enumerate_adm(ctx: &GroupContext) -> Result<AdmSet> {
    AdmSet::enumerate(ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_orbit_small() {
        let ctx = GroupContext::new(1).unwrap();
        let orbit = mu_orbit(&ctx);
        assert_eq!(orbit, vec![CoweightSim::new(&[1], 1).unwrap(), CoweightSim::new(&[0], 1).unwrap()]);
        let ctx = GroupContext::new(2).unwrap();
        let coords: Vec<Vec<i32>> = mu_orbit(&ctx).iter().map(|l| l.coords().to_vec()).collect();
        assert_eq!(coords, vec![vec![1, 1], vec![1, 0], vec![0, 1], vec![0, 0]]);
        for g in 1..=5 {
            let ctx = GroupContext::new(g).unwrap();
            let orbit = mu_orbit(&ctx);
            assert_eq!(orbit.len(), 1 << g);
            for l in &orbit {
                assert_eq!(l.similitude(), 1);
                for r in ctx.positive_roots() {
                    assert!(matches!(l.pair(r), -1..=1));
                }
            }
        }
    }

    #[test]
    fn alcove_vertices_fixed_by_other_walls() {
        for g in 1..=5 {
            let ctx = GroupContext::new(g).unwrap();
            for (j, a) in base_alcove_vertices(g).iter().enumerate() {
                for i in 0..=g {
                    let moved = ctx.generator(i).unwrap().act_on_doubled_point(a);
                    assert_eq!(&moved == a, i != j, "g={g} vertex {j} generator {i}");
                }
            }
        }
    }

    #[test]
    fn permissibility_examples() {
        for g in 1..=4 {
            let ctx = GroupContext::new(g).unwrap();
            assert!(is_permissible(&ctx, &ctx.t_mu()));
            assert!(is_permissible(&ctx, ctx.tau()));
            assert!(!is_permissible(&ctx, &ctx.identity()));
        }
        let ctx = GroupContext::new(1).unwrap();
        let x = ExtElement::from_letters(1, &[0, 1]).unwrap() * *ctx.tau();
        assert!(!is_permissible(&ctx, &x));
    }

    #[test]
    fn rank_one_admissible_set() {
        let ctx = GroupContext::new(1).unwrap();
        let adm = AdmSet::enumerate(&ctx).unwrap();
        assert_eq!(adm.len(), 3);
        let s0 = *ctx.generator(0).unwrap();
        let s1 = *ctx.generator(1).unwrap();
        for x in [*ctx.tau(), s0 * *ctx.tau(), s1 * *ctx.tau()] {
            assert!(adm.contains(&x));
        }
        assert_eq!(adm.tau_id(), Some(0));
        assert_eq!(adm.maximal_ids().len(), 2);
        assert_eq!(adm.hasse_edges(), &[(0, 1), (0, 2)]);
    }

    #[test]
    fn wj_membership_examples() {
        let ctx = GroupContext::new(2).unwrap();
        let j1 = ParahoricType::new([1].into_iter().collect());
        let s0s2 = ExtElement::from_letters(2, &[0, 2]).unwrap();
        assert!(in_wj(&ctx, j1, &s0s2));
        let j02 = ParahoricType::new([0, 2].into_iter().collect());
        let s1tau = *ctx.generator(1).unwrap() * *ctx.tau();
        assert!(in_wj_tau_coset(&ctx, j02, &s1tau));
        for j in ParahoricType::all(2) {
            assert!(in_wj_tau_coset(&ctx, j, ctx.tau()));
        }
    }

    #[test]
    fn double_coset_examples() {
        let ctx = GroupContext::new(2).unwrap();
        let adm = AdmSet::enumerate(&ctx).unwrap();
        assert_eq!(adm.len(), 13);
        let iwahori = ParahoricType::iwahori(2);
        for v in 0..adm.len() {
            assert_eq!(adm.double_coset_members(iwahori, v), vec![v]);
        }
        let j02 = ParahoricType::new([0, 2].into_iter().collect());
        let tau = adm.tau_id().unwrap();
        let s1tau = adm.id_of(&(*ctx.generator(1).unwrap() * *ctx.tau())).unwrap();
        assert_eq!(adm.double_coset_members(j02, tau), vec![tau, s1tau]);
        let hyperspecial_all = ParahoricType::new(IndexSet::EMPTY);
        assert_eq!(double_coset_min(&ctx, hyperspecial_all, hyperspecial_all, &ctx.t_mu()), *ctx.tau());
        assert_eq!(adm.adm_j(iwahori).len(), 13);
    }
}
