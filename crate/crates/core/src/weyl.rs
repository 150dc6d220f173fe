//! The finite Weyl group `W_g` of type `C_g`, realized as signed permutations.
//!
//! An element `w` is stored in window notation `(w(1), ..., w(g))` and
//! extended to `{±1, ..., ±g}` by `w(-i) = -w(i)`. Simple reflections are
//! placed so that `s_i` (`1 <= i < g`) swaps window positions `i` and `i + 1`
//! and `s_g` negates position `g`. With this placement the simple roots are
//! `e_i - e_{i+1}` and `2 e_g`, `S_g = <s_1, ..., s_{g-1}>`, and the
//! subgroup `W_c = <s_{g-c+1}, ..., s_g>` acts on the last `c` positions.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::Mul;

use serde::Serialize;

use crate::affine::ExtElement;
use crate::error::{Error, Result};
use crate::index_set::IndexSet;

/// Hard cap on the rank; bounds every table in the crate.
pub const MAX_RANK: usize = 12;

pub(crate) fn check_rank(g: usize) -> Result<()> {
    if (1..=MAX_RANK).contains(&g) {
        Ok(())
    } else {
        Err(Error::RankOutOfRange { rank: g, max: MAX_RANK })
    }
}

/// Position of a signed value along the dominant direction `rho = (g, ..., 1)`.
///
/// A root `beta` is positive iff `rho(beta) > 0`, and `rho(±e_k) = ±(g + 1 - k)`.
#[inline]
pub(crate) fn height(g: usize, v: i8) -> i32 {
    let m = g as i32 + 1 - (v.unsigned_abs() as i32);
    if v > 0 {
        m
    } else {
        -m
    }
}

/// An element of `W_g` in window notation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPermutation {
    rank: u8,
    window: [i8; MAX_RANK],
}

impl SignedPermutation {
    pub fn identity(g: usize) -> Self {
        assert!(g <= MAX_RANK, "rank {g} exceeds {MAX_RANK}");
        let mut window = [0i8; MAX_RANK];
        for (k, slot) in window.iter_mut().enumerate().take(g) {
            *slot = k as i8 + 1;
        }
        SignedPermutation { rank: g as u8, window }
    }

    /// Builds an element from its window, validating that the absolute values
    /// form a permutation of `{1, ..., g}`.
    pub fn from_window(window: &[i32]) -> Result<Self> {
        let g = window.len();
        check_rank(g)?;
        let mut seen = [false; MAX_RANK];
        let mut w = [0i8; MAX_RANK];
        for (k, &v) in window.iter().enumerate() {
            let a = v.unsigned_abs() as usize;
            if a == 0 || a > g || seen[a - 1] {
                return Err(Error::InvalidWindow(window.to_vec()));
            }
            seen[a - 1] = true;
            w[k] = v as i8;
        }
        Ok(SignedPermutation { rank: g as u8, window: w })
    }

    /// The finite simple reflection `s_i`, `1 <= i <= g`.
    pub fn simple(g: usize, i: usize) -> Result<Self> {
        check_rank(g)?;
        if !(1..=g).contains(&i) {
            return Err(Error::IndexOutOfRange { index: i, rank: g });
        }
        Ok(Self::identity(g).mul_simple_right(i))
    }

    /// The product `s_{i_1} ... s_{i_k}` of finite simple reflections.
    pub fn from_word(g: usize, letters: &[usize]) -> Result<Self> {
        check_rank(g)?;
        let mut w = Self::identity(g);
        for &i in letters {
            if !(1..=g).contains(&i) {
                return Err(Error::IndexOutOfRange { index: i, rank: g });
            }
            w = w.mul_simple_right(i);
        }
        Ok(w)
    }

    pub fn rank(&self) -> usize {
        self.rank as usize
    }

    pub fn window(&self) -> &[i8] {
        &self.window[..self.rank()]
    }

    pub fn window_i32(&self) -> Vec<i32> {
        self.window().iter().map(|&v| v as i32).collect()
    }

    /// Evaluates `w(i)` for `i` in `{±1, ..., ±g}`.
    #[inline]
    pub fn apply(&self, i: i8) -> i8 {
        debug_assert!(i != 0 && (i.unsigned_abs() as usize) <= self.rank());
        if i > 0 {
            self.window[(i - 1) as usize]
        } else {
            -self.window[(-i - 1) as usize]
        }
    }

    pub fn is_identity(&self) -> bool {
        self.window().iter().enumerate().all(|(k, &v)| v == k as i8 + 1)
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { left: self.rank(), right: other.rank() });
        }
        Ok(self.compose_unchecked(other))
    }

    #[inline]
    pub(crate) fn compose_unchecked(&self, other: &Self) -> Self {
        let mut window = [0i8; MAX_RANK];
        for k in 0..self.rank() {
            window[k] = self.apply(other.window[k]);
        }
        SignedPermutation { rank: self.rank, window }
    }

    pub fn inverse(&self) -> Self {
        let mut window = [0i8; MAX_RANK];
        for (k, &v) in self.window().iter().enumerate() {
            let pos = (v.unsigned_abs() - 1) as usize;
            window[pos] = if v > 0 { k as i8 + 1 } else { -(k as i8 + 1) };
        }
        SignedPermutation { rank: self.rank, window }
    }

    /// `self · s_i`: acts on window positions.
    #[inline]
    pub fn mul_simple_right(&self, i: usize) -> Self {
        let g = self.rank();
        debug_assert!((1..=g).contains(&i));
        let mut w = *self;
        if i < g {
            w.window.swap(i - 1, i);
        } else {
            w.window[g - 1] = -w.window[g - 1];
        }
        w
    }

    /// `s_i · self`: acts on window values.
    #[inline]
    pub fn mul_simple_left(&self, i: usize) -> Self {
        let g = self.rank();
        debug_assert!((1..=g).contains(&i));
        let mut w = *self;
        for v in w.window.iter_mut().take(g) {
            let a = v.unsigned_abs() as usize;
            if i < g {
                if a == i {
                    *v = v.signum() * (i as i8 + 1);
                } else if a == i + 1 {
                    *v = v.signum() * i as i8;
                }
            } else if a == g {
                *v = -*v;
            }
        }
        w
    }

    /// Coxeter length, counted as the number of positive roots sent to
    /// negative roots.
    pub fn length(&self) -> u32 {
        let g = self.rank();
        let h: Vec<i32> = self.window().iter().map(|&v| height(g, v)).collect();
        let mut len = 0u32;
        for i in 0..g {
            if h[i] < 0 {
                len += 1;
            }
            for j in i + 1..g {
                if h[i] < h[j] {
                    len += 1;
                }
                if h[i] + h[j] < 0 {
                    len += 1;
                }
            }
        }
        len
    }

    /// Whether `ℓ(self · s_i) < ℓ(self)`.
    #[inline]
    pub fn is_right_descent(&self, i: usize) -> bool {
        let g = self.rank();
        if i < g {
            height(g, self.window[i - 1]) < height(g, self.window[i])
        } else {
            self.window[g - 1] < 0
        }
    }

    /// Whether `ℓ(s_i · self) < ℓ(self)`.
    pub fn is_left_descent(&self, i: usize) -> bool {
        self.inverse().is_right_descent(i)
    }

    /// Final in the sense of having no right descent in `S_g`.
    pub fn is_final(&self) -> bool {
        (1..self.rank()).all(|i| !self.is_right_descent(i))
    }

    /// Lexicographically smallest reduced word, found by repeatedly stripping
    /// the smallest left descent.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut word = Vec::new();
        let mut inv = self.inverse();
        'outer: loop {
            for i in 1..=self.rank() {
                // left descent of self == right descent of its inverse
                if inv.is_right_descent(i) {
                    word.push(i);
                    inv = inv.mul_simple_right(i);
                    continue 'outer;
                }
            }
            break;
        }
        word
    }

    /// Generators occurring in any (equivalently every) reduced word.
    pub fn support(&self) -> IndexSet {
        self.reduced_word().into_iter().collect()
    }

    /// The embedding `W_c ⊂ W_g` (`s_j ↦ s_{g-c+j}`), moving `self` onto the
    /// last `c` window positions.
    pub fn embed_into(&self, g: usize) -> Result<Self> {
        let c = self.rank();
        check_rank(g)?;
        if c > g {
            return Err(Error::RankMismatch { left: c, right: g });
        }
        let shift = (g - c) as i8;
        let mut w = Self::identity(g);
        for k in 0..c {
            let v = self.window[k];
            w.window[g - c + k] = v.signum() * (v.abs() + shift);
        }
        Ok(w)
    }
}

impl Mul for SignedPermutation {
    type Output = SignedPermutation;

    /// Panics on rank mismatch; use [`SignedPermutation::compose`] to get an error instead.
    fn mul(self, rhs: Self) -> Self {
        self.compose(&rhs).expect("rank mismatch in signed permutation product")
    }
}

impl fmt::Debug for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.window().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for SignedPermutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.window().iter().map(|&v| v as i32))
    }
}

/// Renders a word in simple reflections as `s1 s2 ...`, or `id` when empty.
pub fn format_word(letters: &[usize]) -> String {
    if letters.is_empty() {
        return "id".to_string();
    }
    letters.iter().map(|i| format!("s{i}")).collect::<Vec<_>>().join(" ")
}

/// A positive root of `C_g`; positions are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Root {
    /// `e_i - e_j`, `i < j`
    Difference(usize, usize),
    /// `e_i + e_j`, `i < j`
    Sum(usize, usize),
    /// `2 e_i`
    Long(usize),
}

impl Root {
    /// Whether `u · self` is again a positive root.
    pub fn stays_positive(&self, u: &SignedPermutation) -> bool {
        let g = u.rank();
        let h = |k: usize| height(g, u.window[k]);
        match *self {
            Root::Difference(i, j) => h(i) > h(j),
            Root::Sum(i, j) => h(i) + h(j) > 0,
            Root::Long(i) => h(i) > 0,
        }
    }
}

/// Which side(s) a coset reduction strips descents from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    TwoSided,
}

/// Immutable per-rank tables: simple generators, positive roots, the
/// Frobenius involution of the affine diagram and the length-zero element `τ`.
#[derive(Clone, Debug)]
pub struct GroupContext {
    g: usize,
    generators: Vec<ExtElement>,
    positive_roots: Vec<Root>,
    frobenius: Vec<usize>,
    tau: ExtElement,
}

impl GroupContext {
    pub fn new(g: usize) -> Result<Self> {
        check_rank(g)?;
        let generators = (0..=g)
            .map(|i| ExtElement::simple(g, i))
            .collect::<Result<Vec<_>>>()?;
        let mut positive_roots = Vec::with_capacity(g * g);
        for i in 0..g {
            for j in i + 1..g {
                positive_roots.push(Root::Difference(i, j));
            }
        }
        for i in 0..g {
            for j in i + 1..g {
                positive_roots.push(Root::Sum(i, j));
            }
        }
        positive_roots.extend((0..g).map(Root::Long));
        let frobenius = (0..=g).map(|i| g - i).collect();
        let tau = ExtElement::find_tau(g)?;
        Ok(GroupContext { g, generators, positive_roots, frobenius, tau })
    }

    pub fn rank(&self) -> usize {
        self.g
    }

    /// Simple affine reflection `s_i`, `0 <= i <= g`.
    pub fn generator(&self, i: usize) -> Result<&ExtElement> {
        self.generators.get(i).ok_or(Error::IndexOutOfRange { index: i, rank: self.g })
    }

    pub fn generators(&self) -> &[ExtElement] {
        &self.generators
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    /// The diagram involution `i ↦ g - i`.
    pub fn frobenius(&self, i: usize) -> usize {
        self.frobenius[i]
    }

    pub fn tau(&self) -> &ExtElement {
        &self.tau
    }

    /// `w_∅`, the finite part of `τ`.
    pub fn w_empty(&self) -> SignedPermutation {
        self.tau.finite_part()
    }

    pub fn identity(&self) -> ExtElement {
        ExtElement::identity(self.g)
    }

    /// Finite elements `s_1 ... s_g`.
    pub fn finite_generator(&self, i: usize) -> Result<SignedPermutation> {
        SignedPermutation::simple(self.g, i)
    }

    /// Minimal-length representatives of the cosets `u S_g`, sorted by
    /// length and then by reduced word.
    pub fn final_elements(&self) -> Vec<SignedPermutation> {
        final_elements(self.g)
    }

    /// Embeds a word in the generators of `W_c` into `W_g`.
    pub fn embed_subgroup(&self, c: usize, letters: &[usize]) -> Result<SignedPermutation> {
        if !(1..=self.g).contains(&c) {
            return Err(Error::IndexOutOfRange { index: c, rank: self.g });
        }
        let mut w = SignedPermutation::identity(self.g);
        for &j in letters {
            if !(1..=c).contains(&j) {
                return Err(Error::IndexOutOfRange { index: j, rank: c });
            }
            w = w.mul_simple_right(self.g - c + j);
        }
        Ok(w)
    }

    pub fn coset_min_rep(&self, u: &SignedPermutation, gens: IndexSet, side: Side) -> SignedPermutation {
        coset_min_rep(u, gens, side)
    }
}

/// Constructor matching the operation name used throughout the CLI.
pub fn make_context(g: usize) -> Result<GroupContext> {
    GroupContext::new(g)
}

/// Strips descents drawn from `gens ⊆ {1, ..., g}` on the requested side(s)
/// until none remain; the result is the unique minimal element of the coset.
pub fn coset_min_rep(u: &SignedPermutation, gens: IndexSet, side: Side) -> SignedPermutation {
    let g = u.rank();
    let mut w = *u;
    loop {
        let mut changed = false;
        if matches!(side, Side::Left | Side::TwoSided) {
            for i in gens.iter().filter(|&i| (1..=g).contains(&i)) {
                if w.is_left_descent(i) {
                    w = w.mul_simple_left(i);
                    changed = true;
                }
            }
        }
        if matches!(side, Side::Right | Side::TwoSided) {
            for i in gens.iter().filter(|&i| (1..=g).contains(&i)) {
                if w.is_right_descent(i) {
                    w = w.mul_simple_right(i);
                    changed = true;
                }
            }
        }
        if !changed {
            return w;
        }
    }
}

/// The `2^g` final elements of `W_g`, sorted by (length, reduced word).
pub fn final_elements(g: usize) -> Vec<SignedPermutation> {
    let s_g = IndexSet::finite(g).without(g);
    let mut out: Vec<(u32, Vec<usize>, SignedPermutation)> = (0u32..(1 << g))
        .map(|mask| {
            let window: Vec<i32> =
                (1..=g as i32).map(|k| if mask & (1 << (k - 1)) != 0 { -k } else { k }).collect();
            let u = SignedPermutation::from_window(&window).expect("valid window");
            let w = coset_min_rep(&u, s_g, Side::Right);
            (w.length(), w.reduced_word(), w)
        })
        .collect();
    out.sort();
    out.into_iter().map(|(_, _, w)| w).collect()
}

/// Every element of `W_g`, by closure under the simple generators.
pub fn enumerate_group(g: usize) -> Result<Vec<SignedPermutation>> {
    check_rank(g)?;
    let id = SignedPermutation::identity(g);
    let mut seen = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    let mut out = vec![id];
    while let Some(w) = queue.pop_front() {
        for i in 1..=g {
            let next = w.mul_simple_right(i);
            if seen.insert(next) {
                out.push(next);
                queue.push_back(next);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(w: &[i32]) -> SignedPermutation {
        SignedPermutation::from_window(w).unwrap()
    }

    #[test]
    fn context_tables() {
        let c1 = GroupContext::new(1).unwrap();
        assert_eq!(c1.positive_roots(), &[Root::Long(0)]);
        assert_eq!(c1.generators().len(), 2);

        let c2 = GroupContext::new(2).unwrap();
        assert_eq!(c2.positive_roots().len(), 4);
        assert_eq!(c2.finite_generator(1).unwrap(), sp(&[2, 1]));
        assert_eq!(c2.finite_generator(2).unwrap(), sp(&[1, -2]));

        let c3 = GroupContext::new(3).unwrap();
        assert_eq!(c3.positive_roots().len(), 9);
        assert_eq!(c3.frobenius(0), 3);
        assert_eq!(c3.frobenius(1), 2);
        for i in 0..=3 {
            assert_eq!(c3.frobenius(c3.frobenius(i)), i);
        }
    }

    #[test]
    fn rank_out_of_range() {
        assert!(matches!(GroupContext::new(0), Err(Error::RankOutOfRange { .. })));
        assert!(matches!(GroupContext::new(13), Err(Error::RankOutOfRange { .. })));
    }

    #[test]
    fn invalid_windows_rejected() {
        assert!(SignedPermutation::from_window(&[1, 1]).is_err());
        assert!(SignedPermutation::from_window(&[1, 3]).is_err());
        assert!(SignedPermutation::from_window(&[0, 1]).is_err());
    }

    #[test]
    fn composition_examples() {
        let s1 = SignedPermutation::simple(2, 1).unwrap();
        let s2 = SignedPermutation::simple(2, 2).unwrap();
        assert!((s2 * s2).is_identity());
        let p = s1.compose(&s2).unwrap();
        assert_eq!(p, sp(&[2, -1]));
        assert_eq!(p.inverse(), sp(&[-2, 1]));
        assert!(matches!(
            s1.compose(&SignedPermutation::identity(3)),
            Err(Error::RankMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn simple_multiplication_matches_composition() {
        for g in 1..=4 {
            for u in enumerate_group(g).unwrap().into_iter().step_by(7) {
                for i in 1..=g {
                    let s = SignedPermutation::simple(g, i).unwrap();
                    assert_eq!(u.mul_simple_right(i), u * s);
                    assert_eq!(u.mul_simple_left(i), s * u);
                }
            }
        }
    }

    #[test]
    fn final_elements_small_ranks() {
        let f2 = final_elements(2);
        let words: Vec<_> = f2.iter().map(|w| w.reduced_word()).collect();
        assert_eq!(words, vec![vec![], vec![2], vec![1, 2], vec![2, 1, 2]]);

        let f1 = final_elements(1);
        assert_eq!(f1, vec![SignedPermutation::identity(1), sp(&[-1])]);

        let lens: Vec<u32> = final_elements(3).iter().map(|w| w.length()).collect();
        assert_eq!(lens, vec![0, 1, 2, 3, 3, 4, 5, 6]);
    }

    #[test]
    fn embedding_examples() {
        let c3 = GroupContext::new(3).unwrap();
        assert_eq!(c3.embed_subgroup(1, &[1]).unwrap(), SignedPermutation::simple(3, 3).unwrap());
        let c4 = GroupContext::new(4).unwrap();
        assert_eq!(c4.embed_subgroup(2, &[2]).unwrap(), SignedPermutation::simple(4, 4).unwrap());
        assert_eq!(c4.embed_subgroup(2, &[1]).unwrap(), SignedPermutation::simple(4, 3).unwrap());
        let c2 = GroupContext::new(2).unwrap();
        for u in enumerate_group(2).unwrap() {
            assert_eq!(c2.embed_subgroup(2, &u.reduced_word()).unwrap(), u);
        }
        assert!(c2.embed_subgroup(1, &[2]).is_err());
        assert!(c2.embed_subgroup(3, &[1]).is_err());
    }

    #[test]
    fn coset_reduction_examples() {
        let u = SignedPermutation::from_word(2, &[1, 2]).unwrap();
        let gens: IndexSet = [1].into_iter().collect();
        assert_eq!(coset_min_rep(&u, gens, Side::Left), SignedPermutation::simple(2, 2).unwrap());
        let id = SignedPermutation::identity(3);
        assert_eq!(coset_min_rep(&id, IndexSet::finite(3), Side::TwoSided), id);
        let w = SignedPermutation::from_word(2, &[2, 1, 2]).unwrap();
        assert!(coset_min_rep(&w, IndexSet::finite(2), Side::TwoSided).is_identity());
    }

    #[test]
    fn reduced_word_is_reduced_and_reproduces() {
        for g in 1..=4 {
            for u in enumerate_group(g).unwrap() {
                let word = u.reduced_word();
                assert_eq!(word.len() as u32, u.length());
                assert_eq!(SignedPermutation::from_word(g, &word).unwrap(), u);
            }
        }
    }
}
