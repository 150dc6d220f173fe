//! The extended affine Weyl group `W̃ = X_*(T) ⋊ W_g` of `GSp_2g`.
//!
//! An element `t^λ u` acts on the apartment `V = R^g` by `v ↦ λ̄ + u v`,
//! where `λ̄ = (a_1 - c/2, ..., a_g - c/2)` forgets the similitude direction.
//! The base alcove is `1/2 > v_1 > v_2 > ... > v_g > 0`; its walls are the
//! fixed hyperplanes of `s_1, ..., s_g` and of `s_0` (the wall `v_1 = 1/2`).
//! The similitude component `c` of `λ` is the image in `Ω ≅ Z`.

use std::collections::HashMap;
use std::fmt;
use std::ops::Mul;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::weyl::{check_rank, height, GroupContext, Root, SignedPermutation, MAX_RANK};

/// A cocharacter of the torus of `GSp_2g`: `(a_1, ..., a_g)` plus the
/// similitude component `c`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoweightSim {
    rank: u8,
    a: [i32; MAX_RANK],
    c: i32,
}

impl CoweightSim {
    pub fn new(a: &[i32], c: i32) -> Result<Self> {
        check_rank(a.len())?;
        let mut arr = [0i32; MAX_RANK];
        arr[..a.len()].copy_from_slice(a);
        Ok(CoweightSim { rank: a.len() as u8, a: arr, c })
    }

    pub fn zero(g: usize) -> Self {
        CoweightSim { rank: g as u8, a: [0; MAX_RANK], c: 0 }
    }

    /// The minuscule coweight `μ = (1, ..., 1; 1)`.
    pub fn mu(g: usize) -> Self {
        let mut a = [0i32; MAX_RANK];
        a[..g].iter_mut().for_each(|x| *x = 1);
        CoweightSim { rank: g as u8, a, c: 1 }
    }

    pub fn rank(&self) -> usize {
        self.rank as usize
    }

    pub fn coords(&self) -> &[i32] {
        &self.a[..self.rank()]
    }

    pub fn similitude(&self) -> i32 {
        self.c
    }

    /// `a_j` for signed `j`, with `a_{-j} = c - a_j`.
    #[inline]
    fn signed_coord(&self, j: i8) -> i32 {
        if j > 0 {
            self.a[(j - 1) as usize]
        } else {
            self.c - self.a[(-j - 1) as usize]
        }
    }

    /// Pairing with a positive root.
    pub fn pair(&self, root: &Root) -> i32 {
        match *root {
            Root::Difference(i, j) => self.a[i] - self.a[j],
            Root::Sum(i, j) => self.a[i] + self.a[j] - self.c,
            Root::Long(i) => 2 * self.a[i] - self.c,
        }
    }

    /// `u · λ`: position `i` receives `a_{u^{-1}(i)}`.
    pub fn act_by(&self, u: &SignedPermutation) -> Self {
        let inv = u.inverse();
        let mut a = [0i32; MAX_RANK];
        for (i, slot) in a.iter_mut().enumerate().take(self.rank()) {
            *slot = self.signed_coord(inv.apply(i as i8 + 1));
        }
        CoweightSim { rank: self.rank, a, c: self.c }
    }

    fn add(&self, other: &Self) -> Self {
        let mut a = self.a;
        for (x, y) in a.iter_mut().zip(other.a.iter()) {
            *x += y;
        }
        CoweightSim { rank: self.rank, a, c: self.c + other.c }
    }

    fn neg(&self) -> Self {
        let mut a = self.a;
        a.iter_mut().for_each(|x| *x = -*x);
        CoweightSim { rank: self.rank, a, c: -self.c }
    }
}

impl fmt::Debug for CoweightSim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CoweightSim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.coords().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ";{})", self.c)
    }
}

impl Serialize for CoweightSim {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CoweightSim", 2)?;
        st.serialize_field("a", self.coords())?;
        st.serialize_field("c", &self.c)?;
        st.end()
    }
}

/// An element `t^λ u` of the extended affine Weyl group.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtElement {
    lambda: CoweightSim,
    u: SignedPermutation,
}

impl ExtElement {
    pub fn new(lambda: CoweightSim, u: SignedPermutation) -> Result<Self> {
        if lambda.rank() != u.rank() {
            return Err(Error::RankMismatch { left: lambda.rank(), right: u.rank() });
        }
        Ok(ExtElement { lambda, u })
    }

    pub fn identity(g: usize) -> Self {
        ExtElement { lambda: CoweightSim::zero(g), u: SignedPermutation::identity(g) }
    }

    pub fn translation(lambda: CoweightSim) -> Self {
        ExtElement { lambda, u: SignedPermutation::identity(lambda.rank()) }
    }

    pub fn finite(u: SignedPermutation) -> Self {
        ExtElement { lambda: CoweightSim::zero(u.rank()), u }
    }

    /// Simple affine reflection. `s_0` is the reflection in the wall
    /// `<v, 2 e_1> = 1`, realized as `t^{(1, 0, ..., 0; 0)}` times the sign
    /// flip at position 1.
    pub fn simple(g: usize, i: usize) -> Result<Self> {
        check_rank(g)?;
        if i > g {
            return Err(Error::IndexOutOfRange { index: i, rank: g });
        }
        Ok(Self::identity(g).mul_simple_right(i))
    }

    pub fn rank(&self) -> usize {
        self.u.rank()
    }

    pub fn translation_part(&self) -> CoweightSim {
        self.lambda
    }

    pub fn finite_part(&self) -> SignedPermutation {
        self.u
    }

    /// Image in `Ω ≅ Z`.
    pub fn omega(&self) -> i32 {
        self.lambda.c
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rank())
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch { left: self.rank(), right: other.rank() });
        }
        Ok(self.compose_unchecked(other))
    }

    #[inline]
    fn compose_unchecked(&self, other: &Self) -> Self {
        ExtElement {
            lambda: self.lambda.add(&other.lambda.act_by(&self.u)),
            u: self.u.compose_unchecked(&other.u),
        }
    }

    pub fn inverse(&self) -> Self {
        let inv = self.u.inverse();
        ExtElement { lambda: self.lambda.neg().act_by(&inv), u: inv }
    }

    pub fn pow(&self, k: i32) -> Self {
        let base = if k < 0 { self.inverse() } else { *self };
        (0..k.unsigned_abs()).fold(Self::identity(self.rank()), |acc, _| acc.compose_unchecked(&base))
    }

    /// The translation part of `x · t^ν`, i.e. the action on coweights
    /// `ν ↦ λ + u·ν`.
    pub fn act_on_coweight(&self, nu: &CoweightSim) -> Result<CoweightSim> {
        if nu.rank() != self.rank() {
            return Err(Error::RankMismatch { left: self.rank(), right: nu.rank() });
        }
        Ok(self.lambda.add(&nu.act_by(&self.u)))
    }

    /// Doubled coordinates of `x(p)` for a point `p` given in doubled
    /// coordinates (`2p` integral).
    pub fn act_on_doubled_point(&self, p2: &[i32]) -> Vec<i32> {
        let inv = self.u.inverse();
        (0..self.rank())
            .map(|i| {
                let j = inv.apply(i as i8 + 1);
                let moved = if j > 0 { p2[(j - 1) as usize] } else { -p2[(-j - 1) as usize] };
                2 * self.lambda.a[i] - self.lambda.c + moved
            })
            .collect()
    }

    /// Iwahori-Matsumoto length: the number of affine root hyperplanes
    /// separating the base alcove from its image.
    pub fn length(&self) -> u32 {
        let g = self.rank();
        let inv = self.u.inverse();
        let mut len = 0u32;
        let mut add = |root: Root| {
            let n = self.lambda.pair(&root);
            let d = if root.stays_positive(&inv) { n } else { n - 1 };
            len += d.unsigned_abs();
        };
        for i in 0..g {
            for j in i + 1..g {
                add(Root::Difference(i, j));
                add(Root::Sum(i, j));
            }
            add(Root::Long(i));
        }
        len
    }

    /// `x(ρ)` scaled by `2(g + 1)`, with `ρ/(2(g+1))` the barycenter of the
    /// base alcove. The image never lies on a wall.
    #[inline]
    fn scaled_barycenter_image(&self, i: usize) -> i32 {
        let g = self.rank() as i32;
        let lam = &self.lambda;
        // (u ρ)_i = ρ_{u^{-1}(i)}; find u^{-1}(i) by scanning the window.
        let k = i as i8 + 1;
        let pos = self.u.window().iter().position(|&v| v == k || v == -k).expect("valid window");
        let signed = if self.u.window()[pos] > 0 { pos as i8 + 1 } else { -(pos as i8 + 1) };
        (g + 1) * (2 * lam.a[i] - lam.c) + height(self.rank(), signed)
    }

    /// Whether `ℓ(s_i x) < ℓ(x)`.
    pub fn is_left_descent(&self, i: usize) -> bool {
        let g = self.rank();
        match i {
            0 => self.scaled_barycenter_image(0) > g as i32 + 1,
            i if i < g => self.scaled_barycenter_image(i - 1) < self.scaled_barycenter_image(i),
            _ => self.scaled_barycenter_image(g - 1) < 0,
        }
    }

    /// Whether `ℓ(x s_i) < ℓ(x)`.
    pub fn is_right_descent(&self, i: usize) -> bool {
        self.inverse().is_left_descent(i)
    }

    /// `s_i · x`.
    pub fn mul_simple_left(&self, i: usize) -> Self {
        let g = self.rank();
        let mut lambda = self.lambda;
        let u;
        if i == 0 {
            lambda.a[0] = 1 + lambda.c - lambda.a[0];
            let flipped: Vec<i32> = self
                .u
                .window()
                .iter()
                .map(|&v| if v.abs() == 1 { -(v as i32) } else { v as i32 })
                .collect();
            u = SignedPermutation::from_window(&flipped).expect("valid window");
        } else {
            if i < g {
                lambda.a.swap(i - 1, i);
            } else {
                lambda.a[g - 1] = lambda.c - lambda.a[g - 1];
            }
            u = self.u.mul_simple_left(i);
        }
        ExtElement { lambda, u }
    }

    /// `x · s_i`.
    pub fn mul_simple_right(&self, i: usize) -> Self {
        if i == 0 {
            // t^λ u · t^{e_1} flip_1 = t^{λ + u e_1} (u flip_1)
            let mut lambda = self.lambda;
            let v = self.u.window()[0];
            let pos = (v.unsigned_abs() - 1) as usize;
            lambda.a[pos] += v.signum() as i32;
            let mut flipped = self.u.window_i32();
            flipped[0] = -flipped[0];
            let u = SignedPermutation::from_window(&flipped).expect("valid window");
            ExtElement { lambda, u }
        } else {
            ExtElement { lambda: self.lambda, u: self.u.mul_simple_right(i) }
        }
    }

    /// Product of simple reflections `s_{i_1} ... s_{i_k}`.
    pub fn from_letters(g: usize, letters: &[usize]) -> Result<Self> {
        check_rank(g)?;
        let mut x = Self::identity(g);
        for &i in letters {
            if i > g {
                return Err(Error::IndexOutOfRange { index: i, rank: g });
            }
            x = x.mul_simple_right(i);
        }
        Ok(x)
    }

    /// Reduces `t^μ` by finite right descents. The coset `t^μ W_g` has a
    /// unique minimal element, so this lands on the length-zero element when
    /// one exists.
    pub(crate) fn find_tau(g: usize) -> Result<Self> {
        let mut x = Self::translation(CoweightSim::mu(g));
        'outer: loop {
            for i in 1..=g {
                if x.is_right_descent(i) {
                    x = x.mul_simple_right(i);
                    continue 'outer;
                }
            }
            break;
        }
        if x.length() == 0 {
            Ok(x)
        } else {
            Err(Error::TauSearchFailed(g))
        }
    }
}

impl Mul for ExtElement {
    type Output = ExtElement;

    /// Panics on rank mismatch.
    fn mul(self, rhs: Self) -> Self {
        self.compose(&rhs).expect("rank mismatch in extended affine product")
    }
}

impl fmt::Debug for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t^{}·{}", self.lambda, self.u)
    }
}

/// Canonical word `x = τ^k · s_{i_1} ⋯ s_{i_L}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ReducedWord {
    pub tau_power: i32,
    pub letters: Vec<usize>,
}

impl ReducedWord {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl fmt::Display for ReducedWord {
    /// Whitespace-separated `t`/`t^-1` and `s<i>` tokens; `id` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tok = if self.tau_power >= 0 { "t" } else { "t^-1" };
        let mut parts: Vec<String> = vec![tok.to_string(); self.tau_power.unsigned_abs() as usize];
        parts.extend(self.letters.iter().map(|i| format!("s{i}")));
        if parts.is_empty() {
            write!(f, "id")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

impl GroupContext {
    /// Simple affine reflection `s_i` as an extended element.
    pub fn simple_affine(&self, i: usize) -> Result<ExtElement> {
        self.generator(i).copied()
    }

    pub fn t_mu(&self) -> ExtElement {
        ExtElement::translation(CoweightSim::mu(self.rank()))
    }

    /// Canonical reduced word: `x = τ^k x'` with `x' ∈ W_a`, and the letters
    /// of `x'` chosen by stripping the smallest left descent at every step.
    pub fn reduced_word(&self, x: &ExtElement) -> ReducedWord {
        let k = x.omega();
        let mut rest = self.tau().pow(-k) * *x;
        let g = self.rank();
        let mut letters = Vec::with_capacity(rest.length() as usize);
        'outer: loop {
            for i in 0..=g {
                if rest.is_left_descent(i) {
                    letters.push(i);
                    rest = rest.mul_simple_left(i);
                    continue 'outer;
                }
            }
            break;
        }
        debug_assert!(rest.is_identity());
        ReducedWord { tau_power: k, letters }
    }

    /// The element spelled by a canonical word.
    pub fn from_reduced_word(&self, word: &ReducedWord) -> Result<ExtElement> {
        let body = ExtElement::from_letters(self.rank(), &word.letters)?;
        Ok(self.tau().pow(word.tau_power) * body)
    }

    /// Letters of `x τ^{-k}`, i.e. the word `w` in the form `x = w τ^k`.
    pub fn w_tau_word(&self, x: &ExtElement) -> Vec<usize> {
        let w = *x * self.tau().pow(-x.omega());
        self.reduced_word(&w).letters
    }

    /// `x = w τ^k` rendered as `s<i> ... t ... t`, or `id`.
    pub fn w_tau_string(&self, x: &ExtElement) -> String {
        let k = x.omega();
        let tok = if k >= 0 { "t" } else { "t^-1" };
        let mut parts: Vec<String> = self.w_tau_word(x).iter().map(|i| format!("s{i}")).collect();
        parts.extend(std::iter::repeat_n(tok.to_string(), k.unsigned_abs() as usize));
        if parts.is_empty() {
            "id".into()
        } else {
            parts.join(" ")
        }
    }

    /// Generators occurring in reduced words of `τ^{-k} x`.
    pub fn support(&self, x: &ExtElement) -> IndexSet {
        self.reduced_word(x).letters.into_iter().collect()
    }

    /// `τ x τ^{-1}`.
    pub fn conj_by_tau(&self, x: &ExtElement) -> ExtElement {
        *self.tau() * *x * self.tau().inverse()
    }

    /// Relabels the canonical word letterwise by `i ↦ g - i`.
    pub fn diagram_sigma(&self, x: &ExtElement) -> ExtElement {
        let w = self.reduced_word(x);
        let letters: Vec<usize> = w.letters.iter().map(|&i| self.frobenius(i)).collect();
        self.from_reduced_word(&ReducedWord { tau_power: w.tau_power, letters })
            .expect("relabelled letters stay in range")
    }
}

/// Bruhat order on `W̃`: elements in different `Ω`-components are
/// incomparable; otherwise the usual recursion on a left descent of `y`.
pub fn bruhat_leq(x: &ExtElement, y: &ExtElement) -> bool {
    BruhatSession::default().leq(x, y)
}

/// Memoized Bruhat comparisons. Not shared across threads.
#[derive(Default)]
pub struct BruhatSession {
    memo: HashMap<(ExtElement, ExtElement), bool>,
}

impl BruhatSession {
    pub fn leq(&mut self, x: &ExtElement, y: &ExtElement) -> bool {
        if x.omega() != y.omega() {
            return false;
        }
        self.leq_same_component(*x, *y, x.length(), y.length())
    }

    fn leq_same_component(&mut self, x: ExtElement, y: ExtElement, lx: u32, ly: u32) -> bool {
        if lx > ly {
            return false;
        }
        if ly == 0 {
            return x == y;
        }
        if lx == ly {
            return x == y;
        }
        if let Some(&hit) = self.memo.get(&(x, y)) {
            return hit;
        }
        let g = y.rank();
        let i = (0..=g).find(|&i| y.is_left_descent(i)).expect("nonzero length has a descent");
        let sy = y.mul_simple_left(i);
        let ans = if x.is_left_descent(i) {
            self.leq_same_component(x.mul_simple_left(i), sy, lx - 1, ly - 1)
        } else {
            self.leq_same_component(x, sy, lx, ly - 1)
        };
        self.memo.insert((x, y), ans);
        ans
    }
}
