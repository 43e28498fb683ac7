//! Canonical normal forms for `G = ⋃ G_n`, `G_n = G_{n-1} *_{B_{n-1}} H_n`.
//!
//! An element of level `n >= 1` is stored as
//!
//! ```text
//! Alt(n; x_1, ..., x_k; tail)
//! ```
//!
//! where the letters alternate between `Left` letters (canonical
//! representatives of non-trivial cosets of `G_{n-1} / B_{n-1}`, themselves
//! canonical forms of lower level) and `Right` letters (canonical
//! representatives of non-trivial cosets of `H_n / B_{n-1}`), at least one
//! letter is a `Right` letter, and `tail ∈ B_{n-1}`. Level-0 elements are
//! `Base(h)` with `h ∈ H_0`.
//!
//! The representative of `x B_{n-1}` for `x ∈ G_{n-1}` keeps the letters of
//! `x` and reduces its tail modulo `B_{n-1}` (via `split_chain`), or for a
//! level-0 `x` composes the `H_0 / B_0` and `B_0 / B_{n-1}` transversals.
//! Residues are pushed into the outer tail, which is legal because every
//! `B_k` with `k <= n-1` is central in `G_n`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::system::FactorSystem;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Syllable<E> {
    pub level: usize,
    pub elem: E,
}

impl<E> Syllable<E> {
    pub fn new(level: usize, elem: E) -> Self {
        Syllable { level, elem }
    }
}

/// An unreduced product of factor elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word<E> {
    pub syllables: Vec<Syllable<E>>,
}

impl<E> Default for Word<E> {
    fn default() -> Self {
        Word {
            syllables: Vec::new(),
        }
    }
}

impl<E> Word<E> {
    pub fn new(syllables: Vec<Syllable<E>>) -> Self {
        Word { syllables }
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn max_level(&self) -> usize {
        self.syllables.iter().map(|s| s.level).max().unwrap_or(0)
    }
}

impl<E: Clone> Word<E> {
    pub fn concat(&self, other: &Word<E>) -> Word<E> {
        let mut syllables = self.syllables.clone();
        syllables.extend(other.syllables.iter().cloned());
        Word { syllables }
    }

    /// Formal inverse: reversed syllables, each inverted in its factor.
    pub fn inverse<S: FactorSystem<Elem = E>>(&self, sys: &S) -> Word<E> {
        Word {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable::new(s.level, sys.factor_inv(s.level, &s.elem)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Letter<E> {
    Left(CanonicalForm<E>),
    Right(E),
}

impl<E> Letter<E> {
    fn is_right(&self) -> bool {
        matches!(self, Letter::Right(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AltForm<E> {
    pub level: usize,
    pub letters: Vec<Letter<E>>,
    pub tail: E,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CanonicalForm<E> {
    Base(E),
    Alt(AltForm<E>),
}

impl<E> CanonicalForm<E> {
    pub fn level(&self) -> usize {
        match self {
            CanonicalForm::Base(_) => 0,
            CanonicalForm::Alt(a) => a.level,
        }
    }
}

/// A canonical form together with its level `min { m : g ∈ G_m }`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement<E> {
    cf: CanonicalForm<E>,
    level: usize,
}

impl<E> GroupElement<E> {
    pub(crate) fn from_cf(cf: CanonicalForm<E>) -> Self {
        let level = cf.level();
        GroupElement { cf, level }
    }

    pub fn canonical_form(&self) -> &CanonicalForm<E> {
        &self.cf
    }

    pub fn into_canonical_form(self) -> CanonicalForm<E> {
        self.cf
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// The factor value of a level-0 element.
    pub fn base_value(&self) -> Option<&E> {
        match &self.cf {
            CanonicalForm::Base(h) => Some(h),
            CanonicalForm::Alt(_) => None,
        }
    }
}

/// The normal-form engine over a fixed factor system.
#[derive(Debug, Clone)]
pub struct Amalgam<S> {
    sys: S,
}

impl<S: FactorSystem> Amalgam<S> {
    pub fn new(sys: S) -> Self {
        Amalgam { sys }
    }

    pub fn system(&self) -> &S {
        &self.sys
    }

    pub fn identity(&self) -> GroupElement<S::Elem> {
        GroupElement::from_cf(CanonicalForm::Base(self.sys.factor_id(0)))
    }

    pub fn is_identity(&self, g: &GroupElement<S::Elem>) -> bool {
        match &g.cf {
            CanonicalForm::Base(h) => self.sys.factor_eq(0, h, &self.sys.factor_id(0)),
            CanonicalForm::Alt(_) => false,
        }
    }

    pub fn check_level(&self, level: usize) -> Result<()> {
        match self.sys.max_level() {
            Some(cap) if level > cap => Err(Error::UnsupportedLevel { level, cap }),
            _ => Ok(()),
        }
    }

    /// The image of `x ∈ H_level` in `G`.
    pub fn syllable(&self, level: usize, x: &S::Elem) -> Result<GroupElement<S::Elem>> {
        self.check_level(level)?;
        Ok(GroupElement::from_cf(self.syllable_cf(level, x)))
    }

    fn syllable_cf(&self, level: usize, x: &S::Elem) -> CanonicalForm<S::Elem> {
        // B_{level-1} ⊆ B_0 ⊆ H_0, so a base member collapses to level 0.
        if level == 0 || self.sys.in_base(level - 1, x) {
            return CanonicalForm::Base(x.clone());
        }
        let (rep, b) = self.sys.split(level, x);
        CanonicalForm::Alt(AltForm {
            level,
            letters: vec![Letter::Right(rep)],
            tail: b,
        })
    }

    /// Canonical form of the product of the syllables, left to right.
    pub fn reduce(&self, word: &Word<S::Elem>) -> Result<GroupElement<S::Elem>> {
        for s in &word.syllables {
            self.check_level(s.level)?;
        }
        let mut acc = CanonicalForm::Base(self.sys.factor_id(0));
        for s in &word.syllables {
            let next = self.syllable_cf(s.level, &s.elem);
            acc = self.mul_cf(&acc, &next);
        }
        Ok(GroupElement::from_cf(acc))
    }

    pub fn mul(
        &self,
        g: &GroupElement<S::Elem>,
        h: &GroupElement<S::Elem>,
    ) -> GroupElement<S::Elem> {
        GroupElement::from_cf(self.mul_cf(&g.cf, &h.cf))
    }

    pub fn inv(&self, g: &GroupElement<S::Elem>) -> GroupElement<S::Elem> {
        GroupElement::from_cf(self.inv_cf(&g.cf))
    }

    pub fn eq(&self, g: &GroupElement<S::Elem>, h: &GroupElement<S::Elem>) -> bool {
        g.cf == h.cf
    }

    pub fn level(&self, g: &GroupElement<S::Elem>) -> usize {
        g.level
    }

    /// `g h g⁻¹`.
    pub fn conjugate(
        &self,
        g: &GroupElement<S::Elem>,
        h: &GroupElement<S::Elem>,
    ) -> GroupElement<S::Elem> {
        self.mul(&self.mul(g, h), &self.inv(g))
    }

    /// `[g, h] = g h g⁻¹ h⁻¹`.
    pub fn commutator(
        &self,
        g: &GroupElement<S::Elem>,
        h: &GroupElement<S::Elem>,
    ) -> GroupElement<S::Elem> {
        self.mul(&self.conjugate(g, h), &self.inv(h))
    }

    /// `g ∈ B_n`.
    pub fn in_base(&self, g: &GroupElement<S::Elem>, n: usize) -> bool {
        g.base_value().is_some_and(|h| self.sys.in_base(n, h))
    }

    /// Checks `[g, z] = 1` for `z ∈ B_n` and `level(g) <= n + 1`.
    pub fn centrality_check(
        &self,
        g: &GroupElement<S::Elem>,
        n: usize,
        z: &S::Elem,
    ) -> Result<bool> {
        if g.level > n + 1 {
            return Err(Error::PreconditionViolated(format!(
                "level(g) = {} exceeds n + 1 = {}",
                g.level,
                n + 1
            )));
        }
        if !self.sys.in_base(n, z) {
            return Err(Error::PreconditionViolated(format!(
                "z = {} is not in B_{n}",
                self.sys.literal(z)
            )));
        }
        let z = GroupElement::from_cf(CanonicalForm::Base(z.clone()));
        Ok(self.is_identity(&self.commutator(g, &z)))
    }

    fn base_mul(&self, x: &S::Elem, y: &S::Elem) -> S::Elem {
        self.sys.factor_mul(0, x, y)
    }

    fn mul_cf(
        &self,
        a: &CanonicalForm<S::Elem>,
        b: &CanonicalForm<S::Elem>,
    ) -> CanonicalForm<S::Elem> {
        let n = a.level().max(b.level());
        if n == 0 {
            let (CanonicalForm::Base(x), CanonicalForm::Base(y)) = (a, b) else {
                unreachable!("level-0 forms are Base");
            };
            return CanonicalForm::Base(self.sys.factor_mul(0, x, y));
        }
        let (mut letters, tail_a) = self.expand(a, n);
        let (rhs, tail_b) = self.expand(b, n);
        let mut tail = self.base_mul(&tail_a, &tail_b);
        for letter in rhs {
            self.push_letter(n, &mut letters, &mut tail, letter);
        }
        self.close(n, letters, tail)
    }

    /// Presents an element of `G_n` as alternating letters and a tail.
    fn expand(&self, x: &CanonicalForm<S::Elem>, n: usize) -> (Vec<Letter<S::Elem>>, S::Elem) {
        match x {
            CanonicalForm::Alt(a) if a.level == n => (a.letters.clone(), a.tail.clone()),
            CanonicalForm::Base(h) if self.sys.in_base(n - 1, h) => (Vec::new(), h.clone()),
            _ => {
                let (rep, b) = self.left_split(x, n);
                (vec![Letter::Left(rep)], b)
            }
        }
    }

    /// `x = rep · b` for `x ∈ G_{n-1}`, `b ∈ B_{n-1}`, `rep` the canonical
    /// representative of `x B_{n-1}`.
    fn left_split(
        &self,
        x: &CanonicalForm<S::Elem>,
        n: usize,
    ) -> (CanonicalForm<S::Elem>, S::Elem) {
        debug_assert!(x.level() < n);
        match x {
            CanonicalForm::Base(h) => {
                let (r0, b0) = self.sys.split_top(0, h);
                if n == 1 {
                    return (CanonicalForm::Base(r0), b0);
                }
                let (r1, b1) = self.sys.split_chain(0, n - 1, &b0);
                (CanonicalForm::Base(self.sys.factor_mul(0, &r0, &r1)), b1)
            }
            CanonicalForm::Alt(a) => {
                let (r, b) = self.sys.split_chain(a.level - 1, n - 1, &a.tail);
                let rep = AltForm {
                    level: a.level,
                    letters: a.letters.clone(),
                    tail: r,
                };
                (CanonicalForm::Alt(rep), b)
            }
        }
    }

    /// Appends a letter, merging with the last letter when both lie on the
    /// same side. A merge that lands in `B_{n-1}` cancels into the tail and
    /// exposes the previous letter for the next push.
    fn push_letter(
        &self,
        n: usize,
        letters: &mut Vec<Letter<S::Elem>>,
        tail: &mut S::Elem,
        letter: Letter<S::Elem>,
    ) {
        let same_side = letters
            .last()
            .is_some_and(|last| last.is_right() == letter.is_right());
        if !same_side {
            letters.push(letter);
            return;
        }
        let last = letters.pop().expect("checked non-empty");
        match (last, letter) {
            (Letter::Right(x), Letter::Right(y)) => {
                let z = self.sys.factor_mul(n, &x, &y);
                if self.sys.in_base(n - 1, &z) {
                    *tail = self.base_mul(tail, &z);
                } else {
                    let (rep, b) = self.sys.split(n, &z);
                    *tail = self.base_mul(tail, &b);
                    letters.push(Letter::Right(rep));
                }
            }
            (Letter::Left(x), Letter::Left(y)) => {
                let z = self.mul_cf(&x, &y);
                match z {
                    CanonicalForm::Base(h) if self.sys.in_base(n - 1, &h) => {
                        *tail = self.base_mul(tail, &h);
                    }
                    z => {
                        let (rep, b) = self.left_split(&z, n);
                        *tail = self.base_mul(tail, &b);
                        letters.push(Letter::Left(rep));
                    }
                }
            }
            _ => unreachable!("same-side letters"),
        }
    }

    /// Builds the canonical form, descending a level when no `Right`
    /// letter survives.
    fn close(
        &self,
        n: usize,
        letters: Vec<Letter<S::Elem>>,
        tail: S::Elem,
    ) -> CanonicalForm<S::Elem> {
        if letters.iter().any(Letter::is_right) {
            return CanonicalForm::Alt(AltForm {
                level: n,
                letters,
                tail,
            });
        }
        match letters.into_iter().next() {
            None => CanonicalForm::Base(tail),
            Some(Letter::Left(x)) => self.mul_cf(&x, &CanonicalForm::Base(tail)),
            Some(Letter::Right(_)) => unreachable!(),
        }
    }

    fn inv_cf(&self, x: &CanonicalForm<S::Elem>) -> CanonicalForm<S::Elem> {
        match x {
            CanonicalForm::Base(h) => CanonicalForm::Base(self.sys.factor_inv(0, h)),
            CanonicalForm::Alt(a) => {
                let n = a.level;
                let mut tail = self.sys.factor_inv(0, &a.tail);
                let letters = a
                    .letters
                    .iter()
                    .rev()
                    .map(|letter| match letter {
                        Letter::Right(r) => {
                            let (rep, b) = self.sys.split(n, &self.sys.factor_inv(n, r));
                            tail = self.base_mul(&tail, &b);
                            Letter::Right(rep)
                        }
                        Letter::Left(l) => {
                            let (rep, b) = self.left_split(&self.inv_cf(l), n);
                            tail = self.base_mul(&tail, &b);
                            Letter::Left(rep)
                        }
                    })
                    .collect();
                CanonicalForm::Alt(AltForm {
                    level: n,
                    letters,
                    tail,
                })
            }
        }
    }

    /// Re-checks every structural invariant of a canonical form.
    pub fn validate(&self, g: &GroupElement<S::Elem>) -> std::result::Result<(), String> {
        if g.level != g.cf.level() {
            return Err(format!("stored level {} disagrees with form", g.level));
        }
        self.validate_cf(&g.cf)
    }

    fn validate_cf(&self, x: &CanonicalForm<S::Elem>) -> std::result::Result<(), String> {
        let sys = &self.sys;
        let CanonicalForm::Alt(a) = x else {
            return Ok(());
        };
        let n = a.level;
        if n == 0 {
            return Err("Alt form at level 0".into());
        }
        if !sys.in_base(n - 1, &a.tail) {
            return Err(format!("tail not in B_{}", n - 1));
        }
        if !a.letters.iter().any(Letter::is_right) {
            return Err(format!("level-{n} form without a right letter"));
        }
        if a.letters
            .windows(2)
            .any(|w| w[0].is_right() == w[1].is_right())
        {
            return Err(format!("letters of level-{n} form do not alternate"));
        }
        let id = sys.factor_id(0);
        for letter in &a.letters {
            match letter {
                Letter::Right(r) => {
                    if sys.in_base(n - 1, r) {
                        return Err("right letter in the amalgamated subgroup".into());
                    }
                    if sys.split(n, r) != (r.clone(), id.clone()) {
                        return Err("right letter is not a transversal element".into());
                    }
                }
                Letter::Left(l) => {
                    if l.level() >= n {
                        return Err("left letter level too high".into());
                    }
                    if let CanonicalForm::Base(h) = l {
                        if sys.in_base(n - 1, h) {
                            return Err("left letter in the amalgamated subgroup".into());
                        }
                    }
                    if self.left_split(l, n) != (l.clone(), id.clone()) {
                        return Err("left letter is not a transversal element".into());
                    }
                    self.validate_cf(l)?;
                }
            }
        }
        Ok(())
    }

    /// A word whose product is `g`, read off the canonical form.
    pub fn to_word(&self, g: &GroupElement<S::Elem>) -> Word<S::Elem> {
        let mut syllables = Vec::new();
        self.push_syllables(&g.cf, &mut syllables);
        if syllables.is_empty() {
            syllables.push(Syllable::new(0, self.sys.factor_id(0)));
        }
        Word { syllables }
    }

    fn push_syllables(&self, x: &CanonicalForm<S::Elem>, out: &mut Vec<Syllable<S::Elem>>) {
        let id = self.sys.factor_id(0);
        match x {
            CanonicalForm::Base(h) => {
                if *h != id {
                    out.push(Syllable::new(0, h.clone()));
                }
            }
            CanonicalForm::Alt(a) => {
                for letter in &a.letters {
                    match letter {
                        Letter::Right(r) => out.push(Syllable::new(a.level, r.clone())),
                        Letter::Left(l) => self.push_syllables(l, out),
                    }
                }
                if a.tail != id {
                    out.push(Syllable::new(0, a.tail.clone()));
                }
            }
        }
    }

    /// Pretty form, e.g. `Alt(1; R:2/5, L:1/5; tail 1)`.
    pub fn format(&self, g: &GroupElement<S::Elem>) -> String {
        let mut out = String::new();
        self.format_cf(&g.cf, &mut out);
        out
    }

    fn format_cf(&self, x: &CanonicalForm<S::Elem>, out: &mut String) {
        match x {
            CanonicalForm::Base(h) => {
                let _ = write!(out, "Base({})", self.sys.display_elem(h));
            }
            CanonicalForm::Alt(a) => {
                let _ = write!(out, "Alt({}; ", a.level);
                for (i, letter) in a.letters.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    match letter {
                        Letter::Right(r) => {
                            let _ = write!(out, "R:{}", self.sys.display_elem(r));
                        }
                        Letter::Left(CanonicalForm::Base(h)) => {
                            let _ = write!(out, "L:{}", self.sys.display_elem(h));
                        }
                        Letter::Left(l) => {
                            out.push_str("L:");
                            self.format_cf(l, out);
                        }
                    }
                }
                let _ = write!(out, "; tail {})", self.sys.display_elem(&a.tail));
            }
        }
    }
}
