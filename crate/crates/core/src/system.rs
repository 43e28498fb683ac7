//! The factor-system contract.
//!
//! A factor system supplies the data of the iterated construction
//! `G_0 = H_0`, `G_n = G_{n-1} *_{B_{n-1}} H_n`:
//!
//! * groups `H_n`, all sharing one value representation `Elem`;
//! * a descending chain `B_0 ⊇ B_1 ⊇ ...` with trivial intersection, where
//!   `B_n` is central in both `H_n` and `H_{n+1}` and proper in each;
//! * deterministic transversals for `H_n / B_{n-1}`, `H_0 / B_0` and
//!   `B_m / B_n`.
//!
//! The amalgamation identifies `b ∈ B_n` inside `H_n` with the same value
//! inside `H_{n+1}`, so an instance must use a value representation in
//! which that identification is literal equality of values. Membership
//! predicates like [`FactorSystem::in_base`] are therefore plain value
//! predicates.

use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;

use crate::error::Result;
use crate::instances::InstanceDescriptor;

pub trait FactorSystem: Send + Sync {
    type Elem: Clone + Eq + Hash + Debug + Send + Sync;

    fn descriptor(&self) -> InstanceDescriptor;

    /// Highest supported factor level, if the instance caps levels.
    fn max_level(&self) -> Option<usize> {
        None
    }

    fn factor_id(&self, n: usize) -> Self::Elem;
    fn factor_mul(&self, n: usize, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn factor_inv(&self, n: usize, x: &Self::Elem) -> Self::Elem;

    fn factor_eq(&self, _n: usize, x: &Self::Elem, y: &Self::Elem) -> bool {
        x == y
    }

    /// `x ∈ B_n`.
    fn in_base(&self, n: usize, x: &Self::Elem) -> bool;

    /// For `n >= 1` and `h ∈ H_n`: `h = rep · b` with `b ∈ B_{n-1}` and
    /// `rep` the canonical representative of `h B_{n-1}`.
    fn split(&self, n: usize, h: &Self::Elem) -> (Self::Elem, Self::Elem);

    /// For `h ∈ H_n`: `h = rep · b` with `b ∈ B_n`. Only `n = 0` is used by
    /// the normal form (transversal of `H_0 / B_0`).
    fn split_top(&self, n: usize, h: &Self::Elem) -> (Self::Elem, Self::Elem);

    /// For `m < n` and `b ∈ B_m`: `b = rep · b'` with `b' ∈ B_n` and `rep`
    /// the canonical representative of `b B_n` in `B_m / B_n`.
    fn split_chain(&self, m: usize, n: usize, b: &Self::Elem) -> (Self::Elem, Self::Elem);

    /// Some element of `H_n \ B_n`.
    fn nonbase_elem(&self, n: usize) -> Self::Elem;

    /// Some element of `H_{n+1} \ B_n`.
    fn escape_elem(&self, n: usize) -> Self::Elem;

    /// Minimal `n` with `x ∉ B_n`; `None` for the identity.
    fn base_escape_level(&self, x: &Self::Elem) -> Option<usize>;

    fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Self::Elem;

    /// A random element of `B_n`.
    fn sample_base<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Self::Elem;

    /// Parses a value literal as written inside `hN(...)`.
    fn parse_literal(&self, src: &str) -> Result<Self::Elem>;

    /// Inverse of [`FactorSystem::parse_literal`].
    fn literal(&self, x: &Self::Elem) -> String;

    /// Rendering used in pretty-printed canonical forms.
    fn display_elem(&self, x: &Self::Elem) -> String {
        self.literal(x)
    }
}
