//! Escape witnesses.
//!
//! For `h ∈ G_m \ B_m` and `g ∈ G_{m+1} \ G_m`, both `g h g⁻¹` and
//! `g h g⁻¹ h⁻¹` have level exactly `m + 1`. Iterating this gives, for every
//! bound `k`, explicit conjugates of a fixed `h ≠ 1` outside `G_k`, and
//! iterated commutators (elements of the `d`-th derived subgroup) outside
//! `G_k`. Certificates record the inputs so every claim can be replayed.

use crate::amalgam::{Amalgam, GroupElement};
use crate::error::{Error, Result};
use crate::system::FactorSystem;

/// Retry budget for [`derived_escape`].
pub const MAX_RETRIES: usize = 16;

/// Returns `(level(g h g⁻¹), level(g h g⁻¹ h⁻¹))` after checking
/// `level(h) <= m`, `h ∉ B_m` and `level(g) = m + 1`.
pub fn lemma21_check<S: FactorSystem>(
    am: &Amalgam<S>,
    h: &GroupElement<S::Elem>,
    g: &GroupElement<S::Elem>,
    m: usize,
) -> Result<(usize, usize)> {
    if h.level() > m {
        return Err(Error::PreconditionViolated(format!(
            "h has level {} > m = {m}",
            h.level()
        )));
    }
    if am.in_base(h, m) {
        return Err(Error::PreconditionViolated(format!("h lies in B_{m}")));
    }
    if g.level() != m + 1 {
        return Err(Error::PreconditionViolated(format!(
            "g has level {} but m + 1 = {}",
            g.level(),
            m + 1
        )));
    }
    let conj = am.conjugate(g, h);
    let comm = am.mul(&conj, &am.inv(h));
    Ok((conj.level(), comm.level()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EscapeCertificate<E> {
    pub h: GroupElement<E>,
    pub m: usize,
    pub g: GroupElement<E>,
    pub result: GroupElement<E>,
    pub claimed_floor: usize,
}

/// Smallest `m >= max(k, level(h))` with `h ∉ B_m`. Elements of positive
/// level are never in a `B_m`.
fn escape_stage<S: FactorSystem>(am: &Amalgam<S>, h: &GroupElement<S::Elem>, k: usize) -> usize {
    let floor = k.max(h.level());
    match h.base_value() {
        Some(v) => floor.max(am.system().base_escape_level(v).unwrap_or(0)),
        None => floor,
    }
}

/// A conjugate of `h` with level `m + 1 > k`.
pub fn escape_witness<S: FactorSystem>(
    am: &Amalgam<S>,
    h: &GroupElement<S::Elem>,
    k: usize,
) -> Result<EscapeCertificate<S::Elem>> {
    if am.is_identity(h) {
        return Err(Error::IdentityInput);
    }
    let m = escape_stage(am, h, k);
    let g = am.syllable(m + 1, &am.system().escape_elem(m))?;
    let result = am.conjugate(&g, h);
    Ok(EscapeCertificate {
        h: h.clone(),
        m,
        g,
        result,
        claimed_floor: k,
    })
}

impl<E: Clone + Eq + std::hash::Hash + std::fmt::Debug> EscapeCertificate<E> {
    /// Replays the certificate, reporting the first broken invariant.
    pub fn check<S: FactorSystem<Elem = E>>(
        &self,
        am: &Amalgam<S>,
    ) -> std::result::Result<(), String> {
        if am.is_identity(&self.h) {
            return Err("h is the identity".into());
        }
        if self.h.level() > self.m {
            return Err(format!(
                "level(h) = {} exceeds m = {}",
                self.h.level(),
                self.m
            ));
        }
        if am.in_base(&self.h, self.m) {
            return Err(format!("h lies in B_{}", self.m));
        }
        if self.g.level() != self.m + 1 {
            return Err(format!("level(g) = {} is not m + 1", self.g.level()));
        }
        if am.conjugate(&self.g, &self.h) != self.result {
            return Err("result is not g h g⁻¹".into());
        }
        if self.result.level() != self.m + 1 {
            return Err(format!(
                "level(result) = {} is not m + 1",
                self.result.level()
            ));
        }
        if self.result.level() <= self.claimed_floor {
            return Err(format!(
                "level(result) = {} does not exceed k = {}",
                self.result.level(),
                self.claimed_floor
            ));
        }
        Ok(())
    }

    pub fn verify<S: FactorSystem<Elem = E>>(&self, am: &Amalgam<S>) -> bool {
        self.check(am).is_ok()
    }
}

/// A binary tree of commutators; a tree of uniform depth `d` evaluates into
/// the `d`-th derived subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CommTree<E> {
    Leaf(GroupElement<E>),
    Node(Box<CommTree<E>>, Box<CommTree<E>>),
}

impl<E: Clone + Eq + std::hash::Hash + std::fmt::Debug> CommTree<E> {
    pub fn eval<S: FactorSystem<Elem = E>>(&self, am: &Amalgam<S>) -> GroupElement<E> {
        match self {
            CommTree::Leaf(g) => g.clone(),
            CommTree::Node(a, b) => am.commutator(&a.eval(am), &b.eval(am)),
        }
    }

    /// `Some(d)` when every leaf sits at depth `d`.
    pub fn uniform_depth(&self) -> Option<usize> {
        match self {
            CommTree::Leaf(_) => Some(0),
            CommTree::Node(a, b) => match (a.uniform_depth()?, b.uniform_depth()?) {
                (x, y) if x == y => Some(x + 1),
                _ => None,
            },
        }
    }

    pub fn leaves(&self) -> Vec<&GroupElement<E>> {
        match self {
            CommTree::Leaf(g) => vec![g],
            CommTree::Node(a, b) => {
                let mut v = a.leaves();
                v.extend(b.leaves());
                v
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedCertificate<E> {
    pub depth: usize,
    pub tree: CommTree<E>,
    pub result: GroupElement<E>,
    pub claimed_floor: usize,
    pub retries: usize,
}

impl<E: Clone + Eq + std::hash::Hash + std::fmt::Debug> DerivedCertificate<E> {
    pub fn check<S: FactorSystem<Elem = E>>(
        &self,
        am: &Amalgam<S>,
    ) -> std::result::Result<(), String> {
        match self.tree.uniform_depth() {
            Some(d) if d == self.depth => {}
            Some(d) => return Err(format!("tree depth {d} differs from d = {}", self.depth)),
            None => return Err("commutator tree is not of uniform depth".into()),
        }
        if self.tree.eval(am) != self.result {
            return Err("result does not match the commutator tree".into());
        }
        if am.is_identity(&self.result) {
            return Err("result is the identity".into());
        }
        if self.result.level() <= self.claimed_floor {
            return Err(format!(
                "level(result) = {} does not exceed k = {}",
                self.result.level(),
                self.claimed_floor
            ));
        }
        Ok(())
    }

    pub fn verify<S: FactorSystem<Elem = E>>(&self, am: &Amalgam<S>) -> bool {
        self.check(am).is_ok()
    }
}

struct Built<E> {
    tree: CommTree<E>,
    value: GroupElement<E>,
}

/// A leaf of level exactly `lvl`.
fn leaf<S: FactorSystem>(am: &Amalgam<S>, lvl: usize) -> Result<Built<S::Elem>> {
    let sys = am.system();
    let value = if lvl == 0 {
        am.syllable(0, &sys.nonbase_elem(0))?
    } else {
        am.syllable(lvl, &sys.escape_elem(lvl - 1))?
    };
    Ok(Built {
        tree: CommTree::Leaf(value.clone()),
        value,
    })
}

/// `deep(0, L)` has level `L`; `deep(j, L) = [deep(j-1, L'), deep(j-1, L)]`
/// with `L'` the first stage above `L` for which the escape lemma applies.
fn deep<S: FactorSystem>(
    am: &Amalgam<S>,
    depth: usize,
    stage: usize,
    retries: &mut usize,
) -> Result<Built<S::Elem>> {
    if depth == 0 {
        return leaf(am, stage);
    }
    let inner = deep(am, depth - 1, stage, retries)?;
    let mut outer_stage = stage + 1;
    loop {
        let outer = deep(am, depth - 1, outer_stage, retries)?;
        let m = outer.value.level().saturating_sub(1);
        let applies =
            outer.value.level() >= 1 && inner.value.level() <= m && !am.in_base(&inner.value, m);
        if applies {
            let value = am.commutator(&outer.value, &inner.value);
            if value.level() == m + 1 {
                return Ok(Built {
                    tree: CommTree::Node(Box::new(outer.tree), Box::new(inner.tree)),
                    value,
                });
            }
        }
        *retries += 1;
        if *retries > MAX_RETRIES {
            return Err(Error::RetryExhausted(MAX_RETRIES));
        }
        outer_stage += 1;
    }
}

/// A non-identity element of the `d`-th derived subgroup with level `> k`.
pub fn derived_escape<S: FactorSystem>(
    am: &Amalgam<S>,
    depth: usize,
    k: usize,
) -> Result<DerivedCertificate<S::Elem>> {
    let mut retries = 0;
    // deep(d, L) has level L + d on conforming instances.
    let mut stage = (k + 1).saturating_sub(depth);
    loop {
        let built = deep(am, depth, stage, &mut retries)?;
        if built.value.level() > k && !am.is_identity(&built.value) {
            return Ok(DerivedCertificate {
                depth,
                tree: built.tree,
                result: built.value,
                claimed_floor: k,
                retries,
            });
        }
        retries += 1;
        if retries > MAX_RETRIES {
            return Err(Error::RetryExhausted(MAX_RETRIES));
        }
        stage += 1;
    }
}

/// Outcome of a batched [`lemma21_check`] run.
pub type Lemma21Report = crate::suites::SuiteReport;
