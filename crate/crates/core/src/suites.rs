//! Seeded randomized checks.
//!
//! Sample `i` of a suite draws from its own ChaCha stream (`seed`, stream
//! `i`), so results do not depend on how rayon schedules the work. The first
//! failure reported is the one with the smallest sample index.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::amalgam::{Amalgam, GroupElement, Syllable, Word};
use crate::hom::{DefaultHom, LevelwiseHom, Phi};
use crate::instances::{CyclicInstance, InstanceDescriptor};
use crate::naive::naive_reduce;
use crate::system::FactorSystem;
use crate::witness::{derived_escape, lemma21_check};

pub const MAX_WORD_LEN: usize = 16;
pub const MAX_LEVEL: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub instance: InstanceDescriptor,
    pub seed: u64,
    pub samples: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn stream(seed: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    rng
}

/// Runs `check` on `samples` independent streams in parallel.
fn run<S, F>(suite: &str, sys: &S, seed: u64, samples: usize, check: F) -> SuiteReport
where
    S: FactorSystem,
    F: Fn(usize, &mut ChaCha8Rng) -> Result<(), String> + Sync,
{
    let outcomes: Vec<Option<String>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            check(i, &mut stream(seed, i))
                .err()
                .map(|e| format!("sample {i}: {e}"))
        })
        .collect();
    let failures = outcomes.iter().filter(|o| o.is_some()).count();
    SuiteReport {
        suite: suite.to_string(),
        instance: sys.descriptor(),
        seed,
        samples,
        failures,
        first_failure: outcomes.into_iter().flatten().next(),
    }
}

fn level_bound<S: FactorSystem>(sys: &S, max_level: usize) -> usize {
    sys.max_level().map_or(max_level, |c| c.min(max_level))
}

/// A word of length `0..=max_len` with syllable levels in `0..=max_level`.
pub fn random_word<S: FactorSystem, R: Rng + ?Sized>(
    sys: &S,
    rng: &mut R,
    max_len: usize,
    max_level: usize,
) -> Word<S::Elem> {
    let top = level_bound(sys, max_level);
    let len = rng.gen_range(0..=max_len);
    Word::new(
        (0..len)
            .map(|_| {
                let n = rng.gen_range(0..=top);
                Syllable::new(n, sys.sample(n, rng))
            })
            .collect(),
    )
}

/// A random element of level at most `max_level`.
pub fn random_element<S: FactorSystem, R: Rng + ?Sized>(
    am: &Amalgam<S>,
    rng: &mut R,
    max_level: usize,
) -> GroupElement<S::Elem> {
    let w = random_word(am.system(), rng, MAX_WORD_LEN, max_level);
    am.reduce(&w).expect("levels within cap")
}

fn show<S: FactorSystem>(am: &Amalgam<S>, g: &GroupElement<S::Elem>) -> String {
    am.format(g)
}

/// Associativity, identity and inverse laws on random triples, plus the
/// structural invariants of every canonical form produced.
pub fn axioms_suite<S: FactorSystem>(am: &Amalgam<S>, samples: usize, seed: u64) -> SuiteReport {
    run("axioms", am.system(), seed, samples, |_, rng| {
        let [a, b, c] = [(); 3].map(|_| random_element(am, rng, MAX_LEVEL));
        for x in [&a, &b, &c] {
            am.validate(x)
                .map_err(|e| format!("{}: {e}", show(am, x)))?;
        }
        let ab_c = am.mul(&am.mul(&a, &b), &c);
        let a_bc = am.mul(&a, &am.mul(&b, &c));
        am.validate(&ab_c).map_err(|e| format!("(ab)c: {e}"))?;
        if ab_c != a_bc {
            return Err(format!(
                "associativity: {} vs {}",
                show(am, &ab_c),
                show(am, &a_bc)
            ));
        }
        let id = am.identity();
        if am.mul(&a, &id) != a || am.mul(&id, &a) != a {
            return Err(format!("identity law fails for {}", show(am, &a)));
        }
        let ai = am.inv(&a);
        am.validate(&ai).map_err(|e| format!("inverse: {e}"))?;
        if !am.is_identity(&am.mul(&a, &ai)) || !am.is_identity(&am.mul(&ai, &a)) {
            return Err(format!("inverse law fails for {}", show(am, &a)));
        }
        Ok(())
    })
}

/// Inserts a trivial word `w w⁻¹` into `u` at a random position.
fn disguise<S: FactorSystem, R: Rng + ?Sized>(
    sys: &S,
    u: &Word<S::Elem>,
    rng: &mut R,
) -> Word<S::Elem> {
    let w = random_word(sys, rng, 4, MAX_LEVEL);
    let at = rng.gen_range(0..=u.len());
    let mut syl = u.syllables[..at].to_vec();
    syl.extend(w.concat(&w.inverse(sys)).syllables);
    syl.extend_from_slice(&u.syllables[at..]);
    Word::new(syl)
}

fn compare_with_oracle<S: FactorSystem>(
    am: &Amalgam<S>,
    u: &Word<S::Elem>,
) -> Result<GroupElement<S::Elem>, String> {
    let fast = am.reduce(u).map_err(|e| e.to_string())?;
    let slow = naive_reduce(am.system(), u).map_err(|e| e.to_string())?;
    if fast != slow {
        return Err(format!(
            "reduce gives {} but oracle gives {}",
            show(am, &fast),
            show(am, &slow)
        ));
    }
    Ok(fast)
}

fn compare_eq<S: FactorSystem>(
    am: &Amalgam<S>,
    u: &Word<S::Elem>,
    v: &Word<S::Elem>,
) -> Result<(), String> {
    let (gu, gv) = (
        am.reduce(u).map_err(|e| e.to_string())?,
        am.reduce(v).map_err(|e| e.to_string())?,
    );
    let quotient = am
        .reduce(&u.concat(&v.inverse(am.system())))
        .map_err(|e| e.to_string())?;
    let oracle = naive_reduce(am.system(), u).map_err(|e| e.to_string())?
        == naive_reduce(am.system(), v).map_err(|e| e.to_string())?;
    let eq = am.eq(&gu, &gv);
    if eq != am.is_identity(&quotient) || eq != oracle {
        return Err(format!(
            "eq = {eq}, u v⁻¹ = {}, oracle eq = {oracle}",
            show(am, &quotient)
        ));
    }
    Ok(())
}

/// `reduce` against the independent oracle, and `eq(u, v) ⟺ u v⁻¹ = 1`
/// on pairs that are equal about half of the time.
pub fn oracle_suite<S: FactorSystem>(am: &Amalgam<S>, samples: usize, seed: u64) -> SuiteReport {
    run("oracle", am.system(), seed, samples, |_, rng| {
        let sys = am.system();
        let u = random_word(sys, rng, MAX_WORD_LEN, MAX_LEVEL);
        compare_with_oracle(am, &u)?;
        let v = if rng.gen_bool(0.5) {
            disguise(sys, &u, rng)
        } else {
            random_word(sys, rng, MAX_WORD_LEN, MAX_LEVEL)
        };
        compare_with_oracle(am, &v)?;
        compare_eq(am, &u, &v)
    })
}

/// Every word of length `<= max_len` over `alphabet`.
pub fn all_words<E: Clone>(alphabet: &[Syllable<E>], max_len: usize) -> Vec<Word<E>> {
    let mut out = vec![Word::new(Vec::new())];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<Syllable<E>>| {
                alphabet.iter().map(move |s| {
                    let mut w = w.clone();
                    w.push(s.clone());
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned().map(Word::new));
    }
    out
}

/// Exhaustive agreement with the oracle over all words up to `max_len`, and
/// `eq` against `u v⁻¹ = 1` on every pair of those words.
pub fn exhaustive_suite<S: FactorSystem>(
    am: &Amalgam<S>,
    alphabet: &[Syllable<S::Elem>],
    max_len: usize,
) -> SuiteReport {
    let words = all_words(alphabet, max_len);
    let reduced: Vec<Result<GroupElement<S::Elem>, String>> = words
        .par_iter()
        .map(|u| compare_with_oracle(am, u))
        .collect();
    let mut first = reduced.iter().zip(&words).find_map(|(r, u)| {
        r.as_ref()
            .err()
            .map(|e| format!("{}: {e}", crate::expr::format_word(u, am.system())))
    });
    let mut failures = reduced.iter().filter(|r| r.is_err()).count();
    let pair_failures: Vec<Option<String>> = (0..words.len())
        .into_par_iter()
        .map(|i| {
            let u = &words[i];
            let Ok(gu) = &reduced[i] else { return None };
            for (j, v) in words.iter().enumerate() {
                let Ok(gv) = &reduced[j] else { continue };
                let quotient = am.reduce(&u.concat(&v.inverse(am.system()))).ok()?;
                if am.eq(gu, gv) != am.is_identity(&quotient) {
                    return Some(format!("eq mismatch on words {i} and {j}"));
                }
            }
            None
        })
        .collect();
    failures += pair_failures.iter().filter(|o| o.is_some()).count();
    if first.is_none() {
        first = pair_failures.into_iter().flatten().next();
    }
    SuiteReport {
        suite: "exhaustive".into(),
        instance: am.system().descriptor(),
        seed: 0,
        samples: words.len(),
        failures,
        first_failure: first,
    }
}

/// Fixed six-letter alphabet for the exhaustive check in `Z/p^L`: a
/// generator and a `B_0` element at each of the levels 0, 1, 2.
pub fn cyclic_alphabet(sys: &CyclicInstance) -> Vec<Syllable<u64>> {
    let p = sys.prime().get();
    [(0, 1), (0, p), (1, 1), (1, p), (2, 1), (2, p * p)]
        .into_iter()
        .map(|(n, x)| Syllable::new(n, x % sys.modulus()))
        .collect()
}

const DRAW_ATTEMPTS: usize = 64;

/// `h` of level `<= m` outside `B_m`.
fn draw_low<S: FactorSystem, R: Rng + ?Sized>(
    am: &Amalgam<S>,
    rng: &mut R,
    m: usize,
) -> Option<GroupElement<S::Elem>> {
    (0..DRAW_ATTEMPTS)
        .map(|_| random_element(am, rng, m))
        .find(|h| !am.in_base(h, m))
}

/// `g` of level exactly `n`.
fn draw_exact<S: FactorSystem, R: Rng + ?Sized>(
    am: &Amalgam<S>,
    rng: &mut R,
    n: usize,
) -> Option<GroupElement<S::Elem>> {
    let sys = am.system();
    (0..DRAW_ATTEMPTS).find_map(|_| {
        let mut w = random_word(sys, rng, MAX_WORD_LEN - 1, n);
        let at = rng.gen_range(0..=w.len());
        w.syllables.insert(at, Syllable::new(n, sys.sample(n, rng)));
        let g = am.reduce(&w).ok()?;
        (g.level() == n).then_some(g)
    })
}

/// Random `(h, g, m)` satisfying the hypotheses; both the conjugate and the
/// commutator must have level exactly `m + 1`.
pub fn lemma21_suite<S: FactorSystem>(am: &Amalgam<S>, samples: usize, seed: u64) -> SuiteReport {
    let top = level_bound(am.system(), MAX_LEVEL) - 1;
    run("lemma21", am.system(), seed, samples, |_, rng| {
        let m = rng.gen_range(0..=top);
        let h = draw_low(am, rng, m).ok_or_else(|| format!("no h outside B_{m} found"))?;
        let g =
            draw_exact(am, rng, m + 1).ok_or_else(|| format!("no g of level {} found", m + 1))?;
        let (conj, comm) = lemma21_check(am, &h, &g, m).map_err(|e| e.to_string())?;
        if conj != m + 1 || comm != m + 1 {
            return Err(format!(
                "m = {m}, h = {}, g = {}: levels ({conj}, {comm})",
                show(am, &h),
                show(am, &g)
            ));
        }
        Ok(())
    })
}

/// `[g, z] = 1` for `z ∈ B_n` and `level(g) <= n + 1`.
pub fn centrality_suite<S: FactorSystem>(
    am: &Amalgam<S>,
    samples: usize,
    seed: u64,
) -> SuiteReport {
    let top = level_bound(am.system(), MAX_LEVEL) - 1;
    run("centrality", am.system(), seed, samples, |_, rng| {
        let n = rng.gen_range(0..=top);
        let g = random_element(am, rng, n + 1);
        let z = am.system().sample_base(n, rng);
        match am.centrality_check(&g, n, &z) {
            Ok(true) => Ok(()),
            Ok(false) => Err(format!(
                "[{}, {}] ≠ 1 with n = {n}",
                show(am, &g),
                am.system().literal(&z)
            )),
            Err(e) => Err(e.to_string()),
        }
    })
}

/// Reports for the homomorphism checks; `psi` is `None` when the target has
/// no matrix embedding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomReport {
    pub additive: SuiteReport,
    pub inclusion: SuiteReport,
    pub kernel: SuiteReport,
    pub psi: Option<SuiteReport>,
}

impl HomReport {
    pub fn passed(&self) -> bool {
        self.additive.passed()
            && self.inclusion.passed()
            && self.kernel.passed()
            && self.psi.as_ref().is_none_or(SuiteReport::passed)
    }

    pub fn reports(&self) -> Vec<&SuiteReport> {
        let mut v = vec![&self.additive, &self.inclusion, &self.kernel];
        v.extend(self.psi.as_ref());
        v
    }
}

/// `φ(ab) = φ(a) + φ(b)`, `φ(h_n(x)) = φ_n(x)`, derived witnesses lie in
/// `ker φ`, and `ψ(ab) = ψ(a) ψ(b)`.
pub fn hom_suite<S>(
    am: &Amalgam<S>,
    pairs: usize,
    per_level: usize,
    seed: u64,
) -> crate::error::Result<HomReport>
where
    S: DefaultHom,
    <S::Hom as LevelwiseHom<S>>::Value: Send,
    S::Hom: Sync,
{
    let phi = Phi::new(am, am.system().default_hom(), MAX_LEVEL, 64, seed)?;
    let hom = phi.hom();
    let additive = run("phi-additive", am.system(), seed, pairs, |_, rng| {
        let (a, b) = (
            random_element(am, rng, MAX_LEVEL),
            random_element(am, rng, MAX_LEVEL),
        );
        let lhs = phi.eval(&am.mul(&a, &b));
        let rhs = hom.add(&phi.eval(&a), &phi.eval(&b));
        if lhs != rhs {
            return Err(format!(
                "φ({} · {}) = {} ≠ {}",
                show(am, &a),
                show(am, &b),
                hom.format_value(&lhs),
                hom.format_value(&rhs)
            ));
        }
        Ok(())
    });
    let levels = level_bound(am.system(), MAX_LEVEL) + 1;
    let inclusion = run(
        "phi-inclusion",
        am.system(),
        seed,
        per_level * levels,
        |i, rng| {
            let n = i % levels;
            let x = am.system().sample(n, rng);
            let g = am.syllable(n, &x).map_err(|e| e.to_string())?;
            if phi.eval(&g) != hom.on_factor(n, &x) {
                return Err(format!("φ(h{n}({})) ≠ φ_{n}", am.system().literal(&x)));
            }
            Ok(())
        },
    );
    let depth_floor: Vec<(usize, usize)> = (1..=5)
        .flat_map(|d| (0..=10).map(move |k| (d, k)))
        .collect();
    let outcomes: Vec<Option<String>> = depth_floor
        .par_iter()
        .map(|&(d, k)| match derived_escape(am, d, k) {
            Ok(c) if phi.in_kernel(&c.result) => None,
            Ok(c) => Some(format!(
                "d = {d}, k = {k}: φ = {}",
                hom.format_value(&phi.eval(&c.result))
            )),
            Err(e) => Some(format!("d = {d}, k = {k}: {e}")),
        })
        .collect();
    let kernel = SuiteReport {
        suite: "derived-kernel".into(),
        instance: am.system().descriptor(),
        seed,
        samples: depth_floor.len(),
        failures: outcomes.iter().filter(|o| o.is_some()).count(),
        first_failure: outcomes.into_iter().flatten().next(),
    };
    let probe = am.identity();
    let psi = phi.psi(&probe).ok().map(|_| {
        run("psi-multiplicative", am.system(), seed, pairs, |_, rng| {
            let (a, b) = (
                random_element(am, rng, MAX_LEVEL),
                random_element(am, rng, MAX_LEVEL),
            );
            let lhs = phi.psi(&am.mul(&a, &b)).map_err(|e| e.to_string())?;
            let rhs = phi
                .psi(&a)
                .map_err(|e| e.to_string())?
                .mul(&phi.psi(&b).map_err(|e| e.to_string())?);
            if lhs != rhs {
                return Err(format!(
                    "ψ({} · {}): {lhs} ≠ {rhs}",
                    show(am, &a),
                    show(am, &b)
                ));
            }
            Ok(())
        })
    });
    Ok(HomReport {
        additive,
        inclusion,
        kernel,
        psi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{DenseInstance, HeisenbergInstance};
    use crate::padic::Prime;

    #[test]
    fn suites_pass_on_small_runs() {
        let am = Amalgam::new(DenseInstance::new(Prime::new(5).unwrap()));
        for r in [
            axioms_suite(&am, 50, 1),
            oracle_suite(&am, 50, 1),
            lemma21_suite(&am, 50, 1),
            centrality_suite(&am, 50, 1),
        ] {
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.samples, 50);
        }
        let h = hom_suite(&am, 50, 10, 1).unwrap();
        assert!(h.passed(), "{h:?}");
        assert!(h.psi.is_some());
    }

    #[test]
    fn reports_are_deterministic() {
        let am = Amalgam::new(HeisenbergInstance::new(Prime::new(3).unwrap()));
        assert_eq!(axioms_suite(&am, 30, 9), axioms_suite(&am, 30, 9));
        let mut a = stream(9, 3);
        let mut b = stream(9, 3);
        assert_eq!(
            random_word(am.system(), &mut a, 8, 4),
            random_word(am.system(), &mut b, 8, 4)
        );
    }

    #[test]
    fn all_words_counts() {
        let alphabet: Vec<Syllable<u64>> = (0..6).map(|i| Syllable::new(i % 3, i as u64)).collect();
        assert_eq!(all_words(&alphabet, 2).len(), 1 + 6 + 36);
    }

    #[test]
    fn cyclic_hom_has_no_psi() {
        let am = Amalgam::new(CyclicInstance::new(Prime::new(2).unwrap(), 3).unwrap());
        let h = hom_suite(&am, 20, 5, 0).unwrap();
        assert!(h.passed(), "{h:?}");
        assert!(h.psi.is_none());
    }
}
