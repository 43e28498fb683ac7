//! Randomized conformance checks for the factor-system contract.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::system::FactorSystem;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ConformanceReport {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl ConformanceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

/// Checks, for levels `0..=levels`: properness of `B_n` in `H_n` and
/// `H_{n+1}`, descent of the chain, centrality of `B_n`, exactness and
/// coset-invariance of every split, and consistency of
/// `base_escape_level`.
pub fn check_conformance<S: FactorSystem>(
    sys: &S,
    levels: usize,
    samples: usize,
    seed: u64,
) -> ConformanceReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = ConformanceReport::default();
    let id = sys.factor_id(0);
    let lit = |x: &S::Elem| sys.literal(x);

    r.expect(sys.base_escape_level(&id).is_none(), || {
        "base_escape_level(id) should be undefined".into()
    });

    for n in 0..=levels {
        let nb = sys.nonbase_elem(n);
        r.expect(!sys.in_base(n, &nb), || {
            format!("nonbase_elem({n}) lies in B_{n}")
        });
        let esc = sys.escape_elem(n);
        r.expect(!sys.in_base(n, &esc), || {
            format!("escape_elem({n}) lies in B_{n}")
        });

        for _ in 0..samples {
            let b = sys.sample_base(n, &mut rng);
            r.expect(sys.in_base(n, &b), || {
                format!("sample_base({n}) = {} not in B_{n}", lit(&b))
            });
            if n > 0 {
                r.expect(sys.in_base(n - 1, &b), || {
                    format!("B_{n} not contained in B_{}: {}", n - 1, lit(&b))
                });
            }

            for level in [n, n + 1] {
                let x = sys.sample(level, &mut rng);
                let bx = sys.factor_mul(level, &b, &x);
                let xb = sys.factor_mul(level, &x, &b);
                r.expect(bx == xb, || {
                    format!("B_{n} not central in H_{level}: {} vs {}", lit(&b), lit(&x))
                });
            }

            let (x, y, z) = (
                sys.sample(n, &mut rng),
                sys.sample(n, &mut rng),
                sys.sample(n, &mut rng),
            );
            let lhs = sys.factor_mul(n, &sys.factor_mul(n, &x, &y), &z);
            let rhs = sys.factor_mul(n, &x, &sys.factor_mul(n, &y, &z));
            r.expect(lhs == rhs, || format!("H_{n} not associative"));
            let xi = sys.factor_mul(n, &x, &sys.factor_inv(n, &x));
            r.expect(sys.factor_eq(n, &xi, &id), || {
                format!("H_{n} inverse law fails")
            });

            if n >= 1 {
                let h = sys.sample(n, &mut rng);
                let c = sys.sample_base(n - 1, &mut rng);
                check_split(
                    &mut r,
                    sys,
                    &h,
                    &c,
                    n - 1,
                    |h| sys.split(n, h),
                    &format!("split({n})"),
                );
            }
            let h = sys.sample(n, &mut rng);
            let c = sys.sample_base(n, &mut rng);
            check_split(
                &mut r,
                sys,
                &h,
                &c,
                n,
                |h| sys.split_top(n, h),
                &format!("split_top({n})"),
            );

            for m in 0..n {
                let b = sys.sample_base(m, &mut rng);
                let c = sys.sample_base(n, &mut rng);
                check_split(
                    &mut r,
                    sys,
                    &b,
                    &c,
                    n,
                    |b| sys.split_chain(m, n, b),
                    &format!("split_chain({m}, {n})"),
                );
                let (rep, _) = sys.split_chain(m, n, &b);
                r.expect(sys.in_base(m, &rep), || {
                    format!("split_chain({m}, {n}) representative left B_{m}")
                });
            }

            let x = sys.sample(n, &mut rng);
            if let Some(k) = sys.base_escape_level(&x) {
                r.expect(
                    !sys.in_base(k, &x) && (k == 0 || sys.in_base(k - 1, &x)),
                    || format!("base_escape_level({}) = {k} inconsistent", lit(&x)),
                );
            } else {
                r.expect(sys.factor_eq(n, &x, &id), || {
                    format!("base_escape_level undefined for non-identity {}", lit(&x))
                });
            }
        }
    }
    r
}

/// `h = rep · b` with `b ∈ B_base`, representative unchanged under
/// `h ↦ h c` for `c ∈ B_base`, and representatives are fixed points.
fn check_split<S: FactorSystem>(
    r: &mut ConformanceReport,
    sys: &S,
    h: &S::Elem,
    c: &S::Elem,
    base: usize,
    split: impl Fn(&S::Elem) -> (S::Elem, S::Elem),
    name: &str,
) {
    let id = sys.factor_id(0);
    let (rep, b) = split(h);
    r.expect(sys.factor_mul(0, &rep, &b) == *h, || {
        format!("{name} does not reassemble {}", sys.literal(h))
    });
    r.expect(sys.in_base(base, &b), || {
        format!("{name} residue not in B_{base}")
    });
    let (rep2, _) = split(&sys.factor_mul(0, h, c));
    r.expect(rep2 == rep, || {
        format!("{name} representative depends on the coset member")
    });
    r.expect(split(&rep) == (rep.clone(), id), || {
        format!("{name} representative is not a fixed point")
    });
}
