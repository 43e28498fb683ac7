use num_bigint::BigInt;
use rand::Rng;

use crate::error::Result;
use crate::instances::{InstanceDescriptor, InstanceKind};
use crate::padic::{PAdicRational, Prime};
use crate::system::FactorSystem;

/// `H_n = (Z[1/p], +)` for every `n`, `B_n = p^n Z`.
///
/// Transversal of `H_n / B_{n-1}` is `[0, p^{n-1})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DenseInstance {
    p: Prime,
}

impl DenseInstance {
    pub fn new(p: Prime) -> Self {
        DenseInstance { p }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn value(&self, num: i64, den_exp: u32) -> PAdicRational {
        PAdicRational::from_parts(self.p, num, den_exp)
    }
}

impl FactorSystem for DenseInstance {
    type Elem = PAdicRational;

    fn descriptor(&self) -> InstanceDescriptor {
        InstanceDescriptor {
            kind: InstanceKind::Dense,
            prime: self.p.get(),
            length: None,
        }
    }

    fn factor_id(&self, _n: usize) -> PAdicRational {
        PAdicRational::zero(self.p)
    }

    fn factor_mul(&self, _n: usize, x: &PAdicRational, y: &PAdicRational) -> PAdicRational {
        x + y
    }

    fn factor_inv(&self, _n: usize, x: &PAdicRational) -> PAdicRational {
        -x
    }

    fn in_base(&self, n: usize, x: &PAdicRational) -> bool {
        x.in_power_subgroup(n as u32)
    }

    fn split(&self, n: usize, h: &PAdicRational) -> (PAdicRational, PAdicRational) {
        debug_assert!(n >= 1);
        h.coset_rep(n as u32 - 1)
    }

    fn split_top(&self, n: usize, h: &PAdicRational) -> (PAdicRational, PAdicRational) {
        h.coset_rep(n as u32)
    }

    fn split_chain(
        &self,
        _m: usize,
        n: usize,
        b: &PAdicRational,
    ) -> (PAdicRational, PAdicRational) {
        b.coset_rep(n as u32)
    }

    fn nonbase_elem(&self, _n: usize) -> PAdicRational {
        self.value(1, 1)
    }

    fn escape_elem(&self, n: usize) -> PAdicRational {
        // 1 ∈ B_0 = Z, so level 0 needs a fractional escape letter.
        if n == 0 {
            self.value(1, 1)
        } else {
            self.value(1, 0)
        }
    }

    fn base_escape_level(&self, x: &PAdicRational) -> Option<usize> {
        match x.valuation() {
            crate::padic::Valuation::Infinity => None,
            crate::padic::Valuation::Finite(v) => Some((v + 1).max(0) as usize),
        }
    }

    fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> PAdicRational {
        let p = self.p.get() as i64;
        match rng.gen_range(0..10) {
            0..=3 => self.value(rng.gen_range(-2 * p * p..=2 * p * p), rng.gen_range(0..=2)),
            4..=6 => {
                // Near the amalgamated subgroups adjacent to level n.
                let e = n.saturating_sub(rng.gen_range(0..=1)) as u32;
                let t = rng.gen_range(-3i64..=3);
                PAdicRational::from_int(self.p, BigInt::from(t) * self.p.pow(e))
            }
            _ => self.value(rng.gen_range(-p..=p), rng.gen_range(0..=1)),
        }
    }

    fn sample_base<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> PAdicRational {
        let t = rng.gen_range(-5i64..=5);
        PAdicRational::from_int(self.p, BigInt::from(t) * self.p.pow(n as u32))
    }

    fn parse_literal(&self, src: &str) -> Result<PAdicRational> {
        PAdicRational::parse(self.p, src)
    }

    fn literal(&self, x: &PAdicRational) -> String {
        x.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_example() {
        let d = DenseInstance::new(Prime::new(5).unwrap());
        assert_eq!(d.split(1, &d.value(7, 1)), (d.value(2, 1), d.value(1, 0)));
        assert_eq!(
            d.split(3, &d.value(-1, 1)),
            (d.value(124, 1), d.value(-25, 0))
        );
    }

    #[test]
    fn escape_levels() {
        let d = DenseInstance::new(Prime::new(5).unwrap());
        assert_eq!(d.base_escape_level(&d.value(25, 0)), Some(3));
        assert_eq!(d.base_escape_level(&d.value(1, 1)), Some(0));
        assert_eq!(d.base_escape_level(&d.value(3, 0)), Some(1));
        assert_eq!(d.base_escape_level(&d.value(0, 0)), None);
        for n in 0..6 {
            assert!(!d.in_base(n, &d.escape_elem(n)));
            assert!(!d.in_base(n, &d.nonbase_elem(n)));
        }
    }
}
