use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

use crate::error::{Error, Result};
use crate::instances::{InstanceDescriptor, InstanceKind};
use crate::padic::Prime;
use crate::system::FactorSystem;

pub const DEFAULT_LEVEL_CAP: usize = 16;

/// `H_n = Z / p^L` for every `n`, `B_n = <p^{min(n + shift, L)}>`.
///
/// The shipped family uses `shift = 1`, so `B_0 = <p> ≠ H_0` and the chain
/// is trivial from `n = L - 1` on. Levels above the cap are rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclicInstance {
    p: Prime,
    length: u32,
    shift: u32,
    modulus: u64,
    level_cap: usize,
}

impl CyclicInstance {
    pub fn new(p: Prime, length: u32) -> Result<Self> {
        Self::with_shift(p, length, 1, DEFAULT_LEVEL_CAP)
    }

    pub fn with_shift(p: Prime, length: u32, shift: u32, level_cap: usize) -> Result<Self> {
        if length < 2 {
            return Err(Error::InvalidParams(format!(
                "cyclic length must be at least 2, got {length}"
            )));
        }
        let modulus = p
            .get()
            .checked_pow(length)
            .filter(|m| *m <= u32::MAX as u64)
            .ok_or_else(|| Error::InvalidParams(format!("{p}^{length} is too large")))?;
        let inst = CyclicInstance {
            p,
            length,
            shift,
            modulus,
            level_cap,
        };
        // B_n = H_n (resp. H_{n+1}) exactly when the generator exponent is 0.
        for n in 0..=length as usize {
            if inst.exponent(n) == 0 {
                return Err(Error::InvalidParams(format!(
                    "B_{n} equals the whole factor group"
                )));
            }
        }
        Ok(inst)
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn length(&self) -> u32 {
        self.length
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `e` with `B_n = <p^e>`.
    fn exponent(&self, n: usize) -> u32 {
        (n as u64 + self.shift as u64).min(self.length as u64) as u32
    }

    fn base_order(&self, n: usize) -> u64 {
        self.p.get().pow(self.exponent(n))
    }

    fn split_mod(&self, h: u64, e_mod: u64) -> (u64, u64) {
        let r = h % e_mod;
        (r, h - r)
    }
}

impl FactorSystem for CyclicInstance {
    type Elem = u64;

    fn descriptor(&self) -> InstanceDescriptor {
        InstanceDescriptor {
            kind: InstanceKind::Cyclic,
            prime: self.p.get(),
            length: Some(self.length),
        }
    }

    fn max_level(&self) -> Option<usize> {
        Some(self.level_cap)
    }

    fn factor_id(&self, _n: usize) -> u64 {
        0
    }

    fn factor_mul(&self, _n: usize, x: &u64, y: &u64) -> u64 {
        (x + y) % self.modulus
    }

    fn factor_inv(&self, _n: usize, x: &u64) -> u64 {
        (self.modulus - x) % self.modulus
    }

    fn in_base(&self, n: usize, x: &u64) -> bool {
        (*x).is_multiple_of(self.base_order(n))
    }

    fn split(&self, n: usize, h: &u64) -> (u64, u64) {
        debug_assert!(n >= 1);
        self.split_mod(*h, self.base_order(n - 1))
    }

    fn split_top(&self, n: usize, h: &u64) -> (u64, u64) {
        self.split_mod(*h, self.base_order(n))
    }

    fn split_chain(&self, _m: usize, n: usize, b: &u64) -> (u64, u64) {
        self.split_mod(*b, self.base_order(n))
    }

    fn nonbase_elem(&self, _n: usize) -> u64 {
        1
    }

    fn escape_elem(&self, _n: usize) -> u64 {
        1
    }

    fn base_escape_level(&self, x: &u64) -> Option<usize> {
        if *x == 0 {
            return None;
        }
        let v = self.p.int_valuation(&BigInt::from(*x));
        // minimal n with n + shift > v
        Some((v + 1).saturating_sub(self.shift) as usize)
    }

    fn sample<R: Rng + ?Sized>(&self, _n: usize, rng: &mut R) -> u64 {
        rng.gen_range(0..self.modulus)
    }

    fn sample_base<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> u64 {
        let order = self.base_order(n);
        (order * rng.gen_range(0..self.modulus)) % self.modulus
    }

    fn parse_literal(&self, src: &str) -> Result<u64> {
        let v: BigInt = src
            .trim()
            .parse()
            .map_err(|_| Error::literal(src, "expected an integer residue"))?;
        Ok(v.mod_floor(&BigInt::from(self.modulus))
            .to_u64()
            .expect("residue fits"))
    }

    fn literal(&self, x: &u64) -> String {
        x.to_string()
    }
}
