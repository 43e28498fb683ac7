use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::instances::{InstanceDescriptor, InstanceKind};
use crate::padic::Prime;
use crate::system::FactorSystem;

/// An element `(x, y, z)` of the discrete Heisenberg group, with
/// `(x, y, z)(x', y', z') = (x + x', y + y', z + z' + x y')`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HeisenbergElem {
    pub x: BigInt,
    pub y: BigInt,
    pub z: BigInt,
}

impl HeisenbergElem {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>, z: impl Into<BigInt>) -> Self {
        HeisenbergElem {
            x: x.into(),
            y: y.into(),
            z: z.into(),
        }
    }

    pub fn identity() -> Self {
        Self::new(0, 0, 0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        HeisenbergElem {
            x: &self.x + &o.x,
            y: &self.y + &o.y,
            z: &self.z + &o.z + &self.x * &o.y,
        }
    }

    pub fn inv(&self) -> Self {
        HeisenbergElem {
            x: -&self.x,
            y: -&self.y,
            z: -&self.z + &self.x * &self.y,
        }
    }

    pub fn is_central(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

impl fmt::Display for HeisenbergElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

/// Every `H_n` is the Heisenberg group over `Z`; `B_n = {(0, 0, p^n t)}`.
///
/// Transversal of `H_n / B_{n-1}`: `(x, y, z mod p^{n-1})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeisenbergInstance {
    p: Prime,
}

impl HeisenbergInstance {
    pub fn new(p: Prime) -> Self {
        HeisenbergInstance { p }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    fn central(z: BigInt) -> HeisenbergElem {
        HeisenbergElem::new(0, 0, z)
    }

    fn split_z(&self, h: &HeisenbergElem, e: usize) -> (HeisenbergElem, HeisenbergElem) {
        let r = h.z.mod_floor(&self.p.pow(e as u32));
        let b = &h.z - &r;
        (
            HeisenbergElem {
                x: h.x.clone(),
                y: h.y.clone(),
                z: r,
            },
            Self::central(b),
        )
    }
}

impl FactorSystem for HeisenbergInstance {
    type Elem = HeisenbergElem;

    fn descriptor(&self) -> InstanceDescriptor {
        InstanceDescriptor {
            kind: InstanceKind::Heisenberg,
            prime: self.p.get(),
            length: None,
        }
    }

    fn factor_id(&self, _n: usize) -> HeisenbergElem {
        HeisenbergElem::identity()
    }

    fn factor_mul(&self, _n: usize, x: &HeisenbergElem, y: &HeisenbergElem) -> HeisenbergElem {
        x.mul(y)
    }

    fn factor_inv(&self, _n: usize, x: &HeisenbergElem) -> HeisenbergElem {
        x.inv()
    }

    fn in_base(&self, n: usize, e: &HeisenbergElem) -> bool {
        e.is_central() && e.z.is_multiple_of(&self.p.pow(n as u32))
    }

    fn split(&self, n: usize, h: &HeisenbergElem) -> (HeisenbergElem, HeisenbergElem) {
        debug_assert!(n >= 1);
        self.split_z(h, n - 1)
    }

    fn split_top(&self, n: usize, h: &HeisenbergElem) -> (HeisenbergElem, HeisenbergElem) {
        self.split_z(h, n)
    }

    fn split_chain(
        &self,
        _m: usize,
        n: usize,
        b: &HeisenbergElem,
    ) -> (HeisenbergElem, HeisenbergElem) {
        self.split_z(b, n)
    }

    fn nonbase_elem(&self, _n: usize) -> HeisenbergElem {
        HeisenbergElem::new(1, 0, 0)
    }

    fn escape_elem(&self, _n: usize) -> HeisenbergElem {
        HeisenbergElem::new(1, 0, 0)
    }

    fn base_escape_level(&self, e: &HeisenbergElem) -> Option<usize> {
        if !e.is_central() {
            Some(0)
        } else if e.z.is_zero() {
            None
        } else {
            Some(self.p.int_valuation(&e.z) as usize + 1)
        }
    }

    fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> HeisenbergElem {
        let p = self.p.get() as i64;
        if rng.gen_range(0..4) == 0 {
            let e = n.saturating_sub(rng.gen_range(0..=1)) as u32;
            let t = rng.gen_range(-3i64..=3);
            return Self::central(BigInt::from(t) * self.p.pow(e));
        }
        HeisenbergElem::new(
            rng.gen_range(-2i64..=2),
            rng.gen_range(-2i64..=2),
            rng.gen_range(-2 * p * p..=2 * p * p),
        )
    }

    fn sample_base<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> HeisenbergElem {
        let t = rng.gen_range(-5i64..=5);
        Self::central(BigInt::from(t) * self.p.pow(n as u32))
    }

    fn parse_literal(&self, src: &str) -> Result<HeisenbergElem> {
        let s = src.trim();
        let inner = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(s);
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::literal(src, "expected an integer triple x,y,z"));
        }
        let mut coords = Vec::with_capacity(3);
        for part in parts {
            let v: BigInt = part
                .parse()
                .map_err(|_| Error::literal(src, format!("`{part}` is not an integer")))?;
            coords.push(v);
        }
        let z = coords.pop().unwrap();
        let y = coords.pop().unwrap();
        let x = coords.pop().unwrap();
        Ok(HeisenbergElem { x, y, z })
    }

    fn literal(&self, e: &HeisenbergElem) -> String {
        format!("{},{},{}", e.x, e.y, e.z)
    }

    fn display_elem(&self, e: &HeisenbergElem) -> String {
        e.to_string()
    }
}
