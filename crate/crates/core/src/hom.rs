//! The homomorphism `φ : G → A` into an abelian group `A`, assembled from
//! factor maps `φ_n : H_n → A` that agree on the amalgamated subgroups, and
//! `ψ = unipotent ∘ φ` into 2x2 matrices.
//!
//! `φ` is evaluated letterwise on canonical forms. No quotient `G / ker φ`
//! is built; kernel membership is `φ(g) = 0`.

use std::fmt::Debug;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::amalgam::{Amalgam, CanonicalForm, GroupElement, Letter};
use crate::error::{Error, Result};
use crate::instances::{CyclicInstance, DenseInstance, HeisenbergElem, HeisenbergInstance};
use crate::padic::{Mat2, PAdicRational, Prime};
use crate::system::FactorSystem;

/// A family of homomorphisms `H_n → A` into an additively written abelian
/// group.
pub trait LevelwiseHom<S: FactorSystem> {
    type Value: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Value;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn on_factor(&self, n: usize, x: &S::Elem) -> Self::Value;

    /// Embedding of the target into matrix entries, when one exists.
    fn to_entry(&self, _v: &Self::Value) -> Option<PAdicRational> {
        None
    }

    fn format_value(&self, v: &Self::Value) -> String;
}

/// `φ_n = id` on `Z[1/p]` for every level.
#[derive(Debug, Clone, Copy)]
pub struct DenseHom {
    p: Prime,
}

impl DenseHom {
    pub fn new(sys: &DenseInstance) -> Self {
        DenseHom { p: sys.prime() }
    }
}

impl LevelwiseHom<DenseInstance> for DenseHom {
    type Value = PAdicRational;

    fn zero(&self) -> PAdicRational {
        PAdicRational::zero(self.p)
    }

    fn add(&self, a: &PAdicRational, b: &PAdicRational) -> PAdicRational {
        a + b
    }

    fn on_factor(&self, _n: usize, x: &PAdicRational) -> PAdicRational {
        x.clone()
    }

    fn to_entry(&self, v: &PAdicRational) -> Option<PAdicRational> {
        Some(v.clone())
    }

    fn format_value(&self, v: &PAdicRational) -> String {
        v.to_string()
    }
}

/// `(x, y, z) ↦ x`, the same on every level; kills every `B_n`.
#[derive(Debug, Clone, Copy)]
pub struct HeisenbergProjection {
    p: Prime,
}

impl HeisenbergProjection {
    pub fn new(sys: &HeisenbergInstance) -> Self {
        HeisenbergProjection { p: sys.prime() }
    }
}

impl LevelwiseHom<HeisenbergInstance> for HeisenbergProjection {
    type Value = PAdicRational;

    fn zero(&self) -> PAdicRational {
        PAdicRational::zero(self.p)
    }

    fn add(&self, a: &PAdicRational, b: &PAdicRational) -> PAdicRational {
        a + b
    }

    fn on_factor(&self, _n: usize, e: &HeisenbergElem) -> PAdicRational {
        PAdicRational::from_int(self.p, e.x.clone())
    }

    fn to_entry(&self, v: &PAdicRational) -> Option<PAdicRational> {
        Some(v.clone())
    }

    fn format_value(&self, v: &PAdicRational) -> String {
        v.to_string()
    }
}

/// Identity `Z/p^L → Z/p^L` on every level. Has no matrix embedding.
#[derive(Debug, Clone, Copy)]
pub struct CyclicResidue {
    modulus: u64,
}

impl CyclicResidue {
    pub fn new(sys: &CyclicInstance) -> Self {
        CyclicResidue {
            modulus: sys.modulus(),
        }
    }
}

impl LevelwiseHom<CyclicInstance> for CyclicResidue {
    type Value = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.modulus
    }

    fn on_factor(&self, _n: usize, x: &u64) -> u64 {
        *x
    }

    fn format_value(&self, v: &u64) -> String {
        v.to_string()
    }
}

/// The homomorphism each shipped instance is paired with.
pub trait DefaultHom: FactorSystem + Sized {
    type Hom: LevelwiseHom<Self>;
    fn default_hom(&self) -> Self::Hom;
}

impl DefaultHom for DenseInstance {
    type Hom = DenseHom;
    fn default_hom(&self) -> DenseHom {
        DenseHom::new(self)
    }
}

impl DefaultHom for HeisenbergInstance {
    type Hom = HeisenbergProjection;
    fn default_hom(&self) -> HeisenbergProjection {
        HeisenbergProjection::new(self)
    }
}

impl DefaultHom for CyclicInstance {
    type Hom = CyclicResidue;
    fn default_hom(&self) -> CyclicResidue {
        CyclicResidue::new(self)
    }
}

/// `φ` bound to an engine, after a sampled compatibility check.
pub struct Phi<'a, S: FactorSystem, H> {
    amalgam: &'a Amalgam<S>,
    hom: H,
}

impl<'a, S: FactorSystem, H: LevelwiseHom<S>> Phi<'a, S, H> {
    /// Samples `b ∈ B_n` and checks `φ_n(b) = φ_{n+1}(b)` and that each
    /// `φ_n` is additive on sampled pairs, for `n <= levels`.
    pub fn new(
        amalgam: &'a Amalgam<S>,
        hom: H,
        levels: usize,
        samples: usize,
        seed: u64,
    ) -> Result<Self> {
        let sys = amalgam.system();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for n in 0..=levels {
            for _ in 0..samples {
                let b = sys.sample_base(n, &mut rng);
                let (lo, hi) = (hom.on_factor(n, &b), hom.on_factor(n + 1, &b));
                if lo != hi {
                    return Err(Error::IncompatibleHom(format!(
                        "φ_{n}({0}) = {1} but φ_{2}({0}) = {3}",
                        sys.literal(&b),
                        hom.format_value(&lo),
                        n + 1,
                        hom.format_value(&hi),
                    )));
                }
                let (x, y) = (sys.sample(n, &mut rng), sys.sample(n, &mut rng));
                let lhs = hom.on_factor(n, &sys.factor_mul(n, &x, &y));
                let rhs = hom.add(&hom.on_factor(n, &x), &hom.on_factor(n, &y));
                if lhs != rhs {
                    return Err(Error::IncompatibleHom(format!(
                        "φ_{n} is not additive on {} and {}",
                        sys.literal(&x),
                        sys.literal(&y)
                    )));
                }
            }
        }
        Ok(Phi { amalgam, hom })
    }

    pub fn hom(&self) -> &H {
        &self.hom
    }

    pub fn eval(&self, g: &GroupElement<S::Elem>) -> H::Value {
        self.eval_cf(g.canonical_form())
    }

    fn eval_cf(&self, x: &CanonicalForm<S::Elem>) -> H::Value {
        match x {
            CanonicalForm::Base(h) => self.hom.on_factor(0, h),
            CanonicalForm::Alt(a) => {
                let mut acc = self.hom.on_factor(a.level - 1, &a.tail);
                for letter in &a.letters {
                    let v = match letter {
                        Letter::Right(r) => self.hom.on_factor(a.level, r),
                        Letter::Left(l) => self.eval_cf(l),
                    };
                    acc = self.hom.add(&acc, &v);
                }
                acc
            }
        }
    }

    pub fn in_kernel(&self, g: &GroupElement<S::Elem>) -> bool {
        self.eval(g) == self.hom.zero()
    }

    /// `ψ(g) = [[1, φ(g)], [0, 1]]`.
    pub fn psi(&self, g: &GroupElement<S::Elem>) -> Result<Mat2> {
        let entry = self
            .hom
            .to_entry(&self.eval(g))
            .ok_or(Error::NoMatrixEmbedding)?;
        Ok(Mat2::unipotent(&entry))
    }

    pub fn amalgam(&self) -> &Amalgam<S> {
        self.amalgam
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::{Syllable, Word};

    fn setup() -> (Amalgam<DenseInstance>, DenseHom) {
        let sys = DenseInstance::new(Prime::new(5).unwrap());
        let hom = DenseHom::new(&sys);
        (Amalgam::new(sys), hom)
    }

    fn el(am: &Amalgam<DenseInstance>, items: &[(usize, i64, u32)]) -> GroupElement<PAdicRational> {
        let sys = am.system();
        am.reduce(&Word::new(
            items
                .iter()
                .map(|&(l, n, k)| Syllable::new(l, sys.value(n, k)))
                .collect(),
        ))
        .unwrap()
    }

    #[test]
    fn phi_examples() {
        let (am, hom) = setup();
        let phi = Phi::new(&am, hom, 6, 20, 0).unwrap();
        let sys = am.system();
        assert_eq!(phi.eval(&el(&am, &[(2, 3, 2)])), sys.value(3, 2));
        assert_eq!(phi.eval(&am.identity()), sys.value(0, 0));
        let a = el(&am, &[(1, 1, 1)]);
        let b = el(&am, &[(0, 1, 1)]);
        assert_eq!(phi.eval(&am.commutator(&a, &b)), sys.value(0, 0));
        assert_eq!(phi.eval(&el(&am, &[(0, 1, 1), (1, 2, 1)])), sys.value(3, 1));
    }

    #[test]
    fn kernel_examples() {
        let (am, hom) = setup();
        let phi = Phi::new(&am, hom, 6, 20, 0).unwrap();
        assert!(phi.in_kernel(&am.identity()));
        assert!(!phi.in_kernel(&el(&am, &[(0, 1, 1)])));
        assert!(phi.in_kernel(&el(&am, &[(1, 1, 1), (0, 1, 1), (1, -1, 1), (0, -1, 1)])));
    }

    #[test]
    fn psi_examples() {
        let (am, hom) = setup();
        let phi = Phi::new(&am, hom, 6, 20, 0).unwrap();
        let p = am.system().prime();
        assert_eq!(phi.psi(&am.identity()).unwrap(), Mat2::identity(p));
        let x = am.system().value(7, 2);
        let g = am.syllable(0, &x).unwrap();
        assert_eq!(phi.psi(&g).unwrap(), Mat2::unipotent(&x));
    }

    #[test]
    fn cyclic_has_no_matrix_image() {
        let sys = CyclicInstance::new(Prime::new(2).unwrap(), 3).unwrap();
        let hom = CyclicResidue::new(&sys);
        let am = Amalgam::new(sys);
        let phi = Phi::new(&am, hom, 4, 10, 0).unwrap();
        let g = am.syllable(2, &3).unwrap();
        assert_eq!(phi.eval(&g), 3);
        assert_eq!(phi.psi(&g), Err(Error::NoMatrixEmbedding));
    }

    /// `φ_n(x, y, z) = n z`: disagrees on `B_n` between adjacent levels.
    struct LevelScaled;

    impl LevelwiseHom<HeisenbergInstance> for LevelScaled {
        type Value = i64;
        fn zero(&self) -> i64 {
            0
        }
        fn add(&self, a: &i64, b: &i64) -> i64 {
            a + b
        }
        fn on_factor(&self, n: usize, e: &HeisenbergElem) -> i64 {
            n as i64 * i64::try_from(&e.z).unwrap()
        }
        fn format_value(&self, v: &i64) -> String {
            v.to_string()
        }
    }

    #[test]
    fn incompatible_family_rejected() {
        let am = Amalgam::new(HeisenbergInstance::new(Prime::new(3).unwrap()));
        let err = Phi::new(&am, LevelScaled, 3, 50, 1).err().unwrap();
        assert!(matches!(err, Error::IncompatibleHom(_)));
    }
}
