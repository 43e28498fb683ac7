//! Concrete factor systems.

mod conformance;
mod cyclic;
mod dense;
mod heisenberg;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use conformance::{check_conformance, ConformanceReport};
pub use cyclic::{CyclicInstance, DEFAULT_LEVEL_CAP};
pub use dense::DenseInstance;
pub use heisenberg::{HeisenbergElem, HeisenbergInstance};

use crate::error::{Error, Result};
use crate::padic::Prime;

pub const DEFAULT_CYCLIC_LENGTH: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    Dense,
    Heisenberg,
    Cyclic,
}

impl InstanceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            InstanceKind::Dense => "dense",
            InstanceKind::Heisenberg => "heisenberg",
            InstanceKind::Cyclic => "cyclic",
        }
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(InstanceKind::Dense),
            "heisenberg" => Ok(InstanceKind::Heisenberg),
            "cyclic" => Ok(InstanceKind::Cyclic),
            other => Err(Error::InvalidParams(format!("unknown instance `{other}`"))),
        }
    }
}

/// Enough data to rebuild an instance, as recorded in certificates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InstanceDescriptor {
    pub kind: InstanceKind,
    pub prime: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<u32>,
}

impl fmt::Display for InstanceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (p={}", self.kind, self.prime)?;
        if let Some(l) = self.length {
            write!(f, ", L={l}")?;
        }
        f.write_str(")")
    }
}

/// Runs `$body` with `$sys` bound to the concrete system inside an
/// [`AnyInstance`].
#[macro_export]
macro_rules! with_instance {
    ($inst:expr, $sys:ident => $body:expr) => {
        match $inst {
            $crate::instances::AnyInstance::Dense($sys) => $body,
            $crate::instances::AnyInstance::Heisenberg($sys) => $body,
            $crate::instances::AnyInstance::Cyclic($sys) => $body,
        }
    };
}

#[derive(Debug, Clone)]
pub enum AnyInstance {
    Dense(DenseInstance),
    Heisenberg(HeisenbergInstance),
    Cyclic(CyclicInstance),
}

/// Builds an instance and runs a small deterministic conformance pass;
/// instances violating the factor-system axioms are rejected.
pub fn make_instance(desc: &InstanceDescriptor) -> Result<AnyInstance> {
    let p = Prime::new(desc.prime)?;
    let inst = match desc.kind {
        InstanceKind::Dense => AnyInstance::Dense(DenseInstance::new(p)),
        InstanceKind::Heisenberg => AnyInstance::Heisenberg(HeisenbergInstance::new(p)),
        InstanceKind::Cyclic => AnyInstance::Cyclic(CyclicInstance::new(
            p,
            desc.length.unwrap_or(DEFAULT_CYCLIC_LENGTH),
        )?),
    };
    let report = inst.conformance(4, 16, 0x5eed);
    match report.failures.first() {
        None => Ok(inst),
        Some(f) => Err(Error::InvalidParams(format!("contract violation: {f}"))),
    }
}

impl AnyInstance {
    pub fn descriptor(&self) -> InstanceDescriptor {
        use crate::system::FactorSystem;
        with_instance!(self, s => s.descriptor())
    }

    pub fn conformance(&self, levels: usize, samples: usize, seed: u64) -> ConformanceReport {
        with_instance!(self, s => check_conformance(s, levels, samples, seed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_json() {
        let d = InstanceDescriptor {
            kind: InstanceKind::Cyclic,
            prime: 2,
            length: Some(3),
        };
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"kind":"cyclic","prime":2,"length":3}"#);
        assert_eq!(serde_json::from_str::<InstanceDescriptor>(&s).unwrap(), d);
    }

    #[test]
    fn make_instance_checks_params() {
        for kind in [
            InstanceKind::Dense,
            InstanceKind::Heisenberg,
            InstanceKind::Cyclic,
        ] {
            let desc = InstanceDescriptor {
                kind,
                prime: 3,
                length: None,
            };
            assert_eq!(make_instance(&desc).unwrap().descriptor().kind, kind);
        }
        let bad = InstanceDescriptor {
            kind: InstanceKind::Dense,
            prime: 4,
            length: None,
        };
        assert_eq!(make_instance(&bad).unwrap_err(), Error::NotPrime(4));
        let short = InstanceDescriptor {
            kind: InstanceKind::Cyclic,
            prime: 2,
            length: Some(1),
        };
        assert!(matches!(
            make_instance(&short),
            Err(Error::InvalidParams(_))
        ));
        assert!("padic".parse::<InstanceKind>().is_err());
    }
}
