//! JSON interchange for certificates.
//!
//! Elements are stored as word expressions so a record is readable and can
//! be replayed against a freshly built instance.

use serde::{Deserialize, Serialize};

use crate::amalgam::{Amalgam, GroupElement};
use crate::error::{Error, Result};
use crate::expr::{expand, format_word, parse, parse_word, Expr};
use crate::instances::{make_instance, InstanceDescriptor, InstanceKind};
use crate::system::FactorSystem;
use crate::with_instance;
use crate::witness::{CommTree, DerivedCertificate, EscapeCertificate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateKind {
    Escape,
    Derived,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub expr: String,
    pub level: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    #[serde(rename = "type")]
    pub kind: CertificateKind,
    pub instance: InstanceKind,
    pub prime: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<u32>,
    pub inputs: Inputs,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retries: Option<usize>,
    pub result: ResultRecord,
    pub seed: u64,
}

impl CertificateRecord {
    pub fn descriptor(&self) -> InstanceDescriptor {
        InstanceDescriptor {
            kind: self.instance,
            prime: self.prime,
            length: self.length,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidParams(format!("bad certificate: {e}")))
    }
}

pub fn element_expr<S: FactorSystem>(am: &Amalgam<S>, g: &GroupElement<S::Elem>) -> String {
    format_word(&am.to_word(g), am.system())
}

fn element_from_expr<S: FactorSystem>(am: &Amalgam<S>, src: &str) -> Result<GroupElement<S::Elem>> {
    am.reduce(&parse_word(src, am.system())?)
}

fn result_record<S: FactorSystem>(am: &Amalgam<S>, g: &GroupElement<S::Elem>) -> ResultRecord {
    ResultRecord {
        expr: element_expr(am, g),
        level: g.level(),
    }
}

fn header<S: FactorSystem>(sys: &S) -> (InstanceKind, u64, Option<u32>) {
    let d = sys.descriptor();
    (d.kind, d.prime, d.length)
}

pub fn escape_record<S: FactorSystem>(
    am: &Amalgam<S>,
    cert: &EscapeCertificate<S::Elem>,
    seed: u64,
) -> CertificateRecord {
    let (instance, prime, length) = header(am.system());
    CertificateRecord {
        kind: CertificateKind::Escape,
        instance,
        prime,
        length,
        inputs: Inputs {
            h: Some(element_expr(am, &cert.h)),
            g: Some(element_expr(am, &cert.g)),
            tree: None,
        },
        m: Some(cert.m),
        d: None,
        k: cert.claimed_floor,
        retries: None,
        result: result_record(am, &cert.result),
        seed,
    }
}

/// Renders a tree with commutator brackets, e.g. `[h1(1/5), h0(1/5)]`.
pub fn tree_expr<S: FactorSystem>(am: &Amalgam<S>, t: &CommTree<S::Elem>) -> String {
    match t {
        CommTree::Leaf(g) => element_expr(am, g),
        CommTree::Node(a, b) => format!("[{}, {}]", tree_expr(am, a), tree_expr(am, b)),
    }
}

pub fn parse_tree<S: FactorSystem>(am: &Amalgam<S>, src: &str) -> Result<CommTree<S::Elem>> {
    let e = parse(src, am.system())?;
    tree_from_expr(am, &e)
}

fn tree_from_expr<S: FactorSystem>(
    am: &Amalgam<S>,
    e: &Expr<S::Elem>,
) -> Result<CommTree<S::Elem>> {
    match e.as_commutator() {
        Some((a, b)) => Ok(CommTree::Node(
            Box::new(tree_from_expr(am, a)?),
            Box::new(tree_from_expr(am, b)?),
        )),
        None => Ok(CommTree::Leaf(am.reduce(&expand(e, am.system()))?)),
    }
}

pub fn derived_record<S: FactorSystem>(
    am: &Amalgam<S>,
    cert: &DerivedCertificate<S::Elem>,
    seed: u64,
) -> CertificateRecord {
    let (instance, prime, length) = header(am.system());
    CertificateRecord {
        kind: CertificateKind::Derived,
        instance,
        prime,
        length,
        inputs: Inputs {
            h: None,
            g: None,
            tree: Some(tree_expr(am, &cert.tree)),
        },
        m: None,
        d: Some(cert.depth),
        k: cert.claimed_floor,
        retries: Some(cert.retries),
        result: result_record(am, &cert.result),
        seed,
    }
}

fn required<T: Copy>(v: Option<T>, name: &str) -> std::result::Result<T, String> {
    v.ok_or_else(|| format!("missing field `{name}`"))
}

fn required_str<'a>(v: &'a Option<String>, name: &str) -> std::result::Result<&'a str, String> {
    v.as_deref()
        .ok_or_else(|| format!("missing input `{name}`"))
}

/// Replays a record against a freshly built instance, returning the first
/// failed invariant.
pub fn check_record_on<S: FactorSystem>(
    am: &Amalgam<S>,
    rec: &CertificateRecord,
) -> std::result::Result<(), String> {
    let stored = element_from_expr(am, &rec.result.expr).map_err(|e| e.to_string())?;
    if stored.level() != rec.result.level {
        return Err(format!(
            "recorded level {} but result has level {}",
            rec.result.level,
            stored.level()
        ));
    }
    match rec.kind {
        CertificateKind::Escape => {
            let h = element_from_expr(am, required_str(&rec.inputs.h, "h")?)
                .map_err(|e| e.to_string())?;
            let g = element_from_expr(am, required_str(&rec.inputs.g, "g")?)
                .map_err(|e| e.to_string())?;
            EscapeCertificate {
                h,
                m: required(rec.m, "m")?,
                g,
                result: stored,
                claimed_floor: rec.k,
            }
            .check(am)
        }
        CertificateKind::Derived => {
            let tree = parse_tree(am, required_str(&rec.inputs.tree, "tree")?)
                .map_err(|e| e.to_string())?;
            DerivedCertificate {
                depth: required(rec.d, "d")?,
                tree,
                result: stored,
                claimed_floor: rec.k,
                retries: rec.retries.unwrap_or(0),
            }
            .check(am)
        }
    }
}

pub fn check_record(rec: &CertificateRecord) -> std::result::Result<(), String> {
    let inst = make_instance(&rec.descriptor()).map_err(|e| e.to_string())?;
    with_instance!(inst, sys => check_record_on(&Amalgam::new(sys), rec))
}

pub fn verify_record(rec: &CertificateRecord) -> bool {
    check_record(rec).is_ok()
}
