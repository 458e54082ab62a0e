use std::fmt;

use serde::Serialize;

use crate::functors::ModuleMap;
use crate::meshcat::IdealTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    Heredity,
    QhChain,
    DeltaFiltration,
    TorCriterion,
    Approximation,
    Tilting,
    Tensor,
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CertificateKind::Heredity => "heredity",
            CertificateKind::QhChain => "qh-chain",
            CertificateKind::DeltaFiltration => "delta-filtration",
            CertificateKind::TorCriterion => "tor-criterion",
            CertificateKind::Approximation => "approximation",
            CertificateKind::Tilting => "tilting",
            CertificateKind::Tensor => "tensor",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Data a verdict rests on, re-verifiable by linear algebra alone.
#[derive(Clone, Debug)]
pub enum Evidence {
    Isomorphism(ModuleMap),
    Surjection(ModuleMap),
    Injection(ModuleMap),
    ShortExact {
        injection: ModuleMap,
        surjection: ModuleMap,
    },
    EqualIdeals(IdealTable, IdealTable),
    ZeroIdeal(IdealTable),
}

impl Evidence {
    pub fn recheck(&self) -> bool {
        match self {
            Evidence::Isomorphism(m) => m.check_natural().is_ok() && m.is_isomorphism(),
            Evidence::Surjection(m) => m.check_natural().is_ok() && m.is_surjective(),
            Evidence::Injection(m) => m.check_natural().is_ok() && m.is_injective(),
            Evidence::ShortExact {
                injection,
                surjection,
            } => {
                let composite_zero = injection
                    .then(surjection)
                    .map(|c| c.is_zero())
                    .unwrap_or(false);
                let middle = injection.target();
                let additive = (0..middle.category().len()).all(|y| {
                    middle.dim(y) == injection.source().dim(y) + surjection.target().dim(y)
                });
                injection.check_natural().is_ok()
                    && surjection.check_natural().is_ok()
                    && injection.is_injective()
                    && surjection.is_surjective()
                    && composite_zero
                    && additive
            }
            Evidence::EqualIdeals(a, b) => a.same_spans(b),
            Evidence::ZeroIdeal(a) => a.is_zero(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub label: String,
    pub detail: String,
    #[serde(skip)]
    pub evidence: Option<Evidence>,
}

/// Outcome of a verifier: named checks, witnesses and nested certificates.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub subject: String,
    pub scope: String,
    pub passed: bool,
    pub counterexample: Option<String>,
    pub checks: Vec<Check>,
    pub witnesses: Vec<Witness>,
    pub children: Vec<Certificate>,
}

impl Certificate {
    pub fn new(kind: CertificateKind, subject: impl Into<String>) -> Certificate {
        Certificate {
            kind,
            subject: subject.into(),
            scope: "finite category".into(),
            passed: true,
            counterexample: None,
            checks: Vec::new(),
            witnesses: Vec::new(),
            children: Vec::new(),
        }
    }

    pub fn with_scope(mut self, scope: impl Into<String>) -> Certificate {
        self.scope = scope.into();
        self
    }

    /// Records a check; the first failing one becomes the counterexample.
    pub fn check(
        &mut self,
        name: impl Into<String>,
        passed: bool,
        detail: impl Into<String>,
    ) -> bool {
        let name = name.into();
        let detail = detail.into();
        if !passed {
            self.passed = false;
            if self.counterexample.is_none() {
                self.counterexample = Some(format!("{name}: {detail}"));
            }
        }
        self.checks.push(Check {
            name,
            passed,
            detail,
        });
        passed
    }

    pub fn witness(
        &mut self,
        label: impl Into<String>,
        detail: impl Into<String>,
        evidence: Option<Evidence>,
    ) {
        self.witnesses.push(Witness {
            label: label.into(),
            detail: detail.into(),
            evidence,
        });
    }

    pub fn absorb(&mut self, child: Certificate) {
        if !child.passed {
            self.passed = false;
            if self.counterexample.is_none() {
                self.counterexample = Some(format!(
                    "{} [{}]: {}",
                    child.kind,
                    child.subject,
                    child.counterexample.clone().unwrap_or_default()
                ));
            }
        }
        self.children.push(child);
    }

    pub fn check_passed(&self, name: &str) -> Option<bool> {
        self.checks
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.passed)
    }

    /// Re-verifies every stored witness without repeating any search.
    pub fn recheck(&self) -> bool {
        self.witnesses
            .iter()
            .filter_map(|w| w.evidence.as_ref())
            .all(Evidence::recheck)
            && self.children.iter().all(Certificate::recheck)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    fn write_report(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let pad = "  ".repeat(depth);
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        writeln!(
            f,
            "{pad}[{verdict}] {} :: {} ({})",
            self.kind, self.subject, self.scope
        )?;
        for c in &self.checks {
            let mark = if c.passed { "ok" } else { "FAILED" };
            if c.detail.is_empty() {
                writeln!(f, "{pad}  - {}: {mark}", c.name)?;
            } else {
                writeln!(f, "{pad}  - {}: {mark} {}", c.name, c.detail)?;
            }
        }
        for w in &self.witnesses {
            writeln!(f, "{pad}  * {}: {}", w.label, w.detail)?;
        }
        if let Some(cx) = &self.counterexample {
            writeln!(f, "{pad}  counterexample: {cx}")?;
        }
        for child in &self.children {
            child.write_report(f, depth + 1)?;
        }
        Ok(())
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_report(f, 0)
    }
}
