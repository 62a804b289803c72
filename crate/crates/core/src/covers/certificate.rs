use serde::Serialize;

use crate::exactlin::{Matrix, RationalVector};
use crate::format::{ser_group, ser_matrix, ser_vector};
use crate::groups::LocalizedGroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Status::Pass
    }
}

/// Evidence attached to a condition. Each variant can be checked with `member` and matrix
/// application alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A hom given by its matrix.
    Hom {
        #[serde(serialize_with = "ser_matrix")]
        matrix: Matrix,
    },
    /// An endomorphism of the group taking `element` of the subgroup to `image` outside it.
    MovedElement {
        #[serde(serialize_with = "ser_matrix")]
        endomorphism: Matrix,
        #[serde(serialize_with = "ser_vector")]
        element: RationalVector,
        #[serde(serialize_with = "ser_vector")]
        image: RationalVector,
    },
    Element {
        #[serde(serialize_with = "ser_vector")]
        vector: RationalVector,
    },
    Group {
        #[serde(serialize_with = "ser_group")]
        group: LocalizedGroup,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub label: String,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// Per-condition report. The verdict depends only on the certificate's own conditions;
/// attached certificates are carried along but not folded in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub subject: String,
    pub verdict: Status,
    pub conditions: Vec<Condition>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub attachments: Vec<Certificate>,
}

impl Certificate {
    pub fn new(subject: impl Into<String>) -> Self {
        Self { subject: subject.into(), verdict: Status::Pass, conditions: Vec::new(), attachments: Vec::new() }
    }

    pub fn push(&mut self, label: impl Into<String>, ok: bool, detail: impl Into<String>, witness: Option<Witness>) {
        let status = Status::from_bool(ok);
        if !ok {
            self.verdict = Status::Fail;
        }
        self.conditions.push(Condition { label: label.into(), status, detail: detail.into(), witness });
    }

    pub fn attach(&mut self, cert: Certificate) {
        self.attachments.push(cert);
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    pub fn condition(&self, label: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.label == label)
    }

    /// Whether the labelled condition exists and passed.
    pub fn condition_passed(&self, label: &str) -> bool {
        self.condition(label).is_some_and(|c| c.status.passed())
    }

    pub fn attachment(&self, subject: &str) -> Option<&Certificate> {
        self.attachments.iter().find(|c| c.subject == subject)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_follows_conditions() {
        let mut c = Certificate::new("t");
        c.push("a", true, "", None);
        assert!(c.passed());
        let mut inner = Certificate::new("inner");
        inner.push("x", false, "", None);
        c.attach(inner);
        assert!(c.passed());
        c.push("b", false, "", None);
        assert!(!c.passed());
        assert!(c.condition_passed("a"));
        assert!(!c.condition_passed("b"));
        assert!(!c.condition_passed("missing"));
    }
}
