//! Pass/fail reports produced by the symbolic verification suites.

use alloc::string::String;
use alloc::vec::Vec;

/// One verified identity; `residual` is the canonical form of the difference
/// between the two sides ("" when the identity holds).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub pass: bool,
    pub residual: String,
}

impl IdentityCheck {
    pub fn pass(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass: true,
            residual: String::new(),
        }
    }

    pub fn fail(name: impl Into<String>, residual: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass: false,
            residual: residual.into(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub items: Vec<IdentityCheck>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, item: IdentityCheck) {
        self.items.push(item);
    }

    pub fn merge(&mut self, other: Report) {
        self.items.extend(other.items);
    }

    pub fn all_passed(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.items.iter().filter(|i| !i.pass)
    }
}
