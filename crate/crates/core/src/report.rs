//! Outcomes of law and oracle checks.

use std::fmt;

/// One checked law: its name, verdict and, on failure, a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawCheck {
    pub law: String,
    pub passed: bool,
    pub counterexample: Option<String>,
    /// Free-form extra information (e.g. whether an inequality was strict).
    pub note: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LawReport {
    pub checks: Vec<LawCheck>,
}

impl LawReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pass(&mut self, law: impl Into<String>) {
        self.checks.push(LawCheck {
            law: law.into(),
            passed: true,
            counterexample: None,
            note: None,
        });
    }

    pub fn fail(&mut self, law: impl Into<String>, counterexample: impl Into<String>) {
        self.checks.push(LawCheck {
            law: law.into(),
            passed: false,
            counterexample: Some(counterexample.into()),
            note: None,
        });
    }

    /// Records `law` as passed when `witness` is `None`, failed otherwise.
    pub fn record(&mut self, law: impl Into<String>, witness: Option<String>) {
        match witness {
            None => self.pass(law),
            Some(w) => self.fail(law, w),
        }
    }

    pub fn annotate_last(&mut self, note: impl Into<String>) {
        if let Some(last) = self.checks.last_mut() {
            last.note = Some(note.into());
        }
    }

    pub fn extend(&mut self, other: LawReport) {
        self.checks.extend(other.checks);
    }

    /// Prefixes every law name with `prefix/`.
    pub fn scoped(mut self, prefix: &str) -> Self {
        for c in &mut self.checks {
            c.law = format!("{prefix}/{}", c.law);
        }
        self
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, law: &str) -> Option<&LawCheck> {
        self.checks.iter().find(|c| c.law == law)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for LawCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict}\t{}", self.law)?;
        if let Some(c) = &self.counterexample {
            write!(f, "\t{c}")?;
        }
        if let Some(n) = &self.note {
            write!(f, "\t({n})")?;
        }
        Ok(())
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}
