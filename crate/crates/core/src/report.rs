//! Verification reports: named checks with witnesses of every failure.

use std::fmt;

use serde::Serialize;

const WITNESS_CAP: usize = 16;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Total number of violated instances.
    pub violations: usize,
    /// The first few violated instances, rendered.
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

/// Collects violations for one named check.
pub struct Tally {
    name: String,
    violations: usize,
    witnesses: Vec<String>,
}

impl Tally {
    pub fn new(name: impl Into<String>) -> Self {
        Tally { name: name.into(), violations: 0, witnesses: Vec::new() }
    }

    pub fn fail(&mut self, witness: impl FnOnce() -> String) {
        self.violations += 1;
        if self.witnesses.len() < WITNESS_CAP {
            self.witnesses.push(witness());
        }
    }

    pub fn expect(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if !ok {
            self.fail(witness);
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn is_clean(&self) -> bool {
        self.violations == 0
    }
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), checks: Vec::new(), elapsed_ms: None }
    }

    pub fn record(&mut self, t: Tally) {
        self.checks.push(Check { name: t.name, passed: t.violations == 0, violations: t.violations, witnesses: t.witnesses });
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) {
        let mut t = Tally::new(name);
        t.expect(ok, witness);
        self.record(t);
    }

    /// Appends all checks of `other`, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{prefix}: {}", c.name);
            self.checks.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn failed(&self, name: &str) -> bool {
        self.checks.iter().any(|c| !c.passed && c.name.contains(name))
    }

    pub fn status(&self) -> &'static str {
        if self.passed() {
            "pass"
        } else {
            "fail"
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.title, self.status())?;
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            writeln!(f, "  [{mark}] {}", c.name)?;
            if !c.passed {
                writeln!(f, "         {} violation(s)", c.violations)?;
                for w in &c.witnesses {
                    writeln!(f, "         {w}")?;
                }
            }
        }
        if let Some(ms) = self.elapsed_ms {
            writeln!(f, "  elapsed: {ms} ms")?;
        }
        Ok(())
    }
}
