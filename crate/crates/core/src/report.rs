use serde::Serialize;

use crate::error::Error;

/// Outcome of a batch of exact property checks. Failures keep their
/// witnesses verbatim.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            checks: 0,
            failures: Vec::new(),
        }
    }

    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(witness());
        }
    }

    /// Records a check whose evaluation itself failed.
    pub fn error(&mut self, context: &str, err: &Error) {
        self.checks += 1;
        self.failures.push(format!("{}: {}", context, err));
    }

    /// Runs `f`, turning an error into a recorded failure.
    pub fn run(&mut self, context: &str, f: impl FnOnce(&mut Self) -> crate::Result<()>) {
        if let Err(e) = f(self) {
            self.error(context, &e);
        }
    }

    pub fn absorb(&mut self, other: CheckReport) {
        self.checks += other.checks;
        self.failures.extend(other.failures);
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checks > 0
    }
}

impl std::fmt::Display for CheckReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: {} checks, {} failures",
            self.name,
            self.checks,
            self.failures.len()
        )?;
        for w in self.failures.iter().take(5) {
            write!(f, "\n  {}", w)?;
        }
        Ok(())
    }
}
