//! Line-oriented pass/fail reports for the verification suites.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckItem {
    pub id: String,
    pub passed: bool,
    /// What was checked, or the witness of a failure.
    pub detail: String,
}

impl CheckItem {
    pub fn new(id: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckItem {
            id: id.into(),
            passed,
            detail: detail.into(),
        }
    }

    pub fn pass(id: impl Into<String>, detail: impl Into<String>) -> Self {
        Self::new(id, true, detail)
    }

    pub fn fail(id: impl Into<String>, detail: impl Into<String>) -> Self {
        Self::new(id, false, detail)
    }

    /// Passes on `Ok`, fails with the error text otherwise.
    pub fn from_result<T, E: fmt::Display>(
        id: impl Into<String>,
        ok_detail: impl Into<String>,
        r: Result<T, E>,
    ) -> Self {
        match r {
            Ok(_) => Self::pass(id, ok_detail),
            Err(e) => Self::fail(id, e.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub suite: String,
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn new(suite: impl Into<String>) -> Self {
        CheckReport {
            suite: suite.into(),
            items: Vec::new(),
        }
    }

    pub fn push(&mut self, item: CheckItem) {
        self.items.push(item);
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.items.extend(other.items);
    }

    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|i| !i.passed)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}", self.suite)?;
        for item in &self.items {
            let status = if item.passed { "PASS" } else { "FAIL" };
            // keep one item per line
            let detail = item.detail.replace('\n', " ");
            writeln!(f, "{status} {} {detail}", item.id)?;
        }
        let passed = self.items.iter().filter(|i| i.passed).count();
        writeln!(
            f,
            "overall {} ({passed}/{} passed)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.items.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_is_conjunction() {
        let mut r = CheckReport::new("demo");
        r.push(CheckItem::pass("a", "fine"));
        assert!(r.passed());
        r.push(CheckItem::fail("b", "broken\nbadly"));
        assert!(!r.passed());
        assert_eq!(
            r.to_string(),
            "suite demo\nPASS a fine\nFAIL b broken badly\noverall FAIL (1/2 passed)\n"
        );
    }
}
