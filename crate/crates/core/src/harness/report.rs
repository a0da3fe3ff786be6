//! Suite reports and their two serializations.
//!
//! Text form:
//!
//! ```text
//! suite: <name>
//! params: max_n=<n> samples=<k> seed=<s>
//! cases: <count>
//! violations: <count>
//! status: PASS|FAIL
//! violation <check> graph=<expr> <detail>     (one per violation)
//! note: <text>                                (one per note)
//! ```
//!
//! Structured form (JSON Lines): a `header` record, then one `case` record
//! per executed check, then one `note` record per note. Cases are sorted by
//! check, graph and detail, so output does not depend on scheduling.
//! Elapsed time is kept out of both forms to make them reproducible.

use std::time::Duration;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub max_n: usize,
    pub samples: usize,
    pub seed: u64,
}

/// Outcome of one executed check.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CaseRecord {
    pub check: String,
    /// Replayable family expression of the graph.
    pub graph: String,
    pub detail: String,
    pub ok: bool,
}

impl CaseRecord {
    pub fn new(check: &str, graph: &str, detail: String, ok: bool) -> Self {
        CaseRecord { check: check.to_string(), graph: graph.to_string(), detail, ok }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub suite: String,
    pub params: Params,
    pub cases: Vec<CaseRecord>,
    pub notes: Vec<String>,
    pub elapsed: Duration,
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum Line<'a> {
    Header {
        suite: &'a str,
        max_n: usize,
        samples: usize,
        seed: u64,
        cases_run: usize,
        violations: usize,
        passed: bool,
    },
    Case(&'a CaseRecord),
    Note { text: &'a str },
}

impl Report {
    pub fn new(suite: &str, params: Params, mut cases: Vec<CaseRecord>, notes: Vec<String>, elapsed: Duration) -> Self {
        cases.sort();
        Report { suite: suite.to_string(), params, cases, notes, elapsed }
    }

    pub fn cases_run(&self) -> usize {
        self.cases.len()
    }

    pub fn violations(&self) -> impl Iterator<Item = &CaseRecord> {
        self.cases.iter().filter(|c| !c.ok)
    }

    pub fn violation_count(&self) -> usize {
        self.violations().count()
    }

    pub fn passed(&self) -> bool {
        self.violation_count() == 0
    }

    /// Number of executed cases for one check name.
    pub fn count_of(&self, check: &str) -> usize {
        self.cases.iter().filter(|c| c.check == check).count()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "suite: {}\nparams: max_n={} samples={} seed={}\ncases: {}\nviolations: {}\nstatus: {}\n",
            self.suite,
            self.params.max_n,
            self.params.samples,
            self.params.seed,
            self.cases_run(),
            self.violation_count(),
            if self.passed() { "PASS" } else { "FAIL" },
        );
        for v in self.violations() {
            out.push_str(&format!("violation {} graph={} {}\n", v.check, v.graph, v.detail));
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let mut push = |line: &Line| {
            out.push_str(&serde_json::to_string(line).expect("serializable"));
            out.push('\n');
        };
        push(&Line::Header {
            suite: &self.suite,
            max_n: self.params.max_n,
            samples: self.params.samples,
            seed: self.params.seed,
            cases_run: self.cases_run(),
            violations: self.violation_count(),
            passed: self.passed(),
        });
        for c in &self.cases {
            push(&Line::Case(c));
        }
        for n in &self.notes {
            push(&Line::Note { text: n });
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serializations() {
        let params = Params { max_n: 3, samples: 0, seed: 9 };
        let cases = vec![
            CaseRecord::new("b", "K2", "x".into(), true),
            CaseRecord::new("a", "E1", "y".into(), false),
        ];
        let r = Report::new("demo", params, cases, vec!["hello".into()], Duration::from_secs(1));
        assert!(!r.passed());
        assert_eq!(r.cases[0].check, "a");
        let text = r.to_text();
        assert!(text.contains("status: FAIL\nviolation a graph=E1 y\nnote: hello\n"), "{text}");
        let jsonl = r.to_jsonl();
        let lines: Vec<&str> = jsonl.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with(r#"{"type":"header","suite":"demo""#), "{}", lines[0]);
        assert_eq!(lines[1], r#"{"type":"case","check":"a","graph":"E1","detail":"y","ok":false}"#);
        assert_eq!(lines[3], r#"{"type":"note","text":"hello"}"#);
    }
}
