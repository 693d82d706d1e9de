//! Structured verdicts shared by all analyses.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    Vanishes,
    Inconclusive,
    StableSufficient,
}

impl Verdict {
    pub fn is_fail(self) -> bool {
        self == Verdict::Fail
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
}

impl Relation {
    pub fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            Relation::Lt => value < threshold,
            Relation::Le => value <= threshold,
            Relation::Gt => value > threshold,
            Relation::Ge => value >= threshold,
        }
    }
}

/// `value relation threshold`, e.g. a residual below a tolerance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub value: f64,
    pub relation: Relation,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(label: impl Into<String>, value: f64, relation: Relation, threshold: f64) -> Self {
        // + 0.0 folds -0 into 0 so reports never print a signed zero
        let value = value + 0.0;
        Check { label: label.into(), value, relation, threshold, pass: relation.holds(value, threshold) }
    }

    pub fn flag(label: impl Into<String>, ok: bool) -> Self {
        Check::new(label, if ok { 1.0 } else { 0.0 }, Relation::Ge, 1.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Num(f64),
    Text(String),
    List(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Entry {
    pub label: String,
    pub value: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriteriaReport {
    pub title: String,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    pub values: Vec<Entry>,
    pub notes: Vec<String>,
    pub sections: Vec<CriteriaReport>,
}

impl CriteriaReport {
    pub fn new(title: impl Into<String>) -> Self {
        CriteriaReport {
            title: title.into(),
            verdict: Verdict::Pass,
            checks: Vec::new(),
            values: Vec::new(),
            notes: Vec::new(),
            sections: Vec::new(),
        }
    }

    pub fn check(&mut self, c: Check) -> &mut Self {
        self.checks.push(c);
        self
    }

    pub fn value(&mut self, label: impl Into<String>, value: Value) -> &mut Self {
        self.values.push(Entry { label: label.into(), value });
        self
    }

    pub fn num(&mut self, label: impl Into<String>, x: f64) -> &mut Self {
        self.value(label, Value::Num(x + 0.0))
    }

    pub fn text(&mut self, label: impl Into<String>, s: impl Into<String>) -> &mut Self {
        self.value(label, Value::Text(s.into()))
    }

    pub fn note(&mut self, s: impl Into<String>) -> &mut Self {
        self.notes.push(s.into());
        self
    }

    pub fn section(&mut self, r: CriteriaReport) -> &mut Self {
        self.sections.push(r);
        self
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass) && self.sections.iter().all(|s| s.all_checks_pass())
    }

    /// Sets PASS/FAIL from the checks, including nested sections.
    pub fn settle(mut self) -> Self {
        self.verdict = if self.all_checks_pass() { Verdict::Pass } else { Verdict::Fail };
        self
    }

    pub fn failed_checks(&self) -> Vec<String> {
        let mut out: Vec<String> =
            self.checks.iter().filter(|c| !c.pass).map(|c| format!("{}: {}", self.title, c.label)).collect();
        for s in &self.sections {
            out.extend(s.failed_checks());
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// (label, value) rows; nested sections are prefixed by their title.
    pub fn flatten(&self) -> Vec<(String, String)> {
        let mut rows = Vec::new();
        self.flatten_into("", &mut rows);
        rows
    }

    fn flatten_into(&self, prefix: &str, rows: &mut Vec<(String, String)>) {
        let p = if prefix.is_empty() { self.title.clone() } else { format!("{prefix}/{}", self.title) };
        rows.push((format!("{p}/verdict"), verdict_text(self.verdict)));
        for c in &self.checks {
            rows.push((format!("{p}/check/{}", c.label), format!("{}", c.value)));
            rows.push((format!("{p}/check/{}/pass", c.label), c.pass.to_string()));
        }
        for e in &self.values {
            match &e.value {
                Value::List(xs) => {
                    for (i, x) in xs.iter().enumerate() {
                        rows.push((format!("{p}/{}[{i}]", e.label), format!("{x}")));
                    }
                }
                Value::Bool(b) => rows.push((format!("{p}/{}", e.label), b.to_string())),
                Value::Int(i) => rows.push((format!("{p}/{}", e.label), i.to_string())),
                Value::Num(x) => rows.push((format!("{p}/{}", e.label), format!("{x}"))),
                Value::Text(s) => rows.push((format!("{p}/{}", e.label), s.clone())),
            }
        }
        for s in &self.sections {
            s.flatten_into(&p, rows);
        }
    }
}

fn verdict_text(v: Verdict) -> String {
    serde_json::to_value(v).ok().and_then(|x| x.as_str().map(str::to_owned)).unwrap_or_default()
}
