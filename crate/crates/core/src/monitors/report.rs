use serde::Serialize;

/// Outcome of one check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Pass,
    Fail,
    /// Outside tolerance where the checked statement is not expected to
    /// apply; reported, never counted as a failure.
    Flagged,
}

/// How `value` is compared with `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// Pass iff `value ≥ −tolerance`.
    Margin,
    /// Pass iff `value ≤ tolerance`.
    Residual,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonitorRecord {
    pub name: String,
    pub criterion: Criterion,
    pub value: f64,
    pub tolerance: f64,
    /// Time of the worst case, when meaningful.
    pub t: Option<f64>,
    /// Normal angle of the worst case, when meaningful.
    pub theta: Option<f64>,
    pub status: Status,
    pub note: Option<String>,
}

impl MonitorRecord {
    fn new(name: impl Into<String>, criterion: Criterion, value: f64, tolerance: f64) -> Self {
        let ok = match criterion {
            Criterion::Margin => value >= -tolerance,
            Criterion::Residual => value <= tolerance,
        };
        Self {
            name: name.into(),
            criterion,
            value,
            tolerance,
            t: None,
            theta: None,
            status: if ok { Status::Pass } else { Status::Fail },
            note: None,
        }
    }

    pub fn margin(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self::new(name, Criterion::Margin, value, tolerance)
    }

    pub fn residual(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self::new(name, Criterion::Residual, value, tolerance)
    }

    pub fn at(mut self, t: Option<f64>, theta: Option<f64>) -> Self {
        self.t = t;
        self.theta = theta;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Downgrades a failure to a flagged observation.
    pub fn flag_failure(mut self, why: impl Into<String>) -> Self {
        if self.status == Status::Fail {
            self.status = Status::Flagged;
            self.note = Some(why.into());
        }
        self
    }

    pub fn within_tolerance(&self) -> bool {
        match self.criterion {
            Criterion::Margin => self.value >= -self.tolerance,
            Criterion::Residual => self.value <= self.tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MonitorReport {
    pub records: Vec<MonitorRecord>,
}

impl MonitorReport {
    pub fn push(&mut self, record: MonitorRecord) {
        self.records.push(record);
    }

    pub fn extend(&mut self, other: MonitorReport) {
        self.records.extend(other.records);
    }

    pub fn all_passed(&self) -> bool {
        self.records.iter().all(MonitorRecord::passed)
    }

    pub fn get(&self, name: &str) -> Option<&MonitorRecord> {
        self.records.iter().find(|r| r.name == name)
    }
}

impl From<Vec<MonitorRecord>> for MonitorReport {
    fn from(records: Vec<MonitorRecord>) -> Self {
        Self { records }
    }
}
