use serde::Serialize;

/// Outcome of a theorem-based m-to-1 prediction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum Verdict {
    /// A clause granting this m fired.
    MTo1 { m: u64, clause: String },
    /// The hypotheses hold and no clause grants the asked m.
    NotMTo1ForAskedM,
    /// The theorem does not speak to this input.
    OutOfTheoremScope { reason: String },
}

impl Verdict {
    pub fn is_m_to_1(&self) -> Option<bool> {
        match self {
            Verdict::MTo1 { .. } => Some(true),
            Verdict::NotMTo1ForAskedM => Some(false),
            Verdict::OutOfTheoremScope { .. } => None,
        }
    }

    pub fn clause(&self) -> Option<&str> {
        match self {
            Verdict::MTo1 { clause, .. } => Some(clause),
            _ => None,
        }
    }
}

/// One clause of a theorem that fired: the m it grants and its label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Clause {
    pub m: u64,
    pub label: String,
}

impl Clause {
    pub fn new(prefix: &str, number: u8, m: u64) -> Self {
        Clause {
            m,
            label: format!("{prefix}:({number})"),
        }
    }
}

/// Clauses that fired, or the reason the theorem does not apply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scope {
    In(Vec<Clause>),
    Out(String),
}

impl Scope {
    pub fn verdict(&self, m: u64) -> Verdict {
        match self {
            Scope::Out(reason) => Verdict::OutOfTheoremScope {
                reason: reason.clone(),
            },
            Scope::In(clauses) => clauses
                .iter()
                .find(|c| c.m == m)
                .map(|c| Verdict::MTo1 {
                    m,
                    clause: c.label.clone(),
                })
                .unwrap_or(Verdict::NotMTo1ForAskedM),
        }
    }
}
