use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    Rational,
    Steenrod,
    PartialProjectivePlane,
    RecordedExternal,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::Rational => "rational",
            Criterion::Steenrod => "steenrod",
            Criterion::PartialProjectivePlane => "partial-projective-plane",
            Criterion::RecordedExternal => "recorded-external",
        })
    }
}

/// Whether a transcript entry was computed here or taken from a citation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    MachineVerified,
    Asserted,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::MachineVerified => "machine-verified",
            Status::Asserted => "asserted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranscriptEntry {
    pub check: String,
    pub outcome: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub citation: Option<String>,
}

/// Append-only list of checked preconditions.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Transcript {
    entries: Vec<TranscriptEntry>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn verified(&mut self, check: impl Into<String>, outcome: impl Into<String>) {
        self.entries.push(TranscriptEntry {
            check: check.into(),
            outcome: outcome.into(),
            status: Status::MachineVerified,
            citation: None,
        });
    }

    /// Records a cited fact. Panics on an empty citation: every asserted
    /// entry must say where it comes from.
    pub fn asserted(&mut self, check: impl Into<String>, outcome: impl Into<String>, citation: impl Into<String>) {
        let citation = citation.into();
        assert!(!citation.trim().is_empty(), "asserted transcript entries need a citation");
        self.entries.push(TranscriptEntry {
            check: check.into(),
            outcome: outcome.into(),
            status: Status::Asserted,
            citation: Some(citation),
        });
    }

    pub(crate) fn from_entries(entries: Vec<TranscriptEntry>) -> Self {
        Transcript { entries }
    }

    pub fn extend(&mut self, other: &Transcript) {
        self.entries.extend(other.entries.iter().cloned());
    }

    pub fn entries(&self) -> &[TranscriptEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// `[alpha, beta] != 0` in `pi_{m+n-1}(X) (x) Q`.
    Rational {
        m: u32,
        n: u32,
        target_degree: u32,
        pair: [String; 2],
        relation: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        transferred_from: Option<String>,
    },
    Steenrod {
        a: String,
        b: String,
        x: String,
        operation: String,
        prime: u32,
        alpha_source: String,
        beta_source: String,
    },
    PartialProjectivePlane {
        generating_map_source: String,
        min_degree: u32,
    },
    Recorded {
        statement: String,
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Rational { m, n, target_degree, pair, transferred_from, .. } => {
                write!(
                    f,
                    "[a,b] != 0 in pi_{target_degree} (x) Q, |a| = {m}, |b| = {n}, quadratic term {}*{}",
                    pair[0], pair[1]
                )?;
                if let Some(src) = transferred_from {
                    write!(f, ", transferred from {src}")?;
                }
                Ok(())
            }
            Witness::Steenrod { a, b, x, operation, prime, alpha_source, beta_source } => {
                write!(f, "{operation}({x}) contains {a}*{b} mod {prime}, alpha: {alpha_source}, beta: {beta_source}")
            }
            Witness::PartialProjectivePlane { generating_map_source, min_degree } => write!(
                f,
                "[g,g] != 0 for generating map from {generating_map_source}, min generator degree {min_degree}"
            ),
            Witness::Recorded { statement } => f.write_str(statement),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("certificate for {0} has no machine-verified transcript entry")]
    NothingVerified(String),
    #[error("a refusal cannot be turned into a conclusion: {0}")]
    Refused(String),
}

/// A non-trivial Whitehead product in `space`, with the transcript of
/// every precondition that was checked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    space: String,
    criterion: Criterion,
    witness: Witness,
    transcript: Transcript,
}

impl Certificate {
    pub fn new(
        space: impl Into<String>,
        criterion: Criterion,
        witness: Witness,
        transcript: Transcript,
    ) -> Result<Self, CertificateError> {
        let space = space.into();
        if criterion != Criterion::RecordedExternal
            && !transcript.entries().iter().any(|e| e.status == Status::MachineVerified)
        {
            return Err(CertificateError::NothingVerified(space));
        }
        Ok(Certificate { space, criterion, witness, transcript })
    }

    pub fn space(&self) -> &str {
        &self.space
    }

    pub fn criterion(&self) -> Criterion {
        self.criterion
    }

    pub fn witness(&self) -> &Witness {
        &self.witness
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    /// Returns a copy carrying `space` and extra trailing entries; existing
    /// entries are kept as they are.
    pub fn extended(&self, space: impl Into<String>, extra: &Transcript) -> Certificate {
        let mut transcript = self.transcript.clone();
        transcript.extend(extra);
        Certificate { space: space.into(), criterion: self.criterion, witness: self.witness.clone(), transcript }
    }
}

/// A criterion did not apply. Not evidence of homotopy commutativity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Refusal {
    pub space: String,
    pub criterion: Criterion,
    pub failed_hypothesis: String,
    pub transcript: Transcript,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exception: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Certified(Certificate),
    Refused(Refusal),
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::Certified(c) => Some(c),
            Verdict::Refused(_) => None,
        }
    }

    pub fn refusal(&self) -> Option<&Refusal> {
        match self {
            Verdict::Certified(_) => None,
            Verdict::Refused(r) => Some(r),
        }
    }

    pub fn conclude(&self) -> Result<Conclusion, CertificateError> {
        match self {
            Verdict::Certified(c) => Ok(conclude_noncommutative(c)),
            Verdict::Refused(r) => Err(CertificateError::Refused(r.failed_hypothesis.clone())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conclusion {
    pub space: String,
    pub statement: String,
    pub criterion: Criterion,
    pub witness: Witness,
    pub transcript: Transcript,
}

/// A non-trivial Whitehead product adjoins to a non-trivial Samelson
/// product in the loop space, so the loop space is not homotopy
/// commutative.
pub fn conclude_noncommutative(c: &Certificate) -> Conclusion {
    let mut transcript = c.transcript.clone();
    transcript.verified(
        "Whitehead product adjoint",
        format!("non-trivial Whitehead product in {} gives a non-trivial Samelson product in its loop space", c.space),
    );
    Conclusion {
        space: c.space.clone(),
        statement: format!("Ω({}) is not homotopy commutative", c.space),
        criterion: c.criterion,
        witness: c.witness.clone(),
        transcript,
    }
}

fn write_transcript(f: &mut fmt::Formatter<'_>, t: &Transcript) -> fmt::Result {
    writeln!(f, "transcript:")?;
    for e in t.entries() {
        write!(f, "  - [{}] {}: {}", e.status, e.check, e.outcome)?;
        if let Some(c) = &e.citation {
            write!(f, " (cite: {c})")?;
        }
        writeln!(f)?;
    }
    Ok(())
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "space: {}", self.space)?;
        writeln!(f, "criterion: {}", self.criterion)?;
        writeln!(f, "witness: {}", self.witness)?;
        write_transcript(f, &self.transcript)
    }
}

impl fmt::Display for Refusal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "space: {}", self.space)?;
        writeln!(f, "criterion: {}", self.criterion)?;
        writeln!(f, "result: no conclusion from this criterion")?;
        writeln!(f, "failed: {}", self.failed_hypothesis)?;
        if let Some(e) = &self.exception {
            writeln!(f, "exception: {e}")?;
        }
        write_transcript(f, &self.transcript)
    }
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "space: {}", self.space)?;
        writeln!(f, "criterion: {}", self.criterion)?;
        writeln!(f, "witness: {}", self.witness)?;
        writeln!(f, "conclusion: {}", self.statement)?;
        write_transcript(f, &self.transcript)
    }
}
