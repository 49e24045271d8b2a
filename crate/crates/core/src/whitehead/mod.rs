//! Certificates, the partial-projective-plane criterion and the final
//! non-commutativity conclusion.

mod certificate;
mod projective;

pub use certificate::{
    conclude_noncommutative, Certificate, CertificateError, Conclusion, Criterion, Refusal, Status, Transcript,
    TranscriptEntry, Verdict, Witness,
};
pub use projective::{
    check_partial_projective_criterion, check_sq_linearity, is_two_power_minus_one, validate_sq_action,
    ActionDataError, ExteriorActionData, GeneratingMapWitness, SqViolation,
};
