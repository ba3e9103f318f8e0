use ec2part::Error;
use std::process::ExitCode;

/// How a run ended. Ordered by severity so results can be folded with `max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Verified,
    /// Some hypothesis failed and the instance was skipped.
    Skipped,
    /// An input or runtime error unrelated to the mathematics.
    Failed,
    /// A conclusion that should hold did not.
    Alarming,
}

impl Outcome {
    pub fn of_error(e: &Error) -> Outcome {
        match e {
            Error::Falsified(_) | Error::Normalization(_) | Error::PeriodBridge { .. } => Outcome::Alarming,
            Error::Precondition(_) => Outcome::Skipped,
            _ => Outcome::Failed,
        }
    }

    pub fn code(self) -> ExitCode {
        ExitCode::from(match self {
            Outcome::Verified => 0,
            Outcome::Failed => 1,
            Outcome::Skipped => 2,
            Outcome::Alarming => 3,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn severity() {
        assert_eq!(Outcome::of_error(&Error::Falsified("x".into())), Outcome::Alarming);
        assert_eq!(Outcome::of_error(&Error::Precondition("x".into())), Outcome::Skipped);
        assert_eq!(Outcome::of_error(&Error::Singular), Outcome::Failed);
        assert_eq!(Outcome::Skipped.max(Outcome::Alarming), Outcome::Alarming);
        assert_eq!(Outcome::Verified.max(Outcome::Skipped), Outcome::Skipped);
    }
}
