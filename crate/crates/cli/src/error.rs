use homforge::deform::DeformError;
use homforge::harness::HarnessError;
use homforge::search::SearchError;
use homforge::HomError;
use serde_json::json;

/// An error reported as `{"error": {"kind", "message"}}` on stderr.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
    broken_pipe: bool,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            kind: "input",
            message: message.into(),
            broken_pipe: false,
        }
    }

    pub fn violated(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            kind: "violated",
            message: message.into(),
            broken_pipe: false,
        }
    }

    pub fn is_broken_pipe(&self) -> bool {
        self.broken_pipe
    }

    pub fn to_json(&self) -> String {
        json!({"error": {"kind": self.kind, "message": self.message}}).to_string()
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        let mut err = Self::input(e.to_string());
        err.kind = "io";
        err.broken_pipe = e.kind() == std::io::ErrorKind::BrokenPipe;
        err
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::input(e.to_string())
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        Self::input(e.to_string())
    }
}

impl From<HomError> for CliError {
    fn from(e: HomError) -> Self {
        match e {
            HomError::NotHomAssociative(..)
            | HomError::NotAssociative(..)
            | HomError::IncompatibleTwisting(..) => Self::violated(e.to_string()),
            _ => Self::input(e.to_string()),
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Search(e) => e.into(),
            HarnessError::Hom(e) => e.into(),
            other => Self::input(other.to_string()),
        }
    }
}

impl From<DeformError> for CliError {
    fn from(e: DeformError) -> Self {
        use DeformError::*;
        match e {
            NotPrime(_)
            | Shape(_)
            | DimensionTooLarge(_)
            | EntryOutOfRange { .. }
            | OrderMismatch(..)
            | BaseMismatch(_)
            | LeadingNotIdentity
            | SearchTooLarge(_) => Self::input(e.to_string()),
            _ => Self::violated(e.to_string()),
        }
    }
}
