use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("cannot load root datum {path}: {reason}")]
    DatumLoad { path: String, reason: String },
    #[error("cannot load module {path}: {reason}")]
    ModuleLoad { path: String, reason: String },
    #[error("{context}: {source}")]
    Core {
        context: &'static str,
        #[source]
        source: dirac_pairings::Error,
    },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 1 when a mathematical identity failed, 2 for anything the caller got wrong.
    pub fn exit_code(&self) -> u8 {
        use dirac_pairings::Error as E;
        match self {
            CliError::Core {
                source:
                    E::IdentityFailed(_)
                    | E::CliffordRelationFailed(..)
                    | E::NotAComplex(_)
                    | E::SemisimplicityFails
                    | E::HypothesisSTnotZero(_),
                ..
            } => 1,
            _ => 2,
        }
    }
}

pub trait Context<T> {
    fn context(self, context: &'static str) -> Result<T, CliError>;
}

impl<T> Context<T> for dirac_pairings::Result<T> {
    fn context(self, context: &'static str) -> Result<T, CliError> {
        self.map_err(|source| CliError::Core { context, source })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let core = |source| CliError::Core { context: "x", source };
        assert_eq!(core(dirac_pairings::Error::IdentityFailed("d² ≠ 0".into())).exit_code(), 1);
        assert_eq!(core(dirac_pairings::Error::NotAComplex(0)).exit_code(), 1);
        assert_eq!(core(dirac_pairings::Error::InvalidParameter("n".into())).exit_code(), 2);
        assert_eq!(CliError::Usage("bad".into()).exit_code(), 2);
    }
}
