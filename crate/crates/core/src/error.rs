use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("alphabet mismatch: {left:?} vs {right:?}")]
    AlphabetMismatch { left: Vec<String>, right: Vec<String> },

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("duplicate state `{0}`")]
    DuplicateState(String),

    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("duplicate transition ({from}, {label}, {to})")]
    DuplicateTransition { from: String, label: String, to: String },

    #[error("transition ({from}, {label}, {to}) has weight -inf")]
    BottomTransition { from: String, label: String, to: String },

    #[error("all coordinates are -inf")]
    AllBottom,

    #[error("piece `{0}` occupies no slot")]
    EmptyPiece(String),

    #[error("invalid weight `{0}`")]
    InvalidWeight(String),

    #[error("malformed document at {location}: {message}")]
    Document { location: String, message: String },

    #[error("automaton is infinitely ambiguous: states {p} and {q} with word `{word}`")]
    InfinitelyAmbiguous { p: String, q: String, word: String },

    #[error("family member {index} is ambiguous: word `{word}` has {paths} successful paths")]
    AmbiguousMember { index: usize, word: String, paths: u128 },

    #[error("family members 0 and {index} differ in support on word `{word}`")]
    SupportMismatch { index: usize, word: String },

    #[error("empty family")]
    EmptyFamily,

    #[error("family has no finite transition or final weight")]
    NoFiniteWeight,

    #[error("dominance property fails along the path labelled `{word}`")]
    DominanceViolated { word: String },

    #[error("no victorious coordinate is finite when entering `{state}`")]
    NoVictoriousCoordinate { state: String },

    #[error("{what} exceeded the cap of {cap}")]
    CapExceeded { what: String, cap: usize },

    #[error("determinization diverged (twin property violated?): more than {cap} states")]
    DeterminizationDiverged { cap: usize },

    #[error("too many family members: {0} (at most 64 supported)")]
    TooManyMembers(usize),

    #[error("verification failed: {0}")]
    Verification(String),
}

impl Error {
    /// True for resource-cap overflows, as opposed to violated preconditions.
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. } | Error::DeterminizationDiverged { .. })
    }
}
