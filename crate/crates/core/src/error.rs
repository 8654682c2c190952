use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unknown channel `{0}`")]
    UnknownChannel(String),
    #[error("duplicate channel `{0}`")]
    DuplicateChannel(String),
    #[error("invalid montage: {0}")]
    InvalidMontage(String),
    #[error("condition `{label}` is not valid for experiment {experiment}")]
    InvalidCondition { experiment: u8, label: String },
    #[error("invalid recording: {0}")]
    InvalidRecording(String),
    #[error("event `{trial_id}` at sample {sample_index} is outside [0, {n_samples})")]
    EventOutOfRange {
        trial_id: String,
        sample_index: i64,
        n_samples: usize,
    },
    #[error("duplicate trial id `{0}`")]
    DuplicateTrial(String),
    #[error("invalid trial log `{trial_id}`: {reason}")]
    InvalidTrialLog { trial_id: String, reason: String },

    #[error("invalid filter spec: {0}")]
    InvalidSpec(String),
    #[error("only {good} good channels remain, need at least {required}")]
    TooFewGoodChannels { good: usize, required: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("channel covariance is rank deficient (eigenvalue {eigenvalue:e})")]
    RankDeficient { eigenvalue: f64 },
    #[error("index {index} out of range for {len} components")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("epoch window for trial `{trial_id}` does not fit inside the recording")]
    WindowOutOfRange { trial_id: String },
    #[error("epoch `{0}` is already baseline corrected")]
    AlreadyCorrected(String),
    #[error("stage `{stage}` cannot run after `{after}`")]
    StageOutOfOrder {
        stage: &'static str,
        after: &'static str,
    },

    #[error("expected count is zero in row {row}, column {col}")]
    ZeroExpectedCount { row: usize, col: usize },
    #[error("table has zero degrees of freedom")]
    ZeroDegreesOfFreedom,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("differences have zero variance")]
    ZeroVariance,
    #[error("need at least {required} samples, got {got}")]
    TooFewSamples { required: usize, got: usize },
    #[error("condition `{0}` is not in the requested condition list")]
    UnknownCondition(String),

    #[error("no epochs match the requested condition and electrode")]
    NoMatchingEpochs,
    #[error("epoch `{0}` is not baseline corrected")]
    NotBaselineCorrected(String),
    #[error("window {start_ms}..={end_ms} ms lies outside the epoch")]
    WindowOutOfBounds { start_ms: i32, end_ms: i32 },
    #[error("participant `{0}` lacks data for one of the contrasted conditions")]
    MissingParticipantData(String),

    #[error("participant `{participant}` has {available} `{condition}` trials, needs {required}")]
    InsufficientTrials {
        participant: String,
        condition: String,
        available: usize,
        required: usize,
    },
    #[error("training data needs at least two instances of each class")]
    DegenerateLabels,

    #[error("invalid synthesis config: {0}")]
    InvalidConfig(String),
}
