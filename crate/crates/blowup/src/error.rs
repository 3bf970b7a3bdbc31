use thiserror::Error;

/// Every failure the library can report.
///
/// Variants split into two families: bad input (`is_validation`) and
/// numerical breakdown. The CLI maps them to exit codes 2 and 3.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("field is identically zero")]
    ZeroField,
    #[error("degree zero: {0}")]
    DegreeZero(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("curve is not closed (endpoint gap {gap:.3e})")]
    NotClosed { gap: f64 },
    #[error("curve sampled too coarsely for winding extraction (residual {residual:.3e})")]
    TooCoarse { residual: f64 },
    #[error("section tangency at base parameter {at:.6}")]
    SectionTangency { at: f64 },
    #[error("adaptive step underflow at s = {at:.6}")]
    StepUnderflow { at: f64 },
    #[error("state diverged at s = {at:.6}")]
    Diverged { at: f64 },

    #[error("degenerate system: {0}")]
    DegenerateSystem(String),

    #[error("no invariant fiber line at the equilibrium")]
    NoInvariantFiber,
    #[error("approach did not reach the singularity ball")]
    ApproachIncomplete,
    #[error("lifted loop entered the singularity ball")]
    LoopHitsSingularity,
    #[error("detour report is not closed")]
    ReportNotClosed,
    #[error("winding law violated: w_t = {w_t}, (m-1) w_u = {expected}")]
    WindingLaw { w_t: i64, expected: i64 },

    #[error("resonance at order {order}: alpha = ({a1}, {a2}), component {iota}")]
    ResonantAtOrder { order: u32, a1: u32, a2: u32, iota: usize },
    #[error("equilibrium is not semisimple")]
    NotSemisimple,

    #[error("leading coefficient G0 vanishes")]
    DegenerateLeadingTerm,

    #[error("unknown catalog entry '{0}'")]
    UnknownName(String),
    #[error("missing parameter '{0}'")]
    MissingParameter(String),
    #[error("excluded parameter: {0}")]
    ExcludedParameter(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
}

impl Error {
    /// True for errors caused by the caller's input rather than by numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::ZeroField
                | Error::DegreeZero(_)
                | Error::Parse(_)
                | Error::Invalid(_)
                | Error::UnknownName(_)
                | Error::MissingParameter(_)
                | Error::ExcludedParameter(_)
                | Error::OutOfRange(_)
                | Error::NoInvariantFiber
                | Error::NotSemisimple
                | Error::DegenerateLeadingTerm
        )
    }

    /// Short machine-readable tag used in JSON error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroField => "ZeroField",
            Error::DegreeZero(_) => "DegreeZero",
            Error::Parse(_) => "ParseError",
            Error::Invalid(_) => "Invalid",
            Error::NotClosed { .. } => "NotClosed",
            Error::TooCoarse { .. } => "TooCoarse",
            Error::SectionTangency { .. } => "SectionTangency",
            Error::StepUnderflow { .. } => "StepUnderflow",
            Error::Diverged { .. } => "Diverged",
            Error::DegenerateSystem(_) => "DegenerateSystem",
            Error::NoInvariantFiber => "NoInvariantFiber",
            Error::ApproachIncomplete => "ApproachIncomplete",
            Error::LoopHitsSingularity => "LoopHitsSingularity",
            Error::ReportNotClosed => "NotClosed",
            Error::WindingLaw { .. } => "WindingLaw",
            Error::ResonantAtOrder { .. } => "ResonantAtOrder",
            Error::NotSemisimple => "NotSemisimple",
            Error::DegenerateLeadingTerm => "DegenerateLeadingTerm",
            Error::UnknownName(_) => "UnknownName",
            Error::MissingParameter(_) => "MissingParameter",
            Error::ExcludedParameter(_) => "ExcludedParameter",
            Error::OutOfRange(_) => "OutOfRange",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
