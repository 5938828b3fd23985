use crate::geometry::Vec2;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(&'static str),

    /// The small-parameter assumptions behind the closed-form placement root fail.
    #[error("geometry out of regime: a = {a:.6e}, discriminant = {discriminant:.6e}")]
    OutOfRegime { a: f64, discriminant: f64 },

    #[error("UAV {index}: {source}")]
    Uav {
        index: usize,
        #[source]
        source: alloc::boxed::Box<Error>,
    },

    #[error("no convergence after {iterations} iterations (best {best:?})")]
    Convergence { best: Vec2, iterations: usize },

    #[error("no feasible partition with at most {l_max} sub-arrays")]
    PartitionInfeasible { l_max: usize },

    #[error("UAV {index} is unreachable (zero beamforming gain)")]
    Unreachable { index: usize },

    #[error("sensitivity undefined: amplification clamp is engaged")]
    SensitivityUndefined,

    #[error("internal invariant violated: {0}")]
    Invariant(&'static str),
}

impl Error {
    pub(crate) fn at_uav(self, index: usize) -> Self {
        Error::Uav {
            index,
            source: alloc::boxed::Box::new(self),
        }
    }
}
