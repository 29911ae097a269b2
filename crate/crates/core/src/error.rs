use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    /// The user's rate is zero (or not finite), so no PRB count satisfies the
    /// minimum traffic requirement.
    #[error("user cannot be served: achievable rate {rate} is not positive")]
    Unserveable { rate: f64 },

    #[error("instance too large for exhaustive search: {users} users x {sbs} SBSs (limit {max_users} x {max_sbs})")]
    InstanceTooLarge {
        users: usize,
        sbs: usize,
        max_users: usize,
        max_sbs: usize,
    },

    #[error("need at least {needed} samples, got {got}")]
    NotEnoughSamples { needed: usize, got: usize },

    #[error("sample set contains a NaN")]
    NanSample,

    #[error("no users or no SBSs after {resamples} resampling attempts")]
    EmptyNetwork { resamples: u32 },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }
}
