use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("{what} = {value} is outside the domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// The constraint set of an optimization is empty.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// Tabulation did not meet the overlap-consistency tolerance.
    #[error("sieve table refinement failure: overlap residual {residual:e} exceeds {tolerance:e}")]
    Refinement { residual: f64, tolerance: f64 },

    #[error("limit {limit} exceeds the enumeration cap {cap}")]
    CapExceeded { limit: u64, cap: u64 },

    #[error("quadrature failed to reach tolerance {tolerance:e} (achieved {achieved:e} after {evaluations} evaluations)")]
    Quadrature {
        tolerance: f64,
        achieved: f64,
        evaluations: usize,
    },

    #[error("empty search grid: {0}")]
    EmptyGrid(String),

    #[error("no grid point with a positive objective{}", best_note(.best))]
    NoPositivePoint { best: Option<(Vec<f64>, f64)> },

    #[error("acceleration failure: successive values differ by {achieved:e} (requested {requested:e})")]
    Acceleration { achieved: f64, requested: f64 },

    #[error("table cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn best_note(best: &Option<(Vec<f64>, f64)>) -> String {
    match best {
        Some((point, value)) => format!(" (best value {value:.6e} at {point:?})"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            what,
            value,
            domain,
        }
    }

    /// True for errors caused by caller-supplied arguments rather than by computation.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::Domain { .. } | Error::CapExceeded { .. } | Error::EmptyGrid(_)
        )
    }
}
