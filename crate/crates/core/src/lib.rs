//! Standard and adaptive-bias QAOA for MaxCut on regular graphs.
//!
//! The crate is a dense statevector simulator plus the classical machinery
//! around it:
//!
//! - [`maxcut`]: instance generation, cost diagonal, exact solver, isomorphism classes
//! - [`statevector`]: state preparation, cost/mixer layers, expectations, sampling
//! - [`schedule`]: Fourier amplitudes to per-layer angles
//! - [`optimizer`]: the fixed-level inner loop (gradients, Adam, bias feedback)
//! - [`protocol`]: level-by-level sweep with restarts and perturbative seeding
//! - [`metrics`]: accuracy, fits, `p*`, speedup, gate counts, landscapes
//! - [`io`]: file formats shared with the command line tool
//!
//! Bit `j` of a basis index is qubit `j`; bit value 0 is spin +1.

pub mod error;
pub mod io;
pub mod maxcut;
pub mod metrics;
pub mod optimizer;
pub mod protocol;
pub mod schedule;
pub mod seeding;
pub mod statevector;

pub use error::{Error, Result};
pub use maxcut::{
    build_cost_diagonal, collect_nonisomorphic_u3r, generate_regular_graph, solve_exact, CostDiagonal, Edge,
    ExactSolution, GraphInstance,
};
pub use optimizer::{inner_loop, InnerLoopResult, OptimizerConfig, VariationalPoint};
pub use protocol::{run_sweep, LevelRecord, Mode, ProtocolConfig};
pub use schedule::{to_schedule, FourierPoint, Schedule};
pub use statevector::{evolve, initial_state, BiasField, StateVector};
