//! Dense simulation of noisy circuits with two interchangeable backends:
//! exact density-matrix evolution and Monte-Carlo Kraus trajectories.

mod engine;
mod kraus;
mod rng;
mod state;

pub use engine::{
    evolve_density, evolve_density_with, measurement_distribution, run_trajectories,
    run_trajectories_with, sample_shot, simulate, simulate_ideal, Backend, CellOutcome,
    ShotOutcome, SimOptions,
};
pub use kraus::{KrausChannel, COMPLETENESS_TOL};
pub use rng::{derive_seed, ShotRng};
pub use state::{bitstring, MixedState, PureState, STATE_TOL, UNITARY_TOL};
