//! Classical and quantum models of template-directed chain assembly.
//!
//! * [`model`]: alphabets, chain tasks, timing and the `a / ln a` optimum.
//! * [`classical`]: expected times, rates and Monte Carlo of trial-and-error assembly.
//! * [`grover`]: exact amplitude simulation of quantum search and the
//!   quantum time, rate and decoherence-threshold laws.
//! * [`discrimination`]: synthetic rate experiments and the classical-vs-quantum
//!   model selection with parametric bootstrap.
//! * [`isotope`]: isotope-tag tracking for chemical-group exchange.
//!
//! All simulations are deterministic in their seed; see [`rng`].

pub mod classical;
pub mod discrimination;
pub mod error;
pub mod grover;
pub mod isotope;
pub mod model;
pub mod rng;

pub use classical::{
    classical_rate, expected_classical_time, rate_ratio_table, simulate_classical, RateModel, RateParams,
    RatePrediction, RateRatio, SimResult,
};
pub use discrimination::{
    discriminate, fit_rate_model, generate_experiment, imperfect_regime_classifier, power_curve,
    ExperimentDesign, PowerConfig, PowerPoint, RateCurve, RateLaw, RateSample, Regime, RegimeReport,
    RenormalizationTable, ScaleFit, Verdict,
};
pub use error::{Error, Result};
pub use grover::{
    beats_best_classical, coherence_threshold, grover_angle, grover_search, iterations_required,
    quantum_assembly_time, quantum_rate, simulate_imperfect_quantum, success_probability_closed_form,
    GroverState, ImperfectQuantumConfig, QuantumMode,
};
pub use isotope::{
    run_tagged_assembly, separation_fraction, Destinations, ExchangeConfig, ExchangePartner, TagReport,
    TaggedBase,
};
pub use model::{
    classical_coefficient, ln_information, make_alphabet, optimal_alphabet_integer, optimal_alphabet_real,
    AlphabetSpec, ChainTask, TimingParams,
};
pub use rng::RNG_ALGORITHM;
