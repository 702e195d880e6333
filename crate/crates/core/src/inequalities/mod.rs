//! CHSH, extended CHSH and perfect-correlation Bell functionals, the
//! pointwise coefficient bound, and CHSH maximisation.

mod functionals;
mod maximize;

pub use functionals::{
    bell_check, bell_check_random, check_pointwise_bound, chsh_value, extended_chsh_value,
    BellCheck, BellLine, BellSweep, ChshReport, ExtendedChshCoefficients, PointwiseBound, Settings,
    SettingsFile, COEFFICIENT_TOL, VIOLATION_TOL,
};
pub use maximize::{
    chsh_max_seesaw, chsh_max_two_qubit, correlation_matrix, seesaw_from, seesaw_restart,
    ChshMaxReport, ChshMaximizer, ChshMaximum, MaximizerRegistry, SeeSaw, SeeSawRun,
    TwoQubitClosedForm,
};
