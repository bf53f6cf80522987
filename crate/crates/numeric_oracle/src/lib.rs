//! Brute-force propagation of the lab-frame dressed-ion Hamiltonian, simulated
//! spectroscopy and Floquet analysis, used to validate the analytic model.

mod dop853;
mod error;
mod floquet;
mod hamiltonian;
mod lab;
mod propagate;
mod protocol;
mod scan;
mod tableau;
mod two_ion;

pub use dop853::{Dop853, Dop853Options, IntegrationStats};
pub use error::OracleError;
pub use floquet::{
    exact_period, floquet_quasienergies, fold_quasi_energy, monodromy,
    offresonant_shift_from_floquet, rationalize, resonant_shift_from_floquet, FloquetSpectrum,
    ManifoldDrive, Rationalized, RfField, DEFAULT_MAX_DENOMINATOR,
};
pub use hamiltonian::{DrivenHamiltonian, FrameFactors, SparseTerm, Tone};
pub use lab::{dressed_state, DrivenManifold, LabSystem, LaserTone, Perturbations};
pub use propagate::{
    check_tolerance, propagate, propagate_at, propagate_hamiltonian, Trajectory, MAX_TOLERANCE,
    MIN_TOLERANCE,
};
pub use protocol::{
    check_line, comb_mode, initial_label, random_config_pair, shifted_configs, well_isolated_lines,
    LineCheck, LineCheckOptions, LineChoice, RandomConfigRequest, CA_G_D, CA_G_S,
};
pub use scan::{
    count_peaks, fit_line_shape, fit_rabi_flop, flop_model, line_shape, simulate_line_scan,
    simulate_rabi_flop, FitValue, ScanAxis, ScanOptions, ScanResult, ScanWindow,
};
pub use two_ion::{simulate_two_ion_gate, TwoIonParams, TwoIonResult};
