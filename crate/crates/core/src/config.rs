//! Numerical tolerances, collected in one place.

/// Tolerances used across the crate. [`Tolerances::default`] holds the
/// values the library is validated against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Eigenvalues closer than this are treated as repeated.
    pub eigen_repeat: f64,
    /// Relative amount by which a repeated eigenvalue's magnitude is shrunk.
    pub eigen_perturbation: f64,
    /// Relative bound on `‖P J P⁻¹ − M‖∞` accepted from the Jordan solver.
    pub jordan_reconstruction: f64,
    /// QR sweeps allowed per matrix dimension.
    pub qr_sweeps_per_dim: usize,
    /// Feasibility tolerance of the simplex solver.
    pub lp_feasibility: f64,
    /// Smallest pivot magnitude the simplex solver accepts.
    pub lp_pivot: f64,
    /// Column-sum and stationarity slack for transition matrices.
    pub stochastic: f64,
    /// Probability entries below this magnitude are clamped to zero.
    pub clamp: f64,
    /// Simplex membership slack for distributions.
    pub simplex: f64,
    /// Negativity slack when deciding whether shifted ball vertices stay feasible.
    pub vertex_feasibility: f64,
    /// Oscillatory terms with amplitude below this are dropped.
    pub amplitude_floor: f64,
    /// Relative gap below which two dominant magnitudes are considered tied.
    pub dominance_gap: f64,
    /// Largest denominator tried when rationalising an angle in degrees.
    pub rational_denominator_cap: u64,
    /// Accuracy required of a rational angle approximation (degrees).
    pub rational_accuracy: f64,
    /// Upper bound on the number of time steps any cutoff scan may visit.
    pub max_scan: u64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eigen_repeat: 1e-9,
            eigen_perturbation: 1e-7,
            jordan_reconstruction: 1e-6,
            qr_sweeps_per_dim: 100,
            lp_feasibility: 1e-7,
            lp_pivot: 1e-11,
            stochastic: 1e-9,
            clamp: 1e-12,
            simplex: 1e-9,
            vertex_feasibility: 1e-12,
            amplitude_floor: 1e-14,
            dominance_gap: 1e-12,
            rational_denominator_cap: 1_000_000,
            rational_accuracy: 1e-9,
            max_scan: 50_000_000,
        }
    }
}
