/// All truncation knobs in one place: coset bound for direct sums,
/// Kloosterman modulus bound, Fourier-mode bound, q-series order, the
/// group-ball radius, finite-difference steps and the accuracy target that
/// convergence flags are judged against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    /// Direct coset sums keep `|c*tau + d|^2 <= coset_bound`.
    pub coset_bound: f64,
    /// Kloosterman sums run over moduli `c <= c_max`.
    pub c_max: u32,
    /// Fourier expansions keep modes `|n| <= mode_max`.
    pub mode_max: u32,
    /// q-series are truncated at this order at the latest.
    pub q_order: u32,
    /// Default ball radius (in the point-pair invariant u) for group sums.
    pub u_max: f64,
    /// Step for finite differences in the spectral parameter s.
    pub fd_step_s: f64,
    /// Step for finite differences in half-plane coordinates.
    pub fd_step_z: f64,
    /// Accuracy target that `SeriesResult::converged` is measured against.
    pub target: f64,
}

impl TruncationPolicy {
    /// Preset: (c_max, mode_max, u_max, q_order) = (2e3, 40, 1e3, 200).
    pub fn fast() -> Self {
        TruncationPolicy {
            coset_bound: 1.0e4,
            c_max: 2_000,
            mode_max: 40,
            q_order: 200,
            u_max: 1.0e3,
            fd_step_s: 1.0e-3,
            fd_step_z: 1.0e-5,
            target: 1.0e-5,
        }
    }

    /// Preset: (c_max, mode_max, u_max, q_order) = (1e4, 80, 1e4, 400).
    pub fn default_policy() -> Self {
        TruncationPolicy {
            coset_bound: 1.0e5,
            c_max: 10_000,
            mode_max: 80,
            q_order: 400,
            u_max: 1.0e4,
            fd_step_s: 1.0e-3,
            fd_step_z: 1.0e-5,
            target: 1.0e-7,
        }
    }

    /// Preset: (c_max, mode_max, u_max, q_order) = (5e4, 120, 1e5, 800).
    pub fn strict() -> Self {
        TruncationPolicy {
            coset_bound: 1.0e6,
            c_max: 50_000,
            mode_max: 120,
            q_order: 800,
            u_max: 1.0e5,
            fd_step_s: 1.0e-3,
            fd_step_z: 1.0e-5,
            target: 1.0e-9,
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "fast" => Some(Self::fast()),
            "default" => Some(Self::default_policy()),
            "strict" => Some(Self::strict()),
            _ => None,
        }
    }

    pub fn with_coset_bound(mut self, b: f64) -> Self {
        self.coset_bound = b;
        self
    }

    pub fn with_c_max(mut self, c: u32) -> Self {
        self.c_max = c;
        self
    }

    pub fn with_u_max(mut self, u: f64) -> Self {
        self.u_max = u;
        self
    }

    pub fn with_target(mut self, t: f64) -> Self {
        self.target = t;
        self
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self::default_policy()
    }
}
