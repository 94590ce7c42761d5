//! Scenario configuration: one JSON document per scenario, describing the
//! grid, time window, potential, data family and the estimate to check.
//! Validation reports every violation, not just the first.

use kglab::{check_admissible, Grid};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[allow(non_camel_case_types)]
pub enum EstimateId {
    /// Homogeneous weighted space-time bound for the free flow:
    /// ‖e^{itω}f‖_{L²(|V|)} ≲ ‖V‖^{1/2} ‖f‖_{H^{1/2}}
    WL2_HOMO,
    /// Weighted bound for the perturbed solution:
    /// ‖u‖_{L²(|V|)} ≲ ‖V‖^{1/2}(‖f‖_{H^{1/2}} + ‖g‖_{H^{-1/2}})
    WL2_THM,
    /// Local smoothing of the free flow:
    /// sup (1/R)∫∫ ||∇|^{1/2}e^{itω}f|² ≲ ‖f‖²_{H^{1/2}}
    LS_FREE,
    /// Local smoothing of the perturbed solution
    LS_THM,
    /// Mixed-norm bound ‖u‖_{L^q H^σ_r} ≲ (1+‖V‖)(‖f‖ + ‖g‖)
    STRICHARTZ,
    /// Uniform weighted resolvent bounds over a z-grid
    RESOLVENT,
    /// Ball-mass trace bound for sphere extensions
    TRACE,
    /// Weighted restriction bound for sphere extensions
    RESTRICTION,
    /// Space-time multiplier decomposition consistency
    DECOMP,
    /// Contraction of the Duhamel source operator under Picard iteration
    CONTRACTION,
}

impl EstimateId {
    pub fn description(&self) -> &'static str {
        match self {
            EstimateId::WL2_HOMO => {
                "homogeneous weighted bound: |e^{it<D>}f|_{L2_xt(|V|)} <= C |V|_Fp^{1/2} |f|_{H^{1/2}}"
            }
            EstimateId::WL2_THM => {
                "perturbed weighted bound: |u|_{L2_xt(|V|)} <= C |V|_Fp^{1/2} (|f|_{H^{1/2}} + |g|_{H^{-1/2}})"
            }
            EstimateId::LS_FREE => {
                "free local smoothing: sup_{x0,R} (1/R) int ||D|^{1/2} e^{it<D>} f|^2 <= C |f|_{H^{1/2}}^2"
            }
            EstimateId::LS_THM => {
                "perturbed local smoothing: sup_{x0,R} (1/R) int ||D|^{1/2} u|^2 <= C (|f|^2_{H^{1/2}} + |g|^2_{H^{-1/2}})"
            }
            EstimateId::STRICHARTZ => {
                "mixed-norm bound: |u|_{L^q_t H^sigma_r} <= C (1 + |V|_Fp)(|f|_{H^{1/2}} + |g|_{H^{-1/2}})"
            }
            EstimateId::RESOLVENT => {
                "uniform resolvent bounds: |R(z)f|_{L2(|V|)} <= C |V|_Fp |f|_{L2(|V|^{-1})}, constants independent of z"
            }
            EstimateId::TRACE => {
                "trace bound: int_{|x|<R} |(d dsigma_r)^|^2 dx <= C R int |d|^2 dsigma"
            }
            EstimateId::RESTRICTION => {
                "weighted restriction: |(d dsigma_r)^|_{L2(|V|)} <= C r^{1/2} |V|_Fp^{1/2} |d|_{L2(dsigma)}"
            }
            EstimateId::DECOMP => {
                "multiplier decomposition: u-tilde + R reproduces the Duhamel solution of the forced equation"
            }
            EstimateId::CONTRACTION => {
                "Duhamel source operator contracts; its ratio scales linearly in the coupling"
            }
        }
    }

    /// Needs a potential section.
    pub fn needs_potential(&self) -> bool {
        !matches!(self, EstimateId::TRACE | EstimateId::DECOMP)
    }

    /// Needs a time window.
    pub fn needs_time(&self) -> bool {
        !matches!(
            self,
            EstimateId::RESOLVENT | EstimateId::TRACE | EstimateId::RESTRICTION
        )
    }

    /// Needs a data family.
    pub fn needs_data(&self) -> bool {
        !matches!(self, EstimateId::TRACE | EstimateId::RESTRICTION)
    }

    /// Runs the Picard solver.
    pub fn needs_solver(&self) -> bool {
        matches!(
            self,
            EstimateId::WL2_THM
                | EstimateId::LS_THM
                | EstimateId::STRICHARTZ
                | EstimateId::CONTRACTION
        )
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridSpec {
    pub dim: usize,
    pub half_length: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TimeSpec {
    pub t_end: f64,
    pub dt: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PotentialSpec {
    InverseSquare {
        coupling: f64,
        core_radius: f64,
        p: f64,
    },
    DAnconaLog {
        coupling: f64,
        tail_exponent: f64,
        log_exponent: f64,
        p: f64,
    },
    GaussianBump {
        coupling: f64,
        width: f64,
        p: f64,
    },
}

impl PotentialSpec {
    pub fn fp_exponent(&self) -> f64 {
        match *self {
            PotentialSpec::InverseSquare { p, .. } => p,
            PotentialSpec::DAnconaLog { p, .. } => p,
            PotentialSpec::GaussianBump { p, .. } => p,
        }
    }

    pub fn coupling(&self) -> f64 {
        match *self {
            PotentialSpec::InverseSquare { coupling, .. } => coupling,
            PotentialSpec::DAnconaLog { coupling, .. } => coupling,
            PotentialSpec::GaussianBump { coupling, .. } => coupling,
        }
    }

    pub fn with_coupling(&self, coupling: f64) -> Self {
        let mut out = *self;
        match &mut out {
            PotentialSpec::InverseSquare { coupling: c, .. } => *c = coupling,
            PotentialSpec::DAnconaLog { coupling: c, .. } => *c = coupling,
            PotentialSpec::GaussianBump { coupling: c, .. } => *c = coupling,
        }
        out
    }

    pub fn family(&self) -> kglab::PotentialFamily {
        match *self {
            PotentialSpec::InverseSquare {
                coupling,
                core_radius,
                ..
            } => kglab::PotentialFamily::InverseSquare {
                coupling,
                core_radius,
            },
            PotentialSpec::DAnconaLog {
                coupling,
                tail_exponent,
                log_exponent,
                ..
            } => kglab::PotentialFamily::DAnconaLog {
                coupling,
                tail_exponent,
                log_exponent,
            },
            PotentialSpec::GaussianBump {
                coupling, width, ..
            } => kglab::PotentialFamily::GaussianBump { coupling, width },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DataSpec {
    /// One sample per packet; Cauchy velocity is `i⟨∇⟩f` (an outgoing
    /// packet) where the estimate needs one.
    GaussianPackets { packets: Vec<PacketSpec> },
    /// `count` independent band-limited fields, seeds `seed, seed+1, ...`;
    /// velocity data (when needed) drawn from seeds offset by 10_000.
    RandomBandlimited { count: usize, band: f64 },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PacketSpec {
    #[serde(default)]
    pub center: [f64; 3],
    pub width: f64,
    #[serde(default)]
    pub carrier: [f64; 3],
    #[serde(default = "one")]
    pub amplitude: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanSpec {
    #[serde(default = "default_stride")]
    pub center_stride: usize,
    /// Defaults to the dyadic family `{2dx, 4dx, ...}` up to `L`.
    #[serde(default)]
    pub radii: Option<Vec<f64>>,
}

fn default_stride() -> usize {
    4
}

impl Default for ScanSpec {
    fn default() -> Self {
        Self {
            center_stride: default_stride(),
            radii: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TripleSpec {
    pub q: f64,
    pub r: f64,
    #[serde(default)]
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SolverSpec {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
}

fn default_tol() -> f64 {
    1e-8
}

fn default_max_iter() -> usize {
    60
}

impl Default for SolverSpec {
    fn default() -> Self {
        Self {
            tol: default_tol(),
            max_iter: default_max_iter(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResolventSpec {
    #[serde(default = "default_re_values")]
    pub re_values: Vec<f64>,
    #[serde(default = "default_im_values")]
    pub im_values: Vec<f64>,
}

fn default_re_values() -> Vec<f64> {
    vec![-5.0, 2.5, 10.0, 17.5, 25.0]
}

fn default_im_values() -> Vec<f64> {
    vec![0.1, 0.316, 1.0, 3.16, 10.0]
}

impl Default for ResolventSpec {
    fn default() -> Self {
        Self {
            re_values: default_re_values(),
            im_values: default_im_values(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SphereSpec {
    #[serde(default = "default_sphere_radii")]
    pub sphere_radii: Vec<f64>,
    /// Ball radii for the trace scan; defaults to dyadic `[1/2, 8]`.
    #[serde(default = "default_ball_radii")]
    pub ball_radii: Vec<f64>,
}

fn default_sphere_radii() -> Vec<f64> {
    vec![1.0, 2.0, 4.0]
}

fn default_ball_radii() -> Vec<f64> {
    vec![0.5, 1.0, 2.0, 4.0, 8.0]
}

impl Default for SphereSpec {
    fn default() -> Self {
        Self {
            sphere_radii: default_sphere_radii(),
            ball_radii: default_ball_radii(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DecompSpec {
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_pads")]
    pub pad_factors: [usize; 2],
}

fn default_epsilon() -> f64 {
    1e-3
}

fn default_pads() -> [usize; 2] {
    [4, 8]
}

impl Default for DecompSpec {
    fn default() -> Self {
        Self {
            epsilon: default_epsilon(),
            pad_factors: default_pads(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub estimate: EstimateId,
    pub grid: GridSpec,
    #[serde(default)]
    pub time: Option<TimeSpec>,
    #[serde(default)]
    pub potential: Option<PotentialSpec>,
    #[serde(default)]
    pub data: Option<DataSpec>,
    #[serde(default)]
    pub triple: Option<TripleSpec>,
    #[serde(default)]
    pub scan: ScanSpec,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub resolvent: ResolventSpec,
    #[serde(default)]
    pub sphere: SphereSpec,
    #[serde(default)]
    pub decomp: DecompSpec,
    /// Largest acceptable sample ratio; the report fails above it.
    pub ratio_cap: f64,
    pub seed: u64,
    #[serde(default = "default_budget")]
    pub budget_sec: u64,
}

fn default_budget() -> u64 {
    120
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    /// Collect every violation; an empty list means the config is valid.
    pub fn validate(&self) -> Vec<String> {
        let mut errs = Vec::new();

        let grid = match Grid::new(self.grid.dim, self.grid.half_length, self.grid.points) {
            Ok(g) => Some(g),
            Err(e) => {
                errs.push(format!("grid: {e}"));
                None
            }
        };

        if self.estimate.needs_time() {
            match self.time {
                None => errs.push(format!("{:?} requires a time section", self.estimate)),
                Some(t) => {
                    if !(t.dt > 0.0 && t.dt.is_finite()) {
                        errs.push(format!("time: dt must be positive, got {}", t.dt));
                    }
                    if !(t.t_end > 0.0 && t.t_end.is_finite()) {
                        errs.push(format!("time: t_end must be positive, got {}", t.t_end));
                    }
                    if t.dt > 0.0 && t.t_end > 0.0 {
                        let steps = (t.t_end / t.dt).round();
                        if steps < 1.0 || ((steps * t.dt - t.t_end) / t.t_end).abs() > 1e-9 {
                            errs.push(format!(
                                "time: dt = {} does not divide t_end = {}",
                                t.dt, t.t_end
                            ));
                        }
                    }
                }
            }
        }

        if self.estimate.needs_potential() {
            match &self.potential {
                None => errs.push(format!("{:?} requires a potential section", self.estimate)),
                Some(p) => {
                    if let Some(g) = &grid {
                        let max_p = g.dim() as f64 / 2.0;
                        let exp = p.fp_exponent();
                        if !(exp >= 1.0 && exp <= max_p) {
                            errs.push(format!(
                                "potential: exponent p = {exp} outside [1, n/2] = [1, {max_p}]"
                            ));
                        }
                        if let PotentialSpec::InverseSquare { core_radius, .. } = p {
                            if *core_radius < 0.5 * g.dx() {
                                errs.push(format!(
                                    "potential: core radius {core_radius} below half a lattice spacing {}",
                                    0.5 * g.dx()
                                ));
                            }
                        }
                    }
                    match p {
                        PotentialSpec::DAnconaLog {
                            tail_exponent,
                            log_exponent,
                            ..
                        } => {
                            if *tail_exponent <= 0.0 {
                                errs.push("potential: tail_exponent must be positive".into());
                            }
                            if *log_exponent <= 0.0 {
                                errs.push("potential: log_exponent must be positive".into());
                            }
                        }
                        PotentialSpec::GaussianBump { width, .. } => {
                            if *width <= 0.0 {
                                errs.push("potential: width must be positive".into());
                            }
                        }
                        PotentialSpec::InverseSquare { .. } => {}
                    }
                }
            }
        }

        if self.estimate.needs_data() {
            match &self.data {
                None => errs.push(format!("{:?} requires a data section", self.estimate)),
                Some(DataSpec::GaussianPackets { packets }) => {
                    if packets.is_empty() {
                        errs.push("data: at least one packet required".into());
                    }
                    for (i, pk) in packets.iter().enumerate() {
                        if pk.width <= 0.0 {
                            errs.push(format!("data: packet {i} width must be positive"));
                        }
                        if let Some(g) = &grid {
                            let carrier_mag = (pk.carrier[0].powi(2)
                                + pk.carrier[1].powi(2)
                                + pk.carrier[2].powi(2))
                            .sqrt();
                            if carrier_mag > g.max_frequency() {
                                errs.push(format!(
                                    "data: packet {i} carrier magnitude {carrier_mag:.3} exceeds the lattice band {:.3}",
                                    g.max_frequency()
                                ));
                            }
                        }
                    }
                    // the box must dominate data support plus the horizon
                    // (unit group speed)
                    if let (Some(g), Some(t)) = (&grid, &self.time) {
                        let support = packets
                            .iter()
                            .map(|pk| {
                                let c = (pk.center[0].powi(2)
                                    + pk.center[1].powi(2)
                                    + pk.center[2].powi(2))
                                .sqrt();
                                c + 3.0 * pk.width
                            })
                            .fold(0.0, f64::max);
                        let needed = support + t.t_end + 1.0;
                        if g.half_length() < needed {
                            errs.push(format!(
                                "grid: half-length {} below data support + horizon + 1 = {needed:.2}",
                                g.half_length()
                            ));
                        }
                    }
                }
                Some(DataSpec::RandomBandlimited { count, band }) => {
                    if *count == 0 {
                        errs.push("data: sample count must be at least 1".into());
                    }
                    if *band <= 0.0 {
                        errs.push("data: band must be positive".into());
                    } else if let Some(g) = &grid {
                        if *band > g.max_frequency() {
                            errs.push(format!(
                                "data: band {band} exceeds the lattice band {:.3}",
                                g.max_frequency()
                            ));
                        }
                    }
                }
            }
        }

        if self.estimate == EstimateId::STRICHARTZ {
            match self.triple {
                None => errs.push("STRICHARTZ requires a triple section".into()),
                Some(t) => {
                    if let Err(e) = check_admissible(t.q, t.r, t.theta, self.grid.dim) {
                        errs.push(format!("triple: {e}"));
                    }
                }
            }
        }

        if self.scan.center_stride == 0 {
            errs.push("scan: center_stride must be at least 1".into());
        }
        if let (Some(radii), Some(g)) = (&self.scan.radii, &grid) {
            if radii.is_empty() {
                errs.push("scan: radii, when given, must be non-empty".into());
            }
            for &r in radii {
                if r < 2.0 * g.dx() * (1.0 - 1e-12) || r > g.half_length() * (1.0 + 1e-12) {
                    errs.push(format!(
                        "scan: radius {r} outside the resolvable range [2dx, L] = [{}, {}]",
                        2.0 * g.dx(),
                        g.half_length()
                    ));
                }
            }
        }

        if self.estimate.needs_solver() {
            if !(self.solver.tol > 0.0) {
                errs.push(format!(
                    "solver: tol must be positive, got {}",
                    self.solver.tol
                ));
            }
            if self.solver.max_iter == 0 {
                errs.push("solver: max_iter must be at least 1".into());
            }
        }

        if self.estimate == EstimateId::DECOMP {
            if !(self.decomp.epsilon > 0.0) {
                errs.push(format!(
                    "decomp: epsilon must be positive, got {}",
                    self.decomp.epsilon
                ));
            }
            if self.decomp.pad_factors[0] < 2 || self.decomp.pad_factors[1] < 2 {
                errs.push("decomp: pad factors must be at least 2".into());
            }
        }

        if matches!(self.estimate, EstimateId::TRACE | EstimateId::RESTRICTION) {
            if self.sphere.sphere_radii.is_empty() {
                errs.push("sphere: at least one sphere radius required".into());
            }
            if self.estimate == EstimateId::TRACE && self.sphere.ball_radii.is_empty() {
                errs.push("sphere: at least one ball radius required".into());
            }
        }

        if !(self.ratio_cap > 0.0 && self.ratio_cap.is_finite()) {
            errs.push(format!(
                "ratio_cap must be positive and finite, got {}",
                self.ratio_cap
            ));
        }
        if self.budget_sec == 0 {
            errs.push("budget_sec must be positive".into());
        }

        errs
    }
}
