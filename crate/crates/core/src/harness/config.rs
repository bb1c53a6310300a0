use crate::aklt::StringForm;
use crate::cluster::{ClusterMode, EdgeDressing};
use crate::error::{Result, SimError};
use crate::mps::{Ancilla, PrepMode};
use crate::register::NoiseSpec;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Experiment {
    AkltPrepare,
    AkltEnergy,
    RabiEdge,
    RabiBulk,
    LocalOrder,
    Correlations,
    StringOrder,
    ClusterVerify,
    ClusterTable1,
    ClusterBell,
    ClusterRabi,
    Tomography,
}

impl Experiment {
    pub const ALL: [Experiment; 12] = [
        Experiment::AkltPrepare,
        Experiment::AkltEnergy,
        Experiment::RabiEdge,
        Experiment::RabiBulk,
        Experiment::LocalOrder,
        Experiment::Correlations,
        Experiment::StringOrder,
        Experiment::ClusterVerify,
        Experiment::ClusterTable1,
        Experiment::ClusterBell,
        Experiment::ClusterRabi,
        Experiment::Tomography,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::AkltPrepare => "aklt-prepare",
            Experiment::AkltEnergy => "aklt-energy",
            Experiment::RabiEdge => "rabi-edge",
            Experiment::RabiBulk => "rabi-bulk",
            Experiment::LocalOrder => "local-order",
            Experiment::Correlations => "correlations",
            Experiment::StringOrder => "string-order",
            Experiment::ClusterVerify => "cluster-verify",
            Experiment::ClusterTable1 => "cluster-table1",
            Experiment::ClusterBell => "cluster-bell",
            Experiment::ClusterRabi => "cluster-rabi",
            Experiment::Tomography => "tomography",
        }
    }

    pub fn is_cluster(self) -> bool {
        matches!(self, Experiment::ClusterVerify | Experiment::ClusterTable1 | Experiment::ClusterBell | Experiment::ClusterRabi)
    }

    /// Inclusive chain-length bounds.
    pub fn n_bounds(self) -> (usize, usize) {
        match self {
            Experiment::StringOrder => (3, 8),
            Experiment::Tomography => (2, 4),
            e if e.is_cluster() => (4, 10),
            _ => (2, 8),
        }
    }
}

impl FromStr for Experiment {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| SimError::Config(format!("unknown experiment '{s}'")))
    }
}

/// Ancilla outcome handling for AKLT preparation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutcomeChoice {
    Postselect(Ancilla),
    Sample,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub n: usize,
    pub shots: usize,
    pub seed: Option<u64>,
    pub noise: NoiseSpec,
    pub theta_start: f64,
    pub theta_stop: f64,
    pub theta_points: usize,
    pub prep: PrepMode,
    pub ancilla_init: Ancilla,
    pub ancilla_outcome: OutcomeChoice,
    pub cluster_mode: ClusterMode,
    pub dressing: EdgeDressing,
    pub string_form: StringForm,
    pub trajectories: usize,
}

pub const DEFAULT_THETA_STOP: f64 = 4.0 * std::f64::consts::PI;

impl ExperimentConfig {
    pub fn new(experiment: Experiment, n: usize) -> Self {
        Self {
            experiment,
            n,
            shots: 0,
            seed: None,
            noise: NoiseSpec::NONE,
            theta_start: 0.0,
            theta_stop: DEFAULT_THETA_STOP,
            theta_points: 21,
            prep: PrepMode::ExactUnitary,
            ancilla_init: Ancilla::Up,
            ancilla_outcome: OutcomeChoice::Postselect(Ancilla::Up),
            cluster_mode: ClusterMode::CzLadder,
            dressing: EdgeDressing::PLUS,
            string_form: StringForm::Sum,
            trajectories: 1000,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_shots(mut self, shots: usize) -> Self {
        self.shots = shots;
        self
    }

    pub fn with_noise(mut self, noise: NoiseSpec) -> Self {
        self.noise = noise;
        self
    }

    pub fn needs_seed(&self) -> bool {
        self.shots > 0 || !self.noise.is_noiseless() || self.ancilla_outcome == OutcomeChoice::Sample
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.experiment.n_bounds();
        if self.n < lo || self.n > hi {
            return Err(SimError::Config(format!("{}: n = {} outside [{lo}, {hi}]", self.experiment.name(), self.n)));
        }
        if self.experiment.is_cluster() && self.n % 2 == 1 {
            return Err(SimError::Config("cluster experiments need even n".into()));
        }
        if self.needs_seed() && self.seed.is_none() {
            return Err(SimError::Config("seed is required when shots > 0, noise is on, or the outcome is sampled".into()));
        }
        self.noise.validate().map_err(|e| SimError::Config(e.to_string()))?;
        if self.theta_points == 0 || !self.theta_start.is_finite() || !self.theta_stop.is_finite() {
            return Err(SimError::Config("theta grid needs finite bounds and at least one point".into()));
        }
        if self.experiment == Experiment::Tomography && !self.noise.is_noiseless() {
            return Err(SimError::Config("tomography runs on the noise-free state".into()));
        }
        if !self.noise.is_noiseless() && self.trajectories == 0 {
            return Err(SimError::Config("trajectories must be positive with noise on".into()));
        }
        Ok(())
    }

    pub fn thetas(&self) -> Vec<f64> {
        crate::fit::linspace(self.theta_start, self.theta_stop, self.theta_points)
    }

    /// Canonical flat `key = value` text, fixed key order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("experiment", self.experiment.name().into());
        kv("n", self.n.to_string());
        kv("shots", self.shots.to_string());
        kv("seed", self.seed.map_or("none".into(), |v| v.to_string()));
        kv("p_two_site", format!("{:?}", self.noise.p_two_site));
        kv("p_one_site", format!("{:?}", self.noise.p_one_site));
        kv("theta_start", format!("{:?}", self.theta_start));
        kv("theta_stop", format!("{:?}", self.theta_stop));
        kv("theta_points", self.theta_points.to_string());
        kv("prep", self.prep.label().into());
        kv("ancilla_init", self.ancilla_init.label().into());
        kv(
            "ancilla_outcome",
            match self.ancilla_outcome {
                OutcomeChoice::Postselect(a) => a.label().into(),
                OutcomeChoice::Sample => "sample".into(),
            },
        );
        kv(
            "cluster_mode",
            match self.cluster_mode {
                ClusterMode::CzLadder => "cz-ladder".into(),
                ClusterMode::MsGlobal => "ms-global".into(),
            },
        );
        kv("dressing", format!("{},{}", sign(self.dressing.left), sign(self.dressing.right)));
        kv(
            "string_form",
            match self.string_form {
                StringForm::Sum => "sum".into(),
                StringForm::Product => "product".into(),
            },
        );
        kv("trajectories", self.trajectories.to_string());
        s
    }

    /// SHA-256 of the canonical text.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_text().as_bytes());
        digest.iter().fold(String::with_capacity(64), |mut acc, b| {
            let _ = write!(acc, "{b:02x}");
            acc
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut experiment = None;
        let mut n = None;
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| SimError::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "experiment" => experiment = Some(v.parse::<Experiment>()?),
                "n" => n = Some(num::<usize>(k, v)?),
                _ => pairs.push((k.to_string(), v.to_string())),
            }
        }
        let experiment = experiment.ok_or_else(|| SimError::Config("missing key 'experiment'".into()))?;
        let n = n.ok_or_else(|| SimError::Config("missing key 'n'".into()))?;
        let mut cfg = ExperimentConfig::new(experiment, n);
        for (k, v) in pairs {
            let v = v.as_str();
            match k.as_str() {
                "shots" => cfg.shots = num(&k, v)?,
                "seed" => cfg.seed = if v == "none" { None } else { Some(num(&k, v)?) },
                "p_two_site" => cfg.noise.p_two_site = num(&k, v)?,
                "p_one_site" => cfg.noise.p_one_site = num(&k, v)?,
                "theta_start" => cfg.theta_start = num(&k, v)?,
                "theta_stop" => cfg.theta_stop = num(&k, v)?,
                "theta_points" => cfg.theta_points = num(&k, v)?,
                "prep" => cfg.prep = PrepMode::parse(v).ok_or_else(|| bad(&k, v))?,
                "ancilla_init" => cfg.ancilla_init = Ancilla::parse(v).ok_or_else(|| bad(&k, v))?,
                "ancilla_outcome" => {
                    cfg.ancilla_outcome = if v == "sample" {
                        OutcomeChoice::Sample
                    } else {
                        OutcomeChoice::Postselect(Ancilla::parse(v).ok_or_else(|| bad(&k, v))?)
                    }
                }
                "cluster_mode" => cfg.cluster_mode = ClusterMode::parse(v).ok_or_else(|| bad(&k, v))?,
                "dressing" => {
                    let (l, r) = v.split_once(',').ok_or_else(|| bad(&k, v))?;
                    cfg.dressing = EdgeDressing::new(parse_sign(l.trim()).ok_or_else(|| bad(&k, v))?, parse_sign(r.trim()).ok_or_else(|| bad(&k, v))?)
                        .map_err(|_| bad(&k, v))?;
                }
                "string_form" => {
                    cfg.string_form = match v {
                        "sum" => StringForm::Sum,
                        "product" => StringForm::Product,
                        _ => return Err(bad(&k, v)),
                    }
                }
                "trajectories" => cfg.trajectories = num(&k, v)?,
                other => return Err(SimError::Config(format!("unknown key '{other}'"))),
            }
        }
        Ok(cfg)
    }
}

fn sign(s: i8) -> &'static str {
    if s > 0 {
        "+"
    } else {
        "-"
    }
}

fn parse_sign(s: &str) -> Option<i8> {
    match s {
        "+" | "+1" | "1" => Some(1),
        "-" | "-1" => Some(-1),
        _ => None,
    }
}

fn bad(k: &str, v: &str) -> SimError {
    SimError::Config(format!("invalid value '{v}' for key '{k}'"))
}

fn num<T: FromStr>(k: &str, v: &str) -> Result<T> {
    v.parse::<T>().map_err(|_| bad(k, v))
}
