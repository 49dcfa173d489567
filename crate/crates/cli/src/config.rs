//! Experiment configuration: a JSON file, command-line overrides, and the
//! validated plan built from both.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use emergent_irq::carriers::{AlgebraSpec, GradedLieAlgebra};
use emergent_irq::emergent::LimitConfig;
use serde::{Deserialize, Serialize};

pub const SEED_ENV: &str = "EMERGENT_IRQ_SEED";

pub const DEFAULT_SAMPLES: usize = 100;
pub const DEFAULT_RADIUS: f64 = 2.0;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_EPSILON: f64 = 0.5;
pub const DEFAULT_ETA: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CarrierKind {
    Euclidean,
    Heisenberg,
    Engel,
    Carnot,
    Dihedral,
    Hyperbolic,
    Sineshear,
}

impl CarrierKind {
    pub fn name(self) -> &'static str {
        match self {
            CarrierKind::Euclidean => "euclidean",
            CarrierKind::Heisenberg => "heisenberg",
            CarrierKind::Engel => "engel",
            CarrierKind::Carnot => "carnot",
            CarrierKind::Dihedral => "dihedral",
            CarrierKind::Hyperbolic => "hyperbolic",
            CarrierKind::Sineshear => "sineshear",
        }
    }

    /// Parameters the carrier accepts, for `list-carriers`.
    pub fn parameters(self) -> &'static str {
        match self {
            CarrierKind::Euclidean => "dim (default 1), epsilon (default 0.5)",
            CarrierKind::Heisenberg | CarrierKind::Engel | CarrierKind::Hyperbolic => {
                "epsilon (default 0.5)"
            }
            CarrierKind::Carnot => "algebra (required), epsilon (default 0.5)",
            CarrierKind::Dihedral => "n (default 5)",
            CarrierKind::Sineshear => "epsilon (default 0.5), eta (default 0.25)",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Axioms,
    Converge,
    Reconstruct,
    Symmetric,
    Derivative,
    Divide,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Axioms => "axioms",
            Experiment::Converge => "converge",
            Experiment::Reconstruct => "reconstruct",
            Experiment::Symmetric => "symmetric",
            Experiment::Derivative => "derivative",
            Experiment::Divide => "divide",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            Experiment::Axioms => "P1, P2, 3.3, 3.4a-g and 3.5h-k at levels -2,-1,1,2,3",
            Experiment::Converge => "emergent sum, difference and inverse limits with rates",
            Experiment::Reconstruct => "distributivity 6.1, then the reconstructed group 6.1(i)-(iii), 6.2",
            Experiment::Symmetric => "Loos axioms L1-L4, T-map involution 6.5, hyperbolic extras",
            Experiment::Derivative => "convergence of Tf and the morphism property of Tf(x, .)",
            Experiment::Divide => "right division residuals, loop laws and the k = 30 loop limit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MetricChoice {
    Coordinate,
    Homogeneous,
}

/// Map differentiated by the `derivative` experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MapChoice {
    Identity,
    /// `δ` of a group carrier.
    Dilation,
    /// `u ↦ b * u` with `b` the base point.
    Star,
}

/// The config file as written. Every field is optional here so that
/// overrides can fill gaps; [`ExperimentConfig::resolve`] enforces the rest.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub carrier: Option<CarrierKind>,
    pub epsilon: Option<f64>,
    pub dim: Option<usize>,
    pub n: Option<u64>,
    pub eta: Option<f64>,
    pub algebra: Option<AlgebraSpec>,
    pub metric: Option<MetricChoice>,
    pub experiment: Option<Experiment>,
    pub map: Option<MapChoice>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub radius: Option<f64>,
    pub tol: Option<f64>,
    pub max_k: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Command-line values that replace config fields when present.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub carrier: Option<CarrierKind>,
    pub experiment: Option<Experiment>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub samples: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CarrierSpec {
    Euclidean { dim: usize, epsilon: f64 },
    Heisenberg { epsilon: f64 },
    Engel { epsilon: f64 },
    Carnot { algebra: GradedLieAlgebra, epsilon: f64 },
    Dihedral { n: u64 },
    Hyperbolic { epsilon: f64 },
    SineShear { epsilon: f64, eta: f64 },
}

impl CarrierSpec {
    pub fn kind(&self) -> CarrierKind {
        match self {
            CarrierSpec::Euclidean { .. } => CarrierKind::Euclidean,
            CarrierSpec::Heisenberg { .. } => CarrierKind::Heisenberg,
            CarrierSpec::Engel { .. } => CarrierKind::Engel,
            CarrierSpec::Carnot { .. } => CarrierKind::Carnot,
            CarrierSpec::Dihedral { .. } => CarrierKind::Dihedral,
            CarrierSpec::Hyperbolic { .. } => CarrierKind::Hyperbolic,
            CarrierSpec::SineShear { .. } => CarrierKind::Sineshear,
        }
    }

    /// Value of the `carrier` report column.
    pub fn label(&self) -> String {
        match self {
            CarrierSpec::Euclidean { dim, epsilon } => format!("euclidean:dim={dim}:eps={epsilon}"),
            CarrierSpec::Heisenberg { epsilon } => format!("heisenberg:eps={epsilon}"),
            CarrierSpec::Engel { epsilon } => format!("engel:eps={epsilon}"),
            CarrierSpec::Carnot { algebra, epsilon } => {
                let dims: Vec<String> = algebra.layer_dims().iter().map(|d| d.to_string()).collect();
                format!("carnot:layers={}:eps={epsilon}", dims.join("+"))
            }
            CarrierSpec::Dihedral { n } => format!("dihedral:n={n}"),
            CarrierSpec::Hyperbolic { epsilon } => format!("hyperbolic:eps={epsilon}"),
            CarrierSpec::SineShear { epsilon, eta } => format!("sineshear:eps={epsilon}:eta={eta}"),
        }
    }

    pub fn is_group(&self) -> bool {
        !matches!(self, CarrierSpec::Dihedral { .. } | CarrierSpec::Hyperbolic { .. })
    }
}

/// A validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub carrier: CarrierSpec,
    pub experiment: Experiment,
    pub metric: MetricChoice,
    pub map: MapChoice,
    pub seed: u64,
    pub samples: usize,
    pub radius: f64,
    pub tol: f64,
    pub limit: LimitConfig,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("invalid experiment config")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn apply(&mut self, o: &Overrides) {
        macro_rules! take {
            ($($f:ident),*) => { $( if o.$f.is_some() { self.$f = o.$f.clone(); } )* };
        }
        take!(carrier, experiment, seed, tol, samples, out, format);
    }

    /// Validate and fill defaults. `env_seed` is the value of
    /// [`SEED_ENV`], used when no seed is configured.
    pub fn resolve(&self, env_seed: Option<&str>) -> Result<Plan> {
        let Some(kind) = self.carrier else {
            bail!("no carrier given (set \"carrier\" in the config or pass --carrier)");
        };
        let Some(experiment) = self.experiment else {
            bail!("no experiment given (set \"experiment\" in the config or pass --experiment)");
        };
        let carrier = self.carrier_spec(kind)?;
        let seed = match (self.seed, env_seed) {
            (Some(s), _) => s,
            (None, Some(s)) => s
                .trim()
                .parse()
                .with_context(|| format!("{SEED_ENV}={s:?} is not an unsigned integer"))?,
            (None, None) => 0,
        };
        let samples = self.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples == 0 {
            bail!("samples must be at least 1");
        }
        let tol = self.tol.unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0 && tol.is_finite()) {
            bail!("tol must be a positive finite number, got {tol}");
        }
        let radius = self.radius.unwrap_or(DEFAULT_RADIUS);
        if !(radius > 0.0 && radius.is_finite()) {
            bail!("radius must be a positive finite number, got {radius}");
        }
        let defaults = LimitConfig::default();
        let limit = LimitConfig::new(defaults.tol, self.max_k.unwrap_or(defaults.max_k), defaults.cauchy_window)?;
        if self.metric == Some(MetricChoice::Homogeneous) && !carrier.is_group() {
            bail!("metric \"homogeneous\" needs a group carrier, not {}", kind.name());
        }
        let metric = self.metric.unwrap_or(if experiment == Experiment::Axioms && carrier.is_group() {
            MetricChoice::Homogeneous
        } else {
            MetricChoice::Coordinate
        });
        let map = match (self.map, experiment) {
            (Some(_), e) if e != Experiment::Derivative => {
                bail!("\"map\" only applies to the derivative experiment")
            }
            (Some(MapChoice::Dilation), _) if !carrier.is_group() => {
                bail!("map \"dilation\" needs a group carrier, not {}", kind.name())
            }
            (Some(m), _) => m,
            (None, _) if carrier.is_group() => MapChoice::Dilation,
            (None, _) => MapChoice::Identity,
        };
        let format = match (self.format, &self.out) {
            (Some(f), _) => f,
            (None, Some(p)) if p.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) => Format::Json,
            _ => Format::Csv,
        };
        Ok(Plan {
            carrier,
            experiment,
            metric,
            map,
            seed,
            samples,
            radius,
            tol,
            limit,
            out: self.out.clone(),
            format,
        })
    }

    fn carrier_spec(&self, kind: CarrierKind) -> Result<CarrierSpec> {
        let allowed: &[&str] = match kind {
            CarrierKind::Euclidean => &["dim", "epsilon"],
            CarrierKind::Heisenberg | CarrierKind::Engel | CarrierKind::Hyperbolic => &["epsilon"],
            CarrierKind::Carnot => &["algebra", "epsilon"],
            CarrierKind::Dihedral => &["n"],
            CarrierKind::Sineshear => &["epsilon", "eta"],
        };
        let given = [
            ("epsilon", self.epsilon.is_some()),
            ("dim", self.dim.is_some()),
            ("n", self.n.is_some()),
            ("eta", self.eta.is_some()),
            ("algebra", self.algebra.is_some()),
        ];
        for (name, present) in given {
            if present && !allowed.contains(&name) {
                bail!("parameter \"{name}\" does not apply to carrier {}", kind.name());
            }
        }
        let epsilon = self.epsilon.unwrap_or(DEFAULT_EPSILON);
        if allowed.contains(&"epsilon") && !(epsilon > 0.0 && epsilon < 1.0) {
            bail!("epsilon must lie in (0, 1), got {epsilon}");
        }
        Ok(match kind {
            CarrierKind::Euclidean => {
                let dim = self.dim.unwrap_or(1);
                if dim == 0 {
                    bail!("dim must be at least 1");
                }
                CarrierSpec::Euclidean { dim, epsilon }
            }
            CarrierKind::Heisenberg => CarrierSpec::Heisenberg { epsilon },
            CarrierKind::Engel => CarrierSpec::Engel { epsilon },
            CarrierKind::Carnot => {
                let Some(spec) = self.algebra.clone() else {
                    bail!("carrier carnot needs an \"algebra\" object with \"layers\" and \"brackets\"");
                };
                let algebra = GradedLieAlgebra::new(spec).context("invalid algebra")?;
                CarrierSpec::Carnot { algebra, epsilon }
            }
            CarrierKind::Dihedral => {
                let n = self.n.unwrap_or(5);
                if n < 3 {
                    bail!("dihedral quandle needs n >= 3, got {n}");
                }
                CarrierSpec::Dihedral { n }
            }
            CarrierKind::Hyperbolic => CarrierSpec::Hyperbolic { epsilon },
            CarrierKind::Sineshear => {
                let eta = self.eta.unwrap_or(DEFAULT_ETA);
                emergent_irq::carriers::SineShear::new(epsilon, eta).context("invalid sineshear parameters")?;
                CarrierSpec::SineShear { epsilon, eta }
            }
        })
    }
}
