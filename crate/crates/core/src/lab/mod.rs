//! Experiment registry and runner behind the `halab` binary.

pub mod config;
mod experiments;
pub mod main_scan;
pub mod report;

pub use config::ExperimentConfig;
pub use experiments::linear_fit;
pub use report::{write_outputs, Assertion, Report};

use crate::error::{Error, Result};

type Runner = fn(&ExperimentConfig) -> Result<Report>;

pub struct Experiment {
    pub name: &'static str,
    pub description: &'static str,
    run: Runner,
}

pub const EXPERIMENTS: &[Experiment] = &[
    Experiment {
        name: "dft-oracle",
        description: "inversion, Parseval and fast-vs-direct transform agreement",
        run: experiments::dft_oracle,
    },
    Experiment {
        name: "tk-oracle",
        description: "spectral T_k against exhaustive tuple counting",
        run: experiments::tk_oracle,
    },
    Experiment {
        name: "dim-bound",
        description: "exact additive dimension against C·K²(1+log(|S|/K²))",
        run: experiments::dim_bound,
    },
    Experiment {
        name: "rudin-calibration",
        description: "T_k of dissociated sets against (Ck)^k|Λ|^k",
        run: experiments::rudin_calibration,
    },
    Experiment {
        name: "tkest-inequality",
        description: "T_k(χ_Q) lower bound in terms of ‖χ_S‖_A",
        run: experiments::tkest_inequality,
    },
    Experiment {
        name: "complement-identity",
        description: "Wiener norm of a set against its complement",
        run: experiments::complement_identity,
    },
    Experiment {
        name: "bohr-measure",
        description: "Bohr set measure, symmetry, nesting and β̂",
        run: experiments::bohr_measure,
    },
    Experiment {
        name: "sanders-diagnostics",
        description: "smoothing diagnostics and the parameter calculators",
        run: experiments::sanders_diagnostics,
    },
    Experiment {
        name: "translate-expectation",
        description: "Wiener norm of random translate sums",
        run: experiments::translate_expectation,
    },
    Experiment {
        name: "dirichlet",
        description: "simultaneous Diophantine approximation",
        run: experiments::dirichlet,
    },
    Experiment {
        name: "charsmall",
        description: "dimension, Dirichlet, rescale and L¹ comparison chain",
        run: experiments::charsmall,
    },
    Experiment {
        name: "littlewood-growth",
        description: "L¹ norm of the Dirichlet kernel against log m",
        run: experiments::littlewood_growth,
    },
    Experiment {
        name: "kahane-growth",
        description: "growth of ‖e^{inφ}‖_A for piecewise linear φ",
        run: experiments::kahane_growth,
    },
    Experiment {
        name: "main-scan",
        description: "tuple count, maximal phase family and Dirichlet step at toy scale",
        run: main_scan::main_scan,
    },
    Experiment {
        name: "lebedev-extract",
        description: "hypothesis and both sides of the extraction estimate",
        run: main_scan::lebedev_extract,
    },
];

pub fn find(name: &str) -> Option<&'static Experiment> {
    EXPERIMENTS.iter().find(|e| e.name == name)
}

/// Runs `cfg.experiment`; errors mean the run could not be carried out,
/// failed checks are recorded in the report.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    let exp = find(&cfg.experiment).ok_or_else(|| Error::UnknownExperiment(cfg.experiment.clone()))?;
    (exp.run)(cfg)
}
