//! Flat TOML configuration. Every key is optional; missing keys keep the
//! library defaults listed in `tolreg --help`.

use serde::Deserialize;
use tolreg_core::regularize::RegularizeConfig;

pub const KEYS_HELP: &str = "\
Config file keys (flat TOML, all optional):
  dilation = 3.0            space dilation coefficient of the r-algorithm
  initial_step = 1.0        initial line-search step
  step_grow = 1.1           step multiplier every grow_every line-search steps
  step_shrink = 0.8         step multiplier after a one-step line search
  grow_every = 3
  tol_f = 1e-12             stop when the best value gains less over stall_window iterations
  tol_x = 1e-12             stop when a line search moves less than this
  stall_window = 50
  max_iter = 5000
  restarts = 0              extra runs from random starting points
  refinements = 3           warm restarts from the best point
  seed = 0                  seed for random restarts (overridden by --seed)
  formal_max_iter = 200     Newton iterations for formal-solve
  formal_min_damping = 0.015625
  formal_tol = 1e-10        residual tolerance relative to 1 + max data magnitude
  formal_polish_steps = 3
  widen = 0.0               uniform right-hand side widening C (overridden by --widen)
  corner_limit = 24         largest m*n for corner scans
  eps = <auto>              membership tolerance, default 1e-9*(1 + max |b|)";

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub dilation: Option<f64>,
    pub initial_step: Option<f64>,
    pub step_grow: Option<f64>,
    pub step_shrink: Option<f64>,
    pub grow_every: Option<usize>,
    pub tol_f: Option<f64>,
    pub tol_x: Option<f64>,
    pub stall_window: Option<usize>,
    pub max_iter: Option<usize>,
    pub restarts: Option<usize>,
    pub refinements: Option<usize>,
    pub seed: Option<u64>,
    pub formal_max_iter: Option<usize>,
    pub formal_min_damping: Option<f64>,
    pub formal_tol: Option<f64>,
    pub formal_polish_steps: Option<usize>,
    pub widen: Option<f64>,
    pub corner_limit: Option<usize>,
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Settings {
    pub regularize: RegularizeConfig,
    pub eps: Option<f64>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn settings(&self) -> Settings {
        let mut r = RegularizeConfig::default();
        let s = &mut r.solver;
        macro_rules! set {
            ($dst:expr, $src:expr) => {
                if let Some(v) = $src {
                    $dst = v;
                }
            };
        }
        set!(s.dilation, self.dilation);
        set!(s.initial_step, self.initial_step);
        set!(s.step_grow, self.step_grow);
        set!(s.step_shrink, self.step_shrink);
        set!(s.grow_every, self.grow_every);
        set!(s.tol_f, self.tol_f);
        set!(s.tol_x, self.tol_x);
        set!(s.stall_window, self.stall_window);
        set!(s.max_iter, self.max_iter);
        set!(s.restarts, self.restarts);
        set!(s.refinements, self.refinements);
        set!(s.seed, self.seed);
        set!(r.formal.max_iter, self.formal_max_iter);
        set!(r.formal.min_damping, self.formal_min_damping);
        set!(r.formal.tol, self.formal_tol);
        set!(r.formal.polish_steps, self.formal_polish_steps);
        set!(r.widen, self.widen);
        set!(r.corner_limit, self.corner_limit);
        Settings { regularize: r, eps: self.eps }
    }
}
