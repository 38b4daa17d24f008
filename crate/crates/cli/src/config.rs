//! Experiment configuration: a TOML file with `[experiment]`, `[physics]`
//! and `[light]` sections, merged with per-kind defaults and validated.

use std::fmt;
use std::str::FromStr;

use catlight::photon::{cat_fock, coherent_fock};
use catlight::{DickeConfig, C64};
use serde::{Deserialize, Serialize};

/// Photon truncation deficit above which a warning is issued.
pub const DEFICIT_WARNING: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    InterferenceDynamics,
    NegativitySweep,
    GammaScaling,
    Custom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Full,
    XfaSg,
    XfaGp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LightKind {
    Cat,
    Coherent,
}

macro_rules! named_enum {
    ($ty:ty, $what:literal, $($variant:path => $name:literal),+ $(,)?) => {
        impl $ty {
            pub fn name(self) -> &'static str {
                match self { $($variant => $name),+ }
            }
        }

        impl FromStr for $ty {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                match s {
                    $($name => Ok($variant),)+
                    other => Err(format!(concat!("unknown ", $what, " '{}' (expected one of: {})"), other, [$($name),+].join(", "))),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }
    };
}

named_enum!(ExperimentKind, "experiment kind",
    ExperimentKind::InterferenceDynamics => "interference_dynamics",
    ExperimentKind::NegativitySweep => "negativity_sweep",
    ExperimentKind::GammaScaling => "gamma_scaling",
    ExperimentKind::Custom => "custom",
);

named_enum!(Mode, "mode",
    Mode::Full => "full",
    Mode::XfaSg => "xfa_sg",
    Mode::XfaGp => "xfa_gp",
);

named_enum!(LightKind, "light kind",
    LightKind::Cat => "cat",
    LightKind::Coherent => "coherent",
);

impl Mode {
    pub fn is_effective(self) -> bool {
        self != Mode::Full
    }
}

/// The file as written by the user; every field optional.
#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(default)]
    pub experiment: RawExperiment,
    #[serde(default)]
    pub physics: RawPhysics,
    #[serde(default)]
    pub light: RawLight,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawExperiment {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modes: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_every: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawPhysics {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gammas: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rwa: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawLight {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kinds: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inset_alpha: Option<f64>,
}

/// Light sources and amplitudes of an experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct LightSpec {
    pub kinds: Vec<LightKind>,
    pub alphas: Vec<C64>,
    /// Amplitude of the time-resolved inset of the negativity sweep.
    pub inset_alpha: f64,
}

/// A fully resolved experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub physics: DickeConfig,
    /// Couplings to run; a single entry equal to `physics.gamma` unless the
    /// kind sweeps γ.
    pub gammas: Vec<f64>,
    pub light: LightSpec,
    pub modes: Vec<Mode>,
    /// File stem of the CSV outputs.
    pub output: String,
    /// Time-resolved outputs keep every `sample_every`-th step.
    pub sample_every: usize,
}

/// Every problem found in a configuration.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("{}", .errors.join("; "))]
pub struct ConfigError {
    pub errors: Vec<String>,
}

impl ConfigError {
    fn single(msg: impl Into<String>) -> Self {
        Self { errors: vec![msg.into()] }
    }
}

/// `10^{lo} … 10^{hi}` in `n` logarithmically even points.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![10f64.powf(lo)],
        _ => (0..n).map(|k| 10f64.powf(lo + (hi - lo) * k as f64 / (n - 1) as f64)).collect(),
    }
}

struct KindDefaults {
    modes: &'static [Mode],
    kinds: &'static [LightKind],
    alphas: Vec<f64>,
    gammas: Option<Vec<f64>>,
    rwa: bool,
}

fn defaults(kind: ExperimentKind) -> KindDefaults {
    use LightKind::*;
    use Mode::*;
    match kind {
        ExperimentKind::InterferenceDynamics => {
            KindDefaults { modes: &[Full, XfaSg], kinds: &[Cat], alphas: vec![0.5], gammas: None, rwa: false }
        }
        ExperimentKind::NegativitySweep => KindDefaults {
            modes: &[Full, XfaSg, XfaGp],
            kinds: &[Cat],
            alphas: (0..=15).map(|k| k as f64 / 10.0).collect(),
            gammas: None,
            rwa: false,
        },
        ExperimentKind::GammaScaling => KindDefaults {
            modes: &[Full, XfaSg],
            kinds: &[Cat, Coherent],
            alphas: vec![0.8],
            gammas: Some(logspace(-3.5, -2.25, 6)),
            rwa: true,
        },
        ExperimentKind::Custom => {
            KindDefaults { modes: &[Full, XfaSg], kinds: &[Cat], alphas: vec![0.5], gammas: None, rwa: false }
        }
    }
}

fn sweeps_gamma(kind: ExperimentKind) -> bool {
    matches!(kind, ExperimentKind::GammaScaling | ExperimentKind::Custom)
}

fn parse_list<T: FromStr<Err = String>>(names: &[String], errors: &mut Vec<String>) -> Vec<T> {
    names
        .iter()
        .filter_map(|n| match n.parse() {
            Ok(v) => Some(v),
            Err(e) => {
                errors.push(e);
                None
            }
        })
        .collect()
}

pub fn parse_config(text: &str) -> Result<RawConfig, ConfigError> {
    toml::from_str(text).map_err(|e| ConfigError::single(e.to_string().trim().to_string()))
}

impl RawConfig {
    /// Fills defaults for `kind` (or the kind named in the file) and
    /// validates. Warnings are returned alongside the resolved experiment.
    pub fn resolve(&self, kind: Option<ExperimentKind>) -> Result<(ExperimentSpec, Vec<String>), ConfigError> {
        let mut errors = vec![];
        let file_kind = match &self.experiment.kind {
            Some(k) => match k.parse::<ExperimentKind>() {
                Ok(k) => Some(k),
                Err(e) => return Err(ConfigError::single(e)),
            },
            None => None,
        };
        let kind = match (kind, file_kind) {
            (Some(a), Some(b)) if a != b => {
                return Err(ConfigError::single(format!("experiment.kind = '{b}' conflicts with the requested '{a}'")))
            }
            (Some(a), _) => a,
            (None, Some(b)) => b,
            (None, None) => return Err(ConfigError::single("experiment.kind is required")),
        };
        let d = defaults(kind);
        let base = DickeConfig::default();
        let p = &self.physics;
        let physics = DickeConfig {
            delta: p.delta.unwrap_or(base.delta),
            mu: p.mu.unwrap_or(base.mu),
            omega: p.omega.unwrap_or(base.omega),
            gamma: p.gamma.unwrap_or(base.gamma),
            cutoff: p.cutoff.unwrap_or(base.cutoff),
            dt: p.dt.unwrap_or(base.dt),
            t_max: p.t_max.unwrap_or(base.t_max),
            rwa: p.rwa.unwrap_or(d.rwa),
        };

        let gammas = match (&p.gammas, sweeps_gamma(kind)) {
            (Some(g), true) => g.clone(),
            (Some(_), false) => {
                errors.push(format!("physics.gammas is only used by gamma_scaling and custom, not {kind}"));
                vec![physics.gamma]
            }
            (None, true) => d.gammas.clone().unwrap_or_else(|| vec![physics.gamma]),
            (None, false) => vec![physics.gamma],
        };

        let l = &self.light;
        let kinds = match &l.kinds {
            Some(k) => parse_list(k, &mut errors),
            None => d.kinds.to_vec(),
        };
        let alphas = match (l.alpha, &l.alphas) {
            (Some(_), Some(_)) => {
                errors.push("light.alpha and light.alphas are mutually exclusive".into());
                vec![]
            }
            (Some(a), None) => vec![C64::new(a, l.alpha_im.unwrap_or(0.0))],
            (None, Some(list)) => {
                if l.alpha_im.is_some() {
                    errors.push("light.alpha_im applies only to a single light.alpha".into());
                }
                list.iter().map(|&a| C64::new(a, 0.0)).collect()
            }
            (None, None) => d.alphas.iter().map(|&a| C64::new(a, l.alpha_im.unwrap_or(0.0))).collect(),
        };
        let modes = match &self.experiment.modes {
            Some(m) => parse_list(m, &mut errors),
            None => d.modes.to_vec(),
        };

        let spec = ExperimentSpec {
            kind,
            physics,
            gammas,
            light: LightSpec { kinds, alphas, inset_alpha: l.inset_alpha.unwrap_or(0.5) },
            modes,
            output: self.experiment.output.clone().unwrap_or_else(|| kind.name().to_string()),
            sample_every: self.experiment.sample_every.unwrap_or(10),
        };
        let mut report = spec.validate();
        errors.append(&mut report.errors);
        if errors.is_empty() {
            Ok((spec, report.warnings))
        } else {
            Err(ConfigError { errors })
        }
    }
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

impl ExperimentSpec {
    /// Defaults for `kind` with nothing overridden.
    pub fn defaults(kind: ExperimentKind) -> Self {
        RawConfig::default().resolve(Some(kind)).expect("built-in defaults are valid").0
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        let e = &mut r.errors;
        e.extend(self.physics.violations().into_iter().map(|v| format!("physics: {v}")));

        if self.gammas.is_empty() {
            e.push("physics.gammas must not be empty".into());
        } else if !strictly_increasing(&self.gammas) {
            e.push("physics.gammas must be strictly increasing".into());
        }
        if self.gammas.iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
            e.push("physics.gammas must be finite and >= 0".into());
        }

        let alphas_re: Vec<f64> = self.light.alphas.iter().map(|a| a.re).collect();
        if self.light.alphas.is_empty() {
            e.push("light.alphas must not be empty".into());
        } else if !strictly_increasing(&alphas_re) {
            e.push("light.alphas must be strictly increasing".into());
        }
        if self.light.alphas.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            e.push("light amplitudes must be finite".into());
        }
        if self.light.kinds.is_empty() {
            e.push("light.kinds must not be empty".into());
        }
        if !self.light.inset_alpha.is_finite() {
            e.push("light.inset_alpha must be finite".into());
        }

        if self.modes.is_empty() {
            e.push("experiment.modes must not be empty".into());
        }
        let mut sorted = self.modes.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != self.modes.len() {
            e.push("experiment.modes contains duplicates".into());
        }
        let has_full = self.modes.contains(&Mode::Full);
        let has_effective = self.modes.iter().any(|m| m.is_effective());

        if self.output.is_empty() || self.output.contains(['/', '\\']) {
            e.push(format!("experiment.output must be a plain file stem, got '{}'", self.output));
        }
        if self.sample_every == 0 {
            e.push("experiment.sample_every must be >= 1".into());
        }

        match self.kind {
            ExperimentKind::InterferenceDynamics => {
                if self.light.alphas.len() != 1 {
                    e.push("interference_dynamics takes a single light.alpha".into());
                }
                if has_full && self.light.alphas.iter().any(|a| a.norm() < 1e-12) {
                    e.push("interference_dynamics with the full mode needs alpha != 0 for the decomposition".into());
                }
            }
            ExperimentKind::GammaScaling => {
                if !(has_full && has_effective) {
                    e.push("gamma_scaling needs the full mode and at least one xfa mode".into());
                }
                if self.light.alphas.len() != 1 {
                    e.push("gamma_scaling takes a single light.alpha".into());
                }
                if self.gammas.len() < 3 {
                    e.push("gamma_scaling needs at least 3 gammas for a slope fit".into());
                }
            }
            ExperimentKind::NegativitySweep | ExperimentKind::Custom => {}
        }
        if self.kind != ExperimentKind::GammaScaling && self.light.kinds.len() != 1 {
            e.push(format!("{} takes exactly one light kind", self.kind));
        }

        for &kind in &self.light.kinds {
            for &alpha in &self.light.alphas {
                let deficit = match kind {
                    LightKind::Cat => cat_fock(alpha, self.physics.cutoff),
                    LightKind::Coherent => coherent_fock(alpha, self.physics.cutoff),
                }
                .truncation_deficit();
                if deficit > DEFICIT_WARNING {
                    r.warnings.push(format!(
                        "truncation deficit {deficit:.3e} above threshold {DEFICIT_WARNING:e} for {kind} light at alpha = {alpha} with cutoff {}",
                        self.physics.cutoff
                    ));
                }
            }
        }
        r
    }

    /// The fully explicit configuration; resolving it reproduces `self`.
    pub fn to_raw(&self) -> RawConfig {
        let single_alpha = self.light.alphas.len() == 1;
        let (alpha, alpha_im, alphas) = if single_alpha {
            let a = self.light.alphas[0];
            (Some(a.re), (a.im != 0.0).then_some(a.im), None)
        } else {
            (None, None, Some(self.light.alphas.iter().map(|a| a.re).collect()))
        };
        RawConfig {
            experiment: RawExperiment {
                kind: Some(self.kind.name().into()),
                modes: Some(self.modes.iter().map(|m| m.name().into()).collect()),
                output: Some(self.output.clone()),
                sample_every: Some(self.sample_every),
            },
            physics: RawPhysics {
                delta: Some(self.physics.delta),
                mu: Some(self.physics.mu),
                omega: Some(self.physics.omega),
                gamma: Some(self.physics.gamma),
                gammas: sweeps_gamma(self.kind).then(|| self.gammas.clone()),
                cutoff: Some(self.physics.cutoff),
                dt: Some(self.physics.dt),
                t_max: Some(self.physics.t_max),
                rwa: Some(self.physics.rwa),
            },
            light: RawLight {
                kinds: Some(self.light.kinds.iter().map(|k| k.name().into()).collect()),
                alpha,
                alpha_im,
                alphas,
                inset_alpha: Some(self.light.inset_alpha),
            },
        }
    }

    /// One-line canonical form of [`Self::to_raw`], used as the CSV stamp.
    pub fn canonical(&self) -> String {
        let text = toml::to_string(&self.to_raw()).expect("raw config serializes");
        text.lines().map(str::trim).filter(|l| !l.is_empty()).collect::<Vec<_>>().join(" ")
    }

    /// Physics for one grid point.
    pub fn physics_at(&self, gamma: f64) -> DickeConfig {
        DickeConfig { gamma, ..self.physics }
    }
}
