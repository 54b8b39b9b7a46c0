//! Flat `key = value` run configuration.
//!
//! Every key is optional; missing keys keep the library defaults and command
//! line flags override the file. Recognised keys:
//!
//! | key            | meaning                                          |
//! |----------------|--------------------------------------------------|
//! | `mode`         | `standard` or `adaptive`                         |
//! | `target_p`     | deepest level of the sweep                       |
//! | `restarts`     | starting points per level                        |
//! | `alpha`        | perturbation scale for extended points           |
//! | `master_seed`  | root of every random stream                      |
//! | `initial_bias` | level-1 bias value in adaptive mode              |
//! | `init_u_range` | level-1 `u_1` drawn from `[-x, x]`               |
//! | `init_v_range` | level-1 `v_1` drawn from `[-x, x]`               |
//! | `eps_g`        | finite-difference step                           |
//! | `adam_rate`, `adam_beta1`, `adam_beta2`, `adam_eps` | Adam settings   |
//! | `ell`          | bias learning rate                               |
//! | `tol`          | convergence threshold on successive energies     |
//! | `max_iter`     | iteration cap per inner loop                     |
//! | `h_max`        | bias clipping bound                              |
//! | `gradient`     | `forward` or `central`                           |
//! | `z_shots`      | estimate `<Z_j>` from this many shots            |

use std::path::Path;

use abqaoa::optimizer::GradientRule;
use abqaoa::{Mode, ProtocolConfig};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_bias: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub init_u_range: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub init_v_range: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_g: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adam_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adam_beta1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adam_beta2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adam_eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gradient: Option<GradientRule>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_shots: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|msg| CliError::config(format!("{}: {msg}", path.display())))
    }

    /// Parses the file body; the error message carries the line and column.
    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| {
            let location = e
                .span()
                .map(|span| {
                    let before = &text[..span.start.min(text.len())];
                    let line = before.matches('\n').count() + 1;
                    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
                    format!("line {line}, column {col}: ")
                })
                .unwrap_or_default();
            format!("{location}{}", e.message())
        })
    }

    /// Later values win: `self` is overridden by every `Some` in `other`.
    pub fn merged(mut self, other: &ConfigFile) -> Self {
        macro_rules! take {
            ($($field:ident),*) => { $( if other.$field.is_some() { self.$field = other.$field.clone(); } )* };
        }
        take!(
            mode, target_p, restarts, alpha, master_seed, initial_bias, init_u_range, init_v_range, eps_g, adam_rate,
            adam_beta1, adam_beta2, adam_eps, ell, tol, max_iter, h_max, gradient, z_shots
        );
        self
    }

    pub fn to_protocol(&self) -> Result<ProtocolConfig, CliError> {
        let mut cfg = ProtocolConfig::default();
        macro_rules! set {
            ($target:expr, $field:ident) => { if let Some(v) = self.$field.clone() { $target = v; } };
        }
        set!(cfg.mode, mode);
        set!(cfg.target_p, target_p);
        set!(cfg.restarts, restarts);
        set!(cfg.alpha, alpha);
        set!(cfg.master_seed, master_seed);
        set!(cfg.initial_bias, initial_bias);
        set!(cfg.init_u_range, init_u_range);
        set!(cfg.init_v_range, init_v_range);
        set!(cfg.optimizer.eps_g, eps_g);
        set!(cfg.optimizer.adam_rate, adam_rate);
        set!(cfg.optimizer.adam_beta1, adam_beta1);
        set!(cfg.optimizer.adam_beta2, adam_beta2);
        set!(cfg.optimizer.adam_eps, adam_eps);
        set!(cfg.optimizer.ell, ell);
        set!(cfg.optimizer.tol, tol);
        set!(cfg.optimizer.max_iter, max_iter);
        set!(cfg.optimizer.h_max, h_max);
        set!(cfg.optimizer.gradient, gradient);
        if self.z_shots.is_some() {
            cfg.optimizer.z_shots = self.z_shots;
        }
        cfg.validate().map_err(CliError::from)?;
        Ok(cfg)
    }

    /// Every key spelled out, for manifests.
    pub fn snapshot(cfg: &ProtocolConfig) -> Self {
        let o = &cfg.optimizer;
        ConfigFile {
            mode: Some(cfg.mode),
            target_p: Some(cfg.target_p),
            restarts: Some(cfg.restarts),
            alpha: Some(cfg.alpha),
            master_seed: Some(cfg.master_seed),
            initial_bias: Some(cfg.initial_bias),
            init_u_range: Some(cfg.init_u_range),
            init_v_range: Some(cfg.init_v_range),
            eps_g: Some(o.eps_g),
            adam_rate: Some(o.adam_rate),
            adam_beta1: Some(o.adam_beta1),
            adam_beta2: Some(o.adam_beta2),
            adam_eps: Some(o.adam_eps),
            ell: Some(o.ell),
            tol: Some(o.tol),
            max_iter: Some(o.max_iter),
            h_max: Some(o.h_max),
            gradient: Some(o.gradient),
            z_shots: o.z_shots,
        }
    }
}
