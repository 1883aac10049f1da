//! Flat `key = value` run configuration: parsing, emission, and resolution
//! into validated physical parameters.
//!
//! The file format is line oriented UTF-8: one `key = value` assignment per
//! line, `#` starts a comment (whole-line or trailing), blank lines are
//! ignored. All quantities are nondimensional (`ħ = k_B = m₁ = ω₁₀ = 1`).
//! Every key is optional in the file; whether a key is *required* depends on
//! the task and on whether a preset supplies it. [`RunConfig::emit`] and
//! [`RunConfig::parse`] round-trip exactly.

use duet::bath::BathSpec;
use duet::covariance::QuadratureConfig;
use duet::presets::{preset, PRESET_NAMES};
use duet::response::OscillatorPair;
use duet::{DuetError, Result};

/// Parsed contents of a run-configuration file.
///
/// Each field mirrors one config key of the same name. `None` means the key
/// was absent; defaults are applied only at [`resolve`](RunConfig::resolve)
/// time so that emission reproduces exactly what was parsed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    /// Bundled parameter set to start from; explicit physical keys override
    /// individual values on top of it.
    pub preset: Option<String>,

    // Oscillator pair.
    pub m1: Option<f64>,
    pub m2: Option<f64>,
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    pub lambda: Option<f64>,

    // Bath attached to the first oscillator.
    pub gamma1: Option<f64>,
    pub tau_c1: Option<f64>,
    pub temperature1: Option<f64>,

    // Bath attached to the second oscillator.
    pub gamma2: Option<f64>,
    pub tau_c2: Option<f64>,
    pub temperature2: Option<f64>,

    // Frequency grid for per-frequency tasks.
    pub omega_min: Option<f64>,
    pub omega_max: Option<f64>,
    pub omega_points: Option<usize>,

    // Parameter sweep range for sweep tasks (heat-sweep, entanglement-sweep).
    pub sweep_min: Option<f64>,
    pub sweep_max: Option<f64>,
    pub sweep_points: Option<usize>,

    // Adaptive-quadrature overrides for integrated quantities.
    pub quad_omega_max: Option<f64>,
    pub quad_rel_tol: Option<f64>,
    pub quad_abs_tol: Option<f64>,

    // Finite-bath oracle controls for the oracle-check task.
    pub oracle_modes: Option<usize>,
    pub oracle_omega_max: Option<f64>,
    pub oracle_t_relax: Option<f64>,
}

/// The ordered list of recognized keys, used for emission and for the
/// "unknown key" diagnostic.
const KEYS: [&str; 24] = [
    "preset",
    "m1",
    "m2",
    "k1",
    "k2",
    "lambda",
    "gamma1",
    "tau_c1",
    "temperature1",
    "gamma2",
    "tau_c2",
    "temperature2",
    "omega_min",
    "omega_max",
    "omega_points",
    "sweep_min",
    "sweep_max",
    "sweep_points",
    "quad_omega_max",
    "quad_rel_tol",
    "quad_abs_tol",
    "oracle_modes",
    "oracle_omega_max",
    "oracle_t_relax",
];

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    value.parse::<f64>().map_err(|_| {
        DuetError::InvalidParameter(format!("config key '{key}': expected a number, got '{value}'"))
    })
}

fn parse_usize(key: &str, value: &str) -> Result<usize> {
    value.parse::<usize>().map_err(|_| {
        DuetError::InvalidParameter(format!(
            "config key '{key}': expected a nonnegative integer, got '{value}'"
        ))
    })
}

impl RunConfig {
    /// Parses the flat `key = value` format. Unknown and duplicated keys are
    /// rejected by name so typos surface immediately.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut seen: Vec<&str> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                DuetError::InvalidParameter(format!(
                    "config line {}: expected 'key = value', got '{}'",
                    lineno + 1,
                    line
                ))
            })?;
            let key = key.trim();
            let value = value.trim();
            let canonical = KEYS.iter().find(|k| **k == key).ok_or_else(|| {
                DuetError::InvalidParameter(format!(
                    "config line {}: unknown key '{}' (known keys: {})",
                    lineno + 1,
                    key,
                    KEYS.join(", ")
                ))
            })?;
            if seen.contains(canonical) {
                return Err(DuetError::InvalidParameter(format!(
                    "config line {}: duplicate key '{}'",
                    lineno + 1,
                    key
                )));
            }
            seen.push(canonical);
            match key {
                "preset" => cfg.preset = Some(value.to_string()),
                "m1" => cfg.m1 = Some(parse_f64(key, value)?),
                "m2" => cfg.m2 = Some(parse_f64(key, value)?),
                "k1" => cfg.k1 = Some(parse_f64(key, value)?),
                "k2" => cfg.k2 = Some(parse_f64(key, value)?),
                "lambda" => cfg.lambda = Some(parse_f64(key, value)?),
                "gamma1" => cfg.gamma1 = Some(parse_f64(key, value)?),
                "tau_c1" => cfg.tau_c1 = Some(parse_f64(key, value)?),
                "temperature1" => cfg.temperature1 = Some(parse_f64(key, value)?),
                "gamma2" => cfg.gamma2 = Some(parse_f64(key, value)?),
                "tau_c2" => cfg.tau_c2 = Some(parse_f64(key, value)?),
                "temperature2" => cfg.temperature2 = Some(parse_f64(key, value)?),
                "omega_min" => cfg.omega_min = Some(parse_f64(key, value)?),
                "omega_max" => cfg.omega_max = Some(parse_f64(key, value)?),
                "omega_points" => cfg.omega_points = Some(parse_usize(key, value)?),
                "sweep_min" => cfg.sweep_min = Some(parse_f64(key, value)?),
                "sweep_max" => cfg.sweep_max = Some(parse_f64(key, value)?),
                "sweep_points" => cfg.sweep_points = Some(parse_usize(key, value)?),
                "quad_omega_max" => cfg.quad_omega_max = Some(parse_f64(key, value)?),
                "quad_rel_tol" => cfg.quad_rel_tol = Some(parse_f64(key, value)?),
                "quad_abs_tol" => cfg.quad_abs_tol = Some(parse_f64(key, value)?),
                "oracle_modes" => cfg.oracle_modes = Some(parse_usize(key, value)?),
                "oracle_omega_max" => cfg.oracle_omega_max = Some(parse_f64(key, value)?),
                "oracle_t_relax" => cfg.oracle_t_relax = Some(parse_f64(key, value)?),
                _ => unreachable!("key was validated against KEYS"),
            }
        }
        Ok(cfg)
    }

    /// Emits the config in the same `key = value` format [`parse`] accepts.
    /// Floats use Rust's shortest round-trip representation, so
    /// `parse(emit(c)) == c` for every finite config.
    pub fn emit(&self) -> String {
        fn num(out: &mut String, key: &str, v: Option<f64>) {
            if let Some(v) = v {
                out.push_str(&format!("{key} = {v:?}\n"));
            }
        }
        fn int(out: &mut String, key: &str, v: Option<usize>) {
            if let Some(v) = v {
                out.push_str(&format!("{key} = {v}\n"));
            }
        }
        let mut out = String::new();
        if let Some(p) = &self.preset {
            out.push_str(&format!("preset = {p}\n"));
        }
        num(&mut out, "m1", self.m1);
        num(&mut out, "m2", self.m2);
        num(&mut out, "k1", self.k1);
        num(&mut out, "k2", self.k2);
        num(&mut out, "lambda", self.lambda);
        num(&mut out, "gamma1", self.gamma1);
        num(&mut out, "tau_c1", self.tau_c1);
        num(&mut out, "temperature1", self.temperature1);
        num(&mut out, "gamma2", self.gamma2);
        num(&mut out, "tau_c2", self.tau_c2);
        num(&mut out, "temperature2", self.temperature2);
        num(&mut out, "omega_min", self.omega_min);
        num(&mut out, "omega_max", self.omega_max);
        int(&mut out, "omega_points", self.omega_points);
        num(&mut out, "sweep_min", self.sweep_min);
        num(&mut out, "sweep_max", self.sweep_max);
        int(&mut out, "sweep_points", self.sweep_points);
        num(&mut out, "quad_omega_max", self.quad_omega_max);
        num(&mut out, "quad_rel_tol", self.quad_rel_tol);
        num(&mut out, "quad_abs_tol", self.quad_abs_tol);
        int(&mut out, "oracle_modes", self.oracle_modes);
        num(&mut out, "oracle_omega_max", self.oracle_omega_max);
        num(&mut out, "oracle_t_relax", self.oracle_t_relax);
        out
    }

    /// Resolves the config into validated physical parameters.
    ///
    /// Precedence, lowest to highest: preset values (the `--preset` flag
    /// overrides a `preset =` key), explicit physical keys in the file, and
    /// the `--omega-points` flag. A missing physical parameter that no preset
    /// supplies is a config error naming the key.
    pub fn resolve(
        &self,
        preset_flag: Option<&str>,
        omega_points_flag: Option<usize>,
    ) -> Result<Resolved> {
        let preset_name = preset_flag.or(self.preset.as_deref());
        let base = match preset_name {
            Some(name) => Some(preset(name)?),
            None => None,
        };

        let take = |field: Option<f64>, from_preset: Option<f64>, key: &str| -> Result<f64> {
            field.or(from_preset).ok_or_else(|| {
                DuetError::InvalidParameter(format!(
                    "missing config key '{key}' (set it explicitly or choose a preset; \
                     available presets: {})",
                    PRESET_NAMES.join(", ")
                ))
            })
        };
        let p = base.as_ref();
        let pair = OscillatorPair::new(
            take(self.m1, p.map(|p| p.pair.m1), "m1")?,
            take(self.m2, p.map(|p| p.pair.m2), "m2")?,
            take(self.k1, p.map(|p| p.pair.k1), "k1")?,
            take(self.k2, p.map(|p| p.pair.k2), "k2")?,
            take(self.lambda, p.map(|p| p.pair.lambda), "lambda")?,
        )?;
        let bath1 = BathSpec::new(
            take(self.gamma1, p.map(|p| p.bath1.gamma), "gamma1")?,
            take(self.tau_c1, p.map(|p| p.bath1.tau_c), "tau_c1")?,
            take(self.temperature1, p.map(|p| p.bath1.temperature), "temperature1")?,
        )?;
        let bath2 = BathSpec::new(
            take(self.gamma2, p.map(|p| p.bath2.gamma), "gamma2")?,
            take(self.tau_c2, p.map(|p| p.bath2.tau_c), "tau_c2")?,
            take(self.temperature2, p.map(|p| p.bath2.temperature), "temperature2")?,
        )?;

        let omega_min = self.omega_min.unwrap_or(0.0);
        let omega_max = self.omega_max.unwrap_or(3.0);
        let omega_points = omega_points_flag.or(self.omega_points).unwrap_or(601);
        if !(omega_min.is_finite() && omega_min >= 0.0) {
            return Err(DuetError::InvalidParameter(format!(
                "omega_min must be finite and >= 0, got {omega_min}"
            )));
        }
        if !(omega_max.is_finite() && omega_max > omega_min) {
            return Err(DuetError::InvalidParameter(format!(
                "omega_max must be finite and > omega_min = {omega_min}, got {omega_max}"
            )));
        }
        if omega_points < 2 {
            return Err(DuetError::InvalidParameter(format!(
                "omega_points must be >= 2, got {omega_points}"
            )));
        }

        let sweep_points = self.sweep_points.unwrap_or(0);
        if self.sweep_points.is_some() && sweep_points < 2 {
            return Err(DuetError::InvalidParameter(format!(
                "sweep_points must be >= 2, got {sweep_points}"
            )));
        }
        for (key, v) in [("sweep_min", self.sweep_min), ("sweep_max", self.sweep_max)] {
            if let Some(v) = v {
                if !v.is_finite() {
                    return Err(DuetError::InvalidParameter(format!(
                        "{key} must be finite, got {v}"
                    )));
                }
            }
        }

        // Quadrature settings: library defaults for this parameter point,
        // with any explicit override applied and re-validated.
        let default_quad = QuadratureConfig::default_for(&pair, (&bath1, &bath2));
        let quad = QuadratureConfig::new(
            self.quad_omega_max.unwrap_or(default_quad.omega_max),
            self.quad_rel_tol.unwrap_or(default_quad.rel_tol),
            self.quad_abs_tol.unwrap_or(default_quad.abs_tol),
            default_quad.seed_points.clone(),
        )?;

        Ok(Resolved {
            pair,
            bath1,
            bath2,
            omega_min,
            omega_max,
            omega_points,
            sweep_min: self.sweep_min,
            sweep_max: self.sweep_max,
            sweep_points: self.sweep_points,
            quad,
            oracle_modes: self.oracle_modes.unwrap_or(900),
            oracle_omega_max: self.oracle_omega_max.unwrap_or(60.0),
            oracle_t_relax: self.oracle_t_relax.unwrap_or(33.0),
        })
    }
}

/// Fully validated parameters ready for task execution.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub pair: OscillatorPair,
    pub bath1: BathSpec,
    pub bath2: BathSpec,
    pub omega_min: f64,
    pub omega_max: f64,
    pub omega_points: usize,
    pub sweep_min: Option<f64>,
    pub sweep_max: Option<f64>,
    pub sweep_points: Option<usize>,
    pub quad: QuadratureConfig,
    pub oracle_modes: usize,
    pub oracle_omega_max: f64,
    pub oracle_t_relax: f64,
}

impl Resolved {
    /// The uniform frequency grid `[omega_min, omega_max]` with
    /// `omega_points` samples.
    pub fn omega_grid(&self) -> Vec<f64> {
        let n = self.omega_points;
        (0..n)
            .map(|i| {
                self.omega_min
                    + (self.omega_max - self.omega_min) * i as f64 / (n - 1) as f64
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_blanks_and_values() {
        let cfg = RunConfig::parse(
            "# full-line comment\n\
             \n\
             m1 = 1.0\n\
             k1 = 2.5   # trailing comment\n\
             omega_points = 11\n\
             preset = fig1a\n",
        )
        .unwrap();
        assert_eq!(cfg.m1, Some(1.0));
        assert_eq!(cfg.k1, Some(2.5));
        assert_eq!(cfg.omega_points, Some(11));
        assert_eq!(cfg.preset.as_deref(), Some("fig1a"));
        assert_eq!(cfg.m2, None);
    }

    #[test]
    fn rejects_unknown_duplicate_and_malformed_keys() {
        for (text, needle) in [
            ("m1 = 1\nbogus = 2\n", "unknown key 'bogus'"),
            ("m1 = 1\nm1 = 2\n", "duplicate key 'm1'"),
            ("m1 1.0\n", "expected 'key = value'"),
            ("m1 = fast\n", "expected a number"),
            ("omega_points = -3\n", "nonnegative integer"),
        ] {
            let err = RunConfig::parse(text).unwrap_err();
            assert!(
                err.to_string().contains(needle),
                "for {text:?} expected {needle:?} in {err}"
            );
        }
    }

    #[test]
    fn emit_parse_round_trip_is_identity() {
        let cfg = RunConfig {
            preset: Some("fig3right".into()),
            m1: Some(1.0),
            k2: Some(0.36),
            lambda: Some(0.1234567890123456),
            gamma1: Some(1e-3),
            temperature2: Some(0.0),
            omega_min: Some(0.0),
            omega_max: Some(2.5),
            omega_points: Some(301),
            sweep_min: Some(0.01),
            sweep_points: Some(25),
            quad_rel_tol: Some(1e-10),
            oracle_modes: Some(900),
            oracle_t_relax: Some(33.5),
            ..RunConfig::default()
        };
        assert_eq!(RunConfig::parse(&cfg.emit()).unwrap(), cfg);

        // The empty config round-trips too.
        assert_eq!(RunConfig::parse(&RunConfig::default().emit()).unwrap(), RunConfig::default());
    }

    #[test]
    fn preset_supplies_defaults_and_explicit_keys_override() {
        let cfg = RunConfig::parse("preset = fig1a\ntemperature1 = 0.7\n").unwrap();
        let r = cfg.resolve(None, None).unwrap();
        let base = preset("fig1a").unwrap();
        assert_eq!(r.pair, base.pair);
        assert_eq!(r.bath1.temperature, 0.7); // override wins
        assert_eq!(r.bath1.gamma, base.bath1.gamma);
        assert_eq!(r.bath2, base.bath2);
    }

    #[test]
    fn preset_flag_overrides_preset_key() {
        let cfg = RunConfig::parse("preset = fig1a\n").unwrap();
        let r = cfg.resolve(Some("fig3right"), None).unwrap();
        assert_eq!(r.pair, preset("fig3right").unwrap().pair);
    }

    #[test]
    fn missing_parameter_is_named() {
        let cfg = RunConfig::parse("m1 = 1\n").unwrap();
        let err = cfg.resolve(None, None).unwrap_err();
        assert!(err.to_string().contains("missing config key 'm2'"), "{err}");
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn omega_points_flag_wins_over_config_key() {
        let cfg = RunConfig::parse("preset = fig1a\nomega_points = 11\n").unwrap();
        assert_eq!(cfg.resolve(None, None).unwrap().omega_points, 11);
        assert_eq!(cfg.resolve(None, Some(7)).unwrap().omega_points, 7);
    }

    #[test]
    fn grid_validation_errors_name_the_invariant() {
        for (extra, needle) in [
            ("omega_min = -1\n", "omega_min"),
            ("omega_max = 0\n", "omega_max"),
            ("omega_points = 1\n", "omega_points"),
            ("sweep_points = 1\n", "sweep_points"),
            ("quad_rel_tol = 0\n", "rel_tol"),
        ] {
            let cfg = RunConfig::parse(&format!("preset = fig1a\n{extra}")).unwrap();
            let err = cfg.resolve(None, None).unwrap_err();
            assert!(err.to_string().contains(needle), "expected {needle} in {err}");
        }
    }

    #[test]
    fn omega_grid_hits_both_endpoints() {
        let cfg = RunConfig::parse("preset = fig1a\nomega_min = 0.5\nomega_max = 2.0\n").unwrap();
        let grid = cfg.resolve(None, Some(4)).unwrap().omega_grid();
        assert_eq!(grid.len(), 4);
        assert_eq!(grid[0], 0.5);
        assert_eq!(grid[3], 2.0);
    }
}
