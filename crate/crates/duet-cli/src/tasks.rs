//! The analysis tasks the CLI can run, and the CSV writer they share.
//!
//! Every task evaluates library functions over a grid and writes one CSV:
//! a `# column,names` header line followed by comma-separated rows with
//! floats at full precision (17 significant digits), so output files
//! round-trip losslessly and identical configs produce bit-identical bytes.

use std::fmt::Write as _;

use duet::bath::BathSpec;
use duet::covariance::stationary_covariance;
use duet::gaussian::{entropies, epr_pair, logarithmic_negativity, ppt_hermitian_min_eigenvalue};
use duet::oracle::{build_model, steady_system_covariance};
use duet::response::{absorption_spectrum, OscillatorPair};
use duet::spectra::{
    fd_residual, heat_current_linear_spectrum, heat_current_spectrum, net_heat_current,
};
use duet::witness::{
    epr_fixed_pair_spectra, optimal_quadrature_spectra, reference_spectra_t0, Sector,
};
use duet::{DuetError, Result};

use crate::config::Resolved;

/// The analysis selected by `--task`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    /// Absorption spectra under a drive on either oscillator, with the
    /// uncoupled (`λ = 0`) spectra alongside for comparison.
    Absorption,
    /// Spectral density of the inter-bath heat current and its
    /// linear-response (small `ΔT`) approximation.
    HeatSpectrum,
    /// Net heat current versus friction strength `γ` (applied to both baths).
    HeatSweep,
    /// The stationary 4×4 covariance matrix, entry by entry with error bars.
    Covariance,
    /// Entanglement measures versus coupling rate `g` (`λ = m₁ g²`).
    EntanglementSweep,
    /// Frequency-resolved minimal/maximal quadrature noise, zero-temperature
    /// references, and EPR-pair spectra.
    WitnessSpectra,
    /// Fluctuation–dissipation residual across the frequency grid
    /// (requires equal bath temperatures).
    FdCheck,
    /// Stationary covariance from the frequency domain against the
    /// finite-bath time-domain oracle, entry by entry.
    OracleCheck,
}

impl Task {
    /// All task names accepted by `--task`, in help order.
    pub const NAMES: [&'static str; 8] = [
        "absorption",
        "heat-spectrum",
        "heat-sweep",
        "covariance",
        "entanglement-sweep",
        "witness-spectra",
        "fd-check",
        "oracle-check",
    ];

    /// Parses a `--task` argument.
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "absorption" => Ok(Task::Absorption),
            "heat-spectrum" => Ok(Task::HeatSpectrum),
            "heat-sweep" => Ok(Task::HeatSweep),
            "covariance" => Ok(Task::Covariance),
            "entanglement-sweep" => Ok(Task::EntanglementSweep),
            "witness-spectra" => Ok(Task::WitnessSpectra),
            "fd-check" => Ok(Task::FdCheck),
            "oracle-check" => Ok(Task::OracleCheck),
            other => Err(DuetError::InvalidParameter(format!(
                "unknown task '{other}' (expected one of: {})",
                Task::NAMES.join(", ")
            ))),
        }
    }

    /// Runs the task and returns the finished CSV text.
    pub fn run(self, r: &Resolved) -> Result<Csv> {
        match self {
            Task::Absorption => absorption(r),
            Task::HeatSpectrum => heat_spectrum(r),
            Task::HeatSweep => heat_sweep(r),
            Task::Covariance => covariance(r),
            Task::EntanglementSweep => entanglement_sweep(r),
            Task::WitnessSpectra => witness_spectra(r),
            Task::FdCheck => fd_check(r),
            Task::OracleCheck => oracle_check(r),
        }
    }
}

/// One CSV value: a float printed at full precision or a short label.
#[derive(Debug, Clone)]
pub enum Field {
    Num(f64),
    Label(&'static str),
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(v)
    }
}

/// An in-memory CSV table with a fixed column set.
#[derive(Debug, Clone)]
pub struct Csv {
    columns: &'static [&'static str],
    rows: Vec<Vec<Field>>,
}

impl Csv {
    fn new(columns: &'static [&'static str]) -> Self {
        Csv { columns, rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Number of data rows (the header line is not counted).
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// Renders the table: `# name,name,...` header, then one comma-separated
    /// line per row. Floats use `{:.16e}` — 17 significant digits — which is
    /// lossless for `f64`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("# ");
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, field) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match field {
                    Field::Num(v) => write!(out, "{v:.16e}").expect("string write"),
                    Field::Label(s) => out.push_str(s),
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Labels of the canonical basis, indexed as the covariance matrix is.
const BASIS: [&str; 4] = ["x1", "p1", "x2", "p2"];

fn absorption(r: &Resolved) -> Result<Csv> {
    let uncoupled = OscillatorPair::new(r.pair.m1, r.pair.m2, r.pair.k1, r.pair.k2, 0.0)?;
    let baths = (&r.bath1, &r.bath2);
    let mut csv = Csv::new(&[
        "omega",
        "abs_drive1",
        "abs_drive2",
        "abs_uncoupled1",
        "abs_uncoupled2",
    ]);
    for omega in r.omega_grid() {
        csv.push(vec![
            omega.into(),
            absorption_spectrum(&r.pair, baths, omega, (1.0, 0.0))?.into(),
            absorption_spectrum(&r.pair, baths, omega, (0.0, 1.0))?.into(),
            absorption_spectrum(&uncoupled, baths, omega, (1.0, 0.0))?.into(),
            absorption_spectrum(&uncoupled, baths, omega, (0.0, 1.0))?.into(),
        ]);
    }
    Ok(csv)
}

fn heat_spectrum(r: &Resolved) -> Result<Csv> {
    let baths = (&r.bath1, &r.bath2);
    let mut csv = Csv::new(&["omega", "heat_spectrum", "heat_spectrum_linear"]);
    for omega in r.omega_grid() {
        // The spectral density vanishes at ω = 0 (it carries a factor ω and
        // the thermal occupations stay finite), so the grid may include the
        // origin even though the pointwise formula is defined for ω > 0.
        let (j, jl) = if omega > 0.0 {
            (
                heat_current_spectrum(&r.pair, baths, omega)?,
                heat_current_linear_spectrum(&r.pair, baths, omega)?,
            )
        } else {
            (0.0, 0.0)
        };
        csv.push(vec![omega.into(), j.into(), jl.into()]);
    }
    Ok(csv)
}

fn heat_sweep(r: &Resolved) -> Result<Csv> {
    let lo = r.sweep_min.unwrap_or(0.01);
    let hi = r.sweep_max.unwrap_or(0.4);
    let n = r.sweep_points.unwrap_or(25);
    if !(lo > 0.0 && hi > lo) {
        return Err(DuetError::InvalidParameter(format!(
            "heat-sweep needs 0 < sweep_min < sweep_max, got [{lo}, {hi}]"
        )));
    }
    let delta_t = r.bath1.temperature - r.bath2.temperature;
    let mut csv = Csv::new(&["gamma", "heat_current", "heat_per_delta_t"]);
    // Log-spaced grid: the interesting crossover sits at weak friction.
    for i in 0..n {
        let f = i as f64 / (n - 1) as f64;
        let gamma = lo * (hi / lo).powf(f);
        let b1 = BathSpec::new(gamma, r.bath1.tau_c, r.bath1.temperature)?;
        let b2 = BathSpec::new(gamma, r.bath2.tau_c, r.bath2.temperature)?;
        let j = net_heat_current(&r.pair, (&b1, &b2), &r.quad)?;
        let per_dt = if delta_t != 0.0 { j / delta_t } else { 0.0 };
        csv.push(vec![gamma.into(), j.into(), per_dt.into()]);
    }
    Ok(csv)
}

fn covariance(r: &Resolved) -> Result<Csv> {
    let cov = stationary_covariance(&r.pair, (&r.bath1, &r.bath2), &r.quad)?;
    let mut csv = Csv::new(&["row", "col", "value", "error"]);
    for a in 0..4 {
        for b in a..4 {
            csv.push(vec![
                Field::Label(BASIS[a]),
                Field::Label(BASIS[b]),
                cov.c[a][b].into(),
                cov.error[a][b].into(),
            ]);
        }
    }
    Ok(csv)
}

fn entanglement_sweep(r: &Resolved) -> Result<Csv> {
    let lo = r.sweep_min.unwrap_or(0.2);
    let hi = r.sweep_max.unwrap_or(0.6);
    let n = r.sweep_points.unwrap_or(41);
    if !(lo >= 0.0 && hi > lo) {
        return Err(DuetError::InvalidParameter(format!(
            "entanglement-sweep needs 0 <= sweep_min < sweep_max, got [{lo}, {hi}]"
        )));
    }
    let mut csv = Csv::new(&[
        "g",
        "ppt_eigenvalue_shifted",
        "epr_uncertainty",
        "log_negativity",
        "mutual_information",
    ]);
    for i in 0..n {
        let g = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        // The sweep parameter is the coupling *rate* g; the spring constant
        // entering the equations of motion is λ = m₁ g².
        let pair = OscillatorPair::new(
            r.pair.m1,
            r.pair.m2,
            r.pair.k1,
            r.pair.k2,
            r.pair.m1 * g * g,
        )?;
        let cov = stationary_covariance(&pair, (&r.bath1, &r.bath2), &r.quad)?;
        let (_, _, _, mutual) = entropies(&cov)?;
        csv.push(vec![
            g.into(),
            ppt_hermitian_min_eigenvalue(&cov).into(),
            epr_pair(&cov)?.uncertainty.into(),
            logarithmic_negativity(&cov)?.into(),
            mutual.into(),
        ]);
    }
    Ok(csv)
}

fn witness_spectra(r: &Resolved) -> Result<Csv> {
    let baths = (&r.bath1, &r.bath2);
    // The EPR pair is optimized once on the stationary state and then its
    // noise is resolved in frequency.
    let cov = stationary_covariance(&r.pair, baths, &r.quad)?;
    let epr = epr_pair(&cov)?;
    let mut csv = Csv::new(&[
        "omega",
        "s_min",
        "s_max",
        "t0_sum",
        "t0_diff",
        "epr_qq",
        "epr_pp",
    ]);
    for omega in r.omega_grid() {
        let opt = optimal_quadrature_spectra(&r.pair, baths, omega, Sector::Position)?;
        let (t0_sum, t0_diff) = reference_spectra_t0(&r.pair, baths, omega, Sector::Position)?;
        let (s_qq, s_pp) = epr_fixed_pair_spectra(&r.pair, baths, omega, &epr)?;
        csv.push(vec![
            omega.into(),
            opt.s_min.into(),
            opt.s_max.into(),
            t0_sum.into(),
            t0_diff.into(),
            s_qq.into(),
            s_pp.into(),
        ]);
    }
    Ok(csv)
}

fn fd_check(r: &Resolved) -> Result<Csv> {
    let baths = (&r.bath1, &r.bath2);
    let mut csv = Csv::new(&["omega", "fd_residual"]);
    for omega in r.omega_grid() {
        csv.push(vec![omega.into(), fd_residual(&r.pair, baths, omega)?.into()]);
    }
    Ok(csv)
}

fn oracle_check(r: &Resolved) -> Result<Csv> {
    let frequency_domain = stationary_covariance(&r.pair, (&r.bath1, &r.bath2), &r.quad)?;
    let model = build_model(
        &r.pair,
        (&r.bath1, &r.bath2),
        r.oracle_modes,
        r.oracle_modes,
        r.oracle_omega_max,
    )?;
    let oracle = steady_system_covariance(&model, r.oracle_t_relax)?;
    let mut csv = Csv::new(&["row", "col", "frequency_domain", "oracle", "difference"]);
    for a in 0..4 {
        for b in a..4 {
            csv.push(vec![
                Field::Label(BASIS[a]),
                Field::Label(BASIS[b]),
                frequency_domain.c[a][b].into(),
                oracle.c[a][b].into(),
                (frequency_domain.c[a][b] - oracle.c[a][b]).into(),
            ]);
        }
    }
    Ok(csv)
}
