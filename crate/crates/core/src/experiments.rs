//! Experiment sweeps behind the CLI: each runner produces rows of a fixed
//! CSV schema, with empty cells for columns that do not apply to the sweep.

use std::io::Write;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::model::{superposition_power_from_budget, ModelError, SystemConfig};
use crate::montecarlo::McSettings;
use crate::powalloc::{optimal_allocation, optimal_baseline_allocation};
use crate::rates::{self, RateError};

/// Stable column order of every emitted CSV.
pub const CSV_HEADER: &str = "experiment,rho_db,n_dyn,n_stat,m_tx,t_dyn,c_tau,c_delta,\
r_dyn_ps,se_dyn_ps,r_stat_ps,se_stat_ps,r_dyn_base,se_dyn_base,r_stat_coh,se_stat_coh,\
r_stat_ic,se_stat_ic";

/// Time-sharing points emitted per SNR by the region experiment.
pub const REGION_TDMA_POINTS: usize = 11;
/// Data-coefficient sweep points (over `[0, a)`) emitted per SNR by the
/// region experiment, in addition to the optimized corner point.
pub const REGION_FRONTIER_POINTS: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    RateVsSnr,
    AntennaSweep,
    CoherenceSweep,
    IcCompare,
    Region,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::RateVsSnr => "rate_vs_snr",
            Experiment::AntennaSweep => "antenna_sweep",
            Experiment::CoherenceSweep => "coherence_sweep",
            Experiment::IcCompare => "ic_compare",
            Experiment::Region => "region",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "rate_vs_snr" => Some(Experiment::RateVsSnr),
            "antenna_sweep" => Some(Experiment::AntennaSweep),
            "coherence_sweep" => Some(Experiment::CoherenceSweep),
            "ic_compare" => Some(Experiment::IcCompare),
            "region" => Some(Experiment::Region),
            _ => None,
        }
    }
}

/// One experiment request: which sweep, over which grid, at which Monte
/// Carlo settings.  Exactly one grid must be populated, matching the
/// experiment kind.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub experiment: Experiment,
    pub cfg: SystemConfig,
    /// Operating SNR (dB) for the sweeps that hold it fixed
    /// (antenna and coherence sweeps).
    pub snr_db: f64,
    pub snr_db_grid: Vec<f64>,
    pub n_static_grid: Vec<usize>,
    pub t_grid: Vec<usize>,
    pub mc: McSettings,
    pub output_path: PathBuf,
}

#[derive(Debug, Error)]
pub enum ExpError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Rate(#[from] RateError),
    #[error("invalid sweep spec: {0}")]
    InvalidSpec(String),
    #[error("failed writing {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), ExpError> {
        let snr = !self.snr_db_grid.is_empty();
        let ant = !self.n_static_grid.is_empty();
        let coh = !self.t_grid.is_empty();
        let want = match self.experiment {
            Experiment::RateVsSnr | Experiment::IcCompare | Experiment::Region => {
                (true, false, false)
            }
            Experiment::AntennaSweep => (false, true, false),
            Experiment::CoherenceSweep => (false, false, true),
        };
        if (snr, ant, coh) != want {
            return Err(ExpError::InvalidSpec(format!(
                "experiment {} requires exactly its own grid (snr_db_grid populated: {snr}, \
                 n_static_grid: {ant}, t_grid: {coh})",
                self.experiment.name()
            )));
        }
        if snr && !self.snr_db_grid.windows(2).all(|w| w[0] <= w[1]) {
            return Err(ExpError::InvalidSpec("snr_db_grid must be sorted".into()));
        }
        if ant && !self.n_static_grid.windows(2).all(|w| w[0] <= w[1]) {
            return Err(ExpError::InvalidSpec("n_static_grid must be sorted".into()));
        }
        if coh && !self.t_grid.windows(2).all(|w| w[0] <= w[1]) {
            return Err(ExpError::InvalidSpec("t_grid must be sorted".into()));
        }
        if self.experiment == Experiment::IcCompare && self.cfg.n_static < self.cfg.n_dynamic {
            return Err(ExpError::InvalidSpec(format!(
                "ic_compare needs n_static >= n_dynamic (got {} < {})",
                self.cfg.n_static, self.cfg.n_dynamic
            )));
        }
        self.mc.validate().map_err(RateError::from)?;
        Ok(())
    }
}

/// One CSV row; `None` renders as an empty cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub experiment: &'static str,
    pub rho_db: f64,
    pub n_dyn: usize,
    pub n_stat: usize,
    pub m_tx: usize,
    pub t_dyn: usize,
    pub c_tau: Option<f64>,
    pub c_delta: Option<f64>,
    pub r_dyn_ps: Option<f64>,
    pub se_dyn_ps: Option<f64>,
    pub r_stat_ps: Option<f64>,
    pub se_stat_ps: Option<f64>,
    pub r_dyn_base: Option<f64>,
    pub se_dyn_base: Option<f64>,
    pub r_stat_coh: Option<f64>,
    pub se_stat_coh: Option<f64>,
    pub r_stat_ic: Option<f64>,
    pub se_stat_ic: Option<f64>,
}

impl CsvRow {
    fn new(experiment: Experiment, rho_db: f64, cfg: &SystemConfig) -> Self {
        Self {
            experiment: experiment.name(),
            rho_db,
            n_dyn: cfg.n_dynamic,
            n_stat: cfg.n_static,
            m_tx: cfg.m_tx,
            t_dyn: cfg.t_coh_dynamic,
            c_tau: None,
            c_delta: None,
            r_dyn_ps: None,
            se_dyn_ps: None,
            r_stat_ps: None,
            se_stat_ps: None,
            r_dyn_base: None,
            se_dyn_base: None,
            r_stat_coh: None,
            se_stat_coh: None,
            r_stat_ic: None,
            se_stat_ic: None,
        }
    }

    fn to_line(&self) -> String {
        fn cell(v: Option<f64>) -> String {
            v.map(|x| x.to_string()).unwrap_or_default()
        }
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.experiment,
            self.rho_db,
            self.n_dyn,
            self.n_stat,
            self.m_tx,
            self.t_dyn,
            cell(self.c_tau),
            cell(self.c_delta),
            cell(self.r_dyn_ps),
            cell(self.se_dyn_ps),
            cell(self.r_stat_ps),
            cell(self.se_stat_ps),
            cell(self.r_dyn_base),
            cell(self.se_dyn_base),
            cell(self.r_stat_coh),
            cell(self.se_stat_coh),
            cell(self.r_stat_ic),
            cell(self.se_stat_ic),
        )
    }
}

/// Renders rows with the stable header; numbers keep full double precision.
pub fn rows_to_csv(rows: &[CsvRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_line());
        out.push('\n');
    }
    out
}

pub fn write_csv(rows: &[CsvRow], path: &Path) -> Result<(), ExpError> {
    let as_io = |source| ExpError::Io { path: path.display().to_string(), source };
    let mut file = std::fs::File::create(path).map_err(as_io)?;
    file.write_all(rows_to_csv(rows).as_bytes()).map_err(as_io)
}

/// Companion plot directives for a CSV: a generic grammar of column
/// references, one `line x=<col> y=<col>` per curve.
pub fn plot_script(experiment: Experiment, csv_path: &str) -> String {
    let mut out = format!("# data: {csv_path}\n# columns: {CSV_HEADER}\n");
    let curves: &[(&str, &str)] = match experiment {
        Experiment::RateVsSnr => &[
            ("rho_db", "r_dyn_ps"),
            ("rho_db", "r_stat_ps"),
            ("rho_db", "r_dyn_base"),
            ("rho_db", "r_stat_coh"),
        ],
        Experiment::AntennaSweep => {
            &[("n_stat", "r_stat_ps"), ("n_stat", "r_dyn_ps"), ("n_stat", "r_dyn_base")]
        }
        Experiment::CoherenceSweep => &[("t_dyn", "r_dyn_ps"), ("t_dyn", "r_stat_ps")],
        Experiment::IcCompare => &[("rho_db", "r_stat_ps"), ("rho_db", "r_stat_ic")],
        Experiment::Region => &[("r_dyn_base", "r_stat_coh"), ("r_dyn_ps", "r_stat_ps")],
    };
    for (x, y) in curves {
        out.push_str(&format!("line x={x} y={y}\n"));
    }
    out
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Runs the sweep the spec asks for.
pub fn run(spec: &SweepSpec) -> Result<Vec<CsvRow>, ExpError> {
    spec.validate()?;
    match spec.experiment {
        Experiment::RateVsSnr => run_rate_vs_snr(spec),
        Experiment::AntennaSweep => run_antenna_sweep(spec),
        Experiment::CoherenceSweep => run_coherence_sweep(spec),
        Experiment::IcCompare => run_ic_compare(spec),
        Experiment::Region => run_region(spec),
    }
}

/// Both users' rates against SNR at the rate-optimal allocation, next to the
/// TDMA baseline curves.
pub fn run_rate_vs_snr(spec: &SweepSpec) -> Result<Vec<CsvRow>, ExpError> {
    let cfg = spec.cfg;
    let mut rows = Vec::with_capacity(spec.snr_db_grid.len());
    for &db in &spec.snr_db_grid {
        let rho = db_to_linear(db);
        let alloc = optimal_allocation(&cfg, rho);
        let power = alloc.power(rho);
        let base = optimal_baseline_allocation(&cfg, rho);

        let r_dyn_ps = rates::rate_dynamic_ps(&cfg, &power, &spec.mc)?;
        let r_stat_ps = rates::rate_static_ps(&cfg, &power, &spec.mc)?;
        let r_dyn_base = rates::rate_dynamic_baseline(&cfg, &base, &spec.mc)?;
        let r_stat_coh = rates::rate_static_coherent(&cfg, rho, &spec.mc)?;

        let mut row = CsvRow::new(spec.experiment, db, &cfg);
        row.c_tau = Some(power.c_tau);
        row.c_delta = Some(power.c_delta);
        row.r_dyn_ps = Some(r_dyn_ps.mean);
        row.se_dyn_ps = Some(r_dyn_ps.std_error);
        row.r_stat_ps = Some(r_stat_ps.mean);
        row.se_stat_ps = Some(r_stat_ps.std_error);
        row.r_dyn_base = Some(r_dyn_base.mean);
        row.se_dyn_base = Some(r_dyn_base.std_error);
        row.r_stat_coh = Some(r_stat_coh.mean);
        row.se_stat_coh = Some(r_stat_coh.std_error);
        rows.push(row);
    }
    Ok(rows)
}

/// Rates against the static user's antenna count at fixed SNR (`M = N_s`
/// grows with the grid).
pub fn run_antenna_sweep(spec: &SweepSpec) -> Result<Vec<CsvRow>, ExpError> {
    let rho = db_to_linear(spec.snr_db);
    let mut rows = Vec::with_capacity(spec.n_static_grid.len());
    for &n_static in &spec.n_static_grid {
        let cfg = SystemConfig::new(spec.cfg.n_dynamic, n_static, spec.cfg.t_coh_dynamic)?;
        let alloc = optimal_allocation(&cfg, rho);
        let power = alloc.power(rho);
        let base = optimal_baseline_allocation(&cfg, rho);

        let r_dyn_ps = rates::rate_dynamic_ps(&cfg, &power, &spec.mc)?;
        let r_stat_ps = rates::rate_static_ps(&cfg, &power, &spec.mc)?;
        let r_dyn_base = rates::rate_dynamic_baseline(&cfg, &base, &spec.mc)?;

        let mut row = CsvRow::new(spec.experiment, spec.snr_db, &cfg);
        row.c_tau = Some(power.c_tau);
        row.c_delta = Some(power.c_delta);
        row.r_dyn_ps = Some(r_dyn_ps.mean);
        row.se_dyn_ps = Some(r_dyn_ps.std_error);
        row.r_stat_ps = Some(r_stat_ps.mean);
        row.se_stat_ps = Some(r_stat_ps.std_error);
        row.r_dyn_base = Some(r_dyn_base.mean);
        row.se_dyn_base = Some(r_dyn_base.std_error);
        rows.push(row);
    }
    Ok(rows)
}

/// Both superposition rates against the dynamic user's coherence time at
/// fixed SNR.
pub fn run_coherence_sweep(spec: &SweepSpec) -> Result<Vec<CsvRow>, ExpError> {
    let rho = db_to_linear(spec.snr_db);
    let mut rows = Vec::with_capacity(spec.t_grid.len());
    for &t in &spec.t_grid {
        let cfg = SystemConfig::new(spec.cfg.n_dynamic, spec.cfg.n_static, t)?;
        let alloc = optimal_allocation(&cfg, rho);
        let power = alloc.power(rho);

        let r_dyn_ps = rates::rate_dynamic_ps(&cfg, &power, &spec.mc)?;
        let r_stat_ps = rates::rate_static_ps(&cfg, &power, &spec.mc)?;

        let mut row = CsvRow::new(spec.experiment, spec.snr_db, &cfg);
        row.c_tau = Some(power.c_tau);
        row.c_delta = Some(power.c_delta);
        row.r_dyn_ps = Some(r_dyn_ps.mean);
        row.se_dyn_ps = Some(r_dyn_ps.std_error);
        row.r_stat_ps = Some(r_stat_ps.mean);
        row.se_stat_ps = Some(r_stat_ps.std_error);
        rows.push(row);
    }
    Ok(rows)
}

/// Static rate with and without interference cancellation against SNR.
pub fn run_ic_compare(spec: &SweepSpec) -> Result<Vec<CsvRow>, ExpError> {
    let cfg = spec.cfg;
    let mut rows = Vec::with_capacity(spec.snr_db_grid.len());
    for &db in &spec.snr_db_grid {
        let rho = db_to_linear(db);
        let alloc = optimal_allocation(&cfg, rho);
        let power = alloc.power(rho);

        let r_stat_ps = rates::rate_static_ps(&cfg, &power, &spec.mc)?;
        let r_stat_ic = rates::rate_static_ic(&cfg, &power, &spec.mc)?;

        let mut row = CsvRow::new(spec.experiment, db, &cfg);
        row.c_tau = Some(power.c_tau);
        row.c_delta = Some(power.c_delta);
        row.r_stat_ps = Some(r_stat_ps.mean);
        row.se_stat_ps = Some(r_stat_ps.std_error);
        row.r_stat_ic = Some(r_stat_ic.mean);
        row.se_stat_ic = Some(r_stat_ic.std_error);
        rows.push(row);
    }
    Ok(rows)
}

/// Rate-region cut at each SNR: the TDMA time-sharing segment (in the
/// baseline columns), a frontier swept over `c_delta` in `[0, a)`, and the
/// rate-optimal superposition corner as the final row (in the superposition
/// columns).
pub fn run_region(spec: &SweepSpec) -> Result<Vec<CsvRow>, ExpError> {
    let cfg = spec.cfg;
    let mut rows = Vec::new();
    for &db in &spec.snr_db_grid {
        let rho = db_to_linear(db);

        let base = optimal_baseline_allocation(&cfg, rho);
        let r_dyn_base = rates::rate_dynamic_baseline(&cfg, &base, &spec.mc)?;
        let r_stat_coh = rates::rate_static_coherent(&cfg, rho, &spec.mc)?;
        for point in rates::tdma_region(&r_dyn_base, &r_stat_coh, REGION_TDMA_POINTS) {
            let mut row = CsvRow::new(spec.experiment, db, &cfg);
            row.r_dyn_base = Some(point.r_dynamic);
            row.r_stat_coh = Some(point.r_static);
            rows.push(row);
        }

        let alloc = optimal_allocation(&cfg, rho);
        for k in 0..REGION_FRONTIER_POINTS {
            let c_delta = alloc.a * k as f64 / REGION_FRONTIER_POINTS as f64;
            let power = superposition_power_from_budget(&cfg, rho, c_delta)?;
            let r_dyn = rates::rate_dynamic_ps(&cfg, &power, &spec.mc)?;
            let r_stat = rates::rate_static_ps(&cfg, &power, &spec.mc)?;
            let mut row = CsvRow::new(spec.experiment, db, &cfg);
            row.c_tau = Some(power.c_tau);
            row.c_delta = Some(power.c_delta);
            row.r_dyn_ps = Some(r_dyn.mean);
            row.se_dyn_ps = Some(r_dyn.std_error);
            row.r_stat_ps = Some(r_stat.mean);
            row.se_stat_ps = Some(r_stat.std_error);
            rows.push(row);
        }

        let power = alloc.power(rho);
        let r_dyn = rates::rate_dynamic_ps(&cfg, &power, &spec.mc)?;
        let r_stat = rates::rate_static_ps(&cfg, &power, &spec.mc)?;
        let mut row = CsvRow::new(spec.experiment, db, &cfg);
        row.c_tau = Some(power.c_tau);
        row.c_delta = Some(power.c_delta);
        row.r_dyn_ps = Some(r_dyn.mean);
        row.se_dyn_ps = Some(r_dyn.std_error);
        row.r_stat_ps = Some(r_stat.mean);
        row.se_stat_ps = Some(r_stat.std_error);
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_spec(experiment: Experiment) -> SweepSpec {
        SweepSpec {
            experiment,
            cfg: SystemConfig::new(2, 4, 5).unwrap(),
            snr_db: 10.0,
            snr_db_grid: vec![],
            n_static_grid: vec![],
            t_grid: vec![],
            mc: McSettings::new(2_000, 1234),
            output_path: PathBuf::from("out.csv"),
        }
    }

    #[test]
    fn spec_requires_exactly_one_matching_grid() {
        let mut s = base_spec(Experiment::RateVsSnr);
        assert!(s.validate().is_err());
        s.snr_db_grid = vec![0.0, 10.0];
        s.validate().unwrap();
        s.t_grid = vec![5];
        assert!(s.validate().is_err());

        let mut s = base_spec(Experiment::AntennaSweep);
        s.n_static_grid = vec![4, 2];
        assert!(s.validate().is_err(), "unsorted grid must be rejected");
        s.n_static_grid = vec![2, 4];
        s.validate().unwrap();

        let mut s = base_spec(Experiment::IcCompare);
        s.snr_db_grid = vec![10.0];
        s.cfg = SystemConfig::new(4, 2, 8).unwrap();
        assert!(s.validate().is_err(), "ic_compare needs N_s >= N_d");
    }

    #[test]
    fn rate_vs_snr_emits_one_finite_row_per_snr() {
        let mut s = base_spec(Experiment::RateVsSnr);
        s.snr_db_grid = (0..11).map(|k| -20.0 + 5.0 * k as f64).collect();
        s.mc = McSettings::new(400, 9);
        let rows = run(&s).unwrap();
        assert_eq!(rows.len(), 11);
        for row in &rows {
            for v in [
                row.c_tau,
                row.c_delta,
                row.r_dyn_ps,
                row.se_dyn_ps,
                row.r_stat_ps,
                row.se_stat_ps,
                row.r_dyn_base,
                row.se_dyn_base,
                row.r_stat_coh,
                row.se_stat_coh,
            ] {
                assert!(v.unwrap().is_finite());
            }
            assert!(row.r_stat_ic.is_none());
        }
        // static rate comes at negligible dynamic cost
        for row in &rows {
            if row.rho_db >= 0.0 {
                assert!(row.r_stat_ps.unwrap() > 0.0);
                let gap = (row.r_dyn_base.unwrap() - row.r_dyn_ps.unwrap()).abs();
                assert!(gap / row.r_dyn_base.unwrap() < 0.1, "gap {gap} at {} dB", row.rho_db);
            }
        }
    }

    #[test]
    fn antenna_sweep_single_entry_grid() {
        let mut s = base_spec(Experiment::AntennaSweep);
        s.n_static_grid = vec![4];
        s.mc = McSettings::new(400, 3);
        let rows = run(&s).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].n_stat, 4);
        assert_eq!(rows[0].m_tx, 4);
    }

    #[test]
    fn coherence_sweep_handles_the_boundary_geometry() {
        let mut s = base_spec(Experiment::CoherenceSweep);
        s.t_grid = vec![4, 5, 8];
        s.mc = McSettings::new(400, 3);
        let rows = run(&s).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].t_dyn, 4); // T_d = 2 N_d row produced without error
        assert!(rows[0].r_dyn_ps.unwrap().is_finite());
    }

    #[test]
    fn ic_compare_gain_is_nonnegative() {
        let mut s = base_spec(Experiment::IcCompare);
        s.snr_db_grid = vec![0.0, 10.0];
        s.mc = McSettings::new(2_000, 77);
        let rows = run(&s).unwrap();
        for row in &rows {
            let ps = row.r_stat_ps.unwrap();
            let ic = row.r_stat_ic.unwrap();
            let se = (row.se_stat_ps.unwrap().powi(2) + row.se_stat_ic.unwrap().powi(2)).sqrt();
            assert!(ic >= ps - 3.0 * se, "IC below plain static rate at {} dB", row.rho_db);
        }
    }

    #[test]
    fn region_rows_partition_into_tdma_frontier_and_corner() {
        let mut s = base_spec(Experiment::Region);
        s.snr_db_grid = vec![10.0];
        s.mc = McSettings::new(2_000, 5);
        let rows = run(&s).unwrap();
        assert_eq!(rows.len(), REGION_TDMA_POINTS + REGION_FRONTIER_POINTS + 1);

        let tdma: Vec<_> = rows.iter().filter(|r| r.r_dyn_base.is_some()).collect();
        assert_eq!(tdma.len(), REGION_TDMA_POINTS);
        // endpoints: p=0 gives (0, R_s), p=1 gives (R_d, 0)
        assert_eq!(tdma[0].r_dyn_base.unwrap(), 0.0);
        assert_eq!(tdma[REGION_TDMA_POINTS - 1].r_stat_coh.unwrap(), 0.0);

        // frontier starts at c_delta = 0 where the dynamic rate is exactly 0
        let frontier: Vec<_> = rows.iter().filter(|r| r.r_dyn_ps.is_some()).collect();
        assert_eq!(frontier.len(), REGION_FRONTIER_POINTS + 1);
        assert_eq!(frontier[0].c_delta.unwrap(), 0.0);
        assert_eq!(frontier[0].r_dyn_ps.unwrap(), 0.0);
        assert!(frontier[0].r_stat_ps.unwrap() > 0.0);

        // the corner point dominates the TDMA segment: R_d*/R_d + R_s*/R_s > 1
        let corner = rows.last().unwrap();
        let r_d_full = tdma[REGION_TDMA_POINTS - 1].r_dyn_base.unwrap();
        let r_s_full = tdma[0].r_stat_coh.unwrap();
        let sum = corner.r_dyn_ps.unwrap() / r_d_full + corner.r_stat_ps.unwrap() / r_s_full;
        assert!(sum > 1.0, "corner not outside the TDMA segment: {sum}");
    }

    #[test]
    fn csv_rendering_uses_the_stable_header_and_empty_cells() {
        let cfg = SystemConfig::new(2, 4, 5).unwrap();
        let mut row = CsvRow::new(Experiment::IcCompare, 10.0, &cfg);
        row.r_stat_ps = Some(1.5);
        let text = rows_to_csv(&[row]);
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        let line = lines.next().unwrap();
        assert_eq!(line, "ic_compare,10,2,4,4,5,,,,,1.5,,,,,,,");
        assert_eq!(line.split(',').count(), CSV_HEADER.split(',').count());
    }

    #[test]
    fn plot_script_references_columns_only() {
        let script = plot_script(Experiment::RateVsSnr, "out.csv");
        assert!(script.contains("line x=rho_db y=r_dyn_ps"));
        assert!(script.contains("# data: out.csv"));
    }

    /// Fixed-seed golden file: the byte-exact CSV of a small sweep.
    /// Regenerate with PRODSUP_UPDATE_GOLDEN=1 after an intentional change.
    #[test]
    fn golden_csv_is_stable() {
        let mut s = base_spec(Experiment::RateVsSnr);
        s.snr_db_grid = vec![0.0, 10.0];
        s.mc = McSettings::new(500, 20240707);
        let rows = run(&s).unwrap();
        let text = rows_to_csv(&rows);
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/golden_rate_vs_snr.csv");
        if std::env::var_os("PRODSUP_UPDATE_GOLDEN").is_some() {
            std::fs::write(path, &text).unwrap();
        }
        let golden = std::fs::read_to_string(path).unwrap();
        assert_eq!(text, golden, "CSV output drifted from the golden file");
    }
}
