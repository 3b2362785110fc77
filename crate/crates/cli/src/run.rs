//! The four run modes.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use landau_wave::h_fourier::{quadrature_l2_norm, sample_field, samples_from_rows};
use landau_wave::harness::{gaussian_bump, project_field};
use landau_wave::io::{
    read_field_samples_csv, write_coefficients_csv, write_field_csv, write_grid_csv, write_solution_csv,
    write_study_csv, write_trajectories_csv, CoefficientDocument, Provenance, SolutionSummary,
};
use landau_wave::{
    basis_eval, constant_stability_study, decay_diagnostic, enumerate_modes, forward_transform, gram_matrix,
    grid_for_table, inverse_transform, plancherel_norm, solve_cauchy, verify_estimate, CauchyProblem, Complex64,
    FieldStrength, HamiltonianOracle, ModeTable, QuadratureGrid, SpectralCoefficients,
};

use crate::config::{DataSpec, ScenarioConfig};
use crate::diagnostic::Diagnostic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    BasisCheck,
    Transform,
    Solve,
    EstimateStudy,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::BasisCheck => "basis-check",
            Mode::Transform => "transform",
            Mode::Solve => "solve",
            Mode::EstimateStudy => "estimate-study",
        }
    }
}

/// Uniform `nx × ny` grid on `[-extent, extent]²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnapshotGrid {
    pub nx: usize,
    pub ny: usize,
    pub extent: f64,
}

impl SnapshotGrid {
    pub fn parse(raw: &str) -> Result<Self, String> {
        let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!("expected nx,ny,extent, got `{raw}`"));
        }
        let nx: usize = parts[0]
            .parse()
            .map_err(|_| format!("nx `{}` is not a count", parts[0]))?;
        let ny: usize = parts[1]
            .parse()
            .map_err(|_| format!("ny `{}` is not a count", parts[1]))?;
        let extent: f64 = parts[2]
            .parse()
            .map_err(|_| format!("extent `{}` is not a number", parts[2]))?;
        if nx < 1 || ny < 1 || !(extent.is_finite() && extent > 0.0) {
            return Err(format!("snapshot grid needs nx, ny >= 1 and extent > 0, got `{raw}`"));
        }
        Ok(Self { nx, ny, extent })
    }

    fn points(&self) -> Vec<(f64, f64)> {
        let coord = |i: usize, n: usize| {
            if n == 1 {
                0.0
            } else {
                -self.extent + 2.0 * self.extent * i as f64 / (n - 1) as f64
            }
        };
        (0..self.ny)
            .flat_map(|j| (0..self.nx).map(move |i| (coord(i, self.nx), coord(j, self.ny))))
            .collect()
    }
}

pub struct RunContext<'a> {
    pub config: &'a ScenarioConfig,
    pub out_dir: &'a Path,
    pub provenance: Provenance,
    pub snapshot_grid: Option<SnapshotGrid>,
}

impl RunContext<'_> {
    fn create(&self, name: &str) -> Result<BufWriter<File>, Diagnostic> {
        let path = self.out_dir.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let f = File::create(&path).map_err(|e| Diagnostic::io(format!("cannot create {}: {e}", path.display())))?;
        Ok(BufWriter::new(f))
    }

    fn write_json(&self, name: &str, value: &Value) -> Result<PathBuf, Diagnostic> {
        let mut w = self.create(name)?;
        serde_json::to_writer_pretty(&mut w, value).map_err(|e| Diagnostic::io(e.to_string()))?;
        writeln!(w)?;
        w.flush()?;
        Ok(self.out_dir.join(name))
    }

    fn table(&self, level_cap: usize, angular_cap: usize) -> Result<Arc<ModeTable<f64>>, Diagnostic> {
        let field = FieldStrength::new(self.config.field)?;
        Ok(Arc::new(enumerate_modes(level_cap, angular_cap, field)?))
    }
}

fn coefficients(
    spec: &DataSpec,
    table: &Arc<ModeTable<f64>>,
    key: &str,
) -> Result<SpectralCoefficients<f64>, Diagnostic> {
    let out = match spec {
        DataSpec::Zero => Ok(SpectralCoefficients::zeros(table.clone())),
        DataSpec::Modes(entries) => SpectralCoefficients::from_entries(table.clone(), entries),
        DataSpec::Gaussian { x0, y0, width } => project_field(gaussian_bump(*x0, *y0, *width), table),
    };
    out.map_err(|e| Diagnostic::from(e).with_key(key))
}

fn provenance_json(p: &Provenance) -> Value {
    serde_json::to_value(p).expect("string map")
}

pub fn run(mode: Mode, ctx: &RunContext<'_>) -> Result<Value, Diagnostic> {
    fs::create_dir_all(ctx.out_dir)
        .map_err(|e| Diagnostic::io(format!("cannot create {}: {e}", ctx.out_dir.display())))?;
    match mode {
        Mode::BasisCheck => basis_check(ctx),
        Mode::Transform => transform(ctx),
        Mode::Solve => solve(ctx),
        Mode::EstimateStudy => estimate_study(ctx),
    }
}

fn basis_check(ctx: &RunContext<'_>) -> Result<Value, Diagnostic> {
    let cfg = ctx.config;
    let table = ctx.table(cfg.level_cap, cfg.angular_cap)?;
    let grid = grid_for_table(&table)?;
    let gram = gram_matrix(&table, &grid)?;

    let field = table.field();
    let radius = 4.0 / cfg.field.sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let points: Vec<(f64, f64)> = (0..cfg.points)
        .map(|_| {
            let r = radius * rng.gen::<f64>().sqrt();
            let th = rng.gen_range(0.0..std::f64::consts::TAU);
            (r * th.cos(), r * th.sin())
        })
        .collect();
    let per_mode: Vec<f64> = table
        .modes()
        .par_iter()
        .map(|m| {
            let oracle = HamiltonianOracle::new(m.index, field);
            points
                .iter()
                .map(|&p| {
                    let e = basis_eval(m.index, p, field);
                    (oracle.apply(p) - e * m.eigenvalue).norm() / (1.0 + e.norm())
                })
                .fold(0.0, f64::max)
        })
        .collect();
    let eigen = per_mode.iter().cloned().fold(0.0, f64::max);

    let report = json!({
        "mode": "basis-check",
        "modes": table.len(),
        "radial_order": grid.radial_order(),
        "angular_count": grid.angular_count(),
        "gram_max_off_diagonal": gram.max_off_diagonal(),
        "gram_max_diagonal_deviation": gram.max_diagonal_deviation(),
        "eigenrelation_points": cfg.points,
        "eigenrelation_max_residual": eigen,
        "config": provenance_json(&ctx.provenance),
    });
    ctx.write_json("basis_check.json", &report)?;
    Ok(report)
}

fn transform_input(ctx: &RunContext<'_>, grid: &QuadratureGrid<f64>) -> Result<Vec<Complex64>, Diagnostic> {
    let cfg = ctx.config;
    match (&cfg.field_samples, &cfg.input) {
        (Some(_), Some(_)) => Err(Diagnostic::usage("set either `field` or `field_samples`, not both".into())),
        (None, None) => Err(Diagnostic::usage(
            "transform needs `field` (zero | modes:... | gaussian:...) or `field_samples` (x,y,re,im CSV on grid.csv points)"
                .into(),
        )),
        (Some(path), None) => {
            let f = File::open(path)
                .map_err(|e| Diagnostic::io(format!("cannot read {}: {e}", path.display())).with_key("field_samples"))?;
            let rows = read_field_samples_csv::<f64, _>(f).map_err(|e| Diagnostic::from(e).with_key("field_samples"))?;
            samples_from_rows(&rows, grid, 1e-12).map_err(|e| Diagnostic::from(e).with_key("field_samples"))
        }
        (None, Some(DataSpec::Gaussian { x0, y0, width })) => Ok(sample_field(gaussian_bump(*x0, *y0, *width), grid)),
        (None, Some(spec)) => {
            let table = ctx.table(cfg.level_cap, cfg.angular_cap)?;
            let c = coefficients(spec, &table, "field")?;
            Ok(inverse_transform(&c, grid.points()))
        }
    }
}

fn transform(ctx: &RunContext<'_>) -> Result<Value, Diagnostic> {
    let cfg = ctx.config;
    let table = ctx.table(cfg.level_cap, cfg.angular_cap)?;
    let grid = grid_for_table(&table)?;
    write_grid_csv(ctx.create("grid.csv")?, &grid, &ctx.provenance)?;
    let samples = transform_input(ctx, &grid)?;
    let coeffs = forward_transform(&samples, &grid, &table)?;
    let back = inverse_transform(&coeffs, grid.points());
    let diff: Vec<Complex64> = back.iter().zip(&samples).map(|(a, b)| a - b).collect();
    let norm = quadrature_l2_norm(&samples, &grid);
    let residual = quadrature_l2_norm(&diff, &grid);
    let relative = if norm > 0.0 { residual / norm } else { residual };

    write_coefficients_csv(ctx.create("coefficients.csv")?, &coeffs, &ctx.provenance)?;
    let doc = CoefficientDocument::from_coefficients(&coeffs, &ctx.provenance);
    let doc_value = serde_json::to_value(&doc).map_err(|e| Diagnostic::io(e.to_string()))?;
    ctx.write_json("coefficients.json", &doc_value)?;

    let decay = match decay_diagnostic(&coeffs) {
        Ok(fit) => json!({ "slope": fit.slope, "max_residual": fit.max_residual, "levels_used": fit.levels_used }),
        Err(e) => json!({ "unavailable": e.to_string() }),
    };
    let report = json!({
        "mode": "transform",
        "modes": table.len(),
        "grid_points": grid.len(),
        "round_trip_relative_l2": relative,
        "round_trip_max_pointwise": diff.iter().map(|d| d.norm()).fold(0.0, f64::max),
        "plancherel_norm": plancherel_norm(&coeffs),
        "quadrature_l2_norm": norm,
        "decay": decay,
        "config": provenance_json(&ctx.provenance),
    });
    ctx.write_json("transform.json", &report)?;
    Ok(report)
}

fn problem_for(ctx: &RunContext<'_>, table: &Arc<ModeTable<f64>>) -> Result<CauchyProblem<f64>, Diagnostic> {
    let cfg = ctx.config;
    let u0 = coefficients(&cfg.u0, table, "u0")?;
    let u1 = coefficients(&cfg.u1, table, "u1")?;
    Ok(CauchyProblem::new(
        u0,
        u1,
        cfg.profile.clone(),
        cfg.s,
        cfg.output_times.clone(),
    )?)
}

fn solve(ctx: &RunContext<'_>) -> Result<Value, Diagnostic> {
    let cfg = ctx.config;
    let table = ctx.table(cfg.level_cap, cfg.angular_cap)?;
    let problem = problem_for(ctx, &table)?;
    let record = solve_cauchy(&problem, cfg.dt)?;
    let report = verify_estimate(&record);

    write_solution_csv(ctx.create("solution.csv")?, &record, &ctx.provenance)?;
    write_trajectories_csv(ctx.create("trajectories.csv")?, &record, &ctx.provenance)?;
    let summary = SolutionSummary::new(&record, &report, &ctx.provenance);
    let mut value = serde_json::to_value(&summary).map_err(|e| Diagnostic::io(e.to_string()))?;
    value["mode"] = json!("solve");

    if let Some(sg) = ctx.snapshot_grid {
        let points = sg.points();
        for (k, snap) in record.snapshots.iter().enumerate() {
            let values = inverse_transform(&snap.u, &points);
            let mut prov = ctx.provenance.clone();
            prov.insert("snapshot_t".into(), format!("{:?}", snap.t));
            prov.insert("snapshot_grid".into(), format!("{},{},{:?}", sg.nx, sg.ny, sg.extent));
            write_field_csv(ctx.create(&format!("snapshots/u_{k:04}.csv"))?, &points, &values, &prov)?;
        }
        value["snapshots"] = json!(record.snapshots.len());
    }
    ctx.write_json("summary.json", &value)?;
    Ok(value)
}

fn estimate_study(ctx: &RunContext<'_>) -> Result<Value, Diagnostic> {
    let cfg = ctx.config;
    if matches!(cfg.u0, DataSpec::Zero) && matches!(cfg.u1, DataSpec::Zero) {
        return Err(Diagnostic::usage(
            "estimate-study needs nonzero closed-form data in u0 or u1".into(),
        ));
    }
    let rows = constant_stability_study(&cfg.truncations, cfg.dt, |n| {
        let table = ctx.table(n, n).map_err(|d| landau_wave::Error::Usage(d.message))?;
        problem_for(ctx, &table).map_err(|d| landau_wave::Error::Usage(d.message))
    })?;
    write_study_csv(ctx.create("study.csv")?, &rows, &ctx.provenance)?;
    let sups: Vec<f64> = rows.iter().map(|r| r.sup_ratio).collect();
    let lo = sups.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = sups.iter().cloned().fold(0.0, f64::max);
    let table: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "level_cap": r.level_cap,
                "modes": r.modes,
                "sup_ratio": r.sup_ratio,
                "certificate": r.certificate,
                "passed": r.passed,
            })
        })
        .collect();
    let report = json!({
        "mode": "estimate-study",
        "rows": table,
        "relative_spread": if lo > 0.0 { (hi - lo) / lo } else { 0.0 },
        "config": provenance_json(&ctx.provenance),
    });
    ctx.write_json("study.json", &report)?;
    Ok(report)
}
