//! Reference values and dataset fixtures.
//!
//! True maxima of the synthetic objectives come from a dense grid search
//! followed by a Nelder–Mead polish clamped to the box. Dataset fixtures
//! are generated from fixed seeds so they can be regenerated bit-for-bit.

use std::path::Path;

use anyhow::Result;
use argmin::core::{CostFunction, Executor};
use argmin::solver::neldermead::NelderMead;
use boap_core::oracles::{FeatureSet, Problem, SyntheticKind, SyntheticObjective};
use boap_core::rng::stream;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

pub const SYNTHETIC: [SyntheticKind; 3] = [
    SyntheticKind::Benchmark1d,
    SyntheticKind::Rosenbrock3d,
    SyntheticKind::Griewank5d,
];

/// Grid points per dimension used for the committed reference file.
pub fn default_resolution(kind: SyntheticKind) -> usize {
    match kind {
        SyntheticKind::Benchmark1d => 100_001,
        SyntheticKind::Rosenbrock3d => 201,
        SyntheticKind::Griewank5d => 31,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrueMax {
    pub function: SyntheticKind,
    pub value: f64,
    pub argmax: Vec<f64>,
    pub grid_points_per_dim: usize,
    /// Best grid value before polishing.
    pub grid_value: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrueMaxFile {
    pub entry: Vec<TrueMax>,
}

impl TrueMaxFile {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(toml::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn get(&self, kind: SyntheticKind) -> Option<&TrueMax> {
        self.entry.iter().find(|e| e.function == kind)
    }
}

struct Negated<'a> {
    problem: &'a SyntheticObjective,
}

impl Negated<'_> {
    fn clamp(&self, x: &[f64]) -> Vec<f64> {
        let s = self.problem.space();
        x.iter()
            .enumerate()
            .map(|(i, v)| v.clamp(s.lower()[i], s.upper()[i]))
            .collect()
    }
}

impl CostFunction for Negated<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Self::Param) -> Result<f64, argmin::core::Error> {
        Ok(-self.problem.objective(&self.clamp(x))?)
    }
}

/// Dense grid with `points` per dimension, then a clamped polish.
pub fn true_max(kind: SyntheticKind, points: usize) -> Result<TrueMax> {
    let problem = SyntheticObjective::new(kind, FeatureSet::Accurate);
    let space = problem.space().clone();
    let d = kind.dim();
    let step: Vec<f64> = (0..d)
        .map(|i| (space.upper()[i] - space.lower()[i]) / (points - 1) as f64)
        .collect();
    let total = points.pow(d as u32);
    let mut best = (f64::NEG_INFINITY, vec![0.0; d]);
    let mut x = vec![0.0; d];
    for flat in 0..total {
        let mut rem = flat;
        for i in 0..d {
            x[i] = space.lower()[i] + (rem % points) as f64 * step[i];
            rem /= points;
        }
        let v = problem.objective(&x)?;
        if v > best.0 {
            best = (v, x.clone());
        }
    }
    let grid_value = best.0;

    let cost = Negated { problem: &problem };
    let mut simplex = vec![best.1.clone()];
    for i in 0..d {
        let mut v = best.1.clone();
        v[i] += if v[i] + step[i] <= space.upper()[i] {
            step[i]
        } else {
            -step[i]
        };
        simplex.push(v);
    }
    let solver = NelderMead::new(simplex).with_sd_tolerance(1e-14)?;
    let res = Executor::new(cost, solver).configure(|s| s.max_iters(2000)).run()?;
    if let Some(p) = res.state.best_param {
        let p = Negated { problem: &problem }.clamp(&p);
        let v = problem.objective(&p)?;
        if v > best.0 {
            best = (v, p);
        }
    }
    Ok(TrueMax {
        function: kind,
        // Adding zero turns a negated −0.0 into 0.0.
        value: best.0 + 0.0,
        argmax: best.1,
        grid_points_per_dim: points,
        grid_value: grid_value + 0.0,
    })
}

/// A generated delimited table plus its schema.
pub struct DatasetFixture {
    pub name: &'static str,
    pub csv: String,
    pub schema: String,
}

fn fmt_row(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>().join(",")
}

/// 100 rows in [0,1]⁴ with one planted best row. Both property columns
/// track the objective: closeness to the optimum and a noisy copy of it.
pub const PLANTED_ROW: usize = 37;

pub fn planted() -> DatasetFixture {
    let mut rng = stream(2024, "fixture-planted", 0);
    let optimum = [0.62, 0.31, 0.77, 0.45];
    let decoy = [0.15, 0.85, 0.2, 0.7];
    let mut csv = String::from("x1,x2,x3,x4,yield,closeness,quality\n");
    for row in 0..100 {
        let x: Vec<f64> = if row == PLANTED_ROW {
            optimum.to_vec()
        } else {
            loop {
                let x: Vec<f64> = (0..4).map(|_| (rng.gen::<f64>() * 1e4).round() / 1e4).collect();
                let d2: f64 = x.iter().zip(&optimum).map(|(a, b)| (a - b).powi(2)).sum();
                if d2 > 0.01 {
                    break x;
                }
            }
        };
        let d2: f64 = x.iter().zip(&optimum).map(|(a, b)| (a - b).powi(2)).sum();
        let e2: f64 = x.iter().zip(&decoy).map(|(a, b)| (a - b).powi(2)).sum();
        let y = (-d2 / (2.0 * 0.3f64.powi(2))).exp() + 0.5 * (-e2 / (2.0 * 0.15f64.powi(2))).exp();
        let closeness = -d2.sqrt() + 0.05 * rng.sample::<f64, _>(StandardNormal);
        let quality = y + 0.1 * rng.sample::<f64, _>(StandardNormal);
        csv.push_str(&fmt_row(&[x[0], x[1], x[2], x[3], y, closeness, quality]));
        csv.push('\n');
    }
    DatasetFixture {
        name: "planted",
        csv,
        schema: "design = [\"x1\", \"x2\", \"x3\", \"x4\"]\nobjective = \"yield\"\nproperties = [\"closeness\", \"quality\"]\n".into(),
    }
}

/// Eight process variables with active surface as the objective and
/// liquid-phase tortuosity and output porosity as properties. Every
/// setting appears twice, as repeated measurements to be averaged.
pub fn calendering() -> DatasetFixture {
    let names = [
        "pressure",
        "cbd_fraction",
        "initial_porosity",
        "am_fraction",
        "particle_size",
        "cbd_density",
        "thickness",
        "temperature",
    ];
    let mut rng = stream(2024, "fixture-calendering", 0);
    let mut csv = format!("{},active_surface,tau_liq,output_porosity\n", names.join(","));
    for _ in 0..60 {
        let x: Vec<f64> = (0..8).map(|_| (rng.gen::<f64>() * 100.0).round() / 100.0).collect();
        let porosity = (x[2] * 0.5 + 0.2) * (1.0 - 0.4 * x[0]);
        let tau = 1.0 + 2.0 / (porosity + 0.05) + 0.5 * x[1];
        for _ in 0..2 {
            let noise: f64 = rng.sample(StandardNormal);
            let active = 40.0 + 30.0 * porosity - 8.0 * x[1] - 4.0 * (x[4] - 0.5).powi(2) + 1.5 * x[3] + noise;
            let mut row = x.clone();
            row.extend([active, tau + 0.05 * noise, porosity + 0.002 * noise]);
            csv.push_str(&fmt_row(&row));
            csv.push('\n');
        }
    }
    DatasetFixture {
        name: "calendering",
        csv,
        schema: format!(
            "design = [{}]\nobjective = \"active_surface\"\nproperties = [\"tau_liq\", \"output_porosity\"]\n",
            names.iter().map(|n| format!("\"{n}\"")).collect::<Vec<_>>().join(", ")
        ),
    }
}

/// Ten process variables with cell endurance (D50/D5) as the objective and
/// anode thickness and active mass as properties. Semicolon-delimited.
pub fn manufacturing() -> DatasetFixture {
    let names = [
        "am_content",
        "binder_content",
        "carbon_content",
        "solid_content",
        "mixing_time",
        "coating_gap",
        "coating_speed",
        "drying_temp",
        "calendering_gap",
        "calendering_temp",
    ];
    let mut rng = stream(2024, "fixture-manufacturing", 0);
    let mut csv = format!("{};anode_thickness;active_mass;endurance\n", names.join(";"));
    for _ in 0..64 {
        let x: Vec<f64> = (0..10).map(|_| (rng.gen::<f64>() * 100.0).round() / 100.0).collect();
        let thickness = 40.0 + 60.0 * x[5] * (0.6 + 0.4 * x[3]) - 10.0 * x[8];
        let mass = thickness * (0.08 + 0.04 * x[0]);
        let endurance = (0.98 - 0.002 * (thickness - 60.0).abs() - 0.05 * (x[1] - 0.4).powi(2)
            + 0.01 * rng.sample::<f64, _>(StandardNormal))
        .clamp(0.0, 1.0);
        let mut row = x.clone();
        row.extend([thickness, mass, endurance]);
        csv.push_str(&fmt_row(&row).replace(',', ";"));
        csv.push('\n');
    }
    DatasetFixture {
        name: "manufacturing",
        csv,
        schema: format!(
            "design = [{}]\nobjective = \"endurance\"\nproperties = [\"anode_thickness\", \"active_mass\"]\ndelimiter = \";\"\n",
            names.iter().map(|n| format!("\"{n}\"")).collect::<Vec<_>>().join(", ")
        ),
    }
}

pub fn datasets() -> Vec<DatasetFixture> {
    vec![planted(), calendering(), manufacturing()]
}

/// Writes `true_max.toml` and every dataset fixture with its schema.
pub fn write_all(dir: &Path, with_true_max: bool) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    if with_true_max {
        let entry = SYNTHETIC
            .iter()
            .map(|&k| true_max(k, default_resolution(k)))
            .collect::<Result<Vec<_>>>()?;
        let text = format!(
            "# Maxima over the default boxes: dense grid, then Nelder-Mead polish.\n{}",
            toml::to_string(&TrueMaxFile { entry })?
        );
        std::fs::write(dir.join("true_max.toml"), text)?;
    }
    for f in datasets() {
        std::fs::write(dir.join(format!("{}.csv", f.name)), &f.csv)?;
        std::fs::write(dir.join(format!("{}.toml", f.name)), &f.schema)?;
    }
    Ok(())
}
