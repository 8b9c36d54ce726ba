//! Run configuration: defaults, an optional JSON config file, then flags.
//! Each layer overrides the previous one field by field.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use wavespin::{GridSpec, PotentialVariant, QuadratureSpec, Spin, StateIndex, VectorPotentialSpec, WellGeometry};

use crate::error::{CliError, CliResult};

/// Two comma-separated numbers, as in `--state 2,2` or `--well 10e-9,10e-9`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pair<T>(pub T, pub T);

impl<T: FromStr> FromStr for Pair<T>
where
    T::Err: fmt::Display,
{
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s.split_once(',').ok_or_else(|| format!("expected two comma-separated values, got '{s}'"))?;
        let a = a.trim().parse::<T>().map_err(|e| format!("'{a}': {e}"))?;
        let b = b.trim().parse::<T>().map_err(|e| format!("'{b}': {e}"))?;
        Ok(Pair(a, b))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sabotage {
    /// Halve N² before any computation.
    NSquared,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Quantum numbers NX,NY.
    #[arg(long, value_name = "NX,NY")]
    pub state: Option<Pair<i64>>,
    #[arg(long, value_name = "up|down")]
    pub spin: Option<SpinArg>,
    /// Well half-widths LX,LY in meters.
    #[arg(long, value_name = "LX,LY")]
    pub well: Option<Pair<f64>>,
    /// Sample counts NX,NY (field grid, or the patch-center grid for scan).
    #[arg(long, value_name = "NX,NY")]
    pub grid: Option<Pair<i64>>,
    /// Magnetic field in tesla.
    #[arg(long = "B", value_name = "TESLA", allow_negative_numbers = true)]
    pub b_field: Option<f64>,
    #[arg(long, value_name = "uniform|patch")]
    pub potential: Option<PotentialArg>,
    /// Patch center A,B in meters.
    #[arg(long, value_name = "A,B", allow_hyphen_values = true)]
    pub patch_center: Option<Pair<f64>>,
    /// Patch half-widths W,H in meters (default: half the well).
    #[arg(long, value_name = "W,H")]
    pub patch_half: Option<Pair<f64>>,
    /// Gauss-Legendre order per axis per sub-rectangle.
    #[arg(long, value_name = "ORDER")]
    pub quad: Option<i64>,
    /// Integrate only the part of a patch that lies inside the well.
    #[arg(long)]
    pub clip: bool,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', value_name = "csv,json,svg")]
    pub formats: Option<Vec<Format>>,
    /// JSON config file; flags override its fields.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Machine-readable output on stdout.
    #[arg(long)]
    pub json: bool,
    #[arg(long, hide = true)]
    pub sabotage: Option<Sabotage>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpinArg {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PotentialArg {
    Uniform,
    Patch,
}

/// The config file: every field optional, unknown fields rejected.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub state: Option<[i64; 2]>,
    pub spin: Option<Spin>,
    pub well: Option<[f64; 2]>,
    pub grid: Option<[i64; 2]>,
    pub quad: Option<QuadratureSpec>,
    pub b_field: Option<f64>,
    pub potential: Option<PotentialVariant>,
    pub patch_center: Option<[f64; 2]>,
    pub patch_half: Option<[f64; 2]>,
    pub clip: Option<bool>,
    pub output_dir: Option<PathBuf>,
    pub formats: Option<Vec<Format>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))
    }
}

/// Fully resolved configuration, echoed into every manifest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub state: StateIndex,
    pub well: WellGeometry,
    pub grid: GridSpec,
    pub quad: QuadratureSpec,
    pub b_field: f64,
    pub potential: VectorPotentialSpec,
    /// Patch geometry; also the template for `scan` whatever the variant.
    pub patch_center: [f64; 2],
    pub patch_half: [f64; 2],
    pub clip: bool,
    pub output_dir: Option<PathBuf>,
    pub formats: Vec<Format>,
}

impl RunConfig {
    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    /// The output directory, required by commands that always write files.
    pub fn out_dir(&self) -> PathBuf {
        self.output_dir.clone().unwrap_or_else(|| PathBuf::from("wavespin-out"))
    }
}

fn quantum(field: &str, v: i64) -> CliResult<u32> {
    u32::try_from(v)
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::Validation(format!("invalid {field}: quantum number must be >= 1, got {v}")))
}

fn samples(field: &str, v: i64) -> CliResult<usize> {
    usize::try_from(v)
        .ok()
        .filter(|&n| n >= 2)
        .ok_or_else(|| CliError::Validation(format!("invalid {field}: need at least 2 samples, got {v}")))
}

/// Merges defaults, the config file named by `--config` and the flags.
/// `default_grid` differs per command.
pub fn resolve(args: &CommonArgs, default_grid: (usize, usize)) -> CliResult<RunConfig> {
    let file = match &args.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };

    let [nx, ny] = args.state.map(|Pair(a, b)| [a, b]).or(file.state).unwrap_or([1, 1]);
    let spin = match args.spin {
        Some(SpinArg::Up) => Spin::Up,
        Some(SpinArg::Down) => Spin::Down,
        None => file.spin.unwrap_or(Spin::Up),
    };
    let state = StateIndex::new(quantum("nx", nx)?, quantum("ny", ny)?, spin)?;

    let [lx, ly] = args.well.map(|Pair(a, b)| [a, b]).or(file.well).unwrap_or([10e-9, 10e-9]);
    let well = WellGeometry::new(lx, ly)?;

    let [gx, gy] = args
        .grid
        .map(|Pair(a, b)| [a, b])
        .or(file.grid)
        .unwrap_or([default_grid.0 as i64, default_grid.1 as i64]);
    let grid = GridSpec::new(samples("samples_x", gx)?, samples("samples_y", gy)?, true)?;

    let mut quad = file.quad.unwrap_or_default();
    if let Some(order) = args.quad {
        let order = usize::try_from(order)
            .map_err(|_| CliError::Validation(format!("invalid quad: order must be positive, got {order}")))?;
        quad = QuadratureSpec::gauss_legendre(order)?;
    }
    quad.validate()?;

    let b_field = args.b_field.or(file.b_field).unwrap_or(1.0);
    let variant = match args.potential {
        Some(PotentialArg::Uniform) => PotentialVariant::Uniform,
        Some(PotentialArg::Patch) => PotentialVariant::Patch,
        None => file.potential.unwrap_or(PotentialVariant::Uniform),
    };
    let [a, b] = args.patch_center.map(|Pair(a, b)| [a, b]).or(file.patch_center).unwrap_or([0.0, 0.0]);
    let [w, h] = args
        .patch_half
        .map(|Pair(a, b)| [a, b])
        .or(file.patch_half)
        .unwrap_or([0.5 * well.lx, 0.5 * well.ly]);
    VectorPotentialSpec::patch(b_field, a, b, w, h).validate()?;
    let potential = match variant {
        PotentialVariant::Uniform => VectorPotentialSpec::uniform(b_field),
        PotentialVariant::Patch => VectorPotentialSpec::patch(b_field, a, b, w, h),
    };

    let clip = args.clip || file.clip.unwrap_or(false);
    let output_dir = args.out.clone().or(file.output_dir);
    let formats = args
        .formats
        .clone()
        .or(file.formats)
        .unwrap_or_else(|| vec![Format::Csv, Format::Json, Format::Svg]);
    if formats.is_empty() {
        return Err(CliError::Validation("invalid formats: at least one format is required".into()));
    }

    Ok(RunConfig {
        state,
        well,
        grid,
        quad,
        b_field,
        potential,
        patch_center: [a, b],
        patch_half: [w, h],
        clip,
        output_dir,
        formats,
    })
}
