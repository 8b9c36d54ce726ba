use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use wavespin::constants::VINTAGE;
use wavespin::density::{sample_field, DEFAULT_EPSILON_RHO};
use wavespin::interaction::{energy_shift, scan_patch, zeeman_splitting, InteractionResult, ZeemanResult};
use wavespin::{derive_params, DerivedStateParams, FieldKind, PhysicalConstants, Quantity, VectorPotentialSpec};

use crate::check::{render, run_checks, CheckReport};
use crate::config::{resolve, CommonArgs, Format, RunConfig, Sabotage};
use crate::error::{CliError, CliResult};
use crate::output::{to_json, Manifest, OutputDir, Table};
use crate::svg::{heatmap, quiver, Layout};

#[derive(Debug, Parser)]
#[command(name = "wavespin", version, about = "Dirac wave-spin states of an electron in a 2D infinite well")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the derived parameters of a state.
    Info(CommonArgs),
    /// Sample a density on a grid and write CSV/JSON/SVG.
    Field {
        which: Which,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Up/down splitting in a uniform field, plus the shift in the
    /// configured potential.
    Zeeman(CommonArgs),
    /// Energy shift of a patch potential over a grid of patch centers.
    Scan(CommonArgs),
    /// Run the invariant suite; exit 1 if any check fails.
    Check(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Charge,
    Current,
    Momentum,
    Velocity,
}

impl Which {
    fn quantity(self) -> Quantity {
        match self {
            Which::Charge => Quantity::Charge,
            Which::Current => Quantity::Current,
            Which::Momentum => Quantity::Momentum,
            Which::Velocity => Quantity::Velocity {
                epsilon_rho: DEFAULT_EPSILON_RHO,
            },
        }
    }

    fn columns(self) -> &'static [&'static str] {
        match self {
            Which::Charge => &["rho_over_e"],
            Which::Current => &["jx_over_ec", "jy_over_ec"],
            Which::Momentum => &["gx", "gy"],
            Which::Velocity => &["vx_over_c", "vy_over_c"],
        }
    }
}

const FIELD_GRID: (usize, usize) = (129, 129);
const SCAN_GRID: (usize, usize) = (9, 9);

/// Output of a command: text for stdout.
pub type Outcome = String;

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let consts = PhysicalConstants::codata2018();
    match &cli.command {
        Command::Info(a) => info(a, &consts),
        Command::Field { which, common } => field(*which, common, &consts),
        Command::Zeeman(a) => zeeman(a, &consts),
        Command::Scan(a) => scan(a, &consts),
        Command::Check(a) => check(a, &consts),
    }
}

fn params_for(cfg: &RunConfig, args: &CommonArgs, consts: &PhysicalConstants) -> CliResult<DerivedStateParams> {
    let mut p = derive_params(cfg.state, cfg.well, consts)?;
    if args.sabotage == Some(Sabotage::NSquared) {
        p.n_squared *= 0.5;
    }
    Ok(p)
}

#[derive(Debug, Serialize)]
struct Derived {
    nx: u32,
    ny: u32,
    kx_per_m: f64,
    ky_per_m: f64,
    eta_x: f64,
    eta_y: f64,
    eta: f64,
    gamma: f64,
    energy_j: f64,
    energy_ev: f64,
    kinetic_j: f64,
    kinetic_ev: f64,
    n_squared: f64,
    lower_ratio_a: f64,
    lower_ratio_b: f64,
}

fn derived(cfg: &RunConfig, p: &DerivedStateParams, consts: &PhysicalConstants) -> Derived {
    let (a, b) = p.lower_ratios();
    Derived {
        nx: cfg.state.nx,
        ny: cfg.state.ny,
        kx_per_m: p.kx,
        ky_per_m: p.ky,
        eta_x: p.eta_x,
        eta_y: p.eta_y,
        eta: p.eta,
        gamma: p.gamma(),
        energy_j: p.energy,
        energy_ev: consts.joules_to_ev(p.energy),
        kinetic_j: p.kinetic_energy(),
        kinetic_ev: consts.joules_to_ev(p.kinetic_energy()),
        n_squared: p.n_squared,
        lower_ratio_a: a,
        lower_ratio_b: b,
    }
}

fn manifest(command: &str, cfg: &RunConfig, p: &DerivedStateParams, consts: &PhysicalConstants, start: Instant) -> Manifest {
    Manifest {
        tool: "wavespin".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.into(),
        config: serde_json::to_value(cfg).expect("serializable"),
        derived: serde_json::to_value(derived(cfg, p, consts)).expect("serializable"),
        constants_vintage: VINTAGE.into(),
        duration_s: start.elapsed().as_secs_f64(),
        files: Vec::new(),
    }
}

/// Writes `name.json` plus a manifest when an output directory was given.
fn write_optional<T: Serialize>(
    command: &str,
    cfg: &RunConfig,
    p: &DerivedStateParams,
    consts: &PhysicalConstants,
    start: Instant,
    value: &T,
) -> CliResult<()> {
    if let Some(dir) = &cfg.output_dir {
        let mut out = OutputDir::create(dir)?;
        if cfg.wants(Format::Json) {
            out.write_json(&format!("{command}.json"), value)?;
        }
        out.finish(manifest(command, cfg, p, consts, start))?;
    }
    Ok(())
}

fn info(args: &CommonArgs, consts: &PhysicalConstants) -> CliResult<Outcome> {
    let start = Instant::now();
    let cfg = resolve(args, FIELD_GRID)?;
    let p = params_for(&cfg, args, consts)?;
    let d = derived(&cfg, &p, consts);
    write_optional("info", &cfg, &p, consts, start, &d)?;
    Ok(to_json(&d))
}

fn field(which: Which, args: &CommonArgs, consts: &PhysicalConstants) -> CliResult<Outcome> {
    let start = Instant::now();
    let cfg = resolve(args, FIELD_GRID)?;
    let p = params_for(&cfg, args, consts)?;
    let grid = sample_field(&p, cfg.state, &cfg.well, &cfg.grid, which.quantity())?;
    let points = grid.points();
    let name = grid.label.clone();

    let mut out = OutputDir::create(&cfg.out_dir())?;
    if cfg.wants(Format::Csv) {
        let mut t = Table::new(["x_m", "y_m"].iter().chain(which.columns()).copied());
        for (i, q) in points.iter().enumerate() {
            let mut row = vec![Some(q.x), Some(q.y)];
            let defined = grid.is_defined(i);
            row.extend(grid.value(i).iter().map(|v| defined.then_some(*v)));
            t.rows.push(row);
        }
        out.write(&format!("{name}.csv"), t.to_csv().as_bytes())?;
    }
    let undefined = (0..cfg.grid.len()).filter(|&i| !grid.is_defined(i)).count();
    let summary = json!({
        "quantity": name,
        "columns": which.columns(),
        "grid": cfg.grid,
        "max_magnitude": grid.max_magnitude(),
        "undefined_samples": undefined,
    });
    if cfg.wants(Format::Json) {
        out.write_json(&format!("{name}.json"), &summary)?;
    }
    if cfg.wants(Format::Svg) {
        let xs = cfg.grid.xs(&cfg.well);
        let ys = cfg.grid.ys(&cfg.well);
        let title = format!("{name}, state ({},{}) {}", cfg.state.nx, cfg.state.ny, cfg.state.spin);
        let layout = Layout {
            title: &title,
            xs: &xs,
            ys: &ys,
        };
        let svg = match grid.kind {
            FieldKind::Scalar => {
                let v: Vec<Option<f64>> = (0..cfg.grid.len()).map(|i| grid.is_defined(i).then(|| grid.value(i)[0])).collect();
                heatmap(&layout, &v, which.columns()[0])
            }
            FieldKind::Vector2 => {
                let v: Vec<Option<[f64; 2]>> = (0..cfg.grid.len())
                    .map(|i| grid.is_defined(i).then(|| [grid.value(i)[0], grid.value(i)[1]]))
                    .collect();
                quiver(&layout, &v, &format!("|{name}|"))
            }
        };
        out.write(&format!("{name}.svg"), svg.as_bytes())?;
    }
    let dir = out.dir.clone();
    out.finish(manifest(&format!("field {name}"), &cfg, &p, consts, start))?;
    Ok(if args.json {
        to_json(&summary)
    } else {
        format!("wrote {name} ({} samples) to {}\n", cfg.grid.len(), dir.display())
    })
}

#[derive(Debug, Serialize)]
struct ZeemanReport {
    b_field: f64,
    shift_up_mu_b_units: f64,
    shift_down_mu_b_units: f64,
    shift_up_ev: f64,
    shift_down_ev: f64,
    splitting_mu_b_units: f64,
    splitting_ev: f64,
    est_error: f64,
    /// Shift of the configured state in the configured potential.
    potential: VectorPotentialSpec,
    potential_shift_mu_b_units: f64,
}

impl ZeemanReport {
    fn new(z: &ZeemanResult, potential: &InteractionResult) -> Self {
        ZeemanReport {
            b_field: z.shift_up.potential.b_field,
            shift_up_mu_b_units: z.shift_up.shift_mu_b_units,
            shift_down_mu_b_units: z.shift_down.shift_mu_b_units,
            shift_up_ev: z.shift_up.shift_ev,
            shift_down_ev: z.shift_down.shift_ev,
            splitting_mu_b_units: z.delta_mu_b_units,
            splitting_ev: z.delta_ev,
            est_error: z.shift_up.est_error.max(z.shift_down.est_error),
            potential: potential.potential,
            potential_shift_mu_b_units: potential.shift_mu_b_units,
        }
    }
}

fn zeeman(args: &CommonArgs, consts: &PhysicalConstants) -> CliResult<Outcome> {
    let start = Instant::now();
    let cfg = resolve(args, FIELD_GRID)?;
    let p = params_for(&cfg, args, consts)?;
    let z = zeeman_splitting(&p, cfg.state, &cfg.well, cfg.b_field, &cfg.quad, consts)?;
    let own = energy_shift(&p, cfg.state, &cfg.well, &cfg.potential, &cfg.quad, consts)?;
    let report = ZeemanReport::new(&z, &own);
    write_optional("zeeman", &cfg, &p, consts, start, &report)?;
    Ok(to_json(&report))
}

fn scan(args: &CommonArgs, consts: &PhysicalConstants) -> CliResult<Outcome> {
    let start = Instant::now();
    let cfg = resolve(args, SCAN_GRID)?;
    let p = params_for(&cfg, args, consts)?;
    let [w, h] = cfg.patch_half;
    let template = VectorPotentialSpec::patch(cfg.b_field, 0.0, 0.0, w, h);
    let result = scan_patch(&p, cfg.state, &cfg.well, &template, &cfg.grid, &cfg.quad, cfg.clip, consts)?;

    let mut out = OutputDir::create(&cfg.out_dir())?;
    if cfg.wants(Format::Csv) {
        let mut t = Table::new(["a_m", "b_m", "shift_mu_b_units"]);
        for (j, &b) in result.b_values.iter().enumerate() {
            for (i, &a) in result.a_values.iter().enumerate() {
                t.rows.push(vec![Some(a), Some(b), Some(result.at(i, j))]);
            }
        }
        out.write("scan.csv", t.to_csv().as_bytes())?;
    }
    let summary = json!({
        "grid": cfg.grid,
        "half_widths_m": [template.half_w_x, template.half_w_y],
        "clip": cfg.clip,
        "min_shift_mu_b_units": result.shifts.iter().copied().fold(f64::INFINITY, f64::min),
        "max_shift_mu_b_units": result.shifts.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        "max_est_error": result.max_est_error,
    });
    if cfg.wants(Format::Json) {
        out.write_json("scan.json", &summary)?;
    }
    if cfg.wants(Format::Svg) {
        let title = format!("patch scan, state ({},{}) {}", cfg.state.nx, cfg.state.ny, cfg.state.spin);
        let layout = Layout {
            title: &title,
            xs: &result.a_values,
            ys: &result.b_values,
        };
        let v: Vec<Option<f64>> = result.shifts.iter().map(|&s| Some(s)).collect();
        out.write("scan.svg", heatmap(&layout, &v, "shift / muB B").as_bytes())?;
    }
    let dir = out.dir.clone();
    out.finish(manifest("scan", &cfg, &p, consts, start))?;
    Ok(if args.json {
        to_json(&summary)
    } else {
        format!("wrote {}x{} scan to {}\n", cfg.grid.samples_x, cfg.grid.samples_y, dir.display())
    })
}

fn check(args: &CommonArgs, consts: &PhysicalConstants) -> CliResult<Outcome> {
    let start = Instant::now();
    let cfg = resolve(args, FIELD_GRID)?;
    let p = params_for(&cfg, args, consts)?;
    let report: CheckReport = run_checks(&p, cfg.state, &cfg.well, &cfg.quad, consts)?;
    write_optional("check", &cfg, &p, consts, start, &report)?;
    let text = if args.json { to_json(&report) } else { render(&report) };
    match report.failures() {
        0 => Ok(text),
        n => {
            print!("{text}");
            Err(CliError::CheckFailed(n))
        }
    }
}
