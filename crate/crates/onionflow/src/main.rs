//! Command-line entry point for the peeling and flow experiments.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use onionflow::acsf::{run_with_area_checkpoints, sample_region_boundary, StepParams};
use onionflow::harness::{compare_matrix, quadrant_experiment, thread_cap};
use onionflow::peel::{rasterize, square_grid};
use onionflow::quadrant::QuadrantProfile;
use onionflow::region::{parse_regions, resolve_region};
use onionflow::report::{
    comparison_csv, curve_snapshots_csv, layer_csv, profile_dump, quadrant_report_csv,
    quadrant_trace_csv, SvgPlot,
};
use onionflow::{Region, Result};

#[derive(Parser)]
#[command(
    name = "onionflow",
    about = "Grid peeling (convex-layer decomposition) and affine curve-shortening flow experiments",
    version
)]
struct Cli {
    /// Seed for randomized helpers; the experiment pipelines themselves are
    /// deterministic and ignore it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Peel the m x m grid and report the number of convex layers.
    PeelSquare {
        /// Grid side length.
        #[arg(long)]
        m: u32,
        /// Output directory for layers.csv and layers.svg.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Draw every k-th layer in the SVG (0 = automatic).
        #[arg(long, default_value_t = 0)]
        svg_every: u32,
    },
    /// Rasterize a region at density n and peel it completely.
    PeelShape {
        /// Region name: a built-in (r1..r5, square, triangle, half-disk,
        /// disk) or a section of --regions-file.
        #[arg(long)]
        region: String,
        #[arg(long)]
        regions_file: Option<PathBuf>,
        /// Grid density: lattice spacing 1/n.
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        svg_every: u32,
    },
    /// Peel the quarter-infinite grid for n iterations.
    PeelQuadrant {
        /// Iteration count.
        #[arg(long)]
        n: u64,
        /// Hyperbola-fit tolerance; repeatable.
        #[arg(long)]
        alpha: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the curve-shortening flow on a region boundary.
    Acsf {
        #[arg(long)]
        region: String,
        #[arg(long)]
        regions_file: Option<PathBuf>,
        /// Number of boundary samples.
        #[arg(long, default_value_t = 1024)]
        samples: usize,
        #[arg(long, default_value_t = 0.02)]
        c_step: f64,
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        /// Stop when the enclosed area reaches this fraction of the start.
        #[arg(long, default_value_t = 0.75)]
        stop_area_fraction: f64,
        /// For disk regions, override the radius.
        #[arg(long)]
        r0: Option<f64>,
        /// Number of intermediate snapshots (evenly spaced in area).
        #[arg(long, default_value_t = 8)]
        snapshots: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare peeling against the flow over a set of grid densities.
    Compare {
        #[arg(long)]
        region: String,
        #[arg(long)]
        regions_file: Option<PathBuf>,
        /// Grid density; repeatable.
        #[arg(long, required = true)]
        n: Vec<u32>,
        /// Comma-separated stopping fractions.
        #[arg(long, default_value = "0.95,0.9,0.85,0.8,0.75")]
        fractions: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hyperbola-fit report for quadrant peeling.
    QuadrantReport {
        /// Iteration checkpoint; repeatable.
        #[arg(long, required = true)]
        n: Vec<u64>,
        /// Fit tolerance; repeatable (default 0.1 0.03 0.01).
        #[arg(long)]
        alpha: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_fractions(raw: &str) -> Result<Vec<f64>> {
    raw.split(',')
        .map(|s| {
            s.trim().parse::<f64>().map_err(|_| {
                onionflow::Error::InvalidParameter(format!("bad fraction '{s}' in --fractions"))
            })
        })
        .collect()
}

fn load_regions_file(path: Option<&PathBuf>) -> Result<Option<BTreeMap<String, Region>>> {
    match path {
        None => Ok(None),
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            Ok(Some(parse_regions(&text)?))
        }
    }
}

fn write_out(dir: &Path, name: &str, contents: &str) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn layer_svg(records: &[onionflow::LayerRecord], every: u32) -> String {
    let every = if every == 0 {
        (records.len() as u32 / 40).max(1)
    } else {
        every
    };
    let mut plot = SvgPlot::new();
    for (i, rec) in records.iter().enumerate() {
        if (i as u32).is_multiple_of(every) {
            plot.add_chain(&rec.vertices, i / every as usize);
        }
    }
    plot.render()
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::PeelSquare { m, out, svg_every } => {
            println!(
                "config: peel-square m={m} svg-every={svg_every} seed={}",
                cli.seed
            );
            let set = square_grid(m)?;
            let records = set.peel_all()?;
            println!(
                "grid {m}x{m}: {} points, {} layers",
                set.point_count(),
                records.len()
            );
            if let Some(dir) = out {
                write_out(&dir, "layers.csv", &layer_csv(&records))?;
                write_out(&dir, "layers.svg", &layer_svg(&records, svg_every))?;
            }
        }
        Command::PeelShape {
            region,
            regions_file,
            n,
            out,
            svg_every,
        } => {
            println!(
                "config: peel-shape region={region} n={n} regions-file={} svg-every={svg_every} seed={}",
                regions_file.as_deref().map(Path::display).map_or("none".into(), |d| d.to_string()),
                cli.seed
            );
            let file_regions = load_regions_file(regions_file.as_ref())?;
            let r = resolve_region(&region, file_regions.as_ref())?;
            let set = rasterize(&r, n)?;
            if set.is_empty() {
                println!("region {region} at n={n}: no grid points");
                return Ok(());
            }
            let records = set.peel_all()?;
            println!(
                "region {region} ({}) at n={n}: {} points, {} layers",
                r.kind_name(),
                set.point_count(),
                records.len()
            );
            if let Some(dir) = out {
                write_out(&dir, "layers.csv", &layer_csv(&records))?;
                write_out(&dir, "layers.svg", &layer_svg(&records, svg_every))?;
            }
        }
        Command::PeelQuadrant { n, alpha, out } => {
            let alphas = if alpha.is_empty() { vec![0.1] } else { alpha };
            println!(
                "config: peel-quadrant n={n} alphas={alphas:?} seed={}",
                cli.seed
            );
            let profile = QuadrantProfile::run(n)?;
            println!(
                "quadrant after {n} iterations: s(n)={} K_n={:.3} last-layer={}",
                profile.total_removed(),
                profile.k_n(),
                profile.layer_sizes().last().copied().unwrap_or(0)
            );
            if let Some(dir) = out {
                write_out(&dir, "quadrant.csv", &quadrant_trace_csv(n, &alphas)?)?;
                write_out(&dir, "profile.txt", &profile_dump(&profile))?;
            }
        }
        Command::Acsf {
            region,
            regions_file,
            samples,
            c_step,
            lambda,
            stop_area_fraction,
            r0,
            snapshots,
            out,
        } => {
            println!(
                "config: acsf region={region} samples={samples} c-step={c_step} lambda={lambda} \
                 stop-area-fraction={stop_area_fraction} r0={r0:?} snapshots={snapshots} seed={}",
                cli.seed
            );
            let file_regions = load_regions_file(regions_file.as_ref())?;
            let mut r = resolve_region(&region, file_regions.as_ref())?;
            if let Some(radius) = r0 {
                if let Region::Disk { center, .. } = r {
                    r = Region::Disk {
                        center,
                        diameter: 2.0 * radius,
                    };
                } else {
                    return Err(onionflow::Error::InvalidParameter(
                        "--r0 only applies to disk regions".into(),
                    ));
                }
            }
            let curve = sample_region_boundary(&r, samples)?;
            let params = StepParams::new(c_step, lambda)?;
            // checkpoints evenly spaced in area down to the target
            let k = snapshots.max(1);
            let fractions: Vec<f64> = (1..=k)
                .map(|i| 1.0 - (1.0 - stop_area_fraction) * i as f64 / k as f64)
                .collect();
            let checkpoints = run_with_area_checkpoints(curve.clone(), &fractions, &params)?;
            let (t_final, _) = checkpoints.last().expect("at least one checkpoint");
            println!("flow time to area fraction {stop_area_fraction}: t = {t_final}");
            if let Region::Disk { diameter, .. } = r {
                let closed = onionflow::acsf::circle_time_to_area_fraction(
                    diameter / 2.0,
                    stop_area_fraction,
                );
                println!("closed-form circle time: {closed}");
            }
            if let Some(dir) = out {
                let mut all = vec![(0.0, curve)];
                all.extend(checkpoints);
                write_out(&dir, "flow.csv", &curve_snapshots_csv(&all))?;
                let mut plot = SvgPlot::new();
                for (i, (_, c)) in all.iter().enumerate() {
                    plot.add_loop(c.points(), i);
                }
                write_out(&dir, "flow.svg", &plot.render())?;
            }
        }
        Command::Compare {
            region,
            regions_file,
            n,
            fractions,
            out,
        } => {
            let fracs = parse_fractions(&fractions)?;
            println!(
                "config: compare region={region} n={n:?} fractions={fracs:?} threads<={} seed={}",
                thread_cap(),
                cli.seed
            );
            let file_regions = load_regions_file(regions_file.as_ref())?;
            let r = resolve_region(&region, file_regions.as_ref())?;
            let records = compare_matrix(&r, &region, &n, &fracs)?;
            for rec in &records {
                println!(
                    "n={} fraction={}: m={} t={:.6} hausdorff={:.6} c={:.3}",
                    rec.n, rec.fraction, rec.m_layers, rec.t_flow, rec.hausdorff, rec.c_est
                );
            }
            if let Some(dir) = out {
                write_out(&dir, "compare.csv", &comparison_csv(&records))?;
                // overlay of both curve families per n
                let flow = onionflow::harness::acsf_reference_checkpoints(&r, &fracs)?;
                for &density in n.iter() {
                    let mut plot = SvgPlot::new();
                    let set = rasterize(&r, density)?;
                    let mut current = set;
                    let initial = current.point_count();
                    let mut sorted = fracs.clone();
                    sorted.sort_by(|a, b| b.total_cmp(a));
                    for (i, (fraction, (_, chain))) in sorted.iter().zip(&flow).enumerate() {
                        while current.point_count() as f64 > fraction * initial as f64 {
                            current = current.peel_step()?.0;
                        }
                        let pts: Vec<onionflow::FloatPoint> = current
                            .hull_chain()?
                            .vertices()
                            .iter()
                            .map(|p| {
                                onionflow::FloatPoint::new(
                                    p.x as f64 / density as f64,
                                    p.y as f64 / density as f64,
                                )
                            })
                            .collect();
                        plot.add_loop(&pts, i);
                        plot.add_chain(chain, i);
                    }
                    write_out(&dir, &format!("overlay_n{density}.svg"), &plot.render())?;
                }
            }
        }
        Command::QuadrantReport { n, alpha, out } => {
            let alphas = if alpha.is_empty() {
                vec![0.1, 0.03, 0.01]
            } else {
                alpha
            };
            println!(
                "config: quadrant-report n={n:?} alphas={alphas:?} seed={}",
                cli.seed
            );
            let rows = quadrant_experiment(&n, &alphas)?;
            for row in &rows {
                println!(
                    "n={} alpha={}: K_n={:.2} x_alpha={} ratio={:.3} c={:.3}",
                    row.n, row.alpha, row.k_n, row.x_alpha, row.ratio, row.c_est
                );
            }
            if let Some(dir) = out {
                write_out(&dir, "quadrant_report.csv", &quadrant_report_csv(&rows))?;
            }
        }
    }
    Ok(())
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders help/version through the same path; keep exit
            // code 0 for those and 2 for usage errors
            e.exit();
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
