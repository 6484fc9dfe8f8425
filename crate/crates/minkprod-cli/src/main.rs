use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use minkprod::geom::{CScalar, ConvexBody};
use minkprod::membership::{pad_bbox, product_bbox, raster_product_seeded, RasterGrid};
use minkprod::numrange::{numerical_range_boundary, product_numerical_range};
use minkprod::polyprod::{check_star_polygon_product, multi_product_star_center, Candidates};
use minkprod::segconvex::star_center_seg_convex;
use minkprod::segseg::{product_seg_seg, StarCenterSet};
use minkprod_cli::output::{boundary_samples, read_csv, write_csv, write_file, Svg};
use minkprod_cli::scene::{load_matrix, read, Scene};
use minkprod_cli::verify::{self, Settings, SCENARIOS};
use minkprod_cli::CliError;

/// Minkowski products of planar convex sets.
#[derive(Parser)]
#[command(name = "minkprod", version)]
struct Cli {
    /// Membership tolerance.
    #[arg(long, global = true, default_value_t = 1e-7)]
    tol: f64,
    /// Raster resolution per side.
    #[arg(long, global = true, default_value_t = 1024)]
    grid: usize,
    /// Boundary samples for center checks and CSV output.
    #[arg(long, global = true, default_value_t = 720)]
    samples: usize,
    /// Raster sampling jitter; 0 is the regular lattice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw and sample the product of two sets of a scene.
    Product {
        scene: PathBuf,
        id1: String,
        id2: String,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        pgm: Option<PathBuf>,
        /// Also look for a star center.
        #[arg(long)]
        star: bool,
    },
    /// Run a reference scenario, or `all`.
    Verify { scenario: String },
    /// Numerical range of a matrix, optionally times a second one.
    Numrange {
        matrix: PathBuf,
        #[arg(long, default_value_t = 360)]
        angles: usize,
        #[arg(long)]
        product: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        pgm: Option<PathBuf>,
    },
    /// Read a CSV of points and write it back in canonical form.
    Recsv { input: PathBuf, output: PathBuf },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("MINKPROD_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| CliError::Input(format!("MINKPROD_THREADS={v:?} is not a count")))?;
    // A pool that already exists keeps its size.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn star_report(k1: &ConvexBody, k2: &ConvexBody) -> Result<String, CliError> {
    let r = match (k1, k2) {
        (ConvexBody::Segment(s1), ConvexBody::Segment(s2)) => {
            let region = product_seg_seg(s1, s2);
            let centers = match &region.star_centers {
                StarCenterSet::Empty => "none".to_string(),
                StarCenterSet::All => "every point".to_string(),
                StarCenterSet::Point(p) => format!("{p:.9}"),
                StarCenterSet::Seg(s) => format!("segment {:.9} -> {:.9}", s.p, s.q),
                StarCenterSet::Convex(q) => {
                    format!("hull of {}", q.vertices().iter().map(|v| format!("{v:.9}")).collect::<Vec<_>>().join(", "))
                }
            };
            let complete = if region.centers_complete { "" } else { " (at least)" };
            return Ok(format!("case {:?}, star centers{complete}: {centers}", region.case_tag));
        }
        (ConvexBody::Segment(s), k) | (k, ConvexBody::Segment(s)) => star_center_seg_convex(s, k)?,
        (ConvexBody::Polygon(p1), ConvexBody::Polygon(p2)) => check_star_polygon_product(p1, p2, &Candidates::Auto)?,
        _ => multi_product_star_center(&[k1.clone(), k2.clone()])?,
    };
    let mut line = format!("{:?}", r.verdict);
    if let Some(p) = r.center {
        line += &format!(", center {p:.9}");
    }
    if let Some(w) = r.witness {
        line += &format!(", segment {:.6} -> {:.6} leaves at t = {:.4}", w.from, w.to, w.t);
    }
    Ok(line)
}

fn write_outputs(
    svg: Option<(&Path, Svg)>,
    csv: Option<(&Path, &[CScalar])>,
    pgm: Option<(&Path, &RasterGrid)>,
) -> Result<(), CliError> {
    if let Some((path, doc)) = svg {
        write_file(path, doc.finish().as_bytes())?;
    }
    if let Some((path, pts)) = csv {
        write_file(path, write_csv(pts).as_bytes())?;
    }
    if let Some((path, g)) = pgm {
        write_file(path, &g.to_pgm())?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    if !cli.tol.is_finite() || cli.tol <= 0.0 || cli.grid == 0 || cli.samples == 0 {
        return Err(CliError::Input("--tol, --grid and --samples must be positive".into()));
    }
    match &cli.command {
        Command::Product { scene, id1, id2, svg, csv, pgm, star } => {
            let scene = Scene::load(scene)?;
            let k1 = scene.body(id1, cli.samples)?;
            let k2 = scene.body(id2, cli.samples)?;
            if *star {
                println!("{}", star_report(&k1, &k2)?);
            }
            let exact = matches!((&k1, &k2), (ConvexBody::Segment(_), ConvexBody::Segment(_)));
            let grid = (pgm.is_some() || (svg.is_some() && !exact))
                .then(|| raster_product_seeded(&k1, &k2, cli.grid, cli.grid, cli.seed));
            let doc = svg.as_ref().map(|_| {
                let mut doc = Svg::new(product_bbox(&k1, &k2));
                match (&k1, &k2, &grid) {
                    (ConvexBody::Segment(s1), ConvexBody::Segment(s2), _) => {
                        let pts: Vec<CScalar> = product_seg_seg(s1, s2)
                            .boundary
                            .iter()
                            .flat_map(|p| (0..64).map(move |j| p.at(j as f64 / 63.0)))
                            .collect();
                        doc.path(&pts, true, "black");
                    }
                    (_, _, Some(g)) => doc.raster(g, "#9ab"),
                    _ => {}
                }
                doc.body_outline(&k1, "#c33");
                doc.body_outline(&k2, "#36c");
                doc
            });
            let pts = csv.as_ref().map(|_| boundary_samples(&k1, &k2, cli.samples, cli.grid, cli.seed));
            write_outputs(
                svg.as_deref().zip(doc),
                csv.as_deref().zip(pts.as_deref()),
                pgm.as_deref().zip(grid.as_ref()),
            )
        }
        Command::Verify { scenario } => {
            let settings = Settings { tol: cli.tol, grid: cli.grid, samples: cli.samples, seed: cli.seed };
            let ids: Vec<&str> = if scenario == "all" { SCENARIOS.to_vec() } else { vec![scenario.as_str()] };
            let mut failed = 0;
            for id in ids {
                for ch in verify::run(id, &settings)? {
                    let tag = if ch.pass { "PASS" } else { "FAIL" };
                    println!("[{tag}] {id}: {}: measured {}, expected {}", ch.label, ch.measured, ch.expected);
                    failed += usize::from(!ch.pass);
                }
            }
            if failed > 0 {
                return Err(CliError::Verify(format!("{failed} check(s) failed")));
            }
            Ok(())
        }
        Command::Numrange { matrix, angles, product, svg, csv, pgm } => {
            let a = load_matrix(matrix)?;
            let range = numerical_range_boundary(&a, *angles)?;
            let body = ConvexBody::Polygon(range.clone());
            let (doc, grid) = match product {
                Some(path) => {
                    let b = load_matrix(path)?;
                    let p = product_numerical_range(&a, &b, *angles)?;
                    let (ka, kb) = p.factors();
                    let g = raster_product_seeded(&ka, &kb, cli.grid, cli.grid, cli.seed);
                    let mut doc = Svg::new(product_bbox(&ka, &kb));
                    doc.raster(&g, "#9ab");
                    doc.body_outline(&ka, "#c33");
                    doc.body_outline(&kb, "#36c");
                    (doc, Some(g))
                }
                None => {
                    let (mut x0, mut x1, mut y0, mut y1) =
                        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
                    for v in range.vertices() {
                        (x0, x1, y0, y1) = (x0.min(v.re), x1.max(v.re), y0.min(v.im), y1.max(v.im));
                    }
                    let mut doc = Svg::new(pad_bbox((x0, x1, y0, y1)));
                    doc.body_outline(&body, "#c33");
                    (doc, None)
                }
            };
            if pgm.is_some() && grid.is_none() {
                return Err(CliError::Input("--pgm needs --product".into()));
            }
            write_outputs(
                svg.as_deref().map(|p| (p, doc)),
                csv.as_deref().map(|p| (p, range.vertices())),
                pgm.as_deref().zip(grid.as_ref()),
            )
        }
        Command::Recsv { input, output } => {
            let pts = read_csv(&read(input)?)?;
            write_file(output, write_csv(&pts).as_bytes())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
