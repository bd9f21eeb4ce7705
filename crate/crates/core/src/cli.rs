//! Command-line interface. Every subcommand writes one JSON report (or CSV
//! plot data) to the output stream and returns exit status 0 iff all
//! residuals pass.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::decomposable;
use crate::report::Report;
use crate::sampling;
use crate::simplex_opt;
use crate::tetra::CenteredTetrahedron;
use crate::tiling;
use crate::wm_min::{self, FacetMeasure};
use crate::zonotope::{volume_f, WeightPair, Zonotope};

#[derive(Debug, Parser)]
#[command(name = "mosaic", version, about = "Edge densities of parallelohedra and decomposable mosaics")]
pub struct Cli {
    /// Seed for all randomized routines.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minima of w_m per parallelohedron type and the optimal type.
    Wm {
        #[arg(long)]
        alpha6: f64,
        #[arg(long)]
        alpha4: f64,
        /// Report a single type 1..=5.
        #[arg(long = "type")]
        type_index: Option<u8>,
        /// Also sample this many random type (4) bodies.
        #[arg(long)]
        sweep: Option<usize>,
    },
    /// Minimum edge density bound of decomposable mosaics in dimension n.
    Decomp {
        #[arg(long)]
        dim: usize,
        /// Check against a grid search with this many points per axis.
        #[arg(long)]
        oracle: Option<usize>,
        /// Emit CSV `e_hat,bound` along the symmetric line with this many rows.
        #[arg(long)]
        curve: Option<usize>,
        /// Also run the monotonicity and convexity sign checks.
        #[arg(long)]
        certificates: bool,
    },
    /// Skeleton density of the lattice tiling generated by a shape.
    Tile {
        /// cube | hexprism | rhombic | elongated | truncocta | file:<json>
        #[arg(long)]
        shape: String,
        #[arg(long, default_value_t = 20.0)]
        radius: f64,
        /// Comma-separated ascending radii; overrides --radius.
        #[arg(long, value_delimiter = ',')]
        series: Option<Vec<f64>>,
        /// Allowed relative error at the largest radius.
        #[arg(long, default_value_t = 0.02)]
        tolerance: f64,
        #[arg(long, default_value_t = tiling::COVERING_SAMPLES)]
        covering_samples: usize,
        /// Emit CSV rows `radius,cells,skeleton_length,weighted_length,density,target,relative_error`.
        #[arg(long)]
        csv: bool,
    },
    /// Numerical verification suites.
    Verify {
        #[arg(long, value_enum, default_value_t = Lemma::All)]
        lemma: Lemma,
        #[arg(long, default_value_t = 2.0)]
        lambda: f64,
        #[arg(long, default_value_t = 60)]
        grid: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Ball radius of the tiling suite.
        #[arg(long, default_value_t = 20.0)]
        radius: f64,
    },
    /// CSV `type,value,bound,shape` of the per-type minima.
    Table1 {
        #[arg(long, default_value_t = 1.0)]
        alpha6: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha4: f64,
    },
    /// CSV `alpha4,w1,w2,w4,w5` at alpha6 = 1 for alpha4 in (0, max].
    Fig2 {
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long, default_value_t = 1.0)]
        max: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Lemma {
    Tetra,
    Simplex,
    Isotropy,
    Tiling,
    Volume,
    All,
}

enum Output {
    Report(Report),
    Csv(String),
}

type CliResult = Result<Output, String>;

/// Parses `argv` (program name first), runs the command and returns the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok(Output::Report(r)) => {
            let _ = writeln!(out, "{}", r.to_json());
            if r.pass {
                0
            } else {
                for f in r.residuals.iter().filter(|x| !x.pass) {
                    let _ = writeln!(err, "failed: {} = {:e} (tolerance {:e})", f.name, f.value, f.tolerance);
                }
                1
            }
        }
        Ok(Output::Csv(s)) => {
            let _ = out.write_all(s.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn weights(alpha6: f64, alpha4: f64) -> Result<WeightPair, String> {
    WeightPair::try_new(alpha6, alpha4).ok_or_else(|| format!("weights must be positive (got {alpha6}, {alpha4})"))
}

fn execute(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Wm { alpha6, alpha4, type_index, sweep } => wm(*alpha6, *alpha4, *type_index, *sweep, cli.seed),
        Command::Decomp { dim, oracle, curve, certificates } => decomp(*dim, *oracle, *curve, *certificates),
        Command::Tile { shape, radius, series, tolerance, covering_samples, csv } => {
            let radii = series.clone().unwrap_or_else(|| vec![*radius]);
            tile(shape, &radii, *tolerance, *covering_samples, *csv, cli.seed)
        }
        Command::Verify { lemma, lambda, grid, samples, radius } => {
            verify(*lemma, *lambda, *grid, *samples, *radius, cli.seed).map(Output::Report)
        }
        Command::Table1 { alpha6, alpha4 } => Ok(Output::Csv(wm_min::table1_csv(&weights(*alpha6, *alpha4)?))),
        Command::Fig2 { step, max } => {
            if !(*step > 0.0 && *max >= *step) {
                return Err("need 0 < step <= max".into());
            }
            Ok(Output::Csv(wm_min::fig2_csv(*step, *max)))
        }
    }
}

fn wm(alpha6: f64, alpha4: f64, type_index: Option<u8>, sweep: Option<usize>, seed: u64) -> CliResult {
    let m = weights(alpha6, alpha4)?;
    let mut r = Report::new("wm");
    r.input("alpha6", alpha6).input("alpha4", alpha4).input("seed", seed);
    let types: Vec<u8> = match type_index {
        Some(i) => vec![i],
        None => (1..=5).collect(),
    };
    let mut per_type = Vec::new();
    for i in types {
        let t = wm_min::type_minimum(i, &m).map_err(|e| e.to_string())?;
        if let Some(shape) = t.optimal_shape {
            let z = shape.build().map_err(|e| e.to_string())?;
            let w = wm_min::normalized_functional(&z, &m).map_err(|e| e.to_string())?;
            r.at_most(&format!("type{i}_shape_vs_closed_form"), (w - t.value).abs() / t.value, 1e-9);
        }
        per_type.push(t);
    }
    let answer = wm_min::classify_optimal(&m);
    r.output("per_type", &per_type)
        .output("winner", answer.winner)
        .output("value", answer.value)
        .output(
            "thresholds",
            json!({
                "cube_prism": wm_min::cube_prism_threshold(),
                "prism_octa": wm_min::prism_octa_threshold(),
                "ratio": alpha4 / alpha6,
            }),
        );
    if let Some(n) = sweep {
        let s = wm_min::type4_sweep(&m, n, seed);
        r.output("sweep", s);
        r.check("type4_sweep_margin", s.min_observed - s.bound, -1e-9, s.pass(1e-9));
    }
    Ok(Output::Report(r))
}

fn decomp(dim: usize, oracle: Option<usize>, curve: Option<usize>, certificates: bool) -> CliResult {
    if let Some(rows) = curve {
        return decomposable::symmetric_bound_csv(dim, rows).map(Output::Csv).map_err(|e| e.to_string());
    }
    let m = decomposable::minimize_density(dim).map_err(|e| e.to_string())?;
    let mut r = Report::new("decomp");
    r.input("dim", dim);
    r.output("minimum", m.value).output("spec", &m.spec);
    if let Some(l) = m.spec.segment {
        r.output("segment_length", l.length);
    }
    let closed = decomposable::minimum_closed_form(dim).map_err(|e| e.to_string())?;
    r.at_most("bound_vs_closed_form", (m.value - closed).abs(), 1e-12);
    if let Some(g) = oracle {
        r.input("oracle_grid", g);
        let v = decomposable::brute_force_minimize(dim, g).map_err(|e| e.to_string())?;
        r.output("oracle_value", v);
        r.at_most("oracle_gap", (v - m.value).abs(), 1e-4);
        r.check("oracle_not_below_minimum", m.value - v, 1e-6, v >= m.value - 1e-6);
    }
    if certificates {
        let c = decomposable::proof_certificates_on(decomposable::CERTIFICATE_GRID);
        for cert in &c.certificates {
            r.check(&cert.name, cert.min_margin, 0.0, cert.pass);
        }
        r.at_most("g2_analytic_vs_finite_difference", c.g2_fd_gap, 1e-5);
        r.output("certificates", &c);
    }
    Ok(Output::Report(r))
}

/// Unit-volume representative of a named shape, or a zonotope document.
pub fn shape_by_name(name: &str) -> Result<Zonotope, String> {
    let z = match name {
        "cube" => Zonotope::cube(1.0),
        "hexprism" => wm_min::type_minimum(2, &WeightPair::TILING)
            .ok()
            .and_then(|t| t.optimal_shape)
            .expect("prism shape")
            .build(),
        "rhombic" => Zonotope::rhombic_dodecahedron(3f64.sqrt() / 2f64.powf(4.0 / 3.0)),
        "elongated" => Zonotope::elongated_rhombic_dodecahedron(1.0, 0.5).map(|z| z.unit_volume()),
        "truncocta" => Zonotope::truncated_octahedron(2f64.powf(-7.0 / 6.0)),
        _ => match name.strip_prefix("file:") {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
                Zonotope::from_json(&text)
            }
            None => return Err(format!("unknown shape {name:?}")),
        },
    };
    z.map_err(|e| e.to_string())
}

fn tile(shape: &str, radii: &[f64], tolerance: f64, samples: usize, csv: bool, seed: u64) -> CliResult {
    let z = shape_by_name(shape)?;
    let lat = tiling::lattice_from_parallelohedron(&z).map_err(|e| e.to_string())?;
    let check = tiling::validate_tiling(&z, &lat, samples, seed).map_err(|e| e.to_string())?;
    let rows = tiling::convergence_series(&z, &lat, radii).map_err(|e| e.to_string())?;
    if csv {
        let mut s = String::from("radius,cells,skeleton_length,weighted_length,density,target,relative_error\n");
        for e in &rows {
            s.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                e.radius, e.cells, e.skeleton_length, e.weighted_length, e.density, e.target, e.relative_error
            ));
        }
        return Ok(Output::Csv(s));
    }
    let mut r = Report::new("tile");
    r.input("shape", shape).input("radii", radii).input("seed", seed).input("covering_samples", samples);
    r.output("lattice", lat).output("validation", check).output("rows", &rows);
    tile_residuals(&mut r, &rows, tolerance);
    Ok(Output::Report(r))
}

fn tile_residuals(r: &mut Report, rows: &[tiling::DensityEstimate], tolerance: f64) {
    for e in rows {
        r.at_most(&format!("mode_gap_r{}", e.radius), e.mode_gap(), 1e-9);
        let bad = (e.census.other + e.census.mismatched) as f64;
        r.at_most(&format!("edge_multiplicity_r{}", e.radius), bad, 0.0);
    }
    if let Some(last) = rows.last() {
        r.at_most("relative_error", last.relative_error, tolerance);
    }
}

fn verify(lemma: Lemma, lambda: f64, grid: usize, samples: usize, radius: f64, seed: u64) -> Result<Report, String> {
    let mut r = Report::new("verify");
    r.input("lemma", format!("{lemma:?}").to_lowercase()).input("seed", seed);
    let all = lemma == Lemma::All;
    if all || lemma == Lemma::Volume {
        r.input("samples", samples);
        let worst = volume_suite(samples, seed);
        r.output("volume_max_relative_error", worst);
        r.at_most("volume_vs_cubic", worst, 1e-9);
    }
    if all || lemma == Lemma::Tetra {
        r.input("samples", samples);
        let worst = tetra_suite(samples, seed);
        r.output("tetra_max_residual", worst);
        r.at_most("tetra_identities", worst, 1e-9);
    }
    if all || lemma == Lemma::Simplex {
        r.input("lambda", lambda).input("grid", grid);
        let exact = simplex_opt::lemma3_max(lambda, 1.0).map_err(|e| e.to_string())?;
        let found = simplex_opt::brute_force_simplex_search(lambda, 1.0, grid);
        let gap = (found.refined - exact.max_value).abs();
        let cases = simplex_opt::lemma3_case_values(lambda).map_err(|e| e.to_string())?;
        let largest_case = cases.iter().cloned().fold(f64::MIN, f64::max);
        r.output("closed_form", exact.max_value)
            .output("brute_force", found.refined)
            .output("gap", gap)
            .output("argmax", exact.argmax)
            .output("boundary_cases", cases);
        r.at_most("simplex_gap", gap, 1e-5);
        r.check("boundary_cases_below_interior", largest_case - exact.max_value, 0.0, largest_case < exact.max_value);
    }
    if all || lemma == Lemma::Isotropy {
        r.input("samples", samples);
        let (res, det, iters) = isotropy_suite(samples.min(1000), seed)?;
        r.output("isotropy_max_residual", res).output("isotropy_max_iterations", iters);
        r.at_most("isotropy_residual", res, 1e-8);
        r.at_most("isotropy_det", det, 1e-12);
    }
    if all || lemma == Lemma::Tiling {
        r.input("radius", radius);
        let mut rows = Vec::new();
        for name in ["cube", "truncocta"] {
            let z = shape_by_name(name)?;
            let lat = tiling::lattice_from_parallelohedron(&z).map_err(|e| e.to_string())?;
            tiling::validate_tiling(&z, &lat, tiling::COVERING_SAMPLES, seed).map_err(|e| e.to_string())?;
            let e = tiling::skeleton_density(&z, &lat, radius).map_err(|e| e.to_string())?;
            r.at_most(&format!("{name}_relative_error"), e.relative_error, 0.02);
            r.at_most(&format!("{name}_mode_gap"), e.mode_gap(), 1e-9);
            r.at_most(&format!("{name}_multiplicity"), (e.census.other + e.census.mismatched) as f64, 0.0);
            rows.push(json!({ "shape": name, "estimate": e }));
        }
        r.output("tiling", rows);
    }
    Ok(r)
}

/// Largest relative gap between the hull volume and the cubic `f(beta)`.
pub fn volume_suite(samples: usize, seed: u64) -> f64 {
    (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream(seed, i);
            loop {
                let g = sampling::random_frame(&mut rng);
                let p_zero = rng.random_range(0.0..0.5);
                let b = sampling::random_beta(&mut rng, p_zero);
                let f = volume_f(b.values());
                match Zonotope::from_parameters(&g, &b) {
                    Ok(z) => return (z.volume() - f).abs() / f,
                    Err(_) if f <= 1e-12 => continue,
                    Err(_) => return f64::INFINITY,
                }
            }
        })
        .reduce(|| 0.0, f64::max)
}

/// Largest scaled residual of the two tetrahedron identities.
pub fn tetra_suite(samples: usize, seed: u64) -> f64 {
    (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream(seed, i);
            loop {
                if let Ok(t) = CenteredTetrahedron::new(sampling::centered_vertices(&mut rng)) {
                    return t.identity_residual();
                }
            }
        })
        .reduce(|| 0.0, f64::max)
}

/// Largest isotropy residual, largest `|det - 1|` and largest iteration
/// count over random type (5) bodies.
pub fn isotropy_suite(samples: usize, seed: u64) -> Result<(f64, f64, usize), String> {
    let rows: Vec<Result<(f64, f64, usize), String>> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream(seed, i);
            let g = sampling::random_frame(&mut rng);
            let z = Zonotope::from_parameters(&g, &sampling::random_positive_beta(&mut rng)).map_err(|e| e.to_string())?;
            let fm = FacetMeasure::from_zonotope(&z).map_err(|e| e.to_string())?;
            let p = wm_min::isotropic_position(&fm, 1e-9).map_err(|e| e.to_string())?;
            let after = FacetMeasure::from_zonotope(&z.transformed(&p.map).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?
                .isotropy_residual();
            Ok((after, (p.map.determinant() - 1.0).abs(), p.iterations))
        })
        .collect();
    let mut acc = (0.0f64, 0.0f64, 0usize);
    for row in rows {
        let (a, b, c) = row?;
        acc = (acc.0.max(a), acc.1.max(b), acc.2.max(c));
    }
    Ok(acc)
}
