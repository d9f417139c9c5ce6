//! Command-line surface: one subcommand per library operation.
//!
//! Output is machine readable — JSON with complex numbers as `[re, im]`
//! pairs, CSV for point lists, binary PGM for grids — and deterministic:
//! identical config + seed produce byte-identical bytes. Exit codes follow
//! [`Error::exit_code`]: 0 success, 1 I/O, 2 validation, 3 numerics.
//!
//! Configuration starts from `RunConfig::default()`, is overridden by
//! `--config file.json` when given, and explicit flags win over both.
//! With `--out DIR` results land in files (`result.json`, plus `grid.pgm`
//! and `points.csv` where applicable) instead of stdout.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::config::{OutputFormat, RunConfig};
use crate::cpoly::RootOptions;
use crate::error::Result;
use crate::famdyn::{
    bifurcation_grid, ce_exponent_estimate, dynamically_related_probe,
    equidistribution_discrepancy, green_value, is_hyperbolic_disjoint, is_pcf,
    pcf_parameters_unicritical, recurrence_exponent_estimate, separation_statistics,
    similarity_frames, FamilySpec, GridMeasure, OrbitClassification, PcfKind, Window,
};
use crate::moduli::{
    conjugacy_test, elementary_transform, flexible_lattes, milnor_coordinates,
    semiconjugacy_search, ConjugacyWitness, LattesParams,
};
use crate::ratmap::{chordal_distance, ProjPoint, RationalMap};
use crate::spectrum::{
    compare_spectra_with_tol, fixed_points_with, tau_with, SpectrumOptions,
};

/// Entry point used by the `specrig` binary: parses argv, runs the
/// subcommand, and maps outcomes to the documented exit codes.
pub fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // --help / --version print to stdout and exit 0; genuine
            // usage errors go to stderr with the validation exit code.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("specrig: {e}");
            e.exit_code()
        }
    }
}

#[derive(Parser)]
#[command(
    name = "specrig",
    version,
    about = "Multiplier spectra, moduli operations, and parameter-space experiments for rational maps on P^1"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// RunConfig JSON file; explicit flags take precedence over it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Directory to write result.json (plus grid.pgm / points.csv where
    /// applicable) into, instead of printing to stdout.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Seed for the deterministic root-finder jitter.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; overrides SPECRIG_THREADS (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Stdout format for grid-valued output: json, csv, or pgm.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Pgm,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> OutputFormat {
        match f {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Pgm => OutputFormat::Pgm,
        }
    }
}

/// A finite complex flag value: a bare real like `-1.5` or a JSON pair
/// like `[0.25,-0.5]`.
#[derive(Debug, Clone, Copy)]
struct CxArg(Complex64);

impl FromStr for CxArg {
    type Err = String;

    fn from_str(raw: &str) -> std::result::Result<Self, String> {
        let s = raw.trim();
        if let Ok(re) = s.parse::<f64>() {
            return if re.is_finite() {
                Ok(CxArg(Complex64::new(re, 0.0)))
            } else {
                Err(format!("complex value must be finite, got {raw:?}"))
            };
        }
        let pair: [f64; 2] = serde_json::from_str(s)
            .map_err(|_| format!("expected a real number or [re,im], got {raw:?}"))?;
        if pair.iter().any(|v| !v.is_finite()) {
            return Err(format!("complex components must be finite, got {raw:?}"));
        }
        Ok(CxArg(Complex64::new(pair[0], pair[1])))
    }
}

/// A point on the sphere: `inf`, a bare real, or `[re,im]`.
#[derive(Debug, Clone, Copy)]
struct PointArg(ProjPoint);

impl FromStr for PointArg {
    type Err = String;

    fn from_str(raw: &str) -> std::result::Result<Self, String> {
        if raw.trim() == "inf" {
            return Ok(PointArg(ProjPoint::Infinity));
        }
        CxArg::from_str(raw).map(|c| PointArg(ProjPoint::Finite(c.0)))
    }
}

/// A parameter window `re_min,re_max,im_min,im_max`.
#[derive(Debug, Clone, Copy)]
struct WindowArg(Window);

impl FromStr for WindowArg {
    type Err = String;

    fn from_str(raw: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = raw.split(',').collect();
        if parts.len() != 4 {
            return Err(format!(
                "expected re_min,re_max,im_min,im_max, got {raw:?}"
            ));
        }
        let mut v = [0.0f64; 4];
        for (slot, part) in v.iter_mut().zip(&parts) {
            *slot = part
                .trim()
                .parse::<f64>()
                .map_err(|_| format!("bad window component {part:?}"))?;
            if !slot.is_finite() {
                return Err(format!("window components must be finite, got {part:?}"));
            }
        }
        Ok(WindowArg(Window {
            re_min: v[0],
            re_max: v[1],
            im_min: v[2],
            im_max: v[3],
        }))
    }
}

/// Family input: a FamilySpec JSON file, or `--d N` as a shortcut for the
/// unicritical family z^d + t (whose critical point is marked "crit").
#[derive(Args)]
struct FamilyArg {
    /// FamilySpec JSON file.
    #[arg(long, value_name = "FILE", conflicts_with = "d", required_unless_present = "d")]
    family: Option<PathBuf>,
    /// Unicritical family z^d + t of this degree.
    #[arg(long, required_unless_present = "family")]
    d: Option<usize>,
}

impl FamilyArg {
    fn load(&self) -> Result<FamilySpec> {
        let fam = match (&self.family, self.d) {
            (Some(path), None) => serde_json::from_str(&fs::read_to_string(path)?)?,
            (None, Some(d)) => FamilySpec::unicritical(d),
            _ => unreachable!("clap enforces exactly one of --family / --d"),
        };
        fam.validate()?;
        Ok(fam)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Truncated multiplier-spectrum table S_1..S_n of a map.
    Spectrum {
        /// RationalMap JSON file.
        #[arg(long, value_name = "FILE")]
        map: PathBuf,
        /// Truncation order n_max.
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Length-spectrum rows |S_1|..|S_n| of a map.
    Lengths {
        #[arg(long, value_name = "FILE")]
        map: PathBuf,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Distance and equality verdict between two truncated spectra.
    Compare {
        #[arg(long, value_name = "FILE")]
        a: PathBuf,
        #[arg(long, value_name = "FILE")]
        b: PathBuf,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Fixed points of the n-th iterate, with multiplicities.
    Fixedpoints {
        #[arg(long, value_name = "FILE")]
        map: PathBuf,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Critical points of a map, with multiplicities.
    Critical {
        #[arg(long, value_name = "FILE")]
        map: PathBuf,
    },
    /// Search for a Möbius conjugacy between two maps.
    Conj {
        #[arg(long, value_name = "FILE")]
        a: PathBuf,
        #[arg(long, value_name = "FILE")]
        b: PathBuf,
    },
    /// Milnor coordinates (sigma1, sigma2, sigma3) of a quadratic map.
    Milnor {
        #[arg(long, value_name = "FILE")]
        map: PathBuf,
    },
    /// Flexible Lattès map of the curve y^2 = x^3 + ax + b.
    Lattes {
        #[arg(long, allow_hyphen_values = true)]
        a: CxArg,
        #[arg(long, allow_hyphen_values = true)]
        b: CxArg,
    },
    /// Elementary transformation h1∘h2 vs h2∘h1, with a spectra check.
    Elemtrans {
        #[arg(long, value_name = "FILE")]
        h1: PathBuf,
        #[arg(long, value_name = "FILE")]
        h2: PathBuf,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Search for h of the given degree with f∘h = h∘g.
    Semiconj {
        #[arg(long, value_name = "FILE")]
        f: PathBuf,
        #[arg(long, value_name = "FILE")]
        g: PathBuf,
        #[arg(long, default_value_t = 2)]
        degh: usize,
    },
    /// Classify every critical orbit; postcritically-finite verdict.
    Pcf {
        #[arg(long, value_name = "FILE")]
        map: PathBuf,
        #[arg(long, default_value_t = 60)]
        iters: usize,
    },
    /// Check for 2d-2 distinct superattracting critical cycles.
    Hyperbolic {
        #[arg(long, value_name = "FILE")]
        map: PathBuf,
        #[arg(long, default_value_t = 60)]
        iters: usize,
    },
    /// Green (escape-rate) value of a marked point at a parameter.
    Green {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long, default_value = "crit")]
        marked: String,
        #[arg(long, allow_hyphen_values = true)]
        t: CxArg,
        #[arg(long, default_value_t = 64)]
        iters: usize,
    },
    /// Bifurcation-measure grid of a marked point over a window.
    Bifgrid {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long, default_value = "crit")]
        marked: String,
        #[arg(long, allow_hyphen_values = true)]
        window: WindowArg,
        #[arg(long, default_value_t = 256)]
        nx: usize,
        #[arg(long, default_value_t = 256)]
        ny: usize,
        #[arg(long, default_value_t = 200)]
        iters: usize,
    },
    /// Centers or Misiurewicz parameters of z^d + t, as CSV.
    Centers {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        period: usize,
        /// Misiurewicz preperiod m >= 1; omit for centers.
        #[arg(long)]
        preperiod: Option<usize>,
    },
    /// Discrepancy of the PCF parameters of z^d + t against the family's
    /// own bifurcation grid.
    Equidist {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        period: usize,
        #[arg(long)]
        preperiod: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        window: WindowArg,
        #[arg(long, default_value_t = 256)]
        nx: usize,
        #[arg(long, default_value_t = 256)]
        ny: usize,
        #[arg(long, default_value_t = 200)]
        iters: usize,
        /// Coarse blocks per axis for the discrepancy statistic.
        #[arg(long, default_value_t = 8)]
        coarse: usize,
    },
    /// Rescaled similarity frames of a marked orbit around t0.
    Similarity {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long, default_value = "crit")]
        marked: String,
        #[arg(long, allow_hyphen_values = true)]
        t0: CxArg,
        /// Comma-separated orbit lengths, e.g. 6,8,10.
        #[arg(long, value_delimiter = ',', required = true)]
        periods: Vec<usize>,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Samples per axis of each frame.
        #[arg(long, default_value_t = 9)]
        samples: usize,
    },
    /// Orbit diagnostics: expansion, recurrence, separation, relation.
    Diagnostics {
        #[command(subcommand)]
        probe: Diag,
    },
}

#[derive(Subcommand)]
enum Diag {
    /// Collet-Eckmann expansion slope of log f# along an orbit.
    Ce {
        #[arg(long, value_name = "FILE")]
        map: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        start: PointArg,
        /// Iterations skipped before the regression window.
        #[arg(long, default_value_t = 1)]
        skip: usize,
        #[arg(long, default_value_t = 20)]
        n: usize,
    },
    /// Polynomial-recurrence exponent of an orbit vs the critical set.
    Pr {
        #[arg(long, value_name = "FILE")]
        map: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        start: PointArg,
        #[arg(long, default_value_t = 20)]
        n: usize,
    },
    /// Separation statistics (FS frequency, AS average) of two orbits.
    Sep {
        #[arg(long, value_name = "FILE")]
        map: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        a: PointArg,
        #[arg(long, allow_hyphen_values = true)]
        b: PointArg,
        #[arg(long, default_value_t = 64)]
        n: usize,
        /// FS distance threshold delta.
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
    },
    /// Certifiable dynamical-relation probe for two starting points.
    Dynrel {
        #[arg(long, value_name = "FILE")]
        map: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        a: PointArg,
        #[arg(long, allow_hyphen_values = true)]
        b: PointArg,
        #[arg(long, default_value_t = 64)]
        bound: usize,
    },
}

fn resolve_config(common: &Common) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => serde_json::from_str::<RunConfig>(&fs::read_to_string(path)?)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if common.threads.is_some() {
        cfg.threads = common.threads;
    }
    if let Some(fmt) = common.format {
        cfg.format = fmt.into();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn spectrum_options(cfg: &RunConfig) -> SpectrumOptions {
    SpectrumOptions {
        degree_cap: cfg.degree_cap,
        root_cap: cfg.root_cap,
        roots: RootOptions {
            tol: cfg.root_tol,
            cluster_floor: cfg.cluster_radius,
            seed: cfg.seed,
            precision: cfg.precision,
            ..RootOptions::default()
        },
    }
}

fn load_map(path: &Path) -> Result<RationalMap> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

fn pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

fn emit_json<T: Serialize>(common: &Common, value: &T) -> Result<()> {
    let text = pretty(value)?;
    match &common.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join("result.json"), text)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

/// Grid output: with --out all three artifacts are written; on stdout the
/// resolved format picks one of JSON / CSV / binary PGM.
fn emit_grid(common: &Common, cfg: &RunConfig, grid: &GridMeasure) -> Result<()> {
    match &common.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join("result.json"), pretty(grid)?)?;
            grid.write_pgm(&dir.join("grid.pgm"))?;
            fs::write(dir.join("points.csv"), grid.csv_string())?;
        }
        None => match cfg.format {
            OutputFormat::Json => print!("{}", pretty(grid)?),
            OutputFormat::Csv => print!("{}", grid.csv_string()),
            OutputFormat::Pgm => std::io::stdout().write_all(&grid.pgm_bytes()?)?,
        },
    }
    Ok(())
}

/// Worst chordal deviation of f∘h from h∘g over a fixed three-circle
/// sample set, used to report an independent residual for `semiconj`.
fn semiconjugacy_residual(f: &RationalMap, g: &RationalMap, h: &RationalMap) -> f64 {
    let mut worst = 0.0f64;
    for k in 0..96 {
        let ang = std::f64::consts::TAU * k as f64 / 96.0;
        for r in [0.35, 1.0, 1.9] {
            let z = ProjPoint::Finite(Complex64::from_polar(r, ang));
            let lhs = f.apply(h.apply(z));
            let rhs = h.apply(g.apply(z));
            worst = worst.max(chordal_distance(lhs, rhs));
        }
    }
    worst
}

fn pcf_kind(period: usize, preperiod: Option<usize>) -> PcfKind {
    match preperiod {
        None => PcfKind::Center { period },
        Some(preperiod) => PcfKind::Misiurewicz { preperiod, period },
    }
}

fn centers_csv(points: &[Complex64], kind: &PcfKind) -> String {
    let (label, period) = match kind {
        PcfKind::Center { period } => ("center", *period),
        PcfKind::Misiurewicz { period, .. } => ("misiurewicz", *period),
    };
    let mut out = String::from("re,im,kind,period\n");
    for z in points {
        out.push_str(&format!("{},{},{label},{period}\n", z.re, z.im));
    }
    out
}

#[derive(Serialize)]
struct CompareOut {
    equal: bool,
    distance: f64,
}

#[derive(Serialize)]
struct CriticalOut {
    degree: usize,
    /// (point, multiplicity) pairs; multiplicities sum to 2d - 2.
    points: Vec<(ProjPoint, usize)>,
}

#[derive(Serialize)]
struct ConjOut {
    conjugate: bool,
    witness: Option<ConjugacyWitness>,
}

#[derive(Serialize)]
struct LattesOut {
    params: LattesParams,
    map: RationalMap,
}

#[derive(Serialize)]
struct ElemtransOut {
    f: RationalMap,
    g: RationalMap,
    spectra_equal: bool,
    distance: f64,
}

#[derive(Serialize)]
struct SemiconjOut {
    found: bool,
    h: Option<RationalMap>,
    /// Worst chordal deviation of f∘h from h∘g over the sample set.
    residual: Option<f64>,
}

#[derive(Serialize)]
struct CriticalOrbitOut {
    point: ProjPoint,
    classification: OrbitClassification,
}

#[derive(Serialize)]
struct PcfOut {
    pcf: bool,
    orbits: Vec<CriticalOrbitOut>,
}

#[derive(Serialize)]
struct HyperbolicOut {
    hyperbolic_disjoint: bool,
}

#[derive(Serialize)]
struct GreenOut {
    #[serde(with = "crate::jsonc::cpair")]
    t: Complex64,
    marked: String,
    n_iter: usize,
    value: f64,
    error_estimate: f64,
}

#[derive(Serialize)]
struct CentersOut {
    d: usize,
    #[serde(flatten)]
    kind: PcfKind,
    count: usize,
    #[serde(with = "crate::jsonc::cvec")]
    points: Vec<Complex64>,
}

#[derive(Serialize)]
struct EquidistOut {
    d: usize,
    #[serde(flatten)]
    kind: PcfKind,
    points: usize,
    coarse: usize,
    discrepancy: f64,
    grid_total_mass: f64,
}

#[derive(Serialize)]
struct CeOut {
    ce_exponent: f64,
    n_skip: usize,
    n_max: usize,
}

#[derive(Serialize)]
struct PrOut {
    /// None when the orbit hits the critical set (unbounded exponent).
    recurrence_exponent: Option<f64>,
    unbounded: bool,
    n_max: usize,
}

#[derive(Serialize)]
struct SepOut {
    fs_frequency: f64,
    /// None when the orbits coincide at some step (unbounded average).
    as_average: Option<f64>,
    as_unbounded: bool,
    n: usize,
    delta: f64,
}

fn dispatch(cli: &Cli) -> Result<()> {
    let common = &cli.common;
    let cfg = resolve_config(common)?;
    cfg.init_thread_pool();
    let opts = spectrum_options(&cfg);

    match &cli.cmd {
        Cmd::Spectrum { map, n } => {
            let f = load_map(map)?;
            emit_json(common, &tau_with(&f, *n, &opts)?)
        }
        Cmd::Lengths { map, n } => {
            let f = load_map(map)?;
            emit_json(common, &tau_with(&f, *n, &opts)?.lengths())
        }
        Cmd::Compare { a, b, n } => {
            let ta = tau_with(&load_map(a)?, *n, &opts)?;
            let tb = tau_with(&load_map(b)?, *n, &opts)?;
            let (distance, equal) = compare_spectra_with_tol(&ta, &tb, cfg.spectrum_tol)?;
            emit_json(common, &CompareOut { equal, distance })
        }
        Cmd::Fixedpoints { map, n } => {
            let f = load_map(map)?;
            emit_json(common, &fixed_points_with(&f, *n, &opts)?)
        }
        Cmd::Critical { map } => {
            let f = load_map(map)?;
            let points = f.critical_points()?;
            emit_json(
                common,
                &CriticalOut {
                    degree: f.degree(),
                    points,
                },
            )
        }
        Cmd::Conj { a, b } => {
            let witness = conjugacy_test(&load_map(a)?, &load_map(b)?)?;
            emit_json(
                common,
                &ConjOut {
                    conjugate: witness.is_some(),
                    witness,
                },
            )
        }
        Cmd::Milnor { map } => emit_json(common, &milnor_coordinates(&load_map(map)?)?),
        Cmd::Lattes { a, b } => {
            let params = LattesParams { a: a.0, b: b.0 };
            let map = flexible_lattes(params)?;
            emit_json(common, &LattesOut { params, map })
        }
        Cmd::Elemtrans { h1, h2, n } => {
            let (f, g) = elementary_transform(&load_map(h1)?, &load_map(h2)?)?;
            let tf = tau_with(&f, *n, &opts)?;
            let tg = tau_with(&g, *n, &opts)?;
            let (distance, spectra_equal) =
                compare_spectra_with_tol(&tf, &tg, cfg.spectrum_tol)?;
            emit_json(
                common,
                &ElemtransOut {
                    f,
                    g,
                    spectra_equal,
                    distance,
                },
            )
        }
        Cmd::Semiconj { f, g, degh } => {
            let (fm, gm) = (load_map(f)?, load_map(g)?);
            let h = semiconjugacy_search(&fm, &gm, *degh)?;
            let residual = h.as_ref().map(|h| semiconjugacy_residual(&fm, &gm, h));
            emit_json(
                common,
                &SemiconjOut {
                    found: h.is_some(),
                    h,
                    residual,
                },
            )
        }
        Cmd::Pcf { map, iters } => {
            let f = load_map(map)?;
            let (pcf, raw) = is_pcf(&f, *iters, cfg.orbit_tol)?;
            let orbits = raw
                .into_iter()
                .map(|(point, classification)| CriticalOrbitOut {
                    point,
                    classification,
                })
                .collect();
            emit_json(common, &PcfOut { pcf, orbits })
        }
        Cmd::Hyperbolic { map, iters } => {
            let f = load_map(map)?;
            let hyperbolic_disjoint = is_hyperbolic_disjoint(&f, *iters)?;
            emit_json(common, &HyperbolicOut {
                hyperbolic_disjoint,
            })
        }
        Cmd::Green {
            family,
            marked,
            t,
            iters,
        } => {
            let fam = family.load()?;
            let gv = green_value(&fam, marked, t.0, *iters)?;
            emit_json(
                common,
                &GreenOut {
                    t: t.0,
                    marked: marked.clone(),
                    n_iter: *iters,
                    value: gv.value,
                    error_estimate: gv.error_estimate,
                },
            )
        }
        Cmd::Bifgrid {
            family,
            marked,
            window,
            nx,
            ny,
            iters,
        } => {
            let fam = family.load()?;
            let grid = bifurcation_grid(&fam, marked, window.0, (*nx, *ny), *iters)?;
            emit_grid(common, &cfg, &grid)
        }
        Cmd::Centers {
            d,
            period,
            preperiod,
        } => {
            let kind = pcf_kind(*period, *preperiod);
            let points = pcf_parameters_unicritical(*d, kind)?;
            let csv = centers_csv(&points, &kind);
            match &common.out {
                Some(dir) => {
                    fs::create_dir_all(dir)?;
                    fs::write(dir.join("points.csv"), &csv)?;
                    let result = CentersOut {
                        d: *d,
                        kind,
                        count: points.len(),
                        points,
                    };
                    fs::write(dir.join("result.json"), pretty(&result)?)?;
                }
                None => print!("{csv}"),
            }
            Ok(())
        }
        Cmd::Equidist {
            d,
            period,
            preperiod,
            window,
            nx,
            ny,
            iters,
            coarse,
        } => {
            let kind = pcf_kind(*period, *preperiod);
            let fam = FamilySpec::unicritical(*d);
            let grid = bifurcation_grid(&fam, "crit", window.0, (*nx, *ny), *iters)?;
            let points = pcf_parameters_unicritical(*d, kind)?;
            let discrepancy = equidistribution_discrepancy(&points, &grid, *coarse)?;
            emit_json(
                common,
                &EquidistOut {
                    d: *d,
                    kind,
                    points: points.len(),
                    coarse: *coarse,
                    discrepancy,
                    grid_total_mass: grid.total_mass,
                },
            )
        }
        Cmd::Similarity {
            family,
            marked,
            t0,
            periods,
            radius,
            samples,
        } => {
            let fam = family.load()?;
            let report = similarity_frames(&fam, marked, t0.0, periods, *radius, *samples)?;
            emit_json(common, &report)
        }
        Cmd::Diagnostics { probe } => match probe {
            Diag::Ce { map, start, skip, n } => {
                let f = load_map(map)?;
                let ce_exponent = ce_exponent_estimate(&f, start.0, *skip, *n)?;
                emit_json(
                    common,
                    &CeOut {
                        ce_exponent,
                        n_skip: *skip,
                        n_max: *n,
                    },
                )
            }
            Diag::Pr { map, start, n } => {
                let f = load_map(map)?;
                let value = recurrence_exponent_estimate(&f, start.0, *n)?;
                emit_json(
                    common,
                    &PrOut {
                        recurrence_exponent: value.is_finite().then_some(value),
                        unbounded: value.is_infinite(),
                        n_max: *n,
                    },
                )
            }
            Diag::Sep { map, a, b, n, delta } => {
                let f = load_map(map)?;
                let stats = separation_statistics(&f, a.0, b.0, *n, *delta)?;
                emit_json(
                    common,
                    &SepOut {
                        fs_frequency: stats.fs_frequency,
                        as_average: stats
                            .as_average
                            .is_finite()
                            .then_some(stats.as_average),
                        as_unbounded: stats.as_average.is_infinite(),
                        n: *n,
                        delta: *delta,
                    },
                )
            }
            Diag::Dynrel { map, a, b, bound } => {
                let f = load_map(map)?;
                emit_json(common, &dynamically_related_probe(&f, a.0, b.0, *bound)?)
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_args_parse() {
        assert_eq!(CxArg::from_str("1.5").unwrap().0, Complex64::new(1.5, 0.0));
        assert_eq!(CxArg::from_str("-2").unwrap().0, Complex64::new(-2.0, 0.0));
        assert_eq!(
            CxArg::from_str("[0.25,-0.5]").unwrap().0,
            Complex64::new(0.25, -0.5)
        );
        assert_eq!(
            CxArg::from_str(" [1e-3, 2] ").unwrap().0,
            Complex64::new(1e-3, 2.0)
        );
        assert!(CxArg::from_str("nan").is_err());
        assert!(CxArg::from_str("inf").is_err());
        assert!(CxArg::from_str("1+2i").is_err());
        assert!(CxArg::from_str("[1]").is_err());
    }

    #[test]
    fn point_args_parse() {
        assert_eq!(PointArg::from_str("inf").unwrap().0, ProjPoint::Infinity);
        assert_eq!(
            PointArg::from_str("[0,1]").unwrap().0,
            ProjPoint::finite(0.0, 1.0)
        );
        assert!(PointArg::from_str("nan").is_err());
    }

    #[test]
    fn window_args_parse() {
        let w = WindowArg::from_str("-2.5,1,-1.75,1.75").unwrap().0;
        assert_eq!(
            (w.re_min, w.re_max, w.im_min, w.im_max),
            (-2.5, 1.0, -1.75, 1.75)
        );
        assert!(WindowArg::from_str("1,2,3").is_err());
        assert!(WindowArg::from_str("a,b,c,d").is_err());
    }

    #[test]
    fn hyphen_values_reach_the_parser() {
        let cli = Cli::try_parse_from([
            "specrig", "green", "--d", "2", "--t", "-2", "--iters", "10",
        ])
        .unwrap();
        match cli.cmd {
            Cmd::Green { t, .. } => assert_eq!(t.0, Complex64::new(-2.0, 0.0)),
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn flags_override_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        let mut file_cfg = RunConfig::default();
        file_cfg.seed = 7;
        file_cfg.threads = Some(3);
        std::fs::write(&path, serde_json::to_string(&file_cfg).unwrap()).unwrap();

        let cli = Cli::try_parse_from([
            "specrig",
            "centers",
            "--d",
            "2",
            "--period",
            "3",
            "--config",
            path.to_str().unwrap(),
            "--seed",
            "99",
        ])
        .unwrap();
        let cfg = resolve_config(&cli.common).unwrap();
        assert_eq!(cfg.seed, 99); // flag wins
        assert_eq!(cfg.threads, Some(3)); // file survives where no flag given

        let cli = Cli::try_parse_from(["specrig", "centers", "--d", "2", "--period", "3"]).unwrap();
        let cfg = resolve_config(&cli.common).unwrap();
        assert_eq!(cfg.seed, RunConfig::default().seed);
    }

    #[test]
    fn family_arg_wants_exactly_one_source() {
        assert!(Cli::try_parse_from(["specrig", "green", "--t", "1"]).is_err());
        assert!(Cli::try_parse_from([
            "specrig", "green", "--d", "2", "--family", "x.json", "--t", "1"
        ])
        .is_err());
    }

    #[test]
    fn centers_csv_shape() {
        let pts = vec![Complex64::new(-1.0, 0.0)];
        let csv = centers_csv(&pts, &PcfKind::Center { period: 2 });
        assert_eq!(csv, "re,im,kind,period\n-1,0,center,2\n");
        let csv = centers_csv(
            &pts,
            &PcfKind::Misiurewicz {
                preperiod: 2,
                period: 1,
            },
        );
        assert_eq!(csv, "re,im,kind,period\n-1,0,misiurewicz,1\n");
    }
}
