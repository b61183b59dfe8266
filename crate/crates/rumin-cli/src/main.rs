//! `rumin` — bases and operator matrices of the intrinsic complex on ℍⁿ,
//! verification suites, and the numerical experiments (homotopy residuals,
//! Poincaré ratios, annulus geometry).

mod report;
mod suites;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use report::fnum;
use rumin::numerics::annulus::{annulus_admissibility, model_constants, SamplerKind};
use rumin::numerics::domain::Domain;
use rumin::numerics::homotopy::{homotopy_residual, interior_samples};
use rumin::numerics::keuc::KeucCtx;
use rumin::numerics::poincare::{poincare_ratio_estimate, polynomial_family, RatioConfig};
use rumin::numerics::quad::QuadratureSpec;
use rumin::operators::{d_c_matrix, export_to_writer, import_from_reader, laplacian_matrix};
use rumin::projections::{e0_dim_formula, tables};
use rumin::scalar::rat_to_string;
use serde::Serialize;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "rumin", version, about)]
struct Cli {
    /// Flat key=value config file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the deterministic orthogonal basis of E₀ʰ with its dimension.
    Basis {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite and write its report.
    Verify {
        /// One of: algebra, rumin, symbolic, numeric-fast, numeric-full.
        suite: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 33)]
        grid: usize,
        #[arg(long, default_value_t = 16)]
        gauss: usize,
        #[arg(long, default_value_t = 2.0)]
        lambda: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Export an operator matrix (JSON schema) and verify the round trip.
    Export {
        /// dc-matrix or laplacian.
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Empirical interior Poincaré ratios for a family of exact forms.
    Poincare {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        h: usize,
        /// Lebesgue exponent: a number, or "inf".
        #[arg(long, default_value = "4")]
        p: String,
        #[arg(long, default_value_t = 33)]
        grid: usize,
        #[arg(long, default_value_t = 16)]
        gauss: usize,
        #[arg(long, default_value_t = 2.0)]
        lambda: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        family: usize,
        #[arg(long, default_value_t = false)]
        residual: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Homotopy residuals `|d_c K ω − ω|` on d_c-exact fixtures.
    Homotopy {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        h: usize,
        #[arg(long, default_value_t = 33)]
        grid: usize,
        #[arg(long, default_value_t = 16)]
        gauss: usize,
        #[arg(long, default_value_t = 3)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        fixtures: usize,
        #[arg(long, default_value_t = 3)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Annulus-admissibility constants and window report.
    Annulus {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        r1: f64,
        #[arg(long)]
        r2: f64,
        #[arg(long)]
        s1: f64,
        #[arg(long)]
        s2: f64,
        /// latlong or random.
        #[arg(long, default_value = "latlong")]
        sampler: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    // worker cap for the quadrature layer
    if let Ok(v) = std::env::var("RUMIN_NUM_THREADS") {
        if let Ok(k) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}

/// Flat `key = value` config: recognized keys override the defaulted flags.
fn load_config(path: &Path) -> anyhow::Result<std::collections::BTreeMap<String, String>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let mut map = std::collections::BTreeMap::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("config line without '=': {line}");
        };
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn write_or_print(out: &Option<PathBuf>, content: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            fs::write(path, content).with_context(|| format!("writing {}", path.display()))?;
        }
        None => {
            print!("{content}");
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct BasisOut {
    n: usize,
    h: usize,
    dim: usize,
    dim_formula: usize,
    vectors: Vec<Vec<BasisTerm>>,
    gram: Vec<String>,
}

#[derive(Serialize)]
struct BasisTerm {
    indices: Vec<u8>,
    c: String,
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let cfg = match &cli.config {
        Some(p) => load_config(p)?,
        None => Default::default(),
    };
    let cfg_num = |key: &str, default: usize| -> usize {
        cfg.get(key).and_then(|v| v.parse().ok()).unwrap_or(default)
    };

    match cli.command {
        Command::Basis { n, h, out } => {
            if !(1..=3).contains(&n) {
                bail!("n must be between 1 and 3 for basis emission");
            }
            if h > 2 * n + 1 {
                bail!("h must satisfy 0 <= h <= 2n+1 = {}", 2 * n + 1);
            }
            let tab = tables(n);
            let basis = &tab.e0[h];
            let payload = BasisOut {
                n,
                h,
                dim: basis.dim(),
                dim_formula: e0_dim_formula(n, h),
                vectors: basis
                    .vectors
                    .iter()
                    .map(|v| {
                        v.terms()
                            .map(|(m, c)| BasisTerm {
                                indices: m.indices().to_vec(),
                                c: rat_to_string(c),
                            })
                            .collect()
                    })
                    .collect(),
                gram: basis.gram_diag.iter().map(rat_to_string).collect(),
            };
            if payload.dim != payload.dim_formula {
                bail!("dimension {} disagrees with the formula", payload.dim);
            }
            let mut text = serde_json::to_string_pretty(&payload)?;
            text.push('\n');
            write_or_print(&out, &text)?;
            Ok(0)
        }
        Command::Verify {
            suite,
            n,
            seed,
            grid,
            gauss,
            lambda,
            out,
            format,
        } => {
            let params = suites::SuiteParams {
                n: cfg_num("n", n),
                seed: cfg.get("seed").and_then(|v| v.parse().ok()).unwrap_or(seed),
                grid: cfg_num("grid", grid),
                gauss: cfg_num("gauss", gauss),
                lambda: cfg
                    .get("lambda")
                    .and_then(|v| v.parse().ok())
                    .unwrap_or(lambda),
            };
            let report = suites::run_suite(&suite, &params)?;
            let body = match format {
                Format::Json => report.to_json() + "\n",
                Format::Csv => report.to_csv(),
            };
            write_or_print(&out, &body)?;
            eprint!("{}", report.summary_lines());
            Ok(if report.all_pass() { 0 } else { 1 })
        }
        Command::Export { kind, n, h, out } => {
            let matrix = match kind.as_str() {
                "dc-matrix" => {
                    if h > 2 * n {
                        bail!("dc-matrix needs h <= 2n");
                    }
                    d_c_matrix(n, h)
                }
                "laplacian" => {
                    if h > 2 * n + 1 {
                        bail!("laplacian needs h <= 2n+1");
                    }
                    laplacian_matrix(n, h)
                }
                other => bail!("unknown export kind '{other}' (dc-matrix | laplacian)"),
            };
            let mut buf = Vec::new();
            export_to_writer(&matrix, &mut buf)?;
            buf.push(b'\n');
            fs::write(&out, &buf).with_context(|| format!("writing {}", out.display()))?;
            // round trip check
            let back = import_from_reader(&buf[..])?;
            if back != matrix {
                bail!("round-trip import mismatch");
            }
            eprintln!(
                "wrote {} ({}x{} operator matrix, source degree {})",
                out.display(),
                matrix.rows,
                matrix.cols,
                matrix.source_degree
            );
            Ok(0)
        }
        Command::Poincare {
            n,
            h,
            p,
            grid,
            gauss,
            lambda,
            seed,
            family,
            residual,
            out,
            format,
        } => {
            let p_val = match p.as_str() {
                "inf" | "infinity" => f64::INFINITY,
                s => s.parse::<f64>().context("parsing --p")?,
            };
            let ctx = Arc::new(KeucCtx::new(
                n,
                Domain::KoranyiBall { radius: 1.0 },
                QuadratureSpec::new(grid, gauss),
            )?);
            let fam = polynomial_family(n, h, family, seed);
            let cfg = RatioConfig {
                lambda,
                lp_resolution: grid,
                sup_samples: 8,
                fd_step: 0.66 / grid as f64,
                seed,
                with_residual: residual,
            };
            let table = poincare_ratio_estimate(&fam, h, p_val, ctx, &cfg)?;
            let body = match format {
                Format::Csv => {
                    let mut s =
                        String::from("form_id,h,n,norm_p,norm_inf_primitive,ratio,residual\n");
                    for r in &table.rows {
                        s.push_str(&format!(
                            "{},{},{},{},{},{},{}\n",
                            r.form_id,
                            r.h,
                            r.n,
                            fnum(r.norm_p),
                            fnum(r.norm_inf_primitive),
                            fnum(r.ratio),
                            fnum(r.residual)
                        ));
                    }
                    s
                }
                Format::Json => {
                    #[derive(Serialize)]
                    struct Row {
                        form_id: usize,
                        h: usize,
                        n: usize,
                        norm_p: String,
                        norm_inf_primitive: String,
                        ratio: String,
                        residual: String,
                    }
                    #[derive(Serialize)]
                    struct Out {
                        n: usize,
                        h: usize,
                        p: String,
                        lambda: String,
                        max_ratio: String,
                        rows: Vec<Row>,
                    }
                    let payload = Out {
                        n: table.n,
                        h: table.h,
                        p: if table.p.is_finite() {
                            fnum(table.p)
                        } else {
                            "inf".into()
                        },
                        lambda: fnum(table.lambda),
                        max_ratio: fnum(table.max_ratio),
                        rows: table
                            .rows
                            .iter()
                            .map(|r| Row {
                                form_id: r.form_id,
                                h: r.h,
                                n: r.n,
                                norm_p: fnum(r.norm_p),
                                norm_inf_primitive: fnum(r.norm_inf_primitive),
                                ratio: fnum(r.ratio),
                                residual: fnum(r.residual),
                            })
                            .collect(),
                    };
                    serde_json::to_string_pretty(&payload)? + "\n"
                }
            };
            write_or_print(&out, &body)?;
            eprintln!("max ratio: {}", fnum(table.max_ratio));
            Ok(0)
        }
        Command::Homotopy {
            n,
            h,
            grid,
            gauss,
            seed,
            fixtures,
            samples,
            out,
        } => {
            if h == 0 || h > 2 * n + 1 {
                bail!("homotopy needs 1 <= h <= 2n+1");
            }
            let ctx = Arc::new(KeucCtx::new(
                n,
                Domain::KoranyiBall { radius: 1.0 },
                QuadratureSpec::new(grid, gauss),
            )?);
            let fam = polynomial_family(n, h, fixtures, seed);
            let pts = interior_samples(n, &ctx.domain, samples, 0.3, seed);
            let mut body = String::from("fixture,h,n,residual\n");
            let mut worst: f64 = 0.0;
            for (i, phi) in fam.iter().enumerate() {
                let res = homotopy_residual(phi, ctx.clone(), &pts, 0.66 / grid as f64)?;
                worst = worst.max(res);
                body.push_str(&format!("{i},{h},{n},{}\n", fnum(res)));
            }
            write_or_print(&out, &body)?;
            eprintln!("max residual: {}", fnum(worst));
            Ok(0)
        }
        Command::Annulus {
            n,
            r1,
            r2,
            s1,
            s2,
            sampler,
            seed,
            out,
        } => {
            let kind = match sampler.as_str() {
                "latlong" => SamplerKind::LatLong,
                "random" => SamplerKind::Random { seed },
                other => bail!("unknown sampler '{other}' (latlong | random)"),
            };
            let consts = model_constants(n, kind);
            let report = annulus_admissibility(&consts, r1, r2, s1, s2)?;
            let body = serde_json::to_string_pretty(&report)? + "\n";
            write_or_print(&out, &body)?;
            Ok(if report.admissible { 0 } else { 1 })
        }
    }
}

#[allow(dead_code)]
fn flush() {
    let _ = std::io::stdout().flush();
}
