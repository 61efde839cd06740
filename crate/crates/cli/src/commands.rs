//! Subcommand implementations. Each reads resolved parameters and writes its
//! data files into the output directory; the caller adds the manifest.

use std::f64::consts::PI;
use std::fmt::Write as _;

use isde::configuration::fmt_f64;
use isde::drift::DriftModel;
use isde::experiments;
use isde::kernels::KernelModel;
use isde::potentials::GibbsModel;
use isde::sampling::{mcmc_gibbs, tridiag_ensemble, tridiag_sample_with, DppSampleConfig, DppSampler, DppWindow, EnsembleScaling, McmcConfig};
use isde::sde::{integrate_ensemble, IntegratorConfig, Scheme};
use isde::stats::{self, Bins, SpacingReference};
use isde::{rng, Configuration, Dim, LabeledState, Point};
use serde::Serialize;

use crate::output::OutputDir;
use crate::params::Params;
use crate::CliError;

fn invalid(field: &str, reason: impl Into<String>) -> CliError {
    CliError::Invalid { field: field.into(), reason: reason.into() }
}

pub fn run(params: &Params, out: &mut OutputDir) -> Result<(), CliError> {
    match params.subcommand {
        "simulate" => simulate(params, out),
        "sample-gibbs" => sample_gibbs(params, out),
        "sample-dpp" => sample_dpp(params, out),
        "kernel-eval" => kernel_eval(params, out),
        "audit" => audit(params, out),
        "stats" => stats_cmd(params, out),
        "experiment" => experiment(params, out),
        other => Err(invalid("subcommand", format!("unknown `{other}`"))),
    }
}

/// Long-format sample table: `sample,x[,y]`; a sample with no points is one row
/// with empty coordinates so that it still counts.
fn samples_csv(dim: Dim, samples: impl Iterator<Item = (Dim, Vec<f64>)>) -> String {
    let mut s = String::from(if dim == Dim::One { "sample,x\n" } else { "sample,x,y\n" });
    for (i, (d, coords)) in samples.enumerate() {
        if coords.is_empty() {
            let _ = writeln!(s, "{i},{}", if d == Dim::One { "" } else { "," });
        }
        for p in coords.chunks_exact(d.n()) {
            let row: Vec<String> = p.iter().map(|&v| fmt_f64(v)).collect();
            let _ = writeln!(s, "{i},{}", row.join(","));
        }
    }
    s
}

/// Inverse of [`samples_csv`]; samples must appear in index order.
fn read_samples(text: &str) -> Result<(Dim, Vec<Vec<f64>>), CliError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| invalid("input", "empty file"))?;
    let dim = match header.trim() {
        "sample,x" => Dim::One,
        "sample,x,y" => Dim::Two,
        other => return Err(invalid("input", format!("unexpected header `{other}`"))),
    };
    let mut samples: Vec<Vec<f64>> = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != dim.n() + 1 {
            return Err(invalid("input", format!("line {}: expected {} columns", i + 1, dim.n() + 1)));
        }
        let idx: usize = fields[0].parse().map_err(|e| invalid("input", format!("line {}: {e}", i + 1)))?;
        if idx + 1 < samples.len() || idx > samples.len() {
            return Err(invalid("input", format!("line {}: sample indices must be contiguous and increasing", i + 1)));
        }
        if idx == samples.len() {
            samples.push(Vec::new());
        }
        if fields[1..].iter().all(|f| f.is_empty()) {
            continue;
        }
        for f in &fields[1..] {
            let v: f64 = f.parse().map_err(|e| invalid("input", format!("line {}: {e}", i + 1)))?;
            samples[idx].push(v);
        }
    }
    Ok((dim, samples))
}

fn initial_state(model: &str, n: usize, beta: f64, alpha: f64, seed: u64, path: usize) -> Result<LabeledState, CliError> {
    Ok(match model {
        "finite-n" | "finite-n-ou" => {
            // Stream indices above the path streams, which drive the noise.
            tridiag_sample_with(n, beta, EnsembleScaling::Bulk, &mut rng::stream(seed, (1 << 32) + path as u64))?
        }
        "bulk" => LabeledState::increasing((0..n).map(|k| k as f64 - (n as f64 - 1.0) / 2.0).collect())?,
        "soft-edge" => {
            // Approximate Airy zeros −(3π(4k−1)/8)^{2/3}, increasing.
            let mut xs: Vec<f64> = (1..=n).map(|k| -(3.0 * PI * (4.0 * k as f64 - 1.0) / 8.0).powf(2.0 / 3.0)).collect();
            xs.reverse();
            LabeledState::increasing(xs)?
        }
        "bessel" => LabeledState::increasing((1..=n).map(|k| (PI * (k as f64 + alpha / 2.0 - 0.25)).powi(2)).collect())?,
        "ginibre" => {
            // The n sites of a square lattice of density 1/π nearest the origin.
            let side = (n as f64).sqrt().ceil() as i64 + 2;
            let s = PI.sqrt();
            let mut sites: Vec<(f64, f64)> = (-side..=side).flat_map(|i| (-side..=side).map(move |j| (i as f64 * s, j as f64 * s))).collect();
            sites.sort_by(|a, b| (a.0.hypot(a.1)).total_cmp(&b.0.hypot(b.1)).then(a.0.total_cmp(&b.0)).then(a.1.total_cmp(&b.1)));
            LabeledState::tracked(Dim::Two, sites.into_iter().take(n).flat_map(|(x, y)| [x, y]).collect())?
        }
        other => return Err(invalid("model", format!("unknown model `{other}`"))),
    })
}

#[derive(Serialize)]
struct PathSummary {
    path: usize,
    min_gap: f64,
    rejections: u64,
    substeps_by_depth: Vec<u64>,
}

fn simulate(p: &Params, out: &mut OutputDir) -> Result<(), CliError> {
    let model_name = p.str("model");
    let n: usize = p.positive("n")?;
    let beta: f64 = p.get("beta")?;
    let alpha: f64 = p.get("alpha")?;
    let r: f64 = p.get("r")?;
    let paths: usize = p.positive("paths")?;
    let seed: u64 = p.get("seed")?;
    let model = match model_name {
        "bulk" => DriftModel::Bulk { beta, r },
        "soft-edge" => DriftModel::SoftEdge { beta, r },
        "bessel" => DriftModel::Bessel { alpha, r },
        "ginibre" => DriftModel::Ginibre { r },
        "finite-n" => DriftModel::FiniteN { beta, n, model: GibbsModel::Plain },
        "finite-n-ou" => DriftModel::FiniteN { beta, n, model: GibbsModel::Ou },
        other => return Err(invalid("model", format!("unknown model `{other}`"))),
    };
    model.validate()?;
    let cfg = IntegratorConfig {
        dt: p.get("dt")?,
        max_halvings: p.get("max-halvings")?,
        horizon: p.get("horizon")?,
        scheme: Scheme::EulerMaruyama,
        seed,
        record_stride: p.get("record-stride")?,
    };
    cfg.validate()?;
    let x0 = (0..paths).map(|i| initial_state(model_name, n, beta, alpha, seed, i)).collect::<Result<Vec<_>, _>>()?;
    let records = integrate_ensemble(&x0, &model, &cfg).into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut summaries = Vec::with_capacity(paths);
    for (i, rec) in records.iter().enumerate() {
        out.write(&format!("path_{i:05}.csv"), rec.to_csv())?;
        summaries.push(PathSummary {
            path: i,
            min_gap: rec.diagnostics.min_gap,
            rejections: rec.diagnostics.rejections,
            substeps_by_depth: rec.diagnostics.substeps.clone(),
        });
    }
    let dim = model.dim();
    out.write("final_states.csv", samples_csv(dim, records.iter().map(|r| (dim, r.final_state().coords().to_vec()))))?;
    out.write_json("diagnostics.json", &serde_json::json!({ "paths": summaries }))?;
    Ok(())
}

fn sample_gibbs(p: &Params, out: &mut OutputDir) -> Result<(), CliError> {
    let n: usize = p.positive("n")?;
    let beta: f64 = p.get("beta")?;
    let samples: usize = p.positive("samples")?;
    let seed: u64 = p.get("seed")?;
    let (states, meta) = match p.str("method") {
        "mcmc" => {
            let thinning: usize = p.positive("thinning")?;
            let burn_in: usize = p.get("burn-in")?;
            let cfg = McmcConfig { steps: burn_in + samples * thinning, burn_in, thinning, proposal_scale: p.get("proposal-scale")?, seed, record_moves: 0 };
            let run = mcmc_gibbs(n, beta, &cfg)?;
            let meta = serde_json::json!({ "method": "mcmc", "acceptance_rate": run.acceptance_rate, "tuned_proposal_scale": run.proposal_scale });
            (run.states, meta)
        }
        "tridiag" => {
            let scaling = match p.str("scaling") {
                "bulk" => EnsembleScaling::Bulk,
                "edge" => EnsembleScaling::Edge,
                other => return Err(invalid("scaling", format!("expected bulk or edge, got `{other}`"))),
            };
            let states = tridiag_ensemble(n, beta, scaling, samples, seed)?;
            (states, serde_json::json!({ "method": "tridiag", "semicircle_radius": scaling.semicircle_radius(n) }))
        }
        other => return Err(invalid("method", format!("expected mcmc or tridiag, got `{other}`"))),
    };
    out.write("samples.csv", samples_csv(Dim::One, states.iter().map(|s| (Dim::One, s.coords().to_vec()))))?;
    out.write_json("meta.json", &meta)?;
    Ok(())
}

fn kernel_model(p: &Params) -> Result<KernelModel, CliError> {
    Ok(match p.str("kernel") {
        "sine" => KernelModel::Sine,
        "airy" => KernelModel::Airy,
        "bessel" => KernelModel::bessel(p.get("alpha")?)?,
        "ginibre" => KernelModel::Ginibre,
        "pearcey" => KernelModel::pearcey(),
        "tacnode" => KernelModel::tacnode(p.get("tacnode-length")?, p.get("tacnode-nodes")?)?,
        other => return Err(invalid("kernel", format!("unknown kernel `{other}`"))),
    })
}

#[derive(Serialize)]
struct DppMeta {
    kernel: String,
    nodes: usize,
    expected_count: f64,
    count_variance: f64,
    eigenvalues: Vec<f64>,
}

fn sample_dpp(p: &Params, out: &mut OutputDir) -> Result<(), CliError> {
    let model = kernel_model(p)?;
    let window = match model.dim() {
        Dim::One => DppWindow::Interval { a: p.get("a")?, b: p.get("b")? },
        Dim::Two => DppWindow::Disk { radius: p.get("radius")? },
    };
    let seed: u64 = p.get("seed")?;
    let cfg = DppSampleConfig { window, n: p.get("nodes")?, seed };
    let sampler = DppSampler::new(&model, &cfg)?;
    let samples = sampler.ensemble(p.positive("samples")?, seed);
    let dim = model.dim();
    out.write("samples.csv", samples_csv(dim, samples.iter().map(|c| (c.dim(), c.flat().to_vec()))))?;
    out.write_json(
        "meta.json",
        &DppMeta {
            kernel: model.to_string(),
            nodes: sampler.nodes().len(),
            expected_count: sampler.expected_count(),
            count_variance: sampler.count_variance(),
            eigenvalues: sampler.eigenvalues().to_vec(),
        },
    )?;
    Ok(())
}

fn mesh(p: &Params, dim: Dim) -> Result<Vec<Point>, CliError> {
    if !p.str("mesh").trim().is_empty() {
        return p
            .str("mesh")
            .split(',')
            .map(str::trim)
            .map(|s| -> Result<Point, CliError> {
                let num = |t: &str| t.trim().parse::<f64>().map_err(|e| invalid("mesh", format!("`{s}`: {e}")));
                match (dim, s.split_once(':')) {
                    (Dim::One, None) => Ok(Point::d1(num(s)?)),
                    (Dim::Two, Some((x, y))) => Ok(Point::d2(num(x)?, num(y)?)),
                    (Dim::One, Some(_)) => Err(invalid("mesh", "this kernel takes real points")),
                    (Dim::Two, None) => Err(invalid("mesh", "this kernel takes points written x:y")),
                }
            })
            .collect();
    }
    let (a, b): (f64, f64) = (p.get("from")?, p.get("to")?);
    let m: usize = p.positive("points")?;
    let t = |k: usize| if m == 1 { a } else { a + (b - a) * k as f64 / (m - 1) as f64 };
    Ok((0..m).map(|k| if dim == Dim::One { Point::d1(t(k)) } else { Point::d2(t(k), 0.0) }).collect())
}

fn kernel_eval(p: &Params, out: &mut OutputDir) -> Result<(), CliError> {
    let model = kernel_model(p)?;
    let pts = mesh(p, model.dim())?;
    let mut re = String::new();
    let mut im = String::new();
    let mut complex = false;
    for x in &pts {
        let mut row_re = Vec::with_capacity(pts.len());
        let mut row_im = Vec::with_capacity(pts.len());
        for y in &pts {
            let v = model.eval(x, y)?;
            complex |= v.im != 0.0;
            row_re.push(fmt_f64(v.re));
            row_im.push(fmt_f64(v.im));
        }
        let _ = writeln!(re, "{}", row_re.join(","));
        let _ = writeln!(im, "{}", row_im.join(","));
    }
    let mut mesh_csv = String::from(if model.dim() == Dim::One { "x\n" } else { "x,y\n" });
    for q in &pts {
        let row: Vec<String> = q.coords().iter().map(|&v| fmt_f64(v)).collect();
        let _ = writeln!(mesh_csv, "{}", row.join(","));
    }
    out.write("mesh.csv", mesh_csv)?;
    out.write("kernel.csv", re)?;
    if complex || model.dim() == Dim::Two {
        out.write("kernel_imag.csv", im)?;
    }
    Ok(())
}

fn audit(p: &Params, out: &mut OutputDir) -> Result<(), CliError> {
    let rho: fn(f64) -> f64 = match p.str("density") {
        "sine" => |_| 1.0 / PI,
        "airy" => |x| if x < 0.0 { (-x).sqrt() / PI } else { 0.0 },
        "zero" => |_| 0.0,
        other => return Err(invalid("density", format!("expected sine, airy or zero, got `{other}`"))),
    };
    let t: f64 = p.get("t")?;
    match p.str("kind") {
        "a2" => {
            let report = stats::audit_a2(&rho, t, p.get("big-r")?, &p.list::<f64>("grid")?)?;
            out.write("audit_a2.csv", report.to_csv())?;
            out.write_json("audit_a2.json", &report)?;
        }
        "a5" => {
            let report = stats::audit_a5(&rho, p.get("r")?, t, p.get("c")?)?;
            out.write_json("audit_a5.json", &report)?;
        }
        other => return Err(invalid("kind", format!("expected a2 or a5, got `{other}`"))),
    }
    Ok(())
}

fn stats_cmd(p: &Params, out: &mut OutputDir) -> Result<(), CliError> {
    let path = p.str("input");
    let text = std::fs::read_to_string(path).map_err(|e| invalid("input", format!("{path}: {e}")))?;
    let (dim, samples) = read_samples(&text)?;
    let labeled = || -> Result<Vec<LabeledState>, CliError> {
        if dim != Dim::One {
            return Err(invalid("input", "spacing and semicircle statistics need 1D samples"));
        }
        samples
            .iter()
            .map(|s| {
                let mut v = s.clone();
                v.sort_by(f64::total_cmp);
                LabeledState::increasing(v).map_err(CliError::from)
            })
            .collect()
    };
    match p.str("kind") {
        "correlation" => {
            let configs = samples.iter().map(|s| Configuration::from_flat(dim, s.clone())).collect::<Result<Vec<_>, _>>()?;
            let bins = Bins::new(p.get("from")?, p.get("to")?, p.positive("bins")?)?;
            let est = stats::empirical_correlation(&configs, p.get("k")?, bins)?;
            out.write("correlation.csv", est.to_csv())?;
        }
        "spacing" => {
            let reference = match p.str("reference") {
                "wigner" => SpacingReference::WignerSurmise2,
                "exponential" => SpacingReference::Exponential,
                other => return Err(invalid("reference", format!("expected wigner or exponential, got `{other}`"))),
            };
            let report = stats::spacing_distribution(&labeled()?, (p.get("lo")?, p.get("hi")?), reference)?;
            out.write("spacing.csv", report.to_csv())?;
            out.write_json("spacing.json", &serde_json::json!({ "ks": report.ks, "spacings": report.spacings.len(), "mean": report.mean(), "reference": report.reference }))?;
        }
        "semicircle" => {
            let states = labeled()?;
            let radius = if p.str("radius").trim().is_empty() {
                let n = states.iter().map(|s| s.len()).max().unwrap_or(0);
                2.0 * (n as f64).sqrt()
            } else {
                p.positive("radius")?
            };
            let ks = stats::semicircle_ks(&states, radius)?;
            out.write_json("semicircle.json", &serde_json::json!({ "ks": ks, "radius": radius }))?;
        }
        other => return Err(invalid("kind", format!("expected correlation, spacing or semicircle, got `{other}`"))),
    }
    Ok(())
}

fn experiment(p: &Params, out: &mut OutputDir) -> Result<(), CliError> {
    let outcome = experiments::run(p.str("id"))?;
    println!("{}", outcome.summary_line());
    out.write("outcome.csv", outcome.to_csv())?;
    out.write_json("outcome.json", &outcome)?;
    Ok(())
}
