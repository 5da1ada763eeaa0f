use std::path::{Path, PathBuf};

use anyhow::Result;
use num_traits::ToPrimitive;
use serde_json::json;

use blockcirc::{closedform, genpattern, moments, spectra, Pattern};

use crate::config::{usage, Command, OutFormat, RunConfig, SolverArg};
use crate::output::{cell, write_manifest, write_table, write_text, Table};

pub fn dispatch(run: &RunConfig, out_dir: &Path) -> Result<()> {
    std::fs::create_dir_all(out_dir)?;
    let (outputs, stats) = match &run.command {
        Command::Simulate(a) => simulate(a, out_dir)?,
        Command::Density(a) => density(a, out_dir)?,
        Command::Moments(a) => moments_cmd(a, out_dir)?,
        Command::Pairings(a) => pairings(a, out_dir)?,
        Command::PatternMoments(a) => pattern_moments(a, out_dir)?,
        Command::Spacings(a) => spacings(a, out_dir)?,
        Command::Generate(a) => generate(a, out_dir)?,
        Command::Eigs(a) => eigs(a, out_dir)?,
    };
    let manifest = write_manifest(out_dir, run, &outputs, stats)?;
    println!("wrote {}", manifest.display());
    Ok(())
}

fn simulate(
    args: &crate::config::SimulateArgs,
    dir: &Path,
) -> Result<(Vec<PathBuf>, serde_json::Value)> {
    if args.trials == 0 {
        return Err(usage("simulate needs --trials >= 1"));
    }
    if args.range <= 0.0 {
        return Err(usage("--range must be positive"));
    }
    let spec = args.ensemble.to_spec()?;
    let measures = spectra::sample_spectra(&spec, args.trials)?;

    let mut pooled = Vec::with_capacity(spec.dim * measures.len());
    for m in &measures {
        pooled.extend_from_slice(m.values());
    }
    let hist = spectra::histogram(&pooled, args.bins, (-args.range, args.range))?;

    let model = closedform::DensityModel::new(spec.period)?;
    let mut table = Table::new(&["bin_center", "density", "f_m", "f_wig"]);
    for b in 0..hist.bins() {
        let x = hist.center(b);
        table.push(vec![
            cell(x),
            cell(hist.densities[b]),
            cell(model.eval(x)),
            cell(closedform::wigner_density(x)),
        ]);
    }
    let path = write_table(dir, "histogram", &table, args.format)?;

    let orders: Vec<usize> = (1..=args.k_max).collect();
    let avg = spectra::average_moments(&measures, &orders);
    let moments_json: serde_json::Value = orders
        .iter()
        .zip(&avg)
        .map(|(k, v)| json!({"k": k, "average": v}))
        .collect();
    let stats = json!({
        "trials": args.trials,
        "pooled_eigenvalues": pooled.len(),
        "in_range": hist.count,
        "empirical_moments": moments_json,
    });
    Ok((vec![path], stats))
}

fn density(
    args: &crate::config::DensityArgs,
    dir: &Path,
) -> Result<(Vec<PathBuf>, serde_json::Value)> {
    if args.periods.is_empty() {
        return Err(usage("density needs at least one period"));
    }
    if !(args.step > 0.0) || args.range <= 0.0 {
        return Err(usage("step and range must be positive"));
    }
    let models = args
        .periods
        .iter()
        .map(|&m| closedform::DensityModel::new(m))
        .collect::<blockcirc::Result<Vec<_>>>()?;

    let mut header: Vec<String> = vec!["x".into()];
    header.extend(args.periods.iter().map(|m| format!("f_{m}")));
    header.push("f_wig".into());
    let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    let mut table = Table::new(&header_refs);

    let steps = (2.0 * args.range / args.step).round() as usize;
    for i in 0..=steps {
        let x = -args.range + i as f64 * args.step;
        let mut row = vec![cell(x)];
        row.extend(models.iter().map(|mo| cell(mo.eval(x))));
        row.push(cell(closedform::wigner_density(x)));
        table.push(row);
    }
    let path = write_table(dir, "density", &table, args.format)?;

    let sup: Vec<serde_json::Value> = models
        .iter()
        .map(|mo| {
            let d = closedform::sup_distance_to_wigner(mo.period(), 0.01)?;
            Ok(json!({"m": mo.period(), "sup_distance_to_wigner": d}))
        })
        .collect::<Result<_>>()?;
    Ok((vec![path], json!({ "wigner_gaps": sup })))
}

fn moments_cmd(
    args: &crate::config::MomentsArgs,
    dir: &Path,
) -> Result<(Vec<PathBuf>, serde_json::Value)> {
    if args.k_max == 0 {
        return Err(usage("--k-max must be >= 1"));
    }
    let table = moments::MomentTable::build(args.k_max, args.period)?;

    let mut eps = Table::new(&["k", "g", "epsilon"]);
    for (k, row) in table.epsilon.iter().enumerate() {
        for (g, v) in row.iter().enumerate() {
            eps.push(vec![(k + 1).to_string(), g.to_string(), v.to_string()]);
        }
    }
    let eps_path = write_table(dir, "epsilon", &eps, args.format)?;

    let mut mom = Table::new(&["k", "m", "moment"]);
    for (k, v) in table.moments.iter().enumerate() {
        let f = v.to_f64().unwrap();
        mom.push(vec![(k + 1).to_string(), args.period.to_string(), cell(f)]);
        println!("M_{{{};{}}} = {}", 2 * (k + 1), args.period, f);
    }
    let mom_path = write_table(dir, "moments", &mom, args.format)?;

    Ok((vec![eps_path, mom_path], json!({"k_max": args.k_max, "m": args.period})))
}

fn pairings(
    args: &crate::config::PairingsArgs,
    dir: &Path,
) -> Result<(Vec<PathBuf>, serde_json::Value)> {
    let hist = moments::genus_histogram(args.k)?;
    let mut table = Table::new(&["genus", "pairings"]);
    for (g, c) in hist.iter().enumerate() {
        table.push(vec![g.to_string(), c.to_string()]);
        println!("genus {g}: {c}");
    }
    let path = write_table(dir, "pairings", &table, args.format)?;
    let total: u64 = hist.iter().sum();
    Ok((
        vec![path],
        json!({"k": args.k, "total": total}),
    ))
}

fn pattern_moments(
    args: &crate::config::PatternMomentsArgs,
    dir: &Path,
) -> Result<(Vec<PathBuf>, serde_json::Value)> {
    let pattern = Pattern::parse(&args.pattern)?;
    if args.k_max < 2 {
        return Err(usage("--k-max must be >= 2"));
    }

    let simulated =
        genpattern::simulate_pattern_moments(&pattern, args.sim_dim, args.trials, args.k_max, args.dist.into(), args.seed)?;

    let mut table = Table::new(&["order", "analytic", "pairing_count", "simulated", "dim", "trials"]);
    for (order, sim) in &simulated {
        let analytic = match order {
            2 => Some(1.0),
            4 => genpattern::fourth_moment_analytic(&pattern).to_f64(),
            _ => None,
        };
        let counted = if *order <= 6 && args.dim % pattern.len() == 0 {
            Some(genpattern::pattern_moment_pairing_count(
                &pattern,
                args.dim,
                order / 2,
            )?)
        } else {
            None
        };
        table.push(vec![
            order.to_string(),
            analytic.map(cell).unwrap_or_default(),
            counted.map(cell).unwrap_or_default(),
            cell(*sim),
            args.sim_dim.to_string(),
            args.trials.to_string(),
        ]);
    }
    let path = write_table(dir, "pattern_moments", &table, args.format)?;
    Ok((
        vec![path],
        json!({"pattern": pattern.to_string(), "count_dim": args.dim, "sim_dim": args.sim_dim}),
    ))
}

fn spacings(
    args: &crate::config::SpacingsArgs,
    dir: &Path,
) -> Result<(Vec<PathBuf>, serde_json::Value)> {
    if args.trials == 0 {
        return Err(usage("spacings needs --trials >= 1"));
    }
    let spec = args.ensemble.to_spec()?;
    if args.central < 2 || args.central > spec.dim {
        return Err(usage("--central must be in 2..=N"));
    }
    let tol = args
        .dedup_tol
        .unwrap_or_else(|| spectra::default_dedup_tol(spec.dim));
    let measures = spectra::sample_spectra(&spec, args.trials)?;
    let per_trial = measures
        .iter()
        .map(|m| spectra::central_spacings(m, args.central, tol))
        .collect::<blockcirc::Result<Vec<_>>>()?;
    let pooled = spectra::pool_spacings(&per_trial);

    let mut table = Table::new(&["spacing"]);
    for s in &pooled.spacings {
        table.push(vec![cell(*s)]);
    }
    let path = write_table(dir, "spacings", &table, args.format)?;

    let ks = spectra::ks_distance_to_exponential(&pooled.spacings);
    let stats = json!({
        "trials": args.trials,
        "central": args.central,
        "dedup_tol": tol,
        "zero_fraction": pooled.zero_fraction(),
        "retained": pooled.spacings.len(),
        "ks_to_exponential": ks,
    });
    Ok((vec![path], stats))
}

fn generate(
    args: &crate::config::GenerateArgs,
    dir: &Path,
) -> Result<(Vec<PathBuf>, serde_json::Value)> {
    let spec = args.ensemble.to_spec()?;
    let mat = spec.build_matrix()?;
    let matrix_path = dir.join("matrix.csv");
    write_text(&matrix_path, &mat.to_csv())?;
    let desc_path = dir.join("matrix.json");
    let mut desc = serde_json::to_string_pretty(&spec)?;
    desc.push('\n');
    write_text(&desc_path, &desc)?;
    let stats = json!({
        "free_parameters": spec.count_free_parameters()?,
        "dim": spec.dim,
    });
    Ok((vec![matrix_path, desc_path], stats))
}

fn eigs(
    args: &crate::config::EigsArgs,
    dir: &Path,
) -> Result<(Vec<PathBuf>, serde_json::Value)> {
    let spec = args.ensemble.to_spec()?;
    let mat = spec.build_matrix()?;
    let measure = match args.solver {
        SolverArg::Dense => spectra::eigs_dense(&mat)?,
        SolverArg::Fast => spectra::eigs_block_circulant(&spec, &mat)?,
        SolverArg::Auto => {
            if spec.kind.is_circulant() {
                spectra::eigs_block_circulant(&spec, &mat)?
            } else {
                spectra::eigs_dense(&mat)?
            }
        }
    };
    let mut table = Table::new(&["eigenvalue"]);
    for v in measure.values() {
        table.push(vec![cell(*v)]);
    }
    let path = write_table(dir, "eigenvalues", &table, OutFormat::Csv)?;
    let stats = json!({
        "dim": spec.dim,
        "m2": measure.empirical_moment(2),
        "m4": measure.empirical_moment(4),
    });
    Ok((vec![path], stats))
}
