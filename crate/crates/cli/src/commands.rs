//! The four subcommands: trajectory, ensemble, sweep, field-pdf.
//!
//! Each writes deterministic files into the configured output directory and
//! prints the paths it wrote.

use suv_core::{
    field_pdf_histogram, run_ensemble, run_ensemble_stratified, run_trajectory,
    run_trajectory_with_draws, sweep, EnsembleReport, Error, SeedSpec, SweepAxis, SweepTable,
};

use crate::config::Validated;
use crate::output::{fmt_f64, provenance, write_file, write_json, CsvFile};
use crate::svg::{Plot, Series};
use crate::CliError;

fn map_core(e: Error) -> CliError {
    match e {
        Error::NumericalBlowup { .. } | Error::EnsembleBlowup { .. } => {
            CliError::Numerical(e.to_string())
        }
        other => CliError::Config(other.to_string()),
    }
}

pub fn cmd_trajectory(v: &Validated) -> Result<(), CliError> {
    let record = match &v.forced_draws {
        Some(draws) => run_trajectory_with_draws(&v.initial, &v.model, &v.integrator, draws),
        None => run_trajectory(
            &v.initial,
            &v.model,
            &v.integrator,
            SeedSpec::new(v.config.master_seed, 0),
        ),
    }
    .map_err(map_core)?;

    let n = v.model.n();
    let header: String = std::iter::once("t".to_string())
        .chain((0..n).map(|j| format!("w_{j}")))
        .collect::<Vec<_>>()
        .join(",");
    let mut csv = CsvFile::new(&v.config, &header);
    for (t, w) in record.times.iter().zip(&record.weights) {
        let mut row = vec![fmt_f64(*t)];
        row.extend(w.as_slice().iter().map(|x| fmt_f64(*x)));
        csv.row(&row);
    }
    let path = csv.write(&v.out_dir, "trajectory.csv")?;
    println!("wrote {}", path.display());

    if v.config.svg {
        let series = (0..n)
            .map(|j| Series {
                label: format!("w_{j}"),
                points: record
                    .times
                    .iter()
                    .zip(&record.weights)
                    .map(|(t, w)| (*t, w.as_slice()[j]))
                    .collect(),
            })
            .collect();
        let plot = Plot {
            title: format!("weights vs time ({})", v.config.model),
            x_label: "t".into(),
            y_label: "w_j".into(),
            log_x: false,
            series,
        };
        let path = write_file(
            &v.out_dir,
            "trajectory.svg",
            plot.render(&provenance(&v.config)).as_bytes(),
        )?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn deviation_csv(
    v: &Validated,
    report: &EnsembleReport,
    name: &str,
) -> Result<std::path::PathBuf, CliError> {
    let mut csv = CsvFile::new(&v.config, "t,deviation");
    for (t, dev) in &report.deviation_series {
        csv.row(&[fmt_f64(*t), fmt_f64(*dev)]);
    }
    csv.write(&v.out_dir, name)
}

#[derive(serde::Serialize)]
struct EnsembleDocument<'a> {
    config: &'a crate::config::RunConfig,
    report: &'a EnsembleReport,
}

pub fn cmd_ensemble(v: &Validated) -> Result<(), CliError> {
    let report = if v.config.stratified {
        run_ensemble_stratified(
            &v.initial,
            &v.model,
            &v.integrator,
            v.config.n_trajectories,
            v.config.master_seed,
        )
    } else {
        run_ensemble(
            &v.initial,
            &v.model,
            &v.integrator,
            v.config.n_trajectories,
            v.config.master_seed,
        )
    }
    .map_err(map_core)?;

    let path = write_json(
        &v.out_dir,
        "ensemble.json",
        &EnsembleDocument {
            config: &v.config,
            report: &report,
        },
    )?;
    println!("wrote {}", path.display());
    let path = deviation_csv(v, &report, "deviation.csv")?;
    println!("wrote {}", path.display());

    if v.config.svg {
        let plot = Plot {
            title: format!("Born deviation vs time ({})", v.config.model),
            x_label: "t".into(),
            y_label: "L1 deviation".into(),
            log_x: true,
            series: vec![Series {
                label: format!("n = {}", report.n_trajectories),
                points: report.deviation_series.clone(),
            }],
        };
        let path = write_file(
            &v.out_dir,
            "deviation.svg",
            plot.render(&provenance(&v.config)).as_bytes(),
        )?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

pub fn cmd_sweep(v: &Validated) -> Result<(), CliError> {
    let Some((axis, values)) = &v.sweep else {
        return Err(CliError::Config(
            "sweep_axis: required for the sweep command (dt or eta)".into(),
        ));
    };
    let table: SweepTable = sweep(
        &v.initial,
        &v.model,
        &v.integrator,
        *axis,
        values,
        v.config.n_trajectories,
        v.config.master_seed,
    )
    .map_err(map_core)?;

    let mut csv = CsvFile::new(&v.config, "param,deviation,stderr");
    for p in &table.points {
        csv.row(&[fmt_f64(p.value), fmt_f64(p.deviation), fmt_f64(p.std_err)]);
    }
    let path = csv.write(&v.out_dir, "sweep.csv")?;
    println!("wrote {}", path.display());

    let axis_name = match axis {
        SweepAxis::Dt => "dt",
        SweepAxis::Eta => "eta",
    };
    for (point, report) in table.points.iter().zip(&table.reports) {
        let name = format!("deviation_{axis_name}_{}.csv", point.value);
        let path = deviation_csv(v, report, &name)?;
        println!("wrote {}", path.display());
    }

    if v.config.svg {
        let series = table
            .points
            .iter()
            .zip(&table.reports)
            .map(|(point, report)| Series {
                label: format!("{axis_name} = {}", point.value),
                points: report.deviation_series.clone(),
            })
            .collect();
        let plot = Plot {
            title: format!("Born deviation vs time, {axis_name} sweep ({})", v.config.model),
            x_label: "t".into(),
            y_label: "L1 deviation".into(),
            log_x: true,
            series,
        };
        let path = write_file(
            &v.out_dir,
            "sweep.svg",
            plot.render(&provenance(&v.config)).as_bytes(),
        )?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

pub fn cmd_field_pdf(v: &Validated) -> Result<(), CliError> {
    let mut overlays = Vec::new();
    let single = v.field_specs.len() == 1;
    for (idx, spec) in v.field_specs.iter().enumerate() {
        let hist = field_pdf_histogram(
            spec,
            v.config.field_x,
            v.config.samples,
            v.config.bins,
            SeedSpec::new(v.config.master_seed, idx as u64),
        )
        .map_err(map_core)?;
        let centers = hist.centers();
        let densities = hist.densities();

        let mut csv = CsvFile::new(&v.config, "bin_center,density");
        for (c, d) in centers.iter().zip(&densities) {
            csv.row(&[fmt_f64(*c), fmt_f64(*d)]);
        }
        let name = if single {
            "field_pdf.csv".to_string()
        } else {
            format!("field_pdf_eta_{}.csv", spec.eta())
        };
        let path = csv.write(&v.out_dir, &name)?;
        println!("wrote {}", path.display());

        overlays.push(Series {
            label: format!("eta = {}", spec.eta()),
            points: centers.iter().cloned().zip(densities).collect(),
        });
    }

    if v.config.svg {
        let plot = Plot {
            title: "random field probability density".into(),
            x_label: "field value".into(),
            y_label: "density".into(),
            log_x: false,
            series: overlays,
        };
        let path = write_file(
            &v.out_dir,
            "field_pdf.svg",
            plot.render(&provenance(&v.config)).as_bytes(),
        )?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
