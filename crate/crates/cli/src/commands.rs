//! The five subcommand runners. Each resolves its configuration, computes,
//! writes CSV tables atomically, and always leaves a manifest behind, even
//! when the computation fails partway.

use crate::config::{load, RunConfig};
use crate::manifest::ManifestBuilder;
use crate::CommonArgs;
use anyhow::Result;

fn finish(
    mut builder: ManifestBuilder,
    out_dir: &std::path::Path,
    result: Result<()>,
) -> Result<()> {
    if let Err(e) = &result {
        builder.status_err(e);
    }
    builder.write(out_dir)?;
    result
}

fn load_common(common: &CommonArgs) -> Result<RunConfig> {
    load(common.preset.as_deref(), common.config.as_deref())
}

pub mod wells {
    use super::*;
    use crate::output::Csv;
    use cavity_cooling::geometry::{fort_shift, well_atlas, Position};

    pub fn run(common: &CommonArgs) -> Result<()> {
        let cfg = load_common(common)?;
        let mut manifest = ManifestBuilder::new("wells", &cfg);
        let result = (|| -> Result<()> {
            let params = cfg.system_params()?;
            manifest.params(&params);
            let mut csv = Csv::new(&["well", "z_um", "g_over_g0", "s_over_s0"]);
            for w in well_atlas(&params) {
                let s = fort_shift(&Position::on_axis(w.antinode_z), &params);
                csv.row(&[
                    w.index.into(),
                    (w.antinode_z * 1e6).into(),
                    (w.g_at_antinode / params.g0).into(),
                    (s.value / params.s0).into(),
                ]);
            }
            csv.write(&common.out.join("wells.csv"))?;
            manifest.output("wells.csv");
            Ok(())
        })();
        finish(manifest, &common.out, result)
    }
}

pub mod coefficients {
    use super::*;
    use crate::output::Csv;
    use cavity_cooling::coefficients::{truncation_check, CoefficientEngine};

    pub fn run(
        common: &CommonArgs,
        zmin: Option<f64>,
        zmax: Option<f64>,
        nz: Option<usize>,
        check_convergence: bool,
    ) -> Result<()> {
        let mut cfg = load_common(common)?;
        if let Some(v) = zmin {
            cfg.sweep.zmin_lambda_f = v;
        }
        if let Some(v) = zmax {
            cfg.sweep.zmax_lambda_f = v;
        }
        if let Some(v) = nz {
            cfg.sweep.nz = v;
        }
        cfg.validate()?;
        let mut manifest = ManifestBuilder::new("coefficients", &cfg);
        let result = (|| -> Result<()> {
            let params = cfg.system_params()?;
            manifest.params(&params);
            let engine = CoefficientEngine::new(params.clone());
            let lf = params.lambda_fort;
            let mut csv = Csv::new(&[
                "z_lambda_f",
                "rho_um",
                "photons",
                "excitation",
                "f0_z_newton",
                "f0_rho_newton",
                "beta_zz_per_s",
                "d_zz_m2_per_s3",
                "d_se_x_m2_per_s3",
                "d_se_z_m2_per_s3",
                "d_ratio",
            ]);
            let n = cfg.sweep.nz;
            for &rho_um in &cfg.sweep.rho_um {
                for i in 0..n {
                    let z_lf = cfg.sweep.zmin_lambda_f
                        + (cfg.sweep.zmax_lambda_f - cfg.sweep.zmin_lambda_f) * i as f64
                            / (n - 1) as f64;
                    let s = engine.sample(z_lf * lf, rho_um * 1e-6)?;
                    csv.row(&[
                        z_lf.into(),
                        rho_um.into(),
                        s.photons.into(),
                        s.excitation.into(),
                        s.force[2].into(),
                        s.force[0].into(),
                        s.beta_zz().into(),
                        s.d_zz().into(),
                        s.d_se[0].into(),
                        s.d_se[2].into(),
                        s.d_ratio.into(),
                    ]);
                }
            }
            csv.write(&common.out.join("coefficients.csv"))?;
            manifest.output("coefficients.csv");
            if check_convergence {
                let mid =
                    0.5 * (cfg.sweep.zmin_lambda_f + cfg.sweep.zmax_lambda_f) * lf;
                let check = truncation_check(&params, mid, 0.0)?;
                manifest.detail("truncation_check_at_sweep_center", check);
            }
            Ok(())
        })();
        finish(manifest, &common.out, result)
    }
}

pub mod dressed {
    use super::*;
    use crate::output::Csv;
    use cavity_cooling::dressed::dressed_point;
    use cavity_cooling::params::angular_to_mhz;

    pub fn run(
        common: &CommonArgs,
        zmin: Option<f64>,
        zmax: Option<f64>,
        nz: Option<usize>,
    ) -> Result<()> {
        let mut cfg = load_common(common)?;
        if let Some(v) = zmin {
            cfg.sweep.zmin_lambda_f = v;
        }
        if let Some(v) = zmax {
            cfg.sweep.zmax_lambda_f = v;
        }
        if let Some(v) = nz {
            cfg.sweep.nz = v;
        }
        cfg.validate()?;
        let mut manifest = ManifestBuilder::new("dressed", &cfg);
        let result = (|| -> Result<()> {
            let params = cfg.system_params()?;
            manifest.params(&params);
            let lf = params.lambda_fort;
            let mut csv = Csv::new(&[
                "z_lambda_f",
                "delta_plus_mhz",
                "delta_minus_mhz",
                "gamma_minus_mhz",
                "omega_minus_mhz",
                "n_minus",
                "sisyphus_rate_per_s",
            ]);
            let n = cfg.sweep.nz;
            for i in 0..n {
                let z_lf = cfg.sweep.zmin_lambda_f
                    + (cfg.sweep.zmax_lambda_f - cfg.sweep.zmin_lambda_f) * i as f64
                        / (n - 1) as f64;
                let d = dressed_point(&params, z_lf * lf);
                csv.row(&[
                    z_lf.into(),
                    angular_to_mhz(d.delta_plus).into(),
                    angular_to_mhz(d.delta_minus).into(),
                    angular_to_mhz(d.gamma_minus).into(),
                    angular_to_mhz(d.omega_minus).into(),
                    d.n_minus.into(),
                    d.sisyphus_rate.into(),
                ]);
            }
            csv.write(&common.out.join("dressed.csv"))?;
            manifest.output("dressed.csv");
            Ok(())
        })();
        finish(manifest, &common.out, result)
    }
}

pub mod saturation {
    use super::*;
    use crate::output::{Csv, CsvField};
    use cavity_cooling::averages::{saturation_scan, AverageWindow};
    use cavity_cooling::geometry::well;

    pub fn run(common: &CommonArgs, well_override: Option<usize>) -> Result<()> {
        let mut cfg = load_common(common)?;
        if let Some(w) = well_override {
            cfg.saturation.well = w;
        }
        cfg.validate()?;
        let mut manifest = ManifestBuilder::new("saturation", &cfg);
        let result = (|| -> Result<()> {
            let params = cfg.system_params()?;
            manifest.params(&params);
            let w = well(&params, cfg.saturation.well)
                .ok_or_else(|| anyhow::anyhow!("well {} out of range", cfg.saturation.well))?;
            let window = match cfg.saturation.window_fraction {
                Some(f) => AverageWindow::CenteredFraction(f),
                None => AverageWindow::FullWell,
            };
            let scan = saturation_scan(
                &params,
                &w,
                &cfg.saturation.drive_photons,
                window,
                cfg.saturation.n_samples,
            )?;
            let mut csv = Csv::new(&[
                "drive_photons",
                "beta_zz_per_s",
                "d_zz_total_m2_per_s3",
                "v_rms_z_m_per_s",
                "n_max",
            ]);
            for p in &scan {
                csv.row(&[
                    p.drive_photons.into(),
                    p.beta_zz.into(),
                    p.d_zz_total.into(),
                    p.v_rms_z
                        .map(CsvField::Float)
                        .unwrap_or(CsvField::Str("undefined".into())),
                    p.n_max.into(),
                ]);
            }
            csv.write(&common.out.join("saturation.csv"))?;
            manifest.output("saturation.csv");
            Ok(())
        })();
        finish(manifest, &common.out, result)
    }
}

pub mod simulate {
    use super::*;
    use crate::output::Csv;
    use cavity_cooling::ensemble::run_ensemble;
    use cavity_cooling::geometry::well;
    use cavity_cooling::grid::CoefficientGrid;
    use cavity_cooling::trajectory::TrajectoryConfig;

    #[allow(clippy::too_many_arguments)]
    pub fn run(
        common: &CommonArgs,
        n: Option<usize>,
        seed: Option<u64>,
        dt: Option<f64>,
        tmax: Option<f64>,
        well_override: Option<usize>,
        nz: Option<usize>,
        nrho: Option<usize>,
    ) -> Result<()> {
        let mut cfg = load_common(common)?;
        if let Some(v) = n {
            cfg.simulate.n_trajectories = v;
        }
        if let Some(v) = seed {
            cfg.simulate.seed = v;
        }
        if let Some(v) = dt {
            cfg.simulate.dt_ns = v;
        }
        if let Some(v) = tmax {
            cfg.simulate.t_max_ms = v;
        }
        if let Some(v) = well_override {
            cfg.simulate.well = v;
        }
        if let Some(v) = nz {
            cfg.grid.nz = v;
        }
        if let Some(v) = nrho {
            cfg.grid.nrho = v;
        }
        cfg.validate()?;
        let mut manifest = ManifestBuilder::new("simulate", &cfg);
        let result = (|| -> Result<()> {
            let params = cfg.system_params()?;
            manifest.params(&params);
            let w = well(&params, cfg.simulate.well)
                .ok_or_else(|| anyhow::anyhow!("well {} out of range", cfg.simulate.well))?;
            let rho_max = cfg.grid.rho_max_w0 * params.waist;
            let grid = CoefficientGrid::build(&params, &w, cfg.grid.nz, cfg.grid.nrho, rho_max)?;
            manifest.detail("grid", &grid.meta);

            let template = TrajectoryConfig {
                initial_position: [
                    0.0,
                    cfg.simulate.initial_y_w0 * params.waist,
                    cfg.simulate.initial_z_lambda_f * params.lambda_fort,
                ],
                initial_velocity: [
                    cfg.simulate.initial_velocity_cm_s[0] / 100.0,
                    cfg.simulate.initial_velocity_cm_s[1] / 100.0,
                    cfg.simulate.initial_velocity_cm_s[2] / 100.0,
                ],
                dt: cfg.simulate.dt_ns * 1e-9,
                t_max: cfg.simulate.t_max_ms * 1e-3,
                z_bounds: w.z_bounds,
                rho_max,
                sample_stride: cfg.simulate.sample_stride.max(1),
                seed: 0,
            };
            let (stats, flagged) = run_ensemble(
                cfg.simulate.n_trajectories,
                &template,
                &grid,
                cfg.simulate.seed,
                &cfg.simulate.series_trajectories,
            );

            let mut csv = Csv::new(&["index", "trapping_time_s", "v_rms_z_m_per_s", "exit_reason"]);
            for t in &stats.per_trajectory {
                csv.row(&[
                    t.index.into(),
                    t.trapping_time.into(),
                    t.v_rms_z.into(),
                    t.exit_reason.as_str().into(),
                ]);
            }
            csv.write(&common.out.join("trajectories.csv"))?;
            manifest.output("trajectories.csv");

            let mut csv = Csv::new(&["t_s", "survival_probability"]);
            for &(t, p) in &stats.survival {
                csv.row(&[t.into(), p.into()]);
            }
            csv.write(&common.out.join("survival.csv"))?;
            manifest.output("survival.csv");

            for (k, traj) in &flagged {
                let mut csv = Csv::new(&["t_s", "z_m", "rho_m", "v_z_m_per_s", "photons"]);
                for pt in &traj.series {
                    csv.row(&[
                        pt.t.into(),
                        pt.z.into(),
                        pt.rho().into(),
                        pt.v_z.into(),
                        pt.photons.into(),
                    ]);
                }
                let name = format!("series_{k:04}.csv");
                csv.write(&common.out.join(&name))?;
                manifest.output(&name);
            }

            manifest.detail("seed_base", cfg.simulate.seed);
            manifest.detail("fraction_untrapped", stats.fraction_untrapped);
            manifest.detail("mean_trapping_time_s", stats.mean_trapping_time());
            match &stats.tail_fit {
                Ok(fit) => manifest.detail("tail_fit", fit),
                Err(e) => manifest.detail("tail_fit_error", e.to_string()),
            };
            Ok(())
        })();
        finish(manifest, &common.out, result)
    }
}
