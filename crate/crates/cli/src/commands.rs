use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use topokin_core::curve::{validate_on_surface, validate_smoothness, Surface, Trajectory};
use topokin_core::kinematics::{
    acceleration_magnitude, average_speed, instantaneous_speed, newton_force, MeasureMode,
    SpeedEstimate,
};
use topokin_core::measure::{image_measure, partition_arc_length, quadrature_arc_length};

use crate::scene::{load_scene, Scene};
use crate::{CliError, Command, Common, Quantity};

const SURFACE_SAMPLES: usize = 1000;
const SMOOTHNESS_SAMPLES: usize = 200;
const FD_STEP: f64 = 1e-4;
const FD_TOL: f64 = 1e-6;

const SPEED_HEADER: &str = "t,speed,converged,oracle_speed,inf_over_rungs,rungs_used";
const ACCEL_HEADER: &str = "t,acceleration,converged,oracle_acceleration,inf_over_rungs,rungs_used";

fn num(x: f64) -> String {
    format!("{x:?}")
}

pub(crate) fn dispatch(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Validate { common } => validate(&common, out),
        Command::Arclength { common, quantity } => arclength(&common, quantity, out),
        Command::Avgspeed { common } => avgspeed(&common, out),
        Command::Speed { common, point } => {
            let scene = prepare(&common)?;
            let est = instantaneous_speed(
                &scene.trajectory,
                point.at,
                &common.net_options()?,
                common.measure.into(),
                &common.measure_options()?,
            )?;
            report_estimate(SPEED_HEADER, point.at, &est, point.rungs, out)
        }
        Command::Accel { common, point } => {
            let scene = prepare(&common)?;
            let est = acceleration_magnitude(
                &scene.trajectory,
                point.at,
                &common.net_options()?,
                common.measure.into(),
                &common.measure_options()?,
            )?;
            report_estimate(ACCEL_HEADER, point.at, &est, point.rungs, out)
        }
        Command::Force { common, at } => {
            let scene = prepare(&common)?;
            let f = newton_force(&scene.trajectory, scene.mass, at)?;
            writeln!(out, "t,mass,force_x,force_y,force_z,force_norm")?;
            writeln!(
                out,
                "{},{},{},{},{},{}",
                num(at),
                num(scene.mass),
                num(f.x()),
                num(f.y()),
                num(f.z()),
                num(f.norm())
            )?;
            Ok(())
        }
        Command::Profile {
            common,
            samples,
            out: path,
            jobs,
        } => profile(&common, samples, path.as_deref(), jobs, out),
    }
}

/// Loads the scene and checks surface containment unless told not to.
fn prepare(common: &Common) -> Result<Scene, CliError> {
    let scene = load_scene(&common.scene)?;
    let tol = common.validation_tol()?;
    if !common.skip_validate && scene.surface != Surface::None {
        let report = validate_on_surface(&scene.trajectory, &scene.surface, SURFACE_SAMPLES, tol)?;
        if !report.passed {
            return Err(CliError::Validation(report.messages.join("; ")));
        }
    }
    Ok(scene)
}

fn validate(common: &Common, out: &mut dyn Write) -> Result<(), CliError> {
    let scene = load_scene(&common.scene)?;
    let tol = common.validation_tol()?;
    let traj = &scene.trajectory;
    let mut failures = Vec::new();

    writeln!(out, "surface,{}", scene.surface)?;
    if scene.surface == Surface::None {
        writeln!(out, "surface_passed,true")?;
    } else {
        let r = validate_on_surface(traj, &scene.surface, SURFACE_SAMPLES, tol)?;
        writeln!(out, "surface_samples,{}", r.samples_checked)?;
        writeln!(out, "surface_max_residual,{}", num(r.max_residual))?;
        writeln!(out, "surface_worst_t,{}", num(r.worst_t))?;
        writeln!(out, "surface_passed,{}", r.passed)?;
        failures.extend(r.messages);
    }

    let step = FD_STEP.min(traj.duration() / 8.0);
    let r = validate_smoothness(traj, SMOOTHNESS_SAMPLES, step, FD_TOL)?;
    writeln!(out, "smoothness_samples,{}", r.samples_checked)?;
    writeln!(out, "smoothness_max_error,{}", num(r.max_residual))?;
    writeln!(out, "smoothness_worst_t,{}", num(r.worst_t))?;
    writeln!(out, "smoothness_passed,{}", r.passed)?;
    failures.extend(r.messages);

    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(failures.join("; ")))
    }
}

fn arclength(common: &Common, quantity: Quantity, out: &mut dyn Write) -> Result<(), CliError> {
    let scene = prepare(common)?;
    let opts = common.measure_options()?;
    let traj = &scene.trajectory;
    let mut unconverged = Vec::new();

    let mut traversal = None;
    if matches!(quantity, Quantity::Traversal | Quantity::Both) {
        let l = partition_arc_length(traj, None, &opts)?;
        writeln!(out, "traversal_length,{}", num(l.value))?;
        writeln!(out, "traversal_lower_bound,{}", num(l.lower_bound))?;
        writeln!(out, "traversal_passes,{}", l.refinement_depth)?;
        writeln!(out, "traversal_converged,{}", l.converged)?;
        if !l.converged {
            unconverged.push("traversal length");
        }
        traversal = Some(l.value);
    }
    if matches!(quantity, Quantity::Image | Quantity::Both) {
        let m = image_measure(traj, None, &opts)?;
        writeln!(out, "image_measure,{}", num(m.value))?;
        writeln!(out, "image_converged,{}", m.converged)?;
        if !m.converged {
            unconverged.push("image measure");
        }
        if let Some(l) = traversal {
            writeln!(out, "traversal_to_image_ratio,{}", num(l / m.value))?;
        }
    }
    if quantity == Quantity::Quadrature {
        let q = quadrature_arc_length(traj, None, &opts)?;
        writeln!(out, "quadrature_length,{}", num(q))?;
    }
    if unconverged.is_empty() {
        Ok(())
    } else {
        Err(CliError::NonConvergence(format!(
            "{} did not converge",
            unconverged.join(" and ")
        )))
    }
}

fn avgspeed(common: &Common, out: &mut dyn Write) -> Result<(), CliError> {
    let scene = prepare(common)?;
    let mode: MeasureMode = common.measure.into();
    let s = average_speed(&scene.trajectory, mode, &common.measure_options()?)?;
    let numerator_key = match mode {
        MeasureMode::Set => "image_measure",
        MeasureMode::Traversal => "traversal_length",
    };
    writeln!(out, "measure,{mode}")?;
    writeln!(out, "average_speed,{}", num(s.value))?;
    writeln!(out, "{numerator_key},{}", num(s.image_meas))?;
    writeln!(out, "duration,{}", num(s.duration))?;
    writeln!(out, "converged,{}", s.converged)?;
    if s.converged {
        Ok(())
    } else {
        Err(CliError::NonConvergence("average speed did not converge".into()))
    }
}

fn row(t: f64, est: &SpeedEstimate) -> String {
    format!(
        "{},{},{},{},{},{}",
        num(t),
        num(est.value),
        est.converged,
        est.oracle_speed.map(num).unwrap_or_default(),
        num(est.inf_over_rungs),
        est.rungs.len()
    )
}

fn report_estimate(
    header: &str,
    t: f64,
    est: &SpeedEstimate,
    rungs: bool,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    writeln!(out, "{header}")?;
    writeln!(out, "{}", row(t, est))?;
    if rungs {
        writeln!(out)?;
        writeln!(out, "rung,eps,speed,image_meas,preimage_meas,measures_converged")?;
        for (k, r) in est.rungs.iter().enumerate() {
            writeln!(
                out,
                "{k},{},{},{},{},{}",
                num(r.eps),
                num(r.speed),
                num(r.image_meas),
                num(r.preimage_meas),
                r.measures_converged
            )?;
        }
    }
    if est.converged {
        Ok(())
    } else {
        Err(CliError::NonConvergence(format!(
            "estimate at t = {} did not converge after {} rungs",
            num(t),
            est.rungs.len()
        )))
    }
}

/// `n` equally spaced times from `a` to `b`, both included.
fn sample_times(traj: &Trajectory, n: usize) -> Vec<f64> {
    let (a, b) = (traj.a(), traj.b());
    (0..n)
        .map(|i| {
            if i + 1 == n {
                b
            } else {
                a + (b - a) * (i as f64) / ((n - 1) as f64)
            }
        })
        .collect()
}

fn profile(
    common: &Common,
    samples: usize,
    path: Option<&Path>,
    jobs: usize,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if samples < 2 {
        return Err(CliError::Usage(format!("--samples must be at least 2 (got {samples})")));
    }
    let scene = prepare(common)?;
    let net = common.net_options()?;
    let opts = common.measure_options()?;
    let mode: MeasureMode = common.measure.into();
    let traj = &scene.trajectory;
    let times = sample_times(traj, samples);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} worker threads: {e}")))?;
    let results: Vec<_> = pool.install(|| {
        times
            .par_iter()
            .map(|&t| instantaneous_speed(traj, t, &net, mode, &opts))
            .collect()
    });

    let mut csv = String::with_capacity(64 * (samples + 1));
    csv.push_str(SPEED_HEADER);
    csv.push('\n');
    let mut unconverged = 0;
    for (&t, est) in times.iter().zip(results) {
        let est = est?;
        if !est.converged {
            unconverged += 1;
        }
        csv.push_str(&row(t, &est));
        csv.push('\n');
    }

    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p).map_err(|e| {
                CliError::Usage(format!("cannot create {}: {e}", p.display()))
            })?);
            w.write_all(csv.as_bytes())?;
            w.flush()?;
        }
        None => out.write_all(csv.as_bytes())?,
    }
    if unconverged == 0 {
        Ok(())
    } else {
        Err(CliError::NonConvergence(format!(
            "{unconverged} of {samples} profile samples did not converge"
        )))
    }
}
