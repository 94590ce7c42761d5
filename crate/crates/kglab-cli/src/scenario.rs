//! Scenario execution: one scenario checks one estimate over a data and
//! potential family, producing an [`EstimateReport`].

use std::time::Instant;

use num_complex::Complex64;
use thiserror::Error;

use kglab::free_flow::half_wave_solution;
use kglab::norms::{
    local_smoothing_functional, sobolev_norm, strichartz_norm, weighted_l2_field,
    weighted_l2_spacetime, Weight,
};
use kglab::potential::{dyadic_radii, fp_norm, make_potential, Potential};
use kglab::resolvent::{
    remainder_field, resolvent_sweep, sphere_extension_field, tilde_u_padded, SphereDensity,
    SweepPoint,
};
use kglab::spectral::bessel_derivative;
use kglab::synth::{gaussian_packet, random_bandlimited, GaussianPacket};
use kglab::{
    check_admissible, duhamel::inhomogeneous_solve, duhamel::picard_solve, CauchyData,
    ComplexField, Grid, SpaceTimeField,
};

use crate::config::{DataSpec, EstimateId, ScenarioConfig};
use crate::report::{EstimateReport, SampleRow, SeriesRow};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid configuration:\n{}", .0.join("\n"))]
    Invalid(Vec<String>),
    #[error("runtime failure: {0}")]
    Runtime(String),
    #[error("wall-clock budget exceeded: {elapsed_ms} ms > {budget_sec} s")]
    BudgetExceeded { elapsed_ms: u128, budget_sec: u64 },
}

pub struct ScenarioOutcome {
    pub report: EstimateReport,
    /// Extra artifact for resolvent scenarios: the raw z-sweep.
    pub sweep: Option<Vec<SweepPoint>>,
}

struct Context {
    cfg: ScenarioConfig,
    grid: Grid,
    started: Instant,
}

impl Context {
    fn check_budget(&self) -> Result<(), ScenarioError> {
        let elapsed = self.started.elapsed();
        if elapsed.as_secs() >= self.cfg.budget_sec {
            return Err(ScenarioError::BudgetExceeded {
                elapsed_ms: elapsed.as_millis(),
                budget_sec: self.cfg.budget_sec,
            });
        }
        Ok(())
    }

    fn elapsed_ms(&self) -> u64 {
        self.started.elapsed().as_millis() as u64
    }

    fn time(&self) -> (f64, f64, usize) {
        let t = self.cfg.time.expect("validated");
        let steps = (t.t_end / t.dt).round() as usize;
        (t.t_end, t.dt, steps)
    }

    fn potential(&self) -> Result<Potential, ScenarioError> {
        let spec = self.cfg.potential.as_ref().expect("validated");
        make_potential(spec.family(), self.grid, spec.fp_exponent())
            .map_err(|e| ScenarioError::Runtime(format!("potential construction: {e}")))
    }

    fn scan_radii(&self) -> Vec<f64> {
        self.cfg
            .scan
            .radii
            .clone()
            .unwrap_or_else(|| dyadic_radii(&self.grid))
    }

    fn fp_value(&self, v: &Potential) -> Result<f64, ScenarioError> {
        let spec = self.cfg.potential.as_ref().expect("validated");
        let est = fp_norm(
            v,
            spec.fp_exponent(),
            self.cfg.scan.center_stride,
            &self.scan_radii(),
        )
        .map_err(|e| ScenarioError::Runtime(format!("fp norm scan: {e}")))?;
        Ok(est.value)
    }

    /// Position-data samples with stable labels.
    fn position_samples(&self) -> Vec<(String, ComplexField)> {
        match self.cfg.data.as_ref().expect("validated") {
            DataSpec::GaussianPackets { packets } => packets
                .iter()
                .enumerate()
                .map(|(i, pk)| {
                    let f = gaussian_packet(
                        self.grid,
                        &GaussianPacket {
                            center: pk.center,
                            width: pk.width,
                            carrier: pk.carrier,
                            amplitude: pk.amplitude,
                        },
                    );
                    (format!("packet_{i}"), f)
                })
                .collect(),
            DataSpec::RandomBandlimited { count, band } => (0..*count)
                .map(|i| {
                    let f = random_bandlimited(self.grid, *band, self.cfg.seed + i as u64);
                    (format!("random_{i}"), f)
                })
                .collect(),
        }
    }

    /// Cauchy-data samples: packets pair with the outgoing velocity
    /// `i⟨∇⟩f`; random samples draw an independent velocity field.
    fn cauchy_samples(&self) -> Vec<(String, CauchyData)> {
        match self.cfg.data.as_ref().expect("validated") {
            DataSpec::GaussianPackets { .. } => self
                .position_samples()
                .into_iter()
                .map(|(label, f)| {
                    let g = bessel_derivative(&f, 1.0).scale(Complex64::new(0.0, 1.0));
                    (label, CauchyData::new(f, g).expect("same grid"))
                })
                .collect(),
            DataSpec::RandomBandlimited { count, band } => (0..*count)
                .map(|i| {
                    let f = random_bandlimited(self.grid, *band, self.cfg.seed + i as u64);
                    let g = random_bandlimited(self.grid, *band, self.cfg.seed + 10_000 + i as u64);
                    (
                        format!("random_{i}"),
                        CauchyData::new(f, g).expect("same grid"),
                    )
                })
                .collect(),
        }
    }

    fn solve(&self, data: &CauchyData, v: &Potential) -> Result<SpaceTimeField, ScenarioError> {
        let (t_end, dt, _) = self.time();
        let (u, _) = picard_solve(
            data,
            v,
            t_end,
            dt,
            self.cfg.solver.tol,
            self.cfg.solver.max_iter,
        )
        .map_err(|e| ScenarioError::Runtime(format!("picard solver: {e}")))?;
        Ok(u)
    }
}

fn ratio_of(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else {
        lhs / rhs
    }
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioOutcome, ScenarioError> {
    let violations = cfg.validate();
    if !violations.is_empty() {
        return Err(ScenarioError::Invalid(violations));
    }
    let grid =
        Grid::new(cfg.grid.dim, cfg.grid.half_length, cfg.grid.points).expect("validated grid");
    let ctx = Context {
        cfg: cfg.clone(),
        grid,
        started: Instant::now(),
    };

    match cfg.estimate {
        EstimateId::WL2_HOMO => run_wl2_homo(&ctx),
        EstimateId::WL2_THM => run_wl2_thm(&ctx),
        EstimateId::LS_FREE => run_ls_free(&ctx),
        EstimateId::LS_THM => run_ls_thm(&ctx),
        EstimateId::STRICHARTZ => run_strichartz(&ctx),
        EstimateId::RESOLVENT => run_resolvent(&ctx),
        EstimateId::TRACE => run_trace(&ctx),
        EstimateId::RESTRICTION => run_restriction(&ctx),
        EstimateId::DECOMP => run_decomp(&ctx),
        EstimateId::CONTRACTION => run_contraction(&ctx),
    }
}

fn finish(
    ctx: &Context,
    fp: Option<f64>,
    samples: Vec<SampleRow>,
    argmax: Option<String>,
    series: Vec<SeriesRow>,
    sweep: Option<Vec<SweepPoint>>,
) -> Result<ScenarioOutcome, ScenarioError> {
    let report = EstimateReport::build(&ctx.cfg, fp, samples, argmax, series, ctx.elapsed_ms());
    Ok(ScenarioOutcome { report, sweep })
}

fn argmax_label(samples: &[SampleRow], detail: Option<String>) -> Option<String> {
    let best = samples.iter().max_by(|a, b| {
        a.ratio
            .partial_cmp(&b.ratio)
            .unwrap_or(std::cmp::Ordering::Equal)
    })?;
    match detail {
        Some(d) => Some(format!("{} ({d})", best.label)),
        None => Some(best.label.clone()),
    }
}

fn run_wl2_homo(ctx: &Context) -> Result<ScenarioOutcome, ScenarioError> {
    let v = ctx.potential()?;
    let fp = ctx.fp_value(&v)?;
    let (_, dt, steps) = ctx.time();
    let mut samples = Vec::new();
    for (i, (label, f)) in ctx.position_samples().into_iter().enumerate() {
        ctx.check_budget()?;
        let u = half_wave_solution(&f, 0.0, dt, steps);
        let lhs = weighted_l2_spacetime(&u, &v, Weight::Direct)
            .map_err(|e| ScenarioError::Runtime(e.to_string()))?;
        let rhs = fp.sqrt() * sobolev_norm(&f, 0.5);
        samples.push(SampleRow {
            index: i,
            label,
            lhs,
            rhs,
            ratio: ratio_of(lhs, rhs),
        });
    }
    let argmax = argmax_label(&samples, None);
    finish(ctx, Some(fp), samples, argmax, Vec::new(), None)
}

fn run_wl2_thm(ctx: &Context) -> Result<ScenarioOutcome, ScenarioError> {
    let v = ctx.potential()?;
    let fp = ctx.fp_value(&v)?;
    let mut samples = Vec::new();
    for (i, (label, data)) in ctx.cauchy_samples().into_iter().enumerate() {
        ctx.check_budget()?;
        let u = ctx.solve(&data, &v)?;
        let lhs = weighted_l2_spacetime(&u, &v, Weight::Direct)
            .map_err(|e| ScenarioError::Runtime(e.to_string()))?;
        let rhs = fp.sqrt()
            * (sobolev_norm(&data.initial_value, 0.5) + sobolev_norm(&data.initial_velocity, -0.5));
        samples.push(SampleRow {
            index: i,
            label,
            lhs,
            rhs,
            ratio: ratio_of(lhs, rhs),
        });
    }
    let argmax = argmax_label(&samples, None);
    finish(ctx, Some(fp), samples, argmax, Vec::new(), None)
}

fn run_ls_free(ctx: &Context) -> Result<ScenarioOutcome, ScenarioError> {
    let v = ctx.potential()?;
    let fp = ctx.fp_value(&v)?;
    let (_, dt, steps) = ctx.time();
    let radii = ctx.scan_radii();
    let mut samples = Vec::new();
    let mut windows = Vec::new();
    for (i, (label, f)) in ctx.position_samples().into_iter().enumerate() {
        ctx.check_budget()?;
        let u = half_wave_solution(&f, 0.0, dt, steps);
        let (lhs, window) = local_smoothing_functional(&u, 0.5, ctx.cfg.scan.center_stride, &radii)
            .map_err(|e| ScenarioError::Runtime(e.to_string()))?;
        let s = sobolev_norm(&f, 0.5);
        let rhs = s * s;
        windows.push(window);
        samples.push(SampleRow {
            index: i,
            label,
            lhs,
            rhs,
            ratio: ratio_of(lhs, rhs),
        });
    }
    let argmax = samples
        .iter()
        .zip(&windows)
        .max_by(|a, b| a.0.ratio.partial_cmp(&b.0.ratio).unwrap())
        .map(|(row, w)| {
            format!(
                "{} (window center {:?}, radius {})",
                row.label, w.center, w.radius
            )
        });
    finish(ctx, Some(fp), samples, argmax, Vec::new(), None)
}

fn run_ls_thm(ctx: &Context) -> Result<ScenarioOutcome, ScenarioError> {
    let v = ctx.potential()?;
    let fp = ctx.fp_value(&v)?;
    let radii = ctx.scan_radii();
    let mut samples = Vec::new();
    let mut windows = Vec::new();
    for (i, (label, data)) in ctx.cauchy_samples().into_iter().enumerate() {
        ctx.check_budget()?;
        let u = ctx.solve(&data, &v)?;
        let (lhs, window) = local_smoothing_functional(&u, 0.5, ctx.cfg.scan.center_stride, &radii)
            .map_err(|e| ScenarioError::Runtime(e.to_string()))?;
        let sf = sobolev_norm(&data.initial_value, 0.5);
        let sg = sobolev_norm(&data.initial_velocity, -0.5);
        let rhs = sf * sf + sg * sg;
        windows.push(window);
        samples.push(SampleRow {
            index: i,
            label,
            lhs,
            rhs,
            ratio: ratio_of(lhs, rhs),
        });
    }
    let argmax = samples
        .iter()
        .zip(&windows)
        .max_by(|a, b| a.0.ratio.partial_cmp(&b.0.ratio).unwrap())
        .map(|(row, w)| {
            format!(
                "{} (window center {:?}, radius {})",
                row.label, w.center, w.radius
            )
        });
    finish(ctx, Some(fp), samples, argmax, Vec::new(), None)
}

fn run_strichartz(ctx: &Context) -> Result<ScenarioOutcome, ScenarioError> {
    let v = ctx.potential()?;
    let fp = ctx.fp_value(&v)?;
    let t = ctx.cfg.triple.expect("validated");
    let triple = check_admissible(t.q, t.r, t.theta, ctx.grid.dim())
        .map_err(|e| ScenarioError::Runtime(e.to_string()))?;
    let mut samples = Vec::new();
    for (i, (label, data)) in ctx.cauchy_samples().into_iter().enumerate() {
        ctx.check_budget()?;
        let u = ctx.solve(&data, &v)?;
        let lhs = strichartz_norm(&u, &triple);
        let rhs = (1.0 + fp)
            * (sobolev_norm(&data.initial_value, 0.5) + sobolev_norm(&data.initial_velocity, -0.5));
        samples.push(SampleRow {
            index: i,
            label,
            lhs,
            rhs,
            ratio: ratio_of(lhs, rhs),
        });
    }
    let argmax = argmax_label(&samples, Some(format!("sigma = {}", triple.sigma)));
    finish(ctx, Some(fp), samples, argmax, Vec::new(), None)
}

fn run_resolvent(ctx: &Context) -> Result<ScenarioOutcome, ScenarioError> {
    let v = ctx.potential()?;
    let fp = ctx.fp_value(&v)?;
    let radii = ctx.scan_radii();
    let (label, f) = ctx
        .position_samples()
        .into_iter()
        .next()
        .ok_or_else(|| ScenarioError::Runtime("no data sample".into()))?;
    ctx.check_budget()?;
    let points = resolvent_sweep(
        &f,
        &v,
        fp,
        &ctx.cfg.resolvent.re_values,
        &ctx.cfg.resolvent.im_values,
        ctx.cfg.scan.center_stride,
        &radii,
    )
    .map_err(|e| ScenarioError::Runtime(e.to_string()))?;
    ctx.check_budget()?;

    let f_inv = weighted_l2_field(&f, &v, Weight::Inverse)
        .map_err(|e| ScenarioError::Runtime(e.to_string()))?;
    let mut samples = Vec::new();
    let mut series = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let rhs = fp * f_inv;
        let lhs = p.weighted_ratio * rhs;
        samples.push(SampleRow {
            index: i,
            label: format!("z={}+{}i ({label})", p.z.re, p.z.im),
            lhs,
            rhs,
            ratio: p.weighted_ratio,
        });
        series.push(SeriesRow {
            series: "ratio_wl2".into(),
            x: i as f64,
            y: p.weighted_ratio,
        });
        series.push(SeriesRow {
            series: "ratio_ls".into(),
            x: i as f64,
            y: p.smoothing_ratio,
        });
    }
    let argmax = argmax_label(&samples, None);
    finish(ctx, Some(fp), samples, argmax, series, Some(points))
}

fn run_trace(ctx: &Context) -> Result<ScenarioOutcome, ScenarioError> {
    let mut samples = Vec::new();
    let mut series = Vec::new();
    let mut index = 0;
    for &r in &ctx.cfg.sphere.sphere_radii {
        ctx.check_budget()?;
        let (np, na) = SphereDensity::suggested_nodes(r, &ctx.grid);
        let d = SphereDensity::constant(r, np, na, Complex64::new(1.0, 0.0))
            .map_err(|e| ScenarioError::Runtime(e.to_string()))?;
        let g = sphere_extension_field(&d, ctx.grid);
        for (radius, ratio) in kglab::resolvent::trace_ratios(&g, &d, &ctx.cfg.sphere.ball_radii) {
            let rhs = radius * d.density_l2().powi(2);
            samples.push(SampleRow {
                index,
                label: format!("r={r},R={radius}"),
                lhs: ratio * rhs,
                rhs,
                ratio,
            });
            series.push(SeriesRow {
                series: format!("trace_r_{r}"),
                x: radius,
                y: ratio,
            });
            index += 1;
        }
    }
    let argmax = argmax_label(&samples, None);
    finish(ctx, None, samples, argmax, series, None)
}

fn run_restriction(ctx: &Context) -> Result<ScenarioOutcome, ScenarioError> {
    let v = ctx.potential()?;
    let fp = ctx.fp_value(&v)?;
    let mut samples = Vec::new();
    let mut series = Vec::new();
    for (i, &r) in ctx.cfg.sphere.sphere_radii.iter().enumerate() {
        ctx.check_budget()?;
        let (np, na) = SphereDensity::suggested_nodes(r, &ctx.grid);
        let d = SphereDensity::constant(r, np, na, Complex64::new(1.0, 0.0))
            .map_err(|e| ScenarioError::Runtime(e.to_string()))?;
        let g = sphere_extension_field(&d, ctx.grid);
        let lhs = weighted_l2_field(&g, &v, Weight::Direct)
            .map_err(|e| ScenarioError::Runtime(e.to_string()))?;
        // rescaled form: the sphere-area growth prices in as r^{1/2}
        let rhs = r.sqrt() * fp.sqrt() * d.density_l2();
        let ratio = ratio_of(lhs, rhs);
        samples.push(SampleRow {
            index: i,
            label: format!("r={r}"),
            lhs,
            rhs,
            ratio,
        });
        series.push(SeriesRow {
            series: "restriction_vs_r".into(),
            x: r,
            y: ratio,
        });
    }
    let argmax = argmax_label(&samples, None);
    finish(ctx, Some(fp), samples, argmax, series, None)
}

/// Source `(∂_t² - Δ + 1)(packet·env)` with an envelope supported inside
/// the window: nothing radiates, so the decomposition error measures the
/// multiplier pipeline rather than wrap-around of ringing tails.
fn decomp_source(packet: &ComplexField, t_end: f64, dt: f64, steps: usize) -> SpaceTimeField {
    let stiff = bessel_derivative(packet, 2.0);
    let center = 0.45 * t_end;
    let width = t_end / 8.0;
    let env = |t: f64| (-((t - center) / width).powi(2)).exp();
    let env_dd = |t: f64| {
        let u = (t - center) / width;
        (4.0 * u * u - 2.0) / (width * width) * env(t)
    };
    let slices = (0..=steps)
        .map(|m| {
            let t = m as f64 * dt;
            packet
                .scale(Complex64::new(env_dd(t), 0.0))
                .add(&stiff.scale(Complex64::new(env(t), 0.0)))
        })
        .collect();
    SpaceTimeField::new(0.0, dt, slices).expect("validated grid")
}

fn run_decomp(ctx: &Context) -> Result<ScenarioOutcome, ScenarioError> {
    let (t_end, dt, steps) = ctx.time();
    let (label, packet) = ctx
        .position_samples()
        .into_iter()
        .next()
        .ok_or_else(|| ScenarioError::Runtime("no data sample".into()))?;
    let source = decomp_source(&packet, t_end, dt, steps);
    let u_ref = inhomogeneous_solve(&source).map_err(|e| ScenarioError::Runtime(e.to_string()))?;
    let r = remainder_field(&source).map_err(|e| ScenarioError::Runtime(e.to_string()))?;
    let scale = u_ref.l2_spacetime();

    let mut samples = Vec::new();
    for (i, &pad) in ctx.cfg.decomp.pad_factors.iter().enumerate() {
        ctx.check_budget()?;
        let tu = tilde_u_padded(&source, ctx.cfg.decomp.epsilon, pad)
            .map_err(|e| ScenarioError::Runtime(e.to_string()))?;
        let err = tu.add(&r).sub(&u_ref).l2_spacetime();
        samples.push(SampleRow {
            index: i,
            label: format!("pad={pad} ({label})"),
            lhs: err,
            rhs: scale,
            ratio: ratio_of(err, scale),
        });
    }
    let argmax = argmax_label(&samples, None);
    finish(ctx, None, samples, argmax, Vec::new(), None)
}

fn run_contraction(ctx: &Context) -> Result<ScenarioOutcome, ScenarioError> {
    let spec = ctx.cfg.potential.as_ref().expect("validated");
    let (t_end, dt, _) = ctx.time();
    let data = ctx
        .cauchy_samples()
        .into_iter()
        .next()
        .ok_or_else(|| ScenarioError::Runtime("no data sample".into()))?
        .1;

    let mut samples = Vec::new();
    let mut series = Vec::new();
    let mut asymptotic = Vec::new();
    for (i, factor) in [1.0, 0.5].into_iter().enumerate() {
        ctx.check_budget()?;
        let coupling = spec.coupling() * factor;
        let v = make_potential(
            spec.with_coupling(coupling).family(),
            ctx.grid,
            spec.fp_exponent(),
        )
        .map_err(|e| ScenarioError::Runtime(e.to_string()))?;
        let (_, trace) = picard_solve(
            &data,
            &v,
            t_end,
            dt,
            ctx.cfg.solver.tol,
            ctx.cfg.solver.max_iter,
        )
        .map_err(|e| ScenarioError::Runtime(format!("picard solver: {e}")))?;
        let ratio = *trace.contraction_ratios.last().ok_or_else(|| {
            ScenarioError::Runtime(
                "solver converged before a contraction ratio could be estimated; tighten tol"
                    .into(),
            )
        })?;
        for (k, res) in trace.residuals.iter().enumerate() {
            series.push(SeriesRow {
                series: format!("residuals_coupling_{coupling}"),
                x: k as f64,
                y: *res,
            });
        }
        asymptotic.push(ratio);
        samples.push(SampleRow {
            index: i,
            label: format!("coupling={coupling}"),
            lhs: ratio,
            rhs: 1.0,
            ratio,
        });
    }
    let quotient = asymptotic[0] / asymptotic[1];
    let argmax = Some(format!(
        "contraction ratio quotient between couplings: {quotient} (linearity predicts 2)"
    ));
    finish(ctx, None, samples, argmax, series, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ScenarioConfig;

    fn config(estimate: &str) -> ScenarioConfig {
        let json = format!(
            r#"{{
            "estimate": "{estimate}",
            "grid": {{"dim": 3, "half_length": 8.0, "points": 16}},
            "time": {{"t_end": 2.0, "dt": 0.125}},
            "potential": {{"family": "gaussian_bump", "coupling": 0.2, "width": 2.0, "p": 1.2}},
            "data": {{"kind": "random_bandlimited", "count": 2, "band": 1.5}},
            "ratio_cap": 100.0,
            "seed": 11
        }}"#
        );
        ScenarioConfig::from_json(&json).unwrap()
    }

    #[test]
    fn zero_potential_gives_zero_ratios_and_passes() {
        let mut cfg = config("WL2_HOMO");
        cfg.potential = Some(crate::config::PotentialSpec::GaussianBump {
            coupling: 0.0,
            width: 2.0,
            p: 1.2,
        });
        let out = run_scenario(&cfg).unwrap();
        assert!(out.report.pass);
        assert!(out.report.samples.iter().all(|s| s.ratio == 0.0));
        assert_eq!(out.report.max_ratio, 0.0);
    }

    #[test]
    fn invalid_config_lists_violations() {
        let mut cfg = config("WL2_HOMO");
        cfg.ratio_cap = -2.0;
        cfg.scan.center_stride = 0;
        match run_scenario(&cfg) {
            Err(ScenarioError::Invalid(errs)) => assert!(errs.len() >= 2, "{errs:?}"),
            other => panic!("expected invalid config, got {:?}", other.is_ok()),
        }
    }

    #[test]
    fn determinism_modulo_timing() {
        let cfg = config("WL2_HOMO");
        let a = run_scenario(&cfg).unwrap().report;
        let b = run_scenario(&cfg).unwrap().report;
        let va = serde_json::to_value(&a).unwrap();
        let vb = serde_json::to_value(&b).unwrap();
        assert!(crate::report::reports_equal_modulo_timing(&va, &vb));
    }

    #[test]
    fn contraction_scenario_reports_coupling_scaling() {
        let mut cfg = config("CONTRACTION");
        cfg.solver.tol = 1e-10;
        let out = run_scenario(&cfg).unwrap();
        assert_eq!(out.report.samples.len(), 2);
        let q = out.report.samples[0].ratio / out.report.samples[1].ratio;
        assert!((2.0 / 1.5..=2.0 * 1.5).contains(&q), "quotient {q}");
    }

    #[test]
    fn budget_exceeded_is_reported() {
        let mut cfg = config("WL2_THM");
        cfg.budget_sec = 0;
        match run_scenario(&cfg) {
            Err(ScenarioError::Invalid(errs)) => {
                assert!(errs.iter().any(|e| e.contains("budget")), "{errs:?}")
            }
            other => panic!("expected validation failure, got ok={}", other.is_ok()),
        }
    }
}
