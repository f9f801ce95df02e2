use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use mfgf::conformal::{focal_sets, prediction_set, FocalSystem, NonconformityScore};
use mfgf::consistency::{m_over_domain, min_sample_size, verify_pointwise, verify_uniform};
use mfgf::data_model::{BoundedSample, Interval, LossSpec, ThetaGrid, TrueModel};
use mfgf::risk::{risk_curve, RiskSource};
use mfgf::sim::{coverage_experiment, run_replications, SimConfig};
use mfgf::textio::{fmt_real, focal_to_text, parse_real, prediction_to_text, write_summary_dir};
use mfgf::MfgfError;

use crate::args::{CoverageArgs, DataArgs, LossArgs, PredictArgs, RiskCurveArgs, SimulateArgs, ThetaArgs, VerifyArgs};
use crate::error::CliError;
use crate::svg;

type Result<T> = std::result::Result<T, CliError>;

const CONTOUR_POINTS: usize = 1001;

pub struct Ctx<'a> {
    pub out: &'a Path,
    pub seed: u64,
    pub workers: usize,
}

impl Ctx<'_> {
    fn write(&self, name: &str, contents: &str) -> Result<()> {
        fs::create_dir_all(self.out).map_err(|e| CliError::io(self.out, e))?;
        let path = self.out.join(name);
        fs::write(&path, contents).map_err(|e| CliError::io(&path, e))
    }
}

pub fn parse_data(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if !line.is_empty() {
            out.push(parse_real(line)?);
        }
    }
    Ok(out)
}

fn load_sample(data: &DataArgs, lo: f64, hi: f64) -> Result<BoundedSample> {
    let values = match (&data.data, &data.values) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            parse_data(&text)?
        }
        (None, Some(v)) => v.clone(),
        (None, None) => return Err(CliError::Usage("give --data FILE or --values".into())),
    };
    Ok(BoundedSample::new(&values, lo, hi)?)
}

fn parse_score(s: &str) -> Result<NonconformityScore> {
    match s {
        "identity" => Ok(NonconformityScore::Identity),
        "loo-mean" => Ok(NonconformityScore::DistanceToLooMean),
        other => Err(CliError::config(format!("unknown score `{other}` (identity, loo-mean)"))),
    }
}

fn parse_model(s: &str, lo: f64, hi: f64) -> Result<TrueModel> {
    match s {
        "truncnorm" => Ok(TrueModel::truncated_std_normal(lo, hi)?),
        other => Err(CliError::config(format!("unknown model `{other}` (truncnorm)"))),
    }
}

fn build_loss(args: &LossArgs, lo: f64, hi: f64) -> Result<LossSpec> {
    let domain = Interval::new(args.domain_lo.unwrap_or(lo), args.domain_hi.unwrap_or(hi))?;
    match args.loss.as_str() {
        "squared" => Ok(LossSpec::squared(domain)),
        "absolute" => Ok(LossSpec::absolute(domain)),
        other => match other.strip_prefix("constant:") {
            Some(c) => Ok(LossSpec::constant(parse_real(c)?, domain)?),
            None => Err(CliError::config(format!("unknown loss `{other}` (squared, absolute, constant:C)"))),
        },
    }
}

fn build_grid(args: &ThetaArgs, lo: f64, hi: f64, count: usize) -> Result<ThetaGrid> {
    let (lo, hi) = (args.theta_lo.unwrap_or(lo), args.theta_hi.unwrap_or(hi));
    let count = args.theta_count.unwrap_or(count);
    Ok(if lo == hi && count == 1 { ThetaGrid::single(lo)? } else { ThetaGrid::new(lo, hi, count)? })
}

fn focal_for(sample: &BoundedSample, score: &NonconformityScore) -> Result<FocalSystem> {
    let grid = if score.is_identity() { None } else { Some(FocalSystem::default_grid(sample)?) };
    Ok(focal_sets(sample, score, grid.as_ref())?)
}

pub fn predict(ctx: &Ctx, a: &PredictArgs) -> Result<()> {
    let sample = load_sample(&a.data, a.support.lo, a.support.hi)?;
    let score = parse_score(&a.score)?;
    let focal = focal_for(&sample, &score)?;
    let set = prediction_set(&focal, a.alpha)?;

    let mut contour = String::from("y,contour\n");
    let (lo, hi) = focal.support();
    for i in 0..CONTOUR_POINTS {
        let y = if i == CONTOUR_POINTS - 1 { hi } else { lo + (hi - lo) * i as f64 / (CONTOUR_POINTS - 1) as f64 };
        let _ = writeln!(contour, "{},{}", fmt_real(y), fmt_real(focal.contour(y)?));
    }
    ctx.write("focal_sets.txt", &focal_to_text(&focal))?;
    ctx.write("prediction_set.txt", &prediction_to_text(&set, &focal))?;
    ctx.write("contour.csv", &contour)?;

    let region: Vec<String> = set.region.iter().map(|(l, h)| format!("({}, {})", fmt_real(*l), fmt_real(*h))).collect();
    println!("n = {}, k = {}, coverage = {}", set.n, set.k, fmt_real(set.nominal_coverage));
    println!("region = {}", region.join(" u "));
    Ok(())
}

pub fn risk_curve_cmd(ctx: &Ctx, a: &RiskCurveArgs) -> Result<()> {
    let (lo, hi) = (a.support.lo, a.support.hi);
    let sample = load_sample(&a.data, lo, hi)?;
    let loss = build_loss(&a.loss, lo, hi)?;
    let dom = loss.theta_domain();
    let grid = build_grid(&a.theta, dom.lo, dom.hi, 201)?;
    let model = a.model.as_deref().map(|m| parse_model(m, lo, hi)).transpose()?;

    let empirical = risk_curve(&loss, RiskSource::Empirical(&sample), &grid)?;
    let upper = if loss.convex_in_y() {
        risk_curve(&loss, RiskSource::UpperClosedForm(&sample), &grid)?
    } else {
        let focal = focal_sets(&sample, &NonconformityScore::Identity, None)?;
        risk_curve(&loss, RiskSource::UpperGeneral(&focal), &grid)?
    };
    let truth = model.as_ref().map(|m| risk_curve(&loss, RiskSource::True(m), &grid)).transpose()?;

    let mut csv = String::from("theta,empirical,upper,true\n");
    for (i, &t) in grid.points().iter().enumerate() {
        let tv = truth.as_ref().map(|c| fmt_real(c.values[i])).unwrap_or_default();
        let _ = writeln!(csv, "{},{},{},{}", fmt_real(t), fmt_real(empirical.values[i]), fmt_real(upper.values[i]), tv);
    }
    ctx.write("risk_curve.csv", &csv)?;
    println!("wrote {} rows to {}", grid.count(), ctx.out.join("risk_curve.csv").display());
    Ok(())
}

pub fn simulate(ctx: &Ctx, a: &SimulateArgs) -> Result<()> {
    let (lo, hi) = (a.support.lo, a.support.hi);
    let model = parse_model(&a.model, lo, hi)?;
    let loss = build_loss(&a.loss, lo, hi)?;
    let config = SimConfig {
        model,
        loss,
        n_values: a.n_values.clone(),
        replications: a.replications,
        theta_grid: build_grid(&a.theta, -2.0, 2.0, 401)?,
        percentiles: a.percentiles.clone(),
        histogram_bins: a.bins,
        master_seed: ctx.seed,
    };
    let summary = run_replications(&config, ctx.workers)?;
    write_summary_dir(&summary, &config, ctx.out).map_err(|e| CliError::io(ctx.out, e))?;

    if a.svg {
        let pts = |c: &mfgf::risk::RiskCurve| c.iter().collect::<Vec<_>>();
        let bands: Vec<svg::Band> = summary
            .per_n
            .iter()
            .map(|s| svg::Band {
                label: format!("n = {}", s.n),
                median: pts(&s.median),
                lo: pts(&s.band_lo),
                hi: pts(&s.band_hi),
            })
            .collect();
        let truth = risk_curve(&config.loss, RiskSource::True(&config.model), &config.theta_grid)?;
        let truth = pts(&truth);
        ctx.write("risk_curves.svg", &svg::risk_chart(&bands, Some(("true risk", &truth))))?;
        let panels: Vec<(String, &mfgf::sim::Histogram)> =
            summary.per_n.iter().map(|s| (format!("n = {}", s.n), &s.histogram)).collect();
        ctx.write("minimizer_histograms.svg", &svg::histogram_chart(&panels))?;
    }
    for s in &summary.per_n {
        let mean = s.minimizers.iter().sum::<f64>() / s.minimizers.len() as f64;
        println!("n = {}: mean minimiser {}", s.n, fmt_real(mean));
    }
    Ok(())
}

pub fn verify_bounds(ctx: &Ctx, a: &VerifyArgs) -> Result<()> {
    let (lo, hi) = (a.support.lo, a.support.hi);
    let model = parse_model(&a.model, lo, hi)?;
    let loss = build_loss(&a.loss, lo, hi)?;
    let m = m_over_domain(&loss, (lo, hi))?;
    let pairs: Vec<(usize, f64)> = match &a.n_values {
        Some(ns) => ns.iter().flat_map(|&n| a.epsilons.iter().map(move |&e| (n, e))).collect(),
        None => a.epsilons.iter().map(|&e| Ok((min_sample_size(e, m)?, e))).collect::<Result<_>>()?,
    };
    if a.thetas.is_empty() || pairs.is_empty() {
        return Err(MfgfError::EmptyInput.into());
    }
    let mut reports = Vec::new();
    for &theta in &a.thetas {
        for &(n, eps) in &pairs {
            let r = verify_pointwise(&model, &loss, theta, n, eps, a.replications, ctx.seed)?;
            println!(
                "theta = {} n = {} eps = {}: rate {} bound {}{}",
                fmt_real(theta),
                n,
                fmt_real(eps),
                fmt_real(r.empirical_violation_rate),
                fmt_real(r.bound),
                if r.threshold_met { "" } else { " (below threshold)" }
            );
            reports.push(r);
        }
    }
    let mut json = serde_json::to_string_pretty(&reports).expect("reports serialise");
    json.push('\n');
    ctx.write("bound_reports.json", &json)?;

    if let Some(alpha) = a.alpha {
        let dom = loss.theta_domain();
        let grid = build_grid(&a.theta, dom.lo, dom.hi, 41)?;
        let eps = *a.epsilons.first().ok_or(MfgfError::EmptyInput)?;
        let u = verify_uniform(&model, &loss, &grid, eps, alpha, a.replications, ctx.seed)?;
        println!("uniform: n = {} estimate {} (alpha {})", u.n, fmt_real(u.estimate), fmt_real(alpha));
        let mut json = u.to_json();
        json.push('\n');
        ctx.write("uniform_report.json", &json)?;
    }
    Ok(())
}

pub fn coverage(ctx: &Ctx, a: &CoverageArgs) -> Result<()> {
    let model = parse_model(&a.model, a.support.lo, a.support.hi)?;
    let scores = a.scores.iter().map(|s| parse_score(s)).collect::<Result<Vec<_>>>()?;
    let mut csv = String::from("n,alpha,k,nominal,empirical,reps,score\n");
    for &n in &a.n_values {
        for &alpha in &a.alphas {
            for score in &scores {
                let r = coverage_experiment(&model, score, n, alpha, a.replications, ctx.seed)?;
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{},{}",
                    r.n,
                    fmt_real(r.alpha),
                    r.k,
                    fmt_real(r.nominal),
                    fmt_real(r.empirical),
                    r.replications,
                    score.name()
                );
            }
        }
    }
    ctx.write("coverage.csv", &csv)?;
    print!("{csv}");
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn data_parser_skips_comments() {
        assert_eq!(parse_data("# head\n1.5\n\n-2 # tail\n").unwrap(), vec![1.5, -2.0]);
        assert!(parse_data("abc\n").is_err());
        assert!(parse_data("").unwrap().is_empty());
    }

    #[test]
    fn loss_names() {
        let la = LossArgs { loss: "constant:2.5".into(), domain_lo: None, domain_hi: None };
        assert_eq!(build_loss(&la, 0.0, 1.0).unwrap().eval(0.3, 0.9), 2.5);
        let la = LossArgs { loss: "hinge".into(), domain_lo: None, domain_hi: None };
        assert!(build_loss(&la, 0.0, 1.0).is_err());
    }
}
