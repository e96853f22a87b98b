//! Derivative-free compass search over a box or the unit sphere.

use std::fmt::Write as _;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// Optimizer and pipeline parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub seed: u64,
    /// Random weight vectors drawn by sampling-based sweeps.
    pub n_samples: usize,
    pub n_starts: usize,
    pub initial_step: f64,
    pub step_tolerance: f64,
    pub max_evaluations: usize,
    pub contraction: f64,
    /// Quality/novelty trade-off in discovery.
    pub lambda: f64,
    /// Arctangent steepness in holding-power objectives.
    pub steepness: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: 0,
            n_samples: 50,
            n_starts: 8,
            initial_step: 0.25,
            step_tolerance: 1e-4,
            max_evaluations: 5000,
            contraction: 0.5,
            lambda: 1.0,
            steepness: 1.0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.n_samples == 0 {
            return bad("n_samples must be at least 1".into());
        }
        if self.n_starts == 0 {
            return bad("n_starts must be at least 1".into());
        }
        if !(self.initial_step > 0.0) {
            return bad(format!("initial_step must be positive, got {}", self.initial_step));
        }
        if !(self.step_tolerance > 0.0 && self.step_tolerance < self.initial_step) {
            return bad(format!(
                "step_tolerance must lie in (0, initial_step), got {}",
                self.step_tolerance
            ));
        }
        if !(self.contraction > 0.0 && self.contraction < 1.0) {
            return bad(format!("contraction must lie in (0, 1), got {}", self.contraction));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return bad(format!("lambda must be nonnegative, got {}", self.lambda));
        }
        if !(self.steepness > 0.0 && self.steepness.is_finite()) {
            return bad(format!("steepness must be positive, got {}", self.steepness));
        }
        Ok(())
    }

    /// Overrides one field from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::Parse(format!("invalid value `{value}` for `{key}`")))
        }
        match key {
            "seed" => self.seed = parse(key, value)?,
            "n_samples" => self.n_samples = parse(key, value)?,
            "n_starts" => self.n_starts = parse(key, value)?,
            "initial_step" => self.initial_step = parse(key, value)?,
            "step_tolerance" => self.step_tolerance = parse(key, value)?,
            "max_evaluations" => self.max_evaluations = parse(key, value)?,
            "contraction" => self.contraction = parse(key, value)?,
            "lambda" => self.lambda = parse(key, value)?,
            "steepness" => self.steepness = parse(key, value)?,
            _ => return Err(Error::Parse(format!("unknown configuration key `{key}`"))),
        }
        Ok(())
    }

    /// Parses `key=value` lines on top of the defaults. `#` starts a comment.
    pub fn from_kv(text: &str) -> Result<Self> {
        let mut cfg = SearchConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{line}`")).at_line(i + 1))?;
            cfg.set(key.trim(), value.trim()).map_err(|e| e.at_line(i + 1))?;
        }
        Ok(cfg)
    }

    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "seed={}", self.seed);
        let _ = writeln!(out, "n_samples={}", self.n_samples);
        let _ = writeln!(out, "n_starts={}", self.n_starts);
        let _ = writeln!(out, "initial_step={}", self.initial_step);
        let _ = writeln!(out, "step_tolerance={}", self.step_tolerance);
        let _ = writeln!(out, "max_evaluations={}", self.max_evaluations);
        let _ = writeln!(out, "contraction={}", self.contraction);
        let _ = writeln!(out, "lambda={}", self.lambda);
        let _ = writeln!(out, "steepness={}", self.steepness);
        out
    }
}

/// Feasible region of the search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// Unit L2 sphere; candidates are normalised before evaluation.
    Sphere,
    /// `[lo, hi]` in every coordinate; candidates are clamped.
    Box { lo: f64, hi: f64 },
}

impl Domain {
    /// `None` when the point cannot be projected (the origin on the sphere).
    pub fn project(&self, x: &[f64]) -> Option<Vec<f64>> {
        match *self {
            Domain::Sphere => {
                let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                (norm > 0.0).then(|| x.iter().map(|v| v / norm).collect())
            }
            Domain::Box { lo, hi } => Some(x.iter().map(|v| v.clamp(lo, hi)).collect()),
        }
    }

    fn sample(&self, d: usize, rng: &mut rng::Rng) -> Vec<f64> {
        match *self {
            Domain::Sphere => loop {
                let x: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
                if let Some(p) = self.project(&x) {
                    break p;
                }
            },
            Domain::Box { lo, hi } => (0..d).map(|_| rng.random_range(lo..=hi)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub best_point: Vec<f64>,
    pub best_value: f64,
    pub evaluations: usize,
    /// The step fell below the tolerance before the budget ran out.
    pub converged: bool,
    /// False when the search never left its starting point.
    pub improved: bool,
    /// Incumbent value after each evaluation of the winning run.
    #[serde(skip)]
    pub trace: Vec<f64>,
}

fn evaluate<F>(f: &mut F, x: &[f64]) -> Result<f64>
where
    F: FnMut(&[f64]) -> f64,
{
    let v = f(x);
    if v.is_nan() {
        return Err(Error::NonFiniteObjective(x.to_vec()));
    }
    Ok(v)
}

/// Maximises `f` by compass search from `start`.
///
/// Each poll tries `+step` then `-step` along coordinates `0..d` in order and
/// moves to the first strictly improving point; a poll without improvement
/// multiplies the step by `cfg.contraction`. Stops once the step drops below
/// `cfg.step_tolerance` or `cfg.max_evaluations` evaluations are spent.
/// On the one-dimensional sphere the domain is `{-1, +1}` and both points are
/// evaluated directly.
pub fn pattern_search<F>(f: &mut F, start: &[f64], domain: Domain, cfg: &SearchConfig) -> Result<SearchResult>
where
    F: FnMut(&[f64]) -> f64,
{
    search(f, start, domain, cfg, cfg.max_evaluations)
}

fn search<F>(
    f: &mut F,
    start: &[f64],
    domain: Domain,
    cfg: &SearchConfig,
    budget: usize,
) -> Result<SearchResult>
where
    F: FnMut(&[f64]) -> f64,
{
    if budget == 0 {
        return Err(Error::LimitExceeded("evaluation budget is zero".into()));
    }
    if start.is_empty() {
        return Err(Error::InvalidParameter("search dimension must be at least 1".into()));
    }
    let mut x = domain
        .project(start)
        .ok_or_else(|| Error::InvalidParameter("start point cannot be projected".into()))?;

    if domain == Domain::Sphere && x.len() == 1 {
        let fx = evaluate(f, &x)?;
        let mut result = SearchResult {
            best_point: x.clone(),
            best_value: fx,
            evaluations: 1,
            converged: false,
            improved: false,
            trace: vec![fx],
        };
        if budget >= 2 {
            let y = vec![-x[0]];
            let fy = evaluate(f, &y)?;
            result.evaluations = 2;
            result.converged = true;
            if fy > fx {
                result.best_point = y;
                result.best_value = fy;
                result.improved = true;
            }
            result.trace.push(result.best_value);
        }
        return Ok(result);
    }

    let mut fx = evaluate(f, &x)?;
    let mut evaluations = 1;
    let mut trace = vec![fx];
    let mut step = cfg.initial_step;
    let mut converged = false;
    let mut improved_any = false;

    'outer: loop {
        if step < cfg.step_tolerance {
            converged = true;
            break;
        }
        let mut improved = false;
        'poll: for i in 0..x.len() {
            for sign in [1.0, -1.0] {
                if evaluations >= budget {
                    break 'outer;
                }
                let mut y = x.clone();
                y[i] += sign * step;
                let Some(y) = domain.project(&y) else { continue };
                if y == x {
                    continue;
                }
                let fy = evaluate(f, &y)?;
                evaluations += 1;
                if fy > fx {
                    x = y;
                    fx = fy;
                    improved = true;
                    trace.push(fx);
                    break 'poll;
                }
                trace.push(fx);
            }
        }
        if improved {
            improved_any = true;
        } else {
            step *= cfg.contraction;
        }
    }

    Ok(SearchResult {
        best_point: x,
        best_value: fx,
        evaluations,
        converged,
        improved: improved_any,
        trace,
    })
}

/// Seeded random starting points for [`multistart`].
pub fn random_starts(d: usize, domain: Domain, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = rng::rng(seed);
    (0..count).map(|_| domain.sample(d, &mut rng)).collect()
}

/// Runs [`pattern_search`] from every warm start and then from `cfg.n_starts`
/// seeded random points, returning the best run. The evaluation budget is
/// shared: each run gets an equal share of what the earlier runs left over.
pub fn multistart<F>(
    f: &mut F,
    d: usize,
    domain: Domain,
    cfg: &SearchConfig,
    warm_starts: &[Vec<f64>],
) -> Result<SearchResult>
where
    F: FnMut(&[f64]) -> f64,
{
    if cfg.max_evaluations == 0 {
        return Err(Error::LimitExceeded("evaluation budget is zero".into()));
    }
    if let Some(w) = warm_starts.iter().find(|w| w.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: w.len(),
        });
    }
    let mut starts: Vec<Vec<f64>> = warm_starts.to_vec();
    starts.extend(random_starts(d, domain, cfg.n_starts, cfg.seed));

    let mut best: Option<SearchResult> = None;
    let mut spent = 0;
    for (i, start) in starts.iter().enumerate() {
        let remaining = cfg.max_evaluations - spent;
        let share = remaining / (starts.len() - i);
        if share == 0 {
            continue;
        }
        let run = search(f, start, domain, cfg, share)?;
        spent += run.evaluations;
        let better = best.as_ref().is_none_or(|b| run.best_value > b.best_value);
        if better {
            best = Some(run);
        }
    }
    let mut best = best.ok_or_else(|| {
        Error::LimitExceeded(format!(
            "budget of {} evaluations cannot cover {} starts",
            cfg.max_evaluations,
            starts.len()
        ))
    })?;
    best.evaluations = spent;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic(x: &[f64]) -> f64 {
        -(x[0] - 0.3).powi(2) - (x[1] + 0.2).powi(2)
    }

    #[test]
    fn finds_smooth_quadratic_maximum() {
        let cfg = SearchConfig::default();
        let r = pattern_search(&mut quadratic, &[0.0, 0.0], Domain::Box { lo: -1.0, hi: 1.0 }, &cfg)
            .unwrap();
        assert!((r.best_point[0] - 0.3).abs() < 1e-3);
        assert!((r.best_point[1] + 0.2).abs() < 1e-3);
        assert!(r.converged);
        assert!(r.evaluations <= 600);
        assert!(r.trace.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn one_dimensional_sphere_compares_both_points() {
        let cfg = SearchConfig::default();
        let r = pattern_search(&mut |x: &[f64]| -x[0], &[0.4], Domain::Sphere, &cfg).unwrap();
        assert_eq!(r.best_point, vec![-1.0]);
        assert_eq!(r.evaluations, 2);
    }

    #[test]
    fn constant_objective_converges_at_start() {
        let cfg = SearchConfig::default();
        let r = pattern_search(&mut |_: &[f64]| 1.0, &[0.1, 0.2], Domain::Box { lo: -1.0, hi: 1.0 }, &cfg)
            .unwrap();
        assert_eq!(r.best_point, vec![0.1, 0.2]);
        assert!(r.converged);
        assert!(!r.improved);
    }

    #[test]
    fn sphere_candidates_stay_on_the_sphere() {
        let cfg = SearchConfig::default();
        let mut seen = Vec::new();
        let mut f = |x: &[f64]| {
            seen.push(x.iter().map(|v| v * v).sum::<f64>());
            x[0] + 2.0 * x[1] - x[2]
        };
        let r = pattern_search(&mut f, &[1.0, 1.0, 1.0], Domain::Sphere, &cfg).unwrap();
        assert!(seen.iter().all(|s| (s - 1.0).abs() < 1e-12));
        let norm: f64 = (1.0f64 + 4.0 + 1.0).sqrt();
        let target = [1.0 / norm, 2.0 / norm, -1.0 / norm];
        for (a, b) in r.best_point.iter().zip(target) {
            assert!((a - b).abs() < 1e-3);
        }
    }

    #[test]
    fn errors() {
        let mut cfg = SearchConfig {
            max_evaluations: 0,
            ..SearchConfig::default()
        };
        assert!(pattern_search(&mut quadratic, &[0.0, 0.0], Domain::Sphere, &cfg).is_err());
        cfg.max_evaluations = 10;
        let err = pattern_search(&mut |_: &[f64]| f64::NAN, &[0.5, 0.5], Domain::Sphere, &cfg)
            .unwrap_err();
        assert!(matches!(err, Error::NonFiniteObjective(p) if p.len() == 2));
    }

    #[test]
    fn budget_is_respected() {
        let cfg = SearchConfig {
            max_evaluations: 7,
            ..SearchConfig::default()
        };
        let r = pattern_search(&mut quadratic, &[-1.0, 1.0], Domain::Box { lo: -1.0, hi: 1.0 }, &cfg)
            .unwrap();
        assert_eq!(r.evaluations, 7);
        assert!(!r.converged);
    }

    #[test]
    fn single_start_equals_plain_search() {
        let cfg = SearchConfig {
            n_starts: 1,
            ..SearchConfig::default()
        };
        let domain = Domain::Box { lo: -1.0, hi: 1.0 };
        let multi = multistart(&mut quadratic, 2, domain, &cfg, &[]).unwrap();
        let start = &random_starts(2, domain, 1, cfg.seed)[0];
        let plain = pattern_search(&mut quadratic, start, domain, &cfg).unwrap();
        assert_eq!(multi, plain);
    }

    #[test]
    fn multistart_finds_global_basin() {
        let bimodal = |x: &[f64]| {
            (-(x[0] - 0.7).powi(2) / 0.02).exp() + 0.5 * (-(x[0] + 0.7).powi(2) / 0.02).exp()
        };
        // dense-grid reference for the global maximiser
        let grid_best = (0..=20_000)
            .map(|i| -1.0 + i as f64 * 1e-4)
            .max_by(|a, b| bimodal(&[*a]).total_cmp(&bimodal(&[*b])))
            .unwrap();
        let cfg = SearchConfig::default();
        let r = multistart(&mut { bimodal }, 1, Domain::Box { lo: -1.0, hi: 1.0 }, &cfg, &[]).unwrap();
        assert!((r.best_point[0] - grid_best).abs() < 1e-3);
        assert!(r.evaluations <= cfg.max_evaluations);
    }

    #[test]
    fn multistart_partial_budget() {
        let cfg = SearchConfig {
            n_starts: 2,
            max_evaluations: 10,
            ..SearchConfig::default()
        };
        let r = multistart(&mut quadratic, 2, Domain::Box { lo: -1.0, hi: 1.0 }, &cfg, &[]).unwrap();
        assert!(!r.converged);
        assert!(r.evaluations <= 10);
    }

    #[test]
    fn config_round_trips_through_kv() {
        let cfg = SearchConfig {
            seed: 42,
            lambda: 0.5,
            ..SearchConfig::default()
        };
        assert_eq!(SearchConfig::from_kv(&cfg.to_kv()).unwrap(), cfg);
        assert!(SearchConfig::from_kv("bogus=1").is_err());
        assert!(SearchConfig::from_kv("step_tolerance=1\n").unwrap().validate().is_err());
    }
}
