use minlen_core::closed_forms::closed_integrals;
use minlen_core::spectrum::{linear_grid, log_grid, sweep_alpha, sweep_b_physical};
use minlen_core::{
    compute_integrals, to_dimensionless, Builtin, DeformationProfile, DimensionlessCouplings,
    Eigenfunction, IntegralSource, SpectralProblem,
};

use crate::args::{CouplingArgs, ProfileArgs};
use crate::config::{parse_list, parse_physical, resolve_profile};
use crate::output::{num, opt_num, Csv, JsonObject};
use crate::CliError;

/// Differences at or above this fail `verify`.
pub const VERIFY_LIMIT: f64 = 1e-8;

/// Text to emit plus the exit status that goes with it.
#[derive(Debug, Default)]
pub struct Report {
    pub text: String,
    /// Per-point numeric failures inside an otherwise complete sweep.
    pub failures: Vec<String>,
    /// Printed to stderr without changing the exit status.
    pub warnings: Vec<String>,
}

impl Report {
    fn ok(text: String) -> Self {
        Report {
            text,
            ..Report::default()
        }
    }
}

pub fn require_profile(args: &ProfileArgs) -> Result<DeformationProfile, CliError> {
    resolve_profile(args.profile.as_deref(), args.k_expr.as_deref(), args.b)?
        .ok_or_else(|| CliError::config("--profile", "required (or give --k-expr)"))
}

fn source(quadrature: bool) -> IntegralSource {
    if quadrature {
        IntegralSource::Quadrature
    } else {
        IntegralSource::Auto
    }
}

fn couplings(alpha: f64, gamma: f64) -> Result<DimensionlessCouplings, CliError> {
    DimensionlessCouplings::new(alpha, gamma).ok_or_else(|| {
        CliError::config(
            "--alpha",
            format!("alpha must be non-negative and both couplings finite (alpha = {alpha}, gamma = {gamma})"),
        )
    })
}

/// A problem plus `(b, m)` when physical parameters were given.
struct Setup {
    problem: SpectralProblem,
    physical: Option<(f64, f64)>,
}

fn setup(
    profile: DeformationProfile,
    args: &CouplingArgs,
    tol: f64,
    quadrature: bool,
) -> Result<Setup, CliError> {
    let (profile, couplings, physical) = match &args.physical {
        Some(text) => {
            let params = parse_physical(text, args.beta, args.bound)?;
            let b = params
                .momentum_bound(&profile)
                .map_err(|e| CliError::config("--physical", e.to_string()))?;
            let c = to_dimensionless(&params, &profile)
                .map_err(|e| CliError::config("--physical", e.to_string()))?;
            let profile = profile
                .with_bound(b)
                .map_err(|e| CliError::config("--bound", e.to_string()))?;
            (profile, c, Some((b, params.mass)))
        }
        None => {
            let alpha = args
                .alpha
                .ok_or_else(|| CliError::config("--alpha", "required without --physical"))?;
            (profile, couplings(alpha, args.gamma.unwrap_or(0.0))?, None)
        }
    };
    Ok(Setup {
        problem: SpectralProblem::new(profile, couplings)
            .with_quad_tolerance(tol)
            .with_source(source(quadrature)),
        physical,
    })
}

fn solve_checked(problem: &SpectralProblem) -> Result<minlen_core::BoundState, CliError> {
    let existence = problem.exists_bound_state().map_err(CliError::numeric)?;
    if !existence.exists {
        return Err(CliError::NoBoundState(format!(
            "gamma = {} <= -gamma0 = {}",
            num(problem.couplings.gamma()),
            num(-existence.threshold.gamma0)
        )));
    }
    problem.solve_bound_state().map_err(CliError::numeric)
}

pub fn solve(
    profile: &ProfileArgs,
    args: &CouplingArgs,
    tol: f64,
    quadrature: bool,
) -> Result<Report, CliError> {
    let Setup { problem, physical } = setup(require_profile(profile)?, args, tol, quadrature)?;
    let mut state = solve_checked(&problem)?;
    let mut json = JsonObject::new().num("eps_star", state.eps_star);
    if let Some((b, mass)) = physical {
        state = state.with_energy(b, mass);
        json = json.num("energy", state.energy.expect("set above"));
    }
    json = json
        .num("i1", state.i1_at_root)
        .num("i2", state.i2_at_root)
        .num("residual", state.residual)
        .array("bracket", &[state.bracket.0, state.bracket.1]);
    let mut report = Report::ok(String::new());
    if state.multiple_roots() {
        json = json.array("roots", &state.roots);
        report.warnings.push(format!(
            "spectral condition has {} roots; reporting the largest",
            state.roots.len()
        ));
    }
    report.text = json.finish();
    Ok(report)
}

fn alpha_grid(min: f64, max: f64, steps: usize, log: bool) -> Result<Vec<f64>, CliError> {
    if steps == 0 {
        return Err(CliError::config("--alpha-steps", "alpha grid is empty"));
    }
    if !(min >= 0.0 && max >= min && max.is_finite()) {
        return Err(CliError::config(
            "--alpha-min",
            format!("need 0 <= alpha-min <= alpha-max, got [{min}, {max}]"),
        ));
    }
    if log && min == 0.0 {
        return Err(CliError::config(
            "--alpha-min",
            "a log grid needs alpha-min > 0",
        ));
    }
    Ok(if log {
        log_grid(min, max, steps)
    } else {
        linear_grid(min, max, steps)
    })
}

/// `alpha,eps_star` rows; per-point failures leave `eps_star` empty.
pub fn alpha_curve(template: &SpectralProblem, gamma: f64, alphas: &[f64]) -> Report {
    let mut csv = Csv::new(&["alpha", "eps_star"]);
    let mut failures = Vec::new();
    for p in sweep_alpha(template, gamma, alphas) {
        if let Some(e) = &p.error {
            failures.push(format!("alpha = {}: {e}", num(p.alpha)));
        }
        csv.row([num(p.alpha), opt_num(p.eps_star)]);
    }
    Report {
        text: csv.finish(),
        failures,
        ..Report::default()
    }
}

#[allow(clippy::too_many_arguments)]
pub fn sweep(
    profile: &ProfileArgs,
    gamma: f64,
    alpha_min: f64,
    alpha_max: f64,
    steps: usize,
    log: bool,
    tol: f64,
    quadrature: bool,
) -> Result<Report, CliError> {
    let alphas = alpha_grid(alpha_min, alpha_max, steps, log)?;
    let template = SpectralProblem::new(require_profile(profile)?, couplings(0.0, gamma)?)
        .with_quad_tolerance(tol)
        .with_source(source(quadrature));
    Ok(alpha_curve(&template, gamma, &alphas))
}

pub fn threshold(
    profile: &ProfileArgs,
    alpha: f64,
    tol: f64,
    quadrature: bool,
) -> Result<Report, CliError> {
    let problem = SpectralProblem::new(require_profile(profile)?, couplings(alpha, 0.0)?)
        .with_quad_tolerance(tol)
        .with_source(source(quadrature));
    let t = problem.threshold().map_err(CliError::numeric)?;
    Ok(Report::ok(
        JsonObject::new()
            .num("gamma0", t.gamma0)
            .num("i2_zero", t.i2_zero)
            .finish(),
    ))
}

fn eps_list(text: &str) -> Result<Vec<f64>, CliError> {
    let eps = parse_list("--eps", text)?;
    match eps.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
        Some(bad) => Err(CliError::config(
            "--eps",
            format!("eps must be positive, got {bad}"),
        )),
        None => Ok(eps),
    }
}

pub fn integrals(profile: &ProfileArgs, eps: &str, tol: f64) -> Result<Report, CliError> {
    let profile = require_profile(profile)?;
    let mut csv = Csv::new(&["eps", "i1", "i2", "err1", "err2"]);
    for e in eps_list(eps)? {
        let p = compute_integrals(&profile, e, tol).map_err(CliError::numeric)?;
        csv.row([num(e), num(p.i1), num(p.i2), num(p.err1), num(p.err2)]);
    }
    Ok(Report::ok(csv.finish()))
}

/// Closed form against quadrature; any difference `>= 1e-8` is a failure.
pub fn verify(profile: &str, eps: &str, tol: f64) -> Result<Report, CliError> {
    let id: Builtin = profile
        .parse()
        .map_err(|e: minlen_core::DeformationError| CliError::config("--profile", e.to_string()))?;
    let quad_profile = DeformationProfile::builtin(id);
    let mut csv = Csv::new(&[
        "eps",
        "i1_closed",
        "i1_quad",
        "i1_diff",
        "i2_closed",
        "i2_quad",
        "i2_diff",
    ]);
    let mut failures = Vec::new();
    for e in eps_list(eps)? {
        let (c1, c2) = closed_integrals(id, e).map_err(CliError::numeric)?;
        let q = compute_integrals(&quad_profile, e, tol).map_err(CliError::numeric)?;
        let (d1, d2) = ((c1 - q.i1).abs(), (c2 - q.i2).abs());
        if !(d1 < VERIFY_LIMIT && d2 < VERIFY_LIMIT) {
            failures.push(format!(
                "eps = {}: differences {} and {}",
                num(e),
                num(d1),
                num(d2)
            ));
        }
        csv.row([
            num(e),
            num(c1),
            num(q.i1),
            num(d1),
            num(c2),
            num(q.i2),
            num(d2),
        ]);
    }
    Ok(Report {
        text: csv.finish(),
        failures,
        ..Report::default()
    })
}

pub fn wavefunction(
    profile: &ProfileArgs,
    args: &CouplingArgs,
    samples: usize,
    tol: f64,
    quadrature: bool,
) -> Result<Report, CliError> {
    if samples < 2 {
        return Err(CliError::config(
            "--samples",
            format!("need at least 2, got {samples}"),
        ));
    }
    let Setup { problem, .. } = setup(require_profile(profile)?, args, tol, quadrature)?;
    let state = solve_checked(&problem)?;
    let ef = Eigenfunction::build(&problem, &state).map_err(CliError::numeric)?;
    let mut csv = Csv::new(&["y", "density", "re", "im"]);
    for s in ef.sample_density(samples).map_err(CliError::numeric)? {
        csv.row([num(s.y), num(s.density), num(s.re), num(s.im)]);
    }
    Ok(Report::ok(csv.finish()))
}

pub fn limit_sweep(
    profile: &ProfileArgs,
    physical: &str,
    b_min: f64,
    b_max: f64,
    steps: usize,
    tol: f64,
) -> Result<Report, CliError> {
    if steps == 0 {
        return Err(CliError::config("--steps", "b grid is empty"));
    }
    if !(b_min > 0.0 && b_max >= b_min && b_max.is_finite()) {
        return Err(CliError::config(
            "--b-min",
            format!("need 0 < b-min <= b-max, got [{b_min}, {b_max}]"),
        ));
    }
    let profile = resolve_profile(
        profile.profile.as_deref(),
        profile.k_expr.as_deref(),
        profile.b,
    )?
    .unwrap_or_else(|| DeformationProfile::builtin(Builtin::Cutoff));
    let params = parse_physical(physical, None, None)?;
    let template = SpectralProblem::new(profile, couplings(0.0, 0.0)?).with_quad_tolerance(tol);
    let mut csv = Csv::new(&["b", "gamma", "eps_star", "energy"]);
    let mut failures = Vec::new();
    for p in sweep_b_physical(&params, &template, &log_grid(b_min, b_max, steps)) {
        if let Some(e) = &p.error {
            failures.push(format!("b = {}: {e}", num(p.b)));
        }
        csv.row([
            num(p.b),
            num(p.gamma),
            opt_num(p.eps_star),
            opt_num(p.energy),
        ]);
    }
    Ok(Report {
        text: csv.finish(),
        failures,
        ..Report::default()
    })
}
