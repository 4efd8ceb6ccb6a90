//! Curve data for the `ε*(α)` figures.
//!
//! `fig1` is the pure `δ′` problem (`γ = 0`) on every profile. `fig2` adds a
//! `δ` term; by default `γ ∈ {−I2(0)/2, 0, 1}`, so the first curve only starts
//! once `α > 1/2`, where `γ0 = α I2(0)` passes `I2(0)/2`.

use std::fs;
use std::path::Path;

use minlen_core::spectrum::log_grid;
use minlen_core::{Builtin, DeformationProfile, DimensionlessCouplings, SpectralProblem};

use crate::args::Figure;
use crate::commands::{alpha_curve, Report};
use crate::config::{parse_list, parse_profile};
use crate::output::{num, Csv};
use crate::CliError;

pub struct FigureRequest<'a> {
    pub figure: Figure,
    pub profiles: &'a [String],
    pub gammas: Option<&'a str>,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub alpha_steps: usize,
    pub tol: f64,
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// Writes one `alpha,eps_star` CSV per (profile, γ) plus `manifest.csv`
/// into `out_dir`; the report text is the manifest.
pub fn emit_figure_data(req: &FigureRequest, out_dir: &Path) -> Result<Report, CliError> {
    if req.alpha_steps == 0 {
        return Err(CliError::config("--alpha-steps", "alpha grid is empty"));
    }
    if !(req.alpha_min > 0.0 && req.alpha_max >= req.alpha_min && req.alpha_max.is_finite()) {
        return Err(CliError::config(
            "--alpha-min",
            format!(
                "need 0 < alpha-min <= alpha-max, got [{}, {}]",
                req.alpha_min, req.alpha_max
            ),
        ));
    }
    let profiles: Vec<DeformationProfile> = if req.profiles.is_empty() {
        Builtin::ALL
            .into_iter()
            .map(DeformationProfile::builtin)
            .collect()
    } else {
        req.profiles
            .iter()
            .map(|s| parse_profile(s))
            .collect::<Result<_, _>>()?
    };
    let mut stems: Vec<String> = profiles.iter().map(|p| file_stem(p.name())).collect();
    stems.sort();
    if stems.windows(2).any(|w| w[0] == w[1]) {
        return Err(CliError::config(
            "--profile",
            "profile names must be distinct",
        ));
    }
    let explicit = match (req.figure, req.gammas) {
        (Figure::Fig1, Some(_)) => {
            return Err(CliError::config("--gammas", "fig1 is fixed at gamma = 0"))
        }
        (_, Some(text)) => Some(parse_list("--gammas", text)?),
        _ => None,
    };
    let alphas = log_grid(req.alpha_min, req.alpha_max, req.alpha_steps);
    fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;

    let fig = req.figure.name();
    let mut manifest = Csv::new(&["figure", "profile", "gamma", "file"]);
    let mut failures = Vec::new();
    for profile in profiles {
        let template = SpectralProblem::new(
            profile,
            DimensionlessCouplings::new(1.0, 0.0).expect("valid"),
        )
        .with_quad_tolerance(req.tol);
        let gammas = match (&explicit, req.figure) {
            (Some(list), _) => list.clone(),
            (None, Figure::Fig1) => vec![0.0],
            (None, Figure::Fig2) => {
                let i2_zero = template.i2_zero().map_err(CliError::numeric)?;
                vec![-i2_zero / 2.0, 0.0, 1.0]
            }
        };
        let name = template.profile.name().to_string();
        for (j, &gamma) in gammas.iter().enumerate() {
            let file = format!("{fig}_{}_{j}.csv", file_stem(&name));
            let curve = alpha_curve(&template, gamma, &alphas);
            let path = out_dir.join(&file);
            fs::write(&path, &curve.text).map_err(|e| CliError::io(&path, e))?;
            failures.extend(curve.failures.into_iter().map(|f| format!("{file}: {f}")));
            manifest.row([fig.to_string(), name.clone(), num(gamma), file]);
        }
    }
    let text = manifest.finish();
    let path = out_dir.join("manifest.csv");
    fs::write(&path, &text).map_err(|e| CliError::io(&path, e))?;
    Ok(Report {
        text,
        failures,
        ..Report::default()
    })
}
