//! Turning flag text into core types.

use std::fs;

use minlen_core::quadrature::DEFAULT_TOLERANCE;
use minlen_core::{Builtin, DeformationProfile, DeformationScale, PhysicalParams};

use crate::CliError;

pub const TOL_ENV: &str = "MINLEN_TOL";

/// `cutoff`, `power32`, `kempf`, `custom:b=<b>,expr=<k(y)>` or `file:<path>`
/// with a key-value profile block.
pub fn parse_profile(spec: &str) -> Result<DeformationProfile, CliError> {
    let spec = spec.trim();
    let bad = |message: String| CliError::config("--profile", message);
    if let Some(body) = spec.strip_prefix("custom:") {
        let (mut b, mut expr) = (None, None);
        let mut rest = body.trim();
        while !rest.is_empty() {
            if let Some(e) = rest.strip_prefix("expr=") {
                // The expression runs to the end of the string.
                expr = Some(e.to_string());
                break;
            }
            let (item, tail) = rest.split_once(',').unwrap_or((rest, ""));
            match item.split_once('=') {
                Some(("b", v)) => {
                    b = Some(
                        v.trim()
                            .parse::<f64>()
                            .map_err(|_| bad(format!("b is not a number: `{v}`")))?,
                    )
                }
                _ => return Err(bad(format!("unexpected `{item}` in custom profile"))),
            }
            rest = tail.trim_start();
        }
        let expr = expr.ok_or_else(|| bad("custom profile needs `expr=`".into()))?;
        return DeformationProfile::parse_custom(&expr, b.unwrap_or(1.0))
            .map_err(|e| bad(e.to_string()));
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text =
            fs::read_to_string(path).map_err(|e| bad(format!("cannot read `{path}`: {e}")))?;
        return DeformationProfile::from_kv(&text).map_err(|e| bad(e.to_string()));
    }
    spec.parse::<Builtin>()
        .map(DeformationProfile::builtin)
        .map_err(|e| bad(e.to_string()))
}

/// `--profile` or `--k-expr` with `--b`; `None` when neither was given.
pub fn resolve_profile(
    profile: Option<&str>,
    k_expr: Option<&str>,
    b: Option<f64>,
) -> Result<Option<DeformationProfile>, CliError> {
    match (profile, k_expr) {
        (Some(_), Some(_)) => Err(CliError::config(
            "--k-expr",
            "give either --profile or --k-expr",
        )),
        (Some(spec), None) => parse_profile(spec).map(Some),
        (None, Some(src)) => DeformationProfile::parse_custom(src, b.unwrap_or(1.0))
            .map(Some)
            .map_err(|e| CliError::config("--k-expr", e.to_string())),
        (None, None) => Ok(None),
    }
}

pub fn parse_list(flag: &'static str, text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|item| {
            item.trim()
                .parse::<f64>()
                .map_err(|_| CliError::config(flag, format!("`{}` is not a number", item.trim())))
        })
        .collect()
}

/// `hbar,m,kappa,lambda` plus an optional `β` or `b`.
pub fn parse_physical(
    text: &str,
    beta: Option<f64>,
    bound: Option<f64>,
) -> Result<PhysicalParams, CliError> {
    let values = parse_list("--physical", text)?;
    let [hbar, mass, kappa, lambda] = values[..] else {
        return Err(CliError::config(
            "--physical",
            format!("expected hbar,m,kappa,lambda; got {} values", values.len()),
        ));
    };
    let params = PhysicalParams::new(hbar, mass, kappa, lambda)
        .map_err(|e| CliError::config("--physical", e.to_string()))?;
    Ok(match (beta, bound) {
        (Some(_), Some(_)) => {
            return Err(CliError::config("--beta", "give either --beta or --bound"))
        }
        (Some(beta), None) => params.with_scale(DeformationScale::Beta(beta)),
        (None, Some(b)) => params.with_scale(DeformationScale::Bound(b)),
        (None, None) => params,
    })
}

/// `--tol`, else `MINLEN_TOL`, else the library default.
pub fn resolve_tolerance(flag: Option<f64>, env: Option<&str>) -> Result<f64, CliError> {
    let (source, value) = match (flag, env) {
        (Some(t), _) => ("--tol", t),
        (None, Some(text)) => (
            TOL_ENV,
            text.trim()
                .parse::<f64>()
                .map_err(|_| CliError::config(TOL_ENV, format!("`{text}` is not a number")))?,
        ),
        (None, None) => return Ok(DEFAULT_TOLERANCE),
    };
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(CliError::config(
            source,
            format!("tolerance must be positive, got {value}"),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn builtin_and_custom_specs() {
        assert_eq!(
            parse_profile("kempf").unwrap().closed_form_id(),
            Some(Builtin::Kempf)
        );
        let p = parse_profile("custom:b=2.5,expr=sinh(y)").unwrap();
        assert_eq!(p.b(), 2.5);
        assert!((p.k(0.5).unwrap() - 0.5f64.sinh()).abs() < 1e-15);
        let p = parse_profile("custom:expr=y + y^3").unwrap();
        assert_eq!(p.b(), 1.0);
        assert!(parse_profile("custom:b=1").is_err());
        assert!(parse_profile("custom:b=x,expr=y").is_err());
        assert!(parse_profile("custom:expr=y^2").is_err());
        let err = parse_profile("gaussian").unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("--profile"));
    }

    #[test]
    fn file_spec() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# test\nname=soft\nkind=custom\nexpr=atan(2*y)/2\nb=3").unwrap();
        let p = parse_profile(&format!("file:{}", f.path().display())).unwrap();
        assert_eq!(p.name(), "soft");
        assert_eq!(p.b(), 3.0);
    }

    #[test]
    fn profile_or_expression() {
        assert!(resolve_profile(None, None, None).unwrap().is_none());
        assert!(resolve_profile(Some("cutoff"), Some("y"), None).is_err());
        let p = resolve_profile(None, Some("tan(y)"), Some(2.0))
            .unwrap()
            .unwrap();
        assert_eq!(p.b(), 2.0);
    }

    #[test]
    fn physical_and_lists() {
        let p = parse_physical("1,2,-0.5,0", Some(0.25), None).unwrap();
        assert_eq!((p.mass, p.kappa), (2.0, -0.5));
        assert_eq!(p.scale, Some(DeformationScale::Beta(0.25)));
        assert!(parse_physical("1,2,3", None, None).is_err());
        assert!(parse_physical("0,1,1,1", None, None).is_err());
        assert_eq!(
            parse_list("--eps", "0.5, 1,2").unwrap(),
            vec![0.5, 1.0, 2.0]
        );
        assert!(parse_list("--eps", "0.5,,1").is_err());
    }

    #[test]
    fn tolerance_precedence() {
        assert_eq!(resolve_tolerance(None, None).unwrap(), DEFAULT_TOLERANCE);
        assert_eq!(resolve_tolerance(None, Some("1e-8")).unwrap(), 1e-8);
        assert_eq!(resolve_tolerance(Some(1e-6), Some("1e-8")).unwrap(), 1e-6);
        assert!(resolve_tolerance(None, Some("tight")).is_err());
        assert!(resolve_tolerance(Some(-1.0), None).is_err());
    }
}
