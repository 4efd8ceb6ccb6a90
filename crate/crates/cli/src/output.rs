//! Deterministic number, CSV and JSON rendering.

/// 15 significant digits; positional for `1e-4 <= |x| < 1e6`, scientific
/// otherwise. Trailing zeros are dropped but integers keep `.0`.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0.0".into();
    }
    let mag = x.abs();
    if (1e-4..1e6).contains(&mag) {
        let exponent = mag.log10().floor() as i32;
        let decimals = (14 - exponent).max(1) as usize;
        trim_fraction(format!("{x:.decimals$}"))
    } else {
        let s = format!("{x:.14e}");
        let (mantissa, exp) = s.split_once('e').expect("scientific format");
        format!("{}e{exp}", trim_fraction(mantissa.to_string()))
    }
}

fn trim_fraction(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.push('0');
        }
    }
    s
}

/// Empty for `None`, as in CSV rows without a bound state.
pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Csv { text }
    }

    pub fn row<I: IntoIterator<Item = String>>(&mut self, fields: I) {
        let fields: Vec<String> = fields.into_iter().collect();
        self.text.push_str(&fields.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

/// A single-line JSON object with keys in insertion order.
#[derive(Default)]
pub struct JsonObject {
    fields: Vec<String>,
}

fn json_num(x: f64) -> String {
    if x.is_finite() {
        num(x)
    } else {
        "null".into()
    }
}

impl JsonObject {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num(mut self, key: &str, x: f64) -> Self {
        self.fields.push(format!("\"{key}\": {}", json_num(x)));
        self
    }

    pub fn array(mut self, key: &str, xs: &[f64]) -> Self {
        let items: Vec<String> = xs.iter().map(|&x| json_num(x)).collect();
        self.fields
            .push(format!("\"{key}\": [{}]", items.join(", ")));
        self
    }

    pub fn finish(self) -> String {
        format!("{{{}}}\n", self.fields.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positional_range() {
        assert_eq!(num(2.0), "2.0");
        assert_eq!(num(-0.5), "-0.5");
        assert_eq!(num(1.0 / 3.0), "0.333333333333333");
        assert_eq!(num(std::f64::consts::PI), "3.14159265358979");
        assert_eq!(num(123456.789), "123456.789");
        assert_eq!(num(1e-4), "0.0001");
    }

    #[test]
    fn scientific_outside() {
        assert_eq!(num(1e6), "1.0e6");
        assert_eq!(num(-2.5e-7), "-2.5e-7");
        assert_eq!(num(1.0 / 3.0 * 1e-9), "3.33333333333333e-10");
        assert_eq!(num(0.0), "0.0");
    }

    #[test]
    fn fifteen_digits_round_trip() {
        for x in [0.123456789012345, 98765.4321098765, 1.1276546554e-7] {
            let back: f64 = num(x).parse().unwrap();
            assert!(((back - x) / x).abs() < 1e-14);
        }
    }

    #[test]
    fn json_and_csv() {
        let j = JsonObject::new()
            .num("gamma0", 2.0)
            .num("i2_zero", 2.0)
            .finish();
        assert_eq!(j, "{\"gamma0\": 2.0, \"i2_zero\": 2.0}\n");
        let j = JsonObject::new()
            .array("bracket", &[0.5, f64::NAN])
            .finish();
        assert_eq!(j, "{\"bracket\": [0.5, null]}\n");
        let mut c = Csv::new(&["alpha", "eps_star"]);
        c.row([num(0.1), opt_num(None)]);
        assert_eq!(c.finish(), "alpha,eps_star\n0.1,\n");
    }
}
