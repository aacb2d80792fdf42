use std::cmp::Ordering;
use std::fmt;

/// Reported floor for a level ratio whose numerator is zero.
pub const NEG_INFINITE_DB: f64 = -200.0;

/// A metric outcome.
///
/// `Infinite` marks a perfect result (zero error energy) and orders above
/// every finite value. `Undefined` carries no number and is left out of
/// medians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricValue {
    Finite(f64),
    Infinite,
    Undefined,
}

impl MetricValue {
    /// `10 log10(num / den)` on energies.
    ///
    /// `den <= null_ratio * num` counts as zero error and gives `Infinite`;
    /// a zero numerator over a non-zero denominator is clamped to
    /// [`NEG_INFINITE_DB`]; `0 / 0` is `Undefined`.
    pub fn energy_ratio_db(num: f64, den: f64, null_ratio: f64) -> Self {
        if num <= 0.0 && den <= 0.0 {
            return MetricValue::Undefined;
        }
        if den <= null_ratio * num {
            return MetricValue::Infinite;
        }
        if num <= 0.0 {
            return MetricValue::Finite(NEG_INFINITE_DB);
        }
        MetricValue::Finite((10.0 * (num / den).log10()).max(NEG_INFINITE_DB))
    }

    pub fn is_defined(&self) -> bool {
        !matches!(self, MetricValue::Undefined)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, MetricValue::Infinite)
    }

    /// Finite value, if there is one.
    pub fn finite(&self) -> Option<f64> {
        match *self {
            MetricValue::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Numeric view: `Infinite` maps to `f64::INFINITY`.
    pub fn to_f64(&self) -> Option<f64> {
        match *self {
            MetricValue::Finite(v) => Some(v),
            MetricValue::Infinite => Some(f64::INFINITY),
            MetricValue::Undefined => None,
        }
    }

    fn from_f64(v: f64) -> Self {
        if v == f64::INFINITY {
            MetricValue::Infinite
        } else {
            MetricValue::Finite(v)
        }
    }

    /// Token used in row files: a number, `inf` or `n/a`.
    pub fn to_token(&self) -> String {
        match *self {
            MetricValue::Finite(v) => format!("{v}"),
            MetricValue::Infinite => "inf".into(),
            MetricValue::Undefined => "n/a".into(),
        }
    }

    pub fn parse_token(s: &str) -> Option<Self> {
        match s.trim() {
            "inf" | "+inf" | "Infinity" => Some(MetricValue::Infinite),
            "n/a" | "" | "nan" | "NaN" => Some(MetricValue::Undefined),
            t => t.parse::<f64>().ok().filter(|v| v.is_finite()).map(MetricValue::Finite),
        }
    }
}

impl fmt::Display for MetricValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MetricValue::Finite(v) => match f.precision() {
                Some(p) => write!(f, "{v:.p$}"),
                None => write!(f, "{v}"),
            },
            MetricValue::Infinite => f.write_str("inf"),
            MetricValue::Undefined => f.write_str("n/a"),
        }
    }
}

/// Defined values sorted ascending, infinities last.
pub fn sorted_defined(values: &[MetricValue]) -> Vec<f64> {
    let mut v: Vec<f64> = values.iter().filter_map(MetricValue::to_f64).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Quantile `q` of ascending `sorted` data by linear interpolation
/// between order statistics.
///
/// Interpolating from a finite value toward an infinite one yields the
/// finite value, so a median is infinite only when more than half of the
/// data is infinite.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> MetricValue {
    if sorted.is_empty() {
        return MetricValue::Undefined;
    }
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    let (a, b) = (sorted[lo], sorted[hi]);
    if lo == hi || frac == 0.0 {
        return MetricValue::from_f64(a);
    }
    match (a.is_finite(), b.is_finite()) {
        (true, true) => MetricValue::Finite(a + (b - a) * frac),
        (true, false) => MetricValue::Finite(a),
        _ => MetricValue::Infinite,
    }
}

/// Median of the defined values; `Undefined` if there are none.
pub fn median(values: &[MetricValue]) -> MetricValue {
    quantile_sorted(&sorted_defined(values), 0.5)
}

/// Total order used for ranking values: finite < infinite < undefined.
pub fn compare(a: &MetricValue, b: &MetricValue) -> Ordering {
    let key = |v: &MetricValue| match v {
        MetricValue::Finite(x) => (0, *x),
        MetricValue::Infinite => (1, 0.0),
        MetricValue::Undefined => (2, 0.0),
    };
    let (ka, xa) = key(a);
    let (kb, xb) = key(b);
    ka.cmp(&kb).then(xa.total_cmp(&xb))
}
