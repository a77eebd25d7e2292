use crate::bounds::BoundId;
use crate::BoundReport;

/// One value column of the scan CSV.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    LhsProduct,
    LhsSum,
    Bound(BoundId),
}

impl Column {
    /// Value columns after `theta,phi`, in schema order.
    pub const ALL: [Column; 13] = [
        Column::LhsProduct,
        Column::Bound(BoundId::Robertson),
        Column::Bound(BoundId::MondalProduct),
        Column::Bound(BoundId::CarlsonProduct),
        Column::Bound(BoundId::SpinProHr),
        Column::Bound(BoundId::SpinProFd),
        Column::Bound(BoundId::SpinProClosed),
        Column::LhsSum,
        Column::Bound(BoundId::MondalSum),
        Column::Bound(BoundId::Additive),
        Column::Bound(BoundId::VarianceDecomposition),
        Column::Bound(BoundId::SpinSumSong),
        Column::Bound(BoundId::SpinSumFd),
    ];

    pub fn name(self) -> &'static str {
        match self {
            Column::LhsProduct => "lhs_product",
            Column::LhsSum => "lhs_sum",
            Column::Bound(id) => id.as_str(),
        }
    }

    pub fn analytic(self, r: &BoundReport) -> Option<f64> {
        match self {
            Column::LhsProduct => Some(r.lhs_product),
            Column::LhsSum => Some(r.lhs_sum),
            Column::Bound(id) => r.get(id),
        }
    }
}

/// Scientific notation with 12 significant digits and a signed two-digit
/// exponent, e.g. `1.93735931602e+00`.
pub fn format_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    let s = format!("{x:.11e}");
    match s.split_once('e') {
        Some((mantissa, exp)) => {
            let e: i32 = exp.parse().expect("rust exponent");
            let sign = if e < 0 { '-' } else { '+' };
            format!("{mantissa}e{sign}{:02}", e.abs())
        }
        None => s,
    }
}

pub(crate) fn format_opt(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format() {
        assert_eq!(format_float(2.0), "2.00000000000e+00");
        assert_eq!(format_float(0.0), "0.00000000000e+00");
        assert_eq!(format_float(-0.0), "0.00000000000e+00");
        assert_eq!(format_float(-0.4330127018922193), "-4.33012701892e-01");
        assert_eq!(format_float(1.5e-120), "1.50000000000e-120");
        assert_eq!(format_float(0.2041547530128806).parse::<f64>().unwrap(), 0.204154753013);
    }

    #[test]
    fn schema_order() {
        let names: Vec<_> = Column::ALL.iter().map(|c| c.name()).collect();
        assert_eq!(
            names.join(","),
            "lhs_product,robertson,mondal_product,carlson_product,spin_pro_hr,spin_pro_fd,spin_pro_closed,\
             lhs_sum,mondal_sum,additive,variance_decomposition,spin_sum_song,spin_sum_fd"
        );
    }
}
