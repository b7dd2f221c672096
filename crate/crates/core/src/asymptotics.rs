//! Logarithmic integrals and the counts predicted from a Bateman-Horn constant.

use serde::Serialize;

use crate::bhconstant::ConstantEstimate;
use crate::polynomial::PolyFamily;
use crate::{CompensatedSum, Error, Result};

/// Relative tolerance per quadrature panel. The integrand is positive, so the
/// summed error is bounded by the same relative tolerance on the total.
const PANEL_RTOL: f64 = 1e-13;
const MAX_DEPTH: u32 = 40;

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One Kronrod step: returns (K15 estimate, |K15 - G7|).
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, (kron - gauss).abs() * h)
}

fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, acc: &mut CompensatedSum, depth: u32) {
    let (k, err) = gk15(f, a, b);
    if depth >= MAX_DEPTH || err <= PANEL_RTOL * k.abs() || err < 1e-300 {
        acc.add(k);
        return;
    }
    let m = 0.5 * (a + b);
    adaptive(f, a, m, acc, depth + 1);
    adaptive(f, m, b, acc, depth + 1);
}

/// `∫_a^b f` for a smooth positive integrand over a range spanning many
/// decades: log-spaced panels, each refined by bisection.
fn integrate_log_spaced(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let panels = ((b / a).log2().ceil() as usize).clamp(1, 256);
    let ratio = (b / a).powf(1.0 / panels as f64);
    let mut acc = CompensatedSum::new();
    let mut lo = a;
    for i in 1..=panels {
        let hi = if i == panels {
            b
        } else {
            a * ratio.powi(i as i32)
        };
        adaptive(&f, lo, hi, &mut acc, 0);
        lo = hi;
    }
    acc.value()
}

fn check_x(x: f64) -> Result<()> {
    if x.is_nan() || x < 2.0 {
        return Err(Error::Domain(format!(
            "logarithmic integral needs x >= 2, got {x}"
        )));
    }
    if !x.is_finite() {
        return Err(Error::Domain("x must be finite".into()));
    }
    Ok(())
}

/// Offset logarithmic integral `Li(x) = ∫_2^x dt / log t`.
pub fn li(x: f64) -> Result<f64> {
    log_integral_k(x, 1)
}

/// `∫_2^x dt / (log t)^k`.
pub fn log_integral_k(x: f64, k: u32) -> Result<f64> {
    check_x(x)?;
    if k == 0 {
        return Err(Error::Domain("integral order k must be >= 1".into()));
    }
    let k = k as i32;
    Ok(integrate_log_spaced(|t| t.ln().powi(-k), 2.0, x))
}

/// `∫_a^b dt / (log t)^k` for `2 <= a <= b`.
pub fn log_integral_between(a: f64, b: f64, k: u32) -> Result<f64> {
    check_x(a)?;
    check_x(b)?;
    if b < a {
        return Err(Error::Domain(format!("empty interval [{a}, {b}]")));
    }
    if k == 0 {
        return Err(Error::Domain("integral order k must be >= 1".into()));
    }
    let k = k as i32;
    Ok(integrate_log_spaced(|t| t.ln().powi(-k), a, b))
}

/// Round half away from zero, as used when printing integer tables.
pub fn round_half_away(x: f64) -> i64 {
    x.round() as i64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prediction {
    pub family: String,
    pub constant: f64,
    pub degree_product: u64,
    pub k: usize,
    pub x: f64,
    pub predicted: f64,
}

/// Predicted `Q(f_1..f_k; x) ≈ C / (deg f_1 ... deg f_k) ∫_2^x dt / (log t)^k`.
pub fn predict(family: &PolyFamily, est: &ConstantEstimate, x: f64) -> Result<Prediction> {
    if est.family != family.describe() || est.k != family.k() {
        return Err(Error::Domain(format!(
            "constant was computed for {} but the prediction asks about {}",
            est.family,
            family.describe()
        )));
    }
    predict_with_constant(family, est.value, x)
}

/// Same as [`predict`] with a constant obtained elsewhere (closed form or literature value).
pub fn predict_with_constant(family: &PolyFamily, constant: f64, x: f64) -> Result<Prediction> {
    let degree_product = family.degree_product();
    let integral = log_integral_k(x, family.k() as u32)?;
    Ok(Prediction {
        family: family.describe(),
        constant,
        degree_product,
        k: family.k(),
        x,
        predicted: constant / degree_product as f64 * integral,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn li_table_values() {
        assert_eq!(li(2.0).unwrap(), 0.0);
        let expect = [177, 1245, 9629, 78627, 664917, 5762208, 50849234];
        for (i, &e) in expect.iter().enumerate() {
            let x = 10f64.powi(i as i32 + 3);
            assert_eq!(round_half_away(li(x).unwrap()), e, "x = {x}");
        }
    }

    #[test]
    fn known_li_digits() {
        // Li(10^6) = li(10^6) - li(2) = 78627.5491594622 - 1.04516378011749
        let v = li(1e6).unwrap();
        assert!((v - 78626.504_0).abs() < 1e-3, "{v}");
    }

    #[test]
    fn domain_errors() {
        assert!(li(1.5).is_err());
        assert!(li(f64::NAN).is_err());
        assert!(log_integral_k(10.0, 0).is_err());
        assert!(log_integral_between(100.0, 10.0, 1).is_err());
    }
}
