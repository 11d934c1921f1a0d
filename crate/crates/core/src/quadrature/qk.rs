//! 15-point Gauss–Kronrod rule on a finite interval, for complex integrands.

// The node and weight tables keep their published 33-digit form; the extra
// digits document the source values even though f64 rounds them.
#![allow(clippy::excessive_precision)]

use num_complex::Complex64;

use super::{cabs, QuadratureError};

/// Abscissae of the 15-point Kronrod rule on [-1, 1]; even-indexed entries
/// are also the 7-point Gauss abscissae.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_20,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];

/// Weights of the embedded 7-point Gauss rule.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_33,
];

/// Number of integrand evaluations per rule application.
pub const QK15_EVALS: u64 = 15;

/// Result of one rule application.
#[derive(Debug, Clone, Copy)]
pub struct RuleResult {
    pub value: Complex64,
    pub abserr: f64,
    /// Integral of |f|, used for roundoff diagnostics.
    pub resabs: f64,
    /// Integral of |f - mean|, used to rescale the raw error.
    pub resasc: f64,
}

/// Standard QUADPACK error rescaling: the raw Kronrod-Gauss difference is
/// sharpened to `resasc * min(1, (200 err / resasc)^1.5)` and floored at the
/// roundoff level of the |f| integral.
fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut err = err.abs();
    if resasc != 0.0 && err != 0.0 {
        let scale = libm::pow(200.0 * err / resasc, 1.5);
        err = if scale < 1.0 { resasc * scale } else { resasc };
    }
    let min_pos = f64::MIN_POSITIVE;
    if resabs > min_pos / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * resabs;
        if min_err > err {
            err = min_err;
        }
    }
    err
}

/// Apply the 15-point Kronrod / 7-point Gauss pair to `f` on `[a, b]`.
pub fn qk15<F>(f: &mut F, a: f64, b: f64) -> Result<RuleResult, QuadratureError>
where
    F: FnMut(f64) -> Complex64,
{
    let centre = 0.5 * (a + b);
    let half_length = 0.5 * (b - a);
    let abs_half = half_length.abs();

    let mut eval = |x: f64| -> Result<Complex64, QuadratureError> {
        let v = f(x);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(QuadratureError::NonFiniteIntegrand)
        }
    };

    let fc = eval(centre)?;
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = cabs(fc) * WGK[7];

    let mut fv1 = [Complex64::new(0.0, 0.0); 7];
    let mut fv2 = [Complex64::new(0.0, 0.0); 7];
    for j in 0..7 {
        let dx = half_length * XGK[j];
        let f1 = eval(centre - dx)?;
        let f2 = eval(centre + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        let fsum = f1 + f2;
        resk += fsum * WGK[j];
        resabs += WGK[j] * (cabs(f1) + cabs(f2));
        if j % 2 == 1 {
            // odd-index Kronrod abscissae are the Gauss points
            resg += fsum * WG[j / 2];
        }
    }

    let reskh = resk * 0.5;
    let mut resasc = WGK[7] * cabs(fc - reskh);
    for j in 0..7 {
        resasc += WGK[j] * (cabs(fv1[j] - reskh) + cabs(fv2[j] - reskh));
    }

    let value = resk * half_length;
    let raw_err = cabs((resk - resg) * half_length);
    let resabs = resabs * abs_half;
    let resasc = resasc * abs_half;
    let abserr = rescale_error(raw_err, resabs, resasc);

    Ok(RuleResult {
        value,
        abserr,
        resabs,
        resasc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_low_degree_polynomials() {
        // Kronrod 15 integrates polynomials up to degree 22 exactly.
        let mut f = |x: f64| Complex64::new(3.0 * x * x, 5.0 * x * x * x * x);
        let r = qk15(&mut f, -1.0, 2.0).unwrap();
        // int_{-1}^{2} 3x^2 = 9; int_{-1}^{2} 5x^4 = x^5 = 32 + 1 = 33
        assert!((r.value.re - 9.0).abs() < 1e-13);
        assert!((r.value.im - 33.0).abs() < 1e-12);
        assert!(r.abserr < 1e-10);
    }

    #[test]
    fn error_estimate_covers_true_error() {
        let mut f = |x: f64| Complex64::new(libm::exp(-x * x), 0.0);
        let r = qk15(&mut f, 0.0, 1.0).unwrap();
        let truth = 0.746_824_132_812_427_3; // erf(1) * sqrt(pi)/2
        assert!((r.value.re - truth).abs() <= r.abserr.max(1e-15));
    }

    #[test]
    fn nan_integrand_is_an_error() {
        let mut f = |x: f64| Complex64::new(if x > 0.5 { f64::NAN } else { 1.0 }, 0.0);
        assert_eq!(
            qk15(&mut f, 0.0, 1.0).unwrap_err(),
            QuadratureError::NonFiniteIntegrand
        );
    }
}
