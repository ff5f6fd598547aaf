//! Scalar special functions: normal CDF/quantile and Student t CDF/quantile.
//!
//! The normal CDF uses Cody's rational approximations to erf/erfc (the
//! SPECFUN coefficients), accurate to a few ulps over the whole real line.
//! Quantiles start from closed-form approximations and are polished with
//! Newton steps against the high-accuracy CDFs, so their error is bounded by
//! the CDF error divided by the density at the root.

use crate::error::{Error, Result};

/// P(Z <= x) for standard normal Z.
///
/// Absolute error stays below 1e-15 for all finite `x`.
pub fn std_normal_cdf(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::InvalidParameter {
            name: "x",
            reason: "must not be NaN".into(),
        });
    }
    Ok(phi(x))
}

/// z_p with P(Z <= z_p) = p, for p strictly inside (0, 1).
///
/// The result z satisfies |Phi(z) - p| <= 1e-12 (far tighter in practice).
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter {
            name: "p",
            reason: format!("{p} is outside the open interval (0, 1)"),
        });
    }
    Ok(phi_inv(p))
}

/// Quantile of Student's t with real degrees of freedom `nu > 0`.
///
/// Absolute error is below 1e-9 for nu in [0.5, 1e7] and p in [1e-8, 1-1e-8].
pub fn student_t_quantile(nu: f64, p: f64) -> Result<f64> {
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "nu",
            reason: format!("{nu} is not a positive real"),
        });
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter {
            name: "p",
            reason: format!("{p} is outside the open interval (0, 1)"),
        });
    }
    Ok(student_t_quantile_raw(nu, p))
}

// ---------------------------------------------------------------------------
// Normal distribution
// ---------------------------------------------------------------------------

pub(crate) fn phi(x: f64) -> f64 {
    0.5 * erfc(-x * std::f64::consts::FRAC_1_SQRT_2)
}

/// Standard normal density.
pub(crate) fn norm_pdf(x: f64) -> f64 {
    const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
    (-0.5 * x * x).exp() * INV_SQRT_2PI
}

/// log of the N(mean, 1/precision-free variance) density at x.
pub(crate) fn ln_normal_pdf(x: f64, mean: f64, variance: f64) -> f64 {
    let d = x - mean;
    -0.5 * ((2.0 * std::f64::consts::PI * variance).ln() + d * d / variance)
}

pub(crate) fn phi_inv(p: f64) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0);
    let mut z = acklam_initial(p);
    // Two Newton polishes against the accurate CDF; each step roughly squares
    // the error, so the 1e-9 seed lands at CDF-limited accuracy.
    for _ in 0..2 {
        let err = phi(z) - p;
        let pdf = norm_pdf(z);
        if pdf <= f64::MIN_POSITIVE {
            break;
        }
        z -= err / pdf;
    }
    z
}

/// Acklam's rational approximation to the normal quantile (~1.15e-9 relative).
fn acklam_initial(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    let tail = |q: f64| -> f64 {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    if p < P_LOW {
        tail((-2.0 * p.ln()).sqrt())
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -tail((-2.0 * (1.0 - p).ln()).sqrt())
    }
}

// ---------------------------------------------------------------------------
// erf / erfc (Cody, "Rational Chebyshev approximation for the error
// function", and the SPECFUN implementation)
// ---------------------------------------------------------------------------

const ERF_A: [f64; 5] = [
    3.16112374387056560e+00,
    1.13864154151050156e+02,
    3.77485237685302021e+02,
    3.20937758913846947e+03,
    1.85777706184603153e-01,
];
const ERF_B: [f64; 4] = [
    2.36012909523441209e+01,
    2.44024637934444173e+02,
    1.28261652607737228e+03,
    2.84423683343917062e+03,
];
const ERFC_C: [f64; 9] = [
    5.64188496988670089e-01,
    8.88314979438837594e+00,
    6.61191906371416295e+01,
    2.98635138197400131e+02,
    8.81952221241769090e+02,
    1.71204761263407058e+03,
    2.05107837782607147e+03,
    1.23033935479799725e+03,
    2.15311535474403846e-08,
];
const ERFC_D: [f64; 8] = [
    1.57449261107098347e+01,
    1.17693950891312499e+02,
    5.37181101862009858e+02,
    1.62138957456669019e+03,
    3.29079923573345963e+03,
    4.36261909014324716e+03,
    3.43936767414372164e+03,
    1.23033935480374942e+03,
];
const ERFC_P: [f64; 6] = [
    3.05326634961232344e-01,
    3.60344899949804439e-01,
    1.25781726111229246e-01,
    1.60837851487422766e-02,
    6.58749161529837803e-04,
    1.63153871373020978e-02,
];
const ERFC_Q: [f64; 5] = [
    2.56852019228982242e+00,
    1.87295284992346047e+00,
    5.27905102951428412e-01,
    6.05183413124413191e-02,
    2.33520497626869185e-03,
];
const INV_SQRT_PI: f64 = 5.641_895_835_477_563e-1;

/// erf(x) on |x| <= 0.46875.
fn erf_small(x: f64) -> f64 {
    let ysq = if x.abs() > 1.11e-16 { x * x } else { 0.0 };
    let mut num = ERF_A[4] * ysq;
    let mut den = ysq;
    for i in 0..3 {
        num = (num + ERF_A[i]) * ysq;
        den = (den + ERF_B[i]) * ysq;
    }
    x * (num + ERF_A[3]) / (den + ERF_B[3])
}

/// exp(-y^2) * r computed with the argument split into an exactly
/// representable part plus a small remainder; avoids the rounding of y*y.
fn exp_neg_ysq(y: f64, r: f64) -> f64 {
    let ysq = (y * 16.0).trunc() / 16.0;
    let del = (y - ysq) * (y + ysq);
    (-ysq * ysq).exp() * (-del).exp() * r
}

pub(crate) fn erfc(x: f64) -> f64 {
    const THRESH: f64 = 0.46875;
    // erfc underflows past ~26.54; the symmetric side saturates at 2.
    const XBIG: f64 = 26.543;
    let y = x.abs();
    let result = if y <= THRESH {
        return 1.0 - erf_small(x);
    } else if y <= 4.0 {
        let mut num = ERFC_C[8] * y;
        let mut den = y;
        for i in 0..7 {
            num = (num + ERFC_C[i]) * y;
            den = (den + ERFC_D[i]) * y;
        }
        exp_neg_ysq(y, (num + ERFC_C[7]) / (den + ERFC_D[7]))
    } else if y < XBIG {
        let ysq = 1.0 / (y * y);
        let mut num = ERFC_P[5] * ysq;
        let mut den = ysq;
        for i in 0..4 {
            num = (num + ERFC_P[i]) * ysq;
            den = (den + ERFC_Q[i]) * ysq;
        }
        let r = ysq * (num + ERFC_P[4]) / (den + ERFC_Q[4]);
        exp_neg_ysq(y, (INV_SQRT_PI - r) / y)
    } else {
        0.0
    };
    if x < 0.0 {
        2.0 - result
    } else {
        result
    }
}

// ---------------------------------------------------------------------------
// log-gamma and the regularized incomplete beta (for Student t)
// ---------------------------------------------------------------------------

/// Lanczos approximation (g = 7, 9 terms), relative error ~1e-15 for z > 0.5.
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

pub(crate) fn ln_gamma(z: f64) -> f64 {
    debug_assert!(z > 0.0);
    if z < 0.5 {
        // Reflection keeps the series argument away from its pole.
        let pi = std::f64::consts::PI;
        return (pi / (pi * z).sin()).ln() - ln_gamma(1.0 - z);
    }
    let z = z - 1.0;
    let mut series = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + series.ln()
}

/// Continued fraction for the incomplete beta (modified Lentz).
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 500;
    const EPS: f64 = 1e-16;
    let fpmin = f64::MIN_POSITIVE / EPS;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < fpmin {
        d = fpmin;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let mf = m as f64;
        let m2 = 2.0 * mf;
        let aa = mf * (b - mf) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < fpmin {
            d = fpmin;
        }
        c = 1.0 + aa / c;
        if c.abs() < fpmin {
            c = fpmin;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + mf) * (qab + mf) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < fpmin {
            d = fpmin;
        }
        c = 1.0 + aa / c;
        if c.abs() < fpmin {
            c = fpmin;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() <= EPS {
            break;
        }
    }
    h
}

/// Regularized I_x(a, b). `xc = 1 - x`, with both log terms supplied by the
/// caller so extreme arguments keep full precision.
fn inc_beta_reg(a: f64, b: f64, x: f64, xc: f64, ln_x: f64, ln_xc: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if xc <= 0.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * ln_x + b * ln_xc;
    let front = ln_front.exp();
    // Use the representation whose continued fraction converges fast.
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_cf(a, b, x) / a
    } else {
        1.0 - front * beta_cf(b, a, xc) / b
    }
}

// ---------------------------------------------------------------------------
// Student t
// ---------------------------------------------------------------------------

pub(crate) fn student_t_cdf(t: f64, nu: f64) -> f64 {
    debug_assert!(nu > 0.0);
    if t == 0.0 {
        return 0.5;
    }
    let t2 = t * t;
    let x = nu / (nu + t2);
    let xc = t2 / (nu + t2);
    // ln(x) via ln1p keeps precision when t^2 dominates nu.
    let ln_x = -(t2 / nu).ln_1p();
    let ln_xc = xc.ln();
    // I_x(nu/2, 1/2) at x = nu/(nu + t^2) is the two-sided tail P(|T| > |t|).
    let tail = 0.5 * inc_beta_reg(0.5 * nu, 0.5, x, xc, ln_x, ln_xc);
    if t > 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

pub(crate) fn student_t_pdf(t: f64, nu: f64) -> f64 {
    let ln = ln_gamma(0.5 * (nu + 1.0))
        - ln_gamma(0.5 * nu)
        - 0.5 * (nu * std::f64::consts::PI).ln()
        - 0.5 * (nu + 1.0) * (t * t / nu).ln_1p();
    ln.exp()
}

pub(crate) fn student_t_quantile_raw(nu: f64, p: f64) -> f64 {
    debug_assert!(nu > 0.0 && p > 0.0 && p < 1.0);
    if p == 0.5 {
        return 0.0;
    }
    // Past ~1e5 degrees of freedom the normal-based expansion is exact to
    // well under 1e-12 and sidesteps precision loss in the beta prefactor.
    if nu > 1e5 {
        return t_quantile_large_nu(nu, p);
    }
    // Work in the upper tail; T is symmetric about zero.
    let (pp, sign) = if p >= 0.5 { (p, 1.0) } else { (1.0 - p, -1.0) };

    // Bracket the root: cdf(0) = 0.5 <= pp, expand upward until cdf >= pp.
    let mut lo = 0.0_f64;
    let mut hi = phi_inv(pp).max(1.0);
    if nu > 2.0 {
        hi *= (nu / (nu - 2.0)).sqrt();
    } else {
        hi = hi.max(2.0);
    }
    while student_t_cdf(hi, nu) < pp {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            break;
        }
    }

    // Safeguarded Newton: every step stays inside the current bracket, falling
    // back to bisection whenever Newton would leave it.
    let mut t = 0.5 * (lo + hi);
    for _ in 0..200 {
        let f = student_t_cdf(t, nu) - pp;
        if f > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let d = student_t_pdf(t, nu);
        let mut next = if d > 0.0 { t - f / d } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() <= 1e-13 * (1.0 + t.abs()) {
            t = next;
            break;
        }
        t = next;
    }
    sign * t
}

/// Cornish-Fisher expansion of the t quantile about the normal quantile
/// (Abramowitz & Stegun 26.7.5). Truncation error is O(nu^-5).
fn t_quantile_large_nu(nu: f64, p: f64) -> f64 {
    let z = phi_inv(p);
    let z2 = z * z;
    let g1 = z * (z2 + 1.0) / 4.0;
    let g2 = z * ((5.0 * z2 + 16.0) * z2 + 3.0) / 96.0;
    let g3 = z * (((3.0 * z2 + 19.0) * z2 + 17.0) * z2 - 15.0) / 384.0;
    let g4 = z * ((((79.0 * z2 + 776.0) * z2 + 1482.0) * z2 - 1920.0) * z2 - 945.0) / 92_160.0;
    let inv = 1.0 / nu;
    z + inv * (g1 + inv * (g2 + inv * (g3 + inv * g4)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn normal_cdf_reference_values() {
        // Classical table values, exact to the printed digits.
        assert_eq!(phi(0.0), 0.5);
        assert_abs_diff_eq!(phi(1.0), 0.841_344_746_068_542_9, epsilon = 1e-15);
        assert_abs_diff_eq!(phi(-1.0), 0.158_655_253_931_457_05, epsilon = 1e-15);
        assert_abs_diff_eq!(phi(0.5), 0.691_462_461_274_013_1, epsilon = 1e-15);
        assert_abs_diff_eq!(phi(1.96), 0.975_002_104_851_779_7, epsilon = 1e-15);
        assert_abs_diff_eq!(phi(-1.96), 0.024_997_895_148_220_43, epsilon = 1e-17);
        assert_abs_diff_eq!(phi(3.0), 0.998_650_101_968_369_9, epsilon = 1e-15);
        // Deep tail: relative accuracy matters there.
        let p10 = phi(-10.0);
        assert!((p10 / 7.619_853_024_160_527e-24 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normal_cdf_extremes_and_errors() {
        assert_eq!(phi(f64::INFINITY), 1.0);
        assert_eq!(phi(f64::NEG_INFINITY), 0.0);
        assert_eq!(phi(-40.0), 0.0);
        assert_eq!(phi(40.0), 1.0);
        assert!(std_normal_cdf(f64::NAN).is_err());
        assert_eq!(std_normal_cdf(1.0).unwrap(), phi(1.0));
    }

    #[test]
    fn normal_quantile_round_trip_grid() {
        // p from 0.001 to 0.999: round trip through the CDF within 1e-10.
        let mut p = 0.001;
        while p < 0.9995 {
            let z = std_normal_quantile(p).unwrap();
            let back = phi(z);
            assert!(
                (back - p).abs() <= 1e-12,
                "round trip failed at p={p}: z={z}, back={back}"
            );
            p += 0.001;
        }
    }

    #[test]
    fn normal_quantile_reference_values() {
        assert_abs_diff_eq!(phi_inv(0.5), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(phi_inv(0.975), 1.959_963_984_540_054, epsilon = 1e-12);
        assert_abs_diff_eq!(phi_inv(0.8), 0.841_621_233_572_914_3, epsilon = 1e-12);
        assert_abs_diff_eq!(phi_inv(0.95), 1.644_853_626_951_472_7, epsilon = 1e-12);
        assert_abs_diff_eq!(phi_inv(1e-6), -4.753_424_308_822_899, epsilon = 1e-10);
        assert!(std_normal_quantile(0.0).is_err());
        assert!(std_normal_quantile(1.0).is_err());
        assert!(std_normal_quantile(f64::NAN).is_err());
        assert!(std_normal_quantile(-0.1).is_err());
    }

    #[test]
    fn quantile_symmetry() {
        for &p in &[0.001, 0.023, 0.2, 0.4, 0.49] {
            let lo = phi_inv(p);
            let hi = phi_inv(1.0 - p);
            assert_abs_diff_eq!(lo, -hi, epsilon = 1e-13);
        }
    }

    #[test]
    fn ln_gamma_reference_values() {
        // Integer factorials and the half-integer classics.
        assert_abs_diff_eq!(ln_gamma(1.0), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ln_gamma(2.0), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ln_gamma(5.0), 24.0_f64.ln(), epsilon = 1e-13);
        let ln_sqrt_pi = 0.5 * std::f64::consts::PI.ln();
        assert_abs_diff_eq!(ln_gamma(0.5), ln_sqrt_pi, epsilon = 1e-14);
        // Gamma(1.5) = sqrt(pi)/2.
        assert_abs_diff_eq!(
            ln_gamma(1.5),
            ln_sqrt_pi - std::f64::consts::LN_2,
            epsilon = 1e-14
        );
        // lgamma(100) from the factorial: ln(99!).
        let ln_99_fact: f64 = (2..=99).map(|k| (k as f64).ln()).sum();
        assert!((ln_gamma(100.0) - ln_99_fact).abs() < 1e-10);
    }

    #[test]
    fn t_cdf_closed_form_special_cases() {
        // nu = 1 is Cauchy: F(t) = 1/2 + atan(t)/pi.
        for &t in &[-5.0_f64, -1.0, -0.3, 0.0, 0.7, 2.0, 31.820_515_953_773_26] {
            let exact = 0.5 + t.atan() / std::f64::consts::PI;
            assert_abs_diff_eq!(student_t_cdf(t, 1.0), exact, epsilon = 1e-14);
        }
        // nu = 2: F(t) = 1/2 + t / (2 sqrt(2 + t^2)).
        for &t in &[-4.0_f64, -1.5, 0.5, 3.0] {
            let exact = 0.5 + t / (2.0 * (2.0 + t * t).sqrt());
            assert_abs_diff_eq!(student_t_cdf(t, 2.0), exact, epsilon = 1e-14);
        }
    }

    #[test]
    fn t_quantile_reference_values() {
        // Cauchy 75th percentile is exactly 1.
        assert_abs_diff_eq!(student_t_quantile(1.0, 0.75).unwrap(), 1.0, epsilon = 1e-9);
        // Cauchy: q(p) = tan(pi (p - 1/2)).
        assert_abs_diff_eq!(
            student_t_quantile(1.0, 0.975).unwrap(),
            (std::f64::consts::PI * 0.475).tan(),
            epsilon = 1e-9
        );
        // nu = 2 has the closed form q = (2p - 1) sqrt(2 / (2p(1-p)))... check
        // via the CDF instead to avoid copying a formula wrong.
        for &(nu, p) in &[(2.0, 0.9), (5.0, 0.975), (12.0, 0.6), (0.5, 0.8), (30.0, 0.99)] {
            let q = student_t_quantile(nu, p).unwrap();
            assert_abs_diff_eq!(student_t_cdf(q, nu), p, epsilon = 1e-12);
        }
        // Classical two-sided 5% critical values.
        assert_abs_diff_eq!(
            student_t_quantile(2.0, 0.975).unwrap(),
            4.302_652_729_749_464,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            student_t_quantile(10.0, 0.975).unwrap(),
            2.228_138_851_986_273,
            epsilon = 1e-9
        );
    }

    #[test]
    fn t_quantile_moderate_large_nu() {
        // 486 degrees of freedom: between the normal 1.95996 and the t for
        // any smaller nu; strictly greater than the normal quantile.
        let q = student_t_quantile(486.0, 0.975).unwrap();
        assert!((q - 1.959_96).abs() < 0.01);
        assert!(q > phi_inv(0.975));
        assert_abs_diff_eq!(q, 1.964_857_173_172_463, epsilon = 1e-9);
    }

    #[test]
    fn t_quantile_approaches_normal() {
        // nu = 1e7: within 1e-4 of the normal quantile everywhere tested.
        for &p in &[0.6, 0.8, 0.95, 0.975, 0.999] {
            let tq = student_t_quantile(1e7, p).unwrap();
            let zq = phi_inv(p);
            assert!(
                (tq - zq).abs() <= 1e-4,
                "nu=1e7 p={p}: t={tq} z={zq}"
            );
            // And still on the heavy side of the normal.
            assert!(tq >= zq);
        }
    }

    #[test]
    fn t_quantile_branch_continuity() {
        // The iterative branch (nu <= 1e5) and the expansion branch (nu > 1e5)
        // must agree where they meet.
        for &p in &[0.7, 0.975, 0.999, 0.01] {
            let below = student_t_quantile_raw(1e5, p);
            let above = t_quantile_large_nu(1e5, p);
            assert!(
                (below - above).abs() < 1e-9,
                "branch mismatch at p={p}: {below} vs {above}"
            );
        }
    }

    #[test]
    fn t_quantile_symmetry_and_monotonicity() {
        for &nu in &[0.7, 1.0, 3.0, 17.5, 400.0] {
            assert_eq!(student_t_quantile(nu, 0.5).unwrap(), 0.0);
            for &p in &[0.6, 0.9, 0.99] {
                let hi = student_t_quantile(nu, p).unwrap();
                let lo = student_t_quantile(nu, 1.0 - p).unwrap();
                assert_abs_diff_eq!(lo, -hi, epsilon = 1e-10);
            }
            // Monotone in p.
            let mut prev = f64::NEG_INFINITY;
            for i in 1..40 {
                let q = student_t_quantile(nu, i as f64 / 40.0).unwrap();
                assert!(q > prev || (q == 0.0 && prev == 0.0));
                prev = q;
            }
        }
        // Monotone decreasing in nu on the upper tail.
        let mut prev = f64::INFINITY;
        for &nu in &[1.0, 2.0, 5.0, 20.0, 100.0, 1000.0] {
            let q = student_t_quantile(nu, 0.975).unwrap();
            assert!(q < prev);
            prev = q;
        }
    }

    #[test]
    fn t_quantile_rejects_bad_arguments() {
        assert!(student_t_quantile(0.0, 0.5).is_err());
        assert!(student_t_quantile(-3.0, 0.5).is_err());
        assert!(student_t_quantile(f64::NAN, 0.5).is_err());
        assert!(student_t_quantile(f64::INFINITY, 0.5).is_err());
        assert!(student_t_quantile(5.0, 0.0).is_err());
        assert!(student_t_quantile(5.0, 1.0).is_err());
    }

    #[test]
    fn erfc_complement_identity() {
        for &x in &[-6.0, -2.3, -0.4, 0.0, 0.3, 1.7, 5.5] {
            let s = erfc(x) + erfc(-x);
            assert_abs_diff_eq!(s, 2.0, epsilon = 1e-14);
        }
    }
}
