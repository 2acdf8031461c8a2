use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_6;

/// Taylor coefficients of `1/Γ(1+x)` about `x = 0`.
const RGAMMA1P: [f64; 29] = [
    1.0,
    0.577_215_664_901_532_860_6,
    -0.655_878_071_520_253_881_1,
    -0.042_002_635_034_095_235_53,
    0.166_538_611_382_291_489_5,
    -0.042_197_734_555_544_336_75,
    -0.009_621_971_527_876_973_562,
    0.007_218_943_246_663_099_542,
    -0.001_165_167_591_859_065_112,
    -0.000_215_241_674_114_950_972_8,
    0.000_128_050_282_388_116_186_2,
    -0.000_020_134_854_780_788_238_66,
    -0.000_001_250_493_482_142_670_657,
    0.000_001_133_027_231_981_695_882,
    -2.056_338_416_977_607_103e-7,
    6.116_095_104_481_415_818e-9,
    5.002_007_644_469_222_930e-9,
    -1.181_274_570_487_020_145e-9,
    1.043_426_711_691_100_510e-10,
    7.782_263_439_905_071_254e-12,
    -3.696_805_618_642_205_708e-12,
    5.100_370_287_454_475_979e-13,
    -2.058_326_053_566_506_783e-14,
    -5.348_122_539_423_017_982e-15,
    1.226_778_628_238_260_790e-15,
    -1.181_259_301_697_458_770e-16,
    1.186_692_254_751_600_333e-18,
    1.412_380_655_318_031_782e-18,
    -2.298_745_684_435_370_207e-19,
];

/// `1/Γ(1+x)` for `|x| <= 0.5`.
pub(crate) fn rgamma1p(x: f64) -> f64 {
    RGAMMA1P.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Temme's auxiliary functions for `|mu| <= 0.5`:
/// `gam1 = (1/Γ(1-mu) - 1/Γ(1+mu)) / (2 mu)` and
/// `gam2 = (1/Γ(1-mu) + 1/Γ(1+mu)) / 2`, plus `1/Γ(1+mu)` and `1/Γ(1-mu)`.
pub(crate) fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    let mu2 = mu * mu;
    let mut odd = 0.0;
    let mut even = 0.0;
    for k in (0..RGAMMA1P.len()).rev() {
        if k % 2 == 1 {
            odd = odd * mu2 + RGAMMA1P[k];
        } else {
            even = even * mu2 + RGAMMA1P[k];
        }
    }
    // odd holds sum c_{2j+1} mu^{2j}, even holds sum c_{2j} mu^{2j}
    let gam1 = -odd;
    let gam2 = even;
    let gampl = even + mu * odd;
    let gammi = even - mu * odd;
    (gam1, gam2, gampl, gammi)
}

/// `sin(pi x)` with exact argument reduction.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let n = x.round();
    let s = (PI * (x - n)).sin();
    if n.rem_euclid(2.0) == 1.0 {
        -s
    } else {
        s
    }
}

fn gamma_from_half(x: f64) -> f64 {
    let mut y = x;
    let mut prod = 1.0;
    while y > 1.5 {
        y -= 1.0;
        prod *= y;
    }
    prod / rgamma1p(y - 1.0)
}

/// The gamma function for real arguments.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain {
            func: "gamma",
            arg: x,
            reason: "argument must be finite",
        });
    }
    if x <= 0.0 && x == x.round() {
        return Err(Error::GammaPole(x));
    }
    if x > 171.6 {
        return Err(Error::Overflow {
            func: "gamma",
            arg: x,
        });
    }
    if x >= 0.5 {
        return Ok(gamma_from_half(x));
    }
    let denom = sin_pi(x) * gamma_from_half(1.0 - x);
    let g = PI / denom;
    if g == 0.0 {
        return Err(Error::Underflow {
            func: "gamma",
            arg: x,
        });
    }
    Ok(g)
}

/// Area of the unit sphere in `2 + eps` dimensions, `2 pi^(1+eps/2) / Γ(1+eps/2)`.
pub fn unit_sphere_area(eps: f64) -> f64 {
    let h = 1.0 + 0.5 * eps;
    2.0 * PI.powf(h) / gamma_from_half(h)
}
