use crate::scalar::Real;

const LANCZOS_SHIFT: f64 = 5.242_187_5;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_09,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    0.339_946_499_848_118_886_99e-4,
    0.465_236_289_270_485_756_65e-4,
    -0.983_744_753_048_795_646_77e-4,
    0.158_088_703_224_912_488_84e-3,
    -0.210_264_441_724_104_883_19e-3,
    0.217_439_618_115_212_643_20e-3,
    -0.164_318_106_536_763_890_22e-3,
    0.844_182_239_838_527_432_93e-4,
    -0.261_908_384_015_814_086_70e-4,
    0.368_991_826_595_316_227_04e-5,
];

/// `sqrt(2 pi) * sum`, with `Gamma(x) = t^(x+1/2) e^{-t} * lanczos_sum(x) / x`.
fn lanczos_sum<T: Real>(x: T) -> T {
    let mut a = T::of(LANCZOS[0]);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        a = a + T::of(c) / (x + T::of(k as f64));
    }
    T::of(2.506_628_274_631_000_5) * a
}

/// Gamma function on the real line; `NaN` at the poles.
pub fn gamma<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    let half = T::of(0.5);
    if x < half {
        if x == x.floor() {
            return T::nan();
        }
        let pi = T::PI();
        return pi / ((pi * x).sin() * gamma(T::one() - x));
    }
    let t = x + T::of(LANCZOS_SHIFT);
    // t^(x+1/2) e^{-t} split in two factors to delay overflow.
    let h = ((x + half) * half * t.ln() - half * t).exp();
    h * h * lanczos_sum(x) / x
}

/// `ln |Gamma(x)|`.
pub fn ln_gamma<T: Real>(x: T) -> T {
    let half = T::of(0.5);
    if x < half {
        let pi = T::PI();
        return (pi / (pi * x).sin().abs()).ln() - ln_gamma(T::one() - x);
    }
    let t = x + T::of(LANCZOS_SHIFT);
    (x + half) * t.ln() - t + (lanczos_sum(x) / x).ln()
}

/// `1 / Gamma(x)`, equal to zero at the poles.
pub fn rgamma<T: Real>(x: T) -> T {
    if x <= T::zero() && x == x.floor() {
        return T::zero();
    }
    if x < T::of(0.5) {
        let pi = T::PI();
        return (pi * x).sin() * gamma(T::one() - x) / pi;
    }
    T::one() / gamma(x)
}
