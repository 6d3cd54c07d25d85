//! Adaptive Gauss-Kronrod (7/15) integration.

use crate::scalar::Real;

pub(crate) const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

pub(crate) const WGK: [f64; 8] = [
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

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct Quad<T> {
    pub value: T,
    pub error: T,
    pub converged: bool,
}

/// 15-point Kronrod nodes and weights on `[a, b]`, nodes increasing.
pub fn kronrod_rule<T: Real>(a: T, b: T) -> ([T; 15], [T; 15]) {
    let half = (b - a) * T::of(0.5);
    let mid = a + half;
    let mut x = [T::zero(); 15];
    let mut w = [T::zero(); 15];
    for i in 0..7 {
        let d = half * T::of(XGK[i]);
        x[i] = mid - d;
        x[14 - i] = mid + d;
        w[i] = half * T::of(WGK[i]);
        w[14 - i] = w[i];
    }
    x[7] = mid;
    w[7] = half * T::of(WGK[7]);
    (x, w)
}

fn gk15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let half = (b - a) * T::of(0.5);
    let mid = a + half;
    let fc = f(mid);
    let mut k = fc * T::of(WGK[7]);
    let mut g = fc * T::of(WG[3]);
    for i in 0..7 {
        let d = half * T::of(XGK[i]);
        let s = f(mid - d) + f(mid + d);
        k = k + s * T::of(WGK[i]);
        if i % 2 == 1 {
            g = g + s * T::of(WG[i / 2]);
        }
    }
    (k * half, ((k - g) * half).abs())
}

/// Integrates `f` over `[a, b]` by bisecting the worst panel until
/// `error <= max(abs_tol, rel_tol * |value|)`.
pub fn integrate<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    b: T,
    abs_tol: T,
    rel_tol: T,
    max_panels: usize,
) -> Quad<T> {
    if a == b {
        return Quad { value: T::zero(), error: T::zero(), converged: true };
    }
    let (v0, e0) = gk15(&mut f, a, b);
    let mut panels = vec![(a, b, v0, e0)];
    let mut value = v0;
    let mut error = e0;
    loop {
        let target = abs_tol.max(rel_tol * value.abs());
        if error <= target || !error.is_finite() {
            break;
        }
        if panels.len() >= max_panels {
            return Quad { value, error, converged: false };
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap_or(std::cmp::Ordering::Equal))
            .expect("non-empty");
        let (pa, pb, pv, pe) = panels.swap_remove(idx);
        let pm = pa + (pb - pa) * T::of(0.5);
        if pm <= pa || pm >= pb {
            panels.push((pa, pb, pv, pe));
            return Quad { value, error, converged: false };
        }
        let (v1, e1) = gk15(&mut f, pa, pm);
        let (v2, e2) = gk15(&mut f, pm, pb);
        panels.push((pa, pm, v1, e1));
        panels.push((pm, pb, v2, e2));
        value = value - pv + v1 + v2;
        error = (error - pe + e1 + e2).max(T::zero());
    }
    Quad { value, error, converged: error.is_finite() }
}

/// Integrates over `[a, inf)` through `x = a + u / (1 - u)`.
pub fn integrate_to_infinity<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    abs_tol: T,
    rel_tol: T,
    max_panels: usize,
) -> Quad<T> {
    let one = T::one();
    integrate(
        |u: T| {
            let d = one - u;
            let v = f(a + u / d) / (d * d);
            if v.is_finite() { v } else { T::zero() }
        },
        T::zero(),
        one,
        abs_tol,
        rel_tol,
        max_panels,
    )
}

/// Integrates over consecutive breakpoints, summing values and errors.
pub fn integrate_pieces<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    breaks: &[T],
    abs_tol: T,
    rel_tol: T,
    max_panels: usize,
) -> Quad<T> {
    let mut out = Quad { value: T::zero(), error: T::zero(), converged: true };
    for w in breaks.windows(2) {
        let q = integrate(&mut f, w[0], w[1], abs_tol, rel_tol, max_panels);
        out.value = out.value + q.value;
        out.error = out.error + q.error;
        out.converged &= q.converged;
    }
    out
}
