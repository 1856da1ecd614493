//! Independent oracles and seeded test-field generators shared by the
//! integration tests.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsbound::analytic_fields::SaturatingFieldSpec;
use rsbound::kspace::{HelicityAmplitudePair, Monomial, PolyGaussian};
use rsbound::Complex64;
use std::f64::consts::PI;

pub const SEED: u64 = 0x5eed_2024;

pub fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED)
}

// ---------------------------------------------------------------------------
// adaptive Gauss–Kronrod

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_3,
    0.949_107_912_342_758_524_526_189_684_047_9,
    0.864_864_423_359_769_072_789_712_788_640_9,
    0.741_531_185_599_394_439_863_864_773_280_8,
    0.586_087_235_467_691_130_294_144_845_693_0,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_2,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_5,
    0.140_653_259_715_525_918_745_189_590_510_2,
    0.169_004_726_639_267_902_826_583_426_598_6,
    0.190_350_578_064_785_409_913_256_402_421_0,
    0.204_432_940_075_298_892_414_161_999_234_6,
    0.209_482_141_084_727_828_012_999_174_891_7,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_1,
    0.279_705_391_489_276_667_901_467_771_423_8,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_3,
];

/// One 15-point Kronrod panel: (estimate, error estimate).
fn gk15(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Globally adaptive G7–K15 quadrature on `[lo, hi]` to absolute tolerance
/// `tol`.
pub fn adaptive_gk(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    let mut panels = vec![(lo, hi, gk15(f, lo, hi))];
    for _ in 0..2000 {
        let err: f64 = panels.iter().map(|p| p.2 .1).sum();
        if err <= tol {
            break;
        }
        let worst = (0..panels.len()).max_by(|&a, &b| panels[a].2 .1.total_cmp(&panels[b].2 .1)).unwrap();
        let (a, b, _) = panels.swap_remove(worst);
        let m = 0.5 * (a + b);
        panels.push((a, m, gk15(f, a, m)));
        panels.push((m, b, gk15(f, m, b)));
    }
    let mut acc = 0.0;
    let mut comp = 0.0;
    for p in &panels {
        let y = p.2 .0 - comp;
        let t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    acc
}

/// `∫ d³k f(k)` over the ball `|k| ≤ k_max` by nested adaptive quadrature in
/// spherical coordinates.
pub fn adaptive_ball(f: &dyn Fn([f64; 3]) -> f64, k_max: f64, tol: f64) -> f64 {
    let inner_tol = tol * 1e-2;
    adaptive_gk(
        &|k: f64| {
            k * k
                * adaptive_gk(
                    &|theta: f64| {
                        let (st, ct) = theta.sin_cos();
                        st * adaptive_gk(
                            &|phi: f64| {
                                let (sp, cp) = phi.sin_cos();
                                f([k * st * cp, k * st * sp, k * ct])
                            },
                            0.0,
                            2.0 * PI,
                            inner_tol,
                        )
                    },
                    0.0,
                    PI,
                    inner_tol,
                )
        },
        0.0,
        k_max,
        tol,
    )
}

// ---------------------------------------------------------------------------
// fixed-point Dawson series

const FRAC_BITS: u32 = 480;

fn to_fixed(x: f64) -> BigInt {
    let r = BigRational::from_float(x).expect("finite");
    let scaled = r * BigRational::from_integer(BigInt::one() << FRAC_BITS);
    scaled.round().to_integer()
}

fn from_fixed(v: &BigInt) -> f64 {
    // keep 64 significant fraction bits, then scale in floating point
    let shift = FRAC_BITS - 64;
    let top = v >> shift;
    top.to_f64().unwrap() / 2f64.powi(64)
}

/// `D(w) = Σ (-1)ⁿ 2ⁿ w^{2n+1} / (2n+1)!!` summed in 480-bit fixed point.
pub fn dawson_series_oracle(w: f64) -> f64 {
    let x = to_fixed(w);
    let one = BigInt::one() << FRAC_BITS;
    let x2 = (&x * &x) >> FRAC_BITS;
    let mut term = x.clone();
    let mut total = term.clone();
    let eps = BigInt::one() << 8;
    let mut n: u64 = 0;
    loop {
        n += 1;
        let grown: BigInt = &term * &x2 * 2u32;
        term = -(grown / (BigInt::from(2 * n + 1) * &one));
        total += &term;
        if term.abs() < eps && n as f64 > 2.0 * w * w {
            break;
        }
    }
    from_fixed(&total)
}

// ---------------------------------------------------------------------------
// rational Laguerre sum

/// `Lₙ^α(x) = Σₖ C(n+α, n-k) (-x)ᵏ / k!` with `α` and `x` converted exactly to
/// rationals.
pub fn laguerre_rational_oracle(n: usize, alpha: f64, x: f64) -> f64 {
    let a = BigRational::from_float(alpha).unwrap();
    let xr = BigRational::from_float(x).unwrap();
    let mut total = BigRational::zero();
    for k in 0..=n {
        // C(n+α, n-k) = Π_{j=1}^{n-k} (k + α + j) / j
        let mut binom = BigRational::one();
        for j in 1..=(n - k) {
            let j = BigRational::from_integer(BigInt::from(j));
            binom = binom * (BigRational::from_integer(BigInt::from(k)) + &a + &j) / j;
        }
        let mut pow = BigRational::one();
        let mut fact = BigRational::one();
        for j in 1..=k {
            pow = pow * (-xr.clone());
            fact = fact * BigRational::from_integer(BigInt::from(j));
        }
        total += binom * pow / fact;
    }
    total.to_f64().unwrap()
}

// ---------------------------------------------------------------------------
// test fields

fn random_complex(rng: &mut impl Rng, scale: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

/// `k⊥ · P(k) · e^{-w²k²/2}` with a random complex polynomial of degree ≤ 2
/// and a random width in `[0.6, 1.6]`. The `k⊥` factor makes every such
/// amplitude vanish on the kz-axis, which keeps the position variance finite.
pub fn random_admissible(rng: &mut impl Rng) -> PolyGaussian {
    let width: f64 = rng.gen_range(0.6..1.6);
    let mut terms = vec![Monomial { coeff: Complex64::new(1.0, 0.0) + random_complex(rng, 0.5), powers: [0, 0, 0] }];
    let extra = rng.gen_range(0..4);
    for _ in 0..extra {
        let mut powers = [0u32; 3];
        let degree = rng.gen_range(1..=2);
        for _ in 0..degree {
            powers[rng.gen_range(0..3)] += 1;
        }
        terms.push(Monomial { coeff: random_complex(rng, 1.0) * width.powi(degree as i32), powers });
    }
    PolyGaussian { perp_factor: true, terms, width }
}

/// A pair with a random positive-helicity amplitude and, half of the time, a
/// random negative-helicity one.
pub fn random_pair(rng: &mut impl Rng) -> HelicityAmplitudePair {
    let plus = random_admissible(rng);
    if rng.gen_bool(0.5) {
        HelicityAmplitudePair::new(plus, random_admissible(rng))
    } else {
        HelicityAmplitudePair::plus_only(plus)
    }
}

/// Saturating specs used across the suites.
pub fn saturating_specs() -> Vec<(String, SaturatingFieldSpec)> {
    let mut out = Vec::new();
    for a in [0.5, 1.0, 2.0] {
        let s = SaturatingFieldSpec::simplest(Complex64::new(1.0, 0.0), a).unwrap();
        out.push((format!("simplest a={a}"), s));
    }
    out.push((
        "mixed helicity".into(),
        SaturatingFieldSpec::new(1.0, Complex64::new(0.7, -0.2), Complex64::new(0.1, 0.4), 0.0).unwrap(),
    ));
    out.push((
        "positive helicity".into(),
        SaturatingFieldSpec::new(1.3, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), 0.0).unwrap(),
    ));
    out
}

/// Every field of the shared suite as amplitudes: the saturating specs, the
/// first radial modes and a few random pairs.
pub fn amplitude_suite() -> Vec<(String, HelicityAmplitudePair)> {
    let mut out: Vec<(String, HelicityAmplitudePair)> =
        saturating_specs().into_iter().map(|(name, s)| (name, s.amplitudes())).collect();
    for n in 0..3 {
        out.push((
            format!("radial mode {n}"),
            HelicityAmplitudePair::plus_only(PolyGaussian::radial_mode(n, Complex64::new(1.0, 0.0), 1.0)),
        ));
    }
    let mut r = rng();
    for i in 0..4 {
        out.push((format!("random {i}"), random_pair(&mut r)));
    }
    out
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn relative_l2(got: &[Complex64], want: &[Complex64]) -> f64 {
    let num: f64 = got.iter().zip(want).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = want.iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}
