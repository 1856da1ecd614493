mod support;

use proptest::prelude::*;
use rand::Rng;
use rsbound::kspace::{
    amplitude_norm, field_at, fourier_to_kspace, fourier_to_position, polarization, read_rsf, read_rsf_from,
    spectral_curl, synthesize_kspace, write_rsf, write_rsf_to, FieldGrid, Grid, HelicityAmplitudePair, PolyGaussian,
    SampledAmplitudes, Space, WaveVector,
};
use rsbound::quadrature::SphericalRule;
use rsbound::{CVec3, Complex64, Error};
use std::f64::consts::PI;

fn dot(a: &CVec3, b: &CVec3) -> Complex64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn conj(a: &CVec3) -> CVec3 {
    a.map(|c| c.conj())
}

fn off_axis() -> impl Strategy<Value = [f64; 3]> {
    (0.05f64..6.0, 1e-3f64..(PI - 1e-3), 0.0f64..(2.0 * PI))
        .prop_map(|(k, th, ph)| [k * th.sin() * ph.cos(), k * th.sin() * ph.sin(), k * th.cos()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn polarization_invariants(k in off_axis()) {
        let e = polarization(k.into()).unwrap().0;
        let kn = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
        prop_assert!((dot(&conj(&e), &e) - 1.0).norm() < 1e-13);
        prop_assert!(dot(&e, &e).norm() < 1e-13);
        let kc = k.map(|c| Complex64::new(c, 0.0));
        prop_assert!(dot(&kc, &e).norm() < 1e-13 * kn);
        // positive helicity: i k × e = k e
        let curl = spectral_curl(k, &e);
        for i in 0..3 {
            prop_assert!((curl[i] - kn * e[i]).norm() < 1e-12 * kn);
        }
    }
}

#[test]
fn on_axis_wavevectors_are_rejected() {
    assert!(matches!(polarization(WaveVector::new(0.0, 0.0, 1.0)), Err(Error::OnAxis { .. })));
    assert!(matches!(polarization(WaveVector::new(1e-14, 0.0, 1.0)), Err(Error::OnAxis { .. })));
    assert!(polarization(WaveVector::new(1e-10, 0.0, 1.0)).is_ok());
}

#[test]
fn synthesized_field_obeys_maxwell_in_wavevector_space() {
    // i ∂ₜF̃ = i k × F̃, by central differences in t
    let mut rng = support::rng();
    let amps = support::random_pair(&mut rng);
    let dt = 1e-5;
    for _ in 0..200 {
        let k = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        let t = rng.gen_range(-2.0..2.0);
        let fp = field_at(&amps, k.into(), t + dt).unwrap();
        let fm = field_at(&amps, k.into(), t - dt).unwrap();
        let f = field_at(&amps, k.into(), t).unwrap();
        let curl = spectral_curl(k, &f);
        let scale = f.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1e-12);
        for i in 0..3 {
            let lhs = Complex64::new(0.0, 1.0) * (fp[i] - fm[i]) / (2.0 * dt);
            assert!((lhs - curl[i]).norm() < 1e-6 * scale * (1.0 + k.iter().map(|c| c.abs()).sum::<f64>()));
        }
        // transversality
        let kc = k.map(|c| Complex64::new(c, 0.0));
        assert!(dot(&kc, &f).norm() < 1e-12 * scale * 10.0);
    }
}

#[test]
fn fourier_round_trip_and_plancherel() {
    let mut rng = support::rng();
    let grid = Grid::cubic(16, 8.0).unwrap();
    let values: Vec<CVec3> = (0..grid.len())
        .map(|_| std::array::from_fn(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
        .collect();
    let field = FieldGrid::new(Space::Position, grid, values).unwrap();
    let k = fourier_to_kspace(&field).unwrap();
    assert!(k.grid.is_fourier_pair(&field.grid));
    assert!((k.norm().unwrap() / field.norm().unwrap() - 1.0).abs() < 1e-12);
    let back = fourier_to_position(&k).unwrap();
    let a: Vec<Complex64> = field.values().iter().flatten().copied().collect();
    let b: Vec<Complex64> = back.values().iter().flatten().copied().collect();
    assert!(support::max_abs_diff(&a, &b) < 1e-13);
}

#[test]
fn amplitude_norm_matches_adaptive_oracle() {
    let amps = HelicityAmplitudePair::plus_only(PolyGaussian::saturating(Complex64::new(1.0, 0.0), 1.0));
    let n = amplitude_norm(&amps, &SphericalRule::default()).unwrap();
    assert!((n / PI.powf(1.5) - 1.0).abs() < 1e-12, "{n}");

    let mut rng = support::rng();
    let pair = support::random_pair(&mut rng);
    let quad = amplitude_norm(&pair, &SphericalRule::default()).unwrap();
    let kmax = pair.k_extent();
    let oracle =
        support::adaptive_ball(&|k| pair.plus.value(k).norm_sqr() + pair.minus.value(k).norm_sqr(), kmax, 1e-9 * quad);
    assert!((quad / oracle - 1.0).abs() < 1e-9, "{quad} vs {oracle}");
}

#[test]
fn sampled_and_closure_synthesis_agree() {
    let mut rng = support::rng();
    let amps = support::random_pair(&mut rng);
    let grid = Grid::cubic(16, 8.0).unwrap().dual();
    let sampled = SampledAmplitudes::sample(&amps, &grid).unwrap().synthesize().unwrap();
    let direct = synthesize_kspace(&amps, &grid, 0.0).unwrap();
    let a: Vec<Complex64> = sampled.values().iter().flatten().copied().collect();
    let b: Vec<Complex64> = direct.values().iter().flatten().copied().collect();
    assert!(support::max_abs_diff(&a, &b) < 1e-14);
}

#[test]
fn rsf_round_trip_is_bit_exact() {
    let mut rng = support::rng();
    let amps = support::random_pair(&mut rng);
    let field = synthesize_kspace(&amps, &Grid::cubic(16, 6.0).unwrap(), 0.3).unwrap();
    let dir = std::env::temp_dir().join(format!("rsbound-kspace-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("field.rsf");
    write_rsf(&field, &path).unwrap();
    let back = read_rsf(&path).unwrap();
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(back.grid, field.grid);
    assert_eq!(back.space, field.space);
    for (x, y) in back.values().iter().flatten().zip(field.values().iter().flatten()) {
        assert_eq!(x.re.to_bits(), y.re.to_bits());
        assert_eq!(x.im.to_bits(), y.im.to_bits());
    }
}

#[test]
fn rsf_rejects_damaged_input() {
    let field = FieldGrid::zeros(Space::Position, Grid::cubic(16, 4.0).unwrap());
    let mut bytes = Vec::new();
    write_rsf_to(&field, &mut bytes).unwrap();
    assert!(read_rsf_from(&bytes[..]).is_ok());
    assert!(matches!(read_rsf_from(&bytes[..bytes.len() - 8]), Err(Error::Format(_))));
    let text = String::from_utf8_lossy(&bytes[..bytes.iter().position(|&b| b == b'\n').unwrap()]).to_string();
    let tampered = text.replace("little-endian", "big-endian");
    let mut bad = tampered.into_bytes();
    bad.extend_from_slice(&bytes[bytes.iter().position(|&b| b == b'\n').unwrap()..]);
    assert!(matches!(read_rsf_from(&bad[..]), Err(Error::Format(_))));
    assert!(matches!(read_rsf(std::path::Path::new("/nonexistent/field.rsf")), Err(Error::Io(_))));
}

#[test]
fn grid_errors() {
    assert!(matches!(Grid::cubic(1, 4.0), Err(Error::Shape(_))));
    assert!(matches!(Grid::cubic(16, -1.0), Err(Error::Shape(_))));
    let g = Grid::cubic(16, 4.0).unwrap();
    assert!(matches!(FieldGrid::new(Space::Position, g, vec![]), Err(Error::Shape(_))));
    assert!(matches!(FieldGrid::zeros(Space::Position, g).norm(), Err(Error::DegenerateNorm)));
}
