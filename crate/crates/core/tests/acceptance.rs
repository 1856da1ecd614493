//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one result line.

mod support;

use rand::Rng;
use rayon::prelude::*;
use rsbound::analytic_fields::{explicit_field, saturating_rs_field, simplest_field, SaturatingFieldSpec};
use rsbound::eigensolver::{richardson, solve_radial, RadialProblem};
use rsbound::kspace::{fourier_to_kspace, synthesize_kspace, FieldGrid, Grid, Space};
use rsbound::moments::{
    massless_bound, uncertainty_product_amplitudes, uncertainty_product_grid, uncertainty_product_saturating, EM_BOUND,
};
use rsbound::propagator::{analytic_trajectory, spreading_trajectory};
use rsbound::quadrature::SphericalRule;
use rsbound::specfun::dawson;
use rsbound::Complex64;
use std::time::Instant;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn saturation() -> Outcome {
    let rule = SphericalRule::default();
    let mut details = Vec::new();
    let mut ok = true;
    for a in [0.5, 1.0, 2.0] {
        let spec = SaturatingFieldSpec::simplest(Complex64::new(1.0, 0.0), a).map_err(|e| e.to_string())?;
        let analytic = uncertainty_product_saturating(&spec, &rule).map_err(|e| e.to_string())?;
        let grid = Grid::cubic(64, 16.0 * a).map_err(|e| e.to_string())?;
        let field = FieldGrid::from_fn(Space::Position, grid, |r| simplest_field(r, Complex64::new(1.0, 0.0), a));
        let gridded = uncertainty_product_grid(&field).map_err(|e| e.to_string())?;
        let e_analytic = (analytic.product - EM_BOUND).abs();
        let e_grid = (gridded.product - EM_BOUND).abs();
        let r2 = (analytic.delta_r2 / (2.5 * a * a) - 1.0).abs();
        let k2 = (analytic.delta_k2 * a * a / 2.5 - 1.0).abs();
        ok &= e_analytic <= 1e-6 && e_grid <= 1e-3 && r2 <= 1e-6 && k2 <= 1e-6 && !gridded.is_truncated();
        details.push(format!("a={a}: analytic err {e_analytic:.1e}, grid err {e_grid:.1e}"));
    }
    check(ok, details.join("; "))
}

fn spectrum() -> Outcome {
    let problem = RadialProblem::new(10.0, 2000).map_err(|e| e.to_string())?;
    let spec = solve_radial(&problem, 3).map_err(|e| e.to_string())?;
    let errs: Vec<f64> = spec.eigenvalues.iter().enumerate().map(|(n, g)| (g - (2.5 + 2.0 * n as f64)).abs()).collect();
    let extrapolated = richardson(&problem, 1).map_err(|e| e.to_string())?;
    let e0 = (extrapolated[0] - 2.5).abs();
    check(
        errs.iter().all(|&e| e <= 1e-3) && e0 <= 1e-6,
        format!(
            "max |γₙ - (5/2+2n)| {:.1e}, extrapolated γ₀ err {e0:.1e}",
            errs.iter().fold(0.0_f64, |m, &e| m.max(e))
        ),
    )
}

fn bound_property() -> Outcome {
    let mut rng = support::rng();
    let pairs: Vec<_> = (0..200).map(|_| support::random_pair(&mut rng)).collect();
    let rule = SphericalRule::default();
    let products = pairs
        .par_iter()
        .map(|p| uncertainty_product_amplitudes(p, &rule).map(|r| r.product))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let worst = products.iter().cloned().fold(f64::INFINITY, f64::min);
    let violations = products.iter().filter(|&&p| p < EM_BOUND - 1e-6).count();
    check(violations == 0, format!("200 pairs, smallest product {worst:.9}, violations {violations}"))
}

fn spreading() -> Outcome {
    let spec = SaturatingFieldSpec::simplest(Complex64::new(1.0, 0.0), 1.0).map_err(|e| e.to_string())?;
    let amps = spec.amplitudes();
    let times = [-1.0, -0.5, 0.0, 0.5, 1.0];
    // position extent 20a on 128 points
    let kgrid = Grid::cubic(128, 20.0).map_err(|e| e.to_string())?.dual();
    let grid = spreading_trajectory(&amps, &kgrid, &times).map_err(|e| e.to_string())?;
    let fit = grid.fit().map_err(|e| e.to_string())?;
    let e_grid = (fit.acceleration() / 2.0 - 1.0).abs();
    let fine_times: Vec<f64> = (-4..=4).map(|i| i as f64 * 0.25).collect();
    let analytic = analytic_trajectory(&amps, &SphericalRule::default(), &fine_times).map_err(|e| e.to_string())?;
    let afit = analytic.fit().map_err(|e| e.to_string())?;
    check(
        e_grid <= 0.01 && !grid.truncated && afit.relative_residual <= 1e-6,
        format!(
            "grid 2γ = {:.6} (rel err {e_grid:.1e}, truncated {}), analytic residual {:.1e}",
            fit.acceleration(),
            grid.truncated,
            afit.relative_residual
        ),
    )
}

fn closed_form() -> Outcome {
    let mut rng = support::rng();
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let spec = SaturatingFieldSpec::new(
            rng.gen_range(0.5..2.0),
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            0.0,
        )
        .map_err(|e| e.to_string())?;
        let r = [0; 3].map(|_| rng.gen_range(-3.0..3.0) * spec.a);
        let built = saturating_rs_field(r, &spec).map_err(|e| e.to_string())?;
        let explicit = explicit_field(r, &spec).map_err(|e| e.to_string())?;
        let scale = explicit.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let diff = built.iter().zip(&explicit).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
        worst = worst.max(diff / scale);
    }
    let c = Complex64::new(0.8, -0.6);
    let spec = SaturatingFieldSpec::simplest(c, 1.0).map_err(|e| e.to_string())?;
    let grid = Grid::cubic(64, 16.0).map_err(|e| e.to_string())?;
    let field = FieldGrid::from_fn(Space::Position, grid, |r| simplest_field(r, c, 1.0));
    let transformed = fourier_to_kspace(&field).map_err(|e| e.to_string())?;
    let analytic = synthesize_kspace(&spec.amplitudes(), &transformed.grid, 0.0).map_err(|e| e.to_string())?;
    let flat = |f: &FieldGrid| f.values().iter().flatten().copied().collect::<Vec<_>>();
    let l2 = support::relative_l2(&flat(&transformed), &flat(&analytic));
    check(worst <= 1e-9 && l2 <= 1e-4, format!("pointwise rel err {worst:.1e}, FFT rel L2 {l2:.1e}"))
}

fn massless() -> Outcome {
    let photon = massless_bound(1.0).map_err(|e| e.to_string())?;
    let scalar = massless_bound(0.0).map_err(|e| e.to_string())?;
    check(photon == 2.5 && scalar == 1.5, format!("h=1 → {photon}, h=0 → {scalar}"))
}

fn special_functions() -> Outcome {
    let n = 10_000;
    let points: Vec<f64> = (0..n).map(|i| -10.0 + 20.0 * i as f64 / (n - 1) as f64).collect();
    let errs = points
        .par_iter()
        .map(|&w| dawson(w).map(|d| (d - support::dawson_series_oracle(w)).abs()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let worst = errs.iter().cloned().fold(0.0, f64::max);
    // D' = 1 - 2wD by central differences
    let h = 1e-5;
    let mut residual: f64 = 0.0;
    for &w in points.iter().step_by(10) {
        let d1 = (dawson(w + h).unwrap() - dawson(w - h).unwrap()) / (2.0 * h);
        residual = residual.max((d1 - (1.0 - 2.0 * w * dawson(w).unwrap())).abs());
    }
    check(worst <= 1e-13 && residual <= 1e-8, format!("max |D - oracle| {worst:.1e}, ODE residual {residual:.1e}"))
}

fn plancherel() -> Outcome {
    let rule = SphericalRule::default();
    let mut worst_analytic: f64 = 0.0;
    for (_, spec) in support::saturating_specs() {
        let r = uncertainty_product_saturating(&spec, &rule).map_err(|e| e.to_string())?;
        worst_analytic = worst_analytic.max(r.plancherel_defect());
    }
    for (_, amps) in support::amplitude_suite() {
        let r = uncertainty_product_amplitudes(&amps, &rule).map_err(|e| e.to_string())?;
        worst_analytic = worst_analytic.max(r.plancherel_defect());
    }
    let mut worst_grid: f64 = 0.0;
    let kgrid = Grid::cubic(64, 16.0).map_err(|e| e.to_string())?.dual();
    for (_, amps) in support::amplitude_suite() {
        let field = synthesize_kspace(&amps, &kgrid, 0.0).map_err(|e| e.to_string())?;
        let r = uncertainty_product_grid(&field).map_err(|e| e.to_string())?;
        worst_grid = worst_grid.max(r.plancherel_defect());
    }
    check(
        worst_analytic <= 1e-10 && worst_grid <= 1e-6,
        format!("analytic defect {worst_analytic:.1e}, grid defect {worst_grid:.1e}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 saturation of the bound", saturation),
        ("2 radial spectrum", spectrum),
        ("3 bound property suite", bound_property),
        ("4 spreading law", spreading),
        ("5 closed-form consistency", closed_form),
        ("6 massless bound calculator", massless),
        ("7 special functions", special_functions),
        ("8 plancherel", plancherel),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("acceptance {name}: PASS ({detail}) [{secs:.2} s]"),
            Err(detail) => {
                failed += 1;
                println!("acceptance {name}: FAIL ({detail}) [{secs:.2} s]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
