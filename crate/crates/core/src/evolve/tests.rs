use proptest::prelude::*;

use super::*;
use crate::doob::RelativizedSpace;
use crate::hkernel::{HyperbolicModel, ModelDim, SpacePoint};
use crate::quad::GaussLegendre;
use crate::rootsys::EpsilonSchedule;
use crate::Error;

fn space(dim: ModelDim) -> RelativizedSpace<f64> {
    let m = match dim {
        ModelDim::H2 => HyperbolicModel::h2(),
        ModelDim::H3 => HyperbolicModel::h3(),
    };
    RelativizedSpace::new(m.unwrap())
}

fn unit(s: &RelativizedSpace<f64>, kind: DataKind) -> InitialData<f64> {
    normalize_unit_mass(s, InitialData::standard(kind, s.dim()).unwrap()).unwrap()
}

fn scattered(count: usize, r_max: f64) -> Vec<SpacePoint<f64>> {
    // deterministic low-discrepancy scatter
    (0..count)
        .map(|i| {
            let a = (i as f64 + 0.5) / count as f64;
            let b = (i as f64 * 0.618_033_988_75).fract();
            let c = (i as f64 * 0.414_213_562_37).fract();
            SpacePoint::new(r_max * a, std::f64::consts::PI * b, std::f64::consts::TAU * c).unwrap()
        })
        .collect()
}

/// `∫ f(y) k(y) dμ(y)` for the off-center bump in origin polar coordinates,
/// independent of the bump-centered tensor rule.
fn origin_polar_integral<K: Fn(&SpacePoint<f64>) -> f64>(f: &InitialData<f64>, k: K) -> f64 {
    let gl = GaussLegendre::<f64>::new(16);
    let rs = gl.composite_points(0.0, 2.0, 40);
    let ths = gl.composite_points(0.0, std::f64::consts::PI / 2.0, 40);
    let mut acc = 0.0;
    for &(r, wr) in &rs {
        let sh = r.sinh();
        for &(th, wt) in &ths {
            let p = SpacePoint::polar(r, th);
            let v = f.eval(ModelDim::H3, &p);
            if v != 0.0 {
                acc += wr * wt * sh * sh * th.sin() * std::f64::consts::TAU * v * k(&p);
            }
        }
    }
    acc
}

#[test]
fn gaussian_moment_mass_in_h3() {
    let s = space(ModelDim::H3);
    let f = InitialData::radial_fn(|r: f64| (-r * r).exp(), f64::INFINITY).unwrap();
    let m = mass_constant_radial(&s, &f).unwrap();
    assert!((m - std::f64::consts::PI.powf(1.5)).abs() < 1e-10, "{m}");
    assert!((m - 5.5683).abs() < 1e-4);
}

#[test]
fn zero_data_has_zero_mass_and_distances() {
    for dim in [ModelDim::H2, ModelDim::H3] {
        let s = space(dim);
        let z = InitialData::zero();
        assert_eq!(mass_constant_radial(&s, &z).unwrap(), 0.0);
        assert_eq!(mass_function(&s, &z, &SpacePoint::on_pole(1.0)).unwrap(), 0.0);
        assert_eq!(l1_distance(&s, &z, 10.0).unwrap(), 0.0);
        assert_eq!(lp_scaled_distance(&s, &z, 10.0, 2.0).unwrap(), 0.0);
        let eps = EpsilonSchedule::default();
        assert_eq!(linf_scaled_distance(&s, &z, 10.0, &eps).unwrap(), 0.0);
    }
}

#[test]
fn normalized_data_has_unit_mass() {
    for dim in [ModelDim::H2, ModelDim::H3] {
        let s = space(dim);
        let f = unit(&s, DataKind::Radial);
        assert!((mass_constant_radial(&s, &f).unwrap() - 1.0).abs() < 1e-13);
        let g = unit(&s, DataKind::OffCenter);
        assert!((total_mass(&s, &g).unwrap() - 1.0).abs() < 1e-13);
    }
}

#[test]
fn radial_mass_function_is_constant() {
    for dim in [ModelDim::H2, ModelDim::H3] {
        let s = space(dim);
        let f = unit(&s, DataKind::Radial);
        let m = mass_constant_radial(&s, &f).unwrap();
        let pts = scattered(5, 5.0);
        for (g, v) in pts.iter().zip(mass_function_many(&s, &f, &pts).unwrap()) {
            assert!((v - m).abs() < 1e-6, "{dim:?} g={g:?}: {v} vs {m}");
        }
    }
}

#[test]
fn bump_mass_at_origin_matches_independent_quadrature() {
    let s = space(ModelDim::H3);
    let f = InitialData::standard(DataKind::OffCenter, ModelDim::H3).unwrap();
    let got = mass_function(&s, &f, &SpacePoint::origin()).unwrap();
    let want = origin_polar_integral(&f, |p| {
        let phi = p.r.max(1e-300) / p.r.sinh().max(1e-300);
        phi * phi
    });
    assert!(((got - want) / want).abs() < 1e-6, "{got} vs {want}");
}

#[test]
fn mass_is_bounded_by_the_harnack_constant() {
    let s = space(ModelDim::H3);
    let f = unit(&s, DataKind::OffCenter);
    let xi = f.support_radius();
    let c = harnack_constant(&s, xi);
    let gl = GaussLegendre::<f64>::new(32);
    let ball = gl.composite(0.0, xi, 4, |r| s.weight(r));
    let bound = f.amplitude() * ball * c;
    let pts = scattered(40, 30.0);
    for v in mass_function_many(&s, &f, &pts).unwrap() {
        assert!(v.abs() <= bound, "{v} > {bound}");
    }
}

#[test]
fn harnack_constant_brackets_phi0_ratios() {
    for dim in [ModelDim::H2, ModelDim::H3] {
        let s = space(dim);
        let c = harnack_constant(&s, 1.0);
        assert!(c > 1.0);
        let m = s.model();
        for g in scattered(30, 20.0) {
            for y in scattered(7, 1.0) {
                let q = m.phi0_fast(m.distance(&g, &y)) / m.phi0_fast(g.r);
                assert!(q <= c * (1.0 + 1e-9) && q * c >= 1.0 - 1e-9, "{q} {c}");
            }
        }
    }
}

#[test]
fn short_time_solution_recovers_the_data() {
    for dim in [ModelDim::H2, ModelDim::H3] {
        let s = space(dim);
        let f = unit(&s, DataKind::Radial);
        let g = SpacePoint::on_pole(1.0);
        let u = evolve(&s, &f, 1e-3, &[g]).unwrap()[0];
        let want = f.eval(dim, &g);
        assert!(((u - want) / want).abs() < 1e-2, "{dim:?}: {u} vs {want}");
    }
}

#[test]
fn long_time_solution_at_origin_is_mass_times_gaussian() {
    let s = space(ModelDim::H3);
    let f = unit(&s, DataKind::Radial);
    let t = 100.0;
    let u = evolve(&s, &f, t, &[SpacePoint::origin()]).unwrap()[0];
    let want = (4.0 * std::f64::consts::PI * t).powf(-1.5);
    assert!(((u - want) / want).abs() < 1e-2, "{u} vs {want}");
}

#[test]
fn constant_data_is_rejected() {
    let s = space(ModelDim::H3);
    let err = evolve(&s, &InitialData::constant(1.0), 1.0, &[SpacePoint::origin()]).unwrap_err();
    assert!(matches!(err, Error::Inadmissible(_)), "{err:?}");
}

#[test]
fn admissibility_examples() {
    for dim in [ModelDim::H2, ModelDim::H3] {
        let s = space(dim);
        let compact = admissibility_check(&s, &InitialData::standard(DataKind::OffCenter, dim).unwrap());
        assert!(compact.admissible && compact.conclusive && compact.value.is_finite());
        let decaying = admissibility_check(&s, &InitialData::standard(DataKind::Decaying, dim).unwrap());
        assert!(decaying.admissible && decaying.value.is_finite(), "{decaying:?}");
        let grow = admissibility_check(&s, &InitialData::exponential(1.0));
        assert!(!grow.admissible && grow.conclusive);
    }
}

#[test]
fn solution_is_a_contraction_and_conserves_mass() {
    let s = space(ModelDim::H3);
    let f = unit(&s, DataKind::Radial);
    let t = 1.0;
    let gl = GaussLegendre::<f64>::new(16);
    let pts = gl.composite_points(0.0, 4.0 + 12.0, 32);
    let gs: Vec<_> = pts.iter().map(|p| SpacePoint::on_pole(p.0)).collect();
    let u = evolve(&s, &f, t, &gs).unwrap();
    let norm: f64 = pts.iter().zip(&u).map(|(p, v)| p.1 * v.abs() * s.weight(p.0)).sum();
    assert!(norm <= 1.0 + 1e-9, "{norm}");
    assert!(norm > 1.0 - 1e-6, "{norm}");
}

#[test]
fn rotating_the_data_rotates_the_solution() {
    let s = space(ModelDim::H3);
    let f = unit(&s, DataKind::OffCenter);
    let (th, ph) = (0.9, 1.3);
    let rotated = f.rotated_center(th, ph).unwrap();
    // about y by th, then about z by ph: takes the pole to (th, ph)
    let rot = |p: &SpacePoint<f64>| {
        let d = p.direction(ModelDim::H3);
        let (st, ct) = th.sin_cos();
        let x1 = ct * d[0] + st * d[2];
        let z1 = -st * d[0] + ct * d[2];
        let (sp, cp) = ph.sin_cos();
        let dir = [cp * x1 - sp * d[1], sp * x1 + cp * d[1], z1];
        SpacePoint::from_direction(ModelDim::H3, p.r, dir)
    };
    assert!(s.model().distance(&rot(&SpacePoint::on_pole(1.0)), &rotated.center()) < 1e-12);
    let pts = vec![SpacePoint::polar(2.0, 0.3), SpacePoint::polar(5.0, 2.0), SpacePoint::new(3.0, 1.0, 2.0).unwrap()];
    let moved: Vec<_> = pts.iter().map(rot).collect();
    let u = evolve(&s, &f, 10.0, &pts).unwrap();
    let v = evolve(&s, &rotated, 10.0, &moved).unwrap();
    for (a, b) in u.iter().zip(&v) {
        assert!(((a - b) / a).abs() < 1e-9, "{a} vs {b}");
    }
}

#[test]
fn axial_solution_is_invariant_about_the_pole() {
    let s = space(ModelDim::H3);
    let f = unit(&s, DataKind::OffCenter);
    let pts: Vec<_> = [0.0, 1.0, 2.5, 4.0]
        .iter()
        .map(|&ph| SpacePoint::new(3.0, 0.8, ph).unwrap())
        .collect();
    let u = evolve(&s, &f, 10.0, &pts).unwrap();
    for v in &u {
        assert!(((v - u[0]) / u[0]).abs() < 1e-9);
    }
}

#[test]
fn proof_error_term_bounds_the_difference() {
    let s = space(ModelDim::H3);
    let m = s.model();
    let f = unit(&s, DataKind::OffCenter);
    let t = 100.0;
    let eps = EpsilonSchedule::default();
    let radii = eps.radii(t).unwrap();
    let f_phi0 = origin_polar_integral(&f, |p| m.phi0_fast(p.r));
    let ev = Evolution::new(&s, &f, t, radii.outer).unwrap();
    for &(r, th) in &[(radii.inner, 0.0), (10.0, 1.0), (20.0, 2.5), (radii.outer, 3.0)] {
        let g = SpacePoint::polar(r, th);
        let mut gap = 0.0_f64;
        for y in scattered(400, f.support_radius()) {
            if f.eval(ModelDim::H3, &y) > 0.0 {
                gap = gap.max(m.ratio_gap(t, &g, &y).unwrap().abs());
            }
        }
        let (_, _, diff) = ev.difference(&g);
        let bound = ev.kernel_at(&g) * f_phi0 * gap;
        assert!(diff.abs() <= 1.05 * bound, "r={r}: {diff} vs {bound}");
    }
}

#[test]
fn kernel_data_distance_matches_gaussian_closed_form() {
    let s = space(ModelDim::H3);
    let t0 = 1.0;
    let g0 = (4.0 * std::f64::consts::PI * t0).powf(-1.5);
    let f = InitialData::radial_fn(move |r: f64| g0 * (-r * r / (4.0 * t0)).exp(), f64::INFINITY).unwrap();
    assert!((mass_constant_radial(&s, &f).unwrap() - 1.0).abs() < 1e-10);
    let t = 10.0;
    let got = l1_distance(&s, &f, t).unwrap();
    let gauss = |s: f64, r: f64| (4.0 * std::f64::consts::PI * s).powf(-1.5) * (-r * r / (4.0 * s)).exp();
    let gl = GaussLegendre::<f64>::new(32);
    let want = gl.composite(0.0, 80.0, 80, |r| {
        (gauss(t + t0, r) - gauss(t, r)).abs() * 4.0 * std::f64::consts::PI * r * r
    });
    assert!(((got - want) / want).abs() < 1e-3, "{got} vs {want}");
}

#[test]
fn lp_norms_approach_l1_as_p_decreases() {
    let s = space(ModelDim::H3);
    let f = unit(&s, DataKind::Radial);
    let field = difference_field(&s, &f, 100.0).unwrap();
    let l1 = field.l1();
    let near = field.lp(1.001);
    let far = field.lp(1.01);
    assert!(((near - l1) / l1).abs() < 0.05, "{near} vs {l1}");
    assert!((near - l1).abs() < (far - l1).abs());
    assert!(lp_scaled_distance(&s, &f, 100.0, 1.0).is_err());
}

#[test]
fn radial_l2_distance_decreases() {
    let s = space(ModelDim::H3);
    let f = unit(&s, DataKind::Radial);
    let v: Vec<f64> = [10.0, 100.0, 1000.0]
        .iter()
        .map(|&t| lp_scaled_distance(&s, &f, t, 2.0).unwrap())
        .collect();
    assert!(v[1] < v[0] && v[2] < v[1], "{v:?}");
}

#[test]
fn radial_linf_distance_is_small_at_large_time() {
    let s = space(ModelDim::H3);
    let f = unit(&s, DataKind::Radial);
    let eps = EpsilonSchedule::default();
    let v = linf_scaled_distance(&s, &f, 1000.0, &eps).unwrap();
    assert!(v < 1e-2, "{v}");
}

#[test]
fn offcenter_l1_decreases_in_h2() {
    let s = space(ModelDim::H2);
    let f = unit(&s, DataKind::OffCenter);
    let a = l1_distance(&s, &f, 10.0).unwrap();
    let b = l1_distance(&s, &f, 100.0).unwrap();
    assert!(b < a && b > 0.0, "{a} {b}");
}

#[test]
fn concentration_examples() {
    let s = space(ModelDim::H3);
    let eps = EpsilonSchedule::default();
    let small = concentration_outside_omega(&s, 0.5, &eps).unwrap();
    assert!(small.degenerate && small.value == 1.0);
    let early = concentration_outside_omega(&s, 1e2, &eps).unwrap();
    let late = concentration_outside_omega(&s, 1e4, &eps).unwrap();
    assert!(late.value < early.value && late.value < 0.1);
    // mass of the 3-D Maxwell law inside ε√t, the outer part is negligible
    let x: f64 = late.radii.inner / (2.0 * 1e2);
    let chi = libm::erf(x) - 2.0 / std::f64::consts::PI.sqrt() * x * (-x * x).exp();
    assert!((late.value - chi).abs() < 1e-10, "{} vs {chi}", late.value);
}

#[test]
fn linf_outside_r_is_the_boundary_gaussian() {
    let s = space(ModelDim::H3);
    let eps = EpsilonSchedule::default();
    for t in [1e2, 1e4] {
        let e: f64 = eps.eval(t);
        let want = (4.0 * std::f64::consts::PI).powf(-1.5) * (-1.0 / (4.0 * e * e)).exp();
        let got = linf_outside_r(&s, t, &eps).unwrap();
        assert!(((got - want) / want).abs() < 1e-8, "{got} vs {want}");
    }
    let v = linf_outside_r(&s, 0.5, &eps).unwrap();
    assert!(v.is_finite() && v > 0.0);
}

#[test]
fn convergence_report_basics() {
    let s = space(ModelDim::H3);
    let f = unit(&s, DataKind::Radial);
    let eps = EpsilonSchedule::default();
    let empty = run_convergence_experiment(&s, &f, &[], &[2.0], &eps).unwrap();
    assert!(empty.is_empty());
    assert!(run_convergence_experiment(&s, &f, &[10.0, 5.0], &[], &eps).is_err());
    let rep = run_convergence_experiment(&s, &f, &[1.0, 10.0, 100.0], &[2.0], &eps).unwrap();
    assert_eq!(rep.len(), 3);
    for row in &rep.rows {
        assert!((row.mass - rep.rows[0].mass).abs() < 1e-12);
        assert_eq!(row.lp.len(), 1);
    }
    assert!(rep.l1_strictly_decreasing());
    let slope = rep.l1_slope().unwrap();
    assert!(slope < 0.0, "{slope}");
}

#[test]
fn general_data_distances_are_unsupported() {
    let s = space(ModelDim::H3);
    let f = unit(&s, DataKind::OffCenter).rotated_center(0.5, 0.0).unwrap();
    assert!(matches!(l1_distance(&s, &f, 10.0), Err(Error::Unsupported(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn gaussian_bump_mass_is_constant(sigma in 0.2_f64..1.0, r in 0.0_f64..8.0, th in 0.0_f64..3.1, h2 in any::<bool>()) {
        let s = space(if h2 { ModelDim::H2 } else { ModelDim::H3 });
        let f = InitialData::radial_gaussian(sigma, 4.0).unwrap();
        let m = mass_constant_radial(&s, &f).unwrap();
        let v = mass_function(&s, &f, &SpacePoint::polar(r, th)).unwrap();
        prop_assert!(((v - m) / m).abs() < 1e-6);
    }

    #[test]
    fn data_vanish_outside_support(r in 0.0_f64..10.0, th in 0.0_f64..3.1) {
        let f = InitialData::standard(DataKind::OffCenter, ModelDim::H3).unwrap();
        let p = SpacePoint::polar(r, th);
        if r > f.support_radius() {
            prop_assert_eq!(f.eval(ModelDim::H3, &p), 0.0);
        }
        prop_assert!(f.eval(ModelDim::H3, &p) >= 0.0);
    }
}
