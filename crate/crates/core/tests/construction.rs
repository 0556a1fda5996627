use ivmap_core::{build_map, eval_chi, lambda_p, orbit_and_t, stefan_map, Scalar};
use proptest::prelude::*;

fn stefan_identities(p: u64) {
    let f = stefan_map(p).unwrap();
    let n = (p as i64 - 1) / 2;
    let start = Scalar::int(n);
    for k in 1..=n {
        let odd = f.iterate(&start, 2 * k as usize - 1).unwrap();
        let even = f.iterate(&start, 2 * k as usize).unwrap();
        assert_eq!(odd, Scalar::int(n - k), "p = {p}, k = {k}");
        assert_eq!(even, Scalar::int(n + k), "p = {p}, k = {k}");
    }
    assert_eq!(f.iterate(&start, p as usize).unwrap(), start);
}

#[test]
fn stefan_orbit_identities() {
    for p in (3..=13).step_by(2) {
        stefan_identities(p);
    }
}

#[test]
fn stefan_shapes() {
    let f3 = stefan_map(3).unwrap();
    assert_eq!(f3.breakpoints(), &[Scalar::int(0), Scalar::int(1), Scalar::int(2)]);
    assert_eq!(f3.values(), &[Scalar::int(2), Scalar::int(0), Scalar::int(1)]);
    assert_eq!(f3.lap_count(), 2);
    let f5 = stefan_map(5).unwrap();
    let ints = |v: &[i64]| v.iter().map(|&x| Scalar::int(x)).collect::<Vec<_>>();
    assert_eq!(f5.breakpoints(), &ints(&[0, 1, 2, 3, 4])[..]);
    assert_eq!(f5.values(), &ints(&[4, 3, 1, 0, 2])[..]);
    assert!(stefan_map(4).is_err());
    assert!(stefan_map(1).is_err());
}

#[test]
fn orbit_and_t_examples() {
    let (orbit, t) = orbit_and_t(3, &Scalar::int(2), 0.0).unwrap();
    assert_eq!(orbit, vec![Scalar::ratio(1, 2), Scalar::zero(), Scalar::one()]);
    assert_eq!(t, Scalar::ratio(3, 4));
    let (orbit, t) = orbit_and_t(5, &Scalar::int(2), 0.0).unwrap();
    let expected = [(3, 8), (1, 4), (1, 2), (0, 1), (1, 1)].map(|(a, b)| Scalar::ratio(a, b));
    assert_eq!(orbit, expected);
    assert_eq!(t, Scalar::ratio(13, 16));
    let l3 = lambda_p(3, 1e-12).unwrap();
    let (_, t) = orbit_and_t(3, &l3, 1e-12).unwrap();
    assert!((t.to_f64() - 1.0 / l3.to_f64()).abs() <= 1e-9);
}

#[test]
fn build_map_examples() {
    let r = |a, b| Scalar::ratio(a, b);
    let f52 = build_map(5, &Scalar::int(2), 0.0).unwrap();
    assert_eq!(f52.map.breakpoints(), &[r(0, 1), r(1, 2), r(5, 8), r(3, 4), r(25, 32), r(13, 16), r(1, 1)]);
    assert_eq!(f52.map.values(), &[r(1, 1), r(0, 1), r(1, 4), r(0, 1), r(1, 16), r(0, 1), r(3, 8)]);
    assert_eq!(f52.k, 1);
    assert_eq!(f52.interval("J_1").unwrap().lo(), &r(1, 2));
    assert_eq!(f52.interval("J_1").unwrap().hi(), &r(3, 4));
    assert_eq!(f52.interval("K").unwrap().lo(), &r(3, 4));
    assert_eq!(f52.interval("K").unwrap().hi(), &r(13, 16));

    let f32 = build_map(3, &Scalar::int(2), 0.0).unwrap();
    assert_eq!(f32.map.breakpoints(), &[r(0, 1), r(1, 2), r(5, 8), r(3, 4), r(1, 1)]);
    assert_eq!(f32.map.values(), &[r(1, 1), r(0, 1), r(1, 4), r(0, 1), r(1, 2)]);
    assert_eq!(f32.k, 0);
    assert_eq!(f32.interval("K").unwrap().lo(), &r(1, 2));
    assert_eq!(f32.interval("K").unwrap().hi(), &r(3, 4));

    let degenerate = build_map(3, &lambda_p(3, 1e-12).unwrap(), 1e-12).unwrap();
    assert_eq!(degenerate.map.piece_count(), 2);
    assert!(degenerate.interval("K").is_none());
}

#[test]
fn below_lambda_p_is_rejected_with_its_value() {
    let err = build_map(3, &Scalar::int(1), 1e-12).unwrap_err().to_string();
    assert!(err.contains("1.618033988749"), "{err}");
    assert!(build_map(5, &Scalar::ratio(3, 2), 1e-12).is_err());
    assert!(build_map(5, &Scalar::ratio(8, 5), 1e-12).is_ok());
}

fn check_identities(p: u64, lambda: &Scalar) {
    let c = build_map(p, lambda, 0.0).unwrap();
    let pu = p as usize;
    let x = &c.orbit;
    let one = Scalar::one();
    let l = lambda;

    // orbit is a genuine cycle and the construction has constant slope
    for i in 0..pu {
        assert_eq!(c.map.eval(&x[i]).unwrap(), x[(i + 1) % pu]);
    }
    assert!(c.map.is_constant_slope(l, 0.0).constant);

    assert_eq!(x[pu - 3], l.recip());
    assert!(x[pu - 2].is_zero());
    assert_eq!(x[pu - 1], one);

    // x_{p-2} < x_{p-4} < ... < x_1 < x_0 < x_2 < ... < x_{p-3} <= t < x_{p-1}
    let mut chain: Vec<&Scalar> = (1..pu - 1).step_by(2).rev().map(|i| &x[i]).collect();
    chain.extend((0..pu - 2).step_by(2).map(|i| &x[i]));
    assert!(chain.windows(2).all(|w| w[0] < w[1]), "ordering p = {p}");
    assert!(x[pu - 3] <= c.t && c.t < x[pu - 1]);

    // differences
    assert_eq!(&x[0] - &x[1], l.pow(p as u32 - 2).recip());
    for i in 0..=pu.saturating_sub(6) {
        let sign = if i % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        let rhs = sign * (l - &one) / l.pow((pu - i - 2) as u32);
        assert_eq!(&x[i + 2] - &x[i], rhs, "p = {p}, i = {i}");
    }
    if p >= 5 {
        let summit = &x[pu - 4];
        assert_eq!(*summit, (l - &one) / (l * l));
        let least_positive = x.iter().filter(|v| v.signum() > 0).min().unwrap();
        assert_eq!(least_positive, summit);
    }

    // t - 1/lambda = chi_p(lambda) / lambda^{p-1}
    let chi = eval_chi(p, l).unwrap();
    assert_eq!(&c.t - &l.recip(), chi / l.pow(p as u32 - 1));
    assert_eq!(c.ell, &c.t - &l.recip());

    // k = floor(lambda ell / (2 x_{p-4})), with x_{p-4} -> 1 for p = 3
    let height = if p == 3 { one.clone() } else { x[pu - 4].clone() };
    let k = (l * &c.ell / (Scalar::int(2) * height)).floor();
    assert_eq!(k, c.k.into());
    let js = c.intervals.iter().filter(|n| n.label.starts_with('J')).count() as u64;
    assert_eq!(js, c.k);
}

#[test]
fn identities_at_lambda_two() {
    for p in (3..=11).step_by(2) {
        check_identities(p, &Scalar::int(2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn identities_at_random_rational_lambda(p in prop::sample::select(vec![3u64, 5, 7, 9, 11]),
                                             num in 1i64..200, den in 1i64..60) {
        let lambda = Scalar::ratio(num, den);
        let lp = lambda_p(p, 1e-12).unwrap().to_f64();
        prop_assume!(lambda.to_f64() > lp + 1e-6 && lambda.to_f64() < 4.0);
        check_identities(p, &lambda);
    }
}

#[test]
fn builds_at_lambda_p_for_every_period() {
    for p in (3..=21).step_by(2) {
        let l = lambda_p(p, 1e-12).unwrap();
        let c = build_map(p, &l, 1e-12).unwrap_or_else(|e| panic!("p = {p}: {e}"));
        assert!((c.t.to_f64() - 1.0 / l.to_f64()).abs() <= 1e-9, "p = {p}");
        assert!(c.intervals.iter().all(|n| n.label.starts_with('I')), "p = {p}");
        assert_eq!(c.map.piece_count(), 2);
        let n = c.orbit.len();
        for i in 0..n {
            let y = c.map.eval(&c.orbit[i]).unwrap().to_f64();
            assert!((y - c.orbit[(i + 1) % n].to_f64()).abs() <= 1e-9);
        }
    }
}
